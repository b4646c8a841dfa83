//! Carrier points of a presented space.

use crate::exact::Rat;
use std::cmp::Ordering;
use std::fmt;

/// A concrete point of the carrier.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PointId {
    /// A named finite point.
    Finite(String),
    /// The `index`-th element of a named ω-chain.
    ChainAt { cell: String, index: u64 },
    /// A rational of a rational-chain carrier.
    Rational(Rat),
}

impl PointId {
    pub fn finite(name: &str) -> Self {
        PointId::Finite(name.to_string())
    }

    pub fn chain_at(cell: &str, index: u64) -> Self {
        PointId::ChainAt {
            cell: cell.to_string(),
            index,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            PointId::Finite(_) => 0,
            PointId::ChainAt { .. } => 1,
            PointId::Rational(_) => 2,
        }
    }
}

impl Ord for PointId {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (PointId::Finite(a), PointId::Finite(b)) => a.cmp(b),
            (PointId::ChainAt { cell: c1, index: i1 }, PointId::ChainAt { cell: c2, index: i2 }) => {
                c1.cmp(c2).then(i1.cmp(i2))
            }
            (PointId::Rational(a), PointId::Rational(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for PointId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointId::Finite(name) => write!(f, "{name}"),
            PointId::ChainAt { cell, index } => write!(f, "{cell}@{index}"),
            PointId::Rational(q) => write!(f, "{q}"),
        }
    }
}
