//! Symbolic subsets of a carrier: finite unions of atoms in a normal form.
//!
//! Atoms are named finite points, chain segments, chain tails, and rational
//! intervals whose bounds may be rational (open/closed), quadratic surd cuts,
//! or unbounded. The atom family is closed under finite union, intersection
//! and difference; complement against the carrier lives on the presentation.

use crate::exact::{rat_int, Cut, Rat, Surd};
use crate::point::PointId;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LoBound {
    Unbounded,
    Closed(Rat),
    Open(Rat),
    Cut(Surd),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum HiBound {
    Unbounded,
    Closed(Rat),
    Open(Rat),
    Cut(Surd),
}

impl LoBound {
    fn value(&self) -> Option<Cut> {
        match self {
            LoBound::Unbounded => None,
            LoBound::Closed(q) | LoBound::Open(q) => Some(Cut::Rat(q.clone())),
            LoBound::Cut(s) => Some(Cut::Surd(s.clone())),
        }
    }

    /// True if `x` satisfies the lower-bound constraint.
    pub fn admits(&self, x: &Rat) -> bool {
        match self {
            LoBound::Unbounded => true,
            LoBound::Closed(q) => x >= q,
            LoBound::Open(q) => x > q,
            LoBound::Cut(s) => s.cmp_rat(x) == Ordering::Less,
        }
    }

    /// Total order by position on the real line; later position = more restrictive.
    pub fn position_cmp(&self, other: &LoBound) -> Ordering {
        match (self.value(), other.value()) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) => a.cmp_cut(&b).then_with(|| {
                // same rational value: Closed starts earlier than Open
                let r = |b: &LoBound| match b {
                    LoBound::Closed(_) => 0u8,
                    LoBound::Open(_) => 1,
                    _ => 0,
                };
                r(self).cmp(&r(other))
            }),
        }
    }
}

impl HiBound {
    fn value(&self) -> Option<Cut> {
        match self {
            HiBound::Unbounded => None,
            HiBound::Closed(q) | HiBound::Open(q) => Some(Cut::Rat(q.clone())),
            HiBound::Cut(s) => Some(Cut::Surd(s.clone())),
        }
    }

    pub fn admits(&self, x: &Rat) -> bool {
        match self {
            HiBound::Unbounded => true,
            HiBound::Closed(q) => x <= q,
            HiBound::Open(q) => x < q,
            HiBound::Cut(s) => s.cmp_rat(x) == Ordering::Greater,
        }
    }

    pub fn position_cmp(&self, other: &HiBound) -> Ordering {
        match (self.value(), other.value()) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Greater,
            (Some(_), None) => Ordering::Less,
            (Some(a), Some(b)) => a.cmp_cut(&b).then_with(|| {
                // same rational value: Open ends earlier than Closed
                let r = |b: &HiBound| match b {
                    HiBound::Open(_) => 0u8,
                    HiBound::Closed(_) => 1,
                    _ => 0,
                };
                r(self).cmp(&r(other))
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: LoBound,
    pub hi: HiBound,
}

impl Interval {
    pub fn new(lo: LoBound, hi: HiBound) -> Self {
        Interval { lo, hi }
    }

    pub fn whole_line() -> Self {
        Interval::new(LoBound::Unbounded, HiBound::Unbounded)
    }

    pub fn singleton(q: Rat) -> Self {
        Interval::new(LoBound::Closed(q.clone()), HiBound::Closed(q))
    }

    pub fn contains(&self, x: &Rat) -> bool {
        self.lo.admits(x) && self.hi.admits(x)
    }

    pub fn is_empty(&self) -> bool {
        match (self.lo.value(), self.hi.value()) {
            (None, _) | (_, None) => false,
            (Some(a), Some(b)) => match a.cmp_cut(&b) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => {
                    !(matches!(self.lo, LoBound::Closed(_)) && matches!(self.hi, HiBound::Closed(_)))
                }
            },
        }
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        let lo = if self.lo.position_cmp(&other.lo) == Ordering::Greater {
            self.lo.clone()
        } else {
            other.lo.clone()
        };
        let hi = if self.hi.position_cmp(&other.hi) == Ordering::Less {
            self.hi.clone()
        } else {
            other.hi.clone()
        };
        Interval { lo, hi }
    }

    /// Can `self ∪ next` be written as one interval, assuming
    /// `self.lo ≤ next.lo` in position order?
    fn fuses_with(&self, next: &Interval) -> bool {
        match (self.hi.value(), next.lo.value()) {
            (None, _) => true,
            (_, None) => true,
            (Some(h), Some(l)) => match h.cmp_cut(&l) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => {
                    if !h.is_rational() {
                        // no rational sits at a surd cut, so the union is gapless
                        true
                    } else {
                        matches!(self.hi, HiBound::Closed(_))
                            || matches!(next.lo, LoBound::Closed(_))
                    }
                }
            },
        }
    }

    /// A representative rational inside a nonempty interval.
    pub fn sample(&self) -> Rat {
        debug_assert!(!self.is_empty());
        match (&self.lo, &self.hi) {
            (LoBound::Closed(q), _) => q.clone(),
            (_, HiBound::Closed(q)) => q.clone(),
            (LoBound::Unbounded, HiBound::Unbounded) => rat_int(0),
            (LoBound::Unbounded, HiBound::Open(q)) => q - rat_int(1),
            (LoBound::Unbounded, HiBound::Cut(s)) => {
                crate::exact::rational_between(&Cut::Rat(&s.a - rat_int(1000)), &Cut::Surd(s.clone()))
            }
            (LoBound::Open(q), HiBound::Unbounded) => q + rat_int(1),
            (LoBound::Cut(s), HiBound::Unbounded) => {
                crate::exact::rational_between(&Cut::Surd(s.clone()), &Cut::Rat(&s.a + rat_int(1000)))
            }
            (lo, hi) => {
                let l = lo.value().unwrap();
                let h = hi.value().unwrap();
                crate::exact::rational_between(&l, &h)
            }
        }
    }
}

/// Canonical union of disjoint, non-adjacent intervals sorted by position.
pub(crate) fn normalize_intervals(mut list: Vec<Interval>) -> Vec<Interval> {
    list.retain(|i| !i.is_empty());
    list.sort_by(|a, b| {
        a.lo.position_cmp(&b.lo)
            .then_with(|| a.hi.position_cmp(&b.hi))
    });
    let mut out: Vec<Interval> = Vec::new();
    for iv in list {
        if let Some(last) = out.last_mut() {
            if last.fuses_with(&iv) {
                if last.hi.position_cmp(&iv.hi) == Ordering::Less {
                    last.hi = iv.hi;
                }
                continue;
            }
        }
        out.push(iv);
    }
    out
}

pub(crate) fn intersect_interval_lists(a: &[Interval], b: &[Interval]) -> Vec<Interval> {
    let mut out = Vec::new();
    for x in a {
        for y in b {
            let i = x.intersect(y);
            if !i.is_empty() {
                out.push(i);
            }
        }
    }
    normalize_intervals(out)
}

/// Complement of a canonical interval list within `universe`.
pub(crate) fn complement_intervals(list: &[Interval], universe: &Interval) -> Vec<Interval> {
    let mut pieces = Vec::new();
    let mut lo = universe.lo.clone();
    for iv in list {
        let cap = match &iv.lo {
            LoBound::Unbounded => None,
            LoBound::Closed(q) => Some(HiBound::Open(q.clone())),
            LoBound::Open(q) => Some(HiBound::Closed(q.clone())),
            LoBound::Cut(s) => Some(HiBound::Cut(s.clone())),
        };
        if let Some(hi) = cap {
            pieces.push(Interval::new(lo.clone(), hi));
        }
        lo = match &iv.hi {
            HiBound::Unbounded => LoBound::Unbounded, // nothing can follow
            HiBound::Closed(q) => LoBound::Open(q.clone()),
            HiBound::Open(q) => LoBound::Closed(q.clone()),
            HiBound::Cut(s) => LoBound::Cut(s.clone()),
        };
        if matches!(iv.hi, HiBound::Unbounded) {
            // consumed the rest of the line
            return normalize_intervals(
                pieces
                    .into_iter()
                    .map(|p| p.intersect(universe))
                    .collect(),
            );
        }
    }
    pieces.push(Interval::new(lo, universe.hi.clone()));
    normalize_intervals(
        pieces
            .into_iter()
            .map(|p| p.intersect(universe))
            .collect(),
    )
}

/// A set of chain indices: finitely many segments plus an optional tail.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub(crate) struct IdxSet {
    pub segs: Vec<(u64, u64)>,
    pub tail: Option<u64>,
}

impl IdxSet {
    pub fn empty() -> Self {
        IdxSet::default()
    }

    pub fn seg(from: u64, to: u64) -> Self {
        IdxSet {
            segs: vec![(from, to)],
            tail: None,
        }
        .normalized()
    }

    pub fn tail_from(from: u64) -> Self {
        IdxSet {
            segs: vec![],
            tail: Some(from),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.segs.is_empty() && self.tail.is_none()
    }

    pub fn is_cofinite_tail(&self) -> bool {
        self.tail.is_some()
    }

    fn normalized(mut self) -> Self {
        self.segs.retain(|&(a, b)| a <= b);
        self.segs.sort_unstable();
        let mut segs: Vec<(u64, u64)> = Vec::new();
        for (a, b) in self.segs {
            if let Some(last) = segs.last_mut() {
                if a <= last.1.saturating_add(1) {
                    last.1 = last.1.max(b);
                    continue;
                }
            }
            segs.push((a, b));
        }
        if let Some(t) = self.tail {
            let mut t = t;
            while let Some(&(a, b)) = segs.last() {
                if b.saturating_add(1) >= t {
                    t = t.min(a);
                    segs.pop();
                } else {
                    break;
                }
            }
            self.tail = Some(t);
        }
        self.segs = segs;
        self
    }

    pub fn union(&self, other: &IdxSet) -> IdxSet {
        let mut segs = self.segs.clone();
        segs.extend(other.segs.iter().cloned());
        let tail = match (self.tail, other.tail) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        IdxSet { segs, tail }.normalized()
    }

    pub fn complement(&self) -> IdxSet {
        // complement within ℕ
        let mut segs = Vec::new();
        let mut tail = None;
        let mut next = 0u64;
        for &(a, b) in &self.segs {
            if a > next {
                segs.push((next, a - 1));
            }
            next = b + 1;
        }
        match self.tail {
            Some(t) => {
                if t > next {
                    segs.push((next, t - 1));
                }
            }
            None => {
                tail = Some(next);
            }
        }
        IdxSet { segs, tail }.normalized()
    }

    pub fn intersect(&self, other: &IdxSet) -> IdxSet {
        self.complement()
            .union(&other.complement())
            .complement()
    }

    pub fn minus(&self, other: &IdxSet) -> IdxSet {
        self.intersect(&other.complement())
    }
}

/// One atom of a definable set; `DefinableSet` keeps them canonical.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    FinPoint(String),
    Seg { cell: String, from: u64, to: u64 },
    Tail { cell: String, from: u64 },
    Ival(Interval),
}

/// Internal component view used by the algebra.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct Components {
    pub pts: BTreeSet<String>,
    pub cells: BTreeMap<String, IdxSet>,
    pub ivals: Vec<Interval>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct DefinableSet {
    atoms: Vec<Atom>,
}

impl DefinableSet {
    pub fn empty() -> Self {
        DefinableSet { atoms: vec![] }
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn from_atoms(atoms: Vec<Atom>) -> Self {
        Self::from_components(Self::components_of(atoms))
    }

    pub fn singleton(p: &PointId) -> Self {
        let atom = match p {
            PointId::Finite(name) => Atom::FinPoint(name.clone()),
            PointId::ChainAt { cell, index } => Atom::Seg {
                cell: cell.clone(),
                from: *index,
                to: *index,
            },
            PointId::Rational(q) => Atom::Ival(Interval::singleton(q.clone())),
        };
        Self::from_atoms(vec![atom])
    }

    pub(crate) fn components(&self) -> Components {
        Self::components_of(self.atoms.clone())
    }

    fn components_of(atoms: Vec<Atom>) -> Components {
        let mut c = Components::default();
        for a in atoms {
            match a {
                Atom::FinPoint(p) => {
                    c.pts.insert(p);
                }
                Atom::Seg { cell, from, to } => {
                    let e = c.cells.entry(cell).or_insert_with(IdxSet::empty);
                    *e = e.union(&IdxSet::seg(from, to));
                }
                Atom::Tail { cell, from } => {
                    let e = c.cells.entry(cell).or_insert_with(IdxSet::empty);
                    *e = e.union(&IdxSet::tail_from(from));
                }
                Atom::Ival(iv) => c.ivals.push(iv),
            }
        }
        c.ivals = normalize_intervals(std::mem::take(&mut c.ivals));
        c.cells.retain(|_, s| !s.is_empty());
        c
    }

    pub(crate) fn from_components(c: Components) -> Self {
        let mut atoms = Vec::new();
        for p in c.pts {
            atoms.push(Atom::FinPoint(p));
        }
        for (cell, idx) in c.cells {
            for (a, b) in &idx.segs {
                atoms.push(Atom::Seg {
                    cell: cell.clone(),
                    from: *a,
                    to: *b,
                });
            }
            if let Some(t) = idx.tail {
                atoms.push(Atom::Tail { cell, from: t });
            }
        }
        for iv in c.ivals {
            atoms.push(Atom::Ival(iv));
        }
        DefinableSet { atoms }
    }

    pub fn union(&self, other: &DefinableSet) -> DefinableSet {
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        Self::from_atoms(atoms)
    }

    pub fn intersect(&self, other: &DefinableSet) -> DefinableSet {
        let a = self.components();
        let b = other.components();
        let mut c = Components {
            pts: a.pts.intersection(&b.pts).cloned().collect(),
            ..Components::default()
        };
        for (cell, ia) in &a.cells {
            if let Some(ib) = b.cells.get(cell) {
                let i = ia.intersect(ib);
                if !i.is_empty() {
                    c.cells.insert(cell.clone(), i);
                }
            }
        }
        c.ivals = intersect_interval_lists(&a.ivals, &b.ivals);
        Self::from_components(c)
    }

    pub fn minus(&self, other: &DefinableSet) -> DefinableSet {
        let a = self.components();
        let b = other.components();
        let mut c = Components {
            pts: a.pts.difference(&b.pts).cloned().collect(),
            ..Components::default()
        };
        for (cell, ia) in &a.cells {
            let i = match b.cells.get(cell) {
                Some(ib) => ia.minus(ib),
                None => ia.clone(),
            };
            if !i.is_empty() {
                c.cells.insert(cell.clone(), i);
            }
        }
        let bc = complement_intervals(&b.ivals, &Interval::whole_line());
        c.ivals = intersect_interval_lists(&a.ivals, &bc);
        Self::from_components(c)
    }

    pub fn is_subset_of(&self, other: &DefinableSet) -> bool {
        self.minus(other).is_empty()
    }

    pub fn contains_point(&self, p: &PointId) -> bool {
        self.atoms.iter().any(|a| match (a, p) {
            (Atom::FinPoint(n), PointId::Finite(m)) => n == m,
            (Atom::Seg { cell, from, to }, PointId::ChainAt { cell: c, index }) => {
                cell == c && from <= index && index <= to
            }
            (Atom::Tail { cell, from }, PointId::ChainAt { cell: c, index }) => {
                cell == c && index >= from
            }
            (Atom::Ival(iv), PointId::Rational(q)) => iv.contains(q),
            _ => false,
        })
    }

    /// Representative points: one per finite point, segment end, tail start,
    /// and a rational per interval atom.
    pub fn sample_points(&self) -> Vec<PointId> {
        let mut out = Vec::new();
        for a in &self.atoms {
            match a {
                Atom::FinPoint(p) => out.push(PointId::Finite(p.clone())),
                Atom::Seg { cell, from, to } => {
                    out.push(PointId::chain_at(cell, *from));
                    if to != from {
                        out.push(PointId::chain_at(cell, *to));
                    }
                }
                Atom::Tail { cell, from } => out.push(PointId::chain_at(cell, *from)),
                Atom::Ival(iv) => out.push(PointId::Rational(iv.sample())),
            }
        }
        out
    }

    /// Largest chain index mentioned by any atom.
    pub fn max_chain_index(&self) -> u64 {
        self.atoms
            .iter()
            .map(|a| match a {
                Atom::Seg { to, .. } => *to,
                Atom::Tail { from, .. } => *from,
                _ => 0,
            })
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::FinPoint(p) => write!(f, "{{{p}}}"),
            Atom::Seg { cell, from, to } if from == to => write!(f, "{{{cell}@{from}}}"),
            Atom::Seg { cell, from, to } => write!(f, "seg({cell},{from},{to})"),
            Atom::Tail { cell, from } => write!(f, "tail({cell},{from})"),
            Atom::Ival(iv) => {
                let (lb, lv) = match &iv.lo {
                    LoBound::Unbounded => ('(', "-inf".to_string()),
                    LoBound::Closed(q) => ('[', q.to_string()),
                    LoBound::Open(q) => ('(', q.to_string()),
                    LoBound::Cut(s) => ('(', s.to_string()),
                };
                let (hb, hv) = match &iv.hi {
                    HiBound::Unbounded => (')', "+inf".to_string()),
                    HiBound::Closed(q) => (']', q.to_string()),
                    HiBound::Open(q) => (')', q.to_string()),
                    HiBound::Cut(s) => (')', s.to_string()),
                };
                write!(f, "{lb}{lv},{hv}{hb}")
            }
        }
    }
}

impl fmt::Display for DefinableSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return write!(f, "empty");
        }
        let parts: Vec<String> = self.atoms.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join(" | "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, SurdOrRat};

    fn iv(lo: LoBound, hi: HiBound) -> Atom {
        Atom::Ival(Interval::new(lo, hi))
    }

    #[test]
    fn adjacent_rational_intervals_merge() {
        // [0,1/2] ∪ (1/2,1] = [0,1]
        let s = DefinableSet::from_atoms(vec![
            iv(LoBound::Closed(rat_int(0)), HiBound::Closed(rat(1, 2))),
            iv(LoBound::Open(rat(1, 2)), HiBound::Closed(rat_int(1))),
        ]);
        assert_eq!(s.atoms().len(), 1);
        assert!(s.contains_point(&PointId::Rational(rat(1, 2))));
    }

    #[test]
    fn open_open_at_same_point_do_not_merge() {
        let s = DefinableSet::from_atoms(vec![
            iv(LoBound::Closed(rat_int(0)), HiBound::Open(rat(1, 2))),
            iv(LoBound::Open(rat(1, 2)), HiBound::Closed(rat_int(1))),
        ]);
        assert_eq!(s.atoms().len(), 2);
        assert!(!s.contains_point(&PointId::Rational(rat(1, 2))));
    }

    #[test]
    fn cut_bounded_intervals_merge_across_the_cut() {
        let c = match Surd::make(rat_int(0), rat(1, 2), 2) {
            SurdOrRat::Irrational(s) => s,
            _ => unreachable!(),
        };
        let s = DefinableSet::from_atoms(vec![
            iv(LoBound::Closed(rat_int(0)), HiBound::Cut(c.clone())),
            iv(LoBound::Cut(c), HiBound::Closed(rat_int(1))),
        ]);
        assert_eq!(s.atoms().len(), 1, "no rational sits at the cut: {s}");
    }

    #[test]
    fn chain_segments_merge_and_subtract() {
        let s = DefinableSet::from_atoms(vec![
            Atom::Seg { cell: "A".into(), from: 0, to: 3 },
            Atom::Seg { cell: "A".into(), from: 4, to: 6 },
            Atom::Tail { cell: "A".into(), from: 9 },
        ]);
        assert_eq!(s.atoms().len(), 2);
        let t = DefinableSet::from_atoms(vec![Atom::Seg { cell: "A".into(), from: 2, to: 10 }]);
        let d = s.minus(&t);
        assert!(d.contains_point(&PointId::chain_at("A", 0)));
        assert!(!d.contains_point(&PointId::chain_at("A", 5)));
        assert!(d.contains_point(&PointId::chain_at("A", 11)));
    }

    #[test]
    fn tail_absorbs_adjacent_segment() {
        let s = DefinableSet::from_atoms(vec![
            Atom::Seg { cell: "A".into(), from: 2, to: 4 },
            Atom::Tail { cell: "A".into(), from: 5 },
        ]);
        assert_eq!(
            s.atoms(),
            &[Atom::Tail { cell: "A".into(), from: 2 }]
        );
    }

    #[test]
    fn empty_interval_removed() {
        let s = DefinableSet::from_atoms(vec![iv(
            LoBound::Open(rat(1, 2)),
            HiBound::Open(rat(1, 2)),
        )]);
        assert!(s.is_empty());
    }
}
