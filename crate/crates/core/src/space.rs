//! Finite presentations of countable T0 spaces and their specialization order.
//!
//! Three families: finite posets, V-spaces (finitely many named ω-chains and
//! finite points related through finitely many declared facts), and rational
//! chains (an interval of ℚ). The declared relations are saturated into a
//! closed form from which every order query is answered exactly:
//!
//! * `pp`    — point ≤ point,
//! * `pc`    — least chain index above a point (p ≤ c@k iff k ≥ pc),
//! * `cp`    — largest chain prefix below a point (c@k ≤ p iff k ≤ cp / all).
//!
//! Cross-chain comparisons factor through finite points, so these three
//! tables determine the full order. Validation rejects non-antisymmetric
//! presentations (the T0 check) and verifies every declared supremum is a
//! least upper bound; chains whose upper-bound set has a least element get
//! that element recorded as their effective supremum.

use crate::error::{Error, ValidationError};
use crate::exact::Rat;
use crate::point::PointId;
use crate::sets::{Atom, DefinableSet, HiBound, Interval, LoBound};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SpaceKind {
    Finite,
    V,
    Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BaseTopology {
    Alexandroff,
    Scott,
    Upper,
}

/// Base topology plus the number of times the irreducible derivative has
/// been applied to it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TopologyDescriptor {
    pub base: BaseTopology,
    pub level: u32,
}

impl fmt::Display for TopologyDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = match self.base {
            BaseTopology::Alexandroff => "alexandroff",
            BaseTopology::Scott => "scott",
            BaseTopology::Upper => "upper",
        };
        if self.level == 0 {
            write!(f, "{b}")
        } else {
            write!(f, "derived({b},{})", self.level)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderRelation {
    PointBelowPoint { lo: String, hi: String },
    PointBelowChainAt { point: String, cell: String, index: u64 },
    ChainAtBelowPoint { cell: String, index: u64, point: String },
    ChainBelowPoint { cell: String, point: String },
}

/// How much of a chain sits below a given point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum ChainBelow {
    Never,
    UpTo(u64),
    All,
}

impl ChainBelow {
    fn admits(&self, k: u64) -> bool {
        match self {
            ChainBelow::Never => false,
            ChainBelow::UpTo(s) => k <= *s,
            ChainBelow::All => true,
        }
    }

    fn join(self, other: ChainBelow) -> ChainBelow {
        match (self, other) {
            (ChainBelow::All, _) | (_, ChainBelow::All) => ChainBelow::All,
            (ChainBelow::UpTo(a), ChainBelow::UpTo(b)) => ChainBelow::UpTo(a.max(b)),
            (ChainBelow::Never, x) | (x, ChainBelow::Never) => x,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub(crate) struct OrderData {
    pub pp: Vec<Vec<bool>>,
    pub pc: Vec<Vec<Option<u64>>>,
    pub cp: Vec<Vec<ChainBelow>>,
    pub eff_sup: Vec<Option<usize>>,
    pub max_rel_index: u64,
}

#[derive(Clone, Debug)]
pub struct SpacePresentation {
    pub name: Option<String>,
    pub kind: SpaceKind,
    pub points: Vec<String>,
    pub cells: Vec<String>,
    pub relations: Vec<OrderRelation>,
    pub sups: Vec<(String, String)>,
    pub interval: Option<Interval>,
    pub topology: TopologyDescriptor,
    pub(crate) ord: OrderData,
}

impl SpacePresentation {
    #[allow(clippy::too_many_arguments)]
    pub fn build(
        name: Option<String>,
        kind: SpaceKind,
        points: Vec<String>,
        cells: Vec<String>,
        relations: Vec<OrderRelation>,
        sups: Vec<(String, String)>,
        interval: Option<Interval>,
        base: BaseTopology,
    ) -> Result<Self, Error> {
        // finite topologies all coincide; normalize to the Alexandroff form
        let base = if kind == SpaceKind::Finite {
            BaseTopology::Alexandroff
        } else {
            base
        };
        let mut space = SpacePresentation {
            name,
            kind,
            points,
            cells,
            relations,
            sups,
            interval,
            topology: TopologyDescriptor { base, level: 0 },
            ord: OrderData::default(),
        };
        space.validate()?;
        Ok(space)
    }

    fn point_index(&self, name: &str) -> Option<usize> {
        self.points.iter().position(|p| p == name)
    }

    fn cell_index(&self, name: &str) -> Option<usize> {
        self.cells.iter().position(|c| c == name)
    }

    pub fn has_cell(&self, name: &str) -> bool {
        self.cell_index(name).is_some()
    }

    fn validate(&mut self) -> Result<(), Error> {
        let mut seen = std::collections::BTreeSet::new();
        for n in self.points.iter().chain(self.cells.iter()) {
            if !seen.insert(n.clone()) {
                return Err(ValidationError::Invalid(format!("duplicate name {n}")).into());
            }
        }
        match self.kind {
            SpaceKind::Finite => {
                if self.points.is_empty() {
                    return Err(ValidationError::Invalid("finite space needs points".into()).into());
                }
                if !self.cells.is_empty() || self.interval.is_some() {
                    return Err(ValidationError::Invalid(
                        "finite space admits no chains or interval".into(),
                    )
                    .into());
                }
            }
            SpaceKind::V => {
                if self.cells.is_empty() {
                    return Err(
                        ValidationError::Invalid("vspace needs at least one chain".into()).into(),
                    );
                }
                if self.interval.is_some() {
                    return Err(
                        ValidationError::Invalid("vspace admits no interval".into()).into()
                    );
                }
            }
            SpaceKind::Rational => {
                if !self.points.is_empty() || !self.cells.is_empty() || !self.relations.is_empty()
                {
                    return Err(ValidationError::Invalid(
                        "rational chain admits no points, chains or relations".into(),
                    )
                    .into());
                }
                let iv = self
                    .interval
                    .clone()
                    .ok_or_else(|| ValidationError::Invalid("rational chain needs an interval".into()))?;
                if iv.is_empty() {
                    return Err(ValidationError::Invalid("empty rational carrier".into()).into());
                }
                if let (LoBound::Closed(a), HiBound::Closed(b)) = (&iv.lo, &iv.hi) {
                    if a == b {
                        return Err(ValidationError::Invalid(
                            "rational carrier needs at least two rationals".into(),
                        )
                        .into());
                    }
                }
                if matches!(iv.lo, LoBound::Cut(_)) || matches!(iv.hi, HiBound::Cut(_)) {
                    return Err(ValidationError::Invalid(
                        "carrier endpoints must be rational or unbounded".into(),
                    )
                    .into());
                }
            }
        }
        self.saturate_order()?;
        self.check_antisymmetry()?;
        self.resolve_sups()?;
        Ok(())
    }

    #[allow(clippy::needless_range_loop)]
    fn saturate_order(&mut self) -> Result<(), Error> {
        let np = self.points.len();
        let nc = self.cells.len();
        let mut pp = vec![vec![false; np]; np];
        let mut pc = vec![vec![None::<u64>; nc]; np];
        let mut cp = vec![vec![ChainBelow::Never; np]; nc];
        let mut max_idx = 0u64;
        for (i, row) in pp.iter_mut().enumerate() {
            row[i] = true;
        }
        for rel in &self.relations {
            match rel {
                OrderRelation::PointBelowPoint { lo, hi } => {
                    let i = self
                        .point_index(lo)
                        .ok_or_else(|| ValidationError::UnknownCell(lo.clone()))?;
                    let j = self
                        .point_index(hi)
                        .ok_or_else(|| ValidationError::UnknownCell(hi.clone()))?;
                    pp[i][j] = true;
                }
                OrderRelation::PointBelowChainAt { point, cell, index } => {
                    let i = self
                        .point_index(point)
                        .ok_or_else(|| ValidationError::UnknownCell(point.clone()))?;
                    let c = self
                        .cell_index(cell)
                        .ok_or_else(|| ValidationError::UnknownCell(cell.clone()))?;
                    pc[i][c] = Some(pc[i][c].map_or(*index, |t| t.min(*index)));
                    max_idx = max_idx.max(*index);
                }
                OrderRelation::ChainAtBelowPoint { cell, index, point } => {
                    let c = self
                        .cell_index(cell)
                        .ok_or_else(|| ValidationError::UnknownCell(cell.clone()))?;
                    let i = self
                        .point_index(point)
                        .ok_or_else(|| ValidationError::UnknownCell(point.clone()))?;
                    cp[c][i] = cp[c][i].join(ChainBelow::UpTo(*index));
                    max_idx = max_idx.max(*index);
                }
                OrderRelation::ChainBelowPoint { cell, point } => {
                    let c = self
                        .cell_index(cell)
                        .ok_or_else(|| ValidationError::UnknownCell(cell.clone()))?;
                    let i = self
                        .point_index(point)
                        .ok_or_else(|| ValidationError::UnknownCell(point.clone()))?;
                    cp[c][i] = ChainBelow::All;
                }
            }
        }
        // saturate: all order paths factor through finite points
        loop {
            let mut changed = false;
            for i in 0..np {
                for j in 0..np {
                    if !pp[i][j] {
                        continue;
                    }
                    // transitivity through pp
                    for k in 0..np {
                        if pp[j][k] && !pp[i][k] {
                            pp[i][k] = true;
                            changed = true;
                        }
                    }
                    // i ≤ j ≤ c@t
                    for c in 0..nc {
                        if let Some(t) = pc[j][c] {
                            if pc[i][c].is_none_or(|s| s > t) {
                                pc[i][c] = Some(t);
                                changed = true;
                            }
                        }
                    }
                    // c@k ≤ i ≤ j
                    for c in 0..nc {
                        let joined = cp[c][j].join(cp[c][i]);
                        if joined != cp[c][j] {
                            cp[c][j] = joined;
                            changed = true;
                        }
                    }
                }
            }
            // i ≤ c@t and c@s ≤ j with t ≤ s gives i ≤ j
            for i in 0..np {
                for c in 0..nc {
                    if let Some(t) = pc[i][c] {
                        for j in 0..np {
                            let ok = match cp[c][j] {
                                ChainBelow::All => true,
                                ChainBelow::UpTo(s) => t <= s,
                                ChainBelow::Never => false,
                            };
                            if ok && !pp[i][j] {
                                pp[i][j] = true;
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        self.ord = OrderData {
            pp,
            pc,
            cp,
            eff_sup: vec![None; nc],
            max_rel_index: max_idx,
        };
        Ok(())
    }

    fn check_antisymmetry(&self) -> Result<(), Error> {
        let np = self.points.len();
        for i in 0..np {
            for j in 0..np {
                if i != j && self.ord.pp[i][j] && self.ord.pp[j][i] {
                    return Err(ValidationError::NotAntisymmetric(
                        self.points[i].clone(),
                        self.points[j].clone(),
                    )
                    .into());
                }
            }
        }
        // a point both above a chain prefix and below a chain element of the
        // same cell collapses chain elements
        for (c, cell) in self.cells.iter().enumerate() {
            for (i, p) in self.points.iter().enumerate() {
                if let Some(t) = self.ord.pc[i][c] {
                    let collapse = match self.ord.cp[c][i] {
                        ChainBelow::All => true,
                        ChainBelow::UpTo(s) => s >= t,
                        ChainBelow::Never => false,
                    };
                    if collapse {
                        return Err(ValidationError::NotAntisymmetric(
                            p.clone(),
                            format!("{cell}@{t}"),
                        )
                        .into());
                    }
                }
            }
        }
        Ok(())
    }

    /// Finite-point upper bounds of a whole chain.
    pub(crate) fn chain_point_ubs(&self, c: usize) -> Vec<usize> {
        (0..self.points.len())
            .filter(|&i| self.ord.cp[c][i] == ChainBelow::All)
            .collect()
    }

    /// Chain-tail upper bounds of chain `c`: for each other cell, the least
    /// index from which its elements dominate all of chain `c`.
    pub(crate) fn chain_tail_ubs(&self, c: usize) -> Vec<(usize, u64)> {
        let mut out = Vec::new();
        for c2 in 0..self.cells.len() {
            if c2 == c {
                continue;
            }
            let mut best: Option<u64> = None;
            for &p in &self.chain_point_ubs(c) {
                if let Some(t) = self.ord.pc[p][c2] {
                    best = Some(best.map_or(t, |b| b.min(t)));
                }
            }
            if let Some(t) = best {
                out.push((c2, t));
            }
        }
        out
    }

    fn resolve_sups(&mut self) -> Result<(), Error> {
        let mut declared: BTreeMap<usize, usize> = BTreeMap::new();
        for (cell, pt) in &self.sups {
            let c = self
                .cell_index(cell)
                .ok_or_else(|| ValidationError::UnknownCell(cell.clone()))?;
            let p = self
                .point_index(pt)
                .ok_or_else(|| ValidationError::UnknownCell(pt.clone()))?;
            declared.insert(c, p);
        }
        for c in 0..self.cells.len() {
            let ubs = self.chain_point_ubs(c);
            let tail_ubs = self.chain_tail_ubs(c);
            let least = ubs.iter().copied().find(|&cand| {
                ubs.iter().all(|&u| self.ord.pp[cand][u])
                    && tail_ubs
                        .iter()
                        .all(|&(c2, t)| self.ord.pc[cand][c2].is_some_and(|s| s <= t))
            });
            if let Some(&decl) = declared.get(&c) {
                if self.ord.cp[c][decl] != ChainBelow::All {
                    return Err(ValidationError::SupNotLub {
                        chain: self.cells[c].clone(),
                        declared: self.points[decl].clone(),
                        reason: "not an upper bound of the chain".into(),
                    }
                    .into());
                }
                match least {
                    Some(l) if l == decl => {}
                    Some(l) => {
                        return Err(ValidationError::SupNotLub {
                            chain: self.cells[c].clone(),
                            declared: self.points[decl].clone(),
                            reason: format!("{} is a smaller upper bound", self.points[l]),
                        }
                        .into());
                    }
                    None => {
                        let smaller = ubs
                            .iter()
                            .find(|&&u| u != decl && !self.ord.pp[decl][u])
                            .map(|&u| self.points[u].clone())
                            .unwrap_or_else(|| "a chain tail".into());
                        return Err(ValidationError::SupNotLub {
                            chain: self.cells[c].clone(),
                            declared: self.points[decl].clone(),
                            reason: format!("incomparable upper bound {smaller}"),
                        }
                        .into());
                    }
                }
            }
            self.ord.eff_sup[c] = least;
        }
        Ok(())
    }

    /// The closed point-order table of a finite presentation.
    pub(crate) fn finite_leq(&self) -> &Vec<Vec<bool>> {
        &self.ord.pp
    }

    /// The effective supremum of a chain (declared or derived least upper bound).
    pub fn chain_sup(&self, cell: &str) -> Option<PointId> {
        let c = self.cell_index(cell)?;
        self.ord.eff_sup[c].map(|p| PointId::Finite(self.points[p].clone()))
    }

    pub fn point_in_carrier(&self, p: &PointId) -> bool {
        match (self.kind, p) {
            (SpaceKind::Finite, PointId::Finite(n)) | (SpaceKind::V, PointId::Finite(n)) => {
                self.point_index(n).is_some()
            }
            (SpaceKind::V, PointId::ChainAt { cell, .. }) => self.cell_index(cell).is_some(),
            (SpaceKind::Rational, PointId::Rational(q)) => {
                self.interval.as_ref().is_some_and(|iv| iv.contains(q))
            }
            _ => false,
        }
    }

    pub fn check_point(&self, p: &PointId) -> Result<(), Error> {
        if self.point_in_carrier(p) {
            Ok(())
        } else {
            Err(Error::PointNotInCarrier(p.to_string()))
        }
    }

    pub fn whole_space(&self) -> DefinableSet {
        let mut atoms: Vec<Atom> = self
            .points
            .iter()
            .map(|p| Atom::FinPoint(p.clone()))
            .collect();
        for c in &self.cells {
            atoms.push(Atom::Tail {
                cell: c.clone(),
                from: 0,
            });
        }
        if let Some(iv) = &self.interval {
            atoms.push(Atom::Ival(iv.clone()));
        }
        DefinableSet::from_atoms(atoms)
    }

    pub fn complement(&self, e: &DefinableSet) -> DefinableSet {
        self.whole_space().minus(e)
    }

    /// Clip a raw set to the carrier and reject atoms of the wrong family.
    pub fn normalize_set(&self, e: &DefinableSet) -> Result<DefinableSet, Error> {
        for a in e.atoms() {
            match (self.kind, a) {
                (SpaceKind::Finite, Atom::FinPoint(p)) | (SpaceKind::V, Atom::FinPoint(p)) => {
                    if self.point_index(p).is_none() {
                        return Err(Error::PointNotInCarrier(p.clone()));
                    }
                }
                (SpaceKind::V, Atom::Seg { cell, .. }) | (SpaceKind::V, Atom::Tail { cell, .. }) => {
                    if self.cell_index(cell).is_none() {
                        return Err(Error::PointNotInCarrier(cell.clone()));
                    }
                }
                (SpaceKind::Rational, Atom::Ival(_)) => {}
                _ => {
                    return Err(Error::PointNotInCarrier(a.to_string()));
                }
            }
        }
        Ok(e.intersect(&self.whole_space()))
    }

    /// Specialization order between two carrier points.
    pub fn leq(&self, x: &PointId, y: &PointId) -> Result<bool, Error> {
        self.check_point(x)?;
        self.check_point(y)?;
        Ok(self.leq_unchecked(x, y))
    }

    pub(crate) fn leq_unchecked(&self, x: &PointId, y: &PointId) -> bool {
        match (x, y) {
            (PointId::Rational(a), PointId::Rational(b)) => a <= b,
            (PointId::Finite(a), PointId::Finite(b)) => {
                let (i, j) = (self.point_index(a).unwrap(), self.point_index(b).unwrap());
                self.ord.pp[i][j]
            }
            (PointId::Finite(a), PointId::ChainAt { cell, index }) => {
                let i = self.point_index(a).unwrap();
                let c = self.cell_index(cell).unwrap();
                self.ord.pc[i][c].is_some_and(|t| *index >= t)
            }
            (PointId::ChainAt { cell, index }, PointId::Finite(b)) => {
                let c = self.cell_index(cell).unwrap();
                let j = self.point_index(b).unwrap();
                self.ord.cp[c][j].admits(*index)
            }
            (
                PointId::ChainAt { cell: c1, index: k1 },
                PointId::ChainAt { cell: c2, index: k2 },
            ) => {
                if c1 == c2 {
                    return k1 <= k2;
                }
                let c = self.cell_index(c1).unwrap();
                let c2 = self.cell_index(c2).unwrap();
                (0..self.points.len()).any(|p| {
                    self.ord.cp[c][p].admits(*k1)
                        && self.ord.pc[p][c2].is_some_and(|t| *k2 >= t)
                })
            }
            _ => false,
        }
    }

    pub(crate) fn up_point(&self, p: &PointId) -> DefinableSet {
        let mut atoms = Vec::new();
        match p {
            PointId::Finite(n) => {
                let i = self.point_index(n).unwrap();
                for (j, q) in self.points.iter().enumerate() {
                    if self.ord.pp[i][j] {
                        atoms.push(Atom::FinPoint(q.clone()));
                    }
                }
                for (c, cell) in self.cells.iter().enumerate() {
                    if let Some(t) = self.ord.pc[i][c] {
                        atoms.push(Atom::Tail {
                            cell: cell.clone(),
                            from: t,
                        });
                    }
                }
            }
            PointId::ChainAt { cell, index } => {
                let c = self.cell_index(cell).unwrap();
                atoms.push(Atom::Tail {
                    cell: cell.clone(),
                    from: *index,
                });
                for (j, q) in self.points.iter().enumerate() {
                    if self.ord.cp[c][j].admits(*index) {
                        atoms.push(Atom::FinPoint(q.clone()));
                    }
                }
                for (c2, cell2) in self.cells.iter().enumerate() {
                    if c2 == c {
                        continue;
                    }
                    let mut best: Option<u64> = None;
                    for j in 0..self.points.len() {
                        if self.ord.cp[c][j].admits(*index) {
                            if let Some(t) = self.ord.pc[j][c2] {
                                best = Some(best.map_or(t, |b| b.min(t)));
                            }
                        }
                    }
                    if let Some(t) = best {
                        atoms.push(Atom::Tail {
                            cell: cell2.clone(),
                            from: t,
                        });
                    }
                }
            }
            PointId::Rational(q) => {
                let iv = self.interval.clone().unwrap();
                atoms.push(Atom::Ival(
                    Interval::new(LoBound::Closed(q.clone()), iv.hi.clone()).intersect(&iv),
                ));
            }
        }
        DefinableSet::from_atoms(atoms)
    }

    pub(crate) fn down_point(&self, p: &PointId) -> DefinableSet {
        let mut atoms = Vec::new();
        match p {
            PointId::Finite(n) => {
                let i = self.point_index(n).unwrap();
                for (j, q) in self.points.iter().enumerate() {
                    if self.ord.pp[j][i] {
                        atoms.push(Atom::FinPoint(q.clone()));
                    }
                }
                for (c, cell) in self.cells.iter().enumerate() {
                    match self.ord.cp[c][i] {
                        ChainBelow::Never => {}
                        ChainBelow::UpTo(s) => atoms.push(Atom::Seg {
                            cell: cell.clone(),
                            from: 0,
                            to: s,
                        }),
                        ChainBelow::All => atoms.push(Atom::Tail {
                            cell: cell.clone(),
                            from: 0,
                        }),
                    }
                }
            }
            PointId::ChainAt { cell, index } => {
                let c = self.cell_index(cell).unwrap();
                atoms.push(Atom::Seg {
                    cell: cell.clone(),
                    from: 0,
                    to: *index,
                });
                for (j, q) in self.points.iter().enumerate() {
                    if self.ord.pc[j][c].is_some_and(|t| *index >= t) {
                        atoms.push(Atom::FinPoint(q.clone()));
                    }
                }
                for (c2, cell2) in self.cells.iter().enumerate() {
                    if c2 == c {
                        continue;
                    }
                    let mut acc = ChainBelow::Never;
                    for j in 0..self.points.len() {
                        if self.ord.pc[j][c].is_some_and(|t| *index >= t) {
                            acc = acc.join(self.ord.cp[c2][j]);
                        }
                    }
                    match acc {
                        ChainBelow::Never => {}
                        ChainBelow::UpTo(s) => atoms.push(Atom::Seg {
                            cell: cell2.clone(),
                            from: 0,
                            to: s,
                        }),
                        ChainBelow::All => atoms.push(Atom::Tail {
                            cell: cell2.clone(),
                            from: 0,
                        }),
                    }
                }
            }
            PointId::Rational(q) => {
                let iv = self.interval.clone().unwrap();
                atoms.push(Atom::Ival(
                    Interval::new(iv.lo.clone(), HiBound::Closed(q.clone())).intersect(&iv),
                ));
            }
        }
        DefinableSet::from_atoms(atoms)
    }

    /// Everything below some element of the chain.
    pub(crate) fn down_of_whole_chain(&self, cell: &str) -> DefinableSet {
        let c = self.cell_index(cell).unwrap();
        let mut atoms = vec![Atom::Tail {
            cell: cell.to_string(),
            from: 0,
        }];
        for (j, q) in self.points.iter().enumerate() {
            if self.ord.pc[j][c].is_some() {
                atoms.push(Atom::FinPoint(q.clone()));
            }
        }
        for (c2, cell2) in self.cells.iter().enumerate() {
            if c2 == c {
                continue;
            }
            let mut acc = ChainBelow::Never;
            for j in 0..self.points.len() {
                if self.ord.pc[j][c].is_some() {
                    acc = acc.join(self.ord.cp[c2][j]);
                }
            }
            match acc {
                ChainBelow::Never => {}
                ChainBelow::UpTo(s) => atoms.push(Atom::Seg {
                    cell: cell2.clone(),
                    from: 0,
                    to: s,
                }),
                ChainBelow::All => atoms.push(Atom::Tail {
                    cell: cell2.clone(),
                    from: 0,
                }),
            }
        }
        DefinableSet::from_atoms(atoms)
    }

    /// Upper bounds of a whole chain, as a definable set.
    pub(crate) fn chain_ub_set(&self, cell: &str) -> DefinableSet {
        let c = self.cell_index(cell).unwrap();
        let mut atoms = Vec::new();
        for &p in &self.chain_point_ubs(c) {
            atoms.push(Atom::FinPoint(self.points[p].clone()));
        }
        for (c2, t) in self.chain_tail_ubs(c) {
            atoms.push(Atom::Tail {
                cell: self.cells[c2].clone(),
                from: t,
            });
        }
        DefinableSet::from_atoms(atoms)
    }

    /// Upward closure of a definable set.
    pub fn up_set(&self, e: &DefinableSet) -> DefinableSet {
        let mut acc = e.clone();
        for a in e.atoms() {
            let up = match a {
                Atom::FinPoint(p) => self.up_point(&PointId::Finite(p.clone())),
                Atom::Seg { cell, from, .. } | Atom::Tail { cell, from } => {
                    self.up_point(&PointId::chain_at(cell, *from))
                }
                Atom::Ival(iv) => {
                    let carrier = self.interval.clone().unwrap();
                    let up = Interval::new(iv.lo.clone(), carrier.hi.clone()).intersect(&carrier);
                    DefinableSet::from_atoms(vec![Atom::Ival(up)])
                }
            };
            acc = acc.union(&up);
        }
        acc
    }

    /// Downward closure of a definable set.
    pub fn down_set(&self, e: &DefinableSet) -> DefinableSet {
        let mut acc = e.clone();
        for a in e.atoms() {
            let down = match a {
                Atom::FinPoint(p) => self.down_point(&PointId::Finite(p.clone())),
                Atom::Seg { cell, to, .. } => self.down_point(&PointId::chain_at(cell, *to)),
                Atom::Tail { cell, .. } => self.down_of_whole_chain(cell),
                Atom::Ival(iv) => {
                    let carrier = self.interval.clone().unwrap();
                    let down = Interval::new(carrier.lo.clone(), iv.hi.clone()).intersect(&carrier);
                    DefinableSet::from_atoms(vec![Atom::Ival(down)])
                }
            };
            acc = acc.union(&down);
        }
        acc
    }

    pub fn is_up_set(&self, e: &DefinableSet) -> bool {
        self.up_set(e).is_subset_of(e)
    }

    pub fn is_down_set(&self, e: &DefinableSet) -> bool {
        self.down_set(e).is_subset_of(e)
    }

    /// Upper-bound set of a nonempty definable set.
    pub fn upper_bounds(&self, e: &DefinableSet) -> Result<DefinableSet, Error> {
        if e.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut acc: Option<DefinableSet> = None;
        for a in e.atoms() {
            let ub = match a {
                Atom::FinPoint(p) => self.up_point(&PointId::Finite(p.clone())),
                Atom::Seg { cell, to, .. } => self.up_point(&PointId::chain_at(cell, *to)),
                Atom::Tail { cell, .. } => self.chain_ub_set(cell),
                Atom::Ival(iv) => {
                    let carrier = self.interval.clone().unwrap();
                    let lo = match &iv.hi {
                        HiBound::Closed(q) | HiBound::Open(q) => LoBound::Closed(q.clone()),
                        HiBound::Cut(s) => LoBound::Cut(s.clone()),
                        HiBound::Unbounded => {
                            acc = Some(DefinableSet::empty());
                            continue;
                        }
                    };
                    DefinableSet::from_atoms(vec![Atom::Ival(
                        Interval::new(lo, carrier.hi.clone()).intersect(&carrier),
                    )])
                }
            };
            acc = Some(match acc {
                None => ub,
                Some(prev) => prev.intersect(&ub),
            });
        }
        Ok(acc.unwrap())
    }

    /// The least element of an up-closed set, when one exists.
    pub(crate) fn least_of(&self, u: &DefinableSet) -> Option<PointId> {
        if u.is_empty() {
            return None;
        }
        if self.kind == SpaceKind::Rational {
            let carrier = self.interval.as_ref().unwrap();
            for a in u.atoms() {
                if let Atom::Ival(iv) = a {
                    return match &iv.lo {
                        LoBound::Closed(q) => Some(PointId::Rational(q.clone())),
                        LoBound::Unbounded => match &carrier.lo {
                            LoBound::Closed(q) => Some(PointId::Rational(q.clone())),
                            _ => None,
                        },
                        _ => None,
                    };
                }
            }
            return None;
        }
        let mut cands: Vec<PointId> = Vec::new();
        for a in u.atoms() {
            match a {
                Atom::FinPoint(p) => cands.push(PointId::Finite(p.clone())),
                Atom::Seg { cell, from, .. } | Atom::Tail { cell, from } => {
                    cands.push(PointId::chain_at(cell, *from))
                }
                Atom::Ival(_) => {}
            }
        }
        cands
            .iter()
            .find(|m| cands.iter().all(|v| self.leq_unchecked(m, v)))
            .cloned()
    }

    /// The maximum of a definable set, when one exists.
    pub(crate) fn max_of(&self, e: &DefinableSet) -> Option<PointId> {
        let mut cands: Vec<PointId> = Vec::new();
        for a in e.atoms() {
            match a {
                Atom::FinPoint(p) => cands.push(PointId::Finite(p.clone())),
                Atom::Seg { cell, to, .. } => cands.push(PointId::chain_at(cell, *to)),
                Atom::Tail { .. } => {}
                Atom::Ival(iv) => {
                    if let HiBound::Closed(q) = &iv.hi {
                        cands.push(PointId::Rational(q.clone()));
                    }
                }
            }
        }
        cands
            .into_iter()
            .find(|m| e.is_subset_of(&self.down_point(m)))
    }

    /// Indices beyond every declared relation and every atom of `sets`;
    /// order predicates are uniform in chain indices past this bound.
    pub(crate) fn index_bound(&self, sets: &[&DefinableSet]) -> u64 {
        let mut b = self.ord.max_rel_index;
        for s in sets {
            b = b.max(s.max_chain_index());
        }
        b + 1
    }

    /// Point schemas that witness every order-distinguishable position:
    /// all finite points plus chain elements at indices `0..=bound+1`.
    pub fn schema_points(&self, bound: u64) -> Vec<PointId> {
        let mut out: Vec<PointId> = self.points.iter().map(|p| PointId::Finite(p.clone())).collect();
        for cell in &self.cells {
            for k in 0..=bound + 1 {
                out.push(PointId::chain_at(cell, k));
            }
        }
        out
    }

    /// Build the set `{x : pred(x)}` for a predicate that is downward closed
    /// and uniform in chain indices beyond `bound`.
    pub(crate) fn collect_down(&self, bound: u64, mut pred: impl FnMut(&PointId) -> bool) -> DefinableSet {
        let mut atoms = Vec::new();
        for p in &self.points {
            if pred(&PointId::Finite(p.clone())) {
                atoms.push(Atom::FinPoint(p.clone()));
            }
        }
        for cell in &self.cells {
            if pred(&PointId::chain_at(cell, bound + 1)) {
                atoms.push(Atom::Tail {
                    cell: cell.clone(),
                    from: 0,
                });
            } else {
                let mut hi: Option<u64> = None;
                for k in (0..=bound).rev() {
                    if pred(&PointId::chain_at(cell, k)) {
                        hi = Some(k);
                        break;
                    }
                }
                if let Some(h) = hi {
                    atoms.push(Atom::Seg {
                        cell: cell.clone(),
                        from: 0,
                        to: h,
                    });
                }
            }
        }
        DefinableSet::from_atoms(atoms)
    }

    /// Upward-closed analogue of [`collect_down`].
    pub(crate) fn collect_up(&self, bound: u64, mut pred: impl FnMut(&PointId) -> bool) -> DefinableSet {
        let mut atoms = Vec::new();
        for p in &self.points {
            if pred(&PointId::Finite(p.clone())) {
                atoms.push(Atom::FinPoint(p.clone()));
            }
        }
        for cell in &self.cells {
            if pred(&PointId::chain_at(cell, bound + 1)) {
                let mut lo = bound + 1;
                for k in 0..=bound {
                    if pred(&PointId::chain_at(cell, k)) {
                        lo = k;
                        break;
                    }
                }
                atoms.push(Atom::Tail {
                    cell: cell.clone(),
                    from: lo,
                });
            }
        }
        DefinableSet::from_atoms(atoms)
    }

    /// Canonical space-file rendering; parsing it back reproduces the
    /// presentation.
    pub fn to_space_file(&self) -> String {
        let mut out = String::new();
        let kind = match self.kind {
            SpaceKind::Finite => "finite",
            SpaceKind::V => "vspace",
            SpaceKind::Rational => "rational",
        };
        match &self.name {
            Some(n) => out.push_str(&format!("space {kind} name \"{n}\"\n")),
            None => out.push_str(&format!("space {kind}\n")),
        }
        if !self.points.is_empty() {
            out.push_str(&format!("points {}\n", self.points.join(" ")));
        }
        for c in &self.cells {
            out.push_str(&format!("chain {c}\n"));
        }
        for r in &self.relations {
            match r {
                OrderRelation::PointBelowPoint { lo, hi } => {
                    out.push_str(&format!("rel {lo} <= {hi}\n"))
                }
                OrderRelation::PointBelowChainAt { point, cell, index } => {
                    out.push_str(&format!("rel {point} <= {cell}@{index}\n"))
                }
                OrderRelation::ChainAtBelowPoint { cell, index, point } => {
                    out.push_str(&format!("rel {cell}@{index} <= {point}\n"))
                }
                OrderRelation::ChainBelowPoint { cell, point } => {
                    out.push_str(&format!("rel chain_below {cell} {point}\n"))
                }
            }
        }
        for (c, p) in &self.sups {
            out.push_str(&format!("sup {c} = {p}\n"));
        }
        if let Some(iv) = &self.interval {
            let lo = match &iv.lo {
                LoBound::Unbounded => "unbounded".to_string(),
                LoBound::Closed(q) => format!("{q} closed"),
                LoBound::Open(q) => format!("{q} open"),
                LoBound::Cut(_) => unreachable!("carrier endpoints are rational"),
            };
            let hi = match &iv.hi {
                HiBound::Unbounded => "unbounded".to_string(),
                HiBound::Closed(q) => format!("{q} closed"),
                HiBound::Open(q) => format!("{q} open"),
                HiBound::Cut(_) => unreachable!("carrier endpoints are rational"),
            };
            out.push_str(&format!("interval {lo} {hi}\n"));
        }
        let base = match self.topology.base {
            BaseTopology::Alexandroff => "alexandroff",
            BaseTopology::Scott => "scott",
            BaseTopology::Upper => "upper",
        };
        out.push_str(&format!("topology {base}\n"));
        out
    }

    /// Rational carrier sample points on a small denominator grid.
    #[allow(clippy::needless_range_loop)]
    pub fn rational_samples(&self, denoms: u64) -> Vec<Rat> {
        let iv = match &self.interval {
            Some(iv) => iv.clone(),
            None => return vec![],
        };
        let mut lo = match &iv.lo {
            LoBound::Closed(q) | LoBound::Open(q) => q.clone(),
            _ => crate::exact::rat_int(-4),
        };
        let hi = match &iv.hi {
            HiBound::Closed(q) | HiBound::Open(q) => q.clone(),
            _ => &lo + crate::exact::rat_int(8),
        };
        if lo > hi {
            lo = &hi - crate::exact::rat_int(8);
        }
        let mut out = Vec::new();
        let span = &hi - &lo;
        for d in 1..=denoms {
            for n in 0..=d {
                let q = &lo + &span * crate::exact::rat(n as i64, d as i64);
                if iv.contains(&q) && !out.contains(&q) {
                    out.push(q);
                }
            }
        }
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::parse::{parse_set, parse_space};

    fn lambda() -> SpacePresentation {
        parse_space(
            "space vspace; points top; chain A; chain B; rel chain_below A top; rel chain_below B top; sup A = top; sup B = top; topology scott",
        )
        .unwrap()
    }

    #[test]
    fn lambda_order_queries() {
        let s = lambda();
        assert!(s.leq(&PointId::chain_at("A", 3), &PointId::finite("top")).unwrap());
        assert!(!s.leq(&PointId::chain_at("A", 3), &PointId::chain_at("B", 5)).unwrap());
        assert!(s.leq(&PointId::chain_at("A", 2), &PointId::chain_at("A", 6)).unwrap());
        assert!(matches!(
            s.leq(&PointId::finite("nowhere"), &PointId::finite("top")),
            Err(Error::PointNotInCarrier(_))
        ));
    }

    #[test]
    fn rational_order_is_numeric() {
        let s = parse_space("space rational; interval 0 closed 1 closed; topology scott").unwrap();
        assert!(s.leq(&PointId::Rational(rat(1, 3)), &PointId::Rational(rat(1, 2))).unwrap());
        assert!(!s.leq(&PointId::Rational(rat(1, 2)), &PointId::Rational(rat(1, 3))).unwrap());
    }

    #[test]
    fn up_and_down_sets_on_lambda() {
        let s = lambda();
        let up = s.up_set(&parse_set(&s, "{A@2}").unwrap());
        assert_eq!(up, parse_set(&s, "tail(A,2) | {top}").unwrap());
        let down = s.down_set(&parse_set(&s, "{top}").unwrap());
        assert_eq!(down, s.whole_space());
    }

    #[test]
    fn up_set_on_antichain_is_identity() {
        let s = parse_space("space finite; points a b; topology alexandroff").unwrap();
        let up = s.up_set(&parse_set(&s, "{a}").unwrap());
        assert_eq!(up, parse_set(&s, "{a}").unwrap());
    }

    #[test]
    fn down_set_on_rational_chain() {
        let s = parse_space("space rational; interval 0 closed 1 closed; topology scott").unwrap();
        let down = s.down_set(&parse_set(&s, "{1/2}").unwrap());
        assert_eq!(down, parse_set(&s, "[0,1/2]").unwrap());
    }

    #[test]
    fn cross_chain_order_through_points() {
        // B@0..3 <= p <= A@5: the closure relates the chains through p
        let s = parse_space(
            "space vspace; points p; chain A; chain B; rel B@3 <= p; rel p <= A@5; topology scott",
        )
        .unwrap();
        assert!(s.leq(&PointId::chain_at("B", 2), &PointId::chain_at("A", 7)).unwrap());
        assert!(!s.leq(&PointId::chain_at("B", 4), &PointId::chain_at("A", 7)).unwrap());
        assert!(!s.leq(&PointId::chain_at("B", 2), &PointId::chain_at("A", 4)).unwrap());
    }

    #[test]
    fn effective_sup_is_derived_when_undeclared() {
        let s = parse_space(
            "space vspace; points top; chain A; rel chain_below A top; topology scott",
        )
        .unwrap();
        assert_eq!(s.chain_sup("A"), Some(PointId::finite("top")));
        // two incomparable upper bounds: no least, hence no supremum
        let s2 = parse_space(
            "space vspace; points p q; chain A; rel chain_below A p; rel chain_below A q; topology scott",
        )
        .unwrap();
        assert_eq!(s2.chain_sup("A"), None);
    }

    #[test]
    fn whole_space_and_complement() {
        let s = lambda();
        let e = parse_set(&s, "tail(A,3) | {top}").unwrap();
        let c = s.complement(&e);
        assert_eq!(c, parse_set(&s, "seg(A,0,2) | tail(B,0)").unwrap());
        assert_eq!(s.complement(&c), e);
    }
}
