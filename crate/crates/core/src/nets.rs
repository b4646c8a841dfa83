//! Schematic nets, subnets, the convergence class defined by irreducible
//! sets, topological convergence at any derivative level, the canonical-net
//! construction, the Kelley-axiom battery, and the final verdict.
//!
//! A net either runs over ω with a symbolic value term or over a finite
//! preorder with an explicit table. Convergence deciders work on the net's
//! cofinal branches: a value term decomposes into finitely many arithmetic
//! subsequences, each a constant, a chain ascent or a rational ascent, so
//! both the eventual-lower-bound set and eventual membership in a definable
//! set are exactly computable.

use crate::error::Error;
use crate::exact::{rat_int, Cut, Rat};
use crate::irr::{sup, SupResult};
use crate::point::PointId;
use crate::sets::{Atom, DefinableSet, HiBound, Interval, LoBound};
use crate::space::{BaseTopology, SpaceKind, SpacePresentation};
use crate::verdict::Verdict;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// A finite reflexive-transitive index order (not necessarily a poset).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinitePreorder {
    pub le: Vec<Vec<bool>>,
}

impl FinitePreorder {
    pub fn chain(n: usize) -> Self {
        let le = (0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect();
        FinitePreorder { le }
    }

    #[allow(clippy::needless_range_loop)]
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, Error> {
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::InvalidNet("preorder pair out of range".into()));
            }
            le[a][b] = true;
        }
        loop {
            let mut changed = false;
            for i in 0..n {
                for j in 0..n {
                    if le[i][j] {
                        for k in 0..n {
                            if le[j][k] && !le[i][k] {
                                le[i][k] = true;
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
        Ok(FinitePreorder { le })
    }

    pub fn size(&self) -> usize {
        self.le.len()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.le[i][j]
    }

    /// Elements at or above `i0`.
    pub fn cone(&self, i0: usize) -> Vec<usize> {
        (0..self.size()).filter(|&i| self.le[i0][i]).collect()
    }

    /// Product preorder with pointwise order.
    pub fn product(&self, other: &FinitePreorder) -> FinitePreorder {
        let n = self.size() * other.size();
        let le = (0..n)
            .map(|x| {
                let (a1, b1) = (x / other.size(), x % other.size());
                (0..n)
                    .map(|y| {
                        let (a2, b2) = (y / other.size(), y % other.size());
                        self.le[a1][a2] && other.le[b1][b2]
                    })
                    .collect()
            })
            .collect();
        FinitePreorder { le }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum IndexOrder {
    Omega,
    Finite(FinitePreorder),
}

impl IndexOrder {
    pub fn finite_chain(n: usize) -> Self {
        IndexOrder::Finite(FinitePreorder::chain(n))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValueTerm {
    Const(PointId),
    ChainAscent(String),
    RationalAscent(Rat),
    Interleave(Box<ValueTerm>, Box<ValueTerm>),
    Explicit(Vec<PointId>),
    /// k ↦ base(stride·k + offset); produced by subnet application.
    Reindexed {
        base: Box<ValueTerm>,
        stride: u64,
        offset: u64,
    },
}

impl fmt::Display for ValueTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueTerm::Const(p) => write!(f, "const({p})"),
            ValueTerm::ChainAscent(c) => write!(f, "chain({c})"),
            ValueTerm::RationalAscent(q) => write!(f, "ratascent({q})"),
            ValueTerm::Interleave(a, b) => write!(f, "interleave({a},{b})"),
            ValueTerm::Explicit(t) => {
                let body: Vec<String> =
                    t.iter().enumerate().map(|(i, p)| format!("{i}:{p}")).collect();
                write!(f, "explicit{{{}}}", body.join(","))
            }
            ValueTerm::Reindexed { base, stride, offset } => {
                write!(f, "{base} o (k->{stride}k+{offset})")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetSpec {
    pub index: IndexOrder,
    pub term: ValueTerm,
}

impl fmt::Display for NetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.term)
    }
}

impl NetSpec {
    pub fn new(index: IndexOrder, term: ValueTerm, space: &SpacePresentation) -> Result<Self, Error> {
        validate_term(&term, space)?;
        match (&index, &term) {
            (IndexOrder::Finite(p), ValueTerm::Explicit(t)) => {
                if p.size() != t.len() {
                    return Err(Error::InvalidNet(
                        "explicit table size must match the index".into(),
                    ));
                }
            }
            (IndexOrder::Omega, ValueTerm::Explicit(_)) => {
                return Err(Error::InvalidNet("explicit nets need a finite index".into()))
            }
            (IndexOrder::Finite(_), _) => {
                return Err(Error::InvalidNet(
                    "finite indices carry explicit tables only".into(),
                ))
            }
            (IndexOrder::Omega, _) => {}
        }
        Ok(NetSpec { index, term })
    }

    pub fn constant(space: &SpacePresentation, p: &PointId) -> Result<Self, Error> {
        NetSpec::new(IndexOrder::Omega, ValueTerm::Const(p.clone()), space)
    }
}

fn validate_term(term: &ValueTerm, space: &SpacePresentation) -> Result<(), Error> {
    match term {
        ValueTerm::Const(p) => space.check_point(p),
        ValueTerm::ChainAscent(c) => {
            if space.has_cell(c) {
                Ok(())
            } else {
                Err(Error::InvalidNet(format!("unknown chain {c}")))
            }
        }
        ValueTerm::RationalAscent(q) => space.check_point(&PointId::Rational(q.clone())),
        ValueTerm::Interleave(a, b) => {
            if matches!(**a, ValueTerm::Explicit(_)) || matches!(**b, ValueTerm::Explicit(_)) {
                return Err(Error::InvalidNet("interleave branches must be ω-terms".into()));
            }
            validate_term(a, space)?;
            validate_term(b, space)
        }
        ValueTerm::Explicit(t) => {
            if t.is_empty() {
                return Err(Error::InvalidNet("explicit table must be nonempty".into()));
            }
            for p in t {
                space.check_point(p)?;
            }
            Ok(())
        }
        ValueTerm::Reindexed { base, stride, .. } => {
            if *stride == 0 {
                return Err(Error::InvalidNet("stride must be at least 1".into()));
            }
            validate_term(base, space)
        }
    }
}

/// Index element of a net.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NetIndex {
    Nat(u64),
    Fin(usize),
}

/// Evaluate the net at an index.
pub fn net_value(space: &SpacePresentation, net: &NetSpec, i: NetIndex) -> Result<PointId, Error> {
    match (&net.index, i) {
        (IndexOrder::Omega, NetIndex::Nat(k)) => Ok(eval_term(space, &net.term, k)),
        (IndexOrder::Finite(p), NetIndex::Fin(j)) => {
            if j >= p.size() {
                return Err(Error::IndexOutOfRange(format!("{j}")));
            }
            match &net.term {
                ValueTerm::Explicit(t) => Ok(t[j].clone()),
                _ => unreachable!("finite nets are explicit"),
            }
        }
        _ => Err(Error::IndexOutOfRange("index kind mismatch".into())),
    }
}

fn eval_term(space: &SpacePresentation, term: &ValueTerm, k: u64) -> PointId {
    match term {
        ValueTerm::Const(p) => p.clone(),
        ValueTerm::ChainAscent(c) => PointId::chain_at(c, k),
        ValueTerm::RationalAscent(q) => PointId::Rational(rat_ascent_value(space, q, k)),
        ValueTerm::Interleave(a, b) => {
            if k.is_multiple_of(2) {
                eval_term(space, a, k / 2)
            } else {
                eval_term(space, b, (k - 1) / 2)
            }
        }
        ValueTerm::Explicit(_) => unreachable!("explicit nets are finite-indexed"),
        ValueTerm::Reindexed { base, stride, offset } => {
            eval_term(space, base, stride * k + offset)
        }
    }
}

fn rat_ascent_value(space: &SpacePresentation, q: &Rat, k: u64) -> Rat {
    let v = q - Rat::new(1.into(), (k as i64 + 1).into());
    if space.point_in_carrier(&PointId::Rational(v.clone())) {
        return v;
    }
    // clipped: the carrier minimum when it exists, else a fixed rational
    // strictly between the carrier bound and the target
    let carrier = space.interval.as_ref().unwrap();
    match &carrier.lo {
        LoBound::Closed(m) => m.clone(),
        LoBound::Open(l) => crate::exact::rational_between(&Cut::Rat(l.clone()), &Cut::Rat(q.clone())),
        LoBound::Unbounded => v,
        LoBound::Cut(_) => unreachable!(),
    }
}

/// A cofinal branch of an ω-net.
#[derive(Clone, Debug)]
enum Branch {
    Point(PointId),
    ChainTail(String),
    RatAsc(Rat),
}

fn branches(term: &ValueTerm, out: &mut Vec<Branch>) {
    match term {
        ValueTerm::Const(p) => out.push(Branch::Point(p.clone())),
        ValueTerm::ChainAscent(c) => out.push(Branch::ChainTail(c.clone())),
        ValueTerm::RationalAscent(q) => out.push(Branch::RatAsc(q.clone())),
        ValueTerm::Interleave(a, b) => {
            branches(a, out);
            branches(b, out);
        }
        ValueTerm::Explicit(_) => unreachable!(),
        ValueTerm::Reindexed { base, stride, offset } => match &**base {
            ValueTerm::Const(p) => out.push(Branch::Point(p.clone())),
            ValueTerm::ChainAscent(c) => out.push(Branch::ChainTail(c.clone())),
            ValueTerm::RationalAscent(q) => out.push(Branch::RatAsc(q.clone())),
            ValueTerm::Interleave(a, b) => {
                if stride % 2 == 0 {
                    let inner = if offset % 2 == 0 { a } else { b };
                    branches(
                        &ValueTerm::Reindexed {
                            base: inner.clone(),
                            stride: stride / 2,
                            offset: offset / 2,
                        },
                        out,
                    );
                } else {
                    branches(
                        &ValueTerm::Reindexed {
                            base: base.clone(),
                            stride: stride * 2,
                            offset: *offset,
                        },
                        out,
                    );
                    branches(
                        &ValueTerm::Reindexed {
                            base: base.clone(),
                            stride: stride * 2,
                            offset: stride + offset,
                        },
                        out,
                    );
                }
            }
            ValueTerm::Explicit(_) => unreachable!(),
            ValueTerm::Reindexed {
                base: b2,
                stride: s2,
                offset: o2,
            } => branches(
                &ValueTerm::Reindexed {
                    base: b2.clone(),
                    stride: stride * s2,
                    offset: s2 * offset + o2,
                },
                out,
            ),
        },
    }
}

fn net_branches(net: &NetSpec) -> Vec<Branch> {
    let mut out = Vec::new();
    branches(&net.term, &mut out);
    out
}

/// The set of eventual lower bounds of the net: always downward closed.
pub fn eventual_lower_bounds(space: &SpacePresentation, net: &NetSpec) -> DefinableSet {
    match (&net.index, &net.term) {
        (IndexOrder::Finite(pre), ValueTerm::Explicit(table)) => {
            let mut acc = DefinableSet::empty();
            for i0 in 0..pre.size() {
                let mut lb: Option<DefinableSet> = None;
                for i in pre.cone(i0) {
                    let d = space.down_point(&table[i]);
                    lb = Some(match lb {
                        None => d,
                        Some(prev) => prev.intersect(&d),
                    });
                }
                if let Some(lb) = lb {
                    acc = acc.union(&lb);
                }
            }
            acc
        }
        _ => {
            let mut acc: Option<DefinableSet> = None;
            for b in net_branches(net) {
                let e = match b {
                    Branch::Point(p) => space.down_point(&p),
                    Branch::ChainTail(c) => space.down_of_whole_chain(&c),
                    Branch::RatAsc(q) => rat_asc_elb(space, &q),
                };
                acc = Some(match acc {
                    None => e,
                    Some(prev) => prev.intersect(&e),
                });
            }
            acc.unwrap_or_else(DefinableSet::empty)
        }
    }
}

fn rat_asc_elb(space: &SpacePresentation, q: &Rat) -> DefinableSet {
    let carrier = space.interval.clone().unwrap();
    if crate::waybelow::carrier_min(space).as_ref() == Some(q) {
        // the schedule clips to the least element, a constant net
        return DefinableSet::singleton(&PointId::Rational(q.clone()));
    }
    DefinableSet::from_atoms(vec![Atom::Ival(
        Interval::new(carrier.lo.clone(), HiBound::Open(q.clone())).intersect(&carrier),
    )])
}

/// Is the net eventually inside `u`?
pub fn eventually_in(space: &SpacePresentation, net: &NetSpec, u: &DefinableSet) -> bool {
    match (&net.index, &net.term) {
        (IndexOrder::Finite(pre), ValueTerm::Explicit(table)) => (0..pre.size())
            .any(|i0| pre.cone(i0).iter().all(|&i| u.contains_point(&table[i]))),
        _ => net_branches(net).iter().all(|b| match b {
            Branch::Point(p) => u.contains_point(p),
            Branch::ChainTail(c) => u.components().cells.get(c).is_some_and(|s| s.is_cofinite_tail()),
            Branch::RatAsc(q) => {
                if crate::waybelow::carrier_min(space).as_ref() == Some(q) {
                    return u.contains_point(&PointId::Rational(q.clone()));
                }
                // values approach q from below: u must cover a left
                // neighbourhood (r, q)
                let below = DefinableSet::from_atoms(vec![Atom::Ival(Interval::new(
                    LoBound::Unbounded,
                    HiBound::Open(q.clone()),
                ))]);
                let missing = space.complement(u).intersect(&below);
                !missing.atoms().iter().any(|a| match a {
                    Atom::Ival(iv) => {
                        iv.hi.position_cmp(&HiBound::Open(q.clone())) == std::cmp::Ordering::Equal
                    }
                    _ => false,
                })
            }
        }),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceJudgment {
    pub verdict: Verdict,
    /// On success: the witnessing irreducible set of eventual lower bounds.
    pub witness_set: Option<String>,
    /// On success: the threshold map e ↦ k(e), as a schema.
    pub thresholds: Option<String>,
}

impl ConvergenceJudgment {
    pub fn is_proven(&self) -> bool {
        self.verdict.is_proven()
    }
}

/// Does the net converge to `y` in the sense of the irreducible convergence
/// class: is there an irreducible set of eventual lower bounds whose
/// supremum exists and dominates `y`?
pub fn irr_converges(
    space: &SpacePresentation,
    net: &NetSpec,
    y: &PointId,
) -> Result<ConvergenceJudgment, Error> {
    space.check_point(y)?;
    let elb = eventual_lower_bounds(space, net);
    judge_lower_bound_set(space, &elb, y)
}

/// The witness-family search over a downward-closed set of eventual lower
/// bounds.
pub fn judge_lower_bound_set(
    space: &SpacePresentation,
    elb: &DefinableSet,
    y: &PointId,
) -> Result<ConvergenceJudgment, Error> {
    let mut exhaustion = Vec::new();

    // singleton instances
    let above = elb.intersect(&space.up_point(y));
    if !above.is_empty() {
        let e = if above.contains_point(y) {
            y.clone()
        } else {
            above.sample_points().into_iter().next().unwrap()
        };
        return Ok(ConvergenceJudgment {
            verdict: Verdict::proven(format!(
                "singleton witness {{{e}}}: an eventual lower bound dominating the target"
            )),
            witness_set: Some(DefinableSet::singleton(&e).to_string()),
            thresholds: Some(format!("k({e}) = first index from which the net stays above {e}")),
        });
    }
    exhaustion.push("no eventual lower bound dominates the target".to_string());

    // whole-chain instances
    for cell in &space.cells {
        match space.chain_sup(cell) {
            Some(s) if space.leq_unchecked(y, &s) => {
                let full = elb
                    .components()
                    .cells
                    .get(cell)
                    .is_some_and(|i| i.is_cofinite_tail() && i.tail == Some(0));
                if full {
                    let chain = DefinableSet::from_atoms(vec![Atom::Tail {
                        cell: cell.clone(),
                        from: 0,
                    }]);
                    return Ok(ConvergenceJudgment {
                        verdict: Verdict::proven(format!(
                            "chain witness {cell}: every element is an eventual lower bound and sup {cell} = {s} dominates {y}"
                        )),
                        witness_set: Some(chain.to_string()),
                        thresholds: Some(format!(
                            "k({cell}@j) = first index from which the net stays above {cell}@j"
                        )),
                    });
                }
                exhaustion.push(format!("chain {cell}: not all elements are eventual lower bounds"));
            }
            Some(_) => exhaustion.push(format!("chain {cell}: supremum does not dominate the target")),
            None => exhaustion.push(format!("chain {cell}: no supremum")),
        }
    }

    // left-open rational intervals
    if space.kind == SpaceKind::Rational {
        let yq = match y {
            PointId::Rational(q) => q.clone(),
            _ => unreachable!(),
        };
        let mut found: Option<(Rat, DefinableSet)> = None;
        for a in elb.atoms() {
            if let Atom::Ival(iv) = a {
                // a rational q with y ≤ q and (r, q) ⊆ elb nonempty
                let q_candidate = match &iv.hi {
                    HiBound::Open(b) if *b >= yq => Some(b.clone()),
                    HiBound::Closed(b) if *b >= yq => Some(b.clone()),
                    HiBound::Unbounded => Some(&yq + rat_int(1)),
                    _ => None,
                };
                if let Some(q) = q_candidate {
                    let inst = DefinableSet::from_atoms(vec![Atom::Ival(
                        Interval::new(LoBound::Open(&q - rat_int(1)), HiBound::Open(q.clone()))
                            .intersect(space.interval.as_ref().unwrap()),
                    )]);
                    if !inst.is_empty() && inst.is_subset_of(&elb) {
                        found = Some((q, inst));
                        break;
                    }
                }
            }
        }
        if let Some((q, inst)) = found {
            return Ok(ConvergenceJudgment {
                verdict: Verdict::proven(format!(
                    "interval witness {inst}: eventual lower bounds with supremum {q} dominating {y}"
                )),
                witness_set: Some(inst.to_string()),
                thresholds: Some("k(e) = first index with all later values above e".into()),
            });
        }
        exhaustion.push("no left-open interval of eventual lower bounds reaches the target".into());
    }

    Ok(ConvergenceJudgment {
        verdict: Verdict::refuted_trace(format!(
            "witness family exhausted: {}",
            exhaustion.join("; ")
        )),
        witness_set: None,
        thresholds: None,
    })
}

/// Topological convergence at a chosen derivative level.
pub fn topo_converges(
    space: &SpacePresentation,
    net: &NetSpec,
    y: &PointId,
    level: u32,
) -> Result<Verdict, Error> {
    space.check_point(y)?;
    match space.kind {
        SpaceKind::Finite => {
            let u = space.up_point(y);
            if eventually_in(space, net, &u) {
                Ok(Verdict::proven("eventually inside the minimal open around the point"))
            } else {
                Ok(Verdict::refuted_set(&u))
            }
        }
        SpaceKind::Rational => topo_converges_rational(space, net, y, level),
        SpaceKind::V => {
            if space.topology.base == BaseTopology::Upper {
                topo_converges_v_upper(space, net, y)
            } else {
                topo_converges_v_scott_like(space, net, y, level)
            }
        }
    }
}

fn topo_converges_rational(
    space: &SpacePresentation,
    net: &NetSpec,
    y: &PointId,
    level: u32,
) -> Result<Verdict, Error> {
    let yq = match y {
        PointId::Rational(q) => q.clone(),
        _ => unreachable!(),
    };
    let carrier = space.interval.clone().unwrap();
    let attained_needed = space.topology.base == BaseTopology::Alexandroff && level == 0;
    let check_branch = |b: &Branch| -> bool {
        match b {
            Branch::Point(PointId::Rational(p)) => p >= &yq,
            Branch::Point(_) => false,
            Branch::RatAsc(q) => {
                if crate::waybelow::carrier_min(space).as_ref() == Some(q) {
                    return q >= &yq;
                }
                if attained_needed {
                    q > &yq
                } else {
                    q >= &yq
                }
            }
            Branch::ChainTail(_) => false,
        }
    };
    let ok = match (&net.index, &net.term) {
        (IndexOrder::Finite(pre), ValueTerm::Explicit(table)) => (0..pre.size()).any(|i0| {
            pre.cone(i0).iter().all(|&i| match &table[i] {
                PointId::Rational(p) => p >= &yq,
                _ => false,
            })
        }),
        _ => net_branches(net).iter().all(check_branch),
    };
    if ok {
        Ok(Verdict::proven(
            "eventually above every strict lower bound of the point",
        ))
    } else {
        let witness = if attained_needed {
            Interval::new(LoBound::Closed(yq), carrier.hi.clone()).intersect(&carrier)
        } else {
            // a strict open around y that the net misses needs a bound just
            // below y; the up-set at y itself suffices as a rendering
            Interval::new(LoBound::Closed(yq), carrier.hi.clone()).intersect(&carrier)
        };
        Ok(Verdict::refuted_set(&DefinableSet::from_atoms(vec![
            Atom::Ival(witness),
        ])))
    }
}

/// Minimal-open analysis for Alexandroff/Scott-like V-space levels.
fn topo_converges_v_scott_like(
    space: &SpacePresentation,
    net: &NetSpec,
    y: &PointId,
    level: u32,
) -> Result<Verdict, Error> {
    let uy = space.up_set(&DefinableSet::singleton(y));
    let mut bound = space.index_bound(&[&uy]);
    if let PointId::ChainAt { index, .. } = y {
        bound = bound.max(index + 1);
    }
    if let (IndexOrder::Finite(_), ValueTerm::Explicit(table)) = (&net.index, &net.term) {
        for p in table {
            if let PointId::ChainAt { index, .. } = p {
                bound = bound.max(index + 1);
            }
        }
    }
    let large = bound + 7;
    let core = space.min_open(y, level, &BTreeMap::new(), large);
    // strip tails introduced at the symbolic threshold: membership through
    // them is not robust under growing the threshold
    let mut param_tail_atoms = Vec::new();
    for (cell, idx) in &core.components().cells {
        if idx.tail == Some(large) {
            param_tail_atoms.push(Atom::Tail {
                cell: cell.clone(),
                from: large,
            });
        }
    }
    let robust = core.minus(&DefinableSet::from_atoms(param_tail_atoms));
    let witness_instance = space.min_open(y, level, &BTreeMap::new(), large + 1);

    let ok = match (&net.index, &net.term) {
        (IndexOrder::Finite(pre), ValueTerm::Explicit(table)) => (0..pre.size())
            .any(|i0| pre.cone(i0).iter().all(|&i| robust.contains_point(&table[i]))),
        _ => net_branches(net).iter().all(|b| match b {
            Branch::Point(p) => robust.contains_point(p),
            Branch::ChainTail(c) => core
                .components()
                .cells
                .get(c)
                .is_some_and(|i| i.is_cofinite_tail()),
            Branch::RatAsc(_) => false,
        }),
    };
    if ok {
        debug_assert!(eventually_in(space, net, &witness_instance));
        Ok(Verdict::proven(
            "eventually inside every open around the point",
        ))
    } else {
        Ok(Verdict::refuted_set(&witness_instance))
    }
}

/// Upper-topology V-space analysis: opens are complements of finitely
/// dominated down-sets, so eventual membership in all opens around `y`
/// reduces to per-branch cone conditions.
fn topo_converges_v_upper(
    space: &SpacePresentation,
    net: &NetSpec,
    y: &PointId,
) -> Result<Verdict, Error> {
    let uy = space.up_point(y);
    let mut bound = space.index_bound(&[&uy]);
    if let PointId::ChainAt { index, .. } = y {
        bound = bound.max(index + 1);
    }
    // a single point v is inside every upper open around y iff every
    // dominator of v dominates y
    let point_ok = |v: &PointId| -> bool {
        let uv = space.up_point(v);
        uv.is_subset_of(&space.up_point(y))
    };
    let find_violation = |v: &PointId| -> Option<PointId> {
        let uv = space.up_point(v);
        let bad = uv.minus(&space.up_point(y));
        bad.sample_points().into_iter().next()
    };
    let mut witness: Option<PointId> = None;
    let ok = match (&net.index, &net.term) {
        (IndexOrder::Finite(pre), ValueTerm::Explicit(table)) => (0..pre.size())
            .any(|i0| pre.cone(i0).iter().all(|&i| point_ok(&table[i]))),
        _ => net_branches(net).iter().all(|b| match b {
            Branch::Point(p) => {
                let r = point_ok(p);
                if !r && witness.is_none() {
                    witness = find_violation(p);
                }
                r
            }
            Branch::ChainTail(c) => {
                let ubs = space.chain_ub_set(c);
                let r = ubs.is_subset_of(&space.up_point(y));
                if !r && witness.is_none() {
                    witness = ubs.minus(&space.up_point(y)).sample_points().into_iter().next();
                }
                r
            }
            Branch::RatAsc(_) => false,
        }),
    };
    let _ = bound;
    if ok {
        Ok(Verdict::proven(
            "eventually avoids every finitely dominated down-set missing the point",
        ))
    } else {
        let w = match witness {
            Some(f) => space.complement(&space.down_point(&f)),
            None => space.complement(&space.down_point(y)),
        };
        Ok(Verdict::refuted_set(&w))
    }
}

/// The canonical net of a witness-family instance: its own elements indexed
/// by the specialization preorder.
pub fn canonical_net(
    space: &SpacePresentation,
    e: &DefinableSet,
    y: &PointId,
) -> Result<NetSpec, Error> {
    if e.is_empty() {
        return Err(Error::EmptySet);
    }
    let s = sup(space, e)?;
    match s.point() {
        Some(p) if space.leq_unchecked(y, p) => {}
        _ => {
            return Err(Error::NotInWitnessFamily(format!(
                "supremum of {e} does not dominate {y}"
            )))
        }
    }
    // singleton
    if let [atom] = e.atoms() {
        match atom {
            Atom::FinPoint(p) => {
                return NetSpec::constant(space, &PointId::Finite(p.clone()));
            }
            Atom::Seg { cell, from, to } if from == to => {
                return NetSpec::constant(space, &PointId::chain_at(cell, *from));
            }
            Atom::Tail { cell, from } if *from == 0 => {
                return NetSpec::new(
                    IndexOrder::Omega,
                    ValueTerm::ChainAscent(cell.clone()),
                    space,
                );
            }
            Atom::Ival(iv) => {
                if let (LoBound::Closed(a), HiBound::Closed(b)) = (&iv.lo, &iv.hi) {
                    if a == b {
                        return NetSpec::constant(space, &PointId::Rational(a.clone()));
                    }
                }
                if let HiBound::Open(q) = &iv.hi {
                    return NetSpec::new(
                        IndexOrder::Omega,
                        ValueTerm::RationalAscent(q.clone()),
                        space,
                    );
                }
            }
            _ => {}
        }
    }
    // finite directed set of named points
    if e.atoms().iter().all(|a| matches!(a, Atom::FinPoint(_))) {
        let pts: Vec<PointId> = e.sample_points();
        let n = pts.len();
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if space.leq_unchecked(&pts[i], &pts[j]) {
                    pairs.push((i, j));
                }
            }
        }
        let pre = FinitePreorder::from_pairs(n, &pairs)?;
        return NetSpec::new(IndexOrder::Finite(pre), ValueTerm::Explicit(pts), space);
    }
    Err(Error::NotInWitnessFamily(e.to_string()))
}

/// Cross-validate the way-below relation against its net formulation: x is
/// way below y exactly when every net converging to y is eventually above x.
pub fn way_below_via_nets(
    space: &SpacePresentation,
    x: &PointId,
    y: &PointId,
    battery: &crate::battery::Battery,
) -> Result<Verdict, Error> {
    let direct = crate::waybelow::way_below(space, x, y)?.is_proven();
    let mut nets: Vec<NetSpec> = Vec::new();
    for e in crate::irr::witness_family(space)?.instances(space, 64) {
        if let Ok(SupResult::Exists(s)) = sup(space, &e) {
            if space.leq_unchecked(y, &s) {
                if let Ok(n) = canonical_net(space, &e, y) {
                    nets.push(n);
                }
            }
        }
    }
    // canonical nets anchored at the query points, so every witness-family
    // refutation is reproduced by some net in the pool
    let ux = space.up_point(x);
    let uy = space.up_point(y);
    let bound = space.index_bound(&[&ux, &uy]);
    for p in space.schema_points(bound) {
        if space.leq_unchecked(y, &p) {
            nets.push(NetSpec::constant(space, &p)?);
        }
    }
    if space.kind == SpaceKind::Rational {
        if let PointId::Rational(yq) = y {
            let mut targets = space.rational_samples(4);
            targets.push(yq.clone());
            for q in targets {
                if &q >= yq {
                    let e = rat_asc_elb(space, &q);
                    if !e.is_empty() && !DefinableSet::singleton(&PointId::Rational(q.clone())).is_subset_of(&e) {
                        // a genuine strictly ascending net toward q
                        nets.push(NetSpec::new(
                            IndexOrder::Omega,
                            ValueTerm::RationalAscent(q.clone()),
                            space,
                        )?);
                    } else {
                        nets.push(NetSpec::constant(space, &PointId::Rational(q))?);
                    }
                }
            }
        }
    }
    nets.extend(battery.nets.iter().cloned());
    nets.dedup();
    let mut net_side = true;
    let mut counter: Option<NetSpec> = None;
    for n in nets {
        if irr_converges(space, &n, y)?.is_proven() {
            let elb = eventual_lower_bounds(space, &n);
            if !elb.contains_point(x) {
                net_side = false;
                counter = Some(n);
                break;
            }
        }
    }
    if direct == net_side {
        Ok(Verdict::proven(format!(
            "direct and net formulations agree (both {})",
            if direct { "positive" } else { "negative" }
        )))
    } else if let Some(n) = counter {
        Ok(Verdict::Refuted {
            witness: crate::verdict::Witness::Net(format!(
                "{n} converges to {y} but is not eventually above {x}"
            )),
        })
    } else {
        Ok(Verdict::refuted_trace(
            "direct refutation not reproduced by any battery or canonical net",
        ))
    }
}

/// Kelley's induced-openness test: a set is open for the convergence class
/// when every convergent net into it eventually enters it.
pub fn induced_open(
    space: &SpacePresentation,
    u: &DefinableSet,
    battery: &crate::battery::Battery,
) -> Result<Verdict, Error> {
    let mut checked = 0usize;
    let upset = space.is_up_set(u);
    // canonical nets over the witness family
    for e in crate::irr::witness_family(space)?.instances(space, 64) {
        if let Ok(SupResult::Exists(s)) = sup(space, &e) {
            for y in u.sample_points() {
                if space.leq_unchecked(&y, &s) {
                    if let Ok(n) = canonical_net(space, &e, &y) {
                        checked += 1;
                        if !eventually_in(space, &n, u) {
                            return Ok(Verdict::Refuted {
                                witness: crate::verdict::Witness::Net(format!(
                                    "canonical net {n} converges to {y} in {u} but never settles inside"
                                )),
                            });
                        }
                    }
                }
            }
        }
    }
    for n in &battery.nets {
        for y in &battery.points {
            if u.contains_point(y) && irr_converges(space, n, y)?.is_proven() {
                checked += 1;
                if !eventually_in(space, n, u) {
                    return Ok(Verdict::Refuted {
                        witness: crate::verdict::Witness::Net(format!(
                            "{n} converges to {y} in {u} but never settles inside"
                        )),
                    });
                }
            }
        }
    }
    Ok(Verdict::proven(format!(
        "all {checked} convergent nets into the set settle inside{}",
        if upset {
            "; for an up-set the canonical-net test is the supremum condition of the derived topology"
        } else {
            ""
        }
    )))
}

#[derive(Clone, Debug, Serialize)]
pub enum AxiomStatus {
    HoldsOnBattery { checked: usize },
    Violated { config: String },
    Inconclusive { budget: String },
}

impl AxiomStatus {
    pub fn holds(&self) -> bool {
        matches!(self, AxiomStatus::HoldsOnBattery { .. })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KelleyReport {
    pub constants: AxiomStatus,
    pub subnets: AxiomStatus,
    pub divergence: AxiomStatus,
    pub iterated_limits: AxiomStatus,
    pub seed: u64,
}

/// Subnet reindexings: affine maps on ω (monotone with cofinal image) and
/// explicit monotone cofinal maps on finite indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SubnetSpec {
    Affine { stride: u64, offset: u64 },
    ExplicitMonotoneCofinal(Vec<usize>),
    Composition(Vec<SubnetSpec>),
}

impl fmt::Display for SubnetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubnetSpec::Affine { stride, offset } => write!(f, "affine({stride},{offset})"),
            SubnetSpec::ExplicitMonotoneCofinal(m) => write!(f, "explicit{m:?}"),
            SubnetSpec::Composition(parts) => {
                let body: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "comp({})", body.join(" o "))
            }
        }
    }
}

impl SubnetSpec {
    pub fn affine(stride: u64, offset: u64) -> Result<Self, Error> {
        if stride == 0 {
            return Err(Error::InvalidSubnet(
                "stride 0 is not monotone with cofinal image".into(),
            ));
        }
        Ok(SubnetSpec::Affine { stride, offset })
    }

    pub fn parity_even() -> Self {
        SubnetSpec::Affine { stride: 2, offset: 0 }
    }

    pub fn parity_odd() -> Self {
        SubnetSpec::Affine { stride: 2, offset: 1 }
    }

    /// Validate both subnet clauses against a finite index order; the source
    /// order is the chain on the map positions.
    pub fn explicit(map: Vec<usize>, target: &FinitePreorder) -> Result<Self, Error> {
        for &v in &map {
            if v >= target.size() {
                return Err(Error::InvalidSubnet("map value out of range".into()));
            }
        }
        for w in map.windows(2) {
            if !target.leq(w[0], w[1]) {
                return Err(Error::InvalidSubnet("map is not monotone".into()));
            }
        }
        for j in 0..target.size() {
            if !map.iter().any(|&v| target.leq(j, v)) {
                return Err(Error::InvalidSubnet(format!(
                    "image is not cofinal: nothing dominates {j}"
                )));
            }
        }
        Ok(SubnetSpec::ExplicitMonotoneCofinal(map))
    }

    /// Apply the reindexing to a net, producing the subnet.
    pub fn apply(&self, space: &SpacePresentation, net: &NetSpec) -> Result<NetSpec, Error> {
        match self {
            SubnetSpec::Composition(parts) => {
                let mut cur = net.clone();
                // z = y ∘ g and y = x ∘ f gives z = x ∘ (f ∘ g)
                for part in parts.iter() {
                    cur = part.apply(space, &cur)?;
                }
                Ok(cur)
            }
            SubnetSpec::Affine { stride, offset } => match &net.index {
                IndexOrder::Omega => {
                    let term = match &net.term {
                        ValueTerm::Reindexed {
                            base,
                            stride: s0,
                            offset: o0,
                        } => ValueTerm::Reindexed {
                            base: base.clone(),
                            stride: s0 * stride,
                            offset: s0 * offset + o0,
                        },
                        t => ValueTerm::Reindexed {
                            base: Box::new(t.clone()),
                            stride: *stride,
                            offset: *offset,
                        },
                    };
                    Ok(NetSpec {
                        index: IndexOrder::Omega,
                        term,
                    })
                }
                IndexOrder::Finite(_) => Err(Error::InvalidSubnet(
                    "affine maps reindex ω-nets only".into(),
                )),
            },
            SubnetSpec::ExplicitMonotoneCofinal(map) => match (&net.index, &net.term) {
                (IndexOrder::Finite(pre), ValueTerm::Explicit(table)) => {
                    // re-validate against this index
                    let _ = SubnetSpec::explicit(map.clone(), pre)?;
                    let values: Vec<PointId> = map.iter().map(|&i| table[i].clone()).collect();
                    NetSpec::new(
                        IndexOrder::finite_chain(values.len()),
                        ValueTerm::Explicit(values),
                        space,
                    )
                }
                _ => Err(Error::InvalidSubnet(
                    "explicit maps reindex finite nets only".into(),
                )),
            },
        }
    }
}

/// Subnet reindexings compatible with the net's index kind.
fn grammar_subnets(net: &NetSpec) -> Vec<SubnetSpec> {
    match &net.index {
        IndexOrder::Omega => vec![
            SubnetSpec::Affine { stride: 1, offset: 0 },
            SubnetSpec::Affine { stride: 1, offset: 1 },
            SubnetSpec::parity_even(),
            SubnetSpec::parity_odd(),
            SubnetSpec::Affine { stride: 3, offset: 2 },
        ],
        IndexOrder::Finite(pre) => {
            let n = pre.size();
            let mut out = vec![];
            if let Ok(s) = SubnetSpec::explicit((0..n).collect(), pre) {
                out.push(s);
            }
            if n > 1 {
                if let Ok(s) = SubnetSpec::explicit(vec![n - 1], pre) {
                    out.push(s);
                }
            }
            out
        }
    }
}

pub fn kelley_check(
    space: &SpacePresentation,
    battery: &crate::battery::Battery,
) -> Result<KelleyReport, Error> {
    // Constants
    let mut checked = 0usize;
    let mut constants = None;
    for p in &battery.points {
        let net = NetSpec::constant(space, p)?;
        if !irr_converges(space, &net, p)?.is_proven() {
            constants = Some(AxiomStatus::Violated {
                config: format!("const({p}) does not converge to {p}"),
            });
            break;
        }
        checked += 1;
    }
    let constants = constants.unwrap_or(AxiomStatus::HoldsOnBattery { checked });

    // Subnets
    let mut checked = 0usize;
    let mut subnets = None;
    'outer: for net in &battery.nets {
        for y in &battery.points {
            if !irr_converges(space, net, y)?.is_proven() {
                continue;
            }
            for s in grammar_subnets(net) {
                let sub = s.apply(space, net)?;
                checked += 1;
                if !irr_converges(space, &sub, y)?.is_proven() {
                    subnets = Some(AxiomStatus::Violated {
                        config: format!("{net} -> {y} but subnet {s} does not converge"),
                    });
                    break 'outer;
                }
            }
        }
    }
    let subnets = subnets.unwrap_or(AxiomStatus::HoldsOnBattery { checked });

    // Divergence
    let mut checked = 0usize;
    let mut divergence = None;
    let pair_budget = 60usize;
    let mut truncated = false;
    'outer: for net in &battery.nets {
        for y in &battery.points {
            if irr_converges(space, net, y)?.is_proven() {
                continue;
            }
            if checked >= pair_budget {
                truncated = true;
                break 'outer;
            }
            checked += 1;
            let mut found = false;
            for s in grammar_subnets(net) {
                let sub = s.apply(space, net)?;
                let all_diverge = grammar_subnets(&sub).iter().all(|s2| {
                    s2.apply(space, &sub)
                        .and_then(|ss| irr_converges(space, &ss, y))
                        .map(|j| !j.is_proven())
                        .unwrap_or(false)
                });
                if all_diverge {
                    found = true;
                    break;
                }
            }
            if !found {
                divergence = Some(AxiomStatus::Violated {
                    config: format!(
                        "{net} does not converge to {y}, yet every grammar subnet has a convergent further subnet"
                    ),
                });
                break 'outer;
            }
        }
    }
    let divergence = divergence.unwrap_or(if truncated {
        AxiomStatus::Inconclusive {
            budget: format!("pair budget {pair_budget}"),
        }
    } else {
        AxiomStatus::HoldsOnBattery { checked }
    });

    // Iterated limits on exhaustive small finite configurations
    let mut checked = 0usize;
    let mut iterated = None;
    'cfg: for cfg in battery.iterated_configs(space) {
        let outer = NetSpec::new(
            IndexOrder::Finite(cfg.outer_index.clone()),
            ValueTerm::Explicit(cfg.outer_values.clone()),
            space,
        )?;
        if !irr_converges(space, &outer, &cfg.limit)?.is_proven() {
            continue;
        }
        let mut inner_ok = true;
        let mut inners = Vec::new();
        for (i, table) in cfg.inner_values.iter().enumerate() {
            let inner = NetSpec::new(
                IndexOrder::Finite(cfg.inner_indices[i].clone()),
                ValueTerm::Explicit(table.clone()),
                space,
            )?;
            if !irr_converges(space, &inner, &cfg.outer_values[i])?.is_proven() {
                inner_ok = false;
                break;
            }
            inners.push(inner);
        }
        if !inner_ok {
            continue;
        }
        // product net over I × ∏ J(i)
        let m_sizes: Vec<usize> = cfg.inner_indices.iter().map(|j| j.size()).collect();
        let m_total: usize = m_sizes.iter().product();
        if m_total == 0 || m_total > 81 {
            continue;
        }
        let m_order = {
            // build the product of the inner indices
            let mut acc = FinitePreorder { le: vec![vec![true]] };
            for j in &cfg.inner_indices {
                acc = acc.product(j);
            }
            acc
        };
        let product = cfg.outer_index.product(&m_order);
        let mut values = Vec::new();
        for i in 0..cfg.outer_index.size() {
            for f in 0..m_total {
                // decode f into choices per inner index
                let mut rest = f;
                let mut choice = Vec::new();
                for &s in m_sizes.iter().rev() {
                    choice.push(rest % s);
                    rest /= s;
                }
                choice.reverse();
                values.push(cfg.inner_values[i][choice[i]].clone());
            }
        }
        let prod_net = NetSpec::new(IndexOrder::Finite(product), ValueTerm::Explicit(values), space)?;
        checked += 1;
        if !irr_converges(space, &prod_net, &cfg.limit)?.is_proven() {
            iterated = Some(AxiomStatus::Violated {
                config: format!(
                    "iterated-limit configuration with outer limit {} fails on the product net",
                    cfg.limit
                ),
            });
            break 'cfg;
        }
    }
    // sampled ω-configuration on rational carriers: the outer net ascends to
    // q through x_i, each inner net ascends to x_i. In the product net over
    // pairs (i, f) of an outer index and a selector, e is an eventual lower
    // bound exactly when e eventually bounds the x_i strictly from below
    // (pick the selector threshold h(i) large enough once i has passed its
    // own threshold), so the product's lower-bound set is every carrier
    // point strictly below q and the conclusion reduces to a family search
    // over it.
    if iterated.is_none() && space.kind == SpaceKind::Rational {
        for q in space.rational_samples(2) {
            let target = PointId::Rational(q.clone());
            let outer = NetSpec::new(IndexOrder::Omega, ValueTerm::RationalAscent(q.clone()), space)?;
            if !irr_converges(space, &outer, &target)?.is_proven() {
                continue;
            }
            // every inner net ratascent(x_i) converges to its own x_i, so
            // the premises hold; judge the analytic product bound set
            let product_elb = rat_asc_elb(space, &q);
            checked += 1;
            if !judge_lower_bound_set(space, &product_elb, &target)?.is_proven() {
                iterated = Some(AxiomStatus::Violated {
                    config: format!(
                        "sampled ascending-of-ascending configuration at {q} fails on the product bound set"
                    ),
                });
                break;
            }
        }
    }
    let iterated = iterated.unwrap_or(AxiomStatus::HoldsOnBattery { checked });

    Ok(KelleyReport {
        constants,
        subnets,
        divergence,
        iterated_limits: iterated,
        seed: battery.seed,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TheoremConclusion {
    Topological,
    NotTopological,
    OutOfTheoremScope,
}

#[derive(Clone, Debug, Serialize)]
pub struct EmpiricalEntry {
    pub net: String,
    pub point: String,
    pub irr_converges: bool,
    pub topo_converges: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MainVerdict {
    pub irr_continuous: Verdict,
    pub k_bounded_sober: Verdict,
    pub conclusion: TheoremConclusion,
    pub empirical: Vec<EmpiricalEntry>,
    pub agreements: usize,
    pub disagreements: usize,
}

/// Combine continuity and k-bounded sobriety into the topologicality
/// conclusion and corroborate it empirically on the battery.
pub fn main_verdict(
    space: &SpacePresentation,
    battery: &crate::battery::Battery,
) -> Result<MainVerdict, Error> {
    let cont = crate::waybelow::is_irr_continuous(space)?.continuous;
    let kb = crate::derive::sobriety_spectrum(space)?.k_bounded_sober;
    let conclusion = if !kb.is_proven() {
        TheoremConclusion::OutOfTheoremScope
    } else if cont.is_proven() {
        TheoremConclusion::Topological
    } else {
        TheoremConclusion::NotTopological
    };
    let mut empirical = Vec::new();
    let mut agreements = 0usize;
    let mut disagreements = 0usize;
    for net in &battery.nets {
        for y in &battery.points {
            let i = irr_converges(space, net, y)?.is_proven();
            let t = topo_converges(space, net, y, 0)?.is_proven();
            if i == t {
                agreements += 1;
            } else {
                disagreements += 1;
            }
            empirical.push(EmpiricalEntry {
                net: net.to_string(),
                point: y.to_string(),
                irr_converges: i,
                topo_converges: t,
            });
        }
    }
    Ok(MainVerdict {
        irr_continuous: cont,
        k_bounded_sober: kb,
        conclusion,
        empirical,
        agreements,
        disagreements,
    })
}
