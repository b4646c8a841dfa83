//! Irreducibility decisions, suprema of definable sets, witness families,
//! and the classification of closed irreducible sets per space family.
//!
//! Irreducibility of a definable set is decided by searching for a two-part
//! closed cover: a nonempty set E fails to be irreducible exactly when its
//! top components split into two sides S₁, S₂ with E ⊆ cl(S₁) ∪ cl(S₂) and
//! neither closure covering E. Splitting at top-component granularity is
//! complete because closures are downward closed, so the lower part of any
//! atom rides along with its top. The refutation witness is the pair of
//! complementary opens.

use crate::error::Error;
use crate::point::PointId;
use crate::sets::{Atom, DefinableSet, HiBound, Interval, LoBound};
use crate::space::{SpaceKind, SpacePresentation};
use serde::Serialize;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum IrreducibilityCertificate {
    Singleton,
    /// Opens restricted to a chain carrier are nested.
    ChainNested,
    /// The set has a maximum, which every pair of meeting opens shares.
    DirectedWithMax,
    /// A single cofinal chain limb dominates the set.
    CofinalInChain,
    /// No separating closed cover exists among the top-component splits.
    PairwiseOpenCheck(String),
}

impl fmt::Display for IrreducibilityCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrreducibilityCertificate::Singleton => write!(f, "singleton"),
            IrreducibilityCertificate::ChainNested => write!(f, "chain-nested opens"),
            IrreducibilityCertificate::DirectedWithMax => write!(f, "directed with maximum"),
            IrreducibilityCertificate::CofinalInChain => write!(f, "cofinal in a chain"),
            IrreducibilityCertificate::PairwiseOpenCheck(t) => write!(f, "pairwise open check: {t}"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum IrrDecision {
    Irreducible(IrreducibilityCertificate),
    Reducible {
        open1: DefinableSet,
        open2: DefinableSet,
    },
}

impl IrrDecision {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, IrrDecision::Irreducible(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SupResult {
    Exists(PointId),
    NoUpperBound,
    /// Two upper bounds witnessing that no candidate is least.
    NoLeastUpperBound(PointId, PointId),
}

impl SupResult {
    pub fn point(&self) -> Option<&PointId> {
        match self {
            SupResult::Exists(p) => Some(p),
            _ => None,
        }
    }
}

impl fmt::Display for SupResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SupResult::Exists(p) => write!(f, "exists {p}"),
            SupResult::NoUpperBound => write!(f, "no upper bound"),
            SupResult::NoLeastUpperBound(a, b) => {
                write!(f, "no least upper bound (witnesses {a}, {b})")
            }
        }
    }
}

pub fn is_irreducible(space: &SpacePresentation, e: &DefinableSet) -> Result<IrrDecision, Error> {
    is_irreducible_at(space, e, space.topology.level)
}

pub fn is_irreducible_at(
    space: &SpacePresentation,
    e: &DefinableSet,
    level: u32,
) -> Result<IrrDecision, Error> {
    if e.is_empty() {
        return Err(Error::EmptySet);
    }
    if space.kind == SpaceKind::Rational {
        return Ok(IrrDecision::Irreducible(if is_singleton(e) {
            IrreducibilityCertificate::Singleton
        } else {
            IrreducibilityCertificate::ChainNested
        }));
    }
    if is_singleton(e) {
        return Ok(IrrDecision::Irreducible(IrreducibilityCertificate::Singleton));
    }
    if space.max_of(e).is_some() {
        return Ok(IrrDecision::Irreducible(
            IrreducibilityCertificate::DirectedWithMax,
        ));
    }
    // top components: one per atom
    let comps: Vec<DefinableSet> = e
        .atoms()
        .iter()
        .map(|a| DefinableSet::from_atoms(vec![a.clone()]))
        .collect();
    let n = comps.len();
    if n >= 2 {
        let splits = 1u32 << (n - 1);
        for mask in 1..splits {
            let mut s1 = DefinableSet::empty();
            let mut s2 = DefinableSet::empty();
            for (i, c) in comps.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    s1 = s1.union(c);
                } else {
                    s2 = s2.union(c);
                }
            }
            let c1 = space.closure_at(&s1, level);
            let c2 = space.closure_at(&s2, level);
            if e.is_subset_of(&c1) || e.is_subset_of(&c2) {
                continue;
            }
            if e.minus(&c1).is_subset_of(&c2) {
                return Ok(IrrDecision::Reducible {
                    open1: space.complement(&c2),
                    open2: space.complement(&c1),
                });
            }
        }
    }
    let cert = if n == 1 && matches!(e.atoms()[0], Atom::Tail { .. }) {
        IrreducibilityCertificate::CofinalInChain
    } else {
        IrreducibilityCertificate::PairwiseOpenCheck(format!(
            "no separating closed cover among {} component splits",
            (1u32 << n.saturating_sub(1)).saturating_sub(1)
        ))
    };
    Ok(IrrDecision::Irreducible(cert))
}

fn is_singleton(e: &DefinableSet) -> bool {
    if e.atoms().len() != 1 {
        return false;
    }
    match &e.atoms()[0] {
        Atom::FinPoint(_) => true,
        Atom::Seg { from, to, .. } => from == to,
        Atom::Tail { .. } => false,
        Atom::Ival(iv) => {
            matches!((&iv.lo, &iv.hi), (LoBound::Closed(a), HiBound::Closed(b)) if a == b)
        }
    }
}

/// Least upper bound of a nonempty definable set; exact on all families.
pub fn sup(space: &SpacePresentation, e: &DefinableSet) -> Result<SupResult, Error> {
    if e.is_empty() {
        return Err(Error::EmptySet);
    }
    let ub = space.upper_bounds(e)?;
    if ub.is_empty() {
        return Ok(SupResult::NoUpperBound);
    }
    if let Some(least) = space.least_of(&ub) {
        return Ok(SupResult::Exists(least));
    }
    // witness pair: two upper bounds with no common smaller bound in between
    if space.kind == SpaceKind::Rational {
        for a in ub.atoms() {
            if let Atom::Ival(iv) = a {
                let u1 = iv.sample();
                let lo_cut = match &iv.lo {
                    LoBound::Open(q) => crate::exact::Cut::Rat(q.clone()),
                    LoBound::Cut(s) => crate::exact::Cut::Surd(s.clone()),
                    _ => continue,
                };
                let u2 = crate::exact::rational_between(&lo_cut, &crate::exact::Cut::Rat(u1.clone()));
                return Ok(SupResult::NoLeastUpperBound(
                    PointId::Rational(u2),
                    PointId::Rational(u1),
                ));
            }
        }
    }
    let cands = ub.sample_points();
    for a in &cands {
        for b in &cands {
            if !space.leq_unchecked(a, b) && !space.leq_unchecked(b, a) {
                return Ok(SupResult::NoLeastUpperBound(a.clone(), b.clone()));
            }
        }
    }
    // comparable candidates but no least: report the two smallest samples
    let mut sorted = cands;
    sorted.sort();
    Ok(SupResult::NoLeastUpperBound(
        sorted[0].clone(),
        sorted.get(1).cloned().unwrap_or_else(|| sorted[0].clone()),
    ))
}

/// Parameterized families of irreducible sets sufficient to decide the
/// universal quantifiers over irreducible sets with suprema.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FamilySchema {
    Singletons,
    FullChain(String),
    /// Left-open intervals (a, q) with rational endpoints inside the carrier.
    RatLeftIntervals,
    /// Every directed subset of a finite poset.
    AllDirected,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessFamily {
    pub schemas: Vec<FamilySchema>,
}

pub fn witness_family(space: &SpacePresentation) -> Result<WitnessFamily, Error> {
    let schemas = match space.kind {
        SpaceKind::Finite => vec![FamilySchema::AllDirected],
        SpaceKind::V => {
            let mut v = vec![FamilySchema::Singletons];
            for c in &space.cells {
                if space.chain_sup(c).is_some() {
                    v.push(FamilySchema::FullChain(c.clone()));
                }
            }
            v
        }
        SpaceKind::Rational => vec![FamilySchema::Singletons, FamilySchema::RatLeftIntervals],
    };
    Ok(WitnessFamily { schemas })
}

impl WitnessFamily {
    /// Deterministic concrete instances under a budget.
    pub fn instances(&self, space: &SpacePresentation, budget: usize) -> Vec<DefinableSet> {
        let mut out = Vec::new();
        let bound = space.index_bound(&[]);
        for schema in &self.schemas {
            match schema {
                FamilySchema::Singletons => {
                    for p in space.schema_points(bound) {
                        out.push(DefinableSet::singleton(&p));
                    }
                    for q in space.rational_samples(4) {
                        out.push(DefinableSet::singleton(&PointId::Rational(q)));
                    }
                }
                FamilySchema::FullChain(c) => {
                    out.push(DefinableSet::from_atoms(vec![Atom::Tail {
                        cell: c.clone(),
                        from: 0,
                    }]));
                }
                FamilySchema::RatLeftIntervals => {
                    let samples = space.rational_samples(4);
                    for a in &samples {
                        for q in &samples {
                            if a < q {
                                let iv = Interval::new(LoBound::Open(a.clone()), HiBound::Open(q.clone()));
                                let inst = space
                                    .normalize_set(&DefinableSet::from_atoms(vec![Atom::Ival(iv)]))
                                    .unwrap();
                                if !inst.is_empty() {
                                    out.push(inst);
                                }
                            }
                        }
                    }
                }
                FamilySchema::AllDirected => {
                    out.extend(directed_subsets(space, budget));
                }
            }
            if out.len() >= budget {
                out.truncate(budget);
                break;
            }
        }
        out.dedup();
        out
    }
}

/// All directed subsets of a finite poset (nonempty), as definable sets.
pub fn directed_subsets(space: &SpacePresentation, budget: usize) -> Vec<DefinableSet> {
    let n = space.points.len();
    assert!(n <= 20, "finite poset too large for exhaustive enumeration");
    let pts: Vec<PointId> = space
        .points
        .iter()
        .map(|p| PointId::Finite(p.clone()))
        .collect();
    let mut out = Vec::new();
    'outer: for mask in 1u32..(1 << n) {
        let sel: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        for &i in &sel {
            for &j in &sel {
                let has_ub = sel.iter().any(|&k| {
                    space.leq_unchecked(&pts[i], &pts[k]) && space.leq_unchecked(&pts[j], &pts[k])
                });
                if !has_ub {
                    continue 'outer;
                }
            }
        }
        let atoms = sel
            .iter()
            .map(|&i| Atom::FinPoint(space.points[i].clone()))
            .collect();
        out.push(DefinableSet::from_atoms(atoms));
        if out.len() >= budget {
            break;
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedIrrKind {
    PointClosures,
    ChainUnion,
    RatLowerOpen,
    RatLowerCut,
    Whole,
}

/// A schematic closed irreducible set, tagged with its supremum status.
#[derive(Clone, Debug)]
pub struct ClosedIrrSchema {
    pub kind: ClosedIrrKind,
    pub description: String,
    pub example: DefinableSet,
    pub sup: SupResult,
    pub point_closure: bool,
    pub bounded: bool,
    /// Instances range over a parameter (all point closures at once).
    pub parametric: bool,
}

/// Enumerate the closed irreducible sets of the space at its level,
/// schematically. Point closures are always closed and irreducible and are
/// reported as one parametric schema; the remaining candidates are closures
/// of unions of whole-chain down-sets (for V-spaces) and, on rational
/// carriers, lower sets with non-attained bounds.
pub fn closed_irreducibles(space: &SpacePresentation) -> Result<Vec<ClosedIrrSchema>, Error> {
    closed_irreducibles_at(space, space.topology.level)
}

pub fn closed_irreducibles_at(
    space: &SpacePresentation,
    level: u32,
) -> Result<Vec<ClosedIrrSchema>, Error> {
    let mut out = Vec::new();
    let bound = space.index_bound(&[]);
    // point closures, one parametric schema with a concrete example
    let example_pt = space
        .schema_points(bound)
        .into_iter()
        .next()
        .or_else(|| space.rational_samples(2).into_iter().next().map(PointId::Rational))
        .ok_or_else(|| Error::UnsupportedKind("empty carrier".into()))?;
    out.push(ClosedIrrSchema {
        kind: ClosedIrrKind::PointClosures,
        description: "point closures cl({x}) = down(x), x in carrier".into(),
        example: space.down_point(&example_pt),
        sup: SupResult::Exists(example_pt),
        point_closure: true,
        bounded: true,
        parametric: true,
    });
    match space.kind {
        SpaceKind::Finite => {
            // closed irreducible = directed down-set = principal: nothing more
        }
        SpaceKind::V => {
            let nc = space.cells.len();
            assert!(nc <= 16, "too many chains for subset enumeration");
            let mut seen: Vec<DefinableSet> = Vec::new();
            for mask in 1u32..(1 << nc) {
                let mut gen = DefinableSet::empty();
                let mut names = Vec::new();
                for (ci, cell) in space.cells.iter().enumerate() {
                    if mask & (1 << ci) != 0 {
                        gen = gen.union(&space.down_of_whole_chain(cell));
                        names.push(cell.clone());
                    }
                }
                let c = space.closure_at(&gen, level);
                if c == space.whole_space() || seen.contains(&c) {
                    continue;
                }
                if space.max_of(&c).is_some() {
                    continue; // a point closure, already covered
                }
                if !space.is_closed_at(&c, level) {
                    continue;
                }
                if !is_irreducible_at(space, &c, level)?.is_irreducible() {
                    continue;
                }
                seen.push(c.clone());
                let s = sup(space, &c)?;
                let bounded = !space.upper_bounds(&c)?.is_empty();
                out.push(ClosedIrrSchema {
                    kind: ClosedIrrKind::ChainUnion,
                    description: format!("closure of chain down-set [{}]", names.join(",")),
                    example: c,
                    sup: s,
                    point_closure: false,
                    bounded,
                    parametric: false,
                });
            }
            // the whole space, when irreducible and not principal
            let whole = space.whole_space();
            if space.max_of(&whole).is_none()
                && is_irreducible_at(space, &whole, level)?.is_irreducible()
            {
                let s = sup(space, &whole)?;
                out.push(ClosedIrrSchema {
                    kind: ClosedIrrKind::Whole,
                    description: "whole space".into(),
                    example: whole.clone(),
                    sup: s,
                    point_closure: false,
                    bounded: !space.upper_bounds(&whole)?.is_empty(),
                    parametric: false,
                });
            }
        }
        SpaceKind::Rational => {
            let carrier = space.interval.clone().unwrap();
            // lower sets with a non-attained rational bound: closed only
            // where no supremum completion applies
            let samples = space.rational_samples(3);
            if let Some(q) = samples.iter().find(|q| {
                let iv = Interval::new(carrier.lo.clone(), HiBound::Open((*q).clone()))
                    .intersect(&carrier);
                !iv.is_empty()
            }) {
                let inst = DefinableSet::from_atoms(vec![Atom::Ival(
                    Interval::new(carrier.lo.clone(), HiBound::Open(q.clone())).intersect(&carrier),
                )]);
                if space.is_closed_at(&inst, level) {
                    out.push(ClosedIrrSchema {
                        kind: ClosedIrrKind::RatLowerOpen,
                        description: "lower sets [lo,q) with rational q not attained".into(),
                        example: inst,
                        sup: SupResult::Exists(PointId::Rational(q.clone())),
                        point_closure: false,
                        bounded: true,
                        parametric: true,
                    });
                }
            }
            if let Some(cut) = space.canonical_cut() {
                let inst = DefinableSet::from_atoms(vec![Atom::Ival(
                    Interval::new(carrier.lo.clone(), HiBound::Cut(cut.clone())).intersect(&carrier),
                )]);
                if space.is_closed_at(&inst, level) && !inst.is_empty() {
                    let s = sup(space, &inst)?;
                    debug_assert!(!matches!(s, SupResult::Exists(_)));
                    out.push(ClosedIrrSchema {
                        kind: ClosedIrrKind::RatLowerCut,
                        description: "lower sets [lo,c) at irrational cuts c".into(),
                        example: inst.clone(),
                        sup: s,
                        point_closure: false,
                        bounded: !space.upper_bounds(&inst)?.is_empty(),
                        parametric: true,
                    });
                }
            }
            let whole = space.whole_space();
            if space.max_of(&whole).is_none() {
                let s = sup(space, &whole)?;
                out.push(ClosedIrrSchema {
                    kind: ClosedIrrKind::Whole,
                    description: "whole space".into(),
                    example: whole.clone(),
                    sup: s,
                    point_closure: false,
                    bounded: !space.upper_bounds(&whole)?.is_empty(),
                    parametric: false,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_set, parse_space};

    fn lambda() -> SpacePresentation {
        parse_space(
            "space vspace; points top; chain A; chain B; rel chain_below A top; rel chain_below B top; sup A = top; sup B = top; topology scott",
        )
        .unwrap()
    }

    #[test]
    fn singletons_are_irreducible() {
        let s = parse_space("space finite; points a b; topology alexandroff").unwrap();
        let a = parse_set(&s, "{a}").unwrap();
        assert!(is_irreducible(&s, &a).unwrap().is_irreducible());
    }

    #[test]
    fn antichain_pair_is_reducible_with_open_witnesses() {
        let s = parse_space("space finite; points a b; topology alexandroff").unwrap();
        let e = parse_set(&s, "{a} | {b}").unwrap();
        match is_irreducible(&s, &e).unwrap() {
            IrrDecision::Reducible { open1, open2 } => {
                assert!(!e.intersect(&open1).is_empty());
                assert!(!e.intersect(&open2).is_empty());
                assert!(e.intersect(&open1).intersect(&open2).is_empty());
            }
            IrrDecision::Irreducible(_) => panic!("antichain must be reducible"),
        }
    }

    #[test]
    fn lambda_two_chains_scott_irreducible_but_not_alexandroff() {
        let scott = lambda();
        let e = parse_set(&scott, "tail(A,0) | tail(B,0)").unwrap();
        assert!(is_irreducible_at(&scott, &e, 0).unwrap().is_irreducible());
        let mut alex = lambda();
        alex.topology.base = crate::space::BaseTopology::Alexandroff;
        assert!(!is_irreducible_at(&alex, &e, 0).unwrap().is_irreducible());
    }

    #[test]
    fn rational_sets_always_irreducible() {
        let s = parse_space("space rational; interval 0 closed 1 closed; topology scott").unwrap();
        let e = parse_set(&s, "(0,1/4) | (1/2,1]").unwrap();
        assert!(is_irreducible(&s, &e).unwrap().is_irreducible());
    }

    #[test]
    fn sup_examples() {
        let l = lambda();
        let tail = parse_set(&l, "tail(A,5)").unwrap();
        assert_eq!(
            sup(&l, &tail).unwrap(),
            SupResult::Exists(PointId::finite("top"))
        );
        let s = parse_space("space finite; points a b; topology alexandroff").unwrap();
        let e = parse_set(&s, "{a} | {b}").unwrap();
        assert_eq!(sup(&s, &e).unwrap(), SupResult::NoUpperBound);
        let r = parse_space("space rational; interval 0 closed 1 closed; topology scott").unwrap();
        let e = parse_set(&r, "(0,1/2)").unwrap();
        assert_eq!(
            sup(&r, &e).unwrap(),
            SupResult::Exists(PointId::Rational(crate::exact::rat(1, 2)))
        );
        let cut = parse_set(&r, "[0,sqrt(2)/2)").unwrap();
        assert!(matches!(
            sup(&r, &cut).unwrap(),
            SupResult::NoLeastUpperBound(..)
        ));
    }

    #[test]
    fn empty_set_rejected() {
        let s = parse_space("space finite; points a; topology alexandroff").unwrap();
        assert!(matches!(
            is_irreducible(&s, &DefinableSet::empty()),
            Err(Error::EmptySet)
        ));
        assert!(matches!(sup(&s, &DefinableSet::empty()), Err(Error::EmptySet)));
    }

    #[test]
    fn directed_subsets_of_three_chain() {
        let s =
            parse_space("space finite; points a b c; rel a <= b; rel b <= c; topology alexandroff")
                .unwrap();
        // every nonempty subset of a chain is directed
        assert_eq!(directed_subsets(&s, 100).len(), 7);
    }

    #[test]
    fn closed_irreducibles_nat_inf_alexandroff() {
        let s = parse_space(
            "space vspace; points inf; chain N; rel chain_below N inf; sup N = inf; topology alexandroff",
        )
        .unwrap();
        let fam = closed_irreducibles(&s).unwrap();
        // point closures + the chain itself (closed, sup inf, not principal)
        assert_eq!(fam.len(), 2);
        let chain = fam.iter().find(|f| !f.point_closure).unwrap();
        assert_eq!(chain.example, parse_set(&s, "tail(N,0)").unwrap());
        assert_eq!(chain.sup, SupResult::Exists(PointId::finite("inf")));
    }

    #[test]
    fn closed_irreducibles_lambda_scott_all_principal() {
        let fam = closed_irreducibles(&lambda()).unwrap();
        assert!(fam.iter().all(|f| f.point_closure || f.example.is_empty()));
        assert_eq!(fam.len(), 1);
    }

    #[test]
    fn closed_irreducibles_rational_scott() {
        let s = parse_space("space rational; interval 0 closed 1 closed; topology scott").unwrap();
        let fam = closed_irreducibles(&s).unwrap();
        let descriptions: Vec<&str> = fam.iter().map(|f| f.description.as_str()).collect();
        assert!(descriptions.iter().any(|d| d.contains("point closures")));
        assert!(descriptions.iter().any(|d| d.contains("irrational cuts")));
        assert!(
            !descriptions.iter().any(|d| d.contains("rational q not attained")),
            "lower-open sets are not Scott-closed"
        );
        let alex =
            parse_space("space rational; interval 0 closed 1 closed; topology alexandroff").unwrap();
        let fam = closed_irreducibles(&alex).unwrap();
        assert!(fam
            .iter()
            .any(|f| f.description.contains("rational q not attained")));
    }
}
