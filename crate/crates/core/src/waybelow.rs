//! The irreducible way-below relation, approximation sets, continuity, and
//! interpolation.
//!
//! x is way below y when every irreducible set whose supremum exists and
//! dominates y meets the upward closure of x. The quantifier is decided per
//! family through the witness schemas: singletons, whole chains with an
//! effective supremum, and left-open rational intervals. On a rational chain
//! the relation collapses to x < y, or x = y when y is the least element.

use crate::error::Error;
use crate::exact::{rat_int, Cut};
use crate::irr::{is_irreducible_at, sup, IrrDecision, SupResult};
use crate::point::PointId;
use crate::sets::{Atom, DefinableSet, HiBound, Interval, LoBound};
use crate::space::{SpaceKind, SpacePresentation};
use crate::verdict::Verdict;
use serde::Serialize;

#[derive(Clone, Debug)]
pub struct WayBelowResult {
    pub holds: Verdict,
}

impl WayBelowResult {
    pub fn is_proven(&self) -> bool {
        self.holds.is_proven()
    }
}

pub fn way_below(space: &SpacePresentation, x: &PointId, y: &PointId) -> Result<WayBelowResult, Error> {
    space.check_point(x)?;
    space.check_point(y)?;
    Ok(WayBelowResult {
        holds: way_below_verdict(space, x, y),
    })
}

pub(crate) fn way_below_bool(space: &SpacePresentation, x: &PointId, y: &PointId) -> bool {
    way_below_verdict(space, x, y).is_proven()
}

fn way_below_verdict(space: &SpacePresentation, x: &PointId, y: &PointId) -> Verdict {
    match space.kind {
        SpaceKind::Finite => {
            // directed subsets as bitmasks over the point table; the witness
            // set is materialized only on refutation
            let pp = space.finite_leq();
            let n = space.points.len();
            let (xi, yi) = match (x, y) {
                (PointId::Finite(a), PointId::Finite(b)) => (
                    space.points.iter().position(|p| p == a).unwrap(),
                    space.points.iter().position(|p| p == b).unwrap(),
                ),
                _ => unreachable!("finite carrier"),
            };
            let up_x: u32 = (0..n).map(|j| (pp[xi][j] as u32) << j).sum();
            for mask in 1u32..(1 << n) {
                let sel: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
                // a finite directed set has a maximum inside itself
                let max = match sel
                    .iter()
                    .copied()
                    .find(|&m| sel.iter().all(|&i| pp[i][m]))
                {
                    Some(m) => m,
                    None => continue,
                };
                let directed = sel.iter().all(|&i| {
                    sel.iter()
                        .all(|&j| sel.iter().any(|&k| pp[i][k] && pp[j][k]))
                });
                if directed && pp[yi][max] && mask & up_x == 0 {
                    let atoms = sel
                        .iter()
                        .map(|&i| crate::sets::Atom::FinPoint(space.points[i].clone()))
                        .collect();
                    return Verdict::refuted_set(&DefinableSet::from_atoms(atoms));
                }
            }
            Verdict::proven("all directed subsets with dominating maximum meet the upper cone")
        }
        SpaceKind::V => {
            let singleton_bound = {
                let ux = space.up_point(x);
                let uy = space.up_point(y);
                space.index_bound(&[&ux, &uy])
            };
            // singleton instances: every point above y must lie above x
            for p in space.schema_points(singleton_bound) {
                if space.leq_unchecked(y, &p) && !space.leq_unchecked(x, &p) {
                    return Verdict::refuted_set(&DefinableSet::singleton(&p));
                }
            }
            // whole-chain instances with an effective supremum above y
            for cell in &space.cells {
                if let Some(s) = space.chain_sup(cell) {
                    if space.leq_unchecked(y, &s) {
                        let chain = DefinableSet::from_atoms(vec![Atom::Tail {
                            cell: cell.clone(),
                            from: 0,
                        }]);
                        if chain.intersect(&space.up_point(x)).is_empty() {
                            return Verdict::refuted_set(&chain);
                        }
                    }
                }
            }
            Verdict::proven("all witness-family instances with supremum above the target meet the upper cone")
        }
        SpaceKind::Rational => {
            let (xq, yq) = match (x, y) {
                (PointId::Rational(a), PointId::Rational(b)) => (a, b),
                _ => unreachable!("rational carrier"),
            };
            if xq < yq {
                return Verdict::proven("strictly below the target on a dense chain");
            }
            let min = carrier_min(space);
            if xq == yq && min.as_ref() == Some(yq) {
                return Verdict::proven("the least element is way below itself");
            }
            if xq > yq {
                return Verdict::refuted_set(&DefinableSet::singleton(y));
            }
            // x == y above the least element: a strictly ascending interval
            // with supremum y avoids the upper cone of x
            let e = left_open_interval_below(space, yq);
            Verdict::refuted_set(&e)
        }
    }
}

pub(crate) fn carrier_min(space: &SpacePresentation) -> Option<crate::exact::Rat> {
    match &space.interval.as_ref()?.lo {
        LoBound::Closed(q) => Some(q.clone()),
        _ => None,
    }
}

fn left_open_interval_below(space: &SpacePresentation, q: &crate::exact::Rat) -> DefinableSet {
    let carrier = space.interval.clone().unwrap();
    let a = match &carrier.lo {
        LoBound::Closed(l) | LoBound::Open(l) => {
            crate::exact::rational_between(&Cut::Rat(l.clone()), &Cut::Rat(q.clone()))
        }
        LoBound::Unbounded => q - rat_int(1),
        LoBound::Cut(_) => unreachable!("carrier endpoints are rational"),
    };
    DefinableSet::from_atoms(vec![Atom::Ival(
        Interval::new(LoBound::Open(a), HiBound::Open(q.clone())).intersect(&carrier),
    )])
}

/// The approximation set of a point: everything way below it.
pub fn below_set(space: &SpacePresentation, x: &PointId) -> Result<DefinableSet, Error> {
    space.check_point(x)?;
    match space.kind {
        SpaceKind::Rational => {
            let xq = match x {
                PointId::Rational(q) => q.clone(),
                _ => unreachable!(),
            };
            let carrier = space.interval.clone().unwrap();
            if carrier_min(space).as_ref() == Some(&xq) {
                return Ok(DefinableSet::singleton(x));
            }
            Ok(DefinableSet::from_atoms(vec![Atom::Ival(
                Interval::new(carrier.lo.clone(), HiBound::Open(xq)).intersect(&carrier),
            )]))
        }
        _ => {
            let ux = space.up_point(x);
            let bound = space.index_bound(&[&ux]).max(point_index_bound(x));
            Ok(space.collect_down(bound, |z| way_below_bool(space, z, x)))
        }
    }
}

/// The dual cone: everything the point is way below, with an informational
/// openness verdict.
pub fn above_set(space: &SpacePresentation, x: &PointId) -> Result<(DefinableSet, bool), Error> {
    space.check_point(x)?;
    let set = match space.kind {
        SpaceKind::Rational => {
            let xq = match x {
                PointId::Rational(q) => q.clone(),
                _ => unreachable!(),
            };
            let carrier = space.interval.clone().unwrap();
            if carrier_min(space).as_ref() == Some(&xq) {
                space.whole_space()
            } else {
                DefinableSet::from_atoms(vec![Atom::Ival(
                    Interval::new(LoBound::Open(xq), carrier.hi.clone()).intersect(&carrier),
                )])
            }
        }
        _ => {
            let ux = space.up_point(x);
            let bound = space.index_bound(&[&ux]).max(point_index_bound(x));
            space.collect_up(bound, |z| way_below_bool(space, x, z))
        }
    };
    let open = space.is_open(&set);
    Ok((set, open))
}

fn point_index_bound(p: &PointId) -> u64 {
    match p {
        PointId::ChainAt { index, .. } => index + 1,
        _ => 0,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SchemaContinuity {
    pub schema: String,
    pub below_set: String,
    pub below_irreducible: bool,
    pub sup_is_the_point: bool,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContinuityReport {
    pub continuous: Verdict,
    pub per_schema: Vec<SchemaContinuity>,
}

/// Decide whether every point is the supremum of its approximation set and
/// that set is irreducible.
pub fn is_irr_continuous(space: &SpacePresentation) -> Result<ContinuityReport, Error> {
    let level = space.topology.level;
    let mut per_schema = Vec::new();
    let mut witness: Option<PointId> = None;
    let bound = space.index_bound(&[]);

    let check_point = |p: &PointId, schema: String, per: &mut Vec<SchemaContinuity>| -> Result<bool, Error> {
        let bs = below_set(space, p)?;
        let irr = !bs.is_empty()
            && matches!(is_irreducible_at(space, &bs, level)?, IrrDecision::Irreducible(_));
        let sup_ok = match sup(space, &bs) {
            Ok(SupResult::Exists(s)) => &s == p,
            _ => false,
        };
        let ok = irr && sup_ok;
        per.push(SchemaContinuity {
            schema,
            below_set: bs.to_string(),
            below_irreducible: irr,
            sup_is_the_point: sup_ok,
            ok,
        });
        Ok(ok)
    };

    match space.kind {
        SpaceKind::Rational => {
            let mut samples = space.rational_samples(4);
            if let Some(m) = carrier_min(space) {
                samples.push(m);
            }
            samples.sort();
            samples.dedup();
            for q in samples {
                let p = PointId::Rational(q);
                let ok = check_point(&p, format!("{p}"), &mut per_schema)?;
                if !ok && witness.is_none() {
                    witness = Some(p);
                }
            }
        }
        SpaceKind::Finite => {
            for name in &space.points {
                let p = PointId::Finite(name.clone());
                let ok = check_point(&p, name.clone(), &mut per_schema)?;
                if !ok && witness.is_none() {
                    witness = Some(p);
                }
            }
        }
        SpaceKind::V => {
            for name in &space.points {
                let p = PointId::Finite(name.clone());
                let ok = check_point(&p, name.clone(), &mut per_schema)?;
                if !ok && witness.is_none() {
                    witness = Some(p);
                }
            }
            for cell in &space.cells {
                // all representative indices must pass; behaviour is
                // uniform past the relation bound
                let mut all_ok = true;
                let mut shown = false;
                for k in 0..=bound + 1 {
                    let p = PointId::chain_at(cell, k);
                    let bs = below_set(space, &p)?;
                    let irr = !bs.is_empty()
                        && matches!(is_irreducible_at(space, &bs, level)?, IrrDecision::Irreducible(_));
                    let sup_ok = match sup(space, &bs) {
                        Ok(SupResult::Exists(s)) => s == p,
                        _ => false,
                    };
                    let ok = irr && sup_ok;
                    if !ok && witness.is_none() {
                        witness = Some(p.clone());
                    }
                    all_ok &= ok;
                    if k == bound + 1 || (!ok && !shown) {
                        per_schema.push(SchemaContinuity {
                            schema: format!("{cell}@k (shown at k={k})"),
                            below_set: bs.to_string(),
                            below_irreducible: irr,
                            sup_is_the_point: sup_ok,
                            ok,
                        });
                        shown = true;
                        if !ok {
                            break;
                        }
                    }
                }
                let _ = all_ok;
            }
        }
    }

    let continuous = match witness {
        None => Verdict::proven("every carrier schema satisfies both continuity clauses"),
        Some(p) => Verdict::refuted_point(&p),
    };
    Ok(ContinuityReport {
        continuous,
        per_schema,
    })
}

/// The union of approximation sets of everything way below x, with its
/// supremum.
pub fn m_set(space: &SpacePresentation, x: &PointId) -> Result<(DefinableSet, Option<SupResult>), Error> {
    space.check_point(x)?;
    let below = below_set(space, x)?;
    if below.is_empty() {
        return Ok((DefinableSet::empty(), None));
    }
    let set = match space.kind {
        SpaceKind::Rational => {
            // the union of [lo, y) over y < x is [lo, x) by density, and the
            // degenerate least case stays a singleton: both equal below(x)
            below.clone()
        }
        _ => {
            let bound = space.index_bound(&[&below]).max(point_index_bound(x));
            let mut reps = below.sample_points();
            for a in below.atoms() {
                if let Atom::Tail { cell, .. } = a {
                    reps.push(PointId::chain_at(cell, bound + 1));
                }
            }
            space.collect_down(bound, |z| {
                reps.iter().any(|y| way_below_bool(space, z, y))
            })
        }
    };
    let s = if set.is_empty() {
        None
    } else {
        Some(sup(space, &set)?)
    };
    Ok((set, s))
}

#[derive(Clone, Debug, Serialize)]
pub enum InterpolationOutcome {
    Found {
        interpolant: String,
        hypotheses_met: bool,
    },
    NoInterpolant {
        hypotheses_met: bool,
        note: String,
    },
}

/// Search for y with z way below y way below x. The hypotheses (continuity
/// and k-bounded sobriety) are checked and reported; the search itself is
/// deterministic: rational carriers take the midpoint, other kinds take the
/// order-maximal valid candidate.
pub fn interpolate(
    space: &SpacePresentation,
    z: &PointId,
    x: &PointId,
) -> Result<InterpolationOutcome, Error> {
    space.check_point(z)?;
    space.check_point(x)?;
    let continuous = is_irr_continuous(space)?.continuous.is_proven();
    let kb = crate::derive::sobriety_spectrum(space)?
        .k_bounded_sober
        .is_proven();
    let premise = way_below_bool(space, z, x);
    let hypotheses_met = continuous && kb && premise;
    if !premise {
        return Ok(InterpolationOutcome::NoInterpolant {
            hypotheses_met: false,
            note: "the pair is not in the way-below relation".into(),
        });
    }
    let candidate = match space.kind {
        SpaceKind::Rational => {
            let (zq, xq) = match (z, x) {
                (PointId::Rational(a), PointId::Rational(b)) => (a.clone(), b.clone()),
                _ => unreachable!(),
            };
            if zq == xq {
                Some(z.clone())
            } else {
                Some(PointId::Rational((zq + xq) / rat_int(2)))
            }
        }
        _ => {
            let below = below_set(space, x)?;
            let mut cands = below.sample_points();
            cands.push(z.clone());
            cands.push(x.clone());
            let mut valid: Vec<PointId> = cands
                .into_iter()
                .filter(|y| {
                    space.point_in_carrier(y)
                        && way_below_bool(space, z, y)
                        && way_below_bool(space, y, x)
                })
                .collect();
            valid.sort();
            valid.dedup();
            // order-maximal candidate, ties broken canonically
            valid
                .iter()
                .find(|m| valid.iter().all(|v| !space.leq_unchecked(m, v) || space.leq_unchecked(v, m)))
                .cloned()
                .or_else(|| valid.last().cloned())
        }
    };
    match candidate {
        Some(y) if way_below_bool(space, z, &y) && way_below_bool(space, &y, x) => {
            Ok(InterpolationOutcome::Found {
                interpolant: y.to_string(),
                hypotheses_met,
            })
        }
        _ => Ok(InterpolationOutcome::NoInterpolant {
            hypotheses_met,
            note: if hypotheses_met {
                "no interpolant found despite met hypotheses".into()
            } else {
                "hypotheses not met".into()
            },
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::parse::{parse_set, parse_space};

    fn rat01() -> SpacePresentation {
        parse_space("space rational; interval 0 closed 1 closed; topology scott").unwrap()
    }

    fn lambda() -> SpacePresentation {
        parse_space(
            "space vspace; points top; chain A; chain B; rel chain_below A top; rel chain_below B top; sup A = top; sup B = top; topology scott",
        )
        .unwrap()
    }

    fn nat_inf() -> SpacePresentation {
        parse_space(
            "space vspace; points inf; chain N; rel chain_below N inf; sup N = inf; topology alexandroff",
        )
        .unwrap()
    }

    #[test]
    fn rational_way_below_characterization() {
        let s = rat01();
        let p = |n, d| PointId::Rational(rat(n, d));
        assert!(way_below(&s, &p(1, 3), &p(1, 2)).unwrap().is_proven());
        let r = way_below(&s, &p(1, 2), &p(1, 2)).unwrap();
        assert!(!r.is_proven());
        assert!(
            r.holds.witness().unwrap().to_string().contains("1/2")
        );
        assert!(way_below(&s, &p(0, 1), &p(0, 1)).unwrap().is_proven());
        assert!(!way_below(&s, &p(1, 2), &p(1, 3)).unwrap().is_proven());
    }

    #[test]
    fn lambda_way_below_and_below_sets() {
        let s = lambda();
        let top = PointId::finite("top");
        let a3 = PointId::chain_at("A", 3);
        let r = way_below(&s, &a3, &top).unwrap();
        assert!(!r.is_proven());
        assert_eq!(
            r.holds.witness().unwrap(),
            &crate::verdict::Witness::Set("tail(B,0)".into())
        );
        assert!(below_set(&s, &top).unwrap().is_empty());
        assert!(below_set(&s, &a3).unwrap().is_empty());
    }

    #[test]
    fn nat_inf_below_sets() {
        let s = nat_inf();
        let inf = PointId::finite("inf");
        assert_eq!(
            below_set(&s, &inf).unwrap(),
            parse_set(&s, "tail(N,0)").unwrap()
        );
        let n5 = PointId::chain_at("N", 5);
        assert_eq!(
            below_set(&s, &n5).unwrap(),
            parse_set(&s, "seg(N,0,5)").unwrap()
        );
    }

    #[test]
    fn rational_below_and_above() {
        let s = rat01();
        let half = PointId::Rational(rat(1, 2));
        assert_eq!(
            below_set(&s, &half).unwrap(),
            parse_set(&s, "[0,1/2)").unwrap()
        );
        let (ab, open) = above_set(&s, &half).unwrap();
        assert_eq!(ab, parse_set(&s, "(1/2,1]").unwrap());
        assert!(open);
        let zero = PointId::Rational(rat(0, 1));
        assert_eq!(below_set(&s, &zero).unwrap(), DefinableSet::singleton(&zero));
    }

    #[test]
    fn continuity_reports() {
        assert!(is_irr_continuous(&rat01()).unwrap().continuous.is_proven());
        let lam = is_irr_continuous(&lambda()).unwrap();
        assert!(lam.continuous.is_refuted());
        assert_eq!(
            lam.continuous.witness().unwrap(),
            &crate::verdict::Witness::Point("top".into())
        );
        // the chain-with-top space is continuous even at the Alexandroff level
        assert!(is_irr_continuous(&nat_inf()).unwrap().continuous.is_proven());
        let fin = parse_space(
            "space finite; points a b c; rel a <= c; rel b <= c; topology alexandroff",
        )
        .unwrap();
        assert!(is_irr_continuous(&fin).unwrap().continuous.is_proven());
    }

    #[test]
    fn m_set_examples() {
        let s = rat01();
        let half = PointId::Rational(rat(1, 2));
        let (m, ms) = m_set(&s, &half).unwrap();
        assert_eq!(m, parse_set(&s, "[0,1/2)").unwrap());
        assert_eq!(ms, Some(SupResult::Exists(half)));

        let lam = lambda();
        let (m, _) = m_set(&lam, &PointId::finite("top")).unwrap();
        assert!(m.is_empty());

        let fin =
            parse_space("space finite; points a b; rel a <= b; topology alexandroff").unwrap();
        let (m, ms) = m_set(&fin, &PointId::finite("b")).unwrap();
        assert_eq!(m, parse_set(&fin, "{a} | {b}").unwrap());
        assert_eq!(ms, Some(SupResult::Exists(PointId::finite("b"))));
    }

    #[test]
    fn interpolation_on_the_rational_chain() {
        let s = rat01();
        let q = |n, d| PointId::Rational(rat(n, d));
        match interpolate(&s, &q(1, 4), &q(1, 2)).unwrap() {
            InterpolationOutcome::Found {
                interpolant,
                hypotheses_met,
            } => {
                assert_eq!(interpolant, "3/8");
                assert!(hypotheses_met);
            }
            other => panic!("expected interpolant, got {other:?}"),
        }
        match interpolate(&s, &q(0, 1), &q(0, 1)).unwrap() {
            InterpolationOutcome::Found { interpolant, .. } => assert_eq!(interpolant, "0"),
            other => panic!("expected reflexive interpolant, got {other:?}"),
        }
    }

    #[test]
    fn interpolation_on_a_finite_chain() {
        let s = parse_space(
            "space finite; points a b c; rel a <= b; rel b <= c; topology alexandroff",
        )
        .unwrap();
        match interpolate(&s, &PointId::finite("a"), &PointId::finite("c")).unwrap() {
            InterpolationOutcome::Found { interpolant, .. } => assert_eq!(interpolant, "c"),
            other => panic!("expected interpolant, got {other:?}"),
        }
    }
}
