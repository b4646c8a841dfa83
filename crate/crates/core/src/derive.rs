//! The irreducible-derivative operator, its iteration to a fixpoint, and the
//! sobriety hierarchy.

use crate::error::Error;
use crate::irr::{closed_irreducibles_at, ClosedIrrKind, SupResult};
use crate::sets::{Atom, DefinableSet, Interval, LoBound};
use crate::space::SpacePresentation;
use crate::verdict::Verdict;
use serde::Serialize;

/// One computed iteration stage: a level and its open-family fingerprint.
#[derive(Clone, Debug, Serialize)]
pub struct StageInfo {
    pub level: u32,
    pub basis: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GammaResult {
    Reached(u32),
    BoundHit(u32),
}

#[derive(Clone, Debug, Serialize)]
pub struct IterationTrace {
    pub stages: Vec<StageInfo>,
    pub gamma: GammaResult,
    pub fixpoint_reached: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SobrietyReport {
    pub sober: Verdict,
    pub bounded_sober: Verdict,
    pub k_bounded_sober: Verdict,
    /// failed level → offending closed irreducible set
    pub witnesses: Vec<(String, String)>,
}

/// Is `u` open in the derivative of the space's current topology?
/// Clause (1) requires openness in the current topology itself; clause (2)
/// quantifies over the closed irreducible sets with existing suprema.
pub fn si_open(space: &SpacePresentation, u: &DefinableSet) -> Result<Verdict, Error> {
    si_open_at(space, u, space.topology.level)
}

pub fn si_open_at(space: &SpacePresentation, u: &DefinableSet, level: u32) -> Result<Verdict, Error> {
    if !space.is_open_at(u, level) {
        return Ok(Verdict::refuted_trace(
            "not open in the underlying topology",
        ));
    }
    let mut checked = 0usize;
    for schema in closed_irreducibles_at(space, level)? {
        match schema.kind {
            ClosedIrrKind::PointClosures => {
                // sup attained at the defining point, which lies in the set
            }
            ClosedIrrKind::RatLowerCut => {
                // no supremum exists, so these never constrain openness
            }
            ClosedIrrKind::RatLowerOpen => {
                // for every rational q in u, [lo, q) must meet u; only a
                // closed lower bound of u pins a violating q
                let carrier = space.interval.clone().unwrap();
                for a in u.atoms() {
                    if let Atom::Ival(iv) = a {
                        if let LoBound::Closed(r) = &iv.lo {
                            let e = DefinableSet::from_atoms(vec![Atom::Ival(
                                Interval::new(carrier.lo.clone(), crate::sets::HiBound::Open(r.clone()))
                                    .intersect(&carrier),
                            )]);
                            if !e.is_empty() && e.intersect(u).is_empty() {
                                return Ok(Verdict::refuted_set(&e));
                            }
                        }
                    }
                }
                checked += 1;
            }
            ClosedIrrKind::ChainUnion | ClosedIrrKind::Whole => {
                if let SupResult::Exists(s) = &schema.sup {
                    if u.contains_point(s) && u.intersect(&schema.example).is_empty() {
                        return Ok(Verdict::refuted_set(&schema.example));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(Verdict::proven(format!(
        "open and supremum condition holds across {checked} closed-irreducible schemas"
    )))
}

/// The same carrier and order with the topology replaced by its derivative.
pub fn si_derivative(space: &SpacePresentation) -> SpacePresentation {
    let mut next = space.clone();
    next.topology.level += 1;
    next
}

/// Iterate the derivative until two consecutive stages coincide or the
/// bound is hit. Stage equality is decided on the generating open families.
pub fn si_iterate(space: &SpacePresentation, bound: u32) -> IterationTrace {
    let base_level = space.topology.level;
    let mut stages = Vec::new();
    for step in 0..=bound {
        let level = base_level + step;
        stages.push(StageInfo {
            level: step,
            basis: space.basis_schemas(level),
        });
        if space.stage_equal(level) {
            return IterationTrace {
                stages,
                gamma: GammaResult::Reached(step),
                fixpoint_reached: true,
            };
        }
    }
    IterationTrace {
        stages,
        gamma: GammaResult::BoundHit(bound),
        fixpoint_reached: false,
    }
}

/// Does the topology equal its own derivative?
pub fn has_si_infty_property(space: &SpacePresentation) -> Verdict {
    let level = space.topology.level;
    if space.stage_equal(level) {
        Verdict::proven("every generating open survives the derivative")
    } else {
        let dead = space
            .open_generators(level)
            .into_iter()
            .find(|g| space.is_open_at(g, level) && !space.is_open_at(g, level + 1));
        match dead {
            Some(g) => Verdict::refuted_set(&g),
            None => Verdict::refuted_trace("stage comparison failed"),
        }
    }
}

/// Classify the space in the sobriety hierarchy by scanning the closed
/// irreducible schemas: sober requires every one to be a point closure,
/// bounded sobriety exempts unbounded ones, k-bounded sobriety exempts
/// those without a supremum.
pub fn sobriety_spectrum(space: &SpacePresentation) -> Result<SobrietyReport, Error> {
    let fam = closed_irreducibles_at(space, space.topology.level)?;
    let mut witnesses = Vec::new();
    let mut sober = Verdict::proven("every closed irreducible is a point closure");
    let mut bounded = Verdict::proven("every bounded closed irreducible is a point closure");
    let mut kb =
        Verdict::proven("every closed irreducible with a supremum is a point closure");
    for schema in &fam {
        if schema.point_closure {
            continue;
        }
        if sober.is_proven() {
            sober = Verdict::refuted_set(&schema.example);
            witnesses.push(("sober".to_string(), schema.example.to_string()));
        }
        if schema.bounded && bounded.is_proven() {
            bounded = Verdict::refuted_set(&schema.example);
            witnesses.push(("bounded_sober".to_string(), schema.example.to_string()));
        }
        if matches!(schema.sup, SupResult::Exists(_)) && kb.is_proven() {
            kb = Verdict::refuted_set(&schema.example);
            witnesses.push(("k_bounded_sober".to_string(), schema.example.to_string()));
        }
    }
    debug_assert!(!sober.is_proven() || bounded.is_proven());
    debug_assert!(!bounded.is_proven() || kb.is_proven());
    Ok(SobrietyReport {
        sober,
        bounded_sober: bounded,
        k_bounded_sober: kb,
        witnesses,
    })
}

/// k-bounded sobriety and the derivative-fixpoint property must agree.
pub fn thm23_crosscheck(space: &SpacePresentation) -> Result<Verdict, Error> {
    let kb = sobriety_spectrum(space)?.k_bounded_sober;
    let si = has_si_infty_property(space);
    if kb.is_proven() == si.is_proven() {
        Ok(Verdict::proven(format!(
            "k-bounded sobriety and derivative fixpoint agree (both {})",
            if kb.is_proven() { "positive" } else { "negative" }
        )))
    } else {
        Ok(Verdict::refuted_trace(format!(
            "k-bounded sobriety is {kb} but the derivative fixpoint check is {si}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_set, parse_space};

    fn nat_inf() -> SpacePresentation {
        parse_space(
            "space vspace; points inf; chain N; rel chain_below N inf; sup N = inf; topology alexandroff",
        )
        .unwrap()
    }

    #[test]
    fn si_open_examples() {
        let s = nat_inf();
        let inf = parse_set(&s, "{inf}").unwrap();
        match si_open(&s, &inf).unwrap() {
            Verdict::Refuted { witness } => {
                assert_eq!(witness, crate::verdict::Witness::Set("tail(N,0)".into()));
            }
            v => panic!("expected refutation, got {v}"),
        }
        let up5 = parse_set(&s, "tail(N,5) | {inf}").unwrap();
        assert!(si_open(&s, &up5).unwrap().is_proven());
        assert!(si_open(&s, &s.whole_space()).unwrap().is_proven());
    }

    #[test]
    fn iteration_gamma_values() {
        let s = nat_inf();
        let tr = si_iterate(&s, 8);
        assert_eq!(tr.gamma, GammaResult::Reached(1));
        assert!(tr.fixpoint_reached);
        assert_eq!(tr.stages.len(), 2);

        let fin = parse_space("space finite; points a b; rel a <= b; topology alexandroff").unwrap();
        assert_eq!(si_iterate(&fin, 8).gamma, GammaResult::Reached(0));

        let r = parse_space("space rational; interval 0 closed 1 closed; topology scott").unwrap();
        assert_eq!(si_iterate(&r, 8).gamma, GammaResult::Reached(0));
    }

    #[test]
    fn sobriety_spectrum_examples() {
        let s = nat_inf();
        let rep = sobriety_spectrum(&s).unwrap();
        assert!(rep.k_bounded_sober.is_refuted());
        assert_eq!(
            rep.k_bounded_sober.witness().unwrap(),
            &crate::verdict::Witness::Set("tail(N,0)".into())
        );

        let r = parse_space("space rational; interval 0 closed 1 closed; topology scott").unwrap();
        let rep = sobriety_spectrum(&r).unwrap();
        assert!(rep.sober.is_refuted());
        assert!(rep.bounded_sober.is_refuted());
        assert!(rep.k_bounded_sober.is_proven());
        let w = rep.sober.witness().unwrap().to_string();
        assert!(w.contains("sqrt(2)"), "surd-cut witness expected, got {w}");

        let fin =
            parse_space("space finite; points a b c; rel a <= c; rel b <= c; topology scott").unwrap();
        let rep = sobriety_spectrum(&fin).unwrap();
        assert!(rep.sober.is_proven());
        assert!(rep.bounded_sober.is_proven());
        assert!(rep.k_bounded_sober.is_proven());
    }

    #[test]
    fn crosscheck_agrees_everywhere() {
        for text in [
            "space vspace; points inf; chain N; rel chain_below N inf; sup N = inf; topology alexandroff",
            "space vspace; points top; chain A; chain B; rel chain_below A top; rel chain_below B top; sup A = top; sup B = top; topology scott",
            "space rational; interval 0 closed 1 closed; topology scott",
            "space rational; interval 0 closed 1 closed; topology alexandroff",
            "space rational; interval 0 open 1 open; topology upper",
            "space finite; points a b c d; rel a <= b; rel c <= d; topology alexandroff",
            "space vspace; points inf; chain N; rel chain_below N inf; sup N = inf; topology upper",
        ] {
            let s = parse_space(text).unwrap();
            assert!(
                thm23_crosscheck(&s).unwrap().is_proven(),
                "crosscheck failed on {text}"
            );
        }
    }

    #[test]
    fn derived_presentation_has_si_infty() {
        let s = nat_inf();
        assert!(has_si_infty_property(&s).is_refuted());
        let d = si_derivative(&s);
        assert!(has_si_infty_property(&d).is_proven());
        // the derivative of the derivative is the derivative
        let dd = si_derivative(&d);
        assert!(has_si_infty_property(&dd).is_proven());
    }
}
