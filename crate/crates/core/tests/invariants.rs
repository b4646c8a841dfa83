//! Property and invariant suite across the bundled exemplars: order axioms,
//! the closure operator, the set algebra, way-below transitivity, and the
//! convergence-class laws.

use irrtopo_core::battery::{generate, BatteryConfig, BatterySize};
use irrtopo_core::derive::sobriety_spectrum;
use irrtopo_core::irr::{directed_subsets, is_irreducible, sup, witness_family, SupResult};
use irrtopo_core::nets::{eventual_lower_bounds, irr_converges, topo_converges, NetSpec};
use irrtopo_core::parse::{parse_set, parse_space};
use irrtopo_core::waybelow::{below_set, m_set, way_below};
use irrtopo_core::{DefinableSet, PointId, SpacePresentation};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn corpus(name: &str) -> SpacePresentation {
    let path = format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_space(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn exemplars() -> Vec<SpacePresentation> {
    [
        "chain3.space",
        "antichain_top.space",
        "diamond.space",
        "nat_inf.space",
        "nat_inf_upper.space",
        "lambda.space",
        "rat_cc_scott.space",
        "rat_cc_alex.space",
        "rat_oo_scott.space",
        "rat_uu_scott.space",
    ]
    .iter()
    .map(|n| corpus(n))
    .collect()
}

fn sample_points(space: &SpacePresentation) -> Vec<PointId> {
    let mut pts = space.schema_points(space.rational_samples(0).len() as u64 + 4);
    for q in space.rational_samples(4) {
        pts.push(PointId::Rational(q));
    }
    pts
}

#[test]
fn specialization_order_is_antisymmetric_and_matches_closure() {
    for space in exemplars() {
        assert!(space.specialization_check().is_proven());
        let pts = sample_points(&space);
        for x in &pts {
            for y in &pts {
                if x != y {
                    assert!(
                        !(space.leq(x, y).unwrap() && space.leq(y, x).unwrap()),
                        "antisymmetry violated at {x}, {y}"
                    );
                }
            }
        }
    }
}

#[test]
fn closure_is_extensive_monotone_idempotent() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for space in exemplars() {
        for _ in 0..40 {
            let e = random_set(&space, &mut rng);
            let f = random_set(&space, &mut rng);
            let cl_e = space.closure(&e);
            assert!(e.is_subset_of(&cl_e), "extensive on {e}");
            assert_eq!(space.closure(&cl_e), cl_e, "idempotent on {e}");
            let union = e.union(&f);
            assert!(
                cl_e.is_subset_of(&space.closure(&union)),
                "monotone on {e} vs {union}"
            );
        }
    }
}

#[test]
fn openness_duality_and_opens_are_up_sets() {
    for space in exemplars() {
        for level in 0..=1 {
            for g in space.open_generators(level) {
                assert_eq!(
                    space.is_open_at(&g, level),
                    space.is_closed_at(&space.complement(&g), level)
                );
                if space.is_open_at(&g, level) {
                    assert!(space.is_up_set(&g), "open set is not an up-set: {g}");
                }
            }
        }
    }
}

#[test]
fn closure_of_point_is_its_down_set() {
    for space in exemplars() {
        for p in sample_points(&space) {
            let s = DefinableSet::singleton(&p);
            assert_eq!(
                space.closure(&s),
                space.down_set(&s),
                "closure({p}) must be the principal down-set"
            );
        }
    }
}

#[test]
fn stage_topologies_weakly_decrease() {
    for space in exemplars() {
        for level in 0..=2u32 {
            for g in space.open_generators(level + 1) {
                if space.is_open_at(&g, level + 1) {
                    assert!(
                        space.is_open_at(&g, level),
                        "derived open not open below: {g}"
                    );
                }
            }
        }
    }
}

#[test]
fn derived_closedness_matches_supremum_condition() {
    // for sets closed in the underlying topology, closedness one level up is
    // exactly closure under suprema of witness-family subsets; a violating
    // subset always reaches a boundary of the set, so the bounded instance
    // family is extended with instances anchored at those boundaries
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for space in exemplars() {
        let fam = witness_family(&space).unwrap();
        for _ in 0..40 {
            let e = random_set(&space, &mut rng);
            let c = space.closure_at(&e, 0);
            let derived_closed = space.is_closed_at(&c, 1);
            let mut instances = fam.instances(&space, 64);
            for atom in c.atoms() {
                if let irrtopo_core::Atom::Ival(iv) = atom {
                    if let irrtopo_core::HiBound::Open(q) = &iv.hi {
                        let lit = format!("({},{q})", q - irrtopo_core::exact::rat_int(1));
                        if let Ok(inst) = parse_set(&space, &lit) {
                            if !inst.is_empty() {
                                instances.push(inst);
                            }
                        }
                    }
                }
            }
            let mut sup_cond = true;
            for inst in instances {
                if inst.is_subset_of(&c) {
                    if let Ok(SupResult::Exists(s)) = sup(&space, &inst) {
                        if !c.contains_point(&s) {
                            sup_cond = false;
                            break;
                        }
                    }
                }
            }
            assert_eq!(derived_closed, sup_cond, "on {c}");
        }
    }
}

#[test]
fn connectedness_agrees_with_derivative() {
    let mut spaces = exemplars();
    spaces.push(
        parse_space("space vspace; chain A; chain B; topology scott").unwrap(),
    );
    spaces.push(parse_space("space finite; points a b; topology alexandroff").unwrap());
    for space in spaces {
        let c0 = space.nontrivial_clopen_at(0).is_some();
        let c1 = space.nontrivial_clopen_at(1).is_some();
        assert_eq!(c0, c1, "connectedness disagrees across the derivative");
    }
}

#[test]
fn witness_family_instances_are_irreducible() {
    for space in exemplars() {
        for inst in witness_family(&space).unwrap().instances(&space, 128) {
            assert!(
                is_irreducible(&space, &inst).unwrap().is_irreducible(),
                "witness instance not irreducible: {inst}"
            );
        }
    }
}

#[test]
fn finite_irreducible_means_directed() {
    // exhaustive cross-check on the finite exemplars
    for name in ["chain3.space", "antichain_top.space", "diamond.space"] {
        let space = corpus(name);
        let n = space.points.len();
        let directed = directed_subsets(&space, usize::MAX);
        for mask in 1u32..(1 << n) {
            let parts: Vec<String> = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| format!("{{{}}}", space.points[i]))
                .collect();
            let e = parse_set(&space, &parts.join(" | ")).unwrap();
            let irr = is_irreducible(&space, &e).unwrap().is_irreducible();
            assert_eq!(irr, directed.contains(&e), "on {e} in {name}");
        }
    }
}

#[test]
fn way_below_implies_leq_and_composes() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for space in exemplars() {
        let pts = sample_points(&space);
        for _ in 0..80 {
            let pick = |rng: &mut ChaCha8Rng| pts[rng.gen_range(0..pts.len())].clone();
            let (u, x, y, z) = (pick(&mut rng), pick(&mut rng), pick(&mut rng), pick(&mut rng));
            if way_below(&space, &x, &y).unwrap().is_proven() {
                assert!(space.leq(&x, &y).unwrap(), "way-below must imply leq");
                if space.leq(&u, &x).unwrap() && space.leq(&y, &z).unwrap() {
                    assert!(
                        way_below(&space, &u, &z).unwrap().is_proven(),
                        "u <= x << y <= z must give u << z ({u},{x},{y},{z})"
                    );
                }
            }
        }
    }
}

#[test]
fn below_set_within_down_set_and_equal_on_finite() {
    for space in exemplars() {
        for p in sample_points(&space) {
            let below = below_set(&space, &p).unwrap();
            let down = space.down_set(&DefinableSet::singleton(&p));
            assert!(below.is_subset_of(&down), "below({p}) must sit inside down({p})");
            if space.kind == irrtopo_core::SpaceKind::Finite {
                assert_eq!(below, down, "on finite posets approximation is the down-set");
            }
        }
    }
}

#[test]
fn m_set_supremum_recovers_the_point_on_continuous_spaces() {
    for name in ["chain3.space", "diamond.space", "nat_inf.space", "rat_cc_scott.space"] {
        let space = corpus(name);
        for p in sample_points(&space) {
            let below = below_set(&space, &p).unwrap();
            if below.is_empty() {
                continue;
            }
            let (_, s) = m_set(&space, &p).unwrap();
            assert_eq!(
                s,
                Some(SupResult::Exists(p.clone())),
                "sup of the approximation union must be {p} on {name}"
            );
        }
    }
}

#[test]
fn constants_converge_to_value_and_below() {
    for space in exemplars() {
        for p in sample_points(&space) {
            let net = NetSpec::constant(&space, &p).unwrap();
            assert!(irr_converges(&space, &net, &p).unwrap().is_proven());
            for q in sample_points(&space) {
                if space.leq(&q, &p).unwrap() {
                    assert!(
                        irr_converges(&space, &net, &q).unwrap().is_proven(),
                        "const({p}) must converge to {q}"
                    );
                }
            }
        }
    }
}

#[test]
fn convergent_nets_are_eventually_above_the_approximation_set() {
    // on continuous spaces: a net converges to y exactly when every element
    // of below(y) is an eventual lower bound
    for name in ["diamond.space", "nat_inf.space", "rat_cc_scott.space"] {
        let space = corpus(name);
        let battery = generate(&space, &BatteryConfig { seed: 9, size: BatterySize::Small });
        for net in &battery.nets {
            let elb = eventual_lower_bounds(&space, net);
            for y in &battery.points {
                let converges = irr_converges(&space, net, y).unwrap().is_proven();
                let below = below_set(&space, y).unwrap();
                let dominated = below.is_subset_of(&elb);
                assert_eq!(converges, dominated, "on {name}: {net} -> {y}");
            }
        }
    }
}

#[test]
fn below_sets_fed_by_irreducibles_are_irreducible_on_kb_sober_spaces() {
    for name in ["lambda.space", "rat_cc_scott.space", "diamond.space"] {
        let space = corpus(name);
        assert!(sobriety_spectrum(&space).unwrap().k_bounded_sober.is_proven());
        for x in sample_points(&space) {
            let bx = below_set(&space, &x).unwrap();
            if bx.is_empty() {
                continue;
            }
            for e in witness_family(&space).unwrap().instances(&space, 64) {
                if e.is_subset_of(&bx) {
                    if let Ok(SupResult::Exists(s)) = sup(&space, &e) {
                        if space.leq(&x, &s).unwrap() {
                            assert!(
                                is_irreducible(&space, &bx).unwrap().is_irreducible(),
                                "below({x}) must be irreducible on {name}"
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn irr_convergence_implies_derived_topological_convergence() {
    for space in exemplars() {
        let battery = generate(&space, &BatteryConfig { seed: 11, size: BatterySize::Small });
        for net in &battery.nets {
            for y in &battery.points {
                if irr_converges(&space, net, y).unwrap().is_proven() {
                    assert!(
                        topo_converges(&space, net, y, 1).unwrap().is_proven(),
                        "class member {net} -> {y} must converge in the derivative"
                    );
                }
            }
        }
    }
}

#[test]
fn theorem_instance_on_continuous_kb_sober_spaces() {
    for name in ["chain3.space", "diamond.space", "rat_cc_scott.space", "rat_oo_scott.space"] {
        let space = corpus(name);
        let battery = generate(&space, &BatteryConfig { seed: 13, size: BatterySize::Small });
        for net in &battery.nets {
            for y in &battery.points {
                let i = irr_converges(&space, net, y).unwrap().is_proven();
                let t = topo_converges(&space, net, y, 0).unwrap().is_proven();
                assert_eq!(i, t, "class and topology disagree on {name}: {net} -> {y}");
            }
        }
    }
}

// ---------------------------------------------------------------------------
// set-algebra laws under proptest

fn random_set(space: &SpacePresentation, rng: &mut ChaCha8Rng) -> DefinableSet {
    let mut parts = Vec::new();
    match space.kind {
        irrtopo_core::SpaceKind::Finite => {
            for p in &space.points {
                if rng.gen_bool(0.5) {
                    parts.push(format!("{{{p}}}"));
                }
            }
        }
        irrtopo_core::SpaceKind::V => {
            for p in &space.points {
                if rng.gen_bool(0.3) {
                    parts.push(format!("{{{p}}}"));
                }
            }
            for c in &space.cells {
                match rng.gen_range(0..4) {
                    0 => {}
                    1 => parts.push(format!("tail({c},{})", rng.gen_range(0..4))),
                    2 => {
                        let a = rng.gen_range(0..4);
                        parts.push(format!("seg({c},{a},{})", a + rng.gen_range(0..3)))
                    }
                    _ => parts.push(format!("{{{c}@{}}}", rng.gen_range(0..5))),
                }
            }
        }
        irrtopo_core::SpaceKind::Rational => {
            for _ in 0..rng.gen_range(1..3) {
                let d = rng.gen_range(1..=6i64);
                let a = rng.gen_range(0..=d);
                let b = rng.gen_range(0..=d);
                let (a, b) = (a.min(b), a.max(b));
                let lb = if rng.gen_bool(0.5) { '[' } else { '(' };
                let hb = if rng.gen_bool(0.5) { ']' } else { ')' };
                parts.push(format!("{lb}{a}/{d},{b}/{d}{hb}"));
            }
        }
    }
    if parts.is_empty() {
        return DefinableSet::empty();
    }
    parse_set(space, &parts.join(" | ")).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn de_morgan_and_boolean_laws(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for space in exemplars() {
            let a = random_set(&space, &mut rng);
            let b = random_set(&space, &mut rng);
            let ca = space.complement(&a);
            let cb = space.complement(&b);
            // complement of a union is the intersection of complements
            prop_assert_eq!(space.complement(&a.union(&b)), ca.intersect(&cb));
            // complement of an intersection is the union of complements
            prop_assert_eq!(space.complement(&a.intersect(&b)), ca.union(&cb));
            // double complement is the identity
            prop_assert_eq!(space.complement(&ca), a.clone());
            // difference agrees with intersect-with-complement
            prop_assert_eq!(a.minus(&b), a.intersect(&cb));
        }
    }

    #[test]
    fn up_down_are_idempotent_closures(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for space in exemplars() {
            let a = random_set(&space, &mut rng);
            let up = space.up_set(&a);
            let down = space.down_set(&a);
            prop_assert!(a.is_subset_of(&up));
            prop_assert!(a.is_subset_of(&down));
            prop_assert_eq!(space.up_set(&up), up.clone());
            prop_assert_eq!(space.down_set(&down), down.clone());
        }
    }
}

#[test]
fn upper_topology_multi_limb_closures_and_sobriety() {
    // two chains sharing two incomparable dominators: in the upper topology
    // every finite cover of one chain swallows the other, so their union is
    // a closed irreducible set without a supremum
    let upper = parse_space(
        "space vspace; points p q; chain A; chain B; rel chain_below A p; rel chain_below A q; rel chain_below B p; rel chain_below B q; topology upper",
    )
    .unwrap();
    let a_down = parse_set(&upper, "tail(A,0)").unwrap();
    let both = parse_set(&upper, "tail(A,0) | tail(B,0)").unwrap();
    assert_eq!(upper.closure_at(&a_down, 0), both);
    assert!(upper.is_closed_at(&both, 0));
    assert!(is_irreducible(&upper, &both).unwrap().is_irreducible());
    assert!(matches!(
        sup(&upper, &both).unwrap(),
        SupResult::NoLeastUpperBound(..)
    ));
    let sob = sobriety_spectrum(&upper).unwrap();
    assert!(sob.sober.is_refuted(), "a non-principal closed irreducible exists");
    assert!(sob.k_bounded_sober.is_proven(), "it has no supremum, so kb-sobriety survives");
    assert!(irrtopo_core::derive::thm23_crosscheck(&upper).unwrap().is_proven());

    // under the Scott topology the same union splits into two closed parts
    let scott = parse_space(
        "space vspace; points p q; chain A; chain B; rel chain_below A p; rel chain_below A q; rel chain_below B p; rel chain_below B q; topology scott",
    )
    .unwrap();
    let both = parse_set(&scott, "tail(A,0) | tail(B,0)").unwrap();
    assert!(!is_irreducible(&scott, &both).unwrap().is_irreducible());
    assert!(scott.is_closed_at(&parse_set(&scott, "tail(A,0)").unwrap(), 0));
}

#[test]
fn posets_are_k_bounded_sober_in_the_upper_topology() {
    for name in ["nat_inf_upper.space", "rat_cc_upper.space"] {
        let space = corpus(name);
        assert!(
            sobriety_spectrum(&space).unwrap().k_bounded_sober.is_proven(),
            "{name} must be k-bounded sober under the upper topology"
        );
        assert!(
            irrtopo_core::derive::has_si_infty_property(&space).is_proven(),
            "{name}: the upper topology is its own derivative"
        );
    }
}

#[test]
fn witness_family_sufficiency_spotcheck() {
    // the universal statements over irreducible sets with suprema hold for
    // all sampled definable instances whenever they hold on the family
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for space in exemplars() {
        let pts = sample_points(&space);
        for _ in 0..60 {
            let e = random_set(&space, &mut rng);
            if e.is_empty() || !is_irreducible(&space, &e).unwrap().is_irreducible() {
                continue;
            }
            let s = match sup(&space, &e).unwrap() {
                SupResult::Exists(s) => s,
                _ => continue,
            };
            // way-below statement: engine-proven pairs are respected by e
            for x in &pts {
                for y in &pts {
                    if space.leq(y, &s).unwrap() && way_below(&space, x, y).unwrap().is_proven() {
                        assert!(
                            !e.intersect(&space.up_set(&DefinableSet::singleton(x))).is_empty(),
                            "family insufficiency: {e} has sup {s} >= {y} but misses the cone of {x}"
                        );
                    }
                }
            }
            // derivative statement: derivative-open sets meet e when they
            // hold its supremum
            let c = space.closure_at(&e, 0);
            for u in space.open_generators(0) {
                if space.is_open_at(&u, 1) && u.contains_point(&s) {
                    assert!(
                        !u.intersect(&c).is_empty(),
                        "derivative-open {u} holds sup {s} of closed irreducible {c} but misses it"
                    );
                }
            }
        }
    }
}

#[test]
fn eventual_lower_bound_table_agrees_with_prefix_brute_force() {
    // every ω-net value term's bound-set entry is checked against a length-64
    // prefix of actual net values
    use irrtopo_core::nets::{net_value, NetIndex};
    let n_prefix = 64u64;
    for space in exemplars() {
        let battery = generate(&space, &BatteryConfig { seed: 5, size: BatterySize::Small });
        for net in battery.nets.iter().filter(|n| n.index == irrtopo_core::IndexOrder::Omega) {
            let elb = eventual_lower_bounds(&space, net);
            let values: Vec<PointId> = (0..n_prefix)
                .map(|k| net_value(&space, net, NetIndex::Nat(k)).unwrap())
                .collect();
            for e in sample_points(&space) {
                let in_table = elb.contains_point(&e);
                if in_table {
                    // from some threshold inside the prefix the values
                    // dominate e
                    let ok = (0..n_prefix / 2).any(|k0| {
                        (k0..n_prefix).all(|k| space.leq(&e, &values[k as usize]).unwrap())
                    });
                    assert!(ok, "table says {e} bounds {net} but the prefix disagrees");
                } else {
                    // violations recur, so the second half of the prefix
                    // contains one
                    let violated = (n_prefix / 2..n_prefix)
                        .any(|k| !space.leq(&e, &values[k as usize]).unwrap());
                    assert!(violated, "table rejects {e} for {net} but the prefix never violates");
                }
            }
        }
    }
}

#[test]
fn proven_judgment_witnesses_replay() {
    for space in exemplars() {
        let battery = generate(&space, &BatteryConfig { seed: 21, size: BatterySize::Small });
        for net in &battery.nets {
            let elb = eventual_lower_bounds(&space, net);
            for y in &battery.points {
                let j = irr_converges(&space, net, y).unwrap();
                if !j.is_proven() {
                    continue;
                }
                let witness = parse_set(&space, j.witness_set.as_ref().unwrap()).unwrap();
                assert!(
                    witness.is_subset_of(&elb),
                    "witness of {net} -> {y} is not made of eventual lower bounds"
                );
                match sup(&space, &witness).unwrap() {
                    SupResult::Exists(s) => assert!(space.leq(y, &s).unwrap()),
                    other => panic!("witness of {net} -> {y} has no supremum: {other}"),
                }
                assert!(
                    is_irreducible(&space, &witness).unwrap().is_irreducible(),
                    "witness of {net} -> {y} is not irreducible"
                );
            }
        }
    }
}
