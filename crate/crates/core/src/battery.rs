//! Deterministic net batteries for the axiom harness and empirical checks.
//!
//! Generation is seeded; identical seeds produce identical batteries, which
//! keeps reports byte-stable.

use crate::exact::Rat;
use crate::nets::{FinitePreorder, IndexOrder, NetSpec, ValueTerm};
use crate::point::PointId;
use crate::space::{SpaceKind, SpacePresentation};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BatterySize {
    Small,
    Large,
}

#[derive(Clone, Copy, Debug)]
pub struct BatteryConfig {
    pub seed: u64,
    pub size: BatterySize,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        BatteryConfig {
            seed: 42,
            size: BatterySize::Small,
        }
    }
}

fn pairo(pairs: &mut Vec<(ValueTerm, ValueTerm)>, a: &ValueTerm, b: &ValueTerm) {
    pairs.push((a.clone(), b.clone()));
}

#[derive(Clone, Debug)]
pub struct Battery {
    pub nets: Vec<NetSpec>,
    pub points: Vec<PointId>,
    pub seed: u64,
    pub size: BatterySize,
}

/// One iterated-limit configuration: an outer net with a limit candidate
/// and one inner net per outer index.
#[derive(Clone, Debug)]
pub struct IteratedConfig {
    pub outer_index: FinitePreorder,
    pub outer_values: Vec<PointId>,
    pub inner_indices: Vec<FinitePreorder>,
    pub inner_values: Vec<Vec<PointId>>,
    pub limit: PointId,
}

pub fn generate(space: &SpacePresentation, config: &BatteryConfig) -> Battery {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (max_points, max_consts, max_explicit) = match config.size {
        BatterySize::Small => (6usize, 4usize, 3usize),
        BatterySize::Large => (10, 8, 6),
    };
    let bound = space.index_bound(&[]);

    let mut points: Vec<PointId> = Vec::new();
    for p in &space.points {
        points.push(PointId::Finite(p.clone()));
    }
    for c in &space.cells {
        points.push(PointId::chain_at(c, 0));
        points.push(PointId::chain_at(c, bound + 1));
    }
    for q in space.rational_samples(3) {
        points.push(PointId::Rational(q));
    }
    points.sort();
    points.dedup();
    while points.len() > max_points {
        let i = rng.gen_range(0..points.len());
        points.remove(i);
    }

    let mut nets: Vec<NetSpec> = Vec::new();
    let push = |n: Result<NetSpec, crate::error::Error>, nets: &mut Vec<NetSpec>| {
        if let Ok(n) = n {
            if !nets.contains(&n) {
                nets.push(n);
            }
        }
    };
    for p in points.iter().take(max_consts) {
        push(NetSpec::constant(space, p), &mut nets);
    }
    for c in &space.cells {
        push(
            NetSpec::new(IndexOrder::Omega, ValueTerm::ChainAscent(c.clone()), space),
            &mut nets,
        );
    }
    if space.kind == SpaceKind::Rational {
        let targets: Vec<Rat> = space.rational_samples(2);
        for q in targets.iter().take(3) {
            push(
                NetSpec::new(
                    IndexOrder::Omega,
                    ValueTerm::RationalAscent(q.clone()),
                    space,
                ),
                &mut nets,
            );
        }
    }
    // interleavings: ascending ω-terms first (the interesting mixtures),
    // then ascent-with-constant blends
    let ascents: Vec<ValueTerm> = nets
        .iter()
        .filter(|n| {
            matches!(
                n.term,
                ValueTerm::ChainAscent(_) | ValueTerm::RationalAscent(_)
            )
        })
        .map(|n| n.term.clone())
        .collect();
    let consts: Vec<ValueTerm> = nets
        .iter()
        .filter(|n| matches!(n.term, ValueTerm::Const(_)))
        .map(|n| n.term.clone())
        .collect();
    let mut pairs: Vec<(ValueTerm, ValueTerm)> = Vec::new();
    for i in 0..ascents.len() {
        for j in (i + 1)..ascents.len() {
            pairs.push((ascents[i].clone(), ascents[j].clone()));
        }
    }
    for a in &ascents {
        for c in &consts {
            pairo(&mut pairs, a, c);
        }
    }
    let cap = match config.size {
        BatterySize::Small => 4,
        BatterySize::Large => 8,
    };
    for (a, b) in pairs.into_iter().take(cap) {
        push(
            NetSpec::new(
                IndexOrder::Omega,
                ValueTerm::Interleave(Box::new(a), Box::new(b)),
                space,
            ),
            &mut nets,
        );
    }
    // explicit nets over small random preorders
    let shapes: Vec<FinitePreorder> = vec![
        FinitePreorder::chain(3),
        FinitePreorder::chain(4),
        FinitePreorder::from_pairs(3, &[(0, 2), (1, 2)]).unwrap(),
    ];
    for _ in 0..max_explicit {
        let shape = shapes[rng.gen_range(0..shapes.len())].clone();
        let values: Vec<PointId> = (0..shape.size())
            .map(|_| points.choose(&mut rng).cloned().unwrap())
            .collect();
        push(
            NetSpec::new(IndexOrder::Finite(shape), ValueTerm::Explicit(values), space),
            &mut nets,
        );
    }

    Battery {
        nets,
        points,
        seed: config.seed,
        size: config.size,
    }
}

impl Battery {
    /// Exhaustive small iterated-limit configurations built from battery
    /// points: every outer index shape up to size 3 with chain inner indices,
    /// values drawn deterministically from the battery point pool.
    #[allow(clippy::needless_range_loop)]
    pub fn iterated_configs(&self, space: &SpacePresentation) -> Vec<IteratedConfig> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x17ed);
        let shapes: Vec<FinitePreorder> = vec![
            FinitePreorder::chain(1),
            FinitePreorder::chain(2),
            FinitePreorder::chain(3),
            FinitePreorder::from_pairs(3, &[(0, 2), (1, 2)]).unwrap(),
        ];
        let mut out = Vec::new();
        let budget = match self.size {
            BatterySize::Small => 12,
            BatterySize::Large => 30,
        };
        for _ in 0..budget {
            let outer_index = shapes[rng.gen_range(0..shapes.len())].clone();
            let n = outer_index.size();
            let limit = match self.points.choose(&mut rng) {
                Some(p) => p.clone(),
                None => continue,
            };
            // outer values dominate the limit so the premise has a chance
            let dominators: Vec<PointId> = self
                .points
                .iter()
                .filter(|p| space.leq_unchecked(&limit, p))
                .cloned()
                .collect();
            if dominators.is_empty() {
                continue;
            }
            let outer_values: Vec<PointId> = (0..n)
                .map(|_| dominators[rng.gen_range(0..dominators.len())].clone())
                .collect();
            let mut inner_indices = Vec::new();
            let mut inner_values = Vec::new();
            for i in 0..n {
                let m = rng.gen_range(1..=3usize);
                inner_indices.push(FinitePreorder::chain(m));
                // inner nets end at the outer value, so they converge to it
                let mut vals: Vec<PointId> = Vec::new();
                for _ in 0..m.saturating_sub(1) {
                    let below: Vec<PointId> = self
                        .points
                        .iter()
                        .filter(|p| space.leq_unchecked(p, &outer_values[i]))
                        .cloned()
                        .collect();
                    vals.push(if below.is_empty() {
                        outer_values[i].clone()
                    } else {
                        below[rng.gen_range(0..below.len())].clone()
                    });
                }
                vals.push(outer_values[i].clone());
                inner_values.push(vals);
            }
            out.push(IteratedConfig {
                outer_index,
                outer_values,
                inner_indices,
                inner_values,
                limit,
            });
        }
        out
    }
}
