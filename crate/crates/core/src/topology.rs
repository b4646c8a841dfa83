//! Closure, openness and open-set generators per topology level.
//!
//! Level 0 is the declared base topology; level n+1 keeps exactly the level-n
//! opens U such that every irreducible set with existing supremum inside U's
//! complement keeps its supremum there. Dually, the level-(n+1) closed sets
//! are the level-n closed sets additionally closed under suprema of
//! irreducible subsets, so closure at level n+1 is the least fixpoint of
//! level-n closure and a supremum-completion pass. On the supported families
//! the irreducible subsets contributing new suprema are chain tails (with an
//! effective supremum) and rational intervals with a rational upper bound.

use crate::point::PointId;
use crate::sets::{Atom, DefinableSet, HiBound, Interval, LoBound};
use crate::space::{BaseTopology, SpaceKind, SpacePresentation};
use std::collections::BTreeMap;

impl SpacePresentation {
    /// Add suprema of irreducible subsets that lie inside `d`:
    /// chain tails contribute their effective supremum, rational atoms with
    /// a rational open upper bound contribute that bound.
    fn sup_completion(&self, d: &DefinableSet) -> DefinableSet {
        let mut extra: Vec<PointId> = Vec::new();
        let comps = d.components();
        for (cell, idx) in &comps.cells {
            if idx.is_cofinite_tail() {
                if let Some(s) = self.chain_sup(cell) {
                    if !d.contains_point(&s) {
                        extra.push(s);
                    }
                }
            }
        }
        for a in d.atoms() {
            if let Atom::Ival(iv) = a {
                if let HiBound::Open(q) = &iv.hi {
                    let p = PointId::Rational(q.clone());
                    if self.point_in_carrier(&p) && !d.contains_point(&p) {
                        extra.push(p);
                    }
                }
            }
        }
        let mut out = d.clone();
        for p in extra {
            out = out.union(&DefinableSet::singleton(&p));
        }
        out
    }

    /// Closure in the upper topology: a down-set is kept only if each of its
    /// chain limbs can be covered by finitely many dominators avoiding any
    /// given outside point; a limb with no upper bound at all makes the whole
    /// space the closure, and otherwise a limb pulls in every common lower
    /// bound of its upper-bound set.
    fn upper_completion(&self, d: &DefinableSet) -> DefinableSet {
        let comps = d.components();
        let mut out = d.clone();
        for (cell, idx) in &comps.cells {
            if !idx.is_cofinite_tail() {
                continue;
            }
            let ubs = self.chain_ub_set(cell);
            if ubs.is_empty() {
                return self.whole_space();
            }
            // lower bounds of the upper-bound set
            let mut lb: Option<DefinableSet> = None;
            for a in ubs.atoms() {
                let piece = match a {
                    Atom::FinPoint(p) => self.down_point(&PointId::Finite(p.clone())),
                    Atom::Seg { cell, from, .. } | Atom::Tail { cell, from } => {
                        self.down_point(&PointId::chain_at(cell, *from))
                    }
                    Atom::Ival(_) => continue,
                };
                lb = Some(match lb {
                    None => piece,
                    Some(prev) => prev.intersect(&piece),
                });
            }
            if let Some(lb) = lb {
                out = out.union(&lb);
            }
        }
        out
    }

    pub fn closure(&self, e: &DefinableSet) -> DefinableSet {
        self.closure_at(e, self.topology.level)
    }

    pub fn closure_at(&self, e: &DefinableSet, level: u32) -> DefinableSet {
        if level == 0 {
            return self.closure_base(e);
        }
        let mut cur = self.closure_at(e, level - 1);
        loop {
            let next = self.closure_at(&self.sup_completion(&cur), level - 1);
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    fn closure_base(&self, e: &DefinableSet) -> DefinableSet {
        match (self.kind, self.topology.base) {
            (_, BaseTopology::Alexandroff) | (SpaceKind::Finite, _) => self.down_set(e),
            (SpaceKind::Rational, _) => {
                // Scott and upper topologies coincide on a rational chain
                let mut cur = self.down_set(e);
                loop {
                    let next = self.down_set(&self.sup_completion(&cur));
                    if next == cur {
                        return cur;
                    }
                    cur = next;
                }
            }
            (SpaceKind::V, BaseTopology::Scott) => {
                let mut cur = self.down_set(e);
                loop {
                    let next = self.down_set(&self.sup_completion(&cur));
                    if next == cur {
                        return cur;
                    }
                    cur = next;
                }
            }
            (SpaceKind::V, BaseTopology::Upper) => {
                let mut cur = self.down_set(e);
                loop {
                    let next = self.down_set(&self.upper_completion(&cur));
                    if next == cur {
                        return cur;
                    }
                    cur = next;
                }
            }
        }
    }

    pub fn is_closed(&self, c: &DefinableSet) -> bool {
        self.is_closed_at(c, self.topology.level)
    }

    pub fn is_closed_at(&self, c: &DefinableSet, level: u32) -> bool {
        self.closure_at(c, level) == *c
    }

    pub fn is_open(&self, u: &DefinableSet) -> bool {
        self.is_open_at(u, self.topology.level)
    }

    pub fn is_open_at(&self, u: &DefinableSet, level: u32) -> bool {
        self.is_closed_at(&self.complement(u), level)
    }

    /// Chains whose presence of the effective supremum in an open set forces
    /// the open set to meet the chain, at the given level.
    pub(crate) fn forced_cells(&self, level: u32) -> Vec<String> {
        if self.kind != SpaceKind::V {
            return vec![];
        }
        let scott_like = match self.topology.base {
            BaseTopology::Scott => true,
            BaseTopology::Alexandroff => level >= 1,
            // every upper open already meets any chain whose supremum it
            // contains, so no extra forcing applies at any level
            BaseTopology::Upper => false,
        };
        if !scott_like {
            return vec![];
        }
        self.cells
            .iter()
            .filter(|c| self.chain_sup(c).is_some())
            .cloned()
            .collect()
    }

    /// The least open set around `anchor` with the given tail thresholds:
    /// the upward closure of the anchor together with, for each chain forced
    /// at this level whose supremum has been pulled in, a tail of that chain.
    pub(crate) fn min_open(
        &self,
        anchor: &PointId,
        level: u32,
        thresholds: &BTreeMap<String, u64>,
        default_threshold: u64,
    ) -> DefinableSet {
        let forced = self.forced_cells(level);
        let mut cur = self.up_set(&DefinableSet::singleton(anchor));
        loop {
            let mut next = cur.clone();
            for cell in &forced {
                let s = self.chain_sup(cell).unwrap();
                if next.contains_point(&s) {
                    let from = thresholds.get(cell).copied().unwrap_or(default_threshold);
                    next = next.union(&DefinableSet::from_atoms(vec![Atom::Tail {
                        cell: cell.clone(),
                        from,
                    }]));
                }
            }
            next = self.up_set(&next);
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// A finite family of opens that generates the level topology under
    /// unions and finite intersections. Instances are concrete definable
    /// sets; parameterized families are instantiated at representative
    /// indices, which is exhaustive because order predicates are uniform in
    /// chain indices beyond the relation bound.
    pub fn open_generators(&self, level: u32) -> Vec<DefinableSet> {
        let bound = self.index_bound(&[]);
        let mut out = vec![DefinableSet::empty(), self.whole_space()];
        match self.kind {
            SpaceKind::Finite => {
                for p in &self.points {
                    out.push(self.up_point(&PointId::Finite(p.clone())));
                }
            }
            SpaceKind::V => {
                if self.topology.base == BaseTopology::Upper {
                    for z in self.schema_points(bound) {
                        out.push(self.complement(&self.down_point(&z)));
                    }
                } else {
                    let forced = self.forced_cells(level);
                    let reps: Vec<u64> = (0..=bound + 1).collect();
                    for anchor in self.schema_points(bound) {
                        if forced.is_empty() {
                            out.push(self.min_open(&anchor, level, &BTreeMap::new(), 0));
                        } else {
                            // vary one forced threshold at a time; remaining
                            // thresholds sit at the uniform bound
                            for cell in &forced {
                                for &r in &reps {
                                    let mut th = BTreeMap::new();
                                    th.insert(cell.clone(), r);
                                    out.push(self.min_open(&anchor, level, &th, bound + 1));
                                }
                            }
                        }
                    }
                }
            }
            SpaceKind::Rational => {
                let carrier = self.interval.clone().unwrap();
                let mut samples = self.rational_samples(4);
                if let LoBound::Closed(q) = &carrier.lo {
                    samples.push(q.clone());
                }
                if let HiBound::Closed(q) = &carrier.hi {
                    samples.push(q.clone());
                }
                samples.sort();
                samples.dedup();
                for q in &samples {
                    let strict = Interval::new(LoBound::Open(q.clone()), carrier.hi.clone())
                        .intersect(&carrier);
                    out.push(DefinableSet::from_atoms(vec![Atom::Ival(strict)]));
                    if self.topology.base == BaseTopology::Alexandroff && level == 0 {
                        let closed = Interval::new(LoBound::Closed(q.clone()), carrier.hi.clone())
                            .intersect(&carrier);
                        out.push(DefinableSet::from_atoms(vec![Atom::Ival(closed)]));
                    }
                }
                if let Some(cut) = self.canonical_cut() {
                    let iv = Interval::new(LoBound::Cut(cut), carrier.hi.clone()).intersect(&carrier);
                    out.push(DefinableSet::from_atoms(vec![Atom::Ival(iv)]));
                }
            }
        }
        out.sort_by_key(|s| s.to_string());
        out.dedup();
        out
    }

    /// A canonical irrational cut strictly inside the rational carrier.
    pub(crate) fn canonical_cut(&self) -> Option<crate::exact::Surd> {
        use crate::exact::{rat, rat_int, Surd, SurdOrRat};
        let iv = self.interval.as_ref()?;
        let (a, b) = match (&iv.lo, &iv.hi) {
            (LoBound::Closed(a), HiBound::Closed(b)) | (LoBound::Closed(a), HiBound::Open(b)) |
            (LoBound::Open(a), HiBound::Closed(b)) | (LoBound::Open(a), HiBound::Open(b)) => {
                (a.clone(), b.clone())
            }
            (LoBound::Closed(a), HiBound::Unbounded) | (LoBound::Open(a), HiBound::Unbounded) => {
                (a.clone(), a + rat_int(2))
            }
            (LoBound::Unbounded, HiBound::Closed(b)) | (LoBound::Unbounded, HiBound::Open(b)) => {
                (b - rat_int(2), b.clone())
            }
            (LoBound::Unbounded, HiBound::Unbounded) => (rat_int(0), rat_int(2)),
            _ => return None,
        };
        // lo + (hi - lo) * sqrt(2)/2 lies strictly between lo and hi
        let span = &b - &a;
        match Surd::make(a, span * rat(1, 2), 2) {
            SurdOrRat::Irrational(s) => Some(s),
            SurdOrRat::Rational(_) => None,
        }
    }

    /// Canonical renderings of the generating open families at a level,
    /// used as the topology fingerprint of an iteration stage.
    pub fn basis_schemas(&self, level: u32) -> Vec<String> {
        let mut out = vec!["empty".to_string(), "whole".to_string()];
        let bound = self.index_bound(&[]);
        match self.kind {
            SpaceKind::Finite => {
                for p in &self.points {
                    out.push(format!(
                        "min_open({p}) = {}",
                        self.up_point(&PointId::Finite(p.clone()))
                    ));
                }
            }
            SpaceKind::V => {
                if self.topology.base == BaseTopology::Upper {
                    for p in &self.points {
                        out.push(format!("co_down({p})"));
                    }
                    for c in &self.cells {
                        out.push(format!("co_down({c}@k), k in N"));
                    }
                } else {
                    for p in &self.points {
                        let anchor = PointId::Finite(p.clone());
                        out.push(format!(
                            "min_open({p}) = {}",
                            self.render_schema(&anchor, level, bound)
                        ));
                    }
                    for c in &self.cells {
                        let anchor = PointId::chain_at(c, bound + 1);
                        out.push(format!(
                            "min_open({c}@k) = {}",
                            self.render_schema(&anchor, level, bound)
                        ));
                    }
                }
            }
            SpaceKind::Rational => {
                if self.topology.base == BaseTopology::Alexandroff && level == 0 {
                    out.push("up_closed([q,->)) for q in carrier".to_string());
                }
                out.push("up_strict((q,->)) for q in carrier".to_string());
                out.push("up_strict((c,->)) for irrational cuts c".to_string());
            }
        }
        out.sort();
        out.dedup();
        out
    }

    fn render_schema(&self, anchor: &PointId, level: u32, bound: u64) -> String {
        let set = self.min_open(anchor, level, &BTreeMap::new(), bound + 1);
        let comps = set.components();
        let mut parts: Vec<String> = comps
            .pts
            .iter()
            .map(|p| format!("{{{p}}}"))
            .collect();
        let anchor_cell = match anchor {
            PointId::ChainAt { cell, .. } => Some(cell.clone()),
            _ => None,
        };
        for (cell, idx) in &comps.cells {
            if let Some(t) = idx.tail {
                if anchor_cell.as_deref() == Some(cell.as_str()) && t == bound + 1 {
                    parts.push(format!("tail({cell},k)"));
                } else if t == bound + 1 {
                    parts.push(format!("tail({cell},*)"));
                } else {
                    parts.push(format!("tail({cell},{t})"));
                }
            }
            for (a, b) in &idx.segs {
                parts.push(format!("seg({cell},{a},{b})"));
            }
        }
        parts.join(" | ")
    }

    /// True when the level and level+1 topologies coincide: every generator
    /// of the level topology is still open one level up.
    pub(crate) fn stage_equal(&self, level: u32) -> bool {
        self.open_generators(level)
            .iter()
            .all(|g| !self.is_open_at(g, level) || self.is_open_at(g, level + 1))
    }

    /// Verify that the declared order is the specialization order of the
    /// topology: x lies in the closure of {y} exactly when x ≤ y, across all
    /// point schemas (uniform beyond the relation bound).
    pub fn specialization_check(&self) -> crate::verdict::Verdict {
        let bound = self.index_bound(&[]);
        let mut pts = self.schema_points(bound);
        for q in self.rational_samples(4) {
            pts.push(PointId::Rational(q));
        }
        let mut checked = 0usize;
        for y in &pts {
            let cl = self.closure(&DefinableSet::singleton(y));
            for x in &pts {
                let in_cl = cl.contains_point(x);
                let le = self.leq_unchecked(x, y);
                if in_cl != le {
                    return crate::verdict::Verdict::refuted_trace(format!(
                        "{x} in cl({{{y}}}) is {in_cl} but {x} <= {y} is {le}"
                    ));
                }
                checked += 1;
            }
        }
        crate::verdict::Verdict::proven(format!(
            "closure membership and the declared order agree on {checked} schema pairs"
        ))
    }

    /// Connectedness via clopen search over the generating opens.
    pub fn nontrivial_clopen_at(&self, level: u32) -> Option<DefinableSet> {
        let whole = self.whole_space();
        for g in self.open_generators(level) {
            if g.is_empty() || g == whole {
                continue;
            }
            if self.is_open_at(&g, level) && self.is_closed_at(&g, level) {
                return Some(g);
            }
        }
        // clopens are unions of order components; try complements too
        for g in self.open_generators(level) {
            let c = self.complement(&g);
            if c.is_empty() || c == whole {
                continue;
            }
            if self.is_open_at(&c, level) && self.is_closed_at(&c, level) {
                return Some(c);
            }
        }
        None
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

    fn lambda() -> SpacePresentation {
        parse_space(
            "space vspace; points top; chain A; chain B; rel chain_below A top; rel chain_below B top; sup A = top; sup B = top; topology scott",
        )
        .unwrap()
    }

    fn rat01_scott() -> SpacePresentation {
        parse_space("space rational; interval 0 closed 1 closed; topology scott").unwrap()
    }

    #[test]
    fn alexandroff_closure_is_down_closure() {
        let s = nat_inf();
        let inf = parse_set(&s, "{inf}").unwrap();
        assert_eq!(s.closure_at(&inf, 0), s.whole_space());
        let chain = parse_set(&s, "tail(N,0)").unwrap();
        assert_eq!(s.closure_at(&chain, 0), chain);
    }

    #[test]
    fn derived_closure_adds_chain_sup() {
        let s = nat_inf();
        let chain = parse_set(&s, "tail(N,0)").unwrap();
        assert_eq!(s.closure_at(&chain, 1), s.whole_space());
    }

    #[test]
    fn scott_closure_on_lambda() {
        let s = lambda();
        let a = parse_set(&s, "tail(A,0)").unwrap();
        assert_eq!(s.closure_at(&a, 0), s.whole_space());
        let seg = parse_set(&s, "seg(A,0,3)").unwrap();
        assert_eq!(s.closure_at(&seg, 0), seg);
    }

    #[test]
    fn scott_interval_closure() {
        let s = rat01_scott();
        let e = parse_set(&s, "(0,1/2)").unwrap();
        let cl = s.closure_at(&e, 0);
        assert_eq!(cl, parse_set(&s, "[0,1/2]").unwrap());
        let cut = parse_set(&s, "[0,sqrt(2)/2)").unwrap();
        assert_eq!(s.closure_at(&cut, 0), cut);
    }

    #[test]
    fn openness_examples() {
        let s = nat_inf();
        let inf = parse_set(&s, "{inf}").unwrap();
        assert!(s.is_open_at(&inf, 0), "up-sets are Alexandroff-open");
        assert!(!s.is_open_at(&inf, 1), "the chain refutes it one level up");
        let up5 = parse_set(&s, "tail(N,5) | {inf}").unwrap();
        assert!(s.is_open_at(&up5, 0));
        assert!(s.is_open_at(&up5, 1));

        let r = rat01_scott();
        let strict = parse_set(&r, "(1/2,1]").unwrap();
        assert!(r.is_open_at(&strict, 0));
        let closed = parse_set(&r, "[1/2,1]").unwrap();
        assert!(!r.is_open_at(&closed, 0));
        assert!(r.is_open_at(&r.whole_space(), 0));
    }

    #[test]
    fn lambda_scott_opens_need_both_tails() {
        let s = lambda();
        let one_sided = parse_set(&s, "tail(A,0) | {top}").unwrap();
        assert!(!s.is_open_at(&one_sided, 0));
        let both = parse_set(&s, "tail(A,2) | tail(B,5) | {top}").unwrap();
        assert!(s.is_open_at(&both, 0));
    }

    #[test]
    fn upper_topology_on_nat_inf() {
        let s = parse_space(
            "space vspace; points inf; chain N; rel chain_below N inf; sup N = inf; topology upper",
        )
        .unwrap();
        let chain = parse_set(&s, "tail(N,0)").unwrap();
        // every cover of the chain contains its supremum
        assert_eq!(s.closure_at(&chain, 0), s.whole_space());
        let down4 = parse_set(&s, "seg(N,0,4)").unwrap();
        assert!(s.is_closed_at(&down4, 0));
        let up5 = parse_set(&s, "tail(N,5) | {inf}").unwrap();
        assert!(s.is_open_at(&up5, 0));
        let inf_only = parse_set(&s, "{inf}").unwrap();
        assert!(!s.is_open_at(&inf_only, 0));
        // the upper topology is already its own derivative here
        assert!(s.stage_equal(0));
    }

    #[test]
    fn stage_equality_detects_gamma() {
        assert!(!nat_inf().stage_equal(0));
        assert!(nat_inf().stage_equal(1));
        assert!(lambda().stage_equal(0));
        assert!(rat01_scott().stage_equal(0));
        let alex = parse_space("space rational; interval 0 closed 1 closed; topology alexandroff")
            .unwrap();
        assert!(!alex.stage_equal(0));
        assert!(alex.stage_equal(1));
    }
}
