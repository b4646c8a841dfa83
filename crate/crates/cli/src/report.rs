//! Report assembly and serialization. Reports are deterministic: identical
//! inputs and seeds produce byte-identical JSON.

use irrtopo_core::derive::{GammaResult, IterationTrace, SobrietyReport};
use irrtopo_core::irr::{IrrDecision, SupResult};
use irrtopo_core::nets::{AxiomStatus, ConvergenceJudgment, KelleyReport, MainVerdict, TheoremConclusion};
use irrtopo_core::waybelow::{ContinuityReport, InterpolationOutcome};
use irrtopo_core::{DefinableSet, SpacePresentation, Verdict};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

pub const REPORT_VERSION: &str = "irrtopo-report/1";

#[derive(Serialize)]
pub struct VerdictDoc {
    pub status: String,
    pub detail: String,
}

impl VerdictDoc {
    fn from(v: &Verdict) -> Self {
        match v {
            Verdict::Proven { certificate } => VerdictDoc {
                status: "proven".into(),
                detail: certificate.clone(),
            },
            Verdict::Refuted { witness } => VerdictDoc {
                status: "refuted".into(),
                detail: witness.to_string(),
            },
            Verdict::Unknown { bound } => VerdictDoc {
                status: "unknown".into(),
                detail: bound.clone(),
            },
        }
    }
}

fn axiom_doc(a: &AxiomStatus) -> VerdictDoc {
    match a {
        AxiomStatus::HoldsOnBattery { checked } => VerdictDoc {
            status: "holds-on-battery".into(),
            detail: format!("{checked} configurations checked"),
        },
        AxiomStatus::Violated { config } => VerdictDoc {
            status: "violated".into(),
            detail: config.clone(),
        },
        AxiomStatus::Inconclusive { budget } => VerdictDoc {
            status: "inconclusive".into(),
            detail: budget.clone(),
        },
    }
}

#[derive(Serialize)]
#[serde(tag = "kind")]
pub enum CommandResult {
    Irreducibility {
        set: String,
        irreducible: bool,
        certificate: Option<String>,
        witness_open1: Option<String>,
        witness_open2: Option<String>,
    },
    Sup {
        set: String,
        status: String,
        point: Option<String>,
        witnesses: Option<(String, String)>,
    },
    Si {
        stages: Vec<(u32, Vec<String>)>,
        gamma: String,
        fixpoint_reached: bool,
        si_infty: VerdictDoc,
        crosscheck: VerdictDoc,
        tested_set: Option<String>,
        tested_si_open: Option<VerdictDoc>,
    },
    Sober {
        sober: VerdictDoc,
        bounded_sober: VerdictDoc,
        k_bounded_sober: VerdictDoc,
        witnesses: Vec<(String, String)>,
    },
    Waybelow {
        x: String,
        y: String,
        way_below: VerdictDoc,
        net_crosscheck: VerdictDoc,
    },
    Belowset {
        x: String,
        below: String,
        above: String,
        above_open: bool,
        m_set: String,
        m_sup: Option<String>,
    },
    Continuity {
        continuity: VerdictDoc,
        per_schema: Vec<SchemaDoc>,
    },
    Interpolate {
        z: String,
        x: String,
        outcome: String,
        interpolant: Option<String>,
        hypotheses_met: bool,
        note: Option<String>,
    },
    Converge {
        net: String,
        to: String,
        level: u32,
        irr_converges: VerdictDoc,
        topo_converges: VerdictDoc,
        witness_set: Option<String>,
        thresholds: Option<String>,
    },
    Kelley {
        constants: VerdictDoc,
        subnets: VerdictDoc,
        divergence: VerdictDoc,
        iterated_limits: VerdictDoc,
        nets: usize,
        points: usize,
    },
    Verdict {
        irr_continuous: VerdictDoc,
        k_bounded_sober: VerdictDoc,
        conclusion: String,
        agreements: usize,
        disagreements: usize,
        empirical: Vec<EmpiricalDoc>,
    },
}

#[derive(Serialize)]
pub struct SchemaDoc {
    pub schema: String,
    pub below_set: String,
    pub below_irreducible: bool,
    pub sup_is_the_point: bool,
    pub ok: bool,
}

#[derive(Serialize)]
pub struct EmpiricalDoc {
    pub net: String,
    pub point: String,
    pub irr_converges: bool,
    pub topo_converges: bool,
}

impl CommandResult {
    pub fn from_irr(set: &str, d: &IrrDecision) -> Self {
        match d {
            IrrDecision::Irreducible(cert) => CommandResult::Irreducibility {
                set: set.to_string(),
                irreducible: true,
                certificate: Some(cert.to_string()),
                witness_open1: None,
                witness_open2: None,
            },
            IrrDecision::Reducible { open1, open2 } => CommandResult::Irreducibility {
                set: set.to_string(),
                irreducible: false,
                certificate: None,
                witness_open1: Some(open1.to_string()),
                witness_open2: Some(open2.to_string()),
            },
        }
    }

    pub fn from_sup(set: &str, s: &SupResult) -> Self {
        match s {
            SupResult::Exists(p) => CommandResult::Sup {
                set: set.to_string(),
                status: "exists".into(),
                point: Some(p.to_string()),
                witnesses: None,
            },
            SupResult::NoUpperBound => CommandResult::Sup {
                set: set.to_string(),
                status: "no-upper-bound".into(),
                point: None,
                witnesses: None,
            },
            SupResult::NoLeastUpperBound(a, b) => CommandResult::Sup {
                set: set.to_string(),
                status: "no-least-upper-bound".into(),
                point: None,
                witnesses: Some((a.to_string(), b.to_string())),
            },
        }
    }

    pub fn from_si(
        trace: &IterationTrace,
        infty: &Verdict,
        crosscheck: &Verdict,
        tested: Option<(String, Verdict)>,
    ) -> Self {
        let gamma = match trace.gamma {
            GammaResult::Reached(g) => g.to_string(),
            GammaResult::BoundHit(b) => format!("bound-hit({b})"),
        };
        CommandResult::Si {
            stages: trace
                .stages
                .iter()
                .map(|s| (s.level, s.basis.clone()))
                .collect(),
            gamma,
            fixpoint_reached: trace.fixpoint_reached,
            si_infty: VerdictDoc::from(infty),
            crosscheck: VerdictDoc::from(crosscheck),
            tested_set: tested.as_ref().map(|(s, _)| s.clone()),
            tested_si_open: tested.as_ref().map(|(_, v)| VerdictDoc::from(v)),
        }
    }

    pub fn from_sober(rep: &SobrietyReport) -> Self {
        CommandResult::Sober {
            sober: VerdictDoc::from(&rep.sober),
            bounded_sober: VerdictDoc::from(&rep.bounded_sober),
            k_bounded_sober: VerdictDoc::from(&rep.k_bounded_sober),
            witnesses: rep.witnesses.clone(),
        }
    }

    pub fn from_waybelow(x: &str, y: &str, v: &Verdict, nets: &Verdict) -> Self {
        CommandResult::Waybelow {
            x: x.to_string(),
            y: y.to_string(),
            way_below: VerdictDoc::from(v),
            net_crosscheck: VerdictDoc::from(nets),
        }
    }

    pub fn from_belowset(
        x: &str,
        below: &DefinableSet,
        above: &DefinableSet,
        above_open: bool,
        m: &DefinableSet,
        msup: Option<&SupResult>,
    ) -> Self {
        CommandResult::Belowset {
            x: x.to_string(),
            below: below.to_string(),
            above: above.to_string(),
            above_open,
            m_set: m.to_string(),
            m_sup: msup.map(|s| s.to_string()),
        }
    }

    pub fn from_continuity(rep: &ContinuityReport) -> Self {
        CommandResult::Continuity {
            continuity: VerdictDoc::from(&rep.continuous),
            per_schema: rep
                .per_schema
                .iter()
                .map(|s| SchemaDoc {
                    schema: s.schema.clone(),
                    below_set: s.below_set.clone(),
                    below_irreducible: s.below_irreducible,
                    sup_is_the_point: s.sup_is_the_point,
                    ok: s.ok,
                })
                .collect(),
        }
    }

    pub fn from_interpolate(z: &str, x: &str, out: &InterpolationOutcome) -> Self {
        match out {
            InterpolationOutcome::Found {
                interpolant,
                hypotheses_met,
            } => CommandResult::Interpolate {
                z: z.to_string(),
                x: x.to_string(),
                outcome: "found".into(),
                interpolant: Some(interpolant.clone()),
                hypotheses_met: *hypotheses_met,
                note: None,
            },
            InterpolationOutcome::NoInterpolant {
                hypotheses_met,
                note,
            } => CommandResult::Interpolate {
                z: z.to_string(),
                x: x.to_string(),
                outcome: "no-interpolant".into(),
                interpolant: None,
                hypotheses_met: *hypotheses_met,
                note: Some(note.clone()),
            },
        }
    }

    pub fn from_converge(
        net: &str,
        to: &str,
        level: u32,
        j: &ConvergenceJudgment,
        t: &Verdict,
    ) -> Self {
        CommandResult::Converge {
            net: net.to_string(),
            to: to.to_string(),
            level,
            irr_converges: VerdictDoc::from(&j.verdict),
            topo_converges: VerdictDoc::from(t),
            witness_set: j.witness_set.clone(),
            thresholds: j.thresholds.clone(),
        }
    }

    pub fn from_kelley(rep: &KelleyReport, nets: usize, points: usize) -> Self {
        CommandResult::Kelley {
            constants: axiom_doc(&rep.constants),
            subnets: axiom_doc(&rep.subnets),
            divergence: axiom_doc(&rep.divergence),
            iterated_limits: axiom_doc(&rep.iterated_limits),
            nets,
            points,
        }
    }

    pub fn from_verdict(v: &MainVerdict) -> Self {
        CommandResult::Verdict {
            irr_continuous: VerdictDoc::from(&v.irr_continuous),
            k_bounded_sober: VerdictDoc::from(&v.k_bounded_sober),
            conclusion: match v.conclusion {
                TheoremConclusion::Topological => "topological".into(),
                TheoremConclusion::NotTopological => "nottopological".into(),
                TheoremConclusion::OutOfTheoremScope => "outofscope".into(),
            },
            agreements: v.agreements,
            disagreements: v.disagreements,
            empirical: v
                .empirical
                .iter()
                .map(|e| EmpiricalDoc {
                    net: e.net.clone(),
                    point: e.point.clone(),
                    irr_converges: e.irr_converges,
                    topo_converges: e.topo_converges,
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct ReportDocument {
    pub version: &'static str,
    pub command: String,
    pub space: String,
    pub space_fingerprint: String,
    pub seed: u64,
    pub budget: u64,
    pub result: CommandResult,
}

impl ReportDocument {
    pub fn new(
        command: &str,
        space: &SpacePresentation,
        seed: u64,
        budget: u64,
        result: CommandResult,
    ) -> Self {
        let canonical = space.to_space_file();
        let hash = Sha256::digest(canonical.as_bytes());
        let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
        ReportDocument {
            version: REPORT_VERSION,
            command: command.to_string(),
            space: space
                .name
                .clone()
                .unwrap_or_else(|| canonical.lines().next().unwrap_or("space").to_string()),
            space_fingerprint: hex[..16].to_string(),
            seed,
            budget,
            result,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    /// Flat view of the entries `--assert` may target.
    pub fn assertables(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        match &self.result {
            CommandResult::Irreducibility { irreducible, .. } => {
                m.insert("irreducible".into(), irreducible.to_string());
            }
            CommandResult::Sup { status, .. } => {
                m.insert("sup".into(), status.clone());
            }
            CommandResult::Si {
                gamma,
                si_infty,
                crosscheck,
                tested_si_open,
                ..
            } => {
                m.insert("gamma".into(), gamma.clone());
                m.insert("si_infty".into(), si_infty.status.clone());
                m.insert("crosscheck".into(), crosscheck.status.clone());
                if let Some(v) = tested_si_open {
                    m.insert("si_open".into(), v.status.clone());
                }
            }
            CommandResult::Sober {
                sober,
                bounded_sober,
                k_bounded_sober,
                ..
            } => {
                m.insert("sober".into(), sober.status.clone());
                m.insert("bounded_sober".into(), bounded_sober.status.clone());
                m.insert("k_bounded_sober".into(), k_bounded_sober.status.clone());
            }
            CommandResult::Waybelow {
                way_below,
                net_crosscheck,
                ..
            } => {
                m.insert("way_below".into(), way_below.status.clone());
                m.insert("net_crosscheck".into(), net_crosscheck.status.clone());
            }
            CommandResult::Belowset { above_open, .. } => {
                m.insert("above_open".into(), above_open.to_string());
            }
            CommandResult::Continuity { continuity, .. } => {
                m.insert("continuity".into(), continuity.status.clone());
            }
            CommandResult::Interpolate { outcome, hypotheses_met, .. } => {
                m.insert("interpolation".into(), outcome.clone());
                m.insert("hypotheses_met".into(), hypotheses_met.to_string());
            }
            CommandResult::Converge {
                irr_converges,
                topo_converges,
                ..
            } => {
                m.insert("irr_converges".into(), irr_converges.status.clone());
                m.insert("topo_converges".into(), topo_converges.status.clone());
            }
            CommandResult::Kelley {
                constants,
                subnets,
                divergence,
                iterated_limits,
                ..
            } => {
                m.insert("constants".into(), constants.status.clone());
                m.insert("subnets".into(), subnets.status.clone());
                m.insert("divergence".into(), divergence.status.clone());
                m.insert("iterated_limits".into(), iterated_limits.status.clone());
            }
            CommandResult::Verdict {
                irr_continuous,
                k_bounded_sober,
                conclusion,
                disagreements,
                ..
            } => {
                m.insert("conclusion".into(), conclusion.clone());
                m.insert("irr_continuous".into(), irr_continuous.status.clone());
                m.insert("k_bounded_sober".into(), k_bounded_sober.status.clone());
                m.insert("disagreements".into(), disagreements.to_string());
            }
        }
        m
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "== {} report ({}) ==\nspace: {}  fingerprint: {}  seed: {}\n",
            self.command, self.version, self.space, self.space_fingerprint, self.seed
        ));
        let vd = |v: &VerdictDoc| format!("{} — {}", v.status, v.detail);
        match &self.result {
            CommandResult::Irreducibility {
                set,
                irreducible,
                certificate,
                witness_open1,
                witness_open2,
            } => {
                out.push_str(&format!("set: {set}\nirreducible: {irreducible}\n"));
                if let Some(c) = certificate {
                    out.push_str(&format!("certificate: {c}\n"));
                }
                if let (Some(u1), Some(u2)) = (witness_open1, witness_open2) {
                    out.push_str(&format!("witness opens:\n  U1 = {u1}\n  U2 = {u2}\n"));
                }
            }
            CommandResult::Sup {
                set,
                status,
                point,
                witnesses,
            } => {
                out.push_str(&format!("set: {set}\nsup: {status}"));
                if let Some(p) = point {
                    out.push_str(&format!(" ({p})"));
                }
                if let Some((a, b)) = witnesses {
                    out.push_str(&format!(" (witnesses {a}, {b})"));
                }
                out.push('\n');
            }
            CommandResult::Si {
                stages,
                gamma,
                fixpoint_reached,
                si_infty,
                crosscheck,
                tested_set,
                tested_si_open,
            } => {
                for (level, basis) in stages {
                    out.push_str(&format!("stage {level}:\n"));
                    for b in basis {
                        out.push_str(&format!("  {b}\n"));
                    }
                }
                out.push_str(&format!(
                    "gamma: {gamma}\nfixpoint_reached: {fixpoint_reached}\n"
                ));
                out.push_str(&format!("si_infty: {}\n", vd(si_infty)));
                out.push_str(&format!("crosscheck: {}\n", vd(crosscheck)));
                if let (Some(s), Some(v)) = (tested_set, tested_si_open) {
                    out.push_str(&format!("si_open({s}): {}\n", vd(v)));
                }
            }
            CommandResult::Sober {
                sober,
                bounded_sober,
                k_bounded_sober,
                witnesses,
            } => {
                out.push_str(&format!("sober:           {}\n", vd(sober)));
                out.push_str(&format!("bounded_sober:   {}\n", vd(bounded_sober)));
                out.push_str(&format!("k_bounded_sober: {}\n", vd(k_bounded_sober)));
                for (level, w) in witnesses {
                    out.push_str(&format!("witness[{level}]: {w}\n"));
                }
            }
            CommandResult::Waybelow {
                x,
                y,
                way_below,
                net_crosscheck,
            } => {
                out.push_str(&format!("way_below({x}, {y}): {}\n", vd(way_below)));
                out.push_str(&format!("net crosscheck: {}\n", vd(net_crosscheck)));
            }
            CommandResult::Belowset {
                x,
                below,
                above,
                above_open,
                m_set,
                m_sup,
            } => {
                out.push_str(&format!("below({x}) = {below}\n"));
                out.push_str(&format!("above({x}) = {above} (open: {above_open})\n"));
                out.push_str(&format!("m_set({x}) = {m_set}"));
                if let Some(s) = m_sup {
                    out.push_str(&format!("  sup: {s}"));
                }
                out.push('\n');
            }
            CommandResult::Continuity {
                continuity,
                per_schema,
            } => {
                out.push_str(&format!("continuity: {}\n", vd(continuity)));
                for s in per_schema {
                    out.push_str(&format!(
                        "  {}: below = {} (irreducible: {}, sup-at-point: {}) {}\n",
                        s.schema,
                        s.below_set,
                        s.below_irreducible,
                        s.sup_is_the_point,
                        if s.ok { "ok" } else { "FAIL" }
                    ));
                }
            }
            CommandResult::Interpolate {
                z,
                x,
                outcome,
                interpolant,
                hypotheses_met,
                note,
            } => {
                out.push_str(&format!(
                    "interpolate({z}, {x}): {outcome} (hypotheses met: {hypotheses_met})\n"
                ));
                if let Some(y) = interpolant {
                    out.push_str(&format!("interpolant: {y}\n"));
                }
                if let Some(n) = note {
                    out.push_str(&format!("note: {n}\n"));
                }
            }
            CommandResult::Converge {
                net,
                to,
                level,
                irr_converges,
                topo_converges,
                witness_set,
                thresholds,
            } => {
                out.push_str(&format!("net: {net}\ntarget: {to}\n"));
                out.push_str(&format!("irr_converges: {}\n", vd(irr_converges)));
                out.push_str(&format!(
                    "topo_converges(level {level}): {}\n",
                    vd(topo_converges)
                ));
                if let Some(w) = witness_set {
                    out.push_str(&format!("witness set: {w}\n"));
                }
                if let Some(t) = thresholds {
                    out.push_str(&format!("thresholds: {t}\n"));
                }
            }
            CommandResult::Kelley {
                constants,
                subnets,
                divergence,
                iterated_limits,
                nets,
                points,
            } => {
                out.push_str(&format!("battery: {nets} nets x {points} points\n"));
                out.push_str(&format!("constants:       {}\n", vd(constants)));
                out.push_str(&format!("subnets:         {}\n", vd(subnets)));
                out.push_str(&format!("divergence:      {}\n", vd(divergence)));
                out.push_str(&format!("iterated_limits: {}\n", vd(iterated_limits)));
            }
            CommandResult::Verdict {
                irr_continuous,
                k_bounded_sober,
                conclusion,
                agreements,
                disagreements,
                empirical,
            } => {
                out.push_str(&format!("irr_continuous:  {}\n", vd(irr_continuous)));
                out.push_str(&format!("k_bounded_sober: {}\n", vd(k_bounded_sober)));
                out.push_str(&format!("conclusion: {conclusion}\n"));
                out.push_str(&format!(
                    "empirical: {agreements} agreements, {disagreements} disagreements\n"
                ));
                for e in empirical {
                    if e.irr_converges != e.topo_converges {
                        out.push_str(&format!(
                            "  separation: {} -> {}: irr={} topo={}\n",
                            e.net, e.point, e.irr_converges, e.topo_converges
                        ));
                    }
                }
            }
        }
        out
    }
}
