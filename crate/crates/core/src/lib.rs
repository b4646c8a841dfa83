//! Executable domain theory on finitely presented countable T0 spaces.
//!
//! A space is given by a finite presentation (named points, named ω-chains,
//! order relations, declared suprema and a topology descriptor) and every
//! operation is an exact decision procedure over symbolic subsets of the
//! carrier. The library computes:
//!
//! * irreducible sets, suprema, and per-space witness families that make
//!   universal quantification over irreducible sets decidable,
//! * the irreducibly derived topology, its iteration to a fixpoint, and the
//!   sobriety hierarchy (sober / bounded sober / k-bounded sober),
//! * the irreducible way-below relation, continuity, and interpolation,
//! * net convergence defined by irreducible sets, the convergence class it
//!   induces, Kelley's axioms on generated net batteries, and the final
//!   topologicality verdict.
//!
//! Three space families are supported: finite posets, "V-spaces" (finitely
//! many ω-chains glued through finitely many points) and rational chains
//! (intervals of ℚ). All deciders on these families are exact; `Verdict`
//! carries `Unknown` only for battery-bounded checks.

pub mod battery;
pub mod derive;
pub mod error;
pub mod exact;
pub mod irr;
pub mod nets;
pub mod parse;
pub mod point;
pub mod sets;
pub mod space;
pub mod topology;
pub mod verdict;
pub mod waybelow;

pub use derive::{GammaResult, IterationTrace, SobrietyReport};
pub use error::{Error, ValidationError};
pub use exact::{Cut, Rat, Surd};
pub use irr::{ClosedIrrSchema, IrrDecision, IrreducibilityCertificate, SupResult, WitnessFamily};
pub use nets::{
    ConvergenceJudgment, IndexOrder, KelleyReport, MainVerdict, NetSpec, SubnetSpec,
    TheoremConclusion, ValueTerm,
};
pub use point::PointId;
pub use sets::{Atom, DefinableSet, HiBound, Interval, LoBound};
pub use space::{BaseTopology, OrderRelation, SpaceKind, SpacePresentation, TopologyDescriptor};
pub use verdict::{Verdict, Witness};
pub use waybelow::{ContinuityReport, InterpolationOutcome, WayBelowResult};
