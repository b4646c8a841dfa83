//! Three-valued decision results for possibly-infinitary checks.

use serde::Serialize;
use std::fmt;

/// A witness accompanying a refutation; payloads are canonical renderings
/// that replay through the corresponding parser and checker.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Witness {
    Set(String),
    Point(String),
    Net(String),
    Trace(String),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Set(s) => write!(f, "set {s}"),
            Witness::Point(p) => write!(f, "point {p}"),
            Witness::Net(n) => write!(f, "net {n}"),
            Witness::Trace(t) => write!(f, "{t}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Proven { certificate: String },
    Refuted { witness: Witness },
    Unknown { bound: String },
}

impl Verdict {
    pub fn proven(certificate: impl Into<String>) -> Self {
        Verdict::Proven {
            certificate: certificate.into(),
        }
    }

    pub fn refuted_set(set: &crate::sets::DefinableSet) -> Self {
        Verdict::Refuted {
            witness: Witness::Set(set.to_string()),
        }
    }

    pub fn refuted_point(p: &crate::point::PointId) -> Self {
        Verdict::Refuted {
            witness: Witness::Point(p.to_string()),
        }
    }

    pub fn refuted_trace(t: impl Into<String>) -> Self {
        Verdict::Refuted {
            witness: Witness::Trace(t.into()),
        }
    }

    pub fn unknown(bound: impl Into<String>) -> Self {
        Verdict::Unknown { bound: bound.into() }
    }

    pub fn is_proven(&self) -> bool {
        matches!(self, Verdict::Proven { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Refuted { witness } => Some(witness),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Proven { .. } => write!(f, "proven"),
            Verdict::Refuted { witness } => write!(f, "refuted ({witness})"),
            Verdict::Unknown { bound } => write!(f, "unknown (budget {bound})"),
        }
    }
}
