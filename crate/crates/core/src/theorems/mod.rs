//! Checkers for the congruences and lower bounds on zero counts, plus the
//! two combinatorial lemmas behind the bounds.
//!
//! Every checker returns a [`LawReport`]. A report that did not apply is a
//! pass with `applicable = false` and a `reason` inside the evidence, so a
//! caller can tell "held" from "said nothing".

mod bounds;
mod congruence;
mod lemma1;
mod lemma2;

use serde::Serialize;
use serde_json::{json, Value};

pub use bounds::{audit_lower_bounds, cone_identity, ConeCheck};
pub use congruence::{check_congruence, verify_homogenization_identity, CheckOptions, Law, Scope};
pub use lemma1::lemma1_witness;
pub use lemma2::{lemma2_check, lemma2_exhaustive, Lemma2Context, Lemma2Part, SubsetMode};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LawReport {
    pub law: String,
    pub applicable: bool,
    pub pass: bool,
    pub evidence: Value,
    pub witness: Option<Value>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Vacuous,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Vacuous => "vacuous",
            Status::Fail => "fail",
        }
    }
}

impl LawReport {
    pub fn vacuous(law: &str, reason: impl Into<String>, mut evidence: Value) -> Self {
        evidence["reason"] = json!(reason.into());
        LawReport {
            law: law.into(),
            applicable: false,
            pass: true,
            evidence,
            witness: None,
        }
    }

    pub fn verdict(law: &str, pass: bool, evidence: Value, witness: Option<Value>) -> Self {
        LawReport {
            law: law.into(),
            applicable: true,
            pass,
            evidence,
            witness: if pass { None } else { witness },
        }
    }

    pub fn status(&self) -> Status {
        match (self.applicable, self.pass) {
            (_, false) => Status::Fail,
            (true, true) => Status::Pass,
            (false, true) => Status::Vacuous,
        }
    }
}
