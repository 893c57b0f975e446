use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Relative gap below which a negative slack is treated as rounding noise.
pub const VIOLATION_TOLERANCE: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Violated,
    NotApplicable,
}

/// One checked instance of an inequality `left >= right`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub id: String,
    pub left: f64,
    pub right: f64,
    pub slack: f64,
    pub constants: BTreeMap<String, f64>,
    pub inputs_digest: String,
    pub verdict: Verdict,
    /// The inequality is a theorem for these inputs (constructive fixture),
    /// rather than merely evaluated on them.
    pub guaranteed: bool,
    /// Exact outcome of `left >= right` when both sides were computed exactly.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub note: String,
}

pub fn is_violation(left: f64, right: f64) -> bool {
    let scale = 1f64.max(left.abs()).max(right.abs());
    left - right < -VIOLATION_TOLERANCE * scale || left.is_nan() || right.is_nan()
}

/// SHA-256 of the canonical JSON encoding of `inputs`.
pub fn digest<T: Serialize + ?Sized>(inputs: &T) -> String {
    let bytes = serde_json::to_vec(inputs).expect("inputs serialize");
    hex::encode(Sha256::digest(&bytes))
}

impl BoundReport {
    pub fn compare(id: impl Into<String>, left: f64, right: f64, inputs_digest: String) -> Self {
        let verdict = if is_violation(left, right) {
            Verdict::Violated
        } else {
            Verdict::Holds
        };
        BoundReport {
            id: id.into(),
            left,
            right,
            slack: left - right,
            constants: BTreeMap::new(),
            inputs_digest,
            verdict,
            guaranteed: true,
            exact: None,
            note: String::new(),
        }
    }

    pub fn not_applicable(id: impl Into<String>, inputs_digest: String, note: impl Into<String>) -> Self {
        BoundReport {
            id: id.into(),
            left: f64::NAN,
            right: f64::NAN,
            slack: f64::NAN,
            constants: BTreeMap::new(),
            inputs_digest,
            verdict: Verdict::NotApplicable,
            guaranteed: false,
            exact: None,
            note: note.into(),
        }
    }

    pub fn with_constant(mut self, name: &str, value: f64) -> Self {
        self.constants.insert(name.to_string(), value);
        self
    }

    pub fn with_exact(mut self, holds: bool) -> Self {
        self.exact = Some(holds);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn guaranteed(mut self, g: bool) -> Self {
        self.guaranteed = g;
        self
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    /// Slack relative to the larger side.
    pub fn relative_slack(&self) -> f64 {
        self.slack / 1f64.max(self.left.abs()).max(self.right.abs())
    }

    /// A violated verdict on an inequality that is a theorem for its inputs.
    pub fn is_guaranteed_violation(&self) -> bool {
        self.guaranteed && self.verdict == Verdict::Violated
    }
}
