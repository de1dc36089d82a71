//! Check outcomes shared by every verification routine.

use std::collections::BTreeMap;
use std::fmt::Display;

use serde::{Deserialize, Serialize};
use serde_json::Value as Json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Serialized inputs of a failing tuple and the nonzero residual.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub inputs: Vec<String>,
    pub residual: String,
}

impl Witness {
    pub fn new<T: Display>(inputs: &[T], residual: impl Into<String>) -> Self {
        Witness { inputs: inputs.iter().map(|x| x.to_string()).collect(), residual: residual.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub parameters: BTreeMap<String, Json>,
    pub status: Status,
    pub tuples_checked: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
    /// Notes on coverage or recorded values; part of the deterministic output.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
    pub wall_time_ms: u64,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            parameters: BTreeMap::new(),
            status: Status::Pass,
            tuples_checked: 0,
            witness: None,
            notes: Vec::new(),
            wall_time_ms: 0,
        }
    }

    pub fn with_param(mut self, key: &str, value: impl Serialize) -> Self {
        self.parameters.insert(key.to_string(), serde_json::to_value(value).expect("serializable parameter"));
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Marks the check failed; the first witness is kept.
    pub fn fail(&mut self, witness: Witness) {
        self.status = Status::Fail;
        if self.witness.is_none() {
            self.witness = Some(witness);
        }
    }

    /// Fails without a tuple (e.g. a mismatch in a computed table).
    pub fn fail_with(&mut self, inputs: Vec<String>, residual: impl Into<String>) {
        self.fail(Witness { inputs, residual: residual.into() });
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Folds another report's outcome into this one.
    pub fn absorb(&mut self, other: CheckReport) {
        self.tuples_checked += other.tuples_checked;
        if let Some(w) = other.witness {
            let mut w = w;
            w.inputs.insert(0, format!("in {}", other.name));
            self.fail(w);
        } else if !other.passed() {
            self.status = Status::Fail;
        }
        self.notes.extend(other.notes);
    }
}
