//! Verification records.

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::rat::{fmt_rat, Rat};

pub const SCHEMA_VERSION: &str = "1";

/// Column order of the CSV form.
pub const CSV_HEADER: [&str; 9] =
    ["schema", "statement_id", "inputs_digest", "lhs", "rhs", "exact", "holds", "slack", "notes"];

/// A side of a checked statement: exact rational or binary float.
#[derive(Debug, Clone, PartialEq)]
pub enum Quantity {
    Exact(Rat),
    Float(f64),
}

impl Quantity {
    fn render(&self) -> String {
        match self {
            Quantity::Exact(r) => fmt_rat(r),
            Quantity::Float(f) => serde_json::to_string(f).unwrap_or_else(|_| "null".into()),
        }
    }

    pub fn as_exact(&self) -> Option<&Rat> {
        match self {
            Quantity::Exact(r) => Some(r),
            Quantity::Float(_) => None,
        }
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            Quantity::Exact(r) => crate::rat::to_f64(r),
            Quantity::Float(f) => *f,
        }
    }
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Quantity::Exact(r) => s.serialize_str(&fmt_rat(r)),
            Quantity::Float(f) => s.serialize_f64(*f),
        }
    }
}

/// Direction of the claimed relation between `lhs` and `rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Ge,
    Le,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub statement_id: String,
    pub inputs_digest: String,
    pub lhs: Quantity,
    pub rhs: Quantity,
    pub exact: bool,
    pub holds: bool,
    pub slack: Quantity,
    pub notes: String,
}

impl Report {
    /// Exact comparison. Slack is oriented so that it is nonnegative when the
    /// relation holds (`lhs - rhs` for `Eq` and `Ge`, `rhs - lhs` for `Le`).
    pub fn exact(statement_id: &str, inputs_digest: String, lhs: Rat, rhs: Rat, rel: Relation) -> Report {
        let (holds, slack) = match rel {
            Relation::Eq => (lhs == rhs, &lhs - &rhs),
            Relation::Ge => (lhs >= rhs, &lhs - &rhs),
            Relation::Le => (lhs <= rhs, &rhs - &lhs),
        };
        Report {
            statement_id: statement_id.to_string(),
            inputs_digest,
            lhs: Quantity::Exact(lhs),
            rhs: Quantity::Exact(rhs),
            exact: true,
            holds,
            slack: Quantity::Exact(slack),
            notes: String::new(),
        }
    }

    /// Floating `lhs >= rhs`, allowed to fail by at most `tol`.
    pub fn float_ge(statement_id: &str, inputs_digest: String, lhs: f64, rhs: f64, tol: f64) -> Report {
        let slack = lhs - rhs;
        let holds = slack >= -tol;
        let notes = if slack > tol {
            format!("margin {slack:e} exceeds tolerance {tol:e}")
        } else {
            format!("margin {slack:e} within tolerance {tol:e}")
        };
        Report {
            statement_id: statement_id.to_string(),
            inputs_digest,
            lhs: Quantity::Float(lhs),
            rhs: Quantity::Float(rhs),
            exact: false,
            holds,
            slack: Quantity::Float(slack),
            notes,
        }
    }

    pub fn with_note(mut self, note: impl AsRef<str>) -> Report {
        if !self.notes.is_empty() {
            self.notes.push_str("; ");
        }
        self.notes.push_str(note.as_ref());
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn csv_record(&self) -> [String; 9] {
        [
            SCHEMA_VERSION.to_string(),
            self.statement_id.clone(),
            self.inputs_digest.clone(),
            self.lhs.render(),
            self.rhs.render(),
            self.exact.to_string(),
            self.holds.to_string(),
            self.slack.render(),
            self.notes.clone(),
        ]
    }
}

impl Serialize for Report {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Report", 9)?;
        st.serialize_field("schema", SCHEMA_VERSION)?;
        st.serialize_field("statement_id", &self.statement_id)?;
        st.serialize_field("inputs_digest", &self.inputs_digest)?;
        st.serialize_field("lhs", &self.lhs)?;
        st.serialize_field("rhs", &self.rhs)?;
        st.serialize_field("exact", &self.exact)?;
        st.serialize_field("holds", &self.holds)?;
        st.serialize_field("slack", &self.slack)?;
        st.serialize_field("notes", &self.notes)?;
        st.end()
    }
}

/// SHA-256 of the canonical (sorted-key) JSON encoding of the inputs.
pub fn digest(inputs: &serde_json::Value) -> String {
    let text = serde_json::to_string(inputs).expect("json value serializes");
    hex::encode(Sha256::digest(text.as_bytes()))
}
