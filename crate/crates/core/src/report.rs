use std::fmt;

use serde::{Deserialize, Serialize};

/// One row of evidence: what was tested, and the two sides that were compared.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "WitnessRepr", into = "WitnessRepr")]
pub struct Witness {
    pub input: String,
    pub lhs: f64,
    pub rhs: f64,
}

// Serialized as `[input, lhs, rhs]`; non-finite sides become `null`.
type WitnessRepr = (String, Option<f64>, Option<f64>);

impl From<WitnessRepr> for Witness {
    fn from((input, lhs, rhs): WitnessRepr) -> Self {
        Witness {
            input,
            lhs: lhs.unwrap_or(f64::NAN),
            rhs: rhs.unwrap_or(f64::NAN),
        }
    }
}

impl From<Witness> for WitnessRepr {
    fn from(w: Witness) -> Self {
        let finite = |v: f64| v.is_finite().then_some(v);
        (w.input, finite(w.lhs), finite(w.rhs))
    }
}

impl Witness {
    pub fn new(input: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Witness {
            input: input.into(),
            lhs,
            rhs,
        }
    }
}

/// Outcome of checking one quantitative statement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub statement_id: String,
    pub pass: bool,
    pub empirical_constant: Option<f64>,
    pub fitted_exponent: Option<f64>,
    pub witnesses: Vec<Witness>,
    pub notes: String,
}

impl CheckReport {
    pub fn new(statement_id: impl Into<String>) -> Self {
        CheckReport {
            statement_id: statement_id.into(),
            pass: false,
            empirical_constant: None,
            fitted_exponent: None,
            witnesses: Vec::new(),
            notes: String::new(),
        }
    }

    pub(crate) fn note(&mut self, text: impl AsRef<str>) {
        if !self.notes.is_empty() {
            self.notes.push_str("; ");
        }
        self.notes.push_str(text.as_ref());
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{v:.6}"));
        write!(
            f,
            "{:<26} {:<5} C={:<14} fit={:<12} n={:<4} {}",
            self.statement_id,
            if self.pass { "PASS" } else { "FAIL" },
            show(self.empirical_constant),
            show(self.fitted_exponent),
            self.witnesses.len(),
            self.notes
        )
    }
}

/// Human-readable summary table.
pub fn summary_table(reports: &[CheckReport]) -> String {
    let mut out = format!(
        "{:<26} {:<5} {:<16} {:<16} {:<6} notes\n",
        "statement", "pass", "constant", "fitted", "wits"
    );
    for r in reports {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    out.push_str(&format!("{} statements, {} failed\n", reports.len(), failed));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_serializes_as_triple() {
        let w = Witness::new("B(0,1)", 1.0, f64::INFINITY);
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"["B(0,1)",1.0,null]"#);
        let back: Witness = serde_json::from_str(&s).unwrap();
        assert_eq!(back.lhs, 1.0);
        assert!(back.rhs.is_nan());
    }

    #[test]
    fn report_field_names() {
        let mut r = CheckReport::new("lemma2.3");
        r.pass = true;
        r.empirical_constant = Some(1.0);
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(
            keys,
            ["empirical_constant", "fitted_exponent", "notes", "pass", "statement_id", "witnesses"]
        );
    }
}
