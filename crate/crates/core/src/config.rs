//! Experiment configuration: named catalogs of exponents and functions,
//! grids, tolerances and the RNG seed used by randomized banks.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::{Exponent, ExponentSpec, SmoothFormula, SmoothParams};
use crate::funcs::Func;

/// Per-statement tolerance policy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatementTol {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub slope_tol: f64,
}

impl StatementTol {
    pub const fn new(abs_tol: f64, rel_tol: f64, slope_tol: f64) -> Self {
        StatementTol {
            abs_tol,
            rel_tol,
            slope_tol,
        }
    }
}

/// Every statement the harness checks, in report order.
pub const STATEMENT_IDS: [&str; 13] = [
    "eq1.1",
    "lemma2.2",
    "lemma2.3",
    "lemma2.4",
    "lemma2.5",
    "prop3.1",
    "prop3.2",
    "prop3.3",
    "prop3.4",
    "thm4.1-forward",
    "thm4.1-converse-identity",
    "lemma5.1",
    "thm5.1",
];

pub fn default_statement_tols() -> BTreeMap<String, StatementTol> {
    let t = |a, r, s| StatementTol::new(a, r, s);
    [
        ("eq1.1", t(1e-8, 1e-6, 0.05)),
        ("lemma2.2", t(1e-9, 1e-6, 0.05)),
        ("lemma2.3", t(1e-8, 1e-8, 0.05)),
        ("lemma2.4", t(1e-9, 1e-6, 0.05)),
        ("lemma2.5", t(1e-9, 1e-6, 0.05)),
        ("prop3.1", t(1e-9, 1e-6, 0.05)),
        ("prop3.2", t(1e-9, 1e-6, 0.05)),
        ("prop3.3", t(1e-9, 1e-9, 0.05)),
        ("prop3.4", t(1e-9, 1e-9, 0.05)),
        ("thm4.1-forward", t(1e-9, 1e-6, 0.05)),
        ("thm4.1-converse-identity", t(1e-6, 0.0, 0.05)),
        ("lemma5.1", t(1e-8, 0.0, 0.05)),
        ("thm5.1", t(1e-9, 1e-6, 0.05)),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Accuracy target for Luxemburg norms.
    pub norm_tol: f64,
    /// Accuracy target for operator samples.
    pub op_tol: f64,
    pub statements: BTreeMap<String, StatementTol>,
    /// Ratio cap a single-family δ must keep below.
    pub diening_cap: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            norm_tol: crate::norms::DEFAULT_NORM_TOL,
            op_tol: crate::operators::DEFAULT_OP_TOL,
            statements: default_statement_tols(),
            diening_cap: 4.0,
        }
    }
}

impl Tolerances {
    pub fn statement(&self, id: &str) -> StatementTol {
        self.statements
            .get(id)
            .copied()
            .or_else(|| default_statement_tols().get(id).copied())
            .unwrap_or(StatementTol::new(1e-9, 1e-6, 0.05))
    }

    /// Replaces the norm tolerance and every absolute statement tolerance.
    pub fn override_all(&mut self, tol: f64) {
        self.norm_tol = tol;
        for t in self.statements.values_mut() {
            t.abs_tol = tol;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Grids {
    /// Radii of the origin-centred balls.
    pub radius: Vec<f64>,
    /// Inclusive dyadic ring range for Herz norms.
    pub k_range: (i32, i32),
    pub p0_grid: Vec<f64>,
    pub delta_grid: Vec<f64>,
    pub q_values: Vec<f64>,
    pub r_values: Vec<f64>,
    pub alpha_values: Vec<f64>,
    /// Constant exponents for the dyadic-step counterexample sweep.
    pub counterexample_p0: Vec<f64>,
    /// Classical indices `q` for the `CBMO^q` embedding sweep.
    pub embedding_q: Vec<f64>,
}

impl Default for Grids {
    fn default() -> Self {
        Grids {
            radius: crate::spaces::default_radius_grid(),
            k_range: crate::spaces::DEFAULT_K_RANGE,
            p0_grid: vec![1.25, 1.5],
            delta_grid: (1..=9).map(|i| i as f64 / 10.0).collect(),
            q_values: vec![0.5, 1.0, 2.0],
            r_values: vec![1.5, 2.0, 3.0],
            alpha_values: vec![0.0],
            counterexample_p0: vec![2.0, 4.0],
            embedding_q: vec![2.0, 3.0, 4.0],
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Outputs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub json: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dimension: usize,
    /// Name of the exponent in `exponents` used when none is given.
    pub exponent: String,
    pub exponents: BTreeMap<String, ExponentSpec>,
    /// Exponents every `verify` checker sweeps over.
    pub check_exponents: Vec<String>,
    pub functions: BTreeMap<String, Func>,
    pub grids: Grids,
    pub tolerances: Tolerances,
    pub outputs: Outputs,
    pub seed: u64,
}

pub fn default_exponents() -> BTreeMap<String, ExponentSpec> {
    let pw = |values: Vec<f64>| ExponentSpec::Piecewise {
        breaks: vec![-1.0, 1.0],
        values,
    };
    let smooth = |formula_id, base, amp| ExponentSpec::Smooth {
        formula_id,
        params: SmoothParams { base, amp },
    };
    [
        ("const1.5", ExponentSpec::Constant { p: 1.5 }),
        ("const2", ExponentSpec::Constant { p: 2.0 }),
        ("const3", ExponentSpec::Constant { p: 3.0 }),
        ("const4", ExponentSpec::Constant { p: 4.0 }),
        ("pw232", pw(vec![2.0, 3.0, 2.0])),
        ("pw3_2_3", pw(vec![3.0, 2.0, 3.0])),
        ("smooth_abs", smooth(SmoothFormula::InvOnePlusAbs, 2.0, 1.0)),
        ("smooth_log", smooth(SmoothFormula::InvLog, 2.0, 0.5)),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

pub fn default_functions() -> BTreeMap<String, Func> {
    [
        ("zero", Func::Zero),
        ("chi01", Func::chi_interval(0.0, 1.0)),
        ("chi02", Func::chi_interval(0.0, 2.0)),
        ("chi_ball1", Func::chi_ball(1.0)),
        ("ring0", Func::chi_ring(0)),
        ("ring3", Func::chi_ring(3)),
        ("sign", Func::Sign),
        ("sign_ball4", Func::chi_ball(4.0).times_sign()),
        ("pow_m1_4", Func::power(-0.25, Some(1.0))),
        ("pow_1", Func::power(1.0, Some(2.0))),
        ("steps", Func::combination([(2.0, Func::chi_interval(-1.0, 0.5)), (-1.0, Func::chi_ring(2))])),
        ("dyadic", Func::dyadic_step(crate::funcs::DEFAULT_K_MAX)),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            dimension: 1,
            exponent: "const2".to_string(),
            exponents: default_exponents(),
            check_exponents: vec!["const2".to_string(), "pw232".to_string()],
            functions: default_functions(),
            grids: Grids::default(),
            tolerances: Tolerances::default(),
            outputs: Outputs::default(),
            seed: 7,
        }
    }
}

fn field(path: impl Into<String>, msg: impl std::fmt::Display) -> Error {
    Error::config(path, msg.to_string())
}

impl ExperimentConfig {
    /// Parses JSON; parse errors name the offending field path. Entries of
    /// `exponents` and `functions` are added to the built-in catalogue, and
    /// replace built-in entries of the same name.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let mut cfg: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            field(if path == "." || path == "?" { "<root>".to_string() } else { path }, e.inner())
        })?;
        for (k, v) in default_exponents() {
            cfg.exponents.entry(k).or_insert(v);
        }
        for (k, v) in default_functions() {
            cfg.functions.entry(k).or_insert(v);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config is always serializable")
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| field("--config", format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.dimension) {
            return Err(field("dimension", format!("{} is not in 1..=3", self.dimension)));
        }
        for (name, spec) in &self.exponents {
            self.build_spec(spec).map_err(|e| field(format!("exponents.{name}"), e))?;
        }
        if !self.exponents.contains_key(&self.exponent) {
            return Err(field("exponent", format!("unknown exponent `{}`", self.exponent)));
        }
        if self.check_exponents.is_empty() {
            return Err(field("check_exponents", "must not be empty"));
        }
        for (i, name) in self.check_exponents.iter().enumerate() {
            if !self.exponents.contains_key(name) {
                return Err(field(format!("check_exponents[{i}]"), format!("unknown exponent `{name}`")));
            }
        }
        for (name, f) in &self.functions {
            f.validate().map_err(|e| field(format!("functions.{name}"), e))?;
        }
        let g = &self.grids;
        let positive = |name: &str, v: &[f64], lo: f64| -> Result<()> {
            if v.is_empty() {
                return Err(field(format!("grids.{name}"), "must not be empty"));
            }
            for (i, x) in v.iter().enumerate() {
                if !(x.is_finite() && *x > lo) {
                    return Err(field(format!("grids.{name}[{i}]"), format!("{x} must be finite and > {lo}")));
                }
            }
            Ok(())
        };
        positive("radius", &g.radius, 0.0)?;
        positive("p0_grid", &g.p0_grid, 1.0)?;
        positive("q_values", &g.q_values, 0.0)?;
        positive("r_values", &g.r_values, 1.0)?;
        positive("delta_grid", &g.delta_grid, 0.0)?;
        positive("counterexample_p0", &g.counterexample_p0, 1.0)?;
        positive("embedding_q", &g.embedding_q, 1.0)?;
        if let Some((i, d)) = g.delta_grid.iter().enumerate().find(|(_, d)| **d >= 1.0) {
            return Err(field(format!("grids.delta_grid[{i}]"), format!("{d} must lie in (0, 1)")));
        }
        if g.alpha_values.iter().any(|a| !a.is_finite()) {
            return Err(field("grids.alpha_values", "entries must be finite"));
        }
        if g.k_range.0 > g.k_range.1 || g.k_range.0 < -1000 || g.k_range.1 > 1000 {
            return Err(field("grids.k_range", format!("{:?} is not an increasing range within ±1000", g.k_range)));
        }
        let t = &self.tolerances;
        for (name, v) in [("norm_tol", t.norm_tol), ("op_tol", t.op_tol)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(field(format!("tolerances.{name}"), format!("{v} must lie in (0, 1)")));
            }
        }
        if !(t.diening_cap.is_finite() && t.diening_cap >= 1.0) {
            return Err(field("tolerances.diening_cap", format!("{} must be finite and >= 1", t.diening_cap)));
        }
        for (id, s) in &t.statements {
            if !STATEMENT_IDS.contains(&id.as_str()) {
                return Err(field(format!("tolerances.statements.{id}"), "unknown statement id"));
            }
            if [s.abs_tol, s.rel_tol, s.slope_tol].iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                return Err(field(format!("tolerances.statements.{id}"), "tolerances must be finite and >= 0"));
            }
        }
        Ok(())
    }

    fn build_spec(&self, spec: &ExponentSpec) -> Result<Exponent> {
        spec.build()?.with_dimension(self.dimension)
    }

    pub fn exponent_named(&self, name: &str) -> Result<Exponent> {
        let spec = self
            .exponents
            .get(name)
            .ok_or_else(|| field("--p", format!("unknown exponent `{name}`")))?;
        self.build_spec(spec)
    }

    pub fn default_exponent(&self) -> Result<Exponent> {
        self.exponent_named(&self.exponent)
    }

    pub fn function_named(&self, name: &str) -> Result<&Func> {
        self.functions
            .get(name)
            .ok_or_else(|| field("--f", format!("unknown function `{name}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let cfg = ExperimentConfig::default();
        let text = cfg.to_json();
        let back = ExperimentConfig::from_json(&text).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn partial_config_fills_defaults() {
        let cfg = ExperimentConfig::from_json(r#"{"seed": 3, "grids": {"radius": [1, 2]}}"#).unwrap();
        assert_eq!(cfg.seed, 3);
        assert_eq!(cfg.grids.radius, [1.0, 2.0]);
        assert_eq!(cfg.grids.p0_grid, Grids::default().p0_grid);
    }

    #[test]
    fn catalogue_entries_merge_with_builtins() {
        let cfg = ExperimentConfig::from_json(
            r#"{"functions": {"bump": {"kind": "chi_interval", "a": -1, "b": 2}, "chi01": {"kind": "zero"}}}"#,
        )
        .unwrap();
        assert_eq!(cfg.functions["bump"], Func::chi_interval(-1.0, 2.0));
        assert_eq!(cfg.functions["chi01"], Func::Zero);
        assert!(cfg.functions.contains_key("sign"));
        assert_eq!(cfg.exponents, default_exponents());
    }

    fn field_of(text: &str) -> String {
        match ExperimentConfig::from_json(text).unwrap_err() {
            Error::Config { field, .. } => field,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn errors_name_the_field() {
        assert_eq!(field_of(r#"{"functions": {"f": {"kind": "nosuch"}}}"#), "functions.f.kind");
        assert_eq!(field_of(r#"{"grids": {"radius": [1, -2]}}"#), "grids.radius[1]");
        assert_eq!(field_of(r#"{"exponent": "missing"}"#), "exponent");
        assert_eq!(field_of(r#"{"exponents": {"bad": {"kind": "constant", "p": 0.5}}}"#), "exponents.bad");
        assert_eq!(field_of(r#"{"tolerances": {"statements": {"thm9": {"abs_tol": 1, "rel_tol": 0, "slope_tol": 0}}}}"#), "tolerances.statements.thm9");
        assert_eq!(field_of(r#"{"seed": "x"}"#), "seed");
        assert_eq!(field_of(r#"{"grids": {"k_range": [3, 1]}}"#), "grids.k_range");
    }
}
