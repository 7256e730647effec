//! One checker per quantitative statement, plus the harness that runs them
//! from an [`ExperimentConfig`].
//!
//! Checkers never throw on a failed inequality; they record witnesses and
//! set `pass`. Errors are reserved for rejected inputs (e.g. an exponent
//! outside `P`).

mod cbmo;
mod commutator;
mod herz;
mod lebesgue;

pub use cbmo::{check_counterexample, check_embedding_cbmo_q, check_norm_equivalences, EquivalenceReports};
pub use commutator::{check_commutator_bounded, check_commutator_identity, default_symbols, ForwardOptions};
pub use herz::{check_minkowski, check_vv_herz, minkowski_bank, sequence_bank};
pub use lebesgue::{
    check_chi_product, check_diening_single_family, check_duality, check_subset_ratios, diening_families, subset_pairs,
    CubeFamily, SubsetReports,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{ExperimentConfig, StatementTol, STATEMENT_IDS};
use crate::error::{Error, Result};
use crate::exec;
use crate::exponent::Exponent;
use crate::funcs::Func;
use crate::report::{self, CheckReport};

/// A named catalog function.
pub type Named = (String, Func);

fn tol_note(t: &StatementTol) -> String {
    format!("tol abs={:e} rel={:e} slope={}", t.abs_tol, t.rel_tol, t.slope_tol)
}

/// RNG for a randomized bank: the same seed and label always give the
/// same stream.
pub(crate) fn bank_rng(seed: u64, label: &str) -> ChaCha8Rng {
    // FNV-1a keeps the label mixing stable across platforms and releases
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

/// Merges per-exponent reports of one statement: all witnesses, the worst
/// constant, and `pass` only if every part passed.
fn merge(id: &str, parts: Vec<(String, CheckReport)>) -> CheckReport {
    let mut out = CheckReport::new(id);
    out.pass = !parts.is_empty();
    for (label, r) in parts {
        out.pass &= r.pass;
        out.empirical_constant = match (out.empirical_constant, r.empirical_constant) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        out.fitted_exponent = out.fitted_exponent.or(r.fitted_exponent);
        for mut w in r.witnesses {
            w.input = format!("[{label}] {}", w.input);
            out.witnesses.push(w);
        }
        if !r.notes.is_empty() {
            out.note(format!("[{label}] {}", r.notes));
        }
    }
    out
}

fn catalog(cfg: &ExperimentConfig, names: &[&str]) -> Vec<Named> {
    names
        .iter()
        .filter_map(|n| cfg.functions.get(*n).map(|f| (n.to_string(), f.clone())))
        .collect()
}

/// Bounded, locally integrable catalog entries used by the oscillation
/// checkers.
const OSC_BANK: [&str; 7] = ["zero", "chi01", "sign", "steps", "sign_ball4", "ring3", "pow_1"];
/// Entries of `L^{p(·)}` for every exponent in `P`.
const LP_BANK: [&str; 8] = ["zero", "chi01", "chi02", "chi_ball1", "ring0", "ring3", "pow_m1_4", "steps"];

fn exponents(cfg: &ExperimentConfig) -> Result<Vec<(String, Exponent)>> {
    cfg.check_exponents
        .iter()
        .map(|n| Ok((n.clone(), cfg.exponent_named(n)?)))
        .collect()
}

fn per_exponent(
    cfg: &ExperimentConfig,
    id: &str,
    run: impl Fn(&Exponent) -> Result<CheckReport> + Sync + Send,
) -> Result<CheckReport> {
    let exps = exponents(cfg)?;
    let parts = exec::try_map(&exps, |(name, e)| Ok::<_, Error>((name.clone(), run(e)?)))?;
    Ok(merge(id, parts))
}

/// Runs the checker for `id` with the grids, banks and tolerances of `cfg`.
pub fn run_statement(cfg: &ExperimentConfig, id: &str) -> Result<CheckReport> {
    let t = cfg.tolerances.statement(id);
    let ntol = cfg.tolerances.norm_tol;
    let g = &cfg.grids;
    let report = match id {
        "eq1.1" => per_exponent(cfg, id, |e| check_duality(e, &catalog(cfg, &LP_BANK), &t, ntol))?,
        "lemma2.2" => {
            let fams = diening_families(cfg.seed);
            per_exponent(cfg, id, |e| {
                check_diening_single_family(e, &fams, &g.delta_grid, cfg.tolerances.diening_cap, &t, ntol)
            })?
        }
        "lemma2.3" => per_exponent(cfg, id, |e| check_chi_product(e, &g.radius, &t))?,
        "lemma2.4" => subset_pair(cfg)?.0,
        "lemma2.5" => subset_pair(cfg)?.1,
        "prop3.1" => check_counterexample(&g.counterexample_p0, crate::funcs::DEFAULT_K_MAX, &g.radius, &t, ntol)?,
        "prop3.2" => per_exponent(cfg, id, |e| check_embedding_cbmo_q(e, &g.embedding_q, &catalog(cfg, &OSC_BANK), &g.radius, &t, ntol))?,
        "prop3.3" => equivalence_pair(cfg)?.0,
        "prop3.4" => equivalence_pair(cfg)?.1,
        "thm4.1-forward" => {
            let opts = ForwardOptions::default();
            per_exponent(cfg, id, |e| check_commutator_bounded(&Func::Sign, e, &opts, &t, ntol))?
        }
        "thm4.1-converse-identity" => {
            let symbols = default_symbols();
            let balls = [0.5, 1.0, 2.0, 5.0, 10.0];
            check_commutator_identity(&symbols, &balls, 20, cfg.dimension, &t, cfg.tolerances.op_tol)?
        }
        "lemma5.1" => check_minkowski(&minkowski_bank(50, cfg.seed), &g.r_values, &t)?,
        "thm5.1" => {
            let seqs = sequence_bank();
            let r = 2.0;
            per_exponent(cfg, id, |e| {
                let mut parts = Vec::new();
                for &alpha in &g.alpha_values {
                    let rep = check_vv_herz(&Func::Sign, e, alpha, &g.q_values, r, &seqs, g.k_range, &t, ntol)?;
                    parts.push((format!("α={alpha}"), rep));
                }
                Ok(merge("thm5.1", parts))
            })?
        }
        other => {
            return Err(Error::invalid(format!(
                "unknown statement `{other}`; expected one of {}",
                STATEMENT_IDS.join(", ")
            )))
        }
    };
    finish(cfg, id, report)
}

fn finish(cfg: &ExperimentConfig, id: &str, mut report: CheckReport) -> Result<CheckReport> {
    report.statement_id = id.to_string();
    report.note(tol_note(&cfg.tolerances.statement(id)));
    Ok(report)
}

/// Lemma 2.4 and 2.5 share their subset pairs and norm evaluations.
fn subset_pair(cfg: &ExperimentConfig) -> Result<(CheckReport, CheckReport)> {
    let pairs = subset_pairs(cfg.dimension, 50, cfg.seed);
    let t4 = cfg.tolerances.statement("lemma2.4");
    let t5 = cfg.tolerances.statement("lemma2.5");
    let exps = exponents(cfg)?;
    let parts = exec::try_map(&exps, |(name, e)| {
        let r = check_subset_ratios(e, &pairs, &cfg.grids.p0_grid, &t4, &t5)?;
        Ok::<_, Error>((name.clone(), r))
    })?;
    let (a, b) = parts
        .into_iter()
        .map(|(n, r)| ((n.clone(), r.lemma2_4), (n, r.lemma2_5)))
        .unzip();
    Ok((merge("lemma2.4", a), merge("lemma2.5", b)))
}

/// Propositions 3.3 and 3.4 share the three CBMO norms per function.
fn equivalence_pair(cfg: &ExperimentConfig) -> Result<(CheckReport, CheckReport)> {
    let bank = catalog(cfg, &OSC_BANK);
    let t3 = cfg.tolerances.statement("prop3.3");
    let t4 = cfg.tolerances.statement("prop3.4");
    let ntol = cfg.tolerances.norm_tol;
    let exps = exponents(cfg)?;
    let parts = exec::try_map(&exps, |(name, e)| {
        let r = check_norm_equivalences(e, &bank, &cfg.grids.radius, &t3, &t4, ntol)?;
        Ok::<_, Error>((name.clone(), r))
    })?;
    let (a, b) = parts
        .into_iter()
        .map(|(n, r)| ((n.clone(), r.prop3_3), (n, r.prop3_4)))
        .unzip();
    Ok((merge("prop3.3", a), merge("prop3.4", b)))
}

/// Runs every statement, concurrently, in the canonical order. Paired
/// statements that share their computations are evaluated once.
pub fn run_all(cfg: &ExperimentConfig) -> Result<Vec<CheckReport>> {
    const PAIRED: [&str; 4] = ["lemma2.4", "lemma2.5", "prop3.3", "prop3.4"];
    let jobs: Vec<&str> = STATEMENT_IDS
        .iter()
        .copied()
        .filter(|id| !PAIRED.contains(id))
        .chain(["lemma2.4", "prop3.3"])
        .collect();
    let groups = exec::try_map(&jobs, |&id| -> Result<Vec<CheckReport>> {
        match id {
            "lemma2.4" => {
                let (a, b) = subset_pair(cfg)?;
                Ok(vec![finish(cfg, "lemma2.4", a)?, finish(cfg, "lemma2.5", b)?])
            }
            "prop3.3" => {
                let (a, b) = equivalence_pair(cfg)?;
                Ok(vec![finish(cfg, "prop3.3", a)?, finish(cfg, "prop3.4", b)?])
            }
            _ => Ok(vec![run_statement(cfg, id)?]),
        }
    })?;
    let mut all: Vec<CheckReport> = groups.into_iter().flatten().collect();
    all.sort_by_key(|r| STATEMENT_IDS.iter().position(|id| *id == r.statement_id));
    Ok(all)
}

/// Human-readable table for a full run; refuses to summarize if any
/// statement is missing.
pub fn summary(reports: &[CheckReport]) -> Result<String> {
    let missing: Vec<&str> = STATEMENT_IDS
        .iter()
        .copied()
        .filter(|id| !reports.iter().any(|r| r.statement_id == *id))
        .collect();
    if !missing.is_empty() {
        return Err(Error::invalid(format!("statements missing from the run: {}", missing.join(", "))));
    }
    Ok(report::summary_table(reports))
}
