use std::error::Error as StdError;
use std::path::Path;

use serde::Serialize;
use varexp::config::ExperimentConfig;
use varexp::exponent::Exponent;
use varexp::funcs::{Domain, Func};
use varexp::operators::{self, OperatorKind};
use varexp::report::{self, CheckReport};
use varexp::spaces::{self, CenterRule, SpaceNormResult};
use varexp::{verify, Error};

use crate::{CbmoRule, Cli, Command, Common, OpKind, Outcome};

type Res<T> = Result<T, Box<dyn StdError>>;

struct Ctx {
    cfg: ExperimentConfig,
    json: Option<std::path::PathBuf>,
    csv: Option<std::path::PathBuf>,
}

impl Ctx {
    fn new(common: &Common) -> Res<Ctx> {
        let mut cfg = match &common.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(tol) = common.tol {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(Error::config("--tol", format!("{tol} must be positive and finite")).into());
            }
            cfg.tolerances.override_all(tol);
            cfg.tolerances.op_tol = tol;
        }
        if let Some(seed) = common.seed {
            cfg.seed = seed;
        }
        Ok(Ctx {
            json: common.json.clone().or_else(|| cfg.outputs.json.clone()),
            csv: common.csv.clone().or_else(|| cfg.outputs.csv.clone()),
            cfg,
        })
    }

    fn exponent(&self, name: Option<&str>) -> Res<(String, Exponent)> {
        let name = name.unwrap_or(&self.cfg.exponent).to_string();
        let e = self.cfg.exponent_named(&name)?;
        Ok((name, e))
    }

    fn func(&self, name: &str) -> Res<Func> {
        Ok(self.cfg.function_named(name)?.clone())
    }

    fn write_json<T: Serialize + ?Sized>(&self, value: &T) -> Res<()> {
        if let Some(path) = &self.json {
            let mut text = serde_json::to_string_pretty(value)?;
            text.push('\n');
            std::fs::write(path, text).map_err(|e| io_error(path, e))?;
        }
        Ok(())
    }

    fn write_csv<R: Serialize>(&self, rows: impl IntoIterator<Item = R>) -> Res<()> {
        if let Some(path) = &self.csv {
            let mut w = csv::Writer::from_path(path).map_err(|e| format!("{}: {e}", path.display()))?;
            for row in rows {
                w.serialize(row)?;
            }
            w.flush().map_err(|e| io_error(path, e))?;
        }
        Ok(())
    }
}

fn io_error(path: &Path, e: std::io::Error) -> Box<dyn StdError> {
    format!("{}: {e}", path.display()).into()
}

#[derive(Serialize)]
struct ScaleRow {
    scale: f64,
    value: f64,
}

fn breakdown_rows(res: &SpaceNormResult) -> Vec<ScaleRow> {
    res.breakdown.iter().map(|&(scale, value)| ScaleRow { scale, value }).collect()
}

pub(crate) fn run(cli: Cli) -> Res<Outcome> {
    let ctx = Ctx::new(&cli.common)?;
    match cli.command {
        Command::Norm { f, p, radius } => norm(&ctx, &f, p.as_deref(), radius),
        Command::Op { kind, f, b, x } => op(&ctx, kind, &f, b.as_deref(), &x),
        Command::Cbmo { f, p, rule, q, c } => cbmo(&ctx, &f, p.as_deref(), rule, q, c),
        Command::Herz { f, p, alpha, q, k_min, k_max } => herz(&ctx, &f, p.as_deref(), alpha, q, k_min, k_max),
        Command::Verify { statement, all, p0 } => verify_cmd(ctx, &statement, all, &p0),
        Command::Report { input } => report_cmd(&ctx, &input),
    }
}

#[derive(Serialize)]
struct NormOut<'a> {
    function: &'a str,
    exponent: &'a str,
    domain: String,
    value: f64,
    abs_error_bound: f64,
    tol: f64,
}

fn norm(ctx: &Ctx, fname: &str, p: Option<&str>, radius: Option<f64>) -> Res<Outcome> {
    let f = ctx.func(fname)?;
    let (pname, e) = ctx.exponent(p)?;
    let domain = match radius {
        None => Domain::Whole,
        Some(r) if r > 0.0 && r.is_finite() => Domain::Ball { radius: r },
        Some(r) => return Err(Error::config("--radius", format!("{r} must be positive and finite")).into()),
    };
    let tol = ctx.cfg.tolerances.norm_tol;
    let res = varexp::norms::luxemburg_norm(&f, &e, &domain, tol)?;
    let domain = radius.map_or("R^n".to_string(), |r| format!("B(0,{r})"));
    println!("‖{fname}‖ in L^{pname} on {domain}: {}", res.value);
    println!("error bound {:.3e}, tol {tol:e}", res.abs_error_bound);
    ctx.write_json(&NormOut {
        function: fname,
        exponent: &pname,
        domain,
        value: res.value,
        abs_error_bound: res.abs_error_bound,
        tol,
    })?;
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct OpRow {
    x: f64,
    value: f64,
    abs_error_bound: f64,
}

#[derive(Serialize)]
struct OpOut<'a> {
    operator: &'static str,
    function: &'a str,
    symbol: Option<&'a str>,
    tol: f64,
    samples: &'a [OpRow],
}

fn op(ctx: &Ctx, kind: OpKind, fname: &str, bname: Option<&str>, xs: &[f64]) -> Res<Outcome> {
    let f = ctx.func(fname)?;
    let dim = ctx.cfg.dimension;
    let tol = ctx.cfg.tolerances.op_tol;
    let (label, kind) = match kind {
        OpKind::Hardy => ("hardy", Some(OperatorKind::Hardy)),
        OpKind::DualHardy => ("dual_hardy", Some(OperatorKind::DualHardy)),
        OpKind::CommutatorHardy => ("commutator_hardy", Some(OperatorKind::CommutatorHardy)),
        OpKind::CommutatorDualHardy => ("commutator_dual_hardy", Some(OperatorKind::CommutatorDualHardy)),
        OpKind::Maximal => ("maximal", None),
    };
    let b = match (kind.is_some_and(|k| k.needs_symbol()), bname) {
        (true, None) => return Err(Error::config("--b", "commutators need a symbol").into()),
        (true, Some(name)) => Some(ctx.func(name)?),
        (false, Some(_)) => return Err(Error::config("--b", format!("{label} takes no symbol")).into()),
        (false, None) => None,
    };
    let mut rows = Vec::with_capacity(xs.len());
    for &x in xs {
        let s = match kind {
            Some(k) => operators::apply(k, b.as_ref().map(|b| b as _), &f, x, dim, tol)?,
            None => {
                if dim != 1 {
                    return Err(Error::config("dimension", "the maximal function is one-dimensional").into());
                }
                operators::maximal(&f, x, &operators::default_maximal_grid(), tol)?.sample
            }
        };
        println!("{label}({fname})({x}) = {}  (±{:.1e})", s.value, s.abs_error_bound);
        rows.push(OpRow {
            x,
            value: s.value,
            abs_error_bound: s.abs_error_bound,
        });
    }
    println!("tol {tol:e}");
    ctx.write_json(&OpOut {
        operator: label,
        function: fname,
        symbol: bname,
        tol,
        samples: &rows,
    })?;
    ctx.write_csv(&rows)?;
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct SpaceOut<'a> {
    space: String,
    function: &'a str,
    exponent: &'a str,
    tol: f64,
    #[serde(flatten)]
    result: &'a SpaceNormResult,
}

fn print_space(label: &str, res: &SpaceNormResult, tol: f64) {
    println!("{label}: {}", res.value);
    if let Some(tr) = res.divergence_fit {
        println!("edge trend: slope {:.6}, r² {:.6}, {:?}", tr.slope, tr.r2, tr.verdict);
    }
    if let Some(t) = res.tail_bound {
        println!("tail bound {t:.3e}");
    }
    println!("error bound {:.3e}, tol {tol:e}", res.abs_error_bound);
}

fn cbmo(ctx: &Ctx, fname: &str, p: Option<&str>, rule: CbmoRule, q: f64, c: f64) -> Res<Outcome> {
    let f = ctx.func(fname)?;
    let (pname, e) = ctx.exponent(p)?;
    let grid = &ctx.cfg.grids.radius;
    let tol = ctx.cfg.tolerances.norm_tol;
    let (space, res) = match rule {
        CbmoRule::Var => (format!("CBMO^{pname}"), spaces::cbmo_var_norm(&f, &e, grid, tol)?),
        CbmoRule::Star => (
            format!("CBMO^{pname}, c_B = f_B"),
            spaces::cbmo_star_norm(&f, &e, &CenterRule::BallAverage, grid, tol)?,
        ),
        CbmoRule::Constant => (
            format!("CBMO^{pname}, c_B = {c}"),
            spaces::cbmo_star_norm(&f, &e, &CenterRule::Constant { c }, grid, tol)?,
        ),
        CbmoRule::Inf => (format!("CBMO^{pname}, inf over c"), spaces::cbmo_inf_norm(&f, &e, grid, tol)?),
        CbmoRule::Classical => (
            format!("CBMO^{q}"),
            spaces::cbmo_classical_norm(&f, q, ctx.cfg.dimension, grid, tol)?,
        ),
    };
    print_space(&format!("‖{fname}‖ in {space}"), &res, tol);
    ctx.write_json(&SpaceOut {
        space,
        function: fname,
        exponent: &pname,
        tol,
        result: &res,
    })?;
    ctx.write_csv(breakdown_rows(&res))?;
    Ok(Outcome::Ok)
}

fn herz(ctx: &Ctx, fname: &str, p: Option<&str>, alpha: f64, q: f64, k_min: Option<i32>, k_max: Option<i32>) -> Res<Outcome> {
    let f = ctx.func(fname)?;
    let (pname, e) = ctx.exponent(p)?;
    let (lo, hi) = ctx.cfg.grids.k_range;
    let range = (k_min.unwrap_or(lo), k_max.unwrap_or(hi));
    if range.0 > range.1 {
        return Err(Error::config("--k-min", format!("{} exceeds --k-max {}", range.0, range.1)).into());
    }
    let tol = ctx.cfg.tolerances.norm_tol;
    let res = spaces::herz_norm(&f, &e, alpha, q, range, tol)?;
    let space = format!("K^({alpha},{q})_{pname}");
    print_space(&format!("‖{fname}‖ in {space}, k in {}..={}", range.0, range.1), &res, tol);
    ctx.write_json(&SpaceOut {
        space,
        function: fname,
        exponent: &pname,
        tol,
        result: &res,
    })?;
    ctx.write_csv(breakdown_rows(&res))?;
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct WitnessRow<'a> {
    statement_id: &'a str,
    input: &'a str,
    lhs: f64,
    rhs: f64,
}

fn witness_rows(reports: &[CheckReport]) -> impl Iterator<Item = WitnessRow<'_>> {
    reports.iter().flat_map(|r| {
        r.witnesses.iter().map(|w| WitnessRow {
            statement_id: &r.statement_id,
            input: &w.input,
            lhs: w.lhs,
            rhs: w.rhs,
        })
    })
}

fn verify_cmd(mut ctx: Ctx, ids: &[String], all: bool, p0: &[f64]) -> Res<Outcome> {
    if !p0.is_empty() {
        if let Some(bad) = p0.iter().find(|p| !(**p > 1.0 && p.is_finite())) {
            return Err(Error::config("--p0", format!("{bad} must exceed 1")).into());
        }
        ctx.cfg.grids.counterexample_p0 = p0.to_vec();
    }
    let reports = if all {
        verify::run_all(&ctx.cfg)?
    } else {
        let mut out = Vec::with_capacity(ids.len());
        for id in ids {
            out.push(verify::run_statement(&ctx.cfg, id).map_err(|e| match e {
                Error::InvalidInput(msg) => Error::config("--statement", msg),
                other => other,
            })?);
        }
        out
    };
    let table = if all { verify::summary(&reports)? } else { report::summary_table(&reports) };
    print!("{table}");
    ctx.write_json(&reports)?;
    ctx.write_csv(witness_rows(&reports))?;
    Ok(if reports.iter().all(|r| r.pass) {
        Outcome::Ok
    } else {
        Outcome::ChecksFailed
    })
}

fn report_cmd(ctx: &Ctx, input: &Path) -> Res<Outcome> {
    let text = std::fs::read_to_string(input).map_err(|e| io_error(input, e))?;
    let reports: Vec<CheckReport> = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", input.display()))?;
    print!("{}", verify::summary(&reports)?);
    ctx.write_csv(witness_rows(&reports))?;
    Ok(Outcome::Ok)
}
