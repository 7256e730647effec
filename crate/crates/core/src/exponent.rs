//! Variable exponents `p(·)`.
//!
//! An [`Exponent`] is an immutable, cheaply clonable value. Catalog kinds
//! (constant, piecewise constant, smooth formulas) know their bounds exactly
//! over the working box; custom exponents get them by dense sampling.
//! In dimension `n >= 2` every exponent is radial and is evaluated at `|x|`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{CheckReport, Witness};

/// Default half-width of the working box `[-R_work, R_work]`.
pub const DEFAULT_WORK_RADIUS: f64 = 1_048_576.0; // 2^20

/// Default safety margin for membership in `P`.
pub const DEFAULT_P_MARGIN: f64 = 1e-9;

/// Closed-form smooth exponent families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SmoothFormula {
    /// `base + amp / (1 + |x|)`
    InvOnePlusAbs,
    /// `base + amp / (1 + x^2)`
    InvOnePlusSq,
    /// `base + amp * sin(ln ln(10 + |x|))`; has no limit at infinity.
    SinLogLog,
    /// `base + amp / ln(e + |x|)`
    InvLog,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothParams {
    #[serde(default = "default_base")]
    pub base: f64,
    #[serde(default = "default_amp")]
    pub amp: f64,
}

fn default_base() -> f64 {
    2.0
}

fn default_amp() -> f64 {
    1.0
}

impl Default for SmoothParams {
    fn default() -> Self {
        SmoothParams {
            base: default_base(),
            amp: default_amp(),
        }
    }
}

impl SmoothFormula {
    fn shape(self, r: f64) -> f64 {
        match self {
            SmoothFormula::InvOnePlusAbs => 1.0 / (1.0 + r),
            SmoothFormula::InvOnePlusSq => 1.0 / (1.0 + r * r),
            SmoothFormula::SinLogLog => (10.0 + r).ln().ln().sin(),
            SmoothFormula::InvLog => 1.0 / (std::f64::consts::E + r).ln(),
        }
    }

    /// Exact range of `shape(r)` for `r` in `[0, radius]`.
    fn shape_range(self, radius: f64) -> (f64, f64) {
        match self {
            SmoothFormula::InvOnePlusAbs | SmoothFormula::InvOnePlusSq | SmoothFormula::InvLog => {
                (self.shape(radius), self.shape(0.0))
            }
            SmoothFormula::SinLogLog => {
                let t0 = 10f64.ln().ln();
                let t1 = (10.0 + radius).ln().ln();
                let (mut lo, mut hi) = (t0.sin().min(t1.sin()), t0.sin().max(t1.sin()));
                // interior critical points of sin
                let half_pi = std::f64::consts::FRAC_PI_2;
                let mut k = ((t0 - half_pi) / std::f64::consts::PI).ceil();
                loop {
                    let t = half_pi + k * std::f64::consts::PI;
                    if t > t1 {
                        break;
                    }
                    let s = t.sin();
                    lo = lo.min(s);
                    hi = hi.max(s);
                    k += 1.0;
                }
                (lo, hi)
            }
        }
    }
}

/// JSON form of an exponent, as read from experiment configs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExponentSpec {
    Constant {
        p: f64,
    },
    Piecewise {
        breaks: Vec<f64>,
        values: Vec<f64>,
    },
    Smooth {
        formula_id: SmoothFormula,
        #[serde(default)]
        params: SmoothParams,
    },
}

impl ExponentSpec {
    pub fn build(&self) -> Result<Exponent> {
        match self {
            ExponentSpec::Constant { p } => Exponent::constant(*p),
            ExponentSpec::Piecewise { breaks, values } => {
                Exponent::piecewise(breaks.clone(), values.clone())
            }
            ExponentSpec::Smooth { formula_id, params } => Exponent::smooth(*formula_id, *params),
        }
    }
}

type CustomFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Constant(f64),
    /// `values[i]` holds on `[breaks[i-1], breaks[i])`, with the first and
    /// last values extended to infinity.
    Piecewise {
        breaks: Vec<f64>,
        values: Vec<f64>,
    },
    Smooth {
        formula: SmoothFormula,
        params: SmoothParams,
    },
    Custom {
        eval: CustomFn,
        breaks: Vec<f64>,
    },
}

/// Which of the four representation families an exponent belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentKind {
    Constant,
    PiecewiseConstant,
    SmoothLogHolder,
    CustomEvaluable,
}

#[derive(Clone)]
pub struct Exponent {
    kind: Kind,
    p_minus: f64,
    p_plus: f64,
    dimension: usize,
    work_radius: f64,
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("Exponent");
        match &self.kind {
            Kind::Constant(p) => d.field("constant", p),
            Kind::Piecewise { breaks, values } => {
                d.field("breaks", breaks).field("values", values)
            }
            Kind::Smooth { formula, params } => d.field("formula", formula).field("params", params),
            Kind::Custom { .. } => d.field("custom", &"<fn>"),
        };
        d.field("p_minus", &self.p_minus)
            .field("p_plus", &self.p_plus)
            .field("dimension", &self.dimension)
            .finish()
    }
}

fn check_value(p: f64) -> Result<()> {
    if !p.is_finite() || p < 1.0 {
        return Err(Error::invalid(format!(
            "exponent value {p} must be finite and at least 1"
        )));
    }
    Ok(())
}

impl Exponent {
    pub fn constant(p: f64) -> Result<Self> {
        check_value(p)?;
        Ok(Exponent {
            kind: Kind::Constant(p),
            p_minus: p,
            p_plus: p,
            dimension: 1,
            work_radius: DEFAULT_WORK_RADIUS,
        })
    }

    pub fn piecewise(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.len() != breaks.len() + 1 {
            return Err(Error::invalid(format!(
                "piecewise exponent needs {} values for {} breaks, got {}",
                breaks.len() + 1,
                breaks.len(),
                values.len()
            )));
        }
        if breaks.iter().any(|b| !b.is_finite()) || breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("piecewise breaks must be finite and strictly increasing"));
        }
        for &v in &values {
            check_value(v)?;
        }
        let p_minus = values.iter().copied().fold(f64::INFINITY, f64::min);
        let p_plus = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Exponent {
            kind: Kind::Piecewise { breaks, values },
            p_minus,
            p_plus,
            dimension: 1,
            work_radius: DEFAULT_WORK_RADIUS,
        })
    }

    pub fn smooth(formula: SmoothFormula, params: SmoothParams) -> Result<Self> {
        let mut e = Exponent {
            kind: Kind::Smooth { formula, params },
            p_minus: 0.0,
            p_plus: 0.0,
            dimension: 1,
            work_radius: DEFAULT_WORK_RADIUS,
        };
        e.refresh_smooth_bounds()?;
        Ok(e)
    }

    /// An arbitrary evaluable exponent. Bounds are found by dense sampling of
    /// the working box, so evaluation is restricted to that box.
    pub fn custom(eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        let eval: CustomFn = Arc::new(eval);
        let (p_minus, p_plus) = sample_bounds(&*eval, DEFAULT_WORK_RADIUS, 1);
        check_value(p_minus)?;
        check_value(p_plus)?;
        Ok(Exponent {
            kind: Kind::Custom {
                eval,
                breaks: Vec::new(),
            },
            p_minus,
            p_plus,
            dimension: 1,
            work_radius: DEFAULT_WORK_RADIUS,
        })
    }

    pub fn from_spec(spec: &ExponentSpec) -> Result<Self> {
        spec.build()
    }

    /// Radial version in dimension `n`; the exponent is then read as a
    /// profile `φ(|x|)`.
    pub fn with_dimension(mut self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        self.dimension = n;
        if n >= 2 {
            if let Kind::Custom { eval, .. } = &self.kind {
                let (lo, hi) = sample_bounds(&**eval, self.work_radius, n);
                self.p_minus = lo;
                self.p_plus = hi;
            }
        }
        Ok(self)
    }

    pub fn with_work_radius(mut self, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::invalid("working radius must be positive and finite"));
        }
        self.work_radius = radius;
        match &self.kind {
            Kind::Smooth { .. } => self.refresh_smooth_bounds()?,
            Kind::Custom { eval, .. } => {
                let (lo, hi) = sample_bounds(&**eval, radius, self.dimension);
                self.p_minus = lo;
                self.p_plus = hi;
            }
            _ => {}
        }
        Ok(self)
    }

    fn refresh_smooth_bounds(&mut self) -> Result<()> {
        if let Kind::Smooth { formula, params } = &self.kind {
            if !(params.base.is_finite() && params.amp.is_finite()) {
                return Err(Error::invalid("smooth exponent parameters must be finite"));
            }
            let (lo, hi) = formula.shape_range(self.work_radius);
            let (a, b) = (params.base + params.amp * lo, params.base + params.amp * hi);
            self.p_minus = a.min(b);
            self.p_plus = a.max(b);
            check_value(self.p_minus)?;
        }
        Ok(())
    }

    pub fn kind(&self) -> ExponentKind {
        match self.kind {
            Kind::Constant(_) => ExponentKind::Constant,
            Kind::Piecewise { .. } => ExponentKind::PiecewiseConstant,
            Kind::Smooth { .. } => ExponentKind::SmoothLogHolder,
            Kind::Custom { .. } => ExponentKind::CustomEvaluable,
        }
    }

    pub fn p_minus(&self) -> f64 {
        self.p_minus
    }

    pub fn p_plus(&self) -> f64 {
        self.p_plus
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn work_radius(&self) -> f64 {
        self.work_radius
    }

    /// `Some(p)` when the exponent is the constant `p`.
    pub fn as_constant(&self) -> Option<f64> {
        match self.kind {
            Kind::Constant(p) => Some(p),
            _ if self.p_minus == self.p_plus => Some(self.p_minus),
            _ => None,
        }
    }

    /// `Some(p)` when the exponent is constant on `[lo, hi]`.
    pub fn constant_on(&self, lo: f64, hi: f64) -> Option<f64> {
        if let Some(p) = self.as_constant() {
            return Some(p);
        }
        match &self.kind {
            Kind::Piecewise { breaks, .. } => {
                let (lo, hi) = if self.dimension >= 2 {
                    (lo.abs().min(hi.abs()), lo.abs().max(hi.abs()))
                } else {
                    (lo, hi)
                };
                if breaks.iter().any(|&b| b > lo && b < hi) {
                    None
                } else {
                    Some(self.value(0.5 * (lo + hi)))
                }
            }
            _ => None,
        }
    }

    /// Discontinuities of the exponent (in the coordinate the exponent is
    /// evaluated at).
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.kind {
            Kind::Piecewise { breaks, .. } | Kind::Custom { breaks, .. } => breaks.clone(),
            _ => Vec::new(),
        }
    }

    /// Checked evaluation.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::invalid(format!("exponent evaluated at non-finite point {x}")));
        }
        if matches!(self.kind, Kind::Custom { .. }) && x.abs() > self.work_radius {
            return Err(Error::invalid(format!(
                "point {x} lies outside the working box of radius {}",
                self.work_radius
            )));
        }
        Ok(self.value(x))
    }

    /// Unchecked evaluation used by the integrators.
    #[inline]
    pub fn value(&self, x: f64) -> f64 {
        let x = if self.dimension >= 2 { x.abs() } else { x };
        match &self.kind {
            Kind::Constant(p) => *p,
            Kind::Piecewise { breaks, values } => {
                let idx = breaks.partition_point(|&b| b <= x);
                values[idx]
            }
            Kind::Smooth { formula, params } => params.base + params.amp * formula.shape(x.abs()),
            Kind::Custom { eval, .. } => eval(x),
        }
    }

    /// Largest limit of `p` at the origin: `p(0)` when `p` is continuous
    /// there, the larger one-sided value at a jump. Integrability of
    /// `|x|^a` near 0 is decided by this value.
    pub fn value_at_origin(&self) -> f64 {
        const EPS: f64 = 1e-12;
        let p0 = self.value(0.0);
        if self.breakpoints().iter().any(|b| b.abs() <= EPS) {
            p0.max(self.value(-EPS)).max(self.value(EPS))
        } else {
            p0
        }
    }

    /// `p'(x) = p(x) / (p(x) - 1)`.
    pub fn conjugate(&self) -> Result<Exponent> {
        if !self.is_in_p() {
            return Err(Error::invalid(format!(
                "conjugate requires p_- > 1, got p_- = {}",
                self.p_minus
            )));
        }
        let conj = |p: f64| p / (p - 1.0);
        let kind = match &self.kind {
            Kind::Constant(p) => Kind::Constant(conj(*p)),
            Kind::Piecewise { breaks, values } => Kind::Piecewise {
                breaks: breaks.clone(),
                values: values.iter().map(|&p| conj(p)).collect(),
            },
            _ => {
                let inner = self.clone();
                Kind::Custom {
                    eval: Arc::new(move |x| conj(inner.value(x))),
                    breaks: self.breakpoints(),
                }
            }
        };
        Ok(Exponent {
            kind,
            p_minus: conj(self.p_plus),
            p_plus: conj(self.p_minus),
            dimension: self.dimension,
            work_radius: self.work_radius,
        })
    }

    /// `p(·) / p0`, as used when moving between `L^p` and `L^{p/p0}`.
    pub fn divided_by(&self, p0: f64) -> Result<Exponent> {
        if !(p0.is_finite() && p0 > 0.0) {
            return Err(Error::invalid(format!("divisor {p0} must be positive")));
        }
        if self.p_minus / p0 < 1.0 {
            return Err(Error::invalid(format!(
                "p/p0 must stay >= 1, but p_- / p0 = {}",
                self.p_minus / p0
            )));
        }
        let kind = match &self.kind {
            Kind::Constant(p) => Kind::Constant(p / p0),
            Kind::Piecewise { breaks, values } => Kind::Piecewise {
                breaks: breaks.clone(),
                values: values.iter().map(|&p| p / p0).collect(),
            },
            _ => {
                let inner = self.clone();
                Kind::Custom {
                    eval: Arc::new(move |x| inner.value(x) / p0),
                    breaks: self.breakpoints(),
                }
            }
        };
        Ok(Exponent {
            kind,
            p_minus: self.p_minus / p0,
            p_plus: self.p_plus / p0,
            dimension: self.dimension,
            work_radius: self.work_radius,
        })
    }

    /// Membership in `P`: `p_- > 1` and `p_+ < ∞`, with the default margin.
    pub fn is_in_p(&self) -> bool {
        self.is_in_p_with_margin(DEFAULT_P_MARGIN)
    }

    pub fn is_in_p_with_margin(&self, margin: f64) -> bool {
        self.p_minus >= 1.0 + margin && self.p_plus.is_finite()
    }

    /// The constant `1 + 1/p_- + 1/p_+` of the duality bound.
    pub fn duality_constant(&self) -> f64 {
        1.0 + 1.0 / self.p_minus + 1.0 / self.p_plus
    }
}

fn sample_bounds(eval: &(dyn Fn(f64) -> f64 + Send + Sync), radius: f64, dim: usize) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut visit = |x: f64| {
        let v = eval(x);
        lo = lo.min(v);
        hi = hi.max(v);
    };
    let n = 20_000;
    let start = if dim >= 2 { 0.0 } else { -radius };
    for i in 0..=n {
        visit(start + (radius - start) * i as f64 / n as f64);
    }
    // geometric layers resolve structure near the origin
    for i in 0..=n {
        let r = 1e-6 * (radius / 1e-6).powf(i as f64 / n as f64);
        visit(r);
        if dim == 1 {
            visit(-r);
        }
    }
    (lo, hi)
}

/// Tuning knobs for [`log_holder_check`].
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct LogHolderOptions {
    /// Both constants must stay below this value.
    pub cap: f64,
    /// Allowed relative growth of the decay constant over the last decade of
    /// dyadic boxes.
    pub growth_tol: f64,
    /// Finest local scale is `2^-finest_scale`.
    pub finest_scale: u32,
}

impl Default for LogHolderOptions {
    fn default() -> Self {
        LogHolderOptions {
            cap: 100.0,
            growth_tol: 0.25,
            finest_scale: 40,
        }
    }
}

/// Estimates the local log-Hölder constant
/// `sup |p(x)-p(y)| log(1/|x-y|)` over `|x-y| <= 1/2` and the decay constant
/// `sup |p(x)-p_∞| log(e+|x|)` with a fitted limit `p_∞`.
pub fn log_holder_check(e: &Exponent, sample_budget: usize) -> Result<CheckReport> {
    log_holder_check_with(e, sample_budget, LogHolderOptions::default())
}

pub fn log_holder_check_with(
    e: &Exponent,
    sample_budget: usize,
    opts: LogHolderOptions,
) -> Result<CheckReport> {
    if !e.is_in_p() {
        return Err(Error::invalid("log-Hölder check needs an exponent in P"));
    }
    if sample_budget < 16 {
        return Err(Error::invalid("sample budget must be at least 16"));
    }
    let radius = e.work_radius;
    let radial = e.dimension >= 2;
    let check = |x: f64| -> Result<f64> {
        let v = e.evaluate(x)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::invalid(format!("exponent is not evaluable at {x}")))
        }
    };

    // sample points: uniform near the origin, geometric further out, and
    // both sides of every break
    let half = sample_budget / 2;
    let mut xs = Vec::with_capacity(sample_budget + 4 * e.breakpoints().len());
    for i in 0..half {
        xs.push(-4.0 + 8.0 * i as f64 / (half - 1) as f64);
    }
    for i in 0..(sample_budget - half) {
        let r = 4.0 * (radius / 4.0).powf(i as f64 / (sample_budget - half - 1) as f64);
        xs.push(r);
        xs.push(-r);
    }
    if radial {
        xs.retain(|x| *x >= 0.0);
    }
    xs.retain(|x| x.abs() <= radius);

    // local scales h = 2^-j; L_j is the worst local ratio at that scale
    let scales: Vec<u32> = (1..=opts.finest_scale.max(2)).collect();
    let mut local = Vec::with_capacity(scales.len());
    for &j in &scales {
        let h = 0.5f64.powi(j as i32);
        let log_inv = (1.0 / h).ln();
        let mut worst = 0.0f64;
        let mut probe = |x: f64, y: f64| -> Result<()> {
            if x.abs() <= radius && y.abs() <= radius {
                worst = worst.max((check(x)? - check(y)?).abs() * log_inv);
            }
            Ok(())
        };
        for &x in &xs {
            probe(x, x + h)?;
        }
        for b in e.breakpoints() {
            probe(b - 0.5 * h, b + 0.5 * h)?;
        }
        local.push(worst);
    }
    let split = local.len().saturating_sub(10).max(1);
    let coarse_max = local[..split].iter().copied().fold(0.0, f64::max);
    let fine_max = local[split..].iter().copied().fold(0.0, f64::max);
    let local_const = coarse_max.max(fine_max);
    let local_growing = fine_max > coarse_max * (1.0 + 1e-6) + 1e-12;

    // decay: nested boxes 2^i, refitting p_∞ at each box edge
    let top = radius.log2().floor().max(1.0) as i32;
    let mut decay = Vec::new();
    let mut p_inf = e.value(radius);
    for i in 1..=top {
        let r = 2f64.powi(i);
        p_inf = if radial {
            check(r)?
        } else {
            0.5 * (check(r)? + check(-r)?)
        };
        let mut worst = 0.0f64;
        for &x in xs.iter().filter(|x| x.abs() <= r) {
            worst = worst.max((check(x)? - p_inf).abs() * (std::f64::consts::E + x.abs()).ln());
        }
        decay.push(worst);
    }
    let decay_const = *decay.last().unwrap_or(&0.0);
    let reference = decay[decay.len().saturating_sub(11)];
    let decay_growing = decay_const > reference * (1.0 + opts.growth_tol) + 1e-9;

    let pass = local_const <= opts.cap && decay_const <= opts.cap && !local_growing && !decay_growing;
    let mut notes = format!("fitted p_inf = {p_inf:.6}");
    if local_growing {
        notes.push_str("; local constant grows at fine scales (discontinuity)");
    }
    if decay_growing {
        notes.push_str("; decay constant grows with the box (no limit at infinity)");
    }
    Ok(CheckReport {
        statement_id: "log-holder".to_string(),
        pass,
        empirical_constant: Some(local_const.max(decay_const)),
        fitted_exponent: Some(p_inf),
        witnesses: vec![
            Witness::new("local constant vs cap", local_const, opts.cap),
            Witness::new("decay constant vs cap", decay_const, opts.cap),
            Witness::new("decay constant growth over last decade", decay_const, reference),
        ],
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pw23() -> Exponent {
        Exponent::piecewise(vec![0.5], vec![2.0, 3.0]).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(Exponent::constant(2.0).unwrap().evaluate(0.7).unwrap(), 2.0);
        assert_eq!(pw23().evaluate(0.75).unwrap(), 3.0);
        let s = Exponent::smooth(SmoothFormula::InvOnePlusAbs, SmoothParams::default()).unwrap();
        assert_eq!(s.evaluate(0.0).unwrap(), 3.0);
    }

    #[test]
    fn evaluate_rejects_non_finite() {
        let e = Exponent::constant(2.0).unwrap();
        assert!(matches!(e.evaluate(f64::NAN), Err(Error::InvalidInput(_))));
        let c = Exponent::custom(|x| 2.0 + x.sin()).unwrap();
        assert!(c.evaluate(2.0 * DEFAULT_WORK_RADIUS).is_err());
    }

    #[test]
    fn conjugate_examples() {
        let c = Exponent::constant(2.0).unwrap().conjugate().unwrap();
        assert_eq!(c.as_constant(), Some(2.0));
        let c = Exponent::constant(3.0).unwrap().conjugate().unwrap();
        assert_eq!(c.as_constant(), Some(1.5));
        let c = pw23().conjugate().unwrap();
        assert_eq!(c.kind(), ExponentKind::PiecewiseConstant);
        assert_eq!(c.value(0.25), 2.0);
        assert_eq!(c.value(0.75), 1.5);
        assert_eq!(c.breakpoints(), vec![0.5]);
    }

    #[test]
    fn conjugate_swaps_bounds() {
        let s = Exponent::smooth(SmoothFormula::InvOnePlusSq, SmoothParams::default()).unwrap();
        let c = s.conjugate().unwrap();
        let conj = |p: f64| p / (p - 1.0);
        assert!((c.p_minus() - conj(s.p_plus())).abs() < 1e-12);
        assert!((c.p_plus() - conj(s.p_minus())).abs() < 1e-12);
    }

    #[test]
    fn membership() {
        assert!(Exponent::constant(2.0).unwrap().is_in_p());
        assert!(!Exponent::piecewise(vec![0.0], vec![1.0, 2.0]).unwrap().is_in_p());
        assert!(Exponent::constant(1000.0).unwrap().is_in_p());
        assert!(Exponent::constant(1.0).unwrap().conjugate().is_err());
        assert!(Exponent::constant(0.5).is_err());
        assert!(Exponent::constant(f64::INFINITY).is_err());
    }

    #[test]
    fn constant_bounds_are_exact() {
        let e = Exponent::constant(2.75).unwrap();
        assert_eq!(e.p_minus(), 2.75);
        assert_eq!(e.p_plus(), 2.75);
    }

    #[test]
    fn smooth_bounds_over_box() {
        let s = Exponent::smooth(SmoothFormula::InvOnePlusAbs, SmoothParams::default()).unwrap();
        assert_eq!(s.p_plus(), 3.0);
        assert!((s.p_minus() - (2.0 + 1.0 / (1.0 + DEFAULT_WORK_RADIUS))).abs() < 1e-15);
        let w = Exponent::smooth(SmoothFormula::SinLogLog, SmoothParams::default()).unwrap();
        assert!((w.p_plus() - 3.0).abs() < 1e-12);
        let t1 = (10.0 + DEFAULT_WORK_RADIUS).ln().ln();
        assert!((w.p_minus() - (2.0 + t1.sin())).abs() < 1e-12);
    }

    #[test]
    fn custom_bounds_by_sampling() {
        let c = Exponent::custom(|x| 2.0 + 1.0 / (1.0 + x * x)).unwrap();
        assert!((c.p_plus() - 3.0).abs() < 1e-12);
        assert!(c.p_minus() >= 2.0 && c.p_minus() < 2.0 + 1e-9);
    }

    #[test]
    fn divided_by_keeps_shape() {
        let e = pw23().divided_by(1.25).unwrap();
        assert_eq!(e.value(0.0), 2.0 / 1.25);
        assert_eq!(e.value(1.0), 3.0 / 1.25);
        assert!(pw23().divided_by(2.5).is_err());
    }

    #[test]
    fn radial_exponent_ignores_sign() {
        let e = pw23().with_dimension(2).unwrap();
        assert_eq!(e.value(-0.75), 3.0);
    }

    #[test]
    fn spec_round_trip() {
        let spec: ExponentSpec =
            serde_json::from_str(r#"{"kind":"smooth","formula_id":"inv_one_plus_abs","params":{"base":2.0,"amp":1.0}}"#)
                .unwrap();
        let e = spec.build().unwrap();
        assert_eq!(e.value(1.0), 2.5);
        let json = serde_json::to_string(&spec).unwrap();
        let back: ExponentSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(spec, back);
        let pw: ExponentSpec =
            serde_json::from_str(r#"{"kind":"piecewise","breaks":[0.5],"values":[2,3]}"#).unwrap();
        assert_eq!(pw.build().unwrap().value(0.75), 3.0);
    }

    #[test]
    fn log_holder_constant() {
        let r = log_holder_check(&Exponent::constant(2.0).unwrap(), 2000).unwrap();
        assert!(r.pass);
        assert_eq!(r.witnesses[0].lhs, 0.0);
        assert_eq!(r.witnesses[1].lhs, 0.0);
    }

    #[test]
    fn log_holder_smooth_passes() {
        let e = Exponent::smooth(SmoothFormula::InvOnePlusSq, SmoothParams::default()).unwrap();
        let r = log_holder_check(&e, 4000).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.empirical_constant.unwrap().is_finite());
    }

    #[test]
    fn log_holder_sin_log_log_fails() {
        let e = Exponent::smooth(SmoothFormula::SinLogLog, SmoothParams::default()).unwrap();
        let r = log_holder_check(&e, 4000).unwrap();
        assert!(!r.pass, "{r:?}");
        assert!(r.notes.contains("decay"));
    }

    #[test]
    fn log_holder_flags_jumps() {
        let r = log_holder_check(&pw23(), 2000).unwrap();
        assert!(!r.pass);
        assert!(r.notes.contains("local"));
    }

    #[test]
    fn log_holder_rejects_non_p() {
        let e = Exponent::piecewise(vec![0.0], vec![1.0, 2.0]).unwrap();
        assert!(log_holder_check(&e, 100).is_err());
    }
}
