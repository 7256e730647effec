//! Exactly evaluable test functions and the [`RealFunction`] abstraction
//! shared by catalog functions, operator images and pointwise aggregates.
//!
//! Points are real numbers. In dimension one they are coordinates on the
//! line; in dimension `n >= 2` only radial functions are admitted and the
//! point is the radius `|x|`.

mod adapters;
mod geometry;

pub use adapters::{AbsPow, Affine, LrAggregate, Restricted};
pub use geometry::{unit_ball_volume, Ball, Domain, DyadicRing};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{self, QuadResult};

/// Default truncation level of the dyadic-step counterexample.
pub const DEFAULT_K_MAX: u32 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Neither,
}

impl Parity {
    fn combine(self, other: Parity) -> Parity {
        if self == other {
            self
        } else {
            Parity::Neither
        }
    }

    fn times(self, other: Parity) -> Parity {
        match (self, other) {
            (Parity::Neither, _) | (_, Parity::Neither) => Parity::Neither,
            (a, b) if a == b => Parity::Even,
            _ => Parity::Odd,
        }
    }
}

/// Behaviour away from the origin: for `|x| >= radius`,
/// `|g(x)| <= coeff * |x|^exponent`, or `g` vanishes beyond `radius`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FarField {
    Compact { radius: f64 },
    Power { radius: f64, coeff: f64, exponent: f64 },
    Unknown,
}

impl FarField {
    /// Upper bound of `|g|` on `r0 <= |x| <= r1`, if the far field covers it.
    pub fn sup_between(&self, r0: f64, _r1: f64) -> Option<f64> {
        match *self {
            FarField::Compact { radius } if r0 >= radius => Some(0.0),
            FarField::Power {
                radius,
                coeff,
                exponent,
            } if r0 >= radius && r0 > 0.0 => {
                if exponent <= 0.0 {
                    Some(coeff * r0.powf(exponent))
                } else {
                    Some(coeff * _r1.powf(exponent))
                }
            }
            _ => None,
        }
    }
}

/// Anything the integrators and norm engines can consume.
pub trait RealFunction: Sync {
    /// Value at `x`; `x` is never one of [`breakpoints`](Self::breakpoints)
    /// when called by the integrators.
    fn value(&self, x: f64) -> Result<f64>;

    /// Points where the function jumps, kinks or blows up.
    fn breakpoints(&self) -> Vec<f64>;

    /// Smallest `R` with `g = 0` outside `B(0, R)`; infinite if unknown.
    fn support_radius(&self) -> f64 {
        f64::INFINITY
    }

    /// Largest `r` with `g = 0` on `B(0, r)`.
    fn inner_radius(&self) -> f64 {
        0.0
    }

    fn parity(&self) -> Parity {
        Parity::Neither
    }

    /// Upper bound of `|g|` on `r0 <= |x| <= r1` (infinite if unknown).
    fn sup_abs_between(&self, r0: f64, r1: f64) -> f64 {
        self.far_field().sup_between(r0, r1).unwrap_or(f64::INFINITY)
    }

    /// Enclosure `[lo, hi]` of the values on `B(0, r)`.
    fn range_on_ball(&self, r: f64) -> (f64, f64) {
        let s = self.sup_abs_between(0.0, r);
        (-s, s)
    }

    fn far_field(&self) -> FarField {
        let r = self.support_radius();
        if r.is_finite() {
            FarField::Compact { radius: r }
        } else {
            FarField::Unknown
        }
    }

    /// `Some(a)` with `a < 0` when `|g(x)|` behaves like `|x|^a` at the origin.
    fn origin_power(&self) -> Option<f64> {
        None
    }
}

impl<T: RealFunction + ?Sized> RealFunction for &T {
    fn value(&self, x: f64) -> Result<f64> {
        (**self).value(x)
    }
    fn breakpoints(&self) -> Vec<f64> {
        (**self).breakpoints()
    }
    fn support_radius(&self) -> f64 {
        (**self).support_radius()
    }
    fn inner_radius(&self) -> f64 {
        (**self).inner_radius()
    }
    fn parity(&self) -> Parity {
        (**self).parity()
    }
    fn sup_abs_between(&self, r0: f64, r1: f64) -> f64 {
        (**self).sup_abs_between(r0, r1)
    }
    fn range_on_ball(&self, r: f64) -> (f64, f64) {
        (**self).range_on_ball(r)
    }
    fn far_field(&self) -> FarField {
        (**self).far_field()
    }
    fn origin_power(&self) -> Option<f64> {
        (**self).origin_power()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: f64,
    pub func: Func,
}

/// The closed catalog of test functions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Func {
    Zero,
    Constant {
        c: f64,
    },
    /// `χ_[a,b]` on the line.
    ChiInterval {
        a: f64,
        b: f64,
    },
    /// `χ` of `{inner <= |x| < outer}`.
    ChiAnnulus {
        inner: f64,
        outer: f64,
    },
    /// `|x|^a`, cut off outside `B(0, radius)` when a radius is given.
    Power {
        a: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        radius: Option<f64>,
    },
    Sign,
    /// `sum_{k=0}^{k_max} 2^k χ_{A_k}(x) sgn(x)` with `A_k = {2^k < |x| <= 2^k + 1}`.
    DyadicStep {
        #[serde(default = "default_k_max")]
        k_max: u32,
    },
    /// `f_0(x) = |x|^n |B|^{-1} χ_B(x)` for `B = B(0, radius)`.
    ScaledBall {
        radius: f64,
        #[serde(default = "default_dim")]
        dim: usize,
    },
    LinearCombination {
        terms: Vec<Term>,
    },
    ProductWithSign {
        func: Box<Func>,
    },
    Abs {
        func: Box<Func>,
    },
}

fn default_k_max() -> u32 {
    DEFAULT_K_MAX
}

fn default_dim() -> usize {
    1
}

fn dedup_sorted(mut pts: Vec<f64>) -> Vec<f64> {
    pts.retain(|p| p.is_finite());
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Open-interval overlap of `[a, b]` with `{r0 <= |x| <= r1}`.
fn interval_meets_shell(a: f64, b: f64, r0: f64, r1: f64) -> bool {
    let meets = |lo: f64, hi: f64| lo.max(a) < hi.min(b);
    meets(r0, r1) || meets(-r1, -r0)
}

impl Func {
    pub fn chi_interval(a: f64, b: f64) -> Func {
        Func::ChiInterval { a, b }
    }

    pub fn chi_annulus(inner: f64, outer: f64) -> Func {
        Func::ChiAnnulus { inner, outer }
    }

    /// `χ_k`, the indicator of the dyadic ring `C_k`.
    pub fn chi_ring(k: i32) -> Func {
        Func::ChiAnnulus {
            inner: 2f64.powi(k - 1),
            outer: 2f64.powi(k),
        }
    }

    /// `χ_B` for `B = B(0, r)`.
    pub fn chi_ball(r: f64) -> Func {
        Func::ChiAnnulus {
            inner: 0.0,
            outer: r,
        }
    }

    pub fn power(a: f64, radius: Option<f64>) -> Func {
        Func::Power { a, radius }
    }

    pub fn dyadic_step(k_max: u32) -> Func {
        Func::DyadicStep { k_max }
    }

    pub fn scaled_ball(radius: f64, dim: usize) -> Func {
        Func::ScaledBall { radius, dim }
    }

    pub fn scaled(self, coeff: f64) -> Func {
        Func::LinearCombination {
            terms: vec![Term { coeff, func: self }],
        }
    }

    pub fn combination(terms: impl IntoIterator<Item = (f64, Func)>) -> Func {
        Func::LinearCombination {
            terms: terms
                .into_iter()
                .map(|(coeff, func)| Term { coeff, func })
                .collect(),
        }
    }

    pub fn times_sign(self) -> Func {
        Func::ProductWithSign {
            func: Box::new(self),
        }
    }

    pub fn abs(self) -> Func {
        Func::Abs {
            func: Box::new(self),
        }
    }

    /// Checks parameters and that every referenced kind is well formed.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::invalid(msg));
        match self {
            Func::Zero | Func::Sign => Ok(()),
            Func::Constant { c } if c.is_finite() => Ok(()),
            Func::Constant { c } => bad(format!("constant {c} is not finite")),
            Func::ChiInterval { a, b } if a.is_finite() && b.is_finite() && a < b => Ok(()),
            Func::ChiInterval { a, b } => bad(format!("interval [{a}, {b}] is malformed")),
            Func::ChiAnnulus { inner, outer } if *inner >= 0.0 && outer > inner && outer.is_finite() => {
                Ok(())
            }
            Func::ChiAnnulus { inner, outer } => bad(format!("annulus [{inner}, {outer}) is malformed")),
            Func::Power { a, radius } => {
                if !a.is_finite() || radius.is_some_and(|r| !(r.is_finite() && r > 0.0)) {
                    bad(format!("power |x|^{a} with radius {radius:?} is malformed"))
                } else {
                    Ok(())
                }
            }
            Func::DyadicStep { k_max } if *k_max <= 1000 => Ok(()),
            Func::DyadicStep { k_max } => bad(format!("k_max {k_max} is too large")),
            Func::ScaledBall { radius, dim } if radius.is_finite() && *radius > 0.0 && *dim >= 1 => {
                Ok(())
            }
            Func::ScaledBall { radius, .. } => bad(format!("scaled ball radius {radius} is malformed")),
            Func::LinearCombination { terms } => {
                for t in terms {
                    if !t.coeff.is_finite() {
                        return bad("linear combination coefficient is not finite".into());
                    }
                    t.func.validate()?;
                }
                Ok(())
            }
            Func::ProductWithSign { func } | Func::Abs { func } => func.validate(),
        }
    }

    /// Discontinuities, kinks and singularities, sorted.
    pub fn singular_points(&self) -> Vec<f64> {
        let pts = match self {
            Func::Zero | Func::Constant { .. } => Vec::new(),
            Func::ChiInterval { a, b } => vec![*a, *b],
            Func::ChiAnnulus { inner, outer } => {
                let mut v = vec![-outer, *outer];
                if *inner > 0.0 {
                    v.extend([-inner, *inner]);
                }
                v
            }
            Func::Power { radius, .. } => {
                let mut v = vec![0.0];
                if let Some(r) = radius {
                    v.extend([-r, *r]);
                }
                v
            }
            Func::Sign => vec![0.0],
            Func::DyadicStep { k_max } => {
                let mut v = Vec::with_capacity(4 * (*k_max as usize + 1));
                for k in 0..=*k_max {
                    let lo = 2f64.powi(k as i32);
                    v.extend([lo, lo + 1.0, -lo, -(lo + 1.0)]);
                }
                v
            }
            Func::ScaledBall { radius, .. } => vec![-radius, 0.0, *radius],
            Func::LinearCombination { terms } => {
                terms.iter().flat_map(|t| t.func.singular_points()).collect()
            }
            Func::ProductWithSign { func } => {
                let mut v = func.singular_points();
                v.push(0.0);
                v
            }
            Func::Abs { func } => func.singular_points(),
        };
        dedup_sorted(pts)
    }

    /// Checked evaluation: rejects non-finite points and blow-ups.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::invalid(format!("cannot evaluate at non-finite point {x}")));
        }
        if self.is_singular_at(x) {
            return Err(Error::invalid(format!("{x} is a singular point of the function")));
        }
        Ok(self.eval(x))
    }

    // Jumps of step functions have a defined value (the sets A_k are closed
    // on the right), so only genuine blow-ups are rejected.
    fn is_singular_at(&self, x: f64) -> bool {
        x == 0.0 && self.singular_power().is_some()
    }

    /// Unchecked evaluation.
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Func::Zero => 0.0,
            Func::Constant { c } => *c,
            Func::ChiInterval { a, b } => {
                if *a <= x && x <= *b {
                    1.0
                } else {
                    0.0
                }
            }
            Func::ChiAnnulus { inner, outer } => {
                let r = x.abs();
                if *inner <= r && r < *outer {
                    1.0
                } else {
                    0.0
                }
            }
            Func::Power { a, radius } => {
                let r = x.abs();
                if radius.is_some_and(|rad| r > rad) {
                    0.0
                } else if *a == 0.0 {
                    1.0
                } else {
                    r.powf(*a)
                }
            }
            Func::Sign => {
                if x > 0.0 {
                    1.0
                } else if x < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }
            Func::DyadicStep { k_max } => {
                let r = x.abs();
                if r <= 1.0 {
                    return 0.0;
                }
                // 2^k < r <= 2^{k+1} selects the only candidate ring
                let mut k = r.log2().ceil() as i64 - 1;
                if 2f64.powi(k as i32) >= r {
                    k -= 1;
                } else if 2f64.powi(k as i32 + 1) < r {
                    k += 1;
                }
                if k < 0 || k > *k_max as i64 {
                    return 0.0;
                }
                let lo = 2f64.powi(k as i32);
                if r <= lo + 1.0 {
                    lo * x.signum()
                } else {
                    0.0
                }
            }
            Func::ScaledBall { radius, dim } => {
                let r = x.abs();
                if r < *radius {
                    r.powi(*dim as i32) / (unit_ball_volume(*dim) * radius.powi(*dim as i32))
                } else {
                    0.0
                }
            }
            Func::LinearCombination { terms } => terms.iter().map(|t| t.coeff * t.func.eval(x)).sum(),
            Func::ProductWithSign { func } => {
                let v = func.eval(x);
                if x > 0.0 {
                    v
                } else if x < 0.0 {
                    -v
                } else {
                    0.0
                }
            }
            Func::Abs { func } => func.eval(x).abs(),
        }
    }

    pub fn support(&self) -> f64 {
        match self {
            Func::Zero => 0.0,
            Func::Constant { c } => {
                if *c == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            Func::ChiInterval { a, b } => a.abs().max(b.abs()),
            Func::ChiAnnulus { outer, .. } => *outer,
            Func::Power { radius, .. } => radius.unwrap_or(f64::INFINITY),
            Func::Sign => f64::INFINITY,
            Func::DyadicStep { k_max } => 2f64.powi(*k_max as i32) + 1.0,
            Func::ScaledBall { radius, .. } => *radius,
            Func::LinearCombination { terms } => terms
                .iter()
                .filter(|t| t.coeff != 0.0)
                .map(|t| t.func.support())
                .fold(0.0, f64::max),
            Func::ProductWithSign { func } | Func::Abs { func } => func.support(),
        }
    }

    pub fn inner(&self) -> f64 {
        match self {
            Func::Zero => f64::INFINITY,
            Func::ChiInterval { a, b } => {
                if *a <= 0.0 && 0.0 <= *b {
                    0.0
                } else {
                    a.abs().min(b.abs())
                }
            }
            Func::ChiAnnulus { inner, .. } => *inner,
            Func::DyadicStep { .. } => 1.0,
            Func::LinearCombination { terms } => terms
                .iter()
                .filter(|t| t.coeff != 0.0)
                .map(|t| t.func.inner())
                .fold(f64::INFINITY, f64::min),
            Func::ProductWithSign { func } | Func::Abs { func } => func.inner(),
            Func::Constant { c } if *c == 0.0 => f64::INFINITY,
            _ => 0.0,
        }
    }

    pub fn func_parity(&self) -> Parity {
        match self {
            Func::Zero
            | Func::Constant { .. }
            | Func::ChiAnnulus { .. }
            | Func::Power { .. }
            | Func::ScaledBall { .. } => Parity::Even,
            Func::ChiInterval { a, b } => {
                if *a == -*b {
                    Parity::Even
                } else {
                    Parity::Neither
                }
            }
            Func::Sign | Func::DyadicStep { .. } => Parity::Odd,
            Func::LinearCombination { terms } => terms
                .iter()
                .filter(|t| t.coeff != 0.0)
                .map(|t| t.func.func_parity())
                .reduce(Parity::combine)
                .unwrap_or(Parity::Even),
            Func::ProductWithSign { func } => func.func_parity().times(Parity::Odd),
            Func::Abs { func } => match func.func_parity() {
                Parity::Neither => Parity::Neither,
                _ => Parity::Even,
            },
        }
    }

    /// Upper bound of `|f|` on `r0 <= |x| <= r1`.
    pub fn sup_abs_on(&self, r0: f64, r1: f64) -> f64 {
        match self {
            Func::Zero => 0.0,
            Func::Constant { c } => c.abs(),
            Func::ChiInterval { a, b } => {
                if interval_meets_shell(*a, *b, r0, r1) {
                    1.0
                } else {
                    0.0
                }
            }
            Func::ChiAnnulus { inner, outer } => {
                if inner.max(r0) < outer.min(r1) || (r0 == r1 && *inner <= r0 && r0 < *outer) {
                    1.0
                } else {
                    0.0
                }
            }
            Func::Power { a, radius } => {
                let top = r1.min(radius.unwrap_or(f64::INFINITY));
                if r0 > top {
                    0.0
                } else if *a >= 0.0 {
                    top.powf(*a)
                } else if r0 == 0.0 {
                    f64::INFINITY
                } else {
                    r0.powf(*a)
                }
            }
            Func::Sign => 1.0,
            Func::DyadicStep { k_max } => (0..=*k_max)
                .rev()
                .map(|k| 2f64.powi(k as i32))
                .find(|&lo| lo < r1 && r0 <= lo + 1.0)
                .unwrap_or(0.0),
            Func::ScaledBall { radius, dim } => {
                if r0 >= *radius {
                    0.0
                } else {
                    r1.min(*radius).powi(*dim as i32)
                        / (unit_ball_volume(*dim) * radius.powi(*dim as i32))
                }
            }
            Func::LinearCombination { terms } => terms
                .iter()
                .filter(|t| t.coeff != 0.0)
                .map(|t| t.coeff.abs() * t.func.sup_abs_on(r0, r1))
                .sum(),
            Func::ProductWithSign { func } | Func::Abs { func } => func.sup_abs_on(r0, r1),
        }
    }

    /// Enclosure `[lo, hi]` of the values of `f` on `B(0, r)`.
    pub fn range_on_ball(&self, r: f64) -> (f64, f64) {
        match self {
            Func::Zero => (0.0, 0.0),
            Func::Constant { c } => (*c, *c),
            Func::ChiInterval { a, b } => {
                if a.max(-r) < b.min(r) {
                    if *a <= -r && r <= *b {
                        (1.0, 1.0)
                    } else {
                        (0.0, 1.0)
                    }
                } else {
                    (0.0, 0.0)
                }
            }
            Func::ChiAnnulus { inner, outer } => {
                if *inner >= r {
                    (0.0, 0.0)
                } else if *inner == 0.0 && *outer >= r {
                    (1.0, 1.0)
                } else {
                    (0.0, 1.0)
                }
            }
            Func::Power { a, radius } => {
                let top = r.min(radius.unwrap_or(f64::INFINITY));
                let cut = radius.is_some_and(|rad| rad < r);
                if *a > 0.0 {
                    (0.0, top.powf(*a))
                } else if *a == 0.0 {
                    (if cut { 0.0 } else { 1.0 }, 1.0)
                } else {
                    (if cut { 0.0 } else { top.powf(*a) }, f64::INFINITY)
                }
            }
            Func::Sign => (-1.0, 1.0),
            Func::DyadicStep { .. } => {
                let m = self.sup_abs_on(0.0, r);
                (-m, m)
            }
            Func::ScaledBall { .. } => (0.0, self.sup_abs_on(0.0, r)),
            Func::LinearCombination { terms } => terms.iter().fold((0.0, 0.0), |(lo, hi), t| {
                let (a, b) = t.func.range_on_ball(r);
                let (a, b) = if t.coeff >= 0.0 {
                    (t.coeff * a, t.coeff * b)
                } else {
                    (t.coeff * b, t.coeff * a)
                };
                (lo + a, hi + b)
            }),
            Func::ProductWithSign { func } => {
                let (a, b) = func.range_on_ball(r);
                let m = a.abs().max(b.abs());
                (-m, m)
            }
            Func::Abs { func } => {
                let (a, b) = func.range_on_ball(r);
                let lo = if a <= 0.0 && b >= 0.0 {
                    0.0
                } else {
                    a.abs().min(b.abs())
                };
                (lo, a.abs().max(b.abs()))
            }
        }
    }

    pub fn far(&self) -> FarField {
        match self {
            Func::Constant { c } if *c != 0.0 => FarField::Power {
                radius: 0.0,
                coeff: c.abs(),
                exponent: 0.0,
            },
            Func::Sign => FarField::Power {
                radius: 0.0,
                coeff: 1.0,
                exponent: 0.0,
            },
            Func::Power { a, radius: None } => FarField::Power {
                radius: 0.0,
                coeff: 1.0,
                exponent: *a,
            },
            Func::LinearCombination { terms } => {
                let mut radius = 0.0f64;
                let mut coeff = 0.0;
                let mut exponent = f64::NEG_INFINITY;
                for t in terms.iter().filter(|t| t.coeff != 0.0) {
                    match t.func.far() {
                        FarField::Compact { radius: r } => radius = radius.max(r),
                        FarField::Power {
                            radius: r,
                            coeff: c,
                            exponent: e,
                        } => {
                            radius = radius.max(r);
                            coeff += t.coeff.abs() * c;
                            exponent = exponent.max(e);
                        }
                        FarField::Unknown => return FarField::Unknown,
                    }
                }
                if exponent == f64::NEG_INFINITY {
                    FarField::Compact { radius }
                } else {
                    FarField::Power {
                        radius: radius.max(1.0),
                        coeff,
                        exponent,
                    }
                }
            }
            Func::ProductWithSign { func } | Func::Abs { func } => func.far(),
            _ => FarField::Compact {
                radius: self.support(),
            },
        }
    }

    pub fn singular_power(&self) -> Option<f64> {
        match self {
            Func::Power { a, .. } if *a < 0.0 => Some(*a),
            Func::LinearCombination { terms } => terms
                .iter()
                .filter(|t| t.coeff != 0.0)
                .filter_map(|t| t.func.singular_power())
                .reduce(f64::min),
            Func::ProductWithSign { func } | Func::Abs { func } => func.singular_power(),
            _ => None,
        }
    }

    pub fn is_radial(&self) -> bool {
        self.func_parity() == Parity::Even
    }
}

impl RealFunction for Func {
    fn value(&self, x: f64) -> Result<f64> {
        Ok(self.eval(x))
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.singular_points()
    }
    fn support_radius(&self) -> f64 {
        self.support()
    }
    fn inner_radius(&self) -> f64 {
        self.inner()
    }
    fn parity(&self) -> Parity {
        self.func_parity()
    }
    fn sup_abs_between(&self, r0: f64, r1: f64) -> f64 {
        self.sup_abs_on(r0, r1)
    }
    fn range_on_ball(&self, r: f64) -> (f64, f64) {
        Func::range_on_ball(self, r)
    }
    fn far_field(&self) -> FarField {
        self.far()
    }
    fn origin_power(&self) -> Option<f64> {
        self.singular_power()
    }
}

/// `(1/|B|) ∫_B f` with the error bound scaled accordingly.
pub fn mean_on_ball(f: &dyn RealFunction, ball: &Ball, tol: f64) -> Result<QuadResult> {
    let vol = ball.volume();
    let q = quadrature::integrate_ball(f, ball, tol * vol)?;
    Ok(QuadResult {
        value: q.value / vol,
        abs_error_bound: q.abs_error_bound / vol,
        subdivisions: q.subdivisions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_step_values() {
        let f = Func::dyadic_step(DEFAULT_K_MAX);
        assert_eq!(f.evaluate(3.0).unwrap(), 2.0);
        assert_eq!(f.evaluate(-3.0).unwrap(), -2.0);
        assert_eq!(f.evaluate(1.5).unwrap(), 1.0);
        assert_eq!(f.evaluate(0.5).unwrap(), 0.0);
        assert_eq!(f.evaluate(3.5).unwrap(), 0.0);
        assert_eq!(f.evaluate(4.5).unwrap(), 4.0);
        assert_eq!(f.evaluate(1024.25).unwrap(), 1024.0);
        assert_eq!(f.evaluate(1023.5).unwrap(), 0.0);
        assert_eq!(f.evaluate(4.0).unwrap(), 0.0);
        assert_eq!(f.evaluate(5.0).unwrap(), 4.0);
        assert!(Func::power(-0.5, None).evaluate(0.0).is_err());
        assert_eq!(Func::power(0.5, None).evaluate(0.0).unwrap(), 0.0);
    }

    #[test]
    fn dyadic_step_brute_force() {
        // compare against direct membership testing on a fine grid
        let f = Func::dyadic_step(12);
        for i in 0..200_000 {
            let x = -5000.0 + i as f64 * 0.05 + 0.0123;
            let mut want = 0.0;
            for k in 0..=12 {
                let lo = 2f64.powi(k);
                if lo < x.abs() && x.abs() <= lo + 1.0 {
                    want = lo * x.signum();
                }
            }
            assert_eq!(f.eval(x), want, "x = {x}");
        }
    }

    #[test]
    fn scaled_ball_value() {
        let f0 = Func::scaled_ball(2.0, 1);
        assert_eq!(f0.evaluate(1.0).unwrap(), 0.25);
        assert_eq!(f0.evaluate(3.0).unwrap(), 0.0);
    }

    #[test]
    fn zero_everywhere() {
        assert_eq!(Func::Zero.evaluate(12.5).unwrap(), 0.0);
    }

    #[test]
    fn support_metadata_holds() {
        let fs = [
            Func::chi_interval(-0.5, 2.0),
            Func::chi_ring(3),
            Func::power(0.5, Some(3.0)),
            Func::dyadic_step(5),
            Func::scaled_ball(1.5, 1),
            Func::combination([(2.0, Func::chi_ring(1)), (-1.0, Func::Sign.times_sign().scaled(0.0))]),
        ];
        for f in &fs {
            let r = f.support();
            for x in [r + 1e-9, r + 1.0, 2.0 * r + 3.0] {
                assert_eq!(f.eval(x), 0.0, "{f:?} at {x}");
                assert_eq!(f.eval(-x), 0.0, "{f:?} at {}", -x);
            }
        }
    }

    #[test]
    fn sup_bounds_are_upper_bounds() {
        let fs = [
            Func::chi_interval(-0.5, 2.0),
            Func::power(-0.5, Some(3.0)),
            Func::power(1.5, None),
            Func::dyadic_step(6),
            Func::scaled_ball(3.0, 1),
            Func::combination([(2.0, Func::chi_ring(1)), (-3.0, Func::Sign)]),
        ];
        for f in &fs {
            for (r0, r1) in [(0.1, 0.7), (0.5, 3.0), (2.5, 9.0), (40.0, 80.0)] {
                let s = f.sup_abs_on(r0, r1);
                for i in 0..=400 {
                    let r = r0 + (r1 - r0) * i as f64 / 400.0;
                    for x in [r, -r] {
                        assert!(f.eval(x).abs() <= s + 1e-12, "{f:?} {x} {s}");
                    }
                }
                let (lo, hi) = f.range_on_ball(r1);
                for i in 0..=400 {
                    let x = -r1 + 2.0 * r1 * i as f64 / 400.0;
                    let v = f.eval(x);
                    if x.abs() < r1 {
                        assert!(lo - 1e-12 <= v && v <= hi + 1e-12, "{f:?} {x} {v} [{lo},{hi}]");
                    }
                }
            }
        }
    }

    #[test]
    fn parity_tracking() {
        assert_eq!(Func::Sign.func_parity(), Parity::Odd);
        assert_eq!(Func::dyadic_step(3).func_parity(), Parity::Odd);
        assert_eq!(Func::chi_ring(0).times_sign().func_parity(), Parity::Odd);
        assert_eq!(Func::Sign.times_sign().func_parity(), Parity::Even);
        assert_eq!(Func::chi_interval(0.0, 1.0).func_parity(), Parity::Neither);
        assert_eq!(Func::dyadic_step(3).abs().func_parity(), Parity::Even);
    }

    #[test]
    fn json_catalog() {
        let f: Func = serde_json::from_str(r#"{"kind":"dyadic_step","k_max":40}"#).unwrap();
        assert_eq!(f, Func::dyadic_step(40));
        let g: Func = serde_json::from_str(r#"{"kind":"chi_interval","a":0.0,"b":1.0}"#).unwrap();
        assert_eq!(g, Func::chi_interval(0.0, 1.0));
        let h: Func = serde_json::from_str(
            r#"{"kind":"linear_combination","terms":[{"coeff":2.0,"func":{"kind":"sign"}}]}"#,
        )
        .unwrap();
        assert_eq!(h.eval(-1.0), -2.0);
        assert!(serde_json::from_str::<Func>(r#"{"kind":"nosuch"}"#).is_err());
    }

    #[test]
    fn validate_rejects_malformed() {
        assert!(Func::chi_interval(1.0, 0.0).validate().is_err());
        assert!(Func::chi_annulus(2.0, 1.0).validate().is_err());
        assert!(Func::scaled_ball(0.0, 1).validate().is_err());
        assert!(Func::power(1.0, Some(-1.0)).validate().is_err());
        assert!(Func::combination([(1.0, Func::Sign), (0.5, Func::chi_ring(2))]).validate().is_ok());
    }
}
