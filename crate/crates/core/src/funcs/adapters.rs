//! Small combinators over [`RealFunction`] used when a norm is taken of
//! something derived from a catalog function.

use super::{FarField, Parity, RealFunction};
use crate::error::Result;

/// `scale * g(x) + shift`.
pub struct Affine<F> {
    pub inner: F,
    pub scale: f64,
    pub shift: f64,
}

impl<F: RealFunction> Affine<F> {
    pub fn new(inner: F, scale: f64, shift: f64) -> Self {
        Affine { inner, scale, shift }
    }
}

impl<F: RealFunction> RealFunction for Affine<F> {
    fn value(&self, x: f64) -> Result<f64> {
        Ok(self.scale * self.inner.value(x)? + self.shift)
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.inner.breakpoints()
    }
    fn support_radius(&self) -> f64 {
        if self.shift != 0.0 {
            f64::INFINITY
        } else if self.scale == 0.0 {
            0.0
        } else {
            self.inner.support_radius()
        }
    }
    fn inner_radius(&self) -> f64 {
        if self.shift != 0.0 {
            0.0
        } else {
            self.inner.inner_radius()
        }
    }
    fn parity(&self) -> Parity {
        match self.inner.parity() {
            Parity::Odd if self.shift != 0.0 => Parity::Neither,
            p => p,
        }
    }
    fn sup_abs_between(&self, r0: f64, r1: f64) -> f64 {
        self.scale.abs() * self.inner.sup_abs_between(r0, r1) + self.shift.abs()
    }
    fn far_field(&self) -> FarField {
        if self.shift == 0.0 {
            return match self.inner.far_field() {
                FarField::Power {
                    radius,
                    coeff,
                    exponent,
                } => FarField::Power {
                    radius,
                    coeff: coeff * self.scale.abs(),
                    exponent,
                },
                ff => ff,
            };
        }
        match self.inner.far_field() {
            FarField::Compact { radius } => FarField::Power {
                radius,
                coeff: self.shift.abs(),
                exponent: 0.0,
            },
            FarField::Power {
                radius,
                coeff,
                exponent,
            } => FarField::Power {
                radius: radius.max(1.0),
                coeff: self.scale.abs() * coeff + self.shift.abs(),
                exponent: exponent.max(0.0),
            },
            FarField::Unknown => FarField::Unknown,
        }
    }
    fn origin_power(&self) -> Option<f64> {
        self.inner.origin_power()
    }
}

/// `|g(x)|^power`.
pub struct AbsPow<F> {
    pub inner: F,
    pub power: f64,
}

impl<F: RealFunction> AbsPow<F> {
    pub fn new(inner: F, power: f64) -> Self {
        AbsPow { inner, power }
    }
}

impl<F: RealFunction> RealFunction for AbsPow<F> {
    fn value(&self, x: f64) -> Result<f64> {
        Ok(self.inner.value(x)?.abs().powf(self.power))
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.inner.breakpoints()
    }
    fn support_radius(&self) -> f64 {
        self.inner.support_radius()
    }
    fn inner_radius(&self) -> f64 {
        self.inner.inner_radius()
    }
    fn parity(&self) -> Parity {
        match self.inner.parity() {
            Parity::Neither => Parity::Neither,
            _ => Parity::Even,
        }
    }
    fn sup_abs_between(&self, r0: f64, r1: f64) -> f64 {
        self.inner.sup_abs_between(r0, r1).powf(self.power)
    }
    fn far_field(&self) -> FarField {
        match self.inner.far_field() {
            FarField::Power {
                radius,
                coeff,
                exponent,
            } => FarField::Power {
                radius,
                coeff: coeff.powf(self.power),
                exponent: exponent * self.power,
            },
            ff => ff,
        }
    }
    fn origin_power(&self) -> Option<f64> {
        self.inner.origin_power().map(|a| a * self.power)
    }
}

/// `g * χ_{r0 <= |x| < r1}`.
pub struct Restricted<F> {
    pub inner: F,
    pub r0: f64,
    pub r1: f64,
}

impl<F: RealFunction> Restricted<F> {
    pub fn new(inner: F, r0: f64, r1: f64) -> Self {
        Restricted { inner, r0, r1 }
    }
}

impl<F: RealFunction> RealFunction for Restricted<F> {
    fn value(&self, x: f64) -> Result<f64> {
        let r = x.abs();
        if self.r0 <= r && r < self.r1 {
            self.inner.value(x)
        } else {
            Ok(0.0)
        }
    }
    fn breakpoints(&self) -> Vec<f64> {
        let mut v = self.inner.breakpoints();
        v.retain(|s| {
            let r = s.abs();
            self.r0 <= r && r <= self.r1
        });
        for r in [self.r0, self.r1] {
            if r.is_finite() && r > 0.0 {
                v.extend([-r, r]);
            }
        }
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }
    fn support_radius(&self) -> f64 {
        self.r1.min(self.inner.support_radius())
    }
    fn inner_radius(&self) -> f64 {
        self.r0.max(self.inner.inner_radius())
    }
    fn parity(&self) -> Parity {
        self.inner.parity()
    }
    fn sup_abs_between(&self, r0: f64, r1: f64) -> f64 {
        let (a, b) = (r0.max(self.r0), r1.min(self.r1));
        if a > b {
            0.0
        } else {
            self.inner.sup_abs_between(a, b)
        }
    }
    fn far_field(&self) -> FarField {
        if self.r1.is_finite() {
            FarField::Compact {
                radius: self.support_radius(),
            }
        } else {
            self.inner.far_field()
        }
    }
    fn origin_power(&self) -> Option<f64> {
        if self.r0 > 0.0 {
            None
        } else {
            self.inner.origin_power()
        }
    }
}

/// Pointwise `(sum_j |g_j(x)|^r)^{1/r}`.
pub struct LrAggregate<'a> {
    pub parts: Vec<&'a dyn RealFunction>,
    pub r: f64,
}

impl<'a> LrAggregate<'a> {
    pub fn new(parts: Vec<&'a dyn RealFunction>, r: f64) -> Self {
        LrAggregate { parts, r }
    }
}

impl RealFunction for LrAggregate<'_> {
    fn value(&self, x: f64) -> Result<f64> {
        let mut acc = 0.0;
        for g in &self.parts {
            acc += g.value(x)?.abs().powf(self.r);
        }
        Ok(acc.powf(1.0 / self.r))
    }
    fn breakpoints(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.parts.iter().flat_map(|g| g.breakpoints()).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }
    fn support_radius(&self) -> f64 {
        self.parts.iter().map(|g| g.support_radius()).fold(0.0, f64::max)
    }
    fn inner_radius(&self) -> f64 {
        self.parts
            .iter()
            .map(|g| g.inner_radius())
            .fold(f64::INFINITY, f64::min)
    }
    fn parity(&self) -> Parity {
        if self.parts.iter().all(|g| g.parity() != Parity::Neither) {
            Parity::Even
        } else {
            Parity::Neither
        }
    }
    fn sup_abs_between(&self, r0: f64, r1: f64) -> f64 {
        // ℓ^r is dominated by ℓ^1
        self.parts.iter().map(|g| g.sup_abs_between(r0, r1)).sum()
    }
    fn far_field(&self) -> FarField {
        let mut radius = 0.0f64;
        let mut coeff = 0.0;
        let mut exponent = f64::NEG_INFINITY;
        for g in &self.parts {
            match g.far_field() {
                FarField::Compact { radius: r } => radius = radius.max(r),
                FarField::Power {
                    radius: r,
                    coeff: c,
                    exponent: e,
                } => {
                    radius = radius.max(r);
                    coeff += c;
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
    fn origin_power(&self) -> Option<f64> {
        self.parts
            .iter()
            .filter_map(|g| g.origin_power())
            .reduce(f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcs::Func;

    #[test]
    fn lr_of_disjoint_rings_is_their_sum() {
        let a = Func::chi_ring(0);
        let b = Func::chi_ring(1);
        let agg = LrAggregate::new(vec![&a, &b], 2.0);
        assert_eq!(agg.value(0.75).unwrap(), 1.0);
        assert_eq!(agg.value(-1.5).unwrap(), 1.0);
        assert_eq!(agg.value(3.0).unwrap(), 0.0);
        assert_eq!(agg.support_radius(), 2.0);
    }

    #[test]
    fn lr_of_equal_pair() {
        let a = Func::Sign;
        let agg = LrAggregate::new(vec![&a, &a], 2.0);
        assert!((agg.value(3.0).unwrap() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn restriction_and_affine() {
        let f = Func::Sign;
        let r = Restricted::new(&f, 1.0, 2.0);
        assert_eq!(r.value(1.5).unwrap(), 1.0);
        assert_eq!(r.value(2.0).unwrap(), 0.0);
        assert_eq!(r.breakpoints(), vec![-2.0, -1.0, 1.0, 2.0]);
        let g = Affine::new(&f, 2.0, -0.5);
        assert_eq!(g.value(-1.0).unwrap(), -2.5);
        assert_eq!(g.parity(), Parity::Neither);
    }
}
