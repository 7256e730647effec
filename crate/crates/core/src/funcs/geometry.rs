use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Volume of the unit ball in `R^n` (`v_1 = 2`, `v_2 = π`, ...).
pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        2 => std::f64::consts::PI,
        _ => unit_ball_volume(n - 2) * 2.0 * std::f64::consts::PI / n as f64,
    }
}

/// Origin-centred ball `B(0, r)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub radius: f64,
    #[serde(default = "one")]
    pub dim: usize,
}

fn one() -> usize {
    1
}

impl Ball {
    pub fn new(radius: f64, dim: usize) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::invalid(format!("ball radius {radius} must be positive and finite")));
        }
        if dim == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        Ok(Ball { radius, dim })
    }

    /// `B_k = B(0, 2^k)`.
    pub fn dyadic(k: i32, dim: usize) -> Self {
        Ball {
            radius: 2f64.powi(k),
            dim,
        }
    }

    pub fn volume(&self) -> f64 {
        unit_ball_volume(self.dim) * self.radius.powi(self.dim as i32)
    }

    pub fn domain(&self) -> Domain {
        Domain::Ball {
            radius: self.radius,
        }
    }
}

/// Dyadic ring `C_k = B_k \ B_{k-1} = {2^{k-1} <= |x| < 2^k}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicRing {
    pub k: i32,
    #[serde(default = "one")]
    pub dim: usize,
}

impl DyadicRing {
    pub fn new(k: i32, dim: usize) -> Self {
        DyadicRing { k, dim }
    }

    pub fn inner(&self) -> f64 {
        2f64.powi(self.k - 1)
    }

    pub fn outer(&self) -> f64 {
        2f64.powi(self.k)
    }

    pub fn volume(&self) -> f64 {
        let n = self.dim as i32;
        unit_ball_volume(self.dim) * (self.outer().powi(n) - self.inner().powi(n))
    }

    pub fn domain(&self) -> Domain {
        Domain::Ring { k: self.k }
    }
}

/// Integration region. Everything except `Interval` is origin-centred and
/// makes sense in any dimension; `Interval` is one-dimensional only.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    Ball { radius: f64 },
    Ring { k: i32 },
    Annulus { inner: f64, outer: f64 },
    Interval { a: f64, b: f64 },
    Whole,
}

impl Domain {
    pub fn validate(&self, dim: usize) -> Result<()> {
        let ok = match *self {
            Domain::Ball { radius } => radius.is_finite() && radius > 0.0,
            Domain::Ring { .. } | Domain::Whole => true,
            Domain::Annulus { inner, outer } => inner >= 0.0 && outer > inner,
            Domain::Interval { a, b } => {
                if dim != 1 {
                    return Err(Error::invalid("interval domains are one-dimensional"));
                }
                a.is_finite() && b.is_finite() && a <= b
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!("malformed domain {self:?}")))
        }
    }

    /// Radial extent `[r0, r1]` for origin-centred domains.
    pub fn radial_extent(&self) -> Option<(f64, f64)> {
        match *self {
            Domain::Ball { radius } => Some((0.0, radius)),
            Domain::Ring { k } => Some((2f64.powi(k - 1), 2f64.powi(k))),
            Domain::Annulus { inner, outer } => Some((inner, outer)),
            Domain::Whole => Some((0.0, f64::INFINITY)),
            Domain::Interval { .. } => None,
        }
    }

    /// Lebesgue measure in dimension `dim`.
    pub fn measure(&self, dim: usize) -> f64 {
        match *self {
            Domain::Interval { a, b } => b - a,
            _ => {
                let (r0, r1) = self.radial_extent().expect("origin-centred domain");
                let n = dim as i32;
                unit_ball_volume(dim) * (r1.powi(n) - r0.powi(n))
            }
        }
    }

    /// Closed-interval pieces of the domain on the real line (`dim == 1`).
    pub fn line_pieces(&self) -> Vec<(f64, f64)> {
        match *self {
            Domain::Interval { a, b } => vec![(a, b)],
            Domain::Ball { radius } => vec![(-radius, radius)],
            Domain::Whole => vec![(f64::NEG_INFINITY, f64::INFINITY)],
            _ => {
                let (r0, r1) = self.radial_extent().unwrap();
                vec![(-r1, -r0), (r0, r1)]
            }
        }
    }

    pub fn contains(&self, x: f64, dim: usize) -> bool {
        match *self {
            Domain::Interval { a, b } => a <= x && x <= b,
            _ => {
                let (r0, r1) = self.radial_extent().unwrap();
                let r = if dim == 1 { x.abs() } else { x };
                r0 <= r && r < r1
            }
        }
    }
}
