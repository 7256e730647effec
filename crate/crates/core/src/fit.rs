//! Least-squares fits and the bounded/divergent trend verdict.

use serde::{Deserialize, Serialize};

/// Slope threshold separating bounded from growing sequences on log-log axes.
pub const SLOPE_THRESHOLD: f64 = 0.05;
/// Minimum coefficient of determination for a divergence verdict.
pub const MIN_R2: f64 = 0.9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Ordinary least squares of `y` on `x`. Needs two distinct abscissae.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    let n = xs.len().min(ys.len());
    if n < 2 {
        return None;
    }
    let mx = xs[..n].iter().sum::<f64>() / n as f64;
    let my = ys[..n].iter().sum::<f64>() / n as f64;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let dx = xs[i] - mx;
        let dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Some(LinearFit {
        slope,
        intercept: my - slope * mx,
        r2,
    })
}

/// Slope of `log y` against `log x`; pairs with non-positive entries are dropped.
pub fn loglog_fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    let (lx, ly): (Vec<f64>, Vec<f64>) = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .unzip();
    linear_fit(&lx, &ly)
}

/// Least-squares slope of `y = m x` (no intercept).
pub fn slope_through_origin(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(xs.iter().zip(ys).map(|(x, y)| x * y).sum::<f64>() / sxx)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Bounded,
    Divergent,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trend {
    pub slope: f64,
    pub r2: f64,
    pub verdict: Verdict,
}

/// Log-log trend of `values` over the last decade of `scales`
/// (`scale >= max / 10`). A sequence that is identically zero there is
/// bounded.
pub fn last_decade_trend(scales: &[f64], values: &[f64]) -> Trend {
    let top = scales.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (xs, ys): (Vec<f64>, Vec<f64>) = scales
        .iter()
        .zip(values)
        .filter(|(s, _)| **s >= top / 10.0)
        .map(|(s, v)| (*s, *v))
        .unzip();
    if ys.iter().any(|v| v.is_infinite()) {
        return Trend {
            slope: f64::INFINITY,
            r2: 1.0,
            verdict: Verdict::Divergent,
        };
    }
    if ys.iter().all(|v| *v == 0.0) {
        return Trend {
            slope: 0.0,
            r2: 1.0,
            verdict: Verdict::Bounded,
        };
    }
    match loglog_fit(&xs, &ys) {
        Some(fit) => Trend {
            slope: fit.slope,
            r2: fit.r2,
            verdict: if fit.slope < SLOPE_THRESHOLD {
                Verdict::Bounded
            } else if fit.r2 > MIN_R2 {
                Verdict::Divergent
            } else {
                Verdict::Inconclusive
            },
        },
        None => Trend {
            slope: f64::NAN,
            r2: f64::NAN,
            verdict: Verdict::Inconclusive,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let xs: Vec<f64> = (0..12).map(|k| 2f64.powi(k)).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(0.75)).collect();
        let f = loglog_fit(&xs, &ys).unwrap();
        assert!((f.slope - 0.75).abs() < 1e-12);
        assert!((f.r2 - 1.0).abs() < 1e-12);
        assert_eq!(last_decade_trend(&xs, &ys).verdict, Verdict::Divergent);
    }

    #[test]
    fn flat_is_bounded() {
        let xs: Vec<f64> = (0..12).map(|k| 2f64.powi(k)).collect();
        let ys = vec![1.0; 12];
        let t = last_decade_trend(&xs, &ys);
        assert_eq!(t.verdict, Verdict::Bounded);
        assert_eq!(t.slope, 0.0);
        assert_eq!(last_decade_trend(&xs, &[0.0; 12]).verdict, Verdict::Bounded);
    }

    #[test]
    fn origin_slope() {
        assert_eq!(slope_through_origin(&[1.0, 2.0], &[0.5, 1.0]), Some(0.5));
        assert_eq!(slope_through_origin(&[0.0], &[1.0]), None);
    }
}
