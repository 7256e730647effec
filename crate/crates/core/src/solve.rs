//! Scalar root bracketing, bisection and golden-section search.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub expansions: usize,
}

/// Finds `lo < hi` with `f(lo) >= target >= f(hi)` for a non-increasing
/// `f`, starting from `start` and moving geometrically by `factor`.
pub fn bracket_decreasing(
    f: impl Fn(f64) -> f64,
    target: f64,
    start: f64,
    factor: f64,
    max_expansions: usize,
) -> Result<Bracket> {
    if !(start > 0.0 && start.is_finite() && factor > 1.0) {
        return Err(Error::invalid(format!(
            "bracket needs a positive start and factor > 1 (got {start}, {factor})"
        )));
    }
    let mut lo = start;
    let mut hi = start;
    let mut expansions = 0;
    let f0 = f(start);
    if f0 >= target {
        while f(hi) > target {
            if expansions == max_expansions || !hi.is_finite() {
                return Err(Error::Bracket(format!(
                    "value stays above {target} up to {hi:e} after {expansions} expansions"
                )));
            }
            lo = hi;
            hi *= factor;
            expansions += 1;
        }
    } else {
        while f(lo) < target {
            if expansions == max_expansions || lo == 0.0 {
                return Err(Error::Bracket(format!(
                    "value stays below {target} down to {lo:e} after {expansions} expansions"
                )));
            }
            hi = lo;
            lo /= factor;
            expansions += 1;
        }
    }
    Ok(Bracket { lo, hi, expansions })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BisectionOutcome {
    pub root: f64,
    pub lo: f64,
    pub hi: f64,
    pub iterations: usize,
}

/// Bisection on a non-increasing `f` for `f(x) = target`, stopping at
/// `hi - lo <= max(abs_width, rel_width * hi)` or `|f - target| <= f_tol`.
pub fn bisect_decreasing(
    f: impl Fn(f64) -> f64,
    target: f64,
    mut lo: f64,
    mut hi: f64,
    rel_width: f64,
    abs_width: f64,
    f_tol: f64,
) -> BisectionOutcome {
    let mut iterations = 0;
    loop {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= abs_width.max(rel_width * hi) || mid <= lo || mid >= hi || iterations >= 2000 {
            return BisectionOutcome {
                root: mid,
                lo,
                hi,
                iterations,
            };
        }
        iterations += 1;
        let v = f(mid);
        if (v - target).abs() <= f_tol {
            return BisectionOutcome {
                root: mid,
                lo: mid,
                hi: mid,
                iterations,
            };
        }
        if v > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the minimum of a unimodal `f` on `[a, b]`,
/// stopping once the bracket is narrower than `rel * (1 + |x|)`.
pub fn golden_section<E>(mut f: impl FnMut(f64) -> std::result::Result<f64, E>, a: f64, b: f64, rel: f64) -> std::result::Result<Minimum, E> {
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut iterations = 0;
    while b - a > rel * (1.0 + 0.5 * (a + b).abs()) && iterations < 400 {
        iterations += 1;
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    let (x, value) = if fc <= fd { (c, fc) } else { (d, fd) };
    Ok(Minimum { x, value, iterations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plastic_number() {
        // λ^-2 + λ^-3 = 1  ⇔  λ^3 = λ + 1
        let rho = |l: f64| l.powi(-2) + l.powi(-3);
        let br = bracket_decreasing(rho, 1.0, 0.1, 4.0, 200).unwrap();
        let out = bisect_decreasing(rho, 1.0, br.lo, br.hi, 1e-15, 0.0, 0.0);
        assert!((out.root - 1.324_717_957_244_746).abs() < 1e-12);
    }

    #[test]
    fn bracket_both_directions() {
        let f = |x: f64| 1.0 / x;
        let up = bracket_decreasing(f, 1e-3, 1.0, 4.0, 200).unwrap();
        assert!(f(up.lo) >= 1e-3 && f(up.hi) <= 1e-3);
        let down = bracket_decreasing(f, 1e3, 1.0, 4.0, 200).unwrap();
        assert!(f(down.lo) >= 1e3 && f(down.hi) <= 1e3);
        assert!(bracket_decreasing(|_| 2.0, 1.0, 1.0, 4.0, 10).is_err());
    }

    #[test]
    fn golden_finds_parabola_vertex() {
        let m = golden_section(|x| Ok::<_, ()>((x - 0.3).powi(2) + 1.0), -2.0, 5.0, 1e-10).unwrap();
        assert!((m.x - 0.3).abs() < 1e-6);
        assert!((m.value - 1.0).abs() < 1e-15);
    }
}
