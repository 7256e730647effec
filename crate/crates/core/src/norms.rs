//! Modular, Luxemburg norm, characteristic-function norms and the duality
//! bracket.
//!
//! The Luxemburg norm is found on a cached sample partition: `(g(x), p(x))`
//! is stored at every quadrature node, so `λ ↦ ρ(g/λ)` is an exact weighted
//! sum that is continuous and strictly decreasing in `λ` and can be bisected
//! without new function calls. After each solve the panel errors are
//! re-estimated at the current `λ`, the worst panels are refined, and the
//! solve repeats until the modular error at the root is within tolerance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::funcs::{Domain, FarField, Parity, RealFunction};
use crate::quadrature::{self, Partition, QuadOptions, QuadResult, DEFAULT_MAX_PANELS};
use crate::solve;

/// Default accuracy of the modular at the root.
pub const DEFAULT_NORM_TOL: f64 = 1e-10;
/// Smallest bracket start; also the absolute width floor of the bisection.
pub const TINY: f64 = 1e-300;
const MAX_EXPANSIONS: usize = 200;
const MAX_ROUNDS: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormResult {
    pub value: f64,
    pub abs_error_bound: f64,
    pub bisection_iters: usize,
    pub bracket: (f64, f64),
}

impl NormResult {
    pub fn zero() -> Self {
        NormResult {
            value: 0.0,
            abs_error_bound: 0.0,
            bisection_iters: 0,
            bracket: (0.0, 0.0),
        }
    }

    fn exact(value: f64) -> Self {
        NormResult {
            value,
            abs_error_bound: 0.0,
            bisection_iters: 0,
            bracket: (value, value),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormOptions {
    /// Modular accuracy near `ρ = 1`.
    pub tol: f64,
    /// Relative bracket width at which bisection stops.
    pub rel_width: f64,
    pub max_panels: usize,
}

impl NormOptions {
    pub fn new(tol: f64) -> Self {
        NormOptions {
            tol,
            rel_width: 1e-12,
            max_panels: DEFAULT_MAX_PANELS,
        }
    }
}

impl Default for NormOptions {
    fn default() -> Self {
        NormOptions::new(DEFAULT_NORM_TOL)
    }
}

type Sample = (f64, f64);

#[inline]
fn scaled_power(s: &Sample, inv_lambda: f64) -> f64 {
    if s.0 == 0.0 {
        0.0
    } else {
        (s.0.abs() * inv_lambda).powf(s.1)
    }
}

/// Integration pieces for `f` on `domain` and whether they reach the origin
/// or infinity.
struct Region {
    segments: Vec<quadrature::Segment>,
    measure: f64,
    touches_origin: bool,
    unbounded: bool,
}

fn region(f: &dyn RealFunction, e: &Exponent, domain: &Domain) -> Result<Region> {
    let dim = e.dimension();
    domain.validate(dim)?;
    if dim >= 2 && f.parity() != Parity::Even {
        return Err(Error::invalid(format!("function must be radial in dimension {dim}")));
    }
    let pieces = quadrature::domain_pieces(domain, dim, f.support_radius(), f.inner_radius());
    let mut bps = quadrature::breakpoints_in(f, dim, &[0.0]);
    bps.extend(e.breakpoints().into_iter().map(|b| if dim >= 2 { b.abs() } else { b }));
    let measure = pieces
        .iter()
        .map(|&(a, b)| {
            if dim >= 2 {
                Domain::Annulus { inner: a, outer: b }.measure(dim)
            } else {
                b - a
            }
        })
        .sum();
    let touches_origin = pieces.iter().any(|&(a, b)| a <= 0.0 && 0.0 <= b);
    let unbounded = pieces.iter().any(|&(a, b)| a.is_infinite() || b.is_infinite());
    Ok(Region {
        segments: quadrature::segments_for(&pieces, &bps),
        measure,
        touches_origin,
        unbounded,
    })
}

/// Structural membership test: decay at infinity and the singularity at
/// the origin must be integrable against the exponent bounds.
fn check_membership(f: &dyn RealFunction, e: &Exponent, reg: &Region) -> Result<()> {
    let n = e.dimension() as f64;
    if reg.unbounded {
        match f.far_field() {
            FarField::Compact { .. } => {}
            FarField::Power { exponent, coeff, .. } => {
                if coeff > 0.0 && exponent * e.p_minus() >= -n {
                    return Err(Error::NotInSpace(format!(
                        "|f| decays like |x|^{exponent}, too slowly for p_- = {}",
                        e.p_minus()
                    )));
                }
            }
            FarField::Unknown => {
                return Err(Error::NotInSpace(
                    "decay at infinity cannot be certified".into(),
                ))
            }
        }
    }
    if reg.touches_origin {
        if let Some(a) = f.origin_power() {
            let p = e.value_at_origin();
            if a * p <= -n {
                return Err(Error::NotInSpace(format!(
                    "|f| blows up like |x|^{a} at the origin, not integrable for p(0) = {p}"
                )));
            }
        }
    }
    Ok(())
}

fn sampler<'a>(f: &'a dyn RealFunction, e: &'a Exponent) -> impl Fn(f64) -> Result<Sample> + Sync + 'a {
    move |x| {
        let g = f.value(x)?;
        if !g.is_finite() {
            return Err(Error::NotInSpace(format!("function value {g} at {x}")));
        }
        Ok((g, e.value(x)))
    }
}

/// `ρ(f) = ∫_domain |f(x)|^{p(x)} dx`.
pub fn modular(f: &dyn RealFunction, e: &Exponent, domain: &Domain, tol: f64) -> Result<QuadResult> {
    modular_scaled(f, e, domain, 1.0, tol)
}

/// `ρ(f/λ)`.
pub fn modular_scaled(f: &dyn RealFunction, e: &Exponent, domain: &Domain, lambda: f64, tol: f64) -> Result<QuadResult> {
    if !(lambda > 0.0) {
        return Err(Error::invalid(format!("scale {lambda} must be positive")));
    }
    let reg = region(f, e, domain)?;
    if reg.segments.is_empty() {
        return Ok(QuadResult {
            value: 0.0,
            abs_error_bound: 0.0,
            subdivisions: 0,
        });
    }
    check_membership(f, e, &reg)?;
    let sample = sampler(f, e);
    let mut part = Partition::build(reg.segments, e.dimension(), &sample)?;
    let inv = 1.0 / lambda;
    part.converge(&sample, move |s: &Sample| scaled_power(s, inv), &QuadOptions::new(tol))
}

/// `‖f‖_{L^{p(·)}(domain)} = inf{λ > 0 : ρ(f/λ) <= 1}`.
pub fn luxemburg_norm(f: &dyn RealFunction, e: &Exponent, domain: &Domain, tol: f64) -> Result<NormResult> {
    luxemburg_norm_with(f, e, domain, &NormOptions::new(tol))
}

pub fn luxemburg_norm_with(f: &dyn RealFunction, e: &Exponent, domain: &Domain, opts: &NormOptions) -> Result<NormResult> {
    if !e.is_in_p_with_margin(0.0) {
        return Err(Error::invalid("Luxemburg norm needs p_- >= 1 and p_+ finite"));
    }
    let reg = region(f, e, domain)?;
    if reg.segments.is_empty() {
        return Ok(NormResult::zero());
    }
    check_membership(f, e, &reg)?;
    let sample = sampler(f, e);
    let mut part = Partition::build(reg.segments, e.dimension(), &sample)?;
    let qopts = QuadOptions {
        max_panels: opts.max_panels,
        ..QuadOptions::new(opts.tol)
    };
    let p_minus = e.p_minus();
    let mut iters = 0;
    for _ in 0..MAX_ROUNDS {
        let mut sup = 0.0f64;
        part.for_each_node(|_, _, s| sup = sup.max(s.0.abs()));
        if sup == 0.0 {
            return Ok(NormResult::zero());
        }
        let rho = |lambda: f64| part.sum(|s| scaled_power(s, 1.0 / lambda));
        let meas = if reg.measure.is_finite() && reg.measure > 0.0 {
            reg.measure
        } else {
            1.0
        };
        let start = (sup * meas.powf(1.0 / e.p_plus())).max(TINY);
        let br = solve::bracket_decreasing(rho, 1.0, start, 4.0, MAX_EXPANSIONS)?;
        let out = solve::bisect_decreasing(rho, 1.0, br.lo, br.hi, opts.rel_width, TINY, 0.0);
        iters += out.iterations;
        let lambda = out.root;
        let inv = 1.0 / lambda;
        let phi = move |s: &Sample| scaled_power(s, inv);
        let est = part.estimate(phi);
        let half_width = 0.5 * (out.hi - out.lo);
        if est.error <= qopts.target(est.resabs) {
            return Ok(NormResult {
                value: lambda,
                abs_error_bound: half_width + lambda * est.error / p_minus,
                bisection_iters: iters,
                bracket: (out.lo, out.hi),
            });
        }
        if part.panel_count() >= qopts.max_panels || !part.refine(&part.panel_errors(phi), &sample)? {
            return Err(Error::NonConvergence {
                estimate: lambda,
                error_bound: half_width + lambda * est.error / p_minus,
                subdivisions: part.subdivisions(),
            });
        }
    }
    Err(Error::NonConvergence {
        estimate: f64::NAN,
        error_bound: f64::INFINITY,
        subdivisions: part.subdivisions(),
    })
}

/// `‖χ_D‖_{L^{p(·)}}`, closed form `|D|^{1/p}` when `p` is constant on `D`.
pub fn chi_norm(domain: &Domain, e: &Exponent) -> Result<NormResult> {
    let dim = e.dimension();
    domain.validate(dim)?;
    if matches!(domain, Domain::Whole) {
        return Err(Error::NotInSpace("χ of the whole space has infinite measure".into()));
    }
    let pieces: Vec<(f64, f64)> = if dim >= 2 {
        let (r0, r1) = domain.radial_extent().unwrap();
        vec![(r0, r1)]
    } else {
        domain.line_pieces()
    };
    let ps: Vec<Option<f64>> = pieces.iter().map(|&(a, b)| e.constant_on(a, b)).collect();
    if let Some(Some(p)) = ps.first() {
        if ps.iter().all(|q| *q == Some(*p)) {
            return Ok(NormResult::exact(domain.measure(dim).powf(1.0 / p)));
        }
    }
    luxemburg_norm(&Indicator(*domain, dim), e, domain, DEFAULT_NORM_TOL)
}

/// `χ_D` as an integrand.
struct Indicator(Domain, usize);

impl RealFunction for Indicator {
    fn value(&self, x: f64) -> Result<f64> {
        Ok(if self.0.contains(x, self.1) { 1.0 } else { 0.0 })
    }
    fn breakpoints(&self) -> Vec<f64> {
        match self.0 {
            Domain::Interval { a, b } => vec![a, b],
            _ => {
                let (r0, r1) = self.0.radial_extent().unwrap();
                vec![-r1, -r0, r0, r1]
            }
        }
    }
    fn support_radius(&self) -> f64 {
        match self.0 {
            Domain::Interval { a, b } => a.abs().max(b.abs()),
            _ => self.0.radial_extent().unwrap().1,
        }
    }
    fn parity(&self) -> Parity {
        match self.0 {
            Domain::Interval { a, b } if a != -b => Parity::Neither,
            _ => Parity::Even,
        }
    }
}

/// `sign(f) |f/‖f‖|^{p(·)-1}`: attains equality in Hölder's inequality and
/// has unit modular, hence unit norm, in `L^{p'(·)}`.
pub struct Extremizer<'a> {
    f: &'a dyn RealFunction,
    e: &'a Exponent,
    norm: f64,
}

impl<'a> Extremizer<'a> {
    pub fn new(f: &'a dyn RealFunction, e: &'a Exponent, norm: f64) -> Self {
        Extremizer { f, e, norm }
    }
}

impl RealFunction for Extremizer<'_> {
    fn value(&self, x: f64) -> Result<f64> {
        let v = self.f.value(x)?;
        if v == 0.0 {
            return Ok(0.0);
        }
        Ok(v.signum() * (v.abs() / self.norm).powf(self.e.value(x) - 1.0))
    }
    fn breakpoints(&self) -> Vec<f64> {
        let mut v = self.f.breakpoints();
        v.extend(self.e.breakpoints());
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }
    fn support_radius(&self) -> f64 {
        self.f.support_radius()
    }
    fn inner_radius(&self) -> f64 {
        self.f.inner_radius()
    }
    fn parity(&self) -> Parity {
        if self.e.dimension() >= 2 {
            self.f.parity()
        } else {
            Parity::Neither
        }
    }
    fn far_field(&self) -> FarField {
        match self.f.far_field() {
            FarField::Compact { radius } => FarField::Compact { radius },
            _ => FarField::Unknown,
        }
    }
    fn origin_power(&self) -> Option<f64> {
        self.f.origin_power().map(|a| a * (self.e.value_at_origin() - 1.0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualBracket {
    pub lower: f64,
    pub upper: f64,
    /// `‖f‖_{L^{p(·)}}`.
    pub norm: f64,
    pub duality_constant: f64,
}

/// `∫ f g` over the whole space.
pub fn pairing(f: &dyn RealFunction, g: &dyn RealFunction, dim: usize, tol: f64) -> Result<QuadResult> {
    let support = f.support_radius().min(g.support_radius());
    let inner = f.inner_radius().max(g.inner_radius());
    let pieces = quadrature::domain_pieces(&Domain::Whole, dim, support, inner);
    let mut bps = quadrature::breakpoints_in(f, dim, &[0.0]);
    bps.extend(quadrature::breakpoints_in(g, dim, &[]));
    let segments = quadrature::segments_for(&pieces, &bps);
    quadrature::integrate_segments(&|x| Ok(f.value(x)? * g.value(x)?), segments, dim, &QuadOptions::new(tol))
}

/// Bracket of the associate norm `sup{|∫ f g| : ‖g‖_{p'(·)} <= 1}`:
/// `lower` is the best normalized pairing over `dual_bank`, `upper` is
/// `r_p ‖f‖`.
pub fn dual_pairing_sup(f: &dyn RealFunction, e: &Exponent, dual_bank: &[&dyn RealFunction], tol: f64) -> Result<DualBracket> {
    if dual_bank.is_empty() {
        return Err(Error::invalid("dual bank is empty"));
    }
    let rp = e.duality_constant();
    let norm = luxemburg_norm(f, e, &Domain::Whole, tol)?.value;
    if norm == 0.0 {
        return Ok(DualBracket {
            lower: 0.0,
            upper: 0.0,
            norm,
            duality_constant: rp,
        });
    }
    let conj = e.conjugate()?;
    let mut lower = 0.0f64;
    for g in dual_bank {
        let ng = luxemburg_norm(*g, &conj, &Domain::Whole, tol)?.value;
        if ng == 0.0 {
            continue;
        }
        let pair = pairing(f, *g, e.dimension(), tol * ng.max(1.0))?;
        lower = lower.max(pair.value.abs() / ng);
    }
    Ok(DualBracket {
        lower,
        upper: rp * norm,
        norm,
        duality_constant: rp,
    })
}
