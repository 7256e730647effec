//! Adaptive Gauss–Kronrod integration with exact splitting at known
//! breakpoints.
//!
//! Every integral is taken over a list of [`Segment`]s: finite intervals
//! whose endpoints are breakpoints of the integrand, plus at most one
//! semi-infinite tail on each side, mapped onto `(0, 1]`. Each segment is
//! covered by panels carrying a 21-point Kronrod rule with its embedded
//! 10-point Gauss rule; the difference of the two is the panel error.
//!
//! The panel partition is kept together with the integrand samples at its
//! nodes ([`Partition`]), so an integrand of the form `φ(g(x), p(x))` can be
//! re-weighed for many values of a parameter without new function calls.
//! The Luxemburg norm solver relies on this.

use crate::error::{Error, Result};
use crate::exec;
use crate::funcs::{unit_ball_volume, Ball, Domain, RealFunction};

/// Default absolute tolerance of one integral.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Relative floor below which no tolerance is enforced: round-off in the
/// Kronrod sum alone is of order `ε ∫|g|`.
pub const ROUNDOFF_REL: f64 = 100.0 * f64::EPSILON;

pub const DEFAULT_MAX_PANELS: usize = 50_000;

// Kronrod abscissae in decreasing order; the odd entries are the Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_548_123_957_520,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_146,
];

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error_bound: f64,
    pub subdivisions: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl QuadOptions {
    pub fn new(abs_tol: f64) -> Self {
        QuadOptions {
            abs_tol,
            rel_tol: ROUNDOFF_REL,
            max_panels: DEFAULT_MAX_PANELS,
        }
    }

    pub fn with_rel(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol.max(ROUNDOFF_REL);
        self
    }

    /// Accepted global error for an integrand with `∫|g| = resabs`.
    pub fn target(&self, resabs: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * resabs)
    }

    fn validate(&self) -> Result<()> {
        if !(self.abs_tol >= 0.0 && self.rel_tol >= 0.0) || self.abs_tol.is_nan() {
            return Err(Error::invalid(format!("tolerance {} must be non-negative", self.abs_tol)));
        }
        Ok(())
    }
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions::new(DEFAULT_TOL)
    }
}

/// One piece of the integration range, parametrized by `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Segment {
    /// `x = t` on `[a, b]`.
    Finite { a: f64, b: f64 },
    /// `x = s + (1 - t)/t`, `t ∈ (0, 1]`, covering `[s, ∞)`.
    Upper { s: f64 },
    /// `x = s - (1 - t)/t`, covering `(-∞, s]`.
    Lower { s: f64 },
}

impl Segment {
    fn t_range(&self) -> (f64, f64) {
        match *self {
            Segment::Finite { a, b } => (a, b),
            _ => (0.0, 1.0),
        }
    }

    #[inline]
    fn map(&self, t: f64) -> (f64, f64) {
        match *self {
            Segment::Finite { .. } => (t, 1.0),
            Segment::Upper { s } => (s + (1.0 - t) / t, 1.0 / (t * t)),
            Segment::Lower { s } => (s - (1.0 - t) / t, 1.0 / (t * t)),
        }
    }
}

/// Splits closed pieces of the line at every breakpoint strictly inside;
/// infinite ends become tail segments.
pub fn segments_for(pieces: &[(f64, f64)], breakpoints: &[f64]) -> Vec<Segment> {
    let mut out = Vec::new();
    for &(a, b) in pieces {
        if !(a < b) {
            continue;
        }
        let mut cuts: Vec<f64> = breakpoints
            .iter()
            .copied()
            .filter(|&s| s.is_finite() && s > a && s < b)
            .collect();
        if a.is_finite() {
            cuts.push(a);
        }
        if b.is_finite() {
            cuts.push(b);
        }
        if cuts.is_empty() {
            cuts.push(0.0);
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        if a == f64::NEG_INFINITY {
            out.push(Segment::Lower { s: cuts[0] });
        }
        out.extend(cuts.windows(2).map(|w| Segment::Finite { a: w[0], b: w[1] }));
        if b == f64::INFINITY {
            out.push(Segment::Upper {
                s: *cuts.last().unwrap(),
            });
        }
    }
    out
}

#[derive(Clone, Debug)]
struct Node<S> {
    x: f64,
    wk: f64,
    wg: f64,
    sample: S,
}

#[derive(Clone, Debug)]
struct Panel<S> {
    seg: usize,
    lo: f64,
    hi: f64,
    nodes: Vec<Node<S>>,
}

/// Totals for one integrand over a partition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub resabs: f64,
}

/// A panel partition together with cached samples at every node.
#[derive(Clone, Debug)]
pub struct Partition<S> {
    segments: Vec<Segment>,
    panels: Vec<Panel<S>>,
    radial_dim: usize,
    subdivisions: usize,
}

fn build_panel<S, F>(segments: &[Segment], radial_dim: usize, seg: usize, lo: f64, hi: f64, sample: &F) -> Result<Panel<S>>
where
    F: Fn(f64) -> Result<S>,
{
    let segment = segments[seg];
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let radial = if radial_dim >= 2 {
        Some((radial_dim as f64 * unit_ball_volume(radial_dim), radial_dim as i32 - 1))
    } else {
        None
    };
    let mut nodes = Vec::with_capacity(21);
    let mut push = |t: f64, wk: f64, wg: f64| -> Result<()> {
        let (x, jac) = segment.map(t);
        let mut w = half * jac;
        if let Some((c, m)) = radial {
            w *= c * x.powi(m);
        }
        nodes.push(Node {
            x,
            wk: wk * w,
            wg: wg * w,
            sample: sample(x)?,
        });
        Ok(())
    };
    push(center, WGK[10], 0.0)?;
    for j in 0..10 {
        let wg = if j % 2 == 1 { WG[j / 2] } else { 0.0 };
        let dx = half * XGK[j];
        push(center - dx, WGK[j], wg)?;
        push(center + dx, WGK[j], wg)?;
    }
    Ok(Panel { seg, lo, hi, nodes })
}

fn panel_estimate<S>(p: &Panel<S>, phi: &impl Fn(&S) -> f64) -> (f64, f64, f64) {
    let mut k = 0.0;
    let mut g = 0.0;
    let mut abs = 0.0;
    for n in &p.nodes {
        let v = phi(&n.sample);
        k += n.wk * v;
        g += n.wg * v;
        abs += (n.wk * v).abs();
    }
    let err = (k - g).abs().max(50.0 * f64::EPSILON * abs);
    (k, err, abs)
}

impl<S: Send + Sync + Clone> Partition<S> {
    /// One panel per segment. `radial_dim >= 2` multiplies every weight by
    /// the surface factor `n v_n x^{n-1}`.
    pub fn build<F>(segments: Vec<Segment>, radial_dim: usize, sample: &F) -> Result<Self>
    where
        F: Fn(f64) -> Result<S> + Sync,
    {
        let jobs: Vec<(usize, f64, f64)> = segments
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let (lo, hi) = s.t_range();
                (i, lo, hi)
            })
            .collect();
        let panels = exec::try_map(&jobs, |&(i, lo, hi)| build_panel(&segments, radial_dim, i, lo, hi, sample))?;
        Ok(Partition {
            segments,
            panels,
            radial_dim,
            subdivisions: 0,
        })
    }

    pub fn subdivisions(&self) -> usize {
        self.subdivisions
    }

    pub fn panel_count(&self) -> usize {
        self.panels.len()
    }

    /// Kronrod sum of `φ`, in a fixed order.
    pub fn sum(&self, phi: impl Fn(&S) -> f64) -> f64 {
        let mut acc = 0.0;
        for p in &self.panels {
            for n in &p.nodes {
                acc += n.wk * phi(&n.sample);
            }
        }
        acc
    }

    pub fn estimate(&self, phi: impl Fn(&S) -> f64) -> Estimate {
        let mut e = Estimate {
            value: 0.0,
            error: 0.0,
            resabs: 0.0,
        };
        for p in &self.panels {
            let (k, err, abs) = panel_estimate(p, &phi);
            e.value += k;
            e.error += err;
            e.resabs += abs;
        }
        e
    }

    pub fn panel_errors(&self, phi: impl Fn(&S) -> f64) -> Vec<f64> {
        self.panels.iter().map(|p| panel_estimate(p, &phi).1).collect()
    }

    /// Visits every node as `(x, kronrod weight, sample)`.
    pub fn for_each_node(&self, mut f: impl FnMut(f64, f64, &S)) {
        for p in &self.panels {
            for n in &p.nodes {
                f(n.x, n.wk, &n.sample);
            }
        }
    }

    /// Bisects the panels carrying the largest errors until half of the
    /// total error is covered (at most 512 panels per round). The choice
    /// depends only on `errors`, never on a tolerance, so refinement paths
    /// are nested. Returns `false` when no panel can be split further.
    pub fn refine<F>(&mut self, errors: &[f64], sample: &F) -> Result<bool>
    where
        F: Fn(f64) -> Result<S> + Sync,
    {
        let total: f64 = errors.iter().sum();
        let mut order: Vec<usize> = (0..self.panels.len()).collect();
        order.sort_by(|&i, &j| errors[j].total_cmp(&errors[i]).then(i.cmp(&j)));
        let mut chosen = Vec::new();
        let mut covered = 0.0;
        for i in order {
            if covered >= 0.5 * total || chosen.len() >= 512 {
                break;
            }
            let p = &self.panels[i];
            let mid = 0.5 * (p.lo + p.hi);
            if mid <= p.lo || mid >= p.hi || (p.hi - p.lo) <= 8.0 * f64::EPSILON * mid.abs() {
                continue;
            }
            covered += errors[i];
            chosen.push(i);
        }
        if chosen.is_empty() {
            return Ok(false);
        }
        chosen.sort_unstable();
        let jobs: Vec<(usize, f64, f64)> = chosen
            .iter()
            .flat_map(|&i| {
                let p = &self.panels[i];
                let mid = 0.5 * (p.lo + p.hi);
                [(p.seg, p.lo, mid), (p.seg, mid, p.hi)]
            })
            .collect();
        let segments = &self.segments;
        let radial_dim = self.radial_dim;
        let mut children = exec::try_map(&jobs, |&(s, lo, hi)| build_panel(segments, radial_dim, s, lo, hi, sample))?
            .into_iter();
        // Replace each parent in place and append its sibling, keeping the
        // panel order a deterministic function of the refinement history.
        for &i in &chosen {
            let left = children.next().unwrap();
            let right = children.next().unwrap();
            self.panels[i] = left;
            self.panels.push(right);
        }
        self.subdivisions += chosen.len();
        Ok(true)
    }

    /// Refines for the integrand `φ` until its global error is within
    /// `opts`. The reported result is the best seen along the way, which
    /// makes the error bound monotone in the tolerance.
    pub fn converge<F>(&mut self, sample: &F, phi: impl Fn(&S) -> f64 + Copy, opts: &QuadOptions) -> Result<QuadResult>
    where
        F: Fn(f64) -> Result<S> + Sync,
    {
        opts.validate()?;
        let mut best: Option<QuadResult> = None;
        loop {
            let est = self.estimate(phi);
            if !est.value.is_finite() || !est.error.is_finite() {
                return Err(Error::NotInSpace(format!(
                    "integrand is not integrable (estimate {})",
                    est.value
                )));
            }
            let cur = QuadResult {
                value: est.value,
                abs_error_bound: est.error,
                subdivisions: self.subdivisions,
            };
            if best.is_none_or(|b| cur.abs_error_bound <= b.abs_error_bound) {
                best = Some(cur);
            }
            let best_now = best.unwrap();
            if best_now.abs_error_bound <= opts.target(est.resabs) {
                return Ok(QuadResult {
                    subdivisions: self.subdivisions,
                    ..best_now
                });
            }
            if self.panels.len() >= opts.max_panels {
                return Err(non_convergence(best_now, self.subdivisions));
            }
            let errors = self.panel_errors(phi);
            if !self.refine(&errors, sample)? {
                return Err(non_convergence(best_now, self.subdivisions));
            }
        }
    }
}

fn non_convergence(best: QuadResult, subdivisions: usize) -> Error {
    Error::NonConvergence {
        estimate: best.value,
        error_bound: best.abs_error_bound,
        subdivisions,
    }
}

/// Adaptive integral of a fallible integrand over `segments`.
pub fn integrate_segments<G>(g: &G, segments: Vec<Segment>, radial_dim: usize, opts: &QuadOptions) -> Result<QuadResult>
where
    G: Fn(f64) -> Result<f64> + Sync,
{
    opts.validate()?;
    if segments.is_empty() {
        return Ok(QuadResult {
            value: 0.0,
            abs_error_bound: 0.0,
            subdivisions: 0,
        });
    }
    let sample = |x: f64| -> Result<f64> {
        let v = g(x)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NotInSpace(format!("integrand is not finite at {x}")))
        }
    };
    let mut part = Partition::build(segments, radial_dim, &sample)?;
    part.converge(&sample, |v: &f64| *v, opts)
}

/// `∫_a^b g`, pre-split at every breakpoint inside `(a, b)`. Infinite
/// limits are allowed.
pub fn integrate_interval<G>(g: G, a: f64, b: f64, breakpoints: &[f64], tol: f64) -> Result<QuadResult>
where
    G: Fn(f64) -> f64 + Sync,
{
    if a.is_nan() || b.is_nan() || a > b {
        return Err(Error::invalid(format!("integration limits [{a}, {b}] are malformed")));
    }
    integrate_segments(&|x| Ok(g(x)), segments_for(&[(a, b)], breakpoints), 1, &QuadOptions::new(tol))
}

/// Closed pieces of `domain ∩ {inner <= |x| <= support}` in the coordinate
/// the integrand is evaluated at: the line for `dim == 1`, the radius
/// otherwise.
pub fn domain_pieces(domain: &Domain, dim: usize, support: f64, inner: f64) -> Vec<(f64, f64)> {
    if dim >= 2 {
        let (r0, r1) = domain.radial_extent().expect("radial domain");
        let (r0, r1) = (r0.max(inner), r1.min(support));
        return if r0 < r1 { vec![(r0, r1)] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for (a, b) in domain.line_pieces() {
        let (a, b) = (a.max(-support), b.min(support));
        if a >= b {
            continue;
        }
        if inner > 0.0 {
            if a < -inner {
                out.push((a, b.min(-inner)));
            }
            if b > inner {
                out.push((a.max(inner), b));
            }
        } else {
            out.push((a, b));
        }
    }
    out
}

/// Breakpoints of `g` in the evaluation coordinate for dimension `dim`.
pub fn breakpoints_in(g: &dyn RealFunction, dim: usize, extra: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = g.breakpoints().into_iter().chain(extra.iter().copied()).collect();
    if dim >= 2 {
        for s in &mut v {
            *s = s.abs();
        }
    }
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn check_radial(g: &dyn RealFunction, dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    if dim >= 2 && g.parity() != crate::funcs::Parity::Even {
        return Err(Error::invalid(format!(
            "integrand must be radial in dimension {dim}"
        )));
    }
    Ok(())
}

/// `∫_domain g` in dimension `dim` (radial when `dim >= 2`).
pub fn integrate_domain(g: &dyn RealFunction, domain: &Domain, dim: usize, opts: &QuadOptions) -> Result<QuadResult> {
    domain.validate(dim)?;
    check_radial(g, dim)?;
    let pieces = domain_pieces(domain, dim, g.support_radius(), g.inner_radius());
    let segments = segments_for(&pieces, &breakpoints_in(g, dim, &[0.0]));
    integrate_segments(&|x| g.value(x), segments, dim, opts)
}

/// `∫_{B} g`. For `dim >= 2` this is `n v_n ∫_0^r g(ρ) ρ^{n-1} dρ`.
pub fn integrate_ball(g: &dyn RealFunction, ball: &Ball, tol: f64) -> Result<QuadResult> {
    integrate_domain(g, &ball.domain(), ball.dim, &QuadOptions::new(tol))
}

/// `∫_{C_k} g` over the dyadic ring `2^{k-1} <= |x| < 2^k`.
pub fn integrate_annulus(g: &dyn RealFunction, k: i32, dim: usize, tol: f64) -> Result<QuadResult> {
    integrate_domain(g, &Domain::Ring { k }, dim, &QuadOptions::new(tol))
}
