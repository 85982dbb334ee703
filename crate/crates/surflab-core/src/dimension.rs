//! Dimension estimators: doubling constants, Assouad and Hausdorff slope
//! fits, the discrete Hausdorff measures of curves and regions, and the
//! coarea lower bound tying boundary lengths to two-dimensional content.
//!
//! All estimators work at the mesh scale of the discretization: the
//! one-dimensional measure of a curve is its length, the two-dimensional
//! content of a region is a net-covering sum, and every dimension value is
//! a log-log regression slope with its residual reported. None of these
//! pretend to measure the continuum limit; they quantify the discretization
//! actually in hand, and their claims are tested as inequalities with
//! declared tolerances.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fmath;
use crate::net::covering_number;
use crate::space::{Geodesic, Loop, MetricSurface, RegionSpec, Vertex};

/// Slack allowed when comparing the two dimension estimators (the ordering
/// of Hausdorff below Assouad is asserted only up to fit error).
pub const FIT_TOLERANCE: f64 = 0.3;

/// Federer's coarea constant for one-dimensional slices of two-dimensional
/// content: `w(2) / w(1)^2 = pi / 4`.
pub const COAREA_C1: f64 = core::f64::consts::PI / 4.0;

// === Report type ===========================================================

/// Bundled dimension summary for one space.
#[derive(Clone, Debug)]
pub struct DimensionReport {
    /// Assouad (packing-slope) estimate.
    pub assouad_d: f64,
    /// Hausdorff (net-count-slope) estimate.
    pub hausdorff_alpha: f64,
    /// Doubling constant over the tested scales.
    pub doubling_n: usize,
    /// Scales the estimates were computed at.
    pub scales_used: Vec<f64>,
    /// Max absolute regression residuals, one per fitted estimator.
    pub fit_residuals: Vec<f64>,
}

impl DimensionReport {
    /// Assembles a report, enforcing `doubling_n >= 1` and the estimator
    /// ordering `hausdorff_alpha <= assouad_d + FIT_TOLERANCE`.
    pub fn new(
        assouad_d: f64,
        hausdorff_alpha: f64,
        doubling_n: usize,
        scales_used: Vec<f64>,
        fit_residuals: Vec<f64>,
    ) -> Result<Self> {
        if doubling_n < 1 || hausdorff_alpha > assouad_d + FIT_TOLERANCE {
            return Err(Error::BadParameters);
        }
        Ok(DimensionReport { assouad_d, hausdorff_alpha, doubling_n, scales_used, fit_residuals })
    }
}

// === Doubling ==============================================================

/// Largest number of `R`-balls the greedy cover needs for any `2R`-ball
/// centered in the region, maximized over region points and scales.
///
/// Scaling the metric and the scales by a common factor leaves the result
/// unchanged whenever the scaled lengths are exactly representable.
///
/// # Errors
///
/// [`Error::ScalesTooLarge`] unless `2 * max(scales) <= region.radius`;
/// [`Error::BadParameters`] on empty or non-positive scales.
pub fn doubling_constant(
    space: &MetricSurface,
    region: &RegionSpec,
    scales: &[f64],
) -> Result<usize> {
    if scales.is_empty() || scales.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
        return Err(Error::BadParameters);
    }
    let max_scale = scales.iter().fold(0.0f64, |a, &b| a.max(b));
    if 2.0 * max_scale > region.radius {
        return Err(Error::ScalesTooLarge);
    }
    let points = region.vertices(space)?;
    let mut n = 1usize;
    for &p in &points {
        for &r in scales {
            let cover = covering_number(space, p, 2.0 * r, r)?;
            n = n.max(cover.greedy);
        }
    }
    Ok(n)
}

// === Assouad ===============================================================

/// Pooled log-log fit of packing counts against scale ratios.
#[derive(Clone, Copy, Debug)]
pub struct AssouadFit {
    /// Fitted exponent `D`.
    pub d: f64,
    /// Fitted leading constant `C` (exponential of the intercept).
    pub c: f64,
    /// Max absolute residual of the pooled fit.
    pub max_residual: f64,
}

/// Fits `|N_delta(B(p, r))| ~ C (r / delta)^D` over samples `(p, r, delta)`,
/// where `N_delta` is the greedy maximal `delta`-separated subset of the
/// ball in ascending vertex order.
///
/// # Errors
///
/// [`Error::InsufficientSamples`] with fewer than 8 samples or when the
/// ratios `delta / r` span fewer than two octaves;
/// [`Error::BadParameters`] when a sample has `delta >= r` or a
/// non-positive entry.
pub fn assouad_estimate(
    space: &MetricSurface,
    samples: &[(Vertex, f64, f64)],
) -> Result<AssouadFit> {
    for &(_, r, delta) in samples {
        if !(delta > 0.0) || !(r > delta) || !r.is_finite() {
            return Err(Error::BadParameters);
        }
    }
    if samples.len() < 8 {
        return Err(Error::InsufficientSamples);
    }
    let ratios: Vec<f64> = samples.iter().map(|&(_, r, d)| d / r).collect();
    let lo = ratios.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let hi = ratios.iter().fold(0.0f64, |a, &b| a.max(b));
    if hi / lo < 4.0 {
        return Err(Error::InsufficientSamples);
    }
    let mut xs = Vec::with_capacity(samples.len());
    let mut ys = Vec::with_capacity(samples.len());
    for &(p, r, delta) in samples {
        let ball = space.ball(p, r)?;
        let count = region_net(space, &ball, delta)?.len();
        xs.push(fmath::ln(r / delta));
        ys.push(fmath::ln(count as f64));
    }
    let (d, intercept, max_residual) = fmath::linear_fit(&xs, &ys);
    Ok(AssouadFit { d, c: fmath::exp(intercept), max_residual })
}

// === Hausdorff slope =======================================================

/// Slope fit of net cardinalities against `log(1/epsilon)`.
#[derive(Clone, Debug)]
pub struct HausdorffEstimate {
    /// Pooled slope over every `(seed, epsilon)` row.
    pub alpha: f64,
    /// Spread (max minus min) of the per-seed slopes.
    pub seed_spread: f64,
    /// Max absolute residual of the pooled fit.
    pub max_residual: f64,
    /// First-seed rows `(epsilon, restricted count)` behind the fit.
    pub rows: Vec<(f64, usize)>,
}

/// Estimates the Hausdorff exponent around `origin`: counts maximal-net
/// members inside `B(origin, radius)` per scale and seed (region-first
/// traversal), then fits `log(count)` against `log(1/epsilon)`.
///
/// # Errors
///
/// [`Error::InsufficientScales`] with fewer than 4 scales or under two
/// octaves of spread; [`Error::BadParameters`] without seeds.
pub fn hausdorff_dim_estimate(
    space: &MetricSurface,
    origin: Vertex,
    radius: f64,
    epsilons: &[f64],
    seeds: &[u64],
) -> Result<HausdorffEstimate> {
    if seeds.is_empty() {
        return Err(Error::BadParameters);
    }
    if epsilons.len() < 4 {
        return Err(Error::InsufficientScales);
    }
    let lo = epsilons.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let hi = epsilons.iter().fold(0.0f64, |a, &b| a.max(b));
    if !(lo > 0.0) || !hi.is_finite() || hi / lo < 4.0 {
        return Err(Error::InsufficientScales);
    }
    let region = RegionSpec::new(origin, radius).vertices(space)?;
    let profile = crate::net::net_cardinality_profile(space, epsilons, &region, seeds)?;

    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut per_seed: Vec<f64> = Vec::new();
    for &seed in seeds {
        let mut sx = Vec::new();
        let mut sy = Vec::new();
        for row in profile.iter().filter(|row| row.seed == seed) {
            let x = fmath::ln(1.0 / row.epsilon);
            let y = fmath::ln(row.cardinality.max(1) as f64);
            sx.push(x);
            sy.push(y);
            xs.push(x);
            ys.push(y);
        }
        per_seed.push(fmath::linear_fit(&sx, &sy).0);
    }
    let (alpha, _, max_residual) = fmath::linear_fit(&xs, &ys);
    let spread = per_seed.iter().fold(0.0f64, |a, &b| a.max(b))
        - per_seed.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let rows = profile
        .iter()
        .filter(|row| row.seed == seeds[0])
        .map(|row| (row.epsilon, row.cardinality))
        .collect();
    Ok(HausdorffEstimate { alpha, seed_spread: spread, max_residual, rows })
}

// === Curve and region measures =============================================

/// A rectifiable curve for one-dimensional measurement: closed or open.
#[derive(Clone, Copy, Debug)]
pub enum Curve<'a> {
    /// A loop; the closing edge counts.
    Closed(&'a Loop),
    /// A geodesic segment; a single-waypoint segment has length zero.
    Open(&'a Geodesic),
}

/// One-dimensional Hausdorff measure of a curve: its traversed length.
/// Re-validates every step against the space so a curve built elsewhere
/// surfaces [`Error::InvalidCurve`] instead of a silent wrong number.
pub fn hausdorff1_length(space: &MetricSurface, curve: Curve<'_>) -> Result<f64> {
    let (pts, closed) = match curve {
        Curve::Closed(lp) => (lp.waypoints(), true),
        Curve::Open(g) => (g.waypoints(), false),
    };
    if pts.is_empty() || pts.iter().any(|&v| v >= space.vertex_count()) {
        return Err(Error::InvalidCurve);
    }
    let mut total = 0.0f64;
    let steps = if closed { pts.len() } else { pts.len() - 1 };
    for i in 0..steps {
        let (u, v) = (pts[i], pts[(i + 1) % pts.len()]);
        total += space.edge_between(u, v).ok_or(Error::InvalidCurve)?;
    }
    Ok(total)
}

/// Greedy maximal `epsilon`-separated subset of `region` in ascending
/// vertex order, under the space's metric. When `epsilon` does not exceed
/// the shortest edge every vertex is separated and the region itself is
/// returned without any distance work.
fn region_net(space: &MetricSurface, region: &[Vertex], epsilon: f64) -> Result<Vec<Vertex>> {
    let mut sorted: Vec<Vertex> = region.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.is_empty() {
        return Err(Error::EmptyDomain);
    }
    if sorted.iter().any(|&v| v >= space.vertex_count()) {
        return Err(Error::UnknownVertex);
    }
    if epsilon <= space.min_separation() {
        return Ok(sorted);
    }
    let mut blocked = vec![false; space.vertex_count()];
    let mut members: Vec<Vertex> = Vec::new();
    for &v in &sorted {
        if blocked[v] {
            continue;
        }
        members.push(v);
        for (w, d) in space.bounded_ball(v, epsilon) {
            if d < epsilon {
                blocked[w] = true;
            }
        }
    }
    Ok(members)
}

/// Two-dimensional content estimate of a region: the covering sum
/// `|N_epsilon(region)| * (2 epsilon)^2` over the greedy maximal net.
///
/// # Errors
///
/// [`Error::EpsilonTooLarge`] unless `epsilon` is at most half the region's
/// inradius (distance from the deepest region vertex to the complement);
/// regions covering the whole space have infinite inradius.
pub fn hausdorff2_estimate(
    space: &MetricSurface,
    region: &[Vertex],
    epsilon: f64,
) -> Result<f64> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::BadEpsilon);
    }
    let mut sorted: Vec<Vertex> = region.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.iter().any(|&v| v >= space.vertex_count()) {
        return Err(Error::UnknownVertex);
    }
    let complement: Vec<Vertex> =
        (0..space.vertex_count()).filter(|v| sorted.binary_search(v).is_err()).collect();
    if !complement.is_empty() {
        let from_outside = space.multi_source_distances(&complement);
        let inradius = sorted.iter().map(|&v| from_outside[v]).fold(0.0f64, f64::max);
        if epsilon > inradius / 2.0 {
            return Err(Error::EpsilonTooLarge);
        }
    }
    let count = region_net(space, &sorted, epsilon)?.len();
    Ok(count as f64 * (2.0 * epsilon) * (2.0 * epsilon))
}

// === Coarea ================================================================

/// Outcome of the coarea comparison for one ball.
#[derive(Clone, Copy, Debug)]
pub struct CoareaCheck {
    /// Two-dimensional content of `B(p, R)` at the mesh scale.
    pub lhs: f64,
    /// `C1` times the right-endpoint sum of shell boundary lengths.
    pub rhs: f64,
    /// `lhs / rhs` (infinite when the sum is empty).
    pub ratio: f64,
    /// Whether `lhs >= rhs * (1 - tol)`.
    pub pass: bool,
}

/// Checks the coarea lower bound `H2(B(p, R)) >= C1 * sum_t H1(boundary of
/// B(p, t)) * step` over shells `t = step, 2 step, ..., R`, with
/// `C1 = pi/4`. The boundary of each shell is its exterior boundary loop;
/// the content side is evaluated at `epsilon = mesh`.
///
/// # Errors
///
/// Propagates [`Error::BallTouchesOuterFace`] from shells that reach the
/// outer face; [`Error::BadParameters`] when `step` is non-positive or
/// exceeds the mesh.
pub fn coarea_check(
    space: &MetricSurface,
    p: Vertex,
    big_r: f64,
    step: f64,
    tol: f64,
) -> Result<CoareaCheck> {
    if !(big_r >= 0.0) || !big_r.is_finite() {
        return Err(Error::NegativeRadius);
    }
    if !(step > 0.0) || step > space.mesh() || !(0.0..1.0).contains(&tol) {
        return Err(Error::BadParameters);
    }
    if big_r == 0.0 {
        let lhs = 4.0 * space.mesh() * space.mesh();
        return Ok(CoareaCheck { lhs, rhs: 0.0, ratio: f64::INFINITY, pass: true });
    }
    let ball = space.ball(p, big_r)?;
    let lhs = hausdorff2_estimate(space, &ball, space.mesh())?;
    let mut shell_sum = 0.0f64;
    let steps = fmath::floor(big_r / step + 1e-9) as usize;
    for i in 1..=steps {
        let t = step * i as f64;
        let shell = space.ball(p, t)?;
        let boundary = crate::embedding::exterior_boundary(space, &shell)?;
        shell_sum += hausdorff1_length(space, Curve::Closed(&boundary))? * step;
    }
    let rhs = COAREA_C1 * shell_sum;
    Ok(CoareaCheck { lhs, rhs, ratio: lhs / rhs, pass: lhs >= rhs * (1.0 - tol) })
}

// === Quadratic lower bound =================================================

/// Outcome of the quadratic content bound over a region.
#[derive(Clone, Copy, Debug)]
pub struct QuadraticLowerBound {
    /// Smallest observed `H2(B(p, r)) / r^2`.
    pub c: f64,
    /// Whether the constant is strictly positive.
    pub pass: bool,
    /// Region point attaining the minimum.
    pub worst_point: Vertex,
    /// Radius attaining the minimum.
    pub worst_radius: f64,
}

/// Measures `c = min H2(B(p, r)) / r^2` over region points and radii, the
/// discrete form of quadratic volume growth. Surfaces are expected to keep
/// `c` bounded away from zero; curves let it decay.
///
/// # Errors
///
/// [`Error::BadParameters`] when a radius is non-positive or exceeds the
/// region radius; content-side errors propagate.
pub fn quadratic_lower_bound_check(
    space: &MetricSurface,
    region: &RegionSpec,
    radii: &[f64],
) -> Result<QuadraticLowerBound> {
    if radii.is_empty()
        || radii.iter().any(|&r| !(r > 0.0) || !r.is_finite() || r > region.radius)
    {
        return Err(Error::BadParameters);
    }
    let points = region.vertices(space)?;
    let mut best: Option<QuadraticLowerBound> = None;
    for &p in &points {
        for &r in radii {
            let ball = space.ball(p, r)?;
            let h2 = hausdorff2_estimate(space, &ball, space.mesh())?;
            let c = h2 / (r * r);
            if best.as_ref().map_or(true, |b| c < b.c) {
                best = Some(QuadraticLowerBound { c, pass: c > 0.0, worst_point: p, worst_radius: r });
            }
        }
    }
    Ok(best.unwrap())
}
