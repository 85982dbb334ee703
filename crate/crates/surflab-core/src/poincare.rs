//! Poincaré-type inequality diagnostics built from separating curves.
//!
//! A geodesic that splits the space into exactly two sides induces a family
//! of test functions at every width `epsilon`: the signed distance to the
//! curve, a ramp `u` that climbs linearly from 0 on one side to 1 on the
//! other across a band of width `2 * epsilon`, and a bump `rho` equal to
//! `1 / (2 * epsilon)` on the band and zero elsewhere. The bump is an upper
//! gradient for the ramp as long as the band is wider than the mesh, which
//! [`upper_gradient_check`] verifies edge by edge with the trapezoid rule.
//!
//! [`poincare_ratio`] measures how tightly the averaged oscillation of `u`
//! over a ball is controlled by the averaged `p`-th power of `rho` over an
//! enlarged ball. As `epsilon` shrinks, the ramp approaches the indicator
//! of the positive side and the oscillation term approaches the closed form
//! `2 * m(A0) * m(A1) / m(B)^2` returned by [`indicator_limit`], while the
//! gradient term scales like a power of `epsilon` whose exponent reflects
//! the growth exponent of the measure near the curve. A measure of local
//! dimension `alpha` can only satisfy the inequality family when `alpha`
//! is at most `1 + p`; [`dimension_bound_diagnostic`] fits that scaling
//! exponent across widths and reports whether the data is consistent with
//! the bound or signals a violation.
//!
//! Side assignment is deterministic: at each interior waypoint the rotation
//! system lists the neighbors counterclockwise, and the neighbors strictly
//! between the outgoing and incoming darts lie to the left of travel. The
//! left side becomes the positive one, so the pack depends only on the
//! curve and its orientation, never on iteration order.
//!
//! Everything here assumes the edge-path metric; spaces with an override
//! metric are refused, since a band around a curve has no meaning when
//! distances ignore the edges that form it.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fmath;
use crate::hyperbolic::pair_geodesic;
use crate::measure::AtomicMeasure;
use crate::space::{Geodesic, MetricSurface, Vertex};

/// Largest region accepted by [`exhaustive_paths`]; all-pairs geodesic
/// construction is quadratic, so bigger regions should be sampled instead.
pub const EXHAUSTIVE_PAIR_LIMIT: usize = 200;

/// Fitted scaling exponents up to this value still count as "gradient term
/// does not vanish toward fine scales". The slack absorbs mesh effects on
/// coarse grids, where band mass grows slightly slower than linearly.
pub const SLOPE_TOLERANCE: f64 = 0.25;

/// Scale ladders must span at least this many octaves.
const MIN_OCTAVE_SPAN: f64 = 1.5;

/// Relative slack for floating-point comparisons.
const REL_TOL: f64 = 1e-9;

fn to_float(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::INFINITY)
}

// --- test function packs ----------------------------------------------------

/// A separating curve together with the derived test functions at one width.
///
/// All per-vertex maps are indexed by vertex id over the full space. The two
/// sides partition the complement of the curve: `side_negative` carries
/// signed distance `-d(v, sigma)` and ramp values below one half,
/// `side_positive` carries `+d(v, sigma)` and ramp values above one half,
/// and the curve itself sits exactly at one half.
#[derive(Clone, Debug)]
pub struct TestFunctionPack {
    sigma: Geodesic,
    epsilon: f64,
    signed_distance: Vec<f64>,
    u: Vec<f64>,
    rho: Vec<f64>,
    side_negative: Vec<Vertex>,
    side_positive: Vec<Vertex>,
    band: Vec<Vertex>,
}

impl TestFunctionPack {
    /// The separating curve the pack was built from.
    pub fn sigma(&self) -> &Geodesic {
        &self.sigma
    }

    /// Band half-width.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Signed distance to the curve, positive on the left of travel.
    pub fn signed_distance(&self) -> &[f64] {
        &self.signed_distance
    }

    /// Ramp values `clamp((delta + epsilon) / (2 epsilon), 0, 1)`.
    pub fn u(&self) -> &[f64] {
        &self.u
    }

    /// Bump values: `1 / (2 epsilon)` where `|delta| <= epsilon`, else zero.
    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    /// Vertices on the negative (right-of-travel) side, ascending.
    pub fn side_negative(&self) -> &[Vertex] {
        &self.side_negative
    }

    /// Vertices on the positive (left-of-travel) side, ascending.
    pub fn side_positive(&self) -> &[Vertex] {
        &self.side_positive
    }

    /// Vertices within `epsilon` of the curve (including it), ascending.
    pub fn band(&self) -> &[Vertex] {
        &self.band
    }
}

/// Labels the complement of the curve: component ids for off-curve vertices,
/// `usize::MAX` for curve vertices. Returns the component count.
fn complement_components(
    space: &MetricSurface,
    on_sigma: &[bool],
    comp: &mut [usize],
) -> usize {
    let n = space.vertex_count();
    for c in comp.iter_mut() {
        *c = usize::MAX;
    }
    let mut count = 0;
    let mut queue: Vec<Vertex> = Vec::new();
    for start in 0..n {
        if on_sigma[start] || comp[start] != usize::MAX {
            continue;
        }
        comp[start] = count;
        queue.clear();
        queue.push(start);
        while let Some(v) = queue.pop() {
            for (w, _) in space.neighbors(v) {
                if !on_sigma[w] && comp[w] == usize::MAX {
                    comp[w] = count;
                    queue.push(w);
                }
            }
        }
        count += 1;
    }
    count
}

/// Off-curve neighbors lying to the left of travel along the curve: at each
/// interior waypoint, the rotation-order neighbors strictly between the
/// outgoing dart and the incoming dart. Sorted ascending, deduplicated.
fn left_side_seeds(space: &MetricSurface, walk: &[Vertex], on_sigma: &[bool]) -> Vec<Vertex> {
    let mut seeds = Vec::new();
    for t in walk.windows(3) {
        let (prev, here, next) = (t[0], t[1], t[2]);
        let ring: Vec<Vertex> = space.neighbors(here).map(|(w, _)| w).collect();
        let (Some(i_prev), Some(i_next)) = (
            ring.iter().position(|&w| w == prev),
            ring.iter().position(|&w| w == next),
        ) else {
            continue;
        };
        let mut i = (i_next + 1) % ring.len();
        while i != i_prev {
            let w = ring[i];
            if !on_sigma[w] {
                seeds.push(w);
            }
            i = (i + 1) % ring.len();
        }
    }
    seeds.sort_unstable();
    seeds.dedup();
    seeds
}

/// Builds the test functions induced by a separating curve at one width.
///
/// The curve must split the space into exactly two components; the side to
/// the left of travel (via the rotation system) becomes the positive one.
/// Signed distance is the edge-path distance to the nearest curve vertex,
/// signed by side; the ramp and bump follow from it as documented on
/// [`TestFunctionPack`].
///
/// # Errors
///
/// - [`Error::NonGeodesicSpace`] if an override metric is installed.
/// - [`Error::NoEmbedding`] without a rotation system.
/// - [`Error::BadEpsilon`] unless `epsilon` is positive and finite.
/// - [`Error::UnknownVertex`] if the curve leaves the vertex range.
/// - [`Error::SigmaDoesNotSeparate`] unless deleting the curve leaves
///   exactly two components with all left-of-travel neighbors in one of
///   them.
pub fn build_pack(
    space: &MetricSurface,
    sigma: &Geodesic,
    epsilon: f64,
) -> Result<TestFunctionPack> {
    if !space.is_geodesic() {
        return Err(Error::NonGeodesicSpace);
    }
    space.embedding().ok_or(Error::NoEmbedding)?;
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::BadEpsilon);
    }
    let n = space.vertex_count();
    for &w in sigma.waypoints() {
        if w >= n {
            return Err(Error::UnknownVertex);
        }
    }

    let mut on_sigma = vec![false; n];
    for &w in sigma.waypoints() {
        on_sigma[w] = true;
    }
    let mut comp = vec![usize::MAX; n];
    if complement_components(space, &on_sigma, &mut comp) != 2 {
        return Err(Error::SigmaDoesNotSeparate);
    }
    let seeds = left_side_seeds(space, sigma.waypoints(), &on_sigma);
    let Some(&first) = seeds.first() else {
        return Err(Error::SigmaDoesNotSeparate);
    };
    let positive = comp[first];
    if seeds.iter().any(|&s| comp[s] != positive) {
        return Err(Error::SigmaDoesNotSeparate);
    }

    let mut curve_set: Vec<Vertex> = sigma.waypoints().to_vec();
    curve_set.sort_unstable();
    curve_set.dedup();
    let unsigned = space.multi_source_distances(&curve_set);

    let half_width = 2.0 * epsilon;
    let mut signed_distance = vec![0.0; n];
    let mut u = vec![0.0; n];
    let mut rho = vec![0.0; n];
    let mut side_negative = Vec::new();
    let mut side_positive = Vec::new();
    let mut band = Vec::new();
    for v in 0..n {
        let delta = if on_sigma[v] {
            0.0
        } else if comp[v] == positive {
            side_positive.push(v);
            unsigned[v]
        } else {
            side_negative.push(v);
            -unsigned[v]
        };
        signed_distance[v] = delta;
        u[v] = ((delta + epsilon) / half_width).clamp(0.0, 1.0);
        if fmath::abs(delta) <= epsilon {
            rho[v] = 1.0 / half_width;
            band.push(v);
        }
    }

    Ok(TestFunctionPack {
        sigma: sigma.clone(),
        epsilon,
        signed_distance,
        u,
        rho,
        side_negative,
        side_positive,
        band,
    })
}

// --- upper gradient ---------------------------------------------------------

/// Checks that the bump controls the ramp along every given path: the drop
/// `|u(start) - u(end)|` must not exceed the trapezoid line integral of
/// `rho` along the path. Returns `false` as soon as one path violates the
/// bound (which happens when the band is thinner than the mesh), `true`
/// when every path passes. An empty path list passes vacuously.
///
/// # Errors
///
/// - [`Error::NonGeodesicSpace`] if an override metric is installed.
/// - [`Error::BadParameters`] if the pack was built on a different space.
/// - [`Error::UnknownVertex`] if a path leaves the vertex range.
/// - [`Error::InvalidCurve`] if consecutive waypoints share no edge.
pub fn upper_gradient_check(
    space: &MetricSurface,
    pack: &TestFunctionPack,
    paths: &[Geodesic],
) -> Result<bool> {
    if !space.is_geodesic() {
        return Err(Error::NonGeodesicSpace);
    }
    let n = space.vertex_count();
    if pack.u.len() != n {
        return Err(Error::BadParameters);
    }
    for path in paths {
        let wp = path.waypoints();
        for &w in wp {
            if w >= n {
                return Err(Error::UnknownVertex);
            }
        }
        let mut integral = 0.0;
        for pair in wp.windows(2) {
            let len = space
                .edge_between(pair[0], pair[1])
                .ok_or(Error::InvalidCurve)?;
            integral += len * 0.5 * (pack.rho[pair[0]] + pack.rho[pair[1]]);
        }
        let drop = fmath::abs(pack.u[wp[0]] - pack.u[*wp.last().expect("non-empty walk")]);
        let slack = REL_TOL * if integral > 1.0 { integral } else { 1.0 };
        if drop > integral + slack {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Deterministic geodesics between all vertex pairs of a small region, for
/// exhaustive upper-gradient checks. Uses the same seeded tie-breaking as
/// the triangle module, so repeated runs produce identical paths.
///
/// # Errors
///
/// - [`Error::EmptyDomain`] on an empty region.
/// - [`Error::BadParameters`] if the region exceeds
///   [`EXHAUSTIVE_PAIR_LIMIT`] vertices.
/// - [`Error::UnknownVertex`] if the region leaves the vertex range.
/// - [`Error::NonGeodesicSpace`] if an override metric is installed.
pub fn exhaustive_paths(space: &MetricSurface, region: &[Vertex]) -> Result<Vec<Geodesic>> {
    if region.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let mut verts: Vec<Vertex> = region.to_vec();
    verts.sort_unstable();
    verts.dedup();
    if verts.len() > EXHAUSTIVE_PAIR_LIMIT {
        return Err(Error::BadParameters);
    }
    let n = space.vertex_count();
    if verts.iter().any(|&v| v >= n) {
        return Err(Error::UnknownVertex);
    }
    let mut paths = Vec::with_capacity(verts.len() * (verts.len() - 1) / 2);
    for (i, &a) in verts.iter().enumerate() {
        for &b in &verts[i + 1..] {
            paths.push(pair_geodesic(space, a, b)?);
        }
    }
    Ok(paths)
}

// --- the ratio --------------------------------------------------------------

/// One evaluation of the inequality: oscillation term, gradient term, and
/// their ratio (the empirical constant).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoincareRatio {
    /// Measure-averaged oscillation of the ramp over the ball.
    pub lhs: f64,
    /// Ball diameter times the averaged `p`-th power of the bump over the
    /// enlarged ball, taken to the `1/p`.
    pub rhs: f64,
    /// `lhs / rhs`; zero when the ramp is constant on the ball, infinite
    /// when the oscillation is positive but the enlarged ball misses the
    /// band entirely.
    pub ratio: f64,
}

/// Evaluates both sides of the inequality for one pack on one ball pair.
///
/// `lhs` averages `|u - u_ball|` over `ball` with respect to the measure;
/// `rhs` multiplies the diameter of `ball` by the `p`-mean of `rho` over
/// `lambda_ball`. Duplicate vertices in either set are ignored.
///
/// # Errors
///
/// - [`Error::NonGeodesicSpace`] if an override metric is installed.
/// - [`Error::BadParameters`] unless `p_exp >= 1` and finite, and the pack
///   was built on this space.
/// - [`Error::EmptyDomain`] on an empty ball or enlarged ball.
/// - [`Error::UnknownVertex`] if either set leaves the vertex range.
/// - [`Error::ZeroMeasureOnBall`] when either set carries no measure.
pub fn poincare_ratio(
    space: &MetricSurface,
    measure: &AtomicMeasure,
    ball: &[Vertex],
    lambda_ball: &[Vertex],
    p_exp: f64,
    pack: &TestFunctionPack,
) -> Result<PoincareRatio> {
    if !space.is_geodesic() {
        return Err(Error::NonGeodesicSpace);
    }
    if !(p_exp >= 1.0) || !p_exp.is_finite() {
        return Err(Error::BadParameters);
    }
    let n = space.vertex_count();
    if pack.u.len() != n {
        return Err(Error::BadParameters);
    }
    if ball.is_empty() || lambda_ball.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let mut inner: Vec<Vertex> = ball.to_vec();
    inner.sort_unstable();
    inner.dedup();
    let mut outer: Vec<Vertex> = lambda_ball.to_vec();
    outer.sort_unstable();
    outer.dedup();
    if inner.iter().chain(outer.iter()).any(|&v| v >= n) {
        return Err(Error::UnknownVertex);
    }
    let inner_mass = measure.measure_of(&inner);
    let outer_mass = measure.measure_of(&outer);
    if inner_mass.is_zero() || outer_mass.is_zero() {
        return Err(Error::ZeroMeasureOnBall);
    }

    let inner_total = to_float(&inner_mass);
    let mut mean = 0.0;
    for &v in &inner {
        mean += to_float(&measure.weight(v)) * pack.u[v];
    }
    mean /= inner_total;
    let mut lhs = 0.0;
    for &v in &inner {
        lhs += to_float(&measure.weight(v)) * fmath::abs(pack.u[v] - mean);
    }
    lhs /= inner_total;

    let mut diameter = 0.0f64;
    for &v in &inner {
        let row = space.distances_from(v)?;
        for &w in &inner {
            if row[w] > diameter {
                diameter = row[w];
            }
        }
    }
    let outer_total = to_float(&outer_mass);
    let mut grad = 0.0;
    for &v in &outer {
        grad += to_float(&measure.weight(v)) * fmath::pow(pack.rho[v], p_exp);
    }
    grad /= outer_total;
    let rhs = diameter * fmath::pow(grad, 1.0 / p_exp);

    let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs };
    Ok(PoincareRatio { lhs, rhs, ratio })
}

/// Closed-form limit of the oscillation term as the band width shrinks:
/// with the ramp replaced by the indicator of the positive side,
/// `lhs = 2 m(A0) m(B)^-1 m(A1) m(B)^-1` where both sides are intersected
/// with the ball. Computed exactly in rational arithmetic, then rounded.
///
/// # Errors
///
/// - [`Error::EmptyDomain`] on an empty ball.
/// - [`Error::ZeroMeasureOnBall`] when the ball carries no measure.
pub fn indicator_limit(
    measure: &AtomicMeasure,
    pack: &TestFunctionPack,
    ball: &[Vertex],
) -> Result<f64> {
    if ball.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let mut sorted: Vec<Vertex> = ball.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let ball_mass = measure.measure_of(&sorted);
    if ball_mass.is_zero() {
        return Err(Error::ZeroMeasureOnBall);
    }
    let in_ball = |side: &[Vertex]| -> Vec<Vertex> {
        side.iter()
            .copied()
            .filter(|v| sorted.binary_search(v).is_ok())
            .collect()
    };
    let neg = measure.measure_of(&in_ball(&pack.side_negative));
    let pos = measure.measure_of(&in_ball(&pack.side_positive));
    let two = BigRational::from_integer(2.into());
    Ok(to_float(&(two * neg * pos / (&ball_mass * &ball_mass))))
}

// --- band covering ----------------------------------------------------------

/// Outcome of the greedy band covering: centers spaced along the curve,
/// the allowed count `length / (2 epsilon) + 1`, and whether balls of
/// radius `2 epsilon` around the centers cover the band.
#[derive(Clone, Debug)]
pub struct BandCovering {
    /// Chosen centers, in travel order along the curve.
    pub centers: Vec<Vertex>,
    /// Allowed number of centers at this width.
    pub allowed: f64,
    /// Whether `centers` stays within `allowed`.
    pub within_bound: bool,
    /// Whether every band vertex is within `2 epsilon` of a center.
    pub covers: bool,
}

/// Greedily covers the band with balls centered on the curve: walk the
/// waypoints, placing a center whenever the arc since the last one reaches
/// `2 epsilon`. On meshes finer than the band this realizes the covering
/// number `length / (2 epsilon) + 1`; on coarser meshes a single edge can
/// overshoot the spacing and the report says so honestly.
///
/// # Errors
///
/// - [`Error::NonGeodesicSpace`] if an override metric is installed.
/// - [`Error::BadParameters`] if the pack was built on a different space.
pub fn band_covering_check(space: &MetricSurface, pack: &TestFunctionPack) -> Result<BandCovering> {
    if !space.is_geodesic() {
        return Err(Error::NonGeodesicSpace);
    }
    if pack.u.len() != space.vertex_count() {
        return Err(Error::BadParameters);
    }
    let wp = pack.sigma.waypoints();
    let spacing = 2.0 * pack.epsilon;
    let mut centers = vec![wp[0]];
    let mut acc = 0.0;
    for pair in wp.windows(2) {
        // Walk edges come from this space; missing ones mean a foreign pack.
        let len = space
            .edge_between(pair[0], pair[1])
            .ok_or(Error::BadParameters)?;
        acc += len;
        if acc >= spacing * (1.0 - REL_TOL) {
            centers.push(pair[1]);
            acc = 0.0;
        }
    }
    let allowed = pack.sigma.length() / spacing + 1.0;
    let within_bound = (centers.len() as f64) <= allowed * (1.0 + REL_TOL);
    let reach = space.multi_source_distances(&centers);
    let covers = pack
        .band
        .iter()
        .all(|&v| reach[v] <= spacing * (1.0 + REL_TOL));
    Ok(BandCovering {
        centers,
        allowed,
        within_bound,
        covers,
    })
}

// --- dimension signal -------------------------------------------------------

/// Whether the fitted scaling of the gradient term is compatible with the
/// inequality family holding down to fine scales.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DimensionVerdict {
    /// The gradient term does not vanish toward fine scales while the
    /// oscillation term stays positive: no obstruction detected.
    Consistent,
    /// The gradient term decays toward fine scales while the oscillation
    /// term stays bounded below: the inequality family must eventually
    /// fail, signalling a dimension above `1 + p`.
    ViolationSignal,
}

impl core::fmt::Display for DimensionVerdict {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            DimensionVerdict::Consistent => write!(f, "CONSISTENT"),
            DimensionVerdict::ViolationSignal => write!(f, "VIOLATION-SIGNAL"),
        }
    }
}

/// Scale regression of the inequality family over the whole space.
#[derive(Clone, Debug)]
pub struct DimensionDiagnostic {
    /// Widths, coarsest first, as given.
    pub epsilons: Vec<f64>,
    /// Gradient term per width: `p`-mean of the bump over the space.
    pub gradient_terms: Vec<f64>,
    /// Oscillation term per width, averaged over the space.
    pub lhs_values: Vec<f64>,
    /// Fitted exponent of the gradient term in the width.
    pub slope: f64,
    /// Worst residual of the log-log fit.
    pub max_residual: f64,
    /// Closed-form limit of the oscillation term.
    pub indicator_limit: f64,
    /// Verdict under [`SLOPE_TOLERANCE`].
    pub verdict: DimensionVerdict,
}

/// Fits the gradient term of the inequality against the band width and
/// reports whether the scaling is consistent with the family holding at
/// exponent `p_exp`. A fitted slope above [`SLOPE_TOLERANCE`] means the
/// gradient term vanishes as the width shrinks while the oscillation term
/// converges to a positive limit, which no constant can absorb; measures
/// with local dimension above `1 + p_exp` produce exactly that signature.
///
/// Both terms are averaged over the whole space, so the verdict does not
/// depend on a ball choice; per-ball constants come from
/// [`poincare_ratio`].
///
/// # Errors
///
/// - [`Error::NonGeodesicSpace`] if an override metric is installed.
/// - [`Error::BadParameters`] unless `p_exp >= 1` and finite.
/// - [`Error::InsufficientScales`] with fewer than three widths, widths
///   not strictly decreasing, or a span under one and a half octaves.
/// - [`Error::BadEpsilon`] on non-positive or non-finite widths.
/// - [`Error::SupportOutsideDomain`] if the measure charges vertices
///   outside the space.
/// - [`Error::ZeroMeasureOnBall`] when some band carries no measure.
/// - Everything [`build_pack`] can return.
pub fn dimension_bound_diagnostic(
    space: &MetricSurface,
    measure: &AtomicMeasure,
    p_exp: f64,
    epsilons: &[f64],
    sigma: &Geodesic,
) -> Result<DimensionDiagnostic> {
    if !space.is_geodesic() {
        return Err(Error::NonGeodesicSpace);
    }
    if !(p_exp >= 1.0) || !p_exp.is_finite() {
        return Err(Error::BadParameters);
    }
    if epsilons.len() < 3 {
        return Err(Error::InsufficientScales);
    }
    for &e in epsilons {
        if !(e > 0.0) || !e.is_finite() {
            return Err(Error::BadEpsilon);
        }
    }
    if epsilons.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InsufficientScales);
    }
    let span = epsilons[0] / epsilons.last().expect("non-empty");
    if span < fmath::pow(2.0, MIN_OCTAVE_SPAN) * (1.0 - 1e-9) {
        return Err(Error::InsufficientScales);
    }
    let n = space.vertex_count();
    if measure.support().any(|v| v >= n) {
        return Err(Error::SupportOutsideDomain);
    }

    let total = to_float(measure.mass());
    let mut gradient_terms = Vec::with_capacity(epsilons.len());
    let mut lhs_values = Vec::with_capacity(epsilons.len());
    let mut limit = 0.0;
    for (i, &eps) in epsilons.iter().enumerate() {
        let pack = build_pack(space, sigma, eps)?;
        if i == 0 {
            let all: Vec<Vertex> = (0..n).collect();
            limit = indicator_limit(measure, &pack, &all)?;
        }
        let mut grad = 0.0;
        let mut mean = 0.0;
        for v in measure.support() {
            let w = to_float(&measure.weight(v));
            grad += w * fmath::pow(pack.rho[v], p_exp);
            mean += w * pack.u[v];
        }
        grad /= total;
        mean /= total;
        if grad == 0.0 {
            return Err(Error::ZeroMeasureOnBall);
        }
        let mut lhs = 0.0;
        for v in measure.support() {
            lhs += to_float(&measure.weight(v)) * fmath::abs(pack.u[v] - mean);
        }
        lhs /= total;
        gradient_terms.push(fmath::pow(grad, 1.0 / p_exp));
        lhs_values.push(lhs);
    }

    let xs: Vec<f64> = epsilons.iter().map(|&e| fmath::ln(e)).collect();
    let ys: Vec<f64> = gradient_terms.iter().map(|&g| fmath::ln(g)).collect();
    let (slope, _, max_residual) = fmath::linear_fit(&xs, &ys);
    let oscillation_positive = *lhs_values.last().expect("non-empty") > 0.0;
    let verdict = if slope <= SLOPE_TOLERANCE && oscillation_positive {
        DimensionVerdict::Consistent
    } else {
        DimensionVerdict::ViolationSignal
    };
    Ok(DimensionDiagnostic {
        epsilons: epsilons.to_vec(),
        gradient_terms,
        lhs_values,
        slope,
        max_residual,
        indicator_limit: limit,
        verdict,
    })
}
