//! Net counting measures and their Haar-like limits-by-proxy.
//!
//! A net at scale `eps`, normalized so that a designated reference ball has
//! measure exactly 1, gives an atomic measure whose weights are exact
//! rationals. Pushing such measures forward along certified biLipschitz
//! maps and comparing the results quantifies how close the discretization
//! comes to carrying a translation-quasi-invariant ("Haar-like") measure.
//!
//! Two comparison granularities coexist and are kept strictly apart:
//!
//! * **atoms** — [`quasi_equivalence`] compares weights vertex by vertex.
//!   Summing the atom inequalities over any vertex set shows the atomwise
//!   ratio bound transfers to every set, and it is attained on a singleton,
//!   so the reported `alpha` is the least constant valid for all sets.
//!   Measures with different supports are infinitely far apart here.
//! * **balls at twice the resolution** — two maximal nets at the same scale
//!   usually share no vertices at all, so map-pushforward and cross-seed
//!   comparisons ([`quasi_invariance_check`], the cross-seed column of
//!   [`haar_like`]) are made on a family of metric balls of radius twice
//!   the measure's resolution scale, where both sides are guaranteed mass.
//!
//! The scale-zero weak limit is unattainable on a fixed finite space, so
//! [`haar_like`] returns the finest-scale measure together with a report of
//! the measured drift of ball masses across consecutive scales; small drift
//! per octave is the checkable surrogate for convergence.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
pub use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fmath;
use crate::net::{maximal_net, maximal_net_seeded, Net};
use crate::space::{BiLipMap, Geodesic, MetricSurface, Vertex};

/// Largest tolerated ball-mass drift per octave of scale refinement before
/// [`haar_like`] withholds its convergence flag.
pub const DRIFT_TOLERANCE: f64 = 2.0;

// === Atomic measures =======================================================

/// A finitely supported measure with exact rational weights.
///
/// Only strictly positive weights are stored; the total mass is kept
/// alongside and is always the exact sum of the weights. A measure may
/// carry the net scale it was built at (its *resolution*), which the
/// ball-granularity comparisons use to pick their ball radius.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomicMeasure {
    weights: BTreeMap<Vertex, BigRational>,
    mass: BigRational,
    resolution: Option<f64>,
}

impl AtomicMeasure {
    /// Builds a measure from explicit weights. Zero weights are dropped,
    /// negative ones are rejected with [`Error::BadParameters`], and a
    /// result with no positive weight is rejected with
    /// [`Error::ZeroMeasure`].
    pub fn from_weights(weights: BTreeMap<Vertex, BigRational>) -> Result<Self> {
        let zero = BigRational::zero();
        let mut kept = BTreeMap::new();
        let mut mass = BigRational::zero();
        for (v, w) in weights {
            if w < zero {
                return Err(Error::BadParameters);
            }
            if w.is_zero() {
                continue;
            }
            mass = &mass + &w;
            kept.insert(v, w);
        }
        if kept.is_empty() {
            return Err(Error::ZeroMeasure);
        }
        Ok(AtomicMeasure { weights: kept, mass, resolution: None })
    }

    /// Counting measure: weight 1 on each listed vertex (duplicates
    /// collapse). An empty list is rejected with [`Error::ZeroMeasure`].
    pub fn uniform(vertices: &[Vertex]) -> Result<Self> {
        let mut weights = BTreeMap::new();
        for &v in vertices {
            weights.insert(v, BigRational::one());
        }
        Self::from_weights(weights)
    }

    /// Unit point mass at `v`.
    pub fn dirac(v: Vertex) -> Self {
        let mut weights = BTreeMap::new();
        weights.insert(v, BigRational::one());
        AtomicMeasure { weights, mass: BigRational::one(), resolution: None }
    }

    /// Attaches a resolution scale (the net scale the weights live at).
    pub fn with_resolution(mut self, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::BadEpsilon);
        }
        self.resolution = Some(epsilon);
        Ok(self)
    }

    /// The resolution scale, if one was recorded.
    pub fn resolution(&self) -> Option<f64> {
        self.resolution
    }

    /// Weight of a single vertex (zero off the support).
    pub fn weight(&self, v: Vertex) -> BigRational {
        self.weights.get(&v).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Exact total mass.
    pub fn mass(&self) -> &BigRational {
        &self.mass
    }

    /// Exact measure of a vertex set (duplicates collapse).
    pub fn measure_of(&self, set: &[Vertex]) -> BigRational {
        let mut sorted: Vec<Vertex> = set.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut sum = BigRational::zero();
        for v in sorted {
            if let Some(w) = self.weights.get(&v) {
                sum = &sum + w;
            }
        }
        sum
    }

    /// Support vertices, ascending.
    pub fn support(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.weights.keys().copied()
    }

    /// Number of atoms.
    pub fn support_len(&self) -> usize {
        self.weights.len()
    }

    /// The measure multiplied by a positive rational factor.
    pub fn scaled(&self, factor: &BigRational) -> Result<Self> {
        if *factor <= BigRational::zero() {
            return Err(Error::BadParameters);
        }
        let weights = self.weights.iter().map(|(&v, w)| (v, w * factor)).collect();
        Ok(AtomicMeasure {
            weights,
            mass: &self.mass * factor,
            resolution: self.resolution,
        })
    }

    /// The restriction to a vertex set. Rejected with
    /// [`Error::ZeroMeasure`] when no atom survives.
    pub fn restricted(&self, set: &[Vertex]) -> Result<Self> {
        let mut sorted: Vec<Vertex> = set.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut weights = BTreeMap::new();
        let mut mass = BigRational::zero();
        for (&v, w) in &self.weights {
            if sorted.binary_search(&v).is_ok() {
                mass = &mass + w;
                weights.insert(v, w.clone());
            }
        }
        if weights.is_empty() {
            return Err(Error::ZeroMeasure);
        }
        Ok(AtomicMeasure { weights, mass, resolution: self.resolution })
    }

    /// Exact mass of the closed ball `B(center, radius)`.
    pub fn ball_mass(&self, space: &MetricSurface, center: Vertex, radius: f64) -> BigRational {
        let mut sum = BigRational::zero();
        for (v, _) in space.bounded_ball(center, radius) {
            if let Some(w) = self.weights.get(&v) {
                sum = &sum + w;
            }
        }
        sum
    }
}

/// `1 / n` as an exact rational.
fn unit_fraction(n: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(n))
}

// === Net measures ==========================================================

/// The counting measure of a net, normalized so the reference ball has
/// measure exactly 1: every member gets weight `1 / #(net ∩ unit_ball)`.
///
/// A net that misses the reference ball entirely cannot be normalized and
/// is rejected with [`Error::EmptyNormalizer`].
pub fn net_measure(space: &MetricSurface, net: &Net, unit_ball: &[Vertex]) -> Result<AtomicMeasure> {
    let n = space.vertex_count();
    let mut ball: Vec<Vertex> = unit_ball.to_vec();
    ball.sort_unstable();
    ball.dedup();
    if ball.iter().any(|&v| v >= n) || net.members().iter().any(|&v| v >= n) {
        return Err(Error::UnknownVertex);
    }
    let norm = net.members_in(&ball).len();
    if norm == 0 {
        return Err(Error::EmptyNormalizer);
    }
    let w = unit_fraction(norm);
    let weights: BTreeMap<Vertex, BigRational> =
        net.members().iter().map(|&v| (v, w.clone())).collect();
    let mass = BigRational::new(BigInt::from(net.members().len()), BigInt::from(norm));
    Ok(AtomicMeasure { weights, mass, resolution: Some(net.epsilon()) })
}

// === Pushforward ===========================================================

/// The image measure: the weight of `y` is the summed weight of its
/// preimage. The map must cover the whole support of the input; certified
/// maps are injective, so no two atoms ever merge.
///
/// Total mass is preserved exactly.
pub fn pushforward(measure: &AtomicMeasure, map: &BiLipMap) -> Result<AtomicMeasure> {
    let mut weights: BTreeMap<Vertex, BigRational> = BTreeMap::new();
    for (&v, w) in &measure.weights {
        let y = map.apply(v).ok_or(Error::SupportOutsideDomain)?;
        let entry = weights.entry(y).or_insert_with(BigRational::zero);
        *entry = &*entry + w;
    }
    Ok(AtomicMeasure {
        weights,
        mass: measure.mass.clone(),
        resolution: measure.resolution,
    })
}

// === Atomwise quasi-equivalence ============================================

/// Result of the atomwise comparison of two measures.
#[derive(Clone, Debug)]
pub struct QuasiEquivalenceReport {
    /// Least `alpha` with `nu(A)/alpha <= mu(A) <= alpha * nu(A)` for every
    /// vertex set `A`; infinite when the supports differ.
    pub alpha: f64,
    /// Vertex achieving the extreme ratio (the first support mismatch when
    /// `alpha` is infinite).
    pub witness_vertex: Vertex,
}

/// Compares two measures atom by atom and reports the least constant
/// `alpha` such that each bounds the other within factor `alpha` on every
/// vertex set.
///
/// Summing the atom inequalities `w_mu(v) <= alpha * w_nu(v)` (and the
/// swapped form) over any set yields the set inequalities, and the extreme
/// atom is itself a set, so the atomwise maximum is exactly the setwise
/// optimum. An atom carried by only one measure makes the ratio infinite.
pub fn quasi_equivalence(
    mu: &AtomicMeasure,
    nu: &AtomicMeasure,
) -> Result<QuasiEquivalenceReport> {
    if mu.weights.is_empty() || nu.weights.is_empty() {
        return Err(Error::ZeroMeasure);
    }
    let mut best: Option<(BigRational, Vertex)> = None;
    let mut a_iter = mu.weights.iter().peekable();
    let mut b_iter = nu.weights.iter().peekable();
    loop {
        let (v, wa, wb) = match (a_iter.peek(), b_iter.peek()) {
            (None, None) => break,
            (Some(&(&va, _)), None) => {
                return Ok(QuasiEquivalenceReport { alpha: f64::INFINITY, witness_vertex: va })
            }
            (None, Some(&(&vb, _))) => {
                return Ok(QuasiEquivalenceReport { alpha: f64::INFINITY, witness_vertex: vb })
            }
            (Some(&(&va, _)), Some(&(&vb, _))) => {
                if va < vb {
                    return Ok(QuasiEquivalenceReport { alpha: f64::INFINITY, witness_vertex: va });
                }
                if vb < va {
                    return Ok(QuasiEquivalenceReport { alpha: f64::INFINITY, witness_vertex: vb });
                }
                let (_, wa) = a_iter.next().expect("peeked");
                let (_, wb) = b_iter.next().expect("peeked");
                (va, wa, wb)
            }
        };
        let ratio = if wa >= wb { wa / wb } else { wb / wa };
        match &best {
            Some((r, _)) if *r >= ratio => {}
            _ => best = Some((ratio, v)),
        }
    }
    let (ratio, witness) = best.expect("both measures are non-zero");
    Ok(QuasiEquivalenceReport {
        alpha: ratio.to_f64().unwrap_or(f64::INFINITY),
        witness_vertex: witness,
    })
}

// === Haar-like construction ================================================

/// Drift diagnostics for a ladder of net measures.
#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    /// The scales actually used, coarsest first.
    pub epsilons: Vec<f64>,
    /// For each consecutive scale pair, the worst ball-mass ratio across
    /// the test ball family and all seeds, normalized per octave of
    /// refinement. A value of 1 means no drift.
    pub drift_per_octave: Vec<f64>,
    /// Largest entry of `drift_per_octave`.
    pub max_drift: f64,
    /// True when `max_drift <= DRIFT_TOLERANCE`.
    pub converged: bool,
    /// For each scale, the worst pairwise cross-seed ratio of ball masses
    /// at granularity twice that scale (1 when all seed choices agree).
    pub seed_alpha: Vec<f64>,
}

impl ConvergenceReport {
    /// Worst per-octave ratio between consecutive `seed_alpha` entries —
    /// how fast the cross-seed disagreement itself moves as the scale
    /// refines.
    pub fn seed_alpha_drift(&self) -> f64 {
        let mut worst = 1.0f64;
        for i in 0..self.seed_alpha.len().saturating_sub(1) {
            let (a, b) = (self.seed_alpha[i], self.seed_alpha[i + 1]);
            if !a.is_finite() || !b.is_finite() {
                return f64::INFINITY;
            }
            let octaves = fmath::log2(self.epsilons[i] / self.epsilons[i + 1]);
            let dev = if a >= b { a / b } else { b / a };
            let per_octave = fmath::pow(dev, 1.0 / octaves);
            if per_octave > worst {
                worst = per_octave;
            }
        }
        worst
    }
}

/// Builds net measures down a decreasing scale ladder and returns the
/// finest one (for the first seed) together with a [`ConvergenceReport`].
///
/// Requirements: at least 3 scales, strictly decreasing, spanning at least
/// one octave; at least 2 seeds so the report can quantify how much the
/// result depends on the net's admission order. Every net is normalized on
/// `unit_ball`, so the ball's circumradius should be at least the coarsest
/// scale or the normalizer may come up empty.
///
/// The drift test family consists of `unit_ball` itself plus the balls
/// around the origin of radius one and two times the coarsest scale; both
/// measures are guaranteed positive mass there by net maximality.
pub fn haar_like(
    space: &MetricSurface,
    epsilons: &[f64],
    seeds: &[u64],
    unit_ball: &[Vertex],
) -> Result<(AtomicMeasure, ConvergenceReport)> {
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
    let coarsest = epsilons[0];
    let finest = *epsilons.last().expect("non-empty");
    if coarsest / finest < 2.0 * (1.0 - 1e-9) {
        return Err(Error::InsufficientScales);
    }
    if seeds.len() < 2 {
        return Err(Error::InsufficientSamples);
    }
    let n = space.vertex_count();
    let mut ball: Vec<Vertex> = unit_ball.to_vec();
    ball.sort_unstable();
    ball.dedup();
    if ball.iter().any(|&v| v >= n) {
        return Err(Error::UnknownVertex);
    }

    // One measure per (seed, scale).
    let mut grid: Vec<Vec<AtomicMeasure>> = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let mut row = Vec::with_capacity(epsilons.len());
        for &eps in epsilons {
            let net = maximal_net_seeded(space, eps, seed)?;
            row.push(net_measure(space, &net, &ball)?);
        }
        grid.push(row);
    }

    // Scale-to-scale drift over the test ball family.
    let origin = space.origin();
    let family: Vec<Vec<Vertex>> = vec![
        ball.clone(),
        space.ball(origin, coarsest)?,
        space.ball(origin, 2.0 * coarsest)?,
    ];
    let masses: Vec<Vec<Vec<f64>>> = grid
        .iter()
        .map(|row| {
            row.iter()
                .map(|m| {
                    family
                        .iter()
                        .map(|set| m.measure_of(set).to_f64().unwrap_or(f64::INFINITY))
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut drift_per_octave = Vec::with_capacity(epsilons.len() - 1);
    for i in 0..epsilons.len() - 1 {
        let octaves = fmath::log2(epsilons[i] / epsilons[i + 1]);
        let mut dev = 1.0f64;
        for s in 0..seeds.len() {
            for b in 0..family.len() {
                let (a, c) = (masses[s][i][b], masses[s][i + 1][b]);
                if !(a > 0.0) || !(c > 0.0) {
                    dev = f64::INFINITY;
                    continue;
                }
                let r = if a >= c { a / c } else { c / a };
                if r > dev {
                    dev = r;
                }
            }
        }
        drift_per_octave.push(fmath::pow(dev, 1.0 / octaves));
    }
    let max_drift = drift_per_octave.iter().fold(1.0f64, |m, &d| if d > m { d } else { m });

    // Cross-seed disagreement per scale, at ball granularity twice the
    // scale. Maximality guarantees both sides positive mass on every such
    // ball, so the ratios are finite by construction.
    let mut seed_alpha = Vec::with_capacity(epsilons.len());
    for (i, &eps) in epsilons.iter().enumerate() {
        let rho = 2.0 * eps;
        let tables: Vec<Vec<BigRational>> = grid
            .iter()
            .map(|row| (0..n).map(|c| row[i].ball_mass(space, c, rho)).collect())
            .collect();
        let mut worst: Option<BigRational> = None;
        let mut infinite = false;
        for a in 0..seeds.len() {
            for b in a + 1..seeds.len() {
                for c in 0..n {
                    let (x, y) = (&tables[a][c], &tables[b][c]);
                    match (x.is_zero(), y.is_zero()) {
                        (true, true) => continue,
                        (true, false) | (false, true) => infinite = true,
                        (false, false) => {
                            let r = if x >= y { x / y } else { y / x };
                            match &worst {
                                Some(w) if *w >= r => {}
                                _ => worst = Some(r),
                            }
                        }
                    }
                }
            }
        }
        let alpha = if infinite {
            f64::INFINITY
        } else {
            worst.map(|r| r.to_f64().unwrap_or(f64::INFINITY)).unwrap_or(1.0)
        };
        seed_alpha.push(alpha);
    }

    let report = ConvergenceReport {
        epsilons: epsilons.to_vec(),
        drift_per_octave,
        max_drift,
        converged: max_drift.is_finite() && max_drift <= DRIFT_TOLERANCE,
        seed_alpha,
    };
    let finest_measure = grid[0].last().expect("ladder non-empty").clone();
    Ok((finest_measure, report))
}

// === Quasi-invariance under a map suite ====================================

/// Outcome of checking a measure against a suite of self-maps.
#[derive(Clone, Debug)]
pub struct QuasiInvariance {
    /// Worst ball-mass ratio between the measure and any of its
    /// pushforwards, over all test balls of all checked maps.
    pub alpha_star: f64,
    /// Largest certified biLipschitz constant in the suite.
    pub suite_constant: f64,
    /// Maps that contributed at least one test ball.
    pub maps_checked: usize,
    /// Maps skipped because no ball of the required radius fits inside
    /// both the map's domain and its image.
    pub maps_skipped: usize,
}

impl QuasiInvariance {
    /// The a-priori ratio bound `C * L^D` implied by a packing constant
    /// `C` and dimension exponent `D` at the suite's certified constant.
    pub fn theoretical_bound(&self, packing_c: f64, dim_d: f64) -> f64 {
        packing_c * fmath::pow(self.suite_constant, dim_d)
    }
}

/// Measures how far `measure` is from being preserved by every map in the
/// suite: for each map, the measure is restricted to the map's domain,
/// pushed forward, and compared with the restriction on all balls of
/// radius `2 * L * resolution` that fit inside both the domain and the
/// image (where neither side is truncated by the map's finite window).
///
/// A map whose domain/image overlap admits no such ball — e.g. a
/// translation by more than the window size — carries no usable
/// information at this granularity and is counted in `maps_skipped`; if
/// every map is skipped the suite cannot be checked and
/// [`Error::RegionTooSmall`] is raised. A measure with no support in some
/// map's domain is rejected with [`Error::SupportOutsideDomain`].
pub fn quasi_invariance_check(
    space: &MetricSurface,
    measure: &AtomicMeasure,
    suite: &[BiLipMap],
) -> Result<QuasiInvariance> {
    if suite.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let n = space.vertex_count();
    let res = measure.resolution.unwrap_or_else(|| space.mesh());
    let mut alpha_star = 1.0f64;
    let mut suite_constant = 1.0f64;
    let mut maps_checked = 0usize;
    let mut maps_skipped = 0usize;
    for f in suite {
        let l = f.constant();
        if l > suite_constant {
            suite_constant = l;
        }
        let dom: Vec<Vertex> = f.domain().collect();
        let restricted = match measure.restricted(&dom) {
            Ok(m) => m,
            Err(Error::ZeroMeasure) => return Err(Error::SupportOutsideDomain),
            Err(e) => return Err(e),
        };
        let pushed = pushforward(&restricted, f)?;
        let mut img: Vec<Vertex> = f.image().collect();
        img.sort_unstable();
        let depth_dom = space.multi_source_distances(&complement(n, &dom));
        let depth_img = space.multi_source_distances(&complement(n, &img));
        let rho = 2.0 * l * res;
        let mut contributed = false;
        for c in 0..n {
            if !(depth_dom[c] > rho && depth_img[c] > rho) {
                continue;
            }
            let a = restricted.ball_mass(space, c, rho);
            let b = pushed.ball_mass(space, c, rho);
            match (a.is_zero(), b.is_zero()) {
                (true, true) => continue,
                (true, false) | (false, true) => {
                    alpha_star = f64::INFINITY;
                    contributed = true;
                }
                (false, false) => {
                    let r = if a >= b { &a / &b } else { &b / &a };
                    let rf = r.to_f64().unwrap_or(f64::INFINITY);
                    if rf > alpha_star {
                        alpha_star = rf;
                    }
                    contributed = true;
                }
            }
        }
        if contributed {
            maps_checked += 1;
        } else {
            maps_skipped += 1;
        }
    }
    if maps_checked == 0 {
        return Err(Error::RegionTooSmall);
    }
    Ok(QuasiInvariance { alpha_star, suite_constant, maps_checked, maps_skipped })
}

/// Sorted list of the vertices not in `set` (`set` must be sorted).
fn complement(n: usize, set: &[Vertex]) -> Vec<Vertex> {
    (0..n).filter(|v| set.binary_search(v).is_err()).collect()
}

// === Existence proof-step counting check ===================================

/// Result of the counting inequality behind pushforward boundedness.
#[derive(Clone, Debug)]
pub struct ExistenceStepCheck {
    /// True when every counted pair satisfied the bound.
    pub pass: bool,
    /// Worst observed `lhs / (C * L^D * rhs)` over all checks (≤ 1 iff
    /// `pass`).
    pub worst_ratio: f64,
    /// Number of (map, ball pair) combinations actually counted.
    pub checks: usize,
}

/// Verifies the counting inequality
/// `#(B_inner ∩ f(net)) <= C * L^D * #(B_outer ∩ net)`
/// for every suite map on the supplied concentric ball pairs.
///
/// Each pair is `(center, r_inner, r_outer)` with `0 < r_inner < r_outer`
/// and `r_outer - r_inner >= net scale` — the margin that makes the cover
/// of the inner ball by net-point balls stay inside the outer one. The
/// inner ball must lie inside the map's image so its preimage is fully
/// visible; combinations violating that are skipped, and if nothing at all
/// can be counted [`Error::RegionTooSmall`] is raised.
pub fn existence_step_check(
    space: &MetricSurface,
    net: &Net,
    suite: &[BiLipMap],
    packing_c: f64,
    dim_d: f64,
    ball_pairs: &[(Vertex, f64, f64)],
) -> Result<ExistenceStepCheck> {
    if suite.is_empty() {
        return Err(Error::EmptyDomain);
    }
    if !(packing_c > 0.0) || !packing_c.is_finite() || !(dim_d >= 0.0) || !dim_d.is_finite() {
        return Err(Error::BadParameters);
    }
    if ball_pairs.is_empty() {
        return Err(Error::BadParameters);
    }
    let n = space.vertex_count();
    let eps = net.epsilon();
    for &(c, r_in, r_out) in ball_pairs {
        if c >= n {
            return Err(Error::UnknownVertex);
        }
        if !(r_in > 0.0) || !(r_out > r_in) || !r_out.is_finite() {
            return Err(Error::BadRadii);
        }
        if r_out - r_in < eps * (1.0 - 1e-9) {
            return Err(Error::BadRadii);
        }
    }
    let mut worst = 0.0f64;
    let mut checks = 0usize;
    for f in suite {
        let bound = packing_c * fmath::pow(f.constant(), dim_d);
        let mut img: Vec<Vertex> = f.image().collect();
        img.sort_unstable();
        let mapped_net: Vec<Vertex> = {
            let mut m: Vec<Vertex> =
                net.members().iter().filter_map(|&v| f.apply(v)).collect();
            m.sort_unstable();
            m
        };
        for &(c, r_in, r_out) in ball_pairs {
            let inner: Vec<Vertex> =
                space.bounded_ball(c, r_in).into_iter().map(|(v, _)| v).collect();
            if inner.iter().any(|v| img.binary_search(v).is_err()) {
                continue;
            }
            let outer: Vec<Vertex> =
                space.bounded_ball(c, r_out).into_iter().map(|(v, _)| v).collect();
            let lhs = inner.iter().filter(|v| mapped_net.binary_search(v).is_ok()).count();
            let rhs = net.members_in(&outer).len();
            let ratio = if rhs == 0 {
                if lhs == 0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                lhs as f64 / (bound * rhs as f64)
            };
            if ratio > worst {
                worst = ratio;
            }
            checks += 1;
        }
    }
    if checks == 0 {
        return Err(Error::RegionTooSmall);
    }
    Ok(ExistenceStepCheck { pass: worst <= 1.0, worst_ratio: worst, checks })
}

// === Ball-measure bounds ===================================================

/// Empirical and predicted constants tying ball masses to net cardinality.
#[derive(Clone, Debug)]
pub struct BallMeasureBounds {
    /// Best (largest) `k` with `measure(B(p, L*eps)) >= k / c_eps` over
    /// the common suite domain.
    pub k: f64,
    /// Best (smallest) `h` with `measure(B(p, eps/2L)) <= h / c_eps`.
    pub h: f64,
    /// True when `k > 0` and `h` is finite.
    pub pass: bool,
    /// Predicted lower constant `alpha^{-1} * measure(B(O, r_unit/2))`.
    pub k_predicted: f64,
    /// Predicted upper constant `alpha * measure(B(O, 3*r_unit/2))`.
    pub h_predicted: f64,
    /// The quasi-invariance ratio used for the predictions.
    pub alpha: f64,
    /// `c_eps`: members of the scale-`epsilon` reference net inside the
    /// unit ball.
    pub net_count: usize,
}

/// Measures, over every point of the suite's common domain, how the mass
/// of small balls compares against the inverse cardinality `1 / c_eps` of
/// a maximal `epsilon`-net restricted to the unit ball — the discrete
/// bracket that pins ball masses of a quasi-invariant measure between two
/// constants.
///
/// `epsilon` must stay below half the unit ball's circumradius about the
/// origin. The reference net is built over the ascending vertex order, so
/// `c_eps` is reproducible.
pub fn ball_measure_bounds(
    space: &MetricSurface,
    measure: &AtomicMeasure,
    suite: &[BiLipMap],
    epsilon: f64,
    unit_ball: &[Vertex],
) -> Result<BallMeasureBounds> {
    if suite.is_empty() {
        return Err(Error::EmptyDomain);
    }
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::BadEpsilon);
    }
    let n = space.vertex_count();
    let mut ball: Vec<Vertex> = unit_ball.to_vec();
    ball.sort_unstable();
    ball.dedup();
    if ball.is_empty() {
        return Err(Error::EmptyDomain);
    }
    if ball.iter().any(|&v| v >= n) {
        return Err(Error::UnknownVertex);
    }
    let from_origin = space.distances_from(space.origin())?;
    let r_unit = ball.iter().fold(0.0f64, |m, &v| {
        if from_origin[v] > m {
            from_origin[v]
        } else {
            m
        }
    });
    if !(epsilon < r_unit / 2.0) {
        return Err(Error::BadRadii);
    }
    let order: Vec<Vertex> = (0..n).collect();
    let reference = maximal_net(space, epsilon, &order)?;
    let net_count = reference.members_in(&ball).len();
    if net_count == 0 {
        return Err(Error::EmptyNormalizer);
    }
    // Suite constant and common domain.
    let mut l = 1.0f64;
    let mut region: Option<Vec<Vertex>> = None;
    for f in suite {
        if f.constant() > l {
            l = f.constant();
        }
        let dom: Vec<Vertex> = f.domain().collect();
        region = Some(match region {
            None => dom,
            Some(prev) => prev.into_iter().filter(|v| dom.binary_search(v).is_ok()).collect(),
        });
    }
    let region = region.expect("suite is non-empty");
    if region.is_empty() {
        return Err(Error::RegionTooSmall);
    }
    let c_eps = BigRational::from_integer(BigInt::from(net_count));
    let mut k_min: Option<BigRational> = None;
    let mut h_max: Option<BigRational> = None;
    for &p in &region {
        let low = measure.ball_mass(space, p, l * epsilon);
        let high = measure.ball_mass(space, p, epsilon / (2.0 * l));
        k_min = Some(match k_min {
            None => low,
            Some(m) => {
                if low < m {
                    low
                } else {
                    m
                }
            }
        });
        h_max = Some(match h_max {
            None => high,
            Some(m) => {
                if high > m {
                    high
                } else {
                    m
                }
            }
        });
    }
    let k = (&k_min.expect("region non-empty") * &c_eps).to_f64().unwrap_or(f64::INFINITY);
    let h = (&h_max.expect("region non-empty") * &c_eps).to_f64().unwrap_or(f64::INFINITY);
    let qi = quasi_invariance_check(space, measure, suite)?;
    let half = measure.ball_mass(space, space.origin(), r_unit / 2.0);
    let three_half = measure.ball_mass(space, space.origin(), 1.5 * r_unit);
    let alpha = qi.alpha_star;
    let k_predicted = half.to_f64().unwrap_or(f64::INFINITY) / alpha;
    let h_predicted = alpha * three_half.to_f64().unwrap_or(f64::INFINITY);
    Ok(BallMeasureBounds {
        k,
        h,
        pass: k > 0.0 && h.is_finite(),
        k_predicted,
        h_predicted,
        alpha,
        net_count,
    })
}

// === Growth exponents ======================================================

/// Log-log slopes of ball mass against radius.
#[derive(Clone, Debug)]
pub struct GrowthExponents {
    /// Smallest per-point slope.
    pub lower: f64,
    /// Largest per-point slope.
    pub upper: f64,
    /// Worst absolute fit residual over all points.
    pub max_residual: f64,
    /// Slope at each supplied point, in input order.
    pub per_point: Vec<f64>,
}

impl GrowthExponents {
    /// True when the slopes sit inside the dimension sandwich
    /// `[assouad - slack, hausdorff + slack]`.
    pub fn sandwich_ok(&self, assouad_d: f64, hausdorff_alpha: f64, slack: f64) -> bool {
        self.lower >= assouad_d - slack && self.upper <= hausdorff_alpha + slack
    }
}

/// Fits `log measure(B(p, r))` against `log r` at each point.
///
/// Needs at least 4 radii, strictly increasing and spanning at least two
/// octaves. A ball with zero mass has no logarithm and is rejected with
/// [`Error::ZeroMeasureOnBall`] — pick probe points on or near the
/// support.
pub fn growth_exponents(
    space: &MetricSurface,
    measure: &AtomicMeasure,
    points: &[Vertex],
    radii: &[f64],
) -> Result<GrowthExponents> {
    if radii.len() < 4 {
        return Err(Error::InsufficientRadii);
    }
    for &r in radii {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InsufficientRadii);
        }
    }
    if radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InsufficientRadii);
    }
    if radii[radii.len() - 1] / radii[0] < 4.0 * (1.0 - 1e-9) {
        return Err(Error::InsufficientRadii);
    }
    if points.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let n = space.vertex_count();
    if points.iter().any(|&p| p >= n) {
        return Err(Error::UnknownVertex);
    }
    let xs: Vec<f64> = radii.iter().map(|&r| fmath::ln(r)).collect();
    let mut per_point = Vec::with_capacity(points.len());
    let mut max_residual = 0.0f64;
    for &p in points {
        let mut ys = Vec::with_capacity(radii.len());
        for &r in radii {
            let m = measure.ball_mass(space, p, r);
            if m.is_zero() {
                return Err(Error::ZeroMeasureOnBall);
            }
            ys.push(fmath::ln(m.to_f64().unwrap_or(f64::INFINITY)));
        }
        let (slope, _, resid) = fmath::linear_fit(&xs, &ys);
        if resid > max_residual {
            max_residual = resid;
        }
        per_point.push(slope);
    }
    let lower = per_point.iter().fold(f64::INFINITY, |m, &s| if s < m { s } else { m });
    let upper = per_point.iter().fold(f64::NEG_INFINITY, |m, &s| if s > m { s } else { m });
    Ok(GrowthExponents { lower, upper, max_residual, per_point })
}

// === Curve nullity =========================================================

/// Fraction of net mass a curve captures from its own `r`-neighborhood,
/// per scale: `#(net ∩ curve) / #(net ∩ neighborhood)`.
///
/// A curve is one-dimensional against a two-dimensional neighborhood, so
/// the fractions should fall as the scale refines — the finite-scale form
/// of rectifiable curves being null for area-like measures. Scales must be
/// given as for [`haar_like`] (at least 3, strictly decreasing); take `r`
/// at least the coarsest scale or the coarse fractions degenerate. The
/// nets are built curve-first, so the numerator is never vacuously zero.
pub fn curve_nullity_profile(
    space: &MetricSurface,
    epsilons: &[f64],
    seed: u64,
    curve: &Geodesic,
    r: f64,
) -> Result<Vec<f64>> {
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
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::NegativeRadius);
    }
    let n = space.vertex_count();
    let mut curve_set: Vec<Vertex> = curve.waypoints().to_vec();
    curve_set.sort_unstable();
    curve_set.dedup();
    if curve_set.iter().any(|&v| v >= n) {
        return Err(Error::UnknownVertex);
    }
    let depth = space.multi_source_distances(&curve_set);
    let band: Vec<Vertex> = (0..n).filter(|&v| depth[v] <= r).collect();
    let mut profile = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        // Sweep the curve first so every scale resolves it: a plain seeded
        // order can miss a thin curve entirely at coarse scales, which
        // would report 0/0 instead of the curve's true share.
        let net = crate::net::maximal_net_region_first(space, eps, &curve_set, seed)?;
        let on_curve = net.members_in(&curve_set).len();
        let in_band = net.members_in(&band).len();
        profile.push(if in_band == 0 { 0.0 } else { on_curve as f64 / in_band as f64 });
    }
    Ok(profile)
}

// === Tests =================================================================
