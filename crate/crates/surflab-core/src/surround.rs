//! The surrounding function: exact minimum-length loops separating a ball
//! from the unbounded face, with its invariance and covering consequences.
//!
//! # Algorithm
//!
//! `sur(p, r)` must minimize loop length over all cycles that are disjoint
//! from the closed ball `B(p, r)` and topologically enclose it. The search
//! uses crossing parity: fix a reference dual path from a face incident to
//! `p` out to the outer face. A closed walk avoiding the ball encloses it
//! exactly when it crosses that reference path an odd number of times (a
//! Jordan-curve argument on the sphere embedding). Odd-crossing closed walks
//! through a fixed base vertex are shortest paths between the two parity
//! sheets of a double cover of the usable subgraph, so one Dijkstra per
//! candidate base vertex finds the optimum. Any optimal odd walk is
//! automatically vertex-simple — a repeated vertex would split it into an
//! odd and a strictly shorter even part, contradicting minimality — and
//! every odd walk passes through an endpoint of a crossed edge, so bases
//! range over those endpoints only.
//!
//! The companion predicate [`crate::space::surrounds`] deletes loop
//! vertices and tests reachability; topological enclosure implies it, so
//! every witness returned here passes that check as well.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::space::{
    surrounds, BiLipMap, DistanceCache, Loop, MetricSurface, RegionSpec, Vertex,
};

/// Relative slack for floating-point inequality checks on derived values.
const REL_TOL: f64 = 1e-9;

fn le_tol(a: f64, b: f64) -> bool {
    a <= b + crate::fmath::abs(b) * REL_TOL
}

// === Sur ===================================================================

/// An exact surrounding-loop minimum with its witness.
#[derive(Clone, Debug)]
pub struct SurResult {
    /// The minimum length.
    pub value: f64,
    /// A loop realizing the minimum (always simple).
    pub witness: Loop,
    /// The localization radius, when the query was localized.
    pub local_radius: Option<f64>,
}

/// Exact surrounding function `Sur(p, r)`, localized to `B(p, R)` when
/// `local_radius = Some(R)`: the minimum length of a loop disjoint from the
/// closed ball `B(p, r)` that separates it from the outer face, using only
/// vertices within distance `R` of `p` when localized.
///
/// # Errors
///
/// - [`Error::NoSurroundingLoop`] when no separating loop exists: acyclic
///   spaces, balls whose face-neighborhood reaches the outer face, or
///   localization radii too tight to close a loop.
/// - [`Error::NoEmbedding`] on cyclic spaces without a rotation system.
/// - [`Error::NonGeodesicSpace`] on override-metric spaces.
pub fn sur(
    space: &MetricSurface,
    p: Vertex,
    r: f64,
    local_radius: Option<f64>,
) -> Result<SurResult> {
    if !space.is_geodesic() {
        return Err(Error::NonGeodesicSpace);
    }
    if space.embedding().is_none() {
        // A connected graph with V-1 edges has no cycles at all.
        if space.edge_count() + 1 == space.vertex_count() {
            return Err(Error::NoSurroundingLoop);
        }
        return Err(Error::NoEmbedding);
    }
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::NegativeRadius);
    }
    if let Some(rr) = local_radius {
        if !(rr > r) || !rr.is_finite() {
            return Err(Error::BadRadii);
        }
    }
    let dist_p = space.distances_from(p)?;
    let emb = space.embedding().unwrap();
    let n = space.vertex_count();
    let outer = emb.outer_face();

    let in_ball: Vec<bool> = dist_p.iter().map(|&d| d <= r).collect();
    for v in 0..n {
        if in_ball[v] && emb.faces_at_vertex(v).contains(&outer) {
            return Err(Error::NoSurroundingLoop);
        }
    }
    let allowed: Vec<bool> = (0..n)
        .map(|v| !in_ball[v] && local_radius.map_or(true, |rr| dist_p[v] <= rr))
        .collect();

    // Reference dual path from a face at p to the outer face; its crossed
    // primal edges carry the parity flips.
    let f0 = emb.faces_at_vertex(p)[0];
    let crossed = emb.dual_path_edges(f0, outer);
    let mut flip = vec![false; space.edge_count()];
    for &e in &crossed {
        flip[e] = true;
    }
    let mut bases: Vec<Vertex> = crossed
        .iter()
        .flat_map(|&e| {
            let (u, v, _) = space.edges()[e];
            [u, v]
        })
        .filter(|&v| allowed[v])
        .collect();
    bases.sort_unstable();
    bases.dedup();

    let mut best: Option<(f64, Vec<Vertex>)> = None;
    for &b in &bases {
        let cap = best.as_ref().map(|x| x.0);
        if let Some((len, walk)) = odd_loop_through(space, &allowed, &flip, b, cap) {
            if best.as_ref().map_or(true, |x| len < x.0) {
                best = Some((len, walk));
            }
        }
    }
    let (value, walk) = best.ok_or(Error::NoSurroundingLoop)?;
    let witness = Loop::from_walk(space, walk)?;
    debug_assert!(witness.is_simple());
    debug_assert!({
        let ball: Vec<Vertex> = (0..n).filter(|&v| in_ball[v]).collect();
        surrounds(space, &witness, &ball).unwrap_or(false)
    });
    Ok(SurResult { value, witness, local_radius })
}

/// Parity-cover heap entry; min-dist, then min-node for determinism.
struct CoverEntry {
    dist: f64,
    node: usize,
}

impl PartialEq for CoverEntry {
    fn eq(&self, other: &Self) -> bool {
        self.dist == other.dist && self.node == other.node
    }
}
impl Eq for CoverEntry {}
impl PartialOrd for CoverEntry {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for CoverEntry {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Shortest odd-crossing closed walk through `b` inside the allowed set:
/// Dijkstra from `(b, even)` to `(b, odd)` in the parity double cover.
/// Searches only below `cap` when given. Returns the cyclic waypoints
/// without the closing repeat.
fn odd_loop_through(
    space: &MetricSurface,
    allowed: &[bool],
    flip: &[bool],
    b: Vertex,
    cap: Option<f64>,
) -> Option<(f64, Vec<Vertex>)> {
    let n = space.vertex_count();
    let start = b * 2;
    let goal = b * 2 + 1;
    let mut dist = vec![f64::INFINITY; 2 * n];
    let mut parent = vec![usize::MAX; 2 * n];
    let mut heap = BinaryHeap::new();
    dist[start] = 0.0;
    heap.push(CoverEntry { dist: 0.0, node: start });
    while let Some(CoverEntry { dist: d, node }) = heap.pop() {
        if d > dist[node] {
            continue;
        }
        if let Some(c) = cap {
            if d >= c {
                return None;
            }
        }
        if node == goal {
            let mut walk = Vec::new();
            let mut cur = node;
            while cur != usize::MAX {
                walk.push(cur / 2);
                cur = parent[cur];
            }
            // Walk runs goal..start; both ends are b, drop one.
            debug_assert_eq!(walk.first(), walk.last());
            walk.pop();
            return Some((d, walk));
        }
        let (v, parity) = (node / 2, node % 2);
        for i in 0..space.degree(v) {
            let w = space.neighbor(v, i);
            if !allowed[w] {
                continue;
            }
            let e = space.neighbor_edge(v, i);
            let np = parity ^ usize::from(flip[e]);
            let next = w * 2 + np;
            let nd = d + space.neighbor_len(v, i);
            if nd < dist[next] {
                dist[next] = nd;
                parent[next] = node;
                heap.push(CoverEntry { dist: nd, node: next });
            }
        }
    }
    None
}

// === Quasi-invariance ======================================================

/// Outcome of checking the two-sided invariance of `Sur` under a certified
/// map `f` with constant `L`:
/// `(1/L) Sur_{LR}(p', r/L) <= Sur_R(p, r) <= L Sur_{R/L}(p', L r)`.
#[derive(Clone, Debug)]
pub struct QuasiInvarianceCheck {
    /// Lower inequality holds.
    pub lhs_ok: bool,
    /// Upper inequality holds.
    pub rhs_ok: bool,
    /// `(1/L) Sur_{LR}(p', r/L) / Sur_R(p, r)`; at most 1 when `lhs_ok`.
    pub lhs_ratio: f64,
    /// `Sur_R(p, r) / (L Sur_{R/L}(p', L r))`; at most 1 when `rhs_ok`.
    pub rhs_ratio: f64,
    /// `Sur_R(p, r)`.
    pub base_value: f64,
    /// `Sur_{LR}(p', r/L)`.
    pub lower_value: f64,
    /// `Sur_{R/L}(p', L r)`.
    pub upper_value: f64,
}

/// Evaluates both quasi-invariance inequalities for `f` with `f(p) = p'`.
/// All three localized queries must be well-posed; their errors propagate.
pub fn sur_quasi_invariance(
    space: &MetricSurface,
    f: &BiLipMap,
    p: Vertex,
    p_prime: Vertex,
    r: f64,
    big_r: f64,
) -> Result<QuasiInvarianceCheck> {
    if f.apply(p) != Some(p_prime) {
        return Err(Error::BadParameters);
    }
    let l = f.constant();
    let base = sur(space, p, r, Some(big_r))?;
    let lower = sur(space, p_prime, r / l, Some(l * big_r))?;
    let upper = sur(space, p_prime, l * r, Some(big_r / l))?;
    let lhs = lower.value / l;
    let rhs = l * upper.value;
    Ok(QuasiInvarianceCheck {
        lhs_ok: le_tol(lhs, base.value),
        rhs_ok: le_tol(base.value, rhs),
        lhs_ratio: lhs / base.value,
        rhs_ratio: base.value / rhs,
        base_value: base.value,
        lower_value: lower.value,
        upper_value: upper.value,
    })
}

// === Linear bound scan =====================================================

/// Result of scanning `Sur(p, r) / r` over a region.
#[derive(Clone, Debug)]
pub struct SurBoundScan {
    /// Largest observed `Sur(p, r) / r`.
    pub k_emp: f64,
    /// True when every query succeeded with a finite ratio.
    pub pass: bool,
    /// Number of `(p, r)` queries evaluated.
    pub samples: usize,
}

/// Scans the linear bound `Sur(p, r) < k r` over all region points and the
/// given radii, reporting the empirical `k`. Query errors propagate (for
/// example, acyclic spaces surface [`Error::NoSurroundingLoop`]).
pub fn sur_bound_scan(
    space: &MetricSurface,
    region: &RegionSpec,
    radii: &[f64],
) -> Result<SurBoundScan> {
    if radii.is_empty() || radii.iter().any(|&r| !(r > 0.0) || !r.is_finite()) {
        return Err(Error::BadParameters);
    }
    let points = region.vertices(space)?;
    let mut k_emp = 0.0f64;
    let mut samples = 0usize;
    for &p in &points {
        for &r in radii {
            let res = sur(space, p, r, None)?;
            let ratio = res.value / r;
            if ratio > k_emp {
                k_emp = ratio;
            }
            samples += 1;
        }
    }
    Ok(SurBoundScan { k_emp, pass: k_emp.is_finite() && samples > 0, samples })
}

// === Geometric bound clauses ===============================================

/// The constant family derived from a cutting-curve constant `K`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurConstants {
    k: f64,
}

impl SurConstants {
    /// Builds the family from a certified cutting constant `K >= 1`.
    pub fn from_cutting_constant(k: f64) -> Result<Self> {
        if !(k >= 1.0) || !k.is_finite() {
            return Err(Error::BadParameters);
        }
        Ok(SurConstants { k })
    }

    /// The cutting constant `K`.
    pub fn k(&self) -> f64 {
        self.k
    }

    /// `C0 = 2 / K^2` (lower-bound constant).
    pub fn c0(&self) -> f64 {
        2.0 / (self.k * self.k)
    }

    /// `C1 = 2 K^2` (witness containment constant).
    pub fn c1(&self) -> f64 {
        2.0 * (self.k * self.k)
    }

    /// `C2 = 4 K^2 = 2 C1` (component containment constant).
    pub fn c2(&self) -> f64 {
        4.0 * (self.k * self.k)
    }
}

/// Per-sample outcome of the five geometric clauses tied to a witness loop.
#[derive(Clone, Debug)]
pub struct ClauseReport {
    /// Queried center.
    pub point: Vertex,
    /// Queried radius.
    pub radius: f64,
    /// Witness length `|g|`.
    pub witness_length: f64,
    /// Witness diameter `>= C0 r`.
    pub diameter_ok: bool,
    /// Witness length `>= C0 r`.
    pub length_ok: bool,
    /// For every witness point `p'`: length of the witness inside
    /// `B(p', r')` is at least `r'`, at `r' = C0 r / 2`.
    pub local_half_ok: bool,
    /// The same local-length clause at the larger stated threshold
    /// `r' = C0 r` (recorded for comparison, not asserted downstream).
    pub local_stated_ok: bool,
    /// Witness contained in `B(p, C1 |g|)`.
    pub within_c1_ok: bool,
    /// Complement component of `p` contained in `B(p, C2 |g|)`.
    pub component_within_c2_ok: bool,
}

impl ClauseReport {
    /// True when all asserted clauses hold (the stated-threshold variant of
    /// the local clause is informational and excluded).
    pub fn all_ok(&self) -> bool {
        self.diameter_ok
            && self.length_ok
            && self.local_half_ok
            && self.within_c1_ok
            && self.component_within_c2_ok
    }
}

/// Vertices reachable from `start` without entering `blocked` ones.
fn component_avoiding(space: &MetricSurface, start: Vertex, blocked: &[bool]) -> Vec<Vertex> {
    let n = space.vertex_count();
    let mut seen = vec![false; n];
    let mut stack = vec![start];
    seen[start] = true;
    let mut out = Vec::new();
    while let Some(v) = stack.pop() {
        out.push(v);
        for (w, _) in space.neighbors(v) {
            if !seen[w] && !blocked[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Total witness length inside the closed ball of radius `r` around each
/// witness waypoint; fails the clause when any waypoint sees less than `r`.
fn local_length_clause(
    space: &MetricSurface,
    witness: &Loop,
    cache: &mut DistanceCache,
    r_prime: f64,
) -> Result<bool> {
    if r_prime <= 0.0 {
        return Ok(true);
    }
    let pts = witness.waypoints();
    let m = pts.len();
    for &p_prime in pts {
        let dist = cache.distances(space, p_prime)?;
        let mut inside = 0.0f64;
        for i in 0..m {
            let (u, v) = (pts[i], pts[(i + 1) % m]);
            if dist[u] <= r_prime && dist[v] <= r_prime {
                inside += space.edge_between(u, v).unwrap_or(0.0);
            }
        }
        if !(inside >= r_prime * (1.0 - REL_TOL)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Evaluates the five geometric clauses for each sample `(p, r)` against the
/// exact witness of `sur(p, r)`. Degenerate `r = 0` samples hold trivially.
pub fn various_bounds_check(
    space: &MetricSurface,
    constants: &SurConstants,
    samples: &[(Vertex, f64)],
) -> Result<Vec<ClauseReport>> {
    let mut out = Vec::with_capacity(samples.len());
    let n = space.vertex_count();
    for &(p, r) in samples {
        let res = sur(space, p, r, None)?;
        let witness = &res.witness;
        let glen = res.value;
        let dist_p = space.distances_from(p)?;

        let mut cache = DistanceCache::new();
        let mut diam = 0.0f64;
        for &u in witness.waypoints() {
            let du = cache.distances(space, u)?;
            for &v in witness.waypoints() {
                if du[v] > diam {
                    diam = du[v];
                }
            }
        }
        let c0r = constants.c0() * r;
        let local_half_ok = local_length_clause(space, witness, &mut cache, c0r / 2.0)?;
        let local_stated_ok = local_length_clause(space, witness, &mut cache, c0r)?;

        let within_c1_ok = witness
            .waypoints()
            .iter()
            .all(|&v| le_tol(dist_p[v], constants.c1() * glen));

        let mut blocked = vec![false; n];
        for &v in witness.waypoints() {
            blocked[v] = true;
        }
        let component = component_avoiding(space, p, &blocked);
        let component_within_c2_ok = component
            .iter()
            .all(|&v| le_tol(dist_p[v], constants.c2() * glen));

        out.push(ClauseReport {
            point: p,
            radius: r,
            witness_length: glen,
            diameter_ok: le_tol(c0r, diam),
            length_ok: le_tol(c0r, glen),
            local_half_ok,
            local_stated_ok,
            within_c1_ok,
            component_within_c2_ok,
        });
    }
    Ok(out)
}

// === Layered covers ========================================================

/// Outcome of the layered surrounding-loop cover construction.
#[derive(Clone, Debug)]
pub struct LayeredCover {
    /// All cover centers: the base point plus the deduplicated net points
    /// collected on every layer's loops, ascending.
    pub centers: Vec<Vertex>,
    /// Cover radius `C2 * C * r` with `C` the largest observed
    /// loop-length-to-radius ratio.
    pub cover_radius: f64,
    /// Exhaustive check that `B(p, k r / 2)` lies in the union of
    /// `B(center, cover_radius)`.
    pub verified: bool,
    /// The observed constant `C = max |loop| / r`.
    pub growth_constant: f64,
    /// The a-priori center-count bound `(4 K^2 C)^(k+1)` for comparison
    /// with `centers.len()`; the construction is expected to stay well
    /// under it.
    pub predicted_count_bound: f64,
}

/// Builds `k` layers of surrounding loops: surround `B(p, r)`, spread a
/// maximal `net_separation`-separated net along the loop, surround each net
/// point's `r`-ball, and repeat. Net points closer than `net_separation` to
/// an already-collected center are dropped (the verification is exhaustive,
/// so deduplication cannot hide a covering gap).
///
/// A query that cannot close a loop inside the space surfaces as
/// [`Error::LayerEscapedRegion`].
pub fn layered_cover(
    space: &MetricSurface,
    constants: &SurConstants,
    p: Vertex,
    r: f64,
    k: usize,
    net_separation: f64,
) -> Result<LayeredCover> {
    if !(r > 0.0) || !r.is_finite() || !(net_separation > 0.0) {
        return Err(Error::BadParameters);
    }
    if p >= space.vertex_count() {
        return Err(Error::UnknownVertex);
    }
    let mut centers: Vec<Vertex> = vec![p];
    let mut frontier: Vec<Vertex> = vec![p];
    let mut cache = DistanceCache::new();
    let mut growth = 0.0f64;

    for _layer in 0..k {
        let mut next = Vec::new();
        for &q in &frontier {
            let res = match sur(space, q, r, None) {
                Ok(res) => res,
                Err(Error::NoSurroundingLoop) => return Err(Error::LayerEscapedRegion),
                Err(e) => return Err(e),
            };
            let ratio = res.value / r;
            if ratio > growth {
                growth = ratio;
            }
            // Greedy net along the loop in waypoint order, deduplicated
            // against every center collected so far.
            for &w in res.witness.waypoints() {
                let mut ok = true;
                for &c in &centers {
                    if cache.distances(space, c)?[w] < net_separation {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    centers.push(w);
                    next.push(w);
                }
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }

    let cover_radius = constants.c2() * growth * r;
    let target = space.ball(p, k as f64 * r / 2.0)?;
    let mut covered = vec![false; space.vertex_count()];
    for &c in &centers {
        let dist = cache.distances(space, c)?;
        for (v, flag) in covered.iter_mut().enumerate() {
            if dist[v] <= cover_radius {
                *flag = true;
            }
        }
    }
    let verified = target.iter().all(|&v| covered[v]);
    centers.sort_unstable();
    let base = constants.c2() * growth;
    let predicted_count_bound = crate::fmath::pow(base.max(1.0), (k + 1) as f64);
    Ok(LayeredCover {
        centers,
        cover_radius,
        verified,
        growth_constant: growth,
        predicted_count_bound,
    })
}

// === Contractibility =======================================================

/// Largest observed ratio between the radius of the complement component of
/// `p` (with respect to the `sur(p, r)` witness) and `r`. The degenerate
/// `r = 0` samples contribute 0 by convention.
pub fn contractibility_constant(
    space: &MetricSurface,
    samples: &[(Vertex, f64)],
) -> Result<f64> {
    let n = space.vertex_count();
    let mut worst = 0.0f64;
    for &(p, r) in samples {
        let res = sur(space, p, r, None)?;
        let mut blocked = vec![false; n];
        for &v in res.witness.waypoints() {
            blocked[v] = true;
        }
        let component = component_avoiding(space, p, &blocked);
        let dist_p = space.distances_from(p)?;
        let radius = component
            .iter()
            .map(|&v| dist_p[v])
            .fold(0.0f64, f64::max);
        if r > 0.0 {
            let ratio = radius / r;
            if ratio > worst {
                worst = ratio;
            }
        }
        // r = 0: ratio defined as 0, never raises the maximum.
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{euclidean_grid, tree, GridLayout};

    #[test]
    fn seven_grid_center_radius_one_is_sixteen() {
        let g = euclidean_grid(7, 1.0).unwrap();
        let c = GridLayout::new(7).center();
        let res = sur(g.space(), c, 1.0, None).unwrap();
        assert_eq!(res.value, 16.0);
        assert_eq!(res.witness.waypoints().len(), 16);
        assert!(res.witness.is_simple());
        let ball = g.ball(c, 1.0).unwrap();
        assert!(surrounds(g.space(), &res.witness, &ball).unwrap());
    }

    #[test]
    fn seven_grid_singleton_is_eight() {
        let g = euclidean_grid(7, 1.0).unwrap();
        let c = GridLayout::new(7).center();
        let res = sur(g.space(), c, 0.0, None).unwrap();
        assert_eq!(res.value, 8.0);
        assert_eq!(res.witness.waypoints().len(), 8);
        assert!(surrounds(g.space(), &res.witness, &[c]).unwrap());
    }

    #[test]
    fn sur_monotone_in_radius() {
        let g = euclidean_grid(9, 1.0).unwrap();
        let c = GridLayout::new(9).center();
        let v0 = sur(g.space(), c, 0.0, None).unwrap().value;
        let v1 = sur(g.space(), c, 1.0, None).unwrap().value;
        let v2 = sur(g.space(), c, 2.0, None).unwrap().value;
        assert!(v0 <= v1 && v1 <= v2, "{v0} {v1} {v2}");
    }

    #[test]
    fn localization_behaves() {
        let g = euclidean_grid(7, 1.0).unwrap();
        let c = GridLayout::new(7).center();
        // Radius 3 admits the global optimum.
        let res = sur(g.space(), c, 1.0, Some(3.0)).unwrap();
        assert_eq!(res.value, 16.0);
        assert_eq!(res.local_radius, Some(3.0));
        // Radius 2 leaves only the eight distance-2 vertices, which are
        // pairwise non-adjacent: no loop closes.
        assert_eq!(
            sur(g.space(), c, 1.0, Some(2.0)).unwrap_err(),
            Error::NoSurroundingLoop
        );
        assert_eq!(sur(g.space(), c, 2.0, Some(1.0)).unwrap_err(), Error::BadRadii);
    }

    #[test]
    fn trees_and_boundary_balls_have_no_loop()
    {
        let t = tree(2, 3, 1.0).unwrap();
        assert_eq!(sur(t.space(), 0, 1.0, None).unwrap_err(), Error::NoSurroundingLoop);

        let g = euclidean_grid(7, 1.0).unwrap();
        let c = GridLayout::new(7).center();
        // Radius 3 reaches the boundary ring's faces.
        assert_eq!(sur(g.space(), c, 3.0, None).unwrap_err(), Error::NoSurroundingLoop);
        // A corner-adjacent center touches the outer face immediately.
        assert_eq!(
            sur(g.space(), GridLayout::new(7).id(0, 0), 0.0, None).unwrap_err(),
            Error::NoSurroundingLoop
        );
    }

    #[test]
    fn snowflake_refused() {
        let s = crate::generate::snowflake_grid(5, 1.0, 0.5).unwrap();
        assert_eq!(
            sur(s.space(), s.origin(), 0.5, None).unwrap_err(),
            Error::NonGeodesicSpace
        );
    }

    #[test]
    fn translation_isometry_preserves_sur_exactly() {
        let g = euclidean_grid(17, 1.0).unwrap();
        let layout = GridLayout::new(17);
        let region = RegionSpec::new(g.origin(), 2.0);
        let maps = crate::generate::map_suite(&g, crate::generate::MapKind::Translations, &region)
            .unwrap();
        // Pick the translation by (+1, 0).
        let p = g.origin();
        let f = maps
            .iter()
            .find(|m| m.apply(p) == Some(layout.id(9, 8)))
            .unwrap();
        let check = sur_quasi_invariance(g.space(), f, p, layout.id(9, 8), 1.0, 5.0).unwrap();
        assert!(check.lhs_ok && check.rhs_ok);
        assert_eq!(check.lhs_ratio, 1.0);
        assert_eq!(check.rhs_ratio, 1.0);
        assert_eq!(check.base_value, check.lower_value);
        assert_eq!(check.base_value, check.upper_value);
    }

    #[test]
    fn bound_scan_collects_worst_ratio() {
        let g = euclidean_grid(13, 1.0).unwrap();
        let scan = sur_bound_scan(g.space(), &RegionSpec::new(g.origin(), 2.0), &[1.0, 2.0])
            .unwrap();
        assert!(scan.pass);
        assert_eq!(scan.samples, 13 * 2);
        // r = 1 queries dominate: 16 / 1.
        assert_eq!(scan.k_emp, 16.0);
    }

    #[test]
    fn bound_scan_propagates_tree_failure() {
        let t = tree(2, 4, 1.0).unwrap();
        assert_eq!(
            sur_bound_scan(t.space(), &RegionSpec::new(0, 1.0), &[1.0]).unwrap_err(),
            Error::NoSurroundingLoop
        );
    }

    #[test]
    fn constants_satisfy_stated_identities() {
        let c = SurConstants::from_cutting_constant(1.0).unwrap();
        assert_eq!(c.c0(), 2.0);
        assert_eq!(c.c1(), 2.0);
        assert_eq!(c.c2(), 4.0);
        let c = SurConstants::from_cutting_constant(3.0).unwrap();
        assert!((c.c0() * c.c1() - 4.0).abs() < 1e-12);
        assert_eq!(c.c2(), 2.0 * c.c1());
        assert!(SurConstants::from_cutting_constant(0.5).is_err());
    }

    #[test]
    fn clause_report_on_grid_samples() {
        let g = euclidean_grid(13, 1.0).unwrap();
        let c = GridLayout::new(13).center();
        let constants = SurConstants::from_cutting_constant(1.0).unwrap();
        let reports =
            various_bounds_check(g.space(), &constants, &[(c, 0.0), (c, 1.0), (c, 2.0)]).unwrap();
        for rep in &reports {
            assert!(rep.all_ok(), "{rep:?}");
        }
        // The radius-1 witness has length 16 >= C0 * 1 = 2 and diameter 4.
        assert_eq!(reports[1].witness_length, 16.0);
    }

    #[test]
    fn layered_cover_verifies_on_grid() {
        let g = euclidean_grid(33, 1.0).unwrap();
        let constants = SurConstants::from_cutting_constant(1.0).unwrap();
        let cover = layered_cover(g.space(), &constants, g.origin(), 2.0, 2, 2.0).unwrap();
        assert!(cover.verified);
        assert!(cover.centers.binary_search(&g.origin()).is_ok());
        assert!(cover.growth_constant > 0.0);
        assert!((cover.centers.len() as f64) <= cover.predicted_count_bound);
    }

    #[test]
    fn layered_cover_degenerate_k() {
        let g = euclidean_grid(9, 1.0).unwrap();
        let constants = SurConstants::from_cutting_constant(1.0).unwrap();
        let cover = layered_cover(g.space(), &constants, g.origin(), 1.0, 0, 1.0).unwrap();
        assert_eq!(cover.centers, vec![g.origin()]);
        assert!(cover.verified);
        assert_eq!(cover.growth_constant, 0.0);
    }

    #[test]
    fn layered_cover_escape_is_flagged() {
        let g = euclidean_grid(7, 1.0).unwrap();
        let constants = SurConstants::from_cutting_constant(1.0).unwrap();
        // r = 2 loops on a 7x7 grid leave no room for a second layer.
        assert_eq!(
            layered_cover(g.space(), &constants, g.origin(), 2.0, 2, 2.0).unwrap_err(),
            Error::LayerEscapedRegion
        );
    }

    #[test]
    fn contractibility_on_grid() {
        let g = euclidean_grid(13, 1.0).unwrap();
        let c = GridLayout::new(13).center();
        // Minimal witnesses are not unique; the deterministic tie-break
        // returns a square ring around the radius-1 ball, whose interior
        // reaches distance 2 from the center.
        let cllc = contractibility_constant(g.space(), &[(c, 1.0), (c, 2.0)]).unwrap();
        assert_eq!(cllc, 2.0);
        // Degenerate sample alone gives the 0 convention.
        let cllc0 = contractibility_constant(g.space(), &[(c, 0.0)]).unwrap();
        assert_eq!(cllc0, 0.0);
    }
}
