//! Thin and fat geodesic triangles: exact thinness over waypoints, scans for
//! fat triangles at a scale-relative threshold, the four-point hyperbolicity
//! defect, and extraction of a ball that a fat triangle provably surrounds.
//!
//! # Edge choice
//!
//! Shortest paths between grid vertices are massively non-unique and the
//! choice matters: always taking the smallest-id next hop collapses every
//! axis-aligned staircase onto an L-shaped corner path, so a triangle with
//! two axis legs would get thinness 0 from the enumeration order rather than
//! from the metric. Edges here descend the distance field toward the
//! larger-id endpoint and break ties through a fixed seeded permutation of
//! the vertex ids, which spreads staircases across their feasible corridor.
//! The tie-break seed is a module constant and part of the deterministic
//! contract: rerunning any scan reproduces the same triangles bit for bit,
//! and the same unordered corner pair always receives the same edge, which
//! makes thinness invariant under corner permutations.
//!
//! # From fatness to a surrounded ball
//!
//! A triangle of thinness δ > R yields a ball separated from the unbounded
//! face: delete the union of the three edges, flood inward from the outer
//! face, and take the deepest vertex of any complement component the flood
//! cannot reach. The returned radius stays strictly below that vertex's
//! clearance, so the ball avoids the edge union, and the certificate
//! re-checks separation through [`crate::space::surrounds`] on the
//! triangle's closed boundary walk.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::space::{
    seeded_order, surrounds, DistanceCache, Geodesic, Loop, MetricSurface, Vertex,
};

/// Seed of the shared tie-break permutation used by [`pair_geodesic`].
/// Changing it re-freezes every derived thinness value, so it is fixed once.
const TIE_BREAK_SEED: u64 = 97;

/// Tie-break rank per vertex: position in a seeded permutation of the ids.
fn tie_ranks(n: usize) -> Vec<usize> {
    let order = seeded_order(n, TIE_BREAK_SEED);
    let mut rank = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    rank
}

// === Deterministic pair geodesics ==========================================

/// The module's deterministic geodesic between `u` and `v`.
///
/// The walk is computed from the smaller-id endpoint by descending the
/// distance field of the larger-id endpoint, choosing among feasible next
/// hops by the shared tie-break rank; the result is then oriented to start
/// at `u`. Both argument orders therefore traverse the same vertex set.
///
/// # Errors
///
/// - [`Error::NonGeodesicSpace`] on override-metric spaces.
/// - [`Error::UnknownVertex`] if either endpoint is out of range.
pub fn pair_geodesic(space: &MetricSurface, u: Vertex, v: Vertex) -> Result<Geodesic> {
    let ranks = tie_ranks(space.vertex_count());
    let mut cache = DistanceCache::new();
    pair_geodesic_inner(space, u, v, &mut cache, &ranks)
}

fn pair_geodesic_inner(
    space: &MetricSurface,
    u: Vertex,
    v: Vertex,
    cache: &mut DistanceCache,
    ranks: &[usize],
) -> Result<Geodesic> {
    if !space.is_geodesic() {
        return Err(Error::NonGeodesicSpace);
    }
    if u >= space.vertex_count() || v >= space.vertex_count() {
        return Err(Error::UnknownVertex);
    }
    if u == v {
        return Geodesic::from_walk(space, vec![u]);
    }
    let (lo, hi) = if u < v { (u, v) } else { (v, u) };
    let dist = cache.distances(space, hi)?;
    let mut waypoints = vec![lo];
    let mut cur = lo;
    while cur != hi {
        // Next hop: any neighbor exactly one edge closer to `hi`, smallest
        // tie-break rank first. Exact float equality is intentional, as in
        // [`MetricSurface::geodesic`]: Dijkstra assigned dist[cur] as
        // len + dist[w] for at least one neighbor.
        let mut next: Option<Vertex> = None;
        for (w, len) in space.neighbors(cur) {
            if len + dist[w] == dist[cur] && next.map_or(true, |b| ranks[w] < ranks[b]) {
                next = Some(w);
            }
        }
        let next = next.expect("shortest-path successor must exist");
        waypoints.push(next);
        cur = next;
    }
    if u > v {
        waypoints.reverse();
    }
    Geodesic::from_walk(space, waypoints)
}

// === Triangles =============================================================

/// A geodesic triangle: three corners, the three deterministic edges
/// between them, and the thinness value computed at construction.
#[derive(Clone, Debug)]
pub struct Triangle {
    corners: [Vertex; 3],
    edges: [Geodesic; 3],
    delta: f64,
}

impl Triangle {
    /// Builds the triangle on corners `a`, `b`, `c` (repeats allowed; a
    /// repeated corner degenerates the triangle and its thinness to 0).
    ///
    /// # Errors
    ///
    /// - [`Error::NonGeodesicSpace`] on override-metric spaces.
    /// - [`Error::UnknownVertex`] if a corner is out of range.
    pub fn new(space: &MetricSurface, a: Vertex, b: Vertex, c: Vertex) -> Result<Self> {
        let ranks = tie_ranks(space.vertex_count());
        let mut cache = DistanceCache::new();
        Self::with_cache(space, a, b, c, &mut cache, &ranks)
    }

    fn with_cache(
        space: &MetricSurface,
        a: Vertex,
        b: Vertex,
        c: Vertex,
        cache: &mut DistanceCache,
        ranks: &[usize],
    ) -> Result<Self> {
        let edges = [
            pair_geodesic_inner(space, a, b, cache, ranks)?,
            pair_geodesic_inner(space, b, c, cache, ranks)?,
            pair_geodesic_inner(space, c, a, cache, ranks)?,
        ];
        let delta = thinness_of(space, &edges);
        Ok(Triangle { corners: [a, b, c], edges, delta })
    }

    /// The corners in construction order.
    pub fn corners(&self) -> [Vertex; 3] {
        self.corners
    }

    /// The edges, oriented corner-to-corner: `[a→b, b→c, c→a]`.
    pub fn edges(&self) -> &[Geodesic; 3] {
        &self.edges
    }

    /// Thinness: the least δ such that each edge lies in the closed
    /// δ-neighborhood of the union of the other two, evaluated exactly over
    /// waypoint vertices.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Total length of the three edges.
    pub fn perimeter(&self) -> f64 {
        self.edges.iter().map(|e| e.length()).sum()
    }

    /// The distinct vertices on the edge union, sorted ascending.
    pub fn vertex_set(&self) -> Vec<Vertex> {
        let mut vs = Vec::new();
        for e in &self.edges {
            vs.extend_from_slice(e.waypoints());
        }
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Cyclic boundary walk `a → b → c → a` with junction corners and the
    /// final repeat of `a` dropped, ready for [`Loop::from_walk`].
    fn closed_walk(&self) -> Vec<Vertex> {
        let mut walk: Vec<Vertex> = self.edges[0].waypoints().to_vec();
        for e in &self.edges[1..] {
            walk.extend_from_slice(&e.waypoints()[1..]);
        }
        walk.pop();
        walk
    }
}

/// Recomputes a triangle's thinness from its stored edges.
///
/// # Errors
///
/// - [`Error::UnknownVertex`] if the triangle does not live in `space`.
pub fn thinness(space: &MetricSurface, triangle: &Triangle) -> Result<f64> {
    for e in triangle.edges() {
        for &w in e.waypoints() {
            if w >= space.vertex_count() {
                return Err(Error::UnknownVertex);
            }
        }
    }
    Ok(thinness_of(space, &triangle.edges))
}

fn thinness_of(space: &MetricSurface, edges: &[Geodesic; 3]) -> f64 {
    let mut delta = 0.0f64;
    for i in 0..3 {
        let mut others: Vec<Vertex> = Vec::new();
        others.extend_from_slice(edges[(i + 1) % 3].waypoints());
        others.extend_from_slice(edges[(i + 2) % 3].waypoints());
        others.sort_unstable();
        others.dedup();
        let dist = space.multi_source_distances(&others);
        for &w in edges[i].waypoints() {
            if dist[w] > delta {
                delta = dist[w];
            }
        }
    }
    delta
}

// === Fat-triangle scans ====================================================

/// How a scan covered its search space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScanCertificate {
    /// Every corner triple in the ball was examined (up to an early exit at
    /// the first fat triangle).
    Exhaustive,
    /// The stated number of seeded random triples was examined.
    Sampled(usize),
}

impl fmt::Display for ScanCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScanCertificate::Exhaustive => write!(f, "exhaustive"),
            ScanCertificate::Sampled(n) => write!(f, "sampled({n})"),
        }
    }
}

/// Result of one fat-triangle scan.
#[derive(Clone, Debug)]
pub struct ScanOutcome {
    /// The first triangle found with thinness above the threshold, if any.
    pub triangle: Option<Triangle>,
    /// Coverage certificate for the search.
    pub certificate: ScanCertificate,
    /// The fatness threshold `r / m`.
    pub threshold: f64,
    /// Largest thinness seen among examined triples (0 when none).
    pub max_delta_seen: f64,
    /// Number of triples actually examined.
    pub triples_examined: usize,
    /// Seed used for the sampled branch.
    pub seed: u64,
}

fn triple_count(n: usize) -> u128 {
    if n < 3 {
        0
    } else {
        let n = n as u128;
        n * (n - 1) * (n - 2) / 6
    }
}

/// [`fat_triangle_scan_seeded`] with seed 0.
pub fn fat_triangle_scan(
    space: &MetricSurface,
    center: Vertex,
    r: f64,
    m: f64,
    budget: usize,
) -> Result<ScanOutcome> {
    fat_triangle_scan_seeded(space, center, r, m, budget, 0)
}

/// Searches `ball(center, r)` for a triangle with thinness strictly above
/// `r / m`. When the ball holds at most `budget` corner triples they are
/// enumerated exhaustively in ascending lexicographic order; otherwise
/// `budget` seeded random triples are drawn. Either way the first fat
/// triangle found is returned, so reruns reproduce the same witness.
///
/// The scanned region's own resolution — the coarsest edge with both
/// endpoints in the ball — acts as a floor on the fatness cut: thinness at
/// or below one local mesh step is staircase parallax of the waypoint
/// evaluation, not curvature, so a triangle only counts as fat when its
/// thinness also clears that floor. Below-resolution balls therefore always
/// scan thin, and on spaces with strongly varying edge lengths the floor
/// adapts to the neighborhood actually scanned.
///
/// # Errors
///
/// - [`Error::NonGeodesicSpace`] on override-metric spaces.
/// - [`Error::BadParameters`] unless `m > 1` and `budget ≥ 1`.
/// - [`Error::UnknownVertex`] / [`Error::NegativeRadius`] for a malformed
///   ball query.
pub fn fat_triangle_scan_seeded(
    space: &MetricSurface,
    center: Vertex,
    r: f64,
    m: f64,
    budget: usize,
    seed: u64,
) -> Result<ScanOutcome> {
    if !space.is_geodesic() {
        return Err(Error::NonGeodesicSpace);
    }
    if !(m > 1.0) || !m.is_finite() || budget == 0 {
        return Err(Error::BadParameters);
    }
    let ball = space.ball(center, r)?;
    let threshold = r / m;
    let mut local_mesh = 0.0f64;
    for &(u, v, len) in space.edges() {
        if len > local_mesh
            && ball.binary_search(&u).is_ok()
            && ball.binary_search(&v).is_ok()
        {
            local_mesh = len;
        }
    }
    let cut = if threshold > local_mesh { threshold } else { local_mesh };
    let ranks = tie_ranks(space.vertex_count());
    let mut cache = DistanceCache::new();
    let mut max_seen = 0.0f64;
    let mut examined = 0usize;

    let consider = |t: Triangle,
                        examined: usize,
                        max_seen: &mut f64,
                        certificate: ScanCertificate|
     -> Option<ScanOutcome> {
        if t.delta > *max_seen {
            *max_seen = t.delta;
        }
        if t.delta > cut {
            Some(ScanOutcome {
                triangle: Some(t),
                certificate,
                threshold,
                max_delta_seen: *max_seen,
                triples_examined: examined,
                seed,
            })
        } else {
            None
        }
    };

    if triple_count(ball.len()) <= budget as u128 {
        for i in 0..ball.len() {
            for j in (i + 1)..ball.len() {
                for k in (j + 1)..ball.len() {
                    let t = Triangle::with_cache(
                        space, ball[i], ball[j], ball[k], &mut cache, &ranks,
                    )?;
                    examined += 1;
                    if let Some(hit) =
                        consider(t, examined, &mut max_seen, ScanCertificate::Exhaustive)
                    {
                        return Ok(hit);
                    }
                }
            }
        }
        Ok(ScanOutcome {
            triangle: None,
            certificate: ScanCertificate::Exhaustive,
            threshold,
            max_delta_seen: max_seen,
            triples_examined: examined,
            seed,
        })
    } else {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = ball.len() as u64;
        for _ in 0..budget {
            let (i, j, k) = loop {
                let i = (rng.next_u64() % n) as usize;
                let j = (rng.next_u64() % n) as usize;
                let k = (rng.next_u64() % n) as usize;
                if i != j && j != k && i != k {
                    break (i, j, k);
                }
            };
            let mut ids = [ball[i], ball[j], ball[k]];
            ids.sort_unstable();
            let t = Triangle::with_cache(space, ids[0], ids[1], ids[2], &mut cache, &ranks)?;
            examined += 1;
            if let Some(hit) =
                consider(t, examined, &mut max_seen, ScanCertificate::Sampled(examined))
            {
                return Ok(hit);
            }
        }
        Ok(ScanOutcome {
            triangle: None,
            certificate: ScanCertificate::Sampled(examined),
            threshold,
            max_delta_seen: max_seen,
            triples_examined: examined,
            seed,
        })
    }
}

// === Four-point defect =====================================================

/// Worst four-point hyperbolicity defect over the given quadruples: for each
/// quadruple the three pairwise distance sums are formed and the defect is
/// half the gap between the largest and the second largest. Trees score 0
/// exactly; a unit square scores 1.
///
/// # Errors
///
/// - [`Error::EmptyDomain`] on an empty quadruple list.
/// - [`Error::DegenerateCorners`] if a quadruple repeats a vertex.
/// - [`Error::UnknownVertex`] for out-of-range vertices.
pub fn four_point_delta(space: &MetricSurface, quadruples: &[[Vertex; 4]]) -> Result<f64> {
    if quadruples.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let mut cache = DistanceCache::new();
    let mut worst = 0.0f64;
    for q in quadruples {
        for &v in q {
            if v >= space.vertex_count() {
                return Err(Error::UnknownVertex);
            }
        }
        let mut sorted = *q;
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DegenerateCorners);
        }
        let mut sums = [
            cache.distance(space, q[0], q[1])? + cache.distance(space, q[2], q[3])?,
            cache.distance(space, q[0], q[2])? + cache.distance(space, q[1], q[3])?,
            cache.distance(space, q[0], q[3])? + cache.distance(space, q[1], q[2])?,
        ];
        sums.sort_unstable_by(f64::total_cmp);
        let defect = (sums[2] - sums[1]) / 2.0;
        if defect > worst {
            worst = defect;
        }
    }
    Ok(worst)
}

/// Seeded distinct 4-subsets of `vertices`, each sorted ascending, for
/// feeding [`four_point_delta`]. Returns an empty list when fewer than four
/// vertices are available.
pub fn quadruple_samples(vertices: &[Vertex], count: usize, seed: u64) -> Vec<[Vertex; 4]> {
    if vertices.len() < 4 {
        return Vec::new();
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n = vertices.len() as u64;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let picked = loop {
            let mut idx = [0usize; 4];
            for slot in &mut idx {
                *slot = (rng.next_u64() % n) as usize;
            }
            idx.sort_unstable();
            if idx.windows(2).all(|w| w[0] != w[1]) {
                break idx;
            }
        };
        out.push([
            vertices[picked[0]],
            vertices[picked[1]],
            vertices[picked[2]],
            vertices[picked[3]],
        ]);
    }
    out
}

// === Surrounded balls ======================================================

/// A ball certified to be separated from the unbounded face by a triangle.
#[derive(Clone, Debug)]
pub struct SurroundedBall {
    /// Ball center: the deepest vertex of a bounded complement component.
    pub center: Vertex,
    /// Ball radius, strictly below the center's clearance.
    pub radius: f64,
    /// The ball's vertices, sorted ascending.
    pub members: Vec<Vertex>,
    /// Distance from the center to the triangle's edge union.
    pub clearance: f64,
    /// Size of the bounded complement component holding the center.
    pub component_size: usize,
    /// Certificate: no ball vertex lies on the edge union.
    pub disjoint: bool,
    /// Certificate: deleting the triangle's boundary walk separates the
    /// ball from every outer-face vertex.
    pub surrounded: bool,
}

/// Extracts a surrounded ball from a triangle of thinness above `big_r`.
///
/// The complement of the edge union is flooded from the outer face; any
/// unreached component is bounded. The ball sits at the deepest vertex of
/// the bounded part (ties toward the smallest id) with radius equal to that
/// vertex's clearance minus half the shortest edge, which keeps the closed
/// ball strictly inside its component. On discretizations with mesh well
/// below the thinness, the clearance — and hence the radius — comes out at
/// least `big_r / 10`.
///
/// # Errors
///
/// - [`Error::NoEmbedding`] without a rotation system.
/// - [`Error::NegativeRadius`] for a negative or non-finite `big_r`.
/// - [`Error::NotFatEnough`] unless `triangle.delta() > big_r`.
/// - [`Error::NoBoundedComponent`] when the discretization is too coarse to
///   leave any vertex strictly inside the triangle.
pub fn surrounded_ball_from_fat_triangle(
    space: &MetricSurface,
    triangle: &Triangle,
    big_r: f64,
) -> Result<SurroundedBall> {
    let emb = space.embedding().ok_or(Error::NoEmbedding)?;
    if big_r < 0.0 || !big_r.is_finite() {
        return Err(Error::NegativeRadius);
    }
    let n = space.vertex_count();
    for e in triangle.edges() {
        for &w in e.waypoints() {
            if w >= n {
                return Err(Error::UnknownVertex);
            }
        }
    }
    if !(triangle.delta() > big_r) {
        return Err(Error::NotFatEnough);
    }

    let edge_set = triangle.vertex_set();
    let mut on_edges = vec![false; n];
    for &v in &edge_set {
        on_edges[v] = true;
    }

    // Complement vertices that reach the outer face without touching the
    // triangle; whatever the flood misses is bounded.
    let mut outside = vec![false; n];
    let mut stack: Vec<Vertex> = Vec::new();
    for &v in emb.outer_vertices() {
        if !on_edges[v] && !outside[v] {
            outside[v] = true;
            stack.push(v);
        }
    }
    while let Some(v) = stack.pop() {
        for (w, _) in space.neighbors(v) {
            if !on_edges[w] && !outside[w] {
                outside[w] = true;
                stack.push(w);
            }
        }
    }

    let depth = space.multi_source_distances(&edge_set);
    let mut best: Option<Vertex> = None;
    for v in 0..n {
        if !on_edges[v] && !outside[v] && best.map_or(true, |b| depth[v] > depth[b]) {
            best = Some(v);
        }
    }
    let center = best.ok_or(Error::NoBoundedComponent)?;
    let clearance = depth[center];
    let radius = clearance - 0.5 * space.min_edge_len();
    let members = space.ball(center, radius)?;

    let mut comp_seen = vec![false; n];
    comp_seen[center] = true;
    let mut component_size = 1usize;
    stack.push(center);
    while let Some(v) = stack.pop() {
        for (w, _) in space.neighbors(v) {
            if !on_edges[w] && !comp_seen[w] {
                comp_seen[w] = true;
                component_size += 1;
                stack.push(w);
            }
        }
    }

    let disjoint = members.iter().all(|&v| !on_edges[v]);
    let surrounded = match Loop::from_walk(space, triangle.closed_walk()) {
        Ok(lp) => surrounds(space, &lp, &members)?,
        // Degenerate boundary walk (overlapping edges): fall back to the
        // flood argument — every member must have escaped the outer flood.
        Err(_) => members.iter().all(|&v| !on_edges[v] && !outside[v]),
    };

    Ok(SurroundedBall {
        center,
        radius,
        members,
        clearance,
        component_size,
        disjoint,
        surrounded,
    })
}

// === Dichotomy scan ========================================================

/// Per-radius classification of a scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TriangleClass {
    /// A triangle with thinness above `r / m` was found.
    Fat,
    /// No such triangle among the examined triples.
    Thin,
}

/// One radius of a [`dichotomy_scan`].
#[derive(Clone, Debug)]
pub struct DichotomyRow {
    /// Scan radius.
    pub radius: f64,
    /// Fatness threshold `radius / m`.
    pub threshold: f64,
    /// Classification at this radius.
    pub class: TriangleClass,
    /// Witness triangle when fat.
    pub witness: Option<Triangle>,
    /// Coverage certificate of the underlying scan.
    pub certificate: ScanCertificate,
    /// Largest thinness seen among examined triples.
    pub max_delta_seen: f64,
}

impl DichotomyRow {
    /// Witness thinness relative to the scan radius, when fat.
    pub fn delta_ratio(&self) -> Option<f64> {
        self.witness.as_ref().map(|t| t.delta() / self.radius)
    }
}

/// Scale-by-scale fat/thin classification around one center.
#[derive(Clone, Debug)]
pub struct DichotomyReport {
    /// Scan center.
    pub center: Vertex,
    /// Fatness divisor.
    pub m: f64,
    /// Per-radius triple budget.
    pub budget: usize,
    /// Base seed; radius `i` scans with `seed + i`.
    pub seed: u64,
    /// One row per requested radius, in input order.
    pub rows: Vec<DichotomyRow>,
}

impl DichotomyReport {
    /// True when every radius classified fat.
    pub fn all_fat(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.class == TriangleClass::Fat)
    }

    /// True when every radius classified thin.
    pub fn all_thin(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.class == TriangleClass::Thin)
    }
}

/// [`dichotomy_scan_seeded`] with seed 0.
pub fn dichotomy_scan(
    space: &MetricSurface,
    center: Vertex,
    radii: &[f64],
    m: f64,
    budget: usize,
) -> Result<DichotomyReport> {
    dichotomy_scan_seeded(space, center, radii, m, budget, 0)
}

/// Runs [`fat_triangle_scan_seeded`] at every radius and classifies each
/// scale fat or thin. Radius `i` uses seed `seed + i` so rows stay
/// independent but reproducible.
///
/// # Errors
///
/// - [`Error::InsufficientRadii`] on an empty radius list.
/// - Any error of the underlying scans.
pub fn dichotomy_scan_seeded(
    space: &MetricSurface,
    center: Vertex,
    radii: &[f64],
    m: f64,
    budget: usize,
    seed: u64,
) -> Result<DichotomyReport> {
    if radii.is_empty() {
        return Err(Error::InsufficientRadii);
    }
    let mut rows = Vec::with_capacity(radii.len());
    for (i, &r) in radii.iter().enumerate() {
        let outcome =
            fat_triangle_scan_seeded(space, center, r, m, budget, seed.wrapping_add(i as u64))?;
        let class = if outcome.triangle.is_some() {
            TriangleClass::Fat
        } else {
            TriangleClass::Thin
        };
        rows.push(DichotomyRow {
            radius: r,
            threshold: outcome.threshold,
            class,
            witness: outcome.triangle,
            certificate: outcome.certificate,
            max_delta_seen: outcome.max_delta_seen,
        });
    }
    Ok(DichotomyReport { center, m, budget, seed, rows })
}
