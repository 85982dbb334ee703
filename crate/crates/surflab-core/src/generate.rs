//! Constructors for the standard test spaces and their map suites.
//!
//! Grid families (euclidean, conformal, hyperbolic) come with a full
//! counterclockwise rotation system and the boundary cycle as outer face, so
//! every surface diagnostic applies. Trees carry no rotation system (no
//! bounded faces exist), and snowflake grids replace the path metric with a
//! power of it, which flags them non-geodesic; both serve as negative
//! controls.
//!
//! Construction is deterministic. Each constructor returns a
//! [`GeneratedSpace`] wrapping the [`MetricSurface`] together with its
//! [`Family`] tag; family-aware helpers ([`map_suite`], [`cutting_family`])
//! refuse families they do not support.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::space::{
    certify_bilip, BiLipMap, DistanceCache, MetricSurface, RegionSpec, Vertex,
};

/// Hard cap on generated vertex counts; guards runaway tree parameters.
const MAX_VERTICES: usize = 1_000_000;

// === Families ==============================================================

/// Which constructor produced a space, with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// `n x n` unit-structure grid, all edges length `spacing`.
    EuclideanGrid { n: usize, spacing: f64 },
    /// Grid with per-vertex conformal factors bounded by `factor_bound`.
    ConformalGrid { n: usize, spacing: f64, factor_bound: f64 },
    /// Conformal grid with the disk-model weight `2/(1 - (rho/rho_max)^2)`.
    HyperbolicGrid { n: usize, scale: f64 },
    /// Complete rooted tree, all edges length `spacing`.
    Tree { branching: usize, depth: usize, spacing: f64 },
    /// Grid vertex set with the path metric raised to the power `theta`.
    SnowflakeGrid { n: usize, spacing: f64, theta: f64 },
}

impl Family {
    /// Grid side length for the three grid families, `None` otherwise.
    pub fn grid_size(&self) -> Option<usize> {
        match *self {
            Family::EuclideanGrid { n, .. }
            | Family::ConformalGrid { n, .. }
            | Family::HyperbolicGrid { n, .. } => Some(n),
            _ => None,
        }
    }
}

/// A constructed space together with its family tag.
#[derive(Clone, Debug)]
pub struct GeneratedSpace {
    space: MetricSurface,
    family: Family,
}

impl GeneratedSpace {
    /// The underlying space.
    pub fn space(&self) -> &MetricSurface {
        &self.space
    }

    /// The family tag.
    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Consumes the wrapper, returning the bare space.
    pub fn into_space(self) -> MetricSurface {
        self.space
    }
}

impl core::ops::Deref for GeneratedSpace {
    type Target = MetricSurface;
    fn deref(&self) -> &MetricSurface {
        &self.space
    }
}

// === Grid layout ===========================================================

/// Coordinate bookkeeping for `n x n` grids: vertex id `y*n + x` with `x`
/// rightward and `y` upward. Ids therefore sort bottom row first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridLayout {
    n: usize,
}

impl GridLayout {
    /// Layout for an `n x n` grid.
    pub fn new(n: usize) -> Self {
        GridLayout { n }
    }

    /// Side length.
    pub fn size(&self) -> usize {
        self.n
    }

    /// Vertex id at `(x, y)`.
    pub fn id(&self, x: usize, y: usize) -> Vertex {
        debug_assert!(x < self.n && y < self.n);
        y * self.n + x
    }

    /// Coordinates of a vertex id.
    pub fn xy(&self, v: Vertex) -> (usize, usize) {
        (v % self.n, v / self.n)
    }

    /// True when signed coordinates land inside the grid.
    pub fn contains(&self, x: isize, y: isize) -> bool {
        x >= 0 && y >= 0 && (x as usize) < self.n && (y as usize) < self.n
    }

    /// Vertex id of the center (exact for odd `n`).
    pub fn center(&self) -> Vertex {
        self.id(self.n / 2, self.n / 2)
    }
}

/// Builds the shared grid graph: 4-neighbor edges with lengths from
/// `edge_len`, counterclockwise rotations (east, north, west, south) and the
/// boundary cycle as outer face.
fn build_grid(
    n: usize,
    origin: Vertex,
    mut edge_len: impl FnMut(Vertex, Vertex) -> f64,
) -> Result<MetricSurface> {
    let g = GridLayout::new(n);
    let mut edges = Vec::new();
    for y in 0..n {
        for x in 0..n {
            if x + 1 < n {
                let (u, v) = (g.id(x, y), g.id(x + 1, y));
                edges.push((u, v, edge_len(u, v)));
            }
            if y + 1 < n {
                let (u, v) = (g.id(x, y), g.id(x, y + 1));
                edges.push((u, v, edge_len(u, v)));
            }
        }
    }
    let mut rotation = Vec::with_capacity(n * n);
    for y in 0..n {
        for x in 0..n {
            let mut order = Vec::new();
            // Counterclockwise from east.
            for (dx, dy) in [(1isize, 0isize), (0, 1), (-1, 0), (0, -1)] {
                let (nx, ny) = (x as isize + dx, y as isize + dy);
                if g.contains(nx, ny) {
                    order.push(g.id(nx as usize, ny as usize));
                }
            }
            rotation.push(order);
        }
    }
    let mut outer = Vec::new();
    for x in 0..n - 1 {
        outer.push((g.id(x, 0), g.id(x + 1, 0)));
        outer.push((g.id(x, n - 1), g.id(x + 1, n - 1)));
    }
    for y in 0..n - 1 {
        outer.push((g.id(0, y), g.id(0, y + 1)));
        outer.push((g.id(n - 1, y), g.id(n - 1, y + 1)));
    }
    MetricSurface::build(n * n, &edges, Some(&rotation), Some(&outer), origin)
}

// === Constructors ==========================================================

/// The `n x n` grid with all edges of length `s` and origin at the center.
/// Its path metric is `s` times the taxicab distance on coordinates.
pub fn euclidean_grid(n: usize, s: f64) -> Result<GeneratedSpace> {
    if n < 3 || !(s > 0.0) || !s.is_finite() || n * n > MAX_VERTICES {
        return Err(Error::BadParameters);
    }
    let space = build_grid(n, GridLayout::new(n).center(), |_, _| s)?;
    Ok(GeneratedSpace { space, family: Family::EuclideanGrid { n, spacing: s } })
}

/// Grid whose edge `(u, v)` has length `s * (factor(u) + factor(v)) / 2` for
/// a per-vertex conformal factor given on coordinates.
///
/// The factor must stay within `[1/bound, bound]`; larger excursions are
/// rejected with [`Error::UnboundedFactor`]. The resulting metric is then
/// `bound`-biLipschitz to the euclidean grid's.
pub fn conformal_grid(
    n: usize,
    s: f64,
    factor: impl Fn(usize, usize) -> f64,
    bound: f64,
) -> Result<GeneratedSpace> {
    if n < 3 || !(s > 0.0) || !s.is_finite() || !(bound >= 1.0) || n * n > MAX_VERTICES {
        return Err(Error::BadParameters);
    }
    let g = GridLayout::new(n);
    let mut factors = Vec::with_capacity(n * n);
    for v in 0..n * n {
        let (x, y) = g.xy(v);
        let f = factor(x, y);
        if !f.is_finite() || f < 1.0 / bound || f > bound {
            return Err(Error::UnboundedFactor);
        }
        factors.push(f);
    }
    let space = build_grid(n, g.center(), |u, v| s * (factors[u] + factors[v]) / 2.0)?;
    Ok(GeneratedSpace {
        space,
        family: Family::ConformalGrid { n, spacing: s, factor_bound: bound },
    })
}

/// Truncation fraction for the hyperbolic weight: beyond 0.9 of the maximal
/// coordinate radius the factor is held at its value there.
const HYPERBOLIC_TRUNCATION: f64 = 0.9;

/// Per-vertex weight of [`hyperbolic_grid`] at relative radius `t = rho/rho_max`.
pub fn hyperbolic_factor(t: f64) -> f64 {
    let t = if t > HYPERBOLIC_TRUNCATION { HYPERBOLIC_TRUNCATION } else { t };
    2.0 / (1.0 - t * t)
}

/// Disk-model grid: conformal factor `2/(1 - (rho/rho_max)^2)` truncated at
/// relative radius 0.9, where `rho` is the Euclidean radius of the grid
/// coordinate from the center. Edge spacing equals `scale`.
pub fn hyperbolic_grid(n: usize, scale: f64) -> Result<GeneratedSpace> {
    if n < 3 || !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::BadParameters);
    }
    let c = (n - 1) as f64 / 2.0;
    let rho_max = crate::fmath::sqrt(2.0 * c * c);
    let bound = hyperbolic_factor(HYPERBOLIC_TRUNCATION);
    let gen = conformal_grid(
        n,
        scale,
        |x, y| {
            let (dx, dy) = (x as f64 - c, y as f64 - c);
            hyperbolic_factor(crate::fmath::sqrt(dx * dx + dy * dy) / rho_max)
        },
        bound,
    )?;
    Ok(GeneratedSpace {
        space: gen.space,
        family: Family::HyperbolicGrid { n, scale },
    })
}

/// Complete rooted tree: `branching` children per node through `depth`
/// levels, all edges length `s`, origin at the root, no rotation system.
pub fn tree(branching: usize, depth: usize, s: f64) -> Result<GeneratedSpace> {
    if branching < 2 || depth < 1 || !(s > 0.0) || !s.is_finite() {
        return Err(Error::BadParameters);
    }
    let mut count = 1usize;
    let mut level = 1usize;
    for _ in 0..depth {
        level = level.checked_mul(branching).ok_or(Error::BadParameters)?;
        count = count.checked_add(level).ok_or(Error::BadParameters)?;
        if count > MAX_VERTICES {
            return Err(Error::BadParameters);
        }
    }
    // Ids in breadth-first order: children of v are consecutive.
    let mut edges = Vec::with_capacity(count - 1);
    let mut next = 1usize;
    let mut frontier = vec![0usize];
    for _ in 0..depth {
        let mut new_frontier = Vec::with_capacity(frontier.len() * branching);
        for &v in &frontier {
            for _ in 0..branching {
                edges.push((v, next, s));
                new_frontier.push(next);
                next += 1;
            }
        }
        frontier = new_frontier;
    }
    let space = MetricSurface::build(count, &edges, None, None, 0)?;
    Ok(GeneratedSpace { space, family: Family::Tree { branching, depth, spacing: s } })
}

/// Grid vertex set with distance `d^theta` for `theta` strictly between 0
/// and 1 (a snowflake of the grid metric). The result carries a lazy power
/// override metric and is flagged non-geodesic, so surface-only
/// diagnostics refuse it.
pub fn snowflake_grid(n: usize, s: f64, theta: f64) -> Result<GeneratedSpace> {
    let base = euclidean_grid(n, s)?;
    let space = base.into_space().with_power_metric(theta)?;
    Ok(GeneratedSpace { space, family: Family::SnowflakeGrid { n, spacing: s, theta } })
}

// === Map suites ============================================================

/// Which suite of self-maps to construct.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKind {
    /// Every grid translation keeping the domain inside the grid.
    Translations,
    /// Rotations by 90, 180 and 270 degrees about the grid center.
    Rotations,
    /// The shears `(x, y) -> (x, y +- floor(x/2))`, domain-restricted to
    /// where the image stays in the grid.
    Shears,
}

/// Builds a suite of certified maps with domain `region` on a grid-family
/// space. Translations and rotations are grid isometries (certified constant
/// 1 on euclidean grids); shears come out with their measured constants.
///
/// Trees and snowflakes are refused with [`Error::UnsupportedFamily`].
pub fn map_suite(
    gen: &GeneratedSpace,
    kind: MapKind,
    region: &RegionSpec,
) -> Result<Vec<BiLipMap>> {
    let n = gen.family().grid_size().ok_or(Error::UnsupportedFamily)?;
    let g = GridLayout::new(n);
    let domain = region.vertices(gen.space())?;
    let mut maps = Vec::new();
    match kind {
        MapKind::Translations => {
            let (mut x0, mut x1, mut y0, mut y1) = (n, 0usize, n, 0usize);
            for &v in &domain {
                let (x, y) = g.xy(v);
                x0 = x0.min(x);
                x1 = x1.max(x);
                y0 = y0.min(y);
                y1 = y1.max(y);
            }
            for dy in -(y0 as isize)..=(n - 1 - y1) as isize {
                for dx in -(x0 as isize)..=(n - 1 - x1) as isize {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    let assignment: Vec<(Vertex, Vertex)> = domain
                        .iter()
                        .map(|&v| {
                            let (x, y) = g.xy(v);
                            let nx = (x as isize + dx) as usize;
                            let ny = (y as isize + dy) as usize;
                            (v, g.id(nx, ny))
                        })
                        .collect();
                    maps.push(certify_bilip(gen.space(), &assignment)?);
                }
            }
        }
        MapKind::Rotations => {
            // 90 degrees counterclockwise about the grid center:
            // (x, y) -> (n-1-y, x); iterate for 180 and 270.
            for turns in 1..4usize {
                let assignment: Vec<(Vertex, Vertex)> = domain
                    .iter()
                    .map(|&v| {
                        let (mut x, mut y) = g.xy(v);
                        for _ in 0..turns {
                            let (nx, ny) = (n - 1 - y, x);
                            x = nx;
                            y = ny;
                        }
                        (v, g.id(x, y))
                    })
                    .collect();
                maps.push(certify_bilip(gen.space(), &assignment)?);
            }
        }
        MapKind::Shears => {
            for sign in [1isize, -1] {
                let assignment: Vec<(Vertex, Vertex)> = domain
                    .iter()
                    .filter_map(|&v| {
                        let (x, y) = g.xy(v);
                        let ny = y as isize + sign * (x / 2) as isize;
                        if g.contains(x as isize, ny) {
                            Some((v, g.id(x, ny as usize)))
                        } else {
                            None
                        }
                    })
                    .collect();
                if !assignment.is_empty() {
                    maps.push(certify_bilip(gen.space(), &assignment)?);
                }
            }
            if maps.is_empty() {
                return Err(Error::EmptyDomain);
            }
        }
    }
    Ok(maps)
}

// === Cutting curves ========================================================

/// One certified straight curve through every region vertex, entering and
/// leaving the region. The constant `K` certifies each curve as a
/// biLipschitz map from its arc-length parameter into the space.
#[derive(Clone, Debug)]
pub struct CuttingFamily {
    curves: BTreeMap<Vertex, Vec<Vertex>>,
    constant: f64,
}

impl CuttingFamily {
    /// The curve through `p`, if `p` is a region vertex.
    pub fn curve_through(&self, p: Vertex) -> Option<&[Vertex]> {
        self.curves.get(&p).map(|c| c.as_slice())
    }

    /// Certified arc-length biLipschitz constant over all curves.
    pub fn constant(&self) -> f64 {
        self.constant
    }

    /// Number of (vertex, curve) entries.
    pub fn len(&self) -> usize {
        self.curves.len()
    }

    /// True when no curves were produced (never returned by the builder).
    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    /// Iterates `(vertex, curve)` entries in vertex order.
    pub fn iter(&self) -> impl Iterator<Item = (Vertex, &[Vertex])> {
        self.curves.iter().map(|(&v, c)| (v, c.as_slice()))
    }
}

/// For each vertex of `region` on a grid space, the full grid row through it
/// (endpoints on the left/right boundary, hence outside the region).
///
/// `K` is certified per distinct row: the maximum over waypoint pairs of the
/// ratio between arc-length separation and space distance, both ways. On the
/// euclidean grid rows are geodesics and `K = 1` exactly.
pub fn cutting_family(gen: &GeneratedSpace, region: &RegionSpec) -> Result<CuttingFamily> {
    let n = gen.family().grid_size().ok_or(Error::UnsupportedFamily)?;
    let g = GridLayout::new(n);
    let domain = region.vertices(gen.space())?;
    let space = gen.space();

    let mut rows: Vec<usize> = domain.iter().map(|&v| g.xy(v).1).collect();
    rows.sort_unstable();
    rows.dedup();

    // Region vertices must not reach the row endpoints on the grid boundary.
    for &v in &domain {
        let (x, _) = g.xy(v);
        if x == 0 || x == n - 1 {
            return Err(Error::BadRegion);
        }
    }

    let mut constant = 1.0f64;
    let mut per_row: BTreeMap<usize, Vec<Vertex>> = BTreeMap::new();
    let mut cache = DistanceCache::new();
    for &y in &rows {
        let waypoints: Vec<Vertex> = (0..n).map(|x| g.id(x, y)).collect();
        // Cumulative arc length along the row.
        let mut arc = vec![0.0f64];
        for w in waypoints.windows(2) {
            let len = space.edge_between(w[0], w[1]).ok_or(Error::InvalidCurve)?;
            arc.push(arc.last().unwrap() + len);
        }
        for i in 0..waypoints.len() {
            let dists = cache.distances(space, waypoints[i])?;
            for j in (i + 1)..waypoints.len() {
                let a = arc[j] - arc[i];
                let d = dists[waypoints[j]];
                let ratio = (a / d).max(d / a);
                if ratio > constant {
                    constant = ratio;
                }
            }
        }
        per_row.insert(y, waypoints);
    }

    let mut curves = BTreeMap::new();
    for &v in &domain {
        let (_, y) = g.xy(v);
        curves.insert(v, per_row.get(&y).unwrap().clone());
    }
    Ok(CuttingFamily { curves, constant })
}
