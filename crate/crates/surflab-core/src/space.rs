//! The base metric layer: weighted graphs as discretized geodesic surfaces.
//!
//! A [`MetricSurface`] is an immutable edge-weighted connected graph with a
//! designated origin, an optional sphere embedding (rotation system plus
//! outer face), and optionally a *non-geodesic* override metric (a full
//! distance table replacing the path metric, used by snowflake spaces).
//!
//! Distances are closed-ball throughout: `ball(p, r)` collects vertices with
//! `d(p, v) <= r`. Geodesics are deterministic: among all equal-length
//! shortest paths the lexicographically-least waypoint sequence is chosen,
//! so repeated calls and downstream constructions agree bit-for-bit.

use alloc::collections::{BTreeMap, BinaryHeap};
use alloc::vec;
use alloc::vec::Vec;

use rand_core::{RngCore, SeedableRng};

use crate::embedding::Embedding;
use crate::error::{Error, Result};

/// Vertex identifier: an index into the space's vertex range.
pub type Vertex = usize;

/// Exact all-pairs certification cutoff for [`certify_bilip`].
const EXACT_CERTIFY_LIMIT: usize = 2000;
/// Pair budget used when certification falls back to sampling.
const SAMPLED_CERTIFY_PAIRS: usize = 200_000;

// === MetricSurface =========================================================

/// A finite discretization of a geodesic surface.
#[derive(Clone, Debug)]
pub struct MetricSurface {
    /// `(neighbor, edge length, edge index)` per vertex, in counterclockwise
    /// rotation order when an embedding is present, ascending id otherwise.
    adj: Vec<Vec<(Vertex, f64, usize)>>,
    /// Canonical undirected edge list.
    edges: Vec<(Vertex, Vertex, f64)>,
    origin: Vertex,
    /// Maximum edge length (the mesh scale of the discretization).
    mesh: f64,
    /// Minimum edge length.
    min_edge: f64,
    embedding: Option<Embedding>,
    /// Replacement for the path metric, if any.
    override_metric: Option<MetricOverride>,
}

/// A metric that replaces the path-induced one on a non-geodesic control
/// space.
#[derive(Clone, Debug)]
enum MetricOverride {
    /// Explicit symmetric all-pairs distance table.
    Table(Vec<Vec<f64>>),
    /// Power transform `d -> d^theta` of the path metric, computed on
    /// demand (a snowflake; storing all pairs would cost quartic memory in
    /// the grid side).
    Power(f64),
}

impl MetricSurface {
    /// Builds and validates a space.
    ///
    /// `rotation`, when present, must list every vertex's neighbors in
    /// counterclockwise cyclic order; the face trace must then be sphere-like
    /// (Euler characteristic 2). `outer_face`, when present, must match one
    /// traced face as an undirected edge set; when absent the face with the
    /// largest total boundary length is designated outer (ties break toward
    /// the earliest traced face).
    pub fn build(
        vertex_count: usize,
        edges: &[(Vertex, Vertex, f64)],
        rotation: Option<&[Vec<Vertex>]>,
        outer_face: Option<&[(Vertex, Vertex)]>,
        origin: Vertex,
    ) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::EmptySpace);
        }
        if origin >= vertex_count {
            return Err(Error::MissingOrigin);
        }

        let mut seen = BTreeMap::new();
        for (idx, &(u, v, len)) in edges.iter().enumerate() {
            if u >= vertex_count || v >= vertex_count || u == v {
                return Err(Error::InvalidEdge);
            }
            if !(len > 0.0) || !len.is_finite() {
                return Err(Error::NonPositiveEdge);
            }
            let key = (u.min(v), u.max(v));
            if seen.insert(key, idx).is_some() {
                return Err(Error::InvalidEdge);
            }
        }

        let mut adj: Vec<Vec<(Vertex, f64, usize)>> = vec![Vec::new(); vertex_count];
        for (idx, &(u, v, len)) in edges.iter().enumerate() {
            adj[u].push((v, len, idx));
            adj[v].push((u, len, idx));
        }

        match rotation {
            Some(rot) => {
                if rot.len() != vertex_count {
                    return Err(Error::InvalidEmbedding);
                }
                for (v, order) in rot.iter().enumerate() {
                    if order.len() != adj[v].len() {
                        return Err(Error::InvalidEmbedding);
                    }
                    let mut reordered = Vec::with_capacity(order.len());
                    for &w in order {
                        let entry = adj[v]
                            .iter()
                            .find(|&&(x, _, _)| x == w)
                            .copied()
                            .ok_or(Error::InvalidEmbedding)?;
                        if reordered.iter().any(|&(x, _, _): &(Vertex, f64, usize)| x == w) {
                            return Err(Error::InvalidEmbedding);
                        }
                        reordered.push(entry);
                    }
                    adj[v] = reordered;
                }
            }
            None => {
                for nbrs in adj.iter_mut() {
                    nbrs.sort_unstable_by_key(|&(w, _, _)| w);
                }
            }
        }

        // Connectivity.
        let mut reached = vec![false; vertex_count];
        let mut stack = vec![0usize];
        reached[0] = true;
        let mut count = 1usize;
        while let Some(v) = stack.pop() {
            for &(w, _, _) in &adj[v] {
                if !reached[w] {
                    reached[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        if count != vertex_count {
            return Err(Error::DisconnectedGraph);
        }

        let embedding = match rotation {
            Some(_) => {
                let mut emb = Embedding::trace(&adj, edges.len())?;
                let outer = match outer_face {
                    Some(walk) => {
                        let mut want: Vec<(Vertex, Vertex)> = walk
                            .iter()
                            .map(|&(u, v)| (u.min(v), u.max(v)))
                            .collect();
                        want.sort_unstable();
                        let mut found = None;
                        for f in 0..emb.face_count() {
                            let mut have: Vec<(Vertex, Vertex)> = emb
                                .face_darts(f)
                                .iter()
                                .map(|&(v, i)| {
                                    let w = adj[v][i].0;
                                    (v.min(w), v.max(w))
                                })
                                .collect();
                            have.sort_unstable();
                            have.dedup();
                            let mut want_d = want.clone();
                            want_d.dedup();
                            if have == want_d {
                                found = Some(f);
                                break;
                            }
                        }
                        found.ok_or(Error::InvalidEmbedding)?
                    }
                    None => {
                        // Longest total boundary length, earliest trace on ties.
                        let mut best = 0usize;
                        let mut best_len = f64::NEG_INFINITY;
                        for f in 0..emb.face_count() {
                            let len: f64 = emb
                                .face_darts(f)
                                .iter()
                                .map(|&(v, i)| adj[v][i].1)
                                .sum();
                            if len > best_len {
                                best_len = len;
                                best = f;
                            }
                        }
                        best
                    }
                };
                emb.designate_outer(outer);
                Some(emb)
            }
            None => None,
        };

        let mesh = edges.iter().map(|e| e.2).fold(0.0f64, f64::max);
        let min_edge = edges.iter().map(|e| e.2).fold(f64::INFINITY, f64::min);

        Ok(MetricSurface {
            adj,
            edges: edges.to_vec(),
            origin,
            mesh,
            min_edge,
            embedding,
            override_metric: None,
        })
    }

    /// Replaces the path metric with an explicit symmetric distance table,
    /// flagging the space as non-geodesic. Surface-only diagnostics
    /// (surrounding loops, coarea, Poincaré packs) refuse such spaces.
    ///
    /// The table must be `n x n`, symmetric, zero on the diagonal and
    /// positive elsewhere. The embedding, if any, is dropped: a metric that
    /// is not path-induced has no meaningful face structure.
    pub fn with_override_metric(mut self, table: Vec<Vec<f64>>) -> Result<Self> {
        let n = self.vertex_count();
        if table.len() != n {
            return Err(Error::BadParameters);
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::BadParameters);
            }
            for (j, &d) in row.iter().enumerate() {
                let ok = if i == j {
                    d == 0.0
                } else {
                    d > 0.0 && d.is_finite() && (table[j][i] - d).abs() == 0.0
                };
                if !ok {
                    return Err(Error::BadParameters);
                }
            }
        }
        self.override_metric = Some(MetricOverride::Table(table));
        self.embedding = None;
        Ok(self)
    }

    /// Replaces the path metric with its power transform `d -> d^theta`,
    /// `theta` strictly between 0 and 1 (a snowflake). Distances are
    /// computed on demand from the path metric. Like
    /// [`MetricSurface::with_override_metric`] this flags the space as
    /// non-geodesic and drops any embedding.
    pub fn with_power_metric(mut self, theta: f64) -> Result<Self> {
        if !(theta > 0.0) || !(theta < 1.0) {
            return Err(Error::BadParameters);
        }
        self.override_metric = Some(MetricOverride::Power(theta));
        self.embedding = None;
        Ok(self)
    }

    /// Number of vertices.
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical undirected edge list as `(u, v, length)` triples.
    pub fn edges(&self) -> &[(Vertex, Vertex, f64)] {
        &self.edges
    }

    /// The designated origin vertex.
    pub fn origin(&self) -> Vertex {
        self.origin
    }

    /// Maximum edge length.
    pub fn mesh(&self) -> f64 {
        self.mesh
    }

    /// Minimum edge length.
    pub fn min_edge_len(&self) -> f64 {
        self.min_edge
    }

    /// True when the metric is induced by edge lengths (no override table).
    pub fn is_geodesic(&self) -> bool {
        self.override_metric.is_none()
    }

    /// A lower bound on the distance between distinct vertices, used to
    /// shortcut separation sweeps. Conservatively zero for table overrides.
    pub(crate) fn min_separation(&self) -> f64 {
        match &self.override_metric {
            Some(MetricOverride::Table(_)) => 0.0,
            Some(MetricOverride::Power(theta)) => crate::fmath::pow(self.min_edge, *theta),
            None => self.min_edge,
        }
    }

    /// The sphere embedding, when a rotation system was supplied.
    pub fn embedding(&self) -> Option<&Embedding> {
        self.embedding.as_ref()
    }

    /// Degree of `v`.
    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    /// Neighbors of `v` with edge lengths, in storage (rotation) order.
    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = (Vertex, f64)> + '_ {
        self.adj[v].iter().map(|&(w, len, _)| (w, len))
    }

    /// Head of the `i`-th dart out of `v`.
    pub(crate) fn neighbor(&self, v: Vertex, i: usize) -> Vertex {
        self.adj[v][i].0
    }

    /// Length of the `i`-th dart out of `v`.
    pub(crate) fn neighbor_len(&self, v: Vertex, i: usize) -> f64 {
        self.adj[v][i].1
    }

    /// Edge index of the `i`-th dart out of `v`.
    pub(crate) fn neighbor_edge(&self, v: Vertex, i: usize) -> usize {
        self.adj[v][i].2
    }

    /// Length of the edge between `u` and `v`, if present.
    pub fn edge_between(&self, u: Vertex, v: Vertex) -> Option<f64> {
        self.adj.get(u)?.iter().find(|&&(w, _, _)| w == v).map(|&(_, len, _)| len)
    }

    fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::UnknownVertex)
        }
    }

    // === Distances =========================================================

    /// Single-source Dijkstra over the edge metric. Returns `(dist, parent)`
    /// where `parent[v]` is the relaxing predecessor (`usize::MAX` at the
    /// source). Ignores any override metric; callers wanting the space's
    /// actual metric should use [`MetricSurface::distances_from`].
    pub(crate) fn dijkstra(&self, src: Vertex) -> (Vec<f64>, Vec<Vertex>) {
        let n = self.vertex_count();
        let mut dist = vec![f64::INFINITY; n];
        let mut parent = vec![usize::MAX; n];
        let mut heap: BinaryHeap<HeapEntry> = BinaryHeap::new();
        dist[src] = 0.0;
        heap.push(HeapEntry { dist: 0.0, vertex: src });
        while let Some(HeapEntry { dist: d, vertex: v }) = heap.pop() {
            if d > dist[v] {
                continue;
            }
            for &(w, len, _) in &self.adj[v] {
                let nd = d + len;
                if nd < dist[w] {
                    dist[w] = nd;
                    parent[w] = v;
                    heap.push(HeapEntry { dist: nd, vertex: w });
                }
            }
        }
        (dist, parent)
    }

    /// Edge-metric distances to the nearest of several seed vertices
    /// (multi-source Dijkstra). Empty seed sets give all-infinite rows.
    /// Ignores any override metric, like [`MetricSurface::dijkstra`].
    pub(crate) fn multi_source_distances(&self, seeds: &[Vertex]) -> Vec<f64> {
        let n = self.vertex_count();
        let mut dist = vec![f64::INFINITY; n];
        let mut heap: BinaryHeap<HeapEntry> = BinaryHeap::new();
        for &s in seeds {
            if dist[s] > 0.0 {
                dist[s] = 0.0;
                heap.push(HeapEntry { dist: 0.0, vertex: s });
            }
        }
        while let Some(HeapEntry { dist: d, vertex: v }) = heap.pop() {
            if d > dist[v] {
                continue;
            }
            for &(w, len, _) in &self.adj[v] {
                let nd = d + len;
                if nd < dist[w] {
                    dist[w] = nd;
                    heap.push(HeapEntry { dist: nd, vertex: w });
                }
            }
        }
        dist
    }

    /// Distances from `p` to every vertex under the space's metric.
    pub fn distances_from(&self, p: Vertex) -> Result<Vec<f64>> {
        self.check_vertex(p)?;
        match &self.override_metric {
            Some(MetricOverride::Table(table)) => Ok(table[p].clone()),
            Some(MetricOverride::Power(theta)) => {
                let mut row = self.dijkstra(p).0;
                for d in &mut row {
                    if *d > 0.0 {
                        *d = crate::fmath::pow(*d, *theta);
                    }
                }
                Ok(row)
            }
            None => Ok(self.dijkstra(p).0),
        }
    }

    /// The closed neighborhood `{(w, d(v, w)) : d(v, w) <= r}`, sorted by
    /// vertex, with work proportional to the neighborhood rather than the
    /// space whenever the metric is locally explorable. The workhorse
    /// behind greedy net sweeps.
    pub(crate) fn bounded_ball(&self, v: Vertex, r: f64) -> Vec<(Vertex, f64)> {
        match &self.override_metric {
            Some(MetricOverride::Table(table)) => table[v]
                .iter()
                .enumerate()
                .filter(|&(_, &d)| d <= r)
                .map(|(w, &d)| (w, d))
                .collect(),
            Some(MetricOverride::Power(theta)) => {
                let base_r = crate::fmath::pow(r, 1.0 / theta);
                let mut out = self.bounded_base_ball(v, base_r);
                for (_, d) in &mut out {
                    if *d > 0.0 {
                        *d = crate::fmath::pow(*d, *theta);
                    }
                }
                out.retain(|&(_, d)| d <= r);
                out
            }
            None => self.bounded_base_ball(v, r),
        }
    }

    /// Dijkstra from `v` that never relaxes past radius `r` in the path
    /// metric; returns `(vertex, distance)` pairs sorted by vertex.
    fn bounded_base_ball(&self, v: Vertex, r: f64) -> Vec<(Vertex, f64)> {
        let mut dist: BTreeMap<Vertex, f64> = BTreeMap::new();
        let mut heap: BinaryHeap<HeapEntry> = BinaryHeap::new();
        dist.insert(v, 0.0);
        heap.push(HeapEntry { dist: 0.0, vertex: v });
        let mut out = Vec::new();
        while let Some(HeapEntry { dist: d, vertex: u }) = heap.pop() {
            if dist.get(&u).is_some_and(|&best| d > best) {
                continue;
            }
            out.push((u, d));
            for &(w, len, _) in &self.adj[u] {
                let nd = d + len;
                if nd <= r {
                    let entry = dist.entry(w).or_insert(f64::INFINITY);
                    if nd < *entry {
                        *entry = nd;
                        heap.push(HeapEntry { dist: nd, vertex: w });
                    }
                }
            }
        }
        out.sort_unstable_by_key(|&(w, _)| w);
        out
    }

    /// Distance between two vertices. For repeated queries from one source
    /// prefer [`MetricSurface::distances_from`] or a [`DistanceCache`].
    pub fn distance(&self, p: Vertex, q: Vertex) -> Result<f64> {
        self.check_vertex(q)?;
        Ok(self.distances_from(p)?[q])
    }

    /// The closed ball `{v : d(p, v) <= r}`, sorted ascending.
    pub fn ball(&self, p: Vertex, r: f64) -> Result<Vec<Vertex>> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::NegativeRadius);
        }
        let dist = self.distances_from(p)?;
        Ok((0..self.vertex_count()).filter(|&v| dist[v] <= r).collect())
    }

    // === Geodesics =========================================================

    /// The deterministic geodesic from `p` to `q`: among all shortest paths,
    /// the lexicographically-least waypoint sequence.
    ///
    /// `geodesic(p, p)` is the single-vertex path of length zero. Fails with
    /// [`Error::NonGeodesicSpace`] on override-metric spaces, whose metric is
    /// not realized by paths.
    pub fn geodesic(&self, p: Vertex, q: Vertex) -> Result<Geodesic> {
        if !self.is_geodesic() {
            return Err(Error::NonGeodesicSpace);
        }
        self.check_vertex(p)?;
        self.check_vertex(q)?;
        if p == q {
            return Ok(Geodesic { waypoints: vec![p], length: 0.0 });
        }
        let (dist_q, _) = self.dijkstra(q);
        let mut waypoints = vec![p];
        let mut cur = p;
        while cur != q {
            // Smallest-id neighbor still on a shortest path. Exact float
            // equality is intentional: Dijkstra assigned dist[cur] as
            // len + dist[w] for at least one neighbor.
            let mut next: Option<Vertex> = None;
            for &(w, len, _) in &self.adj[cur] {
                if len + dist_q[w] == dist_q[cur] && next.map_or(true, |b| w < b) {
                    next = Some(w);
                }
            }
            let next = next.expect("shortest-path predecessor must exist");
            waypoints.push(next);
            cur = next;
        }
        Ok(Geodesic { waypoints, length: dist_q[p] })
    }
}

/// A closed ball kept strictly inside the space: scan regions, map domains
/// and cover targets are all phrased this way so boundary effects stay
/// excluded by construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegionSpec {
    /// Ball center.
    pub center: Vertex,
    /// Ball radius; must be positive.
    pub radius: f64,
}

impl RegionSpec {
    /// Convenience constructor.
    pub fn new(center: Vertex, radius: f64) -> Self {
        RegionSpec { center, radius }
    }

    /// The region's vertex set, validated: the radius must be positive and
    /// the closed ball a strict subset of the space (some margin must remain
    /// toward the boundary).
    pub fn vertices(&self, space: &MetricSurface) -> Result<Vec<Vertex>> {
        if !(self.radius > 0.0) || !self.radius.is_finite() {
            return Err(Error::BadRegion);
        }
        if self.center >= space.vertex_count() {
            return Err(Error::UnknownVertex);
        }
        let ball = space.ball(self.center, self.radius)?;
        if ball.len() == space.vertex_count() {
            return Err(Error::BadRegion);
        }
        Ok(ball)
    }
}

/// Max-heap entry ordered by smallest distance first.
struct HeapEntry {
    dist: f64,
    vertex: Vertex,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.dist == other.dist && self.vertex == other.vertex
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        // Reverse distance order, then reverse id for full determinism.
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

// === Curves ================================================================

/// A shortest path with its waypoint sequence and exact length.
#[derive(Clone, Debug, PartialEq)]
pub struct Geodesic {
    waypoints: Vec<Vertex>,
    length: f64,
}

impl Geodesic {
    /// Validates `waypoints` as a walk (consecutive edges must exist) and
    /// sums its length. The walk need not be shortest; this constructor is
    /// for externally supplied curves.
    pub fn from_walk(space: &MetricSurface, waypoints: Vec<Vertex>) -> Result<Self> {
        if waypoints.is_empty() {
            return Err(Error::InvalidCurve);
        }
        let mut length = 0.0;
        for pair in waypoints.windows(2) {
            length += space.edge_between(pair[0], pair[1]).ok_or(Error::InvalidCurve)?;
        }
        Ok(Geodesic { waypoints, length })
    }

    /// Waypoints from start to end.
    pub fn waypoints(&self) -> &[Vertex] {
        &self.waypoints
    }

    /// Total length.
    pub fn length(&self) -> f64 {
        self.length
    }

    /// Start vertex.
    pub fn start(&self) -> Vertex {
        self.waypoints[0]
    }

    /// End vertex.
    pub fn end(&self) -> Vertex {
        *self.waypoints.last().unwrap()
    }
}

/// A closed walk with its length and a simplicity flag.
///
/// Waypoints are stored without repeating the starting vertex; the closing
/// edge from last back to first is implied and validated.
#[derive(Clone, Debug, PartialEq)]
pub struct Loop {
    waypoints: Vec<Vertex>,
    length: f64,
    simple: bool,
}

impl Loop {
    /// Validates a cyclic waypoint sequence (closing edge implied) and
    /// computes its length. At least three waypoints are required; `simple`
    /// records whether no vertex repeats.
    pub fn from_walk(space: &MetricSurface, waypoints: Vec<Vertex>) -> Result<Self> {
        if waypoints.len() < 3 {
            return Err(Error::InvalidCurve);
        }
        let mut length = 0.0;
        for k in 0..waypoints.len() {
            let u = waypoints[k];
            let v = waypoints[(k + 1) % waypoints.len()];
            length += space.edge_between(u, v).ok_or(Error::InvalidCurve)?;
        }
        let mut sorted = waypoints.clone();
        sorted.sort_unstable();
        let simple = sorted.windows(2).all(|w| w[0] != w[1]);
        Ok(Loop { waypoints, length, simple })
    }

    /// Cyclic waypoints (starting vertex not repeated at the end).
    pub fn waypoints(&self) -> &[Vertex] {
        &self.waypoints
    }

    /// Total length including the closing edge.
    pub fn length(&self) -> f64 {
        self.length
    }

    /// True when no vertex repeats along the walk.
    pub fn is_simple(&self) -> bool {
        self.simple
    }

    /// The distinct vertices visited, sorted ascending.
    pub fn vertex_set(&self) -> Vec<Vertex> {
        let mut vs = self.waypoints.clone();
        vs.sort_unstable();
        vs.dedup();
        vs
    }
}

// === Distance cache ========================================================

/// Per-worker cache of single-source distance rows.
///
/// The cache is deliberately `&mut`-based: concurrent scans should each hold
/// their own cache rather than share one behind a lock.
#[derive(Default, Debug)]
pub struct DistanceCache {
    rows: BTreeMap<Vertex, Vec<f64>>,
}

impl DistanceCache {
    /// Creates an empty cache.
    pub fn new() -> Self {
        Self::default()
    }

    /// Distances from `p`, computing and retaining the row on first use.
    pub fn distances<'a>(&'a mut self, space: &MetricSurface, p: Vertex) -> Result<&'a [f64]> {
        if !self.rows.contains_key(&p) {
            let row = space.distances_from(p)?;
            self.rows.insert(p, row);
        }
        Ok(self.rows.get(&p).unwrap())
    }

    /// Distance `d(p, q)` through the cache.
    pub fn distance(&mut self, space: &MetricSurface, p: Vertex, q: Vertex) -> Result<f64> {
        if q >= space.vertex_count() {
            return Err(Error::UnknownVertex);
        }
        Ok(self.distances(space, p)?[q])
    }

    /// Number of cached rows.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    /// True when nothing is cached yet.
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

// === BiLipschitz maps ======================================================

/// How a biLipschitz constant was certified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certification {
    /// Every pair of domain vertices was checked.
    ExactAllPairs,
    /// A seeded random sample of pairs was checked.
    Sampled { pairs: usize, seed: u64 },
}

/// An injective vertex map with a certified biLipschitz constant.
#[derive(Clone, Debug)]
pub struct BiLipMap {
    /// `(x, f(x))` sorted by domain vertex.
    pairs: Vec<(Vertex, Vertex)>,
    constant: f64,
    certification: Certification,
    /// The pair realizing the constant.
    worst_pair: (Vertex, Vertex),
}

impl BiLipMap {
    /// The certified constant `L`: the maximum over checked pairs of
    /// `max(d(fx, fy)/d(x, y), d(x, y)/d(fx, fy))`.
    pub fn constant(&self) -> f64 {
        self.constant
    }

    /// How the constant was certified.
    pub fn certification(&self) -> &Certification {
        &self.certification
    }

    /// The checked pair realizing the constant.
    pub fn worst_pair(&self) -> (Vertex, Vertex) {
        self.worst_pair
    }

    /// `(x, f(x))` pairs sorted by domain vertex.
    pub fn pairs(&self) -> &[(Vertex, Vertex)] {
        &self.pairs
    }

    /// Domain vertices, ascending.
    pub fn domain(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.pairs.iter().map(|&(x, _)| x)
    }

    /// Image vertices in domain order.
    pub fn image(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.pairs.iter().map(|&(_, y)| y)
    }

    /// Applies the map, if `v` is in the domain.
    pub fn apply(&self, v: Vertex) -> Option<Vertex> {
        self.pairs
            .binary_search_by_key(&v, |&(x, _)| x)
            .ok()
            .map(|i| self.pairs[i].1)
    }

    /// Applies the inverse map, if `v` is in the image.
    pub fn apply_inverse(&self, v: Vertex) -> Option<Vertex> {
        self.pairs.iter().find(|&&(_, y)| y == v).map(|&(x, _)| x)
    }

    /// Number of domain vertices.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    /// True for the empty map (never constructed by [`certify_bilip`]).
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Certifies the biLipschitz constant of an injective vertex map given as
/// `(x, f(x))` pairs.
///
/// All pairs are checked exactly when the domain has at most 2000 vertices;
/// larger domains are certified against a seeded sample of 200000 pairs and
/// labeled as such in the result.
pub fn certify_bilip(space: &MetricSurface, assignment: &[(Vertex, Vertex)]) -> Result<BiLipMap> {
    certify_bilip_seeded(space, assignment, 0)
}

/// [`certify_bilip`] with an explicit seed for the sampled fallback.
pub fn certify_bilip_seeded(
    space: &MetricSurface,
    assignment: &[(Vertex, Vertex)],
    seed: u64,
) -> Result<BiLipMap> {
    if assignment.is_empty() {
        return Err(Error::EmptyDomain);
    }
    for &(x, y) in assignment {
        if x >= space.vertex_count() || y >= space.vertex_count() {
            return Err(Error::UnknownVertex);
        }
    }
    let mut pairs = assignment.to_vec();
    pairs.sort_unstable();
    if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::NotInjective);
    }
    let mut images: Vec<Vertex> = pairs.iter().map(|&(_, y)| y).collect();
    images.sort_unstable();
    if images.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::NotInjective);
    }

    let n = pairs.len();
    let mut cache = DistanceCache::new();
    let mut best = 0.0f64;
    let mut worst_pair = (pairs[0].0, pairs[0].0);
    let mut consider = |space: &MetricSurface,
                        cache: &mut DistanceCache,
                        a: (Vertex, Vertex),
                        b: (Vertex, Vertex)|
     -> Result<()> {
        let d_dom = cache.distance(space, a.0, b.0)?;
        let d_img = cache.distance(space, a.1, b.1)?;
        let ratio = (d_img / d_dom).max(d_dom / d_img);
        if ratio > best {
            best = ratio;
            worst_pair = (a.0, b.0);
        }
        Ok(())
    };

    let certification = if n <= EXACT_CERTIFY_LIMIT {
        for i in 0..n {
            for j in (i + 1)..n {
                consider(space, &mut cache, pairs[i], pairs[j])?;
            }
        }
        Certification::ExactAllPairs
    } else {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..SAMPLED_CERTIFY_PAIRS {
            let i = (rng.next_u64() % n as u64) as usize;
            let mut j = (rng.next_u64() % n as u64) as usize;
            if i == j {
                j = (j + 1) % n;
            }
            consider(space, &mut cache, pairs[i], pairs[j])?;
        }
        Certification::Sampled { pairs: SAMPLED_CERTIFY_PAIRS, seed }
    };

    Ok(BiLipMap { pairs, constant: best, certification, worst_pair })
}

// === Surrounding predicate =================================================

/// True when deleting the loop's vertices leaves every vertex of `target` in
/// a component that excludes all outer-face-incident vertices, i.e. the loop
/// separates `target` from the unbounded face.
///
/// # Errors
///
/// - [`Error::NoEmbedding`] without a rotation system.
/// - [`Error::LoopMeetsTarget`] if the loop visits a target vertex.
/// - [`Error::EmptyDomain`] / [`Error::UnknownVertex`] for malformed targets.
pub fn surrounds(space: &MetricSurface, lp: &Loop, target: &[Vertex]) -> Result<bool> {
    let emb = space.embedding().ok_or(Error::NoEmbedding)?;
    if target.is_empty() {
        return Err(Error::EmptyDomain);
    }
    for &v in target {
        if v >= space.vertex_count() {
            return Err(Error::UnknownVertex);
        }
    }
    let n = space.vertex_count();
    let mut deleted = vec![false; n];
    for &v in lp.waypoints() {
        deleted[v] = true;
    }
    if target.iter().any(|&v| deleted[v]) {
        return Err(Error::LoopMeetsTarget);
    }
    let mut escape = vec![false; n];
    for &v in emb.outer_vertices() {
        escape[v] = true;
    }
    let mut seen = vec![false; n];
    let mut stack: Vec<Vertex> = Vec::new();
    for &t in target {
        if !seen[t] {
            seen[t] = true;
            stack.push(t);
        }
    }
    while let Some(v) = stack.pop() {
        if escape[v] {
            return Ok(false);
        }
        for (w, _) in space.neighbors(v) {
            if !seen[w] && !deleted[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    Ok(true)
}

// === Seeded orders =========================================================

/// A seeded pseudorandom permutation of `0..n` (Fisher-Yates over ChaCha8).
/// Used wherever greedy constructions take an explicit traversal order.
pub fn seeded_order(n: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for i in (1..n).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        order.swap(i, j);
    }
    order
}
