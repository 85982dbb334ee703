//! Rotation systems, face tracing, and dual-graph machinery.
//!
//! An embedding is stored as the cyclic counterclockwise order of edges
//! around each vertex (the adjacency order of [`MetricSurface`]). Faces are
//! recovered by the standard dart-tracing rule: the face lies to the *left*
//! of each directed edge, so with counterclockwise rotations every bounded
//! face traces counterclockwise and the outer face traces clockwise. A
//! connected graph whose trace satisfies `V - E + F = 2` embeds in the
//! sphere; anything else is rejected as an invalid embedding.
//!
//! The module also exposes the dual adjacency (faces joined across primal
//! edges) and the exterior-boundary walk of a vertex set: the closed walk
//! separating the faces incident to the set from the unbounded face.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::space::{Loop, MetricSurface, Vertex};

/// A directed edge, identified by its tail vertex and the position of the
/// head in the tail's rotation order.
pub type Dart = (Vertex, usize);

/// A traced sphere embedding: faces, dart-to-face incidence, and the
/// designated outer face.
#[derive(Clone, Debug)]
pub struct Embedding {
    /// Darts of each face in walk order.
    faces: Vec<Vec<Dart>>,
    /// `face_of[v][i]` is the face to the left of the dart `(v, i)`.
    face_of: Vec<Vec<usize>>,
    /// `next_in_face[v][i]` is the successor of dart `(v, i)` in its face walk.
    next_in_face: Vec<Vec<Dart>>,
    /// `rev[v][i]` is the reverse dart of `(v, i)`.
    rev: Vec<Vec<Dart>>,
    /// Faces incident to each vertex (sorted, deduplicated).
    faces_at: Vec<Vec<usize>>,
    /// Dual adjacency: for each face, `(other_face, primal_edge_index)` per
    /// boundary dart.
    dual: Vec<Vec<(usize, usize)>>,
    /// Index of the outer face.
    outer: usize,
    /// Vertices on the outer face walk (sorted, deduplicated).
    outer_vertices: Vec<Vertex>,
}

impl Embedding {
    /// Traces all faces of the rotation order stored in `adj` and assembles
    /// the incidence tables. The outer face is set by the caller afterwards
    /// via [`Embedding::designate_outer`].
    ///
    /// `adj[v]` lists `(neighbor, length, edge_index)` in counterclockwise
    /// order. Fails with [`Error::InvalidEmbedding`] if the trace is not
    /// sphere-like for the given vertex and edge counts.
    pub(crate) fn trace(adj: &[Vec<(Vertex, f64, usize)>], edge_count: usize) -> Result<Self> {
        let n = adj.len();
        // Reverse darts: position of u within adj[v].
        let mut rev: Vec<Vec<Dart>> = Vec::with_capacity(n);
        for (u, nbrs) in adj.iter().enumerate() {
            let mut row = Vec::with_capacity(nbrs.len());
            for &(v, _, _) in nbrs {
                let j = adj[v]
                    .iter()
                    .position(|&(w, _, _)| w == u)
                    .ok_or(Error::InvalidEmbedding)?;
                row.push((v, j));
            }
            rev.push(row);
        }

        // Face trace: successor of (u, i) is the dart of the head vertex
        // pointing at the predecessor of u in the head's rotation.
        let mut face_of: Vec<Vec<usize>> = adj.iter().map(|a| vec![usize::MAX; a.len()]).collect();
        let mut next_in_face: Vec<Vec<Dart>> =
            adj.iter().map(|a| vec![(usize::MAX, 0); a.len()]).collect();
        let mut faces: Vec<Vec<Dart>> = Vec::new();
        for u in 0..n {
            for i in 0..adj[u].len() {
                if face_of[u][i] != usize::MAX {
                    continue;
                }
                let id = faces.len();
                let mut walk = Vec::new();
                let (mut cu, mut ci) = (u, i);
                loop {
                    face_of[cu][ci] = id;
                    walk.push((cu, ci));
                    let (v, j) = rev[cu][ci];
                    let deg = adj[v].len();
                    let ni = (j + deg - 1) % deg;
                    next_in_face[cu][ci] = (v, ni);
                    cu = v;
                    ci = ni;
                    if (cu, ci) == (u, i) {
                        break;
                    }
                }
                faces.push(walk);
            }
        }

        // Sphere check: V - E + F = 2.
        if n + faces.len() != edge_count + 2 {
            return Err(Error::InvalidEmbedding);
        }

        let mut faces_at: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (v, row) in face_of.iter().enumerate() {
            for &f in row {
                if !faces_at[v].contains(&f) {
                    faces_at[v].push(f);
                }
            }
            faces_at[v].sort_unstable();
        }

        let mut dual: Vec<Vec<(usize, usize)>> = vec![Vec::new(); faces.len()];
        for (f, walk) in faces.iter().enumerate() {
            for &(v, i) in walk {
                let (rv, ri) = rev[v][i];
                let g = face_of[rv][ri];
                let e = adj[v][i].2;
                dual[f].push((g, e));
            }
        }

        Ok(Embedding {
            faces,
            face_of,
            next_in_face,
            rev,
            faces_at,
            dual,
            outer: usize::MAX,
            outer_vertices: Vec::new(),
        })
    }

    /// Records `face` as the outer face and caches its vertex set.
    pub(crate) fn designate_outer(&mut self, face: usize) {
        self.outer = face;
        let mut vs: Vec<Vertex> = self.faces[face].iter().map(|&(v, _)| v).collect();
        vs.sort_unstable();
        vs.dedup();
        self.outer_vertices = vs;
    }

    /// Number of faces including the outer face.
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Number of bounded faces.
    pub fn bounded_face_count(&self) -> usize {
        self.faces.len() - 1
    }

    /// Index of the outer face.
    pub fn outer_face(&self) -> usize {
        self.outer
    }

    /// Darts of `face` in walk order.
    pub fn face_darts(&self, face: usize) -> &[Dart] {
        &self.faces[face]
    }

    /// Undirected edge walk of `face` as `(tail, head)` vertex pairs.
    pub fn face_walk(&self, space: &MetricSurface, face: usize) -> Vec<(Vertex, Vertex)> {
        self.faces[face]
            .iter()
            .map(|&(v, i)| (v, space.neighbor(v, i)))
            .collect()
    }

    /// Total edge length of the walk bounding `face`.
    pub fn face_boundary_length(&self, space: &MetricSurface, face: usize) -> f64 {
        self.faces[face]
            .iter()
            .map(|&(v, i)| space.neighbor_len(v, i))
            .sum()
    }

    /// Faces incident to `v`, sorted ascending.
    pub fn faces_at_vertex(&self, v: Vertex) -> &[usize] {
        &self.faces_at[v]
    }

    /// Vertices on the outer face walk, sorted ascending.
    pub fn outer_vertices(&self) -> &[Vertex] {
        &self.outer_vertices
    }

    /// Face to the left of the dart `(v, i)`.
    pub fn face_of_dart(&self, v: Vertex, i: usize) -> usize {
        self.face_of[v][i]
    }

    /// Dual neighbors of `face`: `(other_face, primal_edge_index)` pairs, one
    /// per boundary dart.
    pub fn dual_neighbors(&self, face: usize) -> &[(usize, usize)] {
        &self.dual[face]
    }

    /// Shortest dual path (fewest crossed edges) from `from` to `to`.
    /// Returns the crossed primal edge indices in path order.
    pub fn dual_path_edges(&self, from: usize, to: usize) -> Vec<usize> {
        let f = self.faces.len();
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; f];
        let mut seen = vec![false; f];
        let mut queue = alloc::collections::VecDeque::new();
        seen[from] = true;
        queue.push_back(from);
        while let Some(cur) = queue.pop_front() {
            if cur == to {
                break;
            }
            for &(g, e) in &self.dual[cur] {
                if !seen[g] {
                    seen[g] = true;
                    prev[g] = Some((cur, e));
                    queue.push_back(g);
                }
            }
        }
        let mut edges = Vec::new();
        let mut cur = to;
        while let Some((p, e)) = prev[cur] {
            edges.push(e);
            cur = p;
        }
        edges.reverse();
        edges
    }
}

// === Exterior boundary =====================================================

/// Computes the closed walk bounding the face-neighborhood of `set` against
/// the unbounded component of its complement.
///
/// The face-neighborhood is every face incident to a vertex of `set`;
/// enclosed pockets of other faces count as interior. The returned loop is
/// vertex-disjoint from `set`, surrounds it, and traces with the interior on
/// its left.
///
/// # Errors
///
/// - [`Error::NoEmbedding`] if the space has no rotation system.
/// - [`Error::NonGeodesicSpace`] for override-metric spaces.
/// - [`Error::BallTouchesOuterFace`] if a face incident to `set` is the
///   outer face.
/// - [`Error::EmptyDomain`] / [`Error::UnknownVertex`] for malformed sets.
pub fn exterior_boundary(space: &MetricSurface, set: &[Vertex]) -> Result<Loop> {
    if !space.is_geodesic() {
        return Err(Error::NonGeodesicSpace);
    }
    let emb = space.embedding().ok_or(Error::NoEmbedding)?;
    if set.is_empty() {
        return Err(Error::EmptyDomain);
    }
    if set.iter().any(|&v| v >= space.vertex_count()) {
        return Err(Error::UnknownVertex);
    }

    // Faces incident to the set.
    let mut incident = vec![false; emb.face_count()];
    for &v in set {
        for &f in emb.faces_at_vertex(v) {
            incident[f] = true;
        }
    }
    if incident[emb.outer_face()] {
        return Err(Error::BallTouchesOuterFace);
    }

    // Unbounded dual component of the complement; everything else is interior.
    let mut in_outside = vec![false; emb.face_count()];
    let mut queue = alloc::collections::VecDeque::new();
    in_outside[emb.outer_face()] = true;
    queue.push_back(emb.outer_face());
    while let Some(cur) = queue.pop_front() {
        for &(g, _) in emb.dual_neighbors(cur) {
            if !in_outside[g] && !incident[g] {
                in_outside[g] = true;
                queue.push_back(g);
            }
        }
    }

    let walks = boundary_walks(space, emb, &in_outside);
    // Exactly one boundary component surrounds a connected set; pick it.
    for walk in walks {
        let lp = Loop::from_walk(space, walk)?;
        if crate::space::surrounds(space, &lp, set)? {
            return Ok(lp);
        }
    }
    Err(Error::BallTouchesOuterFace)
}

/// Traces every closed boundary walk between the interior region (faces with
/// `in_outside == false`) and the outside region, interior kept on the left.
fn boundary_walks(
    space: &MetricSurface,
    emb: &Embedding,
    in_outside: &[bool],
) -> Vec<Vec<Vertex>> {
    let is_boundary = |d: Dart| -> bool {
        let (v, i) = d;
        let left = emb.face_of[v][i];
        let (rv, ri) = emb.rev[v][i];
        let right = emb.face_of[rv][ri];
        !in_outside[left] && in_outside[right]
    };

    let mut done: Vec<Vec<bool>> = (0..space.vertex_count())
        .map(|v| vec![false; space.degree(v)])
        .collect();
    let mut out = Vec::new();
    for v in 0..space.vertex_count() {
        for i in 0..space.degree(v) {
            if done[v][i] || !is_boundary((v, i)) {
                continue;
            }
            let start = (v, i);
            let mut walk = Vec::new();
            let mut cur = start;
            loop {
                done[cur.0][cur.1] = true;
                walk.push(cur.0);
                // Successor: advance along the interior face, pivoting across
                // interior faces at the head vertex until the next dart that
                // again has the outside on its right.
                let mut e = emb.next_in_face[cur.0][cur.1];
                while !is_boundary(e) {
                    let (rv, ri) = emb.rev[e.0][e.1];
                    e = emb.next_in_face[rv][ri];
                }
                cur = e;
                if cur == start {
                    break;
                }
            }
            out.push(walk);
        }
    }
    out
}
