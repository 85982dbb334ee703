//! Maximal separated nets and covering numbers.
//!
//! A net at scale `epsilon` is a vertex set with pairwise distances at least
//! `epsilon` (separation uses `>=`) in which no further vertex can be
//! admitted (maximality: every vertex lies within `epsilon` of a member).
//! Greedy construction in an explicit vertex order makes every net
//! reproducible; order sensitivity is exposed by sweeping seeds, never
//! hidden by canonicalization.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::space::{seeded_order, MetricSurface, Vertex};

/// Ball-size cap for the exhaustive minimum-cover search in
/// [`covering_number`].
const EXACT_COVER_LIMIT: usize = 20;

/// A maximal `epsilon`-separated vertex set with its construction record.
#[derive(Clone, Debug, PartialEq)]
pub struct Net {
    epsilon: f64,
    /// Members in admission order (the greedy construction sequence).
    admitted: Vec<Vertex>,
    /// Members sorted ascending.
    members: Vec<Vertex>,
    /// Seed of the traversal order, when one was used.
    seed: Option<u64>,
}

impl Net {
    /// The separation scale.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Members sorted ascending.
    pub fn members(&self) -> &[Vertex] {
        &self.members
    }

    /// Members in the order the greedy sweep admitted them.
    pub fn admission_order(&self) -> &[Vertex] {
        &self.admitted
    }

    /// The seed behind the traversal order, if seeded.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Number of members.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// A net is never empty on a nonempty space.
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// True when `v` is a member.
    pub fn contains(&self, v: Vertex) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    /// Members inside `region`, ascending. `region` must be sorted.
    pub fn members_in(&self, region: &[Vertex]) -> Vec<Vertex> {
        debug_assert!(region.windows(2).all(|w| w[0] < w[1]));
        self.members
            .iter()
            .copied()
            .filter(|v| region.binary_search(v).is_ok())
            .collect()
    }

    /// Exhaustively re-checks both net invariants: pairwise separation
    /// `>= epsilon` and maximality (every vertex within `epsilon` of a
    /// member). Intended for tests; cost is one distance row per member.
    pub fn verify(&self, space: &MetricSurface) -> Result<()> {
        let n = space.vertex_count();
        let mut covered = vec![false; n];
        for &m in &self.members {
            let dist = space.distances_from(m)?;
            for &m2 in &self.members {
                if m2 != m && dist[m2] < self.epsilon {
                    return Err(Error::BadEpsilon);
                }
            }
            for (v, c) in covered.iter_mut().enumerate() {
                if dist[v] <= self.epsilon {
                    *c = true;
                }
            }
        }
        if covered.iter().all(|&c| c) {
            Ok(())
        } else {
            Err(Error::BadEpsilon)
        }
    }
}

/// Greedy maximal net: sweeps `order`, admitting each vertex at distance
/// `>= epsilon` from everything admitted so far.
///
/// `order` must be a permutation of all vertices; the admission sequence is
/// recorded in the result.
pub fn maximal_net(space: &MetricSurface, epsilon: f64, order: &[Vertex]) -> Result<Net> {
    net_with_order(space, epsilon, order, None)
}

/// [`maximal_net`] over the seeded pseudorandom vertex order for `seed`,
/// with the seed recorded in the result.
pub fn maximal_net_seeded(space: &MetricSurface, epsilon: f64, seed: u64) -> Result<Net> {
    let order = seeded_order(space.vertex_count(), seed);
    net_with_order(space, epsilon, &order, Some(seed))
}

/// A seeded whole-space vertex order that sweeps `region` (sorted) first and
/// the rest of the space after, each part in the seeded permutation order.
///
/// Greedy nets built over such an order are maximal nets of the whole space
/// whose first member lies in the region, so region-restricted counts and
/// ball normalizations can never be vacuously zero.
pub fn region_first_order(space: &MetricSurface, region: &[Vertex], seed: u64) -> Vec<Vertex> {
    let n = space.vertex_count();
    let in_region: BTreeSet<Vertex> = region.iter().copied().collect();
    let base = seeded_order(n, seed);
    let mut order = Vec::with_capacity(n);
    order.extend(base.iter().copied().filter(|v| in_region.contains(v)));
    order.extend(base.iter().copied().filter(|v| !in_region.contains(v)));
    order
}

/// [`maximal_net`] over [`region_first_order`], with the seed recorded.
pub fn maximal_net_region_first(
    space: &MetricSurface,
    epsilon: f64,
    region: &[Vertex],
    seed: u64,
) -> Result<Net> {
    let order = region_first_order(space, region, seed);
    net_with_order(space, epsilon, &order, Some(seed))
}

fn net_with_order(
    space: &MetricSurface,
    epsilon: f64,
    order: &[Vertex],
    seed: Option<u64>,
) -> Result<Net> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::BadEpsilon);
    }
    let n = space.vertex_count();
    if order.len() != n {
        return Err(Error::BadParameters);
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n || seen[v] {
            return Err(Error::BadParameters);
        }
        seen[v] = true;
    }

    // A vertex is admissible exactly when no earlier member sits strictly
    // within epsilon, so one bounded neighborhood sweep per admitted member
    // maintains the admissibility mask for everyone else.
    let mut blocked = vec![false; n];
    let mut admitted = Vec::new();
    for &v in order {
        if blocked[v] {
            continue;
        }
        admitted.push(v);
        for (w, d) in space.bounded_ball(v, epsilon) {
            if d < epsilon {
                blocked[w] = true;
            }
        }
    }
    let mut members = admitted.clone();
    members.sort_unstable();
    Ok(Net { epsilon, admitted, members, seed })
}

/// Covering count of `ball(p, R)` by radius-`r` balls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringNumber {
    /// Cardinality of the greedy maximal `r`-separated net of the ball
    /// (id-order sweep): an upper bound on the minimum cover and a packing
    /// witness of the same order.
    pub greedy: usize,
    /// Exact minimum number of covering balls with centers in the ball,
    /// computed exhaustively when the ball has at most 20 vertices.
    pub exact: Option<usize>,
}

/// Greedy (and, on small balls, exact) number of `r`-balls needed to cover
/// `ball(p, R)`, centers constrained to the ball itself.
pub fn covering_number(
    space: &MetricSurface,
    p: Vertex,
    big_r: f64,
    r: f64,
) -> Result<CoveringNumber> {
    if !(r > 0.0) || !(big_r > r) || !big_r.is_finite() {
        return Err(Error::BadRadii);
    }
    let ball = space.ball(p, big_r)?;

    let mut blocked = vec![false; space.vertex_count()];
    let mut greedy = 0usize;
    for &v in &ball {
        if blocked[v] {
            continue;
        }
        greedy += 1;
        for (w, d) in space.bounded_ball(v, r) {
            if d < r {
                blocked[w] = true;
            }
        }
    }

    let exact = if ball.len() <= EXACT_COVER_LIMIT {
        Some(minimum_cover(space, &ball, r)?)
    } else {
        None
    };
    Ok(CoveringNumber { greedy, exact })
}

/// Exact set-cover minimum over ball centers, by subset dynamic programming
/// on the coverage bitmasks. `ball` has at most [`EXACT_COVER_LIMIT`]
/// vertices.
fn minimum_cover(space: &MetricSurface, ball: &[Vertex], r: f64) -> Result<usize> {
    let k = ball.len();
    debug_assert!(k <= EXACT_COVER_LIMIT && k > 0);
    let full: u32 = if k == 32 { u32::MAX } else { (1u32 << k) - 1 };
    let mut masks = Vec::with_capacity(k);
    for &c in ball {
        let dist = space.distances_from(c)?;
        let mut m: u32 = 0;
        for (i, &v) in ball.iter().enumerate() {
            if dist[v] <= r {
                m |= 1 << i;
            }
        }
        masks.push(m);
    }
    // dp[mask] = fewest centers covering exactly the vertices in `mask`
    // (or more). Fill by always extending at the lowest uncovered bit.
    let mut dp = vec![u32::MAX; (full as usize) + 1];
    dp[0] = 0;
    for mask in 1..=(full as usize) {
        let low = mask.trailing_zeros() as usize;
        let mut best = u32::MAX;
        for &cm in &masks {
            if cm & (1 << low) != 0 {
                let rest = mask & !(cm as usize);
                if dp[rest] != u32::MAX {
                    best = best.min(dp[rest] + 1);
                }
            }
        }
        dp[mask] = best;
    }
    Ok(dp[full as usize] as usize)
}

/// One row of [`net_cardinality_profile`].
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileRow {
    /// Net scale.
    pub epsilon: f64,
    /// Traversal-order seed.
    pub seed: u64,
    /// `|N_epsilon ∩ region|`.
    pub cardinality: usize,
}

/// Net cardinalities restricted to `region`, across scales and seeds: for
/// each `(epsilon, seed)` pair, builds the seeded maximal net of the whole
/// space and counts its members inside `region`.
pub fn net_cardinality_profile(
    space: &MetricSurface,
    epsilons: &[f64],
    region: &[Vertex],
    seeds: &[u64],
) -> Result<Vec<ProfileRow>> {
    if epsilons.is_empty() || seeds.is_empty() {
        return Err(Error::InsufficientScales);
    }
    if region.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let region_set: BTreeSet<Vertex> = region.iter().copied().collect();
    if region_set.iter().next_back().map_or(false, |&v| v >= space.vertex_count()) {
        return Err(Error::UnknownVertex);
    }
    let sorted_region: Vec<Vertex> = region_set.iter().copied().collect();
    let mut rows = Vec::with_capacity(epsilons.len() * seeds.len());
    for &eps in epsilons {
        for &seed in seeds {
            let net = maximal_net_region_first(space, eps, &sorted_region, seed)?;
            let cardinality = net
                .members()
                .iter()
                .filter(|v| region_set.contains(v))
                .count();
            rows.push(ProfileRow { epsilon: eps, seed, cardinality });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{euclidean_grid, GridLayout};

    fn path(n: usize) -> MetricSurface {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1, 1.0)).collect();
        MetricSurface::build(n, &edges, None, None, n / 2).unwrap()
    }

    #[test]
    fn greedy_trace_on_path_forward_and_reverse() {
        let p5 = path(5);
        let forward: Vec<usize> = (0..5).collect();
        let net = maximal_net(&p5, 2.0, &forward).unwrap();
        assert_eq!(net.members(), &[0, 2, 4]);
        assert_eq!(net.admission_order(), &[0, 2, 4]);
        net.verify(&p5).unwrap();

        let reverse: Vec<usize> = (0..5).rev().collect();
        let net = maximal_net(&p5, 2.0, &reverse).unwrap();
        assert_eq!(net.members(), &[0, 2, 4]);
        assert_eq!(net.admission_order(), &[4, 2, 0]);
    }

    #[test]
    fn tiny_epsilon_admits_everything() {
        let p5 = path(5);
        let order: Vec<usize> = (0..5).collect();
        // Half the minimum edge length: separation never binds.
        let net = maximal_net(&p5, 0.5, &order).unwrap();
        assert_eq!(net.members(), &[0, 1, 2, 3, 4]);
        net.verify(&p5).unwrap();
    }

    #[test]
    fn net_rejects_bad_input() {
        let p5 = path(5);
        let order: Vec<usize> = (0..5).collect();
        assert_eq!(maximal_net(&p5, 0.0, &order).unwrap_err(), Error::BadEpsilon);
        assert_eq!(
            maximal_net(&p5, 1.0, &[0, 1, 2]).unwrap_err(),
            Error::BadParameters
        );
        assert_eq!(
            maximal_net(&p5, 1.0, &[0, 1, 2, 2, 4]).unwrap_err(),
            Error::BadParameters
        );
    }

    #[test]
    fn seeded_nets_reproduce_and_verify() {
        let g = euclidean_grid(7, 1.0).unwrap();
        for seed in [1u64, 2, 3] {
            let a = maximal_net_seeded(g.space(), 2.0, seed).unwrap();
            let b = maximal_net_seeded(g.space(), 2.0, seed).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.seed(), Some(seed));
            a.verify(g.space()).unwrap();
        }
    }

    #[test]
    fn covering_p9_center() {
        let p9 = path(9);
        let cn = covering_number(&p9, 4, 2.0, 1.0).unwrap();
        // Greedy 1-separated sweep admits every vertex of the 5-ball; the
        // exhaustive minimum needs only the two centers {3, 5}.
        assert_eq!(cn.greedy, 5);
        assert_eq!(cn.exact, Some(2));
    }

    #[test]
    fn covering_degenerate_and_bad_radii() {
        let p9 = path(9);
        assert_eq!(covering_number(&p9, 4, 1.0, 1.0).unwrap_err(), Error::BadRadii);
        assert_eq!(covering_number(&p9, 4, 0.5, 1.0).unwrap_err(), Error::BadRadii);
        // Sub-edge R: the ball is the singleton, one ball covers it.
        let cn = covering_number(&p9, 4, 0.9, 0.4).unwrap();
        assert_eq!(cn.greedy, 1);
        assert_eq!(cn.exact, Some(1));
    }

    #[test]
    fn covering_grid_diamond() {
        let g = euclidean_grid(7, 1.0).unwrap();
        let c = GridLayout::new(7).center();
        let cn = covering_number(g.space(), c, 2.0, 1.0).unwrap();
        // 13-vertex taxicab diamond: greedy 1-separated net keeps all 13;
        // the exact optimum packs it with 4 unit balls.
        assert_eq!(cn.greedy, 13);
        assert_eq!(cn.exact, Some(4));
    }

    #[test]
    fn profile_counts_decrease_with_scale() {
        let g = euclidean_grid(17, 1.0).unwrap();
        let region = g.ball(g.origin(), 8.0).unwrap();
        let rows =
            net_cardinality_profile(g.space(), &[1.0, 2.0, 4.0], &region, &[1, 2, 3]).unwrap();
        assert_eq!(rows.len(), 9);
        for seed in [1u64, 2, 3] {
            let per_eps: Vec<usize> = [1.0, 2.0, 4.0]
                .iter()
                .map(|&e| {
                    rows.iter()
                        .find(|r| r.epsilon == e && r.seed == seed)
                        .unwrap()
                        .cardinality
                })
                .collect();
            assert!(per_eps[0] >= per_eps[1] && per_eps[1] >= per_eps[2], "{per_eps:?}");
        }
    }

    #[test]
    fn profile_saturates_at_region_diameter() {
        let g = euclidean_grid(9, 1.0).unwrap();
        let region = g.ball(g.origin(), 2.0).unwrap();
        // Scale beyond the whole space diameter: single member overall.
        let rows = net_cardinality_profile(g.space(), &[64.0], &region, &[0]).unwrap();
        assert_eq!(rows[0].cardinality, 1);
    }
}
