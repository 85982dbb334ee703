//! Computational metric geometry on finite discretizations of geodesic
//! surfaces.
//!
//! A space is an edge-weighted connected graph, optionally carrying a planar
//! rotation system (a cyclic order of edges around each vertex) with a
//! designated outer face. On top of the base metric layer this crate provides:
//!
//! - exact shortest *surrounding loops*: the minimum-length cycle separating a
//!   metric ball from the unbounded face ([`surround`]);
//! - maximal separated nets, covering numbers and net-based atomic measures
//!   with exact rational weights ([`net`], [`measure`]);
//! - doubling, Assouad and box-counting dimension estimators plus
//!   coarea-style area lower bounds ([`dimension`]);
//! - thin/fat triangle scans, four-point hyperbolicity defects and the
//!   fat-triangle-surrounds-a-ball construction ([`hyperbolic`]);
//! - discrete Poincaré-inequality diagnostics built from ramp test functions
//!   across a separating curve ([`poincare`]).
//!
//! Everything is deterministic: ties in shortest-path computations are broken
//! lexicographically, greedy constructions take explicit orders, and all
//! randomized scans take explicit seeds.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the `std` feature
//! (default) only toggles the standard library for consumers that want it.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod dimension;
pub mod embedding;
pub mod error;
mod fmath;
pub mod generate;
pub mod hyperbolic;
pub mod measure;
pub mod net;
pub mod poincare;
pub mod space;
pub mod surround;

pub use error::{Error, Result};
pub use space::{BiLipMap, DistanceCache, Geodesic, Loop, MetricSurface, RegionSpec, Vertex};
