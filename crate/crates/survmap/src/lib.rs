//! Survivable cross-layer network mapping toolkit.
//!
//! A logical (virtual datacenter) network is mapped onto a physical
//! infrastructure network: every logical node sits on a distinct physical
//! node and every logical link is routed along a simple physical path. A
//! physical link failure then knocks out exactly the logical links routed
//! over it. This crate constructs and judges such mappings so that the
//! logical network stays connected under arbitrary `k`-link failures or
//! shared-risk link group (SRLG) failures:
//!
//! - [`net`] — the two-layer graph model and its primitives (connectivity,
//!   shortest paths, minimum spanning trees, cutset enumeration).
//! - [`failure`] — failure scenarios: exhaustive `k`-subset streams and
//!   seeded SRLG set generation with validation.
//! - [`verify`] — the ground-truth survivability oracle: exhaustive scenario
//!   checking, protecting-spanning-tree witnesses, and the reported metrics.
//! - [`heuristic`] — iterative construction of protecting spanning trees
//!   with cost penalization, plus logical-link augmentation.
//! - [`milp`] — solver-agnostic MILP/ILP model generation (tree- and
//!   cutset-based families), LP-format emission, and solution checking.
//! - [`topo`] — built-in benchmark topologies.
//! - [`instance`] — the plain-text instance/plan file format.
//! - [`experiment`] — end-to-end pipelines producing reproducible reports.

#![forbid(unsafe_code)]

pub mod experiment;
pub mod failure;
pub mod heuristic;
pub mod instance;
pub mod milp;
pub mod net;
pub mod rng;
pub mod topo;
pub mod verify;

pub use net::{
    enumerate_cutsets, enumerate_cutsets_bounded, minimum_spanning_tree, residual_logical,
    shortest_path, CostVector, Cutset, LogEdgeId, LogNodeId, LogicalNetwork, Mapping, NetError,
    PhysEdgeId, PhysNodeId, PhysicalNetwork, ResidualLogical, SpanningTree,
};
