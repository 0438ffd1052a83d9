//! Bi-criteria shopping-route engine.
//!
//! Given a road network, stores with priced products, and a shopping list,
//! the engine computes the linear skyline of shopping routes trading off
//! shopping time against shopping cost: an exact branch-and-bound solver,
//! a quad-tree-guided heuristic, and the gap metrics to compare them.

pub mod apx;
pub mod bsl;
pub mod catalog;
pub mod metrics;
pub mod network;
pub mod oracle;
pub mod quadtree;
pub mod query;
pub mod skyline;

#[cfg(test)]
pub(crate) mod testfix;
