//! Structurally constrained maximum flows in integer-capacitated networks.
//!
//! The crate is organised around a small core (`netcore`) of directed
//! multigraphs, capacitated networks and integer flows, on top of which the
//! remaining modules implement:
//!
//! * `maxflow`: deterministic max flow, min cuts, arc connectivity, vertex
//!   splitting, the line-digraph reduction, and the set of arcs lying on
//!   some minimum cut,
//! * `decomp`: path/cycle decomposition of a flow and cycle removal,
//! * `degflow`: flows whose support has bounded out-degree,
//! * `strongflow`: max flows whose support is 2-arc-strongly connected
//!   between source and sink,
//! * `psplit`: decomposition of flows into few path-flows, with a
//!   harmonic-ratio approximation for the uniform-value relaxation,
//! * `tricot`: exact dynamic program for vertex- or arc-disjoint
//!   path-flow packings on acyclic networks,
//! * `persist`: how much flow survives small arc deletions,
//! * `gadgets`: hard-instance generators used by the test suites,
//! * `oracle`: budget-guarded brute-force solvers everything else is
//!   validated against,
//! * `randnet`: seeded random instances for property tests.

pub mod error;
pub mod netcore;
pub mod maxflow;
pub mod decomp;
pub mod degflow;
pub mod strongflow;
pub mod psplit;
pub mod tricot;
pub mod persist;
pub mod gadgets;
pub mod oracle;
pub mod randnet;

pub use error::{Error, Result};
pub use netcore::{ArcId, Digraph, Flow, Network, VertexId};
pub use oracle::Budget;
