//! Key-class detection for object-oriented code bases.
//!
//! The pipeline is: [`extract`] Java sources into a class model, derive
//! coupling graphs ([`graph`]), score every class with Potential Gain
//! ([`pg`]), collect countable class [`metrics`], then [`ranking`] and
//! [`smells`] turn those numbers into refactoring candidates. [`report`]
//! renders the results and [`cli`] wires everything to the command line.

pub mod cli;
pub mod extract;
pub mod format;
pub mod graph;
pub mod metrics;
pub mod pg;
pub mod ranking;
pub mod report;
pub mod smells;

pub use extract::{build_coupling_graph, build_model, ClassModel};
pub use graph::{CouplingGraph, CouplingKind, NodeId};
pub use pg::{potential_gain, Discount, PgConfig, PgResult};
