//! Exact computation of product-extremal numbers for multigraphs with
//! bounded edge sums on small vertex subsets.
//!
//! An `(s,q)`-graph is a multigraph in which every set of `s` vertices spans
//! edges of total multiplicity at most `q`. This crate computes and bounds
//! `ex_pi(n,s,q)`, the maximum over all `(s,q)`-graphs on `n` vertices of the
//! product of all edge multiplicities:
//!
//! * [`graph`] — the multigraph model, constraint checks and exact products;
//! * [`constructions`] — the partite overlay family `T_{r,d}(a,n)` and its
//!   edge-sum / product maxima;
//! * [`bounds`] — averaging edge caps and integral AM-GM product caps;
//! * [`search`] — certified branch-and-bound for `ex_pi(n,s,q)`;
//! * [`verify`] — mechanical checks of the known exact values, refutations
//!   and asymptotic trends, bundled into a pass/fail suite.

pub mod bignat;
pub mod bounds;
pub mod constructions;
mod error;
pub mod graph;
pub mod search;
mod util;
pub mod verify;

pub use bignat::BigNat;
pub use bounds::BoundReport;
pub use constructions::{PartitionOptimum, TuranTemplate};
pub use error::{Error, Result};
pub use graph::{Multigraph, SQConstraint};
pub use search::{SearchConfig, SearchResult, SearchStatus};
pub use verify::ConjectureVerdict;

/// Version tag stamped into every JSON document this crate emits.
pub const SCHEMA: &str = "multex/1";
