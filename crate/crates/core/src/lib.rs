//! Distributed minimum-cardinality strong-connectivity augmentation.
//!
//! Every node of a weakly connected digraph is an agent that knows only its
//! own in- and out-neighbours. Agents flood edge information along edges,
//! find their strongly connected component, and the representatives of
//! source and target components negotiate over a long-range channel which
//! edges to add. Each round adds a set of edges that are safe to add, and the
//! process stops with a strongly connected digraph after adding exactly
//! `max(#sources, #targets)` edges (or none when it is already strongly
//! connected).
//!
//! ```
//! use augnet::{run, samples, SimConfig};
//!
//! let g = samples::six_agents();
//! let trace = run(&g, &SimConfig::default()).unwrap();
//! assert_eq!(trace.result.len(), 2);
//! assert!(trace.terminated);
//! ```
//!
//! The centralized checks in [`oracle`] (tight edges, brute-force optimum,
//! verification) are independent of the protocol and serve as its test
//! oracles.

pub mod agent;
pub mod bench;
pub mod edgelist;
pub mod graph;
pub mod graphgen;
pub mod oracle;
pub mod samples;
pub mod scc;
pub mod seed;
pub mod simnet;
pub mod trace;

pub use agent::{AugmentRule, TieBreak};
pub use edgelist::{format_edge_list, parse_edge_list, parse_edge_set, ParseError};
pub use graph::{Digraph, Edge, GraphError, NodeId};
pub use oracle::{verify_solution, AugmentationResult, Verdict};
pub use scc::{profile_of, tarjan_scc, ConnectivityProfile, SccKind};
pub use simnet::{run, RunTrace, SimConfig, SimError};
