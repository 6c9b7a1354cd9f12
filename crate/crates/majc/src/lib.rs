//! Majority list-colouring toolkit.
//!
//! A vertex of a coloured graph is *happy* when, among its coloured
//! neighbours, those sharing its colour do not outnumber those with a
//! different colour. This crate provides the machinery for producing and
//! auditing such colourings from lists:
//!
//! - finite graphs and lazily-defined countably infinite graphs behind one
//!   view ([`graph`], [`lazy`], [`generators`]),
//! - closed-set and closure computations with elimination orders
//!   ([`closure`]),
//! - saturation and fair stream scheduling at countable scale
//!   ([`saturation`], [`streams`], [`sublists`]),
//! - an exact finite solver and exhaustive small-graph choosability
//!   checks ([`solver`]),
//! - boundary extension and the streaming prefix pipeline that colours
//!   growing finite windows of an infinite graph and certifies the result
//!   ([`extend`], [`runner`]),
//! - JSON/DOT interchange and the `majc` command-line front end ([`io`],
//!   [`cli`]).

pub mod card;
pub mod cli;
pub mod closure;
pub mod colouring;
pub mod error;
pub mod extend;
pub mod generators;
pub mod graph;
pub mod io;
pub mod lazy;
pub mod runner;
pub mod saturation;
pub mod solver;
pub mod streams;
pub mod sublists;

pub use card::Card;
pub use colouring::{Colour, Happiness, ListSystem, PartialColouring};
pub use error::{Error, Result};
pub use extend::{
    boundary_surplus, build_witness_family, extend_over_boundary, ExtensionOutcome, ExtensionPlan,
    WitnessFamily, WitnessStreams,
};
pub use generators::{instantiate_generator, GeneratorSpec};
pub use graph::FiniteGraph;
pub use io::{export_dot, graph_to_json, parse_graph_json};
pub use lazy::{GraphView, InducedSubgraph, LazyGraph};
pub use runner::{
    build_instances, certify, config_hash, diagonal_extract, run_prefix, CertStatus,
    DiagonalOutcome, PrefixCertificate, RunConfig, VertexVerdict,
};
pub use solver::{
    exhaustive_max_cross, exists_majority_list_colouring, majority_choosable_oracle, solve_finite,
    OracleMode, SolveInstance, SolveResult,
};
pub use streams::{DisjointRefinement, LazySetFamily, SetStream, StreamSpec};
pub use sublists::{select_sublists, ListOracle, SublistRequest, SublistTable, TrackedSet};
