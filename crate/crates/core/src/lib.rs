//! Exact computation of chromatic-type quasisymmetric series of graphs and
//! their K-theoretic (set-valued) analogues.

pub mod arith;
pub mod coloring;
pub mod error;
pub mod graph;
pub mod hopf;
pub mod orientation;
pub mod qsym;
pub mod suites;
pub mod tables;
pub mod tableaux;

pub use arith::{BigRat, QPoly};
pub use coloring::{chromatic, kromatic, kromatic_l, kromatic_weighted, kromatic_x, Variant};
pub use error::{Check, Discrepancy, DiscrepancyKind, Error};
pub use graph::{parse_input, Dag, Graph, Input, LabeledPoset, OrderedGraph, Poset};
pub use orientation::MultiOrientation;
pub use qsym::{expand_in_basis, BasisId, Composition, Expansion, Partition, TensorSeries, TruncatedSeries};
pub use tableaux::GrothendieckPTableau;
