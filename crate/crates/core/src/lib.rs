//! Container-accelerated exact algorithms for independent sets, coloring and
//! dense k-SAT.

pub mod cnf;
pub mod coloring;
pub mod containers;
pub mod dimacs;
pub mod error;
pub mod extsum;
pub mod generate;
pub mod graph;
pub mod partition;
pub mod sat;
pub mod hypergraph;
pub mod mis;
pub mod vertex_set;

pub use cnf::{CnfFormula, Lit};
pub use error::{Error, Result};
pub use graph::Graph;
pub use hypergraph::Hypergraph;
pub use vertex_set::VertexSet;
