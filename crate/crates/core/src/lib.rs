//! Gene Ontology knowledge-discovery core: ontology DAG, annotation closure,
//! lazy hierarchical feature selection and frequency-ranked term tables.

pub mod annotations;
pub mod hfs;
pub mod ontology;
pub mod scalar;

pub use annotations::{ClassLabel, Dataset, GeneId, GeneInstance};
pub use hfs::{RankedTermTable, SelectionResult};
pub use ontology::{Namespace, OntologyGraph, Term, TermId};
pub use scalar::Scalar;

pub type TanTree64 = hfs::TanTree<f64>;
pub type TanTree32 = hfs::TanTree<f32>;
pub type TanEdge64 = hfs::TanEdge<f64>;
pub type RankOutput64 = hfs::RankOutput<f64>;
