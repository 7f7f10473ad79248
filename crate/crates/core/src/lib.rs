//! Lane-change intention prediction over a reified traffic knowledge graph.

pub mod bayes;
pub mod discretize;
pub mod eval;
pub mod ingest;
pub mod kg_builder;
pub mod kge;
pub mod ontology;
