//! Exact computation of persistent-homology barcodes: rational arithmetic,
//! real root isolation and Thom encodings, quantifier-free formula
//! realization on the line, infinitesimal removal, exact simplicial
//! persistence, and a sub-level-set pipeline for semi-algebraic sets.

pub mod complex;
pub mod eps;
pub mod filtration;
pub mod formula;
pub mod grid;
pub mod homology;
pub mod linalg;
pub mod multipoly;
pub mod pipeline;
pub mod rational;
pub mod realize;
pub mod reduction;
pub mod resultant;
pub mod rips;
pub mod thom;
pub mod unipoly;
