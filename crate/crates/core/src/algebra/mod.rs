//! Multiplication-table algebras, their finite-order automorphisms, gradings,
//! loop algebras and centroids.

pub mod automorphism;
pub mod centroid;
pub mod grading;
pub mod loops;
pub mod table;

pub use automorphism::{check_automorphism, AutomorphismJson, Factorization, FiniteOrderAutomorphism};
pub use centroid::{centroid_graded, centroid_window, CentroidMap, CentroidReport, WindowCentroidReport};
pub use grading::{eigengrading, GradedDecomposition};
pub use loops::{base_change_check, loop_bracket, BaseChangeReport, LoopElement};
pub use table::{
    matrix_units, sl2, validate_algebra, AlgebraJson, AlgebraKind, Law, MultTableAlgebra, ValidationReport,
    Violation,
};
