//! Simple Lie algebras from Cartan matrices and their finite-order automorphisms.

pub mod automorphisms;
pub mod cartan;
pub mod chevalley;
pub mod roots;

pub use automorphisms::{
    compose_pi_toral, diagram_automorphism, outer_image, toral_automorphism, AutoSpec, DiagramPermutation,
    ToralCharge,
};
pub use cartan::{CartanType, FiniteCartanMatrix};
pub use chevalley::{chevalley_algebra, Chevalley};
pub use roots::RootSystem;
