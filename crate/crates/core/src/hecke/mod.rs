//! Hecke algebras of the groups in scope: types, representations, Schur
//! elements and explicit algebra engines.

pub mod engine;
pub mod schur;
pub mod types;
pub mod verify;

pub use engine::HeckeEngine;
pub use schur::{poincare, schur_element};
pub use types::{HeckeType, IrrLabel};
pub use verify::{check_brauer_reciprocity, check_parabolic_restriction, psi1_check, schur_table, verify_schur, SchurTable};
