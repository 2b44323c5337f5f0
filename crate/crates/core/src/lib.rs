//! Exact computations for principal blocks of Z_ℓ-spetses attached to
//! ℓ′-order reflection groups at q ≡ 1 (mod ℓ): reflection groups and
//! their tori, Orlik–Solomon orbit counts, cyclotomic Hecke algebras and
//! Schur elements, block degree polynomials, and Yokonuma-type algebras.

pub mod block;
pub mod error;
pub mod exactnum;
pub mod hecke;
pub mod linalg;
pub mod oscount;
pub mod reflgrp;
pub mod torus;
pub mod yokonuma;

pub use error::{Error, Result};
