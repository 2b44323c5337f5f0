//! Exact arithmetic: cyclotomic numbers, Laurent polynomials, residues
//! modulo ℓ^a and ℓ-adic valuations.

pub mod cyc;
pub mod lpoly;
pub mod valuation;

pub use cyc::CycNum;
pub use lpoly::{LPoly, Var};
pub use valuation::{
    cyc_l_valuation, l_valuation_split, lift_root_of_unity, q_samples, v_l_rational, ResidueInt, ValuationSplit,
};

use num_rational::BigRational;

use crate::error::{Error, Result};

/// Evaluate `p` at x = q. For polynomials in y (x = y^z) the caller supplies
/// the root y = `root_choice`, which must satisfy root_choice^z = q.
pub fn laurent_eval(p: &LPoly, q: &BigRational, root_choice: Option<&BigRational>) -> Result<CycNum> {
    match p.var() {
        Var::X => p.eval_rational(q),
        Var::Y { z } => {
            let y = root_choice
                .ok_or_else(|| Error::InconsistentRoot("a root of X^z - q is required".into()))?;
            if num_traits::pow(y.clone(), z as usize) != *q {
                return Err(Error::InconsistentRoot(format!("{}^{} != {}", y, z, q)));
            }
            p.eval_rational(y)
        }
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}
