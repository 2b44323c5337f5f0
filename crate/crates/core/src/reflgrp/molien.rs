//! Invariant degrees from the Molien series and the Poincaré polynomial.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::group::ReflGroup;
use crate::error::{Error, Result};
use crate::exactnum::{CycNum, LPoly};
use crate::linalg::Matrix;

/// Coefficients c_0..c_n of det(1 - tA) (Faddeev–LeVerrier).
pub fn det_one_minus_t(a: &Matrix<CycNum>) -> Vec<CycNum> {
    let n = a.rows;
    let mut coeffs = vec![CycNum::zero(); n + 1];
    coeffs[0] = CycNum::one();
    let mut m = Matrix::<CycNum>::zeros(n, n);
    let mut prev = CycNum::one();
    for k in 1..=n {
        m = &(a * &m) + &Matrix::identity(n).scale(&prev);
        let am = a * &m;
        let c = &am.trace() * &CycNum::frac(-1, k as i64);
        coeffs[k] = c.clone();
        prev = c;
    }
    coeffs
}

/// First `len` coefficients of the Molien series (1/|W|) Σ_w 1/det(1 - tw).
pub fn molien_series(w: &ReflGroup, len: usize) -> Vec<BigRational> {
    let mut acc = vec![CycNum::zero(); len];
    for m in &w.elements {
        let p = det_one_minus_t(m);
        // series inverse of p (p_0 = 1)
        let mut inv = vec![CycNum::zero(); len];
        inv[0] = CycNum::one();
        for k in 1..len {
            let mut s = CycNum::zero();
            for j in 1..=k.min(p.len() - 1) {
                s += &(&p[j] * &inv[k - j]);
            }
            inv[k] = -s;
        }
        for (a, b) in acc.iter_mut().zip(&inv) {
            *a += b;
        }
    }
    let n = BigRational::from_integer((w.order() as i64).into());
    acc.into_iter()
        .map(|c| c.to_rational().expect("Molien coefficients are rational") / &n)
        .collect()
}

/// Degrees d_1 ≤ ... ≤ d_n with Molien series Π (1 - t^{d_i})⁻¹.
pub fn invariant_degrees(w: &ReflGroup) -> Result<Vec<u32>> {
    let len = w.order() + 2;
    let mut s = molien_series(w, len);
    let mut degrees = Vec::new();
    for _ in 0..w.rank {
        let Some(d) = (1..len).find(|&k| !s[k].is_zero()) else {
            return Err(Error::ModelInconsistency(format!("Molien series of {} has too few degrees", w.spec)));
        };
        if s[d] < BigRational::zero() {
            return Err(Error::ModelInconsistency(format!("Molien series of {} does not factor", w.spec)));
        }
        // multiply by (1 - t^d)
        for k in (d..len).rev() {
            let t = s[k - d].clone();
            s[k] -= t;
        }
        degrees.push(d as u32);
    }
    if !s[0].is_one() || s[1..].iter().any(|c| !c.is_zero()) {
        return Err(Error::ModelInconsistency(format!("Molien series of {} is not a product of (1 - t^d)⁻¹", w.spec)));
    }
    let prod: u64 = degrees.iter().map(|&d| d as u64).product();
    if prod != w.order() as u64 {
        return Err(Error::ModelInconsistency(format!("Π d_i = {} ≠ |W| = {}", prod, w.order())));
    }
    Ok(degrees)
}

/// Π_i (x^{d_i} - 1)/(x - 1).
pub fn poincare_from_degrees(degrees: &[u32]) -> LPoly {
    degrees.iter().fold(LPoly::one(), |acc, &d| {
        &acc * &LPoly::from_coeffs(0, vec![CycNum::one(); d as usize])
    })
}

/// Poincaré polynomial; for Coxeter groups it is also checked against
/// Σ_w x^{l(w)}.
pub fn poincare_polynomial(w: &ReflGroup) -> Result<LPoly> {
    let p = poincare_from_degrees(&invariant_degrees(w)?);
    if w.is_coxeter() {
        let maxl = (0..w.order()).map(|x| w.length(x)).max().unwrap_or(0);
        let mut c = vec![0i64; maxl + 1];
        for x in 0..w.order() {
            c[w.length(x)] += 1;
        }
        let by_length = LPoly::from_ints(0, &c);
        if by_length != p {
            return Err(Error::ModelInconsistency(format!("{}: Σ x^l(w) = {} but degrees give {}", w.spec, by_length, p)));
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reflgrp::GroupSpec;

    fn g(s: &str) -> ReflGroup {
        ReflGroup::build(&GroupSpec::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn degrees() {
        for (s, d) in [
            ("A1", vec![2]),
            ("A2", vec![2, 3]),
            ("B2", vec![2, 4]),
            ("I2(5)", vec![2, 5]),
            ("G(3,1,2)", vec![3, 6]),
            ("C(3)", vec![3]),
            ("Triv(2)", vec![1, 1]),
            ("A3", vec![2, 3, 4]),
        ] {
            assert_eq!(invariant_degrees(&g(s)).unwrap(), d, "{}", s);
        }
    }

    #[test]
    fn poincare() {
        assert_eq!(poincare_polynomial(&g("A2")).unwrap(), LPoly::from_ints(0, &[1, 2, 2, 1]));
        assert_eq!(poincare_polynomial(&g("A1")).unwrap(), LPoly::from_ints(0, &[1, 1]));
        assert_eq!(poincare_polynomial(&g("B2")).unwrap().eval(&CycNum::one()).unwrap(), CycNum::from_int(8));
        assert_eq!(poincare_polynomial(&g("1")).unwrap(), LPoly::one());
    }
}
