//! Laurent polynomials in one variable over `CycNum`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use serde::{Serialize, Serializer};

use super::CycNum;
use crate::error::{Error, Result};

/// Which variable a polynomial is written in: `x` itself, or `y` with
/// x = y^z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Var {
    X,
    Y { z: u32 },
}

/// Σ c_k v^k for k in `low .. low + coeffs.len()`, normalised so that the
/// first and last stored coefficients are nonzero (empty for 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPoly {
    var: Var,
    low: i64,
    coeffs: Vec<CycNum>,
}

impl LPoly {
    pub fn zero() -> Self {
        LPoly { var: Var::X, low: 0, coeffs: vec![] }
    }

    pub fn constant(c: CycNum) -> Self {
        Self::monomial(c, 0)
    }

    pub fn one() -> Self {
        Self::constant(CycNum::one())
    }

    pub fn x() -> Self {
        Self::monomial(CycNum::one(), 1)
    }

    pub fn monomial(c: CycNum, k: i64) -> Self {
        LPoly { var: Var::X, low: k, coeffs: vec![c] }.normalised()
    }

    /// From coefficients of v^low, v^{low+1}, ...
    pub fn from_coeffs(low: i64, coeffs: Vec<CycNum>) -> Self {
        LPoly { var: Var::X, low, coeffs }.normalised()
    }

    pub fn from_ints(low: i64, coeffs: &[i64]) -> Self {
        Self::from_coeffs(low, coeffs.iter().map(|&c| CycNum::from_int(c)).collect())
    }

    pub fn in_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    pub fn var(&self) -> Var {
        self.var
    }

    fn normalised(mut self) -> Self {
        while self.coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.low = 0;
        } else if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with nonzero coefficient.
    pub fn order(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    /// Highest exponent with nonzero coefficient.
    pub fn degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, k: i64) -> CycNum {
        if k < self.low || k >= self.low + self.coeffs.len() as i64 {
            CycNum::zero()
        } else {
            self.coeffs[(k - self.low) as usize].clone()
        }
    }

    /// (exponent, coefficient) pairs with nonzero coefficients.
    pub fn terms(&self) -> Vec<(i64, CycNum)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.low + i as i64, c.clone()))
            .collect()
    }

    pub fn is_polynomial(&self) -> bool {
        self.is_zero() || self.low >= 0
    }

    /// Whether every coefficient lies in Q.
    pub fn has_rational_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_rational())
    }

    /// Coefficients as rationals, lowest first, if all are rational.
    pub fn rational_coeffs(&self) -> Option<(i64, Vec<BigRational>)> {
        let v: Option<Vec<_>> = self.coeffs.iter().map(|c| c.to_rational()).collect();
        v.map(|v| (self.low, v))
    }

    pub fn scale(&self, c: &CycNum) -> Self {
        LPoly { var: self.var, low: self.low, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
            .normalised()
    }

    pub fn shift(&self, k: i64) -> Self {
        LPoly { var: self.var, low: self.low + k, coeffs: self.coeffs.clone() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = LPoly::one().in_var(self.var);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluate at a point of the variable itself.
    pub fn eval(&self, v: &CycNum) -> Result<CycNum> {
        if self.is_zero() {
            return Ok(CycNum::zero());
        }
        // Horner on the polynomial part, then multiply by v^low.
        let mut acc = CycNum::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * v) + c;
        }
        Ok(&acc * &v.powi(self.low)?)
    }

    pub fn eval_rational(&self, q: &BigRational) -> Result<CycNum> {
        self.eval(&CycNum::from_rational(q.clone()))
    }

    /// Substitute x ↦ c·x (scales the coefficient of x^k by c^k).
    pub fn substitute_scaled(&self, c: &CycNum) -> Result<Self> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for (i, a) in self.coeffs.iter().enumerate() {
            out.push(a * &c.powi(self.low + i as i64)?);
        }
        Ok(LPoly { var: self.var, low: self.low, coeffs: out }.normalised())
    }

    /// Exact division; fails unless the remainder is zero.
    pub fn div_exact(&self, d: &LPoly) -> Result<LPoly> {
        if d.is_zero() {
            return Err(Error::DivisionByZero("LPoly::div_exact".into()));
        }
        if self.is_zero() {
            return Ok(LPoly::zero().in_var(self.var));
        }
        let lead_inv = d.coeffs.last().unwrap().inv()?;
        let dl = d.coeffs.len();
        let mut r = self.coeffs.clone();
        if r.len() < dl {
            return Err(Error::NotDivisible(format!("({}) / ({})", self, d)));
        }
        let qlen = r.len() - dl + 1;
        let mut q = vec![CycNum::zero(); qlen];
        for k in (0..qlen).rev() {
            let c = &r[k + dl - 1] * &lead_inv;
            if !c.is_zero() {
                for (i, di) in d.coeffs.iter().enumerate() {
                    r[k + i] = &r[k + i] - &(&c * di);
                }
            }
            q[k] = c;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return Err(Error::NotDivisible(format!("({}) / ({})", self, d)));
        }
        Ok(LPoly { var: self.var, low: self.low - d.low, coeffs: q }.normalised())
    }

    /// Galois action on the coefficients.
    pub fn galois(&self, k: i64) -> Self {
        LPoly { var: self.var, low: self.low, coeffs: self.coeffs.iter().map(|c| c.galois(k)).collect() }
    }

    /// Coefficients lifted to a common conductor, for canonical comparison.
    pub fn max_conductor(&self) -> u32 {
        self.coeffs.iter().map(|c| c.conductor()).fold(1, num_integer::lcm)
    }
}

fn combine(a: &LPoly, b: &LPoly, sign: bool) -> LPoly {
    if a.is_zero() {
        return if sign { b.clone() } else { -b };
    }
    if b.is_zero() {
        return a.clone();
    }
    let low = a.low.min(b.low);
    let high = a.degree().unwrap().max(b.degree().unwrap());
    let mut out = Vec::with_capacity((high - low + 1) as usize);
    for k in low..=high {
        let x = a.coeff(k);
        let y = b.coeff(k);
        out.push(if sign { &x + &y } else { &x - &y });
    }
    LPoly { var: a.var, low, coeffs: out }.normalised()
}

impl Add for &LPoly {
    type Output = LPoly;
    fn add(self, o: &LPoly) -> LPoly {
        combine(self, o, true)
    }
}

impl Sub for &LPoly {
    type Output = LPoly;
    fn sub(self, o: &LPoly) -> LPoly {
        combine(self, o, false)
    }
}

impl Mul for &LPoly {
    type Output = LPoly;
    fn mul(self, o: &LPoly) -> LPoly {
        if self.is_zero() || o.is_zero() {
            return LPoly::zero().in_var(self.var);
        }
        let mut out = vec![CycNum::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        LPoly { var: self.var, low: self.low + o.low, coeffs: out }.normalised()
    }
}

impl Neg for &LPoly {
    type Output = LPoly;
    fn neg(self) -> LPoly {
        LPoly { var: self.var, low: self.low, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! owned {
    ($tr:ident, $f:ident) => {
        impl $tr for LPoly {
            type Output = LPoly;
            fn $f(self, o: LPoly) -> LPoly {
                (&self).$f(&o)
            }
        }
    };
}
owned!(Add, add);
owned!(Sub, sub);
owned!(Mul, mul);

impl fmt::Display for LPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let v = match self.var {
            Var::X => "x",
            Var::Y { .. } => "y",
        };
        let mut parts = Vec::new();
        for (k, c) in self.terms().into_iter().rev() {
            let cs = c.to_string();
            let cs = if c.is_rational() { cs } else { format!("({})", cs) };
            let mono = match k {
                0 => String::new(),
                1 => v.to_string(),
                _ => format!("{}^{}", v, k),
            };
            parts.push(if k == 0 {
                cs
            } else if cs == "1" {
                mono
            } else if cs == "-1" {
                format!("-{}", mono)
            } else {
                format!("{}*{}", cs, mono)
            });
        }
        let mut s = parts[0].clone();
        for p in &parts[1..] {
            if let Some(rest) = p.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(p);
            }
        }
        write!(f, "{}", s)
    }
}

impl Serialize for LPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn eval_examples() {
        let p = LPoly::from_ints(0, &[1, 1, 1]);
        assert_eq!(p.eval_rational(&q(2)).unwrap(), CycNum::from_int(7));
        let d = LPoly::from_ints(0, &[2, 2, 2]);
        assert_eq!(d.eval_rational(&q(4)).unwrap(), CycNum::from_int(42));
        assert_eq!(LPoly::one().eval_rational(&q(17)).unwrap(), CycNum::one());
    }

    #[test]
    fn laurent_division() {
        // (x+1)(x^2+x+1) / ((x^2+x+1)/x) = x(x+1)
        let p = LPoly::from_ints(0, &[1, 2, 2, 1]);
        let f = LPoly::from_ints(-1, &[1, 1, 1]);
        assert_eq!(p.div_exact(&f).unwrap(), LPoly::from_ints(1, &[1, 1]));
        assert!(p.div_exact(&LPoly::from_ints(0, &[2, 1])).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(LPoly::from_ints(0, &[2, 2, 2]).to_string(), "2*x^2 + 2*x + 2");
        assert_eq!(LPoly::from_ints(-1, &[1, 1]).to_string(), "1 + x^-1");
    }

    #[test]
    fn order_and_degree() {
        let p = LPoly::from_ints(-2, &[0, 3, 0, 1, 0]);
        assert_eq!(p.order(), Some(-1));
        assert_eq!(p.degree(), Some(1));
        assert!(LPoly::zero().degree().is_none());
    }
}
