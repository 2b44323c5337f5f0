//! ℓ-adic valuations, residues modulo ℓ^a and Teichmüller lifts.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// A residue modulo ℓ^a.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ResidueInt {
    pub modulus: u64,
    pub value: u64,
}

impl ResidueInt {
    pub fn new(value: i64, modulus: u64) -> Self {
        ResidueInt { modulus, value: value.rem_euclid(modulus as i64) as u64 }
    }

    pub fn add(self, o: Self) -> Self {
        debug_assert_eq!(self.modulus, o.modulus);
        ResidueInt { modulus: self.modulus, value: (self.value + o.value) % self.modulus }
    }

    pub fn mul(self, o: Self) -> Self {
        debug_assert_eq!(self.modulus, o.modulus);
        ResidueInt { modulus: self.modulus, value: mulmod(self.value, o.value, self.modulus) }
    }

    pub fn neg(self) -> Self {
        ResidueInt { modulus: self.modulus, value: (self.modulus - self.value) % self.modulus }
    }

    pub fn pow(self, e: u64) -> Self {
        ResidueInt { modulus: self.modulus, value: powmod(self.value, e, self.modulus) }
    }

    pub fn is_unit(self) -> bool {
        self.value.gcd(&self.modulus) == 1
    }

    /// Multiplicative order of a unit.
    pub fn order(self) -> Option<u64> {
        if !self.is_unit() {
            return None;
        }
        let mut x = self.value % self.modulus;
        let mut k = 1;
        while x != 1 % self.modulus {
            x = mulmod(x, self.value, self.modulus);
            k += 1;
        }
        Some(k)
    }
}

pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

/// (p, k) with n = p^k, if n is a prime power.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n && !n.is_multiple_of(p) {
        p += 1;
    }
    if !n.is_multiple_of(p) {
        p = n;
    }
    let mut m = n;
    let mut k = 0;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

pub fn smallest_primitive_root(l: u64) -> u64 {
    let n = l - 1;
    let mut factors = Vec::new();
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            factors.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..l).find(|&g| factors.iter().all(|&f| powmod(g, n / f, l) != 1)).unwrap_or(1)
}

/// Teichmüller lift to Z/ℓ^a of g^{(ℓ-1)/e}, g the smallest primitive root.
pub fn lift_root_of_unity(l: u64, a: u32, e: u64) -> Result<ResidueInt> {
    if l.is_multiple_of(2) || !is_prime(l) {
        return Err(Error::UnsupportedParameters(format!("ℓ = {} must be an odd prime", l)));
    }
    if a == 0 || e == 0 || !(l - 1).is_multiple_of(e) {
        return Err(Error::UnsupportedParameters(format!("e = {} must divide ℓ-1 = {} (a = {})", e, l - 1, a)));
    }
    let g = smallest_primitive_root(l);
    let u0 = powmod(g, (l - 1) / e, l);
    let modulus = l.pow(a);
    // x ↦ x^ℓ converges to the Teichmüller representative of u0
    let u = powmod(u0, l.pow(a - 1), modulus);
    Ok(ResidueInt { modulus, value: u })
}

/// Exact ℓ-adic valuation of a nonzero integer.
pub fn v_l_int(n: &BigInt, l: u64) -> i64 {
    let lb = BigInt::from(l);
    let mut m = n.abs();
    let mut v = 0;
    while !m.is_zero() && (&m % &lb).is_zero() {
        m /= &lb;
        v += 1;
    }
    v
}

pub fn v_l_rational(r: &BigRational, l: u64) -> i64 {
    v_l_int(r.numer(), l) - v_l_int(r.denom(), l)
}

/// ℓ-adic valuation of x ∈ Q(ζ_m) under the embedding ζ_m ↦ Teichmüller
/// lift used for the torus (m | ℓ - 1). For rational x this is the usual
/// valuation. Beyond u64 precision the returned value is a lower bound.
pub fn cyc_l_valuation(x: &crate::exactnum::CycNum, l: u64) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::UndefinedValuation("valuation of 0".into()));
    }
    if let Some(r) = x.to_rational() {
        return Ok(v_l_rational(&r, l));
    }
    let m = x.conductor();
    let s = x.min_l_valuation(l).expect("nonzero");
    let lb = BigRational::from_integer(BigInt::from(l));
    let shift = if s >= 0 {
        num_traits::pow(lb.recip(), s as usize)
    } else {
        num_traits::pow(lb, (-s) as usize)
    };
    let y = x * &crate::exactnum::CycNum::from_rational(shift);
    let kmax = (63.0 / (l as f64).log2()).floor() as u32;
    let mut v = 0;
    for k in 1..=kmax {
        let u = lift_root_of_unity(l, k, m as u64)?;
        let img = y.reduce_mod(m, u.value, u.modulus).expect("ℓ-integral after scaling");
        if img != 0 {
            break;
        }
        v = k as i64;
    }
    Ok(s + v)
}

/// r = ℓ^v · (ℓ′-part).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValuationSplit {
    #[serde(serialize_with = "ser_rat")]
    pub input: BigRational,
    pub l: u64,
    pub v: i64,
    #[serde(serialize_with = "ser_rat")]
    pub l_prime_part: BigRational,
}

pub(crate) fn ser_rat<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rat_string(r))
}

pub fn rat_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl ValuationSplit {
    pub fn l_part(&self) -> BigRational {
        let lb = BigRational::from_integer(BigInt::from(self.l));
        if self.v >= 0 {
            num_traits::pow(lb, self.v as usize)
        } else {
            num_traits::pow(lb.recip(), (-self.v) as usize)
        }
    }

    /// The ℓ′-part reduced modulo ℓ (its denominator is prime to ℓ).
    pub fn l_prime_residue(&self) -> u64 {
        let l = BigInt::from(self.l);
        let n = self.l_prime_part.numer().mod_floor(&l);
        let d = self.l_prime_part.denom().mod_floor(&l);
        let n: u64 = n.try_into().unwrap();
        let d: u64 = d.try_into().unwrap();
        mulmod(n, powmod(d, self.l - 2, self.l), self.l)
    }
}

pub fn l_valuation_split(r: &BigRational, l: u64) -> Result<ValuationSplit> {
    if r.is_zero() {
        return Err(Error::UndefinedValuation("valuation of 0".into()));
    }
    let v = v_l_rational(r, l);
    let lb = BigRational::from_integer(BigInt::from(l));
    let lp = if v >= 0 {
        r / num_traits::pow(lb, v as usize)
    } else {
        r * num_traits::pow(lb, (-v) as usize)
    };
    Ok(ValuationSplit { input: r.clone(), l, v, l_prime_part: lp })
}

/// Integer ℓ-adic valuation of a u64.
pub fn v_l_u64(mut n: u64, l: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n.is_multiple_of(l) {
        n /= l;
        v += 1;
    }
    v
}

/// The smallest `count` prime powers q with ℓ^a ∥ q-1.
pub fn q_samples(l: u64, a: u32, count: usize) -> Vec<u64> {
    let la = l.pow(a);
    let mut out = Vec::new();
    let mut q = 2u64;
    while out.len() < count {
        if (q - 1).is_multiple_of(la) && v_l_u64(q - 1, l) == a && prime_power(q).is_some() {
            out.push(q);
        }
        q += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn teichmuller_examples() {
        assert_eq!(lift_root_of_unity(7, 1, 3).unwrap().value, 2);
        assert_eq!(lift_root_of_unity(3, 2, 2).unwrap().value, 8);
        assert_eq!(lift_root_of_unity(7, 2, 3).unwrap().value, 30);
        assert!(lift_root_of_unity(7, 1, 4).is_err());
        assert!(lift_root_of_unity(2, 1, 1).is_err());
    }

    #[test]
    fn valuation_examples() {
        let s = l_valuation_split(&r(42, 1), 3).unwrap();
        assert_eq!((s.v, s.l_prime_part.clone()), (1, r(14, 1)));
        let s = l_valuation_split(&r(9, 2), 3).unwrap();
        assert_eq!((s.v, s.l_prime_part.clone()), (2, r(1, 2)));
        let s = l_valuation_split(&r(1, 1), 5).unwrap();
        assert_eq!(s.v, 0);
        assert!(l_valuation_split(&r(0, 1), 3).is_err());
    }

    #[test]
    fn q_sampling() {
        assert_eq!(q_samples(3, 1, 3), vec![4, 7, 13]);
        assert_eq!(q_samples(7, 1, 3), vec![8, 29, 43]);
        assert_eq!(q_samples(3, 2, 3), vec![19, 37, 64]);
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(13), Some((13, 1)));
    }
}
