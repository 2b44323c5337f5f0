//! Elements of cyclotomic fields Q(ζ_m) in the power basis modulo Φ_m.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::valuation::mulmod;
use crate::error::{Error, Result};

/// Precomputed data for one conductor.
#[derive(Debug)]
struct CycData {
    phi: usize,
    /// `pow[j]` is x^j reduced modulo Φ_m, for 0 <= j < max(m, 2φ-1).
    pow: Vec<Vec<i64>>,
}

fn table() -> &'static Mutex<HashMap<u32, Arc<CycData>>> {
    static T: OnceLock<Mutex<HashMap<u32, Arc<CycData>>>> = OnceLock::new();
    T.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn euler_phi(m: u32) -> usize {
    let mut n = m;
    let mut r = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            r -= r / p;
        }
        p += 1;
    }
    if n > 1 {
        r -= r / n;
    }
    r as usize
}

/// Integer coefficients of Φ_m, lowest degree first.
pub fn cyclotomic_poly(m: u32) -> Vec<i64> {
    assert!(m > 0);
    // x^m - 1 divided by Φ_d for all proper divisors d.
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            num = poly_exact_div(&num, &cyclotomic_poly(d));
        }
    }
    num
}

fn poly_exact_div(a: &[i64], b: &[i64]) -> Vec<i64> {
    // b is monic
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let da = a.len() - 1;
    let mut q = vec![0i64; da - db + 1];
    for k in (0..=da - db).rev() {
        let c = r[k + db];
        q[k] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[k + i] -= c * bi;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

fn data(m: u32) -> Arc<CycData> {
    if let Some(d) = table().lock().unwrap().get(&m) {
        return d.clone();
    }
    let poly = cyclotomic_poly(m);
    let phi = poly.len() - 1;
    let len = (m as usize).max(2 * phi);
    let mut pow = Vec::with_capacity(len);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..len {
        pow.push(cur.clone());
        // multiply by x and reduce
        let top = cur[phi - 1];
        for i in (1..phi).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        for i in 0..phi {
            cur[i] -= top * poly[i];
        }
    }
    let d = Arc::new(CycData { phi, pow });
    table().lock().unwrap().insert(m, d.clone());
    d
}

fn lcm(a: u32, b: u32) -> u32 {
    a / a.gcd(&b) * b
}

/// An element of Q(ζ_m). The conductor is part of the representation:
/// mixed-conductor arithmetic lifts both operands to the lcm.
#[derive(Clone, Debug)]
pub struct CycNum {
    m: u32,
    c: Vec<BigRational>,
}

impl CycNum {
    pub fn zero() -> Self {
        CycNum { m: 1, c: vec![BigRational::zero()] }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        CycNum { m: 1, c: vec![BigRational::from_integer(BigInt::from(n))] }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        CycNum { m: 1, c: vec![BigRational::from_integer(n)] }
    }

    pub fn from_rational(r: BigRational) -> Self {
        CycNum { m: 1, c: vec![r] }
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(n.into(), d.into()))
    }

    /// ζ_m^k with ζ_m = exp(2πi/m).
    pub fn zeta(m: u32, k: i64) -> Self {
        let d = data(m);
        let j = k.rem_euclid(m as i64) as usize;
        CycNum { m, c: d.pow[j].iter().map(|&x| BigRational::from_integer(x.into())).collect() }
    }

    pub fn conductor(&self) -> u32 {
        self.m
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    /// Inverse of (`conductor`, `coeffs`): power-basis coefficients in Q(ζ_m).
    pub fn from_parts(m: u32, c: Vec<BigRational>) -> Result<Self> {
        if m == 0 || c.len() != euler_phi(m) {
            return Err(Error::InvalidSpec(format!("{} coefficients for conductor {}", c.len(), m)));
        }
        Ok(CycNum { m, c })
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.to_rational().map(|r| r.is_one()).unwrap_or(false)
    }

    /// The rational value, if this element lies in Q. In the power basis
    /// a rational is exactly a vector supported on the constant term.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.c[1..].iter().all(|x| x.is_zero()) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    pub fn is_rational(&self) -> bool {
        self.to_rational().is_some()
    }

    /// Re-express in Q(ζ_big); requires m | big.
    pub fn lift_to(&self, big: u32) -> Self {
        if big == self.m {
            return self.clone();
        }
        assert!(big.is_multiple_of(self.m), "conductor {} does not divide {}", self.m, big);
        let d = data(big);
        let step = (big / self.m) as usize;
        let mut out = vec![BigRational::zero(); d.phi];
        for (k, ck) in self.c.iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            let row = &d.pow[(k * step) % big as usize];
            for (o, &x) in out.iter_mut().zip(row) {
                if x != 0 {
                    *o += ck * BigRational::from_integer(x.into());
                }
            }
        }
        CycNum { m: big, c: out }
    }

    fn align(a: &Self, b: &Self) -> (Self, Self) {
        let m = lcm(a.m, b.m);
        (a.lift_to(m), b.lift_to(m))
    }

    /// Galois automorphism ζ ↦ ζ^k (k coprime to m).
    pub fn galois(&self, k: i64) -> Self {
        let d = data(self.m);
        let mut out = vec![BigRational::zero(); d.phi];
        for (j, cj) in self.c.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            let e = ((j as i64) * k).rem_euclid(self.m as i64) as usize;
            for (o, &x) in out.iter_mut().zip(&d.pow[e]) {
                if x != 0 {
                    *o += cj * BigRational::from_integer(x.into());
                }
            }
        }
        CycNum { m: self.m, c: out }
    }

    /// Complex conjugation.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("CycNum::inv".into()));
        }
        if self.m == 1 {
            return Ok(CycNum::from_rational(self.c[0].recip()));
        }
        // Solve (multiplication by self) x = 1 over Q.
        let phi = self.c.len();
        let mut cols: Vec<Vec<BigRational>> = Vec::with_capacity(phi);
        for j in 0..phi {
            let z = CycNum::zeta(self.m, j as i64);
            cols.push((self * &z).c);
        }
        let mut a: Vec<Vec<BigRational>> =
            (0..phi).map(|i| (0..phi).map(|j| cols[j][i].clone()).collect()).collect();
        let mut rhs = vec![BigRational::zero(); phi];
        rhs[0] = BigRational::one();
        let x = crate::linalg::solve_square_rational(&mut a, &mut rhs)
            .ok_or_else(|| Error::DivisionByZero("CycNum::inv singular".into()))?;
        Ok(CycNum { m: self.m, c: x })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = CycNum::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn powi(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow((-e) as u64))
        }
    }

    /// Numerical value, for diagnostics and floating oracles in tests.
    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.c.iter().enumerate() {
            let v = c.to_f64().unwrap_or(f64::NAN);
            let ang = 2.0 * std::f64::consts::PI * k as f64 / self.m as f64;
            re += v * ang.cos();
            im += v * ang.sin();
        }
        (re, im)
    }

    /// Coefficient vector in the power basis of Q(ζ_m), lifted to `m`.
    pub fn key_at(&self, m: u32) -> Vec<BigRational> {
        self.lift_to(m).c
    }

    /// Image under Z[ζ_m] localised at N → Z/N with ζ_m ↦ `root`, where `root`
    /// is a root of Φ_m modulo N and m is a multiple of the conductor.
    /// None when a denominator is not invertible modulo N.
    pub fn reduce_mod(&self, m: u32, root: u64, modulus: u64) -> Option<u64> {
        let n = BigInt::from(modulus);
        let mut acc = 0u64;
        let mut pw = 1 % modulus;
        for c in self.key_at(m) {
            let num: u64 = c.numer().mod_floor(&n).try_into().ok()?;
            let den: BigInt = c.denom().mod_floor(&n);
            let den_inv = den.extended_gcd(&n);
            if !den_inv.gcd.is_one() {
                return None;
            }
            let di: u64 = den_inv.x.mod_floor(&n).try_into().ok()?;
            let term = mulmod(mulmod(num, di, modulus), pw, modulus);
            acc = (acc + term) % modulus;
            pw = mulmod(pw, root, modulus);
        }
        Some(acc)
    }

    /// Whether every power-basis coefficient has nonnegative ℓ-valuation.
    pub fn is_l_integral(&self, l: u64) -> bool {
        let lb = BigInt::from(l);
        self.c.iter().all(|x| !x.denom().is_multiple_of(&lb))
    }

    /// Minimum ℓ-valuation over the power-basis coefficients (None for 0).
    pub fn min_l_valuation(&self, l: u64) -> Option<i64> {
        self.c
            .iter()
            .filter(|x| !x.is_zero())
            .map(|x| crate::exactnum::valuation::v_l_rational(x, l))
            .min()
    }
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        if self.m == other.m {
            return self.c == other.c;
        }
        let (a, b) = CycNum::align(self, other);
        a.c == b.c
    }
}
impl Eq for CycNum {}

impl From<i64> for CycNum {
    fn from(n: i64) -> Self {
        CycNum::from_int(n)
    }
}

impl From<BigRational> for CycNum {
    fn from(r: BigRational) -> Self {
        CycNum::from_rational(r)
    }
}

impl<'a> Add<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn add(self, o: &CycNum) -> CycNum {
        if self.m == o.m {
            return CycNum { m: self.m, c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() };
        }
        let (a, b) = CycNum::align(self, o);
        &a + &b
    }
}

impl<'a> Sub<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn sub(self, o: &CycNum) -> CycNum {
        if self.m == o.m {
            return CycNum { m: self.m, c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() };
        }
        let (a, b) = CycNum::align(self, o);
        &a - &b
    }
}

impl<'a> Mul<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn mul(self, o: &CycNum) -> CycNum {
        if self.m != o.m {
            if self.m == 1 {
                let s = &self.c[0];
                return CycNum { m: o.m, c: o.c.iter().map(|x| x * s).collect() };
            }
            if o.m == 1 {
                let s = &o.c[0];
                return CycNum { m: self.m, c: self.c.iter().map(|x| x * s).collect() };
            }
            let (a, b) = CycNum::align(self, o);
            return &a * &b;
        }
        let m = self.m;
        if m == 1 {
            return CycNum { m, c: vec![&self.c[0] * &o.c[0]] };
        }
        let d = data(m);
        let phi = d.phi;
        let mut prod = vec![BigRational::zero(); 2 * phi - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                prod[i + j] += a * b;
            }
        }
        let mut out: Vec<BigRational> = prod[..phi].to_vec();
        for (k, ck) in prod.iter().enumerate().skip(phi) {
            if ck.is_zero() {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(&d.pow[k]) {
                if x != 0 {
                    *o += ck * BigRational::from_integer(x.into());
                }
            }
        }
        CycNum { m, c: out }
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum { m: self.m, c: self.c.iter().map(|x| -x).collect() }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $f(self, o: CycNum) -> CycNum {
                (&self).$f(&o)
            }
        }
        impl<'a> $tr<&'a CycNum> for CycNum {
            type Output = CycNum;
            fn $f(self, o: &CycNum) -> CycNum {
                (&self).$f(o)
            }
        }
        impl<'a> $tr<CycNum> for &'a CycNum {
            type Output = CycNum;
            fn $f(self, o: CycNum) -> CycNum {
                self.$f(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl AddAssign<&CycNum> for CycNum {
    fn add_assign(&mut self, o: &CycNum) {
        if self.m == o.m {
            for (a, b) in self.c.iter_mut().zip(&o.c) {
                *a += b;
            }
        } else {
            *self = &*self + o;
        }
    }
}

impl SubAssign<&CycNum> for CycNum {
    fn sub_assign(&mut self, o: &CycNum) {
        if self.m == o.m {
            for (a, b) in self.c.iter_mut().zip(&o.c) {
                *a -= b;
            }
        } else {
            *self = &*self - o;
        }
    }
}

impl MulAssign<&CycNum> for CycNum {
    fn mul_assign(&mut self, o: &CycNum) {
        *self = &*self * o;
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Printed in GAP-like notation, e.g. `1 + 2*E(3)^2`.
impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.to_rational() {
            return write!(f, "{}", fmt_rat(&r));
        }
        let mut first = true;
        for (k, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            let sep = match (first, neg) {
                (true, false) => "",
                (true, true) => "-",
                (false, false) => " + ",
                (false, true) => " - ",
            };
            let z = match k {
                0 => String::new(),
                1 => format!("E({})", self.m),
                _ => format!("E({})^{}", self.m, k),
            };
            let body = if k == 0 {
                fmt_rat(&a)
            } else if a.is_one() {
                z
            } else {
                format!("{}*{}", fmt_rat(&a), z)
            };
            write!(f, "{}{}", sep, body)?;
            first = false;
        }
        Ok(())
    }
}

impl Serialize for CycNum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(euler_phi(21), 12);
    }

    #[test]
    fn roots_of_unity() {
        for m in [1u32, 2, 3, 4, 5, 6, 7, 12, 21] {
            let z = CycNum::zeta(m, 1);
            assert!(z.pow(m as u64).is_one());
            for k in 1..m {
                assert!(!z.pow(k as u64).is_one(), "ζ_{}^{} = 1", m, k);
            }
        }
    }

    #[test]
    fn sum_of_roots_vanishes() {
        let mut s = CycNum::zero();
        for k in 0..5 {
            s += &CycNum::zeta(5, k);
        }
        assert!(s.is_zero());
        // 2 + ζ_6 + ζ_6^{-1} = 3
        let t = CycNum::from_int(2) + CycNum::zeta(6, 1) + CycNum::zeta(6, -1);
        assert_eq!(t.to_rational().unwrap(), BigRational::from_integer(3.into()));
    }

    #[test]
    fn mixed_conductors() {
        let a = CycNum::zeta(3, 1);
        let b = CycNum::zeta(4, 1);
        let p = &a * &b;
        assert_eq!(p.conductor(), 12);
        assert_eq!(p, CycNum::zeta(12, 7));
        assert_eq!(CycNum::zeta(6, 2), CycNum::zeta(3, 1));
    }

    #[test]
    fn inverse_and_conj() {
        let a = CycNum::from_int(2) - CycNum::zeta(7, 3);
        let b = a.inv().unwrap();
        assert!((&a * &b).is_one());
        let n = &a * &a.conj();
        assert!(n.conj() == n);
        assert!(CycNum::zero().inv().is_err());
    }

    #[test]
    fn display() {
        assert_eq!(CycNum::frac(-3, 2).to_string(), "-3/2");
        assert_eq!(CycNum::zeta(3, 1).to_string(), "E(3)");
        assert_eq!(CycNum::zeta(3, 2).to_string(), "-1 - E(3)");
    }
}
