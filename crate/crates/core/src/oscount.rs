//! Orlik–Solomon orbit counts: the number of W-orbits on T whose stabiliser
//! is conjugate to a given parabolic, by Möbius inversion over fixed
//! subgroups, by brute-force census, and from the factored polynomial.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::valuation::{mulmod, powmod};
use crate::linalg::solve_square_rational;
use crate::reflgrp::{ParabolicClass, ReflGroup};
use crate::torus::{admissible_primes, orbit_census, Side, Torus};

/// Number of x ∈ (Z/ℓ^a)^n with A x = 0, A given by rows modulo ℓ^a.
pub fn kernel_size(rows: &[Vec<u64>], n: usize, l: u64, a: u32) -> u128 {
    let m = l.pow(a);
    let mut a_: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| x % m).collect()).collect();
    let val = |x: u64| -> u32 {
        if x == 0 {
            a
        } else {
            crate::exactnum::valuation::v_l_u64(x, l).min(a)
        }
    };
    let mut used_cols = vec![false; n];
    let mut used_rows = vec![false; a_.len()];
    let mut size: u128 = 1;
    loop {
        // entry of least valuation among unused rows and columns
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, r) in a_.iter().enumerate() {
            if used_rows[i] {
                continue;
            }
            for j in 0..n {
                if used_cols[j] || r[j] == 0 {
                    continue;
                }
                let v = val(r[j]);
                if best.is_none_or(|b| v < b.0) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((v, pi, pj)) = best else { break };
        used_rows[pi] = true;
        used_cols[pj] = true;
        size *= (l as u128).pow(v);
        let lv = l.pow(v);
        // pivot = ℓ^v·u with u a unit; u⁻¹ modulo ℓ^a via Euler
        let unit = a_[pi][pj] / lv;
        let phi = m / l * (l - 1);
        let uinv = powmod(unit % m, phi - 1, m);
        // clear column pj in other rows (their entries are divisible by ℓ^v)
        for i in 0..a_.len() {
            if i == pi || a_[i][pj] == 0 {
                continue;
            }
            let f = mulmod(a_[i][pj] / lv, uinv, m);
            for j in 0..n {
                let s = mulmod(f, a_[pi][j], m);
                a_[i][j] = (a_[i][j] + m - s) % m;
            }
        }
        // clear row pi by column operations
        for j in 0..n {
            if j == pj || a_[pi][j] == 0 {
                continue;
            }
            let f = mulmod(a_[pi][j] / lv, uinv, m);
            for r in a_.iter_mut() {
                let s = mulmod(f, r[pj], m);
                r[j] = (r[j] + m - s) % m;
            }
        }
    }
    let free = used_cols.iter().filter(|&&u| !u).count();
    size * (m as u128).pow(free as u32)
}

/// The parabolic subgroups of W with their fixed subgroups C_T(P), ordered
/// by inclusion of subgroups (reverse inclusion of fixed subgroups).
#[derive(Clone, Debug)]
pub struct FixedLattice {
    pub l: u64,
    pub a: u32,
    pub subgroups: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub fixed_sizes: Vec<u128>,
    /// contains[i][j]: subgroup i ⊆ subgroup j.
    contains: Vec<Vec<bool>>,
}

impl FixedLattice {
    pub fn new(classes: &[ParabolicClass], t: &Torus) -> Result<Self> {
        let mut subgroups = Vec::new();
        let mut class_of = Vec::new();
        for (c, p) in classes.iter().enumerate() {
            for m in &p.members {
                subgroups.push(m.clone());
                class_of.push(c);
            }
        }
        let n = t.rank;
        let mut fixed_sizes = Vec::with_capacity(subgroups.len());
        for s in &subgroups {
            let mut rows = Vec::new();
            for &x in s {
                let mat = &t.mats[x];
                for i in 0..n {
                    rows.push((0..n).map(|j| (mat[i * n + j] + t.modulus - u64::from(i == j)) % t.modulus).collect());
                }
            }
            let size = kernel_size(&rows, n, t.l, t.a);
            let mut k = size;
            while k.is_multiple_of(t.l as u128) {
                k /= t.l as u128;
            }
            if k != 1 {
                return Err(Error::InternalConsistency(format!("|C_T(P)| = {} is not a power of {}", size, t.l)));
            }
            fixed_sizes.push(size);
        }
        let contains = subgroups
            .iter()
            .map(|a| subgroups.iter().map(|b| a.iter().all(|x| b.binary_search(x).is_ok())).collect())
            .collect();
        Ok(FixedLattice { l: t.l, a: t.a, subgroups, class_of, fixed_sizes, contains })
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.contains[i][j]
    }

    /// μ(i, j) on the subgroup poset.
    pub fn mobius(&self, i: usize, j: usize) -> i64 {
        let mut memo = HashMap::new();
        self.mobius_memo(i, j, &mut memo)
    }

    fn mobius_memo(&self, i: usize, j: usize, memo: &mut HashMap<(usize, usize), i64>) -> i64 {
        if !self.contains[i][j] {
            return 0;
        }
        if i == j {
            return 1;
        }
        if let Some(&v) = memo.get(&(i, j)) {
            return v;
        }
        let mut s = 0;
        for k in 0..self.len() {
            if k != j && self.contains[i][k] && self.contains[k][j] {
                s += self.mobius_memo(i, k, memo);
            }
        }
        memo.insert((i, j), -s);
        -s
    }

    /// Number of points whose stabiliser is exactly subgroup i.
    pub fn exact_count(&self, i: usize) -> i128 {
        let mut memo = HashMap::new();
        (0..self.len())
            .filter(|&j| self.contains[i][j])
            .map(|j| self.mobius_memo(i, j, &mut memo) as i128 * self.fixed_sizes[j] as i128)
            .sum()
    }
}

/// Orbit count for every parabolic class by Möbius inversion.
pub fn os_counts(classes: &[ParabolicClass], t: &Torus) -> Result<Vec<u64>> {
    let lat = FixedLattice::new(classes, t)?;
    classes
        .iter()
        .enumerate()
        .map(|(c, p)| {
            let i = lat.class_of.iter().position(|&k| k == c).expect("class has members");
            let g = lat.exact_count(i);
            if g < 0 || g % p.normaliser_index as i128 != 0 {
                return Err(Error::InternalConsistency(format!(
                    "{} points with stabiliser {} not divisible by |N:P| = {}",
                    g,
                    p.type_name(),
                    p.normaliser_index
                )));
            }
            Ok((g / p.normaliser_index as i128) as u64)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct OsPolynomial {
    pub class: usize,
    pub class_type: String,
    /// Integer roots b_k, ascending.
    pub roots: Vec<i64>,
    pub normaliser_index: usize,
    /// ℓ^a values used (the last one only for verification).
    pub samples: Vec<u64>,
}

impl OsPolynomial {
    /// Π(N - b_k)/|N_W(P):P|.
    pub fn eval(&self, n: u64) -> Option<i128> {
        let p: i128 = self.roots.iter().map(|&b| n as i128 - b as i128).product();
        (p % self.normaliser_index as i128 == 0).then(|| p / self.normaliser_index as i128)
    }
}

fn sample_moduli(w: &ReflGroup, need: usize) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u64, u32)> = Vec::new();
    let mut bound = 50;
    while out.len() < need {
        out = admissible_primes(w, bound)
            .into_iter()
            .flat_map(|l| [(l, l, 1u32), (l * l, l, 2u32)])
            .collect();
        out.sort_unstable();
        bound *= 2;
    }
    out.truncate(need);
    out.into_iter().map(|(_, l, a)| (l, a)).collect()
}

/// Integer roots of a monic integer polynomial (coefficients constant term
/// first); None if it does not split over Z.
fn integer_roots(c: &[BigInt]) -> Option<Vec<i64>> {
    let mut c: Vec<BigInt> = c.to_vec();
    let mut roots = Vec::new();
    while c.len() > 1 && c[0].is_zero() {
        c.remove(0);
        roots.push(0);
    }
    while c.len() > 1 {
        let c0 = c[0].abs().to_i64()?;
        let mut found = None;
        for d in 1..=c0 {
            if c0 % d != 0 {
                continue;
            }
            for r in [d, -d] {
                let rb = BigInt::from(r);
                let v = c.iter().rev().fold(BigInt::zero(), |acc, x| acc * &rb + x);
                if v.is_zero() {
                    found = Some(r);
                    break;
                }
            }
            if found.is_some() {
                break;
            }
        }
        let r = found?;
        // synthetic division by (N - r)
        let deg = c.len() - 1;
        let mut q = vec![BigInt::zero(); deg];
        let mut carry = BigInt::zero();
        for k in (0..deg).rev() {
            carry = &c[k + 1] + carry * BigInt::from(r);
            q[k] = carry.clone();
        }
        c = q;
        roots.push(r);
    }
    if !c[0].is_one() {
        return None;
    }
    roots.sort_unstable();
    Some(roots)
}

/// Interpolates |N_W(P):P| times the orbit count as a polynomial in ℓ^a and
/// factors it over Z.
pub fn os_roots(w: &ReflGroup, classes: &[ParabolicClass], class: usize) -> Result<OsPolynomial> {
    let p = &classes[class];
    let d = w.rank - p.rank;
    let samples = sample_moduli(w, d + 2);
    let mut ns = Vec::new();
    let mut ys = Vec::new();
    for &(l, a) in &samples {
        let t = Torus::with_cap(w, l, a, u64::MAX)?;
        let counts = os_counts(classes, &t)?;
        ns.push(l.pow(a));
        ys.push(BigInt::from(counts[class]) * BigInt::from(p.normaliser_index));
    }
    let k = d + 1;
    let mut mat: Vec<Vec<BigRational>> = (0..k)
        .map(|i| (0..k).map(|j| BigRational::from_integer(BigInt::from(ns[i]).pow(j as u32))).collect())
        .collect();
    let mut rhs: Vec<BigRational> = ys[..k].iter().map(|y| BigRational::from_integer(y.clone())).collect();
    let coeffs = solve_square_rational(&mut mat, &mut rhs)
        .ok_or_else(|| Error::InternalConsistency("interpolation matrix singular".into()))?;
    let check = coeffs
        .iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * BigRational::from_integer(BigInt::from(ns[k])) + c);
    if check != BigRational::from_integer(ys[k].clone()) {
        return Err(Error::Falsification(format!(
            "orbit count for {} is not a polynomial of degree {} in ℓ^a",
            p.type_name(),
            d
        )));
    }
    if coeffs.iter().any(|c| !c.is_integer()) {
        return Err(Error::Falsification(format!("non-integral count polynomial for {}", p.type_name())));
    }
    let ints: Vec<BigInt> = coeffs.iter().map(|c| c.to_integer()).collect();
    let roots = integer_roots(&ints)
        .ok_or_else(|| Error::Falsification(format!("count polynomial for {} has non-integer roots", p.type_name())))?;
    Ok(OsPolynomial {
        class,
        class_type: p.type_name(),
        roots,
        normaliser_index: p.normaliser_index,
        samples: ns,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OsCheck {
    pub class: usize,
    pub class_type: String,
    pub l: u64,
    pub a: u32,
    pub mobius: u64,
    pub census: u64,
    pub formula: Option<i128>,
    pub pass: bool,
}

/// Möbius count, brute-force census and the factored formula at (ℓ, a).
pub fn three_way(w: &ReflGroup, classes: &[ParabolicClass], polys: &[OsPolynomial], l: u64, a: u32) -> Result<Vec<OsCheck>> {
    let t = Torus::new(w, l, a)?;
    let mob = os_counts(classes, &t)?;
    let census = orbit_census(w, &t, classes, Side::Points)?;
    let n = l.pow(a);
    Ok(classes
        .iter()
        .enumerate()
        .map(|(c, p)| {
            let formula = polys[c].eval(n);
            let cen = census.entries[c].orbits as u64;
            OsCheck {
                class: c,
                class_type: p.type_name(),
                l,
                a,
                mobius: mob[c],
                census: cen,
                formula,
                pass: mob[c] == cen && formula == Some(cen as i128),
            }
        })
        .collect())
}

/// (ℓ, a) pairs with ℓ^{an} within the census cap, smallest first.
pub fn census_moduli(w: &ReflGroup, count: usize, cap: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u64, u32)> = admissible_primes(w, 1000)
        .into_iter()
        .flat_map(|l| (1..=3u32).map(move |a| (l.pow(a), l, a)))
        .filter(|&(n, _, _)| (n as u128).pow(w.rank as u32) <= cap as u128)
        .collect();
    out.sort_unstable();
    out.truncate(count);
    out.into_iter().map(|(_, l, a)| (l, a)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reflgrp::{parabolic_classes, GroupSpec};

    fn g(s: &str) -> (ReflGroup, Vec<ParabolicClass>) {
        let w = ReflGroup::build(&GroupSpec::parse(s).unwrap()).unwrap();
        let c = parabolic_classes(&w).unwrap();
        (w, c)
    }

    #[test]
    fn kernel_sizes() {
        // 3x = 0 mod 9 has 3 solutions, 0x = 0 has 9
        assert_eq!(kernel_size(&[vec![3]], 1, 3, 2), 3);
        assert_eq!(kernel_size(&[vec![0]], 1, 3, 2), 9);
        assert_eq!(kernel_size(&[vec![2, 4]], 2, 5, 1), 5);
        assert_eq!(kernel_size(&[], 2, 5, 1), 25);
        // brute force on a 2x2 system modulo 25
        let rows = vec![vec![5, 10], vec![1, 7]];
        let mut count = 0;
        for x in 0..25u64 {
            for y in 0..25u64 {
                if rows.iter().all(|r| (r[0] * x + r[1] * y) % 25 == 0) {
                    count += 1;
                }
            }
        }
        assert_eq!(kernel_size(&rows, 2, 5, 2), count);
    }

    #[test]
    fn small_counts() {
        let (w, c) = g("A1");
        let t = Torus::new(&w, 3, 1).unwrap();
        assert_eq!(os_counts(&c, &t).unwrap(), vec![1, 1]);
        let (w, c) = g("A2");
        let t = Torus::new(&w, 5, 1).unwrap();
        let counts = os_counts(&c, &t).unwrap();
        assert_eq!(counts[0], 2);
        assert_eq!(*counts.last().unwrap(), 1);
    }

    #[test]
    fn roots() {
        let (w, c) = g("A1");
        assert_eq!(os_roots(&w, &c, 0).unwrap().roots, vec![1]);
        let (w, c) = g("A2");
        assert_eq!(os_roots(&w, &c, 0).unwrap().roots, vec![1, 2]);
        assert!(os_roots(&w, &c, c.len() - 1).unwrap().roots.is_empty());
    }

    #[test]
    fn mobius_identity() {
        let (w, c) = g("B2");
        let t = Torus::new(&w, 5, 1).unwrap();
        let lat = FixedLattice::new(&c, &t).unwrap();
        for y in 0..lat.len() {
            for x in 0..lat.len() {
                let s: i64 = (0..lat.len()).filter(|&z| lat.le(y, z) && lat.le(z, x)).map(|z| lat.mobius(z, x)).sum();
                assert_eq!(s, i64::from(x == y));
            }
        }
    }

    #[test]
    fn three_way_agreement() {
        for s in ["A2", "B2", "I2(5)", "G(3,1,2)"] {
            let (w, c) = g(s);
            let polys: Vec<_> = (0..c.len()).map(|k| os_roots(&w, &c, k).unwrap()).collect();
            for (l, a) in census_moduli(&w, 3, 1_000_000) {
                for chk in three_way(&w, &c, &polys, l, a).unwrap() {
                    assert!(chk.pass, "{} {:?}", s, chk);
                }
            }
        }
    }
}
