//! Comparison with the classical algebra 𝒴′ = e_U Q[GL₂(q)] e_U, cut by
//! f = e_H e_U where H is the ℓ′-part of the diagonal torus.

use serde::Serialize;

use super::{build_model, exact_rank, flatten, YokModel};
use crate::error::{Error, Result};
use crate::exactnum::valuation::{is_prime, prime_power, v_l_u64};
use crate::exactnum::CycNum;
use crate::linalg::{coordinates, inverse, Matrix};
use crate::reflgrp::{GroupSpec, ReflGroup};

/// Finite field by addition and multiplication tables.
struct Fq {
    q: usize,
    add: Vec<Vec<u8>>,
    mul: Vec<Vec<u8>>,
    inv: Vec<u8>,
    neg: Vec<u8>,
}

fn poly_mulmod(x: &[u64], y: &[u64], modp: &[u64], p: u64) -> Vec<u64> {
    let k = modp.len() - 1;
    let mut r = vec![0u64; 2 * k];
    for (i, a) in x.iter().enumerate() {
        for (j, b) in y.iter().enumerate() {
            r[i + j] = (r[i + j] + a * b) % p;
        }
    }
    // modp is monic of degree k
    for d in (k..2 * k).rev() {
        let c = r[d];
        if c != 0 {
            for (i, m) in modp.iter().enumerate() {
                r[d - k + i] = (r[d - k + i] + p * p - c * m % p) % p;
            }
        }
    }
    r.truncate(k);
    r
}

impl Fq {
    fn new(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or_else(|| Error::InvalidQ(format!("{} is not a prime power", q)))?;
        let k = k as usize;
        // Monic irreducible of degree k ≤ 3: no roots in F_p.
        let modp: Vec<u64> = (0..p.pow(k as u32))
            .map(|c| {
                let mut v: Vec<u64> = (0..k).map(|i| c / p.pow(i as u32) % p).collect();
                v.push(1);
                v
            })
            .find(|m| k == 1 || (0..p).all(|x| m.iter().rev().fold(0, |acc, c| (acc * x + c) % p) != 0))
            .ok_or_else(|| Error::InvalidQ("no irreducible polynomial".into()))?;
        if k > 3 {
            return Err(Error::InvalidQ(format!("q = {} has degree above 3", q)));
        }
        let q = q as usize;
        let digits = |x: usize| -> Vec<u64> { (0..k).map(|i| (x as u64 / p.pow(i as u32)) % p).collect() };
        let undigits = |v: &[u64]| -> u8 { v.iter().rev().fold(0u64, |acc, c| acc * p + c) as u8 };
        let mut add = vec![vec![0u8; q]; q];
        let mut mul = vec![vec![0u8; q]; q];
        for x in 0..q {
            for y in 0..q {
                let (dx, dy) = (digits(x), digits(y));
                let s: Vec<u64> = dx.iter().zip(&dy).map(|(a, b)| (a + b) % p).collect();
                add[x][y] = undigits(&s);
                mul[x][y] = if k == 1 { ((x * y) as u64 % p) as u8 } else { undigits(&poly_mulmod(&dx, &dy, &modp, p)) };
            }
        }
        let inv = (0..q).map(|x| (1..q).find(|&y| mul[x][y] == 1).unwrap_or(0) as u8).collect();
        let neg = (0..q).map(|x| (0..q).find(|&y| add[x][y] == 0).unwrap() as u8).collect();
        Ok(Fq { q, add, mul, inv, neg })
    }

    fn order_of(&self, x: u8) -> usize {
        let mut y = x;
        let mut n = 1;
        while y != 1 {
            y = self.mul[y as usize][x as usize];
            n += 1;
        }
        n
    }
}

type G2 = [u8; 4];

fn gmul(f: &Fq, x: &G2, y: &G2) -> G2 {
    let m = |a: u8, b: u8| f.mul[a as usize][b as usize];
    let s = |a: u8, b: u8| f.add[a as usize][b as usize];
    [
        s(m(x[0], y[0]), m(x[1], y[2])),
        s(m(x[0], y[1]), m(x[1], y[3])),
        s(m(x[2], y[0]), m(x[3], y[2])),
        s(m(x[2], y[1]), m(x[3], y[3])),
    ]
}

/// Index in N = T₀ ∪ T₀w of the representative of U g U.
fn bruhat_index(f: &Fq, g: &G2) -> usize {
    let qm = f.q - 1;
    if g[2] == 0 {
        (g[0] as usize - 1) * qm + (g[3] as usize - 1)
    } else {
        let m = |a: u8, b: u8| f.mul[a as usize][b as usize];
        let det = f.add[m(g[0], g[3]) as usize][f.neg[m(g[1], g[2]) as usize] as usize];
        let x = f.neg[m(det, f.inv[g[2] as usize]) as usize];
        qm * qm + (x as usize - 1) * qm + (g[2] as usize - 1)
    }
}

fn n_element(f: &Fq, k: usize) -> G2 {
    let qm = f.q - 1;
    if k < qm * qm {
        [(k / qm + 1) as u8, 0, 0, (k % qm + 1) as u8]
    } else {
        let k = k - qm * qm;
        [0, (k / qm + 1) as u8, (k % qm + 1) as u8, 0]
    }
}

/// 𝒴′ on the basis B_n = e_U n e_U, with B_a B_b = q⁻¹ Σ_{u ∈ U} B_{[a u b]}.
struct YPrime {
    q: usize,
    n: usize,
    /// table[a·n + b] = (c, count) pairs.
    table: Vec<Vec<(usize, u32)>>,
}

type Vector = Vec<CycNum>;

impl YPrime {
    fn new(f: &Fq) -> Self {
        let n = 2 * (f.q - 1) * (f.q - 1);
        let elems: Vec<G2> = (0..n).map(|k| n_element(f, k)).collect();
        let mut table = Vec::with_capacity(n * n);
        for a in &elems {
            for b in &elems {
                let mut counts = std::collections::BTreeMap::new();
                for beta in 0..f.q as u8 {
                    let g = gmul(f, &gmul(f, a, &[1, beta, 0, 1]), b);
                    *counts.entry(bruhat_index(f, &g)).or_insert(0u32) += 1;
                }
                table.push(counts.into_iter().collect());
            }
        }
        YPrime { q: f.q, n, table }
    }

    fn basis(&self, k: usize) -> Vector {
        let mut v = vec![CycNum::zero(); self.n];
        v[k] = CycNum::one();
        v
    }

    fn mul(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = vec![CycNum::zero(); self.n];
        let inv_q = CycNum::frac(1, self.q as i64);
        for (a, xa) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (b, yb) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let xy = &(xa * yb) * &inv_q;
                for &(c, cnt) in &self.table[a * self.n + b] {
                    out[c] += &(&xy * &CycNum::from_int(cnt as i64));
                }
            }
        }
        out
    }
}

fn vadd(x: &Vector, y: &Vector) -> Vector {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

fn vsub(x: &Vector, y: &Vector) -> Vector {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

fn vscale(x: &Vector, c: &CycNum) -> Vector {
    x.iter().map(|a| a * c).collect()
}

/// √q in a cyclotomic field (Gauss sums for odd p).
fn sqrt_q(q: u64) -> Result<CycNum> {
    let (p, k) = prime_power(q).ok_or_else(|| Error::InvalidQ(format!("{} is not a prime power", q)))?;
    let outer = CycNum::from_int(p.pow(k / 2) as i64);
    if k % 2 == 0 {
        return Ok(outer);
    }
    let root = if p == 2 {
        &CycNum::zeta(8, 1) + &CycNum::zeta(8, -1)
    } else {
        let pi = p as i64;
        let mut g = CycNum::zero();
        for a in 1..pi {
            let residue = (1..pi).any(|x| x * x % pi == a);
            let z = CycNum::zeta(p as u32, a);
            g = if residue { &g + &z } else { &g - &z };
        }
        if p % 4 == 1 { g } else { &CycNum::zeta(4, 1) * &g }
    };
    let r = &outer * &root;
    if &r * &r != CycNum::from_int(q as i64) {
        return Err(Error::InternalConsistency("square root of q".into()));
    }
    Ok(r)
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassicalReport {
    pub q: u64,
    pub l: u64,
    pub a: u32,
    pub group_order: usize,
    pub y_prime_dimension: usize,
    pub cut_dimension: usize,
    pub expected_dimension: usize,
    pub image_rank: usize,
    /// s² = 1 - q⁻¹(E - sE) in 𝒴′.
    pub classical_relation: bool,
    /// (†) for the image of y_r.
    pub dagger: bool,
    pub action: bool,
    pub torus_relations: bool,
    /// Basis products compared against the model's structure constants.
    pub products_checked: usize,
    pub products_ok: Option<bool>,
    /// The map y_t ↦ (ℓ^a/(q(q-1))) t′f, y_r ↦ -s f: does y_1 go to f?
    pub literal_unit: bool,
    /// ... and does its y_r image satisfy (†)?
    pub literal_dagger: bool,
    pub pass: bool,
}

/// Largest algebra dimension on which every basis product is compared.
pub const FULL_PRODUCT_CAP: usize = 40;

/// Build 𝒴′ for GL₂(q), cut by f, and compare with 𝒴 for S₂ acting on Z²
/// under y_t ↦ t′f, y_r ↦ -s⁻¹f with s = √q·W + (1-√q)/(q-1)·W·E.
pub fn classical_gl2_compare(q: u64, l: u64) -> Result<ClassicalReport> {
    if q > 8 {
        return Err(Error::SizeLimit(format!("q = {} exceeds 8", q)));
    }
    if l == 2 || !is_prime(l) || q < 2 || !(q - 1).is_multiple_of(l) {
        return Err(Error::InvalidQ(format!("need an odd prime ℓ dividing q - 1, got ℓ = {}, q = {}", l, q)));
    }
    let a = v_l_u64(q - 1, l);
    let big_l = l.pow(a) as usize;
    let f = Fq::new(q)?;
    let yp = YPrime::new(&f);
    let qm = f.q - 1;
    let group_order = (f.q * f.q - 1) * (f.q * f.q - f.q);
    let diag = |x: u8, y: u8| (x as usize - 1) * qm + (y as usize - 1);
    let one = yp.basis(diag(1, 1));
    // n = [[0, -1], [1, 0]]; in odd characteristic the antidiagonal swap fails
    // the quadratic relation.
    let w_el = yp.basis(bruhat_index(&f, &[0, f.neg[1], 1, 0]));
    // E = Σ over [T₀, w] = {diag(b, b⁻¹)}.
    let e_full = (1..f.q as u8).fold(vec![CycNum::zero(); yp.n], |acc, b| vadd(&acc, &yp.basis(diag(b, f.inv[b as usize]))));
    let rq = sqrt_q(q)?;
    let coef = &(&CycNum::one() - &rq) * &CycNum::frac(1, qm as i64);
    let s = vadd(&vscale(&w_el, &rq), &vscale(&yp.mul(&w_el, &e_full), &coef));
    let classical_relation = yp.mul(&s, &s)
        == vsub(&one, &vscale(&vsub(&e_full, &yp.mul(&s, &e_full)), &CycNum::frac(1, q as i64)));
    // f = e_H e_U.
    let m = qm / big_l;
    let hs: Vec<u8> = (1..f.q as u8).filter(|&x| m.is_multiple_of(f.order_of(x))).collect();
    let mut cut = vec![CycNum::zero(); yp.n];
    for &x in &hs {
        for &y in &hs {
            cut = vadd(&cut, &yp.basis(diag(x, y)));
        }
    }
    let cut = vscale(&cut, &CycNum::frac(1, (hs.len() * hs.len()) as i64));
    let cut_vectors: Vec<Vector> = (0..yp.n).map(|k| yp.mul(&yp.mul(&cut, &yp.basis(k)), &cut)).collect();
    let (cut_dimension, _, _) = exact_rank(&cut_vectors);
    // s⁻¹ in 𝒴′.
    let columns: Vec<Vector> = (0..yp.n).map(|k| yp.mul(&s, &yp.basis(k))).collect();
    let s_inv = coordinates(&columns, &one).ok_or_else(|| Error::InternalConsistency("s is not invertible".into()))?;
    if yp.mul(&s, &s_inv) != one {
        return Err(Error::InternalConsistency("s·s⁻¹ ≠ 1".into()));
    }
    // Model side.
    let w = ReflGroup::build(&GroupSpec::parse("Sym(2)")?)?;
    let model = build_model(&w, l, a, q)?;
    let torus = &model.torus;
    let gamma = (1..f.q as u8).find(|&x| f.order_of(x) == qm).expect("primitive element");
    let g0 = (0..m).fold(1u8, |acc, _| f.mul[acc as usize][gamma as usize]);
    let pw = |k: u64| (0..k).fold(1u8, |acc, _| f.mul[acc as usize][g0 as usize]);
    let phi_t = |t: &[u64], scale: &CycNum| vscale(&yp.mul(&yp.basis(diag(pw(t[0]), pw(t[1]))), &cut), scale);
    let unit_scale = CycNum::one();
    let phi_r = vscale(&yp.mul(&s_inv, &cut), &CycNum::from_int(-1));
    let images: Vec<Vector> = (0..torus.size())
        .flat_map(|ti| {
            let yt = phi_t(&torus.decode(ti), &unit_scale);
            let yr = yp.mul(&yt, &phi_r);
            let mut out = vec![yt.clone(), yt];
            out[w.words.iter().position(|wd| wd == &[0]).unwrap()] = yr;
            out
        })
        .collect();
    let (image_rank, _, _) = exact_rank(&images);
    let expected_dimension = 2 * big_l * big_l;
    let e_syl = model.commutators[0]
        .iter()
        .fold(vec![CycNum::zero(); yp.n], |acc, t| vadd(&acc, &phi_t(t, &unit_scale)));
    let v = CycNum::from_int(model.v);
    let dagger_holds = |y: &Vector| {
        yp.mul(&vadd(y, &cut), &vsub(&vsub(y, &cut), &vscale(&e_syl, &v))).iter().all(|c| c.is_zero())
    };
    let dagger = dagger_holds(&phi_r);
    let ge = model.gen_elements[0];
    let mut action = true;
    let mut torus_relations = true;
    for i in 0..2 {
        let t: Vec<u64> = (0..2).map(|j| u64::from(i == j)).collect();
        let rt = torus.act(crate::torus::Side::Points, ge, &t);
        let yt = phi_t(&t, &unit_scale);
        action &= yp.mul(&phi_r, &yt) == yp.mul(&phi_t(&rt, &unit_scale), &phi_r);
        let power = (0..big_l).fold(cut.clone(), |acc, _| yp.mul(&acc, &yt));
        torus_relations &= power == cut;
    }
    let products_ok = if expected_dimension <= FULL_PRODUCT_CAP {
        Some(check_products(&model, &yp, &images)?)
    } else {
        None
    };
    let products_checked = if products_ok.is_some() { expected_dimension * expected_dimension } else { 0 };
    let lit_scale = CycNum::frac(big_l as i64, (q * (q - 1)) as i64);
    let literal_unit = phi_t(&[0, 0], &lit_scale) == cut;
    let literal_dagger = dagger_holds(&vscale(&yp.mul(&s, &cut), &CycNum::from_int(-1)));
    let pass = cut_dimension == expected_dimension
        && image_rank == expected_dimension
        && classical_relation
        && dagger
        && action
        && torus_relations
        && products_ok != Some(false);
    Ok(ClassicalReport {
        q,
        l,
        a,
        group_order,
        y_prime_dimension: yp.n,
        cut_dimension,
        expected_dimension,
        image_rank,
        classical_relation,
        dagger,
        action,
        torus_relations,
        products_checked,
        products_ok,
        literal_unit,
        literal_dagger,
        pass,
    })
}

/// φ(b_i)φ(b_j) = Σ_k c^k_{ij} φ(b_k) with c^k_{ij} read off the model.
fn check_products(model: &YokModel, yp: &YPrime, images: &[Vector]) -> Result<bool> {
    let mons = model.monomials();
    let cols: Vec<Vec<CycNum>> = mons.iter().map(flatten).collect();
    let mat = Matrix::from_rows(cols.clone()).transpose();
    let inv = inverse(&mat).ok_or_else(|| Error::ModelInconsistency("monomials are not a basis".into()))?;
    for (i, bi) in mons.iter().enumerate() {
        for (j, bj) in mons.iter().enumerate() {
            let prod = flatten(&super::bmul(bi, bj));
            let c = inv.mul_vec(&prod);
            let rhs = c
                .iter()
                .zip(images)
                .filter(|(ck, _)| !ck.is_zero())
                .fold(vec![CycNum::zero(); yp.n], |acc, (ck, im)| vadd(&acc, &vscale(im, ck)));
            if yp.mul(&images[i], &images[j]) != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
