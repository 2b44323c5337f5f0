//! The specialised Yokonuma-type algebra 𝒴(W, a, v) through its model by
//! induced modules, with the relation, freeness, trace and α checks.
//!
//! One block per pair (θ-orbit, φ ∈ Irr(W_θ)): the module induced from the
//! stabiliser's Hecke algebra at x = q, on the basis y_d ⊗ m with d running
//! over the minimal coset representatives of W/W_θ.

pub mod classical;
pub mod dump;
pub mod rewrite;

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::valuation::{is_prime, powmod};
use crate::exactnum::{cyc_l_valuation, CycNum, LPoly};
use crate::hecke::{schur_element, HeckeType};
use crate::linalg::{coordinates, nullspace, rank, rank_mod_p, Matrix};
use crate::reflgrp::{parabolic_classes, ReflGroup};
use crate::torus::{orbit_census, semidirect_class_count, Side, Torus};

pub use classical::{classical_gl2_compare, ClassicalReport};
pub use dump::{model_dump, ModelDump};
pub use rewrite::{rewriting_check, RegularRep, RewriteReport};

pub type Mat = Matrix<CycNum>;
/// Block-diagonal matrix, one entry per block.
pub type Blocks = Vec<Mat>;

/// Largest |T||W| accepted by the model builder.
pub const MODEL_CAP: usize = 4096;

#[derive(Clone, Debug, Serialize)]
pub struct YokBlock {
    pub char_orbit: usize,
    pub theta: Vec<u64>,
    pub stabiliser: String,
    pub label: String,
    /// Minimal coset representatives of W/W_θ, length-lex.
    pub cosets: Vec<usize>,
    pub rep_dim: usize,
    pub dim: usize,
    /// f_{θ,φ}(q).
    pub schur: CycNum,
    /// dθ for each coset representative d.
    #[serde(skip)]
    pub twisted: Vec<Vec<u64>>,
    /// Images of the braid generators.
    #[serde(skip)]
    pub gens: Vec<Mat>,
}

#[derive(Clone, Debug)]
pub struct YokModel {
    pub group: String,
    pub l: u64,
    pub a: u32,
    pub q: u64,
    pub v: i64,
    pub torus: Torus,
    pub order: usize,
    pub gen_orders: Vec<u32>,
    pub gen_elements: Vec<usize>,
    /// (i, j, m_ij) for the Coxeter generators; empty for cyclic groups.
    pub braid: Vec<(usize, usize, u32)>,
    pub words: Vec<Vec<usize>>,
    /// [T, r] = (1 - r)T for each generator r.
    pub commutators: Vec<Vec<Vec<u64>>>,
    pub blocks: Vec<YokBlock>,
}

fn unit(n: usize, i: usize) -> Vec<u64> {
    (0..n).map(|j| u64::from(i == j)).collect()
}

pub fn bmul(x: &Blocks, y: &Blocks) -> Blocks {
    x.iter().zip(y).map(|(a, b)| a * b).collect()
}

pub fn badd(x: &Blocks, y: &Blocks) -> Blocks {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

pub fn bsub(x: &Blocks, y: &Blocks) -> Blocks {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub fn bscale(x: &Blocks, c: &CycNum) -> Blocks {
    x.iter().map(|a| a.scale(c)).collect()
}

pub fn bzero(x: &Blocks) -> bool {
    x.iter().all(|a| a.is_zero())
}

pub fn flatten(x: &Blocks) -> Vec<CycNum> {
    x.iter().flat_map(|a| a.data.iter().cloned()).collect()
}

fn commutator(t: &Torus, g: usize) -> Vec<Vec<u64>> {
    let mut set = BTreeSet::new();
    for i in 0..t.size() {
        let x = t.decode(i);
        let rx = t.act(Side::Points, g, &x);
        set.insert(t.add(&x, &t.neg(&rx)));
    }
    set.into_iter().collect()
}

/// Build the model at x = q. q = 1 gives the ψ₁ specialisation (v = 0).
pub fn build_model(w: &ReflGroup, l: u64, a: u32, q: u64) -> Result<YokModel> {
    let torus = Torus::new(w, l, a)?;
    let big_l = torus.modulus;
    if q == 0 || !(q - 1).is_multiple_of(big_l) {
        return Err(Error::InvalidQ(format!("q = {} needs ℓ^a = {} | q - 1", q, big_l)));
    }
    if torus.size() * w.order() > MODEL_CAP {
        return Err(Error::SizeLimit(format!("|T||W| = {} exceeds {}", torus.size() * w.order(), MODEL_CAP)));
    }
    let v = ((q - 1) / big_l) as i64;
    let ngens = w.gens.len();
    let cyclic = ngens == 1 && w.gen_orders[0] > 2;
    if !cyclic && !(w.gen_orders.iter().all(|&o| o == 2) && w.is_coxeter()) {
        return Err(Error::UnsupportedParameters(format!(
            "the model needs a Coxeter group or a cyclic group, got {}",
            w.spec
        )));
    }
    let gen_elements: Vec<usize> = (0..ngens).map(|g| w.gen_element(g)).collect();
    let commutators: Vec<Vec<Vec<u64>>> = gen_elements.iter().map(|&g| commutator(&torus, g)).collect();
    if let Some(c) = commutators.iter().find(|c| c.len() as u64 != big_l) {
        return Err(Error::UnsupportedParameters(format!("|[T, r]| = {} differs from ℓ^a", c.len())));
    }
    let mut braid = Vec::new();
    if !cyclic {
        for i in 0..ngens {
            for j in i + 1..ngens {
                braid.push((i, j, w.order_of(w.mul(gen_elements[i], gen_elements[j]))));
            }
        }
    }
    let classes = parabolic_classes(w)?;
    let chars = orbit_census(w, &torus, &classes, Side::Characters)?;
    let x = CycNum::from_int(q as i64);
    let mut blocks = Vec::new();
    for (k, o) in chars.orbits.iter().enumerate() {
        let class = &classes[o.class];
        let (Some(j), Some(_)) = (&class.standard, &class.hecke_type) else {
            return Err(Error::UnsupportedStabiliser(format!("stabiliser of {:?} is not standard", o.rep)));
        };
        let (_, theta) = torus
            .align(w, Side::Characters, &o.rep, &o.stabiliser, &class.elements)
            .ok_or_else(|| Error::InternalConsistency(format!("cannot move {:?} to a standard stabiliser", o.rep)))?;
        let (ty, type_gens) = w.hecke_type(j)?;
        let cosets: Vec<usize> = if cyclic && !j.is_empty() {
            vec![0]
        } else {
            (0..w.order())
                .filter(|&d| j.iter().all(|&s| w.length(w.mul_gen(d, s)) > w.length(d)))
                .collect()
        };
        if cosets.len() * class.order() != w.order() {
            return Err(Error::InternalConsistency(format!(
                "{} minimal coset representatives for a parabolic of order {}",
                cosets.len(),
                class.order()
            )));
        }
        let twisted: Vec<Vec<u64>> = cosets.iter().map(|&d| torus.act(Side::Characters, d, &theta)).collect();
        for label in ty.irreps() {
            let rho = ty.representation(&label, &x);
            let rep_dim = ty.irrep_dim(&label);
            let gens = if cyclic {
                cyclic_block(w, &torus, &commutators[0], &theta, &cosets, &rho, v)
            } else {
                coxeter_block(w, &torus, &commutators, &twisted, &cosets, &type_gens, &rho, rep_dim, v)?
            };
            let schur = schur_element(&ty, &label).eval(&x)?;
            if schur.is_zero() {
                return Err(Error::BadSpecialisation(format!("f_{} vanishes at q = {}", label, q)));
            }
            blocks.push(YokBlock {
                char_orbit: k,
                theta: theta.clone(),
                stabiliser: ty.to_string(),
                label: label.to_string(),
                cosets: cosets.clone(),
                rep_dim,
                dim: cosets.len() * rep_dim,
                schur,
                twisted: twisted.clone(),
                gens,
            });
        }
    }
    Ok(YokModel {
        group: w.spec.to_string(),
        l,
        a,
        q,
        v,
        torus,
        order: w.order(),
        gen_orders: w.gen_orders.clone(),
        gen_elements,
        braid,
        words: w.words.clone(),
        commutators,
        blocks,
    })
}

fn trivial_on(t: &Torus, chi: &[u64], set: &[Vec<u64>]) -> bool {
    set.iter().all(|x| t.pairing(chi, x) == 0)
}

/// Generator images on Ind(θ ⊗ ρ) for a Coxeter system.
#[allow(clippy::too_many_arguments)]
fn coxeter_block(
    w: &ReflGroup,
    torus: &Torus,
    commutators: &[Vec<Vec<u64>>],
    twisted: &[Vec<u64>],
    cosets: &[usize],
    type_gens: &[usize],
    rho: &[Mat],
    rep_dim: usize,
    v: i64,
) -> Result<Vec<Mat>> {
    let n = cosets.len() * rep_dim;
    let pos = |x: usize| cosets.iter().position(|&d| d == x);
    let mut out = Vec::new();
    for g in 0..w.gens.len() {
        let mut m = Matrix::zeros(n, n);
        for (di, &d) in cosets.iter().enumerate() {
            let sd = w.gen_mul(g, d);
            if w.length(sd) > w.length(d) {
                if let Some(ei) = pos(sd) {
                    for i in 0..rep_dim {
                        m.set(ei * rep_dim + i, di * rep_dim + i, CycNum::one());
                    }
                } else {
                    // sd = d s' with s' ∈ J
                    let s_prime = w.mul(w.inverse[d], sd);
                    let k = type_gens
                        .iter()
                        .position(|&h| w.gen_element(h) == s_prime)
                        .ok_or_else(|| Error::InternalConsistency("d⁻¹sd is not a generator of W_J".into()))?;
                    for i in 0..rep_dim {
                        for jj in 0..rep_dim {
                            m.set(di * rep_dim + i, di * rep_dim + jj, rho[k].get(i, jj).clone());
                        }
                    }
                }
            } else {
                // y_s y_d = v E_s y_d + (1 + v E_s) y_{sd}, and E_s acts on
                // y_d ⊗ m and y_{sd} ⊗ m by |[T,s]| or 0.
                let ei = pos(sd).ok_or_else(|| Error::InternalConsistency("sd left the coset representatives".into()))?;
                let c = if trivial_on(torus, &twisted[di], &commutators[g]) {
                    commutators[g].len() as i64
                } else {
                    0
                };
                let diag = CycNum::from_int(v * c);
                let off = CycNum::from_int(1 + v * c);
                for i in 0..rep_dim {
                    m.set(di * rep_dim + i, di * rep_dim + i, diag.clone());
                    m.set(ei * rep_dim + i, di * rep_dim + i, off.clone());
                }
            }
        }
        out.push(m);
    }
    Ok(out)
}

/// Coefficients c_0..c_o (c_o = 1) of Π_j (Y - U_j).
fn poly_from_roots(roots: &[CycNum]) -> Vec<CycNum> {
    let mut c = vec![CycNum::one()];
    for r in roots {
        let mut next = vec![CycNum::zero(); c.len() + 1];
        for (k, ck) in c.iter().enumerate() {
            next[k + 1] += ck;
            next[k] -= &(ck * r);
        }
        c = next;
    }
    c
}

/// Rank-1 cyclic group: the stabiliser character itself, or the companion
/// matrix of the deformed order relation on y_r^k ⊗ 1.
fn cyclic_block(
    w: &ReflGroup,
    torus: &Torus,
    commutator: &[Vec<u64>],
    theta: &[u64],
    cosets: &[usize],
    rho: &[Mat],
    v: i64,
) -> Vec<Mat> {
    if cosets.len() == 1 {
        return rho.to_vec();
    }
    let e = w.gen_orders[0];
    let c = if trivial_on(torus, theta, commutator) { commutator.len() as i64 } else { 0 };
    let mut roots: Vec<CycNum> = (1..e).map(|j| CycNum::zeta(e, j as i64)).collect();
    roots.push(CycNum::from_int(1 + v * c));
    let coeffs = poly_from_roots(&roots);
    let n = e as usize;
    let mut m = Matrix::zeros(n, n);
    for k in 0..n - 1 {
        m.set(k + 1, k, CycNum::one());
    }
    for (k, ck) in coeffs.iter().take(n).enumerate() {
        m.set(k, n - 1, -ck);
    }
    vec![m]
}

impl YokModel {
    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.dim).collect()
    }

    /// Σ (block dim)², the dimension of the algebra of block matrices.
    pub fn dimension(&self) -> usize {
        self.blocks.iter().map(|b| b.dim * b.dim).sum()
    }

    /// |T||W|.
    pub fn expected_dimension(&self) -> usize {
        self.torus.size() * self.order
    }

    pub fn identity(&self) -> Blocks {
        self.blocks.iter().map(|b| Matrix::identity(b.dim)).collect()
    }

    pub fn zero(&self) -> Blocks {
        self.blocks.iter().map(|b| Matrix::zeros(b.dim, b.dim)).collect()
    }

    pub fn gen(&self, i: usize) -> Blocks {
        self.blocks.iter().map(|b| b.gens[i].clone()).collect()
    }

    /// y_t acts on y_d ⊗ m by (dθ)(t).
    pub fn torus_element(&self, t: &[u64]) -> Blocks {
        let big_l = self.torus.modulus as u32;
        self.blocks
            .iter()
            .map(|b| {
                let mut d = Vec::with_capacity(b.dim);
                for chi in &b.twisted {
                    let z = CycNum::zeta(big_l, self.torus.pairing(chi, t) as i64);
                    d.extend(std::iter::repeat_n(z, b.rep_dim));
                }
                Matrix::diagonal(d)
            })
            .collect()
    }

    pub fn word(&self, word: &[usize]) -> Blocks {
        word.iter().fold(self.identity(), |acc, &g| bmul(&acc, &self.gen(g)))
    }

    /// y_w for every w ∈ W along its length-lex least word.
    pub fn element_images(&self) -> Vec<Blocks> {
        self.words.iter().map(|wd| self.word(wd)).collect()
    }

    /// E_r = Σ_{t ∈ [T, r]} y_t.
    pub fn e_r(&self, i: usize) -> Blocks {
        self.commutators[i]
            .iter()
            .fold(self.zero(), |acc, t| badd(&acc, &self.torus_element(t)))
    }

    /// Monomials y_t y_w, indexed by t·|W| + w with t in encoding order.
    pub fn monomials(&self) -> Vec<Blocks> {
        let ws = self.element_images();
        let mut out = Vec::with_capacity(self.expected_dimension());
        for ti in 0..self.torus.size() {
            let yt = self.torus_element(&self.torus.decode(ti));
            for yw in &ws {
                out.push(bmul(&yt, yw));
            }
        }
        out
    }

    /// τ = Σ_b f_b(q)⁻¹ tr_b.
    pub fn tau(&self, h: &Blocks) -> Result<CycNum> {
        let mut acc = CycNum::zero();
        for (b, m) in self.blocks.iter().zip(h) {
            acc += &(&m.trace() * &b.schur.inv()?);
        }
        Ok(acc)
    }

    /// Parameters u_j = ζ_o^j (j < o), u_o = q of generator i.
    fn hecke_parameters(&self, i: usize) -> Vec<CycNum> {
        let o = self.gen_orders[i];
        let mut u: Vec<CycNum> = (1..o).map(|j| CycNum::zeta(o, j as i64)).collect();
        u.push(CycNum::from_int(self.q as i64));
        u
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationsReport {
    /// (†) per generator.
    pub dagger: Vec<bool>,
    /// (†′) per generator.
    pub dagger_split: Vec<bool>,
    pub constant_term_invertible: Vec<bool>,
    /// (i, j, m_ij, holds).
    pub braid: Vec<(usize, usize, u32, bool)>,
    pub action: bool,
    pub pass: bool,
}

fn alternating(model: &YokModel, i: usize, j: usize, m: u32) -> Blocks {
    let word: Vec<usize> = (0..m).map(|k| if k % 2 == 0 { i } else { j }).collect();
    model.word(&word)
}

/// Checks (†), the braid relations, the action relations y_r y_t = y_{r(t)} y_r,
/// invertibility of the constant term and the split form (†′).
pub fn verify_relations(model: &YokModel) -> Result<RelationsReport> {
    let id = model.identity();
    let n = model.torus.rank;
    let mut dagger = Vec::new();
    let mut split = Vec::new();
    let mut constant = Vec::new();
    for i in 0..model.gen_orders.len() {
        let o = model.gen_orders[i];
        let y = model.gen(i);
        let e = model.e_r(i);
        let ve = bscale(&e, &CycNum::from_int(model.v));
        let mut prod = id.clone();
        for j in 1..=o {
            let mut factor = id.clone();
            if j == o {
                factor = badd(&factor, &ve);
            }
            prod = bmul(&prod, &bsub(&y, &bscale(&factor, &CycNum::zeta(o, j as i64))));
        }
        dagger.push(bzero(&prod));
        // 1 + vE is diagonal; the constant term is a unit iff its diagonal is.
        let c = badd(&id, &ve);
        constant.push(c.iter().all(|m| {
            (0..m.rows).all(|r| (0..m.cols).all(|s| (r == s) != m.get(r, s).is_zero()))
        }));
        let ep = bscale(&e, &CycNum::frac(1, model.commutators[i].len() as i64));
        let yo = model.word(&vec![i; o as usize]);
        let first = bmul(&bsub(&id, &ep), &bsub(&yo, &id));
        let mut hp = id.clone();
        for u in model.hecke_parameters(i) {
            hp = bmul(&hp, &bsub(&y, &bscale(&id, &u)));
        }
        split.push(bzero(&first) && bzero(&bmul(&ep, &hp)));
    }
    let braid: Vec<(usize, usize, u32, bool)> = model
        .braid
        .iter()
        .map(|&(i, j, m)| (i, j, m, alternating(model, i, j, m) == alternating(model, j, i, m)))
        .collect();
    let mut action = true;
    for (i, &g) in model.gen_elements.iter().enumerate() {
        let y = model.gen(i);
        for k in 0..n {
            let t = unit(n, k);
            let rt = model.torus.act(Side::Points, g, &t);
            action &= bmul(&y, &model.torus_element(&t)) == bmul(&model.torus_element(&rt), &y);
        }
    }
    let pass = dagger.iter().all(|&b| b)
        && split.iter().all(|&b| b)
        && constant.iter().all(|&b| b)
        && braid.iter().all(|b| b.3)
        && action;
    Ok(RelationsReport { dagger, dagger_split: split, constant_term_invertible: constant, braid, action, pass })
}

/// Prime p ≡ 1 (mod m) above 2^31 with an element of exact order m.
pub fn prime_with_root(m: u64, skip: usize) -> (u64, u64) {
    let mut k = (1u64 << 31) / m + 1;
    let mut found = 0;
    loop {
        let p = k * m + 1;
        k += 1;
        if !is_prime(p) {
            continue;
        }
        if found < skip {
            found += 1;
            continue;
        }
        let factors: Vec<u64> = (2..=m).filter(|f| m.is_multiple_of(*f) && is_prime(*f)).collect();
        for g in 2..p {
            let r = powmod(g, (p - 1) / m, p);
            if factors.iter().all(|f| powmod(r, m / f, p) != 1) {
                return (p, r);
            }
        }
    }
}

/// Rank of exact vectors: modulo a prime when every entry reduces, with an
/// exact computation when the modular rank is deficient.
pub fn exact_rank(vectors: &[Vec<CycNum>]) -> (usize, Option<u64>, bool) {
    let expected = vectors.len().min(vectors.first().map(|v| v.len()).unwrap_or(0));
    let m = vectors
        .iter()
        .flatten()
        .fold(1u64, |acc, x| num_integer::lcm(acc, x.conductor() as u64));
    for skip in 0..4 {
        let (p, root) = prime_with_root(m, skip);
        let reduced: Option<Vec<Vec<u64>>> = vectors
            .iter()
            .map(|v| v.iter().map(|x| x.reduce_mod(m as u32, root, p)).collect())
            .collect();
        if let Some(mut rows) = reduced {
            let r = rank_mod_p(&mut rows, p);
            if r == expected {
                return (r, Some(p), false);
            }
            break;
        }
    }
    (rank(vectors.to_vec()), None, true)
}

#[derive(Clone, Debug, Serialize)]
pub struct FreenessReport {
    pub expected: usize,
    pub rank: usize,
    /// Prime used for the modular rank, when that sufficed.
    pub prime: Option<u64>,
    pub exact: bool,
    /// A linear relation among the monomials when the rank is deficient.
    pub kernel: Option<Vec<CycNum>>,
    pub pass: bool,
}

/// The |T||W| monomials y_t y_w must be linearly independent.
pub fn freeness_check(model: &YokModel, monomials: &[Blocks]) -> FreenessReport {
    let vectors: Vec<Vec<CycNum>> = monomials.iter().map(flatten).collect();
    let expected = model.expected_dimension();
    let (r, prime, exact) = exact_rank(&vectors);
    let kernel = if r < expected {
        let cols = Matrix::from_rows(vectors.clone()).transpose();
        nullspace(&cols).into_iter().next()
    } else {
        None
    };
    FreenessReport { expected, rank: r, prime, exact, kernel, pass: r == expected && vectors.len() == expected }
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegralityProbe {
    pub samples: usize,
    pub zero_values: usize,
    /// Minimum ℓ-valuation of |T|⁻¹τ over the nonzero samples.
    pub min_valuation: Option<i64>,
    pub negative_valuations: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceReport {
    pub schur: Vec<CycNum>,
    pub tau_one: CycNum,
    pub checked: usize,
    pub failures: usize,
    pub symmetric_pairs: usize,
    pub symmetric: bool,
    pub pass: bool,
    pub probe: IntegralityProbe,
}

/// Random products of generator images (y_t for unit t and the y_r).
fn random_products(model: &YokModel, rng: &mut ChaCha8Rng, count: usize) -> Vec<Blocks> {
    let n = model.torus.rank;
    let ng = model.gen_orders.len();
    let letters = n + ng;
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=8);
            (0..len).fold(model.identity(), |acc, _| {
                let k = rng.gen_range(0..letters.max(1));
                let f = if k < n { model.torus_element(&unit(n, k)) } else if ng > 0 { model.gen(k - n) } else { model.identity() };
                bmul(&acc, &f)
            })
        })
        .collect()
}

pub const PROBE_SEED: u64 = 0x5eed;

/// τ(y_t y_w) = δ_{t,1} δ_{w,1} |T| on the whole monomial basis, symmetry on
/// random pairs, and the integrality probe of |T|⁻¹τ.
pub fn trace_form_check(model: &YokModel, monomials: &[Blocks]) -> Result<TraceReport> {
    let tsize = model.torus.size() as i64;
    let mut failures = 0;
    for (k, m) in monomials.iter().enumerate() {
        let want = if k == 0 { CycNum::from_int(tsize) } else { CycNum::zero() };
        if model.tau(m)? != want {
            failures += 1;
        }
    }
    let tau_one = model.tau(&model.identity())?;
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    let left = random_products(model, &mut rng, 8);
    let right = random_products(model, &mut rng, 8);
    let mut symmetric = true;
    for (x, y) in left.iter().zip(&right) {
        symmetric &= model.tau(&bmul(x, y))? == model.tau(&bmul(y, x))?;
    }
    let samples = random_products(model, &mut rng, 24);
    let inv_t = CycNum::frac(1, tsize);
    let mut zero_values = 0;
    let mut vals = Vec::new();
    for h in &samples {
        let x = &model.tau(h)? * &inv_t;
        if x.is_zero() {
            zero_values += 1;
        } else {
            vals.push(cyc_l_valuation(&x, model.l)?);
        }
    }
    let probe = IntegralityProbe {
        samples: samples.len(),
        zero_values,
        min_valuation: vals.iter().copied().min(),
        negative_valuations: vals.iter().filter(|&&v| v < 0).count(),
    };
    Ok(TraceReport {
        schur: model.blocks.iter().map(|b| b.schur.clone()).collect(),
        tau_one,
        checked: monomials.len(),
        failures,
        symmetric_pairs: left.len(),
        symmetric,
        pass: failures == 0 && symmetric && monomials.len() == model.expected_dimension(),
        probe,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AlphaReport {
    pub alpha: CycNum,
    pub valuation: i64,
    pub congruent_one: bool,
    /// α/|TW| = dim(B₀)(q) / (|T|² p_W(q)²), when the block data is supplied.
    pub cross_check: Option<bool>,
    pub pass: bool,
}

/// α = |T||W| Σ_b (|T| f_b(q))⁻²; PASS iff v_ℓ(α) = 0 and α ≡ 1 (mod ℓ).
pub fn alpha_invariant(model: &YokModel, block_data: Option<(&LPoly, &LPoly)>) -> Result<AlphaReport> {
    let tsize = CycNum::from_int(model.torus.size() as i64);
    let mut sum = CycNum::zero();
    for b in &model.blocks {
        let x = (&tsize * &b.schur).inv()?;
        sum += &(&x * &x);
    }
    let tw = CycNum::from_int(model.expected_dimension() as i64);
    let alpha = &tw * &sum;
    let valuation = cyc_l_valuation(&alpha, model.l)?;
    let diff = &alpha - &CycNum::one();
    let congruent_one = diff.is_zero() || cyc_l_valuation(&diff, model.l)? >= 1;
    let cross_check = match block_data {
        Some((dim_b0, p_w)) => {
            let qx = CycNum::from_int(model.q as i64);
            let p = p_w.eval(&qx)?;
            let rhs = &dim_b0.eval(&qx)? * &(&(&tsize * &tsize) * &(&p * &p)).inv()?;
            Some(&alpha * &tw.inv()? == rhs)
        }
        None => None,
    };
    let pass = valuation == 0 && congruent_one && cross_check != Some(false);
    Ok(AlphaReport { alpha, valuation, congruent_one, cross_check, pass })
}

#[derive(Clone, Debug, Serialize)]
pub struct WedderburnReport {
    pub profile: Vec<usize>,
    /// {|W:W_θ|·φ(1)} from the character orbit census.
    pub expected: Vec<usize>,
    pub blocks: usize,
    pub class_count: usize,
    pub sum_squares: usize,
    pub generated_dimension: usize,
    pub pass: bool,
}

/// The generated algebra is ⊕ Mat_{dim b} exactly when the monomial rank is
/// Σ dim², so the profile is the list of block dimensions.
pub fn wedderburn_profile(w: &ReflGroup, model: &YokModel, monomial_rank: usize) -> Result<WedderburnReport> {
    let mut profile = model.dims();
    profile.sort_unstable();
    let classes = parabolic_classes(w)?;
    let chars = orbit_census(w, &model.torus, &classes, Side::Characters)?;
    let mut expected = Vec::new();
    for o in &chars.orbits {
        let ty: HeckeType = classes[o.class]
            .hecke_type
            .clone()
            .ok_or_else(|| Error::UnsupportedStabiliser("non-standard stabiliser".into()))?;
        for label in ty.irreps() {
            expected.push(o.size * ty.irrep_dim(&label));
        }
    }
    expected.sort_unstable();
    let class_count = semidirect_class_count(w, &model.torus);
    let sum_squares = model.dimension();
    let pass = profile == expected
        && class_count == profile.len()
        && sum_squares == model.expected_dimension()
        && monomial_rank == sum_squares;
    Ok(WedderburnReport {
        blocks: profile.len(),
        profile,
        expected,
        class_count,
        sum_squares,
        generated_dimension: monomial_rank,
        pass,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Psi1Report {
    pub relations: bool,
    pub group_orders: bool,
    pub rank: usize,
    pub profile_matches: bool,
    pub pass: bool,
}

/// At v = 0 the model is a representation of T ⋊ W: group relations, rank
/// |T||W| and the same Wedderburn profile.
pub fn psi1_check(w: &ReflGroup, model: &YokModel) -> Result<Psi1Report> {
    let m1 = build_model(w, model.l, model.a, 1)?;
    let relations = verify_relations(&m1)?.pass;
    let id = m1.identity();
    let group_orders = (0..m1.gen_orders.len()).all(|i| m1.word(&vec![i; m1.gen_orders[i] as usize]) == id);
    let mons = m1.monomials();
    let vectors: Vec<Vec<CycNum>> = mons.iter().map(flatten).collect();
    let (r, _, _) = exact_rank(&vectors);
    let mut d0 = model.dims();
    let mut d1 = m1.dims();
    d0.sort_unstable();
    d1.sort_unstable();
    let profile_matches = d0 == d1;
    let pass = relations && group_orders && r == m1.expected_dimension() && profile_matches;
    Ok(Psi1Report { relations, group_orders, rank: r, profile_matches, pass })
}

#[derive(Clone, Debug, Serialize)]
pub struct HeckeCutReport {
    pub idempotent: bool,
    pub image_dimension: usize,
    pub expected: usize,
    pub order_relations: bool,
    pub braid: bool,
    pub pass: bool,
}

/// e = |T|⁻¹ Σ_t y_t is a central idempotent of the torus part commuting
/// with the y_r; e𝒴 is the Hecke algebra at x = q.
pub fn hecke_cut(model: &YokModel) -> Result<HeckeCutReport> {
    let tsize = model.torus.size();
    let mut e = model.zero();
    for ti in 0..tsize {
        e = badd(&e, &model.torus_element(&model.torus.decode(ti)));
    }
    let e = bscale(&e, &CycNum::frac(1, tsize as i64));
    let idempotent = bmul(&e, &e) == e;
    let images: Vec<Blocks> = model.element_images().iter().map(|y| bmul(&e, y)).collect();
    let vectors: Vec<Vec<CycNum>> = images.iter().map(flatten).collect();
    let (image_dimension, _, _) = exact_rank(&vectors);
    let mut order_relations = true;
    for i in 0..model.gen_orders.len() {
        let h = bmul(&e, &model.gen(i));
        order_relations &= bmul(&e, &model.gen(i)) == bmul(&model.gen(i), &e);
        let mut prod = e.clone();
        for u in model.hecke_parameters(i) {
            prod = bmul(&prod, &bsub(&h, &bscale(&e, &u)));
        }
        order_relations &= bzero(&prod);
    }
    let braid = model.braid.iter().all(|&(i, j, m)| {
        bmul(&e, &alternating(model, i, j, m)) == bmul(&e, &alternating(model, j, i, m))
    });
    let pass = idempotent && image_dimension == model.order && order_relations && braid;
    Ok(HeckeCutReport { idempotent, image_dimension, expected: model.order, order_relations, braid, pass })
}

#[derive(Clone, Debug, Serialize)]
pub struct AkIdentityReport {
    pub a: u32,
    pub b: u32,
    pub solved: bool,
    pub unique: bool,
    pub alpha_invertible: bool,
}

/// For G(e,1,2) with generators y₁ (order e) and y₂ (order 2): solve
/// y₂y₁^a y₂y₁^b = α y₁^b y₂y₁^a y₂ + Σ_{i ≤ b} (α_i y₁^{a+b-i} y₂ y₁^i + α'_i y₁^i y₂ y₁^{a+b-i})
/// for α, α_i, α'_i in the span of the y_t.
pub fn ak_identity(model: &YokModel, a: u32, b: u32) -> Result<AkIdentityReport> {
    if model.gen_orders.len() != 2 || model.braid.first().map(|x| x.2) != Some(4) {
        return Err(Error::UnsupportedParameters("the identity needs G(e,1,2) with (y₁y₂)² = (y₂y₁)²".into()));
    }
    let pw = |k: u32| model.word(&vec![0; k as usize]);
    let y2 = model.gen(1);
    let chain = |p: u32, r: u32| bmul(&bmul(&pw(p), &y2), &pw(r));
    let lhs = bmul(&bmul(&y2, &chain(a, 0)), &pw(b));
    let mut terms = vec![bmul(&chain(b, a), &y2)];
    for i in 1..=b {
        terms.push(chain(a + b - i, i));
        terms.push(chain(i, a + b - i));
    }
    let ts: Vec<Blocks> = (0..model.torus.size()).map(|k| model.torus_element(&model.torus.decode(k))).collect();
    let mut vectors = Vec::new();
    for term in &terms {
        for yt in &ts {
            vectors.push(flatten(&bmul(yt, term)));
        }
    }
    let sol = coordinates(&vectors, &flatten(&lhs));
    let unique = rank(vectors.clone()) == vectors.len();
    let alpha_invertible = match &sol {
        Some(c) => {
            let alpha = ts.iter().zip(c).fold(model.zero(), |acc, (yt, ck)| badd(&acc, &bscale(yt, ck)));
            alpha.iter().all(|m| (0..m.rows).all(|r| !m.get(r, r).is_zero()))
        }
        None => false,
    };
    Ok(AkIdentityReport { a, b, solved: sol.is_some(), unique, alpha_invertible })
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockSummary {
    pub theta: Vec<u64>,
    pub stabiliser: String,
    pub label: String,
    pub dim: usize,
    pub schur: CycNum,
}

#[derive(Clone, Debug, Serialize)]
pub struct YokReport {
    pub group: String,
    pub l: u64,
    pub a: u32,
    pub q: u64,
    pub v: i64,
    pub dimension: usize,
    pub expected_dimension: usize,
    pub blocks: Vec<BlockSummary>,
    pub relations: RelationsReport,
    pub freeness: FreenessReport,
    pub trace: TraceReport,
    pub alpha: AlphaReport,
    pub wedderburn: WedderburnReport,
    pub psi1: Psi1Report,
    pub hecke_cut: HeckeCutReport,
    pub rewriting: RewriteReport,
    pub ak_identity: Vec<AkIdentityReport>,
}

impl YokReport {
    /// Every verdict except the integrality probe, which carries none.
    pub fn pass(&self) -> bool {
        self.relations.pass
            && self.freeness.pass
            && self.trace.pass
            && self.alpha.pass
            && self.wedderburn.pass
            && self.psi1.pass
            && self.hecke_cut.pass
            && self.rewriting.pass
            && self.ak_identity.iter().all(|r| r.solved && r.alpha_invertible)
    }
}

/// Build the model and run every check.
pub fn yokonuma_report(w: &ReflGroup, l: u64, a: u32, q: u64) -> Result<YokReport> {
    let model = build_model(w, l, a, q)?;
    let relations = verify_relations(&model)?;
    let monomials = model.monomials();
    let freeness = freeness_check(&model, &monomials);
    let trace = trace_form_check(&model, &monomials)?;
    let data = crate::block::BlockData::build(w, l, a)?;
    let alpha = alpha_invariant(&model, Some((&data.dim_b0, &data.poincare)))?;
    let wedderburn = wedderburn_profile(w, &model, freeness.rank)?;
    let psi1 = psi1_check(w, &model)?;
    let hecke_cut = hecke_cut(&model)?;
    let rewriting = rewriting_check(w, &model, &monomials)?;
    let ak = model.gen_orders.len() == 2 && model.braid.first().map(|x| x.2) == Some(4);
    let ak_identity = if ak {
        [(1, 1), (1, 2), (2, 1), (2, 2)]
            .iter()
            .map(|&(x, y)| ak_identity(&model, x, y))
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    Ok(YokReport {
        group: model.group.clone(),
        l,
        a,
        q,
        v: model.v,
        dimension: model.dimension(),
        expected_dimension: model.expected_dimension(),
        blocks: model
            .blocks
            .iter()
            .map(|b| BlockSummary {
                theta: b.theta.clone(),
                stabiliser: b.stabiliser.clone(),
                label: b.label.clone(),
                dim: b.dim,
                schur: b.schur.clone(),
            })
            .collect(),
        relations,
        freeness,
        trace,
        alpha,
        wedderburn,
        psi1,
        hecke_cut,
        rewriting,
        ak_identity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reflgrp::GroupSpec;

    fn group(s: &str) -> ReflGroup {
        ReflGroup::build(&GroupSpec::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn s2_model() {
        let w = group("A1");
        let m = build_model(&w, 3, 1, 4).unwrap();
        let mut dims = m.dims();
        dims.sort_unstable();
        assert_eq!(dims, vec![1, 1, 2]);
        // (y_r + 1)(y_r - 1 - E_r) = 0 with v = 1.
        let id = m.identity();
        let y = m.gen(0);
        let e = m.e_r(0);
        assert!(bzero(&bmul(&badd(&y, &id), &bsub(&bsub(&y, &id), &e))));
        let r = yokonuma_report(&w, 3, 1, 4).unwrap();
        assert!(r.pass(), "{:#?}", r);
        assert_eq!(r.freeness.rank, 6);
        assert_eq!(r.trace.tau_one, CycNum::from_int(3));
        assert_eq!(m.tau(&y).unwrap(), CycNum::zero());
        assert_eq!(r.alpha.alpha, CycNum::frac(28, 25));
    }

    #[test]
    fn c3_model() {
        let w = group("C(3)");
        let r = yokonuma_report(&w, 7, 1, 8).unwrap();
        assert!(r.pass(), "{:#?}", r);
        assert_eq!(r.freeness.rank, 21);
        assert_eq!(r.wedderburn.profile, vec![1, 1, 1, 3, 3]);
    }

    #[test]
    fn trivial_group() {
        let w = group("Triv(1)");
        let r = yokonuma_report(&w, 3, 1, 4).unwrap();
        assert!(r.pass(), "{:#?}", r);
        assert_eq!(r.wedderburn.profile, vec![1, 1, 1]);
        assert_eq!(r.alpha.alpha, CycNum::one());
    }

    #[test]
    fn b2_identity() {
        let w = group("B2");
        let r = yokonuma_report(&w, 3, 1, 4).unwrap();
        assert!(r.pass(), "{:#?}", r);
        assert_eq!(r.freeness.rank, 72);
        assert_eq!(r.ak_identity.len(), 4);
    }

    #[test]
    fn psi1_is_group_algebra() {
        let w = group("A1");
        let m = build_model(&w, 3, 1, 1).unwrap();
        assert_eq!(m.v, 0);
        let y = m.gen(0);
        assert_eq!(bmul(&y, &y), m.identity());
    }

    #[test]
    fn rejects_bad_q() {
        let w = group("A1");
        assert!(matches!(build_model(&w, 3, 1, 5), Err(Error::InvalidQ(_))));
    }

    #[test]
    fn classical_q4() {
        let r = classical_gl2_compare(4, 3).unwrap();
        assert!(r.pass, "{:#?}", r);
        assert_eq!(r.group_order, 180);
        assert_eq!(r.cut_dimension, 18);
        assert_eq!(r.products_ok, Some(true));
        assert!(!r.literal_unit);
    }
}
