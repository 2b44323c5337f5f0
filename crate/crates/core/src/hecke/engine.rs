//! Standard-basis engines for specialised Hecke algebras: the left regular
//! representation on {T_w} as explicit generator matrices, plus the trace
//! t(h) = coefficient of T_1.

use std::collections::HashMap;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::types::{HeckeType, Mat};
use crate::error::{Error, Result};
use crate::exactnum::CycNum;
use crate::linalg::{coordinates, Matrix};

/// The finite group underlying a Hecke type, enumerated through the faithful
/// sum of its irreducible representations at x = 1.
#[derive(Clone, Debug)]
pub struct TypeGroup {
    pub words: Vec<Vec<usize>>,
    /// lmul[w][s] = index of s·w.
    pub lmul: Vec<Vec<usize>>,
}

pub fn faithful_generators(ty: &HeckeType, x: &CycNum) -> Vec<Mat> {
    let labels = ty.irreps();
    let reps: Vec<Vec<Mat>> = labels.iter().map(|l| ty.representation(l, x)).collect();
    (0..ty.num_gens())
        .map(|g| Matrix::direct_sum(&reps.iter().map(|r| r[g].clone()).collect::<Vec<_>>()))
        .collect()
}

fn mat_key(m: &Mat, cond: u32) -> Vec<BigRational> {
    m.data.iter().flat_map(|c| c.key_at(cond)).collect()
}

fn common_conductor(ms: &[Mat]) -> u32 {
    ms.iter().flat_map(|m| m.data.iter().map(|c| c.conductor())).fold(1, num_integer::lcm)
}

pub fn type_group(ty: &HeckeType) -> TypeGroup {
    let gens = faithful_generators(ty, &CycNum::one());
    let dim: usize = ty.irreps().iter().map(|l| ty.irrep_dim(l)).sum();
    let cond = common_conductor(&gens);
    let mut elems = vec![Matrix::identity(dim)];
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    let mut index = HashMap::from([(mat_key(&elems[0], cond), 0usize)]);
    let mut k = 0;
    while k < elems.len() {
        for (g, gm) in gens.iter().enumerate() {
            let m = &elems[k] * gm;
            let key = mat_key(&m, cond);
            if let std::collections::hash_map::Entry::Vacant(e) = index.entry(key) {
                e.insert(elems.len());
                let mut w = words[k].clone();
                w.push(g);
                elems.push(m);
                words.push(w);
            }
        }
        k += 1;
    }
    let lmul = elems
        .iter()
        .map(|e| gens.iter().map(|g| index[&mat_key(&(g * e), cond)]).collect())
        .collect();
    TypeGroup { words, lmul }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EngineKind {
    /// Length rewriting T_s T_w = T_{sw} or (x-1)T_w + x T_{sw}.
    Rewriting,
    /// Rank-one algebra with basis 1, T, ..., T^{e-1}.
    Companion,
    /// Faithful direct sum of seminormal irreducible representations.
    Seminormal,
    Tensor,
}

#[derive(Clone, Debug)]
pub struct HeckeEngine {
    pub ty: HeckeType,
    pub x: CycNum,
    pub kind: EngineKind,
    /// Basis words T_w in the standard generators.
    pub words: Vec<Vec<usize>>,
    /// Left multiplication by the generators on the basis.
    pub gens: Vec<Mat>,
}

impl HeckeEngine {
    pub fn build(ty: &HeckeType, x: &CycNum) -> Result<Self> {
        if x.is_zero() {
            return Err(Error::BadSpecialisation("x = 0".into()));
        }
        let eng = match ty {
            HeckeType::Product(v) if v.is_empty() => HeckeEngine {
                ty: ty.clone(),
                x: x.clone(),
                kind: EngineKind::Tensor,
                words: vec![vec![]],
                gens: vec![],
            },
            HeckeType::Product(v) if v.len() == 1 => Self::build(&v[0], x)?,
            HeckeType::Product(v) => {
                let parts = v.iter().map(|t| Self::build(t, x)).collect::<Result<Vec<_>>>()?;
                Self::tensor(ty, x, &parts)
            }
            HeckeType::Cyclic(e) => Self::companion(*e, x),
            HeckeType::A(_) | HeckeType::Dihedral(_) | HeckeType::AK { e: 2, .. } => Self::rewriting(ty, x),
            HeckeType::AK { .. } => Self::seminormal(ty, x)?,
        };
        eng.check_order_relations()?;
        Ok(eng)
    }

    pub fn dim(&self) -> usize {
        self.words.len()
    }

    fn companion(e: u32, x: &CycNum) -> Self {
        let ty = HeckeType::Cyclic(e);
        let u = &ty.gen_parameters(x)[0];
        // Π (T - u_j) = T^e + Σ c_k T^k
        let mut poly = vec![CycNum::one()];
        for uj in u {
            let mut next = vec![CycNum::zero(); poly.len() + 1];
            for (k, c) in poly.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= &(c * uj);
            }
            poly = next;
        }
        let n = e as usize;
        let mut m = Matrix::zeros(n, n);
        for k in 0..n - 1 {
            m.set(k + 1, k, CycNum::one());
        }
        for k in 0..n {
            m.set(k, n - 1, -poly[k].clone());
        }
        HeckeEngine { ty, x: x.clone(), kind: EngineKind::Companion, words: (0..n).map(|k| vec![0; k]).collect(), gens: vec![m] }
    }

    fn rewriting(ty: &HeckeType, x: &CycNum) -> Self {
        let tg = type_group(ty);
        let n = tg.words.len();
        let xm1 = x - &CycNum::one();
        let gens = (0..ty.num_gens())
            .map(|s| {
                let mut m = Matrix::zeros(n, n);
                for w in 0..n {
                    let sw = tg.lmul[w][s];
                    if tg.words[sw].len() > tg.words[w].len() {
                        m.set(sw, w, CycNum::one());
                    } else {
                        m.set(w, w, xm1.clone());
                        m.set(sw, w, x.clone());
                    }
                }
                m
            })
            .collect();
        HeckeEngine { ty: ty.clone(), x: x.clone(), kind: EngineKind::Rewriting, words: tg.words, gens }
    }

    /// Engine from the faithful seminormal representation; valid whenever
    /// the specialised algebra is split semisimple with these representations.
    pub fn seminormal(ty: &HeckeType, x: &CycNum) -> Result<Self> {
        let tg = type_group(ty);
        let n = tg.words.len();
        let fg = faithful_generators(ty, x);
        let d = fg.first().map(|m| m.rows).unwrap_or(1);
        let mut images: Vec<Mat> = Vec::with_capacity(n);
        for w in &tg.words {
            images.push(w.iter().fold(Matrix::identity(d), |acc, &g| &acc * &fg[g]));
        }
        let vecs: Vec<Vec<CycNum>> = images.iter().map(|m| m.data.clone()).collect();
        if crate::linalg::rank(vecs.clone()) != n {
            return Err(Error::BadSpecialisation(format!("{} at x = {}: monomials are dependent", ty, x)));
        }
        let mut gens = Vec::with_capacity(fg.len());
        for g in &fg {
            let mut m = Matrix::zeros(n, n);
            for (j, img) in images.iter().enumerate() {
                let prod = g * img;
                let c = coordinates(&vecs, &prod.data)
                    .ok_or_else(|| Error::ModelInconsistency(format!("{}: image not closed under multiplication", ty)))?;
                for (i, v) in c.into_iter().enumerate() {
                    m.set(i, j, v);
                }
            }
            gens.push(m);
        }
        Ok(HeckeEngine { ty: ty.clone(), x: x.clone(), kind: EngineKind::Seminormal, words: tg.words, gens })
    }

    fn tensor(ty: &HeckeType, x: &CycNum, parts: &[HeckeEngine]) -> Self {
        let dims: Vec<usize> = parts.iter().map(|p| p.dim()).collect();
        let total: usize = dims.iter().product();
        let mut words = Vec::with_capacity(total);
        let offsets: Vec<usize> = parts
            .iter()
            .scan(0, |acc, p| {
                let o = *acc;
                *acc += p.gens.len();
                Some(o)
            })
            .collect();
        for idx in 0..total {
            let mut rem = idx;
            let mut digits = vec![0; parts.len()];
            for k in (0..parts.len()).rev() {
                digits[k] = rem % dims[k];
                rem /= dims[k];
            }
            let mut w = Vec::new();
            for (k, &dgt) in digits.iter().enumerate() {
                w.extend(parts[k].words[dgt].iter().map(|g| g + offsets[k]));
            }
            words.push(w);
        }
        let mut gens = Vec::new();
        for (k, p) in parts.iter().enumerate() {
            for g in &p.gens {
                let mut acc = Matrix::identity(1);
                for (j, &d) in dims.iter().enumerate() {
                    acc = acc.kron(&if j == k { g.clone() } else { Matrix::identity(d) });
                }
                gens.push(acc);
            }
        }
        HeckeEngine { ty: ty.clone(), x: x.clone(), kind: EngineKind::Tensor, words, gens }
    }

    fn check_order_relations(&self) -> Result<()> {
        let params = self.ty.gen_parameters(&self.x);
        let id = Matrix::identity(self.dim());
        for (g, (m, u)) in self.gens.iter().zip(&params).enumerate() {
            let mut p = id.clone();
            for uj in u {
                p = &p * &(m - &id.scale(uj));
            }
            if !p.is_zero() {
                return Err(Error::Presentation(format!("{}: order relation fails for generator {}", self.ty, g)));
            }
        }
        Ok(())
    }

    /// Left multiplication matrices L(T_w) for every basis element.
    pub fn basis_matrices(&self) -> Vec<Mat> {
        let n = self.dim();
        let mut out: Vec<Mat> = Vec::with_capacity(n);
        let pos: HashMap<&Vec<usize>, usize> = self.words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        for w in &self.words {
            if w.is_empty() {
                out.push(Matrix::identity(n));
                continue;
            }
            let parent = &w[..w.len() - 1].to_vec();
            let m = match pos.get(parent) {
                Some(&p) => &out[p] * &self.gens[*w.last().unwrap()],
                None => w.iter().fold(Matrix::identity(n), |acc, &g| &acc * &self.gens[g]),
            };
            out.push(m);
        }
        out
    }

    /// Coordinates of the product of two elements.
    pub fn mul(&self, l: &[Mat], a: &[CycNum], b: &[CycNum]) -> Vec<CycNum> {
        let n = self.dim();
        let mut out = vec![CycNum::zero(); n];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            let v = l[i].mul_vec(b);
            for (o, vi) in out.iter_mut().zip(v) {
                *o += &(ai * &vi);
            }
        }
        out
    }

    /// Gram matrix G_ij = t(T_i T_j).
    pub fn gram(&self, l: &[Mat]) -> Mat {
        let n = self.dim();
        let mut g = Matrix::zeros(n, n);
        for (i, li) in l.iter().enumerate() {
            for j in 0..n {
                g.set(i, j, li.get(0, j).clone());
            }
        }
        g
    }

    /// Associativity of the structure constants on all triples (or on
    /// `samples` random triples when the dimension exceeds 24).
    pub fn check_associativity(&self, l: &[Mat], samples: usize) -> bool {
        let n = self.dim();
        let e = |i: usize| -> Vec<CycNum> { (0..n).map(|k| if k == i { CycNum::one() } else { CycNum::zero() }).collect() };
        let triple = |i: usize, j: usize, k: usize| -> bool {
            let ij = l[i].mul_vec(&e(j));
            let left = self.mul(l, &ij, &e(k));
            let jk = l[j].mul_vec(&e(k));
            let right = l[i].mul_vec(&jk);
            left == right
        };
        if n <= 24 {
            (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| triple(i, j, k))))
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            (0..samples).all(|_| triple(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)))
        }
    }

    /// Relative projective element z = Σ_i T_i^∨ T_i as a coordinate vector.
    pub fn projective_element(&self, l: &[Mat], gram_inv: &Mat) -> Vec<CycNum> {
        let n = self.dim();
        let mut z = vec![CycNum::zero(); n];
        for i in 0..n {
            for j in 0..n {
                let c = gram_inv.get(j, i);
                if c.is_zero() {
                    continue;
                }
                // T_j T_i = column i of L(T_j)
                for k in 0..n {
                    let v = l[j].get(k, i);
                    if !v.is_zero() {
                        z[k] += &(c * v);
                    }
                }
            }
        }
        z
    }

    pub fn element_matrix(&self, l: &[Mat], coeffs: &[CycNum]) -> Mat {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for (c, li) in coeffs.iter().zip(l) {
            if !c.is_zero() {
                m = &m + &li.scale(c);
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_and_quadratic() {
        let e = HeckeEngine::build(&HeckeType::Cyclic(2), &CycNum::from_int(4)).unwrap();
        let l = e.basis_matrices();
        // T^2 = 3T + 4
        let t = vec![CycNum::zero(), CycNum::one()];
        assert_eq!(e.mul(&l, &t, &t), vec![CycNum::from_int(4), CycNum::from_int(3)]);
        let a2 = HeckeEngine::build(&HeckeType::A(2), &CycNum::from_int(2)).unwrap();
        assert_eq!(a2.dim(), 6);
        assert!(a2.check_associativity(&a2.basis_matrices(), 0));
    }

    #[test]
    fn rewriting_matches_seminormal() {
        for ty in [HeckeType::A(2), HeckeType::AK { e: 2, n: 2 }, HeckeType::Dihedral(5)] {
            let x = CycNum::from_int(3);
            let a = HeckeEngine::build(&ty, &x).unwrap();
            let b = HeckeEngine::seminormal(&ty, &x).unwrap();
            assert_eq!(a.words, b.words);
            assert_eq!(a.gens, b.gens, "{}", ty);
        }
    }

    #[test]
    fn g312_engine() {
        let e = HeckeEngine::build(&HeckeType::AK { e: 3, n: 2 }, &CycNum::from_int(2)).unwrap();
        assert_eq!(e.dim(), 18);
        let l = e.basis_matrices();
        assert!(e.check_associativity(&l, 0));
        let g = e.gram(&l);
        assert_eq!(g, g.transpose());
    }
}
