//! Schur tables and their verification against the engines: projective
//! element annihilation and ranks, ψ₁ limits, non-vanishing, restriction
//! to standard parabolics and Brauer reciprocity.

use serde::Serialize;

use super::engine::HeckeEngine;
use super::schur::schur_element;
use super::types::{HeckeType, IrrLabel};
use crate::error::{Error, Result};
use crate::exactnum::{CycNum, LPoly};
use crate::linalg::Matrix;
use crate::reflgrp::{restriction_multiplicities, subgroup_characters, CharTable, ReflGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    CyclicFormula,
    HookFormula,
    LiteratureAk,
    DihedralFormula,
    Product,
}

#[derive(Clone, Debug, Serialize)]
pub struct SchurEntry {
    pub label: String,
    pub degree: usize,
    pub schur: LPoly,
    /// Numerator coefficients (constant term first) over the denominator x^k.
    pub numerator: Vec<CycNum>,
    pub denominator_power: i64,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, Serialize)]
pub struct SchurTable {
    pub hecke_type: String,
    #[serde(skip)]
    pub ty: HeckeType,
    #[serde(skip)]
    pub labels: Vec<IrrLabel>,
    pub entries: Vec<SchurEntry>,
}

fn provenance(ty: &HeckeType) -> Provenance {
    match ty {
        HeckeType::Cyclic(_) => Provenance::CyclicFormula,
        HeckeType::A(_) => Provenance::HookFormula,
        HeckeType::AK { .. } => Provenance::LiteratureAk,
        HeckeType::Dihedral(_) => Provenance::DihedralFormula,
        HeckeType::Product(v) if v.len() == 1 => provenance(&v[0]),
        HeckeType::Product(_) => Provenance::Product,
    }
}

pub fn schur_table(ty: &HeckeType) -> SchurTable {
    let labels = ty.irreps();
    let entries = labels
        .iter()
        .map(|l| {
            let f = schur_element(ty, l);
            let low = f.order().unwrap_or(0);
            let hi = f.degree().unwrap_or(0);
            let numerator = (low..=hi).map(|k| f.coeff(k)).collect();
            SchurEntry {
                label: l.to_string(),
                degree: ty.irrep_dim(l),
                numerator,
                denominator_power: -low,
                schur: f,
                provenance: provenance(ty),
            }
        })
        .collect();
    SchurTable { hecke_type: ty.to_string(), ty: ty.clone(), labels, entries }
}

#[derive(Clone, Debug, Serialize)]
pub struct SchurCheck {
    pub hecke_type: String,
    pub x: CycNum,
    pub dim: usize,
    pub gram_symmetric: bool,
    pub central: bool,
    pub annihilates: bool,
    pub ranks_match: bool,
    pub nonvanishing: bool,
    pub trace_normalised: bool,
    pub distinct_eigenvalues: usize,
    pub pass: bool,
}

/// Verify the Schur elements of `table` against `engine` at its x.
pub fn verify_schur(engine: &HeckeEngine, table: &SchurTable) -> Result<SchurCheck> {
    let n = engine.dim();
    let l = engine.basis_matrices();
    let gram = engine.gram(&l);
    let gram_symmetric = gram == gram.transpose();
    let ginv = gram
        .inverse()
        .ok_or_else(|| Error::BadSpecialisation(format!("{}: Gram matrix singular at x = {}", engine.ty, engine.x)))?;
    let z = engine.projective_element(&l, &ginv);
    let lz = engine.element_matrix(&l, &z);
    let central = engine.gens.iter().all(|g| &lz * g == g * &lz);
    let mut values = Vec::new();
    let mut nonvanishing = true;
    let mut tsum = CycNum::zero();
    for e in &table.entries {
        let f = e.schur.eval(&engine.x)?;
        if f.is_zero() {
            nonvanishing = false;
            continue;
        }
        tsum += &(&CycNum::from_int(e.degree as i64) * &f.inv()?);
        values.push((&CycNum::from_int(e.degree as i64) * &f, e.degree * e.degree));
    }
    let mut distinct: Vec<(CycNum, usize)> = Vec::new();
    for (v, m) in values {
        match distinct.iter_mut().find(|(u, _)| *u == v) {
            Some((_, k)) => *k += m,
            None => distinct.push((v, m)),
        }
    }
    let id = Matrix::identity(n);
    let mut prod = id.clone();
    let mut ranks_match = true;
    for (lam, mult) in &distinct {
        let d = &lz - &id.scale(lam);
        if d.rank() != n - mult {
            ranks_match = false;
        }
        prod = &prod * &d;
    }
    let annihilates = prod.is_zero();
    let trace_normalised = tsum.is_one();
    let pass = gram_symmetric && central && annihilates && ranks_match && nonvanishing && trace_normalised;
    Ok(SchurCheck {
        hecke_type: engine.ty.to_string(),
        x: engine.x.clone(),
        dim: n,
        gram_symmetric,
        central,
        annihilates,
        ranks_match,
        nonvanishing,
        trace_normalised,
        distinct_eigenvalues: distinct.len(),
        pass,
    })
}

/// ψ₁(f_φ) = |W|/φ(1) for every entry.
pub fn psi1_check(table: &SchurTable) -> Result<bool> {
    let order = table.ty.order() as i64;
    for e in &table.entries {
        let v = e.schur.eval(&CycNum::one())?;
        if v != CycNum::frac(order, e.degree as i64) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Restriction of the canonical trace to a standard parabolic W_J: the
/// images of {T_v : v ∈ W_J} must reproduce the trace of W_J on all products.
/// `j` lists generators of W; `w_gens` is the generator order of `engine`.
pub fn check_parabolic_restriction(w: &ReflGroup, engine: &HeckeEngine, w_gens: &[usize], j: &[usize]) -> Result<bool> {
    let (ty0, gens0) = w.hecke_type(j)?;
    let sub = HeckeEngine::build(&ty0, &engine.x)?;
    let map: Vec<usize> = gens0
        .iter()
        .map(|g| w_gens.iter().position(|x| x == g).ok_or_else(|| Error::Containment(format!("generator {} not in W", g))))
        .collect::<Result<_>>()?;
    let n = engine.dim();
    let e0: Vec<CycNum> = (0..n).map(|k| if k == 0 { CycNum::one() } else { CycNum::zero() }).collect();
    let images: Vec<Vec<CycNum>> = sub
        .words
        .iter()
        .map(|word| word.iter().rev().fold(e0.clone(), |v, &g| engine.gens[map[g]].mul_vec(&v)))
        .collect();
    let l = engine.basis_matrices();
    let ls = sub.basis_matrices();
    for (u, iu) in images.iter().enumerate() {
        for (v, iv) in images.iter().enumerate() {
            let big = engine.mul(&l, iu, iv)[0].clone();
            let small = ls[u].get(0, v).clone();
            if big != small {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, Serialize)]
pub struct BrauerCheck {
    pub group: String,
    pub subgroup_type: String,
    pub label: String,
    pub q: CycNum,
    pub pass: bool,
}

/// ψ(f_{J,φ})⁻¹ = Σ_χ ⟨φ, χ|_{W_J}⟩ ψ(f_χ)⁻¹ for all φ ∈ Irr(W_J) at each q.
pub fn check_brauer_reciprocity(w: &ReflGroup, table: &CharTable, j: &[usize], qs: &[CycNum]) -> Result<Vec<BrauerCheck>> {
    let (ty, _) = w.full_hecke_type()?;
    let sub = subgroup_characters(w, j)?;
    let mult = restriction_multiplicities(w, table, &sub)?;
    let mut out = Vec::new();
    for q in qs {
        let fw: Vec<CycNum> = table.labels.iter().map(|l| schur_element(&ty, l).eval(q)).collect::<Result<_>>()?;
        for (i, phi) in sub.labels.iter().enumerate() {
            let lhs = schur_element(&sub.hecke_type, phi).eval(q)?.inv()?;
            let mut rhs = CycNum::zero();
            for (k, f) in fw.iter().enumerate() {
                if mult[i][k] != 0 {
                    rhs += &(&CycNum::from_int(mult[i][k]) * &f.inv()?);
                }
            }
            out.push(BrauerCheck {
                group: w.spec.to_string(),
                subgroup_type: sub.hecke_type.to_string(),
                label: phi.to_string(),
                q: q.clone(),
                pass: lhs == rhs,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reflgrp::{character_table, GroupSpec};

    #[test]
    fn verify_small_types() {
        for ty in [
            HeckeType::Cyclic(2),
            HeckeType::Cyclic(3),
            HeckeType::A(2),
            HeckeType::AK { e: 2, n: 2 },
            HeckeType::AK { e: 3, n: 2 },
            HeckeType::Dihedral(5),
            HeckeType::Product(vec![HeckeType::Cyclic(2), HeckeType::Cyclic(3)]),
            HeckeType::trivial(),
        ] {
            let t = schur_table(&ty);
            assert!(psi1_check(&t).unwrap(), "{}", ty);
            let e = HeckeEngine::build(&ty, &CycNum::from_int(4)).unwrap();
            let r = verify_schur(&e, &t).unwrap();
            assert!(r.pass, "{}: {:?}", ty, r);
        }
    }

    #[test]
    fn s3_rank_deficiency() {
        let ty = HeckeType::A(2);
        let e = HeckeEngine::build(&ty, &CycNum::from_int(2)).unwrap();
        let r = verify_schur(&e, &schur_table(&ty)).unwrap();
        assert!(r.pass);
        assert_eq!(r.distinct_eigenvalues, 3);
    }

    #[test]
    fn wrong_table_fails() {
        let ty = HeckeType::A(2);
        let mut t = schur_table(&ty);
        t.entries[0].schur = &t.entries[0].schur + &LPoly::one();
        let e = HeckeEngine::build(&ty, &CycNum::from_int(2)).unwrap();
        assert!(!verify_schur(&e, &t).unwrap().pass);
    }

    #[test]
    fn restriction_and_brauer() {
        let w = ReflGroup::build(&GroupSpec::parse("A2").unwrap()).unwrap();
        let (ty, gens) = w.full_hecke_type().unwrap();
        let e = HeckeEngine::build(&ty, &CycNum::from_int(2)).unwrap();
        assert!(check_parabolic_restriction(&w, &e, &gens, &[0]).unwrap());
        assert!(check_parabolic_restriction(&w, &e, &gens, &[]).unwrap());
        let t = character_table(&w).unwrap();
        let qs = [CycNum::from_int(2), CycNum::from_int(4), CycNum::from_int(9)];
        assert!(check_brauer_reciprocity(&w, &t, &[0], &qs).unwrap().iter().all(|c| c.pass));
        assert!(check_brauer_reciprocity(&w, &t, &[], &qs).unwrap().iter().all(|c| c.pass));
    }
}
