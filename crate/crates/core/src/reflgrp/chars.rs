//! Character tables of reflection groups and their standard parabolic
//! subgroups, built from explicit representations at x = 1 and validated
//! by both orthogonality relations.

use serde::Serialize;

use super::group::{ReflGroup, Subgroup};
use crate::error::{Error, Result};
use crate::exactnum::CycNum;
use crate::hecke::{HeckeType, IrrLabel};
use crate::linalg::Matrix;

/// Irreducible characters of a subgroup W_J, evaluated on every element.
#[derive(Clone, Debug)]
pub struct SubgroupCharacters {
    pub hecke_type: HeckeType,
    /// Generators of W in the Hecke type's standard order.
    pub gens: Vec<usize>,
    pub sub: Subgroup,
    pub labels: Vec<IrrLabel>,
    /// values[i][k] = χ_i(sub.elements[k]).
    pub values: Vec<Vec<CycNum>>,
    pub degrees: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CharTable {
    pub group: String,
    pub class_reps: Vec<usize>,
    pub class_sizes: Vec<usize>,
    #[serde(serialize_with = "ser_labels")]
    pub labels: Vec<IrrLabel>,
    pub degrees: Vec<usize>,
    /// values[i][c] = χ_i on class c.
    pub values: Vec<Vec<CycNum>>,
}

fn ser_labels<S: serde::Serializer>(v: &[IrrLabel], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for l in v {
        seq.serialize_element(&l.to_string())?;
    }
    seq.end()
}

/// Characters of the standard parabolic subgroup generated by `j`.
pub fn subgroup_characters(w: &ReflGroup, j: &[usize]) -> Result<SubgroupCharacters> {
    let (ty, gens) = w.hecke_type(j)?;
    let sub = w.subgroup(&gens);
    let one = CycNum::one();
    let labels = ty.irreps();
    let mut values = Vec::with_capacity(labels.len());
    let mut degrees = Vec::with_capacity(labels.len());
    // parent of each element in the BFS word tree
    let index_of: std::collections::HashMap<usize, usize> =
        sub.elements.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    for l in &labels {
        let reps = ty.representation(l, &one);
        let d = ty.irrep_dim(l);
        let mut mats: Vec<Matrix<CycNum>> = Vec::with_capacity(sub.elements.len());
        for (k, word) in sub.words.iter().enumerate() {
            if k == 0 {
                mats.push(Matrix::identity(d));
                continue;
            }
            let parent_elem = word[..word.len() - 1]
                .iter()
                .fold(0usize, |x, &p| w.mul_gen(x, sub.gens[p]));
            let parent = index_of[&parent_elem];
            let m = &mats[parent] * &reps[*word.last().unwrap()];
            mats.push(m);
        }
        values.push(mats.iter().map(|m| m.trace()).collect());
        degrees.push(d);
    }
    Ok(SubgroupCharacters { hecke_type: ty, gens, sub, labels, values, degrees })
}

pub fn character_table(w: &ReflGroup) -> Result<CharTable> {
    let all: Vec<usize> = (0..w.gens.len()).collect();
    let sc = subgroup_characters(w, &all)?;
    let pos: std::collections::HashMap<usize, usize> =
        sc.sub.elements.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let class_reps: Vec<usize> = w.classes.iter().map(|c| c[0]).collect();
    let class_sizes: Vec<usize> = w.classes.iter().map(|c| c.len()).collect();
    let values: Vec<Vec<CycNum>> = sc
        .values
        .iter()
        .map(|row| class_reps.iter().map(|r| row[pos[r]].clone()).collect())
        .collect();
    let t = CharTable { group: w.spec.to_string(), class_reps, class_sizes, labels: sc.labels, degrees: sc.degrees, values };
    t.validate(w.order())?;
    Ok(t)
}

impl CharTable {
    /// Row and column orthogonality, Σχ(1)² = |W| and squareness.
    pub fn validate(&self, order: usize) -> Result<()> {
        let k = self.class_reps.len();
        if self.values.len() != k {
            return Err(Error::InternalConsistency(format!(
                "{}: {} irreducibles but {} classes",
                self.group,
                self.values.len(),
                k
            )));
        }
        let sq: usize = self.degrees.iter().map(|d| d * d).sum();
        if sq != order {
            return Err(Error::InternalConsistency(format!("{}: Σχ(1)² = {} ≠ {}", self.group, sq, order)));
        }
        let n = CycNum::from_int(order as i64);
        for i in 0..k {
            for j in 0..k {
                let mut s = CycNum::zero();
                for c in 0..k {
                    let t = &self.values[i][c] * &self.values[j][c].conj();
                    s += &t.scale_int(self.class_sizes[c] as i64);
                }
                let want = if i == j { n.clone() } else { CycNum::zero() };
                if s != want {
                    return Err(Error::InternalConsistency(format!("{}: row orthogonality fails at ({}, {})", self.group, i, j)));
                }
            }
        }
        for c in 0..k {
            for d in 0..k {
                let mut s = CycNum::zero();
                for i in 0..k {
                    s += &(&self.values[i][c] * &self.values[i][d].conj());
                }
                let want = if c == d { CycNum::frac(order as i64, self.class_sizes[c] as i64) } else { CycNum::zero() };
                if s != want {
                    return Err(Error::InternalConsistency(format!("{}: column orthogonality fails at ({}, {})", self.group, c, d)));
                }
            }
        }
        Ok(())
    }

    pub fn class_of_label(&self, l: &IrrLabel) -> Option<usize> {
        self.labels.iter().position(|x| x == l)
    }
}

/// ⟨φ, χ|_{W_J}⟩ for φ ∈ Irr(W_J) (rows) and χ ∈ Irr(W) (columns).
pub fn restriction_multiplicities(w: &ReflGroup, table: &CharTable, sub: &SubgroupCharacters) -> Result<Vec<Vec<i64>>> {
    let h = sub.sub.elements.len() as i64;
    let mut out = vec![vec![0i64; table.labels.len()]; sub.labels.len()];
    for (i, phi) in sub.values.iter().enumerate() {
        for (j, chi) in table.values.iter().enumerate() {
            let mut s = CycNum::zero();
            for (k, &e) in sub.sub.elements.iter().enumerate() {
                s += &(&phi[k] * &chi[w.class_of[e]].conj());
            }
            let v = (&s * &CycNum::frac(1, h))
                .to_rational()
                .filter(|r| r.is_integer() && !num_traits::Signed::is_negative(r))
                .ok_or_else(|| Error::Containment(format!("non-integral multiplicity for {} in {}", sub.labels[i], table.labels[j])))?;
            out[i][j] = v.to_integer().try_into().unwrap();
        }
    }
    for (j, &d) in table.degrees.iter().enumerate() {
        let s: i64 = (0..sub.labels.len()).map(|i| out[i][j] * sub.degrees[i] as i64).sum();
        if s != d as i64 {
            return Err(Error::InternalConsistency(format!("restriction of {} has degree {} ≠ {}", table.labels[j], s, d)));
        }
    }
    Ok(out)
}

trait ScaleInt {
    fn scale_int(&self, k: i64) -> CycNum;
}

impl ScaleInt for CycNum {
    fn scale_int(&self, k: i64) -> CycNum {
        self * &CycNum::from_int(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reflgrp::GroupSpec;

    fn g(s: &str) -> ReflGroup {
        ReflGroup::build(&GroupSpec::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn tables_validate() {
        for s in ["A1", "A2", "A3", "B2", "I2(5)", "I2(6)", "G(3,1,2)", "C(3)", "C(4)", "A1xC(3)", "1", "Sym(2)"] {
            let w = g(s);
            let t = character_table(&w).unwrap();
            assert_eq!(t.labels.len(), w.classes.len(), "{}", s);
        }
    }

    #[test]
    fn g312_degrees() {
        let t = character_table(&g("G(3,1,2)")).unwrap();
        let mut d = t.degrees.clone();
        d.sort_unstable();
        assert_eq!(d, vec![1, 1, 1, 1, 1, 1, 2, 2, 2]);
    }

    #[test]
    fn restriction_s2_in_s3() {
        let w = g("A2");
        let t = character_table(&w).unwrap();
        let sub = subgroup_characters(&w, &[0]).unwrap();
        let m = restriction_multiplicities(&w, &t, &sub).unwrap();
        // columns: (3), (2,1), (1,1,1); rows: u1 = sign, u2 = trivial of S2
        let cols: Vec<String> = t.labels.iter().map(|l| l.to_string()).collect();
        let c = |name: &str| cols.iter().position(|x| x == name).unwrap();
        let rows: Vec<String> = sub.labels.iter().map(|l| l.to_string()).collect();
        let triv = rows.iter().position(|x| x == "u2").unwrap();
        let sgn = rows.iter().position(|x| x == "u1").unwrap();
        assert_eq!((m[triv][c("(3)")], m[sgn][c("(3)")]), (1, 0));
        assert_eq!((m[triv][c("(1,1,1)")], m[sgn][c("(1,1,1)")]), (0, 1));
        assert_eq!((m[triv][c("(2,1)")], m[sgn][c("(2,1)")]), (1, 1));
        let triv_sub = subgroup_characters(&w, &[]).unwrap();
        let m = restriction_multiplicities(&w, &t, &triv_sub).unwrap();
        assert_eq!(m[0][c("(2,1)")], 2);
    }

    #[test]
    fn unsupported_family_reports_missing_provider() {
        assert!(matches!(character_table(&g("D4")), Err(Error::ProviderMissing(_))));
    }
}
