//! Flats of the reflection arrangement and conjugacy classes of parabolic
//! subgroups (pointwise stabilisers of flats).

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use serde::Serialize;

use super::group::{canonical_span, span_key, ReflGroup};
use crate::error::{Error, Result};
use crate::exactnum::CycNum;
use crate::hecke::HeckeType;
use crate::linalg::{nullspace, Matrix};

#[derive(Clone, Debug, Serialize)]
pub struct ParabolicClass {
    /// Representative subgroup as a sorted list of element indices.
    pub elements: Vec<usize>,
    /// Generators J with W_J equal to the representative, when it is standard.
    pub standard: Option<Vec<usize>>,
    #[serde(skip)]
    pub hecke_type: Option<HeckeType>,
    /// Canonical basis of the fixed space of the representative.
    #[serde(skip)]
    pub fixed_space: Vec<Vec<CycNum>>,
    /// Codimension of the fixed space (the rank of the parabolic).
    pub rank: usize,
    pub normaliser_index: usize,
    /// Number of conjugates.
    pub class_size: usize,
    /// Every subgroup in the class, each sorted.
    #[serde(skip)]
    pub members: Vec<Vec<usize>>,
}

impl ParabolicClass {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn type_name(&self) -> String {
        self.hecke_type.as_ref().map(|t| t.to_string()).unwrap_or_else(|| "?".into())
    }
}

/// Flat given by a basis (rows) of a subspace of V.
#[derive(Clone, Debug)]
pub struct Flat {
    pub basis: Vec<Vec<CycNum>>,
}

/// All intersections of reflecting hyperplanes, including V itself.
pub fn flats(w: &ReflGroup) -> Vec<Flat> {
    let n = w.rank;
    let full: Vec<Vec<CycNum>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { CycNum::one() } else { CycNum::zero() }).collect())
        .collect();
    let mut seen: HashMap<Vec<Vec<BigRational>>, usize> = HashMap::new();
    seen.insert(span_key(&full, w.conductor), 0);
    let mut out = vec![Flat { basis: full }];
    // one reflection per hyperplane
    let mut hyper_refl = vec![usize::MAX; w.hyperplanes.len()];
    for r in &w.reflections {
        if hyper_refl[r.hyperplane] == usize::MAX {
            hyper_refl[r.hyperplane] = r.element;
        }
    }
    let id = Matrix::identity(n);
    let mut k = 0;
    while k < out.len() {
        let basis = out[k].basis.clone();
        for &r in &hyper_refl {
            if basis.is_empty() {
                break;
            }
            let d = &w.elements[r] - &id;
            // columns of B are the basis vectors
            let b = Matrix::from_rows(basis.clone()).transpose();
            let a = &d * &b;
            let coeffs = nullspace(&a);
            let vecs: Vec<Vec<CycNum>> = coeffs.iter().map(|c| b.mul_vec(c)).collect();
            let span = canonical_span(&vecs);
            let key = span_key(&span, w.conductor);
            if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(key) {
                e.insert(out.len());
                out.push(Flat { basis: span });
            }
        }
        k += 1;
    }
    out
}

/// Pointwise stabiliser of the subspace spanned by `basis`.
pub fn pointwise_stabiliser(w: &ReflGroup, basis: &[Vec<CycNum>]) -> Vec<usize> {
    (0..w.order())
        .filter(|&x| {
            let m = &w.elements[x];
            basis.iter().all(|v| m.mul_vec(v) == *v)
        })
        .collect()
}

fn conjugate_set(w: &ReflGroup, set: &[usize], g: usize) -> Vec<usize> {
    let mut v: Vec<usize> = set.iter().map(|&x| w.conj(x, g)).collect();
    v.sort_unstable();
    v
}

/// Conjugacy classes of parabolic subgroups, ordered by rank, then order,
/// then standard generator set.
pub fn parabolic_classes(w: &ReflGroup) -> Result<Vec<ParabolicClass>> {
    let mut groups: Vec<(Vec<usize>, Vec<Vec<CycNum>>)> = Vec::new();
    for f in flats(w) {
        let p = pointwise_stabiliser(w, &f.basis);
        let refl: Vec<usize> = w.reflections.iter().map(|r| r.element).filter(|e| p.binary_search(e).is_ok()).collect();
        if w.generated_by(&refl) != p {
            return Err(Error::SteinbergViolation(format!(
                "stabiliser of a flat of dimension {} in {} is not generated by reflections",
                f.basis.len(),
                w.spec
            )));
        }
        groups.push((p, f.basis));
    }
    // standard parabolics W_J
    let ng = w.gens.len();
    let mut standard: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    let mut subsets: Vec<Vec<usize>> = (0..(1usize << ng)).map(|m| (0..ng).filter(|&i| m >> i & 1 == 1).collect()).collect();
    subsets.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    for j in subsets {
        let mut e = w.subgroup(&j).elements;
        e.sort_unstable();
        standard.entry(e).or_insert(j);
    }
    let gen_elems: Vec<usize> = (0..ng).map(|g| w.gen_element(g)).collect();
    let mut class_of: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut classes: Vec<ParabolicClass> = Vec::new();
    for (p, basis) in groups {
        if class_of.contains_key(&p) {
            continue;
        }
        let mut members = vec![p.clone()];
        let mut k = 0;
        while k < members.len() {
            for &g in &gen_elems {
                let c = conjugate_set(w, &members[k], g);
                if !members.contains(&c) {
                    members.push(c);
                }
            }
            k += 1;
        }
        let std_member = members.iter().filter_map(|m| standard.get(m).map(|j| (j.clone(), m.clone()))).min();
        let (rep, j) = match std_member {
            Some((j, m)) => (m, Some(j)),
            None => (p.clone(), None),
        };
        let fixed = if rep == p {
            basis
        } else {
            let g = representative_fixed_space(w, &rep);
            canonical_span(&g)
        };
        let idx = classes.len();
        for m in &members {
            class_of.insert(m.clone(), idx);
        }
        let hecke_type = match &j {
            Some(j) => w.hecke_type(j).ok().map(|(t, _)| t),
            None => None,
        };
        let class_size = members.len();
        classes.push(ParabolicClass {
            normaliser_index: w.order() / class_size / rep.len(),
            rank: w.rank - fixed.len(),
            elements: rep,
            standard: j,
            hecke_type,
            fixed_space: fixed,
            class_size,
            members,
        });
    }
    classes.sort_by(|a, b| {
        a.rank
            .cmp(&b.rank)
            .then(a.order().cmp(&b.order()))
            .then(a.standard.cmp(&b.standard))
            .then(a.elements.cmp(&b.elements))
    });
    Ok(classes)
}

fn representative_fixed_space(w: &ReflGroup, elems: &[usize]) -> Vec<Vec<CycNum>> {
    let id = Matrix::identity(w.rank);
    let rows: Vec<Vec<CycNum>> = elems.iter().flat_map(|&e| (&w.elements[e] - &id).to_rows()).collect();
    if rows.is_empty() {
        return id.to_rows();
    }
    nullspace(&Matrix::from_rows(rows))
}

/// Index of the class containing the given subgroup (sorted element list).
pub fn find_class(classes: &[ParabolicClass], subgroup: &[usize]) -> Option<usize> {
    classes.iter().position(|c| c.members.iter().any(|m| m.as_slice() == subgroup))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reflgrp::GroupSpec;

    fn g(s: &str) -> ReflGroup {
        ReflGroup::build(&GroupSpec::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn small_cases() {
        let c = parabolic_classes(&g("A1")).unwrap();
        assert_eq!(c.iter().map(|p| p.normaliser_index).collect::<Vec<_>>(), vec![2, 1]);
        let c = parabolic_classes(&g("A2")).unwrap();
        assert_eq!(c.iter().map(|p| p.normaliser_index).collect::<Vec<_>>(), vec![6, 1, 1]);
        let c = parabolic_classes(&g("C(5)")).unwrap();
        assert_eq!(c.len(), 2);
        let c = parabolic_classes(&g("B2")).unwrap();
        // 1, two classes of reflections, B2
        assert_eq!(c.len(), 4);
        assert!(c.iter().all(|p| p.standard.is_some()));
        let c = parabolic_classes(&g("G(3,1,2)")).unwrap();
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn parabolic_of_parabolic_closed() {
        for s in ["A2", "B2", "I2(5)", "G(3,1,2)"] {
            let w = g(s);
            let classes = parabolic_classes(&w).unwrap();
            for p in &classes {
                for q in &classes {
                    // stabiliser in P of the fixed space of a parabolic Q' ⊆ P is
                    // again a parabolic of W
                    for m in &q.members {
                        if m.iter().all(|x| p.elements.binary_search(x).is_ok()) {
                            assert!(find_class(&classes, m).is_some());
                        }
                    }
                }
            }
        }
    }
}
