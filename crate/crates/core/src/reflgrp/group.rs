//! Explicit finite reflection groups: enumeration, classes, reflections and
//! subgroups generated by subsets of generators.

use std::collections::{HashMap, VecDeque};

use num_rational::BigRational;
use serde::Serialize;

use super::spec::{subset_type, GroupSpec, PresentationBlock};
use crate::error::{Error, Result};
use crate::exactnum::CycNum;
use crate::hecke::HeckeType;
use crate::linalg::{nullspace, row_reduce, Matrix};

pub const DEFAULT_ORDER_CAP: usize = 10_000;

pub type Mat = Matrix<CycNum>;

#[derive(Clone, Debug, Serialize)]
pub struct Reflection {
    pub element: usize,
    pub order: u32,
    pub hyperplane: usize,
    pub distinguished: bool,
    pub class: usize,
}

#[derive(Clone, Debug)]
pub struct ReflGroup {
    pub spec: GroupSpec,
    pub rank: usize,
    pub conductor: u32,
    pub gens: Vec<Mat>,
    pub gen_orders: Vec<u32>,
    pub elements: Vec<Mat>,
    pub words: Vec<Vec<usize>>,
    index: HashMap<Vec<BigRational>, usize>,
    /// rmul[w][g] = index of w·g.
    rmul: Vec<Vec<usize>>,
    /// lmul[w][g] = index of g·w.
    lmul: Vec<Vec<usize>>,
    pub inverse: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub reflections: Vec<Reflection>,
    /// Reflecting hyperplanes, each as a canonical basis of the fixed space.
    pub hyperplanes: Vec<Vec<Vec<CycNum>>>,
    pub presentation: Vec<PresentationBlock>,
}

/// Subgroup generated by a subset of the generators, with words in that
/// subset (positions refer to `gens`).
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub gens: Vec<usize>,
    pub elements: Vec<usize>,
    pub words: Vec<Vec<usize>>,
}

fn matrix_key(m: &Mat, cond: u32) -> Vec<BigRational> {
    m.data.iter().flat_map(|c| c.key_at(cond)).collect()
}

/// Canonical basis (reduced row echelon rows) of the span of `vecs`.
pub fn canonical_span(vecs: &[Vec<CycNum>]) -> Vec<Vec<CycNum>> {
    let mut rows = vecs.to_vec();
    let piv = row_reduce(&mut rows);
    rows.truncate(piv.len());
    rows
}

pub fn span_key(basis: &[Vec<CycNum>], cond: u32) -> Vec<Vec<BigRational>> {
    basis.iter().map(|r| r.iter().flat_map(|c| c.key_at(cond)).collect()).collect()
}

impl ReflGroup {
    pub fn build(spec: &GroupSpec) -> Result<Self> {
        Self::build_with_cap(spec, DEFAULT_ORDER_CAP)
    }

    pub fn build_with_cap(spec: &GroupSpec, cap: usize) -> Result<Self> {
        let rank = spec.rank();
        let gens = spec.generators();
        let conductor = gens
            .iter()
            .flat_map(|g| g.data.iter().map(|c| c.conductor()))
            .fold(spec.conductor(), num_integer::lcm);
        let id = Matrix::identity(rank);
        for (i, g) in gens.iter().enumerate() {
            let d = &(g - &id);
            if d.rank() != 1 {
                return Err(Error::InvalidSpec(format!("generator {} of {} is not a reflection", i, spec)));
            }
        }
        let mut elements = vec![id.clone()];
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        let mut index = HashMap::new();
        index.insert(matrix_key(&id, conductor), 0usize);
        let mut rmul: Vec<Vec<usize>> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(w) = queue.pop_front() {
            let mut row = Vec::with_capacity(gens.len());
            for (g, gm) in gens.iter().enumerate() {
                let m = &elements[w] * gm;
                let key = matrix_key(&m, conductor);
                let idx = match index.get(&key) {
                    Some(&i) => i,
                    None => {
                        let i = elements.len();
                        if i >= cap {
                            return Err(Error::SizeLimit(format!("{} has more than {} elements", spec, cap)));
                        }
                        let mut word = words[w].clone();
                        word.push(g);
                        elements.push(m);
                        words.push(word);
                        index.insert(key, i);
                        queue.push_back(i);
                        i
                    }
                };
                row.push(idx);
            }
            rmul.push(row);
        }
        let n = elements.len();
        if n as u64 != spec.expected_order() {
            return Err(Error::ModelInconsistency(format!(
                "{} enumerated {} elements, expected {}",
                spec,
                n,
                spec.expected_order()
            )));
        }
        let mut grp = ReflGroup {
            spec: spec.clone(),
            rank,
            conductor,
            gen_orders: vec![],
            gens,
            elements,
            words,
            index,
            rmul,
            lmul: vec![],
            inverse: vec![],
            classes: vec![],
            class_of: vec![],
            reflections: vec![],
            hyperplanes: vec![],
            presentation: spec.presentation(),
        };
        grp.lmul = (0..n)
            .map(|w| grp.gens.iter().map(|gm| grp.lookup(&(gm * &grp.elements[w])).unwrap()).collect())
            .collect();
        grp.gen_orders = (0..grp.gens.len()).map(|g| grp.order_of(grp.rmul[0][g])).collect();
        grp.inverse = (0..n)
            .map(|w| {
                let inv = grp.elements[w].inverse().expect("group elements are invertible");
                grp.lookup(&inv).expect("group is closed under inverses")
            })
            .collect();
        grp.compute_classes();
        grp.compute_reflections();
        Ok(grp)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn lookup(&self, m: &Mat) -> Option<usize> {
        self.index.get(&matrix_key(m, self.conductor)).copied()
    }

    pub fn gen_element(&self, g: usize) -> usize {
        self.rmul[0][g]
    }

    pub fn mul_gen(&self, w: usize, g: usize) -> usize {
        self.rmul[w][g]
    }

    pub fn gen_mul(&self, g: usize, w: usize) -> usize {
        self.lmul[w][g]
    }

    pub fn mul(&self, u: usize, v: usize) -> usize {
        self.words[v].iter().fold(u, |x, &g| self.rmul[x][g])
    }

    pub fn conj(&self, x: usize, g: usize) -> usize {
        // g⁻¹ x g
        self.mul(self.mul(self.inverse[g], x), g)
    }

    pub fn length(&self, w: usize) -> usize {
        self.words[w].len()
    }

    pub fn order_of(&self, w: usize) -> u32 {
        let mut x = w;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, w);
            k += 1;
        }
        k
    }

    pub fn det(&self, w: usize) -> CycNum {
        det(&self.elements[w])
    }

    fn compute_classes(&mut self) {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let c = classes.len();
            let mut cls = vec![x];
            class_of[x] = c;
            let mut k = 0;
            while k < cls.len() {
                let y = cls[k];
                for g in 0..self.gens.len() {
                    let ge = self.gen_element(g);
                    let z = self.conj(y, ge);
                    if class_of[z] == usize::MAX {
                        class_of[z] = c;
                        cls.push(z);
                    }
                }
                k += 1;
            }
            cls.sort_unstable();
            classes.push(cls);
        }
        self.classes = classes;
        self.class_of = class_of;
    }

    /// Canonical basis of the fixed space of w.
    pub fn fixed_space(&self, w: usize) -> Vec<Vec<CycNum>> {
        let d = &self.elements[w] - &Matrix::identity(self.rank);
        canonical_span(&nullspace(&d))
    }

    fn compute_reflections(&mut self) {
        let id = Matrix::identity(self.rank);
        let mut hyper_keys: HashMap<Vec<Vec<BigRational>>, usize> = HashMap::new();
        let mut refl = Vec::new();
        for w in 1..self.order() {
            if (&self.elements[w] - &id).rank() != 1 {
                continue;
            }
            let fs = self.fixed_space(w);
            let key = span_key(&fs, self.conductor);
            let h = *hyper_keys.entry(key).or_insert_with(|| {
                self.hyperplanes.push(fs);
                self.hyperplanes.len() - 1
            });
            refl.push(Reflection { element: w, order: self.order_of(w), hyperplane: h, distinguished: false, class: self.class_of[w] });
        }
        // pointwise stabiliser of H is cyclic of order (#reflections on H) + 1
        let mut count = vec![0u32; self.hyperplanes.len()];
        for r in &refl {
            count[r.hyperplane] += 1;
        }
        for r in refl.iter_mut() {
            let o = count[r.hyperplane] + 1;
            r.distinguished = self.det(r.element) == CycNum::zeta(o, 1);
        }
        self.reflections = refl;
    }

    /// Orders of the pointwise stabilisers of the reflecting hyperplanes.
    pub fn hyperplane_orders(&self) -> Vec<u32> {
        let mut count = vec![1u32; self.hyperplanes.len()];
        for r in &self.reflections {
            count[r.hyperplane] += 1;
        }
        count
    }

    /// Subgroup generated by generators `j` (BFS with length-lex least words
    /// in those generators).
    pub fn subgroup(&self, j: &[usize]) -> Subgroup {
        let mut seen = HashMap::from([(0usize, 0usize)]);
        let mut elements = vec![0usize];
        let mut words = vec![vec![]];
        let mut k = 0;
        while k < elements.len() {
            let w = elements[k];
            for (pos, &g) in j.iter().enumerate() {
                let x = self.rmul[w][g];
                if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(x) {
                    e.insert(elements.len());
                    let mut word = words[k].clone();
                    word.push(pos);
                    elements.push(x);
                    words.push(word);
                }
            }
            k += 1;
        }
        Subgroup { gens: j.to_vec(), elements, words }
    }

    /// Subgroup generated by arbitrary elements (as a sorted element list).
    pub fn generated_by(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut out = vec![0usize];
        let mut k = 0;
        while k < out.len() {
            let w = out[k];
            for &g in gens {
                let x = self.mul(w, g);
                if !seen[x] {
                    seen[x] = true;
                    out.push(x);
                }
            }
            k += 1;
        }
        out.sort_unstable();
        out
    }

    /// Hecke type of the standard parabolic W_J with the generators in the
    /// type's standard order.
    pub fn hecke_type(&self, j: &[usize]) -> Result<(HeckeType, Vec<usize>)> {
        subset_type(&self.presentation, j)
    }

    pub fn full_hecke_type(&self) -> Result<(HeckeType, Vec<usize>)> {
        let all: Vec<usize> = (0..self.gens.len()).collect();
        self.hecke_type(&all)
    }

    /// Whether the generators form a Coxeter system presentation (all
    /// presentation blocks Coxeter, or B_n).
    pub fn is_coxeter(&self) -> bool {
        use super::spec::Presentation;
        self.presentation.iter().all(|b| match &b.kind {
            Presentation::Coxeter(_) => true,
            Presentation::AK { e } | Presentation::Cyclic { e } => *e == 2,
            Presentation::Unsupported(_) => false,
        })
    }
}

/// Determinant by fraction-free elimination over the cyclotomic field.
pub fn det(m: &Mat) -> CycNum {
    let n = m.rows;
    let mut a = m.to_rows();
    let mut d = CycNum::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else { return CycNum::zero() };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        let piv = a[c][c].clone();
        d = &d * &piv;
        let inv = piv.inv().unwrap();
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] * &inv;
            for k in c..n {
                let t = &f * &a[c][k];
                a[r][k] = &a[r][k] - &t;
            }
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> ReflGroup {
        ReflGroup::build(&GroupSpec::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn orders() {
        for (s, n) in [("A1", 2), ("A2", 6), ("A3", 24), ("B2", 8), ("I2(5)", 10), ("I2(6)", 12), ("G(3,1,2)", 18), ("C(3)", 3), ("D4", 192), ("G(4,4,2)", 8), ("Sym(2)", 2), ("1", 1)] {
            assert_eq!(g(s).order(), n, "{}", s);
        }
    }

    #[test]
    fn inverses_and_words() {
        let w = g("G(3,1,2)");
        for x in 0..w.order() {
            assert_eq!(w.mul(x, w.inverse[x]), 0);
        }
        let a = g("A2");
        let max = (0..a.order()).map(|x| a.length(x)).max().unwrap();
        assert_eq!(max, 3);
    }

    #[test]
    fn reflections_and_classes() {
        let c3 = g("C(3)");
        assert_eq!(c3.hyperplanes.len(), 1);
        assert_eq!(c3.reflections.iter().filter(|r| r.distinguished).count(), 1);
        let s3 = g("A2");
        assert_eq!(s3.reflections.len(), 3);
        assert_eq!(s3.reflections.iter().map(|r| r.class).collect::<std::collections::HashSet<_>>().len(), 1);
        let w = g("G(3,1,2)");
        let mut by_order: HashMap<u32, usize> = HashMap::new();
        for r in &w.reflections {
            *by_order.entry(r.order).or_default() += 1;
        }
        assert_eq!(by_order[&2], 3);
        assert_eq!(by_order[&3], 4);
        assert_eq!(w.hyperplanes.len(), 5);
        assert_eq!(w.classes.len(), 9);
    }

    #[test]
    fn non_reflection_generator_rejected() {
        // Product blocks stay reflections; nothing else to probe through the
        // parser, so check det on a known element instead.
        let b2 = g("B2");
        let lens: Vec<usize> = b2.classes.iter().map(|c| c.len()).collect();
        assert_eq!(lens.iter().sum::<usize>(), 8);
        assert_eq!(det(&b2.elements[b2.gen_element(0)]), CycNum::from_int(-1));
    }
}
