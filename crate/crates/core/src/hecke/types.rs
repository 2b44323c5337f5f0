//! Hecke algebra types of the groups in scope, their irreducible labels and
//! explicit representations under the spetsial parameters.
//!
//! Parameters: a generator of order e has u_j = ζ_e^j for j < e and u_e = x;
//! type A and dihedral generators satisfy (T - x)(T + 1) = 0; for G(e,1,n)
//! the generator t has parameters Q_k = ζ_e^k (k < e), Q_e = x and the s_i
//! have (T - x)(T + 1) = 0.

use std::fmt;

use serde::Serialize;

use crate::exactnum::CycNum;
use crate::linalg::Matrix;

pub type Mat = Matrix<CycNum>;

/// Abstract Hecke type of a (parabolic sub)group with its standard
/// generator order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum HeckeType {
    /// Rank-1 group of order e.
    Cyclic(u32),
    /// Symmetric group S_{n+1} (Coxeter type A_n), n ≥ 2.
    A(usize),
    /// G(e,1,n) with n ≥ 2; e = 2 is type B_n. Generators t, s_1, ..., s_{n-1}.
    AK { e: u32, n: usize },
    /// Dihedral group of order 2m, m ∈ {5} ∪ {m ≥ 7}, and m = 6.
    Dihedral(u32),
    /// Direct product; the empty product is the trivial group.
    Product(Vec<HeckeType>),
}

impl HeckeType {
    pub fn trivial() -> Self {
        HeckeType::Product(vec![])
    }

    /// Canonical form: collapses small cases onto a single representative.
    pub fn normalised(self) -> Self {
        match self {
            HeckeType::A(1) => HeckeType::Cyclic(2),
            HeckeType::A(0) => HeckeType::trivial(),
            HeckeType::AK { e, n: 1 } => HeckeType::Cyclic(e),
            HeckeType::AK { n: 0, .. } => HeckeType::trivial(),
            HeckeType::AK { e: 1, n } => HeckeType::A(n - 1).normalised(),
            HeckeType::Dihedral(3) => HeckeType::A(2),
            HeckeType::Dihedral(4) => HeckeType::AK { e: 2, n: 2 },
            HeckeType::Dihedral(2) => HeckeType::Product(vec![HeckeType::Cyclic(2), HeckeType::Cyclic(2)]),
            HeckeType::Product(v) => {
                let mut flat = Vec::new();
                for t in v {
                    match t.normalised() {
                        HeckeType::Product(w) => flat.extend(w),
                        t => flat.push(t),
                    }
                }
                if flat.len() == 1 {
                    flat.pop().unwrap()
                } else {
                    HeckeType::Product(flat)
                }
            }
            t => t,
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            HeckeType::Cyclic(_) => 1,
            HeckeType::A(n) => *n,
            HeckeType::AK { n, .. } => *n,
            HeckeType::Dihedral(_) => 2,
            HeckeType::Product(v) => v.iter().map(|t| t.rank()).sum(),
        }
    }

    /// Number of generators in the standard presentation.
    pub fn num_gens(&self) -> usize {
        self.rank()
    }

    pub fn order(&self) -> u64 {
        match self {
            HeckeType::Cyclic(e) => *e as u64,
            HeckeType::A(n) => (1..=(*n as u64 + 1)).product(),
            HeckeType::AK { e, n } => (*e as u64).pow(*n as u32) * (1..=*n as u64).product::<u64>(),
            HeckeType::Dihedral(m) => 2 * *m as u64,
            HeckeType::Product(v) => v.iter().map(|t| t.order()).product(),
        }
    }

    /// Orders of the standard generators.
    pub fn gen_orders(&self) -> Vec<u32> {
        match self {
            HeckeType::Cyclic(e) => vec![*e],
            HeckeType::A(n) => vec![2; *n],
            HeckeType::AK { e, n } => {
                let mut v = vec![*e];
                v.extend(std::iter::repeat_n(2, n - 1));
                v
            }
            HeckeType::Dihedral(_) => vec![2, 2],
            HeckeType::Product(v) => v.iter().flat_map(|t| t.gen_orders()).collect(),
        }
    }

    /// Conductor of the field generated by the spetsial parameters and the
    /// representations below.
    pub fn conductor(&self) -> u32 {
        match self {
            HeckeType::Cyclic(e) => *e,
            HeckeType::A(_) => 1,
            HeckeType::AK { e, .. } => *e,
            HeckeType::Dihedral(m) => *m,
            HeckeType::Product(v) => v.iter().map(|t| t.conductor()).fold(1, num_integer::lcm),
        }
    }

    /// Parameters u_{r,j} of the standard generators, in the order j = 1..o(r),
    /// evaluated at x = `x`.
    pub fn gen_parameters(&self, x: &CycNum) -> Vec<Vec<CycNum>> {
        self.gen_orders()
            .into_iter()
            .map(|o| {
                let mut u: Vec<CycNum> = (1..o).map(|j| CycNum::zeta(o, j as i64)).collect();
                u.push(x.clone());
                u
            })
            .collect()
    }

    pub fn irreps(&self) -> Vec<IrrLabel> {
        match self {
            HeckeType::Cyclic(e) => (1..=*e).map(IrrLabel::Cyclic).collect(),
            HeckeType::A(n) => partitions(n + 1).into_iter().map(IrrLabel::Partition).collect(),
            HeckeType::AK { e, n } => multipartitions(*n, *e as usize).into_iter().map(IrrLabel::Multi).collect(),
            HeckeType::Dihedral(m) => {
                let mut v = vec![IrrLabel::Dihedral(DihLabel::Triv), IrrLabel::Dihedral(DihLabel::Sgn)];
                if m % 2 == 0 {
                    v.push(IrrLabel::Dihedral(DihLabel::Eps(1)));
                    v.push(IrrLabel::Dihedral(DihLabel::Eps(2)));
                }
                for j in 1..m.div_ceil(2) {
                    v.push(IrrLabel::Dihedral(DihLabel::Rho(j)));
                }
                v
            }
            HeckeType::Product(v) => {
                let mut out: Vec<Vec<IrrLabel>> = vec![vec![]];
                for t in v {
                    let mut next = Vec::new();
                    for prefix in &out {
                        for l in t.irreps() {
                            let mut p = prefix.clone();
                            p.push(l);
                            next.push(p);
                        }
                    }
                    out = next;
                }
                out.into_iter().map(IrrLabel::Product).collect()
            }
        }
    }

    /// Label of the trivial character (every generator acts by x).
    pub fn trivial_label(&self) -> IrrLabel {
        match self {
            HeckeType::Cyclic(e) => IrrLabel::Cyclic(*e),
            HeckeType::A(n) => IrrLabel::Partition(vec![n + 1]),
            HeckeType::AK { e, n } => {
                let mut v = vec![vec![]; *e as usize];
                v[*e as usize - 1] = vec![*n];
                IrrLabel::Multi(v)
            }
            HeckeType::Dihedral(_) => IrrLabel::Dihedral(DihLabel::Triv),
            HeckeType::Product(v) => IrrLabel::Product(v.iter().map(|t| t.trivial_label()).collect()),
        }
    }

    /// Representation matrices of the standard generators for `label`, at
    /// x = `x`. For x = 1 the group representation is returned.
    pub fn representation(&self, label: &IrrLabel, x: &CycNum) -> Vec<Mat> {
        match (self, label) {
            (HeckeType::Cyclic(e), IrrLabel::Cyclic(j)) => {
                let u = if *j == *e { x.clone() } else { CycNum::zeta(*e, *j as i64) };
                vec![Matrix::from_rows(vec![vec![u]])]
            }
            (HeckeType::A(n), IrrLabel::Partition(p)) => {
                let mp = vec![p.clone()];
                seminormal(&[CycNum::one()], x, &mp, *n + 1, false)
            }
            (HeckeType::AK { e, n }, IrrLabel::Multi(mp)) => {
                let mut qs: Vec<CycNum> = (1..*e).map(|k| CycNum::zeta(*e, k as i64)).collect();
                qs.push(x.clone());
                seminormal(&qs, x, mp, *n, true)
            }
            (HeckeType::Dihedral(m), IrrLabel::Dihedral(d)) => dihedral_rep(*m, *d, x),
            (HeckeType::Product(ts), IrrLabel::Product(ls)) => {
                let parts: Vec<Vec<Mat>> = ts.iter().zip(ls).map(|(t, l)| t.representation(l, x)).collect();
                let dims: Vec<usize> = parts.iter().map(|p| p.first().map(|m| m.rows).unwrap_or(1)).collect();
                let mut out = Vec::new();
                for (i, p) in parts.iter().enumerate() {
                    for g in p {
                        // I ⊗ ... ⊗ g ⊗ ... ⊗ I
                        let mut acc = Matrix::identity(1);
                        for (k, &d) in dims.iter().enumerate() {
                            let f = if k == i { g.clone() } else { Matrix::identity(d) };
                            acc = acc.kron(&f);
                        }
                        out.push(acc);
                    }
                }
                out
            }
            _ => panic!("label {:?} does not belong to {:?}", label, self),
        }
    }

    pub fn irrep_dim(&self, label: &IrrLabel) -> usize {
        match (self, label) {
            (HeckeType::Cyclic(_), _) => 1,
            (HeckeType::A(n), IrrLabel::Partition(p)) => standard_tableaux(std::slice::from_ref(p), n + 1).len(),
            (HeckeType::AK { n, .. }, IrrLabel::Multi(mp)) => standard_tableaux(mp, *n).len(),
            (HeckeType::Dihedral(_), IrrLabel::Dihedral(DihLabel::Rho(_))) => 2,
            (HeckeType::Dihedral(_), _) => 1,
            (HeckeType::Product(ts), IrrLabel::Product(ls)) => ts.iter().zip(ls).map(|(t, l)| t.irrep_dim(l)).product(),
            _ => panic!("label {:?} does not belong to {:?}", label, self),
        }
    }
}

impl fmt::Display for HeckeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeckeType::Cyclic(e) => write!(f, "C{}", e),
            HeckeType::A(n) => write!(f, "A{}", n),
            HeckeType::AK { e, n } => write!(f, "G({},1,{})", e, n),
            HeckeType::Dihedral(m) => write!(f, "I2({})", m),
            HeckeType::Product(v) if v.is_empty() => write!(f, "1"),
            HeckeType::Product(v) => {
                let s: Vec<String> = v.iter().map(|t| t.to_string()).collect();
                write!(f, "{}", s.join("x"))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum DihLabel {
    Triv,
    Sgn,
    /// Linear characters for even m: Eps(1) has s ↦ x, t ↦ -1; Eps(2) the reverse.
    Eps(u8),
    /// Two-dimensional representation with rotation eigenvalues ζ_m^{±j}.
    Rho(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum IrrLabel {
    Cyclic(u32),
    Partition(Vec<usize>),
    Multi(Vec<Vec<usize>>),
    Dihedral(DihLabel),
    Product(Vec<IrrLabel>),
}

fn fmt_partition(p: &[usize]) -> String {
    let s: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("({})", s.join(","))
}

impl fmt::Display for IrrLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrrLabel::Cyclic(j) => write!(f, "u{}", j),
            IrrLabel::Partition(p) => write!(f, "{}", fmt_partition(p)),
            IrrLabel::Multi(mp) => {
                let s: Vec<String> = mp.iter().map(|p| fmt_partition(p)).collect();
                write!(f, "[{}]", s.join(","))
            }
            IrrLabel::Dihedral(DihLabel::Triv) => write!(f, "triv"),
            IrrLabel::Dihedral(DihLabel::Sgn) => write!(f, "sgn"),
            IrrLabel::Dihedral(DihLabel::Eps(k)) => write!(f, "eps{}", k),
            IrrLabel::Dihedral(DihLabel::Rho(j)) => write!(f, "rho{}", j),
            IrrLabel::Product(v) if v.is_empty() => write!(f, "1"),
            IrrLabel::Product(v) => {
                let s: Vec<String> = v.iter().map(|l| l.to_string()).collect();
                write!(f, "{}", s.join("x"))
            }
        }
    }
}

pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            prefix.push(k);
            rec(n - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// All e-multipartitions of n, ordered by component sizes then partitions.
pub fn multipartitions(n: usize, e: usize) -> Vec<Vec<Vec<usize>>> {
    fn compositions(n: usize, e: usize) -> Vec<Vec<usize>> {
        if e == 1 {
            return vec![vec![n]];
        }
        let mut out = Vec::new();
        for k in 0..=n {
            for mut rest in compositions(n - k, e - 1) {
                let mut v = vec![k];
                v.append(&mut rest);
                out.push(v);
            }
        }
        out
    }
    let mut out = Vec::new();
    for comp in compositions(n, e) {
        let mut acc: Vec<Vec<Vec<usize>>> = vec![vec![]];
        for &c in &comp {
            let mut next = Vec::new();
            for prefix in &acc {
                for p in partitions(c) {
                    let mut q = prefix.clone();
                    q.push(p);
                    next.push(q);
                }
            }
            acc = next;
        }
        out.extend(acc);
    }
    out
}

pub fn conjugate(p: &[usize]) -> Vec<usize> {
    if p.is_empty() {
        return vec![];
    }
    (0..p[0]).map(|c| p.iter().filter(|&&r| r > c).count()).collect()
}

/// A box (component, row, column).
pub type Cell = (usize, usize, usize);

/// Standard tableaux of a multipartition of n: `t[i]` is the cell holding i+1.
pub fn standard_tableaux(mp: &[Vec<usize>], n: usize) -> Vec<Vec<Cell>> {
    fn rec(mp: &[Vec<usize>], filled: &mut Vec<Vec<usize>>, cur: &mut Vec<Cell>, n: usize, out: &mut Vec<Vec<Cell>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for k in 0..mp.len() {
            for r in 0..mp[k].len() {
                let c = filled[k][r];
                if c < mp[k][r] && (r == 0 || filled[k][r - 1] > c) {
                    filled[k][r] += 1;
                    cur.push((k, r, c));
                    rec(mp, filled, cur, n, out);
                    cur.pop();
                    filled[k][r] -= 1;
                }
            }
        }
    }
    let mut filled: Vec<Vec<usize>> = mp.iter().map(|p| vec![0; p.len()]).collect();
    let mut out = Vec::new();
    rec(mp, &mut filled, &mut Vec::new(), n, &mut out);
    out
}

/// Seminormal representation of a cyclotomic Hecke algebra (or, without t,
/// of type A). For x = 1 the classical limit is used, where boxes in the
/// same component have axial-distance coefficients and boxes in different
/// components are swapped.
fn seminormal(qs: &[CycNum], x: &CycNum, mp: &[Vec<usize>], n: usize, with_t: bool) -> Vec<Mat> {
    let tabs = standard_tableaux(mp, n);
    let d = tabs.len();
    let index: std::collections::HashMap<Vec<Cell>, usize> =
        tabs.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    let classical = x.is_one();
    let res = |c: &Cell| -> CycNum {
        let (k, r, col) = *c;
        &qs[k] * &x.powi(col as i64 - r as i64).unwrap()
    };
    let mut gens = Vec::new();
    if with_t {
        let diag: Vec<CycNum> = tabs.iter().map(|t| if classical { qs[t[0].0].clone() } else { res(&t[0]) }).collect();
        gens.push(Matrix::diagonal(diag));
    }
    for i in 0..n - 1 {
        let mut m = Matrix::zeros(d, d);
        for (a, t) in tabs.iter().enumerate() {
            let (c1, c2) = (t[i], t[i + 1]);
            let mut sw = t.clone();
            sw.swap(i, i + 1);
            let other = index.get(&sw).copied();
            if classical {
                // q -> 1 limit of the formulas below
                if c1.0 == c2.0 {
                    let content = |c: &Cell| c.2 as i64 - c.1 as i64;
                    let ax = content(&c2) - content(&c1);
                    let aval = CycNum::frac(1, ax);
                    m.set(a, a, aval.clone());
                    if let Some(b) = other {
                        let coef = if a < b { CycNum::one() } else { &CycNum::one() - &(&aval * &aval) };
                        m.set(b, a, coef);
                    }
                } else if let Some(b) = other {
                    m.set(b, a, CycNum::one());
                }
            } else {
                let (r1, r2) = (res(&c1), res(&c2));
                let qm1 = x - &CycNum::one();
                let av = &(&qm1 * &r2) * &(&r2 - &r1).inv().expect("distinct residues");
                m.set(a, a, av.clone());
                if let Some(b) = other {
                    let coef = if a < b {
                        CycNum::one()
                    } else {
                        let ap = &(&qm1 * &r1) * &(&r1 - &r2).inv().unwrap();
                        &(&av * &ap) + x
                    };
                    m.set(b, a, coef);
                }
            }
        }
        gens.push(m);
    }
    gens
}

fn dihedral_rep(m: u32, d: DihLabel, x: &CycNum) -> Vec<Mat> {
    let one = |v: CycNum| Matrix::from_rows(vec![vec![v]]);
    let neg1 = CycNum::from_int(-1);
    match d {
        DihLabel::Triv => vec![one(x.clone()), one(x.clone())],
        DihLabel::Sgn => vec![one(neg1.clone()), one(neg1)],
        DihLabel::Eps(1) => vec![one(x.clone()), one(neg1)],
        DihLabel::Eps(_) => vec![one(neg1), one(x.clone())],
        DihLabel::Rho(j) => {
            let c = &(&CycNum::from_int(2) + &CycNum::zeta(m, j as i64)) + &CycNum::zeta(m, -(j as i64));
            let s = Matrix::from_rows(vec![vec![neg1.clone(), CycNum::zero()], vec![CycNum::one(), x.clone()]]);
            let t = Matrix::from_rows(vec![vec![x.clone(), x * &c], vec![CycNum::zero(), neg1]]);
            vec![s, t]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_relations(ty: &HeckeType, x: &CycNum) {
        for l in ty.irreps() {
            let g = ty.representation(&l, x);
            let params = ty.gen_parameters(x);
            for (m, u) in g.iter().zip(&params) {
                let mut p = Matrix::identity(m.rows);
                for uj in u {
                    p = &p * &(m - &Matrix::identity(m.rows).scale(uj));
                }
                assert!(p.is_zero(), "order relation fails for {} {}", ty, l);
            }
        }
    }

    fn braid(a: &Mat, b: &Mat, m: usize) -> bool {
        let mut l = Matrix::identity(a.rows);
        let mut r = Matrix::identity(a.rows);
        for i in 0..m {
            l = &l * if i % 2 == 0 { a } else { b };
            r = &r * if i % 2 == 0 { b } else { a };
        }
        l == r
    }

    #[test]
    fn counts() {
        assert_eq!(partitions(4).len(), 5);
        assert_eq!(multipartitions(2, 3).len(), 9);
        assert_eq!(standard_tableaux(&[vec![2, 1]], 3).len(), 2);
        assert_eq!(conjugate(&[3, 1]), vec![2, 1, 1]);
    }

    #[test]
    fn ak_relations_generic_and_classical() {
        let ty = HeckeType::AK { e: 3, n: 2 };
        for x in [CycNum::from_int(2), CycNum::one()] {
            check_relations(&ty, &x);
            for l in ty.irreps() {
                let g = ty.representation(&l, &x);
                assert!(braid(&g[0], &g[1], 4), "braid fails for {}", l);
            }
        }
    }

    #[test]
    fn type_a_relations() {
        let ty = HeckeType::A(3);
        for x in [CycNum::frac(7, 3), CycNum::one()] {
            check_relations(&ty, &x);
            for l in ty.irreps() {
                let g = ty.representation(&l, &x);
                assert!(braid(&g[0], &g[1], 3));
                assert!(braid(&g[1], &g[2], 3));
                assert!(braid(&g[0], &g[2], 2));
            }
        }
    }

    #[test]
    fn dihedral_relations() {
        for m in [5u32, 6] {
            let ty = HeckeType::Dihedral(m);
            for x in [CycNum::from_int(3), CycNum::one()] {
                check_relations(&ty, &x);
                for l in ty.irreps() {
                    let g = ty.representation(&l, &x);
                    assert!(braid(&g[0], &g[1], m as usize));
                }
            }
        }
    }

    #[test]
    fn degrees_square_sum() {
        for ty in [HeckeType::A(3), HeckeType::AK { e: 3, n: 2 }, HeckeType::Dihedral(6), HeckeType::Cyclic(4)] {
            let s: u64 = ty.irreps().iter().map(|l| (ty.irrep_dim(l) as u64).pow(2)).sum();
            assert_eq!(s, ty.order(), "{}", ty);
        }
    }
}
