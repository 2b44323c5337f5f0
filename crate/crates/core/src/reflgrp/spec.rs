//! Group specifications: parsing, generator matrices and presentation data.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::CycNum;
use crate::hecke::HeckeType;
use crate::linalg::Matrix;

/// A family of reflection groups with its reflection representation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    /// Type A_n in the root (Cartan) representation of rank n.
    A(usize),
    /// Type B_n as the signed permutation group G(2,1,n).
    B(usize),
    /// Type D_n as G(2,2,n).
    D(usize),
    /// Dihedral group of order 2m.
    I2(u32),
    /// Imprimitive group G(e,p,n).
    Imprimitive { e: u32, p: u32, n: usize },
    /// Cyclic group generated by diag(ζ_e) in rank 1.
    Cyclic(u32),
    /// The symmetric group S_n permuting the coordinates of Z^n.
    Perm(usize),
    /// Trivial group acting on a lattice of rank n.
    Trivial(usize),
    Product(Vec<GroupSpec>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupSpec {
    pub family: Family,
}

/// How the Hecke algebra of a block of generators is presented.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Presentation {
    /// Coxeter generators with Coxeter matrix entries m_ij.
    Coxeter(Vec<Vec<u32>>),
    /// G(e,1,n) with generators t, s_1, ..., s_{n-1}.
    AK { e: u32 },
    Cyclic { e: u32 },
    /// No Hecke data available for this block.
    Unsupported(String),
}

/// A block of consecutive generators sharing one presentation.
#[derive(Clone, Debug)]
pub struct PresentationBlock {
    pub offset: usize,
    pub len: usize,
    pub kind: Presentation,
}

fn num(s: &str) -> Result<u32> {
    s.trim().parse::<u32>().map_err(|_| Error::InvalidSpec(format!("expected a positive integer, got '{}'", s)))
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            'x' | '*' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

fn inner<'a>(s: &'a str, prefix: &str) -> Option<&'a str> {
    s.strip_prefix(prefix).and_then(|r| r.strip_suffix(')'))
}

impl GroupSpec {
    pub fn new(family: Family) -> Self {
        GroupSpec { family }
    }

    /// Parse names such as `A2`, `B2`, `D4`, `I2(5)`, `G(3,1,2)`, `C(4)`,
    /// `Sym(2)`, `Triv(1)` and products `A1xC(3)`.
    pub fn parse(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::InvalidSpec("empty group name".into()));
        }
        let parts = split_top_level(&s);
        if parts.len() > 1 {
            let factors = parts.into_iter().map(GroupSpec::parse).collect::<Result<Vec<_>>>()?;
            return Ok(GroupSpec::new(Family::Product(factors)));
        }
        let fam = if let Some(m) = inner(&s, "I2(") {
            let m = num(m)?;
            if m < 2 {
                return Err(Error::InvalidSpec("I2(m) needs m ≥ 2".into()));
            }
            Family::I2(m)
        } else if let Some(args) = inner(&s, "G(") {
            let v: Vec<&str> = args.split(',').collect();
            if v.len() != 3 {
                return Err(Error::InvalidSpec(format!("G(e,p,n) needs three arguments, got '{}'", s)));
            }
            let (e, p, n) = (num(v[0])?, num(v[1])?, num(v[2])? as usize);
            if e == 0 || p == 0 || n == 0 || e % p != 0 {
                return Err(Error::InvalidSpec(format!("G({},{},{}) requires p | e and n ≥ 1", e, p, n)));
            }
            if n == 2 && p > 1 && p < e && e % 2 == 0 && p % 2 == 0 {
                return Err(Error::InvalidSpec(format!(
                    "G({},{},2) with e and p even is excluded: no known monomial basis",
                    e, p
                )));
            }
            Family::Imprimitive { e, p, n }
        } else if let Some(e) = inner(&s, "C(") {
            let e = num(e)?;
            if e < 2 {
                return Err(Error::InvalidSpec("C(e) needs e ≥ 2".into()));
            }
            Family::Cyclic(e)
        } else if let Some(n) = inner(&s, "Sym(") {
            Family::Perm(num(n)? as usize)
        } else if let Some(n) = inner(&s, "Triv(") {
            Family::Trivial(num(n)? as usize)
        } else if s == "1" {
            Family::Trivial(0)
        } else if let Some(n) = s.strip_prefix('A') {
            let n = num(n)? as usize;
            if n == 0 {
                return Err(Error::InvalidSpec("A0 is not a reflection group; use Triv(0)".into()));
            }
            Family::A(n)
        } else if let Some(n) = s.strip_prefix('B') {
            let n = num(n)? as usize;
            if n < 2 {
                return Err(Error::InvalidSpec("B_n needs n ≥ 2".into()));
            }
            Family::B(n)
        } else if let Some(n) = s.strip_prefix('D') {
            let n = num(n)? as usize;
            if n < 2 {
                return Err(Error::InvalidSpec("D_n needs n ≥ 2".into()));
            }
            Family::D(n)
        } else {
            return Err(Error::InvalidSpec(format!("unknown group '{}'", s)));
        };
        Ok(GroupSpec::new(fam))
    }

    pub fn rank(&self) -> usize {
        match &self.family {
            Family::A(n) | Family::B(n) | Family::D(n) | Family::Perm(n) | Family::Trivial(n) => *n,
            Family::I2(_) => 2,
            Family::Imprimitive { n, .. } => *n,
            Family::Cyclic(_) => 1,
            Family::Product(v) => v.iter().map(|s| s.rank()).sum(),
        }
    }

    /// Expected group order from the family formula.
    pub fn expected_order(&self) -> u64 {
        let fact = |n: usize| (1..=n as u64).product::<u64>();
        match &self.family {
            Family::A(n) => fact(n + 1),
            Family::B(n) => 2u64.pow(*n as u32) * fact(*n),
            Family::D(n) => 2u64.pow(*n as u32 - 1) * fact(*n),
            Family::I2(m) => 2 * *m as u64,
            Family::Imprimitive { e, p, n } => (*e as u64).pow(*n as u32) * fact(*n) / *p as u64,
            Family::Cyclic(e) => *e as u64,
            Family::Perm(n) => fact(*n),
            Family::Trivial(_) => 1,
            Family::Product(v) => v.iter().map(|s| s.expected_order()).product(),
        }
    }

    /// Conductor of the field of definition of the generator matrices.
    pub fn conductor(&self) -> u32 {
        match &self.family {
            Family::I2(m) if ![2, 3, 4, 6].contains(m) => *m,
            Family::Imprimitive { e, .. } => *e,
            Family::Cyclic(e) => *e,
            Family::Product(v) => v.iter().map(|s| s.conductor()).fold(1, num_integer::lcm),
            _ => 1,
        }
    }

    /// Reflection-representation matrices of the generators.
    pub fn generators(&self) -> Vec<Matrix<CycNum>> {
        match &self.family {
            Family::A(n) => {
                let mut c = vec![vec![0i64; *n]; *n];
                for i in 0..*n {
                    c[i][i] = 2;
                    if i + 1 < *n {
                        c[i][i + 1] = -1;
                        c[i + 1][i] = -1;
                    }
                }
                cartan_generators(&c)
            }
            Family::I2(m) => match m {
                2 => cartan_generators(&[vec![2, 0], vec![0, 2]]),
                3 => cartan_generators(&[vec![2, -1], vec![-1, 2]]),
                4 => cartan_generators(&[vec![2, -1], vec![-2, 2]]),
                6 => cartan_generators(&[vec![2, -1], vec![-3, 2]]),
                _ => imprimitive_generators(*m, *m, 2),
            },
            Family::B(n) => imprimitive_generators(2, 1, *n),
            Family::D(n) => imprimitive_generators(2, 2, *n),
            Family::Imprimitive { e, p, n } => imprimitive_generators(*e, *p, *n),
            Family::Cyclic(e) => vec![Matrix::from_rows(vec![vec![CycNum::zeta(*e, 1)]])],
            Family::Perm(n) => (0..n.saturating_sub(1)).map(|i| transposition(*n, i, i + 1)).collect(),
            Family::Trivial(_) => vec![],
            Family::Product(v) => {
                let ranks: Vec<usize> = v.iter().map(|s| s.rank()).collect();
                let mut out = Vec::new();
                for (k, s) in v.iter().enumerate() {
                    for g in s.generators() {
                        let blocks: Vec<Matrix<CycNum>> = ranks
                            .iter()
                            .enumerate()
                            .map(|(j, &r)| if j == k { g.clone() } else { Matrix::identity(r) })
                            .collect();
                        out.push(Matrix::direct_sum(&blocks));
                    }
                }
                out
            }
        }
    }

    /// Presentation blocks covering all generators in order.
    pub fn presentation(&self) -> Vec<PresentationBlock> {
        let single = |len: usize, kind: Presentation| vec![PresentationBlock { offset: 0, len, kind }];
        let path = |n: usize, first: u32| -> Vec<Vec<u32>> {
            let mut m = vec![vec![2u32; n]; n];
            for i in 0..n {
                m[i][i] = 1;
                if i + 1 < n {
                    let v = if i == 0 { first } else { 3 };
                    m[i][i + 1] = v;
                    m[i + 1][i] = v;
                }
            }
            m
        };
        match &self.family {
            Family::A(n) => single(*n, Presentation::Coxeter(path(*n, 3))),
            Family::Perm(n) => {
                let k = n.saturating_sub(1);
                if k == 0 {
                    vec![]
                } else {
                    single(k, Presentation::Coxeter(path(k, 3)))
                }
            }
            Family::I2(m) => single(2, Presentation::Coxeter(vec![vec![1, *m], vec![*m, 1]])),
            Family::B(n) => single(*n, Presentation::AK { e: 2 }),
            Family::Imprimitive { e, p: 1, n } => {
                if *n == 1 {
                    single(1, Presentation::Cyclic { e: *e })
                } else {
                    single(*n, Presentation::AK { e: *e })
                }
            }
            Family::Imprimitive { e, p, n } if e == p && *n == 2 => {
                single(2, Presentation::Coxeter(vec![vec![1, *e], vec![*e, 1]]))
            }
            Family::D(_) | Family::Imprimitive { .. } => {
                let g = self.generators().len();
                single(g, Presentation::Unsupported(format!("no Hecke data for {}", self)))
            }
            Family::Cyclic(e) => single(1, Presentation::Cyclic { e: *e }),
            Family::Trivial(_) => vec![],
            Family::Product(v) => {
                let mut out = Vec::new();
                let mut off = 0;
                for s in v {
                    let ng = s.generators().len();
                    for mut b in s.presentation() {
                        b.offset += off;
                        out.push(b);
                    }
                    off += ng;
                }
                out
            }
        }
    }

    /// Canonical text form, used as a cache fingerprint.
    pub fn canonical_name(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::A(n) => write!(f, "A{}", n),
            Family::B(n) => write!(f, "B{}", n),
            Family::D(n) => write!(f, "D{}", n),
            Family::I2(m) => write!(f, "I2({})", m),
            Family::Imprimitive { e, p, n } => write!(f, "G({},{},{})", e, p, n),
            Family::Cyclic(e) => write!(f, "C({})", e),
            Family::Perm(n) => write!(f, "Sym({})", n),
            Family::Trivial(0) => write!(f, "1"),
            Family::Trivial(n) => write!(f, "Triv({})", n),
            Family::Product(v) => {
                let s: Vec<String> = v.iter().map(|g| g.to_string()).collect();
                write!(f, "{}", s.join("x"))
            }
        }
    }
}

/// s_i(α_j) = α_j - c_ij α_i on the basis of simple roots.
fn cartan_generators(c: &[Vec<i64>]) -> Vec<Matrix<CycNum>> {
    let n = c.len();
    (0..n)
        .map(|i| {
            let mut m = Matrix::identity(n);
            for j in 0..n {
                m.set(i, j, CycNum::from_int(if i == j { -1 } else { -c[i][j] }));
            }
            m
        })
        .collect()
}

fn transposition(n: usize, i: usize, j: usize) -> Matrix<CycNum> {
    let mut m = Matrix::identity(n);
    m.set(i, i, CycNum::zero());
    m.set(j, j, CycNum::zero());
    m.set(i, j, CycNum::one());
    m.set(j, i, CycNum::one());
    m
}

/// Generators of G(e,p,n): t^p (if p < e), s' (if p > 1 and n ≥ 2), and the
/// transpositions s_1, ..., s_{n-1}.
fn imprimitive_generators(e: u32, p: u32, n: usize) -> Vec<Matrix<CycNum>> {
    let mut out = Vec::new();
    if p < e {
        let mut t = Matrix::identity(n);
        t.set(0, 0, CycNum::zeta(e, p as i64));
        out.push(t);
    }
    if p > 1 && n >= 2 {
        let mut s = Matrix::identity(n);
        s.set(0, 0, CycNum::zero());
        s.set(1, 1, CycNum::zero());
        s.set(0, 1, CycNum::zeta(e, -1));
        s.set(1, 0, CycNum::zeta(e, 1));
        out.push(s);
    }
    for i in 0..n.saturating_sub(1) {
        out.push(transposition(n, i, i + 1));
    }
    out
}

/// Hecke type of the subgroup generated by the generators in `j`, together
/// with those generators in the type's standard order.
pub fn subset_type(blocks: &[PresentationBlock], j: &[usize]) -> Result<(HeckeType, Vec<usize>)> {
    let mut comps: Vec<(HeckeType, Vec<usize>)> = Vec::new();
    for b in blocks {
        let local: Vec<usize> = j.iter().filter(|&&g| g >= b.offset && g < b.offset + b.len).map(|&g| g - b.offset).collect();
        if local.is_empty() {
            continue;
        }
        let glob = |v: Vec<usize>| v.into_iter().map(|g| g + b.offset).collect::<Vec<_>>();
        match &b.kind {
            Presentation::Unsupported(msg) => return Err(Error::ProviderMissing(msg.clone())),
            Presentation::Cyclic { e } => comps.push((HeckeType::Cyclic(*e), glob(local))),
            Presentation::AK { e } => {
                for run in runs(&local) {
                    let ty = if run[0] == 0 {
                        HeckeType::AK { e: *e, n: run.len() }
                    } else {
                        HeckeType::A(run.len())
                    };
                    comps.push((ty.normalised(), glob(run)));
                }
            }
            Presentation::Coxeter(m) => {
                for comp in coxeter_components(m, &local) {
                    let (ty, order) = classify_coxeter(m, &comp)?;
                    comps.push((ty, glob(order)));
                }
            }
        }
    }
    comps.sort_by_key(|(_, g)| g[0]);
    let gens: Vec<usize> = comps.iter().flat_map(|(_, g)| g.clone()).collect();
    let ty = HeckeType::Product(comps.into_iter().map(|(t, _)| t).collect()).normalised();
    Ok((ty, gens))
}

fn runs(v: &[usize]) -> Vec<Vec<usize>> {
    let mut sorted = v.to_vec();
    sorted.sort_unstable();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for x in sorted {
        match out.last_mut() {
            Some(r) if *r.last().unwrap() + 1 == x => r.push(x),
            _ => out.push(vec![x]),
        }
    }
    out
}

fn coxeter_components(m: &[Vec<u32>], nodes: &[usize]) -> Vec<Vec<usize>> {
    let mut sorted = nodes.to_vec();
    sorted.sort_unstable();
    let mut seen = vec![false; sorted.len()];
    let mut out = Vec::new();
    for s in 0..sorted.len() {
        if seen[s] {
            continue;
        }
        let mut comp = vec![sorted[s]];
        seen[s] = true;
        let mut k = 0;
        while k < comp.len() {
            let u = comp[k];
            for (t, &v) in sorted.iter().enumerate() {
                if !seen[t] && m[u][v] >= 3 {
                    seen[t] = true;
                    comp.push(v);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn classify_coxeter(m: &[Vec<u32>], comp: &[usize]) -> Result<(HeckeType, Vec<usize>)> {
    let unsupported = || Error::ProviderMissing(format!("Coxeter component {:?} has no Hecke provider", comp));
    let k = comp.len();
    if k == 1 {
        return Ok((HeckeType::Cyclic(2), comp.to_vec()));
    }
    if k == 2 {
        let mm = m[comp[0]][comp[1]];
        return Ok((HeckeType::Dihedral(mm).normalised(), comp.to_vec()));
    }
    let nbrs = |u: usize| comp.iter().copied().filter(|&v| v != u && m[u][v] >= 3).collect::<Vec<_>>();
    if comp.iter().any(|&u| nbrs(u).len() > 2) {
        return Err(unsupported());
    }
    let ends: Vec<usize> = comp.iter().copied().filter(|&u| nbrs(u).len() == 1).collect();
    if ends.len() != 2 {
        return Err(unsupported());
    }
    let walk = |start: usize| {
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(&nx) = nbrs(cur).iter().find(|&&v| v != prev) {
            order.push(nx);
            prev = cur;
            cur = nx;
        }
        order
    };
    let labels = |o: &[usize]| o.windows(2).map(|w| m[w[0]][w[1]]).collect::<Vec<_>>();
    let o1 = walk(ends[0]);
    let l1 = labels(&o1);
    if l1.iter().all(|&x| x == 3) {
        return Ok((HeckeType::A(k), o1));
    }
    let o2 = walk(ends[1]);
    let l2 = labels(&o2);
    for (o, l) in [(o1, l1), (o2, l2)] {
        if l[0] == 4 && l[1..].iter().all(|&x| x == 3) {
            return Ok((HeckeType::AK { e: 2, n: k }, o));
        }
    }
    Err(unsupported())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        for s in ["A2", "B2", "I2(5)", "G(3,1,2)", "C(4)", "A1xC(3)", "Sym(2)", "1", "Triv(2)", "D4"] {
            assert_eq!(GroupSpec::parse(s).unwrap().to_string(), s);
        }
        assert!(GroupSpec::parse("G(4,2,2)").is_err());
        assert!(GroupSpec::parse("Q7").is_err());
    }

    #[test]
    fn subset_types() {
        let b = GroupSpec::parse("G(3,1,3)").unwrap().presentation();
        let (t, g) = subset_type(&b, &[0, 2]).unwrap();
        assert_eq!(t, HeckeType::Product(vec![HeckeType::Cyclic(3), HeckeType::Cyclic(2)]));
        assert_eq!(g, vec![0, 2]);
        let (t, _) = subset_type(&b, &[0, 1]).unwrap();
        assert_eq!(t, HeckeType::AK { e: 3, n: 2 });
        let a = GroupSpec::parse("A3").unwrap().presentation();
        assert_eq!(subset_type(&a, &[0, 1, 2]).unwrap().0, HeckeType::A(3));
        assert_eq!(subset_type(&a, &[]).unwrap().0, HeckeType::trivial());
        let i = GroupSpec::parse("I2(6)").unwrap().presentation();
        assert_eq!(subset_type(&i, &[0, 1]).unwrap().0, HeckeType::Dihedral(6));
    }
}
