//! The finite torus T = (Z/ℓ^a)^n with its W-action, the dual group Irr(T),
//! orbit censuses on both sides and the W-equivariant orbit matching.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::valuation::{is_prime, mulmod};
use crate::exactnum::lift_root_of_unity;
use crate::reflgrp::{ParabolicClass, ReflGroup};

pub const DEFAULT_POINT_CAP: u64 = 1_000_000;

/// Odd primes ℓ ≤ `max` with ℓ ∤ |W| and conductor(W) | ℓ - 1.
pub fn admissible_primes(w: &ReflGroup, max: u64) -> Vec<u64> {
    (3..=max)
        .filter(|&l| is_prime(l) && !(w.order() as u64).is_multiple_of(l) && (l - 1) % w.conductor as u64 == 0)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Points of T.
    Points,
    /// Characters of T, θ_c(t) = ζ^{⟨c,t⟩}.
    Characters,
}

#[derive(Clone, Debug)]
pub struct Torus {
    pub l: u64,
    pub a: u32,
    pub modulus: u64,
    pub rank: usize,
    /// Image of ζ_m in Z/ℓ^a, m the conductor of W.
    pub root: u64,
    /// Action of every element of W on points, row-major.
    pub mats: Vec<Vec<u64>>,
    /// Action on characters: the transpose of the inverse.
    pub dual: Vec<Vec<u64>>,
    /// W-element index of each generator.
    pub gen_elems: Vec<usize>,
}

impl Torus {
    pub fn new(w: &ReflGroup, l: u64, a: u32) -> Result<Self> {
        Self::with_cap(w, l, a, DEFAULT_POINT_CAP)
    }

    pub fn with_cap(w: &ReflGroup, l: u64, a: u32, cap: u64) -> Result<Self> {
        if (w.order() as u64).is_multiple_of(l) {
            return Err(Error::UnsupportedParameters(format!("ℓ = {} divides |{}| = {}", l, w.spec, w.order())));
        }
        let root = lift_root_of_unity(l, a, w.conductor as u64)?;
        let modulus = root.modulus;
        let size = (modulus as u128).pow(w.rank as u32);
        if size > cap as u128 {
            return Err(Error::SizeLimit(format!("|T| = {} exceeds the cap {}", size, cap)));
        }
        let n = w.rank;
        let mats = w
            .elements
            .iter()
            .map(|m| {
                m.data
                    .iter()
                    .map(|c| {
                        c.reduce_mod(w.conductor, root.value, modulus)
                            .ok_or_else(|| Error::UnsupportedParameters(format!("entry {} is not ℓ-integral", c)))
                    })
                    .collect::<Result<Vec<u64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let dual = (0..w.order())
            .map(|x| {
                let inv = &mats[w.inverse[x]];
                let mut t = vec![0u64; n * n];
                for i in 0..n {
                    for j in 0..n {
                        t[i * n + j] = inv[j * n + i];
                    }
                }
                t
            })
            .collect();
        let gen_elems = (0..w.gens.len()).map(|g| w.gen_element(g)).collect();
        let t = Torus { l, a, modulus, rank: n, root: root.value, mats, dual, gen_elems };
        t.check_homomorphism(w)?;
        Ok(t)
    }

    /// The lifted matrices multiply like the group and have unit determinant
    /// modulo ℓ.
    fn check_homomorphism(&self, w: &ReflGroup) -> Result<()> {
        for x in 0..w.order() {
            for (g, &ge) in self.gen_elems.iter().enumerate() {
                let y = w.mul_gen(x, g);
                if self.mat_mul(&self.mats[x], &self.mats[ge]) != self.mats[y] {
                    return Err(Error::ModelInconsistency(format!(
                        "lifted action of {} over Z/{} is not a homomorphism",
                        w.spec, self.modulus
                    )));
                }
            }
        }
        for &ge in &self.gen_elems {
            if det_mod(&self.mats[ge], self.rank, self.l) == 0 {
                return Err(Error::ModelInconsistency("generator determinant is not a unit".into()));
            }
        }
        Ok(())
    }

    fn mat_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = self.rank;
        let m = self.modulus;
        let mut c = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = a[i * n + k];
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    c[i * n + j] = (c[i * n + j] + mulmod(x, b[k * n + j], m)) % m;
                }
            }
        }
        c
    }

    pub fn size(&self) -> usize {
        (self.modulus as usize).pow(self.rank as u32)
    }

    /// Coordinates of a point index; coordinate 0 is most significant so
    /// index order is lexicographic order.
    pub fn decode(&self, mut idx: usize) -> Vec<u64> {
        let m = self.modulus as usize;
        let mut v = vec![0u64; self.rank];
        for i in (0..self.rank).rev() {
            v[i] = (idx % m) as u64;
            idx /= m;
        }
        v
    }

    pub fn encode(&self, v: &[u64]) -> usize {
        v.iter().fold(0usize, |acc, &x| acc * self.modulus as usize + x as usize)
    }

    fn matrix(&self, side: Side, x: usize) -> &[u64] {
        match side {
            Side::Points => &self.mats[x],
            Side::Characters => &self.dual[x],
        }
    }

    /// w·v on the given side.
    pub fn act(&self, side: Side, x: usize, v: &[u64]) -> Vec<u64> {
        let a = self.matrix(side, x);
        let n = self.rank;
        let m = self.modulus;
        (0..n)
            .map(|i| (0..n).fold(0u64, |s, j| (s + mulmod(a[i * n + j], v[j], m)) % m))
            .collect()
    }

    /// ⟨c, t⟩ modulo ℓ^a.
    pub fn pairing(&self, c: &[u64], t: &[u64]) -> u64 {
        c.iter().zip(t).fold(0u64, |s, (&x, &y)| (s + mulmod(x, y, self.modulus)) % self.modulus)
    }

    pub fn add(&self, u: &[u64], v: &[u64]) -> Vec<u64> {
        u.iter().zip(v).map(|(&x, &y)| (x + y) % self.modulus).collect()
    }

    pub fn neg(&self, u: &[u64]) -> Vec<u64> {
        u.iter().map(|&x| (self.modulus - x) % self.modulus).collect()
    }

    /// Sorted stabiliser of v in W.
    pub fn stabiliser(&self, side: Side, v: &[u64]) -> Vec<usize> {
        (0..self.mats.len()).filter(|&x| self.act(side, x, v) == v).collect()
    }

    /// Orbit of v (point indices in discovery order).
    pub fn orbit(&self, side: Side, v: &[u64]) -> Vec<Vec<u64>> {
        let mut seen = HashMap::from([(v.to_vec(), ())]);
        let mut out = vec![v.to_vec()];
        let mut k = 0;
        while k < out.len() {
            for &g in &self.gen_elems {
                let y = self.act(side, g, &out[k]);
                if seen.insert(y.clone(), ()).is_none() {
                    out.push(y);
                }
            }
            k += 1;
        }
        out
    }

    /// An element u of W and the point u·v whose stabiliser equals `target`
    /// exactly, given Stab(v) = `stab`.
    pub fn align(&self, w: &ReflGroup, side: Side, v: &[u64], stab: &[usize], target: &[usize]) -> Option<(usize, Vec<u64>)> {
        if stab.len() != target.len() {
            return None;
        }
        (0..w.order()).find_map(|u| {
            // Stab(u·v) = u Stab(v) u⁻¹
            let mut c: Vec<usize> = stab.iter().map(|&s| w.conj(s, w.inverse[u])).collect();
            c.sort_unstable();
            (c == target).then(|| (u, self.act(side, u, v)))
        })
    }
}

fn det_mod(a: &[u64], n: usize, p: u64) -> u64 {
    let mut m: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| a[i * n + j] % p).collect()).collect();
    let mut det = 1u64;
    for c in 0..n {
        let Some(r) = (c..n).find(|&r| m[r][c] != 0) else {
            return 0;
        };
        if r != c {
            m.swap(r, c);
            det = (p - det) % p;
        }
        det = mulmod(det, m[c][c], p);
        let inv = crate::exactnum::valuation::powmod(m[c][c], p - 2, p);
        for r in c + 1..n {
            let f = mulmod(m[r][c], inv, p);
            for j in c..n {
                m[r][j] = (m[r][j] + p - mulmod(f, m[c][j], p)) % p;
            }
        }
    }
    det
}

#[derive(Clone, Debug, Serialize)]
pub struct Orbit {
    pub rep: Vec<u64>,
    pub size: usize,
    pub stabiliser: Vec<usize>,
    /// Index into the parabolic classes.
    pub class: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusEntry {
    pub class: usize,
    pub class_type: String,
    pub orbits: usize,
    pub points: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitCensus {
    pub side: Side,
    pub l: u64,
    pub a: u32,
    pub total: usize,
    pub entries: Vec<CensusEntry>,
    #[serde(skip)]
    pub orbits: Vec<Orbit>,
}

/// Brute-force census with lexicographically least representatives.
pub fn orbit_census(w: &ReflGroup, t: &Torus, classes: &[ParabolicClass], side: Side) -> Result<OrbitCensus> {
    let size = t.size();
    let mut seen = vec![false; size];
    let mut reps: Vec<(Vec<u64>, usize)> = Vec::new();
    for idx in 0..size {
        if seen[idx] {
            continue;
        }
        let rep = t.decode(idx);
        let orbit = t.orbit(side, &rep);
        for p in &orbit {
            seen[t.encode(p)] = true;
        }
        reps.push((rep, orbit.len()));
    }
    let member_class: HashMap<&[usize], usize> = classes
        .iter()
        .enumerate()
        .flat_map(|(c, p)| p.members.iter().map(move |m| (m.as_slice(), c)))
        .collect();
    let stabs: Vec<Vec<usize>> = reps.par_iter().map(|(r, _)| t.stabiliser(side, r)).collect();
    let mut orbits = Vec::with_capacity(reps.len());
    for ((rep, size), stab) in reps.into_iter().zip(stabs) {
        if stab.len() * size != w.order() {
            return Err(Error::InternalConsistency("orbit-stabiliser count fails".into()));
        }
        let class = match member_class.get(stab.as_slice()) {
            Some(&c) => c,
            None => {
                let refl: Vec<usize> =
                    w.reflections.iter().map(|r| r.element).filter(|e| stab.binary_search(e).is_ok()).collect();
                let why = if w.generated_by(&refl) != stab { "is not generated by reflections" } else { "is not parabolic" };
                return Err(Error::SteinbergViolation(format!(
                    "stabiliser of {:?} in {} (order {}) {} at ℓ = {}",
                    rep,
                    w.spec,
                    stab.len(),
                    why,
                    t.l
                )));
            }
        };
        orbits.push(Orbit { rep, size, stabiliser: stab, class });
    }
    let mut entries: Vec<CensusEntry> = classes
        .iter()
        .enumerate()
        .map(|(c, p)| CensusEntry { class: c, class_type: p.type_name(), orbits: 0, points: 0 })
        .collect();
    for o in &orbits {
        entries[o.class].orbits += 1;
        entries[o.class].points += o.size;
    }
    let total: usize = entries.iter().map(|e| e.points).sum();
    if total != size {
        return Err(Error::InternalConsistency(format!("census covers {} of {} points", total, size)));
    }
    Ok(OrbitCensus { side, l: t.l, a: t.a, total, entries, orbits })
}

#[derive(Clone, Debug, Serialize)]
pub struct MatchedPair {
    pub class: usize,
    pub point_orbit: usize,
    pub char_orbit: usize,
    pub point: Vec<u64>,
    /// Character in its orbit with stabiliser equal to that of `point`.
    pub character: Vec<u64>,
    /// u with `character` = u·(canonical representative).
    pub conjugator: usize,
    pub equal_stabiliser: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Matching {
    pub pairs: Vec<MatchedPair>,
}

/// Pairs the k-th orbit of each class on Irr(T) with the k-th orbit of the
/// same class on T, then picks the character in the orbit whose stabiliser
/// equals that of the point.
pub fn equivariant_matching(w: &ReflGroup, t: &Torus, points: &OrbitCensus, chars: &OrbitCensus) -> Result<Matching> {
    for (p, c) in points.entries.iter().zip(&chars.entries) {
        if p.orbits != c.orbits {
            return Err(Error::CorrespondenceFailure(format!(
                "class {} has {} orbits on T but {} on Irr(T)",
                p.class_type, p.orbits, c.orbits
            )));
        }
    }
    let mut pairs = Vec::new();
    let nclass = points.entries.len();
    for class in 0..nclass {
        let ps: Vec<usize> = (0..points.orbits.len()).filter(|&i| points.orbits[i].class == class).collect();
        let cs: Vec<usize> = (0..chars.orbits.len()).filter(|&i| chars.orbits[i].class == class).collect();
        for (&pi, &ci) in ps.iter().zip(&cs) {
            let po = &points.orbits[pi];
            let co = &chars.orbits[ci];
            let (conjugator, character, equal) = match t.align(w, Side::Characters, &co.rep, &co.stabiliser, &po.stabiliser) {
                Some((u, c)) => (u, c, true),
                None => (0, co.rep.clone(), false),
            };
            pairs.push(MatchedPair {
                class,
                point_orbit: pi,
                char_orbit: ci,
                point: po.rep.clone(),
                character,
                conjugator,
                equal_stabiliser: equal,
            });
        }
    }
    pairs.sort_by_key(|p| p.point_orbit);
    if pairs.first().map(|p| p.point.iter().any(|&x| x != 0) || p.character.iter().any(|&x| x != 0)) != Some(false) {
        return Err(Error::CorrespondenceFailure("trivial character does not match the zero point".into()));
    }
    Ok(Matching { pairs })
}

/// Number of conjugacy classes of T ⋊ W, by union-find over conjugation by
/// the generators (t, 1) for unit vectors t and (0, s) for generators s.
pub fn semidirect_class_count(w: &ReflGroup, t: &Torus) -> usize {
    let nt = t.size();
    let nw = w.order();
    let mut parent: Vec<u32> = (0..(nt * nw) as u32).collect();
    fn find(p: &mut [u32], mut x: u32) -> u32 {
        while p[x as usize] != x {
            p[x as usize] = p[p[x as usize] as usize];
            x = p[x as usize];
        }
        x
    }
    let units: Vec<Vec<u64>> = (0..t.rank).map(|i| (0..t.rank).map(|j| u64::from(i == j)).collect()).collect();
    for ti in 0..nt {
        let tv = t.decode(ti);
        for x in 0..nw {
            let me = (ti * nw + x) as u32;
            // (u,1)(t,w)(-u,1) = (t + u - w·u, w)
            for u in &units {
                let wu = t.act(Side::Points, x, u);
                let nv = t.add(&t.add(&tv, u), &t.neg(&wu));
                let other = (t.encode(&nv) * nw + x) as u32;
                let (a, b) = (find(&mut parent, me), find(&mut parent, other));
                if a != b {
                    parent[a.max(b) as usize] = a.min(b);
                }
            }
            // (0,s)(t,w)(0,s⁻¹) = (s·t, s w s⁻¹)
            for &s in &t.gen_elems {
                let nv = t.act(Side::Points, s, &tv);
                let y = w.conj(x, w.inverse[s]);
                let other = (t.encode(&nv) * nw + y) as u32;
                let (a, b) = (find(&mut parent, me), find(&mut parent, other));
                if a != b {
                    parent[a.max(b) as usize] = a.min(b);
                }
            }
        }
    }
    (0..(nt * nw) as u32).filter(|&x| find(&mut parent, x) == x).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reflgrp::{parabolic_classes, GroupSpec};

    fn setup(s: &str, l: u64, a: u32) -> (ReflGroup, Torus, Vec<ParabolicClass>) {
        let w = ReflGroup::build(&GroupSpec::parse(s).unwrap()).unwrap();
        let t = Torus::new(&w, l, a).unwrap();
        let c = parabolic_classes(&w).unwrap();
        (w, t, c)
    }

    fn counts(c: &OrbitCensus) -> Vec<usize> {
        c.entries.iter().map(|e| e.orbits).collect()
    }

    #[test]
    fn s2_and_c3() {
        let (w, t, c) = setup("A1", 3, 1);
        let cen = orbit_census(&w, &t, &c, Side::Points).unwrap();
        // classes ordered: trivial subgroup, then W
        assert_eq!(counts(&cen), vec![1, 1]);
        assert_eq!(cen.orbits[0].rep, vec![0]);
        assert_eq!(cen.orbits[0].stabiliser.len(), 2);
        let (w, t, c) = setup("C(3)", 7, 1);
        let cen = orbit_census(&w, &t, &c, Side::Points).unwrap();
        assert_eq!(counts(&cen), vec![2, 1]);
    }

    #[test]
    fn dual_census_agrees() {
        for (s, l) in [("A2", 5), ("B2", 5), ("I2(5)", 11), ("G(3,1,2)", 7)] {
            let (w, t, c) = setup(s, l, 1);
            let p = orbit_census(&w, &t, &c, Side::Points).unwrap();
            let d = orbit_census(&w, &t, &c, Side::Characters).unwrap();
            assert_eq!(counts(&p), counts(&d), "{}", s);
            let m = equivariant_matching(&w, &t, &p, &d).unwrap();
            assert!(m.pairs.iter().all(|x| x.equal_stabiliser));
            for pair in &m.pairs {
                assert_eq!(t.stabiliser(Side::Characters, &pair.character), t.stabiliser(Side::Points, &pair.point));
            }
        }
    }

    #[test]
    fn pairing_invariant() {
        let (w, t, _) = setup("G(3,1,2)", 7, 1);
        for x in 0..w.order() {
            for (c, p) in [([1u64, 2], [3u64, 5]), ([6, 0], [1, 1])] {
                let wc = t.act(Side::Characters, x, &c);
                let wp = t.act(Side::Points, x, &p);
                assert_eq!(t.pairing(&wc, &wp), t.pairing(&c, &p));
            }
        }
    }

    #[test]
    fn trivial_group_identity() {
        let (w, t, c) = setup("1", 3, 1);
        let p = orbit_census(&w, &t, &c, Side::Points).unwrap();
        assert_eq!(p.orbits.len(), 1);
        let (w, t, c) = setup("Triv(2)", 3, 1);
        let p = orbit_census(&w, &t, &c, Side::Points).unwrap();
        assert_eq!(p.orbits.len(), 9);
    }

    #[test]
    fn semidirect_classes() {
        // S2 on Z/3: classes of S3 = 3
        let (w, t, _) = setup("A1", 3, 1);
        assert_eq!(semidirect_class_count(&w, &t), 3);
        let (w, t, _) = setup("C(3)", 7, 1);
        // Z/7 ⋊ Z/3: 3 + 2 = 5 classes
        assert_eq!(semidirect_class_count(&w, &t), 5);
    }

    #[test]
    fn rejects_bad_primes() {
        let w = ReflGroup::build(&GroupSpec::parse("A2").unwrap()).unwrap();
        assert!(Torus::new(&w, 3, 1).is_err());
        let w = ReflGroup::build(&GroupSpec::parse("C(3)").unwrap()).unwrap();
        assert!(Torus::new(&w, 5, 1).is_err());
        assert_eq!(admissible_primes(&w, 20), vec![7, 13, 19]);
    }
}
