//! The principal block: its characters and degree polynomials, dim(B₀),
//! the decomposition matrix of T ⋊ W and the three conjecture checks.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::valuation::{is_prime, prime_power, v_l_u64};
use crate::exactnum::{cyc_l_valuation, l_valuation_split, q_samples, CycNum, LPoly, ValuationSplit};
use crate::hecke::{check_brauer_reciprocity, poincare, schur_element, HeckeType, IrrLabel};
use crate::reflgrp::{
    character_table, parabolic_classes, poincare_polynomial, restriction_multiplicities, subgroup_characters, CharTable,
    ParabolicClass, ReflGroup,
};
use crate::torus::{equivariant_matching, orbit_census, semidirect_class_count, Matching, OrbitCensus, Side, Torus};

#[derive(Clone, Debug, Serialize)]
pub struct BlockCharacter {
    pub orbit: usize,
    pub rep: Vec<u64>,
    pub class: usize,
    pub stabiliser_type: String,
    pub label: String,
    pub degree: LPoly,
    pub degree_at_one: u64,
}

/// Everything attached to one configuration (W, ℓ, a).
#[derive(Clone, Debug)]
pub struct BlockData {
    pub group: String,
    pub l: u64,
    pub a: u32,
    pub rank: usize,
    pub order: usize,
    pub poincare: LPoly,
    pub classes: Vec<ParabolicClass>,
    pub torus: Torus,
    pub points: OrbitCensus,
    pub chars: OrbitCensus,
    pub matching: Matching,
    pub table: CharTable,
    pub full_type: HeckeType,
    pub characters: Vec<BlockCharacter>,
    pub dim_b0: LPoly,
}

fn stabiliser_type(class: &ParabolicClass) -> Result<(HeckeType, Vec<usize>)> {
    match (&class.hecke_type, &class.standard) {
        (Some(t), Some(j)) => Ok((t.clone(), j.clone())),
        _ => Err(Error::UnsupportedStabiliser(format!(
            "parabolic of order {} has no standard Hecke type",
            class.order()
        ))),
    }
}

/// ψ_s(p_W)/ψ_s(f_{s,φ}); must be a polynomial whose coefficients are
/// integral at ℓ. Non-real spetses have denominators dividing |W|.
pub fn series_degree(p_w: &LPoly, ty: &HeckeType, label: &IrrLabel, l: u64) -> Result<LPoly> {
    let f = schur_element(ty, label);
    let g = p_w
        .div_exact(&f)
        .map_err(|_| Error::DegreeIntegrality(format!("p_W / f_{} is not a Laurent polynomial for {}", label, ty)))?;
    if !g.is_polynomial() || g.terms().iter().any(|(_, c)| !c.is_l_integral(l)) {
        return Err(Error::DegreeIntegrality(format!("degree {} for {} of {} is not {}-integral", g, label, ty, l)));
    }
    Ok(g)
}

impl BlockData {
    pub fn build(w: &ReflGroup, l: u64, a: u32) -> Result<Self> {
        Self::build_with_table(w, l, a, character_table(w)?)
    }

    /// As `build`, with a character table obtained elsewhere (e.g. a cache).
    pub fn build_with_table(w: &ReflGroup, l: u64, a: u32, table: CharTable) -> Result<Self> {
        table.validate(w.order())?;
        let classes = parabolic_classes(w)?;
        let torus = Torus::new(w, l, a)?;
        let points = orbit_census(w, &torus, &classes, Side::Points)?;
        let chars = orbit_census(w, &torus, &classes, Side::Characters)?;
        let matching = equivariant_matching(w, &torus, &points, &chars)?;
        let (full_type, _) = w.full_hecke_type()?;
        let p_w = poincare_polynomial(w)?;
        if p_w != poincare(&full_type) {
            return Err(Error::InternalConsistency(format!(
                "Poincaré polynomial {} from degrees differs from the trivial Schur element {}",
                p_w,
                poincare(&full_type)
            )));
        }
        let mut characters = Vec::new();
        for (k, o) in points.orbits.iter().enumerate() {
            let class = &classes[o.class];
            let (ty, _) = stabiliser_type(class)?;
            for label in ty.irreps() {
                let degree = series_degree(&p_w, &ty, &label, l)?;
                let at_one = degree
                    .eval(&CycNum::one())?
                    .to_rational()
                    .filter(|r| r.is_integer())
                    .ok_or_else(|| Error::DegreeIntegrality("degree at 1 is not an integer".into()))?;
                let want = (w.order() / class.order() * ty.irrep_dim(&label)) as u64;
                if at_one != BigRational::from_integer(want.into()) {
                    return Err(Error::InternalConsistency(format!(
                        "degree of ({:?}, {}) at 1 is {} not |W:W(s)|φ(1) = {}",
                        o.rep, label, at_one, want
                    )));
                }
                characters.push(BlockCharacter {
                    orbit: k,
                    rep: o.rep.clone(),
                    class: o.class,
                    stabiliser_type: ty.to_string(),
                    label: label.to_string(),
                    degree,
                    degree_at_one: want,
                });
            }
        }
        let dim_b0 = characters.iter().fold(LPoly::zero(), |acc, c| &acc + &(&c.degree * &c.degree));
        if !dim_b0.has_rational_coeffs() {
            return Err(Error::DegreeIntegrality(format!("dim(B₀) = {} has irrational coefficients", dim_b0)));
        }
        Ok(BlockData {
            group: w.spec.to_string(),
            l,
            a,
            rank: w.rank,
            order: w.order(),
            poincare: p_w,
            classes,
            torus,
            points,
            chars,
            matching,
            table,
            full_type,
            characters,
            dim_b0,
        })
    }

    /// a·n, the ℓ-valuation of |T|.
    pub fn target_valuation(&self) -> i64 {
        self.a as i64 * self.rank as i64
    }

    /// dim(B₀)(1) = ℓ^{an}|W|.
    pub fn identity_anchor(&self) -> Result<bool> {
        let v = self.dim_b0.eval(&CycNum::one())?;
        Ok(v == CycNum::from_int(self.torus.size() as i64 * self.order as i64))
    }

    /// q must be a prime power with ℓ^a ∥ q - 1.
    pub fn validate_q(&self, q: u64) -> Result<()> {
        if q.is_multiple_of(self.l) {
            return Err(Error::InvalidQ(format!("ℓ = {} divides q = {}", self.l, q)));
        }
        if prime_power(q).is_none() {
            return Err(Error::InvalidQ(format!("q = {} is not a prime power", q)));
        }
        let v = v_l_u64(q - 1, self.l);
        if v != self.a {
            return Err(Error::InvalidQ(format!("ℓ^{} ∥ q - 1 for q = {}, but a = {}", v, q, self.a)));
        }
        Ok(())
    }

    pub fn default_qs(&self) -> Vec<u64> {
        q_samples(self.l, self.a, 3)
    }
}

fn eval_rational(p: &LPoly, q: &BigRational) -> Result<BigRational> {
    p.eval_rational(q)?
        .to_rational()
        .ok_or_else(|| Error::InternalConsistency(format!("{} is not rational at {}", p, q)))
}

fn big(q: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(q))
}

#[derive(Clone, Debug, Serialize)]
pub struct Conj12Verdict {
    pub q: u64,
    pub dim: ValuationSplit,
    pub target_valuation: i64,
    pub conj1: bool,
    pub l_prime_residue: u64,
    pub order_mod_l: u64,
    pub conj2: bool,
}

pub fn check_conj1_conj2(data: &BlockData, q: u64) -> Result<Conj12Verdict> {
    data.validate_q(q)?;
    let v = eval_rational(&data.dim_b0, &big(q))?;
    let split = l_valuation_split(&v, data.l)?;
    let res = split.l_prime_residue();
    let target = data.order as u64 % data.l;
    Ok(Conj12Verdict {
        q,
        target_valuation: data.target_valuation(),
        conj1: split.v == data.target_valuation(),
        l_prime_residue: res,
        order_mod_l: target,
        conj2: res == target,
        dim: split,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SymbolicConj2 {
    pub r: u64,
    pub q: String,
    pub valuation: i64,
    pub l_prime_residue: u64,
    pub holds: bool,
}

/// Substitutes q = 1 + rℓ^a for r = 1..ℓ. Only r < ℓ keep ℓ^a ∥ q - 1; the
/// r = ℓ row is reported but excluded from the verdict.
pub fn symbolic_conj2(data: &BlockData) -> Result<(bool, Vec<SymbolicConj2>)> {
    let la = data.l.pow(data.a);
    let mut rows = Vec::new();
    let mut ok = true;
    for r in 1..=data.l {
        let q = big(1 + r * la);
        let v = eval_rational(&data.dim_b0, &q)?;
        let split = l_valuation_split(&v, data.l)?;
        let res = split.l_prime_residue();
        let holds = res == data.order as u64 % data.l;
        if r < data.l {
            ok &= holds;
        }
        rows.push(SymbolicConj2 { r, q: q.to_string(), valuation: split.v, l_prime_residue: res, holds });
    }
    Ok((ok, rows))
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompRow {
    pub char_orbit: usize,
    pub character: Vec<u64>,
    pub point: Vec<u64>,
    pub class: usize,
    pub stabiliser_type: String,
    pub label: String,
    pub degree: LPoly,
    pub entries: Vec<i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompData {
    pub columns: Vec<String>,
    pub rows: Vec<DecompRow>,
    /// deg Φ_ν for each column ν ∈ Irr(W).
    pub projective_degrees: Vec<LPoly>,
    pub degree_identity: bool,
    pub trivial_rows_identity: bool,
    pub rows_nonzero: bool,
}

/// Restriction multiplicities ⟨ν̃, χ|_{W_J}⟩ for the standard representative
/// of every parabolic class (rows ν̃, columns χ).
fn class_multiplicities(w: &ReflGroup, data: &BlockData) -> Result<Vec<Vec<Vec<i64>>>> {
    data.classes
        .iter()
        .map(|c| {
            let (_, j) = stabiliser_type(c)?;
            let sub = subgroup_characters(w, &j)?;
            restriction_multiplicities(w, &data.table, &sub)
        })
        .collect()
}

pub fn decomposition_matrix(w: &ReflGroup, data: &BlockData) -> Result<DecompData> {
    let mults = class_multiplicities(w, data)?;
    let full_degrees: Vec<LPoly> = data
        .table
        .labels
        .iter()
        .map(|l| series_degree(&data.poincare, &data.full_type, l, data.l))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut degree_identity = true;
    for pair in &data.matching.pairs {
        let class = &data.classes[pair.class];
        let (ty, _) = stabiliser_type(class)?;
        for (i, label) in ty.irreps().iter().enumerate() {
            let degree = series_degree(&data.poincare, &ty, label, data.l)?;
            let entries = mults[pair.class][i].clone();
            let rhs = entries
                .iter()
                .zip(&full_degrees)
                .fold(LPoly::zero(), |acc, (&d, g)| &acc + &g.scale(&CycNum::from_int(d)));
            degree_identity &= rhs == degree;
            rows.push(DecompRow {
                char_orbit: pair.char_orbit,
                character: pair.character.clone(),
                point: pair.point.clone(),
                class: pair.class,
                stabiliser_type: ty.to_string(),
                label: label.to_string(),
                degree,
                entries,
            });
        }
    }
    let k = data.table.labels.len();
    let projective_degrees = (0..k)
        .map(|j| {
            rows.iter()
                .fold(LPoly::zero(), |acc, r| &acc + &r.degree.scale(&CycNum::from_int(r.entries[j])))
        })
        .collect();
    // the zero orbit comes first and carries Irr(W) itself
    let trivial_rows_identity =
        rows.len() >= k && (0..k).all(|i| (0..k).all(|j| rows[i].entries[j] == i64::from(i == j)));
    let rows_nonzero = rows.iter().all(|r| r.entries.iter().any(|&d| d != 0));
    Ok(DecompData {
        columns: data.table.labels.iter().map(|l| l.to_string()).collect(),
        rows,
        projective_degrees,
        degree_identity,
        trivial_rows_identity,
        rows_nonzero,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Conj3Verdict {
    pub q: u64,
    pub target_valuation: i64,
    pub valuations: Vec<i64>,
    pub pass: bool,
    /// Present only when the equal-stabiliser matching fails.
    pub search: Option<MatchingSearch>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MatchingSearch {
    pub matchings_tried: usize,
    pub exhausted: bool,
    pub passing_found: bool,
}

fn projective_valuations(decomp: &DecompData, l: u64, q: u64) -> Result<Vec<i64>> {
    decomp
        .projective_degrees
        .iter()
        .map(|p| cyc_l_valuation(&p.eval_rational(&big(q))?, l))
        .collect()
}

pub fn check_conj3(w: &ReflGroup, data: &BlockData, decomp: &DecompData, q: u64) -> Result<Conj3Verdict> {
    data.validate_q(q)?;
    let target = data.target_valuation();
    let valuations = projective_valuations(decomp, data.l, q)?;
    let pass = valuations.iter().all(|&v| v >= target);
    let search = if pass { None } else { Some(search_matchings(w, data, q)?) };
    let pass = pass || search.as_ref().is_some_and(|s| s.passing_found);
    Ok(Conj3Verdict { q, target_valuation: target, valuations, pass, search })
}

const SEARCH_CAP: usize = 10_000;

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Runs through stabiliser-class-preserving orbit matchings (up to a cap),
/// recomputing deg Φ for each.
fn search_matchings(w: &ReflGroup, data: &BlockData, q: u64) -> Result<MatchingSearch> {
    let mults = class_multiplicities(w, data)?;
    let k = data.table.labels.len();
    let nclass = data.classes.len();
    let by_class: Vec<Vec<usize>> = (0..nclass)
        .map(|c| (0..data.points.orbits.len()).filter(|&i| data.points.orbits[i].class == c).collect())
        .collect();
    let chars_by_class: Vec<Vec<usize>> = (0..nclass)
        .map(|c| (0..data.chars.orbits.len()).filter(|&i| data.chars.orbits[i].class == c).collect())
        .collect();
    let mut perms: Vec<Vec<usize>> = by_class.iter().map(|v| (0..v.len()).collect()).collect();
    let mut tried = 0;
    let target = data.target_valuation();
    loop {
        tried += 1;
        let mut phi = vec![LPoly::zero(); k];
        for c in 0..nclass {
            let (ty, _) = stabiliser_type(&data.classes[c])?;
            for (slot, _) in chars_by_class[c].iter().enumerate() {
                // block-side degree from the matched point orbit
                let point_orbit = by_class[c][perms[c][slot]];
                let pc = data.points.orbits[point_orbit].class;
                let (pty, _) = stabiliser_type(&data.classes[pc])?;
                for (i, label) in ty.irreps().iter().enumerate() {
                    let deg = series_degree(&data.poincare, &pty, label, data.l)?;
                    for (j, acc) in phi.iter_mut().enumerate() {
                        *acc = &*acc + &deg.scale(&CycNum::from_int(mults[c][i][j]));
                    }
                }
            }
        }
        let ok = phi.iter().try_fold(true, |ok, p| -> Result<bool> {
            Ok(ok && cyc_l_valuation(&p.eval_rational(&big(q))?, data.l)? >= target)
        })?;
        if ok {
            return Ok(MatchingSearch { matchings_tried: tried, exhausted: false, passing_found: true });
        }
        // advance the product of permutations
        let mut advanced = false;
        for p in perms.iter_mut() {
            if next_permutation(p) {
                advanced = true;
                break;
            }
            p.sort_unstable();
        }
        if !advanced || tried >= SEARCH_CAP {
            return Ok(MatchingSearch { matchings_tried: tried, exhausted: !advanced, passing_found: false });
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockReport {
    pub group: String,
    pub l: u64,
    pub a: u32,
    pub rank: usize,
    pub order: usize,
    pub census: Vec<crate::torus::CensusEntry>,
    pub characters: Vec<BlockCharacter>,
    pub dim_b0: LPoly,
    pub dim_b0_coefficients: Vec<String>,
    pub identity_anchor: bool,
    pub irr_b0: usize,
    pub semidirect_classes: usize,
    pub irr_count_matches: bool,
    pub conj12: Vec<Conj12Verdict>,
    pub symbolic_conj2: bool,
    pub symbolic_rows: Vec<SymbolicConj2>,
    pub brauer: bool,
}

impl BlockReport {
    pub fn conj1(&self) -> bool {
        self.conj12.iter().all(|v| v.conj1)
    }

    pub fn conj2(&self) -> bool {
        self.conj12.iter().all(|v| v.conj2) && self.symbolic_conj2
    }
}

/// Brauer reciprocity at the given q for every stabiliser class that occurs.
pub fn brauer_for_config(w: &ReflGroup, data: &BlockData, qs: &[u64]) -> Result<bool> {
    let qs: Vec<CycNum> = qs.iter().map(|&q| CycNum::from_int(q as i64)).collect();
    let mut seen = std::collections::BTreeSet::new();
    for o in &data.points.orbits {
        seen.insert(o.class);
    }
    for c in seen {
        let (_, j) = stabiliser_type(&data.classes[c])?;
        if !check_brauer_reciprocity(w, &data.table, &j, &qs)?.iter().all(|b| b.pass) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn block_report(w: &ReflGroup, data: &BlockData, qs: &[u64]) -> Result<BlockReport> {
    let conj12 = qs.iter().map(|&q| check_conj1_conj2(data, q)).collect::<Result<Vec<_>>>()?;
    let (symbolic_ok, symbolic_rows) = symbolic_conj2(data)?;
    let semidirect = semidirect_class_count(w, &data.torus);
    let coeffs = data.dim_b0.rational_coeffs().map(|(_, c)| c).unwrap_or_default();
    Ok(BlockReport {
        group: data.group.clone(),
        l: data.l,
        a: data.a,
        rank: data.rank,
        order: data.order,
        census: data.points.entries.clone(),
        characters: data.characters.clone(),
        dim_b0: data.dim_b0.clone(),
        dim_b0_coefficients: coeffs.iter().map(|c| c.to_string()).collect(),
        identity_anchor: data.identity_anchor()?,
        irr_b0: data.characters.len(),
        semidirect_classes: semidirect,
        irr_count_matches: semidirect == data.characters.len(),
        conj12,
        symbolic_conj2: symbolic_ok,
        symbolic_rows,
        brauer: brauer_for_config(w, data, qs)?,
    })
}

/// Configurations of the conjecture suite: (group, ℓ, a).
pub fn suite_configurations() -> Vec<(String, u64, u32)> {
    let mut out = Vec::new();
    for g in ["A1", "A2", "B2", "I2(5)", "I2(6)"] {
        let w = ReflGroup::build(&crate::reflgrp::GroupSpec::parse(g).expect("valid")).expect("buildable");
        for l in crate::torus::admissible_primes(&w, 13) {
            for a in 1..=2 {
                out.push((g.to_string(), l, a));
            }
        }
    }
    for e in [3u64, 4, 6] {
        let g = format!("C({})", e);
        let mut found = 0;
        let mut l = 3;
        while found < 2 {
            if is_prime(l) && (l - 1) % e == 0 && e % l != 0 {
                out.push((g.clone(), l, 1));
                found += 1;
            }
            l += 2;
        }
    }
    out.push(("G(3,1,2)".to_string(), 7, 1));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reflgrp::GroupSpec;

    fn data(s: &str, l: u64, a: u32) -> (ReflGroup, BlockData) {
        let w = ReflGroup::build(&GroupSpec::parse(s).unwrap()).unwrap();
        let d = BlockData::build(&w, l, a).unwrap();
        (w, d)
    }

    #[test]
    fn sl2_example() {
        let (w, d) = data("A1", 3, 1);
        assert_eq!(d.dim_b0, LPoly::from_ints(0, &[2, 2, 2]));
        assert!(d.identity_anchor().unwrap());
        for (q, dim, lp) in [(4u64, 42i64, 14i64), (7, 114, 38), (13, 366, 122)] {
            let v = check_conj1_conj2(&d, q).unwrap();
            assert_eq!(v.dim.input, BigRational::from_integer(dim.into()));
            assert_eq!(v.dim.l_prime_part, BigRational::from_integer(lp.into()));
            assert!(v.conj1 && v.conj2);
        }
        let dec = decomposition_matrix(&w, &d).unwrap();
        assert_eq!(dec.rows.len(), 3);
        let cols = &dec.columns;
        let triv = cols.iter().position(|c| c == "u2").unwrap();
        let sgn = cols.iter().position(|c| c == "u1").unwrap();
        let last = &dec.rows[2].entries;
        assert_eq!((last[triv], last[sgn]), (1, 1));
        // Φ_triv = 1 + (x + 1), Φ_sgn = x + (x + 1)
        assert_eq!(dec.projective_degrees[triv], LPoly::from_ints(0, &[2, 1]));
        assert_eq!(dec.projective_degrees[sgn], LPoly::from_ints(0, &[1, 2]));
        assert!(check_conj3(&w, &d, &dec, 4).unwrap().pass);
    }

    #[test]
    fn general_a1_formula() {
        for (l, a) in [(5u64, 1u32), (3, 2), (7, 1)] {
            let (_, d) = data("A1", l, a);
            let la = l.pow(a) as i64;
            let free = (la - 1) / 2;
            let want = LPoly::from_ints(0, &[1 + free, 2 * free, 1 + free]);
            assert_eq!(d.dim_b0, want);
        }
    }

    #[test]
    fn c3_decomposition() {
        let (w, d) = data("C(3)", 7, 1);
        let dec = decomposition_matrix(&w, &d).unwrap();
        assert_eq!(dec.rows.len(), 5);
        assert!(dec.rows[3..].iter().all(|r| r.entries.iter().all(|&x| x == 1)));
        assert!(dec.degree_identity && dec.trivial_rows_identity);
        let v = check_conj3(&w, &d, &dec, 8).unwrap();
        assert!(v.pass, "{:?}", v);
    }

    #[test]
    fn invalid_q() {
        let (_, d) = data("A1", 3, 1);
        assert!(matches!(check_conj1_conj2(&d, 9), Err(Error::InvalidQ(_))));
        assert!(matches!(check_conj1_conj2(&d, 10), Err(Error::InvalidQ(_))));
        // 3^2 ∥ 19 - 1 but a = 1
        assert!(matches!(check_conj1_conj2(&d, 19), Err(Error::InvalidQ(_))));
    }

    #[test]
    fn trivial_group() {
        let (w, d) = data("1", 3, 1);
        assert_eq!(d.dim_b0, LPoly::one());
        let r = block_report(&w, &d, &[4]).unwrap();
        assert!(r.conj1() && r.conj2());
    }

    #[test]
    fn g312_report() {
        let (w, d) = data("G(3,1,2)", 7, 1);
        let qs = d.default_qs();
        let r = block_report(&w, &d, &qs).unwrap();
        assert!(r.identity_anchor && r.irr_count_matches && r.brauer);
        assert!(r.conj1() && r.conj2(), "{:?}", r.conj12);
        let dec = decomposition_matrix(&w, &d).unwrap();
        assert!(dec.degree_identity);
        for q in qs {
            assert!(check_conj3(&w, &d, &dec, q).unwrap().pass);
        }
    }
}
