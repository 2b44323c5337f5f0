//! Subcommand bodies. Each job turns one configuration into a `Run`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use spets::block::{block_report, check_conj3, decomposition_matrix, suite_configurations, BlockData};
use spets::exactnum::CycNum;
use spets::hecke::{psi1_check, schur_table, verify_schur, HeckeEngine};
use spets::oscount::{census_moduli, os_roots, three_way};
use spets::reflgrp::{cached_character_table, invariant_degrees, parabolic_classes, CharTableCache, GroupSpec, ReflGroup};
use spets::torus::{orbit_census, Side, Torus};
use spets::yokonuma::classical::classical_gl2_compare;
use spets::yokonuma::yokonuma_report;
use spets::{Error, Result};

use crate::report::{Run, RunError, Verdict};

/// `auto` or a comma-separated list of prime powers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QSpec {
    Auto,
    List(Vec<u64>),
}

impl FromStr for QSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "auto" {
            return Ok(QSpec::Auto);
        }
        let v = s
            .split(',')
            .map(|x| x.trim().parse::<u64>().map_err(|_| format!("'{}' is not a q value", x)))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if v.is_empty() {
            return Err("empty q list".into());
        }
        Ok(QSpec::List(v))
    }
}

impl fmt::Display for QSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QSpec::Auto => write!(f, "auto"),
            QSpec::List(v) => write!(f, "{}", v.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",")),
        }
    }
}

impl Serialize for QSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for QSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One unit of work. The suite is a list of these.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Job {
    Group { group: String },
    Census { group: String, l: Option<u64>, a: u32 },
    Schur { group: String, q: QSpec },
    Dimb0 { group: String, l: u64, a: u32, q: QSpec },
    Decomp { group: String, l: u64, a: u32, q: QSpec },
    Yokonuma { group: String, l: u64, a: u32, q: Option<u64> },
    Classical { q: u64, l: u64 },
}

pub struct Ctx {
    pub cache: Option<CharTableCache>,
}

fn build(group: &str) -> Result<ReflGroup> {
    ReflGroup::build(&GroupSpec::parse(group)?)
}

fn kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidSpec(_)
        | Error::InvalidQ(_)
        | Error::UnsupportedParameters(_)
        | Error::SizeLimit(_)
        | Error::UnsupportedStabiliser(_)
        | Error::ProviderMissing(_) => "config",
        _ => "evidence",
    }
}

struct Out {
    data: Value,
    verdicts: Vec<Verdict>,
}

fn verdict(config: &str, check: impl Into<String>, statement: &str, pass: bool) -> Verdict {
    Verdict { criterion: None, config: config.into(), check: check.into(), statement: statement.into(), pass }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialise")
}

impl Job {
    pub fn name(&self) -> &'static str {
        match self {
            Job::Group { .. } => "group",
            Job::Census { .. } => "census",
            Job::Schur { .. } => "schur",
            Job::Dimb0 { .. } => "dimb0",
            Job::Decomp { .. } => "decomp",
            Job::Yokonuma { .. } => "yokonuma",
            Job::Classical { .. } => "classical",
        }
    }

    pub fn key(&self) -> String {
        match self {
            Job::Group { group } => group.clone(),
            Job::Census { group, l: Some(l), a } => format!("{} l={} a={}", group, l, a),
            Job::Census { group, l: None, .. } => format!("{} l=auto", group),
            Job::Schur { group, q } => format!("{} q={}", group, q),
            Job::Dimb0 { group, l, a, .. } | Job::Decomp { group, l, a, .. } => format!("{} l={} a={}", group, l, a),
            Job::Yokonuma { group, l, a, q } => {
                format!("{} l={} a={} q={}", group, l, a, q.map(|q| q.to_string()).unwrap_or_else(|| "auto".into()))
            }
            Job::Classical { q, l } => format!("GL2({}) l={}", q, l),
        }
    }

    pub fn run(&self, ctx: &Ctx) -> Run {
        let key = self.key();
        let res = match self {
            Job::Group { group } => run_group(ctx, &key, group),
            Job::Census { group, l, a } => run_census(&key, group, *l, *a),
            Job::Schur { group, q } => run_schur(&key, group, q),
            Job::Dimb0 { group, l, a, q } => run_dimb0(ctx, &key, group, *l, *a, q),
            Job::Decomp { group, l, a, q } => run_decomp(ctx, &key, group, *l, *a, q),
            Job::Yokonuma { group, l, a, q } => run_yokonuma(&key, group, *l, *a, *q),
            Job::Classical { q, l } => run_classical(&key, *q, *l),
        };
        match res {
            Ok(o) => Run { key, command: self.name().into(), data: o.data, verdicts: o.verdicts, error: None },
            Err(e) => Run {
                key,
                command: self.name().into(),
                data: Value::Null,
                verdicts: Vec::new(),
                error: Some(RunError { kind: kind(&e).into(), message: e.to_string() }),
            },
        }
    }
}

/// Runs jobs concurrently; output order follows the input.
pub fn run_all(ctx: &Ctx, jobs: &[Job]) -> Vec<Run> {
    jobs.par_iter().map(|j| j.run(ctx)).collect()
}

fn run_group(ctx: &Ctx, key: &str, group: &str) -> Result<Out> {
    let w = build(group)?;
    let (table, _) = cached_character_table(&w, ctx.cache.as_ref())?;
    let degrees = invariant_degrees(&w)?;
    let product: u64 = degrees.iter().map(|&d| d as u64).product();
    let orthogonal = table.validate(w.order()).is_ok();
    let data = json!({
        "group": w.spec.to_string(),
        "rank": w.rank,
        "order": w.order(),
        "degrees": degrees,
        "reflections": w.reflections.len(),
        "classes": table.class_sizes.len(),
        "character_table": to_value(&table),
    });
    Ok(Out {
        data,
        verdicts: vec![
            verdict(key, "order", "enumerated order matches the family formula", w.order() as u64 == w.spec.expected_order()),
            verdict(key, "degrees", "product of invariant degrees equals |W|", product == w.order() as u64),
            verdict(key, "character table", "both orthogonality relations hold", orthogonal),
        ],
    })
}

fn run_census(key: &str, group: &str, l: Option<u64>, a: u32) -> Result<Out> {
    let w = build(group)?;
    let classes = parabolic_classes(&w)?;
    let moduli = match l {
        Some(l) => vec![(l, a)],
        None => census_moduli(&w, 3, 1_000_000),
    };
    let polys = (0..classes.len()).map(|k| os_roots(&w, &classes, k)).collect::<Result<Vec<_>>>()?;
    let mut verdicts = Vec::new();
    let mut checks = Vec::new();
    let mut censuses = Vec::new();
    for &(l, a) in &moduli {
        let t = Torus::new(&w, l, a)?;
        censuses.push(orbit_census(&w, &t, &classes, Side::Points)?);
        for c in three_way(&w, &classes, &polys, l, a)? {
            verdicts.push(verdict(
                key,
                format!("orbits {} l^a={}", c.class_type, l.pow(a)),
                "Möbius count, census and factored formula agree",
                c.pass,
            ));
            checks.push(c);
        }
    }
    let data = json!({
        "group": w.spec.to_string(),
        "moduli": moduli,
        "classes": to_value(&classes),
        "os_polynomials": to_value(&polys),
        "census": to_value(&censuses),
        "checks": to_value(&checks),
    });
    Ok(Out { data, verdicts })
}

const SCHUR_QS: [u64; 3] = [2, 4, 9];

fn run_schur(key: &str, group: &str, q: &QSpec) -> Result<Out> {
    let w = build(group)?;
    let (ty, _) = w.full_hecke_type()?;
    let table = schur_table(&ty);
    let qs = match q {
        QSpec::Auto => SCHUR_QS.to_vec(),
        QSpec::List(v) => v.clone(),
    };
    let mut verdicts = vec![verdict(key, "psi1 limit", "ψ₁(f_φ) = |W|/φ(1) for every φ", psi1_check(&table)?)];
    let mut checks = Vec::new();
    for &q in &qs {
        let e = HeckeEngine::build(&ty, &CycNum::from_int(q as i64))?;
        let c = verify_schur(&e, &table)?;
        verdicts.push(verdict(key, format!("schur q={}", q), "Schur elements match the Hecke engine", c.pass));
        verdicts.push(verdict(key, format!("nonvanishing q={}", q), "ψ_q(f_φ) ≠ 0 for every φ", c.nonvanishing));
        checks.push(c);
    }
    let data = json!({ "group": w.spec.to_string(), "table": to_value(&table), "checks": to_value(&checks) });
    Ok(Out { data, verdicts })
}

fn block_data(ctx: &Ctx, group: &str, l: u64, a: u32) -> Result<(ReflGroup, BlockData)> {
    let w = build(group)?;
    let (table, _) = cached_character_table(&w, ctx.cache.as_ref())?;
    let d = BlockData::build_with_table(&w, l, a, table)?;
    Ok((w, d))
}

fn qs_for(d: &BlockData, q: &QSpec) -> Result<Vec<u64>> {
    let qs = match q {
        QSpec::Auto => d.default_qs(),
        QSpec::List(v) => v.clone(),
    };
    for &q in &qs {
        d.validate_q(q)?;
    }
    Ok(qs)
}

fn run_dimb0(ctx: &Ctx, key: &str, group: &str, l: u64, a: u32, q: &QSpec) -> Result<Out> {
    let (w, d) = block_data(ctx, group, l, a)?;
    let qs = qs_for(&d, q)?;
    let r = block_report(&w, &d, &qs)?;
    let mut verdicts = vec![verdict(key, "identity anchor", "dim(B₀)(1) = ℓ^{an}|W|", r.identity_anchor)];
    for v in &r.conj12 {
        verdicts.push(verdict(key, format!("conj1 q={}", v.q), "v_ℓ(dim B₀(q)) = an", v.conj1));
        verdicts.push(verdict(key, format!("conj2 q={}", v.q), "ℓ′-part of dim B₀(q) ≡ |W| mod ℓ", v.conj2));
    }
    verdicts.push(verdict(key, "conj2 symbolic", "ℓ′-residue at q = 1 + rℓ^a for 0 < r < ℓ", r.symbolic_conj2));
    verdicts.push(verdict(key, "brauer", "Schur element reciprocity over stabilisers", r.brauer));
    verdicts.push(verdict(key, "irr count", "|Irr(B₀)| equals the class number of T ⋊ W", r.irr_count_matches));
    Ok(Out { data: to_value(&r), verdicts })
}

fn run_decomp(ctx: &Ctx, key: &str, group: &str, l: u64, a: u32, q: &QSpec) -> Result<Out> {
    let (w, d) = block_data(ctx, group, l, a)?;
    let qs = qs_for(&d, q)?;
    let dec = decomposition_matrix(&w, &d)?;
    let mut verdicts = vec![
        verdict(key, "degree identity", "Σ_ν d_{χν} deg Φ_ν = deg χ", dec.degree_identity),
        verdict(key, "trivial rows", "trivial-orbit rows form the identity", dec.trivial_rows_identity),
        verdict(key, "rows nonzero", "every row of the matrix is nonzero", dec.rows_nonzero),
    ];
    let mut conj3 = Vec::new();
    for &q in &qs {
        let v = check_conj3(&w, &d, &dec, q)?;
        verdicts.push(verdict(key, format!("conj3 q={}", q), "v_ℓ(deg Φ_ν(q)) ≥ an for every ν", v.pass));
        conj3.push(v);
    }
    let data = json!({ "group": d.group, "l": l, "a": a, "matrix": to_value(&dec), "conj3": to_value(&conj3) });
    Ok(Out { data, verdicts })
}

fn run_yokonuma(key: &str, group: &str, l: u64, a: u32, q: Option<u64>) -> Result<Out> {
    let w = build(group)?;
    let q = q.unwrap_or(1 + l.pow(a));
    let r = yokonuma_report(&w, l, a, q)?;
    let mut verdicts = vec![
        verdict(key, "dimension", "generated algebra has dimension |T||W|", r.freeness.pass),
        verdict(key, "relations", "torus, quadratic and braid relations hold", r.relations.pass),
        verdict(key, "trace form", "τ(y_t y_w) = δ δ |T| on the basis", r.trace.pass),
        verdict(key, "wedderburn", "block profile equals that of T ⋊ W", r.wedderburn.pass),
        verdict(key, "alpha", "α ≡ 1 mod ℓ with v_ℓ(α) = 0", r.alpha.pass),
        verdict(key, "psi1", "q = 1 specialisation is the group algebra", r.psi1.pass),
        verdict(key, "hecke cut", "the trivial torus idempotent cuts out the Hecke algebra of W", r.hecke_cut.pass),
        verdict(key, "rewriting", "integral regular representation agrees", r.rewriting.pass),
    ];
    for ak in &r.ak_identity {
        verdicts.push(verdict(
            key,
            format!("ak identity {},{}", ak.a, ak.b),
            "y₂y₁^a y₂y₁^b expands with invertible leading coefficient",
            ak.solved && ak.alpha_invertible,
        ));
    }
    Ok(Out { data: to_value(&r), verdicts })
}

fn run_classical(key: &str, q: u64, l: u64) -> Result<Out> {
    let r = classical_gl2_compare(q, l)?;
    let verdicts = vec![
        verdict(key, "cut dimension", "f𝒴′f has dimension |T||W|", r.cut_dimension == r.expected_dimension),
        verdict(key, "classical relation", "s² = 1 - q⁻¹(E - sE) in 𝒴′", r.classical_relation),
        verdict(key, "relations", "images satisfy the Yokonuma relations", r.dagger && r.action && r.torus_relations),
        verdict(key, "image rank", "images span f𝒴′f", r.image_rank == r.expected_dimension),
        verdict(key, "products", "isomorphism holds on basis products", r.products_ok != Some(false)),
    ];
    Ok(Out { data: to_value(&r), verdicts })
}

/// Jobs run by `suite`, covering every acceptance criterion.
pub fn suite_jobs() -> Vec<Job> {
    let mut jobs = vec![Job::Dimb0 { group: "A1".into(), l: 3, a: 1, q: QSpec::List(vec![4, 7, 13]) }];
    for (g, l, a) in suite_configurations() {
        jobs.push(Job::Dimb0 { group: g.clone(), l, a, q: QSpec::Auto });
        jobs.push(Job::Decomp { group: g, l, a, q: QSpec::Auto });
    }
    for g in ["A2", "B2", "I2(5)", "G(3,1,2)"] {
        jobs.push(Job::Census { group: g.into(), l: None, a: 1 });
    }
    let mut schur: Vec<String> = ["Triv(1)", "A1", "A2", "A3"].iter().map(|s| s.to_string()).collect();
    schur.extend((2..=6).map(|e| format!("C({})", e)));
    schur.extend((2..=6).map(|m| format!("I2({})", m)));
    schur.extend(["B2".to_string(), "G(3,1,2)".to_string()]);
    for g in schur {
        jobs.push(Job::Schur { group: g, q: QSpec::List(SCHUR_QS.to_vec()) });
    }
    for (g, l, q) in [("A1", 3, 4), ("A2", 5, 6), ("C(3)", 7, 8)] {
        jobs.push(Job::Yokonuma { group: g.into(), l, a: 1, q: Some(q) });
    }
    jobs.push(Job::Classical { q: 4, l: 3 });
    jobs
}

/// Which acceptance criterion a suite verdict belongs to.
pub fn criterion(run_index: usize, command: &str, check: &str) -> Option<u8> {
    match command {
        "dimb0" if run_index == 0 => Some(1),
        "dimb0" if check.starts_with("conj") => Some(2),
        "dimb0" if check == "identity anchor" => Some(3),
        "dimb0" if check == "brauer" => Some(6),
        "decomp" if check.starts_with("conj3") => Some(2),
        "census" => Some(4),
        "schur" => Some(5),
        "yokonuma" if !check.starts_with("ak identity") => Some(7),
        "classical" => Some(8),
        _ => None,
    }
}

pub fn run_suite(ctx: &Ctx) -> Vec<Run> {
    let mut runs = run_all(ctx, &suite_jobs());
    for (i, r) in runs.iter_mut().enumerate() {
        let cmd = r.command.clone();
        for v in &mut r.verdicts {
            v.criterion = criterion(i, &cmd, &v.check);
        }
    }
    runs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn job_round_trip() {
        for j in suite_jobs() {
            let s = serde_json::to_string(&j).unwrap();
            let back: Job = serde_json::from_str(&s).unwrap();
            assert_eq!(back, j);
        }
    }

    #[test]
    fn qspec_parse() {
        assert_eq!("auto".parse::<QSpec>().unwrap(), QSpec::Auto);
        assert_eq!("4,7".parse::<QSpec>().unwrap(), QSpec::List(vec![4, 7]));
        assert!("4,x".parse::<QSpec>().is_err());
    }

    #[test]
    fn config_errors_are_classified() {
        let ctx = Ctx { cache: None };
        let r = Job::Dimb0 { group: "A2".into(), l: 3, a: 1, q: QSpec::Auto }.run(&ctx);
        assert_eq!(r.error.unwrap().kind, "config");
        let r = Job::Group { group: "Z9".into() }.run(&ctx);
        assert_eq!(r.error.unwrap().kind, "config");
    }
}
