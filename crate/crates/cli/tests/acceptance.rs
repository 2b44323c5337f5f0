//! Acceptance criteria 1-9. Runs `spets suite` twice, re-derives the key
//! numbers from the report with independent arithmetic, and prints one
//! PASS/FAIL line per criterion.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_spets");

fn run(args: &[&str]) -> (i32, Duration) {
    let t = Instant::now();
    let st = Command::new(BIN).args(args).arg("--quiet").status().expect("spawn spets");
    (st.code().unwrap_or(-1), t.elapsed())
}

fn load(p: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(p).expect("report written")).expect("valid JSON")
}

fn rat(s: &str) -> BigRational {
    match s.split_once('/') {
        Some((n, d)) => BigRational::new(n.parse().unwrap(), d.parse().unwrap()),
        None => BigRational::from_integer(s.parse().unwrap()),
    }
}

fn coeffs(v: &Value) -> Vec<BigRational> {
    v.as_array().unwrap().iter().map(|c| rat(c.as_str().unwrap())).collect()
}

/// Horner, constant term first.
fn eval(c: &[BigRational], q: u64) -> BigRational {
    let q = BigRational::from_integer(q.into());
    c.iter().rev().fold(BigRational::zero(), |acc, x| acc * &q + x)
}

/// (v_ℓ(x), ℓ′-part of x reduced mod ℓ); x must be nonzero.
fn split(x: &BigRational, l: u64) -> (i64, u64) {
    let lb = BigInt::from(l);
    let (mut n, mut d) = (x.numer().abs(), x.denom().clone());
    let mut v = 0;
    while (&n % &lb).is_zero() {
        n /= &lb;
        v += 1;
    }
    while (&d % &lb).is_zero() {
        d /= &lb;
        v -= 1;
    }
    let sign = if x.numer().is_negative() { l - 1 } else { 1 };
    let n = (&n % &lb).to_u64().unwrap();
    let d = (&d % &lb).to_u64().unwrap();
    let dinv = (1..l).find(|k| d * k % l == 1).unwrap();
    (v, n * dinv % l * sign % l)
}

struct Tally {
    lines: Vec<(u8, bool, String)>,
}

impl Tally {
    fn put(&mut self, c: u8, pass: bool, detail: String) {
        self.lines.push((c, pass, detail));
    }
}

/// (total, failed) among suite verdicts tagged `c`.
fn verdicts_pass(rep: &Value, c: u8) -> (usize, usize) {
    let mut total = 0;
    let mut failed = 0;
    for r in rep["runs"].as_array().unwrap() {
        for v in r["verdicts"].as_array().unwrap() {
            if v["criterion"].as_u64() == Some(c as u64) {
                total += 1;
                failed += usize::from(!v["pass"].as_bool().unwrap());
            }
        }
    }
    (total, failed)
}

fn runs<'a>(rep: &'a Value, cmd: &'a str) -> impl Iterator<Item = &'a Value> {
    rep["runs"].as_array().unwrap().iter().filter(move |r| r["command"] == cmd)
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let mut t = Tally { lines: Vec::new() };

    let (code_a, time_a) = run(&["suite", "--out", a.to_str().unwrap()]);
    let (code_b, _) = run(&["suite", "--out", b.to_str().unwrap()]);
    let rep = load(&a);
    let errors: Vec<String> = rep["runs"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| !r["error"].is_null())
        .map(|r| format!("{} {}: {}", r["command"], r["key"], r["error"]["message"]))
        .collect();
    for e in &errors {
        eprintln!("run error: {}", e);
    }
    println!("suite: exit {} in {:.1} s, second run exit {}", code_a, time_a.as_secs_f64(), code_b);

    // 1: dim(B₀) = 2x² + 2x + 2 for A1, ℓ = 3, a = 1
    {
        let (code, elapsed) = run(&["dimb0", "--group", "A1", "--l", "3", "--q", "4,7,13"]);
        let first = &rep["runs"][0];
        let c = coeffs(&first["data"]["dim_b0_coefficients"]);
        let mut ok = c == vec![rat("2"), rat("2"), rat("2")];
        for (i, q) in [4u64, 7, 13].into_iter().enumerate() {
            let hand = BigRational::from_integer((2 * q * q + 2 * q + 2).into());
            let (v, res) = split(&hand, 3);
            let reported = rat(first["data"]["conj12"][i]["dim"]["input"].as_str().unwrap());
            ok &= v == 1 && res == 2 && reported == hand;
        }
        let (n, f) = verdicts_pass(&rep, 1);
        let pass = ok && n > 0 && f == 0 && code == 0 && elapsed < Duration::from_secs(1);
        t.put(1, pass, format!("2x²+2x+2, v₃ = 1, residue 2 at q = 4, 7, 13; {:.2} s", elapsed.as_secs_f64()));
    }

    // 2 and 3: recompute valuations, residues and the anchor from the coefficients
    {
        let mut configs = 0;
        let mut ok2 = true;
        let mut ok3 = true;
        for r in runs(&rep, "dimb0").skip(1) {
            configs += 1;
            let d = &r["data"];
            if d.is_null() {
                ok2 = false;
                ok3 = false;
                continue;
            }
            let (l, a, n, order) =
                (d["l"].as_u64().unwrap(), d["a"].as_u64().unwrap(), d["rank"].as_u64().unwrap(), d["order"].as_u64().unwrap());
            let c = coeffs(&d["dim_b0_coefficients"]);
            let anchor = BigRational::from_integer(BigInt::from(l).pow((a * n) as u32) * BigInt::from(order));
            ok3 &= eval(&c, 1) == anchor;
            let qs: Vec<u64> = d["conj12"].as_array().unwrap().iter().map(|v| v["q"].as_u64().unwrap()).collect();
            ok2 &= qs.len() == 3;
            for q in qs {
                let (v, res) = split(&eval(&c, q), l);
                ok2 &= v == (a * n) as i64 && res == order % l;
            }
        }
        let decomp_ok = runs(&rep, "decomp").all(|r| r["error"].is_null());
        let (n2, f2) = verdicts_pass(&rep, 2);
        let (n3, f3) = verdicts_pass(&rep, 3);
        let fast = time_a < Duration::from_secs(600);
        t.put(2, ok2 && decomp_ok && n2 > 0 && f2 == 0 && fast, format!("{} configurations, {} verdicts, {} failed", configs, n2, f2));
        t.put(3, ok3 && n3 == configs && f3 == 0, format!("dim(B₀)(1) = ℓ^(an)|W| for {} configurations", configs));
    }

    // 4: Orlik-Solomon three-way agreement; A2 free orbits (N-1)(N-2)/6
    {
        let mut ok = true;
        let mut groups = 0;
        for r in runs(&rep, "census") {
            groups += 1;
            let d = &r["data"];
            if d.is_null() {
                ok = false;
                continue;
            }
            ok &= d["moduli"].as_array().unwrap().len() >= 3;
            ok &= d["os_polynomials"].as_array().unwrap().iter().all(|p| p["roots"].is_array());
            if d["group"] == "A2" {
                let free = &d["os_polynomials"][0];
                ok &= free["roots"] == serde_json::json!([1, 2]);
                for (k, m) in d["moduli"].as_array().unwrap().iter().enumerate() {
                    let n = m[0].as_u64().unwrap().pow(m[1].as_u64().unwrap() as u32);
                    ok &= d["census"][k]["entries"][0]["orbits"].as_u64() == Some((n - 1) * (n - 2) / 6);
                }
            }
        }
        let (n, f) = verdicts_pass(&rep, 4);
        t.put(4, ok && groups == 4 && n > 0 && f == 0, format!("{} groups, {} class checks, A2 free roots (1,2)", groups, n));
    }

    // 5 and 6 rest on the verdicts alone
    {
        let schur_ok = runs(&rep, "schur").all(|r| r["error"].is_null());
        let (n, f) = verdicts_pass(&rep, 5);
        t.put(5, schur_ok && n > 0 && f == 0, format!("{} Schur verdicts, {} failed", n, f));
        let (n, f) = verdicts_pass(&rep, 6);
        t.put(6, n > 0 && f == 0, format!("{} configurations with reciprocity, {} failed", n, f));
    }

    // 7: Yokonuma models, dimension |T||W|
    {
        let mut ok = true;
        for (r, want) in runs(&rep, "yokonuma").zip([3 * 2, 25 * 6, 7 * 3]) {
            let d = &r["data"];
            ok &= d["dimension"].as_u64() == Some(want) && d["freeness"]["rank"].as_u64() == Some(want);
            ok &= d["alpha"]["valuation"].as_i64() == Some(0) && d["alpha"]["congruent_one"] == true;
        }
        let (code, elapsed) = run(&["yokonuma", "--group", "A2", "--l", "5", "--q", "6"]);
        let (n, f) = verdicts_pass(&rep, 7);
        let pass = ok && runs(&rep, "yokonuma").count() == 3 && n > 0 && f == 0 && code == 0 && elapsed < Duration::from_secs(300);
        t.put(7, pass, format!("S2, S3, C3 models; S3 case {:.1} s", elapsed.as_secs_f64()));
    }

    // 8: GL₂(4), ℓ = 3
    {
        let (code, elapsed) = run(&["classical", "--q", "4", "--l", "3"]);
        let d = &runs(&rep, "classical").next().unwrap()["data"];
        let ok = d["cut_dimension"].as_u64() == Some(9 * 2)
            && d["group_order"].as_u64() == Some(15 * 12)
            && d["classical_relation"] == true
            && d["products_ok"] == true
            && d["products_checked"].as_u64() == Some(18 * 18);
        let (n, f) = verdicts_pass(&rep, 8);
        t.put(8, ok && n > 0 && f == 0 && code == 0 && elapsed < Duration::from_secs(120), format!("dim f𝒴′f = 18, 324 products; {:.1} s", elapsed.as_secs_f64()));
    }

    // 9: byte-identical reports
    {
        let same = std::fs::read(&a).unwrap() == std::fs::read(&b).unwrap();
        t.put(9, same && code_a == code_b, "two suite runs produce identical JSON".into());
    }

    let mut all = errors.is_empty();
    for (c, pass, detail) in &t.lines {
        println!("criterion {}: {} ({})", c, if *pass { "PASS" } else { "FAIL" }, detail);
        all &= pass;
    }
    if !all {
        std::process::exit(1);
    }
}
