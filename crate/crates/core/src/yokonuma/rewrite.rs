//! Secondary constructor: the left regular representation on the basis
//! y_t y_w, obtained by rewriting with (†) and the action relations.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{badd, bmul, bscale, unit, Blocks, YokModel};
use crate::error::Result;
use crate::exactnum::CycNum;
use crate::reflgrp::ReflGroup;
use crate::torus::Side;

/// Column k lists the nonzero (row, coefficient) pairs.
pub type SparseOp = Vec<Vec<(usize, CycNum)>>;

#[derive(Clone, Debug)]
pub struct RegularRep {
    pub tsize: usize,
    pub order: usize,
    /// Left multiplication by y_t for the unit vectors t, then by the y_r.
    pub ops: Vec<SparseOp>,
}

/// a + bE with E² = c·E.
#[derive(Clone)]
struct Pair(CycNum, CycNum);

fn pair_mul(x: &Pair, y: &Pair, c: i64) -> Pair {
    let bb = &x.1 * &y.1;
    Pair(&x.0 * &y.0, &(&(&x.0 * &y.1) + &(&x.1 * &y.0)) + &(&bb * &CycNum::from_int(c)))
}

fn push(col: &mut BTreeMap<usize, CycNum>, k: usize, c: &CycNum) {
    let e = col.entry(k).or_insert_with(CycNum::zero);
    *e += c;
}

fn finish(col: BTreeMap<usize, CycNum>) -> Vec<(usize, CycNum)> {
    col.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

impl RegularRep {
    pub fn build(w: &ReflGroup, model: &YokModel) -> Self {
        let t = &model.torus;
        let (tsize, order) = (t.size(), model.order);
        let idx = |tv: &[u64], x: usize| t.encode(tv) * order + x;
        let v = CycNum::from_int(model.v);
        let mut ops = Vec::new();
        for i in 0..t.rank {
            let e = unit(t.rank, i);
            let op = (0..tsize * order)
                .map(|k| vec![(idx(&t.add(&t.decode(k / order), &e), k % order), CycNum::one())])
                .collect();
            ops.push(op);
        }
        let cyclic = model.braid.is_empty() && model.gen_orders.len() == 1 && model.gen_orders[0] > 2;
        for (g, &ge) in model.gen_elements.iter().enumerate() {
            let comm = &model.commutators[g];
            let mut op = Vec::with_capacity(tsize * order);
            // Powers r^k for the cyclic case.
            let powers: Vec<usize> = if cyclic {
                let mut p = vec![0usize];
                for _ in 1..model.gen_orders[0] {
                    p.push(w.gen_mul(g, *p.last().unwrap()));
                }
                p
            } else {
                Vec::new()
            };
            let relation: Vec<Pair> = if cyclic {
                let e = model.gen_orders[0];
                let c = comm.len() as i64;
                let mut acc = vec![Pair(CycNum::one(), CycNum::zero())];
                for j in 1..=e {
                    let z = CycNum::zeta(e, j as i64);
                    let root = if j == e { Pair(z.clone(), &z * &v) } else { Pair(z, CycNum::zero()) };
                    let mut next = vec![Pair(CycNum::zero(), CycNum::zero()); acc.len() + 1];
                    for (k, ak) in acc.iter().enumerate() {
                        next[k + 1] = Pair(&next[k + 1].0 + &ak.0, &next[k + 1].1 + &ak.1);
                        let m = pair_mul(ak, &root, c);
                        next[k] = Pair(&next[k].0 - &m.0, &next[k].1 - &m.1);
                    }
                    acc = next;
                }
                acc
            } else {
                Vec::new()
            };
            for k in 0..tsize * order {
                let tv = t.decode(k / order);
                let x = k % order;
                let st = t.act(Side::Points, ge, &tv);
                let mut col = BTreeMap::new();
                if cyclic {
                    let p = powers.iter().position(|&y| y == x).expect("cyclic element");
                    if p + 1 < powers.len() {
                        push(&mut col, idx(&st, powers[p + 1]), &CycNum::one());
                    } else {
                        // y^e = -Σ_k (a_k + b_k E) y^k
                        for (kk, pr) in relation.iter().take(powers.len()).enumerate() {
                            push(&mut col, idx(&st, powers[kk]), &-&pr.0);
                            for u in comm {
                                push(&mut col, idx(&t.add(&st, u), powers[kk]), &-&pr.1);
                            }
                        }
                    }
                } else {
                    let sx = w.gen_mul(g, x);
                    if w.length(sx) > w.length(x) {
                        push(&mut col, idx(&st, sx), &CycNum::one());
                    } else {
                        // y_s y_x = v E_s y_x + (1 + v E_s) y_{sx}
                        push(&mut col, idx(&st, sx), &CycNum::one());
                        for u in comm {
                            let su = t.add(&st, u);
                            push(&mut col, idx(&su, x), &v);
                            push(&mut col, idx(&su, sx), &v);
                        }
                    }
                }
                op.push(finish(col));
            }
            ops.push(op);
        }
        RegularRep { tsize, order, ops }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RewriteReport {
    pub dimension: usize,
    pub generators: usize,
    pub entries: usize,
    /// Minimum ℓ-valuation of the power-basis coefficients of all entries.
    pub min_valuation: Option<i64>,
    pub integral: bool,
    /// Generator actions agree with the induced-module model.
    pub agrees: bool,
    pub pass: bool,
}

/// Compare the rewriting constructor with the model: for each generator g
/// and monomial b_k, ρ(g)ρ(b_k) must equal Σ_j R_g[j,k] ρ(b_j). The entries
/// generate all structure constants, so their integrality bounds those.
pub fn rewriting_check(w: &ReflGroup, model: &YokModel, monomials: &[Blocks]) -> Result<RewriteReport> {
    let reg = RegularRep::build(w, model);
    let n = model.torus.rank;
    let images: Vec<Blocks> = (0..reg.ops.len())
        .map(|i| if i < n { model.torus_element(&unit(n, i)) } else { model.gen(i - n) })
        .collect();
    let mut agrees = true;
    let mut entries = 0;
    let mut min_val: Option<i64> = None;
    for (op, img) in reg.ops.iter().zip(&images) {
        for (k, col) in op.iter().enumerate() {
            entries += col.len();
            for (_, c) in col {
                if let Some(m) = c.min_l_valuation(model.l) {
                    min_val = Some(min_val.map_or(m, |x| x.min(m)));
                }
            }
            if !agrees {
                continue;
            }
            let lhs = bmul(img, &monomials[k]);
            let rhs = col.iter().fold(model.zero(), |acc, (j, c)| badd(&acc, &bscale(&monomials[*j], c)));
            agrees &= lhs == rhs;
        }
    }
    let integral = min_val.is_none_or(|m| m >= 0);
    Ok(RewriteReport {
        dimension: reg.tsize * reg.order,
        generators: reg.ops.len(),
        entries,
        min_valuation: min_val,
        integral,
        agrees,
        pass: agrees && integral,
    })
}
