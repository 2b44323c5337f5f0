//! Versioned JSON dump of a model for regression testing.

use serde::Serialize;

use super::{Blocks, YokModel};
use crate::error::Result;
use crate::exactnum::CycNum;

pub const DUMP_SCHEMA: &str = "spets-yokonuma-model";
pub const DUMP_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct DumpBlock {
    pub theta: Vec<u64>,
    pub stabiliser: String,
    pub label: String,
    pub dim: usize,
    pub schur: CycNum,
}

/// Basis element y_t y_w.
#[derive(Clone, Debug, Serialize)]
pub struct BasisLabel {
    pub t: Vec<u64>,
    pub word: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelDump {
    pub schema: &'static str,
    pub version: u32,
    pub group: String,
    pub l: u64,
    pub a: u32,
    pub q: u64,
    pub v: i64,
    pub blocks: Vec<DumpBlock>,
    /// Row-major entries of each block, per braid generator.
    pub generators: Vec<Vec<Vec<CycNum>>>,
    /// The same for y_t with t running over the unit vectors of T.
    pub torus_generators: Vec<Vec<Vec<CycNum>>>,
    pub basis: Vec<BasisLabel>,
    /// τ on each basis element, in basis order.
    pub trace: Vec<CycNum>,
}

fn entries(b: &Blocks) -> Vec<Vec<CycNum>> {
    b.iter().map(|m| m.data.clone()).collect()
}

pub fn model_dump(model: &YokModel) -> Result<ModelDump> {
    let n = model.torus.rank;
    let torus_generators = (0..n)
        .map(|i| {
            let t: Vec<u64> = (0..n).map(|j| u64::from(i == j)).collect();
            entries(&model.torus_element(&t))
        })
        .collect();
    let mut basis = Vec::new();
    for ti in 0..model.torus.size() {
        let t = model.torus.decode(ti);
        for w in &model.words {
            basis.push(BasisLabel { t: t.clone(), word: w.clone() });
        }
    }
    let trace = model.monomials().iter().map(|m| model.tau(m)).collect::<Result<Vec<_>>>()?;
    Ok(ModelDump {
        schema: DUMP_SCHEMA,
        version: DUMP_VERSION,
        group: model.group.clone(),
        l: model.l,
        a: model.a,
        q: model.q,
        v: model.v,
        blocks: model
            .blocks
            .iter()
            .map(|b| DumpBlock {
                theta: b.theta.clone(),
                stabiliser: b.stabiliser.clone(),
                label: b.label.clone(),
                dim: b.dim,
                schur: b.schur.clone(),
            })
            .collect(),
        generators: (0..model.gen_orders.len()).map(|i| entries(&model.gen(i))).collect(),
        torus_generators,
        basis,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reflgrp::{GroupSpec, ReflGroup};
    use crate::yokonuma::build_model;

    #[test]
    fn s2_dump() {
        let w = ReflGroup::build(&GroupSpec::parse("A1").unwrap()).unwrap();
        let m = build_model(&w, 3, 1, 4).unwrap();
        let d = model_dump(&m).unwrap();
        assert_eq!(d.basis.len(), 6);
        assert_eq!(d.generators.len(), 1);
        assert_eq!(d.torus_generators.len(), 1);
        // τ(y_t y_w) = |T| at t = 0, w = 1 and 0 elsewhere
        let three = CycNum::from_int(3);
        for (b, v) in d.basis.iter().zip(&d.trace) {
            let want = if b.t == [0] && b.word.is_empty() { three.clone() } else { CycNum::zero() };
            assert_eq!(v, &want);
        }
        let s = serde_json::to_string(&d).unwrap();
        assert!(s.starts_with("{\"schema\":\"spets-yokonuma-model\",\"version\":1"));
    }
}
