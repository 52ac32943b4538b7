//! Hom-dimension tables, dimension vectors and Δ-dimension vectors with their mutation rules.

use log::warn;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cartan_weyl::{beta_sequence, sym_form, CartanMatrix, ReducedWord};
use crate::quiver_seed::{ExchangeMatrix, SeedError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimvecError {
    #[error("new label at vertex {vertex} has a negative entry: {label:?}")]
    NegativeEntry { vertex: usize, label: Vec<i64> },
    #[error("both exchange sides at vertex {0} have the same total")]
    TiedTotals(usize),
    #[error("expected {expected} labels, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Seed(#[from] SeedError),
}

/// `vm[k][s] = dim Hom(V_k, M_s)`, `vv[k][s] = dim Hom(V_k, V_s)`; 0-based storage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomTables {
    pub word: Vec<usize>,
    pub vm: Vec<Vec<i64>>,
    pub vv: Vec<Vec<i64>>,
    pub d_delta: Vec<i64>,
}

impl HomTables {
    /// Column `s` of VM, the dimension vector of `Δ_s`.
    pub fn delta_column(&self, s: usize) -> Vec<i64> {
        self.vm.iter().map(|row| row[s - 1]).collect()
    }

    /// Column `s` of VV, the dimension vector of the projective at `s`.
    pub fn projective_column(&self, s: usize) -> Vec<i64> {
        self.vv.iter().map(|row| row[s - 1]).collect()
    }

    /// `Σ a_s · dim Δ_s`.
    pub fn delta_to_dimvec(&self, a: &[i64]) -> Vec<i64> {
        self.vm
            .iter()
            .map(|row| row.iter().zip(a).map(|(x, y)| x * y).sum())
            .collect()
    }
}

pub fn hom_tables(c: &CartanMatrix, w: &ReducedWord) -> HomTables {
    let r = w.len();
    let betas = beta_sequence(c, w);
    let mut vm = vec![vec![0i64; r]; r];
    for k in 1..=r {
        for s in 1..=k {
            vm[k - 1][s - 1] = if k == s {
                1
            } else {
                let mut v = i64::from(w.letter(k) == w.letter(s));
                let mut x = k;
                while x > s {
                    v += sym_form(c, &betas[x - 1], &betas[s - 1]);
                    x = w.minus(x);
                }
                v
            };
        }
    }
    let mut vv = vec![vec![0i64; r]; r];
    for s in 1..=r {
        for t in w.interval_below(s) {
            for k in 0..r {
                vv[k][s - 1] += vm[k][t - 1];
            }
        }
    }
    let d_delta = (0..r).map(|s| (0..r).map(|k| vm[k][s]).sum()).collect();
    HomTables {
        word: w.printed(),
        vm,
        vv,
        d_delta,
    }
}

/// `(Δ_k, Δ_s)` on standards: 0, 1, or `(β_k, β_s)` as `k <, =, > s`.
pub fn ringel_form_delta(c: &CartanMatrix, w: &ReducedWord, k: usize, s: usize) -> i64 {
    use std::cmp::Ordering::*;
    match k.cmp(&s) {
        Less => 0,
        Equal => 1,
        Greater => {
            let b = beta_sequence(c, w);
            sym_form(c, &b[k - 1], &b[s - 1])
        }
    }
}

/// Labels of `V_1, …, V_r` as dimension vectors.
pub fn initial_dimvec_labels(t: &HomTables) -> Vec<Vec<i64>> {
    (1..=t.vv.len()).map(|s| t.projective_column(s)).collect()
}

/// Labels of `V_1, …, V_r` as Δ-dimension vectors: indicators of `{k_min, …, k⁻, k}`.
pub fn initial_delta_labels(w: &ReducedWord) -> Vec<Vec<i64>> {
    (1..=w.len())
        .map(|k| {
            let mut v = vec![0; w.len()];
            for s in w.interval_below(k) {
                v[s - 1] = 1;
            }
            v
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelStep {
    pub vertex: usize,
    pub new_label: Vec<i64>,
    pub in_sum: Vec<i64>,
    pub out_sum: Vec<i64>,
    pub in_score: i64,
    pub out_score: i64,
    /// The selected side dominates the other coordinatewise.
    pub dominance: bool,
    pub labels: Vec<Vec<i64>>,
    #[serde(skip)]
    pub matrix: ExchangeMatrix,
}

fn mutate_labels<F>(
    labels: &[Vec<i64>],
    b: &ExchangeMatrix,
    k: usize,
    score: F,
) -> Result<LabelStep, DimvecError>
where
    F: Fn(&[i64]) -> i64,
{
    let r = b.size();
    if labels.len() != r {
        return Err(DimvecError::LengthMismatch {
            expected: r,
            found: labels.len(),
        });
    }
    let matrix = b.mutate(k)?;
    let width = labels[0].len();
    let mut in_sum = vec![0i64; width];
    let mut out_sum = vec![0i64; width];
    for i in 1..=r {
        let x = b.entry(k, i);
        let target = if x > 0 { &mut in_sum } else { &mut out_sum };
        for (slot, v) in target.iter_mut().zip(&labels[i - 1]) {
            *slot += x.abs() * v;
        }
    }
    let (in_score, out_score) = (score(&in_sum), score(&out_sum));
    if in_score == out_score {
        return Err(DimvecError::TiedTotals(k));
    }
    let (big, small) = if in_score > out_score {
        (&in_sum, &out_sum)
    } else {
        (&out_sum, &in_sum)
    };
    let dominance = big.iter().zip(small).all(|(a, b)| a >= b);
    if !dominance {
        warn!("vertex {k}: selected side {big:?} does not dominate {small:?}");
    }
    let new_label: Vec<i64> = big.iter().zip(&labels[k - 1]).map(|(a, d)| a - d).collect();
    if new_label.iter().any(|&x| x < 0) {
        return Err(DimvecError::NegativeEntry {
            vertex: k,
            label: new_label,
        });
    }
    let mut out = labels.to_vec();
    out[k - 1] = new_label.clone();
    Ok(LabelStep {
        vertex: k,
        new_label,
        in_sum,
        out_sum,
        in_score,
        out_score,
        dominance,
        labels: out,
        matrix,
    })
}

/// `d_k* = −d_k + max(Σ_{i→k} d_i, Σ_{k→j} d_j)`, sides compared by coordinate total.
pub fn mutate_dimvec(
    labels: &[Vec<i64>],
    b: &ExchangeMatrix,
    k: usize,
) -> Result<LabelStep, DimvecError> {
    mutate_labels(labels, b, k, |v| v.iter().sum())
}

/// Same rule on Δ-dimension vectors, sides compared by the pairing with `d_Δ`.
pub fn mutate_delta_dimvec(
    labels: &[Vec<i64>],
    b: &ExchangeMatrix,
    k: usize,
    d_delta: &[i64],
) -> Result<LabelStep, DimvecError> {
    mutate_labels(labels, b, k, |v| {
        v.iter().zip(d_delta).map(|(x, y)| x * y).sum()
    })
}

/// `{a, a⁺, …, b}` when `v` is the indicator of such an interval.
pub fn as_interval(w: &ReducedWord, v: &[i64]) -> Option<(usize, usize)> {
    let support: Vec<usize> = (1..=v.len()).filter(|&k| v[k - 1] != 0).collect();
    let (&a, &b) = (support.first()?, support.last()?);
    if v.iter().any(|&x| x != 0 && x != 1) || w.letter(a) != w.letter(b) {
        return None;
    }
    let mut chain = vec![a];
    while *chain.last().unwrap() != b {
        let next = w.plus(*chain.last().unwrap());
        if next > b {
            return None;
        }
        chain.push(next);
    }
    (chain == support).then_some((b, a))
}
