//! Quivers, exchange matrices and seeds with exact Laurent cluster variables.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cartan_weyl::{CartanMatrix, ReducedWord, WeylError};
use crate::laurent::{LaurentError, LaurentPoly, VarTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeedError {
    #[error("vertex {0} is frozen")]
    FrozenIndex(usize),
    #[error("vertex {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("matrix is not skew-symmetric")]
    NotSkew,
    #[error("2-cycle between mutable vertices {0} and {1}")]
    TwoCycle(usize, usize),
    #[error("exchange at vertex {vertex} is not Laurent: {detail}")]
    NotLaurent { vertex: usize, detail: String },
    #[error("cluster variable at vertex {vertex} has a negative power of a frozen variable")]
    NegativeFrozenExponent { vertex: usize },
    #[error("quiver has an oriented cycle")]
    NotAcyclic,
    #[error("arrow {0} -> {1} does not go from a smaller to a larger vertex")]
    NotTopologicallyOrdered(usize, usize),
    #[error("linearly oriented type A quivers are excluded")]
    LinearAnCaveat,
    #[error("matrix is singular")]
    Singular,
    #[error("solution {0} is not integral")]
    NonIntegral(String),
    #[error("expected length {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// Quiver on vertices `1..=r` with a frozen mask.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quiver {
    r: usize,
    frozen: Vec<bool>,
    arrows: BTreeMap<(usize, usize), u32>,
}

impl Quiver {
    pub fn new(r: usize, frozen: Vec<bool>) -> Self {
        assert_eq!(frozen.len(), r);
        Quiver {
            r,
            frozen,
            arrows: BTreeMap::new(),
        }
    }

    pub fn from_arrows(
        r: usize,
        frozen: Vec<bool>,
        arrows: &[(usize, usize, u32)],
    ) -> Result<Self, SeedError> {
        if frozen.len() != r {
            return Err(SeedError::LengthMismatch {
                expected: r,
                found: frozen.len(),
            });
        }
        let mut q = Quiver::new(r, frozen);
        for &(s, t, m) in arrows {
            for v in [s, t] {
                if !(1..=r).contains(&v) {
                    return Err(SeedError::IndexOutOfRange { index: v, bound: r });
                }
            }
            if s == t {
                return Err(SeedError::Loop(s));
            }
            q.add_arrows(s, t, m);
        }
        for &(s, t) in q.arrows.keys() {
            if q.arrows.contains_key(&(t, s)) && !q.frozen[s - 1] && !q.frozen[t - 1] {
                return Err(SeedError::TwoCycle(s.min(t), s.max(t)));
            }
        }
        Ok(q)
    }

    pub fn add_arrows(&mut self, s: usize, t: usize, m: u32) {
        if m > 0 {
            *self.arrows.entry((s, t)).or_insert(0) += m;
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.r
    }

    pub fn is_frozen(&self, k: usize) -> bool {
        self.frozen[k - 1]
    }

    pub fn frozen_mask(&self) -> &[bool] {
        &self.frozen
    }

    pub fn frozen_vertices(&self) -> Vec<usize> {
        (1..=self.r).filter(|&k| self.frozen[k - 1]).collect()
    }

    pub fn mutable_vertices(&self) -> Vec<usize> {
        (1..=self.r).filter(|&k| !self.frozen[k - 1]).collect()
    }

    /// `(source, target, multiplicity)` sorted.
    pub fn arrows(&self) -> Vec<(usize, usize, u32)> {
        self.arrows.iter().map(|(&(s, t), &m)| (s, t, m)).collect()
    }

    pub fn arrow_count(&self, s: usize, t: usize) -> u32 {
        self.arrows.get(&(s, t)).copied().unwrap_or(0)
    }

    /// Arrow multiset of the quiver read off a skew matrix (2-cycles cancelled).
    pub fn from_matrix(b: &ExchangeMatrix) -> Self {
        let mut q = Quiver::new(b.size(), b.frozen.clone());
        for i in 1..=b.size() {
            for j in 1..=b.size() {
                let x = b.entry(i, j);
                if x > 0 {
                    q.add_arrows(j, i, x as u32);
                }
            }
        }
        q
    }
}

/// `q_{i_s,i_t}` arrows `s → t` when `t⁺ ≥ s⁺ > t > s`, plus `s → s⁻`.
pub fn gamma_i(c: &CartanMatrix, w: &ReducedWord) -> Quiver {
    let r = w.len();
    let frozen = (1..=r).map(|k| w.is_frozen(k)).collect();
    let mut q = Quiver::new(r, frozen);
    for s in 1..=r {
        for t in s + 1..=r {
            if w.plus(t) >= w.plus(s) && w.plus(s) > t {
                let m = c.q(w.letter(s), w.letter(t));
                if m > 0 {
                    q.add_arrows(s, t, m as u32);
                }
            }
        }
        if w.minus(s) > 0 {
            q.add_arrows(s, w.minus(s), 1);
        }
    }
    q
}

/// Square skew-symmetric `b_ij = #(j → i) − #(i → j)` with a frozen mask.
///
/// The extended `r × (r − n)` matrix is the set of mutable columns.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExchangeMatrix {
    b: Vec<Vec<i64>>,
    frozen: Vec<bool>,
}

impl ExchangeMatrix {
    pub fn new(b: Vec<Vec<i64>>, frozen: Vec<bool>) -> Result<Self, SeedError> {
        let r = b.len();
        if frozen.len() != r {
            return Err(SeedError::LengthMismatch {
                expected: r,
                found: frozen.len(),
            });
        }
        for row in &b {
            if row.len() != r {
                return Err(SeedError::LengthMismatch {
                    expected: r,
                    found: row.len(),
                });
            }
        }
        let m = ExchangeMatrix { b, frozen };
        if !m.is_skew() {
            return Err(SeedError::NotSkew);
        }
        Ok(m)
    }

    pub fn from_quiver(q: &Quiver) -> Self {
        let r = q.vertex_count();
        let mut b = vec![vec![0i64; r]; r];
        for (s, t, m) in q.arrows() {
            b[t - 1][s - 1] += m as i64;
            b[s - 1][t - 1] -= m as i64;
        }
        ExchangeMatrix {
            b,
            frozen: q.frozen_mask().to_vec(),
        }
    }

    pub fn size(&self) -> usize {
        self.b.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.b[i - 1][j - 1]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.b
    }

    pub fn is_frozen(&self, k: usize) -> bool {
        self.frozen[k - 1]
    }

    pub fn frozen_mask(&self) -> &[bool] {
        &self.frozen
    }

    pub fn mutable_vertices(&self) -> Vec<usize> {
        (1..=self.size()).filter(|&k| !self.frozen[k - 1]).collect()
    }

    pub fn is_skew(&self) -> bool {
        let r = self.size();
        (0..r).all(|i| (0..r).all(|j| self.b[i][j] == -self.b[j][i]))
    }

    /// Principal part: rows and columns of mutable vertices.
    pub fn principal(&self) -> Vec<Vec<i64>> {
        let mv = self.mutable_vertices();
        mv.iter()
            .map(|&i| mv.iter().map(|&j| self.entry(i, j)).collect())
            .collect()
    }

    /// All rows, mutable columns.
    pub fn extended(&self) -> Vec<Vec<i64>> {
        let mv = self.mutable_vertices();
        self.b
            .iter()
            .map(|row| mv.iter().map(|&j| row[j - 1]).collect())
            .collect()
    }

    fn check_mutable(&self, k: usize) -> Result<(), SeedError> {
        if !(1..=self.size()).contains(&k) {
            return Err(SeedError::IndexOutOfRange {
                index: k,
                bound: self.size(),
            });
        }
        if self.frozen[k - 1] {
            return Err(SeedError::FrozenIndex(k));
        }
        Ok(())
    }

    pub fn mutate(&self, k: usize) -> Result<Self, SeedError> {
        self.check_mutable(k)?;
        let r = self.size();
        let kk = k - 1;
        let mut b = self.b.clone();
        for i in 0..r {
            for j in 0..r {
                b[i][j] = if i == kk || j == kk {
                    -self.b[i][j]
                } else {
                    let (bik, bkj) = (self.b[i][kk], self.b[kk][j]);
                    self.b[i][j] + (bik.abs() * bkj + bik * bkj.abs()) / 2
                };
            }
        }
        Ok(ExchangeMatrix {
            b,
            frozen: self.frozen.clone(),
        })
    }

    /// Loops are impossible in a skew matrix; checks skewness.
    pub fn quiver_is_valid(&self) -> bool {
        self.is_skew() && self.b.iter().enumerate().all(|(i, row)| row[i] == 0)
    }
}

pub fn b_matrix(q: &Quiver) -> ExchangeMatrix {
    ExchangeMatrix::from_quiver(q)
}

pub fn matrix_mutate(b: &ExchangeMatrix, k: usize) -> Result<ExchangeMatrix, SeedError> {
    b.mutate(k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoeffMode {
    /// Frozen variables must only occur with nonnegative powers.
    #[default]
    Frozen,
    Invertible,
    /// Frozen variables set to 1 on output.
    Specialized,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seed {
    matrix: ExchangeMatrix,
    cluster: Vec<LaurentPoly>,
    vars: VarTable,
    path: Vec<usize>,
    mode: CoeffMode,
}

impl Seed {
    /// Cluster `y1, …, yr`.
    pub fn initial(matrix: ExchangeMatrix, mode: CoeffMode) -> Self {
        let vars = VarTable::indexed("y", matrix.size());
        Self::with_vars(matrix, &vars, mode)
    }

    pub fn with_vars(matrix: ExchangeMatrix, vars: &VarTable, mode: CoeffMode) -> Self {
        assert_eq!(vars.len(), matrix.size());
        let cluster = (0..matrix.size())
            .map(|i| LaurentPoly::var(vars, i))
            .collect();
        Seed {
            matrix,
            cluster,
            vars: vars.clone(),
            path: Vec::new(),
            mode,
        }
    }

    pub fn from_quiver(q: &Quiver, mode: CoeffMode) -> Self {
        Self::initial(ExchangeMatrix::from_quiver(q), mode)
    }

    pub fn matrix(&self) -> &ExchangeMatrix {
        &self.matrix
    }

    pub fn cluster(&self) -> &[LaurentPoly] {
        &self.cluster
    }

    pub fn variable(&self, k: usize) -> &LaurentPoly {
        &self.cluster[k - 1]
    }

    pub fn path(&self) -> &[usize] {
        &self.path
    }

    pub fn mode(&self) -> CoeffMode {
        self.mode
    }

    pub fn vars(&self) -> &VarTable {
        &self.vars
    }

    /// The two exchange monomials at `k`: `(Π_{b_ik>0} y_i^{b_ik}, Π_{b_ik<0} y_i^{−b_ik})`.
    pub fn exchange_monomials(&self, k: usize) -> Result<(LaurentPoly, LaurentPoly), SeedError> {
        self.matrix.check_mutable(k)?;
        let vars = self.vars().clone();
        let mut pos = LaurentPoly::one(&vars);
        let mut neg = LaurentPoly::one(&vars);
        for i in 1..=self.matrix.size() {
            let b = self.matrix.entry(i, k);
            if b > 0 {
                pos = &pos * &self.cluster[i - 1].pow(b as u32);
            } else if b < 0 {
                neg = &neg * &self.cluster[i - 1].pow((-b) as u32);
            }
        }
        Ok((pos, neg))
    }

    pub fn mutate(&self, k: usize) -> Result<Seed, SeedError> {
        let (pos, neg) = self.exchange_monomials(k)?;
        let num = &pos + &neg;
        let new = num
            .exact_div(&self.cluster[k - 1])
            .map_err(|e| SeedError::NotLaurent {
                vertex: k,
                detail: e.to_string(),
            })?;
        if self.mode != CoeffMode::Invertible {
            let mins = new.min_exponents();
            if self
                .matrix
                .frozen_mask()
                .iter()
                .zip(&mins)
                .any(|(&f, &m)| f && m < 0)
            {
                return Err(SeedError::NegativeFrozenExponent { vertex: k });
            }
        }
        let mut cluster = self.cluster.clone();
        cluster[k - 1] = new;
        let mut path = self.path.clone();
        // a repeated mutation cancels
        if path.last() == Some(&k) {
            path.pop();
        } else {
            path.push(k);
        }
        Ok(Seed {
            matrix: self.matrix.mutate(k)?,
            cluster,
            vars: self.vars.clone(),
            path,
            mode: self.mode,
        })
    }

    pub fn mutate_path(&self, path: &[usize]) -> Result<Seed, SeedError> {
        let mut s = self.clone();
        for &k in path {
            s = s.mutate(k)?;
        }
        Ok(s)
    }

    /// Cluster as reported: frozen variables set to 1 in specialized mode.
    pub fn output_cluster(&self) -> Vec<LaurentPoly> {
        match self.mode {
            CoeffMode::Specialized => {
                let frozen: Vec<usize> = (0..self.matrix.size())
                    .filter(|&i| self.matrix.frozen_mask()[i])
                    .collect();
                self.cluster
                    .iter()
                    .map(|p| p.specialize_to_one(&frozen))
                    .collect()
            }
            _ => self.cluster.clone(),
        }
    }

    /// Key independent of the mutation path and of vertex order.
    pub fn canonical_key(&self) -> String {
        let mut vs: Vec<String> = self.cluster.iter().map(|p| p.to_string()).collect();
        vs.sort();
        vs.join(" ; ")
    }

    pub fn to_doc(&self) -> SeedDoc {
        SeedDoc {
            matrix: self.matrix.rows().to_vec(),
            frozen: self.matrix.frozen_mask().to_vec(),
            cluster: self.output_cluster(),
            provenance: self.path.clone(),
        }
    }
}

pub fn seed_mutate(s: &Seed, k: usize) -> Result<Seed, SeedError> {
    s.mutate(k)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeedDoc {
    pub matrix: Vec<Vec<i64>>,
    pub frozen: Vec<bool>,
    pub cluster: Vec<LaurentPoly>,
    pub provenance: Vec<usize>,
}

/// Negated minimal exponents of the mutable initial variables.
pub fn denominator_vector(s: &Seed, position: usize) -> Vec<i64> {
    let mins = s.variable(position).min_exponents();
    s.matrix()
        .mutable_vertices()
        .iter()
        .map(|&j| -(mins[j - 1] as i64))
        .collect()
}

/// Solve `cartan · g = d` exactly.
pub fn g_vector_initial(d: &[i64], cartan: &[Vec<i64>]) -> Result<Vec<i64>, SeedError> {
    let n = cartan.len();
    if d.len() != n {
        return Err(SeedError::LengthMismatch {
            expected: n,
            found: d.len(),
        });
    }
    let mut m: Vec<Vec<BigRational>> = cartan
        .iter()
        .zip(d)
        .map(|(row, &x)| {
            row.iter()
                .chain(std::iter::once(&x))
                .map(|&v| BigRational::from_integer(BigInt::from(v)))
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .ok_or(SeedError::Singular)?;
        m.swap(col, piv);
        let p = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x /= &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..=n {
                    let v = &m[col][c] * &f;
                    m[r][c] -= v;
                }
            }
        }
    }
    m.iter()
        .map(|row| {
            let x = &row[n];
            if x.is_integer() {
                i64::try_from(x.to_integer()).map_err(|_| SeedError::NonIntegral(x.to_string()))
            } else {
                Err(SeedError::NonIntegral(x.to_string()))
            }
        })
        .collect()
}

/// Deduplication store with insert-if-absent semantics.
pub trait Registry: Sync {
    /// `true` when `key` was not present before.
    fn insert_if_absent(&self, key: &str) -> bool;
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Default)]
pub struct MemoryRegistry(Mutex<HashSet<String>>);

impl Registry for MemoryRegistry {
    fn insert_if_absent(&self, key: &str) -> bool {
        self.0
            .lock()
            .expect("registry lock")
            .insert(key.to_string())
    }

    fn len(&self) -> usize {
        self.0.lock().expect("registry lock").len()
    }
}

#[derive(Debug, Clone)]
pub struct Exploration {
    pub seeds: usize,
    pub variables: Vec<LaurentPoly>,
    /// Pairs of distinct variables sharing a denominator vector.
    pub denominator_collisions: Vec<(String, String)>,
}

/// Breadth-first exploration of the exchange graph up to `depth`.
pub fn explore(
    start: &Seed,
    depth: usize,
    seeds: &dyn Registry,
    variables: &dyn Registry,
) -> Result<Exploration, SeedError> {
    let mut queue = VecDeque::from([(start.clone(), 0usize)]);
    seeds.insert_if_absent(&start.canonical_key());
    let mut found = Vec::new();
    let mut dens: BTreeMap<Vec<i64>, String> = BTreeMap::new();
    let mut collisions = Vec::new();
    let mut record = |s: &Seed, k: usize, found: &mut Vec<LaurentPoly>| {
        let v = s.variable(k);
        if variables.insert_if_absent(&v.to_string()) {
            found.push(v.clone());
            let d = denominator_vector(s, k);
            let name = v.to_string();
            if let Some(prev) = dens.insert(d, name.clone()) {
                collisions.push((prev, name));
            }
        }
    };
    for k in start.matrix().mutable_vertices() {
        record(start, k, &mut found);
    }
    let mut count = 1;
    while let Some((s, d)) = queue.pop_front() {
        if d == depth {
            continue;
        }
        for k in s.matrix().mutable_vertices() {
            let t = s.mutate(k)?;
            record(&t, k, &mut found);
            if seeds.insert_if_absent(&t.canonical_key()) {
                count += 1;
                queue.push_back((t, d + 1));
            }
        }
    }
    Ok(Exploration {
        seeds: count,
        variables: found,
        denominator_collisions: collisions,
    })
}

/// Random walk that never mutates the same vertex twice in a row.
pub fn random_walk<R: Rng>(
    start: &Seed,
    depth: usize,
    rng: &mut R,
) -> Result<Vec<Seed>, SeedError> {
    let mv = start.matrix().mutable_vertices();
    let mut out = vec![start.clone()];
    if mv.is_empty() {
        return Ok(out);
    }
    let mut last = 0;
    for _ in 0..depth {
        let choices: Vec<usize> = mv
            .iter()
            .copied()
            .filter(|&k| k != last || mv.len() == 1)
            .collect();
        let k = choices[rng.random_range(0..choices.len())];
        let next = out.last().unwrap().mutate(k)?;
        out.push(next);
        last = k;
    }
    Ok(out)
}

/// Coefficient-free seed with exchange matrix `B_Q`.
pub fn b_q_seed(n: usize, arrows: &[(usize, usize, u32)]) -> Result<Seed, SeedError> {
    let q = Quiver::from_arrows(n, vec![false; n], arrows)?;
    Ok(Seed::from_quiver(&q, CoeffMode::Frozen))
}

/// `μ_n ∘ ⋯ ∘ μ_1` on the mutable vertices in increasing order.
pub fn y_dagger(s: &Seed) -> Result<Seed, SeedError> {
    s.mutate_path(&s.matrix().mutable_vertices())
}

#[derive(Debug, Clone)]
pub struct AcyclicSetup {
    pub cartan: CartanMatrix,
    pub word: ReducedWord,
    pub seed: Seed,
}

fn is_linear_a(n: usize, arrows: &[(usize, usize, u32)]) -> bool {
    let mut a: Vec<_> = arrows.iter().filter(|x| x.2 > 0).copied().collect();
    a.sort();
    let linear: Vec<_> = (1..n).map(|i| (i, i + 1, 1)).collect();
    a == linear
}

/// Word `c²` for `c = s_n ⋯ s_1` with its initial seed.
pub fn acyclic_double(n: usize, arrows: &[(usize, usize, u32)]) -> Result<AcyclicSetup, SeedError> {
    let q = Quiver::from_arrows(n, vec![false; n], arrows)?;
    // Kahn's algorithm for cycle detection.
    let mut indeg = vec![0usize; n + 1];
    for (_, t, _) in q.arrows() {
        indeg[t] += 1;
    }
    let mut stack: Vec<usize> = (1..=n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for (s, t, _) in q.arrows() {
            if s == v {
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    stack.push(t);
                }
            }
        }
    }
    if seen < n {
        return Err(SeedError::NotAcyclic);
    }
    if let Some((s, t, _)) = q.arrows().into_iter().find(|&(s, t, _)| s > t) {
        return Err(SeedError::NotTopologicallyOrdered(s, t));
    }
    if is_linear_a(n, arrows) {
        return Err(SeedError::LinearAnCaveat);
    }
    let cartan = CartanMatrix::from_edges(n, arrows)?;
    let printed: Vec<usize> = (1..=n).rev().chain((1..=n).rev()).collect();
    let word = ReducedWord::new(&cartan, &printed)?;
    let seed = Seed::from_quiver(&gamma_i(&cartan, &word), CoeffMode::Frozen);
    Ok(AcyclicSetup { cartan, word, seed })
}

/// Outcome of `μ_n ⋯ μ_1` on the double-word seed.
#[derive(Debug, Clone, Serialize)]
pub struct AcyclicReport {
    pub word: Vec<usize>,
    /// Principal part is `B_Q` again.
    pub restored: bool,
    /// `{y_1..y_n} ∩ {y†_1..y†_n} = ∅`.
    pub disjoint: bool,
    pub y: Vec<LaurentPoly>,
    pub y_dagger: Vec<LaurentPoly>,
}

pub fn acyclic_report(setup: &AcyclicSetup) -> Result<AcyclicReport, SeedError> {
    let s = &setup.seed;
    let d = y_dagger(s)?;
    let mv = s.matrix().mutable_vertices();
    let y: Vec<LaurentPoly> = mv.iter().map(|&k| s.variable(k).clone()).collect();
    let y_dagger: Vec<LaurentPoly> = mv.iter().map(|&k| d.variable(k).clone()).collect();
    Ok(AcyclicReport {
        word: setup.word.printed(),
        restored: d.matrix().principal() == s.matrix().principal(),
        disjoint: y_dagger.iter().all(|v| !y.contains(v)),
        y,
        y_dagger,
    })
}
