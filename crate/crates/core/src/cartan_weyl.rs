//! Roots, weights and reduced words for a symmetric generalized Cartan matrix.
//!
//! Letters and word positions are 1-based throughout. A word is stored as
//! printed, `(i_r, …, i_1)`; position `k = 1` is the rightmost letter.

use std::collections::{HashSet, VecDeque};
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),
    #[error("word is not reduced: beta at position {position} is not positive")]
    NotReduced { position: usize },
    #[error("weight is not dominant at {index}")]
    NonDominant { index: usize },
    #[error("root {0:?} exceeds the height bound {1}")]
    HeightBoundExceeded(Vec<i64>, i64),
    #[error("{0:?} is not a positive root")]
    NotPositiveRoot(Vec<i64>),
    #[error("orientation has {found} arrows between {i} and {j}, Cartan matrix needs {expected}")]
    OrientationMismatch {
        i: usize,
        j: usize,
        expected: i64,
        found: i64,
    },
    #[error("vector has length {found}, rank is {expected}")]
    LengthMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanMatrix {
    n: usize,
    c: Vec<Vec<i64>>,
}

impl CartanMatrix {
    pub fn new(c: Vec<Vec<i64>>) -> Result<Self, WeylError> {
        let n = c.len();
        if n == 0 {
            return Err(WeylError::InvalidCartan("rank 0".into()));
        }
        for (i, row) in c.iter().enumerate() {
            if row.len() != n {
                return Err(WeylError::InvalidCartan(format!(
                    "row {} has length {}",
                    i + 1,
                    row.len()
                )));
            }
            if row[i] != 2 {
                return Err(WeylError::InvalidCartan(format!(
                    "c_{0}{0} = {1}",
                    i + 1,
                    row[i]
                )));
            }
            for j in 0..n {
                if i != j && (row[j] > 0 || row[j] != c[j][i]) {
                    return Err(WeylError::InvalidCartan(format!(
                        "c_{}{} = {} is not symmetric and nonpositive",
                        i + 1,
                        j + 1,
                        row[j]
                    )));
                }
            }
        }
        Ok(CartanMatrix { n, c })
    }

    /// Edges `(i, j, multiplicity)` of the underlying graph.
    pub fn from_edges(n: usize, edges: &[(usize, usize, u32)]) -> Result<Self, WeylError> {
        let mut c = vec![vec![0i64; n]; n];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 2;
        }
        for &(i, j, m) in edges {
            check_letter(i, n)?;
            check_letter(j, n)?;
            if i == j {
                return Err(WeylError::InvalidCartan(format!("loop at {i}")));
            }
            c[i - 1][j - 1] -= m as i64;
            c[j - 1][i - 1] -= m as i64;
        }
        Self::new(c)
    }

    /// Linear chain 1 - 2 - … - n.
    pub fn type_a(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i, i + 1, 1)).collect();
        Self::from_edges(n, &edges).expect("type A")
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// `c_ij` for letters `i, j`.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.c[i - 1][j - 1]
    }

    /// Number of edges between `i` and `j`; zero on the diagonal.
    pub fn q(&self, i: usize, j: usize) -> i64 {
        if i == j {
            0
        } else {
            -self.entry(i, j)
        }
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.c
    }

    pub fn is_type_a(&self) -> bool {
        *self == Self::type_a(self.n)
    }
}

fn check_letter(i: usize, n: usize) -> Result<(), WeylError> {
    if (1..=n).contains(&i) {
        Ok(())
    } else {
        Err(WeylError::IndexOutOfRange { index: i, bound: n })
    }
}

/// Integer vector in the simple-root basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RootVector(pub Vec<i64>);

impl RootVector {
    pub fn zero(n: usize) -> Self {
        RootVector(vec![0; n])
    }

    pub fn simple(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i - 1] = 1;
        RootVector(v)
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&x| x >= 0) && self.0.iter().any(|&x| x > 0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn scaled(&self, k: i64) -> Self {
        RootVector(self.0.iter().map(|x| x * k).collect())
    }
}

impl Add for &RootVector {
    type Output = RootVector;
    fn add(self, o: &RootVector) -> RootVector {
        RootVector(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RootVector {
    type Output = RootVector;
    fn sub(self, o: &RootVector) -> RootVector {
        RootVector(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RootVector {
    type Output = RootVector;
    fn neg(self) -> RootVector {
        RootVector(self.0.iter().map(|a| -a).collect())
    }
}

/// `Σ f_j ϖ_j + Σ r_j α_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Weight {
    pub f: Vec<i64>,
    pub r: Vec<i64>,
}

impl Weight {
    pub fn fundamental(n: usize, j: usize) -> Self {
        let mut f = vec![0; n];
        f[j - 1] = 1;
        Weight { f, r: vec![0; n] }
    }

    /// `λ(α_i^∨)`.
    pub fn pairing(&self, c: &CartanMatrix, i: usize) -> i64 {
        self.f[i - 1]
            + (1..=c.rank())
                .map(|j| self.r[j - 1] * c.entry(j, i))
                .sum::<i64>()
    }

    pub fn minus_root(&self, d: &RootVector) -> Self {
        Weight {
            f: self.f.clone(),
            r: self.r.iter().zip(&d.0).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Arrow multiset of a quiver whose underlying graph is the Cartan graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orientation {
    pub arrows: Vec<(usize, usize, u32)>,
}

impl Orientation {
    pub fn new(c: &CartanMatrix, arrows: Vec<(usize, usize, u32)>) -> Result<Self, WeylError> {
        let n = c.rank();
        let mut count = vec![vec![0i64; n]; n];
        for &(s, t, m) in &arrows {
            check_letter(s, n)?;
            check_letter(t, n)?;
            count[s - 1][t - 1] += m as i64;
            count[t - 1][s - 1] += m as i64;
        }
        for i in 1..=n {
            for j in i + 1..=n {
                if count[i - 1][j - 1] != c.q(i, j) {
                    return Err(WeylError::OrientationMismatch {
                        i,
                        j,
                        expected: c.q(i, j),
                        found: count[i - 1][j - 1],
                    });
                }
            }
        }
        Ok(Orientation { arrows })
    }

    /// Every edge `i - j` with `i < j` oriented `i → j`.
    pub fn ascending(c: &CartanMatrix) -> Self {
        let n = c.rank();
        let mut arrows = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                if c.q(i, j) > 0 {
                    arrows.push((i, j, c.q(i, j) as u32));
                }
            }
        }
        Orientation { arrows }
    }
}

pub fn reflect_root(c: &CartanMatrix, i: usize, d: &RootVector) -> Result<RootVector, WeylError> {
    check_letter(i, c.rank())?;
    check_len(c, &d.0)?;
    Ok(reflect_root_unchecked(c, i, d))
}

fn reflect_root_unchecked(c: &CartanMatrix, i: usize, d: &RootVector) -> RootVector {
    let p: i64 = (1..=c.rank()).map(|j| d.0[j - 1] * c.entry(j, i)).sum();
    let mut out = d.clone();
    out.0[i - 1] -= p;
    out
}

pub fn reflect_weight(c: &CartanMatrix, i: usize, w: &Weight) -> Result<Weight, WeylError> {
    check_letter(i, c.rank())?;
    check_len(c, &w.f)?;
    check_len(c, &w.r)?;
    Ok(reflect_weight_unchecked(c, i, w))
}

fn reflect_weight_unchecked(c: &CartanMatrix, i: usize, w: &Weight) -> Weight {
    let p = w.pairing(c, i);
    let mut out = w.clone();
    out.r[i - 1] -= p;
    out
}

fn check_len(c: &CartanMatrix, v: &[i64]) -> Result<(), WeylError> {
    if v.len() == c.rank() {
        Ok(())
    } else {
        Err(WeylError::LengthMismatch {
            expected: c.rank(),
            found: v.len(),
        })
    }
}

/// `s_{i_1} ⋯ s_{i_{k-1}}(α_{i_k})` for each `k`, from the sequence `(i_1, …, i_r)`.
fn betas_of_sequence(c: &CartanMatrix, seq: &[usize]) -> Vec<RootVector> {
    (0..seq.len())
        .map(|k| {
            let mut v = RootVector::simple(c.rank(), seq[k]);
            for &i in seq[..k].iter().rev() {
                v = reflect_root_unchecked(c, i, &v);
            }
            v
        })
        .collect()
}

/// `letters` as printed, `(i_r, …, i_1)`.
pub fn is_reduced(c: &CartanMatrix, letters: &[usize]) -> Result<bool, WeylError> {
    for &i in letters {
        check_letter(i, c.rank())?;
    }
    let seq: Vec<usize> = letters.iter().rev().copied().collect();
    Ok(betas_of_sequence(c, &seq)
        .iter()
        .all(RootVector::is_positive))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedWord {
    n: usize,
    // index 0 unused
    seq: Vec<usize>,
    minus: Vec<usize>,
    plus: Vec<usize>,
}

impl ReducedWord {
    /// From the printed form `(i_r, …, i_1)`.
    pub fn new(c: &CartanMatrix, printed: &[usize]) -> Result<Self, WeylError> {
        let seq: Vec<usize> = printed.iter().rev().copied().collect();
        Self::from_sequence(c, &seq)
    }

    /// From `(i_1, …, i_r)`.
    pub fn from_sequence(c: &CartanMatrix, seq: &[usize]) -> Result<Self, WeylError> {
        for &i in seq {
            check_letter(i, c.rank())?;
        }
        if let Some(pos) = betas_of_sequence(c, seq)
            .iter()
            .position(|b| !b.is_positive())
        {
            return Err(WeylError::NotReduced { position: pos + 1 });
        }
        Ok(Self::build(c.rank(), seq))
    }

    fn build(n: usize, seq: &[usize]) -> Self {
        let r = seq.len();
        let mut s = vec![0];
        s.extend_from_slice(seq);
        let mut minus = vec![0; r + 1];
        let mut plus = vec![r + 1; r + 1];
        let mut last = vec![0usize; n + 1];
        for k in 1..=r {
            let j = s[k];
            minus[k] = last[j];
            if last[j] > 0 {
                plus[last[j]] = k;
            }
            last[j] = k;
        }
        ReducedWord {
            n,
            seq: s,
            minus,
            plus,
        }
    }

    pub fn len(&self) -> usize {
        self.seq.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// `i_k`.
    pub fn letter(&self, k: usize) -> usize {
        self.seq[k]
    }

    /// `(i_1, …, i_r)`.
    pub fn sequence(&self) -> &[usize] {
        &self.seq[1..]
    }

    /// `(i_r, …, i_1)`.
    pub fn printed(&self) -> Vec<usize> {
        self.seq[1..].iter().rev().copied().collect()
    }

    /// `k⁻`, or 0.
    pub fn minus(&self, k: usize) -> usize {
        self.minus[k]
    }

    /// `k⁺`, or `r + 1`.
    pub fn plus(&self, k: usize) -> usize {
        self.plus[k]
    }

    pub fn kmin(&self, k: usize) -> usize {
        let mut s = k;
        while self.minus[s] > 0 {
            s = self.minus[s];
        }
        s
    }

    pub fn kmax(&self, k: usize) -> usize {
        let mut s = k;
        while self.plus[s] <= self.len() {
            s = self.plus[s];
        }
        s
    }

    /// `k^{(m)}`: `m` steps along `⁺`, saturating at `r + 1`.
    pub fn advance(&self, k: usize, m: usize) -> usize {
        let mut s = k;
        for _ in 0..m {
            if s > self.len() {
                break;
            }
            s = self.plus[s];
        }
        s
    }

    /// `k[j]`: positions `s < k` with `i_s = j`; `k` may be `r + 1`.
    pub fn count_before(&self, k: usize, j: usize) -> usize {
        self.seq[1..k].iter().filter(|&&x| x == j).count()
    }

    /// `t_j`.
    pub fn t(&self, j: usize) -> usize {
        self.count_before(self.len() + 1, j)
    }

    /// Positions carrying letter `j`, ascending.
    pub fn chain(&self, j: usize) -> Vec<usize> {
        (1..=self.len()).filter(|&k| self.seq[k] == j).collect()
    }

    /// `{k, k⁻, …, k_min}` ascending.
    pub fn interval_below(&self, k: usize) -> Vec<usize> {
        let mut out = vec![k];
        let mut s = k;
        while self.minus[s] > 0 {
            s = self.minus[s];
            out.push(s);
        }
        out.reverse();
        out
    }

    /// The word `(i_1, …, i_k)`.
    pub fn prefix(&self, k: usize) -> Self {
        Self::build(self.n, &self.seq[1..=k])
    }

    pub fn is_frozen(&self, k: usize) -> bool {
        self.plus[k] == self.len() + 1
    }
}

pub fn beta_sequence(c: &CartanMatrix, w: &ReducedWord) -> Vec<RootVector> {
    betas_of_sequence(c, w.sequence())
}

/// `ϖ_{i_k} − s_{i_1} ⋯ s_{i_k}(ϖ_{i_k})`.
pub fn dim_v(c: &CartanMatrix, w: &ReducedWord, k: usize) -> RootVector {
    let mut lam = Weight::fundamental(c.rank(), w.letter(k));
    for &i in w.sequence()[..k].iter().rev() {
        lam = reflect_weight_unchecked(c, i, &lam);
    }
    RootVector(lam.r.iter().map(|x| -x).collect())
}

/// `b_j = (s_{i_{j+1}} ⋯ s_{i_r}(λ))(α_{i_j}^∨)` over the whole word.
pub fn b_vector(c: &CartanMatrix, w: &ReducedWord, lambda: &Weight) -> Result<Vec<i64>, WeylError> {
    check_len(c, &lambda.f)?;
    check_len(c, &lambda.r)?;
    for i in 1..=c.rank() {
        if lambda.pairing(c, i) < 0 {
            return Err(WeylError::NonDominant { index: i });
        }
    }
    let r = w.len();
    let mut b = vec![0; r];
    let mut mu = lambda.clone();
    for j in (1..=r).rev() {
        let i = w.letter(j);
        b[j - 1] = mu.pairing(c, i);
        mu = reflect_weight_unchecked(c, i, &mu);
    }
    Ok(b)
}

/// b-vector of the prefix `(i_1, …, i_k)` with top weight `ϖ_{i_k}`.
pub fn b_vector_prefix(c: &CartanMatrix, w: &ReducedWord, k: usize) -> Vec<i64> {
    b_vector(c, &w.prefix(k), &Weight::fundamental(c.rank(), w.letter(k)))
        .expect("fundamental weights are dominant")
}

pub fn euler_form(o: &Orientation, d: &RootVector, e: &RootVector) -> i64 {
    let diag: i64 = d.0.iter().zip(&e.0).map(|(a, b)| a * b).sum();
    let arrows: i64 = o
        .arrows
        .iter()
        .map(|&(s, t, m)| m as i64 * d.0[s - 1] * e.0[t - 1])
        .sum();
    diag - arrows
}

pub fn sym_form(c: &CartanMatrix, d: &RootVector, e: &RootVector) -> i64 {
    let n = c.rank();
    let mut s = 0;
    for i in 1..=n {
        for j in 1..=n {
            s += c.entry(i, j) * d.0[i - 1] * e.0[j - 1];
        }
    }
    s
}

/// Positive real roots up to a height bound.
#[derive(Debug, Clone)]
pub struct AmbientRoots {
    roots: HashSet<RootVector>,
    bound: i64,
}

pub const DEFAULT_HEIGHT_BOUND: i64 = 64;

impl AmbientRoots {
    pub fn generate(c: &CartanMatrix, bound: i64) -> Self {
        let n = c.rank();
        let mut roots = HashSet::new();
        let mut queue = VecDeque::new();
        for i in 1..=n {
            let a = RootVector::simple(n, i);
            roots.insert(a.clone());
            queue.push_back(a);
        }
        while let Some(beta) = queue.pop_front() {
            for i in 1..=n {
                let s = reflect_root_unchecked(c, i, &beta);
                if s.is_positive() && s.height() <= bound && !roots.contains(&s) {
                    roots.insert(s.clone());
                    queue.push_back(s);
                }
            }
        }
        AmbientRoots { roots, bound }
    }

    pub fn contains(&self, v: &RootVector) -> Result<bool, WeylError> {
        if v.height().abs() > self.bound {
            return Err(WeylError::HeightBoundExceeded(v.0.clone(), self.bound));
        }
        Ok(self.roots.contains(v) || self.roots.contains(&-v))
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &RootVector> {
        self.roots.iter()
    }
}

pub fn is_bracket_closed<F>(roots: &[RootVector], ambient: F) -> Result<bool, WeylError>
where
    F: Fn(&RootVector) -> Result<bool, WeylError>,
{
    if let Some(bad) = roots.iter().find(|r| !r.is_positive()) {
        return Err(WeylError::NotPositiveRoot(bad.0.clone()));
    }
    let set: HashSet<&RootVector> = roots.iter().collect();
    for (x, a) in roots.iter().enumerate() {
        for b in &roots[x + 1..] {
            let sum = a + b;
            if ambient(&sum)? && !set.contains(&sum) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `{"rank": n, "edges": [[i, j, m], …], "word": [i_r, …, i_1]}`; edges are read as arrows `i → j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordInput {
    pub rank: usize,
    #[serde(default)]
    pub edges: Vec<(usize, usize, u32)>,
    #[serde(default)]
    pub word: Vec<usize>,
}

impl WordInput {
    pub fn cartan(&self) -> Result<CartanMatrix, WeylError> {
        CartanMatrix::from_edges(self.rank, &self.edges)
    }

    pub fn orientation(&self) -> Result<Orientation, WeylError> {
        Orientation::new(&self.cartan()?, self.edges.clone())
    }

    pub fn build(&self) -> Result<(CartanMatrix, ReducedWord), WeylError> {
        let c = self.cartan()?;
        let w = ReducedWord::new(&c, &self.word)?;
        Ok((c, w))
    }
}
