//! Word sums, the shuffle product, the operators `ρ_λ(f_i)`, `ρ_λ(e_i)` and
//! evaluation of Euler generating functions on one-parameter products.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::cartan_weyl::{b_vector_prefix, CartanMatrix, ReducedWord, Weight};
use crate::laurent::{LaurentError, LaurentPoly, Substitution, VarTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShuffleError {
    #[error("letter {letter} out of range 1..={rank}")]
    LetterOutOfRange { letter: usize, rank: usize },
    #[error("f_{letter}^{power} is not divisible by {power}!")]
    DividedPowerNotIntegral { letter: usize, power: u32 },
    #[error("coefficient {coef} of {monomial} is not an integer")]
    NonIntegralCoefficient { monomial: String, coef: String },
    #[error("not a polynomial after substitution: {0}")]
    NotPolynomialAfterSubstitution(String),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

pub type Word = Vec<usize>;

/// Finite integer combination of words, zero coefficients pruned.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WordSum {
    terms: BTreeMap<Word, BigInt>,
}

impl WordSum {
    pub fn zero() -> Self {
        WordSum::default()
    }

    /// `w[]`.
    pub fn unit() -> Self {
        WordSum::word(Vec::new())
    }

    pub fn word(w: Word) -> Self {
        WordSum::from_terms([(w, BigInt::one())])
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, BigInt)>>(terms: I) -> Self {
        let mut s = WordSum::zero();
        for (w, c) in terms {
            s.add_term(w, c);
        }
        s
    }

    fn add_term(&mut self, w: Word, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(w.clone()).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &[usize]) -> BigInt {
        self.terms.get(w).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add(&self, other: &WordSum) -> WordSum {
        let mut s = self.clone();
        for (w, c) in &other.terms {
            s.add_term(w.clone(), c.clone());
        }
        s
    }

    pub fn scale(&self, c: &BigInt) -> WordSum {
        WordSum::from_terms(self.terms.iter().map(|(w, x)| (w.clone(), x * c)))
    }

    /// Letter multiplicities of every word, when all words share them.
    pub fn content(&self, n: usize) -> Option<Vec<i64>> {
        let mut out: Option<Vec<i64>> = None;
        for w in self.terms.keys() {
            let d = letter_content(w, n);
            match &out {
                None => out = Some(d),
                Some(o) if *o != d => return None,
                _ => {}
            }
        }
        Some(out.unwrap_or_else(|| vec![0; n]))
    }

    /// `u ⧢ v`.
    pub fn shuffle(&self, other: &WordSum) -> WordSum {
        let mut acc: BTreeMap<Word, BigInt> = BTreeMap::new();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let ab = a * b;
                for (w, m) in word_shuffle(u, v) {
                    *acc.entry(w).or_insert_with(BigInt::zero) += &ab * m;
                }
            }
        }
        WordSum::from_terms(acc)
    }
}

impl Serialize for WordSum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            word: &'a Word,
            coef: String,
        }
        let terms: Vec<Term> = self
            .terms
            .iter()
            .map(|(w, c)| Term {
                word: w,
                coef: c.to_string(),
            })
            .collect();
        let mut st = s.serialize_struct("WordSum", 1)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

pub fn letter_content(w: &[usize], n: usize) -> Vec<i64> {
    let mut d = vec![0; n];
    for &j in w {
        d[j - 1] += 1;
    }
    d
}

/// All interleavings of `u` and `v`, with multiplicity.
pub fn word_shuffle(u: &[usize], v: &[usize]) -> BTreeMap<Word, u64> {
    let mut out = BTreeMap::new();
    let mut buf = Vec::with_capacity(u.len() + v.len());
    fn go(u: &[usize], v: &[usize], buf: &mut Word, out: &mut BTreeMap<Word, u64>) {
        if u.is_empty() || v.is_empty() {
            let mut w = buf.clone();
            w.extend_from_slice(u);
            w.extend_from_slice(v);
            *out.entry(w).or_insert(0) += 1;
            return;
        }
        buf.push(u[0]);
        go(&u[1..], v, buf, out);
        buf.pop();
        buf.push(v[0]);
        go(u, &v[1..], buf, out);
        buf.pop();
    }
    go(u, v, &mut buf, &mut out);
    out
}

fn check_letter(c: &CartanMatrix, i: usize) -> Result<(), ShuffleError> {
    if i == 0 || i > c.rank() {
        Err(ShuffleError::LetterOutOfRange {
            letter: i,
            rank: c.rank(),
        })
    } else {
        Ok(())
    }
}

/// `ρ_λ(f_i)(w[j_1..j_k]) = Σ_l (λ − α_{j_1} − … − α_{j_l})(α_i^∨) w[j_1..j_l, i, j_{l+1}..j_k]`.
pub fn rho_f(
    c: &CartanMatrix,
    lambda: &Weight,
    i: usize,
    u: &WordSum,
) -> Result<WordSum, ShuffleError> {
    check_letter(c, i)?;
    let top = lambda.pairing(c, i);
    let mut acc: BTreeMap<Word, BigInt> = BTreeMap::new();
    for (w, coef) in &u.terms {
        let mut pairing = top;
        for l in 0..=w.len() {
            if l > 0 {
                pairing -= c.entry(i, w[l - 1]);
            }
            if pairing != 0 {
                let mut x = Vec::with_capacity(w.len() + 1);
                x.extend_from_slice(&w[..l]);
                x.push(i);
                x.extend_from_slice(&w[l..]);
                *acc.entry(x).or_insert_with(BigInt::zero) += coef * pairing;
            }
        }
    }
    Ok(WordSum::from_terms(acc))
}

/// `ρ_λ(e_i)(w[j_1..j_k]) = δ_{i, j_k} w[j_1..j_{k−1}]`.
pub fn rho_e(
    c: &CartanMatrix,
    _lambda: &Weight,
    i: usize,
    u: &WordSum,
) -> Result<WordSum, ShuffleError> {
    check_letter(c, i)?;
    Ok(WordSum::from_terms(
        u.terms
            .iter()
            .filter(|(w, _)| w.last() == Some(&i))
            .map(|(w, coef)| (w[..w.len() - 1].to_vec(), coef.clone())),
    ))
}

/// `ρ_λ(f_i^{(b)})`: b applications, then exact division by `b!`.
pub fn rho_f_divided(
    c: &CartanMatrix,
    lambda: &Weight,
    i: usize,
    b: u32,
    u: &WordSum,
) -> Result<WordSum, ShuffleError> {
    let mut x = u.clone();
    for _ in 0..b {
        x = rho_f(c, lambda, i, &x)?;
    }
    let fact: BigInt = (1..=b).map(BigInt::from).product();
    let mut out = BTreeMap::new();
    for (w, coef) in x.terms {
        let (q, r) = coef.div_rem(&fact);
        if !r.is_zero() {
            return Err(ShuffleError::DividedPowerNotIntegral {
                letter: i,
                power: b,
            });
        }
        out.insert(w, q);
    }
    Ok(WordSum { terms: out })
}

/// `g_{V_k} = ρ_{ϖ_{i_k}}(f_{i_1}^{(b_1)} ⋯ f_{i_k}^{(b_k)})(w[])`.
pub fn g_v(c: &CartanMatrix, w: &ReducedWord, k: usize) -> Result<WordSum, ShuffleError> {
    let lambda = Weight::fundamental(c.rank(), w.letter(k));
    let b = b_vector_prefix(c, w, k);
    let mut x = WordSum::unit();
    for t in (1..=k).rev() {
        x = rho_f_divided(c, &lambda, w.letter(t), b[t - 1] as u32, &x)?;
    }
    Ok(x)
}

/// `i_k^{b_k} ⋯ i_1^{b_1}`, whose coefficient in `g_{V_k}` is `Π b_j!`.
pub fn refined_word(w: &ReducedWord, k: usize, b: &[i64]) -> Word {
    (1..=k)
        .rev()
        .flat_map(|t| std::iter::repeat_n(w.letter(t), b[t - 1] as usize))
        .collect()
}

/// Every way to read `word` as `j_1^{a_1} ⋯ j_p^{a_p}`.
fn parses(word: &[usize], pattern: &[usize]) -> Vec<Vec<u32>> {
    fn go(word: &[usize], pattern: &[usize], a: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let Some((&j, rest)) = pattern.split_first() else {
            if word.is_empty() {
                out.push(a.clone());
            }
            return;
        };
        let run = word.iter().take_while(|&&x| x == j).count();
        for m in 0..=run {
            a.push(m as u32);
            go(&word[m..], rest, a, out);
            a.pop();
        }
    }
    let mut out = Vec::new();
    go(
        word,
        pattern,
        &mut Vec::with_capacity(pattern.len()),
        &mut out,
    );
    out
}

fn factorial(n: u32) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

/// Exponent `a` to coefficient of `t^a` in `φ(x_{j_1}(t_1) ⋯ x_{j_p}(t_p))`, over the rationals.
pub fn phi_eval_rational(g: &WordSum, pattern: &[usize]) -> BTreeMap<Vec<u32>, BigRational> {
    let mut acc: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
    for (word, coef) in &g.terms {
        for a in parses(word, pattern) {
            let denom: BigInt = a.iter().map(|&x| factorial(x)).product();
            *acc.entry(a).or_insert_with(BigRational::zero) +=
                BigRational::new(coef.clone(), denom);
        }
    }
    acc.retain(|_, c| !c.is_zero());
    acc
}

/// `φ(x_{j_1}(t_1) ⋯ x_{j_p}(t_p))` with `t_q` the `q`-th variable of `vars`.
pub fn phi_eval(
    g: &WordSum,
    pattern: &[usize],
    vars: &VarTable,
) -> Result<LaurentPoly, ShuffleError> {
    if vars.len() != pattern.len() {
        return Err(LaurentError::ArityMismatch {
            expected: pattern.len(),
            found: vars.len(),
        }
        .into());
    }
    let mut terms = Vec::new();
    for (a, c) in phi_eval_rational(g, pattern) {
        let exp: Vec<i32> = a.iter().map(|&x| x as i32).collect();
        if !c.is_integer() {
            let m = LaurentPoly::monomial(vars, exp, 1);
            return Err(ShuffleError::NonIntegralCoefficient {
                monomial: m.to_string(),
                coef: c.to_string(),
            });
        }
        terms.push((exp, c.to_integer()));
    }
    Ok(LaurentPoly::from_terms(vars, terms)?)
}

/// Product of two rational coefficient maps.
pub fn rational_product(
    x: &BTreeMap<Vec<u32>, BigRational>,
    y: &BTreeMap<Vec<u32>, BigRational>,
) -> BTreeMap<Vec<u32>, BigRational> {
    let mut acc: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
    for (a, c) in x {
        for (b, d) in y {
            let e: Vec<u32> = a.iter().zip(b).map(|(p, q)| p + q).collect();
            *acc.entry(e).or_insert_with(BigRational::zero) += c * d;
        }
    }
    acc.retain(|_, c| !c.is_zero());
    acc
}

/// Substitutes `y_k ↦ φ(g_{V_k})` into a Laurent expression in the initial cluster.
/// Only the `g_{V_k}` of variables that occur are computed.
pub fn euler_of_reachable(
    c: &CartanMatrix,
    w: &ReducedWord,
    expr: &LaurentPoly,
    pattern: &[usize],
    vars: &VarTable,
) -> Result<LaurentPoly, ShuffleError> {
    let (lo, hi) = (expr.min_exponents(), expr.max_exponents());
    let images = (1..=w.len())
        .map(|k| {
            if lo[k - 1] == 0 && hi[k - 1] == 0 {
                Ok(LaurentPoly::one(vars))
            } else {
                phi_eval(&g_v(c, w, k)?, pattern, vars)
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    expr.substitute(vars, &images, Substitution::Rational)
        .and_then(LaurentPoly::ensure_polynomial)
        .map_err(|e| ShuffleError::NotPolynomialAfterSubstitution(e.to_string()))
}
