//! Multivariate Laurent polynomials with arbitrary-precision integer coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("variable tables differ")]
    VarTableMismatch,
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("exponent vector has length {found}, expected {expected}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("{dividend} is not divisible by {divisor}")]
    NotDivisible { dividend: String, divisor: String },
    #[error("variable `{0}` occurs with a negative power but its image is not a unit")]
    NonUnitNegativePower(String),
    #[error("substitution result is not a polynomial: {0}")]
    NotPolynomialAfterSubstitution(String),
    #[error("bad coefficient `{0}`")]
    BadCoefficient(String),
}

/// Ordered list of variable names shared by every polynomial built over it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VarTable(Arc<Vec<String>>);

impl VarTable {
    pub fn new<I, S>(names: I) -> Result<Self, LaurentError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut seen = std::collections::HashSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(LaurentError::DuplicateVariable(n.clone()));
            }
        }
        Ok(VarTable(Arc::new(names)))
    }

    /// `prefix1, …, prefixN`.
    pub fn indexed(prefix: &str, n: usize) -> Self {
        VarTable(Arc::new((1..=n).map(|i| format!("{prefix}{i}")).collect()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }
}

impl fmt::Debug for VarTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// Exponent vector ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exponent(pub Vec<i32>);

impl Exponent {
    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn add_exp(a: &[i32], b: &[i32]) -> Vec<i32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub_exp(a: &[i32], b: &[i32]) -> Vec<i32> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Substitution {
    /// Negative powers only on variables whose image is a unit monomial.
    Strict,
    /// Clear denominators, then divide exactly.
    Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MultiDegree {
    Zero,
    Homogeneous(Vec<i64>),
    Inhomogeneous,
}

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    vars: VarTable,
    terms: BTreeMap<Exponent, BigInt>,
}

impl LaurentPoly {
    pub fn zero(vars: &VarTable) -> Self {
        LaurentPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &VarTable, c: impl Into<BigInt>) -> Self {
        Self::monomial(vars, vec![0; vars.len()], c)
    }

    pub fn one(vars: &VarTable) -> Self {
        Self::constant(vars, 1)
    }

    pub fn var(vars: &VarTable, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, e, 1)
    }

    pub fn monomial(vars: &VarTable, exp: Vec<i32>, coef: impl Into<BigInt>) -> Self {
        assert_eq!(exp.len(), vars.len(), "exponent arity");
        let coef = coef.into();
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert(Exponent(exp), coef);
        }
        LaurentPoly {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn from_terms<I>(vars: &VarTable, terms: I) -> Result<Self, LaurentError>
    where
        I: IntoIterator<Item = (Vec<i32>, BigInt)>,
    {
        let mut acc: BTreeMap<Exponent, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != vars.len() {
                return Err(LaurentError::ArityMismatch {
                    expected: vars.len(),
                    found: e.len(),
                });
            }
            *acc.entry(Exponent(e)).or_insert_with(BigInt::zero) += c;
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(LaurentPoly {
            vars: vars.clone(),
            terms: acc,
        })
    }

    fn from_map(vars: &VarTable, map: HashMap<Vec<i32>, BigInt>) -> Self {
        let terms = map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (Exponent(e), c))
            .collect();
        LaurentPoly {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn vars(&self) -> &VarTable {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(e, c)| c.is_one() && e.0.iter().all(|&x| x == 0))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&[i32], &BigInt)> {
        self.terms.iter().map(|(e, c)| (e.0.as_slice(), c))
    }

    pub fn coefficient(&self, exp: &[i32]) -> BigInt {
        self.terms
            .get(&Exponent(exp.to_vec()))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn leading_term(&self) -> Option<(&[i32], &BigInt)> {
        self.terms
            .iter()
            .next_back()
            .map(|(e, c)| (e.0.as_slice(), c))
    }

    /// Single term with coefficient ±1.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms.values().all(|c| c.abs().is_one())
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.0.iter().all(|&x| x >= 0))
    }

    /// Componentwise minimum exponent; zero vector for the zero polynomial.
    pub fn min_exponents(&self) -> Vec<i32> {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return vec![0; self.vars.len()];
        };
        let mut m = first.0.clone();
        for e in it {
            for (a, b) in m.iter_mut().zip(&e.0) {
                *a = (*a).min(*b);
            }
        }
        m
    }

    pub fn max_exponents(&self) -> Vec<i32> {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return vec![0; self.vars.len()];
        };
        let mut m = first.0.clone();
        for e in it {
            for (a, b) in m.iter_mut().zip(&e.0) {
                *a = (*a).max(*b);
            }
        }
        m
    }

    fn check_vars(&self, other: &Self) -> Result<(), LaurentError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(LaurentError::VarTableMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_vars(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let slot = terms.entry(e.clone()).or_insert_with(BigInt::zero);
            *slot += c;
            if slot.is_zero() {
                terms.remove(e);
            }
        }
        Ok(LaurentPoly {
            vars: self.vars.clone(),
            terms,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, LaurentError> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_vars(other)?;
        let mut acc: HashMap<Vec<i32>, BigInt> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                *acc.entry(add_exp(&ea.0, &eb.0))
                    .or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        Ok(Self::from_map(&self.vars, acc))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    /// Multiply by the monomial `y^shift`.
    pub fn shift(&self, shift: &[i32]) -> Self {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (Exponent(add_exp(&e.0, shift)), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one(&self.vars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Inverse of a unit monomial.
    pub fn unit_inverse(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        Some(LaurentPoly {
            vars: self.vars.clone(),
            terms: BTreeMap::from([(Exponent(e.0.iter().map(|x| -x).collect()), c.clone())]),
        })
    }

    /// Integer power; negative powers only for units.
    pub fn powi(&self, n: i64) -> Option<Self> {
        if n >= 0 {
            Some(self.pow(n as u32))
        } else {
            self.unit_inverse().map(|u| u.pow((-n) as u32))
        }
    }

    /// The unique `q` with `q * divisor == self`.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self, LaurentError> {
        self.check_vars(divisor)?;
        if divisor.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(&self.vars));
        }
        let not_divisible = || LaurentError::NotDivisible {
            dividend: self.to_string(),
            divisor: divisor.to_string(),
        };
        if divisor.terms.len() == 1 {
            let (be, bc) = divisor.terms.iter().next().unwrap();
            let mut terms = BTreeMap::new();
            for (e, c) in &self.terms {
                let (q, r) = c.div_rem(bc);
                if !r.is_zero() {
                    return Err(not_divisible());
                }
                terms.insert(Exponent(sub_exp(&e.0, &be.0)), q);
            }
            return Ok(LaurentPoly {
                vars: self.vars.clone(),
                terms,
            });
        }
        // Minimal exponents add under multiplication, so the shifted problem is polynomial.
        let ma = self.min_exponents();
        let mb = divisor.min_exponents();
        let neg = |m: &[i32]| m.iter().map(|x| -x).collect::<Vec<_>>();
        let a = self.shift(&neg(&ma));
        let b = divisor.shift(&neg(&mb));
        let amax = a.max_exponents();
        let bmax = b.max_exponents();
        if amax.iter().zip(&bmax).any(|(x, y)| x < y) {
            return Err(not_divisible());
        }
        let (lb, lc) = b.terms.iter().next_back().unwrap();
        let lb = lb.0.clone();
        let lc = lc.clone();
        let mut rem = a.terms;
        let mut quot: BTreeMap<Exponent, BigInt> = BTreeMap::new();
        while let Some((e, c)) = rem.iter().next_back() {
            let diff = sub_exp(&e.0, &lb);
            if diff.iter().any(|&x| x < 0) {
                return Err(not_divisible());
            }
            let (qc, r) = c.div_rem(&lc);
            if !r.is_zero() {
                return Err(not_divisible());
            }
            for (be, bc) in &b.terms {
                let key = Exponent(add_exp(&diff, &be.0));
                let slot = rem.entry(key.clone()).or_insert_with(BigInt::zero);
                *slot -= &qc * bc;
                if slot.is_zero() {
                    rem.remove(&key);
                }
            }
            quot.insert(Exponent(diff), qc);
        }
        let q = LaurentPoly {
            vars: self.vars.clone(),
            terms: quot,
        };
        Ok(q.shift(&sub_exp(&ma, &mb)))
    }

    /// Replace variable `j` by `images[j]`; images live over `target`.
    pub fn substitute(
        &self,
        target: &VarTable,
        images: &[LaurentPoly],
        mode: Substitution,
    ) -> Result<Self, LaurentError> {
        if images.len() != self.vars.len() {
            return Err(LaurentError::ArityMismatch {
                expected: self.vars.len(),
                found: images.len(),
            });
        }
        if images.iter().any(|p| p.vars != *target) {
            return Err(LaurentError::VarTableMismatch);
        }
        let n = self.vars.len();
        let min = self.min_exponents();
        let max = self.max_exponents();
        let inverses: Vec<Option<LaurentPoly>> = images.iter().map(|p| p.unit_inverse()).collect();
        // Denominator exponent per variable with a non-unit image.
        let mut denom = vec![0i32; n];
        for j in 0..n {
            if min[j] < 0 && inverses[j].is_none() {
                match mode {
                    Substitution::Strict => {
                        return Err(LaurentError::NonUnitNegativePower(
                            self.vars.name(j).to_string(),
                        ))
                    }
                    Substitution::Rational => denom[j] = -min[j],
                }
            }
        }
        // powers[j][e - lo[j]] = images[j]^e (with the denominator shift folded in)
        let mut powers: Vec<Vec<LaurentPoly>> = Vec::with_capacity(n);
        let mut lo = vec![0i32; n];
        for j in 0..n {
            let (a, b) = (min[j] + denom[j], max[j] + denom[j]);
            lo[j] = a;
            let mut row = Vec::with_capacity((b - a + 1).max(0) as usize);
            if self.terms.is_empty() {
                powers.push(row);
                continue;
            }
            let base = if a < 0 {
                inverses[j].as_ref().unwrap().pow((-a) as u32)
            } else {
                images[j].pow(a as u32)
            };
            let mut cur = base;
            for e in a..=b {
                row.push(cur.clone());
                if e < b {
                    cur = &cur * &images[j];
                }
            }
            powers.push(row);
        }
        let mut acc: HashMap<Vec<i32>, BigInt> = HashMap::new();
        for (e, c) in &self.terms {
            let mut term = LaurentPoly::constant(target, c.clone());
            for j in 0..n {
                let ej = e.0[j] + denom[j];
                if ej == 0 {
                    continue;
                }
                term = &term * &powers[j][(ej - lo[j]) as usize];
            }
            for (te, tc) in term.terms {
                *acc.entry(te.0).or_insert_with(BigInt::zero) += tc;
            }
        }
        let numerator = LaurentPoly::from_map(target, acc);
        if denom.iter().all(|&d| d == 0) {
            return Ok(numerator);
        }
        let mut d = LaurentPoly::one(target);
        for j in 0..n {
            if denom[j] > 0 {
                d = &d * &images[j].pow(denom[j] as u32);
            }
        }
        numerator.exact_div(&d).map_err(|_| {
            LaurentError::NotPolynomialAfterSubstitution(format!("({numerator}) / ({d})"))
        })
    }

    /// Fails with `NotPolynomialAfterSubstitution` when a negative exponent is present.
    pub fn ensure_polynomial(self) -> Result<Self, LaurentError> {
        if self.is_polynomial() {
            Ok(self)
        } else {
            Err(LaurentError::NotPolynomialAfterSubstitution(
                self.to_string(),
            ))
        }
    }

    pub fn multidegree(&self, grading: &[Vec<i64>]) -> MultiDegree {
        let mut deg: Option<Vec<i64>> = None;
        for e in self.terms.keys() {
            let mut d = vec![0i64; grading.first().map_or(0, Vec::len)];
            for (x, g) in e.0.iter().zip(grading) {
                for (slot, gi) in d.iter_mut().zip(g) {
                    *slot += *x as i64 * gi;
                }
            }
            match &deg {
                None => deg = Some(d),
                Some(prev) if *prev != d => return MultiDegree::Inhomogeneous,
                _ => {}
            }
        }
        match deg {
            None => MultiDegree::Zero,
            Some(d) => MultiDegree::Homogeneous(d),
        }
    }

    /// Same polynomial over a larger table; `positions[j]` is the new slot of variable `j`.
    pub fn embed(&self, target: &VarTable, positions: &[usize]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut ne = vec![0; target.len()];
                for (j, &p) in positions.iter().enumerate() {
                    ne[p] += e.0[j];
                }
                (Exponent(ne), c.clone())
            })
            .collect();
        LaurentPoly {
            vars: target.clone(),
            terms,
        }
    }

    /// Set the listed variables to 1.
    pub fn specialize_to_one(&self, which: &[usize]) -> Self {
        let mut acc: HashMap<Vec<i32>, BigInt> = HashMap::new();
        for (e, c) in &self.terms {
            let mut ne = e.0.clone();
            for &j in which {
                ne[j] = 0;
            }
            *acc.entry(ne).or_insert_with(BigInt::zero) += c;
        }
        Self::from_map(&self.vars, acc)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let is_const = e.0.iter().all(|&x| x == 0);
            let mag = c.abs();
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut first = true;
            if !mag.is_one() || is_const {
                write!(f, "{mag}")?;
                first = false;
            }
            for (j, &x) in e.0.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{}", self.vars.name(j))?;
                if x != 1 {
                    write!(f, "^{x}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

// Operators panic on mismatched tables; use the `try_` forms where that can happen.
impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_add(rhs).expect("variable tables differ")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_sub(rhs).expect("variable tables differ")
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_mul(rhs).expect("variable tables differ")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    exp: Vec<i32>,
    coef: String,
}

#[derive(Serialize, Deserialize)]
struct PolyDoc {
    vars: Vec<String>,
    terms: Vec<TermDoc>,
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyDoc {
            vars: self.vars.names().to_vec(),
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(e, c)| TermDoc {
                    exp: e.0.clone(),
                    coef: c.to_string(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let doc = PolyDoc::deserialize(d)?;
        let vars = VarTable::new(doc.vars).map_err(D::Error::custom)?;
        let mut terms = Vec::with_capacity(doc.terms.len());
        for t in doc.terms {
            let c: BigInt = t
                .coef
                .parse()
                .map_err(|_| D::Error::custom(LaurentError::BadCoefficient(t.coef.clone())))?;
            terms.push((t.exp, c));
        }
        LaurentPoly::from_terms(&vars, terms).map_err(D::Error::custom)
    }
}
