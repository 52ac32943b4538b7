//! The mutation sequence from `V_i` to `T_i` with interval labels, determinantal
//! identities, starred sequences and dual PBW expansions.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::cartan_weyl::{beta_sequence, CartanMatrix, ReducedWord};
use crate::dimvec::{
    as_interval, hom_tables, initial_delta_labels, mutate_delta_dimvec, DimvecError,
};
use crate::laurent::{LaurentError, LaurentPoly, Substitution, VarTable};
use crate::quiver_seed::{gamma_i, CoeffMode, ExchangeMatrix, Quiver, Seed, SeedError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("step {step} at vertex {vertex}: observed {observed}, expected {expected}")]
    StepMismatch {
        step: usize,
        vertex: usize,
        observed: String,
        expected: String,
    },
    #[error("identity for (s, k) = ({s}, {k}) fails: {detail}")]
    IdentityFails { s: usize, k: usize, detail: String },
    #[error("identity needs i_s = i_k and k <= s < s+ <= r, got (s, k) = ({s}, {k})")]
    InvalidIdentity { s: usize, k: usize },
    #[error("star is undefined at {0}")]
    StarUndefined(usize),
    #[error("no cluster variable recorded for {0}")]
    MissingLabel(IntervalLabel),
    #[error("final quiver: {0}")]
    FinalQuiver(String),
    #[error("position {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("PBW expansion is not a polynomial: {0}")]
    NotPolynomialAfterSubstitution(String),
    #[error(transparent)]
    Seed(#[from] SeedError),
    #[error(transparent)]
    Dimvec(#[from] DimvecError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// `M[b, a]` with `i_a = i_b`, `a ≤ b`, or the empty interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IntervalLabel {
    Unit,
    M { b: usize, a: usize },
}

impl IntervalLabel {
    /// `M[b, a]`, or `Unit` when `a > b` or `a` runs off the word.
    pub fn new(w: &ReducedWord, b: usize, a: usize) -> Self {
        if a > b || a == 0 || b > w.len() {
            IntervalLabel::Unit
        } else {
            debug_assert_eq!(w.letter(a), w.letter(b));
            IntervalLabel::M { b, a }
        }
    }

    pub fn pair(&self) -> Option<(usize, usize)> {
        match *self {
            IntervalLabel::Unit => None,
            IntervalLabel::M { b, a } => Some((b, a)),
        }
    }

    /// Indicator of `{a, a⁺, …, b}`.
    pub fn delta_vector(&self, w: &ReducedWord) -> Vec<i64> {
        let mut v = vec![0; w.len()];
        if let IntervalLabel::M { b, a } = *self {
            let mut s = a;
            while s <= b {
                v[s - 1] = 1;
                s = w.plus(s);
            }
        }
        v
    }

    /// `Σ β` over the interval.
    pub fn dimension(&self, c: &CartanMatrix, w: &ReducedWord) -> Vec<i64> {
        let betas = beta_sequence(c, w);
        let mut d = vec![0; c.rank()];
        for (k, x) in self.delta_vector(w).iter().enumerate() {
            if *x != 0 {
                for (slot, v) in d.iter_mut().zip(&betas[k].0) {
                    *slot += v;
                }
            }
        }
        d
    }
}

impl fmt::Display for IntervalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntervalLabel::Unit => write!(f, "1"),
            IntervalLabel::M { b, a } => write!(f, "M[{b},{a}]"),
        }
    }
}

impl Serialize for IntervalLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.pair() {
            None => s.serialize_none(),
            Some((b, a)) => {
                let mut seq = s.serialize_seq(Some(2))?;
                seq.serialize_element(&b)?;
                seq.serialize_element(&a)?;
                seq.end()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlanStep {
    pub step: usize,
    #[serde(skip)]
    pub group: usize,
    pub vertex: usize,
    pub before: IntervalLabel,
    pub after: IntervalLabel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MutationPlan {
    pub steps: Vec<PlanStep>,
}

impl MutationPlan {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Vertices mutated in each block `k = 1..=r`, in application order.
    pub fn groups(&self, r: usize) -> Vec<Vec<usize>> {
        let mut g = vec![Vec::new(); r];
        for s in &self.steps {
            g[s.group - 1].push(s.vertex);
        }
        g
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.vertex).collect()
    }
}

/// `Σ_j t_j (t_j − 1) / 2`.
pub fn plan_length(w: &ReducedWord) -> usize {
    (1..=w.rank())
        .map(|j| w.t(j) * w.t(j).saturating_sub(1) / 2)
        .sum()
}

pub fn mu_i_plan(w: &ReducedWord) -> MutationPlan {
    let mut steps = Vec::new();
    for k in 1..=w.len() {
        let j = w.letter(k);
        let rk = (w.t(j) - 1).saturating_sub(w.count_before(k, j));
        let kmin = w.kmin(k);
        for m in 0..rk {
            steps.push(PlanStep {
                step: steps.len() + 1,
                group: k,
                vertex: w.advance(kmin, m),
                before: IntervalLabel::new(w, w.advance(k, m), k),
                after: IntervalLabel::new(w, w.advance(k, m + 1), w.plus(k)),
            });
        }
    }
    MutationPlan { steps }
}

/// One instance of the generalized determinantal identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeterminantalIdentity {
    pub s: usize,
    pub k: usize,
    /// `M[s, k] · M[s⁺, k⁺]`
    pub lhs: [IntervalLabel; 2],
    /// `M[s⁺, k] · M[s, k⁺]`
    pub first: Vec<(IntervalLabel, u32)>,
    /// Product over the ordinary-arrow neighbours.
    pub second: Vec<(IntervalLabel, u32)>,
}

fn normalize(factors: Vec<(IntervalLabel, u32)>) -> Vec<(IntervalLabel, u32)> {
    let mut m: BTreeMap<IntervalLabel, u32> = BTreeMap::new();
    for (l, e) in factors {
        if l != IntervalLabel::Unit && e > 0 {
            *m.entry(l).or_insert(0) += e;
        }
    }
    m.into_iter().collect()
}

fn show(factors: &[(IntervalLabel, u32)]) -> String {
    if factors.is_empty() {
        return "1".into();
    }
    factors
        .iter()
        .map(|(l, e)| {
            if *e == 1 {
                l.to_string()
            } else {
                format!("{l}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("·")
}

impl fmt::Display for DeterminantalIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lhs = normalize(self.lhs.iter().map(|l| (*l, 1)).collect());
        write!(
            f,
            "{} = {} + {}",
            show(&lhs),
            show(&self.first),
            show(&self.second)
        )
    }
}

impl DeterminantalIdentity {
    pub fn labels(&self) -> Vec<IntervalLabel> {
        let mut v: Vec<IntervalLabel> = self.lhs.to_vec();
        v.extend(self.first.iter().map(|x| x.0));
        v.extend(self.second.iter().map(|x| x.0));
        v.retain(|l| *l != IntervalLabel::Unit);
        v
    }

    fn product<F>(
        &self,
        factors: &[(IntervalLabel, u32)],
        vars: &VarTable,
        get: &F,
    ) -> Result<LaurentPoly, IntervalError>
    where
        F: Fn(IntervalLabel) -> Option<LaurentPoly>,
    {
        let mut p = LaurentPoly::one(vars);
        for &(l, e) in factors {
            let x = get(l).ok_or(IntervalError::MissingLabel(l))?;
            p = &p * &x.pow(e);
        }
        Ok(p)
    }

    /// Both sides evaluated through `get`; `Unit` maps to 1.
    pub fn sides<F>(
        &self,
        vars: &VarTable,
        get: F,
    ) -> Result<(LaurentPoly, LaurentPoly), IntervalError>
    where
        F: Fn(IntervalLabel) -> Option<LaurentPoly>,
    {
        let lhs = self.product(
            &normalize(self.lhs.iter().map(|l| (*l, 1)).collect()),
            vars,
            &get,
        )?;
        let rhs =
            &self.product(&self.first, vars, &get)? + &self.product(&self.second, vars, &get)?;
        Ok((lhs, rhs))
    }

    pub fn verify<F>(&self, vars: &VarTable, get: F) -> Result<(), IntervalError>
    where
        F: Fn(IntervalLabel) -> Option<LaurentPoly>,
    {
        let (lhs, rhs) = self.sides(vars, get)?;
        if lhs == rhs {
            Ok(())
        } else {
            Err(IntervalError::IdentityFails {
                s: self.s,
                k: self.k,
                detail: format!("{self}: lhs - rhs = {}", &lhs - &rhs),
            })
        }
    }
}

/// `M[s, k]·M[s⁺, k⁺] = M[s⁺, k]·M[s, k⁺] + Π_t M[t, t_min^(k[i_t])]^q · Π_l M[l, l_min^(k[i_l])]^q`.
pub fn determinantal_identity(
    c: &CartanMatrix,
    w: &ReducedWord,
    k: usize,
    s: usize,
) -> Result<DeterminantalIdentity, IntervalError> {
    let r = w.len();
    if k == 0 || s > r || k > s || w.letter(k) != w.letter(s) || w.plus(s) > r {
        return Err(IntervalError::InvalidIdentity { s, k });
    }
    let sp = w.plus(s);
    let kp = w.plus(k);
    let js = w.letter(s);
    let label_at = |x: usize| {
        let a = w.advance(w.kmin(x), w.count_before(k, w.letter(x)));
        IntervalLabel::new(w, x, a)
    };
    let mut second = Vec::new();
    for t in s + 1..sp {
        if w.plus(t) >= sp {
            second.push((label_at(t), c.q(js, w.letter(t)) as u32));
        }
    }
    let smin = w.kmin(s);
    for l in smin + 1..s {
        if w.plus(l) >= sp {
            second.push((label_at(l), c.q(js, w.letter(l)) as u32));
        }
    }
    Ok(DeterminantalIdentity {
        s,
        k,
        lhs: [IntervalLabel::new(w, s, k), IntervalLabel::new(w, sp, kp)],
        first: normalize(vec![
            (IntervalLabel::new(w, sp, k), 1),
            (IntervalLabel::new(w, s, kp), 1),
        ]),
        second: normalize(second),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct StepRecord {
    pub step: usize,
    pub vertex: usize,
    pub before: IntervalLabel,
    pub after: IntervalLabel,
    #[serde(skip)]
    pub identity: DeterminantalIdentity,
}

#[derive(Debug, Clone)]
pub struct MuReport {
    pub steps: Vec<StepRecord>,
    /// Label carried by each vertex at the end.
    pub final_labels: Vec<IntervalLabel>,
    pub matrix: ExchangeMatrix,
    /// Cluster variable of every label met along the way, in the initial variables; empty unless tracked.
    pub variables: BTreeMap<IntervalLabel, LaurentPoly>,
    pub vars: VarTable,
}

impl MuReport {
    pub fn variable(&self, l: IntervalLabel) -> Option<LaurentPoly> {
        match l {
            IntervalLabel::Unit => Some(LaurentPoly::one(&self.vars)),
            _ => self.variables.get(&l).cloned(),
        }
    }

    /// Checks every recorded identity on the tracked variables.
    pub fn verify_identities(&self) -> Result<usize, IntervalError> {
        for st in &self.steps {
            st.identity.verify(&self.vars, |l| self.variable(l))?;
        }
        Ok(self.steps.len())
    }
}

fn label_multiset(
    b: &ExchangeMatrix,
    labels: &[IntervalLabel],
    k: usize,
    sign: i64,
) -> Vec<(IntervalLabel, u32)> {
    normalize(
        (1..=b.size())
            .filter_map(|i| {
                let x = b.entry(i, k) * sign;
                (x > 0).then_some((labels[i - 1], x as u32))
            })
            .collect(),
    )
}

fn degree(
    dims: &HashMap<IntervalLabel, Vec<i64>>,
    factors: &[(IntervalLabel, u32)],
    n: usize,
) -> Vec<i64> {
    let mut d = vec![0; n];
    for (l, e) in factors {
        for (slot, x) in d.iter_mut().zip(&dims[l]) {
            *slot += i64::from(*e) * x;
        }
    }
    d
}

/// Execute the plan on the quiver and on Δ-labels together, checking every exchange.
/// With `track`, cluster variables are also computed in the initial variables.
pub fn run_mu_i(c: &CartanMatrix, w: &ReducedWord, track: bool) -> Result<MuReport, IntervalError> {
    run_plan(c, w, &mu_i_plan(w), track)
}

pub fn run_plan(
    c: &CartanMatrix,
    w: &ReducedWord,
    plan: &MutationPlan,
    track: bool,
) -> Result<MuReport, IntervalError> {
    let r = w.len();
    let tables = hom_tables(c, w);
    let mut seed = Seed::from_quiver(&gamma_i(c, w), CoeffMode::Frozen);
    let vars = seed.vars().clone();
    let mut matrix = seed.matrix().clone();
    let mut delta = initial_delta_labels(w);
    let mut labels: Vec<IntervalLabel> = (1..=r)
        .map(|k| IntervalLabel::new(w, k, w.kmin(k)))
        .collect();
    let mut variables = BTreeMap::new();
    if track {
        for (k, l) in labels.iter().enumerate() {
            variables.insert(*l, seed.variable(k + 1).clone());
        }
    }
    let mut dims: HashMap<IntervalLabel, Vec<i64>> = HashMap::new();
    let mut steps = Vec::new();
    for st in &plan.steps {
        let v = st.vertex;
        let mismatch = |observed: String, expected: String| IntervalError::StepMismatch {
            step: st.step,
            vertex: v,
            observed,
            expected,
        };
        if labels[v - 1] != st.before {
            return Err(mismatch(labels[v - 1].to_string(), st.before.to_string()));
        }
        let (IntervalLabel::M { b: s, a: k }, IntervalLabel::M { .. }) = (st.before, st.after)
        else {
            return Err(mismatch("unit label".into(), "interval".into()));
        };
        let identity = determinantal_identity(c, w, k, s)?;
        if identity.lhs != [st.before, st.after] {
            return Err(mismatch(
                format!("{} -> {}", st.before, st.after),
                format!("{} -> {}", identity.lhs[0], identity.lhs[1]),
            ));
        }
        let mut observed = [
            label_multiset(&matrix, &labels, v, 1),
            label_multiset(&matrix, &labels, v, -1),
        ];
        let mut expected = [identity.first.clone(), identity.second.clone()];
        observed.sort();
        expected.sort();
        if observed != expected {
            return Err(mismatch(
                format!("{} + {}", show(&observed[0]), show(&observed[1])),
                format!("{} + {}", show(&expected[0]), show(&expected[1])),
            ));
        }
        for l in identity.labels() {
            dims.entry(l).or_insert_with(|| l.dimension(c, w));
        }
        let (d1, d2) = (
            degree(&dims, &observed[0], c.rank()),
            degree(&dims, &observed[1], c.rank()),
        );
        if d1 != d2 {
            return Err(mismatch(
                format!("degrees {d1:?} and {d2:?}"),
                "equal degrees".into(),
            ));
        }
        let dstep = mutate_delta_dimvec(&delta, &matrix, v, &tables.d_delta)?;
        let want = st.after.delta_vector(w);
        if dstep.new_label != want || as_interval(w, &dstep.new_label).is_none() {
            return Err(mismatch(
                format!("{:?}", dstep.new_label),
                format!("{want:?}"),
            ));
        }
        if track {
            seed = seed.mutate(v)?;
            variables.insert(st.after, seed.variable(v).clone());
        }
        matrix = dstep.matrix;
        delta = dstep.labels;
        labels[v - 1] = st.after;
        steps.push(StepRecord {
            step: st.step,
            vertex: v,
            before: st.before,
            after: st.after,
            identity,
        });
    }
    Ok(MuReport {
        steps,
        final_labels: labels,
        matrix,
        variables,
        vars,
    })
}

/// Checks that every vertex carries some `M[k_max, k]` and that each
/// horizontal arrow now runs from `M[k_max, k⁺]` to `M[k_max, k]`.
pub fn check_final(w: &ReducedWord, report: &MuReport) -> Result<(), IntervalError> {
    let r = w.len();
    let mut got = report.final_labels.clone();
    let mut want: Vec<IntervalLabel> = (1..=r)
        .map(|k| IntervalLabel::new(w, w.kmax(k), k))
        .collect();
    got.sort();
    want.sort();
    if got != want {
        return Err(IntervalError::FinalQuiver(format!(
            "labels {got:?}, expected {want:?}"
        )));
    }
    let vertex_of: HashMap<IntervalLabel, usize> = report
        .final_labels
        .iter()
        .enumerate()
        .map(|(i, l)| (*l, i + 1))
        .collect();
    let q = Quiver::from_matrix(&report.matrix);
    for k in 1..=r {
        let kp = w.plus(k);
        if kp > r {
            continue;
        }
        let long = vertex_of[&IntervalLabel::new(w, w.kmax(k), k)];
        let short = vertex_of[&IntervalLabel::new(w, w.kmax(k), kp)];
        if q.is_frozen(long) && q.is_frozen(short) {
            continue;
        }
        if q.arrow_count(short, long) != 1 || q.arrow_count(long, short) != 0 {
            return Err(IntervalError::FinalQuiver(format!(
                "horizontal arrow between vertices {short} and {long} not reversed"
            )));
        }
    }
    Ok(())
}

/// `(k_min^{(m)})^* = k_min^{(t_j − 2 − m)}`.
pub fn star(w: &ReducedWord, k: usize) -> Result<usize, IntervalError> {
    if k == 0 || k > w.len() {
        return Err(IntervalError::IndexOutOfRange {
            index: k,
            bound: w.len(),
        });
    }
    if w.plus(k) > w.len() {
        return Err(IntervalError::StarUndefined(k));
    }
    let j = w.letter(k);
    let m = w.count_before(k, j);
    Ok(w.advance(w.kmin(k), w.t(j) - 2 - m))
}

pub fn shift_sequence(w: &ReducedWord, path: &[usize]) -> Result<Vec<usize>, IntervalError> {
    path.iter().map(|&k| star(w, k)).collect()
}

/// Expansions in `m_1, …, m_r` standing for the modules `M_k`.
pub struct PbwExpander<'a> {
    c: &'a CartanMatrix,
    w: &'a ReducedWord,
    vars: VarTable,
    memo: HashMap<IntervalLabel, LaurentPoly>,
}

impl<'a> PbwExpander<'a> {
    pub fn new(c: &'a CartanMatrix, w: &'a ReducedWord) -> Self {
        PbwExpander {
            c,
            w,
            vars: VarTable::indexed("m", w.len()),
            memo: HashMap::new(),
        }
    }

    pub fn vars(&self) -> &VarTable {
        &self.vars
    }

    /// `M[b⁺, a] = (M[b, a]·M[b⁺, a⁺] − Π) / M[b, a⁺]`, with `M[b, b] = m_b`.
    pub fn label(&mut self, l: IntervalLabel) -> Result<LaurentPoly, IntervalError> {
        let (top, a) = match l {
            IntervalLabel::Unit => return Ok(LaurentPoly::one(&self.vars)),
            IntervalLabel::M { b, a } => (b, a),
        };
        if let Some(p) = self.memo.get(&l) {
            return Ok(p.clone());
        }
        let value = if top == a {
            LaurentPoly::var(&self.vars, top - 1)
        } else {
            let b = self.w.minus(top);
            let id = determinantal_identity(self.c, self.w, a, b)?;
            let x = self.label(IntervalLabel::new(self.w, b, a))?;
            let y = self.label(IntervalLabel::new(self.w, top, self.w.plus(a)))?;
            let z = self.label(IntervalLabel::new(self.w, b, self.w.plus(a)))?;
            let mut pi = LaurentPoly::one(&self.vars);
            for &(f, e) in &id.second {
                pi = &pi * &self.label(f)?.pow(e);
            }
            let num = &(&x * &y) - &pi;
            num.exact_div(&z)
                .ok()
                .filter(LaurentPoly::is_polynomial)
                .ok_or_else(|| {
                    IntervalError::NotPolynomialAfterSubstitution(format!("{l}: ({num}) / ({z})"))
                })?
        };
        self.memo.insert(l, value.clone());
        Ok(value)
    }

    /// `V_k = M[k, k_min]`.
    pub fn v(&mut self, k: usize) -> Result<LaurentPoly, IntervalError> {
        self.label(IntervalLabel::new(self.w, k, self.w.kmin(k)))
    }

    /// Substitute `y_k ↦ V_k` into a Laurent expression in the initial cluster.
    pub fn laurent(&mut self, expr: &LaurentPoly) -> Result<LaurentPoly, IntervalError> {
        let images = (1..=self.w.len())
            .map(|k| self.v(k))
            .collect::<Result<Vec<_>, _>>()?;
        expr.substitute(&self.vars, &images, Substitution::Rational)
            .and_then(LaurentPoly::ensure_polynomial)
            .map_err(|e| IntervalError::NotPolynomialAfterSubstitution(e.to_string()))
    }

    /// Grading `m_k ↦ β_k`.
    pub fn grading(&self) -> Vec<Vec<i64>> {
        beta_sequence(self.c, self.w)
            .into_iter()
            .map(|b| b.0)
            .collect()
    }
}

pub fn pbw_expand(
    c: &CartanMatrix,
    w: &ReducedWord,
    l: IntervalLabel,
) -> Result<LaurentPoly, IntervalError> {
    PbwExpander::new(c, w).label(l)
}
