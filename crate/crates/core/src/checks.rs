//! Randomized invariant suites shared by the test harness and the `selftest` command.

use num_bigint::BigInt;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cartan_weyl::{CartanMatrix, ReducedWord};
use crate::dimvec::{hom_tables, initial_dimvec_labels, mutate_dimvec};
use crate::interval::{check_final, mu_i_plan, plan_length, run_plan};
use crate::quiver_seed::{
    b_q_seed, explore, gamma_i, CoeffMode, ExchangeMatrix, MemoryRegistry, Seed,
};
use crate::shuffle::{phi_eval_rational, rational_product, WordSum};
use crate::Error;

pub const DEFAULT_SEED: u64 = 20_240_611;

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &'static str, cases: usize, failure: Option<String>) -> Self {
        CheckOutcome {
            name,
            cases,
            passed: failure.is_none(),
            detail: failure.unwrap_or_default(),
        }
    }
}

/// Case counts for each suite.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Budget {
    pub mutations: usize,
    pub walks: usize,
    pub walk_depth: usize,
    pub max_word: usize,
    pub mu_runs: usize,
    pub shuffles: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            mutations: 1000,
            walks: 60,
            walk_depth: 8,
            max_word: 8,
            mu_runs: 60,
            shuffles: 200,
        }
    }
}

pub fn random_cartan<R: Rng>(rng: &mut R, max_rank: usize, max_mult: u32) -> CartanMatrix {
    let n = rng.random_range(2..=max_rank);
    let mut edges = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let m = rng.random_range(0..=max_mult);
            if m > 0 {
                edges.push((i, j, m));
            }
        }
    }
    CartanMatrix::from_edges(n, &edges).expect("valid edges")
}

/// Random simply-laced tree on at most `max_rank` vertices.
pub fn random_tree_cartan<R: Rng>(rng: &mut R, max_rank: usize) -> CartanMatrix {
    let n = rng.random_range(2..=max_rank);
    let edges: Vec<_> = (2..=n).map(|j| (rng.random_range(1..j), j, 1)).collect();
    CartanMatrix::from_edges(n, &edges).expect("valid edges")
}

/// Greedily keeps random letters that extend a reduced word.
pub fn random_reduced_word<R: Rng>(rng: &mut R, c: &CartanMatrix, max_len: usize) -> ReducedWord {
    let mut seq = Vec::new();
    for _ in 0..3 * max_len {
        if seq.len() == max_len {
            break;
        }
        seq.push(rng.random_range(1..=c.rank()));
        if ReducedWord::from_sequence(c, &seq).is_err() {
            seq.pop();
        }
    }
    ReducedWord::from_sequence(c, &seq).expect("reduced by construction")
}

pub fn random_exchange_matrix<R: Rng>(rng: &mut R, size: usize) -> ExchangeMatrix {
    let mut b = vec![vec![0i64; size]; size];
    for i in 0..size {
        for j in i + 1..size {
            let x = rng.random_range(-2..=2);
            b[i][j] = x;
            b[j][i] = -x;
        }
    }
    let frozen = (0..size).map(|i| i > 0 && rng.random_bool(0.3)).collect();
    ExchangeMatrix::new(b, frozen).expect("skew by construction")
}

fn random_word_sum<R: Rng>(rng: &mut R) -> WordSum {
    let terms = (0..rng.random_range(0..4))
        .map(|_| {
            let len = rng.random_range(0..4);
            let w: Vec<usize> = (0..len).map(|_| rng.random_range(1..=3)).collect();
            (w, BigInt::from(rng.random_range(-3..=3)))
        })
        .collect::<Vec<_>>();
    WordSum::from_terms(terms)
}

/// `μ_k μ_k = id` on matrices and on coefficient-free seeds.
pub fn mutation_involutivity<R: Rng>(rng: &mut R, cases: usize) -> CheckOutcome {
    let name = "mutation involutivity";
    for case in 0..cases {
        let size = rng.random_range(2..=5);
        let b = random_exchange_matrix(rng, size);
        let Some(&k) = b.mutable_vertices().choose(rng) else {
            continue;
        };
        let once = b.mutate(k).expect("mutable");
        if once.mutate(k).expect("mutable") != b {
            return CheckOutcome::new(
                name,
                case + 1,
                Some(format!("matrix {:?} at {k}", b.rows())),
            );
        }
        if case % 10 == 0 {
            let s = Seed::initial(b.clone(), CoeffMode::Invertible);
            match s.mutate(k).and_then(|t| t.mutate(k)) {
                Ok(t) if t.cluster() == s.cluster() && t.matrix() == s.matrix() => {}
                other => {
                    return CheckOutcome::new(
                        name,
                        case + 1,
                        Some(format!("seed at {k}: {other:?}")),
                    )
                }
            }
        }
    }
    CheckOutcome::new(name, cases, None)
}

/// Random walks from `Γ_i` seeds: exact division, quiver shape, and Max-dominance of dimension vectors.
pub fn walks<R: Rng>(rng: &mut R, budget: &Budget) -> (CheckOutcome, CheckOutcome) {
    let laurent = "Laurent exactness on walks";
    let dominance = "Max-dominance on walks";
    let mut steps = 0;
    for _ in 0..budget.walks {
        let c = random_tree_cartan(rng, 4);
        let w = random_reduced_word(rng, &c, budget.max_word);
        let mut seed = Seed::from_quiver(&gamma_i(&c, &w), CoeffMode::Frozen);
        let mv = seed.matrix().mutable_vertices();
        if mv.is_empty() {
            continue;
        }
        let mut labels = initial_dimvec_labels(&hom_tables(&c, &w));
        let mut last = 0;
        for _ in 0..budget.walk_depth {
            let choices: Vec<usize> = mv
                .iter()
                .copied()
                .filter(|&k| k != last || mv.len() == 1)
                .collect();
            let k = *choices.choose(rng).expect("nonempty");
            let word = w.printed();
            match mutate_dimvec(&labels, seed.matrix(), k) {
                Ok(step) if step.dominance => labels = step.labels,
                Ok(step) => {
                    let msg = format!(
                        "word {word:?} at {k}: {:?} vs {:?}",
                        step.in_sum, step.out_sum
                    );
                    return (
                        CheckOutcome::new(laurent, steps, None),
                        CheckOutcome::new(dominance, steps, Some(msg)),
                    );
                }
                Err(e) => {
                    let msg = format!("word {word:?} at {k}: {e}");
                    return (
                        CheckOutcome::new(laurent, steps, None),
                        CheckOutcome::new(dominance, steps, Some(msg)),
                    );
                }
            }
            seed = match seed.mutate(k) {
                Ok(s) => s,
                Err(e) => {
                    let msg = format!("word {word:?} at {k}: {e}");
                    return (
                        CheckOutcome::new(laurent, steps, Some(msg)),
                        CheckOutcome::new(dominance, steps, None),
                    );
                }
            };
            if !seed.matrix().quiver_is_valid() {
                let msg = format!("word {word:?}: loop or 2-cycle after {:?}", seed.path());
                return (
                    CheckOutcome::new(laurent, steps, Some(msg)),
                    CheckOutcome::new(dominance, steps, None),
                );
            }
            steps += 1;
            last = k;
        }
    }
    (
        CheckOutcome::new(laurent, steps, None),
        CheckOutcome::new(dominance, steps, None),
    )
}

/// `run_plan` on random words; every step keeps Δ-labels interval indicators.
pub fn mu_i_runs<R: Rng>(rng: &mut R, budget: &Budget) -> CheckOutcome {
    let name = "interval indicators along mu_i";
    let mut steps = 0;
    for _ in 0..budget.mu_runs {
        let c = random_cartan(rng, 4, 3);
        let w = random_reduced_word(rng, &c, 10);
        let plan = mu_i_plan(&w);
        if plan.len() != plan_length(&w) {
            return CheckOutcome::new(
                name,
                steps,
                Some(format!("plan length for {:?}", w.printed())),
            );
        }
        match run_plan(&c, &w, &plan, false).and_then(|r| check_final(&w, &r).map(|_| r)) {
            Ok(r) => steps += r.steps.len(),
            Err(e) => {
                return CheckOutcome::new(name, steps, Some(format!("{:?}: {e}", w.printed())))
            }
        }
    }
    CheckOutcome::new(name, steps, None)
}

pub fn shuffle_axioms<R: Rng>(rng: &mut R, cases: usize) -> CheckOutcome {
    let name = "shuffle ring axioms";
    for case in 0..cases {
        let (u, v, x) = (
            random_word_sum(rng),
            random_word_sum(rng),
            random_word_sum(rng),
        );
        let ok = u.shuffle(&v) == v.shuffle(&u)
            && u.shuffle(&v).shuffle(&x) == u.shuffle(&v.shuffle(&x))
            && u.shuffle(&WordSum::unit()) == u
            && u.shuffle(&v.add(&x)) == u.shuffle(&v).add(&u.shuffle(&x));
        if !ok {
            return CheckOutcome::new(name, case + 1, Some(format!("{u:?} {v:?} {x:?}")));
        }
    }
    CheckOutcome::new(name, cases, None)
}

pub fn phi_multiplicativity<R: Rng>(rng: &mut R, cases: usize) -> CheckOutcome {
    let name = "phi multiplicativity";
    for case in 0..cases {
        let (u, v) = (random_word_sum(rng), random_word_sum(rng));
        let pattern: Vec<usize> = (0..rng.random_range(0..6))
            .map(|_| rng.random_range(1..=3))
            .collect();
        let lhs = phi_eval_rational(&u.shuffle(&v), &pattern);
        let rhs = rational_product(
            &phi_eval_rational(&u, &pattern),
            &phi_eval_rational(&v, &pattern),
        );
        if lhs != rhs {
            return CheckOutcome::new(name, case + 1, Some(format!("{u:?} {v:?} on {pattern:?}")));
        }
    }
    CheckOutcome::new(name, cases, None)
}

/// Five variables, five seeds, and period ten for alternating mutations.
pub fn a2_pentagon() -> Result<CheckOutcome, Error> {
    let s = b_q_seed(2, &[(1, 2, 1)])?;
    let ex = explore(
        &s,
        12,
        &MemoryRegistry::default(),
        &MemoryRegistry::default(),
    )?;
    let mut t = s.clone();
    for step in 0..10 {
        t = t.mutate(step % 2 + 1)?;
    }
    let ok = ex.variables.len() == 5 && ex.seeds == 5 && t.cluster() == s.cluster();
    let detail = (!ok).then(|| format!("{} variables, {} seeds", ex.variables.len(), ex.seeds));
    Ok(CheckOutcome::new("A2 pentagon", 1, detail))
}

/// Every suite, from one seed.
pub fn run_all(seed: u64, budget: &Budget) -> Result<Vec<CheckOutcome>, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![mutation_involutivity(&mut rng, budget.mutations)];
    let (a, b) = walks(&mut rng, budget);
    out.push(a);
    out.push(b);
    out.push(mu_i_runs(&mut rng, budget));
    out.push(shuffle_axioms(&mut rng, budget.shuffles));
    out.push(phi_multiplicativity(&mut rng, budget.shuffles));
    out.push(a2_pentagon()?);
    Ok(out)
}
