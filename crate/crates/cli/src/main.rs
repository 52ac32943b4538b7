//! `cluster`: JSON front end for cluster-core.

use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use cluster_core::cartan_weyl::{ReducedWord, WordInput};
use cluster_core::checks::{run_all, Budget, DEFAULT_SEED};
use cluster_core::dimvec::{
    hom_tables, initial_delta_labels, initial_dimvec_labels, mutate_delta_dimvec, mutate_dimvec,
};
use cluster_core::interval::{
    check_final, determinantal_identity, mu_i_plan, plan_length, run_plan, IntervalLabel,
    PbwExpander,
};
use cluster_core::laurent::VarTable;
use cluster_core::minors::{cross_validate, minor_spec_for_vk, word_pattern};
use cluster_core::quiver_seed::{
    acyclic_double, acyclic_report, explore, gamma_i, random_walk, CoeffMode, MemoryRegistry,
    Quiver, Seed,
};
use cluster_core::shuffle::{g_v, phi_eval};
use cluster_core::{Error, ErrorKind};

#[derive(Parser)]
#[command(
    name = "cluster",
    version,
    about = "Exact cluster seeds, labels and Euler generating functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON file, inline JSON, or `-` for stdin.
    #[arg(long, global = true)]
    input: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    output: Option<String>,
    /// Coefficient handling for frozen variables.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Frozen)]
    mode: Mode,
    /// Exploration depth or walk length.
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Random seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Combinatorial plan only, no Laurent arithmetic.
    #[arg(long, global = true)]
    plan_only: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Quiver of a reduced word.
    Gamma,
    /// Mutate a seed along `path`.
    Mutate,
    /// Breadth-first exploration, or a seeded random walk with `--seed`.
    Walk,
    /// Dimension-vector labels along `path`.
    Dimvec,
    /// Δ-dimension-vector labels along `path`.
    DeltaDimvec,
    /// Run the interval-label mutation sequence.
    MuI,
    /// Determinantal identities met by the mutation sequence.
    Identities,
    /// Dual PBW expansions of the cluster after `path`.
    Pbw,
    /// Euler generating functions `g_{V_k}`.
    EulerGen,
    /// Evaluate `g_{V_k}` on a product of one-parameter subgroups.
    PhiEval,
    /// Compare evaluations with type A minors.
    MinorCheck,
    /// Double Coxeter word of an acyclic quiver.
    Acyclic,
    /// Randomized invariant suites.
    Selftest,
}

#[derive(ValueEnum, Clone, Copy)]
enum Mode {
    Frozen,
    Invertible,
    Specialized,
}

impl From<Mode> for CoeffMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Frozen => CoeffMode::Frozen,
            Mode::Invertible => CoeffMode::Invertible,
            Mode::Specialized => CoeffMode::Specialized,
        }
    }
}

enum Failure {
    Validation(String),
    Assertion(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e.kind() {
            ErrorKind::Validation => Failure::Validation(e.to_string()),
            ErrorKind::Assertion => Failure::Assertion(e.to_string()),
        }
    }
}

macro_rules! core_err {
    ($e:expr) => {
        $e.map_err(|e| Failure::from(Error::from(e)))
    };
}

type Outcome = Result<Value, Failure>;

#[derive(Deserialize)]
struct QuiverInput {
    vertices: usize,
    #[serde(default)]
    arrows: Vec<(usize, usize, u32)>,
    #[serde(default)]
    frozen: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Source {
    Quiver(QuiverInput),
    Word(WordInput),
}

impl Source {
    fn quiver(&self) -> Result<Quiver, Failure> {
        match self {
            Source::Quiver(q) => {
                let mut mask = vec![false; q.vertices];
                for &f in &q.frozen {
                    if f == 0 || f > q.vertices {
                        return Err(Failure::Validation(format!(
                            "frozen vertex {f} out of range"
                        )));
                    }
                    mask[f - 1] = true;
                }
                core_err!(Quiver::from_arrows(q.vertices, mask, &q.arrows))
            }
            Source::Word(w) => {
                let (c, w) = core_err!(w.build())?;
                Ok(gamma_i(&c, &w))
            }
        }
    }
}

#[derive(Deserialize)]
struct PathInput {
    #[serde(flatten)]
    word: WordInput,
    #[serde(default)]
    path: Vec<usize>,
}

#[derive(Deserialize)]
struct SourcePath {
    #[serde(flatten)]
    source: Source,
    #[serde(default)]
    path: Vec<usize>,
}

#[derive(Deserialize)]
struct MuInput {
    #[serde(flatten)]
    word: WordInput,
    /// Compute cluster variables and verify every identity symbolically.
    #[serde(default)]
    track: bool,
}

#[derive(Deserialize)]
struct PbwInput {
    #[serde(flatten)]
    word: WordInput,
    #[serde(default)]
    labels: Vec<(usize, usize)>,
    #[serde(default)]
    path: Vec<usize>,
}

#[derive(Deserialize)]
struct KInput {
    #[serde(flatten)]
    word: WordInput,
    #[serde(default)]
    k: Vec<usize>,
    #[serde(default)]
    pattern: Option<Vec<usize>>,
}

#[derive(Deserialize)]
struct AcyclicInput {
    n: usize,
    arrows: Vec<(usize, usize, u32)>,
}

fn read_input(spec: &Option<String>) -> Result<String, Failure> {
    let Some(s) = spec else {
        return Err(Failure::Validation("--input is required".into()));
    };
    let t = s.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(s.clone());
    }
    if s == "-" {
        let mut buf = String::new();
        io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::Validation(e.to_string()))?;
        return Ok(buf);
    }
    fs::read_to_string(s).map_err(|e| Failure::Validation(format!("{s}: {e}")))
}

fn parse<T: DeserializeOwned>(cli: &Cli) -> Result<T, Failure> {
    let text = read_input(&cli.input)?;
    serde_json::from_str(&text).map_err(|e| Failure::Validation(format!("input: {e}")))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn check_k(w: &ReducedWord, ks: &[usize]) -> Result<Vec<usize>, Failure> {
    if let Some(&bad) = ks.iter().find(|&&k| k == 0 || k > w.len()) {
        return Err(Failure::Validation(format!(
            "k = {bad} out of range 1..={}",
            w.len()
        )));
    }
    Ok(if ks.is_empty() {
        (1..=w.len()).collect()
    } else {
        ks.to_vec()
    })
}

fn pattern_for(w: &ReducedWord, pattern: &Option<Vec<usize>>) -> (Vec<usize>, VarTable) {
    match pattern {
        None => word_pattern(w),
        Some(p) => (p.clone(), VarTable::indexed("t", p.len())),
    }
}

fn quiver_json(q: &Quiver) -> Value {
    json!({
        "vertices": q.vertex_count(),
        "frozen": q.frozen_vertices(),
        "arrows": q.arrows(),
    })
}

fn gamma(cli: &Cli) -> Outcome {
    let input: WordInput = parse(cli)?;
    let (c, w) = core_err!(input.build())?;
    Ok(quiver_json(&gamma_i(&c, &w)))
}

fn mutate(cli: &Cli) -> Outcome {
    let input: SourcePath = parse(cli)?;
    let s = Seed::from_quiver(&input.source.quiver()?, cli.mode.into());
    let t = core_err!(s.mutate_path(&input.path))?;
    Ok(to_value(&t.to_doc()))
}

fn walk(cli: &Cli) -> Outcome {
    let input: SourcePath = parse(cli)?;
    let s = Seed::from_quiver(&input.source.quiver()?, cli.mode.into());
    let depth = cli.depth.unwrap_or(4);
    if let Some(seed) = cli.seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let seeds = core_err!(random_walk(&s, depth, &mut rng))?;
        let last = seeds.last().expect("start seed");
        return Ok(json!({ "seed": seed, "path": last.path(), "final": to_value(&last.to_doc()) }));
    }
    let ex = core_err!(explore(
        &s,
        depth,
        &MemoryRegistry::default(),
        &MemoryRegistry::default()
    ))?;
    Ok(json!({
        "depth": depth,
        "seeds": ex.seeds,
        "variables": ex.variables.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "denominator_collisions": ex.denominator_collisions,
    }))
}

fn dimvec(cli: &Cli, delta: bool) -> Outcome {
    let input: PathInput = parse(cli)?;
    let (c, w) = core_err!(input.word.build())?;
    let tables = hom_tables(&c, &w);
    let mut labels = if delta {
        initial_delta_labels(&w)
    } else {
        initial_dimvec_labels(&tables)
    };
    let mut matrix = Seed::from_quiver(&gamma_i(&c, &w), CoeffMode::Frozen)
        .matrix()
        .clone();
    let initial = labels.clone();
    let mut steps = Vec::new();
    for &k in &input.path {
        let step = if delta {
            core_err!(mutate_delta_dimvec(&labels, &matrix, k, &tables.d_delta))?
        } else {
            core_err!(mutate_dimvec(&labels, &matrix, k))?
        };
        labels = step.labels.clone();
        matrix = step.matrix.clone();
        steps.push(step);
    }
    Ok(json!({ "initial": initial, "steps": steps, "tables": tables }))
}

fn mu_i(cli: &Cli) -> Outcome {
    let input: MuInput = parse(cli)?;
    let (c, w) = core_err!(input.word.build())?;
    let plan = mu_i_plan(&w);
    let mut out = json!({
        "length": plan.len(),
        "expected_length": plan_length(&w),
        "groups": plan.groups(w.len()),
        "steps": plan.steps,
    });
    if cli.plan_only {
        return Ok(out);
    }
    let report = core_err!(run_plan(&c, &w, &plan, input.track))?;
    core_err!(check_final(&w, &report))?;
    out["final_labels"] = to_value(&report.final_labels);
    if input.track {
        out["identities_verified"] = json!(core_err!(report.verify_identities())?);
    }
    Ok(out)
}

fn identities(cli: &Cli) -> Outcome {
    let input: MuInput = parse(cli)?;
    let (c, w) = core_err!(input.word.build())?;
    let plan = mu_i_plan(&w);
    let mut list = Vec::new();
    for st in &plan.steps {
        let (s, k) = st.before.pair().expect("plan labels are intervals");
        let id = core_err!(determinantal_identity(&c, &w, k, s))?;
        list.push(json!({ "step": st.step, "k": k, "s": s, "identity": id.to_string() }));
    }
    let mut out = json!({ "identities": list });
    if input.track {
        let report = core_err!(run_plan(&c, &w, &plan, true))?;
        out["verified"] = json!(core_err!(report.verify_identities())?);
    }
    Ok(out)
}

fn pbw(cli: &Cli) -> Outcome {
    let input: PbwInput = parse(cli)?;
    let (c, w) = core_err!(input.word.build())?;
    let mut e = PbwExpander::new(&c, &w);
    let labels: Vec<IntervalLabel> = if input.labels.is_empty() {
        (1..=w.len())
            .map(|k| IntervalLabel::new(&w, k, w.kmin(k)))
            .collect()
    } else {
        let mut v = Vec::new();
        for &(b, a) in &input.labels {
            if a == 0 || b > w.len() || a > b || w.letter(a) != w.letter(b) {
                return Err(Failure::Validation(format!(
                    "M[{b},{a}] is not an interval"
                )));
            }
            v.push(IntervalLabel::new(&w, b, a));
        }
        v
    };
    let mut modules = Vec::new();
    for l in labels {
        modules.push(json!({ "label": l, "pbw": core_err!(e.label(l))?.to_string() }));
    }
    let mut out = json!({ "modules": modules });
    if !input.path.is_empty() {
        let s = core_err!(
            Seed::from_quiver(&gamma_i(&c, &w), CoeffMode::Frozen).mutate_path(&input.path)
        )?;
        let mut cluster = Vec::new();
        for x in s.cluster() {
            cluster.push(core_err!(e.laurent(x))?.to_string());
        }
        out["path"] = json!(input.path);
        out["cluster"] = json!(cluster);
    }
    Ok(out)
}

fn euler_gen(cli: &Cli) -> Outcome {
    let input: KInput = parse(cli)?;
    let (c, w) = core_err!(input.word.build())?;
    let mut out = Vec::new();
    for k in check_k(&w, &input.k)? {
        let g = core_err!(g_v(&c, &w, k))?;
        out.push(json!({ "k": k, "words": g.len(), "g": g }));
    }
    Ok(Value::Array(out))
}

fn phi(cli: &Cli) -> Outcome {
    let input: KInput = parse(cli)?;
    let (c, w) = core_err!(input.word.build())?;
    let (letters, vars) = pattern_for(&w, &input.pattern);
    let mut out = Vec::new();
    for k in check_k(&w, &input.k)? {
        let g = core_err!(g_v(&c, &w, k))?;
        let p = core_err!(phi_eval(&g, &letters, &vars))?;
        out.push(json!({ "k": k, "phi": p.to_string() }));
    }
    Ok(json!({ "pattern": letters, "vars": vars.names(), "values": out }))
}

fn minor_check(cli: &Cli) -> Outcome {
    let input: KInput = parse(cli)?;
    let (c, w) = core_err!(input.word.build())?;
    let (letters, vars) = pattern_for(&w, &input.pattern);
    let mut out = Vec::new();
    for k in check_k(&w, &input.k)? {
        let spec = core_err!(minor_spec_for_vk(&c, &w, k))?;
        let d = core_err!(cross_validate(&c, &w, k, &letters, &vars))?;
        out.push(json!({ "k": k, "rows": spec.rows, "cols": spec.cols, "minor": d.to_string() }));
    }
    Ok(json!({ "pattern": letters, "vars": vars.names(), "minors": out }))
}

fn acyclic(cli: &Cli) -> Outcome {
    let input: AcyclicInput = parse(cli)?;
    let setup = core_err!(acyclic_double(input.n, &input.arrows))?;
    let r = core_err!(acyclic_report(&setup))?;
    if !r.restored || !r.disjoint {
        return Err(Failure::Assertion(format!(
            "restored = {}, disjoint = {}",
            r.restored, r.disjoint
        )));
    }
    Ok(to_value(&r))
}

fn selftest(cli: &Cli) -> Outcome {
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    let outcomes = core_err!(run_all(seed, &Budget::default()))?;
    let failed: Vec<&str> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.name)
        .collect();
    let doc = json!({ "seed": seed, "checks": outcomes });
    if failed.is_empty() {
        Ok(doc)
    } else {
        Err(Failure::Assertion(format!(
            "failed: {}\n{}",
            failed.join(", "),
            doc
        )))
    }
}

fn dispatch(cli: &Cli) -> Outcome {
    match cli.command {
        Command::Gamma => gamma(cli),
        Command::Mutate => mutate(cli),
        Command::Walk => walk(cli),
        Command::Dimvec => dimvec(cli, false),
        Command::DeltaDimvec => dimvec(cli, true),
        Command::MuI => mu_i(cli),
        Command::Identities => identities(cli),
        Command::Pbw => pbw(cli),
        Command::EulerGen => euler_gen(cli),
        Command::PhiEval => phi(cli),
        Command::MinorCheck => minor_check(cli),
        Command::Acyclic => acyclic(cli),
        Command::Selftest => selftest(cli),
    }
}

fn emit(cli: &Cli, v: &Value) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(v).expect("serializable");
    text.push('\n');
    match &cli.output {
        Some(path) => fs::write(path, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(v) => match emit(&cli, &v) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!(
                    "{}",
                    json!({ "error": "validation", "message": e.to_string() })
                );
                ExitCode::from(2)
            }
        },
        Err(Failure::Validation(m)) => {
            eprintln!("{}", json!({ "error": "validation", "message": m }));
            ExitCode::from(2)
        }
        Err(Failure::Assertion(m)) => {
            eprintln!("{}", json!({ "error": "assertion", "message": m }));
            ExitCode::from(3)
        }
    }
}
