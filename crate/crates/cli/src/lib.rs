//! Command-line front end for `sepshort-core`.
//!
//! Vertex ids on the command line and in solver output are 1-based, as in
//! DIMACS files. Division files store the library's 0-based ids.

pub mod bench;

use std::fs;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use sepshort_core::apsp::floyd_warshall;
use sepshort_core::delta::validate_delta;
use sepshort_core::division::{build_division, verify_division, Division};
use sepshort_core::gen::{generate, GenSpec};
use sepshort_core::graph::{load_dimacs, save_dimacs, underlying_undirected};
use sepshort_core::pipeline::{choose_params, extract_path, solve_detailed, solve_multi_detailed, PipelineConfig, Prepared, Solution};
use sepshort_core::separator::{separate, verify_separation, SeparatorBudget, Strategy};
use sepshort_core::skeleton::build_skeleton;
use sepshort_core::sssp::{bellman_ford, Engine};
use sepshort_core::{DiGraph, Error, VertexWeighting, Weight};

use bench::{BenchOptions, Corpus, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_NEGATIVE_CYCLE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

pub const SEED_VAR: &str = "SEPSHORT_SEED";

#[derive(Debug, Parser)]
#[command(name = "sepshort", version, about = "Shortest paths with negative lengths on separable graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distances from one or more sources.
    Solve(SolveArgs),
    /// Build a division and write it as JSON lines.
    Divide(DivideArgs),
    /// Run checkers on a graph and optional artifacts.
    Verify(VerifyArgs),
    /// Generate a graph in DIMACS form.
    Gen(GenArgs),
    /// Time the solver over a corpus and write CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// `key = value` file applied before the flags below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// bf, scaling or dijkstra.
    #[arg(long)]
    pub engine: Option<Engine>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Region size; defaults to ceil(n^(3/(4+gamma))).
    #[arg(long)]
    pub r: Option<usize>,
}

impl ConfigArgs {
    pub fn resolve(&self) -> Result<PipelineConfig, Failure> {
        let mut cfg = PipelineConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_str(&read_text(path)?)?;
        }
        if let Some(e) = self.engine {
            cfg.engine = e;
        }
        if let Some(g) = self.gamma {
            cfg.gamma = g;
        }
        if self.r.is_some() {
            cfg.r_override = self.r;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Repeat for several sources; the division is shared.
    #[arg(long, required = true, num_args = 1..)]
    pub source: Vec<usize>,
    #[command(flatten)]
    pub config: ConfigArgs,
    /// Cross-check against Bellman-Ford.
    #[arg(long)]
    pub oracle: bool,
    /// Print a shortest path to this vertex.
    #[arg(long)]
    pub path: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct DivideArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, default_value_t = Strategy::BfsLevel)]
    pub strategy: Strategy,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Division file to check.
    #[arg(long)]
    pub division: Option<PathBuf>,
    /// Division parameters; r defaults to the solver's choice.
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Build skeletons for the division and validate every delta system.
    #[arg(long, requires = "division")]
    pub deltas: bool,
    /// Compute and check a separator of the undirected graph.
    #[arg(long)]
    pub separator: Option<Strategy>,
    /// Solver output (`v ID DIST` lines) to check against Bellman-Ford.
    #[arg(long, requires = "source")]
    pub distances: Option<PathBuf>,
    #[arg(long)]
    pub source: Option<usize>,
    /// Solve from every vertex and compare with Floyd-Warshall.
    #[arg(long)]
    pub full: bool,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// KIND:ROWSxCOLS:RULE[:nocycle], e.g. grid:100x100:neg=10,10.
    pub spec: GenSpec,
    #[arg(long)]
    pub out: PathBuf,
    /// Defaults to $SEPSHORT_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// `-` for stdout.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_delimiter = ',')]
    pub engines: Vec<Engine>,
    #[arg(long, value_delimiter = ',')]
    pub gammas: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    pub repeat: usize,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// A message for stderr and the exit code that goes with it.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub msg: String,
}

impl Failure {
    fn verify(msg: impl Into<String>) -> Failure {
        Failure { code: EXIT_VERIFY, msg: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::NegativeCycle(_) | Error::NegativeCycleAt { .. } => EXIT_NEGATIVE_CYCLE,
            Error::BudgetUnmet { .. } => EXIT_BUDGET,
            _ => EXIT_IO,
        };
        Failure { code, msg: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure { code: EXIT_IO, msg: e.to_string() }
    }
}

/// `SEPSHORT_SEED` if set, else 0.
pub fn env_seed() -> Result<u64, Failure> {
    match std::env::var(SEED_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure { code: EXIT_IO, msg: format!("{SEED_VAR} must be an integer, got `{v}`") }),
        Err(_) => Ok(0),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure { code: EXIT_IO, msg: format!("{}: {e}", path.display()) })
}

pub fn read_graph(path: &Path) -> Result<DiGraph, Failure> {
    let file = fs::File::open(path).map_err(|e| Failure { code: EXIT_IO, msg: format!("{}: {e}", path.display()) })?;
    load_dimacs(BufReader::new(file)).map_err(|e| Failure { code: EXIT_IO, msg: format!("{}: {e}", path.display()) })
}

fn create(path: &Path) -> Result<Box<dyn Write>, Failure> {
    if path == Path::new("-") {
        return Ok(Box::new(BufWriter::new(io::stdout().lock())));
    }
    let f = fs::File::create(path).map_err(|e| Failure { code: EXIT_IO, msg: format!("{}: {e}", path.display()) })?;
    Ok(Box::new(BufWriter::new(f)))
}

fn vertex_arg(v: usize, n: usize) -> Result<usize, Failure> {
    if v == 0 || v > n {
        return Err(Failure { code: EXIT_IO, msg: format!("vertex {v} outside 1..={n}") });
    }
    Ok(v - 1)
}

fn fmt_dist(w: Weight) -> String {
    match w.get() {
        Some(d) => d.to_string(),
        None => "UNREACHABLE".into(),
    }
}

/// Run a parsed command, writing its normal output to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Solve(a) => cmd_solve(&a, out),
        Command::Divide(a) => cmd_divide(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Gen(a) => cmd_gen(&a, out),
        Command::Bench(a) => cmd_bench(&a, out),
    }
}

pub fn cmd_solve(a: &SolveArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let g = read_graph(&a.input)?;
    let cfg = a.config.resolve()?;
    let sources = a.source.iter().map(|&s| vertex_arg(s, g.n())).collect::<Result<Vec<_>, _>>()?;
    let targets = a.path.iter().map(|&v| vertex_arg(v, g.n())).collect::<Result<Vec<_>, _>>()?;
    let solved = if sources.len() == 1 {
        solve_detailed(&g, sources[0], &cfg).map(|(p, s)| (p, vec![s]))
    } else {
        solve_multi_detailed(&g, &sources, &cfg)
    };
    let (prep, sols) = match solved {
        Ok(x) => x,
        Err(Error::NegativeCycle(w)) => {
            write!(out, "cycle {}", w.length)?;
            for v in &w.vertices {
                write!(out, " {}", v + 1)?;
            }
            writeln!(out)?;
            return Err(Failure { code: EXIT_NEGATIVE_CYCLE, msg: format!("negative cycle of length {} on {} vertices", w.length, w.vertices.len()) });
        }
        Err(e) => return Err(e.into()),
    };
    let mut mismatch = None;
    for sol in &sols {
        let s = sol.result.source;
        if sols.len() > 1 {
            writeln!(out, "s {}", s + 1)?;
        }
        for (v, &d) in sol.result.dist.iter().enumerate() {
            writeln!(out, "v {} {}", v + 1, fmt_dist(d))?;
        }
        for &t in &targets {
            write_path(out, &g, &prep, sol, t)?;
        }
        if a.oracle {
            let want = bellman_ford(&g, s)?;
            match (0..g.n()).find(|&v| want.dist[v] != sol.result.dist[v]) {
                None => writeln!(out, "c oracle exact-match")?,
                Some(v) => {
                    writeln!(out, "c oracle mismatch at vertex {}", v + 1)?;
                    mismatch.get_or_insert(v);
                }
            }
        }
    }
    match mismatch {
        Some(v) => Err(Failure::verify(format!("solver disagrees with Bellman-Ford at vertex {}", v + 1))),
        None => Ok(()),
    }
}

fn write_path(out: &mut dyn Write, g: &DiGraph, prep: &Prepared, sol: &Solution, t: usize) -> Result<(), Failure> {
    let Some(d) = sol.result.dist[t].get() else {
        writeln!(out, "p {} UNREACHABLE", t + 1)?;
        return Ok(());
    };
    let path = extract_path(prep, sol, t)?;
    write!(out, "p {} {} {}", t + 1, d, sol.result.source + 1)?;
    for &id in &path {
        write!(out, " {}", g.edge(id).head + 1)?;
    }
    writeln!(out)?;
    Ok(())
}

pub fn cmd_divide(a: &DivideArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let g = read_graph(&a.input)?;
    let cfg = PipelineConfig { gamma: a.gamma.unwrap_or(PipelineConfig::default().gamma), r_override: a.r, ..Default::default() };
    cfg.validate()?;
    let (_, r) = choose_params(g.n(), &cfg);
    let mut params = cfg.division_params(r);
    params.strategy = a.strategy;
    let d = build_division(&g, &params)?;
    let mut f = create(&a.out)?;
    d.write_jsonl(&mut f)?;
    f.flush()?;
    let widest = d.regions.iter().map(|r| r.boundary.len()).max().unwrap_or(0);
    writeln!(out, "c regions {} r {} max_boundary {}", d.regions.len(), r, widest)?;
    Ok(())
}

pub fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let g = read_graph(&a.input)?;
    let mut failures: Vec<String> = Vec::new();
    let mut report = |out: &mut dyn Write, check: &str, problems: Vec<String>| -> io::Result<()> {
        if problems.is_empty() {
            writeln!(out, "ok {check}")
        } else {
            for p in &problems {
                writeln!(out, "FAIL {check}: {p}")?;
            }
            failures.push(format!("{check}: {}", problems[0]));
            Ok(())
        }
    };

    if let Some(path) = &a.division {
        let cfg = PipelineConfig { gamma: a.gamma.unwrap_or(PipelineConfig::default().gamma), r_override: a.r, ..Default::default() };
        cfg.validate()?;
        let (_, r) = choose_params(g.n(), &cfg);
        let file = fs::File::open(path).map_err(|e| Failure { code: EXIT_IO, msg: format!("{}: {e}", path.display()) })?;
        match Division::read_jsonl(&g, BufReader::new(file), cfg.division_params(r)) {
            Ok(d) => {
                let rep = verify_division(&g, &d);
                let passed = rep.passed();
                report(out, "division", rep.violations)?;
                if a.deltas && passed {
                    let scfg = cfg.skeleton_config();
                    let mut problems = Vec::new();
                    for region in &d.regions {
                        match build_skeleton(region, &scfg) {
                            Ok(sk) => {
                                for (node, ds) in sk.delta_systems() {
                                    for p in validate_delta(&ds).problems {
                                        problems.push(format!("region {} node {node}: {p}", region.id));
                                    }
                                }
                            }
                            Err(e) => problems.push(format!("region {}: {e}", region.id)),
                        }
                    }
                    report(out, "deltas", problems)?;
                }
            }
            Err(Error::Parse { line, msg }) => report(out, "division", vec![format!("line {line}: {msg}")])?,
            Err(e) => return Err(e.into()),
        }
    }

    if let Some(strategy) = a.separator {
        let u = underlying_undirected(&g);
        let w = VertexWeighting::uniform(g.n());
        let sep = separate(&u, &w, &SeparatorBudget::default(), strategy)?;
        let rep = verify_separation(&u, &w, &sep);
        writeln!(out, "c separator size {} sides {} {}", sep.separator.len(), sep.a.len(), sep.b.len())?;
        report(out, "separator", rep.violations)?;
    }

    if let Some(path) = &a.distances {
        let s = vertex_arg(a.source.expect("clap enforces --source"), g.n())?;
        let got = read_distances(path, g.n())?;
        let want = bellman_ford(&g, s)?;
        let problems: Vec<String> = (0..g.n())
            .filter(|&v| got[v] != want.dist[v])
            .take(10)
            .map(|v| format!("vertex {} has {} expected {}", v + 1, fmt_dist(got[v]), fmt_dist(want.dist[v])))
            .collect();
        report(out, "distances", problems)?;
    }

    if a.full {
        const FULL_CAP: usize = 1000;
        if g.n() > FULL_CAP {
            return Err(Failure { code: EXIT_IO, msg: format!("--full is limited to {FULL_CAP} vertices") });
        }
        let cfg = PipelineConfig { gamma: a.gamma.unwrap_or(PipelineConfig::default().gamma), r_override: a.r, ..Default::default() };
        let fw = floyd_warshall(&g)?;
        let mut problems = Vec::new();
        for s in 0..g.n() {
            let (prep, sol) = solve_detailed(&g, s, &cfg)?;
            for t in 0..g.n() {
                let d = sol.result.dist[t];
                if d != fw.dist(s, t) {
                    problems.push(format!("{} -> {}: {} expected {}", s + 1, t + 1, fmt_dist(d), fmt_dist(fw.dist(s, t))));
                    continue;
                }
                if let Some(d) = d.get() {
                    let path = extract_path(&prep, &sol, t)?;
                    if g.path_length(&path) != Some(d) || !walk_connects(&g, &path, s, t) {
                        problems.push(format!("{} -> {}: path does not realize {d}", s + 1, t + 1));
                    }
                }
            }
        }
        report(out, "full", problems)?;
    }

    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::verify(failures.join("; ")))
    }
}

fn walk_connects(g: &DiGraph, path: &[usize], s: usize, t: usize) -> bool {
    let mut at = s;
    for &id in path {
        let e = g.edge(id);
        if e.tail != at {
            return false;
        }
        at = e.head;
    }
    at == t
}

/// Parse `v ID DIST|UNREACHABLE` lines; other lines are ignored.
fn read_distances(path: &Path, n: usize) -> Result<Vec<Weight>, Failure> {
    let file = fs::File::open(path).map_err(|e| Failure { code: EXIT_IO, msg: format!("{}: {e}", path.display()) })?;
    let mut dist = vec![Weight::INF; n];
    let mut seen = vec![false; n];
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let mut tok = line.split_whitespace();
        if tok.next() != Some("v") {
            continue;
        }
        let bad = || Failure { code: EXIT_IO, msg: format!("{}:{}: bad distance line", path.display(), i + 1) };
        let v: usize = tok.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
        let v = vertex_arg(v, n)?;
        dist[v] = match tok.next().ok_or_else(bad)? {
            "UNREACHABLE" => Weight::INF,
            t => Weight::finite(t.parse().map_err(|_| bad())?),
        };
        seen[v] = true;
    }
    if let Some(v) = seen.iter().position(|&s| !s) {
        return Err(Failure::verify(format!("distances: vertex {} missing", v + 1)));
    }
    Ok(dist)
}

pub fn cmd_gen(a: &GenArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let seed = match a.seed {
        Some(s) => s,
        None => env_seed()?,
    };
    let g = generate(&a.spec, seed)?;
    let mut f = create(&a.out)?;
    writeln!(f, "c sepshort gen {} seed {seed}", a.spec)?;
    save_dimacs(&g, &mut f)?;
    f.flush()?;
    writeln!(out, "c wrote {} vertices {} arcs", g.n(), g.m())?;
    Ok(())
}

pub fn cmd_bench(a: &BenchArgs, _out: &mut dyn Write) -> Result<(), Failure> {
    let corpus = Corpus::load(&a.corpus, env_seed()?)?;
    let mut base = PipelineConfig::default();
    if let Some(path) = &a.config {
        base.apply_str(&read_text(path)?)?;
    }
    let opts = BenchOptions {
        base,
        engines: if a.engines.is_empty() { vec![base.engine] } else { a.engines.clone() },
        gammas: if a.gammas.is_empty() { vec![base.gamma] } else { a.gammas.clone() },
        repeat: a.repeat,
    };
    let records = bench::run_bench(&corpus, &opts)?;
    let mut f = create(&a.out)?;
    bench::write_csv(&records, &mut f)?;
    f.flush()?;
    if let Some(bad) = records.iter().find(|r| r.verdict != Verdict::ExactMatch) {
        return Err(Failure::verify(format!("{} ({} engine, gamma {}): {:?}", bad.instance, bad.engine, bad.gamma, bad.verdict)));
    }
    Ok(())
}
