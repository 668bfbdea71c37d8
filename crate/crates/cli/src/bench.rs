//! Corpus sweeps and the CSV record format.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::Serialize;

use sepshort_core::gen::{generate, GenSpec};
use sepshort_core::graph::load_dimacs;
use sepshort_core::pipeline::{prepare, PipelineConfig, StageTimings};
use sepshort_core::sssp::{bellman_ford, Engine};
use sepshort_core::{DiGraph, Error, Result};

/// Bumped whenever a column is added, removed or renamed.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceSource {
    Generated(GenSpec),
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub name: String,
    pub source: InstanceSource,
    pub seed: u64,
    /// 0-based.
    pub start: usize,
}

impl Instance {
    pub fn load(&self) -> Result<DiGraph> {
        match &self.source {
            InstanceSource::Generated(spec) => generate(spec, self.seed),
            InstanceSource::File(path) => {
                let file = fs::File::open(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
                load_dimacs(std::io::BufReader::new(file))
            }
        }
    }
}

/// One instance per line: `NAME SOURCE [seed=N] [source=V]`, where SOURCE
/// is a generator spec (`grid:100x100:neg=10,10`) or `file:PATH` relative
/// to the corpus file. `source` is 1-based. `#` starts a comment.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub instances: Vec<Instance>,
}

impl Corpus {
    pub fn parse(text: &str, base: &Path, default_seed: u64) -> Result<Corpus> {
        let mut instances = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| Error::Parse { line: i + 1, msg };
            let mut tok = line.split_whitespace();
            let name = tok.next().expect("line is not empty").to_string();
            let src = tok.next().ok_or_else(|| bad("missing instance source".into()))?;
            let source = match src.strip_prefix("file:") {
                Some(p) => InstanceSource::File(base.join(p)),
                None => InstanceSource::Generated(src.parse().map_err(|e: Error| bad(e.to_string()))?),
            };
            let mut inst = Instance { name, source, seed: default_seed, start: 0 };
            for kv in tok {
                let (k, v) = kv.split_once('=').ok_or_else(|| bad(format!("expected key=value, got `{kv}`")))?;
                let num = v.parse::<u64>().map_err(|_| bad(format!("bad number `{v}`")))?;
                match k {
                    "seed" => inst.seed = num,
                    "source" if num >= 1 => inst.start = num as usize - 1,
                    _ => return Err(bad(format!("unknown or invalid option `{kv}`"))),
                }
            }
            instances.push(inst);
        }
        Ok(Corpus { instances })
    }

    pub fn load(path: &Path, default_seed: u64) -> Result<Corpus> {
        let text = fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
        Corpus::parse(&text, path.parent().unwrap_or(Path::new(".")), default_seed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ExactMatch,
    Mismatch,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRecord {
    pub version: u32,
    pub instance: String,
    pub n: usize,
    pub m: usize,
    /// Magnitude of the most negative length.
    pub l: i64,
    pub gamma: f64,
    pub r: usize,
    pub engine: String,
    pub regions: usize,
    pub boundary: usize,
    pub prune_ms: f64,
    pub division_ms: f64,
    pub skeletons_ms: f64,
    pub replaced_ms: f64,
    pub engine_ms: f64,
    pub extend_ms: f64,
    pub audit_ms: f64,
    pub stages_ms: f64,
    pub wall_ms: f64,
    pub relaxations: u64,
    pub rounds: u64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub base: PipelineConfig,
    pub engines: Vec<Engine>,
    pub gammas: Vec<f64>,
    /// Timings are taken from the fastest of this many runs.
    pub repeat: usize,
}

impl Default for BenchOptions {
    fn default() -> Self {
        let base = PipelineConfig::default();
        BenchOptions { base, engines: vec![base.engine], gammas: vec![base.gamma], repeat: 1 }
    }
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn merge(prep: &StageTimings, solve: &StageTimings) -> StageTimings {
    StageTimings {
        prune: prep.prune,
        division: prep.division,
        skeletons: prep.skeletons,
        replaced: prep.replaced,
        engine: solve.engine,
        extend: solve.extend,
        audit: solve.audit,
    }
}

/// Run every (instance, gamma, engine) combination in order.
pub fn run_bench(corpus: &Corpus, opts: &BenchOptions) -> Result<Vec<BenchRecord>> {
    let mut out = Vec::new();
    for inst in &corpus.instances {
        let g = inst.load()?;
        if inst.start >= g.n() {
            return Err(Error::InvalidArgument(format!("{}: source {} out of range", inst.name, inst.start + 1)));
        }
        let reference = bellman_ford(&g, inst.start);
        for &gamma in &opts.gammas {
            for &engine in &opts.engines {
                let cfg = PipelineConfig { gamma, engine, ..opts.base };
                out.push(bench_one(&inst.name, &g, inst.start, &cfg, opts.repeat.max(1), &reference));
            }
        }
    }
    Ok(out)
}

fn bench_one(
    name: &str,
    g: &DiGraph,
    s: usize,
    cfg: &PipelineConfig,
    repeat: usize,
    reference: &Result<sepshort_core::sssp::SsspResult>,
) -> BenchRecord {
    let mut rec = BenchRecord {
        version: SCHEMA_VERSION,
        instance: name.to_string(),
        n: g.n(),
        m: g.m(),
        l: g.neg_magnitude(),
        gamma: cfg.gamma,
        r: 0,
        engine: cfg.engine.to_string(),
        regions: 0,
        boundary: 0,
        prune_ms: 0.0,
        division_ms: 0.0,
        skeletons_ms: 0.0,
        replaced_ms: 0.0,
        engine_ms: 0.0,
        extend_ms: 0.0,
        audit_ms: 0.0,
        stages_ms: 0.0,
        wall_ms: f64::INFINITY,
        relaxations: 0,
        rounds: 0,
        verdict: Verdict::Error,
    };
    for _ in 0..repeat {
        let t = Instant::now();
        let run = prepare(g, &[s], cfg).and_then(|prep| prep.solve(s).map(|sol| (prep, sol)));
        let wall = t.elapsed();
        let (prep, sol) = match run {
            Ok(x) => x,
            Err(Error::NegativeCycle(_)) if matches!(reference, Err(Error::NegativeCycle(_))) => {
                rec.verdict = Verdict::ExactMatch;
                rec.wall_ms = rec.wall_ms.min(ms(wall));
                continue;
            }
            Err(_) => {
                rec.verdict = Verdict::Error;
                return rec;
            }
        };
        rec.verdict = match reference {
            Ok(want) if want.dist == sol.result.dist => Verdict::ExactMatch,
            _ => Verdict::Mismatch,
        };
        if ms(wall) < rec.wall_ms {
            let st = merge(&prep.timings, &sol.timings);
            rec.r = prep.r;
            rec.regions = prep.division.regions.len();
            rec.boundary = prep.replaced.vertices.len();
            rec.prune_ms = ms(st.prune);
            rec.division_ms = ms(st.division);
            rec.skeletons_ms = ms(st.skeletons);
            rec.replaced_ms = ms(st.replaced);
            rec.engine_ms = ms(st.engine);
            rec.extend_ms = ms(st.extend);
            rec.audit_ms = ms(st.audit);
            rec.stages_ms = ms(st.total());
            rec.wall_ms = ms(wall);
            rec.relaxations = sol.result.stats.relaxations;
            rec.rounds = sol.result.stats.rounds;
        }
        if rec.verdict != Verdict::ExactMatch {
            break;
        }
    }
    rec
}

pub fn write_csv(records: &[BenchRecord], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for rec in records {
        w.serialize(rec).map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
    }
    w.flush().map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
    Ok(())
}
