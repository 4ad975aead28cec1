//! Command-line driver: parse or generate a framework, run one engine,
//! optionally verify, check invariants and trace, and print the result.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::ops::ControlFlow;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use afstable::generators::{random_af, GenError, GenSpec};
use afstable::invariants::InvariantMonitor;
use afstable::io::{self as afio, Format, ParseError, Task};
use afstable::label_enum::{self, Both, TraceRecorder};
use afstable::oracle::{self, TooLarge};
use afstable::{set_enum, Extension, Framework, PickStrategy, SearchStats};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    Bruteforce,
    Set,
    Label,
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bruteforce" => Ok(Engine::Bruteforce),
            "set" => Ok(Engine::Set),
            "label" => Ok(Engine::Label),
            other => Err(format!(
                "unknown engine `{other}` (expected bruteforce, set or label)"
            )),
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Bruteforce => "bruteforce",
            Engine::Set => "set",
            Engine::Label => "label",
        })
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Generate(#[from] GenError),
    #[error("{0}")]
    TooLarge(#[from] TooLarge),
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("invariant violations:\n{0}")]
    Invariant(String),
    #[error("verification failed: {0}")]
    Verify(String),
    #[error("engines disagree on seed {seed}: {detail}")]
    CountMismatch { seed: u64, detail: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invariant(_) | CliError::Verify(_) | CliError::CountMismatch { .. } => 2,
            _ => 1,
        }
    }
}

/// `n,p,seed[,selfloops]`, where `seed` may be an inclusive range `a..b`.
#[derive(Clone, Debug, PartialEq)]
pub struct GenArg {
    pub n: usize,
    pub p: f64,
    pub seeds: std::ops::RangeInclusive<u64>,
    pub allow_self_loops: bool,
}

impl GenArg {
    pub fn specs(&self) -> impl Iterator<Item = GenSpec> + '_ {
        self.seeds.clone().map(|seed| GenSpec {
            n: self.n,
            p: self.p,
            allow_self_loops: self.allow_self_loops,
            seed,
        })
    }
}

impl FromStr for GenArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if !(3..=4).contains(&parts.len()) {
            return Err("expected n,p,seed[,selfloops]".into());
        }
        let n = parts[0].parse().map_err(|e| format!("bad n `{}`: {e}", parts[0]))?;
        let p = parts[1].parse().map_err(|e| format!("bad p `{}`: {e}", parts[1]))?;
        let seed = |t: &str| t.parse::<u64>().map_err(|e| format!("bad seed `{t}`: {e}"));
        let seeds = match parts[2].split_once("..") {
            Some((a, b)) => seed(a)?..=seed(b.trim_start_matches('='))?,
            None => {
                let s = seed(parts[2])?;
                s..=s
            }
        };
        if seeds.is_empty() {
            return Err(format!("empty seed range `{}`", parts[2]));
        }
        let allow_self_loops = match parts.get(3) {
            None => false,
            Some(&("selfloops" | "true" | "1")) => true,
            Some(&("noselfloops" | "false" | "0")) => false,
            Some(other) => return Err(format!("bad self-loop flag `{other}`")),
        };
        Ok(GenArg {
            n,
            p,
            seeds,
            allow_self_loops,
        })
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub task: Task,
    pub engine: Engine,
    pub order: PickStrategy,
    pub check_invariants: bool,
    pub trace: Option<PathBuf>,
    pub verify: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            task: Task::Enumerate,
            engine: Engine::Label,
            order: PickStrategy::Lowest,
            check_invariants: false,
            trace: None,
            verify: false,
        }
    }
}

/// Reads a framework from a file, picking the format from the flag or the
/// file extension.
pub fn load(path: &std::path::Path, format: Option<Format>) -> Result<Framework, CliError> {
    let format = format.or_else(|| Format::from_path(path)).ok_or_else(|| {
        CliError::Usage(format!(
            "cannot tell the format of {}; pass --format apx|tgf",
            path.display()
        ))
    })?;
    let text = fs::read_to_string(path)?;
    let parsed = afio::parse(format, &text)?;
    for w in &parsed.warnings {
        eprintln!("{}: {w}", path.display());
    }
    Ok(parsed.framework)
}

pub struct Outcome {
    pub extensions: Vec<Extension>,
    pub stats: SearchStats,
}

/// Runs one engine on `f` under `cfg`, honouring the invariant, trace and
/// verification switches.
pub fn solve(cfg: &RunConfig, f: &Framework) -> Result<Outcome, CliError> {
    if cfg.trace.is_some() && cfg.engine != Engine::Label {
        return Err(CliError::Usage("--trace needs the label engine".into()));
    }
    let first_only = cfg.task == Task::Some;
    let mut extensions = Vec::new();
    let mut sink = |e: &Extension| {
        extensions.push(e.clone());
        if first_only {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    };

    let mut monitor = InvariantMonitor::default();
    let stats = match cfg.engine {
        Engine::Bruteforce => {
            let all = oracle::enumerate_bruteforce(f)?;
            let mut stats = SearchStats {
                complete: true,
                ..SearchStats::default()
            };
            for e in &all {
                stats.extensions += 1;
                if sink(e).is_break() {
                    stats.complete = false;
                    break;
                }
            }
            stats
        }
        Engine::Set if cfg.check_invariants => {
            set_enum::enumerate_observed(f, cfg.order, &mut monitor, sink)
        }
        Engine::Set => set_enum::enumerate(f, cfg.order, sink),
        Engine::Label => {
            let mut recorder = TraceRecorder::default();
            let stats = match (cfg.check_invariants, cfg.trace.is_some()) {
                (false, false) => label_enum::enumerate(f, cfg.order, sink),
                (true, false) => label_enum::enumerate_observed(f, cfg.order, &mut monitor, sink),
                (false, true) => label_enum::enumerate_observed(f, cfg.order, &mut recorder, sink),
                (true, true) => label_enum::enumerate_observed(
                    f,
                    cfg.order,
                    &mut Both(&mut monitor, &mut recorder),
                    sink,
                ),
            };
            if let Some(path) = &cfg.trace {
                let mut w = io::BufWriter::new(fs::File::create(path)?);
                afio::write_trace(&mut w, f, &recorder.events)?;
                w.flush()?;
            }
            stats
        }
    };

    if !monitor.is_clean() {
        let lines: Vec<String> = monitor.violations.iter().map(|v| v.to_string()).collect();
        return Err(CliError::Invariant(lines.join("\n")));
    }
    if cfg.verify {
        for e in &extensions {
            if !oracle::is_stable(f, &e.to_set(f.len())) {
                return Err(CliError::Verify(format!("{} is not stable", e.display(f))));
            }
        }
    }
    Ok(Outcome { extensions, stats })
}

/// Solves and prints the answer in the task's output format.
pub fn run<W: Write>(cfg: &RunConfig, f: &Framework, out: &mut W) -> Result<(), CliError> {
    let outcome = solve(cfg, f)?;
    afio::write_extensions(out, f, &outcome.extensions, cfg.task)?;
    Ok(())
}

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub seed: u64,
    pub engine: Engine,
    pub micros: u128,
    pub stats: SearchStats,
}

impl fmt::Display for BenchRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "seed={} engine={} time_us={} count={} branches={} propagations={}",
            self.seed,
            self.engine,
            self.micros,
            self.stats.extensions,
            self.stats.branches,
            self.stats.propagations
        )
    }
}

/// Counts extensions of every generated instance with every engine,
/// writing one row per (instance, engine). Stops at the first seed on
/// which the engines disagree.
pub fn bench<W: Write>(
    gen: &GenArg,
    engines: &[Engine],
    order: PickStrategy,
    out: &mut W,
) -> Result<Vec<BenchRow>, CliError> {
    if engines.is_empty() {
        return Err(CliError::Usage("no engines to benchmark".into()));
    }
    let cfg = RunConfig {
        task: Task::Count,
        order,
        ..RunConfig::default()
    };
    let mut rows = Vec::new();
    writeln!(
        out,
        "# n={} p={} selfloops={}",
        gen.n, gen.p, gen.allow_self_loops
    )?;
    for spec in gen.specs() {
        let f = random_af(&spec)?;
        let mut counts = Vec::new();
        for &engine in engines {
            let start = Instant::now();
            let outcome = solve(&RunConfig { engine, ..cfg.clone() }, &f)?;
            let row = BenchRow {
                seed: spec.seed,
                engine,
                micros: start.elapsed().as_micros(),
                stats: outcome.stats,
            };
            writeln!(out, "{row}")?;
            counts.push((engine, row.stats.extensions));
            rows.push(row);
        }
        if counts.windows(2).any(|w| w[0].1 != w[1].1) {
            let detail = counts
                .iter()
                .map(|(e, c)| format!("{e}={c}"))
                .collect::<Vec<_>>()
                .join(" ");
            return Err(CliError::CountMismatch {
                seed: spec.seed,
                detail,
            });
        }
    }
    Ok(rows)
}
