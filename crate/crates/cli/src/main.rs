use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use afstable::generators::{family, random_af, Family};
use afstable::io::{self as afio, Format, Task};
use afstable::{Framework, PickStrategy};
use afstable_cli::{bench, load, run, CliError, Engine, GenArg, RunConfig};
use clap::Parser;

#[derive(Parser, Debug)]
#[command(name = "afstable", version, about = "Enumerate stable extensions of argumentation frameworks")]
struct Args {
    /// Input framework (.apx or .tgf)
    input: Option<PathBuf>,

    /// EE-ST, SE-ST or CE-ST
    #[arg(short, long, default_value = "EE-ST")]
    task: Task,

    /// bruteforce, set or label
    #[arg(short, long, default_value = "label")]
    engine: Engine,

    /// Branching order: lex, max-out or max-in
    #[arg(long, default_value = "lex")]
    order: PickStrategy,

    /// Input format; guessed from the file extension when omitted
    #[arg(short, long)]
    format: Option<Format>,

    /// Re-check every reported extension against the definition
    #[arg(long)]
    verify: bool,

    /// Check the state invariants at every search boundary
    #[arg(long)]
    check_invariants: bool,

    /// Write the labelling trace as JSON lines (label engine only)
    #[arg(long, value_name = "PATH")]
    trace: Option<PathBuf>,

    /// Random framework instead of an input file: n,p,seed[,selfloops]
    #[arg(long, value_name = "SPEC", conflicts_with_all = ["input", "family"])]
    gen: Option<GenArg>,

    /// Structured framework instead of an input file: NAME,n
    #[arg(long, value_name = "NAME,N", conflicts_with = "input")]
    family: Option<String>,

    /// Print the framework in this format and exit
    #[arg(long, value_name = "FORMAT")]
    emit: Option<Format>,

    /// Compare engines over generated frameworks; seed may be a range a..b
    #[arg(long, value_name = "SPEC", conflicts_with_all = ["input", "gen", "family"])]
    bench: Option<GenArg>,

    /// Engines compared by --bench, comma separated
    #[arg(long, value_delimiter = ',', default_value = "set,label")]
    engines: Vec<Engine>,
}

fn family_arg(s: &str) -> Result<Framework, CliError> {
    let (name, n) = s
        .split_once(',')
        .ok_or_else(|| CliError::Usage(format!("expected NAME,n, got `{s}`")))?;
    let kind: Family = name.trim().parse()?;
    let n: usize = n
        .trim()
        .parse()
        .map_err(|e| CliError::Usage(format!("bad size `{n}`: {e}")))?;
    Ok(family(kind, n)?)
}

fn framework(args: &Args) -> Result<Framework, CliError> {
    if let Some(g) = &args.gen {
        if g.seeds.start() != g.seeds.end() {
            return Err(CliError::Usage("--gen takes a single seed".into()));
        }
        return Ok(random_af(&g.specs().next().expect("non-empty seed range"))?);
    }
    if let Some(s) = &args.family {
        return family_arg(s);
    }
    match &args.input {
        Some(path) => load(path, args.format),
        None => Err(CliError::Usage(
            "no input: give a file, --gen, --family or --bench".into(),
        )),
    }
}

fn real_main(args: Args) -> Result<(), CliError> {
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    if let Some(spec) = &args.bench {
        bench(spec, &args.engines, args.order, &mut out)?;
        out.flush()?;
        return Ok(());
    }
    let f = framework(&args)?;
    if let Some(format) = args.emit {
        match format {
            Format::Apx => afio::write_apx(&mut out, &f)?,
            Format::Tgf => afio::write_tgf(&mut out, &f)?,
        }
        out.flush()?;
        return Ok(());
    }
    let cfg = RunConfig {
        task: args.task,
        engine: args.engine,
        order: args.order,
        check_invariants: args.check_invariants,
        trace: args.trace,
        verify: args.verify,
    };
    run(&cfg, &f, &mut out)?;
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match real_main(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("afstable: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
