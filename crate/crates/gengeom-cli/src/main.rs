//! Command-line front end: reads a problem document (a path or `-` for
//! stdin), runs one pipeline and writes the report to stdout. The exit code
//! is 0 only when every verdict passes.

use std::collections::BTreeMap;
use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gengeom::workbench::{cmd_example, execute, Command, ProblemDocument, RunOptions};

#[derive(Parser)]
#[command(name = "gengeom", version, about = "Exact T-duality workbench for polynomial generalised geometry")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct RunArgs {
    /// Problem document, or `-` for stdin.
    file: String,
    /// Seed of the sample plan and random test data.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of sample points / random test tuples.
    #[arg(long)]
    samples: Option<usize>,
    /// Sampling box `a,b` (rationals).
    #[arg(long = "box", allow_hyphen_values = true)]
    bx: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Record wall-clock time in the report.
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Courant axioms, reducibility, positivity and invariance checks.
    Check(RunArgs),
    /// Reduce the flux along every subbundle.
    Reduce(RunArgs),
    /// Build the relation between the two reductions.
    Relate(RunArgs),
    /// Run the full T-duality pipeline and emit the dual background.
    Tdualize(RunArgs),
    /// Fluxes, admissible directions and the para-Hermitian Buscher rules.
    ParaCheck(RunArgs),
    /// Emit a packaged example document.
    Example {
        /// `lens`, `heisenberg` or `circle`.
        name: String,
        /// Parameters such as `m=1 k=2 n=2` or `R=3/2`.
        params: Vec<String>,
    },
}

fn read_document(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| format!("reading stdin: {e}"))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))
    }
}

fn run(command: Command, args: RunArgs) -> Result<bool, String> {
    let doc = ProblemDocument::from_json(&read_document(&args.file)?).map_err(|e| e.to_string())?;
    let opts = RunOptions {
        seed: args.seed,
        samples: args.samples,
        bx: args.bx,
    };
    let start = Instant::now();
    let mut report = execute(&doc, command, &opts).map_err(|e| e.to_string())?;
    if args.timings {
        report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    match args.format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => print!("{}", report.render_text()),
    }
    Ok(report.passed())
}

fn example(name: &str, params: &[String]) -> Result<bool, String> {
    let params = params
        .iter()
        .map(|p| {
            p.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| format!("parameter `{p}` is not of the form key=value"))
        })
        .collect::<Result<BTreeMap<_, _>, _>>()?;
    let doc = cmd_example(name, &params).map_err(|e| e.to_string())?;
    println!("{}", doc.to_json());
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Cmd::Check(a) => run(Command::Check, a),
        Cmd::Reduce(a) => run(Command::Reduce, a),
        Cmd::Relate(a) => run(Command::Relate, a),
        Cmd::Tdualize(a) => run(Command::Tdualize, a),
        Cmd::ParaCheck(a) => run(Command::ParaCheck, a),
        Cmd::Example { name, params } => example(&name, &params),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
