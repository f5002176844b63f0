use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use quasishuffle::cli::{
    exit_code_for, expand, phi, run_case, CaseConfig, CaseReport, DepthConfig, Format, Mode, Target, Verdict, CASE_NAMES,
};
use quasishuffle::golden::{golden_file_name, GoldenValues};
use quasishuffle::{laurent, psido, Error, Result};

/// Exact computations in the quasi-shuffle algebra and its KP/AKNS images.
#[derive(Parser)]
#[command(name = "qsh", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format: text, latex or json.
    #[arg(long, global = true, default_value = "text")]
    format: String,

    /// Truncation depth of L, of V, or of a reduction chain.
    #[arg(long, global = true)]
    depth: Option<usize>,

    /// Number of flows t1..tN to resolve.
    #[arg(long, global = true)]
    flows: Option<usize>,

    /// Evaluation mode of the AKNS map: abstract, matrix2 or matrix3.
    #[arg(long, global = true)]
    mode: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Normal form of an expression in the composition basis.
    Expand {
        /// Expression such as "4*(P^3 o P) - (P o P o P o P)"; `-` or nothing reads stdin.
        expr: Option<String>,
    },
    /// Image of an expression under Phi.
    Phi {
        #[arg(long, default_value = "kp")]
        target: String,
        expr: Option<String>,
    },
    /// Run a named verification case, or `all`.
    Run { case: String },
    /// Compare the KP flow tables and residues with the stored golden file.
    Golden {
        /// Directory holding the golden files.
        #[arg(long, default_value = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden"))]
        dir: PathBuf,
        /// Rewrite the golden file from the current computation.
        #[arg(long)]
        golden_regen: bool,
    },
    /// List the case names.
    Cases,
}

fn read_expr(arg: Option<String>) -> Result<String> {
    match arg.as_deref() {
        Some("-") | None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Error::InvalidArgument(format!("cannot read stdin: {e}")))?;
            Ok(s.trim().to_string())
        }
        Some(s) => Ok(s.to_string()),
    }
}

fn render(r: &CaseReport, format: Format) -> String {
    match format {
        Format::Text => r.to_text(),
        Format::Latex => r.to_latex(),
        Format::Json => r.to_json(),
    }
}

fn run(cli: Cli) -> Result<i32> {
    let format: Format = cli.format.parse()?;
    let mode: Option<Mode> = cli.mode.as_deref().map(str::parse).transpose()?;
    match cli.command {
        Command::Expand { expr } => {
            println!("{}", expand(&read_expr(expr)?, format)?);
            Ok(0)
        }
        Command::Phi { target, expr } => {
            let target: Target = target.parse()?;
            let mode = mode.unwrap_or(Mode::Abstract);
            let default_depth = match (target, mode) {
                (Target::Kp, _) => psido::DEFAULT_DEPTH,
                (_, Mode::Matrix3) => 4,
                _ => laurent::DEFAULT_DEPTH,
            };
            let default_flows = if mode == Mode::Matrix3 { 2 } else { psido::DEFAULT_FLOWS };
            let cfg = DepthConfig { depth: cli.depth.unwrap_or(default_depth), flows: cli.flows.unwrap_or(default_flows) };
            println!("{}", phi(&read_expr(expr)?, target, mode, cfg, format)?);
            Ok(0)
        }
        Command::Run { case } => {
            let cfg = CaseConfig { depth: cli.depth, flows: cli.flows, mode };
            let names: Vec<&str> = if case == "all" { CASE_NAMES.to_vec() } else { vec![case.as_str()] };
            let mut reports = Vec::new();
            for name in names {
                // in `all`, cases that cannot take the given mode are skipped
                match run_case(name, &cfg) {
                    Err(Error::InvalidArgument(_)) if case == "all" => continue,
                    r => reports.push(r?),
                }
            }
            if format == Format::Json && case == "all" {
                println!("{}", serde_json::to_string_pretty(&reports).expect("reports serialize"));
            } else {
                for r in &reports {
                    println!("{}", render(r, format).trim_end());
                }
            }
            let worst = if reports.iter().any(|r| r.verdict == Verdict::Fail) {
                Verdict::Fail
            } else if reports.iter().any(|r| r.verdict == Verdict::InsufficientDepth) {
                Verdict::InsufficientDepth
            } else {
                Verdict::Pass
            };
            Ok(worst.exit_code())
        }
        Command::Golden { dir, golden_regen } => {
            let depth = cli.depth.unwrap_or(psido::DEFAULT_DEPTH);
            let flows = cli.flows.unwrap_or(psido::DEFAULT_FLOWS);
            let path = dir.join(golden_file_name(depth));
            let computed = GoldenValues::compute(depth, flows)?;
            if golden_regen {
                computed.write(&path)?;
                println!("wrote {}", path.display());
                return Ok(0);
            }
            let stored = GoldenValues::read(&path)?;
            if stored == computed {
                println!("{}: match", path.display());
                Ok(0)
            } else {
                println!("{}: MISMATCH", path.display());
                Ok(1)
            }
        }
        Command::Cases => {
            for n in CASE_NAMES {
                println!("{n}");
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e) as u8)
        }
    }
}
