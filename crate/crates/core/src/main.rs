use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use planemap::harness::cli::{self, error_json, exit_code, GenerateArgs, Outcome, EXIT_USAGE};
use planemap::{Error, Result};

#[derive(Parser)]
#[command(
    name = "planemap",
    about = "Polynomial maps of the plane with a line as branch locus"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Geometric degree and branch locus.
    Analyze {
        map_file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Automorphism sending x to the given polynomial, if one exists.
    Rectify { poly: String },
    /// Normal form with replayable words.
    Normalize {
        map_file: PathBuf,
        #[arg(long)]
        trace: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Random instance with known normal form.
    Generate {
        #[arg(long = "type")]
        ty: String,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        n: Option<u32>,
        /// Comma-separated rationals.
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        word_len: usize,
        #[arg(long, default_value_t = 2)]
        deg_bound: usize,
        #[arg(long, default_value_t = 3)]
        coeff_bound: i64,
    },
    /// Independent verification report.
    Verify {
        map_file: PathBuf,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Degree-ratio test for a union of parametrised curves.
    Jcurve {
        components_file: PathBuf,
        #[arg(long, default_value_t = 3)]
        probes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidParams(format!("{}: {e}", path.display())))
}

fn run(cmd: Cmd) -> Result<Outcome> {
    match cmd {
        Cmd::Analyze { map_file, seed } => cli::analyze(&read(&map_file)?, seed),
        Cmd::Rectify { poly } => cli::rectify(&poly),
        Cmd::Normalize {
            map_file,
            trace,
            seed,
        } => cli::normalize(&read(&map_file)?, seed, trace),
        Cmd::Generate {
            ty,
            d,
            m,
            n,
            a,
            seed,
            word_len,
            deg_bound,
            coeff_bound,
        } => cli::generate(&GenerateArgs {
            ty,
            d,
            m,
            n,
            a,
            seed,
            word_len,
            deg_bound,
            coeff_bound,
        }),
        Cmd::Verify {
            map_file,
            samples,
            seed,
        } => cli::verify(&read(&map_file)?, samples, seed),
        Cmd::Jcurve {
            components_file,
            probes,
            seed,
        } => cli::jcurve(&read(&components_file)?, probes, seed),
    }
}

fn main() -> ExitCode {
    let args = match Cli::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            return ExitCode::from(code as u8);
        }
    };
    match run(args.cmd) {
        Ok(out) => {
            let _ = writeln!(
                std::io::stdout(),
                "{}",
                serde_json::to_string_pretty(&out.doc).expect("serialisable")
            );
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!(
                "{}",
                serde_json::to_string_pretty(&error_json(&e)).expect("serialisable")
            );
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
