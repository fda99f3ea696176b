//! `hardy` — minorants, best constants, and half-line reductions for
//! weighted inequalities over ordered cores, with built-in verification.
//!
//! Exit codes: 0 success, 1 validation error, 2 property-check failure.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{cmd_constant, cmd_minorant, cmd_reduce, cmd_verify, ConstantOptions, VerifyOptions};
use hardy_core::hardy::OuterExponent;
use report::Emit;

#[derive(Parser)]
#[command(name = "hardy", version, about = "Best constants in weighted inequalities over ordered cores")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EmitArg {
    Json,
    Csv,
}

impl From<EmitArg> for Emit {
    fn from(e: EmitArg) -> Emit {
        match e {
            EmitArg::Json => Emit::Json,
            EmitArg::Csv => Emit::Csv,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OuterArg {
    #[value(name = "theoremA", alias = "theorema")]
    TheoremA,
    #[value(name = "stepanov")]
    Stepanov,
}

impl From<OuterArg> for OuterExponent {
    fn from(o: OuterArg) -> OuterExponent {
        match o {
            OuterArg::TheoremA => OuterExponent::TheoremA,
            OuterArg::Stepanov => OuterExponent::Stepanov,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the greatest core-decreasing minorant of the weight density
    /// and cross-check the transport identity against the exact LP
    Minorant {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        emit: EmitArg,
    },
    /// Evaluate the best-constant formula (p = 1) or the tail/ball
    /// condition (p > 1) and attach oracle bounds
    Constant {
        file: PathBuf,
        /// Outer exponent closing the q < 1 display
        #[arg(long, value_enum, default_value = "theoremA")]
        outer_exponent: OuterArg,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Random-restart count for the lower-bound search
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        /// Objective-evaluation budget per restart
        #[arg(long, default_value_t = 4000)]
        budget: usize,
        #[arg(long, value_enum, default_value = "json")]
        emit: EmitArg,
    },
    /// Emit the half-line data (lambda, nu, w) of a p = 1 instance
    Reduce {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        emit: EmitArg,
    },
    /// Run the seeded randomized verification suites
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Instances per suite
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Maximum points per instance
        #[arg(long, default_value_t = 8)]
        size: usize,
        /// Largest tolerated two-sided sandwich ratio
        #[arg(long, default_value_t = 32.0)]
        sandwich_bound: f64,
        #[arg(long, value_enum, default_value = "json")]
        emit: EmitArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = match &cli.command {
        Command::Minorant { file, emit } => cmd_minorant(file, (*emit).into()),
        Command::Constant {
            file,
            outer_exponent,
            seed,
            restarts,
            budget,
            emit,
        } => cmd_constant(
            file,
            &ConstantOptions {
                outer: (*outer_exponent).into(),
                seed: *seed,
                restarts: *restarts,
                budget: *budget,
            },
            (*emit).into(),
        ),
        Command::Reduce { file, emit } => cmd_reduce(file, (*emit).into()),
        Command::Verify {
            seed,
            count,
            size,
            sandwich_bound,
            emit,
        } => cmd_verify(
            &VerifyOptions {
                seed: *seed,
                count: *count,
                size: *size,
                sandwich_bound: *sandwich_bound,
            },
            (*emit).into(),
        ),
    };
    // timing stays out of the canonical report
    eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    match outcome {
        Ok(out) => {
            print!("{}", out.report);
            if out.checks_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
