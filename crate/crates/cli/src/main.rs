//! `qpcount`: counting functions, quasi-polynomials and numerical semigroups from the
//! command line. Exit codes: 0 success, 1 usage error, 2 computation error.

mod commands;
mod input;
mod render;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

use commands::Failure;
use settings::{Knobs, Settings};

#[derive(Parser, Debug)]
#[command(name = "qpcount", version, about = "Exact parametric lattice-point counting")]
struct Cli {
    /// Print JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    /// `key = value` file with tuning knobs; flags take precedence
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Worker threads; 1 disables parallel search
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(flatten)]
    knobs: Knobs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count the solutions of a formula at given parameter values
    Count(commands::CountArgs),
    /// Solution maximizing a linear objective, lexicographically smallest among ties
    Argmax(commands::ArgmaxArgs),
    /// Eliminate the quantifiers of a formula
    Qe(commands::FormulaArgs),
    /// Fit the count of a one-parameter formula as an eventual quasi-polynomial
    Fit(commands::FitArgs),
    /// floor(f(t)/g(t)) as a certified eventual quasi-polynomial
    Floordiv(commands::FloorDivArgs),
    /// gcd(f1(t), ..., fk(t)) as an eventual quasi-polynomial
    Gcd(commands::GcdArgs),
    /// Ehrhart quasi-polynomial of a rational polytope
    Ehrhart(commands::EhrhartArgs),
    /// Lattice points of the twisting square
    TwistCount(commands::TwistArgs),
    /// Integer hull of a plane polygon family
    Hull(commands::HullArgs),
    /// Frobenius number, genus, gaps and Apéry set of a numerical semigroup
    Frobenius(commands::FrobeniusArgs),
    /// Check a piecewise quasi-polynomial against direct counts on a grid
    VerifyPqp(commands::VerifyPqpArgs),
}

fn execute(cli: &Cli) -> Result<Value, Failure> {
    let s = Settings::load(cli.config.as_deref(), &cli.knobs, cli.jobs)?;
    s.fit.validate()?;
    if let Some(n) = s.jobs {
        // the global pool can be set once; a second call in the same process is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match &cli.command {
        Command::Count(a) => commands::count(a, &s),
        Command::Argmax(a) => commands::argmax(a, &s),
        Command::Qe(a) => commands::qe(a),
        Command::Fit(a) => commands::fit(a, &s),
        Command::Floordiv(a) => commands::floordiv(a, &s),
        Command::Gcd(a) => commands::gcd(a),
        Command::Ehrhart(a) => commands::ehrhart(a),
        Command::TwistCount(a) => commands::twist_count(a, &s),
        Command::Hull(a) => commands::hull(a, &s),
        Command::Frobenius(a) => commands::frobenius(a, &s),
        Command::VerifyPqp(a) => commands::verify_pqp(a),
    }
}

fn main() -> ExitCode {
    let json = std::env::args().any(|a| a == "--json");
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            if json {
                let text = e.render().to_string();
                let first = text.lines().next().unwrap_or_default().trim_start_matches("error: ");
                println!("{}", render::error("USAGE", first));
            }
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let (kind, message, code) = match execute(&cli) {
        Ok(v) => {
            if cli.json {
                println!("{v}");
            } else {
                print!("{}", render::text(&v));
            }
            return ExitCode::SUCCESS;
        }
        Err(Failure::Usage(e)) => ("USAGE", e.0, 1),
        Err(Failure::Compute(e)) => (e.kind(), e.to_string(), 2),
    };
    if cli.json {
        println!("{}", render::error(kind, &message));
    }
    eprintln!("error: {kind}: {message}");
    ExitCode::from(code)
}
