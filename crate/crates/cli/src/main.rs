mod run;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use run::{render_text, Command, CommandRequest, RunError, Status};

#[derive(Parser)]
#[command(name = "loopalg", version, about = "Exact computations with twisted loop algebras")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build an algebra and validate its multiplication table
    Build(Common),
    /// Eigenspace grading of an automorphism
    Grade(Common),
    /// Classes of loop algebras of a type
    Classify(Common),
    /// Affine Cartan matrix of L(π ∘ τ_s)
    ExtractGcm(Common),
    /// Untwisting isomorphism L(π ∘ τ_s) ≅ L(π)
    Untwist(Common),
    /// Cocycle identity and twisted fixed points
    DescentVerify(Common),
    /// Homogeneous centroid of a loop algebra
    Centroid(Common),
    /// Run the full verification suite
    VerifyAll(Common),
}

#[derive(Args, Clone)]
struct Common {
    /// Built-in type label such as A2 or D4
    #[arg(long = "type")]
    type_label: Option<String>,
    /// Algebra JSON file
    #[arg(long)]
    algebra: Option<PathBuf>,
    /// Use the n×n matrix algebra
    #[arg(long, value_name = "N")]
    matrix_algebra: Option<usize>,
    /// Automorphism as JSON: {"pi":[..],"s":[..],"m":m} or {"period":p,"matrix":[[..]]}
    #[arg(long)]
    auto: Option<String>,
    /// Degree window
    #[arg(long)]
    window: Option<i64>,
    /// Centroid degree shift (residue)
    #[arg(long)]
    shift: Option<u32>,
    /// Criteria to run, e.g. --only 1,7
    #[arg(long, value_delimiter = ',')]
    only: Vec<u8>,
    /// Run verify-all with an empty fixture list
    #[arg(long)]
    no_fixtures: bool,
    #[arg(long, conflicts_with = "text")]
    json: bool,
    #[arg(long)]
    text: bool,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn split(cmd: Cmd) -> (Command, Common) {
    match cmd {
        Cmd::Build(c) => (Command::Build, c),
        Cmd::Grade(c) => (Command::Grade, c),
        Cmd::Classify(c) => (Command::Classify, c),
        Cmd::ExtractGcm(c) => (Command::ExtractGcm, c),
        Cmd::Untwist(c) => (Command::Untwist, c),
        Cmd::DescentVerify(c) => (Command::DescentVerify, c),
        Cmd::Centroid(c) => (Command::Centroid, c),
        Cmd::VerifyAll(c) => (Command::VerifyAll, c),
    }
}

fn emit(body: &str, out: Option<&PathBuf>) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, body).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, c) = split(cli.command);
    let request = CommandRequest {
        command: Some(command),
        type_label: c.type_label,
        algebra: c.algebra,
        matrix_algebra: c.matrix_algebra,
        auto: c.auto,
        window: c.window,
        shift: c.shift,
        only: c.only,
        no_fixtures: c.no_fixtures,
    };
    let start = Instant::now();
    let result = run::run(request);
    eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    let report = match result {
        Ok(r) => r,
        Err(RunError::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(RunError::Failed(msg)) => {
            eprintln!("verification failed: {msg}");
            return ExitCode::from(1);
        }
    };
    let body = if c.text {
        let status = match report.status {
            Status::Pass => "pass",
            Status::Fail => "fail",
        };
        let detail = report.text.clone().unwrap_or_else(|| render_text(&report.payload));
        format!("status: {status}\n{detail}")
    } else {
        let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
        s.push('\n');
        s
    };
    if let Err(e) = emit(&body, c.out.as_ref()) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match report.status {
        Status::Pass => ExitCode::SUCCESS,
        Status::Fail => ExitCode::from(1),
    }
}
