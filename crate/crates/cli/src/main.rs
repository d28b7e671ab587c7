use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use realbundle::input::InputSpec;
use realbundle::numeric::SampleCloud;
use realbundle::pipeline::{
    self, numeric_text, run_classify, run_curve, run_normal_form, run_report, run_sw, run_verify,
    RunOptions, StageError,
};

#[derive(Parser)]
#[command(
    name = "realbundle",
    version,
    about = "Topology of real moduli spaces built from real hyperelliptic curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the whole pipeline.
    Report(RunArgs),
    /// Real locus, interval parities and chart.
    CurveInfo(InputArgs),
    /// Real normal form of the pencil and its congruence check.
    NormalForm(InputArgs),
    /// Deformation invariant and, in genus two, the diffeomorphism type.
    Classify(InputArgs),
    /// Stiefel-Whitney classes for a given genus.
    Sw(SwArgs),
    /// Numeric sampling of the quadric intersection.
    Verify(RunArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Input file (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Print JSON instead of text.
    #[arg(long)]
    machine: bool,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    io: InputArgs,
    /// Truncation degree for the characteristic classes.
    #[arg(long)]
    dmax: Option<usize>,
    /// Number of Newton starts.
    #[arg(long)]
    samples: Option<usize>,
    /// Seed for the starts.
    #[arg(long)]
    seed: Option<u64>,
    /// Skip the numeric stage.
    #[arg(long)]
    skip_numeric: bool,
    /// Write the sample cloud to this file, one point per line.
    #[arg(long)]
    export_cloud: Option<PathBuf>,
}

#[derive(Args)]
struct SwArgs {
    #[arg(long)]
    genus: usize,
    #[arg(long)]
    dmax: Option<usize>,
    #[arg(long)]
    machine: bool,
}

fn load(path: &Path) -> Result<InputSpec, StageError> {
    InputSpec::from_path(path).map_err(StageError::from)
}

fn options(spec: &InputSpec, a: &RunArgs) -> RunOptions {
    let mut o = RunOptions::from_input(&spec.options);
    if a.dmax.is_some() {
        o.d_max = a.dmax;
    }
    if let Some(n) = a.samples {
        o.samples = n;
    }
    if let Some(s) = a.seed {
        o.seed = s;
    }
    o.skip_numeric |= a.skip_numeric;
    o
}

fn emit<T: Serialize>(machine: bool, value: &T, text: impl FnOnce(&T) -> String) {
    if machine {
        println!(
            "{}",
            serde_json::to_string_pretty(value).expect("records serialize")
        );
    } else {
        println!("{}", text(value));
    }
}

fn export(path: &Option<PathBuf>, cloud: Option<&SampleCloud<f64>>) -> Result<(), StageError> {
    if let (Some(p), Some(c)) = (path, cloud) {
        std::fs::write(p, c.to_rows()).map_err(|e| StageError {
            stage: pipeline::Stage::Numeric,
            kind: pipeline::FailureKind::Input,
            message: format!("cannot write {}: {e}", p.display()),
        })?;
    }
    Ok(())
}

fn run(cmd: &Command) -> Result<(), StageError> {
    match cmd {
        Command::Report(a) => {
            let spec = load(&a.io.input)?;
            let (report, cloud) = run_report(&spec, &options(&spec, a))?;
            export(&a.export_cloud, cloud.as_ref())?;
            emit(a.io.machine, &report, |r| r.to_text());
        }
        Command::CurveInfo(a) => {
            let curve = run_curve(&load(&a.input)?)?;
            emit(a.machine, &curve.info, |c| c.to_text());
        }
        Command::NormalForm(a) => {
            let curve = run_curve(&load(&a.input)?)?;
            let nf = run_normal_form(&curve)?;
            emit(a.machine, &nf.record, |r| r.to_text());
        }
        Command::Classify(a) => {
            let curve = run_curve(&load(&a.input)?)?;
            let nf = run_normal_form(&curve)?;
            let record = run_classify(&curve, &nf)?;
            emit(a.machine, &record, |r| r.to_text());
        }
        Command::Sw(a) => {
            let report = run_sw(a.genus, a.dmax)?;
            emit(a.machine, &report, |r| r.to_string());
        }
        Command::Verify(a) => {
            let spec = load(&a.io.input)?;
            let (report, cloud) = run_verify(&spec, &options(&spec, a))?;
            export(&a.export_cloud, Some(&cloud))?;
            emit(a.io.machine, &report, numeric_text);
        }
    }
    Ok(())
}

fn machine_flag(cmd: &Command) -> bool {
    match cmd {
        Command::Report(a) | Command::Verify(a) => a.io.machine,
        Command::CurveInfo(a) | Command::NormalForm(a) | Command::Classify(a) => a.machine,
        Command::Sw(a) => a.machine,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if machine_flag(&cli.command) {
                let body = serde_json::json!({ "error": e });
                println!(
                    "{}",
                    serde_json::to_string_pretty(&body).expect("error serializes")
                );
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
