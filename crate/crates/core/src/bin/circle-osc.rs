use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use circle_oscillator::datasets::{cmd_eigenfunctions, cmd_ladder, cmd_spectrum, cmd_sweep, AxisRange, SweepRequest};
use circle_oscillator::error::{EXIT_OK, EXIT_USAGE, EXIT_VERIFY};
use circle_oscillator::grid::DEFAULT_POINTS;
use circle_oscillator::io::{companion_path, write_file, FigureDataset, Format};
use circle_oscillator::shooting::DEFAULT_LEVEL_COUNT;
use circle_oscillator::verify::{self, SuiteName};
use circle_oscillator::{Error, OscillatorParams, Result};

/// Harmonic oscillator on a circle: spectra, eigenfunctions, ladder checks.
#[derive(Parser)]
#[command(name = "circle-osc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// csv or json
    #[arg(long, default_value = "csv")]
    format: Format,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Lowest levels at one (ℓ, β) with the Galerkin oracle beside them.
    Spectrum {
        #[arg(long)]
        ell: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long, default_value_t = DEFAULT_LEVEL_COUNT)]
        levels: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Levels over an ℓ grid (--grid min:max:count[:log]) and β value or range.
    Sweep {
        /// ℓ range; use --ell instead for a single half-length.
        #[arg(long)]
        grid: Option<AxisRange>,
        #[arg(long, conflicts_with = "grid")]
        ell: Option<f64>,
        /// β value or min:max:count range.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        beta: AxisRange,
        #[arg(long, default_value_t = 8)]
        levels: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Normalized eigenfunctions u_0 .. u_{levels-1} sampled on a grid.
    Eigenfunctions {
        #[arg(long)]
        ell: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long, default_value_t = 6)]
        levels: usize,
        /// Explicit level indices, e.g. 0,2,5; overrides --levels.
        #[arg(long, value_delimiter = ',')]
        indices: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_POINTS)]
        points: usize,
        #[command(flatten)]
        output: Output,
    },
    /// H_N / H_A level diagram, one-step ladder identities and obstructions.
    Ladder {
        #[arg(long)]
        ell: f64,
        /// Highest rung k.
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Invariant suites: weber, shooting, galerkin, ladder, asymptotics, all.
    Verify {
        #[arg(default_value = "all")]
        suite: SuiteName,
        #[command(flatten)]
        output: Output,
    },
}

fn emit(d: &FigureDataset, output: &Output) -> Result<()> {
    match &output.out {
        Some(path) => d.write_to(path, output.format),
        None => {
            print!("{}", d.render(output.format)?);
            Ok(())
        }
    }
}

fn emit_ladder(out: &circle_oscillator::datasets::LadderOutput, output: &Output) -> Result<()> {
    match (output.format, &output.out) {
        (Format::Json, path) => {
            let text = serde_json::to_string_pretty(&out.to_json()).map_err(|e| Error::Io(e.to_string()))? + "\n";
            match path {
                Some(p) => write_file(p, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
        (Format::Csv, Some(path)) => {
            out.levels.write_to(path, Format::Csv)?;
            out.checks.write_to(&companion_path(path, "checks"), Format::Csv)
        }
        (Format::Csv, None) => {
            print!("{}\n{}", out.levels.to_csv_string()?, out.checks.to_csv_string()?);
            Ok(())
        }
    }
}

fn report_path(path: &Option<PathBuf>) -> String {
    path.as_deref().map(Path::display).map(|d| format!(" -> {d}")).unwrap_or_default()
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Spectrum { ell, beta, levels, output } => {
            emit(&cmd_spectrum(&OscillatorParams::new(ell, beta)?, levels)?, &output)?;
        }
        Command::Sweep { grid, ell, beta, levels, output } => {
            let ell_axis = match (grid, ell) {
                (Some(g), _) => g,
                (None, Some(l)) => AxisRange::single(l),
                (None, None) => return Err(Error::InvalidParams("sweep needs --grid or --ell".into())),
            };
            let d = cmd_sweep(&SweepRequest::new(ell_axis, beta, levels)?);
            emit(&d, &output)?;
            let failed = d.metadata()["failed_points"].as_u64().unwrap_or(0);
            if failed > 0 {
                eprintln!("{failed} sweep point(s) failed; see the error column{}", report_path(&output.out));
            }
        }
        Command::Eigenfunctions { ell, beta, levels, indices, points, output } => {
            let indices = if indices.is_empty() { (0..levels).collect() } else { indices };
            emit(&cmd_eigenfunctions(&OscillatorParams::new(ell, beta)?, &indices, points)?, &output)?;
        }
        Command::Ladder { ell, levels, output } => {
            let out = cmd_ladder(ell, levels)?;
            emit_ladder(&out, &output)?;
            if !out.passed {
                eprintln!("ladder identities failed at ℓ = {ell}");
                return Ok(EXIT_VERIFY);
            }
        }
        Command::Verify { suite, output } => {
            let report = verify::run(suite);
            emit(&report.to_dataset(), &output)?;
            for c in report.failures() {
                eprintln!("FAIL {}/{}: measured {:e}, tolerance {:e} ({})", c.suite, c.name, c.measured, c.tolerance, c.detail);
            }
            if !report.passed() {
                return Ok(if report.numerical_failure { circle_oscillator::error::EXIT_NUMERICAL } else { EXIT_VERIFY });
            }
        }
    }
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { EXIT_OK as u8 });
        }
    };
    let code = run(cli).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}
