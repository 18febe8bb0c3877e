//! Writes the CSV/JSON datasets the CLI produces into a directory.
//!
//! `cargo run --example figure_datasets -- out/`

use std::path::PathBuf;

use circle_oscillator::datasets::{cmd_eigenfunctions, cmd_ladder, cmd_sweep, AxisRange, SweepRequest};
use circle_oscillator::io::{companion_path, Format};
use circle_oscillator::OscillatorParams;

fn main() -> circle_oscillator::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "datasets".into()));
    std::fs::create_dir_all(&dir).map_err(|e| circle_oscillator::Error::Io(e.to_string()))?;

    let sweeps = [
        ("levels_vs_ell.csv", SweepRequest::new(AxisRange::linear(0.25, 6.0, 24), AxisRange::single(0.0), 8)?),
        ("pollution.csv", SweepRequest::new(AxisRange::linear(0.25, 6.0, 24), AxisRange::single(-1.0), 4)?),
        ("levels_vs_beta.csv", SweepRequest::new(AxisRange::single(1.0), AxisRange::linear(-3.0, 3.0, 25), 6)?),
    ];
    for (name, req) in &sweeps {
        let d = cmd_sweep(req);
        d.write_to(&dir.join(name), Format::Csv)?;
        println!("{name}: {} rows ({})", d.rows().len(), d.tag());
    }

    let params = OscillatorParams::new(std::f64::consts::PI, 0.0)?;
    let u = cmd_eigenfunctions(&params, &[0, 1, 2, 3, 4, 5], 513)?;
    u.write_to(&dir.join("eigenfunctions.json"), Format::Json)?;
    println!("eigenfunctions.json: {} rows", u.rows().len());

    let ladder = cmd_ladder(2.0, 3)?;
    let path = dir.join("ladder.csv");
    ladder.levels.write_to(&path, Format::Csv)?;
    ladder.checks.write_to(&companion_path(&path, "checks"), Format::Csv)?;
    println!("ladder.csv: {} levels, identities passed: {}", ladder.levels.rows().len(), ladder.passed);
    Ok(())
}
