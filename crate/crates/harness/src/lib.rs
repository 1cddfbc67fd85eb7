//! Experiment orchestration for the walk-on-spheres solvers: configuration,
//! replicate runs, rate/KS/mean-dimension studies and their CSV output.

pub mod config;
pub mod experiments;
pub mod output;

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use wos_core::analysis::SyntheticFunctional;
use wos_core::geometry::Scene;

pub use config::ExperimentConfig;
pub use experiments::{KsRow, RateRow, ResultRow, SobolRow, SobolSummary};

fn out_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

/// Run every cell of `cfg` and write `results.csv` into its output directory.
pub fn cmd_run(cfg: &ExperimentConfig) -> Result<PathBuf> {
    let rows = experiments::with_threads(cfg.threads, || experiments::run_experiment(cfg))??;
    out_dir(&cfg.out)?;
    let path = cfg.out.join("results.csv");
    output::write_csv(&path, &rows)?;
    Ok(path)
}

/// Read a results CSV and write `rates.csv`, `rates.dat` and
/// `rates_table.txt` into `out`.
pub fn cmd_rates(input: &Path, out: &Path, exact: Option<f64>) -> Result<Vec<RateRow>> {
    let results: Vec<ResultRow> = output::read_csv(input)?;
    let rows = experiments::rates(&results, exact)?;
    out_dir(out)?;
    output::write_csv(&out.join("rates.csv"), &rows)?;
    output::write_text(&out.join("rates.dat"), &output::rates_dat(&rows))?;
    output::write_text(&out.join("rates_table.txt"), &experiments::rates_table(&rows))?;
    Ok(rows)
}

/// Discrepancy study; writes `ks.csv` and `ks.dat`.
pub fn cmd_ks(cfg: &ExperimentConfig) -> Result<Vec<KsRow>> {
    let rows = experiments::with_threads(cfg.threads, || experiments::ks_study(cfg))??;
    out_dir(&cfg.out)?;
    output::write_csv(&cfg.out.join("ks.csv"), &rows)?;
    output::write_text(&cfg.out.join("ks.dat"), &output::ks_dat(&rows))?;
    Ok(rows)
}

/// Mean-dimension study; writes `sobol.csv`, `sobol_summary.csv` and
/// `sobol_table.txt`.
pub fn cmd_sobol(
    cfg: &ExperimentConfig,
    synthetic: Option<SyntheticFunctional>,
) -> Result<(Vec<SobolRow>, Vec<SobolSummary>)> {
    let (rows, summaries) = experiments::with_threads(cfg.threads, || experiments::sobol_study(cfg, synthetic))??;
    out_dir(&cfg.out)?;
    output::write_csv(&cfg.out.join("sobol.csv"), &rows)?;
    output::write_csv(&cfg.out.join("sobol_summary.csv"), &summaries)?;
    output::write_text(&cfg.out.join("sobol_table.txt"), &experiments::sobol_table(&summaries))?;
    Ok((rows, summaries))
}

/// Write a built-in scene as a scene file.
pub fn cmd_export_scene(name: &str, path: &Path) -> Result<()> {
    let scene = Scene::builtin(name)?;
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        out_dir(dir)?;
    }
    scene.save(path).with_context(|| format!("writing {}", path.display()))
}
