use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{de::DeserializeOwned, Serialize};

use crate::experiments::{KsRow, RateRow};

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    r.deserialize()
        .enumerate()
        .map(|(i, row)| row.with_context(|| format!("{} row {}", path.display(), i + 1)))
        .collect()
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Gnuplot data: one block per `(scene, method, points)` with the fitted line
/// and an `n^-1` reference through the first point.
pub fn rates_dat(rows: &[RateRow]) -> String {
    let mut keys: Vec<(&str, &str, &str)> = Vec::new();
    for r in rows {
        let k = (r.scene.as_str(), r.method.as_str(), r.points.as_str());
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    let mut out = String::new();
    for (scene, method, points) in keys {
        let block: Vec<&RateRow> =
            rows.iter().filter(|r| r.scene == scene && r.method == method && r.points == points).collect();
        let anchor = block[0].mse.unwrap_or(block[0].variance) * block[0].n as f64;
        let _ = writeln!(out, "# {scene} {method} {points}\n# n spread fit ref_n^-1");
        for r in block {
            let fit = match (r.slope, r.intercept) {
                (Some(s), Some(c)) => (c + s * (r.n as f64).ln()).exp(),
                _ => f64::NAN,
            };
            let _ = writeln!(out, "{} {} {} {}", r.n, r.mse.unwrap_or(r.variance), fit, anchor / r.n as f64);
        }
        out.push_str("\n\n");
    }
    out
}

/// Gnuplot data: one block per `(t, method, points)`.
pub fn ks_dat(rows: &[KsRow]) -> String {
    let mut out = String::new();
    let mut last: Option<(u64, &str, &str)> = None;
    for r in rows {
        let key = (r.t.to_bits(), r.method.as_str(), r.points.as_str());
        if last != Some(key) {
            if last.is_some() {
                out.push_str("\n\n");
            }
            let _ = writeln!(out, "# t={} {} {}\n# n mean_ks se_ks ref_mc ref_opt", r.t, r.method, r.points);
            last = Some(key);
        }
        let _ = writeln!(out, "{} {} {} {} {}", r.n, r.mean_ks, r.se_ks, r.ref_mc, r.ref_opt);
    }
    out
}
