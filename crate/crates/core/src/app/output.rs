//! CSV and JSON writers.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::{AppError, RunReport, SweepRow};
use crate::error::Result as NumResult;
use crate::evolution::Trajectory;
use crate::invariants::{
    generalized_ph_residual, intertwining_residual, physical_inner_product, unitarity_drift,
};
use crate::model::Scenario;

pub(crate) fn ensure_dir(dir: &Path) -> Result<(), AppError> {
    std::fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))?;
    let meta = std::fs::metadata(dir).map_err(|e| AppError::io(dir, e))?;
    if meta.permissions().readonly() {
        return Err(AppError::Validation(format!(
            "output_dir {} is not writable",
            dir.display()
        )));
    }
    Ok(())
}

fn write(path: PathBuf, contents: &str) -> Result<PathBuf, AppError> {
    std::fs::write(&path, contents).map_err(|e| AppError::io(&path, e))?;
    Ok(path)
}

fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

/// Time series with columns `t, re_0, im_0, …, physical_norm, unitarity_drift,
/// intertwining_residual, generalized_ph_residual`; one row per grid point.
pub(crate) fn trajectory_csv(scenario: &Scenario, traj: &Trajectory) -> NumResult<String> {
    let metric = scenario.metric();
    let drift = unitarity_drift(traj, metric)?;
    let inter = match traj.propagators {
        Some(_) => Some(intertwining_residual(traj, metric)?),
        None => None,
    };
    let mut out = String::from("t");
    for i in 0..scenario.dim() {
        let _ = write!(out, ",re_{i},im_{i}");
    }
    out.push_str(",physical_norm,unitarity_drift,intertwining_residual,generalized_ph_residual\n");
    for (k, (t, phi)) in traj.grid.times().zip(&traj.states).enumerate() {
        let _ = write!(out, "{t:e}");
        for z in phi.as_slice() {
            let _ = write!(out, ",{:e},{:e}", z.re, z.im);
        }
        let norm = physical_inner_product(phi, phi, &metric.theta_at(t)?).re;
        let _ = write!(out, ",{norm:e},{:e},", drift.values[k]);
        if let Some(inter) = &inter {
            let _ = write!(out, "{:e}", inter.values[k]);
        }
        let _ = writeln!(out, ",{:e}", generalized_ph_residual(scenario, traj, k)?);
    }
    Ok(out)
}

pub(crate) fn write_trajectory_csv(
    dir: &Path,
    scenario: &Scenario,
    traj: &Trajectory,
) -> Result<PathBuf, AppError> {
    let csv = trajectory_csv(scenario, traj)?;
    write(
        dir.join(format!("{}_{}.csv", file_stem(scenario.name()), traj.mode)),
        &csv,
    )
}

pub(crate) fn write_report_json(dir: &Path, report: &RunReport) -> Result<PathBuf, AppError> {
    let json = serde_json::to_string_pretty(report)?;
    write(
        dir.join(format!("{}_report.json", file_stem(&report.scenario.name))),
        &json,
    )
}

pub(crate) fn write_sweep_csv(
    dir: &Path,
    parameter: &str,
    rows: &[SweepRow],
) -> Result<PathBuf, AppError> {
    let mut out = String::from("value,mode,max_unitarity_drift,observability_defect\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{:e},{},{:e},{:e}",
            r.value, r.mode, r.max_unitarity_drift, r.observability_defect
        );
    }
    write(
        dir.join(format!("sweep_{}.csv", file_stem(parameter))),
        &out,
    )
}
