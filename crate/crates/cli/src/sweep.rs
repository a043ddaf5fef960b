//! Parameter sweeps: one independent run per axis value, executed
//! concurrently, with per-point failures isolated into the summary table.

use std::fs;
use std::path::{Path, PathBuf};

use sqbath_core::fock::{InitialStateSpec, SqueezeParams};
use sqbath_core::profile::GammaProfile;

use crate::config::RunConfig;
use crate::run::{execute, RunOutcome};
use crate::{fmt_f64, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    R,
    Gamma0,
    NBar,
    Dim,
}

impl SweepAxis {
    pub fn parse(name: &str) -> Result<Self, CliError> {
        match name {
            "r" => Ok(SweepAxis::R),
            "gamma0" => Ok(SweepAxis::Gamma0),
            "n_bar" => Ok(SweepAxis::NBar),
            "dim" => Ok(SweepAxis::Dim),
            other => Err(CliError::Validation(format!(
                "sweep axis `{other}` is not one of r, gamma0, n_bar, dim"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::R => "r",
            SweepAxis::Gamma0 => "gamma0",
            SweepAxis::NBar => "n_bar",
            SweepAxis::Dim => "dim",
        }
    }
}

#[derive(Debug)]
pub struct SweepPoint {
    pub value: String,
    pub result: Result<RunOutcome, CliError>,
}

#[derive(Debug)]
pub struct SweepOutcome {
    pub points: Vec<SweepPoint>,
    pub summary_path: PathBuf,
}

impl SweepOutcome {
    pub fn all_ok(&self) -> bool {
        self.points.iter().all(|p| p.result.is_ok())
    }
}

fn suffix_path(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("output");
    let ext = path.extension().and_then(|s| s.to_str());
    let name = match ext {
        Some(e) => format!("{stem}_{suffix}.{e}"),
        None => format!("{stem}_{suffix}"),
    };
    path.with_file_name(name)
}

/// Derive the per-point config: substitute the axis value and suffix every
/// output path with `<axis><value>`.
fn point_config(base: &RunConfig, axis: SweepAxis, value: &str) -> Result<RunConfig, CliError> {
    let mut cfg = base.clone();
    match axis {
        SweepAxis::R => {
            let r: f64 = value
                .parse()
                .map_err(|_| CliError::Validation(format!("axis value `{value}` is not a number")))?;
            cfg.squeeze = SqueezeParams::new(r, base.squeeze.theta())
                .map_err(|e| CliError::Validation(format!("axis r: {e}")))?;
        }
        SweepAxis::Gamma0 => {
            let g: f64 = value
                .parse()
                .map_err(|_| CliError::Validation(format!("axis value `{value}` is not a number")))?;
            match base.gamma_profile {
                GammaProfile::Constant { .. } => {
                    cfg.gamma_profile = GammaProfile::constant(g)
                        .map_err(|e| CliError::Validation(format!("axis gamma0: {e}")))?;
                }
                _ => {
                    return Err(CliError::Validation(
                        "axis gamma0 requires gamma_profile.kind = \"constant\"".into(),
                    ))
                }
            }
        }
        SweepAxis::NBar => {
            let n: f64 = value
                .parse()
                .map_err(|_| CliError::Validation(format!("axis value `{value}` is not a number")))?;
            match base.initial_state {
                InitialStateSpec::Thermal { .. } => {
                    if !n.is_finite() || n < 0.0 {
                        return Err(CliError::Validation(format!(
                            "axis n_bar must be >= 0, got {n}"
                        )));
                    }
                    cfg.initial_state = InitialStateSpec::Thermal { n_bar: n };
                }
                _ => {
                    return Err(CliError::Validation(
                        "axis n_bar requires initial_state.kind = \"thermal\"".into(),
                    ))
                }
            }
        }
        SweepAxis::Dim => {
            let d: usize = value.parse().map_err(|_| {
                CliError::Validation(format!("axis value `{value}` is not a dimension"))
            })?;
            if d < 4 {
                return Err(CliError::Validation(format!("axis dim must be >= 4, got {d}")));
            }
            if let InitialStateSpec::Fock(n) = base.initial_state {
                if n >= d {
                    return Err(CliError::Validation(format!(
                        "Fock level {n} does not fit in swept dim = {d}"
                    )));
                }
            }
            cfg.dim = d;
        }
    }
    let tag = format!("{}{}", axis.name(), value);
    cfg.outputs.trajectory_path = suffix_path(&base.outputs.trajectory_path, &tag);
    cfg.outputs.diagnostics_path = suffix_path(&base.outputs.diagnostics_path, &tag);
    cfg.outputs.spectrum_path =
        base.outputs.spectrum_path.as_ref().map(|p| suffix_path(p, &tag));
    Ok(cfg)
}

/// Run every point concurrently; point failures are captured, not fatal.
/// The combined summary table lands next to the base diagnostics file.
pub fn run_sweep(
    base: &RunConfig,
    axis: SweepAxis,
    values: &[String],
) -> Result<SweepOutcome, CliError> {
    if values.is_empty() {
        return Err(CliError::Validation("sweep requires at least one axis value".into()));
    }
    // Axis applicability and value syntax are config-level errors: reject
    // before spending any compute.
    let configs: Vec<RunConfig> = values
        .iter()
        .map(|v| point_config(base, axis, v))
        .collect::<Result<_, _>>()?;

    let mut results: Vec<Option<Result<RunOutcome, CliError>>> =
        (0..configs.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for cfg in &configs {
            handles.push(scope.spawn(move || execute(cfg)));
        }
        for (slot, handle) in results.iter_mut().zip(handles) {
            *slot = Some(handle.join().unwrap_or_else(|_| {
                Err(CliError::Runtime("sweep worker panicked".into()))
            }));
        }
    });

    let points: Vec<SweepPoint> = values
        .iter()
        .zip(results)
        .map(|(v, r)| SweepPoint { value: v.clone(), result: r.expect("filled") })
        .collect();

    let summary_path = suffix_path(&base.outputs.diagnostics_path, "sweep_summary");
    let summary_path = summary_path.with_extension("csv");
    write_summary(&summary_path, axis, &points)?;
    Ok(SweepOutcome { points, summary_path })
}

fn write_summary(path: &Path, axis: SweepAxis, points: &[SweepPoint]) -> Result<(), CliError> {
    let mut out = String::from(
        "axis,value,status,final_fidelity_steady,final_var_min,final_var_max,final_mean_photon,max_trace_defect,max_leakage,fitted_rate\n",
    );
    for p in points {
        match &p.result {
            Ok(o) => {
                let last = o.rows.last();
                out.push_str(&format!(
                    "{},{},ok,{},{},{},{},{},{},{}\n",
                    axis.name(),
                    p.value,
                    fmt_f64(o.final_fidelity_steady),
                    fmt_f64(last.map(|r| r.var_min).unwrap_or(f64::NAN)),
                    fmt_f64(last.map(|r| r.var_max).unwrap_or(f64::NAN)),
                    fmt_f64(last.map(|r| r.mean_photon).unwrap_or(f64::NAN)),
                    fmt_f64(o.max_trace_defect),
                    fmt_f64(o.max_leakage),
                    o.fitted_rate.map(fmt_f64).unwrap_or_else(|| "none".into()),
                ));
            }
            Err(e) => {
                let msg = e.to_string().replace(',', ";").replace('\n', " ");
                out.push_str(&format!(
                    "{},{},error: {msg},,,,,,,\n",
                    axis.name(),
                    p.value
                ));
            }
        }
    }
    fs::write(path, out).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
