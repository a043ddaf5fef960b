//! Single-run execution: propagate, derive per-sample observables, write the
//! trajectory table, diagnostics summary, and optional spectrum file.

use std::fs;
use std::io::Write;
use std::path::Path;

use sqbath_core::diagnostics::{
    convergence_study_against, fidelity, mean_photon_number, purity, quadrature_variances,
    trace_distance,
};
use sqbath_core::error::Error as CoreError;
use sqbath_core::fock::density_from_spec;
use sqbath_core::liouvillian::{build_lindblad, integrate, spectrum, Trajectory};
use sqbath_core::su11::{asymptotic_state, AnalyticPropagator};

use crate::config::{Method, RunConfig};
use crate::{fmt_f64, CliError};

/// One trajectory-file row; columns are emitted in struct order.
#[derive(Debug, Clone)]
pub struct SampleRow {
    pub t: f64,
    pub gamma_int: f64,
    pub y: f64,
    pub mean_photon: f64,
    pub var_min: f64,
    pub var_max: f64,
    pub principal_angle: f64,
    pub purity: f64,
    pub trace_defect: f64,
    pub fidelity_steady: f64,
    pub tracedist_steady: f64,
    /// Trace distance between the numeric and analytic states (method=both).
    pub tracedist_methods: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub rows: Vec<SampleRow>,
    pub final_fidelity_steady: f64,
    pub fitted_rate: Option<f64>,
    pub max_trace_defect: f64,
    pub max_leakage: f64,
    pub inter_method_max: Option<f64>,
    pub monitor_violations: Vec<String>,
}

fn runtime(e: CoreError) -> CliError {
    CliError::Runtime(e.to_string())
}

/// Execute a validated config end to end. Output files are written even when
/// an invariant monitor fires; the error is returned afterwards so the
/// artifacts remain available for inspection.
pub fn execute(config: &RunConfig) -> Result<RunOutcome, CliError> {
    let dim = config.dim;
    let rho0 =
        density_from_spec(&config.initial_state, dim, config.leakage_tol).map_err(runtime)?;
    let steady = asymptotic_state(&config.squeeze, dim, config.leakage_tol).map_err(runtime)?;

    let numeric: Option<Trajectory> = if config.method.wants_numeric() {
        Some(
            integrate(
                &rho0,
                &config.gamma_profile,
                &config.squeeze.moments(),
                &config.time_grid,
                config.ode_tol,
            )
            .map_err(runtime)?,
        )
    } else {
        None
    };
    let analytic: Option<Trajectory> = if config.method.wants_analytic() {
        let prop =
            AnalyticPropagator::new(dim, &config.squeeze, &config.gamma_profile, config.leakage_tol)
                .map_err(runtime)?;
        Some(prop.propagate(&rho0, &config.time_grid).map_err(runtime)?)
    } else {
        None
    };
    let primary = numeric.as_ref().or(analytic.as_ref()).expect("method produces a trajectory");

    let mut rows = Vec::with_capacity(primary.len());
    let mut monitor_violations = Vec::new();
    let mut max_trace_defect = 0.0f64;
    let mut max_leakage = 0.0f64;
    let mut inter_method_max: Option<f64> = None;

    for k in 0..primary.len() {
        let state = &primary.states[k];
        let t = primary.times[k];
        let gamma_int = primary.gamma_int[k];
        let leak = primary.leakage[k];
        max_leakage = max_leakage.max(leak);

        let audit = state.audit().map_err(runtime)?;
        max_trace_defect = max_trace_defect.max(audit.trace_defect);
        if audit.trace_defect > 10.0 * config.ode_tol + leak {
            monitor_violations.push(format!(
                "trace defect {:.3e} at t = {t:.6e}",
                audit.trace_defect
            ));
        }
        if audit.min_eigenvalue <= -1e-10 {
            monitor_violations.push(format!(
                "negative eigenvalue {:.3e} at t = {t:.6e}",
                audit.min_eigenvalue
            ));
        }
        if audit.hermiticity_defect > 1e-12 {
            monitor_violations.push(format!(
                "Hermiticity defect {:.3e} at t = {t:.6e}",
                audit.hermiticity_defect
            ));
        }

        let quad = quadrature_variances(state, &[]).map_err(runtime)?;
        let tracedist_methods = match (&numeric, &analytic) {
            (Some(n), Some(a)) => {
                let d = trace_distance(&n.states[k], &a.states[k]).map_err(runtime)?;
                inter_method_max = Some(inter_method_max.unwrap_or(0.0).max(d));
                Some(d)
            }
            _ => None,
        };

        rows.push(SampleRow {
            t,
            gamma_int,
            y: -(-gamma_int).exp_m1(),
            mean_photon: mean_photon_number(state).map_err(runtime)?,
            var_min: quad.min_variance,
            var_max: quad.max_variance,
            principal_angle: quad.principal_angle,
            purity: purity(state),
            trace_defect: audit.trace_defect,
            fidelity_steady: fidelity(state, &steady).map_err(runtime)?,
            tracedist_steady: trace_distance(state, &steady).map_err(runtime)?,
            tracedist_methods,
        });
    }

    let fitted_rate = match convergence_study_against(primary, &steady) {
        Ok(report) => report.fitted_rate,
        Err(CoreError::InsufficientData(_)) => None,
        Err(e) => return Err(runtime(e)),
    };

    let outcome = RunOutcome {
        final_fidelity_steady: rows.last().map(|r| r.fidelity_steady).unwrap_or(0.0),
        fitted_rate,
        max_trace_defect,
        max_leakage,
        inter_method_max,
        monitor_violations,
        rows,
    };

    write_trajectory(&config.outputs.trajectory_path, config.method, &outcome.rows)?;
    write_diagnostics(&config.outputs.diagnostics_path, config, &outcome)?;
    if let Some(spec_path) = &config.outputs.spectrum_path {
        let gamma_end = config.gamma_profile.rate(*config.time_grid.last().unwrap());
        let l = build_lindblad(dim, &config.squeeze.moments(), gamma_end).map_err(runtime)?;
        let vals = spectrum(&l).map_err(runtime)?;
        write_spectrum(spec_path, gamma_end, &vals)?;
    }

    if let Some(first) = outcome.monitor_violations.first() {
        return Err(CliError::Runtime(format!(
            "{} invariant monitor(s) fired; first: {first}",
            outcome.monitor_violations.len()
        )));
    }
    Ok(outcome)
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

pub const TRAJECTORY_COLUMNS: &[&str] = &[
    "t",
    "gamma_int",
    "y",
    "mean_photon",
    "var_min",
    "var_max",
    "principal_angle",
    "purity",
    "trace_defect",
    "fidelity_steady",
    "tracedist_steady",
];

fn write_trajectory(path: &Path, method: Method, rows: &[SampleRow]) -> Result<(), CliError> {
    let mut out = String::new();
    let mut header: Vec<&str> = TRAJECTORY_COLUMNS.to_vec();
    if method == Method::Both {
        header.push("tracedist_methods");
    }
    out.push_str(&header.join(","));
    out.push('\n');
    for r in rows {
        let mut cells = vec![
            fmt_f64(r.t),
            fmt_f64(r.gamma_int),
            fmt_f64(r.y),
            fmt_f64(r.mean_photon),
            fmt_f64(r.var_min),
            fmt_f64(r.var_max),
            fmt_f64(r.principal_angle),
            fmt_f64(r.purity),
            fmt_f64(r.trace_defect),
            fmt_f64(r.fidelity_steady),
            fmt_f64(r.tracedist_steady),
        ];
        if let Some(d) = r.tracedist_methods {
            cells.push(fmt_f64(d));
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}

fn write_diagnostics(path: &Path, config: &RunConfig, outcome: &RunOutcome) -> Result<(), CliError> {
    let mut f = fs::File::create(path).map_err(|e| io_err(path, e))?;
    let last = outcome.rows.last();
    let mut s = String::new();
    s.push_str(&format!("method = {}\n", config.method.name()));
    s.push_str(&format!("dim = {}\n", config.dim));
    s.push_str(&format!("samples = {}\n", outcome.rows.len()));
    s.push_str(&format!(
        "final_fidelity_steady = {}\n",
        fmt_f64(outcome.final_fidelity_steady)
    ));
    s.push_str(&format!(
        "final_tracedist_steady = {}\n",
        fmt_f64(last.map(|r| r.tracedist_steady).unwrap_or(f64::NAN))
    ));
    s.push_str(&format!(
        "fitted_rate = {}\n",
        outcome.fitted_rate.map(fmt_f64).unwrap_or_else(|| "none".into())
    ));
    s.push_str(&format!("max_trace_defect = {}\n", fmt_f64(outcome.max_trace_defect)));
    s.push_str(&format!("max_leakage = {}\n", fmt_f64(outcome.max_leakage)));
    s.push_str(&format!(
        "inter_method_max_distance = {}\n",
        outcome.inter_method_max.map(fmt_f64).unwrap_or_else(|| "none".into())
    ));
    s.push_str(&format!(
        "final_var_min = {}\n",
        fmt_f64(last.map(|r| r.var_min).unwrap_or(f64::NAN))
    ));
    s.push_str(&format!(
        "final_var_max = {}\n",
        fmt_f64(last.map(|r| r.var_max).unwrap_or(f64::NAN))
    ));
    s.push_str(&format!(
        "final_principal_angle = {}\n",
        fmt_f64(last.map(|r| r.principal_angle).unwrap_or(f64::NAN))
    ));
    s.push_str(&format!(
        "final_mean_photon = {}\n",
        fmt_f64(last.map(|r| r.mean_photon).unwrap_or(f64::NAN))
    ));
    s.push_str(&format!("monitor_violations = {}\n", outcome.monitor_violations.len()));
    for v in &outcome.monitor_violations {
        s.push_str(&format!("violation = {v}\n"));
    }
    f.write_all(s.as_bytes()).map_err(|e| io_err(path, e))
}

fn write_spectrum(
    path: &Path,
    gamma_end: f64,
    vals: &[num_complex::Complex64],
) -> Result<(), CliError> {
    let mut out = String::from("re,im\n");
    out.insert_str(0, &format!("# Liouvillian spectrum at gamma = {}\n", fmt_f64(gamma_end)));
    for v in vals {
        out.push_str(&format!("{},{}\n", fmt_f64(v.re), fmt_f64(v.im)));
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}
