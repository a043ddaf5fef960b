//! TOML run configuration: parsing, defaults, and validation.
//!
//! Every table has a closed key set; unknown keys anywhere in the document
//! are collected and reported together. Relative output paths are resolved
//! against the directory containing the config file.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use sqbath_core::cmat::CMat;
use sqbath_core::fock::{InitialStateSpec, SqueezeParams};
use sqbath_core::profile::GammaProfile;
use toml::{Table, Value};

use crate::CliError;

pub const DEFAULT_ODE_TOL: f64 = 1e-9;
pub const DEFAULT_LEAKAGE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Numeric,
    Analytic,
    Both,
}

impl Method {
    pub fn wants_numeric(self) -> bool {
        matches!(self, Method::Numeric | Method::Both)
    }

    pub fn wants_analytic(self) -> bool {
        matches!(self, Method::Analytic | Method::Both)
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Numeric => "numeric",
            Method::Analytic => "analytic",
            Method::Both => "both",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outputs {
    pub trajectory_path: PathBuf,
    pub diagnostics_path: PathBuf,
    pub spectrum_path: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub dim: usize,
    pub squeeze: SqueezeParams,
    pub gamma_profile: GammaProfile,
    pub initial_state: InitialStateSpec,
    pub time_grid: Vec<f64>,
    pub method: Method,
    pub ode_tol: f64,
    pub leakage_tol: f64,
    pub outputs: Outputs,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn check_keys(table: &Table, section: &str, allowed: &[&str], unknown: &mut Vec<String>) {
    for key in table.keys() {
        if !allowed.contains(&key.as_str()) {
            if section.is_empty() {
                unknown.push(key.clone());
            } else {
                unknown.push(format!("{section}.{key}"));
            }
        }
    }
}

fn get_table<'a>(root: &'a Table, key: &str) -> Result<&'a Table, CliError> {
    match root.get(key) {
        Some(Value::Table(t)) => Ok(t),
        Some(_) => Err(invalid(format!("`{key}` must be a table"))),
        None => Err(invalid(format!("missing required section `{key}`"))),
    }
}

fn get_f64(table: &Table, section: &str, key: &str) -> Result<f64, CliError> {
    match table.get(key) {
        Some(Value::Float(x)) => Ok(*x),
        Some(Value::Integer(n)) => Ok(*n as f64),
        Some(_) => Err(invalid(format!("`{section}.{key}` must be a number"))),
        None => Err(invalid(format!("missing `{section}.{key}`"))),
    }
}

fn get_f64_or(table: &Table, section: &str, key: &str, default: f64) -> Result<f64, CliError> {
    if table.contains_key(key) {
        get_f64(table, section, key)
    } else {
        Ok(default)
    }
}

fn get_usize(table: &Table, section: &str, key: &str) -> Result<usize, CliError> {
    match table.get(key) {
        Some(Value::Integer(n)) if *n >= 0 => Ok(*n as usize),
        Some(_) => Err(invalid(format!("`{section}.{key}` must be a nonnegative integer"))),
        None => Err(invalid(format!("missing `{section}.{key}`"))),
    }
}

fn get_str<'a>(table: &'a Table, section: &str, key: &str) -> Result<&'a str, CliError> {
    match table.get(key) {
        Some(Value::String(s)) => Ok(s.as_str()),
        Some(_) => Err(invalid(format!("`{section}.{key}` must be a string"))),
        None => Err(invalid(format!("missing `{section}.{key}`"))),
    }
}

fn number_of(v: &Value, what: &str) -> Result<f64, CliError> {
    match v {
        Value::Float(x) => Ok(*x),
        Value::Integer(n) => Ok(*n as f64),
        _ => Err(invalid(format!("{what} must be a number"))),
    }
}

fn parse_profile(table: &Table, unknown: &mut Vec<String>) -> Result<GammaProfile, CliError> {
    let kind = get_str(table, "gamma_profile", "kind")?;
    let allowed: &[&str] = match kind {
        "constant" => &["kind", "gamma0"],
        "linear_ramp" => &["kind", "gamma0", "gamma1", "t_ramp"],
        "exponential_switch" => &["kind", "gamma_inf", "rate"],
        "gaussian_pulse" => &["kind", "amplitude", "baseline", "center", "width"],
        "piecewise" => &["kind", "points"],
        other => {
            return Err(invalid(format!(
                "gamma_profile.kind `{other}` is not one of constant, linear_ramp, exponential_switch, gaussian_pulse, piecewise"
            )))
        }
    };
    check_keys(table, "gamma_profile", allowed, unknown);
    let sec = "gamma_profile";
    let built = match kind {
        "constant" => GammaProfile::constant(get_f64(table, sec, "gamma0")?),
        "linear_ramp" => GammaProfile::linear_ramp(
            get_f64(table, sec, "gamma0")?,
            get_f64(table, sec, "gamma1")?,
            get_f64(table, sec, "t_ramp")?,
        ),
        "exponential_switch" => GammaProfile::exponential_switch(
            get_f64(table, sec, "gamma_inf")?,
            get_f64(table, sec, "rate")?,
        ),
        "gaussian_pulse" => GammaProfile::gaussian_pulse(
            get_f64(table, sec, "amplitude")?,
            get_f64(table, sec, "baseline")?,
            get_f64(table, sec, "center")?,
            get_f64(table, sec, "width")?,
        ),
        "piecewise" => {
            let pts = match table.get("points") {
                Some(Value::Array(rows)) => {
                    let mut out = Vec::with_capacity(rows.len());
                    for row in rows {
                        match row {
                            Value::Array(pair) if pair.len() == 2 => {
                                let t = number_of(&pair[0], "gamma_profile.points time")?;
                                let g = number_of(&pair[1], "gamma_profile.points rate")?;
                                out.push((t, g));
                            }
                            _ => {
                                return Err(invalid(
                                    "gamma_profile.points must be an array of [t, gamma] pairs",
                                ))
                            }
                        }
                    }
                    out
                }
                _ => return Err(invalid("missing `gamma_profile.points`")),
            };
            GammaProfile::piecewise(pts)
        }
        _ => unreachable!(),
    };
    built.map_err(|e| invalid(format!("gamma_profile: {e}")))
}

fn parse_initial_state(
    table: &Table,
    dim: usize,
    unknown: &mut Vec<String>,
) -> Result<InitialStateSpec, CliError> {
    let kind = get_str(table, "initial_state", "kind")?;
    let allowed: &[&str] = match kind {
        "fock" => &["kind", "n"],
        "coherent" => &["kind", "alpha_re", "alpha_im"],
        "thermal" => &["kind", "n_bar"],
        "squeezed_vacuum" => &["kind", "r0", "theta0"],
        "matrix" => &["kind", "re", "im"],
        other => {
            return Err(invalid(format!(
                "initial_state.kind `{other}` is not one of fock, coherent, thermal, squeezed_vacuum, matrix"
            )))
        }
    };
    check_keys(table, "initial_state", allowed, unknown);
    let sec = "initial_state";
    match kind {
        "fock" => {
            let n = get_usize(table, sec, "n")?;
            if n >= dim {
                return Err(invalid(format!(
                    "initial_state: Fock level {n} does not fit in dim = {dim}"
                )));
            }
            Ok(InitialStateSpec::Fock(n))
        }
        "coherent" => Ok(InitialStateSpec::Coherent(Complex64::new(
            get_f64(table, sec, "alpha_re")?,
            get_f64_or(table, sec, "alpha_im", 0.0)?,
        ))),
        "thermal" => {
            let n_bar = get_f64(table, sec, "n_bar")?;
            if !n_bar.is_finite() || n_bar < 0.0 {
                return Err(invalid(format!("initial_state.n_bar must be >= 0, got {n_bar}")));
            }
            Ok(InitialStateSpec::Thermal { n_bar })
        }
        "squeezed_vacuum" => {
            let r0 = get_f64(table, sec, "r0")?;
            let theta0 = get_f64_or(table, sec, "theta0", 0.0)?;
            SqueezeParams::new(r0, theta0)
                .map_err(|e| invalid(format!("initial_state: {e}")))?;
            Ok(InitialStateSpec::SqueezedVacuum { r: r0, theta: theta0 })
        }
        "matrix" => {
            let re = parse_matrix(table.get("re"), "initial_state.re")?;
            let im = match table.get("im") {
                Some(v) => Some(parse_matrix(Some(v), "initial_state.im")?),
                None => None,
            };
            let n = re.len();
            if n == 0 || re.iter().any(|row| row.len() != n) {
                return Err(invalid("initial_state.re must be a square matrix"));
            }
            if let Some(im) = &im {
                if im.len() != n || im.iter().any(|row| row.len() != n) {
                    return Err(invalid("initial_state.im must match the shape of re"));
                }
            }
            if n > dim {
                return Err(invalid(format!(
                    "initial_state: {n}x{n} coefficient table does not fit in dim = {dim}"
                )));
            }
            let mat = CMat::from_fn(n, n, |i, j| {
                Complex64::new(re[i][j], im.as_ref().map_or(0.0, |m| m[i][j]))
            });
            let diag_sum = mat.trace();
            if (diag_sum - Complex64::new(1.0, 0.0)).norm() > 1e-10 {
                return Err(invalid(format!(
                    "initial_state: coefficient table is not normalized (diagonal sum {diag_sum})"
                )));
            }
            Ok(InitialStateSpec::Matrix(mat))
        }
        _ => unreachable!(),
    }
}

fn parse_matrix(v: Option<&Value>, what: &str) -> Result<Vec<Vec<f64>>, CliError> {
    match v {
        Some(Value::Array(rows)) => {
            let mut out = Vec::with_capacity(rows.len());
            for row in rows {
                match row {
                    Value::Array(cells) => {
                        let mut r = Vec::with_capacity(cells.len());
                        for c in cells {
                            r.push(number_of(c, what)?);
                        }
                        out.push(r);
                    }
                    _ => return Err(invalid(format!("{what} must be an array of rows"))),
                }
            }
            Ok(out)
        }
        _ => Err(invalid(format!("missing or non-array `{what}`"))),
    }
}

fn parse_time_grid(table: &Table, unknown: &mut Vec<String>) -> Result<Vec<f64>, CliError> {
    check_keys(table, "time_grid", &["t_end", "n_samples", "points"], unknown);
    if let Some(points) = table.get("points") {
        match points {
            Value::Array(vals) => {
                let mut out = Vec::with_capacity(vals.len());
                for v in vals {
                    out.push(number_of(v, "time_grid.points")?);
                }
                if out.first().copied() != Some(0.0) {
                    return Err(invalid("time_grid.points must start at 0"));
                }
                if out.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(invalid("time_grid.points must be strictly increasing"));
                }
                return Ok(out);
            }
            _ => return Err(invalid("time_grid.points must be an array of numbers")),
        }
    }
    let t_end = get_f64(table, "time_grid", "t_end")?;
    if t_end <= 0.0 || !t_end.is_finite() {
        return Err(invalid(format!("time_grid.t_end must be > 0, got {t_end}")));
    }
    let n = get_usize(table, "time_grid", "n_samples")?;
    if n < 2 {
        return Err(invalid("time_grid.n_samples must be at least 2"));
    }
    Ok((0..n).map(|k| t_end * k as f64 / (n - 1) as f64).collect())
}

/// Parse and validate a config document. `base_dir` anchors relative output
/// paths (callers pass the config file's parent directory).
pub fn parse_config(text: &str, base_dir: &Path) -> Result<RunConfig, CliError> {
    let root: Table =
        text.parse().map_err(|e| invalid(format!("config is not well-formed TOML: {e}")))?;

    let mut unknown = Vec::new();
    check_keys(
        &root,
        "",
        &["dim", "method", "squeeze", "gamma_profile", "initial_state", "time_grid", "tolerances", "outputs"],
        &mut unknown,
    );

    let dim = get_usize(&root, "(top level)", "dim")?;

    let squeeze_table = get_table(&root, "squeeze")?;
    check_keys(squeeze_table, "squeeze", &["r", "theta"], &mut unknown);
    let r = get_f64(squeeze_table, "squeeze", "r")?;
    let theta = get_f64_or(squeeze_table, "squeeze", "theta", 0.0)?;
    let squeeze = SqueezeParams::new(r, theta).map_err(|e| invalid(format!("squeeze: {e}")))?;

    let gamma_profile = parse_profile(get_table(&root, "gamma_profile")?, &mut unknown)?;
    let initial_state = parse_initial_state(get_table(&root, "initial_state")?, dim, &mut unknown)?;
    let time_grid = parse_time_grid(get_table(&root, "time_grid")?, &mut unknown)?;

    let method = match root.get("method") {
        None => Method::Both,
        Some(Value::String(s)) => match s.as_str() {
            "numeric" => Method::Numeric,
            "analytic" => Method::Analytic,
            "both" => Method::Both,
            other => {
                return Err(invalid(format!(
                    "method `{other}` is not one of numeric, analytic, both"
                )))
            }
        },
        Some(_) => return Err(invalid("`method` must be a string")),
    };

    let (ode_tol, leakage_tol) = match root.get("tolerances") {
        None => (DEFAULT_ODE_TOL, DEFAULT_LEAKAGE_TOL),
        Some(Value::Table(t)) => {
            check_keys(t, "tolerances", &["ode_tol", "leakage_tol"], &mut unknown);
            (
                get_f64_or(t, "tolerances", "ode_tol", DEFAULT_ODE_TOL)?,
                get_f64_or(t, "tolerances", "leakage_tol", DEFAULT_LEAKAGE_TOL)?,
            )
        }
        Some(_) => return Err(invalid("`tolerances` must be a table")),
    };

    let outputs_table = get_table(&root, "outputs")?;
    check_keys(
        outputs_table,
        "outputs",
        &["trajectory_path", "diagnostics_path", "spectrum_path"],
        &mut unknown,
    );
    let resolve = |p: &str| -> PathBuf {
        let path = Path::new(p);
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            base_dir.join(path)
        }
    };
    let outputs = Outputs {
        trajectory_path: resolve(get_str(outputs_table, "outputs", "trajectory_path")?),
        diagnostics_path: resolve(get_str(outputs_table, "outputs", "diagnostics_path")?),
        spectrum_path: match outputs_table.get("spectrum_path") {
            None => None,
            Some(Value::String(s)) => Some(resolve(s)),
            Some(_) => return Err(invalid("`outputs.spectrum_path` must be a string")),
        },
    };

    if !unknown.is_empty() {
        unknown.sort();
        return Err(invalid(format!("unknown configuration keys: {}", unknown.join(", "))));
    }

    if dim < 4 {
        return Err(invalid(format!("dim must be at least 4, got {dim}")));
    }
    if ode_tol <= 0.0 || !ode_tol.is_finite() {
        return Err(invalid(format!("tolerances.ode_tol must be positive, got {ode_tol}")));
    }
    if leakage_tol <= 0.0 || !leakage_tol.is_finite() {
        return Err(invalid(format!(
            "tolerances.leakage_tol must be positive, got {leakage_tol}"
        )));
    }
    if outputs.spectrum_path.is_some() && !method.wants_numeric() {
        return Err(invalid(
            "outputs.spectrum_path requires the numeric Liouvillian (method = \"numeric\" or \"both\")",
        ));
    }

    Ok(RunConfig {
        dim,
        squeeze,
        gamma_profile,
        initial_state,
        time_grid,
        method,
        ode_tol,
        leakage_tol,
        outputs,
    })
}

/// Load a config from disk, resolving outputs against its directory.
pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    parse_config(&text, base)
}
