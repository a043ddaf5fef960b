//! Embedded Dormand-Prince 5(4) integrator with adaptive step control.
//!
//! The state is a flat complex vector; the right-hand side is sampled at the
//! interior stage times, so explicitly time-dependent generators are handled
//! without any special casing. Steps are clamped to land exactly on the
//! requested output grid.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
// Required for the standalone no_std build; redundant (and therefore
// allowed-unused) whenever feature unification links std into the graph.
#[allow(unused_imports)]
use num_traits::Float;

use crate::cmat::ZERO;
use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];

/// Fifth-order weights (identical to the last A row: first-same-as-last).
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];

/// Difference between the 5th- and embedded 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Debug, Clone)]
pub struct OdeOptions {
    /// Per-step relative tolerance.
    pub rtol: f64,
    /// Per-step absolute tolerance.
    pub atol: f64,
    pub max_steps: usize,
}

impl OdeOptions {
    pub fn with_tolerance(tol: f64) -> Self {
        OdeOptions { rtol: tol, atol: tol * 1e-3, max_steps: 50_000_000 }
    }
}

/// Integrate dy/dt = f(t, y) across `t_grid`, invoking `sample(k, t, y)` at
/// every grid point (including the first).
pub fn integrate_dopri5<F, S>(
    mut f: F,
    t_grid: &[f64],
    y0: &[Complex64],
    opts: &OdeOptions,
    mut sample: S,
) -> Result<()>
where
    F: FnMut(f64, &[Complex64], &mut [Complex64]),
    S: FnMut(usize, f64, &[Complex64]) -> Result<()>,
{
    if t_grid.is_empty() {
        return Err(Error::InsufficientData("empty time grid"));
    }
    for w in t_grid.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::InsufficientData("time grid must be strictly increasing"));
        }
    }
    let n = y0.len();
    let mut t = t_grid[0];
    let mut y = y0.to_vec();
    sample(0, t, &y)?;
    if t_grid.len() == 1 {
        return Ok(());
    }
    let t_end = *t_grid.last().unwrap();

    let mut k: Vec<Vec<Complex64>> = (0..7).map(|_| vec![ZERO; n]).collect();
    let mut ystage = vec![ZERO; n];
    let mut ynew = vec![ZERO; n];

    // k1 for the first step; afterwards reused from k7 (FSAL).
    {
        let (k1, _) = k.split_first_mut().unwrap();
        f(t, &y, k1);
    }

    let mut h = initial_step(&k[0], &y, t_end - t, opts);
    let mut next_out = 1usize;
    let mut steps = 0usize;

    while next_out < t_grid.len() {
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::Numerical("step budget exhausted in integrate"));
        }
        let mut clamped = false;
        let t_target = t_grid[next_out];
        if t + h >= t_target {
            h = t_target - t;
            clamped = true;
        }
        if h < 1e-14 * t.abs().max(1.0) {
            return Err(Error::Stiffness { t, step: h });
        }

        // Stages 2..7.
        for s in 1..7 {
            for i in 0..n {
                let mut acc = ZERO;
                for (j, kj) in k.iter().enumerate().take(s) {
                    let a = A[s - 1][j];
                    if a != 0.0 {
                        acc += kj[i] * a;
                    }
                }
                ystage[i] = y[i] + acc * h;
            }
            let ts = t + C[s] * h;
            let (before, rest) = k.split_at_mut(s);
            let _ = before;
            f(ts, &ystage, &mut rest[0]);
        }

        // Fifth-order solution and embedded error estimate.
        let mut err_acc = 0.0f64;
        for i in 0..n {
            let mut acc = ZERO;
            let mut errc = ZERO;
            for (j, kj) in k.iter().enumerate() {
                if B5[j] != 0.0 {
                    acc += kj[i] * B5[j];
                }
                if E[j] != 0.0 {
                    errc += kj[i] * E[j];
                }
            }
            ynew[i] = y[i] + acc * h;
            let scale = opts.atol + opts.rtol * y[i].norm().max(ynew[i].norm());
            let e = errc.norm() * h.abs() / scale;
            err_acc += e * e;
        }
        let err = (err_acc / n as f64).sqrt();

        if err <= 1.0 {
            t = if clamped { t_target } else { t + h };
            core::mem::swap(&mut y, &mut ynew);
            // FSAL: stage 7 was evaluated at (t, y_new).
            k.swap(0, 6);
            if clamped {
                sample(next_out, t, &y)?;
                next_out += 1;
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= factor;
        } else {
            // k[0] still holds f(t, y) from the rejected attempt; retry smaller.
            let factor = (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
            h *= factor;
        }
    }
    Ok(())
}

fn initial_step(f0: &[Complex64], y0: &[Complex64], span: f64, opts: &OdeOptions) -> f64 {
    let mut d0 = 0.0f64;
    let mut d1 = 0.0f64;
    for (yi, fi) in y0.iter().zip(f0.iter()) {
        let sc = opts.atol + opts.rtol * yi.norm();
        d0 += (yi.norm() / sc) * (yi.norm() / sc);
        d1 += (fi.norm() / sc) * (fi.norm() / sc);
    }
    let n = y0.len().max(1) as f64;
    d0 = (d0 / n).sqrt();
    d1 = (d1 / n).sqrt();
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 * span.max(1e-12) } else { 0.01 * d0 / d1 };
    h.min(span).max(1e-12 * span.max(1.0))
}
