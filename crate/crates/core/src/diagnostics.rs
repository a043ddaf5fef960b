//! Observables and distances: quadrature noise, fidelity, trace distance,
//! photon statistics, and convergence studies against the steady state.
//!
//! Quadrature convention: X_φ = (a e^{-iφ} + a† e^{iφ})/2, so the vacuum
//! variance is 1/4 and the uncertainty bound is min·max ≥ 1/16.

use alloc::vec::Vec;

use num_complex::Complex64;
// Required for the standalone no_std build; redundant (and therefore
// allowed-unused) whenever feature unification links std into the graph.
#[allow(unused_imports)]
use num_traits::Float;

use crate::cmat::CMat;
use crate::error::{Error, Result};
use crate::fock::{make_ladder, DensityMatrix, SqueezeParams};
use crate::linalg::{eigh, eigvalsh};
use crate::liouvillian::Trajectory;
use crate::su11::asymptotic_state;

/// Negative eigenvalues beyond this magnitude are treated as real positivity
/// violations; anything smaller is clipped as truncation noise.
const NEGATIVITY_LIMIT: f64 = 1e-8;

/// Distances below this are considered numerically converged when fitting
/// decay rates.
const FIT_FLOOR: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureReport {
    /// (probe angle, variance at that angle) for every requested probe.
    pub probes: Vec<(f64, f64)>,
    /// Smaller principal variance of the quadrature covariance.
    pub min_variance: f64,
    /// Larger principal variance.
    pub max_variance: f64,
    /// Angle of the minimum-variance axis, in [0, π).
    pub principal_angle: f64,
}

/// Variance of X_φ for each probe angle plus the principal pair from the
/// analytic 2×2 covariance diagonalization.
pub fn quadrature_variances(rho: &DensityMatrix, probe_angles: &[f64]) -> Result<QuadratureReport> {
    let d = rho.dim();
    let (a, adag, _) = make_ladder(d)?;
    let mut x1 = &a + &adag;
    x1.scale_mut(Complex64::new(0.5, 0.0));
    let mut x2 = &a - &adag;
    x2.scale_mut(Complex64::new(0.0, -0.5));

    let m1 = rho.expectation(&x1).re;
    let m2 = rho.expectation(&x2).re;
    let v11 = rho.expectation(&(&x1 * &x1)).re - m1 * m1;
    let v22 = rho.expectation(&(&x2 * &x2)).re - m2 * m2;
    let sym = {
        let mut s = &(&x1 * &x2) + &(&x2 * &x1);
        s.scale_mut(Complex64::new(0.5, 0.0));
        s
    };
    let v12 = rho.expectation(&sym).re - m1 * m2;

    let mean = 0.5 * (v11 + v22);
    let diff = 0.5 * (v11 - v22);
    let rad = (diff * diff + v12 * v12).sqrt();
    let min_variance = mean - rad;
    let max_variance = mean + rad;
    // Var(φ) = mean + rad·cos(2φ - ψ): maximal at ψ/2, minimal a quarter
    // turn later.
    let psi = v12.atan2(diff);
    let principal_angle =
        crate::fock::wrap_angle(0.5 * psi + core::f64::consts::FRAC_PI_2, core::f64::consts::PI);

    let probes = probe_angles
        .iter()
        .map(|&phi| {
            let (s, c) = phi.sin_cos();
            (phi, c * c * v11 + s * s * v22 + 2.0 * s * c * v12)
        })
        .collect();

    Ok(QuadratureReport { probes, min_variance, max_variance, principal_angle })
}

fn check_same_dim(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: sigma.dim() });
    }
    Ok(())
}

/// Tr(ρ²); the states stored here are Hermitian, so this is the squared
/// Frobenius norm.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.matrix().data().iter().map(|z| z.norm_sqr()).sum()
}

/// Tr(ρ a†a).
pub fn mean_photon_number(rho: &DensityMatrix) -> Result<f64> {
    let (_, _, num) = make_ladder(rho.dim())?;
    Ok(rho.expectation(&num).re)
}

/// Uhlmann fidelity F(ρ,σ) = (Tr √(√ρ σ √ρ))². When one argument is pure
/// this reduces to ⟨ψ|ρ|ψ⟩, computed directly. Truncation-level negative
/// eigenvalues are clipped; violations beyond 1e-8 are rejected.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    // Two-sided purity window: Tr ρ² above one means an invalid state, which
    // must reach the general path where the eigenvalue check rejects it.
    if (purity(sigma) - 1.0).abs() <= 1e-10 {
        return pure_fidelity(sigma, rho);
    }
    if (purity(rho) - 1.0).abs() <= 1e-10 {
        return pure_fidelity(rho, sigma);
    }

    let sqrt_rho = psd_sqrt(rho.matrix())?;
    let inner = &(&sqrt_rho * sigma.matrix()) * &sqrt_rho;
    let evs = eigvalsh(&inner)?;
    let mut acc = 0.0;
    for ev in evs {
        if ev < -NEGATIVITY_LIMIT {
            return Err(Error::InvalidState(alloc::format!(
                "negative eigenvalue {ev:.3e} inside fidelity"
            )));
        }
        acc += ev.max(0.0).sqrt();
    }
    Ok((acc * acc).clamp(0.0, 1.0))
}

fn pure_fidelity(pure: &DensityMatrix, other: &DensityMatrix) -> Result<f64> {
    // For pure σ = |ψ⟩⟨ψ|: F = ⟨ψ|ρ|ψ⟩ = Tr(σρ).
    let d = pure.dim();
    let mut f = 0.0;
    for i in 0..d {
        for j in 0..d {
            f += (pure.matrix()[(i, j)] * other.matrix()[(j, i)]).re;
        }
    }
    if f < -NEGATIVITY_LIMIT {
        return Err(Error::InvalidState(alloc::format!("fidelity {f:.3e} below zero")));
    }
    Ok(f.clamp(0.0, 1.0))
}

fn psd_sqrt(m: &CMat) -> Result<CMat> {
    let e = eigh(m)?;
    let d = m.rows();
    let mut scaled = e.vectors.clone();
    for (j, ev) in e.values.iter().enumerate() {
        if *ev < -NEGATIVITY_LIMIT {
            return Err(Error::InvalidState(alloc::format!(
                "negative eigenvalue {ev:.3e} in matrix square root"
            )));
        }
        let s = Complex64::new(ev.max(0.0).sqrt(), 0.0);
        for i in 0..d {
            scaled[(i, j)] *= s;
        }
    }
    Ok(&scaled * &e.vectors.adjoint())
}

/// Half the trace norm of ρ - σ.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    let diff = rho.matrix() - sigma.matrix();
    let evs = eigvalsh(&diff)?;
    Ok(0.5 * evs.iter().map(|e| e.abs()).sum::<f64>())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub times: Vec<f64>,
    pub gamma_int: Vec<f64>,
    pub trace_distance_to_steady: Vec<f64>,
    /// Least-squares slope of ln(distance) against Γ over the decaying tail;
    /// `None` when the trajectory already sits on the steady state.
    pub fitted_rate: Option<f64>,
}

/// Distance-to-attractor profile along a trajectory plus the fitted decay
/// rate per unit Γ.
pub fn convergence_study(
    trajectory: &Trajectory,
    params: &SqueezeParams,
) -> Result<ConvergenceReport> {
    if trajectory.is_empty() {
        return Err(Error::InsufficientData("empty trajectory"));
    }
    let dim = trajectory.states[0].dim();
    let target = asymptotic_state(params, dim, crate::fock::DEFAULT_LEAKAGE_TOL)?;
    convergence_study_against(trajectory, &target)
}

/// Same study against a caller-supplied attractor state.
pub fn convergence_study_against(
    trajectory: &Trajectory,
    target: &DensityMatrix,
) -> Result<ConvergenceReport> {
    if trajectory.is_empty() {
        return Err(Error::InsufficientData("empty trajectory"));
    }
    let mut distances = Vec::with_capacity(trajectory.len());
    for state in &trajectory.states {
        distances.push(trace_distance(state, target)?);
    }

    let fitted_rate = if distances.iter().all(|&d| d < 1e-8) {
        None
    } else {
        let usable: Vec<(f64, f64)> = trajectory
            .gamma_int
            .iter()
            .zip(distances.iter())
            .filter(|(_, &d)| d > FIT_FLOOR)
            .map(|(&g, &d)| (g, d.ln()))
            .collect();
        let g_last = usable.last().map(|(g, _)| *g).unwrap_or(0.0);
        let tail: Vec<(f64, f64)> =
            usable.into_iter().filter(|(g, _)| *g >= 0.5 * g_last).collect();
        if tail.len() < 3 {
            return Err(Error::InsufficientData("too few points in the decay tail for a fit"));
        }
        let n = tail.len() as f64;
        let sx: f64 = tail.iter().map(|(g, _)| g).sum();
        let sy: f64 = tail.iter().map(|(_, l)| l).sum();
        let sxx: f64 = tail.iter().map(|(g, _)| g * g).sum();
        let sxy: f64 = tail.iter().map(|(g, l)| g * l).sum();
        let denom = n * sxx - sx * sx;
        if denom.abs() < 1e-30 {
            return Err(Error::InsufficientData("degenerate abscissa in rate fit"));
        }
        Some((n * sxy - sx * sy) / denom)
    };

    Ok(ConvergenceReport {
        times: trajectory.times.clone(),
        gamma_int: trajectory.gamma_int.clone(),
        trace_distance_to_steady: distances,
        fitted_rate,
    })
}
