//! Time-dependent decay-rate profiles γ(t) and their running integrals.
//!
//! The generator of the dynamics is linear in γ(t), so the profile is the
//! only source of explicit time dependence in the whole simulator. Profiles
//! are validated at construction: γ(t) must be nonnegative and bounded on
//! every finite interval.

use alloc::vec::Vec;

// Required for the standalone no_std build; redundant (and therefore
// allowed-unused) whenever feature unification links std into the graph.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::quad;

/// Absolute tolerance for quadrature-based rate integrals; far below every
/// cross-validation tolerance used downstream.
const QUAD_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub enum GammaProfile {
    /// γ(t) = γ₀
    Constant { gamma0: f64 },
    /// Linear ramp from γ₀ at t=0 to γ₁ at t=t_ramp, constant afterwards.
    LinearRamp { gamma0: f64, gamma1: f64, t_ramp: f64 },
    /// γ(t) = γ∞ (1 - e^{-rate t}): switches on smoothly towards γ∞.
    ExponentialSwitch { gamma_inf: f64, rate: f64 },
    /// γ(t) = baseline + amplitude · exp(-(t-center)²/(2 width²))
    GaussianPulse { amplitude: f64, baseline: f64, center: f64, width: f64 },
    /// Piecewise-linear interpolation through (t, γ) points; clamped to the
    /// first/last value outside the table.
    Piecewise { points: Vec<(f64, f64)> },
}

fn require_nonneg(name: &'static str, v: f64) -> Result<()> {
    if !v.is_finite() || v < 0.0 {
        return Err(Error::InvalidParameter { name, value: v });
    }
    Ok(())
}

fn require_pos(name: &'static str, v: f64) -> Result<()> {
    if !v.is_finite() || v <= 0.0 {
        return Err(Error::InvalidParameter { name, value: v });
    }
    Ok(())
}

impl GammaProfile {
    pub fn constant(gamma0: f64) -> Result<Self> {
        require_nonneg("gamma0", gamma0)?;
        Ok(GammaProfile::Constant { gamma0 })
    }

    pub fn linear_ramp(gamma0: f64, gamma1: f64, t_ramp: f64) -> Result<Self> {
        require_nonneg("gamma0", gamma0)?;
        require_nonneg("gamma1", gamma1)?;
        require_pos("t_ramp", t_ramp)?;
        Ok(GammaProfile::LinearRamp { gamma0, gamma1, t_ramp })
    }

    pub fn exponential_switch(gamma_inf: f64, rate: f64) -> Result<Self> {
        require_nonneg("gamma_inf", gamma_inf)?;
        require_pos("rate", rate)?;
        Ok(GammaProfile::ExponentialSwitch { gamma_inf, rate })
    }

    pub fn gaussian_pulse(amplitude: f64, baseline: f64, center: f64, width: f64) -> Result<Self> {
        require_nonneg("amplitude", amplitude)?;
        require_nonneg("baseline", baseline)?;
        require_nonneg("center", center)?;
        require_pos("width", width)?;
        Ok(GammaProfile::GaussianPulse { amplitude, baseline, center, width })
    }

    pub fn piecewise(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InsufficientData("piecewise profile needs at least one point"));
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidParameter { name: "points.t", value: w[1].0 });
            }
        }
        for &(t, g) in &points {
            if !t.is_finite() || t < 0.0 {
                return Err(Error::InvalidParameter { name: "points.t", value: t });
            }
            require_nonneg("points.gamma", g)?;
        }
        Ok(GammaProfile::Piecewise { points })
    }

    /// γ(t); defined for all t ≥ 0.
    pub fn rate(&self, t: f64) -> f64 {
        match self {
            GammaProfile::Constant { gamma0 } => *gamma0,
            GammaProfile::LinearRamp { gamma0, gamma1, t_ramp } => {
                if t >= *t_ramp {
                    *gamma1
                } else if t <= 0.0 {
                    *gamma0
                } else {
                    gamma0 + (gamma1 - gamma0) * t / t_ramp
                }
            }
            GammaProfile::ExponentialSwitch { gamma_inf, rate } => {
                gamma_inf * (-(-rate * t.max(0.0)).exp_m1())
            }
            GammaProfile::GaussianPulse { amplitude, baseline, center, width } => {
                let u = (t - center) / width;
                baseline + amplitude * (-0.5 * u * u).exp()
            }
            GammaProfile::Piecewise { points } => {
                if t <= points[0].0 {
                    return points[0].1;
                }
                if t >= points[points.len() - 1].0 {
                    return points[points.len() - 1].1;
                }
                let k = points.partition_point(|&(tp, _)| tp <= t);
                let (t0, g0) = points[k - 1];
                let (t1, g1) = points[k];
                g0 + (g1 - g0) * (t - t0) / (t1 - t0)
            }
        }
    }

    /// ∫₀ᵗ γ(τ) dτ. Closed form where the profile allows it, adaptive
    /// Gauss-Kronrod quadrature for the pulse and table variants.
    pub fn rate_integral(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match self {
            GammaProfile::Constant { gamma0 } => gamma0 * t,
            GammaProfile::LinearRamp { gamma0, gamma1, t_ramp } => {
                if t <= *t_ramp {
                    gamma0 * t + 0.5 * (gamma1 - gamma0) * t * t / t_ramp
                } else {
                    0.5 * (gamma0 + gamma1) * t_ramp + gamma1 * (t - t_ramp)
                }
            }
            GammaProfile::ExponentialSwitch { gamma_inf, rate } => {
                gamma_inf * (t + (-rate * t).exp_m1() / rate)
            }
            GammaProfile::GaussianPulse { .. } => {
                quad::integrate(&|tau| self.rate(tau), 0.0, t, QUAD_TOL)
            }
            GammaProfile::Piecewise { points } => {
                // Integrate each smooth span separately so the quadrature
                // never straddles a kink.
                let mut acc = 0.0;
                let mut lo = 0.0;
                for &(tp, _) in points.iter() {
                    if tp >= t {
                        break;
                    }
                    if tp > lo {
                        acc += quad::integrate(&|tau| self.rate(tau), lo, tp, QUAD_TOL);
                        lo = tp;
                    }
                }
                if t > lo {
                    acc += quad::integrate(&|tau| self.rate(tau), lo, t, QUAD_TOL);
                }
                acc
            }
        }
    }

    /// Interior times where γ is continuous but not smooth. Integrators land
    /// on these exactly so embedded error estimates stay honest.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            GammaProfile::LinearRamp { t_ramp, .. } => alloc::vec![*t_ramp],
            GammaProfile::Piecewise { points } => points.iter().map(|&(t, _)| t).collect(),
            _ => Vec::new(),
        }
    }

    /// The long-time rate γ(∞); `None` when the profile decays to zero.
    pub fn asymptotic_rate(&self) -> Option<f64> {
        let g = match self {
            GammaProfile::Constant { gamma0 } => *gamma0,
            GammaProfile::LinearRamp { gamma1, .. } => *gamma1,
            GammaProfile::ExponentialSwitch { gamma_inf, .. } => *gamma_inf,
            GammaProfile::GaussianPulse { baseline, .. } => *baseline,
            GammaProfile::Piecewise { points } => points[points.len() - 1].1,
        };
        if g > 0.0 {
            Some(g)
        } else {
            None
        }
    }
}
