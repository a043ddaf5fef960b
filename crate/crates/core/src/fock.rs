//! Truncated-Fock-space construction: ladder operators, the squeeze unitary,
//! Bogoliubov-transformed mode operators, and canonical states.
//!
//! Operators are plain dense matrices ([`CMat`]); states are wrapped in
//! [`DensityMatrix`], which carries the trace/Hermiticity/positivity checks.
//! Truncated states are never renormalized: truncation error is surfaced
//! through the leakage gate (population of the top ⌈dim/10⌉ levels) instead
//! of being hidden by rescaling.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
// Required for the standalone no_std build; redundant (and therefore
// allowed-unused) whenever feature unification links std into the graph.
#[allow(unused_imports)]
use num_traits::Float;

use crate::cmat::{CMat, ONE, ZERO};
use crate::error::{Error, Result};
use crate::linalg::{eigvalsh, expm};

/// Default gate on the population of the top ⌈dim/10⌉ Fock levels.
pub const DEFAULT_LEAKAGE_TOL: f64 = 1e-8;

/// Hermiticity bound for validated density matrices (Frobenius norm).
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Eigenvalue floor for validated density matrices.
pub const POSITIVITY_TOL: f64 = 1e-10;

/// Unitarity bound on the constructed squeeze operator (Frobenius norm).
pub const UNITARITY_TOL: f64 = 1e-10;

/// Euclidean remainder into [0, modulus); `%` alone keeps the sign.
pub(crate) fn wrap_angle(x: f64, modulus: f64) -> f64 {
    let r = x % modulus;
    if r < 0.0 {
        r + modulus
    } else {
        r
    }
}

/// Reservoir squeezing ξ = r e^{iθ} with the derived second moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParams {
    r: f64,
    theta: f64,
}

impl SqueezeParams {
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if !r.is_finite() || r < 0.0 {
            return Err(Error::InvalidParameter { name: "r", value: r });
        }
        if !theta.is_finite() {
            return Err(Error::InvalidParameter { name: "theta", value: theta });
        }
        let theta = wrap_angle(theta, 2.0 * core::f64::consts::PI);
        Ok(SqueezeParams { r, theta })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Thermal-like occupation N = sinh²r.
    pub fn occupation(&self) -> f64 {
        let s = self.r.sinh();
        s * s
    }

    /// Anomalous pair correlation M = e^{-iθ} sinh r cosh r.
    pub fn pair_correlation(&self) -> Complex64 {
        Complex64::from_polar(self.r.sinh() * self.r.cosh(), -self.theta)
    }

    pub fn moments(&self) -> ReservoirMoments {
        ReservoirMoments { occupation: self.occupation(), pair: self.pair_correlation() }
    }
}

/// Second moments (N, M) of the reservoir entering the master equation.
///
/// A squeezed reservoir has |M|² = N(N+1); a thermal reservoir has M = 0
/// with N = n̄. Letting the two components vary independently keeps the
/// thermal reduction expressible without fake squeeze parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReservoirMoments {
    pub occupation: f64,
    pub pair: Complex64,
}

impl ReservoirMoments {
    pub fn thermal(n_bar: f64) -> Result<Self> {
        if !n_bar.is_finite() || n_bar < 0.0 {
            return Err(Error::InvalidParameter { name: "n_bar", value: n_bar });
        }
        Ok(ReservoirMoments { occupation: n_bar, pair: ZERO })
    }
}

impl From<&SqueezeParams> for ReservoirMoments {
    fn from(p: &SqueezeParams) -> Self {
        p.moments()
    }
}

/// Annihilation, creation, and number operators on the truncated space.
pub fn make_ladder(dim: usize) -> Result<(CMat, CMat, CMat)> {
    if dim < 2 {
        return Err(Error::InvalidDimension { dim, min: 2 });
    }
    let mut a = CMat::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    let adag = a.adjoint();
    let num = &adag * &a;
    Ok((a, adag, num))
}

/// S = exp[(ξ* a² - ξ a†²)/2] with ξ = r e^{iθ}, built by scaling-and-squaring
/// of the anti-Hermitian generator. The conjugation S† a S equals the
/// Bogoliubov-transformed mode away from the truncation boundary.
pub fn make_squeeze_operator(dim: usize, params: &SqueezeParams) -> Result<CMat> {
    let (a, adag, _) = make_ladder(dim)?;
    let xi = Complex64::from_polar(params.r(), params.theta());
    let a2 = &a * &a;
    let adag2 = &adag * &adag;
    let mut gen = a2.scale(xi.conj() * 0.5);
    gen.axpy(-xi * 0.5, &adag2);
    let s = expm(&gen)?;
    let defect = (&(&s * &s.adjoint()) - &CMat::identity(dim)).frobenius_norm();
    if !(defect < UNITARITY_TOL) {
        return Err(Error::TruncationTooSmall { dim, leakage: defect, tol: UNITARITY_TOL });
    }
    Ok(s)
}

/// Bogoliubov pair A = cosh r · a - sinh r e^{iθ} · a†, and its adjoint.
pub fn bogoliubov_transform(params: &SqueezeParams, dim: usize) -> Result<(CMat, CMat)> {
    let (a, adag, _) = make_ladder(dim)?;
    let ch = Complex64::new(params.r().cosh(), 0.0);
    let sh = Complex64::from_polar(params.r().sinh(), params.theta());
    let mut big_a = a.scale(ch);
    big_a.axpy(-sh, &adag);
    let mut big_adag = adag.scale(ch);
    big_adag.axpy(-sh.conj(), &a);
    Ok((big_a, big_adag))
}

/// Per-state health report against the density-matrix invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateAudit {
    pub hermiticity_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
}

/// Hermitian, unit-trace, positive-semidefinite matrix on the truncated
/// Fock space. Constructed states pass the checks at construction time;
/// integration output is audited separately so trace drift stays observable.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMat,
}

impl DensityMatrix {
    /// Validate and wrap: Hermitian to 1e-12, unit trace to `trace_tol`,
    /// smallest eigenvalue above -1e-10.
    pub fn from_matrix_with(mat: CMat, trace_tol: f64) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::InvalidState(format!(
                "matrix is {}x{}, expected square",
                mat.rows(),
                mat.cols()
            )));
        }
        let herm = mat.hermiticity_defect();
        if !(herm < HERMITICITY_TOL) {
            return Err(Error::InvalidState(format!("Hermiticity defect {herm:.3e}")));
        }
        let tr = mat.trace();
        let trace_defect = (tr - ONE).norm();
        if !(trace_defect < trace_tol) {
            return Err(Error::InvalidState(format!("trace defect {trace_defect:.3e}")));
        }
        let evs = eigvalsh(&mat)?;
        let min_ev = evs.first().copied().unwrap_or(0.0);
        if !(min_ev > -POSITIVITY_TOL) {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_ev:.3e}")));
        }
        Ok(DensityMatrix { mat })
    }

    pub fn from_matrix(mat: CMat) -> Result<Self> {
        Self::from_matrix_with(mat, DEFAULT_LEAKAGE_TOL)
    }

    /// Wrap without validating; used for integrator output where the checks
    /// run as monitors with their own tolerances.
    pub(crate) fn new_unchecked(mat: CMat) -> Self {
        DensityMatrix { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.trace()
    }

    /// Tr(ρ X).
    pub fn expectation(&self, op: &CMat) -> Complex64 {
        debug_assert_eq!(op.rows(), self.dim());
        let d = self.dim();
        let mut acc = ZERO;
        for i in 0..d {
            for j in 0..d {
                acc += self.mat[(i, j)] * op[(j, i)];
            }
        }
        acc
    }

    /// Population of the top ⌈dim/10⌉ Fock levels: the truncation-health
    /// metric gated by the constructors.
    pub fn leakage(&self) -> f64 {
        leakage_of(&self.mat)
    }

    pub fn audit(&self) -> Result<StateAudit> {
        let evs = eigvalsh(&self.mat.hermitize())?;
        Ok(StateAudit {
            hermiticity_defect: self.mat.hermiticity_defect(),
            trace_defect: (self.mat.trace() - ONE).norm(),
            min_eigenvalue: evs.first().copied().unwrap_or(0.0),
        })
    }
}

pub(crate) fn leakage_of(mat: &CMat) -> f64 {
    let dim = mat.rows();
    let top = dim.div_ceil(10);
    let mut acc = 0.0;
    for i in dim - top..dim {
        acc += mat[(i, i)].re;
    }
    acc
}

fn leakage_gate(mat: &CMat, tol: f64) -> Result<()> {
    let leak = leakage_of(mat);
    if !(leak < tol) {
        return Err(Error::TruncationTooSmall { dim: mat.rows(), leakage: leak, tol });
    }
    Ok(())
}

/// |0⟩⟨0| on the truncated space.
pub fn vacuum_state(dim: usize) -> Result<DensityMatrix> {
    if dim < 2 {
        return Err(Error::InvalidDimension { dim, min: 2 });
    }
    let mut m = CMat::zeros(dim, dim);
    m[(0, 0)] = ONE;
    Ok(DensityMatrix::new_unchecked(m))
}

/// The squeezed vacuum S†|0⟩⟨0|S: the unique attractor of the dynamics.
pub fn squeezed_vacuum_state(
    dim: usize,
    params: &SqueezeParams,
    leakage_tol: f64,
) -> Result<DensityMatrix> {
    let s = make_squeeze_operator(dim, params)?;
    // ψ = S†|0⟩ is the conjugate of the first row of S.
    let psi: Vec<Complex64> = (0..dim).map(|i| s[(0, i)].conj()).collect();
    let mat = CMat::from_fn(dim, dim, |i, j| psi[i] * psi[j].conj());
    leakage_gate(&mat, leakage_tol)?;
    DensityMatrix::from_matrix_with(mat, leakage_tol.max(1e-12))
}

/// Initial-state menu for runs.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialStateSpec {
    Fock(usize),
    Coherent(Complex64),
    Thermal { n_bar: f64 },
    SqueezedVacuum { r: f64, theta: f64 },
    /// Explicit coefficient table ⟨n|ρ|m⟩; embedded top-left if smaller than
    /// the run dimension.
    Matrix(CMat),
}

/// Build a validated density matrix from the spec on a `dim`-level space.
pub fn density_from_spec(
    spec: &InitialStateSpec,
    dim: usize,
    leakage_tol: f64,
) -> Result<DensityMatrix> {
    if dim < 2 {
        return Err(Error::InvalidDimension { dim, min: 2 });
    }
    let mat = match spec {
        InitialStateSpec::Fock(n) => {
            if *n >= dim {
                return Err(Error::InvalidState(format!(
                    "Fock level {n} outside truncated space of dimension {dim}"
                )));
            }
            let mut m = CMat::zeros(dim, dim);
            m[(*n, *n)] = ONE;
            m
        }
        InitialStateSpec::Coherent(alpha) => {
            if !alpha.re.is_finite() || !alpha.im.is_finite() {
                return Err(Error::InvalidParameter { name: "alpha", value: alpha.norm() });
            }
            let mut amp = Vec::with_capacity(dim);
            let mut c = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
            amp.push(c);
            for n in 1..dim {
                c = c * alpha / Complex64::new((n as f64).sqrt(), 0.0);
                amp.push(c);
            }
            CMat::from_fn(dim, dim, |i, j| amp[i] * amp[j].conj())
        }
        InitialStateSpec::Thermal { n_bar } => {
            if !n_bar.is_finite() || *n_bar < 0.0 {
                return Err(Error::InvalidParameter { name: "n_bar", value: *n_bar });
            }
            let mut m = CMat::zeros(dim, dim);
            let ratio = n_bar / (1.0 + n_bar);
            let mut p = 1.0 / (1.0 + n_bar);
            for n in 0..dim {
                m[(n, n)] = Complex64::new(p, 0.0);
                p *= ratio;
            }
            m
        }
        InitialStateSpec::SqueezedVacuum { r, theta } => {
            let p = SqueezeParams::new(*r, *theta)?;
            return squeezed_vacuum_state(dim, &p, leakage_tol);
        }
        InitialStateSpec::Matrix(c) => {
            if !c.is_square() || c.rows() > dim {
                return Err(Error::InvalidState(format!(
                    "coefficient table is {}x{}, run dimension is {dim}",
                    c.rows(),
                    c.cols()
                )));
            }
            let diag_sum: Complex64 = (0..c.rows()).map(|i| c[(i, i)]).sum();
            if (diag_sum - ONE).norm() > 1e-10 {
                return Err(Error::InvalidState(format!(
                    "coefficient table is not normalized: diagonal sum {diag_sum}"
                )));
            }
            let mut m = CMat::zeros(dim, dim);
            for i in 0..c.rows() {
                for j in 0..c.cols() {
                    m[(i, j)] = c[(i, j)];
                }
            }
            m
        }
    };
    leakage_gate(&mat, leakage_tol)?;
    DensityMatrix::from_matrix_with(mat, leakage_tol.max(1e-12))
}
