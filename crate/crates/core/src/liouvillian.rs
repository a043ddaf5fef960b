//! Vectorized superoperators for the squeezed-reservoir master equation,
//! the composite su(1,1) generators, direct numerical integration, and
//! spectral analysis.
//!
//! Vectorization convention: column stacking, vec(ρ)[i + j·dim] = ρ_{ij},
//! so vec(AρB) = (Bᵀ ⊗ A)·vec(ρ). Left multiplication acts on the row
//! (ket) index, right multiplication on the column (bra) index; the two
//! families commute exactly.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
// Required for the standalone no_std build; redundant (and therefore
// allowed-unused) whenever feature unification links std into the graph.
#[allow(unused_imports)]
use num_traits::Float;

use crate::cmat::{CMat, ONE, ZERO};
use crate::error::{Error, Result};
use crate::fock::{make_ladder, DensityMatrix, ReservoirMoments};
use crate::linalg::{eigenvalues, Lu};
use crate::ode::{integrate_dopri5, OdeOptions};
use crate::profile::GammaProfile;

/// Relative kernel-gap threshold below which the steady state is flagged
/// as non-unique.
pub const KERNEL_GAP_TOL: f64 = 1e-8;

#[inline]
pub fn vec_index(i: usize, j: usize, dim: usize) -> usize {
    i + j * dim
}

/// Column-stack a matrix.
pub fn vectorize(m: &CMat) -> Vec<Complex64> {
    let d = m.rows();
    let mut v = vec![ZERO; d * d];
    for j in 0..d {
        for i in 0..d {
            v[vec_index(i, j, d)] = m[(i, j)];
        }
    }
    v
}

/// Inverse of [`vectorize`]; exact (no arithmetic involved).
pub fn devectorize(v: &[Complex64], dim: usize) -> Result<CMat> {
    if v.len() != dim * dim {
        return Err(Error::DimensionMismatch { expected: dim * dim, found: v.len() });
    }
    let mut m = CMat::zeros(dim, dim);
    for j in 0..dim {
        for i in 0..dim {
            m[(i, j)] = v[vec_index(i, j, dim)];
        }
    }
    Ok(m)
}

/// dim²×dim² matrix acting on column-stacked density matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    dim: usize,
    mat: CMat,
}

impl Superoperator {
    pub fn zeros(dim: usize) -> Self {
        Superoperator { dim, mat: CMat::zeros(dim * dim, dim * dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Superoperator { dim, mat: CMat::identity(dim * dim) }
    }

    /// ρ ↦ op·ρ, i.e. I ⊗ op.
    pub fn left_mult(op: &CMat) -> Self {
        let dim = op.rows();
        Superoperator { dim, mat: CMat::identity(dim).kron(op) }
    }

    /// ρ ↦ ρ·op, i.e. opᵀ ⊗ I.
    pub fn right_mult(op: &CMat) -> Self {
        let dim = op.rows();
        Superoperator { dim, mat: op.transpose().kron(&CMat::identity(dim)) }
    }

    /// ρ ↦ l·ρ·r, i.e. rᵀ ⊗ l.
    pub fn sandwich(l: &CMat, r: &CMat) -> Self {
        let dim = l.rows();
        Superoperator { dim, mat: r.transpose().kron(l) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Superoperator { dim: self.dim, mat: self.mat.scale(s) }
    }

    pub fn axpy(&mut self, s: Complex64, other: &Superoperator) {
        assert_eq!(self.dim, other.dim);
        self.mat.axpy(s, &other.mat);
    }

    pub fn compose(&self, other: &Superoperator) -> Self {
        assert_eq!(self.dim, other.dim);
        Superoperator { dim: self.dim, mat: &self.mat * &other.mat }
    }

    pub fn apply_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.mat.matvec(v)
    }

    pub fn apply_matrix(&self, x: &CMat) -> Result<CMat> {
        devectorize(&self.mat.matvec(&vectorize(x)), self.dim)
    }

    /// ‖vec(1)† L‖₂: exact trace preservation gives zero.
    pub fn trace_annihilation_defect(&self) -> f64 {
        let d = self.dim;
        let n2 = d * d;
        let mut acc = 0.0f64;
        for col in 0..n2 {
            let mut s = ZERO;
            for k in 0..d {
                s += self.mat[(vec_index(k, k, d), col)];
            }
            acc += s.norm_sqr();
        }
        acc.sqrt()
    }

    /// Largest violation of L[(i,j),(k,l)] = conj(L[(j,i),(l,k)]); zero iff
    /// the superoperator maps Hermitian matrices to Hermitian matrices.
    pub fn hermiticity_preservation_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let row = vec_index(i, j, d);
                let row_t = vec_index(j, i, d);
                for k in 0..d {
                    for l in 0..d {
                        let col = vec_index(k, l, d);
                        let col_t = vec_index(l, k, d);
                        let v = (self.mat[(row, col)] - self.mat[(row_t, col_t)].conj()).norm();
                        if v > worst {
                            worst = v;
                        }
                    }
                }
            }
        }
        worst
    }

    /// Generator in the transformed frame ρ' = s ρ s† for unitary `s`:
    /// (s̄ ⊗ s) L (sᵀ ⊗ s†), computed mode-wise.
    pub fn frame_transform(&self, s: &CMat) -> Superoperator {
        let d = self.dim;
        assert_eq!(s.rows(), d);
        let s_conj = s.conj();
        let s_adj = s.adjoint();
        let s_t = s.transpose();
        let n2 = d * d;
        // Right factor: each row, viewed as a d×d matrix over the input pair,
        // maps to s̄ · R · sᵀ.
        let mut tmp = CMat::zeros(n2, n2);
        let mut work = CMat::zeros(d, d);
        for row in 0..n2 {
            for l in 0..d {
                for k in 0..d {
                    work[(k, l)] = self.mat[(row, vec_index(k, l, d))];
                }
            }
            let res = &(&s_conj * &work) * &s_t;
            for l in 0..d {
                for k in 0..d {
                    tmp[(row, vec_index(k, l, d))] = res[(k, l)];
                }
            }
        }
        // Left factor: each column maps to s · C · s†.
        let mut out = CMat::zeros(n2, n2);
        for col in 0..n2 {
            for l in 0..d {
                for k in 0..d {
                    work[(k, l)] = tmp[(vec_index(k, l, d), col)];
                }
            }
            let res = &(s * &work) * &s_adj;
            for l in 0..d {
                for k in 0..d {
                    out[(vec_index(k, l, d), col)] = res[(k, l)];
                }
            }
        }
        Superoperator { dim: d, mat: out }
    }
}

/// The composite su(1,1) generators (K₊, K₋, K₀) on the doubled space:
/// K₊: ρ ↦ a†ρa, K₋: ρ ↦ aρa†, K₀ = (left(a†a) + right(a†a) + 1)/2.
///
/// K₀ uses the normal-ordered form with the explicit +1/2 so that its action
/// on |n⟩⟨m| is exactly (n+m+1)/2 on every basis element of the truncated
/// space; building it from the truncated product a·a† instead would corrupt
/// the boundary row and break the exact identity between the rate operator
/// and the zero-squeezing Lindblad generator.
pub fn make_k_generators(dim: usize) -> Result<(Superoperator, Superoperator, Superoperator)> {
    let (a, adag, num) = make_ladder(dim)?;
    let k_plus = Superoperator::sandwich(&adag, &a);
    let k_minus = Superoperator::sandwich(&a, &adag);
    let mut k_zero = Superoperator::left_mult(&num);
    k_zero.axpy(ONE, &Superoperator::right_mult(&num));
    k_zero.axpy(ONE, &Superoperator::identity(dim));
    Ok((k_plus, k_minus, k_zero.scale(Complex64::new(0.5, 0.0))))
}

/// Dissipator pattern (γ/2)(2 l ρ r - r·l ρ - ρ r·l).
fn dissipator(l: &CMat, r: &CMat) -> Superoperator {
    let rl = r * l;
    let mut s = Superoperator::sandwich(l, r).scale(Complex64::new(2.0, 0.0));
    s.axpy(-ONE, &Superoperator::left_mult(&rl));
    s.axpy(-ONE, &Superoperator::right_mult(&rl));
    s
}

/// The squeezed-reservoir Lindblad generator as a dense superoperator:
///
///   L = (γ/2)[(N+1)(2aρa† - a†aρ - ρa†a) + N(2a†ρa - aa†ρ - ρaa†)
///             - M(2aρa - aaρ - ρaa) - M*(2a†ρa† - a†a†ρ - ρa†a†)]
pub fn build_lindblad(dim: usize, moments: &ReservoirMoments, gamma: f64) -> Result<Superoperator> {
    if !gamma.is_finite() || gamma < 0.0 {
        return Err(Error::InvalidRate { gamma });
    }
    let (a, adag, _) = make_ladder(dim)?;
    let n_occ = moments.occupation;
    let m = moments.pair;

    let mut l = dissipator(&a, &adag).scale(Complex64::new(n_occ + 1.0, 0.0));
    l.axpy(Complex64::new(n_occ, 0.0), &dissipator(&adag, &a));
    l.axpy(-m, &dissipator(&a, &a));
    l.axpy(-m.conj(), &dissipator(&adag, &adag));
    Ok(l.scale(Complex64::new(0.5 * gamma, 0.0)))
}

/// Rate operator γ(K₋ - K₀ + 1/2): the squeezed-frame generator. Equals the
/// zero-squeezing Lindblad generator exactly, including on the truncation
/// boundary.
pub fn build_rate_operator(dim: usize, gamma: f64) -> Result<Superoperator> {
    if !gamma.is_finite() || gamma < 0.0 {
        return Err(Error::InvalidRate { gamma });
    }
    let (k_plus, k_minus, k_zero) = make_k_generators(dim)?;
    let _ = k_plus;
    let mut g = k_minus;
    g.axpy(-ONE, &k_zero);
    g.axpy(Complex64::new(0.5, 0.0), &Superoperator::identity(dim));
    Ok(g.scale(Complex64::new(gamma, 0.0)))
}

/// Apply the unit-rate Lindblad generator to a column-stacked state in
/// O(dim²) using the band structure of the ladder operators. Matches the
/// dense superoperator entrywise (same truncated-product semantics).
pub fn lindblad_apply_structured(
    moments: &ReservoirMoments,
    dim: usize,
    rho: &[Complex64],
    out: &mut [Complex64],
) {
    debug_assert_eq!(rho.len(), dim * dim);
    debug_assert_eq!(out.len(), dim * dim);
    let n_occ = moments.occupation;
    let m = moments.pair;
    let mc = m.conj();
    let d = dim;
    let idx = |i: usize, j: usize| i + j * d;
    let sq = |k: usize| (k as f64).sqrt();
    // Truncated a·a† has a zero in the last diagonal slot.
    let cap = |k: usize| if k + 1 < d { (k + 1) as f64 } else { 0.0 };

    for j in 0..d {
        for i in 0..d {
            let r = rho[idx(i, j)];
            let mut acc = ZERO;

            // (N+1)(2 aρa† - a†aρ - ρa†a)
            let mut t = -((i + j) as f64) * r;
            if i + 1 < d && j + 1 < d {
                t += 2.0 * sq(i + 1) * sq(j + 1) * rho[idx(i + 1, j + 1)];
            }
            acc += Complex64::new((n_occ + 1.0) * t.re, (n_occ + 1.0) * t.im);

            // N(2 a†ρa - aa†ρ - ρaa†)
            let mut t = -(cap(i) + cap(j)) * r;
            if i >= 1 && j >= 1 {
                t += 2.0 * sq(i) * sq(j) * rho[idx(i - 1, j - 1)];
            }
            acc += Complex64::new(n_occ * t.re, n_occ * t.im);

            // -M(2 aρa - aaρ - ρaa)
            let mut t = ZERO;
            if i + 1 < d && j >= 1 {
                t += 2.0 * sq(i + 1) * sq(j) * rho[idx(i + 1, j - 1)];
            }
            if i + 2 < d {
                t -= sq(i + 1) * sq(i + 2) * rho[idx(i + 2, j)];
            }
            if j >= 2 {
                t -= sq(j) * sq(j - 1) * rho[idx(i, j - 2)];
            }
            acc -= m * t;

            // -M*(2 a†ρa† - a†a†ρ - ρa†a†)
            let mut t = ZERO;
            if i >= 1 && j + 1 < d {
                t += 2.0 * sq(i) * sq(j + 1) * rho[idx(i - 1, j + 1)];
            }
            if i >= 2 {
                t -= sq(i) * sq(i - 1) * rho[idx(i - 2, j)];
            }
            if j + 2 < d {
                t -= sq(j + 1) * sq(j + 2) * rho[idx(i, j + 2)];
            }
            acc -= mc * t;

            out[idx(i, j)] = acc * 0.5;
        }
    }
}

/// Time-ordered output of [`integrate`].
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// ∫₀ᵗ γ(τ)dτ at each sample.
    pub gamma_int: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    /// Top-of-basis population at each sample.
    pub leakage: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Integrate ρ̇ = γ(t)·L₁ρ with the adaptive embedded Runge-Kutta pair,
/// sampling γ(t) inside the stages. States are Hermitized at each output
/// point; the trace is monitored but never corrected.
pub fn integrate(
    rho0: &DensityMatrix,
    profile: &GammaProfile,
    moments: &ReservoirMoments,
    t_grid: &[f64],
    tol: f64,
) -> Result<Trajectory> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidParameter { name: "tol", value: tol });
    }
    if t_grid.first().copied() != Some(0.0) {
        return Err(Error::InsufficientData("time grid must start at 0"));
    }
    let dim = rho0.dim();
    let y0 = vectorize(rho0.matrix());
    let opts = OdeOptions::with_tolerance(tol);

    // Merge the profile's kinks into the stepping grid (marked as non-output
    // points) so no step straddles a discontinuity of γ̇.
    let t_end = *t_grid.last().unwrap();
    let mut stepping: Vec<(f64, bool)> = t_grid.iter().map(|&t| (t, true)).collect();
    for b in profile.breakpoints() {
        if b > 0.0 && b < t_end && !t_grid.iter().any(|&t| (t - b).abs() < 1e-12) {
            stepping.push((b, false));
        }
    }
    stepping.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let aug_grid: Vec<f64> = stepping.iter().map(|&(t, _)| t).collect();

    let mut scratch = vec![ZERO; dim * dim];
    let mut traj = Trajectory {
        times: Vec::with_capacity(t_grid.len()),
        gamma_int: Vec::with_capacity(t_grid.len()),
        states: Vec::with_capacity(t_grid.len()),
        leakage: Vec::with_capacity(t_grid.len()),
    };

    let moments_copy = *moments;
    integrate_dopri5(
        |t, y, dy| {
            let g = profile.rate(t);
            lindblad_apply_structured(&moments_copy, dim, y, &mut scratch);
            for (o, s) in dy.iter_mut().zip(scratch.iter()) {
                *o = *s * g;
            }
        },
        &aug_grid,
        &y0,
        &opts,
        |k, t, y| {
            if !stepping[k].1 {
                return Ok(());
            }
            let m = devectorize(y, dim)?.hermitize();
            let trace_defect = (m.trace() - ONE).norm();
            let leak = crate::fock::leakage_of(&m);
            if !trace_defect.is_finite() {
                return Err(Error::IntegrationDiagnostic {
                    t,
                    monitor: "finite-trace",
                    magnitude: trace_defect,
                });
            }
            if trace_defect > 1e-6 + leak {
                return Err(Error::IntegrationDiagnostic {
                    t,
                    monitor: "trace-preservation",
                    magnitude: trace_defect,
                });
            }
            traj.times.push(t);
            traj.gamma_int.push(profile.rate_integral(t));
            traj.leakage.push(leak);
            traj.states.push(DensityMatrix::new_unchecked(m));
            Ok(())
        },
    )?;
    Ok(traj)
}

/// Unit-trace Hermitian null vector of the Liouvillian, solved through the
/// trace-bordered linear system (the trace row replaces the redundant
/// vacuum-population row). Kernel uniqueness is probed by inverse iteration
/// on the bordered matrix: a second null direction survives the bordering
/// and drives its smallest singular value to zero.
pub fn steady_state_numeric(l: &Superoperator) -> Result<DensityMatrix> {
    let d = l.dim();
    let n2 = d * d;
    let scale = l.matrix().frobenius_norm();
    if scale == 0.0 {
        return Err(Error::NonUniqueSteadyState { gap_estimate: 0.0, threshold: KERNEL_GAP_TOL });
    }

    let mut bordered = l.matrix().clone();
    let anchor = vec_index(0, 0, d);
    for col in 0..n2 {
        bordered[(anchor, col)] = ZERO;
    }
    for k in 0..d {
        bordered[(anchor, vec_index(k, k, d))] = ONE;
    }
    let lu = Lu::factor(&bordered)?;
    if lu.min_pivot() <= 1e-14 * scale {
        return Err(Error::NonUniqueSteadyState {
            gap_estimate: lu.min_pivot() / scale,
            threshold: KERNEL_GAP_TOL,
        });
    }

    let mut b = vec![ZERO; n2];
    b[anchor] = ONE;
    let x = lu.solve(&b)?;

    // Smallest singular value of the bordered matrix by inverse power
    // iteration on (M†M)⁻¹.
    let mut u: Vec<Complex64> = (0..n2)
        .map(|k| Complex64::new(1.0 + (k % 7) as f64, (k % 3) as f64 - 1.0))
        .collect();
    normalize(&mut u);
    let mut sigma_min = f64::INFINITY;
    for _ in 0..8 {
        let y = lu.solve(&u)?;
        let mut z = lu.solve_adjoint(&y)?;
        let growth = norm(&z);
        if growth == 0.0 {
            break;
        }
        sigma_min = 1.0 / growth.sqrt();
        for zi in z.iter_mut() {
            *zi /= growth;
        }
        u = z;
    }
    if sigma_min < KERNEL_GAP_TOL * scale {
        return Err(Error::NonUniqueSteadyState {
            gap_estimate: sigma_min / scale,
            threshold: KERNEL_GAP_TOL,
        });
    }

    let mut m = devectorize(&x, d)?.hermitize();
    let tr = m.trace();
    if tr.norm() < 1e-12 {
        return Err(Error::Numerical("steady-state candidate has zero trace"));
    }
    m.scale_mut(ONE / tr);

    // Residual check against the original (un-bordered) generator.
    let res = norm(&l.apply_vec(&vectorize(&m)));
    if res > 1e-8 * scale {
        return Err(Error::NonUniqueSteadyState {
            gap_estimate: res / scale,
            threshold: KERNEL_GAP_TOL,
        });
    }
    DensityMatrix::from_matrix_with(m, 1e-8)
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(v: &mut [Complex64]) {
    let n = norm(v);
    if n > 0.0 {
        for z in v.iter_mut() {
            *z /= n;
        }
    }
}

/// Full eigenvalue list of the superoperator, sorted by descending real part.
pub fn spectrum(l: &Superoperator) -> Result<Vec<Complex64>> {
    eigenvalues(l.matrix())
}

/// Unit matrix element |n⟩⟨m| as a dim×dim matrix.
pub fn basis_matrix(dim: usize, n: usize, m: usize) -> CMat {
    let mut b = CMat::zeros(dim, dim);
    b[(n, m)] = ONE;
    b
}
