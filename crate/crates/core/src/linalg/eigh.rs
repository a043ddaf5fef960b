use alloc::vec::Vec;

use num_complex::Complex64;
// Required for the standalone no_std build; redundant (and therefore
// allowed-unused) whenever feature unification links std into the graph.
#[allow(unused_imports)]
use num_traits::Float;

use crate::cmat::CMat;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 60;

/// Eigendecomposition of a Hermitian matrix: A = V diag(λ) V†.
pub struct HermitianEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: CMat,
}

/// Cyclic complex Jacobi on the Hermitian part of `a`.
pub fn eigh(a: &CMat) -> Result<HermitianEigen> {
    jacobi(a, true).map(|(values, vectors)| HermitianEigen {
        values,
        vectors: vectors.expect("vectors requested"),
    })
}

/// Eigenvalues only.
pub fn eigvalsh(a: &CMat) -> Result<Vec<f64>> {
    jacobi(a, false).map(|(values, _)| values)
}

fn off_diagonal_norm(a: &CMat) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for p in 0..n {
        for q in p + 1..n {
            s += 2.0 * a[(p, q)].norm_sqr();
        }
    }
    s.sqrt()
}

fn jacobi(a: &CMat, want_vectors: bool) -> Result<(Vec<f64>, Option<CMat>)> {
    if !a.is_square() {
        return Err(Error::Numerical("eigh requires a square matrix"));
    }
    let n = a.rows();
    let mut m = a.hermitize();
    let mut v = if want_vectors { Some(CMat::identity(n)) } else { None };

    let scale = m.frobenius_norm().max(1e-300);
    let tol = 1e-15 * scale;

    for _sweep in 0..MAX_SWEEPS {
        if off_diagonal_norm(&m) <= tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let mag = apq.norm();
                if mag <= 1e-3 * tol / (n as f64) {
                    continue;
                }
                let phase = apq / mag;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                // Zeroing (p,q) requires t = s/c solving t² - 2τt - 1 = 0;
                // take the small-magnitude root for stability.
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Unitary acting on coordinates (p, q):
                //   U[p][p] = c, U[p][q] = -phase*s, U[q][p] = conj(phase)*s, U[q][q] = c
                let eps = phase * s;
                // Column update: M <- M U.
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * c + mkq * eps.conj();
                    m[(k, q)] = mkq * c - mkp * eps;
                }
                // Row update: M <- U† M.
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = mpk * c + mqk * eps;
                    m[(q, k)] = mqk * c - mpk * eps.conj();
                }
                // Clean symmetric pair to suppress drift.
                m[(p, q)] = Complex64::new(0.0, 0.0);
                m[(q, p)] = Complex64::new(0.0, 0.0);
                m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);

                if let Some(vm) = v.as_mut() {
                    for k in 0..n {
                        let vkp = vm[(k, p)];
                        let vkq = vm[(k, q)];
                        vm[(k, p)] = vkp * c + vkq * eps.conj();
                        vm[(k, q)] = vkq * c - vkp * eps;
                    }
                }
            }
        }
    }

    if off_diagonal_norm(&m) > 1e3 * tol {
        return Err(Error::Numerical("Jacobi eigensolver did not converge"));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let values: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap());
    let sorted: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let vectors = v.map(|vm| {
        let mut out = CMat::zeros(n, n);
        for (newcol, &oldcol) in order.iter().enumerate() {
            for k in 0..n {
                out[(k, newcol)] = vm[(k, oldcol)];
            }
        }
        out
    });
    Ok((sorted, vectors))
}
