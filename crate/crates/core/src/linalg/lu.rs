use alloc::vec::Vec;

use num_complex::Complex64;

use crate::cmat::{CMat, ZERO};
use crate::error::{Error, Result};

/// LU factorization with partial pivoting: P·A = L·U.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: CMat,
    /// LAPACK-style pivot record: at step k, rows k and `piv[k]` were swapped.
    piv: Vec<usize>,
    min_pivot: f64,
}

impl Lu {
    pub fn factor(a: &CMat) -> Result<Lu> {
        if !a.is_square() {
            return Err(Error::Numerical("LU requires a square matrix"));
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut piv = Vec::with_capacity(n);
        let mut min_pivot = f64::INFINITY;

        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].norm();
            for i in k + 1..n {
                let v = lu[(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            piv.push(p);
            if p != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
            }
            let pivot = lu[(k, k)];
            let pmag = pivot.norm();
            if pmag < min_pivot {
                min_pivot = pmag;
            }
            if pmag == 0.0 {
                // Exactly singular: leave the zero pivot in place; solves will
                // report singularity through `min_pivot`.
                continue;
            }
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                if factor == ZERO {
                    continue;
                }
                let (top, bottom) = lu.data_mut().split_at_mut(i * n);
                let rowk = &top[k * n..k * n + n];
                let rowi = &mut bottom[..n];
                for j in k + 1..n {
                    rowi[j] -= factor * rowk[j];
                }
            }
        }
        Ok(Lu { lu, piv, min_pivot })
    }

    pub fn n(&self) -> usize {
        self.lu.rows()
    }

    /// Magnitude of the smallest pivot encountered; a cheap singularity probe.
    pub fn min_pivot(&self) -> f64 {
        self.min_pivot
    }

    /// Solve A x = b.
    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.n();
        if b.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: b.len() });
        }
        if self.min_pivot == 0.0 {
            return Err(Error::Numerical("singular matrix in LU solve"));
        }
        let mut x = b.to_vec();
        // Apply P.
        for (k, &p) in self.piv.iter().enumerate() {
            if p != k {
                x.swap(k, p);
            }
        }
        // Forward substitution with unit-diagonal L.
        for i in 1..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc;
        }
        // Back substitution with U.
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..n {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc / self.lu[(i, i)];
        }
        Ok(x)
    }

    /// Solve A† x = b using the same factors (A† = U† L† P).
    pub fn solve_adjoint(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.n();
        if b.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: b.len() });
        }
        if self.min_pivot == 0.0 {
            return Err(Error::Numerical("singular matrix in LU solve"));
        }
        let mut x = b.to_vec();
        // U† z = b: forward substitution (U† is lower triangular).
        for i in 0..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu[(j, i)].conj() * x[j];
            }
            x[i] = acc / self.lu[(i, i)].conj();
        }
        // L† y = z: back substitution with unit diagonal.
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..n {
                acc -= self.lu[(j, i)].conj() * x[j];
            }
            x[i] = acc;
        }
        // x = Pᵀ y: undo the swaps in reverse order.
        for (k, &p) in self.piv.iter().enumerate().rev() {
            if p != k {
                x.swap(k, p);
            }
        }
        Ok(x)
    }

    /// Solve A X = B column by column.
    pub fn solve_mat(&self, b: &CMat) -> Result<CMat> {
        let n = self.n();
        if b.rows() != n {
            return Err(Error::DimensionMismatch { expected: n, found: b.rows() });
        }
        let mut out = CMat::zeros(n, b.cols());
        let mut col = alloc::vec![ZERO; n];
        for j in 0..b.cols() {
            for i in 0..n {
                col[i] = b[(i, j)];
            }
            let x = self.solve(&col)?;
            for i in 0..n {
                out[(i, j)] = x[i];
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmat::ONE;

    fn test_matrix(n: usize) -> CMat {
        // Deterministic, well-conditioned complex matrix.
        CMat::from_fn(n, n, |i, j| {
            let d = if i == j { 3.0 + i as f64 } else { 0.0 };
            Complex64::new(
                d + ((i * 7 + j * 3) % 5) as f64 * 0.3,
                ((i * 5 + j * 11) % 7) as f64 * 0.2 - 0.6,
            )
        })
    }

    #[test]
    fn solve_has_small_residual() {
        let n = 24;
        let a = test_matrix(n);
        let b: Vec<Complex64> =
            (0..n).map(|i| Complex64::new(i as f64 - 3.0, 0.5 * i as f64)).collect();
        let lu = Lu::factor(&a).unwrap();
        let x = lu.solve(&b).unwrap();
        let ax = a.matvec(&x);
        let res: f64 = ax
            .iter()
            .zip(b.iter())
            .map(|(p, q)| (p - q).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(res < 1e-10, "residual {res}");
    }

    #[test]
    fn adjoint_solve_matches_explicit_adjoint() {
        let n = 16;
        let a = test_matrix(n);
        let b: Vec<Complex64> =
            (0..n).map(|i| Complex64::new(1.0, i as f64 * 0.1)).collect();
        let lu = Lu::factor(&a).unwrap();
        let x = lu.solve_adjoint(&b).unwrap();
        let lu_adj = Lu::factor(&a.adjoint()).unwrap();
        let y = lu_adj.solve(&b).unwrap();
        let diff: f64 = x
            .iter()
            .zip(y.iter())
            .map(|(p, q)| (p - q).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(diff < 1e-10, "diff {diff}");
    }

    #[test]
    fn singular_matrix_is_flagged() {
        let mut a = CMat::zeros(3, 3);
        a[(0, 0)] = ONE;
        a[(1, 1)] = ONE;
        // third row/col zero -> singular
        let lu = Lu::factor(&a).unwrap();
        assert_eq!(lu.min_pivot(), 0.0);
        assert!(lu.solve(&[ONE, ONE, ONE]).is_err());
    }
}
