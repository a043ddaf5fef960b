use num_complex::Complex64;
// Required for the standalone no_std build; redundant (and therefore
// allowed-unused) whenever feature unification links std into the graph.
#[allow(unused_imports)]
use num_traits::Float;

use crate::cmat::CMat;
use crate::error::Result;
use crate::linalg::Lu;

/// Padé(13,13) coefficients (scaling-and-squaring method).
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Largest 1-norm for which the Padé(13) approximant is accurate without
/// scaling.
const THETA13: f64 = 5.371920351148152;

/// Matrix exponential by scaling-and-squaring with a Padé(13) approximant.
pub fn expm(a: &CMat) -> Result<CMat> {
    assert!(a.is_square(), "expm requires a square matrix");
    let n = a.rows();
    let norm = a.one_norm();
    let s = if norm > THETA13 {
        ((norm / THETA13).log2().ceil() as i32).max(0) as u32
    } else {
        0
    };
    let scale = Complex64::new(0.5f64.powi(s as i32), 0.0);
    let a1 = a.scale(scale);

    let eye = CMat::identity(n);
    let a2 = &a1 * &a1;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;

    let c = |k: usize| Complex64::new(PADE13[k], 0.0);

    // U = A [A6 (b13 A6 + b11 A4 + b9 A2) + b7 A6 + b5 A4 + b3 A2 + b1 I]
    let mut w1 = a6.scale(c(13));
    w1.axpy(c(11), &a4);
    w1.axpy(c(9), &a2);
    let mut w = &a6 * &w1;
    w.axpy(c(7), &a6);
    w.axpy(c(5), &a4);
    w.axpy(c(3), &a2);
    w.axpy(c(1), &eye);
    let u = &a1 * &w;

    // V = A6 (b12 A6 + b10 A4 + b8 A2) + b6 A6 + b4 A4 + b2 A2 + b0 I
    let mut z1 = a6.scale(c(12));
    z1.axpy(c(10), &a4);
    z1.axpy(c(8), &a2);
    let mut v = &a6 * &z1;
    v.axpy(c(6), &a6);
    v.axpy(c(4), &a4);
    v.axpy(c(2), &a2);
    v.axpy(c(0), &eye);

    // exp(A1) ~ (V - U)^{-1} (V + U)
    let num = &v + &u;
    let den = &v - &u;
    let lu = Lu::factor(&den)?;
    let mut e = lu.solve_mat(&num)?;

    for _ in 0..s {
        e = &e * &e;
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmat::{ONE, ZERO};

    #[test]
    fn exp_of_zero_is_identity() {
        let z = CMat::zeros(5, 5);
        let e = expm(&z).unwrap();
        assert!((&e - &CMat::identity(5)).max_abs() < 1e-14);
    }

    #[test]
    fn exp_of_diagonal() {
        let mut a = CMat::zeros(3, 3);
        a[(0, 0)] = Complex64::new(1.0, 0.0);
        a[(1, 1)] = Complex64::new(-2.0, 0.5);
        a[(2, 2)] = Complex64::new(0.0, 3.0);
        let e = expm(&a).unwrap();
        for i in 0..3 {
            assert!((e[(i, i)] - a[(i, i)].exp()).norm() < 1e-13);
        }
        assert!(e[(0, 1)].norm() < 1e-14);
    }

    #[test]
    fn exp_of_nilpotent_matches_truncated_series() {
        // N strictly upper triangular with N^3 = 0: exp(N) = I + N + N²/2 exactly.
        let mut n = CMat::zeros(3, 3);
        n[(0, 1)] = Complex64::new(2.0, 1.0);
        n[(1, 2)] = Complex64::new(-1.0, 0.5);
        let e = expm(&n).unwrap();
        let n2 = &n * &n;
        let mut expect = CMat::identity(3);
        expect.axpy(ONE, &n);
        expect.axpy(Complex64::new(0.5, 0.0), &n2);
        assert!((&e - &expect).max_abs() < 1e-14);
    }

    #[test]
    fn exp_of_antihermitian_is_unitary() {
        let raw = CMat::from_fn(8, 8, |i, j| {
            Complex64::new(
                ((i + 2 * j) % 5) as f64 - 2.0,
                ((3 * i + j) % 7) as f64 - 3.0,
            )
        });
        let h = raw.hermitize();
        // A = iH is anti-Hermitian.
        let a = h.scale(Complex64::new(0.0, 1.0));
        let u = expm(&a).unwrap();
        let prod = &u * &u.adjoint();
        assert!((&prod - &CMat::identity(8)).max_abs() < 1e-12);
    }

    #[test]
    fn agrees_with_a_plain_taylor_series() {
        // Independent oracle: at moderate norm the raw series converges in
        // f64 well enough to pin the Padé path to ~1e-12.
        let n = 12;
        let raw = CMat::from_fn(n, n, |i, j| {
            Complex64::new(
                ((i * 3 + j * 7) % 9) as f64 * 0.2 - 0.8,
                ((i * 11 + j) % 5) as f64 * 0.15 - 0.3,
            )
        });
        let e = expm(&raw).unwrap();
        let mut taylor = CMat::identity(n);
        let mut pow = CMat::identity(n);
        let mut fact = 1.0;
        for k in 1..80 {
            pow = &pow * &raw;
            fact *= k as f64;
            taylor.axpy(Complex64::new(1.0 / fact, 0.0), &pow);
        }
        assert!((&e - &taylor).max_abs() < 1e-11);
    }

    #[test]
    fn large_norm_requires_scaling() {
        let mut a = CMat::zeros(2, 2);
        a[(0, 0)] = Complex64::new(30.0, 0.0);
        a[(1, 1)] = Complex64::new(-30.0, 0.0);
        a[(0, 1)] = ZERO;
        let e = expm(&a).unwrap();
        let e30 = 30.0f64.exp();
        assert!((e[(0, 0)].re - e30).abs() / e30 < 1e-12);
        assert!((e[(1, 1)].re - (-30.0f64).exp()).abs() < 1e-18);
    }
}
