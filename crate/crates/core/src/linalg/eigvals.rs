use alloc::vec::Vec;

use num_complex::Complex64;
// Required for the standalone no_std build; redundant (and therefore
// allowed-unused) whenever feature unification links std into the graph.
#[allow(unused_imports)]
use num_traits::Float;

use crate::cmat::{CMat, ZERO};
use crate::error::{Error, Result};

const MAX_ITERS_PER_EIGENVALUE: usize = 60;

/// Eigenvalues of a general complex matrix, sorted by descending real part
/// (ties by descending imaginary part).
///
/// Balancing, Householder reduction to Hessenberg form, then explicit
/// single-shift QR with Wilkinson shifts and deflation.
pub fn eigenvalues(a: &CMat) -> Result<Vec<Complex64>> {
    if !a.is_square() {
        return Err(Error::Numerical("eigenvalues require a square matrix"));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = a.clone();
    balance(&mut h);
    hessenberg(&mut h);
    let mut vals = hessenberg_qr(&mut h)?;
    vals.sort_by(|x, y| {
        y.re.partial_cmp(&x.re)
            .unwrap_or(core::cmp::Ordering::Equal)
            .then(y.im.partial_cmp(&x.im).unwrap_or(core::cmp::Ordering::Equal))
    });
    Ok(vals)
}

/// Parlett-Reinsch balancing with radix-2 scaling (exact in floating point;
/// leaves the spectrum unchanged).
fn balance(a: &mut CMat) {
    let n = a.rows();
    let radix = 2.0f64;
    let radix2 = radix * radix;
    loop {
        let mut converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].norm();
                    r += a[(i, j)].norm();
                }
            }
            if c == 0.0 || r == 0.0 || !c.is_finite() || !r.is_finite() {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut cc = c;
            while cc < r / radix {
                f *= radix;
                cc *= radix2;
            }
            while cc >= r * radix {
                f /= radix;
                cc /= radix2;
            }
            if (cc + r) / f < 0.95 * s && f != 1.0 {
                converged = false;
                let g = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= g;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
        if converged {
            break;
        }
    }
}

/// In-place Householder reduction to upper Hessenberg form.
fn hessenberg(a: &mut CMat) {
    let n = a.rows();
    if n < 3 {
        return;
    }
    let mut v = alloc::vec![ZERO; n];
    for k in 0..n - 2 {
        // Reflector annihilating a[k+2.., k].
        let mut norm2 = 0.0;
        for i in k + 1..n {
            norm2 += a[(i, k)].norm_sqr();
        }
        if norm2 == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let norm = norm2.sqrt();
        let phase = if x0 == ZERO { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        let mut vnorm2 = 0.0;
        for i in k + 1..n {
            let vi = if i == k + 1 { a[(i, k)] - alpha } else { a[(i, k)] };
            v[i] = vi;
            vnorm2 += vi.norm_sqr();
        }
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;

        // A <- P A, P = I - beta v v†  (rows k+1.., all columns).
        for j in k..n {
            let mut dot = ZERO;
            for i in k + 1..n {
                dot += v[i].conj() * a[(i, j)];
            }
            dot *= beta;
            for i in k + 1..n {
                let vi = v[i];
                a[(i, j)] -= vi * dot;
            }
        }
        // A <- A P (all rows, columns k+1..).
        for i in 0..n {
            let mut dot = ZERO;
            for j in k + 1..n {
                dot += a[(i, j)] * v[j];
            }
            dot *= beta;
            for j in k + 1..n {
                a[(i, j)] -= dot * v[j].conj();
            }
        }
        // Enforce the Hessenberg zeros explicitly.
        a[(k + 1, k)] = alpha;
        for i in k + 2..n {
            a[(i, k)] = ZERO;
        }
    }
}

/// Complex Givens rotation zeroing g against f:
/// [c, s; -conj(s), c]·[f; g] = [r; 0] with real c.
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64, Complex64) {
    let fmag = f.norm();
    let gmag = g.norm();
    if gmag == 0.0 {
        return (1.0, ZERO, f);
    }
    if fmag == 0.0 {
        return (0.0, g.conj() / gmag, Complex64::new(gmag, 0.0));
    }
    let r = (fmag * fmag + gmag * gmag).sqrt();
    let c = fmag / r;
    let s = (f / fmag) * g.conj() * (1.0 / r);
    let rr = (f / fmag) * r;
    (c, s, rr)
}

/// Wilkinson shift: eigenvalue of the trailing 2x2 block closest to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let p = (a - d) * 0.5;
    let bc = b * c;
    let q = (p * p + bc).sqrt();
    let den_plus = p + q;
    let den_minus = p - q;
    let den = if den_plus.norm() >= den_minus.norm() { den_plus } else { den_minus };
    if den.norm() == 0.0 {
        d
    } else {
        d - bc / den
    }
}

fn hessenberg_qr(h: &mut CMat) -> Result<Vec<Complex64>> {
    let n = h.rows();
    let mut vals = Vec::with_capacity(n);
    let hnorm = h.frobenius_norm().max(1e-300);
    let eps = f64::EPSILON;

    let mut hi = n - 1;
    let mut cs = alloc::vec![0.0f64; n];
    let mut ss = alloc::vec![ZERO; n];
    loop {
        // Deflate converged trailing 1x1 blocks.
        loop {
            if hi == 0 {
                vals.push(h[(0, 0)]);
                return Ok(vals);
            }
            let sub = h[(hi, hi - 1)].norm();
            let local = h[(hi - 1, hi - 1)].norm() + h[(hi, hi)].norm();
            let thresh = eps * if local > 0.0 { local } else { hnorm };
            if sub <= thresh {
                vals.push(h[(hi, hi)]);
                hi -= 1;
            } else {
                break;
            }
        }

        // Active block [lo..=hi]: walk up until a negligible subdiagonal.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let local = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            let thresh = eps * if local > 0.0 { local } else { hnorm };
            if sub <= thresh {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }

        let mut iter = 0;
        loop {
            iter += 1;
            if iter > MAX_ITERS_PER_EIGENVALUE {
                return Err(Error::Numerical("QR iteration failed to converge"));
            }
            let shift = if iter % 12 == 0 {
                // Exceptional shift to break stagnation.
                h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
            } else {
                wilkinson_shift(
                    h[(hi - 1, hi - 1)],
                    h[(hi - 1, hi)],
                    h[(hi, hi - 1)],
                    h[(hi, hi)],
                )
            };

            // Explicit shifted QR on the active window.
            for i in lo..=hi {
                h[(i, i)] -= shift;
            }
            for i in lo..hi {
                let (c, s, r) = givens(h[(i, i)], h[(i + 1, i)]);
                cs[i] = c;
                ss[i] = s;
                h[(i, i)] = r;
                h[(i + 1, i)] = ZERO;
                for j in i + 1..=hi {
                    let top = h[(i, j)];
                    let bot = h[(i + 1, j)];
                    h[(i, j)] = top * c + bot * s;
                    h[(i + 1, j)] = -top * s.conj() + bot * c;
                }
            }
            // H <- R Q + shift I: apply the adjoint rotations on the right.
            for i in lo..hi {
                let c = cs[i];
                let s = ss[i];
                for k in lo..=i + 1 {
                    let left = h[(k, i)];
                    let right = h[(k, i + 1)];
                    h[(k, i)] = left * c + right * s.conj();
                    h[(k, i + 1)] = -left * s + right * c;
                }
            }
            for i in lo..=hi {
                h[(i, i)] += shift;
            }

            // Converged at the bottom of the window?
            let sub = h[(hi, hi - 1)].norm();
            let local = h[(hi - 1, hi - 1)].norm() + h[(hi, hi)].norm();
            let thresh = eps * if local > 0.0 { local } else { hnorm };
            if sub <= thresh {
                h[(hi, hi - 1)] = ZERO;
                break;
            }
            // The window may also have split in the middle; re-scan.
            let mut new_lo = hi;
            while new_lo > lo {
                let sub = h[(new_lo, new_lo - 1)].norm();
                let local = h[(new_lo - 1, new_lo - 1)].norm() + h[(new_lo, new_lo)].norm();
                let thresh = eps * if local > 0.0 { local } else { hnorm };
                if sub <= thresh {
                    h[(new_lo, new_lo - 1)] = ZERO;
                    break;
                }
                new_lo -= 1;
            }
            if new_lo > lo {
                lo = new_lo;
            }
        }
    }
}
