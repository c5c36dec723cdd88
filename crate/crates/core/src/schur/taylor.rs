use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// `a / b` as truncated power series (`b[0] != 0`).
fn series_div<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Vec<Complex<T>> {
    let n = a.len();
    let mut q = vec![Complex::zero(); n];
    for k in 0..n {
        let mut s = a[k];
        for j in 1..=k.min(b.len() - 1) {
            s -= b[j] * q[k - j];
        }
        q[k] = s / b[0];
    }
    q
}

/// Schur parameters from the Taylor coefficients `c_0, c_1, ...` of a Schur
/// function at 0, by running the algorithm on truncated power series.
///
/// Each step consumes one coefficient, so `len(c)` parameters are returned
/// unless a unimodular parameter ends the sequence early.
pub fn schur_params_from_taylor<T: Real>(c: &[Complex<T>], tol: T) -> Result<Vec<Complex<T>>> {
    let mut f = c.to_vec();
    let mut out = Vec::with_capacity(c.len());
    while let Some(&gamma) = f.first() {
        let m = gamma.norm();
        if m > T::one() + tol {
            return Err(Error::NotSchur {
                index: out.len(),
                modulus: m.to_f64().unwrap_or(f64::NAN),
            });
        }
        out.push(gamma);
        if m >= T::one() - tol {
            break;
        }
        // z f_next = (f - gamma) / (1 - conj(gamma) f)
        let num: Vec<Complex<T>> = f[1..].to_vec();
        let mut den: Vec<Complex<T>> = f.iter().map(|x| -gamma.conj() * *x).collect();
        den[0] += Complex::one();
        f = series_div(&num, &den);
    }
    Ok(out)
}

/// First `len` Taylor coefficients of `f(z; params)` (finitely many
/// parameters, zero tail), by composing the inverse steps on power series.
pub fn schur_taylor<T: Real>(params: &[Complex<T>], len: usize) -> Vec<Complex<T>> {
    let mut w = vec![Complex::zero(); len];
    for g in params.iter().rev() {
        // (g + z w) / (1 + conj(g) z w)
        let mut zw = vec![Complex::zero(); len];
        if len > 0 {
            zw[1..].copy_from_slice(&w[..len - 1]);
        }
        let mut num = zw.clone();
        let mut den: Vec<Complex<T>> = zw.iter().map(|x| g.conj() * *x).collect();
        if len > 0 {
            num[0] += *g;
            den[0] += Complex::one();
        }
        w = series_div(&num, &den);
    }
    w
}
