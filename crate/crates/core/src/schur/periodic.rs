use num_complex::Complex;
use num_traits::{One, Zero};

use crate::coeffs::Ray;
use crate::error::{Error, Result};
use crate::moebius::MoebiusMap;
use crate::scalar::{unit, Real};

/// Schur function of the constant sequence `alpha_n = a`, `0 <= a < 1`:
/// `f_a(z) = 2a / ((1 - z) + sqrt((1 - z e^{i t}) (1 - z e^{-i t})))` with
/// `t = 2 arcsin a`, each factor under its principal square root. This is
/// the root of `a z f^2 + (1 - z) f - a = 0` that is analytic in the disc
/// (and its radial limit on the circle).
pub fn constant_alpha_closed_form<T: Real>(a: T, z: Complex<T>) -> Complex<T> {
    if a == T::zero() {
        return Complex::zero();
    }
    let t = T::lit(2.0) * a.asin();
    let one = Complex::<T>::one();
    let root = (one - z * unit(t)).sqrt() * (one - z * unit(-t)).sqrt();
    let den = (one - z) + root;
    Complex::new(a + a, T::zero()) / den
}

/// Constant complex sequence `alpha_n = a`: `f = e^{i arg a} f_{|a|}`.
pub fn constant_schur<T: Real>(a: Complex<T>, z: Complex<T>) -> Complex<T> {
    let m = a.norm();
    if m == T::zero() {
        return Complex::zero();
    }
    constant_alpha_closed_form(m, z) * (a / m)
}

/// Fixed point `w = (A w + B) / (C w + D)` selecting the branch that is the
/// limit of interior Schur values: the root in the open disc if there is
/// one, otherwise the attracting (or neutral) fixed point.
fn schur_fixed_point<T: Real>(m: &MoebiusMap<T>) -> Result<Complex<T>> {
    let m = m.normalized().ok_or(Error::DegenerateProduct)?;
    let (a, b, c, d) = (m.a, m.b, m.c, m.d);
    let tiny = T::lit(1e-13);
    let lin = d - a;
    if c.norm() <= tiny {
        if lin.norm() <= tiny {
            return Err(Error::Numeric("periodic tail has no isolated fixed point".into()));
        }
        return Ok(b / lin);
    }
    // c w^2 + (d - a) w - b = 0, roots via the cancellation-free form
    let disc = (lin * lin + b * c * T::lit(4.0)).sqrt();
    let s = if (lin.conj() * disc).re >= T::zero() { disc } else { -disc };
    let q = -(lin + s) / T::lit(2.0);
    let mut roots = vec![q / c];
    if q.norm() > T::zero() {
        roots.push(-b / q);
    } else {
        roots.push(roots[0]);
    }
    let inside: Vec<Complex<T>> = roots
        .iter()
        .copied()
        .filter(|w| w.norm() < T::one() - T::lit(1e-10))
        .collect();
    if inside.len() == 1 {
        return Ok(inside[0]);
    }
    let gain = |w: Complex<T>| (c * w + d).norm();
    let w = if gain(roots[0]) >= gain(roots[1]) { roots[0] } else { roots[1] };
    if w.norm() > T::one() + T::lit(1e-8) {
        return Err(Error::Numeric("periodic fixed point outside the closed disc".into()));
    }
    Ok(w)
}

/// Schur function of the purely periodic parameters
/// `pattern[0], pattern[1], ..., pattern[P-1], pattern[0], ...` at `|z| <= 1`.
pub fn periodic_schur<T: Real>(pattern: &[Complex<T>], z: Complex<T>) -> Result<Complex<T>> {
    if pattern.is_empty() {
        return Err(Error::InvalidArgument("empty periodic pattern".into()));
    }
    if pattern.iter().all(|p| p.is_zero()) {
        return Ok(Complex::zero());
    }
    let one = Complex::<T>::one();
    let mut acc = MoebiusMap::identity();
    for p in pattern {
        // w -> (p + z w) / (1 + conj(p) z w)
        acc = acc * MoebiusMap::new(z, *p, p.conj() * z, one);
        acc = acc.normalized().ok_or(Error::DegenerateProduct)?;
    }
    let w = schur_fixed_point(&acc)?;
    // polish on the contraction side
    if z.norm() < T::one() {
        let mut v = w;
        for p in pattern.iter().rev() {
            v = super::inverse_step(*p, z, v);
        }
        if (v - w).norm() > T::lit(1e-8) {
            return Err(Error::Numeric("periodic fixed point failed to reproduce".into()));
        }
    }
    Ok(w)
}

/// Value of the tail described by `ray` (at offset `ray.start`), using
/// `f(z; e^{i(phi + tau m)} g_m) = e^{i phi} f(e^{i tau} z; g)`.
pub(super) fn gauged_periodic_tail<T: Real>(ray: &Ray<Complex<T>>, z: Complex<T>) -> Result<Complex<T>> {
    if ray.is_zero() {
        return Ok(Complex::zero());
    }
    let zeta = z * unit(ray.step);
    Ok(unit(ray.phase) * periodic_schur(&ray.pattern, zeta)?)
}
