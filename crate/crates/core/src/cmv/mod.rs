//! CMV matrices as banded windows: half- and whole-line assembly, the LM
//! factorization, matrix-power diagonals (trigonometric moments of the
//! diagonal spectral measures) and the diagonal/off-diagonal split of the
//! factors.

mod banded;

use num_complex::Complex;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::coeffs::VerblunskyDescriptor;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub use banded::{BandedMatrixWindow, Entry};

pub type CmvWindow<T> = BandedMatrixWindow<Complex<T>>;

/// `rho = sqrt(1 - |alpha|^2)`, clamped at zero.
pub fn rho<T: Real>(alpha: Complex<T>) -> T {
    (T::one() - alpha.norm_sqr()).max(T::zero()).sqrt()
}

/// The unitary block `(conj(alpha), rho; rho, -alpha)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real"))]
pub struct ThetaBlock<T> {
    pub alpha: Complex<T>,
    pub rho: T,
}

impl<T: Real> ThetaBlock<T> {
    pub fn new(alpha: Complex<T>) -> Self {
        Self {
            alpha,
            rho: rho(alpha),
        }
    }

    pub fn matrix(&self) -> [[Complex<T>; 2]; 2] {
        let r = Complex::new(self.rho, T::zero());
        [[self.alpha.conj(), r], [r, -self.alpha]]
    }

    /// `max |(theta* theta - I)_{ij}|`.
    pub fn unitarity_defect(&self) -> T {
        let m = self.matrix();
        let mut worst = T::zero();
        for i in 0..2 {
            for j in 0..2 {
                let mut s = m[0][i].conj() * m[0][j] + m[1][i].conj() * m[1][j];
                if i == j {
                    s -= Complex::one();
                }
                worst = worst.max(s.norm());
            }
        }
        worst
    }
}

/// Entry `(i, j)` of the five-diagonal CMV matrix built from `alpha`.
///
/// Even rows `i`: `conj(a_i) rho_{i-1}`, `-conj(a_i) a_{i-1}`,
/// `conj(a_{i+1}) rho_i`, `rho_{i+1} rho_i` in columns `i-1 ..= i+2`.
/// Odd rows `i`: `rho_{i-1} rho_{i-2}`, `-rho_{i-1} a_{i-2}`,
/// `-conj(a_i) a_{i-1}`, `-rho_i a_{i-1}` in columns `i-2 ..= i+1`.
fn cmv_row<T: Real>(alpha: &impl Fn(i64) -> Result<Complex<T>>, i: i64) -> Result<Vec<(i64, Complex<T>)>> {
    let r = |n: i64| -> Result<Complex<T>> { Ok(Complex::new(rho(alpha(n)?), T::zero())) };
    Ok(if i.rem_euclid(2) == 0 {
        vec![
            (i - 1, alpha(i)?.conj() * r(i - 1)?),
            (i, -alpha(i)?.conj() * alpha(i - 1)?),
            (i + 1, alpha(i + 1)?.conj() * r(i)?),
            (i + 2, r(i + 1)? * r(i)?),
        ]
    } else {
        vec![
            (i - 2, r(i - 1)? * r(i - 2)?),
            (i - 1, -r(i - 1)? * alpha(i - 2)?),
            (i, -alpha(i)?.conj() * alpha(i - 1)?),
            (i + 1, -r(i)? * alpha(i - 1)?),
        ]
    })
}

fn assemble<T: Real>(
    alpha: impl Fn(i64) -> Result<Complex<T>>,
    lo: i64,
    hi: i64,
    margin_lo: usize,
    margin_hi: usize,
) -> Result<CmvWindow<T>> {
    let mut w = BandedMatrixWindow::zeros(lo, hi, 2, margin_lo, margin_hi);
    for i in lo..=hi {
        for (j, v) in cmv_row(&alpha, i)? {
            if (lo..=hi).contains(&j) {
                w.set(i, j, v);
            }
        }
    }
    Ok(w)
}

/// Clip a window request to the index range where the descriptor lives;
/// returns `(lo, hi, margin_lo)`.
fn clip<T: Real>(desc: &VerblunskyDescriptor<T>, center: i64, halfwidth: usize) -> (i64, i64, usize) {
    let lo = center - halfwidth as i64;
    let hi = center + halfwidth as i64;
    if desc.is_half_line() && lo <= 0 {
        (0, hi, 0)
    } else {
        (lo, hi, 2)
    }
}

/// Top-left `size x size` corner of the half-line CMV matrix (`alpha_{-1} = -1`).
///
/// With `terminator = Some(t)`, `|t| = 1`, the coefficient at `size - 1` is
/// replaced by `t` and the finite matrix is exactly unitary.
pub fn build_half_cmv<T: Real>(
    desc: &VerblunskyDescriptor<T>,
    size: usize,
    terminator: Option<Complex<T>>,
) -> Result<CmvWindow<T>> {
    if !desc.is_half_line() {
        return Err(Error::InvalidArgument("half-line CMV needs a half-line descriptor".into()));
    }
    if size < 2 {
        return Err(Error::InvalidArgument("CMV corner needs size >= 2".into()));
    }
    if let Some(t) = terminator {
        if (t.norm() - T::one()).abs() > T::lit(1e-12) {
            return Err(Error::InvalidArgument(format!("terminator must be unimodular, got |t| = {}", t.norm())));
        }
    }
    let last = size as i64 - 1;
    let alpha = |n: i64| match terminator {
        Some(t) if n == last => Ok(t),
        _ => desc.value(n),
    };
    let margin_hi = if terminator.is_some() { 0 } else { 2 };
    assemble(alpha, 0, last, 0, margin_hi)
}

/// Rows `center - halfwidth ..= center + halfwidth` of the whole-line CMV
/// matrix (for half-line descriptors the window is clipped at row 0, where
/// it coincides with the half-line matrix).
pub fn build_whole_cmv<T: Real>(desc: &VerblunskyDescriptor<T>, center: i64, halfwidth: usize) -> Result<CmvWindow<T>> {
    if halfwidth < 2 {
        return Err(Error::InvalidArgument("CMV window needs halfwidth >= 2".into()));
    }
    let (lo, hi, margin_lo) = clip(desc, center, halfwidth);
    assemble(|n| desc.value(n), lo, hi, margin_lo, 2)
}

/// `E = L M` with `theta_{2k}` on rows `(2k, 2k+1)` of `L` and
/// `theta_{2k-1}` on rows `(2k-1, 2k)` of `M`.
pub fn lm_factor<T: Real>(
    desc: &VerblunskyDescriptor<T>,
    center: i64,
    halfwidth: usize,
) -> Result<(CmvWindow<T>, CmvWindow<T>)> {
    if halfwidth < 2 {
        return Err(Error::InvalidArgument("CMV window needs halfwidth >= 2".into()));
    }
    let (lo, hi, margin_lo) = clip(desc, center, halfwidth);
    let margin_lo = margin_lo.min(1);
    let mut l = BandedMatrixWindow::zeros(lo, hi, 1, margin_lo, 1);
    let mut m = BandedMatrixWindow::zeros(lo, hi, 1, margin_lo, 1);
    // blocks touching the window start at k with first row >= lo - 1
    let first = if desc.is_half_line() { (lo - 1).max(-1) } else { lo - 1 };
    for k in first..=hi {
        let target = if k.rem_euclid(2) == 0 { &mut l } else { &mut m };
        let block = ThetaBlock::new(desc.value(k)?).matrix();
        for (di, row) in block.iter().enumerate() {
            for (dj, v) in row.iter().enumerate() {
                target.set(k + di as i64, k + dj as i64, *v);
            }
        }
    }
    Ok((l, m))
}

/// Window halfwidth used for the `ell`-th power.
pub fn power_halfwidth(ell: usize) -> usize {
    2 * ell + 4
}

/// `[E^ell]_{n,n}`, the `ell`-th trigonometric moment of the diagonal
/// spectral measure at `n`.
pub fn power_diagonal<T: Real>(desc: &VerblunskyDescriptor<T>, n: i64, ell: usize) -> Result<Complex<T>> {
    power_diagonal_with(desc, n, ell, power_halfwidth(ell))
}

/// [`power_diagonal`] on an explicit window halfwidth.
pub fn power_diagonal_with<T: Real>(
    desc: &VerblunskyDescriptor<T>,
    n: i64,
    ell: usize,
    halfwidth: usize,
) -> Result<Complex<T>> {
    if ell == 0 {
        return Err(Error::InvalidArgument("moment order must be positive".into()));
    }
    let e = build_whole_cmv(desc, n, halfwidth.max(2))?;
    let p = e.pow(ell)?;
    if !p.is_interior(n) {
        return Err(Error::Precondition(format!(
            "window halfwidth {halfwidth} too small for power {ell}"
        )));
    }
    Ok(p.get(n, n))
}

/// Diagonal and off-diagonal parts of the LM factors:
/// `L = X_{-1} + Y_{-1}`, `M = X_{+1} + Y_{+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct XySplit<T> {
    pub x_minus: CmvWindow<T>,
    pub y_minus: CmvWindow<T>,
    pub x_plus: CmvWindow<T>,
    pub y_plus: CmvWindow<T>,
}

impl<T: Real> XySplit<T> {
    /// `X_{(-1)^m}`.
    pub fn x(&self, m: i64) -> &CmvWindow<T> {
        if m.rem_euclid(2) == 1 {
            &self.x_minus
        } else {
            &self.x_plus
        }
    }

    /// `Y_{(-1)^m}`.
    pub fn y(&self, m: i64) -> &CmvWindow<T> {
        if m.rem_euclid(2) == 1 {
            &self.y_minus
        } else {
            &self.y_plus
        }
    }

    /// `Y_{(-1)^s} Y_{(-1)^{s+1}} ... Y_{(-1)^{s+r}}`.
    pub fn y_chain(&self, s: i64, r: usize) -> Result<CmvWindow<T>> {
        let mut acc = self.y(s).clone();
        for i in 1..=r as i64 {
            acc = acc.mul(self.y(s + i))?;
        }
        Ok(acc)
    }

    /// `Y_{(-1)^{j-s}} ... Y_{(-1)^{j-1}} X_{(-1)^j} Y_{(-1)^{j+1}} ... Y_{(-1)^{j+s}}`.
    pub fn sandwich(&self, j: i64, s: usize) -> Result<CmvWindow<T>> {
        let s = s as i64;
        let mut acc: Option<CmvWindow<T>> = None;
        for m in j - s..=j + s {
            let f = if m == j { self.x(m) } else { self.y(m) };
            acc = Some(match acc {
                None => f.clone(),
                Some(a) => a.mul(f)?,
            });
        }
        Ok(acc.expect("at least one factor"))
    }
}

pub fn xy_split<T: Real>(desc: &VerblunskyDescriptor<T>, center: i64, halfwidth: usize) -> Result<XySplit<T>> {
    let (l, m) = lm_factor(desc, center, halfwidth)?;
    let x_minus = l.diagonal_part();
    let x_plus = m.diagonal_part();
    Ok(XySplit {
        y_minus: l.sub(&x_minus)?,
        y_plus: m.sub(&x_plus)?,
        x_minus,
        x_plus,
    })
}
