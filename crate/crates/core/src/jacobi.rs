//! Jacobi matrices on the half- and whole line.
//!
//! The pair stored at index `n` of a [`JacobiDescriptor`] is `(a_n, b_n)`:
//! `b_n` sits on the diagonal and `a_n` couples sites `n` and `n + 1`. A
//! half-line matrix lives on sites `n >= 0`, with `a_{-1} = 0`.

use num_complex::Complex;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::cmv::BandedMatrixWindow;
use crate::coeffs::{Generator, JacobiDescriptor, JacobiPair};
use crate::error::{Error, Result};
use crate::moebius::Side;
use crate::scalar::Real;

/// Tridiagonal window of a Jacobi matrix.
pub type JacobiWindow<T> = BandedMatrixWindow<T>;

/// Default continued-fraction depth for m-functions.
pub const DEFAULT_DEPTH: usize = 400;

/// Rows `center - halfwidth ..= center + halfwidth` of `H` (clipped at row 0
/// for half-line descriptors, where the boundary is genuine).
pub fn build_jacobi<T: Real>(desc: &JacobiDescriptor<T>, center: i64, halfwidth: usize) -> Result<JacobiWindow<T>> {
    let mut lo = center - halfwidth as i64;
    let hi = center + halfwidth as i64;
    let mut margin_lo = 1;
    if desc.is_half_line() && lo <= 0 {
        lo = 0;
        margin_lo = 0;
    }
    if hi < lo {
        return Err(Error::InvalidArgument(format!("empty Jacobi window around {center}")));
    }
    let mut w = BandedMatrixWindow::zeros(lo, hi, 1, margin_lo, 1);
    for i in lo..=hi {
        let p = desc.value(i)?;
        w.set(i, i, p.b);
        w.set(i, i + 1, p.a);
        w.set(i + 1, i, p.a);
    }
    Ok(w)
}

/// `∫ x^ell dμ_n = [H^ell]_{n,n}`.
///
/// Orders 1 and 2 use `b_n` and `a_{n-1}^2 + b_n^2 + a_n^2`; higher orders
/// take the diagonal of the windowed power with halfwidth `ell + 2`.
///
/// On a period-two matrix (`a_{2k} = a`, `a_{2k+1} = c`, `b_k = b`,
/// `A = a^2 + c^2`) the fourth moment is `b^4 + 6 b^2 A + A^2 + 2 a^2 c^2`
/// at every site; it separates members of the same class `S(A, b)`.
pub fn jacobi_moment<T: Real>(desc: &JacobiDescriptor<T>, n: i64, ell: usize) -> Result<T> {
    match ell {
        0 => Err(Error::InvalidArgument("moment order must be positive".into())),
        1 => Ok(desc.value(n)?.b),
        2 => {
            let here = desc.value(n)?;
            let left = desc.value(n - 1)?;
            Ok(left.a * left.a + here.b * here.b + here.a * here.a)
        }
        _ => {
            let h = build_jacobi(desc, n, ell + 2)?;
            let p = h.pow(ell)?;
            if !p.is_interior(n) {
                return Err(Error::Precondition(format!("window too small for power {ell}")));
            }
            Ok(p.get(n, n))
        }
    }
}

fn check_upper<T: Real>(z: Complex<T>) -> Result<()> {
    if z.im > T::zero() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("need Im z > 0, got z = {z}")))
    }
}

fn herglotz<T: Real>(m: Complex<T>, index: i64) -> Result<Complex<T>> {
    if m.im > T::zero() && m.re.is_finite() {
        Ok(m)
    } else {
        Err(Error::NonHerglotz { index })
    }
}

/// `m_±(j; z)` for `j` in `lo ..= hi`, from one continued-fraction sweep.
///
/// `m_+(j)` belongs to the restriction of `H` to sites `> j` and `m_-(j)` to
/// sites `<= j`; both are Borel transforms `∫ dμ/(x - z)`. The sweep starts
/// from the seed `-1/z` at distance `depth` beyond the range (or from the
/// exact value `1/(b_0 - z)` at the top of a half-line matrix) and uses
/// `-1/m_-(j+1) = z - b_{j+1} + a_j^2 m_-(j)` upwards and
/// `-1/m_+(j) = z - b_{j+1} + a_{j+1}^2 m_+(j+1)` downwards.
pub fn m_function_trace<T: Real>(
    desc: &JacobiDescriptor<T>,
    side: Side,
    z: Complex<T>,
    lo: i64,
    hi: i64,
    depth: usize,
) -> Result<Vec<(i64, Complex<T>)>> {
    check_upper(z)?;
    if depth == 0 {
        return Err(Error::InvalidArgument("continued-fraction depth must be positive".into()));
    }
    if hi < lo {
        return Err(Error::InvalidArgument("empty index range".into()));
    }
    let seed = -Complex::<T>::one() / z;
    let depth = depth as i64;
    match side {
        Side::Plus => {
            if desc.is_half_line() && lo < -1 {
                return Err(Error::IndexOutOfRange { index: lo });
            }
            let mut m = seed;
            let mut out = Vec::with_capacity((hi - lo + 1) as usize);
            for j in (lo..hi + depth).rev() {
                let p = desc.value(j + 1)?;
                let d = Complex::from(p.b) - z - m * (p.a * p.a);
                m = herglotz(Complex::<T>::one() / d, j)?;
                if j <= hi {
                    out.push((j, m));
                }
            }
            out.reverse();
            Ok(out)
        }
        Side::Minus => {
            if desc.is_half_line() && lo < 0 {
                return Err(Error::IndexOutOfRange { index: lo });
            }
            let (start, mut m) = if desc.is_half_line() && lo - depth <= 0 {
                (0, herglotz(Complex::<T>::one() / (Complex::from(desc.value(0)?.b) - z), 0)?)
            } else {
                (lo - depth, seed)
            };
            let mut out = Vec::with_capacity((hi - lo + 1) as usize);
            if start >= lo {
                out.push((start, m));
            }
            for j in start..hi {
                let a = desc.value(j)?.a;
                let b = desc.value(j + 1)?.b;
                let d = Complex::from(b) - z - m * (a * a);
                m = herglotz(Complex::<T>::one() / d, j + 1)?;
                if j + 1 >= lo {
                    out.push((j + 1, m));
                }
            }
            Ok(out)
        }
    }
}

/// `m_±(n; z)`; see [`m_function_trace`].
pub fn m_function<T: Real>(
    desc: &JacobiDescriptor<T>,
    n: i64,
    side: Side,
    z: Complex<T>,
    depth: usize,
) -> Result<Complex<T>> {
    Ok(m_function_trace(desc, side, z, n, n, depth)?[0].1)
}

/// `<δ_n, (H - z)^{-1} δ_n>`.
///
/// This is the Wronskian quotient `u(n) v(n) / W(v, u)` for the Weyl
/// solutions `u` (square-summable at `+∞`) and `v` (at `-∞`), written in
/// terms of their boundary data `m_±(n)`:
/// `G(n, n) = m_-(n) / (1 - a_n^2 m_-(n) m_+(n))`.
/// When `a_n = 0` the matrix splits at `n` and `G(n, n) = m_-(n)`.
pub fn resolvent_diagonal<T: Real>(desc: &JacobiDescriptor<T>, n: i64, z: Complex<T>, depth: usize) -> Result<Complex<T>> {
    let mm = m_function(desc, n, Side::Minus, z, depth)?;
    let mp = m_function(desc, n, Side::Plus, z, depth)?;
    let a = desc.value(n)?.a;
    let w = Complex::<T>::one() - mm * mp * (a * a);
    if w.norm() < T::epsilon() * T::lit(16.0) {
        return Err(Error::VanishingWronskian);
    }
    herglotz(mm / w, n)
}

/// Rows of the probe used by [`simon_classify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeWindow {
    pub start: i64,
    pub len: usize,
}

impl ProbeWindow {
    pub fn new(start: i64, len: usize) -> Self {
        Self { start, len }
    }

    pub fn indices(&self) -> std::ops::Range<i64> {
        self.start..self.start + self.len as i64
    }
}

/// Spectral type of a Simon-class matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimonTag {
    /// `a, c > 0`: period two, hence reflectionless on its spectrum.
    #[serde(rename = "periodic/reflectionless")]
    PeriodicReflectionless,
    /// `a c = 0`: a direct sum of finite blocks.
    #[serde(rename = "direct-sum/pure-point")]
    DirectSumPurePoint,
}

/// Outcome of [`simon_classify`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum SimonLabel<T> {
    SimonClass {
        /// `a_{2k}`.
        a: T,
        /// `a_{2k+1}`.
        c: T,
        b: T,
        /// `A = a^2 + c^2`.
        big_a: T,
        /// `B = b`.
        big_b: T,
        tag: SimonTag,
        /// First and second moments were found constant over the probe.
        moments_verified: bool,
    },
    NotSimon {
        witness: i64,
    },
}

impl<T: Real> SimonLabel<T> {
    pub fn is_simon(&self) -> bool {
        matches!(self, SimonLabel::SimonClass { .. })
    }

    /// `S(A, B)` for members of the class.
    pub fn label(&self) -> Option<String> {
        match self {
            SimonLabel::SimonClass { big_a, big_b, .. } => Some(format!("S({big_a}, {big_b})")),
            SimonLabel::NotSimon { .. } => None,
        }
    }
}

/// Matches `a_{2k} = a`, `a_{2k+1} = c`, `b_k = b` on the probe window and
/// checks constancy of the first two moments there.
///
/// Constant and periodic descriptors are compared exactly; other kinds with
/// a tolerance of `1e-12`. The witness is the first probe index where the
/// pattern breaks.
pub fn simon_classify<T: Real>(desc: &JacobiDescriptor<T>, probe: ProbeWindow) -> Result<SimonLabel<T>> {
    if desc.is_half_line() {
        return Err(Error::InvalidArgument("Simon classification needs a whole-line descriptor".into()));
    }
    if probe.len < 2 {
        return Err(Error::InvalidArgument("probe window needs at least two sites".into()));
    }
    let tol = match desc.generator {
        Generator::Constant { .. } | Generator::Periodic { .. } => T::zero(),
        _ => T::lit(1e-12),
    };
    let close = |x: T, y: T| (x - y).abs() <= tol;

    let first: JacobiPair<T> = desc.value(probe.start)?;
    let second: JacobiPair<T> = desc.value(probe.start + 1)?;
    let (a, c) = if probe.start.rem_euclid(2) == 0 {
        (first.a, second.a)
    } else {
        (second.a, first.a)
    };
    let b = first.b;
    for n in probe.indices() {
        let p = desc.value(n)?;
        let expect = if n.rem_euclid(2) == 0 { a } else { c };
        if !close(p.b, b) || !close(p.a, expect) {
            return Ok(SimonLabel::NotSimon { witness: n });
        }
    }

    let mtol = T::lit(1e-10);
    let m1 = jacobi_moment(desc, probe.start, 1)?;
    let m2 = jacobi_moment(desc, probe.start, 2)?;
    let mut verified = true;
    for n in probe.indices() {
        verified &= (jacobi_moment(desc, n, 1)? - m1).abs() <= mtol;
        verified &= (jacobi_moment(desc, n, 2)? - m2).abs() <= mtol;
    }
    let tag = if a > T::zero() && c > T::zero() {
        SimonTag::PeriodicReflectionless
    } else {
        SimonTag::DirectSumPurePoint
    };
    Ok(SimonLabel::SimonClass {
        a,
        c,
        b,
        big_a: a * a + c * c,
        big_b: b,
        tag,
        moments_verified: verified,
    })
}
