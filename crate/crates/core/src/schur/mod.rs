//! Schur functions from their parameters: truncated bottom-up evaluation,
//! exact evaluation for gauge-periodic tails, the boundary-value functions
//! `f_+`, `f_-`, the diagonal Schur function, Caratheodory functions and the
//! inverse (Taylor data to parameters).

mod periodic;
mod taylor;

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::coeffs::{Direction, Ray, VerblunskyDescriptor};
use crate::error::{Error, Result};
use crate::moebius::Side;
use crate::scalar::Real;

pub use periodic::{constant_alpha_closed_form, constant_schur, periodic_schur};
pub use taylor::{schur_params_from_taylor, schur_taylor};

/// Hard cap on the truncation depth.
pub const MAX_DEPTH: usize = 100_000;
/// Default interior tolerance.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Parameters of modulus at least `1 - UNIMODULAR_SLACK` terminate the
/// algorithm.
const UNIMODULAR_SLACK: f64 = 1e-14;

/// How deep the continued fraction is truncated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DepthPolicy {
    Fixed(usize),
    /// Depth with `2 |z|^N <= tol`, capped at [`MAX_DEPTH`].
    Tolerance(f64),
}

impl Default for DepthPolicy {
    fn default() -> Self {
        DepthPolicy::Tolerance(DEFAULT_TOL)
    }
}

impl DepthPolicy {
    /// Truncation depth at `|z| = r < 1`.
    pub fn depth(&self, r: f64) -> usize {
        match *self {
            DepthPolicy::Fixed(n) => n.min(MAX_DEPTH),
            DepthPolicy::Tolerance(tol) => {
                if r <= 0.0 {
                    1
                } else if r >= 1.0 {
                    MAX_DEPTH
                } else {
                    let n = ((tol / 2.0).ln() / r.ln()).ceil();
                    if n.is_finite() {
                        (n.max(1.0) as usize).min(MAX_DEPTH)
                    } else {
                        MAX_DEPTH
                    }
                }
            }
        }
    }
}

/// Parameter sequence `gamma_0, gamma_1, ...` of a Schur function.
pub trait ParameterSource<T: Real> {
    fn param(&self, j: usize) -> Result<Complex<T>>;

    /// Gauge-periodic description of the sequence from some index on, when
    /// one is known.
    fn structure(&self) -> Option<Ray<Complex<T>>>;
}

/// Finite list, continued by zeros.
impl<T: Real> ParameterSource<T> for [Complex<T>] {
    fn param(&self, j: usize) -> Result<Complex<T>> {
        Ok(self.get(j).copied().unwrap_or_else(Complex::zero))
    }

    fn structure(&self) -> Option<Ray<Complex<T>>> {
        Some(Ray {
            start: self.len(),
            phase: T::zero(),
            step: T::zero(),
            pattern: vec![Complex::zero()],
        })
    }
}

impl<T: Real> ParameterSource<T> for Vec<Complex<T>> {
    fn param(&self, j: usize) -> Result<Complex<T>> {
        self.as_slice().param(j)
    }

    fn structure(&self) -> Option<Ray<Complex<T>>> {
        self.as_slice().structure()
    }
}

/// `alpha_n, alpha_{n+1}, ...`
#[derive(Clone, Copy, Debug)]
pub struct PlusTail<'a, T: Real> {
    pub desc: &'a VerblunskyDescriptor<T>,
    pub n: i64,
}

impl<T: Real> ParameterSource<T> for PlusTail<'_, T> {
    fn param(&self, j: usize) -> Result<Complex<T>> {
        self.desc.value(self.n + j as i64)
    }

    fn structure(&self) -> Option<Ray<Complex<T>>> {
        self.desc.ray(self.n, Direction::Forward)
    }
}

/// `-conj(alpha_{n-1}), -conj(alpha_{n-2}), ...`
#[derive(Clone, Copy, Debug)]
pub struct MinusTail<'a, T: Real> {
    pub desc: &'a VerblunskyDescriptor<T>,
    pub n: i64,
}

impl<T: Real> ParameterSource<T> for MinusTail<'_, T> {
    fn param(&self, j: usize) -> Result<Complex<T>> {
        Ok(-self.desc.value(self.n - 1 - j as i64)?.conj())
    }

    fn structure(&self) -> Option<Ray<Complex<T>>> {
        // -conj(p e^{i phi}) = -conj(p) e^{-i phi}
        self.desc
            .ray(self.n - 1, Direction::Backward)
            .map(|r| Ray {
                start: r.start,
                phase: -r.phase,
                step: -r.step,
                pattern: r.pattern.iter().map(|p| -p.conj()).collect(),
            })
    }
}

fn is_unimodular<T: Real>(g: Complex<T>) -> bool {
    g.norm() >= T::one() - T::lit(UNIMODULAR_SLACK)
}

/// One inverse Schur step `w -> (gamma + z w) / (1 + conj(gamma) z w)`.
#[inline]
pub fn inverse_step<T: Real>(gamma: Complex<T>, z: Complex<T>, w: Complex<T>) -> Complex<T> {
    let zw = z * w;
    (gamma + zw) / (Complex::<T>::one() + gamma.conj() * zw)
}

/// One forward Schur step: `f_{n+1}` from `f_n` and `gamma_n`.
pub fn forward_step<T: Real>(gamma: Complex<T>, z: Complex<T>, f: Complex<T>) -> Result<Complex<T>> {
    let den = (Complex::<T>::one() - gamma.conj() * f) * z;
    if den.norm() == T::zero() {
        return Err(Error::Pole);
    }
    Ok((f - gamma) / den)
}

/// Fold the inverse steps `j = top - 1, ..., 0` onto the seed `w`.
fn fold_down<T: Real, S: ParameterSource<T> + ?Sized>(
    source: &S,
    params: &[Complex<T>],
    top: usize,
    z: Complex<T>,
    mut w: Complex<T>,
) -> Result<Complex<T>> {
    for j in (0..top).rev() {
        let g = match params.get(j) {
            Some(g) => *g,
            None => source.param(j)?,
        };
        w = inverse_step(g, z, w);
    }
    Ok(w)
}

/// Scan `gamma_0 .. gamma_{limit-1}`; returns the collected parameters and
/// the index of the first unimodular one.
fn scan<T: Real, S: ParameterSource<T> + ?Sized>(
    source: &S,
    limit: usize,
) -> Result<(Vec<Complex<T>>, Option<usize>)> {
    let mut params = Vec::with_capacity(limit.min(MAX_DEPTH));
    for j in 0..limit {
        let g = source.param(j)?;
        params.push(g);
        if is_unimodular(g) {
            return Ok((params, Some(j)));
        }
    }
    Ok((params, None))
}

/// `f(z; gamma_0, gamma_1, ...)` for `|z| <= 1`.
///
/// Interior points are truncated per `policy` (tail value 0), with
/// `|f_N(z) - f(z)| <= 2 |z|^N`. Sources that terminate at a unimodular
/// parameter or vanish beyond a known index are evaluated exactly; boundary
/// points are only accepted for such sources.
pub fn schur_eval<T: Real, S: ParameterSource<T> + ?Sized>(
    source: &S,
    z: Complex<T>,
    policy: DepthPolicy,
) -> Result<Complex<T>> {
    let r = z.norm();
    if !(r <= T::one() + T::lit(1e-12)) {
        return Err(Error::InvalidArgument(format!("Schur functions live on |z| <= 1, got |z| = {r}")));
    }
    let structure = source.structure();
    let zero_from = structure.as_ref().filter(|s| s.is_zero()).map(|s| s.start);
    let boundary = r >= T::one() - T::lit(1e-14);
    let limit = if boundary {
        match (&structure, zero_from) {
            (_, Some(s)) => s,
            (Some(ray), None) => ray.start + ray.pattern.len(),
            (None, None) => 4096,
        }
    } else {
        let n = policy.depth(r.to_f64().unwrap());
        zero_from.map_or(n, |s| s.min(n))
    };
    let (params, terminator) = scan(source, limit)?;
    match terminator {
        Some(j) => fold_down(source, &params, j, z, params[j]),
        None if boundary && zero_from.is_none() => Err(Error::NonRationalBoundary),
        None => fold_down(source, &params, limit, z, Complex::zero()),
    }
}

/// Exact `f(z; gamma)` for `|z| <= 1` when the source is gauge-periodic
/// beyond a finite prefix; the periodic tail is resolved as a fixed point.
///
/// At boundary points this is the radial limit of the interior values.
pub fn schur_eval_structured<T: Real, S: ParameterSource<T> + ?Sized>(
    source: &S,
    z: Complex<T>,
) -> Result<Complex<T>> {
    let ray = source.structure().ok_or(Error::NonRationalBoundary)?;
    let prefix_len = ray.start + ray.pattern.len();
    let (params, terminator) = scan(source, prefix_len)?;
    if let Some(j) = terminator {
        return fold_down(source, &params, j, z, params[j]);
    }
    let tail = periodic::gauged_periodic_tail(&ray, z)?;
    fold_down(source, &params, ray.start, z, tail)
}

/// `f_+(z, n) = f(z; alpha_n, alpha_{n+1}, ...)`.
pub fn f_plus<T: Real>(
    desc: &VerblunskyDescriptor<T>,
    n: i64,
    z: Complex<T>,
    policy: DepthPolicy,
) -> Result<Complex<T>> {
    schur_eval(&PlusTail { desc, n }, z, policy)
}

/// `f_-(z, n) = f(z; -conj(alpha_{n-1}), -conj(alpha_{n-2}), ...)`;
/// identically 1 at `n = 0` on the half-line.
pub fn f_minus<T: Real>(
    desc: &VerblunskyDescriptor<T>,
    n: i64,
    z: Complex<T>,
    policy: DepthPolicy,
) -> Result<Complex<T>> {
    schur_eval(&MinusTail { desc, n }, z, policy)
}

/// Schur function of the diagonal spectral measure at `n`:
/// `f(z, n) = f_+(z, n) f_-(z, n)`, `|z| < 1`.
pub fn diag_schur<T: Real>(
    desc: &VerblunskyDescriptor<T>,
    n: i64,
    z: Complex<T>,
    policy: DepthPolicy,
) -> Result<Complex<T>> {
    if !(z.norm() < T::one()) {
        return Err(Error::InvalidArgument("diagonal Schur function needs |z| < 1".into()));
    }
    Ok(f_plus(desc, n, z, policy)? * f_minus(desc, n, z, policy)?)
}

/// Evaluator bound to one side of one site of a descriptor.
#[derive(Clone, Copy, Debug)]
pub struct SchurEvaluator<'a, T: Real> {
    pub desc: &'a VerblunskyDescriptor<T>,
    pub side: Side,
    pub n: i64,
    pub policy: DepthPolicy,
}

impl<'a, T: Real> SchurEvaluator<'a, T> {
    pub fn new(desc: &'a VerblunskyDescriptor<T>, side: Side, n: i64) -> Self {
        Self {
            desc,
            side,
            n,
            policy: DepthPolicy::default(),
        }
    }

    pub fn with_policy(self, policy: DepthPolicy) -> Self {
        Self { policy, ..self }
    }

    pub fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        match self.side {
            Side::Plus => f_plus(self.desc, self.n, z, self.policy),
            Side::Minus => f_minus(self.desc, self.n, z, self.policy),
        }
    }

    /// Exact value for gauge-periodic descriptors, including `|z| = 1`.
    pub fn eval_structured(&self, z: Complex<T>) -> Result<Complex<T>> {
        match self.side {
            Side::Plus => schur_eval_structured(&PlusTail { desc: self.desc, n: self.n }, z),
            Side::Minus => schur_eval_structured(&MinusTail { desc: self.desc, n: self.n }, z),
        }
    }
}

/// `F = (1 + z f) / (1 - z f)`.
pub fn caratheodory<T: Real>(f: Complex<T>, z: Complex<T>) -> Result<Complex<T>> {
    let zf = z * f;
    let den = Complex::<T>::one() - zf;
    if den.norm() <= T::epsilon() {
        return Err(Error::Pole);
    }
    Ok((Complex::<T>::one() + zf) / den)
}

/// Inverse of [`caratheodory`]: `f = (F - 1) / (z (F + 1))`; `z = 0` is
/// not covered (there `f(0)` is the first Taylor coefficient of `F / 2`).
pub fn schur_from_caratheodory<T: Real>(big_f: Complex<T>, z: Complex<T>) -> Result<Complex<T>> {
    let den = z * (big_f + Complex::one());
    if den.norm() <= T::epsilon() {
        return Err(Error::Pole);
    }
    Ok((big_f - Complex::one()) / den)
}
