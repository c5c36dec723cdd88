//! Coefficient sequences: half- and whole-line Verblunsky and Jacobi
//! parameters given by structured generators.
//!
//! A [`Descriptor`] pairs a [`Generator`] with an [`Orientation`]. Values are
//! produced on demand, so every query is a pure function of the descriptor
//! (seeded random generators included). Half-line sequences are defined for
//! indices `n >= 0`; index `-1` holds the terminator (`alpha_{-1} = -1` for
//! Verblunsky coefficients, `a_{-1} = b_{-1} = 0` for Jacobi parameters).

mod limits;
mod random;

use num_complex::Complex;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::scalar::{wrap_angle, Real};

pub use limits::{
    right_limits, sparse_condition_check, KDecay, RightLimit, SparseCheckConfig, SparseReport,
    SparseVerdict,
};
pub use random::{Distribution, Scale};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    HalfLine,
    WholeLine,
}

/// A single coefficient: a Verblunsky coefficient (`Complex<T>`) or a Jacobi
/// pair ([`JacobiPair`]).
pub trait Coefficient:
    Copy + PartialEq + Debug + Serialize + DeserializeOwned + Send + Sync + 'static
{
    type Real: Real;
    const FAMILY: &'static str;

    fn zero() -> Self;
    /// Value stored at index `-1` of a half-line sequence.
    fn left_terminator() -> Self;
    /// `modulus * e^{i phase}`; `None` for families without a phase.
    fn from_polar(modulus: Self::Real, phase: Self::Real) -> Option<Self>;
    /// Multiply by `e^{i phase}` (identity for real families).
    fn rotate(self, phase: Self::Real) -> Self;
    /// Random perturbation `self + scale * x` in the family's perturbed slot.
    fn perturb(self, scale: Self::Real, x: Self::Real) -> Self;
    /// Admissibility for the given orientation; the error carries the
    /// offending modulus.
    fn check(&self, orientation: Orientation) -> std::result::Result<(), f64>;
    /// Strict interior check used by rejection sampling.
    fn strictly_admissible(&self) -> bool;
    fn distance(&self, other: &Self) -> Self::Real;
    fn size(&self) -> Self::Real;
    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
}

impl<T: Real> Coefficient for Complex<T> {
    type Real = T;
    const FAMILY: &'static str = "verblunsky";

    fn zero() -> Self {
        Complex::new(T::zero(), T::zero())
    }
    fn left_terminator() -> Self {
        Complex::new(-T::one(), T::zero())
    }
    fn from_polar(modulus: T, phase: T) -> Option<Self> {
        Some(Complex::from_polar(modulus, phase))
    }
    fn rotate(self, phase: T) -> Self {
        if phase == T::zero() {
            self
        } else {
            self * Complex::from_polar(T::one(), phase)
        }
    }
    fn perturb(self, scale: T, x: T) -> Self {
        self + Complex::new(scale * x, T::zero())
    }
    fn check(&self, orientation: Orientation) -> std::result::Result<(), f64> {
        let m = self.norm();
        let ok = match orientation {
            Orientation::HalfLine => m < T::one(),
            Orientation::WholeLine => m <= T::one(),
        };
        if ok && m.is_finite() {
            Ok(())
        } else {
            Err(m.to_f64().unwrap_or(f64::NAN))
        }
    }
    fn strictly_admissible(&self) -> bool {
        self.norm() < T::one()
    }
    fn distance(&self, other: &Self) -> T {
        (*self - *other).norm()
    }
    fn size(&self) -> T {
        self.norm()
    }
}

/// Jacobi parameters at one site: off-diagonal `a_n >= 0`, diagonal `b_n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real"))]
pub struct JacobiPair<T> {
    pub a: T,
    pub b: T,
}

impl<T: Real> JacobiPair<T> {
    pub fn new(a: T, b: T) -> Self {
        Self { a, b }
    }
}

impl<T: Real> Coefficient for JacobiPair<T> {
    type Real = T;
    const FAMILY: &'static str = "jacobi";

    fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }
    fn left_terminator() -> Self {
        Self::zero()
    }
    fn from_polar(_: T, _: T) -> Option<Self> {
        None
    }
    fn rotate(self, _: T) -> Self {
        self
    }
    // random perturbations act on the diagonal (Anderson-type)
    fn perturb(self, scale: T, x: T) -> Self {
        Self::new(self.a, self.b + scale * x)
    }
    fn check(&self, _: Orientation) -> std::result::Result<(), f64> {
        if self.a >= T::zero() && self.a.is_finite() && self.b.is_finite() {
            Ok(())
        } else {
            Err(self.a.to_f64().unwrap_or(f64::NAN))
        }
    }
    fn strictly_admissible(&self) -> bool {
        self.a >= T::zero() && self.a.is_finite() && self.b.is_finite()
    }
    fn distance(&self, other: &Self) -> T {
        (self.a - other.a).abs().max((self.b - other.b).abs())
    }
    fn size(&self) -> T {
        self.a.abs().max(self.b.abs())
    }
}

/// Continuation rule of an explicit list beyond its ends.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
#[serde(bound(serialize = "V: Serialize", deserialize = "V: DeserializeOwned"))]
pub enum Tail<V> {
    #[default]
    Zero,
    Constant {
        value: V,
    },
    /// Periodic continuation of the explicit list.
    Repeat,
}

/// Index sets with gaps tending to infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "set", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SparseSupport {
    /// `{ base^j : j >= 1 }`
    Powers { base: u64 },
    /// `{ j^2 : j >= 1 }`
    Squares,
}

impl SparseSupport {
    pub fn contains(&self, m: i64) -> bool {
        if m < 1 {
            return false;
        }
        match *self {
            SparseSupport::Powers { base } => {
                let base = base as i64;
                let mut m = m;
                if m < base {
                    return false;
                }
                while m % base == 0 {
                    m /= base;
                }
                m == 1
            }
            SparseSupport::Squares => {
                let r = (m as f64).sqrt().round() as i64;
                (r - 1..=r + 1).any(|s| s > 0 && s * s == m)
            }
        }
    }

    /// Smallest support point.
    pub fn first(&self) -> i64 {
        match *self {
            SparseSupport::Powers { base } => base as i64,
            SparseSupport::Squares => 1,
        }
    }

    /// The `j`-th support point (`j >= 1`).
    pub fn point(&self, j: u32) -> i64 {
        match *self {
            SparseSupport::Powers { base } => (base as i64).pow(j),
            SparseSupport::Squares => (j as i64) * (j as i64),
        }
    }
}

/// Structured coefficient generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
#[serde(bound(serialize = "V: Serialize", deserialize = "V: DeserializeOwned"))]
pub enum Generator<V: Coefficient> {
    /// `values[i]` sits at index `start + i`; `tail` continues to the right,
    /// `left_tail` to the left (whole-line only).
    #[serde(rename_all = "kebab-case")]
    Explicit {
        #[serde(default)]
        start: i64,
        values: Vec<V>,
        #[serde(default)]
        tail: Tail<V>,
        #[serde(default)]
        left_tail: Tail<V>,
    },
    Constant {
        value: V,
    },
    /// `alpha_n = values[n mod p]`.
    Periodic {
        values: Vec<V>,
    },
    /// Sorted `(index, value)` pairs; zero elsewhere.
    FiniteSupport {
        support: Vec<(i64, V)>,
    },
    /// `value` at every `n` with `n + offset` in `support`, zero elsewhere.
    Sparse {
        support: SparseSupport,
        value: V,
        #[serde(default)]
        offset: i64,
    },
    /// Lopez-type pattern: nonzero only at `n0 + j k`, modulus `a` for even
    /// `j` and `b` for odd `j`, phase `t0 - j t`. Consecutive nonzero
    /// coefficients satisfy `arg(conj(alpha_{n0+(j+1)k}) alpha_{n0+jk}) = t`.
    Lopez {
        n0: i64,
        k: u32,
        a: V::Real,
        b: V::Real,
        t: V::Real,
        t0: V::Real,
    },
    /// `base_n + s_n X_n` with i.i.d. `X_n`, redrawn until admissible.
    Random {
        base: Box<Generator<V>>,
        scale: Scale<V::Real>,
        distribution: Distribution<V::Real>,
        seed: u64,
        #[serde(default)]
        offset: i64,
    },
}

/// Description of a one-sided tail of a sequence.
///
/// For `m >= start` the value at offset `m` equals
/// `pattern[(m - start) mod P]` rotated by `phase + step * (m - start)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ray<V: Coefficient> {
    pub start: usize,
    pub phase: V::Real,
    pub step: V::Real,
    pub pattern: Vec<V>,
}

impl<V: Coefficient> Ray<V> {
    fn plain(start: i64, pattern: Vec<V>) -> Self {
        Ray {
            start: start.max(0) as usize,
            phase: <V::Real as num_traits::Zero>::zero(),
            step: <V::Real as num_traits::Zero>::zero(),
            pattern,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.pattern.iter().all(|v| v.is_zero())
    }

    /// Value at offset `m >= start`.
    pub fn at(&self, m: usize) -> V {
        let i = m - self.start;
        let phase = self.phase + self.step * V::Real::from_usize_lossy(i);
        self.pattern[i % self.pattern.len()].rotate(phase)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Indices `origin, origin + 1, ...`
    Forward,
    /// Indices `origin, origin - 1, ...`
    Backward,
}

impl<V: Coefficient> Generator<V> {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Generator::Explicit { .. } => "explicit",
            Generator::Constant { .. } => "constant",
            Generator::Periodic { .. } => "periodic",
            Generator::FiniteSupport { .. } => "finite-support",
            Generator::Sparse { .. } => "sparse",
            Generator::Lopez { .. } => "lopez",
            Generator::Random { .. } => "random",
        }
    }

    /// Generated value at any integer index (orientation is handled by
    /// [`Descriptor::value`]).
    pub fn value(&self, n: i64) -> Result<V> {
        Ok(match self {
            Generator::Explicit {
                start,
                values,
                tail,
                left_tail,
            } => {
                let len = values.len() as i64;
                let rel = n - start;
                if (0..len).contains(&rel) {
                    values[rel as usize]
                } else {
                    let rule = if rel >= len { tail } else { left_tail };
                    match rule {
                        Tail::Zero => V::zero(),
                        Tail::Constant { value } => *value,
                        Tail::Repeat => values[rel.rem_euclid(len) as usize],
                    }
                }
            }
            Generator::Constant { value } => *value,
            Generator::Periodic { values } => values[n.rem_euclid(values.len() as i64) as usize],
            Generator::FiniteSupport { support } => {
                match support.binary_search_by_key(&n, |(i, _)| *i) {
                    Ok(pos) => support[pos].1,
                    Err(_) => V::zero(),
                }
            }
            Generator::Sparse {
                support,
                value,
                offset,
            } => {
                if support.contains(n + offset) {
                    *value
                } else {
                    V::zero()
                }
            }
            Generator::Lopez {
                n0,
                k,
                a,
                b,
                t,
                t0,
            } => {
                let k = *k as i64;
                let d = n - n0;
                if d.rem_euclid(k) != 0 {
                    V::zero()
                } else {
                    let j = d.div_euclid(k);
                    let modulus = if j.rem_euclid(2) == 0 { *a } else { *b };
                    let phase = wrap_angle(*t0 - V::Real::from_i64_lossy(j) * *t);
                    V::from_polar(modulus, phase).ok_or(Error::Unsupported {
                        kind: "lopez",
                        operation: V::FAMILY,
                    })?
                }
            }
            Generator::Random {
                base,
                scale,
                distribution,
                seed,
                offset,
            } => random::perturbed_value(base, scale, distribution, *seed, *offset, n)?,
        })
    }

    fn shifted(&self, m: i64) -> Self {
        match self {
            Generator::Explicit {
                start,
                values,
                tail,
                left_tail,
            } => Generator::Explicit {
                start: start - m,
                values: values.clone(),
                tail: tail.clone(),
                left_tail: left_tail.clone(),
            },
            Generator::Constant { value } => Generator::Constant { value: *value },
            Generator::Periodic { values } => {
                let p = values.len() as i64;
                let values = (0..p)
                    .map(|i| values[(i + m).rem_euclid(p) as usize])
                    .collect();
                Generator::Periodic { values }
            }
            Generator::FiniteSupport { support } => Generator::FiniteSupport {
                support: support.iter().map(|&(i, v)| (i - m, v)).collect(),
            },
            Generator::Sparse {
                support,
                value,
                offset,
            } => Generator::Sparse {
                support: *support,
                value: *value,
                offset: offset + m,
            },
            Generator::Lopez {
                n0,
                k,
                a,
                b,
                t,
                t0,
            } => Generator::Lopez {
                n0: n0 - m,
                k: *k,
                a: *a,
                b: *b,
                t: *t,
                t0: *t0,
            },
            Generator::Random {
                base,
                scale,
                distribution,
                seed,
                offset,
            } => Generator::Random {
                base: Box::new(base.shifted(m)),
                scale: scale.clone(),
                distribution: distribution.clone(),
                seed: *seed,
                offset: offset + m,
            },
        }
    }

    /// Structure of the tail starting at `origin` and running in `dir`, if
    /// the generator has one (gauge-periodic from some offset on).
    fn ray(&self, origin: i64, dir: Direction) -> Option<Ray<V>> {
        let sign = match dir {
            Direction::Forward => 1,
            Direction::Backward => -1,
        };
        match self {
            Generator::Constant { value } => Some(Ray::plain(0, vec![*value])),
            Generator::Periodic { values } => {
                let p = values.len() as i64;
                let pattern = (0..p)
                    .map(|i| values[(origin + sign * i).rem_euclid(p) as usize])
                    .collect();
                Some(Ray::plain(0, pattern))
            }
            Generator::Explicit {
                start,
                values,
                tail,
                left_tail,
            } => {
                let len = values.len() as i64;
                let (first, rule) = match dir {
                    Direction::Forward => (start + len - origin, tail),
                    Direction::Backward => (origin - start + 1, left_tail),
                };
                let first = first.max(0);
                let pattern = match rule {
                    Tail::Zero => vec![V::zero()],
                    Tail::Constant { value } => vec![*value],
                    Tail::Repeat => (0..len)
                        .map(|i| {
                            let idx = origin + sign * (first + i);
                            values[(idx - start).rem_euclid(len) as usize]
                        })
                        .collect(),
                };
                Some(Ray::plain(first, pattern))
            }
            Generator::FiniteSupport { support } => {
                let first = match (dir, support.first(), support.last()) {
                    (_, None, _) | (_, _, None) => 0,
                    (Direction::Forward, _, Some(&(hi, _))) => hi - origin + 1,
                    (Direction::Backward, Some(&(lo, _)), _) => origin - lo + 1,
                };
                Some(Ray::plain(first, vec![V::zero()]))
            }
            Generator::Sparse {
                support,
                value,
                offset,
            } => {
                if value.is_zero() {
                    return Some(Ray::plain(0, vec![V::zero()]));
                }
                match dir {
                    Direction::Forward => None,
                    Direction::Backward => {
                        let lowest = support.first() - offset;
                        Some(Ray::plain(origin - lowest + 1, vec![V::zero()]))
                    }
                }
            }
            Generator::Lopez {
                n0,
                k,
                a,
                b,
                t,
                t0,
            } => {
                let kk = *k as i64;
                let zero = <V::Real as num_traits::Zero>::zero();
                let pattern = (0..2 * kk)
                    .map(|i| {
                        let d = origin + sign * i - n0;
                        if d.rem_euclid(kk) != 0 {
                            Some(V::zero())
                        } else if d.div_euclid(kk).rem_euclid(2) == 0 {
                            V::from_polar(*a, zero)
                        } else {
                            V::from_polar(*b, zero)
                        }
                    })
                    .collect::<Option<Vec<V>>>()?;
                // phase of index n is t0 + tau (n - n0) with tau = -t / k
                let tau = -*t / V::Real::from_usize_lossy(*k as usize);
                let phase = *t0 + tau * V::Real::from_i64_lossy(origin - n0);
                let step = match dir {
                    Direction::Forward => tau,
                    Direction::Backward => -tau,
                };
                Some(Ray {
                    start: 0,
                    phase,
                    step,
                    pattern,
                })
            }
            Generator::Random { base, scale, .. } => {
                if scale.is_identically_zero() {
                    base.ray(origin, dir)
                } else {
                    None
                }
            }
        }
    }

    fn validate(&self, orientation: Orientation) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidDescriptor(msg));
        let check_value = |index: i64, v: &V| {
            v.check(orientation).map_err(|modulus| Error::ModulusOutOfRange { index, modulus })
        };
        match self {
            Generator::Explicit {
                start,
                values,
                tail,
                left_tail,
            } => {
                if values.is_empty() && (matches!(tail, Tail::Repeat) || matches!(left_tail, Tail::Repeat)) {
                    return bad("repeat tail needs a nonempty list".into());
                }
                for (i, v) in values.iter().enumerate() {
                    let idx = start + i as i64;
                    if orientation == Orientation::HalfLine && idx < 0 {
                        continue;
                    }
                    check_value(idx, v)?;
                }
                for rule in [tail, left_tail] {
                    if let Tail::Constant { value } = rule {
                        check_value(*start, value)?;
                    }
                }
            }
            Generator::Constant { value } => check_value(0, value)?,
            Generator::Periodic { values } => {
                if values.is_empty() {
                    return bad("periodic generator needs at least one value".into());
                }
                for (i, v) in values.iter().enumerate() {
                    check_value(i as i64, v)?;
                }
            }
            Generator::FiniteSupport { support } => {
                if support.windows(2).any(|w| w[0].0 >= w[1].0) {
                    return bad("finite support indices must be strictly increasing".into());
                }
                for (i, v) in support {
                    if orientation == Orientation::HalfLine && *i < 0 {
                        continue;
                    }
                    check_value(*i, v)?;
                }
            }
            Generator::Sparse { support, value, .. } => {
                if let SparseSupport::Powers { base } = support {
                    if *base < 2 {
                        return bad("sparse power base must be at least 2".into());
                    }
                }
                check_value(0, value)?;
            }
            Generator::Lopez { k, a, b, .. } => {
                if *k == 0 {
                    return bad("lopez period k must be positive".into());
                }
                let zero = <V::Real as num_traits::Zero>::zero();
                let one = <V::Real as num_traits::One>::one();
                for (name, m) in [("a", *a), ("b", *b)] {
                    if !(m > zero && m <= one) {
                        return bad(format!("lopez modulus {name} must lie in (0, 1]"));
                    }
                    if orientation == Orientation::HalfLine && m >= one {
                        return bad(format!(
                            "lopez modulus {name} must be below 1 on the half-line"
                        ));
                    }
                }
                if V::from_polar(*a, zero).is_none() {
                    return Err(Error::Unsupported {
                        kind: "lopez",
                        operation: V::FAMILY,
                    });
                }
            }
            Generator::Random {
                base,
                scale,
                distribution,
                ..
            } => {
                if matches!(**base, Generator::Random { .. }) {
                    return bad("nested random generators are not supported".into());
                }
                base.validate(orientation)?;
                scale.validate()?;
                distribution.validate()?;
            }
        }
        Ok(())
    }
}

/// A coefficient sequence: generator plus orientation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "V: Serialize", deserialize = "V: DeserializeOwned"))]
#[serde(try_from = "RawDescriptor<V>")]
pub struct Descriptor<V: Coefficient> {
    pub orientation: Orientation,
    #[serde(flatten)]
    pub generator: Generator<V>,
}

#[derive(Deserialize)]
#[serde(bound(deserialize = "V: DeserializeOwned"))]
struct RawDescriptor<V: Coefficient> {
    orientation: Orientation,
    #[serde(flatten)]
    generator: Generator<V>,
}

impl<V: Coefficient> TryFrom<RawDescriptor<V>> for Descriptor<V> {
    type Error = Error;
    fn try_from(raw: RawDescriptor<V>) -> Result<Self> {
        Descriptor::new(raw.orientation, raw.generator)
    }
}

pub type VerblunskyDescriptor<T> = Descriptor<Complex<T>>;
pub type JacobiDescriptor<T> = Descriptor<JacobiPair<T>>;

impl<V: Coefficient> Descriptor<V> {
    /// Validates the generator parameters against the orientation.
    pub fn new(orientation: Orientation, generator: Generator<V>) -> Result<Self> {
        let generator = match generator {
            Generator::FiniteSupport { mut support } => {
                support.sort_by_key(|(i, _)| *i);
                Generator::FiniteSupport { support }
            }
            g => g,
        };
        generator.validate(orientation)?;
        Ok(Self {
            orientation,
            generator,
        })
    }

    pub fn half_line(generator: Generator<V>) -> Result<Self> {
        Self::new(Orientation::HalfLine, generator)
    }

    pub fn whole_line(generator: Generator<V>) -> Result<Self> {
        Self::new(Orientation::WholeLine, generator)
    }

    pub fn constant(orientation: Orientation, value: V) -> Result<Self> {
        Self::new(orientation, Generator::Constant { value })
    }

    pub fn zero(orientation: Orientation) -> Self {
        Self::constant(orientation, V::zero()).expect("zero is admissible")
    }

    pub fn periodic(orientation: Orientation, values: Vec<V>) -> Result<Self> {
        Self::new(orientation, Generator::Periodic { values })
    }

    pub fn finite_support(orientation: Orientation, support: Vec<(i64, V)>) -> Result<Self> {
        Self::new(orientation, Generator::FiniteSupport { support })
    }

    /// Explicit list starting at index `start`, zero beyond both ends.
    pub fn explicit(orientation: Orientation, start: i64, values: Vec<V>) -> Result<Self> {
        Self::new(
            orientation,
            Generator::Explicit {
                start,
                values,
                tail: Tail::Zero,
                left_tail: Tail::Zero,
            },
        )
    }

    pub fn is_half_line(&self) -> bool {
        self.orientation == Orientation::HalfLine
    }

    pub fn kind_name(&self) -> &'static str {
        self.generator.kind_name()
    }

    /// Coefficient at index `n`.
    pub fn value(&self, n: i64) -> Result<V> {
        if self.is_half_line() {
            if n < -1 {
                return Err(Error::IndexOutOfRange { index: n });
            }
            if n == -1 {
                return Ok(V::left_terminator());
            }
        }
        self.generator.value(n)
    }

    /// Values at `lo, lo + 1, ..., lo + len - 1`.
    pub fn values(&self, lo: i64, len: usize) -> Result<Vec<V>> {
        (lo..lo + len as i64).map(|n| self.value(n)).collect()
    }

    /// Values at `center - halfwidth ..= center + halfwidth`.
    pub fn window(&self, center: i64, halfwidth: usize) -> Result<CoefficientWindow<V>> {
        let lo = center - halfwidth as i64;
        let values = self.values(lo, 2 * halfwidth + 1)?;
        Ok(CoefficientWindow {
            center,
            halfwidth,
            values,
        })
    }

    /// The sequence `n -> value(n + m)`.
    ///
    /// Half-line sequences only shift to the right (`m >= 0`); the result is
    /// again a half-line sequence, i.e. the tail `alpha_m, alpha_{m+1}, ...`
    /// with its own terminator at index `-1`.
    pub fn shift(&self, m: i64) -> Result<Self> {
        if self.is_half_line() && m < 0 {
            return Err(Error::InvalidArgument(format!(
                "half-line sequences cannot be shifted by {m} < 0"
            )));
        }
        Ok(Self {
            orientation: self.orientation,
            generator: self.generator.shifted(m),
        })
    }

    /// The same generator read on the whole line.
    pub fn to_whole_line(&self) -> Result<Self> {
        Self::whole_line(self.generator.clone())
    }

    /// Tail structure from `origin` in direction `dir`, honouring the
    /// half-line terminator.
    pub fn ray(&self, origin: i64, dir: Direction) -> Option<Ray<V>> {
        if self.is_half_line() && dir == Direction::Backward {
            // the terminator at -1 sits at offset origin + 1; whatever follows is never read
            return Some(Ray::plain(origin + 2, vec![V::zero()]));
        }
        self.generator.ray(origin, dir)
    }
}

/// Finite window of generated coefficients centred at `center`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "V: Serialize", deserialize = "V: DeserializeOwned"))]
pub struct CoefficientWindow<V> {
    pub center: i64,
    pub halfwidth: usize,
    pub values: Vec<V>,
}

impl<V: Copy> CoefficientWindow<V> {
    pub fn lo(&self) -> i64 {
        self.center - self.halfwidth as i64
    }

    pub fn hi(&self) -> i64 {
        self.center + self.halfwidth as i64
    }

    pub fn get(&self, n: i64) -> Option<V> {
        let i = n - self.lo();
        if i < 0 {
            return None;
        }
        self.values.get(i as usize).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, V)> + '_ {
        let lo = self.lo();
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (lo + i as i64, *v))
    }
}
