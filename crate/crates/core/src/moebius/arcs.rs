use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{wrap_angle, Real};

/// Finite union of half-open arcs `[lo, hi)` of `[0, 2 pi)`, stored sorted,
/// disjoint and non-adjacent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[T; 2]>", into = "Vec<[T; 2]>")]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct ArcSet<T: Real> {
    arcs: Vec<(T, T)>,
}

impl<T: Real> TryFrom<Vec<[T; 2]>> for ArcSet<T> {
    type Error = Error;
    fn try_from(v: Vec<[T; 2]>) -> Result<Self> {
        Self::from_arcs(v.into_iter().map(|[lo, hi]| (lo, hi)))
    }
}

impl<T: Real> From<ArcSet<T>> for Vec<[T; 2]> {
    fn from(s: ArcSet<T>) -> Self {
        s.arcs.into_iter().map(|(lo, hi)| [lo, hi]).collect()
    }
}

impl<T: Real> ArcSet<T> {
    pub fn empty() -> Self {
        Self { arcs: Vec::new() }
    }

    pub fn full() -> Self {
        Self {
            arcs: vec![(T::zero(), T::two_pi())],
        }
    }

    /// Arc from `lo` counterclockwise to `hi`; angles may be any reals with
    /// `lo <= hi <= lo + 2 pi`.
    pub fn arc(lo: T, hi: T) -> Result<Self> {
        Self::from_arcs([(lo, hi)])
    }

    /// Union of arcs, normalized.
    pub fn from_arcs<I: IntoIterator<Item = (T, T)>>(arcs: I) -> Result<Self> {
        let tau = T::two_pi();
        let mut pieces = Vec::new();
        for (lo, hi) in arcs {
            if !(lo.is_finite() && hi.is_finite()) || hi < lo || hi - lo > tau * (T::one() + T::epsilon()) {
                return Err(Error::InvalidArgument(format!(
                    "arc [{lo}, {hi}) must satisfy lo <= hi <= lo + 2 pi"
                )));
            }
            if hi - lo >= tau {
                pieces.push((T::zero(), tau));
                continue;
            }
            if hi == lo {
                continue;
            }
            let a = wrap_angle(lo);
            let b = a + (hi - lo);
            if b <= tau {
                pieces.push((a, b));
            } else {
                pieces.push((a, tau));
                pieces.push((T::zero(), b - tau));
            }
        }
        Ok(Self::normalize(pieces))
    }

    fn normalize(mut pieces: Vec<(T, T)>) -> Self {
        pieces.retain(|(a, b)| b > a);
        pieces.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        let mut arcs: Vec<(T, T)> = Vec::with_capacity(pieces.len());
        for (a, b) in pieces {
            match arcs.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => arcs.push((a, b)),
            }
        }
        Self { arcs }
    }

    pub fn arcs(&self) -> &[(T, T)] {
        &self.arcs
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Arc-length measure, in `[0, 2 pi]`.
    pub fn measure(&self) -> T {
        self.arcs.iter().map(|(a, b)| *b - *a).sum()
    }

    pub fn contains(&self, theta: T) -> bool {
        let t = wrap_angle(theta);
        self.arcs.iter().any(|(a, b)| *a <= t && t < *b)
    }

    pub fn complement(&self) -> Self {
        let mut out = Vec::new();
        let mut cursor = T::zero();
        for (a, b) in &self.arcs {
            if *a > cursor {
                out.push((cursor, *a));
            }
            cursor = *b;
        }
        if cursor < T::two_pi() {
            out.push((cursor, T::two_pi()));
        }
        Self { arcs: out }
    }

    /// `S* = { conj(z) : z in S }`, i.e. `theta -> -theta` (endpoints are
    /// null sets and kept half-open).
    pub fn star(&self) -> Self {
        let tau = T::two_pi();
        Self::normalize(self.arcs.iter().map(|(a, b)| (tau - *b, tau - *a)).collect())
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::normalize(self.arcs.iter().chain(other.arcs.iter()).copied().collect())
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        for (a, b) in &self.arcs {
            for (c, d) in &other.arcs {
                let lo = a.max(*c);
                let hi = b.min(*d);
                if hi > lo {
                    out.push((lo, hi));
                }
            }
        }
        Self::normalize(out)
    }

    /// Measure of the symmetric difference.
    pub fn symmetric_difference_measure(&self, other: &Self) -> T {
        self.measure() + other.measure() - T::lit(2.0) * self.intersect(other).measure()
    }
}

/// Harmonic measure of one arc seen from `z`, `|z| < 1`.
///
/// As `theta` runs over the arc, `e^{i theta} - z` turns by an angle `phi`
/// with `omega = (2 phi - dtheta) / (2 pi)`; `phi` is recovered from the
/// argument of the endpoint ratio, on the branch with `omega in [0, 1]`.
fn arc_measure<T: Real>(z: Complex<T>, lo: T, hi: T) -> T {
    let tau = T::two_pi();
    let dtheta = hi - lo;
    if dtheta >= tau {
        return T::one();
    }
    let p = Complex::from_polar(T::one(), hi) - z;
    let q = Complex::from_polar(T::one(), lo) - z;
    let raw = (p / q).arg();
    let two = T::lit(2.0);
    let center = dtheta / two + T::FRAC_PI_2();
    let turns = ((center - raw) / tau).round();
    let phi = raw + turns * tau;
    ((two * phi - dtheta) / tau).max(T::zero()).min(T::one())
}

/// Poisson integral of the indicator of `s` at `z`, `|z| < 1`, in closed
/// form.
pub fn harmonic_measure<T: Real>(z: Complex<T>, s: &ArcSet<T>) -> Result<T> {
    if !(z.norm() < T::one()) {
        return Err(Error::InvalidArgument(format!(
            "harmonic measure needs |z| < 1, got {}",
            z.norm()
        )));
    }
    if s.measure() >= T::two_pi() {
        return Ok(T::one());
    }
    let total: T = s.arcs.iter().map(|(a, b)| arc_measure(z, *a, *b)).sum();
    Ok(total.max(T::zero()).min(T::one()))
}

/// Harmonic measure on the closed disc: the indicator of `s` at points of
/// the unit circle (`|z| >= 1 - 1e-12` is treated as boundary).
pub fn harmonic_measure_closed<T: Real>(z: Complex<T>, s: &ArcSet<T>) -> T {
    if z.norm() >= T::one() - T::lit(1e-12) {
        if s.contains(z.arg()) {
            T::one()
        } else {
            T::zero()
        }
    } else {
        harmonic_measure(z, s).expect("interior point")
    }
}
