//! Disc automorphisms in projective matrix form, the pseudohyperbolic
//! distance, arc sets and harmonic measure.

mod arcs;

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::ops::Mul;

use crate::error::{Error, Result};
use crate::scalar::Real;

pub use arcs::{harmonic_measure, harmonic_measure_closed, ArcSet};

/// Factor products are renormalized after this many multiplications.
pub const RENORMALIZE_EVERY: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Plus,
    Minus,
}

/// `w -> (a w + b) / (c w + d)`; scalar multiples act identically.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real"))]
pub struct MoebiusMap<T> {
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub c: Complex<T>,
    pub d: Complex<T>,
}

impl<T: Real> MoebiusMap<T> {
    pub fn new(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        let (o, z) = (Complex::one(), Complex::zero());
        Self::new(o, z, z, o)
    }

    /// `T_+(z, alpha) = (1, -alpha; -z conj(alpha), z)`: one forward Schur
    /// step, `f_+(z, n) -> f_+(z, n + 1)`.
    pub fn transfer_plus(z: Complex<T>, alpha: Complex<T>) -> Self {
        Self::new(Complex::one(), -alpha, -z * alpha.conj(), z)
    }

    /// `T_-(z, alpha) = (z, -conj(alpha); -z alpha, 1)`:
    /// `f_-(z, n) -> f_-(z, n + 1)`.
    pub fn transfer_minus(z: Complex<T>, alpha: Complex<T>) -> Self {
        Self::new(z, -alpha.conj(), -z * alpha, Complex::one())
    }

    pub fn transfer(side: Side, z: Complex<T>, alpha: Complex<T>) -> Self {
        match side {
            Side::Plus => Self::transfer_plus(z, alpha),
            Side::Minus => Self::transfer_minus(z, alpha),
        }
    }

    /// `S(alpha) = (1, -alpha; -conj(alpha), 1)`.
    pub fn s_map(alpha: Complex<T>) -> Self {
        Self::new(Complex::one(), -alpha, -alpha.conj(), Complex::one())
    }

    /// `M(z) = diag(z, 1)`.
    pub fn m_map(z: Complex<T>) -> Self {
        Self::new(z, Complex::zero(), Complex::zero(), Complex::one())
    }

    pub fn diag(p: Complex<T>, q: Complex<T>) -> Self {
        Self::new(p, Complex::zero(), Complex::zero(), q)
    }

    pub fn det(&self) -> Complex<T> {
        self.a * self.d - self.b * self.c
    }

    /// Entrywise conjugate.
    pub fn conj(&self) -> Self {
        Self::new(self.a.conj(), self.b.conj(), self.c.conj(), self.d.conj())
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn max_entry(&self) -> T {
        [self.a, self.b, self.c, self.d]
            .iter()
            .map(|e| e.norm())
            .fold(T::zero(), T::max)
    }

    /// Divides by the largest entry modulus; `None` for the zero matrix.
    pub fn normalized(&self) -> Option<Self> {
        let m = self.max_entry();
        if m == T::zero() || !m.is_finite() {
            None
        } else {
            Some(self.scale(Complex::new(m.recip(), T::zero())))
        }
    }

    /// Image of `w`; infinite or NaN when `w` is sent to the pole.
    pub fn apply(&self, w: Complex<T>) -> Complex<T> {
        (self.a * w + self.b) / (self.c * w + self.d)
    }

    /// Image of `w`, failing at the pole.
    pub fn try_apply(&self, w: Complex<T>) -> Result<Complex<T>> {
        let den = self.c * w + self.d;
        if den.norm() <= T::epsilon() * (self.c * w).norm().max(self.d.norm()) {
            return Err(Error::Pole);
        }
        Ok((self.a * w + self.b) / den)
    }

    /// Equality up to a nonzero scalar, relative to the entry size.
    pub fn projectively_eq(&self, other: &Self, tol: T) -> bool {
        let (Some(p), Some(q)) = (self.normalized(), other.normalized()) else {
            return false;
        };
        let pe = [p.a, p.b, p.c, p.d];
        let qe = [q.a, q.b, q.c, q.d];
        // align phases on the largest entry of p
        let (i, _) = pe
            .iter()
            .enumerate()
            .fold((0, T::zero()), |(bi, bm), (i, e)| {
                if e.norm() > bm {
                    (i, e.norm())
                } else {
                    (bi, bm)
                }
            });
        if qe[i].norm() == T::zero() {
            return false;
        }
        let s = pe[i] / qe[i];
        pe.iter().zip(qe.iter()).all(|(x, y)| (*x - *y * s).norm() <= tol)
    }
}

impl<T: Real> Mul for MoebiusMap<T> {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        Self::new(
            self.a * r.a + self.b * r.c,
            self.a * r.b + self.b * r.d,
            self.c * r.a + self.d * r.c,
            self.c * r.b + self.d * r.d,
        )
    }
}

/// Product `maps[0] * maps[1] * ...`, renormalized every
/// [`RENORMALIZE_EVERY`] factors.
pub fn compose<T: Real>(maps: &[MoebiusMap<T>]) -> Result<MoebiusMap<T>> {
    let (first, rest) = maps
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("compose needs at least one map".into()))?;
    let mut acc = *first;
    for (i, m) in rest.iter().enumerate() {
        acc = acc * *m;
        if (i + 1) % RENORMALIZE_EVERY == 0 {
            acc = acc.normalized().ok_or(Error::DegenerateProduct)?;
        }
    }
    acc.normalized().ok_or(Error::DegenerateProduct)
}

/// `|w1 - w2| / (sqrt(1 - |w1|^2) sqrt(1 - |w2|^2))`.
pub fn pseudo_dist<T: Real>(w1: Complex<T>, w2: Complex<T>) -> Result<T> {
    for w in [w1, w2] {
        if !(w.norm() < T::one()) {
            return Err(Error::InvalidArgument(format!(
                "pseudohyperbolic distance needs |w| < 1, got {}",
                w.norm()
            )));
        }
    }
    let s1 = (T::one() - w1.norm_sqr()).sqrt();
    let s2 = (T::one() - w2.norm_sqr()).sqrt();
    Ok((w1 - w2).norm() / (s1 * s2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::unit;
    use proptest::prelude::*;

    type C = Complex<f64>;

    fn disc(r: f64, t: f64) -> C {
        C::from_polar(r, t)
    }

    #[test]
    fn transfer_examples() {
        let z = C::new(0.3, 0.4);
        let t = MoebiusMap::transfer(Side::Plus, z, C::zero());
        assert_eq!(t, MoebiusMap::diag(C::one(), z));
        let alpha = C::new(0.2, -0.5);
        let m = MoebiusMap::transfer(Side::Minus, C::one(), alpha);
        assert_eq!(m.apply(C::zero()), -alpha.conj());
    }

    #[test]
    fn boundary_transfer_is_automorphism() {
        let alpha = C::new(0.3, 0.6);
        for side in [Side::Plus, Side::Minus] {
            let t = MoebiusMap::transfer(side, unit(1.1), alpha);
            assert!(t.apply(C::zero()).norm() < 1.0);
            for j in 0..8 {
                let w = t.apply(unit(j as f64 * 0.785));
                assert!((w.norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn transfer_relation_on_circle() {
        for j in 0..6 {
            let z = unit(0.4 + j as f64);
            let alpha = C::new(0.4, -0.3 + 0.1 * j as f64);
            let lhs = MoebiusMap::transfer_plus(z, alpha);
            let rhs = MoebiusMap::diag(C::one(), z)
                * MoebiusMap::transfer_minus(z, alpha).conj()
                * MoebiusMap::diag(C::one(), z.conj());
            assert!(lhs.projectively_eq(&rhs, 1e-12));
        }
    }

    #[test]
    fn transfer_factorizations() {
        // T_+ = M(z)^-1 S(alpha) up to scale, T_- = S(conj alpha) M(z)
        let z = C::new(0.2, 0.7);
        let alpha = C::new(-0.1, 0.45);
        let m_inv = MoebiusMap::diag(C::one(), z);
        assert!(MoebiusMap::transfer_plus(z, alpha).projectively_eq(&(m_inv * MoebiusMap::s_map(alpha)), 1e-14));
        assert!(MoebiusMap::transfer_minus(z, alpha)
            .projectively_eq(&(MoebiusMap::s_map(alpha.conj()) * MoebiusMap::m_map(z)), 1e-14));
    }

    #[test]
    fn pseudo_dist_examples() {
        assert!((pseudo_dist(C::zero(), C::new(0.6, 0.0)).unwrap() - 0.75).abs() < 1e-15);
        let w = C::new(0.1, 0.2);
        assert_eq!(pseudo_dist(w, w).unwrap(), 0.0);
        assert!(pseudo_dist(C::one(), w).is_err());
        let z = C::new(0.5, 0.2);
        let (w1, w2) = (C::new(0.3, 0.0), C::new(0.0, -0.4));
        let m = MoebiusMap::m_map(z);
        let lhs = pseudo_dist(m.apply(w1), m.apply(w2)).unwrap();
        assert!(lhs <= z.norm() * pseudo_dist(w1, w2).unwrap());
    }

    #[test]
    fn compose_examples() {
        let id = MoebiusMap::<f64>::identity();
        assert_eq!(compose(&[id]).unwrap(), id);
        assert!(compose::<f64>(&[]).is_err());
        let z = C::from_polar(0.9, 0.3);
        let maps: Vec<_> = (0..10)
            .map(|j| MoebiusMap::transfer_plus(z, C::from_polar(0.3, j as f64)))
            .collect();
        let raw = maps.iter().fold(MoebiusMap::identity(), |acc, m| acc * *m);
        assert!(compose(&maps).unwrap().projectively_eq(&raw, 1e-12));
        let zero = MoebiusMap::new(C::zero(), C::zero(), C::zero(), C::zero());
        assert_eq!(compose(&[zero]), Err(Error::DegenerateProduct));
    }

    #[test]
    fn long_products_stay_finite() {
        let z = unit(0.7);
        let maps: Vec<_> = (0..5000)
            .map(|_| MoebiusMap::transfer_plus(z, C::new(0.99, 0.0)))
            .collect();
        let p = compose(&maps).unwrap();
        assert!(p.max_entry() == 1.0);
    }

    proptest! {
        #[test]
        fn minus_transfer_contracts(
            zr in 0.0f64..0.999, zt in 0.0f64..6.3,
            ar in 0.0f64..0.999, at in 0.0f64..6.3,
            r1 in 0.0f64..0.95, t1 in 0.0f64..6.3,
            r2 in 0.0f64..0.95, t2 in 0.0f64..6.3,
        ) {
            let (z, alpha) = (disc(zr, zt), disc(ar, at));
            let (w1, w2) = (disc(r1, t1), disc(r2, t2));
            let t = MoebiusMap::transfer_minus(z, alpha);
            let lhs = pseudo_dist(t.apply(w1), t.apply(w2)).unwrap();
            let rhs = zr * pseudo_dist(w1, w2).unwrap();
            prop_assert!(lhs <= rhs * (1.0 + 1e-9) + 1e-12);
        }

        #[test]
        fn boundary_transfer_is_isometry(
            zt in 0.0f64..6.3, ar in 0.0f64..0.95, at in 0.0f64..6.3,
            r1 in 0.0f64..0.9, t1 in 0.0f64..6.3, r2 in 0.0f64..0.9, t2 in 0.0f64..6.3,
            plus in any::<bool>(),
        ) {
            let side = if plus { Side::Plus } else { Side::Minus };
            let t = MoebiusMap::transfer(side, unit(zt), disc(ar, at));
            let (w1, w2) = (disc(r1, t1), disc(r2, t2));
            let before = pseudo_dist(w1, w2).unwrap();
            let after = pseudo_dist(t.apply(w1), t.apply(w2)).unwrap();
            prop_assert!((before - after).abs() <= 1e-10 * (1.0 + before));
        }
    }
}
