//! Szego recursion for the monic orthogonal polynomials, ratio asymptotics
//! of `Phi*_{n+1} / Phi*_n`, and recovery of a ratio-asymptotic right limit
//! from two points.

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::coeffs::{Descriptor, Generator, Orientation, VerblunskyDescriptor};
use crate::error::{Error, Result};
use crate::scalar::{wrap_angle, Real};
use crate::schur::{self, DepthPolicy, MinusTail};

/// Default convergence threshold over the last quarter of a ratio trace.
pub const DEFAULT_RATIO_TOL: f64 = 1e-6;

/// `Phi_n(z)`, `Phi*_n(z)` and `prod_{j<n} rho_j`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real"))]
pub struct SzegoPair<T> {
    pub n: usize,
    pub phi: Complex<T>,
    pub phi_star: Complex<T>,
    pub rho_product: T,
}

impl<T: Real> SzegoPair<T> {
    /// Orthonormal `phi_n = Phi_n / prod rho_j`.
    pub fn orthonormal(&self) -> Complex<T> {
        self.phi / self.rho_product
    }

    pub fn orthonormal_star(&self) -> Complex<T> {
        self.phi_star / self.rho_product
    }
}

fn require_half_line<T: Real>(desc: &VerblunskyDescriptor<T>) -> Result<()> {
    if desc.is_half_line() {
        Ok(())
    } else {
        Err(Error::InvalidArgument("orthogonal polynomials need a half-line descriptor".into()))
    }
}

/// `(Phi_n, Phi*_n)` by `Phi_{k+1} = z Phi_k - conj(a_k) Phi*_k`,
/// `Phi*_{k+1} = Phi*_k - a_k z Phi_k`, from `Phi_0 = Phi*_0 = 1`.
pub fn szego_eval<T: Real>(desc: &VerblunskyDescriptor<T>, n: usize, z: Complex<T>) -> Result<SzegoPair<T>> {
    Ok(*szego_trace(desc, n, z)?.last().expect("trace holds degree 0"))
}

/// All pairs of degree `0..=n`.
pub fn szego_trace<T: Real>(desc: &VerblunskyDescriptor<T>, n: usize, z: Complex<T>) -> Result<Vec<SzegoPair<T>>> {
    require_half_line(desc)?;
    let mut out = Vec::with_capacity(n + 1);
    let mut p = SzegoPair {
        n: 0,
        phi: Complex::one(),
        phi_star: Complex::one(),
        rho_product: T::one(),
    };
    out.push(p);
    for k in 0..n {
        let a = desc.value(k as i64)?;
        p = SzegoPair {
            n: k + 1,
            phi: z * p.phi - a.conj() * p.phi_star,
            phi_star: p.phi_star - a * z * p.phi,
            rho_product: p.rho_product * crate::cmv::rho(a),
        };
        out.push(p);
    }
    Ok(out)
}

/// `z alpha_n f(z; -conj(alpha_{n-1}), ..., -conj(alpha_0), 1)`, which
/// equals `1 - Phi*_{n+1}(z) / Phi*_n(z)`.
pub fn ratio_defect_via_schur<T: Real>(
    desc: &VerblunskyDescriptor<T>,
    n: usize,
    z: Complex<T>,
) -> Result<Complex<T>> {
    require_half_line(desc)?;
    let f = schur::schur_eval(&MinusTail { desc, n: n as i64 }, z, DepthPolicy::default())?;
    Ok(z * desc.value(n as i64)? * f)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real"))]
pub struct RatioTrace<T> {
    /// `Phi*_{n+1}(z) / Phi*_n(z)` for `n = 0..N`.
    pub ratios: Vec<Complex<T>>,
    /// Last ratio.
    pub limit: Complex<T>,
    /// Largest distance of a last-quarter ratio from `limit`.
    pub deviation: T,
    pub converged: bool,
    pub tol: T,
}

impl<T: Real> RatioTrace<T> {
    /// `g(z) = (1 - G(z)) / z` from the limit estimate.
    pub fn g(&self, z: Complex<T>) -> Complex<T> {
        (Complex::<T>::one() - self.limit) / z
    }
}

/// Ratios `Phi*_{n+1} / Phi*_n`, `n < n_max`, with a convergence verdict.
///
/// The ratios are propagated as `b_n = Phi_n / Phi*_n`:
/// `Phi*_{n+1} / Phi*_n = 1 - a_n z b_n` and
/// `b_{n+1} = (z b_n - conj(a_n)) / (1 - a_n z b_n)`, which never
/// overflows.
pub fn ratio_trace<T: Real>(
    desc: &VerblunskyDescriptor<T>,
    z: Complex<T>,
    n_max: usize,
    tol: T,
) -> Result<RatioTrace<T>> {
    require_half_line(desc)?;
    if !(z.norm() < T::one()) {
        return Err(Error::InvalidArgument("ratio asymptotics are taken at |z| < 1".into()));
    }
    if n_max < 4 {
        return Err(Error::InvalidArgument("ratio trace needs at least 4 terms".into()));
    }
    let mut b = Complex::<T>::one();
    let mut ratios = Vec::with_capacity(n_max);
    for n in 0..n_max {
        let a = desc.value(n as i64)?;
        let r = Complex::<T>::one() - a * z * b;
        ratios.push(r);
        b = (z * b - a.conj()) / r;
    }
    let limit = *ratios.last().unwrap();
    let start = n_max - n_max / 4;
    let deviation = ratios[start..]
        .iter()
        .map(|r| (*r - limit).norm())
        .fold(T::zero(), T::max);
    Ok(RatioTrace {
        converged: deviation < tol,
        ratios,
        limit,
        deviation,
        tol,
    })
}

/// Whole- or half-line sequence with `|beta_n| = sqrt|c|` and
/// `conj(beta_{n+1}) beta_n = -c`: `beta_n = sqrt|c| e^{i (t0 - n t)}` with
/// `e^{it} = -c / |c|`.
pub fn ktilde_c1<T: Real>(c: Complex<T>, t0: T, orientation: Orientation) -> Result<VerblunskyDescriptor<T>> {
    let m = c.norm();
    if !(m > T::zero() && m <= T::one()) {
        return Err(Error::InvalidArgument(format!("need 0 < |c| <= 1, got {m}")));
    }
    let a = m.sqrt();
    Descriptor::new(
        orientation,
        Generator::Lopez {
            n0: 0,
            k: 1,
            a,
            b: a,
            t: wrap_angle((-c).arg()),
            t0,
        },
    )
}

/// Right-limit data recovered from `g` at two points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real"))]
pub struct TwoPointRecovery<T> {
    /// `beta_{n+1} conj(beta_n)`.
    pub beta_product: Complex<T>,
    /// `|beta_n|^2`.
    pub beta_modulus_sq: T,
    /// `c = -conj(beta_{n+1}) beta_n`.
    pub c: Complex<T>,
}

/// Solve for `beta_{n+1} conj(beta_n)` and `|beta_n|^2` from
/// `beta_n f_-(z, n) = g(z)` at `z1 != z2`.
///
/// From `f_-(z, n+1) (1 - z g) = z f_-(z, n) - conj(beta_n)` one gets
/// `1/z - g = P / |beta_n|^2 - P / (z g)` with `P = beta_{n+1} conj(beta_n)`,
/// so `P = (1/z1 - g1 - 1/z2 + g2) / (1/(z2 g2) - 1/(z1 g1))` and
/// `|beta_n|^2 = z1 g1 P / (g1 (1 - z1 g1) + P)`.
pub fn two_point_recovery<T: Real>(
    z1: Complex<T>,
    g1: Complex<T>,
    z2: Complex<T>,
    g2: Complex<T>,
) -> Result<TwoPointRecovery<T>> {
    let one = Complex::<T>::one();
    let tiny = T::lit(1e-300).max(T::min_positive_value());
    if z1.norm() <= tiny || z2.norm() <= tiny || g1.norm() <= tiny || g2.norm() <= tiny {
        return Err(Error::Precondition("two-point recovery needs z, g(z) nonzero".into()));
    }
    let w1 = z1 * g1;
    let w2 = z2 * g2;
    let den = one / w2 - one / w1;
    if den.norm() <= T::epsilon() * (one / w1).norm() {
        return Err(Error::Precondition("z1 g(z1) = z2 g(z2)".into()));
    }
    let p = (one / z1 - g1 - one / z2 + g2) / den;
    let q = g1 * (one - w1) + p;
    if q.norm() <= tiny {
        return Err(Error::Numeric("vanishing denominator in |beta|^2".into()));
    }
    let m = w1 * p / q;
    Ok(TwoPointRecovery {
        beta_product: p,
        beta_modulus_sq: m.re,
        c: -p.conj(),
    })
}

/// `beta_0 f_-(z, 0)` for a whole-line sequence.
pub fn limit_g<T: Real>(limit: &VerblunskyDescriptor<T>, z: Complex<T>) -> Result<Complex<T>> {
    let f = schur::schur_eval_structured(&MinusTail { desc: limit, n: 0 }, z)
        .or_else(|_| schur::f_minus(limit, 0, z, DepthPolicy::default()))?;
    let beta0 = limit.value(0)?;
    if beta0.is_zero() {
        return Ok(Complex::zero());
    }
    Ok(beta0 * f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::SparseSupport;
    use crate::schur::{caratheodory, f_plus};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn first_step() {
        let a0 = c(0.3, -0.4);
        let d = Descriptor::constant(Orientation::HalfLine, a0).unwrap();
        let z = c(0.2, 0.5);
        let p = szego_eval(&d, 1, z).unwrap();
        assert_eq!(p.phi, z - a0.conj());
        assert_eq!(p.phi_star, C::one() - a0 * z);
        assert!((p.rho_product - (1.0f64 - 0.25).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn free_polynomials() {
        let d = Descriptor::zero(Orientation::HalfLine);
        let z = c(0.6, 0.3);
        let p = szego_eval(&d, 7, z).unwrap();
        assert!((p.phi - z.powu(7)).norm() < 1e-15);
        assert_eq!(p.phi_star, C::one());
    }

    #[test]
    fn ratio_defect_identity() {
        let d = Descriptor::constant(Orientation::HalfLine, c(0.5, 0.0)).unwrap();
        let z = c(0.3, 0.2);
        let tr = szego_trace(&d, 4, z).unwrap();
        let lhs = C::one() - tr[4].phi_star / tr[3].phi_star;
        let rhs = ratio_defect_via_schur(&d, 3, z).unwrap();
        assert!((lhs - rhs).norm() < 1e-10);
        // Phi_n / Phi*_n is the same Schur function
        assert!((tr[3].phi / tr[3].phi_star * z * 0.5 - rhs).norm() < 1e-12);
    }

    #[test]
    fn free_ratios() {
        let d = Descriptor::zero(Orientation::HalfLine);
        let t = ratio_trace(&d, c(0.4, 0.1), 64, DEFAULT_RATIO_TOL).unwrap();
        assert!(t.ratios.iter().all(|r| *r == C::one()));
        assert!(t.converged);
        assert_eq!(t.limit, C::one());
    }

    #[test]
    fn ktilde_ratio_limit_matches_right_limit() {
        let cc = c(-0.2, 0.15);
        let half = ktilde_c1(cc, 0.3, Orientation::HalfLine).unwrap();
        let whole = ktilde_c1(cc, 1.1, Orientation::WholeLine).unwrap();
        for i in 0..8 {
            let x = whole.value(i).unwrap();
            let y = whole.value(i + 1).unwrap();
            assert!((y.conj() * x + cc).norm() < 1e-14);
        }
        for z in [c(0.5, 0.0), c(-0.3, 0.6), c(0.1, -0.2)] {
            let t = ratio_trace(&half, z, 2000, DEFAULT_RATIO_TOL).unwrap();
            assert!(t.converged, "z = {z}: deviation {}", t.deviation);
            let g = t.g(z);
            let want = limit_g(&whole, z).unwrap();
            assert!((g - want).norm() < 1e-8, "z = {z}: {g} vs {want}");
        }
    }

    #[test]
    fn two_point_recovery_on_ktilde() {
        let cc = c(0.3, 0.25);
        let whole = ktilde_c1(cc, 0.0, Orientation::WholeLine).unwrap();
        let (z1, z2) = (c(0.4, 0.1), c(-0.2, 0.5));
        let g1 = limit_g(&whole, z1).unwrap();
        let g2 = limit_g(&whole, z2).unwrap();
        let r = two_point_recovery(z1, g1, z2, g2).unwrap();
        let b0 = whole.value(0).unwrap();
        let b1 = whole.value(1).unwrap();
        assert!((r.beta_product - b1 * b0.conj()).norm() < 1e-8);
        assert!((r.beta_modulus_sq - cc.norm()).abs() < 1e-8);
        assert!((r.c - cc).norm() < 1e-8);
    }

    #[test]
    fn sparse_ratios_converge_to_one() {
        // every right limit has at most one nonzero coefficient, and the
        // ratio defect at a support point carries a factor z^{gap}
        let d = Descriptor::half_line(Generator::Sparse {
            support: SparseSupport::Powers { base: 4 },
            value: c(0.5, 0.0),
            offset: 0,
        })
        .unwrap();
        let t = ratio_trace(&d, c(0.5, 0.0), 300, DEFAULT_RATIO_TOL).unwrap();
        assert!(t.converged);
        assert!((t.limit - C::one()).norm() < 1e-12);
        // the only visible excursions are at the first support points
        assert!((t.ratios[4] - C::one()).norm() > 1e-2);
    }

    #[test]
    fn orthonormality_against_boundary_density() {
        let d = Descriptor::finite_support(
            Orientation::HalfLine,
            vec![(0, c(0.3, 0.2)), (1, c(-0.4, 0.1)), (3, c(0.2, -0.5))],
        )
        .unwrap();
        let m = 4096;
        let mut gram = [[C::zero(); 7]; 7];
        for j in 0..m {
            let z = C::from_polar(1.0, 2.0 * PI * (j as f64 + 0.5) / m as f64);
            let f = f_plus(&d, 0, z, DepthPolicy::default()).unwrap();
            let w = caratheodory(f, z).unwrap().re / m as f64;
            let tr = szego_trace(&d, 6, z).unwrap();
            for a in 0..7 {
                for b in 0..7 {
                    gram[a][b] += tr[a].orthonormal() * tr[b].orthonormal().conj() * w;
                }
            }
        }
        for a in 0..7 {
            for b in 0..7 {
                let want = if a == b { C::one() } else { C::zero() };
                assert!((gram[a][b] - want).norm() < 1e-4, "({a}, {b}): {}", gram[a][b]);
            }
        }
    }

    #[test]
    fn recovery_rejects_degenerate_input() {
        assert!(two_point_recovery(c(0.5, 0.0), C::zero(), c(0.2, 0.0), c(0.1, 0.0)).is_err());
        let z = c(0.5, 0.0);
        let g = c(0.3, 0.0);
        assert!(two_point_recovery(z, g, z, g).is_err());
    }

    proptest! {
        #[test]
        fn zero_free_in_disc(
            vals in prop::collection::vec((0.0f64..0.99, 0.0..2.0 * PI), 1..8),
            r in 0.0f64..0.95, t in 0.0..2.0 * PI, n in 0usize..=50,
        ) {
            let v = vals.into_iter().map(|(m, p)| C::from_polar(m, p)).collect();
            let d = Descriptor::periodic(Orientation::HalfLine, v).unwrap();
            let p = szego_eval(&d, n, C::from_polar(r, t)).unwrap();
            prop_assert!(p.phi_star.norm() > 0.0);
            // |Phi_n / Phi*_n| <= 1 in the disc
            prop_assert!(p.phi.norm() <= p.phi_star.norm() * (1.0 + 1e-12));
        }
    }
}
