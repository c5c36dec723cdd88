use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::cmv::power_diagonal;
use crate::coeffs::{Generator, VerblunskyDescriptor};
use crate::error::{Error, Result};
use crate::jacobi::ProbeWindow;
use crate::scalar::{wrap_angle, Real};

/// Spectral type attached to a Khrushchev label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KhrushchevTag {
    /// Reflectionless on its spectrum.
    Reflectionless,
    /// A unimodular coefficient splits `E` into finite blocks.
    PurePoint,
    /// Exactly one nonzero coefficient.
    ExampleClass,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
#[serde(bound(deserialize = "T: Real"))]
pub enum KhrushchevLabel<T> {
    /// `K(c, k)`: nonzero coefficients at `n0 + j k`, moduli alternating
    /// `a, b`, `arg(conj(alpha_{n0+(j+1)k}) alpha_{n0+jk}) = t`, and
    /// `c = -a b e^{it}`.
    K {
        c: Complex<T>,
        k: u32,
        n0: i64,
        a: T,
        b: T,
        t: T,
        tag: KhrushchevTag,
        /// `k = 1` with `a = b`.
        ktilde: bool,
        moments_verified: bool,
    },
    /// All moments vanish: at most one nonzero coefficient.
    KInfinity { n0: Option<i64>, tag: KhrushchevTag },
    NotKhrushchev { witness: i64 },
}

impl<T: Real> KhrushchevLabel<T> {
    pub fn tag(&self) -> Option<KhrushchevTag> {
        match self {
            KhrushchevLabel::K { tag, .. } | KhrushchevLabel::KInfinity { tag, .. } => Some(*tag),
            KhrushchevLabel::NotKhrushchev { .. } => None,
        }
    }

    pub fn is_khrushchev(&self) -> bool {
        !matches!(self, KhrushchevLabel::NotKhrushchev { .. })
    }
}

/// Matches the López pattern on the probe window and, on success, checks
/// with [`power_diagonal`] that the moments of order `ell <= min(ell_max,
/// 2k)` are site-independent, vanish below `k` and equal `c` at `k`.
///
/// Random descriptors are refused: the pattern must be structural.
pub fn khrushchev_classify<T: Real>(
    desc: &VerblunskyDescriptor<T>,
    probe: ProbeWindow,
    ell_max: usize,
) -> Result<KhrushchevLabel<T>> {
    if desc.is_half_line() {
        return Err(Error::InvalidArgument("Khrushchev classification needs a whole-line descriptor".into()));
    }
    if matches!(desc.generator, Generator::Random { .. }) {
        return Err(Error::Unsupported { kind: "random", operation: "khrushchev_classify" });
    }
    let tol = T::lit(1e-12);
    let lo = probe.start;
    let hi = probe.start + probe.len as i64 - 1;
    let values = desc.values(lo, probe.len)?;
    let nz: Vec<i64> = (lo..=hi).filter(|&n| values[(n - lo) as usize].norm() > tol).collect();
    let at = |n: i64| values[(n - lo) as usize];

    match nz.len() {
        0 => return Ok(KhrushchevLabel::KInfinity { n0: None, tag: KhrushchevTag::Reflectionless }),
        1 => return Ok(KhrushchevLabel::KInfinity { n0: Some(nz[0]), tag: KhrushchevTag::ExampleClass }),
        _ => {}
    }

    let k = nz[1] - nz[0];
    if nz[0] - k >= lo {
        return Ok(KhrushchevLabel::NotKhrushchev { witness: nz[0] - k });
    }
    for w in nz.windows(2) {
        let gap = w[1] - w[0];
        if gap < k {
            return Ok(KhrushchevLabel::NotKhrushchev { witness: w[1] });
        }
        if gap > k {
            return Ok(KhrushchevLabel::NotKhrushchev { witness: w[0] + k });
        }
    }
    let last = *nz.last().expect("at least two");
    if last + k <= hi {
        return Ok(KhrushchevLabel::NotKhrushchev { witness: last + k });
    }

    let a = at(nz[0]).norm();
    let b = at(nz[1]).norm();
    let t = wrap_angle((at(nz[1]).conj() * at(nz[0])).arg());
    for (j, &n) in nz.iter().enumerate() {
        let modulus = if j % 2 == 0 { a } else { b };
        if (at(n).norm() - modulus).abs() > tol {
            return Ok(KhrushchevLabel::NotKhrushchev { witness: n });
        }
        if j > 0 {
            let step = (at(n).conj() * at(nz[j - 1])).arg() - t;
            let off = wrap_angle(step + T::PI()) - T::PI();
            if off.abs() > T::lit(1e-10) {
                return Ok(KhrushchevLabel::NotKhrushchev { witness: n });
            }
        }
    }

    let c = -Complex::from_polar(a * b, t);
    let k = u32::try_from(k).map_err(|_| Error::InvalidArgument("gap too large".into()))?;
    let mtol = T::lit(1e-10);
    let mut verified = true;
    for ell in 1..=ell_max.min(2 * k as usize) {
        let expect = if ell < k as usize {
            Some(Complex::new(T::zero(), T::zero()))
        } else if ell == k as usize {
            Some(c)
        } else {
            None
        };
        let first = power_diagonal(desc, lo, ell)?;
        for n in lo..=hi {
            let m = power_diagonal(desc, n, ell)?;
            verified &= (m - first).norm() <= mtol;
            if let Some(e) = expect {
                verified &= (m - e).norm() <= mtol;
            }
        }
    }
    let unimodular = |x: T| x >= T::one() - T::lit(1e-14);
    let tag = if unimodular(a) || unimodular(b) {
        KhrushchevTag::PurePoint
    } else {
        KhrushchevTag::Reflectionless
    };
    Ok(KhrushchevLabel::K {
        c,
        k,
        n0: nz[0],
        a,
        b,
        t,
        tag,
        ktilde: k == 1 && (a - b).abs() <= tol,
        moments_verified: verified,
    })
}
