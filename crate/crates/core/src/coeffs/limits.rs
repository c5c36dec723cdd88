use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::{Coefficient, Descriptor, Generator, Orientation, Tail};
use crate::error::{Error, Result};
use crate::scalar::{wrap_angle, Real};

/// Largest denominator searched when deciding whether a Lopez phase
/// increment is a rational multiple of `2 pi`.
const MAX_PHASE_PERIOD: i64 = 64;

/// One right limit, with shifts `n_j` along which it is approached.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "V: Serialize", deserialize = "V: serde::de::DeserializeOwned"))]
pub struct RightLimit<V: Coefficient> {
    pub limit: Descriptor<V>,
    pub witnesses: Vec<i64>,
    /// When set, every constant phase rotation of `limit` is a right limit
    /// as well (irrational Lopez phase increments).
    #[serde(default)]
    pub phase_family: bool,
}

fn witness_scales() -> [i64; 3] {
    [16, 256, 4096]
}

fn limit<V: Coefficient>(generator: Generator<V>, witnesses: Vec<i64>) -> Result<RightLimit<V>> {
    Ok(RightLimit {
        limit: Descriptor::new(Orientation::WholeLine, generator)?,
        witnesses,
        phase_family: false,
    })
}

/// Rotations of an eventually periodic tail: `alpha_n = values[(n - anchor) mod p]`
/// for large `n`. Equal rotations are reported once.
fn rotations<V: Coefficient>(values: &[V], anchor: i64, beyond: i64) -> Result<Vec<RightLimit<V>>> {
    let p = values.len() as i64;
    let mut out: Vec<RightLimit<V>> = Vec::new();
    for r in 0..p {
        let rotated: Vec<V> = (0..p)
            .map(|i| values[(i + r - anchor).rem_euclid(p) as usize])
            .collect();
        if out.iter().any(|l| l.limit.generator == Generator::Periodic { values: rotated.clone() }) {
            continue;
        }
        let base = beyond + p - (beyond - r).rem_euclid(p);
        let witnesses = witness_scales().iter().map(|s| base + p * s).collect();
        out.push(limit(Generator::Periodic { values: rotated }, witnesses)?);
    }
    Ok(out)
}

/// All right limits (up to shift) of a structured half-line sequence.
pub fn right_limits<V: Coefficient>(desc: &Descriptor<V>) -> Result<Vec<RightLimit<V>>> {
    if !desc.is_half_line() {
        return Err(Error::InvalidArgument(
            "right limits are taken of half-line sequences".into(),
        ));
    }
    let zero_limit = |beyond: i64| {
        limit(
            Generator::Constant { value: V::zero() },
            witness_scales().iter().map(|s| beyond.max(0) + s).collect(),
        )
    };
    match &desc.generator {
        Generator::Constant { value } => Ok(vec![limit(
            Generator::Constant { value: *value },
            witness_scales().to_vec(),
        )?]),
        Generator::Periodic { values } => rotations(values, 0, 0),
        Generator::Explicit {
            start,
            values,
            tail,
            ..
        } => {
            let end = start + values.len() as i64;
            match tail {
                Tail::Zero => Ok(vec![zero_limit(end)?]),
                Tail::Constant { value } => Ok(vec![limit(
                    Generator::Constant { value: *value },
                    witness_scales().iter().map(|s| end.max(0) + s).collect(),
                )?]),
                Tail::Repeat => rotations(values, *start, end.max(0)),
            }
        }
        Generator::FiniteSupport { support } => {
            Ok(vec![zero_limit(support.last().map_or(0, |(i, _)| i + 1))?])
        }
        Generator::Sparse {
            support,
            value,
            offset,
        } => {
            if value.is_zero() {
                return Ok(vec![zero_limit(0)?]);
            }
            // far-out support points, chosen with gaps well beyond the witness windows
            let far: Vec<u32> = match support {
                super::SparseSupport::Powers { base } if *base >= 8 => vec![3, 4, 5],
                super::SparseSupport::Powers { .. } => vec![5, 6, 7],
                super::SparseSupport::Squares => vec![10, 20, 40],
            };
            let zeros = far
                .iter()
                .map(|&j| (support.point(j) + support.point(j + 1)) / 2 - offset)
                .collect();
            let singles = far.iter().map(|&j| support.point(j) - offset).collect();
            Ok(vec![
                limit(Generator::Constant { value: V::zero() }, zeros)?,
                limit(
                    Generator::FiniteSupport {
                        support: vec![(0, *value)],
                    },
                    singles,
                )?,
            ])
        }
        Generator::Lopez {
            n0,
            k,
            a,
            b,
            t,
            t0,
        } => lopez_limits(*n0, *k, *a, *b, *t, *t0),
        Generator::Random { .. } => Err(Error::Unsupported {
            kind: "random",
            operation: "right_limits",
        }),
    }
}

/// Signed distance of `x` to the nearest multiple of `2 pi`.
fn circle_residue<T: Real>(x: T) -> T {
    let w = wrap_angle(x);
    if w > T::PI() {
        w - T::two_pi()
    } else {
        w
    }
}

fn lopez_limits<V: Coefficient>(
    n0: i64,
    k: u32,
    a: V::Real,
    b: V::Real,
    t: V::Real,
    t0: V::Real,
) -> Result<Vec<RightLimit<V>>> {
    let kk = k as i64;
    // shifting by 2k keeps the modulus pattern and rotates the phases by -2t
    let step = kk * 2;
    let eps = V::Real::lit(1e-9);
    let two_t = t + t;
    let period = (1..=MAX_PHASE_PERIOD)
        .find(|&q| circle_residue(V::Real::from_i64_lossy(q) * two_t).abs() < eps);
    let first = {
        // first support point at or beyond the origin with even index j
        let j0 = (-n0).div_euclid(step) + 1;
        n0 + j0 * step
    };
    let make = |phase: V::Real, witnesses: Vec<i64>, family: bool| -> Result<RightLimit<V>> {
        Ok(RightLimit {
            limit: Descriptor::new(
                Orientation::WholeLine,
                Generator::Lopez {
                    n0: 0,
                    k,
                    a,
                    b,
                    t,
                    t0: wrap_angle(phase),
                },
            )?,
            witnesses,
            phase_family: family,
        })
    };
    match period {
        Some(q) => (0..q)
            .map(|r| {
                let phase = t0 - V::Real::from_i64_lossy(2 * ((first - n0) / step + r)) * t;
                let witnesses = witness_scales()
                    .iter()
                    .map(|s| first + step * (r + q * s))
                    .collect();
                make(phase, witnesses, false)
            })
            .collect(),
        None => {
            // best approximations j with 2 j t close to 0 mod 2 pi
            let mut best = V::Real::infinity();
            let mut records = Vec::new();
            for j in 1..=1_000_000i64 {
                let r = circle_residue(V::Real::from_i64_lossy(j) * two_t).abs();
                if r < best {
                    best = r;
                    records.push(j);
                }
            }
            let witnesses = records
                .iter()
                .rev()
                .take(3)
                .rev()
                .map(|j| first + step * j)
                .collect();
            let phase = t0 - V::Real::from_i64_lossy(2 * (first - n0) / step) * t;
            Ok(vec![make(phase, witnesses, true)?])
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseCheckConfig {
    pub kmax: usize,
    pub n: usize,
    #[serde(default = "SparseCheckConfig::default_tol")]
    pub tol: f64,
    #[serde(default = "SparseCheckConfig::default_factor")]
    pub factor: f64,
}

impl SparseCheckConfig {
    fn default_tol() -> f64 {
        1e-3
    }
    fn default_factor() -> f64 {
        10.0
    }

    pub fn new(kmax: usize, n: usize) -> Self {
        Self {
            kmax,
            n,
            tol: Self::default_tol(),
            factor: Self::default_factor(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SparseVerdict {
    SingularIndicated,
    NotIndicated,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KDecay {
    pub k: usize,
    /// `max |alpha_n alpha_{n+k}|` over `n in [N/2, N]`.
    pub max_product: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseReport {
    pub per_k: Vec<KDecay>,
    /// `max |alpha_n|` over `n in [N/2, N]`.
    pub max_modulus: f64,
    /// Largest of the per-k maxima.
    pub limsup_estimate: f64,
    pub verdict: SparseVerdict,
    pub config: SparseCheckConfig,
}

/// Finite check that the products `alpha_n alpha_{n+k}` vanish while the
/// coefficients themselves do not.
pub fn sparse_condition_check<T: Real>(
    desc: &Descriptor<num_complex::Complex<T>>,
    config: &SparseCheckConfig,
) -> Result<SparseReport> {
    if config.kmax == 0 || config.n < 10 * config.kmax {
        return Err(Error::Precondition(format!(
            "need N >= 10 kmax, got N = {} and kmax = {}",
            config.n, config.kmax
        )));
    }
    let lo = (config.n / 2) as i64;
    let len = config.n - config.n / 2 + 1;
    let vals: Vec<f64> = desc
        .values(lo, len + config.kmax)?
        .iter()
        .map(|v| v.norm().to_f64().unwrap_or(f64::NAN))
        .collect();
    let max_modulus = vals[..len].iter().cloned().fold(0.0, f64::max);
    let per_k: Vec<KDecay> = (1..=config.kmax)
        .map(|k| KDecay {
            k,
            max_product: (0..len).map(|i| vals[i] * vals[i + k]).fold(0.0, f64::max),
        })
        .collect();
    let limsup_estimate = per_k.iter().map(|d| d.max_product).fold(0.0, f64::max);
    let verdict = if limsup_estimate < config.tol && max_modulus > config.factor * config.tol {
        SparseVerdict::SingularIndicated
    } else {
        SparseVerdict::NotIndicated
    };
    Ok(SparseReport {
        per_k,
        max_modulus,
        limsup_estimate,
        verdict,
        config: config.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::super::SparseSupport;
    use super::*;
    use num_complex::Complex;

    type C = Complex<f64>;

    fn sparse4() -> Descriptor<C> {
        Descriptor::half_line(Generator::Sparse {
            support: SparseSupport::Powers { base: 4 },
            value: C::new(0.5, 0.0),
            offset: 0,
        })
        .unwrap()
    }

    /// Every witness window must converge to the claimed limit.
    fn check_witnesses(desc: &Descriptor<C>, limits: &[RightLimit<C>]) {
        for l in limits {
            for &nj in &l.witnesses {
                for n in -5..=5 {
                    let got = desc.value(nj + n).unwrap();
                    let want = l.limit.value(n).unwrap();
                    let tol = if l.phase_family { 0.1 } else { 1e-9 };
                    assert!((got - want).norm() < tol, "n_j={nj} n={n}: {got} vs {want}");
                }
            }
        }
    }

    #[test]
    fn constant_has_one_limit() {
        let d = Descriptor::constant(Orientation::HalfLine, C::new(0.5, 0.0)).unwrap();
        let l = right_limits(&d).unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!(l[0].limit, Descriptor::constant(Orientation::WholeLine, C::new(0.5, 0.0)).unwrap());
        check_witnesses(&d, &l);
    }

    #[test]
    fn periodic_has_all_rotations() {
        let vals = vec![C::new(0.1, 0.0), C::new(0.2, 0.0), C::new(0.3, 0.0)];
        let d = Descriptor::periodic(Orientation::HalfLine, vals).unwrap();
        let l = right_limits(&d).unwrap();
        assert_eq!(l.len(), 3);
        check_witnesses(&d, &l);
    }

    #[test]
    fn sparse_limits_zero_and_single_site() {
        let d = sparse4();
        let l = right_limits(&d).unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(l[0].limit, Descriptor::zero(Orientation::WholeLine));
        assert_eq!(
            l[1].limit,
            Descriptor::finite_support(Orientation::WholeLine, vec![(0, C::new(0.5, 0.0))]).unwrap()
        );
        check_witnesses(&d, &l);
    }

    #[test]
    fn sparse_brute_force_limit_points() {
        // distinct windows of radius 3 among shifts far out, up to 4^5
        let d = sparse4();
        let mut seen: Vec<Vec<C>> = Vec::new();
        for n in 64..=1024 {
            let w = d.window(n, 3).unwrap().values;
            if !seen.contains(&w) {
                seen.push(w);
            }
        }
        // the zero window plus one window per position of the single site
        assert_eq!(seen.len(), 1 + 7);
    }

    #[test]
    fn lopez_rational_phase_limits() {
        let d = Descriptor::half_line(Generator::Lopez {
            n0: 1,
            k: 2,
            a: 0.5,
            b: 0.3,
            t: std::f64::consts::PI / 3.0,
            t0: 0.4,
        })
        .unwrap();
        let l = right_limits(&d).unwrap();
        assert_eq!(l.len(), 3);
        check_witnesses(&d, &l);
    }

    #[test]
    fn lopez_irrational_phase_family() {
        let d = Descriptor::half_line(Generator::Lopez {
            n0: 0,
            k: 1,
            a: 0.5,
            b: 0.5,
            t: 1.0,
            t0: 0.0,
        })
        .unwrap();
        let l = right_limits(&d).unwrap();
        assert_eq!(l.len(), 1);
        assert!(l[0].phase_family);
        check_witnesses(&d, &l);
    }

    #[test]
    fn rejections() {
        assert!(right_limits(&Descriptor::<C>::zero(Orientation::WholeLine)).is_err());
    }

    #[test]
    fn sparse_check_examples() {
        let r = sparse_condition_check(&sparse4(), &SparseCheckConfig::new(4, 4096)).unwrap();
        assert_eq!(r.verdict, SparseVerdict::SingularIndicated);
        assert_eq!(r.max_modulus, 0.5);

        let c = Descriptor::constant(Orientation::HalfLine, C::new(0.5, 0.0)).unwrap();
        let r = sparse_condition_check(&c, &SparseCheckConfig::new(4, 4096)).unwrap();
        assert_eq!(r.verdict, SparseVerdict::NotIndicated);
        assert!((r.limsup_estimate - 0.25).abs() < 1e-15);

        let vals: Vec<C> = (0..5000).map(|n| C::new(1.0 / (n as f64 + 2.0), 0.0)).collect();
        let e = Descriptor::explicit(Orientation::HalfLine, 0, vals).unwrap();
        let r = sparse_condition_check(&e, &SparseCheckConfig::new(4, 4096)).unwrap();
        assert_eq!(r.verdict, SparseVerdict::NotIndicated);
        assert!(r.limsup_estimate < 1e-6);

        assert!(sparse_condition_check(&c, &SparseCheckConfig::new(4, 20)).is_err());
    }
}
