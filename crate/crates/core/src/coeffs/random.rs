use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Coefficient, Generator};
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_ATTEMPTS: usize = 10_000;

/// Size of the random perturbation at index `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "kebab-case", deny_unknown_fields)]
#[serde(bound(deserialize = "T: Real"))]
pub enum Scale<T> {
    Constant { value: T },
    /// `value * (|n| + 1)^(-exponent)`
    Power { value: T, exponent: T },
}

impl<T: Real> Scale<T> {
    pub fn at(&self, n: i64) -> T {
        match *self {
            Scale::Constant { value } => value,
            Scale::Power { value, exponent } => {
                value * (T::from_i64_lossy(n.abs()) + T::one()).powf(-exponent)
            }
        }
    }

    pub fn is_identically_zero(&self) -> bool {
        match *self {
            Scale::Constant { value } | Scale::Power { value, .. } => value == T::zero(),
        }
    }

    /// Whether `s_n` tends to zero.
    pub fn decays(&self) -> bool {
        match *self {
            Scale::Constant { value } => value == T::zero(),
            Scale::Power { value, exponent } => value == T::zero() || exponent > T::zero(),
        }
    }

    pub(super) fn validate(&self) -> Result<()> {
        let ok = match *self {
            Scale::Constant { value } => value >= T::zero() && value.is_finite(),
            Scale::Power { value, exponent } => {
                value >= T::zero() && value.is_finite() && exponent.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidDescriptor("random scale must be finite and nonnegative".into()))
        }
    }
}

/// Law of the i.i.d. variables `X_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "kebab-case", deny_unknown_fields)]
#[serde(bound(deserialize = "T: Real"))]
pub enum Distribution<T> {
    Uniform { lo: T, hi: T },
    /// Uniform over a finite set of values.
    Discrete { values: Vec<T> },
}

impl<T: Real> Distribution<T> {
    pub fn sample<R: Rng>(&self, rng: &mut R) -> T {
        match self {
            Distribution::Uniform { lo, hi } => {
                let u: f64 = rng.random();
                *lo + (*hi - *lo) * T::lit(u)
            }
            Distribution::Discrete { values } => values[rng.random_range(0..values.len())],
        }
    }

    pub(super) fn validate(&self) -> Result<()> {
        let ok = match self {
            Distribution::Uniform { lo, hi } => lo.is_finite() && hi.is_finite() && lo <= hi,
            Distribution::Discrete { values } => {
                !values.is_empty() && values.iter().all(|v| v.is_finite())
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidDescriptor("invalid random distribution".into()))
        }
    }
}

/// Deterministic per-index draw: the stream is keyed by `n + offset`, so a
/// value never depends on which other indices were queried.
pub(super) fn perturbed_value<V: Coefficient>(
    base: &Generator<V>,
    scale: &Scale<V::Real>,
    distribution: &Distribution<V::Real>,
    seed: u64,
    offset: i64,
    n: i64,
) -> Result<V> {
    let key = n + offset;
    let center = base.value(n)?;
    let s = scale.at(key);
    if s == V::Real::zero() {
        return Ok(center);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(key as u64);
    for _ in 0..MAX_ATTEMPTS {
        let v = center.perturb(s, distribution.sample(&mut rng));
        if v.strictly_admissible() {
            return Ok(v);
        }
    }
    Err(Error::RejectionExhausted {
        index: n,
        attempts: MAX_ATTEMPTS,
    })
}
