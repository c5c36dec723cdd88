use serde::{Deserialize, Serialize};

use super::{boundary_values_at, reflectionless_defect_operator, sigma_ac_estimate, BoundaryGrid, BoundaryPath};
use crate::coeffs::{Descriptor, Distribution, Generator, Scale, VerblunskyDescriptor};
use crate::error::{Error, Result};
use crate::moebius::{harmonic_measure_closed, ArcSet};
use crate::scalar::{unit, Real};
use crate::schur::{MinusTail, PlusTail};

/// The two integrals of the Pearson-type comparison and their difference.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real"))]
pub struct PearsonReport<T> {
    pub n: i64,
    /// `∫_A ω_{f_+(e^{iθ}, n)}(S) dθ/2π`
    pub plus_integral: T,
    /// `∫_A ω_{e^{iθ} f_-(e^{iθ}, n)}(S*) dθ/2π`
    pub minus_integral: T,
    pub defect: T,
    pub grid_size: usize,
    pub approximate: bool,
    /// `A` lies in the estimated a.c. support up to two grid steps.
    pub a_within_sigma_ac: bool,
}

/// `|∫_A ω_{f_+}(S) - ∫_A ω_{e^{iθ} f_-}(S*)|` by grid quadrature.
///
/// The minus side is a finite Blaschke-terminated list on the half-line, so
/// its boundary values are exact.
pub fn pearson_defect<T: Real>(
    desc: &VerblunskyDescriptor<T>,
    n: i64,
    a: &ArcSet<T>,
    s: &ArcSet<T>,
    grid: &BoundaryGrid<T>,
) -> Result<PearsonReport<T>> {
    if !desc.is_half_line() {
        return Err(Error::InvalidArgument("Pearson defect needs a half-line descriptor".into()));
    }
    if n < 0 {
        return Err(Error::IndexOutOfRange { index: n });
    }
    let idx = grid.indices_in(a);
    let (fp, path) = boundary_values_at(&PlusTail { desc, n }, grid, &idx)?;
    let (fm, _) = boundary_values_at(&MinusTail { desc, n }, grid, &idx)?;
    let s_star = s.star();
    let g = T::from_usize_lossy(grid.size);
    let mut plus = T::zero();
    let mut minus = T::zero();
    for ((&k, p), m) in idx.iter().zip(&fp).zip(&fm) {
        plus += harmonic_measure_closed(*p, s) / g;
        minus += harmonic_measure_closed(unit(grid.theta(k)) * *m, &s_star) / g;
    }
    let sigma = sigma_ac_estimate(desc, grid)?;
    let outside = a.intersect(&sigma.arcs.complement()).measure();
    Ok(PearsonReport {
        n,
        plus_integral: plus,
        minus_integral: minus,
        defect: (plus - minus).abs(),
        grid_size: grid.size,
        approximate: path == BoundaryPath::Extrapolated,
        a_within_sigma_ac: outside <= T::lit(2.0) * grid.step(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
#[serde(bound(deserialize = "T: Real"))]
pub enum DeterminacyStatus<T> {
    /// Both reflectionless on `A`, equal negative tails, equal positive tails.
    Consistent { max_difference: T },
    /// Hypotheses hold but the positive tails differ.
    Violation { index: i64, difference: T },
    /// A descriptor is not reflectionless on `A`.
    HypothesisNotMet { descriptor: String, q90: T },
    /// The negative tails differ, so nothing is asserted.
    NegativeTailsDiffer { index: i64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real"))]
pub struct DeterminacyReport<T> {
    pub probe: usize,
    pub tol: T,
    pub q90_a: Option<T>,
    pub q90_b: Option<T>,
    #[serde(flatten)]
    pub status: DeterminacyStatus<T>,
}

/// Falsification harness for two-sided determinacy: two whole-line
/// sequences reflectionless on a common `A` with equal `alpha_n`, `n < 0`,
/// must agree for `n >= 0`. Compares `|n| < probe`.
pub fn two_sided_determinacy_check<T: Real>(
    desc_a: &VerblunskyDescriptor<T>,
    desc_b: &VerblunskyDescriptor<T>,
    a: &ArcSet<T>,
    grid: &BoundaryGrid<T>,
    probe: usize,
) -> Result<DeterminacyReport<T>> {
    if desc_a.is_half_line() || desc_b.is_half_line() {
        return Err(Error::InvalidArgument("determinacy check needs whole-line descriptors".into()));
    }
    let ra = reflectionless_defect_operator(desc_a, 0, a, grid)?;
    let rb = reflectionless_defect_operator(desc_b, 0, a, grid)?;
    let tol = ra.tol.max(rb.tol);
    let mut report = DeterminacyReport {
        probe,
        tol,
        q90_a: ra.summary.map(|s| s.q90),
        q90_b: rb.summary.map(|s| s.q90),
        status: DeterminacyStatus::Consistent { max_difference: T::zero() },
    };
    for (name, r) in [("a", &ra), ("b", &rb)] {
        if !r.passes() {
            report.status = DeterminacyStatus::HypothesisNotMet {
                descriptor: name.into(),
                q90: r.summary.map_or(T::zero(), |s| s.q90),
            };
            return Ok(report);
        }
    }
    let same = T::lit(1e-12);
    let p = probe as i64;
    for n in (-p..0).rev() {
        if (desc_a.value(n)? - desc_b.value(n)?).norm() > same {
            report.status = DeterminacyStatus::NegativeTailsDiffer { index: n };
            return Ok(report);
        }
    }
    let mut worst = T::zero();
    for n in 0..p {
        let d = (desc_a.value(n)? - desc_b.value(n)?).norm();
        if d > same {
            report.status = DeterminacyStatus::Violation { index: n, difference: d };
            return Ok(report);
        }
        worst = worst.max(d);
    }
    report.status = DeterminacyStatus::Consistent { max_difference: worst };
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct SeedResult<T: Real> {
    pub seed: u64,
    pub measure: T,
    pub arcs: ArcSet<T>,
}

/// Estimated a.c. support across an ensemble of random perturbations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct EnsembleReport<T: Real> {
    pub per_seed: Vec<SeedResult<T>>,
    pub max_measure: T,
    pub mean_measure: T,
    pub grid_size: usize,
    pub outer_radius: T,
    pub approximate: bool,
    /// `s_n` does not tend to zero.
    pub hypothesis_met: bool,
    pub note: Option<String>,
}

/// `alpha_n = base_n + s_n X_n` for every seed, with the a.c. support
/// estimated by [`sigma_ac_estimate`].
pub fn random_experiment<T: Real>(
    base: &VerblunskyDescriptor<T>,
    scale: &Scale<T>,
    distribution: &Distribution<T>,
    seeds: &[u64],
    grid: &BoundaryGrid<T>,
) -> Result<EnsembleReport<T>> {
    if seeds.is_empty() {
        return Err(Error::InvalidArgument("need at least one seed".into()));
    }
    let mut per_seed = Vec::with_capacity(seeds.len());
    let mut approximate = false;
    for &seed in seeds {
        let est = if scale.is_identically_zero() {
            sigma_ac_estimate(base, grid)?
        } else {
            let desc = Descriptor::new(
                base.orientation,
                Generator::Random {
                    base: Box::new(base.generator.clone()),
                    scale: scale.clone(),
                    distribution: distribution.clone(),
                    seed,
                    offset: 0,
                },
            )?;
            sigma_ac_estimate(&desc, grid)?
        };
        approximate |= est.approximate;
        per_seed.push(SeedResult { seed, measure: est.measure, arcs: est.arcs });
    }
    let max_measure = per_seed.iter().map(|s| s.measure).fold(T::zero(), T::max);
    let mean_measure = per_seed.iter().map(|s| s.measure).sum::<T>() / T::from_usize_lossy(per_seed.len());
    let hypothesis_met = !scale.decays();
    Ok(EnsembleReport {
        per_seed,
        max_measure,
        mean_measure,
        grid_size: grid.size,
        outer_radius: grid.outer_radius(),
        approximate,
        hypothesis_met,
        note: (!hypothesis_met).then(|| "hypothesis s_n -/-> 0 not met".to_string()),
    })
}
