//! Boundary-value diagnostics: estimates of the essential support of the
//! absolutely continuous spectrum, reflectionless defects of the operator
//! and of the diagonal measures, Khrushchev-class labels, the Pearson
//! defect and random-ensemble experiments.
//!
//! Boundary values come from one of two paths. Sources that are
//! gauge-periodic beyond a finite prefix (or terminate at a unimodular
//! parameter) are evaluated exactly on the circle. Everything else is
//! sampled on a radial schedule and extrapolated to `r = 1`; reports carry
//! an `approximate` flag in that case.

mod experiments;
mod khrushchev;

use std::io::{self, Write};

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeffs::VerblunskyDescriptor;
use crate::error::{Error, Result};
use crate::moebius::ArcSet;
use crate::scalar::{unit, Real};
use crate::schur::{schur_eval, schur_eval_structured, DepthPolicy, MinusTail, ParameterSource, PlusTail};

pub use experiments::{
    pearson_defect, random_experiment, two_sided_determinacy_check, DeterminacyReport, DeterminacyStatus,
    EnsembleReport, PearsonReport, SeedResult,
};
pub use khrushchev::{khrushchev_classify, KhrushchevLabel, KhrushchevTag};

/// Tolerance for exact boundary paths.
pub const EXACT_TOL: f64 = 1e-6;
/// Tolerance for radially extrapolated paths.
pub const EXTRAPOLATED_TOL: f64 = 1e-3;

/// Uniform `theta` grid plus the radii used when extrapolating to the circle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound(deserialize = "T: Real"))]
pub struct BoundaryGrid<T> {
    pub size: usize,
    pub radii: Vec<T>,
}

impl<T: Real> BoundaryGrid<T> {
    /// `size` samples and the default schedule of six radii ending at
    /// `1 - 1e-6`.
    pub fn new(size: usize) -> Result<Self> {
        Self::with_outer_radius(size, T::one() - T::lit(1e-6), 6)
    }

    /// Radii `r_j = 1 - 2^{-j} (1 - r_0)`, `j = 0..count`, with the last
    /// one equal to `outer`.
    pub fn with_outer_radius(size: usize, outer: T, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidArgument("radius schedule must not be empty".into()));
        }
        let gap = (T::one() - outer) * T::lit(2f64.powi(count as i32 - 1));
        let radii = (0..count)
            .map(|j| T::one() - gap / T::lit(2f64.powi(j as i32)))
            .collect();
        let g = Self { size, radii };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.size < 64 {
            return Err(Error::InvalidArgument(format!("grid needs at least 64 samples, got {}", self.size)));
        }
        let increasing = self.radii.windows(2).all(|w| w[0] < w[1]);
        let inside = self
            .radii
            .iter()
            .all(|r| *r > T::zero() && *r <= T::one() - T::lit(1e-8));
        if self.radii.is_empty() || !increasing || !inside {
            return Err(Error::InvalidArgument(
                "radii must increase inside (0, 1 - 1e-8]".into(),
            ));
        }
        Ok(())
    }

    pub fn step(&self) -> T {
        T::two_pi() / T::from_usize_lossy(self.size)
    }

    pub fn theta(&self, k: usize) -> T {
        self.step() * T::from_usize_lossy(k)
    }

    pub fn thetas(&self) -> Vec<T> {
        (0..self.size).map(|k| self.theta(k)).collect()
    }

    pub fn outer_radius(&self) -> T {
        *self.radii.last().expect("validated schedule")
    }

    /// Grid indices whose sample lies in `set`.
    pub fn indices_in(&self, set: &ArcSet<T>) -> Vec<usize> {
        (0..self.size).filter(|&k| set.contains(self.theta(k))).collect()
    }

    /// Union of the grid cells `[theta_k - h/2, theta_k + h/2)` over the
    /// marked samples.
    pub fn cells(&self, mask: &[bool]) -> ArcSet<T> {
        let g = self.size;
        if mask.iter().all(|m| *m) {
            return ArcSet::full();
        }
        let Some(first_off) = mask.iter().position(|m| !*m) else {
            return ArcSet::full();
        };
        let h = self.step();
        let half = T::lit(0.5);
        let mut pieces = Vec::new();
        let mut run: Option<usize> = None;
        for s in 1..=g {
            let k = first_off + s;
            let on = k < first_off + g && mask[k % g];
            match (on, run) {
                (true, None) => run = Some(k),
                (false, Some(start)) => {
                    let lo = (T::from_usize_lossy(start) - half) * h;
                    let hi = (T::from_usize_lossy(k - 1) + half) * h;
                    pieces.push((lo, hi));
                    run = None;
                }
                _ => {}
            }
        }
        ArcSet::from_arcs(pieces).expect("grid cells form valid arcs")
    }
}

/// How a boundary value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryPath {
    Exact,
    Extrapolated,
}

/// Neville extrapolation to `h = 0` for samples at `h_j = h_0 2^{-j}`.
fn richardson<T: Real>(samples: &[Complex<T>]) -> Complex<T> {
    let mut table = samples.to_vec();
    let m = table.len();
    for k in 1..m {
        let factor = T::lit(2f64.powi(k as i32) - 1.0);
        for j in (k..m).rev() {
            table[j] = table[j] + (table[j] - table[j - 1]) / factor;
        }
    }
    table[m - 1]
}

/// Boundary values `f(e^{i theta_k})` of a parameter source on the whole grid.
pub fn boundary_values<T: Real, S: ParameterSource<T> + Sync + ?Sized>(
    source: &S,
    grid: &BoundaryGrid<T>,
) -> Result<(Vec<Complex<T>>, BoundaryPath)> {
    boundary_values_at(source, grid, &(0..grid.size).collect::<Vec<_>>())
}

/// [`boundary_values`] restricted to the listed grid indices.
pub fn boundary_values_at<T: Real, S: ParameterSource<T> + Sync + ?Sized>(
    source: &S,
    grid: &BoundaryGrid<T>,
    indices: &[usize],
) -> Result<(Vec<Complex<T>>, BoundaryPath)> {
    grid.validate()?;
    if source.structure().is_some() {
        let vals: Result<Vec<_>> = indices
            .par_iter()
            .map(|&k| schur_eval_structured(source, unit(grid.theta(k))))
            .collect();
        return Ok((vals?, BoundaryPath::Exact));
    }
    // materialize once; the deepest radius needs the longest prefix
    let policy = DepthPolicy::default();
    let depth = policy.depth(grid.outer_radius().to_f64().unwrap_or(1.0));
    let prefix: Vec<Complex<T>> = (0..depth).map(|j| source.param(j)).collect::<Result<_>>()?;
    let vals: Result<Vec<_>> = indices
        .par_iter()
        .map(|&k| {
            let e = unit(grid.theta(k));
            let samples: Vec<Complex<T>> = grid
                .radii
                .iter()
                .map(|r| schur_eval(prefix.as_slice(), e * *r, policy))
                .collect::<Result<_>>()?;
            Ok(richardson(&samples))
        })
        .collect();
    Ok((vals?, BoundaryPath::Extrapolated))
}

fn default_tol<T: Real>(path: BoundaryPath) -> T {
    match path {
        BoundaryPath::Exact => T::lit(EXACT_TOL),
        BoundaryPath::Extrapolated => T::lit(EXTRAPOLATED_TOL),
    }
}

/// Estimated essential support of the a.c. spectrum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct SigmaAcEstimate<T: Real> {
    pub arcs: ArcSet<T>,
    pub measure: T,
    pub grid_size: usize,
    pub grid_step: T,
    pub tol: T,
    pub approximate: bool,
}

/// Grid cells where `|f_+(e^{i theta}, 0)| < 1 - tol` (equivalently
/// `Re F > 0`). For whole-line descriptors this is the a.c. support of the
/// restriction to `n >= 0`.
pub fn sigma_ac_estimate<T: Real>(desc: &VerblunskyDescriptor<T>, grid: &BoundaryGrid<T>) -> Result<SigmaAcEstimate<T>> {
    let (vals, path) = boundary_values(&PlusTail { desc, n: 0 }, grid)?;
    let tol = default_tol(path);
    let mask: Vec<bool> = vals.iter().map(|f| f.norm() < T::one() - tol).collect();
    let arcs = grid.cells(&mask);
    Ok(SigmaAcEstimate {
        measure: arcs.measure(),
        arcs,
        grid_size: grid.size,
        grid_step: grid.step(),
        tol,
        approximate: path == BoundaryPath::Extrapolated,
    })
}

/// Median, 0.9-quantile and maximum of a defect profile.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real"))]
pub struct DefectSummary<T> {
    pub count: usize,
    pub median: T,
    pub q90: T,
    pub max: T,
}

/// Nearest-rank quantile of sorted data.
fn quantile<T: Real>(sorted: &[T], q: f64) -> T {
    let n = sorted.len();
    let rank = ((q * n as f64).ceil() as usize).clamp(1, n);
    sorted[rank - 1]
}

impl<T: Real> DefectSummary<T> {
    pub fn from_values(values: &[T]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut s = values.to_vec();
        s.sort_by(|a, b| a.partial_cmp(b).expect("finite defects"));
        Some(Self {
            count: s.len(),
            median: quantile(&s, 0.5),
            q90: quantile(&s, 0.9),
            max: s[s.len() - 1],
        })
    }
}

/// Per-sample defect on `A`, its summary, and the cells where it is small.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct DefectReport<T: Real> {
    pub n: i64,
    pub grid_size: usize,
    pub tol: T,
    pub approximate: bool,
    pub summary: Option<DefectSummary<T>>,
    pub below_tol: ArcSet<T>,
    #[serde(skip)]
    pub trace: Vec<(T, T)>,
}

impl<T: Real> DefectReport<T> {
    fn build(n: i64, grid: &BoundaryGrid<T>, idx: &[usize], values: Vec<T>, path: BoundaryPath) -> Self {
        let tol = default_tol(path);
        let mut mask = vec![false; grid.size];
        for (k, v) in idx.iter().zip(&values) {
            mask[*k] = *v < tol;
        }
        Self {
            n,
            grid_size: grid.size,
            tol,
            approximate: path == BoundaryPath::Extrapolated,
            summary: DefectSummary::from_values(&values),
            below_tol: grid.cells(&mask),
            trace: idx.iter().map(|&k| grid.theta(k)).zip(values).collect(),
        }
    }

    /// `0.9`-quantile below the tolerance (vacuously true on an empty set).
    pub fn passes(&self) -> bool {
        self.summary.is_none_or(|s| s.q90 < self.tol)
    }

    /// `theta,defect` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "theta,defect")?;
        for (t, d) in &self.trace {
            writeln!(w, "{t},{d}")?;
        }
        Ok(())
    }
}

/// `f_+` and `f_-` on grid indices, with the path used.
type SidePair<T> = (Vec<Complex<T>>, Vec<Complex<T>>, BoundaryPath);

fn both_sides<T: Real>(
    desc: &VerblunskyDescriptor<T>,
    n: i64,
    grid: &BoundaryGrid<T>,
    idx: &[usize],
) -> Result<SidePair<T>> {
    let (fp, p1) = boundary_values_at(&PlusTail { desc, n }, grid, idx)?;
    let (fm, p2) = boundary_values_at(&MinusTail { desc, n }, grid, idx)?;
    let path = if p1 == BoundaryPath::Exact && p2 == BoundaryPath::Exact {
        BoundaryPath::Exact
    } else {
        BoundaryPath::Extrapolated
    };
    Ok((fp, fm, path))
}

/// `|e^{i theta} f_+(e^{i theta}, n) - conj(f_-(e^{i theta}, n))|` on `A`.
pub fn reflectionless_defect_operator<T: Real>(
    desc: &VerblunskyDescriptor<T>,
    n: i64,
    a: &ArcSet<T>,
    grid: &BoundaryGrid<T>,
) -> Result<DefectReport<T>> {
    let idx = grid.indices_in(a);
    let (fp, fm, path) = both_sides(desc, n, grid, &idx)?;
    let values = idx
        .iter()
        .zip(fp.iter().zip(&fm))
        .map(|(&k, (p, m))| (unit(grid.theta(k)) * *p - m.conj()).norm())
        .collect();
    Ok(DefectReport::build(n, grid, &idx, values, path))
}

/// `|Im(e^{i theta} f(e^{i theta}, n))|` on `A`, with `f = f_+ f_-` the
/// Schur function of the diagonal measure at `n`.
pub fn reflectionless_defect_measure<T: Real>(
    desc: &VerblunskyDescriptor<T>,
    n: i64,
    a: &ArcSet<T>,
    grid: &BoundaryGrid<T>,
) -> Result<DefectReport<T>> {
    let idx = grid.indices_in(a);
    let (fp, fm, path) = both_sides(desc, n, grid, &idx)?;
    let values = idx
        .iter()
        .zip(fp.iter().zip(&fm))
        .map(|(&k, (p, m))| (unit(grid.theta(k)) * *p * *m).im.abs())
        .collect();
    Ok(DefectReport::build(n, grid, &idx, values, path))
}
