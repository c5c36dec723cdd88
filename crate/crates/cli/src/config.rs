//! Experiment configuration files.

use num_complex::Complex;
use opuc::coeffs::{Distribution, Scale, SparseCheckConfig};
use opuc::jacobi::ProbeWindow;
use opuc::moebius::{ArcSet, Side};
use opuc::schur::DepthPolicy;
use opuc::spectral::BoundaryGrid;
use opuc::{Jacobi, Verblunsky};
use serde::{Deserialize, Serialize};

pub type C64 = Complex<f64>;

/// `theta` grid and radial schedule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "GridConfig::default_size")]
    pub size: usize,
    /// Explicit radii; when absent the schedule halves `1 - r` down to
    /// `outer_radius`.
    #[serde(default)]
    pub radii: Option<Vec<f64>>,
    #[serde(default = "GridConfig::default_outer")]
    pub outer_radius: f64,
    #[serde(default = "GridConfig::default_count")]
    pub radius_count: usize,
}

impl GridConfig {
    fn default_size() -> usize {
        4096
    }
    fn default_outer() -> f64 {
        1.0 - 1e-6
    }
    fn default_count() -> usize {
        6
    }

    pub fn build(&self) -> opuc::Result<BoundaryGrid<f64>> {
        match &self.radii {
            Some(r) => {
                let g = BoundaryGrid { size: self.size, radii: r.clone() };
                g.validate()?;
                Ok(g)
            }
            None => BoundaryGrid::with_outer_radius(self.size, self.outer_radius, self.radius_count),
        }
    }
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            size: Self::default_size(),
            radii: None,
            outer_radius: Self::default_outer(),
            radius_count: Self::default_count(),
        }
    }
}

fn default_side() -> Side {
    Side::Plus
}

fn default_probe() -> ProbeWindow {
    ProbeWindow::new(-16, 32)
}

fn default_ratio_tol() -> f64 {
    opuc::polys::DEFAULT_RATIO_TOL
}

fn default_n_max() -> usize {
    2000
}

fn default_depth() -> usize {
    opuc::jacobi::DEFAULT_DEPTH
}

fn default_ell_max() -> usize {
    4
}

fn default_pearson_n() -> Vec<i64> {
    vec![8, 32, 128]
}

/// One experiment; the `command` tag names the subcommand.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Command {
    SchurEval {
        descriptor: Verblunsky,
        #[serde(default)]
        n: i64,
        #[serde(default = "default_side")]
        side: Side,
        points: Vec<C64>,
        #[serde(default)]
        depth: DepthPolicy,
        /// Use the exact gauge-periodic evaluation (needed on the circle).
        #[serde(default)]
        structured: bool,
    },
    SigmaAc {
        descriptor: Verblunsky,
        #[serde(default)]
        grid: GridConfig,
    },
    Reflectionless {
        descriptor: Verblunsky,
        #[serde(default)]
        n: i64,
        /// Defaults to the a.c. support estimate of the descriptor.
        #[serde(default)]
        arcs: Option<ArcSet<f64>>,
        #[serde(default)]
        grid: GridConfig,
    },
    ClassifyKhrushchev {
        descriptor: Verblunsky,
        #[serde(default = "default_probe")]
        probe: ProbeWindow,
        #[serde(default = "default_ell_max")]
        ell_max: usize,
    },
    ClassifySimon {
        descriptor: Jacobi,
        #[serde(default = "default_probe")]
        probe: ProbeWindow,
        /// Points `Im z > 0` at which diagonal resolvents and m-functions
        /// are tabulated over the probe.
        #[serde(default)]
        points: Vec<C64>,
        #[serde(default = "default_depth")]
        depth: usize,
    },
    Moments {
        /// Verblunsky descriptor (trigonometric moments).
        #[serde(default)]
        descriptor: Option<Verblunsky>,
        /// Jacobi descriptor (power moments).
        #[serde(default)]
        jacobi: Option<Jacobi>,
        sites: Vec<i64>,
        #[serde(default = "default_ell_max")]
        ell_max: usize,
    },
    Ratio {
        descriptor: Verblunsky,
        points: Vec<C64>,
        #[serde(default = "default_n_max")]
        n_max: usize,
        #[serde(default = "default_ratio_tol")]
        tol: f64,
    },
    PearsonDefect {
        descriptor: Verblunsky,
        #[serde(default = "default_pearson_n")]
        n: Vec<i64>,
        a: ArcSet<f64>,
        s: ArcSet<f64>,
        #[serde(default)]
        grid: GridConfig,
    },
    RightLimits {
        descriptor: Verblunsky,
    },
    SparseCheck {
        descriptor: Verblunsky,
        config: SparseCheckConfig,
    },
    RandomExperiment {
        base: Verblunsky,
        scale: Scale<f64>,
        distribution: Distribution<f64>,
        seeds: Vec<u64>,
        #[serde(default)]
        grid: GridConfig,
    },
}

impl Command {
    pub const NAMES: [&'static str; 11] = [
        "schur-eval",
        "sigma-ac",
        "reflectionless",
        "classify-khrushchev",
        "classify-simon",
        "moments",
        "ratio",
        "pearson-defect",
        "right-limits",
        "sparse-check",
        "random-experiment",
    ];
}
