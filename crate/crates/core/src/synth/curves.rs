use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{invalid, Error, Result};
use crate::geometry::set::window_length;
use crate::geometry::{CurveSet, Point, Window};

use super::field::{gradient_flow_curve, FlowParams, QuadraticField};
use super::rng::stream_rng;

/// Distribution of flow-line starting points.
#[derive(Clone, Debug, PartialEq)]
pub enum SeedDistribution {
    Uniform {
        region: Window,
    },
    /// Equal-weight isotropic Gaussians around `centers`.
    GaussianMixture {
        centers: Vec<Point>,
        spread: f64,
    },
}

impl SeedDistribution {
    fn validate(&self) -> Result<()> {
        match self {
            SeedDistribution::Uniform { .. } => Ok(()),
            SeedDistribution::GaussianMixture { centers, spread } => {
                if centers.is_empty() {
                    return Err(invalid("gaussian mixture needs at least one center"));
                }
                if !(*spread > 0.0) || !spread.is_finite() {
                    return Err(invalid(format!("spread must be positive, got {spread}")));
                }
                Ok(())
            }
        }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> Point {
        match self {
            SeedDistribution::Uniform { region } => Point::xy(
                rng.random_range(region.lo().x()..region.hi().x()),
                rng.random_range(region.lo().y()..region.hi().y()),
            ),
            SeedDistribution::GaussianMixture { centers, spread } => {
                let c = centers[rng.random_range(0..centers.len())];
                let n = Normal::new(0.0, *spread).expect("validated spread");
                Point::xy(c.x() + n.sample(rng), c.y() + n.sample(rng))
            }
        }
    }
}

/// Everything needed to draw a random curve set.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveSetSpec {
    pub field: QuadraticField,
    pub seeds: SeedDistribution,
    pub n_curves: usize,
    pub window: Window,
    /// Curves are traced inside the window grown by this margin.
    pub margin: f64,
    pub flow: FlowParams,
}

const STREAM_CURVE: u64 = 0xC0_0001;
const STREAM_CENTERS: u64 = 0xC0_0002;
const MAX_ATTEMPTS: usize = 100;

/// Draws `n_curves` flow lines of `spec.field` through random starting points, keeping
/// only curves that reach the window. Curve `k` uses stream `(seed, k)` for all its
/// attempts.
pub fn gen_curveset(spec: &CurveSetSpec, seed: u64) -> Result<CurveSet> {
    if spec.n_curves == 0 {
        return Err(invalid("need at least one curve"));
    }
    if spec.window.dim() != 2 {
        return Err(invalid("random curve sets are planar"));
    }
    if !(spec.margin >= 0.0) {
        return Err(invalid(format!("margin must be non-negative, got {}", spec.margin)));
    }
    spec.seeds.validate()?;
    let bounds = spec.window.dilate(spec.margin);
    let mut curves = Vec::with_capacity(spec.n_curves);
    for k in 0..spec.n_curves {
        let mut rng = stream_rng(seed, STREAM_CURVE, k as u64);
        let curve = (0..MAX_ATTEMPTS).find_map(|_| {
            let start = spec.seeds.sample(&mut rng);
            if !bounds.contains(&start) {
                return None;
            }
            gradient_flow_curve(&spec.field, start, &spec.flow, &bounds)
                .ok()
                .filter(|c| window_length(c, &spec.window) > 0.0)
        });
        match curve {
            Some(c) => curves.push(c),
            None => return Err(Error::Generation(format!("curve {k} missed the window in {MAX_ATTEMPTS} attempts"))),
        }
    }
    CurveSet::new(curves, spec.window)
}

/// Preset curve families: uniformly spread starting points, or starting points in 7, 2 or
/// 1 tight clusters. All presets share one field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CurvePreset {
    Wide,
    SevenClusters,
    TwoClusters,
    OneCluster,
}

impl CurvePreset {
    pub const ALL: [CurvePreset; 4] =
        [CurvePreset::Wide, CurvePreset::SevenClusters, CurvePreset::TwoClusters, CurvePreset::OneCluster];

    /// Field seed shared by every preset.
    pub const FIELD_SEED: u64 = 2;
    /// Cluster centres are drawn uniformly from this box.
    pub const CENTER_HALF_WIDTH: f64 = 0.6;
    pub const DEFAULT_CURVES: usize = 100;
    pub const MARGIN: f64 = 0.5;
    /// Output vertex spacing is `step * EMIT_EVERY`.
    pub const EMIT_EVERY: usize = 20;

    pub fn name(self) -> &'static str {
        match self {
            CurvePreset::Wide => "wide",
            CurvePreset::SevenClusters => "7cluster",
            CurvePreset::TwoClusters => "2cluster",
            CurvePreset::OneCluster => "1cluster",
        }
    }

    pub fn clusters(self) -> usize {
        match self {
            CurvePreset::Wide => 0,
            CurvePreset::SevenClusters => 7,
            CurvePreset::TwoClusters => 2,
            CurvePreset::OneCluster => 1,
        }
    }

    /// Standard deviation of starting points around their cluster centre.
    pub fn default_spread(self) -> f64 {
        match self {
            CurvePreset::Wide => 0.0,
            _ => 0.03,
        }
    }

    pub fn window() -> Window {
        Window::cube(2, -1.0, 1.0).expect("valid")
    }

    /// The preset's generator spec; cluster centres are drawn from `seed`.
    pub fn spec(self, n_curves: usize, seed: u64) -> CurveSetSpec {
        self.spec_with(n_curves, seed, CurvePreset::FIELD_SEED, self.default_spread())
    }

    pub fn spec_with(self, n_curves: usize, seed: u64, field_seed: u64, spread: f64) -> CurveSetSpec {
        let window = CurvePreset::window();
        let seeds = match self {
            CurvePreset::Wide => SeedDistribution::Uniform { region: window },
            _ => {
                let mut rng = stream_rng(seed, STREAM_CENTERS, 0);
                let h = CurvePreset::CENTER_HALF_WIDTH;
                let centers =
                    (0..self.clusters()).map(|_| Point::xy(rng.random_range(-h..h), rng.random_range(-h..h))).collect();
                SeedDistribution::GaussianMixture { centers, spread }
            }
        };
        CurveSetSpec {
            field: QuadraticField::random(field_seed),
            seeds,
            n_curves,
            window,
            margin: CurvePreset::MARGIN,
            flow: FlowParams { emit_every: CurvePreset::EMIT_EVERY, ..FlowParams::default() },
        }
    }

    pub fn generate(self, n_curves: usize, seed: u64) -> Result<CurveSet> {
        gen_curveset(&self.spec(n_curves, seed), seed)
    }
}

impl fmt::Display for CurvePreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CurvePreset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CurvePreset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| invalid(format!("unknown curve preset {s:?} (wide, 7cluster, 2cluster, 1cluster)")))
    }
}
