//! Concrete collapsible scenes and their description format.
//!
//! Two scene kinds are supported: a 2-D vertical strip around the graph
//! of a Lipschitz curve (fibered by vertical segments, collapsed onto
//! the curve) and a closed ball in R^n (collapsed to a point).

use serde::Deserialize;

use crate::curve::CurveSpec;
use crate::error::{GeomError, Result};
use crate::point::{aabb2, p2, Aabb, Point};

/// Tolerance for closed-form membership tests.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// The region between `center - half_width_below` and
/// `center + half_width_above`, fibered by vertical segments
/// `{t} x [center(t) - hwb, center(t) + hwa]`.
///
/// Every fiber has length `hwb + hwa` and the center graph meets each
/// fiber exactly once, so the strip is a bounded fibered region with the
/// curve as its transversal.
#[derive(Clone, Debug)]
pub struct StripScene {
    center: CurveSpec,
    half_width_below: f64,
    half_width_above: f64,
    domain: Aabb,
}

impl StripScene {
    pub fn new(
        center: CurveSpec,
        half_width_below: f64,
        half_width_above: f64,
        domain: Aabb,
    ) -> Result<Self> {
        center.validate()?;
        if !(half_width_below.is_finite() && half_width_below > 0.0)
            || !(half_width_above.is_finite() && half_width_above > 0.0)
        {
            return Err(GeomError::Scene(format!(
                "half widths must be positive and finite, got {half_width_below} and {half_width_above}"
            )));
        }
        if domain.dim() != 2 {
            return Err(GeomError::Scene(format!(
                "strip domain must be 2-D, got {}-D",
                domain.dim()
            )));
        }
        Ok(Self {
            center,
            half_width_below,
            half_width_above,
            domain,
        })
    }

    pub fn center(&self) -> &CurveSpec {
        &self.center
    }

    pub fn half_width_below(&self) -> f64 {
        self.half_width_below
    }

    pub fn half_width_above(&self) -> f64 {
        self.half_width_above
    }

    pub fn domain(&self) -> &Aabb {
        &self.domain
    }

    pub fn lower_boundary(&self, t: f64) -> f64 {
        self.center.value(t) - self.half_width_below
    }

    pub fn upper_boundary(&self, t: f64) -> f64 {
        self.center.value(t) + self.half_width_above
    }

    /// Is `p` inside the strip (within `tol` of it)?
    pub fn contains(&self, p: &Point, tol: f64) -> bool {
        debug_assert_eq!(p.dim(), 2);
        let y = p.coord(1);
        let c = self.center.value(p.coord(0));
        y >= c - self.half_width_below - tol && y <= c + self.half_width_above + tol
    }

    /// Length of every fiber (they are all equal for a strip).
    pub fn fiber_length(&self) -> f64 {
        self.half_width_below + self.half_width_above
    }
}

/// A closed ball in R^n, collapsed to a single point.
#[derive(Clone, Debug)]
pub struct BallScene {
    center: Point,
    radius: f64,
    domain: Aabb,
}

impl BallScene {
    pub fn new(center: Point, radius: f64, domain: Aabb) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(GeomError::Scene(format!(
                "radius must be positive and finite, got {radius}"
            )));
        }
        if domain.dim() != center.dim() {
            return Err(GeomError::Scene(format!(
                "domain is {}-D but the ball center is {}-D",
                domain.dim(),
                center.dim()
            )));
        }
        Ok(Self {
            center,
            radius,
            domain,
        })
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn domain(&self) -> &Aabb {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn contains(&self, p: &Point, tol: f64) -> bool {
        self.center.euclidean(p) <= self.radius + tol
    }

    /// Least distance from `x` to the ball and the point realizing it.
    pub fn nearest_distance(&self, x: &Point) -> Result<(f64, Point)> {
        if x.dim() != self.dim() {
            return Err(GeomError::DimensionMismatch {
                expected: self.dim(),
                actual: x.dim(),
            });
        }
        let d = self.center.euclidean(x);
        if d <= self.radius {
            return Ok((0.0, x.clone()));
        }
        let scale = self.radius / d;
        let surface = Point::new(
            x.coords()
                .iter()
                .zip(self.center.coords())
                .map(|(xc, cc)| cc + scale * (xc - cc))
                .collect(),
        )?;
        Ok((d - self.radius, surface))
    }

    /// Diameter: the length of the longest "fiber" of the collapsed set.
    pub fn fiber_length(&self) -> f64 {
        2.0 * self.radius
    }
}

/// A named or file-loaded scene of either kind.
#[derive(Clone, Debug)]
pub enum Scene {
    Strip(StripScene),
    Ball(BallScene),
}

impl Scene {
    pub fn domain(&self) -> &Aabb {
        match self {
            Scene::Strip(s) => s.domain(),
            Scene::Ball(b) => b.domain(),
        }
    }

    pub fn summary(&self) -> String {
        match self {
            Scene::Strip(s) => {
                let curve = match s.center() {
                    CurveSpec::Constant { level } => format!("constant level {level}"),
                    CurveSpec::Sinusoid {
                        amplitude,
                        frequency,
                        phase,
                        offset,
                    } => format!(
                        "sinusoid a={amplitude} w={frequency} phase={phase} offset={offset}"
                    ),
                    CurveSpec::Polynomial { coefficients } => {
                        format!("polynomial {coefficients:?}")
                    }
                };
                format!(
                    "strip2d over {curve}, widths -{}/+{}",
                    s.half_width_below(),
                    s.half_width_above()
                )
            }
            Scene::Ball(b) => format!(
                "ball dim={} center={} radius={}",
                b.dim(),
                b.center(),
                b.radius()
            ),
        }
    }
}

/// Built-in named scenes; acceptance runs need no fixture files.
pub fn builtin_scene(name: &str) -> Option<Scene> {
    let strip_domain = aabb2((-30.0, 30.0), (-30.0, 30.0));
    match name {
        "sine_strip" => Some(Scene::Strip(
            StripScene::new(
                CurveSpec::Sinusoid {
                    amplitude: 1.0,
                    frequency: 1.0,
                    phase: 0.0,
                    offset: 0.0,
                },
                1.0,
                1.0,
                strip_domain,
            )
            .expect("builtin scene is valid"),
        )),
        "flat_strip" => Some(Scene::Strip(
            StripScene::new(CurveSpec::Constant { level: 0.0 }, 1.0, 1.0, strip_domain)
                .expect("builtin scene is valid"),
        )),
        "cos2x_strip" => Some(Scene::Strip(
            StripScene::new(
                CurveSpec::Sinusoid {
                    amplitude: 1.0,
                    frequency: 2.0,
                    phase: std::f64::consts::FRAC_PI_2,
                    offset: 0.0,
                },
                1.0,
                1.0,
                strip_domain,
            )
            .expect("builtin scene is valid"),
        )),
        "unit_ball" => Some(Scene::Ball(
            BallScene::new(p2(0.0, 0.0), 1.0, aabb2((-12.0, 12.0), (-12.0, 12.0)))
                .expect("builtin scene is valid"),
        )),
        _ => None,
    }
}

pub const BUILTIN_SCENES: [&str; 4] = ["sine_strip", "flat_strip", "cos2x_strip", "unit_ball"];

// ---------------------------------------------------------------------------
// Scene description files (TOML)
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneFile {
    #[serde(rename = "type")]
    kind: String,
    curve: Option<CurveFile>,
    half_width_below: Option<f64>,
    half_width_above: Option<f64>,
    domain: Option<DomainFile>,
    dim: Option<usize>,
    center: Option<Vec<f64>>,
    radius: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveFile {
    kind: String,
    amplitude: Option<f64>,
    frequency: Option<f64>,
    phase: Option<f64>,
    offset: Option<f64>,
    level: Option<f64>,
    coefficients: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum DomainFile {
    /// `domain = { x = [lo, hi], y = [lo, hi] }` for 2-D scenes
    Axes { x: [f64; 2], y: [f64; 2] },
    /// `domain = [[lo, hi], [lo, hi], ...]`, one interval per axis
    List(Vec<[f64; 2]>),
}

impl DomainFile {
    fn into_aabb(self) -> Result<Aabb> {
        match self {
            DomainFile::Axes { x, y } => Aabb::new(vec![x[0], y[0]], vec![x[1], y[1]]),
            DomainFile::List(axes) => {
                let lo = axes.iter().map(|a| a[0]).collect();
                let hi = axes.iter().map(|a| a[1]).collect();
                Aabb::new(lo, hi)
            }
        }
    }
}

fn require<T>(field: Option<T>, name: &str, kind: &str) -> Result<T> {
    field.ok_or_else(|| GeomError::Scene(format!("missing field `{name}` for a {kind} scene")))
}

impl CurveFile {
    fn into_spec(self) -> Result<CurveSpec> {
        match self.kind.as_str() {
            "constant" => Ok(CurveSpec::Constant {
                level: require(self.level, "curve.level", "constant-curve")?,
            }),
            "sinusoid" => Ok(CurveSpec::Sinusoid {
                amplitude: require(self.amplitude, "curve.amplitude", "sinusoid-curve")?,
                frequency: require(self.frequency, "curve.frequency", "sinusoid-curve")?,
                phase: self.phase.unwrap_or(0.0),
                offset: self.offset.unwrap_or(0.0),
            }),
            "polynomial" => Ok(CurveSpec::Polynomial {
                coefficients: require(self.coefficients, "curve.coefficients", "polynomial-curve")?,
            }),
            other => Err(GeomError::Scene(format!(
                "unknown curve kind `{other}` (expected constant, sinusoid or polynomial)"
            ))),
        }
    }
}

/// Parse a scene description document.
pub fn scene_from_toml(text: &str) -> Result<Scene> {
    let file: SceneFile =
        toml::from_str(text).map_err(|e| GeomError::Scene(format!("parse error: {e}")))?;
    match file.kind.as_str() {
        "strip2d" => {
            let curve = require(file.curve, "curve", "strip2d")?.into_spec()?;
            let hwb = require(file.half_width_below, "half_width_below", "strip2d")?;
            let hwa = require(file.half_width_above, "half_width_above", "strip2d")?;
            let domain = require(file.domain, "domain", "strip2d")?.into_aabb()?;
            Ok(Scene::Strip(StripScene::new(curve, hwb, hwa, domain)?))
        }
        "ball" => {
            let dim = require(file.dim, "dim", "ball")?;
            let center = Point::new(require(file.center, "center", "ball")?)?;
            if center.dim() != dim {
                return Err(GeomError::Scene(format!(
                    "field `center` has {} coordinates but `dim` is {dim}",
                    center.dim()
                )));
            }
            let radius = require(file.radius, "radius", "ball")?;
            let domain = require(file.domain, "domain", "ball")?.into_aabb()?;
            Ok(Scene::Ball(BallScene::new(center, radius, domain)?))
        }
        other => Err(GeomError::Scene(format!(
            "unknown scene type `{other}` (expected strip2d or ball)"
        ))),
    }
}
