use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::formula::Formula;
use super::grid::Grid;
use super::primitive::{dot, BoundaryPrimitive, Point, Shape};
use crate::error::{Error, Result};

static GASKET_JSON: &str = include_str!("../../data/gasket.json");

/// Names accepted by [`Scene::builtin`].
pub const BUILTIN_SCENES: [&str; 5] = ["unit_disk", "unit_ball", "pacman", "dumbbell", "gasket"];

/// Tolerance for attributing a point to a boundary primitive.
pub const BOUNDARY_TOLERANCE: f64 = 1e-9;

const GRID_MIN_PRIMITIVES: usize = 8;
const GRID_CELLS: usize = 96;

/// Boundary value attached to a label: a constant or a named formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueSpec {
    Constant(f64),
    Formula(Formula),
}

impl ValueSpec {
    #[inline]
    fn eval(self, z: &Point) -> f64 {
        match self {
            ValueSpec::Constant(c) => c,
            ValueSpec::Formula(f) => f.eval(z),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceSpec {
    #[default]
    None,
    Formula {
        name: Formula,
    },
    Constant {
        value: f64,
    },
}

/// How the source term enters the estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceMode {
    None,
    /// One uniform ball point per step, weighted by the Green's function.
    General,
    /// Constant source: the ball integral is added in closed form.
    ConstantShortcut,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

/// On-disk scene description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneFile {
    pub name: String,
    pub dimension: usize,
    pub bbox: BoundingBox,
    pub primitives: Vec<BoundaryPrimitive>,
    pub boundary_values: BTreeMap<String, ValueSpec>,
    #[serde(default)]
    pub source: SourceSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_solution: Option<Formula>,
    /// Default evaluation point `z_0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evaluation_point: Option<Vec<f64>>,
    /// Default stopping tolerance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

/// Nearest boundary point of a query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Closest {
    pub distance: f64,
    pub point: Point,
    pub primitive: usize,
}

/// An immutable Dirichlet problem: boundary, data, source and the unit-cube
/// map used for Hilbert sorting.
#[derive(Debug, Clone)]
pub struct Scene {
    file: SceneFile,
    lo: Point,
    hi: Point,
    values: Vec<ValueSpec>,
    source_mode: SourceMode,
    grid: Option<Grid>,
}

fn point_from(v: &[f64]) -> Point {
    let mut p = [0.0; 3];
    p[..v.len()].copy_from_slice(v);
    p
}

impl Scene {
    pub fn from_file_spec(file: SceneFile) -> Result<Self> {
        let d = file.dimension;
        if !(2..=3).contains(&d) {
            return Err(Error::InvalidScene(format!("dimension {d} is not 2 or 3")));
        }
        if file.bbox.lo.len() != d || file.bbox.hi.len() != d {
            return Err(Error::InvalidScene(
                "bounding box dimension mismatch".into(),
            ));
        }
        if file
            .bbox
            .lo
            .iter()
            .zip(&file.bbox.hi)
            .any(|(a, b)| !(a < b))
        {
            return Err(Error::InvalidScene("bounding box is empty".into()));
        }
        if file.primitives.is_empty() {
            return Err(Error::InvalidScene(
                "scene has no boundary primitives".into(),
            ));
        }
        let (lo, hi) = (point_from(&file.bbox.lo), point_from(&file.bbox.hi));
        let mut values = Vec::with_capacity(file.primitives.len());
        for p in &file.primitives {
            p.shape.validate()?;
            if p.shape.dimension() != d {
                return Err(Error::InvalidScene(format!(
                    "primitive '{}' has the wrong dimension",
                    p.label
                )));
            }
            let (plo, phi) = p.shape.bounds();
            if (0..d).any(|k| !(plo[k] >= lo[k] && phi[k] <= hi[k])) {
                return Err(Error::InvalidScene(format!(
                    "bounding box does not contain primitive '{}'",
                    p.label
                )));
            }
            let v = file.boundary_values.get(&p.label).ok_or_else(|| {
                Error::InvalidScene(format!("no boundary value for label '{}'", p.label))
            })?;
            values.push(*v);
        }
        let source_mode = match file.source {
            SourceSpec::None => SourceMode::None,
            SourceSpec::Formula { .. } => SourceMode::General,
            SourceSpec::Constant { .. } => SourceMode::ConstantShortcut,
        };
        let grid = (d == 2 && file.primitives.len() >= GRID_MIN_PRIMITIVES)
            .then(|| Grid::build(&file.primitives, &lo, &hi, GRID_CELLS));
        let scene = Self {
            file,
            lo,
            hi,
            values,
            source_mode,
            grid,
        };
        if let Some(z0) = &scene.file.evaluation_point {
            if z0.len() != d {
                return Err(Error::InvalidScene(
                    "evaluation point dimension mismatch".into(),
                ));
            }
            let z = point_from(z0);
            if !scene.contains(&z) || scene.distance(&z) <= 0.0 {
                return Err(Error::InvalidScene(
                    "evaluation point is not interior".into(),
                ));
            }
        }
        if let Some(eps) = scene.file.epsilon {
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(Error::InvalidScene("epsilon must be positive".into()));
            }
        }
        Ok(scene)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file_spec(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.file)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn spec(&self) -> &SceneFile {
        &self.file
    }

    /// One of [`BUILTIN_SCENES`].
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "unit_disk" => Ok(Self::unit_disk()),
            "unit_ball" => Ok(Self::unit_ball()),
            "pacman" => Ok(Self::pacman()),
            "dumbbell" => Self::dumbbell(1.5, 1.0, 0.4),
            "gasket" => Ok(Self::gasket()),
            _ => Err(Error::UnknownScene {
                name: name.to_string(),
                known: BUILTIN_SCENES.join(", "),
            }),
        }
    }

    /// A built-in name or a path to a scene file.
    pub fn resolve(name_or_path: &str) -> Result<Self> {
        if BUILTIN_SCENES.contains(&name_or_path) {
            Self::builtin(name_or_path)
        } else if Path::new(name_or_path).is_file() {
            Self::load(name_or_path)
        } else {
            Self::builtin(name_or_path)
        }
    }

    pub fn unit_disk() -> Self {
        Self::from_file_spec(SceneFile {
            name: "unit_disk".into(),
            dimension: 2,
            bbox: BoundingBox {
                lo: vec![-1.0; 2],
                hi: vec![1.0; 2],
            },
            primitives: vec![BoundaryPrimitive {
                shape: Shape::Circle {
                    center: [0.0, 0.0],
                    radius: 1.0,
                },
                label: "circle".into(),
            }],
            boundary_values: BTreeMap::from([(
                "circle".into(),
                ValueSpec::Formula(Formula::DiskLog),
            )]),
            source: SourceSpec::None,
            exact_solution: Some(Formula::DiskLog),
            evaluation_point: Some(vec![0.0, 0.5]),
            epsilon: Some(1e-4),
        })
        .expect("built-in scene is valid")
    }

    pub fn unit_ball() -> Self {
        Self::from_file_spec(SceneFile {
            name: "unit_ball".into(),
            dimension: 3,
            bbox: BoundingBox {
                lo: vec![-1.0; 3],
                hi: vec![1.0; 3],
            },
            primitives: vec![BoundaryPrimitive {
                shape: Shape::Sphere {
                    center: [0.0; 3],
                    radius: 1.0,
                },
                label: "sphere".into(),
            }],
            boundary_values: BTreeMap::from([(
                "sphere".into(),
                ValueSpec::Formula(Formula::BallInverseDistance),
            )]),
            source: SourceSpec::None,
            exact_solution: Some(Formula::BallInverseDistance),
            evaluation_point: Some(vec![0.2, 0.3, -0.1]),
            epsilon: Some(1e-4),
        })
        .expect("built-in scene is valid")
    }

    /// Unit disk without its first quadrant, polar angle in `[-3pi/2, 0]`.
    pub fn pacman() -> Self {
        let (r0, t0) = (0.1244f64, -0.7906f64);
        Self::from_file_spec(SceneFile {
            name: "pacman".into(),
            dimension: 2,
            bbox: BoundingBox {
                lo: vec![-1.0; 2],
                hi: vec![1.0; 2],
            },
            primitives: vec![
                BoundaryPrimitive {
                    shape: Shape::Segment {
                        a: [0.0, 0.0],
                        b: [1.0, 0.0],
                    },
                    label: "edge_zero".into(),
                },
                BoundaryPrimitive {
                    shape: Shape::Segment {
                        a: [0.0, 0.0],
                        b: [0.0, 1.0],
                    },
                    label: "edge_three_half_pi".into(),
                },
                BoundaryPrimitive {
                    shape: Shape::Arc {
                        center: [0.0, 0.0],
                        radius: 1.0,
                        start: FRAC_PI_2,
                        sweep: 1.5 * PI,
                    },
                    label: "arc".into(),
                },
            ],
            boundary_values: BTreeMap::from([
                (
                    "edge_zero".into(),
                    ValueSpec::Formula(Formula::PacmanEdgeZero),
                ),
                (
                    "edge_three_half_pi".into(),
                    ValueSpec::Formula(Formula::PacmanEdgeThreeHalfPi),
                ),
                ("arc".into(), ValueSpec::Formula(Formula::PacmanArc)),
            ]),
            source: SourceSpec::Formula {
                name: Formula::PacmanSource,
            },
            exact_solution: Some(Formula::PacmanExact),
            evaluation_point: Some(vec![r0 * t0.cos(), r0 * t0.sin()]),
            epsilon: Some(1e-4),
        })
        .expect("built-in scene is valid")
    }

    /// Two disks of radius `radius` centered at `(+-half_length, 0)` joined by
    /// the bridge `|y| <= half_width`; `Laplacian u = -2`, `u = 0` on the
    /// boundary, evaluated at `(half_length - radius, 0)`.
    pub fn dumbbell(half_length: f64, radius: f64, half_width: f64) -> Result<Self> {
        let (l, r, w) = (half_length, radius, half_width);
        if !(0.0 < w && w < r && r < l) {
            return Err(Error::InvalidScene("dumbbell needs 0 < w < R < L".into()));
        }
        let alpha = (w / r).asin();
        let junction = -l + r * alpha.cos();
        if junction >= 0.0 {
            return Err(Error::InvalidScene("dumbbell disks overlap".into()));
        }
        let sweep = 2.0 * PI - 2.0 * alpha;
        let label = || "wall".to_string();
        Self::from_file_spec(SceneFile {
            name: "dumbbell".into(),
            dimension: 2,
            bbox: BoundingBox {
                lo: vec![-l - r, -r],
                hi: vec![l + r, r],
            },
            primitives: vec![
                BoundaryPrimitive {
                    shape: Shape::Arc {
                        center: [-l, 0.0],
                        radius: r,
                        start: alpha,
                        sweep,
                    },
                    label: label(),
                },
                BoundaryPrimitive {
                    shape: Shape::Arc {
                        center: [l, 0.0],
                        radius: r,
                        start: PI + alpha,
                        sweep,
                    },
                    label: label(),
                },
                BoundaryPrimitive {
                    shape: Shape::Segment {
                        a: [junction, w],
                        b: [-junction, w],
                    },
                    label: label(),
                },
                BoundaryPrimitive {
                    shape: Shape::Segment {
                        a: [junction, -w],
                        b: [-junction, -w],
                    },
                    label: label(),
                },
            ],
            boundary_values: BTreeMap::from([(label(), ValueSpec::Constant(0.0))]),
            source: SourceSpec::Constant { value: -2.0 },
            exact_solution: None,
            evaluation_point: Some(vec![l - r, 0.0]),
            epsilon: Some(1e-4),
        })
    }

    /// The shipped cylinder-head gasket: outer outline and 50 holes.
    pub fn gasket() -> Self {
        Self::from_json(GASKET_JSON).expect("vendored gasket scene is valid")
    }

    pub fn name(&self) -> &str {
        &self.file.name
    }

    pub fn dim(&self) -> usize {
        self.file.dimension
    }

    pub fn primitives(&self) -> &[BoundaryPrimitive] {
        &self.file.primitives
    }

    pub fn bbox(&self) -> (Point, Point) {
        (self.lo, self.hi)
    }

    pub fn evaluation_point(&self) -> Option<Point> {
        self.file.evaluation_point.as_deref().map(point_from)
    }

    pub fn default_epsilon(&self) -> Option<f64> {
        self.file.epsilon
    }

    pub fn source_mode(&self) -> SourceMode {
        self.source_mode
    }

    pub fn has_source(&self) -> bool {
        self.source_mode != SourceMode::None
    }

    /// Switch a constant-source scene between the closed-form shortcut and
    /// the general ball-sampling estimator.
    pub fn with_source_mode(mut self, mode: SourceMode) -> Result<Self> {
        let ok = matches!(
            (self.file.source, mode),
            (SourceSpec::None, SourceMode::None)
                | (SourceSpec::Formula { .. }, SourceMode::General)
                | (SourceSpec::Constant { .. }, SourceMode::General | SourceMode::ConstantShortcut)
        );
        if !ok {
            return Err(Error::NotConstantSource);
        }
        self.source_mode = mode;
        Ok(self)
    }

    /// Lift a `d`-vector to a stored point.
    pub fn point(&self, z: &[f64]) -> Point {
        assert_eq!(z.len(), self.dim(), "point dimension mismatch");
        point_from(z)
    }

    #[inline]
    fn scan(&self, z: &Point, indices: impl Iterator<Item = usize>) -> Closest {
        let mut best = Closest {
            distance: f64::INFINITY,
            point: *z,
            primitive: 0,
        };
        for i in indices {
            let (d, p) = self.file.primitives[i].shape.closest(z);
            if d < best.distance {
                best = Closest {
                    distance: d,
                    point: p,
                    primitive: i,
                };
            }
        }
        best
    }

    /// Nearest boundary point; exact ties go to the first primitive listed.
    pub fn closest(&self, z: &Point) -> Closest {
        if let Some(cands) = self.grid.as_ref().and_then(|g| g.candidates(z)) {
            return self.scan(z, cands.iter().map(|&i| i as usize));
        }
        self.scan(z, 0..self.file.primitives.len())
    }

    /// Brute-force scan without the grid.
    pub fn closest_exhaustive(&self, z: &Point) -> Closest {
        self.scan(z, 0..self.file.primitives.len())
    }

    #[inline]
    pub fn distance(&self, z: &Point) -> f64 {
        self.closest(z).distance
    }

    pub fn project(&self, z: &Point) -> Point {
        self.closest(z).point
    }

    /// Value of `b` at a point attributed to `primitive`.
    #[inline]
    pub fn boundary_value_on(&self, primitive: usize, z: &Point) -> f64 {
        self.values[primitive].eval(z)
    }

    /// Value of `b` at a boundary point; the nearest primitive within
    /// [`BOUNDARY_TOLERANCE`] supplies it.
    pub fn boundary_value(&self, z: &Point) -> Result<f64> {
        let c = self.closest(z);
        if c.distance > BOUNDARY_TOLERANCE {
            return Err(Error::NotOnBoundary(c.distance));
        }
        Ok(self.boundary_value_on(c.primitive, z))
    }

    #[inline]
    pub(crate) fn source_unchecked(&self, w: &Point) -> f64 {
        match self.file.source {
            SourceSpec::None => 0.0,
            SourceSpec::Constant { value } => value,
            SourceSpec::Formula { name } => name.eval(w),
        }
    }

    pub fn source_value(&self, w: &Point) -> Result<f64> {
        match self.file.source {
            SourceSpec::None => Err(Error::NoSource),
            _ => Ok(self.source_unchecked(w)),
        }
    }

    /// The constant source value, if the source is constant.
    pub fn constant_source(&self) -> Option<f64> {
        match self.file.source {
            SourceSpec::Constant { value } => Some(value),
            _ => None,
        }
    }

    pub fn has_exact_solution(&self) -> bool {
        self.file.exact_solution.is_some()
    }

    pub fn exact_solution(&self, z: &Point) -> Result<f64> {
        self.file
            .exact_solution
            .map(|f| f.eval(z))
            .ok_or(Error::NoExactSolution)
    }

    /// Affine map of the bounding box onto the unit cube.
    #[inline]
    pub fn to_unit_cube(&self, z: &Point) -> Point {
        let mut u = [0.0; 3];
        for k in 0..self.dim() {
            u[k] = (z[k] - self.lo[k]) / (self.hi[k] - self.lo[k]);
        }
        u
    }

    /// Point-in-domain test by ray-crossing parity.
    pub fn contains(&self, z: &Point) -> bool {
        let d = self.dim();
        if (0..d).any(|k| !(z[k] > self.lo[k] && z[k] < self.hi[k])) {
            return false;
        }
        // An irrational-looking direction avoids grazing vertices and tangents.
        let dir: Point = if d == 2 {
            [0.836_570_291_f64.cos(), 0.836_570_291_f64.sin(), 0.0]
        } else {
            let v = [0.482_f64, 0.631, 0.607];
            let n = dot(&v, &v).sqrt();
            [v[0] / n, v[1] / n, v[2] / n]
        };
        let hits: usize = self
            .file
            .primitives
            .iter()
            .map(|p| p.shape.ray_crossings(z, &dir))
            .sum();
        hits % 2 == 1
    }

    /// Rejection-sample an interior point with distance to the boundary at
    /// least `margin`.
    pub fn sample_interior(&self, rng: &mut impl rand::Rng, margin: f64) -> Point {
        loop {
            let mut z = [0.0; 3];
            for (k, zk) in z.iter_mut().enumerate().take(self.dim()) {
                *zk = self.lo[k] + (self.hi[k] - self.lo[k]) * rng.gen::<f64>();
            }
            if self.contains(&z) && self.distance(&z) >= margin {
                return z;
            }
        }
    }

    /// Dense boundary samples from every primitive.
    pub fn sample_boundary(&self, per_unit_length: f64) -> Vec<Point> {
        self.file
            .primitives
            .iter()
            .flat_map(|p| p.shape.sample_boundary(per_unit_length))
            .collect()
    }

    /// Average grid candidate count, if an accelerator is in use.
    pub fn accelerator_load(&self) -> Option<f64> {
        self.grid.as_ref().map(Grid::mean_candidates)
    }

    #[cfg(test)]
    pub(crate) fn distance_between(a: &Point, b: &Point) -> f64 {
        let v = super::primitive::sub(a, b);
        dot(&v, &v).sqrt()
    }
}
