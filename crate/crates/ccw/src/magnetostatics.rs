//! Analytic finite-segment Biot–Savart superposition: fields, gradients,
//! field maps, and quadrupole location for wire layouts.
//!
//! Every conductor is reduced to straight zero-thickness filaments
//! (see [`crate::geometry::discretize`]); the field of one filament is the
//! closed-form Biot–Savart solution for a finite straight segment in the
//! compact form of Hanson & Hirshman, "Compact expressions for the
//! Biot–Savart fields of a filamentary segment", Phys. Plasmas 9, 4410
//! (2002):
//!
//! ```text
//!           μ0 I      2 (|r0| + |r1|)
//!   B(p) = ----- · ------------------------------- · (r0 × r1)
//!           4π      |r0||r1| [(|r0|+|r1|)² − L²]
//! ```
//!
//! with `r0 = p − start`, `r1 = p − end`, `L` the segment length. The form
//! is exact, singular only on the closed segment itself, and cheap enough
//! to superpose over thousands of filaments.
//!
//! All positions are metres, currents amperes, fields teslas.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{
    discretize_layout, Filament, GeometryError, Point3, WireLayout,
};
use crate::units::MU0_OVER_4PI;

/// Default finite-difference step for field gradients [m]: far below the
/// geometry scale (tens of µm) yet far above the double-precision noise
/// floor of the analytic field.
pub const DEFAULT_GRADIENT_STEP: f64 = 0.1e-6;

/// Coarse scan pitch used by [`find_quadrupole`] [m].
pub const QUADRUPOLE_SCAN_PITCH: f64 = 2.0e-6;

/// Position tolerance of the quadrupole refinement [m].
pub const QUADRUPOLE_POSITION_TOL: f64 = 0.01e-6;

/// Distance below which a field evaluation point is treated as lying on a
/// filament [m].
pub const SINGULARITY_GUARD: f64 = 1.0e-12;

/// Errors from field evaluation and quadrupole search.
#[derive(Debug, Error)]
pub enum MagnetostaticsError {
    /// The evaluation point lies on a current filament.
    #[error("singular field evaluation: point lies on a filament{}", wire.map(|i| format!(" of wire {i}")).unwrap_or_default())]
    Singular {
        /// Offending wire index, when attributable.
        wire: Option<usize>,
    },
    /// The evaluation point lies inside a conductor volume.
    #[error("point ({x} m, {y} m, {z} m){} lies inside conductor volume of wire {wire}", grid.map(|[i,j,k]| format!(" at grid index ({i}, {j}, {k})")).unwrap_or_default())]
    InsideConductor {
        /// Offending wire index.
        wire: usize,
        /// Grid index, when the point came from a sampling grid.
        grid: Option<[usize; 3]>,
        /// Point coordinates [m].
        x: f64,
        /// Point coordinates [m].
        y: f64,
        /// Point coordinates [m].
        z: f64,
    },
    /// The |B| minimum sits on the search-box boundary.
    #[error("|B| minimum not bracketed: located on the search-box boundary along {axis} — enlarge the box")]
    NotBracketed {
        /// Axis name ("x", "y", or "z") of the offending face.
        axis: &'static str,
    },
    /// Per-ampere normalization is undefined for an un-driven layout.
    #[error("layout drive current is zero; per-ampere quantities undefined")]
    ZeroDriveCurrent,
    /// Invalid grid or box specification.
    #[error("invalid sampling specification: {0}")]
    BadSpec(String),
    /// Propagated layout/discretization error.
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// A magnetic field vector [T].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldVector {
    /// Transverse component [T].
    #[serde(rename = "Bx")]
    pub bx: f64,
    /// Vertical component [T].
    #[serde(rename = "By")]
    pub by: f64,
    /// Axial component [T].
    #[serde(rename = "Bz")]
    pub bz: f64,
}

impl FieldVector {
    /// The zero field.
    pub const ZERO: FieldVector = FieldVector { bx: 0.0, by: 0.0, bz: 0.0 };

    /// Field magnitude |B| [T].
    pub fn magnitude(self) -> f64 {
        (self.bx * self.bx + self.by * self.by + self.bz * self.bz).sqrt()
    }

    /// Component-wise sum.
    pub fn add(self, o: FieldVector) -> FieldVector {
        FieldVector { bx: self.bx + o.bx, by: self.by + o.by, bz: self.bz + o.bz }
    }

    /// Scalar multiple.
    pub fn scale(self, k: f64) -> FieldVector {
        FieldVector { bx: k * self.bx, by: k * self.by, bz: k * self.bz }
    }
}

/// Spatial derivatives of the field at a point.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GradientResult {
    /// Jacobian `jacobian[i][j] = ∂B_i/∂x_j` [T/m], components ordered
    /// (x, y, z). Away from conductors it is traceless (∇·B = 0) and
    /// symmetric (∇×B = 0) to finite-difference accuracy.
    pub jacobian: [[f64; 3]; 3],
    /// Gradient of the field magnitude ∇|B| [T/m].
    pub grad_mag: [f64; 3],
}

impl GradientResult {
    /// Trace of the Jacobian [T/m]; ≈ 0 in current-free regions.
    pub fn trace(&self) -> f64 {
        self.jacobian[0][0] + self.jacobian[1][1] + self.jacobian[2][2]
    }

    /// Largest absolute Jacobian entry [T/m]; the scale against which the
    /// trace and asymmetry are judged.
    pub fn max_abs(&self) -> f64 {
        self.jacobian
            .iter()
            .flatten()
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Euclidean norm of the `j`-th Jacobian column [T/m] — the rate of
    /// change of the field vector along axis `j`, which is also the limit
    /// of |∇|B|| when approaching a field null along that axis.
    pub fn column_norm(&self, j: usize) -> f64 {
        let c = [self.jacobian[0][j], self.jacobian[1][j], self.jacobian[2][j]];
        (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt()
    }
}

/// Filament-count pair for cross-section discretization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discretization {
    /// Filaments across the width.
    pub n_w: usize,
    /// Filaments across the depth.
    pub n_d: usize,
}

impl Default for Discretization {
    /// 4 × 2, aspect-ratio proportional to the 100 µm × 15 µm reference
    /// cross-section; refinement beyond this changes gate-zone fields by
    /// well under 0.5% (see the convergence tests).
    fn default() -> Self {
        Discretization { n_w: 4, n_d: 2 }
    }
}

impl Discretization {
    /// Construct a pair (both counts ≥ 1).
    pub fn new(n_w: usize, n_d: usize) -> Self {
        assert!(n_w >= 1 && n_d >= 1, "discretization counts must be >= 1");
        Discretization { n_w, n_d }
    }

    /// Both counts doubled — the refinement step of convergence checks.
    pub fn doubled(self) -> Self {
        Discretization { n_w: 2 * self.n_w, n_d: 2 * self.n_d }
    }
}

/// One sampling axis: `count` points evenly spaced over `[min, max]`
/// (inclusive); `count == 1` requires `min == max` and yields that single
/// coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisRange {
    /// Lower end [m].
    pub min: f64,
    /// Upper end [m].
    pub max: f64,
    /// Number of samples (≥ 1).
    pub count: usize,
}

impl AxisRange {
    /// A degenerate axis pinned at one coordinate [m].
    pub fn fixed(v: f64) -> Self {
        AxisRange { min: v, max: v, count: 1 }
    }

    /// A sampled axis over `[min, max]` with `count` points.
    pub fn span(min: f64, max: f64, count: usize) -> Self {
        AxisRange { min, max, count }
    }

    fn validate(&self, name: &str) -> Result<(), MagnetostaticsError> {
        if self.count == 0 {
            return Err(MagnetostaticsError::BadSpec(format!("{name} axis: count must be >= 1")));
        }
        if !self.min.is_finite() || !self.max.is_finite() {
            return Err(MagnetostaticsError::BadSpec(format!("{name} axis: non-finite bound")));
        }
        if self.min > self.max {
            return Err(MagnetostaticsError::BadSpec(format!(
                "{name} axis: min {} exceeds max {}",
                self.min, self.max
            )));
        }
        if self.count == 1 && self.min != self.max {
            return Err(MagnetostaticsError::BadSpec(format!(
                "{name} axis: a single sample needs min == max"
            )));
        }
        Ok(())
    }

    fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            vec![self.min]
        } else {
            let h = (self.max - self.min) / (self.count - 1) as f64;
            (0..self.count).map(|i| self.min + i as f64 * h).collect()
        }
    }
}

/// A rectilinear sampling grid (any axis may be degenerate, so planes and
/// lines are grids too).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Transverse axis [m].
    pub x: AxisRange,
    /// Height axis [m].
    pub y: AxisRange,
    /// Axial axis [m].
    pub z: AxisRange,
}

/// Sampled field vectors on a grid, with the derived |B| array.
///
/// Sample ordering is row-major with `x` outermost and `z` innermost:
/// `index = (ix·ny + iy)·nz + iz`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldMap {
    /// The three coordinate arrays [m] (degenerate axes have length 1).
    pub axes: [Vec<f64>; 3],
    /// Field vectors, one per grid point.
    pub samples: Vec<FieldVector>,
    /// |B| per grid point [T].
    pub magnitude: Vec<f64>,
}

impl FieldMap {
    /// Flat sample index for grid indices `(ix, iy, iz)`.
    pub fn index(&self, ix: usize, iy: usize, iz: usize) -> usize {
        (ix * self.axes[1].len() + iy) * self.axes[2].len() + iz
    }

    /// Grid-point coordinates for `(ix, iy, iz)`.
    pub fn point(&self, ix: usize, iy: usize, iz: usize) -> Point3 {
        Point3::new(self.axes[0][ix], self.axes[1][iy], self.axes[2][iz])
    }

    /// CSV rendering: header `x,y,z,Bx,By,Bz,Bmag` (SI units, comma
    /// separator, `.` decimal point, LF line endings), one row per grid
    /// point in storage order. `Bmag` is the field magnitude |B|.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.samples.len() * 64 + 32);
        out.push_str("x,y,z,Bx,By,Bz,Bmag\n");
        for ix in 0..self.axes[0].len() {
            for iy in 0..self.axes[1].len() {
                for iz in 0..self.axes[2].len() {
                    let p = self.point(ix, iy, iz);
                    let i = self.index(ix, iy, iz);
                    let b = self.samples[i];
                    out.push_str(&format!(
                        "{},{},{},{:e},{:e},{:e},{:e}\n",
                        p.x, p.y, p.z, b.bx, b.by, b.bz, self.magnitude[i]
                    ));
                }
            }
        }
        out
    }
}

/// A located field null with its local gradient strengths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadrupolePoint {
    /// Position of the |B| minimum [m].
    pub position: Point3,
    /// |B| at the minimum [T] (≥ 0; ideally ≈ 0 for a true null).
    pub residual_b: f64,
    /// Per-axis gradient strength normalized by the drive current
    /// [T/m/A]: the limit of |∇|B|| approaching the null along x, y, z
    /// respectively (Jacobian column norms — see
    /// [`GradientResult::column_norm`]), divided by the largest
    /// wire-current magnitude.
    pub gradient_per_amp: [f64; 3],
}

/// Axis-aligned search box for [`find_quadrupole`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBox {
    /// Corner with the smallest coordinates [m].
    pub min: Point3,
    /// Corner with the largest coordinates [m].
    pub max: Point3,
}

impl SearchBox {
    /// Box centred on `c` with the given half-extents [m].
    pub fn centered(c: Point3, hx: f64, hy: f64, hz: f64) -> Self {
        SearchBox {
            min: Point3::new(c.x - hx, c.y - hy, c.z - hz),
            max: Point3::new(c.x + hx, c.y + hy, c.z + hz),
        }
    }

    fn validate(&self) -> Result<(), MagnetostaticsError> {
        for (name, lo, hi) in [
            ("x", self.min.x, self.max.x),
            ("y", self.min.y, self.max.y),
            ("z", self.min.z, self.max.z),
        ] {
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return Err(MagnetostaticsError::BadSpec(format!(
                    "search box {name} bounds invalid: [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }
}

/// Closed-form field of one straight filament at `point` [T].
///
/// Errors with [`MagnetostaticsError::Singular`] when `point` lies on the
/// closed segment (within [`SINGULARITY_GUARD`]); a point on the segment's
/// *extension* is fine and yields the exact zero field.
pub fn segment_field(point: Point3, filament: &Filament) -> Result<FieldVector, MagnetostaticsError> {
    segment_field_attributed(point, filament, None)
}

fn segment_field_attributed(
    point: Point3,
    filament: &Filament,
    wire: Option<usize>,
) -> Result<FieldVector, MagnetostaticsError> {
    let r0 = point.sub(filament.start);
    let r1 = point.sub(filament.end);
    let d = filament.end.sub(filament.start);
    let len = d.norm();
    let n0 = r0.norm();
    let n1 = r1.norm();
    // On-segment test: endpoints, then perpendicular distance with the
    // projection inside the segment span.
    if n0 < SINGULARITY_GUARD || n1 < SINGULARITY_GUARD {
        return Err(MagnetostaticsError::Singular { wire });
    }
    let t = r0.dot(d) / len; // signed distance along the segment from start
    if t > -SINGULARITY_GUARD && t < len + SINGULARITY_GUARD {
        let perp = r0.cross(d).norm() / len;
        if perp < SINGULARITY_GUARD {
            return Err(MagnetostaticsError::Singular { wire });
        }
    }
    let cross = r0.cross(r1);
    let sum = n0 + n1;
    let denom = n0 * n1 * (sum * sum - len * len);
    // `denom > 0` holds whenever the point is off the closed segment
    // (triangle inequality is strict there); collinear-outside points give
    // `cross = 0` and hence an exact zero field.
    let k = MU0_OVER_4PI * filament.current * 2.0 * sum / denom;
    Ok(FieldVector { bx: k * cross.x, by: k * cross.y, bz: k * cross.z })
}

/// Filaments of a layout grouped by wire, ready for repeated field sums.
struct FilamentSet {
    groups: Vec<(usize, Vec<Filament>)>,
}

impl FilamentSet {
    fn build(layout: &WireLayout, disc: Discretization) -> Result<Self, MagnetostaticsError> {
        Ok(FilamentSet { groups: discretize_layout(layout, disc.n_w, disc.n_d)? })
    }

    fn field(&self, point: Point3) -> Result<FieldVector, MagnetostaticsError> {
        let mut acc = FieldVector::ZERO;
        for (wire, group) in &self.groups {
            for f in group {
                acc = acc.add(segment_field_attributed(point, f, Some(*wire))?);
            }
        }
        Ok(acc)
    }

    fn magnitude(&self, point: Point3) -> Result<f64, MagnetostaticsError> {
        Ok(self.field(point)?.magnitude())
    }
}

/// Superposed field of every filament of every wire at `point` [T].
///
/// Singularities are reported with the offending wire index. The caller is
/// responsible for staying outside conductor volumes (use
/// [`WireLayout::contains`]); grid-driven wrappers check this themselves.
pub fn layout_field(
    point: Point3,
    layout: &WireLayout,
    disc: Discretization,
) -> Result<FieldVector, MagnetostaticsError> {
    FilamentSet::build(layout, disc)?.field(point)
}

/// Sample the layout field on a rectilinear grid.
///
/// Grid points are checked against conductor volumes first; an
/// intersection is an error carrying the grid index and wire index.
/// Evaluation is parallelized over grid points; results are deterministic
/// and independent of the partitioning.
pub fn field_map(
    layout: &WireLayout,
    grid: &GridSpec,
    disc: Discretization,
) -> Result<FieldMap, MagnetostaticsError> {
    grid.x.validate("x")?;
    grid.y.validate("y")?;
    grid.z.validate("z")?;
    let axes = [grid.x.points(), grid.y.points(), grid.z.points()];
    let mut points = Vec::with_capacity(axes[0].len() * axes[1].len() * axes[2].len());
    for (ix, &x) in axes[0].iter().enumerate() {
        for (iy, &y) in axes[1].iter().enumerate() {
            for (iz, &z) in axes[2].iter().enumerate() {
                let p = Point3::new(x, y, z);
                if let Some(wire) = layout.contains(p) {
                    return Err(MagnetostaticsError::InsideConductor {
                        wire,
                        grid: Some([ix, iy, iz]),
                        x: p.x,
                        y: p.y,
                        z: p.z,
                    });
                }
                points.push(p);
            }
        }
    }
    let set = FilamentSet::build(layout, disc)?;
    let samples: Vec<FieldVector> = points
        .par_iter()
        .map(|&p| set.field(p))
        .collect::<Result<_, _>>()?;
    let magnitude = samples.iter().map(|b| b.magnitude()).collect();
    Ok(FieldMap { axes, samples, magnitude })
}

/// Central-difference field Jacobian and ∇|B| at `point`.
///
/// `step` defaults to [`DEFAULT_GRADIENT_STEP`] (0.1 µm). The point and
/// its six stencil neighbours must lie outside all conductors.
pub fn gradient(
    point: Point3,
    layout: &WireLayout,
    disc: Discretization,
    step: Option<f64>,
) -> Result<GradientResult, MagnetostaticsError> {
    let h = step.unwrap_or(DEFAULT_GRADIENT_STEP);
    if !(h > 0.0) || !h.is_finite() {
        return Err(MagnetostaticsError::BadSpec(format!("gradient step must be positive, got {h}")));
    }
    let set = FilamentSet::build(layout, disc)?;
    gradient_with_set(point, layout, &set, h)
}

fn gradient_with_set(
    point: Point3,
    layout: &WireLayout,
    set: &FilamentSet,
    h: f64,
) -> Result<GradientResult, MagnetostaticsError> {
    let offsets = [
        Point3::new(h, 0.0, 0.0),
        Point3::new(0.0, h, 0.0),
        Point3::new(0.0, 0.0, h),
    ];
    let mut stencil = vec![point];
    for o in &offsets {
        stencil.push(point.add(*o));
        stencil.push(point.sub(*o));
    }
    for p in &stencil {
        if let Some(wire) = layout.contains(*p) {
            return Err(MagnetostaticsError::InsideConductor {
                wire,
                grid: None,
                x: p.x,
                y: p.y,
                z: p.z,
            });
        }
    }
    let mut jacobian = [[0.0; 3]; 3];
    let mut grad_mag = [0.0; 3];
    for (j, o) in offsets.iter().enumerate() {
        let bp = set.field(point.add(*o))?;
        let bm = set.field(point.sub(*o))?;
        jacobian[0][j] = (bp.bx - bm.bx) / (2.0 * h);
        jacobian[1][j] = (bp.by - bm.by) / (2.0 * h);
        jacobian[2][j] = (bp.bz - bm.bz) / (2.0 * h);
        grad_mag[j] = (bp.magnitude() - bm.magnitude()) / (2.0 * h);
    }
    Ok(GradientResult { jacobian, grad_mag })
}

/// Solve a 3×3 linear system by Gaussian elimination with partial
/// pivoting. Returns `None` when the matrix is numerically singular.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let mut pivot = col;
        for row in col + 1..3 {
            if a[row][col].abs() > a[pivot][col].abs() {
                pivot = row;
            }
        }
        if a[pivot][col] == 0.0 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for col in (0..3).rev() {
        let mut s = b[col];
        for k in col + 1..3 {
            s -= a[col][k] * x[k];
        }
        x[col] = s / a[col][col];
        if !x[col].is_finite() {
            return None;
        }
    }
    Some(x)
}

/// Locate the |B| minimum (the magnetic quadrupole null) inside `boxspec`.
///
/// Deterministic coarse-to-fine search: a grid scan at ≤ 2 µm pitch picks
/// the best cell, then damped Newton iteration on the field vector
/// (Levenberg–Marquardt on ½|B|², steps clamped to the box) polishes the
/// position until it moves by < 0.01 µm per step. Near a true null the
/// field is locally linear, so the polish converges quadratically. A
/// minimum that ends up pressed against a box face is reported as a
/// bracketing error rather than returned.
///
/// The reported `gradient_per_amp` holds the per-axis limits of |∇|B||
/// approaching the null (Jacobian column norms at the refined position)
/// divided by the drive current (largest wire-current magnitude), so the
/// numbers are directly comparable across drive levels.
pub fn find_quadrupole(
    layout: &WireLayout,
    boxspec: &SearchBox,
    disc: Discretization,
) -> Result<QuadrupolePoint, MagnetostaticsError> {
    boxspec.validate()?;
    let drive = layout.drive_current();
    if drive == 0.0 {
        return Err(MagnetostaticsError::ZeroDriveCurrent);
    }
    let set = FilamentSet::build(layout, disc)?;

    // Coarse scan at <= 2 µm pitch (degenerate axes collapse to one point).
    let axis_points = |lo: f64, hi: f64| -> Vec<f64> {
        if hi - lo <= 0.0 {
            return vec![lo];
        }
        let n = ((hi - lo) / QUADRUPOLE_SCAN_PITCH).ceil() as usize + 1;
        let h = (hi - lo) / (n - 1) as f64;
        (0..n).map(|i| lo + i as f64 * h).collect()
    };
    let xs = axis_points(boxspec.min.x, boxspec.max.x);
    let ys = axis_points(boxspec.min.y, boxspec.max.y);
    let zs = axis_points(boxspec.min.z, boxspec.max.z);
    let mut points = Vec::with_capacity(xs.len() * ys.len() * zs.len());
    for &x in &xs {
        for &y in &ys {
            for &z in &zs {
                let p = Point3::new(x, y, z);
                if let Some(wire) = layout.contains(p) {
                    return Err(MagnetostaticsError::InsideConductor {
                        wire,
                        grid: None,
                        x: p.x,
                        y: p.y,
                        z: p.z,
                    });
                }
                points.push(p);
            }
        }
    }
    let mags: Vec<f64> = points
        .par_iter()
        .map(|&p| set.magnitude(p))
        .collect::<Result<_, _>>()?;
    // Deterministic argmin: first index wins ties.
    let mut best = 0;
    for (i, &m) in mags.iter().enumerate() {
        if m < mags[best] {
            best = i;
        }
    }
    let mut pos = points[best];

    // Damped Newton on the field vector: solve (JᵀJ + λI)δ = −JᵀB and step
    // to pos + δ clamped to the box. Stationary points of ½|B|² are exactly
    // the |B| minima; near a null (B → 0) this is Newton's method on B = 0.
    // The tiny λ only matters when a Jacobian column nearly vanishes (field
    // uniform along an axis), where it keeps the solve well-posed.
    let step_cap = boxspec.max.sub(boxspec.min).norm();
    for _ in 0..60 {
        let b = set.field(pos)?;
        let j = gradient_with_set(pos, layout, &set, DEFAULT_GRADIENT_STEP)?.jacobian;
        let mut a = [[0.0; 3]; 3];
        let mut rhs = [0.0; 3];
        let bv = [b.bx, b.by, b.bz];
        for r in 0..3 {
            for c in 0..3 {
                for k in 0..3 {
                    a[r][c] += j[k][r] * j[k][c];
                }
            }
            for k in 0..3 {
                rhs[r] -= j[k][r] * bv[k];
            }
        }
        let lambda = 1e-12 * (a[0][0] + a[1][1] + a[2][2]).max(f64::MIN_POSITIVE);
        for r in 0..3 {
            a[r][r] += lambda;
        }
        let mut delta = solve3(a, rhs).ok_or_else(|| {
            MagnetostaticsError::BadSpec(
                "singular field Jacobian during quadrupole refinement".into(),
            )
        })?;
        let dn = (delta[0] * delta[0] + delta[1] * delta[1] + delta[2] * delta[2]).sqrt();
        if dn > step_cap && step_cap > 0.0 {
            for d in &mut delta {
                *d *= step_cap / dn;
            }
        }
        let next = Point3::new(
            (pos.x + delta[0]).clamp(boxspec.min.x, boxspec.max.x),
            (pos.y + delta[1]).clamp(boxspec.min.y, boxspec.max.y),
            (pos.z + delta[2]).clamp(boxspec.min.z, boxspec.max.z),
        );
        let moved = (next.x - pos.x)
            .abs()
            .max((next.y - pos.y).abs())
            .max((next.z - pos.z).abs());
        pos = next;
        if moved < QUADRUPOLE_POSITION_TOL {
            break;
        }
    }

    // A minimum pressed against a box face is not a bracketed interior
    // minimum. Collapsed axes (min == max) are fixed planes, not faces.
    let edge = 2.0 * QUADRUPOLE_POSITION_TOL;
    for (axis, lo, hi, v) in [
        ("x", boxspec.min.x, boxspec.max.x, pos.x),
        ("y", boxspec.min.y, boxspec.max.y, pos.y),
        ("z", boxspec.min.z, boxspec.max.z, pos.z),
    ] {
        if hi - lo > 0.0 && (v - lo < edge || hi - v < edge) {
            return Err(MagnetostaticsError::NotBracketed { axis });
        }
    }

    let residual_b = set.magnitude(pos)?;
    let g = gradient_with_set(pos, layout, &set, DEFAULT_GRADIENT_STEP)?;
    let gradient_per_amp = [
        g.column_norm(0) / drive,
        g.column_norm(1) / drive,
        g.column_norm(2) / drive,
    ];
    Ok(QuadrupolePoint { position: pos, residual_b, gradient_per_amp })
}

/// Axial gradient per ampere [T/m/A] of an ideal antiparallel pair of
/// zero-cross-section wires lying on the surface plane `y = 0`.
///
/// `separation` is the center-to-center distance of the two filaments
/// (the only meaningful convention at zero width). The value reported is
/// the rate of change of the field vector along `z` at `(0, height, 0)` —
/// the axis-`z` Jacobian column norm per ampere, identical to the measure
/// used by [`find_quadrupole`] — for wires spanning `x ∈ ±length/2`
/// carrying `±current`.
pub fn thin_wire_reference(
    separation: f64,
    height: f64,
    current: f64,
    length: f64,
) -> Result<f64, MagnetostaticsError> {
    for (name, value) in [
        ("separation", separation),
        ("height", height),
        ("current", current),
        ("length", length),
    ] {
        if !(value > 0.0) || !value.is_finite() {
            return Err(GeometryError::NonPositive { name, value }.into());
        }
    }
    let a = separation / 2.0;
    let fils = [
        Filament {
            start: Point3::new(-length / 2.0, 0.0, a),
            end: Point3::new(length / 2.0, 0.0, a),
            current,
        },
        Filament {
            start: Point3::new(-length / 2.0, 0.0, -a),
            end: Point3::new(length / 2.0, 0.0, -a),
            current: -current,
        },
    ];
    let p = Point3::new(0.0, height, 0.0);
    let h = DEFAULT_GRADIENT_STEP;
    let eval = |z_off: f64| -> Result<FieldVector, MagnetostaticsError> {
        let q = Point3::new(p.x, p.y, p.z + z_off);
        let mut acc = FieldVector::ZERO;
        for f in &fils {
            acc = acc.add(segment_field(q, f)?);
        }
        Ok(acc)
    };
    let bp = eval(h)?;
    let bm = eval(-h)?;
    let col = [
        (bp.bx - bm.bx) / (2.0 * h),
        (bp.by - bm.by) / (2.0 * h),
        (bp.bz - bm.bz) / (2.0 * h),
    ];
    Ok((col[0] * col[0] + col[1] * col[1] + col[2] * col[2]).sqrt() / current.abs())
}
