//! Wire layouts with rectangular cross-sections and their discretization
//! into straight current filaments.
//!
//! A [`WireLayout`] is the geometric ground truth for all physics in this
//! crate: a set of centerline polylines ([`WirePath`]), each with a
//! rectangular [`CrossSection`] and a signed current. For field
//! computation a path is replicated into `n_w × n_d` parallel
//! zero-thickness [`Filament`]s placed at sub-rectangle centroids of the
//! cross-section.
//!
//! Layout files are JSON documents with explicit length units:
//! `{ "name": ..., "unit": "um" | "mm" | "m", "wires": [ { "vertices":
//! [[x,y,z], ...], "width": ..., "depth": ..., "current_A": ... } ] }`.
//! Internally everything is converted to metres.
//!
//! Coordinate convention: `y` is height above the trap surface, `z` is the
//! axial trap direction, `x` is transverse. Wires are buried, so their
//! centroids sit at negative `y` (top of the wire flush with the surface
//! plane `y = 0`).

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors arising from layout construction, parsing, or discretization.
#[derive(Debug, Error)]
pub enum GeometryError {
    /// The layout document is not well-formed JSON.
    #[error("layout syntax error: {0}")]
    Syntax(String),
    /// The document parsed but violates a structural invariant.
    #[error("layout semantic error{}: {reason}", wire.map(|i| format!(" (wire {i})")).unwrap_or_default())]
    Semantic {
        /// Index of the offending wire, when attributable.
        wire: Option<usize>,
        /// Human-readable description of the violation.
        reason: String,
    },
    /// A constructor argument that must be positive was not.
    #[error("argument `{name}` must be positive, got {value}")]
    NonPositive {
        /// Name of the offending argument.
        name: &'static str,
        /// The rejected value.
        value: f64,
    },
    /// A segment direction has no well-defined cross-section offset frame.
    #[error("wire {wire}, segment {segment}: degenerate direction for cross-section offsets")]
    DegenerateSegment {
        /// Index of the wire within the layout (or 0 for a lone path).
        wire: usize,
        /// Index of the segment within the wire.
        segment: usize,
    },
}

/// A point in 3-space [m]. `y` is height above the trap surface, `z` the
/// axial trap direction, `x` transverse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point3 {
    /// Transverse coordinate [m].
    pub x: f64,
    /// Height above the trap surface [m].
    pub y: f64,
    /// Axial trap coordinate [m].
    pub z: f64,
}

impl Point3 {
    /// Construct a point from coordinates [m].
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Component-wise sum.
    pub fn add(self, o: Point3) -> Point3 {
        Point3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }

    /// Component-wise difference `self − o`.
    pub fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }

    /// Scalar multiple.
    pub fn scale(self, k: f64) -> Point3 {
        Point3::new(k * self.x, k * self.y, k * self.z)
    }

    /// Dot product.
    pub fn dot(self, o: Point3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    /// Cross product `self × o`.
    pub fn cross(self, o: Point3) -> Point3 {
        Point3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    /// Euclidean norm [m].
    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    /// True when all components are finite.
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// Rectangular wire cross-section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossSection {
    /// Lateral (in-plane) extent [m].
    pub width: f64,
    /// Vertical extent into the substrate [m].
    pub depth: f64,
}

impl CrossSection {
    /// Construct a cross-section; both extents must be positive.
    pub fn new(width: f64, depth: f64) -> Result<Self, GeometryError> {
        if !(width > 0.0) || !width.is_finite() {
            return Err(GeometryError::NonPositive { name: "width", value: width });
        }
        if !(depth > 0.0) || !depth.is_finite() {
            return Err(GeometryError::NonPositive { name: "depth", value: depth });
        }
        Ok(Self { width, depth })
    }

    /// Cross-section area [m²].
    pub fn area(self) -> f64 {
        self.width * self.depth
    }
}

/// A wire: centerline polyline, cross-section, and signed current
/// (positive = flow from the first vertex toward the last).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WirePath {
    /// Centerline vertices [m]; at least two, consecutive vertices distinct.
    pub vertices: Vec<Point3>,
    /// Rectangular cross-section [m].
    pub cross_section: CrossSection,
    /// Signed current [A].
    pub current: f64,
}

impl WirePath {
    /// Construct a path, validating the polyline invariants.
    pub fn new(
        vertices: Vec<Point3>,
        cross_section: CrossSection,
        current: f64,
    ) -> Result<Self, GeometryError> {
        Self::validate(&vertices, current, None)?;
        Ok(Self { vertices, cross_section, current })
    }

    fn validate(vertices: &[Point3], current: f64, wire: Option<usize>) -> Result<(), GeometryError> {
        if vertices.len() < 2 {
            return Err(GeometryError::Semantic {
                wire,
                reason: format!("polyline needs >= 2 vertices, got {}", vertices.len()),
            });
        }
        for (i, v) in vertices.iter().enumerate() {
            if !v.is_finite() {
                return Err(GeometryError::Semantic {
                    wire,
                    reason: format!("vertex {i} has non-finite coordinates"),
                });
            }
        }
        for (i, pair) in vertices.windows(2).enumerate() {
            if pair[1].sub(pair[0]).norm() == 0.0 {
                return Err(GeometryError::Semantic {
                    wire,
                    reason: format!("vertices {i} and {} coincide", i + 1),
                });
            }
        }
        if !current.is_finite() {
            return Err(GeometryError::Semantic { wire, reason: "non-finite current".into() });
        }
        Ok(())
    }

    /// Successive (start, end) vertex pairs of the centerline.
    pub fn segments(&self) -> impl Iterator<Item = (Point3, Point3)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    /// Total centerline arc length [m].
    pub fn length(&self) -> f64 {
        self.segments().map(|(a, b)| b.sub(a).norm()).sum()
    }
}

/// A named set of wires; the input to every solver in the crate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WireLayout {
    /// Human-readable label carried through reports.
    pub name: String,
    /// The wires; non-empty.
    pub wires: Vec<WirePath>,
}

impl WireLayout {
    /// Construct a layout; the wire list must be non-empty.
    pub fn new(name: impl Into<String>, wires: Vec<WirePath>) -> Result<Self, GeometryError> {
        if wires.is_empty() {
            return Err(GeometryError::Semantic { wire: None, reason: "empty wire list".into() });
        }
        Ok(Self { name: name.into(), wires })
    }

    /// The layout rigidly translated by `delta` (used by equivariance
    /// checks and for re-centring imported layouts).
    pub fn translated(&self, delta: Point3) -> WireLayout {
        let wires = self
            .wires
            .iter()
            .map(|w| WirePath {
                vertices: w.vertices.iter().map(|v| v.add(delta)).collect(),
                cross_section: w.cross_section,
                current: w.current,
            })
            .collect();
        WireLayout { name: self.name.clone(), wires }
    }

    /// Largest wire-current magnitude [A]; the drive current for
    /// series-connected layouts. Zero for an all-idle layout.
    pub fn drive_current(&self) -> f64 {
        self.wires.iter().map(|w| w.current.abs()).fold(0.0, f64::max)
    }

    /// Sum of per-wire sheet-resistance square counts (series convention).
    pub fn squares(&self) -> f64 {
        self.wires.iter().map(squares).sum()
    }

    /// True when `point` lies inside any wire's rectangular conductor
    /// volume; returns the first offending wire index.
    pub fn contains(&self, point: Point3) -> Option<usize> {
        self.wires
            .iter()
            .position(|w| path_contains(w, point))
    }
}

/// A zero-thickness straight current segment — the magnetostatic
/// integration primitive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Filament {
    /// Segment start [m].
    pub start: Point3,
    /// Segment end [m]; distinct from `start`.
    pub end: Point3,
    /// Signed current [A], flowing start → end.
    pub current: f64,
}

fn point_inside_segment_box(p: Point3, a: Point3, b: Point3, cs: CrossSection) -> bool {
    let d = b.sub(a);
    let len = d.norm();
    let dhat = d.scale(1.0 / len);
    let (uhat, vhat) = match offset_frame(dhat) {
        Some(f) => f,
        // Vertical segments have no preferred width orientation; use a
        // fallback frame so containment stays well-defined.
        None => {
            let uhat = dhat.cross(Point3::new(1.0, 0.0, 0.0));
            let uhat = uhat.scale(1.0 / uhat.norm());
            (uhat, uhat.cross(dhat))
        }
    };
    let r = p.sub(a);
    let t = r.dot(dhat);
    t >= 0.0
        && t <= len
        && r.dot(uhat).abs() <= cs.width / 2.0
        && r.dot(vhat).abs() <= cs.depth / 2.0
}

fn path_contains(path: &WirePath, point: Point3) -> bool {
    path.segments()
        .any(|(a, b)| point_inside_segment_box(point, a, b, path.cross_section))
}

/// Local cross-section frame for a segment direction: `uhat` spans the
/// width (in-plane, perpendicular to the run), `vhat` spans the depth.
/// `None` for directions parallel to the vertical axis `y`.
fn offset_frame(dhat: Point3) -> Option<(Point3, Point3)> {
    let yhat = Point3::new(0.0, 1.0, 0.0);
    let u = dhat.cross(yhat);
    let n = u.norm();
    if n < 1e-9 {
        return None;
    }
    let uhat = u.scale(1.0 / n);
    let vhat = uhat.cross(dhat);
    Some((uhat, vhat))
}

/// Replicate a wire into `n_w × n_d` parallel filament strands at
/// sub-rectangle centroids of the cross-section.
///
/// Each strand follows the whole polyline: at interior vertices the
/// cross-section offset is applied in the bisector frame with a miter
/// stretch in the turning plane, so strands stay at their perpendicular
/// offset from both adjoining centerlines and remain *connected* through
/// corners. Connectivity matters physically: a strand broken at a corner
/// would terminate current mid-circuit, and the spurious endpoint terms of
/// the Biot–Savart integral then leave ∇×B ≠ 0 in vacuum. A path whose
/// last vertex exactly equals its first closes every strand through the
/// seam as well.
///
/// Strand `k` carries `current/(n_w·n_d)` along its entire length, with
/// the last strand absorbing the floating-point residual, so the summed
/// current through any cross-cut equals the wire current exactly.
///
/// Filaments are returned strand-major: all segments of strand 0, then
/// strand 1, and so on.
///
/// Errors with [`GeometryError::DegenerateSegment`] when a segment runs
/// parallel to the vertical axis (no well-defined width orientation) and
/// [`GeometryError::Semantic`] when the path reverses onto itself at a
/// vertex (no usable bisector).
pub fn discretize(path: &WirePath, n_w: usize, n_d: usize) -> Result<Vec<Filament>, GeometryError> {
    discretize_indexed(path, n_w, n_d, 0)
}

fn discretize_indexed(
    path: &WirePath,
    n_w: usize,
    n_d: usize,
    wire: usize,
) -> Result<Vec<Filament>, GeometryError> {
    assert!(n_w >= 1 && n_d >= 1, "discretization counts must be >= 1");
    let n = n_w * n_d;
    let base = path.current / n as f64;
    let cs = path.cross_section;
    let verts = &path.vertices;
    let m = verts.len();

    // Unit run directions, one per segment; orientability is checked up
    // front so the error names the offending segment.
    let mut dirs = Vec::with_capacity(m - 1);
    for (si, (a, b)) in path.segments().enumerate() {
        let d = b.sub(a);
        let dhat = d.scale(1.0 / d.norm());
        offset_frame(dhat).ok_or(GeometryError::DegenerateSegment { wire, segment: si })?;
        dirs.push(dhat);
    }
    let closed = m > 2 && verts[0] == verts[m - 1];

    // Displacement of the (off_u, off_v) strand at vertex `k`. The seam
    // vertex of a closed path uses the same (last, first) bisector at both
    // ends, so the strand endpoints coincide bitwise.
    let vertex_offset = |k: usize, off_u: f64, off_v: f64| -> Result<Point3, GeometryError> {
        let (din, dout) = if k == 0 {
            if closed { (dirs[m - 2], dirs[0]) } else { (dirs[0], dirs[0]) }
        } else if k == m - 1 {
            if closed { (dirs[m - 2], dirs[0]) } else { (dirs[m - 2], dirs[m - 2]) }
        } else {
            (dirs[k - 1], dirs[k])
        };
        let sum = din.add(dout);
        // |din + dout| = 2·cos(Δθ/2); guard against near-reversals whose
        // miter stretch would be unbounded.
        let nn = sum.norm();
        if nn < 0.02 {
            return Err(GeometryError::Semantic {
                wire: Some(wire),
                reason: format!("path nearly reverses onto itself at vertex {k}"),
            });
        }
        let bis = sum.scale(1.0 / nn);
        let (uhat, vhat) = offset_frame(bis).ok_or(GeometryError::DegenerateSegment {
            wire,
            segment: k.min(m - 2),
        })?;
        let o = uhat.scale(off_u).add(vhat.scale(off_v));
        let axis = din.cross(dout);
        let axis_n = axis.norm();
        if axis_n < 1e-12 {
            // Straight-through vertex: plain perpendicular offset.
            return Ok(verts[k].add(o));
        }
        // Miter: stretch the offset component lying in the turning plane
        // by 1/cos(Δθ/2); the component along the turn axis is unchanged.
        let ahat = axis.scale(1.0 / axis_n);
        let along = ahat.scale(o.dot(ahat));
        let inplane = o.sub(along);
        let cos_half = bis.dot(din);
        Ok(verts[k].add(along).add(inplane.scale(1.0 / cos_half)))
    };

    let mut out = Vec::with_capacity(n * (m - 1));
    let mut acc = 0.0;
    for iw in 0..n_w {
        let off_u = ((iw as f64 + 0.5) / n_w as f64 - 0.5) * cs.width;
        for id in 0..n_d {
            let off_v = ((id as f64 + 0.5) / n_d as f64 - 0.5) * cs.depth;
            let last = iw == n_w - 1 && id == n_d - 1;
            let current = if last { path.current - acc } else { base };
            acc += base;
            let mut prev = vertex_offset(0, off_u, off_v)?;
            for k in 1..m {
                let next = vertex_offset(k, off_u, off_v)?;
                out.push(Filament { start: prev, end: next, current });
                prev = next;
            }
        }
    }
    Ok(out)
}

/// Filaments for a whole layout, tagged with their wire index (used for
/// error attribution in field evaluation).
pub fn discretize_layout(
    layout: &WireLayout,
    n_w: usize,
    n_d: usize,
) -> Result<Vec<(usize, Vec<Filament>)>, GeometryError> {
    layout
        .wires
        .iter()
        .enumerate()
        .map(|(i, w)| Ok((i, discretize_indexed(w, n_w, n_d, i)?)))
        .collect()
}

/// Sheet-resistance square count of a path: centerline arc length divided
/// by width. Corners are counted by plain arc length (no corner-square
/// correction).
pub fn squares(path: &WirePath) -> f64 {
    path.length() / path.cross_section.width
}

/// Current density through the cross-section [A/cm²].
///
/// Evaluated by sequential division so that exact decimal inputs (e.g.
/// 15 A through 100 µm × 15 µm) produce the exact decimal density
/// (1.0e6 A/cm²) despite binary rounding of the inputs.
pub fn current_density(path: &WirePath, current: f64) -> f64 {
    current.abs() / path.cross_section.width / path.cross_section.depth
        / crate::units::CM2_PER_M2
}

/// Two straight antiparallel wires along `x`, symmetric about the `z = 0`
/// plane.
///
/// `separation` is the edge-to-edge gap, so centerlines sit at
/// `z = ±(separation + width)/2`. Cross-section centroids sit at
/// `y = −depth/2` (wire top flush with the surface). Currents are
/// `+current` and `−current`.
pub fn antiparallel_pair(
    width: f64,
    depth: f64,
    separation: f64,
    length: f64,
    current: f64,
) -> Result<WireLayout, GeometryError> {
    for (name, value) in [("width", width), ("depth", depth), ("length", length), ("current", current)] {
        if !(value > 0.0) || !value.is_finite() {
            return Err(GeometryError::NonPositive { name, value });
        }
    }
    if !(separation >= 0.0) || !separation.is_finite() {
        return Err(GeometryError::NonPositive { name: "separation", value: separation });
    }
    let cs = CrossSection::new(width, depth)?;
    let s = (separation + width) / 2.0;
    let y0 = -depth / 2.0;
    let wire = |z: f64, i: f64| {
        WirePath::new(
            vec![Point3::new(-length / 2.0, y0, z), Point3::new(length / 2.0, y0, z)],
            cs,
            i,
        )
    };
    WireLayout::new("antiparallel-pair", vec![wire(s, current)?, wire(-s, -current)?])
}

/// Separation of the reference gate-zone geometry that the routing
/// constants below were tuned for: centerlines at ±94 µm.
const ROUTED_S_REF: f64 = 94.0e-6;
/// Return-loop half-width in `x` [m] at the reference separation.
const ROUTED_LOOP_XR: f64 = 330.0e-6;
/// Return-loop half-height in `z` [m] at the reference separation.
const ROUTED_LOOP_ZH: f64 = 650.0e-6;
/// Lead-row distance from the gate centre in `z` [m] at reference.
const ROUTED_LEAD_Z: f64 = 2.5e-3;
/// Loop feed-stub offset from the `x = 0` plane [m] at reference.
const ROUTED_STUB_DX: f64 = 80.0e-6;
/// Loop feed-stub far end in `z` [m] at reference.
const ROUTED_STUB_Z: f64 = 3.0e-3;
/// Lead length beyond the leg span [m] at reference; sized so the
/// reference layout totals exactly 390 squares.
const ROUTED_PAD_EXTRA: f64 = 2.729e-3;

/// The gate-zone wire structure: an antiparallel pair with its series
/// return routing.
///
/// Three series-driven wires (equal current, direction encoded by vertex
/// order):
///
/// 1. north wire — lead in along `z = +z_lead`, down to the `z = +s` leg
///    spanning `x ∈ [−length/2, +length/2]`, back up and out;
/// 2. south wire — the 180°-rotation image (about the vertical axis
///    through the origin), giving the antiparallel leg at `z = −s`;
/// 3. return loop — a counter-chirality rectangle centred under the
///    field null (`x ∈ ±loop_xr`, `z ∈ ±loop_zh`) with a feed-stub pair
///    running to `z = +stub_z`.
///
/// The loop's long sides are nearly translation-invariant along `z`, so
/// they cancel the pair's `By` at the null height at almost no cost in
/// axial gradient; its aspect ratio and size set the null height and the
/// residual gradient trade-off. All routing constants scale linearly with
/// the centerline offset `s = (separation + width)/2` relative to the
/// reference `s = 94 µm`; the leg span is set by `length` directly.
///
/// At the reference arguments (100 µm, 15 µm, 88 µm, 5 mm, any current)
/// the total conductor length is 39.0 mm = 390 squares.
pub fn routed_pair(
    width: f64,
    depth: f64,
    separation: f64,
    length: f64,
    current: f64,
) -> Result<WireLayout, GeometryError> {
    for (name, value) in [("width", width), ("depth", depth), ("length", length), ("current", current)] {
        if !(value > 0.0) || !value.is_finite() {
            return Err(GeometryError::NonPositive { name, value });
        }
    }
    if !(separation >= 0.0) || !separation.is_finite() {
        return Err(GeometryError::NonPositive { name: "separation", value: separation });
    }
    let cs = CrossSection::new(width, depth)?;
    let s = (separation + width) / 2.0;
    let y0 = -depth / 2.0;
    let k = s / ROUTED_S_REF;
    let leg = length / 2.0;
    let z_lead = ROUTED_LEAD_Z * k;
    let x_pad = leg + ROUTED_PAD_EXTRA * k;
    let xr = ROUTED_LOOP_XR * k;
    let zh = ROUTED_LOOP_ZH * k;
    let dstub = ROUTED_STUB_DX * k;
    let z_stub = ROUTED_STUB_Z * k;
    if s == 0.0 || z_lead <= s || zh >= z_lead {
        return Err(GeometryError::Semantic {
            wire: None,
            reason: "routing constants degenerate for this separation".into(),
        });
    }
    let p = |x: f64, z: f64| Point3::new(x, y0, z);
    let north = WirePath::new(
        vec![
            p(-x_pad, z_lead),
            p(-leg, z_lead),
            p(-leg, s),
            p(leg, s),
            p(leg, z_lead),
            p(x_pad, z_lead),
        ],
        cs,
        current,
    )?;
    let south = WirePath::new(
        vec![
            p(x_pad, -z_lead),
            p(leg, -z_lead),
            p(leg, -s),
            p(-leg, -s),
            p(-leg, -z_lead),
            p(-x_pad, -z_lead),
        ],
        cs,
        current,
    )?;
    let return_loop = WirePath::new(
        vec![
            p(-dstub, z_stub),
            p(-dstub, zh),
            p(-xr, zh),
            p(-xr, -zh),
            p(xr, -zh),
            p(xr, zh),
            p(dstub, zh),
            p(dstub, z_stub),
        ],
        cs,
        current,
    )?;
    WireLayout::new("gate-zone-ccw", vec![north, south, return_loop])
}

#[derive(Serialize, Deserialize)]
struct LayoutFileWire {
    vertices: Vec<[f64; 3]>,
    width: f64,
    depth: f64,
    #[serde(rename = "current_A")]
    current_a: f64,
}

#[derive(Serialize, Deserialize)]
struct LayoutFile {
    name: String,
    unit: String,
    wires: Vec<LayoutFileWire>,
}

/// Parse a layout document (JSON, explicit length unit); lengths are
/// converted to metres.
pub fn parse_layout(text: &str) -> Result<WireLayout, GeometryError> {
    let raw: LayoutFile =
        serde_json::from_str(text).map_err(|e| GeometryError::Syntax(e.to_string()))?;
    let scale = match raw.unit.as_str() {
        "um" => 1.0e-6,
        "mm" => 1.0e-3,
        "m" => 1.0,
        other => {
            return Err(GeometryError::Semantic {
                wire: None,
                reason: format!("unknown unit {other:?} (expected \"um\", \"mm\", or \"m\")"),
            })
        }
    };
    if raw.wires.is_empty() {
        return Err(GeometryError::Semantic { wire: None, reason: "empty wire list".into() });
    }
    let mut wires = Vec::with_capacity(raw.wires.len());
    for (i, w) in raw.wires.iter().enumerate() {
        let cs = CrossSection::new(w.width * scale, w.depth * scale).map_err(|e| match e {
            GeometryError::NonPositive { name, value } => GeometryError::Semantic {
                wire: Some(i),
                reason: format!("{name} must be positive, got {value}"),
            },
            other => other,
        })?;
        let vertices: Vec<Point3> = w
            .vertices
            .iter()
            .map(|v| Point3::new(v[0] * scale, v[1] * scale, v[2] * scale))
            .collect();
        WirePath::validate(&vertices, w.current_a, Some(i))?;
        wires.push(WirePath { vertices, cross_section: cs, current: w.current_a });
    }
    Ok(WireLayout { name: raw.name, wires })
}

/// Serialize a layout to the layout-file format (unit `"m"`, full float
/// precision) such that `parse_layout(serialize_layout(l)) == l`.
pub fn serialize_layout(layout: &WireLayout) -> String {
    let file = LayoutFile {
        name: layout.name.clone(),
        unit: "m".into(),
        wires: layout
            .wires
            .iter()
            .map(|w| LayoutFileWire {
                vertices: w.vertices.iter().map(|v| [v.x, v.y, v.z]).collect(),
                width: w.cross_section.width,
                depth: w.cross_section.depth,
                current_a: w.current,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("layout serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn antiparallel_pair_reference_geometry() {
        let l = antiparallel_pair(100e-6, 15e-6, 88e-6, 4e-3, 1.0).unwrap();
        assert_eq!(l.wires.len(), 2);
        assert_relative_eq!(l.wires[0].vertices[0].z, 94e-6, max_relative = 1e-12);
        assert_relative_eq!(l.wires[1].vertices[0].z, -94e-6, max_relative = 1e-12);
        assert_relative_eq!(l.wires[0].vertices[0].y, -7.5e-6, max_relative = 1e-12);
        assert_eq!(l.wires[0].current, 1.0);
        assert_eq!(l.wires[1].current, -1.0);
    }

    #[test]
    fn antiparallel_pair_zero_separation_touches() {
        let l = antiparallel_pair(100e-6, 15e-6, 0.0, 1e-3, 1.0).unwrap();
        assert_relative_eq!(l.wires[0].vertices[0].z, 50e-6, max_relative = 1e-12);
    }

    #[test]
    fn antiparallel_pair_is_mirror_antisymmetric() {
        let l = antiparallel_pair(100e-6, 15e-6, 88e-6, 4e-3, 2.5).unwrap();
        let (a, b) = (&l.wires[0], &l.wires[1]);
        assert_eq!(a.current, -b.current);
        for (va, vb) in a.vertices.iter().zip(&b.vertices) {
            assert_eq!(va.x, vb.x);
            assert_eq!(va.y, vb.y);
            assert_eq!(va.z, -vb.z);
        }
    }

    #[test]
    fn routed_pair_reference_is_390_squares() {
        let l = routed_pair(100e-6, 15e-6, 88e-6, 5e-3, 13.0).unwrap();
        assert_eq!(l.wires.len(), 3);
        assert_relative_eq!(l.squares(), 390.0, max_relative = 1e-9);
    }

    #[test]
    fn discretize_conserves_current_exactly() {
        let l = routed_pair(100e-6, 15e-6, 88e-6, 5e-3, 13.0).unwrap();
        for (n_w, n_d) in [(1, 1), (2, 1), (4, 2), (3, 3), (7, 5)] {
            let fils = discretize(&l.wires[0], n_w, n_d).unwrap();
            let n_seg = l.wires[0].vertices.len() - 1;
            assert_eq!(fils.len(), n_w * n_d * n_seg);
            // Strand-major order: the current crossing any segment's
            // cross-cut is the sum over strands, exact by construction.
            for seg in 0..n_seg {
                let sum = (0..n_w * n_d)
                    .map(|s| fils[s * n_seg + seg].current)
                    .fold(0.0, |acc, c| acc + c);
                assert_eq!(sum, 13.0, "exact conservation for {n_w}x{n_d}");
            }
        }
    }

    #[test]
    fn discretize_strands_connect_through_corners() {
        // L-shaped path: each strand's segment endpoints must coincide at
        // the corner, and the mitered corner point must sit at the
        // intersection of the two offset centerlines (here ±25 µm in both
        // runs' perpendicular directions).
        let path = WirePath::new(
            vec![
                Point3::new(0.0, 0.0, 0.0),
                Point3::new(1e-3, 0.0, 0.0),
                Point3::new(1e-3, 0.0, 1e-3),
            ],
            CrossSection::new(100e-6, 15e-6).unwrap(),
            1.0,
        )
        .unwrap();
        let fils = discretize(&path, 2, 1).unwrap();
        assert_eq!(fils.len(), 4);
        for s in 0..2 {
            let a = &fils[2 * s];
            let b = &fils[2 * s + 1];
            assert_eq!(a.end, b.start, "strand {s} broken at the corner");
            // Offset ±25 µm from both centerlines: corner at
            // (1e-3 ∓ 25 µm·sign, 0, ±25 µm·sign) per run geometry.
            assert_relative_eq!(a.end.z.abs(), 25e-6, max_relative = 1e-9);
            assert_relative_eq!((a.end.x - 1e-3).abs(), 25e-6, max_relative = 1e-9);
            // First run is along x at constant z; second along z at
            // constant x.
            assert_relative_eq!(a.start.z, a.end.z, max_relative = 1e-9);
            assert_relative_eq!(b.end.x, b.start.x, max_relative = 1e-9);
        }
    }

    #[test]
    fn discretize_closed_path_closes_every_strand() {
        let path = WirePath::new(
            vec![
                Point3::new(-1e-3, 0.0, 1e-3),
                Point3::new(-1e-3, 0.0, -1e-3),
                Point3::new(1e-3, 0.0, -1e-3),
                Point3::new(1e-3, 0.0, 1e-3),
                Point3::new(-1e-3, 0.0, 1e-3),
            ],
            CrossSection::new(100e-6, 15e-6).unwrap(),
            2.0,
        )
        .unwrap();
        let fils = discretize(&path, 3, 2).unwrap();
        let n_seg = 4;
        for s in 0..6 {
            let strand = &fils[s * n_seg..(s + 1) * n_seg];
            for w in strand.windows(2) {
                assert_eq!(w[0].end, w[1].start);
            }
            assert_eq!(strand[0].start, strand[n_seg - 1].end, "strand {s} seam open");
        }
    }

    #[test]
    fn discretize_offsets_match_centroid_geometry() {
        // n_w = 2, n_d = 1, width 100 µm: filaments offset ±25 µm laterally.
        let path = WirePath::new(
            vec![Point3::new(0.0, 0.0, 0.0), Point3::new(1.0, 0.0, 0.0)],
            CrossSection::new(100e-6, 15e-6).unwrap(),
            1.0,
        )
        .unwrap();
        let fils = discretize(&path, 2, 1).unwrap();
        let mut zs: Vec<f64> = fils.iter().map(|f| f.start.z).collect();
        zs.sort_by(f64::total_cmp);
        assert_relative_eq!(zs[0], -25e-6, max_relative = 1e-12);
        assert_relative_eq!(zs[1], 25e-6, max_relative = 1e-12);
        for f in &fils {
            assert_eq!(f.current, 0.5);
        }
    }

    #[test]
    fn discretize_identity_keeps_centroid() {
        let path = WirePath::new(
            vec![Point3::new(0.0, -7.5e-6, 94e-6), Point3::new(1e-3, -7.5e-6, 94e-6)],
            CrossSection::new(100e-6, 15e-6).unwrap(),
            2.0,
        )
        .unwrap();
        let fils = discretize(&path, 1, 1).unwrap();
        assert_eq!(fils.len(), 1);
        assert_eq!(fils[0].start, path.vertices[0]);
        assert_eq!(fils[0].current, 2.0);
    }

    #[test]
    fn discretize_rejects_vertical_segment() {
        let path = WirePath::new(
            vec![Point3::new(0.0, 0.0, 0.0), Point3::new(0.0, 1e-3, 0.0)],
            CrossSection::new(100e-6, 15e-6).unwrap(),
            1.0,
        )
        .unwrap();
        assert!(matches!(
            discretize(&path, 2, 2),
            Err(GeometryError::DegenerateSegment { segment: 0, .. })
        ));
    }

    #[test]
    fn squares_examples() {
        let cs = CrossSection::new(100e-6, 15e-6).unwrap();
        let straight = WirePath::new(
            vec![Point3::new(0.0, 0.0, 0.0), Point3::new(39e-3, 0.0, 0.0)],
            cs,
            1.0,
        )
        .unwrap();
        assert_relative_eq!(squares(&straight), 390.0, max_relative = 1e-12);
        let unit = WirePath::new(
            vec![Point3::new(0.0, 0.0, 0.0), Point3::new(100e-6, 0.0, 0.0)],
            cs,
            1.0,
        )
        .unwrap();
        assert_relative_eq!(squares(&unit), 1.0, max_relative = 1e-12);
        let bent = WirePath::new(
            vec![
                Point3::new(0.0, 0.0, 0.0),
                Point3::new(1e-3, 0.0, 0.0),
                Point3::new(1e-3, 0.0, 2e-3),
            ],
            cs,
            1.0,
        )
        .unwrap();
        assert_relative_eq!(squares(&bent), (1e-3 + 2e-3) / 100e-6, max_relative = 1e-12);
    }

    #[test]
    fn squares_invariant_under_rigid_translation() {
        let l = routed_pair(100e-6, 15e-6, 88e-6, 5e-3, 13.0).unwrap();
        let t = l.translated(Point3::new(1.0, -2.0, 3.0));
        assert_relative_eq!(l.squares(), t.squares(), max_relative = 1e-12);
    }

    #[test]
    fn current_density_examples() {
        let cs = CrossSection::new(100e-6, 15e-6).unwrap();
        let path = WirePath::new(
            vec![Point3::new(0.0, 0.0, 0.0), Point3::new(1e-3, 0.0, 0.0)],
            cs,
            15.0,
        )
        .unwrap();
        assert_eq!(current_density(&path, 15.0), 1.0e6);
        assert_eq!(current_density(&path, -15.0), 1.0e6);
        assert_eq!(current_density(&path, 0.0), 0.0);
        assert_relative_eq!(current_density(&path, 1.0), 1.0 / 1.5e-5, max_relative = 1e-12);
    }

    #[test]
    fn parse_layout_roundtrip_and_units() {
        let text = r#"{
            "name": "pair",
            "unit": "um",
            "wires": [
                {"vertices": [[-2000, -7.5, 94], [2000, -7.5, 94]], "width": 100, "depth": 15, "current_A": 1.0},
                {"vertices": [[-2000, -7.5, -94], [2000, -7.5, -94]], "width": 100, "depth": 15, "current_A": -1.0}
            ]
        }"#;
        let l = parse_layout(text).unwrap();
        assert_eq!(l.wires.len(), 2);
        assert_relative_eq!(l.wires[0].vertices[0].x, -2e-3, max_relative = 1e-12);
        assert_relative_eq!(l.wires[0].cross_section.width, 100e-6, max_relative = 1e-12);
        assert_eq!(l.wires[1].current, -1.0);
        let back = parse_layout(&serialize_layout(&l)).unwrap();
        assert_eq!(back, l);
    }

    #[test]
    fn parse_layout_rejects_bad_documents() {
        assert!(matches!(parse_layout("not json"), Err(GeometryError::Syntax(_))));
        let empty = r#"{"name": "x", "unit": "m", "wires": []}"#;
        assert!(matches!(parse_layout(empty), Err(GeometryError::Semantic { wire: None, .. })));
        let one_vertex =
            r#"{"name": "x", "unit": "m", "wires": [{"vertices": [[0,0,0]], "width": 1e-4, "depth": 1e-5, "current_A": 1}]}"#;
        assert!(matches!(
            parse_layout(one_vertex),
            Err(GeometryError::Semantic { wire: Some(0), .. })
        ));
        let zero_width =
            r#"{"name": "x", "unit": "m", "wires": [{"vertices": [[0,0,0],[1,0,0]], "width": 0, "depth": 1e-5, "current_A": 1}]}"#;
        assert!(matches!(
            parse_layout(zero_width),
            Err(GeometryError::Semantic { wire: Some(0), .. })
        ));
        let bad_unit =
            r#"{"name": "x", "unit": "ft", "wires": [{"vertices": [[0,0,0],[1,0,0]], "width": 1e-4, "depth": 1e-5, "current_A": 1}]}"#;
        assert!(matches!(parse_layout(bad_unit), Err(GeometryError::Semantic { wire: None, .. })));
    }

    #[test]
    fn contains_detects_conductor_interior() {
        let l = antiparallel_pair(100e-6, 15e-6, 88e-6, 4e-3, 1.0).unwrap();
        // Inside the +z wire: at its centroid.
        assert_eq!(l.contains(Point3::new(0.0, -7.5e-6, 94e-6)), Some(0));
        // Just above the surface over the wire: outside.
        assert_eq!(l.contains(Point3::new(0.0, 1e-6, 94e-6)), None);
        // Between the wires at wire depth: outside.
        assert_eq!(l.contains(Point3::new(0.0, -7.5e-6, 0.0)), None);
        // The ion position: outside.
        assert_eq!(l.contains(Point3::new(0.0, 125e-6, 0.0)), None);
    }
}
