//! Geometry of Y-space.
//!
//! Pure qubit states map to points `Y` of the unit hypercube. The sharing
//! inequalities `Y_j <= sum_{k != j} Y_k` cut out the inhabitable polytope.
//! This module holds membership tests, exact volumes, fixed-total
//! cross-sections (the additivity `A(Y_T)`), and the N = 3 face labelling.

use num_rational::Ratio;
use rand::Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::tolerances;

const SQRT3_OVER_2: f64 = 0.866_025_403_784_438_6;

/// Point of the unit hypercube.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct YVector(Vec<f64>);

impl YVector {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParameter("Y vector must be non-empty".into()));
        }
        for &y in &components {
            if !(0.0..=1.0).contains(&y) {
                return Err(Error::OutOfRange {
                    value: y,
                    min: 0.0,
                    max: 1.0,
                });
            }
        }
        Ok(Self(components))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// `m_j = sum_{k != j} Y_k - Y_j`.
pub fn inequality_margins(y: &[f64]) -> Vec<f64> {
    let total: f64 = y.iter().sum();
    y.iter().map(|&yj| (total - yj) - yj).collect()
}

/// Smallest sharing margin; `+inf` for an empty vector.
pub fn min_margin(y: &[f64]) -> f64 {
    inequality_margins(y).into_iter().fold(f64::INFINITY, f64::min)
}

pub fn is_inhabitable(y: &[f64], tol: f64) -> bool {
    min_margin(y) >= -tol
}

/// `n!` for `n <= 20`.
pub fn factorial(n: usize) -> Result<u64> {
    if n > tolerances::MAX_EXACT_N {
        return Err(Error::Overflow(tolerances::MAX_EXACT_N));
    }
    Ok((1..=n as u64).product())
}

fn check_n(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::InvalidParameter(format!("N must be at least {min}, got {n}")));
    }
    if n > tolerances::MAX_EXACT_N {
        return Err(Error::Overflow(tolerances::MAX_EXACT_N));
    }
    Ok(())
}

/// Volume `1/N!` of the corner simplex cut off by one sharing inequality.
pub fn excluded_simplex_volume(n: usize) -> Result<Ratio<u64>> {
    check_n(n, 1)?;
    Ok(Ratio::new(1, factorial(n)?))
}

/// Inhabitable volume `V_N = 1 - 1/(N-1)!`.
pub fn inhabitable_volume(n: usize) -> Result<Ratio<u64>> {
    check_n(n, 2)?;
    let f = factorial(n - 1)?;
    Ok(Ratio::new(f - 1, f))
}

pub fn ratio_to_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub standard_error: f64,
    pub samples: u64,
}

const VOLUME_BLOCK: u64 = 1 << 16;

/// Fraction of uniform hypercube points passing [`is_inhabitable`].
///
/// Work is split into fixed-size blocks, each drawing from `rng.split(block)`,
/// so the estimate is independent of thread count.
pub fn polytope_volume_mc(n: usize, samples: u64, rng: &RngStream) -> Result<McEstimate> {
    if n < 2 {
        return Err(Error::InvalidParameter("N must be at least 2".into()));
    }
    if samples < 1000 {
        return Err(Error::InvalidParameter("at least 1000 samples required".into()));
    }
    let blocks = samples.div_ceil(VOLUME_BLOCK);
    let hits: u64 = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut stream = rng.split(b);
            let count = VOLUME_BLOCK.min(samples - b * VOLUME_BLOCK);
            let mut y = vec![0.0; n];
            let mut hits = 0u64;
            for _ in 0..count {
                y.iter_mut().for_each(|v| *v = stream.random::<f64>());
                if is_inhabitable(&y, tolerances::MEMBERSHIP) {
                    hits += 1;
                }
            }
            hits
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    let p = hits as f64 / samples as f64;
    Ok(McEstimate {
        estimate: p,
        standard_error: (p * (1.0 - p) / samples as f64).sqrt(),
        samples,
    })
}

fn check_total(n: usize, y_total: f64) -> Result<()> {
    let max = n as f64;
    if !(0.0..=max).contains(&y_total) {
        return Err(Error::OutOfRange {
            value: y_total,
            min: 0.0,
            max,
        });
    }
    Ok(())
}

/// Closed-form three-qubit additivity: the area of the inhabitable
/// cross-section at total `Y_T`.
pub fn additivity_n3(y_total: f64) -> Result<f64> {
    check_total(3, y_total)?;
    Ok(if y_total <= 2.0 {
        SQRT3_OVER_2 * y_total * y_total / 4.0
    } else {
        SQRT3_OVER_2 * (3.0 - y_total).powi(2)
    })
}

/// Hyperarea of `{Y in [0,1]^N : sum Y = Y_T}`, i.e. `sqrt(N)` times the
/// Irwin-Hall density at `Y_T`.
pub fn cube_slice_hyperarea(n: usize, y_total: f64) -> Result<f64> {
    check_n(n, 2)?;
    check_total(n, y_total)?;
    let nf = n as f64;
    // Reflect so both halves take the same arithmetic path.
    let t = y_total.min(nf - y_total);
    let inv_fact = 1.0 / factorial(n - 1)? as f64;
    let mut sum = 0.0;
    let mut binom = 1.0;
    for k in 0..=(t.floor() as usize).min(n) {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * binom * (t - k as f64).powi(n as i32 - 1) * inv_fact;
        binom = binom * (n - k) as f64 / (k + 1) as f64;
    }
    Ok(nf.sqrt() * sum.max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossSectionMethod {
    Exact,
    MonteCarlo,
}

/// Inhabitable cross-section at fixed total `Y_T`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossSection {
    pub n: usize,
    pub y_total: f64,
    pub hyperarea: f64,
    pub method: CrossSectionMethod,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub standard_error: Option<f64>,
    /// Fraction of simplex draws that landed inside the cube.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub acceptance_rate: Option<f64>,
}

impl CrossSection {
    pub fn exact_n3(y_total: f64) -> Result<Self> {
        Ok(Self {
            n: 3,
            y_total,
            hyperarea: additivity_n3(y_total)?,
            method: CrossSectionMethod::Exact,
            sample_count: None,
            standard_error: None,
            acceptance_rate: None,
        })
    }
}

const SLICE_BLOCK: u64 = 1 << 14;
const MIN_ACCEPTANCE: f64 = 1e-4;

struct SliceBlock {
    accepted: u64,
    attempts: u64,
    inside: u64,
}

fn slice_block(n: usize, y_total: f64, want: u64, mut stream: RngStream) -> Result<SliceBlock> {
    // Every block gets the same attempt budget, so a degenerate slice is
    // detected identically regardless of scheduling.
    let budget = ((want as f64 / MIN_ACCEPTANCE).ceil() as u64).max(10_000);
    let mut y = vec![0.0; n];
    let mut out = SliceBlock {
        accepted: 0,
        attempts: 0,
        inside: 0,
    };
    while out.accepted < want {
        if out.attempts >= budget {
            return Err(Error::DegenerateSlice(out.accepted as f64 / out.attempts as f64));
        }
        out.attempts += 1;
        let mut sum = 0.0;
        for v in y.iter_mut() {
            *v = Exp1.sample(&mut stream);
            sum += *v;
        }
        let scale = y_total / sum;
        let mut in_cube = true;
        for v in y.iter_mut() {
            *v *= scale;
            in_cube &= *v <= 1.0;
        }
        if !in_cube {
            continue;
        }
        out.accepted += 1;
        if is_inhabitable(&y, tolerances::MEMBERSHIP) {
            out.inside += 1;
        }
    }
    Ok(out)
}

/// Monte Carlo hyperarea of the inhabitable cross-section at `Y_T`.
///
/// Points are drawn uniformly on the simplex `{sum Y = Y_T, Y >= 0}`, those
/// leaving the cube are rejected, and the inhabitable fraction of the rest
/// scales [`cube_slice_hyperarea`]. `samples` counts accepted points.
pub fn additivity_mc(n: usize, y_total: f64, samples: u64, rng: &RngStream) -> Result<CrossSection> {
    check_n(n, 3)?;
    let nf = n as f64;
    if !(y_total > 0.0 && y_total < nf) {
        return Err(Error::OutOfRange {
            value: y_total,
            min: 0.0,
            max: nf,
        });
    }
    if samples < 1000 {
        return Err(Error::InvalidParameter("at least 1000 samples required".into()));
    }
    let blocks = samples.div_ceil(SLICE_BLOCK);
    let parts = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let want = SLICE_BLOCK.min(samples - b * SLICE_BLOCK);
            slice_block(n, y_total, want, rng.split(b))
        })
        .collect::<Result<Vec<_>>>()?;
    let (accepted, attempts, inside) = parts.iter().fold((0, 0, 0), |acc, p| {
        (acc.0 + p.accepted, acc.1 + p.attempts, acc.2 + p.inside)
    });
    let acceptance = accepted as f64 / attempts as f64;
    if acceptance < MIN_ACCEPTANCE {
        return Err(Error::DegenerateSlice(acceptance));
    }
    let area = cube_slice_hyperarea(n, y_total)?;
    let p = inside as f64 / accepted as f64;
    Ok(CrossSection {
        n,
        y_total,
        hyperarea: area * p,
        method: CrossSectionMethod::MonteCarlo,
        sample_count: Some(accepted),
        standard_error: Some(area * (p * (1.0 - p) / accepted as f64).sqrt()),
        acceptance_rate: Some(acceptance),
    })
}

/// Y vector of the three-qubit GHZ family: every component `1 - |cos 2 theta|`.
pub fn ghz_locus(theta: f64) -> [f64; 3] {
    let y = (1.0 - (2.0 * theta).cos().abs()).clamp(0.0, 1.0);
    [y; 3]
}

pub const VERTEX_O: [f64; 3] = [0.0, 0.0, 0.0];
pub const VERTEX_A: [f64; 3] = [1.0, 1.0, 0.0];
pub const VERTEX_B: [f64; 3] = [1.0, 0.0, 1.0];
pub const VERTEX_C: [f64; 3] = [0.0, 1.0, 1.0];
pub const VERTEX_E: [f64; 3] = [1.0, 1.0, 1.0];

/// Location of a three-qubit Y vector relative to the polyhedron OABCE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Face {
    Interior,
    /// `Y_1 = Y_2 + Y_3`.
    FaceOab,
    /// `Y_3 = Y_1 + Y_2`.
    FaceObc,
    /// `Y_2 = Y_1 + Y_3`.
    FaceOca,
    /// `Y_T = 2`, the shared base of the two tetrahedra.
    TriangleAbc,
    Vertex(Vertex),
    Exterior,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Vertex {
    O,
    A,
    B,
    C,
    E,
}

impl Face {
    /// True for the four faces of the regular tetrahedron OABC and its vertices.
    pub fn on_tetrahedron_surface(self) -> bool {
        !matches!(self, Face::Interior | Face::Exterior | Face::Vertex(Vertex::E))
    }

    pub fn label(self) -> &'static str {
        match self {
            Face::Interior => "interior",
            Face::FaceOab => "face_OAB",
            Face::FaceObc => "face_OBC",
            Face::FaceOca => "face_OCA",
            Face::TriangleAbc => "triangle_ABC",
            Face::Vertex(Vertex::O) => "vertex_O",
            Face::Vertex(Vertex::A) => "vertex_A",
            Face::Vertex(Vertex::B) => "vertex_B",
            Face::Vertex(Vertex::C) => "vertex_C",
            Face::Vertex(Vertex::E) => "vertex_E",
            Face::Exterior => "exterior",
        }
    }
}

fn near(y: &[f64; 3], v: &[f64; 3], tol: f64) -> bool {
    y.iter().zip(v).all(|(a, b)| (a - b).abs() <= tol)
}

/// Classify a three-qubit Y vector. Vertices are checked first, then the
/// base triangle ABC, then the margin-equality faces. A point on an edge
/// shared by two O-faces reports the first in the order OAB, OCA, OBC.
pub fn classify_face(y: &[f64; 3], tol: f64) -> Face {
    for (v, tag) in [
        (VERTEX_O, Vertex::O),
        (VERTEX_A, Vertex::A),
        (VERTEX_B, Vertex::B),
        (VERTEX_C, Vertex::C),
        (VERTEX_E, Vertex::E),
    ] {
        if near(y, &v, tol) {
            return Face::Vertex(tag);
        }
    }
    let m = inequality_margins(y);
    if m.iter().any(|&x| x < -tol) || y.iter().any(|&v| !(-tol..=1.0 + tol).contains(&v)) {
        return Face::Exterior;
    }
    let total: f64 = y.iter().sum();
    if (total - 2.0).abs() <= tol {
        return Face::TriangleAbc;
    }
    if m[0].abs() <= tol {
        Face::FaceOab
    } else if m[1].abs() <= tol {
        Face::FaceOca
    } else if m[2].abs() <= tol {
        Face::FaceObc
    } else {
        Face::Interior
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeshVertex {
    pub name: String,
    pub coords: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeshFace {
    pub name: String,
    pub vertices: [String; 3],
    /// Indices into the vertex list, counter-clockwise seen from outside.
    pub indices: [usize; 3],
}

/// Boundary mesh of the three-qubit inhabitable polyhedron OABCE.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolytopeMesh {
    pub vertices: Vec<MeshVertex>,
    pub faces: Vec<MeshFace>,
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

impl PolytopeMesh {
    pub fn oabce() -> Self {
        let named = [
            ("O", VERTEX_O),
            ("A", VERTEX_A),
            ("B", VERTEX_B),
            ("C", VERTEX_C),
            ("E", VERTEX_E),
        ];
        let vertices: Vec<MeshVertex> = named
            .iter()
            .map(|&(name, coords)| MeshVertex {
                name: name.to_string(),
                coords,
            })
            .collect();
        let centroid = {
            let mut c = [0.0; 3];
            for v in &vertices {
                for (ci, vi) in c.iter_mut().zip(v.coords) {
                    *ci += vi / vertices.len() as f64;
                }
            }
            c
        };
        let faces = [
            [0, 1, 2],
            [0, 2, 3],
            [0, 3, 1],
            [1, 2, 4],
            [2, 3, 4],
            [3, 1, 4],
        ]
        .into_iter()
        .map(|[a, b, c]| {
            let (pa, pb, pc) = (vertices[a].coords, vertices[b].coords, vertices[c].coords);
            let normal = cross(sub(pb, pa), sub(pc, pa));
            let outward = dot(normal, sub(pa, centroid)) > 0.0;
            let indices = if outward { [a, b, c] } else { [a, c, b] };
            let names = [a, b, c].map(|i| vertices[i].name.clone());
            MeshFace {
                name: names.concat(),
                vertices: indices.map(|i| vertices[i].name.clone()),
                indices,
            }
        })
        .collect();
        Self { vertices, faces }
    }

    pub fn vertex(&self, name: &str) -> Option<[f64; 3]> {
        self.vertices.iter().find(|v| v.name == name).map(|v| v.coords)
    }
}
