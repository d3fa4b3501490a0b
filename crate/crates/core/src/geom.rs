//! Core vector/mesh types, rigid transforms, and global mesh measures:
//! area, signed volume, Euler characteristic and angle-defect curvature.

use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{MeshError, Result};

/// Default absolute tolerance for vertex welding. Generators emit exact
/// duplicates at seams, so exact matching after quantization suffices.
pub const DEFAULT_WELD_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

pub const fn vec3(x: f64, y: f64, z: f64) -> Vec3 {
    Vec3 { x, y, z }
}

impl Vec3 {
    pub const ZERO: Vec3 = vec3(0.0, 0.0, 0.0);

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        vec3(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Some(self * (1.0 / n))
        } else {
            None
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        vec3(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        vec3(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        vec3(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        vec3(-self.x, -self.y, -self.z)
    }
}

/// One triangle; counterclockwise vertex order defines the outward normal.
#[derive(Debug, Clone, Copy)]
pub struct Triangle {
    pub a: Vec3,
    pub b: Vec3,
    pub c: Vec3,
}

impl Triangle {
    pub fn area(&self) -> f64 {
        (self.b - self.a).cross(self.c - self.a).norm() * 0.5
    }

    /// Unit normal from winding, `None` for degenerate triangles.
    pub fn normal(&self) -> Option<Vec3> {
        (self.b - self.a).cross(self.c - self.a).normalized()
    }
}

/// Shared-vertex triangle soup with 0-based face indices; the universal
/// product of every generator in this crate.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IndexedMesh {
    pub vertices: Vec<Vec3>,
    pub faces: Vec<[usize; 3]>,
}

/// Rigid transform plus uniform scale.
#[derive(Debug, Clone, Copy)]
pub struct Transform {
    pub rotation: [[f64; 3]; 3],
    pub translation: Vec3,
    pub scale: f64,
}

impl Transform {
    pub fn identity() -> Self {
        Transform {
            rotation: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            translation: Vec3::ZERO,
            scale: 1.0,
        }
    }

    pub fn translation(t: Vec3) -> Self {
        Transform {
            translation: t,
            ..Self::identity()
        }
    }

    pub fn scaling(s: f64) -> Self {
        Transform {
            scale: s,
            ..Self::identity()
        }
    }

    pub fn rotation_z(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Transform {
            rotation: [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]],
            ..Self::identity()
        }
    }

    pub fn rotation_x(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Transform {
            rotation: [[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]],
            ..Self::identity()
        }
    }

    /// Rotation must be orthonormal within 1e-9 and scale positive.
    #[allow(clippy::needless_range_loop)]
    pub fn validate(&self) -> Result<()> {
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(MeshError::InvalidTransform(format!(
                "scale must be positive and finite, got {}",
                self.scale
            )));
        }
        let r = &self.rotation;
        for i in 0..3 {
            for j in 0..3 {
                let mut dot = 0.0;
                for k in 0..3 {
                    dot += r[k][i] * r[k][j];
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                if (dot - expect).abs() > 1e-9 {
                    return Err(MeshError::InvalidTransform(format!(
                        "rotation is not orthonormal: column dot ({i},{j}) = {dot}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, v: Vec3) -> Vec3 {
        let r = &self.rotation;
        let rv = vec3(
            r[0][0] * v.x + r[0][1] * v.y + r[0][2] * v.z,
            r[1][0] * v.x + r[1][1] * v.y + r[1][2] * v.z,
            r[2][0] * v.x + r[2][1] * v.y + r[2][2] * v.z,
        );
        rv * self.scale + self.translation
    }
}

impl IndexedMesh {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn triangle(&self, face: [usize; 3]) -> Triangle {
        Triangle {
            a: self.vertices[face[0]],
            b: self.vertices[face[1]],
            c: self.vertices[face[2]],
        }
    }

    pub fn check_indices(&self) -> Result<()> {
        for (fi, f) in self.faces.iter().enumerate() {
            for &i in f {
                if i >= self.vertices.len() {
                    return Err(MeshError::MalformedMesh(format!(
                        "face {fi} references vertex {i} but mesh has {} vertices",
                        self.vertices.len()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn check_finite(&self) -> Result<()> {
        for (i, v) in self.vertices.iter().enumerate() {
            if !v.is_finite() {
                return Err(MeshError::NonFinite(format!(
                    "vertex {i} = ({}, {}, {})",
                    v.x, v.y, v.z
                )));
            }
        }
        Ok(())
    }

    /// Mean of vertex positions.
    pub fn centroid(&self) -> Vec3 {
        if self.vertices.is_empty() {
            return Vec3::ZERO;
        }
        let mut c = Vec3::ZERO;
        for &v in &self.vertices {
            c = c + v;
        }
        c * (1.0 / self.vertices.len() as f64)
    }

    pub fn bounds(&self) -> Option<(Vec3, Vec3)> {
        let first = *self.vertices.first()?;
        let mut lo = first;
        let mut hi = first;
        for &v in &self.vertices {
            lo = vec3(lo.x.min(v.x), lo.y.min(v.y), lo.z.min(v.z));
            hi = vec3(hi.x.max(v.x), hi.y.max(v.y), hi.z.max(v.z));
        }
        Some((lo, hi))
    }

    /// Merge vertices that quantize to the same cell at absolute tolerance
    /// `tol`. Original coordinates (first occurrence) are kept; faces are
    /// remapped, face order is preserved, faces are not dropped.
    pub fn weld(&self, tol: f64) -> IndexedMesh {
        let mut map: HashMap<(i64, i64, i64), usize> = HashMap::new();
        let mut remap = Vec::with_capacity(self.vertices.len());
        let mut vertices = Vec::new();
        let inv = 1.0 / tol;
        for &v in &self.vertices {
            let key = (
                (v.x * inv).round() as i64,
                (v.y * inv).round() as i64,
                (v.z * inv).round() as i64,
            );
            let idx = *map.entry(key).or_insert_with(|| {
                vertices.push(v);
                vertices.len() - 1
            });
            remap.push(idx);
        }
        let faces = self
            .faces
            .iter()
            .map(|f| [remap[f[0]], remap[f[1]], remap[f[2]]])
            .collect();
        IndexedMesh { vertices, faces }
    }

    /// Drop faces with repeated indices or zero area.
    pub fn without_degenerate_faces(&self) -> IndexedMesh {
        let faces = self
            .faces
            .iter()
            .copied()
            .filter(|f| {
                f[0] != f[1] && f[1] != f[2] && f[0] != f[2] && self.triangle(*f).area() > 0.0
            })
            .collect();
        IndexedMesh {
            vertices: self.vertices.clone(),
            faces,
        }
    }

    pub fn apply_transform(&self, t: &Transform) -> Result<IndexedMesh> {
        t.validate()?;
        Ok(IndexedMesh {
            vertices: self.vertices.iter().map(|&v| t.apply(v)).collect(),
            faces: self.faces.clone(),
        })
    }

    /// Sum of per-face areas.
    pub fn surface_area(&self) -> Result<f64> {
        self.check_finite()?;
        Ok(self.faces.iter().map(|&f| self.triangle(f).area()).sum())
    }

    /// Divergence-theorem volume, positive for outward orientation.
    /// Meaningful only for closed, consistently oriented meshes.
    pub fn signed_volume(&self) -> f64 {
        self.faces
            .iter()
            .map(|&f| {
                let t = self.triangle(f);
                t.a.dot(t.b.cross(t.c)) / 6.0
            })
            .sum()
    }

    /// V - E + F over welded vertices. Requires every undirected edge to
    /// bound exactly two faces.
    pub fn euler_characteristic(&self) -> Result<i64> {
        let m = self.weld(DEFAULT_WELD_TOL).without_degenerate_faces();
        let edges = m.closed_edge_map()?;
        let mut used = vec![false; m.vertices.len()];
        for f in &m.faces {
            for &i in f {
                used[i] = true;
            }
        }
        let v = used.iter().filter(|&&u| u).count() as i64;
        Ok(v - edges.len() as i64 + m.faces.len() as i64)
    }

    /// Sum of angle defects normalized by 2 pi, so a sphere-like solid
    /// totals 2, matching the Euler characteristic.
    pub fn total_curvature(&self) -> Result<f64> {
        let m = self.weld(DEFAULT_WELD_TOL).without_degenerate_faces();
        m.closed_edge_map()?;
        let mut angle_sum = vec![0.0f64; m.vertices.len()];
        let mut used = vec![false; m.vertices.len()];
        for f in &m.faces {
            for k in 0..3 {
                let a = m.vertices[f[k]];
                let b = m.vertices[f[(k + 1) % 3]];
                let c = m.vertices[f[(k + 2) % 3]];
                let u = b - a;
                let w = c - a;
                angle_sum[f[k]] += u.cross(w).norm().atan2(u.dot(w));
                used[f[k]] = true;
            }
        }
        let two_pi = 2.0 * std::f64::consts::PI;
        let mut total = 0.0;
        for i in 0..m.vertices.len() {
            if used[i] {
                total += (two_pi - angle_sum[i]) / two_pi;
            }
        }
        Ok(total)
    }

    /// Undirected edge map, erroring on boundary or non-manifold edges.
    fn closed_edge_map(&self) -> Result<HashMap<(usize, usize), u32>> {
        let mut edges: HashMap<(usize, usize), u32> = HashMap::new();
        for f in &self.faces {
            for k in 0..3 {
                let a = f[k];
                let b = f[(k + 1) % 3];
                let key = (a.min(b), a.max(b));
                *edges.entry(key).or_insert(0) += 1;
            }
        }
        for (&(a, b), &count) in &edges {
            if count != 2 {
                return Err(MeshError::Topology(format!(
                    "edge ({a}, {b}) bounds {count} faces, expected 2"
                )));
            }
        }
        Ok(edges)
    }
}

/// Concatenate meshes with re-offset face indices; no welding.
pub fn merge(meshes: &[IndexedMesh]) -> Result<IndexedMesh> {
    let mut out = IndexedMesh::empty();
    for (i, m) in meshes.iter().enumerate() {
        m.check_indices()
            .map_err(|e| MeshError::MalformedMesh(format!("input {i}: {e}")))?;
        let offset = out.vertices.len();
        out.vertices.extend_from_slice(&m.vertices);
        out.faces
            .extend(m.faces.iter().map(|f| [f[0] + offset, f[1] + offset, f[2] + offset]));
    }
    Ok(out)
}

/// Axis-aligned unit cube [0,1]^3 as 12 outward-oriented triangles.
pub fn unit_cube() -> IndexedMesh {
    cuboid(Vec3::ZERO, vec3(1.0, 1.0, 1.0))
}

/// Axis-aligned box given by min corner and extents, outward orientation.
pub fn cuboid(min: Vec3, size: Vec3) -> IndexedMesh {
    let p = |dx: f64, dy: f64, dz: f64| {
        vec3(min.x + dx * size.x, min.y + dy * size.y, min.z + dz * size.z)
    };
    let vertices = vec![
        p(0.0, 0.0, 0.0),
        p(1.0, 0.0, 0.0),
        p(1.0, 1.0, 0.0),
        p(0.0, 1.0, 0.0),
        p(0.0, 0.0, 1.0),
        p(1.0, 0.0, 1.0),
        p(1.0, 1.0, 1.0),
        p(0.0, 1.0, 1.0),
    ];
    let faces = vec![
        [0, 2, 1],
        [0, 3, 2], // bottom
        [4, 5, 6],
        [4, 6, 7], // top
        [0, 1, 5],
        [0, 5, 4], // front
        [1, 2, 6],
        [1, 6, 5], // right
        [2, 3, 7],
        [2, 7, 6], // back
        [3, 0, 4],
        [3, 4, 7], // left
    ];
    IndexedMesh { vertices, faces }
}
