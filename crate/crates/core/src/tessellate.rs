//! Mesh generators: parametric patches, offset-shell thickening, swept
//! tubes, surfaces of revolution, polyhedra and voxel layers.

use std::f64::consts::PI;

use crate::error::{MeshError, Result};
use crate::geom::{cuboid, merge, vec3, IndexedMesh, Vec3, DEFAULT_WELD_TOL};
use crate::orient::unify_orientation;

/// Seam behavior of a parametric patch domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Seam {
    Open,
    UPeriodic,
    VPeriodic,
    /// u wraps onto itself with the v axis reversed (Moebius-style band).
    /// Thickening traverses the doubled u period so the two offsets join
    /// into one closed orientable surface.
    UPeriodicFlipped,
}

/// A map (u,v) -> R^3 with domain, grid resolution and seam metadata.
pub struct ParametricPatch {
    map: Box<dyn Fn(f64, f64) -> Vec3 + Sync>,
    pub u_range: (f64, f64),
    pub v_range: (f64, f64),
    pub nu: usize,
    pub nv: usize,
    pub seam: Seam,
}

impl ParametricPatch {
    pub fn new(
        map: impl Fn(f64, f64) -> Vec3 + Sync + 'static,
        u_range: (f64, f64),
        v_range: (f64, f64),
        nu: usize,
        nv: usize,
        seam: Seam,
    ) -> Result<Self> {
        if nu < 2 || nv < 2 {
            return Err(MeshError::Parameter(format!(
                "patch resolution must be at least 2x2, got {nu}x{nv}"
            )));
        }
        Ok(ParametricPatch {
            map: Box::new(map),
            u_range,
            v_range,
            nu,
            nv,
            seam,
        })
    }

    pub fn eval(&self, u: f64, v: f64) -> Vec3 {
        (self.map)(u, v)
    }
}

/// Ordered point chain in space.
#[derive(Debug, Clone)]
pub struct Polyline3 {
    pub points: Vec<Vec3>,
    pub closed: bool,
}

impl Polyline3 {
    pub fn new(points: Vec<Vec3>, closed: bool) -> Result<Self> {
        if points.len() < 2 {
            return Err(MeshError::Path(format!(
                "polyline needs at least 2 points, got {}",
                points.len()
            )));
        }
        let n = points.len();
        let pairs = if closed { n } else { n - 1 };
        for i in 0..pairs {
            let a = points[i];
            let b = points[(i + 1) % n];
            if (b - a).norm() < 1e-12 {
                return Err(MeshError::Path(format!(
                    "coincident consecutive points at index {i}"
                )));
            }
            if !a.is_finite() {
                return Err(MeshError::Path(format!("non-finite point at index {i}")));
            }
        }
        Ok(Polyline3 { points, closed })
    }

    pub fn length(&self) -> f64 {
        let n = self.points.len();
        let pairs = if self.closed { n } else { n - 1 };
        (0..pairs)
            .map(|i| (self.points[(i + 1) % n] - self.points[i]).norm())
            .sum()
    }
}

/// Curve in the (r, z) half-plane, r >= 0, revolved about the z axis.
#[derive(Debug, Clone)]
pub struct Profile2 {
    pub points: Vec<(f64, f64)>,
}

impl Profile2 {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(MeshError::Profile("profile needs at least 2 points".into()));
        }
        for (i, &(r, z)) in points.iter().enumerate() {
            if r < 0.0 {
                return Err(MeshError::Profile(format!(
                    "negative radius {r} at profile point {i}"
                )));
            }
            if !r.is_finite() || !z.is_finite() {
                return Err(MeshError::Profile(format!(
                    "non-finite profile point {i}"
                )));
            }
        }
        Ok(Profile2 { points })
    }
}

/// Stack of 0/1 occupancy matrices, bottom-up, one cube per 1-cell.
#[derive(Debug, Clone)]
pub struct VoxelLayers {
    pub layers: Vec<Vec<Vec<u8>>>,
    pub cell: f64,
}

impl VoxelLayers {
    pub fn new(layers: Vec<Vec<Vec<u8>>>, cell: f64) -> Result<Self> {
        if !(cell.is_finite() && cell > 0.0) {
            return Err(MeshError::Parameter("cell size must be positive".into()));
        }
        for (k, layer) in layers.iter().enumerate() {
            for (i, row) in layer.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    if v > 1 {
                        return Err(MeshError::Input(format!(
                            "non-binary voxel entry {v} at layer {k}, row {i}, col {j}"
                        )));
                    }
                }
            }
        }
        Ok(VoxelLayers { layers, cell })
    }

    fn occupied(&self, i: i64, j: i64, k: i64) -> bool {
        if k < 0 || k as usize >= self.layers.len() {
            return false;
        }
        let layer = &self.layers[k as usize];
        if i < 0 || i as usize >= layer.len() {
            return false;
        }
        let row = &layer[i as usize];
        j >= 0 && (j as usize) < row.len() && row[j as usize] == 1
    }
}

fn quantize(v: Vec3, tol: f64) -> (i64, i64, i64) {
    let inv = 1.0 / tol;
    (
        (v.x * inv).round() as i64,
        (v.y * inv).round() as i64,
        (v.z * inv).round() as i64,
    )
}

fn grid_params(range: (f64, f64), n: usize, i: usize) -> f64 {
    range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64
}

/// Sample a patch into a vertex grid in row-major u-then-v order.
/// Degenerate triangles (corners welding together, e.g. at collapsed
/// poles) are culled.
pub fn sample_patch(patch: &ParametricPatch) -> Result<IndexedMesh> {
    let (nu, nv) = (patch.nu, patch.nv);
    let mut vertices = Vec::with_capacity(nu * nv);
    for iu in 0..nu {
        let u = grid_params(patch.u_range, nu, iu);
        for iv in 0..nv {
            let v = grid_params(patch.v_range, nv, iv);
            let p = patch.eval(u, v);
            if !p.is_finite() {
                return Err(MeshError::Generation(format!(
                    "non-finite patch value at (u, v) = ({u}, {v})"
                )));
            }
            vertices.push(p);
        }
    }
    let faces = grid_faces(&vertices, nu, nv);
    Ok(IndexedMesh { vertices, faces })
}

/// Two triangles per grid cell, culling cells whose corners coincide
/// within the weld tolerance.
fn grid_faces(vertices: &[Vec3], nu: usize, nv: usize) -> Vec<[usize; 3]> {
    let mut faces = Vec::with_capacity(2 * (nu - 1) * (nv - 1));
    let idx = |iu: usize, iv: usize| iu * nv + iv;
    let mut push = |a: usize, b: usize, c: usize| {
        let ka = quantize(vertices[a], DEFAULT_WELD_TOL);
        let kb = quantize(vertices[b], DEFAULT_WELD_TOL);
        let kc = quantize(vertices[c], DEFAULT_WELD_TOL);
        if ka != kb && kb != kc && ka != kc {
            faces.push([a, b, c]);
        }
    };
    for iu in 0..nu - 1 {
        for iv in 0..nv - 1 {
            push(idx(iu, iv), idx(iu + 1, iv), idx(iu + 1, iv + 1));
            push(idx(iu, iv), idx(iu + 1, iv + 1), idx(iu, iv + 1));
        }
    }
    faces
}

/// Angle-weighted vertex normals of a welded mesh.
fn vertex_normals(mesh: &IndexedMesh) -> Result<Vec<Vec3>> {
    let mut normals = vec![Vec3::ZERO; mesh.vertices.len()];
    for f in &mesh.faces {
        let t = mesh.triangle(*f);
        if let Some(n) = t.normal() {
            for k in 0..3 {
                let a = mesh.vertices[f[k]];
                let b = mesh.vertices[f[(k + 1) % 3]];
                let c = mesh.vertices[f[(k + 2) % 3]];
                let u = b - a;
                let w = c - a;
                let angle = u.cross(w).norm().atan2(u.dot(w));
                normals[f[k]] = normals[f[k]] + n * angle;
            }
        }
    }
    let mut out = vec![Vec3::ZERO; normals.len()];
    let mut missing = Vec::new();
    for (i, n) in normals.iter().enumerate() {
        match n.normalized() {
            Some(u) => out[i] = u,
            None => missing.push(i),
        }
    }
    if !missing.is_empty() {
        // borrow direction from welded neighbors for isolated degeneracies
        let mut neighbor: Vec<Vec<usize>> = vec![Vec::new(); out.len()];
        for f in &mesh.faces {
            for k in 0..3 {
                neighbor[f[k]].push(f[(k + 1) % 3]);
                neighbor[f[k]].push(f[(k + 2) % 3]);
            }
        }
        for &i in &missing {
            let mut acc = Vec3::ZERO;
            for &j in &neighbor[i] {
                acc = acc + out[j];
            }
            match acc.normalized() {
                Some(u) => out[i] = u,
                None => {
                    let v = mesh.vertices[i];
                    return Err(MeshError::Generation(format!(
                        "vanishing surface normal at ({}, {}, {})",
                        v.x, v.y, v.z
                    )));
                }
            }
        }
    }
    Ok(out)
}

/// Thicken a patch into a closed printable shell of the given thickness.
pub fn thicken(patch: &ParametricPatch, thickness: f64) -> Result<IndexedMesh> {
    if !(thickness.is_finite() && thickness > 0.0) {
        return Err(MeshError::Parameter(format!(
            "thickness must be positive, got {thickness}"
        )));
    }
    let shell = if patch.seam == Seam::UPeriodicFlipped {
        thicken_flipped(patch, thickness)?
    } else {
        thicken_two_sided(patch, thickness)?
    };
    let welded = shell.weld(DEFAULT_WELD_TOL).without_degenerate_faces();
    // consistency only: a shell over a closed base has a genuinely inner
    // surface that must keep its inward orientation
    let (mut oriented, _) = crate::orient::unify_consistency(&welded);
    if oriented.signed_volume() < 0.0 {
        for f in &mut oriented.faces {
            f.swap(1, 2);
        }
    }
    Ok(oriented)
}

/// Outer offset + reversed inner offset + rim walls along open boundaries.
fn thicken_two_sided(patch: &ParametricPatch, thickness: f64) -> Result<IndexedMesh> {
    let base = sample_patch(patch)?
        .weld(DEFAULT_WELD_TOL)
        .without_degenerate_faces();
    let normals = vertex_normals(&base)?;
    let h = thickness * 0.5;
    let n_base = base.vertices.len();

    let mut out = IndexedMesh::empty();
    for (i, &v) in base.vertices.iter().enumerate() {
        out.vertices.push(v + normals[i] * h);
    }
    for (i, &v) in base.vertices.iter().enumerate() {
        out.vertices.push(v - normals[i] * h);
        let _ = i;
    }
    for f in &base.faces {
        out.faces.push(*f);
        out.faces.push([f[0] + n_base, f[2] + n_base, f[1] + n_base]);
    }

    // rim walls along boundary edges (directed edges used by one face only)
    let edge_map = crate::orient::edge_faces(&base);
    for f in &base.faces {
        for k in 0..3 {
            let a = f[k];
            let b = f[(k + 1) % 3];
            if edge_map[&(a.min(b), a.max(b))].len() == 1 {
                out.faces.push([a, b, b + n_base]);
                out.faces.push([a, b + n_base, a + n_base]);
            }
        }
    }
    Ok(out)
}

/// Moebius-style thickening: one offset surface over the doubled u period
/// plus a single rim strip joining the boundary rows half a period apart.
fn thicken_flipped(patch: &ParametricPatch, thickness: f64) -> Result<IndexedMesh> {
    let (u0, u1) = patch.u_range;
    let period = u1 - u0;
    let nu2 = 2 * (patch.nu - 1) + 1;
    let nv = patch.nv;
    let h = thickness * 0.5;
    let eps_u = period * 1e-6;
    let eps_v = (patch.v_range.1 - patch.v_range.0) * 1e-6;

    let mut vertices = Vec::with_capacity(nu2 * nv);
    let mut scale = 0.0f64;
    for iu in 0..nu2 {
        let u = u0 + 2.0 * period * iu as f64 / (nu2 - 1) as f64;
        for iv in 0..nv {
            let v = grid_params(patch.v_range, nv, iv);
            let p = patch.eval(u, v);
            if !p.is_finite() {
                return Err(MeshError::Generation(format!(
                    "non-finite patch value at (u, v) = ({u}, {v})"
                )));
            }
            scale = scale.max(p.norm());
            let du = (patch.eval(u + eps_u, v) - patch.eval(u - eps_u, v)) * (0.5 / eps_u);
            let dv = (patch.eval(u, v + eps_v) - patch.eval(u, v - eps_v)) * (0.5 / eps_v);
            let n = du.cross(dv).normalized().ok_or_else(|| {
                MeshError::Generation(format!("vanishing normal at (u, v) = ({u}, {v})"))
            })?;
            vertices.push(p + n * h);
        }
    }

    let idx = |iu: usize, iv: usize| iu * nv + iv;
    let mut faces = grid_faces(&vertices, nu2, nv);

    // rim strip: boundary row v_max joined to row v_min shifted by one
    // original period (the two sides of the same physical rim)
    let shift = patch.nu - 1;
    let wrap = nu2 - 1;
    for i in 0..wrap {
        let t0 = idx(i, nv - 1);
        let t1 = idx(i + 1, nv - 1);
        let b0 = idx((i + shift) % wrap, 0);
        let b1 = idx((i + 1 + shift) % wrap, 0);
        faces.push([t0, t1, b1]);
        faces.push([t0, b1, b0]);
    }
    Ok(IndexedMesh { vertices, faces })
}

/// Sweep a regular polygon along a path using a rotation-minimizing frame
/// (double-reflection transport). Closed paths close the ring loop; open
/// paths get flat end caps. The result is watertight by construction.
pub fn tube(path: &Polyline3, radius: f64, sides: usize) -> Result<IndexedMesh> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(MeshError::Parameter(format!(
            "tube radius must be positive, got {radius}"
        )));
    }
    if sides < 3 {
        return Err(MeshError::Parameter(format!(
            "tube needs at least 3 sides, got {sides}"
        )));
    }
    let pts = &path.points;
    let n = pts.len();
    let seg = |i: usize| (pts[(i + 1) % n] - pts[i]).normalized().unwrap();

    // per-point tangents
    let mut tangents = Vec::with_capacity(n);
    for i in 0..n {
        let t = if path.closed {
            (seg((i + n - 1) % n) + seg(i)).normalized().unwrap_or(seg(i))
        } else if i == 0 {
            seg(0)
        } else if i == n - 1 {
            seg(n - 2)
        } else {
            (seg(i - 1) + seg(i)).normalized().unwrap_or(seg(i))
        };
        tangents.push(t);
    }

    // initial frame vector: least-aligned axis, orthogonalized
    let t0 = tangents[0];
    let axis = [vec3(1.0, 0.0, 0.0), vec3(0.0, 1.0, 0.0), vec3(0.0, 0.0, 1.0)]
        .into_iter()
        .min_by(|a, b| {
            a.dot(t0)
                .abs()
                .partial_cmp(&b.dot(t0).abs())
                .unwrap()
        })
        .unwrap();
    let r0 = (axis - t0 * axis.dot(t0)).normalized().unwrap();

    // double-reflection transport of the frame along the path
    let steps = if path.closed { n } else { n - 1 };
    let mut frames = Vec::with_capacity(n + 1);
    frames.push(r0);
    let mut r = r0;
    for i in 0..steps {
        let p0 = pts[i];
        let p1 = pts[(i + 1) % n];
        let t_i = tangents[i];
        let t_next = tangents[(i + 1) % n];
        let v1 = p1 - p0;
        let c1 = v1.dot(v1);
        let rl = r - v1 * (2.0 / c1 * v1.dot(r));
        let tl = t_i - v1 * (2.0 / c1 * v1.dot(t_i));
        let v2 = t_next - tl;
        let c2 = v2.dot(v2);
        r = if c2 > 1e-24 {
            rl - v2 * (2.0 / c2 * v2.dot(rl))
        } else {
            rl
        };
        r = (r - t_next * r.dot(t_next)).normalized().unwrap();
        frames.push(r);
    }

    // closed paths: distribute the closure mismatch so ring n meets ring 0
    let mut twist = vec![0.0; n];
    if path.closed {
        let r_end = frames[n];
        let s0 = t0.cross(r0);
        let angle = r_end.dot(s0).atan2(r_end.dot(r0));
        for (i, tw) in twist.iter_mut().enumerate() {
            *tw = -angle * i as f64 / n as f64;
        }
    }

    let mut mesh = IndexedMesh::empty();
    for i in 0..n {
        let t = tangents[i];
        let rv = frames[i];
        let sv = t.cross(rv);
        for k in 0..sides {
            let theta = 2.0 * PI * k as f64 / sides as f64 + twist[i];
            let (s, c) = theta.sin_cos();
            mesh.vertices.push(pts[i] + (rv * c + sv * s) * radius);
        }
    }
    let ring = |i: usize, k: usize| i * sides + (k % sides);
    let rings = if path.closed { n } else { n - 1 };
    for i in 0..rings {
        let j = (i + 1) % n;
        for k in 0..sides {
            mesh.faces.push([ring(i, k), ring(j, k), ring(j, k + 1)]);
            mesh.faces.push([ring(i, k), ring(j, k + 1), ring(i, k + 1)]);
        }
    }
    if !path.closed {
        let c_start = mesh.vertices.len();
        mesh.vertices.push(pts[0]);
        let c_end = mesh.vertices.len();
        mesh.vertices.push(pts[n - 1]);
        for k in 0..sides {
            mesh.faces.push([c_start, ring(0, k + 1), ring(0, k)]);
            mesh.faces.push([c_end, ring(n - 1, k), ring(n - 1, k + 1)]);
        }
    }
    let (oriented, _) = unify_orientation(&mesh.weld(DEFAULT_WELD_TOL));
    Ok(oriented)
}

/// Revolve an (r, z) profile about the z axis in `segments` steps.
/// Points with r = 0 collapse to single axis vertices. A closed profile
/// traversed counterclockwise in the (r, z) half-plane (r right, z up)
/// yields outward normals and positive enclosed volume.
pub fn revolve(profile: &Profile2, segments: usize) -> Result<IndexedMesh> {
    if segments < 3 {
        return Err(MeshError::Parameter(format!(
            "revolve needs at least 3 segments, got {segments}"
        )));
    }
    const AXIS_TOL: f64 = 1e-12;
    let mut mesh = IndexedMesh::empty();
    // row start index and whether the row is an axis point
    let mut rows = Vec::new();
    for &(r, z) in &profile.points {
        let start = mesh.vertices.len();
        if r < AXIS_TOL {
            mesh.vertices.push(vec3(0.0, 0.0, z));
            rows.push((start, true));
        } else {
            for k in 0..segments {
                let theta = 2.0 * PI * k as f64 / segments as f64;
                let (s, c) = theta.sin_cos();
                mesh.vertices.push(vec3(r * c, r * s, z));
            }
            rows.push((start, false));
        }
    }
    for j in 0..rows.len() - 1 {
        let (a0, a_axis) = rows[j];
        let (b0, b_axis) = rows[j + 1];
        let av = |k: usize| a0 + (k % segments);
        let bv = |k: usize| b0 + (k % segments);
        match (a_axis, b_axis) {
            (true, true) => {} // zero-radius segment, nothing to emit
            (true, false) => {
                for k in 0..segments {
                    mesh.faces.push([a0, bv(k + 1), bv(k)]);
                }
            }
            (false, true) => {
                for k in 0..segments {
                    mesh.faces.push([av(k), av(k + 1), b0]);
                }
            }
            (false, false) => {
                for k in 0..segments {
                    mesh.faces.push([av(k), bv(k + 1), bv(k)]);
                    mesh.faces.push([av(k), av(k + 1), bv(k + 1)]);
                }
            }
        }
    }
    Ok(mesh)
}

/// Watertight latitude/longitude sphere with single pole vertices.
pub fn uv_sphere(center: Vec3, r: f64, nu: usize, nv: usize) -> Result<IndexedMesh> {
    if !(r.is_finite() && r > 0.0) {
        return Err(MeshError::Parameter(format!(
            "sphere radius must be positive, got {r}"
        )));
    }
    if nu < 3 || nv < 2 {
        return Err(MeshError::Parameter(format!(
            "sphere resolution must be at least 3x2, got {nu}x{nv}"
        )));
    }
    let mut mesh = IndexedMesh::empty();
    let north = 0;
    mesh.vertices.push(center + vec3(0.0, 0.0, r));
    for j in 1..nv {
        let phi = PI * j as f64 / nv as f64;
        let (sp, cp) = phi.sin_cos();
        for k in 0..nu {
            let theta = 2.0 * PI * k as f64 / nu as f64;
            let (st, ct) = theta.sin_cos();
            mesh.vertices.push(center + vec3(r * sp * ct, r * sp * st, r * cp));
        }
    }
    let south = mesh.vertices.len();
    mesh.vertices.push(center + vec3(0.0, 0.0, -r));

    let ring = |j: usize, k: usize| 1 + (j - 1) * nu + (k % nu);
    for k in 0..nu {
        mesh.faces.push([north, ring(1, k), ring(1, k + 1)]);
    }
    for j in 1..nv - 1 {
        for k in 0..nu {
            mesh.faces.push([ring(j, k), ring(j + 1, k), ring(j + 1, k + 1)]);
            mesh.faces.push([ring(j, k), ring(j + 1, k + 1), ring(j, k + 1)]);
        }
    }
    for k in 0..nu {
        mesh.faces.push([south, ring(nv - 1, k + 1), ring(nv - 1, k)]);
    }
    Ok(mesh)
}

/// Golden ratio.
pub const PHI: f64 = 1.618033988749894848204586834365638118;

/// The 12 cyclic permutations of (0, +-1, +-phi): an icosahedron with
/// edge length exactly 2.
pub fn icosahedron_vertices() -> Vec<Vec3> {
    let mut out = Vec::with_capacity(12);
    for &s1 in &[-1.0, 1.0] {
        for &s2 in &[-1.0, 1.0] {
            out.push(vec3(0.0, s1, s2 * PHI));
        }
    }
    for &s1 in &[-1.0, 1.0] {
        for &s2 in &[-1.0, 1.0] {
            out.push(vec3(s1, s2 * PHI, 0.0));
        }
    }
    for &s1 in &[-1.0, 1.0] {
        for &s2 in &[-1.0, 1.0] {
            out.push(vec3(s2 * PHI, 0.0, s1));
        }
    }
    out
}

/// Regular icosahedron mesh (edge length 2) centered at the origin.
pub fn icosahedron() -> IndexedMesh {
    let vertices = icosahedron_vertices();
    let mut faces = Vec::with_capacity(20);
    let n = vertices.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let ab = (vertices[b] - vertices[a]).norm();
                let bc = (vertices[c] - vertices[b]).norm();
                let ca = (vertices[a] - vertices[c]).norm();
                if (ab - 2.0).abs() < 1e-9 && (bc - 2.0).abs() < 1e-9 && (ca - 2.0).abs() < 1e-9 {
                    let centroid =
                        (vertices[a] + vertices[b] + vertices[c]) * (1.0 / 3.0);
                    let normal = (vertices[b] - vertices[a]).cross(vertices[c] - vertices[a]);
                    if normal.dot(centroid) > 0.0 {
                        faces.push([a, b, c]);
                    } else {
                        faces.push([a, c, b]);
                    }
                }
            }
        }
    }
    IndexedMesh { vertices, faces }
}

/// Truncated octahedron on the 24 permutations of (0, +-1, +-2):
/// 6 squares + 8 hexagons, fan-triangulated, outward orientation.
pub fn truncated_octahedron() -> IndexedMesh {
    let mut vertices = Vec::with_capacity(24);
    // position of the zero component x 4 sign combinations of (1, 2)
    for zero_at in 0..3 {
        for &order in &[false, true] {
            for &s1 in &[-1.0, 1.0] {
                let (p, q) = if order { (2.0, 1.0) } else { (1.0, 2.0) };
                for_each_pair(zero_at, p * s1, q, &mut vertices);
            }
        }
    }
    // dedup the enumeration above (each placement generated twice per sign)
    vertices.sort_by(|a, b| {
        (a.x, a.y, a.z)
            .partial_cmp(&(b.x, b.y, b.z))
            .unwrap()
    });
    vertices.dedup_by(|a, b| (*a - *b).norm() < 1e-12);
    debug_assert_eq!(vertices.len(), 24);

    let mut faces = Vec::new();
    let mut face_planes: Vec<(Vec3, f64)> = Vec::new();
    for axis in 0..3 {
        for &s in &[-1.0, 1.0] {
            let mut n = Vec3::ZERO;
            match axis {
                0 => n.x = s,
                1 => n.y = s,
                _ => n.z = s,
            }
            face_planes.push((n, 2.0));
        }
    }
    for &sx in &[-1.0, 1.0] {
        for &sy in &[-1.0, 1.0] {
            for &sz in &[-1.0, 1.0] {
                face_planes.push((vec3(sx, sy, sz), 3.0));
            }
        }
    }
    for (normal, dist) in face_planes {
        let ring: Vec<usize> = (0..vertices.len())
            .filter(|&i| (vertices[i].dot(normal) - dist).abs() < 1e-9)
            .collect();
        let center = ring
            .iter()
            .fold(Vec3::ZERO, |acc, &i| acc + vertices[i])
            * (1.0 / ring.len() as f64);
        let n_unit = normal.normalized().unwrap();
        let ref_dir = (vertices[ring[0]] - center).normalized().unwrap();
        let ref_perp = n_unit.cross(ref_dir);
        let mut ordered = ring.clone();
        ordered.sort_by(|&a, &b| {
            let da = vertices[a] - center;
            let db = vertices[b] - center;
            let aa = da.dot(ref_perp).atan2(da.dot(ref_dir));
            let ab = db.dot(ref_perp).atan2(db.dot(ref_dir));
            aa.partial_cmp(&ab).unwrap()
        });
        for k in 1..ordered.len() - 1 {
            faces.push([ordered[0], ordered[k], ordered[k + 1]]);
        }
    }
    IndexedMesh { vertices, faces }
}

fn for_each_pair(zero_at: usize, a: f64, b_mag: f64, out: &mut Vec<Vec3>) {
    for &s2 in &[-1.0, 1.0] {
        let b = b_mag * s2;
        let v = match zero_at {
            0 => vec3(0.0, a, b),
            1 => vec3(a, 0.0, b),
            _ => vec3(a, b, 0.0),
        };
        out.push(v);
    }
}

/// The lattice offsets of the eight-cell truncated-octahedron block:
/// (k + l + 2m, k - l, 3m/2) for k, l in {-1, 1}, m in {0, 1}.
pub fn honeycomb_offsets() -> Vec<Vec3> {
    let mut out = Vec::with_capacity(8);
    for k in [-1.0f64, 1.0] {
        for l in [-1.0f64, 1.0] {
            for m in [0.0f64, 1.0] {
                out.push(vec3(k + l + 2.0 * m, k - l, 1.5 * m));
            }
        }
    }
    out
}

/// Eight truncated-octahedron instances at the lattice offsets, merged
/// without welding; each instance is individually watertight.
pub fn honeycomb() -> IndexedMesh {
    let cell = truncated_octahedron();
    let instances: Vec<IndexedMesh> = honeycomb_offsets()
        .into_iter()
        .map(|t| {
            let mut m = cell.clone();
            for v in &mut m.vertices {
                *v = *v + t;
            }
            m
        })
        .collect();
    merge(&instances).expect("instances are well-formed")
}

/// One cube per 1-cell with interior shared faces removed; watertight per
/// connected component. Layer index is z, row index x, column index y.
pub fn voxel_solid(v: &VoxelLayers) -> Result<IndexedMesh> {
    let cell = v.cell;
    let mut parts = Vec::new();
    for (k, layer) in v.layers.iter().enumerate() {
        for (i, row) in layer.iter().enumerate() {
            for (j, &val) in row.iter().enumerate() {
                if val != 1 {
                    continue;
                }
                let (i, j, k) = (i as i64, j as i64, k as i64);
                let min = vec3(i as f64 * cell, j as f64 * cell, k as f64 * cell);
                let cube = cuboid(min, vec3(cell, cell, cell));
                // cuboid face order: -z, +z, -y, +x, +y, -x (2 tris each)
                let neighbors = [
                    (0, 0, -1),
                    (0, 0, 1),
                    (0, -1, 0),
                    (1, 0, 0),
                    (0, 1, 0),
                    (-1, 0, 0),
                ];
                let mut kept = IndexedMesh {
                    vertices: cube.vertices.clone(),
                    faces: Vec::new(),
                };
                for (fi, (di, dj, dk)) in neighbors.iter().enumerate() {
                    if !v.occupied(i + di, j + dj, k + dk) {
                        kept.faces.push(cube.faces[2 * fi]);
                        kept.faces.push(cube.faces[2 * fi + 1]);
                    }
                }
                parts.push(kept);
            }
        }
    }
    Ok(merge(&parts)?.weld(DEFAULT_WELD_TOL))
}

/// Standard half-twist Moebius band patch.
pub fn moebius_patch(radius: f64, half_width: f64, nu: usize, nv: usize) -> Result<ParametricPatch> {
    ParametricPatch::new(
        move |u, v| {
            let w = radius + v * (u / 2.0).cos();
            vec3(w * u.cos(), w * u.sin(), v * (u / 2.0).sin())
        },
        (0.0, 2.0 * PI),
        (-half_width, half_width),
        nu,
        nv,
        Seam::UPeriodicFlipped,
    )
}

/// Full sphere as a patch (u azimuth periodic, v polar with pole collapse).
pub fn sphere_patch(center: Vec3, r: f64, nu: usize, nv: usize) -> Result<ParametricPatch> {
    ParametricPatch::new(
        move |u, v| center + vec3(r * v.sin() * u.cos(), r * v.sin() * u.sin(), r * v.cos()),
        (0.0, 2.0 * PI),
        (0.0, PI),
        nu,
        nv,
        Seam::UPeriodic,
    )
}

/// Torus patch, both directions periodic.
pub fn torus_patch(major: f64, minor: f64, nu: usize, nv: usize) -> Result<ParametricPatch> {
    ParametricPatch::new(
        move |u, v| {
            let w = major + minor * v.cos();
            vec3(w * u.cos(), w * u.sin(), minor * v.sin())
        },
        (0.0, 2.0 * PI),
        (0.0, 2.0 * PI),
        nu,
        nv,
        Seam::UPeriodic,
    )
}

/// Circle of `n` points in the z = 0 plane, as a closed path.
pub fn circle_path(radius: f64, n: usize) -> Result<Polyline3> {
    let points = (0..n)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / n as f64;
            vec3(radius * t.cos(), radius * t.sin(), 0.0)
        })
        .collect();
    Polyline3::new(points, true)
}

/// Standard (p, q) torus knot space curve sampled at `n` points.
pub fn torus_knot_path(p: u32, q: u32, n: usize) -> Result<Polyline3> {
    let points = (0..n)
        .map(|i| torus_knot_point(p, q, 2.0 * PI * i as f64 / n as f64))
        .collect();
    Polyline3::new(points, true)
}

/// Point on the standard (p, q) torus knot at parameter t.
pub fn torus_knot_point(p: u32, q: u32, t: f64) -> Vec3 {
    let (p, q) = (p as f64, q as f64);
    let w = (q * t).cos() + 2.0;
    vec3(w * (p * t).cos(), w * (p * t).sin(), -(q * t).sin())
}
