//! Implicit scalar fields and isosurface extraction via marching cubes.
//!
//! Fields follow the negative-inside convention: f(p) < iso means p is
//! inside the solid. Extracted meshes have outward orientation (normals
//! toward increasing field values).

use crate::error::{MeshError, Result};
use crate::geom::{vec3, IndexedMesh, Vec3};
use crate::mc_tables::TRIANGLE_TABLE;

/// A scalar function over a bounding box, negative inside the solid.
pub struct ScalarField {
    eval: Box<dyn Fn(Vec3) -> f64 + Sync>,
    pub bounds: (Vec3, Vec3),
}

impl ScalarField {
    pub fn new(eval: impl Fn(Vec3) -> f64 + Sync + 'static, bounds: (Vec3, Vec3)) -> Result<Self> {
        let (lo, hi) = bounds;
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(MeshError::Parameter("non-finite field bounds".into()));
        }
        if !(lo.x < hi.x && lo.y < hi.y && lo.z < hi.z) {
            return Err(MeshError::Parameter(format!(
                "degenerate field bounds: ({}, {}, {}) .. ({}, {}, {})",
                lo.x, lo.y, lo.z, hi.x, hi.y, hi.z
            )));
        }
        Ok(ScalarField {
            eval: Box::new(eval),
            bounds,
        })
    }

    pub fn eval(&self, p: Vec3) -> f64 {
        (self.eval)(p)
    }

    /// Ball of radius r: f(p) = |p - c|^2 - r^2, padded bounds.
    pub fn sphere(center: Vec3, r: f64) -> Result<Self> {
        let pad = r * 1.125;
        Self::new(
            move |p| {
                let d = p - center;
                d.dot(d) - r * r
            },
            (center - vec3(pad, pad, pad), center + vec3(pad, pad, pad)),
        )
    }
}

/// Intersection of solids: pointwise max of the fields, bounds clipped to
/// the common box.
pub fn field_intersection(fields: Vec<ScalarField>) -> Result<ScalarField> {
    if fields.is_empty() {
        return Err(MeshError::Parameter(
            "field intersection needs at least one field".into(),
        ));
    }
    let mut lo = fields[0].bounds.0;
    let mut hi = fields[0].bounds.1;
    for f in &fields[1..] {
        lo = vec3(lo.x.max(f.bounds.0.x), lo.y.max(f.bounds.0.y), lo.z.max(f.bounds.0.z));
        hi = vec3(hi.x.min(f.bounds.1.x), hi.y.min(f.bounds.1.y), hi.z.min(f.bounds.1.z));
    }
    ScalarField::new(
        move |p| {
            fields
                .iter()
                .map(|f| f.eval(p))
                .fold(f64::NEG_INFINITY, f64::max)
        },
        (lo, hi),
    )
}

/// Sampling resolution: number of cells along each axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
}

impl GridSpec {
    pub fn cubic(n: usize) -> Self {
        GridSpec { nx: n, ny: n, nz: n }
    }
}

/// Marching cubes result. `boundary_truncated` is set when the solid
/// reaches the bounding box, in which case the surface is clipped open
/// at the box faces.
pub struct McOutput {
    pub mesh: IndexedMesh,
    pub boundary_truncated: bool,
}

// cube corner offsets in the table's canonical order
const CORNERS: [(usize, usize, usize); 8] = [
    (0, 0, 0),
    (1, 0, 0),
    (1, 1, 0),
    (0, 1, 0),
    (0, 0, 1),
    (1, 0, 1),
    (1, 1, 1),
    (0, 1, 1),
];

const EDGES: [(usize, usize); 12] = [
    (0, 1),
    (1, 2),
    (2, 3),
    (3, 0),
    (4, 5),
    (5, 6),
    (6, 7),
    (7, 4),
    (0, 4),
    (1, 5),
    (2, 6),
    (3, 7),
];

/// Extract the iso-0 surface of a field over its bounding box.
/// Shared-edge vertices are deduplicated so the result is watertight
/// wherever the solid stays inside the box.
pub fn marching_cubes(field: &ScalarField, grid: GridSpec) -> Result<McOutput> {
    let GridSpec { nx, ny, nz } = grid;
    if nx < 1 || ny < 1 || nz < 1 {
        return Err(MeshError::Parameter(format!(
            "grid resolution must be at least 1, got {nx}x{ny}x{nz}"
        )));
    }
    let (lo, hi) = field.bounds;
    let step = vec3(
        (hi.x - lo.x) / nx as f64,
        (hi.y - lo.y) / ny as f64,
        (hi.z - lo.z) / nz as f64,
    );
    let point = |ix: usize, iy: usize, iz: usize| {
        vec3(
            lo.x + step.x * ix as f64,
            lo.y + step.y * iy as f64,
            lo.z + step.z * iz as f64,
        )
    };

    // sample the whole grid once so shared edges interpolate identically
    let (sx, sy, sz) = (nx + 1, ny + 1, nz + 1);
    let sample = |ix: usize, iy: usize, iz: usize| (iz * sy + iy) * sx + ix;
    let mut values = vec![0.0f64; sx * sy * sz];
    let mut boundary_truncated = false;
    for iz in 0..sz {
        for iy in 0..sy {
            for ix in 0..sx {
                let v = field.eval(point(ix, iy, iz));
                if !v.is_finite() {
                    let p = point(ix, iy, iz);
                    return Err(MeshError::Generation(format!(
                        "non-finite field value at ({}, {}, {})",
                        p.x, p.y, p.z
                    )));
                }
                if v < 0.0
                    && (ix == 0 || iy == 0 || iz == 0 || ix == sx - 1 || iy == sy - 1 || iz == sz - 1)
                {
                    boundary_truncated = true;
                }
                values[sample(ix, iy, iz)] = v;
            }
        }
    }

    // global edge key: owning sample index + axis (0 = x, 1 = y, 2 = z)
    let mut edge_vertex: std::collections::HashMap<(usize, u8), usize> =
        std::collections::HashMap::new();
    let mut mesh = IndexedMesh::empty();

    for iz in 0..nz {
        for iy in 0..ny {
            for ix in 0..nx {
                let corner = |c: usize| {
                    let (dx, dy, dz) = CORNERS[c];
                    (ix + dx, iy + dy, iz + dz)
                };
                let mut cube_index = 0usize;
                for (c, _) in CORNERS.iter().enumerate() {
                    let (cx, cy, cz) = corner(c);
                    if values[sample(cx, cy, cz)] < 0.0 {
                        cube_index |= 1 << c;
                    }
                }
                if cube_index == 0 || cube_index == 255 {
                    continue;
                }
                let tri = &TRIANGLE_TABLE[cube_index];
                let mut cut_vertex = |e: usize| -> usize {
                    let (a, b) = EDGES[e];
                    let (ax, ay, az) = corner(a);
                    let (bx, by, bz) = corner(b);
                    let (axis, owner) = if ax != bx {
                        (0u8, sample(ax.min(bx), ay, az))
                    } else if ay != by {
                        (1u8, sample(ax, ay.min(by), az))
                    } else {
                        (2u8, sample(ax, ay, az.min(bz)))
                    };
                    *edge_vertex.entry((owner, axis)).or_insert_with(|| {
                        let va = values[sample(ax, ay, az)];
                        let vb = values[sample(bx, by, bz)];
                        let t = (va / (va - vb)).clamp(0.0, 1.0);
                        let pa = point(ax, ay, az);
                        let pb = point(bx, by, bz);
                        mesh.vertices.push(pa + (pb - pa) * t);
                        mesh.vertices.len() - 1
                    })
                };
                let mut k = 0;
                while tri[k] >= 0 {
                    let v0 = cut_vertex(tri[k] as usize);
                    let v1 = cut_vertex(tri[k + 1] as usize);
                    let v2 = cut_vertex(tri[k + 2] as usize);
                    if v0 != v1 && v1 != v2 && v0 != v2 {
                        mesh.faces.push([v0, v2, v1]);
                    }
                    k += 3;
                }
            }
        }
    }
    Ok(McOutput {
        mesh,
        boundary_truncated,
    })
}

/// One orbit step of the degree-8 Mandelbulb map in spherical coordinates.
fn bulb_step(z: Vec3, c: Vec3) -> Vec3 {
    let rho = z.norm();
    if rho == 0.0 {
        return c;
    }
    let theta = (z.z / rho).acos();
    let phi = z.y.atan2(z.x);
    let r8 = rho.powi(8);
    let (t8, p8) = (8.0 * theta, 8.0 * phi);
    vec3(
        r8 * t8.sin() * p8.cos(),
        r8 * t8.sin() * p8.sin(),
        r8 * t8.cos(),
    ) + c
}

/// Whether the orbit of 0 under z -> z^8 + c stays bounded for `max_iter`
/// iterations (escape radius 2).
pub fn mandelbulb_inside(c: Vec3, max_iter: usize) -> bool {
    let mut z = Vec3::ZERO;
    for _ in 0..max_iter {
        z = bulb_step(z, c);
        if z.dot(z) > 4.0 {
            return false;
        }
    }
    true
}

/// Indicator field of the degree-8 Mandelbulb: -1 inside, +1 outside,
/// over the box [-1.3, 1.3]^3.
pub fn mandelbulb_field(max_iter: usize) -> Result<ScalarField> {
    ScalarField::new(
        move |p| if mandelbulb_inside(p, max_iter) { -1.0 } else { 1.0 },
        (vec3(-1.3, -1.3, -1.3), vec3(1.3, 1.3, 1.3)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sphere_watertight_and_accurate() {
        let field = ScalarField::sphere(Vec3::ZERO, 1.0).unwrap();
        let out = marching_cubes(&field, GridSpec::cubic(64)).unwrap();
        assert!(!out.boundary_truncated);
        assert_eq!(out.mesh.euler_characteristic().unwrap(), 2);
        let vol = out.mesh.signed_volume();
        let expect = 4.0 * PI / 3.0;
        assert!((vol - expect).abs() / expect < 0.02, "volume {vol}");
        let area = out.mesh.surface_area().unwrap();
        assert!((area - 4.0 * PI).abs() / (4.0 * PI) < 0.02, "area {area}");
    }

    #[test]
    fn sphere_error_decreases_with_resolution() {
        let expect = 4.0 * PI / 3.0;
        let mut last = f64::INFINITY;
        for n in [16, 32, 64] {
            let field = ScalarField::sphere(Vec3::ZERO, 1.0).unwrap();
            let out = marching_cubes(&field, GridSpec::cubic(n)).unwrap();
            let err = (out.mesh.signed_volume() - expect).abs() / expect;
            assert!(err < last, "n = {n}: error {err} not below {last}");
            last = err;
        }
    }

    #[test]
    fn truncation_flag_set_when_solid_hits_bounds() {
        let field = ScalarField::new(
            |p| p.dot(p) - 4.0,
            (vec3(-1.0, -1.0, -1.0), vec3(1.0, 1.0, 1.0)),
        )
        .unwrap();
        let out = marching_cubes(&field, GridSpec::cubic(8)).unwrap();
        assert!(out.boundary_truncated);
    }

    #[test]
    fn intersection_is_pointwise_max() {
        let a = ScalarField::sphere(Vec3::ZERO, 1.0).unwrap();
        let b = ScalarField::sphere(vec3(0.5, 0.0, 0.0), 1.0).unwrap();
        let both = field_intersection(vec![a, b]).unwrap();
        let a2 = ScalarField::sphere(Vec3::ZERO, 1.0).unwrap();
        let b2 = ScalarField::sphere(vec3(0.5, 0.0, 0.0), 1.0).unwrap();
        for p in [Vec3::ZERO, vec3(0.9, 0.1, 0.0), vec3(-0.6, 0.3, 0.3)] {
            assert_eq!(both.eval(p), a2.eval(p).max(b2.eval(p)));
        }
        // bounds are the box intersection
        assert!((both.bounds.0.x - (0.5 - 1.125)).abs() < 1e-12);
        assert!((both.bounds.1.x - 1.125).abs() < 1e-12);
        assert!(field_intersection(vec![]).is_err());
    }

    #[test]
    fn intersection_volume_of_two_unit_balls() {
        // lens volume for distance d = 1: 2 * pi/12 * (2 - 3/2 + 1/8) ... use
        // the standard formula V = pi (4 r + d)(2 r - d)^2 / 12 with r = 1
        let expect = PI * 5.0 / 12.0;
        let a = ScalarField::sphere(Vec3::ZERO, 1.0).unwrap();
        let b = ScalarField::sphere(vec3(1.0, 0.0, 0.0), 1.0).unwrap();
        let both = field_intersection(vec![a, b]).unwrap();
        let out = marching_cubes(&both, GridSpec::cubic(64)).unwrap();
        let vol = out.mesh.signed_volume();
        assert!((vol - expect).abs() / expect < 0.02, "lens volume {vol}");
        assert_eq!(out.mesh.euler_characteristic().unwrap(), 2);
    }

    #[test]
    fn mandelbulb_orbit_cases() {
        // c = 0: fixed at the origin forever
        assert!(mandelbulb_inside(Vec3::ZERO, 32));
        // |c| = 3 escapes immediately: |z1| = 3 > 2
        assert!(!mandelbulb_inside(vec3(3.0, 0.0, 0.0), 32));
        // c on the +x axis: orbit stays on the axis, escapes for x = 1.1
        // (direct oracle: x -> x^8 + 1.1 grows monotonically past 2)
        let mut x = 0.0f64;
        let mut escaped_at = None;
        for i in 0..32 {
            x = x.powi(8) + 1.1;
            if x > 2.0 {
                escaped_at = Some(i);
                break;
            }
        }
        assert!(escaped_at.is_some());
        assert!(!mandelbulb_inside(vec3(1.1, 0.0, 0.0), 32));
    }

    #[test]
    fn mandelbulb_mesh_smoke() {
        let field = mandelbulb_field(8).unwrap();
        let out = marching_cubes(&field, GridSpec::cubic(32)).unwrap();
        assert!(!out.mesh.faces.is_empty());
        assert!(!out.boundary_truncated);
        assert!(out.mesh.signed_volume() > 0.0);
    }

    #[test]
    fn deterministic_output() {
        let run = || {
            let f = ScalarField::sphere(vec3(0.1, -0.2, 0.3), 0.8).unwrap();
            marching_cubes(&f, GridSpec::cubic(24)).unwrap().mesh
        };
        assert_eq!(run(), run());
    }
}
