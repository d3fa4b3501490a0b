//! Named scene registry binding showcase objects to parameterized
//! builders.
//!
//! Notes on deliberate choices:
//! - kissing12 rescales the edge-2 icosahedron vertices to norm exactly 2
//!   so the 12 outer unit spheres are tangent to the central one
//!   (pairwise outer-center distance ≈ 2.103 > 2, a valid configuration).
//! - knot_sum_tube uses two torus-knot parametrizations, defaults (5,11)
//!   and (3,5), as reproducible stand-ins for proprietary knot data.
//! - Overlapping solids (kissing12, honeycomb, feigenbaum3d) are merged
//!   without boolean unions; slicers handle unions at print time.
//! - Source colorings (Calabi-Yau hue, Lyapunov color) are dropped:
//!   STL/OBJ carry no color.

use std::collections::HashMap;
use std::f64::consts::PI;

use crate::dynamics::{self, FlowField};
use crate::error::{MeshError, Result};
use crate::geom::{merge, vec3, IndexedMesh, Vec3};
use crate::implicit::{self, field_intersection, GridSpec, ScalarField};
use crate::tessellate::{
    self, honeycomb, icosahedron_vertices, moebius_patch, thicken, torus_knot_point, tube,
    uv_sphere, ParametricPatch, Polyline3, Profile2, Seam, VoxelLayers,
};

const PI_BASE6: &str = include_str!("../assets/pi_base6.txt");
const PI_BASE4: &str = include_str!("../assets/pi_base4.txt");

/// Registry entry: name, description, parameter defaults, and whether
/// the built mesh is a closed (watertight) solid.
#[derive(Debug, Clone)]
pub struct SceneSpec {
    pub name: &'static str,
    pub description: &'static str,
    pub defaults: Vec<(&'static str, f64)>,
    pub closed: bool,
}

/// Inputs that are not plain numbers: digit text for digit_walk.
#[derive(Debug, Clone, Default)]
pub struct BuildOptions {
    /// Overrides the embedded digit data of the digit_walk scene.
    pub digits: Option<String>,
}

/// All registered scenes in stable alphabetical order.
pub fn list_scenes() -> Vec<SceneSpec> {
    let s = |name, description, defaults: Vec<(&'static str, f64)>, closed| SceneSpec {
        name,
        description,
        defaults,
        closed,
    };
    vec![
        s(
            "abc_orbits",
            "Tubes along Arnold-Beltrami-Childress flow orbits",
            vec![
                ("a", 1.0),
                ("b", 1.0),
                ("c", 1.0),
                ("h", 0.02),
                ("steps", 600.0),
                ("radius", 0.06),
                ("sides", 8.0),
            ],
            true,
        ),
        s(
            "archimedean_dome",
            "Intersection of two perpendicular unit cylinders above the floor",
            vec![("res", 96.0)],
            true,
        ),
        s(
            "calabi_yau",
            "Projected Calabi-Yau surface patches, thickened for printing",
            vec![
                ("n", 5.0),
                ("alpha", 0.2),
                ("nu", 16.0),
                ("nv", 16.0),
                ("thickness", 0.04),
            ],
            true,
        ),
        // not marked closed: the walk reverses onto itself, so coincident
        // tube rings make the merged surface non-manifold at the touch lines
        s(
            "digit_walk",
            "Tube along the base-6 lattice walk of the digits of pi",
            vec![
                ("base", 6.0),
                ("count", 1000.0),
                ("step", 1.0),
                ("radius", 0.3),
                ("sides", 8.0),
            ],
            false,
        ),
        s(
            "drinkable_proof",
            "Bowl/cone/cylinder surface assembly with 6 connector cylinders",
            vec![("m", 6.0), ("a", 0.1), ("b", 0.06), ("segments", 64.0)],
            false,
        ),
        s(
            "feigenbaum3d",
            "Spheres at the cylindrical embedding of sine-map attractors over the c-sweep",
            vec![
                ("c_min", 0.55),
                ("c_max", 1.0),
                ("c_step", 0.001),
                ("radius", 0.010),
                ("max_samples", 16.0),
            ],
            true,
        ),
        s(
            "hemisphere_demo",
            "Hemisphere next to the complement of a cone in a cylinder (equal volumes)",
            vec![("res", 64.0), ("segments", 64.0)],
            true,
        ),
        // not marked closed: the eight cells are merged without booleans
        // and interpenetrate, so the union is non-manifold where they meet
        s(
            "honeycomb",
            "Eight truncated octahedra on the space-filling lattice",
            vec![],
            false,
        ),
        s(
            "kissing12",
            "Central unit sphere kissed by 12 spheres at rescaled icosahedron vertices",
            vec![("nu", 32.0), ("nv", 16.0)],
            true,
        ),
        s(
            "knot_sum_tube",
            "Tube of radius 0.3 over the curve 3u(t) - 4v(t) of two torus knots",
            vec![
                ("p1", 5.0),
                ("q1", 11.0),
                ("p2", 3.0),
                ("q2", 5.0),
                ("samples", 1600.0),
                ("radius", 0.3),
                ("sides", 12.0),
            ],
            true,
        ),
        s(
            "lorenz_ribbon",
            "Tube along the RK4 Lorenz orbit from (0, 1, 0)",
            vec![
                ("h", 0.01),
                ("steps", 1000.0),
                ("radius", 0.5),
                ("sides", 8.0),
            ],
            true,
        ),
        s(
            "mandelbulb",
            "Degree-8 Mandelbulb via marching cubes on the bounded-orbit indicator",
            vec![("res", 64.0), ("max_iter", 32.0)],
            true,
        ),
        s(
            "moebius_thick",
            "Half-twist Moebius band thickened into a closed shell",
            vec![
                ("radius", 1.0),
                ("half_width", 0.4),
                ("nu", 128.0),
                ("nv", 12.0),
                ("thickness", 0.1),
            ],
            true,
        ),
        s(
            "sphere",
            "Latitude/longitude unit sphere",
            vec![("r", 1.0), ("nu", 64.0), ("nv", 64.0)],
            true,
        ),
        s(
            "tricylinder",
            "Intersection of three pairwise perpendicular unit cylinders",
            vec![("res", 96.0)],
            true,
        ),
        s(
            "voxel_escher",
            "Four stair layers built brick-by-brick from 0/1 matrices",
            vec![],
            true,
        ),
    ]
}

fn known_names() -> String {
    list_scenes()
        .iter()
        .map(|s| s.name)
        .collect::<Vec<_>>()
        .join(", ")
}

/// Look up one scene spec.
pub fn scene_spec(name: &str) -> Result<SceneSpec> {
    list_scenes()
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| MeshError::UnknownScene {
            name: name.to_string(),
            known: known_names(),
        })
}

struct Params {
    values: HashMap<String, f64>,
}

impl Params {
    fn resolve(spec: &SceneSpec, overrides: &HashMap<String, f64>) -> Result<Params> {
        let mut values: HashMap<String, f64> = spec
            .defaults
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect();
        for (k, v) in overrides {
            if !values.contains_key(k) {
                return Err(MeshError::Parameter(format!(
                    "unknown parameter '{k}' for scene '{}'; valid: {}",
                    spec.name,
                    spec.defaults
                        .iter()
                        .map(|(n, _)| *n)
                        .collect::<Vec<_>>()
                        .join(", ")
                )));
            }
            if !v.is_finite() {
                return Err(MeshError::Parameter(format!(
                    "parameter '{k}' must be finite"
                )));
            }
            values.insert(k.clone(), *v);
        }
        Ok(Params { values })
    }

    fn get(&self, key: &str) -> f64 {
        self.values[key]
    }

    fn get_usize(&self, key: &str) -> Result<usize> {
        let v = self.get(key);
        if v < 0.0 || v.fract() != 0.0 || v > u32::MAX as f64 {
            return Err(MeshError::Parameter(format!(
                "parameter '{key}' must be a non-negative integer, got {v}"
            )));
        }
        Ok(v as usize)
    }
}

/// Build a scene with parameter overrides.
pub fn build_scene(name: &str, overrides: &HashMap<String, f64>) -> Result<IndexedMesh> {
    build_scene_with(name, overrides, &BuildOptions::default())
}

pub fn build_scene_with(
    name: &str,
    overrides: &HashMap<String, f64>,
    opts: &BuildOptions,
) -> Result<IndexedMesh> {
    let spec = scene_spec(name)?;
    let p = Params::resolve(&spec, overrides)?;
    match name {
        "abc_orbits" => abc_orbits(&p),
        "archimedean_dome" => archimedean_dome(&p),
        "calabi_yau" => calabi_yau(&p),
        "digit_walk" => digit_walk_scene(&p, opts),
        "drinkable_proof" => drinkable_proof(&p),
        "feigenbaum3d" => feigenbaum3d(&p),
        "hemisphere_demo" => hemisphere_demo(&p),
        "honeycomb" => Ok(honeycomb()),
        "kissing12" => kissing12(&p),
        "knot_sum_tube" => knot_sum_tube(&p),
        "lorenz_ribbon" => lorenz_ribbon(&p),
        "mandelbulb" => mandelbulb(&p),
        "moebius_thick" => moebius_thick(&p),
        "sphere" => sphere(&p),
        "tricylinder" => tricylinder(&p),
        "voxel_escher" => voxel_escher(),
        _ => unreachable!("registry and builder table agree"),
    }
}

fn sphere(p: &Params) -> Result<IndexedMesh> {
    uv_sphere(Vec3::ZERO, p.get("r"), p.get_usize("nu")?, p.get_usize("nv")?)
}

/// 13 unit spheres: one at the origin, 12 at icosahedron vertices
/// rescaled to norm exactly 2 (tangent to the center sphere).
fn kissing12(p: &Params) -> Result<IndexedMesh> {
    let (nu, nv) = (p.get_usize("nu")?, p.get_usize("nv")?);
    let mut parts = vec![uv_sphere(Vec3::ZERO, 1.0, nu, nv)?];
    for v in icosahedron_vertices() {
        let c = v * (2.0 / v.norm());
        parts.push(uv_sphere(c, 1.0, nu, nv)?);
    }
    merge(&parts)
}

fn moebius_thick(p: &Params) -> Result<IndexedMesh> {
    let patch = moebius_patch(
        p.get("radius"),
        p.get("half_width"),
        p.get_usize("nu")?,
        p.get_usize("nv")?,
    )?;
    thicken(&patch, p.get("thickness"))
}

fn knot_sum_tube(p: &Params) -> Result<IndexedMesh> {
    let (p1, q1) = (p.get_usize("p1")? as u32, p.get_usize("q1")? as u32);
    let (p2, q2) = (p.get_usize("p2")? as u32, p.get_usize("q2")? as u32);
    let n = p.get_usize("samples")?;
    let points = (0..n)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / n as f64;
            torus_knot_point(p1, q1, t) * 3.0 - torus_knot_point(p2, q2, t) * 4.0
        })
        .collect();
    tube(
        &Polyline3::new(points, true)?,
        p.get("radius"),
        p.get_usize("sides")?,
    )
}

fn mc_build(field: ScalarField, res: usize) -> Result<IndexedMesh> {
    let out = implicit::marching_cubes(&field, GridSpec::cubic(res))?;
    if out.boundary_truncated {
        return Err(MeshError::Generation(
            "solid reaches the sampling bounds; enlarge the field box".into(),
        ));
    }
    Ok(out.mesh)
}

fn cylinder_z(axis: usize, bounds: (Vec3, Vec3)) -> Result<ScalarField> {
    // infinite unit cylinder along the given axis
    ScalarField::new(
        move |p| match axis {
            0 => p.y * p.y + p.z * p.z - 1.0,
            1 => p.x * p.x + p.z * p.z - 1.0,
            _ => p.x * p.x + p.y * p.y - 1.0,
        },
        bounds,
    )
}

fn tricylinder(p: &Params) -> Result<IndexedMesh> {
    let b = (vec3(-1.05, -1.05, -1.05), vec3(1.05, 1.05, 1.05));
    let field = field_intersection(vec![
        cylinder_z(0, b)?,
        cylinder_z(1, b)?,
        cylinder_z(2, b)?,
    ])?;
    mc_build(field, p.get_usize("res")?)
}

fn archimedean_dome(p: &Params) -> Result<IndexedMesh> {
    // two perpendicular horizontal unit cylinders, kept above the floor
    let b = (vec3(-1.05, -1.05, -0.05), vec3(1.05, 1.05, 1.05));
    let field = field_intersection(vec![
        ScalarField::new(|p: Vec3| p.x * p.x + p.z * p.z - 1.0, b)?,
        ScalarField::new(|p: Vec3| p.y * p.y + p.z * p.z - 1.0, b)?,
        ScalarField::new(|p: Vec3| -p.z, b)?,
    ])?;
    mc_build(field, p.get_usize("res")?)
}

/// Hemisphere beside the complement of a cone in a cylinder; both enclose
/// volume 2*pi/3.
fn hemisphere_demo(p: &Params) -> Result<IndexedMesh> {
    let segments = p.get_usize("segments")?;
    let n = segments.max(8);
    // flat disk out to the equator, then the dome arc: counterclockwise
    let mut profile = Vec::with_capacity(n + 2);
    profile.push((0.0, 0.0));
    for i in 0..=n {
        let phi = PI / 2.0 * i as f64 / n as f64;
        profile.push((phi.cos(), phi.sin()));
    }
    let hemisphere = tessellate::revolve(&Profile2::new(profile)?, segments)?
        .apply_transform(&crate::geom::Transform::translation(vec3(-1.6, 0.0, 0.0)))?;

    let b = (vec3(-1.05, -1.05, -0.05), vec3(1.05, 1.05, 1.05));
    let field = field_intersection(vec![
        ScalarField::new(|p: Vec3| p.x * p.x + p.y * p.y - 1.0, b)?,
        ScalarField::new(|p: Vec3| -p.z, b)?,
        ScalarField::new(|p: Vec3| p.z - 1.0, b)?,
        ScalarField::new(|p: Vec3| p.z * p.z - (p.x * p.x + p.y * p.y), b)?,
    ])?;
    let complement = mc_build(field, p.get_usize("res")?)?
        .apply_transform(&crate::geom::Transform::translation(vec3(1.6, 0.0, 0.0)))?;
    merge(&[hemisphere, complement])
}

fn mandelbulb(p: &Params) -> Result<IndexedMesh> {
    let field = implicit::mandelbulb_field(p.get_usize("max_iter")?)?;
    mc_build(field, p.get_usize("res")?)
}

fn lorenz_ribbon(p: &Params) -> Result<IndexedMesh> {
    let f = FlowField::lorenz(10.0, 28.0, 8.0 / 3.0);
    let orbit = dynamics::integrate(&f, vec3(0.0, 1.0, 0.0), p.get("h"), p.get_usize("steps")?)?;
    tube(&orbit.points, p.get("radius"), p.get_usize("sides")?)
}

fn abc_orbits(p: &Params) -> Result<IndexedMesh> {
    let f = FlowField::abc(p.get("a"), p.get("b"), p.get("c"));
    let starts = [
        vec3(0.0, 0.0, 0.0),
        vec3(1.0, 2.0, 3.0),
        vec3(2.5, 0.5, 1.5),
    ];
    let mut parts = Vec::new();
    for x0 in starts {
        let orbit = dynamics::integrate(&f, x0, p.get("h"), p.get_usize("steps")?)?;
        parts.push(tube(
            &orbit.points,
            p.get("radius"),
            p.get_usize("sides")?,
        )?);
    }
    merge(&parts)
}

/// L1 parametrization: z1 = e^{2 pi i k1/n} cosh(z)^{2/n},
/// z2 = e^{2 pi i k2/n} sinh(z)^{2/n}, z = u + i v, projected to
/// (Re z1, Re z2, cos(alpha) Im z1 + sin(alpha) Im z2).
fn calabi_yau(p: &Params) -> Result<IndexedMesh> {
    use num_complex::Complex64;
    let n = p.get_usize("n")?;
    if n < 1 {
        return Err(MeshError::Parameter("n must be at least 1".into()));
    }
    let alpha = p.get("alpha");
    let (nu, nv) = (p.get_usize("nu")?, p.get_usize("nv")?);
    let thickness = p.get("thickness");
    let nf = n as f64;
    let mut parts = Vec::with_capacity(n * n);
    for k1 in 0..n {
        for k2 in 0..n {
            let phase1 = Complex64::from_polar(1.0, 2.0 * PI * k1 as f64 / nf);
            let phase2 = Complex64::from_polar(1.0, 2.0 * PI * k2 as f64 / nf);
            let patch = ParametricPatch::new(
                move |u, v| {
                    let z = Complex64::new(u, v);
                    let z1 = phase1 * z.cosh().powf(2.0 / nf);
                    let z2 = phase2 * z.sinh().powf(2.0 / nf);
                    vec3(z1.re, z2.re, alpha.cos() * z1.im + alpha.sin() * z2.im)
                },
                (-1.0, 1.0),
                (0.0, PI / 2.0),
                nu,
                nv,
                Seam::Open,
            )?;
            parts.push(thicken(&patch, thickness)?);
        }
    }
    merge(&parts)
}

/// L2 stair layers, bottom-up; bricks are unit cubes.
fn escher_layers() -> Vec<Vec<Vec<u8>>> {
    let a0 = [
        [1, 0, 0, 0, 0, 0, 0],
        [1, 0, 0, 0, 0, 0, 0],
        [1, 0, 0, 0, 0, 0, 0],
        [1, 0, 0, 0, 0, 0, 0],
        [1, 0, 0, 0, 0, 0, 0],
        [1, 1, 1, 1, 1, 0, 0],
    ];
    let a1 = [
        [0, 0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, 0, 0, 1],
        [1, 0, 0, 0, 0, 0, 1],
        [1, 0, 0, 0, 0, 0, 1],
        [1, 1, 1, 1, 1, 1, 1],
    ];
    let a2 = [
        [0, 0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, 1, 1, 1],
    ];
    let a3 = [
        [0, 0, 0, 0, 1, 1, 1],
        [0, 0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0],
    ];
    [a0, a1, a2, a3]
        .into_iter()
        .map(|m| m.into_iter().map(|r| r.to_vec()).collect())
        .collect()
}

fn voxel_escher() -> Result<IndexedMesh> {
    tessellate::voxel_solid(&VoxelLayers::new(escher_layers(), 1.0)?)
}

/// L3 assembly: bowls, drain, cones, walls, rim annuli, bottom disk and
/// M connector cylinders of radius a/2 from z = -1 to z = 2.
fn drinkable_proof(p: &Params) -> Result<IndexedMesh> {
    let m = p.get_usize("m")?;
    if m < 1 {
        return Err(MeshError::Parameter("m must be at least 1".into()));
    }
    let a = p.get("a");
    let b = p.get("b");
    if !(a > 0.0 && b > 0.0) {
        return Err(MeshError::Parameter(
            "a and b must be positive".into(),
        ));
    }
    let segments = p.get_usize("segments")?;
    let b1 = b.sin();
    let b2 = b.cos();
    let b1a = (b1 / (1.0 + a)).asin();
    let b2a = (1.0 + a) * b1a.cos();
    let arc = |scale: f64, s_end: f64| {
        let n = 32;
        (0..=n)
            .map(|i| {
                let s = PI / 2.0 + (s_end - PI / 2.0) * i as f64 / n as f64;
                (scale * s.sin(), 2.0 + scale * s.cos())
            })
            .collect::<Vec<_>>()
    };
    let rev = |pts: Vec<(f64, f64)>| -> Result<IndexedMesh> {
        tessellate::revolve(&Profile2::new(pts)?, segments)
    };
    let mut parts = vec![
        rev(arc(1.0, PI - b))?,                                   // bowl1
        rev(arc(1.0 + a, PI - b1a))?,                             // bowl2
        rev(vec![(b1, 2.0 - b2), (b1, 2.0 - b2a)])?,              // drain
        rev(vec![(1.0, -1.0), (0.0, 0.0)])?,                      // cone1
        rev(vec![(1.0 + a, -1.0), (0.0, 0.0)])?,                  // cone2
        rev(vec![(1.0, -1.0), (1.0, 0.0)])?,                      // wall1
        rev(vec![(1.0 + a, -1.0), (1.0 + a, 0.0)])?,              // wall2
        rev(vec![(1.0, 0.0), (1.0 + a, 0.0)])?,                   // top1
        rev(vec![(1.0, 2.0), (1.0 + a, 2.0)])?,                   // top2
        rev(vec![(0.0, -1.0), (1.0 + a, -1.0)])?,                 // bottom
    ];
    for k in 0..m {
        let t = 2.0 * PI * (k + 1) as f64 / m as f64;
        let r = 1.0 + a / 2.0;
        let path = Polyline3::new(
            vec![
                vec3(r * t.cos(), r * t.sin(), -1.0),
                vec3(r * t.cos(), r * t.sin(), 2.0),
            ],
            false,
        )?;
        parts.push(tube(&path, a / 2.0, segments.min(32))?);
    }
    merge(&parts)
}

/// L5 embedding: each attractor sample x at parameter c becomes a sphere
/// at (cos(2 pi x) c, sin(2 pi x) c, 5 c). Samples per parameter are
/// capped to keep the mesh printable-sized.
fn feigenbaum3d(p: &Params) -> Result<IndexedMesh> {
    let (c_min, c_max, c_step) = (p.get("c_min"), p.get("c_max"), p.get("c_step"));
    if !(c_step > 0.0 && c_min > 0.0 && c_max <= 1.0 && c_min <= c_max) {
        return Err(MeshError::Parameter(format!(
            "invalid sweep {c_min}..{c_max} step {c_step}"
        )));
    }
    let radius = p.get("radius");
    let max_samples = p.get_usize("max_samples")?.max(1);
    let steps = ((c_max - c_min) / c_step).round() as usize;
    let mut parts = Vec::new();
    for i in 0..=steps {
        let c = c_min + c_step * i as f64;
        let att = dynamics::map_attractor(c, 400, 3100)?;
        let n = att.samples.len();
        let take: Vec<f64> = if n <= max_samples {
            att.samples
        } else {
            // evenly spaced subsample, deterministic
            (0..max_samples)
                .map(|k| att.samples[k * n / max_samples])
                .collect()
        };
        for x in take {
            let center = vec3((2.0 * PI * x).cos() * c, (2.0 * PI * x).sin() * c, 5.0 * c);
            parts.push(uv_sphere(center, radius, 6, 3)?);
        }
    }
    merge(&parts)
}

/// Tube over the lattice walk of embedded pi digits (or digits supplied
/// via [`BuildOptions`]).
fn digit_walk_scene(p: &Params, opts: &BuildOptions) -> Result<IndexedMesh> {
    let base = p.get_usize("base")? as u8;
    let count = p.get_usize("count")?;
    let text: &str = match (&opts.digits, base) {
        (Some(t), _) => t,
        (None, 6) => PI_BASE6,
        (None, 4) => PI_BASE4,
        (None, other) => {
            return Err(MeshError::Parameter(format!(
                "walk base must be 4 or 6, got {other}"
            )))
        }
    };
    let mut digits = dynamics::parse_digits(text, base)?;
    if count == 0 || count > digits.len() {
        return Err(MeshError::Parameter(format!(
            "count must be in 1..={}, got {count}",
            digits.len()
        )));
    }
    digits.truncate(count);
    let walk = dynamics::digit_walk(&digits, base, p.get("step"))?;
    tube(&walk, p.get("radius"), p.get_usize("sides")?)
}
