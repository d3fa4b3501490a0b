//! Acceptance suite: one test per release criterion. Each prints a single
//! PASS line; a failed assertion marks the criterion failed.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mathmesh::catalog;
use mathmesh::dynamics::{detect_bifurcations, feigenbaum_delta, integrate, FlowField};
use mathmesh::geom::{unit_cube, vec3, IndexedMesh, Vec3};
use mathmesh::implicit::{field_intersection, marching_cubes, GridSpec, ScalarField};
use mathmesh::io::{
    heightfield_to_mesh, read_pgm, read_stl, write_obj, write_scad, write_stl_ascii,
    write_stl_binary, PgmOptions,
};
use mathmesh::tessellate::{
    circle_path, icosahedron, icosahedron_vertices, revolve, tube, uv_sphere, Profile2,
};
use mathmesh::validate::{analyze, connected_components, repair};

fn build(name: &str) -> IndexedMesh {
    catalog::build_scene(name, &HashMap::new()).expect("scene builds")
}

fn rel_err(value: f64, target: f64) -> f64 {
    (value - target).abs() / target.abs()
}

#[test]
fn criterion_01_sphere_volume() {
    let t0 = Instant::now();
    let mesh = build("sphere");
    let elapsed = t0.elapsed().as_secs_f64();
    let vol = mesh.signed_volume();
    let target = 4.0 * PI / 3.0;
    let err = rel_err(vol, target);
    assert!(err < 0.01, "sphere volume {vol} vs {target}");
    assert!(elapsed < 1.0, "sphere took {elapsed:.2}s");
    println!("criterion 01 PASS: sphere volume rel err {err:.5} in {elapsed:.2}s");
}

#[test]
fn criterion_02_hemisphere_identity() {
    let t0 = Instant::now();
    let target = 2.0 * PI / 3.0;

    let n = 128;
    let mut profile = vec![(0.0, 0.0)];
    for i in 0..=n {
        let phi = PI / 2.0 * i as f64 / n as f64;
        profile.push((phi.cos(), phi.sin()));
    }
    let hemisphere = revolve(&Profile2::new(profile).unwrap(), 256).unwrap();
    let hv = hemisphere.signed_volume();

    let b = (vec3(-1.05, -1.05, -0.05), vec3(1.05, 1.05, 1.05));
    let field = field_intersection(vec![
        ScalarField::new(|p: Vec3| p.x * p.x + p.y * p.y - 1.0, b).unwrap(),
        ScalarField::new(|p: Vec3| -p.z, b).unwrap(),
        ScalarField::new(|p: Vec3| p.z - 1.0, b).unwrap(),
        ScalarField::new(|p: Vec3| p.z * p.z - (p.x * p.x + p.y * p.y), b).unwrap(),
    ])
    .unwrap();
    let out = marching_cubes(&field, GridSpec::cubic(96)).unwrap();
    assert!(!out.boundary_truncated);
    let cv = out.mesh.signed_volume();

    let elapsed = t0.elapsed().as_secs_f64();
    let he = rel_err(hv, target);
    let ce = rel_err(cv, target);
    assert!(he < 0.01, "hemisphere volume {hv} vs {target}");
    assert!(ce < 0.01, "cone-complement volume {cv} vs {target}");
    assert!(elapsed < 10.0, "took {elapsed:.2}s");
    println!(
        "criterion 02 PASS: hemisphere rel err {he:.5}, cone-complement rel err {ce:.5} in {elapsed:.2}s"
    );
}

#[test]
fn criterion_03_dome_prism_ratio() {
    let t0 = Instant::now();
    let b = (vec3(-1.05, -1.05, -0.05), vec3(1.05, 1.05, 1.05));
    let field = field_intersection(vec![
        ScalarField::new(|p: Vec3| p.x * p.x + p.z * p.z - 1.0, b).unwrap(),
        ScalarField::new(|p: Vec3| p.y * p.y + p.z * p.z - 1.0, b).unwrap(),
        ScalarField::new(|p: Vec3| -p.z, b).unwrap(),
    ])
    .unwrap();
    let out = marching_cubes(&field, GridSpec::cubic(128)).unwrap();
    assert!(!out.boundary_truncated);
    let dome = out.mesh.signed_volume();
    let prism = 2.0 * 2.0 * 1.0; // circumscribing 2 x 2 x 1 box
    let ratio = dome / prism;
    let elapsed = t0.elapsed().as_secs_f64();
    assert!(rel_err(ratio, 2.0 / 3.0) < 0.02, "ratio {ratio}");
    assert!(elapsed < 30.0, "took {elapsed:.2}s");
    println!("criterion 03 PASS: dome/prism ratio {ratio:.5} in {elapsed:.2}s");
}

#[test]
fn criterion_04_gauss_bonnet() {
    let cases: Vec<(&str, IndexedMesh, f64)> = vec![
        ("cube", unit_cube(), 2.0),
        ("icosahedron", icosahedron(), 2.0),
        ("uv-sphere", uv_sphere(Vec3::ZERO, 1.0, 32, 16).unwrap(), 2.0),
        (
            "torus tube",
            tube(&circle_path(2.0, 128).unwrap(), 0.5, 16).unwrap(),
            0.0,
        ),
        ("thick moebius", build("moebius_thick"), 0.0),
    ];
    for (name, mesh, chi) in &cases {
        let tc = mesh.total_curvature().expect("closed mesh");
        assert!(
            (tc - chi).abs() < 1e-9,
            "{name}: total curvature {tc} vs chi {chi}"
        );
    }
    println!("criterion 04 PASS: angle-defect totals match chi on {} solids", cases.len());
}

#[test]
fn criterion_05_kissing_configuration() {
    // oracle from the generating directions, before any meshing
    let centers: Vec<Vec3> = icosahedron_vertices()
        .into_iter()
        .map(|v| v * (2.0 / v.norm()))
        .collect();
    assert_eq!(centers.len(), 12);
    for c in &centers {
        assert!((c.norm() - 2.0).abs() < 1e-12);
    }
    let mut min_pair = f64::INFINITY;
    for i in 0..12 {
        for j in i + 1..12 {
            min_pair = min_pair.min((centers[i] - centers[j]).norm());
        }
    }
    let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
    let expected_min = 4.0 / (2.0 + phi).sqrt();
    assert!((min_pair - expected_min).abs() < 1e-9);
    assert!(min_pair > 2.0 + 0.05, "outer spheres clear each other: {min_pair}");

    let parts = connected_components(&build("kissing12"));
    assert_eq!(parts.len(), 13);
    let mut outer = 0;
    for p in &parts {
        let c = p.centroid();
        if c.norm() < 0.5 {
            continue; // central sphere
        }
        outer += 1;
        assert!(
            centers.iter().any(|k| (*k - c).norm() < 1e-6),
            "component centroid {c:?} matches an oracle center"
        );
    }
    assert_eq!(outer, 12);
    println!(
        "criterion 05 PASS: 13 components, outer centers at 2, min spacing {min_pair:.4} > 2"
    );
}

#[test]
fn criterion_06_rk4_order_and_lorenz() {
    // x'' = -x as a first-order system; exact solution stays on the unit circle
    let sho = FlowField::new("sho", vec![], |p: Vec3| vec3(p.y, -p.x, 0.0));
    let exact = vec3(10.0f64.cos(), -(10.0f64.sin()), 0.0);
    let mut errors = Vec::new();
    for &h in &[0.1f64, 0.05, 0.025] {
        let n = (10.0 / h).round() as usize;
        let orbit = integrate(&sho, vec3(1.0, 0.0, 0.0), h, n).unwrap();
        let last = *orbit.points.points.last().unwrap();
        errors.push((last - exact).norm());
    }
    let r1 = errors[0] / errors[1];
    let r2 = errors[1] / errors[2];
    assert!((12.0..=20.0).contains(&r1), "ratio {r1}");
    assert!((12.0..=20.0).contains(&r2), "ratio {r2}");

    let lorenz = FlowField::lorenz(10.0, 28.0, 8.0 / 3.0);
    let orbit = integrate(&lorenz, vec3(0.0, 1.0, 0.0), 0.01, 1000).unwrap();
    let max_norm = orbit
        .points
        .points
        .iter()
        .map(|p| p.norm())
        .fold(0.0, f64::max);
    assert!(max_norm < 60.0, "trajectory norm peaked at {max_norm}");
    println!(
        "criterion 06 PASS: error ratios {r1:.1}, {r2:.1} per halving; lorenz max norm {max_norm:.1}"
    );
}

fn sine_map(c: f64, x: f64) -> f64 {
    c * (PI * x).sin()
}

/// True when the orbit from 0.3 settles onto a cycle of length `p`.
fn oracle_has_cycle(c: f64, p: usize) -> bool {
    let mut x = 0.3;
    for _ in 0..200_000 {
        x = sine_map(c, x);
    }
    let x0 = x;
    for rep in 1..=3 {
        for _ in 0..p {
            x = sine_map(c, x);
        }
        if (x - x0).abs() > 1e-5 {
            return false;
        }
        let _ = rep;
    }
    true
}

#[test]
fn criterion_07_feigenbaum() {
    let bifurcations = detect_bifurcations(4).unwrap();
    assert_eq!(bifurcations.len(), 4);
    let deltas = feigenbaum_delta(&bifurcations).unwrap();
    let delta = *deltas.last().unwrap();
    assert!(rel_err(delta, 4.669) < 0.10, "delta {delta}");

    // independent bisection on the cycle-length predicate
    let periods = [1usize, 2, 4, 8];
    for (b, &p) in bifurcations.iter().zip(&periods) {
        let mut lo = b - 0.01;
        let mut hi = b + 0.01;
        assert!(oracle_has_cycle(lo, p), "period {p} below the doubling at {b}");
        assert!(!oracle_has_cycle(hi, p), "period > {p} above the doubling at {b}");
        for _ in 0..18 {
            let mid = 0.5 * (lo + hi);
            if oracle_has_cycle(mid, p) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        assert!(
            (oracle - b).abs() < 5e-3,
            "doubling at {b} vs oracle {oracle}"
        );
    }
    println!(
        "criterion 07 PASS: delta {delta:.3} from doublings at {:?}",
        bifurcations.iter().map(|b| (b * 1e4).round() / 1e4).collect::<Vec<_>>()
    );
}

#[test]
fn criterion_08_tricylinder_volume() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let n = 10_000_000usize;
    let mut hits = 0usize;
    for _ in 0..n {
        let x = rng.gen::<f64>() * 2.0 - 1.0;
        let y = rng.gen::<f64>() * 2.0 - 1.0;
        let z = rng.gen::<f64>() * 2.0 - 1.0;
        if x * x + y * y <= 1.0 && y * y + z * z <= 1.0 && x * x + z * z <= 1.0 {
            hits += 1;
        }
    }
    let mc_volume = 8.0 * hits as f64 / n as f64;
    let analytic = 16.0 - 8.0 * 2.0f64.sqrt();
    assert!(rel_err(mc_volume, analytic) < 0.005, "sampled {mc_volume}");

    let vol = build("tricylinder").signed_volume();
    assert!(rel_err(vol, mc_volume) < 0.02, "mesh {vol} vs sampled {mc_volume}");
    println!("criterion 08 PASS: mesh volume {vol:.4} vs sampled {mc_volume:.4}");
}

#[test]
fn criterion_09_codec_round_trips() {
    let mesh = uv_sphere(vec3(0.2, -0.3, 0.5), 1.3, 24, 12).unwrap();

    let b1 = write_stl_binary(&mesh).unwrap();
    let m1 = read_stl(&b1).unwrap();
    let b2 = write_stl_binary(&m1).unwrap();
    let m2 = read_stl(&b2).unwrap();
    let b3 = write_stl_binary(&m2).unwrap();
    assert_eq!(b2, b3, "binary STL is a fixed point after one write");

    let ascii = write_stl_ascii(&mesh, "probe").unwrap();
    let ma = read_stl(&ascii).unwrap();
    assert_eq!(ma.faces.len(), mesh.faces.len());
    for (fa, fb) in mesh.faces.iter().zip(&ma.faces) {
        let ta = mesh.triangle(*fa);
        let tb = ma.triangle(*fb);
        for (a, b) in [(ta.a, tb.a), (ta.b, tb.b), (ta.c, tb.c)] {
            assert!((a - b).norm() < 1e-6);
        }
    }

    let sample = concat!(
        "solid example\n",
        "  facet normal  2.45300293E-01 -3.88517678E-02  9.68668342E-01\n",
        "    outer loop\n",
        "      vertex  1.64594591E-01  0.00000000E+00  9.86361325E-01\n",
        "      vertex  1.56538755E-01 -5.08625247E-02  9.86361325E-01\n",
        "      vertex  3.08807552E-01 -1.00337654E-01  9.45817232E-01\n",
        "    endloop\n",
        "  endfacet\n",
        "endsolid example\n"
    );
    let parsed = read_stl(sample.as_bytes()).unwrap();
    assert_eq!(parsed.faces.len(), 1);
    let t = parsed.triangle(parsed.faces[0]);
    assert_eq!((t.a.x, t.a.y, t.a.z), (1.64594591e-1, 0.0, 9.86361325e-1));
    assert_eq!((t.b.x, t.b.y, t.b.z), (1.56538755e-1, -5.08625247e-2, 9.86361325e-1));
    assert_eq!((t.c.x, t.c.y, t.c.z), (3.08807552e-1, -1.00337654e-1, 9.45817232e-1));
    println!("criterion 09 PASS: binary/ascii round trips and reference facet parse");
}

fn meshes_identical(a: &IndexedMesh, b: &IndexedMesh) -> bool {
    a.faces == b.faces
        && a.vertices.len() == b.vertices.len()
        && a.vertices.iter().zip(&b.vertices).all(|(p, q)| {
            p.x.to_bits() == q.x.to_bits()
                && p.y.to_bits() == q.y.to_bits()
                && p.z.to_bits() == q.z.to_bits()
        })
}

#[test]
fn criterion_10_repair() {
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cube = unit_cube();
        for f in cube.faces.iter_mut() {
            if rng.gen::<bool>() {
                f.swap(1, 2);
            }
        }
        let fixed = repair(&cube).mesh;
        let report = analyze(&fixed);
        assert!(report.orientation_consistent, "seed {seed}");
        let vol = report.signed_volume.expect("closed cube");
        assert!((vol - 1.0).abs() < 1e-12, "seed {seed}: volume {vol}");
    }

    for spec in catalog::list_scenes() {
        let once = repair(&build(spec.name)).mesh;
        let twice = repair(&once).mesh;
        assert!(meshes_identical(&once, &twice), "{} repair idempotent", spec.name);
    }
    println!("criterion 10 PASS: 100 flip seeds restored, repair idempotent on the catalog");
}

#[test]
fn criterion_11_heightfield_ramp() {
    let mut pgm = String::from("P2\n16 16\n255\n");
    for _row in 0..16 {
        for col in 0..16 {
            pgm.push_str(&format!("{} ", col * 17));
        }
        pgm.push('\n');
    }
    let grid = read_pgm(
        pgm.as_bytes(),
        PgmOptions { pitch: 0.5, z_scale: 2.0, base: -1.0 },
    )
    .unwrap();
    let mesh = heightfield_to_mesh(&grid).unwrap();
    let report = analyze(&mesh);
    assert!(report.watertight);

    // prism sum over the two triangles of each grid cell
    let (pitch, base) = (grid.pitch, grid.base);
    let tri_area = pitch * pitch / 2.0;
    let mut oracle = 0.0;
    for r in 0..15 {
        for c in 0..15 {
            let h = |r: usize, c: usize| grid.heights[r][c] - base;
            oracle += tri_area * (h(r, c) + h(r + 1, c + 1) + h(r, c + 1)) / 3.0;
            oracle += tri_area * (h(r, c) + h(r + 1, c) + h(r + 1, c + 1)) / 3.0;
        }
    }
    let vol = report.signed_volume.expect("closed terrain");
    assert!(rel_err(vol, oracle) < 1e-6, "volume {vol} vs oracle {oracle}");
    println!("criterion 11 PASS: ramp terrain watertight, volume {vol:.6} matches prism sum");
}

#[test]
fn criterion_12_catalog_smoke() {
    let t0 = Instant::now();
    let scenes = catalog::list_scenes();
    for spec in &scenes {
        let m1 = build(spec.name);
        let m2 = build(spec.name);
        assert!(meshes_identical(&m1, &m2), "{} deterministic", spec.name);

        let repaired = repair(&m1).mesh;
        let report = analyze(&repaired);
        assert_eq!(report.degenerate_face_count, 0, "{}", spec.name);
        assert!(report.orientation_consistent, "{}", spec.name);
        if spec.closed {
            assert!(report.watertight, "{}", spec.name);
            assert!(report.signed_volume.unwrap() > 0.0, "{}", spec.name);
        }

        let binary = write_stl_binary(&repaired).unwrap();
        assert_eq!(read_stl(&binary).unwrap().faces.len(), repaired.faces.len());
        assert!(write_stl_ascii(&repaired, spec.name).unwrap().starts_with(b"solid "));
        assert!(!write_obj(&repaired).unwrap().is_empty());
        assert!(write_scad(&repaired).unwrap().starts_with(b"polyhedron"));
    }
    let elapsed = t0.elapsed().as_secs_f64();
    assert!(elapsed < 180.0, "catalog smoke took {elapsed:.1}s");
    println!(
        "criterion 12 PASS: {} scenes built, repaired and encoded in {elapsed:.1}s",
        scenes.len()
    );
}
