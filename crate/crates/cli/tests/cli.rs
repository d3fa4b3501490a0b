//! End-to-end tests driving the installed binary.

use std::path::Path;
use std::process::{Command, Output};

use mathmesh::geom::unit_cube;
use mathmesh::io::{read_stl, write_stl_binary};
use mathmesh::validate::analyze;

fn mathmesh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mathmesh"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mathmesh"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn list_names_are_stable_and_sorted() {
    let out = mathmesh(&["list"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let names: Vec<&str> = text
        .lines()
        .filter_map(|l| l.split_whitespace().next())
        .collect();
    assert_eq!(names.len(), 16);
    let mut sorted = names.clone();
    sorted.sort_unstable();
    assert_eq!(names, sorted);
    assert!(names.contains(&"sphere"));
    assert!(names.contains(&"voxel_escher"));
}

#[test]
fn list_json_is_machine_readable() {
    let out = mathmesh(&["list", "--json"]);
    assert_eq!(code(&out), 0);
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let scenes = parsed.as_array().unwrap();
    assert_eq!(scenes.len(), 16);
    let sphere = scenes
        .iter()
        .find(|s| s["name"] == "sphere")
        .expect("sphere registered");
    assert_eq!(sphere["closed"], true);
    assert_eq!(sphere["defaults"]["nu"], 64.0);
}

#[test]
fn gen_writes_valid_binary_stl() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sphere.stl");
    let out = mathmesh(&["gen", "sphere", "-o", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let bytes = std::fs::read(&path).unwrap();
    let n = u32::from_le_bytes(bytes[80..84].try_into().unwrap()) as usize;
    assert_eq!(bytes.len(), 84 + 50 * n);
    let mesh = read_stl(&bytes).unwrap();
    assert!(analyze(&mesh).watertight);
}

#[test]
fn gen_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.stl");
    let out = mathmesh(&[
        "gen", "sphere", "-o", path.to_str().unwrap(), "--json",
        "--param", "nu=16", "--param", "nv=8",
    ]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["watertight"], true);
    assert_eq!(report["euler_characteristic"], 2);
}

#[test]
fn gen_unknown_scene_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.stl");
    let out = mathmesh(&["gen", "nonsense", "-o", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    assert!(!path.exists(), "no partial output on failure");
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0, "no temp file left");
}

#[test]
fn gen_unknown_param_lists_valid_names() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.stl");
    let out = mathmesh(&["gen", "sphere", "-o", path.to_str().unwrap(), "--param", "bogus=1"]);
    assert_eq!(code(&out), 1);
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("bogus"));
    assert!(err.contains("nu"), "error names the valid parameters: {err}");
    assert!(!path.exists());
}

#[test]
fn gen_ascii_and_scad_formats() {
    let dir = tempfile::tempdir().unwrap();
    let stl = dir.path().join("s.stl");
    let out = mathmesh(&[
        "gen", "sphere", "-o", stl.to_str().unwrap(), "--format", "stl-ascii",
        "--param", "nu=8", "--param", "nv=4",
    ]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&stl).unwrap();
    assert!(text.starts_with("solid sphere"));
    assert!(text.trim_end().ends_with("endsolid sphere"));

    let scad = dir.path().join("s.scad");
    let out = mathmesh(&[
        "gen", "sphere", "-o", scad.to_str().unwrap(), "--format", "scad",
        "--param", "nu=8", "--param", "nv=4",
    ]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&scad).unwrap();
    assert!(text.starts_with("polyhedron(points = ["));
}

#[test]
fn gen_reads_config_file_with_cli_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("mesh.conf");
    std::fs::write(&cfg, "# defaults\nformat = scad\nresolution = 24\n").unwrap();
    let out_path = dir.path().join("t.out");
    let out = mathmesh(&[
        "gen", "tricylinder", "-o", out_path.to_str().unwrap(),
        "--config", cfg.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.starts_with("polyhedron"), "config format applies");

    // explicit --format beats the config; unknown config key fails cleanly
    let out = mathmesh(&[
        "gen", "sphere", "-o", out_path.to_str().unwrap(),
        "--config", cfg.to_str().unwrap(), "--param", "r=1",
        "--format", "obj",
    ]);
    assert_eq!(code(&out), 0);
    assert!(std::fs::read_to_string(&out_path).unwrap().starts_with("v "));

    std::fs::write(&cfg, "colour = red\n").unwrap();
    let out = mathmesh(&[
        "gen", "sphere", "-o", out_path.to_str().unwrap(),
        "--config", cfg.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn convert_binary_ascii_binary_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.stl");
    let b = dir.path().join("b.stl");
    let c = dir.path().join("c.stl");
    let out = mathmesh(&["gen", "voxel_escher", "-o", a.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let out = mathmesh(&["convert", a.to_str().unwrap(), "-o", b.to_str().unwrap(), "--ascii"]);
    assert_eq!(code(&out), 0);
    assert!(std::fs::read_to_string(&b).unwrap().starts_with("solid b"));
    let out = mathmesh(&["convert", b.to_str().unwrap(), "-o", c.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_c = std::fs::read(&c).unwrap();
    assert_eq!(bytes_a[84..], bytes_c[84..], "facet payloads identical");
}

#[test]
fn convert_to_obj_and_unknown_extension() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.stl");
    mathmesh(&["gen", "sphere", "-o", a.to_str().unwrap(), "--param", "nu=8", "--param", "nv=4"]);
    let obj = dir.path().join("a.obj");
    let out = mathmesh(&["convert", a.to_str().unwrap(), "-o", obj.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(std::fs::read_to_string(&obj).unwrap().contains("\nf "));

    let bad = dir.path().join("a.xyz");
    let out = mathmesh(&["convert", a.to_str().unwrap(), "-o", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(!bad.exists());
}

#[test]
fn check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.stl");
    std::fs::write(&good, write_stl_binary(&unit_cube()).unwrap()).unwrap();
    let out = mathmesh(&["check", good.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("watertight: true"));

    // an open single-triangle surface is a validation warning, not an error
    let open = dir.path().join("open.stl");
    std::fs::write(
        &open,
        concat!(
            "solid open\n",
            "  facet normal  0.00000000E+00  0.00000000E+00  1.00000000E+00\n",
            "    outer loop\n",
            "      vertex  0.00000000E+00  0.00000000E+00  0.00000000E+00\n",
            "      vertex  1.00000000E+00  0.00000000E+00  0.00000000E+00\n",
            "      vertex  0.00000000E+00  1.00000000E+00  0.00000000E+00\n",
            "    endloop\n",
            "  endfacet\n",
            "endsolid open\n"
        ),
    )
    .unwrap();
    let out = mathmesh(&["check", open.to_str().unwrap()]);
    assert_eq!(code(&out), 2);

    let garbage = dir.path().join("garbage.stl");
    std::fs::write(&garbage, b"solid nope\n  facet oops\n").unwrap();
    let out = mathmesh(&["check", garbage.to_str().unwrap()]);
    assert_eq!(code(&out), 1);

    let out = mathmesh(&["check", dir.path().join("missing.stl").to_str().unwrap()]);
    assert_eq!(code(&out), 1);

    let json = mathmesh(&["check", good.to_str().unwrap(), "--json"]);
    let report: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(report["face_count"], 12);
}

#[test]
fn repair_fixes_flipped_cube() {
    let dir = tempfile::tempdir().unwrap();
    let mut cube = unit_cube();
    for f in cube.faces.iter_mut().take(5) {
        f.swap(1, 2);
    }
    let broken = dir.path().join("broken.stl");
    std::fs::write(&broken, write_stl_binary(&cube).unwrap()).unwrap();
    let fixed = dir.path().join("fixed.stl");
    let out = mathmesh(&["repair", broken.to_str().unwrap(), "-o", fixed.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let mesh = read_stl(&std::fs::read(&fixed).unwrap()).unwrap();
    let report = analyze(&mesh);
    assert!(report.watertight && report.orientation_consistent);
    assert!((report.signed_volume.unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn heightfield_from_pgm() {
    let dir = tempfile::tempdir().unwrap();
    let pgm = dir.path().join("bump.pgm");
    let mut text = String::from("P2\n4 4\n255\n");
    for r in 0..4 {
        for c in 0..4 {
            text.push_str(&format!("{} ", (r * 4 + c) * 17));
        }
        text.push('\n');
    }
    std::fs::write(&pgm, text).unwrap();
    let out_path = dir.path().join("bump.stl");
    let out = mathmesh(&[
        "heightfield", pgm.to_str().unwrap(), "-o", out_path.to_str().unwrap(),
        "--pitch", "0.5", "--z-scale", "2", "--base", "-0.5",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let mesh = read_stl(&std::fs::read(&out_path).unwrap()).unwrap();
    let report = analyze(&mesh);
    assert!(report.watertight);
    assert!(report.signed_volume.unwrap() > 0.0);
}

#[test]
fn gen_digit_walk_with_digit_file() {
    let dir = tempfile::tempdir().unwrap();
    let digits = dir.path().join("digits.txt");
    std::fs::write(&digits, "0123450123450123450123450").unwrap();
    let out_path = dir.path().join("walk.stl");
    let out = run_in(
        dir.path(),
        &[
            "gen", "digit_walk", "-o", "walk.stl",
            "--digits", digits.to_str().unwrap(),
            "--param", "count=24",
        ],
    );
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let mesh = read_stl(&std::fs::read(&out_path).unwrap()).unwrap();
    assert!(!mesh.faces.is_empty());
}
