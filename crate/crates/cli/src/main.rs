//! mathmesh command line: generate catalog scenes, convert mesh formats,
//! analyze and repair meshes, and build terrain solids from PGM
//! heightfields.
//!
//! Exit codes: 0 success, 1 input/usage error, 2 validation warning.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mathmesh::catalog::{self, BuildOptions};
use mathmesh::io::{
    heightfield_to_mesh, read_pgm, read_stl, write_obj, write_scad, write_stl_ascii,
    write_stl_binary, PgmOptions,
};
use mathmesh::validate::{analyze, repair, MeshReport};
use mathmesh::{IndexedMesh, MeshError};

#[derive(Parser)]
#[command(name = "mathmesh", version, about = "Mathematical descriptions to printable meshes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    StlAscii,
    StlBinary,
    Obj,
    Scad,
}

#[derive(Subcommand)]
enum Command {
    /// List the scene registry with parameter defaults
    List {
        /// Machine-readable JSON output
        #[arg(long)]
        json: bool,
    },
    /// Generate a catalog scene, repair it, and write a mesh file
    Gen(GenArgs),
    /// Convert between mesh formats (format inferred from extension)
    Convert {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Write ASCII STL instead of binary for .stl outputs
        #[arg(long)]
        ascii: bool,
    },
    /// Analyze a mesh file and print a printability report
    Check {
        input: PathBuf,
        /// Machine-readable JSON report
        #[arg(long)]
        json: bool,
    },
    /// Repair a mesh file and write the result
    Repair {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Write ASCII STL instead of binary for .stl outputs
        #[arg(long)]
        ascii: bool,
    },
    /// Build a watertight terrain solid from a PGM heightfield
    Heightfield {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Grid cell pitch in model units
        #[arg(long, default_value_t = 1.0)]
        pitch: f64,
        /// Height assigned to a full-brightness pixel
        #[arg(long, default_value_t = 1.0)]
        z_scale: f64,
        /// Base level of the solid (must be below the minimum height)
        #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
        base: f64,
        /// Write ASCII STL instead of binary for .stl outputs
        #[arg(long)]
        ascii: bool,
    },
}

#[derive(Args)]
struct GenArgs {
    scene: String,
    #[arg(short, long)]
    output: PathBuf,
    /// Output format (default: binary STL)
    #[arg(long, value_enum, default_value_t = Format::StlBinary)]
    format: Format,
    /// Scene parameter override, repeatable: --param key=value
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Digit file for the digit_walk scene (overrides embedded data)
    #[arg(long)]
    digits: Option<PathBuf>,
    /// key=value config file with defaults (format, resolution, param.X)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Machine-readable JSON report
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, MeshError> {
    match cli.command {
        Command::List { json } => cmd_list(json),
        Command::Gen(args) => cmd_gen(args),
        Command::Convert {
            input,
            output,
            ascii,
        } => cmd_convert(&input, &output, ascii),
        Command::Check { input, json } => cmd_check(&input, json),
        Command::Repair {
            input,
            output,
            ascii,
        } => cmd_repair(&input, &output, ascii),
        Command::Heightfield {
            input,
            output,
            pitch,
            z_scale,
            base,
            ascii,
        } => cmd_heightfield(&input, &output, pitch, z_scale, base, ascii),
    }
}

fn cmd_list(json: bool) -> Result<ExitCode, MeshError> {
    let scenes = catalog::list_scenes();
    if json {
        let entries: Vec<serde_json::Value> = scenes
            .iter()
            .map(|s| {
                serde_json::json!({
                    "name": s.name,
                    "description": s.description,
                    "closed": s.closed,
                    "defaults": s.defaults.iter().cloned().collect::<HashMap<_, _>>(),
                })
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&entries).expect("serializable"));
    } else {
        for s in scenes {
            let defaults = s
                .defaults
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(" ");
            println!("{:<18} {}  [{defaults}]", s.name, s.description);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_kv(s: &str) -> Result<(String, f64), MeshError> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| MeshError::Parameter(format!("expected key=value, got '{s}'")))?;
    let value: f64 = v
        .trim()
        .parse()
        .map_err(|_| MeshError::Parameter(format!("bad numeric value in '{s}'")))?;
    Ok((k.trim().to_string(), value))
}

#[derive(Default)]
struct Config {
    format: Option<Format>,
    resolution: Option<f64>,
    params: HashMap<String, f64>,
}

fn read_config(path: &Path) -> Result<Config, MeshError> {
    let text = std::fs::read_to_string(path)?;
    let mut cfg = Config::default();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            MeshError::Parameter(format!("config line {}: expected key=value", i + 1))
        })?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "format" => {
                cfg.format = Some(
                    Format::from_str(value, true)
                        .map_err(|e| MeshError::Parameter(format!("config line {}: {e}", i + 1)))?,
                )
            }
            "resolution" => {
                cfg.resolution = Some(value.parse().map_err(|_| {
                    MeshError::Parameter(format!("config line {}: bad resolution", i + 1))
                })?)
            }
            _ => match key.strip_prefix("param.") {
                Some(name) => {
                    let v: f64 = value.parse().map_err(|_| {
                        MeshError::Parameter(format!("config line {}: bad value", i + 1))
                    })?;
                    cfg.params.insert(name.to_string(), v);
                }
                None => {
                    return Err(MeshError::Parameter(format!(
                        "config line {}: unknown key '{key}'",
                        i + 1
                    )))
                }
            },
        }
    }
    Ok(cfg)
}

/// Write atomically: temp file in the same directory, then rename.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), MeshError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let tmp = match dir {
        Some(d) => d.join(format!(
            ".{}.tmp",
            path.file_name().unwrap_or_default().to_string_lossy()
        )),
        None => PathBuf::from(format!(
            ".{}.tmp",
            path.file_name().unwrap_or_default().to_string_lossy()
        )),
    };
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn encode(mesh: &IndexedMesh, format: Format, name: &str) -> Result<Vec<u8>, MeshError> {
    match format {
        Format::StlAscii => write_stl_ascii(mesh, name),
        Format::StlBinary => write_stl_binary(mesh),
        Format::Obj => write_obj(mesh),
        Format::Scad => write_scad(mesh),
    }
}

fn format_from_extension(path: &Path, ascii: bool) -> Result<Format, MeshError> {
    match path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
        .as_deref()
    {
        Some("stl") => Ok(if ascii { Format::StlAscii } else { Format::StlBinary }),
        Some("obj") => Ok(Format::Obj),
        Some("scad") => Ok(Format::Scad),
        other => Err(MeshError::Parameter(format!(
            "cannot infer format from extension {:?}; use .stl, .obj or .scad",
            other.unwrap_or("")
        ))),
    }
}

fn print_report(report: &MeshReport, json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(report).expect("serializable"));
        return;
    }
    println!(
        "vertices {} (welded {}), edges {}, faces {}",
        report.vertex_count, report.welded_vertex_count, report.edge_count, report.face_count
    );
    println!(
        "boundary edges {}, non-manifold edges {}, degenerate faces {}, components {}",
        report.boundary_edge_count,
        report.non_manifold_edge_count,
        report.degenerate_face_count,
        report.component_count
    );
    println!(
        "watertight: {}, orientation consistent: {}",
        report.watertight, report.orientation_consistent
    );
    match report.euler_characteristic {
        Some(chi) => println!("euler characteristic: {chi}"),
        None => println!("euler characteristic: undefined (not edge-manifold)"),
    }
    println!("surface area: {}", report.surface_area);
    match report.signed_volume {
        Some(v) => println!("signed volume: {v}"),
        None => println!("signed volume: undefined (open or inconsistent mesh)"),
    }
    match report.total_curvature {
        Some(c) => println!("total curvature: {c}"),
        None => println!("total curvature: undefined"),
    }
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode, MeshError> {
    let cfg = match &args.config {
        Some(path) => read_config(path)?,
        None => Config::default(),
    };
    let spec = catalog::scene_spec(&args.scene)?;

    let mut params: HashMap<String, f64> = cfg.params;
    if let Some(res) = cfg.resolution {
        if spec.defaults.iter().any(|(k, _)| *k == "res") {
            params.insert("res".to_string(), res);
        }
    }
    for kv in &args.params {
        let (k, v) = parse_kv(kv)?;
        params.insert(k, v);
    }
    let format = cfg.format.filter(|_| args.format == Format::StlBinary).unwrap_or(args.format);

    let opts = BuildOptions {
        digits: match &args.digits {
            Some(path) => Some(std::fs::read_to_string(path)?),
            None => None,
        },
    };
    let mesh = catalog::build_scene_with(&args.scene, &params, &opts)?;
    let repaired = repair(&mesh).mesh;
    let report = analyze(&repaired);
    let bytes = encode(&repaired, format, &args.scene)?;
    write_atomic(&args.output, &bytes)?;
    print_report(&report, args.json);

    let ok = report.orientation_consistent && (!spec.closed || report.watertight);
    if ok {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("warning: validation failed; file written anyway");
        Ok(ExitCode::from(2))
    }
}

fn cmd_convert(input: &Path, output: &Path, ascii: bool) -> Result<ExitCode, MeshError> {
    let bytes = std::fs::read(input)?;
    let mesh = read_stl(&bytes)?;
    let format = format_from_extension(output, ascii)?;
    let name = output
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "mesh".to_string());
    let out = encode(&mesh, format, &name)?;
    write_atomic(output, &out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(input: &Path, json: bool) -> Result<ExitCode, MeshError> {
    let bytes = std::fs::read(input)?;
    let mesh = read_stl(&bytes)?;
    let report = analyze(&mesh);
    print_report(&report, json);
    if report.watertight && report.orientation_consistent {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(2))
    }
}

fn cmd_repair(input: &Path, output: &Path, ascii: bool) -> Result<ExitCode, MeshError> {
    let bytes = std::fs::read(input)?;
    let mesh = read_stl(&bytes)?;
    let before = analyze(&mesh);
    let outcome = repair(&mesh);
    let after = analyze(&outcome.mesh);
    let format = format_from_extension(output, ascii)?;
    let name = output
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "mesh".to_string());
    let out = encode(&outcome.mesh, format, &name)?;
    write_atomic(output, &out)?;
    println!("before:");
    print_report(&before, false);
    println!(
        "repair: {} holes filled, {} holes left, {} non-orientable components",
        outcome.holes_filled, outcome.holes_left, outcome.non_orientable_components
    );
    println!("after:");
    print_report(&after, false);
    if outcome.non_orientable_components > 0 {
        Ok(ExitCode::from(2))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn cmd_heightfield(
    input: &Path,
    output: &Path,
    pitch: f64,
    z_scale: f64,
    base: f64,
    ascii: bool,
) -> Result<ExitCode, MeshError> {
    let bytes = std::fs::read(input)?;
    let grid = read_pgm(&bytes, PgmOptions { pitch, z_scale, base })?;
    let mesh = heightfield_to_mesh(&grid)?;
    let repaired = repair(&mesh).mesh;
    let report = analyze(&repaired);
    let format = format_from_extension(output, ascii)?;
    let name = output
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "terrain".to_string());
    let out = encode(&repaired, format, &name)?;
    write_atomic(output, &out)?;
    print_report(&report, false);
    if report.watertight {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(2))
    }
}
