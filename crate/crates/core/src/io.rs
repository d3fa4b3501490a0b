//! Mesh codecs (STL ASCII/binary read+write, OBJ write, SCAD polyhedron
//! write) and PGM heightfield ingestion.
//!
//! Text writers are byte-deterministic, end with exactly one trailing
//! newline and use LF only.

use std::fmt::Write as _;

use crate::error::{MeshError, Result};
use crate::geom::{vec3, IndexedMesh, Vec3, DEFAULT_WELD_TOL};

/// Scientific float in the fixed shape d.ddddddddE±dd (upper-case E,
/// two-digit exponent, negative zero normalized).
fn sci(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    let s = format!("{x:.8E}");
    // rustc prints the exponent without sign padding: normalize to E±dd
    let (mant, exp) = s.split_once('E').expect("exponent present");
    let (sign, digits) = match exp.strip_prefix('-') {
        Some(d) => ('-', d),
        None => ('+', exp),
    };
    format!("{mant}E{sign}{digits:0>2}")
}

/// The same number with a leading alignment space when non-negative,
/// matching common ASCII STL column layout.
fn sci_field(x: f64) -> String {
    let s = sci(x);
    if s.starts_with('-') {
        s
    } else {
        format!(" {s}")
    }
}

fn check_writable(mesh: &IndexedMesh) -> Result<()> {
    mesh.check_indices()?;
    for (i, v) in mesh.vertices.iter().enumerate() {
        if !v.is_finite() {
            return Err(MeshError::Codec(format!(
                "non-finite coordinate at vertex {i}"
            )));
        }
    }
    for (i, f) in mesh.faces.iter().enumerate() {
        if mesh.triangle(*f).normal().is_none() {
            return Err(MeshError::Codec(format!(
                "degenerate face {i} (zero area); run repair first"
            )));
        }
    }
    Ok(())
}

/// ASCII STL writer. Normals are recomputed from the CCW winding.
pub fn write_stl_ascii(mesh: &IndexedMesh, name: &str) -> Result<Vec<u8>> {
    check_writable(mesh)?;
    let mut out = String::new();
    writeln!(out, "solid {name}").unwrap();
    for f in &mesh.faces {
        let t = mesh.triangle(*f);
        let n = t.normal().expect("checked above");
        writeln!(
            out,
            "  facet normal {} {} {}",
            sci_field(n.x),
            sci_field(n.y),
            sci_field(n.z)
        )
        .unwrap();
        writeln!(out, "    outer loop").unwrap();
        for v in [t.a, t.b, t.c] {
            writeln!(
                out,
                "      vertex {} {} {}",
                sci_field(v.x),
                sci_field(v.y),
                sci_field(v.z)
            )
            .unwrap();
        }
        writeln!(out, "    endloop").unwrap();
        writeln!(out, "  endfacet").unwrap();
    }
    writeln!(out, "endsolid {name}").unwrap();
    Ok(out.into_bytes())
}

const BINARY_HEADER_TAG: &str = "mathmesh 0.1.0 binary STL";

/// Binary STL writer: 80-byte header, LE facet count, 50 bytes per facet.
pub fn write_stl_binary(mesh: &IndexedMesh) -> Result<Vec<u8>> {
    check_writable(mesh)?;
    if mesh.faces.len() > u32::MAX as usize {
        return Err(MeshError::Codec(format!(
            "too many facets for binary STL: {}",
            mesh.faces.len()
        )));
    }
    let to_f32 = |x: f64, what: &str| -> Result<f32> {
        let y = x as f32;
        if x.is_finite() && !y.is_finite() {
            return Err(MeshError::Codec(format!(
                "{what} coordinate {x} overflows 32-bit float range"
            )));
        }
        Ok(y)
    };
    let mut out = Vec::with_capacity(84 + 50 * mesh.faces.len());
    let mut header = [b' '; 80];
    header[..BINARY_HEADER_TAG.len()].copy_from_slice(BINARY_HEADER_TAG.as_bytes());
    out.extend_from_slice(&header);
    out.extend_from_slice(&(mesh.faces.len() as u32).to_le_bytes());
    for f in &mesh.faces {
        let t = mesh.triangle(*f);
        let n = t.normal().expect("checked above");
        for v in [n, t.a, t.b, t.c] {
            for x in [v.x, v.y, v.z] {
                out.extend_from_slice(&to_f32(x, "vertex")?.to_le_bytes());
            }
        }
        out.extend_from_slice(&0u16.to_le_bytes());
    }
    Ok(out)
}

/// Read STL, auto-detecting ASCII vs binary. Stored normals are
/// discarded; vertices are welded.
pub fn read_stl(bytes: &[u8]) -> Result<IndexedMesh> {
    let looks_ascii = bytes
        .iter()
        .position(|b| !b.is_ascii_whitespace())
        .map(|i| bytes[i..].starts_with(b"solid"))
        .unwrap_or(false);
    if looks_ascii {
        match read_stl_ascii(bytes) {
            Ok(m) => Ok(m),
            Err(ascii_err) => {
                // a binary file whose header happens to begin with "solid"
                if binary_size_consistent(bytes) {
                    read_stl_binary(bytes)
                } else {
                    Err(ascii_err)
                }
            }
        }
    } else {
        read_stl_binary(bytes)
    }
}

fn binary_size_consistent(bytes: &[u8]) -> bool {
    bytes.len() >= 84 && {
        let count = u32::from_le_bytes(bytes[80..84].try_into().unwrap()) as usize;
        bytes.len() == 84 + 50 * count
    }
}

fn read_stl_binary(bytes: &[u8]) -> Result<IndexedMesh> {
    if bytes.len() < 84 {
        return Err(MeshError::Codec(format!(
            "binary STL needs at least 84 bytes, got {}",
            bytes.len()
        )));
    }
    let count = u32::from_le_bytes(bytes[80..84].try_into().unwrap()) as usize;
    let expect = 84 + 50 * count;
    if bytes.len() != expect {
        return Err(MeshError::Codec(format!(
            "binary STL size mismatch: header declares {count} facets ({expect} bytes), file has {}",
            bytes.len()
        )));
    }
    let mut mesh = IndexedMesh::empty();
    for fi in 0..count {
        let base = 84 + 50 * fi;
        let f32_at = |off: usize| {
            f32::from_le_bytes(bytes[base + off..base + off + 4].try_into().unwrap()) as f64
        };
        // skip the stored normal (offsets 0..12)
        let idx0 = mesh.vertices.len();
        for k in 0..3 {
            let off = 12 + 12 * k;
            let v = vec3(f32_at(off), f32_at(off + 4), f32_at(off + 8));
            if !v.is_finite() {
                return Err(MeshError::Codec(format!(
                    "non-finite vertex in facet {fi}"
                )));
            }
            mesh.vertices.push(v);
        }
        mesh.faces.push([idx0, idx0 + 1, idx0 + 2]);
    }
    Ok(mesh.weld(DEFAULT_WELD_TOL))
}

fn read_stl_ascii(bytes: &[u8]) -> Result<IndexedMesh> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| MeshError::Codec(format!("ASCII STL is not valid UTF-8: {e}")))?;
    let mut mesh = IndexedMesh::empty();
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let fail = |line: usize, msg: &str| -> MeshError {
        MeshError::Codec(format!("ASCII STL line {}: {msg}", line + 1))
    };
    let parse_triplet = |line: usize, words: &[&str]| -> Result<Vec3> {
        if words.len() != 3 {
            return Err(fail(line, "expected 3 numbers"));
        }
        let mut out = [0.0f64; 3];
        for (k, w) in words.iter().enumerate() {
            out[k] = w
                .parse()
                .map_err(|_| fail(line, &format!("bad number '{w}'")))?;
        }
        let v = vec3(out[0], out[1], out[2]);
        if !v.is_finite() {
            return Err(fail(line, "non-finite coordinate"));
        }
        Ok(v)
    };

    let (i, first) = lines.next().ok_or_else(|| fail(0, "empty file"))?;
    if !first.trim_start().starts_with("solid") {
        return Err(fail(i, "expected 'solid <name>'"));
    }
    loop {
        let (i, line) = lines
            .next()
            .ok_or_else(|| fail(usize::MAX - 1, "unexpected end of file"))?;
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.first().copied() {
            Some("endsolid") => break,
            Some("facet") => {
                if words.get(1) != Some(&"normal") {
                    return Err(fail(i, "expected 'facet normal'"));
                }
                // normal discarded, but must parse
                parse_triplet(i, &words[2..])?;
                let (j, l) = lines.next().ok_or_else(|| fail(i, "unterminated facet"))?;
                if l.trim() != "outer loop" {
                    return Err(fail(j, "expected 'outer loop'"));
                }
                let idx0 = mesh.vertices.len();
                for _ in 0..3 {
                    let (j, l) = lines.next().ok_or_else(|| fail(i, "unterminated facet"))?;
                    let w: Vec<&str> = l.split_whitespace().collect();
                    if w.first() != Some(&"vertex") {
                        return Err(fail(j, "expected 'vertex'"));
                    }
                    mesh.vertices.push(parse_triplet(j, &w[1..])?);
                }
                let (j, l) = lines.next().ok_or_else(|| fail(i, "unterminated facet"))?;
                if l.trim() != "endloop" {
                    return Err(fail(j, "expected 'endloop'"));
                }
                let (j, l) = lines.next().ok_or_else(|| fail(i, "unterminated facet"))?;
                if l.trim() != "endfacet" {
                    return Err(fail(j, "expected 'endfacet'"));
                }
                mesh.faces.push([idx0, idx0 + 1, idx0 + 2]);
            }
            _ => return Err(fail(i, "expected 'facet normal' or 'endsolid'")),
        }
    }
    Ok(mesh.weld(DEFAULT_WELD_TOL))
}

/// OpenSCAD polyhedron statement with 0-based face indices.
pub fn write_scad(mesh: &IndexedMesh) -> Result<Vec<u8>> {
    check_writable(mesh)?;
    let mut out = String::from("polyhedron(points = [");
    for (i, v) in mesh.vertices.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write!(out, "[{}, {}, {}]", v.x, v.y, v.z).unwrap();
    }
    out.push_str("], faces = [");
    for (i, f) in mesh.faces.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write!(out, "[{}, {}, {}]", f[0], f[1], f[2]).unwrap();
    }
    out.push_str("]);\n");
    Ok(out.into_bytes())
}

/// Wavefront OBJ writer (vertices + triangular faces, 1-based indices).
pub fn write_obj(mesh: &IndexedMesh) -> Result<Vec<u8>> {
    check_writable(mesh)?;
    let mut out = String::new();
    for v in &mesh.vertices {
        writeln!(out, "v {} {} {}", v.x, v.y, v.z).unwrap();
    }
    for f in &mesh.faces {
        writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1).unwrap();
    }
    Ok(out.into_bytes())
}

/// Heights in model units on a regular grid; row 0 is the north edge.
#[derive(Debug, Clone)]
pub struct HeightGrid {
    pub heights: Vec<Vec<f64>>,
    pub pitch: f64,
    pub base: f64,
}

impl HeightGrid {
    pub fn new(heights: Vec<Vec<f64>>, pitch: f64, base: f64) -> Result<Self> {
        if heights.len() < 2 || heights[0].len() < 2 {
            return Err(MeshError::Input(
                "height grid needs at least 2 rows and 2 columns".into(),
            ));
        }
        let cols = heights[0].len();
        let mut min = f64::INFINITY;
        for (i, row) in heights.iter().enumerate() {
            if row.len() != cols {
                return Err(MeshError::Input(format!(
                    "ragged height grid: row {i} has {} columns, expected {cols}",
                    row.len()
                )));
            }
            for &h in row {
                if !h.is_finite() {
                    return Err(MeshError::Input(format!("non-finite height in row {i}")));
                }
                min = min.min(h);
            }
        }
        if !(pitch.is_finite() && pitch > 0.0) {
            return Err(MeshError::Parameter(format!(
                "grid pitch must be positive, got {pitch}"
            )));
        }
        if base >= min {
            return Err(MeshError::Parameter(format!(
                "base level {base} must be below the minimum height {min}"
            )));
        }
        Ok(HeightGrid {
            heights,
            pitch,
            base,
        })
    }
}

/// PGM interpretation options: cell pitch, the height assigned to maxval,
/// and the base level of the solid.
#[derive(Debug, Clone, Copy)]
pub struct PgmOptions {
    pub pitch: f64,
    pub z_scale: f64,
    pub base: f64,
}

impl Default for PgmOptions {
    fn default() -> Self {
        PgmOptions {
            pitch: 1.0,
            z_scale: 1.0,
            base: -1.0,
        }
    }
}

/// Parse a P2 (ASCII) or P5 (binary) portable graymap into a height grid:
/// height = pixel / maxval * z_scale.
pub fn read_pgm(bytes: &[u8], opts: PgmOptions) -> Result<HeightGrid> {
    let mut pos = 0usize;
    let fail = |pos: usize, msg: &str| MeshError::Codec(format!("PGM byte {pos}: {msg}"));

    // header tokens, skipping whitespace and # comments
    let next_token = |bytes: &[u8], pos: &mut usize| -> Result<String> {
        loop {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
            if *pos < bytes.len() && bytes[*pos] == b'#' {
                while *pos < bytes.len() && bytes[*pos] != b'\n' {
                    *pos += 1;
                }
                continue;
            }
            break;
        }
        let start = *pos;
        while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if start == *pos {
            return Err(fail(start, "unexpected end of header"));
        }
        Ok(String::from_utf8_lossy(&bytes[start..*pos]).into_owned())
    };

    let magic = next_token(bytes, &mut pos)?;
    if magic != "P2" && magic != "P5" {
        return Err(fail(0, &format!("bad magic '{magic}', expected P2 or P5")));
    }
    let parse_dim = |tok: String, pos: usize, what: &str| -> Result<usize> {
        tok.parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| fail(pos, &format!("bad {what} '{tok}'")))
    };
    let cols = parse_dim(next_token(bytes, &mut pos)?, pos, "width")?;
    let rows = parse_dim(next_token(bytes, &mut pos)?, pos, "height")?;
    let maxval = parse_dim(next_token(bytes, &mut pos)?, pos, "maxval")?;
    if maxval > 65535 {
        return Err(fail(pos, &format!("maxval {maxval} exceeds 65535")));
    }

    let mut pixels = Vec::with_capacity(rows * cols);
    if magic == "P2" {
        for _ in 0..rows * cols {
            let at = pos;
            let tok = next_token(bytes, &mut pos).map_err(|_| fail(at, "truncated pixel data"))?;
            let v: usize = tok
                .parse()
                .map_err(|_| fail(at, &format!("bad pixel '{tok}'")))?;
            if v > maxval {
                return Err(fail(at, &format!("pixel {v} exceeds maxval {maxval}")));
            }
            pixels.push(v);
        }
    } else {
        // exactly one whitespace byte after maxval, then raw samples
        if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
            return Err(fail(pos, "expected whitespace before raster"));
        }
        pos += 1;
        let width = if maxval > 255 { 2 } else { 1 };
        let need = rows * cols * width;
        if bytes.len() - pos < need {
            return Err(fail(
                bytes.len(),
                &format!("truncated raster: need {need} bytes, have {}", bytes.len() - pos),
            ));
        }
        for i in 0..rows * cols {
            let at = pos + i * width;
            let v = if width == 2 {
                u16::from_be_bytes([bytes[at], bytes[at + 1]]) as usize
            } else {
                bytes[at] as usize
            };
            if v > maxval {
                return Err(fail(at, &format!("pixel {v} exceeds maxval {maxval}")));
            }
            pixels.push(v);
        }
    }

    let heights = (0..rows)
        .map(|r| {
            (0..cols)
                .map(|c| pixels[r * cols + c] as f64 / maxval as f64 * opts.z_scale)
                .collect()
        })
        .collect();
    HeightGrid::new(heights, opts.pitch, opts.base)
}

/// Watertight terrain solid: bilinear top triangulation, four side walls
/// down to the base level, flat bottom.
pub fn heightfield_to_mesh(grid: &HeightGrid) -> Result<IndexedMesh> {
    let rows = grid.heights.len();
    let cols = grid.heights[0].len();
    let pitch = grid.pitch;
    let base = grid.base;
    let mut mesh = IndexedMesh::empty();

    // row 0 = north edge = max y
    let pos = |r: usize, c: usize, z: f64| {
        vec3(c as f64 * pitch, (rows - 1 - r) as f64 * pitch, z)
    };
    // top vertices 0..rows*cols, bottom vertices rows*cols..2*rows*cols
    for r in 0..rows {
        for c in 0..cols {
            mesh.vertices.push(pos(r, c, grid.heights[r][c]));
        }
    }
    for r in 0..rows {
        for c in 0..cols {
            mesh.vertices.push(pos(r, c, base));
        }
    }
    let top = |r: usize, c: usize| r * cols + c;
    let bot = |r: usize, c: usize| rows * cols + r * cols + c;

    // top faces, upward (note +r is -y)
    for r in 0..rows - 1 {
        for c in 0..cols - 1 {
            mesh.faces.push([top(r, c), top(r + 1, c + 1), top(r, c + 1)]);
            mesh.faces.push([top(r, c), top(r + 1, c), top(r + 1, c + 1)]);
        }
    }
    // bottom faces, downward
    for r in 0..rows - 1 {
        for c in 0..cols - 1 {
            mesh.faces.push([bot(r, c), bot(r, c + 1), bot(r + 1, c + 1)]);
            mesh.faces.push([bot(r, c), bot(r + 1, c + 1), bot(r + 1, c)]);
        }
    }
    // walls: a quad down to base per boundary edge of the top grid, each
    // traversing its top edge opposite the adjacent top face's winding
    let mut wall = |t0: usize, t1: usize, b0: usize, b1: usize| {
        mesh.faces.push([t0, t1, b1]);
        mesh.faces.push([t0, b1, b0]);
    };
    for c in 0..cols - 1 {
        wall(top(0, c), top(0, c + 1), bot(0, c), bot(0, c + 1));
        wall(top(rows - 1, c + 1), top(rows - 1, c), bot(rows - 1, c + 1), bot(rows - 1, c));
    }
    for r in 0..rows - 1 {
        wall(top(r + 1, 0), top(r, 0), bot(r + 1, 0), bot(r, 0));
        wall(top(r, cols - 1), top(r + 1, cols - 1), bot(r, cols - 1), bot(r + 1, cols - 1));
    }
    Ok(mesh.without_degenerate_faces())
}
