//! Printability analysis and repair: manifoldness, watertightness,
//! orientation consistency, degenerate faces, topology and measures.

use std::collections::HashMap;

use serde::Serialize;

use crate::geom::{IndexedMesh, Vec3, DEFAULT_WELD_TOL};
use crate::orient::{edge_faces, unify_orientation};

/// Full printability report. Fields that are undefined for the mesh at
/// hand (e.g. volume of an open surface) are `None`, never fabricated.
#[derive(Debug, Clone, Serialize)]
pub struct MeshReport {
    pub vertex_count: usize,
    pub welded_vertex_count: usize,
    pub edge_count: usize,
    pub face_count: usize,
    pub boundary_edge_count: usize,
    pub non_manifold_edge_count: usize,
    pub degenerate_face_count: usize,
    pub component_count: usize,
    pub orientation_consistent: bool,
    pub watertight: bool,
    pub euler_characteristic: Option<i64>,
    pub surface_area: f64,
    pub signed_volume: Option<f64>,
    pub total_curvature: Option<f64>,
}

/// Analyze a mesh. Never fails: a bad mesh produces a bad report.
pub fn analyze(mesh: &IndexedMesh) -> MeshReport {
    let welded = mesh.weld(DEFAULT_WELD_TOL);
    let degenerate_face_count = welded.faces.len()
        - welded.without_degenerate_faces().faces.len();
    let edges = edge_faces(&welded);
    let edge_count = edges.len();
    let boundary_edge_count = edges.values().filter(|f| f.len() == 1).count();
    let non_manifold_edge_count = edges.values().filter(|f| f.len() > 2).count();
    let watertight = boundary_edge_count == 0 && non_manifold_edge_count == 0;

    // orientation consistent when every manifold edge is traversed once in
    // each direction by its two faces
    let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
    for f in &welded.faces {
        for k in 0..3 {
            *directed.entry((f[k], f[(k + 1) % 3])).or_insert(0) += 1;
        }
    }
    let orientation_consistent = edges.iter().all(|(&(a, b), faces)| {
        faces.len() != 2
            || (directed.get(&(a, b)).copied().unwrap_or(0) == 1
                && directed.get(&(b, a)).copied().unwrap_or(0) == 1)
    });

    let (_, outcome) = unify_orientation(&welded);
    let euler_characteristic = welded.euler_characteristic().ok();
    let signed_volume = if watertight && orientation_consistent {
        Some(welded.signed_volume())
    } else {
        None
    };
    let total_curvature = if watertight {
        welded.total_curvature().ok()
    } else {
        None
    };
    MeshReport {
        vertex_count: mesh.vertices.len(),
        welded_vertex_count: welded.vertices.len(),
        edge_count,
        face_count: welded.faces.len(),
        boundary_edge_count,
        non_manifold_edge_count,
        degenerate_face_count,
        component_count: outcome.components.len(),
        orientation_consistent,
        watertight,
        euler_characteristic,
        surface_area: welded.surface_area().unwrap_or(0.0),
        signed_volume,
        total_curvature,
    }
}

/// Outcome of [`repair`].
#[derive(Debug, Clone)]
pub struct RepairOutcome {
    pub mesh: IndexedMesh,
    /// Count of holes closed by fan triangulation.
    pub holes_filled: usize,
    /// Boundary loops left open (too large to fill honestly).
    pub holes_left: usize,
    /// Connected components where orientation unification hit a
    /// contradiction; those are left with their input winding.
    pub non_orientable_components: usize,
}

pub const DEFAULT_MAX_HOLE_EDGES: usize = 16;

/// Repair pipeline: weld, drop degenerate/duplicate faces, unify
/// orientation (outward for closed components), fill small holes.
/// Deterministic and idempotent.
pub fn repair(mesh: &IndexedMesh) -> RepairOutcome {
    repair_with(mesh, DEFAULT_WELD_TOL, DEFAULT_MAX_HOLE_EDGES)
}

pub fn repair_with(mesh: &IndexedMesh, weld_tol: f64, max_hole_edges: usize) -> RepairOutcome {
    let mut m = mesh.weld(weld_tol).without_degenerate_faces();

    // drop duplicate faces (same vertex set)
    let mut seen = std::collections::HashSet::new();
    m.faces.retain(|f| {
        let mut key = *f;
        key.sort_unstable();
        seen.insert(key)
    });

    let (oriented, outcome) = unify_orientation(&m);
    let mut m = oriented;

    // fill small holes: collect boundary loops, fan from the centroid
    let edges = edge_faces(&m);
    let mut boundary_next: HashMap<usize, usize> = HashMap::new();
    let mut boundary_ok = true;
    for f in &m.faces {
        for k in 0..3 {
            let a = f[k];
            let b = f[(k + 1) % 3];
            if edges[&(a.min(b), a.max(b))].len() == 1 {
                // hole winding must run opposite the face edge direction;
                // walking a -> b traces the loop so the fan fill, wound
                // against it, faces outward
                if boundary_next.insert(a, b).is_some() {
                    boundary_ok = false; // vertex on multiple holes: skip filling
                }
            }
        }
    }
    let mut holes_filled = 0;
    let mut holes_left = 0;
    if boundary_ok {
        let mut remaining = boundary_next.clone();
        let mut starts: Vec<usize> = remaining.keys().copied().collect();
        starts.sort_unstable();
        for start in starts {
            if !remaining.contains_key(&start) {
                continue;
            }
            let mut ring = vec![start];
            let mut cur = start;
            let closed = loop {
                match remaining.remove(&cur) {
                    Some(next) if next == start => break true,
                    Some(next) => {
                        ring.push(next);
                        cur = next;
                    }
                    None => break false,
                }
            };
            if !closed {
                holes_left += 1;
                continue;
            }
            if ring.len() > max_hole_edges {
                holes_left += 1;
                continue;
            }
            let centroid = ring
                .iter()
                .fold(Vec3::ZERO, |acc, &i| acc + m.vertices[i])
                * (1.0 / ring.len() as f64);
            let ci = m.vertices.len();
            m.vertices.push(centroid);
            for w in 0..ring.len() {
                let a = ring[w];
                let b = ring[(w + 1) % ring.len()];
                // reversed against the boundary traversal direction
                m.faces.push([ci, b, a]);
            }
            holes_filled += 1;
        }
    } else {
        // count loops we refused to touch: approximate by components of
        // boundary edges
        holes_left = 1;
    }

    // holes just filled may flip the volume sign criterion; re-run
    // orientation once more so closed components end up outward
    let (m, outcome2) = unify_orientation(&m);
    let m = m.without_degenerate_faces();
    RepairOutcome {
        mesh: m,
        holes_filled,
        holes_left,
        non_orientable_components: outcome
            .non_orientable
            .len()
            .max(outcome2.non_orientable.len()),
    }
}

/// Split into connected components (faces sharing an edge), each with its
/// own compacted vertex list, in deterministic order.
pub fn connected_components(mesh: &IndexedMesh) -> Vec<IndexedMesh> {
    let (_, outcome) = unify_orientation(mesh);
    outcome
        .components
        .iter()
        .map(|faces| {
            let mut remap: HashMap<usize, usize> = HashMap::new();
            let mut sub = IndexedMesh::empty();
            for &fi in faces {
                let f = mesh.faces[fi];
                let mut nf = [0usize; 3];
                for k in 0..3 {
                    let ni = *remap.entry(f[k]).or_insert_with(|| {
                        sub.vertices.push(mesh.vertices[f[k]]);
                        sub.vertices.len() - 1
                    });
                    nf[k] = ni;
                }
                sub.faces.push(nf);
            }
            sub
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{unit_cube, vec3, Vec3};
    use crate::tessellate::{moebius_patch, thicken};

    #[test]
    fn analyze_unit_cube() {
        let r = analyze(&unit_cube());
        assert!(r.watertight);
        assert!(r.orientation_consistent);
        assert_eq!(r.euler_characteristic, Some(2));
        assert_eq!(r.welded_vertex_count, 8);
        assert_eq!(r.edge_count, 18);
        assert_eq!(r.face_count, 12);
        assert!((r.signed_volume.unwrap() - 1.0).abs() < 1e-12);
        assert!((r.surface_area - 6.0).abs() < 1e-12);
        assert!((r.total_curvature.unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(r.component_count, 1);
        assert_eq!(r.degenerate_face_count, 0);
    }

    #[test]
    fn analyze_cube_missing_face() {
        let mut m = unit_cube();
        m.faces.pop();
        let r = analyze(&m);
        assert!(!r.watertight);
        assert_eq!(r.boundary_edge_count, 3);
        assert_eq!(r.signed_volume, None);
        assert!(r.surface_area > 0.0);
    }

    #[test]
    fn analyze_open_patch() {
        let m = IndexedMesh {
            vertices: vec![vec3(0.0, 0.0, 0.0), vec3(1.0, 0.0, 0.0), vec3(0.0, 1.0, 0.0)],
            faces: vec![[0, 1, 2]],
        };
        let r = analyze(&m);
        assert_eq!(r.signed_volume, None);
        assert_eq!(r.euler_characteristic, None);
        assert!((r.surface_area - 0.5).abs() < 1e-12);
        assert_eq!(r.boundary_edge_count, 3);
    }

    #[test]
    fn repair_flipped_cube_faces() {
        let mut m = unit_cube();
        // deterministic pseudo-random flips
        let mut state = 0x12345678u64;
        for _ in 0..6 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let i = (state >> 33) as usize % m.faces.len();
            m.faces[i].swap(1, 2);
        }
        let out = repair(&m);
        let r = analyze(&out.mesh);
        assert!(r.orientation_consistent);
        assert!(r.watertight);
        assert!((r.signed_volume.unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(out.non_orientable_components, 0);
    }

    #[test]
    fn repair_fills_missing_triangle() {
        let mut m = unit_cube();
        m.faces.remove(7);
        let out = repair(&m);
        assert_eq!(out.holes_filled, 1);
        let r = analyze(&out.mesh);
        assert!(r.watertight);
        assert!((r.signed_volume.unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn repair_leaves_large_holes_reported() {
        let mut m = crate::tessellate::uv_sphere(Vec3::ZERO, 1.0, 24, 12).unwrap();
        // open a big hole: remove all faces touching the top third
        m.faces.retain(|f| (0..3).all(|k| m.vertices[f[k]].z < 0.5));
        let out = repair_with(&m, DEFAULT_WELD_TOL, 8);
        assert!(out.holes_left >= 1);
        assert!(!analyze(&out.mesh).watertight);
    }

    #[test]
    fn repair_is_idempotent() {
        let mut m = unit_cube();
        m.faces.remove(3);
        m.faces[0].swap(1, 2);
        let once = repair(&m);
        let twice = repair(&once.mesh);
        assert_eq!(once.mesh, twice.mesh);
        assert_eq!(twice.holes_filled, 0);

        let thick = thicken(&moebius_patch(1.0, 0.4, 64, 8).unwrap(), 0.1).unwrap();
        let fixed = repair(&thick);
        assert_eq!(fixed.non_orientable_components, 0);
        assert_eq!(analyze(&fixed.mesh).euler_characteristic, Some(0));
        assert_eq!(repair(&fixed.mesh).mesh, fixed.mesh);
    }

    #[test]
    fn repair_keeps_good_meshes() {
        let m = unit_cube();
        let out = repair(&m);
        assert_eq!(out.mesh, m.weld(DEFAULT_WELD_TOL));
        assert_eq!(out.holes_filled, 0);
        assert_eq!(out.holes_left, 0);
    }

    #[test]
    fn repair_drops_duplicate_faces() {
        let mut m = unit_cube();
        let dup = m.faces[0];
        m.faces.push(dup);
        let out = repair(&m);
        assert_eq!(out.mesh.faces.len(), 12);
        assert!(analyze(&out.mesh).watertight);
    }

    #[test]
    fn components_split_and_measure() {
        let a = unit_cube();
        let mut b = unit_cube();
        for v in &mut b.vertices {
            *v = *v + vec3(5.0, 0.0, 0.0);
        }
        let m = crate::geom::merge(&[a, b]).unwrap();
        let parts = connected_components(&m);
        assert_eq!(parts.len(), 2);
        for p in &parts {
            assert!((p.signed_volume() - 1.0).abs() < 1e-12);
        }
        assert_eq!(analyze(&m).component_count, 2);
    }

    #[test]
    fn non_orientable_reported_not_mangled() {
        // two triangles sharing an edge traversed the same way twice
        let m = IndexedMesh {
            vertices: vec![
                vec3(0.0, 0.0, 0.0),
                vec3(1.0, 0.0, 0.0),
                vec3(0.0, 1.0, 0.0),
                vec3(0.0, 0.0, 1.0),
            ],
            faces: vec![[0, 1, 2], [0, 1, 3]],
        };
        let r = analyze(&m);
        assert!(!r.orientation_consistent);
    }
}
