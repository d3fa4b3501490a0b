//! Orientation unification shared by the generators and the repair pipeline.

use std::collections::HashMap;

use crate::geom::IndexedMesh;

#[derive(Debug, Clone, Default)]
pub struct OrientOutcome {
    /// Face indices grouped by connected component (via shared edges),
    /// in discovery order (seeded from the lowest face index).
    pub components: Vec<Vec<usize>>,
    /// Components where the flood fill hit a winding contradiction.
    pub non_orientable: Vec<usize>,
}

/// Map from undirected edge to the faces using it.
pub fn edge_faces(mesh: &IndexedMesh) -> HashMap<(usize, usize), Vec<usize>> {
    let mut map: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (fi, f) in mesh.faces.iter().enumerate() {
        for k in 0..3 {
            let a = f[k];
            let b = f[(k + 1) % 3];
            map.entry((a.min(b), a.max(b))).or_default().push(fi);
        }
    }
    map
}

fn has_directed_edge(f: &[usize; 3], a: usize, b: usize) -> bool {
    (f[0] == a && f[1] == b) || (f[1] == a && f[2] == b) || (f[2] == a && f[0] == b)
}

/// Unify winding per connected component by breadth-first flood from the
/// lowest-index face, then flip closed components with negative signed
/// volume. Non-orientable components are restored to their input winding.
///
/// The volume flip treats every closed component as an outermost solid;
/// generators producing nested cavities (offset shells) use
/// [`unify_consistency`] and decide the global sign themselves.
pub fn unify_orientation(mesh: &IndexedMesh) -> (IndexedMesh, OrientOutcome) {
    let (out, outcome) = unify_consistency(mesh);
    let edges = edge_faces(&out);
    let mut out = out;

    // flip closed, orientable components enclosing negative volume
    for (ci, component) in outcome.components.iter().enumerate() {
        if outcome.non_orientable.contains(&ci) {
            continue;
        }
        let closed = component.iter().all(|&fi| {
            let f = out.faces[fi];
            (0..3).all(|k| {
                let a = f[k];
                let b = f[(k + 1) % 3];
                edges[&(a.min(b), a.max(b))].len() == 2
            })
        });
        if !closed {
            continue;
        }
        let vol: f64 = component
            .iter()
            .map(|&fi| {
                let t = out.triangle(out.faces[fi]);
                t.a.dot(t.b.cross(t.c)) / 6.0
            })
            .sum();
        if vol < 0.0 {
            for &fi in component {
                out.faces[fi].swap(1, 2);
            }
        }
    }

    (out, outcome)
}

/// Winding consistency only: breadth-first flood per component from the
/// lowest face index, no volume-based flipping.
pub fn unify_consistency(mesh: &IndexedMesh) -> (IndexedMesh, OrientOutcome) {
    let edges = edge_faces(mesh);
    let mut faces = mesh.faces.clone();
    let mut visited = vec![false; faces.len()];
    let mut outcome = OrientOutcome::default();

    for seed in 0..faces.len() {
        if visited[seed] {
            continue;
        }
        let mut component = vec![seed];
        let mut flipped = Vec::new();
        let mut contradiction = false;
        visited[seed] = true;
        let mut queue = std::collections::VecDeque::from([seed]);
        while let Some(fi) = queue.pop_front() {
            let f = faces[fi];
            for k in 0..3 {
                let a = f[k];
                let b = f[(k + 1) % 3];
                let key = (a.min(b), a.max(b));
                let incident = &edges[&key];
                // only walk through manifold edges
                if incident.len() != 2 {
                    continue;
                }
                for &ni in incident {
                    if ni == fi {
                        continue;
                    }
                    // consistent orientation: neighbor holds the edge reversed
                    let consistent = has_directed_edge(&faces[ni], b, a);
                    if !visited[ni] {
                        visited[ni] = true;
                        if !consistent {
                            faces[ni].swap(1, 2);
                            flipped.push(ni);
                        }
                        component.push(ni);
                        queue.push_back(ni);
                    } else if !consistent {
                        contradiction = true;
                    }
                }
            }
        }
        let comp_idx = outcome.components.len();
        if contradiction {
            for fi in flipped {
                faces[fi].swap(1, 2);
            }
            outcome.non_orientable.push(comp_idx);
        }
        component.sort_unstable();
        outcome.components.push(component);
    }

    let out = IndexedMesh {
        vertices: mesh.vertices.clone(),
        faces,
    };
    (out, outcome)
}
