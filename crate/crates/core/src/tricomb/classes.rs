use crate::specfun::regular_ideal_octahedron_volume;
use crate::tetshape::edge_index;

use super::{isomorphism_signature, Pairing, TriError};

/// One tetrahedron-edge incidence met while walking around an edge: the
/// edge joins vertices `a` and `b` of `tet`, the walk entered through the
/// face opposite `d` and leaves through the face opposite `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeSlot {
    pub tet: usize,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

impl EdgeSlot {
    pub fn edge(&self) -> usize {
        edge_index(self.a, self.b)
    }

    fn step(&self, p: &Pairing) -> EdgeSlot {
        let g = p.gluing(self.tet, self.c);
        EdgeSlot {
            tet: g.tet,
            a: g.perm.apply(self.a),
            b: g.perm.apply(self.b),
            c: g.perm.apply(self.d),
            d: g.perm.apply(self.c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeClass {
    pub id: usize,
    /// Slots in cyclic order around the edge.
    pub cycle: Vec<EdgeSlot>,
    pub valence: usize,
    /// Vertex classes at the `a` and `b` ends of the first slot.
    pub ends: [usize; 2],
    /// The walk around the edge came back to its starting slot the wrong
    /// way (the edge is identified with itself reversed or folded).
    pub singular: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexClassInfo {
    pub id: usize,
    /// `(tet, vertex)` incidences; each contributes one triangle of the link.
    pub slots: Vec<(usize, usize)>,
    /// Euler characteristic of the vertex link (meaningful for manifolds).
    pub link_euler: i64,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Vertex classes, numbered in order of first appearance, as a table
/// `class[tet][vertex]` plus the member lists.
fn vertex_partition(p: &Pairing) -> (Vec<[usize; 4]>, Vec<Vec<(usize, usize)>>) {
    let n = p.size();
    let mut parent: Vec<usize> = (0..4 * n).collect();
    for t in 0..n {
        for f in 0..4 {
            let g = p.gluing(t, f);
            for v in (0..4).filter(|&v| v != f) {
                let (x, y) = (
                    find(&mut parent, 4 * t + v),
                    find(&mut parent, 4 * g.tet + g.perm.apply(v)),
                );
                if x != y {
                    parent[x.max(y)] = x.min(y);
                }
            }
        }
    }
    let mut ids = vec![usize::MAX; 4 * n];
    let mut members: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut table = vec![[0usize; 4]; n];
    for s in 0..4 * n {
        let r = find(&mut parent, s);
        if ids[r] == usize::MAX {
            ids[r] = members.len();
            members.push(Vec::new());
        }
        table[s / 4][s % 4] = ids[r];
        members[ids[r]].push((s / 4, s % 4));
    }
    (table, members)
}

pub fn edge_classes(p: &Pairing) -> Vec<EdgeClass> {
    let n = p.size();
    let (vclass, _) = vertex_partition(p);
    let mut owner = vec![[usize::MAX; 6]; n];
    let mut out = Vec::new();
    for t in 0..n {
        for e in 0..6 {
            if owner[t][e] != usize::MAX {
                continue;
            }
            let id = out.len();
            let (a, b) = crate::tetshape::EDGE_VERTICES[e];
            let mut rest = (0..4).filter(|&v| v != a && v != b);
            let (c, d) = (rest.next().unwrap(), rest.next().unwrap());
            let start = EdgeSlot { tet: t, a, b, c, d };
            let mut cycle = Vec::new();
            let mut slot = start;
            let mut singular = false;
            loop {
                owner[slot.tet][slot.edge()] = id;
                cycle.push(slot);
                let next = slot.step(p);
                if next == start {
                    break;
                }
                if owner[next.tet][next.edge()] == id {
                    singular = true;
                    break;
                }
                slot = next;
            }
            out.push(EdgeClass {
                id,
                valence: cycle.len(),
                ends: [vclass[t][a], vclass[t][b]],
                cycle,
                singular,
            });
        }
    }
    out
}

pub fn vertex_classes(p: &Pairing) -> Vec<VertexClassInfo> {
    let (_, members) = vertex_partition(p);
    let edges = edge_classes(p);
    members
        .into_iter()
        .enumerate()
        .map(|(id, slots)| {
            let faces = slots.len() as i64;
            let link_vertices = edges
                .iter()
                .flat_map(|e| e.ends)
                .filter(|&v| v == id)
                .count() as i64;
            VertexClassInfo {
                id,
                link_euler: link_vertices - 3 * faces / 2 + faces,
                slots,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifoldReport {
    pub manifold: bool,
    pub diagnosis: Option<String>,
}

/// Every edge must close up without being identified with itself in
/// reverse; vertex links are then closed surfaces automatically.
pub fn is_manifold(p: &Pairing) -> ManifoldReport {
    match edge_classes(p).iter().find(|e| e.singular) {
        Some(e) => {
            let s = e.cycle[0];
            ManifoldReport {
                manifold: false,
                diagnosis: Some(format!(
                    "edge class {} (tetrahedron {} edge {}{}) is identified with itself in reverse",
                    e.id, s.tet, s.a, s.b
                )),
            }
        }
        None => ManifoldReport {
            manifold: true,
            diagnosis: None,
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct BoundaryComponent {
    pub vertex_class: usize,
    pub euler: i64,
    /// Genus for an orientable link, `None` otherwise.
    pub genus: Option<u32>,
}

/// Vertex links of a manifold pairing: tori are counted as cusps, every
/// other link is listed as a boundary component.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct BoundaryPattern {
    pub components: Vec<BoundaryComponent>,
    pub toric: usize,
}

impl BoundaryPattern {
    /// Short label such as `S2`, `S3+1c`, `S2+2c`.
    pub fn label(&self) -> String {
        let mut parts: Vec<String> = self
            .components
            .iter()
            .map(|c| match c.genus {
                Some(g) => format!("S{g}"),
                None => format!("N{}", 2 - c.euler),
            })
            .collect();
        parts.sort();
        let mut s = parts.join("+");
        if self.toric > 0 {
            if !s.is_empty() {
                s.push('+');
            }
            s.push_str(&format!("{}c", self.toric));
        }
        s
    }

    /// Nonempty compact geodesic boundary: at least one link of genus ≥ 2
    /// and no spheres or non-orientable links.
    pub fn is_compact_geodesic(&self) -> bool {
        !self.components.is_empty()
            && self
                .components
                .iter()
                .all(|c| matches!(c.genus, Some(g) if g >= 2))
    }
}

pub fn boundary_pattern(p: &Pairing) -> Result<BoundaryPattern, TriError> {
    let report = is_manifold(p);
    if !report.manifold {
        return Err(TriError::NonManifold(report.diagnosis.unwrap_or_default()));
    }
    let orientable = p.is_orientable();
    let mut components = Vec::new();
    let mut toric = 0;
    for v in vertex_classes(p) {
        let genus = (orientable && v.link_euler <= 2 && v.link_euler % 2 == 0)
            .then(|| ((2 - v.link_euler) / 2) as u32);
        if genus == Some(1) {
            toric += 1;
        } else {
            components.push(BoundaryComponent {
                vertex_class: v.id,
                euler: v.link_euler,
                genus,
            });
        }
    }
    Ok(BoundaryPattern { components, toric })
}

/// Bookkeeping for the relative handlebody obtained from a pairing by
/// removing vertex and edge neighbourhoods and filling each tetrahedron
/// with a regular ideal octahedron.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct HandlebodyDescription {
    pub tetrahedra: usize,
    /// Genus of the handlebody, from the Euler characteristic of the dual
    /// graph (tetrahedra and glued face pairs).
    pub genus: usize,
    /// One boundary loop per edge class.
    pub loops: usize,
    pub complexity: usize,
    pub volume: f64,
    pub valences: Vec<usize>,
    pub orientable: bool,
    pub signature: String,
}

pub fn build_relative_handlebody(p: &Pairing) -> Result<HandlebodyDescription, TriError> {
    let n = p.size();
    let face_pairs = p.faces().len();
    let euler = n as i64 - face_pairs as i64;
    let edges = edge_classes(p);
    let mut valences: Vec<usize> = edges.iter().map(|e| e.valence).collect();
    valences.sort_unstable();
    Ok(HandlebodyDescription {
        tetrahedra: n,
        genus: (1 - euler) as usize,
        loops: edges.len(),
        complexity: 10 * n,
        volume: n as f64 * regular_ideal_octahedron_volume(),
        valences,
        orientable: p.is_orientable(),
        signature: isomorphism_signature(p)?,
    })
}

/// True when every edge has valence at least 7.
pub fn min_exceptional_valence_check(p: &Pairing) -> bool {
    edge_classes(p).iter().all(|e| e.valence >= 7)
}

#[cfg(test)]
mod tests {
    use super::super::tests::one_tet;
    use super::*;

    #[test]
    fn one_tet_classes() {
        let p = one_tet();
        let edges = edge_classes(&p);
        assert_eq!(edges.iter().map(|e| e.valence).sum::<usize>(), 6);
        assert!(is_manifold(&p).manifold);
        let verts = vertex_classes(&p);
        let total: i64 = verts.iter().map(|v| v.link_euler).sum();
        // Σ χ(links) = 2χ(M) = 2(e − n)
        assert_eq!(total, 2 * (edges.len() as i64 - 1));
        let y = build_relative_handlebody(&p).unwrap();
        assert_eq!((y.genus, y.complexity), (2, 10));
        assert!((y.volume - 3.66386).abs() < 1e-5);
    }
}
