//! 2-3 and 3-2 moves.
//!
//! Both moves replace some tetrahedra by new ones spanning the same five
//! points (two poles and three equatorial vertices). Tetrahedra that are
//! not involved keep their relative order and labels; the new ones are
//! appended. Each result records, for every vertex of every new
//! tetrahedron, the old `(tet, vertex)` it comes from, which is what the
//! geometric code needs to carry a structure across the move.

use super::{edge_classes, EdgeClass, Gluing, Pairing, Perm4, TriError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VertexOrigin {
    pub tet: usize,
    pub vertex: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MoveResult {
    pub pairing: Pairing,
    /// `origins[t][v]`: where vertex `v` of new tetrahedron `t` came from.
    pub origins: Vec<[VertexOrigin; 4]>,
}

/// Where an old face slot of a removed tetrahedron lands: the new
/// tetrahedron and the relabeling of old vertex labels to new ones.
#[derive(Debug, Clone, Copy)]
struct Landing {
    tet: usize,
    map: Perm4,
}

fn perm_from(pairs: [(usize, usize); 4]) -> Perm4 {
    let mut out = [0u8; 4];
    for (old, new) in pairs {
        out[old] = new as u8;
    }
    Perm4::new(out).expect("vertex map must be a bijection")
}

/// Rebuilds the pairing after removing `removed` and appending
/// `new_count` tetrahedra. `landing(t, f)` must be given for every face of a
/// removed tetrahedron that is not internal to the move; `internal` lists the
/// gluings among new tetrahedra.
fn rebuild(
    p: &Pairing,
    removed: &[usize],
    new_count: usize,
    landing: &dyn Fn(usize, usize) -> Option<Landing>,
    internal: &[(usize, usize, Gluing)],
) -> Result<(Pairing, Vec<usize>), TriError> {
    let n = p.size();
    let mut index = vec![usize::MAX; n];
    let mut kept = 0;
    for t in 0..n {
        if !removed.contains(&t) {
            index[t] = kept;
            kept += 1;
        }
    }
    let total = kept + new_count;
    let land = |t: usize, f: usize| -> Option<Landing> {
        if removed.contains(&t) {
            landing(t, f).map(|l| Landing {
                tet: kept + l.tet,
                ..l
            })
        } else {
            Some(Landing {
                tet: index[t],
                map: Perm4::IDENTITY,
            })
        }
    };
    let mut out: Vec<[Option<Gluing>; 4]> = vec![[None; 4]; total];
    for t in 0..n {
        for f in 0..4 {
            let Some(from) = land(t, f) else { continue };
            let g = p.gluing(t, f);
            let to = land(g.tet, g.perm.apply(f)).ok_or_else(|| {
                TriError::InvalidMove("external face glued to an internal one".into())
            })?;
            let perm = to.map.compose(g.perm).compose(from.map.inverse());
            out[from.tet][from.map.apply(f)] = Some(Gluing { tet: to.tet, perm });
        }
    }
    for &(t, f, g) in internal {
        out[kept + t][f] = Some(Gluing {
            tet: kept + g.tet,
            perm: g.perm,
        });
    }
    let gluings = out
        .into_iter()
        .map(|faces| {
            let mut full = [Gluing {
                tet: 0,
                perm: Perm4::IDENTITY,
            }; 4];
            for (slot, g) in full.iter_mut().zip(faces) {
                *slot = g.ok_or_else(|| TriError::InvalidMove("face left unglued".into()))?;
            }
            Ok(full)
        })
        .collect::<Result<Vec<_>, TriError>>()?;
    let pairing = Pairing::new(gluings).map_err(|e| TriError::InvalidMove(e.to_string()))?;
    Ok((pairing, index))
}

fn origins_for_kept(p: &Pairing, index: &[usize]) -> Vec<[VertexOrigin; 4]> {
    let mut out = Vec::new();
    for t in 0..p.size() {
        if index[t] != usize::MAX {
            out.push(std::array::from_fn(|v| VertexOrigin { tet: t, vertex: v }));
        }
    }
    out
}

impl Pairing {
    /// 2-3 move across face `face` of tetrahedron `tet`. The two
    /// tetrahedra sharing the face must be distinct.
    ///
    /// New tetrahedron `k` has vertices `(N, S, x_{k+1}, x_{k+2})`, where
    /// `N` is the vertex of `tet` opposite the face, `S` the opposite vertex
    /// on the other side and `x_0 < x_1 < x_2` the face vertices of `tet`.
    pub fn move_2_3(&self, tet: usize, face: usize) -> Result<MoveResult, TriError> {
        let g = self.gluing(tet, face);
        if g.tet == tet {
            return Err(TriError::InvalidMove(format!(
                "face {tet}.{face} is glued to its own tetrahedron"
            )));
        }
        let (pt, qt, p) = (tet, g.tet, g.perm);
        let north = face;
        let south = p.apply(face);
        let x: Vec<usize> = (0..4).filter(|&v| v != north).collect();
        let landing = |t: usize, f: usize| -> Option<Landing> {
            if t == pt && f != north {
                let i = x.iter().position(|&v| v == f).unwrap();
                let map = perm_from([
                    (north, 0),
                    (x[i], 1),
                    (x[(i + 1) % 3], 2),
                    (x[(i + 2) % 3], 3),
                ]);
                Some(Landing { tet: i, map })
            } else if t == qt && f != south {
                let i = x.iter().position(|&v| p.apply(v) == f).unwrap();
                let map = perm_from([
                    (south, 1),
                    (p.apply(x[i]), 0),
                    (p.apply(x[(i + 1) % 3]), 2),
                    (p.apply(x[(i + 2) % 3]), 3),
                ]);
                Some(Landing { tet: i, map })
            } else {
                None
            }
        };
        let swap23 = Perm4([0, 1, 3, 2]);
        let mut internal = Vec::new();
        for k in 0..3 {
            internal.push((
                k,
                2,
                Gluing {
                    tet: (k + 1) % 3,
                    perm: swap23,
                },
            ));
            internal.push((
                (k + 1) % 3,
                3,
                Gluing {
                    tet: k,
                    perm: swap23,
                },
            ));
        }
        let (pairing, index) = rebuild(self, &[pt, qt], 3, &landing, &internal)?;
        let mut origins = origins_for_kept(self, &index);
        for k in 0..3 {
            origins.push([
                VertexOrigin {
                    tet: pt,
                    vertex: north,
                },
                VertexOrigin {
                    tet: qt,
                    vertex: south,
                },
                VertexOrigin {
                    tet: pt,
                    vertex: x[(k + 1) % 3],
                },
                VertexOrigin {
                    tet: pt,
                    vertex: x[(k + 2) % 3],
                },
            ]);
        }
        Ok(MoveResult { pairing, origins })
    }

    /// 3-2 move removing an edge of valence 3 that meets three distinct
    /// tetrahedra. New tetrahedra are `(N, X0, X1, X2)` and `(S, X2, X1, X0)`.
    pub fn move_3_2(&self, edge: &EdgeClass) -> Result<MoveResult, TriError> {
        if edge.valence != 3 || edge.singular {
            return Err(TriError::InvalidMove(format!(
                "edge class {} has valence {}",
                edge.id, edge.valence
            )));
        }
        let s = &edge.cycle;
        let tets = [s[0].tet, s[1].tet, s[2].tet];
        if tets[0] == tets[1] || tets[1] == tets[2] || tets[0] == tets[2] {
            return Err(TriError::InvalidMove(
                "edge meets a tetrahedron twice".into(),
            ));
        }
        let lab_n = |j: usize| j % 3 + 1;
        let lab_s = |j: usize| 3 - j % 3;
        let landing = |t: usize, f: usize| -> Option<Landing> {
            let k = tets.iter().position(|&u| u == t)?;
            let sl = s[k];
            if f == sl.b {
                let map = perm_from([
                    (sl.a, 0),
                    (sl.c, lab_n(k + 2)),
                    (sl.d, lab_n(k)),
                    (sl.b, lab_n(k + 1)),
                ]);
                Some(Landing { tet: 0, map })
            } else if f == sl.a {
                let map = perm_from([
                    (sl.b, 0),
                    (sl.c, lab_s(k + 2)),
                    (sl.d, lab_s(k)),
                    (sl.a, lab_s(k + 1)),
                ]);
                Some(Landing { tet: 1, map })
            } else {
                None
            }
        };
        let flip = Perm4([0, 3, 2, 1]);
        let internal = [
            (0, 0, Gluing { tet: 1, perm: flip }),
            (1, 0, Gluing { tet: 0, perm: flip }),
        ];
        let (pairing, index) = rebuild(self, &tets, 2, &landing, &internal)?;
        let mut origins = origins_for_kept(self, &index);
        let x = |j: usize| VertexOrigin {
            tet: s[j].tet,
            vertex: s[j].d,
        };
        origins.push([
            VertexOrigin {
                tet: s[0].tet,
                vertex: s[0].a,
            },
            x(0),
            x(1),
            x(2),
        ]);
        origins.push([
            VertexOrigin {
                tet: s[0].tet,
                vertex: s[0].b,
            },
            x(2),
            x(1),
            x(0),
        ]);
        Ok(MoveResult { pairing, origins })
    }

    /// Edge classes of valence 3 on which [`Pairing::move_3_2`] applies.
    pub fn valence_three_edges(&self) -> Vec<EdgeClass> {
        edge_classes(self)
            .into_iter()
            .filter(|e| {
                e.valence == 3
                    && !e.singular
                    && e.cycle[0].tet != e.cycle[1].tet
                    && e.cycle[1].tet != e.cycle[2].tet
                    && e.cycle[0].tet != e.cycle[2].tet
            })
            .collect()
    }
}

impl MoveResult {
    /// Relabels the result so that every gluing is odd, carrying the vertex
    /// origins along. Fails if the result is non-orientable.
    pub fn oriented(self) -> Result<MoveResult, TriError> {
        let (pairing, maps) = self
            .pairing
            .oriented()
            .ok_or_else(|| TriError::InvalidMove("result is not orientable".into()))?;
        let origins = self
            .origins
            .iter()
            .zip(&maps)
            .map(|(o, m)| {
                let mut out = *o;
                for v in 0..4 {
                    out[m.apply(v)] = o[v];
                }
                out
            })
            .collect();
        Ok(MoveResult { pairing, origins })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tricomb::isomorphism_signature;

    fn two_tets() -> Pairing {
        // the first orientable two-tetrahedron pairing with a face between
        // distinct tetrahedra
        let filters = crate::tricomb::FilterSet {
            orientation: crate::tricomb::OrientationMode::Orientable,
            ..crate::tricomb::FilterSet::none()
        };
        crate::tricomb::enumerate_pairings(2, &filters)
            .unwrap()
            .into_iter()
            .map(|(_, p)| p)
            .find(|p| p.gluing(0, 0).tet == 1)
            .unwrap()
    }

    #[test]
    fn two_three_then_three_two_round_trip() {
        let p = two_tets();
        let sig = isomorphism_signature(&p).unwrap();
        let up = p.move_2_3(0, 0).unwrap().oriented().unwrap();
        assert_eq!(up.pairing.size(), 3);
        assert!(up.pairing.all_gluings_odd());
        let e = up.pairing.valence_three_edges();
        assert!(!e.is_empty());
        let back = e
            .iter()
            .filter_map(|e| up.pairing.move_3_2(e).ok())
            .any(|r| isomorphism_signature(&r.pairing).unwrap() == sig);
        assert!(back);
    }

    #[test]
    fn valence_preserved_except_new_edge() {
        let p = two_tets();
        let before: usize = edge_classes(&p).len();
        let up = p.move_2_3(0, 0).unwrap();
        assert_eq!(edge_classes(&up.pairing).len(), before + 1);
    }
}
