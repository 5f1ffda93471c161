use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{
    boundary_pattern, edge_classes, is_manifold, isomorphism_signature, Gluing, Pairing, Perm4,
    TriError,
};

/// Largest `n` accepted unless a filter set raises it.
pub const MAX_ENUMERATION_SIZE: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrientationMode {
    /// Every gluing reverses the orientation of the labeled tetrahedra.
    Orientable,
    /// Any gluing map.
    Any,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct FilterSet {
    pub orientation: OrientationMode,
    pub drop_valence_one: bool,
    pub drop_valence_two: bool,
    pub manifold_only: bool,
    /// Keep only pairings whose vertex links give nonempty compact
    /// geodesic boundary (links of genus ≥ 2, tori allowed as cusps).
    pub compact_geodesic_boundary: bool,
    pub max_size: usize,
}

impl Default for FilterSet {
    fn default() -> Self {
        Self::census()
    }
}

impl FilterSet {
    /// Every connected pairing, orientable or not, manifold or not.
    pub fn none() -> Self {
        Self {
            orientation: OrientationMode::Any,
            drop_valence_one: false,
            drop_valence_two: false,
            manifold_only: false,
            compact_geodesic_boundary: false,
            max_size: MAX_ENUMERATION_SIZE,
        }
    }

    /// Candidates for the census of manifolds with compact geodesic boundary.
    pub fn census() -> Self {
        Self {
            orientation: OrientationMode::Orientable,
            drop_valence_one: true,
            drop_valence_two: true,
            manifold_only: true,
            compact_geodesic_boundary: true,
            max_size: MAX_ENUMERATION_SIZE,
        }
    }

    pub fn accepts(&self, p: &Pairing) -> bool {
        if self.drop_valence_one || self.drop_valence_two {
            let min = edge_classes(p).iter().map(|e| e.valence).min().unwrap_or(0);
            if (self.drop_valence_one && min <= 1) || (self.drop_valence_two && min <= 2) {
                return false;
            }
        }
        if self.manifold_only && !is_manifold(p).manifold {
            return false;
        }
        if self.compact_geodesic_boundary {
            match boundary_pattern(p) {
                Ok(b) if b.is_compact_geodesic() => {}
                _ => return false,
            }
        }
        true
    }
}

struct Search<'a> {
    n: usize,
    filters: &'a FilterSet,
    glue: Vec<[Option<Gluing>; 4]>,
    reached: usize,
    /// Fixed gluing of a newly reached tetrahedron at face 3, per source face.
    fresh: [Perm4; 4],
    found: BTreeMap<String, Pairing>,
}

impl Search<'_> {
    fn allowed(&self, perm: Perm4) -> bool {
        self.filters.orientation == OrientationMode::Any || perm.is_odd()
    }

    fn set(&mut self, t: usize, f: usize, g: Gluing) {
        self.glue[t][f] = Some(g);
        self.glue[g.tet][g.perm.apply(f)] = Some(Gluing {
            tet: t,
            perm: g.perm.inverse(),
        });
    }

    fn unset(&mut self, t: usize, f: usize) {
        let g = self.glue[t][f].take().unwrap();
        self.glue[g.tet][g.perm.apply(f)] = None;
    }

    fn first_open(&self) -> Option<(usize, usize)> {
        (0..self.reached)
            .flat_map(|t| (0..4).map(move |f| (t, f)))
            .find(|&(t, f)| self.glue[t][f].is_none())
    }

    fn run(&mut self) {
        let Some((t, f)) = self.first_open() else {
            if self.reached == self.n {
                self.leaf();
            }
            return;
        };
        for t2 in t..self.reached {
            for f2 in 0..4 {
                if (t2, f2) <= (t, f) || self.glue[t2][f2].is_some() {
                    continue;
                }
                for &perm in Perm4::all() {
                    if perm.apply(f) != f2 || !self.allowed(perm) {
                        continue;
                    }
                    self.set(t, f, Gluing { tet: t2, perm });
                    self.run();
                    self.unset(t, f);
                }
            }
        }
        if self.reached < self.n {
            let new = self.reached;
            self.reached += 1;
            self.set(
                t,
                f,
                Gluing {
                    tet: new,
                    perm: self.fresh[f],
                },
            );
            self.run();
            self.unset(t, f);
            self.reached -= 1;
        }
    }

    fn leaf(&mut self) {
        let gluings = self
            .glue
            .iter()
            .map(|faces| faces.map(|g| g.unwrap()))
            .collect();
        let p = Pairing::from_raw(gluings);
        if !self.filters.accepts(&p) {
            return;
        }
        let sig = isomorphism_signature(&p).expect("enumerated pairings are connected");
        self.found.entry(sig).or_insert(p);
    }
}

/// Connected pairings of `n` tetrahedra passing `filters`, one per
/// isomorphism class, ordered by signature.
///
/// Tetrahedra are reached in breadth-first order and a newly reached one is
/// always entered through its face 3 with a fixed permutation; any pairing
/// can be relabeled into this form (with an even relabeling in the
/// orientable mode), so no class is missed.
pub fn enumerate_pairings(
    n: usize,
    filters: &FilterSet,
) -> Result<Vec<(String, Pairing)>, TriError> {
    if n == 0 || n > filters.max_size {
        return Err(TriError::UnsupportedSize {
            n,
            max: filters.max_size,
        });
    }
    let fresh = std::array::from_fn(|f| {
        *Perm4::all()
            .iter()
            .find(|p| {
                p.apply(f) == 3 && (filters.orientation == OrientationMode::Any || p.is_odd())
            })
            .unwrap()
    });
    let mut search = Search {
        n,
        filters,
        glue: vec![[None; 4]; n],
        reached: 1,
        fresh,
        found: BTreeMap::new(),
    };
    search.run();
    Ok(search.found.into_iter().collect())
}
