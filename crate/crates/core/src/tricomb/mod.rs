//! Face pairings of tetrahedra (ideal triangulations) and their
//! combinatorics.
//!
//! A [`Pairing`] glues face `f` of tetrahedron `t` (the face opposite vertex
//! `f`) to face `perm[f]` of tetrahedron `gluing.tet`, sending vertex `v` to
//! vertex `perm[v]`. With all tetrahedra carrying the orientation of their
//! vertex labels, the result is orientable precisely when some relabeling
//! makes every gluing permutation odd.

mod classes;
mod enumerate;
mod moves;
mod signature;

use std::fmt;

use thiserror::Error;

pub use classes::{
    boundary_pattern, build_relative_handlebody, edge_classes, is_manifold,
    min_exceptional_valence_check, vertex_classes, BoundaryComponent, BoundaryPattern, EdgeClass,
    EdgeSlot, HandlebodyDescription, ManifoldReport, VertexClassInfo,
};
pub use enumerate::{enumerate_pairings, FilterSet, OrientationMode, MAX_ENUMERATION_SIZE};
pub use moves::{MoveResult, VertexOrigin};
pub use signature::isomorphism_signature;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TriError {
    #[error("invalid pairing: {0}")]
    InvalidPairing(String),
    #[error("unsupported size n = {n} (maximum {max})")]
    UnsupportedSize { n: usize, max: usize },
    #[error("not a manifold: {0}")]
    NonManifold(String),
    #[error("pairing is not connected")]
    Disconnected,
    #[error("cannot parse pairing: {0}")]
    Parse(String),
    #[error("move not applicable: {0}")]
    InvalidMove(String),
}

/// A permutation of `{0, 1, 2, 3}`, stored as its images.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm4(pub [u8; 4]);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    pub fn new(images: [u8; 4]) -> Option<Self> {
        let mut seen = [false; 4];
        for &x in &images {
            if x > 3 || seen[x as usize] {
                return None;
            }
            seen[x as usize] = true;
        }
        Some(Self(images))
    }

    /// All 24 permutations in lexicographic order of their image strings.
    pub fn all() -> &'static [Perm4; 24] {
        static ALL: std::sync::OnceLock<[Perm4; 24]> = std::sync::OnceLock::new();
        ALL.get_or_init(|| {
            let mut out = [Perm4::IDENTITY; 24];
            let mut i = 0;
            for a in 0..4u8 {
                for b in 0..4u8 {
                    for c in 0..4u8 {
                        for d in 0..4u8 {
                            if let Some(p) = Perm4::new([a, b, c, d]) {
                                out[i] = p;
                                i += 1;
                            }
                        }
                    }
                }
            }
            out
        })
    }

    /// Position in [`Perm4::all`].
    pub fn index(self) -> usize {
        let p = self.0.map(usize::from);
        let mut rest: Vec<usize> = (0..4).collect();
        let mut idx = 0;
        let factorials = [6, 2, 1, 1];
        for (k, &x) in p.iter().enumerate() {
            let pos = rest.iter().position(|&r| r == x).unwrap();
            idx += pos * factorials[k];
            rest.remove(pos);
        }
        idx
    }

    pub fn apply(self, v: usize) -> usize {
        self.0[v] as usize
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: Perm4) -> Perm4 {
        Perm4(other.0.map(|x| self.0[x as usize]))
    }

    pub fn inverse(self) -> Perm4 {
        let mut out = [0u8; 4];
        for (i, &x) in self.0.iter().enumerate() {
            out[x as usize] = i as u8;
        }
        Perm4(out)
    }

    pub fn is_odd(self) -> bool {
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        inversions % 2 == 1
    }

    pub fn transposition(a: usize, b: usize) -> Perm4 {
        let mut p = [0u8, 1, 2, 3];
        p.swap(a, b);
        Perm4(p)
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in self.0 {
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gluing {
    pub tet: usize,
    pub perm: Perm4,
}

/// A complete gluing of the `4n` faces of `n` tetrahedra in pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pairing {
    gluings: Vec<[Gluing; 4]>,
}

impl Pairing {
    pub fn new(gluings: Vec<[Gluing; 4]>) -> Result<Self, TriError> {
        let n = gluings.len();
        if n == 0 {
            return Err(TriError::InvalidPairing("no tetrahedra".into()));
        }
        for (t, faces) in gluings.iter().enumerate() {
            for (f, g) in faces.iter().enumerate() {
                if g.tet >= n {
                    return Err(TriError::InvalidPairing(format!(
                        "face {t}.{f} glued to missing tetrahedron {}",
                        g.tet
                    )));
                }
                let target = g.perm.apply(f);
                if g.tet == t && target == f {
                    return Err(TriError::InvalidPairing(format!(
                        "face {t}.{f} glued to itself"
                    )));
                }
                let back = gluings[g.tet][target];
                if back.tet != t || back.perm != g.perm.inverse() {
                    return Err(TriError::InvalidPairing(format!(
                        "gluing of face {t}.{f} is not involutive"
                    )));
                }
            }
        }
        Ok(Self { gluings })
    }

    pub(crate) fn from_raw(gluings: Vec<[Gluing; 4]>) -> Self {
        debug_assert!(Self::new(gluings.clone()).is_ok());
        Self { gluings }
    }

    pub fn size(&self) -> usize {
        self.gluings.len()
    }

    pub fn gluing(&self, tet: usize, face: usize) -> Gluing {
        self.gluings[tet][face]
    }

    pub fn gluings(&self) -> &[[Gluing; 4]] {
        &self.gluings
    }

    /// Internal faces as `(tet, face)` pairs, each listed once from its
    /// lexicographically smaller side.
    pub fn faces(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(2 * self.size());
        for t in 0..self.size() {
            for f in 0..4 {
                let g = self.gluings[t][f];
                if (t, f) <= (g.tet, g.perm.apply(f)) {
                    out.push((t, f));
                }
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let n = self.size();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(t) = stack.pop() {
            for g in &self.gluings[t] {
                if !seen[g.tet] {
                    seen[g.tet] = true;
                    stack.push(g.tet);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Renames tetrahedron `t` as `tet_map[t]` and its vertex `v` as
    /// `vertex_maps[t][v]`.
    pub fn relabel(&self, tet_map: &[usize], vertex_maps: &[Perm4]) -> Pairing {
        let n = self.size();
        let mut out = vec![
            [Gluing {
                tet: 0,
                perm: Perm4::IDENTITY
            }; 4];
            n
        ];
        for t in 0..n {
            for f in 0..4 {
                let g = self.gluings[t][f];
                let perm = vertex_maps[g.tet]
                    .compose(g.perm)
                    .compose(vertex_maps[t].inverse());
                out[tet_map[t]][vertex_maps[t].apply(f)] = Gluing {
                    tet: tet_map[g.tet],
                    perm,
                };
            }
        }
        Pairing::from_raw(out)
    }

    pub fn all_gluings_odd(&self) -> bool {
        self.gluings.iter().flatten().all(|g| g.perm.is_odd())
    }

    /// Per-tetrahedron relabelings (identity or the swap of vertices 2 and 3)
    /// that make every gluing odd, or `None` if the triangulation is
    /// non-orientable.
    pub fn orientation_relabeling(&self) -> Option<Vec<Perm4>> {
        let n = self.size();
        let mut flip: Vec<Option<bool>> = vec![None; n];
        for start in 0..n {
            if flip[start].is_some() {
                continue;
            }
            flip[start] = Some(false);
            let mut stack = vec![start];
            while let Some(t) = stack.pop() {
                let ft = flip[t].unwrap();
                for g in &self.gluings[t] {
                    // relabeled parity = parity(g) xor ft xor fu; want odd
                    let want = ft ^ !g.perm.is_odd();
                    match flip[g.tet] {
                        None => {
                            flip[g.tet] = Some(want);
                            stack.push(g.tet);
                        }
                        Some(x) if x != want => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(
            flip.into_iter()
                .map(|f| {
                    if f.unwrap() {
                        Perm4::transposition(2, 3)
                    } else {
                        Perm4::IDENTITY
                    }
                })
                .collect(),
        )
    }

    pub fn is_orientable(&self) -> bool {
        self.orientation_relabeling().is_some()
    }

    /// The same triangulation relabeled so that every gluing is odd,
    /// together with the vertex relabelings used.
    pub fn oriented(&self) -> Option<(Pairing, Vec<Perm4>)> {
        let maps = self.orientation_relabeling()?;
        let ids: Vec<usize> = (0..self.size()).collect();
        Some((self.relabel(&ids, &maps), maps))
    }

    /// One line per tetrahedron with four `tet:images` tokens, preceded by a
    /// `# sig` header carrying the isomorphism signature.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if let Ok(sig) = isomorphism_signature(self) {
            s.push_str(&format!("# sig {sig}\n"));
        }
        for faces in &self.gluings {
            let tokens: Vec<String> = faces
                .iter()
                .map(|g| format!("{}:{}", g.tet, g.perm))
                .collect();
            s.push_str(&tokens.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, TriError> {
        let mut gluings = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != 4 {
                return Err(TriError::Parse(format!(
                    "line {}: expected 4 tokens",
                    lineno + 1
                )));
            }
            let mut faces = [Gluing {
                tet: 0,
                perm: Perm4::IDENTITY,
            }; 4];
            for (f, tok) in tokens.iter().enumerate() {
                let (t, p) = tok.split_once(':').ok_or_else(|| {
                    TriError::Parse(format!("line {}: bad token {tok}", lineno + 1))
                })?;
                let tet = t.parse().map_err(|_| {
                    TriError::Parse(format!("line {}: bad tetrahedron {t}", lineno + 1))
                })?;
                let digits: Vec<u8> = p.bytes().map(|b| b.wrapping_sub(b'0')).collect();
                let perm = <[u8; 4]>::try_from(digits.as_slice())
                    .ok()
                    .and_then(Perm4::new)
                    .ok_or_else(|| {
                        TriError::Parse(format!("line {}: bad permutation {p}", lineno + 1))
                    })?;
                faces[f] = Gluing { tet, perm };
            }
            gluings.push(faces);
        }
        let pairing = Pairing::new(gluings)?;
        let header = text
            .lines()
            .find_map(|l| l.trim().strip_prefix("# sig ").map(str::trim));
        if let Some(expected) = header {
            let actual = isomorphism_signature(&pairing)?;
            if actual != expected {
                return Err(TriError::Parse(format!(
                    "signature header {expected} does not match {actual}"
                )));
            }
        }
        Ok(pairing)
    }
}
