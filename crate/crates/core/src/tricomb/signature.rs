//! Isomorphism signatures.
//!
//! For each choice of starting tetrahedron and of its vertex labeling, the
//! pairing is relabeled by a breadth-first walk: faces are visited in order
//! and every newly reached tetrahedron is labeled so that its first gluing
//! becomes the identity permutation. The walk yields the sequence of
//! `(target, permutation index)` pairs for all `4n` faces; the signature
//! encodes the lexicographically smallest sequence. Two connected pairings
//! have the same signature exactly when they are isomorphic.

use super::{Gluing, Pairing, Perm4, TriError};

const ALPHABET: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";

fn walk(
    p: &Pairing,
    start: usize,
    labeling: Perm4,
    best: Option<&[(usize, usize)]>,
) -> Option<Vec<(usize, usize)>> {
    let n = p.size();
    let mut new_index = vec![usize::MAX; n];
    let mut maps = vec![Perm4::IDENTITY; n];
    let mut order = Vec::with_capacity(n);
    new_index[start] = 0;
    maps[start] = labeling;
    order.push(start);
    let mut seq = Vec::with_capacity(4 * n);
    let mut smaller = false;
    let mut i = 0;
    while i < order.len() {
        let t = order[i];
        let inv = maps[t].inverse();
        for f_new in 0..4 {
            let f = inv.apply(f_new);
            let g = p.gluing(t, f);
            if new_index[g.tet] == usize::MAX {
                new_index[g.tet] = order.len();
                order.push(g.tet);
                // make the relabeled gluing the identity
                maps[g.tet] = maps[t].compose(g.perm.inverse());
            }
            let perm = maps[g.tet].compose(g.perm).compose(inv);
            let entry = (new_index[g.tet], perm.index());
            if let (Some(b), false) = (best, smaller) {
                let k = seq.len();
                match entry.cmp(&b[k]) {
                    std::cmp::Ordering::Greater => return None,
                    std::cmp::Ordering::Less => smaller = true,
                    std::cmp::Ordering::Equal => {}
                }
            }
            seq.push(entry);
        }
        i += 1;
    }
    Some(seq)
}

fn digits(n: usize) -> usize {
    let mut w = 1;
    let mut x = n.saturating_sub(1);
    while x >= ALPHABET.len() {
        x /= ALPHABET.len();
        w += 1;
    }
    w
}

fn encode_number(mut x: usize, width: usize, out: &mut String) {
    let mut buf = vec![b'0'; width];
    for slot in buf.iter_mut().rev() {
        *slot = ALPHABET[x % ALPHABET.len()];
        x /= ALPHABET.len();
    }
    out.push_str(std::str::from_utf8(&buf).unwrap());
}

fn decode_number(s: &[u8]) -> Option<usize> {
    s.iter().try_fold(0usize, |acc, &c| {
        let d = ALPHABET.iter().position(|&a| a == c)?;
        Some(acc * ALPHABET.len() + d)
    })
}

/// Canonical string for the isomorphism class of a connected pairing:
/// `n` in decimal, a `.`, then for every face a fixed-width target
/// tetrahedron followed by one permutation character.
pub fn isomorphism_signature(p: &Pairing) -> Result<String, TriError> {
    Ok(encode(p.size(), &canonical_sequence(p)?))
}

pub(crate) fn canonical_sequence(p: &Pairing) -> Result<Vec<(usize, usize)>, TriError> {
    if !p.is_connected() {
        return Err(TriError::Disconnected);
    }
    let mut best: Option<Vec<(usize, usize)>> = None;
    for start in 0..p.size() {
        for &labeling in Perm4::all() {
            if let Some(seq) = walk(p, start, labeling, best.as_deref()) {
                if best.as_ref().is_none_or(|b| seq < *b) {
                    best = Some(seq);
                }
            }
        }
    }
    Ok(best.unwrap())
}

fn encode(n: usize, seq: &[(usize, usize)]) -> String {
    let width = digits(n);
    let mut s = format!("{n}.");
    for &(t, perm) in seq {
        encode_number(t, width, &mut s);
        s.push(ALPHABET[perm] as char);
    }
    s
}

impl Pairing {
    /// Rebuilds the canonical representative from a signature.
    pub fn from_signature(sig: &str) -> Result<Pairing, TriError> {
        let bad = || TriError::Parse(format!("bad signature {sig}"));
        let (n, body) = sig.split_once('.').ok_or_else(bad)?;
        let n: usize = n.parse().map_err(|_| bad())?;
        let width = digits(n);
        let body = body.as_bytes();
        if n == 0 || body.len() != 4 * n * (width + 1) {
            return Err(bad());
        }
        let mut gluings = vec![
            [Gluing {
                tet: 0,
                perm: Perm4::IDENTITY
            }; 4];
            n
        ];
        for (k, chunk) in body.chunks(width + 1).enumerate() {
            let tet = decode_number(&chunk[..width]).ok_or_else(bad)?;
            let perm = decode_number(&chunk[width..])
                .filter(|&x| x < 24)
                .ok_or_else(bad)?;
            gluings[k / 4][k % 4] = Gluing {
                tet,
                perm: Perm4::all()[perm],
            };
        }
        let p = Pairing::new(gluings)?;
        if isomorphism_signature(&p)? != sig {
            return Err(bad());
        }
        Ok(p)
    }
}
