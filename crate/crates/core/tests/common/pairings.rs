//! Brute-force pairing classes, independent of the library's enumeration
//! and signatures: list every labeled face pairing, then sweep each orbit of
//! the relabeling group once.

use std::collections::HashSet;

use super::s4;

/// `glue[t][f] = (t', images)`: face `f` of `t` goes to `t'`, vertex `v` to
/// `images[v]`.
pub type Labeled = Vec<[(usize, [usize; 4]); 4]>;

fn parity(p: &[usize; 4]) -> bool {
    let mut odd = false;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] > p[j] {
                odd = !odd;
            }
        }
    }
    odd
}

fn inverse(p: &[usize; 4]) -> [usize; 4] {
    let mut q = [0; 4];
    for (i, &x) in p.iter().enumerate() {
        q[x] = i;
    }
    q
}

fn matchings(
    faces: &mut Vec<usize>,
    acc: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    let Some(first) = faces.first().copied() else {
        out.push(acc.clone());
        return;
    };
    for k in 1..faces.len() {
        let second = faces[k];
        let rest: Vec<usize> = faces
            .iter()
            .copied()
            .filter(|&f| f != first && f != second)
            .collect();
        let saved = std::mem::replace(faces, rest);
        acc.push((first, second));
        matchings(faces, acc, out);
        acc.pop();
        *faces = saved;
    }
}

/// Every labeled pairing of `n` tetrahedra.
pub fn labeled_pairings(n: usize) -> Vec<Labeled> {
    let mut ms = Vec::new();
    matchings(&mut (0..4 * n).collect(), &mut Vec::new(), &mut ms);
    let perms = s4();
    let mut out = Vec::new();
    for m in ms {
        // choose one of the 6 maps for every matched pair
        let options: Vec<Vec<[usize; 4]>> = m
            .iter()
            .map(|&(a, b)| {
                perms
                    .iter()
                    .copied()
                    .filter(|p| p[a % 4] == b % 4)
                    .collect()
            })
            .collect();
        let mut idx = vec![0; m.len()];
        loop {
            let mut glue = vec![[(0, [0; 4]); 4]; n];
            for (k, &(a, b)) in m.iter().enumerate() {
                let p = options[k][idx[k]];
                glue[a / 4][a % 4] = (b / 4, p);
                glue[b / 4][b % 4] = (a / 4, inverse(&p));
            }
            out.push(glue);
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < 6 {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    out
}

pub fn connected(g: &Labeled) -> bool {
    let mut seen = vec![false; g.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(t) = stack.pop() {
        for &(u, _) in &g[t] {
            if !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Orientable when tetrahedra can be signed so that every gluing map,
/// twisted by the two signs, is odd.
pub fn orientable(g: &Labeled) -> bool {
    let mut sign: Vec<Option<bool>> = vec![None; g.len()];
    sign[0] = Some(false);
    let mut stack = vec![0];
    while let Some(t) = stack.pop() {
        for (u, p) in &g[t] {
            // sign[u] = sign[t] xor parity(p) xor odd-required
            let want = sign[t].unwrap() ^ parity(p) ^ true;
            match sign[*u] {
                None => {
                    sign[*u] = Some(want);
                    stack.push(*u);
                }
                Some(s) if s != want => return false,
                _ => {}
            }
        }
    }
    true
}

fn relabel(g: &Labeled, tmap: &[usize], vmaps: &[[usize; 4]]) -> Labeled {
    let mut out = vec![[(0, [0; 4]); 4]; g.len()];
    for t in 0..g.len() {
        let inv = inverse(&vmaps[t]);
        for f in 0..4 {
            let (u, p) = g[t][f];
            let mut q = [0; 4];
            for v in 0..4 {
                q[v] = vmaps[u][p[inv[v]]];
            }
            out[tmap[t]][vmaps[t][f]] = (tmap[u], q);
        }
    }
    out
}

fn tet_perms(n: usize) -> Vec<Vec<usize>> {
    match n {
        1 => vec![vec![0]],
        2 => vec![vec![0, 1], vec![1, 0]],
        _ => unimplemented!("oracle only covers n <= 2"),
    }
}

/// Numbers of isomorphism classes of connected pairings: `(all,
/// orientable)`.
pub fn class_counts(n: usize) -> (usize, usize) {
    let perms = s4();
    let mut seen: HashSet<Labeled> = HashSet::new();
    let (mut all, mut orient) = (0, 0);
    for g in labeled_pairings(n) {
        if !connected(&g) || seen.contains(&g) {
            continue;
        }
        all += 1;
        if orientable(&g) {
            orient += 1;
        }
        for tmap in tet_perms(n) {
            let mut idx = vec![0usize; n];
            loop {
                let vmaps: Vec<[usize; 4]> = idx.iter().map(|&i| perms[i]).collect();
                seen.insert(relabel(&g, &tmap, &vmaps));
                let mut k = 0;
                while k < n {
                    idx[k] += 1;
                    if idx[k] < 24 {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == n {
                    break;
                }
            }
        }
    }
    (all, orient)
}
