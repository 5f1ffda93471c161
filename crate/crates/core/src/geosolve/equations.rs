use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use super::{CuspMarks, GeoError};
use crate::tetshape::{edge_lengths_with_gradient, DihedralAngles, TetError, VERTEX_EDGES};
use crate::tricomb::{edge_classes, is_manifold, vertex_classes, Pairing, TriError};

#[derive(Debug, Clone, PartialEq)]
pub enum Equation {
    /// Angles around edge class `class` add up to 2π.
    AngleSum { class: usize },
    /// Edge `a` and edge `b` (as `(tet, edge)`) have equal length.
    Length {
        a: (usize, usize),
        b: (usize, usize),
    },
    /// The three angles at an ideal vertex add up to π.
    VertexSum { tet: usize, vertex: usize },
    /// No shearing around an edge with both ends at cusps: the product of
    /// the cusp-triangle side ratios around the edge is 1.
    Similarity { class: usize },
}

/// The hyperbolicity equations of a pairing under given cusp marks.
///
/// Unknowns are the angles not fixed to 0 by the marks, in `(tet, edge)`
/// order.
#[derive(Debug, Clone)]
pub struct EquationSystem {
    pub pairing: Pairing,
    pub marks: CuspMarks,
    pub equations: Vec<Equation>,
    /// `(tet, edge)` of each unknown.
    pub unknowns: Vec<(usize, usize)>,
    pub edge_slots: Vec<Vec<(usize, usize)>>,
    /// `(left, right)` angle slots for each similarity equation.
    ratio_slots: Vec<Vec<((usize, usize), (usize, usize))>>,
    /// `ideal[tet][vertex]`.
    ideal: Vec<[bool; 4]>,
    zero: Vec<[bool; 6]>,
}

pub fn build_equations(p: &Pairing, marks: &CuspMarks) -> Result<EquationSystem, GeoError> {
    let report = is_manifold(p);
    if !report.manifold {
        return Err(TriError::NonManifold(report.diagnosis.unwrap_or_default()).into());
    }
    let n = p.size();
    let edges = edge_classes(p);
    let verts = vertex_classes(p);
    if let Some(&v) = marks.ideal_vertices.iter().find(|&&v| v >= verts.len()) {
        return Err(GeoError::InconsistentMarks(format!("no vertex class {v}")));
    }
    if let Some(&e) = marks.zero_edges.iter().find(|&&e| e >= edges.len()) {
        return Err(GeoError::InconsistentMarks(format!("no edge class {e}")));
    }
    if !marks.zero_edges.is_empty() && marks.zero_edges.len() != edges.len() {
        return Err(GeoError::InconsistentMarks(
            "angle 0 is supported only on every edge at once".into(),
        ));
    }
    if !marks.zero_edges.is_empty() && !marks.ideal_vertices.is_empty() {
        return Err(GeoError::InconsistentMarks(
            "ideal vertices cannot meet edges of angle 0".into(),
        ));
    }

    let mut ideal = vec![[false; 4]; n];
    for v in &verts {
        if marks.ideal_vertices.contains(&v.id) {
            for &(t, x) in &v.slots {
                ideal[t][x] = true;
            }
        }
    }
    let mut zero = vec![[false; 6]; n];
    for e in &edges {
        if marks.zero_edges.contains(&e.id) {
            for s in &e.cycle {
                zero[s.tet][s.edge()] = true;
            }
        }
    }

    let mut equations = Vec::new();
    let mut ratio_slots = Vec::new();
    for e in &edges {
        if marks.zero_edges.contains(&e.id) {
            continue;
        }
        equations.push(Equation::AngleSum { class: e.id });
        let cusped = e.ends.map(|v| marks.ideal_vertices.contains(&v));
        match cusped {
            [false, false] => {
                let first = (e.cycle[0].tet, e.cycle[0].edge());
                for s in &e.cycle[1..] {
                    equations.push(Equation::Length {
                        a: first,
                        b: (s.tet, s.edge()),
                    });
                }
            }
            [true, true] => {
                equations.push(Equation::Similarity { class: e.id });
                ratio_slots.push(
                    e.cycle
                        .iter()
                        .map(|s| {
                            let exit = (s.tet, crate::tetshape::edge_index(s.a, s.c));
                            let entry = (s.tet, crate::tetshape::edge_index(s.a, s.d));
                            (exit, entry)
                        })
                        .collect(),
                );
            }
            _ => {}
        }
    }
    for (t, row) in ideal.iter().enumerate() {
        for (v, &on) in row.iter().enumerate() {
            if on {
                equations.push(Equation::VertexSum { tet: t, vertex: v });
            }
        }
    }

    let unknowns = (0..n)
        .flat_map(|t| (0..6).map(move |e| (t, e)))
        .filter(|&(t, e)| !zero[t][e])
        .collect();
    Ok(EquationSystem {
        pairing: p.clone(),
        marks: marks.clone(),
        equations,
        unknowns,
        edge_slots: edges
            .iter()
            .map(|e| e.cycle.iter().map(|s| (s.tet, s.edge())).collect())
            .collect(),
        ratio_slots,
        ideal,
        zero,
    })
}

impl EquationSystem {
    pub fn size(&self) -> usize {
        self.pairing.size()
    }

    /// Full angle table from a vector of unknowns.
    pub fn angles(&self, x: &DVector<f64>) -> Vec<[f64; 6]> {
        let mut out = vec![[0.0; 6]; self.size()];
        for (k, &(t, e)) in self.unknowns.iter().enumerate() {
            out[t][e] = x[k];
        }
        out
    }

    pub fn unknowns_from(&self, angles: &[[f64; 6]]) -> DVector<f64> {
        DVector::from_iterator(
            self.unknowns.len(),
            self.unknowns.iter().map(|&(t, e)| angles[t][e]),
        )
    }

    /// Every angle equal to `2π / valence` of its edge class.
    pub fn initial_guess(&self) -> DVector<f64> {
        let mut angles = vec![[0.0; 6]; self.size()];
        for slots in &self.edge_slots {
            for &(t, e) in slots {
                if !self.zero[t][e] {
                    angles[t][e] = 2.0 * PI / slots.len() as f64;
                }
            }
        }
        self.unknowns_from(&angles)
    }

    /// Admissible starting points: the valence guess if admissible, then the
    /// analytic center of the angle-structure polytope.
    pub fn starting_points(&self) -> Vec<DVector<f64>> {
        let mut out = Vec::new();
        let guess = self.initial_guess();
        if self.admissible(&guess) {
            out.push(guess);
        }
        if let Some(c) = self.analytic_center() {
            if self.admissible(&c) {
                out.push(c);
            }
        }
        out
    }

    /// Maximizes `Σ log θ + Σ log(π − θ) + Σ log(π − vertex sum)` subject
    /// to the linear angle conditions, by infeasible-start Newton from the
    /// uniform angle π/6. `None` if the polytope looks empty.
    pub fn analytic_center(&self) -> Option<DVector<f64>> {
        let m = self.unknowns.len();
        if m == 0 {
            return None;
        }
        let mut col = vec![[usize::MAX; 6]; self.size()];
        for (k, &(t, e)) in self.unknowns.iter().enumerate() {
            col[t][e] = k;
        }
        let mut eq_rows: Vec<(Vec<usize>, f64)> = Vec::new();
        let mut barriers: Vec<Vec<usize>> = Vec::new();
        for q in &self.equations {
            match *q {
                Equation::AngleSum { class } => {
                    eq_rows.push((
                        self.edge_slots[class]
                            .iter()
                            .map(|&(t, e)| col[t][e])
                            .collect(),
                        2.0 * PI,
                    ));
                }
                Equation::VertexSum { tet, vertex } => {
                    eq_rows.push((
                        VERTEX_EDGES[vertex].iter().map(|&e| col[tet][e]).collect(),
                        PI,
                    ));
                }
                _ => {}
            }
        }
        for (t, row) in self.ideal.iter().enumerate() {
            for (v, &ideal) in row.iter().enumerate() {
                if !ideal {
                    barriers.push(VERTEX_EDGES[v].iter().map(|&e| col[t][e]).collect());
                }
            }
        }
        let p = eq_rows.len();
        let mut a = DMatrix::zeros(p, m);
        let mut b = DVector::zeros(p);
        for (r, (cols, rhs)) in eq_rows.iter().enumerate() {
            for &c in cols {
                a[(r, c)] += 1.0;
            }
            b[r] = *rhs;
        }
        let slack = |x: &DVector<f64>| -> Option<Vec<f64>> {
            let mut s: Vec<f64> = x.iter().flat_map(|&v| [v, PI - v]).collect();
            s.extend(
                barriers
                    .iter()
                    .map(|cols| PI - cols.iter().map(|&c| x[c]).sum::<f64>()),
            );
            s.iter().all(|&v| v > 0.0).then_some(s)
        };
        let residual = |x: &DVector<f64>, nu: &DVector<f64>| -> Option<DVector<f64>> {
            let s = slack(x)?;
            let mut g = DVector::zeros(m);
            for i in 0..m {
                g[i] = -1.0 / s[2 * i] + 1.0 / s[2 * i + 1];
            }
            for (k, cols) in barriers.iter().enumerate() {
                for &c in cols {
                    g[c] += 1.0 / s[2 * m + k];
                }
            }
            let dual = g + a.transpose() * nu;
            let primal = &a * x - &b;
            Some(DVector::from_iterator(
                m + p,
                dual.iter().chain(primal.iter()).copied(),
            ))
        };

        let mut x = DVector::from_element(m, PI / 6.0);
        let mut nu = DVector::zeros(p);
        for _ in 0..100 {
            let r = residual(&x, &nu)?;
            if r.norm() < 1e-11 {
                return Some(x);
            }
            let s = slack(&x)?;
            let mut kkt = DMatrix::zeros(m + p, m + p);
            for i in 0..m {
                kkt[(i, i)] = 1.0 / s[2 * i].powi(2) + 1.0 / s[2 * i + 1].powi(2);
            }
            for (k, cols) in barriers.iter().enumerate() {
                let w = 1.0 / s[2 * m + k].powi(2);
                for &i in cols {
                    for &j in cols {
                        kkt[(i, j)] += w;
                    }
                }
            }
            kkt.view_mut((m, 0), (p, m)).copy_from(&a);
            kkt.view_mut((0, m), (m, p)).copy_from(&a.transpose());
            let step = kkt.svd(true, true).solve(&(-&r), 1e-12).ok()?;
            let (dx, dnu) = (step.rows(0, m).into_owned(), step.rows(m, p).into_owned());
            let mut t = 1.0;
            loop {
                let (y, mu) = (&x + t * &dx, &nu + t * &dnu);
                if let Some(ry) = residual(&y, &mu) {
                    if ry.norm() <= (1.0 - 0.01 * t) * r.norm() {
                        x = y;
                        nu = mu;
                        break;
                    }
                }
                t *= 0.5;
                if t < 1e-10 {
                    return None;
                }
            }
        }
        None
    }

    /// Whether `x` describes actual tetrahedra: angles in `(0, π)`, vertex
    /// sums below π except at ideal vertices, hyperbolic Gram matrices.
    pub fn admissible(&self, x: &DVector<f64>) -> bool {
        if x.iter().any(|&a| !(a > 0.0 && a < PI)) {
            return false;
        }
        self.angles(x).iter().enumerate().all(|(t, a)| {
            if self.zero[t].iter().all(|&z| z) {
                return true;
            }
            let ok_vertices = VERTEX_EDGES.iter().enumerate().all(|(v, es)| {
                let s: f64 = es.iter().map(|&e| a[e]).sum();
                self.ideal[t][v] || s < PI
            });
            ok_vertices && DihedralAngles::new(*a).is_ok_and(|d| d.check_hyperbolic().is_ok())
        })
    }

    /// Residual and Jacobian at `x`, which must be admissible.
    pub fn evaluate(&self, x: &DVector<f64>) -> Result<(DVector<f64>, DMatrix<f64>), TetError> {
        let angles = self.angles(x);
        let n = self.size();
        let mut col = vec![[usize::MAX; 6]; n];
        for (k, &(t, e)) in self.unknowns.iter().enumerate() {
            col[t][e] = k;
        }
        let needs_lengths = self
            .equations
            .iter()
            .any(|q| matches!(q, Equation::Length { .. }));
        let mut lengths = Vec::with_capacity(n);
        if needs_lengths {
            for a in &angles {
                lengths.push(edge_lengths_with_gradient(&DihedralAngles::new(*a)?)?);
            }
        }

        let m = self.equations.len();
        let mut f = DVector::zeros(m);
        let mut jac = DMatrix::zeros(m, self.unknowns.len());
        let mut similarity = 0;
        for (row, q) in self.equations.iter().enumerate() {
            match *q {
                Equation::AngleSum { class } => {
                    let slots = &self.edge_slots[class];
                    f[row] = slots.iter().map(|&(t, e)| angles[t][e]).sum::<f64>() - 2.0 * PI;
                    for &(t, e) in slots {
                        jac[(row, col[t][e])] += 1.0;
                    }
                }
                Equation::Length { a, b } => {
                    let (la, ga) = &lengths[a.0];
                    let (lb, gb) = &lengths[b.0];
                    f[row] = la[a.1] - lb[b.1];
                    for e in 0..6 {
                        if col[a.0][e] != usize::MAX {
                            jac[(row, col[a.0][e])] += ga[a.1][e];
                        }
                        if col[b.0][e] != usize::MAX {
                            jac[(row, col[b.0][e])] -= gb[b.1][e];
                        }
                    }
                }
                Equation::VertexSum { tet, vertex } => {
                    let es = VERTEX_EDGES[vertex];
                    f[row] = es.iter().map(|&e| angles[tet][e]).sum::<f64>() - PI;
                    for e in es {
                        jac[(row, col[tet][e])] += 1.0;
                    }
                }
                Equation::Similarity { .. } => {
                    for &(l, r) in &self.ratio_slots[similarity] {
                        let (al, ar) = (angles[l.0][l.1], angles[r.0][r.1]);
                        f[row] += al.sin().ln() - ar.sin().ln();
                        jac[(row, col[l.0][l.1])] += al.cos() / al.sin();
                        jac[(row, col[r.0][r.1])] -= ar.cos() / ar.sin();
                    }
                    similarity += 1;
                }
            }
        }
        Ok((f, jac))
    }

    pub fn residual(&self, x: &DVector<f64>) -> Result<DVector<f64>, TetError> {
        Ok(self.evaluate(x)?.0)
    }
}
