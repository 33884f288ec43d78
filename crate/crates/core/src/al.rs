//! Representations of `A_L`: admissible graphs, the block form, and
//! representations induced from `C_{L,a}` through ψ.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::bridge::PsiCoefficients;
use crate::dynamics::{distance, AffineMap2, Point};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::rep::{monomial_after, Representation};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectedGraph {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl DirectedGraph {
    pub fn new(n: usize, edges: Vec<[usize; 2]>) -> Result<Self> {
        let graph = Self { n, edges };
        graph.validate()?;
        Ok(graph)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidInput(
                "graph needs at least one vertex".into(),
            ));
        }
        if let Some(e) = self.edges.iter().find(|e| e[0] >= self.n || e[1] >= self.n) {
            return Err(Error::InvalidInput(format!(
                "edge ({}, {}) out of range for {} vertices",
                e[0], e[1], self.n
            )));
        }
        Ok(())
    }

    /// Directed cycle `0 → 1 → … → n−1 → 0`.
    pub fn cycle(n: usize) -> Self {
        Self {
            n,
            edges: (0..n).map(|i| [i, (i + 1) % n]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Admissibility {
    /// Minimum-norm solution of the edge constraints.
    pub assignment: Vec<Point>,
    /// Whether some admissible assignment has two distinct vectors.
    pub nondegenerate: bool,
    /// An assignment with two distinct vectors, when one exists.
    pub witness: Option<Vec<Point>>,
    /// Dimension of the solution space.
    pub free_dimensions: usize,
    /// Whether `L` stays injective on the reported vectors.
    pub locally_injective: bool,
}

/// Each vertex vector as an affine function `M z + c` of the unknowns `z`.
#[derive(Clone)]
struct AffineExpr {
    m: DMatrix<f64>,
    c: [f64; 2],
}

fn apply_to_expr(l: &AffineMap2, e: &AffineExpr) -> AffineExpr {
    let a = DMatrix::from_row_slice(2, 2, &[l.a11, l.a12, l.a21, l.a22]);
    let c = l.apply(e.c);
    AffineExpr { m: a * &e.m, c }
}

fn widen(e: &AffineExpr, cols: usize) -> AffineExpr {
    let mut m = DMatrix::zeros(2, cols);
    m.view_mut((0, 0), (2, e.m.ncols())).copy_from(&e.m);
    AffineExpr { m, c: e.c }
}

/// Decides whether `graph` is `L`-admissible by propagating affine
/// expressions along edges and solving the remaining constraints in the
/// least-squares sense.
pub fn check_admissible(graph: &DirectedGraph, l: &AffineMap2, tol: f64) -> Option<Admissibility> {
    graph.validate().ok()?;
    let n = graph.n;
    let inverse = l.inverse();
    let mut adjacency: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
    for e in &graph.edges {
        adjacency[e[0]].push((e[1], true));
        adjacency[e[1]].push((e[0], false));
    }

    let mut exprs: Vec<Option<AffineExpr>> = vec![None; n];
    let mut unknowns = 0usize;
    let fresh = |unknowns: &mut usize| {
        let mut m = DMatrix::zeros(2, *unknowns + 2);
        m[(0, *unknowns)] = 1.0;
        m[(1, *unknowns + 1)] = 1.0;
        *unknowns += 2;
        AffineExpr { m, c: [0.0, 0.0] }
    };
    for root in 0..n {
        if exprs[root].is_some() {
            continue;
        }
        exprs[root] = Some(fresh(&mut unknowns));
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            for &(j, forward) in &adjacency[i] {
                if exprs[j].is_some() {
                    continue;
                }
                let known = exprs[i].clone().expect("visited vertex");
                let next = if forward {
                    apply_to_expr(l, &known)
                } else if let Some(inv) = &inverse {
                    apply_to_expr(inv, &known)
                } else {
                    fresh(&mut unknowns)
                };
                exprs[j] = Some(next);
                queue.push_back(j);
            }
        }
    }
    let exprs: Vec<AffineExpr> = exprs
        .into_iter()
        .map(|e| widen(&e.expect("all visited"), unknowns))
        .collect();

    // every edge: L(v_i) − v_j = 0; zero rows pad the system to at least
    // square so the SVD exposes the whole null space
    let rows = (2 * graph.edges.len()).max(unknowns);
    let mut jac = DMatrix::zeros(rows, unknowns);
    let mut rhs = DVector::zeros(rows);
    for (k, e) in graph.edges.iter().enumerate() {
        let image = apply_to_expr(l, &exprs[e[0]]);
        let target = &exprs[e[1]];
        for r in 0..2 {
            for c in 0..unknowns {
                jac[(2 * k + r, c)] = image.m[(r, c)] - target.m[(r, c)];
            }
            rhs[2 * k + r] = target.c[r] - image.c[r];
        }
    }
    let scale = jac.amax().max(rhs.amax()).max(1.0);
    let svd = jac.clone().svd(true, true);
    let eps = 1e-10 * scale;
    let z = svd.solve(&rhs, eps).ok()?;
    let residual = (&jac * &z - &rhs).amax();
    if residual > tol * scale {
        return None;
    }
    let v_t = svd.v_t.as_ref()?;
    let null: Vec<DVector<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= eps)
        .map(|(idx, _)| v_t.row(idx).transpose())
        .collect();

    let evaluate = |z: &DVector<f64>| -> Vec<Point> {
        exprs
            .iter()
            .map(|e| {
                let v = &e.m * z;
                [v[0] + e.c[0], v[1] + e.c[1]]
            })
            .collect()
    };
    let assignment = evaluate(&z);
    let distinct = |vs: &[Point]| vs.iter().any(|p| distance(*p, vs[0]) > tol.max(1e-9));
    let witness = if distinct(&assignment) {
        Some(assignment.clone())
    } else {
        null.iter()
            .map(|dir| evaluate(&(&z + dir)))
            .find(|vs| distinct(vs))
    };
    let reported = witness.as_ref().unwrap_or(&assignment);
    let locally_injective = injective_on(l, reported, tol.max(1e-9));
    Some(Admissibility {
        nondegenerate: witness.is_some(),
        witness,
        assignment,
        free_dimensions: null.len(),
        locally_injective,
    })
}

fn injective_on(l: &AffineMap2, vs: &[Point], tol: f64) -> bool {
    for i in 0..vs.len() {
        for j in (i + 1)..vs.len() {
            if distance(vs[i], vs[j]) > tol && distance(l.apply(vs[i]), l.apply(vs[j])) <= tol {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq)]
pub struct ALRepresentation {
    pub block_sizes: Vec<usize>,
    pub e_diag: Vec<f64>,
    pub et_diag: Vec<f64>,
    pub s: CMatrix,
    pub map: AffineMap2,
    /// Masked indices inherited from a truncated window.
    pub boundary: Vec<usize>,
}

impl ALRepresentation {
    pub fn dim(&self) -> usize {
        self.s.nrows()
    }

    pub fn e(&self) -> CMatrix {
        linalg::real_diag(&self.e_diag)
    }

    pub fn et(&self) -> CMatrix {
        linalg::real_diag(&self.et_diag)
    }

    pub fn t(&self) -> CMatrix {
        self.s.adjoint()
    }
}

/// Block representation over the orbit `v1, L(v1), …, L^{k−1}(v1)`, with
/// `S` carrying `blocks[i]` (shape `nᵢ × nᵢ₊₁`) on the block superdiagonal and
/// `corner` (shape `n_k × n₁`) in the lower-left corner.
pub fn build_block_rep(
    l: &AffineMap2,
    v1: Point,
    block_sizes: &[usize],
    blocks: &[CMatrix],
    corner: Option<&CMatrix>,
    tol: &Tolerances,
) -> Result<ALRepresentation> {
    let k = block_sizes.len();
    if k == 0 || block_sizes.contains(&0) {
        return Err(Error::ShapeMismatch(
            "block sizes must be positive and non-empty".into(),
        ));
    }
    if blocks.len() != k - 1 {
        return Err(Error::ShapeMismatch(format!(
            "{} blocks given for {k} block classes (need {})",
            blocks.len(),
            k - 1
        )));
    }
    for (i, b) in blocks.iter().enumerate() {
        if b.shape() != (block_sizes[i], block_sizes[i + 1]) {
            return Err(Error::ShapeMismatch(format!(
                "block {} is {}×{}, expected {}×{}",
                i + 1,
                b.nrows(),
                b.ncols(),
                block_sizes[i],
                block_sizes[i + 1]
            )));
        }
    }
    let mut points = Vec::with_capacity(k);
    let mut p = v1;
    for _ in 0..k {
        points.push(p);
        p = l.apply(p);
    }
    if let Some(c) = corner {
        if c.shape() != (block_sizes[k - 1], block_sizes[0]) {
            return Err(Error::ShapeMismatch(format!(
                "corner is {}×{}, expected {}×{}",
                c.nrows(),
                c.ncols(),
                block_sizes[k - 1],
                block_sizes[0]
            )));
        }
        if !(distance(p, v1) < tol.orbit) {
            return Err(Error::CornerWithoutPeriodicity { order: k });
        }
    }

    let dim: usize = block_sizes.iter().sum();
    let offsets: Vec<usize> = block_sizes
        .iter()
        .scan(0, |acc, &n| {
            let start = *acc;
            *acc += n;
            Some(start)
        })
        .collect();
    let mut s = linalg::zeros(dim);
    for (i, b) in blocks.iter().enumerate() {
        s.view_mut((offsets[i], offsets[i + 1]), b.shape())
            .copy_from(b);
    }
    if let Some(c) = corner {
        // for k = 1 the corner block is the whole of S
        let view = s.view((offsets[k - 1], 0), c.shape()).clone_owned() + c;
        s.view_mut((offsets[k - 1], 0), c.shape()).copy_from(&view);
    }
    let mut e_diag = Vec::with_capacity(dim);
    let mut et_diag = Vec::with_capacity(dim);
    for (point, &n) in points.iter().zip(block_sizes) {
        e_diag.extend(std::iter::repeat_n(point[0], n));
        et_diag.extend(std::iter::repeat_n(point[1], n));
    }
    Ok(ALRepresentation {
        block_sizes: block_sizes.to_vec(),
        e_diag,
        et_diag,
        s,
        map: *l,
        boundary: Vec::new(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ALRelationReport {
    pub dim: usize,
    pub residual_s1: f64,
    pub residual_s2: f64,
    pub residual_t1: f64,
    pub residual_t2: f64,
    pub residual_commute: f64,
    pub boundary: f64,
}

impl ALRelationReport {
    pub fn max_interior(&self) -> f64 {
        [
            self.residual_s1,
            self.residual_s2,
            self.residual_t1,
            self.residual_t2,
            self.residual_commute,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_interior() <= tol * self.dim as f64
    }
}

pub fn verify_al_relations(rep: &ALRepresentation) -> ALRelationReport {
    let l = &rep.map;
    let (e, et, s, t) = (rep.e(), rep.et(), &rep.s, rep.t());
    let sc = linalg::scaled;
    let r1 = sc(&(&e * s), l.a11) + sc(&(&et * s), l.a12) + sc(s, l.t1) - s * &e;
    let r2 = sc(&(&e * s), l.a21) + sc(&(&et * s), l.a22) + sc(s, l.t2) - s * &et;
    let r3 = sc(&(&t * &e), l.a11) + sc(&(&t * &et), l.a12) + sc(&t, l.t1) - &e * &t;
    let r4 = sc(&(&t * &e), l.a21) + sc(&(&t * &et), l.a22) + sc(&t, l.t2) - &et * &t;
    let r5 = linalg::commutator(&e, &et);
    let split = |m: &CMatrix| linalg::max_abs_split(m, &rep.boundary);
    let parts = [split(&r1), split(&r2), split(&r3), split(&r4), split(&r5)];
    ALRelationReport {
        dim: rep.dim(),
        residual_s1: parts[0].0,
        residual_s2: parts[1].0,
        residual_t1: parts[2].0,
        residual_t2: parts[3].0,
        residual_commute: parts[4].0,
        boundary: parts.iter().map(|p| p.1).fold(0.0, f64::max),
    }
}

/// `S = W`, `T = V`, `E = k + m·WV + n·VW`, `Ẽ = k̃ + m̃·WV + ñ·VW`.
pub fn induce_from_cla(
    rep: &Representation,
    l: &AffineMap2,
    psi: &PsiCoefficients,
) -> Result<ALRepresentation> {
    let d = rep.d();
    let dt = rep.dt();
    let id = linalg::identity(rep.dim());
    let e = linalg::scaled(&id, psi.k) + linalg::scaled(&d, psi.m) + linalg::scaled(&dt, psi.n);
    let et = linalg::scaled(&id, psi.kt) + linalg::scaled(&d, psi.mt) + linalg::scaled(&dt, psi.nt);
    let off = linalg::off_diagonal(&e).max(linalg::off_diagonal(&et));
    if off > 1e-9 * (1.0 + linalg::max_abs(&e).max(linalg::max_abs(&et))) {
        return Err(Error::InvalidInput(format!(
            "WV and VW are not diagonal in this basis (off-diagonal {off:e})"
        )));
    }
    Ok(ALRepresentation {
        block_sizes: vec![1; rep.dim()],
        e_diag: linalg::diagonal_re(&e),
        et_diag: linalg::diagonal_re(&et),
        s: rep.w.clone(),
        map: *l,
        boundary: rep.boundary.clone(),
    })
}

/// Residuals of `Sⁿ p(E, Ẽ) = p(Lⁿ(E, Ẽ)) Sⁿ` and `p(E, Ẽ) Tⁿ = Tⁿ p(Lⁿ(E, Ẽ))`.
pub fn reorder_check_al(
    rep: &ALRepresentation,
    degree: usize,
    max_power: usize,
) -> crate::rep::ReorderReport {
    let (e, et, t) = (rep.e(), rep.et(), rep.t());
    let identity = AffineMap2::identity();
    let mut report = crate::rep::ReorderReport {
        interior: 0.0,
        boundary: 0.0,
    };
    for n in 1..=max_power {
        let map_n = rep.map.power(n);
        let sn = linalg::power(&rep.s, n);
        let tn = linalg::power(&t, n);
        for i in 0..=degree {
            for j in 0..=(degree - i) {
                let p = monomial_after(&identity, &e, &et, i, j);
                let q = monomial_after(&map_n, &e, &et, i, j);
                for residual in [&sn * &p - &q * &sn, &p * &tn - &tn * &q] {
                    let (inner, outer) = linalg::max_abs_split(&residual, &rep.boundary);
                    report.interior = report.interior.max(inner);
                    report.boundary = report.boundary.max(outer);
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn rotation_about(centre: Point, angle: f64) -> AffineMap2 {
        let (c, s) = (angle.cos(), angle.sin());
        let a = [[c, -s], [s, c]];
        let t = [
            centre[0] - (c * centre[0] - s * centre[1]),
            centre[1] - (s * centre[0] + c * centre[1]),
        ];
        AffineMap2::new(a, t)
    }

    #[test]
    fn graph_without_edges() {
        let g = DirectedGraph::new(3, vec![]).unwrap();
        let adm = check_admissible(&g, &rotation_about([1.0, 2.0], 0.3), 1e-9).unwrap();
        assert!(adm.assignment.iter().all(|p| *p == [0.0, 0.0]));
        assert_eq!(adm.free_dimensions, 6);
        // free vertices can carry distinct vectors
        assert!(adm.nondegenerate);
        let single = check_admissible(
            &DirectedGraph::new(1, vec![]).unwrap(),
            &AffineMap2::identity(),
            1e-9,
        )
        .unwrap();
        assert!(!single.nondegenerate);
    }

    #[test]
    fn three_cycle_under_rotation() {
        let l = rotation_about([1.0, 2.0], 2.0 * PI / 3.0);
        let adm = check_admissible(&DirectedGraph::cycle(3), &l, 1e-9).unwrap();
        assert!(adm.nondegenerate);
        let w = adm.witness.unwrap();
        for i in 0..3 {
            assert!(distance(l.apply(w[i]), w[(i + 1) % 3]) < 1e-9);
        }
        assert!(adm.locally_injective);
    }

    #[test]
    fn two_cycle_under_translation() {
        let l = AffineMap2::new([[1.0, 0.0], [0.0, 1.0]], [1.0, 0.0]);
        assert!(check_admissible(&DirectedGraph::cycle(2), &l, 1e-9).is_none());
        let path = DirectedGraph::new(3, vec![[0, 1], [1, 2]]).unwrap();
        assert!(check_admissible(&path, &l, 1e-9).unwrap().nondegenerate);
    }

    #[test]
    fn fixed_point_admits_any_graph() {
        let l = rotation_about([0.5, -1.0], 0.7);
        let g = DirectedGraph::new(4, vec![[0, 1], [1, 0], [1, 1], [2, 3], [3, 1]]).unwrap();
        let adm = check_admissible(&g, &l, 1e-9).unwrap();
        for p in &adm.assignment {
            assert!(distance(*p, [0.5, -1.0]) < 1e-9);
        }
        assert!(!adm.nondegenerate);
    }

    #[test]
    fn non_invertible_map_uses_constraints() {
        // projection onto the first axis
        let l = AffineMap2::new([[1.0, 0.0], [0.0, 0.0]], [0.0, 1.0]);
        let g = DirectedGraph::new(2, vec![[0, 1]]).unwrap();
        let adm = check_admissible(&g, &l, 1e-9).unwrap();
        let w = adm.witness.clone().unwrap_or(adm.assignment.clone());
        assert!(distance(l.apply(w[0]), w[1]) < 1e-9);
        // v₁ = L(v₀) and v₀ = L(v₁) force v₀ = v₁ = (x, 1)
        let back = DirectedGraph::new(2, vec![[0, 1], [1, 0]]).unwrap();
        let adm = check_admissible(&back, &l, 1e-9).unwrap();
        assert!(!adm.nondegenerate);
        assert!((adm.assignment[0][1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn scalar_block_at_fixed_point() {
        let l = rotation_about([0.2, 0.3], 1.0);
        let corner = CMatrix::from_element(1, 1, Complex64::new(0.4, -2.0));
        let rep = build_block_rep(
            &l,
            [0.2, 0.3],
            &[1],
            &[],
            Some(&corner),
            &Tolerances::default(),
        )
        .unwrap();
        assert_eq!(rep.e_diag, vec![0.2]);
        assert!(verify_al_relations(&rep).passes(1e-10));
    }

    #[test]
    fn corner_requires_periodicity() {
        let l = rotation_about([0.0, 0.0], 1.0);
        let block = CMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
        let err = build_block_rep(
            &l,
            [1.0, 0.0],
            &[1, 1],
            std::slice::from_ref(&block),
            Some(&block),
            &Tolerances::default(),
        )
        .unwrap_err();
        assert_eq!(err, Error::CornerWithoutPeriodicity { order: 2 });
        let err = build_block_rep(
            &l,
            [1.0, 0.0],
            &[1, 2],
            &[block],
            None,
            &Tolerances::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::ShapeMismatch(_)));
    }

    #[test]
    fn zero_diagonals_give_zero_residuals() {
        let l = AffineMap2::new([[0.3, 2.0], [-1.0, 0.5]], [0.0, 0.0]);
        let block = CMatrix::from_element(1, 1, Complex64::new(1.5, 0.5));
        let rep = build_block_rep(
            &l,
            [0.0, 0.0],
            &[1, 1],
            &[block],
            None,
            &Tolerances::default(),
        )
        .unwrap();
        assert_eq!(verify_al_relations(&rep).max_interior(), 0.0);
    }

    #[test]
    fn perturbed_eigenvalue_is_detected() {
        let l = rotation_about([1.0, 1.0], 0.4);
        let block = CMatrix::from_element(1, 2, Complex64::new(2.0, 0.0));
        let mut rep = build_block_rep(
            &l,
            [3.0, 0.5],
            &[1, 2],
            &[block],
            None,
            &Tolerances::default(),
        )
        .unwrap();
        assert!(verify_al_relations(&rep).passes(1e-10));
        rep.e_diag[1] += 1e-3;
        assert!(verify_al_relations(&rep).max_interior() >= 1e-4);
    }
}
