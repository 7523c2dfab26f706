//! Polyhedral cones `{ x : A x <= 0, E x = 0 }` in V-free form.
//!
//! Only two questions matter here: what are the lineality space and extreme
//! rays (the jet-frame search branches on them), and is the cone trivial
//! (the recession-cone boundedness test). Enumeration mirrors hpoly.rs.

use crate::config::Tolerances;
use crate::hpoly::for_each_subset;
use crate::linalg;
use nalgebra::DVector;

#[derive(Debug, Clone)]
pub struct Cone {
    pub dim: usize,
    /// rows a with a . x <= 0
    pub ineqs: Vec<DVector<f64>>,
    /// rows e with e . x = 0
    pub eqs: Vec<DVector<f64>>,
}

impl Cone {
    pub fn new(dim: usize) -> Cone {
        Cone { dim, ineqs: Vec::new(), eqs: Vec::new() }
    }

    pub fn contains(&self, x: &DVector<f64>, eps: f64) -> bool {
        self.ineqs.iter().all(|a| a.dot(x) <= eps)
            && self.eqs.iter().all(|e| e.dot(x).abs() <= eps)
    }

    /// Orthonormal basis of the lineality space {x : Ax = 0, Ex = 0}.
    pub fn lineality(&self, tol: &Tolerances) -> Vec<DVector<f64>> {
        let rows: Vec<DVector<f64>> =
            self.ineqs.iter().chain(self.eqs.iter()).cloned().collect();
        linalg::nullspace(&rows, self.dim, tol.eps_rank)
    }

    /// Span of the cone: the nullspace of the equality rows alone.
    fn span_basis(&self, tol: &Tolerances) -> Vec<DVector<f64>> {
        linalg::nullspace(&self.eqs, self.dim, tol.eps_rank)
    }

    /// Extreme rays of the pointed quotient cone (cone modulo lineality),
    /// lifted back to unit vectors orthogonal to the lineality space.
    /// Deterministic: rays are deduplicated by direction and sorted
    /// lexicographically.
    pub fn extreme_rays(&self, tol: &Tolerances) -> Vec<DVector<f64>> {
        let lin = self.lineality(tol);
        let span = self.span_basis(tol);
        // W: orthonormal basis of span ∩ lineality^perp, the quotient ambient
        let mut seed: Vec<DVector<f64>> = lin.clone();
        seed.extend(span.iter().cloned());
        let full = linalg::gram_schmidt(&seed, tol.eps_rank);
        let w: Vec<DVector<f64>> = full.into_iter().skip(lin.len()).collect();
        let q = w.len();
        if q == 0 {
            return Vec::new();
        }
        // inequality rows restricted to the quotient
        let rows: Vec<DVector<f64>> = self
            .ineqs
            .iter()
            .map(|a| DVector::from_fn(q, |k, _| w[k].dot(a)))
            .filter(|r| r.norm() > tol.eps_rank)
            .collect();
        if q == 1 {
            // at most two directions; keep the feasible ones
            let mut rays = Vec::new();
            for s in [1.0_f64, -1.0] {
                let y = DVector::from_vec(vec![s]);
                if rows.iter().all(|r| r.dot(&y) <= tol.eps_rank) {
                    rays.push(lift(&w, &y));
                }
            }
            return finish(rays, tol);
        }
        let mut rays: Vec<DVector<f64>> = Vec::new();
        for_each_subset(rows.len(), q - 1, |idx| {
            let ns = linalg::nullspace(
                &idx.iter().map(|&i| rows[i].clone()).collect::<Vec<_>>(),
                q,
                tol.eps_rank,
            );
            if ns.len() != 1 {
                return;
            }
            for s in [1.0_f64, -1.0] {
                let y = &ns[0] * s;
                if rows.iter().all(|r| r.dot(&y) <= tol.eps_rank * 10.0) {
                    rays.push(lift(&w, &y));
                }
            }
        });
        finish(rays, tol)
    }

    /// A cone is trivial iff it has neither lineality nor extreme rays.
    pub fn is_trivial(&self, tol: &Tolerances) -> bool {
        self.lineality(tol).is_empty() && self.extreme_rays(tol).is_empty()
    }
}

fn lift(w: &[DVector<f64>], y: &DVector<f64>) -> DVector<f64> {
    let dim = w[0].len();
    let mut x = DVector::zeros(dim);
    for (k, b) in w.iter().enumerate() {
        x.axpy(y[k], b, 1.0);
    }
    let n = x.norm();
    x / n
}

fn finish(rays: Vec<DVector<f64>>, tol: &Tolerances) -> Vec<DVector<f64>> {
    let mut out: Vec<DVector<f64>> = Vec::new();
    for r in rays {
        if !out.iter().any(|s| (s - &r).norm() <= tol.eps_pt * 10.0) {
            out.push(r);
        }
    }
    linalg::sort_points_lex(&mut out, 0.0);
    out
}

/// Recession cone of an H-polytope: same rows, zero offsets.
pub fn recession_cone(p: &crate::hpoly::HPolytope) -> Cone {
    Cone {
        dim: p.dim,
        ineqs: p.ineqs.iter().map(|h| h.normal.clone()).collect(),
        eqs: p.eqs.iter().map(|(a, _)| a.clone()).collect(),
    }
}
