//! Small dense linear-algebra helpers shared by the polyhedral kernel.
//!
//! Everything here is deterministic: bases come from ordered Gram-Schmidt and
//! point sets are sorted lexicographically, so repeated runs produce
//! bit-identical output.

use nalgebra::{DMatrix, DVector};
use std::cmp::Ordering;

/// Ordered Gram-Schmidt. Returns an orthonormal basis of the span of
/// `vectors`, preferring earlier vectors; candidates whose residual norm
/// falls below `eps_rank` are dropped as dependent.
pub fn gram_schmidt(vectors: &[DVector<f64>], eps_rank: f64) -> Vec<DVector<f64>> {
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for b in &basis {
            let c = b.dot(&w);
            w.axpy(-c, b, 1.0);
        }
        // second pass for numerical orthogonality
        for b in &basis {
            let c = b.dot(&w);
            w.axpy(-c, b, 1.0);
        }
        let n = w.norm();
        if n > eps_rank {
            basis.push(w / n);
        }
    }
    basis
}

/// Orthonormal basis of the orthogonal complement of the span of `rows`
/// inside R^dim: extend the span basis by standard basis vectors and keep
/// the new directions. Deterministic for fixed input.
pub fn nullspace(rows: &[DVector<f64>], dim: usize, eps_rank: f64) -> Vec<DVector<f64>> {
    let mut all = gram_schmidt(rows, eps_rank);
    let mut out = Vec::new();
    for i in 0..dim {
        let mut w = unit_vector(dim, i);
        for b in all.iter() {
            let c = b.dot(&w);
            w.axpy(-c, b, 1.0);
        }
        for b in all.iter() {
            let c = b.dot(&w);
            w.axpy(-c, b, 1.0);
        }
        let n = w.norm();
        if n > eps_rank {
            let w = w / n;
            all.push(w.clone());
            out.push(w);
        }
    }
    out
}

/// Standard basis vector e_i in R^dim.
pub fn unit_vector(dim: usize, i: usize) -> DVector<f64> {
    let mut v = DVector::zeros(dim);
    v[i] = 1.0;
    v
}

/// Lexicographic comparison of coordinate vectors with an entry tolerance.
/// Entries within `eps` are treated as equal.
pub fn lex_cmp(a: &DVector<f64>, b: &DVector<f64>, eps: f64) -> Ordering {
    debug_assert_eq!(a.len(), b.len());
    for i in 0..a.len() {
        let d = a[i] - b[i];
        if d < -eps {
            return Ordering::Less;
        }
        if d > eps {
            return Ordering::Greater;
        }
    }
    Ordering::Equal
}

/// Sort points lexicographically (tolerance only breaks exact noise, so this
/// stays a total order in practice).
pub fn sort_points_lex(points: &mut [DVector<f64>], eps: f64) {
    points.sort_by(|a, b| lex_cmp(a, b, eps));
}

/// Remove points that coincide (within `eps`, Euclidean) with an earlier one.
pub fn dedupe_points(points: Vec<DVector<f64>>, eps: f64) -> Vec<DVector<f64>> {
    let mut out: Vec<DVector<f64>> = Vec::new();
    for p in points {
        if !out.iter().any(|q| (&p - q).norm() <= eps) {
            out.push(p);
        }
    }
    out
}

/// Dimension of the affine hull of `points` (-1 for the empty set, 0 for a
/// single point, and so on).
pub fn affine_rank(points: &[DVector<f64>], eps_rank: f64) -> isize {
    if points.is_empty() {
        return -1;
    }
    let diffs: Vec<DVector<f64>> = points[1..].iter().map(|p| p - &points[0]).collect();
    gram_schmidt(&diffs, eps_rank).len() as isize
}

/// Solve the square system `a x = b` and report the smallest singular value,
/// so callers can reject ill-conditioned subsets. Returns None when `a` is
/// singular at the given tolerance.
pub fn solve_square(a: &DMatrix<f64>, b: &DVector<f64>, eps_rank: f64) -> Option<DVector<f64>> {
    let svd = a.clone().svd(true, true);
    let min_sv = svd.singular_values.iter().cloned().fold(f64::INFINITY, f64::min);
    if !min_sv.is_finite() || min_sv <= eps_rank {
        return None;
    }
    svd.solve(b, eps_rank).ok()
}

/// Least-squares solution of `a x = b` (possibly non-square), with the
/// residual norm. Used for KKT multiplier recovery.
pub fn lstsq(a: &DMatrix<f64>, b: &DVector<f64>, eps_rank: f64) -> (DVector<f64>, f64) {
    let svd = a.clone().svd(true, true);
    let x = svd.solve(b, eps_rank).unwrap_or_else(|_| DVector::zeros(a.ncols()));
    let residual = (a * &x - b).norm();
    (x, residual)
}
