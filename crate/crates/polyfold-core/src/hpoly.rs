//! H-representation polytopes and the small deterministic LP/QP kernel.
//!
//! Everything is solved combinatorially: vertices come from enumerating row
//! subsets, linear programs take the best vertex, projections search KKT
//! active sets by increasing size. Dimensions stay tiny (ambient <= 5), so
//! exhaustive enumeration is both fast enough and free of solver state,
//! which keeps runs reproducible.

use crate::config::Tolerances;
use crate::linalg;
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Closed halfspace `normal . x <= offset` with a unit normal.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    pub normal: DVector<f64>,
    pub offset: f64,
}

impl Halfspace {
    /// Normalize `a . x <= b` to unit normal. None when `a` is (numerically)
    /// zero; callers decide whether such a row is vacuous or infeasible.
    pub fn unit(a: DVector<f64>, b: f64, eps_rank: f64) -> Option<Halfspace> {
        let n = a.norm();
        if n <= eps_rank {
            return None;
        }
        Some(Halfspace { normal: a / n, offset: b / n })
    }

    /// Signed slack `offset - normal . x`; nonnegative inside.
    pub fn slack(&self, x: &DVector<f64>) -> f64 {
        self.offset - self.normal.dot(x)
    }

    /// Whether two rows cut the same hyperplane with the same orientation.
    pub fn coincides(&self, other: &Halfspace, eps: f64) -> bool {
        (&self.normal - &other.normal).norm() <= eps && (self.offset - other.offset).abs() <= eps
    }
}

/// Polyhedron `{ x : ineqs, eqs }` in R^dim. Equalities are kept separate so
/// lower-dimensional sets (cells restricted to a facet, ridges) stay exact.
#[derive(Debug, Clone)]
pub struct HPolytope {
    pub dim: usize,
    pub ineqs: Vec<Halfspace>,
    pub eqs: Vec<(DVector<f64>, f64)>,
}

impl HPolytope {
    pub fn new(dim: usize) -> HPolytope {
        HPolytope { dim, ineqs: Vec::new(), eqs: Vec::new() }
    }

    pub fn with_ineqs(dim: usize, ineqs: Vec<Halfspace>) -> HPolytope {
        HPolytope { dim, ineqs, eqs: Vec::new() }
    }

    /// Intersection: stack constraints (dims must agree).
    pub fn intersect(&self, other: &HPolytope) -> HPolytope {
        debug_assert_eq!(self.dim, other.dim);
        let mut p = self.clone();
        p.ineqs.extend(other.ineqs.iter().cloned());
        p.eqs.extend(other.eqs.iter().cloned());
        p
    }

    pub fn contains(&self, x: &DVector<f64>, eps: f64) -> bool {
        self.ineqs.iter().all(|h| h.slack(x) >= -eps)
            && self.eqs.iter().all(|(a, b)| (a.dot(x) - b).abs() <= eps * (1.0 + a.norm()))
    }

    /// Minimum inequality slack at `x` (infinity when there are no rows).
    pub fn min_slack(&self, x: &DVector<f64>) -> f64 {
        self.ineqs.iter().map(|h| h.slack(x)).fold(f64::INFINITY, f64::min)
    }

    /// Eliminate the equalities: returns a particular solution `x0`, an
    /// orthonormal basis `B` of their nullspace, and the inequalities
    /// rewritten over the reduced coordinates (unit normals again). None when
    /// the equalities are inconsistent or some inequality is infeasible on
    /// the affine subspace.
    fn reduce(&self, tol: &Tolerances) -> Option<Reduced> {
        let eq_rows: Vec<DVector<f64>> = self.eqs.iter().map(|(a, _)| a.clone()).collect();
        let x0 = if self.eqs.is_empty() {
            DVector::zeros(self.dim)
        } else {
            let m = DMatrix::from_fn(self.eqs.len(), self.dim, |i, j| self.eqs[i].0[j]);
            let rhs = DVector::from_fn(self.eqs.len(), |i, _| self.eqs[i].1);
            let (x0, res) = linalg::lstsq(&m, &rhs, tol.eps_rank);
            if res > tol.eps_pt * (1.0 + rhs.norm()) {
                return None;
            }
            x0
        };
        let basis = linalg::nullspace(&eq_rows, self.dim, tol.eps_rank);
        let mut rows: Vec<Halfspace> = Vec::new();
        for h in &self.ineqs {
            let b = h.offset - h.normal.dot(&x0);
            let a = DVector::from_fn(basis.len(), |k, _| basis[k].dot(&h.normal));
            match Halfspace::unit(a, b, tol.eps_rank) {
                Some(r) => rows.push(r),
                // row constant on the subspace: vacuous or infeasible
                None => {
                    if b < -tol.eps_pt {
                        return None;
                    }
                }
            }
        }
        Some(Reduced { x0, basis, rows })
    }

    /// All vertices, via enumeration of row subsets after equality
    /// elimination. Exact for bounded sets; unbounded sets simply yield the
    /// vertices of their bounded part, so callers needing boundedness must
    /// check it separately. Output is deduplicated and lexicographically
    /// sorted.
    pub fn vertices(&self, tol: &Tolerances) -> Vec<DVector<f64>> {
        let red = match self.reduce(tol) {
            Some(r) => r,
            None => return Vec::new(),
        };
        let k = red.basis.len();
        if k == 0 {
            let x = red.x0.clone();
            if self.contains(&x, tol.eps_pt) {
                return vec![x];
            }
            return Vec::new();
        }
        if red.rows.len() < k {
            return Vec::new();
        }
        let mut out: Vec<DVector<f64>> = Vec::new();
        for_each_subset(red.rows.len(), k, |idx| {
            let a = DMatrix::from_fn(k, k, |i, j| red.rows[idx[i]].normal[j]);
            let b = DVector::from_fn(k, |i, _| red.rows[idx[i]].offset);
            if let Some(y) = linalg::solve_square(&a, &b, tol.eps_rank) {
                if red.rows.iter().all(|r| r.slack(&y) >= -tol.eps_pt) {
                    out.push(red.lift(&y));
                }
            }
        });
        let mut out = linalg::dedupe_points(out, tol.eps_pt);
        linalg::sort_points_lex(&mut out, 0.0);
        out
    }

    /// Maximum of `c . x` over the polytope. Only meaningful on bounded
    /// feasible sets (all call sites guarantee that). None when empty.
    pub fn lp_max(&self, c: &DVector<f64>, tol: &Tolerances) -> Option<(DVector<f64>, f64)> {
        let mut best: Option<(DVector<f64>, f64)> = None;
        for v in self.vertices(tol) {
            let val = c.dot(&v);
            let better = match &best {
                None => true,
                Some((bv, bval)) => {
                    val > bval + tol.eps_pt
                        || ((val - bval).abs() <= tol.eps_pt
                            && linalg::lex_cmp(&v, bv, 0.0) == std::cmp::Ordering::Less)
                }
            };
            if better {
                best = Some((v, val));
            }
        }
        best
    }

    /// Euclidean projection of `p` onto the polyhedron, by searching KKT
    /// active sets in increasing size. None when the set is empty.
    pub fn project(&self, p: &DVector<f64>, tol: &Tolerances) -> Option<DVector<f64>> {
        let n = self.ineqs.len();
        let max_active = self.dim.min(n);
        for size in 0..=max_active {
            let mut found: Option<DVector<f64>> = None;
            for_each_subset(n, size, |idx| {
                if found.is_some() {
                    return;
                }
                if let Some(x) = self.try_active_set(p, idx, tol) {
                    found = Some(x);
                }
            });
            if let Some(x) = found {
                return Some(x);
            }
        }
        None
    }

    /// Candidate projection with the given inequality rows active. Valid when
    /// the point is feasible and the multipliers on active inequalities are
    /// nonnegative (within eps_kkt).
    fn try_active_set(&self, p: &DVector<f64>, idx: &[usize], tol: &Tolerances) -> Option<DVector<f64>> {
        let rows: Vec<DVector<f64>> = idx
            .iter()
            .map(|&i| self.ineqs[i].normal.clone())
            .chain(self.eqs.iter().map(|(a, _)| a.clone()))
            .collect();
        let rhs: Vec<f64> = idx
            .iter()
            .map(|&i| self.ineqs[i].offset)
            .chain(self.eqs.iter().map(|(_, b)| *b))
            .collect();
        let x = if rows.is_empty() {
            p.clone()
        } else {
            // projection onto the affine subspace N x = o: x = p - N^+ (N p - o)
            let nmat = DMatrix::from_fn(rows.len(), self.dim, |i, j| rows[i][j]);
            let o = DVector::from_vec(rhs);
            let resid = &nmat * p - &o;
            let svd = nmat.clone().svd(true, true);
            let corr = svd.solve(&resid, tol.eps_rank).ok()?;
            // inconsistent active set
            if (&nmat * &corr - &resid).norm() > tol.eps_kkt * (1.0 + o.norm()) {
                return None;
            }
            p - corr
        };
        if !self.contains(&x, tol.eps_kkt) {
            return None;
        }
        // KKT: p - x lies in the cone of active normals with lambda >= 0
        let g = p - &x;
        if g.norm() <= tol.eps_kkt {
            return Some(x);
        }
        if rows.is_empty() {
            return None;
        }
        let nt = DMatrix::from_fn(self.dim, rows.len(), |i, j| rows[j][i]);
        let (lambda, res) = linalg::lstsq(&nt, &g, tol.eps_rank);
        if res > tol.eps_kkt * (1.0 + g.norm()) {
            return None;
        }
        for (k, _) in idx.iter().enumerate() {
            if lambda[k] < -tol.eps_kkt {
                return None;
            }
        }
        Some(x)
    }

    /// Chebyshev center restricted to the equality subspace: maximize the
    /// minimum inequality slack. None when empty.
    pub fn chebyshev(&self, tol: &Tolerances) -> Option<(DVector<f64>, f64)> {
        let slack: Vec<Halfspace> = self.ineqs.clone();
        match max_min_slack(&slack, &[], &self.eqs, self.dim, tol) {
            Some((x, t)) if t >= -tol.eps_pt => Some((x, t.max(0.0))),
            _ => None,
        }
    }

    /// Drop rows that coincide with an earlier row, then rows the remaining
    /// system never reaches: row i goes when the set eps beyond it (with the
    /// other surviving rows) is empty. Rows are tested against the running
    /// survivor set, so of two nearly parallel rows exactly the binding one
    /// stays. Returns the reduced polytope and the kept original row indices.
    /// Assumes the feasible set contains no line, which makes an empty vertex
    /// enumeration a sound emptiness certificate.
    pub fn remove_redundant(&self, tol: &Tolerances) -> (HPolytope, Vec<usize>) {
        let mut kept: Vec<usize> = Vec::new();
        for (i, h) in self.ineqs.iter().enumerate() {
            if !kept.iter().any(|&j| self.ineqs[j].coincides(h, tol.eps_pt)) {
                kept.push(i);
            }
        }
        let delta = tol.eps_pt * 100.0;
        let mut i = 0;
        while i < kept.len() {
            let row = &self.ineqs[kept[i]];
            let mut probe = HPolytope {
                dim: self.dim,
                ineqs: kept
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != i)
                    .map(|(_, &j)| self.ineqs[j].clone())
                    .collect(),
                eqs: self.eqs.clone(),
            };
            probe.ineqs.push(Halfspace {
                normal: -&row.normal,
                offset: -(row.offset + delta),
            });
            // with fewer rows than the dimension the probe cannot be a
            // certified empty set, so the row stays
            if probe.ineqs.len() >= self.dim && probe.vertices(tol).is_empty() {
                kept.remove(i);
            } else {
                i += 1;
            }
        }
        let poly = HPolytope {
            dim: self.dim,
            ineqs: kept.iter().map(|&i| self.ineqs[i].clone()).collect(),
            eqs: self.eqs.clone(),
        };
        (poly, kept)
    }

    /// Lebesgue measure of the equality-subspace dimension, by recursive
    /// pyramid decomposition over irredundant rows. Assumes boundedness.
    pub fn volume(&self, tol: &Tolerances) -> Result<f64> {
        let red = match self.reduce(tol) {
            Some(r) => r,
            None => return Ok(0.0),
        };
        let reduced = HPolytope::with_ineqs(red.basis.len(), red.rows.clone());
        reduced.volume_full(tol)
    }

    /// Volume in the polytope's own dimension, no equalities.
    fn volume_full(&self, tol: &Tolerances) -> Result<f64> {
        debug_assert!(self.eqs.is_empty());
        let verts = self.vertices(tol);
        if linalg::affine_rank(&verts, tol.eps_rank) < self.dim as isize {
            return Ok(0.0);
        }
        if self.dim == 0 {
            return Ok(1.0);
        }
        if self.dim == 1 {
            let lo = verts.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min);
            let hi = verts.iter().map(|v| v[0]).fold(f64::NEG_INFINITY, f64::max);
            return Ok((hi - lo).max(0.0));
        }
        let centroid = verts.iter().fold(DVector::zeros(self.dim), |acc, v| acc + v) / verts.len() as f64;
        let (irred, _) = self.remove_redundant(tol);
        let mut total = 0.0;
        for h in &irred.ineqs {
            let height = h.slack(&centroid);
            if height <= tol.eps_pt {
                continue;
            }
            // chart the facet hyperplane by an orthonormal basis of normal^perp
            let basis = linalg::nullspace(&[h.normal.clone()], self.dim, tol.eps_rank);
            let anchor = &h.normal * h.offset;
            let mut face_rows: Vec<Halfspace> = Vec::new();
            let mut degenerate_empty = false;
            for g in &irred.ineqs {
                let b = g.offset - g.normal.dot(&anchor);
                let a = DVector::from_fn(basis.len(), |k, _| basis[k].dot(&g.normal));
                match Halfspace::unit(a, b, tol.eps_rank) {
                    Some(r) => face_rows.push(r),
                    None => {
                        if b < -tol.eps_pt {
                            degenerate_empty = true;
                        }
                    }
                }
            }
            if degenerate_empty {
                continue;
            }
            let face = HPolytope::with_ineqs(self.dim - 1, face_rows);
            total += height * face.volume_full(tol)? / self.dim as f64;
        }
        if !total.is_finite() {
            return Err(Error::NumericFailure("volume recursion diverged".into()));
        }
        Ok(total)
    }
}

struct Reduced {
    x0: DVector<f64>,
    basis: Vec<DVector<f64>>,
    rows: Vec<Halfspace>,
}

impl Reduced {
    fn lift(&self, y: &DVector<f64>) -> DVector<f64> {
        let mut x = self.x0.clone();
        for (k, b) in self.basis.iter().enumerate() {
            x.axpy(y[k], b, 1.0);
        }
        x
    }
}

/// Maximize t subject to `a.x + t <= b` for slack rows, `a.x <= b` for hard
/// rows, and the equalities. Row normals are unit, so t is a true Euclidean
/// margin. Solved by vertex enumeration over (x, t) with an artificial floor
/// `t >= t_lo`; every call site's rows bound x once t is fixed, so the lifted
/// polytope is bounded and enumeration is exact. Values at the floor only
/// ever get compared against small thresholds. None when infeasible.
pub fn max_min_slack(
    slack: &[Halfspace],
    hard: &[Halfspace],
    eqs: &[(DVector<f64>, f64)],
    dim: usize,
    tol: &Tolerances,
) -> Option<(DVector<f64>, f64)> {
    let bmax = slack
        .iter()
        .chain(hard.iter())
        .map(|h| h.offset.abs())
        .fold(0.0_f64, f64::max);
    let t_lo = -10.0 * (1.0 + bmax);
    let mut lifted = HPolytope::new(dim + 1);
    let lift_row = |h: &Halfspace, t_coeff: f64| -> Halfspace {
        let mut a = DVector::zeros(dim + 1);
        for i in 0..dim {
            a[i] = h.normal[i];
        }
        a[dim] = t_coeff;
        Halfspace { normal: a.clone(), offset: h.offset }
    };
    for h in slack {
        lifted.ineqs.push(lift_row(h, 1.0));
    }
    for h in hard {
        lifted.ineqs.push(lift_row(h, 0.0));
    }
    {
        let mut a = DVector::zeros(dim + 1);
        a[dim] = -1.0;
        lifted.ineqs.push(Halfspace { normal: a, offset: -t_lo });
    }
    for (a, b) in eqs {
        let mut ea = DVector::zeros(dim + 1);
        for i in 0..dim {
            ea[i] = a[i];
        }
        lifted.eqs.push((ea, *b));
    }
    let mut c = DVector::zeros(dim + 1);
    c[dim] = 1.0;
    // lifted rows are not unit after adding the t column; vertices() only
    // needs consistent normalization, which reduce() restores internally
    let (x, t) = lifted.lp_max(&c, tol).map(|(v, t)| (v.rows(0, dim).into_owned(), t))?;
    Some((x, t))
}

/// A point of maximal minimum slack over the slack rows of `p` intersected
/// with `region`, after demoting rows that cannot attain positive slack.
/// Demoted rows stay as hard constraints, so touching the region only in a
/// face still counts as nonempty. None when the intersection is empty.
pub fn strict_interior_point(
    p: &HPolytope,
    region: &HPolytope,
    tol: &Tolerances,
) -> Option<DVector<f64>> {
    let all = p.intersect(region);
    if all.ineqs.is_empty() {
        return all.project(&DVector::zeros(all.dim), tol);
    }
    let feas = max_min_slack(&all.ineqs, &[], &all.eqs, all.dim, tol)?;
    if feas.1 < -tol.eps_pt {
        return None;
    }
    let mut slack_rows: Vec<Halfspace> = Vec::new();
    let mut hard_rows: Vec<Halfspace> = Vec::new();
    for h in &all.ineqs {
        // sigma = max slack of this row over the full set
        let c = -h.normal.clone();
        let sigma = match all.lp_max(&c, tol) {
            Some((_, val)) => h.offset + val,
            None => return None,
        };
        if sigma > tol.eps_int {
            slack_rows.push(h.clone());
        } else {
            hard_rows.push(h.clone());
        }
    }
    if slack_rows.is_empty() {
        return Some(feas.0);
    }
    let (x, t) = max_min_slack(&slack_rows, &hard_rows, &all.eqs, all.dim, tol)?;
    if t >= -tol.eps_pt {
        Some(x)
    } else {
        None
    }
}

/// Visit every k-subset of {0..n} in lexicographic order.
pub fn for_each_subset<F: FnMut(&[usize])>(n: usize, k: usize, mut f: F) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        if k == 0 {
            return;
        }
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Convenience: axis-aligned box as an HPolytope.
pub fn boxpoly(lo: &[f64], hi: &[f64]) -> HPolytope {
    let dim = lo.len();
    let mut p = HPolytope::new(dim);
    for i in 0..dim {
        let mut a = DVector::zeros(dim);
        a[i] = -1.0;
        p.ineqs.push(Halfspace { normal: a, offset: -lo[i] });
        let mut a = DVector::zeros(dim);
        a[i] = 1.0;
        p.ineqs.push(Halfspace { normal: a, offset: hi[i] });
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn square_vertices() {
        let p = boxpoly(&[0.0, 0.0], &[1.0, 1.0]);
        let vs = p.vertices(&tol());
        assert_eq!(vs.len(), 4);
        assert!((&vs[0] - DVector::from_vec(vec![0.0, 0.0])).norm() < 1e-12);
        assert!((&vs[3] - DVector::from_vec(vec![1.0, 1.0])).norm() < 1e-12);
    }

    #[test]
    fn vertices_with_equality() {
        // unit cube sliced by z = 0.25
        let mut p = boxpoly(&[0.0; 3], &[1.0; 3]);
        p.eqs.push((DVector::from_vec(vec![0.0, 0.0, 1.0]), 0.25));
        let vs = p.vertices(&tol());
        assert_eq!(vs.len(), 4);
        for v in &vs {
            assert!((v[2] - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_when_equalities_conflict() {
        let mut p = boxpoly(&[0.0, 0.0], &[1.0, 1.0]);
        p.eqs.push((DVector::from_vec(vec![1.0, 0.0]), 0.5));
        p.eqs.push((DVector::from_vec(vec![1.0, 0.0]), 0.7));
        assert!(p.vertices(&tol()).is_empty());
    }

    #[test]
    fn lp_on_square() {
        let p = boxpoly(&[0.0, 0.0], &[2.0, 3.0]);
        let c = DVector::from_vec(vec![1.0, 1.0]);
        let (x, v) = p.lp_max(&c, &tol()).unwrap();
        assert!((v - 5.0).abs() < 1e-12);
        assert!((x - DVector::from_vec(vec![2.0, 3.0])).norm() < 1e-12);
    }

    #[test]
    fn projection_matches_clamping_on_box() {
        let p = boxpoly(&[-1.0, 0.0, 2.0], &[1.0, 4.0, 3.0]);
        let pts = [
            vec![5.0, -2.0, 2.5],
            vec![0.0, 1.0, 0.0],
            vec![-3.0, 7.0, 10.0],
            vec![0.5, 2.0, 2.5],
        ];
        for q in pts {
            let q = DVector::from_vec(q);
            let x = p.project(&q, &tol()).unwrap();
            let want = DVector::from_vec(vec![
                q[0].clamp(-1.0, 1.0),
                q[1].clamp(0.0, 4.0),
                q[2].clamp(2.0, 3.0),
            ]);
            assert!((x - want).norm() < 1e-8, "projection of {q:?}");
        }
    }

    #[test]
    fn projection_onto_segment_via_equalities() {
        // segment {y = 1} x in [0, 2]
        let mut p = boxpoly(&[0.0, -5.0], &[2.0, 5.0]);
        p.eqs.push((DVector::from_vec(vec![0.0, 1.0]), 1.0));
        let x = p.project(&DVector::from_vec(vec![3.0, 0.0]), &tol()).unwrap();
        assert!((x - DVector::from_vec(vec![2.0, 1.0])).norm() < 1e-8);
    }

    #[test]
    fn projection_none_on_empty() {
        let mut p = boxpoly(&[0.0], &[1.0]);
        p.ineqs.push(Halfspace { normal: DVector::from_vec(vec![1.0]), offset: -2.0 });
        assert!(p.project(&DVector::from_vec(vec![0.5]), &tol()).is_none());
    }

    #[test]
    fn chebyshev_of_rectangle() {
        let p = boxpoly(&[0.0, 0.0], &[4.0, 2.0]);
        let (c, r) = p.chebyshev(&tol()).unwrap();
        assert!((r - 1.0).abs() < 1e-9);
        assert!((c[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn interior_point_demotes_degenerate_rows() {
        // {0 <= x <= 1, y <= 0, -y <= 0}: a segment; the y rows can never
        // have positive slack and must become hard, not equalities
        let mut p = HPolytope::new(2);
        p.ineqs.push(Halfspace { normal: DVector::from_vec(vec![-1.0, 0.0]), offset: 0.0 });
        p.ineqs.push(Halfspace { normal: DVector::from_vec(vec![1.0, 0.0]), offset: 1.0 });
        p.ineqs.push(Halfspace { normal: DVector::from_vec(vec![0.0, 1.0]), offset: 0.0 });
        p.ineqs.push(Halfspace { normal: DVector::from_vec(vec![0.0, -1.0]), offset: 0.0 });
        let region = HPolytope::new(2);
        let x = strict_interior_point(&p, &region, &tol()).unwrap();
        assert!(x[1].abs() < 1e-9);
        assert!(x[0] > 0.25 && x[0] < 0.75);
    }

    #[test]
    fn interior_point_accepts_single_point() {
        // {x <= 0, -x <= 0} in R^1: the point 0, nonempty
        let mut p = HPolytope::new(1);
        p.ineqs.push(Halfspace { normal: DVector::from_vec(vec![1.0]), offset: 0.0 });
        p.ineqs.push(Halfspace { normal: DVector::from_vec(vec![-1.0]), offset: 0.0 });
        let x = strict_interior_point(&p, &HPolytope::new(1), &tol()).unwrap();
        assert!(x[0].abs() < 1e-9);
    }

    #[test]
    fn interior_point_none_on_empty() {
        let mut p = HPolytope::new(1);
        p.ineqs.push(Halfspace { normal: DVector::from_vec(vec![1.0]), offset: 0.0 });
        p.ineqs.push(Halfspace { normal: DVector::from_vec(vec![-1.0]), offset: -1.0 });
        assert!(strict_interior_point(&p, &HPolytope::new(1), &tol()).is_none());
    }

    #[test]
    fn redundant_rows_dropped() {
        let mut p = boxpoly(&[0.0, 0.0], &[1.0, 1.0]);
        p.ineqs.push(Halfspace { normal: DVector::from_vec(vec![1.0, 0.0]), offset: 2.0 });
        p.ineqs.push(Halfspace { normal: DVector::from_vec(vec![1.0, 0.0]), offset: 1.0 });
        let (q, kept) = p.remove_redundant(&tol());
        assert_eq!(q.ineqs.len(), 4);
        assert_eq!(kept, vec![0, 1, 2, 3]);
    }

    #[test]
    fn volume_of_boxes_and_simplex() {
        let t = tol();
        assert!((boxpoly(&[0.0, 0.0], &[1.0, 1.0]).volume(&t).unwrap() - 1.0).abs() < 1e-9);
        assert!((boxpoly(&[0.0; 3], &[1.0; 3]).volume(&t).unwrap() - 1.0).abs() < 1e-9);
        assert!((boxpoly(&[-1.0; 4], &[1.0; 4]).volume(&t).unwrap() - 16.0).abs() < 1e-8);
        // simplex x,y,z >= 0, x+y+z <= 1
        let mut s = boxpoly(&[0.0; 3], &[10.0; 3]);
        s.ineqs.push(Halfspace::unit(DVector::from_vec(vec![1.0, 1.0, 1.0]), 1.0, 1e-12).unwrap());
        assert!((s.volume(&t).unwrap() - 1.0 / 6.0).abs() < 1e-9);
    }

    #[test]
    fn volume_on_equality_slice() {
        // cube sliced by z = 0.5 has area 1 in its plane
        let mut p = boxpoly(&[0.0; 3], &[1.0; 3]);
        p.eqs.push((DVector::from_vec(vec![0.0, 0.0, 1.0]), 0.5));
        assert!((p.volume(&tol()).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn intersection_area() {
        let a = boxpoly(&[0.0, 0.0], &[2.0, 2.0]);
        let b = boxpoly(&[1.0, 1.0], &[3.0, 3.0]);
        assert!((a.intersect(&b).volume(&tol()).unwrap() - 1.0).abs() < 1e-9);
        let c = boxpoly(&[5.0, 5.0], &[6.0, 6.0]);
        assert!(a.intersect(&c).volume(&tol()).unwrap().abs() < 1e-12);
    }

    #[test]
    fn max_min_slack_square() {
        let p = boxpoly(&[0.0, 0.0], &[1.0, 1.0]);
        let (x, t) = max_min_slack(&p.ineqs, &[], &[], 2, &tol()).unwrap();
        assert!((t - 0.5).abs() < 1e-9);
        assert!((x - DVector::from_vec(vec![0.5, 0.5])).norm() < 1e-9);
    }

    #[test]
    fn max_min_slack_respects_hard_rows() {
        let p = boxpoly(&[0.0, 0.0], &[1.0, 1.0]);
        let hard = vec![Halfspace { normal: DVector::from_vec(vec![1.0, 0.0]), offset: 0.25 }];
        let slack = p.ineqs.clone();
        let (x, t) = max_min_slack(&slack, &hard, &[], 2, &tol()).unwrap();
        assert!(x[0] <= 0.25 + 1e-9);
        assert!((t - 0.25).abs() < 1e-9, "t = {t}");
    }

    #[test]
    fn max_min_slack_infeasible_goes_negative() {
        // x <= 0 and -x <= -1 cannot both hold; best t is negative
        let slack = vec![
            Halfspace { normal: DVector::from_vec(vec![1.0]), offset: 0.0 },
            Halfspace { normal: DVector::from_vec(vec![-1.0]), offset: -1.0 },
        ];
        let (_, t) = max_min_slack(&slack, &[], &[], 1, &tol()).unwrap();
        assert!(t < -0.4 && t > -0.6, "t = {t}");
    }

    #[test]
    fn subset_iteration_is_exhaustive() {
        let mut count = 0;
        for_each_subset(5, 3, |_| count += 1);
        assert_eq!(count, 10);
        let mut count = 0;
        for_each_subset(4, 0, |idx| {
            assert!(idx.is_empty());
            count += 1;
        });
        assert_eq!(count, 1);
    }

    proptest! {
        #[test]
        fn projection_is_idempotent_and_feasible(
            qx in -3.0..3.0f64, qy in -3.0..3.0f64, qz in -3.0..3.0f64
        ) {
            let p = boxpoly(&[-1.0, -0.5, 0.0], &[1.0, 0.5, 2.0]);
            let t = tol();
            let q = DVector::from_vec(vec![qx, qy, qz]);
            let x = p.project(&q, &t).unwrap();
            prop_assert!(p.contains(&x, 1e-7));
            let x2 = p.project(&x, &t).unwrap();
            prop_assert!((&x2 - &x).norm() < 1e-7);
            // no feasible point is strictly closer (sampled certificates)
            for v in p.vertices(&t) {
                prop_assert!((&q - &x).norm() <= (&q - &v).norm() + 1e-7);
            }
        }

        #[test]
        fn vertices_are_feasible(
            hx in 0.5..2.0f64, hy in 0.5..2.0f64, cut in -0.5..1.4f64
        ) {
            let mut p = boxpoly(&[0.0, 0.0], &[hx, hy]);
            p.ineqs.push(Halfspace::unit(
                DVector::from_vec(vec![1.0, 1.0]), cut + 1.0, 1e-12).unwrap());
            let t = tol();
            for v in p.vertices(&t) {
                prop_assert!(p.contains(&v, 1e-9));
            }
        }
    }
}
