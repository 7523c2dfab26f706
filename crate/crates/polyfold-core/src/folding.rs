//! Folding maps between facet charts.
//!
//! Crossing a ridge R from facet F to facet F' is an affine isometry between
//! the two charts: it fixes R pointwise (as identified by the matched vertex
//! lists) and sends the inward normal of F at R to the outward normal of F'
//! at R, so F lands on the far side of R from F'. Composing these along a
//! facet sequence folds the first chart onto the last; the inverse
//! composition unfolds the last facet's content back into the first chart.

use crate::complex::{FacetComplex, FacetId, RidgeId};
use crate::config::Tolerances;
use crate::linalg;
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// `x -> linear x + translation` with orthogonal linear part.
#[derive(Debug, Clone)]
pub struct AffineIsometry {
    pub linear: DMatrix<f64>,
    pub translation: DVector<f64>,
}

impl AffineIsometry {
    pub fn identity(dim: usize) -> AffineIsometry {
        AffineIsometry {
            linear: DMatrix::identity(dim, dim),
            translation: DVector::zeros(dim),
        }
    }

    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.linear * x + &self.translation
    }

    /// Push a direction (no translation).
    pub fn apply_dir(&self, u: &DVector<f64>) -> DVector<f64> {
        &self.linear * u
    }

    /// self after other: x -> self(other(x)).
    pub fn compose(&self, other: &AffineIsometry) -> AffineIsometry {
        let mut out = AffineIsometry {
            linear: &self.linear * &other.linear,
            translation: &self.linear * &other.translation + &self.translation,
        };
        out.renormalize_if_drifted();
        out
    }

    pub fn inverse(&self) -> AffineIsometry {
        let lt = self.linear.transpose();
        let translation = -(&lt * &self.translation);
        AffineIsometry { linear: lt, translation }
    }

    fn orthogonality_drift(&self) -> f64 {
        let gram = self.linear.transpose() * &self.linear;
        let n = gram.nrows();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram[(i, j)] - want).abs());
            }
        }
        worst
    }

    /// Long compositions accumulate rounding in the linear part; re-run
    /// Gram-Schmidt on the columns once drift exceeds 1e-12.
    fn renormalize_if_drifted(&mut self) {
        if self.orthogonality_drift() <= 1e-12 {
            return;
        }
        let dim = self.linear.nrows();
        let cols: Vec<DVector<f64>> =
            (0..dim).map(|j| self.linear.column(j).into_owned()).collect();
        let ortho = linalg::gram_schmidt(&cols, 1e-14);
        if ortho.len() == dim {
            for (j, c) in ortho.iter().enumerate() {
                self.linear.set_column(j, c);
            }
        }
    }
}

/// The fold map across ridge `r` out of facet `from`, as a chart-to-chart
/// isometry into the opposite facet's chart.
pub fn fold_map(
    complex: &FacetComplex,
    r: RidgeId,
    from: FacetId,
    tol: &Tolerances,
) -> Result<AffineIsometry> {
    let side = complex.side_of(r, from)?;
    let ridge = complex.ridge(r);
    let to = ridge.facets[1 - side];
    let a = &ridge.verts[side];
    let b = &ridge.verts[1 - side];
    let d = complex.surface_dim;

    let diffs_a: Vec<DVector<f64>> = a[1..].iter().map(|p| p - &a[0]).collect();
    let diffs_b: Vec<DVector<f64>> = b[1..].iter().map(|p| p - &b[0]).collect();
    let ua = linalg::gram_schmidt(&diffs_a, tol.eps_rank);
    let wb = linalg::gram_schmidt(&diffs_b, tol.eps_rank);
    if ua.len() != d - 1 || wb.len() != d - 1 {
        return Err(Error::NumericFailure(format!(
            "ridge {r} frame is not ({})-dimensional",
            d - 1
        )));
    }
    // matched vertex lists are congruent, so equal-index frames correspond
    let n_from = -&complex.facet(from).poly.ineqs[ridge.rows[side]].normal;
    let n_to = complex.facet(to).poly.ineqs[ridge.rows[1 - side]].normal.clone();
    let mut m = DMatrix::zeros(d, d);
    for k in 0..d - 1 {
        m += &wb[k] * ua[k].transpose();
    }
    m += &n_to * n_from.transpose();
    let translation = &b[0] - &m * &a[0];
    let mut out = AffineIsometry { linear: m, translation };
    out.renormalize_if_drifted();
    Ok(out)
}

/// All fold maps, both directions, precomputed per ridge.
#[derive(Debug, Clone)]
pub struct FoldAtlas {
    /// maps[r][s]: from side s of ridge r into side 1-s
    maps: Vec<[AffineIsometry; 2]>,
}

impl FoldAtlas {
    pub fn build(complex: &FacetComplex, tol: &Tolerances) -> Result<FoldAtlas> {
        let mut maps = Vec::with_capacity(complex.ridges.len());
        for ridge in &complex.ridges {
            let fwd = fold_map(complex, ridge.id, ridge.facets[0], tol)?;
            let bwd = fwd.inverse();
            maps.push([fwd, bwd]);
        }
        Ok(FoldAtlas { maps })
    }

    /// Map out of facet `from` across ridge `r`, with the destination facet.
    pub fn across(
        &self,
        complex: &FacetComplex,
        r: RidgeId,
        from: FacetId,
    ) -> Result<(&AffineIsometry, FacetId)> {
        let side = complex.side_of(r, from)?;
        Ok((&self.maps[r.0][side], complex.ridge(r).facets[1 - side]))
    }
}

/// The unique ridge shared by facets `a` and `b`. Abstract complexes may glue
/// the same facet pair along several ridges; a bare facet sequence cannot
/// express which one is meant, so that case is rejected.
pub fn connecting_ridge(complex: &FacetComplex, a: FacetId, b: FacetId) -> Result<RidgeId> {
    let mut shared: Vec<RidgeId> = Vec::new();
    for &r in &complex.ridges_of(a) {
        if complex.across(r, a)? == b {
            shared.push(r);
        }
    }
    match shared.len() {
        0 => Err(Error::NotAdjacent(a.0, b.0)),
        1 => Ok(shared[0]),
        _ => Err(Error::InvalidSequence(format!(
            "facets {} and {} share {} ridges; the crossing is ambiguous",
            complex.facet(a).label,
            complex.facet(b).label,
            shared.len()
        ))),
    }
}

/// Check a facet sequence: nonempty, repetition-free, consecutive facets
/// adjacent. Returns the connecting ridges.
pub fn validate_sequence(complex: &FacetComplex, seq: &[FacetId]) -> Result<Vec<RidgeId>> {
    if seq.is_empty() {
        return Err(Error::InvalidSequence("empty facet sequence".into()));
    }
    for (i, f) in seq.iter().enumerate() {
        if f.0 >= complex.facets.len() {
            return Err(Error::InvalidSequence(format!("no facet with index {}", f.0)));
        }
        if seq[..i].contains(f) {
            return Err(Error::InvalidSequence(format!(
                "facet {} repeats",
                complex.facet(*f).label
            )));
        }
    }
    seq.windows(2)
        .map(|w| connecting_ridge(complex, w[0], w[1]))
        .collect()
}

/// Fold the first chart onto the last along the sequence.
pub fn fold_along(
    complex: &FacetComplex,
    atlas: &FoldAtlas,
    seq: &[FacetId],
) -> Result<AffineIsometry> {
    let ridges = validate_sequence(complex, seq)?;
    let mut iso = AffineIsometry::identity(complex.surface_dim);
    for (i, r) in ridges.iter().enumerate() {
        let (step, _) = atlas.across(complex, *r, seq[i])?;
        iso = step.compose(&iso);
    }
    Ok(iso)
}

/// Unfold the last facet's chart back into the first: inverse of fold_along.
pub fn unfold_along(
    complex: &FacetComplex,
    atlas: &FoldAtlas,
    seq: &[FacetId],
) -> Result<AffineIsometry> {
    Ok(fold_along(complex, atlas, seq)?.inverse())
}
