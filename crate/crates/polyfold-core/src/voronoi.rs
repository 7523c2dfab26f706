//! Voronoi cells restricted to a facet, visibility of ridges, and the
//! radius/contact data of wavefront events.
//!
//! Members live in the facet's chart (source images, possibly outside the
//! facet polytope). A member's restricted cell is the facet intersected with
//! its bisector halfspaces. Visibility of a ridge is decided by one linear
//! program: the cell must reach the ridge's relative interior, where
//! "relative interior" means positive slack on the facet's non-ridge rows.
//! Bisectors stay hard in that program: a cell degenerating to a point on
//! the ridge still counts, a cell meeting the ridge only in its relative
//! boundary does not.

use crate::config::Tolerances;
use crate::hpoly::{max_min_slack, Halfspace, HPolytope};
use crate::linalg;
use crate::{Error, Result};
use nalgebra::DVector;

/// Which way a visibility question points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Visibility {
    /// member on the same side of the ridge as the facet, looking at the ridge
    RidgeThroughFacet,
    /// member on the opposite side, looking into the facet through the ridge
    FacetThroughRidge,
}

/// Halfspace of points at least as close to `omega` as to `other`.
pub fn bisector(omega: &DVector<f64>, other: &DVector<f64>, eps_rank: f64) -> Option<Halfspace> {
    let a = other - omega;
    let b = (other.norm_squared() - omega.norm_squared()) / 2.0;
    Halfspace::unit(a, b, eps_rank)
}

/// Index of `omega` in the member list.
pub fn member_index(
    members: &[DVector<f64>],
    omega: &DVector<f64>,
    eps_pt: f64,
) -> Result<usize> {
    members
        .iter()
        .position(|m| (m - omega).norm() <= eps_pt)
        .ok_or(Error::NotAMember)
}

/// The restricted Voronoi cell of `omega` within `poly`: facet rows plus one
/// bisector per other member.
pub fn voronoi_cell(
    poly: &HPolytope,
    members: &[DVector<f64>],
    omega: &DVector<f64>,
    tol: &Tolerances,
) -> Result<HPolytope> {
    let idx = member_index(members, omega, tol.eps_pt)?;
    let mut cell = poly.clone();
    for (k, m) in members.iter().enumerate() {
        if k == idx {
            continue;
        }
        if let Some(h) = bisector(&members[idx], m, tol.eps_rank) {
            cell.ineqs.push(h);
        }
    }
    Ok(cell)
}

/// Visibility of the ridge supported by `ridge_row` for member `omega`.
///
/// Side precondition first (strict, by eps_slack): the member must lie on
/// the facet side of the ridge hyperplane for RidgeThroughFacet, on the far
/// side for FacetThroughRidge. Then the cell must meet the ridge's relative
/// interior: maximize the joint slack of the non-ridge facet rows on the
/// ridge hyperplane, with bisectors hard.
pub fn can_see(
    poly: &HPolytope,
    ridge_row: usize,
    members: &[DVector<f64>],
    omega: &DVector<f64>,
    mode: Visibility,
    tol: &Tolerances,
) -> Result<bool> {
    let idx = member_index(members, omega, tol.eps_pt)?;
    let ridge = &poly.ineqs[ridge_row];
    let side = ridge.slack(&members[idx]);
    match mode {
        Visibility::RidgeThroughFacet => {
            if side <= tol.eps_slack {
                return Ok(false);
            }
        }
        Visibility::FacetThroughRidge => {
            if side >= -tol.eps_slack {
                return Ok(false);
            }
        }
    }
    let slack: Vec<Halfspace> = poly
        .ineqs
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != ridge_row)
        .map(|(_, h)| h.clone())
        .collect();
    let mut hard: Vec<Halfspace> = Vec::new();
    for (k, m) in members.iter().enumerate() {
        if k == idx {
            continue;
        }
        if let Some(h) = bisector(&members[idx], m, tol.eps_rank) {
            hard.push(h);
        }
    }
    let eqs = vec![(ridge.normal.clone(), ridge.offset)];
    match max_min_slack(&slack, &hard, &eqs, poly.dim, tol) {
        Some((_, t)) => Ok(t > tol.eps_slack),
        None => Ok(false),
    }
}

/// Radius and contact point of a member against a ridge: the distance from
/// `omega` to the nearest point of ridge ∩ cell(omega), and that point.
pub fn ridge_radius(
    poly: &HPolytope,
    ridge_row: usize,
    members: &[DVector<f64>],
    omega: &DVector<f64>,
    tol: &Tolerances,
) -> Result<(f64, DVector<f64>)> {
    let mut set = voronoi_cell(poly, members, omega, tol)?;
    let ridge = &poly.ineqs[ridge_row];
    set.eqs.push((ridge.normal.clone(), ridge.offset));
    match set.project(omega, tol) {
        Some(rho) => Ok(((omega - &rho).norm(), rho)),
        None => Err(Error::EmptyIntersection),
    }
}

/// The (d-1)-dimensional cut-locus pieces inside one facet: for every member
/// pair, the part of their bisector hyperplane where both are closest.
/// Returns chart vertex lists of the pieces of full ridge dimension.
pub fn cut_locus_pieces(
    poly: &HPolytope,
    members: &[DVector<f64>],
    tol: &Tolerances,
) -> Vec<Vec<DVector<f64>>> {
    let d = poly.dim;
    let mut pieces: Vec<Vec<DVector<f64>>> = Vec::new();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            let mid = match bisector(&members[i], &members[j], tol.eps_rank) {
                Some(h) => h,
                None => continue,
            };
            let mut set = poly.clone();
            set.eqs.push((mid.normal.clone(), mid.offset));
            for k in 0..members.len() {
                if k == i || k == j {
                    continue;
                }
                if let Some(h) = bisector(&members[i], &members[k], tol.eps_rank) {
                    set.ineqs.push(h);
                }
                if let Some(h) = bisector(&members[j], &members[k], tol.eps_rank) {
                    set.ineqs.push(h);
                }
            }
            let verts = set.vertices(tol);
            if verts.is_empty() {
                continue;
            }
            if linalg::affine_rank(&verts, tol.eps_rank) != d as isize - 1 {
                continue;
            }
            let dup = pieces.iter().any(|p| {
                p.len() == verts.len()
                    && p.iter().all(|q| verts.iter().any(|v| (q - v).norm() <= tol.eps_pt))
            });
            if !dup {
                pieces.push(verts);
            }
        }
    }
    pieces
}
