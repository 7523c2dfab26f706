//! Jet frames and angle sequences.
//!
//! Ties between wavefront events at equal radius are broken by how the
//! outer support vector leans against the contact set, measured to all
//! orders: a frame of orthonormal directions built greedily from iterated
//! tangent cones, and its angle sequence against the support vector. The
//! curve J(eps) = (eps z1 + ... + eps^r zr)/sqrt(eps^2 + ... + eps^{2r})
//! realizes a frame as a path into the set; the minimal frame is the one
//! whose angle sequence is lexicographically least.

use crate::cone::Cone;
use crate::config::Tolerances;
use crate::hpoly::HPolytope;
use crate::{Error, Result};
use nalgebra::DVector;
use std::cmp::Ordering;

/// The iterated tangent cone of `v` at `x` along the partial frame `jets`:
/// directions u orthogonal to every jet so far, satisfying a_i . u <= 0 for
/// every row still active along the frame. A row is active along the frame
/// when it is active at x and every jet is tangent to it; a jet pointing
/// strictly out of a row that is still active means the frame is invalid.
pub fn iterated_tangent_cone(
    v: &HPolytope,
    x: &DVector<f64>,
    jets: &[DVector<f64>],
    tol: &Tolerances,
) -> Result<Cone> {
    let act = tol.eps_pt * 10.0;
    if !v.contains(x, act) {
        return Err(Error::NotAJetFrame("base point is outside the set".into()));
    }
    for (k, z) in jets.iter().enumerate() {
        if (z.norm() - 1.0).abs() > 1e-7 {
            return Err(Error::NotAJetFrame(format!("jet {k} is not a unit vector")));
        }
        for w in &jets[..k] {
            if z.dot(w).abs() > 1e-7 {
                return Err(Error::NotAJetFrame(format!(
                    "jet {k} is not orthogonal to earlier jets"
                )));
            }
        }
    }
    let mut cone = Cone::new(v.dim);
    for (a, _) in &v.eqs {
        cone.eqs.push(a.clone());
    }
    for z in jets {
        cone.eqs.push(z.clone());
    }
    'rows: for h in &v.ineqs {
        if h.slack(x) > act {
            continue;
        }
        for z in jets {
            let d = h.normal.dot(z);
            if d > tol.eps_ang {
                return Err(Error::NotAJetFrame(
                    "a jet points out of an active constraint".into(),
                ));
            }
            if d < -tol.eps_ang {
                // row becomes strictly slack along the frame
                continue 'rows;
            }
        }
        cone.ineqs.push(h.normal.clone());
    }
    Ok(cone)
}

/// Angle sequence of a frame against the support vector: entries -nu . z_k.
pub fn angle_sequence(nu: &DVector<f64>, frame: &[DVector<f64>]) -> Vec<f64> {
    frame.iter().map(|z| -nu.dot(z)).collect()
}

/// Lexicographic comparison with zero padding, so a frame that ends is
/// treated as continuing with right-angle entries.
pub fn compare_angle_sequences(a: &[f64], b: &[f64], eps_ang: f64) -> Ordering {
    let n = a.len().max(b.len());
    for k in 0..n {
        let x = a.get(k).copied().unwrap_or(0.0);
        let y = b.get(k).copied().unwrap_or(0.0);
        if (x - y).abs() <= eps_ang {
            continue;
        }
        return x.partial_cmp(&y).unwrap_or(Ordering::Equal);
    }
    Ordering::Equal
}

/// The jet curve point J(eps) for a frame.
pub fn jet_point(frame: &[DVector<f64>], eps: f64) -> DVector<f64> {
    let dim = frame[0].len();
    let mut num = DVector::zeros(dim);
    let mut den = 0.0;
    let mut p = 1.0;
    for z in frame {
        p *= eps;
        num.axpy(p, z, 1.0);
        den += p * p;
    }
    num / den.sqrt()
}

/// The jet frame at `x` with lexicographically minimal angle sequence
/// against the outer support vector `nu`.
///
/// Greedy with forking: at each step the next jet comes from the iterated
/// tangent cone. Since nu supports v at x, nu . u <= 0 on the whole cone; if
/// the cone meets nu's orthogonal complement nontrivially the best entry is
/// an exact zero and any such direction continues a minimal frame (one is
/// picked deterministically). Otherwise the maximizers of nu . u sit on
/// extreme rays; near-ties within eps_ang fork the search, capped at 64
/// candidate frames.
pub fn minimal_jet_frame(
    v: &HPolytope,
    x: &DVector<f64>,
    nu: &DVector<f64>,
    tol: &Tolerances,
) -> Result<Vec<DVector<f64>>> {
    if nu.norm() <= tol.eps_pt {
        // zero support vector: the empty frame, with empty angle sequence
        return Ok(Vec::new());
    }
    if let Some((_, best)) = v.lp_max(nu, tol) {
        let excess = best - nu.dot(x);
        if excess > tol.eps_kkt * (1.0 + nu.norm()) {
            return Err(Error::NotOuterSupport(excess));
        }
    } else {
        return Err(Error::EmptySet);
    }
    let nu_unit = nu.normalize();

    const CAP: usize = 64;
    let mut stack: Vec<Vec<DVector<f64>>> = vec![Vec::new()];
    let mut completed: Vec<(Vec<f64>, Vec<DVector<f64>>)> = Vec::new();
    while let Some(frame) = stack.pop() {
        let cone = iterated_tangent_cone(v, x, &frame, tol)?;
        if cone.is_trivial(tol) {
            completed.push((angle_sequence(nu, &frame), frame));
            continue;
        }
        // nu-orthogonal face of the cone
        let mut face = cone.clone();
        face.eqs.push(nu_unit.clone());
        let face_rays = face.extreme_rays(tol);
        let orth_pick = if !face_rays.is_empty() {
            Some(face_rays[0].clone())
        } else {
            face.lineality(tol).first().cloned()
        };
        if let Some(z) = orth_pick {
            let mut frame = frame;
            frame.push(z);
            stack.push(frame);
            continue;
        }
        let rays = cone.extreme_rays(tol);
        if rays.is_empty() {
            return Err(Error::NumericFailure(
                "nontrivial pointed cone without extreme rays".into(),
            ));
        }
        let best = rays.iter().map(|r| nu_unit.dot(r)).fold(f64::NEG_INFINITY, f64::max);
        let tied: Vec<&DVector<f64>> = rays
            .iter()
            .filter(|r| nu_unit.dot(r) >= best - tol.eps_ang)
            .collect();
        if completed.len() + stack.len() + tied.len() > CAP {
            return Err(Error::TooManyTies(completed.len() + stack.len() + tied.len()));
        }
        for r in tied {
            let mut next = frame.clone();
            next.push(r.clone());
            stack.push(next);
        }
    }
    let mut best: Option<(Vec<f64>, Vec<DVector<f64>>)> = None;
    for (seq, frame) in completed {
        let replace = match &best {
            None => true,
            Some((bseq, _)) => {
                compare_angle_sequences(&seq, bseq, tol.eps_ang) == Ordering::Less
            }
        };
        if replace {
            best = Some((seq, frame));
        }
    }
    Ok(best.expect("at least one frame completes").1)
}
