//! Distance queries and path reconstruction on a completed unfolding.
//!
//! The distance from the source to a point w in facet F is the least
//! distance from w to F's source images, all measured inside F's chart.
//! A shortest path is the preimage of the straight segment from the source
//! to w in the unfolded picture; it bends exactly where the segment crosses
//! the unfolded ridges.

use crate::complex::{FacetComplex, FacetId};
use crate::config::Tolerances;
use crate::folding::{AffineIsometry, FoldAtlas};
use crate::hpoly::HPolytope;
use crate::unfolder::{GvdCell, Unfolder};
use crate::{Error, Result};
use nalgebra::DVector;

#[derive(Debug, Clone)]
pub struct PathPoint {
    pub facet: usize,
    pub point: DVector<f64>,
}

#[derive(Debug, Clone)]
pub struct GeodesicPath {
    pub length: f64,
    /// facet labels visited, source facet first
    pub facets: Vec<usize>,
    /// source, one breakpoint per ridge crossed, target; breakpoints in the
    /// chart of the facet being entered
    pub points: Vec<PathPoint>,
}

fn check_inside(complex: &FacetComplex, facet: FacetId, w: &DVector<f64>, tol: &Tolerances) -> Result<()> {
    if facet.0 >= complex.facets.len() {
        return Err(Error::DegenerateInput(format!("no facet {}", facet.0)));
    }
    let f = complex.facet(facet);
    let slack = f.poly.min_slack(w);
    if slack < -tol.eps_slack {
        return Err(Error::PointOutsideFacet { facet: f.label, slack });
    }
    Ok(())
}

/// Geodesic distance from the unfolding's source(s) to w in facet's chart.
pub fn geodesic_distance(u: &Unfolder, facet: FacetId, w: &DVector<f64>) -> Result<f64> {
    check_inside(u.complex, facet, w, &u.tol)?;
    u.members[facet.0]
        .iter()
        .map(|m| (&m.nu - w).norm())
        .reduce(f64::min)
        .ok_or(Error::NoPathFound)
}

/// All shortest paths from the source(s) to w, one per image attaining the
/// minimum distance.
pub fn shortest_paths_to(u: &Unfolder, facet: FacetId, w: &DVector<f64>) -> Result<Vec<GeodesicPath>> {
    let mu = geodesic_distance(u, facet, w)?;
    let window = mu + u.tol.eps_rad * (1.0 + mu);
    let mut paths = Vec::new();
    for m in &u.members[facet.0] {
        if (&m.nu - w).norm() > window {
            continue;
        }
        let e = &u.events[m.event];
        if let Some(p) = trace_path(u, e.seq.as_slice(), e.ridges.as_slice(), e.source, w)? {
            paths.push(p);
        }
    }
    if paths.is_empty() {
        return Err(Error::NoPathFound);
    }
    paths.sort_by(|a, b| a.facets.cmp(&b.facets));
    Ok(paths)
}

/// Pull the straight unfolded segment back onto the surface. None when the
/// segment leaves the unfolded strip, which disqualifies the image.
fn trace_path(
    u: &Unfolder,
    seq: &[FacetId],
    ridges: &[crate::complex::RidgeId],
    source: usize,
    w: &DVector<f64>,
) -> Result<Option<GeodesicPath>> {
    let v = &u.sources[source].1;
    let eps = u.tol.eps_pt;
    // accumulate the unfolding along the sequence to find the segment end
    let mut iso = AffineIsometry::identity(u.complex.surface_dim);
    let mut maps = Vec::with_capacity(ridges.len());
    for (i, r) in ridges.iter().enumerate() {
        let (m, to) = u.atlas.across(u.complex, *r, seq[i])?;
        debug_assert_eq!(to, seq[i + 1]);
        maps.push(m.clone());
        iso = iso.compose(&m.inverse());
    }
    let w_unf = iso.apply(w);
    let d = &w_unf - v;
    let length = d.norm();

    let mut points = vec![PathPoint {
        facet: u.complex.facet(seq[0]).label,
        point: v.clone(),
    }];
    let mut prefix = AffineIsometry::identity(u.complex.surface_dim);
    let mut prev_t = 0.0;
    for (i, r) in ridges.iter().enumerate() {
        let from = u.complex.facet(seq[i]);
        let row = from
            .ridge_of_row
            .iter()
            .position(|rr| rr == r)
            .expect("ridge belongs to the facet it is crossed from");
        let h = &from.poly.ineqs[row];
        let inv = prefix.inverse();
        let q0 = inv.apply(v);
        let qd = inv.apply_dir(&d);
        let denom = h.normal.dot(&qd);
        if denom.abs() <= eps {
            return Ok(None);
        }
        let t = (h.offset - h.normal.dot(&q0)) / denom;
        if t < prev_t - eps || t > 1.0 + eps {
            return Ok(None);
        }
        let bp_from = &q0 + qd * t;
        if from.poly.min_slack(&bp_from) < -u.tol.eps_slack {
            return Ok(None);
        }
        let bp_to = maps[i].apply(&bp_from);
        points.push(PathPoint {
            facet: u.complex.facet(seq[i + 1]).label,
            point: bp_to,
        });
        prefix = prefix.compose(&maps[i].inverse());
        prev_t = t;
    }
    points.push(PathPoint {
        facet: u.complex.facet(*seq.last().unwrap()).label,
        point: w.clone(),
    });
    Ok(Some(GeodesicPath {
        length,
        facets: seq.iter().map(|f| u.complex.facet(*f).label).collect(),
        points,
    }))
}

/// Apply an isometry to a region: rows follow the chart change.
fn transform_poly(poly: &HPolytope, iso: &AffineIsometry) -> HPolytope {
    let mut out = HPolytope::new(poly.dim);
    for h in &poly.ineqs {
        let n = iso.apply_dir(&h.normal);
        let b = h.offset + n.dot(&iso.translation);
        out.ineqs.push(crate::hpoly::Halfspace { normal: n, offset: b });
    }
    for (a, b) in &poly.eqs {
        let n = iso.apply_dir(a);
        let b2 = b + n.dot(&iso.translation);
        out.eqs.push((n, b2));
    }
    out
}

/// Exhaustive reference distance: try every repetition-free facet sequence
/// up to max_len, unfold the target along it, and keep the shortest straight
/// segment that crosses the closed unfolded ridges in order. Independent of
/// the event engine.
pub fn brute_force_distance(
    complex: &FacetComplex,
    tol: &Tolerances,
    src: (FacetId, &DVector<f64>),
    dst: (FacetId, &DVector<f64>),
    max_len: usize,
) -> Result<f64> {
    brute_force_best(complex, tol, src, dst, max_len).map(|(d, _)| d)
}

/// Like [`brute_force_distance`], but also reports the optimal facet
/// sequence, source facet first.
pub fn brute_force_best(
    complex: &FacetComplex,
    tol: &Tolerances,
    src: (FacetId, &DVector<f64>),
    dst: (FacetId, &DVector<f64>),
    max_len: usize,
) -> Result<(f64, Vec<FacetId>)> {
    check_inside(complex, src.0, src.1, tol)?;
    check_inside(complex, dst.0, dst.1, tol)?;
    let atlas = FoldAtlas::build(complex, tol)?;
    let mut best = (f64::INFINITY, Vec::new());
    if max_len == 0 {
        return Err(Error::NoPathFound);
    }
    struct Dfs<'s> {
        complex: &'s FacetComplex,
        atlas: &'s FoldAtlas,
        tol: &'s Tolerances,
        v: &'s DVector<f64>,
        dst: FacetId,
        w: &'s DVector<f64>,
        max_len: usize,
    }
    struct Crossing {
        normal: DVector<f64>,
        offset: f64,
        strip: HPolytope,
    }
    impl Dfs<'_> {
        fn admissible(&self, crossings: &[Crossing], w_unf: &DVector<f64>) -> bool {
            let d = w_unf - self.v;
            let eps = self.tol.eps_pt;
            let mut prev_t = 0.0;
            for c in crossings {
                let denom = c.normal.dot(&d);
                if denom.abs() <= eps {
                    return false;
                }
                let t = (c.offset - c.normal.dot(self.v)) / denom;
                if t < prev_t - eps || t > 1.0 + eps {
                    return false;
                }
                let p = self.v + &d * t;
                if !c.strip.contains(&p, 1e-7) {
                    return false;
                }
                prev_t = t;
            }
            true
        }

        fn go(
            &self,
            f: FacetId,
            iso: &AffineIsometry,
            seq: &mut Vec<FacetId>,
            crossings: &mut Vec<Crossing>,
            best: &mut (f64, Vec<FacetId>),
        ) -> Result<()> {
            if f == self.dst {
                let w_unf = iso.apply(self.w);
                let len = (&w_unf - self.v).norm();
                if len < best.0 && self.admissible(crossings, &w_unf) {
                    *best = (len, seq.clone());
                }
            }
            if seq.len() >= self.max_len {
                return Ok(());
            }
            let facet = self.complex.facet(f);
            for (row, h) in facet.poly.ineqs.iter().enumerate() {
                let r = facet.ridge_of_row[row];
                let (map, to) = self.atlas.across(self.complex, r, f)?;
                if seq.contains(&to) {
                    continue;
                }
                let mut strip_local = facet.poly.clone();
                strip_local.eqs.push((h.normal.clone(), h.offset));
                let strip = transform_poly(&strip_local, iso);
                // every path through this ridge is at least this long
                if let Some(p) = strip.project(self.v, self.tol) {
                    if (&p - self.v).norm() >= best.0 {
                        continue;
                    }
                }
                let normal = iso.apply_dir(&h.normal);
                let offset = h.offset + normal.dot(&iso.translation);
                crossings.push(Crossing { normal, offset, strip });
                seq.push(to);
                let next = iso.compose(&map.inverse());
                self.go(to, &next, seq, crossings, best)?;
                seq.pop();
                crossings.pop();
            }
            Ok(())
        }
    }
    let dfs = Dfs {
        complex,
        atlas: &atlas,
        tol,
        v: src.1,
        dst: dst.0,
        w: dst.1,
        max_len,
    };
    let mut seq = vec![src.0];
    dfs.go(
        src.0,
        &AffineIsometry::identity(complex.surface_dim),
        &mut seq,
        &mut Vec::new(),
        &mut best,
    )?;
    if best.0.is_finite() {
        Ok(best)
    } else {
        Err(Error::NoPathFound)
    }
}

/// Geodesic Voronoi diagram: run the multi-source unfolding to completion
/// and report each image's nonempty cell tagged by its source.
pub fn geodesic_voronoi(
    complex: &FacetComplex,
    tol: &Tolerances,
    sources: &[(FacetId, DVector<f64>)],
) -> Result<Vec<GvdCell>> {
    let mut u = Unfolder::new_multi(complex, tol, sources)?;
    u.run()?;
    u.voronoi_cells()
}
