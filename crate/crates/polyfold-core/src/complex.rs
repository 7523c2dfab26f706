//! Facet complexes.
//!
//! The boundary of a convex polytope in R^{d+1}, carved into its facets, each
//! carried by an isometric chart into R^d. The same structure can be given
//! abstractly: charted facet polytopes plus ridge gluings. Both forms end up
//! in the one `FacetComplex` type; everything downstream (folding maps, the
//! unfolding engine, geodesics) works purely on charts and ridges and never
//! looks at ambient coordinates again.

use crate::config::Tolerances;
use crate::cone;
use crate::hpoly::{Halfspace, HPolytope};
use crate::linalg;
use crate::{Error, Result};
use nalgebra::DVector;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FacetId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RidgeId(pub usize);

impl fmt::Display for FacetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for RidgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Isometric chart of a facet: orthonormal basis anchored at a vertex.
#[derive(Debug, Clone)]
pub struct Chart {
    pub origin: DVector<f64>,
    pub basis: Vec<DVector<f64>>,
}

impl Chart {
    pub fn to_chart(&self, x: &DVector<f64>) -> DVector<f64> {
        let rel = x - &self.origin;
        DVector::from_fn(self.basis.len(), |k, _| self.basis[k].dot(&rel))
    }

    pub fn to_ambient(&self, y: &DVector<f64>) -> DVector<f64> {
        let mut x = self.origin.clone();
        for (k, b) in self.basis.iter().enumerate() {
            x.axpy(y[k], b, 1.0);
        }
        x
    }
}

/// One facet: its chart polytope (irredundant rows), vertex list, and the
/// ridge supported by each row. `chart` is present only for embedded input.
#[derive(Debug, Clone)]
pub struct Facet {
    pub id: FacetId,
    /// external name: input row index (embedded) or the id from the file
    pub label: usize,
    pub poly: HPolytope,
    pub vertices: Vec<DVector<f64>>,
    /// parallel to poly.ineqs
    pub ridge_of_row: Vec<RidgeId>,
    pub chart: Option<Chart>,
}

/// A ridge with its two sides. `verts[k]` lists the ridge's vertices in the
/// chart of `facets[k]`; the two lists are matched by position, which is the
/// entire gluing datum.
#[derive(Debug, Clone)]
pub struct Ridge {
    pub id: RidgeId,
    pub facets: [FacetId; 2],
    /// row index in each facet's poly
    pub rows: [usize; 2],
    pub verts: [Vec<DVector<f64>>; 2],
}

#[derive(Debug, Clone)]
pub struct FacetComplex {
    /// intrinsic dimension d of the facets
    pub surface_dim: usize,
    pub facets: Vec<Facet>,
    pub ridges: Vec<Ridge>,
    /// embedded case: the validated input polytope in R^{d+1}
    pub ambient_input: Option<HPolytope>,
}

/// Abstract input: one charted facet.
#[derive(Debug, Clone)]
pub struct AbstractFacet {
    pub label: usize,
    pub poly: HPolytope,
    pub vertices: Vec<DVector<f64>>,
}

/// Abstract input: one ridge identification. Vertex indices point into the
/// respective facet's vertex list; the two index lists are matched by
/// position.
#[derive(Debug, Clone)]
pub struct Gluing {
    pub facet_a: usize,
    pub verts_a: Vec<usize>,
    pub facet_b: usize,
    pub verts_b: Vec<usize>,
}

impl FacetComplex {
    pub fn facet(&self, f: FacetId) -> &Facet {
        &self.facets[f.0]
    }

    pub fn ridge(&self, r: RidgeId) -> &Ridge {
        &self.ridges[r.0]
    }

    pub fn facet_by_label(&self, label: usize) -> Option<FacetId> {
        self.facets.iter().find(|f| f.label == label).map(|f| f.id)
    }

    /// The facet opposite `f` across ridge `r`.
    pub fn across(&self, r: RidgeId, f: FacetId) -> Result<FacetId> {
        let ridge = self.ridge(r);
        if ridge.facets[0] == f {
            Ok(ridge.facets[1])
        } else if ridge.facets[1] == f {
            Ok(ridge.facets[0])
        } else {
            Err(Error::NotARidgeOfFacet { ridge: r.0, facet: f.0 })
        }
    }

    /// Which side of ridge `r` facet `f` is (0 or 1).
    pub fn side_of(&self, r: RidgeId, f: FacetId) -> Result<usize> {
        let ridge = self.ridge(r);
        if ridge.facets[0] == f {
            Ok(0)
        } else if ridge.facets[1] == f {
            Ok(1)
        } else {
            Err(Error::NotARidgeOfFacet { ridge: r.0, facet: f.0 })
        }
    }

    pub fn ridges_of(&self, f: FacetId) -> Vec<RidgeId> {
        let mut out = self.facet(f).ridge_of_row.clone();
        out.sort();
        out.dedup();
        out
    }

    /// The (d-2)-faces of facet `f`, as chart vertex lists: intersections of
    /// ridge-row pairs of the right dimension, deduplicated.
    pub fn skeleton_pieces(&self, f: FacetId, tol: &Tolerances) -> Vec<Vec<DVector<f64>>> {
        let facet = self.facet(f);
        let d = self.surface_dim;
        if d < 2 {
            return Vec::new();
        }
        let mut pieces: Vec<Vec<DVector<f64>>> = Vec::new();
        let n = facet.poly.ineqs.len();
        for i in 0..n {
            for j in i + 1..n {
                let mut sub = facet.poly.clone();
                let hi = &facet.poly.ineqs[i];
                let hj = &facet.poly.ineqs[j];
                sub.eqs.push((hi.normal.clone(), hi.offset));
                sub.eqs.push((hj.normal.clone(), hj.offset));
                let verts = sub.vertices(tol);
                if verts.is_empty() {
                    continue;
                }
                if linalg::affine_rank(&verts, tol.eps_rank) != d as isize - 2 {
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

    /// Re-express the complex as abstract parts (chart polytopes plus
    /// gluings). Inverse of `from_parts` up to facet order.
    pub fn as_parts(&self) -> (Vec<AbstractFacet>, Vec<Gluing>) {
        let parts = self
            .facets
            .iter()
            .map(|f| AbstractFacet {
                label: f.label,
                poly: f.poly.clone(),
                vertices: f.vertices.clone(),
            })
            .collect();
        let index_of = |f: &Facet, p: &DVector<f64>| -> usize {
            f.vertices
                .iter()
                .position(|v| (v - p).norm() <= 1e-7)
                .expect("ridge vertex must be a facet vertex")
        };
        let gluings = self
            .ridges
            .iter()
            .map(|r| {
                let fa = self.facet(r.facets[0]);
                let fb = self.facet(r.facets[1]);
                Gluing {
                    facet_a: fa.label,
                    verts_a: r.verts[0].iter().map(|p| index_of(fa, p)).collect(),
                    facet_b: fb.label,
                    verts_b: r.verts[1].iter().map(|p| index_of(fb, p)).collect(),
                }
            })
            .collect();
        (parts, gluings)
    }

    /// Build from the boundary of a bounded full-dimensional polytope.
    pub fn from_polytope(input: &HPolytope, tol: &Tolerances) -> Result<FacetComplex> {
        if input.dim < 2 {
            return Err(Error::DegenerateInput(
                "ambient dimension must be at least 2".into(),
            ));
        }
        if !input.eqs.is_empty() {
            return Err(Error::DegenerateInput(
                "input polytope must be given by inequalities only".into(),
            ));
        }
        let verts = input.vertices(tol);
        if verts.is_empty() {
            return Err(Error::EmptyPolyhedron);
        }
        if !cone::recession_cone(input).is_trivial(tol) {
            return Err(Error::UnboundedInput);
        }
        if linalg::affine_rank(&verts, tol.eps_rank) < input.dim as isize {
            return Err(Error::DegenerateInput(
                "input polytope is not full-dimensional".into(),
            ));
        }
        let (irred, _) = input.remove_redundant(tol);
        let d = input.dim - 1;
        let act = tol.eps_pt * 10.0;

        let mut facets: Vec<Facet> = Vec::new();
        for (fi, h) in irred.ineqs.iter().enumerate() {
            let mut fverts: Vec<DVector<f64>> = verts
                .iter()
                .filter(|v| h.slack(v).abs() <= act)
                .cloned()
                .collect();
            linalg::sort_points_lex(&mut fverts, 0.0);
            let origin = fverts[0].clone();
            let diffs: Vec<DVector<f64>> = fverts[1..].iter().map(|p| p - &origin).collect();
            let basis = linalg::gram_schmidt(&diffs, tol.eps_rank);
            if basis.len() != d {
                return Err(Error::DegenerateInput(format!(
                    "facet {fi} does not have dimension {d}"
                )));
            }
            let chart = Chart { origin, basis };
            let mut chart_pts: Vec<DVector<f64>> =
                fverts.iter().map(|p| chart.to_chart(p)).collect();
            linalg::sort_points_lex(&mut chart_pts, 0.0);
            // a neighbor contributes a boundary row exactly when the facet
            // vertices it touches span a (d-1)-face; testing incidence on the
            // facet's own vertices keeps almost-parallel neighbors that merely
            // graze a vertex out of the row set
            let mut rows: Vec<Halfspace> = Vec::new();
            for (gi, g) in irred.ineqs.iter().enumerate() {
                if gi == fi {
                    continue;
                }
                let b = g.offset - g.normal.dot(&chart.origin);
                let a = DVector::from_fn(d, |k, _| chart.basis[k].dot(&g.normal));
                let Some(r) = Halfspace::unit(a, b, tol.eps_rank) else {
                    continue;
                };
                let on: Vec<DVector<f64>> = chart_pts
                    .iter()
                    .filter(|p| r.slack(p).abs() <= act)
                    .cloned()
                    .collect();
                if linalg::affine_rank(&on, tol.eps_rank) == d as isize - 1 {
                    rows.push(r);
                }
            }
            let poly = HPolytope::with_ineqs(d, rows);
            for p in &chart_pts {
                if poly.min_slack(p) < -act {
                    return Err(Error::NumericFailure(format!(
                        "facet {fi}: boundary rows exclude a facet vertex"
                    )));
                }
            }
            facets.push(Facet {
                id: FacetId(fi),
                label: fi,
                poly,
                vertices: chart_pts,
                ridge_of_row: Vec::new(),
                chart: Some(chart),
            });
        }

        // ridges from facet pairs that share a (d-1)-dimensional vertex set
        let mut ridges: Vec<Ridge> = Vec::new();
        let mut row_map: Vec<Vec<Option<RidgeId>>> = facets
            .iter()
            .map(|f| vec![None; f.poly.ineqs.len()])
            .collect();
        for i in 0..facets.len() {
            for j in i + 1..facets.len() {
                let hi = &irred.ineqs[i];
                let hj = &irred.ineqs[j];
                let mut common: Vec<DVector<f64>> = verts
                    .iter()
                    .filter(|v| hi.slack(v).abs() <= act && hj.slack(v).abs() <= act)
                    .cloned()
                    .collect();
                if common.is_empty() {
                    continue;
                }
                linalg::sort_points_lex(&mut common, 0.0);
                if linalg::affine_rank(&common, tol.eps_rank) != d as isize - 1 {
                    continue;
                }
                let id = RidgeId(ridges.len());
                let ca = facets[i].chart.as_ref().unwrap();
                let cb = facets[j].chart.as_ref().unwrap();
                let va: Vec<DVector<f64>> = common.iter().map(|p| ca.to_chart(p)).collect();
                let vb: Vec<DVector<f64>> = common.iter().map(|p| cb.to_chart(p)).collect();
                let ra = unique_supporting_row(&facets[i].poly, &va, act).ok_or_else(|| {
                    Error::NumericFailure(format!("ridge of facets {i},{j}: no supporting row"))
                })?;
                let rb = unique_supporting_row(&facets[j].poly, &vb, act).ok_or_else(|| {
                    Error::NumericFailure(format!("ridge of facets {i},{j}: no supporting row"))
                })?;
                row_map[i][ra] = Some(id);
                row_map[j][rb] = Some(id);
                ridges.push(Ridge {
                    id,
                    facets: [FacetId(i), FacetId(j)],
                    rows: [ra, rb],
                    verts: [va, vb],
                });
            }
        }
        for (fi, facet) in facets.iter_mut().enumerate() {
            facet.ridge_of_row = row_map[fi]
                .iter()
                .enumerate()
                .map(|(ri, m)| {
                    m.ok_or_else(|| {
                        Error::NumericFailure(format!("facet {fi} row {ri} has no ridge"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
        }

        Ok(FacetComplex {
            surface_dim: d,
            facets,
            ridges,
            ambient_input: Some(irred),
        })
    }

    /// Build from abstract parts. Validates congruence of glued vertex sets,
    /// the pseudomanifold property (every ridge row glued exactly once), and
    /// for d = 2 that every vertex orbit has total angle below 2 pi.
    pub fn from_parts(
        parts: &[AbstractFacet],
        gluings: &[Gluing],
        tol: &Tolerances,
    ) -> Result<FacetComplex> {
        if parts.is_empty() {
            return Err(Error::EmptyPolyhedron);
        }
        let d = parts[0].poly.dim;
        if d < 1 {
            return Err(Error::DegenerateInput("facet dimension must be at least 1".into()));
        }
        let act = tol.eps_pt * 10.0;
        let glue_eps = 1e-7;
        let mut facets: Vec<Facet> = Vec::new();
        for (fi, part) in parts.iter().enumerate() {
            if part.poly.dim != d {
                return Err(Error::DegenerateInput(format!(
                    "facet {}: dimension {} differs from {}",
                    part.label, part.poly.dim, d
                )));
            }
            if facets.iter().any(|f| f.label == part.label) {
                return Err(Error::DegenerateInput(format!(
                    "duplicate facet id {}",
                    part.label
                )));
            }
            let (poly, _) = part.poly.remove_redundant(tol);
            let enumerated = poly.vertices(tol);
            if enumerated.is_empty() {
                return Err(Error::EmptyPolyhedron);
            }
            if !cone::recession_cone(&poly).is_trivial(tol) {
                return Err(Error::UnboundedInput);
            }
            if linalg::affine_rank(&enumerated, tol.eps_rank) != d as isize {
                return Err(Error::DegenerateInput(format!(
                    "facet {} is not full-dimensional in its chart",
                    part.label
                )));
            }
            if part.vertices.len() != enumerated.len() {
                return Err(Error::DegenerateInput(format!(
                    "facet {}: {} vertices listed, polytope has {}",
                    part.label,
                    part.vertices.len(),
                    enumerated.len()
                )));
            }
            for v in &part.vertices {
                if !enumerated.iter().any(|w| (w - v).norm() <= glue_eps) {
                    return Err(Error::DegenerateInput(format!(
                        "facet {}: listed point is not a vertex of the polytope",
                        part.label
                    )));
                }
            }
            facets.push(Facet {
                id: FacetId(fi),
                label: part.label,
                poly,
                vertices: part.vertices.clone(),
                ridge_of_row: Vec::new(),
                chart: None,
            });
        }

        let mut ridges: Vec<Ridge> = Vec::new();
        let mut row_map: Vec<Vec<Option<RidgeId>>> = facets
            .iter()
            .map(|f| vec![None; f.poly.ineqs.len()])
            .collect();
        for g in gluings {
            let fa = facets
                .iter()
                .position(|f| f.label == g.facet_a)
                .ok_or_else(|| Error::DegenerateInput(format!("unknown facet id {}", g.facet_a)))?;
            let fb = facets
                .iter()
                .position(|f| f.label == g.facet_b)
                .ok_or_else(|| Error::DegenerateInput(format!("unknown facet id {}", g.facet_b)))?;
            if fa == fb {
                return Err(Error::NotPseudomanifold(format!(
                    "facet {} glued to itself",
                    g.facet_a
                )));
            }
            if g.verts_a.len() != g.verts_b.len() || g.verts_a.is_empty() {
                return Err(Error::GluingMismatch(format!(
                    "gluing of facets {} and {}: vertex lists of unequal length",
                    g.facet_a, g.facet_b
                )));
            }
            let fetch = |f: usize, idxs: &[usize]| -> Result<Vec<DVector<f64>>> {
                idxs.iter()
                    .map(|&i| {
                        facets[f].vertices.get(i).cloned().ok_or_else(|| {
                            Error::DegenerateInput(format!(
                                "facet {}: vertex index {} out of range",
                                facets[f].label, i
                            ))
                        })
                    })
                    .collect()
            };
            let pa = fetch(fa, &g.verts_a)?;
            let pb = fetch(fb, &g.verts_b)?;
            for i in 0..pa.len() {
                for j in i + 1..pa.len() {
                    let da = (&pa[i] - &pa[j]).norm();
                    let db = (&pb[i] - &pb[j]).norm();
                    if (da - db).abs() > glue_eps * (1.0 + da.max(db)) {
                        return Err(Error::GluingMismatch(format!(
                            "gluing of facets {} and {}: vertex sets are not congruent",
                            g.facet_a, g.facet_b
                        )));
                    }
                }
            }
            if linalg::affine_rank(&pa, tol.eps_rank) != d as isize - 1 {
                return Err(Error::GluingMismatch(format!(
                    "gluing of facets {} and {}: glued set is not ({})-dimensional",
                    g.facet_a,
                    g.facet_b,
                    d - 1
                )));
            }
            let ra = ridge_row(&facets[fa], &pa, act, glue_eps).ok_or_else(|| {
                Error::GluingMismatch(format!(
                    "gluing does not cover a whole ridge of facet {}",
                    g.facet_a
                ))
            })?;
            let rb = ridge_row(&facets[fb], &pb, act, glue_eps).ok_or_else(|| {
                Error::GluingMismatch(format!(
                    "gluing does not cover a whole ridge of facet {}",
                    g.facet_b
                ))
            })?;
            for (f, r, label) in [(fa, ra, g.facet_a), (fb, rb, g.facet_b)] {
                if row_map[f][r].is_some() {
                    return Err(Error::NotPseudomanifold(format!(
                        "ridge of facet {label} glued more than once"
                    )));
                }
            }
            let id = RidgeId(ridges.len());
            row_map[fa][ra] = Some(id);
            row_map[fb][rb] = Some(id);
            ridges.push(Ridge {
                id,
                facets: [FacetId(fa), FacetId(fb)],
                rows: [ra, rb],
                verts: [pa, pb],
            });
        }
        for (fi, facet) in facets.iter_mut().enumerate() {
            facet.ridge_of_row = row_map[fi]
                .iter()
                .map(|m| {
                    m.ok_or_else(|| {
                        Error::NotPseudomanifold(format!(
                            "facet {} has an unglued ridge",
                            facet.label
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
        }

        let complex = FacetComplex { surface_dim: d, facets, ridges, ambient_input: None };
        if d == 2 {
            complex.check_curvature(tol)?;
        }
        Ok(complex)
    }

    /// d = 2 only: every glued vertex orbit must have total angle < 2 pi.
    fn check_curvature(&self, tol: &Tolerances) -> Result<()> {
        let offsets: Vec<usize> = self
            .facets
            .iter()
            .scan(0, |acc, f| {
                let o = *acc;
                *acc += f.vertices.len();
                Some(o)
            })
            .collect();
        let total: usize = self.facets.iter().map(|f| f.vertices.len()).sum();
        let mut uf: Vec<usize> = (0..total).collect();
        fn find(uf: &mut Vec<usize>, x: usize) -> usize {
            if uf[x] != x {
                let r = find(uf, uf[x]);
                uf[x] = r;
            }
            uf[x]
        }
        let vert_index = |f: usize, p: &DVector<f64>| -> Option<usize> {
            self.facets[f]
                .vertices
                .iter()
                .position(|v| (v - p).norm() <= 1e-7)
        };
        for r in &self.ridges {
            let fa = r.facets[0].0;
            let fb = r.facets[1].0;
            for (pa, pb) in r.verts[0].iter().zip(r.verts[1].iter()) {
                let ia = offsets[fa] + vert_index(fa, pa).expect("ridge vertex is a facet vertex");
                let ib = offsets[fb] + vert_index(fb, pb).expect("ridge vertex is a facet vertex");
                let ra = find(&mut uf, ia);
                let rb = find(&mut uf, ib);
                uf[ra] = rb;
            }
        }
        let mut angle_of_root: std::collections::BTreeMap<usize, (f64, usize, usize)> =
            std::collections::BTreeMap::new();
        for (fi, facet) in self.facets.iter().enumerate() {
            for (vi, p) in facet.vertices.iter().enumerate() {
                let ang = polygon_angle(&facet.poly, p, tol)?;
                let root = find(&mut uf, offsets[fi] + vi);
                let e = angle_of_root.entry(root).or_insert((0.0, fi, vi));
                e.0 += ang;
            }
        }
        for (_, (angle, fi, vi)) in angle_of_root {
            if angle >= 2.0 * std::f64::consts::PI - tol.eps_ang {
                return Err(Error::NonPositiveCurvature {
                    vertex: format!("facet {} vertex {}", self.facets[fi].label, vi),
                    angle,
                });
            }
        }
        Ok(())
    }
}

/// Interior angle of a convex polygon at one of its vertices: the angle
/// between the directions toward the two edge-neighbours.
fn polygon_angle(poly: &HPolytope, p: &DVector<f64>, tol: &Tolerances) -> Result<f64> {
    let verts = poly.vertices(tol);
    let act = tol.eps_pt * 100.0;
    let mut dirs: Vec<DVector<f64>> = Vec::new();
    for h in &poly.ineqs {
        if h.slack(p).abs() > act {
            continue;
        }
        // the other vertex on this edge
        for q in &verts {
            if (q - p).norm() > act && h.slack(q).abs() <= act {
                dirs.push((q - p).normalize());
            }
        }
    }
    if dirs.len() != 2 {
        return Err(Error::NumericFailure(format!(
            "polygon vertex with {} incident edges",
            dirs.len()
        )));
    }
    Ok(dirs[0].dot(&dirs[1]).clamp(-1.0, 1.0).acos())
}

/// The unique irredundant row of `poly` active at every point of `pts`.
fn unique_supporting_row(poly: &HPolytope, pts: &[DVector<f64>], act: f64) -> Option<usize> {
    let mut hit = None;
    for (ri, h) in poly.ineqs.iter().enumerate() {
        if pts.iter().all(|p| h.slack(p).abs() <= act) {
            if hit.is_some() {
                return None;
            }
            hit = Some(ri);
        }
    }
    hit
}

/// Like `unique_supporting_row`, additionally requiring that `pts` covers all
/// polytope vertices on that row.
fn ridge_row(facet: &Facet, pts: &[DVector<f64>], act: f64, glue_eps: f64) -> Option<usize> {
    let row = unique_supporting_row(&facet.poly, pts, act.max(glue_eps))?;
    let h = &facet.poly.ineqs[row];
    let on_row: Vec<&DVector<f64>> = facet
        .vertices
        .iter()
        .filter(|v| h.slack(v).abs() <= act.max(glue_eps))
        .collect();
    if on_row.len() != pts.len() {
        return None;
    }
    for v in on_row {
        if !pts.iter().any(|p| (p - v).norm() <= glue_eps) {
            return None;
        }
    }
    Some(row)
}
