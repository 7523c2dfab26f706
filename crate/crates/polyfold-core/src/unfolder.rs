//! The wavefront event engine.
//!
//! Source images spread facet by facet: each facet F carries the set of
//! images that have reached it, and candidate events (image, ridge) ranked
//! by contact radius, with angle sequences breaking radius ties. Processing
//! the minimal event folds the image across its ridge into the neighbour
//! facet, whose candidate list is then rebuilt from scratch against the
//! enlarged image set. The committed events, their cells, and the maps that
//! unfold them back over the source chart are the engine's entire output.

use crate::complex::{FacetComplex, FacetId, RidgeId};
use crate::config::Tolerances;
use crate::folding::{AffineIsometry, FoldAtlas};
use crate::jets::{angle_sequence, compare_angle_sequences, minimal_jet_frame};
use crate::voronoi::{can_see, ridge_radius, voronoi_cell, Visibility};
use crate::{Error, Result};
use nalgebra::DVector;
use std::cmp::Ordering;

/// A committed event: a source image that has reached a facet.
#[derive(Debug, Clone)]
pub struct Event {
    pub facet: FacetId,
    /// source image in the facet's chart
    pub nu: DVector<f64>,
    /// facet sequence from the source facet to here
    pub seq: Vec<FacetId>,
    /// ridges crossed along seq
    pub ridges: Vec<RidgeId>,
    pub radius: f64,
    /// contact point, mapped into this facet's chart
    pub rho: DVector<f64>,
    pub angle_seq: Vec<f64>,
    /// the ridge whose crossing committed this event (None for seeds)
    pub ridge: Option<RidgeId>,
    /// facet and member index the event was launched from
    pub from_member: Option<(FacetId, usize)>,
    pub source: usize,
    /// unfolds this facet's chart back over the source chart
    pub unfold: AffineIsometry,
}

/// One image in a facet's image set.
#[derive(Debug, Clone)]
pub struct Member {
    pub nu: DVector<f64>,
    pub event: usize,
    pub source: usize,
}

/// Candidate event: `member` of `facet` touching the ridge at `ridge_row`.
#[derive(Debug, Clone)]
struct Potential {
    facet: FacetId,
    member: usize,
    ridge: RidgeId,
    radius: f64,
    rho: DVector<f64>,
    angle_seq: Vec<f64>,
    target_facet: FacetId,
    /// image in the target chart, cached at creation for staleness checks
    target_nu: DVector<f64>,
}

#[derive(Debug)]
pub struct Unfolder<'a> {
    pub complex: &'a FacetComplex,
    pub atlas: FoldAtlas,
    pub tol: Tolerances,
    /// canonical seed per source: facet and chart point
    pub sources: Vec<(FacetId, DVector<f64>)>,
    pub members: Vec<Vec<Member>>,
    pub events: Vec<Event>,
    potentials: Vec<Potential>,
}

impl<'a> Unfolder<'a> {
    pub fn new_single(
        complex: &'a FacetComplex,
        tol: &Tolerances,
        facet: FacetId,
        point: DVector<f64>,
    ) -> Result<Unfolder<'a>> {
        Unfolder::new_multi(complex, tol, &[(facet, point)])
    }

    /// Locate an ambient boundary point on the embedded complex and seed it.
    pub fn new_single_ambient(
        complex: &'a FacetComplex,
        tol: &Tolerances,
        ambient: &DVector<f64>,
    ) -> Result<Unfolder<'a>> {
        let (facet, point) = locate_ambient(complex, ambient, tol)?;
        Unfolder::new_single(complex, tol, facet, point)
    }

    pub fn new_multi(
        complex: &'a FacetComplex,
        tol: &Tolerances,
        sources: &[(FacetId, DVector<f64>)],
    ) -> Result<Unfolder<'a>> {
        let atlas = FoldAtlas::build(complex, tol)?;
        let mut u = Unfolder {
            complex,
            atlas,
            tol: tol.clone(),
            sources: Vec::new(),
            members: vec![Vec::new(); complex.facets.len()],
            events: Vec::new(),
            potentials: Vec::new(),
        };
        for (src_idx, (facet, point)) in sources.iter().enumerate() {
            u.seed(src_idx, *facet, point)?;
        }
        // two sources seeding the same facet at the same image are one source
        for ms in &u.members {
            for (i, a) in ms.iter().enumerate() {
                for b in &ms[..i] {
                    if a.source != b.source && (&a.nu - &b.nu).norm() <= u.tol.eps_pt {
                        return Err(Error::DuplicateSources);
                    }
                }
            }
        }
        let seeded: Vec<FacetId> = u
            .members
            .iter()
            .enumerate()
            .filter(|(_, ms)| !ms.is_empty())
            .map(|(i, _)| FacetId(i))
            .collect();
        for f in seeded {
            u.recompute_candidates(f)?;
        }
        Ok(u)
    }

    /// Seed one source into the complex. A point with one active facet row
    /// sits on a ridge: it belongs to the smaller-labelled incident facet
    /// and also seeds the opposite facet at radius zero. Two or more active
    /// rows put it on the (d-2)-skeleton, where tangent charts stop being
    /// flat and no unfolding starts.
    fn seed(&mut self, src_idx: usize, facet: FacetId, point: &DVector<f64>) -> Result<()> {
        if facet.0 >= self.complex.facets.len() {
            return Err(Error::DegenerateInput(format!("no facet {}", facet.0)));
        }
        let fac = self.complex.facet(facet);
        let mut active: Vec<usize> = Vec::new();
        for (ri, h) in fac.poly.ineqs.iter().enumerate() {
            let s = h.slack(point);
            if s < -self.tol.eps_slack {
                return Err(Error::PointOutsideFacet { facet: fac.label, slack: s });
            }
            if s.abs() <= self.tol.eps_slack {
                active.push(ri);
            }
        }
        if active.len() >= 2 {
            return Err(Error::SourceOnWarpedFace);
        }
        let (home, home_point, other) = if let Some(&row) = active.first() {
            let r = fac.ridge_of_row[row];
            let opp = self.complex.across(r, facet)?;
            let (small, small_pt) = if opp.0 < facet.0 {
                let (m, _) = self.atlas.across(self.complex, r, facet)?;
                (opp, m.apply(point))
            } else {
                (facet, point.clone())
            };
            let big = self.complex.across(r, small)?;
            (small, small_pt, Some((r, big)))
        } else {
            (facet, point.clone(), None)
        };

        self.sources.push((home, home_point.clone()));
        let ev0 = self.events.len();
        self.events.push(Event {
            facet: home,
            nu: home_point.clone(),
            seq: vec![home],
            ridges: Vec::new(),
            radius: 0.0,
            rho: home_point.clone(),
            angle_seq: Vec::new(),
            ridge: None,
            from_member: None,
            source: src_idx,
            unfold: AffineIsometry::identity(self.complex.surface_dim),
        });
        self.members[home.0].push(Member { nu: home_point.clone(), event: ev0, source: src_idx });

        if let Some((r, big)) = other {
            let (m, _) = self.atlas.across(self.complex, r, home)?;
            let img = m.apply(&home_point);
            let ev1 = self.events.len();
            self.events.push(Event {
                facet: big,
                nu: img.clone(),
                seq: vec![home, big],
                ridges: vec![r],
                radius: 0.0,
                rho: img.clone(),
                angle_seq: Vec::new(),
                ridge: Some(r),
                from_member: Some((home, self.members[home.0].len() - 1)),
                source: src_idx,
                unfold: m.inverse(),
            });
            self.members[big.0].push(Member { nu: img, event: ev1, source: src_idx });
        }
        Ok(())
    }

    /// Rebuild the candidate list of facet `f` from scratch: every image,
    /// every ridge it can see, except crossings whose target image already
    /// arrived on the other side.
    fn recompute_candidates(&mut self, f: FacetId) -> Result<()> {
        self.potentials.retain(|p| p.facet != f);
        let facet = self.complex.facet(f);
        let nus: Vec<DVector<f64>> = self.members[f.0].iter().map(|m| m.nu.clone()).collect();
        for (mi, member) in self.members[f.0].iter().enumerate() {
            for (row, _) in facet.poly.ineqs.iter().enumerate() {
                let r = facet.ridge_of_row[row];
                if !can_see(&facet.poly, row, &nus, &member.nu, Visibility::RidgeThroughFacet, &self.tol)? {
                    continue;
                }
                let (map, target) = self.atlas.across(self.complex, r, f)?;
                let target_nu = map.apply(&member.nu);
                if self.members[target.0]
                    .iter()
                    .any(|m| (&m.nu - &target_nu).norm() <= self.tol.eps_pt)
                {
                    continue;
                }
                let (radius, rho) = ridge_radius(&facet.poly, row, &nus, &member.nu, &self.tol)?;
                let mut contact = voronoi_cell(&facet.poly, &nus, &member.nu, &self.tol)?;
                let ridge_h = &facet.poly.ineqs[row];
                contact.eqs.push((ridge_h.normal.clone(), ridge_h.offset));
                let nu_vec = &member.nu - &rho;
                let frame = minimal_jet_frame(&contact, &rho, &nu_vec, &self.tol)?;
                self.potentials.push(Potential {
                    facet: f,
                    member: mi,
                    ridge: r,
                    radius,
                    rho,
                    angle_seq: angle_sequence(&nu_vec, &frame),
                    target_facet: target,
                    target_nu,
                });
            }
        }
        Ok(())
    }

    /// Index of the minimal candidate: least radius, then lexicographically
    /// least angle sequence within the radius window, then a fixed key.
    fn choose_minimal(&self) -> Result<usize> {
        if self.potentials.is_empty() {
            return Err(Error::EmptySet);
        }
        let rmin = self
            .potentials
            .iter()
            .map(|p| p.radius)
            .fold(f64::INFINITY, f64::min);
        let window = rmin + self.tol.eps_rad * (1.0 + rmin);
        let mut best: Option<usize> = None;
        for (i, p) in self.potentials.iter().enumerate() {
            if p.radius > window {
                continue;
            }
            let better = match best {
                None => true,
                Some(j) => {
                    let q = &self.potentials[j];
                    match compare_angle_sequences(&p.angle_seq, &q.angle_seq, self.tol.eps_ang) {
                        Ordering::Less => true,
                        Ordering::Greater => false,
                        Ordering::Equal => {
                            (p.facet.0, p.ridge.0, p.member) < (q.facet.0, q.ridge.0, q.member)
                        }
                    }
                }
            };
            if better {
                best = Some(i);
            }
        }
        Ok(best.expect("window contains the minimum"))
    }

    /// Process the candidate (facet, ridge, member); it must be the minimal
    /// one.
    pub fn process_event(&mut self, facet: FacetId, ridge: RidgeId, member: usize) -> Result<()> {
        let chosen = self.choose_minimal()?;
        let p = &self.potentials[chosen];
        if p.facet != facet || p.ridge != ridge || p.member != member {
            return Err(Error::NotMinimal);
        }
        self.commit(chosen)
    }

    /// Process the minimal candidate. Ok(false) when nothing is left.
    pub fn step(&mut self) -> Result<bool> {
        if self.potentials.is_empty() {
            return Ok(false);
        }
        let chosen = self.choose_minimal()?;
        self.commit(chosen)?;
        Ok(true)
    }

    fn commit(&mut self, idx: usize) -> Result<()> {
        if self.events.len() >= self.tol.iteration_cap {
            return Err(Error::IterationCapExceeded(self.events.len()));
        }
        let p = self.potentials.swap_remove(idx);
        let target = p.target_facet;
        let nu = p.target_nu.clone();
        if self.members[target.0]
            .iter()
            .any(|m| (&m.nu - &nu).norm() <= self.tol.eps_pt)
        {
            // image already arrived by another route; candidate was stale
            return Ok(());
        }
        let parent_member = &self.members[p.facet.0][p.member];
        let parent_event = &self.events[parent_member.event];
        debug_assert!(p.radius >= parent_event.radius - self.tol.eps_rad);
        let (map, _) = self.atlas.across(self.complex, p.ridge, p.facet)?;
        let mut seq = parent_event.seq.clone();
        seq.push(target);
        let mut ridges = parent_event.ridges.clone();
        ridges.push(p.ridge);
        let event = Event {
            facet: target,
            nu: nu.clone(),
            seq,
            ridges,
            radius: p.radius,
            rho: map.apply(&p.rho),
            angle_seq: p.angle_seq.clone(),
            ridge: Some(p.ridge),
            from_member: Some((p.facet, p.member)),
            source: parent_member.source,
            unfold: parent_event.unfold.compose(&map.inverse()),
        };
        let source = parent_member.source;
        let ev_idx = self.events.len();
        self.events.push(event);
        self.members[target.0].push(Member { nu: nu.clone(), event: ev_idx, source });
        // candidates elsewhere aiming at the same image are now stale
        let eps = self.tol.eps_pt;
        self.potentials
            .retain(|q| !(q.target_facet == target && (&q.target_nu - &nu).norm() <= eps));
        self.recompute_candidates(target)?;
        Ok(())
    }

    pub fn run(&mut self) -> Result<()> {
        while self.step()? {}
        Ok(())
    }

    /// The source image set of facet `f`.
    pub fn images(&self, f: FacetId) -> Vec<DVector<f64>> {
        self.members[f.0].iter().map(|m| m.nu.clone()).collect()
    }

    /// Assemble the foldout of one source: every committed cell unfolded
    /// back over the source chart and translated so the source sits at the
    /// origin. Cells of measure zero in their facet are omitted; their
    /// events remain in the event log.
    pub fn foldout(&self, source: usize) -> Result<Foldout> {
        if source >= self.sources.len() {
            return Err(Error::DegenerateInput(format!("no source {source}")));
        }
        let v = &self.sources[source].1;
        let mut cells = Vec::new();
        for event in &self.events {
            if event.source != source {
                continue;
            }
            let facet = self.complex.facet(event.facet);
            let nus = self.images(event.facet);
            let cell = voronoi_cell(&facet.poly, &nus, &event.nu, &self.tol)?;
            let keep = match cell.chebyshev(&self.tol) {
                Some((_, r)) => r >= self.tol.eps_slack,
                None => false,
            };
            if !keep {
                continue;
            }
            let verts = cell.vertices(&self.tol);
            cells.push(FoldoutCell {
                facet: facet.label,
                source_image: event.nu.clone(),
                facet_sequence: event.seq.iter().map(|f| self.complex.facet(*f).label).collect(),
                vertices: verts.iter().map(|x| event.unfold.apply(x) - v).collect(),
            });
        }
        let events = self
            .events
            .iter()
            .filter(|e| e.source == source)
            .map(|e| FoldoutEvent {
                facet: self.complex.facet(e.facet).label,
                nu: e.nu.clone(),
                radius: e.radius,
                event_point: e.rho.clone(),
                angle_seq: e.angle_seq.clone(),
                ridge: e.ridge.map(|r| r.0),
            })
            .collect();
        Ok(Foldout {
            dim: self.complex.surface_dim,
            origin: DVector::zeros(self.complex.surface_dim),
            cells,
            events,
        })
    }

    /// Geodesic Voronoi cells: per facet, the nonempty cell of each image,
    /// tagged by source.
    pub fn voronoi_cells(&self) -> Result<Vec<GvdCell>> {
        let mut out = Vec::new();
        for (fi, ms) in self.members.iter().enumerate() {
            let facet = &self.complex.facets[fi];
            let nus: Vec<DVector<f64>> = ms.iter().map(|m| m.nu.clone()).collect();
            for m in ms {
                let cell = voronoi_cell(&facet.poly, &nus, &m.nu, &self.tol)?;
                let keep = match cell.chebyshev(&self.tol) {
                    Some((_, r)) => r >= self.tol.eps_slack,
                    None => false,
                };
                if !keep {
                    continue;
                }
                out.push(GvdCell {
                    facet: facet.label,
                    source_index: m.source,
                    vertices: cell.vertices(&self.tol),
                });
            }
        }
        Ok(out)
    }

    /// Cut locus: per facet the pieces where two images tie, plus the
    /// (d-2)-skeleton.
    pub fn cut_locus(&self) -> CutLocus {
        let mut per_facet = Vec::new();
        let mut skeleton = Vec::new();
        for (fi, facet) in self.complex.facets.iter().enumerate() {
            let nus: Vec<DVector<f64>> = self.members[fi].iter().map(|m| m.nu.clone()).collect();
            let pieces = crate::voronoi::cut_locus_pieces(&facet.poly, &nus, &self.tol);
            per_facet.push((facet.label, pieces));
            skeleton.push((facet.label, self.complex.skeleton_pieces(FacetId(fi), &self.tol)));
        }
        CutLocus { per_facet, skeleton }
    }

    pub fn vistal_tree(&self, source: usize) -> Result<VistalTree> {
        let events: Vec<&Event> = self.events.iter().filter(|e| e.source == source).collect();
        build_vistal_tree(&events, self.complex)
    }
}

/// Order events into the tree of facet-sequence prefixes: each event's
/// parent is the event whose sequence is one facet shorter.
pub fn build_vistal_tree(events: &[&Event], complex: &FacetComplex) -> Result<VistalTree> {
    let mut nodes: Vec<VistalNode> = Vec::new();
    for e in events {
        let parent = if e.seq.len() == 1 {
            None
        } else {
            let prefix = &e.seq[..e.seq.len() - 1];
            let found = events
                .iter()
                .position(|p| p.seq.len() == prefix.len() && p.seq == prefix && p.ridges == e.ridges[..e.ridges.len() - 1]);
            match found {
                Some(i) => Some(i),
                None => {
                    return Err(Error::OrphanEvent(
                        e.seq.iter().map(|f| complex.facet(*f).label).collect(),
                    ))
                }
            }
        };
        nodes.push(VistalNode {
            facet: complex.facet(e.facet).label,
            sequence: e.seq.iter().map(|f| complex.facet(*f).label).collect(),
            radius: e.radius,
            parent,
        });
    }
    Ok(VistalTree { nodes })
}

/// Find the facet of an ambient boundary point of an embedded complex.
pub fn locate_ambient(
    complex: &FacetComplex,
    ambient: &DVector<f64>,
    tol: &Tolerances,
) -> Result<(FacetId, DVector<f64>)> {
    let input = complex.ambient_input.as_ref().ok_or_else(|| {
        Error::DegenerateInput("ambient source requires an embedded complex".into())
    })?;
    if ambient.len() != input.dim {
        return Err(Error::DegenerateInput(format!(
            "source point has {} coordinates, ambient space has {}",
            ambient.len(),
            input.dim
        )));
    }
    let mut active: Vec<usize> = Vec::new();
    let mut min_slack = f64::INFINITY;
    let mut min_facet = 0usize;
    for (fi, h) in input.ineqs.iter().enumerate() {
        let s = h.slack(ambient);
        if s < -tol.eps_slack {
            return Err(Error::PointOutsideFacet {
                facet: complex.facets[fi].label,
                slack: s,
            });
        }
        if s.abs() <= tol.eps_slack {
            active.push(fi);
        }
        if s < min_slack {
            min_slack = s;
            min_facet = fi;
        }
    }
    match active.len() {
        0 => Err(Error::PointOutsideFacet {
            // interior point: on no facet at all
            facet: complex.facets[min_facet].label,
            slack: min_slack,
        }),
        1 | 2 => {
            // for a ridge point either incident facet works; seeding
            // canonicalizes to the smaller one
            let f = FacetId(active[0]);
            let chart = complex.facet(f).chart.as_ref().expect("embedded facet has a chart");
            Ok((f, chart.to_chart(ambient)))
        }
        _ => Err(Error::SourceOnWarpedFace),
    }
}

#[derive(Debug, Clone)]
pub struct FoldoutCell {
    pub facet: usize,
    pub source_image: DVector<f64>,
    pub facet_sequence: Vec<usize>,
    pub vertices: Vec<DVector<f64>>,
}

#[derive(Debug, Clone)]
pub struct FoldoutEvent {
    pub facet: usize,
    pub nu: DVector<f64>,
    pub radius: f64,
    pub event_point: DVector<f64>,
    pub angle_seq: Vec<f64>,
    pub ridge: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Foldout {
    pub dim: usize,
    pub origin: DVector<f64>,
    pub cells: Vec<FoldoutCell>,
    pub events: Vec<FoldoutEvent>,
}

#[derive(Debug, Clone)]
pub struct GvdCell {
    pub facet: usize,
    pub source_index: usize,
    pub vertices: Vec<DVector<f64>>,
}

#[derive(Debug, Clone)]
pub struct CutLocus {
    pub per_facet: Vec<(usize, Vec<Vec<DVector<f64>>>)>,
    pub skeleton: Vec<(usize, Vec<Vec<DVector<f64>>>)>,
}

#[derive(Debug, Clone)]
pub struct VistalNode {
    pub facet: usize,
    pub sequence: Vec<usize>,
    pub radius: f64,
    pub parent: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct VistalTree {
    pub nodes: Vec<VistalNode>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hpoly::boxpoly;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn cube_complex() -> FacetComplex {
        FacetComplex::from_polytope(&boxpoly(&[0.0; 3], &[1.0; 3]), &tol()).unwrap()
    }

    // facet ids: 0 left, 1 right, 2 front, 3 back, 4 bottom, 5 top
    const BOTTOM: FacetId = FacetId(4);
    const TOP: FacetId = FacetId(5);

    fn va(v: &[f64]) -> DVector<f64> {
        DVector::from_vec(v.to_vec())
    }

    #[test]
    fn center_cube_full_trace() {
        let c = cube_complex();
        let t = tol();
        let mut u = Unfolder::new_single_ambient(&c, &t, &va(&[0.5, 0.5, 0.0])).unwrap();
        u.run().unwrap();

        assert_eq!(u.events.len(), 17);
        let mut radii: Vec<f64> = u.events.iter().map(|e| e.radius).collect();
        // processing order must already be nondecreasing
        for w in radii.windows(2) {
            assert!(w[0] <= w[1] + 1e-9, "radii out of order: {radii:?}");
        }
        radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let want = {
            let mut v = vec![0.0];
            v.extend([0.5; 4]);
            v.extend([0.5f64.sqrt(); 8]);
            v.extend([1.5; 4]);
            v
        };
        for (a, b) in radii.iter().zip(want.iter()) {
            assert!((a - b).abs() < 1e-9, "radii {radii:?}");
        }

        assert_eq!(u.members[BOTTOM.0].len(), 1);
        assert_eq!(u.members[TOP.0].len(), 4);
        for side in [0, 1, 2, 3] {
            assert_eq!(u.members[side].len(), 3, "facet {side}");
        }

        let f = u.foldout(0).unwrap();
        assert_eq!(f.cells.len(), 9, "degenerate line cells are dropped");
        assert_eq!(f.events.len(), 17);
        // unfolding preserves area facet by facet: total is the surface area
        let mut total = 0.0;
        for cell in &f.cells {
            total += polygon_area(&cell.vertices);
        }
        assert!((total - 6.0).abs() < 1e-7, "total area {total}");
    }

    /// Area of a convex polygon given its vertices in any order.
    fn polygon_area(pts: &[DVector<f64>]) -> f64 {
        if pts.len() < 3 {
            return 0.0;
        }
        let c = pts.iter().fold(DVector::zeros(2), |a, p| a + p) / pts.len() as f64;
        let mut angles: Vec<(f64, &DVector<f64>)> = pts
            .iter()
            .map(|p| ((p[1] - c[1]).atan2(p[0] - c[0]), p))
            .collect();
        angles.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut area = 0.0;
        for i in 0..angles.len() {
            let p = angles[i].1;
            let q = angles[(i + 1) % angles.len()].1;
            area += p[0] * q[1] - q[0] * p[1];
        }
        area.abs() / 2.0
    }

    #[test]
    fn off_center_cube_counts() {
        let c = cube_complex();
        let t = tol();
        let mut u = Unfolder::new_single_ambient(&c, &t, &va(&[0.3, 0.4, 0.0])).unwrap();
        u.run().unwrap();
        // 1 seed + 4 side-direct + 4 side-around + 8 top images. Each
        // vertical edge wraps in one direction only: the mirror route's
        // contact is a cell corner on the ridge boundary, which does not
        // count as seeing the ridge.
        assert_eq!(u.events.len(), 17);
        assert_eq!(u.members[TOP.0].len(), 8);
        let member_counts: Vec<usize> = u.members.iter().map(|m| m.len()).collect();
        // left 1, right 3, front 2, back 2, bottom 1, top 8
        assert_eq!(member_counts, vec![1, 3, 2, 2, 1, 8]);
        // the four genuine wrap routes cross the nearer side facet first:
        // front before right, left before front, back before right, left
        // before back (labels: 0 left, 1 right, 2 front, 3 back, 4 bottom)
        let top_seqs: Vec<Vec<usize>> = u
            .events
            .iter()
            .filter(|e| e.facet == TOP)
            .map(|e| e.seq.iter().map(|f| f.0).collect())
            .collect();
        for want in [
            vec![4, 2, 1, 5],
            vec![4, 0, 2, 5],
            vec![4, 3, 1, 5],
            vec![4, 0, 3, 5],
        ] {
            assert!(top_seqs.contains(&want), "missing wrap route {want:?} in {top_seqs:?}");
        }
        // the mirror-ordered routes must not fire
        for absent in [
            vec![4, 1, 2, 5],
            vec![4, 2, 0, 5],
            vec![4, 1, 3, 5],
            vec![4, 3, 0, 5],
        ] {
            assert!(!top_seqs.contains(&absent), "spurious route {absent:?}");
        }
    }

    #[test]
    fn cached_event_data_equals_final_recomputation() {
        let c = cube_complex();
        let t = tol();
        let mut u = Unfolder::new_single_ambient(&c, &t, &va(&[0.3, 0.4, 0.0])).unwrap();
        u.run().unwrap();
        for e in &u.events {
            let (pf, pm) = match e.from_member {
                Some(x) => x,
                None => continue,
            };
            if e.radius == 0.0 {
                continue;
            }
            let facet = u.complex.facet(pf);
            let row = facet
                .ridge_of_row
                .iter()
                .position(|r| Some(*r) == e.ridge)
                .unwrap();
            let nus = u.images(pf);
            let omega = &u.members[pf.0][pm].nu;
            let (r, rho) = ridge_radius(&facet.poly, row, &nus, omega, &t).unwrap();
            assert!((r - e.radius).abs() < 1e-9, "radius drifted after later commits");
            let (map, _) = u.atlas.across(u.complex, e.ridge.unwrap(), pf).unwrap();
            assert!((map.apply(&rho) - &e.rho).norm() < 1e-9, "contact point drifted");
        }
    }

    #[test]
    fn ridge_source_seeds_both_facets() {
        let c = cube_complex();
        let t = tol();
        // on the front/bottom edge: facets 2 and 4 are incident, 2 is home
        let mut u = Unfolder::new_single_ambient(&c, &t, &va(&[0.5, 0.0, 0.0])).unwrap();
        assert_eq!(u.events.len(), 2);
        assert_eq!(u.events[0].facet, FacetId(2));
        assert_eq!(u.events[0].radius, 0.0);
        assert!(u.events[0].angle_seq.is_empty());
        assert_eq!(u.events[1].facet, BOTTOM);
        assert_eq!(u.events[1].radius, 0.0);
        assert!(u.events[1].angle_seq.is_empty());
        assert_eq!(u.events[1].seq, vec![FacetId(2), BOTTOM]);
        u.run().unwrap();
        let f = u.foldout(0).unwrap();
        let total: f64 = f
            .cells
            .iter()
            .map(|cell| {
                let pts = cell.vertices.clone();
                polygon_area(&pts)
            })
            .sum();
        assert!((total - 6.0).abs() < 1e-7, "ridge source still covers the surface");
    }

    #[test]
    fn corner_and_outside_sources_fail() {
        let c = cube_complex();
        let t = tol();
        assert!(matches!(
            Unfolder::new_single_ambient(&c, &t, &va(&[0.0, 0.0, 0.0])),
            Err(Error::SourceOnWarpedFace)
        ));
        assert!(matches!(
            Unfolder::new_single_ambient(&c, &t, &va(&[0.5, 0.5, -0.2])),
            Err(Error::PointOutsideFacet { .. })
        ));
        assert!(matches!(
            Unfolder::new_single_ambient(&c, &t, &va(&[0.5, 0.5, 0.5])),
            Err(Error::PointOutsideFacet { .. })
        ));
    }

    #[test]
    fn duplicate_sources_rejected() {
        let c = cube_complex();
        let t = tol();
        let p = va(&[0.5, 0.5]);
        let q = va(&[0.5, 0.5]);
        assert!(matches!(
            Unfolder::new_multi(&c, &t, &[(BOTTOM, p), (BOTTOM, q)]),
            Err(Error::DuplicateSources)
        ));
    }

    #[test]
    fn non_minimal_event_is_rejected() {
        let c = cube_complex();
        let t = tol();
        let mut u = Unfolder::new_single_ambient(&c, &t, &va(&[0.3, 0.4, 0.0])).unwrap();
        // the minimal first event leaves through the nearest edge (x = 0,
        // toward facet 0); pick a different candidate on purpose
        let wrong = u
            .potentials
            .iter()
            .find(|p| p.target_facet == FacetId(1))
            .map(|p| (p.facet, p.ridge, p.member))
            .unwrap();
        assert!(matches!(
            u.process_event(wrong.0, wrong.1, wrong.2),
            Err(Error::NotMinimal)
        ));
        let right = {
            let i = u.choose_minimal().unwrap();
            let p = &u.potentials[i];
            (p.facet, p.ridge, p.member)
        };
        u.process_event(right.0, right.1, right.2).unwrap();
        assert_eq!(u.events.len(), 2);
        assert_eq!(u.events[1].facet, FacetId(0), "nearest edge first");
    }

    #[test]
    fn iteration_cap_is_enforced() {
        let c = cube_complex();
        let mut t = tol();
        t.iteration_cap = 3;
        let mut u = Unfolder::new_single_ambient(&c, &t, &va(&[0.5, 0.5, 0.0])).unwrap();
        assert!(matches!(u.run(), Err(Error::IterationCapExceeded(_))));
    }

    #[test]
    fn vistal_tree_of_center_cube() {
        let c = cube_complex();
        let t = tol();
        let mut u = Unfolder::new_single_ambient(&c, &t, &va(&[0.5, 0.5, 0.0])).unwrap();
        u.run().unwrap();
        let tree = u.vistal_tree(0).unwrap();
        assert_eq!(tree.nodes.len(), 17);
        assert!(tree.nodes[0].parent.is_none());
        assert_eq!(tree.nodes[0].sequence.len(), 1);
        for (i, n) in tree.nodes.iter().enumerate() {
            if let Some(p) = n.parent {
                assert!(p < i || tree.nodes[p].radius <= n.radius + 1e-9);
                assert_eq!(tree.nodes[p].sequence[..], n.sequence[..n.sequence.len() - 1]);
            }
        }
    }

    #[test]
    fn orphan_events_are_detected() {
        let c = cube_complex();
        let t = tol();
        let mut u = Unfolder::new_single_ambient(&c, &t, &va(&[0.5, 0.5, 0.0])).unwrap();
        u.run().unwrap();
        // drop an interior node of the tree: some top event's parent
        let keep: Vec<&Event> = u
            .events
            .iter()
            .filter(|e| e.seq.len() != 2)
            .collect();
        assert!(matches!(
            build_vistal_tree(&keep, &c),
            Err(Error::OrphanEvent(_))
        ));
    }

    #[test]
    fn cut_locus_of_center_cube() {
        let c = cube_complex();
        let t = tol();
        let mut u = Unfolder::new_single_ambient(&c, &t, &va(&[0.5, 0.5, 0.0])).unwrap();
        u.run().unwrap();
        let cl = u.cut_locus();
        for (label, pieces) in &cl.per_facet {
            match *label {
                4 => assert_eq!(pieces.len(), 0, "source facet has no ties"),
                5 => {
                    // four half-diagonals meeting at the top center
                    assert_eq!(pieces.len(), 4);
                    for p in pieces {
                        assert!(p
                            .iter()
                            .any(|v| (v - va(&[0.5, 0.5])).norm() < 1e-7));
                    }
                }
                _ => {
                    // side facets: their two vertical edges
                    assert_eq!(pieces.len(), 2, "facet {label}");
                    for p in pieces {
                        assert_eq!(p.len(), 2);
                        assert!((p[0][1] - p[1][1]).abs() < 1e-9, "vertical edge {p:?}");
                    }
                }
            }
        }
        // skeleton of a cube facet: its four corners
        for (_, pieces) in &cl.skeleton {
            assert_eq!(pieces.len(), 4);
        }
    }

    #[test]
    fn two_sources_split_the_cube() {
        let c = cube_complex();
        let t = tol();
        // centers of bottom and top
        let mut u = Unfolder::new_multi(
            &c,
            &t,
            &[(BOTTOM, va(&[0.5, 0.5])), (TOP, va(&[0.5, 0.5]))],
        )
        .unwrap();
        u.run().unwrap();
        let cells = u.voronoi_cells().unwrap();
        let mut area = [0.0f64; 2];
        for cell in &cells {
            area[cell.source_index] += polygon_area(&cell.vertices);
        }
        assert!((area[0] - 3.0).abs() < 1e-7, "areas {area:?}");
        assert!((area[1] - 3.0).abs() < 1e-7, "areas {area:?}");
    }
}
