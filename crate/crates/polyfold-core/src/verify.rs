//! Self-checks on finished unfoldings, shared by the command line and the
//! test suite. Every check is observational: it reads the committed state
//! and compares against quantities computed by independent means (exact
//! polygon intersection, brute-force path search, frame sampling), never
//! against the engine's own intermediates.

use crate::complex::{FacetComplex, FacetId};
use crate::config::Tolerances;
use crate::geodesic::{brute_force_distance, geodesic_distance};
use crate::hpoly::{for_each_subset, HPolytope, Halfspace};
use crate::jets::{
    angle_sequence, compare_angle_sequences, iterated_tangent_cone, jet_point,
    minimal_jet_frame,
};
use crate::linalg;
use crate::unfolder::{Foldout, Unfolder};
use crate::voronoi::{can_see, voronoi_cell, Visibility};
use crate::{Error, Result};
use nalgebra::DVector;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::cmp::Ordering;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn pass(name: &'static str, detail: String) -> Check {
        Check { name, passed: true, detail }
    }

    fn fail(name: &'static str, detail: String) -> Check {
        Check { name, passed: false, detail }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// random targets for the brute-force comparison; 0 disables it
    pub oracle_targets: usize,
    /// facet-sequence length cap for the brute-force search
    pub oracle_max_len: usize,
    pub seed: u64,
    /// points per [origin, vertex] segment in the star-shape check
    pub star_segments: usize,
    /// membership samples for the d >= 3 overlap check
    pub overlap_samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> VerifyOptions {
        VerifyOptions {
            oracle_targets: 100,
            oracle_max_len: 4,
            seed: 7,
            star_segments: 100,
            overlap_samples: 100_000,
        }
    }
}

/// Convex hull of a point cloud in H-form, by hyperplane enumeration over
/// (dim)-subsets. Quadratic-ish and only meant for small inputs.
pub fn hull_of_points(points: &[DVector<f64>], tol: &Tolerances) -> Result<HPolytope> {
    if points.is_empty() {
        return Err(Error::DegenerateInput("hull of no points".into()));
    }
    let dim = points[0].len();
    let eps = tol.eps_pt * 100.0;
    let mut rows: Vec<Halfspace> = Vec::new();
    for_each_subset(points.len(), dim, |idx| {
        let base = &points[idx[0]];
        let spans: Vec<DVector<f64>> =
            idx[1..].iter().map(|&i| &points[i] - base).collect();
        let normals = linalg::nullspace(&spans, dim, tol.eps_rank);
        if normals.len() != 1 {
            return;
        }
        for sign in [1.0, -1.0] {
            let n = &normals[0] * sign;
            let b = n.dot(base);
            if points.iter().all(|p| n.dot(p) <= b + eps)
                && !rows.iter().any(|h| (h.normal.dot(&n) - 1.0).abs() < 1e-9
                    && (h.offset - b).abs() < eps)
            {
                rows.push(Halfspace { normal: n, offset: b });
            }
        }
    });
    if rows.is_empty() {
        return Err(Error::DegenerateInput("points are not full-dimensional".into()));
    }
    Ok(HPolytope::with_ineqs(dim, rows))
}

/// Regular tetrahedron with vertices at four alternating corners of the
/// [-1,1] cube.
pub fn regular_tetrahedron() -> HPolytope {
    let rows = [
        [-1.0, -1.0, -1.0],
        [-1.0, 1.0, 1.0],
        [1.0, -1.0, 1.0],
        [1.0, 1.0, -1.0],
    ];
    let ineqs = rows
        .iter()
        .map(|a| Halfspace::unit(DVector::from_row_slice(a), 1.0, 1e-12).unwrap())
        .collect();
    HPolytope::with_ineqs(3, ineqs)
}

/// Hull of `n` near-unit random points.
pub fn random_hull(dim: usize, n: usize, rng: &mut StdRng, tol: &Tolerances) -> Result<HPolytope> {
    let points: Vec<DVector<f64>> = (0..n)
        .map(|_| {
            let mut p = DVector::from_fn(dim, |_, _| gaussian(rng));
            p /= p.norm();
            p * rng.random_range(0.85..1.15)
        })
        .collect();
    hull_of_points(&points, tol)
}

fn gaussian(rng: &mut StdRng) -> f64 {
    // Box-Muller; only means and symmetry matter here
    let u: f64 = rng.random_range(1e-12..1.0);
    let v: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    (-2.0 * u.ln()).sqrt() * v.cos()
}

/// Random point of a polytope given by its vertex list: a convex combination
/// with exponential weights.
fn random_point(vertices: &[DVector<f64>], rng: &mut StdRng) -> DVector<f64> {
    let dim = vertices[0].len();
    let mut weights: Vec<f64> = (0..vertices.len())
        .map(|_| -f64::ln(rng.random_range(1e-12..1.0)))
        .collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let mut p = DVector::zeros(dim);
    for (w, v) in weights.iter().zip(vertices) {
        p.axpy(*w, v, 1.0);
    }
    p
}

/// Radii nondecreasing along the processed log; angle sequences
/// lexicographically nondecreasing inside equal-radius runs.
pub fn check_order_ideal(u: &Unfolder) -> Check {
    let tol = &u.tol;
    for k in 1..u.events.len() {
        let prev = &u.events[k - 1];
        let cur = &u.events[k];
        let window = tol.eps_rad * (1.0 + prev.radius.abs());
        if cur.radius < prev.radius - window {
            return Check::fail(
                "order-ideal",
                format!(
                    "radius decreased at event {k}: {} after {}",
                    cur.radius, prev.radius
                ),
            );
        }
        if (cur.radius - prev.radius).abs() <= window
            && compare_angle_sequences(&prev.angle_seq, &cur.angle_seq, tol.eps_ang)
                == Ordering::Greater
        {
            return Check::fail(
                "order-ideal",
                format!("angle sequence decreased inside the equal-radius run at event {k}"),
            );
        }
    }
    Check::pass("order-ideal", format!("{} events in order", u.events.len()))
}

/// Every event's facet sequence is repetition-free and consecutive facets
/// share the recorded ridge.
pub fn check_sequences(u: &Unfolder) -> Check {
    for (k, e) in u.events.iter().enumerate() {
        let mut seen = std::collections::HashSet::new();
        if !e.seq.iter().all(|f| seen.insert(*f)) {
            return Check::fail("facet-sequences", format!("event {k} repeats a facet"));
        }
        if e.ridges.len() + 1 != e.seq.len() {
            return Check::fail(
                "facet-sequences",
                format!("event {k} has {} ridges for {} facets", e.ridges.len(), e.seq.len()),
            );
        }
        for (i, r) in e.ridges.iter().enumerate() {
            match u.complex.across(*r, e.seq[i]) {
                Ok(next) if next == e.seq[i + 1] => {}
                _ => {
                    return Check::fail(
                        "facet-sequences",
                        format!("event {k} step {i} does not cross its ridge"),
                    )
                }
            }
        }
    }
    Check::pass("facet-sequences", format!("{} sequences valid", u.events.len()))
}

/// Event count bounded by #facets times the largest image set.
pub fn check_event_count(u: &Unfolder) -> Check {
    let max_images = u.members.iter().map(Vec::len).max().unwrap_or(0);
    let bound = u.complex.facets.len() * max_images;
    if u.events.len() <= bound {
        Check::pass(
            "event-count",
            format!("{} events <= {} facets x {max_images}", u.events.len(), u.complex.facets.len()),
        )
    } else {
        Check::fail(
            "event-count",
            format!("{} events exceeds {bound}", u.events.len()),
        )
    }
}

/// Total cell volume equals the surface volume, within 1e-9 relative.
pub fn check_measure(complex: &FacetComplex, foldout: &Foldout, tol: &Tolerances) -> Check {
    let mut surface = 0.0;
    for f in &complex.facets {
        match f.poly.volume(tol) {
            Ok(v) => surface += v,
            Err(e) => return Check::fail("measure", format!("facet volume failed: {e}")),
        }
    }
    let mut unfolded = 0.0;
    for c in &foldout.cells {
        let hull = match hull_of_points(&c.vertices, tol) {
            Ok(h) => h,
            Err(e) => return Check::fail("measure", format!("cell hull failed: {e}")),
        };
        match hull.volume(tol) {
            Ok(v) => unfolded += v,
            Err(e) => return Check::fail("measure", format!("cell volume failed: {e}")),
        }
    }
    let rel = (surface - unfolded).abs() / surface.max(1e-300);
    if rel <= 1e-9 {
        Check::pass("measure", format!("surface {surface:.12} vs foldout {unfolded:.12}"))
    } else {
        Check::fail(
            "measure",
            format!("surface {surface:.12} vs foldout {unfolded:.12}, rel {rel:.3e}"),
        )
    }
}

/// Pairwise open-cell disjointness. Exact polygon intersection areas for
/// d = 2; sampled interior membership for higher d.
pub fn check_nonoverlap(
    foldout: &Foldout,
    tol: &Tolerances,
    opts: &VerifyOptions,
) -> Check {
    let hulls: Vec<HPolytope> = match foldout
        .cells
        .iter()
        .map(|c| hull_of_points(&c.vertices, tol))
        .collect::<Result<_>>()
    {
        Ok(h) => h,
        Err(e) => return Check::fail("nonoverlap", format!("cell hull failed: {e}")),
    };
    if foldout.dim == 2 {
        let boxes: Vec<([f64; 2], [f64; 2])> = foldout
            .cells
            .iter()
            .map(|c| {
                let mut lo = [f64::INFINITY; 2];
                let mut hi = [f64::NEG_INFINITY; 2];
                for v in &c.vertices {
                    for k in 0..2 {
                        lo[k] = lo[k].min(v[k]);
                        hi[k] = hi[k].max(v[k]);
                    }
                }
                (lo, hi)
            })
            .collect();
        let mut worst = 0.0f64;
        for i in 0..hulls.len() {
            for j in i + 1..hulls.len() {
                let (la, ha) = &boxes[i];
                let (lb, hb) = &boxes[j];
                if (0..2).any(|k| ha[k] < lb[k] - 1e-9 || hb[k] < la[k] - 1e-9) {
                    continue;
                }
                let area = match hulls[i].intersect(&hulls[j]).volume(tol) {
                    Ok(a) => a,
                    Err(e) => {
                        return Check::fail("nonoverlap", format!("intersection area failed: {e}"))
                    }
                };
                worst = worst.max(area);
                if area >= 1e-9 {
                    return Check::fail(
                        "nonoverlap",
                        format!("cells {i} and {j} share area {area:.3e}"),
                    );
                }
            }
        }
        Check::pass(
            "nonoverlap",
            format!("{} cell pairs, worst shared area {worst:.3e}", hulls.len() * (hulls.len().saturating_sub(1)) / 2),
        )
    } else {
        let mut rng = StdRng::seed_from_u64(opts.seed ^ 0x6f76_6572_6c61_70);
        for s in 0..opts.overlap_samples {
            let c = rng.random_range(0..foldout.cells.len());
            if foldout.cells[c].vertices.is_empty() {
                continue;
            }
            let x = random_point(&foldout.cells[c].vertices, &mut rng);
            let strictly_inside = hulls
                .iter()
                .filter(|h| h.min_slack(&x) > tol.eps_pt)
                .count();
            if strictly_inside > 1 {
                return Check::fail(
                    "nonoverlap",
                    format!("sample {s} lies in {strictly_inside} open cells"),
                );
            }
        }
        Check::pass(
            "nonoverlap",
            format!("{} membership samples, no point in two open cells", opts.overlap_samples),
        )
    }
}

/// Segments from the origin to every cell vertex stay inside the closed
/// foldout.
pub fn check_star_shaped(foldout: &Foldout, tol: &Tolerances, opts: &VerifyOptions) -> Check {
    let hulls: Vec<HPolytope> = match foldout
        .cells
        .iter()
        .map(|c| hull_of_points(&c.vertices, tol))
        .collect::<Result<_>>()
    {
        Ok(h) => h,
        Err(e) => return Check::fail("star-shaped", format!("cell hull failed: {e}")),
    };
    let eps = tol.eps_pt * 10.0;
    let mut vertices = 0usize;
    for c in &foldout.cells {
        for w in &c.vertices {
            vertices += 1;
            for k in 1..=opts.star_segments {
                let t = k as f64 / opts.star_segments as f64;
                let x = w * t;
                if !hulls.iter().any(|h| h.min_slack(&x) >= -eps) {
                    return Check::fail(
                        "star-shaped",
                        format!("segment point {t:.2} of |w|={:.6} left the foldout", w.norm()),
                    );
                }
            }
        }
    }
    Check::pass(
        "star-shaped",
        format!("{vertices} vertices x {} segment points inside", opts.star_segments),
    )
}

/// Chart distance to the source image equals unfolded distance to the
/// origin, on sampled cell points.
pub fn check_isometry(u: &Unfolder, source: usize, opts: &VerifyOptions) -> Check {
    let tol = &u.tol;
    let v = &u.sources[source].1;
    let mut rng = StdRng::seed_from_u64(opts.seed ^ 0x6973_6f6d);
    let mut sampled = 0usize;
    for e in &u.events {
        if e.source != source {
            continue;
        }
        let facet = u.complex.facet(e.facet);
        let images: Vec<DVector<f64>> = u.members[e.facet.0].iter().map(|m| m.nu.clone()).collect();
        let cell = match voronoi_cell(&facet.poly, &images, &e.nu, tol) {
            Ok(c) => c,
            Err(err) => return Check::fail("isometry", format!("cell of event failed: {err}")),
        };
        let verts = cell.vertices(tol);
        if verts.is_empty() {
            continue;
        }
        for _ in 0..5 {
            let w = random_point(&verts, &mut rng);
            let chart_dist = (&e.nu - &w).norm();
            let unfolded = e.unfold.apply(&w) - v;
            let err = (chart_dist - unfolded.norm()).abs();
            if err > 1e-9 * (1.0 + chart_dist) {
                return Check::fail(
                    "isometry",
                    format!("distance mismatch {err:.3e} in facet {}", facet.label),
                );
            }
            sampled += 1;
        }
    }
    Check::pass("isometry", format!("{sampled} sampled points agree"))
}

/// Closure of the finished sweep: re-derive visibility for every committed
/// image and every ridge of its facet, independently of the candidate lists
/// the loop maintained. A crossing that is still visible must already have
/// its folded image on the far side; otherwise a shorter route to somewhere
/// was never committed. Within each cell the committed image is nearest by
/// the bisector rows, so together this pins the pointwise minimum property.
pub fn check_mount(u: &Unfolder) -> Check {
    let tol = &u.tol;
    let mut crossings = 0usize;
    for f in &u.complex.facets {
        let nus: Vec<DVector<f64>> = u.members[f.id.0].iter().map(|m| m.nu.clone()).collect();
        if nus.is_empty() {
            return Check::fail("mount", format!("facet {} has no images", f.label));
        }
        for m in &u.members[f.id.0] {
            for row in 0..f.poly.ineqs.len() {
                let visible = match can_see(
                    &f.poly,
                    row,
                    &nus,
                    &m.nu,
                    Visibility::RidgeThroughFacet,
                    tol,
                ) {
                    Ok(v) => v,
                    Err(e) => return Check::fail("mount", format!("visibility failed: {e}")),
                };
                if !visible {
                    continue;
                }
                crossings += 1;
                let r = f.ridge_of_row[row];
                let (map, target) = match u.atlas.across(u.complex, r, f.id) {
                    Ok(m) => m,
                    Err(e) => return Check::fail("mount", format!("fold map failed: {e}")),
                };
                let folded = map.apply(&m.nu);
                if !u.members[target.0]
                    .iter()
                    .any(|t| (&t.nu - &folded).norm() <= tol.eps_pt)
                {
                    return Check::fail(
                        "mount",
                        format!(
                            "visible crossing of facet {} row {row} has no image on the far side",
                            f.label
                        ),
                    );
                }
            }
        }
    }
    Check::pass("mount", format!("{crossings} visible crossings all answered"))
}

/// Engine distances against the brute-force search on random targets.
pub fn check_oracle(u: &Unfolder, opts: &VerifyOptions) -> Check {
    let tol = &u.tol;
    let (src_facet, src_point) = (&u.sources[0].0, &u.sources[0].1);
    let mut rng = StdRng::seed_from_u64(opts.seed ^ 0x6f72_6163_6c65);
    let mut worst = 0.0f64;
    for k in 0..opts.oracle_targets {
        let f = FacetId(rng.random_range(0..u.complex.facets.len()));
        let facet = u.complex.facet(f);
        let w = random_point(&facet.vertices, &mut rng);
        let engine = match geodesic_distance(u, f, &w) {
            Ok(d) => d,
            Err(e) => return Check::fail("oracle", format!("engine distance failed: {e}")),
        };
        let oracle = match brute_force_distance(
            u.complex,
            tol,
            (*src_facet, src_point),
            (f, &w),
            opts.oracle_max_len,
        ) {
            Ok(d) => d,
            Err(e) => return Check::fail("oracle", format!("brute force failed: {e}")),
        };
        let err = (engine - oracle).abs();
        worst = worst.max(err / (1.0 + engine.min(oracle)));
        if err > 1e-6 * (1.0 + engine.min(oracle)) {
            return Check::fail(
                "oracle",
                format!(
                    "target {k} in facet {}: engine {engine:.9} vs brute force {oracle:.9}",
                    facet.label
                ),
            );
        }
    }
    Check::pass(
        "oracle",
        format!("{} targets, worst relative gap {worst:.3e}", opts.oracle_targets),
    )
}

/// Run every structural check on one complex with one source, returning the
/// list of results. The source defaults to the inradius center of the first
/// facet.
pub fn verify_complex(
    complex: &FacetComplex,
    tol: &Tolerances,
    source: Option<(FacetId, DVector<f64>)>,
    opts: &VerifyOptions,
) -> Result<Vec<Check>> {
    let (facet, point) = match source {
        Some(s) => s,
        None => {
            let f = FacetId(0);
            let center = complex
                .facet(f)
                .poly
                .chebyshev(tol)
                .ok_or(Error::EmptySet)?
                .0;
            (f, center)
        }
    };
    let mut u = Unfolder::new_single(complex, tol, facet, point)?;
    u.run()?;
    let foldout = u.foldout(0)?;
    let mut checks = vec![
        check_order_ideal(&u),
        check_sequences(&u),
        check_event_count(&u),
        check_measure(complex, &foldout, tol),
        check_nonoverlap(&foldout, tol, opts),
        check_star_shaped(&foldout, tol, opts),
        check_isometry(&u, 0, opts),
        check_mount(&u),
    ];
    if opts.oracle_targets > 0 {
        checks.push(check_oracle(&u, opts));
    }
    Ok(checks)
}

/// Sample one complete jet frame by walking random directions of the
/// iterated tangent cones. `top` carries the precomputed extreme rays and
/// lineality of the first cone; deeper cones are sampled by rejection.
fn sample_jet_frame(
    v: &HPolytope,
    x: &DVector<f64>,
    top: &(Vec<DVector<f64>>, Vec<DVector<f64>>),
    rng: &mut StdRng,
    tol: &Tolerances,
) -> Result<Option<Vec<DVector<f64>>>> {
    let dim = v.dim;
    let mut frame: Vec<DVector<f64>> = Vec::new();
    loop {
        let cone = iterated_tangent_cone(v, x, &frame, tol)?;
        if cone.is_trivial(tol) {
            return Ok(Some(frame));
        }
        let dir = if frame.is_empty() {
            let (rays, lin) = top;
            let mut d = DVector::zeros(dim);
            for r in rays {
                d.axpy(rng.random_range(0.0..1.0), r, 1.0);
            }
            for l in lin {
                d.axpy(rng.random_range(-1.0..1.0), l, 1.0);
            }
            if d.norm() <= 1e-9 {
                return Ok(None);
            }
            d.normalize()
        } else {
            let basis = linalg::gram_schmidt(&cone.eqs, tol.eps_rank);
            let mut found = None;
            'tries: for _ in 0..200 {
                let mut d = DVector::from_fn(dim, |_, _| gaussian(rng));
                for b in &basis {
                    let c = d.dot(b);
                    d.axpy(-c, b, 1.0);
                }
                if d.norm() <= 1e-9 {
                    continue;
                }
                d = d.normalize();
                for a in &cone.ineqs {
                    if a.dot(&d) > 0.0 {
                        continue 'tries;
                    }
                }
                found = Some(d);
                break;
            }
            match found {
                Some(d) => d,
                None => return Ok(None),
            }
        };
        frame.push(dir);
    }
}

/// Random bounded polytope, a boundary point on a random face, and an outer
/// support vector from its normal cone.
fn random_support_instance(
    dim: usize,
    rng: &mut StdRng,
    tol: &Tolerances,
) -> Option<(HPolytope, DVector<f64>, DVector<f64>)> {
    let mut poly = boxpoly_sym(dim);
    for _ in 0..dim {
        let mut a = DVector::from_fn(dim, |_, _| gaussian(rng));
        if a.norm() <= 1e-9 {
            return None;
        }
        a = a.normalize();
        let b = rng.random_range(0.2..0.95);
        poly.ineqs.push(Halfspace { normal: a, offset: b });
    }
    let (poly, _) = poly.remove_redundant(tol);
    // a point in the relative interior of a random face: pin a few rows
    let k = rng.random_range(1..=dim.min(poly.ineqs.len()));
    let mut rows: Vec<usize> = (0..poly.ineqs.len()).collect();
    for i in 0..k {
        let j = rng.random_range(i..rows.len());
        rows.swap(i, j);
    }
    let mut face = poly.clone();
    for &r in &rows[..k] {
        let h = &poly.ineqs[r];
        face.eqs.push((h.normal.clone(), h.offset));
    }
    let x = face.chebyshev(tol)?.0;
    if !poly.contains(&x, tol.eps_pt * 10.0) {
        return None;
    }
    // outer support: nonnegative combination of the active normals
    let act = tol.eps_pt * 10.0;
    let mut nu = DVector::zeros(dim);
    for h in &poly.ineqs {
        if h.slack(&x) <= act {
            nu.axpy(rng.random_range(0.1..1.0), &h.normal, 1.0);
        }
    }
    if nu.norm() <= 1e-6 {
        return None;
    }
    Some((poly, x, nu.normalize()))
}

fn boxpoly_sym(dim: usize) -> HPolytope {
    crate::hpoly::boxpoly(&vec![-1.0; dim], &vec![1.0; dim])
}

/// Minimality of constructed jet frames against sampled competitors.
///
/// Two claims per instance: the constructed angle sequence is
/// lexicographically <= every sampled frame's, and the jet curve realizes
/// the infinitesimal order metrically. The curve lives at the frame's base
/// point with the unit support vector nu as the reference, so the distance
/// compared is |nu - eps J(eps)|. At a fixed eps the metric statement is
/// quantitative: the constructed curve can be beaten by at most the
/// sub-leading slack 4 eps^2 (plus angle-tie and rounding noise), and where
/// the leading angle gap dominates that slack the strict order must hold
/// outright.
pub fn check_jet_minimality(
    instances: usize,
    frames_per_instance: usize,
    seed: u64,
    tol: &Tolerances,
) -> Check {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut done = 0usize;
    let mut frames_checked = 0usize;
    while done < instances {
        let dim = 2 + done % 3;
        let Some((poly, x, nu)) = random_support_instance(dim, &mut rng, tol) else {
            continue;
        };
        let minimal = match minimal_jet_frame(&poly, &x, &nu, tol) {
            Ok(f) => f,
            Err(e) => return Check::fail("jet-minimality", format!("construction failed: {e}")),
        };
        let min_seq = angle_sequence(&nu, &minimal);
        let top = match iterated_tangent_cone(&poly, &x, &[], tol) {
            Ok(c) => (c.extreme_rays(tol), c.lineality(tol)),
            Err(e) => return Check::fail("jet-minimality", format!("tangent cone failed: {e}")),
        };
        let eps_values = [1e-3, 1e-4];
        let curve_dist = |frame: &[DVector<f64>], eps: f64| {
            if frame.is_empty() {
                nu.norm()
            } else {
                (&nu - jet_point(frame, eps) * eps).norm()
            }
        };
        let min_dists: Vec<f64> =
            eps_values.iter().map(|&eps| curve_dist(&minimal, eps)).collect();
        for _ in 0..frames_per_instance {
            let sampled = match sample_jet_frame(&poly, &x, &top, &mut rng, tol) {
                Ok(Some(f)) => f,
                Ok(None) => continue,
                Err(e) => {
                    return Check::fail("jet-minimality", format!("sampling failed: {e}"))
                }
            };
            let seq = angle_sequence(&nu, &sampled);
            if compare_angle_sequences(&min_seq, &seq, tol.eps_ang) == Ordering::Greater {
                return Check::fail(
                    "jet-minimality",
                    format!(
                        "sampled frame beats the construction lexicographically (dim {dim}, instance {done})"
                    ),
                );
            }
            for (i, &eps) in eps_values.iter().enumerate() {
                let d_min = min_dists[i];
                let d_smp = curve_dist(&sampled, eps);
                let slack = 4.0 * eps * eps + tol.eps_ang * eps + 1e-12;
                if d_min > d_smp + slack {
                    return Check::fail(
                        "jet-minimality",
                        format!(
                            "sampled curve beats the construction by {:.3e} at eps {eps} (dim {dim})",
                            d_min - d_smp
                        ),
                    );
                }
                // where the first angle gap dominates, the order is strict
                let gap = seq.first().copied().unwrap_or(0.0)
                    - min_seq.first().copied().unwrap_or(0.0);
                if gap > 8.0 * eps && d_min >= d_smp {
                    return Check::fail(
                        "jet-minimality",
                        format!(
                            "leading angle gap {gap:.3e} did not show up metrically at eps {eps}"
                        ),
                    );
                }
            }
            frames_checked += 1;
        }
        done += 1;
    }
    Check::pass(
        "jet-minimality",
        format!("{instances} instances, {frames_checked} sampled frames"),
    )
}
