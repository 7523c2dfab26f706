//! Input parsing and output serialization.
//!
//! Numbers are printed with 17 significant digits so the decimal text
//! round-trips to the same double. The SVG export reuses the exact same
//! strings as the JSON, so the two files agree to the last bit.

use crate::complex::{AbstractFacet, FacetComplex, FacetId, Gluing};
use crate::config::Tolerances;
use crate::geodesic::GeodesicPath;
use crate::hpoly::{HPolytope, Halfspace};
use crate::unfolder::{CutLocus, Foldout, GvdCell, VistalTree};
use crate::{Error, Result};
use nalgebra::DVector;
use serde::Deserialize;
use std::fmt::Write as _;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_vec(v: &DVector<f64>) -> String {
    let mut s = String::from("[");
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(&fmt_f64(*x));
    }
    s.push(']');
    s
}

fn fmt_slice(v: &[f64]) -> String {
    fmt_vec(&DVector::from_vec(v.to_vec()))
}

#[derive(Deserialize)]
struct HalfspaceIn {
    a: Vec<f64>,
    b: f64,
}

#[derive(Deserialize)]
struct HpolyIn {
    dim: usize,
    halfspaces: Vec<HalfspaceIn>,
}

#[derive(Deserialize)]
struct FacetIn {
    id: usize,
    halfspaces: Vec<HalfspaceIn>,
    vertices: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct GluingIn {
    ridge_of: (usize, Vec<usize>),
    to: (usize, Vec<usize>),
}

#[derive(Deserialize)]
struct ComplexIn {
    dim: usize,
    facets: Vec<FacetIn>,
    gluings: Vec<GluingIn>,
}

pub enum ParsedInput {
    /// boundary of an embedded polytope in ambient dimension d+1
    Embedded(HPolytope),
    /// abstract glued complex of surface dimension d
    Abstract(Vec<AbstractFacet>, Vec<Gluing>),
}

fn halfspaces(dim: usize, hs: &[HalfspaceIn], tol: &Tolerances) -> Result<Vec<Halfspace>> {
    let mut out = Vec::with_capacity(hs.len());
    for h in hs {
        if h.a.len() != dim {
            return Err(Error::Parse(format!(
                "halfspace normal has {} entries, dim is {dim}",
                h.a.len()
            )));
        }
        let a = DVector::from_vec(h.a.clone());
        match Halfspace::unit(a, h.b, tol.eps_rank) {
            Some(h) => out.push(h),
            None => return Err(Error::Parse("zero halfspace normal".into())),
        }
    }
    Ok(out)
}

/// Parse an input file, telling the two schemas apart by their keys.
pub fn parse_input(text: &str, tol: &Tolerances) -> Result<ParsedInput> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("input is not a JSON object".into()))?;
    if obj.contains_key("facets") {
        let c: ComplexIn =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut parts = Vec::with_capacity(c.facets.len());
        for f in &c.facets {
            let mut poly = HPolytope::new(c.dim);
            poly.ineqs = halfspaces(c.dim, &f.halfspaces, tol)?;
            let vertices = f
                .vertices
                .iter()
                .map(|p| {
                    if p.len() != c.dim {
                        return Err(Error::Parse(format!(
                            "vertex has {} coordinates, dim is {}",
                            p.len(),
                            c.dim
                        )));
                    }
                    Ok(DVector::from_vec(p.clone()))
                })
                .collect::<Result<Vec<_>>>()?;
            parts.push(AbstractFacet { label: f.id, poly, vertices });
        }
        let gluings = c
            .gluings
            .iter()
            .map(|g| Gluing {
                facet_a: g.ridge_of.0,
                verts_a: g.ridge_of.1.clone(),
                facet_b: g.to.0,
                verts_b: g.to.1.clone(),
            })
            .collect();
        Ok(ParsedInput::Abstract(parts, gluings))
    } else if obj.contains_key("halfspaces") {
        let p: HpolyIn =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut poly = HPolytope::new(p.dim);
        poly.ineqs = halfspaces(p.dim, &p.halfspaces, tol)?;
        Ok(ParsedInput::Embedded(poly))
    } else {
        Err(Error::Parse(
            "expected a \"halfspaces\" polytope or a \"facets\" complex".into(),
        ))
    }
}

pub fn build_complex(input: &ParsedInput, tol: &Tolerances) -> Result<FacetComplex> {
    match input {
        ParsedInput::Embedded(poly) => FacetComplex::from_polytope(poly, tol),
        ParsedInput::Abstract(parts, gluings) => FacetComplex::from_parts(parts, gluings, tol),
    }
}

/// Parse "facet=<id>;point=[x,...]".
pub fn parse_source_spec(s: &str) -> Result<(usize, Vec<f64>)> {
    let mut facet = None;
    let mut point = None;
    for part in s.split(';') {
        let part = part.trim();
        if let Some(rest) = part.strip_prefix("facet=") {
            facet = Some(
                rest.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad facet id: {e}")))?,
            );
        } else if let Some(rest) = part.strip_prefix("point=") {
            point = Some(
                serde_json::from_str::<Vec<f64>>(rest.trim())
                    .map_err(|e| Error::Parse(format!("bad point: {e}")))?,
            );
        } else if !part.is_empty() {
            return Err(Error::Parse(format!("unknown source field {part:?}")));
        }
    }
    match (facet, point) {
        (Some(f), Some(p)) => Ok((f, p)),
        _ => Err(Error::Parse(
            "source must be \"facet=<id>;point=[...]\"".into(),
        )),
    }
}

/// Resolve a source or target specification against a built complex. The
/// point may be given in the facet's chart (d coordinates) or, for embedded
/// input, in ambient coordinates (d+1); either way it must lie on the facet.
pub fn resolve_point(
    complex: &FacetComplex,
    label: usize,
    point: &[f64],
    tol: &Tolerances,
) -> Result<(FacetId, DVector<f64>)> {
    let fid = complex
        .facet_by_label(label)
        .ok_or_else(|| Error::Parse(format!("no facet with id {label}")))?;
    let facet = complex.facet(fid);
    let d = complex.surface_dim;
    let chart_pt = if point.len() == d {
        DVector::from_vec(point.to_vec())
    } else if point.len() == d + 1 {
        let chart = facet.chart.as_ref().ok_or_else(|| {
            Error::Parse(format!(
                "ambient coordinates need embedded input; facet {label} has a {d}-dimensional chart"
            ))
        })?;
        let p = DVector::from_vec(point.to_vec());
        let q = chart.to_chart(&p);
        let residual = (chart.to_ambient(&q) - &p).norm();
        if residual > 1e-7 {
            return Err(Error::PointOutsideFacet { facet: label, slack: -residual });
        }
        q
    } else {
        return Err(Error::Parse(format!(
            "point has {} coordinates; facet {label} expects {d} (chart) or {} (ambient)",
            point.len(),
            d + 1
        )));
    };
    let slack = facet.poly.min_slack(&chart_pt);
    if slack < -tol.eps_slack {
        return Err(Error::PointOutsideFacet { facet: label, slack });
    }
    Ok((fid, chart_pt))
}

pub fn write_distance(distance: f64, paths: Option<&[GeodesicPath]>) -> String {
    let mut s = String::new();
    let _ = write!(s, "{{\"distance\":{}", fmt_f64(distance));
    if let Some(paths) = paths {
        s.push_str(",\"paths\":[");
        for (i, p) in paths.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(
                s,
                "{{\"length\":{},\"facets\":[{}],\"points\":[",
                fmt_f64(p.length),
                p.facets
                    .iter()
                    .map(|f| f.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            );
            for (j, pt) in p.points.iter().enumerate() {
                if j > 0 {
                    s.push(',');
                }
                let _ = write!(
                    s,
                    "{{\"facet\":{},\"point\":{}}}",
                    pt.facet,
                    fmt_vec(&pt.point)
                );
            }
            s.push_str("]}");
        }
        s.push(']');
    }
    s.push('}');
    s
}

pub fn write_foldout(f: &Foldout) -> String {
    let mut s = String::new();
    let _ = write!(s, "{{\"dim\":{},\"origin\":{},\"cells\":[", f.dim, fmt_vec(&f.origin));
    for (i, c) in f.cells.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(
            s,
            "{{\"facet\":{},\"source_image\":{},\"facet_sequence\":[{}],\"vertices\":[{}]}}",
            c.facet,
            fmt_vec(&c.source_image),
            c.facet_sequence
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(","),
            c.vertices.iter().map(fmt_vec).collect::<Vec<_>>().join(","),
        );
    }
    s.push_str("],\"events\":[");
    for (i, e) in f.events.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let ridge = match e.ridge {
            Some(r) => r.to_string(),
            None => "null".into(),
        };
        let _ = write!(
            s,
            "{{\"facet\":{},\"nu\":{},\"radius\":{},\"event_point\":{},\"angle_seq\":{},\"ridge\":{}}}",
            e.facet,
            fmt_vec(&e.nu),
            fmt_f64(e.radius),
            fmt_vec(&e.event_point),
            fmt_slice(&e.angle_seq),
            ridge,
        );
    }
    s.push_str("]}");
    s
}

pub fn write_gvd(sources: &[(usize, Vec<f64>)], cells: &[GvdCell]) -> String {
    let mut s = String::from("{\"sources\":[");
    for (i, (facet, point)) in sources.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "{{\"facet\":{},\"point\":{}}}", facet, fmt_slice(point));
    }
    s.push_str("],\"cells\":[");
    for (i, c) in cells.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(
            s,
            "{{\"facet\":{},\"source_index\":{},\"vertices\":[{}]}}",
            c.facet,
            c.source_index,
            c.vertices.iter().map(fmt_vec).collect::<Vec<_>>().join(","),
        );
    }
    s.push_str("]}");
    s
}

pub fn write_cut_locus(cl: &CutLocus, dim: usize) -> String {
    let mut s = String::new();
    let _ = write!(s, "{{\"dim\":{},\"pieces\":[", dim);
    let mut first = true;
    for (facet, pieces) in &cl.per_facet {
        for p in pieces {
            if !first {
                s.push(',');
            }
            first = false;
            let _ = write!(
                s,
                "{{\"facet\":{},\"vertices\":[{}]}}",
                facet,
                p.iter().map(fmt_vec).collect::<Vec<_>>().join(","),
            );
        }
    }
    s.push_str("],\"skeleton\":[");
    let mut first = true;
    for (facet, pieces) in &cl.skeleton {
        for p in pieces {
            if !first {
                s.push(',');
            }
            first = false;
            let _ = write!(
                s,
                "{{\"facet\":{},\"vertices\":[{}]}}",
                facet,
                p.iter().map(fmt_vec).collect::<Vec<_>>().join(","),
            );
        }
    }
    s.push_str("]}");
    s
}

pub fn write_vistal(t: &VistalTree) -> String {
    let mut s = String::from("{\"nodes\":[");
    for (i, n) in t.nodes.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let parent = match n.parent {
            Some(p) => p.to_string(),
            None => "null".into(),
        };
        let _ = write!(
            s,
            "{{\"facet\":{},\"sequence\":[{}],\"radius\":{},\"parent\":{}}}",
            n.facet,
            n.sequence
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(","),
            fmt_f64(n.radius),
            parent,
        );
    }
    s.push_str("]}");
    s
}

/// Vertices of a convex polygon in drawing order.
fn polygon_order(pts: &[DVector<f64>]) -> Vec<usize> {
    if pts.is_empty() {
        return Vec::new();
    }
    let n = pts.len() as f64;
    let cx = pts.iter().map(|p| p[0]).sum::<f64>() / n;
    let cy = pts.iter().map(|p| p[1]).sum::<f64>() / n;
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&i, &j| {
        let ai = (pts[i][1] - cy).atan2(pts[i][0] - cx);
        let aj = (pts[j][1] - cy).atan2(pts[j][0] - cx);
        ai.partial_cmp(&aj).unwrap()
    });
    idx
}

/// A planar foldout as SVG: cells as polygons, the source at the origin,
/// and the foldout's outer boundary (the points with two shortest paths
/// back to the source) stroked separately. Coordinates reuse the JSON
/// number strings.
pub fn write_svg_foldout(f: &Foldout, eps: f64) -> String {
    assert_eq!(f.dim, 2, "SVG export is planar only");
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for c in &f.cells {
        for v in &c.vertices {
            for k in 0..2 {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
    }
    if !lo[0].is_finite() {
        lo = [-1.0, -1.0];
        hi = [1.0, 1.0];
    }
    let margin = 0.05 * ((hi[0] - lo[0]).max(hi[1] - lo[1])).max(1.0);
    let (w, h) = (hi[0] - lo[0] + 2.0 * margin, hi[1] - lo[1] + 2.0 * margin);

    // boundary edges appear in exactly one cell
    let key = |p: &DVector<f64>| -> (i64, i64) {
        ((p[0] / eps).round() as i64, (p[1] / eps).round() as i64)
    };
    let mut edge_count: std::collections::HashMap<((i64, i64), (i64, i64)), usize> =
        std::collections::HashMap::new();
    let mut cell_rings: Vec<Vec<usize>> = Vec::new();
    for c in &f.cells {
        let ring = polygon_order(&c.vertices);
        for i in 0..ring.len() {
            let a = key(&c.vertices[ring[i]]);
            let b = key(&c.vertices[ring[(i + 1) % ring.len()]]);
            let e = if a <= b { (a, b) } else { (b, a) };
            *edge_count.entry(e).or_insert(0) += 1;
        }
        cell_rings.push(ring);
    }

    let mut s = String::new();
    let _ = write!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
        fmt_f64(lo[0] - margin),
        fmt_f64(-(hi[1] + margin)),
        fmt_f64(w),
        fmt_f64(h),
    );
    s.push_str("<g transform=\"scale(1,-1)\">\n");
    for (c, ring) in f.cells.iter().zip(&cell_rings) {
        s.push_str("<polygon points=\"");
        for (k, &i) in ring.iter().enumerate() {
            if k > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{},{}", fmt_f64(c.vertices[i][0]), fmt_f64(c.vertices[i][1]));
        }
        let _ = write!(
            s,
            "\" fill=\"#dfe8f5\" stroke=\"#5b7fb5\" stroke-width=\"{}\"/>\n",
            fmt_f64(0.004 * w.max(h)),
        );
    }
    // outer boundary: the cut locus seen from the unfolded side
    for (c, ring) in f.cells.iter().zip(&cell_rings) {
        for i in 0..ring.len() {
            let p = &c.vertices[ring[i]];
            let q = &c.vertices[ring[(i + 1) % ring.len()]];
            let (a, b) = (key(p), key(q));
            let e = if a <= b { (a, b) } else { (b, a) };
            if edge_count[&e] == 1 {
                let _ = write!(
                    s,
                    "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#c0392b\" stroke-width=\"{}\"/>\n",
                    fmt_f64(p[0]),
                    fmt_f64(p[1]),
                    fmt_f64(q[0]),
                    fmt_f64(q[1]),
                    fmt_f64(0.008 * w.max(h)),
                );
            }
        }
    }
    let _ = write!(
        s,
        "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#2c3e50\"/>\n",
        fmt_f64(f.origin[0]),
        fmt_f64(f.origin[1]),
        fmt_f64(0.012 * w.max(h)),
    );
    s.push_str("</g>\n</svg>\n");
    s
}

/// Diagnostic picture of a planar Voronoi diagram: every facet chart drawn
/// side by side, cells colored by source. Not a development of the surface,
/// just a readable overlay.
pub fn write_svg_gvd(complex: &FacetComplex, cells: &[GvdCell]) -> String {
    assert_eq!(complex.surface_dim, 2, "SVG export is planar only");
    const PALETTE: [&str; 8] = [
        "#7fb3d5", "#f5b041", "#82e0aa", "#d98880", "#c39bd3", "#76d7c4", "#f7dc6f", "#aab7b8",
    ];
    // one horizontal slot per facet, in label order
    let mut labels: Vec<usize> = complex.facets.iter().map(|f| f.label).collect();
    labels.sort_unstable();
    let mut offset = std::collections::HashMap::new();
    let mut cursor = 0.0f64;
    let mut height = 0.0f64;
    let margin = 0.25;
    for &label in &labels {
        let f = complex.facet(complex.facet_by_label(label).unwrap());
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for v in &f.vertices {
            for k in 0..2 {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        offset.insert(label, (cursor - lo[0], -lo[1]));
        cursor += hi[0] - lo[0] + margin;
        height = height.max(hi[1] - lo[1]);
    }
    let mut s = String::new();
    let _ = write!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
        -margin,
        -margin,
        cursor + margin,
        height + 2.0 * margin,
    );
    for c in cells {
        let (dx, dy) = offset[&c.facet];
        let shifted: Vec<DVector<f64>> = c
            .vertices
            .iter()
            .map(|v| DVector::from_vec(vec![v[0] + dx, v[1] + dy]))
            .collect();
        let ring = polygon_order(&shifted);
        s.push_str("<polygon points=\"");
        for (k, &i) in ring.iter().enumerate() {
            if k > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{:.6},{:.6}", shifted[i][0], shifted[i][1]);
        }
        let _ = write!(
            s,
            "\" fill=\"{}\" stroke=\"#34495e\" stroke-width=\"0.01\"/>\n",
            PALETTE[c.source_index % PALETTE.len()],
        );
    }
    for &label in &labels {
        let f = complex.facet(complex.facet_by_label(label).unwrap());
        let (dx, dy) = offset[&label];
        let shifted: Vec<DVector<f64>> = f
            .vertices
            .iter()
            .map(|v| DVector::from_vec(vec![v[0] + dx, v[1] + dy]))
            .collect();
        let ring = polygon_order(&shifted);
        s.push_str("<polygon points=\"");
        for (k, &i) in ring.iter().enumerate() {
            if k > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{:.6},{:.6}", shifted[i][0], shifted[i][1]);
        }
        s.push_str("\" fill=\"none\" stroke=\"#17202a\" stroke-width=\"0.02\"/>\n");
    }
    s.push_str("</svg>\n");
    s
}

/// Boundary mesh of a 3-dimensional foldout in OFF format: the union of
/// cell faces that belong to exactly one cell.
pub fn write_off_foldout(f: &Foldout, tol: &Tolerances) -> String {
    assert_eq!(f.dim, 3, "OFF export is for 3-dimensional foldouts");
    let eps = tol.eps_pt * 100.0;
    let key3 = |p: &DVector<f64>| -> (i64, i64, i64) {
        (
            (p[0] / eps).round() as i64,
            (p[1] / eps).round() as i64,
            (p[2] / eps).round() as i64,
        )
    };
    // global vertex table
    let mut vid: std::collections::HashMap<(i64, i64, i64), usize> = std::collections::HashMap::new();
    let mut verts: Vec<DVector<f64>> = Vec::new();
    let mut faces: std::collections::HashMap<Vec<usize>, (Vec<usize>, usize)> =
        std::collections::HashMap::new();
    for c in &f.cells {
        if c.vertices.is_empty() {
            continue;
        }
        // recover the cell's faces from its own H-form: rebuild from vertices
        let ids: Vec<usize> = c
            .vertices
            .iter()
            .map(|p| {
                *vid.entry(key3(p)).or_insert_with(|| {
                    verts.push(p.clone());
                    verts.len() - 1
                })
            })
            .collect();
        for face in cell_faces(&c.vertices, tol) {
            let mut k: Vec<usize> = face.iter().map(|&i| ids[i]).collect();
            let ordered = k.clone();
            k.sort_unstable();
            faces
                .entry(k)
                .and_modify(|(_, n)| *n += 1)
                .or_insert((ordered, 1));
        }
    }
    let boundary: Vec<&Vec<usize>> = {
        let mut b: Vec<&(Vec<usize>, usize)> =
            faces.values().filter(|(_, n)| *n == 1).collect();
        b.sort_by(|x, y| x.0.cmp(&y.0));
        b.iter().map(|(f, _)| f).collect()
    };
    let mut s = String::from("OFF\n");
    let _ = writeln!(s, "{} {} 0", verts.len(), boundary.len());
    for v in &verts {
        let _ = writeln!(s, "{} {} {}", fmt_f64(v[0]), fmt_f64(v[1]), fmt_f64(v[2]));
    }
    for face in boundary {
        let _ = write!(s, "{}", face.len());
        for i in face {
            let _ = write!(s, " {i}");
        }
        s.push('\n');
    }
    s
}

/// The 2-faces of a 3-polytope given by its vertices, each as an index list
/// in cyclic order.
fn cell_faces(pts: &[DVector<f64>], tol: &Tolerances) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if pts.len() < 4 {
        return out;
    }
    let n = pts.len();
    let center = pts.iter().fold(DVector::zeros(3), |a, p| a + p) / n as f64;
    let mut seen: Vec<(DVector<f64>, f64)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let u = &pts[j] - &pts[i];
                let w = &pts[k] - &pts[i];
                let mut nrm = DVector::from_vec(vec![
                    u[1] * w[2] - u[2] * w[1],
                    u[2] * w[0] - u[0] * w[2],
                    u[0] * w[1] - u[1] * w[0],
                ]);
                let len = nrm.norm();
                if len <= tol.eps_rank {
                    continue;
                }
                nrm /= len;
                let mut b = nrm.dot(&pts[i]);
                if nrm.dot(&center) > b {
                    nrm = -nrm;
                    b = -b;
                }
                let eps = tol.eps_pt * 100.0;
                if seen
                    .iter()
                    .any(|(m, c)| (m - &nrm).norm() < 1e-7 && (c - b).abs() < eps)
                {
                    continue;
                }
                if pts.iter().all(|p| nrm.dot(p) <= b + eps) {
                    let members: Vec<usize> = (0..n)
                        .filter(|&m| (nrm.dot(&pts[m]) - b).abs() <= eps)
                        .collect();
                    if members.len() >= 3 {
                        seen.push((nrm.clone(), b));
                        out.push(order_face(pts, &members, &nrm));
                    }
                }
            }
        }
    }
    out
}

fn order_face(pts: &[DVector<f64>], members: &[usize], normal: &DVector<f64>) -> Vec<usize> {
    let m = members.len() as f64;
    let c = members
        .iter()
        .fold(DVector::zeros(3), |a, &i| a + &pts[i])
        / m;
    // in-plane frame
    let mut u = &pts[members[1]] - &pts[members[0]];
    u /= u.norm();
    let v = DVector::from_vec(vec![
        normal[1] * u[2] - normal[2] * u[1],
        normal[2] * u[0] - normal[0] * u[2],
        normal[0] * u[1] - normal[1] * u[0],
    ]);
    let mut idx = members.to_vec();
    idx.sort_by(|&i, &j| {
        let di = &pts[i] - &c;
        let dj = &pts[j] - &c;
        let ai = di.dot(&v).atan2(di.dot(&u));
        let aj = dj.dot(&v).atan2(dj.dot(&u));
        ai.partial_cmp(&aj).unwrap()
    });
    idx
}
