//! Python bindings.
//!
//! Two classes carry the whole API: [`Complex`] wraps the validated facet
//! complex of a convex polytope boundary, [`Unfolding`] wraps a completed
//! source-unfolding run and answers queries against it. Points cross the
//! boundary as plain lists of floats; structured results (events, foldout
//! cells, Voronoi cells) come back as dicts whose keys match the JSON
//! schemas written by the CLI.

use nalgebra::DVector;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use polyfold_core::complex::{FacetComplex, FacetId};
use polyfold_core::geodesic;
use polyfold_core::hpoly::{boxpoly, Halfspace, HPolytope};
use polyfold_core::unfolder::{locate_ambient, Unfolder};
use polyfold_core::verify::{hull_of_points, verify_complex, VerifyOptions};
use polyfold_core::Tolerances;

fn err(e: polyfold_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn dv(v: Vec<f64>) -> DVector<f64> {
    DVector::from_vec(v)
}

fn vecs(points: &[DVector<f64>]) -> Vec<Vec<f64>> {
    points.iter().map(|p| p.as_slice().to_vec()).collect()
}

fn parse_tol(overrides: Option<&Bound<'_, PyDict>>) -> PyResult<Tolerances> {
    let mut t = Tolerances::default();
    let Some(d) = overrides else { return Ok(t) };
    for (k, v) in d.iter() {
        let key: String = k.extract()?;
        match key.as_str() {
            "eps_pt" => t.eps_pt = v.extract()?,
            "eps_rank" => t.eps_rank = v.extract()?,
            "eps_kkt" => t.eps_kkt = v.extract()?,
            "eps_slack" => t.eps_slack = v.extract()?,
            "eps_int" => t.eps_int = v.extract()?,
            "eps_rad" => t.eps_rad = v.extract()?,
            "eps_ang" => t.eps_ang = v.extract()?,
            "iteration_cap" => t.iteration_cap = v.extract()?,
            _ => return Err(PyValueError::new_err(format!("unknown tolerance {key}"))),
        }
    }
    Ok(t)
}

/// The boundary complex of a convex polytope, with its numeric tolerances.
#[pyclass]
struct Complex {
    inner: FacetComplex,
    tol: Tolerances,
}

impl Complex {
    fn fid(&self, label: usize) -> PyResult<FacetId> {
        self.inner
            .facet_by_label(label)
            .ok_or_else(|| PyValueError::new_err(format!("no facet labelled {label}")))
    }
}

#[pymethods]
impl Complex {
    /// Convex hull of ambient points.
    #[staticmethod]
    #[pyo3(signature = (points, tolerances=None))]
    fn from_points(points: Vec<Vec<f64>>, tolerances: Option<&Bound<'_, PyDict>>) -> PyResult<Complex> {
        let tol = parse_tol(tolerances)?;
        let pts: Vec<DVector<f64>> = points.into_iter().map(dv).collect();
        let hull = hull_of_points(&pts, &tol).map_err(err)?;
        let inner = FacetComplex::from_polytope(&hull, &tol).map_err(err)?;
        Ok(Complex { inner, tol })
    }

    /// Axis-aligned box with corners `lo` and `hi`.
    #[staticmethod]
    #[pyo3(name = "box", signature = (lo, hi, tolerances=None))]
    fn box_(lo: Vec<f64>, hi: Vec<f64>, tolerances: Option<&Bound<'_, PyDict>>) -> PyResult<Complex> {
        if lo.len() != hi.len() {
            return Err(PyValueError::new_err("lo and hi must have the same length"));
        }
        let tol = parse_tol(tolerances)?;
        let inner = FacetComplex::from_polytope(&boxpoly(&lo, &hi), &tol).map_err(err)?;
        Ok(Complex { inner, tol })
    }

    /// Intersection of halfspaces `normals[i] . x <= offsets[i]`.
    #[staticmethod]
    #[pyo3(signature = (normals, offsets, tolerances=None))]
    fn from_halfspaces(
        normals: Vec<Vec<f64>>,
        offsets: Vec<f64>,
        tolerances: Option<&Bound<'_, PyDict>>,
    ) -> PyResult<Complex> {
        if normals.len() != offsets.len() {
            return Err(PyValueError::new_err("normals and offsets must have the same length"));
        }
        let Some(first) = normals.first() else {
            return Err(PyValueError::new_err("no halfspaces given"));
        };
        let tol = parse_tol(tolerances)?;
        let dim = first.len();
        let mut ineqs = Vec::new();
        for (i, (a, b)) in normals.into_iter().zip(offsets).enumerate() {
            if a.len() != dim {
                return Err(PyValueError::new_err(format!("row {i}: mixed dimensions")));
            }
            let h = Halfspace::unit(dv(a), b, tol.eps_rank)
                .ok_or_else(|| PyValueError::new_err(format!("row {i}: zero normal")))?;
            ineqs.push(h);
        }
        let poly = HPolytope::with_ineqs(dim, ineqs);
        let inner = FacetComplex::from_polytope(&poly, &tol).map_err(err)?;
        Ok(Complex { inner, tol })
    }

    /// Intrinsic dimension of the facets.
    #[getter]
    fn surface_dim(&self) -> usize {
        self.inner.surface_dim
    }

    /// Ambient dimension of the embedding.
    #[getter]
    fn ambient_dim(&self) -> Option<usize> {
        self.inner.ambient_input.as_ref().map(|p| p.dim)
    }

    #[getter]
    fn facet_count(&self) -> usize {
        self.inner.facets.len()
    }

    #[getter]
    fn ridge_count(&self) -> usize {
        self.inner.ridges.len()
    }

    fn facet_labels(&self) -> Vec<usize> {
        self.inner.facets.iter().map(|f| f.label).collect()
    }

    /// Vertices of one facet in its chart.
    fn facet_vertices(&self, facet: usize) -> PyResult<Vec<Vec<f64>>> {
        let f = self.fid(facet)?;
        Ok(vecs(&self.inner.facet(f).vertices))
    }

    /// Locate an ambient boundary point: (facet label, chart point).
    fn locate(&self, point: Vec<f64>) -> PyResult<(usize, Vec<f64>)> {
        let (f, y) = locate_ambient(&self.inner, &dv(point), &self.tol).map_err(err)?;
        Ok((self.inner.facet(f).label, y.as_slice().to_vec()))
    }

    /// Run the structural check suite; (name, passed, detail) per check.
    #[pyo3(signature = (source=None, oracle_targets=0, oracle_max_len=4, seed=7, star_segments=20, overlap_samples=10_000))]
    fn verify(
        &self,
        source: Option<Vec<f64>>,
        oracle_targets: usize,
        oracle_max_len: usize,
        seed: u64,
        star_segments: usize,
        overlap_samples: usize,
    ) -> PyResult<Vec<(String, bool, String)>> {
        let seeded = match source {
            Some(p) => Some(locate_ambient(&self.inner, &dv(p), &self.tol).map_err(err)?),
            None => None,
        };
        let opts = VerifyOptions {
            oracle_targets,
            oracle_max_len,
            seed,
            star_segments,
            overlap_samples,
        };
        let checks = verify_complex(&self.inner, &self.tol, seeded, &opts).map_err(err)?;
        Ok(checks.into_iter().map(|c| (c.name.to_string(), c.passed, c.detail)).collect())
    }
}

/// A completed unfolding run for one or more sources on a [`Complex`].
#[pyclass]
struct Unfolding {
    // the unfolder borrows the boxed complex; field order drops it first,
    // and the box keeps the complex at a stable heap address
    unfolder: Unfolder<'static>,
    _complex: Box<FacetComplex>,
}

impl Unfolding {
    fn build(complex: &Complex, seeds: Vec<(FacetId, DVector<f64>)>) -> PyResult<Unfolding> {
        let boxed = Box::new(complex.inner.clone());
        let cref: &'static FacetComplex = unsafe { &*(boxed.as_ref() as *const FacetComplex) };
        let mut u = Unfolder::new_multi(cref, &complex.tol, &seeds).map_err(err)?;
        u.run().map_err(err)?;
        Ok(Unfolding { unfolder: u, _complex: boxed })
    }

    fn fid(&self, label: usize) -> PyResult<FacetId> {
        self.unfolder
            .complex
            .facet_by_label(label)
            .ok_or_else(|| PyValueError::new_err(format!("no facet labelled {label}")))
    }

    fn label(&self, f: FacetId) -> usize {
        self.unfolder.complex.facet(f).label
    }
}

#[pymethods]
impl Unfolding {
    /// Unfold from ambient source points on the boundary.
    #[new]
    fn new(complex: &Complex, sources: Vec<Vec<f64>>) -> PyResult<Unfolding> {
        if sources.is_empty() {
            return Err(PyValueError::new_err("no sources given"));
        }
        let mut seeds = Vec::new();
        for p in sources {
            seeds.push(locate_ambient(&complex.inner, &dv(p), &complex.tol).map_err(err)?);
        }
        Unfolding::build(complex, seeds)
    }

    /// Unfold from (facet label, chart point) sources.
    #[staticmethod]
    fn from_chart_sources(complex: &Complex, sources: Vec<(usize, Vec<f64>)>) -> PyResult<Unfolding> {
        if sources.is_empty() {
            return Err(PyValueError::new_err("no sources given"));
        }
        let mut seeds = Vec::new();
        for (label, p) in sources {
            let f = complex.fid(label)?;
            seeds.push((f, dv(p)));
        }
        Unfolding::build(complex, seeds)
    }

    #[getter]
    fn source_count(&self) -> usize {
        self.unfolder.sources.len()
    }

    #[getter]
    fn event_count(&self) -> usize {
        self.unfolder.events.len()
    }

    /// Source images committed to one facet, in its chart.
    fn images(&self, facet: usize) -> PyResult<Vec<Vec<f64>>> {
        let f = self.fid(facet)?;
        Ok(vecs(&self.unfolder.images(f)))
    }

    /// Committed image count per facet label.
    fn image_counts<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for (fi, ms) in self.unfolder.members.iter().enumerate() {
            d.set_item(self.label(FacetId(fi)), ms.len())?;
        }
        Ok(d)
    }

    /// Geodesic distance from the source(s) to a chart point of a facet.
    fn distance(&self, facet: usize, point: Vec<f64>) -> PyResult<f64> {
        let f = self.fid(facet)?;
        geodesic::geodesic_distance(&self.unfolder, f, &dv(point)).map_err(err)
    }

    /// Geodesic distance to an ambient boundary point.
    fn distance_ambient(&self, point: Vec<f64>) -> PyResult<f64> {
        let (f, y) = locate_ambient(self.unfolder.complex, &dv(point), &self.unfolder.tol)
            .map_err(err)?;
        geodesic::geodesic_distance(&self.unfolder, f, &y).map_err(err)
    }

    /// All shortest paths to a chart point; dicts with length, facet labels,
    /// and breakpoints (facet label, chart point).
    fn paths<'py>(&self, py: Python<'py>, facet: usize, point: Vec<f64>) -> PyResult<Bound<'py, PyList>> {
        let f = self.fid(facet)?;
        let paths = geodesic::shortest_paths_to(&self.unfolder, f, &dv(point)).map_err(err)?;
        let out = PyList::empty(py);
        for p in paths {
            let d = PyDict::new(py);
            d.set_item("length", p.length)?;
            d.set_item("facets", p.facets)?;
            let pts = PyList::empty(py);
            for q in &p.points {
                pts.append((q.facet, q.point.as_slice().to_vec()))?;
            }
            d.set_item("points", pts)?;
            out.append(d)?;
        }
        Ok(out)
    }

    /// Reference distance by exhaustive facet-sequence search.
    #[pyo3(signature = (facet, point, max_len=4))]
    fn brute_force_distance(&self, facet: usize, point: Vec<f64>, max_len: usize) -> PyResult<f64> {
        let f = self.fid(facet)?;
        let w = dv(point);
        let mut best = f64::INFINITY;
        for (sf, sp) in &self.unfolder.sources {
            let d = geodesic::brute_force_distance(
                self.unfolder.complex,
                &self.unfolder.tol,
                (*sf, sp),
                (f, &w),
                max_len,
            )
            .map_err(err)?;
            best = best.min(d);
        }
        Ok(best)
    }

    /// The committed event log, in commit order.
    fn events<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        let out = PyList::empty(py);
        for e in &self.unfolder.events {
            let d = PyDict::new(py);
            d.set_item("facet", self.label(e.facet))?;
            d.set_item("facet_sequence", e.seq.iter().map(|f| self.label(*f)).collect::<Vec<_>>())?;
            d.set_item("nu", e.nu.as_slice().to_vec())?;
            d.set_item("radius", e.radius)?;
            d.set_item("event_point", e.rho.as_slice().to_vec())?;
            d.set_item("angle_seq", e.angle_seq.clone())?;
            d.set_item("source", e.source)?;
            out.append(d)?;
        }
        Ok(out)
    }

    /// The unfolded source foldout of one source: cells in the tangent plane
    /// at the source, source at the origin.
    #[pyo3(signature = (source=0))]
    fn foldout<'py>(&self, py: Python<'py>, source: usize) -> PyResult<Bound<'py, PyDict>> {
        let f = self.unfolder.foldout(source).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("dim", f.dim)?;
        d.set_item("origin", f.origin.as_slice().to_vec())?;
        let cells = PyList::empty(py);
        for c in &f.cells {
            let cd = PyDict::new(py);
            cd.set_item("facet", c.facet)?;
            cd.set_item("source_image", c.source_image.as_slice().to_vec())?;
            cd.set_item("facet_sequence", c.facet_sequence.clone())?;
            cd.set_item("vertices", vecs(&c.vertices))?;
            cells.append(cd)?;
        }
        d.set_item("cells", cells)?;
        Ok(d)
    }

    /// Geodesic Voronoi cells of the sources, per facet.
    fn voronoi_cells<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        let cells = self.unfolder.voronoi_cells().map_err(err)?;
        let out = PyList::empty(py);
        for c in cells {
            let d = PyDict::new(py);
            d.set_item("facet", c.facet)?;
            d.set_item("source_index", c.source_index)?;
            d.set_item("vertices", vecs(&c.vertices))?;
            out.append(d)?;
        }
        Ok(out)
    }

    /// Cut locus pieces and the ridge skeleton, per facet.
    fn cut_locus<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let cl = self.unfolder.cut_locus();
        let d = PyDict::new(py);
        let pieces = PyList::empty(py);
        for (label, ps) in &cl.per_facet {
            for p in ps {
                let pd = PyDict::new(py);
                pd.set_item("facet", label)?;
                pd.set_item("vertices", vecs(p))?;
                pieces.append(pd)?;
            }
        }
        d.set_item("pieces", pieces)?;
        let skeleton = PyList::empty(py);
        for (label, ps) in &cl.skeleton {
            for p in ps {
                let pd = PyDict::new(py);
                pd.set_item("facet", label)?;
                pd.set_item("vertices", vecs(p))?;
                skeleton.append(pd)?;
            }
        }
        d.set_item("skeleton", skeleton)?;
        Ok(d)
    }
}

#[pymodule]
fn polyfold(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Complex>()?;
    m.add_class::<Unfolding>()?;
    Ok(())
}
