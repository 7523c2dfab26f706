//! Source unfoldings of convex polytope boundaries in fixed dimension d.
//!
//! The surface of a convex polytope is a polyhedral complex of facets glued
//! along ridges. Fixing a source point v, every point of the surface is
//! reached by some shortest path, and cutting along the set of points with
//! two or more shortest paths (the cut locus) lets the whole surface unfold
//! isometrically onto a star-shaped region in the tangent space at v.
//!
//! The engine here builds that unfolding by an event-driven wavefront sweep:
//! source images are folded copies of v in per-facet charts, committed one by
//! one in order of radius, with infinitesimal ties broken by angle sequences
//! of minimal jet frames. On top of the sweep sit geodesic distance queries,
//! shortest-path reconstruction, geodesic Voronoi diagrams for several
//! sources, and a brute-force oracle used for verification.

pub mod config;
pub mod error;
pub mod linalg;
pub mod hpoly;
pub mod cone;
pub mod complex;
pub mod folding;
pub mod voronoi;
pub mod jets;
pub mod unfolder;
pub mod geodesic;
pub mod io;
pub mod verify;

pub use config::Tolerances;
pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
