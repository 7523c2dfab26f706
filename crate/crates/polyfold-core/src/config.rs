//! Numeric tolerances and run limits.
//!
//! All geometric predicates in this crate are tolerance-based: folds
//! generically produce irrational coordinates, so exact arithmetic is out and
//! every comparison happens against a named epsilon. The defaults below are
//! tuned for inputs with coordinates of order one; scale your input rather
//! than the tolerances where possible.

/// Tolerances used by the geometric kernel and the event engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Point identity: two points within this distance are the same point.
    pub eps_pt: f64,
    /// Rank tests in linear algebra (singular values below this are zero).
    pub eps_rank: f64,
    /// Maximum KKT residual accepted when projecting onto a polyhedron.
    pub eps_kkt: f64,
    /// Strictness threshold for interior/visibility tests.
    pub eps_slack: f64,
    /// Minimum interior slack for a polytope to count as full-dimensional.
    pub eps_int: f64,
    /// Radius window: event radii within this of the minimum count as tied.
    pub eps_rad: f64,
    /// Angle-sequence entries within this of each other compare equal.
    pub eps_ang: f64,
    /// Hard cap on processed events; exceeding it is an error, not a hang.
    pub iteration_cap: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_pt: 1e-9,
            eps_rank: 1e-10,
            eps_kkt: 1e-8,
            eps_slack: 1e-9,
            eps_int: 1e-9,
            eps_rad: 1e-9,
            eps_ang: 1e-9,
            iteration_cap: 1_000_000,
        }
    }
}

impl Tolerances {
    /// Defaults overridden by `POLYFOLD_TOL_*` environment variables
    /// (`POLYFOLD_TOL_PT`, `_RANK`, `_KKT`, `_SLACK`, `_INT`, `_RAD`, `_ANG`)
    /// and `POLYFOLD_ITERATION_CAP`. Unparseable values are ignored.
    pub fn from_env() -> Self {
        let mut t = Tolerances::default();
        let read = |name: &str| -> Option<f64> {
            std::env::var(name).ok()?.trim().parse::<f64>().ok().filter(|v| *v > 0.0)
        };
        if let Some(v) = read("POLYFOLD_TOL_PT") {
            t.eps_pt = v;
        }
        if let Some(v) = read("POLYFOLD_TOL_RANK") {
            t.eps_rank = v;
        }
        if let Some(v) = read("POLYFOLD_TOL_KKT") {
            t.eps_kkt = v;
        }
        if let Some(v) = read("POLYFOLD_TOL_SLACK") {
            t.eps_slack = v;
        }
        if let Some(v) = read("POLYFOLD_TOL_INT") {
            t.eps_int = v;
        }
        if let Some(v) = read("POLYFOLD_TOL_RAD") {
            t.eps_rad = v;
        }
        if let Some(v) = read("POLYFOLD_TOL_ANG") {
            t.eps_ang = v;
        }
        if let Some(cap) = std::env::var("POLYFOLD_ITERATION_CAP")
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .filter(|c| *c >= 1)
        {
            t.iteration_cap = cap;
        }
        t
    }

    /// Set one tolerance by its short name (as accepted on the command line).
    pub fn set(&mut self, key: &str, value: f64) -> bool {
        if value <= 0.0 {
            return false;
        }
        match key {
            "pt" => self.eps_pt = value,
            "rank" => self.eps_rank = value,
            "kkt" => self.eps_kkt = value,
            "slack" => self.eps_slack = value,
            "int" => self.eps_int = value,
            "rad" => self.eps_rad = value,
            "ang" => self.eps_ang = value,
            "cap" => {
                if value >= 1.0 {
                    self.iteration_cap = value as usize;
                } else {
                    return false;
                }
            }
            _ => return false,
        }
        true
    }
}
