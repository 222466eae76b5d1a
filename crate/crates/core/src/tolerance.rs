//! Numerical tolerances shared by every module.

/// All tolerances in one place.
///
/// Distances are in data units; angles in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Threshold below which a quantity is treated as exactly zero
    /// (basis norms, projected radii, projection ties).
    pub zero: f64,
    /// Geometric coincidence: a point within this distance of a hyperplane lies on it.
    pub geom: f64,
    /// Two polar angles closer than this are considered coincident.
    pub angle: f64,
    /// LP slack classification (empty / degenerate / full-dimensional).
    pub slack: f64,
    /// Feasibility of computed vertices against every halfspace.
    pub vertex: f64,
    /// Maximum angle between normals of hull facets merged as coplanar.
    pub merge_angle: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            zero: 1e-12,
            geom: 1e-9,
            angle: 1e-12,
            slack: 1e-9,
            vertex: 1e-7,
            merge_angle: 1e-8,
        }
    }
}

impl Tolerances {
    /// Defaults with the geometric coincidence tolerance replaced.
    pub fn with_geom(geom: f64) -> Self {
        Self {
            geom,
            ..Self::default()
        }
    }
}
