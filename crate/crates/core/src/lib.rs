//! Exact Tukey depth trimmed regions.
//!
//! The region at level `τ` is the intersection of finitely many halfspaces,
//! one per *critical* hyperplane through `p` observations. [`search`] finds
//! those hyperplanes, either by scanning every ridge or by a breadth-first
//! walk from one of them; [`region`] turns them into vertices and facets;
//! [`oracle`] re-checks results by brute force.
//!
//! ```
//! use tukey_regions::{algorithm1, build_region, PointCloud, RegionStatus, SearchOptions, Tolerances};
//!
//! let square = PointCloud::new(vec![
//!     vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0],
//! ]).unwrap();
//! let found = algorithm1(&square, 0.25, &SearchOptions::default()).unwrap();
//! let region = build_region(&square, 0.25, &found.criticals, &Tolerances::default()).unwrap();
//! assert_eq!(region.status, RegionStatus::FullDim);
//! assert_eq!(region.vertices.len(), 4);
//! ```

pub mod combinatorics;
pub mod error;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod region;
pub mod search;
pub mod tolerance;

pub use combinatorics::{encode_tuple, ridge_rank, Ridge, TupleCode, VisitedSet};
pub use error::{Error, Result};
pub use geometry::{check_general_position, PointCloud};
pub use region::{build_region, contains, Membership, RegionPolytope, RegionStatus};
pub use search::{
    algorithm1, algorithm2, k_tau, scan_ridge, seed_search, CriticalHyperplane, CriticalSet,
    SearchOptions, SearchOutcome, Side,
};
pub use tolerance::Tolerances;
