//! Persifold
//! =========
//!
//! Approximate extremum/saddle persistence diagrams of scalar fields on
//! regular grids, with a user-controlled bound on the bottleneck distance
//! to the exact diagram.
//!
//! The pipeline works on an implicit multiresolution hierarchy of the
//! Kuhn-triangulated grid ([`grid`]). A coarse-to-fine sweep ([`traversal`])
//! maintains per-vertex link polarity and *folds* non-monotonic vertices
//! whose reinterpolation error stays below the tolerance, degrading the
//! field in a controlled way while certifying most vertices as regular.
//! The remaining vertices are classified explicitly ([`critical`]) and the
//! diagram is assembled from saddle merge events ([`pairing`]). Diagram and
//! field distances live in [`metrics`]; [`baseline`] holds the independent
//! sublevel-sweep oracle and the staircase quantization baseline used for
//! validation; [`synth`] generates the synthetic test fields.

pub mod baseline;
pub mod critical;
pub mod error;
pub mod field;
pub mod grid;
pub mod metrics;
pub mod pairing;
pub mod scalar;
pub mod synth;
pub mod traversal;

pub use error::Error;
pub use field::{Direction, FieldState, TotalOrder};
pub use grid::{GridDims, GridHierarchy, VertexId};
pub use pairing::{PairSelector, PairType, PersistenceDiagram, PersistencePair};
pub use scalar::{Scalar, ScalarType};
pub use traversal::{FoldingPolicy, PolarityState};

pub type Result<T> = std::result::Result<T, Error>;
