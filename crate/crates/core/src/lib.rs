//! Exact computation with (n,r)-arcs in PG(2,q).

pub mod arc;
pub mod arcfile;
pub mod bitset;
pub mod codes;
pub mod field;
pub mod group;
pub mod plane;
pub mod search;
pub mod witness;

pub use arc::{ArcError, ArcSet, SecantDistribution};
pub use bitset::BitSet;
pub use field::{FieldElement, FieldError, FieldSpec};
pub use plane::{LineId, Plane, PlaneError, PointId};
pub use group::{Canonizer, CanonicalForm, Collineation, GroupDescription, GroupError};
pub use search::{
    brute_force_classify, classify_arcs, find_max_complete, find_min_complete, orbit_union_search,
    seeded_extend, ArcClass, Budget, SearchConfig, SearchError, SearchMode, SearchReport,
};
