//! Benchmarks live in `benches/`; this crate only holds shared fixtures.

use pgarc::arcfile::parse_arc;
use pgarc::{FieldSpec, Plane, PointId};

pub const TABLE1: &str = include_str!("../../../data/table1.arc");

/// The plane over GF(16) and the points of the shipped witness arc.
pub fn table1() -> (Plane, Vec<PointId>) {
    let file = parse_arc(TABLE1).expect("shipped arc parses");
    let plane = Plane::new(FieldSpec::gf16_paper());
    let pts = file.point_ids(&plane);
    (plane, pts)
}
