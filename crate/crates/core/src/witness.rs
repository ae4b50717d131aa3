//! The complete (15,3)-arc of PG(2,16) used as the regression anchor.

use crate::arc::ArcSet;
use crate::plane::Plane;

/// Arc file text of the witness, over GF(16) with α⁴ + α³ + 1 = 0.
pub const TABLE1_ARC: &str = include_str!("../../../data/table1.arc");

/// Coordinate labels of the witness points.
pub const TABLE1_LABELS: [[u32; 3]; 15] = [
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    [1, 1, 1],
    [1, 0, 11],
    [1, 1, 8],
    [1, 2, 5],
    [1, 2, 10],
    [1, 4, 10],
    [1, 9, 2],
    [1, 9, 8],
    [1, 11, 2],
    [1, 11, 11],
    [1, 13, 1],
    [1, 13, 12],
];

/// Secant counts ℓ₀..ℓ₃ of the witness.
pub const TABLE1_SECANTS: [u32; 4] = [92, 138, 12, 31];

/// Builds the witness in `plane`, which must be PG(2,16) over the
/// α⁴ + α³ + 1 field.
pub fn table1_arc(plane: &Plane) -> ArcSet<'_> {
    let pts = TABLE1_LABELS.iter().map(|&l| {
        plane
            .point_from_labels(l)
            .expect("labels below 16")
            .expect("nonzero triple")
    });
    ArcSet::from_points(plane, pts).expect("distinct points")
}
