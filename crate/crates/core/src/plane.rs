//! The Desarguesian plane PG(2,q) with canonical indexing.
//!
//! Points are normalized homogeneous triples (first nonzero coordinate 1)
//! ordered lexicographically by the labels of their coordinates. Lines use
//! the same indexing on their dual coordinates `(a,b,c)`, meaning
//! `ax + by + cz = 0`.

use std::sync::Arc;

use thiserror::Error;

use crate::bitset::BitSet;
use crate::field::{FieldElement, FieldSpec};

pub type PointId = u16;
pub type LineId = u16;

/// Join and meet tables are built only below this many points.
const JOIN_TABLE_LIMIT: usize = 4161;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlaneError {
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("points must be distinct")]
    EqualPoints,
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
}

pub type Triple = [FieldElement; 3];

pub struct Plane {
    field: FieldSpec,
    points: Vec<Triple>,
    /// Sorted point indices on each line.
    line_points: Vec<Vec<PointId>>,
    /// Sorted line indices through each point.
    point_lines: Vec<Vec<LineId>>,
    line_masks: Vec<BitSet>,
    point_masks: Vec<BitSet>,
    /// `join[a * n + b]` is the line through points `a != b`.
    join: Option<Vec<LineId>>,
}

impl std::fmt::Debug for Plane {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PG(2,{})", self.q())
    }
}

impl Plane {
    pub fn new(field: FieldSpec) -> Self {
        let q = field.q() as usize;
        let n = q * q + q + 1;
        let mut points = Vec::with_capacity(n);
        for i in 0..n {
            points.push(Self::triple_of_index(&field, i));
        }
        let mut line_points = vec![Vec::with_capacity(q + 1); n];
        let mut point_lines = vec![Vec::with_capacity(q + 1); n];
        for (li, l) in points.iter().enumerate() {
            for (pi, p) in points.iter().enumerate() {
                if dot(&field, l, p).is_zero() {
                    line_points[li].push(pi as PointId);
                    point_lines[pi].push(li as LineId);
                }
            }
        }
        let line_masks = line_points
            .iter()
            .map(|ps| BitSet::from_indices(n, ps.iter().map(|&p| p as usize)))
            .collect();
        let point_masks = point_lines
            .iter()
            .map(|ls| BitSet::from_indices(n, ls.iter().map(|&l| l as usize)))
            .collect();
        let mut plane = Plane {
            field,
            points,
            line_points,
            point_lines,
            line_masks,
            point_masks,
            join: None,
        };
        if n <= JOIN_TABLE_LIMIT {
            let mut join = vec![LineId::MAX; n * n];
            for (li, ps) in plane.line_points.iter().enumerate() {
                for &a in ps {
                    for &b in ps {
                        if a != b {
                            join[a as usize * n + b as usize] = li as LineId;
                        }
                    }
                }
            }
            plane.join = Some(join);
        }
        plane
    }

    pub fn shared(field: FieldSpec) -> Arc<Self> {
        Arc::new(Self::new(field))
    }

    fn triple_of_index(f: &FieldSpec, i: usize) -> Triple {
        let q = f.q() as usize;
        let dec = |m: usize| f.label_decode(m as u32).expect("label in range");
        if i == 0 {
            [FieldElement::ZERO, FieldElement::ZERO, FieldElement::ONE]
        } else if i <= q {
            [FieldElement::ZERO, FieldElement::ONE, dec(i - 1)]
        } else {
            let j = i - 1 - q;
            [FieldElement::ONE, dec(j / q), dec(j % q)]
        }
    }

    #[inline]
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.field.q()
    }

    /// Number of points, which equals the number of lines.
    #[inline]
    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn num_lines(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn point(&self, p: PointId) -> &Triple {
        &self.points[p as usize]
    }

    /// Dual coordinates of a line.
    #[inline]
    pub fn line_coords(&self, l: LineId) -> &Triple {
        &self.points[l as usize]
    }

    #[inline]
    pub fn points_on_line(&self, l: LineId) -> &[PointId] {
        &self.line_points[l as usize]
    }

    #[inline]
    pub fn lines_through_point(&self, p: PointId) -> &[LineId] {
        &self.point_lines[p as usize]
    }

    #[inline]
    pub fn line_mask(&self, l: LineId) -> &BitSet {
        &self.line_masks[l as usize]
    }

    /// Lines through `p`, as a bitset over line indices.
    #[inline]
    pub fn point_mask(&self, p: PointId) -> &BitSet {
        &self.point_masks[p as usize]
    }

    #[inline]
    pub fn incident(&self, p: PointId, l: LineId) -> bool {
        self.line_masks[l as usize].contains(p as usize)
    }

    pub fn empty_set(&self) -> BitSet {
        BitSet::new(self.num_points())
    }

    /// Index of the normalized triple; `None` for the zero vector.
    #[inline]
    pub fn index_of(&self, v: &Triple) -> Option<PointId> {
        let f = &self.field;
        let q = f.q() as usize;
        let i = if !v[0].is_zero() {
            let s = f.inv(v[0]).ok()?;
            let y = f.label_encode(f.mul(v[1], s)) as usize;
            let z = f.label_encode(f.mul(v[2], s)) as usize;
            1 + q + y * q + z
        } else if !v[1].is_zero() {
            let s = f.inv(v[1]).ok()?;
            1 + f.label_encode(f.mul(v[2], s)) as usize
        } else if !v[2].is_zero() {
            0
        } else {
            return None;
        };
        Some(i as PointId)
    }

    /// Scales a nonzero triple so its first nonzero coordinate is 1.
    pub fn normalize(&self, v: &Triple) -> Result<(Triple, PointId), PlaneError> {
        let idx = self.index_of(v).ok_or(PlaneError::ZeroVector)?;
        Ok((self.points[idx as usize], idx))
    }

    /// Point index from coordinate labels, normalizing first.
    pub fn point_from_labels(&self, labels: [u32; 3]) -> Option<Result<PointId, PlaneError>> {
        let f = &self.field;
        let mut v = [FieldElement::ZERO; 3];
        for (c, &m) in v.iter_mut().zip(&labels) {
            *c = f.label_decode(m).ok()?;
        }
        Some(self.index_of(&v).ok_or(PlaneError::ZeroVector))
    }

    pub fn point_labels(&self, p: PointId) -> [u32; 3] {
        let f = &self.field;
        self.points[p as usize].map(|c| f.label_encode(c))
    }

    pub fn cross(&self, a: &Triple, b: &Triple) -> Triple {
        let f = &self.field;
        let m = |x, y| f.mul(x, y);
        [
            f.sub(m(a[1], b[2]), m(a[2], b[1])),
            f.sub(m(a[2], b[0]), m(a[0], b[2])),
            f.sub(m(a[0], b[1]), m(a[1], b[0])),
        ]
    }

    /// The unique line through two distinct points.
    #[inline]
    pub fn line_through(&self, a: PointId, b: PointId) -> Result<LineId, PlaneError> {
        if a == b {
            return Err(PlaneError::EqualPoints);
        }
        if let Some(join) = &self.join {
            return Ok(join[a as usize * self.num_points() + b as usize]);
        }
        let l = self.cross(self.point(a), self.point(b));
        self.index_of(&l).ok_or(PlaneError::EqualPoints)
    }

    /// The unique point on two distinct lines.
    #[inline]
    pub fn meet(&self, l: LineId, m: LineId) -> Result<PointId, PlaneError> {
        // self-dual indexing: the join table serves for lines too
        self.line_through(l, m)
    }

    pub fn collinear(&self, a: PointId, b: PointId, c: PointId) -> bool {
        if a == b || a == c || b == c {
            return true;
        }
        let l = self.line_through(a, b).expect("distinct");
        self.incident(c, l)
    }

    /// Maps a point set to a sorted index list.
    pub fn sorted_points(set: &BitSet) -> Vec<PointId> {
        set.iter().map(|i| i as PointId).collect()
    }
}

#[inline]
fn dot(f: &FieldSpec, a: &Triple, b: &Triple) -> FieldElement {
    f.add(f.add(f.mul(a[0], b[0]), f.mul(a[1], b[1])), f.mul(a[2], b[2]))
}
