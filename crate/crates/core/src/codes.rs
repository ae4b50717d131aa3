//! Linear [n,3] codes whose generator columns are the points of an arc.
//!
//! A nonzero message `m` gives the codeword `m·G`, whose zero coordinates
//! are the columns lying on the line with dual coordinates `m`. The minimum
//! distance is therefore `n` minus the largest line intersection, and an
//! (n,r)-arc yields Singleton defect `r − 2`.

use serde::Serialize;
use thiserror::Error;

use crate::arc::ArcSet;
use crate::field::{FieldElement, FieldSpec};
use crate::plane::{Plane, Triple};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("generator matrix has rank {0} < 3: the points are collinear")]
    RankDeficient(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CodeClass {
    /// Singleton defect 0.
    #[serde(rename = "MDS")]
    Mds,
    /// Singleton defect 1.
    #[serde(rename = "NMDS-like")]
    NmdsLike,
    #[serde(rename = "other")]
    Other,
}

#[derive(Debug, Clone)]
pub struct LinearCode {
    field: FieldSpec,
    columns: Vec<Triple>,
    min_distance: usize,
}

fn rank(f: &FieldSpec, cols: &[Triple]) -> usize {
    let mut rows: Vec<Triple> = cols.to_vec();
    let mut r = 0;
    for c in 0..3 {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = f.inv(rows[r][c]).expect("nonzero pivot");
        let pivot = rows[r];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let k = f.mul(row[c], inv);
                for j in 0..3 {
                    row[j] = f.sub(row[j], f.mul(k, pivot[j]));
                }
            }
        }
        r += 1;
    }
    r
}

impl LinearCode {
    /// Columns are the normalized point coordinates in ascending index order.
    pub fn from_arc(arc: &ArcSet<'_>) -> Result<Self, CodeError> {
        let plane = arc.plane();
        let columns: Vec<Triple> = arc.points().iter().map(|&p| *plane.point(p)).collect();
        let code = Self::from_columns(plane.field().clone(), columns)?;
        assert_eq!(
            code.min_distance,
            arc.len() - arc.max_line_intersection() as usize,
            "codeword sweep disagrees with the secant count"
        );
        Ok(code)
    }

    pub fn from_columns(field: FieldSpec, columns: Vec<Triple>) -> Result<Self, CodeError> {
        let r = rank(&field, &columns);
        if r < 3 {
            return Err(CodeError::RankDeficient(r));
        }
        let mut code = LinearCode {
            field,
            columns,
            min_distance: 0,
        };
        code.min_distance = code.min_distance_by_codewords();
        Ok(code)
    }

    pub fn length(&self) -> usize {
        self.columns.len()
    }

    pub fn dimension(&self) -> usize {
        3
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn columns(&self) -> &[Triple] {
        &self.columns
    }

    /// Row `i` of the 3×n generator matrix.
    pub fn generator_row(&self, i: usize) -> Vec<FieldElement> {
        self.columns.iter().map(|c| c[i]).collect()
    }

    pub fn weight(&self, message: &Triple) -> usize {
        let f = &self.field;
        self.columns
            .iter()
            .filter(|c| {
                let s = f.add(
                    f.add(f.mul(message[0], c[0]), f.mul(message[1], c[1])),
                    f.mul(message[2], c[2]),
                );
                !s.is_zero()
            })
            .count()
    }

    /// Minimum weight over all `q³ − 1` nonzero messages.
    pub fn min_distance_by_codewords(&self) -> usize {
        let q = self.field.q() as u16;
        let mut best = self.length();
        for a in 0..q {
            for b in 0..q {
                for c in 0..q {
                    if a == 0 && b == 0 && c == 0 {
                        continue;
                    }
                    let w = self.weight(&[FieldElement(a), FieldElement(b), FieldElement(c)]);
                    best = best.min(w);
                }
            }
        }
        best
    }

    /// `n` minus the largest number of columns on one line.
    pub fn min_distance_by_secants(&self, plane: &Plane) -> usize {
        let pts = self
            .columns
            .iter()
            .map(|c| plane.index_of(c).expect("nonzero column"));
        let arc = ArcSet::from_points(plane, pts).expect("distinct columns");
        self.length() - arc.max_line_intersection() as usize
    }

    pub fn min_distance(&self) -> usize {
        self.min_distance
    }

    pub fn singleton_defect(&self) -> usize {
        self.length() - self.dimension() + 1 - self.min_distance
    }

    pub fn classify(&self) -> CodeClass {
        match self.singleton_defect() {
            0 => CodeClass::Mds,
            1 => CodeClass::NmdsLike,
            _ => CodeClass::Other,
        }
    }

    /// Minimum distance of the dual code: the size of the smallest
    /// linearly dependent set of columns.
    pub fn dual_min_distance(&self) -> usize {
        let f = &self.field;
        let n = self.length();
        let det3 = |a: &Triple, b: &Triple, c: &Triple| {
            let m = |x, y| f.mul(x, y);
            let t0 = f.sub(m(b[1], c[2]), m(b[2], c[1]));
            let t1 = f.sub(m(b[2], c[0]), m(b[0], c[2]));
            let t2 = f.sub(m(b[0], c[1]), m(b[1], c[0]));
            f.add(f.add(m(a[0], t0), m(a[1], t1)), m(a[2], t2))
        };
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if det3(&self.columns[i], &self.columns[j], &self.columns[k]).is_zero() {
                        return 3;
                    }
                }
            }
        }
        if n >= 4 {
            4
        } else {
            // no dependent columns: the dual is the zero code
            n + 1
        }
    }

    /// Singleton defect of the dual `[n, n−3]` code.
    pub fn dual_singleton_defect(&self) -> usize {
        4 - self.dual_min_distance().min(4)
    }

    /// Three lines of space-separated field labels.
    pub fn generator_text(&self) -> String {
        (0..3)
            .map(|i| {
                self.generator_row(i)
                    .iter()
                    .map(|&x| self.field.label_encode(x).to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("\n")
            + "\n"
    }

    pub fn generator_labels(&self) -> Vec<Vec<u32>> {
        (0..3)
            .map(|i| {
                self.generator_row(i)
                    .iter()
                    .map(|&x| self.field.label_encode(x))
                    .collect()
            })
            .collect()
    }
}

/// JSON view of a code.
#[derive(Debug, Clone, Serialize)]
pub struct CodeSummary {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub singleton_defect: usize,
    pub class: CodeClass,
    pub dual_singleton_defect: usize,
    pub generator: Vec<Vec<u32>>,
}

impl From<&LinearCode> for CodeSummary {
    fn from(c: &LinearCode) -> Self {
        CodeSummary {
            n: c.length(),
            k: c.dimension(),
            d: c.min_distance(),
            singleton_defect: c.singleton_defect(),
            class: c.classify(),
            dual_singleton_defect: c.dual_singleton_defect(),
            generator: c.generator_labels(),
        }
    }
}
