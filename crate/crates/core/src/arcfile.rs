//! Plain-text arc files.
//!
//! ```text
//! q=16 p=2 e=4 poly=25
//! 1 0 0
//! 0 1 0
//! ...
//! ```
//!
//! The header names the field; each following line holds the three
//! coordinate labels of one point. Blank lines and `#` comments are skipped.
//! Points are normalized on read, so `0 2 2` and `0 1 1` collide.

use std::collections::HashMap;

use thiserror::Error;

use crate::field::{FieldElement, FieldError, FieldSpec};
use crate::plane::{Plane, PointId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArcFileError {
    #[error("line {line}: bad header: {reason}")]
    BadHeader { line: usize, reason: String },
    #[error("line {line}: expected three field labels")]
    BadLine { line: usize },
    #[error("line {line}: label {label} out of range for GF({q})")]
    LabelOutOfRange { line: usize, label: u32, q: u32 },
    #[error("line {line}: the zero vector is not a point")]
    ZeroVector { line: usize },
    #[error("line {line}: duplicate of the point on line {first}")]
    DuplicatePoint { line: usize, first: usize },
    #[error("field: {0}")]
    Field(#[from] FieldError),
    #[error("file is for GF({found}) but GF({expected}) was requested")]
    FieldMismatch { expected: String, found: String },
}

/// A parsed arc file: the declared field and normalized point labels in
/// file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcFile {
    pub field: FieldSpec,
    pub points: Vec<[u32; 3]>,
}

pub fn header_line(field: &FieldSpec) -> String {
    format!(
        "q={} p={} e={} poly={}",
        field.q(),
        field.p(),
        field.e(),
        field.poly()
    )
}

/// Parses a `q= p= e= poly=` header line.
pub fn parse_header(text: &str, line: usize) -> Result<FieldSpec, ArcFileError> {
    let bad = |reason: &str| ArcFileError::BadHeader {
        line,
        reason: reason.to_string(),
    };
    let mut vals: HashMap<&str, u64> = HashMap::new();
    for tok in text.split_whitespace() {
        let (k, v) = tok.split_once('=').ok_or_else(|| bad("expected key=value"))?;
        if !matches!(k, "q" | "p" | "e" | "poly") {
            return Err(bad(&format!("unknown key `{k}`")));
        }
        let v: u64 = v.parse().map_err(|_| bad(&format!("`{k}` is not an integer")))?;
        if vals.insert(k, v).is_some() {
            return Err(bad(&format!("`{k}` given twice")));
        }
    }
    let get = |k: &str| vals.get(k).copied().ok_or_else(|| bad(&format!("missing `{k}`")));
    let (q, p, e, poly) = (get("q")?, get("p")?, get("e")?, get("poly")?);
    if p > u32::MAX as u64 || e > 32 || (p as u128).pow(e as u32) != q as u128 {
        return Err(bad("q must equal p^e"));
    }
    Ok(FieldSpec::new(p as u32, e as u32, poly)?)
}

fn normalize_labels(f: &FieldSpec, labels: [u32; 3]) -> Option<[u32; 3]> {
    let v: Vec<FieldElement> = labels.iter().map(|&m| f.label_decode(m).unwrap()).collect();
    let lead = v.iter().find(|c| !c.is_zero())?;
    let s = f.inv(*lead).ok()?;
    Some([0, 1, 2].map(|i| f.label_encode(f.mul(v[i], s))))
}

pub fn parse_arc(text: &str) -> Result<ArcFile, ArcFileError> {
    let mut field = None;
    let mut points = Vec::new();
    let mut seen: HashMap<[u32; 3], usize> = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some(f) = &field else {
            field = Some(parse_header(body, line)?);
            continue;
        };
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(ArcFileError::BadLine { line });
        }
        let mut labels = [0u32; 3];
        for (slot, t) in labels.iter_mut().zip(&toks) {
            let m: u32 = t.parse().map_err(|_| ArcFileError::BadLine { line })?;
            if m >= f.q() {
                return Err(ArcFileError::LabelOutOfRange {
                    line,
                    label: m,
                    q: f.q(),
                });
            }
            *slot = m;
        }
        let norm = normalize_labels(f, labels).ok_or(ArcFileError::ZeroVector { line })?;
        if let Some(&first) = seen.get(&norm) {
            return Err(ArcFileError::DuplicatePoint { line, first });
        }
        seen.insert(norm, line);
        points.push(norm);
    }
    let field = field.ok_or(ArcFileError::BadHeader {
        line: 1,
        reason: "empty file".into(),
    })?;
    Ok(ArcFile { field, points })
}

/// Several arcs over one field: a header, then one arc per line given as
/// consecutive label triples.
pub fn parse_arc_list(text: &str) -> Result<(FieldSpec, Vec<Vec<[u32; 3]>>), ArcFileError> {
    let mut field: Option<FieldSpec> = None;
    let mut arcs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some(f) = &field else {
            field = Some(parse_header(body, line)?);
            continue;
        };
        let nums: Vec<u32> = body
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| ArcFileError::BadLine { line }))
            .collect::<Result<_, _>>()?;
        if nums.len() % 3 != 0 {
            return Err(ArcFileError::BadLine { line });
        }
        let mut seen: HashMap<[u32; 3], usize> = HashMap::new();
        let mut arc = Vec::new();
        for chunk in nums.chunks(3) {
            if let Some(&label) = chunk.iter().find(|&&m| m >= f.q()) {
                return Err(ArcFileError::LabelOutOfRange { line, label, q: f.q() });
            }
            let norm = normalize_labels(f, [chunk[0], chunk[1], chunk[2]])
                .ok_or(ArcFileError::ZeroVector { line })?;
            if seen.insert(norm, line).is_some() {
                return Err(ArcFileError::DuplicatePoint { line, first: line });
            }
            arc.push(norm);
        }
        arcs.push(arc);
    }
    let field = field.ok_or(ArcFileError::BadHeader {
        line: 1,
        reason: "empty file".into(),
    })?;
    Ok((field, arcs))
}

pub fn arc_list_text(field: &FieldSpec, arcs: &[Vec<[u32; 3]>]) -> String {
    let mut out = header_line(field);
    out.push('\n');
    for arc in arcs {
        let labels: Vec<String> = arc.iter().flatten().map(|m| m.to_string()).collect();
        out.push_str(&labels.join(" "));
        out.push('\n');
    }
    out
}

impl ArcFile {
    /// Point indices in `plane`, which must be built over `self.field`.
    pub fn point_ids(&self, plane: &Plane) -> Vec<PointId> {
        assert_eq!(plane.field(), &self.field, "plane built over a different field");
        self.points
            .iter()
            .map(|&l| plane.point_from_labels(l).expect("labels in range").expect("nonzero"))
            .collect()
    }

    pub fn from_points(plane: &Plane, pts: &[PointId]) -> Self {
        ArcFile {
            field: plane.field().clone(),
            points: pts.iter().map(|&p| plane.point_labels(p)).collect(),
        }
    }

    /// Fails unless the file declares exactly `expected`.
    pub fn require_field(&self, expected: &FieldSpec) -> Result<(), ArcFileError> {
        if &self.field != expected {
            return Err(ArcFileError::FieldMismatch {
                expected: header_line(expected),
                found: header_line(&self.field),
            });
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = header_line(&self.field);
        out.push('\n');
        for p in &self.points {
            out.push_str(&format!("{} {} {}\n", p[0], p[1], p[2]));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arc_list_round_trip() {
        let f = FieldSpec::gf16_paper();
        let arcs = vec![vec![[1, 0, 0], [0, 1, 0]], vec![], vec![[1, 2, 3]]];
        let text = arc_list_text(&f, &arcs);
        let (g, back) = parse_arc_list(&text).unwrap();
        assert_eq!(g, f);
        // the empty arc is an empty line and is skipped
        assert_eq!(back, vec![arcs[0].clone(), arcs[2].clone()]);
        assert!(matches!(parse_arc_list("q=4 p=2 e=2 poly=7\n1 0\n"), Err(ArcFileError::BadLine { line: 2 })));
        assert!(matches!(parse_arc_list("q=4 p=2 e=2 poly=7\n1 0 0 2 0 0\n"), Err(ArcFileError::DuplicatePoint { .. })));
    }
    use crate::witness::{TABLE1_ARC, TABLE1_LABELS};

    #[test]
    fn bundled_witness_parses() {
        let f = parse_arc(TABLE1_ARC).unwrap();
        assert_eq!(f.field, FieldSpec::gf16_paper());
        assert_eq!(f.points.len(), 15);
        assert_eq!(f.points, TABLE1_LABELS.to_vec());
        assert_eq!(parse_arc(&f.to_text()).unwrap(), f);
    }

    #[test]
    fn errors_name_lines() {
        let dup = "q=16 p=2 e=4 poly=25\n1 0 0\n0 1 0\n1 0 0\n";
        assert_eq!(
            parse_arc(dup),
            Err(ArcFileError::DuplicatePoint { line: 4, first: 2 })
        );
        let range = "q=16 p=2 e=4 poly=25\n1 0 16\n";
        assert_eq!(
            parse_arc(range),
            Err(ArcFileError::LabelOutOfRange { line: 2, label: 16, q: 16 })
        );
        assert!(matches!(
            parse_arc("q=16 p=2 e=4\n1 0 0\n"),
            Err(ArcFileError::BadHeader { line: 1, .. })
        ));
        assert!(matches!(
            parse_arc("q=8 p=2 e=4 poly=25\n"),
            Err(ArcFileError::BadHeader { .. })
        ));
        assert!(matches!(
            parse_arc("q=16 p=2 e=4 poly=21\n"),
            Err(ArcFileError::Field(FieldError::NotPrimitive(21)))
        ));
        assert_eq!(
            parse_arc("q=16 p=2 e=4 poly=25\n0 0 0\n"),
            Err(ArcFileError::ZeroVector { line: 2 })
        );
        assert_eq!(
            parse_arc("q=16 p=2 e=4 poly=25\n1 0\n"),
            Err(ArcFileError::BadLine { line: 2 })
        );
    }

    #[test]
    fn normalization_detects_scaled_duplicates() {
        // (0,α,α) is (0,1,1)
        let text = "q=16 p=2 e=4 poly=25\n0 1 1\n# comment\n\n0 2 2\n";
        assert_eq!(
            parse_arc(text),
            Err(ArcFileError::DuplicatePoint { line: 5, first: 2 })
        );
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]
            #[test]
            fn round_trip(pts in prop::collection::btree_set(0u16..273, 0..40), order in any::<u64>()) {
                let plane = Plane::new(FieldSpec::gf16_paper());
                let mut pts: Vec<_> = pts.into_iter().collect();
                let k = pts.len().max(1);
                pts.rotate_left((order as usize) % k);
                let f = ArcFile::from_points(&plane, &pts);
                let back = parse_arc(&f.to_text()).unwrap();
                prop_assert_eq!(back.point_ids(&plane), pts);
            }
        }
    }
}
