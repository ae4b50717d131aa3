use std::path::Path;

use pgarc::arcfile::{parse_arc, parse_arc_list, parse_header, ArcFile};
use pgarc::{Collineation, FieldSpec, Plane, PointId};

use crate::Fail;

pub fn read(path: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(path).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))
}

/// Loads an arc file; when `field` is given the file must declare it.
pub fn load_arc(path: &Path, field: Option<&FieldSpec>) -> Result<ArcFile, Fail> {
    let file = parse_arc(&read(path)?).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))?;
    if let Some(f) = field {
        file.require_field(f)
            .map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))?;
    }
    Ok(file)
}

pub fn load_seeds(path: &Path, plane: &Plane) -> Result<Vec<Vec<PointId>>, Fail> {
    let (field, arcs) =
        parse_arc_list(&read(path)?).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))?;
    if &field != plane.field() {
        return Err(Fail::Usage(format!("{}: seeds are over another field", path.display())));
    }
    Ok(arcs
        .iter()
        .map(|arc| {
            arc.iter()
                .map(|&l| plane.point_from_labels(l).expect("in range").expect("nonzero"))
                .collect()
        })
        .collect())
}

/// Header line, then one collineation per line: nine matrix labels in row
/// order and an optional Frobenius exponent.
pub fn parse_generators(text: &str, plane: &Plane) -> Result<Vec<Collineation>, Fail> {
    let f = plane.field();
    let mut header = false;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if !header {
            let declared = parse_header(body, line).map_err(|e| Fail::Usage(e.to_string()))?;
            if &declared != f {
                return Err(Fail::Usage(format!("line {line}: generators are over another field")));
            }
            header = true;
            continue;
        }
        let nums: Vec<u32> = body
            .split_whitespace()
            .map(|t| t.parse())
            .collect::<Result<_, _>>()
            .map_err(|_| Fail::Usage(format!("line {line}: expected numbers")))?;
        if nums.len() != 9 && nums.len() != 10 {
            return Err(Fail::Usage(format!("line {line}: expected 9 labels and an optional exponent")));
        }
        if let Some(m) = nums[..9].iter().find(|&&m| m >= f.q()) {
            return Err(Fail::Usage(format!("line {line}: label {m} out of range for GF({})", f.q())));
        }
        let labels: [u32; 9] = nums[..9].try_into().expect("nine labels");
        let frob = nums.get(9).copied().unwrap_or(0);
        let g = Collineation::from_labels(f, labels, frob)
            .map_err(|e| Fail::Usage(format!("line {line}: {e}")))?;
        out.push(g);
    }
    if !header {
        return Err(Fail::Usage("generator file is empty".into()));
    }
    Ok(out)
}
