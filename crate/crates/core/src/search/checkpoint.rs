//! Line-based snapshot of a level search, written after each level.
//!
//! ```text
//! pgarc-checkpoint 1
//! mode classify
//! field 16 2 4 25
//! r 3
//! level 7
//! target 12          (find-min only)
//! nodes 1234
//! complete 9 10
//! counts 0:1 1:1 2:1   classes per level so far
//! keep <stab> <points...>     classes already reported
//! front <stab> <points...>    representatives of the last level
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use super::report::FieldInfo;
use super::{SearchError, SearchMode};
use crate::plane::PointId;

pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    pub mode: SearchMode,
    pub field: FieldInfo,
    pub r: u32,
    /// Size of the sets in `front`.
    pub level: usize,
    pub target: Option<usize>,
    pub nodes: u64,
    pub complete_sizes: Vec<usize>,
    /// Classes found at each level already searched.
    pub counts: BTreeMap<usize, usize>,
    pub kept: Vec<(u64, Vec<PointId>)>,
    pub front: Vec<(u64, Vec<PointId>)>,
}

fn bad(line: usize, msg: &str) -> SearchError {
    SearchError::Checkpoint(format!("line {line}: {msg}"))
}

fn nums<T: std::str::FromStr>(words: &[&str], line: usize) -> Result<Vec<T>, SearchError> {
    words
        .iter()
        .map(|w| w.parse().map_err(|_| bad(line, &format!("bad number {w:?}"))))
        .collect()
}

impl Checkpoint {
    pub fn to_text(&self) -> String {
        let mut s = format!("pgarc-checkpoint {CHECKPOINT_VERSION}\n");
        let f = &self.field;
        let _ = writeln!(s, "mode {}", self.mode.name());
        let _ = writeln!(s, "field {} {} {} {}", f.q, f.p, f.e, f.poly);
        let _ = writeln!(s, "r {}", self.r);
        let _ = writeln!(s, "level {}", self.level);
        if let Some(t) = self.target {
            let _ = writeln!(s, "target {t}");
        }
        let _ = writeln!(s, "nodes {}", self.nodes);
        let sizes: Vec<String> = self.complete_sizes.iter().map(|n| n.to_string()).collect();
        let _ = writeln!(s, "complete {}", sizes.join(" "));
        let counts: Vec<String> = self.counts.iter().map(|(n, c)| format!("{n}:{c}")).collect();
        let _ = writeln!(s, "counts {}", counts.join(" "));
        for (tag, list) in [("keep", &self.kept), ("front", &self.front)] {
            for (stab, pts) in list {
                let _ = write!(s, "{tag} {stab}");
                for p in pts {
                    let _ = write!(s, " {p}");
                }
                s.push('\n');
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, SearchError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        match lines.next() {
            Some((_, l)) if l == format!("pgarc-checkpoint {CHECKPOINT_VERSION}") => {}
            Some((_, l)) if l.starts_with("pgarc-checkpoint ") => {
                return Err(SearchError::Checkpoint(format!("unsupported version in {l:?}")))
            }
            _ => return Err(bad(1, "missing pgarc-checkpoint header")),
        }
        let mut mode = None;
        let mut field = None;
        let mut r = None;
        let mut level = None;
        let mut target = None;
        let mut nodes = 0;
        let mut complete_sizes = Vec::new();
        let mut counts = BTreeMap::new();
        let mut kept = Vec::new();
        let mut front = Vec::new();
        for (n, line) in lines {
            let words: Vec<&str> = line.split_whitespace().collect();
            let Some((&key, rest)) = words.split_first() else {
                continue;
            };
            match key {
                "mode" => {
                    let m = rest.first().and_then(|m| SearchMode::parse(m));
                    mode = Some(m.ok_or_else(|| bad(n, "unknown mode"))?);
                }
                "field" => {
                    let v: Vec<u64> = nums(rest, n)?;
                    let [q, p, e, poly] = v[..] else {
                        return Err(bad(n, "field needs q p e poly"));
                    };
                    field = Some(FieldInfo {
                        q: q as u32,
                        p: p as u32,
                        e: e as u32,
                        poly,
                    });
                }
                "r" => r = nums::<u32>(rest, n)?.first().copied(),
                "level" => level = nums::<usize>(rest, n)?.first().copied(),
                "target" => target = nums::<usize>(rest, n)?.first().copied(),
                "nodes" => nodes = nums::<u64>(rest, n)?.first().copied().unwrap_or(0),
                "complete" => complete_sizes = nums(rest, n)?,
                "counts" => {
                    for w in rest {
                        let pair = w.split_once(':').and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)));
                        let (level, c) = pair.ok_or_else(|| bad(n, &format!("bad count {w:?}")))?;
                        counts.insert(level, c);
                    }
                }
                "keep" | "front" => {
                    let (stab, pts) = rest.split_first().ok_or_else(|| bad(n, "empty class"))?;
                    let stab: u64 = stab.parse().map_err(|_| bad(n, "bad stabilizer order"))?;
                    let entry = (stab, nums(pts, n)?);
                    if key == "keep" {
                        kept.push(entry);
                    } else {
                        front.push(entry);
                    }
                }
                _ => return Err(bad(n, &format!("unknown key {key:?}"))),
            }
        }
        Ok(Checkpoint {
            mode: mode.ok_or_else(|| bad(0, "missing mode"))?,
            field: field.ok_or_else(|| bad(0, "missing field"))?,
            r: r.ok_or_else(|| bad(0, "missing r"))?,
            level: level.ok_or_else(|| bad(0, "missing level"))?,
            target,
            nodes,
            complete_sizes,
            counts,
            kept,
            front,
        })
    }

    pub fn load(path: &Path) -> Result<Self, SearchError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Writes to a temporary file first so an interrupted run leaves the
    /// previous checkpoint intact.
    pub fn save(&self, path: &Path) -> Result<(), SearchError> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, self.to_text())?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let c = Checkpoint {
            mode: SearchMode::FindMin,
            field: FieldInfo {
                q: 16,
                p: 2,
                e: 4,
                poly: 25,
            },
            r: 3,
            level: 2,
            target: Some(12),
            nodes: 99,
            complete_sizes: vec![],
            counts: BTreeMap::from([(0, 1), (1, 1), (2, 3)]),
            kept: vec![(6, vec![0, 1])],
            front: vec![(4, vec![0, 5]), (2, vec![3, 9])],
        };
        assert_eq!(Checkpoint::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn rejects_other_versions() {
        let err = Checkpoint::parse("pgarc-checkpoint 99\nmode classify\n").unwrap_err();
        assert!(err.to_string().contains("version"));
        assert!(Checkpoint::parse("hello\n").is_err());
    }
}
