use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::SearchMode;
use crate::arc::ArcSet;
use crate::bitset::BitSet;
use crate::field::FieldSpec;
use crate::group::{Canonizer, GroupError};
use crate::plane::{Plane, PointId};

/// Bumped whenever a field is renamed, removed or changes meaning.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldInfo {
    pub q: u32,
    pub p: u32,
    pub e: u32,
    pub poly: u64,
}

impl From<&FieldSpec> for FieldInfo {
    fn from(f: &FieldSpec) -> Self {
        FieldInfo {
            q: f.q(),
            p: f.p(),
            e: f.e(),
            poly: f.poly(),
        }
    }
}

/// One isomorphism class, given by its canonical representative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArcClass {
    pub size: usize,
    pub points: Vec<PointId>,
    pub labels: Vec<[u32; 3]>,
    pub stabilizer_order: u64,
    /// Only named for complete classes with a small stabilizer.
    pub stabilizer_name: Option<String>,
    /// Number of sets in the class: |PΓL(3,q)| / |Stab|.
    pub labeled_count: u64,
    /// Some line meets the set in exactly `r` points.
    pub strict: bool,
    pub complete: bool,
    /// Number of lines meeting the set in `i` points, `i = 0..=r`.
    pub secants: Vec<u32>,
    /// Largest subset with no three collinear points; complete classes only.
    pub max_2arc: Option<usize>,
}

impl ArcClass {
    pub(crate) fn build(
        canon: &Canonizer<'_>,
        r: u32,
        form: &BitSet,
        stabilizer_order: u64,
    ) -> Result<Self, GroupError> {
        let plane = canon.plane();
        let arc = ArcSet::from_bitset(plane, form);
        let complete = arc.is_complete(r).unwrap_or(false);
        let (stabilizer_name, max_2arc) = if complete {
            let name = if stabilizer_order <= 24 {
                canon.stabilizer(form)?.structure_name
            } else {
                None
            };
            (name, arc.max_2arc_subset().ok().map(|(k, _)| k))
        } else {
            (None, None)
        };
        let points = arc.points().to_vec();
        Ok(ArcClass {
            size: points.len(),
            labels: points.iter().map(|&p| plane.point_labels(p)).collect(),
            points,
            stabilizer_order,
            stabilizer_name,
            labeled_count: canon.group_order() / stabilizer_order,
            strict: arc.max_line_intersection() == r,
            complete,
            secants: arc.secant_distribution().truncated(r as usize),
            max_2arc,
        })
    }

    pub fn as_set(&self, plane: &Plane) -> BitSet {
        BitSet::from_indices(plane.num_points(), self.points.iter().map(|&p| p as usize))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub schema_version: u32,
    pub mode: SearchMode,
    pub field: FieldInfo,
    pub r: u32,
    pub size_min: usize,
    pub size_max: usize,
    /// Sorted by size, then by canonical form.
    pub classes: Vec<ArcClass>,
    /// Number of classes found at each size, including sizes whose classes
    /// are not listed.
    pub class_counts: BTreeMap<usize, usize>,
    /// Sizes at which a complete arc was seen.
    pub complete_sizes: Vec<usize>,
    /// Largest arc size; set only when certified.
    pub m_r: Option<usize>,
    /// Smallest complete arc size; set only when certified.
    pub t_r: Option<usize>,
    pub nodes_visited: u64,
    pub wall_time_ms: u64,
    /// The window was covered completely within budget.
    pub exhaustive: bool,
    pub workers: usize,
}

impl SearchReport {
    pub(crate) fn new(plane: &Plane, mode: SearchMode, r: u32, size_min: usize, size_max: usize, workers: usize) -> Self {
        SearchReport {
            schema_version: REPORT_SCHEMA_VERSION,
            mode,
            field: plane.field().into(),
            r,
            size_min,
            size_max,
            classes: Vec::new(),
            class_counts: BTreeMap::new(),
            complete_sizes: Vec::new(),
            m_r: None,
            t_r: None,
            nodes_visited: 0,
            wall_time_ms: 0,
            exhaustive: false,
            workers,
        }
    }

    pub fn classes_of_size(&self, n: usize) -> impl Iterator<Item = &ArcClass> {
        self.classes.iter().filter(move |c| c.size == n)
    }

    pub fn complete_classes(&self) -> impl Iterator<Item = &ArcClass> {
        self.classes.iter().filter(|c| c.complete)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Summary lines, then one block per class: size, stabilizer order
    /// and name, secant counts and largest 2-subarc, then the points as
    /// labels and as indices. Carries every number of the JSON form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let f = &self.field;
        let show = |v: Option<usize>| v.map_or("-".to_string(), |x| x.to_string());
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        let _ = writeln!(out, "schema {} mode {}", self.schema_version, self.mode.name());
        let _ = writeln!(out, "field q={} p={} e={} poly={}", f.q, f.p, f.e, f.poly);
        let _ = writeln!(out, "r={} sizes {}..={}", self.r, self.size_min, self.size_max);
        for (n, c) in &self.class_counts {
            let _ = writeln!(out, "size {n}: {c} classes");
        }
        let _ = writeln!(out, "complete sizes: {}", join(&self.complete_sizes));
        let _ = writeln!(out, "m_r={} t_r={}", show(self.m_r), show(self.t_r));
        let _ = writeln!(
            out,
            "exhaustive={} nodes={} time_ms={} workers={}",
            self.exhaustive, self.nodes_visited, self.wall_time_ms, self.workers
        );
        for c in &self.classes {
            let secants: Vec<String> = c.secants.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(
                out,
                "\nn={} stab={} ({}) labeled={} strict={} complete={} secants=({}) max2={}",
                c.size,
                c.stabilizer_order,
                c.stabilizer_name.as_deref().unwrap_or("?"),
                c.labeled_count,
                c.strict,
                c.complete,
                secants.join(","),
                show(c.max_2arc)
            );
            let pts: Vec<String> = c
                .labels
                .iter()
                .map(|l| format!("({},{},{})", l[0], l[1], l[2]))
                .collect();
            let _ = writeln!(out, "  points {}", pts.join(" "));
            let ids: Vec<String> = c.points.iter().map(|p| p.to_string()).collect();
            let _ = writeln!(out, "  ids {}", ids.join(" "));
        }
        out
    }
}
