//! Brute-force reference classification for small planes.
//!
//! Every labeled set with no `r+1` collinear points is enumerated. The
//! first time a set is met, its whole orbit is generated by applying every
//! group element, so classes come from the group action itself and not from
//! the canonizer. The labeled count of a class is the number of enumerated
//! sets in it, and the stabilizer order is |G| divided by that count.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::Instant;

use super::report::{ArcClass, SearchReport};
use super::{SearchConfig, SearchError, SearchMode};
use crate::bitset::BitSet;
use crate::group::{all_elements, Canonizer, BRUTE_FORCE_LIMIT};
use crate::plane::{Plane, PointId};

struct Dfs<'a> {
    plane: &'a Plane,
    r: u8,
    max_size: usize,
    /// For each point, the lines through it.
    lines_of: Vec<Vec<usize>>,
    counts: Vec<u8>,
    perms: &'a [Vec<PointId>],
    class_of: HashMap<u64, usize>,
    reps: Vec<u64>,
    labeled: Vec<u64>,
    nodes: u64,
    max_nodes: u64,
}

impl Dfs<'_> {
    fn image(perm: &[PointId], mut set: u64) -> u64 {
        let mut out = 0u64;
        while set != 0 {
            let p = set.trailing_zeros() as usize;
            out |= 1 << perm[p];
            set &= set - 1;
        }
        out
    }

    fn visit(&mut self, set: u64) {
        let id = match self.class_of.get(&set) {
            Some(&id) => id,
            None => {
                let id = self.reps.len();
                self.reps.push(set);
                self.labeled.push(0);
                for perm in self.perms {
                    self.class_of.insert(Self::image(perm, set), id);
                }
                id
            }
        };
        self.labeled[id] += 1;
    }

    fn run(&mut self, set: u64, size: usize, next: usize) -> bool {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return false;
        }
        self.visit(set);
        if size == self.max_size {
            return true;
        }
        for p in next..self.plane.num_points() {
            let lines = std::mem::take(&mut self.lines_of[p]);
            let ok = lines.iter().all(|&l| self.counts[l] < self.r);
            if ok {
                lines.iter().for_each(|&l| self.counts[l] += 1);
                let fine = self.run(set | 1 << p, size + 1, p + 1);
                lines.iter().for_each(|&l| self.counts[l] -= 1);
                if !fine {
                    self.lines_of[p] = lines;
                    return false;
                }
            }
            self.lines_of[p] = lines;
        }
        true
    }
}

/// Classes of all sets of at most `max_size` points with no `r+1`
/// collinear. Needs at most 64 points and a group small enough to list.
pub fn brute_force_classify(
    plane: &Plane,
    r: u32,
    max_size: usize,
    max_nodes: u64,
) -> Result<SearchReport, SearchError> {
    let start = Instant::now();
    let n = plane.num_points();
    let canon = Canonizer::new(plane);
    if n > 64 || canon.group_order() > BRUTE_FORCE_LIMIT {
        return Err(SearchError::InvalidConfig(format!(
            "the oracle needs at most 64 points and |G| <= {BRUTE_FORCE_LIMIT}"
        )));
    }
    if r < 2 {
        return Err(SearchError::InvalidConfig("r must be at least 2".into()));
    }
    let perms: Vec<Vec<PointId>> = all_elements(plane.field())
        .iter()
        .map(|g| g.permutation(plane))
        .collect();
    let mut dfs = Dfs {
        plane,
        r: r as u8,
        max_size,
        lines_of: (0..n)
            .map(|p| plane.lines_through_point(p as PointId).iter().map(|&l| l as usize).collect())
            .collect(),
        counts: vec![0; plane.num_lines()],
        perms: &perms,
        class_of: HashMap::new(),
        reps: Vec::new(),
        labeled: Vec::new(),
        nodes: 0,
        max_nodes,
    };
    let finished = dfs.run(0, 0, 0);
    let group = canon.group_order();
    let mut classes = Vec::with_capacity(dfs.reps.len());
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    let mut complete = BTreeSet::new();
    for (&rep, &labeled) in dfs.reps.iter().zip(&dfs.labeled) {
        let set = BitSet::from_indices(n, (0..n).filter(|&i| rep >> i & 1 == 1));
        let form = canon.canonical_form(&set)?;
        let mut c = ArcClass::build(&canon, r, form.as_set(), canon.canonize(&set)?.stabilizer_order)?;
        c.labeled_count = labeled;
        c.stabilizer_order = group / labeled;
        *counts.entry(c.size).or_default() += 1;
        if c.complete {
            complete.insert(c.size);
        }
        classes.push(c);
    }
    classes.sort_by(|a, b| (a.size, &a.points).cmp(&(b.size, &b.points)));
    let mut rep = SearchReport::new(plane, SearchMode::BruteOracle, r, 0, max_size, 1);
    rep.classes = classes;
    rep.m_r = counts
        .keys()
        .last()
        .copied()
        .filter(|&m| finished && (m < max_size || m == SearchConfig::size_limit(plane.q(), r)));
    rep.class_counts = counts;
    rep.t_r = complete.first().copied().filter(|_| finished);
    rep.complete_sizes = complete.into_iter().collect();
    rep.nodes_visited = dfs.nodes;
    rep.wall_time_ms = start.elapsed().as_millis() as u64;
    rep.exhaustive = finished;
    if !finished {
        return Err(SearchError::BudgetExceeded {
            partial: Box::new(rep),
        });
    }
    Ok(rep)
}
