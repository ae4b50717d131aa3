//! Arcs invariant under a prescribed group, built as unions of its point
//! orbits.

use std::collections::BTreeSet;
use std::time::Instant;

use super::report::{ArcClass, SearchReport};
use super::{SearchConfig, SearchError};
use crate::arc::ArcSet;
use crate::bitset::BitSet;
use crate::group::{point_orbits, Canonizer};
use crate::plane::{Plane, PointId};

/// More orbits than this make the subset search impractical.
pub const DEFAULT_MAX_ORBITS: usize = 30;

struct Walk<'a, 'p> {
    orbits: &'a [Vec<PointId>],
    r: u32,
    found: Vec<BitSet>,
    nodes: u64,
    max_nodes: u64,
    arc: ArcSet<'p>,
}

impl Walk<'_, '_> {
    fn fits(&self, orbit: &[PointId]) -> bool {
        let plane = self.arc.plane();
        let mut touched: Vec<(u16, u32)> = Vec::new();
        for &p in orbit {
            for &l in plane.lines_through_point(p) {
                match touched.iter_mut().find(|(m, _)| *m == l) {
                    Some((_, c)) => *c += 1,
                    None => touched.push((l, 1)),
                }
            }
        }
        touched
            .iter()
            .all(|&(l, c)| self.arc.line_count(l) + c <= self.r)
    }

    /// Include or exclude each orbit in turn; a leaf is kept when no
    /// excluded orbit could be added.
    fn run(&mut self, i: usize, excluded: &mut Vec<usize>) -> bool {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return false;
        }
        if i == self.orbits.len() {
            if !self.arc.is_empty() && excluded.iter().all(|&j| !self.fits(&self.orbits[j])) {
                self.found.push(self.arc.members().clone());
            }
            return true;
        }
        if self.fits(&self.orbits[i]) {
            for &p in &self.orbits[i] {
                self.arc.insert(p);
            }
            let ok = self.run(i + 1, excluded);
            for &p in &self.orbits[i] {
                self.arc.remove(p);
            }
            if !ok {
                return false;
            }
        }
        excluded.push(i);
        let ok = self.run(i + 1, excluded);
        excluded.pop();
        ok
    }
}

/// Orbit-maximal unions of point orbits of the group generated by
/// `config.generators` that are (n,r)-arcs with `n` in the size window,
/// one per PΓL(3,q)-class.
pub fn orbit_union_search(plane: &Plane, config: &SearchConfig) -> Result<SearchReport, SearchError> {
    let start = Instant::now();
    config.validate(plane)?;
    let orbits = point_orbits(plane, &config.generators);
    if orbits.len() > config.max_orbits {
        return Err(SearchError::TooManyOrbits {
            count: orbits.len(),
            limit: config.max_orbits,
        });
    }
    let mut walk = Walk {
        orbits: &orbits,
        r: config.r,
        found: Vec::new(),
        nodes: 0,
        max_nodes: config.budget.max_nodes,
        arc: ArcSet::new(plane),
    };
    let finished = walk.run(0, &mut Vec::new());
    let canon = Canonizer::new(plane);
    let mut seen = BTreeSet::new();
    let mut classes = Vec::new();
    for set in &walk.found {
        let n = set.count();
        if n < config.size_min || n > config.size_max {
            continue;
        }
        let c = canon.canonize(set)?;
        if seen.insert(c.form.clone()) {
            classes.push(ArcClass::build(&canon, config.r, c.form.as_set(), c.stabilizer_order)?);
        }
    }
    classes.sort_by(|a, b| (a.size, &a.points).cmp(&(b.size, &b.points)));
    let mut rep = SearchReport::new(plane, config.mode, config.r, config.size_min, config.size_max, 1);
    for c in &classes {
        *rep.class_counts.entry(c.size).or_default() += 1;
    }
    rep.complete_sizes = classes
        .iter()
        .filter(|c| c.complete)
        .map(|c| c.size)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    rep.classes = classes;
    rep.nodes_visited = walk.nodes;
    rep.wall_time_ms = start.elapsed().as_millis() as u64;
    rep.exhaustive = finished;
    if !finished {
        return Err(SearchError::BudgetExceeded {
            partial: Box::new(rep),
        });
    }
    Ok(rep)
}
