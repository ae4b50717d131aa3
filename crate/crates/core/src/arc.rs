//! Point sets of PG(2,q) with cached line intersection counts.
//!
//! An (n,r)-arc has no r+1 collinear points and at least one line meeting
//! it in exactly r points. The non-strict predicate drops the second clause;
//! search intermediates only ever satisfy that one.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::BitSet;
use crate::plane::{LineId, Plane, PointId};

/// Largest set accepted by [`ArcSet::max_2arc_subset`].
pub const MAX_2ARC_INPUT: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArcError {
    #[error("point set has a line with {found} points, more than r = {r}")]
    NotAnArc { r: u32, found: u32 },
    #[error("point {0} occurs twice")]
    DuplicatePoint(PointId),
    #[error("point index {0} out of range")]
    PointOutOfRange(usize),
    #[error("set of {size} points exceeds the budget of {limit}")]
    BudgetExceeded { size: usize, limit: usize },
}

/// Secant distribution `ℓ_0 ..= ℓ_{q+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SecantDistribution(pub Vec<u32>);

impl SecantDistribution {
    pub fn get(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Largest `i` with `ℓ_i > 0`.
    pub fn max_secant(&self) -> usize {
        self.0.iter().rposition(|&c| c > 0).unwrap_or(0)
    }

    /// `ℓ_0 ..= ℓ_k` for the reporting window.
    pub fn truncated(&self, k: usize) -> Vec<u32> {
        (0..=k).map(|i| self.get(i)).collect()
    }

    pub fn total_lines(&self) -> u64 {
        self.0.iter().map(|&c| c as u64).sum()
    }

    /// Σ i·ℓ_i, the number of incident point-line pairs.
    pub fn flags(&self) -> u64 {
        self.0.iter().enumerate().map(|(i, &c)| i as u64 * c as u64).sum()
    }

    /// Σ C(i,2)·ℓ_i, the number of point pairs.
    pub fn pairs(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as u64 * i.saturating_sub(1) as u64 / 2) * c as u64)
            .sum()
    }
}

/// A point set with incrementally maintained line intersection counts.
#[derive(Clone)]
pub struct ArcSet<'p> {
    plane: &'p Plane,
    members: BitSet,
    points: Vec<PointId>,
    line_counts: Vec<u8>,
    dist: Vec<u32>,
}

impl std::fmt::Debug for ArcSet<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ArcSet")
            .field("q", &self.plane.q())
            .field("points", &self.points)
            .finish()
    }
}

impl PartialEq for ArcSet<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.plane, other.plane) && self.members == other.members
    }
}

impl Eq for ArcSet<'_> {}

impl<'p> ArcSet<'p> {
    pub fn new(plane: &'p Plane) -> Self {
        let n = plane.num_points();
        let mut dist = vec![0u32; plane.q() as usize + 2];
        dist[0] = n as u32;
        ArcSet {
            plane,
            members: BitSet::new(n),
            points: Vec::new(),
            line_counts: vec![0; n],
            dist,
        }
    }

    pub fn from_points(
        plane: &'p Plane,
        pts: impl IntoIterator<Item = PointId>,
    ) -> Result<Self, ArcError> {
        let mut s = Self::new(plane);
        for p in pts {
            if p as usize >= plane.num_points() {
                return Err(ArcError::PointOutOfRange(p as usize));
            }
            if !s.insert(p) {
                return Err(ArcError::DuplicatePoint(p));
            }
        }
        Ok(s)
    }

    pub fn from_bitset(plane: &'p Plane, set: &BitSet) -> Self {
        let mut s = Self::new(plane);
        for p in set.iter() {
            s.insert(p as PointId);
        }
        s
    }

    #[inline]
    pub fn plane(&self) -> &'p Plane {
        self.plane
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn contains(&self, p: PointId) -> bool {
        self.members.contains(p as usize)
    }

    /// Members in ascending index order.
    #[inline]
    pub fn points(&self) -> &[PointId] {
        &self.points
    }

    #[inline]
    pub fn members(&self) -> &BitSet {
        &self.members
    }

    #[inline]
    pub fn line_count(&self, l: LineId) -> u32 {
        self.line_counts[l as usize] as u32
    }

    pub fn line_counts(&self) -> &[u8] {
        &self.line_counts
    }

    /// Adds `p`; returns `false` if already present. O(q).
    pub fn insert(&mut self, p: PointId) -> bool {
        if !self.members.insert(p as usize) {
            return false;
        }
        let at = self.points.partition_point(|&x| x < p);
        self.points.insert(at, p);
        for &l in self.plane.lines_through_point(p) {
            let c = &mut self.line_counts[l as usize];
            self.dist[*c as usize] -= 1;
            *c += 1;
            self.dist[*c as usize] += 1;
        }
        true
    }

    /// Removes `p`; returns `false` if absent. O(q).
    pub fn remove(&mut self, p: PointId) -> bool {
        if !self.members.remove(p as usize) {
            return false;
        }
        let at = self.points.partition_point(|&x| x < p);
        self.points.remove(at);
        for &l in self.plane.lines_through_point(p) {
            let c = &mut self.line_counts[l as usize];
            self.dist[*c as usize] -= 1;
            *c -= 1;
            self.dist[*c as usize] += 1;
        }
        true
    }

    pub fn with_point(&self, p: PointId) -> Self {
        let mut s = self.clone();
        s.insert(p);
        s
    }

    pub fn without_point(&self, p: PointId) -> Self {
        let mut s = self.clone();
        s.remove(p);
        s
    }

    pub fn max_line_intersection(&self) -> u32 {
        self.dist.iter().rposition(|&c| c > 0).unwrap_or(0) as u32
    }

    /// Non-strict: no `r+1` collinear. Strict additionally needs some
    /// line with exactly `r` points.
    pub fn is_arc(&self, r: u32, strict: bool) -> bool {
        let m = self.max_line_intersection();
        if strict {
            m == r
        } else {
            m <= r
        }
    }

    pub fn secant_distribution(&self) -> SecantDistribution {
        SecantDistribution(self.dist.clone())
    }

    /// Lines meeting the set in exactly `i` points.
    pub fn secants(&self, i: u32) -> impl Iterator<Item = LineId> + '_ {
        self.line_counts
            .iter()
            .enumerate()
            .filter(move |(_, &c)| c as u32 == i)
            .map(|(l, _)| l as LineId)
    }

    fn require_arc(&self, r: u32) -> Result<(), ArcError> {
        let found = self.max_line_intersection();
        if found > r {
            Err(ArcError::NotAnArc { r, found })
        } else {
            Ok(())
        }
    }

    /// Points outside the set lying on no `r`-secant.
    pub fn addable_points(&self, r: u32) -> Result<BitSet, ArcError> {
        self.require_arc(r)?;
        let mut out = self.members.complement();
        for (l, &c) in self.line_counts.iter().enumerate() {
            if c as u32 >= r {
                out.difference_with(self.plane.line_mask(l as LineId));
            }
        }
        Ok(out)
    }

    pub fn is_complete(&self, r: u32) -> Result<bool, ArcError> {
        Ok(self.addable_points(r)?.is_empty())
    }

    /// Recounts line intersections from the member bitset.
    pub fn recount(&self) -> (Vec<u8>, SecantDistribution) {
        let n = self.plane.num_lines();
        let mut counts = vec![0u8; n];
        let mut dist = vec![0u32; self.plane.q() as usize + 2];
        for (l, c) in counts.iter_mut().enumerate() {
            *c = self.plane.line_mask(l as LineId).intersection_count(&self.members) as u8;
            dist[*c as usize] += 1;
        }
        (counts, SecantDistribution(dist))
    }

    /// Largest subset with no three collinear points, with a witness.
    pub fn max_2arc_subset(&self) -> Result<(usize, Vec<PointId>), ArcError> {
        let n = self.len();
        if n > MAX_2ARC_INPUT {
            return Err(ArcError::BudgetExceeded {
                size: n,
                limit: MAX_2ARC_INPUT,
            });
        }
        if n <= 2 {
            return Ok((n, self.points.clone()));
        }
        // conflict[i][j]: other members on the line through i and j
        let mut conflict = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let l = self
                    .plane
                    .line_through(self.points[i], self.points[j])
                    .expect("distinct members");
                let mut m = 0u64;
                for (k, &pk) in self.points.iter().enumerate() {
                    if k != i && k != j && self.plane.incident(pk, l) {
                        m |= 1 << k;
                    }
                }
                conflict[i * n + j] = m;
            }
        }
        let mut search = TwoArcSearch {
            n,
            conflict: &conflict,
            best: 0,
            best_mask: 0,
        };
        let all = if n == 64 { !0 } else { (1u64 << n) - 1 };
        search.greedy(all);
        search.branch(0, 0, all);
        let witness = (0..n)
            .filter(|&i| search.best_mask >> i & 1 == 1)
            .map(|i| self.points[i])
            .collect();
        Ok((search.best, witness))
    }
}

struct TwoArcSearch<'a> {
    n: usize,
    conflict: &'a [u64],
    best: usize,
    best_mask: u64,
}

impl TwoArcSearch<'_> {
    fn prune(&self, chosen: u64, v: usize, cand: u64) -> u64 {
        let mut out = cand & !(1 << v);
        let mut c = chosen;
        while c != 0 {
            let u = c.trailing_zeros() as usize;
            c &= c - 1;
            out &= !self.conflict[u * self.n + v];
        }
        out
    }

    fn greedy(&mut self, all: u64) {
        let mut chosen = 0u64;
        let mut cand = all;
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            cand = self.prune(chosen, v, cand);
            chosen |= 1 << v;
        }
        self.best = chosen.count_ones() as usize;
        self.best_mask = chosen;
    }

    fn branch(&mut self, chosen: u64, size: usize, mut cand: u64) {
        if cand == 0 {
            if size > self.best {
                self.best = size;
                self.best_mask = chosen;
            }
            return;
        }
        while cand != 0 {
            if size + cand.count_ones() as usize <= self.best {
                return;
            }
            let v = cand.trailing_zeros() as usize;
            cand &= !(1 << v);
            let next = self.prune(chosen, v, cand);
            self.branch(chosen | 1 << v, size + 1, next);
        }
        if size > self.best {
            self.best = size;
            self.best_mask = chosen;
        }
    }
}

/// Largest `|L ∩ S|` over all lines, computed from scratch.
pub fn max_line_intersection(plane: &Plane, set: &BitSet) -> u32 {
    (0..plane.num_lines())
        .map(|l| plane.line_mask(l as LineId).intersection_count(set) as u32)
        .max()
        .unwrap_or(0)
}
