use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use rayon::prelude::*;

use super::checkpoint::Checkpoint;
use super::prune::coverage_bound_allows;
use super::report::{ArcClass, FieldInfo, SearchReport};
use super::{thread_pool, SearchConfig, SearchError, SearchMode};
use crate::arc::ArcSet;
use crate::bitset::BitSet;
use crate::group::{Canonizer, GroupError};
use crate::plane::{Plane, PointId};

/// Canonical representative and stabilizer order.
pub(crate) type Rep = (BitSet, u64);

enum Halt {
    Budget,
    Group(GroupError),
}

impl From<GroupError> for Halt {
    fn from(e: GroupError) -> Self {
        Halt::Group(e)
    }
}

pub(crate) struct Ctx<'p> {
    pub plane: &'p Plane,
    pub canon: Canonizer<'p>,
    pub cfg: SearchConfig,
    pool: rayon::ThreadPool,
    nodes: AtomicU64,
    stop: AtomicBool,
    start: Instant,
}

impl<'p> Ctx<'p> {
    pub fn new(plane: &'p Plane, cfg: &SearchConfig) -> Self {
        Ctx {
            plane,
            canon: Canonizer::new(plane),
            cfg: cfg.clone(),
            pool: thread_pool(cfg.workers),
            nodes: AtomicU64::new(0),
            stop: AtomicBool::new(false),
            start: Instant::now(),
        }
    }

    pub fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }

    fn add_nodes(&self, n: u64) {
        self.nodes.fetch_add(n, Ordering::Relaxed);
    }

    /// Counts one node; `true` once the budget is spent.
    pub fn tick(&self) -> bool {
        if self.stop.load(Ordering::Relaxed) {
            return true;
        }
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        let timed_out = n % 1024 == 0
            && self
                .cfg
                .budget
                .max_time
                .is_some_and(|t| self.start.elapsed() > t);
        if n > self.cfg.budget.max_nodes || timed_out {
            self.stop.store(true, Ordering::Relaxed);
            return true;
        }
        false
    }

    pub fn canonize(&self, set: &BitSet) -> Result<Rep, GroupError> {
        let c = self.canon.canonize(set)?;
        Ok((c.form.into_set(), c.stabilizer_order))
    }

    /// Next level: every class obtained by adding one addable point to a
    /// representative and passing `keep`.
    fn extend<F>(&self, front: &[Rep], keep: F) -> Result<Vec<Rep>, Halt>
    where
        F: Fn(&ArcSet<'_>) -> bool + Sync,
    {
        let r = self.cfg.r;
        let parts: Vec<Result<Vec<Rep>, Halt>> = self.pool.install(|| {
            front
                .par_iter()
                .map(|(set, _)| {
                    let arc = ArcSet::from_bitset(self.plane, set);
                    let addable = arc.addable_points(r).expect("representatives are arcs");
                    let mut out = Vec::new();
                    for p in addable.iter() {
                        let child = arc.with_point(p as PointId);
                        if !keep(&child) {
                            continue;
                        }
                        if self.tick() {
                            return Err(Halt::Budget);
                        }
                        out.push(self.canonize(child.members())?);
                    }
                    out.sort_unstable();
                    out.dedup();
                    Ok(out)
                })
                .collect()
        });
        let mut next = Vec::new();
        for part in parts {
            next.extend(part?);
        }
        next.sort_unstable();
        next.dedup_by(|a, b| a.0 == b.0);
        Ok(next)
    }

    fn elapsed_ms(&self) -> u64 {
        self.start.elapsed().as_millis() as u64
    }

    fn is_complete(&self, set: &BitSet) -> bool {
        ArcSet::from_bitset(self.plane, set)
            .is_complete(self.cfg.r)
            .unwrap_or(false)
    }

    fn classes(&self, reps: &[Rep]) -> Result<Vec<ArcClass>, GroupError> {
        let mut out: Vec<ArcClass> = self.pool.install(|| {
            reps.par_iter()
                .map(|(set, stab)| ArcClass::build(&self.canon, self.cfg.r, set, *stab))
                .collect::<Result<_, _>>()
        })?;
        out.sort_by(|a, b| (a.size, &a.points).cmp(&(b.size, &b.points)));
        Ok(out)
    }

    fn report(&self, kept: &[Rep], exhaustive: bool) -> Result<SearchReport, SearchError> {
        let c = &self.cfg;
        let mut rep = SearchReport::new(self.plane, c.mode, c.r, c.size_min, c.size_max, c.workers);
        rep.classes = self.classes(kept)?;
        rep.exhaustive = exhaustive;
        rep.nodes_visited = self.nodes();
        rep.wall_time_ms = self.elapsed_ms();
        Ok(rep)
    }

    fn to_points(set: &BitSet) -> Vec<PointId> {
        set.iter().map(|p| p as PointId).collect()
    }

    fn from_points(&self, pts: &[PointId]) -> Result<BitSet, SearchError> {
        let n = self.plane.num_points();
        if pts.iter().any(|&p| p as usize >= n) {
            return Err(SearchError::Checkpoint("point out of range".into()));
        }
        Ok(BitSet::from_indices(n, pts.iter().map(|&p| p as usize)))
    }

    fn checkpoint(
        &self,
        level: usize,
        target: Option<usize>,
        complete: &BTreeSet<usize>,
        counts: &BTreeMap<usize, usize>,
        kept: &[Rep],
        front: &[Rep],
    ) -> Checkpoint {
        let conv = |v: &[Rep]| v.iter().map(|(s, st)| (*st, Self::to_points(s))).collect();
        Checkpoint {
            mode: self.cfg.mode,
            field: FieldInfo::from(self.plane.field()),
            r: self.cfg.r,
            level,
            target,
            nodes: self.nodes(),
            complete_sizes: complete.iter().copied().collect(),
            counts: counts.clone(),
            kept: conv(kept),
            front: conv(front),
        }
    }

    fn save(&self, cp: impl FnOnce() -> Checkpoint) -> Result<(), SearchError> {
        if let Some(path) = &self.cfg.checkpoint {
            cp().save(path)?;
        }
        Ok(())
    }

    /// Resume state after checking it belongs to this search.
    fn resume(&self) -> Result<Option<(Checkpoint, Vec<Rep>, Vec<Rep>)>, SearchError> {
        let Some(cp) = &self.cfg.resume else {
            return Ok(None);
        };
        if cp.mode != self.cfg.mode {
            return Err(SearchError::Checkpoint(format!(
                "checkpoint is for {} but the search is {}",
                cp.mode.name(),
                self.cfg.mode.name()
            )));
        }
        if cp.field != FieldInfo::from(self.plane.field()) || cp.r != self.cfg.r {
            return Err(SearchError::Checkpoint("checkpoint field or r differs".into()));
        }
        let conv = |v: &[(u64, Vec<PointId>)]| -> Result<Vec<Rep>, SearchError> {
            v.iter().map(|(st, p)| Ok((self.from_points(p)?, *st))).collect()
        };
        let kept = conv(&cp.kept)?;
        let front = conv(&cp.front)?;
        self.add_nodes(cp.nodes);
        Ok(Some((cp.clone(), kept, front)))
    }

    fn halt(&self, h: Halt, kept: &[Rep], complete: &BTreeSet<usize>, certified_t: bool) -> SearchError {
        match h {
            Halt::Group(e) => e.into(),
            Halt::Budget => match self.report(kept, false) {
                Ok(mut rep) => {
                    rep.complete_sizes = complete.iter().copied().collect();
                    if certified_t {
                        rep.t_r = complete.first().copied();
                    }
                    SearchError::BudgetExceeded {
                        partial: Box::new(rep),
                    }
                }
                Err(e) => e,
            },
        }
    }
}

fn empty_level(ctx: &Ctx<'_>) -> Vec<Rep> {
    vec![(ctx.plane.empty_set(), ctx.canon.group_order())]
}

/// Classification and find-max: every level from the empty set upward.
pub(crate) fn run_classify(plane: &Plane, cfg: &SearchConfig) -> Result<SearchReport, SearchError> {
    let ctx = Ctx::new(plane, cfg);
    let find_max = cfg.mode == SearchMode::FindMax;
    let in_window = |n: usize| n >= cfg.size_min && n <= cfg.size_max;
    let mut counts = BTreeMap::new();
    let mut complete = BTreeSet::new();
    let (mut level, mut front, mut kept) = match ctx.resume()? {
        Some((cp, kept, front)) => {
            complete.extend(cp.complete_sizes.iter().copied());
            counts = cp.counts;
            (cp.level, front, kept)
        }
        None => (0, empty_level(&ctx), Vec::new()),
    };
    let record = |n: usize, front: &[Rep], kept: &mut Vec<Rep>, complete: &mut BTreeSet<usize>| {
        if front.iter().any(|(s, _)| ctx.is_complete(s)) {
            complete.insert(n);
        }
        if find_max {
            if !front.is_empty() {
                *kept = front.to_vec();
            }
        } else if in_window(n) {
            kept.extend_from_slice(front);
        }
    };
    if cfg.resume.is_none() {
        record(level, &front, &mut kept, &mut complete);
    }
    counts.insert(level, front.len());
    let mut top = counts.iter().filter(|&(_, &c)| c > 0).map(|(&n, _)| n).max();
    while level < cfg.size_max && !front.is_empty() {
        front = match ctx.extend(&front, |_| true) {
            Ok(f) => f,
            Err(h) => return Err(ctx.halt(h, &kept, &complete, true)),
        };
        level += 1;
        counts.insert(level, front.len());
        record(level, &front, &mut kept, &mut complete);
        if !front.is_empty() {
            top = Some(level);
        }
        ctx.save(|| ctx.checkpoint(level, None, &complete, &counts, &kept, &front))?;
    }
    let mut rep = ctx.report(&kept, true)?;
    rep.class_counts = counts
        .into_iter()
        .filter(|&(n, c)| c > 0 && (find_max || in_window(n)))
        .collect();
    rep.complete_sizes = complete.iter().copied().collect();
    rep.t_r = complete.first().copied();
    if front.is_empty() || level == SearchConfig::size_limit(plane.q(), cfg.r) {
        rep.m_r = top;
    }
    Ok(rep)
}

/// Iterative deepening on the target size `M`: levels below `M` keep only
/// sets passing the coverage bound for `M`, and the first `M` with a
/// complete class is the answer.
pub(crate) fn run_find_min(plane: &Plane, cfg: &SearchConfig) -> Result<SearchReport, SearchError> {
    let ctx = Ctx::new(plane, cfg);
    let (q, r) = (plane.q(), cfg.r);
    let mut complete = BTreeSet::new();
    let resumed = ctx.resume()?;
    let first_target = match &resumed {
        Some((cp, _, _)) => cp
            .target
            .ok_or_else(|| SearchError::Checkpoint("find-min checkpoint without target".into()))?,
        None => cfg.size_min.max(1),
    };
    let mut resumed = resumed.map(|(cp, _, front)| (cp.level, front));
    for target in first_target..=cfg.size_max {
        let (mut level, mut front) = resumed.take().unwrap_or_else(|| (0, empty_level(&ctx)));
        let keep = |a: &ArcSet<'_>| {
            let u = a.addable_points(r).map(|s| s.count()).unwrap_or(usize::MAX);
            coverage_bound_allows(a.len(), u, target, q, r)
        };
        while level < target && !front.is_empty() {
            front = match ctx.extend(&front, keep) {
                Ok(f) => f,
                Err(h) => return Err(ctx.halt(h, &[], &complete, false)),
            };
            level += 1;
            ctx.save(|| ctx.checkpoint(level, Some(target), &complete, &BTreeMap::new(), &[], &front))?;
        }
        let found: Vec<Rep> = front
            .into_iter()
            .filter(|(s, _)| level == target && ctx.is_complete(s))
            .collect();
        if !found.is_empty() {
            complete.insert(target);
            let mut rep = ctx.report(&found, true)?;
            rep.class_counts.insert(target, found.len());
            rep.complete_sizes = vec![target];
            rep.t_r = Some(target);
            return Ok(rep);
        }
    }
    ctx.report(&[], true)
}

/// Level search from 2-arc seeds, dropping sets whose largest 2-subarc
/// exceeds every seed. Complete arcs in the window whose largest 2-subarc
/// has a seed's size are kept.
pub(crate) fn run_seeded(plane: &Plane, cfg: &SearchConfig) -> Result<SearchReport, SearchError> {
    const MAX2_LIMIT: usize = 32;
    if cfg.seeds.is_empty() {
        return Err(SearchError::InvalidConfig("no seeds given".into()));
    }
    if cfg.size_max > MAX2_LIMIT {
        return Err(SearchError::InvalidConfig(format!(
            "size_max {} exceeds the 2-subarc limit {MAX2_LIMIT}",
            cfg.size_max
        )));
    }
    let ctx = Ctx::new(plane, cfg);
    let mut seeds: Vec<(usize, Rep)> = Vec::new();
    for (index, pts) in cfg.seeds.iter().enumerate() {
        let arc = ArcSet::from_points(plane, pts.iter().copied())
            .map_err(|_| SearchError::InvalidSeed { index })?;
        if !arc.is_arc(2, false) {
            return Err(SearchError::InvalidSeed { index });
        }
        seeds.push((arc.len(), ctx.canonize(arc.members())?));
    }
    seeds.sort_unstable();
    seeds.dedup();
    let sizes: BTreeSet<usize> = seeds.iter().map(|s| s.0).collect();
    let kmax = *sizes.last().expect("seeds nonempty");
    let in_window = |n: usize| n >= cfg.size_min && n <= cfg.size_max;
    let max2 = |a: &ArcSet<'_>| a.max_2arc_subset().map(|(k, _)| k).unwrap_or(usize::MAX);
    let mut complete = BTreeSet::new();
    let (mut level, mut front, mut kept) = match ctx.resume()? {
        Some((cp, kept, front)) => {
            complete.extend(cp.complete_sizes.iter().copied());
            (cp.level, front, kept)
        }
        None => {
            let lo = *sizes.first().expect("seeds nonempty");
            let front = seeds.iter().filter(|s| s.0 == lo).map(|s| s.1.clone()).collect();
            (lo, front, Vec::new())
        }
    };
    let accept = |n: usize, front: &[Rep], kept: &mut Vec<Rep>, complete: &mut BTreeSet<usize>| {
        for (s, stab) in front {
            if !in_window(n) || !ctx.is_complete(s) {
                continue;
            }
            if sizes.contains(&max2(&ArcSet::from_bitset(plane, s))) {
                complete.insert(n);
                kept.push((s.clone(), *stab));
            }
        }
    };
    if cfg.resume.is_none() {
        accept(level, &front, &mut kept, &mut complete);
    }
    while level < cfg.size_max && (!front.is_empty() || level < kmax) {
        let mut next = match ctx.extend(&front, |a| max2(a) <= kmax) {
            Ok(f) => f,
            Err(h) => return Err(ctx.halt(h, &kept, &complete, false)),
        };
        level += 1;
        next.extend(seeds.iter().filter(|s| s.0 == level).map(|s| s.1.clone()));
        next.sort_unstable();
        next.dedup_by(|a, b| a.0 == b.0);
        front = next;
        accept(level, &front, &mut kept, &mut complete);
        ctx.save(|| ctx.checkpoint(level, None, &complete, &BTreeMap::new(), &kept, &front))?;
    }
    let mut rep = ctx.report(&kept, true)?;
    for c in &rep.classes {
        *rep.class_counts.entry(c.size).or_default() += 1;
    }
    rep.complete_sizes = complete.into_iter().collect();
    Ok(rep)
}
