use std::collections::{HashSet, VecDeque};

use super::{Collineation, GroupError};
use crate::bitset::BitSet;
use crate::plane::{Plane, PointId};

/// Orbit of a point set under the group generated by `generators`, in
/// breadth-first discovery order starting from `set`.
pub fn orbit(
    plane: &Plane,
    set: &BitSet,
    generators: &[Collineation],
    cap: usize,
) -> Result<Vec<BitSet>, GroupError> {
    let perms: Vec<Vec<PointId>> = generators.iter().map(|g| g.permutation(plane)).collect();
    let mut seen: HashSet<BitSet> = HashSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(set.clone());
    queue.push_back(set.clone());
    while let Some(s) = queue.pop_front() {
        for perm in &perms {
            let mut img = plane.empty_set();
            for p in s.iter() {
                img.insert(perm[p] as usize);
            }
            if seen.insert(img.clone()) {
                if seen.len() > cap {
                    return Err(GroupError::BudgetExceeded { cap });
                }
                queue.push_back(img);
            }
        }
        out.push(s);
    }
    Ok(out)
}

/// Partition of the points into orbits of the generated group. Each orbit
/// is sorted; orbits are ordered by their smallest point.
pub fn point_orbits(plane: &Plane, generators: &[Collineation]) -> Vec<Vec<PointId>> {
    let n = plane.num_points();
    let perms: Vec<Vec<PointId>> = generators.iter().map(|g| g.permutation(plane)).collect();
    let mut assigned = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if assigned[start] {
            continue;
        }
        let mut orbit = vec![start as PointId];
        assigned[start] = true;
        let mut i = 0;
        while i < orbit.len() {
            let p = orbit[i] as usize;
            for perm in &perms {
                let img = perm[p] as usize;
                if !assigned[img] {
                    assigned[img] = true;
                    orbit.push(img as PointId);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}
