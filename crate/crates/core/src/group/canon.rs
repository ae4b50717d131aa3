//! Canonical forms and stabilizers under PΓL(3,q).
//!
//! A collineation is fixed by the image of one ordered frame (four points,
//! no three collinear) together with its Frobenius part. For a set `S` the
//! candidates are the maps sending some ordered frame of `S` onto the
//! standard frame `(1,0,0),(0,1,0),(0,0,1),(1,1,1)`; the canonical form is
//! the smallest image of `S` among them. Frames are first restricted to
//! those whose points have the smallest sequence of orbit-invariant point
//! classes, which keeps the candidate set invariant under the group.
//!
//! The candidates achieving the minimum form a coset `g₀·Stab(S)`, so the
//! stabilizer comes out of the same pass.
//!
//! Sets without a frame lie on a line plus one point. Up to four points
//! these fall into five orbits with fixed standard configurations; larger
//! ones are canonized by the group of the line.

use std::cmp::Ordering;
use std::sync::OnceLock;

use serde::Serialize;

use super::element::{frame_matrix, mat_frob, mat_inv, mat_vec, Matrix};
use super::{all_elements, group_order, Collineation, GroupDescription, GroupError};
use crate::bitset::BitSet;
use crate::field::FieldElement;
use crate::plane::{LineId, Plane, PointId};

/// Largest group enumerated element by element.
pub const BRUTE_FORCE_LIMIT: u64 = 1_000_000;

/// Stabilizers larger than this are reported by order only.
pub const ELEMENT_LIMIT: u64 = 10_000;

/// Sorted point-index list of a fixed member of the set's orbit.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CanonicalForm(BitSet);

impl CanonicalForm {
    pub fn points(&self) -> Vec<PointId> {
        self.0.iter().map(|p| p as PointId).collect()
    }

    pub fn as_set(&self) -> &BitSet {
        &self.0
    }

    pub fn into_set(self) -> BitSet {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.count()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Little-endian `u16` point indices, ascending.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.0.iter().flat_map(|p| (p as u16).to_le_bytes()).collect()
    }
}

impl Ord for CanonicalForm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .count()
            .cmp(&other.0.count())
            .then_with(|| self.0.iter().cmp(other.0.iter()))
    }
}

impl PartialOrd for CanonicalForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CanonicalForm({:?})", self.points())
    }
}

impl Serialize for CanonicalForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.points().serialize(s)
    }
}

impl CanonicalForm {
    /// Wraps an index list that is already known to be canonical.
    pub fn from_points(plane: &Plane, pts: &[PointId]) -> Self {
        CanonicalForm(BitSet::from_indices(
            plane.num_points(),
            pts.iter().map(|&p| p as usize),
        ))
    }
}

/// Result of canonizing a set.
#[derive(Debug, Clone)]
pub struct Canon {
    pub form: CanonicalForm,
    pub stabilizer_order: u64,
}

/// Orbit-invariant class of each member: counts of lines through the point
/// by their intersection size with the set, refined once by the classes of
/// the points sharing those lines.
fn point_classes(plane: &Plane, pts: &[PointId], set: &BitSet) -> Vec<u32> {
    let n = pts.len();
    let line_size = |l: LineId| plane.line_mask(l).intersection_count(set);
    let mut sig: Vec<Vec<u32>> = Vec::with_capacity(n);
    for &p in pts {
        let mut v = vec![0u32; n + 1];
        for &l in plane.lines_through_point(p) {
            v[line_size(l)] += 1;
        }
        sig.push(v);
    }
    let classes = rank(&sig);

    let pos = |p: PointId| pts.binary_search(&p).expect("member");
    let mut refined: Vec<(u32, Vec<Vec<u32>>)> = Vec::with_capacity(n);
    for (i, &p) in pts.iter().enumerate() {
        let mut lines: Vec<Vec<u32>> = Vec::new();
        for &l in plane.lines_through_point(p) {
            if line_size(l) < 2 {
                continue;
            }
            let mut cs: Vec<u32> = plane
                .points_on_line(l)
                .iter()
                .filter(|&&x| x != p && set.contains(x as usize))
                .map(|&x| classes[pos(x)])
                .collect();
            cs.sort_unstable();
            lines.push(cs);
        }
        lines.sort_unstable();
        refined.push((classes[i], lines));
    }
    rank(&refined)
}

fn rank<T: Ord + Clone>(keys: &[T]) -> Vec<u32> {
    let mut sorted: Vec<T> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).expect("present") as u32)
        .collect()
}

/// Ordered frames of the set with the smallest class sequence.
fn minimal_frames(plane: &Plane, pts: &[PointId], classes: &[u32]) -> Vec<[usize; 4]> {
    let n = pts.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (classes[i], i));
    let mut best: Option<[u32; 4]> = None;
    let mut out = Vec::new();
    let col = |a: usize, b: usize, c: usize| plane.collinear(pts[a], pts[b], pts[c]);
    for &a in &order {
        if best.is_some_and(|b| classes[a] > b[0]) {
            break;
        }
        for &b in &order {
            if b == a {
                continue;
            }
            let kb = [classes[a], classes[b]];
            if best.is_some_and(|bk| kb > [bk[0], bk[1]]) {
                break;
            }
            for &c in &order {
                if c == a || c == b || col(a, b, c) {
                    continue;
                }
                let kc = [classes[a], classes[b], classes[c]];
                if best.is_some_and(|bk| kc > [bk[0], bk[1], bk[2]]) {
                    break;
                }
                for &d in &order {
                    if d == a || d == b || d == c {
                        continue;
                    }
                    let key = [classes[a], classes[b], classes[c], classes[d]];
                    if best.is_some_and(|bk| key > bk) {
                        break;
                    }
                    if col(a, b, d) || col(a, c, d) || col(b, c, d) {
                        continue;
                    }
                    if best != Some(key) {
                        best = Some(key);
                        out.clear();
                    }
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

/// `true` if `a` precedes `b` as sorted index lists of equal length.
#[inline]
fn set_less(a: &[u64], b: &[u64]) -> Option<bool> {
    for (x, y) in a.iter().zip(b) {
        let d = x ^ y;
        if d != 0 {
            return Some(x & (d & d.wrapping_neg()) != 0);
        }
    }
    None
}

/// Canonization context for one plane.
pub struct Canonizer<'p> {
    plane: &'p Plane,
    /// `frob_perm[i][p]` is the point with coordinates of `p` raised to `p^i`.
    frob_perm: Vec<Vec<PointId>>,
    order: u64,
    line_group: OnceLock<Vec<Collineation>>,
}

struct Scan {
    best: Vec<u64>,
    ties: Vec<(usize, u32)>,
}

impl<'p> Canonizer<'p> {
    pub fn new(plane: &'p Plane) -> Self {
        let f = plane.field();
        let frob_perm = (0..f.e())
            .map(|i| {
                (0..plane.num_points())
                    .map(|p| {
                        let v = plane.point(p as PointId).map(|x| f.frobenius(x, i));
                        plane.index_of(&v).expect("nonzero")
                    })
                    .collect()
            })
            .collect();
        Canonizer {
            plane,
            frob_perm,
            order: group_order(f.q()),
            line_group: OnceLock::new(),
        }
    }

    pub fn plane(&self) -> &'p Plane {
        self.plane
    }

    pub fn group_order(&self) -> u64 {
        self.order
    }

    #[inline]
    fn image_into(&self, m: &Matrix, frob: u32, pts: &[PointId], out: &mut [u64]) {
        let f = self.plane.field();
        out.iter_mut().for_each(|w| *w = 0);
        let perm = &self.frob_perm[frob as usize];
        for &p in pts {
            let v = mat_vec(f, m, self.plane.point(perm[p as usize]));
            let i = self.plane.index_of(&v).expect("invertible") as usize;
            out[i >> 6] |= 1 << (i & 63);
        }
    }

    /// Inverse frame matrix for each candidate frame.
    fn frame_maps(&self, pts: &[PointId], frames: &[[usize; 4]]) -> Vec<Matrix> {
        let f = self.plane.field();
        frames
            .iter()
            .map(|t| {
                let a = frame_matrix(f, t.map(|i| self.plane.point(pts[i])))
                    .expect("frame in general position");
                mat_inv(f, &a).expect("invertible")
            })
            .collect()
    }

    fn scan(&self, pts: &[PointId], maps: &[Matrix]) -> Scan {
        let f = self.plane.field();
        let words = self.plane.num_points().div_ceil(64);
        let mut best: Option<Vec<u64>> = None;
        let mut ties = Vec::new();
        let mut img = vec![0u64; words];
        for (ti, m0) in maps.iter().enumerate() {
            for frob in 0..f.e() {
                // M·φ maps the frame to the standard one iff M = φ(A⁻¹)
                let m = if frob == 0 { *m0 } else { mat_frob(f, m0, frob) };
                self.image_into(&m, frob, pts, &mut img);
                match best.as_deref().map(|b| set_less(&img, b)) {
                    None | Some(Some(true)) => {
                        best = Some(img.clone());
                        ties.clear();
                        ties.push((ti, frob));
                    }
                    Some(None) => ties.push((ti, frob)),
                    Some(Some(false)) => {}
                }
            }
        }
        Scan {
            best: best.expect("at least one frame"),
            ties,
        }
    }

    fn words_to_set(&self, words: Vec<u64>) -> BitSet {
        let mut s = self.plane.empty_set();
        for (i, w) in words.iter().enumerate() {
            let mut w = *w;
            while w != 0 {
                s.insert(i * 64 + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        s
    }

    /// Canonical form together with the stabilizer order.
    pub fn canonize(&self, set: &BitSet) -> Result<Canon, GroupError> {
        let n = self.plane.num_points();
        if set.count() * 2 > n {
            let c = self.canonize(&set.complement())?;
            return Ok(Canon {
                form: CanonicalForm(c.form.0.complement()),
                stabilizer_order: c.stabilizer_order,
            });
        }
        let pts = Plane::sorted_points(set);
        let classes = point_classes(self.plane, &pts, set);
        let frames = minimal_frames(self.plane, &pts, &classes);
        if frames.is_empty() {
            return Ok(self.degenerate(set, &pts)?.canon);
        }
        let maps = self.frame_maps(&pts, &frames);
        let scan = self.scan(&pts, &maps);
        Ok(Canon {
            stabilizer_order: scan.ties.len() as u64,
            form: CanonicalForm(self.words_to_set(scan.best)),
        })
    }

    pub fn canonical_form(&self, set: &BitSet) -> Result<CanonicalForm, GroupError> {
        Ok(self.canonize(set)?.form)
    }

    /// A group element mapping `set` onto its canonical form.
    pub fn transporter(&self, set: &BitSet) -> Result<Collineation, GroupError> {
        let pts = Plane::sorted_points(set);
        let classes = point_classes(self.plane, &pts, set);
        let frames = minimal_frames(self.plane, &pts, &classes);
        if frames.is_empty() {
            let d = self.degenerate(set, &pts)?;
            return self.degenerate_transporter(set, &d);
        }
        let maps = self.frame_maps(&pts, &frames);
        let scan = self.scan(&pts, &maps);
        let (ti, frob) = scan.ties[0];
        Ok(self.candidate(&maps[ti], frob))
    }

    fn candidate(&self, m0: &Matrix, frob: u32) -> Collineation {
        let f = self.plane.field();
        Collineation::new(f, mat_frob(f, m0, frob), frob).expect("invertible")
    }

    /// Stabilizer of `set`, with elements when its order is at most
    /// [`ELEMENT_LIMIT`].
    pub fn stabilizer(&self, set: &BitSet) -> Result<GroupDescription, GroupError> {
        let n = self.plane.num_points();
        let f = self.plane.field();
        if set.count() * 2 > n {
            return self.stabilizer(&set.complement());
        }
        let pts = Plane::sorted_points(set);
        let classes = point_classes(self.plane, &pts, set);
        let frames = minimal_frames(self.plane, &pts, &classes);
        if frames.is_empty() {
            let d = self.degenerate(set, &pts)?;
            let Some(mut elems) = self.degenerate_stabilizer(set, &d)? else {
                return Ok(GroupDescription::order_only(d.canon.stabilizer_order));
            };
            elems.sort();
            debug_assert_eq!(elems.len() as u64, d.canon.stabilizer_order);
            debug_assert!(elems.iter().all(|g| g.apply_set(self.plane, set) == *set));
            return Ok(GroupDescription::from_elements(f, elems));
        }
        let maps = self.frame_maps(&pts, &frames);
        let scan = self.scan(&pts, &maps);
        let order = scan.ties.len() as u64;
        if order > ELEMENT_LIMIT {
            return Ok(GroupDescription::order_only(order));
        }
        let (t0, f0) = scan.ties[0];
        let g0_inv = self.candidate(&maps[t0], f0).inverse(f);
        let mut elems: Vec<Collineation> = scan
            .ties
            .iter()
            .map(|&(ti, frob)| g0_inv.compose(f, &self.candidate(&maps[ti], frob)))
            .collect();
        elems.sort();
        debug_assert!(elems.iter().all(|g| g.apply_set(self.plane, set) == *set));
        Ok(GroupDescription::from_elements(f, elems))
    }

    fn std_point(&self, labels: [u32; 3]) -> PointId {
        self.plane
            .point_from_labels(labels)
            .expect("labels in range")
            .expect("nonzero")
    }

    /// PΓL(2,q) acting on the line `z = 0` and fixing `(0,0,1)`.
    fn line_group(&self) -> &[Collineation] {
        self.line_group.get_or_init(|| {
            let f = self.plane.field();
            let mut out = Vec::new();
            for a in f.elements() {
                for b in f.elements() {
                    for c in f.elements() {
                        for d in f.elements() {
                            let first = [a, b, c, d].into_iter().find(|x| !x.is_zero());
                            if first != Some(FieldElement::ONE)
                                || f.mul(a, d) == f.mul(b, c)
                            {
                                continue;
                            }
                            let z = FieldElement::ZERO;
                            let m = [a, b, z, c, d, z, z, z, FieldElement::ONE];
                            for frob in 0..f.e() {
                                out.push(Collineation::new(f, m, frob).expect("invertible"));
                            }
                        }
                    }
                }
            }
            out
        })
    }

    /// Sets without a frame. Up to four points these fall into known
    /// orbits; larger ones are a line `L` with at least three members plus
    /// at most one point `c`. A map `t` sends `L` to `z = 0` and `c` to
    /// `(0,0,1)`, and the canonical form is the least image of `t(S)` under
    /// the line group. The elements fixing `z = 0` pointwise (and `c`) act
    /// trivially, which multiplies the stabilizer order.
    fn degenerate(&self, set: &BitSet, pts: &[PointId]) -> Result<Degenerate, GroupError> {
        let plane = self.plane;
        let f = plane.field();
        let npts = plane.num_points() as u64;
        let q = plane.q() as u64;
        let line_pts = q + 1;
        let lines = npts;
        let collinear = pts.len() <= 2
            || pts[2..]
                .iter()
                .all(|&c| plane.collinear(pts[0], pts[1], c));
        let (x, y, z, u) = (
            self.std_point([1, 0, 0]),
            self.std_point([0, 1, 0]),
            self.std_point([0, 0, 1]),
            self.std_point([1, 1, 0]),
        );
        // (standard members, orbit size)
        let known: Option<(Vec<PointId>, u64)> = match (pts.len(), collinear) {
            (0, _) => Some((vec![], 1)),
            (1, _) => Some((vec![x], npts)),
            (2, _) => Some((vec![x, y], npts * (npts - 1) / 2)),
            (3, true) => Some((vec![x, y, u], lines * binom(line_pts, 3))),
            (3, false) => Some((vec![x, y, z], npts * (npts - 1) * (npts - line_pts) / 6)),
            (4, false) => Some((vec![x, y, u, z], lines * binom(line_pts, 3) * (npts - line_pts))),
            _ => None,
        };
        if let Some((std, orbit)) = known {
            return Ok(Degenerate {
                canon: Canon {
                    form: CanonicalForm::from_points(plane, &std),
                    stabilizer_order: self.order / orbit,
                },
                line: None,
            });
        }
        // the line holding all members but at most one
        let line = if collinear {
            plane.line_through(pts[0], pts[1]).expect("distinct")
        } else {
            let l01 = plane.line_through(pts[0], pts[1]).expect("distinct");
            let on = pts.iter().filter(|&&p| plane.incident(p, l01)).count();
            if on + 1 == pts.len() {
                l01
            } else {
                // pts[0] or pts[1] is the odd point; the others share a line
                plane.line_through(pts[2], pts[3]).expect("distinct")
            }
        };
        let on_line: Vec<PointId> = pts.iter().copied().filter(|&p| plane.incident(p, line)).collect();
        let off: Option<PointId> = pts.iter().copied().find(|&p| !plane.incident(p, line));
        let (p0, p1) = (on_line[0], on_line[1]);
        let c = off.unwrap_or_else(|| {
            (0..plane.num_points() as PointId)
                .find(|&p| !plane.incident(p, line))
                .expect("a point off the line")
        });
        let l0c = plane.line_through(p0, c).expect("distinct");
        let l1c = plane.line_through(p1, c).expect("distinct");
        let w = (0..plane.num_points() as PointId)
            .find(|&p| !plane.incident(p, line) && !plane.incident(p, l0c) && !plane.incident(p, l1c))
            .expect("a point in general position");
        let one = self.std_point([1, 1, 1]);
        let t = Collineation::from_frames(plane, [p0, p1, c, w], [x, y, z, one], 0)?;
        let moved = t.apply_set(plane, set);
        let mut best: Option<BitSet> = None;
        let mut ties: Vec<usize> = Vec::new();
        for (i, h) in self.line_group().iter().enumerate() {
            let img = h.apply_set(plane, &moved);
            match best.as_ref().map(|b| set_less(img.words(), b.words())) {
                None | Some(Some(true)) => {
                    best = Some(img);
                    ties.clear();
                    ties.push(i);
                }
                Some(None) => ties.push(i),
                Some(Some(false)) => {}
            }
        }
        let zero = FieldElement::ZERO;
        let one_f = FieldElement::ONE;
        let mut kernel = Vec::new();
        for lam in f.elements().filter(|l| !l.is_zero()) {
            if off.is_some() {
                let m = [one_f, zero, zero, zero, one_f, zero, zero, zero, lam];
                kernel.push(Collineation::new(f, m, 0).expect("invertible"));
            } else {
                for a in f.elements() {
                    for b in f.elements() {
                        let m = [one_f, zero, a, zero, one_f, b, zero, zero, lam];
                        kernel.push(Collineation::new(f, m, 0).expect("invertible"));
                    }
                }
            }
        }
        let ties: Vec<Collineation> = ties.iter().map(|&i| self.line_group()[i].clone()).collect();
        Ok(Degenerate {
            canon: Canon {
                form: CanonicalForm(best.expect("line group is nonempty")),
                stabilizer_order: ties.len() as u64 * kernel.len() as u64,
            },
            line: Some(LineCase { t, ties, kernel }),
        })
    }

    /// Whole-group enumeration for the small frameless orbits.
    fn brute_force_elements(&self) -> Result<Vec<Collineation>, GroupError> {
        if self.order > BRUTE_FORCE_LIMIT {
            return Err(GroupError::Unsupported(format!(
                "|PΓL(3,{})| = {} exceeds the brute-force limit",
                self.plane.q(),
                self.order
            )));
        }
        Ok(all_elements(self.plane.field()))
    }

    fn degenerate_transporter(&self, set: &BitSet, d: &Degenerate) -> Result<Collineation, GroupError> {
        let f = self.plane.field();
        if let Some(lc) = &d.line {
            return Ok(lc.ties[0].compose(f, &lc.t));
        }
        self.brute_force_elements()?
            .into_iter()
            .find(|g| g.apply_set(self.plane, set) == *d.canon.form.as_set())
            .ok_or(GroupError::Unsupported("no transporter found".into()))
    }

    /// `None` when the elements are too many to list.
    fn degenerate_stabilizer(&self, set: &BitSet, d: &Degenerate) -> Result<Option<Vec<Collineation>>, GroupError> {
        let f = self.plane.field();
        if d.canon.stabilizer_order > ELEMENT_LIMIT {
            return Ok(None);
        }
        let Some(lc) = &d.line else {
            if self.order > BRUTE_FORCE_LIMIT {
                return Ok(None);
            }
            let elems = self
                .brute_force_elements()?
                .into_iter()
                .filter(|g| g.apply_set(self.plane, set) == *set)
                .collect();
            return Ok(Some(elems));
        };
        // t⁻¹·h₀⁻¹·h·k·t over ties h and kernel elements k
        let t_inv = lc.t.inverse(f);
        let pre = t_inv.compose(f, &lc.ties[0].inverse(f));
        let mut out = Vec::new();
        for h in &lc.ties {
            let ph = pre.compose(f, h);
            for k in &lc.kernel {
                out.push(ph.compose(f, k).compose(f, &lc.t));
            }
        }
        Ok(Some(out))
    }
}

struct LineCase {
    t: Collineation,
    /// Line-group elements reaching the minimum.
    ties: Vec<Collineation>,
    /// Elements fixing the line pointwise and the odd point.
    kernel: Vec<Collineation>,
}

struct Degenerate {
    canon: Canon,
    line: Option<LineCase>,
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Brute-force canonical form over an explicit element list, for tests.
pub fn brute_force_canonical_form(
    plane: &Plane,
    elements: &[Collineation],
    set: &BitSet,
) -> (Vec<PointId>, u64) {
    let mut best: Option<Vec<PointId>> = None;
    let mut stab = 0;
    for g in elements {
        let img = g.apply_set(plane, set);
        if img == *set {
            stab += 1;
        }
        let v = Plane::sorted_points(&img);
        if best.as_ref().is_none_or(|b| v < *b) {
            best = Some(v);
        }
    }
    (best.unwrap_or_default(), stab)
}
