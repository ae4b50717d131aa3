use std::fmt;

use serde::{Deserialize, Serialize};

use super::GroupError;
use crate::field::{FieldElement, FieldSpec};
use crate::plane::{Plane, PointId, Triple};

pub type Matrix = [FieldElement; 9];

/// An element of PΓL(3,q): `x ↦ M · φ(x)` where `φ` raises every
/// coordinate to the power `p^frob`. The Frobenius part acts first.
///
/// The matrix is scaled so its first nonzero entry (row-major) is 1,
/// which makes the representation unique.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Collineation {
    matrix: Matrix,
    frob: u32,
}

impl fmt::Debug for Collineation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<u16> = self.matrix.iter().map(|c| c.0).collect();
        write!(f, "Collineation({m:?}, frob={})", self.frob)
    }
}

pub(crate) fn mat_mul(f: &FieldSpec, a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = [FieldElement::ZERO; 9];
    for i in 0..3 {
        for j in 0..3 {
            let mut s = FieldElement::ZERO;
            for k in 0..3 {
                s = f.add(s, f.mul(a[i * 3 + k], b[k * 3 + j]));
            }
            out[i * 3 + j] = s;
        }
    }
    out
}

#[inline]
pub(crate) fn mat_vec(f: &FieldSpec, m: &Matrix, v: &Triple) -> Triple {
    let row = |i: usize| {
        f.add(
            f.add(f.mul(m[i * 3], v[0]), f.mul(m[i * 3 + 1], v[1])),
            f.mul(m[i * 3 + 2], v[2]),
        )
    };
    [row(0), row(1), row(2)]
}

pub(crate) fn det(f: &FieldSpec, m: &Matrix) -> FieldElement {
    let t = |a, b, c| f.mul(f.mul(m[a], m[b]), m[c]);
    let pos = f.add(f.add(t(0, 4, 8), t(1, 5, 6)), t(2, 3, 7));
    let neg = f.add(f.add(t(2, 4, 6), t(0, 5, 7)), t(1, 3, 8));
    f.sub(pos, neg)
}

/// Inverse via the adjugate; `None` if singular.
pub(crate) fn mat_inv(f: &FieldSpec, m: &Matrix) -> Option<Matrix> {
    let d = det(f, m);
    let di = f.inv(d).ok()?;
    let c = |a: usize, b: usize, c_: usize, d_: usize| f.sub(f.mul(m[a], m[b]), f.mul(m[c_], m[d_]));
    // adjugate = transpose of cofactor matrix
    let adj = [
        c(4, 8, 5, 7),
        c(2, 7, 1, 8),
        c(1, 5, 2, 4),
        c(5, 6, 3, 8),
        c(0, 8, 2, 6),
        c(2, 3, 0, 5),
        c(3, 7, 4, 6),
        c(1, 6, 0, 7),
        c(0, 4, 1, 3),
    ];
    Some(adj.map(|x| f.mul(x, di)))
}

pub(crate) fn mat_frob(f: &FieldSpec, m: &Matrix, i: u32) -> Matrix {
    m.map(|x| f.frobenius(x, i))
}

fn normalize_matrix(f: &FieldSpec, m: &Matrix) -> Matrix {
    let lead = m.iter().find(|x| !x.is_zero()).copied().unwrap_or(FieldElement::ONE);
    let s = f.inv(lead).expect("nonzero lead");
    m.map(|x| f.mul(x, s))
}

/// Matrix with columns `λ_i t_i` sending the standard frame
/// `e1, e2, e3, e1+e2+e3` to `t_1..t_4` up to scalars.
pub(crate) fn frame_matrix(f: &FieldSpec, t: [&Triple; 4]) -> Option<Matrix> {
    let cols = [
        t[0][0], t[1][0], t[2][0], //
        t[0][1], t[1][1], t[2][1], //
        t[0][2], t[1][2], t[2][2],
    ];
    let inv = mat_inv(f, &cols)?;
    let lam = mat_vec(f, &inv, t[3]);
    if lam.iter().any(|x| x.is_zero()) {
        return None;
    }
    let mut out = cols;
    for i in 0..3 {
        for j in 0..3 {
            out[i * 3 + j] = f.mul(cols[i * 3 + j], lam[j]);
        }
    }
    Some(out)
}

impl Collineation {
    pub fn identity() -> Self {
        let (o, z) = (FieldElement::ONE, FieldElement::ZERO);
        Collineation {
            matrix: [o, z, z, z, o, z, z, z, o],
            frob: 0,
        }
    }

    pub fn new(field: &FieldSpec, matrix: Matrix, frob: u32) -> Result<Self, GroupError> {
        if det(field, &matrix).is_zero() {
            return Err(GroupError::Singular);
        }
        Ok(Collineation {
            matrix: normalize_matrix(field, &matrix),
            frob: frob % field.e(),
        })
    }

    /// From nine row-major entry labels and a Frobenius exponent.
    pub fn from_labels(field: &FieldSpec, labels: [u32; 9], frob: u32) -> Result<Self, GroupError> {
        let mut m = [FieldElement::ZERO; 9];
        for (slot, &l) in m.iter_mut().zip(&labels) {
            *slot = field.label_decode(l)?;
        }
        Self::new(field, m, frob)
    }

    pub fn to_labels(&self, field: &FieldSpec) -> ([u32; 9], u32) {
        (self.matrix.map(|x| field.label_encode(x)), self.frob)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn frob(&self) -> u32 {
        self.frob
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    #[inline]
    pub fn apply_vec(&self, field: &FieldSpec, v: &Triple) -> Triple {
        let w = if self.frob == 0 {
            *v
        } else {
            v.map(|x| field.frobenius(x, self.frob))
        };
        mat_vec(field, &self.matrix, &w)
    }

    #[inline]
    pub fn apply(&self, plane: &Plane, p: PointId) -> PointId {
        let w = self.apply_vec(plane.field(), plane.point(p));
        plane.index_of(&w).expect("invertible map")
    }

    pub fn apply_set(&self, plane: &Plane, set: &crate::bitset::BitSet) -> crate::bitset::BitSet {
        let mut out = plane.empty_set();
        for p in set.iter() {
            out.insert(self.apply(plane, p as PointId) as usize);
        }
        out
    }

    /// Image of every point, indexed by point.
    pub fn permutation(&self, plane: &Plane) -> Vec<PointId> {
        (0..plane.num_points())
            .map(|p| self.apply(plane, p as PointId))
            .collect()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, field: &FieldSpec, other: &Collineation) -> Collineation {
        let twisted = mat_frob(field, &other.matrix, self.frob);
        Collineation {
            matrix: normalize_matrix(field, &mat_mul(field, &self.matrix, &twisted)),
            frob: (self.frob + other.frob) % field.e(),
        }
    }

    pub fn inverse(&self, field: &FieldSpec) -> Collineation {
        let e = field.e();
        let back = (e - self.frob % e) % e;
        let inv = mat_inv(field, &self.matrix).expect("invertible");
        Collineation {
            matrix: normalize_matrix(field, &mat_frob(field, &inv, back)),
            frob: back,
        }
    }

    /// Smallest `k >= 1` with `self^k = 1`.
    pub fn order(&self, field: &FieldSpec) -> u64 {
        let mut g = *self;
        let mut k = 1;
        while !g.is_identity() {
            g = g.compose(field, self);
            k += 1;
        }
        k
    }

    /// The unique element with Frobenius part `frob` sending `src[i]` to
    /// `dst[i]` for all four points.
    pub fn from_frames(
        plane: &Plane,
        src: [PointId; 4],
        dst: [PointId; 4],
        frob: u32,
    ) -> Result<Collineation, GroupError> {
        let f = plane.field();
        let frob = frob % f.e();
        let twisted: Vec<Triple> = src
            .iter()
            .map(|&p| plane.point(p).map(|x| f.frobenius(x, frob)))
            .collect();
        let a = frame_matrix(f, [&twisted[0], &twisted[1], &twisted[2], &twisted[3]])
            .ok_or(GroupError::DegenerateFrame)?;
        let d = dst.map(|p| plane.point(p));
        let b = frame_matrix(f, d).ok_or(GroupError::DegenerateFrame)?;
        let m = mat_mul(f, &b, &mat_inv(f, &a).expect("frame matrix invertible"));
        let g = Collineation::new(f, m, frob)?;
        debug_assert!(src.iter().zip(&dst).all(|(&s, &t)| g.apply(plane, s) == t));
        Ok(g)
    }
}

/// |PΓL(3,q)| = e·q³(q³−1)(q²−1).
pub fn group_order(q: u32) -> u64 {
    let (_, e) = crate::field::prime_power(q).expect("prime power");
    let q = q as u64;
    e as u64 * q.pow(3) * (q.pow(3) - 1) * (q * q - 1)
}

/// Every element of PΓL(3,q), matrices in lexicographic order. Only
/// sensible for tiny q.
pub fn all_elements(field: &FieldSpec) -> Vec<Collineation> {
    let q = field.q() as usize;
    let mut out = Vec::new();
    let mut m = [FieldElement::ZERO; 9];
    for code in 0..q.pow(9) {
        let mut c = code;
        for slot in m.iter_mut().rev() {
            *slot = FieldElement((c % q) as u16);
            c /= q;
        }
        match m.iter().find(|x| !x.is_zero()) {
            Some(&lead) if lead == FieldElement::ONE => {}
            _ => continue,
        }
        if det(field, &m).is_zero() {
            continue;
        }
        for frob in 0..field.e() {
            out.push(Collineation { matrix: m, frob });
        }
    }
    out
}

/// Elementary generators of PΓL(3,q): transvections `I + a·E_ij` for
/// `a` in an additive basis, `diag(α,1,1)`, and the Frobenius map.
pub fn standard_generators(field: &FieldSpec) -> Vec<Collineation> {
    let mut gens = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            for k in 0..field.e() {
                let mut m = Collineation::identity().matrix;
                m[i * 3 + j] = field.alpha_pow(k as i64);
                gens.push(Collineation::new(field, m, 0).expect("unipotent"));
            }
        }
    }
    if field.q() > 2 {
        let mut m = Collineation::identity().matrix;
        m[0] = field.alpha_pow(1);
        gens.push(Collineation::new(field, m, 0).expect("diagonal"));
    }
    if field.e() > 1 {
        gens.push(Collineation {
            matrix: Collineation::identity().matrix,
            frob: 1,
        });
    }
    gens
}
