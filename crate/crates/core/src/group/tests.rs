use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::bitset::BitSet;
use crate::field::{FieldElement, FieldSpec};
use crate::plane::{Plane, PointId};
use crate::witness;

fn plane(q: u32) -> Plane {
    Plane::new(FieldSpec::with_order(q).unwrap())
}

fn pt(plane: &Plane, l: [u32; 3]) -> PointId {
    plane.point_from_labels(l).unwrap().unwrap()
}

fn std_frame(plane: &Plane) -> [PointId; 4] {
    [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]].map(|l| pt(plane, l))
}

pub(crate) fn random_element(rng: &mut impl Rng, f: &FieldSpec) -> Collineation {
    loop {
        let m: Matrix = std::array::from_fn(|_| FieldElement(rng.gen_range(0..f.q()) as u16));
        if let Ok(g) = Collineation::new(f, m, rng.gen_range(0..f.e())) {
            return g;
        }
    }
}

fn random_set(rng: &mut impl Rng, plane: &Plane, k: usize) -> BitSet {
    let mut s = plane.empty_set();
    while s.count() < k {
        s.insert(rng.gen_range(0..plane.num_points()));
    }
    s
}

#[test]
fn apply_examples() {
    let p = Plane::new(FieldSpec::gf16_paper());
    let f = p.field();
    let id = Collineation::identity();
    for x in 0..273 {
        assert_eq!(id.apply(&p, x), x);
    }
    // (x,y,z) -> (y,z,x)
    let rot = Collineation::from_labels(f, [0, 1, 0, 0, 0, 1, 1, 0, 0], 0).unwrap();
    assert_eq!(rot.apply(&p, pt(&p, [1, 0, 0])), pt(&p, [0, 0, 1]));
    assert_eq!(rot.apply(&p, pt(&p, [0, 0, 1])), pt(&p, [0, 1, 0]));
    assert_eq!(rot.apply(&p, pt(&p, [1, 1, 1])), pt(&p, [1, 1, 1]));
    // squaring: (1,α,α³) -> (1,α²,α⁶)
    let frob = Collineation::from_labels(f, [1, 0, 0, 0, 1, 0, 0, 0, 1], 1).unwrap();
    assert_eq!(frob.apply(&p, pt(&p, [1, 2, 4])), pt(&p, [1, 3, 7]));
}

#[test]
fn singular_matrix_rejected() {
    let f = FieldSpec::gf16_paper();
    assert_eq!(
        Collineation::from_labels(&f, [1, 1, 0, 1, 1, 0, 0, 0, 1], 0),
        Err(GroupError::Singular)
    );
}

#[test]
fn compose_and_inverse() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for q in [4, 8, 9, 16] {
        let p = plane(q);
        let f = p.field();
        for _ in 0..50 {
            let g = random_element(&mut rng, f);
            let h = random_element(&mut rng, f);
            let gh = g.compose(f, &h);
            assert_eq!(gh.frob(), (g.frob() + h.frob()) % f.e());
            assert!(g.compose(f, &g.inverse(f)).is_identity());
            assert!(g.inverse(f).compose(f, &g).is_identity());
            for x in (0..p.num_points() as PointId).step_by(7) {
                assert_eq!(gh.apply(&p, x), g.apply(&p, h.apply(&p, x)));
            }
        }
    }
}

#[test]
fn pure_matrices_compose_by_product() {
    let f = FieldSpec::with_order(5).unwrap();
    let a = Collineation::from_labels(&f, [1, 2, 0, 0, 1, 0, 0, 0, 1], 0).unwrap();
    let b = Collineation::from_labels(&f, [1, 0, 0, 3, 1, 0, 0, 0, 1], 0).unwrap();
    let ab = a.compose(&f, &b);
    let expect = Collineation::new(&f, element::mat_mul(&f, a.matrix(), b.matrix()), 0).unwrap();
    assert_eq!(ab, expect);
}

#[test]
fn collineations_map_lines_to_lines() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let p = Plane::new(FieldSpec::gf16_paper());
    let lines: HashSet<BitSet> = (0..273).map(|l| p.line_mask(l).clone()).collect();
    for _ in 0..20 {
        let g = random_element(&mut rng, p.field());
        let perm = g.permutation(&p);
        let mut seen = perm.clone();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), 273);
        for l in 0..273 {
            assert!(lines.contains(&g.apply_set(&p, p.line_mask(l))));
        }
    }
}

#[test]
fn frames() {
    let p = Plane::new(FieldSpec::gf16_paper());
    let fr = std_frame(&p);
    assert!(Collineation::from_frames(&p, fr, fr, 0).unwrap().is_identity());
    let swapped = [fr[1], fr[0], fr[2], fr[3]];
    let g = Collineation::from_frames(&p, fr, swapped, 0).unwrap();
    assert_eq!(g.to_labels(p.field()), ([0, 1, 0, 1, 0, 0, 0, 0, 1], 0));
    let bad = [fr[0], fr[1], pt(&p, [1, 1, 0]), fr[3]];
    assert_eq!(
        Collineation::from_frames(&p, bad, fr, 0),
        Err(GroupError::DegenerateFrame)
    );

    // PG(2,2): the complement of a line is a frame
    let p2 = plane(2);
    let off: Vec<PointId> = (0..7).filter(|&x| !p2.incident(x, 0)).collect();
    let dst = [off[2], off[0], off[3], off[1]];
    let g = Collineation::from_frames(&p2, std_frame(&p2), dst, 0).unwrap();
    for (s, d) in std_frame(&p2).iter().zip(&dst) {
        assert_eq!(g.apply(&p2, *s), *d);
    }
}

#[test]
fn frames_with_frobenius() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let p = Plane::new(FieldSpec::gf16_paper());
    for _ in 0..30 {
        let g = random_element(&mut rng, p.field());
        let fr = std_frame(&p);
        let img = fr.map(|x| g.apply(&p, x));
        assert_eq!(Collineation::from_frames(&p, fr, img, g.frob()).unwrap(), g);
    }
}

#[test]
fn group_orders() {
    assert_eq!(group_order(2), 168);
    assert_eq!(group_order(4), 120960);
    assert_eq!(group_order(16), 17108582400);
    assert_eq!(all_elements(&FieldSpec::with_order(2).unwrap()).len(), 168);
    assert_eq!(all_elements(&FieldSpec::with_order(3).unwrap()).len() as u64, group_order(3));
}

#[test]
fn invertible_matrices_over_gf2() {
    // 7·6·4 ordered bases of GF(2)^3
    let f = FieldSpec::with_order(2).unwrap();
    let mut count = 0;
    for code in 0u32..512 {
        let m: Matrix = std::array::from_fn(|i| FieldElement((code >> i & 1) as u16));
        if !element::det(&f, &m).is_zero() {
            count += 1;
        }
    }
    assert_eq!(count, 168);
}

fn closure_size(f: &FieldSpec, gens: &[Collineation]) -> usize {
    let mut seen: HashSet<Collineation> = HashSet::new();
    let mut stack = vec![Collineation::identity()];
    seen.insert(Collineation::identity());
    while let Some(g) = stack.pop() {
        for h in gens {
            let x = h.compose(f, &g);
            if seen.insert(x) {
                stack.push(x);
            }
        }
    }
    seen.len()
}

#[test]
fn standard_generators_generate() {
    for q in [2, 3, 4] {
        let f = FieldSpec::with_order(q).unwrap();
        let gens = standard_generators(&f);
        assert_eq!(closure_size(&f, &gens) as u64, group_order(q), "q={q}");
    }
}

#[test]
fn table1_stabilizer_is_s3() {
    let p = Plane::new(FieldSpec::gf16_paper());
    let arc = witness::table1_arc(&p);
    let c = Canonizer::new(&p);
    let g = c.stabilizer(arc.members()).unwrap();
    assert_eq!(g.order, 6);
    assert_eq!(g.abelian, Some(false));
    assert_eq!(g.structure_name.as_deref(), Some("S3"));
    assert_eq!(g.elements.len(), 6);
    assert!(g.is_closed(p.field()));
    assert!(g.elements.iter().all(|x| x.apply_set(&p, arc.members()) == *arc.members()));
}

#[test]
fn frame_stabilizer_in_fano_plane() {
    let p = plane(2);
    let set = BitSet::from_indices(7, std_frame(&p).map(|x| x as usize));
    let c = Canonizer::new(&p);
    let g = c.stabilizer(&set).unwrap();
    let brute = all_elements(p.field())
        .into_iter()
        .filter(|x| x.apply_set(&p, &set) == set)
        .count();
    assert_eq!(brute, 24);
    assert_eq!(g.order, 24);
    assert_eq!(g.structure_name.as_deref(), Some("S4"));
    assert!(g.is_closed(p.field()));
}

#[test]
fn full_plane_stabilizer_is_whole_group() {
    let p = Plane::new(FieldSpec::gf16_paper());
    let c = Canonizer::new(&p);
    let g = c.stabilizer(&BitSet::full(273)).unwrap();
    assert_eq!(g.order, group_order(16));
    assert!(g.elements.is_empty());
}

#[test]
fn fano_frames_form_one_orbit() {
    let p = plane(2);
    let c = Canonizer::new(&p);
    let frames: Vec<BitSet> = (0..7)
        .map(|l| p.line_mask(l).complement())
        .collect();
    let forms: HashSet<_> = frames.iter().map(|s| c.canonical_form(s).unwrap()).collect();
    assert_eq!(forms.len(), 1);
    let orb = orbit(&p, &frames[0], &standard_generators(p.field()), 1000).unwrap();
    let orb: HashSet<_> = orb.into_iter().collect();
    assert_eq!(orb, frames.into_iter().collect());
    assert_eq!(orb.len() * 24, 168);
}

#[test]
fn canonical_form_agrees_with_brute_force_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for q in [2, 3] {
        let p = plane(q);
        let c = Canonizer::new(&p);
        let elems = all_elements(p.field());
        let sets: Vec<BitSet> = (0..60)
            .map(|i| {
                let k = i % (p.num_points() + 1);
                random_set(&mut rng, &p, k)
            })
            .collect();
        let ours: Vec<Canon> = sets.iter().map(|s| c.canonize(s).unwrap()).collect();
        let brute: Vec<_> = sets
            .iter()
            .map(|s| brute_force_canonical_form(&p, &elems, s))
            .collect();
        for i in 0..sets.len() {
            assert_eq!(ours[i].stabilizer_order, brute[i].1, "q={q} set {:?}", sets[i]);
            assert_eq!(ours[i].form.len(), sets[i].count());
            for j in 0..sets.len() {
                assert_eq!(ours[i].form == ours[j].form, brute[i].0 == brute[j].0);
            }
        }
    }
}

#[test]
fn degenerate_sets() {
    let p = Plane::new(FieldSpec::gf16_paper());
    let c = Canonizer::new(&p);
    let line: Vec<PointId> = p.points_on_line(5).to_vec();
    let off = (0..273).find(|&x| !p.incident(x, 5)).unwrap();
    let total = group_order(16);
    let cases: Vec<(Vec<PointId>, u64)> = vec![
        (vec![], 1),
        (vec![line[0]], 273),
        (vec![line[0], line[3]], 273 * 272 / 2),
        (line[..3].to_vec(), 273 * 680),
        (vec![line[1], line[2], off], 273 * 272 * 256 / 6),
        (vec![line[1], line[2], line[7], off], 273 * 680 * 256),
    ];
    for (pts, orbit_size) in cases {
        let s = BitSet::from_indices(273, pts.iter().map(|&x| x as usize));
        let canon = c.canonize(&s).unwrap();
        assert_eq!(canon.stabilizer_order * orbit_size, total);
        assert_eq!(canon.form.len(), pts.len());
        let mut rng = ChaCha8Rng::seed_from_u64(pts.len() as u64);
        let g = random_element(&mut rng, p.field());
        assert_eq!(c.canonical_form(&g.apply_set(&p, &s)).unwrap(), canon.form);
    }
    // larger frameless sets go through the line group
    let four = BitSet::from_indices(273, line[..4].iter().map(|&x| x as usize));
    let canon = c.canonize(&four).unwrap();
    assert_eq!(canon.stabilizer_order % (256 * 15), 0);
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for k in [4usize, 6, 9] {
        let mut pts = line[..k].to_vec();
        let s = BitSet::from_indices(273, pts.iter().map(|&x| x as usize));
        let a = c.canonize(&s).unwrap();
        pts.push(off);
        let s2 = BitSet::from_indices(273, pts.iter().map(|&x| x as usize));
        let b = c.canonize(&s2).unwrap();
        assert_eq!(a.stabilizer_order, b.stabilizer_order * 256);
        for set in [&s, &s2] {
            let g = random_element(&mut rng, p.field());
            let canon = c.canonize(set).unwrap();
            assert_eq!(c.canonical_form(&g.apply_set(&p, set)).unwrap(), canon.form);
            let t = c.transporter(set).unwrap();
            assert_eq!(t.apply_set(&p, set), *canon.form.as_set());
        }
    }
}

/// Collinear and line-plus-point sets against the whole group.
#[test]
fn line_group_matches_brute_force() {
    for q in [3, 4] {
        let p = plane(q);
        let c = Canonizer::new(&p);
        let elems = all_elements(p.field());
        let mut rng = ChaCha8Rng::seed_from_u64(q as u64);
        let mut sets = Vec::new();
        for _ in 0..12 {
            let l = rng.gen_range(0..p.num_lines()) as u16;
            let on = p.points_on_line(l);
            let k = rng.gen_range(4..=on.len());
            let mut pts: Vec<PointId> = on.to_vec();
            pts.shuffle(&mut rng);
            pts.truncate(k);
            if rng.gen_bool(0.5) {
                let off = loop {
                    let x = rng.gen_range(0..p.num_points()) as PointId;
                    if !p.incident(x, l) {
                        break x;
                    }
                };
                pts.push(off);
            }
            sets.push(BitSet::from_indices(p.num_points(), pts.iter().map(|&x| x as usize)));
        }
        let ours: Vec<_> = sets.iter().map(|s| c.canonize(s).unwrap()).collect();
        let brute: Vec<_> = sets.iter().map(|s| brute_force_canonical_form(&p, &elems, s)).collect();
        for i in 0..sets.len() {
            assert_eq!(ours[i].stabilizer_order, brute[i].1);
            let g = c.stabilizer(&sets[i]).unwrap();
            assert_eq!(g.order, brute[i].1);
            assert!(g.elements.is_empty() || g.is_closed(p.field()));
            for j in 0..sets.len() {
                assert_eq!(ours[i].form == ours[j].form, brute[i].0 == brute[j].0);
            }
        }
    }
}

#[test]
fn degenerate_brute_force_small_q() {
    let p = plane(3);
    let c = Canonizer::new(&p);
    let elems = all_elements(p.field());
    let line = p.points_on_line(0);
    let s = BitSet::from_indices(13, line.iter().map(|&x| x as usize));
    let (_, stab) = brute_force_canonical_form(&p, &elems, &s);
    assert_eq!(c.canonize(&s).unwrap().stabilizer_order, stab);
    let g = c.stabilizer(&s).unwrap();
    assert_eq!(g.order, stab);
}

#[test]
fn transporter_maps_to_canonical_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let p = plane(5);
    let c = Canonizer::new(&p);
    for k in 0..12 {
        let s = random_set(&mut rng, &p, k);
        let t = c.transporter(&s).unwrap();
        assert_eq!(t.apply_set(&p, &s), *c.canonical_form(&s).unwrap().as_set());
    }
}

#[test]
fn canonical_form_invariance_under_random_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for q in [4, 16] {
        let p = if q == 16 {
            Plane::new(FieldSpec::gf16_paper())
        } else {
            plane(q)
        };
        let c = Canonizer::new(&p);
        for i in 0..40 {
            let s = random_set(&mut rng, &p, 5 + i % 10);
            let g = random_element(&mut rng, p.field());
            let a = c.canonize(&s).unwrap();
            let b = c.canonize(&g.apply_set(&p, &s)).unwrap();
            assert_eq!(a.form, b.form);
            assert_eq!(a.stabilizer_order, b.stabilizer_order);
        }
    }
}

#[test]
fn table1_under_random_transform() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let p = Plane::new(FieldSpec::gf16_paper());
    let c = Canonizer::new(&p);
    let arc = witness::table1_arc(&p);
    let base = c.canonical_form(arc.members()).unwrap();
    for _ in 0..5 {
        let g = random_element(&mut rng, p.field());
        assert_eq!(c.canonical_form(&g.apply_set(&p, arc.members())).unwrap(), base);
    }
}

#[test]
fn orbit_examples() {
    let p = plane(4);
    let f = p.field();
    let s = BitSet::from_indices(21, [0, 5, 9]);
    assert_eq!(orbit(&p, &s, &[Collineation::identity()], 10).unwrap(), vec![s.clone()]);
    let rot = Collineation::from_labels(f, [0, 1, 0, 0, 0, 1, 1, 0, 0], 0).unwrap();
    let unit = BitSet::from_indices(21, [pt(&p, [1, 1, 1]) as usize]);
    assert_eq!(orbit(&p, &unit, &[rot], 10).unwrap().len(), 1);
    let parts = point_orbits(&p, &[rot]);
    assert_eq!(parts.iter().map(|o| o.len()).sum::<usize>(), 21);
    assert!(parts.iter().any(|o| o == &vec![pt(&p, [1, 1, 1])]));
    assert!(parts.iter().all(|o| o.len() == 1 || o.len() == 3));
    let big = BitSet::from_indices(21, [0, 1, 2, 3, 4, 6]);
    assert_eq!(
        orbit(&p, &big, &standard_generators(f), 5),
        Err(GroupError::BudgetExceeded { cap: 5 })
    );
}

#[test]
fn orbit_stabilizer_small_planes() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for q in [2, 3] {
        let p = plane(q);
        let c = Canonizer::new(&p);
        let gens = standard_generators(p.field());
        for i in 0..10 {
            let s = random_set(&mut rng, &p, 1 + i % (p.num_points() - 1));
            let orb = orbit(&p, &s, &gens, 1 << 20).unwrap();
            let stab = c.stabilizer(&s).unwrap();
            assert_eq!(orb.len() as u64 * stab.order, group_order(q));
        }
    }
}

#[test]
fn canonical_bytes_are_sorted_indices() {
    let p = plane(3);
    let c = Canonizer::new(&p);
    let form = c.canonical_form(&BitSet::from_indices(13, [1, 4, 7, 12])).unwrap();
    let bytes = form.to_bytes();
    assert_eq!(bytes.len(), 8);
    let back: Vec<u16> = bytes.chunks(2).map(|b| u16::from_le_bytes([b[0], b[1]])).collect();
    assert_eq!(back, form.points());
}
