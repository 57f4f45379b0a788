use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use super::*;
use crate::error::GeometryError;
use crate::rat::{int, int_point, int_vector, point, rat, Point, Rat};

fn square() -> Polytope {
    Polytope::from_points(vec![int_point(&[0, 0]), int_point(&[1, 0]), int_point(&[1, 1]), int_point(&[0, 1])]).unwrap()
}

fn count_su_triangle() -> Polytope {
    Polytope::from_points(vec![int_point(&[0, 0]), int_point(&[1, 0]), point(&[(1, 1), (1, 2)])]).unwrap()
}

fn cube(n: usize) -> Polytope {
    let mut pts = Vec::new();
    for mask in 0..(1u32 << n) {
        pts.push((0..n).map(|i| int(((mask >> i) & 1) as i64)).collect());
    }
    Polytope::from_points(pts).unwrap()
}

fn hs(normal: &[i64], offset: Rat) -> Halfspace {
    Halfspace::new(int_vector(normal), offset)
}

#[test]
fn interior_point_dropped() {
    let p = Polytope::from_points(vec![
        int_point(&[0, 0]),
        int_point(&[1, 0]),
        point(&[(1, 1), (1, 2)]),
        point(&[(1, 2), (1, 4)]),
    ])
    .unwrap();
    assert_eq!(p.vertices(), count_su_triangle().vertices());
    assert_eq!(p.vertices().len(), 3);
}

#[test]
fn point_polytope() {
    let p = Polytope::from_points(vec![int_point(&[0, 0])]).unwrap();
    assert_eq!(p.intrinsic_dim(), 0);
    assert!(p.volume().is_zero());
    assert!(p.contains_point(&int_point(&[0, 0])));
    assert!(!p.contains_point(&int_point(&[0, 1])));
}

#[test]
fn count_su_triangle_volume() {
    assert_eq!(*count_su_triangle().volume(), rat(1, 4));
}

#[test]
fn construction_errors() {
    assert_eq!(Polytope::from_points(vec![]), Err(GeometryError::EmptyInput));
    assert!(matches!(
        Polytope::from_points(vec![int_point(&[0, 0]), int_point(&[1])]),
        Err(GeometryError::DimensionMismatch { .. })
    ));
}

#[test]
fn halfspace_box_and_simplex() {
    let b = Polytope::from_halfspaces(
        &[hs(&[1, 0], int(0)), hs(&[-1, 0], int(-1)), hs(&[0, 1], int(0)), hs(&[0, -1], int(-1))],
        2,
    )
    .unwrap();
    assert_eq!(b, square());
    let s = Polytope::from_halfspaces(&[hs(&[1, 0], int(0)), hs(&[0, 1], int(0)), hs(&[-1, -1], int(-1))], 2).unwrap();
    assert_eq!(s.vertices(), &[int_point(&[0, 0]), int_point(&[0, 1]), int_point(&[1, 0])][..]);
}

#[test]
fn halfspace_errors_are_distinguishable() {
    assert_eq!(Polytope::from_halfspaces(&[hs(&[1, 0], int(0))], 2), Err(GeometryError::Unbounded));
    assert_eq!(
        Polytope::from_halfspaces(&[hs(&[1], int(1)), hs(&[-1], int(0))], 1),
        Err(GeometryError::EmptyRegion)
    );
    assert_eq!(
        Polytope::from_halfspaces(&[hs(&[1, 0], int(0)), hs(&[0, 1], int(0)), hs(&[-1, -1], int(1))], 2),
        Err(GeometryError::EmptyRegion)
    );
}

#[test]
fn lower_dimensional_halfspace_system() {
    let p = Polytope::from_halfspaces(&[hs(&[1], int(0)), hs(&[-1], int(0))], 1).unwrap();
    assert_eq!(p.vertices(), &[int_point(&[0])][..]);
    let seg = Polytope::from_halfspaces(
        &[hs(&[1, 0], int(0)), hs(&[-1, 0], int(0)), hs(&[0, 1], int(0)), hs(&[0, -1], int(-2))],
        2,
    )
    .unwrap();
    assert_eq!(seg.intrinsic_dim(), 1);
    assert_eq!(seg.vertices().len(), 2);
}

#[test]
fn support_values() {
    assert_eq!(square().support_value(&int_point(&[1, 0])).unwrap(), int(1));
    assert_eq!(square().support_value(&int_point(&[-1, -1])).unwrap(), int(0));
    assert_eq!(count_su_triangle().support_value(&int_point(&[0, 1])).unwrap(), rat(1, 2));
    assert!(matches!(square().support_value(&int_point(&[1])), Err(GeometryError::DimensionMismatch { .. })));
}

#[test]
fn faces() {
    let f = square().face(&int_point(&[1, 0])).unwrap();
    assert_eq!(f.vertices(), &[int_point(&[1, 0]), int_point(&[1, 1])][..]);
    let v = square().face(&int_point(&[1, 1])).unwrap();
    assert_eq!(v.vertices(), &[int_point(&[1, 1])][..]);
    let t = count_su_triangle().face(&int_point(&[1, 0])).unwrap();
    assert_eq!(t.vertices(), &[int_point(&[1, 0]), point(&[(1, 1), (1, 2)])][..]);
    assert_eq!(square().face(&int_point(&[0, 0])), Err(GeometryError::ZeroDirection));
}

#[test]
fn minkowski_sums() {
    let a = Polytope::from_points(vec![int_point(&[0, 0]), int_point(&[1, 0])]).unwrap();
    let b = Polytope::from_points(vec![int_point(&[0, 0]), int_point(&[0, 1])]).unwrap();
    assert_eq!(a.minkowski_sum(&b).unwrap(), square());
    let v = Polytope::from_points(vec![point(&[(1, 2), (-3, 1)])]).unwrap();
    assert_eq!(square().minkowski_sum(&v).unwrap(), square().translate(&point(&[(1, 2), (-3, 1)])).unwrap());
    let s = Polytope::from_points(vec![int_point(&[0, 0]), int_point(&[1, 0]), int_point(&[0, 1])]).unwrap();
    let s2 = s.minkowski_sum(&s).unwrap();
    assert_eq!(s2.vertices(), &[int_point(&[0, 0]), int_point(&[0, 2]), int_point(&[2, 0])][..]);
}

#[test]
fn affine_maps() {
    let z = int_point(&[0, 0]);
    assert_eq!(square().affine(&int(1), &z).unwrap(), square());
    let p = square().affine(&int(0), &int_point(&[3, 4])).unwrap();
    assert_eq!(p.vertices(), &[int_point(&[3, 4])][..]);
    let d = square().affine(&int(2), &z).unwrap();
    assert_eq!(*d.volume(), int(4));
    assert!(matches!(square().affine(&int(-1), &z), Err(GeometryError::NegativeScale(_))));
}

#[test]
fn containment() {
    let sq = square();
    assert!(sq.contains_body(&sq).unwrap());
    let inner = sq.affine(&rat(1, 2), &point(&[(1, 4), (1, 4)])).unwrap();
    assert!(sq.contains_body(&inner).unwrap());
    let out = Polytope::from_points(vec![int_point(&[0, 0]), int_point(&[2, 0]), int_point(&[0, 1])]).unwrap();
    assert!(!sq.contains_body(&out).unwrap());
}

#[test]
fn cube_volumes() {
    for n in 1..=5 {
        assert_eq!(*cube(n).volume(), int(1), "n = {n}");
    }
}

#[test]
fn count_su_truncation_volume() {
    // vol Q - vol Q_t = t^n eps^{n-1} / n!
    for n in 2..=4usize {
        let eps = rat(1, 3);
        let mut pts = vec![vec![int(0); n], {
            let mut v = vec![int(0); n];
            v[0] = int(1);
            v
        }];
        for i in 1..n {
            let mut v = vec![int(0); n];
            v[0] = int(1);
            v[i] = eps.clone();
            pts.push(v);
        }
        let q = Polytope::from_points(pts).unwrap();
        let t = rat(2, 5);
        let mut h = q.halfspaces().to_vec();
        let mut e1 = vec![BigInt::zero(); n];
        e1[0] = BigInt::one();
        h.push(Halfspace::new(e1, t.clone()));
        let qt = Polytope::from_halfspaces(&h, n).unwrap();
        let expected = crate::rat::pow(&t, n) * crate::rat::pow(&eps, n - 1) / crate::rat::factorial_rat(n);
        assert_eq!(q.volume() - qt.volume(), expected);
    }
}

#[test]
fn slices() {
    let e1 = int_vector(&[1, 0]);
    let s = square().lattice_slice(&e1, &rat(1, 2)).unwrap().unwrap();
    assert_eq!(*s.volume(), int(1));
    assert!(square().lattice_slice(&e1, &int(2)).unwrap().is_none());
    for k in 1..10 {
        let t = rat(k, 10);
        let sl = count_su_triangle().lattice_slice(&e1, &t).unwrap().unwrap();
        assert_eq!(*sl.volume(), &t / int(2));
    }
    assert!(matches!(square().lattice_slice(&int_vector(&[2, 0]), &int(0)), Err(GeometryError::NotPrimitive(_))));
}

#[test]
fn diagonal_slice_is_lattice_normalized() {
    // the diagonal of the unit square has lattice length 1 along u = (1,-1)
    let s = square().lattice_slice(&int_vector(&[1, 1]), &int(1)).unwrap().unwrap();
    assert_eq!(*s.volume(), int(1));
    let s = square().lattice_slice(&int_vector(&[1, -1]), &int(0)).unwrap().unwrap();
    assert_eq!(*s.volume(), int(1));
}

#[test]
fn unimodular_examples() {
    let m = unimodular_to_e1(&int_vector(&[0, 1])).unwrap();
    assert_eq!(m.apply(&int_vector(&[0, 1])), int_vector(&[1, 0]));
    let m = unimodular_to_e1(&int_vector(&[2, 3])).unwrap();
    assert_eq!(m.apply(&int_vector(&[2, 3])), int_vector(&[1, 0]));
}

// ----- property tests -----

fn small_rat() -> impl Strategy<Value = Rat> {
    (-8i64..=8, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn point_cloud(dim: usize, max: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec(prop::collection::vec(small_rat(), dim), 1..=max)
}

fn primitive_dir(dim: usize) -> impl Strategy<Value = Vec<BigInt>> {
    prop::collection::vec(-3i64..=3, dim)
        .prop_filter("primitive", |v| crate::rat::is_primitive(&int_vector(v)))
        .prop_map(|v| int_vector(&v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hull_is_idempotent(pts in point_cloud(3, 10)) {
        let p = Polytope::from_points(pts).unwrap();
        let q = Polytope::from_points(p.vertices().to_vec()).unwrap();
        prop_assert_eq!(&p, &q);
        prop_assert_eq!(p.halfspaces(), q.halfspaces());
        prop_assert_eq!(p.volume(), q.volume());
    }

    #[test]
    fn hull_contains_inputs_and_tight_facets(pts in point_cloud(3, 12)) {
        let p = Polytope::from_points(pts.clone()).unwrap();
        for x in &pts {
            prop_assert!(p.contains_point(x));
        }
        for h in p.halfspaces() {
            prop_assert!(crate::rat::is_primitive(&h.normal));
            prop_assert!(p.vertices().iter().any(|v| crate::rat::dot_int(v, &h.normal) == h.offset));
        }
        prop_assert_eq!(p.volume().is_zero(), !p.is_full_dimensional());
    }

    #[test]
    fn h_to_v_round_trip(pts in point_cloud(3, 9)) {
        let p = Polytope::from_points(pts).unwrap();
        prop_assume!(p.is_full_dimensional());
        let q = Polytope::from_halfspaces(p.halfspaces(), 3).unwrap();
        prop_assert_eq!(p, q);
    }

    #[test]
    fn support_and_face_additivity(a in point_cloud(2, 6), b in point_cloud(2, 6), u in primitive_dir(2)) {
        let p = Polytope::from_points(a).unwrap();
        let q = Polytope::from_points(b).unwrap();
        let s = p.minkowski_sum(&q).unwrap();
        prop_assert_eq!(s.support_value_int(&u).unwrap(), p.support_value_int(&u).unwrap() + q.support_value_int(&u).unwrap());
        let fs = s.face_int(&u).unwrap();
        let fsum = p.face_int(&u).unwrap().minkowski_sum(&q.face_int(&u).unwrap()).unwrap();
        prop_assert_eq!(fs, fsum);
    }

    #[test]
    fn volume_is_unimodular_invariant(pts in point_cloud(3, 8), u in primitive_dir(3)) {
        let p = Polytope::from_points(pts).unwrap();
        let m = unimodular_to_e1(&u).unwrap();
        let image = p.transform_dual(&m).unwrap();
        prop_assert_eq!(image.volume(), p.volume());
    }

    #[test]
    fn slice_volume_independent_of_map(pts in point_cloud(3, 8), u in primitive_dir(3), k in 0i64..=8, shear in -3i64..=3) {
        let p = Polytope::from_points(pts).unwrap();
        let lo = p.min_pairing(&u).unwrap();
        let hi = p.support_value_int(&u).unwrap();
        let t = &lo + (&hi - &lo) * rat(k, 8);
        let m = unimodular_to_e1(&u).unwrap();
        // B fixes e1, so B M also sends u to e1
        let b = UnimodularMap::new(vec![
            int_vector(&[1, shear, 1]),
            int_vector(&[0, 1, 0]),
            int_vector(&[0, shear, 1]),
        ]).unwrap();
        let m2 = b.compose(&m);
        let s1 = p.lattice_slice_with(&m, &t).unwrap().map(|s| s.volume().clone());
        let s2 = p.lattice_slice_with(&m2, &t).unwrap().map(|s| s.volume().clone());
        prop_assert_eq!(s1, s2);
    }
}
