use std::f64::consts::PI;

use tukey_regions::combinatorics::subridges;
use tukey_regions::geometry::{
    complement_basis, lift_direction, polar_angles, Arc, GeneralPositionOptions, Violation,
};
use tukey_regions::io::generate_gaussian;
use tukey_regions::linalg::{dot, norm};
use tukey_regions::{check_general_position, encode_tuple, ridge_rank, PointCloud, Ridge, TupleCode, Tolerances};

fn cloud(rows: &[&[f64]]) -> PointCloud {
    PointCloud::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
}

#[test]
fn complement_of_a_diagonal_ridge() {
    let c = cloud(&[&[0.0, 0.0, 0.0], &[1.0, 1.0, 0.0], &[0.0, 0.0, 5.0], &[3.0, -1.0, 2.0]]);
    let b = complement_basis(&c, &Ridge::new(vec![0, 1]).unwrap(), &Tolerances::default()).unwrap();
    for e in [&b.e1, &b.e2] {
        assert!(dot(e, &[1.0, 1.0, 0.0]).abs() < 1e-12);
        assert!((norm(e) - 1.0).abs() < 1e-12);
    }
    assert!(dot(&b.e1, &b.e2).abs() < 1e-12);
}

#[test]
fn angles_and_lifts_agree_on_a_small_plane_cloud() {
    let c = cloud(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, -1.0], &[-1.0, 0.2]]);
    let tol = Tolerances::default();
    let ridge = Ridge::new(vec![0]).unwrap();
    let b = complement_basis(&c, &ridge, &tol).unwrap();
    let angles = polar_angles(&c, &ridge, &b, &tol).unwrap();
    assert_eq!(angles.iter().map(|a| a.0).collect::<Vec<_>>(), vec![1, 2, 3]);
    for &(_, t) in &angles {
        assert!((-PI..PI).contains(&t));
    }
    for &(k, t) in &angles {
        for arc in [Arc::Ccw, Arc::Cw] {
            let u = lift_direction(&b, t, arc);
            assert!(dot(&u, c.point(k)).abs() < 1e-12);
        }
    }
}

#[test]
fn general_position_reports() {
    let opts = GeneralPositionOptions::default();
    let tol = Tolerances::default();
    let square = cloud(&[&[0.0, 0.0], &[1.0, 0.0], &[1.0, 1.0], &[0.0, 1.0]]);
    assert!(check_general_position(&square, &opts, &tol).passed());

    let line = cloud(&[&[0.0, 0.0], &[1.0, 1.0], &[2.0, 2.0], &[0.0, 1.0]]);
    let r = check_general_position(&line, &opts, &tol);
    assert!(!r.passed());
    assert!(r.violations.iter().any(|v| matches!(
        v,
        Violation::ExtraPointOnHyperplane { tuple, point } if tuple.len() == 2 && [0, 1, 2].contains(point)
    )));

    for seed in 1..=6 {
        let g = generate_gaussian(20, 3, seed).unwrap();
        let r = check_general_position(&g, &opts, &tol);
        assert!(r.exhaustive && r.passed(), "seed {seed}");
    }
}

#[test]
fn tuple_codes_and_ranks() {
    assert_eq!(encode_tuple(&[4, 1, 6], 10).unwrap(), TupleCode::Packed(752));
    assert_eq!(encode_tuple(&[0, 1, 2], 10).unwrap(), TupleCode::Packed(321));
    let wide: Vec<usize> = vec![5000, 17, 4096, 3, 99, 2048, 1, 777, 5119];
    let mut shuffled = wide.clone();
    shuffled.reverse();
    assert_eq!(encode_tuple(&wide, 5120).unwrap(), encode_tuple(&shuffled, 5120).unwrap());
    assert_eq!(ridge_rank(&Ridge::new(vec![1, 3]).unwrap(), 4), 4);
    assert_eq!(ridge_rank(&Ridge::new(vec![2, 3]).unwrap(), 4), 5);
    let subs: Vec<Vec<usize>> = subridges(&[1, 2, 3]).iter().map(|r| r.indices().to_vec()).collect();
    assert_eq!(subs, vec![vec![2, 3], vec![1, 3], vec![1, 2]]);
}
