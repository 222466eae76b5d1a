use tukey_regions::io::{generate_gaussian, seeded_rng};
use tukey_regions::{
    algorithm1, algorithm2, check_general_position, k_tau, scan_ridge, seed_search, Error,
    PointCloud, Ridge, SearchOptions, Side, Tolerances,
};

fn square() -> PointCloud {
    PointCloud::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap()
}

fn tuples(set: &tukey_regions::CriticalSet) -> Vec<(Vec<usize>, Side)> {
    set.directions()
}

#[test]
fn ridge_scans_on_the_square() {
    let tol = Tolerances::default();
    let origin = Ridge::new(vec![0]).unwrap();
    let mut two: Vec<_> = scan_ridge(&square(), &origin, 2, &tol).unwrap();
    two.sort_by_key(|c| c.side);
    assert_eq!(two.len(), 2);
    assert!(two.iter().all(|c| c.tuple == vec![0, 2]));
    assert_ne!(two[0].side, two[1].side);

    let one = scan_ridge(&square(), &origin, 1, &tol).unwrap();
    let mut t: Vec<_> = one.iter().map(|c| c.tuple.clone()).collect();
    t.sort();
    assert_eq!(t, vec![vec![0, 1], vec![0, 3]]);
    assert!(scan_ridge(&square(), &origin, 4, &tol).unwrap().is_empty());
}

#[test]
fn both_searches_on_the_square() {
    let opts = SearchOptions::default();
    let quarter = algorithm1(&square(), 0.25, &opts).unwrap();
    assert_eq!(quarter.criticals.len(), 4);
    let edges: Vec<Vec<usize>> = quarter.criticals.iter().map(|c| c.tuple.clone()).collect();
    assert_eq!(edges, vec![vec![0, 1], vec![1, 2], vec![0, 3], vec![2, 3]]);
    let bfs = algorithm2(&square(), 0.25, &mut seeded_rng(42), &opts).unwrap();
    assert_eq!(tuples(&bfs.criticals), tuples(&quarter.criticals));

    let half = algorithm1(&square(), 0.5, &opts).unwrap();
    assert_eq!(half.criticals.len(), 4);
    assert!(half.criticals.iter().all(|c| c.tuple == vec![0, 2] || c.tuple == vec![1, 3]));
    let bfs = algorithm2(&square(), 0.5, &mut seeded_rng(7), &opts).unwrap();
    assert_eq!(tuples(&bfs.criticals), tuples(&half.criticals));
}

#[test]
fn seeding_queues_the_ridges_below_the_first_hyperplane() {
    let opts = SearchOptions::default();
    for seed in 0..20 {
        let s = seed_search(&square(), 0.25, &mut seeded_rng(seed), &opts).unwrap();
        assert_eq!(s.queue.len(), 2);
        let s = seed_search(&square(), 0.5, &mut seeded_rng(seed), &opts).unwrap();
        assert_eq!(s.queue.len(), 3);
    }
    let twin = PointCloud::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 0.0], vec![0.0, 1.0]]).unwrap();
    assert!(matches!(
        seed_search(&twin, 0.25, &mut seeded_rng(1), &opts),
        Err(Error::TiedProjection { .. })
    ));
}

#[test]
fn gaussian_searches_agree_for_every_seed() {
    let opts = SearchOptions::default();
    let cloud = generate_gaussian(40, 3, 1).unwrap();
    assert!(check_general_position(&cloud, &Default::default(), &Tolerances::default()).passed());
    let naive = algorithm1(&cloud, 0.05, &opts).unwrap();
    for seed in 1..=6 {
        let bfs = algorithm2(&cloud, 0.05, &mut seeded_rng(seed), &opts).unwrap();
        assert!(bfs.criticals.same_directions(&naive.criticals), "seed {seed}");
        assert!(bfs.bound.passed);
    }
    let small = generate_gaussian(20, 3, 1).unwrap();
    let out = algorithm1(&small, 0.1, &opts).unwrap();
    assert!(out.criticals.len() <= 380);
}

#[test]
fn depth_levels() {
    assert_eq!(k_tau(4, 0.25).unwrap(), 1);
    assert_eq!(k_tau(40, 0.05).unwrap(), 2);
    assert_eq!(k_tau(10, 0.1).unwrap(), 1);
    assert!(matches!(k_tau(10, 0.05), Err(Error::InvalidDepthLevel { .. })));
    assert!(k_tau(10, 0.0).is_err());
    assert!(k_tau(10, 1.5).is_err());
}
