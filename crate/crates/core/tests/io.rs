use std::io::Write;

use tukey_regions::io::{
    dedup_ties, export_region, generate_gaussian, import_regions, load_csv, off_string,
    region_to_json, run_benchmark, AlgorithmChoice, BenchConfig, CsvOptions, OutputFormat,
};
use tukey_regions::{algorithm1, build_region, check_general_position, Error, PointCloud, RegionPolytope, SearchOptions, Tolerances};

fn region(cloud: &PointCloud, tau: f64) -> RegionPolytope {
    let cs = algorithm1(cloud, tau, &SearchOptions::default()).unwrap().criticals;
    build_region(cloud, tau, &cs, &Tolerances::default()).unwrap()
}

fn file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn csv_files() {
    let f = file("0,0\n1,0\n1,1\n0,1\n");
    let c = load_csv(f.path(), CsvOptions::default()).unwrap();
    assert_eq!((c.len(), c.dim()), (4, 2));

    let f = file("x,y\n0,0\n1,0\n1,1\n0,1\n");
    let c = load_csv(f.path(), CsvOptions { has_header: true }).unwrap();
    assert_eq!(c.len(), 4);

    let f = file("0,0\n1,0\n1\n0,1\n");
    match load_csv(f.path(), CsvOptions::default()) {
        Err(Error::Parse { row, .. }) => assert_eq!(row, 3),
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn ties_are_removed() {
    let rows = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 0.0], vec![1.0, 1.0], vec![1.0, 0.0], vec![0.0, 1.0]];
    let (c, removed) = dedup_ties(&PointCloud::new(rows).unwrap()).unwrap();
    assert_eq!((c.len(), removed), (4, 2));
    assert_eq!(c.point(3), &[0.0, 1.0]);
    let g = generate_gaussian(10, 2, 1).unwrap();
    assert_eq!(dedup_ties(&g).unwrap(), (g.clone(), 0));
}

#[test]
fn generator() {
    assert_eq!(generate_gaussian(40, 3, 1).unwrap(), generate_gaussian(40, 3, 1).unwrap());
    assert_ne!(generate_gaussian(40, 3, 1).unwrap(), generate_gaussian(40, 3, 2).unwrap());
    let big = generate_gaussian(5120, 3, 9).unwrap();
    for j in 0..3 {
        let mean = big.points().map(|x| x[j]).sum::<f64>() / 5120.0;
        assert!(mean.abs() < 5.0 / 5120f64.sqrt());
    }
    for seed in 1..=6 {
        let c = generate_gaussian(20, 3, seed).unwrap();
        assert!(check_general_position(&c, &Default::default(), &Tolerances::default()).passed());
    }
}

#[test]
fn exports() {
    let sq = PointCloud::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
    let quarter = region(&sq, 0.25);
    let v: serde_json::Value = serde_json::from_str(&region_to_json(&quarter).unwrap()).unwrap();
    assert_eq!(v["status"], "FullDim");
    assert_eq!(v["halfspaces"].as_array().unwrap().len(), 4);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 4);

    let half = region(&sq, 0.5);
    let v: serde_json::Value = serde_json::from_str(&region_to_json(&half).unwrap()).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 0);
    assert!(v["interior_point"].is_array());
    assert!(matches!(export_region(&half, OutputFormat::Off), Err(Error::FormatUnsupported(_))));

    let g = generate_gaussian(30, 3, 5).unwrap();
    let r = region(&g, 0.1);
    let back = import_regions(&region_to_json(&r).unwrap()).unwrap();
    assert_eq!(back, vec![r.clone()]);
    let off = off_string(&r).unwrap();
    let counts: Vec<usize> = off.lines().nth(1).unwrap().split_whitespace().map(|t| t.parse().unwrap()).collect();
    assert_eq!(&counts[..2], &[r.vertices.len(), r.facets.len()]);
    assert_eq!(counts[0] + counts[1] - counts[2], 2);
}

#[test]
fn benchmark_grid() {
    let config = BenchConfig {
        ns: vec![20, 40],
        ps: vec![3],
        taus: vec![0.05, 0.1],
        algorithm: AlgorithmChoice::Both,
        ..Default::default()
    };
    let records = run_benchmark(&config);
    assert_eq!(records.len(), 8);
    for pair in records.chunks(2) {
        assert_eq!(pair[0].directions, pair[1].directions);
    }
    let again = run_benchmark(&config);
    let m = |r: &[tukey_regions::io::BenchRecord]| r.iter().map(|x| x.directions).collect::<Vec<_>>();
    assert_eq!(m(&records), m(&again));
}
