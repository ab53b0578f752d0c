use std::path::PathBuf;

use refined_dt::partitions::{enumerate, PlanePartition};

fn golden(n: usize) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("plane_partitions_n{n}.txt"));
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn enumeration_matches_golden_files() {
    for n in 0..=8 {
        let want = golden(n);
        let got: String = enumerate(n)
            .unwrap()
            .iter()
            .map(|p| format!("{p}\n"))
            .collect();
        assert_eq!(got, want, "n={n}");
    }
}

#[test]
fn golden_lines_parse_back() {
    for n in 0..=8 {
        for line in golden(n).lines() {
            let p: PlanePartition = line.parse().unwrap();
            assert_eq!(p.size(), n as u64);
            assert_eq!(p.to_string(), line);
        }
    }
}
