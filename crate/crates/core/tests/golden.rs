//! Reference matrices for both families, written out by hand in the
//! canonical text format, must match the builders byte for byte.

use detrace_core::families::{build_thm1, build_thm3, BetaMode};
use detrace_core::poly::Polynomial;

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("reading {path}: {e}"))
}

#[test]
fn first_family_n4_a() {
    assert_eq!(build_thm1(4).a.to_string(), golden("thm1_n4_a.txt"));
}

#[test]
fn second_family_n5() {
    let m = build_thm3(5, BetaMode::Symbolic);
    assert_eq!(m.a.to_string(), golden("thm3_n5_a.txt"));
    assert_eq!(m.b.to_string(), golden("thm3_n5_b.txt"));
    assert_eq!(m.c.to_string(), golden("thm3_n5_c.txt"));
}

#[test]
fn golden_cells_parse_back() {
    let m = build_thm3(5, BetaMode::Symbolic);
    for line in golden("thm3_n5_b.txt").lines() {
        let (cell, text) = line.split_once(": ").unwrap();
        let (i, j) = cell.trim_matches(|c| c == '(' || c == ')').split_once(',').unwrap();
        let parsed: Polynomial = text.parse().unwrap();
        assert_eq!(&parsed, m.b.get(i.parse().unwrap(), j.parse().unwrap()).unwrap());
    }
}
