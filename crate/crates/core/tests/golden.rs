use std::path::PathBuf;

use quasishuffle::golden::{golden_file_name, GoldenValues, GOLDEN_SCHEMA};
use quasishuffle::ncpoly::{parse_poly, Rules, Symbol};
use quasishuffle::psido::LaxContext;

fn golden_path(depth: usize) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(golden_file_name(depth))
}

#[test]
fn stored_kp_tables_match_a_fresh_computation() {
    let stored = GoldenValues::read(&golden_path(6)).unwrap();
    assert_eq!(stored.schema, GOLDEN_SCHEMA);
    assert_eq!(stored, GoldenValues::compute(6, 3).unwrap());
}

#[test]
fn stored_entries_agree_with_the_lax_context() {
    let stored = GoldenValues::read(&golden_path(6)).unwrap();
    let ctx = LaxContext::new(6, 3).unwrap();
    let mut seen = 0;
    for (flow, entries) in &stored.tables {
        let n: usize = flow.trim_start_matches('t').parse().unwrap();
        let table = ctx.table(n).unwrap();
        for sym in entries.keys() {
            assert_eq!(&stored.table_entry(n, sym).unwrap(), table.get(Symbol::new(sym)).unwrap(), "{flow} {sym}");
            seen += 1;
        }
    }
    assert!(seen >= 9, "only {seen} stored entries");
    let p = |s| parse_poly(s, Rules::Free).unwrap();
    assert_eq!(stored.table_entry(1, "u2").unwrap(), p("u2_x"));
    assert_eq!(stored.table_entry(2, "u2").unwrap(), p("u2_xx + 2*u3_x"));
    assert_eq!(stored.residue(1).unwrap(), p("u2"));
}
