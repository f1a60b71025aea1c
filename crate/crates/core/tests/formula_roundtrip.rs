mod common;

use std::collections::BTreeSet;

use common::FIXTURES;
use qpcount::formula::{parse_formula, print_program};

#[test]
fn corpus_has_fifty_distinct_fixtures() {
    assert_eq!(FIXTURES.len(), 50);
    let names: BTreeSet<&str> = FIXTURES.iter().map(|f| f.name).collect();
    assert_eq!(names.len(), FIXTURES.len());
}

#[test]
fn parse_print_parse_is_identity() {
    for fx in FIXTURES {
        let p = parse_formula(fx.src).unwrap_or_else(|e| panic!("{}: {e}", fx.name));
        let text = print_program(&p);
        let q = parse_formula(&text).unwrap_or_else(|e| panic!("{}: reparse of {text:?}: {e}", fx.name));
        assert_eq!(p, q, "{}", fx.name);
        assert_eq!(print_program(&q), text, "{}", fx.name);
    }
}
