mod common;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use scva_core::expr::{format_state, parse_state};

#[test]
fn format_then_parse_is_identity() {
    for space in common::spaces() {
        let mut runner = TestRunner::new(Config { cases: 200, failure_persistence: None, ..Config::default() });
        runner
            .run(&common::state(&space, 5), |s| {
                let text = format_state(&space, &s);
                let back = parse_state(&text, &space).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
                prop_assert_eq!(back, s);
                Ok(())
            })
            .unwrap();
    }
}

#[test]
fn parsing_is_insensitive_to_spacing() {
    let space = scva_core::SpaceSpec::orthonormal(2).unwrap();
    let a = parse_state("1/2 a1_{-1} phi2_{-1/2} |0> - 3 |0>", &space).unwrap();
    let b = parse_state("  1/2  a1_{-1}   phi2_{-1/2}  |0>  -  3  |0>  ", &space).unwrap();
    assert_eq!(a, b);
}
