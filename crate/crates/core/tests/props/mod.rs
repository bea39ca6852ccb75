//! Randomized property families, shared by the property test target and the
//! acceptance run. Each family returns a short note on success.

pub mod arith;
pub mod extension;
pub mod kregular;
pub mod reduction;
pub mod weyl;

use proptest::strategy::Strategy;
use proptest::test_runner::{TestCaseError, TestRunner};

use crate::common::config;

pub type Outcome = Result<String, String>;

/// Runs `f` on `cases` values drawn from `s`.
pub fn check<S: Strategy>(cases: u32, s: S, f: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Outcome {
    let mut runner = TestRunner::new(config(cases));
    runner.run(&s, f).map_err(|e| e.to_string())?;
    Ok(format!("{cases} cases"))
}

#[allow(dead_code)]
pub const FAMILIES: &[(&str, fn() -> Outcome)] = &[
    ("weyl associativity", weyl::associativity),
    ("weyl associativity with dt", weyl::associativity_with_dt),
    ("action homomorphism", weyl::action_homomorphism),
    ("degree additivity", weyl::degree_additivity),
    ("leading monomial law", weyl::leading_monomial_law),
    ("strict total orders", weyl::strict_total_orders),
    ("print/parse round trip", weyl::print_parse_round_trip),
    ("ideal members reduce to zero", reduction::ideal_members_reduce_to_zero),
    ("normal form ignores ideal members", reduction::normal_form_ignores_ideal_members),
    ("right remainder laws", reduction::right_remainder_laws),
    ("certificates re-expand", reduction::certificates_re_expand),
    ("reductions are linear", reduction::reductions_are_linear),
    ("confinements are effective", reduction::confinements_are_effective),
    ("escalation vanishing", reduction::escalation_vanishing),
    ("griffiths-dwork correspondence", reduction::griffiths_dwork),
    ("u-commutation k <= 6", kregular::u_commutation),
    ("crt and rational reconstruction", arith::crt_reconstruction),
    ("vector lifting", arith::vector_lifting),
    ("cauchy interpolation", arith::cauchy_round_trip),
    ("rational function field axioms", arith::field_axioms),
    ("elimination law", extension::elimination_law),
];
