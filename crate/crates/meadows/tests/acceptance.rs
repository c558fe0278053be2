//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line. Run with `cargo test -p meadows --test acceptance -- --nocapture`
//! to see the lines.

use std::sync::OnceLock;

use meadows::eval::eval;
use meadows::measures::{
    build_cross_entropy_term, cross_entropy, entropy, js_divergence, kl_divergence,
    MeasureVariant, Pmf,
};
use meadows::oracle::{run_suite, CheckResult, SuiteConfig};
use meadows::value::{ExactValue, Mode};
use num_bigint::BigInt;
use num_rational::BigRational;

fn cfg() -> SuiteConfig {
    SuiteConfig::default()
}

fn suite(name: &str) -> Vec<CheckResult> {
    run_suite(name, &cfg()).unwrap_or_else(|e| panic!("{e}"))
}

fn measures_results() -> &'static [CheckResult] {
    static CACHE: OnceLock<Vec<CheckResult>> = OnceLock::new();
    CACHE.get_or_init(|| suite("measures"))
}

fn failures(results: &[CheckResult]) -> Vec<String> {
    results
        .iter()
        .filter(|c| !c.verdict.is_pass())
        .map(|c| format!("{}: {}", c.name, c.verdict.describe()))
        .collect()
}

fn report(number: u8, name: &str, failed: &[String]) {
    let status = if failed.is_empty() { "PASS" } else { "FAIL" };
    println!("acceptance {number:02} {name}: {status}");
    assert!(failed.is_empty(), "criterion {number} failed:\n{}", failed.join("\n"));
}

fn named_checks(results: &'static [CheckResult], prefixes: &[&str]) -> Vec<String> {
    let mut failed = Vec::new();
    for prefix in prefixes {
        let matched: Vec<&CheckResult> = results
            .iter()
            .filter(|c| c.name.starts_with(prefix))
            .collect();
        assert!(!matched.is_empty(), "no checks match prefix {prefix}");
        failed.extend(failures(
            &matched.into_iter().cloned().collect::<Vec<_>>(),
        ));
    }
    failed
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn pmf(weights: &[(i64, i64)]) -> Pmf {
    Pmf::from_weights(&weights.iter().map(|&(n, d)| rat(n, d)).collect::<Vec<_>>()).unwrap()
}

#[test]
fn criterion_01_absorption() {
    report(1, "absorption over the default grid", &failures(&suite("absorption")));
}

#[test]
fn criterion_02_conditional_and_seqmul() {
    report(2, "conditional and seqmul semantics", &failures(&suite("conditional")));
}

#[test]
fn criterion_03_interdefinability() {
    report(
        3,
        "sign/seqmul/cond interdefinability",
        &failures(&suite("interdefinability")),
    );
}

#[test]
fn criterion_04_logcase() {
    report(4, "log2 of a fraction identity", &failures(&suite("logcase")));
}

#[test]
fn criterion_05_flattening_soundness() {
    // Rule-level validation must pass before the sweep runs.
    let rules = suite("flatten_rules");
    assert!(
        failures(&rules).is_empty(),
        "rule suite must pass before the soundness sweep"
    );
    let results = suite("flatten_soundness");
    assert!(results
        .iter()
        .any(|c| c.name.contains("soundness_semantics_1000")));
    report(5, "flattening soundness, 1000 seeded terms", &failures(&results));
}

#[test]
fn criterion_06_rule_level_validation() {
    report(6, "every rewrite rule validates on the grid", &failures(&suite("flatten_rules")));
}

#[test]
fn criterion_07_entropy_exact_values() {
    let mut failed = Vec::new();
    let cases: [(&[(i64, i64)], i64); 3] = [
        (&[(1, 2), (1, 2)], 1),
        (&[(1, 1), (0, 1)], 0),
        (&[(1, 4), (1, 4), (1, 4), (1, 4)], 2),
    ];
    for (weights, want) in cases {
        match entropy::<BigRational>(&pmf(weights)) {
            Ok(h) if h == ExactValue::int(want) => {}
            Ok(h) => failed.push(format!("H{weights:?} = {h}, want {want}")),
            Err(e) => failed.push(format!("H{weights:?} errored: {e}")),
        }
    }
    report(7, "exact entropy values on dyadic weights", &failed);
}

#[test]
fn criterion_08_builder_equivalence() {
    let failed = named_checks(
        measures_results(),
        &["entropy_builder_", "cross_entropy_builder_"],
    );
    report(8, "term builders match the direct measures", &failed);
}

#[test]
fn criterion_09_cross_entropy_bottom_pattern() {
    let mut failed = named_checks(
        measures_results(),
        &["cross_entropy_bottom_pattern", "cross_entropy_worked_example"],
    );
    // The worked example, both as a value and through the division form
    // of the defining term.
    let p = pmf(&[(1, 2), (1, 2)]);
    let q = pmf(&[(0, 1), (1, 1)]);
    if cross_entropy::<BigRational>(&p, &q).unwrap() != ExactValue::Bottom {
        failed.push("H((1/2,1/2),(0,1)) is not bot".into());
    }
    let t = build_cross_entropy_term(2, MeasureVariant::SeqMulDiv).unwrap();
    let env = meadows::measures::measure_environment::<BigRational>(&[("alpha", &p), ("beta", &q)]);
    match eval(&t, &env, Mode::Bottom) {
        Ok(ExactValue::Bottom) => {}
        other => failed.push(format!("division-form term gave {other:?}, want bot")),
    }
    report(9, "cross-entropy bottom pattern", &failed);
}

#[test]
fn criterion_10_kl_js() {
    let mut failed = named_checks(
        measures_results(),
        &[
            "kl_self_divergence_is_zero",
            "kl_equals_cross_entropy_minus_entropy",
            "js_symmetric_and_never_bottom",
            "js_disjoint_unit_masses_is_two",
        ],
    );
    let p = pmf(&[(1, 1), (0, 1)]);
    let q = pmf(&[(0, 1), (1, 1)]);
    if js_divergence::<BigRational>(&p, &q).unwrap() != ExactValue::int(2) {
        failed.push("JS((1,0),(0,1)) != 2".into());
    }
    if kl_divergence::<BigRational>(&p, &p).unwrap() != ExactValue::int(0) {
        failed.push("KL(P||P) != 0".into());
    }
    report(10, "KL and JS divergence", &failed);
}

#[test]
fn criterion_11_signed_mode() {
    report(11, "signed-infinity operation tables", &failures(&suite("signed")));
}

#[test]
fn criterion_12_bayes_price() {
    report(12, "guarded Bayes-Price identity", &failures(&suite("bayes")));
}

#[test]
fn criterion_13_suppes_ono_comparison() {
    report(13, "Suppes-Ono comparison", &failures(&suite("suppes")));
}
