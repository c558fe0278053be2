//! The named check suites driven by tests and the CLI `check` command.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::eval::eval;
use crate::events::EventSpace;
use crate::flatten::{flatten, rewrite_rules};
use crate::measures::{
    build_cross_entropy_term, build_entropy_term, cross_entropy, entropy, js_divergence,
    kl_divergence, measure_environment, MeasureVariant, Pmf,
};
use crate::oracle::{
    approx_close, equiv, literal_value, random_terms, CheckResult, Grid, Verdict,
};
use crate::term::{parse, print, Signature, Term};
use crate::value::{ApproxValue, CarrierKind, ExactValue, Mode, Value};

/// Knobs shared by the suites; results are deterministic given a config.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    /// Seed for the random-term stream of the flattening sweep.
    pub seed: u64,
    /// How many random terms the flattening sweep checks.
    pub soundness_terms: usize,
    /// Relative tolerance for approximate comparisons.
    pub tolerance: f64,
}

impl Default for SuiteConfig {
    fn default() -> SuiteConfig {
        SuiteConfig {
            seed: 0x4d454144,
            soundness_terms: 1000,
            tolerance: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown suite `{name}`; known suites: {known}", known = suite_names().join(", "))]
pub struct UnknownSuite {
    pub name: String,
}

pub fn suite_names() -> Vec<&'static str> {
    vec![
        "absorption",
        "conditional",
        "interdefinability",
        "logcase",
        "flatten_rules",
        "flatten_soundness",
        "signed",
        "measures",
        "bayes",
        "suppes",
    ]
}

/// Runs one suite by name (`all` runs every suite in order).
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Vec<CheckResult>, UnknownSuite> {
    match name {
        "absorption" => Ok(absorption()),
        "conditional" => Ok(conditional()),
        "interdefinability" => Ok(interdefinability()),
        "logcase" => Ok(logcase(cfg)),
        "flatten_rules" => Ok(flatten_rules_suite(cfg)),
        "flatten_soundness" => Ok(flatten_soundness(cfg)),
        "signed" => Ok(signed()),
        "measures" => Ok(measures(cfg)),
        "bayes" => Ok(bayes()),
        "suppes" => Ok(suppes(cfg)),
        "all" => Ok(run_all_suites(cfg)),
        other => Err(UnknownSuite {
            name: other.to_string(),
        }),
    }
}

pub fn run_all_suites(cfg: &SuiteConfig) -> Vec<CheckResult> {
    suite_names()
        .iter()
        .flat_map(|name| run_suite(name, cfg).expect("known name"))
        .collect()
}

fn fail(case: impl Into<String>, lhs: impl Into<String>, rhs: impl Into<String>) -> Verdict {
    Verdict::Fail {
        assignment: vec![("case".to_string(), case.into())],
        lhs: lhs.into(),
        rhs: rhs.into(),
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn exact_grid_values(grid: &Grid) -> Vec<ExactValue> {
    grid.values.iter().map(literal_value).collect()
}

// ---------------------------------------------------------------------------
// absorption
// ---------------------------------------------------------------------------

fn absorption() -> Vec<CheckResult> {
    let mut out = absorption_on::<BigRational>("exact");
    out.extend(absorption_on::<f64>("approx"));
    out
}

type BinOp<N> = Box<dyn Fn(&Value<N>, &Value<N>) -> Value<N>>;
type UnOp<N> = Box<dyn Fn(&Value<N>) -> Value<N>>;

fn absorption_on<N: crate::value::Carrier>(carrier: &str) -> Vec<CheckResult> {
    let m = Mode::Bottom;
    let grid = Grid::default_bottom();
    let values: Vec<Value<N>> = grid.values.iter().map(literal_value).collect();
    let bot = Value::<N>::Bottom;
    let mut out = Vec::new();

    let binary: [(&str, BinOp<N>); 3] = [
        ("add", Box::new(move |a, b| m.add(a, b))),
        ("mul", Box::new(move |a, b| m.mul(a, b))),
        ("div", Box::new(move |a, b| m.div(a, b))),
    ];
    for (name, op) in binary {
        let mut verdict = Verdict::Pass;
        for v in &values {
            for (a, b) in [(&bot, v), (v, &bot)] {
                let got = op(a, b);
                if !got.is_bottom() {
                    verdict = fail(
                        format!("{name}({}, {})", a.render(), b.render()),
                        got.render(),
                        "bot",
                    );
                }
            }
        }
        out.push(CheckResult::new(
            format!("absorption_{name}_{carrier}"),
            verdict,
        ));
    }

    let unary: [(&str, UnOp<N>); 3] = [
        ("neg", Box::new(move |a| m.neg(a))),
        ("sign", Box::new(move |a| m.sign(a))),
        (
            "log2",
            Box::new(move |a| m.log2(a).expect("log2 of bot is not inexact")),
        ),
    ];
    for (name, op) in unary {
        let got = op(&bot);
        let verdict = if got.is_bottom() {
            Verdict::Pass
        } else {
            fail(format!("{name}(bot)"), got.render(), "bot")
        };
        out.push(CheckResult::new(
            format!("absorption_{name}_{carrier}"),
            verdict,
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// conditional
// ---------------------------------------------------------------------------

fn conditional() -> Vec<CheckResult> {
    let m = Mode::Bottom;
    let values = exact_grid_values(&Grid::default_bottom());
    let mut out = Vec::new();

    // The three-case table, restated independently of the implementation.
    let mut verdict = Verdict::Pass;
    'table: for x in &values {
        for y in &values {
            for z in &values {
                let got = m.cond(x, y, z);
                let want = match y {
                    Value::Bottom => Value::Bottom,
                    Value::Ordinary(t) if t.is_zero() => z.clone(),
                    _ => x.clone(),
                };
                if got != want {
                    verdict = fail(
                        format!("cond({}; {}; {})", x.render(), y.render(), z.render()),
                        got.render(),
                        want.render(),
                    );
                    break 'table;
                }
            }
        }
    }
    out.push(CheckResult::new("cond_three_case_table", verdict));

    let mut verdict = Verdict::Pass;
    'seq: for x in &values {
        for y in &values {
            let direct = m.seqmul(x, y);
            let expanded = m.cond(&m.mul(x, y), x, &Value::int(0));
            if direct != expanded {
                verdict = fail(
                    format!("{} |*| {}", x.render(), y.render()),
                    direct.render(),
                    expanded.render(),
                );
                break 'seq;
            }
        }
    }
    out.push(CheckResult::new("seqmul_equals_cond_expansion", verdict));

    let got = m.cond(&ExactValue::Bottom, &ExactValue::int(0), &ExactValue::int(1));
    out.push(CheckResult::new(
        "cond_overrides_bottom_on_zero_test",
        if got == ExactValue::int(1) {
            Verdict::Pass
        } else {
            fail("cond(bot; 0; 1)", got.render(), "1")
        },
    ));

    let got = m.seqmul(&ExactValue::int(0), &ExactValue::Bottom);
    out.push(CheckResult::new(
        "seqmul_zero_absorbs_bottom",
        if got == ExactValue::int(0) {
            Verdict::Pass
        } else {
            fail("0 |*| bot", got.render(), "0")
        },
    ));
    out
}

// ---------------------------------------------------------------------------
// interdefinability
// ---------------------------------------------------------------------------

fn interdefinability() -> Vec<CheckResult> {
    let grid = Grid::default_bottom();
    let s2_recip = equiv(
        &parse("s(x)*s(x)").unwrap(),
        &parse("x |*| (1/x)").unwrap(),
        &["x"],
        &grid,
        Mode::Bottom,
        CarrierKind::Exact,
        0.0,
    );
    let cond_from_seqmul = equiv(
        &parse("cond(x; y; z)").unwrap(),
        &parse("s(y)*s(y) |*| x + (1 - s(y)*s(y)) |*| z").unwrap(),
        &["x", "y", "z"],
        &grid,
        Mode::Bottom,
        CarrierKind::Exact,
        0.0,
    );
    vec![
        CheckResult::new("sign_squared_is_seqmul_reciprocal", s2_recip),
        CheckResult::new("cond_defined_from_seqmul_and_sign", cond_from_seqmul),
    ]
}

// ---------------------------------------------------------------------------
// logcase
// ---------------------------------------------------------------------------

fn logcase(cfg: &SuiteConfig) -> Vec<CheckResult> {
    let rule = rewrite_rules()
        .into_iter()
        .find(|r| r.name == "logcase")
        .expect("logcase rule registered");
    let grid = Grid::default_bottom();
    let approx = equiv(
        &rule.lhs,
        &rule.rhs,
        &["x", "y"],
        &grid,
        Mode::Bottom,
        CarrierKind::Approx,
        cfg.tolerance,
    );
    // Every grid point is bot, zero or +/- a power of two, so the exact
    // carrier can check the same identity with no tolerance at all.
    let exact = equiv(
        &rule.lhs,
        &rule.rhs,
        &["x", "y"],
        &grid,
        Mode::Bottom,
        CarrierKind::Exact,
        0.0,
    );
    vec![
        CheckResult::new("logcase_approx", approx),
        CheckResult::new("logcase_exact_dyadic_grid", exact),
    ]
}

// ---------------------------------------------------------------------------
// flatten_rules
// ---------------------------------------------------------------------------

fn flatten_rules_suite(cfg: &SuiteConfig) -> Vec<CheckResult> {
    let grid = Grid::default_bottom();
    let reduced = Grid::reduced_bottom();
    let mut out = Vec::new();
    for rule in rewrite_rules() {
        let vars: Vec<String> = rule.lhs.free_vars();
        let vars: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        // 8^4 exact assignments are cheap; at six variables the exact
        // sweep uses the reduced grid and the full grid runs approximate.
        let (exact_grid, exact_name) = if vars.len() <= 4 {
            (&grid, format!("rule_{}_exact", rule.name))
        } else {
            (&reduced, format!("rule_{}_exact_reduced", rule.name))
        };
        out.push(CheckResult::new(
            exact_name,
            equiv(
                &rule.lhs,
                &rule.rhs,
                &vars,
                exact_grid,
                Mode::Bottom,
                CarrierKind::Exact,
                0.0,
            ),
        ));
        out.push(CheckResult::new(
            format!("rule_{}_approx", rule.name),
            equiv(
                &rule.lhs,
                &rule.rhs,
                &vars,
                &grid,
                Mode::Bottom,
                CarrierKind::Approx,
                cfg.tolerance,
            ),
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// flatten_soundness
// ---------------------------------------------------------------------------

fn flatten_soundness(cfg: &SuiteConfig) -> Vec<CheckResult> {
    let mut out = Vec::new();

    // Rule-level validation runs first; the sweep trusts the rules.
    let rule_results = flatten_rules_suite(cfg);
    let gate_ok = rule_results.iter().all(|c| c.verdict.is_pass());
    out.push(CheckResult::new(
        "soundness_rule_gate",
        if gate_ok {
            Verdict::Pass
        } else {
            let failed: Vec<&str> = rule_results
                .iter()
                .filter(|c| !c.verdict.is_pass())
                .map(|c| c.name.as_str())
                .collect();
            fail(
                "rewrite rules must validate before the sweep",
                failed.join(","),
                "all rules pass",
            )
        },
    ));
    if !gate_ok {
        return out;
    }

    let sig = Signature::full_bottom();
    let terms = random_terms(cfg.seed, 4, &sig, cfg.soundness_terms);
    let grid = Grid::default_bottom();
    let mut shape = Verdict::Pass;
    let mut semantics = Verdict::Pass;
    let mut checked = 0usize;
    for t in &terms {
        let f = match flatten(t) {
            Ok(f) => f,
            Err(e) => {
                shape = fail(print(t), e.to_string(), "a flat fracterm");
                break;
            }
        };
        let whole = f.as_term();
        let shape_ok = f.numerator.count_divisions() == 0
            && f.denominator.count_divisions() == 0
            && !whole.contains_bottom_literal()
            && whole.count_divisions() == 1;
        if !shape_ok {
            shape = fail(print(t), format!("{f}"), "one division at the root, no bot");
            break;
        }
        if semantics.is_pass() {
            let vars: Vec<String> = t.free_vars();
            let vars: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
            let verdict = if t.contains_log2() {
                equiv(
                    t,
                    &whole,
                    &vars,
                    &grid,
                    Mode::Bottom,
                    CarrierKind::Approx,
                    cfg.tolerance,
                )
            } else {
                equiv(t, &whole, &vars, &grid, Mode::Bottom, CarrierKind::Exact, 0.0)
            };
            if let Verdict::Fail {
                mut assignment,
                lhs,
                rhs,
            } = verdict
            {
                assignment.insert(0, ("term".to_string(), print(t)));
                semantics = Verdict::Fail {
                    assignment,
                    lhs,
                    rhs,
                };
            } else if let Verdict::Error {
                mut assignment,
                message,
            } = verdict
            {
                assignment.insert(0, ("term".to_string(), print(t)));
                semantics = Verdict::Error {
                    assignment,
                    message,
                };
            }
        }
        checked += 1;
    }
    out.push(CheckResult::new(
        format!("soundness_shape_{checked}_terms"),
        shape,
    ));
    out.push(CheckResult::new(
        format!("soundness_semantics_{checked}_terms"),
        semantics,
    ));
    out
}

// ---------------------------------------------------------------------------
// signed
// ---------------------------------------------------------------------------

fn signed() -> Vec<CheckResult> {
    let m = Mode::Signed;
    let pinf = ExactValue::PosInf;
    let ninf = ExactValue::NegInf;
    let mut out = Vec::new();
    let mut push = |name: &str, verdict: Verdict| out.push(CheckResult::new(name, verdict));

    let eq = |case: &str, got: ExactValue, want: ExactValue| {
        if got == want {
            Verdict::Pass
        } else {
            fail(case, got.render(), want.render())
        }
    };

    push(
        "signed_inf_plus_inf",
        eq("+inf + +inf", m.add(&pinf, &pinf), pinf.clone()),
    );
    push(
        "signed_inf_times_inf",
        eq("+inf * +inf", m.mul(&pinf, &pinf), pinf.clone()),
    );
    push(
        "signed_inf_plus_neg_inf",
        eq("+inf + -inf", m.add(&pinf, &ninf), ExactValue::Bottom),
    );
    push(
        "signed_zero_times_inf",
        eq("0 * +inf", m.mul(&ExactValue::int(0), &pinf), ExactValue::int(0)),
    );

    let signed_values = exact_grid_values(&Grid::signed());
    let mut verdict = Verdict::Pass;
    for v in &signed_values {
        for inf in [&pinf, &ninf] {
            let got = m.div(v, inf);
            if got != ExactValue::Bottom {
                verdict = fail(
                    format!("{} / {}", v.render(), inf.render()),
                    got.render(),
                    "bot",
                );
            }
        }
    }
    push("signed_division_by_inf_is_bot", verdict);

    let reals: Vec<ExactValue> = exact_grid_values(&Grid::default_bottom())
        .into_iter()
        .filter(|v| v.is_ordinary())
        .collect();
    let mut verdict = Verdict::Pass;
    for a in &reals {
        for (lhs, rhs) in [(m.add(&pinf, a), &pinf), (m.add(a, &ninf), &ninf)] {
            if &lhs != rhs {
                verdict = fail(format!("inf + {}", a.render()), lhs.render(), rhs.render());
            }
        }
    }
    push("signed_inf_plus_real", verdict);

    let mut verdict = Verdict::Pass;
    for a in &reals {
        let sign = match a {
            Value::Ordinary(x) => {
                use crate::value::Carrier as _;
                x.signum()
            }
            _ => unreachable!(),
        };
        let got = m.mul(&pinf, a);
        let want = match sign {
            0 => ExactValue::int(0),
            1 => pinf.clone(),
            _ => ninf.clone(),
        };
        if got != want {
            verdict = fail(format!("+inf * {}", a.render()), got.render(), want.render());
        }
        // Sign-symmetric closure on the negative infinity.
        let got = m.mul(&ninf, a);
        let want = m.neg(&want);
        if got != want {
            verdict = fail(format!("-inf * {}", a.render()), got.render(), want.render());
        }
    }
    push("signed_inf_times_real_by_sign", verdict);

    push(
        "signed_sign_of_infinities",
        match (m.sign(&pinf), m.sign(&ninf)) {
            (a, b) if a == ExactValue::int(1) && b == ExactValue::int(-1) => Verdict::Pass,
            (a, b) => fail("s(+inf), s(-inf)", a.render(), b.render()),
        },
    );

    push(
        "signed_log2_zero_is_neg_inf",
        eq(
            "log2(0)",
            m.log2(&ExactValue::int(0)).unwrap(),
            ninf.clone(),
        ),
    );
    push(
        "signed_log2_negative_is_bot",
        eq(
            "log2(-2)",
            m.log2(&ExactValue::int(-2)).unwrap(),
            ExactValue::Bottom,
        ),
    );
    push(
        "signed_log2_of_infinities_is_bot",
        match (m.log2(&pinf).unwrap(), m.log2(&ninf).unwrap()) {
            (ExactValue::Bottom, ExactValue::Bottom) => Verdict::Pass,
            (a, b) => fail("log2(+/-inf)", a.render(), b.render()),
        },
    );
    push(
        "signed_one_over_zero_is_still_bot",
        eq(
            "1/0",
            m.div(&ExactValue::int(1), &ExactValue::int(0)),
            ExactValue::Bottom,
        ),
    );

    // Distributivity failure: the two sides of the counterexample must
    // evaluate to (+inf, bot).
    let two = ExactValue::int(2);
    let one = ExactValue::int(1);
    let lhs = m.mul(&pinf, &m.sub(&two, &one));
    let rhs = m.sub(&m.mul(&pinf, &two), &m.mul(&pinf, &one));
    push(
        "signed_distributivity_lost",
        if lhs == pinf && rhs == ExactValue::Bottom {
            Verdict::Pass
        } else {
            fail("inf*(2-1) vs inf*2 - inf*1", lhs.render(), rhs.render())
        },
    );

    // log2(1/x) = -log2(x) fails at x = 0: the left side is bot while the
    // right side is +inf.
    let lhs = m
        .log2(&m.div(&ExactValue::int(1), &ExactValue::int(0)))
        .unwrap();
    let rhs = m.neg(&m.log2(&ExactValue::int(0)).unwrap());
    push(
        "signed_log2_reciprocal_fails_at_zero",
        if lhs == ExactValue::Bottom && rhs == pinf {
            Verdict::Pass
        } else {
            fail("log2(1/0) vs -log2(0)", lhs.render(), rhs.render())
        },
    );

    // Cross-entropy on distributions where Q vanishes on the support of P
    // comes out +inf under the signed tables, via the sequential form and
    // via the plain product form alike.
    let p = Pmf::from_weights(&[rat(1, 2), rat(1, 2)]).unwrap();
    let q = Pmf::from_weights(&[rat(0, 1), rat(1, 1)]).unwrap();
    let env = measure_environment::<BigRational>(&[("alpha", &p), ("beta", &q)]);
    let seq_term = build_cross_entropy_term(2, MeasureVariant::SeqMul).unwrap();
    let plain_term = Term::neg(Term::add(
        Term::mul(
            Term::fun("alpha", "c1"),
            Term::log2(Term::fun("beta", "c1")),
        ),
        Term::mul(
            Term::fun("alpha", "c2"),
            Term::log2(Term::fun("beta", "c2")),
        ),
    ));
    let got_seq = eval(&seq_term, &env, m);
    let got_plain = eval(&plain_term, &env, m);
    push(
        "signed_cross_entropy_zero_q_is_pos_inf",
        match (got_seq, got_plain) {
            (Ok(a), Ok(b)) if a == pinf && b == pinf => Verdict::Pass,
            (a, b) => fail("H(P,Q), P=(1/2,1/2), Q=(0,1)", format!("{a:?}"), format!("{b:?}")),
        },
    );

    out
}

// ---------------------------------------------------------------------------
// measures
// ---------------------------------------------------------------------------

/// All pmfs of width `n` with weights in `{0, 1/4, 1/2, 3/4, 1}`.
fn quarter_pmfs(n: usize) -> Vec<Pmf> {
    fn rec(parts: usize, remaining: i64, acc: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if parts == 1 {
            acc.push(remaining);
            out.push(acc.clone());
            acc.pop();
            return;
        }
        for k in 0..=remaining {
            acc.push(k);
            rec(parts - 1, remaining - k, acc, out);
            acc.pop();
        }
    }
    let mut raw = Vec::new();
    rec(n, 4, &mut Vec::new(), &mut raw);
    raw.into_iter()
        .map(|ks| {
            Pmf::from_weights(&ks.iter().map(|&k| rat(k, 4)).collect::<Vec<_>>())
                .expect("quarter weights sum to one")
        })
        .collect()
}

fn approx_of(v: Result<ApproxValue, crate::measures::MeasureError>) -> ApproxValue {
    v.expect("approximate measures do not fail on valid pmfs")
}

fn measures(cfg: &SuiteConfig) -> Vec<CheckResult> {
    let tol = cfg.tolerance;
    let mut out = Vec::new();

    // Exact entropy values on dyadic weights.
    let cases: [(&[(i64, i64)], i64); 3] = [
        (&[(1, 2), (1, 2)], 1),
        (&[(1, 1), (0, 1)], 0),
        (&[(1, 4), (1, 4), (1, 4), (1, 4)], 2),
    ];
    let mut verdict = Verdict::Pass;
    for (weights, want) in cases {
        let p = Pmf::from_weights(&weights.iter().map(|&(a, b)| rat(a, b)).collect::<Vec<_>>())
            .unwrap();
        match entropy::<BigRational>(&p) {
            Ok(h) if h == ExactValue::int(want) => {}
            Ok(h) => verdict = fail(format!("H{weights:?}"), h.render(), want.to_string()),
            Err(e) => verdict = fail(format!("H{weights:?}"), e.to_string(), want.to_string()),
        }
    }
    out.push(CheckResult::new("entropy_exact_values", verdict));

    // Builder equivalence for entropy.
    for variant in [
        MeasureVariant::SeqMul,
        MeasureVariant::SeqMulDiv,
        MeasureVariant::CompositeF,
        MeasureVariant::SignChain,
    ] {
        let mut verdict = Verdict::Pass;
        'outer: for n in 1..=4usize {
            let term = build_entropy_term(n, variant).unwrap();
            for p in quarter_pmfs(n) {
                let want = approx_of(entropy::<f64>(&p));
                let env = measure_environment::<f64>(&[("alpha", &p)]);
                match eval(&term, &env, Mode::Bottom) {
                    Ok(got) if approx_close(&got, &want, tol) => {}
                    Ok(got) => {
                        verdict = fail(
                            format!("n={n} weights={:?}", p.entries()),
                            got.render(),
                            want.render(),
                        );
                        break 'outer;
                    }
                    Err(e) => {
                        verdict = fail(
                            format!("n={n} weights={:?}", p.entries()),
                            e.to_string(),
                            want.render(),
                        );
                        break 'outer;
                    }
                }
            }
        }
        out.push(CheckResult::new(
            format!("entropy_builder_{variant:?}"),
            verdict,
        ));
    }

    // Builder equivalence for cross-entropy, bottom outcomes included.
    for variant in [
        MeasureVariant::SeqMul,
        MeasureVariant::SeqMulDiv,
        MeasureVariant::FXy,
    ] {
        let mut verdict = Verdict::Pass;
        'outer: for n in 1..=4usize {
            let term = build_cross_entropy_term(n, variant).unwrap();
            let pmfs = quarter_pmfs(n);
            for p in &pmfs {
                for q in &pmfs {
                    let want = approx_of(cross_entropy::<f64>(p, q));
                    let env = measure_environment::<f64>(&[("alpha", p), ("beta", q)]);
                    match eval(&term, &env, Mode::Bottom) {
                        Ok(got) if approx_close(&got, &want, tol) => {}
                        Ok(got) => {
                            verdict = fail(
                                format!("n={n} P={:?} Q={:?}", p.entries(), q.entries()),
                                got.render(),
                                want.render(),
                            );
                            break 'outer;
                        }
                        Err(e) => {
                            verdict = fail(
                                format!("n={n} P={:?} Q={:?}", p.entries(), q.entries()),
                                e.to_string(),
                                want.render(),
                            );
                            break 'outer;
                        }
                    }
                }
            }
        }
        out.push(CheckResult::new(
            format!("cross_entropy_builder_{variant:?}"),
            verdict,
        ));
    }

    // The sign-chain cross-entropy is asserted on ordinary-valued cases
    // only; its value on bottom cases is recorded behaviour, not a
    // contract.
    let mut verdict = Verdict::Pass;
    'outer: for n in 1..=4usize {
        let term = build_cross_entropy_term(n, MeasureVariant::SignChain).unwrap();
        let pmfs = quarter_pmfs(n);
        for p in &pmfs {
            for q in &pmfs {
                let want = approx_of(cross_entropy::<f64>(p, q));
                if !want.is_ordinary() {
                    continue;
                }
                let env = measure_environment::<f64>(&[("alpha", p), ("beta", q)]);
                match eval(&term, &env, Mode::Bottom) {
                    Ok(got) if approx_close(&got, &want, tol) => {}
                    Ok(got) => {
                        verdict = fail(
                            format!("n={n} P={:?} Q={:?}", p.entries(), q.entries()),
                            got.render(),
                            want.render(),
                        );
                        break 'outer;
                    }
                    Err(e) => {
                        verdict = fail(
                            format!("n={n} P={:?} Q={:?}", p.entries(), q.entries()),
                            e.to_string(),
                            want.render(),
                        );
                        break 'outer;
                    }
                }
            }
        }
    }
    out.push(CheckResult::new(
        "cross_entropy_builder_SignChain_ordinary_cases",
        verdict,
    ));

    // Bottom pattern: H(P,Q) = bot iff Q vanishes somewhere on the
    // support of P.
    let mut verdict = Verdict::Pass;
    'outer: for n in 1..=4usize {
        let pmfs = quarter_pmfs(n);
        for p in &pmfs {
            for q in &pmfs {
                let got = approx_of(cross_entropy::<f64>(p, q)).is_bottom();
                let want = p
                    .weights()
                    .zip(q.weights())
                    .any(|(pw, qw)| !pw.is_zero() && qw.is_zero());
                if got != want {
                    verdict = fail(
                        format!("n={n} P={:?} Q={:?}", p.entries(), q.entries()),
                        got.to_string(),
                        want.to_string(),
                    );
                    break 'outer;
                }
            }
        }
    }
    out.push(CheckResult::new("cross_entropy_bottom_pattern", verdict));

    // The worked example: P=(1/2,1/2), Q=(0,1) has bottom cross-entropy,
    // exactly, on the exact carrier.
    let p = Pmf::from_weights(&[rat(1, 2), rat(1, 2)]).unwrap();
    let q = Pmf::from_weights(&[rat(0, 1), rat(1, 1)]).unwrap();
    let got = cross_entropy::<BigRational>(&p, &q).unwrap();
    out.push(CheckResult::new(
        "cross_entropy_worked_example",
        if got == ExactValue::Bottom {
            Verdict::Pass
        } else {
            fail("H((1/2,1/2),(0,1))", got.render(), "bot")
        },
    ));

    // KL and JS.
    let mut kl_self = Verdict::Pass;
    let mut kl_decomp = Verdict::Pass;
    let mut js_props = Verdict::Pass;
    for n in 1..=4usize {
        let pmfs = quarter_pmfs(n);
        for p in &pmfs {
            match kl_divergence::<BigRational>(p, p) {
                Ok(v) if v == ExactValue::int(0) => {}
                Ok(v) => kl_self = fail(format!("KL(P||P) P={:?}", p.entries()), v.render(), "0"),
                Err(e) => {
                    kl_self = fail(format!("KL(P||P) P={:?}", p.entries()), e.to_string(), "0")
                }
            }
            for q in &pmfs {
                let kl = approx_of(kl_divergence::<f64>(p, q));
                let ce = approx_of(cross_entropy::<f64>(p, q));
                let h = approx_of(entropy::<f64>(p));
                match (&kl, &ce, &h) {
                    (Value::Ordinary(k), Value::Ordinary(c), Value::Ordinary(e)) => {
                        if (k - (c - e)).abs() > tol * (1.0f64).max(k.abs()).max((c - e).abs()) {
                            kl_decomp = fail(
                                format!("P={:?} Q={:?}", p.entries(), q.entries()),
                                kl.render(),
                                format!("{}", c - e),
                            );
                        }
                    }
                    _ => {
                        // Both KL and cross-entropy must be bot together.
                        if kl.is_bottom() != ce.is_bottom() {
                            kl_decomp = fail(
                                format!("P={:?} Q={:?}", p.entries(), q.entries()),
                                kl.render(),
                                ce.render(),
                            );
                        }
                    }
                }
                let js_pq = approx_of(js_divergence::<f64>(p, q));
                let js_qp = approx_of(js_divergence::<f64>(q, p));
                if !js_pq.is_ordinary()
                    || !js_qp.is_ordinary()
                    || !approx_close(&js_pq, &js_qp, tol)
                {
                    js_props = fail(
                        format!("P={:?} Q={:?}", p.entries(), q.entries()),
                        js_pq.render(),
                        js_qp.render(),
                    );
                }
            }
        }
    }
    out.push(CheckResult::new("kl_self_divergence_is_zero", kl_self));
    out.push(CheckResult::new(
        "kl_equals_cross_entropy_minus_entropy",
        kl_decomp,
    ));
    out.push(CheckResult::new("js_symmetric_and_never_bottom", js_props));

    let p = Pmf::from_weights(&[rat(1, 1), rat(0, 1)]).unwrap();
    let q = Pmf::from_weights(&[rat(0, 1), rat(1, 1)]).unwrap();
    let got = js_divergence::<BigRational>(&p, &q).unwrap();
    out.push(CheckResult::new(
        "js_disjoint_unit_masses_is_two",
        if got == ExactValue::int(2) {
            Verdict::Pass
        } else {
            fail("JS((1,0),(0,1))", got.render(), "2")
        },
    ));

    // The two printed forms of the guarded summand operator agree.
    out.push(CheckResult::new(
        "f_xy_sign_squared_form",
        equiv(
            &parse("x |*| (log2(y*y)/2) + 0*y").unwrap(),
            &parse("x*(log2(y*y + 1 - s(x)*s(x))/2)").unwrap(),
            &["x", "y"],
            &Grid::default_bottom(),
            Mode::Bottom,
            CarrierKind::Approx,
            tol,
        ),
    ));

    out
}

// ---------------------------------------------------------------------------
// bayes
// ---------------------------------------------------------------------------

fn bayes() -> Vec<CheckResult> {
    let mut guard_verdict = Verdict::Pass;
    let mut counterexample_found = false;
    let mut spaces = 0usize;
    let mut pairs = 0usize;
    for n in 1..=3usize {
        for pmf in quarter_pmfs(n) {
            let space = EventSpace::new(pmf).unwrap();
            let report = space.bayes_check();
            spaces += 1;
            pairs += report.pairs;
            if let Some(d) = report.guarded_failures.first() {
                guard_verdict = fail(
                    format!("A={:?} B={:?}", d.a, d.b),
                    d.lhs.clone(),
                    d.rhs.clone(),
                );
            }
            if report
                .unguarded_diffs
                .iter()
                .any(|d| d.lhs == "0" && d.rhs == "bot")
            {
                counterexample_found = true;
            }
        }
    }
    vec![
        CheckResult::new(
            format!("bayes_guarded_identity_{spaces}_spaces_{pairs}_pairs"),
            guard_verdict,
        ),
        CheckResult::new(
            "bayes_unguarded_counterexample_found",
            if counterexample_found {
                Verdict::Pass
            } else {
                fail("searching all spaces", "none", "a pair with lhs 0, rhs bot")
            },
        ),
    ]
}

// ---------------------------------------------------------------------------
// suppes
// ---------------------------------------------------------------------------

fn suppes(cfg: &SuiteConfig) -> Vec<CheckResult> {
    let m = Mode::SuppesOno;
    let mut out = Vec::new();

    // Totality: every operation stays ordinary on ordinary arguments.
    let reals: Vec<ExactValue> = exact_grid_values(&Grid::default_bottom())
        .into_iter()
        .filter(|v| v.is_ordinary())
        .collect();
    let mut verdict = Verdict::Pass;
    for a in &reals {
        for b in &reals {
            for (case, v) in [
                ("add", m.add(a, b)),
                ("mul", m.mul(a, b)),
                ("div", m.div(a, b)),
                ("seqmul", m.seqmul(a, b)),
                ("cond", m.cond(a, b, &ExactValue::int(1))),
            ] {
                if !v.is_ordinary() {
                    verdict = fail(
                        format!("{case}({}, {})", a.render(), b.render()),
                        v.render(),
                        "an ordinary value",
                    );
                }
            }
        }
        let neg = m.neg(a);
        let sign = m.sign(a);
        if !neg.is_ordinary() || !sign.is_ordinary() {
            verdict = fail(a.render(), neg.render(), sign.render());
        }
    }
    out.push(CheckResult::new("suppes_operations_stay_ordinary", verdict));

    // Entropy: the same defining term evaluates identically under
    // Suppes-Ono and bottom semantics for every gridded pmf.
    let mut verdict = Verdict::Pass;
    'outer: for n in 1..=4usize {
        let term = build_entropy_term(n, MeasureVariant::SeqMul).unwrap();
        for p in quarter_pmfs(n) {
            let want = approx_of(entropy::<f64>(&p));
            let env = measure_environment::<f64>(&[("alpha", &p)]);
            match eval(&term, &env, m) {
                Ok(got) if approx_close(&got, &want, cfg.tolerance) => {}
                Ok(got) => {
                    verdict = fail(
                        format!("n={n} weights={:?}", p.entries()),
                        got.render(),
                        want.render(),
                    );
                    break 'outer;
                }
                Err(e) => {
                    verdict = fail(
                        format!("n={n} weights={:?}", p.entries()),
                        e.to_string(),
                        want.render(),
                    );
                    break 'outer;
                }
            }
        }
    }
    out.push(CheckResult::new("suppes_entropy_agrees_with_bottom", verdict));

    // Cross-entropy: wherever bottom mode reports bot, Suppes-Ono quietly
    // produces an ordinary (wrong) number; at least one such pair exists.
    let mut verdict = Verdict::Pass;
    let mut disagreements = 0usize;
    'outer: for n in 1..=4usize {
        let term = build_cross_entropy_term(n, MeasureVariant::SeqMul).unwrap();
        let pmfs = quarter_pmfs(n);
        for p in &pmfs {
            for q in &pmfs {
                let bottom = approx_of(cross_entropy::<f64>(p, q));
                let env = measure_environment::<f64>(&[("alpha", p), ("beta", q)]);
                let so = match eval(&term, &env, m) {
                    Ok(v) => v,
                    Err(e) => {
                        verdict = fail(
                            format!("n={n} P={:?} Q={:?}", p.entries(), q.entries()),
                            e.to_string(),
                            "an ordinary value",
                        );
                        break 'outer;
                    }
                };
                if !so.is_ordinary() {
                    verdict = fail(
                        format!("n={n} P={:?} Q={:?}", p.entries(), q.entries()),
                        so.render(),
                        "an ordinary value",
                    );
                    break 'outer;
                }
                if bottom.is_bottom() {
                    disagreements += 1;
                }
            }
        }
    }
    if verdict.is_pass() && disagreements == 0 {
        verdict = fail(
            "searching the pmf grid",
            "no pair",
            "a pair where bottom mode gives bot",
        );
    }
    out.push(CheckResult::new(
        format!("suppes_cross_entropy_ordinary_on_{disagreements}_bottom_pairs"),
        verdict,
    ));

    out
}
