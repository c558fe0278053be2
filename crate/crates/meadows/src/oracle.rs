//! Grid-based semantic equivalence checking and the named identity suites.
//!
//! [`equiv`] evaluates two terms at every assignment of grid values to
//! their variables and demands an identical peripheral pattern plus exact
//! (or tolerance-bounded) numeric agreement. [`random_terms`] produces a
//! deterministic pseudo-random stream of terms over a signature.
//! [`suites::run_suite`] bundles the identity checks by topic.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::eval::{eval, Environment};
use crate::term::{Literal, OpKind, Signature, Term};
use crate::value::{Carrier, CarrierKind, Mode, Value};

mod suites;

pub use suites::{run_all_suites, run_suite, suite_names, SuiteConfig, UnknownSuite};

/// A finite set of carrier points used for exhaustive checking. The
/// default grid contains `bot`, zero, and positive and negative values,
/// so every semantic branch of every operator is exercised.
#[derive(Debug, Clone)]
pub struct Grid {
    pub values: Vec<Literal>,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Grid {
    pub fn new(values: Vec<Literal>) -> Grid {
        Grid { values }
    }

    /// `{bot, -2, -1, -1/2, 0, 1/2, 1, 2}`.
    pub fn default_bottom() -> Grid {
        let mut values = vec![Literal::Bottom];
        for (n, d) in [(-2, 1), (-1, 1), (-1, 2), (0, 1), (1, 2), (1, 1), (2, 1)] {
            values.push(Literal::Rational(rat(n, d)));
        }
        Grid::new(values)
    }

    /// The default grid without `bot` and with both infinities.
    pub fn signed() -> Grid {
        let mut g = Grid::default_bottom();
        g.values.push(Literal::PosInf);
        g.values.push(Literal::NegInf);
        g
    }

    /// A smaller grid for checks whose assignment space would otherwise
    /// be too large: `{bot, -1, 0, 1, 2}`.
    pub fn reduced_bottom() -> Grid {
        let mut values = vec![Literal::Bottom];
        for n in [-1, 0, 1, 2] {
            values.push(Literal::Rational(rat(n, 1)));
        }
        Grid::new(values)
    }
}

/// Converts a grid literal to a carrier value.
pub fn literal_value<N: Carrier>(lit: &Literal) -> Value<N> {
    match lit {
        Literal::Rational(r) => Value::rational(r),
        Literal::Bottom => Value::Bottom,
        Literal::PosInf => Value::PosInf,
        Literal::NegInf => Value::NegInf,
    }
}

fn literal_text(lit: &Literal) -> String {
    literal_value::<BigRational>(lit).render()
}

/// Outcome of a single check. Failures carry a reproducible
/// counterexample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail {
        assignment: Vec<(String, String)>,
        lhs: String,
        rhs: String,
    },
    /// An evaluator error surfaced while checking; reported with context.
    Error {
        assignment: Vec<(String, String)>,
        message: String,
    },
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn describe(&self) -> String {
        match self {
            Verdict::Pass => "pass".to_string(),
            Verdict::Fail {
                assignment,
                lhs,
                rhs,
            } => format!(
                "fail at {}: {} vs {}",
                format_assignment(assignment),
                lhs,
                rhs
            ),
            Verdict::Error {
                assignment,
                message,
            } => format!("error at {}: {}", format_assignment(assignment), message),
        }
    }
}

fn format_assignment(assignment: &[(String, String)]) -> String {
    if assignment.is_empty() {
        return "(no variables)".to_string();
    }
    assignment
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// A named check and its verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub verdict: Verdict,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, verdict: Verdict) -> CheckResult {
        CheckResult {
            name: name.into(),
            verdict,
        }
    }
}

/// Whether two approximate values agree: identical peripheral pattern,
/// and numerically `|a-b| <= tol * max(1, |a|, |b|)`.
pub fn approx_close(a: &Value<f64>, b: &Value<f64>, tol: f64) -> bool {
    match (a, b) {
        (Value::Ordinary(x), Value::Ordinary(y)) => {
            (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0)
        }
        _ => a == b,
    }
}

/// Iterates every assignment of grid values to `vars` (the last variable
/// cycling fastest) and calls `f`; stops early on a non-pass verdict.
fn sweep_assignments(
    vars: &[&str],
    grid: &Grid,
    mut f: impl FnMut(&[(&str, &Literal)]) -> Verdict,
) -> Verdict {
    let k = vars.len();
    if k == 0 {
        return f(&[]);
    }
    let base = grid.values.len();
    let mut idx = vec![0usize; k];
    loop {
        let assignment: Vec<(&str, &Literal)> = vars
            .iter()
            .zip(&idx)
            .map(|(v, i)| (*v, &grid.values[*i]))
            .collect();
        let verdict = f(&assignment);
        if !verdict.is_pass() {
            return verdict;
        }
        // Odometer increment, last position fastest.
        let mut pos = k;
        loop {
            if pos == 0 {
                return Verdict::Pass;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < base {
                break;
            }
            idx[pos] = 0;
        }
    }
}

fn render_assignment(assignment: &[(&str, &Literal)]) -> Vec<(String, String)> {
    assignment
        .iter()
        .map(|(v, lit)| (v.to_string(), literal_text(lit)))
        .collect()
}

fn equiv_on<N: Carrier>(
    t1: &Term,
    t2: &Term,
    vars: &[&str],
    grid: &Grid,
    mode: Mode,
    agree: impl Fn(&Value<N>, &Value<N>) -> bool,
) -> Verdict {
    sweep_assignments(vars, grid, |assignment| {
        let mut env = Environment::<N>::new();
        for (v, lit) in assignment {
            env = env.bind_var(*v, literal_value(lit));
        }
        let lhs = eval(t1, &env, mode);
        let rhs = eval(t2, &env, mode);
        match (lhs, rhs) {
            (Ok(a), Ok(b)) => {
                if agree(&a, &b) {
                    Verdict::Pass
                } else {
                    Verdict::Fail {
                        assignment: render_assignment(assignment),
                        lhs: a.render(),
                        rhs: b.render(),
                    }
                }
            }
            (Err(e), _) | (_, Err(e)) => Verdict::Error {
                assignment: render_assignment(assignment),
                message: e.to_string(),
            },
        }
    })
}

/// Checks that two terms evaluate equally at every assignment of grid
/// values to `vars`: exact equality on the exact carrier, peripheral
/// pattern plus relative tolerance on the approximate one.
pub fn equiv(
    t1: &Term,
    t2: &Term,
    vars: &[&str],
    grid: &Grid,
    mode: Mode,
    carrier: CarrierKind,
    tolerance: f64,
) -> Verdict {
    match carrier {
        CarrierKind::Exact => equiv_on::<BigRational>(t1, t2, vars, grid, mode, |a, b| a == b),
        CarrierKind::Approx => {
            equiv_on::<f64>(t1, t2, vars, grid, mode, |a, b| approx_close(a, b, tolerance))
        }
    }
}

/// Deterministic pseudo-random terms over a signature: same seed, same
/// stream. Leaves are the signature's variables and the literals
/// `0, 1, 2, bot`.
pub fn random_terms(seed: u64, max_depth: usize, sig: &Signature, count: usize) -> Vec<Term> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ops: Vec<OpKind> = sig.ops.iter().copied().collect();
    (0..count)
        .map(|_| random_term(&mut rng, sig, &ops, max_depth))
        .collect()
}

fn random_leaf(rng: &mut ChaCha8Rng, sig: &Signature) -> Term {
    let literals = [Term::int(0), Term::int(1), Term::int(2), Term::bot()];
    let n = sig.vars.len() + literals.len();
    let pick = rng.gen_range(0..n);
    if pick < sig.vars.len() {
        Term::var(sig.vars[pick].clone())
    } else {
        literals[pick - sig.vars.len()].clone()
    }
}

fn random_term(rng: &mut ChaCha8Rng, sig: &Signature, ops: &[OpKind], depth: usize) -> Term {
    if depth == 0 || ops.is_empty() || rng.gen_range(0..100) < 25 {
        return random_leaf(rng, sig);
    }
    let sub = |rng: &mut ChaCha8Rng| random_term(rng, sig, ops, depth - 1);
    match ops[rng.gen_range(0..ops.len())] {
        OpKind::Add => Term::add(sub(rng), sub(rng)),
        OpKind::Neg => Term::neg(sub(rng)),
        OpKind::Mul => Term::mul(sub(rng), sub(rng)),
        OpKind::Div => Term::div(sub(rng), sub(rng)),
        OpKind::Log2 => Term::log2(sub(rng)),
        OpKind::Cond => Term::cond(sub(rng), sub(rng), sub(rng)),
        OpKind::SeqMul => Term::seqmul(sub(rng), sub(rng)),
        OpKind::Sign => Term::sign(sub(rng)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{parse, print};
    use crate::value::ExactValue;

    #[test]
    fn reflexivity_passes() {
        let t = parse("x").unwrap();
        let v = equiv(
            &t,
            &t,
            &["x"],
            &Grid::default_bottom(),
            Mode::Bottom,
            CarrierKind::Exact,
            0.0,
        );
        assert!(v.is_pass());
    }

    #[test]
    fn sign_squared_identity_passes() {
        let t1 = parse("s(x)*s(x)").unwrap();
        let t2 = parse("x |*| (1/x)").unwrap();
        let v = equiv(
            &t1,
            &t2,
            &["x"],
            &Grid::default_bottom(),
            Mode::Bottom,
            CarrierKind::Exact,
            0.0,
        );
        assert!(v.is_pass(), "{}", v.describe());
    }

    #[test]
    fn seqmul_is_not_plain_multiplication() {
        let t1 = parse("x |*| y").unwrap();
        let t2 = parse("x*y").unwrap();
        let v = equiv(
            &t1,
            &t2,
            &["x", "y"],
            &Grid::default_bottom(),
            Mode::Bottom,
            CarrierKind::Exact,
            0.0,
        );
        match v {
            Verdict::Fail {
                assignment,
                lhs,
                rhs,
            } => {
                assert_eq!(
                    assignment,
                    vec![
                        ("x".to_string(), "0".to_string()),
                        ("y".to_string(), "bot".to_string())
                    ]
                );
                assert_eq!(lhs, "0");
                assert_eq!(rhs, "bot");
            }
            other => panic!("expected a counterexample, got {other:?}"),
        }
    }

    #[test]
    fn unbound_variables_surface_as_errors() {
        let t = parse("q + 1").unwrap();
        let v = equiv(
            &t,
            &t,
            &["x"],
            &Grid::default_bottom(),
            Mode::Bottom,
            CarrierKind::Exact,
            0.0,
        );
        assert!(matches!(v, Verdict::Error { .. }));
    }

    #[test]
    fn random_terms_are_deterministic_and_well_formed() {
        let sig = Signature::full_bottom();
        let a = random_terms(1, 2, &sig, 5);
        let b = random_terms(1, 2, &sig, 5);
        assert_eq!(a, b);
        let c = random_terms(2, 2, &sig, 5);
        assert_ne!(a, c);
        for t in random_terms(7, 4, &sig, 200) {
            assert!(sig.admits(&t));
            let reparsed = parse(&print(&t)).unwrap();
            assert_eq!(t, reparsed, "round trip of {}", print(&t));
        }
    }

    #[test]
    fn field_fragment_evaluates_closed() {
        let sig = Signature::new(
            [OpKind::Add, OpKind::Neg, OpKind::Mul, OpKind::Div],
            &["x"],
        );
        let grid = Grid::default_bottom();
        for t in random_terms(11, 3, &sig, 100) {
            if t.contains_bottom_literal() {
                continue;
            }
            let v = sweep_assignments(&["x"], &grid, |assignment| {
                let mut env = Environment::<BigRational>::new();
                for (var, lit) in assignment {
                    env = env.bind_var(*var, literal_value(lit));
                }
                match eval(&t, &env, Mode::Bottom) {
                    Ok(_) => Verdict::Pass,
                    Err(e) => Verdict::Error {
                        assignment: render_assignment(assignment),
                        message: e.to_string(),
                    },
                }
            });
            assert!(v.is_pass());
        }
    }

    #[test]
    fn default_grid_exercises_every_branch() {
        let grid = Grid::default_bottom();
        let has = |p: &dyn Fn(&ExactValue) -> bool| {
            grid.values.iter().any(|l| p(&literal_value(l)))
        };
        assert!(has(&|v| v.is_bottom()));
        assert!(has(&|v| v == &ExactValue::int(0)));
        assert!(has(&|v| matches!(v.as_ordinary(), Some(x) if x.signum() > 0)));
        assert!(has(&|v| matches!(v.as_ordinary(), Some(x) if x.signum() < 0)));
    }

    #[test]
    fn approx_closeness_honours_pattern_first() {
        assert!(approx_close(
            &Value::Ordinary(1.0),
            &Value::Ordinary(1.0 + 1e-12),
            1e-9
        ));
        assert!(!approx_close(&Value::Ordinary(0.0), &Value::Bottom, 1e9));
        assert!(approx_close(&Value::Bottom, &Value::Bottom, 0.0));
    }
}
