//! Probability mass functions and information measures.
//!
//! Entropy, cross-entropy, KL and JS divergence are computed two ways:
//! directly over values with bottom-mode operations, and as closed terms
//! over a function variable `alpha` (and `beta`) applied to sample-point
//! constants `c1 .. cn`, built by [`build_entropy_term`] and friends and
//! evaluated through [`measure_environment`]. Cross-entropy is `bot`
//! exactly when the second distribution vanishes somewhere the first does
//! not; JS divergence never is.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::eval::Environment;
use crate::term::Term;
use crate::value::{parse_rational, Carrier, Inexact, Mode, Value};

/// A finite probability mass function: ordered distinct labels with exact
/// nonnegative rational weights summing to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pmf {
    entries: Vec<(String, BigRational)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PmfError {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("label `{label}` has negative weight {weight}")]
    NegativeWeight { label: String, weight: String },
    #[error("weights sum to {0}, not 1")]
    BadSum(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Pmf {
    pub fn new(entries: Vec<(String, BigRational)>) -> Result<Pmf, PmfError> {
        let mut seen = BTreeSet::new();
        let mut sum = BigRational::zero();
        for (label, weight) in &entries {
            if !seen.insert(label.clone()) {
                return Err(PmfError::DuplicateLabel(label.clone()));
            }
            if weight < &BigRational::zero() {
                return Err(PmfError::NegativeWeight {
                    label: label.clone(),
                    weight: weight.to_string(),
                });
            }
            sum += weight;
        }
        if !sum.is_one() {
            return Err(PmfError::BadSum(sum.to_string()));
        }
        Ok(Pmf { entries })
    }

    /// Builds a pmf over labels `c1 .. cn` from the given weights.
    pub fn from_weights(weights: &[BigRational]) -> Result<Pmf, PmfError> {
        Pmf::new(
            weights
                .iter()
                .enumerate()
                .map(|(i, w)| (format!("c{}", i + 1), w.clone()))
                .collect(),
        )
    }

    /// Parses the TSV format: one `label<TAB>weight` per line, `#` starts
    /// a comment, blank lines are skipped. Weights are exact rationals
    /// (`a/b`, an integer, or a terminating decimal).
    pub fn from_tsv(text: &str) -> Result<Pmf, PmfError> {
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (label, weight) = line.split_once('\t').ok_or(PmfError::Parse {
                line: idx + 1,
                message: "expected `label<TAB>weight`".into(),
            })?;
            let weight = parse_rational(weight.trim()).map_err(|e| PmfError::Parse {
                line: idx + 1,
                message: e.to_string(),
            })?;
            entries.push((label.trim().to_string(), weight));
        }
        Pmf::new(entries)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(l, _)| l.as_str())
    }

    pub fn weights(&self) -> impl Iterator<Item = &BigRational> {
        self.entries.iter().map(|(_, w)| w)
    }

    pub fn entries(&self) -> &[(String, BigRational)] {
        &self.entries
    }

    pub fn weight(&self, label: &str) -> Option<&BigRational> {
        self.entries
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, w)| w)
    }

    /// The pointwise average of two pmfs over the same labels.
    fn midpoint(&self, other: &Pmf) -> Result<Pmf, MeasureError> {
        check_same_labels(self, other)?;
        let half = BigRational::new(1.into(), 2.into());
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|((l, p), (_, q))| (l.clone(), (p + q) * &half))
            .collect();
        Ok(Pmf::new(entries).expect("midpoint of valid pmfs is valid"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureError {
    #[error("distributions have different labels ({0} vs {1})")]
    LabelMismatch(String, String),
    #[error(transparent)]
    Inexact(#[from] Inexact),
    #[error("variant {variant:?} does not produce {measure} terms")]
    InvalidVariant {
        variant: MeasureVariant,
        measure: &'static str,
    },
}

fn check_same_labels(p: &Pmf, q: &Pmf) -> Result<(), MeasureError> {
    let pl: Vec<_> = p.labels().collect();
    let ql: Vec<_> = q.labels().collect();
    if pl != ql {
        return Err(MeasureError::LabelMismatch(pl.join(","), ql.join(",")));
    }
    Ok(())
}

const MODE: Mode = Mode::Bottom;

/// `H(P) = -sum P(x) |*| log2 P(x)`.
pub fn entropy<N: Carrier>(p: &Pmf) -> Result<Value<N>, MeasureError> {
    let mut acc = Value::zero();
    for w in p.weights() {
        let w = Value::rational(w);
        let term = MODE.seqmul(&w, &MODE.log2(&w)?);
        acc = MODE.add(&acc, &term);
    }
    Ok(MODE.neg(&acc))
}

/// `H(P,Q) = -sum P(x) |*| log2 Q(x)`; `bot` exactly when `Q` vanishes
/// somewhere on the support of `P`.
pub fn cross_entropy<N: Carrier>(p: &Pmf, q: &Pmf) -> Result<Value<N>, MeasureError> {
    check_same_labels(p, q)?;
    let mut acc = Value::zero();
    for (pw, qw) in p.weights().zip(q.weights()) {
        let pv = Value::rational(pw);
        let qv = Value::rational(qw);
        let term = MODE.seqmul(&pv, &MODE.log2(&qv)?);
        acc = MODE.add(&acc, &term);
    }
    Ok(MODE.neg(&acc))
}

/// `D_KL(P||Q) = sum P(x) |*| log2(P(x)/Q(x))`.
pub fn kl_divergence<N: Carrier>(p: &Pmf, q: &Pmf) -> Result<Value<N>, MeasureError> {
    check_same_labels(p, q)?;
    let mut acc = Value::zero();
    for (pw, qw) in p.weights().zip(q.weights()) {
        let pv = Value::rational(pw);
        let qv = Value::rational(qw);
        let ratio = MODE.div(&pv, &qv);
        let term = MODE.seqmul(&pv, &MODE.log2(&ratio)?);
        acc = MODE.add(&acc, &term);
    }
    Ok(acc)
}

/// `D_JS(P||Q) = D_KL(P||M) + D_KL(Q||M)` with `M = (P+Q)/2`; note there
/// are no 1/2 factors on the two summands. Never `bot` for valid pmfs.
pub fn js_divergence<N: Carrier>(p: &Pmf, q: &Pmf) -> Result<Value<N>, MeasureError> {
    let m = p.midpoint(q)?;
    let a = kl_divergence::<N>(p, &m)?;
    let b = kl_divergence::<N>(q, &m)?;
    Ok(MODE.add(&a, &b))
}

/// Sequential expected value `sum P(x) |*| F(x)`: `bot` iff `F` is `bot`
/// somewhere `P` is nonzero.
pub fn seq_expected_value<N: Carrier>(
    p: &Pmf,
    f: impl Fn(&str) -> Value<N>,
) -> Result<Value<N>, MeasureError> {
    let mut acc = Value::zero();
    for (label, w) in p.entries() {
        let term = MODE.seqmul(&Value::rational(w), &f(label));
        acc = MODE.add(&acc, &term);
    }
    Ok(acc)
}

/// Which term expression a builder produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureVariant {
    /// No term: compute the measure directly over values.
    Direct,
    /// `-sum alpha(ci) |*| log2 alpha(ci)` (and `beta` for cross-entropy).
    SeqMul,
    /// `sum alpha(ci) |*| log2(1/alpha(ci))`, the form with division.
    SeqMulDiv,
    /// The composite operator `f(x) = x |*| log2 x`, inlined; entropy only.
    CompositeF,
    /// The sign-squared chain that reroutes zero weights to a nonzero
    /// sample point before taking `log2`.
    SignChain,
    /// `f(x,y) = x |*| (log2(y*y)/2) + 0*y`, inlined; cross-entropy only.
    FXy,
}

fn labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("c{i}")).collect()
}

fn sum(summands: Vec<Term>) -> Term {
    let mut it = summands.into_iter();
    let first = match it.next() {
        Some(t) => t,
        // An empty sum produces 0.
        None => return Term::int(0),
    };
    it.fold(first, Term::add)
}

fn neg_sum(summands: Vec<Term>) -> Term {
    Term::neg(sum(summands))
}

/// The chain `t_1 = c1`, `t_{i+1} = s^2(alpha(c_{i+1}))*c_{i+1} +
/// (1 - s^2(alpha(c_{i+1})))*t_i`: evaluates to the sample point with the
/// largest index at which `alpha` is nonzero.
fn sign_chain_selector(fun: &str, n: usize) -> Term {
    let mut t = Term::var("c1");
    for i in 2..=n {
        let ci = format!("c{i}");
        let s2 = Term::sign_squared(Term::fun(fun, ci.clone()));
        t = Term::add(
            Term::mul(s2.clone(), Term::var(ci)),
            Term::mul(Term::sub(Term::int(1), s2), t),
        );
    }
    t
}

/// Summand `alpha(ci) * log2(s^2(alpha(ci))*inner_i + (1-s^2(alpha(ci)))*t_n)`
/// where `inner_i` is `alpha(ci)` for entropy and `beta(ci)` for
/// cross-entropy.
fn sign_chain_summand(weight_fun: &str, inner_fun: &str, label: &str, selector: &Term) -> Term {
    let s2 = Term::sign_squared(Term::fun(weight_fun, label));
    let guarded = Term::add(
        Term::mul(s2.clone(), Term::fun(inner_fun, label)),
        Term::mul(Term::sub(Term::int(1), s2), selector.clone()),
    );
    Term::mul(Term::fun(weight_fun, label), Term::log2(guarded))
}

/// Builds a closed entropy term over `alpha` and `c1 .. cn` whose
/// evaluation equals [`entropy`] for every valid pmf binding.
pub fn build_entropy_term(n: usize, variant: MeasureVariant) -> Result<Term, MeasureError> {
    let ls = labels(n);
    match variant {
        MeasureVariant::SeqMul | MeasureVariant::CompositeF => Ok(neg_sum(
            ls.iter()
                .map(|l| {
                    let a = Term::fun("alpha", l.clone());
                    Term::seqmul(a.clone(), Term::log2(a))
                })
                .collect(),
        )),
        MeasureVariant::SeqMulDiv => Ok(sum(ls
            .iter()
            .map(|l| {
                let a = Term::fun("alpha", l.clone());
                Term::seqmul(a.clone(), Term::log2(Term::div(Term::int(1), a)))
            })
            .collect())),
        MeasureVariant::SignChain => {
            let selector = sign_chain_selector("alpha", n);
            Ok(neg_sum(
                ls.iter()
                    .map(|l| sign_chain_summand("alpha", "alpha", l, &selector))
                    .collect(),
            ))
        }
        v => Err(MeasureError::InvalidVariant {
            variant: v,
            measure: "entropy",
        }),
    }
}

/// Builds a closed cross-entropy term over `alpha`, `beta` and `c1 .. cn`.
pub fn build_cross_entropy_term(
    n: usize,
    variant: MeasureVariant,
) -> Result<Term, MeasureError> {
    let ls = labels(n);
    match variant {
        MeasureVariant::SeqMul => Ok(neg_sum(
            ls.iter()
                .map(|l| {
                    Term::seqmul(
                        Term::fun("alpha", l.clone()),
                        Term::log2(Term::fun("beta", l.clone())),
                    )
                })
                .collect(),
        )),
        MeasureVariant::SeqMulDiv => Ok(sum(ls
            .iter()
            .map(|l| {
                Term::seqmul(
                    Term::fun("alpha", l.clone()),
                    Term::log2(Term::div(Term::int(1), Term::fun("beta", l.clone()))),
                )
            })
            .collect())),
        MeasureVariant::FXy => Ok(neg_sum(
            ls.iter()
                .map(|l| {
                    let b = || Term::fun("beta", l.clone());
                    Term::add(
                        Term::seqmul(
                            Term::fun("alpha", l.clone()),
                            Term::div(Term::log2(Term::mul(b(), b())), Term::int(2)),
                        ),
                        Term::mul(Term::int(0), b()),
                    )
                })
                .collect(),
        )),
        MeasureVariant::SignChain => {
            let selector = sign_chain_selector("alpha", n);
            Ok(neg_sum(
                ls.iter()
                    .map(|l| sign_chain_summand("alpha", "beta", l, &selector))
                    .collect(),
            ))
        }
        v => Err(MeasureError::InvalidVariant {
            variant: v,
            measure: "cross-entropy",
        }),
    }
}

/// `sum alpha(ci) |*| log2(alpha(ci)/beta(ci))`.
pub fn build_kl_term(n: usize) -> Term {
    sum(labels(n)
        .iter()
        .map(|l| {
            Term::seqmul(
                Term::fun("alpha", l.clone()),
                Term::log2(Term::div(
                    Term::fun("alpha", l.clone()),
                    Term::fun("beta", l.clone()),
                )),
            )
        })
        .collect())
}

/// KL(P||M) + KL(Q||M) with the midpoint `M = (alpha(ci)+beta(ci))/2`
/// expanded in place.
pub fn build_js_term(n: usize) -> Term {
    let ls = labels(n);
    let mid = |l: &String| {
        Term::div(
            Term::add(Term::fun("alpha", l.clone()), Term::fun("beta", l.clone())),
            Term::int(2),
        )
    };
    let kl_against_mid = |fun: &'static str| {
        sum(ls
            .iter()
            .map(|l| {
                Term::seqmul(
                    Term::fun(fun, l.clone()),
                    Term::log2(Term::div(Term::fun(fun, l.clone()), mid(l))),
                )
            })
            .collect())
    };
    Term::add(kl_against_mid("alpha"), kl_against_mid("beta"))
}

/// Environment binding each function variable to a pmf's weights by label
/// position, and each sample-point constant `ci` to the ordinary value
/// `i`. Positive sample points keep `log2` of a chain selector ordinary.
pub fn measure_environment<N: Carrier>(pmfs: &[(&str, &Pmf)]) -> Environment<N> {
    let n = pmfs.first().map_or(0, |(_, p)| p.len());
    let mut env = Environment::new().with_labels(labels(n));
    for i in 1..=n {
        env = env.bind_var(format!("c{i}"), Value::int(i as i64));
    }
    for (fun, pmf) in pmfs {
        for (i, w) in pmf.weights().enumerate() {
            env = env.bind_fun(*fun, format!("c{}", i + 1), Value::rational(w));
        }
    }
    env
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::eval;
    use crate::value::ExactValue;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn pmf(weights: &[(i64, i64)]) -> Pmf {
        Pmf::from_weights(&weights.iter().map(|&(n, d)| rat(n, d)).collect::<Vec<_>>())
            .unwrap()
    }

    /// Independent check: direct summation with the 0*log2(0) = 0
    /// convention over f64.
    fn entropy_f64(weights: &[f64]) -> f64 {
        -weights
            .iter()
            .filter(|w| **w > 0.0)
            .map(|w| w * f64::log2(*w))
            .sum::<f64>()
    }

    #[test]
    fn entropy_exact_values() {
        assert_eq!(
            entropy::<BigRational>(&pmf(&[(1, 2), (1, 2)])).unwrap(),
            ExactValue::int(1)
        );
        assert_eq!(
            entropy::<BigRational>(&pmf(&[(1, 1), (0, 1)])).unwrap(),
            ExactValue::int(0)
        );
        assert_eq!(
            entropy::<BigRational>(&pmf(&[(1, 4), (1, 4), (1, 4), (1, 4)])).unwrap(),
            ExactValue::int(2)
        );
        assert!((entropy_f64(&[0.25, 0.25, 0.25, 0.25]) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_inexact_on_non_dyadic_weights() {
        assert!(matches!(
            entropy::<BigRational>(&pmf(&[(1, 4), (3, 4)])),
            Err(MeasureError::Inexact(_))
        ));
        // The approximate carrier handles it.
        let got = entropy::<f64>(&pmf(&[(1, 4), (3, 4)])).unwrap();
        let want = entropy_f64(&[0.25, 0.75]);
        match got {
            Value::Ordinary(x) => assert!((x - want).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn cross_entropy_bottom_exactly_when_q_vanishes_on_support() {
        let p = pmf(&[(1, 2), (1, 2)]);
        let q = pmf(&[(0, 1), (1, 1)]);
        assert_eq!(
            cross_entropy::<BigRational>(&p, &q).unwrap(),
            ExactValue::Bottom
        );
        assert_eq!(
            cross_entropy::<BigRational>(&p, &p).unwrap(),
            entropy::<BigRational>(&p).unwrap()
        );
        // Zero weight in P tolerates zero weight in Q.
        let degenerate = pmf(&[(1, 1), (0, 1)]);
        assert_eq!(
            cross_entropy::<BigRational>(&degenerate, &degenerate).unwrap(),
            ExactValue::int(0)
        );
    }

    #[test]
    fn cross_entropy_derived_value() {
        let p = pmf(&[(1, 2), (1, 2)]);
        let q = pmf(&[(1, 4), (3, 4)]);
        let got = cross_entropy::<f64>(&p, &q).unwrap();
        // -(1/2)log2(1/4) - (1/2)log2(3/4) = 2 - log2(3)/2
        let want = 2.0 - 3f64.log2() / 2.0;
        match got {
            Value::Ordinary(x) => {
                assert!((x - want).abs() < 1e-12);
                assert!((x - 1.2075).abs() < 1e-3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn kl_divergence_values() {
        let p = pmf(&[(1, 2), (1, 2)]);
        assert_eq!(
            kl_divergence::<BigRational>(&p, &p).unwrap(),
            ExactValue::int(0)
        );
        let q = pmf(&[(1, 4), (3, 4)]);
        let got = kl_divergence::<f64>(&p, &q).unwrap();
        let want = 1.0 - 3f64.log2() / 2.0;
        match got {
            Value::Ordinary(x) => {
                assert!((x - want).abs() < 1e-12);
                assert!((x - 0.2075).abs() < 1e-3);
            }
            other => panic!("unexpected {other:?}"),
        }
        let qz = pmf(&[(0, 1), (1, 1)]);
        assert_eq!(
            kl_divergence::<BigRational>(&p, &qz).unwrap(),
            ExactValue::Bottom
        );
    }

    #[test]
    fn js_divergence_values() {
        let p = pmf(&[(1, 1), (0, 1)]);
        let q = pmf(&[(0, 1), (1, 1)]);
        assert_eq!(
            js_divergence::<BigRational>(&p, &q).unwrap(),
            ExactValue::int(2)
        );
        assert_eq!(
            js_divergence::<BigRational>(&q, &p).unwrap(),
            ExactValue::int(2)
        );
        assert_eq!(
            js_divergence::<BigRational>(&p, &p).unwrap(),
            ExactValue::int(0)
        );
    }

    #[test]
    fn sequential_expected_value_properties() {
        let p = pmf(&[(1, 2), (1, 2)]);
        let f = |label: &str| {
            if label == "c1" {
                ExactValue::Bottom
            } else {
                ExactValue::int(3)
            }
        };
        assert_eq!(seq_expected_value(&p, f).unwrap(), ExactValue::Bottom);
        let p2 = pmf(&[(0, 1), (1, 1)]);
        assert_eq!(seq_expected_value(&p2, f).unwrap(), ExactValue::int(3));
        let mean = seq_expected_value(&pmf(&[(1, 2), (1, 2)]), |l| {
            if l == "c1" {
                ExactValue::int(2)
            } else {
                ExactValue::int(4)
            }
        })
        .unwrap();
        assert_eq!(mean, ExactValue::int(3));
    }

    #[test]
    fn label_mismatch_is_an_error() {
        let p = Pmf::new(vec![("a".into(), rat(1, 1))]).unwrap();
        let q = Pmf::new(vec![("b".into(), rat(1, 1))]).unwrap();
        assert!(matches!(
            cross_entropy::<BigRational>(&p, &q),
            Err(MeasureError::LabelMismatch(_, _))
        ));
    }

    #[test]
    fn pmf_validation() {
        assert!(matches!(
            Pmf::new(vec![("a".into(), rat(1, 2))]),
            Err(PmfError::BadSum(_))
        ));
        assert!(matches!(
            Pmf::new(vec![("a".into(), rat(3, 2)), ("a".into(), rat(-1, 2))]),
            Err(PmfError::DuplicateLabel(_))
        ));
        assert!(matches!(
            Pmf::new(vec![("a".into(), rat(3, 2)), ("b".into(), rat(-1, 2))]),
            Err(PmfError::NegativeWeight { .. })
        ));
    }

    #[test]
    fn pmf_tsv_parsing() {
        let text = "# a comment\nheads\t1/2\n\ntails\t0.5\n";
        let p = Pmf::from_tsv(text).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.weight("heads"), Some(&rat(1, 2)));
        assert_eq!(p.weight("tails"), Some(&rat(1, 2)));
        assert!(Pmf::from_tsv("x 1\n").is_err());
    }

    #[test]
    fn builder_shapes() {
        let t = build_entropy_term(2, MeasureVariant::SeqMul).unwrap();
        assert_eq!(
            t,
            Term::neg(Term::add(
                Term::seqmul(
                    Term::fun("alpha", "c1"),
                    Term::log2(Term::fun("alpha", "c1"))
                ),
                Term::seqmul(
                    Term::fun("alpha", "c2"),
                    Term::log2(Term::fun("alpha", "c2"))
                ),
            ))
        );
        assert!(build_entropy_term(2, MeasureVariant::FXy).is_err());
        assert!(build_cross_entropy_term(2, MeasureVariant::CompositeF).is_err());
        // n = 0 is the empty sum.
        assert_eq!(build_kl_term(0), Term::int(0));
    }

    #[test]
    fn entropy_terms_evaluate_to_entropy() {
        let p = pmf(&[(1, 2), (1, 2), (0, 1)]);
        for variant in [
            MeasureVariant::SeqMul,
            MeasureVariant::SeqMulDiv,
            MeasureVariant::CompositeF,
            MeasureVariant::SignChain,
        ] {
            let t = build_entropy_term(3, variant).unwrap();
            let env = measure_environment::<BigRational>(&[("alpha", &p)]);
            let got = eval(&t, &env, Mode::Bottom).unwrap();
            assert_eq!(got, ExactValue::int(1), "variant {variant:?}");
        }
    }

    #[test]
    fn single_point_space_trivialises() {
        let p = pmf(&[(1, 1)]);
        for variant in [
            MeasureVariant::SeqMul,
            MeasureVariant::SeqMulDiv,
            MeasureVariant::CompositeF,
            MeasureVariant::SignChain,
        ] {
            let t = build_entropy_term(1, variant).unwrap();
            let env = measure_environment::<BigRational>(&[("alpha", &p)]);
            assert_eq!(
                eval(&t, &env, Mode::Bottom).unwrap(),
                ExactValue::int(0),
                "variant {variant:?}"
            );
        }
    }

    #[test]
    fn cross_entropy_term_reproduces_bottom_case() {
        let p = pmf(&[(1, 2), (1, 2)]);
        let q = pmf(&[(0, 1), (1, 1)]);
        let t = build_cross_entropy_term(2, MeasureVariant::SeqMul).unwrap();
        let env = measure_environment::<BigRational>(&[("alpha", &p), ("beta", &q)]);
        assert_eq!(eval(&t, &env, Mode::Bottom).unwrap(), ExactValue::Bottom);
        let env = measure_environment::<BigRational>(&[("alpha", &p), ("beta", &p)]);
        assert_eq!(eval(&t, &env, Mode::Bottom).unwrap(), ExactValue::int(1));
    }

    #[test]
    fn f_xy_cross_entropy_derived_value() {
        let p = pmf(&[(1, 4), (1, 4), (1, 4), (1, 4)]);
        let q = pmf(&[(1, 2), (1, 4), (1, 8), (1, 8)]);
        let t = build_cross_entropy_term(4, MeasureVariant::FXy).unwrap();
        let env = measure_environment::<BigRational>(&[("alpha", &p), ("beta", &q)]);
        assert_eq!(
            eval(&t, &env, Mode::Bottom).unwrap(),
            ExactValue::Ordinary(rat(9, 4))
        );
    }

    #[test]
    fn sign_chain_entropy_with_zero_tail() {
        let p = pmf(&[(1, 2), (1, 2), (0, 1)]);
        let t = build_entropy_term(3, MeasureVariant::SignChain).unwrap();
        let env = measure_environment::<BigRational>(&[("alpha", &p)]);
        assert_eq!(eval(&t, &env, Mode::Bottom).unwrap(), ExactValue::int(1));
    }

    #[test]
    fn kl_and_js_terms() {
        let p = pmf(&[(1, 2), (1, 2)]);
        let q = pmf(&[(0, 1), (1, 1)]);
        let kl = build_kl_term(2);
        let env = measure_environment::<BigRational>(&[("alpha", &p), ("beta", &p)]);
        assert_eq!(eval(&kl, &env, Mode::Bottom).unwrap(), ExactValue::int(0));
        let env = measure_environment::<BigRational>(&[("alpha", &p), ("beta", &q)]);
        assert_eq!(eval(&kl, &env, Mode::Bottom).unwrap(), ExactValue::Bottom);

        let js = build_js_term(2);
        let one_hot = pmf(&[(1, 1), (0, 1)]);
        let other = pmf(&[(0, 1), (1, 1)]);
        let env =
            measure_environment::<BigRational>(&[("alpha", &one_hot), ("beta", &other)]);
        assert_eq!(eval(&js, &env, Mode::Bottom).unwrap(), ExactValue::int(2));
    }

    fn quarter_pmfs(n: usize) -> Vec<Pmf> {
        fn rec(parts: usize, left: i64, acc: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
            if parts == 1 {
                acc.push(left);
                out.push(acc.clone());
                acc.pop();
                return;
            }
            for k in 0..=left {
                acc.push(k);
                rec(parts - 1, left - k, acc, out);
                acc.pop();
            }
        }
        let mut raw = Vec::new();
        rec(n, 4, &mut Vec::new(), &mut raw);
        raw.into_iter()
            .map(|ks| {
                Pmf::from_weights(&ks.iter().map(|&k| rat(k, 4)).collect::<Vec<_>>()).unwrap()
            })
            .collect()
    }

    fn close(a: &Value<f64>, b: &Value<f64>) -> bool {
        match (a, b) {
            (Value::Ordinary(x), Value::Ordinary(y)) => (x - y).abs() < 1e-9,
            _ => a == b,
        }
    }

    #[test]
    fn entropy_builders_agree_on_five_point_spaces() {
        for variant in [
            MeasureVariant::SeqMul,
            MeasureVariant::SeqMulDiv,
            MeasureVariant::CompositeF,
            MeasureVariant::SignChain,
        ] {
            let term = build_entropy_term(5, variant).unwrap();
            for p in quarter_pmfs(5) {
                let want = entropy::<f64>(&p).unwrap();
                let env = measure_environment::<f64>(&[("alpha", &p)]);
                let got = eval(&term, &env, Mode::Bottom).unwrap();
                assert!(close(&got, &want), "{variant:?} on {:?}: {got} vs {want}", p.entries());
            }
        }
    }

    #[test]
    fn entropy_is_cross_entropy_with_itself() {
        for n in 1..=4usize {
            for p in quarter_pmfs(n) {
                let h = entropy::<f64>(&p).unwrap();
                let hpp = cross_entropy::<f64>(&p, &p).unwrap();
                assert!(close(&h, &hpp), "{:?}", p.entries());
            }
        }
    }

    #[test]
    fn measures_are_invariant_under_joint_label_permutation() {
        let p = pmf(&[(1, 2), (1, 4), (1, 4)]);
        let q = pmf(&[(0, 1), (1, 4), (3, 4)]);
        let permute = |src: &Pmf, order: &[usize]| {
            Pmf::new(order.iter().map(|&i| src.entries()[i].clone()).collect()).unwrap()
        };
        for order in [[2, 0, 1], [1, 2, 0], [2, 1, 0]] {
            let pp = permute(&p, &order);
            let qp = permute(&q, &order);
            assert!(close(
                &entropy::<f64>(&p).unwrap(),
                &entropy::<f64>(&pp).unwrap()
            ));
            assert!(close(
                &cross_entropy::<f64>(&p, &q).unwrap(),
                &cross_entropy::<f64>(&pp, &qp).unwrap()
            ));
            assert!(close(
                &kl_divergence::<f64>(&p, &q).unwrap(),
                &kl_divergence::<f64>(&pp, &qp).unwrap()
            ));
            assert!(close(
                &js_divergence::<f64>(&p, &q).unwrap(),
                &js_divergence::<f64>(&pp, &qp).unwrap()
            ));
        }
    }

    #[test]
    fn entropy_is_nonnegative_and_ordinary_on_quarter_grid() {
        for a in 0..=4i64 {
            for b in 0..=(4 - a) {
                let c = 4 - a - b;
                let p = pmf(&[(a, 4), (b, 4), (c, 4)]);
                let want = entropy_f64(&[a as f64 / 4.0, b as f64 / 4.0, c as f64 / 4.0]);
                match entropy::<f64>(&p).unwrap() {
                    Value::Ordinary(h) => {
                        assert!(h >= -1e-12, "H={h} for {a},{b},{c}");
                        assert!((h - want).abs() < 1e-12);
                    }
                    other => panic!("peripheral entropy {other:?}"),
                }
            }
        }
    }
}
