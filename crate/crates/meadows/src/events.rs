//! Finite event spaces with meadow-valued conditional probability.
//!
//! Events are subsets of the atomic outcomes, so the Boolean algebra is
//! the powerset and every identity can be checked exhaustively. All
//! probabilities are exact rationals; conditional probability divides in
//! the bottom-mode meadow and is `bot` exactly when the condition has
//! probability zero.

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::measures::Pmf;
use crate::value::{ExactValue, Mode, Value};

/// A set of outcomes, as a bitset over the space's outcome order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Event(u64);

impl Event {
    pub const EMPTY: Event = Event(0);

    pub fn intersect(self, other: Event) -> Event {
        Event(self.0 & other.0)
    }

    pub fn union(self, other: Event) -> Event {
        Event(self.0 | other.0)
    }

    fn contains(self, index: usize) -> bool {
        self.0 & (1 << index) != 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EventError {
    #[error("`{0}` is not an outcome of this space")]
    ForeignLabel(String),
    #[error("event spaces support at most 64 outcomes, got {0}")]
    TooManyOutcomes(usize),
}

/// A finite outcome set carrying a pmf.
#[derive(Debug, Clone)]
pub struct EventSpace {
    pmf: Pmf,
}

impl EventSpace {
    pub fn new(pmf: Pmf) -> Result<EventSpace, EventError> {
        if pmf.len() > 64 {
            return Err(EventError::TooManyOutcomes(pmf.len()));
        }
        Ok(EventSpace { pmf })
    }

    pub fn outcomes(&self) -> impl Iterator<Item = &str> {
        self.pmf.labels()
    }

    pub fn len(&self) -> usize {
        self.pmf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pmf.is_empty()
    }

    pub fn event(&self, labels: &[&str]) -> Result<Event, EventError> {
        let mut bits = 0u64;
        for label in labels {
            let idx = self
                .pmf
                .labels()
                .position(|l| l == *label)
                .ok_or_else(|| EventError::ForeignLabel(label.to_string()))?;
            bits |= 1 << idx;
        }
        Ok(Event(bits))
    }

    pub fn full_event(&self) -> Event {
        Event((1u64 << self.len()) - 1)
    }

    pub fn complement(&self, a: Event) -> Event {
        Event(!a.0 & self.full_event().0)
    }

    /// All `2^n` events of the powerset Boolean algebra.
    pub fn all_events(&self) -> impl Iterator<Item = Event> {
        (0..(1u64 << self.len())).map(Event)
    }

    pub fn event_labels(&self, a: Event) -> Vec<String> {
        self.pmf
            .labels()
            .enumerate()
            .filter(|(i, _)| a.contains(*i))
            .map(|(_, l)| l.to_string())
            .collect()
    }

    /// `P(A)`, an exact rational.
    pub fn prob(&self, a: Event) -> BigRational {
        self.pmf
            .weights()
            .enumerate()
            .filter(|(i, _)| a.contains(*i))
            .map(|(_, w)| w.clone())
            .sum()
    }

    /// `P(A|B) = P(A and B) / P(B)` with meadow division: `bot` iff
    /// `P(B) = 0`.
    pub fn cond_prob(&self, a: Event, b: Event) -> ExactValue {
        let joint = Value::Ordinary(self.prob(a.intersect(b)));
        let pb = Value::Ordinary(self.prob(b));
        Mode::Bottom.div(&joint, &pb)
    }

    /// The right-hand side of the Bayes-Price identity,
    /// `P(B|A) * P(A) / P(B)`, with meadow operations.
    pub fn bayes_rhs(&self, a: Event, b: Event) -> ExactValue {
        let pa = Value::Ordinary(self.prob(a));
        let pb = Value::Ordinary(self.prob(b));
        let num = Mode::Bottom.mul(&self.cond_prob(b, a), &pa);
        Mode::Bottom.div(&num, &pb)
    }

    /// Checks `P(A) != 0 or P(B) = 0  implies  P(A|B) = bayes_rhs(A, B)`
    /// over every ordered pair of events, and reports what happens where
    /// the guard fails.
    pub fn bayes_check(&self) -> BayesReport {
        let mut report = BayesReport::default();
        for a in self.all_events() {
            for b in self.all_events() {
                let lhs = self.cond_prob(a, b);
                let rhs = self.bayes_rhs(a, b);
                let guard = !self.prob(a).is_zero() || self.prob(b).is_zero();
                report.pairs += 1;
                let diff = (lhs != rhs).then(|| PairDiff {
                    a: self.event_labels(a),
                    b: self.event_labels(b),
                    lhs: lhs.render(),
                    rhs: rhs.render(),
                });
                match (guard, diff) {
                    (true, None) => report.guarded_equal += 1,
                    (true, Some(d)) => report.guarded_failures.push(d),
                    (false, None) => report.unguarded_equal += 1,
                    (false, Some(d)) => report.unguarded_diffs.push(d),
                }
            }
        }
        report
    }
}

/// One event pair where the two sides of the identity differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairDiff {
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of [`EventSpace::bayes_check`]. The identity holds iff
/// `guarded_failures` is empty; `unguarded_diffs` lists the pairs the
/// guard exists for.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BayesReport {
    pub pairs: usize,
    pub guarded_equal: usize,
    pub unguarded_equal: usize,
    pub guarded_failures: Vec<PairDiff>,
    pub unguarded_diffs: Vec<PairDiff>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn space(weights: &[(i64, i64)]) -> EventSpace {
        let pmf =
            Pmf::from_weights(&weights.iter().map(|&(n, d)| rat(n, d)).collect::<Vec<_>>())
                .unwrap();
        EventSpace::new(pmf).unwrap()
    }

    #[test]
    fn probabilities_are_exact() {
        let s = space(&[(1, 4), (3, 4)]);
        assert_eq!(s.prob(s.full_event()), rat(1, 1));
        assert_eq!(s.prob(Event::EMPTY), rat(0, 1));
        assert_eq!(s.prob(s.event(&["c1"]).unwrap()), rat(1, 4));
    }

    #[test]
    fn foreign_labels_are_rejected() {
        let s = space(&[(1, 2), (1, 2)]);
        assert_eq!(
            s.event(&["zzz"]),
            Err(EventError::ForeignLabel("zzz".into()))
        );
    }

    #[test]
    fn conditional_probability_cases() {
        let s = space(&[(0, 1), (1, 1)]);
        let a = s.event(&["c1"]).unwrap();
        let b = s.event(&["c2"]).unwrap();
        // P(B) = 0 makes the conditional bot.
        assert_eq!(s.cond_prob(b, a), ExactValue::Bottom);
        // A = B with P(B) > 0 gives 1.
        assert_eq!(s.cond_prob(b, b), ExactValue::int(1));
        // P(A and B) = 0 with P(B) = 1 gives 0.
        assert_eq!(s.cond_prob(a, b), ExactValue::int(0));
    }

    #[test]
    fn bayes_rhs_counterexample() {
        let s = space(&[(0, 1), (1, 1)]);
        let a = s.event(&["c1"]).unwrap();
        let b = s.event(&["c2"]).unwrap();
        // P(A) = 0, P(B) = 1: the left side is 0 but the right side is
        // (0/0)*0/1 = bot.
        assert_eq!(s.cond_prob(a, b), ExactValue::int(0));
        assert_eq!(s.bayes_rhs(a, b), ExactValue::Bottom);
    }

    #[test]
    fn bayes_rhs_agrees_when_both_probabilities_positive() {
        let s = space(&[(1, 4), (1, 4), (1, 2)]);
        for a in s.all_events() {
            for b in s.all_events() {
                if !s.prob(a).is_zero() && !s.prob(b).is_zero() {
                    assert_eq!(s.cond_prob(a, b), s.bayes_rhs(a, b));
                }
            }
        }
        let e = s.event(&["c1", "c2"]).unwrap();
        assert_eq!(s.bayes_rhs(e, e), ExactValue::int(1));
    }

    #[test]
    fn zero_condition_pairs_agree_as_bottom() {
        let s = space(&[(0, 1), (1, 1)]);
        let zero = s.event(&["c1"]).unwrap();
        for a in s.all_events() {
            assert_eq!(s.cond_prob(a, zero), ExactValue::Bottom);
            assert_eq!(s.bayes_rhs(a, zero), ExactValue::Bottom);
        }
    }

    #[test]
    fn bayes_check_finds_exactly_the_guard_failures() {
        let s = space(&[(1, 2), (1, 2)]);
        let report = s.bayes_check();
        assert_eq!(report.pairs, 16);
        assert!(report.guarded_failures.is_empty());
        // Guard-failing unequal pairs need P(A) = 0 and P(B) > 0.
        for d in &report.unguarded_diffs {
            assert_eq!(d.lhs, "0");
            assert_eq!(d.rhs, "bot");
        }
        assert!(!report.unguarded_diffs.is_empty());

        let s = space(&[(0, 1), (1, 1)]);
        let report = s.bayes_check();
        assert!(report.guarded_failures.is_empty());
        let found = report
            .unguarded_diffs
            .iter()
            .any(|d| d.a == vec!["c1".to_string()] && d.b == vec!["c2".to_string()]);
        assert!(found, "the textbook counterexample pair is reported");
    }

    #[test]
    fn guarded_identity_holds_on_four_outcome_spaces() {
        // Compositions of 4 quarters into 4 parts.
        for a in 0..=4i64 {
            for b in 0..=(4 - a) {
                for c in 0..=(4 - a - b) {
                    let d = 4 - a - b - c;
                    let s = space(&[(a, 4), (b, 4), (c, 4), (d, 4)]);
                    let report = s.bayes_check();
                    assert_eq!(report.pairs, 256);
                    assert!(
                        report.guarded_failures.is_empty(),
                        "space ({a},{b},{c},{d})/4: {:?}",
                        report.guarded_failures
                    );
                }
            }
        }
    }

    #[test]
    fn boolean_structure() {
        let s = space(&[(1, 4), (1, 4), (1, 2)]);
        let a = s.event(&["c1", "c2"]).unwrap();
        let b = s.event(&["c2", "c3"]).unwrap();
        assert_eq!(a.intersect(b), s.event(&["c2"]).unwrap());
        assert_eq!(a.union(b), s.full_event());
        assert_eq!(s.complement(a), s.event(&["c3"]).unwrap());
        assert_eq!(s.all_events().count(), 8);
    }
}
