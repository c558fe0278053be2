//! Term evaluation in an environment, under a mode and a number backend.

use std::collections::HashMap;

use thiserror::Error;

use crate::term::{Literal, Term};
use crate::value::{Carrier, Mode, Value};

/// Bindings for the free symbols of a term: plain variables (including
/// labelled constants used as values) and function variables applied to
/// constant labels.
#[derive(Debug, Clone, Default)]
pub struct Environment<N> {
    vars: HashMap<String, Value<N>>,
    funs: HashMap<String, HashMap<String, Value<N>>>,
    labels: Vec<String>,
}

impl<N: Carrier> Environment<N> {
    pub fn new() -> Environment<N> {
        Environment {
            vars: HashMap::new(),
            funs: HashMap::new(),
            labels: Vec::new(),
        }
    }

    pub fn bind_var(mut self, name: impl Into<String>, v: Value<N>) -> Self {
        self.vars.insert(name.into(), v);
        self
    }

    pub fn bind_fun(
        mut self,
        fun: impl Into<String>,
        label: impl Into<String>,
        v: Value<N>,
    ) -> Self {
        self.funs
            .entry(fun.into())
            .or_default()
            .insert(label.into(), v);
        self
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        self.labels = labels;
        self
    }

    pub fn var(&self, name: &str) -> Option<&Value<N>> {
        self.vars.get(name)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("unbound function variable `{0}`")]
    UnboundFunction(String),
    #[error("function variable `{fun}` has no binding for label `{label}`")]
    UnboundLabel { fun: String, label: String },
    #[error("the literal `bot` has no meaning under Suppes-Ono mode")]
    BottomLiteralInSuppesMode,
    #[error("the literal `{literal}` is not part of mode {mode}")]
    IllegalLiteral { literal: String, mode: Mode },
    #[error(transparent)]
    Inexact(#[from] crate::value::Inexact),
}

/// Evaluates a term by structural recursion; the carrier is chosen by the
/// environment's number type.
pub fn eval<N: Carrier>(
    t: &Term,
    env: &Environment<N>,
    mode: Mode,
) -> Result<Value<N>, EvalError> {
    Ok(match t {
        Term::Const(Literal::Rational(r)) => Value::rational(r),
        Term::Const(Literal::Bottom) => {
            if mode == Mode::SuppesOno {
                return Err(EvalError::BottomLiteralInSuppesMode);
            }
            Value::Bottom
        }
        Term::Const(lit @ (Literal::PosInf | Literal::NegInf)) => {
            if mode != Mode::Signed {
                return Err(EvalError::IllegalLiteral {
                    literal: if matches!(lit, Literal::PosInf) {
                        "+inf".into()
                    } else {
                        "-inf".into()
                    },
                    mode,
                });
            }
            if matches!(lit, Literal::PosInf) {
                Value::PosInf
            } else {
                Value::NegInf
            }
        }
        Term::Var(name) => env
            .vars
            .get(name)
            .cloned()
            .ok_or_else(|| EvalError::UnboundVariable(name.clone()))?,
        Term::FunApp(f, label) => {
            let table = env
                .funs
                .get(f)
                .ok_or_else(|| EvalError::UnboundFunction(f.clone()))?;
            table
                .get(label)
                .cloned()
                .ok_or_else(|| EvalError::UnboundLabel {
                    fun: f.clone(),
                    label: label.clone(),
                })?
        }
        Term::Add(l, r) => mode.add(&eval(l, env, mode)?, &eval(r, env, mode)?),
        Term::Neg(x) => mode.neg(&eval(x, env, mode)?),
        Term::Mul(l, r) => mode.mul(&eval(l, env, mode)?, &eval(r, env, mode)?),
        Term::Div(l, r) => mode.div(&eval(l, env, mode)?, &eval(r, env, mode)?),
        Term::Log2(x) => mode.log2(&eval(x, env, mode)?)?,
        Term::Cond(x, y, z) => mode.cond(
            &eval(x, env, mode)?,
            &eval(y, env, mode)?,
            &eval(z, env, mode)?,
        ),
        Term::SeqMul(l, r) => mode.seqmul(&eval(l, env, mode)?, &eval(r, env, mode)?),
        Term::Sign(x) => mode.sign(&eval(x, env, mode)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse;
    use crate::value::{ApproxValue, ExactValue};

    #[test]
    fn zero_weight_summand_is_zero() {
        let t = parse("x |*| log2(x)").unwrap();
        let env = Environment::<f64>::new().bind_var("x", ApproxValue::int(0));
        assert_eq!(eval(&t, &env, Mode::Bottom).unwrap(), ApproxValue::int(0));
    }

    #[test]
    fn bottom_absorbs_through_sums() {
        let t = parse("1/0 + 5").unwrap();
        let env = Environment::new();
        assert_eq!(eval(&t, &env, Mode::Bottom).unwrap(), ExactValue::Bottom);
    }

    #[test]
    fn sign_square_of_negative() {
        let t = parse("s(x)*s(x)").unwrap();
        let env = Environment::<num_rational::BigRational>::new()
            .bind_var("x", ExactValue::int(-7));
        assert_eq!(eval(&t, &env, Mode::Bottom).unwrap(), ExactValue::int(1));
    }

    #[test]
    fn unbound_symbols_error() {
        let env = Environment::<num_rational::BigRational>::new();
        assert_eq!(
            eval(&parse("x").unwrap(), &env, Mode::Bottom),
            Err(EvalError::UnboundVariable("x".into()))
        );
        assert_eq!(
            eval(&parse("alpha(c1)").unwrap(), &env, Mode::Bottom),
            Err(EvalError::UnboundFunction("alpha".into()))
        );
        let env = env.bind_fun("alpha", "c2", ExactValue::int(1));
        assert_eq!(
            eval(&parse("alpha(c1)").unwrap(), &env, Mode::Bottom),
            Err(EvalError::UnboundLabel {
                fun: "alpha".into(),
                label: "c1".into()
            })
        );
    }

    #[test]
    fn literal_legality_per_mode() {
        let env = Environment::<num_rational::BigRational>::new();
        assert_eq!(
            eval(&parse("bot").unwrap(), &env, Mode::SuppesOno),
            Err(EvalError::BottomLiteralInSuppesMode)
        );
        assert!(matches!(
            eval(&parse("+inf").unwrap(), &env, Mode::Bottom),
            Err(EvalError::IllegalLiteral { .. })
        ));
        assert_eq!(
            eval(&parse("-inf").unwrap(), &env, Mode::Signed).unwrap(),
            ExactValue::NegInf
        );
    }

    #[test]
    fn inexact_log2_propagates_on_exact_carrier() {
        let env = Environment::<num_rational::BigRational>::new();
        assert!(matches!(
            eval(&parse("log2(3)").unwrap(), &env, Mode::Bottom),
            Err(EvalError::Inexact(_))
        ));
    }

    #[test]
    fn suppes_totalisations() {
        let env = Environment::<num_rational::BigRational>::new();
        assert_eq!(
            eval(&parse("1/0").unwrap(), &env, Mode::SuppesOno).unwrap(),
            ExactValue::int(0)
        );
        assert_eq!(
            eval(&parse("log2(0)").unwrap(), &env, Mode::SuppesOno).unwrap(),
            ExactValue::int(0)
        );
    }
}
