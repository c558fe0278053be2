//! Abstract syntax for terms over the extended meadow signature, a
//! pretty-printer whose output reparses to a structurally equal term, and
//! the finitary generalized sum constructor.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use thiserror::Error;

mod parse;

pub use parse::{parse, ParseError};

/// A constant literal: an exact rational or one of the peripherals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Literal {
    Rational(BigRational),
    Bottom,
    PosInf,
    NegInf,
}

/// A term over the signature `0, 1, bot, +, -, *, /, log2, cond, |*|, s`
/// with variables, labelled constants (plain variables by convention) and
/// function-variable applications `alpha(c1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Const(Literal),
    Var(String),
    /// `FunApp(f, c)` applies function variable `f` to constant label `c`.
    FunApp(String, String),
    Add(Box<Term>, Box<Term>),
    Neg(Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Div(Box<Term>, Box<Term>),
    Log2(Box<Term>),
    Cond(Box<Term>, Box<Term>, Box<Term>),
    SeqMul(Box<Term>, Box<Term>),
    Sign(Box<Term>),
}

// Constructor names mirror the node names; they are associated functions,
// not operator impls.
#[allow(clippy::should_implement_trait)]
impl Term {
    pub fn int(i: i64) -> Term {
        Term::Const(Literal::Rational(BigRational::from_integer(BigInt::from(i))))
    }

    pub fn rat(n: i64, d: i64) -> Term {
        Term::Const(Literal::Rational(BigRational::new(
            BigInt::from(n),
            BigInt::from(d),
        )))
    }

    pub fn rational(r: BigRational) -> Term {
        Term::Const(Literal::Rational(r))
    }

    pub fn bot() -> Term {
        Term::Const(Literal::Bottom)
    }

    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn fun(f: impl Into<String>, label: impl Into<String>) -> Term {
        Term::FunApp(f.into(), label.into())
    }

    pub fn add(l: Term, r: Term) -> Term {
        Term::Add(Box::new(l), Box::new(r))
    }

    /// `l - r` is sugar for `l + (-r)`.
    pub fn sub(l: Term, r: Term) -> Term {
        Term::add(l, Term::neg(r))
    }

    pub fn neg(t: Term) -> Term {
        Term::Neg(Box::new(t))
    }

    pub fn mul(l: Term, r: Term) -> Term {
        Term::Mul(Box::new(l), Box::new(r))
    }

    pub fn div(l: Term, r: Term) -> Term {
        Term::Div(Box::new(l), Box::new(r))
    }

    pub fn log2(t: Term) -> Term {
        Term::Log2(Box::new(t))
    }

    pub fn cond(x: Term, y: Term, z: Term) -> Term {
        Term::Cond(Box::new(x), Box::new(y), Box::new(z))
    }

    pub fn seqmul(l: Term, r: Term) -> Term {
        Term::SeqMul(Box::new(l), Box::new(r))
    }

    pub fn sign(t: Term) -> Term {
        Term::Sign(Box::new(t))
    }

    /// `s(t) * s(t)`, the "ordinary and nonzero" test.
    pub fn sign_squared(t: Term) -> Term {
        Term::mul(Term::sign(t.clone()), Term::sign(t))
    }

    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Const(_) | Term::Var(_) | Term::FunApp(_, _) => vec![],
            Term::Neg(t) | Term::Log2(t) | Term::Sign(t) => vec![t],
            Term::Add(l, r) | Term::Mul(l, r) | Term::Div(l, r) | Term::SeqMul(l, r) => {
                vec![l, r]
            }
            Term::Cond(x, y, z) => vec![x, y, z],
        }
    }

    /// Free variables in first-occurrence order (labelled constants used as
    /// variables included; function variables excluded).
    pub fn free_vars(&self) -> Vec<String> {
        fn walk(t: &Term, seen: &mut Vec<String>) {
            if let Term::Var(name) = t {
                if !seen.iter().any(|v| v == name) {
                    seen.push(name.clone());
                }
            }
            for c in t.children() {
                walk(c, seen);
            }
        }
        let mut vars = Vec::new();
        walk(self, &mut vars);
        vars
    }

    pub fn count_divisions(&self) -> usize {
        let own = usize::from(matches!(self, Term::Div(_, _)));
        own + self
            .children()
            .iter()
            .map(|c| c.count_divisions())
            .sum::<usize>()
    }

    pub fn contains_bottom_literal(&self) -> bool {
        matches!(self, Term::Const(Literal::Bottom))
            || self.children().iter().any(|c| c.contains_bottom_literal())
    }

    pub fn contains_log2(&self) -> bool {
        matches!(self, Term::Log2(_)) || self.children().iter().any(|c| c.contains_log2())
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Replaces every occurrence of the label `from` — as a plain variable
    /// and in the label position of function applications — by `to`.
    pub fn substitute_label(&self, from: &str, to: &str) -> Term {
        match self {
            Term::Var(name) if name == from => Term::Var(to.to_string()),
            Term::FunApp(f, label) if label == from => Term::FunApp(f.clone(), to.to_string()),
            Term::Const(_) | Term::Var(_) | Term::FunApp(_, _) => self.clone(),
            Term::Add(l, r) => Term::add(
                l.substitute_label(from, to),
                r.substitute_label(from, to),
            ),
            Term::Neg(t) => Term::neg(t.substitute_label(from, to)),
            Term::Mul(l, r) => Term::mul(
                l.substitute_label(from, to),
                r.substitute_label(from, to),
            ),
            Term::Div(l, r) => Term::div(
                l.substitute_label(from, to),
                r.substitute_label(from, to),
            ),
            Term::Log2(t) => Term::log2(t.substitute_label(from, to)),
            Term::Cond(x, y, z) => Term::cond(
                x.substitute_label(from, to),
                y.substitute_label(from, to),
                z.substitute_label(from, to),
            ),
            Term::SeqMul(l, r) => Term::seqmul(
                l.substitute_label(from, to),
                r.substitute_label(from, to),
            ),
            Term::Sign(t) => Term::sign(t.substitute_label(from, to)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SumError {
    #[error("generalized sum needs at least one label")]
    Empty,
    #[error("generalized sum labels must be distinct: `{0}` repeats")]
    DuplicateLabel(String),
}

/// Expands `sum over labels of body[label/placeholder]` into a left-nested
/// chain of additions, one summand per label in enumeration order.
pub fn generalized_sum(body: &Term, placeholder: &str, labels: &[&str]) -> Result<Term, SumError> {
    if labels.is_empty() {
        return Err(SumError::Empty);
    }
    let mut seen = BTreeSet::new();
    for l in labels {
        if !seen.insert(*l) {
            return Err(SumError::DuplicateLabel(l.to_string()));
        }
    }
    let mut sum = body.substitute_label(placeholder, labels[0]);
    for label in &labels[1..] {
        sum = Term::add(sum, body.substitute_label(placeholder, label));
    }
    Ok(sum)
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

const PREC_SUM: u8 = 10;
const PREC_PROD: u8 = 20;
const PREC_UNARY: u8 = 30;
const PREC_ATOM: u8 = 40;

fn precedence(t: &Term) -> u8 {
    match t {
        Term::Add(_, _) => PREC_SUM,
        Term::Mul(_, _) | Term::Div(_, _) | Term::SeqMul(_, _) => PREC_PROD,
        Term::Neg(_) => PREC_UNARY,
        // Negative literals print with a leading minus and bind like a
        // unary minus; so does `-inf`.
        Term::Const(Literal::Rational(r)) if r.is_negative() => PREC_UNARY,
        Term::Const(Literal::NegInf) => PREC_UNARY,
        _ => PREC_ATOM,
    }
}

fn render_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// True when the text begins with a positive integer token, which could
/// fuse with a preceding integer and `/` into a fraction literal.
fn starts_with_positive_integer(s: &str) -> bool {
    let digits: String = s.chars().take_while(|c| c.is_ascii_digit()).collect();
    !digits.is_empty() && digits.chars().any(|c| c != '0')
}

fn write_term(t: &Term, min_prec: u8, out: &mut String) {
    if precedence(t) < min_prec {
        out.push('(');
        write_term(t, 0, out);
        out.push(')');
        return;
    }
    match t {
        Term::Const(Literal::Rational(r)) => out.push_str(&render_rational(r)),
        Term::Const(Literal::Bottom) => out.push_str("bot"),
        Term::Const(Literal::PosInf) => out.push_str("+inf"),
        Term::Const(Literal::NegInf) => out.push_str("-inf"),
        Term::Var(name) => out.push_str(name),
        Term::FunApp(f, label) => {
            out.push_str(f);
            out.push('(');
            out.push_str(label);
            out.push(')');
        }
        Term::Add(l, r) => {
            write_term(l, PREC_SUM, out);
            if let Term::Neg(inner) = r.as_ref() {
                out.push_str(" - ");
                write_term(inner, PREC_PROD, out);
            } else {
                out.push_str(" + ");
                write_term(r, PREC_SUM + 1, out);
            }
        }
        Term::Neg(inner) => {
            out.push('-');
            // A bare rational after unary minus would parse as a negative
            // literal; `+inf` would glue into `-+inf`.
            if matches!(
                inner.as_ref(),
                Term::Const(Literal::Rational(_)) | Term::Const(Literal::PosInf)
            ) {
                out.push('(');
                write_term(inner, 0, out);
                out.push(')');
            } else {
                write_term(inner, PREC_UNARY, out);
            }
        }
        Term::Mul(l, r) => {
            write_term(l, PREC_PROD, out);
            out.push('*');
            write_term(r, PREC_PROD + 1, out);
        }
        Term::SeqMul(l, r) => {
            write_term(l, PREC_PROD, out);
            out.push_str(" |*| ");
            write_term(r, PREC_PROD + 1, out);
        }
        Term::Div(l, r) => {
            write_term(l, PREC_PROD, out);
            let mut denom = String::new();
            write_term(r, PREC_PROD + 1, &mut denom);
            // `1/2` is a fraction literal; keep a division between integer
            // tokens from lexing as one by spacing the slash.
            let ends_digit = out.chars().last().is_some_and(|c| c.is_ascii_digit());
            if ends_digit && starts_with_positive_integer(&denom) {
                out.push_str(" / ");
            } else {
                out.push('/');
            }
            out.push_str(&denom);
        }
        Term::Log2(inner) => {
            out.push_str("log2(");
            write_term(inner, 0, out);
            out.push(')');
        }
        Term::Sign(inner) => {
            out.push_str("s(");
            write_term(inner, 0, out);
            out.push(')');
        }
        Term::Cond(x, y, z) => {
            out.push_str("cond(");
            write_term(x, 0, out);
            out.push_str("; ");
            write_term(y, 0, out);
            out.push_str("; ");
            write_term(z, 0, out);
            out.push(')');
        }
    }
}

/// Renders a term with minimal parentheses; the output reparses to a
/// structurally equal term.
pub fn print(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, 0, &mut out);
    out
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print(self))
    }
}

// ---------------------------------------------------------------------------
// Signatures
// ---------------------------------------------------------------------------

/// The operator constructors of the full signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum OpKind {
    Add,
    Neg,
    Mul,
    Div,
    Log2,
    Cond,
    SeqMul,
    Sign,
}

impl OpKind {
    pub const ALL: [OpKind; 8] = [
        OpKind::Add,
        OpKind::Neg,
        OpKind::Mul,
        OpKind::Div,
        OpKind::Log2,
        OpKind::Cond,
        OpKind::SeqMul,
        OpKind::Sign,
    ];

    pub fn of(t: &Term) -> Option<OpKind> {
        match t {
            Term::Add(_, _) => Some(OpKind::Add),
            Term::Neg(_) => Some(OpKind::Neg),
            Term::Mul(_, _) => Some(OpKind::Mul),
            Term::Div(_, _) => Some(OpKind::Div),
            Term::Log2(_) => Some(OpKind::Log2),
            Term::Cond(_, _, _) => Some(OpKind::Cond),
            Term::SeqMul(_, _) => Some(OpKind::SeqMul),
            Term::Sign(_) => Some(OpKind::Sign),
            _ => None,
        }
    }
}

/// A sub-signature: which operators, variables, function variables and
/// sample-point labels a term may mention.
#[derive(Debug, Clone)]
pub struct Signature {
    pub ops: BTreeSet<OpKind>,
    pub vars: Vec<String>,
    pub fun_vars: Vec<String>,
    /// Labels are `c1 .. cn`.
    pub n_labels: usize,
}

impl Signature {
    pub fn new(ops: impl IntoIterator<Item = OpKind>, vars: &[&str]) -> Signature {
        Signature {
            ops: ops.into_iter().collect(),
            vars: vars.iter().map(|v| v.to_string()).collect(),
            fun_vars: Vec::new(),
            n_labels: 0,
        }
    }

    /// The full bottom-mode signature over variables `x`, `y`, `z`.
    pub fn full_bottom() -> Signature {
        Signature::new(OpKind::ALL, &["x", "y", "z"])
    }

    pub fn with_fun_vars(mut self, fun_vars: &[&str], n_labels: usize) -> Signature {
        self.fun_vars = fun_vars.iter().map(|v| v.to_string()).collect();
        self.n_labels = n_labels;
        self
    }

    fn label_ok(&self, label: &str) -> bool {
        (1..=self.n_labels).any(|i| label == format!("c{i}"))
    }

    /// Whether every operator and symbol of the term is in this signature.
    pub fn admits(&self, t: &Term) -> bool {
        let here = match t {
            Term::Const(_) => true,
            Term::Var(name) => {
                self.vars.iter().any(|v| v == name) || self.label_ok(name)
            }
            Term::FunApp(f, label) => {
                self.fun_vars.iter().any(|v| v == f) && self.label_ok(label)
            }
            op => OpKind::of(op).is_some_and(|k| self.ops.contains(&k)),
        };
        here && t.children().iter().all(|c| self.admits(c))
    }
}
