//! Fracterm flattening: rewriting any bottom-mode term into a single
//! fraction `p/q` with division-free, `bot`-free numerator and denominator.
//!
//! Children are flattened first. A subterm in which no division and no
//! `bot` literal occurs is its own numerator over denominator `1`; the
//! literal `bot` is the fracterm `1/0`; everything else is combined by the
//! rules in [`rewrite_rules`], each of which is a semantic identity of the
//! bottom-mode algebra and is validated as such by the oracle suites
//! before the flattening soundness sweep runs.

use std::fmt;

use thiserror::Error;

use crate::term::{Literal, Term};

/// A flat fracterm: the pair `(numerator, denominator)` denoting their
/// quotient. Neither part contains a division or a `bot` literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatFracterm {
    pub numerator: Term,
    pub denominator: Term,
}

impl FlatFracterm {
    fn new(numerator: Term, denominator: Term) -> FlatFracterm {
        FlatFracterm {
            numerator,
            denominator,
        }
    }

    /// The denoted term `numerator / denominator`.
    pub fn as_term(&self) -> Term {
        Term::div(self.numerator.clone(), self.denominator.clone())
    }

    fn is_trivial(&self) -> bool {
        self.denominator == Term::int(1)
    }
}

impl fmt::Display for FlatFracterm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.numerator, self.denominator)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlattenError {
    #[error("cannot flatten `{0}`: infinities are not bottom-mode syntax")]
    IllegalLiteral(String),
}

fn combine_add(a: &FlatFracterm, b: &FlatFracterm) -> FlatFracterm {
    FlatFracterm::new(
        Term::add(
            Term::mul(a.numerator.clone(), b.denominator.clone()),
            Term::mul(b.numerator.clone(), a.denominator.clone()),
        ),
        Term::mul(a.denominator.clone(), b.denominator.clone()),
    )
}

fn combine_neg(a: &FlatFracterm) -> FlatFracterm {
    FlatFracterm::new(Term::neg(a.numerator.clone()), a.denominator.clone())
}

fn combine_mul(a: &FlatFracterm, b: &FlatFracterm) -> FlatFracterm {
    FlatFracterm::new(
        Term::mul(a.numerator.clone(), b.numerator.clone()),
        Term::mul(a.denominator.clone(), b.denominator.clone()),
    )
}

/// `(p/q) / (r/s) = (p*s*s) / (q*r*s)`. The doubled `s` keeps the cases
/// `s = 0` and `s = bot` correct: `(p*s)/(q*r)` would wrongly yield an
/// ordinary value for `(1/1)/(1/0)`.
fn combine_div(a: &FlatFracterm, b: &FlatFracterm) -> FlatFracterm {
    if a.is_trivial() && b.is_trivial() {
        // Both operands are division-free, so the quotient is already flat.
        return FlatFracterm::new(a.numerator.clone(), b.numerator.clone());
    }
    FlatFracterm::new(
        Term::mul(
            Term::mul(a.numerator.clone(), b.denominator.clone()),
            b.denominator.clone(),
        ),
        Term::mul(
            Term::mul(a.denominator.clone(), b.numerator.clone()),
            b.denominator.clone(),
        ),
    )
}

/// `log2(x/y) = (log2 x^2 - log2 y^2) / (2 + 0 * log2(x*y))`; the guard
/// summand forces `bot` whenever `x` and `y` have opposite signs.
fn log2_parts(x: &Term, y: &Term) -> (Term, Term) {
    let n = Term::sub(
        Term::log2(Term::mul(x.clone(), x.clone())),
        Term::log2(Term::mul(y.clone(), y.clone())),
    );
    let d = Term::add(
        Term::int(2),
        Term::mul(Term::int(0), Term::log2(Term::mul(x.clone(), y.clone()))),
    );
    (n, d)
}

fn combine_log2(a: &FlatFracterm) -> FlatFracterm {
    let (n, d) = log2_parts(&a.numerator, &a.denominator);
    FlatFracterm::new(n, d)
}

fn combine_sign(a: &FlatFracterm) -> FlatFracterm {
    FlatFracterm::new(
        Term::sign(a.numerator.clone()),
        Term::sign(a.denominator.clone()),
    )
}

/// Numerator and denominator of `x |*| (y/yd)`:
/// `(x^3 |*| (y * (yd + 1 - s^2(x)))) / ((x |*| yd)^2 + 1 - s^2(x))`.
fn seqmul_right_parts(x: &Term, y: &Term, yd: &Term) -> (Term, Term) {
    let s2 = Term::sign_squared(x.clone());
    let cube = Term::mul(Term::mul(x.clone(), x.clone()), x.clone());
    let scaled = Term::mul(
        y.clone(),
        Term::sub(Term::add(yd.clone(), Term::int(1)), s2.clone()),
    );
    let n = Term::seqmul(cube, scaled);
    let x_yd = Term::seqmul(x.clone(), yd.clone());
    let d = Term::sub(
        Term::add(Term::mul(x_yd.clone(), x_yd), Term::int(1)),
        s2,
    );
    (n, d)
}

/// `(a/ad) |*| (b/bd)`: the left rule `(x/x') |*| y = (x |*| y)/x'`
/// composed with the right rule above.
fn combine_seqmul(a: &FlatFracterm, b: &FlatFracterm) -> FlatFracterm {
    let (n, d) = seqmul_right_parts(&a.numerator, &b.numerator, &b.denominator);
    FlatFracterm::new(n, Term::mul(d, a.denominator.clone()))
}

/// Numerator and denominator of `(x/xd) <| (y/yd) |> (z/zd)`, composed
/// from the three single-position conditional identities.
fn cond_parts(x: &Term, xd: &Term, y: &Term, yd: &Term, z: &Term, zd: &Term) -> (Term, Term) {
    let n = Term::mul(Term::cond(x.clone(), y.clone(), z.clone()), yd.clone());
    let d = Term::mul(
        Term::mul(
            Term::cond(Term::int(1), y.clone(), zd.clone()),
            Term::cond(xd.clone(), y.clone(), Term::int(1)),
        ),
        yd.clone(),
    );
    (n, d)
}

fn combine_cond(x: &FlatFracterm, y: &FlatFracterm, z: &FlatFracterm) -> FlatFracterm {
    let (n, d) = cond_parts(
        &x.numerator,
        &x.denominator,
        &y.numerator,
        &y.denominator,
        &z.numerator,
        &z.denominator,
    );
    FlatFracterm::new(n, d)
}

/// Flattens a bottom-mode term into a flat fracterm denoting the same
/// value in every environment.
pub fn flatten(t: &Term) -> Result<FlatFracterm, FlattenError> {
    Ok(match t {
        Term::Const(Literal::Bottom) => FlatFracterm::new(Term::int(1), Term::int(0)),
        Term::Const(Literal::PosInf) => {
            return Err(FlattenError::IllegalLiteral("+inf".into()))
        }
        Term::Const(Literal::NegInf) => {
            return Err(FlattenError::IllegalLiteral("-inf".into()))
        }
        Term::Const(_) | Term::Var(_) | Term::FunApp(_, _) => {
            FlatFracterm::new(t.clone(), Term::int(1))
        }
        Term::Add(l, r) => {
            let (a, b) = (flatten(l)?, flatten(r)?);
            if a.is_trivial() && b.is_trivial() {
                FlatFracterm::new(Term::add(a.numerator, b.numerator), Term::int(1))
            } else {
                combine_add(&a, &b)
            }
        }
        Term::Neg(x) => {
            let a = flatten(x)?;
            combine_neg(&a)
        }
        Term::Mul(l, r) => {
            let (a, b) = (flatten(l)?, flatten(r)?);
            if a.is_trivial() && b.is_trivial() {
                FlatFracterm::new(Term::mul(a.numerator, b.numerator), Term::int(1))
            } else {
                combine_mul(&a, &b)
            }
        }
        Term::Div(l, r) => combine_div(&flatten(l)?, &flatten(r)?),
        Term::Log2(x) => {
            let a = flatten(x)?;
            if a.is_trivial() {
                FlatFracterm::new(Term::log2(a.numerator), Term::int(1))
            } else {
                combine_log2(&a)
            }
        }
        Term::Sign(x) => {
            let a = flatten(x)?;
            if a.is_trivial() {
                FlatFracterm::new(Term::sign(a.numerator), Term::int(1))
            } else {
                combine_sign(&a)
            }
        }
        Term::SeqMul(l, r) => {
            let (a, b) = (flatten(l)?, flatten(r)?);
            if a.is_trivial() && b.is_trivial() {
                FlatFracterm::new(Term::seqmul(a.numerator, b.numerator), Term::int(1))
            } else {
                combine_seqmul(&a, &b)
            }
        }
        Term::Cond(x, y, z) => {
            let (a, b, c) = (flatten(x)?, flatten(y)?, flatten(z)?);
            if a.is_trivial() && b.is_trivial() && c.is_trivial() {
                FlatFracterm::new(
                    Term::cond(a.numerator, b.numerator, c.numerator),
                    Term::int(1),
                )
            } else {
                combine_cond(&a, &b, &c)
            }
        }
    })
}

/// One rewrite identity used by the flattener, stated as a pair of terms
/// over plain variables; both sides must evaluate equally at every grid
/// assignment (including `bot`).
#[derive(Debug, Clone)]
pub struct RewriteRule {
    pub name: &'static str,
    pub lhs: Term,
    pub rhs: Term,
}

/// Every identity behind the combiners above: the standard common-meadow
/// rules, the two derived rules (nested division, sign of a fracterm), the
/// conditional and sequential-multiplication identities one position at a
/// time, and the composed forms exactly as the flattener builds them.
pub fn rewrite_rules() -> Vec<RewriteRule> {
    let v = |name: &str| Term::var(name);
    let ff = |n: &str, d: &str| FlatFracterm::new(v(n), v(d));
    let frac = |n: &str, d: &str| Term::div(v(n), v(d));
    let mut rules = Vec::new();
    let mut rule = |name: &'static str, lhs: Term, rhs: Term| {
        rules.push(RewriteRule { name, lhs, rhs });
    };

    rule(
        "bottom_literal",
        Term::bot(),
        Term::div(Term::int(1), Term::int(0)),
    );
    rule(
        "add_fracterms",
        Term::add(frac("p", "q"), frac("r", "t")),
        combine_add(&ff("p", "q"), &ff("r", "t")).as_term(),
    );
    rule(
        "neg_fracterm",
        Term::neg(frac("p", "q")),
        combine_neg(&ff("p", "q")).as_term(),
    );
    rule(
        "mul_fracterms",
        Term::mul(frac("p", "q"), frac("r", "t")),
        combine_mul(&ff("p", "q"), &ff("r", "t")).as_term(),
    );
    rule(
        "div_fracterms",
        Term::div(frac("p", "q"), frac("r", "t")),
        combine_div(&ff("p", "q"), &ff("r", "t")).as_term(),
    );
    rule("logcase", Term::log2(frac("x", "y")), {
        let (n, d) = log2_parts(&v("x"), &v("y"));
        Term::div(n, d)
    });
    rule(
        "sign_fracterm",
        Term::sign(frac("x", "y")),
        combine_sign(&ff("x", "y")).as_term(),
    );
    rule(
        "sign_squared_fracterm",
        Term::sign_squared(frac("x", "y")),
        Term::div(
            Term::sign_squared(v("x")),
            Term::sign_squared(v("y")),
        ),
    );
    rule(
        "cond_value_position",
        Term::cond(frac("x", "u"), v("y"), v("z")),
        Term::div(
            Term::cond(v("x"), v("y"), v("z")),
            Term::cond(v("u"), v("y"), Term::int(1)),
        ),
    );
    rule(
        "cond_test_position",
        Term::cond(v("x"), frac("y", "w"), v("z")),
        Term::div(
            Term::mul(Term::cond(v("x"), v("y"), v("z")), v("w")),
            v("w"),
        ),
    );
    rule(
        "cond_alternative_position",
        Term::cond(v("x"), v("y"), frac("z", "w")),
        Term::div(
            Term::cond(v("x"), v("y"), v("z")),
            Term::cond(Term::int(1), v("y"), v("w")),
        ),
    );
    rule(
        "cond_composite",
        Term::cond(frac("x", "u"), frac("y", "w"), frac("z", "t")),
        combine_cond(&ff("x", "u"), &ff("y", "w"), &ff("z", "t")).as_term(),
    );
    rule(
        "seqmul_left",
        Term::seqmul(frac("x", "u"), v("y")),
        Term::div(Term::seqmul(v("x"), v("y")), v("u")),
    );
    rule("seqmul_right", Term::seqmul(v("x"), frac("y", "w")), {
        let (n, d) = seqmul_right_parts(&v("x"), &v("y"), &v("w"));
        Term::div(n, d)
    });
    rule(
        "seqmul_composite",
        Term::seqmul(frac("x", "u"), frac("y", "w")),
        combine_seqmul(&ff("x", "u"), &ff("y", "w")).as_term(),
    );
    rules
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse;

    fn assert_shape(f: &FlatFracterm) {
        assert_eq!(f.numerator.count_divisions(), 0, "numerator of {f}");
        assert_eq!(f.denominator.count_divisions(), 0, "denominator of {f}");
        assert!(!f.numerator.contains_bottom_literal(), "numerator of {f}");
        assert!(!f.denominator.contains_bottom_literal(), "denominator of {f}");
    }

    #[test]
    fn leaves_embed_over_one() {
        let f = flatten(&parse("x").unwrap()).unwrap();
        assert_eq!(f.as_term(), parse("x/1").unwrap());
    }

    #[test]
    fn bottom_becomes_one_over_zero() {
        let f = flatten(&parse("bot").unwrap()).unwrap();
        assert_eq!(f.as_term(), parse("1/0").unwrap());
    }

    #[test]
    fn sum_of_reciprocals_matches_textbook_shape() {
        let f = flatten(&parse("1/x + 1/y").unwrap()).unwrap();
        assert_eq!(f.numerator, parse("1*y + 1*x").unwrap());
        assert_eq!(f.denominator, parse("x*y").unwrap());
    }

    #[test]
    fn division_free_subtrees_stay_intact() {
        let f = flatten(&parse("x |*| log2(x*x + 1)").unwrap()).unwrap();
        assert_eq!(f.numerator, parse("x |*| log2(x*x + 1)").unwrap());
        assert_eq!(f.denominator, Term::int(1));
    }

    #[test]
    fn infinities_are_rejected() {
        assert_eq!(
            flatten(&parse("+inf").unwrap()),
            Err(FlattenError::IllegalLiteral("+inf".into()))
        );
        assert_eq!(
            flatten(&parse("1 + -inf").unwrap()),
            Err(FlattenError::IllegalLiteral("-inf".into()))
        );
    }

    #[test]
    fn nested_operators_keep_the_shape_guarantee() {
        let samples = [
            "log2(1/x)",
            "s(1/x)",
            "cond(1/x; 1/y; 1/z)",
            "x |*| (1/y)",
            "(1/x)/(1/y)",
            "cond(bot; x; 1/y) - s(x/y)*log2(x/2)",
        ];
        for s in samples {
            let f = flatten(&parse(s).unwrap()).unwrap();
            assert_shape(&f);
            let whole = f.as_term();
            assert_eq!(whole.count_divisions(), 1, "{s} -> {f}");
        }
    }

    #[test]
    fn rules_are_well_formed() {
        let rules = rewrite_rules();
        assert!(rules.len() >= 14);
        for r in &rules {
            let mut vars = r.lhs.free_vars();
            for v in r.rhs.free_vars() {
                assert!(vars.contains(&v), "rule {} invents variable {v}", r.name);
            }
            vars.sort();
            assert!(vars.len() <= 6);
        }
    }
}
