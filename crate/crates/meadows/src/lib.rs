//! Total arithmetic in common meadows of real numbers.
//!
//! A common meadow enriches a field with a total division operation by
//! adjoining a default peripheral value `bot` that division by zero
//! returns and that absorbs through the field operations. This crate
//! implements three such semantics over exact rationals and `f64`:
//!
//! * bottom mode — `1/0 = bot`, `log2 x = bot` for `x <= 0`;
//! * signed mode — adds `+inf`/`-inf` with their operation table and
//!   `log2 0 = -inf`;
//! * Suppes-Ono mode — `1/0 = 0` and `log2 x = 0` for `x <= 0`, with no
//!   peripheral element.
//!
//! On top of the arithmetic sit a small term language with a parser and
//! printer ([`term`]), an evaluator ([`eval`]), a rewriter that flattens
//! any bottom-mode term into a single fraction of division-free terms
//! ([`flatten`]), probability mass functions with entropy, cross-entropy,
//! KL and JS divergence both computed directly and built as terms
//! ([`measures`]), finite event spaces with meadow-valued conditional
//! probability ([`events`]), and grid-based semantic equivalence checking
//! with the named identity suites ([`oracle`]).

pub mod eval;
pub mod events;
pub mod flatten;
pub mod measures;
pub mod ops;
pub mod oracle;
pub mod term;
pub mod value;

pub use eval::{eval, Environment, EvalError};
pub use term::{parse, print, Term};
pub use value::{ApproxValue, Carrier, CarrierKind, ExactValue, Mode, Value};
