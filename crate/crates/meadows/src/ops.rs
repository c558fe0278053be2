//! The totalised operations of the three algebras.
//!
//! Every operation is a total function on the values legal for its mode.
//! In `Bottom` mode `bot` absorbs through all of `add`, `neg`, `mul`,
//! `div`, `log2` and `sign`; only the conditional and left-sequential
//! multiplication override it, and only in their documented positions.
//! `Signed` mode adds the two infinities with their operation table, closed
//! under sign symmetry. `SuppesOno` mode never sees a peripheral at all.
//!
//! Passing a value that is illegal for the mode (an infinity outside
//! `Signed`, `bot` under `SuppesOno`) is a caller bug and panics.

use crate::value::{Carrier, Inexact, Mode, Value};

fn guard<N: Carrier>(mode: Mode, v: &Value<N>) {
    assert!(
        v.legal_for(mode),
        "value {} is not legal under mode {mode}",
        v.render()
    );
}

impl Mode {
    pub fn add<N: Carrier>(self, a: &Value<N>, b: &Value<N>) -> Value<N> {
        guard(self, a);
        guard(self, b);
        use Value::*;
        match (a, b) {
            (Bottom, _) | (_, Bottom) => Bottom,
            (Ordinary(x), Ordinary(y)) => Value::ordinary(x.add(y)),
            (PosInf, PosInf) | (NegInf, NegInf) => a.clone(),
            (PosInf, NegInf) | (NegInf, PosInf) => Bottom,
            (PosInf, Ordinary(_)) | (Ordinary(_), PosInf) => PosInf,
            (NegInf, Ordinary(_)) | (Ordinary(_), NegInf) => NegInf,
        }
    }

    pub fn neg<N: Carrier>(self, a: &Value<N>) -> Value<N> {
        guard(self, a);
        use Value::*;
        match a {
            Bottom => Bottom,
            Ordinary(x) => Value::ordinary(x.neg()),
            PosInf => NegInf,
            NegInf => PosInf,
        }
    }

    pub fn sub<N: Carrier>(self, a: &Value<N>, b: &Value<N>) -> Value<N> {
        self.add(a, &self.neg(b))
    }

    pub fn mul<N: Carrier>(self, a: &Value<N>, b: &Value<N>) -> Value<N> {
        guard(self, a);
        guard(self, b);
        use Value::*;
        match (a, b) {
            (Bottom, _) | (_, Bottom) => Bottom,
            (Ordinary(x), Ordinary(y)) => Value::ordinary(x.mul(y)),
            (PosInf, PosInf) | (NegInf, NegInf) => PosInf,
            (PosInf, NegInf) | (NegInf, PosInf) => NegInf,
            (inf, Ordinary(x)) | (Ordinary(x), inf) => {
                let inf_sign = if matches!(inf, PosInf) { 1 } else { -1 };
                match x.signum() {
                    0 => Value::int(0),
                    s if s == inf_sign => PosInf,
                    _ => NegInf,
                }
            }
        }
    }

    /// Multiplicative inverse: `1/0 = bot` (`0` under Suppes-Ono);
    /// the inverse of `bot` and of both infinities is `bot`.
    pub fn recip<N: Carrier>(self, a: &Value<N>) -> Value<N> {
        guard(self, a);
        use Value::*;
        match a {
            Bottom | PosInf | NegInf => Bottom,
            Ordinary(x) => match x.recip() {
                Some(r) => Value::ordinary(r),
                None if self == Mode::SuppesOno => Value::int(0),
                None => Bottom,
            },
        }
    }

    pub fn div<N: Carrier>(self, a: &Value<N>, b: &Value<N>) -> Value<N> {
        self.mul(a, &self.recip(b))
    }

    pub fn log2<N: Carrier>(self, a: &Value<N>) -> Result<Value<N>, Inexact> {
        guard(self, a);
        use Value::*;
        Ok(match a {
            Bottom | PosInf | NegInf => Bottom,
            Ordinary(x) => match x.signum() {
                1 => Value::ordinary(x.log2()?),
                0 if self == Mode::Signed => NegInf,
                _ if self == Mode::SuppesOno => Value::int(0),
                _ => Bottom,
            },
        })
    }

    pub fn sign<N: Carrier>(self, a: &Value<N>) -> Value<N> {
        guard(self, a);
        use Value::*;
        match a {
            Bottom => Bottom,
            Ordinary(x) => Value::int(x.signum() as i64),
            PosInf => Value::int(1),
            NegInf => Value::int(-1),
        }
    }

    /// The conditional `x <| y |> z`: `z` when the test `y` is zero, `bot`
    /// when the test is `bot`, otherwise `x`. An infinite test counts as
    /// nonzero.
    pub fn cond<N: Carrier>(self, x: &Value<N>, y: &Value<N>, z: &Value<N>) -> Value<N> {
        guard(self, x);
        guard(self, y);
        guard(self, z);
        use Value::*;
        match y {
            Bottom => Bottom,
            Ordinary(t) if t.is_zero() => z.clone(),
            _ => x.clone(),
        }
    }

    /// Left-sequential multiplication `x |*| y = (x * y) <| x |> 0`.
    pub fn seqmul<N: Carrier>(self, x: &Value<N>, y: &Value<N>) -> Value<N> {
        self.cond(&self.mul(x, y), x, &Value::int(0))
    }
}
