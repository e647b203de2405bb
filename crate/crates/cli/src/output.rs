use std::io::{self, Write};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use orblab::ProjPoint;
use serde_json::{json, Value};

/// Integers as JSON numbers when they fit in 64 bits, else as strings.
pub fn int(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

/// Rationals as `"p/q"` strings.
pub fn rat(r: &BigRational) -> Value {
    json!(r.to_string())
}

pub fn point(p: &ProjPoint) -> Value {
    json!(p.to_string())
}

/// Rounds to 10 significant digits.
pub fn sig10(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.9e}").parse().unwrap_or(x)
}

pub fn float(x: f64) -> Value {
    if x.is_finite() {
        json!(sig10(x))
    } else {
        Value::Null
    }
}

pub fn float_text(x: f64) -> String {
    if x.is_finite() {
        sig10(x).to_string()
    } else {
        "inf".into()
    }
}

/// Buffered standard output, written in one piece.
#[derive(Default)]
pub struct Out {
    buf: String,
}

impl Out {
    pub fn line(&mut self, s: impl AsRef<str>) {
        self.buf.push_str(s.as_ref());
        self.buf.push('\n');
    }

    pub fn json(&mut self, v: &Value) {
        self.line(v.to_string());
    }

    pub fn flush(self) -> io::Result<()> {
        let mut stdout = io::stdout().lock();
        stdout.write_all(self.buf.as_bytes())?;
        stdout.flush()
    }
}
