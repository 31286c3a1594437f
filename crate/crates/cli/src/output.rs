//! Deterministic machine-readable output. Floats are printed with 17
//! significant digits so every value round-trips losslessly through parsing.

use std::fmt::Write as _;

/// 17 significant digits in exponent form; valid JSON and CSV token.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct JsonObject {
    buf: String,
    first: bool,
}

impl JsonObject {
    pub fn new() -> Self {
        Self {
            buf: String::from("{"),
            first: true,
        }
    }

    fn key(&mut self, key: &str) {
        if !self.first {
            self.buf.push(',');
        }
        self.first = false;
        let _ = write!(self.buf, "\"{key}\":");
    }

    pub fn field_f64(mut self, key: &str, value: f64) -> Self {
        self.key(key);
        self.buf.push_str(&num(value));
        self
    }

    pub fn field_u64(mut self, key: &str, value: u64) -> Self {
        self.key(key);
        let _ = write!(self.buf, "{value}");
        self
    }

    pub fn field_bool(mut self, key: &str, value: bool) -> Self {
        self.key(key);
        let _ = write!(self.buf, "{value}");
        self
    }

    pub fn field_f64_array(mut self, key: &str, values: &[f64]) -> Self {
        self.key(key);
        self.buf.push('[');
        for (i, v) in values.iter().enumerate() {
            if i > 0 {
                self.buf.push(',');
            }
            self.buf.push_str(&num(*v));
        }
        self.buf.push(']');
        self
    }

    pub fn field_u64_array(mut self, key: &str, values: &[u64]) -> Self {
        self.key(key);
        self.buf.push('[');
        for (i, v) in values.iter().enumerate() {
            if i > 0 {
                self.buf.push(',');
            }
            let _ = write!(self.buf, "{v}");
        }
        self.buf.push(']');
        self
    }

    pub fn finish(mut self) -> String {
        self.buf.push('}');
        self.buf
    }
}

/// Joins CSV fields; callers pass already-rendered tokens.
pub fn csv_line(fields: &[String]) -> String {
    fields.join(",")
}
