//! Number rendering shared by every report format.
//!
//! All emitters go through these functions so a value printed in a Markdown
//! table is character-for-character the value in the CSV and JSON twins.

use serde::ser::{Serialize, Serializer};
use serde_json::value::RawValue;

/// Significant digits used for real-valued metrics.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Formats like C's `%.12g`: 12 significant digits, trailing zeros removed,
/// scientific notation only for very large or very small magnitudes.
pub fn sig(x: f64) -> String {
    sig_digits(x, SIGNIFICANT_DIGITS)
}

pub fn sig_digits(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Fixed number of decimals, e.g. the mean-constructors statistic.
pub fn fixed(x: f64, decimals: usize) -> String {
    format!("{:.*}", decimals, x)
}

/// A number that serializes into JSON with exactly the given text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonNumber(String);

impl JsonNumber {
    pub fn sig(x: f64) -> Self {
        JsonNumber(sig(x))
    }

    pub fn fixed(x: f64, decimals: usize) -> Self {
        JsonNumber(fixed(x, decimals))
    }

    pub fn int(n: usize) -> Self {
        JsonNumber(n.to_string())
    }
}

impl Serialize for JsonNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let raw = RawValue::from_string(self.0.clone()).map_err(serde::ser::Error::custom)?;
        raw.serialize(serializer)
    }
}

/// Quotes a CSV field when it needs it.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig(7.0 / 12.0), "0.583333333333");
        assert_eq!(sig(25.0 / 12.0), "2.08333333333");
        assert_eq!(sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig(0.875), "0.875");
        assert_eq!(sig(1.0), "1");
        assert_eq!(sig(0.0), "0");
        assert_eq!(sig(100.0), "100");
        assert_eq!(sig(99.5833333333333), "99.5833333333");
        assert_eq!(sig(1.5e-7), "1.5e-7");
        assert_eq!(sig(2.0e13), "2e13");
    }

    #[test]
    fn sig_round_trips_through_f64() {
        for x in [0.1, 2.0 / 3.0, 1234.5678, 1e-3] {
            let s = sig(x);
            assert_eq!(sig(s.parse::<f64>().unwrap()), s);
        }
    }

    #[test]
    fn json_number_is_verbatim() {
        let v = vec![JsonNumber::fixed(1.25, 3), JsonNumber::sig(1.0)];
        assert_eq!(serde_json::to_string(&v).unwrap(), "[1.250,1]");
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }
}
