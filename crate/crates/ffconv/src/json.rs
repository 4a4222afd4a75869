//! JSON serialization with lossless floating-point formatting.
//!
//! Every number is written with 17 significant digits, enough to round-trip
//! any `f64` exactly, so reports and polynomial files reproduce the same
//! values they were written from. Non-finite values become `null` (standard
//! JSON has no representation for them).

use serde::Serialize;

/// 17-significant-digit rendering of a double. Non-finite values print as
/// `inf` / `-inf` / `NaN`, which is fine for CSV; the JSON serializer never
/// routes them here.
pub fn fmt_f64(value: f64) -> String {
    if !value.is_finite() {
        return format!("{value}");
    }
    format!("{value:.16e}")
}

struct SigFigFormatter;

impl serde_json::ser::Formatter for SigFigFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{}", fmt_f64(value))
    }
}

/// Serializes to a single JSON line with 17-digit floats.
pub fn to_string<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigFigFormatter);
    value
        .serialize(&mut ser)
        .expect("plain data structures serialize without error");
    String::from_utf8(out).expect("serializer writes UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_exactly() {
        for v in [
            0.1,
            -1.0 / 3.0,
            std::f64::consts::PI,
            1.0,
            4.9e-324,
            1.7976931348623157e308,
            -0.0,
        ] {
            let s = fmt_f64(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{v} → {s} → {back}");
        }
    }

    #[test]
    fn json_output_parses_back() {
        #[derive(Serialize)]
        struct Row {
            x: f64,
            label: String,
            ys: Vec<f64>,
        }
        let row = Row {
            x: 2.0f64.sqrt(),
            label: "anchor".into(),
            ys: vec![0.1, f64::NEG_INFINITY],
        };
        let s = to_string(&row);
        let value: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(value["x"].as_f64().unwrap().to_bits(), 2.0f64.sqrt().to_bits());
        // Non-finite becomes null.
        assert!(value["ys"][1].is_null());
    }
}
