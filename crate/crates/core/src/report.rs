//! Deterministic serialization of command reports.
//!
//! Floats are written with 17 significant digits so that every double
//! round-trips exactly. JSON has no literal for non-finite numbers, so those
//! appear as the strings `"inf"`, `"-inf"` and `"nan"`; in CSV they are the
//! bare tokens.

use std::io::{self, Write};

use num_complex::Complex64;
use serde::{Serialize, Serializer};

/// A double that serializes at full precision and tolerates non-finite values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl From<f64> for Real {
    fn from(v: f64) -> Self {
        Real(v)
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_str(&format_real(self.0))
        }
    }
}

/// Complex number as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point(pub Real, pub Real);

impl From<Complex64> for Point {
    fn from(z: Complex64) -> Self {
        Point(Real(z.re), Real(z.im))
    }
}

/// `d.dddddddddddddddde±x`, or `inf`, `-inf`, `nan`.
pub fn format_real(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

/// Formatter that writes every float through [`format_real`].
struct FullPrecision(serde_json::ser::PrettyFormatter<'static>);

impl serde_json::ser::Formatter for FullPrecision {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        w.write_all(format_real(v).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, v as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Pretty JSON with full-precision floats and a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FullPrecision(Default::default()));
    value
        .serialize(&mut ser)
        .expect("report types serialize infallibly");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

/// The common wrapper of every command's output.
#[derive(Debug, Clone, Serialize)]
pub struct ReportEnvelope<I: Serialize, R: Serialize> {
    pub command: &'static str,
    pub inputs: I,
    pub results: R,
    pub tool_version: &'static str,
}

impl<I: Serialize, R: Serialize> ReportEnvelope<I, R> {
    pub fn new(command: &'static str, inputs: I, results: R) -> Self {
        Self {
            command,
            inputs,
            results,
            tool_version: env!("CARGO_PKG_VERSION"),
        }
    }
}

/// CSV with the given header and LF line endings; each row is a list of
/// cells already formatted as text.
pub fn write_csv<W: Write>(out: W, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> io::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()
}

/// Contour grid as `re,im,value` rows, row-major with the imaginary part
/// as the slow index; poles are `inf`.
pub fn write_grid_csv<W: Write>(out: W, field: &crate::analysis::GridField) -> io::Result<()> {
    let n = field.resolution;
    let rows = (0..n).flat_map(|j| {
        (0..n).map(move |i| {
            vec![
                format_real(field.re_at(i)),
                format_real(field.im_at(j)),
                format_real(field.at(i, j)),
            ]
        })
    });
    write_csv(out, &["re", "im", "value"], rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_and_sentinels() {
        let v = 0.1 + 0.2;
        let s = format_real(v);
        assert_eq!(s.parse::<f64>().unwrap(), v);
        assert_eq!(format_real(f64::INFINITY), "inf");
        let json = to_json(&vec![Real(1.5), Real(f64::INFINITY), Real(-0.0)]);
        let back: Vec<serde_json::Value> = serde_json::from_str(&json).unwrap();
        assert_eq!(back[0].as_f64(), Some(1.5));
        assert_eq!(back[1].as_str(), Some("inf"));
        assert!(json.contains("1.5000000000000000e0"));
    }

    #[test]
    fn csv_uses_lf() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &["re", "im", "value"], [vec!["1".into(), "2".into(), "inf".into()]]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "re,im,value\n1,2,inf\n");
    }
}
