//! Text formats: angle literals, state specs, and field documents.
//!
//! Field documents come in two encodings. JSON carries the state spec, the
//! sample count and the rows; CSV carries only the rows under the fixed
//! header `phi,s1,s2,s3`. Row values are printed with 17 significant digits
//! in both encodings, so a parse/print cycle reproduces the input bytes.

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize};
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::higher_order::{BasisPair, Charges, HigherOrderFrame, HigherOrderState};
use crate::orientation::OrientationField;
use crate::sphere::{SphereCoords, SphereKind, Vec3};
use crate::tol;

pub const CSV_HEADER: &str = "phi,s1,s2,s3";

/// Parses an angle in radians: a plain decimal, or a multiple of pi such as
/// `pi`, `-pi/2`, `3pi/4`, `0.5*pi`, `2π/3`.
pub fn parse_angle(text: &str) -> Result<f64> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::parse("empty angle"));
    }
    let (negative, body) = match t.as_bytes()[0] {
        b'-' => (true, &t[1..]),
        b'+' => (false, &t[1..]),
        _ => (false, t),
    };
    let value = match find_pi(body) {
        None => parse_decimal(body)?,
        Some((start, end)) => {
            let raw = body[..start].trim();
            let coef = match raw.strip_suffix('*') {
                Some(c) => parse_decimal(c.trim())?,
                None if raw.is_empty() => 1.0,
                None => parse_decimal(raw)?,
            };
            let rest = body[end..].trim();
            let denom = if rest.is_empty() {
                1.0
            } else if let Some(d) = rest.strip_prefix('/') {
                let d = parse_decimal(d.trim())?;
                if d == 0.0 {
                    return Err(Error::parse(format!("zero denominator in {text:?}")));
                }
                d
            } else {
                return Err(Error::parse(format!(
                    "unexpected {rest:?} after pi in {text:?}"
                )));
            };
            coef * PI / denom
        }
    };
    let value = if negative { -value } else { value };
    if !value.is_finite() {
        return Err(Error::parse(format!("angle {text:?} is not finite")));
    }
    Ok(value)
}

fn find_pi(s: &str) -> Option<(usize, usize)> {
    if let Some(i) = s.find('π') {
        return Some((i, i + 'π'.len_utf8()));
    }
    let lower = s.to_ascii_lowercase();
    lower.find("pi").map(|i| (i, i + 2))
}

/// Unsigned finite decimal; rejects `inf`, `nan` and stray signs.
fn parse_decimal(s: &str) -> Result<f64> {
    let ok_chars = !s.is_empty()
        && s.bytes()
            .all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'e' | b'E' | b'+' | b'-'))
        && s.as_bytes()[0] != b'-'
        && s.as_bytes()[0] != b'+';
    if !ok_chars {
        return Err(Error::parse(format!("invalid number {s:?}")));
    }
    let v: f64 = s
        .parse()
        .map_err(|_| Error::parse(format!("invalid number {s:?}")))?;
    if !v.is_finite() {
        return Err(Error::parse(format!("number {s:?} is not finite")));
    }
    Ok(v)
}

/// `%.17g`: 17 significant digits, trailing zeros trimmed.
pub fn fmt_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (16 - exp) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn angle_field<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Number(f64),
        Text(String),
    }
    match Raw::deserialize(d)? {
        Raw::Number(v) => Ok(v),
        Raw::Text(s) => parse_angle(&s).map_err(serde::de::Error::custom),
    }
}

/// Serialized description of a [`HigherOrderState`].
///
/// Angles are radians; on input they may also be given as strings using the
/// [`parse_angle`] grammar.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub sphere: SphereKind,
    #[serde(deserialize_with = "angle_field")]
    pub theta_lambda: f64,
    #[serde(deserialize_with = "angle_field")]
    pub phi_lambda: f64,
    pub l: i64,
    pub m: i64,
    #[serde(deserialize_with = "angle_field")]
    pub theta: f64,
    #[serde(deserialize_with = "angle_field")]
    pub phi: f64,
}

impl StateSpec {
    pub fn from_state(s: &HigherOrderState) -> Self {
        StateSpec {
            sphere: s.kind(),
            theta_lambda: s.frame.basis.coords.theta(),
            phi_lambda: s.frame.basis.coords.phi(),
            l: s.frame.charges.l,
            m: s.frame.charges.m,
            theta: s.coords.theta(),
            phi: s.coords.phi(),
        }
    }

    pub fn to_state(&self) -> Result<HigherOrderState> {
        let basis = SphereCoords::new(self.theta_lambda, self.phi_lambda)
            .map_err(|e| Error::domain(format!("basis coordinates: {e}")))?;
        let coords = SphereCoords::new(self.theta, self.phi)
            .map_err(|e| Error::domain(format!("state coordinates: {e}")))?;
        Ok(HigherOrderState::new(
            HigherOrderFrame::new(
                BasisPair::new(basis, self.sphere),
                Charges::new(self.l, self.m),
            ),
            coords,
        ))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: StateSpec =
            serde_json::from_str(text).map_err(|e| Error::parse(format!("state spec: {e}")))?;
        spec.to_state()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        to_json_pretty(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldFormat {
    Json,
    Csv,
}

/// Sampled orientation field as exchanged on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateSpec>,
    pub samples: usize,
    /// `[phi, s1, s2, s3]` per sample.
    #[serde(serialize_with = "rows_g17")]
    pub rows: Vec<[f64; 4]>,
}

impl FieldDocument {
    pub fn from_field(field: &OrientationField) -> Self {
        let state = HigherOrderState::new(field.frame, field.coords);
        FieldDocument {
            state: Some(StateSpec::from_state(&state)),
            samples: field.points.len(),
            rows: field
                .points
                .iter()
                .map(|&(phi, s)| [phi, s.x, s.y, s.z])
                .collect(),
        }
    }

    pub fn vectors(&self) -> impl Iterator<Item = (f64, Vec3)> + '_ {
        self.rows
            .iter()
            .map(|r| (r[0], Vec3::new(r[1], r[2], r[3])))
    }

    pub fn sphere(&self) -> Option<SphereKind> {
        self.state.map(|s| s.sphere)
    }

    /// Row count, finiteness, unit vectors, increasing azimuth.
    pub fn validate(&self) -> Result<()> {
        if self.rows.is_empty() {
            return Err(Error::domain("field document has no rows"));
        }
        if self.rows.len() != self.samples {
            return Err(Error::domain(format!(
                "field document declares {} samples but has {} rows",
                self.samples,
                self.rows.len()
            )));
        }
        if let Some(spec) = &self.state {
            spec.to_state()?;
        }
        for (k, (phi, s)) in self.vectors().enumerate() {
            if !phi.is_finite() || !s.is_finite() {
                return Err(Error::domain(format!("row {k} is not finite")));
            }
            if (s.norm() - 1.0).abs() > tol::INPUT_UNIT {
                return Err(Error::domain(format!("row {k} is not a unit vector")));
            }
        }
        if self.rows.windows(2).any(|w| w[1][0] <= w[0][0]) {
            return Err(Error::domain("row azimuths must be strictly increasing"));
        }
        Ok(())
    }

    /// # Panics
    ///
    /// If a row holds a non-finite value; [`validate`](Self::validate) rules
    /// that out for every parsed or sampled document.
    pub fn to_json(&self) -> String {
        to_json_pretty(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: FieldDocument =
            serde_json::from_str(text).map_err(|e| Error::parse(format!("field document: {e}")))?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(CSV_HEADER.split(','))
            .expect("in-memory csv write");
        for row in &self.rows {
            w.write_record(row.iter().map(|&v| fmt_g17(v)))
                .expect("in-memory csv write");
        }
        let bytes = w.into_inner().expect("in-memory csv flush");
        String::from_utf8(bytes).expect("csv output is ascii")
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        let header = r
            .headers()
            .map_err(|e| Error::parse(format!("csv header: {e}")))?;
        if header.iter().collect::<Vec<_>>().join(",") != CSV_HEADER {
            return Err(Error::parse(format!(
                "csv header must be exactly {CSV_HEADER:?}"
            )));
        }
        let mut rows = Vec::new();
        for (k, rec) in r.records().enumerate() {
            let rec = rec.map_err(|e| Error::parse(format!("csv row {k}: {e}")))?;
            if rec.len() != 4 {
                return Err(Error::parse(format!(
                    "csv row {k} has {} fields",
                    rec.len()
                )));
            }
            let mut row = [0.0; 4];
            for (slot, field) in row.iter_mut().zip(rec.iter()) {
                let v: f64 = field
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(format!("csv row {k}: bad number {field:?}")))?;
                if !v.is_finite() {
                    return Err(Error::parse(format!("csv row {k}: non-finite value")));
                }
                *slot = v;
            }
            rows.push(row);
        }
        let doc = FieldDocument {
            state: None,
            samples: rows.len(),
            rows,
        };
        doc.validate()?;
        Ok(doc)
    }

    pub fn encode(&self, format: FieldFormat) -> String {
        match format {
            FieldFormat::Json => self.to_json(),
            FieldFormat::Csv => self.to_csv(),
        }
    }

    /// JSON when the first non-blank byte is `{`, CSV otherwise.
    pub fn parse_any(text: &str) -> Result<(Self, FieldFormat)> {
        if text.trim_start().starts_with('{') {
            Ok((Self::from_json(text)?, FieldFormat::Json))
        } else {
            Ok((Self::from_csv(text)?, FieldFormat::Csv))
        }
    }
}

fn rows_g17<S: serde::Serializer>(
    rows: &[[f64; 4]],
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::{Error as _, SerializeSeq};
    let mut seq = ser.serialize_seq(Some(rows.len()))?;
    for row in rows {
        let cells = row
            .iter()
            .map(|&v| {
                if !v.is_finite() {
                    return Err(S::Error::custom("non-finite value in field row"));
                }
                RawValue::from_string(fmt_g17(v)).map_err(S::Error::custom)
            })
            .collect::<std::result::Result<Vec<Box<RawValue>>, _>>()?;
        seq.serialize_element(&cells)?;
    }
    seq.end()
}

/// Pretty JSON in declaration key order, newline-terminated.
pub fn to_json_pretty<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.display().to_string(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents).map_err(io_err)?;
    tmp.flush().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orientation::{sample_field, AzimuthGrid};
    use proptest::prelude::*;

    #[test]
    fn angle_literals() {
        let cases = [
            ("0", 0.0),
            ("1.25", 1.25),
            ("pi", PI),
            ("PI", PI),
            ("pi/2", PI / 2.0),
            ("-pi/2", -PI / 2.0),
            ("3pi/4", 3.0 * PI / 4.0),
            ("3*pi/4", 3.0 * PI / 4.0),
            ("0.5 * pi", 0.5 * PI),
            ("2π/3", 2.0 * PI / 3.0),
            ("3.2π", 3.2 * PI),
            (" +1e-3 ", 1e-3),
        ];
        for (text, want) in cases {
            assert_eq!(parse_angle(text).unwrap(), want, "{text}");
        }
        for bad in [
            "", "-", "pi/0", "pi/", "inf", "nan", "pi2", "2pipi", "1..2", "--1", "pi/-2", "x",
            "π/π", "*pi", "2**pi",
        ] {
            assert!(parse_angle(bad).is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn g17_formatting() {
        assert_eq!(fmt_g17(0.0), "0");
        assert_eq!(fmt_g17(-0.0), "-0");
        assert_eq!(fmt_g17(1.0), "1");
        assert_eq!(fmt_g17(-0.5), "-0.5");
        assert_eq!(fmt_g17(0.1), "0.10000000000000001");
        assert_eq!(fmt_g17(PI), "3.1415926535897931");
        assert_eq!(fmt_g17(1e-7), "9.9999999999999995e-08");
        assert_eq!(fmt_g17(1e-5), "1.0000000000000001e-05");
        assert_eq!(fmt_g17(1e-4), "0.0001");
        assert_eq!(fmt_g17(1.5e20), "1.5e+20");
        assert_eq!(fmt_g17(1.2246467991473532e-16), "1.2246467991473532e-16");
        assert_eq!(fmt_g17(123456.0), "123456");
    }

    #[test]
    fn state_spec_json() {
        let text =
            r#"{"sphere":"B","theta_lambda":"pi/2","phi_lambda":0,"l":-1,"m":1,"theta":0,"phi":0}"#;
        let spec = StateSpec::from_json(text).unwrap();
        assert_eq!(spec.theta_lambda, PI / 2.0);
        assert_eq!(spec.l, -1);
        let again = StateSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(again, spec);
        assert_eq!(again.to_json(), spec.to_json());

        let out_of_range = text.replace("\"theta\":0", "\"theta\":\"3.2pi\"");
        assert!(matches!(
            StateSpec::from_json(&out_of_range),
            Err(Error::Domain(_))
        ));
        assert!(StateSpec::from_json("{}").is_err());
        let extra = text.replace("\"phi\":0", "\"phi\":0,\"x\":1");
        assert!(StateSpec::from_json(&extra).is_err());
    }

    fn doc() -> FieldDocument {
        let spec = StateSpec {
            sphere: SphereKind::Bloch,
            theta_lambda: 1.0,
            phi_lambda: 0.5,
            l: 2,
            m: -1,
            theta: 0.3,
            phi: 4.0,
        };
        FieldDocument::from_field(&sample_field(
            &spec.to_state().unwrap(),
            AzimuthGrid::new(24).unwrap(),
        ))
    }

    #[test]
    fn csv_layout() {
        let csv = doc().to_csv();
        assert!(csv.starts_with("phi,s1,s2,s3\n"));
        assert!(!csv.contains('\r'));
        assert_eq!(csv.lines().count(), 25);
        let back = FieldDocument::from_csv(&csv).unwrap();
        assert_eq!(back.rows, doc().rows);
        assert_eq!(back.to_csv(), csv);
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let json = doc().to_json();
        let back = FieldDocument::from_json(&json).unwrap();
        assert_eq!(back, doc());
        assert_eq!(back.to_json(), json);
    }

    #[test]
    fn malformed_documents() {
        assert!(FieldDocument::from_csv("phi,x,y,z\n0,0,0,1\n").is_err());
        assert!(FieldDocument::from_csv("phi,s1,s2,s3\n0,0,0\n").is_err());
        assert!(FieldDocument::from_csv("phi,s1,s2,s3\n0,0,0,2\n").is_err());
        assert!(FieldDocument::from_csv("phi,s1,s2,s3\n1,0,0,1\n0,0,0,1\n").is_err());
        assert!(FieldDocument::from_csv("phi,s1,s2,s3\n0,0,0,inf\n").is_err());
        assert!(FieldDocument::from_csv("phi,s1,s2,s3\n").is_err());
        let mut d = doc();
        d.samples += 1;
        assert!(FieldDocument::from_json(&d.to_json()).is_err());
        assert!(FieldDocument::from_json("{").is_err());
    }

    #[test]
    fn atomic_write_and_read() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.json");
        write_atomic(&p, b"abc").unwrap();
        assert_eq!(read_text(&p).unwrap(), "abc");
        let bad = dir.path().join("missing").join("out.json");
        assert!(matches!(write_atomic(&bad, b"x"), Err(Error::Io { .. })));
        assert!(matches!(read_text(&bad), Err(Error::Io { .. })));
    }

    proptest! {
        #[test]
        fn g17_round_trips(bits in any::<u64>()) {
            let x = f64::from_bits(bits);
            prop_assume!(x.is_finite());
            let text = fmt_g17(x);
            let back: f64 = text.parse().unwrap();
            prop_assert_eq!(back.to_bits(), x.to_bits());
            prop_assert_eq!(fmt_g17(back), text);
        }

        #[test]
        fn parse_angle_never_panics(s in "\\PC{0,12}") {
            let _ = parse_angle(&s);
        }

        #[test]
        fn decimal_angles_round_trip(x in -100.0..100.0f64) {
            prop_assert_eq!(parse_angle(&fmt_g17(x)).unwrap(), x);
        }
    }
}
