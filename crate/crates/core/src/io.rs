//! JSON file formats and output helpers.
//!
//! Forms are lists of terms `[{"axes": [1, 3, 5], "coeff": "1/2"}]`, or
//! `{"grade": k, "terms": [...]}` when the grade cannot be read off the
//! terms. Coefficients are integers, "p/q" strings, or floats. Any float
//! makes the whole input inexact.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exterior::{Form, MultiIndex, DIM};
use crate::invariants::coords::{PrimitiveCoords, NAMES};
use crate::scalar::{Rational, Scalar};

/// Scalars that know their own JSON encoding.
pub trait JsonScalar: Scalar {
    fn to_json(&self) -> Value;
}

impl JsonScalar for f64 {
    fn to_json(&self) -> Value {
        json!(self)
    }
}

impl JsonScalar for Rational {
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
}

/// Seventeen significant digits, enough to round-trip any double.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0.0".into();
    }
    if !x.is_finite() {
        return "null".into();
    }
    format!("{x:.16e}")
}

/// Pretty JSON with two-space indentation and every float printed by
/// [`fmt_f64`].
pub fn to_json_string(v: &Value) -> String {
    let mut out = String::new();
    emit(v, 0, &mut out);
    out.push('\n');
    out
}

fn emit(v: &Value, depth: usize, out: &mut String) {
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Value::Null | Value::Bool(_) | Value::String(_) => out.push_str(&v.to_string()),
        Value::Number(n) => match (n.as_i64(), n.as_u64(), n.as_f64()) {
            (Some(i), _, _) => write!(out, "{i}").unwrap(),
            (_, Some(u), _) => write!(out, "{u}").unwrap(),
            (_, _, Some(x)) => out.push_str(&fmt_f64(x)),
            _ => out.push_str(&n.to_string()),
        },
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(|x| x.is_number()) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                emit(x, depth, out);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                emit(x, depth + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                emit(x, depth + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
    }
}

/// Writes through a temporary file in the same directory and renames it
/// into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// A value read from JSON, kept exact; `exact` is false when any float was
/// involved.
#[derive(Clone, Debug, PartialEq)]
pub struct Parsed<T> {
    pub value: T,
    pub exact: bool,
}

pub fn parse_scalar(v: &Value) -> Result<Parsed<Rational>> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Parsed {
                    value: Rational::int(i),
                    exact: true,
                })
            } else {
                let x = n.as_f64().ok_or_else(|| Error::Parse(format!("bad number {n}")))?;
                Ok(Parsed {
                    value: Rational::real(x),
                    exact: false,
                })
            }
        }
        Value::String(s) => parse_ratio(s).map(|value| Parsed { value, exact: true }),
        other => Err(Error::Parse(format!("expected a number or \"p/q\", got {other}"))),
    }
}

fn parse_ratio(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("bad rational \"{s}\""));
    let int = |t: &str| t.trim().parse::<BigInt>().map_err(|_| bad());
    match s.split_once('/') {
        Some((p, q)) => {
            let q = int(q)?;
            if q == BigInt::from(0) {
                return Err(bad());
            }
            Ok(Rational::new(int(p)?, q))
        }
        None => Ok(Rational::from_integer(int(s)?)),
    }
}

pub fn form_to_json<S: JsonScalar>(f: &Form<S>) -> Value {
    let terms: Vec<Value> = f
        .terms()
        .map(|(idx, c)| json!({"axes": idx.axes(), "coeff": c.to_json()}))
        .collect();
    if terms.is_empty() || f.grade() == 0 {
        json!({"grade": f.grade(), "terms": terms})
    } else {
        Value::Array(terms)
    }
}

/// Reads a form; `default_grade` applies to an empty bare list.
pub fn form_from_json(v: &Value, default_grade: usize) -> Result<Parsed<Form<Rational>>> {
    let (grade, terms) = match v {
        Value::Array(t) => (None, t),
        Value::Object(m) => {
            let terms = m
                .get("terms")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("form object needs a \"terms\" list".into()))?;
            let g = match m.get("grade") {
                Some(g) => Some(
                    g.as_u64()
                        .ok_or_else(|| Error::Parse("grade must be an integer".into()))? as usize,
                ),
                None => None,
            };
            (g, terms)
        }
        _ => return Err(Error::Parse("a form is a list of terms or an object with terms".into())),
    };
    let mut exact = true;
    let mut parsed = Vec::with_capacity(terms.len());
    for t in terms {
        let axes = t
            .get("axes")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse(format!("term without \"axes\": {t}")))?
            .iter()
            .map(|a| {
                a.as_u64()
                    .map(|x| x as usize)
                    .ok_or_else(|| Error::Parse(format!("bad axis {a}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let c = parse_scalar(
            t.get("coeff")
                .ok_or_else(|| Error::Parse(format!("term without \"coeff\": {t}")))?,
        )?;
        exact &= c.exact;
        parsed.push((axes, c.value));
    }
    let grade = grade
        .or_else(|| parsed.first().map(|(a, _)| a.len()))
        .unwrap_or(default_grade);
    if grade > DIM {
        return Err(Error::GradeOverflow(grade, DIM));
    }
    let mut form = Form::<Rational>::zero(grade);
    for (axes, c) in parsed {
        if axes.len() != grade {
            return Err(Error::Parse(format!("mixed grades: {axes:?} in a {grade}-form")));
        }
        let idx = MultiIndex::new(&axes)?;
        let sum = form.coeff(idx).clone() + c;
        form.set(idx, sum);
    }
    Ok(Parsed { value: form, exact })
}

pub fn coords_to_json<S: JsonScalar>(c: &PrimitiveCoords<S>) -> Value {
    let mut m = Map::new();
    for (name, x) in NAMES.iter().zip(c.values()) {
        m.insert(name.to_string(), x.to_json());
    }
    Value::Object(m)
}

/// Reads {"A": .., ..., "N": ..}; missing names are zero.
pub fn coords_from_json(v: &Value) -> Result<Parsed<PrimitiveCoords<Rational>>> {
    let m = v
        .as_object()
        .ok_or_else(|| Error::Parse("coordinates must be an object keyed by A..N".into()))?;
    let mut c = PrimitiveCoords::zero();
    let mut exact = true;
    for (k, x) in m {
        let i = PrimitiveCoords::<Rational>::index_of(k)
            .ok_or_else(|| Error::Parse(format!("unknown coordinate \"{k}\"")))?;
        let p = parse_scalar(x)?;
        exact &= p.exact;
        c.0[i] = p.value;
    }
    Ok(Parsed { value: c, exact })
}

/// {"name": .., "d": {"1": form, ..., "6": form}}, listing d e^i; missing
/// entries are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraFile {
    pub name: Option<String>,
    pub de: Vec<Form<Rational>>,
}

pub fn algebra_from_json(v: &Value) -> Result<Parsed<AlgebraFile>> {
    let d = v
        .get("d")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::Parse("algebra needs a \"d\" object".into()))?;
    let mut de = vec![Form::zero(2); DIM];
    let mut exact = true;
    for (k, f) in d {
        let i: usize = k.parse().map_err(|_| Error::Parse(format!("bad index \"{k}\"")))?;
        if !(1..=DIM).contains(&i) {
            return Err(Error::Parse(format!("index {i} outside 1..6")));
        }
        let p = form_from_json(f, 2)?;
        if p.value.grade() != 2 {
            return Err(Error::Parse(format!("d e^{i} must be a 2-form")));
        }
        exact &= p.exact;
        de[i - 1] = p.value;
    }
    Ok(Parsed {
        value: AlgebraFile {
            name: v.get("name").and_then(Value::as_str).map(String::from),
            de,
        },
        exact,
    })
}

pub fn algebra_to_json<S: JsonScalar>(name: &str, de: &[Form<S>]) -> Value {
    let mut d = Map::new();
    for (i, f) in de.iter().enumerate() {
        if !f.is_zero() {
            d.insert((i + 1).to_string(), form_to_json(f));
        }
    }
    json!({"name": name, "d": d})
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(-2.0), "-2.0000000000000000e0");
        let x = 0.1 + 0.2;
        assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn json_output_is_valid() {
        let v = json!({"a": [1.5, 2, -3.25e-7], "b": {"c": null, "d": "1/3"}, "e": []});
        let s = to_json_string(&v);
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        assert!(s.contains("1.5000000000000000e0"));
    }

    #[test]
    fn form_parsing() {
        let v: Value = serde_json::from_str(r#"[{"axes":[1,3,5],"coeff":"1/2"},{"axes":[2,4,6],"coeff":-3}]"#).unwrap();
        let p = form_from_json(&v, 3).unwrap();
        assert!(p.exact);
        assert_eq!(p.value.get(&[1, 3, 5]), &Rational::ratio(1, 2));
        assert_eq!(p.value.get(&[2, 4, 6]), &Rational::int(-3));
        let f: Value = serde_json::from_str(r#"[{"axes":[1,2,3],"coeff":0.5}]"#).unwrap();
        assert!(!form_from_json(&f, 3).unwrap().exact);
        let empty: Value = serde_json::from_str("[]").unwrap();
        assert_eq!(form_from_json(&empty, 3).unwrap().value.grade(), 3);
        for bad in [
            r#"[{"axes":[1,1,2],"coeff":1}]"#,
            r#"[{"axes":[1,2,3],"coeff":"1/0"}]"#,
            r#"[{"axes":[1,2],"coeff":1},{"axes":[1,2,3],"coeff":1}]"#,
            r#"{"x":1}"#,
        ] {
            let v: Value = serde_json::from_str(bad).unwrap();
            assert!(form_from_json(&v, 3).is_err(), "{bad}");
        }
    }

    #[test]
    fn form_json_keeps_value() {
        let f = &Form::<Rational>::monomial(&[1, 4, 6]).scale(&Rational::ratio(-5, 3)) + &Form::monomial(&[2, 3, 6]);
        assert_eq!(form_from_json(&form_to_json(&f), 3).unwrap().value, f);
        let z = Form::<Rational>::zero(4);
        assert_eq!(form_from_json(&form_to_json(&z), 3).unwrap().value, z);
    }

    #[test]
    fn coords_parsing() {
        let v: Value = serde_json::from_str(r#"{"A": 1, "H": "-2/3"}"#).unwrap();
        let c = coords_from_json(&v).unwrap();
        assert_eq!(c.value.get("H"), &Rational::ratio(-2, 3));
        assert_eq!(c.value.get("B"), &Rational::int(0));
        let bad: Value = serde_json::from_str(r#"{"Z": 1}"#).unwrap();
        assert!(coords_from_json(&bad).is_err());
    }

    #[test]
    fn algebra_parsing() {
        let v: Value = serde_json::from_str(
            r#"{"name":"nil","d":{"4":[{"axes":[1,5],"coeff":1}],"6":[{"axes":[1,3],"coeff":1}]}}"#,
        )
        .unwrap();
        let a = algebra_from_json(&v).unwrap();
        assert_eq!(a.value.name.as_deref(), Some("nil"));
        assert_eq!(a.value.de[3], Form::monomial(&[1, 5]));
        assert!(a.value.de[0].is_zero());
        let bad: Value = serde_json::from_str(r#"{"d":{"7":[]}}"#).unwrap();
        assert!(algebra_from_json(&bad).is_err());
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub/out.json");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
    }
}
