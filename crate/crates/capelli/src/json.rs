//! The matrix JSON encoding:
//!
//! ```json
//! {"field": {"type": "prime", "p": 7}, "n": 2, "matrices": [[[1, 0], [0, 1]]]}
//! ```
//!
//! Prime-field entries are integers, reduced mod `p` on load. Rational entries
//! are integers or strings `"a/b"` in lowest terms. A substitution carries an
//! extra `"x_count"`: the first `x_count` matrices are the `x` arguments and
//! the rest are the `y` arguments.

use std::path::Path;

use capelli_core::poly::Substitution;
use capelli_core::{Field, Matrix, PrimeField, Rationals};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum FieldDesc {
    Prime { p: u64 },
    Rational,
}

impl FieldDesc {
    /// Parses the `--field` flag: a prime, or `Q` for the rationals.
    pub fn parse_flag(s: &str) -> Result<Self, CliError> {
        match s {
            "Q" | "q" | "rational" | "rationals" => Ok(FieldDesc::Rational),
            _ => {
                let p: u64 = s.parse().map_err(|_| {
                    CliError::Usage(format!("--field expects a prime or Q, got {s:?}"))
                })?;
                PrimeField::new(p)?;
                Ok(FieldDesc::Prime { p })
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub field: FieldDesc,
    pub n: usize,
    pub matrices: Vec<Vec<Vec<Value>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_count: Option<usize>,
}

/// Fields that have a JSON encoding for their elements.
pub trait JsonField: Field {
    fn desc(&self) -> FieldDesc;
    fn entry_to_json(&self, e: &Self::Elem) -> Value;
    fn entry_from_json(&self, v: &Value) -> Result<Self::Elem, CliError>;
}

impl JsonField for PrimeField {
    fn desc(&self) -> FieldDesc {
        FieldDesc::Prime { p: self.modulus() }
    }

    fn entry_to_json(&self, e: &u64) -> Value {
        Value::from(*e)
    }

    fn entry_from_json(&self, v: &Value) -> Result<u64, CliError> {
        let p = self.modulus();
        if let Some(u) = v.as_u64() {
            return Ok(u % p);
        }
        if let Some(i) = v.as_i64() {
            return Ok(self.reduce_i128(i as i128));
        }
        Err(CliError::Format(format!(
            "prime-field entry must be an integer, got {v}"
        )))
    }
}

impl JsonField for Rationals {
    fn desc(&self) -> FieldDesc {
        FieldDesc::Rational
    }

    fn entry_to_json(&self, e: &BigRational) -> Value {
        if e.is_integer() {
            if let Some(i) = e.numer().to_i64() {
                return Value::from(i);
            }
        }
        Value::from(format_rational(e))
    }

    fn entry_from_json(&self, v: &Value) -> Result<BigRational, CliError> {
        if let Some(i) = v.as_i64() {
            return Ok(BigRational::from_integer(i.into()));
        }
        if let Some(u) = v.as_u64() {
            return Ok(BigRational::from_integer(u.into()));
        }
        let Some(s) = v.as_str() else {
            return Err(CliError::Format(format!(
                "rational entry must be an integer or a string \"a/b\", got {v}"
            )));
        };
        parse_rational(s)
    }
}

/// `"a/b"` with `b > 0` and `gcd(a, b) = 1`, or a plain integer string.
pub fn parse_rational(s: &str) -> Result<BigRational, CliError> {
    let bad = || CliError::Format(format!("malformed rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() || den.is_negative() {
        return Err(CliError::Format(format!(
            "rational {s:?} needs a positive denominator"
        )));
    }
    let value = BigRational::new(num.clone(), den.clone());
    if value.numer() != &num || value.denom() != &den {
        return Err(CliError::Format(format!(
            "rational {s:?} is not in lowest terms"
        )));
    }
    Ok(value)
}

/// Always `"a/b"`, with `b = 1` for integers.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}/1", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn matrix_rows<F: JsonField>(m: &Matrix<F>) -> Value {
    let f = m.field();
    Value::Array(
        (0..m.n())
            .map(|i| Value::Array((0..m.n()).map(|j| f.entry_to_json(m.get(i, j))).collect()))
            .collect(),
    )
}

pub fn encode_matrices<F: JsonField>(field: &F, n: usize, mats: &[Matrix<F>]) -> Value {
    serde_json::json!({
        "field": field.desc(),
        "n": n,
        "matrices": mats.iter().map(matrix_rows).collect::<Vec<_>>(),
    })
}

pub fn encode_substitution<F: JsonField>(subst: &Substitution<F>) -> Value {
    let field_n = subst
        .xs
        .iter()
        .chain(&subst.ys)
        .next()
        .map(|m| (m.field().clone(), m.n()));
    let Some((field, n)) = field_n else {
        return serde_json::json!({"matrices": [], "x_count": 0});
    };
    let all: Vec<Matrix<F>> = subst.xs.iter().chain(&subst.ys).cloned().collect();
    let mut v = encode_matrices(&field, n, &all);
    v["x_count"] = Value::from(subst.xs.len());
    v
}

pub fn parse_file(text: &str) -> Result<MatrixFile, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Format(format!("matrix file: {e}")))
}

pub fn read_file(path: &Path) -> Result<MatrixFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_file(&text)
}

/// Decodes the matrices of `file` over `field`, which must match the field
/// the file declares.
pub fn decode_matrices<F: JsonField>(
    field: &F,
    file: &MatrixFile,
) -> Result<Vec<Matrix<F>>, CliError> {
    if file.field != field.desc() {
        return Err(CliError::Format(format!(
            "matrix file is over {:?} but {:?} was requested",
            file.field,
            field.desc()
        )));
    }
    let n = file.n;
    if n == 0 {
        return Err(CliError::Format("matrix size n must be positive".into()));
    }
    file.matrices
        .iter()
        .enumerate()
        .map(|(k, rows)| {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(CliError::Format(format!(
                    "matrix {} is not {n} x {n}",
                    k + 1
                )));
            }
            let entries = rows
                .iter()
                .flatten()
                .map(|v| field.entry_from_json(v))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Matrix::from_entries(field, n, entries)?)
        })
        .collect()
}

pub fn decode_substitution<F: JsonField>(
    field: &F,
    file: &MatrixFile,
) -> Result<Substitution<F>, CliError> {
    let mut mats = decode_matrices(field, file)?;
    let x_count = file
        .x_count
        .ok_or_else(|| CliError::Format("substitution needs x_count".into()))?;
    if x_count > mats.len() {
        return Err(CliError::Format(format!(
            "x_count {x_count} exceeds {} matrices",
            mats.len()
        )));
    }
    let ys = mats.split_off(x_count);
    Ok(Substitution::new(mats, ys))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_entries() {
        let q = Rationals;
        assert_eq!(
            q.entry_from_json(&Value::from("3/4")).unwrap(),
            BigRational::new(3.into(), 4.into())
        );
        assert_eq!(
            q.entry_from_json(&Value::from(-2)).unwrap(),
            BigRational::from_integer((-2).into())
        );
        assert_eq!(
            q.entry_from_json(&Value::from("-5")).unwrap(),
            BigRational::from_integer((-5).into())
        );
        assert!(q.entry_from_json(&Value::from("2/4")).is_err());
        assert!(q.entry_from_json(&Value::from("1/-2")).is_err());
        assert!(q.entry_from_json(&Value::from("1/0")).is_err());
        assert!(q.entry_from_json(&Value::from(0.5)).is_err());
        assert_eq!(
            q.entry_to_json(&BigRational::new(6.into(), 4.into())),
            Value::from("3/2")
        );
        assert_eq!(
            q.entry_to_json(&BigRational::from_integer(7.into())),
            Value::from(7)
        );
    }

    #[test]
    fn prime_entries_reduce() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.entry_from_json(&Value::from(9)).unwrap(), 2);
        assert_eq!(f.entry_from_json(&Value::from(-1)).unwrap(), 6);
        assert!(f.entry_from_json(&Value::from("3")).is_err());
    }

    #[test]
    fn file_round_trip() {
        let f = PrimeField::new(11).unwrap();
        let a = Matrix::from_i64_rows(&f, &[&[1, 2], &[3, 4]]).unwrap();
        let b = Matrix::identity(&f, 2).unwrap();
        let subst = Substitution::new(vec![a.clone()], vec![b.clone()]);
        let v = encode_substitution(&subst);
        let file: MatrixFile = serde_json::from_value(v).unwrap();
        assert_eq!(file.x_count, Some(1));
        assert_eq!(decode_substitution(&f, &file).unwrap(), subst);
        assert!(decode_matrices(&PrimeField::new(13).unwrap(), &file).is_err());
    }

    #[test]
    fn shape_errors() {
        let f = PrimeField::new(5).unwrap();
        let file = parse_file(r#"{"field":{"type":"prime","p":5},"n":2,"matrices":[[[1,2],[3]]]}"#)
            .unwrap();
        assert!(decode_matrices(&f, &file).is_err());
        assert!(parse_file(r#"{"field":{"type":"octonion"},"n":2,"matrices":[]}"#).is_err());
    }

    #[test]
    fn field_flag() {
        assert_eq!(FieldDesc::parse_flag("Q").unwrap(), FieldDesc::Rational);
        assert_eq!(
            FieldDesc::parse_flag("101").unwrap(),
            FieldDesc::Prime { p: 101 }
        );
        assert!(FieldDesc::parse_flag("100").is_err());
        assert!(FieldDesc::parse_flag("x").is_err());
    }
}
