//! JSON reports and the exit codes derived from them.

use capelli_core::detect::{CrossValidationReport, DetectionVerdict, Outcome};
use capelli_core::lab::{DecompositionReport, IdentityVerdict, Witness};
use capelli_core::AlgebraBasis;
use serde_json::{json, Map, Value};

use crate::bench::BenchRow;
use crate::json::{encode_matrices, encode_substitution, format_rational, matrix_rows, JsonField};

fn witness_fields<F: JsonField>(obj: &mut Map<String, Value>, w: &Witness<F>) {
    obj.insert("witness".into(), encode_substitution(&w.subst));
    obj.insert("value".into(), matrix_rows(&w.value));
}

pub fn identity<F: JsonField>(verdict: &IdentityVerdict<F>) -> Value {
    let mut obj = Map::new();
    obj.insert("status".into(), verdict.status().into());
    match verdict {
        IdentityVerdict::IdentityExhaustive { combinations } => {
            obj.insert("combinations".into(), json!(*combinations as u64));
        }
        IdentityVerdict::IdentityProbable {
            trials,
            error_bound,
        } => {
            obj.insert("trials".into(), json!(trials));
            obj.insert("error_bound".into(), format_rational(error_bound).into());
        }
        IdentityVerdict::NotIdentity(w) => witness_fields(&mut obj, w),
    }
    Value::Object(obj)
}

pub fn detection<F: JsonField>(verdict: &DetectionVerdict<F>) -> Value {
    let mut obj = Map::new();
    obj.insert("outcome".into(), verdict.outcome.kind().into());
    match &verdict.outcome {
        Outcome::Full(w) => witness_fields(&mut obj, w),
        Outcome::ProperCertified { dim } => {
            obj.insert("dim".into(), json!(dim));
        }
        Outcome::ProperLikely {
            trials,
            error_bound,
        } => {
            obj.insert("trials".into(), json!(trials));
            obj.insert("error_bound".into(), format_rational(error_bound).into());
        }
    }
    obj.insert("polynomial".into(), verdict.polynomial.to_string().into());
    obj.insert("closure_dim".into(), json!(verdict.closure_dim));
    obj.insert("target_dim".into(), json!(verdict.target_dim));
    let timing: Map<String, Value> = verdict
        .timing_ms
        .iter()
        .map(|(k, v)| ((*k).into(), json!(v)))
        .collect();
    obj.insert("timing_ms".into(), Value::Object(timing));
    Value::Object(obj)
}

pub fn closure<F: JsonField>(alg: &AlgebraBasis<F>) -> Value {
    json!({
        "dim": alg.dim(),
        "n": alg.n(),
        "unital": alg.unital(),
        "full": alg.is_full(),
        "basis": encode_matrices(alg.field(), alg.n(), alg.basis()),
    })
}

pub fn decomposition(r: &DecompositionReport) -> Value {
    json!({
        "q": r.q,
        "r": r.r,
        "n": r.n,
        "trials": r.trials,
        "rule": {
            "routing": format!("{:?}", r.rule.routing),
            "sign": format!("{:?}", r.rule.sign),
        },
        "terms": r.terms as u64,
        "holds": r.holds,
    })
}

pub fn bench(rows: &[BenchRow]) -> Value {
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "family": r.family.to_string(),
                "t": r.t,
                "polynomial": r.polynomial,
                "impl": r.imp.name(),
                "terms": r.terms as f64,
                "median_ms": r.median_ms,
            })
        })
        .collect();
    json!({ "rows": rows })
}

pub fn cross_validation<F: JsonField>(r: &CrossValidationReport<F>) -> Value {
    let a = r.agreement;
    let failures: Vec<Value> = r
        .hard_disagreements()
        .map(|c| {
            json!({
                "case": c.index,
                "shape": c.shape.name(),
                "dim": c.algebra.dim(),
                "message": c.failure,
                "generators": encode_matrices(c.algebra.field(), c.algebra.n(), &c.generators),
            })
        })
        .collect();
    json!({
        "n": r.n,
        "seed": r.seed,
        "cases": r.cases.len(),
        "proper_cases": r.proper_algebras().count(),
        "agreement": {
            "full/full": a.full_full,
            "full/proper_certified": a.full_certified,
            "proper_likely/full": a.likely_full,
            "proper_likely/proper_certified": a.likely_certified,
        },
        "hard_disagreements": failures,
    })
}

/// Exit code of a finished command, read off its report: 1 when something
/// nonvanishing or full was found, 3 for a contradiction, 0 otherwise.
pub fn exit_code(report: &Value) -> i32 {
    let s = |k: &str| report.get(k).and_then(Value::as_str);
    match s("command").unwrap_or_default() {
        "verify-identity" => i32::from(s("status") == Some("not_identity")),
        "witness" => i32::from(report.get("witness").is_some()),
        "detect" => i32::from(s("outcome") == Some("full")),
        "closure" => i32::from(report.get("full").and_then(Value::as_bool) == Some(true)),
        "decompose" => {
            if report.get("holds").and_then(Value::as_bool) == Some(true) {
                0
            } else {
                3
            }
        }
        "cross-validate" => {
            let hard = report
                .get("hard_disagreements")
                .and_then(Value::as_array)
                .map_or(0, Vec::len);
            if hard > 0 {
                3
            } else {
                0
            }
        }
        _ => 0,
    }
}
