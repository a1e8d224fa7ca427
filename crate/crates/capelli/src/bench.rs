//! Wall-clock comparison of the evaluators.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;
use std::time::Instant;

use capelli_core::poly::{evaluate, MAX_TERMS};
use capelli_core::rng::seeded;
use capelli_core::{EvalImpl, Field, Matrix, PolynomialSpec, Substitution};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Standard,
    Capelli,
    DoubleCapelli,
}

impl Family {
    /// `s_t`, `c_{2t}` or `h_{2t}`.
    pub fn spec(self, t: usize) -> Result<PolynomialSpec, CliError> {
        Ok(match self {
            Family::Standard => PolynomialSpec::standard(t)?,
            Family::Capelli => PolynomialSpec::capelli(2 * t)?,
            Family::DoubleCapelli => PolynomialSpec::double_capelli(2 * t)?,
        })
    }
}

impl FromStr for Family {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "s" => Ok(Family::Standard),
            "c" => Ok(Family::Capelli),
            "h" => Ok(Family::DoubleCapelli),
            _ => Err(CliError::Usage(format!(
                "--family expects s, c or h, got {s:?}"
            ))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Standard => "s",
            Family::Capelli => "c",
            Family::DoubleCapelli => "h",
        })
    }
}

/// `a..b` (inclusive) or a single `t`.
pub fn parse_t_range(s: &str) -> Result<RangeInclusive<usize>, CliError> {
    let bad = || CliError::Usage(format!("--t expects a..b or a single value, got {s:?}"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?),
        None => {
            let t = s.parse().map_err(|_| bad())?;
            (t, t)
        }
    };
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub family: Family,
    pub t: usize,
    pub polynomial: String,
    pub imp: EvalImpl,
    pub terms: u128,
    pub median_ms: f64,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let k = xs.len();
    if k % 2 == 1 {
        xs[k / 2]
    } else {
        (xs[k / 2 - 1] + xs[k / 2]) / 2.0
    }
}

fn random_tuple<F: Field>(
    field: &F,
    spec: &PolynomialSpec,
    n: usize,
    seed: u64,
    t: usize,
) -> Result<Substitution<F>, CliError> {
    let (a, b) = spec.arity();
    let mut rng = seeded(seed, t as u64);
    let mut draw = || -> Result<Matrix<F>, CliError> {
        Ok(match field.order() {
            Some(_) => Matrix::random(field, n, &mut rng)?,
            None => Matrix::random_small(field, n, 3, &mut rng)?,
        })
    };
    let xs = (0..a).map(|_| draw()).collect::<Result<Vec<_>, _>>()?;
    let ys = (0..b).map(|_| draw()).collect::<Result<Vec<_>, _>>()?;
    Ok(Substitution::new(xs, ys))
}

/// Median wall-clock time of `reps` evaluations per `(t, impl)`, on one
/// random tuple per `t`. All implementations must agree on that tuple before
/// any timing starts; the naive evaluator is refused beyond `MAX_TERMS`.
pub fn bench_eval<F: Field>(
    field: &F,
    family: Family,
    ts: RangeInclusive<usize>,
    impls: &[EvalImpl],
    n: usize,
    reps: usize,
    seed: u64,
) -> Result<Vec<BenchRow>, CliError> {
    if impls.is_empty() || reps == 0 || n == 0 {
        return Err(CliError::Usage(
            "bench needs at least one impl, one rep and n >= 1".into(),
        ));
    }
    for t in ts.clone() {
        let spec = family.spec(t)?;
        if impls.contains(&EvalImpl::Naive) && spec.term_count() > MAX_TERMS {
            return Err(capelli_core::Error::TooManyTerms {
                count: spec.term_count(),
                limit: MAX_TERMS,
            }
            .into());
        }
    }
    let mut rows = Vec::new();
    for t in ts {
        let spec = family.spec(t)?;
        let subst = random_tuple(field, &spec, n, seed, t)?;
        let mut reference: Option<(EvalImpl, Matrix<F>)> = None;
        for &imp in impls {
            let value = evaluate(&spec, &subst, imp)?;
            match &reference {
                None => reference = Some((imp, value)),
                Some((first, expected)) if *expected != value => {
                    return Err(CliError::Inconsistent(format!(
                        "{spec}: {} and {} disagree at t = {t}",
                        first.name(),
                        imp.name()
                    )));
                }
                Some(_) => {}
            }
        }
        for &imp in impls {
            let times = (0..reps)
                .map(|_| {
                    let start = Instant::now();
                    evaluate(&spec, &subst, imp).map(|_| start.elapsed().as_secs_f64() * 1e3)
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(BenchRow {
                family,
                t,
                polynomial: spec.to_string(),
                imp,
                terms: spec.term_count(),
                median_ms: median(times),
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use capelli_core::{PrimeField, Rationals};

    #[test]
    fn ranges() {
        assert_eq!(parse_t_range("2..5").unwrap(), 2..=5);
        assert_eq!(parse_t_range("4").unwrap(), 4..=4);
        assert!(parse_t_range("5..2").is_err());
        assert!(parse_t_range("0..2").is_err());
        assert!(parse_t_range("a..b").is_err());
    }

    #[test]
    fn rows_per_impl() {
        let f = PrimeField::new(1_000_003).unwrap();
        let rows = bench_eval(
            &f,
            Family::DoubleCapelli,
            2..=3,
            &[EvalImpl::Naive, EvalImpl::SubsetDp],
            2,
            3,
            1,
        )
        .unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].polynomial, "h:4");
        assert_eq!(rows[3].imp, EvalImpl::SubsetDp);
        let q = bench_eval(
            &Rationals,
            Family::Capelli,
            3..=3,
            &[EvalImpl::Naive, EvalImpl::SubsetDp],
            2,
            1,
            1,
        )
        .unwrap();
        assert_eq!(q.len(), 2);
    }

    #[test]
    fn naive_guard() {
        let f = PrimeField::new(101).unwrap();
        let err = bench_eval(&f, Family::Standard, 12..=12, &[EvalImpl::Naive], 2, 1, 0);
        assert!(matches!(
            err,
            Err(CliError::Core(capelli_core::Error::TooManyTerms { .. }))
        ));
        assert!(bench_eval(&f, Family::Standard, 8..=8, &[EvalImpl::SubsetDp], 2, 1, 0).is_ok());
    }
}
