//! The multilinear polynomial families and their evaluation on matrices.
//!
//! Four families are supported:
//!
//! * the standard polynomial `s_t`, alternating in `t` variables;
//! * Capelli polynomials `c_k`, alternating in the `x` block with the `y`
//!   block interleaved in fixed order;
//! * double Capelli polynomials `h_k`, alternating in both blocks,
//!   interleaved `x y x y ...`;
//! * Domokos polynomials, where alternating runs of `x` variables are
//!   interleaved with a permuted family of monomials in the `y` variables.
//!
//! Every family has a naive evaluator that walks the full signed term
//! expansion. The first three also have subset dynamic-programming
//! evaluators; the naive path is their correctness oracle.

mod dp;
mod expand;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

pub use expand::{expand_monomials, for_each_term, Term, Var, MAX_TERMS};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::{common_size, Matrix};

/// Which polynomial to evaluate. Indices inside `words` are 0-based `y`
/// positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PolynomialSpec {
    Standard {
        t: usize,
    },
    Capelli {
        degree: usize,
    },
    DoubleCapelli {
        degree: usize,
    },
    Domokos {
        d: usize,
        m: usize,
        words: Vec<Vec<usize>>,
    },
}

/// Evaluation strategy. Domokos polynomials are always expanded naively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EvalImpl {
    Naive,
    SubsetDp,
}

impl EvalImpl {
    pub fn name(self) -> &'static str {
        match self {
            EvalImpl::Naive => "naive",
            EvalImpl::SubsetDp => "subset_dp",
        }
    }
}

impl FromStr for EvalImpl {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(EvalImpl::Naive),
            "subset_dp" | "dp" => Ok(EvalImpl::SubsetDp),
            _ => Err(Error::InvalidArgument(format!("unknown evaluator `{s}`"))),
        }
    }
}

impl PolynomialSpec {
    pub fn standard(t: usize) -> Result<Self> {
        let s = PolynomialSpec::Standard { t };
        s.validate()?;
        Ok(s)
    }

    pub fn capelli(degree: usize) -> Result<Self> {
        let s = PolynomialSpec::Capelli { degree };
        s.validate()?;
        Ok(s)
    }

    pub fn double_capelli(degree: usize) -> Result<Self> {
        let s = PolynomialSpec::DoubleCapelli { degree };
        s.validate()?;
        Ok(s)
    }

    pub fn domokos(d: usize, m: usize, words: Vec<Vec<usize>>) -> Result<Self> {
        let s = PolynomialSpec::Domokos { d, m, words };
        s.validate()?;
        Ok(s)
    }

    /// The Domokos polynomial with single-letter words `y_1, ..., y_m`.
    pub fn domokos_letters(d: usize, m: usize) -> Result<Self> {
        Self::domokos(d, m, (0..m).map(|j| alloc::vec![j]).collect())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidPolynomial(msg));
        match self {
            PolynomialSpec::Standard { t: 0 } => bad("standard polynomial needs t >= 1".into()),
            PolynomialSpec::Capelli { degree: 0 } | PolynomialSpec::DoubleCapelli { degree: 0 } => {
                bad("total degree must be >= 1".into())
            }
            PolynomialSpec::Domokos { d, m, words } => {
                let mut seen = alloc::vec![false; *m];
                for w in words {
                    if w.is_empty() {
                        return bad("empty word in partition".into());
                    }
                    for &y in w {
                        if y >= *m || core::mem::replace(&mut seen[y], true) {
                            return bad(format!("words must use each of y1..y{m} exactly once"));
                        }
                    }
                }
                if seen.iter().any(|s| !s) {
                    return bad(format!("words must use each of y1..y{m} exactly once"));
                }
                if *d < words.len() + 1 {
                    return bad(format!(
                        "d = {d} is too small to separate {} words",
                        words.len()
                    ));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Number of `x` and `y` arguments.
    pub fn arity(&self) -> (usize, usize) {
        match *self {
            PolynomialSpec::Standard { t } => (t, 0),
            PolynomialSpec::Capelli { degree } | PolynomialSpec::DoubleCapelli { degree } => {
                let t = degree.div_ceil(2);
                (t, degree / 2)
            }
            PolynomialSpec::Domokos { d, m, .. } => (d, m),
        }
    }

    pub fn total_degree(&self) -> usize {
        let (a, b) = self.arity();
        a + b
    }

    /// Whether the polynomial alternates in its `y` block. Every family
    /// alternates in `x`.
    pub fn y_alternating(&self) -> bool {
        match self {
            PolynomialSpec::Standard { .. } | PolynomialSpec::DoubleCapelli { .. } => true,
            PolynomialSpec::Capelli { degree } => *degree < 4,
            PolynomialSpec::Domokos { words, .. } => words.iter().all(|w| w.len() == 1),
        }
    }

    /// Number of signed terms in the full expansion.
    pub fn term_count(&self) -> u128 {
        let (a, b) = self.arity();
        match self {
            PolynomialSpec::Standard { .. } | PolynomialSpec::Capelli { .. } => factorial(a),
            PolynomialSpec::DoubleCapelli { .. } => factorial(a).saturating_mul(factorial(b)),
            PolynomialSpec::Domokos { d, words, .. } => {
                let u = words.len();
                factorial(*d)
                    .saturating_mul(factorial(u))
                    .saturating_mul(binomial(d - 1, u))
            }
        }
    }

    /// Estimated matrix multiplications for one evaluation with `imp`.
    pub fn eval_cost(&self, imp: EvalImpl) -> u128 {
        let (a, b) = self.arity();
        let len = (a + b).max(1) as u128;
        match (self, imp) {
            (PolynomialSpec::Domokos { .. }, _) | (_, EvalImpl::Naive) => {
                self.term_count().saturating_mul(len)
            }
            (PolynomialSpec::Standard { .. }, EvalImpl::SubsetDp)
            | (PolynomialSpec::Capelli { .. }, EvalImpl::SubsetDp) => {
                (1u128 << a.min(100)).saturating_mul(a as u128 + 1)
            }
            (PolynomialSpec::DoubleCapelli { .. }, EvalImpl::SubsetDp) => {
                let states: u128 = (0..=a)
                    .map(|k| {
                        binomial(a, k)
                            * (binomial(b, k) + if k > 0 { binomial(b, k - 1) } else { 0 })
                    })
                    .sum();
                states.saturating_mul(a as u128 + 1)
            }
        }
    }

    /// The double Capelli polynomial of total degree `degree`, the usual test
    /// polynomial.
    pub fn h(degree: usize) -> Self {
        PolynomialSpec::DoubleCapelli { degree }
    }
}

impl fmt::Display for PolynomialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolynomialSpec::Standard { t } => write!(f, "s:{t}"),
            PolynomialSpec::Capelli { degree } => write!(f, "c:{degree}"),
            PolynomialSpec::DoubleCapelli { degree } => write!(f, "h:{degree}"),
            PolynomialSpec::Domokos { d, m, words } => {
                write!(f, "domokos:d={d},m={m},words=")?;
                for (k, w) in words.iter().enumerate() {
                    if k > 0 {
                        f.write_str("|")?;
                    }
                    for y in w {
                        write!(f, "y{}", y + 1)?;
                    }
                }
                Ok(())
            }
        }
    }
}

/// Parses `s:<t>`, `c:<deg>`, `h:<deg>` and
/// `domokos:d=<d>,m=<m>,words=<w1>|<w2>|...` where each word is a run of
/// `y<k>` letters such as `y1y3`. An empty `words=` means no words.
impl FromStr for PolynomialSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidPolynomial(format!("cannot parse `{s}`"));
        let (family, rest) = s.split_once(':').ok_or_else(bad)?;
        let num = |v: &str| v.trim().parse::<usize>().map_err(|_| bad());
        match family.trim() {
            "s" => Self::standard(num(rest)?),
            "c" => Self::capelli(num(rest)?),
            "h" => Self::double_capelli(num(rest)?),
            "domokos" => {
                let (mut d, mut m, mut words) = (None, None, None);
                // `words` is last and may not contain commas.
                for field in rest.split(',') {
                    let (key, value) = field.split_once('=').ok_or_else(bad)?;
                    match key.trim() {
                        "d" if d.is_none() => d = Some(num(value)?),
                        "m" if m.is_none() => m = Some(num(value)?),
                        "words" if words.is_none() => {
                            words = Some(parse_words(value).ok_or_else(bad)?)
                        }
                        _ => return Err(bad()),
                    }
                }
                Self::domokos(
                    d.ok_or_else(bad)?,
                    m.ok_or_else(bad)?,
                    words.ok_or_else(bad)?,
                )
            }
            _ => Err(bad()),
        }
    }
}

fn parse_words(s: &str) -> Option<Vec<Vec<usize>>> {
    let s = s.trim();
    if s.is_empty() {
        return Some(Vec::new());
    }
    s.split('|')
        .map(|w| {
            let mut letters = Vec::new();
            let mut rest = w.trim();
            if rest.is_empty() {
                return None;
            }
            while !rest.is_empty() {
                rest = rest.strip_prefix('y')?;
                let end = rest
                    .find(|c: char| !c.is_ascii_digit())
                    .unwrap_or(rest.len());
                let k: usize = rest[..end].parse().ok()?;
                letters.push(k.checked_sub(1)?);
                rest = &rest[end..];
            }
            Some(letters)
        })
        .collect()
}

pub(crate) fn factorial(k: usize) -> u128 {
    (1..=k as u128).fold(1u128, |acc, v| acc.saturating_mul(v))
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Argument tuple for a polynomial: the `x` block and the `y` block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution<F: Field> {
    pub xs: Vec<Matrix<F>>,
    pub ys: Vec<Matrix<F>>,
}

impl<F: Field> Substitution<F> {
    pub fn new(xs: Vec<Matrix<F>>, ys: Vec<Matrix<F>>) -> Self {
        Self { xs, ys }
    }

    /// Shared side length, or `None` for the empty substitution.
    pub fn size(&self) -> Result<Option<usize>> {
        let all: Vec<&Matrix<F>> = self.xs.iter().chain(&self.ys).collect();
        common_size(&all)
    }

    fn check(&self, spec: &PolynomialSpec) -> Result<usize> {
        spec.validate()?;
        let (want_x, want_y) = spec.arity();
        if self.xs.len() != want_x || self.ys.len() != want_y {
            return Err(Error::Arity {
                spec: spec.to_string(),
                want_x,
                want_y,
                got_x: self.xs.len(),
                got_y: self.ys.len(),
            });
        }
        Ok(self
            .size()?
            .expect("every family has at least one x argument"))
    }

    pub fn get(&self, v: Var) -> &Matrix<F> {
        match v {
            Var::X(i) => &self.xs[i],
            Var::Y(j) => &self.ys[j],
        }
    }
}

/// Evaluates `spec` at `subst`.
pub fn evaluate<F: Field>(
    spec: &PolynomialSpec,
    subst: &Substitution<F>,
    imp: EvalImpl,
) -> Result<Matrix<F>> {
    subst.check(spec)?;
    let (xs, ys) = (&subst.xs, &subst.ys);
    match (spec, imp) {
        (PolynomialSpec::Domokos { .. }, _) | (_, EvalImpl::Naive) => {
            expand::eval_naive(spec, subst)
        }
        (PolynomialSpec::Standard { .. }, EvalImpl::SubsetDp) => Ok(dp::standard(xs)),
        (PolynomialSpec::Capelli { .. }, EvalImpl::SubsetDp) => Ok(dp::capelli(xs, ys)),
        (PolynomialSpec::DoubleCapelli { .. }, EvalImpl::SubsetDp) => {
            Ok(dp::double_capelli(xs, ys))
        }
    }
}

/// Evaluates with the fastest available evaluator.
pub fn eval<F: Field>(
    spec: &PolynomialSpec,
    xs: &[Matrix<F>],
    ys: &[Matrix<F>],
) -> Result<Matrix<F>> {
    evaluate(
        spec,
        &Substitution::new(xs.to_vec(), ys.to_vec()),
        EvalImpl::SubsetDp,
    )
}

pub fn eval_standard<F: Field>(t: usize, xs: &[Matrix<F>], imp: EvalImpl) -> Result<Matrix<F>> {
    evaluate(
        &PolynomialSpec::standard(t)?,
        &Substitution::new(xs.to_vec(), Vec::new()),
        imp,
    )
}

pub fn eval_capelli<F: Field>(
    degree: usize,
    xs: &[Matrix<F>],
    ys: &[Matrix<F>],
    imp: EvalImpl,
) -> Result<Matrix<F>> {
    evaluate(
        &PolynomialSpec::capelli(degree)?,
        &Substitution::new(xs.to_vec(), ys.to_vec()),
        imp,
    )
}

pub fn eval_double_capelli<F: Field>(
    degree: usize,
    xs: &[Matrix<F>],
    ys: &[Matrix<F>],
    imp: EvalImpl,
) -> Result<Matrix<F>> {
    evaluate(
        &PolynomialSpec::double_capelli(degree)?,
        &Substitution::new(xs.to_vec(), ys.to_vec()),
        imp,
    )
}

pub fn eval_domokos<F: Field>(
    spec: &PolynomialSpec,
    xs: &[Matrix<F>],
    ys: &[Matrix<F>],
) -> Result<Matrix<F>> {
    if !matches!(spec, PolynomialSpec::Domokos { .. }) {
        return Err(Error::InvalidPolynomial(format!(
            "{spec} is not a Domokos polynomial"
        )));
    }
    evaluate(
        spec,
        &Substitution::new(xs.to_vec(), ys.to_vec()),
        EvalImpl::Naive,
    )
}
