//! Reconstruction of `h_{q+r}` as a signed sum of products `h_q * h_r`.
//!
//! With `q = 2a`, `r = 2b` and `t = a + b`, group the terms of `h_{2t}` by the
//! sets `A` of `x` indices and `B` of `y` indices used in the first `2a`
//! letters. Each group is a product of a smaller double Capelli polynomial on
//! `(x_A, y_B)` and one on the remaining arguments, times a sign. The exact
//! routing and sign convention are not taken on faith: a small family of
//! candidate rules is checked against the full expansion at `q = r = 2`, and
//! the unique surviving rule is then validated at the requested size.

use alloc::format;
use alloc::vec::Vec;

use super::combinations;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::poly::{evaluate, EvalImpl, PolynomialSpec, Substitution};
use crate::rng::seeded;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignRule {
    /// Parity of the shuffle `A, A^c` times parity of the shuffle `B, B^c`.
    ShuffleParity,
    /// Parity of the `x` shuffle only.
    XShuffleOnly,
    Unsigned,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Routing {
    /// `h_q(x_A, y_B) * h_r(x_{A^c}, y_{B^c})`.
    Complementary,
    /// The second factor reuses the first factor's `y` arguments.
    RepeatY,
    /// The second factor takes the remaining `y`s in the `x` slots and the
    /// remaining `x`s in the `y` slots.
    SwapRoles,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DecompositionRule {
    pub routing: Routing,
    pub sign: SignRule,
}

impl DecompositionRule {
    pub const CANDIDATES: [DecompositionRule; 9] = {
        let r = [Routing::Complementary, Routing::RepeatY, Routing::SwapRoles];
        let s = [
            SignRule::ShuffleParity,
            SignRule::XShuffleOnly,
            SignRule::Unsigned,
        ];
        let mut out = [DecompositionRule {
            routing: Routing::Complementary,
            sign: SignRule::ShuffleParity,
        }; 9];
        let mut k = 0;
        while k < 9 {
            out[k] = DecompositionRule {
                routing: r[k / 3],
                sign: s[k % 3],
            };
            k += 1;
        }
        out
    };
}

/// Parity of the permutation listing `subset` (sorted) followed by its
/// complement (sorted).
fn shuffle_is_odd(subset: &[usize]) -> bool {
    let mut inversions = 0;
    for &a in subset {
        inversions += (0..a).filter(|c| !subset.contains(c)).count();
    }
    inversions % 2 == 1
}

fn complement(subset: &[usize], total: usize) -> Vec<usize> {
    (0..total).filter(|i| !subset.contains(i)).collect()
}

/// Evaluates the right-hand side of the decomposition of `h_{2(a+b)}` into
/// `h_{2a} * h_{2b}` under `rule`.
pub fn reconstruct<F: Field>(
    rule: DecompositionRule,
    a: usize,
    b: usize,
    xs: &[Matrix<F>],
    ys: &[Matrix<F>],
) -> Result<Matrix<F>> {
    let t = a + b;
    if xs.len() != t || ys.len() != t || a == 0 || b == 0 {
        return Err(Error::InvalidArgument(format!(
            "decomposition needs {t} x and {t} y arguments with positive halves"
        )));
    }
    let first = PolynomialSpec::double_capelli(2 * a)?;
    let second = PolynomialSpec::double_capelli(2 * b)?;
    let pick = |idx: &[usize], from: &[Matrix<F>]| {
        idx.iter().map(|&i| from[i].clone()).collect::<Vec<_>>()
    };
    let mut acc = Matrix::zeros(xs[0].field(), xs[0].n())?;
    for set_a in combinations(t, a) {
        for set_b in combinations(t, a) {
            let (rest_a, rest_b) = (complement(&set_a, t), complement(&set_b, t));
            let left = evaluate(
                &first,
                &Substitution::new(pick(&set_a, xs), pick(&set_b, ys)),
                EvalImpl::SubsetDp,
            )?;
            let right_subst = match rule.routing {
                Routing::Complementary => Substitution::new(pick(&rest_a, xs), pick(&rest_b, ys)),
                Routing::RepeatY => {
                    let mut reuse = pick(&set_b, ys);
                    reuse.resize(b, ys[rest_b[0]].clone());
                    Substitution::new(pick(&rest_a, xs), reuse)
                }
                Routing::SwapRoles => Substitution::new(pick(&rest_b, ys), pick(&rest_a, xs)),
            };
            let right = evaluate(&second, &right_subst, EvalImpl::SubsetDp)?;
            let negative = match rule.sign {
                SignRule::ShuffleParity => shuffle_is_odd(&set_a) != shuffle_is_odd(&set_b),
                SignRule::XShuffleOnly => shuffle_is_odd(&set_a),
                SignRule::Unsigned => false,
            };
            let term = left.mul(&right)?;
            acc = if negative {
                acc.sub(&term)?
            } else {
                acc.add(&term)?
            };
        }
    }
    Ok(acc)
}

type Tuple<F> = (Vec<Matrix<F>>, Vec<Matrix<F>>);

fn random_tuple<F: Field>(
    field: &F,
    n: usize,
    t: usize,
    seed: u64,
    trial: u64,
) -> Result<Tuple<F>> {
    let mut rng = seeded(seed, trial);
    let xs = (0..t)
        .map(|_| Matrix::random(field, n, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    let ys = (0..t)
        .map(|_| Matrix::random(field, n, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    Ok((xs, ys))
}

fn matches_oracle<F: Field>(
    rule: DecompositionRule,
    a: usize,
    b: usize,
    field: &F,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<bool> {
    let full = PolynomialSpec::double_capelli(2 * (a + b))?;
    for trial in 0..trials {
        let (xs, ys) = random_tuple(field, n, a + b, seed, trial as u64)?;
        let direct = evaluate(
            &full,
            &Substitution::new(xs.clone(), ys.clone()),
            EvalImpl::Naive,
        )?;
        if reconstruct(rule, a, b, &xs, &ys)? != direct {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Finds the unique candidate rule that reproduces `h_4` from `h_2 * h_2` on
/// random `n x n` tuples.
pub fn calibrate_decomposition<F: Field>(
    field: &F,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<DecompositionRule> {
    let mut survivors = Vec::new();
    for rule in DecompositionRule::CANDIDATES {
        if matches_oracle(rule, 1, 1, field, n, trials, seed)? {
            survivors.push(rule);
        }
    }
    match survivors.as_slice() {
        [rule] => Ok(*rule),
        [] => Err(Error::Inconsistent(
            "no decomposition rule matches h_4".into(),
        )),
        many => Err(Error::Inconsistent(format!(
            "{} decomposition rules match h_4; calibration is ambiguous",
            many.len()
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionReport {
    pub q: usize,
    pub r: usize,
    pub n: usize,
    pub trials: usize,
    pub rule: DecompositionRule,
    /// Number of `(A, B)` coset pairs in the signed sum.
    pub terms: u128,
    pub holds: bool,
}

/// Checks `h_{q+r} = sum +- h_q h_r` for even `q`, `r` on `trials` random
/// `n x n` tuples, after calibrating the rule at `q = r = 2`.
pub fn verify_decomposition<F: Field>(
    field: &F,
    q: usize,
    r: usize,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<DecompositionReport> {
    if q == 0 || r == 0 || q % 2 == 1 || r % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "q = {q} and r = {r} must be positive and even"
        )));
    }
    if q + r > 12 {
        return Err(Error::Infeasible {
            cost: crate::poly::factorial((q + r) / 2).pow(2),
            cap: crate::poly::factorial(6).pow(2),
        });
    }
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let rule = calibrate_decomposition(field, n, trials.min(5), seed ^ 0xca1b)?;
    let (a, b) = (q / 2, r / 2);
    let holds = matches_oracle(rule, a, b, field, n, trials, seed)?;
    let pairs = crate::poly::binomial(a + b, a);
    Ok(DecompositionReport {
        q,
        r,
        n,
        trials,
        rule,
        terms: pairs * pairs,
        holds,
    })
}
