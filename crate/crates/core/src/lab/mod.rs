//! Deciding whether a polynomial is an identity on a subalgebra, and the
//! canonical nonvanishing substitutions.

mod decompose;
mod witness;

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

pub use decompose::{
    calibrate_decomposition, verify_decomposition, DecompositionReport, DecompositionRule, Routing,
    SignRule,
};
pub use witness::{capelli_staircase, double_staircase, e12_remark_tuple};

use crate::algebra::{random_element, AlgebraBasis};
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::field::Field;
use crate::matrix::Matrix;
use crate::poly::{evaluate, EvalImpl, PolynomialSpec, Substitution};
use crate::rng::seeded;

/// Default bound on `tuples x per-evaluation cost` for exhaustive scans.
pub const DEFAULT_EXHAUSTIVE_CAP: u128 = 10_000_000;

/// A substitution together with the nonzero value it produces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness<F: Field> {
    pub subst: Substitution<F>,
    pub value: Matrix<F>,
}

impl<F: Field> Witness<F> {
    /// Re-evaluates and checks the stored value.
    pub fn verify(&self, spec: &PolynomialSpec) -> Result<bool> {
        let value = evaluate(spec, &self.subst, EvalImpl::SubsetDp)?;
        Ok(!value.is_zero() && value == self.value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdentityVerdict<F: Field> {
    /// Every basis tuple (up to alternation) evaluates to zero.
    IdentityExhaustive {
        combinations: u128,
    },
    /// No random trial produced a nonzero value; the probability of this
    /// happening for a non-identity is at most `error_bound`.
    IdentityProbable {
        trials: usize,
        error_bound: BigRational,
    },
    NotIdentity(Witness<F>),
}

impl<F: Field> IdentityVerdict<F> {
    pub fn status(&self) -> &'static str {
        match self {
            IdentityVerdict::IdentityExhaustive { .. } => "identity_exhaustive",
            IdentityVerdict::IdentityProbable { .. } => "identity_probable",
            IdentityVerdict::NotIdentity(_) => "not_identity",
        }
    }

    pub fn is_identity(&self) -> bool {
        !matches!(self, IdentityVerdict::NotIdentity(_))
    }

    pub fn witness(&self) -> Option<&Witness<F>> {
        match self {
            IdentityVerdict::NotIdentity(w) => Some(w),
            _ => None,
        }
    }
}

/// `min(1, (degree / order)^trials)`, the Schwartz-Zippel failure bound.
pub fn schwartz_zippel_bound(degree: usize, order: u64, trials: usize) -> BigRational {
    let ratio = BigRational::new(BigInt::from(degree), BigInt::from(order));
    if ratio >= BigRational::one() {
        return BigRational::one();
    }
    num_traits::pow(ratio, trials)
}

/// Index tuples for one argument block: strictly increasing combinations
/// when the block alternates, all tuples otherwise.
enum BlockTuples {
    Combinations(Vec<Vec<usize>>),
    Product { base: usize, len: usize },
}

impl BlockTuples {
    fn new(alternating: bool, base: usize, len: usize) -> Result<Self> {
        if alternating {
            if crate::poly::binomial(base, len) > DEFAULT_EXHAUSTIVE_CAP * 10 {
                return Err(Error::Infeasible {
                    cost: crate::poly::binomial(base, len),
                    cap: DEFAULT_EXHAUSTIVE_CAP,
                });
            }
            Ok(BlockTuples::Combinations(combinations(base, len)))
        } else {
            Ok(BlockTuples::Product { base, len })
        }
    }

    fn count(&self) -> u128 {
        match self {
            BlockTuples::Combinations(c) => c.len() as u128,
            BlockTuples::Product { base, len } => (*base as u128).saturating_pow(*len as u32),
        }
    }

    fn get(&self, mut index: usize) -> Vec<usize> {
        match self {
            BlockTuples::Combinations(c) => c[index].clone(),
            BlockTuples::Product { base, len } => {
                let mut out = alloc::vec![0; *len];
                for slot in out.iter_mut().rev() {
                    *slot = index % base;
                    index /= base;
                }
                out
            }
        }
    }
}

/// Strictly increasing `len`-subsets of `0..base`, lexicographic.
pub fn combinations(base: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if len > base {
        return out;
    }
    let mut cur: Vec<usize> = (0..len).collect();
    loop {
        out.push(cur.clone());
        let Some(pos) = (0..len).rev().find(|&p| cur[p] < base - len + p) else {
            return out;
        };
        cur[pos] += 1;
        for q in pos + 1..len {
            cur[q] = cur[q - 1] + 1;
        }
    }
}

fn check_field_and_size<F: Field>(spec: &PolynomialSpec, algebra: &AlgebraBasis<F>) -> Result<()> {
    spec.validate()?;
    if algebra.n() == 0 {
        return Err(Error::ZeroSize);
    }
    Ok(())
}

/// Decides `spec` on `algebra` by evaluating on basis tuples. Multilinearity
/// reduces arbitrary arguments to basis elements, and alternation reduces
/// each alternating block to strictly increasing index combinations. Tuples
/// are visited with the `x` block outer and the `y` block inner; the first
/// nonzero tuple in that order is the witness.
pub fn is_identity_exhaustive<F: Field, E: Executor>(
    spec: &PolynomialSpec,
    algebra: &AlgebraBasis<F>,
    cap: u128,
    exec: &E,
) -> Result<IdentityVerdict<F>> {
    check_field_and_size(spec, algebra)?;
    let (a, b) = spec.arity();
    let k = algebra.dim();
    let xt = BlockTuples::new(true, k, a)?;
    let yt = BlockTuples::new(spec.y_alternating(), k, b)?;
    let (nx, ny) = (xt.count(), yt.count());
    let total = nx.saturating_mul(ny);
    let cost = total.saturating_mul(spec.eval_cost(EvalImpl::SubsetDp));
    if cost > cap {
        return Err(Error::Infeasible { cost, cap });
    }
    let basis = algebra.basis();
    let ny = ny as usize;
    let hit = exec.find_first(total as usize, |idx| {
        let xs = xt
            .get(idx / ny)
            .into_iter()
            .map(|i| basis[i].clone())
            .collect();
        let ys = yt
            .get(idx % ny)
            .into_iter()
            .map(|i| basis[i].clone())
            .collect();
        let subst = Substitution::new(xs, ys);
        match evaluate(spec, &subst, EvalImpl::SubsetDp) {
            Ok(value) if value.is_zero() => None,
            Ok(value) => Some(Ok(Witness { subst, value })),
            Err(e) => Some(Err(e)),
        }
    });
    match hit {
        None => Ok(IdentityVerdict::IdentityExhaustive {
            combinations: total,
        }),
        Some((_, w)) => Ok(IdentityVerdict::NotIdentity(w?)),
    }
}

/// Random substitution for trial `trial`: every argument a uniform random
/// element of the algebra.
pub fn random_substitution<F: Field>(
    spec: &PolynomialSpec,
    algebra: &AlgebraBasis<F>,
    seed: u64,
    trial: u64,
) -> Result<Substitution<F>> {
    let (a, b) = spec.arity();
    let mut rng = seeded(seed, trial);
    let xs = (0..a)
        .map(|_| random_element(algebra, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    let ys = (0..b)
        .map(|_| random_element(algebra, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    Ok(Substitution::new(xs, ys))
}

/// Schwartz-Zippel testing: each trial evaluates `spec` at uniformly random
/// elements of the algebra. Trial `i` draws from stream `i` of `seed`.
pub fn is_identity_randomized<F: Field, E: Executor>(
    spec: &PolynomialSpec,
    algebra: &AlgebraBasis<F>,
    trials: usize,
    seed: u64,
    exec: &E,
) -> Result<IdentityVerdict<F>> {
    check_field_and_size(spec, algebra)?;
    let Some(order) = algebra.field().order() else {
        return Err(Error::NotSampleable(algebra.field().domain()));
    };
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let hit = exec.find_first(trials, |i| {
        let attempt = random_substitution(spec, algebra, seed, i as u64).and_then(|subst| {
            let value = evaluate(spec, &subst, EvalImpl::SubsetDp)?;
            Ok((subst, value))
        });
        match attempt {
            Ok((_, value)) if value.is_zero() => None,
            Ok((subst, value)) => Some(Ok(Witness { subst, value })),
            Err(e) => Some(Err(e)),
        }
    });
    match hit {
        None => Ok(IdentityVerdict::IdentityProbable {
            trials,
            error_bound: schwartz_zippel_bound(spec.total_degree(), order, trials),
        }),
        Some((_, w)) => Ok(IdentityVerdict::NotIdentity(w?)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessStrategy {
    BasisExhaustive,
    Random { seed: u64, budget: usize },
}

/// A nonvanishing substitution from the algebra, if one is found.
pub fn find_witness<F: Field, E: Executor>(
    spec: &PolynomialSpec,
    algebra: &AlgebraBasis<F>,
    strategy: WitnessStrategy,
    exec: &E,
) -> Result<Option<Witness<F>>> {
    let verdict = match strategy {
        WitnessStrategy::BasisExhaustive => {
            is_identity_exhaustive(spec, algebra, DEFAULT_EXHAUSTIVE_CAP, exec)?
        }
        WitnessStrategy::Random { seed, budget } => {
            is_identity_randomized(spec, algebra, budget, seed, exec)?
        }
    };
    Ok(match verdict {
        IdentityVerdict::NotIdentity(w) => Some(w),
        _ => None,
    })
}

/// Evaluates `spec` at a caller-supplied substitution and wraps a nonzero
/// result as a witness.
pub fn witness_at<F: Field>(
    spec: &PolynomialSpec,
    subst: Substitution<F>,
) -> Result<Option<Witness<F>>> {
    let value = evaluate(spec, &subst, EvalImpl::SubsetDp)?;
    Ok((!value.is_zero()).then_some(Witness { subst, value }))
}
