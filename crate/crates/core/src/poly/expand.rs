//! Explicit signed term expansion, and the naive evaluator built on it.

use alloc::vec::Vec;
use core::fmt;

use super::{binomial, PolynomialSpec, Substitution};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;

/// Largest expansion the naive paths will walk.
pub const MAX_TERMS: u128 = 100_000_000;

/// A variable slot, 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X(usize),
    Y(usize),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(i) => write!(f, "x{}", i + 1),
            Var::Y(j) => write!(f, "y{}", j + 1),
        }
    }
}

/// One signed monomial of an expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub negative: bool,
    pub vars: Vec<Var>,
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.negative { "-" } else { "+" })?;
        for v in &self.vars {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Lexicographic permutation walker that tracks parity.
struct Perms {
    perm: Vec<usize>,
    odd: bool,
    started: bool,
}

impl Perms {
    fn new(k: usize) -> Self {
        Self {
            perm: (0..k).collect(),
            odd: false,
            started: false,
        }
    }

    /// Advances to the next permutation; false once exhausted.
    fn advance(&mut self) -> bool {
        if !self.started {
            self.started = true;
            return true;
        }
        let p = &mut self.perm;
        let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
            return false;
        };
        let pivot = i - 1;
        let j = (i..p.len())
            .rev()
            .find(|&j| p[j] > p[pivot])
            .expect("suffix has a larger element");
        p.swap(pivot, j);
        p[i..].reverse();
        let swaps = 1 + (p.len() - i) / 2;
        self.odd ^= swaps % 2 == 1;
        true
    }
}

/// Compositions of `total` into `parts` positive summands, lexicographic.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(total: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 1..=total - (parts - 1) {
            prefix.push(first);
            rec(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts >= 1 && total >= parts {
        rec(total, parts, &mut Vec::new(), &mut out);
    }
    out
}

fn inversions_odd(seq: &[usize]) -> bool {
    let mut inv = 0usize;
    for (a, &u) in seq.iter().enumerate() {
        inv += seq[a + 1..].iter().filter(|&&v| v < u).count();
    }
    inv % 2 == 1
}

/// Calls `visit(negative, vars)` for every signed term of `spec`, in a fixed
/// order: outer permutation of the `x` block, inner permutation of the `y`
/// block (or of the words), both lexicographic.
pub fn for_each_term(spec: &PolynomialSpec, mut visit: impl FnMut(bool, &[Var])) -> Result<()> {
    spec.validate()?;
    let count = spec.term_count();
    if count > MAX_TERMS {
        return Err(Error::TooManyTerms {
            count,
            limit: MAX_TERMS,
        });
    }
    let (a, b) = spec.arity();
    let mut seq: Vec<Var> = Vec::with_capacity(a + b);
    match spec {
        PolynomialSpec::Standard { .. } => {
            let mut xs = Perms::new(a);
            while xs.advance() {
                seq.clear();
                seq.extend(xs.perm.iter().map(|&i| Var::X(i)));
                visit(xs.odd, &seq);
            }
        }
        PolynomialSpec::Capelli { .. } => {
            let mut xs = Perms::new(a);
            while xs.advance() {
                seq.clear();
                for (k, &i) in xs.perm.iter().enumerate() {
                    seq.push(Var::X(i));
                    if k < b {
                        seq.push(Var::Y(k));
                    }
                }
                visit(xs.odd, &seq);
            }
        }
        PolynomialSpec::DoubleCapelli { .. } => {
            let mut xs = Perms::new(a);
            while xs.advance() {
                let mut ys = Perms::new(b);
                while ys.advance() {
                    seq.clear();
                    for (k, &i) in xs.perm.iter().enumerate() {
                        seq.push(Var::X(i));
                        if k < b {
                            seq.push(Var::Y(ys.perm[k]));
                        }
                    }
                    visit(xs.odd != ys.odd, &seq);
                }
            }
        }
        PolynomialSpec::Domokos { d, words, .. } => {
            let u = words.len();
            let comps = compositions(*d, u + 1);
            debug_assert_eq!(comps.len() as u128, binomial(d - 1, u));
            // Reference order x_1..x_d, y_1..y_m; the sign is the parity of
            // the rearrangement into the term's left-to-right sequence.
            let rank = |v: &Var| match *v {
                Var::X(i) => i,
                Var::Y(j) => d + j,
            };
            let mut ranks = Vec::with_capacity(a + b);
            let mut xs = Perms::new(*d);
            while xs.advance() {
                let mut rho = Perms::new(u);
                while rho.advance() {
                    for comp in &comps {
                        seq.clear();
                        let mut next_x = 0;
                        for (run, &len) in comp.iter().enumerate() {
                            seq.extend(xs.perm[next_x..next_x + len].iter().map(|&i| Var::X(i)));
                            next_x += len;
                            if run < u {
                                seq.extend(words[rho.perm[run]].iter().map(|&j| Var::Y(j)));
                            }
                        }
                        ranks.clear();
                        ranks.extend(seq.iter().map(rank));
                        visit(inversions_odd(&ranks), &seq);
                    }
                }
            }
        }
    }
    Ok(())
}

/// The explicit signed monomial list of `spec`.
pub fn expand_monomials(spec: &PolynomialSpec) -> Result<Vec<Term>> {
    let mut out = Vec::new();
    for_each_term(spec, |negative, vars| {
        out.push(Term {
            negative,
            vars: vars.to_vec(),
        })
    })?;
    Ok(out)
}

/// Sums every signed term evaluated left to right. Consecutive terms share
/// long prefixes in the enumeration order, so the partial products of the
/// previous term are reused up to the first differing letter.
pub(super) fn eval_naive<F: Field>(
    spec: &PolynomialSpec,
    subst: &Substitution<F>,
) -> Result<Matrix<F>> {
    let first = subst.xs.first().expect("arity checked");
    let mut acc = Matrix::zeros(first.field(), first.n())?;
    let mut prev: Vec<Var> = Vec::new();
    let mut partial: Vec<Matrix<F>> = Vec::new();
    for_each_term(spec, |negative, vars| {
        let keep = prev.iter().zip(vars).take_while(|(a, b)| a == b).count();
        partial.truncate(keep);
        for &v in &vars[keep..] {
            let next = match partial.last() {
                Some(p) => p.mul_unchecked(subst.get(v)),
                None => subst.get(v).clone(),
            };
            partial.push(next);
        }
        prev.clear();
        prev.extend_from_slice(vars);
        acc.accumulate(partial.last().expect("terms are nonempty"), negative);
    })?;
    Ok(acc)
}
