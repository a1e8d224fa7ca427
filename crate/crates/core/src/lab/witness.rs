//! Explicit matrix-unit substitutions on which the test polynomials do not
//! vanish.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::poly::Substitution;

/// The double staircase in `M_n`, with `2n - 1` arguments in each block:
///
/// ```text
/// x_k = e_kk          (k = 1..n)        y_k = e_k,k+1      (k = 1..n-1)
/// x_k = e_j+1,j       (k = n+1..2n-1)   y_n = e_nn
///                                       y_k = e_jj         (k = n+1..2n-1)
/// ```
///
/// where `j = 2n - k`. `h_{4n-2}` takes the value `2I - e_11` here.
pub fn double_staircase<F: Field>(field: &F, n: usize) -> Result<Substitution<F>> {
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    let e = |i, j| Matrix::unit(field, i, j, n);
    let mut xs = Vec::with_capacity(2 * n - 1);
    let mut ys = Vec::with_capacity(2 * n - 1);
    for k in 1..=n {
        xs.push(e(k, k)?);
        ys.push(if k < n { e(k, k + 1)? } else { e(n, n)? });
    }
    for k in n + 1..2 * n {
        let j = 2 * n - k;
        xs.push(e(j + 1, j)?);
        ys.push(e(j, j)?);
    }
    Ok(Substitution::new(xs, ys))
}

/// The Capelli staircase for `c_{2n^2}`: the `x` block runs over all matrix
/// units in row-major order, and each `y_k` is the unique matrix unit that
/// links `x_k` to `x_{k+1}` in the identity-permutation monomial, closing
/// with `y_{n^2} = e_n1`. The value is `e_11`.
pub fn capelli_staircase<F: Field>(field: &F, n: usize) -> Result<Substitution<F>> {
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    let units: Vec<(usize, usize)> = (1..=n).flat_map(|i| (1..=n).map(move |j| (i, j))).collect();
    let xs = units
        .iter()
        .map(|&(i, j)| Matrix::unit(field, i, j, n))
        .collect::<Result<Vec<_>>>()?;
    let ys = units
        .iter()
        .enumerate()
        .map(|(k, &(_, col))| {
            let next_row = units.get(k + 1).map_or(1, |&(row, _)| row);
            Matrix::unit(field, col, next_row, n)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Substitution::new(xs, ys))
}

/// The 9-tuple `(e11, e11, e12, e22, e22, e23, e33, e33, e32)` in `E(1,2)`,
/// read as interleaved arguments `x1, y1, x2, y2, ..., x5` of `h_9`. Its
/// value is `2 e_12`.
pub fn e12_remark_tuple<F: Field>(field: &F) -> Result<Substitution<F>> {
    let seq = [
        (1, 1),
        (1, 1),
        (1, 2),
        (2, 2),
        (2, 2),
        (2, 3),
        (3, 3),
        (3, 3),
        (3, 2),
    ];
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (k, &(i, j)) in seq.iter().enumerate() {
        let m = Matrix::unit(field, i, j, 3)?;
        if k % 2 == 0 {
            xs.push(m);
        } else {
            ys.push(m);
        }
    }
    Ok(Substitution::new(xs, ys))
}
