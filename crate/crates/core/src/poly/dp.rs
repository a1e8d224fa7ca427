//! Subset dynamic programming over prefixes of the signed expansion.
//!
//! A prefix is identified by the set of indices it has used in each
//! alternating block. Appending index `i` to a prefix that has used `S`
//! creates `#{j in S : j > i}` new inversions, so the sign of a full term
//! is the product of the per-step signs and every table entry is a signed
//! sum of prefix products.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::field::Field;
use crate::matrix::Matrix;

#[inline]
fn larger_used_is_odd(used: u32, i: usize) -> bool {
    (used >> (i + 1)).count_ones() % 2 == 1
}

/// `s_t` via `f(S) = sum_{i in S} (-1)^{#{j in S : j > i}} f(S \ {i}) x_i`.
pub(super) fn standard<F: Field>(xs: &[Matrix<F>]) -> Matrix<F> {
    let t = xs.len();
    assert!(t < 32, "subset table too large");
    let full = (1u32 << t) - 1;
    let mut table: Vec<Option<Matrix<F>>> = alloc::vec![None; 1 << t];
    for (i, x) in xs.iter().enumerate() {
        table[1 << i] = Some(x.clone());
    }
    for set in 1..=full {
        if set.count_ones() < 2 {
            continue;
        }
        let mut acc: Option<Matrix<F>> = None;
        for (i, x) in xs.iter().enumerate() {
            if set & (1 << i) == 0 {
                continue;
            }
            let rest = set & !(1 << i);
            let prev = table[rest as usize]
                .as_ref()
                .expect("smaller subsets filled first");
            let term = prev.mul_unchecked(x);
            let negative = larger_used_is_odd(rest, i);
            match acc.as_mut() {
                Some(a) => a.accumulate(&term, negative),
                None => acc = Some(if negative { term.neg() } else { term }),
            }
        }
        table[set as usize] = acc;
    }
    table[full as usize].take().expect("full set computed")
}

/// `c_{2t-1}` (and `c_{2t}` when a trailing `y_t` is present), with the `y`
/// sequence fixed: `g(S) = sum_i sign * g(S \ {i}) y_{|S|-1} x_i`.
pub(super) fn capelli<F: Field>(xs: &[Matrix<F>], ys: &[Matrix<F>]) -> Matrix<F> {
    let t = xs.len();
    assert!(t < 32, "subset table too large");
    let full = (1u32 << t) - 1;
    // yx[k][i] = y_k x_i for the step that places the (k+2)-th x.
    let yx: Vec<Vec<Matrix<F>>> = ys
        .iter()
        .take(t - 1)
        .map(|y| xs.iter().map(|x| y.mul_unchecked(x)).collect())
        .collect();
    let mut table: Vec<Option<Matrix<F>>> = alloc::vec![None; 1 << t];
    for (i, x) in xs.iter().enumerate() {
        table[1 << i] = Some(x.clone());
    }
    for set in 1..=full {
        let size = set.count_ones() as usize;
        if size < 2 {
            continue;
        }
        let mut acc: Option<Matrix<F>> = None;
        for i in (0..t).filter(|&i| set & (1 << i) != 0) {
            let rest = set & !(1 << i);
            let prev = table[rest as usize]
                .as_ref()
                .expect("smaller subsets filled first");
            let term = prev.mul_unchecked(&yx[size - 2][i]);
            let negative = larger_used_is_odd(rest, i);
            match acc.as_mut() {
                Some(a) => a.accumulate(&term, negative),
                None => acc = Some(if negative { term.neg() } else { term }),
            }
        }
        table[set as usize] = acc;
    }
    let value = table[full as usize].take().expect("full set computed");
    if ys.len() == t {
        value.mul_unchecked(&ys[t - 1])
    } else {
        value
    }
}

/// `h_{2t}` / `h_{2t-1}` over pairs `(S, T)` of used `x` and `y` indices. The
/// word alternates `x y x y ...`, so after `k` letters `|S| = ceil(k/2)` and
/// `|T| = floor(k/2)`; each layer extends every prefix by one letter of the
/// block whose turn it is.
pub(super) fn double_capelli<F: Field>(xs: &[Matrix<F>], ys: &[Matrix<F>]) -> Matrix<F> {
    let (a, b) = (xs.len(), ys.len());
    assert!(a < 32, "subset table too large");
    let mut layer: BTreeMap<(u32, u32), Matrix<F>> = xs
        .iter()
        .enumerate()
        .map(|(i, x)| ((1u32 << i, 0u32), x.clone()))
        .collect();
    for step in 1..a + b {
        let (block, count) = if step % 2 == 1 { (ys, b) } else { (xs, a) };
        let mut next: BTreeMap<(u32, u32), Matrix<F>> = BTreeMap::new();
        for ((s, t), prefix) in &layer {
            let used = if step % 2 == 1 { *t } else { *s };
            for (i, m) in block.iter().enumerate().take(count) {
                if used & (1 << i) != 0 {
                    continue;
                }
                let key = if step % 2 == 1 {
                    (*s, t | 1 << i)
                } else {
                    (s | 1 << i, *t)
                };
                let term = prefix.mul_unchecked(m);
                let negative = larger_used_is_odd(used, i);
                match next.get_mut(&key) {
                    Some(acc) => acc.accumulate(&term, negative),
                    None => {
                        next.insert(key, if negative { term.neg() } else { term });
                    }
                }
            }
        }
        layer = next;
    }
    debug_assert_eq!(layer.len(), 1);
    layer.into_values().next().expect("one final state")
}
