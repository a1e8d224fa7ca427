//! Row spaces of flattened matrices, kept in reduced row echelon form.

use alloc::vec::Vec;

use crate::error::Result;
use crate::field::Field;
use crate::matrix::{common_size, Matrix};

/// A subspace of `F^len` stored as reduced row echelon rows, sorted by pivot.
#[derive(Debug, Clone)]
pub struct RowSpace<F: Field> {
    field: F,
    len: usize,
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: Field> RowSpace<F> {
    pub fn new(field: &F, len: usize) -> Self {
        Self {
            field: field.clone(),
            len,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<F::Elem>] {
        &self.rows
    }

    /// Subtracts the component of `v` along every stored pivot.
    pub fn reduce(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        debug_assert_eq!(v.len(), self.len);
        let f = &self.field;
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if f.is_zero(&v[p]) {
                continue;
            }
            let c = v[p].clone();
            for (x, r) in v.iter_mut().zip(row).skip(p) {
                *x = f.sub(x, &f.mul(&c, r));
            }
        }
        v
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let f = &self.field;
        self.reduce(v).iter().all(|x| f.is_zero(x))
    }

    /// Adds `v` to the space; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[F::Elem]) -> bool {
        let f = self.field.clone();
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&v[p]).expect("pivot is nonzero");
        for x in v.iter_mut().skip(p) {
            *x = f.mul(x, &inv);
        }
        // Clear the new pivot column from the existing rows.
        for row in &mut self.rows {
            if f.is_zero(&row[p]) {
                continue;
            }
            let c = row[p].clone();
            for (x, r) in row.iter_mut().zip(&v).skip(p) {
                *x = f.sub(x, &f.mul(&c, r));
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }
}

/// Reduced row echelon basis of the span of `mats`, each flattened row-major.
pub fn span_basis<F: Field>(mats: &[Matrix<F>]) -> Result<(Vec<Matrix<F>>, usize)> {
    let refs: Vec<&Matrix<F>> = mats.iter().collect();
    let Some(n) = common_size(&refs)? else {
        return Ok((Vec::new(), 0));
    };
    let field = mats[0].field();
    let mut space = RowSpace::new(field, n * n);
    for m in mats {
        space.insert(m.entries());
    }
    let basis: Vec<Matrix<F>> = space
        .rows()
        .iter()
        .map(|r| Matrix::from_entries(field, n, r.clone()))
        .collect::<Result<_>>()?;
    let dim = basis.len();
    Ok((basis, dim))
}
