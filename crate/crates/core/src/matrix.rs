use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::field::Field;

/// A dense square matrix over `F`, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    field: F,
    n: usize,
    entries: Vec<F::Elem>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroSize);
        }
        Ok(Self {
            field: field.clone(),
            n,
            entries: alloc::vec![field.zero(); n * n],
        })
    }

    pub fn identity(field: &F, n: usize) -> Result<Self> {
        let mut m = Self::zeros(field, n)?;
        for i in 0..n {
            m.entries[i * n + i] = field.one();
        }
        Ok(m)
    }

    /// The matrix unit `e_ij` with 1-based indices.
    pub fn unit(field: &F, i: usize, j: usize, n: usize) -> Result<Self> {
        if i == 0 || j == 0 || i > n || j > n {
            return Err(Error::IndexOutOfRange { i, j, n });
        }
        let mut m = Self::zeros(field, n)?;
        m.entries[(i - 1) * n + (j - 1)] = field.one();
        Ok(m)
    }

    /// Builds a matrix from row-major entries; every entry must already be
    /// canonical.
    pub fn from_entries(field: &F, n: usize, entries: Vec<F::Elem>) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroSize);
        }
        if entries.len() != n * n {
            return Err(Error::SizeMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        if let Some(bad) = entries.iter().find(|e| !field.is_canonical(e)) {
            return Err(Error::NotCanonical(
                alloc::format!("{bad:?}"),
                field.domain(),
            ));
        }
        Ok(Self {
            field: field.clone(),
            n,
            entries,
        })
    }

    pub fn from_rows(field: &F, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::SizeMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        Self::from_entries(field, n, rows.into_iter().flatten().collect())
    }

    pub fn from_i64_rows(field: &F, rows: &[&[i64]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Self::from_rows(field, rows)
    }

    /// A matrix with independent uniform entries.
    pub fn random<R: rand::RngCore + ?Sized>(field: &F, n: usize, rng: &mut R) -> Result<Self> {
        let entries = (0..n * n)
            .map(|_| {
                field
                    .sample(rng)
                    .ok_or(Error::NotSampleable(field.domain()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(field, n, entries)
    }

    /// Entries drawn uniformly from the integers `-bound..=bound`. Works over
    /// every field, including the rationals.
    pub fn random_small<R: rand::RngCore + ?Sized>(
        field: &F,
        n: usize,
        bound: i64,
        rng: &mut R,
    ) -> Result<Self> {
        use rand::Rng;
        let entries = (0..n * n)
            .map(|_| field.from_i64(rng.random_range(-bound..=bound)))
            .collect();
        Self::from_entries(field, n, entries)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Row-major entries; this is the length-n² vector used by span
    /// computations.
    pub fn entries(&self) -> &[F::Elem] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<F::Elem> {
        self.entries
    }

    /// Entry at 0-based `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> &F::Elem {
        &self.entries[row * self.n + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[F::Elem]> {
        self.entries.chunks(self.n)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| self.field.is_zero(e))
    }

    pub fn is_identity(&self) -> bool {
        let one = self.field.one();
        self.entries.iter().enumerate().all(|(k, e)| {
            if k / self.n == k % self.n {
                *e == one
            } else {
                self.field.is_zero(e)
            }
        })
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::DomainMismatch(
                self.field.domain(),
                other.field.domain(),
            ));
        }
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.zip_unchecked(other, |f, a, b| f.add(a, b)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.zip_unchecked(other, |f, a, b| f.sub(a, b)))
    }

    pub fn neg(&self) -> Self {
        self.map(|f, a| f.neg(a))
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        self.map(|f, a| f.mul(c, a))
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &F::Elem, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.zip_unchecked(other, |f, a, b| f.add(a, &f.mul(c, b))))
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let f = &self.field;
        let n = self.n;
        let w = 2 * n;
        let mut aug: Vec<F::Elem> = Vec::with_capacity(n * w);
        for i in 0..n {
            aug.extend_from_slice(&self.entries[i * n..(i + 1) * n]);
            aug.extend((0..n).map(|j| if i == j { f.one() } else { f.zero() }));
        }
        for col in 0..n {
            let pivot = (col..n).find(|&r| !f.is_zero(&aug[r * w + col]))?;
            for k in 0..w {
                aug.swap(pivot * w + k, col * w + k);
            }
            let inv = f.inv(&aug[col * w + col]).ok()?;
            for k in 0..w {
                aug[col * w + k] = f.mul(&aug[col * w + k], &inv);
            }
            for r in (0..n).filter(|&r| r != col) {
                let c = aug[r * w + col].clone();
                if f.is_zero(&c) {
                    continue;
                }
                for k in 0..w {
                    let v = f.mul(&c, &aug[col * w + k]);
                    aug[r * w + k] = f.sub(&aug[r * w + k], &v);
                }
            }
        }
        let entries = (0..n)
            .flat_map(|i| aug[i * w + n..(i + 1) * w].to_vec())
            .collect();
        Some(Self {
            field: f.clone(),
            n,
            entries,
        })
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        Self {
            field: self.field.clone(),
            n: self.n,
            entries: self.field.mat_mul(&self.entries, &other.entries, self.n),
        }
    }

    /// In-place `self += other` (or `-=` when `negate`), sizes assumed equal.
    pub(crate) fn accumulate(&mut self, other: &Self, negate: bool) {
        let f = &self.field;
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a = if negate { f.sub(a, b) } else { f.add(a, b) };
        }
    }

    fn zip_unchecked(&self, other: &Self, op: impl Fn(&F, &F::Elem, &F::Elem) -> F::Elem) -> Self {
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| op(&self.field, a, b))
            .collect();
        Self {
            field: self.field.clone(),
            n: self.n,
            entries,
        }
    }

    fn map(&self, op: impl Fn(&F, &F::Elem) -> F::Elem) -> Self {
        Self {
            field: self.field.clone(),
            n: self.n,
            entries: self.entries.iter().map(|a| op(&self.field, a)).collect(),
        }
    }

    /// Renders entries as a nested list, e.g. `[[1, 0], [0, 2]]`.
    pub fn format_rows(&self) -> String {
        let mut s = String::from("[");
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                s.push_str(", ");
            }
            s.push('[');
            for (j, e) in row.iter().enumerate() {
                if j > 0 {
                    s.push_str(", ");
                }
                s.push_str(&self.field.format(e));
            }
            s.push(']');
        }
        s.push(']');
        s
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<{}>{}", self.field.domain(), self.format_rows())
    }
}

/// Checks that all matrices share one size and field; returns the size.
pub fn common_size<F: Field>(mats: &[&Matrix<F>]) -> Result<Option<usize>> {
    let Some(first) = mats.first() else {
        return Ok(None);
    };
    for m in &mats[1..] {
        first.check_compatible(m)?;
    }
    Ok(Some(first.n()))
}
