//! Subalgebras of `M_n(F)` given by a basis, their closure, and the named
//! algebras: full matrix algebras, block upper triangular algebras
//! `E(l, m)`, their radicals `T(l, m)`, and the twisted diagonal algebras.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::{common_size, Matrix};
use crate::rng::seeded;
use crate::span::{span_basis, RowSpace};

/// A linearly independent list of matrices spanning a subspace of `M_n(F)`,
/// usually a subalgebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraBasis<F: Field> {
    name: String,
    field: F,
    n: usize,
    basis: Vec<Matrix<F>>,
    unital: bool,
    closed: bool,
}

impl<F: Field> AlgebraBasis<F> {
    /// Wraps `mats` after reducing them to an independent list. The result is
    /// not certified closed; see [`AlgebraBasis::certify_closed`].
    pub fn from_spanning(
        name: impl Into<String>,
        field: &F,
        n: usize,
        mats: Vec<Matrix<F>>,
    ) -> Result<Self> {
        check_members(field, n, &mats)?;
        let mut space = RowSpace::new(field, n * n);
        let basis: Vec<Matrix<F>> = mats
            .into_iter()
            .filter(|m| space.insert(m.entries()))
            .collect();
        let unital = space.contains(Matrix::identity(field, n)?.entries());
        Ok(Self {
            name: name.into(),
            field: field.clone(),
            n,
            basis,
            unital,
            closed: false,
        })
    }

    fn known_closed(
        name: String,
        field: &F,
        n: usize,
        basis: Vec<Matrix<F>>,
        unital: bool,
    ) -> Self {
        debug_assert_eq!(span_basis(&basis).map(|b| b.1).ok(), Some(basis.len()));
        Self {
            name,
            field: field.clone(),
            n,
            basis,
            unital,
            closed: true,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Matrix<F>] {
        &self.basis
    }

    /// Whether the identity matrix lies in the span.
    pub fn unital(&self) -> bool {
        self.unital
    }

    /// Whether closure under multiplication has been established.
    pub fn closed(&self) -> bool {
        self.closed
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.n * self.n
    }

    pub fn space(&self) -> RowSpace<F> {
        let mut space = RowSpace::new(&self.field, self.n * self.n);
        for b in &self.basis {
            space.insert(b.entries());
        }
        space
    }

    pub fn contains(&self, m: &Matrix<F>) -> bool {
        m.field() == &self.field && m.n() == self.n && self.space().contains(m.entries())
    }

    /// Checks every pairwise product of basis elements against the span and
    /// records the result.
    pub fn certify_closed(&mut self) -> bool {
        let space = self.space();
        self.closed = self.basis.iter().all(|a| {
            self.basis
                .iter()
                .all(|b| space.contains(a.mul_unchecked(b).entries()))
        });
        self.closed
    }
}

fn check_members<F: Field>(field: &F, n: usize, mats: &[Matrix<F>]) -> Result<()> {
    let refs: Vec<&Matrix<F>> = mats.iter().collect();
    if let Some(size) = common_size(&refs)? {
        if size != n {
            return Err(Error::SizeMismatch {
                expected: n,
                found: size,
            });
        }
        if mats[0].field() != field {
            return Err(Error::DomainMismatch(
                field.domain(),
                mats[0].field().domain(),
            ));
        }
    }
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    Ok(())
}

/// The smallest subalgebra of `M_n(F)` containing `generators` (and the
/// identity when `unital`). Products are generated breadth first: each round
/// multiplies the newly found elements against everything found so far, on
/// both sides, until no product leaves the span.
pub fn closure<F: Field>(
    field: &F,
    n: usize,
    generators: &[Matrix<F>],
    unital: bool,
) -> Result<AlgebraBasis<F>> {
    check_members(field, n, generators)?;
    let mut space = RowSpace::new(field, n * n);
    let mut elements: Vec<Matrix<F>> = Vec::new();
    let mut frontier: Vec<Matrix<F>> = Vec::new();
    let identity = Matrix::identity(field, n)?;
    let seeds = unital.then_some(&identity).into_iter().chain(generators);
    for g in seeds {
        if space.insert(g.entries()) {
            elements.push(g.clone());
            frontier.push(g.clone());
        }
    }
    while !frontier.is_empty() && space.dim() < n * n {
        let mut found = Vec::new();
        for a in &frontier {
            for b in &elements {
                for p in [a.mul_unchecked(b), b.mul_unchecked(a)] {
                    if space.insert(p.entries()) {
                        found.push(p);
                    }
                }
            }
        }
        elements.extend(found.iter().cloned());
        frontier = found;
    }
    let basis = space
        .rows()
        .iter()
        .map(|r| Matrix::from_entries(field, n, r.clone()))
        .collect::<Result<Vec<_>>>()?;
    let has_identity = space.contains(identity.entries());
    Ok(AlgebraBasis::known_closed(
        String::from("closure"),
        field,
        n,
        basis,
        has_identity,
    ))
}

/// Block index of each row/column for the given block sizes.
fn block_of(blocks: &[usize]) -> Vec<usize> {
    blocks
        .iter()
        .enumerate()
        .flat_map(|(b, &size)| core::iter::repeat_n(b, size))
        .collect()
}

fn units_where<F: Field>(
    field: &F,
    n: usize,
    keep: impl Fn(usize, usize) -> bool,
) -> Result<Vec<Matrix<F>>> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if keep(i, j) {
                out.push(Matrix::unit(field, i, j, n)?);
            }
        }
    }
    Ok(out)
}

pub fn make_full<F: Field>(field: &F, n: usize) -> Result<AlgebraBasis<F>> {
    let basis = units_where(field, n, |_, _| true)?;
    Ok(AlgebraBasis::known_closed(
        format!("M_{n}"),
        field,
        n,
        basis,
        true,
    ))
}

/// Block upper triangular matrices: `e_ij` with `block(i) <= block(j)`.
pub fn make_block_upper<F: Field>(field: &F, blocks: &[usize]) -> Result<AlgebraBasis<F>> {
    if blocks.is_empty() || blocks.contains(&0) {
        return Err(Error::InvalidArgument(format!(
            "block sizes must be a nonempty list of positive sizes, got {blocks:?}"
        )));
    }
    let of = block_of(blocks);
    let n = of.len();
    let basis = units_where(field, n, |i, j| of[i - 1] <= of[j - 1])?;
    let name = format!("blocks{blocks:?}");
    Ok(AlgebraBasis::known_closed(name, field, n, basis, true))
}

pub fn make_e<F: Field>(field: &F, l: usize, m: usize) -> Result<AlgebraBasis<F>> {
    check_lm(l, m)?;
    Ok(make_block_upper(field, &[l, m])?.with_name(format!("E({l},{m})")))
}

/// The radical of `E(l, m)`: `e_ij` with `i <= l < j`. Not unital, square zero.
pub fn make_t<F: Field>(field: &F, l: usize, m: usize) -> Result<AlgebraBasis<F>> {
    check_lm(l, m)?;
    let basis = units_where(field, l + m, |i, j| i <= l && j > l)?;
    Ok(AlgebraBasis::known_closed(
        format!("T({l},{m})"),
        field,
        l + m,
        basis,
        false,
    ))
}

/// `{[[a, c], [0, a]] : a, c in M_l(F)}` inside `M_{2l}(F)`.
pub fn make_twisted_diagonal<F: Field>(field: &F, l: usize) -> Result<AlgebraBasis<F>> {
    if l == 0 {
        return Err(Error::InvalidArgument(
            "twisted diagonal needs l >= 1".into(),
        ));
    }
    let n = 2 * l;
    let mut basis = Vec::with_capacity(2 * l * l);
    for i in 1..=l {
        for j in 1..=l {
            basis.push(Matrix::unit(field, i, j, n)?.add(&Matrix::unit(
                field,
                l + i,
                l + j,
                n,
            )?)?);
            basis.push(Matrix::unit(field, i, l + j, n)?);
        }
    }
    Ok(AlgebraBasis::known_closed(
        format!("twisted({l})"),
        field,
        n,
        basis,
        true,
    ))
}

/// Diagonal matrices.
pub fn make_diagonal<F: Field>(field: &F, n: usize) -> Result<AlgebraBasis<F>> {
    let basis = units_where(field, n, |i, j| i == j)?;
    Ok(AlgebraBasis::known_closed(
        format!("diag({n})"),
        field,
        n,
        basis,
        true,
    ))
}

/// Scalar multiples of the identity.
pub fn make_scalars<F: Field>(field: &F, n: usize) -> Result<AlgebraBasis<F>> {
    let basis = alloc::vec![Matrix::identity(field, n)?];
    Ok(AlgebraBasis::known_closed(
        format!("scalars({n})"),
        field,
        n,
        basis,
        true,
    ))
}

fn check_lm(l: usize, m: usize) -> Result<()> {
    if l == 0 || m == 0 {
        return Err(Error::InvalidArgument(format!(
            "E({l},{m}) needs l, m >= 1"
        )));
    }
    Ok(())
}

/// Whether `m` is block upper triangular for `blocks`.
pub fn in_block_upper<F: Field>(m: &Matrix<F>, blocks: &[usize]) -> bool {
    let of = block_of(blocks);
    if of.len() != m.n() {
        return false;
    }
    let f = m.field();
    (0..m.n()).all(|i| (0..m.n()).all(|j| of[i] <= of[j] || f.is_zero(m.get(i, j))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// The diagonal block of an element of `E(l, m)`: the `l x l` block for
/// `Left`, the `m x m` block for `Right`, kept in place inside `M_n(F)` with
/// everything else zeroed.
pub fn project<F: Field>(element: &Matrix<F>, l: usize, m: usize, side: Side) -> Result<Matrix<F>> {
    check_lm(l, m)?;
    if element.n() != l + m {
        return Err(Error::SizeMismatch {
            expected: l + m,
            found: element.n(),
        });
    }
    if !in_block_upper(element, &[l, m]) {
        return Err(Error::NotInAlgebra(format!("E({l},{m})")));
    }
    let n = l + m;
    let f = element.field();
    let range = match side {
        Side::Left => 0..l,
        Side::Right => l..n,
    };
    let entries = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            if range.contains(&i) && range.contains(&j) {
                element.get(i, j).clone()
            } else {
                f.zero()
            }
        })
        .collect();
    Matrix::from_entries(f, n, entries)
}

/// The image of a subalgebra of `E(l, m)` under a diagonal-block projection.
pub fn project_algebra<F: Field>(
    algebra: &AlgebraBasis<F>,
    l: usize,
    m: usize,
    side: Side,
) -> Result<AlgebraBasis<F>> {
    let images = algebra
        .basis()
        .iter()
        .map(|b| project(b, l, m, side))
        .collect::<Result<Vec<_>>>()?;
    let mut image = AlgebraBasis::from_spanning(
        format!("{}|{side:?}", algebra.name()),
        algebra.field(),
        algebra.n(),
        images,
    )?;
    image.certify_closed();
    Ok(image)
}

/// A uniform random element of the span of the basis.
pub fn random_element<F: Field, R: RngCore + ?Sized>(
    algebra: &AlgebraBasis<F>,
    rng: &mut R,
) -> Result<Matrix<F>> {
    let f = algebra.field();
    if f.order().is_none() {
        return Err(Error::NotSampleable(f.domain()));
    }
    let mut acc = Matrix::zeros(f, algebra.n())?;
    for b in algebra.basis() {
        let c = f.sample(rng).ok_or(Error::NotSampleable(f.domain()))?;
        acc = acc.add_scaled(&c, b)?;
    }
    Ok(acc)
}

/// The unital closure of `num_generators` uniformly random matrices.
pub fn random_subalgebra<F: Field>(
    field: &F,
    n: usize,
    num_generators: usize,
    seed: u64,
) -> Result<AlgebraBasis<F>> {
    if field.order().is_none() {
        return Err(Error::NotSampleable(field.domain()));
    }
    let mut rng = seeded(seed, 0);
    let gens = (0..num_generators)
        .map(|_| Matrix::random(field, n, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    Ok(closure(field, n, &gens, true)?.with_name(format!("random({n},{num_generators},{seed})")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals, DEFAULT_PRIME};
    use crate::rng::seeded;

    fn gf() -> PrimeField {
        PrimeField::new(DEFAULT_PRIME).unwrap()
    }

    fn e(f: &PrimeField, n: usize, i: usize, j: usize) -> Matrix<PrimeField> {
        Matrix::unit(f, i, j, n).unwrap()
    }

    #[test]
    fn closure_examples() {
        let f = gf();
        let a = closure(&f, 2, &[e(&f, 2, 1, 2), e(&f, 2, 2, 1)], false).unwrap();
        assert_eq!(a.dim(), 4);
        assert!(a.closed() && a.unital());
        assert_eq!(closure(&f, 2, &[e(&f, 2, 1, 1)], false).unwrap().dim(), 1);
        assert_eq!(closure(&f, 2, &[e(&f, 2, 1, 1)], true).unwrap().dim(), 2);
        let mut upper = closure(
            &f,
            2,
            &[e(&f, 2, 1, 1), e(&f, 2, 1, 2), e(&f, 2, 2, 2)],
            false,
        )
        .unwrap();
        assert_eq!(upper.dim(), 3);
        assert!(upper.certify_closed());
        assert_eq!(closure::<PrimeField>(&f, 2, &[], false).unwrap().dim(), 0);
        assert_eq!(closure::<PrimeField>(&f, 2, &[], true).unwrap().dim(), 1);
    }

    #[test]
    fn closure_is_idempotent_and_extensive() {
        let f = gf();
        for seed in 0..10 {
            let mut rng = seeded(seed, 1);
            let gens = [
                Matrix::random(&f, 3, &mut rng)
                    .unwrap()
                    .mul(&e(&f, 3, 1, 1))
                    .unwrap(),
                e(&f, 3, 2, 3),
            ];
            let a = closure(&f, 3, &gens, seed % 2 == 0).unwrap();
            assert!(gens.iter().all(|g| a.contains(g)));
            let again = closure(&f, 3, a.basis(), false).unwrap();
            assert_eq!(a.dim(), again.dim());
            let mut cert = a.clone();
            assert!(cert.certify_closed());
        }
    }

    #[test]
    fn named_dimensions() {
        let f = gf();
        let e11 = make_e(&f, 1, 1).unwrap();
        assert_eq!(
            e11.basis(),
            &[e(&f, 2, 1, 1), e(&f, 2, 1, 2), e(&f, 2, 2, 2)]
        );
        for (l, m) in [(1, 2), (2, 1), (2, 2), (1, 3)] {
            assert_eq!(make_e(&f, l, m).unwrap().dim(), l * l + l * m + m * m);
            assert_eq!(make_t(&f, l, m).unwrap().dim(), l * m);
        }
        assert_ne!(
            make_e(&f, 1, 2).unwrap().basis(),
            make_e(&f, 2, 1).unwrap().basis()
        );
        assert_eq!(make_block_upper(&f, &[1, 1]).unwrap().basis(), e11.basis());
        assert_eq!(make_block_upper(&f, &[3]).unwrap().dim(), 9);
        assert_eq!(make_block_upper(&f, &[1, 1, 1]).unwrap().dim(), 6);
        let blocks = [2, 1, 3];
        let want: usize = (0..3)
            .flat_map(|i| (i..3).map(move |j| (i, j)))
            .map(|(i, j)| blocks[i] * blocks[j])
            .sum();
        assert_eq!(make_block_upper(&f, &blocks).unwrap().dim(), want);
        assert!(make_e(&f, 0, 2).is_err());
        assert!(make_block_upper(&f, &[]).is_err());
        assert!(make_twisted_diagonal(&f, 0).is_err());
    }

    #[test]
    fn radical_squares_to_zero() {
        let f = gf();
        for (l, m) in [(1, 1), (1, 2), (2, 2)] {
            let t = make_t(&f, l, m).unwrap();
            for a in t.basis() {
                for b in t.basis() {
                    assert!(a.mul(b).unwrap().is_zero());
                }
            }
        }
        assert_eq!(
            make_t(&f, 1, 2).unwrap().basis(),
            &[e(&f, 3, 1, 2), e(&f, 3, 1, 3)]
        );
    }

    #[test]
    fn constructors_are_closed() {
        let f = gf();
        let zoo = [
            make_full(&f, 2).unwrap(),
            make_e(&f, 1, 2).unwrap(),
            make_e(&f, 2, 1).unwrap(),
            make_t(&f, 2, 1).unwrap(),
            make_block_upper(&f, &[1, 1, 1]).unwrap(),
            make_twisted_diagonal(&f, 1).unwrap(),
            make_twisted_diagonal(&f, 2).unwrap(),
            make_diagonal(&f, 3).unwrap(),
            make_scalars(&f, 3).unwrap(),
        ];
        for alg in zoo {
            assert!(alg.dim() <= 10);
            let mut a = alg.clone();
            assert!(a.certify_closed(), "{}", alg.name());
            assert_eq!(span_basis(alg.basis()).unwrap().1, alg.dim());
        }
    }

    #[test]
    fn twisted_diagonal_shape() {
        let f = gf();
        let tw = make_twisted_diagonal(&f, 1).unwrap();
        assert_eq!(tw.dim(), 2);
        let (a, b) = (&tw.basis()[0], &tw.basis()[1]);
        assert_eq!(a.mul(b).unwrap(), b.mul(a).unwrap());
        assert_eq!(make_twisted_diagonal(&f, 2).unwrap().dim(), 8);
    }

    #[test]
    fn projections() {
        let f = gf();
        assert!(project(&e(&f, 2, 1, 2), 1, 1, Side::Left)
            .unwrap()
            .is_zero());
        assert_eq!(
            project(&e(&f, 2, 1, 1), 1, 1, Side::Left).unwrap(),
            e(&f, 2, 1, 1)
        );
        assert!(project(&e(&f, 2, 1, 1), 1, 1, Side::Right)
            .unwrap()
            .is_zero());
        assert!(matches!(
            project(&e(&f, 2, 2, 1), 1, 1, Side::Left),
            Err(Error::NotInAlgebra(_))
        ));
        let alg = make_e(&f, 1, 2).unwrap();
        let mut rng = seeded(4, 0);
        for _ in 0..10 {
            let a = random_element(&alg, &mut rng).unwrap();
            let b = random_element(&alg, &mut rng).unwrap();
            for side in [Side::Left, Side::Right] {
                let lhs = project(&a.mul(&b).unwrap(), 1, 2, side).unwrap();
                let rhs = project(&a, 1, 2, side)
                    .unwrap()
                    .mul(&project(&b, 1, 2, side).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        assert_eq!(project_algebra(&alg, 1, 2, Side::Right).unwrap().dim(), 4);
        assert_eq!(project_algebra(&alg, 1, 2, Side::Left).unwrap().dim(), 1);
    }

    #[test]
    fn random_elements() {
        let f = gf();
        let zero = closure::<PrimeField>(&f, 2, &[], false).unwrap();
        assert!(random_element(&zero, &mut seeded(1, 0)).unwrap().is_zero());
        let alg = make_e(&f, 2, 1).unwrap();
        let a = random_element(&alg, &mut seeded(9, 0)).unwrap();
        assert_eq!(a, random_element(&alg, &mut seeded(9, 0)).unwrap());
        assert!(alg.contains(&a));
        let q = make_full(&Rationals, 2).unwrap();
        assert!(matches!(
            random_element(&q, &mut seeded(1, 0)),
            Err(Error::NotSampleable(_))
        ));
    }

    #[test]
    fn random_subalgebras() {
        let f = gf();
        for seed in 0..5 {
            let a = random_subalgebra(&f, 2, 3, seed).unwrap();
            assert!(a.dim() <= 4);
            assert_eq!(a, random_subalgebra(&f, 2, 3, seed).unwrap());
        }
        // One generator: spanned by powers, so commutative and of dimension <= n.
        let single = random_subalgebra(&f, 3, 1, 17).unwrap();
        assert!(single.dim() <= 3);
        for a in single.basis() {
            for b in single.basis() {
                assert_eq!(a.mul(b).unwrap(), b.mul(a).unwrap());
            }
        }
    }
}
