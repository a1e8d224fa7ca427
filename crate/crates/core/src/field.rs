//! Exact coefficient fields: prime fields GF(p) with word-sized moduli, and
//! the rationals backed by arbitrary-precision integers.
//!
//! Elements are plain values (`u64` residues, [`BigRational`]); the field
//! object carries the modulus and performs all arithmetic, so every result is
//! canonical: residues lie in `[0, p)` and fractions are in lowest terms with
//! a positive denominator.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, RngCore};

use crate::error::{Error, Result};

/// The Mersenne prime 2^31 - 1, the default detection field.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// Which coefficient field a matrix lives over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarDomain {
    Prime(u64),
    Rationals,
}

impl fmt::Display for ScalarDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarDomain::Prime(p) => write!(f, "GF({p})"),
            ScalarDomain::Rationals => f.write_str("Q"),
        }
    }
}

/// A field with exact arithmetic on canonical element representatives.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + fmt::Debug + Send + Sync;

    fn domain(&self) -> ScalarDomain;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;

    /// Whether `a` is a canonical representative of an element of this field.
    fn is_canonical(&self, a: &Self::Elem) -> bool;

    /// Number of field elements, when finite.
    fn order(&self) -> Option<u64>;

    /// A uniformly random element, or `None` if the field has no uniform
    /// distribution.
    fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> Option<Self::Elem>;

    fn format(&self, a: &Self::Elem) -> String;

    /// Row-major product of two `n x n` arrays.
    fn mat_mul(&self, a: &[Self::Elem], b: &[Self::Elem], n: usize) -> Vec<Self::Elem> {
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = self.zero();
                for k in 0..n {
                    let prod = self.mul(&a[i * n + k], &b[k * n + j]);
                    acc = self.add(&acc, &prod);
                }
                out.push(acc);
            }
        }
        out
    }
}

/// The prime field GF(p) for a prime `p < 2^64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Self { p })
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Reduces an arbitrary signed integer into `[0, p)`.
    pub fn reduce_i128(&self, v: i128) -> u64 {
        v.rem_euclid(self.p as i128) as u64
    }

    #[inline]
    fn small(&self) -> bool {
        self.p <= u32::MAX as u64
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        Self { p: DEFAULT_PRIME }
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn domain(&self) -> ScalarDomain {
        ScalarDomain::Prime(self.p)
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn from_i64(&self, v: i64) -> u64 {
        self.reduce_i128(v as i128)
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let (s, overflow) = a.overflowing_add(*b);
        if overflow || s >= self.p {
            s.wrapping_sub(self.p)
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a.wrapping_sub(*b).wrapping_add(self.p)
        }
    }

    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        if self.small() {
            (a * b) % self.p
        } else {
            ((*a as u128 * *b as u128) % self.p as u128) as u64
        }
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn inv(&self, a: &u64) -> Result<u64> {
        if *a == 0 {
            return Err(Error::DivisionByZero);
        }
        // Fermat: a^(p-2).
        let mut base = *a;
        let mut exp = self.p - 2;
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        Ok(acc)
    }

    fn is_canonical(&self, a: &u64) -> bool {
        *a < self.p
    }

    fn order(&self) -> Option<u64> {
        Some(self.p)
    }

    fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> Option<u64> {
        Some(rng.random_range(0..self.p))
    }

    fn format(&self, a: &u64) -> String {
        a.to_string()
    }

    fn mat_mul(&self, a: &[u64], b: &[u64], n: usize) -> Vec<u64> {
        let mut out = Vec::with_capacity(n * n);
        if self.small() {
            // Products fit in u64; accumulate in u128 and reduce once.
            for i in 0..n {
                let row = &a[i * n..(i + 1) * n];
                for j in 0..n {
                    let mut acc: u128 = 0;
                    for (k, &r) in row.iter().enumerate() {
                        acc += (r * b[k * n + j]) as u128;
                    }
                    out.push((acc % self.p as u128) as u64);
                }
            }
        } else {
            for i in 0..n {
                for j in 0..n {
                    let mut acc = 0u64;
                    for k in 0..n {
                        acc = self.add(&acc, &self.mul(&a[i * n + k], &b[k * n + j]));
                    }
                    out.push(acc);
                }
            }
        }
        out
    }
}

/// The field of rational numbers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn domain(&self) -> ScalarDomain {
        ScalarDomain::Rationals
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn inv(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(a.recip())
        }
    }

    fn is_canonical(&self, a: &BigRational) -> bool {
        use num_integer::Integer;
        a.denom().is_positive() && a.numer().gcd(a.denom()).is_one()
    }

    fn order(&self) -> Option<u64> {
        None
    }

    fn sample<R: RngCore + ?Sized>(&self, _rng: &mut R) -> Option<BigRational> {
        None
    }

    fn format(&self, a: &BigRational) -> String {
        a.to_string()
    }

    fn mat_mul(&self, a: &[BigRational], b: &[BigRational], n: usize) -> Vec<BigRational> {
        if let Some(out) = small_integer_mat_mul(a, b, n) {
            return out;
        }
        // Sum each entry over a running common denominator and reduce once.
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut num = BigInt::zero();
                let mut den = BigInt::one();
                for k in 0..n {
                    let (x, y) = (&a[i * n + k], &b[k * n + j]);
                    if x.is_zero() || y.is_zero() {
                        continue;
                    }
                    let pn = x.numer() * y.numer();
                    let pd = x.denom() * y.denom();
                    if pd == den {
                        num += pn;
                    } else {
                        num = num * &pd + pn * &den;
                        den *= pd;
                    }
                }
                out.push(if den.is_one() {
                    BigRational::from_integer(num)
                } else {
                    BigRational::new(num, den)
                });
            }
        }
        out
    }
}

/// Product of integer matrices whose entries fit in `i64`, computed in
/// `i128`; `None` if an entry is fractional or a sum overflows.
fn small_integer_mat_mul(
    a: &[BigRational],
    b: &[BigRational],
    n: usize,
) -> Option<Vec<BigRational>> {
    use num_traits::ToPrimitive;
    let small = |m: &[BigRational]| -> Option<Vec<i128>> {
        m.iter()
            .map(|x| {
                if x.is_integer() {
                    x.numer().to_i64().map(i128::from)
                } else {
                    None
                }
            })
            .collect()
    };
    let (a, b) = (small(a)?, small(b)?);
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut acc: i128 = 0;
            for k in 0..n {
                acc = acc.checked_add(a[i * n + k].checked_mul(b[k * n + j])?)?;
            }
            out.push(BigRational::from_integer(BigInt::from(acc)));
        }
    }
    Some(out)
}

/// Arithmetic operations exposed for scalar-level checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarOp {
    Add,
    Sub,
    Mul,
    Neg,
    Inv,
}

/// Applies `op` to canonical operands. Binary operations require `b`.
pub fn scalar_arith<F: Field>(
    field: &F,
    op: ScalarOp,
    a: &F::Elem,
    b: Option<&F::Elem>,
) -> Result<F::Elem> {
    for v in core::iter::once(a).chain(b) {
        if !field.is_canonical(v) {
            return Err(Error::NotCanonical(alloc::format!("{v:?}"), field.domain()));
        }
    }
    let rhs =
        || b.ok_or_else(|| Error::InvalidArgument(alloc::format!("{op:?} needs two operands")));
    Ok(match op {
        ScalarOp::Add => field.add(a, rhs()?),
        ScalarOp::Sub => field.sub(a, rhs()?),
        ScalarOp::Mul => field.mul(a, rhs()?),
        ScalarOp::Neg => field.neg(a),
        ScalarOp::Inv => field.inv(a)?,
    })
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn inverse_in_gf7() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(scalar_arith(&f, ScalarOp::Inv, &3, None).unwrap(), 5);
        assert_eq!(
            scalar_arith(&f, ScalarOp::Inv, &0, None),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn rational_sum() {
        let sum = scalar_arith(&Rationals, ScalarOp::Add, &q(1, 2), Some(&q(1, 3))).unwrap();
        assert_eq!(sum, q(5, 6));
        assert_eq!(sum.denom(), &BigInt::from(6));
    }

    #[test]
    fn rejects_non_canonical_and_missing_operand() {
        let f = PrimeField::new(7).unwrap();
        assert!(matches!(
            scalar_arith(&f, ScalarOp::Add, &9, Some(&1)),
            Err(Error::NotCanonical(..))
        ));
        assert!(scalar_arith(&f, ScalarOp::Mul, &2, None).is_err());
    }

    #[test]
    fn primality() {
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(2).is_ok());
        assert!(is_prime(DEFAULT_PRIME));
        assert!(is_prime(18_446_744_073_709_551_557)); // largest 64-bit prime
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
        let brute = |n: u64| {
            n >= 2
                && (2..n)
                    .take_while(|d| d * d <= n)
                    .all(|d| !n.is_multiple_of(d))
        };
        for n in 0..2000 {
            assert_eq!(is_prime(n), brute(n), "{n}");
        }
    }

    #[test]
    fn large_modulus_arithmetic() {
        let p = 18_446_744_073_709_551_557;
        let f = PrimeField::new(p).unwrap();
        let a = p - 1;
        assert_eq!(f.add(&a, &a), p - 2);
        assert_eq!(f.mul(&a, &a), 1);
        assert_eq!(f.sub(&0, &1), p - 1);
        assert_eq!(f.mul(&f.inv(&12345).unwrap(), &12345), 1);
    }

    #[test]
    fn gf2_and_signed_reduction() {
        let f = PrimeField::new(2).unwrap();
        assert_eq!(f.add(&1, &1), 0);
        assert_eq!(f.neg(&1), 1);
        let g = PrimeField::new(7).unwrap();
        assert_eq!(g.from_i64(-1), 6);
        assert_eq!(g.from_i64(15), 1);
    }

    #[test]
    fn field_axioms_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in [2u64, 7, DEFAULT_PRIME, 18_446_744_073_709_551_557] {
            let f = PrimeField::new(p).unwrap();
            for _ in 0..200 {
                let [a, b, c] = [0; 3].map(|_| f.sample(&mut rng).unwrap());
                assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
                assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
                assert_eq!(
                    f.mul(&a, &f.add(&b, &c)),
                    f.add(&f.mul(&a, &b), &f.mul(&a, &c))
                );
                assert_eq!(f.add(&a, &f.neg(&a)), 0);
                assert_eq!(f.sub(&a, &b), f.add(&a, &f.neg(&b)));
                if a != 0 {
                    assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
                }
            }
        }
        for _ in 0..100 {
            let [a, b, c] = [0; 3].map(|_| q(rng.random_range(-50..50), rng.random_range(1..30)));
            let r = Rationals;
            assert_eq!(
                r.mul(&a, &r.add(&b, &c)),
                r.add(&r.mul(&a, &b), &r.mul(&a, &c))
            );
            assert!(r.is_canonical(&r.mul(&a, &b)));
            if !a.is_zero() {
                assert!(r.mul(&a, &r.inv(&a).unwrap()).is_one());
            }
        }
    }
}
