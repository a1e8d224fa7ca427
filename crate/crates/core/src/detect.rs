//! Deciding whether a set of matrices generates all of `M_n(F)`, or all of a
//! block upper triangular algebra, with a double Capelli test polynomial.
//!
//! `h_{4n-t-1}` vanishes on every proper subalgebra of the block upper
//! triangular algebra with `t` diagonal blocks and does not vanish on the
//! algebra itself. So a nonzero value at elements of the generated algebra
//! certifies that the generators generate everything, and a run of zero
//! values makes "proper" likely. The closure dimension gives an exact answer
//! to compare against.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_rational::BigRational;
use rand::{Rng as _, RngCore};

use crate::algebra::{closure, in_block_upper, make_block_upper, AlgebraBasis};
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::field::Field;
use crate::lab::{
    double_staircase, e12_remark_tuple, find_witness, is_identity_randomized, witness_at,
    IdentityVerdict, Witness, WitnessStrategy,
};
use crate::matrix::Matrix;
use crate::poly::PolynomialSpec;
use crate::rng::seeded;

pub const DEFAULT_TRIALS: usize = 32;

/// Milliseconds since an arbitrary origin. Core code has no clock of its own.
pub trait Clock {
    fn now_ms(&self) -> f64;
}

/// A clock that always reads zero.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn now_ms(&self) -> f64 {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DetectMode {
    PolyTest,
    Oracle,
    #[default]
    Both,
}

impl DetectMode {
    pub fn name(self) -> &'static str {
        match self {
            DetectMode::PolyTest => "poly_test",
            DetectMode::Oracle => "oracle",
            DetectMode::Both => "both",
        }
    }
}

impl core::str::FromStr for DetectMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "poly_test" => Ok(DetectMode::PolyTest),
            "oracle" => Ok(DetectMode::Oracle),
            "both" => Ok(DetectMode::Both),
            other => Err(Error::InvalidArgument(format!(
                "unknown detection mode {other:?} (expected poly_test, oracle or both)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectionConfig {
    pub trials: usize,
    pub seed: u64,
    pub mode: DetectMode,
    /// Adjoin the identity when forming the generated algebra.
    pub unital: bool,
}

impl Default for DetectionConfig {
    fn default() -> Self {
        Self {
            trials: DEFAULT_TRIALS,
            seed: 0,
            mode: DetectMode::Both,
            unital: true,
        }
    }
}

/// The algebra the generators are tested against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    Full(usize),
    /// Block upper triangular matrices with these diagonal block sizes.
    Blocks(Vec<usize>),
}

impl Target {
    pub fn e(l: usize, m: usize) -> Self {
        Target::Blocks(alloc::vec![l, m])
    }

    pub fn blocks(&self) -> Vec<usize> {
        match self {
            Target::Full(n) => alloc::vec![*n],
            Target::Blocks(b) => b.clone(),
        }
    }

    pub fn n(&self) -> usize {
        self.blocks().iter().sum()
    }

    /// `h_{4n-t-1}` for `t` diagonal blocks.
    pub fn test_polynomial(&self) -> Result<PolynomialSpec> {
        let t = self.blocks().len();
        let n = self.n();
        if n == 0 || t == 0 {
            return Err(Error::ZeroSize);
        }
        PolynomialSpec::double_capelli(4 * n - t - 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome<F: Field> {
    Full(Witness<F>),
    ProperCertified {
        dim: usize,
    },
    ProperLikely {
        trials: usize,
        error_bound: BigRational,
    },
}

impl<F: Field> Outcome<F> {
    pub fn kind(&self) -> &'static str {
        match self {
            Outcome::Full(_) => "full",
            Outcome::ProperCertified { .. } => "proper_certified",
            Outcome::ProperLikely { .. } => "proper_likely",
        }
    }

    pub fn is_full(&self) -> bool {
        matches!(self, Outcome::Full(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionVerdict<F: Field> {
    pub outcome: Outcome<F>,
    pub polynomial: PolynomialSpec,
    pub closure_dim: usize,
    pub target_dim: usize,
    /// Milliseconds per phase, in the order the phases ran.
    pub timing_ms: Vec<(&'static str, f64)>,
}

/// Smallest admissible field order for randomized testing of `M_n`.
pub fn min_field_order(n: usize) -> u64 {
    100 * (4 * n as u64 - 2)
}

/// Whether `generators` generate `M_n(F)`, tested with `h_{4n-2}`.
pub fn detect_full<F: Field, E: Executor, C: Clock>(
    field: &F,
    n: usize,
    generators: &[Matrix<F>],
    config: &DetectionConfig,
    exec: &E,
    clock: &C,
) -> Result<DetectionVerdict<F>> {
    detect(field, &Target::Full(n), generators, config, exec, clock)
}

/// Whether `generators`, all inside `E(l, m)`, generate `E(l, m)`, tested
/// with `h_{4n-3}`.
pub fn detect_proper_in_e<F: Field, E: Executor, C: Clock>(
    field: &F,
    l: usize,
    m: usize,
    generators: &[Matrix<F>],
    config: &DetectionConfig,
    exec: &E,
    clock: &C,
) -> Result<DetectionVerdict<F>> {
    if l == 0 || m == 0 {
        return Err(Error::InvalidArgument(format!(
            "E({l},{m}) needs l, m >= 1"
        )));
    }
    detect(field, &Target::e(l, m), generators, config, exec, clock)
}

/// Whether `generators` generate the block upper triangular algebra with
/// the given blocks, tested with `h_{4n-t-1}`.
pub fn detect_block_upper<F: Field, E: Executor, C: Clock>(
    field: &F,
    blocks: &[usize],
    generators: &[Matrix<F>],
    config: &DetectionConfig,
    exec: &E,
    clock: &C,
) -> Result<DetectionVerdict<F>> {
    let target = if blocks.len() == 1 {
        Target::Full(blocks[0])
    } else {
        Target::Blocks(blocks.to_vec())
    };
    detect(field, &target, generators, config, exec, clock)
}

pub fn detect<F: Field, E: Executor, C: Clock>(
    field: &F,
    target: &Target,
    generators: &[Matrix<F>],
    config: &DetectionConfig,
    exec: &E,
    clock: &C,
) -> Result<DetectionVerdict<F>> {
    let blocks = target.blocks();
    if blocks.is_empty() || blocks.contains(&0) {
        return Err(Error::InvalidArgument(format!(
            "block sizes must be positive, got {blocks:?}"
        )));
    }
    if config.trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let n = target.n();
    let polynomial = target.test_polynomial()?;
    let ambient = make_block_upper(field, &blocks)?;
    for (k, g) in generators.iter().enumerate() {
        if g.field() != field {
            return Err(Error::DomainMismatch(field.domain(), g.field().domain()));
        }
        if g.n() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                found: g.n(),
            });
        }
        if !in_block_upper(g, &blocks) {
            return Err(Error::NotInAlgebra(format!(
                "generator {} lies outside {}",
                k + 1,
                ambient.name()
            )));
        }
    }
    let mut timing_ms = Vec::new();
    let start = clock.now_ms();
    let algebra = closure(field, n, generators, config.unital)?;
    timing_ms.push(("closure", clock.now_ms() - start));

    let poly = match config.mode {
        DetectMode::Oracle => None,
        _ => {
            let start = clock.now_ms();
            let out = poly_test(&polynomial, &algebra, &ambient, config, exec)?;
            timing_ms.push(("poly_test", clock.now_ms() - start));
            Some(out)
        }
    };
    let oracle = match config.mode {
        DetectMode::PolyTest => None,
        _ => {
            let start = clock.now_ms();
            let out = oracle(&polynomial, &algebra, &ambient, &blocks, config, exec)?;
            timing_ms.push(("oracle", clock.now_ms() - start));
            Some(out)
        }
    };
    let outcome = match (poly, oracle) {
        (Some(p), None) => p,
        (None, Some(o)) => o,
        (Some(p), Some(o)) => reconcile(p, o, &algebra)?,
        (None, None) => unreachable!(),
    };
    Ok(DetectionVerdict {
        outcome,
        polynomial,
        closure_dim: algebra.dim(),
        target_dim: ambient.dim(),
        timing_ms,
    })
}

fn reconcile<F: Field>(
    poly: Outcome<F>,
    oracle: Outcome<F>,
    algebra: &AlgebraBasis<F>,
) -> Result<Outcome<F>> {
    match (poly, oracle) {
        (Outcome::Full(w), Outcome::ProperCertified { dim }) => Err(Error::Inconsistent(format!(
            "the test polynomial is nonzero on an algebra of dimension {dim}: value {} at x = {:?}, y = {:?}; closure basis {:?}",
            w.value.format_rows(),
            w.subst.xs.iter().map(Matrix::format_rows).collect::<Vec<_>>(),
            w.subst.ys.iter().map(Matrix::format_rows).collect::<Vec<_>>(),
            algebra.basis().iter().map(Matrix::format_rows).collect::<Vec<_>>(),
        ))),
        (Outcome::Full(w), Outcome::Full(_)) => Ok(Outcome::Full(w)),
        (Outcome::ProperLikely { .. }, o) => Ok(o),
        (p, _) => Ok(p),
    }
}

fn poly_test<F: Field, E: Executor>(
    polynomial: &PolynomialSpec,
    algebra: &AlgebraBasis<F>,
    ambient: &AlgebraBasis<F>,
    config: &DetectionConfig,
    exec: &E,
) -> Result<Outcome<F>> {
    let field = algebra.field();
    let Some(order) = field.order() else {
        return Err(Error::NotSampleable(field.domain()));
    };
    let need = min_field_order(algebra.n());
    if order <= need {
        return Err(Error::FieldTooSmall {
            p: order,
            degree: polynomial.total_degree(),
            need,
        });
    }
    match is_identity_randomized(polynomial, algebra, config.trials, config.seed, exec)? {
        IdentityVerdict::NotIdentity(w) => {
            if algebra.dim() < ambient.dim() {
                return Err(Error::Inconsistent(format!(
                    "{polynomial} is nonzero ({}) on a subalgebra of dimension {} < {}",
                    w.value.format_rows(),
                    algebra.dim(),
                    ambient.dim()
                )));
            }
            Ok(Outcome::Full(w))
        }
        IdentityVerdict::IdentityProbable {
            trials,
            error_bound,
        } => Ok(Outcome::ProperLikely {
            trials,
            error_bound,
        }),
        IdentityVerdict::IdentityExhaustive { .. } => {
            unreachable!("randomized scan never certifies")
        }
    }
}

fn oracle<F: Field, E: Executor>(
    polynomial: &PolynomialSpec,
    algebra: &AlgebraBasis<F>,
    ambient: &AlgebraBasis<F>,
    blocks: &[usize],
    config: &DetectionConfig,
    exec: &E,
) -> Result<Outcome<F>> {
    if algebra.dim() < ambient.dim() {
        return Ok(Outcome::ProperCertified { dim: algebra.dim() });
    }
    let field = algebra.field();
    let known = match blocks {
        [n] => Some(double_staircase(field, *n)?),
        [1, 2] => Some(e12_remark_tuple(field)?),
        _ => None,
    };
    if let Some(subst) = known {
        if let Some(w) = witness_at(polynomial, subst)? {
            return Ok(Outcome::Full(w));
        }
    }
    if field.order().is_some() {
        let strategy = WitnessStrategy::Random {
            seed: config.seed ^ 0x04ac1e,
            budget: config.trials,
        };
        if let Some(w) = find_witness(polynomial, ambient, strategy, exec)? {
            return Ok(Outcome::Full(w));
        }
    }
    match find_witness(polynomial, ambient, WitnessStrategy::BasisExhaustive, exec) {
        Ok(Some(w)) => Ok(Outcome::Full(w)),
        Ok(None) => Err(Error::Inconsistent(format!(
            "{polynomial} vanishes on all of {}",
            ambient.name()
        ))),
        Err(Error::Infeasible { .. }) => Err(Error::Inconsistent(format!(
            "no witness for {polynomial} on {} within {} random trials",
            ambient.name(),
            config.trials
        ))),
        Err(e) => Err(e),
    }
}

/// Shapes of random subalgebras generated for cross-validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseShape {
    /// Random matrices in `M_n`.
    Unrestricted,
    /// Random elements of a block upper triangular algebra with at least two
    /// blocks.
    BlockUpper,
    Diagonal,
    /// Scalars plus the radical of some `E(l, m)`.
    ScalarRadical,
    /// Random elements of the twisted diagonal algebra (even `n`).
    Twisted,
}

impl CaseShape {
    pub fn name(self) -> &'static str {
        match self {
            CaseShape::Unrestricted => "unrestricted",
            CaseShape::BlockUpper => "block_upper",
            CaseShape::Diagonal => "diagonal",
            CaseShape::ScalarRadical => "scalar_radical",
            CaseShape::Twisted => "twisted",
        }
    }

    fn available(n: usize) -> Vec<CaseShape> {
        let mut out = alloc::vec![CaseShape::Unrestricted];
        if n >= 2 {
            out.extend([
                CaseShape::BlockUpper,
                CaseShape::Diagonal,
                CaseShape::ScalarRadical,
            ]);
        }
        if n >= 2 && n.is_multiple_of(2) {
            out.push(CaseShape::Twisted);
        }
        out
    }
}

fn random_composition<R: RngCore + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    loop {
        let mut blocks = Vec::new();
        let mut run = 1;
        for _ in 1..n {
            if rng.random_bool(0.5) {
                blocks.push(run);
                run = 1;
            } else {
                run += 1;
            }
        }
        blocks.push(run);
        if blocks.len() >= 2 {
            return blocks;
        }
    }
}

fn random_invertible<F: Field, R: RngCore + ?Sized>(
    field: &F,
    n: usize,
    rng: &mut R,
) -> Result<(Matrix<F>, Matrix<F>)> {
    loop {
        let q = Matrix::random(field, n, rng)?;
        if let Some(inv) = q.inverse() {
            return Ok((q, inv));
        }
    }
}

/// `count` generators of shape `shape`, conjugated by a random invertible
/// matrix so that the algebra is not presented in a coordinate basis.
pub fn random_case<F: Field>(
    field: &F,
    n: usize,
    shape: CaseShape,
    count: usize,
    seed: u64,
    case: u64,
) -> Result<Vec<Matrix<F>>> {
    let mut rng = seeded(seed, case);
    let ambient = match shape {
        CaseShape::Unrestricted => crate::algebra::make_full(field, n)?,
        CaseShape::BlockUpper => make_block_upper(field, &random_composition(n, &mut rng))?,
        CaseShape::Diagonal => crate::algebra::make_diagonal(field, n)?,
        CaseShape::ScalarRadical => {
            let l = rng.random_range(1..n);
            let mut basis = crate::algebra::make_t(field, l, n - l)?.basis().to_vec();
            basis.push(Matrix::identity(field, n)?);
            AlgebraBasis::from_spanning("scalar_radical", field, n, basis)?
        }
        CaseShape::Twisted => crate::algebra::make_twisted_diagonal(field, n / 2)?,
    };
    let (q, q_inv) = random_invertible(field, n, &mut rng)?;
    (0..count)
        .map(|_| {
            let g = crate::algebra::random_element(&ambient, &mut rng)?;
            q.mul(&g)?.mul(&q_inv)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseRecord<F: Field> {
    pub index: usize,
    pub shape: CaseShape,
    pub generators: Vec<Matrix<F>>,
    pub algebra: AlgebraBasis<F>,
    pub poly: &'static str,
    pub oracle: &'static str,
    /// Set when the two modes contradict each other in a way the theorem
    /// rules out.
    pub failure: Option<String>,
}

/// Counts of `(poly_test outcome, oracle outcome)` pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AgreementMatrix {
    pub full_full: usize,
    pub full_certified: usize,
    pub likely_full: usize,
    pub likely_certified: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossValidationReport<F: Field> {
    pub n: usize,
    pub seed: u64,
    pub cases: Vec<CaseRecord<F>>,
    pub agreement: AgreementMatrix,
}

impl<F: Field> CrossValidationReport<F> {
    pub fn hard_disagreements(&self) -> impl Iterator<Item = &CaseRecord<F>> {
        self.cases.iter().filter(|c| c.failure.is_some())
    }

    pub fn proper_algebras(&self) -> impl Iterator<Item = &AlgebraBasis<F>> {
        self.cases
            .iter()
            .filter(|c| !c.algebra.is_full())
            .map(|c| &c.algebra)
    }
}

/// Runs both detector modes against `M_n` on `num_cases` random subalgebras.
/// Case `i` uses `generator_counts[i % len]` generators and a shape chosen
/// from stream `i` of `seed`.
pub fn cross_validate<F: Field, E: Executor>(
    field: &F,
    n: usize,
    num_cases: usize,
    generator_counts: &[usize],
    seed: u64,
    config: &DetectionConfig,
    exec: &E,
) -> Result<CrossValidationReport<F>> {
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    if generator_counts.is_empty() {
        return Err(Error::InvalidArgument(
            "generator_counts must not be empty".into(),
        ));
    }
    let shapes = CaseShape::available(n);
    let records = exec.map(num_cases, |i| -> Result<CaseRecord<F>> {
        let mut rng = seeded(seed, (1 << 32) | i as u64);
        let shape = shapes[rng.random_range(0..shapes.len())];
        let count = generator_counts[i % generator_counts.len()];
        let generators = random_case(field, n, shape, count, seed, i as u64)?;
        let algebra = closure(field, n, &generators, config.unital)?;
        let case_config = DetectionConfig {
            mode: DetectMode::PolyTest,
            seed: seed.wrapping_add(i as u64),
            ..config.clone()
        };
        let (poly, mut failure) = match detect_full(
            field,
            n,
            &generators,
            &case_config,
            &crate::exec::Sequential,
            &NoClock,
        ) {
            Ok(v) => (v.outcome.kind(), None),
            Err(Error::Inconsistent(msg)) => ("full", Some(msg)),
            Err(e) => return Err(e),
        };
        let oracle_config = DetectionConfig {
            mode: DetectMode::Oracle,
            ..case_config
        };
        let oracle = detect_full(
            field,
            n,
            &generators,
            &oracle_config,
            &crate::exec::Sequential,
            &NoClock,
        )?
        .outcome
        .kind();
        if failure.is_none() && poly == "full" && oracle == "proper_certified" {
            failure = Some(format!(
                "poly_test found a witness on a subalgebra of dimension {}",
                algebra.dim()
            ));
        }
        Ok(CaseRecord {
            index: i,
            shape,
            generators,
            algebra,
            poly,
            oracle,
            failure,
        })
    });
    let cases = records.into_iter().collect::<Result<Vec<_>>>()?;
    let mut agreement = AgreementMatrix::default();
    for c in &cases {
        match (c.poly, c.oracle) {
            ("full", "full") => agreement.full_full += 1,
            ("full", _) => agreement.full_certified += 1,
            (_, "full") => agreement.likely_full += 1,
            _ => agreement.likely_certified += 1,
        }
    }
    Ok(CrossValidationReport {
        n,
        seed,
        cases,
        agreement,
    })
}
