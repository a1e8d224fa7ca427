//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process fails if any criterion does.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use capelli::cli::run;
use capelli::exec::RayonExecutor;
use capelli_core::algebra::{
    closure, make_diagonal, make_e, make_full, make_scalars, make_t, make_twisted_diagonal,
};
use capelli_core::detect::{cross_validate, DetectionConfig};
use capelli_core::lab::{
    capelli_staircase, double_staircase, e12_remark_tuple, find_witness, is_identity_exhaustive,
    is_identity_randomized, schwartz_zippel_bound, verify_decomposition, DecompositionRule,
    IdentityVerdict, Routing, SignRule, WitnessStrategy, DEFAULT_EXHAUSTIVE_CAP,
};
use capelli_core::poly::evaluate;
use capelli_core::rng::seeded;
use capelli_core::{
    AlgebraBasis, EvalImpl, Field, Matrix, PolynomialSpec, PrimeField, Rationals, Substitution,
    DEFAULT_PRIME,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn gf() -> PrimeField {
    PrimeField::new(DEFAULT_PRIME).unwrap()
}

fn cli(args: &[&str]) -> (i32, Value) {
    let out = run(std::iter::once("capelli").chain(args.iter().copied()));
    (out.code, out.report.unwrap_or(Value::Null))
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let took = start.elapsed();
    ensure!(took < limit, "{what} took {took:.2?}, limit {limit:.0?}");
    Ok(())
}

fn spec(s: &str) -> PolynomialSpec {
    s.parse().unwrap()
}

fn exhaustive<F: Field>(s: &str, alg: &AlgebraBasis<F>) -> IdentityVerdict<F> {
    is_identity_exhaustive(
        &spec(s),
        alg,
        DEFAULT_EXHAUSTIVE_CAP,
        &capelli_core::exec::Sequential,
    )
    .unwrap()
}

fn two_i_minus_e11<F: Field>(f: &F, n: usize) -> Matrix<F> {
    Matrix::identity(f, n)
        .unwrap()
        .scale(&f.from_i64(2))
        .sub(&Matrix::unit(f, 1, 1, n).unwrap())
        .unwrap()
}

fn amitsur_levitzki() -> Outcome {
    let start = Instant::now();
    for (poly, alg, combos) in [("s:4", "full:2", 1), ("s:6", "full:3", 84)] {
        let (code, r) = cli(&[
            "verify-identity",
            "--poly",
            poly,
            "--algebra",
            alg,
            "--mode",
            "exhaustive",
        ]);
        ensure!(
            code == 0 && r["status"] == "identity_exhaustive",
            "{poly} on {alg}: exit {code}, {}",
            r["status"]
        );
        ensure!(
            r["combinations"] == combos,
            "{poly} on {alg}: {} combinations",
            r["combinations"]
        );
    }
    let (code, r) = cli(&[
        "verify-identity",
        "--poly",
        "s:3",
        "--algebra",
        "full:2",
        "--mode",
        "exhaustive",
    ]);
    ensure!(
        code == 1 && r["status"] == "not_identity",
        "s:3 on full:2 gave exit {code}"
    );
    within(start, Duration::from_secs(1), "criterion 1")?;
    Ok("s:4/M_2 (1 combination), s:6/M_3 (84) certified; s:3/M_2 witness".into())
}

fn domokos_corollary() -> Outcome {
    let start = Instant::now();
    let (code, r) = cli(&[
        "verify-identity",
        "--poly",
        "h:7",
        "--algebra",
        "full:2",
        "--mode",
        "exhaustive",
    ]);
    ensure!(
        code == 0 && r["combinations"] == 4,
        "h:7 on full:2: exit {code}, {r}"
    );
    let f = gf();
    let v = is_identity_randomized(
        &spec("h:11"),
        &make_full(&f, 3).unwrap(),
        50,
        11,
        &RayonExecutor::new(None).unwrap(),
    )
    .unwrap();
    let IdentityVerdict::IdentityProbable {
        trials,
        error_bound,
    } = v
    else {
        return Err(format!("h:11 on M_3 is {}", v.status()));
    };
    ensure!(trials == 50, "{trials} trials");
    // The bound is computed with |S| = p = 2^31 - 1, the order of the field.
    let expected = num_traits::pow(
        BigRational::new(BigInt::from(11), BigInt::from(DEFAULT_PRIME)),
        50,
    );
    ensure!(
        error_bound == expected,
        "error bound {error_bound} is not (11/p)^50"
    );
    ensure!(
        error_bound == schwartz_zippel_bound(11, DEFAULT_PRIME, 50),
        "bound mismatch"
    );
    within(start, Duration::from_secs(30), "criterion 2")?;
    Ok(
        "h:7/M_2 certified with 4 combinations; h:11/M_3 clean over 50 trials, bound (11/p)^50"
            .into(),
    )
}

fn double_staircase_values() -> Outcome {
    let f = gf();
    for n in 1..=4 {
        let subst = double_staircase(&f, n).unwrap();
        let h = PolynomialSpec::h(4 * n - 2);
        let dp = evaluate(&h, &subst, EvalImpl::SubsetDp).unwrap();
        ensure!(
            dp == two_i_minus_e11(&f, n),
            "n = {n}: value {}",
            dp.format_rows()
        );
        if n <= 3 {
            ensure!(
                evaluate(&h, &subst, EvalImpl::Naive).unwrap() == dp,
                "n = {n}: naive disagrees"
            );
        }
    }
    let q = evaluate(
        &PolynomialSpec::h(6),
        &double_staircase(&Rationals, 2).unwrap(),
        EvalImpl::Naive,
    )
    .unwrap();
    ensure!(
        q == two_i_minus_e11(&Rationals, 2),
        "over Q: {}",
        q.format_rows()
    );
    Ok("h_{4n-2}(staircase) = 2I - e11 for n = 1..4".into())
}

fn capelli_staircase_values() -> Outcome {
    let f = gf();
    for n in 2..=3 {
        let c = PolynomialSpec::capelli(2 * n * n).unwrap();
        let value = evaluate(&c, &capelli_staircase(&f, n).unwrap(), EvalImpl::SubsetDp).unwrap();
        ensure!(
            value == Matrix::unit(&f, 1, 1, n).unwrap(),
            "n = {n}: {}",
            value.format_rows()
        );
    }
    let c8 = PolynomialSpec::capelli(8).unwrap();
    let naive = evaluate(&c8, &capelli_staircase(&f, 2).unwrap(), EvalImpl::Naive).unwrap();
    ensure!(
        naive == Matrix::unit(&f, 1, 1, 2).unwrap(),
        "naive c_8 disagrees"
    );
    Ok("c_{2n^2}(staircase) = e11 for n = 2, 3".into())
}

fn theorem_sweep() -> Outcome {
    let start = Instant::now();
    let f = gf();
    let exec = RayonExecutor::new(None).unwrap();
    let mut t11 = make_t(&f, 1, 1).unwrap().basis().to_vec();
    t11.push(Matrix::identity(&f, 2).unwrap());
    let fixtures = [
        make_e(&f, 1, 1).unwrap(),
        make_t(&f, 1, 1).unwrap(),
        make_twisted_diagonal(&f, 1).unwrap(),
        make_diagonal(&f, 2).unwrap(),
        make_scalars(&f, 2).unwrap(),
    ];
    for alg in &fixtures {
        let v = exhaustive("h:6", alg);
        ensure!(
            matches!(v, IdentityVerdict::IdentityExhaustive { .. }),
            "h:6 on {}: {}",
            alg.name(),
            v.status()
        );
    }
    let config = DetectionConfig::default();
    let n2 =
        cross_validate(&f, 2, 200, &[1, 2, 3], 1, &config, &exec).map_err(|e| e.to_string())?;
    ensure!(
        n2.hard_disagreements().count() == 0,
        "n = 2: {} hard disagreements",
        n2.hard_disagreements().count()
    );
    let n3 = cross_validate(&f, 3, 50, &[1, 2, 3], 2, &config, &exec).map_err(|e| e.to_string())?;
    ensure!(
        n3.hard_disagreements().count() == 0,
        "n = 3: {} hard disagreements",
        n3.hard_disagreements().count()
    );

    // A further sample supplies 200 proper subalgebras of M_2.
    let pool =
        cross_validate(&f, 2, 400, &[1, 2, 3], 3, &config, &exec).map_err(|e| e.to_string())?;
    ensure!(
        pool.hard_disagreements().count() == 0,
        "pool: hard disagreements"
    );
    let proper: Vec<_> = n2
        .proper_algebras()
        .chain(pool.proper_algebras())
        .take(200)
        .collect();
    ensure!(
        proper.len() == 200,
        "only {} proper subalgebras found",
        proper.len()
    );
    for alg in &proper {
        let mut alg = (*alg).clone();
        ensure!(
            alg.certify_closed() && alg.dim() < 4,
            "case algebra is not a proper subalgebra"
        );
        let v = exhaustive("h:6", &alg);
        ensure!(
            v.is_identity(),
            "h:6 has a witness on a proper subalgebra of dimension {}",
            alg.dim()
        );
    }
    within(start, Duration::from_secs(120), "criterion 5")?;
    let a = n2.agreement;
    Ok(format!(
        "5 fixtures + 200 random proper subalgebras certified; n=2 agreement full/full {} proper {}, n=3 full/full {} proper {}",
        a.full_full,
        a.likely_certified,
        n3.agreement.full_full,
        n3.agreement.likely_certified
    ))
}

fn e_test() -> Outcome {
    let f = gf();
    let value = evaluate(
        &PolynomialSpec::h(9),
        &e12_remark_tuple(&f).unwrap(),
        EvalImpl::SubsetDp,
    )
    .unwrap();
    ensure!(
        value == Matrix::unit(&f, 1, 2, 3).unwrap().scale(&2),
        "remark tuple gives {}",
        value.format_rows()
    );
    let naive = evaluate(
        &PolynomialSpec::h(9),
        &e12_remark_tuple(&f).unwrap(),
        EvalImpl::Naive,
    )
    .unwrap();
    ensure!(naive == value, "naive disagrees on the remark tuple");

    let seq = capelli_core::exec::Sequential;
    let e11 = make_e(&f, 1, 1).unwrap();
    let w = find_witness(&spec("h:5"), &e11, WitnessStrategy::BasisExhaustive, &seq).unwrap();
    ensure!(
        w.is_some_and(|w| w.verify(&spec("h:5")).unwrap()),
        "no h:5 witness on E(1,1)"
    );
    let mut scalar_radical = make_t(&f, 1, 1).unwrap().basis().to_vec();
    scalar_radical.push(Matrix::identity(&f, 2).unwrap());
    let fixtures = [
        make_twisted_diagonal(&f, 1).unwrap(),
        make_diagonal(&f, 2).unwrap(),
        closure(&f, 2, &scalar_radical, true).unwrap(),
    ];
    for alg in &fixtures {
        ensure!(
            alg.dim() < e11.dim(),
            "fixture {} is not proper",
            alg.name()
        );
        let v = exhaustive("h:5", alg);
        ensure!(
            matches!(v, IdentityVerdict::IdentityExhaustive { .. }),
            "h:5 on {}: {}",
            alg.name(),
            v.status()
        );
    }
    Ok("h_9(remark tuple) = 2e12; h:5 witness on E(1,1), identity on twisted, diagonal, T + scalars".into())
}

fn decomposition() -> Outcome {
    let f = gf();
    let mut lines = Vec::new();
    for (q, r) in [(2, 2), (2, 4), (4, 4)] {
        let report = verify_decomposition(&f, q, r, 3, 20, 7).map_err(|e| e.to_string())?;
        ensure!(report.holds, "({q},{r}) fails on random 3x3 tuples");
        ensure!(
            report.rule
                == DecompositionRule {
                    routing: Routing::Complementary,
                    sign: SignRule::ShuffleParity
                },
            "calibrated to {:?}",
            report.rule
        );
        lines.push(format!("({q},{r}): {} terms", report.terms));
    }
    Ok(format!(
        "calibrated rule Complementary/ShuffleParity; {}",
        lines.join(", ")
    ))
}

fn families(t: usize) -> Vec<PolynomialSpec> {
    let mut out = vec![PolynomialSpec::standard(t).unwrap()];
    for deg in [2 * t - 1, 2 * t] {
        out.push(PolynomialSpec::capelli(deg).unwrap());
        out.push(PolynomialSpec::double_capelli(deg).unwrap());
    }
    out
}

fn random_tuple<F: Field>(f: &F, spec: &PolynomialSpec, n: usize, seed: u64) -> Substitution<F> {
    let (a, b) = spec.arity();
    let mut rng = seeded(seed, 0);
    let mut draw = || match f.order() {
        Some(_) => Matrix::random(f, n, &mut rng).unwrap(),
        None => Matrix::random_small(f, n, 2, &mut rng).unwrap(),
    };
    let xs = (0..a).map(|_| draw()).collect();
    let ys = (0..b).map(|_| draw()).collect();
    Substitution::new(xs, ys)
}

/// DP = naive, then alternation, multilinearity and vanishing on repeats, all
/// on the same tuple.
fn check_tuple<F: Field>(
    f: &F,
    spec: &PolynomialSpec,
    subst: &Substitution<F>,
    seed: u64,
) -> Result<(), String> {
    let naive = evaluate(spec, subst, EvalImpl::Naive).unwrap();
    let dp = evaluate(spec, subst, EvalImpl::SubsetDp).unwrap();
    ensure!(
        naive == dp,
        "{spec}: naive and subset_dp differ (seed {seed})"
    );
    let eval = |s: &Substitution<F>| evaluate(spec, s, EvalImpl::SubsetDp).unwrap();
    let (a, b) = spec.arity();
    if a >= 2 {
        let (i, j) = ((seed as usize) % a, (seed as usize + 1) % a);
        let mut swapped = subst.clone();
        swapped.xs.swap(i, j);
        ensure!(eval(&swapped) == dp.neg(), "{spec}: x swap does not negate");
        let mut repeated = subst.clone();
        repeated.xs[j] = repeated.xs[i].clone();
        ensure!(
            eval(&repeated).is_zero(),
            "{spec}: repeated x does not vanish"
        );
    }
    if spec.y_alternating() && b >= 2 {
        let (i, j) = ((seed as usize) % b, (seed as usize + 1) % b);
        let mut swapped = subst.clone();
        swapped.ys.swap(i, j);
        ensure!(eval(&swapped) == dp.neg(), "{spec}: y swap does not negate");
        let mut repeated = subst.clone();
        repeated.ys[j] = repeated.ys[i].clone();
        ensure!(
            eval(&repeated).is_zero(),
            "{spec}: repeated y does not vanish"
        );
    }
    // Linearity in the last argument: f(.., u + 2v) = f(.., u) + 2 f(.., v).
    let mut other = subst.clone();
    let last = if b > 0 {
        other.ys.last_mut().unwrap()
    } else {
        other.xs.last_mut().unwrap()
    };
    *last = subst.xs[0].clone();
    let mut combined = subst.clone();
    let slot = if b > 0 {
        combined.ys.last_mut().unwrap()
    } else {
        combined.xs.last_mut().unwrap()
    };
    *slot = slot.add(&subst.xs[0].scale(&f.from_i64(2))).unwrap();
    let expected = dp.add(&eval(&other).scale(&f.from_i64(2))).unwrap();
    ensure!(
        eval(&combined) == expected,
        "{spec}: not linear in the last argument"
    );
    Ok(())
}

fn evaluator_equivalence() -> Outcome {
    let start = Instant::now();
    let p = gf();
    let two = PrimeField::new(2).unwrap();
    let mut checked = 0;
    for t in 1..=6 {
        let n = t / 2 + 1;
        for spec in families(t) {
            for seed in 0..25 {
                check_tuple(&p, &spec, &random_tuple(&p, &spec, n, seed), seed)?;
                check_tuple(&two, &spec, &random_tuple(&two, &spec, n, seed), seed)?;
                checked += 2;
            }
            for seed in 0..5 {
                check_tuple(
                    &Rationals,
                    &spec,
                    &random_tuple(&Rationals, &spec, n, seed),
                    seed,
                )?;
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{checked} tuples, t <= 6, GF(p), GF(2) and Q, in {:.1?}",
        start.elapsed()
    ))
}

fn twisted() -> Outcome {
    let f = gf();
    let exec = RayonExecutor::new(None).unwrap();
    for l in 1..=2 {
        let alg = make_twisted_diagonal(&f, l).unwrap();
        let s = PolynomialSpec::standard(2 * l).unwrap();
        let v = is_identity_randomized(&s, &alg, 50, l as u64, &exec).unwrap();
        ensure!(
            matches!(v, IdentityVerdict::IdentityProbable { trials: 50, .. }),
            "{s} on twisted:{l}: {}",
            v.status()
        );
    }
    Ok("s:2 on twisted:1 and s:4 on twisted:2 clean over 50 trials".into())
}

fn performance() -> Outcome {
    let f = gf();
    let h12 = PolynomialSpec::h(12);
    ensure!(
        h12.term_count() == 518_400,
        "h:12 has {} terms",
        h12.term_count()
    );
    let subst = random_tuple(&f, &h12, 3, 12);
    let start = Instant::now();
    let dp = evaluate(&h12, &subst, EvalImpl::SubsetDp).unwrap();
    let dp_time = start.elapsed();
    ensure!(
        dp_time < Duration::from_secs(1),
        "subset_dp took {dp_time:.2?}"
    );
    let start = Instant::now();
    let naive = evaluate(&h12, &subst, EvalImpl::Naive).unwrap();
    let naive_time = start.elapsed();
    ensure!(naive == dp, "naive and subset_dp disagree on h:12");

    let (code, report) = cli(&[
        "bench", "--family", "h", "--t", "6", "--n", "3", "--reps", "1",
    ]);
    ensure!(code == 0, "bench exited {code}");
    let rows = report["rows"].as_array().cloned().unwrap_or_default();
    let impls: Vec<_> = rows
        .iter()
        .map(|r| r["impl"].as_str().unwrap_or("").to_string())
        .collect();
    ensure!(impls == ["naive", "subset_dp"], "bench rows {impls:?}");
    Ok(format!(
        "h:12 on 3x3: subset_dp {dp_time:.1?}, naive {naive_time:.1?}, equal; bench table emitted"
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("Amitsur-Levitzki at desk scale", amitsur_levitzki),
        ("Domokos corollary", domokos_corollary),
        ("double staircase values", double_staircase_values),
        ("Capelli staircase", capelli_staircase_values),
        ("proper subalgebra sweep", theorem_sweep),
        ("test polynomial for E(l,m)", e_test),
        ("decomposition reconstruction", decomposition),
        ("evaluator equivalence", evaluator_equivalence),
        ("twisted diagonal", twisted),
        ("performance sanity", performance),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let took = start.elapsed();
        match result {
            Ok(detail) => println!("PASS criterion {:>2} {name} [{took:.1?}]: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name} [{took:.1?}]: {why}", k + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
