//! Acceptance criteria, one test each. Every test prints a `PASS` or `FAIL`
//! line with its measurements, whether or not it fails.

use std::f64::consts::SQRT_2;
use std::io::Write;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use wu_cli::{run_experiment, Experiment, ExperimentConfig, ResultRow};
use wu_core::busemann::Indicatrix;
use wu_core::domains::{indicatrix_at, sandwich_wu, DomainSpec};
use wu_core::metrics::{elem_reinhardt_metric, MetricKind, MultiIndex};
use wu_core::wu::{
    certify_contradiction_g2, certify_contradiction_gn, min_vol_simplex, min_vol_simplex_bruteforce, wu_metric,
    wu_product, SimplexProgram,
};
use wu_core::{CVector, Complex64, PsiPoint};

/// Bypasses the test harness capture so the line always reaches the terminal.
fn report(criterion: u32, title: &str, pass: bool, details: &[String]) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let mut text = format!("\ncriterion {criterion} {verdict}: {title}\n");
    for d in details {
        text.push_str(&format!("    {d}\n"));
    }
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    let _ = out.flush();
}

fn rel(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}

fn run(experiment: Experiment, edit: impl FnOnce(&mut ExperimentConfig)) -> Vec<ResultRow> {
    let mut cfg = ExperimentConfig::new(experiment);
    edit(&mut cfg);
    run_experiment(&cfg).expect("experiment runs")
}

fn describe(rows: &[ResultRow]) -> Vec<String> {
    rows.iter()
        .map(|r| {
            let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let values: Vec<String> = r.values.iter().map(|(k, v)| format!("{k}={v:.12}")).collect();
            format!(
                "{} {} [{}] {} -> {}",
                if r.pass { "ok  " } else { "FAIL" },
                r.case,
                params.join(" "),
                values.join(" "),
                r.pass
            )
        })
        .collect()
}

fn origin(n: usize) -> CVector {
    CVector::zeros(n)
}

#[test]
fn criterion_1_polydisc_formula() {
    let rows = run(Experiment::PolydiscFormula, |_| {});
    let pass = rows.len() == 20 && rows.iter().all(|r| r.pass);
    let grid_checked = rows.iter().filter(|r| r.get("grid_volume_rel_err").is_some()).count();
    let mut details = describe(&rows);
    details.push(format!("{} cases, {grid_checked} checked against the grid oracle", rows.len()));
    report(1, "polydisc box corner gives a_j = n r_j^2 (1e-8), grid oracle within 1e-3", pass, &details);
    assert!(pass);
}

#[test]
fn criterion_2_constrained_closed_form() {
    let n = 3.0;
    let mut pass = true;
    let mut details = Vec::new();
    for x in [0.3f64, 0.1, 0.05] {
        let mu = (1.0 - x * x).powi(2);
        let nu = (1.0 / x - 1.0).powi(2);
        for a1 in [2.0, 3.0] {
            let prog = SimplexProgram::new(vec![
                PsiPoint::new(vec![mu, 0.0, 1.0]).unwrap(),
                PsiPoint::new(vec![0.0, nu, 1.0]).unwrap(),
            ])
            .unwrap()
            .with_fixed(0, a1)
            .unwrap();
            let sol = min_vol_simplex(&prog).unwrap();
            let grid = min_vol_simplex_bruteforce(&prog, 1e-3).unwrap();
            let got = sol.simplex.intercepts();
            let closed = [a1, nu * a1 / mu, (n - 2.0) * a1 / (a1 - mu)];
            let err = got.iter().zip(&closed).map(|(g, c)| rel(*g, *c)).fold(0.0, f64::max);
            let grid_err = rel(sol.simplex.volume().unwrap(), grid.volume().unwrap());
            let ok = err <= 1e-8 && grid_err <= 1e-3;
            pass &= ok;
            details.push(format!(
                "x={x} a1={a1}: solver ({:.10}, {:.10}, {:.10}) closed form ({:.10}, {:.10}, {:.10}) rel err {err:.3e}, grid volume rel err {grid_err:.3e} -> {}",
                got[0], got[1], got[2], closed[0], closed[1], closed[2], if ok { "ok" } else { "mismatch" }
            ));
        }
    }
    report(2, "constrained simplex matches (a1, nu a1/mu, (n-2) a1/(a1-mu)) within 1e-8", pass, &details);
    assert!(pass);
}

#[test]
fn criterion_3_g2_gap() {
    let e1 = CVector::unit(2, 0);
    let w = sandwich_wu(&indicatrix_at(&DomainSpec::G2, &origin(2)).unwrap(), 1024).unwrap();
    let w0 = w.full(&e1).unwrap();
    let c = certify_contradiction_g2(0.01, 1.1).unwrap();
    let rows = run(Experiment::G2Usc, |_| {});
    let gap = rows.iter().find(|r| r.case == "gap").unwrap();
    let pass = w0 == 1.0
        && w.m == 1
        && c.ratio > 1.0
        && c.ratio >= c.bound - 1e-10
        && gap.pass
        && SQRT_2 > w0;
    let details = vec![
        format!("W(0; e1) = {w0:.17}, m = {}", w.m),
        format!("x=0.01 t=1.1: ratio {:.15} bound {:.15} certified {}", c.ratio, c.bound, c.certified),
        format!("gap row: sqrt 2 = {SQRT_2:.15} > {w0}"),
    ];
    report(3, "G2: W(0;e1) = 1, m = 1, certificate ratio > 1 above t^2 (1-x)^2, sqrt 2 > 1", pass, &details);
    assert!(pass);
}

#[test]
fn criterion_4_gn_gap() {
    let n = 3;
    let w = sandwich_wu(&indicatrix_at(&DomainSpec::Gn { n }, &origin(n)).unwrap(), 1024).unwrap();
    let tilde = w.tilde(&CVector::unit(n, 0)).unwrap();
    let expected = 1.0 / ((n - 1) as f64).sqrt();
    let t = 1.6;
    let at = certify_contradiction_gn(n, 0.01, t).unwrap();
    let finer = certify_contradiction_gn(n, 0.001, t).unwrap();
    let origin_ok = (tilde - expected).abs() <= 1e-10;
    let limit_ok = at.limit > 1.0;
    let finite_ok = at.ratio > 1.0;
    let pass = origin_ok && limit_ok && finite_ok;
    let details = vec![
        format!("W~(0; e1) = {tilde:.17} against 1/sqrt(n-1) = {expected:.17} -> {origin_ok}"),
        format!("limit ratio at t={t}: {:.15} -> {limit_ok}", at.limit),
        format!(
            "finite-x ratio at x=0.01, t={t}: {:.15} (closed form {:.15}) -> {finite_ok}",
            at.ratio, at.closed_form_ratio
        ),
        format!("for reference, x=0.001, t={t}: ratio {:.15}", finer.ratio),
    ];
    report(4, "G_n: W~(0;e1) = 1/sqrt(n-1), limit ratio > 1 at t = 1.6, finite-x ratio > 1 at x = 0.01", pass, &details);
    assert!(pass);
}

#[test]
fn criterion_5_non_monotone() {
    let rows = run(Experiment::Monotone, |c| {
        c.params.n = Some(3);
        c.params.m_list = Some(vec![1.0, 4.0, 16.0, 64.0]);
        c.params.tol = Some(1e-8);
    });
    let truncations = rows.iter().filter(|r| r.case == "truncation").count();
    let pass = truncations == 4 && rows.iter().all(|r| r.pass);
    report(5, "D_m: W~(0;e1) = sqrt(2/3) (1e-8) for every m, at least 0.10 above 1/sqrt 2", pass, &describe(&rows));
    assert!(pass);
}

#[test]
fn criterion_6_rem_one() {
    let rows = run(Experiment::RemOne, |_| {});
    let center = rows.iter().find(|r| r.case == "center").unwrap();
    let away = rows.iter().find(|r| r.case == "away").unwrap();
    let pass = rows.iter().all(|r| r.pass)
        && rel(center.get("axis1").unwrap(), 2.0) <= 1e-10
        && rel(center.get("axis2").unwrap(), 8.0) <= 1e-10
        && away.get("w").unwrap() > center.get("w").unwrap();
    report(6, "W(z0;e1) = 1 via T_(2,8), W(z;e1) = sqrt 2, sqrt 2 > 1", pass, &describe(&rows));
    assert!(pass);
}

#[test]
fn criterion_7_rem_two() {
    let rows = run(Experiment::RemTwo, |_| {});
    let pass = rows.len() == 3 && rows.iter().all(|r| r.pass);
    report(7, "W~ = 1/sqrt 2 and 1/sqrt 3 (1e-10), strict inequality", pass, &describe(&rows));
    assert!(pass);
}

#[test]
fn criterion_8_elementary_reinhardt_table() {
    let rows = run(Experiment::ElemReinhardtTable, |c| c.params.resolution = Some(1024));
    let pass = rows.len() == 12 && rows.iter().all(|r| r.pass && r.get("expected").is_some());
    report(8, "12 golden closed forms (1e-10) and W~ = eta-hat (1%) at resolution 1024", pass, &describe(&rows));
    assert!(pass);
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

fn suite(name: &str, result: Result<(), impl std::fmt::Display>, details: &mut Vec<String>) -> bool {
    match result {
        Ok(()) => {
            details.push(format!("{name}: ok"));
            true
        }
        Err(e) => {
            details.push(format!("{name}: {e}"));
            false
        }
    }
}

fn cloud(n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(0.0f64..2.0, n), 1..=12).prop_map(move |mut pts| {
        for j in 0..n {
            let mut v = vec![0.0; n];
            v[j] = 0.05 + 0.1 * j as f64;
            pts.push(v);
        }
        pts
    })
}

fn program(points: &[Vec<f64>]) -> SimplexProgram {
    SimplexProgram::new(points.iter().map(|p| PsiPoint::new(p.clone()).unwrap()).collect()).unwrap()
}

#[test]
fn criterion_9_property_suites() {
    let mut details = Vec::new();
    let mut pass = true;

    let oracle = runner(100).run(&(2usize..=3).prop_flat_map(cloud), |pts| {
        let prog = program(&pts);
        let v = min_vol_simplex(&prog).unwrap().simplex.volume().unwrap();
        let g = min_vol_simplex_bruteforce(&prog, 1e-3).unwrap().volume().unwrap();
        prop_assert!(rel(v, g) <= 1e-3, "solver {} grid {}", v, g);
        Ok(())
    });
    pass &= suite("simplex solver against grid oracle, 100 clouds, 1e-3", oracle, &mut details);

    let homogeneity = runner(100).run(
        &(1u32..4, 1u32..4, 0.05f64..0.9, 0.05f64..0.9, -2.0f64..2.0, -2.0f64..2.0, -3.0f64..3.0, -3.0f64..3.0, 0usize..3),
        |(p, q, a1, a2, x1, x2, lr, li, kind)| {
            let kind = [MetricKind::Caratheodory(1), MetricKind::Azukawa, MetricKind::Kobayashi][kind];
            let alpha = MultiIndex::new(vec![p as f64, q as f64]).unwrap();
            let a = CVector::from_real(&[a1, a2]);
            let x = CVector::from_real(&[x1, x2]);
            let lambda = Complex64::new(lr, li);
            let v = elem_reinhardt_metric(kind, &alpha, 0.0, &a, &x).unwrap().value.value;
            let vl = elem_reinhardt_metric(kind, &alpha, 0.0, &a, &x.scale(lambda)).unwrap().value.value;
            prop_assert!((vl - lambda.norm() * v).abs() <= 1e-12 * (1.0 + vl));
            Ok(())
        },
    );
    pass &= suite("metric homogeneity eta(a; lambda X) = |lambda| eta(a; X)", homogeneity, &mut details);

    let permutation = runner(50).run(&cloud(3), |pts| {
        let perm = [2usize, 0, 1];
        let base = min_vol_simplex(&program(&pts)).unwrap();
        let permuted: Vec<Vec<f64>> = pts.iter().map(|p| perm.iter().map(|&j| p[j]).collect()).collect();
        let sol = min_vol_simplex(&program(&permuted)).unwrap();
        for (k, &j) in perm.iter().enumerate() {
            prop_assert!(rel(sol.simplex.intercepts()[k], base.simplex.intercepts()[j]) <= 1e-8);
        }
        let mut reversed = pts.clone();
        reversed.reverse();
        let again = min_vol_simplex(&program(&reversed)).unwrap();
        for (a, b) in again.simplex.intercepts().iter().zip(base.simplex.intercepts()) {
            prop_assert!(rel(*a, *b) <= 1e-10);
        }
        Ok(())
    });
    pass &= suite("simplex permutation equivariance and determinism", permutation, &mut details);

    let scaling = runner(50).run(&(cloud(3), prop::collection::vec(0.1f64..10.0, 3)), |(pts, lambda)| {
        let base = min_vol_simplex(&program(&pts)).unwrap();
        let scaled: Vec<Vec<f64>> = pts.iter().map(|p| p.iter().zip(&lambda).map(|(u, l)| u * l).collect()).collect();
        let sol = min_vol_simplex(&program(&scaled)).unwrap();
        for ((a, b), l) in sol.simplex.intercepts().iter().zip(base.simplex.intercepts()).zip(&lambda) {
            prop_assert!(rel(*a, l * b) <= 1e-8);
        }
        Ok(())
    });
    pass &= suite("simplex scaling equivariance", scaling, &mut details);

    let products = runner(30).run(
        &(prop::collection::vec(0.2f64..3.0, 1..=2), prop::collection::vec(0.2f64..3.0, 1..=2)),
        |(left, right)| {
            let joint: Vec<f64> = left.iter().chain(&right).copied().collect();
            let l = wu_metric(&Indicatrix::polydisc(&left).unwrap()).unwrap();
            let r = wu_metric(&Indicatrix::polydisc(&right).unwrap()).unwrap();
            let direct = wu_metric(&Indicatrix::polydisc(&joint).unwrap()).unwrap();
            let product = wu_product(&l, &r).unwrap();
            prop_assert_eq!(product.m, direct.m);
            for (a, b) in product.full_form().axes().iter().zip(direct.full_form().axes()) {
                prop_assert!(rel(*a, *b) <= 1e-10, "{} vs {}", a, b);
            }
            Ok(())
        },
    );
    pass &= suite("product consistency on random polydiscs, 1e-10", products, &mut details);

    let rows = run(Experiment::ProductCheck, |_| {});
    let fixed = rows.iter().all(|r| r.pass);
    details.extend(describe(&rows));
    pass &= fixed;

    report(9, "property suites and product consistency", pass, &details);
    assert!(pass);
}
