use proptest::prelude::*;
use wu_core::busemann::{degeneracy, Indicatrix};
use wu_core::wu::{wu_metric, wu_product};
use wu_core::{CVector, Complex64};

fn vector(re: &[f64], im: &[f64]) -> CVector {
    CVector::new(re.iter().zip(im).map(|(a, b)| Complex64::new(*a, *b)).collect()).unwrap()
}

#[test]
fn inclusion_does_not_order_the_wu_metric() {
    let ball = Indicatrix::euclidean_ball(2, 1.0).unwrap();
    let bidisc = Indicatrix::polydisc(&[1.0, 2.0]).unwrap();
    let e1 = CVector::unit(2, 0);
    let inner = wu_metric(&ball).unwrap().full(&e1).unwrap();
    let outer = wu_metric(&bidisc).unwrap().full(&e1).unwrap();
    assert!((inner - 2f64.sqrt()).abs() <= 1e-10);
    assert!((outer - 1.0).abs() <= 1e-10);
    assert!(inner > outer);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn euclidean_normalization(
        n in 1usize..=3,
        r in 0.2f64..5.0,
        re in prop::collection::vec(-2.0f64..2.0, 3),
        im in prop::collection::vec(-2.0f64..2.0, 3),
    ) {
        let w = wu_metric(&Indicatrix::euclidean_ball(n, r).unwrap()).unwrap();
        let x = vector(&re[..n], &im[..n]);
        let norm = x.norm();
        prop_assert!((w.tilde(&x).unwrap() - norm / r).abs() <= 1e-9 * (1.0 + norm / r));
        prop_assert!((w.full(&x).unwrap() - (n as f64).sqrt() * norm / r).abs() <= 1e-9 * (1.0 + norm / r));
    }

    #[test]
    fn wu_is_homogeneous(
        radii in prop::collection::vec(0.2f64..3.0, 2..=3),
        re in prop::collection::vec(-2.0f64..2.0, 3),
        im in prop::collection::vec(-2.0f64..2.0, 3),
        lam in (-3.0f64..3.0, -3.0f64..3.0),
    ) {
        let n = radii.len();
        let w = wu_metric(&Indicatrix::polydisc(&radii).unwrap()).unwrap();
        let x = vector(&re[..n], &im[..n]);
        let lambda = Complex64::new(lam.0, lam.1);
        let lhs = w.tilde(&x.scale(lambda)).unwrap();
        let rhs = lambda.norm() * w.tilde(&x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
    }

    #[test]
    fn bounded_inclusions_keep_full_rank(
        inner in prop::collection::vec(0.2f64..1.0, 2..=3),
        grow in prop::collection::vec(1.0f64..3.0, 3),
    ) {
        let outer: Vec<f64> = inner.iter().zip(&grow).map(|(r, g)| r * g).collect();
        let small = degeneracy(&Indicatrix::polydisc(&inner).unwrap()).unwrap();
        let big = degeneracy(&Indicatrix::polydisc(&outer).unwrap()).unwrap();
        prop_assert_eq!(small.m, inner.len());
        prop_assert_eq!(big.m, inner.len());
    }

    #[test]
    fn polydisc_products_match(
        left in prop::collection::vec(0.2f64..3.0, 1..=2),
        right in prop::collection::vec(0.2f64..3.0, 1..=2),
    ) {
        let joint: Vec<f64> = left.iter().chain(&right).copied().collect();
        let l = wu_metric(&Indicatrix::polydisc(&left).unwrap()).unwrap();
        let r = wu_metric(&Indicatrix::polydisc(&right).unwrap()).unwrap();
        let direct = wu_metric(&Indicatrix::polydisc(&joint).unwrap()).unwrap();
        let product = wu_product(&l, &r).unwrap();
        prop_assert_eq!(product.m, direct.m);
        for (a, b) in product.full_form().axes().iter().zip(direct.full_form().axes()) {
            prop_assert!((a - b).abs() <= 1e-10 * b, "{} vs {}", a, b);
        }
    }
}
