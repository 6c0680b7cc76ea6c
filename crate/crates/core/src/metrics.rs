//! Closed-form invariant pseudometrics on model domains: the disc, the
//! punctured disc, elementary Reinhardt domains
//! `D_{alpha,C} = {|z^alpha| < e^C, z_j != 0 where alpha_j < 0}`, and
//! products.
//!
//! Every holomorphically contractible family agrees with
//! `|X| / (1 - |z|^2)` on the unit disc, so the disc helpers return plain
//! numbers rather than tagged values.

use std::fmt;

use num_complex::Complex64;

use crate::error::{check_dim, Error, Result};
use crate::geometry::CVector;

/// Largest denominator accepted when certifying that two exponents are
/// commensurable.
pub const DENOMINATOR_BOUND: i64 = 1_000_000;

/// The pseudometric being evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricKind {
    /// Caratheodory-Reiffen pseudometric of order `k >= 1`.
    Caratheodory(u32),
    Azukawa,
    Kobayashi,
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricKind::Caratheodory(1) => write!(f, "gamma"),
            MetricKind::Caratheodory(k) => write!(f, "gamma{k}"),
            MetricKind::Azukawa => write!(f, "azukawa"),
            MetricKind::Kobayashi => write!(f, "kobayashi"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricValue {
    pub value: f64,
    pub kind: MetricKind,
}

/// `gamma_Delta(z; X) = |X| / (1 - |z|^2)`.
pub fn gamma_disc(z: Complex64, x: Complex64) -> Result<f64> {
    let r2 = z.norm_sqr();
    if !(r2 < 1.0) {
        return Err(Error::OutsideDomain(format!("|z| = {} is not below 1", z.norm())));
    }
    Ok(x.norm() / (1.0 - r2))
}

/// Kobayashi-Royden pseudometric of the punctured disc,
/// `|X| / (2 |z| log(1/|z|))`, the pullback of `gamma_Delta` through the
/// universal covering `lambda -> exp((lambda + 1) / (lambda - 1))`.
pub fn kappa_punctured_disc(z: Complex64, x: Complex64) -> Result<f64> {
    let r = z.norm();
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::OutsideDomain(format!(
            "|z| = {r} must lie in (0, 1) for the punctured disc"
        )));
    }
    Ok(x.norm() / (2.0 * r * (1.0 / r).ln()))
}

/// Product property: the metric of `D_1 x ... x D_k` is the maximum of the
/// factor metrics.
pub fn product_metric(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::InvalidParameter("product of zero factors".into()));
    }
    Ok(values.iter().copied().fold(0.0, f64::max))
}

/// Lower bound `(|X_1| + x |X_2|) / (1 - x^2)` at `(x, 0)` in
/// `G_2 = {|z_1| (1 + |z_2|) < 1}`, obtained by contracting through
/// `F(z) = z_1 (1 + z_2)` into the disc.
pub fn g2_gamma_lower(x: f64, v: &CVector) -> Result<f64> {
    check_unit_interval(x)?;
    check_dim(2, v.dim())?;
    let abs = v.abs();
    Ok((abs[0] + x * abs[1]) / (1.0 - x * x))
}

/// Two vectors in the closed Kobayashi indicatrix of `G_2` at `(x, 0)`:
/// `(0, (1 - x)/x)` from the disc `lambda -> (x, (1 - x) lambda / x)` and
/// `(1 - x^2, 0)` from the Mobius disc `lambda -> ((lambda + x)/(1 + x lambda), 0)`.
pub fn g2_kappa_upper_points(x: f64) -> Result<(CVector, CVector)> {
    check_unit_interval(x)?;
    Ok((
        CVector::from_real(&[0.0, (1.0 - x) / x]),
        CVector::from_real(&[1.0 - x * x, 0.0]),
    ))
}

fn check_unit_interval(x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("x = {x} must lie in (0, 1)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentType {
    Rational,
    Irrational,
}

/// Exponent vector `alpha` of an elementary Reinhardt domain.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiIndex {
    alpha: Vec<f64>,
    declared: Option<ExponentType>,
}

impl MultiIndex {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::InvalidParameter("empty multi-index".into()));
        }
        if alpha.iter().any(|a| !a.is_finite() || *a == 0.0) {
            return Err(Error::InvalidParameter(format!(
                "exponents must be finite and nonzero: {alpha:?}"
            )));
        }
        Ok(Self { alpha, declared: None })
    }

    /// Overrides the detected rational/irrational type.
    pub fn declare(mut self, ty: ExponentType) -> Self {
        self.declared = Some(ty);
        self
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    pub fn declared(&self) -> Option<ExponentType> {
        self.declared
    }

    /// Number `l` of negative exponents.
    pub fn negatives(&self) -> usize {
        self.alpha.iter().filter(|a| **a < 0.0).count()
    }

    /// Smallest positive exponent, if any.
    pub fn t_l(&self) -> Option<f64> {
        self.alpha.iter().copied().filter(|a| *a > 0.0).reduce(f64::min)
    }

    /// Relatively prime integers `k` with `alpha = c k`, `c > 0`, when the
    /// ratios `alpha_j / alpha_1` are certified rational.
    pub fn integer_form(&self) -> Option<(Vec<i64>, f64)> {
        integer_form(&self.alpha)
    }

    pub fn exponent_type(&self) -> ExponentType {
        self.declared.unwrap_or(if self.integer_form().is_some() {
            ExponentType::Rational
        } else {
            ExponentType::Irrational
        })
    }

    /// The exponents as exact integers, if they are.
    pub fn as_integers(&self) -> Option<Vec<i64>> {
        self.alpha
            .iter()
            .map(|a| (a.fract() == 0.0 && a.abs() < 1e15).then_some(*a as i64))
            .collect()
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Best continued-fraction approximation `p/q` of `x`, `q <= DENOMINATOR_BOUND`,
/// accepted only if it reproduces `x` to a few ulps.
fn rational_approx(x: f64) -> Option<(i64, i64)> {
    let tol = 64.0 * f64::EPSILON * x.abs().max(1.0);
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        if a.abs() > 1e12 {
            return None;
        }
        let ai = a as i64;
        let h2 = ai.checked_mul(h1)?.checked_add(h0)?;
        let k2 = ai.checked_mul(k1)?.checked_add(k0)?;
        if k2 > DENOMINATOR_BOUND {
            return None;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() <= tol {
            return Some((h1, k1));
        }
        let frac = rest - a;
        if frac == 0.0 {
            return None;
        }
        rest = 1.0 / frac;
    }
    None
}

fn integer_form(alpha: &[f64]) -> Option<(Vec<i64>, f64)> {
    let lead = alpha[0];
    let ratios: Vec<(i64, i64)> = alpha.iter().map(|a| rational_approx(a / lead)).collect::<Option<_>>()?;
    let mut lcm = 1i64;
    for &(_, q) in &ratios {
        lcm = lcm.checked_mul(q / gcd(lcm, q))?;
        if lcm > DENOMINATOR_BOUND {
            return None;
        }
    }
    let mut ints: Vec<i64> = ratios.iter().map(|&(p, q)| p * (lcm / q)).collect();
    let g = ints.iter().fold(0, |g, &k| gcd(g, k));
    for k in ints.iter_mut() {
        *k /= g;
    }
    let mut scale = lead / ints[0] as f64;
    if scale < 0.0 {
        for k in ints.iter_mut() {
            *k = -*k;
        }
        scale = -scale;
    }
    Some((ints, scale))
}

/// Which of the four closed-form regimes applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReinhardtCase {
    /// `l < n`, rational type.
    RationalMixed,
    /// `l < n`, irrational type.
    IrrationalMixed,
    /// `l = n`, rational type.
    RationalNegative,
    /// `l = n`, irrational type.
    IrrationalNegative,
}

impl ReinhardtCase {
    pub fn number(self) -> u8 {
        match self {
            ReinhardtCase::RationalMixed => 1,
            ReinhardtCase::IrrationalMixed => 2,
            ReinhardtCase::RationalNegative => 3,
            ReinhardtCase::IrrationalNegative => 4,
        }
    }
}

/// A base point and vector transported to the normal form `C = 0`,
/// negative exponents first, zero coordinates last, exponents scaled to
/// relatively prime integers (rational type) or to `t_l = 1` (irrational,
/// `l < n`).
#[derive(Debug, Clone, PartialEq)]
pub struct Normalized {
    /// Normalized coordinate `j` is original coordinate `perm[j]`.
    pub perm: Vec<usize>,
    /// Original axis rescaled to absorb `C`, with its factor.
    pub coordinate_scale: (usize, f64),
    /// `alpha_normalized = alpha_original / exponent_scale`.
    pub exponent_scale: f64,
    pub alpha: Vec<f64>,
    pub integer_alpha: Option<Vec<i64>>,
    pub case: ReinhardtCase,
    pub l: usize,
    pub s: usize,
    pub r: f64,
    pub t_l: Option<f64>,
    pub a: CVector,
    pub x: CVector,
}

/// Checks `a in D_{alpha,C}` and brings `(a, X)` to normal form.
pub fn normalize(alpha: &MultiIndex, big_c: f64, a: &CVector, x: &CVector) -> Result<Normalized> {
    let n = alpha.dim();
    check_dim(n, a.dim())?;
    check_dim(n, x.dim())?;
    if !big_c.is_finite() {
        return Err(Error::InvalidParameter(format!("C = {big_c} must be finite")));
    }
    let abs_a = a.abs();
    let mut log_mod = 0.0;
    for (j, (&al, &aj)) in alpha.alpha().iter().zip(&abs_a).enumerate() {
        if aj == 0.0 {
            if al < 0.0 {
                return Err(Error::OutsideDomain(format!(
                    "coordinate {j} vanishes but its exponent {al} is negative"
                )));
            }
            log_mod = f64::NEG_INFINITY;
        } else if log_mod.is_finite() {
            log_mod += al * aj.ln();
        }
    }
    if !(log_mod < big_c) {
        return Err(Error::OutsideDomain(format!(
            "log|a^alpha| = {log_mod} is not below C = {big_c}"
        )));
    }

    let l = alpha.negatives();
    let mut perm: Vec<usize> = (0..n).filter(|&j| alpha.alpha()[j] < 0.0).collect();
    perm.extend((0..n).filter(|&j| alpha.alpha()[j] > 0.0 && abs_a[j] != 0.0));
    let s = perm.len();
    perm.extend((0..n).filter(|&j| alpha.alpha()[j] > 0.0 && abs_a[j] == 0.0));
    if s == l && l < n {
        return Err(Error::Unsupported(
            "all positive-exponent coordinates of the base point vanish; no closed form".into(),
        ));
    }

    let pivot = perm[0];
    let factor = (-big_c / alpha.alpha()[pivot]).exp();
    let rescale = |v: &CVector| {
        let mut comps: Vec<Complex64> = v.permuted(&perm).components().to_vec();
        comps[0] *= factor;
        CVector::from(comps)
    };
    let a_n = rescale(a);
    let x_n = rescale(x);

    let raw: Vec<f64> = perm.iter().map(|&p| alpha.alpha()[p]).collect();
    let ty = alpha.exponent_type();
    let (exponent_scale, integer_alpha) = match ty {
        ExponentType::Rational => {
            let (ints, scale) = integer_form(&raw).ok_or_else(|| {
                Error::Unsupported(format!(
                    "exponents {raw:?} declared rational are not commensurable within denominator {DENOMINATOR_BOUND}"
                ))
            })?;
            (scale, Some(ints))
        }
        ExponentType::Irrational => (MultiIndex::new(raw.clone())?.t_l().unwrap_or(1.0), None),
    };
    let alpha_n: Vec<f64> = match &integer_alpha {
        Some(ints) => ints.iter().map(|&k| k as f64).collect(),
        None => raw.iter().map(|a| a / exponent_scale).collect(),
    };
    let r = if s < n { alpha_n[s..].iter().sum() } else { 1.0 };
    let t_l = alpha_n.iter().copied().filter(|a| *a > 0.0).reduce(f64::min);
    let case = match (l < n, ty) {
        (true, ExponentType::Rational) => ReinhardtCase::RationalMixed,
        (true, ExponentType::Irrational) => ReinhardtCase::IrrationalMixed,
        (false, ExponentType::Rational) => ReinhardtCase::RationalNegative,
        (false, ExponentType::Irrational) => ReinhardtCase::IrrationalNegative,
    };
    Ok(Normalized {
        perm,
        coordinate_scale: (pivot, factor),
        exponent_scale,
        alpha: alpha_n,
        integer_alpha,
        case,
        l,
        s,
        r,
        t_l,
        a: a_n,
        x: x_n,
    })
}

fn generalized_binomial(top: i64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (top - i as i64) as f64 / (i + 1) as f64)
}

/// Visits every `beta in Z^n_+` with `|beta| = total`.
fn for_each_composition(n: usize, total: u32, f: &mut impl FnMut(&[u32])) {
    fn rec(prefix: &mut Vec<u32>, n: usize, left: u32, f: &mut impl FnMut(&[u32])) {
        if prefix.len() + 1 == n {
            prefix.push(left);
            f(prefix);
            prefix.pop();
            return;
        }
        for b in 0..=left {
            prefix.push(b);
            rec(prefix, n, left - b, f);
            prefix.pop();
        }
    }
    rec(&mut Vec::with_capacity(n), n, total, f);
}

fn phi_r_int(alpha: &[i64], a: &CVector, x: &CVector, r: u32) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for_each_composition(alpha.len(), r, &mut |beta| {
        let mut term = Complex64::new(1.0, 0.0);
        for (j, (&al, &b)) in alpha.iter().zip(beta).enumerate() {
            let c = generalized_binomial(al, b);
            if c == 0.0 {
                return;
            }
            let e = al - b as i64;
            let aj = a.components()[j];
            let base = if aj == Complex64::new(0.0, 0.0) {
                match e {
                    0 => Complex64::new(1.0, 0.0),
                    e if e > 0 => return,
                    _ => unreachable!("negative power of a vanishing coordinate"),
                }
            } else {
                aj.powi(e as i32)
            };
            term *= base * c * x.components()[j].powi(b as i32);
        }
        sum += term;
    });
    sum
}

/// Degree-`r` Taylor term of `z -> z^alpha` at `a`, evaluated on `X`:
/// `sum_{|beta| = r} D^beta(z^alpha)(a) X^beta / beta!`.
pub fn phi_r(alpha: &MultiIndex, a: &CVector, x: &CVector, r: u32) -> Result<Complex64> {
    check_dim(alpha.dim(), a.dim())?;
    check_dim(alpha.dim(), x.dim())?;
    if r == 0 {
        return Err(Error::InvalidParameter("Taylor degree r must be at least 1".into()));
    }
    let ints = alpha
        .as_integers()
        .ok_or_else(|| Error::Unsupported(format!("non-integer exponents {:?}", alpha.alpha())))?;
    for (j, (&k, c)) in ints.iter().zip(a.components()).enumerate() {
        if k < 0 && c.norm() == 0.0 {
            return Err(Error::OutsideDomain(format!(
                "coordinate {j} vanishes but its exponent is negative"
            )));
        }
    }
    Ok(phi_r_int(&ints, a, x, r))
}

/// A closed-form evaluation together with the branch that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub value: MetricValue,
    pub normalized: Normalized,
}

impl Evaluation {
    pub fn case(&self) -> ReinhardtCase {
        self.normalized.case
    }
}

/// `gamma^(k)`, `A` or `kappa` of `D_{alpha,C}` at `(a; X)`.
pub fn elem_reinhardt_metric(
    kind: MetricKind,
    alpha: &MultiIndex,
    big_c: f64,
    a: &CVector,
    x: &CVector,
) -> Result<Evaluation> {
    if kind == MetricKind::Caratheodory(0) {
        return Err(Error::InvalidParameter("Caratheodory order must be at least 1".into()));
    }
    let nz = normalize(alpha, big_c, a, x)?;
    let value = evaluate_normalized(kind, &nz)?;
    Ok(Evaluation {
        value: MetricValue { value, kind },
        normalized: nz,
    })
}

fn evaluate_normalized(kind: MetricKind, nz: &Normalized) -> Result<f64> {
    let n = nz.alpha.len();
    let a = nz.a.components();
    let x = nz.x.components();
    let s = nz.s;

    // |a^alpha| with the zero coordinates contributing 0
    let w = if s < n {
        0.0
    } else {
        nz.alpha.iter().zip(a).map(|(al, c)| al * c.norm().ln()).sum::<f64>().exp()
    };
    // sum_j alpha_j X_j / a_j, meaningful when s = n
    let lin = || -> Complex64 { nz.alpha.iter().zip(a).zip(x).map(|((al, aj), xj)| xj / aj * *al).sum() };
    // (prod_{j<=s} |a_j|^alpha_j prod_{j>s} |X_j|^alpha_j)^(1/r), used when s < n
    let monomial = || -> f64 {
        let log_a: f64 = nz.alpha[..s].iter().zip(&a[..s]).map(|(al, c)| al * c.norm().ln()).sum();
        let mut prod = log_a.exp();
        for (al, c) in nz.alpha[s..].iter().zip(&x[s..]) {
            prod *= c.norm().powf(*al);
        }
        prod.powf(1.0 / nz.r)
    };
    let base = Complex64::new(w, 0.0);
    let taylor = |r: u32| -> Result<f64> {
        let ints = nz.integer_alpha.as_ref().expect("rational case carries integers");
        let phi = phi_r_int(ints, &nz.a, &nz.x, r);
        Ok(gamma_disc(base, phi)?.powf(1.0 / r as f64))
    };

    match nz.case {
        ReinhardtCase::RationalMixed => {
            let r = nz.r as u32;
            match kind {
                MetricKind::Caratheodory(1) if nz.l > 0 => taylor(1),
                MetricKind::Caratheodory(k) => {
                    if nz.l > 0 {
                        return Err(Error::Unsupported(format!(
                            "gamma^({k}) with negative exponents has no closed form here"
                        )));
                    }
                    if k % r == 0 {
                        taylor(r)
                    } else {
                        Ok(0.0)
                    }
                }
                MetricKind::Azukawa => taylor(r),
                MetricKind::Kobayashi => {
                    if s < n {
                        Ok(monomial())
                    } else {
                        let t = nz.t_l.expect("l < n");
                        let wt = w.powf(1.0 / t);
                        gamma_disc(Complex64::new(wt, 0.0), lin() * (wt / t))
                    }
                }
            }
        }
        ReinhardtCase::IrrationalMixed => match kind {
            MetricKind::Caratheodory(_) => Ok(0.0),
            MetricKind::Azukawa => Ok(if s < n { monomial() } else { 0.0 }),
            MetricKind::Kobayashi => {
                if s < n {
                    Ok(monomial())
                } else {
                    gamma_disc(base, lin() * w)
                }
            }
        },
        ReinhardtCase::RationalNegative => match kind {
            MetricKind::Caratheodory(_) | MetricKind::Azukawa => gamma_disc(base, lin() * w),
            MetricKind::Kobayashi => kappa_punctured_disc(base, lin() * w),
        },
        ReinhardtCase::IrrationalNegative => match kind {
            MetricKind::Caratheodory(_) | MetricKind::Azukawa => Ok(0.0),
            MetricKind::Kobayashi => kappa_punctured_disc(base, lin() * w),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real(v: &[f64]) -> CVector {
        CVector::from_real(v)
    }

    fn mi(alpha: &[f64]) -> MultiIndex {
        MultiIndex::new(alpha.to_vec()).unwrap()
    }

    fn eval(kind: MetricKind, alpha: &[f64], a: &[f64], x: &[f64]) -> f64 {
        elem_reinhardt_metric(kind, &mi(alpha), 0.0, &real(a), &real(x)).unwrap().value.value
    }

    const GAMMA: MetricKind = MetricKind::Caratheodory(1);

    #[test]
    fn disc_examples() {
        assert_eq!(gamma_disc(c(0.0, 0.0), c(1.0, 0.0)).unwrap(), 1.0);
        assert_relative_eq!(gamma_disc(c(0.5, 0.0), c(1.0, 0.0)).unwrap(), 4.0 / 3.0);
        assert_eq!(gamma_disc(c(0.3, 0.2), c(0.0, 0.0)).unwrap(), 0.0);
        assert!(matches!(gamma_disc(c(1.0, 0.0), c(1.0, 0.0)), Err(Error::OutsideDomain(_))));
    }

    #[test]
    fn punctured_disc_examples() {
        let e = std::f64::consts::E;
        assert_relative_eq!(kappa_punctured_disc(c(1.0 / e, 0.0), c(1.0, 0.0)).unwrap(), e / 2.0, max_relative = 1e-15);
        assert_eq!(kappa_punctured_disc(c(0.5, 0.0), c(0.0, 0.0)).unwrap(), 0.0);
        assert!(kappa_punctured_disc(c(0.0, 0.0), c(1.0, 0.0)).is_err());
        assert!(kappa_punctured_disc(c(0.0, 1.0), c(1.0, 0.0)).is_err());
        let mut last = 0.0;
        for r in [0.9, 0.99, 0.999, 0.9999, 0.99999] {
            let v = kappa_punctured_disc(c(r, 0.0), c(1.0, 0.0)).unwrap();
            assert!(v > last);
            last = v;
        }
        assert!(last > 1e4);
    }

    /// Pull `gamma_Delta` back through the covering `p(l) = exp((l+1)/(l-1))`,
    /// differentiating `p` numerically.
    #[test]
    fn punctured_disc_matches_covering_pullback() {
        let p = |l: Complex64| ((l + 1.0) / (l - 1.0)).exp();
        for l0 in [c(0.0, 0.0), c(0.3, 0.1), c(-0.5, 0.4), c(0.1, -0.7)] {
            let h = 1e-6;
            let dp = (p(l0 + h) - p(l0 - h)) / (2.0 * h);
            let expected = 1.0 / (1.0 - l0.norm_sqr());
            let got = kappa_punctured_disc(p(l0), dp).unwrap();
            assert_relative_eq!(got, expected, max_relative = 1e-8);
        }
    }

    #[test]
    fn phi_r_examples() {
        let v = phi_r(&mi(&[1.0, 1.0]), &real(&[0.5, 0.0]), &CVector::new(vec![c(0.7, 0.2), c(3.0, -1.0)]).unwrap(), 1).unwrap();
        assert!((v - c(1.5, -0.5)).norm() < 1e-15);
        let v = phi_r(&mi(&[2.0]), &real(&[0.0]), &CVector::new(vec![c(1.0, 2.0)]).unwrap(), 2).unwrap();
        assert!((v - c(1.0, 2.0) * c(1.0, 2.0)).norm() < 1e-15);
        let v = phi_r(&mi(&[1.0, 1.0]), &real(&[0.5, 1.0 / 3.0]), &real(&[1.0, 1.0]), 1).unwrap();
        assert_relative_eq!(v.re, 5.0 / 6.0, max_relative = 1e-15);
        assert!(matches!(
            phi_r(&mi(&[1.5, 1.0]), &real(&[0.5, 0.5]), &real(&[1.0, 1.0]), 1),
            Err(Error::Unsupported(_))
        ));
    }

    /// Degree-r Taylor term against a finite-difference oracle along X.
    #[test]
    fn phi_r_matches_directional_derivative() {
        let alpha = [2.0, -1.0, 3.0];
        let a = CVector::new(vec![c(0.4, 0.1), c(1.2, -0.3), c(0.2, 0.5)]).unwrap();
        let x = CVector::new(vec![c(0.3, 0.0), c(-0.2, 0.4), c(0.1, 0.1)]).unwrap();
        let f = |t: Complex64| -> Complex64 {
            a.components()
                .iter()
                .zip(x.components())
                .zip(alpha)
                .map(|((ai, xi), al)| (ai + xi * t).powi(al as i32))
                .product()
        };
        // Cauchy integral for the t^r coefficient of f(a + tX)
        for r in 1..=3u32 {
            let m = 64;
            let rad = 0.1;
            let coeff: Complex64 = (0..m)
                .map(|k| {
                    let th = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                    let t = Complex64::from_polar(rad, th);
                    f(t) / t.powi(r as i32)
                })
                .sum::<Complex64>()
                / m as f64;
            let got = phi_r(&mi(&alpha), &a, &x, r).unwrap();
            assert!((got - coeff).norm() < 1e-10, "r={r}: {got} vs {coeff}");
        }
    }

    #[test]
    fn elem_reinhardt_examples() {
        assert_relative_eq!(eval(GAMMA, &[1.0, 1.0], &[0.5, 0.5], &[1.0, 0.0]), 8.0 / 15.0, max_relative = 1e-14);
        assert_relative_eq!(eval(MetricKind::Kobayashi, &[1.0, 1.0], &[0.5, 0.0], &[0.0, 1.0]), 0.5, max_relative = 1e-14);
        let s2 = 2f64.sqrt();
        for k in 1..4 {
            assert_eq!(eval(MetricKind::Caratheodory(k), &[-s2, 1.0], &[1.0, 0.5], &[0.3, -2.0]), 0.0);
        }
        assert_relative_eq!(eval(MetricKind::Azukawa, &[1.0, 1.0], &[0.5, 0.0], &[0.0, 1.0]), 0.5, max_relative = 1e-14);
    }

    #[test]
    fn case_detection() {
        let s2 = 2f64.sqrt();
        let case = |alpha: &[f64], a: &[f64]| {
            elem_reinhardt_metric(MetricKind::Kobayashi, &mi(alpha), 0.0, &real(a), &real(&[1.0; 2][..a.len()]))
                .unwrap()
                .case()
        };
        assert_eq!(case(&[1.0, 2.0], &[0.5, 0.5]), ReinhardtCase::RationalMixed);
        assert_eq!(case(&[s2, 1.0], &[0.5, 0.5]), ReinhardtCase::IrrationalMixed);
        assert_eq!(case(&[-1.0, -3.0], &[2.0, 2.0]), ReinhardtCase::RationalNegative);
        assert_eq!(case(&[-s2, -1.0], &[2.0, 2.0]), ReinhardtCase::IrrationalNegative);
        // declaration wins over detection
        let declared = mi(&[1.0, 2.0]).declare(ExponentType::Irrational);
        let e = elem_reinhardt_metric(MetricKind::Kobayashi, &declared, 0.0, &real(&[0.5, 0.5]), &real(&[1.0, 0.0])).unwrap();
        assert_eq!(e.case(), ReinhardtCase::IrrationalMixed);
    }

    #[test]
    fn normalization_records_scaling() {
        // (2/3, 1) ~ (2, 3) relatively prime
        let nz = normalize(&mi(&[2.0 / 3.0, 1.0]), 0.0, &real(&[0.5, 0.5]), &real(&[1.0, 1.0])).unwrap();
        assert_eq!(nz.integer_alpha, Some(vec![2, 3]));
        assert_relative_eq!(nz.exponent_scale, 1.0 / 3.0, max_relative = 1e-15);
        // negatives sorted first, zero coordinates last
        let nz = normalize(&mi(&[1.0, 2.0, -1.0]), 0.0, &real(&[0.0, 0.5, 1.0]), &real(&[1.0, 2.0, 3.0])).unwrap();
        assert_eq!(nz.perm, vec![2, 1, 0]);
        assert_eq!(nz.l, 1);
        assert_eq!(nz.s, 2);
        assert_eq!(nz.r, 1.0);
    }

    #[test]
    fn big_c_is_absorbed_by_rescaling() {
        // D_{alpha,C} -> D_{alpha,0} via z_1 -> e^{-C/alpha_1} z_1
        let alpha = mi(&[1.0, 2.0]);
        let big_c = 0.7;
        let a = real(&[0.9, 0.8]);
        let x = real(&[0.4, -1.1]);
        let lam = (-big_c / 1.0f64).exp();
        for kind in [GAMMA, MetricKind::Azukawa, MetricKind::Kobayashi] {
            let direct = elem_reinhardt_metric(kind, &alpha, big_c, &a, &x).unwrap().value.value;
            let mapped = elem_reinhardt_metric(kind, &alpha, 0.0, &real(&[0.9 * lam, 0.8]), &real(&[0.4 * lam, -1.1])).unwrap().value.value;
            assert_relative_eq!(direct, mapped, max_relative = 1e-13);
        }
    }

    #[test]
    fn membership_errors() {
        let alpha = mi(&[-1.0, 1.0]);
        assert!(matches!(
            elem_reinhardt_metric(GAMMA, &alpha, 0.0, &real(&[0.0, 0.5]), &real(&[1.0, 0.0])),
            Err(Error::OutsideDomain(_))
        ));
        assert!(matches!(
            elem_reinhardt_metric(GAMMA, &mi(&[1.0, 1.0]), 0.0, &real(&[2.0, 1.0]), &real(&[1.0, 0.0])),
            Err(Error::OutsideDomain(_))
        ));
    }

    #[test]
    fn divisibility_formula_for_natural_exponents() {
        // alpha = (1, 2), a = (1/2, 0): s = 1, r = 2
        let a = [0.5, 0.0];
        let x = [0.3, 1.0];
        assert_eq!(eval(MetricKind::Caratheodory(1), &[1.0, 2.0], &a, &x), 0.0);
        assert_eq!(eval(MetricKind::Caratheodory(3), &[1.0, 2.0], &a, &x), 0.0);
        let expected = (0.5f64).sqrt();
        assert_relative_eq!(eval(MetricKind::Caratheodory(2), &[1.0, 2.0], &a, &x), expected, max_relative = 1e-14);
        assert_relative_eq!(eval(MetricKind::Caratheodory(4), &[1.0, 2.0], &a, &x), expected, max_relative = 1e-14);
        assert_relative_eq!(eval(MetricKind::Azukawa, &[1.0, 2.0], &a, &x), expected, max_relative = 1e-14);
    }

    #[test]
    fn g2_helpers() {
        assert_relative_eq!(g2_gamma_lower(0.5, &real(&[1.0, 0.0])).unwrap(), 4.0 / 3.0);
        assert!(g2_gamma_lower(1e-12, &real(&[0.0, 1.0])).unwrap() < 1e-11);
        assert_relative_eq!(g2_gamma_lower(0.1, &real(&[1.0, 1.0])).unwrap(), 10.0 / 9.0, max_relative = 1e-15);
        let (p, q) = g2_kappa_upper_points(0.5).unwrap();
        assert_eq!(p, real(&[0.0, 1.0]));
        assert_eq!(q, real(&[0.75, 0.0]));
        let (p, q) = g2_kappa_upper_points(0.1).unwrap();
        assert_relative_eq!(p.components()[1].re, 9.0, max_relative = 1e-15);
        assert_relative_eq!(q.components()[0].re, 0.99, max_relative = 1e-15);
        let (p, q) = g2_kappa_upper_points(1.0 - 1e-12).unwrap();
        assert!(p.norm() < 1e-11 && q.norm() < 1e-11);
        assert!(g2_kappa_upper_points(0.0).is_err());
    }

    /// `F(z) = z_1 (1 + z_2)` maps G_2 into the disc; the lower bound is
    /// exactly the pushed-forward disc metric.
    #[test]
    fn g2_lower_bound_is_the_contraction() {
        for x in [0.05, 0.3, 0.8] {
            for v in [[1.0, 0.0], [0.3, 2.0], [0.0, 1.0]] {
                let fx = Complex64::new(x, 0.0);
                let dfx = Complex64::new(v[0] + x * v[1], 0.0);
                let pushed = gamma_disc(fx, dfx).unwrap();
                assert_relative_eq!(g2_gamma_lower(x, &real(&v)).unwrap(), pushed, max_relative = 1e-15);
            }
        }
    }

    #[test]
    fn product_metric_examples() {
        assert_eq!(product_metric(&[0.5, 0.2]).unwrap(), 0.5);
        assert_eq!(product_metric(&[0.0, 0.0]).unwrap(), 0.0);
        let d1 = gamma_disc(c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        let d2 = gamma_disc(c(0.0, 0.0), c(2.0, 0.0)).unwrap();
        assert_eq!(product_metric(&[d1, d2]).unwrap(), 2.0);
        assert!(product_metric(&[]).is_err());
    }

    #[test]
    fn irrational_detection() {
        assert_eq!(mi(&[2f64.sqrt(), 1.0]).exponent_type(), ExponentType::Irrational);
        assert_eq!(mi(&[std::f64::consts::PI, 1.0]).exponent_type(), ExponentType::Irrational);
        assert_eq!(mi(&[0.1, 0.3]).exponent_type(), ExponentType::Rational);
        assert_eq!(mi(&[-3.0, 7.0, 11.0]).integer_form().unwrap().0, vec![-3, 7, 11]);
        assert_eq!(mi(&[1.0, 1.0 / 999_983.0]).exponent_type(), ExponentType::Rational);
    }

    fn coprime_pair() -> impl Strategy<Value = (i64, i64)> {
        (1i64..5, 1i64..5).prop_filter("coprime", |(a, b)| gcd(*a, *b) == 1)
    }

    fn cplx() -> impl Strategy<Value = Complex64> {
        (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b)| c(a, b))
    }

    proptest! {
        #[test]
        fn homogeneity(
            (p, q) in coprime_pair(),
            a1 in 0.05f64..0.9, a2 in 0.05f64..0.9,
            x1 in cplx(), x2 in cplx(), lam in cplx(),
            kind_ix in 0usize..3,
            zero in any::<bool>(),
        ) {
            let kind = [GAMMA, MetricKind::Azukawa, MetricKind::Kobayashi][kind_ix];
            let alpha = mi(&[p as f64, q as f64]);
            let a = real(&[a1, if zero { 0.0 } else { a2 }]);
            let x = CVector::new(vec![x1, x2]).unwrap();
            let v = elem_reinhardt_metric(kind, &alpha, 0.0, &a, &x).unwrap().value.value;
            let vl = elem_reinhardt_metric(kind, &alpha, 0.0, &a, &x.scale(lam)).unwrap().value.value;
            prop_assert!((vl - lam.norm() * v).abs() <= 1e-12 * (1.0 + vl.abs()));
        }

        #[test]
        fn sandwich_gamma_azukawa_kobayashi(
            (p, q) in coprime_pair(),
            a1 in 0.05f64..0.95, a2 in 0.05f64..0.95,
            x1 in cplx(), x2 in cplx(),
        ) {
            let alpha = mi(&[p as f64, q as f64]);
            let a = real(&[a1, a2]);
            let x = CVector::new(vec![x1, x2]).unwrap();
            let g = elem_reinhardt_metric(GAMMA, &alpha, 0.0, &a, &x).unwrap().value.value;
            let az = elem_reinhardt_metric(MetricKind::Azukawa, &alpha, 0.0, &a, &x).unwrap().value.value;
            let k = elem_reinhardt_metric(MetricKind::Kobayashi, &alpha, 0.0, &a, &x).unwrap().value.value;
            prop_assert!(g <= az * (1.0 + 1e-12) + 1e-15);
            prop_assert!(az <= k * (1.0 + 1e-12) + 1e-15);
        }

        #[test]
        fn kobayashi_equals_gamma_when_t_l_is_one(
            q in 1i64..6,
            a1 in 0.05f64..0.95, a2 in 0.05f64..0.95,
            x1 in cplx(), x2 in cplx(),
        ) {
            let alpha = mi(&[1.0, q as f64]);
            let a = real(&[a1, a2]);
            let x = CVector::new(vec![x1, x2]).unwrap();
            let g = elem_reinhardt_metric(GAMMA, &alpha, 0.0, &a, &x).unwrap().value.value;
            let k = elem_reinhardt_metric(MetricKind::Kobayashi, &alpha, 0.0, &a, &x).unwrap().value.value;
            prop_assert!((g - k).abs() <= 1e-12 * (1.0 + k));
        }

        #[test]
        fn product_metric_laws(v in prop::collection::vec(0.0f64..10.0, 1..6), w in 0.0f64..10.0) {
            let m = product_metric(&v).unwrap();
            prop_assert_eq!(product_metric(&[m, m]).unwrap(), m);
            let mut rev = v.clone();
            rev.reverse();
            prop_assert_eq!(product_metric(&rev).unwrap(), m);
            let mut bigger = v.clone();
            bigger[0] = bigger[0].max(w);
            prop_assert!(product_metric(&bigger).unwrap() >= m);
        }
    }
}
