//! Volume comparisons showing that the Wu metric of `G_2` and
//! `G_n = G_2 x Delta^{n-2}` fails to be upper semicontinuous.

use crate::error::{Error, Result};
use crate::geometry::PsiPoint;
use crate::wu::solver::{min_vol_simplex, SimplexProgram};

/// Minimal triangle with fixed first intercept `t^2` through the two
/// boundary points of the indicatrix of `G_2` at `(x, 0)`, against the
/// triangle `T_(1, x^-2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct G2Certificate {
    pub x: f64,
    pub t: f64,
    pub intercepts: [f64; 2],
    pub volume: f64,
    pub comparison_volume: f64,
    pub ratio: f64,
    /// `t^2 (1 - x)^2`, the lower bound for the ratio.
    pub bound: f64,
    /// `ratio > 1`.
    pub certified: bool,
}

fn check_x(x: f64) -> Result<()> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::InvalidParameter(format!("x must lie in (0, 1), got {x}")));
    }
    Ok(())
}

fn boundary_coordinates(x: f64) -> (f64, f64) {
    let mu = (1.0 - x * x).powi(2);
    let nu = (1.0 / x - 1.0).powi(2);
    (mu, nu)
}

pub fn certify_contradiction_g2(x: f64, t: f64) -> Result<G2Certificate> {
    check_x(x)?;
    if !(t > 1.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("t must exceed 1, got {t}")));
    }
    let (mu, nu) = boundary_coordinates(x);
    let prog = SimplexProgram::new(vec![PsiPoint::new(vec![mu, 0.0])?, PsiPoint::new(vec![0.0, nu])?])?
        .with_fixed(0, t * t)?;
    let sol = min_vol_simplex(&prog)?;
    let a = sol.simplex.intercepts();
    let volume = sol.simplex.volume()?;
    let comparison_volume = 0.5 / (x * x);
    let ratio = volume / comparison_volume;
    Ok(G2Certificate {
        x,
        t,
        intercepts: [a[0], a[1]],
        volume,
        comparison_volume,
        ratio,
        bound: t * t * (1.0 - x).powi(2),
        certified: ratio > 1.0,
    })
}

/// Constrained minimal simplex for `G_n` at `(x, 0, ..., 0)` with first
/// intercept `t`, compared with `T_(n/2, n/(2x^2), n, ..., n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GnCertificate {
    pub n: usize,
    pub x: f64,
    pub t: f64,
    pub intercepts: Vec<f64>,
    pub ratio: f64,
    /// `4 x^2 nu (n-2)^(n-2) t^n / (mu n^n (t - mu)^(n-2))`.
    pub closed_form_ratio: f64,
    /// `4 (n-2)^(n-2) t^n / (n^n (t-1)^(n-2))`, the `x -> 0` limit.
    pub limit: f64,
    pub certified: bool,
}

pub fn certify_contradiction_gn(n: usize, x: f64, t: f64) -> Result<GnCertificate> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("n must be at least 3, got {n}")));
    }
    check_x(x)?;
    let half = n as f64 / 2.0;
    if !(t > half && t.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "t must exceed n/2 = {half}, got {t}"
        )));
    }
    let (mu, nu) = boundary_coordinates(x);
    let mut first = vec![1.0; n];
    first[0] = mu;
    first[1] = 0.0;
    let mut second = vec![1.0; n];
    second[0] = 0.0;
    second[1] = nu;
    let prog = SimplexProgram::new(vec![PsiPoint::new(first)?, PsiPoint::new(second)?])?.with_fixed(0, t)?;
    let sol = min_vol_simplex(&prog)?;
    let nf = n as f64;
    let mut comparison = vec![nf; n];
    comparison[0] = half;
    comparison[1] = half / (x * x);
    let ratio = sol
        .simplex
        .intercepts()
        .iter()
        .zip(&comparison)
        .map(|(c, d)| c / d)
        .product();
    let tail = (nf - 2.0).powi(n as i32 - 2);
    let closed_form_ratio = 4.0 * x * x * nu * tail * t.powi(n as i32)
        / (mu * nf.powi(n as i32) * (t - mu).powi(n as i32 - 2));
    let limit = 4.0 * tail * t.powi(n as i32) / (nf.powi(n as i32) * (t - 1.0).powi(n as i32 - 2));
    Ok(GnCertificate {
        n,
        x,
        t,
        intercepts: sol.simplex.intercepts().to_vec(),
        ratio,
        closed_form_ratio,
        limit,
        certified: ratio > 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn g2_examples() {
        let c = certify_contradiction_g2(0.01, 1.1).unwrap();
        assert!(c.certified);
        assert!(c.ratio >= c.bound - 1e-10);
        assert_relative_eq!(c.bound, 1.1f64.powi(2) * 0.99f64.powi(2), max_relative = 1e-15);
        let c = certify_contradiction_g2(0.5, 1.1).unwrap();
        assert!(!c.certified);
        assert_relative_eq!(c.bound, 0.3025, max_relative = 1e-12);
    }

    #[test]
    fn gn_limit_values() {
        let c = certify_contradiction_gn(3, 0.001, 1.6).unwrap();
        assert_relative_eq!(c.limit, 16.384 / 16.2, max_relative = 1e-12);
        assert!(matches!(certify_contradiction_gn(3, 0.1, 1.5), Err(Error::InvalidParameter(_))));
        assert!(matches!(certify_contradiction_gn(2, 0.1, 1.5), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn gn_small_x_certifies() {
        assert!(certify_contradiction_gn(3, 0.01, 2.0).unwrap().certified);
        assert!(certify_contradiction_gn(3, 0.001, 1.6).unwrap().certified);
    }
}
