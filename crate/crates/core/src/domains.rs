//! Model domains and their indicatrices at the base points where they are
//! known: polydiscs, `G_2 = {|z_1| (1 + |z_2|) < 1}`, `G_n = G_2 x Delta^(n-2)`,
//! the truncations `D_m = G_n ∩ Psi^-1(T_m)`, elementary Reinhardt domains,
//! products, and two synthetic indicatrix families.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::busemann::{degeneracy, AxisExtent, Indicatrix, Representation, Symmetry};
use crate::error::{check_dim, Error, Result};
use crate::geometry::{psi, CVector, Frame, PsiPoint, SimplexParams};
use crate::metrics::{elem_reinhardt_metric, normalize, MetricKind, MultiIndex};
use crate::sampling::{direction_from_weights, maximize_on_simplex, simplex_weights};
use crate::wu::{min_vol_simplex, SimplexProgram, WuResult};
use crate::DiagonalHermitianForm;

/// Pointwise behavior reproduced by a synthetic indicatrix family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyntheticFamily {
    /// Euclidean ball away from the origin, `Delta x 2 Delta` at the origin.
    BallInBidisc,
    /// `Delta x C x Delta` away from the origin, `Delta^3` at the origin.
    DegenerateSlice,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DomainSpec {
    ElemReinhardt { alpha: MultiIndex, big_c: f64 },
    Polydisc { radii: Vec<f64> },
    G2,
    Gn { n: usize },
    TruncatedGn { n: usize, m: f64 },
    Product(Vec<DomainSpec>),
    Synthetic(SyntheticFamily),
}

impl DomainSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            DomainSpec::ElemReinhardt { big_c, .. } => {
                if !big_c.is_finite() {
                    return Err(Error::InvalidParameter(format!("C = {big_c}")));
                }
            }
            DomainSpec::Polydisc { radii } => {
                if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
                    return Err(Error::InvalidParameter(format!("polydisc radii {radii:?}")));
                }
            }
            DomainSpec::G2 | DomainSpec::Synthetic(_) => {}
            DomainSpec::Gn { n } => {
                if *n < 2 {
                    return Err(Error::InvalidParameter(format!("G_n needs n >= 2, got {n}")));
                }
            }
            DomainSpec::TruncatedGn { n, m } => {
                if *n < 2 {
                    return Err(Error::InvalidParameter(format!("D_m needs n >= 2, got {n}")));
                }
                if !(*m >= 1.0 && m.is_finite()) {
                    return Err(Error::InvalidParameter(format!("D_m needs m >= 1, got {m}")));
                }
            }
            DomainSpec::Product(factors) => {
                if factors.is_empty() {
                    return Err(Error::InvalidParameter("empty product".into()));
                }
                for f in factors {
                    f.validate()?;
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match self {
            DomainSpec::ElemReinhardt { alpha, .. } => alpha.dim(),
            DomainSpec::Polydisc { radii } => radii.len(),
            DomainSpec::G2 => 2,
            DomainSpec::Gn { n } | DomainSpec::TruncatedGn { n, .. } => *n,
            DomainSpec::Product(f) => f.iter().map(DomainSpec::dim).sum(),
            DomainSpec::Synthetic(SyntheticFamily::BallInBidisc) => 2,
            DomainSpec::Synthetic(SyntheticFamily::DegenerateSlice) => 3,
        }
    }
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            DomainSpec::ElemReinhardt { alpha, big_c } => write!(f, "elem:{}:{}", list(alpha.alpha()), big_c),
            DomainSpec::Polydisc { radii } => write!(f, "polydisc:{}", list(radii)),
            DomainSpec::G2 => write!(f, "g2"),
            DomainSpec::Gn { n } => write!(f, "gn:{n}"),
            DomainSpec::TruncatedGn { n, m } => write!(f, "truncated:{n}:{m}"),
            DomainSpec::Product(factors) => {
                let parts: Vec<String> = factors.iter().map(|s| s.to_string()).collect();
                write!(f, "{}", parts.join("*"))
            }
            DomainSpec::Synthetic(SyntheticFamily::BallInBidisc) => write!(f, "synthetic:one"),
            DomainSpec::Synthetic(SyntheticFamily::DegenerateSlice) => write!(f, "synthetic:two"),
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidParameter(format!("not a number: {t:?}")))
        })
        .collect()
}

impl FromStr for DomainSpec {
    type Err = Error;

    /// `g2`, `gn:3`, `truncated:3:4`, `polydisc:1,2`, `elem:1,2[:C]`,
    /// `synthetic:one|two`, and products joined by `*`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains('*') {
            let factors = s.split('*').map(str::parse).collect::<Result<Vec<DomainSpec>>>()?;
            let spec = DomainSpec::Product(factors);
            spec.validate()?;
            return Ok(spec);
        }
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::InvalidParameter(format!("unrecognized domain {s:?}"));
        let int = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        let spec = match parts.as_slice() {
            ["g2"] => DomainSpec::G2,
            ["gn", n] => DomainSpec::Gn { n: int(n)? },
            ["truncated", n, m] => DomainSpec::TruncatedGn {
                n: int(n)?,
                m: m.trim().parse().map_err(|_| bad())?,
            },
            ["polydisc", r] => DomainSpec::Polydisc { radii: parse_list(r)? },
            ["elem", a] => DomainSpec::ElemReinhardt {
                alpha: MultiIndex::new(parse_list(a)?)?,
                big_c: 0.0,
            },
            ["elem", a, c] => DomainSpec::ElemReinhardt {
                alpha: MultiIndex::new(parse_list(a)?)?,
                big_c: c.trim().parse().map_err(|_| bad())?,
            },
            ["synthetic", "one"] => DomainSpec::Synthetic(SyntheticFamily::BallInBidisc),
            ["synthetic", "two"] => DomainSpec::Synthetic(SyntheticFamily::DegenerateSlice),
            _ => return Err(bad()),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// `T_m = T_(n/2, m n/2, n, ..., n)`.
pub fn truncation_simplex(n: usize, m: f64) -> Result<SimplexParams> {
    let nf = n as f64;
    let mut a = vec![nf; n];
    a[0] = nf / 2.0;
    a[1] = m * nf / 2.0;
    SimplexParams::new(a)
}

fn g2_contains(z1: f64, z2: f64) -> bool {
    z1 * (1.0 + z2) < 1.0
}

/// Evaluates the defining inequality of the domain at `z`.
pub fn membership(spec: &DomainSpec, z: &CVector) -> Result<bool> {
    spec.validate()?;
    check_dim(spec.dim(), z.dim())?;
    let abs = z.abs();
    Ok(match spec {
        DomainSpec::ElemReinhardt { alpha, big_c } => {
            let mut log = 0.0;
            for (&al, &x) in alpha.alpha().iter().zip(&abs) {
                if x == 0.0 {
                    if al < 0.0 {
                        return Ok(false);
                    }
                    log = f64::NEG_INFINITY;
                } else if log.is_finite() {
                    log += al * x.ln();
                }
            }
            log < *big_c
        }
        DomainSpec::Polydisc { radii } => abs.iter().zip(radii).all(|(x, r)| x < r),
        DomainSpec::G2 => g2_contains(abs[0], abs[1]),
        DomainSpec::Gn { .. } => g2_contains(abs[0], abs[1]) && abs[2..].iter().all(|x| *x < 1.0),
        DomainSpec::TruncatedGn { n, m } => {
            let t = truncation_simplex(*n, *m)?;
            g2_contains(abs[0], abs[1])
                && abs[2..].iter().all(|x| *x < 1.0)
                && t.contains_open(&psi(z))?
        }
        DomainSpec::Product(factors) => {
            let mut offset = 0;
            for f in factors {
                let k = f.dim();
                let part = CVector::from(z.components()[offset..offset + k].to_vec());
                if !membership(f, &part)? {
                    return Ok(false);
                }
                offset += k;
            }
            true
        }
        // carrier of the synthetic families
        DomainSpec::Synthetic(_) => abs.iter().all(|x| *x < 1.0),
    })
}

/// Indicatrix bracket `B_kappa ⊆ B_eta ⊆ conv(outer)` at a base point.
#[derive(Debug, Clone)]
pub struct SandwichIndicatrix {
    /// Contained in the closure of every indicatrix of the family.
    pub inner: Indicatrix,
    /// Its convex hull contains every indicatrix of the family.
    pub outer: Indicatrix,
    /// `Psi` images of points in the closure of `inner`.
    pub closure_points: Vec<PsiPoint>,
}

fn g2_radius(p: f64, q: f64) -> f64 {
    // positive root of p q r^2 + p r - 1 = 0
    2.0 / (p + (p * p + 4.0 * p * q).sqrt())
}

/// `G_2` as the indicatrix of its center.
fn g2_ball() -> Indicatrix {
    Indicatrix::radial(
        2,
        Symmetry::COMPLETE_REINHARDT,
        Arc::new(|d: &CVector| g2_radius(d.components()[0].norm(), d.components()[1].norm())),
    )
    .with_axes(vec![AxisExtent::Bounded, AxisExtent::Unbounded])
}

fn unit_polydisc(k: usize) -> Result<Indicatrix> {
    Indicatrix::polydisc(&vec![1.0; k])
}

fn gn_ball(n: usize) -> Result<Indicatrix> {
    if n == 2 {
        Ok(g2_ball())
    } else {
        Indicatrix::product(&g2_ball(), &unit_polydisc(n - 2)?)
    }
}

fn gn_hull(n: usize) -> Result<Indicatrix> {
    let mut r = vec![1.0; n];
    r[1] = f64::INFINITY;
    Indicatrix::polydisc(&r)
}

/// Outer bound at `(x, 0)` of `G_2` from contracting through
/// `z_1 (1 + z_2)`: `{|X_1| + x |X_2| < 1 - x^2}`.
fn g2_outer_at(x: f64) -> Indicatrix {
    Indicatrix::radial(
        2,
        Symmetry::COMPLETE_REINHARDT,
        Arc::new(move |d: &CVector| {
            let s = d.components()[0].norm() + x * d.components()[1].norm();
            if s == 0.0 {
                f64::INFINITY
            } else {
                (1.0 - x * x) / s
            }
        }),
    )
    .with_axes(vec![AxisExtent::Bounded; 2])
}

/// `((1 - x^2)^2, 0)` and `(0, ((1 - x)/x)^2)`.
fn g2_closure_points(x: f64) -> Result<Vec<PsiPoint>> {
    Ok(vec![
        PsiPoint::new(vec![(1.0 - x * x).powi(2), 0.0])?,
        PsiPoint::new(vec![0.0, ((1.0 - x) / x).powi(2)])?,
    ])
}

fn extend_points(points: &[PsiPoint], tail: &[f64]) -> Result<Vec<PsiPoint>> {
    points
        .iter()
        .map(|p| PsiPoint::new(p.coords().iter().chain(tail).copied().collect()))
        .collect()
}

fn unsupported_point(spec: &DomainSpec, supported: &str) -> Error {
    Error::Unsupported(format!("indicatrix of {spec} is available only at {supported}"))
}

/// `(x, 0, ..., 0)` with `0 < x < 1`, if `a` has that shape.
fn axis_point(a: &CVector) -> Option<f64> {
    let c = a.components();
    let x = c[0];
    (x.im == 0.0 && x.re > 0.0 && x.re < 1.0 && c[1..].iter().all(|v| v.norm() == 0.0)).then_some(x.re)
}

fn is_origin(a: &CVector) -> bool {
    a.components().iter().all(|c| c.norm() == 0.0)
}

/// Indicatrices of the Kobayashi-side and Caratheodory-side pseudometrics at `a`.
pub fn indicatrix_at(spec: &DomainSpec, a: &CVector) -> Result<SandwichIndicatrix> {
    spec.validate()?;
    check_dim(spec.dim(), a.dim())?;
    if !membership(spec, a)? {
        return Err(Error::OutsideDomain(format!("{a:?} is not in {spec}")));
    }
    match spec {
        DomainSpec::Polydisc { radii } => {
            if !is_origin(a) {
                return Err(unsupported_point(spec, "the origin"));
            }
            let ball = Indicatrix::polydisc(radii)?;
            Ok(SandwichIndicatrix {
                inner: ball.clone(),
                outer: ball,
                closure_points: vec![PsiPoint::new(radii.iter().map(|r| r * r).collect())?],
            })
        }
        DomainSpec::G2 | DomainSpec::Gn { .. } => {
            let n = spec.dim();
            let ones = vec![1.0; n - 2];
            if is_origin(a) {
                let mut corner = vec![1.0; n];
                corner[1] = 0.0;
                Ok(SandwichIndicatrix {
                    inner: gn_ball(n)?,
                    outer: gn_hull(n)?,
                    closure_points: vec![PsiPoint::new(corner)?],
                })
            } else if let Some(x) = axis_point(a) {
                let points = extend_points(&g2_closure_points(x)?, &ones)?;
                let outer = if n == 2 {
                    g2_outer_at(x)
                } else {
                    Indicatrix::product(&g2_outer_at(x), &unit_polydisc(n - 2)?)?
                };
                Ok(SandwichIndicatrix {
                    inner: Indicatrix::cloud(points.clone(), &[])?,
                    outer,
                    closure_points: points,
                })
            } else {
                Err(unsupported_point(spec, "the origin and (x, 0, ..., 0) with 0 < x < 1"))
            }
        }
        DomainSpec::TruncatedGn { n, m } => {
            if !is_origin(a) {
                return Err(unsupported_point(spec, "the origin"));
            }
            let n = *n;
            let t = truncation_simplex(n, *m)?;
            let ball = Indicatrix::intersection(&gn_ball(n)?, &Indicatrix::ellipsoid(t.intercepts())?)?;
            let mut first = vec![1.0; n];
            first[1] = 0.0;
            let mut second = vec![1.0; n];
            second[0] = 0.0;
            second[1] = *m;
            Ok(SandwichIndicatrix {
                inner: ball.clone(),
                outer: ball,
                closure_points: vec![PsiPoint::new(first)?, PsiPoint::new(second)?],
            })
        }
        DomainSpec::ElemReinhardt { alpha, big_c } => {
            let inner = elem_reinhardt_indicatrix(MetricKind::Kobayashi, alpha, *big_c, a)?;
            let outer = elem_reinhardt_indicatrix(MetricKind::Caratheodory(1), alpha, *big_c, a)?;
            let closure_points = frame_axis_points(&inner)?;
            Ok(SandwichIndicatrix {
                inner,
                outer,
                closure_points,
            })
        }
        DomainSpec::Product(factors) => {
            let mut offset = 0;
            let mut acc: Option<SandwichIndicatrix> = None;
            for f in factors {
                let k = f.dim();
                let part = CVector::from(a.components()[offset..offset + k].to_vec());
                offset += k;
                let s = indicatrix_at(f, &part)?;
                acc = Some(match acc {
                    None => s,
                    Some(prev) => {
                        let mut points = Vec::new();
                        for p in &prev.closure_points {
                            for q in &s.closure_points {
                                points.push(PsiPoint::new(p.coords().iter().chain(q.coords()).copied().collect())?);
                            }
                        }
                        SandwichIndicatrix {
                            inner: Indicatrix::product(&prev.inner, &s.inner)?,
                            outer: Indicatrix::product(&prev.outer, &s.outer)?,
                            closure_points: points,
                        }
                    }
                });
            }
            Ok(acc.expect("validated products are nonempty"))
        }
        DomainSpec::Synthetic(family) => {
            let (away, at_origin) = match family {
                SyntheticFamily::BallInBidisc => synthetic_rem_one()?,
                SyntheticFamily::DegenerateSlice => synthetic_rem_two()?,
            };
            let ball = if is_origin(a) { at_origin } else { away };
            let closure_points = match family {
                SyntheticFamily::BallInBidisc if is_origin(a) => vec![PsiPoint::new(vec![1.0, 4.0])?],
                SyntheticFamily::BallInBidisc => (0..2).map(|j| psi(&CVector::unit(2, j))).collect(),
                SyntheticFamily::DegenerateSlice if is_origin(a) => vec![PsiPoint::new(vec![1.0; 3])?],
                SyntheticFamily::DegenerateSlice => vec![PsiPoint::new(vec![1.0, 0.0, 1.0])?],
            };
            Ok(SandwichIndicatrix {
                inner: ball.clone(),
                outer: ball,
                closure_points,
            })
        }
    }
}

/// Boundary points on the bounded frame axes of a radial indicatrix.
fn frame_axis_points(ind: &Indicatrix) -> Result<Vec<PsiPoint>> {
    let report = degeneracy(ind)?;
    let n = ind.dim();
    let u = report.u_axes(n);
    if u.is_empty() {
        return Ok(vec![PsiPoint::new(vec![0.0; n])?]);
    }
    let mut out = Vec::new();
    for &j in &u {
        let mut d = vec![0.0; n];
        d[j] = 1.0;
        let r = ind.radius_frame_abs(&d)?;
        let mut p = vec![0.0; n];
        p[j] = r * r;
        out.push(PsiPoint::new(p)?);
    }
    Ok(out)
}

/// Largest `Psi`-level of the ball under the simplex, over the `u_axes` slice.
fn max_level(ind: &Indicatrix, simplex: &SimplexParams, u_axes: &[usize], resolution: usize) -> Result<f64> {
    match ind.representation() {
        Representation::Cloud(points) => {
            let mut worst = 0.0f64;
            for p in points {
                let mut q = p.coords().to_vec();
                for (j, v) in q.iter_mut().enumerate() {
                    if !u_axes.contains(&j) {
                        *v = 0.0;
                    }
                }
                worst = worst.max(simplex.level(&PsiPoint::new(q)?)?);
            }
            Ok(worst)
        }
        Representation::Radial(_) => {
            let n = ind.dim();
            let level = |w: &[f64]| -> f64 {
                let d = direction_from_weights(w);
                let mut full = vec![0.0; n];
                for (k, &j) in u_axes.iter().enumerate() {
                    full[j] = d[k];
                }
                let r = match ind.radius_frame_abs(&full) {
                    Ok(r) => r,
                    Err(_) => return f64::INFINITY,
                };
                if r.is_infinite() {
                    return f64::INFINITY;
                }
                let p: Vec<f64> = full.iter().map(|x| (r * x).powi(2)).collect();
                PsiPoint::new(p).and_then(|p| simplex.level(&p)).unwrap_or(f64::INFINITY)
            };
            let mut ranked: Vec<(f64, Vec<f64>)> = simplex_weights(u_axes.len(), resolution)
                .into_iter()
                .map(|w| (level(&w), w))
                .collect();
            ranked.sort_by(|a, b| b.0.total_cmp(&a.0));
            let mut worst = ranked[0].0;
            for (_, w) in ranked.iter().take(2 * u_axes.len() + 2) {
                let (_, v) = maximize_on_simplex(&level, w, 1.0 / resolution as f64, 1e-13);
                worst = worst.max(v);
            }
            Ok(worst)
        }
    }
}

/// Wu pseudometric certified by a sandwich: the minimal simplex of the
/// closure points is exact when it also contains the outer ball.
///
/// Returns [`Error::Inconclusive`] when the two sides disagree on the
/// degenerate axes or the outer ball escapes the candidate ellipsoid.
pub fn sandwich_wu(s: &SandwichIndicatrix, resolution: usize) -> Result<WuResult> {
    let inner = degeneracy(&s.inner)?;
    let outer = degeneracy(&s.outer)?;
    if inner.v_axes != outer.v_axes {
        return Err(Error::Inconclusive(format!(
            "degenerate axes differ: inner {:?}, outer {:?}",
            inner.v_axes, outer.v_axes
        )));
    }
    let n = s.inner.dim();
    let frame = s.inner.frame().cloned();
    if s.outer.frame() != frame.as_ref() {
        return Err(Error::Inconclusive("inner and outer frames differ".into()));
    }
    if inner.m == 0 {
        return Ok(WuResult {
            w_tilde: DiagonalHermitianForm::new(vec![f64::INFINITY; n])?,
            m: 0,
            frame,
            samples: 0,
            gap: 0.0,
        });
    }
    let mut prog = SimplexProgram::new(s.closure_points.clone())?;
    for &j in &inner.v_axes {
        prog = prog.with_dropped(j)?;
    }
    let sol = min_vol_simplex(&prog)?;
    let u = inner.u_axes(n);
    let worst = max_level(&s.outer, &sol.simplex, &u, resolution)?;
    if worst > 1.0 + 1e-9 {
        return Err(Error::Inconclusive(format!(
            "outer ball leaves the candidate ellipsoid (level {worst})"
        )));
    }
    Ok(WuResult {
        w_tilde: DiagonalHermitianForm::new(sol.simplex.intercepts().to_vec())?,
        m: inner.m,
        frame,
        samples: s.closure_points.len(),
        gap: sol.gap,
    })
}

/// Indicatrix of `gamma^(k)`, `A` or `kappa` of `D_{alpha,C}` at `a`.
///
/// The closed forms make it a slab `{c |l(X)| < 1}` when no coordinate of
/// `a` vanishes (Reinhardt in a frame led by the coefficients of `l`), a
/// slab in the single vanishing coordinate when one does, and an
/// indicatrix with unbounded hull along every axis otherwise.
pub fn elem_reinhardt_indicatrix(kind: MetricKind, alpha: &MultiIndex, big_c: f64, a: &CVector) -> Result<Indicatrix> {
    let n = alpha.dim();
    let nz = normalize(alpha, big_c, a, &CVector::zeros(n))?;
    // propagate unsupported kinds before building the closure
    elem_reinhardt_metric(kind, alpha, big_c, a, &CVector::unit(n, 0))?;
    let (alpha_c, a_c) = (alpha.clone(), a.clone());
    let rho = Arc::new(move |d: &CVector| -> f64 {
        match elem_reinhardt_metric(kind, &alpha_c, big_c, &a_c, d) {
            Ok(v) if v.value.value > 0.0 => 1.0 / v.value.value,
            Ok(_) => f64::INFINITY,
            Err(_) => 0.0,
        }
    });
    let ind = Indicatrix::radial(n, Symmetry::COMPLETE_REINHARDT, rho.clone());
    let s = nz.s;
    if s == n {
        let v: Vec<_> = alpha
            .alpha()
            .iter()
            .zip(a.components())
            .map(|(al, aj)| (*al / aj).conj())
            .collect();
        let frame = Frame::with_leading(&CVector::new(v)?)?;
        let lead = frame.to_standard(&CVector::unit(n, 0));
        let mut axes = vec![AxisExtent::Unbounded; n];
        if rho(&lead).is_finite() {
            axes[0] = AxisExtent::Bounded;
        }
        Ok(ind.with_axes(axes).with_frame(frame))
    } else if s == n - 1 {
        let z = nz.perm[n - 1];
        let mut axes = vec![AxisExtent::Unbounded; n];
        if rho(&CVector::unit(n, z)).is_finite() {
            axes[z] = AxisExtent::Bounded;
        }
        Ok(ind.with_axes(axes))
    } else {
        Ok(ind.with_axes(vec![AxisExtent::Unbounded; n]))
    }
}

/// Euclidean unit ball (away from the origin) and `Delta x 2 Delta` (at it).
pub fn synthetic_rem_one() -> Result<(Indicatrix, Indicatrix)> {
    Ok((Indicatrix::euclidean_ball(2, 1.0)?, Indicatrix::polydisc(&[1.0, 2.0])?))
}

/// `Delta x C x Delta` (away from the origin) and `Delta^3` (at it).
pub fn synthetic_rem_two() -> Result<(Indicatrix, Indicatrix)> {
    Ok((
        Indicatrix::polydisc(&[1.0, f64::INFINITY, 1.0])?,
        Indicatrix::polydisc(&[1.0; 3])?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wu::wu_metric;
    use approx::assert_relative_eq;

    fn real(v: &[f64]) -> CVector {
        CVector::from_real(v)
    }

    #[test]
    fn membership_examples() {
        assert!(membership(&DomainSpec::G2, &real(&[0.5, 0.9])).unwrap());
        assert!(!membership(&DomainSpec::G2, &real(&[0.5, 1.1])).unwrap());
        let d = DomainSpec::TruncatedGn { n: 3, m: 2.0 };
        assert!(membership(&d, &real(&[0.0; 3])).unwrap());
        assert!(membership(&DomainSpec::G2, &real(&[0.5])).is_err());
        let e = DomainSpec::ElemReinhardt {
            alpha: MultiIndex::new(vec![-1.0, 2.0]).unwrap(),
            big_c: 0.0,
        };
        assert!(membership(&e, &real(&[1.0, 0.5])).unwrap());
        assert!(!membership(&e, &real(&[0.0, 0.5])).unwrap());
    }

    #[test]
    fn parse_round_trip() {
        for s in ["g2", "gn:3", "truncated:3:4", "polydisc:1,2", "elem:1,2:0", "synthetic:one", "g2*polydisc:1"] {
            let spec: DomainSpec = s.parse().unwrap();
            assert_eq!(spec.to_string().parse::<DomainSpec>().unwrap(), spec);
        }
        assert!("gn:1".parse::<DomainSpec>().is_err());
        assert!("disc".parse::<DomainSpec>().is_err());
        assert!("truncated:3:0.5".parse::<DomainSpec>().is_err());
    }

    #[test]
    fn g2_at_axis_point() {
        let s = indicatrix_at(&DomainSpec::G2, &real(&[0.1, 0.0])).unwrap();
        let pts: Vec<Vec<f64>> = s.closure_points.iter().map(|p| p.coords().to_vec()).collect();
        assert_relative_eq!(pts[0][0], 0.99f64.powi(2), max_relative = 1e-15);
        assert_relative_eq!(pts[1][1], 81.0, max_relative = 1e-12);
        assert_relative_eq!(s.outer.radius(&real(&[1.0, 0.0])).unwrap(), 0.99, max_relative = 1e-15);
        assert!(matches!(sandwich_wu(&s, 256), Err(Error::Inconclusive(_))));
        assert!(matches!(
            indicatrix_at(&DomainSpec::G2, &real(&[0.1, 0.2])),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn g2_at_origin() {
        let s = indicatrix_at(&DomainSpec::G2, &real(&[0.0, 0.0])).unwrap();
        let w = sandwich_wu(&s, 512).unwrap();
        assert_eq!(w.m, 1);
        assert_eq!(w.full(&real(&[1.0, 0.0])).unwrap(), 1.0);
        assert_eq!(w.tilde(&real(&[0.0, 5.0])).unwrap(), 0.0);
    }

    #[test]
    fn gn_at_origin() {
        let s = indicatrix_at(&DomainSpec::Gn { n: 3 }, &real(&[0.0; 3])).unwrap();
        let w = sandwich_wu(&s, 512).unwrap();
        assert_eq!(w.m, 2);
        assert_relative_eq!(w.tilde(&real(&[1.0, 0.0, 0.0])).unwrap(), 0.5f64.sqrt(), max_relative = 1e-12);
        let direct = wu_metric(&s.inner).unwrap();
        assert_relative_eq!(direct.tilde(&real(&[1.0, 0.0, 0.0])).unwrap(), 0.5f64.sqrt(), max_relative = 1e-10);
    }

    #[test]
    fn truncated_at_origin() {
        for m in [1.0, 4.0, 16.0] {
            let s = indicatrix_at(&DomainSpec::TruncatedGn { n: 3, m }, &real(&[0.0; 3])).unwrap();
            let w = sandwich_wu(&s, 768).unwrap();
            assert_eq!(w.m, 3);
            assert_relative_eq!(w.tilde(&real(&[1.0, 0.0, 0.0])).unwrap(), (2.0f64 / 3.0).sqrt(), max_relative = 1e-10);
        }
    }

    #[test]
    fn synthetic_pairs() {
        let (ball, poly) = synthetic_rem_one().unwrap();
        let e1 = real(&[1.0, 0.0]);
        assert_relative_eq!(wu_metric(&ball).unwrap().full(&e1).unwrap(), 2f64.sqrt(), max_relative = 1e-10);
        let w = wu_metric(&poly).unwrap();
        assert_relative_eq!(w.w_tilde.axes()[0], 2.0, max_relative = 1e-10);
        assert_relative_eq!(w.w_tilde.axes()[1], 8.0, max_relative = 1e-10);
        assert_relative_eq!(w.full(&e1).unwrap(), 1.0, max_relative = 1e-10);
        let (slab, cube) = synthetic_rem_two().unwrap();
        let e3 = real(&[0.0, 0.0, 1.0]);
        assert_relative_eq!(wu_metric(&slab).unwrap().tilde(&e3).unwrap(), 0.5f64.sqrt(), max_relative = 1e-10);
        assert_relative_eq!(wu_metric(&cube).unwrap().tilde(&e3).unwrap(), (1.0f64 / 3.0).sqrt(), max_relative = 1e-10);
    }

    #[test]
    fn elementary_indicatrix_shapes() {
        let alpha = MultiIndex::new(vec![1.0, 1.0]).unwrap();
        let full = elem_reinhardt_indicatrix(MetricKind::Caratheodory(1), &alpha, 0.0, &real(&[0.5, 0.5])).unwrap();
        assert_eq!(degeneracy(&full).unwrap().v_axes, vec![1]);
        let slab = elem_reinhardt_indicatrix(MetricKind::Kobayashi, &alpha, 0.0, &real(&[0.5, 0.0])).unwrap();
        assert_eq!(degeneracy(&slab).unwrap().v_axes, vec![0]);
        let alpha3 = MultiIndex::new(vec![1.0, 2.0, 1.0]).unwrap();
        let flat = elem_reinhardt_indicatrix(MetricKind::Kobayashi, &alpha3, 0.0, &real(&[0.5, 0.0, 0.0])).unwrap();
        assert_eq!(degeneracy(&flat).unwrap().m, 0);
    }
}
