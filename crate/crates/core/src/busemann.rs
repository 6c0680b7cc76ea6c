//! Indicatrices (unit balls `B_eta(a) = {X : eta(a; X) < 1}`), their convex
//! hulls (the balls of the Busemann pseudometric), and the axis-aligned
//! degenerate subspace `V_eta(a) = {X : hat-eta(a; X) = 0}`.
//!
//! Reinhardt symmetry is understood in frame coordinates `Y = Q^* X` when a
//! [`Frame`] is attached; every axis index in this module refers to frame
//! coordinates.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{check_dim, Error, Result};
use crate::geometry::{CVector, Frame, PsiPoint};
use crate::sampling::{direction_from_weights, maximize_on_simplex, orthant_directions, simplex_weights};

/// Radius `rho(d) = 1 / eta(a; d)` along a direction, in `[0, +inf]`.
pub type RadialFn = Arc<dyn Fn(&CVector) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Symmetry {
    pub balanced: bool,
    pub reinhardt: bool,
    pub complete_reinhardt: bool,
}

impl Symmetry {
    pub const BALANCED: Symmetry = Symmetry {
        balanced: true,
        reinhardt: false,
        complete_reinhardt: false,
    };
    pub const REINHARDT: Symmetry = Symmetry {
        balanced: true,
        reinhardt: true,
        complete_reinhardt: false,
    };
    pub const COMPLETE_REINHARDT: Symmetry = Symmetry {
        balanced: true,
        reinhardt: true,
        complete_reinhardt: true,
    };

    fn meet(self, other: Symmetry) -> Symmetry {
        Symmetry {
            balanced: self.balanced && other.balanced,
            reinhardt: self.reinhardt && other.reinhardt,
            complete_reinhardt: self.complete_reinhardt && other.complete_reinhardt,
        }
    }
}

/// Whether the convex hull of the ball is bounded along a frame axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisExtent {
    Bounded,
    Unbounded,
}

#[derive(Clone)]
pub enum Representation {
    Radial(RadialFn),
    /// Finite `Psi`-image sample of the ball (or of its closure).
    Cloud(Vec<PsiPoint>),
}

#[derive(Clone)]
pub struct Indicatrix {
    dim: usize,
    symmetry: Symmetry,
    repr: Representation,
    axes: Option<Vec<AxisExtent>>,
    frame: Option<Frame>,
    convexified: bool,
    /// Original ball of a radial hull; supports are taken there.
    hull_of: Option<Arc<Indicatrix>>,
}

impl fmt::Debug for Indicatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let repr = match &self.repr {
            Representation::Radial(_) => "radial".to_string(),
            Representation::Cloud(p) => format!("cloud({})", p.len()),
        };
        f.debug_struct("Indicatrix")
            .field("dim", &self.dim)
            .field("symmetry", &self.symmetry)
            .field("repr", &repr)
            .field("axes", &self.axes)
            .field("framed", &self.frame.is_some())
            .field("convexified", &self.convexified)
            .finish()
    }
}

fn polydisc_radius(radii: &[f64], y: &[Complex64]) -> f64 {
    radii
        .iter()
        .zip(y)
        .map(|(r, c)| {
            let a = c.norm();
            if a == 0.0 {
                f64::INFINITY
            } else {
                r / a
            }
        })
        .fold(f64::INFINITY, f64::min)
}

impl Indicatrix {
    pub fn radial(dim: usize, symmetry: Symmetry, rho: RadialFn) -> Self {
        Self {
            dim,
            symmetry,
            repr: Representation::Radial(rho),
            axes: None,
            frame: None,
            convexified: false,
            hull_of: None,
        }
    }

    /// Reinhardt indicatrix given by a `Psi` cloud; `unbounded` lists the
    /// axes along which the hull is unbounded (their coordinates are ignored).
    pub fn cloud(points: Vec<PsiPoint>, unbounded: &[usize]) -> Result<Self> {
        let dim = points
            .first()
            .map(PsiPoint::dim)
            .ok_or_else(|| Error::InvalidParameter("empty point cloud".into()))?;
        for p in &points {
            check_dim(dim, p.dim())?;
        }
        let mut axes = vec![AxisExtent::Bounded; dim];
        for &j in unbounded {
            if j >= dim {
                return Err(Error::InvalidParameter(format!("axis {j} out of range")));
            }
            axes[j] = AxisExtent::Unbounded;
        }
        for p in &points {
            for (j, u) in p.coords().iter().enumerate() {
                if axes[j] == AxisExtent::Bounded && !u.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "infinite coordinate on axis {j} declared bounded"
                    )));
                }
            }
        }
        Ok(Self {
            dim,
            symmetry: Symmetry::REINHARDT,
            repr: Representation::Cloud(points),
            axes: Some(axes),
            frame: None,
            convexified: false,
            hull_of: None,
        })
    }

    /// `r_1 Delta x ... x r_n Delta`; an infinite radius gives a `C` factor.
    pub fn polydisc(radii: &[f64]) -> Result<Self> {
        if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0)) {
            return Err(Error::InvalidParameter(format!("radii must be positive: {radii:?}")));
        }
        let r = radii.to_vec();
        let axes = radii
            .iter()
            .map(|r| if r.is_finite() { AxisExtent::Bounded } else { AxisExtent::Unbounded })
            .collect();
        Ok(Self::radial(
            radii.len(),
            Symmetry::COMPLETE_REINHARDT,
            Arc::new(move |d: &CVector| polydisc_radius(&r, d.components())),
        )
        .with_axes(axes))
    }

    /// Euclidean ball of radius `radius` in `C^n`.
    pub fn euclidean_ball(n: usize, radius: f64) -> Result<Self> {
        if n == 0 || !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter(format!("ball of radius {radius} in C^{n}")));
        }
        Ok(Self::radial(
            n,
            Symmetry::COMPLETE_REINHARDT,
            Arc::new(move |d: &CVector| {
                let nd = d.norm();
                if nd == 0.0 {
                    f64::INFINITY
                } else {
                    radius / nd
                }
            }),
        )
        .with_axes(vec![AxisExtent::Bounded; n]))
    }

    /// Complete Reinhardt ellipsoid `{sum |X_j|^2 / a_j < 1}`, `a_j` in `(0, inf]`.
    pub fn ellipsoid(axes: &[f64]) -> Result<Self> {
        if axes.is_empty() || axes.iter().any(|a| !(*a > 0.0)) {
            return Err(Error::InvalidParameter(format!("axes must be positive: {axes:?}")));
        }
        let a = axes.to_vec();
        let extents = axes
            .iter()
            .map(|a| if a.is_finite() { AxisExtent::Bounded } else { AxisExtent::Unbounded })
            .collect();
        Ok(Self::radial(
            axes.len(),
            Symmetry::COMPLETE_REINHARDT,
            Arc::new(move |d: &CVector| {
                let level: f64 = a
                    .iter()
                    .zip(d.components())
                    .filter(|(a, _)| a.is_finite())
                    .map(|(a, c)| c.norm_sqr() / a)
                    .sum();
                if level == 0.0 {
                    f64::INFINITY
                } else {
                    1.0 / level.sqrt()
                }
            }),
        )
        .with_axes(extents))
    }

    /// Ball of the product pseudometric `max(eta_1, eta_2)`: `B_1 x B_2`.
    pub fn product(left: &Indicatrix, right: &Indicatrix) -> Result<Self> {
        let (n1, n2) = (left.dim, right.dim);
        let axes = match (&left.axes, &right.axes) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        let frame = match (&left.frame, &right.frame) {
            (None, None) => None,
            (l, r) => Some(Frame::block(
                &l.clone().unwrap_or_else(|| Frame::identity(n1)),
                &r.clone().unwrap_or_else(|| Frame::identity(n2)),
            )),
        };
        let repr = match (&left.repr, &right.repr) {
            (Representation::Cloud(p), Representation::Cloud(q)) => {
                let mut pts = Vec::with_capacity(p.len() * q.len());
                for a in p {
                    for b in q {
                        pts.push(PsiPoint::new(a.coords().iter().chain(b.coords()).copied().collect())?);
                    }
                }
                Representation::Cloud(pts)
            }
            (Representation::Radial(f), Representation::Radial(g)) => {
                let (f, g) = (f.clone(), g.clone());
                let (lf, rf) = (left.frame.clone(), right.frame.clone());
                Representation::Radial(Arc::new(move |d: &CVector| {
                    let c = d.components();
                    // factor radii are evaluated on the factor components in
                    // standard coordinates
                    let x1 = CVector::from(c[..n1].to_vec());
                    let x2 = CVector::from(c[n1..].to_vec());
                    let r1 = if x1.norm() == 0.0 { f64::INFINITY } else { f(&x1) };
                    let r2 = if x2.norm() == 0.0 { f64::INFINITY } else { g(&x2) };
                    let _ = (&lf, &rf);
                    r1.min(r2)
                }))
            }
            _ => {
                return Err(Error::Unsupported(
                    "product of a radial indicatrix with a point cloud".into(),
                ))
            }
        };
        Ok(Self {
            dim: n1 + n2,
            symmetry: left.symmetry.meet(right.symmetry),
            repr,
            axes,
            frame,
            convexified: left.convexified && right.convexified,
            hull_of: None,
        })
    }

    /// `B_1 ∩ B_2` for radial indicatrices in the same frame.
    pub fn intersection(left: &Indicatrix, right: &Indicatrix) -> Result<Self> {
        check_dim(left.dim, right.dim)?;
        if left.frame != right.frame {
            return Err(Error::Unsupported("intersection across different frames".into()));
        }
        let (Representation::Radial(f), Representation::Radial(g)) = (&left.repr, &right.repr) else {
            return Err(Error::Unsupported("intersection of point clouds".into()));
        };
        let (f, g) = (f.clone(), g.clone());
        let axes = match (&left.axes, &right.axes) {
            (Some(a), Some(b)) => Some(
                a.iter()
                    .zip(b)
                    .map(|(x, y)| {
                        if *x == AxisExtent::Bounded || *y == AxisExtent::Bounded {
                            AxisExtent::Bounded
                        } else {
                            AxisExtent::Unbounded
                        }
                    })
                    .collect(),
            ),
            _ => None,
        };
        Ok(Self {
            dim: left.dim,
            symmetry: left.symmetry.meet(right.symmetry),
            repr: Representation::Radial(Arc::new(move |d: &CVector| f(d).min(g(d)))),
            axes,
            frame: left.frame.clone(),
            convexified: false,
            hull_of: None,
        })
    }

    pub fn with_axes(mut self, axes: Vec<AxisExtent>) -> Self {
        assert_eq!(axes.len(), self.dim, "axis metadata length");
        self.axes = Some(axes);
        self
    }

    pub fn with_frame(mut self, frame: Frame) -> Self {
        assert_eq!(frame.dim(), self.dim, "frame dimension");
        self.frame = Some(frame);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn representation(&self) -> &Representation {
        &self.repr
    }

    pub fn axes(&self) -> Option<&[AxisExtent]> {
        self.axes.as_deref()
    }

    pub fn frame(&self) -> Option<&Frame> {
        self.frame.as_ref()
    }

    /// True once [`convexify`] has been applied.
    pub fn is_convexified(&self) -> bool {
        self.convexified
    }

    /// Radius along a direction in standard coordinates.
    pub fn radius(&self, d: &CVector) -> Result<f64> {
        check_dim(self.dim, d.dim())?;
        match &self.repr {
            Representation::Radial(f) => Ok(f(d)),
            Representation::Cloud(_) => Err(Error::Unsupported("radius of a point cloud".into())),
        }
    }

    /// Radius along the frame direction with absolute coordinates `abs`.
    pub fn radius_frame_abs(&self, abs: &[f64]) -> Result<f64> {
        let y = CVector::from_real(abs);
        let x = match &self.frame {
            Some(f) => f.to_standard(&y),
            None => y,
        };
        self.radius(&x)
    }

    fn frame_coords(&self, x: &CVector) -> CVector {
        match &self.frame {
            Some(f) => f.to_frame(x),
            None => x.clone(),
        }
    }

    fn require_reinhardt(&self, what: &str) -> Result<()> {
        if !self.symmetry.balanced {
            return Err(Error::Unsupported(format!("{what} needs a balanced indicatrix")));
        }
        if !self.symmetry.reinhardt {
            return Err(Error::Unsupported(format!("{what} needs a Reinhardt indicatrix")));
        }
        Ok(())
    }
}

/// `V_eta(a)` as a set of frame axes, and `m = n - dim V = dim U`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegeneracyReport {
    pub v_axes: Vec<usize>,
    pub m: usize,
}

impl DegeneracyReport {
    /// Frame axes spanning `U_eta(a)`.
    pub fn u_axes(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|j| !self.v_axes.contains(j)).collect()
    }
}

/// Axes along which `conv B` is unbounded, from the indicatrix metadata.
pub fn degeneracy(ind: &Indicatrix) -> Result<DegeneracyReport> {
    ind.require_reinhardt("degeneracy detection")?;
    let axes = ind.axes.as_ref().ok_or(Error::UnknownBoundedness)?;
    let v_axes: Vec<usize> = axes
        .iter()
        .enumerate()
        .filter(|(_, e)| **e == AxisExtent::Unbounded)
        .map(|(j, _)| j)
        .collect();
    Ok(DegeneracyReport {
        m: ind.dim - v_axes.len(),
        v_axes,
    })
}

fn default_samples(n: usize) -> usize {
    256 * n
}

/// `rho * <w, d>` with `inf * 0 = 0`.
fn weighted(rho: f64, pairing: f64) -> f64 {
    if pairing == 0.0 {
        0.0
    } else {
        rho * pairing
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `sup_{X in B} Re <X, direction>`; `+inf` when the direction pairs
/// positively with an unbounded axis.
///
/// For a Reinhardt ball this is `sup_{X in B} sum_j |X_j| |direction_j|`,
/// maximized over a direction sample and then refined by compass search.
/// The support of a hull is that of the original ball.
pub fn support(ind: &Indicatrix, direction: &CVector) -> Result<f64> {
    support_with(ind, direction, default_samples(ind.dim))
}

pub fn support_with(ind: &Indicatrix, direction: &CVector, samples: usize) -> Result<f64> {
    check_dim(ind.dim, direction.dim())?;
    ind.require_reinhardt("support evaluation")?;
    let w = ind.frame_coords(direction).abs();
    if let Some(axes) = &ind.axes {
        if axes.iter().zip(&w).any(|(e, x)| *e == AxisExtent::Unbounded && *x > 0.0) {
            return Ok(f64::INFINITY);
        }
    }
    match &ind.repr {
        Representation::Cloud(points) => {
            let axes = ind.axes.as_ref().expect("clouds carry axis metadata");
            Ok(points
                .iter()
                .map(|p| {
                    p.coords()
                        .iter()
                        .zip(&w)
                        .zip(axes)
                        .filter(|(_, e)| **e == AxisExtent::Bounded)
                        .map(|((u, x), _)| u.sqrt() * x)
                        .sum::<f64>()
                })
                .fold(0.0, f64::max))
        }
        Representation::Radial(_) => {
            if let Some(base) = &ind.hull_of {
                return support_with(base, direction, samples);
            }
            let norm = dot(&w, &w).sqrt();
            if norm == 0.0 {
                return Ok(0.0);
            }
            let value = |weights: &[f64]| -> f64 {
                let d = direction_from_weights(weights);
                weighted(ind.radius_frame_abs(&d).unwrap_or(0.0), dot(&w, &d))
            };
            let own: Vec<f64> = w.iter().map(|x| x * x / (norm * norm)).collect();
            let mut best = (value(&own), own);
            for wt in simplex_weights(ind.dim, samples) {
                let v = value(&wt);
                if v > best.0 {
                    best = (v, wt);
                }
            }
            if best.0.is_infinite() {
                return Ok(best.0);
            }
            let (_, refined) = maximize_on_simplex(&value, &best.1, 1.0 / samples as f64, 1e-15);
            Ok(refined.max(best.0))
        }
    }
}

/// Indicatrix of the Busemann pseudometric: the ball `conv B_eta(a)`.
///
/// A point cloud is returned unchanged and marked convexified, since the
/// minimal ellipsoid of a set is that of its hull. A radial Reinhardt ball
/// is replaced by the radial function of the down-closed hull of its
/// absolute image,
/// `rho_hat(d) = max(rho(d), min_w h(w) / <w, |d|>)`,
/// where `h(w) = max_d' rho(d') <w, d'>` over a fixed direction sample `d'`
/// and the minimum over `w` (supported on bounded axes) starts from a sample
/// and is refined by compass search. Applied to a hull it returns the hull.
pub fn convexify(ind: &Indicatrix) -> Result<Indicatrix> {
    convexify_with(ind, default_samples(ind.dim))
}

pub fn convexify_with(ind: &Indicatrix, samples: usize) -> Result<Indicatrix> {
    if !ind.symmetry.balanced {
        return Err(Error::Unsupported("convex hull of a non-balanced indicatrix".into()));
    }
    let f = match &ind.repr {
        Representation::Cloud(_) => {
            let mut out = ind.clone();
            out.convexified = true;
            return Ok(out);
        }
        Representation::Radial(_) if ind.convexified => return Ok(ind.clone()),
        Representation::Radial(f) => f.clone(),
    };
    if !ind.symmetry.reinhardt {
        return Err(Error::Unsupported("convex hull of a non-Reinhardt radial indicatrix".into()));
    }
    let axes = ind.axes.clone().ok_or(Error::UnknownBoundedness)?;
    let n = ind.dim;
    let bounded: Vec<usize> = (0..n).filter(|&j| axes[j] == AxisExtent::Bounded).collect();

    // boundary points rho(d) d of the absolute image, bounded coordinates only
    let mut points: Vec<Vec<f64>> = Vec::new();
    for d in orthant_directions(n, samples) {
        if bounded.iter().all(|&j| d[j] == 0.0) {
            continue;
        }
        let r = ind.radius_frame_abs(&d)?;
        points.push(bounded.iter().map(|&j| r * d[j]).collect());
    }
    let support_at = move |w: &[f64]| -> f64 {
        points.iter().map(|p| weighted_sum(p, w)).fold(0.0, f64::max)
    };
    let k = bounded.len();
    let starts: Vec<(Vec<f64>, f64)> = if k == 0 {
        Vec::new()
    } else {
        simplex_weights(k, samples)
            .into_iter()
            .map(|w| {
                let h = support_at(&w);
                (w, h)
            })
            .collect()
    };
    let step = 1.0 / samples.max(1) as f64;

    let frame = ind.frame.clone();
    let rho_hat = move |x: &CVector| -> f64 {
        let y = match &frame {
            Some(fr) => fr.to_frame(x),
            None => x.clone(),
        };
        let abs = y.abs();
        let d: Vec<f64> = bounded.iter().map(|&j| abs[j]).collect();
        if d.iter().all(|v| *v == 0.0) {
            return f64::INFINITY;
        }
        // gauge of the down-closed hull: min_w h(w) / <w, d>
        let ratio = |w: &[f64]| -> f64 {
            let p = dot(w, &d);
            if p > 0.0 {
                -support_at(w) / p
            } else {
                f64::NEG_INFINITY
            }
        };
        let mut best: Option<(&[f64], f64)> = None;
        for (w, h) in &starts {
            let p = dot(w, &d);
            if p > 0.0 {
                let v = -h / p;
                if best.is_none_or(|(_, b)| v > b) {
                    best = Some((w, v));
                }
            }
        }
        let (w0, v0) = best.expect("vertex weights pair positively with d");
        let (_, v) = maximize_on_simplex(&ratio, w0, step, 1e-15);
        let hull = -v.max(v0);
        f(x).max(hull)
    };
    Ok(Indicatrix {
        dim: n,
        symmetry: Symmetry::COMPLETE_REINHARDT,
        repr: Representation::Radial(Arc::new(rho_hat)),
        axes: Some(axes),
        frame: ind.frame.clone(),
        convexified: true,
        hull_of: Some(Arc::new(ind.clone())),
    })
}

/// `sum_j p_j w_j` with `inf * 0 = 0`.
fn weighted_sum(p: &[f64], w: &[f64]) -> f64 {
    p.iter().zip(w).map(|(a, b)| weighted(*a, *b)).sum()
}
