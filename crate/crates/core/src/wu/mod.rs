//! The Wu construction for Reinhardt indicatrices.
//!
//! `W~(a; .)` is the Hermitian seminorm whose unit ball is the minimal-volume
//! ellipsoid containing the indicatrix on the non-degenerate subspace `U`,
//! and `W = sqrt(m) W~` with `m = dim U`.

mod bruteforce;
mod certificates;
mod solver;

pub use bruteforce::min_vol_simplex_bruteforce;
pub use certificates::{certify_contradiction_g2, certify_contradiction_gn, G2Certificate, GnCertificate};
pub use solver::{min_vol_simplex, SimplexProgram, SimplexSolution};

use crate::busemann::{degeneracy, Indicatrix, Representation};
use crate::error::{check_dim, Error, Result};
use crate::geometry::{CVector, DiagonalHermitianForm, Frame, PsiPoint, SimplexParams};
use crate::sampling::{direction_from_weights, maximize_on_simplex, simplex_weights};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WuOptions {
    /// Number of sampled directions of the absolute sphere.
    pub resolution: usize,
    /// Rounds of adding locally worst boundary points.
    pub refine_rounds: usize,
    /// Relative optimality gap of the simplex program.
    pub tolerance: f64,
}

impl WuOptions {
    pub fn for_dim(n: usize) -> Self {
        Self {
            resolution: 256 * n.max(1),
            refine_rounds: 8,
            tolerance: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WuResult {
    /// Form of `W~` in frame coordinates, infinite on degenerate axes.
    pub w_tilde: DiagonalHermitianForm,
    pub m: usize,
    pub frame: Option<Frame>,
    /// Boundary points used as the containment certificate.
    pub samples: usize,
    pub gap: f64,
}

impl WuResult {
    fn frame_coords(&self, x: &CVector) -> CVector {
        match &self.frame {
            Some(f) => f.to_frame(x),
            None => x.clone(),
        }
    }

    /// `W~(a; x)`.
    pub fn tilde(&self, x: &CVector) -> Result<f64> {
        check_dim(self.w_tilde.dim(), x.dim())?;
        self.w_tilde.eval(&self.frame_coords(x))
    }

    /// `W(a; x) = sqrt(m) W~(a; x)`.
    pub fn full(&self, x: &CVector) -> Result<f64> {
        Ok((self.m as f64).sqrt() * self.tilde(x)?)
    }

    /// Form of `W`; all axes infinite when `m = 0`.
    pub fn full_form(&self) -> DiagonalHermitianForm {
        if self.m == 0 {
            return self.w_tilde.clone();
        }
        self.w_tilde
            .scaled((self.m as f64).sqrt())
            .expect("sqrt(m) is a positive scale")
    }
}

/// Wu pseudometric of a balanced Reinhardt indicatrix with default sampling.
pub fn wu_metric(ind: &Indicatrix) -> Result<WuResult> {
    wu_metric_with(ind, &WuOptions::for_dim(ind.dim()))
}

pub fn wu_metric_with(ind: &Indicatrix, opts: &WuOptions) -> Result<WuResult> {
    let report = degeneracy(ind)?;
    let n = ind.dim();
    let u_axes = report.u_axes(n);
    let frame = ind.frame().cloned();
    if report.m == 0 {
        return Ok(WuResult {
            w_tilde: DiagonalHermitianForm::new(vec![f64::INFINITY; n])?,
            m: 0,
            frame,
            samples: 0,
            gap: 0.0,
        });
    }
    let (simplex, samples, gap) = match ind.representation() {
        Representation::Cloud(points) => {
            let sol = min_vol_simplex(&program(points.clone(), &report.v_axes, opts.tolerance)?)?;
            (sol.simplex, points.len(), sol.gap)
        }
        Representation::Radial(_) => {
            if !report.v_axes.is_empty() && !ind.symmetry().complete_reinhardt {
                return Err(Error::Unsupported(
                    "degenerate axes of a radial indicatrix that is not complete Reinhardt".into(),
                ));
            }
            sampled_simplex(ind, &u_axes, &report.v_axes, opts)?
        }
    };
    Ok(WuResult {
        w_tilde: DiagonalHermitianForm::new(simplex.intercepts().to_vec())?,
        m: report.m,
        frame,
        samples,
        gap,
    })
}

fn program(points: Vec<PsiPoint>, dropped: &[usize], tolerance: f64) -> Result<SimplexProgram> {
    let mut prog = SimplexProgram::new(points)?.with_tolerance(tolerance)?;
    for &j in dropped {
        prog = prog.with_dropped(j)?;
    }
    Ok(prog)
}

/// Boundary points `Psi(rho(d) d)` of the slice of the ball by the `U` axes,
/// indexed by weights `w` with `d = sqrt(w)`.
struct Slice<'a> {
    ind: &'a Indicatrix,
    u_axes: &'a [usize],
}

impl Slice<'_> {
    fn point(&self, weights: &[f64]) -> Result<Option<PsiPoint>> {
        let n = self.ind.dim();
        let d = direction_from_weights(weights);
        let mut full = vec![0.0; n];
        for (k, &j) in self.u_axes.iter().enumerate() {
            full[j] = d[k];
        }
        let r = self.ind.radius_frame_abs(&full)?;
        if r.is_infinite() {
            let axis = self.u_axes[weights.iter().position(|w| *w > 0.0).unwrap_or(0)];
            return Err(Error::Degenerate {
                axis,
                reason: "infinite radius along a bounded axis".into(),
            });
        }
        if r == 0.0 {
            return Ok(None);
        }
        Ok(Some(PsiPoint::new(full.iter().map(|x| (r * x).powi(2)).collect())?))
    }

    fn level(&self, simplex: &SimplexParams, weights: &[f64]) -> f64 {
        match self.point(weights) {
            Ok(Some(p)) => simplex.level(&p).unwrap_or(f64::INFINITY),
            Ok(None) => 0.0,
            Err(_) => f64::INFINITY,
        }
    }
}

fn sampled_simplex(
    ind: &Indicatrix,
    u_axes: &[usize],
    v_axes: &[usize],
    opts: &WuOptions,
) -> Result<(SimplexParams, usize, f64)> {
    let slice = Slice { ind, u_axes };
    let k = u_axes.len();
    let weights = simplex_weights(k, opts.resolution);
    let mut points = Vec::with_capacity(weights.len());
    for w in &weights {
        if let Some(p) = slice.point(w)? {
            points.push(p);
        }
    }
    if points.is_empty() {
        return Err(Error::Degenerate {
            axis: u_axes[0],
            reason: "indicatrix has empty interior on the bounded axes".into(),
        });
    }
    let step = 1.0 / opts.resolution.max(1) as f64;
    let mut sol = min_vol_simplex(&program(points.clone(), v_axes, opts.tolerance)?)?;
    for _ in 0..opts.refine_rounds {
        let mut ranked: Vec<(f64, &Vec<f64>)> = weights.iter().map(|w| (slice.level(&sol.simplex, w), w)).collect();
        ranked.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut added = false;
        for (_, start) in ranked.iter().take(2 * k + 2) {
            let f = |w: &[f64]| slice.level(&sol.simplex, w);
            let (w, level) = maximize_on_simplex(&f, start, step, 1e-13);
            if level > 1.0 + 1e-12 {
                if let Some(p) = slice.point(&w)? {
                    points.push(p);
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
        sol = min_vol_simplex(&program(points.clone(), v_axes, opts.tolerance)?)?;
    }
    Ok((sol.simplex, points.len(), sol.gap))
}

/// Wu pseudometric of a product of balls from a family with the product
/// property: `W^2 = W_left^2 + W_right^2` and `m = m_left + m_right`.
pub fn wu_product(left: &WuResult, right: &WuResult) -> Result<WuResult> {
    let m = left.m + right.m;
    let rescale = |r: &WuResult| -> Vec<f64> {
        r.w_tilde
            .axes()
            .iter()
            .map(|a| if r.m == 0 { f64::INFINITY } else { a * m as f64 / r.m as f64 })
            .collect()
    };
    let mut axes = rescale(left);
    axes.extend(rescale(right));
    let (n1, n2) = (left.w_tilde.dim(), right.w_tilde.dim());
    let frame = match (&left.frame, &right.frame) {
        (None, None) => None,
        (l, r) => Some(Frame::block(
            &l.clone().unwrap_or_else(|| Frame::identity(n1)),
            &r.clone().unwrap_or_else(|| Frame::identity(n2)),
        )),
    };
    Ok(WuResult {
        w_tilde: DiagonalHermitianForm::new(axes)?,
        m,
        frame,
        samples: left.samples + right.samples,
        gap: left.gap + right.gap,
    })
}
