//! Minimal-volume simplex `T_a` containing a finite set of `Psi` points.
//!
//! In `b = 1/a` the program reads: maximize `sum_j log b_j` subject to
//! `<u, b> <= 1` for every point `u`. Its dual is the design problem
//! `max_{p in simplex} sum_j log (U^T p)_j`, solved by Frank–Wolfe with away
//! steps; the primal is then polished by Newton's method on the active set.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::{PsiPoint, SimplexParams};

const FW_GAP: f64 = 1e-9;
const FW_MAX_ITER: usize = 200_000;
const ZERO: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct SimplexProgram {
    points: Vec<PsiPoint>,
    fixed: BTreeMap<usize, f64>,
    dropped: Vec<usize>,
    tolerance: f64,
}

impl SimplexProgram {
    pub fn new(points: Vec<PsiPoint>) -> Result<Self> {
        let n = points
            .first()
            .map(PsiPoint::dim)
            .ok_or_else(|| Error::InvalidParameter("no points".into()))?;
        if let Some(p) = points.iter().find(|p| p.dim() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: p.dim() });
        }
        Ok(Self {
            points,
            fixed: BTreeMap::new(),
            dropped: Vec::new(),
            tolerance: 1e-10,
        })
    }

    /// Pins intercept `axis` to `value`.
    pub fn with_fixed(mut self, axis: usize, value: f64) -> Result<Self> {
        if axis >= self.dim() {
            return Err(Error::InvalidParameter(format!("axis {axis} out of range")));
        }
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::InvalidParameter(format!("fixed intercept {value}")));
        }
        if self.dropped.contains(&axis) {
            return Err(Error::InvalidParameter(format!("axis {axis} is dropped")));
        }
        self.fixed.insert(axis, value);
        Ok(self)
    }

    /// Excludes `axis`; its intercept is reported as `+inf`.
    pub fn with_dropped(mut self, axis: usize) -> Result<Self> {
        if axis >= self.dim() {
            return Err(Error::InvalidParameter(format!("axis {axis} out of range")));
        }
        if self.fixed.contains_key(&axis) {
            return Err(Error::InvalidParameter(format!("axis {axis} is fixed")));
        }
        if !self.dropped.contains(&axis) {
            self.dropped.push(axis);
            self.dropped.sort_unstable();
        }
        Ok(self)
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self> {
        if !(tolerance > 0.0) {
            return Err(Error::InvalidParameter(format!("tolerance {tolerance}")));
        }
        self.tolerance = tolerance;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn points(&self) -> &[PsiPoint] {
        &self.points
    }

    pub fn fixed(&self) -> &BTreeMap<usize, f64> {
        &self.fixed
    }

    pub fn dropped(&self) -> &[usize] {
        &self.dropped
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub(crate) fn free_axes(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|j| !self.fixed.contains_key(j) && !self.dropped.contains(j))
            .collect()
    }

    /// Constraint rows on the free axes after substituting fixed intercepts,
    /// paired with the index of the originating point.
    pub(crate) fn reduced_rows(&self) -> Result<(Vec<usize>, Vec<(usize, Vec<f64>)>)> {
        let free = self.free_axes();
        let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();
        for (i, p) in self.points.iter().enumerate() {
            let u = p.coords();
            let mut slack = 1.0;
            for (&j, &a) in &self.fixed {
                if !u[j].is_finite() {
                    return Err(Error::Infeasible(format!("point {i} is unbounded on fixed axis {j}")));
                }
                slack -= u[j] / a;
            }
            if let Some(&j) = free.iter().find(|&&j| !u[j].is_finite()) {
                return Err(Error::Degenerate {
                    axis: j,
                    reason: "unbounded point set; drop axis first".into(),
                });
            }
            let v: Vec<f64> = free.iter().map(|&j| u[j]).collect();
            if v.iter().all(|x| *x == 0.0) {
                if slack < -ZERO {
                    return Err(Error::Infeasible(format!(
                        "point {i} lies outside the fixed intercepts"
                    )));
                }
                continue;
            }
            if slack <= ZERO {
                return Err(Error::Infeasible(format!(
                    "fixed intercepts leave no room for point {i}"
                )));
            }
            rows.push((i, v.iter().map(|x| x / slack).collect()));
        }
        for (k, &j) in free.iter().enumerate() {
            if !rows.iter().any(|(_, r)| r[k] > 0.0) {
                return Err(Error::Degenerate {
                    axis: j,
                    reason: "no extent along this axis".into(),
                });
            }
        }
        Ok((free, rows))
    }

    /// Full intercept vector from intercepts on the free axes.
    pub(crate) fn assemble(&self, free: &[usize], free_intercepts: &[f64]) -> Vec<f64> {
        let mut a = vec![f64::INFINITY; self.dim()];
        for (&j, &v) in &self.fixed {
            a[j] = v;
        }
        for (k, &j) in free.iter().enumerate() {
            a[j] = free_intercepts[k];
        }
        a
    }
}

#[derive(Debug, Clone)]
pub struct SimplexSolution {
    pub simplex: SimplexParams,
    /// Certified bound on `log(vol / vol_min)`.
    pub gap: f64,
    pub iterations: usize,
    /// Indices of input points on the boundary of the returned simplex.
    pub active: Vec<usize>,
}

/// Minimal-volume simplex containing the points in its closure, honoring
/// fixed and dropped axes.
pub fn min_vol_simplex(prog: &SimplexProgram) -> Result<SimplexSolution> {
    let (free, rows) = prog.reduced_rows()?;
    if free.is_empty() {
        return Ok(SimplexSolution {
            simplex: SimplexParams::new(prog.assemble(&free, &[]))?,
            gap: 0.0,
            iterations: 0,
            active: Vec::new(),
        });
    }
    let k = free.len();
    let a = DMatrix::from_fn(rows.len(), k, |i, j| rows[i].1[j]);
    let mut design = Design::new(&a);
    let iterations = design.run(FW_GAP.min(prog.tolerance), FW_MAX_ITER);

    let mut b = design.primal();
    let mut certificates = vec![design.p.clone()];
    if let Some((bp, lambda)) = polish(&a, &b, &design.p) {
        b = bp;
        certificates.push(lambda);
    }
    let b = make_feasible(&a, b);
    let primal: f64 = b.iter().map(|x| x.ln()).sum();
    let gap = certificates
        .iter()
        .map(|p| dual_value(&a, p) - primal)
        .fold(f64::INFINITY, f64::min)
        .max(0.0);
    if gap > prog.tolerance {
        return Err(Error::NonConvergence { gap });
    }
    let levels = &a * &b;
    let active = rows
        .iter()
        .zip(levels.iter())
        .filter(|(_, l)| **l >= 1.0 - 1e-9)
        .map(|((i, _), _)| *i)
        .collect();
    let intercepts: Vec<f64> = b.iter().map(|x| 1.0 / x).collect();
    Ok(SimplexSolution {
        simplex: SimplexParams::new(prog.assemble(&free, &intercepts))?,
        gap,
        iterations,
        active,
    })
}

/// `sup_b sum log b - <lambda, A b - 1>` for `lambda = k p`.
fn dual_value(a: &DMatrix<f64>, p: &DVector<f64>) -> f64 {
    let k = a.ncols() as f64;
    let total = p.sum();
    if !(total > 0.0) || p.iter().any(|x| *x < 0.0) {
        return f64::INFINITY;
    }
    let m = a.tr_mul(&(p / total));
    if m.iter().any(|x| *x <= 0.0) {
        return f64::INFINITY;
    }
    -m.iter().map(|x| x.ln()).sum::<f64>() - k * k.ln()
}

fn make_feasible(a: &DMatrix<f64>, b: DVector<f64>) -> DVector<f64> {
    let worst = (a * &b).max();
    if worst > 1.0 {
        let mut b = b / worst;
        // one more pass guards against rounding in the division
        let w = (a * &b).max();
        if w > 1.0 {
            b /= w;
        }
        b
    } else {
        b
    }
}

/// Dual design problem state: weights `p` and moments `M = A^T p`.
struct Design<'a> {
    a: &'a DMatrix<f64>,
    p: DVector<f64>,
    m: DVector<f64>,
}

impl<'a> Design<'a> {
    fn new(a: &'a DMatrix<f64>) -> Self {
        let n = a.nrows();
        let p = DVector::from_element(n, 1.0 / n as f64);
        let m = a.tr_mul(&p);
        Self { a, p, m }
    }

    fn gradient(&self) -> DVector<f64> {
        let inv = self.m.map(|x| 1.0 / x);
        self.a * inv
    }

    fn gap_of(&self, g: &DVector<f64>) -> f64 {
        let k = self.a.ncols() as f64;
        k * (g.max() / k).ln()
    }

    fn run(&mut self, target: f64, max_iter: usize) -> usize {
        let k = self.a.ncols() as f64;
        for it in 0..max_iter {
            let g = self.gradient();
            if self.gap_of(&g) <= target {
                return it;
            }
            let up = g.imax();
            let mut down = None;
            for i in 0..self.p.len() {
                if self.p[i] > 0.0 && down.is_none_or(|d: usize| g[i] < g[d]) {
                    down = Some(i);
                }
            }
            let down = down.expect("weights are never all zero");
            let row_up = self.a.row(up).transpose();
            if g[up] - k >= k - g[down] || self.p[down] >= 1.0 {
                let delta = &row_up - &self.m;
                let step = line_search(&self.m, &delta, 1.0);
                self.p *= 1.0 - step;
                self.p[up] += step;
                self.m += delta * step;
            } else {
                let row_down = self.a.row(down).transpose();
                let delta = &self.m - &row_down;
                let max_step = self.p[down] / (1.0 - self.p[down]);
                let step = line_search(&self.m, &delta, max_step);
                self.p *= 1.0 + step;
                if step >= max_step {
                    self.p[down] = 0.0;
                } else {
                    self.p[down] -= step;
                }
                self.m += delta * step;
            }
            if it % 64 == 63 {
                self.m = self.a.tr_mul(&self.p);
            }
        }
        max_iter
    }

    /// Feasible primal point `b_j = 1 / (g_max M_j)`.
    fn primal(&self) -> DVector<f64> {
        let g = self.gradient();
        let gmax = g.max();
        self.m.map(|x| 1.0 / (gmax * x))
    }
}

/// Maximizer over `[0, max_step]` of `sum_j log(m_j + s delta_j)`.
fn line_search(m: &DVector<f64>, delta: &DVector<f64>, max_step: f64) -> f64 {
    let slope = |s: f64| -> f64 {
        m.iter()
            .zip(delta.iter())
            .map(|(mj, dj)| dj / (mj + s * dj))
            .sum()
    };
    if slope(0.0) <= 0.0 {
        return 0.0;
    }
    // keep strictly inside the domain m + s delta > 0
    let mut hi = max_step;
    for (mj, dj) in m.iter().zip(delta.iter()) {
        if *dj < 0.0 {
            hi = hi.min(-mj / dj * (1.0 - 1e-15));
        }
    }
    if slope(hi) >= 0.0 {
        return hi;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Rows of `candidates` (in order) that are linearly independent.
fn independent_rows(a: &DMatrix<f64>, candidates: &[usize]) -> Vec<usize> {
    let k = a.ncols();
    let mut basis: Vec<DVector<f64>> = Vec::new();
    let mut chosen = Vec::new();
    for &i in candidates {
        if chosen.len() == k {
            break;
        }
        let row = a.row(i).transpose();
        let scale = row.norm();
        let mut v = row.clone();
        for _ in 0..2 {
            for q in &basis {
                let c = q.dot(&v);
                v -= q * c;
            }
        }
        let len = v.norm();
        if len > 1e-9 * scale {
            basis.push(v / len);
            chosen.push(i);
        }
    }
    chosen
}

/// Newton's method for `max sum log b` subject to `A_S b = 1`.
fn equality_newton(a_s: &DMatrix<f64>, start: &DVector<f64>) -> Option<(DVector<f64>, DVector<f64>)> {
    let mut b = start.clone();
    let ones = DVector::from_element(a_s.nrows(), 1.0);
    let residual = |b: &DVector<f64>, nu: &DVector<f64>| -> f64 {
        let dual = b.map(|x| 1.0 / x) - a_s.tr_mul(nu);
        let primal = a_s * b - &ones;
        dual.component_mul(b).norm() + primal.norm()
    };
    let mut nu = DVector::zeros(a_s.nrows());
    for _ in 0..100 {
        let d = b.map(|x| x * x);
        let scaled = a_s * DMatrix::from_diagonal(&d);
        let normal = &scaled * a_s.transpose();
        let rhs = a_s * &b * 2.0 - &ones;
        let new_nu = normal.lu().solve(&rhs)?;
        let step = &b - d.component_mul(&a_s.tr_mul(&new_nu));
        let before = residual(&b, &nu);
        let mut t = 1.0;
        for (bj, sj) in b.iter().zip(step.iter()) {
            if *sj < 0.0 {
                t = f64::min(t, 0.99 * bj / -sj);
            }
        }
        let mut accepted = false;
        for _ in 0..60 {
            let trial = &b + &step * t;
            let trial_nu = &nu + (&new_nu - &nu) * t;
            if residual(&trial, &trial_nu) <= (1.0 - 0.01 * t) * before || before < 1e-14 {
                b = trial;
                nu = trial_nu;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
        let size = step.component_div(&b).amax() * t;
        if size < 1e-15 && residual(&b, &nu) < 1e-13 {
            break;
        }
    }
    if b.iter().all(|x| *x > 0.0 && x.is_finite()) {
        Some((b, nu))
    } else {
        None
    }
}

/// Active-set refinement of a near-optimal primal point; returns the
/// refined point and an optimal multiplier vector over all rows.
fn polish(a: &DMatrix<f64>, start: &DVector<f64>, weights: &DVector<f64>) -> Option<(DVector<f64>, DVector<f64>)> {
    let levels = a * start;
    let mut order: Vec<usize> = (0..a.nrows()).filter(|&i| levels[i] >= 1.0 - 1e-3).collect();
    order.sort_by(|&i, &j| weights[j].total_cmp(&weights[i]).then(levels[j].total_cmp(&levels[i])));
    let mut active = independent_rows(a, &order);
    let mut b = start.clone();
    for _ in 0..4 * a.nrows().max(8) {
        let a_s = DMatrix::from_fn(active.len(), a.ncols(), |r, c| a[(active[r], c)]);
        let (bp, nu) = equality_newton(&a_s, &b)?;
        let levels = a * &bp;
        let (worst, level) = levels.argmax();
        if level > 1.0 + 1e-13 {
            let mut candidates = vec![worst];
            candidates.extend(active.iter().copied());
            active = independent_rows(a, &candidates);
            if !active.contains(&worst) {
                return None;
            }
            b = bp.map(|x| x / level);
            continue;
        }
        let (most_negative, value) = nu.argmin();
        if nu.len() > 1 && value < -1e-12 * nu.amax() {
            active.remove(most_negative);
            b = bp;
            continue;
        }
        let near: Vec<usize> = (0..a.nrows()).filter(|&i| levels[i] >= 1.0 - 1e-9).collect();
        let lambda = multipliers(a, &near, &bp)?;
        return Some((bp, lambda));
    }
    None
}

/// Nonnegative `lambda` supported on `rows` with `A^T lambda = 1/b`.
fn multipliers(a: &DMatrix<f64>, rows: &[usize], b: &DVector<f64>) -> Option<DVector<f64>> {
    let target = b.map(|x| 1.0 / x);
    // scale columns by b so the system is well conditioned: (A diag b)^T lambda = 1
    let e = DMatrix::from_fn(a.ncols(), rows.len(), |j, r| a[(rows[r], j)] * b[j]);
    let ones = DVector::from_element(a.ncols(), 1.0);
    let x = nnls(&e, &ones)?;
    let mut lambda = DVector::zeros(a.nrows());
    for (r, &i) in rows.iter().enumerate() {
        lambda[i] = x[r];
    }
    let fit = (a.tr_mul(&lambda) - &target).component_mul(b).amax();
    (fit < 1e-6).then_some(lambda)
}

/// Lawson–Hanson nonnegative least squares `min |E x - f|, x >= 0`.
fn nnls(e: &DMatrix<f64>, f: &DVector<f64>) -> Option<DVector<f64>> {
    let n = e.ncols();
    let mut x = DVector::zeros(n);
    let mut passive = vec![false; n];
    let solve_passive = |passive: &[bool]| -> Option<DVector<f64>> {
        let idx: Vec<usize> = (0..n).filter(|&i| passive[i]).collect();
        let sub = DMatrix::from_fn(e.nrows(), idx.len(), |r, c| e[(r, idx[c])]);
        let z = sub.svd(true, true).solve(f, 1e-14).ok()?;
        let mut full = DVector::zeros(n);
        for (c, &i) in idx.iter().enumerate() {
            full[i] = z[c];
        }
        Some(full)
    };
    for _ in 0..3 * n + 10 {
        let w = e.tr_mul(&(f - e * &x));
        let candidate = (0..n)
            .filter(|&i| !passive[i])
            .max_by(|&i, &j| w[i].total_cmp(&w[j]));
        match candidate {
            Some(j) if w[j] > 1e-12 => passive[j] = true,
            _ => return Some(x),
        }
        loop {
            let z = solve_passive(&passive)?;
            if (0..n).filter(|&i| passive[i]).all(|i| z[i] > 0.0) {
                x = z;
                break;
            }
            let mut alpha = 1.0f64;
            for i in (0..n).filter(|&i| passive[i] && z[i] <= 0.0) {
                alpha = alpha.min(x[i] / (x[i] - z[i]));
            }
            x = &x + (z - &x) * alpha;
            for i in 0..n {
                if passive[i] && x[i] <= 1e-15 {
                    passive[i] = false;
                    x[i] = 0.0;
                }
            }
        }
    }
    Some(x)
}
