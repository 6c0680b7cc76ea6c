//! Complex vectors, diagonal Hermitian forms, simplexes in the absolute
//! square space, and the map `Psi(z) = (|z_1|^2, ..., |z_n|^2)` that carries
//! complete Reinhardt ellipsoids onto simplexes.
//!
//! Infinite axes and intercepts are stored as `f64::INFINITY`. They stand for
//! directions in which the form vanishes, not for "very large" numbers.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{check_dim, Error, Result};

/// Absolute plus relative tolerance used for closed containment tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }

    /// `lhs <= rhs` up to the tolerance.
    pub fn le(&self, lhs: f64, rhs: f64) -> bool {
        lhs <= rhs + self.abs + self.rel * rhs.abs().max(lhs.abs())
    }

    pub fn eq(&self, lhs: f64, rhs: f64) -> bool {
        if lhs == rhs {
            return true;
        }
        (lhs - rhs).abs() <= self.abs + self.rel * rhs.abs().max(lhs.abs())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::new(1e-12, 1e-12)
    }
}

/// A vector of `C^n`, `n >= 1`, with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct CVector(Vec<Complex64>);

impl CVector {
    pub fn new(components: Vec<Complex64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParameter("empty vector".into()));
        }
        if components.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite vector entry".into()));
        }
        Ok(Self(components))
    }

    /// Real vector; panics on an empty or non-finite input.
    pub fn from_real(components: &[f64]) -> Self {
        Self::new(components.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .expect("finite, non-empty real vector")
    }

    /// The `j`-th standard basis vector of `C^n`.
    pub fn unit(n: usize, j: usize) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        v[j] = Complex64::new(1.0, 0.0);
        Self(v)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[Complex64] {
        &self.0
    }

    pub fn abs(&self) -> Vec<f64> {
        self.0.iter().map(|c| c.norm()).collect()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, lambda: Complex64) -> Self {
        Self(self.0.iter().map(|c| c * lambda).collect())
    }

    /// Componentwise product `lambda ⊙ z`.
    pub fn hadamard(&self, lambda: &[Complex64]) -> Self {
        Self(self.0.iter().zip(lambda).map(|(c, l)| c * l).collect())
    }

    /// Coordinates `perm[j]` of `self` placed at position `j`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self(perm.iter().map(|&p| self.0[p]).collect())
    }

    /// Concatenation `(self, other)` in `C^{n1 + n2}`.
    pub fn concat(&self, other: &CVector) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Self(v)
    }
}

impl From<Vec<Complex64>> for CVector {
    fn from(v: Vec<Complex64>) -> Self {
        Self::new(v).expect("valid complex vector")
    }
}

/// A point of `R^n_+`, the image of `Psi`.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiPoint {
    coords: Vec<f64>,
}

impl PsiPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter("empty point".into()));
        }
        if coords.iter().any(|&u| u.is_nan() || u < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Psi-space coordinates must be nonnegative: {coords:?}"
            )));
        }
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// `Psi(z) = (|z_1|^2, ..., |z_n|^2)`.
pub fn psi(z: &CVector) -> PsiPoint {
    PsiPoint {
        coords: z.components().iter().map(|c| c.norm_sqr()).collect(),
    }
}

fn check_axes(axes: &[f64], what: &str) -> Result<()> {
    if axes.is_empty() {
        return Err(Error::InvalidParameter(format!("{what}: empty parameter list")));
    }
    for (j, &a) in axes.iter().enumerate() {
        // (0, +inf]; NaN fails the comparison
        if !(a > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "{what}: parameter {j} must lie in (0, inf], got {a}"
            )));
        }
    }
    Ok(())
}

/// `q(X) = (sum_{a_j < inf} |X_j|^2 / a_j)^{1/2}`.
///
/// `a_j` is the squared semiaxis of the unit ball of `q` along axis `j`;
/// an infinite `a_j` removes that coordinate from the form.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalHermitianForm {
    axes: Vec<f64>,
}

impl DiagonalHermitianForm {
    pub fn new(axes: Vec<f64>) -> Result<Self> {
        check_axes(&axes, "diagonal form")?;
        Ok(Self { axes })
    }

    pub fn axes(&self) -> &[f64] {
        &self.axes
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    /// True iff every axis is finite, i.e. `q` is a norm.
    pub fn is_norm(&self) -> bool {
        self.axes.iter().all(|a| a.is_finite())
    }

    /// Number of finite axes.
    pub fn rank(&self) -> usize {
        self.axes.iter().filter(|a| a.is_finite()).count()
    }

    pub fn eval(&self, x: &CVector) -> Result<f64> {
        check_dim(self.dim(), x.dim())?;
        Ok(self.eval_abs_sq(x.components().iter().map(|c| c.norm_sqr())).sqrt())
    }

    /// Evaluates on the absolute values `|X_j|`.
    pub fn eval_abs(&self, abs: &[f64]) -> Result<f64> {
        check_dim(self.dim(), abs.len())?;
        Ok(self.eval_abs_sq(abs.iter().map(|x| x * x)).sqrt())
    }

    fn eval_abs_sq(&self, sq: impl Iterator<Item = f64>) -> f64 {
        self.axes
            .iter()
            .zip(sq)
            .filter(|(a, _)| a.is_finite())
            .map(|(a, s)| s / a)
            .sum()
    }

    /// The form `c * q`, i.e. axes divided by `c^2`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!("scale must be positive, got {c}")));
        }
        Self::new(self.axes.iter().map(|a| a / (c * c)).collect())
    }
}

/// `T_a = {u in R^n_+ : sum u_j / a_j < 1}`; terms with `a_j = inf` dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexParams {
    intercepts: Vec<f64>,
}

impl SimplexParams {
    pub fn new(intercepts: Vec<f64>) -> Result<Self> {
        check_axes(&intercepts, "simplex")?;
        Ok(Self { intercepts })
    }

    pub fn intercepts(&self) -> &[f64] {
        &self.intercepts
    }

    pub fn dim(&self) -> usize {
        self.intercepts.len()
    }

    /// `sum_j u_j / a_j` over finite intercepts.
    pub fn level(&self, p: &PsiPoint) -> Result<f64> {
        check_dim(self.dim(), p.dim())?;
        Ok(self
            .intercepts
            .iter()
            .zip(p.coords())
            .filter(|(a, _)| a.is_finite())
            .map(|(a, u)| u / a)
            .sum())
    }

    /// Closed containment `p in closure(T_a)` up to `tol`.
    pub fn contains_closed(&self, p: &PsiPoint, tol: Tolerance) -> Result<bool> {
        Ok(tol.le(self.level(p)?, 1.0))
    }

    /// Open containment `p in T_a`.
    pub fn contains_open(&self, p: &PsiPoint) -> Result<bool> {
        Ok(self.level(p)? < 1.0)
    }

    /// `vol T_a = prod a_j / n!`.
    pub fn volume(&self) -> Result<f64> {
        simplex_volume(self)
    }
}

/// `(prod_j a_j) / n!`; fails on an infinite intercept.
pub fn simplex_volume(t: &SimplexParams) -> Result<f64> {
    let mut v = 1.0;
    for (j, &a) in t.intercepts.iter().enumerate() {
        if !a.is_finite() {
            return Err(Error::UnboundedSimplex { axis: j });
        }
        v *= a / (j + 1) as f64;
    }
    Ok(v)
}

/// Psi-side containment: `sum_j p_j / a_j <= 1` over finite axes.
///
/// Uses the default tolerance; see [`form_contains_tol`].
pub fn form_contains(q: &DiagonalHermitianForm, p: &PsiPoint) -> Result<bool> {
    form_contains_tol(q, p, Tolerance::default())
}

pub fn form_contains_tol(q: &DiagonalHermitianForm, p: &PsiPoint, tol: Tolerance) -> Result<bool> {
    check_dim(q.dim(), p.dim())?;
    let level: f64 = q
        .axes()
        .iter()
        .zip(p.coords())
        .filter(|(a, _)| a.is_finite())
        .map(|(a, u)| u / a)
        .sum();
    Ok(tol.le(level, 1.0))
}

/// The simplex `Psi(B_q)`; parameters carry over unchanged.
pub fn form_to_simplex(q: &DiagonalHermitianForm) -> SimplexParams {
    SimplexParams {
        intercepts: q.axes.clone(),
    }
}

pub fn simplex_to_form(t: &SimplexParams) -> DiagonalHermitianForm {
    DiagonalHermitianForm {
        axes: t.intercepts.clone(),
    }
}

/// An orthonormal basis of `C^n`, stored as the columns of a unitary `Q`.
///
/// Frame coordinates `Y` relate to standard ones by `X = Q Y`.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    q: DMatrix<Complex64>,
}

impl Frame {
    pub fn identity(n: usize) -> Self {
        Self {
            q: DMatrix::identity(n, n),
        }
    }

    /// A frame whose first vector is `v / |v|`, completed by Gram-Schmidt on
    /// the standard basis.
    pub fn with_leading(v: &CVector) -> Result<Self> {
        let n = v.dim();
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::InvalidParameter("frame direction must be nonzero".into()));
        }
        let mut cols: Vec<Vec<Complex64>> = vec![v.components().iter().map(|c| c / norm).collect()];
        for j in 0..n {
            if cols.len() == n {
                break;
            }
            let mut w = vec![Complex64::new(0.0, 0.0); n];
            w[j] = Complex64::new(1.0, 0.0);
            // two passes keep the basis orthonormal to rounding
            for _ in 0..2 {
                for c in &cols {
                    let dot: Complex64 = c.iter().zip(&w).map(|(ci, wi)| ci.conj() * wi).sum();
                    for (wi, ci) in w.iter_mut().zip(c) {
                        *wi -= dot * ci;
                    }
                }
            }
            let wn = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if wn > 1e-8 {
                cols.push(w.into_iter().map(|c| c / wn).collect());
            }
        }
        let q = DMatrix::from_fn(n, n, |i, k| cols[k][i]);
        Ok(Self { q })
    }

    /// Block-diagonal frame of `C^{n1} x C^{n2}`.
    pub fn block(left: &Frame, right: &Frame) -> Self {
        let (n1, n2) = (left.dim(), right.dim());
        let mut q = DMatrix::zeros(n1 + n2, n1 + n2);
        q.view_mut((0, 0), (n1, n1)).copy_from(&left.q);
        q.view_mut((n1, n1), (n2, n2)).copy_from(&right.q);
        Self { q }
    }

    pub fn dim(&self) -> usize {
        self.q.nrows()
    }

    pub fn is_identity(&self) -> bool {
        self.q == DMatrix::identity(self.dim(), self.dim())
    }

    /// `X = Q Y`.
    pub fn to_standard(&self, y: &CVector) -> CVector {
        let out = &self.q * nalgebra::DVector::from_column_slice(y.components());
        CVector(out.iter().copied().collect())
    }

    /// `Y = Q^* X`.
    pub fn to_frame(&self, x: &CVector) -> CVector {
        let out = self.q.adjoint() * nalgebra::DVector::from_column_slice(x.components());
        CVector(out.iter().copied().collect())
    }
}
