//! Grid search for the minimal simplex, independent of the convex solver.
//! Only for small dimensions; used as a test oracle.

use crate::error::{Error, Result};
use crate::geometry::SimplexParams;
use crate::wu::solver::SimplexProgram;

/// Minimizes `prod a_j` over a coarse-to-fine logarithmic grid of the first
/// free intercepts; the last free intercept is the smallest one keeping every
/// point inside. `resolution` is the final relative grid step.
pub fn min_vol_simplex_bruteforce(prog: &SimplexProgram, resolution: f64) -> Result<SimplexParams> {
    if prog.dim() > 3 {
        return Err(Error::Unsupported(format!(
            "grid search in dimension {} (at most 3)",
            prog.dim()
        )));
    }
    if !(resolution > 0.0 && resolution < 1.0) {
        return Err(Error::InvalidParameter(format!("resolution {resolution}")));
    }
    let (free, rows) = prog.reduced_rows()?;
    let k = free.len();
    if k == 0 {
        return SimplexParams::new(prog.assemble(&free, &[]));
    }
    let rows: Vec<Vec<f64>> = rows.into_iter().map(|(_, r)| r).collect();
    let lo: Vec<f64> = (0..k)
        .map(|j| rows.iter().map(|r| r[j]).fold(0.0, f64::max))
        .collect();
    let span = (k as f64) * (k as f64).ln();

    // log-volume given the grid intercepts of the first k - 1 axes
    let last = |head: &[f64]| -> Option<f64> {
        let mut a_last = 0.0f64;
        for r in &rows {
            let slack = 1.0 - head.iter().zip(r).map(|(a, u)| u / a).sum::<f64>();
            let need = r[k - 1];
            if need > 0.0 {
                if slack <= 0.0 {
                    return None;
                }
                a_last = a_last.max(need / slack);
            } else if slack < 0.0 {
                return None;
            }
        }
        Some(a_last)
    };
    let objective = |logs: &[f64]| -> Option<(f64, Vec<f64>)> {
        let head: Vec<f64> = logs.iter().zip(&lo).map(|(x, l)| l * x.exp()).collect();
        let a_last = last(&head)?;
        let mut a = head;
        a.push(a_last);
        Some((a.iter().map(|x| x.ln()).sum(), a))
    };

    if k == 1 {
        let a = last(&[]).expect("single axis is always feasible");
        return SimplexParams::new(prog.assemble(&free, &[a]));
    }

    let dims = k - 1;
    let mut center = vec![0.5 * span; dims];
    let mut half = vec![0.5 * span; dims];
    let target = (1.0 + resolution).ln();
    let points_per_axis = 40usize;
    let mut best: Option<(f64, Vec<f64>)> = None;
    loop {
        let step: Vec<f64> = half.iter().map(|h| 2.0 * h / points_per_axis as f64).collect();
        let mut round_best: Option<(f64, Vec<f64>, Vec<f64>)> = None;
        let total = (points_per_axis + 1).pow(dims as u32);
        for idx in 0..total {
            let mut rem = idx;
            let mut logs = Vec::with_capacity(dims);
            for d in 0..dims {
                let i = rem % (points_per_axis + 1);
                rem /= points_per_axis + 1;
                logs.push((center[d] - half[d] + i as f64 * step[d]).clamp(0.0, span));
            }
            if let Some((v, a)) = objective(&logs) {
                if round_best.as_ref().is_none_or(|(b, _, _)| v < *b) {
                    round_best = Some((v, logs, a));
                }
            }
        }
        let (v, logs, a) = round_best.ok_or_else(|| Error::Infeasible("empty grid".into()))?;
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, a));
        }
        if step.iter().all(|s| *s <= target) {
            break;
        }
        center = logs;
        half = step.iter().map(|s| 2.0 * s).collect();
    }
    let (_, a) = best.expect("at least one feasible grid point");
    SimplexParams::new(prog.assemble(&free, &a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PsiPoint;
    use approx::assert_relative_eq;

    fn prog(v: &[&[f64]]) -> SimplexProgram {
        SimplexProgram::new(v.iter().map(|p| PsiPoint::new(p.to_vec()).unwrap()).collect()).unwrap()
    }

    #[test]
    fn unit_box_corner() {
        let t = min_vol_simplex_bruteforce(&prog(&[&[1.0, 1.0]]), 1e-3).unwrap();
        assert_relative_eq!(t.intercepts()[0], 2.0, max_relative = 2e-3);
        assert_relative_eq!(t.intercepts()[1], 2.0, max_relative = 2e-3);
    }

    #[test]
    fn three_dimensional_corner() {
        let t = min_vol_simplex_bruteforce(&prog(&[&[1.0, 2.0, 0.5]]), 1e-3).unwrap();
        assert_relative_eq!(t.volume().unwrap(), 27.0 / 6.0, max_relative = 1e-3);
    }

    #[test]
    fn rejects_large_dimension() {
        assert!(matches!(
            min_vol_simplex_bruteforce(&prog(&[&[1.0; 4]]), 1e-3),
            Err(Error::Unsupported(_))
        ));
    }
}
