//! Deterministic direction sets on the nonnegative part of the unit sphere
//! of `R^k`. A Reinhardt set is determined by its radii along such
//! directions.
//!
//! Directions are parametrized by points `w` of the standard simplex,
//! `d = sqrt(w)`, so that `Psi(t d) = t^2 w`.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `d_j = sqrt(w_j)` for a point `w` of the standard simplex.
pub fn direction_from_weights(w: &[f64]) -> Vec<f64> {
    let total: f64 = w.iter().sum();
    w.iter().map(|x| (x.max(0.0) / total).sqrt()).collect()
}

/// Plastic-number generalization of the golden ratio: the positive root of
/// `x^(dim+1) = x + 1`, which drives an additive recurrence with low
/// discrepancy in `[0, 1]^dim`.
fn roberts_root(dim: usize) -> f64 {
    let mut x = 2.0f64;
    for _ in 0..64 {
        x = (1.0 + x).powf(1.0 / (dim as f64 + 1.0));
    }
    x
}

/// `count` weight vectors on the standard simplex of `R^k`: the vertices,
/// the barycenter and edge midpoints first, then a Roberts sequence mapped
/// to the simplex by sorted spacings.
pub fn simplex_weights(k: usize, count: usize) -> Vec<Vec<f64>> {
    assert!(k >= 1, "dimension must be positive");
    if k == 1 {
        return vec![vec![1.0]];
    }
    let count = count.max(k + 1);
    if k == 2 {
        return (0..count)
            .map(|i| {
                if i == count - 1 {
                    return vec![0.0, 1.0];
                }
                let th = FRAC_PI_2 * i as f64 / (count - 1) as f64;
                let (s, c) = th.sin_cos();
                vec![c * c, s * s]
            })
            .collect();
    }
    let mut out = Vec::with_capacity(count);
    for j in 0..k {
        let mut w = vec![0.0; k];
        w[j] = 1.0;
        out.push(w);
    }
    out.push(vec![1.0 / k as f64; k]);
    'edges: for i in 0..k {
        for j in i + 1..k {
            if out.len() >= count {
                break 'edges;
            }
            let mut w = vec![0.0; k];
            w[i] = 0.5;
            w[j] = 0.5;
            out.push(w);
        }
    }
    let dim = k - 1;
    let g = roberts_root(dim);
    let steps: Vec<f64> = (1..=dim).map(|i| g.powi(-(i as i32))).collect();
    let mut i = 1usize;
    while out.len() < count {
        let mut u: Vec<f64> = steps.iter().map(|s| (0.5 + s * i as f64).fract()).collect();
        u.sort_by(f64::total_cmp);
        let mut w = Vec::with_capacity(k);
        let mut prev = 0.0;
        for x in &u {
            w.push(x - prev);
            prev = *x;
        }
        w.push(1.0 - prev);
        out.push(w);
        i += 1;
    }
    out
}

/// Unit directions with nonnegative coordinates; see [`simplex_weights`].
pub fn orthant_directions(k: usize, count: usize) -> Vec<Vec<f64>> {
    simplex_weights(k, count).iter().map(|w| direction_from_weights(w)).collect()
}

const LOG_STEP: f64 = 8.0;

/// Local maximization of `f` over the standard simplex by pattern search.
///
/// Each poll tries the edge directions `e_i - e_j` and a few pseudo-random
/// tangent directions (seeded, so results are reproducible); the random
/// directions let the search climb along ridges of nonsmooth objectives.
/// Every direction is tried both additively and as a multiplicative update of
/// the weights. The step is halved after two unsuccessful polls in a row
/// until it drops below `min_step`.
pub fn maximize_on_simplex(
    f: &dyn Fn(&[f64]) -> f64,
    start: &[f64],
    initial_step: f64,
    min_step: f64,
) -> (Vec<f64>, f64) {
    let k = start.len();
    let mut w = start.to_vec();
    let mut best = f(&w);
    if k == 1 {
        return (w, best);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut directions: Vec<Vec<f64>> = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if i != j {
                let mut v = vec![0.0; k];
                v[i] = 1.0;
                v[j] = -1.0;
                directions.push(v);
            }
        }
    }
    let fixed = directions.len();
    let extra = if k > 2 { 4 * k } else { 0 };
    let mut step = initial_step;
    let mut trial = w.clone();
    let mut failures = 0;
    while step >= min_step {
        directions.truncate(fixed);
        for _ in 0..extra {
            let mut v: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mean = v.iter().sum::<f64>() / k as f64;
            v.iter_mut().for_each(|x| *x -= mean);
            let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            if scale > 0.0 {
                v.iter_mut().for_each(|x| *x /= scale);
                directions.push(v);
            }
        }
        let mut improved = false;
        for v in &directions {
            let mut h = step;
            for (wj, vj) in w.iter().zip(v) {
                if *vj < 0.0 {
                    h = h.min(wj / -vj);
                }
            }
            if h > 0.0 {
                for ((t, wj), vj) in trial.iter_mut().zip(&w).zip(v) {
                    *t = (wj + h * vj).max(0.0);
                }
                let v = f(&trial);
                if v > best {
                    best = v;
                    w.copy_from_slice(&trial);
                    improved = true;
                }
            }
            // multiplicative move, effective near faces where additive steps are clipped
            let mut total = 0.0;
            for ((t, wj), vj) in trial.iter_mut().zip(&w).zip(v) {
                *t = wj * (LOG_STEP * step * vj).exp();
                total += *t;
            }
            if total > 0.0 {
                trial.iter_mut().for_each(|t| *t /= total);
                let v = f(&trial);
                if v > best {
                    best = v;
                    w.copy_from_slice(&trial);
                    improved = true;
                }
            }
        }
        if improved {
            failures = 0;
        } else {
            failures += 1;
            if failures >= 2 {
                step *= 0.5;
                failures = 0;
            }
        }
    }
    (w, best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_lie_on_the_simplex() {
        for k in 1..6 {
            let ws = simplex_weights(k, 300);
            assert_eq!(ws.len(), if k == 1 { 1 } else { 300 });
            for w in &ws {
                assert_eq!(w.len(), k);
                assert!(w.iter().all(|x| *x >= 0.0));
                assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn vertices_are_included() {
        for k in 2..5 {
            let ws = simplex_weights(k, 50);
            for j in 0..k {
                assert!(ws.iter().any(|w| (w[j] - 1.0).abs() < 1e-15));
            }
        }
    }

    #[test]
    fn directions_are_unit() {
        for d in orthant_directions(4, 100) {
            let n: f64 = d.iter().map(|x| x * x).sum();
            assert!((n - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(simplex_weights(3, 128), simplex_weights(3, 128));
    }

    #[test]
    fn compass_search_finds_interior_maximum() {
        let target = [0.2, 0.5, 0.3];
        let f = |w: &[f64]| -w.iter().zip(&target).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
        let (w, v) = maximize_on_simplex(&f, &[1.0 / 3.0; 3], 0.1, 1e-12);
        assert!(v > -1e-20);
        for (a, b) in w.iter().zip(&target) {
            assert!((a - b).abs() < 1e-9);
        }
    }
}
