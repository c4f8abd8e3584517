//! Simultaneous root iteration for monic complex polynomials and the
//! label-preserving assignment used by the tracker.

use crate::error::{Error, Result};
use crate::scalar::Complex64;
use crate::symfun::permutations;

/// All roots of the monic polynomial with the given descending coefficients
/// (coeffs[0] = 1). Warm-started from `guesses` when provided, otherwise
/// from a circle of radius 1 + max |coefficient|.
pub fn aberth_roots(
    coeffs: &[Complex64],
    guesses: Option<&[Complex64]>,
    tol: f64,
    max_iter: usize,
) -> Result<Vec<Complex64>> {
    let degree = coeffs.len() - 1;
    if degree == 0 {
        return Ok(Vec::new());
    }
    if degree == 1 {
        return Ok(vec![-coeffs[1]]);
    }
    let mut z: Vec<Complex64> = match guesses {
        Some(g) => {
            debug_assert_eq!(g.len(), degree);
            g.to_vec()
        }
        None => {
            let radius = 1.0 + coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
            (0..degree)
                .map(|k| {
                    let theta =
                        2.0 * std::f64::consts::PI * k as f64 / degree as f64 + 0.43;
                    Complex64::new(radius * theta.cos(), radius * theta.sin())
                })
                .collect()
        }
    };

    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in coeffs {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    };

    let scale = 1.0 + z.iter().map(|v| v.norm()).fold(0.0, f64::max);
    for _ in 0..max_iter {
        let mut max_delta: f64 = 0.0;
        for i in 0..degree {
            let (p, dp) = eval(z[i]);
            if !p.is_finite() || !dp.is_finite() {
                return Err(Error::RootSolverDiverged);
            }
            let w = if dp.norm() > 1e-300 {
                p / dp
            } else {
                // nudge off the critical point
                z[i] += Complex64::new(1e-8 * scale, 1e-8 * scale);
                continue;
            };
            let mut sum = Complex64::new(0.0, 0.0);
            for (j, &zj) in z.iter().enumerate() {
                if j != i {
                    let d = z[i] - zj;
                    if d.norm() < 1e-300 {
                        // coincident iterates: separate them
                        sum += Complex64::new(1e12, 0.0);
                    } else {
                        sum += Complex64::new(1.0, 0.0) / d;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - w * sum;
            let delta = if denom.norm() > 1e-300 { w / denom } else { w };
            z[i] -= delta;
            max_delta = max_delta.max(delta.norm());
        }
        if z.iter().any(|v| !v.is_finite()) {
            return Err(Error::RootSolverDiverged);
        }
        if max_delta <= tol * scale.max(1.0) {
            return Ok(z);
        }
    }
    Err(Error::RootSolverDiverged)
}

/// Permutation `perm` minimizing the total displacement
/// sum_i |prev[i] - roots[perm[i]]|; exhaustive for up to 8 roots, greedy
/// with a pairwise improvement pass beyond.
pub fn match_roots(prev: &[Complex64], roots: &[Complex64]) -> Vec<usize> {
    let n = prev.len();
    debug_assert_eq!(roots.len(), n);
    if n <= 8 {
        let mut best: Option<(f64, Vec<usize>)> = None;
        for perm in permutations(n) {
            let cost: f64 = (0..n).map(|i| (prev[i] - roots[perm[i]]).norm()).sum();
            if best.as_ref().map_or(true, |(c, _)| cost < *c) {
                best = Some((cost, perm));
            }
        }
        return best.expect("nonempty").1;
    }
    // greedy nearest-unused, then fix crossings pairwise
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for i in 0..n {
        let mut best_j = usize::MAX;
        let mut best_d = f64::INFINITY;
        for (j, &r) in roots.iter().enumerate() {
            if !used[j] {
                let d = (prev[i] - r).norm();
                if d < best_d {
                    best_d = d;
                    best_j = j;
                }
            }
        }
        perm[i] = best_j;
        used[best_j] = true;
    }
    let mut improved = true;
    while improved {
        improved = false;
        for i in 0..n {
            for j in i + 1..n {
                let now = (prev[i] - roots[perm[i]]).norm() + (prev[j] - roots[perm[j]]).norm();
                let swapped =
                    (prev[i] - roots[perm[j]]).norm() + (prev[j] - roots[perm[i]]).norm();
                if swapped + 1e-15 < now {
                    perm.swap(i, j);
                    improved = true;
                }
            }
        }
    }
    perm
}

/// Smallest pairwise distance among the roots.
pub fn min_separation(roots: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            best = best.min((roots[i] - roots[j]).norm());
        }
    }
    best
}
