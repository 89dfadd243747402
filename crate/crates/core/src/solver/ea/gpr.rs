//! Gaussian-process regression over tours with an edit-distance kernel,
//! scaled to many points by a clustered ensemble.
//!
//! The kernel is `k(x, x') = exp(-theta * d_L(x, x'))` with `d_L` the
//! Levenshtein distance between visited parts. One GPR is fit per cluster of
//! at most `cap` points; predictions combine cluster models weighted by the
//! inverse of their predictive variance.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use super::levenshtein::levenshtein;

const JITTER: f64 = 1e-8;
/// Prediction variances are floored here; weights stay finite.
const VAR_FLOOR: f64 = 1e-12;

/// Single Gaussian-process model over one cluster.
pub struct Gpr {
    points: Vec<Vec<usize>>,
    theta: f64,
    chol: Cholesky<f64, Dyn>,
    alpha: DVector<f64>,
    y_mean: f64,
}

fn kernel_matrix(dists: &DMatrix<f64>, theta: f64, jitter: f64) -> DMatrix<f64> {
    let n = dists.nrows();
    DMatrix::from_fn(n, n, |i, j| {
        (-theta * dists[(i, j)]).exp() + if i == j { jitter } else { 0.0 }
    })
}

/// Negative log marginal likelihood (up to the constant term).
fn neg_mll(dists: &DMatrix<f64>, y: &DVector<f64>, theta: f64) -> Option<f64> {
    let k = kernel_matrix(dists, theta, JITTER);
    let chol = Cholesky::new(k)?;
    let alpha = chol.solve(y);
    let log_det: f64 = chol.l().diagonal().iter().map(|d| d.ln()).sum();
    Some(0.5 * y.dot(&alpha) + log_det)
}

impl Gpr {
    /// Fits the length scale by marginal likelihood: coarse log-spaced grid,
    /// then a golden-section refinement around the best grid point.
    pub fn fit(points: Vec<Vec<usize>>, values: &[f64]) -> Option<Gpr> {
        let n = points.len();
        if n == 0 {
            return None;
        }
        let y_mean = values.iter().sum::<f64>() / n as f64;
        let y = DVector::from_iterator(n, values.iter().map(|v| v - y_mean));
        let dists = DMatrix::from_fn(n, n, |i, j| levenshtein(&points[i], &points[j]) as f64);

        let grid: Vec<f64> = (0..21)
            .map(|k| 10f64.powf(-3.0 + 4.0 * k as f64 / 20.0))
            .collect();
        let mut best = (f64::INFINITY, grid[grid.len() / 2]);
        for &theta in &grid {
            if let Some(nll) = neg_mll(&dists, &y, theta) {
                if nll < best.0 {
                    best = (nll, theta);
                }
            }
        }
        // refine on the log scale around the winning grid cell
        let (mut lo, mut hi) = (best.1 / 10f64.powf(0.2), best.1 * 10f64.powf(0.2));
        for _ in 0..16 {
            let m1 = lo * (hi / lo).powf(0.382);
            let m2 = lo * (hi / lo).powf(0.618);
            let f1 = neg_mll(&dists, &y, m1).unwrap_or(f64::INFINITY);
            let f2 = neg_mll(&dists, &y, m2).unwrap_or(f64::INFINITY);
            if f1 <= f2 {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        let mut theta = (lo * hi).sqrt();
        if neg_mll(&dists, &y, theta).unwrap_or(f64::INFINITY) > best.0 {
            theta = best.1;
        }

        // final decomposition, escalating the jitter if needed
        let mut jitter = JITTER;
        let chol = loop {
            if let Some(c) = Cholesky::new(kernel_matrix(&dists, theta, jitter)) {
                break c;
            }
            jitter *= 10.0;
            if jitter > 1e-2 {
                return None;
            }
        };
        let alpha = chol.solve(&y);
        Some(Gpr {
            points,
            theta,
            chol,
            alpha,
            y_mean,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Predictive mean and variance at a query tour.
    pub fn predict(&self, query: &[usize]) -> (f64, f64) {
        let k_star = DVector::from_iterator(
            self.points.len(),
            self.points
                .iter()
                .map(|p| (-self.theta * levenshtein(p, query) as f64).exp()),
        );
        let mean = self.y_mean + k_star.dot(&self.alpha);
        let v = self.chol.solve(&k_star);
        let var = (1.0 + JITTER - k_star.dot(&v)).max(VAR_FLOOR);
        (mean, var)
    }
}

/// Greedy medoid partition: points are scanned in insertion order and join
/// the nearest cluster medoid with free capacity, or found a new cluster.
pub fn cluster_indices(points: &[Vec<usize>], cap: usize) -> Vec<Vec<usize>> {
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut medoids: Vec<usize> = Vec::new();
    for (idx, p) in points.iter().enumerate() {
        let mut best: Option<(usize, usize)> = None; // (distance, cluster)
        for (c, &m) in medoids.iter().enumerate() {
            if clusters[c].len() >= cap {
                continue;
            }
            let d = levenshtein(p, &points[m]);
            if best.map_or(true, |(bd, _)| d < bd) {
                best = Some((d, c));
            }
        }
        match best {
            Some((_, c)) => clusters[c].push(idx),
            None => {
                medoids.push(idx);
                clusters.push(vec![idx]);
            }
        }
    }
    clusters
}

/// Uncertainty-weighted ensemble of per-cluster GPR models.
pub struct ClusteredGpr {
    models: Vec<Gpr>,
}

impl ClusteredGpr {
    /// Fits one model per cluster of at most `cap` training points.
    pub fn fit(data: &[(Vec<usize>, f64)], cap: usize) -> Option<ClusteredGpr> {
        if data.is_empty() {
            return None;
        }
        let points: Vec<Vec<usize>> = data.iter().map(|(p, _)| p.clone()).collect();
        let models: Vec<Gpr> = cluster_indices(&points, cap)
            .into_iter()
            .filter_map(|idxs| {
                let pts: Vec<Vec<usize>> = idxs.iter().map(|&i| points[i].clone()).collect();
                let ys: Vec<f64> = idxs.iter().map(|&i| data[i].1).collect();
                Gpr::fit(pts, &ys)
            })
            .collect();
        if models.is_empty() {
            None
        } else {
            Some(ClusteredGpr { models })
        }
    }

    /// Ensemble prediction: cluster means weighted by inverse predictive
    /// variance; the returned variance is the harmonic combination.
    pub fn predict(&self, query: &[usize]) -> (f64, f64) {
        let mut weight_sum = 0.0;
        let mut mean_acc = 0.0;
        for model in &self.models {
            let (mean, var) = model.predict(query);
            let w = 1.0 / var.max(VAR_FLOOR);
            weight_sum += w;
            mean_acc += w * mean;
        }
        (mean_acc / weight_sum, 1.0 / weight_sum)
    }
}
