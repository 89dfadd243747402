//! Feasibility classifier: gradient-boosted decision trees over the rank
//! representation of tours, predicting the probability that a tour is
//! infeasible. Deterministic: no subsampling, fixed split order.

use super::cache::EvalCache;
use crate::instance::DEPOT;

/// Decision threshold above which the evolutionary loop vetoes offspring.
pub const VETO_THRESHOLD: f64 = 0.4;

const ROUNDS: usize = 40;
const LEARNING_RATE: f64 = 0.15;
const MAX_DEPTH: usize = 3;
const MIN_LEAF: usize = 4;

/// Rank representation: `r[v - 1]` is the position of node `v` in the tour
/// suffix (visited part first, then the depot marker, then unvisited nodes
/// in id order), giving `n` features per tour.
pub fn rank_features(n: usize, visited: &[usize]) -> Vec<f64> {
    let mut ranks = vec![0.0; n];
    let mut pos = 0usize;
    let mut seen = vec![false; n + 1];
    for &v in visited {
        ranks[v - 1] = pos as f64;
        seen[v] = true;
        pos += 1;
    }
    ranks[0] = pos as f64; // depot marker
    pos += 1;
    for v in 2..=n {
        if !seen[v] {
            ranks[v - 1] = pos as f64;
            pos += 1;
        }
    }
    ranks
}

#[derive(Debug, Clone)]
enum Node {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf(f64),
}

#[derive(Debug, Clone)]
struct Tree {
    nodes: Vec<Node>,
}

impl Tree {
    fn eval(&self, x: &[f64]) -> f64 {
        let mut at = 0usize;
        loop {
            match self.nodes[at] {
                Node::Leaf(v) => return v,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if x[feature] <= threshold { left } else { right };
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
enum Model {
    /// Training data had a single class; predict its smoothed frequency.
    Constant(f64),
    Boosted { base: f64, trees: Vec<Tree> },
}

/// Probability model for tour infeasibility.
#[derive(Debug, Clone)]
pub struct FeasibilityClassifier {
    model: Model,
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

impl FeasibilityClassifier {
    /// Probability that the tour with these rank features is infeasible.
    pub fn predict_infeasible(&self, features: &[f64]) -> f64 {
        match &self.model {
            Model::Constant(p) => *p,
            Model::Boosted { base, trees } => {
                let mut z = *base;
                for tree in trees {
                    z += LEARNING_RATE * tree.eval(features);
                }
                sigmoid(z)
            }
        }
    }

    /// Fits on `(features, infeasible-label)` rows.
    pub fn fit(xs: &[Vec<f64>], labels: &[bool]) -> FeasibilityClassifier {
        let n = xs.len();
        let positives = labels.iter().filter(|&&l| l).count();
        if positives == 0 || positives == n {
            // Laplace smoothing keeps the degenerate model on the right
            // side of 0.5.
            return FeasibilityClassifier {
                model: Model::Constant((positives + 1) as f64 / (n + 2) as f64),
            };
        }

        let y: Vec<f64> = labels.iter().map(|&l| f64::from(l as u8)).collect();
        let prior = positives as f64 / n as f64;
        let base = (prior / (1.0 - prior)).ln();
        let mut z = vec![base; n];
        let mut trees = Vec::with_capacity(ROUNDS);
        for _ in 0..ROUNDS {
            let probs: Vec<f64> = z.iter().map(|&v| sigmoid(v)).collect();
            let grad: Vec<f64> = y.iter().zip(&probs).map(|(&yi, &pi)| yi - pi).collect();
            let hess: Vec<f64> = probs.iter().map(|&p| (p * (1.0 - p)).max(1e-6)).collect();
            let idx: Vec<usize> = (0..n).collect();
            let mut nodes = Vec::new();
            build_tree(xs, &grad, &hess, idx, 0, &mut nodes);
            let tree = Tree { nodes };
            for (i, x) in xs.iter().enumerate() {
                z[i] += LEARNING_RATE * tree.eval(x);
            }
            trees.push(tree);
        }
        FeasibilityClassifier {
            model: Model::Boosted { base, trees },
        }
    }
}

/// Builds one regression tree on the gradient; the leaf value is the Newton
/// step `sum(grad) / sum(hess)`.
fn build_tree(
    xs: &[Vec<f64>],
    grad: &[f64],
    hess: &[f64],
    idx: Vec<usize>,
    depth: usize,
    nodes: &mut Vec<Node>,
) -> usize {
    let leaf_value = |idx: &[usize]| {
        let g: f64 = idx.iter().map(|&i| grad[i]).sum();
        let h: f64 = idx.iter().map(|&i| hess[i]).sum();
        (g / h).clamp(-4.0, 4.0)
    };

    let mut best: Option<(f64, usize, f64)> = None; // (score gain, feature, threshold)
    if depth < MAX_DEPTH && idx.len() >= 2 * MIN_LEAF {
        let g_total: f64 = idx.iter().map(|&i| grad[i]).sum();
        let h_total: f64 = idx.iter().map(|&i| hess[i]).sum();
        let parent_score = g_total * g_total / h_total;
        let n_features = xs[0].len();
        for feature in 0..n_features {
            let mut order: Vec<usize> = idx.clone();
            order.sort_by(|&a, &b| xs[a][feature].total_cmp(&xs[b][feature]));
            let mut g_left = 0.0;
            let mut h_left = 0.0;
            for k in 0..order.len() - 1 {
                let i = order[k];
                g_left += grad[i];
                h_left += hess[i];
                if xs[order[k]][feature] == xs[order[k + 1]][feature] {
                    continue;
                }
                let left_n = k + 1;
                let right_n = order.len() - left_n;
                if left_n < MIN_LEAF || right_n < MIN_LEAF {
                    continue;
                }
                let g_right = g_total - g_left;
                let h_right = h_total - h_left;
                let gain =
                    g_left * g_left / h_left + g_right * g_right / h_right - parent_score;
                let threshold = 0.5 * (xs[order[k]][feature] + xs[order[k + 1]][feature]);
                if best.map_or(gain > 1e-12, |(bg, _, _)| gain > bg) {
                    best = Some((gain, feature, threshold));
                }
            }
        }
    }

    let slot = nodes.len();
    nodes.push(Node::Leaf(0.0)); // reserve
    match best {
        None => {
            nodes[slot] = Node::Leaf(leaf_value(&idx));
        }
        Some((_, feature, threshold)) => {
            let (left_idx, right_idx): (Vec<usize>, Vec<usize>) =
                idx.into_iter().partition(|&i| xs[i][feature] <= threshold);
            let left = build_tree(xs, grad, hess, left_idx, depth + 1, nodes);
            let right = build_tree(xs, grad, hess, right_idx, depth + 1, nodes);
            nodes[slot] = Node::Split {
                feature,
                threshold,
                left,
                right,
            };
        }
    }
    slot
}

/// Trains on every cache entry: a tour counts as infeasible when at least
/// half of its samples were infeasible.
pub fn train_classifier(cache: &EvalCache) -> FeasibilityClassifier {
    let n = cache.instance().n();
    let mut xs = Vec::with_capacity(cache.len());
    let mut labels = Vec::with_capacity(cache.len());
    for (visited, entry) in cache.iter() {
        debug_assert!(visited.iter().all(|&v| v != DEPOT));
        xs.push(rank_features(n, visited));
        labels.push(entry.infeasible_fraction() >= 0.5);
    }
    FeasibilityClassifier::fit(&xs, &labels)
}
