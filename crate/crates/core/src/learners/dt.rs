//! Binary decision tree grown on entropy gain and pruned by minimal
//! cost-complexity.

use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::features::selection::{binary_entropy, split_gain};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DtParams {
    pub max_depth: usize,
    pub min_leaf: usize,
    pub ccp_alpha: f64,
}

impl Default for DtParams {
    fn default() -> Self {
        DtParams {
            max_depth: 10,
            min_leaf: 1,
            ccp_alpha: 0.01,
        }
    }
}

/// Gains closer than this count as equal.
const GAIN_TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Split {
    pub feature: usize,
    pub threshold: f64,
    pub gain: f64,
}

/// Best `(feature, midpoint)` split of `rows` by information gain.
///
/// Both sides must keep at least `min_leaf` rows. Ties on gain go to the
/// lowest feature, then the lowest threshold. Zero-gain splits are returned
/// too; `None` means no admissible split exists.
pub fn best_split(x: &[Vec<f64>], positive: &[bool], rows: &[usize], min_leaf: usize) -> Option<Split> {
    let n_features = rows.first().map_or(0, |&r| x[r].len());
    let min_leaf = min_leaf.max(1);
    let total_pos = rows.iter().filter(|&&r| positive[r]).count();
    let total_neg = rows.len() - total_pos;
    let mut best: Option<Split> = None;
    let mut order = rows.to_vec();
    for f in 0..n_features {
        order.sort_by(|&a, &b| x[a][f].total_cmp(&x[b][f]));
        let (mut pos_left, mut neg_left) = (0, 0);
        for k in 0..order.len().saturating_sub(1) {
            if positive[order[k]] {
                pos_left += 1;
            } else {
                neg_left += 1;
            }
            let (lo, hi) = (x[order[k]][f], x[order[k + 1]][f]);
            let n_left = k + 1;
            if lo == hi || n_left < min_leaf || order.len() - n_left < min_leaf {
                continue;
            }
            let gain = split_gain(pos_left, neg_left, total_pos - pos_left, total_neg - neg_left);
            if best.is_none_or(|b| gain > b.gain + GAIN_TIE) {
                best = Some(Split {
                    feature: f,
                    threshold: lo + (hi - lo) / 2.0,
                    gain,
                });
            }
        }
    }
    best
}

/// A node of the tree, stored in an arena. Leaves have no children.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DtNode {
    /// `[negatives, positives]` among training rows reaching the node.
    pub counts: [usize; 2],
    pub depth: usize,
    pub split: Option<(usize, f64)>,
    pub children: Option<(usize, usize)>,
}

impl DtNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }

    /// `[P(N), P(D)]` among the node's training rows.
    pub fn distribution(&self) -> [f64; 2] {
        let n = (self.counts[0] + self.counts[1]) as f64;
        [self.counts[0] as f64 / n, self.counts[1] as f64 / n]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DtModel {
    pub params: DtParams,
    pub nodes: Vec<DtNode>,
}

pub fn train_dt(x: &[Vec<f64>], labels: &[Label], params: DtParams) -> Result<DtModel> {
    if x.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: labels.len(),
        });
    }
    if params.min_leaf == 0 || !(params.ccp_alpha >= 0.0) {
        return Err(Error::InvalidParams(format!("{params:?}")));
    }
    if x.is_empty() || x.len() < 2 * params.min_leaf {
        return Err(Error::InvalidParams(format!(
            "{} examples is fewer than 2 * min_leaf ({})",
            x.len(),
            params.min_leaf
        )));
    }
    let width = x[0].len();
    if let Some(row) = x.iter().find(|r| r.len() != width) {
        return Err(Error::LengthMismatch {
            left: width,
            right: row.len(),
        });
    }
    let positive: Vec<bool> = labels.iter().map(|l| l.is_positive()).collect();
    let mut model = DtModel {
        params,
        nodes: Vec::new(),
    };
    let all: Vec<usize> = (0..x.len()).collect();
    model.grow(x, &positive, all, 0);
    model.prune(x.len());
    Ok(model)
}

impl DtModel {
    fn grow(&mut self, x: &[Vec<f64>], positive: &[bool], rows: Vec<usize>, depth: usize) -> usize {
        let pos = rows.iter().filter(|&&r| positive[r]).count();
        let id = self.nodes.len();
        self.nodes.push(DtNode {
            counts: [rows.len() - pos, pos],
            depth,
            split: None,
            children: None,
        });
        let pure = pos == 0 || pos == rows.len();
        if pure || depth >= self.params.max_depth || rows.len() < 2 * self.params.min_leaf {
            return id;
        }
        let Some(split) = best_split(x, positive, &rows, self.params.min_leaf) else {
            return id;
        };
        let (left, right): (Vec<usize>, Vec<usize>) =
            rows.iter().partition(|&&r| x[r][split.feature] <= split.threshold);
        let l = self.grow(x, positive, left, depth + 1);
        let r = self.grow(x, positive, right, depth + 1);
        self.nodes[id].split = Some((split.feature, split.threshold));
        self.nodes[id].children = Some((l, r));
        id
    }

    /// Weighted impurity `(n_t / n) H(t)` of node `t` as a leaf.
    fn node_risk(&self, t: usize, n: usize) -> f64 {
        let c = self.nodes[t].counts;
        (c[0] + c[1]) as f64 / n as f64 * binary_entropy(c[0], c[1])
    }

    /// `(risk of the subtree's leaves, number of leaves)`.
    fn subtree_risk(&self, t: usize, n: usize) -> (f64, usize) {
        match self.nodes[t].children {
            None => (self.node_risk(t, n), 1),
            Some((l, r)) => {
                let (rl, nl) = self.subtree_risk(l, n);
                let (rr, nr) = self.subtree_risk(r, n);
                (rl + rr, nl + nr)
            }
        }
    }

    fn reachable_internal(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![0];
        while let Some(t) = stack.pop() {
            if let Some((l, r)) = self.nodes[t].children {
                out.push(t);
                stack.push(l);
                stack.push(r);
            }
        }
        out.sort_unstable();
        out
    }

    /// Weakest-link pruning: collapse the internal node with the smallest
    /// `g(t) = (R(t) - R(T_t)) / (|leaves(T_t)| - 1)` while it is below
    /// `ccp_alpha`, then drop unreachable nodes.
    fn prune(&mut self, n: usize) {
        loop {
            let mut weakest: Option<(f64, usize)> = None;
            for t in self.reachable_internal() {
                let (subtree, leaves) = self.subtree_risk(t, n);
                let g = (self.node_risk(t, n) - subtree) / (leaves - 1) as f64;
                if weakest.is_none_or(|(best, _)| g < best - GAIN_TIE) {
                    weakest = Some((g, t));
                }
            }
            match weakest {
                Some((g, t)) if g < self.params.ccp_alpha => {
                    self.nodes[t].children = None;
                    self.nodes[t].split = None;
                }
                _ => break,
            }
        }
        self.compact();
    }

    fn compact(&mut self) {
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut order = Vec::new();
        let mut stack = vec![0];
        while let Some(t) = stack.pop() {
            remap[t] = order.len();
            order.push(t);
            if let Some((l, r)) = self.nodes[t].children {
                stack.push(r);
                stack.push(l);
            }
        }
        self.nodes = order
            .into_iter()
            .map(|t| {
                let mut node = self.nodes[t].clone();
                node.children = node.children.map(|(l, r)| (remap[l], remap[r]));
                node
            })
            .collect();
    }

    fn leaf(&self, x: &[f64]) -> &DtNode {
        let mut t = 0;
        loop {
            let node = &self.nodes[t];
            match (node.split, node.children) {
                (Some((f, thr)), Some((l, r))) => t = if x[f] <= thr { l } else { r },
                _ => return node,
            }
        }
    }

    /// Positive-class proportion of the leaf `x` falls into.
    pub fn score(&self, x: &[f64]) -> f64 {
        self.leaf(x).distribution()[1]
    }

    /// Majority label of the leaf; an even split goes to the negative class.
    pub fn predict(&self, x: &[f64]) -> (Label, f64) {
        let s = self.score(x);
        (Label::from_positive(s > 0.5), s)
    }

    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_leaf()).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Label::{Depressed as D, NotDepressed as N};

    fn unpruned() -> DtParams {
        DtParams {
            ccp_alpha: 0.0,
            ..DtParams::default()
        }
    }

    #[test]
    fn one_dimensional_split() {
        let x: Vec<Vec<f64>> = [1.0, 2.0, 3.0, 4.0].iter().map(|&v| vec![v]).collect();
        let labels = [D, D, N, N];
        let positive: Vec<bool> = labels.iter().map(|l| l.is_positive()).collect();
        let s = best_split(&x, &positive, &[0, 1, 2, 3], 1).unwrap();
        assert_eq!((s.feature, s.threshold, s.gain), (0, 2.5, 1.0));
        let m = train_dt(&x, &labels, DtParams::default()).unwrap();
        assert_eq!(m.nodes[0].split, Some((0, 2.5)));
    }

    #[test]
    fn xor_needs_depth_two() {
        let x = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0], vec![1.0, 0.0]];
        let labels = [D, D, N, N];
        let positive: Vec<bool> = labels.iter().map(|l| l.is_positive()).collect();
        assert_eq!(best_split(&x, &positive, &[0, 1, 2, 3], 1).unwrap().gain, 0.0);
        let m = train_dt(&x, &labels, DtParams::default()).unwrap();
        for (xi, &l) in x.iter().zip(&labels) {
            assert_eq!(m.predict(xi).0, l);
        }
        assert_eq!(m.depth(), 2);
    }

    #[test]
    fn pure_input_is_a_leaf() {
        let x = vec![vec![1.0], vec![2.0]];
        let m = train_dt(&x, &[D, D], DtParams::default()).unwrap();
        assert_eq!(m.nodes.len(), 1);
        assert_eq!(m.score(&[0.0]), 1.0);
    }

    #[test]
    fn depth_and_min_leaf_limits() {
        let x: Vec<Vec<f64>> = (0..8).map(|v| vec![v as f64]).collect();
        let labels = [D, N, D, N, D, N, D, N];
        let m = train_dt(
            &x,
            &labels,
            DtParams {
                max_depth: 2,
                ..unpruned()
            },
        )
        .unwrap();
        assert!(m.depth() <= 2);
        let m = train_dt(
            &x,
            &labels,
            DtParams {
                min_leaf: 3,
                ..unpruned()
            },
        )
        .unwrap();
        let leaf_sizes: Vec<usize> = m
            .nodes
            .iter()
            .filter(|n| n.is_leaf())
            .map(|n| n.counts[0] + n.counts[1])
            .collect();
        assert!(leaf_sizes.iter().all(|&s| s >= 3), "{leaf_sizes:?}");
        assert!(train_dt(
            &x[..5],
            &labels[..5],
            DtParams {
                min_leaf: 3,
                ..unpruned()
            }
        )
        .is_err());
    }

    #[test]
    fn strong_pruning_leaves_a_stump() {
        let x: Vec<Vec<f64>> = (0..8).map(|v| vec![v as f64]).collect();
        let labels = [D, D, D, N, D, N, N, N];
        let full = train_dt(&x, &labels, unpruned()).unwrap();
        assert!(full.n_leaves() > 2);
        let pruned = train_dt(
            &x,
            &labels,
            DtParams {
                ccp_alpha: 10.0,
                ..unpruned()
            },
        )
        .unwrap();
        assert_eq!(pruned.nodes.len(), 1);
        assert_eq!(pruned.predict(&[0.0]), (N, 0.5));
    }
}
