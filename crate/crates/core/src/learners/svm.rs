//! Soft-margin support vector classifier trained by SMO.
//!
//! The dual `min ½ αᵀQα − Σα` subject to `0 ≤ α ≤ C` and `yᵀα = 0` is solved
//! by repeatedly optimizing the maximal violating pair. Inputs are
//! standardized with statistics of the training rows, and the scaler is
//! stored with the model.

use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::{Error, Result};

pub const DEFAULT_C: f64 = 1.0;
pub const DEFAULT_TOL: f64 = 1e-3;
pub const DEFAULT_MAX_ITER: usize = 1_000_000;

const TAU: f64 = 1e-12;
/// Multipliers this close to a bound (relative to C) are set onto it, so
/// rounding cannot decide whether a support vector is free.
const BOUND_SNAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Kernel {
    Linear,
    Rbf { sigma: f64 },
}

impl Kernel {
    pub fn eval(&self, a: &[f64], b: &[f64]) -> f64 {
        match *self {
            Kernel::Linear => a.iter().zip(b).map(|(x, y)| x * y).sum(),
            Kernel::Rbf { sigma } => {
                let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                (-d2 / (2.0 * sigma * sigma)).exp()
            }
        }
    }
}

/// Kernel choice before the data width is known.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum KernelSpec {
    Linear,
    /// `None` picks `σ = √(d / 2)` for `d` features.
    Rbf {
        sigma: Option<f64>,
    },
}

impl KernelSpec {
    pub fn resolve(self, d: usize) -> Kernel {
        match self {
            KernelSpec::Linear => Kernel::Linear,
            KernelSpec::Rbf { sigma } => Kernel::Rbf {
                sigma: sigma.unwrap_or_else(|| (d.max(1) as f64 / 2.0).sqrt()),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    pub kernel: KernelSpec,
    pub c: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl SvmParams {
    pub fn linear() -> Self {
        SvmParams {
            kernel: KernelSpec::Linear,
            c: DEFAULT_C,
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }

    pub fn rbf(sigma: Option<f64>) -> Self {
        SvmParams {
            kernel: KernelSpec::Rbf { sigma },
            ..Self::linear()
        }
    }
}

/// Per-feature `(x - mean) / std` with population std. Constant features
/// have `scale == 0` and always map to 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub scale: Vec<f64>,
}

impl Standardizer {
    pub fn fit(x: &[Vec<f64>]) -> Self {
        let d = x.first().map_or(0, Vec::len);
        let n = x.len().max(1) as f64;
        let mut mean = vec![0.0; d];
        for row in x {
            for (m, v) in mean.iter_mut().zip(row) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut var = vec![0.0; d];
        for row in x {
            for ((s, v), m) in var.iter_mut().zip(row).zip(&mean) {
                *s += (v - m) * (v - m);
            }
        }
        let scale = var.into_iter().map(|s| (s / n).sqrt()).collect();
        Standardizer { mean, scale }
    }

    pub fn transform(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.mean)
            .zip(&self.scale)
            .map(|((v, m), s)| if *s > 0.0 { (v - m) / s } else { 0.0 })
            .collect()
    }
}

/// Raw solver output on a precomputed kernel matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoSolution {
    pub alpha: Vec<f64>,
    /// Decision values are `Σ α_i y_i K(x_i, x) − ρ`.
    pub rho: f64,
    /// Gradient `Qα − 1` at the solution.
    pub gradient: Vec<f64>,
    pub iterations: usize,
}

impl SmoSolution {
    /// Largest violation `m(α) − M(α)` of the KKT conditions.
    pub fn kkt_gap(&self, y: &[f64], c: f64) -> f64 {
        let (up, low) = violation_extremes(&self.alpha, y, &self.gradient, c);
        match (up, low) {
            (Some((_, m)), Some((_, big_m))) => (m - big_m).max(0.0),
            _ => 0.0,
        }
    }
}

type Extreme = Option<(usize, f64)>;

/// `(argmax over I_up, argmin over I_low)` of `−y_t G_t`, lowest index on ties.
fn violation_extremes(alpha: &[f64], y: &[f64], g: &[f64], c: f64) -> (Extreme, Extreme) {
    let mut up: Option<(usize, f64)> = None;
    let mut low: Option<(usize, f64)> = None;
    for t in 0..alpha.len() {
        let v = -y[t] * g[t];
        let in_up = (y[t] > 0.0 && alpha[t] < c) || (y[t] < 0.0 && alpha[t] > 0.0);
        let in_low = (y[t] < 0.0 && alpha[t] < c) || (y[t] > 0.0 && alpha[t] > 0.0);
        if in_up && up.is_none_or(|(_, b)| v > b) {
            up = Some((t, v));
        }
        if in_low && low.is_none_or(|(_, b)| v < b) {
            low = Some((t, v));
        }
    }
    (up, low)
}

/// Solves the dual for kernel matrix `k` (row-major, `n × n`) and labels
/// `y ∈ {−1, +1}`.
pub fn solve_smo(k: &[Vec<f64>], y: &[f64], c: f64, tol: f64, max_iter: usize) -> Result<SmoSolution> {
    let n = y.len();
    if k.len() != n || k.iter().any(|r| r.len() != n) {
        return Err(Error::LengthMismatch {
            left: n,
            right: k.len(),
        });
    }
    if !(c > 0.0) || !(tol > 0.0) {
        return Err(Error::InvalidParams(format!("C = {c}, tol = {tol}")));
    }
    let q = |i: usize, j: usize| y[i] * y[j] * k[i][j];
    let mut alpha = vec![0.0; n];
    let mut g = vec![-1.0; n];
    let mut iterations = 0;
    while let (Some((i, m)), Some((j, big_m))) = violation_extremes(&alpha, y, &g, c) {
        if m - big_m <= tol {
            break;
        }
        if iterations >= max_iter {
            return Err(Error::NonConvergence {
                iterations,
                cap: max_iter,
            });
        }
        iterations += 1;

        let (old_i, old_j) = (alpha[i], alpha[j]);
        if y[i] != y[j] {
            let quad = (q(i, i) + q(j, j) + 2.0 * q(i, j)).max(TAU);
            let delta = (-g[i] - g[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let quad = (q(i, i) + q(j, j) - 2.0 * q(i, j)).max(TAU);
            let delta = (g[i] - g[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        for t in [i, j] {
            if alpha[t] < c * BOUND_SNAP {
                alpha[t] = 0.0;
            } else if alpha[t] > c * (1.0 - BOUND_SNAP) {
                alpha[t] = c;
            }
        }
        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        for t in 0..n {
            g[t] += q(t, i) * di + q(t, j) * dj;
        }
    }

    let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut free_sum, mut n_free) = (0.0, 0usize);
    for t in 0..n {
        let yg = y[t] * g[t];
        if alpha[t] >= c {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if alpha[t] <= 0.0 {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            free_sum += yg;
            n_free += 1;
        }
    }
    let rho = if n_free > 0 {
        free_sum / n_free as f64
    } else {
        (ub + lb) / 2.0
    };
    Ok(SmoSolution {
        alpha,
        rho,
        gradient: g,
        iterations,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub kernel: Kernel,
    pub c: f64,
    pub scaler: Standardizer,
    /// Standardized support vectors.
    pub support_vectors: Vec<Vec<f64>>,
    /// `α_i y_i` for each support vector.
    pub dual_coef: Vec<f64>,
    pub bias: f64,
    pub iterations: usize,
    /// Primal weights in standardized space, linear kernel only.
    pub weights: Option<Vec<f64>>,
}

pub fn train_svm(x: &[Vec<f64>], labels: &[Label], params: SvmParams) -> Result<SvmModel> {
    if x.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: labels.len(),
        });
    }
    if !labels.iter().any(|l| l.is_positive()) || labels.iter().all(|l| l.is_positive()) {
        return Err(Error::SingleClass);
    }
    let d = x[0].len();
    if let Some(row) = x.iter().find(|r| r.len() != d) {
        return Err(Error::LengthMismatch {
            left: d,
            right: row.len(),
        });
    }
    let scaler = Standardizer::fit(x);
    let z: Vec<Vec<f64>> = x.iter().map(|r| scaler.transform(r)).collect();
    let y: Vec<f64> = labels.iter().map(|l| l.sign()).collect();
    let kernel = params.kernel.resolve(d);
    let k: Vec<Vec<f64>> = z
        .iter()
        .map(|a| z.iter().map(|b| kernel.eval(a, b)).collect())
        .collect();
    let sol = solve_smo(&k, &y, params.c, params.tol, params.max_iter)?;

    let mut support_vectors = Vec::new();
    let mut dual_coef = Vec::new();
    for ((zi, &a), &yi) in z.into_iter().zip(&sol.alpha).zip(&y) {
        if a > 0.0 {
            support_vectors.push(zi);
            dual_coef.push(a * yi);
        }
    }
    let weights = (kernel == Kernel::Linear).then(|| {
        let mut w = vec![0.0; d];
        for (sv, &coef) in support_vectors.iter().zip(&dual_coef) {
            for (wj, v) in w.iter_mut().zip(sv) {
                *wj += coef * v;
            }
        }
        w
    });
    Ok(SvmModel {
        kernel,
        c: params.c,
        scaler,
        support_vectors,
        dual_coef,
        bias: -sol.rho,
        iterations: sol.iterations,
        weights,
    })
}

impl SvmModel {
    /// `f(x) = Σ α_i y_i K(x_i, x) + b` on the standardized input.
    pub fn decision(&self, x: &[f64]) -> f64 {
        let z = self.scaler.transform(x);
        match &self.weights {
            Some(w) => w.iter().zip(&z).map(|(a, b)| a * b).sum::<f64>() + self.bias,
            None => {
                self.support_vectors
                    .iter()
                    .zip(&self.dual_coef)
                    .map(|(sv, &c)| c * self.kernel.eval(sv, &z))
                    .sum::<f64>()
                    + self.bias
            }
        }
    }

    /// Positive iff `f(x) > 0`.
    pub fn predict(&self, x: &[f64]) -> (Label, f64) {
        let f = self.decision(x);
        (Label::from_positive(f > 0.0), f)
    }

    /// Linear models only: `(w, b)` in the original feature space.
    pub fn primal(&self) -> Option<(Vec<f64>, f64)> {
        let w = self.weights.as_ref()?;
        let mut b = self.bias;
        let mut out = Vec::with_capacity(w.len());
        for ((wj, m), s) in w.iter().zip(&self.scaler.mean).zip(&self.scaler.scale) {
            if *s > 0.0 {
                out.push(wj / s);
                b -= wj * m / s;
            } else {
                out.push(0.0);
            }
        }
        Some((out, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Label::{Depressed as D, NotDepressed as N};

    #[test]
    fn two_point_max_margin() {
        let x = vec![vec![-1.0, 0.0], vec![1.0, 0.0]];
        let params = SvmParams {
            c: 10.0,
            ..SvmParams::linear()
        };
        let m = train_svm(&x, &[N, D], params).unwrap();
        let (w, b) = m.primal().unwrap();
        assert!((w[0] - 1.0).abs() < 1e-9 && w[1].abs() < 1e-9, "{w:?}");
        assert!(b.abs() < 1e-9);
        let (label, f) = m.predict(&[2.0, 0.0]);
        assert_eq!(label, D);
        assert!((f - 2.0).abs() < 1e-9);
    }

    #[test]
    fn rbf_kernel_values() {
        let k = Kernel::Rbf { sigma: 1.5 };
        assert_eq!(k.eval(&[0.3, -2.0], &[0.3, -2.0]), 1.0);
        // squared distance 2σ² = 4.5
        let e = k.eval(&[0.0, 0.0], &[4.5f64.sqrt(), 0.0]);
        assert!((e - 0.367879).abs() < 1e-6);
        assert_eq!(KernelSpec::Rbf { sigma: None }.resolve(8), Kernel::Rbf { sigma: 2.0 });
    }

    #[test]
    fn dual_constraints_hold() {
        let x: Vec<Vec<f64>> = (0..12).map(|i| vec![i as f64, ((i * 7) % 5) as f64]).collect();
        let labels: Vec<Label> = (0..12).map(|i| Label::from_positive(i % 3 == 0)).collect();
        let y: Vec<f64> = labels.iter().map(|l| l.sign()).collect();
        let z: Vec<Vec<f64>> = {
            let s = Standardizer::fit(&x);
            x.iter().map(|r| s.transform(r)).collect()
        };
        let k: Vec<Vec<f64>> = z
            .iter()
            .map(|a| z.iter().map(|b| Kernel::Linear.eval(a, b)).collect())
            .collect();
        let sol = solve_smo(&k, &y, 1.0, 1e-3, 100_000).unwrap();
        assert!(sol.alpha.iter().all(|&a| (0.0..=1.0).contains(&a)));
        let s: f64 = sol.alpha.iter().zip(&y).map(|(a, y)| a * y).sum();
        assert!(s.abs() < 1e-9);
        assert!(sol.kkt_gap(&y, 1.0) <= 1e-3);
    }

    #[test]
    fn iteration_cap_is_reported() {
        let x: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64]).collect();
        let labels: Vec<Label> = (0..10).map(|i| Label::from_positive(i % 2 == 0)).collect();
        let params = SvmParams {
            max_iter: 1,
            ..SvmParams::linear()
        };
        assert!(matches!(
            train_svm(&x, &labels, params),
            Err(Error::NonConvergence { iterations: 1, cap: 1 })
        ));
    }

    #[test]
    fn constant_features_standardize_to_zero() {
        let s = Standardizer::fit(&[vec![3.0, 1.0], vec![3.0, 3.0]]);
        assert_eq!(s.transform(&[9.0, 2.0]), [0.0, 0.0]);
        assert_eq!(s.transform(&[3.0, 3.0]), [0.0, 1.0]);
    }
}
