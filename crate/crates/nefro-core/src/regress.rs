//! Regression family for CIR learning: OLS, ridge, and kernel ridge with
//! polynomial feature expansion, plus the R² ("regression model validity",
//! RMV) and residual-standard-deviation diagnostics used to score models.
//!
//! All fits solve the centered ridge problem
//! `argmin_w ||Xc w - yc||² + alpha wᵀw` with an unpenalized bias, so the
//! infinite-alpha limit is the response mean and `alpha = 0` reduces to
//! ordinary least squares.

use crate::exec;
use crate::seed::{mix3, TAG_CV};
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};
use rand::{seq::SliceRandom, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Condition-number guard for the regularized Gram matrix.
pub const CONDITION_LIMIT: f64 = 1e12;

// ---------------------------------------------------------------------------
// Model types
// ---------------------------------------------------------------------------

/// Which estimator produced a [`FittedModel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "OLS")]
    Ols,
    #[serde(rename = "RIDGE")]
    Ridge,
    #[serde(rename = "KERNEL_RBF")]
    KernelRbf,
    #[serde(rename = "KERNEL_POLY")]
    KernelPoly,
}

/// Kernel hyper-parameters retained for prediction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct KernelParams {
    /// RBF width; `None` for polynomial kernels.
    pub gamma: Option<f64>,
}

/// Fit diagnostics: RMV is the R² of the model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelMetrics {
    pub rmv: f64,
    pub rsd: f64,
    pub rmv_cv_mean: f64,
    pub rmv_cv_sd: f64,
}

/// A fitted regression model. For polynomial models `weights` are primal
/// coefficients over the expanded features; for kernel models they are dual
/// coefficients over `training_refs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedModel {
    pub kind: ModelKind,
    pub degree: usize,
    pub weights: Vec<f64>,
    pub bias: f64,
    pub alpha: f64,
    #[serde(default)]
    pub kernel_params: KernelParams,
    #[serde(default)]
    pub training_refs: Vec<Vec<f64>>,
    #[serde(default)]
    pub effective_dof: Option<f64>,
    #[serde(default)]
    pub metrics: Option<ModelMetrics>,
}

impl FittedModel {
    /// Predict the response for a raw (unexpanded) input vector.
    pub fn predict(&self, x: &[f64]) -> f64 {
        match self.kind {
            ModelKind::Ols | ModelKind::Ridge => {
                let feats = expand_poly(x, self.degree).expect("degree validated at fit time");
                feats.iter().zip(&self.weights).map(|(f, w)| f * w).sum::<f64>() + self.bias
            }
            ModelKind::KernelRbf | ModelKind::KernelPoly => {
                let kernel = self.kernel();
                let n = self.training_refs.len() as f64;
                let mut dot = 0.0;
                let mut ksum = 0.0;
                for (c, xi) in self.weights.iter().zip(&self.training_refs) {
                    let k = kernel.eval(x, xi);
                    dot += c * k;
                    ksum += k;
                }
                let c_sum: f64 = self.weights.iter().sum();
                dot - c_sum * ksum / n + self.bias
            }
        }
    }

    pub fn predict_many(&self, xs: &[Vec<f64>]) -> Vec<f64> {
        xs.iter().map(|x| self.predict(x)).collect()
    }

    /// Parameters charged against residual degrees of freedom: coefficients
    /// plus bias for polynomial models, smoother-trace effective dof for
    /// kernel models.
    pub fn param_count(&self) -> f64 {
        match self.kind {
            ModelKind::Ols | ModelKind::Ridge => self.weights.len() as f64 + 1.0,
            ModelKind::KernelRbf | ModelKind::KernelPoly => {
                self.effective_dof.unwrap_or(self.weights.len() as f64) + 1.0
            }
        }
    }

    fn kernel(&self) -> Kernel {
        match self.kind {
            ModelKind::KernelRbf => Kernel::Rbf {
                gamma: self.kernel_params.gamma.expect("RBF model retains gamma"),
            },
            ModelKind::KernelPoly => Kernel::Poly { degree: self.degree },
            _ => unreachable!("kernel() only called for kernel models"),
        }
    }
}

// ---------------------------------------------------------------------------
// Feature expansion
// ---------------------------------------------------------------------------

/// Per-coordinate power expansion: for scalar `x` and degree 3 this is
/// `[x, x², x³]`; for vectors the blocks are `[x.., x².., x³..]`.
pub fn expand_poly(x: &[f64], degree: usize) -> Result<Vec<f64>> {
    if !(1..=3).contains(&degree) {
        return Err(Error::DegreeOutOfRange(degree));
    }
    let mut out = Vec::with_capacity(x.len() * degree);
    for p in 1..=degree as i32 {
        out.extend(x.iter().map(|v| v.powi(p)));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Linear / polynomial ridge
// ---------------------------------------------------------------------------

/// Closed-form ridge fit over degree-expanded features with an unpenalized
/// bias; `alpha = 0` is OLS. `xs` holds raw input vectors.
pub fn fit_linear(xs: &[Vec<f64>], ys: &[f64], degree: usize, alpha: f64) -> Result<FittedModel> {
    if alpha < 0.0 || !alpha.is_finite() {
        return Err(Error::InvalidConfig(format!("alpha {alpha} must be >= 0")));
    }
    let feats: Vec<Vec<f64>> = xs
        .iter()
        .map(|x| expand_poly(x, degree))
        .collect::<Result<_>>()?;
    let n = feats.len();
    if n != ys.len() {
        return Err(Error::InvalidConfig("xs/ys length mismatch".into()));
    }
    let d = feats.first().map(|f| f.len()).unwrap_or(0);
    if n < d + 1 {
        return Err(Error::TooFewPoints { n, required: d + 1 });
    }

    let col_means: Vec<f64> = (0..d)
        .map(|j| feats.iter().map(|f| f[j]).sum::<f64>() / n as f64)
        .collect();
    let y_mean = ys.iter().sum::<f64>() / n as f64;
    let xc = DMatrix::from_fn(n, d, |i, j| feats[i][j] - col_means[j]);
    let yc = DVector::from_fn(n, |i, _| ys[i] - y_mean);

    let svd = xc.svd(true, true);
    let sing = &svd.singular_values;
    let s_max = sing.iter().cloned().fold(0.0_f64, f64::max);
    let s_min = sing.iter().cloned().fold(f64::INFINITY, f64::min);
    let condition = (s_max * s_max + alpha) / (s_min * s_min + alpha);
    if !condition.is_finite() || condition > CONDITION_LIMIT {
        return Err(Error::SingularSystem { condition });
    }

    let u = svd.u.as_ref().expect("svd with u");
    let v_t = svd.v_t.as_ref().expect("svd with v_t");
    let uty = u.transpose() * &yc;
    let scaled = DVector::from_fn(sing.len(), |i, _| {
        let s = sing[i];
        uty[i] * s / (s * s + alpha)
    });
    let w = v_t.transpose() * scaled;

    let bias = y_mean - w.iter().zip(&col_means).map(|(wi, m)| wi * m).sum::<f64>();
    Ok(FittedModel {
        kind: if alpha == 0.0 { ModelKind::Ols } else { ModelKind::Ridge },
        degree,
        weights: w.iter().cloned().collect(),
        bias,
        alpha,
        kernel_params: KernelParams::default(),
        training_refs: Vec::new(),
        effective_dof: None,
        metrics: None,
    })
}

/// Univariate convenience wrapper over [`fit_linear`].
pub fn fit_poly(xs: &[f64], ys: &[f64], degree: usize, alpha: f64) -> Result<FittedModel> {
    let wrapped: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
    fit_linear(&wrapped, ys, degree, alpha)
}

// ---------------------------------------------------------------------------
// Kernel ridge
// ---------------------------------------------------------------------------

/// Kernel function choices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    /// `exp(-gamma ||a - b||²)`.
    Rbf { gamma: f64 },
    /// Inhomogeneous sum `sum_{k=1..degree} (a·b)^k`, whose feature map for
    /// scalar inputs is exactly `[x, x², ..., x^degree]`, making kernel
    /// ridge coincide with explicit polynomial-feature ridge.
    Poly { degree: usize },
}

impl Kernel {
    pub fn eval(&self, a: &[f64], b: &[f64]) -> f64 {
        match *self {
            Kernel::Rbf { gamma } => {
                let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                (-gamma * d2).exp()
            }
            Kernel::Poly { degree } => {
                let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                (1..=degree as i32).map(|k| dot.powi(k)).sum()
            }
        }
    }
}

/// Default RBF width `1 / (2 var(x))` over scalar inputs.
pub fn default_rbf_gamma(xs: &[f64]) -> Result<f64> {
    let n = xs.len();
    if n < 2 {
        return Err(Error::TooFewPoints { n, required: 2 });
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
    if var <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok(1.0 / (2.0 * var))
}

/// Kernel ridge with a double-centered kernel matrix (the bias stays
/// unpenalized, mirroring [`fit_linear`]): solves `(Kc + alpha I) c = yc`
/// and predicts `f(x) = kc(x)·c + bias`.
pub fn fit_kernel_ridge(
    xs: &[Vec<f64>],
    ys: &[f64],
    kernel: Kernel,
    alpha: f64,
) -> Result<FittedModel> {
    let n = xs.len();
    if n < 2 {
        return Err(Error::TooFewPoints { n, required: 2 });
    }
    if n != ys.len() {
        return Err(Error::InvalidConfig("xs/ys length mismatch".into()));
    }
    if !(alpha > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "kernel ridge requires alpha > 0, got {alpha}"
        )));
    }
    if let Kernel::Poly { degree } = kernel {
        if !(1..=3).contains(&degree) {
            return Err(Error::DegreeOutOfRange(degree));
        }
    }

    let k = DMatrix::from_fn(n, n, |i, j| kernel.eval(&xs[i], &xs[j]));
    let row_means: Vec<f64> = (0..n).map(|i| k.row(i).sum() / n as f64).collect();
    let grand = row_means.iter().sum::<f64>() / n as f64;
    let mut kc = DMatrix::from_fn(n, n, |i, j| k[(i, j)] - row_means[i] - row_means[j] + grand);
    for i in 0..n {
        kc[(i, i)] += alpha;
    }

    let y_mean = ys.iter().sum::<f64>() / n as f64;
    let yc = DVector::from_fn(n, |i, _| ys[i] - y_mean);
    let chol = nalgebra::Cholesky::new(kc.clone())
        .ok_or(Error::SingularSystem { condition: f64::INFINITY })?;
    let c = chol.solve(&yc);

    // Effective dof: trace of the smoother Kc (Kc + alpha I)^-1.
    let edof = {
        let mut kc_unreg = kc;
        for i in 0..n {
            kc_unreg[(i, i)] -= alpha;
        }
        let inv_cols = chol.solve(&kc_unreg);
        (0..n).map(|i| inv_cols[(i, i)]).sum::<f64>()
    };

    let c_sum: f64 = c.iter().sum();
    let bias = y_mean - c.iter().zip(&row_means).map(|(ci, r)| ci * r).sum::<f64>()
        + c_sum * grand;
    let (kind, degree, params) = match kernel {
        Kernel::Rbf { gamma } => (ModelKind::KernelRbf, 1, KernelParams { gamma: Some(gamma) }),
        Kernel::Poly { degree } => (ModelKind::KernelPoly, degree, KernelParams::default()),
    };
    Ok(FittedModel {
        kind,
        degree,
        weights: c.iter().cloned().collect(),
        bias,
        alpha,
        kernel_params: params,
        training_refs: xs.to_vec(),
        effective_dof: Some(edof),
        metrics: None,
    })
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

/// Coefficient of determination `1 - SS_res / SS_tot`.
pub fn r_squared(y_true: &[f64], y_pred: &[f64]) -> Result<f64> {
    if y_true.len() != y_pred.len() {
        return Err(Error::InvalidConfig("y_true/y_pred length mismatch".into()));
    }
    let n = y_true.len();
    if n < 2 {
        return Err(Error::TooFewPoints { n, required: 2 });
    }
    let mean = y_true.iter().sum::<f64>() / n as f64;
    let ss_tot: f64 = y_true.iter().map(|y| (y - mean).powi(2)).sum();
    if ss_tot <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    let ss_res: f64 = y_true.iter().zip(y_pred).map(|(t, p)| (t - p).powi(2)).sum();
    Ok(1.0 - ss_res / ss_tot)
}

/// Residual standard deviation `sqrt(SS_res / (N - n_params))`.
pub fn residual_sd(y_true: &[f64], y_pred: &[f64], n_params: f64) -> Result<f64> {
    if y_true.len() != y_pred.len() {
        return Err(Error::InvalidConfig("y_true/y_pred length mismatch".into()));
    }
    let n = y_true.len() as f64;
    if n <= n_params {
        return Err(Error::InsufficientDof {
            n: y_true.len(),
            params: n_params.round() as u32,
        });
    }
    let ss_res: f64 = y_true.iter().zip(y_pred).map(|(t, p)| (t - p).powi(2)).sum();
    Ok((ss_res / (n - n_params)).sqrt())
}

// ---------------------------------------------------------------------------
// Cross-validation
// ---------------------------------------------------------------------------

/// Model family to evaluate under cross-validation (univariate inputs).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CvModelSpec {
    Poly { degree: usize, alpha: f64 },
    KernelRbf { gamma: f64, alpha: f64 },
    KernelPoly { degree: usize, alpha: f64 },
}

fn fit_spec(xs: &[f64], ys: &[f64], spec: CvModelSpec) -> Result<FittedModel> {
    match spec {
        CvModelSpec::Poly { degree, alpha } => fit_poly(xs, ys, degree, alpha),
        CvModelSpec::KernelRbf { gamma, alpha } => {
            let wrapped: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
            fit_kernel_ridge(&wrapped, ys, Kernel::Rbf { gamma }, alpha)
        }
        CvModelSpec::KernelPoly { degree, alpha } => {
            let wrapped: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
            fit_kernel_ridge(&wrapped, ys, Kernel::Poly { degree }, alpha)
        }
    }
}

/// k-fold cross-validation repeated over shuffled runs.
///
/// Each run reshuffles with a run-derived seed, splits into `k` folds, fits
/// on `k-1` and scores held-out R². Returns the mean and sample SD over all
/// `k * runs` fold scores. When `k == n` (leave-one-out) the single-point
/// folds cannot carry an R² each, so a run's held-out predictions are
/// pooled into one score.
pub fn kfold_cv(
    xs: &[f64],
    ys: &[f64],
    spec: CvModelSpec,
    k: usize,
    runs: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    let n = xs.len();
    if n != ys.len() {
        return Err(Error::InvalidConfig("xs/ys length mismatch".into()));
    }
    if k < 2 || runs == 0 {
        return Err(Error::InvalidConfig("need k >= 2 and runs >= 1".into()));
    }
    if n < 2 * k && k != n {
        return Err(Error::TooFewPoints { n, required: 2 * k });
    }

    let per_run: Vec<Result<Vec<f64>>> = exec::map_indexed(runs, |run| {
        let mut idx: Vec<usize> = (0..n).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(mix3(seed, TAG_CV, run as u64));
        idx.shuffle(&mut rng);
        let mut scores = Vec::with_capacity(k);
        let mut pooled_true = Vec::new();
        let mut pooled_pred = Vec::new();
        let base = n / k;
        let rem = n % k;
        let mut start = 0;
        for fold in 0..k {
            let len = base + usize::from(fold < rem);
            if len == 0 {
                continue;
            }
            let hold = &idx[start..start + len];
            let mut tx = Vec::with_capacity(n - len);
            let mut ty = Vec::with_capacity(n - len);
            for (pos, &i) in idx.iter().enumerate() {
                if pos < start || pos >= start + len {
                    tx.push(xs[i]);
                    ty.push(ys[i]);
                }
            }
            start += len;
            let model = fit_spec(&tx, &ty, spec)?;
            let h_true: Vec<f64> = hold.iter().map(|&i| ys[i]).collect();
            let h_pred: Vec<f64> = hold.iter().map(|&i| model.predict(&[xs[i]])).collect();
            if len == 1 {
                pooled_true.extend(h_true);
                pooled_pred.extend(h_pred);
            } else {
                scores.push(r_squared(&h_true, &h_pred)?);
            }
        }
        if !pooled_true.is_empty() {
            scores.push(r_squared(&pooled_true, &pooled_pred)?);
        }
        Ok(scores)
    });

    let mut all = Vec::with_capacity(k * runs);
    for r in per_run {
        all.extend(r?);
    }
    let m = all.len() as f64;
    let mean = all.iter().sum::<f64>() / m;
    let sd = if all.len() > 1 {
        (all.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (m - 1.0)).sqrt()
    } else {
        0.0
    };
    Ok((mean, sd))
}

/// Pick the ridge alpha maximizing mean CV R² over a grid; ties break
/// toward the larger (more regularized) alpha.
pub fn ridge_alpha_search(
    xs: &[f64],
    ys: &[f64],
    degree: usize,
    alpha_grid: &[f64],
    k: usize,
    runs: usize,
    seed: u64,
) -> Result<f64> {
    if alpha_grid.is_empty() {
        return Err(Error::InvalidConfig("empty alpha grid".into()));
    }
    let mut grid = alpha_grid.to_vec();
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite alphas"));
    let mut best = f64::NEG_INFINITY;
    let mut best_alpha = grid[0];
    for &alpha in &grid {
        let (mean, _) = kfold_cv(xs, ys, CvModelSpec::Poly { degree, alpha }, k, runs, seed)?;
        if mean >= best {
            best = mean;
            best_alpha = alpha;
        }
    }
    Ok(best_alpha)
}
