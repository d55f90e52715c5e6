//! Largest eigenvalue of `Q_N` by Lanczos iteration with full
//! reorthogonalization on the FFT-backed Toeplitz operator.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::operator::ToeplitzOperator;
use crate::correlation::CorrelationSequence;
use crate::error::{Error, Result};

/// Controls for [`max_eigen_ratio`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSolveOptions {
    /// Relative residual `‖Q v − λ v‖ / λ` required for convergence.
    pub rel_tolerance: f64,
    /// Iteration cap; `None` means `10·N + 200`.
    pub max_iterations: Option<usize>,
    /// Seed for the start vector.
    pub seed: u64,
}

impl Default for EigenSolveOptions {
    fn default() -> Self {
        Self {
            rel_tolerance: 1e-8,
            max_iterations: None,
            seed: 0,
        }
    }
}

impl EigenSolveOptions {
    pub fn with_tolerance(rel_tolerance: f64) -> Self {
        Self {
            rel_tolerance,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tolerance > 0.0 && self.rel_tolerance < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "rel_tolerance must lie in (0, 1), got {}",
                self.rel_tolerance
            )));
        }
        if self.max_iterations == Some(0) {
            return Err(Error::InvalidParameter("max_iterations must be > 0".into()));
        }
        Ok(())
    }

    fn iteration_cap(&self, n: usize) -> usize {
        self.max_iterations.unwrap_or(10 * n + 200)
    }
}

/// `λ_max(Q_N) / N` for the normalized correlation `b(k)/b(0)`.
pub fn max_eigen_ratio(
    corr: &CorrelationSequence,
    n: usize,
    opts: &EigenSolveOptions,
) -> Result<f64> {
    opts.validate()?;
    let column = corr.normalized_prefix(n)?;
    let lambda = lanczos_max_eigen(&column, opts)?;
    Ok(lambda / n as f64)
}

/// Largest eigenvalue of the symmetric Toeplitz matrix with first column
/// `column`.
pub(crate) fn lanczos_max_eigen(column: &[f64], opts: &EigenSolveOptions) -> Result<f64> {
    let n = column.len();
    if n == 1 {
        return Ok(column[0]);
    }
    let mut op = ToeplitzOperator::new(column);
    let cap = opts.iteration_cap(n);
    // A full Krylov basis spans R^N, so more than N steps never helps.
    let max_steps = cap.min(n);

    let mut rng = ChaCha20Rng::seed_from_u64(opts.seed);
    let mut q: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
    let norm = l2(&q);
    q.iter_mut().for_each(|v| *v /= norm);

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(max_steps.min(256));
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let mut last_residual = f64::INFINITY;

    for step in 0..max_steps {
        op.apply(&q, &mut w);
        let a = dot(&w, &q);
        alpha.push(a);
        basis.push(std::mem::take(&mut q));
        // w -= a q_j + b_{j-1} q_{j-1}, then two passes of classical
        // Gram–Schmidt against the whole basis.
        for _ in 0..2 {
            for v in &basis {
                let c = dot(&w, v);
                axpy(-c, v, &mut w);
            }
        }
        let b = l2(&w);

        let k = alpha.len();
        let check = k <= 50 || k % (k / 10).max(1) == 0 || step + 1 == max_steps;
        let breakdown = b <= 1e-13 * alpha.iter().map(|x| x.abs()).fold(1e-300, f64::max);
        if check || breakdown {
            let (theta, y_last, y) = top_ritz(&alpha, &beta);
            let residual = if breakdown { 0.0 } else { b * y_last.abs() };
            last_residual = residual / theta.abs().max(f64::MIN_POSITIVE);
            if last_residual <= opts.rel_tolerance || breakdown || k == n {
                return confirm(&mut op, &basis, &y, theta, opts, k);
            }
        }
        beta.push(b);
        q = w.iter().map(|v| v / b).collect();
    }
    Err(Error::NotConverged {
        iterations: alpha.len(),
        residual: last_residual,
    })
}

/// Explicit residual check of the Ritz pair before reporting it.
fn confirm(
    op: &mut ToeplitzOperator,
    basis: &[Vec<f64>],
    y: &[f64],
    theta: f64,
    opts: &EigenSolveOptions,
    iterations: usize,
) -> Result<f64> {
    let n = op.order();
    let mut v = vec![0.0; n];
    for (coef, qj) in y.iter().zip(basis) {
        axpy(*coef, qj, &mut v);
    }
    let norm = l2(&v);
    v.iter_mut().for_each(|x| *x /= norm);
    let mut av = vec![0.0; n];
    op.apply(&v, &mut av);
    let r: f64 = av
        .iter()
        .zip(&v)
        .map(|(a, x)| (a - theta * x).powi(2))
        .sum::<f64>()
        .sqrt();
    let rel = r / theta.abs().max(f64::MIN_POSITIVE);
    // Orthogonalization error can leave the explicit residual slightly above
    // the recurrence estimate; allow a small multiple.
    if rel <= 10.0 * opts.rel_tolerance {
        Ok(theta)
    } else {
        Err(Error::NotConverged {
            iterations,
            residual: rel,
        })
    }
}

/// Largest Ritz value of the tridiagonal `T_k`, the last component of its
/// eigenvector and the eigenvector itself.
fn top_ritz(alpha: &[f64], beta: &[f64]) -> (f64, f64, Vec<f64>) {
    let k = alpha.len();
    let t = DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            alpha[i]
        } else if i.abs_diff(j) == 1 {
            beta[i.min(j)]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let (idx, &theta) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty tridiagonal");
    let y: Vec<f64> = eig.eigenvectors.column(idx).iter().copied().collect();
    (theta, y[k - 1], y)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn l2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(c: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += c * xi;
    }
}
