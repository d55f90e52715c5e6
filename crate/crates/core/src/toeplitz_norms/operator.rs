use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Implicit symmetric Toeplitz matrix `(b(|j - k|))` of order `n`, applied
/// through circulant embedding.
///
/// The first column is embedded into a circulant of power-of-two size
/// `m >= 2n - 1`, whose eigenvalues are the DFT of that column. One product
/// costs two FFTs of length `m`.
pub struct ToeplitzOperator {
    n: usize,
    eigenvalues: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    buf: Vec<Complex64>,
}

impl ToeplitzOperator {
    /// `column` holds `b(0), …, b(n-1)`.
    pub fn new(column: &[f64]) -> Self {
        let n = column.len();
        let m = (2 * n).saturating_sub(1).max(1).next_power_of_two();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(m);
        let inverse = planner.plan_fft_inverse(m);

        let mut embed = vec![Complex64::new(0.0, 0.0); m];
        embed[0].re = column[0];
        for k in 1..n {
            embed[k].re = column[k];
            embed[m - k].re = column[k];
        }
        forward.process(&mut embed);
        // Symmetric real column: the spectrum is real up to round-off.
        let eigenvalues = embed.iter().map(|z| z.re).collect();

        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Self {
            n,
            eigenvalues,
            forward,
            inverse,
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
            buf: vec![Complex64::new(0.0, 0.0); m],
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Circulant embedding size.
    pub fn embedding_size(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `y = T x`.
    pub fn apply(&mut self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        let m = self.buf.len();
        for (slot, &v) in self.buf.iter_mut().zip(x) {
            *slot = Complex64::new(v, 0.0);
        }
        for slot in &mut self.buf[self.n..] {
            *slot = Complex64::new(0.0, 0.0);
        }
        self.forward
            .process_with_scratch(&mut self.buf, &mut self.scratch);
        for (z, &lam) in self.buf.iter_mut().zip(&self.eigenvalues) {
            *z *= lam;
        }
        self.inverse
            .process_with_scratch(&mut self.buf, &mut self.scratch);
        let scale = 1.0 / m as f64;
        for (out, z) in y.iter_mut().zip(&self.buf) {
            *out = z.re * scale;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_dense_product() {
        let col = [2.0, -0.7, 0.3, 0.0, 0.45, -0.1, 0.05];
        let n = col.len();
        let x: Vec<f64> = (0..n).map(|i| (i as f64 * 1.3).cos() + 0.2).collect();
        let mut op = ToeplitzOperator::new(&col);
        assert!(op.embedding_size() >= 2 * n - 1);
        let mut y = vec![0.0; n];
        op.apply(&x, &mut y);
        for j in 0..n {
            let expect: f64 = (0..n).map(|k| col[j.abs_diff(k)] * x[k]).sum();
            assert!((y[j] - expect).abs() < 1e-13, "row {j}");
        }
    }

    #[test]
    fn order_one() {
        let mut op = ToeplitzOperator::new(&[3.0]);
        let mut y = [0.0];
        op.apply(&[2.0], &mut y);
        assert!((y[0] - 6.0).abs() < 1e-15);
    }
}
