use crate::correlation::CorrelationSequence;
use crate::error::{Error, Result};

/// Largest order accepted by [`dense_max_eigen_oracle`].
pub const DENSE_ORACLE_LIMIT: usize = 2048;

/// Largest eigenvalue of the explicitly formed `N×N` Toeplitz matrix
/// `(b(|j - k|))`, by cyclic Jacobi rotations.
///
/// Uses the raw lags (no normalization). This is the O(N³) reference the
/// fast solver is checked against.
pub fn dense_max_eigen_oracle(corr: &CorrelationSequence, n: usize) -> Result<f64> {
    corr.check_size(n)?;
    if n > DENSE_ORACLE_LIMIT {
        return Err(Error::OracleSizeLimit {
            size: n,
            limit: DENSE_ORACLE_LIMIT,
        });
    }
    let b = corr.values();
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|k| b[j.abs_diff(k)]).collect())
        .collect();
    let eig = jacobi_eigenvalues(&mut a);
    Ok(eig.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

/// Eigenvalues of a symmetric matrix; `a` is overwritten.
pub(crate) fn jacobi_eigenvalues(a: &mut [Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let scale: f64 = a.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
    if scale == 0.0 {
        return vec![0.0; n];
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q] * a[p][q])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_spectra() {
        // [[2,1],[1,2]] -> 1, 3
        let mut a = vec![vec![2.0, 1.0], vec![1.0, 2.0]];
        let mut e = jacobi_eigenvalues(&mut a);
        e.sort_by(f64::total_cmp);
        assert!((e[0] - 1.0).abs() < 1e-14 && (e[1] - 3.0).abs() < 1e-14);

        // Tridiagonal 2,-1 of order 5: 2 - 2cos(kπ/6).
        let n: usize = 5;
        let mut a: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match i.abs_diff(j) {
                        0 => 2.0,
                        1 => -1.0,
                        _ => 0.0,
                    })
                    .collect()
            })
            .collect();
        let mut e = jacobi_eigenvalues(&mut a);
        e.sort_by(f64::total_cmp);
        for (k, v) in e.iter().enumerate() {
            let expect = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / 6.0).cos();
            assert!((v - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn guard_and_range() {
        let c = CorrelationSequence::new(vec![1.0; 3000], 1.0).unwrap();
        assert!(matches!(
            dense_max_eigen_oracle(&c, 2049),
            Err(Error::OracleSizeLimit { .. })
        ));
        assert!(matches!(
            dense_max_eigen_oracle(&c, 0),
            Err(Error::SizeOutOfRange { .. })
        ));
    }
}
