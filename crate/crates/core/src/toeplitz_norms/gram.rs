use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::correlation::SyntheticSpectrum;
use crate::error::{Error, Result};

/// Exact `λ_max` of the purely atomic part of `Q_N`.
///
/// With individual atoms `(x_j, μ_j)` the atomic Toeplitz matrix factors as
/// `V D V*` with `V_{kj} = e^{i k x_j}`, so its non-zero eigenvalues are those
/// of the `2s×2s` Hermitian Gram matrix
/// `A_{jl} = √(μ_j μ_l) Σ_{k<N} e^{i k (x_l - x_j)}`. The noise level of
/// `spec` is ignored.
pub fn atomic_gram_max_eigen(spec: &SyntheticSpectrum, n: usize) -> Result<f64> {
    if spec.atoms().is_empty() {
        return Err(Error::NoAtoms);
    }
    if n == 0 {
        return Err(Error::SizeOutOfRange {
            size: 0,
            available: usize::MAX,
        });
    }
    gram_max_eigen(&spec.individual_atoms(), n)
}

/// Same as [`atomic_gram_max_eigen`] for an arbitrary list of individual
/// atoms `(location, mass)`, including formal single-atom cases.
pub fn gram_max_eigen(atoms: &[(f64, f64)], n: usize) -> Result<f64> {
    if atoms.is_empty() {
        return Err(Error::NoAtoms);
    }
    let s = atoms.len();
    let a = DMatrix::from_fn(s, s, |j, l| {
        let (xj, mj) = atoms[j];
        let (xl, ml) = atoms[l];
        Complex64::new((mj * ml).sqrt(), 0.0) * geometric_sum(xl - xj, n)
    });
    let eig = SymmetricEigen::new(a);
    Ok(eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max))
}

/// `Σ_{k=0}^{n-1} e^{i k d} = (e^{i n d} - 1) / (e^{i d} - 1)`.
fn geometric_sum(d: f64, n: usize) -> Complex64 {
    let denom = Complex64::from_polar(1.0, d) - 1.0;
    if denom.norm() < 1e-9 {
        return (0..n)
            .map(|k| Complex64::from_polar(1.0, k as f64 * d))
            .sum();
    }
    (Complex64::from_polar(1.0, n as f64 * d) - 1.0) / denom
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlation::Atom;
    use std::f64::consts::PI;

    #[test]
    fn single_individual_atom() {
        for n in [1, 5, 100] {
            let v = gram_max_eigen(&[(0.7, 0.3)], n).unwrap();
            assert!((v - 0.3 * n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn quarter_turn_pair() {
        let spec = SyntheticSpectrum::new(0.0, vec![Atom::new(PI / 2.0, 1.0)]).unwrap();
        assert!((atomic_gram_max_eigen(&spec, 2).unwrap() - 1.0).abs() < 1e-12);
        // Off-diagonal sums vanish for even N.
        assert!((atomic_gram_max_eigen(&spec, 1000).unwrap() - 500.0).abs() < 1e-9);
    }

    #[test]
    fn no_atoms() {
        assert_eq!(
            atomic_gram_max_eigen(&SyntheticSpectrum::white_noise(), 10),
            Err(Error::NoAtoms)
        );
    }

    #[test]
    fn geometric_sum_matches_loop() {
        for d in [0.0, 1e-12, 0.3, -2.0, 2.0 * PI] {
            let direct: Complex64 = (0..37).map(|k| Complex64::from_polar(1.0, k as f64 * d)).sum();
            assert!((geometric_sum(d, 37) - direct).norm() < 1e-9, "d={d}");
        }
    }
}
