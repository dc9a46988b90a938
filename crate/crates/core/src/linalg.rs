//! Small dense helpers shared by the steppers and the checks.

use nalgebra::{DMatrix, SymmetricEigen};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

pub fn norm(a: &[f64]) -> f64 {
    norm_sq(a).sqrt()
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn all_finite(a: &[f64]) -> bool {
    a.iter().all(|v| v.is_finite())
}

/// Operator (spectral) norm of a symmetric matrix given in row-major order.
pub fn sym_op_norm(dim: usize, data: &[f64]) -> f64 {
    let m = DMatrix::from_row_slice(dim, dim, data);
    SymmetricEigen::new(m)
        .eigenvalues
        .iter()
        .fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// A factor `S` with `S Sᵀ = C` for a symmetric positive semi-definite `C`.
///
/// Eigenvalues below zero (rounding) are clamped, so degenerate covariances
/// (zero noise, zero time) are accepted.
pub fn psd_factor(c: &DMatrix<f64>) -> DMatrix<f64> {
    let sym = (c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut v = eig.eigenvectors.clone();
    for (j, w) in eig.eigenvalues.iter().enumerate() {
        let s = w.max(0.0).sqrt();
        v.column_mut(j).scale_mut(s);
    }
    v
}

/// Matrix exponential by scaling and squaring with a Padé approximant.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    a.clone().exp()
}

/// Max absolute row sum.
pub fn inf_norm(a: &DMatrix<f64>) -> f64 {
    a.row_iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn expm_of_rotation_generator() {
        let t = 0.7_f64;
        let a = DMatrix::from_row_slice(2, 2, &[0.0, -t, t, 0.0]);
        let e = expm(&a);
        assert_relative_eq!(e[(0, 0)], t.cos(), epsilon = 1e-14);
        assert_relative_eq!(e[(0, 1)], -t.sin(), epsilon = 1e-14);
        assert_relative_eq!(e[(1, 0)], t.sin(), epsilon = 1e-14);
    }

    #[test]
    fn psd_factor_reconstructs() {
        let c = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let s = psd_factor(&c);
        let back = &s * s.transpose();
        for (x, y) in back.iter().zip(c.iter()) {
            assert_relative_eq!(x, y, epsilon = 1e-14);
        }
        let zero = DMatrix::<f64>::zeros(3, 3);
        assert!(psd_factor(&zero).iter().all(|v| *v == 0.0));
    }

    #[test]
    fn op_norm_picks_largest_magnitude() {
        assert_relative_eq!(sym_op_norm(2, &[1.0, 0.0, 0.0, -3.0]), 3.0, epsilon = 1e-14);
    }
}
