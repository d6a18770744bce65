use nalgebra::DMatrix;

use super::{CMatrix, EvalError};

/// Condition number of a Hermitian positive semi-definite matrix, `inf` when singular.
pub fn hermitian_condition(gram: &CMatrix) -> f64 {
    if gram.nrows() == 0 {
        return 1.0;
    }
    let eig = gram.clone().symmetric_eigenvalues();
    let max = eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    if min <= 0.0 || !min.is_finite() || !max.is_finite() {
        f64::INFINITY
    } else {
        max / min
    }
}

fn invert_gram(gram: CMatrix, cond_cap: f64) -> Result<CMatrix, EvalError> {
    let cond = hermitian_condition(&gram);
    if cond.is_nan() || cond > cond_cap {
        return Err(EvalError::SingularChannel { cond });
    }
    gram.cholesky()
        .map(|c| c.inverse())
        .ok_or(EvalError::SingularChannel { cond })
}

/// Normalized ZF precoder `W = F / ||F||_F` with `F = H^H (H H^H)^-1`.
///
/// `h_d` is `N_d x M_t`; the result is `M_t x N_d`.
pub fn zf_precoder(h_d: &CMatrix, cond_cap: f64) -> Result<CMatrix, EvalError> {
    let (n_d, m_t) = h_d.shape();
    if n_d == 0 {
        return Ok(DMatrix::zeros(m_t, 0));
    }
    if n_d > m_t {
        return Err(EvalError::SingularChannel {
            cond: f64::INFINITY,
        });
    }
    let h_adj = h_d.adjoint();
    let inv = invert_gram(h_d * &h_adj, cond_cap)?;
    let f = h_adj * inv;
    let norm = f.norm();
    Ok(f.unscale(norm))
}

/// ZF detector `P = (H^H H)^-1 H^H`.
///
/// `h_u` is `M_r x N_u`; the result is `N_u x M_r`.
pub fn zf_detector(h_u: &CMatrix, cond_cap: f64) -> Result<CMatrix, EvalError> {
    let (m_r, n_u) = h_u.shape();
    if n_u == 0 {
        return Ok(DMatrix::zeros(0, m_r));
    }
    if n_u > m_r {
        return Err(EvalError::SingularChannel {
            cond: f64::INFINITY,
        });
    }
    let h_adj = h_u.adjoint();
    let inv = invert_gram(&h_adj * h_u, cond_cap)?;
    Ok(inv * h_adj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::config::DEFAULT_COND_CAP;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    const CAP: f64 = DEFAULT_COND_CAP;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(rows: usize, cols: usize, seed: u64) -> CMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DMatrix::from_fn(rows, cols, |_, _| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            c(re, im)
        })
    }

    /// Gauss-Jordan inverse with partial pivoting, independent of nalgebra's decompositions.
    fn gauss_jordan_inverse(a: &CMatrix) -> CMatrix {
        let n = a.nrows();
        let mut aug: Vec<Vec<Complex64>> = (0..n)
            .map(|i| {
                let mut row: Vec<Complex64> = (0..n).map(|j| a[(i, j)]).collect();
                row.extend((0..n).map(|j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) }));
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| aug[x][col].norm().partial_cmp(&aug[y][col].norm()).unwrap())
                .unwrap();
            aug.swap(col, pivot);
            let p = aug[col][col];
            for v in aug[col].iter_mut() {
                *v /= p;
            }
            for row in 0..n {
                if row != col {
                    let factor = aug[row][col];
                    let pivot_row = aug[col].clone();
                    for (v, pv) in aug[row].iter_mut().zip(pivot_row) {
                        *v -= factor * pv;
                    }
                }
            }
        }
        DMatrix::from_fn(n, n, |i, j| aug[i][n + j])
    }

    #[test]
    fn identity_precoder() {
        let h = CMatrix::identity(2, 2);
        let w = zf_precoder(&h, CAP).unwrap();
        let expected = CMatrix::identity(2, 2) * c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        assert!((w.clone() - expected).norm() < 1e-12);
        let hw = &h * &w;
        for k in 0..2 {
            assert!((hw[(k, k)].norm_sqr() - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn random_precoder_matches_gauss_jordan_pseudo_inverse() {
        let h = random_matrix(3, 5, 42);
        let w = zf_precoder(&h, CAP).unwrap();
        let h_adj = h.adjoint();
        let f = &h_adj * gauss_jordan_inverse(&(&h * &h_adj));
        let f_norm = f.norm();
        assert!((w.clone() - f / c(f_norm, 0.0)).norm() < 1e-10);
        let hw = &h * &w;
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    assert!((hw[(i, i)] - c(1.0 / f_norm, 0.0)).norm() < 1e-9 / f_norm);
                } else {
                    assert!(hw[(i, j)].norm() < 1e-9 / f_norm);
                }
            }
        }
        assert!((w.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unitary_square_precoder() {
        // 2x2 unitary: rows orthonormal.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = DMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(0.0, s), c(0.0, s), c(s, 0.0)]);
        let w = zf_precoder(&h, CAP).unwrap();
        let expected = h.adjoint() / c(2f64.sqrt(), 0.0);
        assert!((w - expected).norm() < 1e-12);
    }

    #[test]
    fn identity_detector() {
        let h = CMatrix::identity(3, 3);
        let p = zf_detector(&h, CAP).unwrap();
        assert!((p - CMatrix::identity(3, 3)).norm() < 1e-12);
    }

    #[test]
    fn random_detector_inverts_channel() {
        let h = random_matrix(6, 3, 9);
        let p = zf_detector(&h, CAP).unwrap();
        let residual = &p * &h - CMatrix::identity(3, 3);
        assert!(residual.camax() < 1e-9);
    }

    #[test]
    fn duplicated_column_is_singular() {
        let mut h = random_matrix(4, 2, 5);
        let col = h.column(0).into_owned();
        h.set_column(1, &col);
        assert!(matches!(
            zf_detector(&h, CAP),
            Err(EvalError::SingularChannel { .. })
        ));
        assert!(matches!(
            zf_precoder(&h.transpose(), CAP),
            Err(EvalError::SingularChannel { .. })
        ));
    }

    #[test]
    fn empty_selections_give_empty_matrices() {
        let w = zf_precoder(&DMatrix::zeros(0, 3), CAP).unwrap();
        assert_eq!(w.shape(), (3, 0));
        let p = zf_detector(&DMatrix::zeros(2, 0), CAP).unwrap();
        assert_eq!(p.shape(), (0, 2));
    }
}
