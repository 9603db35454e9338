use nalgebra::{DMatrix, DVector};

use crate::error::{domain, Error, Result};

const SYMMETRY_TOL: f64 = 1e-10;

/// Lower-triangular `L` with `L Lᵀ = v` (Cholesky).
pub fn spd_factor(v: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check_symmetric(v)?;
    nalgebra::Cholesky::new(v.clone()).map(|c| c.l()).ok_or(Error::NotPositiveDefinite)
}

pub(crate) fn check_symmetric(v: &DMatrix<f64>) -> Result<()> {
    if !v.is_square() || v.nrows() == 0 {
        return domain(format!("expected a non-empty square matrix, got {}x{}", v.nrows(), v.ncols()));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return domain("matrix has non-finite entries");
    }
    let scale = v.amax().max(1.0);
    for i in 0..v.nrows() {
        for j in 0..i {
            if (v[(i, j)] - v[(j, i)]).abs() > SYMMETRY_TOL * scale {
                return domain(format!("matrix is not symmetric at ({i}, {j})"));
            }
        }
    }
    Ok(())
}

/// ln |V| from a Cholesky factor.
pub(crate) fn ln_det_from_factor(l: &DMatrix<f64>) -> f64 {
    2.0 * l.diagonal().iter().map(|d| d.ln()).sum::<f64>()
}

/// ‖L⁻¹ d‖² = dᵀ V⁻¹ d without forming V⁻¹.
pub(crate) fn mahalanobis_sq(l: &DMatrix<f64>, d: &DVector<f64>) -> f64 {
    let z = l.solve_lower_triangular(d).expect("Cholesky factor has a positive diagonal");
    z.norm_squared()
}

/// Cholesky of `m`, `None` when `m` is not positive definite.
pub(crate) fn try_cholesky(m: DMatrix<f64>) -> Option<DMatrix<f64>> {
    nalgebra::Cholesky::new(m).map(|c| c.l())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_diagonal() {
        let i = DMatrix::<f64>::identity(3, 3);
        assert_eq!(spd_factor(&i).unwrap(), i);
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![4.0, 9.0]));
        let l = spd_factor(&d).unwrap();
        assert!((l[(0, 0)] - 2.0).abs() < 1e-15 && (l[(1, 1)] - 3.0).abs() < 1e-15);
        assert_eq!(l[(1, 0)], 0.0);
    }

    #[test]
    fn random_spd_reconstructs() {
        // deterministic pseudo-random entries
        let mut s = 12345u64;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        for p in 1..7 {
            let m = DMatrix::from_fn(p, p, |_, _| next());
            let v = &m * m.transpose() + DMatrix::identity(p, p) * 0.1;
            let l = spd_factor(&v).unwrap();
            let err = (&l * l.transpose() - &v).amax();
            assert!(err <= 1e-10, "p={p}: {err}");
        }
    }

    #[test]
    fn rejects_non_spd() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert_eq!(spd_factor(&m), Err(Error::NotPositiveDefinite));
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(matches!(spd_factor(&asym), Err(Error::Domain(_))));
    }

    #[test]
    fn quadratic_form() {
        let v = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let l = spd_factor(&v).unwrap();
        let d = DVector::from_vec(vec![1.0, -2.0]);
        let direct = (d.transpose() * v.clone().try_inverse().unwrap() * &d)[(0, 0)];
        assert!((mahalanobis_sq(&l, &d) - direct).abs() < 1e-12);
        assert!((ln_det_from_factor(&l) - v.determinant().ln()).abs() < 1e-14);
    }
}
