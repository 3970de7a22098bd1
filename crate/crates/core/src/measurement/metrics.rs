use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

fn check_dims<T>(a: &[T], b: &[T]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: b.len(),
            got: a.len(),
        });
    }
    Ok(())
}

/// Normalized squared error up to the global sign (real) or global phase
/// (complex): `min_phi ||xi - e^{i phi} x_hat||^2 / ||xi||^2`.
pub fn nmse<T: Scalar>(x_hat: &[T], xi: &[T]) -> Result<f64> {
    check_dims(x_hat, xi)?;
    let xi_sq = scalar::norm_sqr(xi);
    if xi_sq == 0.0 {
        return Err(Error::ZeroTarget);
    }
    // the optimal rotation aligns <x_hat, xi> with the positive real axis
    let rot = scalar::dot(x_hat, xi).phase();
    let err: f64 = x_hat
        .iter()
        .zip(xi)
        .map(|(&x, &t)| (t - rot * x).abs_sqr())
        .sum();
    Ok(err / xi_sq)
}

/// `|<x, xi>| / (||x|| ||xi||)`; zero when `x = 0`.
pub fn cosine_similarity<T: Scalar>(x: &[T], xi: &[T]) -> Result<f64> {
    check_dims(x, xi)?;
    let nxi = scalar::norm(xi);
    if nxi == 0.0 {
        return Err(Error::ZeroTarget);
    }
    let nx = scalar::norm(x);
    if nx == 0.0 {
        return Ok(0.0);
    }
    Ok(scalar::dot(x, xi).abs() / (nx * nxi))
}

/// Coordinates `(s, r)` of `x` in the frame of the target: `s` is the
/// component along `xi` (after removing the global sign/phase so that
/// `s >= 0`) and `r` the norm of the orthogonal remainder, both in units of
/// `||xi||`.
pub fn aligned_coordinates<T: Scalar>(x: &[T], xi: &[T]) -> Result<(f64, f64)> {
    check_dims(x, xi)?;
    let xi_sq = scalar::norm_sqr(xi);
    if xi_sq == 0.0 {
        return Err(Error::ZeroTarget);
    }
    let proj = scalar::dot(xi, x);
    let s = proj.abs() / xi_sq;
    let coef = proj.scale(1.0 / xi_sq);
    let r_sq: f64 = x
        .iter()
        .zip(xi)
        .map(|(&xv, &t)| (xv - coef * t).abs_sqr())
        .sum();
    Ok((s, r_sq.sqrt() / xi_sq.sqrt()))
}

/// Signed coordinates `(s, r)` for real vectors: `s = <x, xi>/||xi||^2`.
pub fn signed_coordinates(x: &[f64], xi: &[f64]) -> Result<(f64, f64)> {
    check_dims(x, xi)?;
    let xi_sq = scalar::norm_sqr(xi);
    if xi_sq == 0.0 {
        return Err(Error::ZeroTarget);
    }
    let s = scalar::dot(xi, x) / xi_sq;
    let r_sq: f64 = x.iter().zip(xi).map(|(&a, &t)| (a - s * t).powi(2)).sum();
    Ok((s, r_sq.sqrt() / xi_sq.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn nmse_edge_cases() {
        let xi = [1.0, -2.0, 0.5];
        assert_eq!(nmse(&xi, &xi).unwrap(), 0.0);
        let neg: Vec<f64> = xi.iter().map(|v| -v).collect();
        assert_eq!(nmse(&neg, &xi).unwrap(), 0.0);
        assert!((nmse(&[0.0; 3], &xi).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(nmse(&xi, &[0.0; 3]), Err(Error::ZeroTarget)));
        assert!(matches!(nmse(&xi[..2], &xi), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn complex_nmse_ignores_global_phase() {
        let xi = [Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.3)];
        let rot = Complex64::from_polar(1.0, 1.234);
        let x: Vec<Complex64> = xi.iter().map(|v| v * rot).collect();
        assert!(nmse(&x, &xi).unwrap() < 1e-28);
    }

    #[test]
    fn coordinates_of_scaled_target() {
        let xi = [0.0, 3.0, 4.0];
        let x = [1.0, -1.5, -2.0];
        let (s, r) = aligned_coordinates(&x, &xi).unwrap();
        assert!((s - 0.5).abs() < 1e-15);
        assert!((r - 0.2).abs() < 1e-15);
        let (s, _) = signed_coordinates(&x, &xi).unwrap();
        assert!((s + 0.5).abs() < 1e-15);
    }
}
