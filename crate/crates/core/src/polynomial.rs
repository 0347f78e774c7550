//! Complex polynomial roots through companion-matrix eigenvalues.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::scalar::Real;

/// Roots of `c[0] + c[1] z + ... + c[n] z^n`, coefficients in ascending order.
///
/// Leading coefficients that vanish relative to the largest one are dropped
/// (the matching roots sit at infinity and are not returned). Trailing zero
/// coefficients contribute exact roots at the origin.
pub fn roots<T: Real>(coeffs: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    let scale = coeffs.iter().fold(T::zero(), |acc, c| acc.max(c.norm()));
    if scale == T::zero() {
        return Err(Error::invalid("zero polynomial has no isolated roots"));
    }
    let negligible = T::epsilon() * scale;
    let top = coeffs
        .iter()
        .rposition(|c| c.norm() > negligible)
        .expect("non-zero coefficient exists");
    let low = coeffs.iter().position(|c| !c.is_zero()).expect("non-zero coefficient exists");

    let mut out = vec![Complex::zero(); low];
    let active = &coeffs[low..=top];
    let degree = active.len() - 1;
    if degree == 0 {
        return Ok(out);
    }
    let lead = active[degree];
    let mut companion = CMatrix::zeros(degree, degree);
    for j in 0..degree {
        companion[(0, j)] = -active[degree - 1 - j] / lead;
    }
    for i in 1..degree {
        companion[(i, i - 1)] = Complex::new(T::one(), T::zero());
    }
    linalg::balance(&mut companion);
    out.extend(linalg::hessenberg_eigenvalues(companion)?);
    Ok(out)
}

/// Evaluates the polynomial (ascending coefficients) by Horner's rule.
pub fn eval<T: Real>(coeffs: &[Complex<T>], z: Complex<T>) -> Complex<T> {
    coeffs.iter().rev().fold(Complex::zero(), |acc, &c| acc * z + c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn sorted(mut v: Vec<Complex<f64>>) -> Vec<Complex<f64>> {
        v.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        v
    }

    fn from_roots(rs: &[Complex<f64>]) -> Vec<Complex<f64>> {
        let mut p = vec![c(1.0, 0.0)];
        for &r in rs {
            let mut next = vec![Complex::zero(); p.len() + 1];
            for (k, &pk) in p.iter().enumerate() {
                next[k + 1] += pk;
                next[k] -= pk * r;
            }
            p = next;
        }
        p
    }

    #[test]
    fn quadratic() {
        // z^2 - 3z + 2
        let r = sorted(roots(&[c(2.0, 0.0), c(-3.0, 0.0), c(1.0, 0.0)]).unwrap());
        assert!((r[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((r[1] - c(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn known_complex_roots() {
        let want = vec![c(0.5, 0.5), c(-1.0, 2.0), c(0.0, -0.3), c(1.5, 0.0), c(-0.2, -0.9)];
        let got = sorted(roots(&from_roots(&want)).unwrap());
        for (g, w) in got.iter().zip(sorted(want)) {
            assert!((g - w).norm() < 1e-10, "{g} vs {w}");
        }
    }

    #[test]
    fn unit_circle_roots_of_high_degree() {
        // z^n - 1
        let n = 60;
        let mut coeffs = vec![Complex::zero(); n + 1];
        coeffs[0] = c(-1.0, 0.0);
        coeffs[n] = c(1.0, 0.0);
        let r = roots(&coeffs).unwrap();
        assert_eq!(r.len(), n);
        for z in r {
            assert!((z.norm() - 1.0).abs() < 1e-10);
            assert!((z.powu(n as u32) - c(1.0, 0.0)).norm() < 1e-8);
        }
    }

    #[test]
    fn zero_and_infinite_roots() {
        // z^2 (z - 1), with a negligible leading term dropped
        let r = roots(&[c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r.iter().filter(|z| z.is_zero()).count(), 2);
        assert!(r.iter().any(|z| (z - c(1.0, 0.0)).norm() < 1e-14));
        assert!(roots::<f64>(&[Complex::zero()]).is_err());
    }

    #[test]
    fn roots_annihilate_polynomial() {
        let p: Vec<_> = (0..25).map(|k| c((k as f64 * 0.7).sin(), (k as f64 * 1.3).cos())).collect();
        for z in roots(&p).unwrap() {
            let scale: f64 = p.iter().enumerate().map(|(k, a)| a.norm() * z.norm().powi(k as i32)).sum();
            assert!(eval(&p, z).norm() < 1e-10 * scale);
        }
    }
}
