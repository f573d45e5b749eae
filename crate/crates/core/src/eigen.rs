//! Spectral radius from the characteristic polynomial.
//!
//! This is a validation oracle and shares nothing with the bound machinery:
//! the characteristic polynomial comes from the Faddeev–LeVerrier recursion
//! and its roots from Aberth–Ehrlich simultaneous iteration. It is meant for
//! desk-scale matrices (`d ≤ 16`).

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::ComplexMatrix;
use crate::wide::frexp;

pub const MAX_ORACLE_DIM: usize = 16;
const RESIDUAL_TOL: f64 = 1e-10;
const MAX_ITERATIONS: usize = 2000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EigenError {
    #[error("eigenvalue oracle supports d <= {MAX_ORACLE_DIM}, got d = {0}")]
    TooLarge(usize),
    #[error("root finder did not converge: relative residual {residual:e} at root {index}")]
    NoConvergence { index: usize, residual: f64 },
}

/// Coefficients `c_0, …, c_d` (ascending, `c_d = 1`) of `det(λI − A)`.
pub fn characteristic_polynomial(a: &ComplexMatrix) -> Vec<Complex64> {
    let d = a.dim();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); d + 1];
    coeffs[d] = Complex64::new(1.0, 0.0);
    // M_1 = I, c_{d-k} = -tr(A M_k)/k, M_{k+1} = A M_k + c_{d-k} I
    let mut m = ComplexMatrix::identity(d);
    for k in 1..=d {
        let am = a.mul_unchecked(&m);
        let c = -am.trace() / k as f64;
        coeffs[d - k] = c;
        if k < d {
            m = am.add(&ComplexMatrix::identity(d).scale(c)).expect("same dimension");
        }
    }
    coeffs
}

/// `ρ(A) = max |λ|` over the roots of the characteristic polynomial.
pub fn eigen_spectral_radius(a: &ComplexMatrix) -> Result<f64, EigenError> {
    let d = a.dim();
    if d > MAX_ORACLE_DIM {
        return Err(EigenError::TooLarge(d));
    }
    let peak = a.max_component();
    if peak == 0.0 {
        return Ok(0.0);
    }
    // power-of-two rescaling keeps the coefficients near unit size and is exact
    let (_, e) = frexp(peak);
    let scaled = a.scale_pow2(-e as i32);
    let roots = polynomial_roots(&characteristic_polynomial(&scaled))?;
    let rho = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(rho * crate::linalg::pow2(e as i32))
}

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All roots of a monic polynomial given by ascending coefficients.
pub(crate) fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>, EigenError> {
    let zero = Complex64::new(0.0, 0.0);
    // exact zero roots are split off; Aberth handles them badly and they are common
    let shift = coeffs.iter().take_while(|c| **c == zero).count();
    let poly = &coeffs[shift..];
    let deg = poly.len() - 1;
    let mut roots = vec![zero; shift];
    if deg == 0 {
        return Ok(roots);
    }
    if deg == 1 {
        roots.push(-poly[0] / poly[1]);
        return Ok(roots);
    }

    // Fujiwara bound for the initial circle
    let lead = poly[deg];
    let radius = (1..=deg)
        .map(|i| {
            let c = (poly[deg - i] / lead).norm();
            if i == deg { (c / 2.0).powf(1.0 / i as f64) } else { c.powf(1.0 / i as f64) }
        })
        .fold(0.0, f64::max)
        * 2.0;
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / deg as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();

    let mut frozen = vec![false; deg];
    for _ in 0..MAX_ITERATIONS {
        let mut converged = true;
        for i in 0..deg {
            if frozen[i] {
                continue;
            }
            let (p, dp) = horner(poly, z[i]);
            // inside the rounding-noise ball of p no further progress is possible
            if p.norm() <= evaluation_noise(poly, z[i]) {
                frozen[i] = true;
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..deg)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                // collided with another estimate: nudge off the collision
                z[i] += Complex64::from_polar(1e-3 * radius.max(f64::MIN_POSITIVE), 0.7 + i as f64);
                converged = false;
                continue;
            }
            z[i] -= step;
            if step.norm() > 4.0 * f64::EPSILON * z[i].norm().max(f64::MIN_POSITIVE) {
                converged = false;
            }
        }
        if converged {
            break;
        }
    }

    for (index, &r) in z.iter().enumerate() {
        let (p, _) = horner(poly, r);
        let scale: f64 = poly
            .iter()
            .enumerate()
            .map(|(k, c)| c.norm() * r.norm().powi(k as i32))
            .sum();
        let residual = p.norm() / scale;
        if residual.is_nan() || residual > RESIDUAL_TOL {
            return Err(EigenError::NoConvergence { index, residual });
        }
    }

    roots.extend(merge_unresolved_clusters(poly, &z));
    Ok(roots)
}

/// Perturbed multiple roots scatter around the true root at a distance
/// comparable to their own Newton corrections. An `m`-fold cluster is
/// replaced by the nearby simple root of `p^{(m-1)}`, found by Newton's
/// method from the centroid. Well-separated simple roots have Newton
/// corrections near rounding level and are left untouched.
fn merge_unresolved_clusters(poly: &[Complex64], z: &[Complex64]) -> Vec<Complex64> {
    let n = z.len();
    // Newton correction, floored by the evaluation error of p itself
    let newton: Vec<f64> = z
        .iter()
        .map(|&r| {
            let (p, dp) = horner(poly, r);
            p.norm().max(evaluation_noise(poly, r)) / dp.norm()
        })
        .collect();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            let reach = 4.0 * n as f64 * newton[i].max(newton[j]);
            if (z[i] - z[j]).norm() <= reach {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let mut out = Vec::with_capacity(n);
    for root in 0..n {
        if find(&mut label, root) != root {
            continue;
        }
        let members: Vec<Complex64> = (0..n)
            .filter(|&i| find(&mut label, i) == root)
            .map(|i| z[i])
            .collect();
        let centroid = members.iter().sum::<Complex64>() / members.len() as f64;
        let value = if members.len() == 1 {
            members[0]
        } else {
            let spread = members.iter().map(|z| (z - centroid).norm()).fold(0.0, f64::max);
            refine_multiple_root(poly, members.len(), centroid, spread)
        };
        out.extend(std::iter::repeat_n(value, members.len()));
    }
    out
}

/// Rounding-error bound for evaluating `p(z)` by Horner's rule.
fn evaluation_noise(poly: &[Complex64], z: Complex64) -> f64 {
    let deg = poly.len() - 1;
    let r = z.norm();
    let magnitude: f64 = poly.iter().rev().fold(0.0, |acc, c| acc * r + c.norm());
    deg as f64 * f64::EPSILON * magnitude
}

fn derivative(poly: &[Complex64]) -> Vec<Complex64> {
    poly.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect()
}

fn refine_multiple_root(poly: &[Complex64], multiplicity: usize, start: Complex64, spread: f64) -> Complex64 {
    let mut q = poly.to_vec();
    for _ in 1..multiplicity {
        q = derivative(&q);
    }
    let mut z = start;
    for _ in 0..50 {
        let (v, dv) = horner(&q, z);
        if v.norm() == 0.0 || dv.norm() == 0.0 {
            break;
        }
        let step = v / dv;
        z -= step;
        if step.norm() <= 2.0 * f64::EPSILON * z.norm() {
            break;
        }
    }
    if z.re.is_finite() && z.im.is_finite() && (z - start).norm() <= 2.0 * spread {
        z
    } else {
        start
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn char_poly_of_rotation() {
        let a = ComplexMatrix::from_real(2, &[0.0, 1.0, -1.0, 0.0]).unwrap();
        assert_eq!(characteristic_polynomial(&a), vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn char_poly_of_3x3() {
        // det(λI - A) for A = [[2,0,0],[1,3,0],[4,5,6]] is (λ-2)(λ-3)(λ-6)
        let a = ComplexMatrix::from_real(3, &[2.0, 0.0, 0.0, 1.0, 3.0, 0.0, 4.0, 5.0, 6.0]).unwrap();
        let p = characteristic_polynomial(&a);
        let expect = [-36.0, 36.0, -11.0, 1.0];
        for (got, want) in p.iter().zip(expect) {
            assert!((got - c(want, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn spectral_radius_examples() {
        assert_eq!(eigen_spectral_radius(&ComplexMatrix::diag(&[2.0, 1.0])).unwrap(), 2.0);
        let nil = ComplexMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(eigen_spectral_radius(&nil).unwrap(), 0.0);
        let rot = ComplexMatrix::from_real(2, &[0.0, 1.0, -1.0, 0.0]).unwrap();
        assert!((eigen_spectral_radius(&rot).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn repeated_eigenvalues_are_accurate() {
        for d in 1..=MAX_ORACLE_DIM {
            let rho = eigen_spectral_radius(&ComplexMatrix::identity(d)).unwrap_or_else(|e| panic!("d={d} {e}"));
            assert!((rho - 1.0).abs() < 1e-12, "I_{d}: {rho}");
        }
        let jordan = ComplexMatrix::from_real(3, &[3.0, 1.0, 0.0, 0.0, 3.0, 1.0, 0.0, 0.0, 3.0]).unwrap();
        let rho = eigen_spectral_radius(&jordan).unwrap();
        assert!((rho - 3.0).abs() < 1e-10, "{rho}");
    }

    #[test]
    fn close_but_distinct_roots_stay_apart() {
        let a = ComplexMatrix::diag(&[1.0, 1.0 + 1e-6, 0.5]);
        let rho = eigen_spectral_radius(&a).unwrap();
        // root separation 1e-6 costs about ε/1e-6 in accuracy, far less than a merge would
        assert!((rho - (1.0 + 1e-6)).abs() < 1e-8, "{rho}");
    }

    #[test]
    fn too_large_rejected() {
        assert_eq!(
            eigen_spectral_radius(&ComplexMatrix::identity(17)).unwrap_err(),
            EigenError::TooLarge(17)
        );
    }
}
