use std::f64::consts::TAU;

use super::{CircleFunction, GridSpec, ToleranceConfig};
use crate::error::{Error, Result};

/// Smallest `|u|` accepted by the phase unwrapper.
pub const WINDING_MARGIN: f64 = 0.5;
/// Maximal distance of the raw winding from the nearest integer.
pub const WINDING_SNAP: f64 = 0.01;

/// Winding number of a continuous scalar symbol by discrete phase unwrapping.
pub fn winding_number(u: &CircleFunction, grid: &GridSpec) -> Result<i64> {
    if !u.is_scalar() {
        return Err(Error::shape(
            "winding_number",
            format!("expected a scalar symbol, got {}x{}", u.rows(), u.cols()),
        ));
    }
    let values: Vec<_> = grid.angles().map(|a| u.eval_angle(a)[(0, 0)]).collect();
    let min_modulus = values
        .iter()
        .map(|z| z.norm())
        .fold(f64::INFINITY, f64::min);
    // NaN moduli must fail as well.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(min_modulus > WINDING_MARGIN) {
        return Err(Error::NotBoundedAwayFromZero { min_modulus });
    }
    let n = values.len();
    let total: f64 = (0..n)
        .map(|j| (values[(j + 1) % n] / values[j]).arg())
        .sum();
    let raw = total / TAU;
    let snapped = raw.round();
    if (raw - snapped).abs() > WINDING_SNAP {
        return Err(Error::NonIntegerWinding { raw });
    }
    Ok(snapped as i64)
}

/// Fredholm index of the Toeplitz operator with unimodular symbol `u`: `−wind u`.
pub fn toeplitz_index(u: &CircleFunction, grid: &GridSpec, tol: &ToleranceConfig) -> Result<i64> {
    if !u.is_scalar() {
        return Err(Error::shape(
            "toeplitz_index",
            format!("expected a scalar symbol, got {}x{}", u.rows(), u.cols()),
        ));
    }
    let max_deviation = grid
        .angles()
        .map(|a| (u.eval_angle(a)[(0, 0)].norm() - 1.0).abs())
        .fold(0.0, f64::max);
    if max_deviation > tol.eq_tol {
        return Err(Error::NotUnimodular { max_deviation });
    }
    Ok(-winding_number(u, grid)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, ONE};
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn grid() -> GridSpec {
        GridSpec::default()
    }

    #[test]
    fn monomial_winding() {
        assert_eq!(
            winding_number(&CircleFunction::monomial(ONE, -3), &grid()).unwrap(),
            -3
        );
    }

    #[test]
    fn constant_winding_is_zero() {
        let u = CircleFunction::monomial(Complex64::cis(std::f64::consts::FRAC_PI_4), 0);
        assert_eq!(winding_number(&u, &grid()).unwrap(), 0);
    }

    #[test]
    fn conjugate_blaschke_winds_negatively() {
        let b = CircleFunction::blaschke(c(0.3, 0.0)).unwrap().conj();
        assert_eq!(winding_number(&b, &grid()).unwrap(), -1);
    }

    #[test]
    fn small_modulus_rejected() {
        let u = CircleFunction::monomial(c(0.25, 0.0), 1);
        assert!(matches!(
            winding_number(&u, &grid()),
            Err(Error::NotBoundedAwayFromZero { .. })
        ));
    }

    #[test]
    fn toeplitz_index_of_monomials() {
        let tol = ToleranceConfig::default();
        assert_eq!(
            toeplitz_index(&CircleFunction::monomial(ONE, -6), &grid(), &tol).unwrap(),
            6
        );
        assert_eq!(
            toeplitz_index(&CircleFunction::monomial(ONE, 2), &grid(), &tol).unwrap(),
            -2
        );
    }

    #[test]
    fn toeplitz_index_of_product_with_blaschke() {
        let tol = ToleranceConfig::default();
        let u = CircleFunction::monomial(ONE, -1)
            .multiply(&CircleFunction::blaschke(c(0.3, 0.0)).unwrap().conj())
            .unwrap();
        assert_eq!(toeplitz_index(&u, &grid(), &tol).unwrap(), 2);
    }

    #[test]
    fn toeplitz_index_needs_unimodular() {
        let tol = ToleranceConfig::default();
        let u = CircleFunction::scalar(&[(0, ONE), (1, c(0.1, 0.0))]);
        assert!(matches!(
            toeplitz_index(&u, &grid(), &tol),
            Err(Error::NotUnimodular { .. })
        ));
    }

    proptest! {
        #[test]
        fn monomial_index_is_minus_power(k in -40i64..40) {
            let tol = ToleranceConfig::default();
            let u = CircleFunction::monomial(ONE, k);
            prop_assert_eq!(toeplitz_index(&u, &grid(), &tol).unwrap(), -k);
        }
    }
}
