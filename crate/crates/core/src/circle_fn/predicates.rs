use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use super::{CircleFunction, GridSpec, ToleranceConfig};
use crate::error::{Error, Result};
use crate::linalg::{isometry_deviation, spectral_norm, ZERO};
use crate::poly::Poly;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitaryCheck {
    pub ok: bool,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InnerFailure {
    NotAnalytic,
    NotIsometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InnerCheck {
    pub ok: bool,
    pub failure: Option<InnerFailure>,
    pub max_negative_coefficient: f64,
    pub max_isometry_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoOuterCheck {
    pub ok: bool,
    /// A point of the closed disk where every tested polynomial vanishes.
    pub common_root: Option<[f64; 2]>,
    /// Number of polynomials (entries or maximal minors) examined.
    pub polynomials: usize,
}

/// Scalar Laurent polynomial as a sparse power → coefficient map.
pub(crate) type ScalarTerms = BTreeMap<i64, Complex64>;

impl CircleFunction {
    /// Checks `f(ζ)* f(ζ) = I` on the grid.
    pub fn is_unitary_valued(
        &self,
        grid: &GridSpec,
        tol: &ToleranceConfig,
    ) -> Result<UnitaryCheck> {
        if !self.is_square() {
            return Err(Error::shape(
                "is_unitary_valued",
                format!("{}x{} is not square", self.rows(), self.cols()),
            ));
        }
        let max_deviation = grid
            .angles()
            .map(|a| isometry_deviation(&self.eval_angle(a)))
            .fold(0.0, f64::max);
        Ok(UnitaryCheck {
            ok: max_deviation <= tol.eq_tol,
            max_deviation,
        })
    }

    /// Inner: analytic and isometric almost everywhere on the circle.
    pub fn is_inner(&self, grid: &GridSpec, tol: &ToleranceConfig) -> Result<InnerCheck> {
        let max_negative_coefficient = self.max_negative_coefficient(grid, tol)?;
        let max_isometry_deviation = if self.rows() >= self.cols() {
            grid.angles()
                .map(|a| isometry_deviation(&self.eval_angle(a)))
                .fold(0.0, f64::max)
        } else {
            f64::INFINITY
        };
        let failure = if max_negative_coefficient > tol.coeff_tol {
            Some(InnerFailure::NotAnalytic)
        } else if max_isometry_deviation > tol.eq_tol {
            Some(InnerFailure::NotIsometric)
        } else {
            None
        };
        Ok(InnerCheck {
            ok: failure.is_none(),
            failure,
            max_negative_coefficient,
            max_isometry_deviation,
        })
    }

    /// Co-outer test for a polynomial column (`n × 1`) or a thematic complement
    /// (`n × (n−1)`): the entries, respectively the maximal minors of the
    /// transpose, must have no common zero in the closed unit disk.
    pub fn is_co_outer_polynomial(&self, tol: &ToleranceConfig) -> Result<CoOuterCheck> {
        if !self.is_laurent() {
            return Err(Error::UnsupportedRepresentation(
                "co-outer test needs a matrix polynomial, got a rational symbol".into(),
            ));
        }
        if let Some((k, _)) = self
            .terms()
            .iter()
            .find(|(k, m)| **k < 0 && spectral_norm(m) > tol.coeff_tol)
        {
            return Err(Error::UnsupportedRepresentation(format!(
                "co-outer test needs nonnegative powers, found z^{k}"
            )));
        }
        let polys: Vec<Poly> = if self.cols() == 1 {
            (0..self.rows())
                .map(|i| to_poly(&self.entry_terms(i, 0)))
                .collect()
        } else if self.cols() + 1 == self.rows() {
            let cols: Vec<usize> = (0..self.cols()).collect();
            (0..self.rows())
                .map(|skip| {
                    let rows: Vec<usize> = (0..self.rows()).filter(|&i| i != skip).collect();
                    to_poly(&self.minor(&rows, &cols))
                })
                .collect()
        } else {
            return Err(Error::UnsupportedRepresentation(format!(
                "co-outer test covers n x 1 and n x (n-1) shapes, got {}x{}",
                self.rows(),
                self.cols()
            )));
        };
        let polys: Vec<Poly> = polys
            .into_iter()
            .map(|p| p.trimmed(tol.coeff_tol))
            .filter(|p| !p.is_zero())
            .collect();
        let count = polys.len();
        let Some(pivot) = polys.iter().min_by_key(|p| p.degree()) else {
            return Ok(CoOuterCheck {
                ok: false,
                common_root: Some([0.0, 0.0]),
                polynomials: 0,
            });
        };
        for root in pivot.roots() {
            if root.norm() > 1.0 + tol.eq_tol {
                continue;
            }
            let shared = polys
                .iter()
                .all(|p| p.eval(root).norm() <= tol.sv_tol * p.magnitude_at(root).max(1.0));
            if shared {
                return Ok(CoOuterCheck {
                    ok: false,
                    common_root: Some([root.re, root.im]),
                    polynomials: count,
                });
            }
        }
        Ok(CoOuterCheck {
            ok: true,
            common_root: None,
            polynomials: count,
        })
    }

    /// Entry `(i, j)` as a sparse scalar Laurent polynomial (numerator only).
    pub(crate) fn entry_terms(&self, i: usize, j: usize) -> ScalarTerms {
        self.terms()
            .iter()
            .map(|(k, m)| (*k, m[(i, j)]))
            .filter(|(_, c)| *c != ZERO)
            .collect()
    }

    /// Determinant of the numerator submatrix on `rows × cols` (Laplace expansion).
    pub(crate) fn minor(&self, rows: &[usize], cols: &[usize]) -> ScalarTerms {
        debug_assert_eq!(rows.len(), cols.len());
        if rows.len() == 1 {
            return self.entry_terms(rows[0], cols[0]);
        }
        let mut acc = ScalarTerms::new();
        for (pos, &c) in cols.iter().enumerate() {
            let entry = self.entry_terms(rows[0], c);
            if entry.is_empty() {
                continue;
            }
            let rest_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let sub = self.minor(&rows[1..], &rest_cols);
            let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
            for (ka, a) in &entry {
                for (kb, b) in &sub {
                    *acc.entry(ka + kb).or_insert(ZERO) += a * b * sign;
                }
            }
        }
        acc.retain(|_, c| *c != ZERO);
        acc
    }
}

fn to_poly(terms: &ScalarTerms) -> Poly {
    let top = terms.keys().next_back().copied().unwrap_or(0).max(0);
    Poly::new(
        (0..=top)
            .map(|k| terms.get(&k).copied().unwrap_or(ZERO))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, CMatrix, ONE};
    use std::f64::consts::FRAC_1_SQRT_2 as S;

    fn grid() -> GridSpec {
        GridSpec::default()
    }

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn column(entries: &[CircleFunction]) -> CircleFunction {
        CircleFunction::from_entries(entries.len(), 1, entries).unwrap()
    }

    #[test]
    fn rotation_right_factor_is_unitary() {
        // V* = [[z̄/√2, 1/√2], [−1/√2, z/√2]]
        let v_star = CircleFunction::from_entries(
            2,
            2,
            &[
                CircleFunction::monomial(c(S, 0.0), -1),
                CircleFunction::monomial(c(S, 0.0), 0),
                CircleFunction::monomial(c(-S, 0.0), 0),
                CircleFunction::monomial(c(S, 0.0), 1),
            ],
        )
        .unwrap();
        let check = v_star.is_unitary_valued(&grid(), &tol()).unwrap();
        assert!(check.ok, "{check:?}");
    }

    #[test]
    fn unimodular_diagonal_is_unitary() {
        let f = CircleFunction::monomial(ONE, -2).direct_sum(&CircleFunction::monomial(ONE, -6));
        assert!(f.is_unitary_valued(&grid(), &tol()).unwrap().ok);
    }

    #[test]
    fn contraction_is_not_unitary() {
        let f = CircleFunction::constant(CMatrix::from_row_slice(
            2,
            2,
            &[c(0.5, 0.0), ZERO, ZERO, ONE],
        ));
        let check = f.is_unitary_valued(&grid(), &tol()).unwrap();
        assert!(!check.ok);
        assert!((check.max_deviation - 0.75).abs() < 1e-14);
    }

    #[test]
    fn unitary_check_needs_square() {
        let f = CircleFunction::zeros(2, 1);
        assert!(matches!(
            f.is_unitary_valued(&grid(), &tol()),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn rotation_column_is_inner() {
        let v = column(&[
            CircleFunction::monomial(c(S, 0.0), 1),
            CircleFunction::monomial(c(S, 0.0), 0),
        ]);
        let check = v.is_inner(&grid(), &tol()).unwrap();
        assert!(check.ok, "{check:?}");
    }

    #[test]
    fn conjugate_shift_is_not_analytic() {
        let f = CircleFunction::laurent(2, 2, vec![(-1, CMatrix::identity(2, 2))]).unwrap();
        let check = f.is_inner(&grid(), &tol()).unwrap();
        assert_eq!(check.failure, Some(InnerFailure::NotAnalytic));
    }

    #[test]
    fn constant_unit_column_is_inner() {
        let v = CircleFunction::constant(CMatrix::from_column_slice(2, 1, &[ONE, ZERO]));
        assert!(v.is_inner(&grid(), &tol()).unwrap().ok);
    }

    #[test]
    fn half_column_is_not_isometric() {
        let v = CircleFunction::constant(CMatrix::from_column_slice(2, 1, &[c(0.5, 0.0), ZERO]));
        let check = v.is_inner(&grid(), &tol()).unwrap();
        assert_eq!(check.failure, Some(InnerFailure::NotIsometric));
    }

    #[test]
    fn blaschke_is_inner() {
        let b = CircleFunction::blaschke(c(0.3, -0.4)).unwrap();
        assert!(b.is_inner(&grid(), &tol()).unwrap().ok);
        let nb = b.conj();
        assert_eq!(
            nb.is_inner(&grid(), &tol()).unwrap().failure,
            Some(InnerFailure::NotAnalytic)
        );
    }

    #[test]
    fn column_with_constant_entry_is_co_outer() {
        let v = column(&[
            CircleFunction::monomial(c(S, 0.0), 1),
            CircleFunction::monomial(c(S, 0.0), 0),
        ]);
        assert!(v.is_co_outer_polynomial(&tol()).unwrap().ok);
    }

    #[test]
    fn column_with_common_zero_is_not_co_outer() {
        let v = column(&[
            CircleFunction::monomial(ONE, 1),
            CircleFunction::monomial(ONE, 2),
        ]);
        let check = v.is_co_outer_polynomial(&tol()).unwrap();
        assert!(!check.ok);
        assert_eq!(check.common_root, Some([0.0, 0.0]));
    }

    #[test]
    fn common_zero_outside_disk_is_allowed() {
        // (z − 2, z² − 4): shared zero at 2 lies outside the closed disk
        let v = column(&[
            CircleFunction::scalar(&[(0, c(-2.0, 0.0)), (1, ONE)]),
            CircleFunction::scalar(&[(0, c(-4.0, 0.0)), (2, ONE)]),
        ]);
        assert!(v.is_co_outer_polynomial(&tol()).unwrap().ok);
    }

    #[test]
    fn common_zero_inside_disk_detected() {
        // (z − 0.5)·(1, z + 3)
        let v = column(&[
            CircleFunction::scalar(&[(0, c(-0.5, 0.0)), (1, ONE)]),
            CircleFunction::scalar(&[(0, c(-1.5, 0.0)), (1, c(2.5, 0.0)), (2, ONE)]),
        ]);
        let check = v.is_co_outer_polynomial(&tol()).unwrap();
        assert!(!check.ok);
        let [re, im] = check.common_root.unwrap();
        assert!((re - 0.5).abs() < 1e-10 && im.abs() < 1e-10);
    }

    #[test]
    fn rotation_complement_is_co_outer() {
        let theta = column(&[
            CircleFunction::monomial(c(-S, 0.0), 0),
            CircleFunction::monomial(c(S, 0.0), 1),
        ]);
        assert!(theta.is_co_outer_polynomial(&tol()).unwrap().ok);
    }

    #[test]
    fn complement_minors_detect_common_zero() {
        // Θ = [[z, 0], [0, z], [0, 0]]: every 2x2 minor of Θᵗ is a multiple of z
        let mut c0 = CMatrix::zeros(3, 2);
        c0[(0, 0)] = ONE;
        c0[(1, 1)] = ONE;
        let theta = CircleFunction::laurent(3, 2, vec![(1, c0)]).unwrap();
        assert!(!theta.is_co_outer_polynomial(&tol()).unwrap().ok);
        // [[1, 0], [0, 1], [0, 0]] has a unit minor
        let id = CircleFunction::constant(CMatrix::identity(3, 2));
        assert!(id.is_co_outer_polynomial(&tol()).unwrap().ok);
    }

    #[test]
    fn co_outer_rejects_laurent_and_rational() {
        let f = column(&[
            CircleFunction::monomial(ONE, -1),
            CircleFunction::monomial(ONE, 0),
        ]);
        assert!(matches!(
            f.is_co_outer_polynomial(&tol()),
            Err(Error::UnsupportedRepresentation(_))
        ));
        let b = CircleFunction::blaschke(c(0.2, 0.0)).unwrap();
        assert!(matches!(
            b.is_co_outer_polynomial(&tol()),
            Err(Error::UnsupportedRepresentation(_))
        ));
    }
}
