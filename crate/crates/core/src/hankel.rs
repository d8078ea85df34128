//! Truncated block Hankel and Toeplitz operators built from Fourier coefficients.
//!
//! The Hankel operator of an `m × n` symbol maps `f ∈ H²(ℂⁿ)` to `P₋(Φf)`. In the
//! standard bases its matrix has block `(i, j) = Φ̂(−i−j−1)`. For a Laurent symbol
//! with largest negative power `d`, every block with `i ≥ d` or `j ≥ d` vanishes,
//! so the `d × d` block truncation carries the whole nonzero spectrum and its
//! norm, singular values and maximizing-space dimensions are exact.

use rayon::prelude::*;
use serde::Serialize;

use crate::circle_fn::{CircleFunction, GridSpec, ToleranceConfig};
use crate::error::{Error, Result};
use crate::linalg::{singular_values as svd_values, CMatrix};

/// Guard band multiplier around the `sv_tol` counting band.
pub const GUARD_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct HankelTruncation {
    /// Number of block rows and columns.
    pub order: usize,
    pub block_rows: usize,
    pub block_cols: usize,
    pub matrix: CMatrix,
    /// Set when the truncation contains every nonzero block of the operator.
    pub exact: bool,
}

impl HankelTruncation {
    pub fn block(&self, i: usize, j: usize) -> CMatrix {
        self.matrix
            .view(
                (i * self.block_rows, j * self.block_cols),
                (self.block_rows, self.block_cols),
            )
            .into_owned()
    }

    pub fn singular_values(&self) -> Vec<f64> {
        svd_values(&self.matrix)
    }

    pub fn norm(&self) -> f64 {
        self.singular_values().first().copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzTruncation {
    pub order: usize,
    pub matrix: CMatrix,
}

/// Norm of a Hankel truncation; a lower bound for the operator norm unless `exact`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HankelNorm {
    pub value: f64,
    pub order: usize,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimEntry {
    pub kappa: usize,
    pub dim: usize,
    /// Smallest `|s − t|/t` over the singular values not counted; `None` when every
    /// singular value was counted.
    pub gap: Option<f64>,
}

/// `κ ↦ D(κ)`: dimension of the maximizing space of `H_{z^κ Φ}` at level `t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaximizingDimTable {
    pub level: f64,
    pub entries: Vec<DimEntry>,
}

impl MaximizingDimTable {
    pub fn dims(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.dim).collect()
    }

    /// `D(κ)`; past the end of the table the value is the terminal entry when that is 0.
    pub fn dim(&self, kappa: usize) -> Option<usize> {
        match self.entries.get(kappa) {
            Some(e) => Some(e.dim),
            None => match self.entries.last() {
                Some(last) if last.dim == 0 => Some(0),
                _ => None,
            },
        }
    }

    /// Structural invariants: nonincreasing, convex (first differences
    /// nonincreasing), and zero after the first zero.
    pub fn invariant_violations(&self) -> Vec<String> {
        let d = self.dims();
        let mut out = Vec::new();
        for k in 1..d.len() {
            if d[k] > d[k - 1] {
                out.push(format!(
                    "D({k}) = {} exceeds D({}) = {}",
                    d[k],
                    k - 1,
                    d[k - 1]
                ));
            }
        }
        for k in 2..d.len() {
            let prev = d[k - 2] as i64 - d[k - 1] as i64;
            let cur = d[k - 1] as i64 - d[k] as i64;
            if cur > prev {
                out.push(format!("first difference grows at κ = {k}"));
            }
        }
        if let Some(first_zero) = d.iter().position(|&x| x == 0) {
            if d[first_zero..].iter().any(|&x| x != 0) {
                out.push(format!("nonzero entry after D({first_zero}) = 0"));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Iota {
    pub value: usize,
    /// The Hankel operator itself vanishes; `value` is 0 by convention.
    pub zero_hankel: bool,
    /// `‖H_{z^j Φ}‖` for `j = 0..=value`.
    pub norms: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EssentialNorm {
    pub value: f64,
    pub certificate: String,
}

/// Largest block order we are willing to grow to for rational symbols.
const MAX_RATIONAL_ORDER: usize = 512;

/// Truncation order that captures every nonzero block (Laurent symbols) or
/// whose next block row falls below `coeff_tol` (rational symbols).
pub fn auto_order(f: &CircleFunction, grid: &GridSpec, tol: &ToleranceConfig) -> Result<usize> {
    if f.is_laurent() {
        return Ok(f.negative_degree(tol.coeff_tol).max(1));
    }
    let reach = (grid.samples() / 2 - 1) as i64;
    let coeffs = f.fourier_coefficients(-reach, -1, grid, tol)?;
    let norm_at = |k: i64| {
        coeffs
            .get(&k)
            .map(crate::linalg::spectral_norm)
            .unwrap_or(0.0)
    };
    let limit = MAX_RATIONAL_ORDER.min((reach as usize) / 2);
    for n in 1..limit {
        // block row n adds coefficients −(n+1) ..= −(2n+1)
        let row: f64 = (n + 1..=2 * n + 1)
            .map(|k| norm_at(-(k as i64)).powi(2))
            .sum::<f64>()
            .sqrt();
        if row < tol.coeff_tol {
            return Ok(n);
        }
    }
    Err(Error::GridTooCoarse {
        samples: grid.samples(),
        reason: format!("Hankel coefficients still above coeff_tol at order {limit}"),
    })
}

/// `N × N` block Hankel truncation with block `(i, j) = Φ̂(−i−j−1)`.
pub fn hankel_matrix(
    f: &CircleFunction,
    order: usize,
    grid: &GridSpec,
    tol: &ToleranceConfig,
) -> Result<HankelTruncation> {
    if order == 0 {
        return Err(Error::InvalidConfig(
            "truncation order must be at least 1".into(),
        ));
    }
    let (m, n) = (f.rows(), f.cols());
    let span = 2 * order as i64 - 1;
    let coeffs = f.fourier_coefficients(-span, -1, grid, tol)?;
    let mut matrix = CMatrix::zeros(order * m, order * n);
    for i in 0..order {
        for j in 0..order {
            let k = -((i + j + 1) as i64);
            matrix
                .view_mut((i * m, j * n), (m, n))
                .copy_from(&coeffs[&k]);
        }
    }
    Ok(HankelTruncation {
        order,
        block_rows: m,
        block_cols: n,
        matrix,
        exact: f.is_laurent() && order >= f.negative_degree(tol.coeff_tol),
    })
}

/// `N × N` Toeplitz truncation with entry `(i, j) = û(i − j)`.
pub fn toeplitz_matrix(
    u: &CircleFunction,
    order: usize,
    grid: &GridSpec,
    tol: &ToleranceConfig,
) -> Result<ToeplitzTruncation> {
    if !u.is_scalar() {
        return Err(Error::shape(
            "toeplitz_matrix",
            format!("expected a scalar symbol, got {}x{}", u.rows(), u.cols()),
        ));
    }
    if order == 0 {
        return Err(Error::InvalidConfig(
            "truncation order must be at least 1".into(),
        ));
    }
    let reach = order as i64 - 1;
    let coeffs = u.fourier_coefficients(-reach, reach, grid, tol)?;
    let matrix = CMatrix::from_fn(order, order, |i, j| coeffs[&(i as i64 - j as i64)][(0, 0)]);
    Ok(ToeplitzTruncation { order, matrix })
}

/// `‖H_Φ‖` from a truncation of the given order, or of [`auto_order`] when `None`.
pub fn hankel_norm(
    f: &CircleFunction,
    order: Option<usize>,
    grid: &GridSpec,
    tol: &ToleranceConfig,
) -> Result<HankelNorm> {
    let order = match order {
        Some(n) => n,
        None => auto_order(f, grid, tol)?,
    };
    let h = hankel_matrix(f, order, grid, tol)?;
    Ok(HankelNorm {
        value: h.norm(),
        order,
        exact: h.exact,
    })
}

/// Full singular spectrum of a truncation, nonincreasing.
pub fn singular_values(h: &HankelTruncation) -> Vec<f64> {
    h.singular_values()
}

/// Counts singular values equal to `level` within the relative band `sv_tol`,
/// refusing to answer when one sits in the guard annulus just below the band.
fn count_at_level(sv: &[f64], level: f64, tol: &ToleranceConfig) -> Result<(usize, Option<f64>)> {
    let band = tol.sv_tol * level;
    let guard_low = level * (1.0 - GUARD_FACTOR * tol.sv_tol);
    let guard_high = level * (1.0 - tol.sv_tol);
    let mut count = 0;
    let mut gap: Option<f64> = None;
    for &s in sv {
        if (s - level).abs() <= band {
            count += 1;
            continue;
        }
        if s > guard_low && s < guard_high {
            return Err(Error::AmbiguousSpectrum { level, value: s });
        }
        let g = (s - level).abs() / level;
        gap = Some(gap.map_or(g, |x: f64| x.min(g)));
    }
    Ok((count, gap))
}

fn shifted_spectrum(
    f: &CircleFunction,
    kappa: usize,
    grid: &GridSpec,
    tol: &ToleranceConfig,
) -> Result<Vec<f64>> {
    let g = f.shift(kappa as i64);
    if g.is_laurent() && g.negative_degree(tol.coeff_tol) == 0 {
        return Ok(Vec::new());
    }
    let order = auto_order(&g, grid, tol)?;
    Ok(hankel_matrix(&g, order, grid, tol)?.singular_values())
}

fn dim_entry(
    f: &CircleFunction,
    level: f64,
    kappa: usize,
    grid: &GridSpec,
    tol: &ToleranceConfig,
) -> Result<DimEntry> {
    let sv = shifted_spectrum(f, kappa, grid, tol)?;
    let (dim, gap) = count_at_level(&sv, level, tol)?;
    Ok(DimEntry { kappa, dim, gap })
}

fn check_level(level: f64) -> Result<()> {
    if !(level.is_finite() && level > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "level t must be positive, got {level}"
        )));
    }
    Ok(())
}

/// `D(κ) = dim{f : ‖H_{z^κΦ} f‖ = t‖f‖}` from the exact truncation of `H_{z^κΦ}`.
pub fn maximizing_dim(
    f: &CircleFunction,
    level: f64,
    kappa: usize,
    grid: &GridSpec,
    tol: &ToleranceConfig,
) -> Result<usize> {
    check_level(level)?;
    Ok(dim_entry(f, level, kappa, grid, tol)?.dim)
}

/// `D(κ)` for `κ = 0..=kappa_max`; without `kappa_max` the table runs to the
/// first zero entry.
pub fn dim_table(
    f: &CircleFunction,
    level: f64,
    kappa_max: Option<usize>,
    grid: &GridSpec,
    tol: &ToleranceConfig,
) -> Result<MaximizingDimTable> {
    check_level(level)?;
    let entries = match kappa_max {
        Some(k) => (0..=k)
            .into_par_iter()
            .map(|kappa| dim_entry(f, level, kappa, grid, tol))
            .collect::<Result<Vec<_>>>()?,
        None if f.is_laurent() => {
            // D vanishes once z^κΦ is analytic, so κ ≤ negative degree suffices
            let last = f.negative_degree(tol.coeff_tol);
            let mut all = (0..=last)
                .into_par_iter()
                .map(|kappa| dim_entry(f, level, kappa, grid, tol))
                .collect::<Result<Vec<_>>>()?;
            if let Some(first_zero) = all.iter().position(|e| e.dim == 0) {
                all.truncate(first_zero + 1);
            }
            all
        }
        None => {
            let mut all = Vec::new();
            for kappa in 0..MAX_RATIONAL_ORDER {
                let e = dim_entry(f, level, kappa, grid, tol)?;
                let done = e.dim == 0;
                all.push(e);
                if done {
                    break;
                }
            }
            all
        }
    };
    Ok(MaximizingDimTable { level, entries })
}

/// `ι(H_Φ) = min{j ≥ 0 : ‖H_{z^jΦ}‖ < ‖H_Φ‖}` with the strict inequality read as
/// `< (1 − sv_tol)·‖H_Φ‖`.
pub fn iota(f: &CircleFunction, grid: &GridSpec, tol: &ToleranceConfig) -> Result<Iota> {
    let base = hankel_norm(f, None, grid, tol)?.value;
    if base <= tol.coeff_tol {
        return Ok(Iota {
            value: 0,
            zero_hankel: true,
            norms: vec![base],
        });
    }
    let below = base * (1.0 - tol.sv_tol);
    let guard_low = base * (1.0 - GUARD_FACTOR * tol.sv_tol);
    let cap = if f.is_laurent() {
        f.negative_degree(tol.coeff_tol) + 1
    } else {
        MAX_RATIONAL_ORDER
    };
    let mut norms = vec![base];
    for j in 1..=cap {
        let g = f.shift(j as i64);
        let nj = if g.is_laurent() && g.negative_degree(tol.coeff_tol) == 0 {
            0.0
        } else {
            hankel_norm(&g, None, grid, tol)?.value
        };
        norms.push(nj);
        if nj > guard_low && nj < below {
            return Err(Error::AmbiguousSpectrum {
                level: base,
                value: nj,
            });
        }
        if nj < below {
            return Ok(Iota {
                value: j,
                zero_hankel: false,
                norms,
            });
        }
    }
    Err(Error::GridTooCoarse {
        samples: grid.samples(),
        reason: format!("shifted Hankel norms did not drop below ‖H_Φ‖ within {cap} shifts"),
    })
}

/// Essential norm of `H_Φ`. Every representable symbol is continuous on the
/// circle, so `H_Φ` is compact and the essential norm is zero.
pub fn essential_norm_bound(f: &CircleFunction) -> EssentialNorm {
    let what = if f.is_laurent() {
        "trigonometric polynomial"
    } else {
        "rational function without poles on the circle"
    };
    EssentialNorm {
        value: 0.0,
        certificate: format!(
            "symbol is a {what}, hence continuous; by Hartman's theorem H_Φ is compact, so ‖H_Φ‖ₑ = 0"
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, ONE, ZERO};
    use proptest::prelude::*;

    fn grid() -> GridSpec {
        GridSpec::default()
    }

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn diag_conj_monomials(exps: &[i64]) -> CircleFunction {
        exps.iter()
            .map(|&a| CircleFunction::monomial(ONE, -a))
            .reduce(|acc, x| acc.direct_sum(&x))
            .unwrap()
    }

    /// Closed-form maximizing dimension for a diagonal of conjugate monomials.
    fn closed_form_dim(exps: &[i64], kappa: i64) -> usize {
        exps.iter().map(|&a| (a - kappa).max(0) as usize).sum()
    }

    #[test]
    fn conjugate_monomial_gives_anti_diagonal() {
        let h = hankel_matrix(&CircleFunction::monomial(ONE, -4), 4, &grid(), &tol()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i + j == 3 { ONE } else { ZERO };
                assert_eq!(h.matrix[(i, j)], expected);
            }
        }
        assert!(h.exact);
        assert!(h.singular_values().iter().all(|s| (s - 1.0).abs() < 1e-14));
    }

    #[test]
    fn analytic_symbol_gives_zero_hankel() {
        let f = CircleFunction::scalar(&[(0, ONE), (3, c(2.0, 1.0))]);
        let h = hankel_matrix(&f, 3, &grid(), &tol()).unwrap();
        assert!(h.matrix.iter().all(|z| *z == ZERO));
        assert!(h.singular_values().iter().all(|s| *s == 0.0));
    }

    #[test]
    fn diag_z2_z6_truncation() {
        let f = diag_conj_monomials(&[2, 6]);
        let h = hankel_matrix(&f, 6, &grid(), &tol()).unwrap();
        assert!(h.exact);
        assert_eq!(h.block(0, 1)[(0, 0)], ONE);
        assert_eq!(h.block(2, 3)[(1, 1)], ONE);
        assert_eq!(h.block(0, 0), CMatrix::zeros(2, 2));
        let sv = h.singular_values();
        assert_eq!(sv.iter().filter(|s| (*s - 1.0).abs() < 1e-12).count(), 8);
        assert!(sv[8..].iter().all(|s| s.abs() < 1e-12));
    }

    #[test]
    fn too_short_truncation_is_not_exact() {
        let f = diag_conj_monomials(&[2, 6]);
        assert!(!hankel_matrix(&f, 3, &grid(), &tol()).unwrap().exact);
    }

    #[test]
    fn toeplitz_of_basic_symbols() {
        let t1 = toeplitz_matrix(&CircleFunction::monomial(ONE, 0), 3, &grid(), &tol()).unwrap();
        assert_eq!(t1.matrix, CMatrix::identity(3, 3));
        let tz = toeplitz_matrix(&CircleFunction::monomial(ONE, 1), 3, &grid(), &tol()).unwrap();
        assert_eq!(tz.matrix[(1, 0)], ONE);
        assert_eq!(tz.matrix[(2, 1)], ONE);
        assert_eq!(tz.matrix.iter().filter(|z| **z == ONE).count(), 2);
        let t2 = toeplitz_matrix(&CircleFunction::monomial(ONE, -2), 4, &grid(), &tol()).unwrap();
        assert_eq!(t2.matrix[(0, 2)], ONE);
        assert_eq!(t2.matrix[(1, 3)], ONE);
        assert_eq!(t2.matrix.iter().filter(|z| **z == ONE).count(), 2);
    }

    #[test]
    fn norms_of_simple_symbols() {
        let n = hankel_norm(&CircleFunction::monomial(ONE, -5), None, &grid(), &tol()).unwrap();
        assert!((n.value - 1.0).abs() < 1e-12 && n.exact);
        let n = hankel_norm(&diag_conj_monomials(&[2, 6]), None, &grid(), &tol()).unwrap();
        assert!((n.value - 1.0).abs() < 1e-12);
        let n = hankel_norm(
            &CircleFunction::monomial(c(0.5, 0.0), -1),
            None,
            &grid(),
            &tol(),
        )
        .unwrap();
        assert!((n.value - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rational_symbol_norm_matches_closed_form() {
        // φ = z̄·conj(1/(1 − z/2)) has φ̂(−k) = 2^{1−k}, so H = u uᵗ with u_i = 2^{−i}
        // and ‖H‖ = Σ 4^{−i} = 4/3.
        let f = CircleFunction::scalar_rational(&[(0, ONE)], &[(0, ONE), (1, c(-0.5, 0.0))])
            .unwrap()
            .conj()
            .shift(-1);
        let n = hankel_norm(&f, None, &grid(), &tol()).unwrap();
        assert!(!n.exact);
        assert!((n.value - 4.0 / 3.0).abs() < 1e-9, "{}", n.value);
    }

    #[test]
    fn dim_table_of_diag_z2_z6() {
        let f = diag_conj_monomials(&[2, 6]);
        let table = dim_table(&f, 1.0, None, &grid(), &tol()).unwrap();
        assert_eq!(table.dims(), vec![8, 6, 4, 3, 2, 1, 0]);
        assert!(table.invariant_violations().is_empty());
        assert_eq!(maximizing_dim(&f, 1.0, 2, &grid(), &tol()).unwrap(), 4);
        assert_eq!(maximizing_dim(&f, 1.0, 6, &grid(), &tol()).unwrap(), 0);
    }

    #[test]
    fn dim_table_scalar_and_analytic() {
        let t = dim_table(
            &CircleFunction::monomial(ONE, -3),
            1.0,
            None,
            &grid(),
            &tol(),
        )
        .unwrap();
        assert_eq!(t.dims(), vec![3, 2, 1, 0]);
        let t = dim_table(
            &CircleFunction::monomial(ONE, 2),
            0.3,
            None,
            &grid(),
            &tol(),
        )
        .unwrap();
        assert_eq!(t.dims(), vec![0]);
    }

    #[test]
    fn explicit_kappa_max_extends_table() {
        let t = dim_table(
            &CircleFunction::monomial(ONE, -2),
            1.0,
            Some(4),
            &grid(),
            &tol(),
        )
        .unwrap();
        assert_eq!(t.dims(), vec![2, 1, 0, 0, 0]);
    }

    #[test]
    fn ambiguous_level_is_an_error() {
        let f = CircleFunction::monomial(c(1.0 - 3e-6, 0.0), -1);
        let err = maximizing_dim(&f, 1.0, 0, &grid(), &tol()).unwrap_err();
        assert!(matches!(err, Error::AmbiguousSpectrum { .. }));
    }

    #[test]
    fn iota_values() {
        let i = iota(&diag_conj_monomials(&[2, 6]), &grid(), &tol()).unwrap();
        assert_eq!(i.value, 6);
        assert!(!i.zero_hankel);
        assert!((i.norms[5] - 1.0).abs() < 1e-12);
        assert_eq!(i.norms[6], 0.0);
        for k in 1..6 {
            assert_eq!(
                iota(&CircleFunction::monomial(ONE, -k), &grid(), &tol())
                    .unwrap()
                    .value,
                k as usize
            );
        }
        let z = iota(&CircleFunction::monomial(ONE, 1), &grid(), &tol()).unwrap();
        assert_eq!(z.value, 0);
        assert!(z.zero_hankel);
    }

    #[test]
    fn essential_norm_is_zero_for_representable_symbols() {
        assert_eq!(
            essential_norm_bound(&diag_conj_monomials(&[2, 6])).value,
            0.0
        );
        let b = CircleFunction::blaschke(c(0.4, 0.0)).unwrap().conj();
        let e = essential_norm_bound(&b);
        assert_eq!(e.value, 0.0);
        assert!(e.certificate.contains("Hartman"));
        assert_eq!(
            essential_norm_bound(&CircleFunction::zeros(2, 3)).value,
            0.0
        );
    }

    #[test]
    fn table_invariants_flag_bad_tables() {
        let mk = |d: &[usize]| MaximizingDimTable {
            level: 1.0,
            entries: d
                .iter()
                .enumerate()
                .map(|(kappa, &dim)| DimEntry {
                    kappa,
                    dim,
                    gap: None,
                })
                .collect(),
        };
        assert!(mk(&[8, 6, 4, 3, 2, 1, 0]).invariant_violations().is_empty());
        assert!(!mk(&[3, 4, 0]).invariant_violations().is_empty());
        assert!(!mk(&[5, 4, 2, 0]).invariant_violations().is_empty());
        assert!(!mk(&[2, 0, 1]).invariant_violations().is_empty());
    }

    fn random_laurent(
        seed_terms: &[(i64, f64, f64, f64, f64)],
        rows: usize,
        cols: usize,
    ) -> CircleFunction {
        let mut acc = std::collections::BTreeMap::new();
        for &(k, a, b, x, y) in seed_terms {
            let m = CMatrix::from_fn(rows, cols, |i, j| {
                let s = (i * cols + j) as f64 + 1.0;
                c((a * s + x).sin(), (b * s + y).cos())
            });
            acc.insert(k, m);
        }
        CircleFunction::laurent(rows, cols, acc.into_iter().collect()).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn diagonal_dims_match_closed_form(exps in proptest::collection::vec(1i64..=8, 1..=4)) {
            let f = diag_conj_monomials(&exps);
            let table = dim_table(&f, 1.0, None, &grid(), &tol()).unwrap();
            for e in &table.entries {
                prop_assert_eq!(e.dim, closed_form_dim(&exps, e.kappa as i64));
            }
            prop_assert!(table.invariant_violations().is_empty());
        }

        #[test]
        fn hankel_blocks_depend_on_antidiagonal(
            terms in proptest::collection::vec((-5i64..3, -3.0f64..3.0, -3.0f64..3.0, -1.0f64..1.0, -1.0f64..1.0), 1..6)
        ) {
            let f = random_laurent(&terms, 2, 3);
            let h = hankel_matrix(&f, 5, &grid(), &tol()).unwrap();
            for i in 0..5 {
                for j in 0..5 {
                    if i + 1 < 5 && j >= 1 {
                        prop_assert_eq!(h.block(i, j), h.block(i + 1, j - 1));
                    }
                }
            }
        }

        #[test]
        fn shifted_spectrum_is_dominated(
            terms in proptest::collection::vec((-6i64..2, -3.0f64..3.0, -3.0f64..3.0, -1.0f64..1.0, -1.0f64..1.0), 1..6)
        ) {
            let f = random_laurent(&terms, 2, 2);
            let order = auto_order(&f, &grid(), &tol()).unwrap();
            let s0 = hankel_matrix(&f, order, &grid(), &tol()).unwrap().singular_values();
            let s1 = hankel_matrix(&f.shift(1), order, &grid(), &tol()).unwrap().singular_values();
            for (a, b) in s0.iter().zip(&s1) {
                prop_assert!(*b <= *a + 1e-10);
            }
        }

        #[test]
        fn transpose_has_same_hankel_spectrum(
            terms in proptest::collection::vec((-5i64..3, -3.0f64..3.0, -3.0f64..3.0, -1.0f64..1.0, -1.0f64..1.0), 1..6)
        ) {
            let f = random_laurent(&terms, 2, 3);
            let order = auto_order(&f, &grid(), &tol()).unwrap();
            let a = hankel_matrix(&f, order, &grid(), &tol()).unwrap().singular_values();
            let b = hankel_matrix(&f.transpose(), order, &grid(), &tol()).unwrap().singular_values();
            let n = a.len().min(b.len());
            for k in 0..n {
                prop_assert!((a[k] - b[k]).abs() < 1e-10);
            }
        }
    }
}
