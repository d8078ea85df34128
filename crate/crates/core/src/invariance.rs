//! Invariants of (partial) thematic factorizations checked numerically: residual
//! extraction and its uniqueness up to constant unitaries, the two descriptions of
//! the subspace `L`, the maximizing-dimension formula, recovery of monotone
//! indices from Hankel data, and the `ι` bound on the top index.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circle_fn::{toeplitz_index, CircleFunction, GridSpec, ToleranceConfig};
use crate::error::{Error, Result};
use crate::hankel::{self, MaximizingDimTable};
use crate::linalg::{
    hermitian_eigen, polar_unitary, random_unitary, singular_values, spectral_norm, CMatrix,
};
use crate::thematic::FactorBundle;

pub const MAX_SWEEPS: usize = 100;
pub const SWEEP_CONVERGENCE: f64 = 1e-12;
const RESTART_SEED: u64 = 0x7468_656d;
/// Every `SEED_STRIDE`-th grid point feeds the linear seed of the alignment.
const SEED_STRIDE: usize = 8;

/// `Ψ = Ξ*_{r−1}…Ξ*₀ · Φ · Θ̄₀…Θ̄_{r−1}`.
pub fn extract_residual(
    phi: &CircleFunction,
    xis: &[CircleFunction],
    thetas: &[CircleFunction],
) -> Result<CircleFunction> {
    if xis.len() != thetas.len() || xis.is_empty() {
        return Err(Error::shape(
            "extract_residual",
            format!("{} left and {} right complements", xis.len(), thetas.len()),
        ));
    }
    let r = xis.len();
    if r >= phi.rows().min(phi.cols()) {
        return Err(Error::shape(
            "extract_residual",
            format!(
                "r = {r} leaves no residual in a {}x{} symbol",
                phi.rows(),
                phi.cols()
            ),
        ));
    }
    let mut acc = phi.clone();
    for xi in xis {
        acc = xi.adjoint().multiply(&acc)?;
    }
    for theta in thetas {
        acc = acc.multiply(&theta.conj())?;
    }
    Ok(acc)
}

/// [`extract_residual`] with the complements of the bundle's own blocks.
pub fn extract_bundle_residual(
    phi: &CircleFunction,
    bundle: &FactorBundle,
) -> Result<CircleFunction> {
    let (xis, thetas) = (bundle.xi_chain(), bundle.theta_chain());
    if xis.len() < bundle.r() || thetas.len() < bundle.r() {
        return Err(Error::shape(
            "extract_residual",
            "bundle has no residual block",
        ));
    }
    extract_residual(phi, &xis, &thetas)
}

/// Constant unitaries with `Ψ♥ ≈ U₂ΨU₁` on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualEquivalence {
    pub u1: CMatrix,
    pub u2: CMatrix,
    pub max_deviation: f64,
    pub sweeps: usize,
    pub start: AlignmentStart,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlignmentStart {
    Identity,
    RandomRestart,
    LinearSeed,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Equivalence {
    Equivalent(ResidualEquivalence),
    /// Best deviation reached by any start.
    NotEquivalent {
        max_deviation: f64,
    },
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent(_))
    }

    pub fn max_deviation(&self) -> f64 {
        match self {
            Equivalence::Equivalent(e) => e.max_deviation,
            Equivalence::NotEquivalent { max_deviation } => *max_deviation,
        }
    }
}

struct Alignment {
    u1: CMatrix,
    u2: CMatrix,
    max_deviation: f64,
    sweeps: usize,
}

fn max_misfit(a: &[CMatrix], b: &[CMatrix], u2: &CMatrix, u1: &CMatrix) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| spectral_norm(&(x - u2 * y * u1)))
        .fold(0.0, f64::max)
}

fn vec_of(m: &CMatrix) -> DVector<Complex64> {
    DVector::from_column_slice(m.as_slice())
}

fn unvec(v: &DVector<Complex64>, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_column_slice(rows, cols, v.as_slice())
}

/// Alternating orthogonal Procrustes sweeps for `min Σ ‖A_j − U₂B_jU₁‖²_F`.
///
/// Both cross-correlations are linear in the other unitary, so they are folded
/// into Kronecker operators once: `vec(Σ A_j X B_j*) = (Σ B̄_j ⊗ A_j)·vec X` and
/// `vec(Σ B_j* Y A_j) = (Σ A_jᵗ ⊗ B_j*)·vec Y`.
fn procrustes(a: &[CMatrix], b: &[CMatrix], mut u2: CMatrix, mut u1: CMatrix) -> Alignment {
    let (p, q) = (a[0].nrows(), a[0].ncols());
    let mut k2 = CMatrix::zeros(p * p, q * q);
    let mut k1 = CMatrix::zeros(q * q, p * p);
    let mut base = 0.0;
    for (x, y) in a.iter().zip(b) {
        k2 += y.map(|z| z.conj()).kronecker(x);
        k1 += x.transpose().kronecker(&y.adjoint());
        base += x.norm_squared() + y.norm_squared();
    }
    // Σ ‖A_j − U₂B_jU₁‖² = Σ‖A_j‖² + Σ‖B_j‖² − 2 Re tr(M₁*U₁) after the U₁ update.
    let cost = |m1: &CMatrix, u1: &CMatrix| base - 2.0 * (m1.adjoint() * u1).trace().re;
    let mut prev = cost(&unvec(&(&k1 * vec_of(&u2.adjoint())), q, q), &u1).max(0.0);
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        sweeps += 1;
        let m2 = unvec(&(&k2 * vec_of(&u1.adjoint())), p, p);
        u2 = polar_unitary(&m2);
        let m1 = unvec(&(&k1 * vec_of(&u2.adjoint())), q, q);
        u1 = polar_unitary(&m1);
        let next = cost(&m1, &u1).max(0.0);
        let done = (prev - next).abs() <= SWEEP_CONVERGENCE * prev.max(1.0);
        prev = next;
        if done {
            break;
        }
    }
    Alignment {
        max_deviation: max_misfit(a, b, &u2, &u1),
        u1,
        u2,
        sweeps,
    }
}

/// Null vector of `A_j X − Y B_j = 0` (with `X = U₁*`, `Y = U₂`) on a subgrid,
/// projected to unitaries.
fn linear_seed(a: &[CMatrix], b: &[CMatrix]) -> (CMatrix, CMatrix) {
    let (p, q) = (a[0].nrows(), a[0].ncols());
    let picks: Vec<usize> = (0..a.len()).step_by(SEED_STRIDE).collect();
    let unknowns = q * q + p * p;
    let rows = (picks.len() * p * q).max(unknowns);
    let mut lin = DMatrix::<Complex64>::zeros(rows, unknowns);
    let mut row = 0;
    for &j in &picks {
        for i in 0..p {
            for k in 0..q {
                // (A X)_{ik} = Σ_l A_{il} X_{lk};  (Y B)_{ik} = Σ_l Y_{il} B_{lk}
                for l in 0..q {
                    lin[(row, l + k * q)] += a[j][(i, l)];
                }
                for l in 0..p {
                    lin[(row, q * q + i + l * p)] -= b[j][(l, k)];
                }
                row += 1;
            }
        }
    }
    let svd = lin.svd(false, true);
    let v_t = svd.v_t.expect("requested V^*");
    let pick = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let null = v_t.row(pick).map(|z| z.conj());
    let x = CMatrix::from_fn(q, q, |l, k| null[l + k * q]);
    let y = CMatrix::from_fn(p, p, |i, l| null[q * q + i + l * p]);
    (polar_unitary(&y), polar_unitary(&x).adjoint())
}

type StartFn<'a> = Box<dyn Fn(&mut ChaCha8Rng) -> (CMatrix, CMatrix) + 'a>;

/// Searches for constant unitaries `U₁, U₂` with `Ψ♥ = U₂ΨU₁` on the grid.
///
/// Starts from the identity, then one seeded random restart, then a seed from the
/// linearized equation `Ψ♥U₁* = U₂Ψ`; each start is refined by alternating
/// Procrustes sweeps and the first one within tolerance is returned.
pub fn residual_equivalence(
    psi: &CircleFunction,
    psi_heart: &CircleFunction,
    grid: &GridSpec,
    tol: &ToleranceConfig,
) -> Result<Equivalence> {
    if psi.rows() != psi_heart.rows() || psi.cols() != psi_heart.cols() {
        return Err(Error::shape(
            "residual_equivalence",
            format!(
                "{}x{} vs {}x{}",
                psi.rows(),
                psi.cols(),
                psi_heart.rows(),
                psi_heart.cols()
            ),
        ));
    }
    let (p, q) = (psi.rows(), psi.cols());
    let b = psi.sample(grid);
    let a = psi_heart.sample(grid);
    let sup_b = b.iter().map(spectral_norm).fold(0.0, f64::max);
    let sup_a = a.iter().map(spectral_norm).fold(0.0, f64::max);
    let bound = tol.eq_tol * sup_b.max(1.0);
    if sup_b <= tol.coeff_tol {
        if sup_a <= tol.coeff_tol {
            return Ok(Equivalence::Equivalent(ResidualEquivalence {
                u1: CMatrix::identity(q, q),
                u2: CMatrix::identity(p, p),
                max_deviation: sup_a,
                sweeps: 0,
                start: AlignmentStart::Identity,
            }));
        }
        return Err(Error::DegenerateInput(format!(
            "Ψ vanishes but Ψ♥ has sup norm {sup_a:.3e}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(RESTART_SEED);
    let mut best = f64::INFINITY;
    let starts: [(AlignmentStart, StartFn); 3] = [
        (
            AlignmentStart::Identity,
            Box::new(|_| (CMatrix::identity(p, p), CMatrix::identity(q, q))),
        ),
        (
            AlignmentStart::RandomRestart,
            Box::new(|rng| (random_unitary(p, rng), random_unitary(q, rng))),
        ),
        (
            AlignmentStart::LinearSeed,
            Box::new(|_| linear_seed(&a, &b)),
        ),
    ];
    for (start, init) in starts.iter() {
        let (u2, u1) = init(&mut rng);
        let al = procrustes(&a, &b, u2, u1);
        best = best.min(al.max_deviation);
        if al.max_deviation <= bound {
            return Ok(Equivalence::Equivalent(ResidualEquivalence {
                u1: al.u1,
                u2: al.u2,
                max_deviation: al.max_deviation,
                sweeps: al.sweeps,
                start: *start,
            }));
        }
    }
    Ok(Equivalence::NotEquivalent {
        max_deviation: best,
    })
}

/// `max_ζ max_i |s_i(Ψ(ζ)) − s_i(Ψ♥(ζ))|`: zero whenever the two are unitarily equivalent.
pub fn singular_value_deviation(
    psi: &CircleFunction,
    psi_heart: &CircleFunction,
    grid: &GridSpec,
) -> Result<f64> {
    if psi.rows() != psi_heart.rows() || psi.cols() != psi_heart.cols() {
        return Err(Error::shape(
            "singular_value_deviation",
            "residual shapes differ",
        ));
    }
    Ok(grid
        .angles()
        .map(|a| {
            let s = singular_values(&psi.eval_angle(a));
            let h = singular_values(&psi_heart.eval_angle(a));
            s.iter()
                .zip(&h)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max))
}

fn rho_of_value(value: &CMatrix, t: f64, tol: &ToleranceConfig) -> CMatrix {
    let g = value.transpose() * value.map(|z| z.conj());
    let (eig, vecs) = hermitian_eigen(&g);
    let threshold = t * t * (1.0 - tol.sv_tol);
    let mut out = CMatrix::zeros(g.nrows(), g.ncols());
    for (i, &x) in eig.iter().enumerate() {
        if x >= threshold {
            let v = vecs.column(i);
            out += v * v.adjoint() * Complex64::from(x);
        }
    }
    out
}

/// `ρ(Φᵗ(ζ)Φ̄(ζ))` with `ρ(x) = x` for `x ≥ t²` and `0` below.
pub fn rho_matrix(
    phi: &CircleFunction,
    t: f64,
    zeta: Complex64,
    tol: &ToleranceConfig,
) -> Result<CMatrix> {
    let value = phi.evaluate_with(zeta, tol)?;
    Ok(rho_of_value(&value, t, tol))
}

fn require_analytic(f: &CircleFunction, grid: &GridSpec, tol: &ToleranceConfig) -> Result<()> {
    let max_norm = f.max_negative_coefficient(grid, tol)?;
    if max_norm > tol.coeff_tol {
        return Err(Error::NotAnalytic { max_norm });
    }
    Ok(())
}

fn require_column(f: &CircleFunction, rows: usize, op: &'static str) -> Result<()> {
    if f.cols() != 1 || f.rows() != rows {
        return Err(Error::shape(
            op,
            format!("expected a {rows}x1 column, got {}x{}", f.rows(), f.cols()),
        ));
    }
    Ok(())
}

/// `f ∈ L = Ker(ρ(ΦᵗΦ̄)·)`, tested pointwise on the grid.
pub fn l_subspace_member(
    f: &CircleFunction,
    phi: &CircleFunction,
    t: f64,
    grid: &GridSpec,
    tol: &ToleranceConfig,
) -> Result<bool> {
    require_column(f, phi.cols(), "l_subspace_member")?;
    require_analytic(f, grid, tol)?;
    let sup = f.sup_norm(grid);
    let worst = grid
        .angles()
        .map(|a| spectral_norm(&(rho_of_value(&phi.eval_angle(a), t, tol) * f.eval_angle(a))))
        .fold(0.0, f64::max);
    Ok(worst <= tol.eq_tol * sup)
}

/// `f ∈ Θ₀Θ₁…Θ_{r−1}H²`: `g = Θ*f` must reproduce `f` and be analytic.
pub fn theta_range_member(
    f: &CircleFunction,
    chain: &[CircleFunction],
    grid: &GridSpec,
    tol: &ToleranceConfig,
) -> Result<bool> {
    let theta = CircleFunction::product(chain)?;
    require_column(f, theta.rows(), "theta_range_member")?;
    let g = theta.adjoint().multiply(f)?;
    let back = theta.multiply(&g)?;
    let dev = back.max_deviation(f, grid)?;
    if dev > tol.eq_tol * f.sup_norm(grid).max(1.0) {
        return Ok(false);
    }
    Ok(g.max_negative_coefficient(grid, tol)? <= tol.coeff_tol)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexGroup {
    pub value: usize,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecoveredIndices {
    pub level: f64,
    /// Nonincreasing.
    pub indices: Vec<usize>,
    pub groups: Vec<IndexGroup>,
    pub table: MaximizingDimTable,
}

impl RecoveredIndices {
    pub fn sum(&self) -> usize {
        self.indices.iter().sum()
    }
}

/// `Σ_j max(k_j − κ, 0)`.
pub fn predicted_dim(indices: &[usize], kappa: usize) -> usize {
    indices.iter().map(|&k| k.saturating_sub(kappa)).sum()
}

fn recover_from_table(table: &MaximizingDimTable) -> Result<Vec<IndexGroup>> {
    let d = |k: usize| table.dim(k).unwrap_or(0);
    let total = d(0);
    let mut groups: Vec<IndexGroup> = Vec::new();
    let accounted = |g: &[IndexGroup], kappa: usize| -> usize {
        g.iter()
            .map(|x| x.multiplicity * x.value.saturating_sub(kappa))
            .sum()
    };
    while accounted(&groups, 0) < total {
        let upper = groups.last().map_or(table.entries.len(), |g| g.value);
        let value = (0..upper)
            .find(|&k| d(k) == accounted(&groups, k))
            .ok_or_else(|| {
                Error::InconsistentTable(format!(
                    "no κ < {upper} with D(κ) = Σ μ_p(v_p − κ) after {} groups",
                    groups.len()
                ))
            })?;
        if value == 0 {
            return Err(Error::InconsistentTable(format!(
                "D(0) = {total} is not exhausted but the recursion reached κ = 0"
            )));
        }
        let mult = d(value - 1)
            .checked_sub(accounted(&groups, value - 1))
            .filter(|&m| m > 0)
            .ok_or_else(|| {
                Error::InconsistentTable(format!("multiplicity at κ = {value} is not positive"))
            })?;
        groups.push(IndexGroup {
            value,
            multiplicity: mult,
        });
        if accounted(&groups, 0) > total {
            return Err(Error::InconsistentTable(format!(
                "recovered indices overshoot D(0) = {total}"
            )));
        }
    }
    Ok(groups)
}

/// Monotone thematic indices at level `t₀` read off the maximizing dimensions
/// `D(κ)`; the result is cross-checked against every entry of the table.
pub fn recover_monotone_indices(
    phi: &CircleFunction,
    t0: f64,
    grid: &GridSpec,
    tol: &ToleranceConfig,
) -> Result<RecoveredIndices> {
    let table = hankel::dim_table(phi, t0, None, grid, tol)?;
    let violations = table.invariant_violations();
    if !violations.is_empty() {
        return Err(Error::InconsistentTable(violations.join("; ")));
    }
    let groups = recover_from_table(&table)?;
    let indices: Vec<usize> = groups
        .iter()
        .flat_map(|g| std::iter::repeat_n(g.value, g.multiplicity))
        .collect();
    for e in &table.entries {
        let p = predicted_dim(&indices, e.kappa);
        if p != e.dim {
            return Err(Error::InconsistentTable(format!(
                "recovered indices predict D({}) = {p}, measured {}",
                e.kappa, e.dim
            )));
        }
    }
    Ok(RecoveredIndices {
        level: t0,
        indices,
        groups,
        table,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DimensionCheck {
    pub kappa: usize,
    pub measured: usize,
    pub predicted: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionFormulaReport {
    pub level: f64,
    pub candidates: Vec<usize>,
    pub entries: Vec<DimensionCheck>,
    pub first_mismatch: Option<DimensionCheck>,
    pub consistent: bool,
}

/// Compares measured `D(κ)` with `Σ_{k_j > κ}(k_j − κ)` for `κ = 0..=max k_j`.
/// A level of 0 is accepted only for a vanishing Hankel operator, where every
/// maximizing dimension is 0.
pub fn verify_dimension_formula(
    phi: &CircleFunction,
    t0: f64,
    candidates: &[usize],
    grid: &GridSpec,
    tol: &ToleranceConfig,
) -> Result<DimensionFormulaReport> {
    if let Some(k) = candidates.iter().find(|k| **k == 0) {
        return Err(Error::InvalidConfig(format!(
            "candidate index {k} is not positive"
        )));
    }
    let kappa_max = candidates.iter().copied().max().unwrap_or(0);
    let measured: Vec<usize> = if t0 == 0.0 {
        let h = hankel::hankel_norm(phi, None, grid, tol)?;
        if h.value > tol.coeff_tol {
            return Err(Error::InvalidConfig(format!(
                "level 0 requested but ‖H_Φ‖ = {:.6}",
                h.value
            )));
        }
        vec![0; kappa_max + 1]
    } else {
        hankel::dim_table(phi, t0, Some(kappa_max), grid, tol)?.dims()
    };
    let entries: Vec<DimensionCheck> = measured
        .iter()
        .enumerate()
        .map(|(kappa, &m)| DimensionCheck {
            kappa,
            measured: m,
            predicted: predicted_dim(candidates, kappa),
        })
        .collect();
    let first_mismatch = entries.iter().copied().find(|e| e.measured != e.predicted);
    let mut sorted = candidates.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    Ok(DimensionFormulaReport {
        level: t0,
        candidates: sorted,
        consistent: first_mismatch.is_none(),
        first_mismatch,
        entries,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IotaBound {
    /// `ind T_{u₀}`.
    pub index: i64,
    pub iota: usize,
    pub holds: bool,
    pub attained: bool,
}

/// `ind T_{u₀} ≤ ι(H_Φ)` for the composed symbol, with attainment reported.
pub fn iota_bound_check(
    bundle: &FactorBundle,
    grid: &GridSpec,
    tol: &ToleranceConfig,
) -> Result<IotaBound> {
    let top = &bundle.diag()[0];
    if top.t <= 0.0 {
        return Err(Error::InvalidConfig(
            "top diagonal value must be positive".into(),
        ));
    }
    let index = toeplitz_index(&top.u, grid, tol)?;
    let iota = hankel::iota(&bundle.compose()?, grid, tol)?.value;
    Ok(IotaBound {
        index,
        iota,
        holds: index <= iota as i64,
        attained: index == iota as i64,
    })
}

/// Random analytic column `Σ_{k=0}^{degree} c_k z^k`.
pub fn analytic_column<R: rand::Rng + ?Sized>(
    n: usize,
    degree: usize,
    rng: &mut R,
) -> CircleFunction {
    let terms = (0..=degree as i64)
        .map(|k| {
            let m = CMatrix::from_fn(n, 1, |_, _| {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            (k, m)
        })
        .collect();
    CircleFunction::laurent(n, 1, terms).expect("consistent shapes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, ONE, ZERO};
    use crate::thematic::catalog;

    fn grid() -> GridSpec {
        GridSpec::default()
    }

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn diag3() -> CircleFunction {
        CircleFunction::monomial(ONE, -3)
            .direct_sum(&CircleFunction::monomial(ONE, -2))
            .direct_sum(&CircleFunction::monomial(c(0.5, 0.0), -1))
    }

    fn diag_monomials(exps: &[i64]) -> CircleFunction {
        exps.iter()
            .map(|&a| CircleFunction::monomial(ONE, -a))
            .reduce(|acc, x| acc.direct_sum(&x))
            .unwrap()
    }

    #[test]
    fn identity_blocks_select_corner() {
        let b = catalog::diag_monomial_partial(
            &[1.0, 1.0],
            &[3, 2],
            &CircleFunction::monomial(c(0.5, 0.0), -1),
        )
        .unwrap();
        let psi = extract_bundle_residual(&diag3(), &b).unwrap();
        assert!(
            psi.max_deviation(&CircleFunction::monomial(c(0.5, 0.0), -1), &grid())
                .unwrap()
                < 1e-15
        );
    }

    #[test]
    fn zero_row_and_column_extracts_zero() {
        let phi = catalog::diag_z2_z6().direct_sum(&CircleFunction::zeros(1, 1));
        let b = catalog::diag_monomial_partial(&[1.0, 1.0], &[2, 6], &CircleFunction::zeros(1, 1))
            .unwrap();
        let psi = extract_bundle_residual(&phi, &b).unwrap();
        assert_eq!((psi.rows(), psi.cols()), (1, 1));
        assert!(psi.sup_norm(&grid()) < 1e-15);
    }

    #[test]
    fn extraction_requires_a_residual() {
        let b = &catalog::diag_z2_z6_bundles()[0];
        assert!(extract_bundle_residual(&catalog::diag_z2_z6(), b).is_err());
    }

    #[test]
    fn phase_alignment() {
        let psi = CircleFunction::monomial(c(0.5, 0.0), -1);
        let w = Complex64::cis(std::f64::consts::PI / 3.0);
        let heart = psi.scale(w);
        match residual_equivalence(&psi, &heart, &grid(), &tol()).unwrap() {
            Equivalence::Equivalent(e) => {
                assert!((e.u2[(0, 0)] * e.u1[(0, 0)] - w).norm() < 1e-12);
                assert!(e.max_deviation < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn identical_residuals_align_with_identity() {
        let psi = CircleFunction::laurent(
            2,
            2,
            vec![(
                -1,
                CMatrix::from_row_slice(2, 2, &[c(0.3, 0.0), c(0.1, 0.0), ZERO, c(0.2, 0.1)]),
            )],
        )
        .unwrap();
        match residual_equivalence(&psi, &psi, &grid(), &tol()).unwrap() {
            Equivalence::Equivalent(e) => {
                assert_eq!(e.start, AlignmentStart::Identity);
                assert!((e.u1.clone() - CMatrix::identity(2, 2)).norm() < 1e-12);
                assert!((e.u2.clone() - CMatrix::identity(2, 2)).norm() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn different_moduli_are_not_equivalent() {
        let psi = CircleFunction::monomial(c(0.5, 0.0), -1);
        let heart = CircleFunction::monomial(c(0.25, 0.0), -1);
        let out = residual_equivalence(&psi, &heart, &grid(), &tol()).unwrap();
        assert!(!out.is_equivalent());
        assert!((out.max_deviation() - 0.25).abs() < 1e-9);
        assert!((singular_value_deviation(&psi, &heart, &grid()).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn zero_versus_nonzero_is_degenerate() {
        let zero = CircleFunction::zeros(1, 1);
        let psi = CircleFunction::monomial(c(0.5, 0.0), -1);
        assert!(matches!(
            residual_equivalence(&zero, &psi, &grid(), &tol()),
            Err(Error::DegenerateInput(_))
        ));
        assert!(residual_equivalence(&zero, &zero, &grid(), &tol())
            .unwrap()
            .is_equivalent());
    }

    #[test]
    fn rho_examples() {
        let phi = CircleFunction::constant(CMatrix::from_row_slice(
            2,
            2,
            &[ONE, ZERO, ZERO, c(0.5, 0.0)],
        ));
        let r = rho_matrix(&phi, 1.0, ONE, &tol()).unwrap();
        assert!((r - CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ZERO])).norm() < 1e-15);
        let r = rho_matrix(&phi, 0.4, ONE, &tol()).unwrap();
        assert!(
            (r - CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, c(0.25, 0.0)])).norm() < 1e-15
        );
        let z = Complex64::cis(0.7);
        let r = rho_matrix(&diag3(), 1.0, z, &tol()).unwrap();
        let expected = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![ONE, ONE, ZERO]));
        assert!((r - expected).norm() < 1e-14);
        assert!(matches!(
            rho_matrix(&diag3(), 1.0, c(0.5, 0.0), &tol()),
            Err(Error::NonUnitArgument { .. })
        ));
    }

    #[test]
    fn l_membership_examples() {
        let h = CircleFunction::scalar(&[(0, ONE), (1, ONE)]);
        let f = CircleFunction::assemble(3, 1, &[(2, 0, &h)]).unwrap();
        assert!(l_subspace_member(&f, &diag3(), 1.0, &grid(), &tol()).unwrap());
        let e1 = crate::thematic::unit_column(3, 0);
        assert!(!l_subspace_member(&e1, &diag3(), 1.0, &grid(), &tol()).unwrap());
        let small = diag3().scale(c(0.5, 0.0));
        assert!(l_subspace_member(&e1, &small, 1.0, &grid(), &tol()).unwrap());
        let anti =
            CircleFunction::assemble(3, 1, &[(0, 0, &CircleFunction::monomial(ONE, -1))]).unwrap();
        assert!(matches!(
            l_subspace_member(&anti, &diag3(), 1.0, &grid(), &tol()),
            Err(Error::NotAnalytic { .. })
        ));
    }

    #[test]
    fn theta_range_examples() {
        let e3 = crate::thematic::unit_column(3, 2);
        let h = CircleFunction::scalar(&[(0, ONE), (1, ONE)]);
        let f = CircleFunction::assemble(3, 1, &[(2, 0, &h)]).unwrap();
        assert!(theta_range_member(&f, std::slice::from_ref(&e3), &grid(), &tol()).unwrap());
        let e1 = crate::thematic::unit_column(3, 0);
        assert!(!theta_range_member(&e1, &[e3], &grid(), &tol()).unwrap());
        let theta = crate::thematic::ThematicBlock::rotation(1, crate::thematic::Side::Right)
            .theta()
            .unwrap()
            .clone();
        let f = theta.multiply(&h).unwrap();
        assert!(theta_range_member(&f, &[theta], &grid(), &tol()).unwrap());
    }

    #[test]
    fn recovery_examples() {
        let r = recover_monotone_indices(&catalog::diag_z2_z6(), 1.0, &grid(), &tol()).unwrap();
        assert_eq!(r.indices, vec![6, 2]);
        assert_eq!(r.sum(), 8);
        let r = recover_monotone_indices(&CircleFunction::monomial(ONE, -3), 1.0, &grid(), &tol())
            .unwrap();
        assert_eq!(r.indices, vec![3]);
        let r =
            recover_monotone_indices(&diag_monomials(&[4, 4, 1]), 1.0, &grid(), &tol()).unwrap();
        assert_eq!(r.table.dims(), vec![9, 6, 4, 2, 0]);
        assert_eq!(r.indices, vec![4, 4, 1]);
        assert_eq!(
            r.groups,
            vec![
                IndexGroup {
                    value: 4,
                    multiplicity: 2
                },
                IndexGroup {
                    value: 1,
                    multiplicity: 1
                }
            ]
        );
    }

    #[test]
    fn recursion_rejects_non_formula_tables() {
        let mk = |d: &[usize]| MaximizingDimTable {
            level: 1.0,
            entries: d
                .iter()
                .enumerate()
                .map(|(kappa, &dim)| hankel::DimEntry {
                    kappa,
                    dim,
                    gap: None,
                })
                .collect(),
        };
        assert_eq!(
            recover_from_table(&mk(&[8, 6, 4, 3, 2, 1, 0])).unwrap(),
            vec![
                IndexGroup {
                    value: 6,
                    multiplicity: 1
                },
                IndexGroup {
                    value: 2,
                    multiplicity: 1
                }
            ]
        );
        assert!(recover_from_table(&mk(&[])).unwrap().is_empty());
        // differences 4, 0, 1 are not nonincreasing, so no index multiset fits
        assert!(matches!(
            recover_from_table(&mk(&[5, 1, 1, 0])),
            Err(Error::InconsistentTable(_))
        ));
        assert_eq!(
            recover_from_table(&mk(&[5, 0])).unwrap(),
            vec![IndexGroup {
                value: 1,
                multiplicity: 5
            }]
        );
    }

    #[test]
    fn dimension_formula_refutes_seven_one() {
        let phi = catalog::diag_z2_z6();
        let ok = verify_dimension_formula(&phi, 1.0, &[6, 2], &grid(), &tol()).unwrap();
        assert!(ok.consistent);
        assert_eq!(
            ok.entries.iter().map(|e| e.measured).collect::<Vec<_>>(),
            vec![8, 6, 4, 3, 2, 1, 0]
        );
        let bad = verify_dimension_formula(&phi, 1.0, &[7, 1], &grid(), &tol()).unwrap();
        assert_eq!(
            bad.first_mismatch,
            Some(DimensionCheck {
                kappa: 2,
                measured: 4,
                predicted: 5
            })
        );
        assert!(
            verify_dimension_formula(&phi, 1.0, &[2, 6], &grid(), &tol())
                .unwrap()
                .consistent
        );
        let analytic = CircleFunction::scalar(&[(0, ONE), (2, ONE)]);
        assert!(
            verify_dimension_formula(&analytic, 0.0, &[], &grid(), &tol())
                .unwrap()
                .consistent
        );
        assert!(
            verify_dimension_formula(&analytic, 1.0, &[], &grid(), &tol())
                .unwrap()
                .consistent
        );
    }

    #[test]
    fn iota_bound_on_diag_z2_z6_bundles() {
        let results: Vec<IotaBound> = catalog::diag_z2_z6_bundles()
            .iter()
            .map(|b| iota_bound_check(b, &grid(), &tol()).unwrap())
            .collect();
        assert_eq!(
            results.iter().map(|r| r.index).collect::<Vec<_>>(),
            vec![2, 1, 6]
        );
        assert!(results.iter().all(|r| r.holds && r.iota == 6));
        assert_eq!(
            results.iter().map(|r| r.attained).collect::<Vec<_>>(),
            vec![false, false, true]
        );
        let s = catalog::diag_monomial(&[1.0], &[4]).unwrap();
        let r = iota_bound_check(&s, &grid(), &tol()).unwrap();
        assert!(r.attained && r.iota == 4);
    }
}
