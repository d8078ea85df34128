//! Ready-made factorizations: the three factorizations of `diag(z̄², z̄⁶)`,
//! diagonal monomial bundles, and randomized bundles built from rotation blocks.

use num_complex::Complex64;
use rand::Rng;

use super::{lift, DiagEntry, FactorBundle, LiftedBlock, Side, ThematicBlock};
use crate::circle_fn::CircleFunction;
use crate::error::{Error, Result};
use crate::linalg::{random_unitary, CMatrix, ONE, ZERO};

/// `diag(z̄², z̄⁶)`.
pub fn diag_z2_z6() -> CircleFunction {
    CircleFunction::monomial(ONE, -2).direct_sum(&CircleFunction::monomial(ONE, -6))
}

fn unit_diag(exps: &[i64]) -> Vec<DiagEntry> {
    exps.iter()
        .map(|&k| DiagEntry {
            t: 1.0,
            u: CircleFunction::monomial(ONE, -k),
        })
        .collect()
}

fn pair(first: ThematicBlock, side: Side) -> Vec<LiftedBlock> {
    vec![lift(first, 0), lift(ThematicBlock::identity(1, side), 1)]
}

/// The three factorizations of `diag(z̄², z̄⁶)` with indices `(2,6)`, `(1,7)`, `(6,2)`.
pub fn diag_z2_z6_bundles() -> Vec<FactorBundle> {
    let swap = CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
    let build = |left: ThematicBlock, right: ThematicBlock, exps: &[i64]| {
        FactorBundle::new(
            2,
            2,
            pair(left, Side::Left),
            unit_diag(exps),
            pair(right, Side::Right),
            None,
        )
        .expect("2x2 bundle shapes")
    };
    vec![
        build(
            ThematicBlock::identity(2, Side::Left),
            ThematicBlock::identity(2, Side::Right),
            &[2, 6],
        ),
        build(
            ThematicBlock::rotation(5, Side::Left),
            ThematicBlock::rotation(1, Side::Right),
            &[1, 7],
        ),
        build(
            ThematicBlock::constant(&swap, Side::Left).expect("permutation"),
            ThematicBlock::constant(&swap, Side::Right).expect("permutation"),
            &[6, 2],
        ),
    ]
}

fn check_diag_data(coeffs: &[f64], exps: &[i64]) -> Result<()> {
    if coeffs.is_empty() || coeffs.len() != exps.len() {
        return Err(Error::InvalidConfig(format!(
            "{} coefficients for {} exponents",
            coeffs.len(),
            exps.len()
        )));
    }
    if let Some(c) = coeffs.iter().find(|c| !(c.is_finite() && **c > 0.0)) {
        return Err(Error::InvalidConfig(format!(
            "coefficient {c} is not positive"
        )));
    }
    if let Some(m) = exps.iter().find(|m| **m < 1) {
        return Err(Error::InvalidConfig(format!(
            "exponent {m} is not positive"
        )));
    }
    if let Some(w) = coeffs.windows(2).find(|w| w[1] > w[0]) {
        return Err(Error::NotNonincreasing(format!(
            "{} follows {}",
            w[1], w[0]
        )));
    }
    Ok(())
}

fn identity_chain(size: usize, r: usize, side: Side) -> Vec<LiftedBlock> {
    (0..r)
        .map(|j| lift(ThematicBlock::identity(size - j, side), j))
        .collect()
}

/// `diag(c_j z̄^{m_j})` with identity blocks.
pub fn diag_monomial(coeffs: &[f64], exps: &[i64]) -> Result<FactorBundle> {
    check_diag_data(coeffs, exps)?;
    let p = coeffs.len();
    let diag = coeffs
        .iter()
        .zip(exps)
        .map(|(&t, &k)| DiagEntry {
            t,
            u: CircleFunction::monomial(ONE, -k),
        })
        .collect();
    FactorBundle::new(
        p,
        p,
        identity_chain(p, p, Side::Left),
        diag,
        identity_chain(p, p, Side::Right),
        None,
    )
}

/// `diag(c_j z̄^{m_j}) ⊕ Ψ` as a partial bundle with identity blocks.
pub fn diag_monomial_partial(
    coeffs: &[f64],
    exps: &[i64],
    residual: &CircleFunction,
) -> Result<FactorBundle> {
    check_diag_data(coeffs, exps)?;
    let r = coeffs.len();
    let (m, n) = (r + residual.rows(), r + residual.cols());
    let diag = coeffs
        .iter()
        .zip(exps)
        .map(|(&t, &k)| DiagEntry {
            t,
            u: CircleFunction::monomial(ONE, -k),
        })
        .collect();
    FactorBundle::new(
        m,
        n,
        identity_chain(m, r, Side::Left),
        diag,
        identity_chain(n, r, Side::Right),
        Some(residual.clone()),
    )
}

/// Shape and diagonal data for [`random_bundle`]. Slot `j` gets `u_j = e^{iα}·z̄^{k_j}`,
/// so `ind T_{u_j} = k_j`.
#[derive(Debug, Clone)]
pub struct BundleRecipe {
    pub m: usize,
    pub n: usize,
    pub levels: Vec<f64>,
    pub indices: Vec<i64>,
    pub residual: Option<CircleFunction>,
    /// Largest `p` used in the `z^p` rotation blocks.
    pub max_rotation_power: u32,
}

fn random_block<R: Rng + ?Sized>(
    size: usize,
    side: Side,
    max_power: u32,
    rng: &mut R,
) -> Result<ThematicBlock> {
    if size == 1 {
        return Ok(ThematicBlock::identity(1, side));
    }
    let p = rng.random_range(1..=max_power.max(1));
    ThematicBlock::rotation(p, side)
        .embed(size)?
        .rotate(&random_unitary(size, rng))
}

/// Bundle whose blocks are rotation blocks embedded in identities and multiplied by
/// random constant unitaries.
pub fn random_bundle<R: Rng + ?Sized>(recipe: &BundleRecipe, rng: &mut R) -> Result<FactorBundle> {
    let r = recipe.levels.len();
    if recipe.indices.len() != r {
        return Err(Error::InvalidConfig(format!(
            "{r} levels for {} indices",
            recipe.indices.len()
        )));
    }
    if r == 0 || r > recipe.m.min(recipe.n) {
        return Err(Error::InvalidConfig(format!(
            "r = {r} does not fit {}x{}",
            recipe.m, recipe.n
        )));
    }
    let mut left = Vec::with_capacity(r);
    let mut right = Vec::with_capacity(r);
    for j in 0..r {
        left.push(lift(
            random_block(recipe.m - j, Side::Left, recipe.max_rotation_power, rng)?,
            j,
        ));
        right.push(lift(
            random_block(recipe.n - j, Side::Right, recipe.max_rotation_power, rng)?,
            j,
        ));
    }
    let diag = recipe
        .levels
        .iter()
        .zip(&recipe.indices)
        .map(|(&t, &k)| DiagEntry {
            t,
            u: CircleFunction::monomial(
                Complex64::cis(rng.random_range(0.0..std::f64::consts::TAU)),
                -k,
            ),
        })
        .collect();
    FactorBundle::new(
        recipe.m,
        recipe.n,
        left,
        diag,
        right,
        recipe.residual.clone(),
    )
}

/// `scale·(A₋₁z̄ + A₀ + A₁z)/3` with each `A_k` a `p × q` corner of a random unitary,
/// so the sup norm is at most `scale`.
pub fn random_residual<R: Rng + ?Sized>(
    p: usize,
    q: usize,
    scale: f64,
    rng: &mut R,
) -> CircleFunction {
    let size = p.max(q);
    let terms = [-1i64, 0, 1]
        .into_iter()
        .map(|k| {
            let a = random_unitary(size, rng).view((0, 0), (p, q)).into_owned()
                * Complex64::from(scale / 3.0);
            (k, a)
        })
        .collect();
    CircleFunction::laurent(p, q, terms).expect("consistent shapes")
}
