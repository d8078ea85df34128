use rayon::prelude::*;
use serde::Serialize;

use super::{Check, LiftedBlock, Side};
use crate::circle_fn::{toeplitz_index, CircleFunction, GridSpec, ToleranceConfig};
use crate::error::{Error, Result};
use crate::hankel;
use crate::linalg::{isometry_deviation, CMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct DiagEntry {
    pub t: f64,
    pub u: CircleFunction,
}

/// `Φ = W₀*…W*_{r−1} · D · V*_{r−1}…V₀*` with `D = diag(t_j u_j) ⊕ Ψ`, zero-padded to
/// `m × n`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorBundle {
    m: usize,
    n: usize,
    left: Vec<LiftedBlock>,
    diag: Vec<DiagEntry>,
    right: Vec<LiftedBlock>,
    residual: Option<CircleFunction>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BundleReport {
    pub ok: bool,
    pub checks: Vec<Check>,
    /// `max_ζ ‖compose(ζ) − target(ζ)‖`, when composition succeeded.
    pub recomposition_deviation: Option<f64>,
}

impl BundleReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NuEntry {
    pub t: f64,
    pub nu: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexReport {
    /// `k_j = ind T_{u_j}` for the slots with `t_j > 0`.
    pub indices: Vec<i64>,
    pub values: Vec<f64>,
    /// `ν_t = Σ_{t_j = t} k_j`, grouping `t` values within relative `sv_tol`.
    pub nu: Vec<NuEntry>,
    pub monotone: bool,
    pub iota: Option<usize>,
    /// `k₀ ≤ ι(H_Φ)` for the composed symbol.
    pub iota_bound_ok: Option<bool>,
}

impl FactorBundle {
    pub fn new(
        m: usize,
        n: usize,
        left: Vec<LiftedBlock>,
        diag: Vec<DiagEntry>,
        right: Vec<LiftedBlock>,
        residual: Option<CircleFunction>,
    ) -> Result<Self> {
        let r = diag.len();
        let bad = |detail: String| Err(Error::shape("factor bundle", detail));
        if r == 0 || r > m.min(n) {
            return bad(format!(
                "need 1 ≤ r ≤ min(m, n) = {}, got r = {r}",
                m.min(n)
            ));
        }
        if left.len() != r || right.len() != r {
            return bad(format!(
                "r = {r} diagonal slots but {} left and {} right blocks",
                left.len(),
                right.len()
            ));
        }
        for (side, blocks, size) in [(Side::Left, &left, m), (Side::Right, &right, n)] {
            for (j, b) in blocks.iter().enumerate() {
                if b.offset != j || b.size() != size || b.side() != side {
                    return bad(format!(
                        "{side:?} block {j}: offset {}, size {}, side {:?}; expected offset {j}, size {size}, side {side:?}",
                        b.offset,
                        b.size(),
                        b.side()
                    ));
                }
            }
        }
        if let Some(j) = diag.iter().position(|d| !d.u.is_scalar()) {
            return bad(format!("u_{j} is not scalar"));
        }
        if let Some(psi) = &residual {
            if psi.rows() != m - r || psi.cols() != n - r {
                return bad(format!(
                    "residual is {}x{}, expected {}x{}",
                    psi.rows(),
                    psi.cols(),
                    m - r,
                    n - r
                ));
            }
        }
        Ok(FactorBundle {
            m,
            n,
            left,
            diag,
            right,
            residual,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.diag.len()
    }

    pub fn left(&self) -> &[LiftedBlock] {
        &self.left
    }

    pub fn right(&self) -> &[LiftedBlock] {
        &self.right
    }

    pub fn diag(&self) -> &[DiagEntry] {
        &self.diag
    }

    pub fn residual(&self) -> Option<&CircleFunction> {
        self.residual.as_ref()
    }

    /// The residual, reading an absent one as zero; `None` for a `0 × k` corner.
    pub fn residual_or_zero(&self) -> Option<CircleFunction> {
        let (p, q) = (self.m - self.r(), self.n - self.r());
        if p == 0 || q == 0 {
            return None;
        }
        Some(
            self.residual
                .clone()
                .unwrap_or_else(|| CircleFunction::zeros(p, q)),
        )
    }

    /// `Θ₀, Θ₁, …, Θ_{r−1}` of the right blocks, stopping at the first `1 × 1` block.
    pub fn theta_chain(&self) -> Vec<CircleFunction> {
        self.right
            .iter()
            .map_while(|b| b.inner.theta().cloned())
            .collect()
    }

    /// `Ξ₀, …, Ξ_{r−1}` of the left blocks.
    pub fn xi_chain(&self) -> Vec<CircleFunction> {
        self.left
            .iter()
            .map_while(|b| b.inner.theta().cloned())
            .collect()
    }

    /// Structural invariants checked before composition.
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (j, d) in self.diag.iter().enumerate() {
            if !(d.t.is_finite() && d.t >= 0.0) {
                out.push(format!("t_{j} = {} is not a nonnegative real", d.t));
            }
        }
        for j in 1..self.diag.len() {
            if self.diag[j].t > self.diag[j - 1].t {
                out.push(format!(
                    "t_{j} = {} exceeds t_{} = {}",
                    self.diag[j].t,
                    j - 1,
                    self.diag[j - 1].t
                ));
            }
        }
        out
    }

    /// The middle factor `diag(t_j u_j) ⊕ Ψ` as an `m × n` function.
    pub fn diagonal(&self) -> Result<CircleFunction> {
        let scaled: Vec<CircleFunction> = self.diag.iter().map(|d| d.u.scale(d.t.into())).collect();
        let r = self.r();
        let mut pieces: Vec<(usize, usize, &CircleFunction)> =
            scaled.iter().enumerate().map(|(j, f)| (j, j, f)).collect();
        if let Some(psi) = &self.residual {
            if psi.rows() > 0 && psi.cols() > 0 {
                pieces.push((r, r, psi));
            }
        }
        CircleFunction::assemble(self.m, self.n, &pieces)
    }

    pub fn compose(&self) -> Result<CircleFunction> {
        let violations = self.invariant_violations();
        if !violations.is_empty() {
            return Err(Error::InvariantViolation(violations));
        }
        let mut chain: Vec<CircleFunction> = self.left.iter().map(|b| b.factor_adjoint()).collect();
        chain.push(self.diagonal()?);
        chain.extend(self.right.iter().rev().map(|b| b.factor_adjoint()));
        CircleFunction::product(&chain)
    }

    /// Checks (a) blocks thematic, (b) recomposition, (c) ordering, (d) indices,
    /// (e) residual bounds.
    pub fn verify(
        &self,
        target: &CircleFunction,
        grid: &GridSpec,
        tol: &ToleranceConfig,
    ) -> BundleReport {
        let block_checks: Vec<(String, super::ThematicReport)> = self
            .left
            .par_iter()
            .enumerate()
            .map(|(j, b)| (format!("W_{j}"), b.inner.verify(grid, tol)))
            .chain(
                self.right
                    .par_iter()
                    .enumerate()
                    .map(|(j, b)| (format!("V_{j}"), b.inner.verify(grid, tol))),
            )
            .collect();
        let failed: Vec<String> = block_checks
            .iter()
            .flat_map(|(name, rep)| {
                rep.failures()
                    .into_iter()
                    .map(move |c| format!("{name}: {} ({})", c.name, c.detail))
            })
            .collect();
        let mut checks = vec![Check::new(
            "blocks",
            failed.is_empty(),
            if failed.is_empty() {
                format!("{} blocks thematic", block_checks.len())
            } else {
                failed.join("; ")
            },
        )];

        let mut recomposition_deviation = None;
        checks.push(match self.compose() {
            Err(e) => Check::new("recomposition", false, e.to_string()),
            Ok(phi) => match phi.max_deviation(target, grid) {
                Err(e) => Check::new("recomposition", false, e.to_string()),
                Ok(dev) => {
                    recomposition_deviation = Some(dev);
                    let bound = tol.eq_tol * target.sup_norm(grid).max(1.0);
                    Check::new(
                        "recomposition",
                        dev <= bound,
                        format!("max deviation {dev:.3e} (bound {bound:.1e})"),
                    )
                }
            },
        });

        let order = self.invariant_violations();
        checks.push(Check::new(
            "ordering",
            order.is_empty(),
            if order.is_empty() {
                "t nonincreasing".to_string()
            } else {
                order.join("; ")
            },
        ));

        let mut index_problems = Vec::new();
        for (j, d) in self.diag.iter().enumerate() {
            if d.t <= 0.0 {
                continue;
            }
            match toeplitz_index(&d.u, grid, tol) {
                Ok(k) if k > 0 => {}
                Ok(k) => index_problems.push(format!("u_{j} has index {k}")),
                Err(e) => index_problems.push(format!("u_{j}: {e}")),
            }
        }
        checks.push(Check::new(
            "indices",
            index_problems.is_empty(),
            if index_problems.is_empty() {
                "every u_j unimodular with positive index".to_string()
            } else {
                index_problems.join("; ")
            },
        ));

        checks.push(self.residual_check(grid, tol));
        BundleReport {
            ok: checks.iter().all(|c| c.ok),
            checks,
            recomposition_deviation,
        }
    }

    fn residual_check(&self, grid: &GridSpec, tol: &ToleranceConfig) -> Check {
        let Some(psi) = self.residual_or_zero() else {
            return Check::new("residual", true, "no residual block");
        };
        let t = self.diag[self.r() - 1].t;
        let sup = psi.sup_norm(grid);
        let h = match hankel::hankel_norm(&psi, None, grid, tol) {
            Ok(h) => h.value,
            Err(e) => return Check::new("residual", false, e.to_string()),
        };
        let sup_ok = sup <= t * (1.0 + tol.eq_tol);
        let hankel_ok = h < t * (1.0 - tol.sv_tol);
        Check::new(
            "residual",
            sup_ok && hankel_ok,
            format!("‖Ψ‖∞ = {sup:.6} (≤ {t}: {sup_ok}), ‖H_Ψ‖ = {h:.6} (< {t}: {hankel_ok})"),
        )
    }

    pub fn indices(&self, grid: &GridSpec, tol: &ToleranceConfig) -> Result<IndexReport> {
        let mut indices = Vec::new();
        let mut values = Vec::new();
        for d in self.diag.iter().filter(|d| d.t > 0.0) {
            indices.push(toeplitz_index(&d.u, grid, tol)?);
            values.push(d.t);
        }
        let mut nu: Vec<NuEntry> = Vec::new();
        let mut monotone = true;
        let mut last_in_group: Option<i64> = None;
        for (&t, &k) in values.iter().zip(&indices) {
            match nu.last_mut() {
                Some(g) if (g.t - t).abs() <= tol.sv_tol * g.t => {
                    g.nu += k;
                    if last_in_group.is_some_and(|prev| k > prev) {
                        monotone = false;
                    }
                }
                _ => nu.push(NuEntry { t, nu: k }),
            }
            last_in_group = Some(k);
        }
        let (iota, iota_bound_ok) = match indices.first() {
            Some(&k0) => {
                let i = hankel::iota(&self.compose()?, grid, tol)?;
                (Some(i.value), Some(k0 <= i.value as i64))
            }
            None => (None, None),
        };
        Ok(IndexReport {
            indices,
            values,
            nu,
            monotone,
            iota,
            iota_bound_ok,
        })
    }

    /// Replaces `Θ_{r−1}` by `Θ_{r−1}Q` and `Ξ_{r−1}` by `Ξ_{r−1}P`; the residual becomes
    /// `P*ΨQ̄` so that the composed function is unchanged.
    pub fn twist_last(&self, p: &CMatrix, q: &CMatrix) -> Result<FactorBundle> {
        let psi = self
            .residual_or_zero()
            .ok_or_else(|| Error::shape("twist_last", "bundle has no residual block"))?;
        for (name, u) in [("P", p), ("Q", q)] {
            let dev = isometry_deviation(u);
            if !u.is_square() || dev > 1e-10 {
                return Err(Error::InvalidConfig(format!(
                    "{name} is not unitary (deviation {dev:.3e})"
                )));
            }
        }
        let r = self.r();
        let mut left = self.left.clone();
        let mut right = self.right.clone();
        left[r - 1].inner = left[r - 1].inner.twist(p)?;
        right[r - 1].inner = right[r - 1].inner.twist(q)?;
        let new_psi = CircleFunction::constant(p.adjoint())
            .multiply(&psi)?
            .multiply(&CircleFunction::constant(q.map(|z| z.conj())))?;
        FactorBundle::new(
            self.m,
            self.n,
            left,
            self.diag.clone(),
            right,
            Some(new_psi),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BadlyApproximable {
    pub ok: bool,
    pub modulus: f64,
    pub modulus_deviation: f64,
    pub index: Option<i64>,
    pub certificate: String,
}

/// A continuous scalar `φ` is badly approximable iff `|φ|` is constant and
/// `ind T_{φ/|φ|} > 0`.
pub fn scalar_badly_approximable(
    phi: &CircleFunction,
    grid: &GridSpec,
    tol: &ToleranceConfig,
) -> Result<BadlyApproximable> {
    if !phi.is_scalar() {
        return Err(Error::shape(
            "scalar_badly_approximable",
            format!(
                "expected a scalar symbol, got {}x{}",
                phi.rows(),
                phi.cols()
            ),
        ));
    }
    let moduli: Vec<f64> = grid
        .angles()
        .map(|a| phi.eval_angle(a)[(0, 0)].norm())
        .collect();
    let hi = moduli.iter().copied().fold(0.0, f64::max);
    let lo = moduli.iter().copied().fold(f64::INFINITY, f64::min);
    let modulus = 0.5 * (hi + lo);
    let modulus_deviation = 0.5 * (hi - lo);
    if modulus <= tol.coeff_tol {
        return Ok(BadlyApproximable {
            ok: false,
            modulus,
            modulus_deviation,
            index: None,
            certificate: "φ vanishes on the circle".into(),
        });
    }
    if modulus_deviation > tol.eq_tol * modulus {
        return Ok(BadlyApproximable {
            ok: false,
            modulus,
            modulus_deviation,
            index: None,
            certificate: format!("|φ| ranges over [{lo:.6}, {hi:.6}]; not of constant modulus"),
        });
    }
    let k = toeplitz_index(&phi.scale((1.0 / modulus).into()), grid, tol)?;
    Ok(BadlyApproximable {
        ok: k > 0,
        modulus,
        modulus_deviation,
        index: Some(k),
        certificate: if k > 0 {
            format!("|φ| = {modulus:.6} constant and ind T_(φ/|φ|) = {k} > 0")
        } else {
            format!("|φ| constant but ind T_(φ/|φ|) = {k} ≤ 0")
        },
    })
}
