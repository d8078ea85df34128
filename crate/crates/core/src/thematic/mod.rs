//! Thematic matrix functions, lifted blocks and (partial) thematic factorizations.
//!
//! A thematic function of size `n` is a unitary-valued `V = (v | Θ̄)` whose first
//! column `v` and complement `Θ` are both inner and co-outer. Right blocks of a
//! factorization store `V` directly; left blocks store `Wᵗ`, so for a left block the
//! fields `v` and `theta` hold `w` and `Ξ`.

mod bundle;
pub mod catalog;
mod json;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circle_fn::{CircleFunction, GridSpec, ToleranceConfig};
use crate::error::{Error, Result};
use crate::linalg::{isometry_deviation, CMatrix, ONE, ZERO};

pub use bundle::{
    scalar_badly_approximable, BadlyApproximable, BundleReport, DiagEntry, FactorBundle,
    IndexReport, NuEntry,
};
pub use json::{BlockFile, BundleFile, DiagFile};

/// Largest block size for which the first-column minor check is run.
pub const MINOR_CHECK_MAX_SIZE: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// One named pass/fail line of a verification report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

impl Check {
    pub(crate) fn new(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            ok,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThematicReport {
    pub ok: bool,
    pub checks: Vec<Check>,
}

impl ThematicReport {
    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.ok).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThematicBlock {
    v: CircleFunction,
    /// `None` exactly when the block is `1 × 1`.
    theta: Option<CircleFunction>,
    side: Side,
}

impl ThematicBlock {
    pub fn new(v: CircleFunction, theta: Option<CircleFunction>, side: Side) -> Result<Self> {
        let n = v.rows();
        if v.cols() != 1 || n == 0 {
            return Err(Error::shape(
                "thematic block",
                format!("first column must be n x 1, got {}x{}", v.rows(), v.cols()),
            ));
        }
        match (&theta, n) {
            (None, 1) => {}
            (Some(t), _) if n > 1 && t.rows() == n && t.cols() == n - 1 => {}
            (Some(t), _) => {
                return Err(Error::shape(
                    "thematic block",
                    format!(
                        "complement must be {n}x{}, got {}x{}",
                        n.saturating_sub(1),
                        t.rows(),
                        t.cols()
                    ),
                ))
            }
            (None, _) => {
                return Err(Error::shape(
                    "thematic block",
                    format!("a {n}x{n} block needs a complement"),
                ))
            }
        }
        Ok(ThematicBlock { v, theta, side })
    }

    pub fn identity(n: usize, side: Side) -> Self {
        ThematicBlock::constant(&CMatrix::identity(n, n), side).expect("identity is unitary")
    }

    /// Constant block whose assembled matrix is `u`.
    pub fn constant(u: &CMatrix, side: Side) -> Result<Self> {
        let n = u.nrows();
        if n == 0 || u.ncols() != n {
            return Err(Error::shape(
                "constant block",
                format!("{}x{} is not square", u.nrows(), u.ncols()),
            ));
        }
        let dev = isometry_deviation(u);
        if dev > 1e-12 {
            return Err(Error::NotUnimodular { max_deviation: dev });
        }
        let v = CircleFunction::constant(u.columns(0, 1).into_owned());
        let theta =
            (n > 1).then(|| CircleFunction::constant(u.columns(1, n - 1).map(|z| z.conj())));
        ThematicBlock::new(v, theta, side)
    }

    /// The `2 × 2` family with a `z^p/√2` entry.
    ///
    /// Right: `v = (z^p, 1)/√2`, `Θ = (−1, z^p)/√2`.
    /// Left:  `w = (1, z^p)/√2`, `Ξ = (−z^p, 1)/√2`.
    pub fn rotation(p: u32, side: Side) -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let zp = |c: Complex64| CircleFunction::monomial(c, p as i64);
        let k = CircleFunction::monomial;
        let col = |a: CircleFunction, b: CircleFunction| {
            CircleFunction::from_entries(2, 1, &[a, b]).expect("two scalar entries")
        };
        let (v, theta) = match side {
            Side::Right => (col(zp(h), k(h, 0)), col(k(-h, 0), zp(h))),
            Side::Left => (col(k(h, 0), zp(h)), col(zp(-h), k(h, 0))),
        };
        ThematicBlock::new(v, Some(theta), side).expect("2x2 shapes")
    }

    pub fn size(&self) -> usize {
        self.v.rows()
    }

    pub fn v(&self) -> &CircleFunction {
        &self.v
    }

    pub fn theta(&self) -> Option<&CircleFunction> {
        self.theta.as_ref()
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// `(v | Θ̄)`: the thematic function itself (`V̆` for right blocks, `W̆ᵗ` for left).
    pub fn assembled(&self) -> CircleFunction {
        match &self.theta {
            None => self.v.clone(),
            Some(t) => self.v.hcat(&t.conj()).expect("rows agree by construction"),
        }
    }

    /// The factor as it enters the product: `V̆` for right blocks, `W̆` for left.
    pub fn factor(&self) -> CircleFunction {
        match self.side {
            Side::Right => self.assembled(),
            Side::Left => self.assembled().transpose(),
        }
    }

    /// Block of size `k ≥ n` with assembled matrix `V ⊕ I_{k−n}`.
    pub fn embed(&self, k: usize) -> Result<Self> {
        let n = self.size();
        if k < n {
            return Err(Error::shape(
                "embed",
                format!("cannot embed size {n} into {k}"),
            ));
        }
        if k == n {
            return Ok(self.clone());
        }
        let v = CircleFunction::assemble(k, 1, &[(0, 0, &self.v)])?;
        let tail = CircleFunction::identity(k - n);
        let theta = match &self.theta {
            Some(t) => t.direct_sum(&tail),
            None => CircleFunction::assemble(k, k - 1, &[(1, 0, &tail)])?,
        };
        ThematicBlock::new(v, Some(theta), self.side)
    }

    /// Block with assembled matrix `U·V` for a constant unitary `U`:
    /// `v ↦ Uv`, `Θ ↦ ŪΘ`.
    pub fn rotate(&self, u: &CMatrix) -> Result<Self> {
        let n = self.size();
        if u.nrows() != n || u.ncols() != n {
            return Err(Error::shape(
                "rotate",
                format!("{}x{} unitary for size {n}", u.nrows(), u.ncols()),
            ));
        }
        let v = CircleFunction::constant(u.clone()).multiply(&self.v)?;
        let theta = match &self.theta {
            Some(t) => Some(CircleFunction::constant(u.map(|z| z.conj())).multiply(t)?),
            None => None,
        };
        ThematicBlock::new(v, theta, self.side)
    }

    /// `Θ ↦ ΘQ` for a constant unitary `Q` of size `n − 1`.
    pub fn twist(&self, q: &CMatrix) -> Result<Self> {
        let Some(t) = &self.theta else {
            return Err(Error::shape("twist", "a 1x1 block has no complement"));
        };
        if q.nrows() != t.cols() || q.ncols() != t.cols() {
            return Err(Error::shape(
                "twist",
                format!(
                    "{}x{} unitary for complement width {}",
                    q.nrows(),
                    q.ncols(),
                    t.cols()
                ),
            ));
        }
        let theta = t.multiply(&CircleFunction::constant(q.clone()))?;
        ThematicBlock::new(self.v.clone(), Some(theta), self.side)
    }

    /// Unitarity, inner and co-outer certificates for `v` and `Θ`, and
    /// analyticity of the minors of `V` that involve the first column.
    pub fn verify(&self, grid: &GridSpec, tol: &ToleranceConfig) -> ThematicReport {
        let mut checks = Vec::new();
        let assembled = self.assembled();
        checks.push(match assembled.is_unitary_valued(grid, tol) {
            Ok(u) => Check::new(
                "unitary",
                u.ok,
                format!("max deviation {:.3e}", u.max_deviation),
            ),
            Err(e) => Check::new("unitary", false, e.to_string()),
        });
        let parts: Vec<(&str, &CircleFunction)> = match &self.theta {
            Some(t) => vec![("v", &self.v), ("theta", t)],
            None => vec![("v", &self.v)],
        };
        for (label, f) in &parts {
            checks.push(match f.is_inner(grid, tol) {
                Ok(r) => Check::new(
                    format!("{label} inner"),
                    r.ok,
                    match r.failure {
                        None => format!("isometry deviation {:.3e}", r.max_isometry_deviation),
                        Some(fail) => format!(
                            "{fail:?}: negative coefficient {:.3e}, isometry deviation {:.3e}",
                            r.max_negative_coefficient, r.max_isometry_deviation
                        ),
                    },
                ),
                Err(e) => Check::new(format!("{label} inner"), false, e.to_string()),
            });
            checks.push(match f.is_co_outer_polynomial(tol) {
                Ok(r) => Check::new(
                    format!("{label} co-outer"),
                    r.ok,
                    match r.common_root {
                        None => format!("no common zero among {} polynomials", r.polynomials),
                        Some([re, im]) => format!("common zero at {re:+.6}{im:+.6}i"),
                    },
                ),
                Err(e) => Check::new(format!("{label} co-outer"), false, e.to_string()),
            });
        }
        if self.size() <= MINOR_CHECK_MAX_SIZE && assembled.is_laurent() {
            let worst = first_column_minor_defect(&assembled);
            checks.push(Check::new(
                "first-column minors analytic",
                worst <= tol.coeff_tol,
                format!("largest negative coefficient {worst:.3e}"),
            ));
        }
        ThematicReport {
            ok: checks.iter().all(|c| c.ok),
            checks,
        }
    }
}

/// Largest negative-power coefficient over all minors of `f` that use column 0.
fn first_column_minor_defect(f: &CircleFunction) -> f64 {
    let n = f.rows();
    let mut worst: f64 = 0.0;
    for size in 1..=n {
        for rows in subsets(n, size) {
            for rest in subsets(n - 1, size - 1) {
                let cols: Vec<usize> = std::iter::once(0)
                    .chain(rest.iter().map(|c| c + 1))
                    .collect();
                for (k, c) in f.minor(&rows, &cols) {
                    if k < 0 {
                        worst = worst.max(c.norm());
                    }
                }
            }
        }
    }
    worst
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// `verify_thematic` as a free function.
pub fn verify_thematic(
    block: &ThematicBlock,
    grid: &GridSpec,
    tol: &ToleranceConfig,
) -> ThematicReport {
    block.verify(grid, tol)
}

/// `I_j ⊕ V̆` (right) or `I_j ⊕ W̆ᵗ` (left).
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedBlock {
    pub offset: usize,
    pub inner: ThematicBlock,
}

impl LiftedBlock {
    pub fn new(offset: usize, inner: ThematicBlock) -> Self {
        LiftedBlock { offset, inner }
    }

    pub fn size(&self) -> usize {
        self.offset + self.inner.size()
    }

    pub fn side(&self) -> Side {
        self.inner.side()
    }

    /// `I_j ⊕ (v | Θ̄)`.
    pub fn assembled(&self) -> CircleFunction {
        CircleFunction::identity(self.offset).direct_sum(&self.inner.assembled())
    }

    /// The adjoint of the factor as it enters the product: `V*` or `W*`.
    pub(crate) fn factor_adjoint(&self) -> CircleFunction {
        let inner = match self.side() {
            Side::Right => self.inner.assembled().adjoint(),
            // W = (Wᵗ)ᵗ, so W* is the entrywise conjugate of Wᵗ
            Side::Left => self.inner.assembled().conj(),
        };
        CircleFunction::identity(self.offset).direct_sum(&inner)
    }
}

pub fn lift(block: ThematicBlock, offset: usize) -> LiftedBlock {
    LiftedBlock::new(offset, block)
}

pub fn unit_column(n: usize, i: usize) -> CircleFunction {
    let mut m = CMatrix::from_element(n, 1, ZERO);
    m[(i, 0)] = ONE;
    CircleFunction::constant(m)
}
