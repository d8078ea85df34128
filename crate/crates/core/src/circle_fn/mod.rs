//! Matrix-valued functions on the unit circle.
//!
//! A [`CircleFunction`] is either a matrix Laurent polynomial `Σ C_k z^k` or a
//! rational function `N(z) / q(z)` where `N` is a matrix Laurent polynomial and
//! `q` a scalar polynomial with no zeros on the circle. Both forms are closed
//! under the pointwise algebra used by factorizations (products, adjoints,
//! transposes, entrywise conjugates, direct sums).

mod config;
mod json;
mod predicates;
mod winding;

use std::collections::BTreeMap;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::linalg::{spectral_norm, CMatrix, ONE, ZERO};
use crate::poly::Poly;

pub use config::{GridSpec, ToleranceConfig};
pub use json::SymbolFile;
pub use predicates::{CoOuterCheck, InnerCheck, InnerFailure, UnitaryCheck};
pub use winding::{toeplitz_index, winding_number};

/// Smallest admissible `|q(ζ)|` on the circle.
pub const DENOMINATOR_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    Laurent,
    Rational,
}

type Terms = BTreeMap<i64, CMatrix>;

#[derive(Debug, Clone, PartialEq)]
pub struct CircleFunction {
    rows: usize,
    cols: usize,
    terms: Terms,
    /// `None` for Laurent polynomials. Otherwise normalized so that `q(0) ≠ 0`.
    denominator: Option<Poly>,
}

impl CircleFunction {
    /// Matrix Laurent polynomial from `(power, coefficient)` pairs.
    pub fn laurent(rows: usize, cols: usize, terms: Vec<(i64, CMatrix)>) -> Result<Self> {
        let terms = collect_terms(rows, cols, terms)?;
        Ok(CircleFunction {
            rows,
            cols,
            terms,
            denominator: None,
        })
    }

    /// `numerator(z) / denominator(z)` with a scalar Laurent denominator.
    pub fn rational(
        rows: usize,
        cols: usize,
        numerator: Vec<(i64, CMatrix)>,
        denominator: Vec<(i64, Complex64)>,
    ) -> Result<Self> {
        let numerator = collect_terms(rows, cols, numerator)?;
        let mut den: BTreeMap<i64, Complex64> = BTreeMap::new();
        for (k, c) in denominator {
            if den.insert(k, c).is_some() {
                return Err(Error::InvalidSymbol(format!(
                    "duplicate denominator power {k}"
                )));
            }
        }
        den.retain(|_, c| *c != ZERO);
        let Some(&low) = den.keys().next() else {
            return Err(Error::InvalidSymbol(
                "denominator is identically zero".into(),
            ));
        };
        let high = *den.keys().next_back().unwrap();
        // q(z) = z^low · p(z) with p(0) ≠ 0; move z^low into the numerator
        let p = Poly::new(
            (low..=high)
                .map(|k| den.get(&k).copied().unwrap_or(ZERO))
                .collect(),
        );
        let terms = shift_terms(&numerator, -low);
        Self::from_parts(rows, cols, terms, p)
    }

    fn from_parts(rows: usize, cols: usize, terms: Terms, p: Poly) -> Result<Self> {
        if p.degree() == Some(0) {
            let scale = ONE / p.coeffs()[0];
            let terms = terms.into_iter().map(|(k, m)| (k, m * scale)).collect();
            return Ok(CircleFunction {
                rows,
                cols,
                terms,
                denominator: None,
            });
        }
        let grid = GridSpec::default();
        let min_q = grid
            .angles()
            .map(|a| p.eval(Complex64::cis(a)).norm())
            .fold(f64::INFINITY, f64::min);
        if min_q <= DENOMINATOR_FLOOR {
            return Err(Error::DenominatorNearZero { modulus: min_q });
        }
        Ok(CircleFunction {
            rows,
            cols,
            terms,
            denominator: Some(p),
        })
    }

    pub fn constant(m: CMatrix) -> Self {
        let (rows, cols) = m.shape();
        CircleFunction::laurent(rows, cols, vec![(0, m)]).expect("shape is consistent")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CircleFunction {
            rows,
            cols,
            terms: Terms::new(),
            denominator: None,
        }
    }

    pub fn identity(n: usize) -> Self {
        if n == 0 {
            return CircleFunction::zeros(0, 0);
        }
        CircleFunction::constant(CMatrix::identity(n, n))
    }

    /// Scalar Laurent polynomial `Σ c_k z^k`.
    pub fn scalar(terms: &[(i64, Complex64)]) -> Self {
        let mut acc: Terms = Terms::new();
        for &(k, c) in terms {
            *acc.entry(k).or_insert_with(|| CMatrix::zeros(1, 1)) += CMatrix::from_element(1, 1, c);
        }
        acc.retain(|_, m| !is_exact_zero(m));
        CircleFunction {
            rows: 1,
            cols: 1,
            terms: acc,
            denominator: None,
        }
    }

    /// Scalar monomial `c·z^k`.
    pub fn monomial(c: Complex64, k: i64) -> Self {
        CircleFunction::scalar(&[(k, c)])
    }

    /// Scalar rational function with Laurent numerator and denominator.
    pub fn scalar_rational(num: &[(i64, Complex64)], den: &[(i64, Complex64)]) -> Result<Self> {
        let numerator = num
            .iter()
            .map(|&(k, c)| (k, CMatrix::from_element(1, 1, c)))
            .collect();
        CircleFunction::rational(1, 1, numerator, den.to_vec())
    }

    /// Blaschke factor `(z − a)/(1 − ā z)` for `|a| < 1`.
    pub fn blaschke(a: Complex64) -> Result<Self> {
        if a.norm() >= 1.0 {
            return Err(Error::InvalidSymbol(format!(
                "Blaschke zero {a} must lie in the open disk"
            )));
        }
        CircleFunction::scalar_rational(&[(0, -a), (1, ONE)], &[(0, ONE), (1, -a.conj())])
    }

    /// Matrix built from scalar entries (row-major).
    pub fn from_entries(rows: usize, cols: usize, entries: &[CircleFunction]) -> Result<Self> {
        if entries.len() != rows * cols || rows == 0 || cols == 0 {
            return Err(Error::shape(
                "from_entries",
                format!("{} entries for a {rows}x{cols} matrix", entries.len()),
            ));
        }
        let pieces: Vec<(usize, usize, &CircleFunction)> = entries
            .iter()
            .enumerate()
            .map(|(idx, e)| (idx / cols, idx % cols, e))
            .collect();
        if entries.iter().any(|e| !e.is_scalar()) {
            return Err(Error::shape("from_entries", "entries must be scalar"));
        }
        CircleFunction::assemble(rows, cols, &pieces)
    }

    /// Places each `(row, col, block)` into a `rows × cols` zero function.
    /// Rational pieces are brought over a common denominator.
    pub fn assemble(
        rows: usize,
        cols: usize,
        pieces: &[(usize, usize, &CircleFunction)],
    ) -> Result<Self> {
        for (r0, c0, b) in pieces {
            if r0 + b.rows > rows || c0 + b.cols > cols {
                return Err(Error::shape(
                    "assemble",
                    format!(
                        "{}x{} block at ({r0},{c0}) overflows {rows}x{cols}",
                        b.rows, b.cols
                    ),
                ));
            }
        }
        let mut dens: Vec<&Poly> = Vec::new();
        for (_, _, b) in pieces {
            if let Some(d) = &b.denominator {
                if !dens.contains(&d) {
                    dens.push(d);
                }
            }
        }
        let common = dens.iter().fold(Poly::constant(ONE), |acc, d| acc.mul(d));
        let mut terms = Terms::new();
        for (r0, c0, b) in pieces {
            let factor = match &b.denominator {
                None => common.clone(),
                Some(d) => dens
                    .iter()
                    .filter(|o| **o != d)
                    .fold(Poly::constant(ONE), |acc, o| acc.mul(o)),
            };
            for (k, m) in mul_terms_poly(&b.terms, &factor) {
                let slot = terms.entry(k).or_insert_with(|| CMatrix::zeros(rows, cols));
                let mut view = slot.view_mut((*r0, *c0), (b.rows, b.cols));
                view += &m;
            }
        }
        terms.retain(|_, m| !is_exact_zero(m));
        if dens.is_empty() {
            Ok(CircleFunction {
                rows,
                cols,
                terms,
                denominator: None,
            })
        } else {
            Self::from_parts(rows, cols, terms, common)
        }
    }

    /// Horizontal concatenation `(self | other)`.
    pub fn hcat(&self, other: &CircleFunction) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::shape(
                "hcat",
                format!("{} rows vs {} rows", self.rows, other.rows),
            ));
        }
        CircleFunction::assemble(
            self.rows,
            self.cols + other.cols,
            &[(0, 0, self), (0, self.cols, other)],
        )
    }

    /// Block diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &CircleFunction) -> Self {
        CircleFunction::assemble(
            self.rows + other.rows,
            self.cols + other.cols,
            &[(0, 0, self), (self.rows, self.cols, other)],
        )
        .expect("direct sum shapes always fit")
    }

    /// Columns `start..start+count`.
    pub fn columns(&self, start: usize, count: usize) -> Result<Self> {
        if start + count > self.cols || count == 0 {
            return Err(Error::shape(
                "columns",
                format!("columns {start}..{} of {}", start + count, self.cols),
            ));
        }
        let terms = self
            .terms
            .iter()
            .map(|(k, m)| (*k, m.columns(start, count).into_owned()))
            .filter(|(_, m)| !is_exact_zero(m))
            .collect();
        Ok(CircleFunction {
            rows: self.rows,
            cols: count,
            terms,
            denominator: self.denominator.clone(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_scalar(&self) -> bool {
        self.rows == 1 && self.cols == 1
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn kind(&self) -> SymbolKind {
        if self.denominator.is_some() {
            SymbolKind::Rational
        } else {
            SymbolKind::Laurent
        }
    }

    pub fn is_laurent(&self) -> bool {
        self.denominator.is_none()
    }

    /// Numerator coefficients keyed by power.
    pub fn terms(&self) -> &BTreeMap<i64, CMatrix> {
        &self.terms
    }

    /// Normalized denominator polynomial (`q(0) ≠ 0`), if rational.
    pub fn denominator(&self) -> Option<&Poly> {
        self.denominator.as_ref()
    }

    /// Largest `d > 0` such that the numerator term at `z^{-d}` has norm above `floor`
    /// (0 when there is none). For Laurent symbols this is the exact negative degree.
    pub fn negative_degree(&self, floor: f64) -> usize {
        self.terms
            .iter()
            .filter(|(k, m)| **k < 0 && spectral_norm(m) > floor)
            .map(|(k, _)| (-k) as usize)
            .max()
            .unwrap_or(0)
    }

    /// Largest absolute power appearing in the numerator.
    pub fn max_abs_power(&self) -> usize {
        self.terms
            .keys()
            .map(|k| k.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Evaluates at a unit-modulus point with the default tolerance.
    pub fn evaluate(&self, zeta: Complex64) -> Result<CMatrix> {
        self.evaluate_with(zeta, &ToleranceConfig::default())
    }

    pub fn evaluate_with(&self, zeta: Complex64, tol: &ToleranceConfig) -> Result<CMatrix> {
        let modulus = zeta.norm();
        if (modulus - 1.0).abs() > tol.eq_tol {
            return Err(Error::NonUnitArgument {
                re: zeta.re,
                im: zeta.im,
                modulus,
            });
        }
        self.eval_point(zeta)
    }

    /// Evaluation at an arbitrary nonzero point (used for Cauchy estimates off the circle).
    pub(crate) fn eval_point(&self, z: Complex64) -> Result<CMatrix> {
        let num = self
            .terms
            .iter()
            .fold(CMatrix::zeros(self.rows, self.cols), |acc, (k, m)| {
                acc + m * z.powi(*k as i32)
            });
        match &self.denominator {
            None => Ok(num),
            Some(p) => {
                let q = p.eval(z);
                if q.norm() < DENOMINATOR_FLOOR {
                    return Err(Error::DenominatorNearZero { modulus: q.norm() });
                }
                Ok(num / q)
            }
        }
    }

    /// Evaluation at `exp(iθ)`; exact phases avoid accumulating powers.
    pub fn eval_angle(&self, theta: f64) -> CMatrix {
        let num = self
            .terms
            .iter()
            .fold(CMatrix::zeros(self.rows, self.cols), |acc, (k, m)| {
                acc + m * Complex64::cis(*k as f64 * theta)
            });
        match &self.denominator {
            None => num,
            Some(p) => num / p.eval(Complex64::cis(theta)),
        }
    }

    /// Values at every grid point.
    pub fn sample(&self, grid: &GridSpec) -> Vec<CMatrix> {
        grid.angles().map(|a| self.eval_angle(a)).collect()
    }

    /// `max_ζ ‖f(ζ)‖₂` over the grid.
    pub fn sup_norm(&self, grid: &GridSpec) -> f64 {
        grid.angles()
            .map(|a| spectral_norm(&self.eval_angle(a)))
            .fold(0.0, f64::max)
    }

    /// Fourier coefficients `f̂(k)` for `k_min ≤ k ≤ k_max`.
    ///
    /// Laurent symbols return their stored coefficients. Rational symbols are
    /// sampled and transformed; the aliased tail is bounded through Cauchy
    /// estimates on circles inside the annulus of analyticity, and the call
    /// fails with [`Error::GridTooCoarse`] when that bound exceeds `coeff_tol`.
    pub fn fourier_coefficients(
        &self,
        k_min: i64,
        k_max: i64,
        grid: &GridSpec,
        tol: &ToleranceConfig,
    ) -> Result<BTreeMap<i64, CMatrix>> {
        if k_max < k_min {
            return Err(Error::InvalidConfig(format!(
                "empty coefficient range [{k_min}, {k_max}]"
            )));
        }
        grid.require_degree((k_max - k_min) as usize)?;
        let zero = CMatrix::zeros(self.rows, self.cols);
        let Some(p) = &self.denominator else {
            return Ok((k_min..=k_max)
                .map(|k| {
                    (
                        k,
                        self.terms.get(&k).cloned().unwrap_or_else(|| zero.clone()),
                    )
                })
                .collect());
        };

        let m = grid.samples();
        let reach = k_min.unsigned_abs().max(k_max.unsigned_abs()) as usize;
        let bound = self.alias_bound(p, m, reach)?;
        if bound > tol.coeff_tol {
            return Err(Error::GridTooCoarse {
                samples: m,
                reason: format!(
                    "aliasing bound {bound:.3e} exceeds coeff_tol {:.1e}",
                    tol.coeff_tol
                ),
            });
        }

        let samples = self.sample(grid);
        let mut planner = FftPlanner::<f64>::new();
        let fft = planner.plan_fft_forward(m);
        let mut out: BTreeMap<i64, CMatrix> = (k_min..=k_max).map(|k| (k, zero.clone())).collect();
        let mut buf = vec![ZERO; m];
        for i in 0..self.rows {
            for j in 0..self.cols {
                for (slot, s) in buf.iter_mut().zip(&samples) {
                    *slot = s[(i, j)];
                }
                fft.process(&mut buf);
                for (k, coeff) in out.iter_mut() {
                    let idx = k.rem_euclid(m as i64) as usize;
                    let phase = Complex64::cis(-(*k as f64) * grid.offset());
                    coeff[(i, j)] = buf[idx] * phase / m as f64;
                }
            }
        }
        Ok(out)
    }

    /// Upper bound on `Σ_{l≠0} ‖f̂(k + lM)‖` for `|k| ≤ reach`.
    fn alias_bound(&self, p: &Poly, m: usize, reach: usize) -> Result<f64> {
        if reach >= m {
            return Err(Error::GridTooCoarse {
                samples: m,
                reason: format!("coefficient index {reach} exceeds grid size"),
            });
        }
        let rho = p
            .roots()
            .iter()
            .map(|a| {
                let r = a.norm();
                r.min(1.0 / r)
            })
            .fold(0.0_f64, f64::max);
        if rho == 0.0 {
            return Ok(0.0);
        }
        if rho >= 1.0 - 1e-12 {
            return Err(Error::DenominatorNearZero { modulus: 0.0 });
        }
        // Cauchy estimate |f̂(k)| ≤ C·ρ^{|k|/2} with C the max over |z| = ρ^{±1/2}
        let radius = rho.sqrt();
        let mut c_max: f64 = 0.0;
        for j in 0..m {
            let w = Complex64::cis(std::f64::consts::TAU * j as f64 / m as f64);
            c_max = c_max
                .max(spectral_norm(&self.eval_point(w * radius)?))
                .max(spectral_norm(&self.eval_point(w / radius)?));
        }
        let gap = (m - reach) as f64;
        Ok(c_max * 2.0 * rho.powf(gap / 2.0) / (1.0 - rho.powf(m as f64 / 2.0)))
    }

    /// Pointwise product `self · other`.
    pub fn multiply(&self, other: &CircleFunction) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::shape(
                "multiply",
                format!(
                    "{}x{} times {}x{}",
                    self.rows, self.cols, other.rows, other.cols
                ),
            ));
        }
        let mut terms = Terms::new();
        for (ka, a) in &self.terms {
            for (kb, b) in &other.terms {
                let prod = a * b;
                match terms.get_mut(&(ka + kb)) {
                    Some(slot) => *slot += prod,
                    None => {
                        terms.insert(ka + kb, prod);
                    }
                }
            }
        }
        terms.retain(|_, m| !is_exact_zero(m));
        let den = match (&self.denominator, &other.denominator) {
            (None, None) => None,
            (Some(p), None) | (None, Some(p)) => Some(p.clone()),
            (Some(p), Some(q)) => Some(p.mul(q)),
        };
        Ok(CircleFunction {
            rows: self.rows,
            cols: other.cols,
            terms,
            denominator: den,
        })
    }

    /// Product of a chain of factors, left to right.
    pub fn product<'a>(factors: impl IntoIterator<Item = &'a CircleFunction>) -> Result<Self> {
        let mut iter = factors.into_iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::shape("product", "empty chain"))?
            .clone();
        iter.try_fold(first, |acc, f| acc.multiply(f))
    }

    /// Pointwise conjugate transpose.
    pub fn adjoint(&self) -> Self {
        self.conj().transpose()
    }

    /// Pointwise transpose.
    pub fn transpose(&self) -> Self {
        CircleFunction {
            rows: self.cols,
            cols: self.rows,
            terms: self
                .terms
                .iter()
                .map(|(k, m)| (*k, m.transpose()))
                .collect(),
            denominator: self.denominator.clone(),
        }
    }

    /// Entrywise complex conjugate on the circle: `c·z^k ↦ c̄·z^{-k}`.
    pub fn conj(&self) -> Self {
        let terms: Terms = self
            .terms
            .iter()
            .map(|(k, m)| (-k, m.map(|z| z.conj())))
            .collect();
        match &self.denominator {
            None => CircleFunction {
                rows: self.rows,
                cols: self.cols,
                terms,
                denominator: None,
            },
            Some(p) => {
                // conj(p)(ζ) = ζ^{-d} · p̃(ζ) with p̃ the reversed conjugate coefficients
                let d = p.degree().unwrap_or(0) as i64;
                let reversed = Poly::new(p.coeffs().iter().rev().map(|c| c.conj()).collect());
                CircleFunction {
                    rows: self.rows,
                    cols: self.cols,
                    terms: shift_terms(&terms, d),
                    denominator: Some(reversed),
                }
            }
        }
    }

    /// `z^k · self`.
    pub fn shift(&self, k: i64) -> Self {
        CircleFunction {
            rows: self.rows,
            cols: self.cols,
            terms: shift_terms(&self.terms, k),
            denominator: self.denominator.clone(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut terms: Terms = self.terms.iter().map(|(k, m)| (*k, m * c)).collect();
        terms.retain(|_, m| !is_exact_zero(m));
        CircleFunction {
            rows: self.rows,
            cols: self.cols,
            terms,
            denominator: self.denominator.clone(),
        }
    }

    pub fn add(&self, other: &CircleFunction) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::shape(
                "add",
                format!(
                    "{}x{} plus {}x{}",
                    self.rows, self.cols, other.rows, other.cols
                ),
            ));
        }
        let (a, b, den) = match (&self.denominator, &other.denominator) {
            (None, None) => (self.terms.clone(), other.terms.clone(), None),
            (Some(p), Some(q)) if p == q => {
                (self.terms.clone(), other.terms.clone(), Some(p.clone()))
            }
            (p, q) => {
                let one = Poly::constant(ONE);
                let p = p.clone().unwrap_or_else(|| one.clone());
                let q = q.clone().unwrap_or(one);
                (
                    mul_terms_poly(&self.terms, &q),
                    mul_terms_poly(&other.terms, &p),
                    Some(p.mul(&q)),
                )
            }
        };
        let mut terms = a;
        for (k, m) in b {
            match terms.get_mut(&k) {
                Some(slot) => *slot += m,
                None => {
                    terms.insert(k, m);
                }
            }
        }
        terms.retain(|_, m| !is_exact_zero(m));
        Ok(CircleFunction {
            rows: self.rows,
            cols: self.cols,
            terms,
            denominator: den,
        })
    }

    pub fn sub(&self, other: &CircleFunction) -> Result<Self> {
        self.add(&other.scale(-ONE))
    }

    /// `max_ζ ‖self(ζ) − other(ζ)‖₂` over the grid.
    pub fn max_deviation(&self, other: &CircleFunction, grid: &GridSpec) -> Result<f64> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::shape(
                "max_deviation",
                format!(
                    "{}x{} vs {}x{}",
                    self.rows, self.cols, other.rows, other.cols
                ),
            ));
        }
        Ok(grid
            .angles()
            .map(|a| spectral_norm(&(self.eval_angle(a) - other.eval_angle(a))))
            .fold(0.0, f64::max))
    }

    /// Largest norm of a Fourier coefficient with negative power.
    pub fn max_negative_coefficient(&self, grid: &GridSpec, tol: &ToleranceConfig) -> Result<f64> {
        if self.is_laurent() {
            return Ok(self
                .terms
                .iter()
                .filter(|(k, _)| **k < 0)
                .map(|(_, m)| spectral_norm(m))
                .fold(0.0, f64::max));
        }
        let reach = (grid.samples() / 2 - 1) as i64;
        let coeffs = self.fourier_coefficients(-reach, -1, grid, tol)?;
        Ok(coeffs.values().map(spectral_norm).fold(0.0, f64::max))
    }
}

fn is_exact_zero(m: &CMatrix) -> bool {
    m.iter().all(|z| *z == ZERO)
}

fn collect_terms(rows: usize, cols: usize, terms: Vec<(i64, CMatrix)>) -> Result<Terms> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidSymbol(format!(
            "dimensions must be positive, got {rows}x{cols}"
        )));
    }
    let mut out = Terms::new();
    for (k, m) in terms {
        if m.shape() != (rows, cols) {
            return Err(Error::InvalidSymbol(format!(
                "coefficient of z^{k} is {}x{}, expected {rows}x{cols}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidSymbol(format!(
                "non-finite coefficient at z^{k}"
            )));
        }
        if out.insert(k, m).is_some() {
            return Err(Error::InvalidSymbol(format!("duplicate power {k}")));
        }
    }
    out.retain(|_, m| !is_exact_zero(m));
    Ok(out)
}

fn shift_terms(terms: &Terms, k: i64) -> Terms {
    terms.iter().map(|(p, m)| (p + k, m.clone())).collect()
}

fn mul_terms_poly(terms: &Terms, p: &Poly) -> Terms {
    let mut out = Terms::new();
    for (k, m) in terms {
        for (j, c) in p.coeffs().iter().enumerate() {
            if *c == ZERO {
                continue;
            }
            let prod = m * *c;
            match out.get_mut(&(k + j as i64)) {
                Some(slot) => *slot += prod,
                None => {
                    out.insert(k + j as i64, prod);
                }
            }
        }
    }
    out.retain(|_, m| !is_exact_zero(m));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn diag_monomials(a: i64, b: i64) -> CircleFunction {
        CircleFunction::from_entries(
            2,
            2,
            &[
                CircleFunction::monomial(ONE, -a),
                CircleFunction::zeros(1, 1),
                CircleFunction::zeros(1, 1),
                CircleFunction::monomial(ONE, -b),
            ],
        )
        .unwrap()
    }

    fn swap() -> CircleFunction {
        CircleFunction::constant(CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]))
    }

    #[test]
    fn evaluate_diag_at_one() {
        let f = diag_monomials(2, 6);
        let v = f.evaluate(ONE).unwrap();
        assert_eq!(v, CMatrix::identity(2, 2));
    }

    #[test]
    fn evaluate_conjugate_monomial_at_i() {
        let f = CircleFunction::monomial(ONE, -1);
        let v = f.evaluate(c(0.0, 1.0)).unwrap();
        assert!((v[(0, 0)] - c(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn evaluate_geometric_rational() {
        let f =
            CircleFunction::scalar_rational(&[(0, ONE)], &[(0, ONE), (1, c(-0.5, 0.0))]).unwrap();
        let v = f.evaluate(ONE).unwrap();
        assert!((v[(0, 0)] - c(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn evaluate_rejects_off_circle_points() {
        let f = CircleFunction::identity(2);
        assert!(matches!(
            f.evaluate(c(1.1, 0.0)),
            Err(Error::NonUnitArgument { .. })
        ));
    }

    #[test]
    fn denominator_vanishing_on_circle_is_rejected() {
        let err = CircleFunction::scalar_rational(&[(0, ONE)], &[(0, ONE), (1, -ONE)]).unwrap_err();
        assert!(matches!(err, Error::DenominatorNearZero { .. }));
    }

    #[test]
    fn fourier_of_monomial() {
        let f = CircleFunction::monomial(ONE, -2);
        let grid = GridSpec::default();
        let coeffs = f
            .fourier_coefficients(-4, 4, &grid, &ToleranceConfig::default())
            .unwrap();
        for (k, m) in coeffs {
            let expected = if k == -2 { ONE } else { ZERO };
            assert_eq!(m[(0, 0)], expected, "k = {k}");
        }
    }

    #[test]
    fn fourier_of_geometric_series() {
        let f =
            CircleFunction::scalar_rational(&[(0, ONE)], &[(0, ONE), (1, c(-0.5, 0.0))]).unwrap();
        let grid = GridSpec::new(1024, 0.001).unwrap();
        let coeffs = f
            .fourier_coefficients(-5, 10, &grid, &ToleranceConfig::default())
            .unwrap();
        for (k, m) in coeffs {
            let expected = if k >= 0 { 0.5f64.powi(k as i32) } else { 0.0 };
            assert!((m[(0, 0)] - c(expected, 0.0)).norm() < 1e-13, "k = {k}");
        }
    }

    #[test]
    fn fourier_rejects_coarse_grid_for_slow_decay() {
        // pole at 1/0.99: decay ratio 0.99 needs far more than 64 samples
        let f =
            CircleFunction::scalar_rational(&[(0, ONE)], &[(0, ONE), (1, c(-0.99, 0.0))]).unwrap();
        let grid = GridSpec::with_samples(64).unwrap();
        let err = f
            .fourier_coefficients(0, 4, &grid, &ToleranceConfig::default())
            .unwrap_err();
        assert!(matches!(err, Error::GridTooCoarse { .. }));
    }

    #[test]
    fn fourier_of_diag_reads_block() {
        let f = diag_monomials(2, 6);
        let coeffs = f
            .fourier_coefficients(-6, -6, &GridSpec::default(), &ToleranceConfig::default())
            .unwrap();
        let expected = CMatrix::from_row_slice(2, 2, &[ZERO, ZERO, ZERO, ONE]);
        assert_eq!(coeffs[&-6], expected);
    }

    #[test]
    fn multiply_conjugate_pair_is_one() {
        let p = CircleFunction::monomial(ONE, -1)
            .multiply(&CircleFunction::monomial(ONE, 1))
            .unwrap();
        assert_eq!(p, CircleFunction::constant(CMatrix::identity(1, 1)));
    }

    #[test]
    fn permutation_conjugation_swaps_diagonal() {
        let p = CircleFunction::product([&swap(), &diag_monomials(6, 2), &swap()]).unwrap();
        assert_eq!(p, diag_monomials(2, 6));
    }

    #[test]
    fn multiply_by_identity() {
        let f = diag_monomials(3, 1).scale(c(0.5, 0.25));
        assert_eq!(f.multiply(&CircleFunction::identity(2)).unwrap(), f);
    }

    #[test]
    fn multiply_shape_mismatch() {
        let err = CircleFunction::identity(2)
            .multiply(&CircleFunction::identity(3))
            .unwrap_err();
        assert!(matches!(err, Error::ShapeMismatch { .. }));
    }

    #[test]
    fn adjoint_of_conjugate_scalar_identity() {
        let f = CircleFunction::laurent(2, 2, vec![(-1, CMatrix::identity(2, 2))]).unwrap();
        let expected = CircleFunction::laurent(2, 2, vec![(1, CMatrix::identity(2, 2))]).unwrap();
        assert_eq!(f.adjoint(), expected);
    }

    #[test]
    fn adjoint_of_constant_unitary() {
        let s = FRAC_1_SQRT_2;
        let u = CMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(0.0, s), c(0.0, s), c(s, 0.0)]);
        assert_eq!(
            CircleFunction::constant(u.clone()).adjoint(),
            CircleFunction::constant(u.adjoint())
        );
    }

    #[test]
    fn adjoint_of_rational_matches_samples() {
        let b = CircleFunction::blaschke(c(0.3, 0.2)).unwrap();
        let f = CircleFunction::from_entries(1, 2, &[b, CircleFunction::monomial(c(0.0, 2.0), 3)])
            .unwrap();
        let g = f.adjoint();
        let grid = GridSpec::with_samples(64).unwrap();
        for a in grid.angles() {
            let lhs = g.eval_angle(a);
            let rhs = f.eval_angle(a).adjoint();
            assert!((lhs - rhs).norm() < 1e-13);
        }
        assert!(f.adjoint().adjoint().max_deviation(&f, &grid).unwrap() < 1e-13);
    }

    #[test]
    fn assemble_mixes_rational_and_laurent() {
        let b = CircleFunction::blaschke(c(0.5, 0.0)).unwrap();
        let z = CircleFunction::monomial(ONE, 1);
        let d = b.direct_sum(&z);
        assert_eq!(d.kind(), SymbolKind::Rational);
        let grid = GridSpec::with_samples(32).unwrap();
        for a in grid.angles() {
            let v = d.eval_angle(a);
            assert!((v[(0, 0)] - b.eval_angle(a)[(0, 0)]).norm() < 1e-14);
            assert!((v[(1, 1)] - Complex64::cis(a)).norm() < 1e-14);
            assert_eq!(v[(0, 1)], ZERO);
        }
    }

    #[test]
    fn negative_degree_respects_floor() {
        let f = CircleFunction::scalar(&[(-3, c(1e-12, 0.0)), (-2, ONE), (4, ONE)]);
        assert_eq!(f.negative_degree(0.0), 3);
        assert_eq!(f.negative_degree(1e-10), 2);
    }
}
