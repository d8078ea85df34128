//! Dense scalar polynomials in `z` with complex coefficients (ascending order).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::linalg::{ONE, ZERO};

#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    /// Trailing zero coefficients are dropped; the zero polynomial has no coefficients.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == ZERO) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: Complex64) -> Self {
        Poly::new(vec![c])
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Drops leading coefficients whose modulus is at most `floor`.
    pub fn trimmed(&self, floor: f64) -> Poly {
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.norm() <= floor) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Sum of coefficient moduli weighted by `|z|^k`; a scale for residual tests at `z`.
    pub fn magnitude_at(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.norm() * r.powi(k as i32))
            .sum()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| {
                self.coeffs.get(k).copied().unwrap_or(ZERO)
                    + other.coeffs.get(k).copied().unwrap_or(ZERO)
            })
            .collect();
        Poly::new(coeffs)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Roots as eigenvalues of the companion matrix.
    pub fn roots(&self) -> Vec<Complex64> {
        let Some(deg) = self.degree() else {
            return Vec::new();
        };
        if deg == 0 {
            return Vec::new();
        }
        let lead = self.coeffs[deg];
        // exact zero roots are split off: the Schur iteration handles them, but
        // stripping them keeps multiplicities exact for monomial factors
        let zeros = self.coeffs.iter().take_while(|c| **c == ZERO).count();
        let mut roots = vec![ZERO; zeros];
        let reduced = &self.coeffs[zeros..];
        let d = reduced.len() - 1;
        if d == 0 {
            return roots;
        }
        if d == 1 {
            roots.push(-reduced[0] / reduced[1]);
            return roots;
        }
        let mut comp = DMatrix::<Complex64>::zeros(d, d);
        for i in 1..d {
            comp[(i, i - 1)] = ONE;
        }
        for i in 0..d {
            comp[(i, d - 1)] = -reduced[i] / lead;
        }
        let eig = comp
            .schur()
            .eigenvalues()
            .expect("complex Schur form is triangular");
        roots.extend(eig.iter().copied());
        roots
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn roots_of_quadratic() {
        // (z - 2)(z + 0.5i)
        let p = Poly::new(vec![c(0.0, -1.0), c(-2.0, 0.5), ONE]);
        let mut roots = p.roots();
        roots.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
        assert!((roots[0] - c(0.0, -0.5)).norm() < 1e-12);
        assert!((roots[1] - c(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn zero_roots_are_exact() {
        let p = Poly::new(vec![ZERO, ZERO, ONE]);
        assert_eq!(p.roots(), vec![ZERO, ZERO]);
    }

    #[test]
    fn constant_has_no_roots() {
        assert!(Poly::constant(c(0.7, 0.0)).roots().is_empty());
    }

    #[test]
    fn product_and_eval() {
        let p = Poly::new(vec![ONE, ONE]);
        let q = p.mul(&p);
        assert_eq!(q.coeffs(), &[ONE, c(2.0, 0.0), ONE]);
        assert_eq!(q.eval(c(1.0, 0.0)), c(4.0, 0.0));
        assert!(q.add(&q.neg()).is_zero());
    }
}
