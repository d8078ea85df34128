//! Dense complex linear algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;

pub type CMatrix = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Singular values sorted nonincreasing. Empty matrices yield an empty list.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Operator 2-norm.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    if m.nrows() == 1 || m.ncols() == 1 {
        return m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    }
    singular_values(m)[0]
}

/// Unitary polar factor `U V*` of a square matrix `M = U S V*`.
///
/// Rank-deficient inputs are completed by whatever orthonormal basis the SVD
/// returns for the null directions.
pub fn polar_unitary(m: &CMatrix) -> CMatrix {
    debug_assert_eq!(m.nrows(), m.ncols());
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^*");
    u * v_t
}

/// Eigen-decomposition of a Hermitian matrix: (real eigenvalues, unitary eigenvectors).
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    // symmetrize against round-off before handing to the Hermitian solver
    let h = (m + m.adjoint()).map(|z| z * 0.5);
    let eig = SymmetricEigen::new(h);
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

/// `max ‖A*A − I‖₂`-style deviation from being an isometry.
pub fn isometry_deviation(m: &CMatrix) -> f64 {
    let g = m.adjoint() * m;
    let id = CMatrix::identity(g.nrows(), g.ncols());
    spectral_norm(&(g - id))
}

/// A unitary matrix drawn from the QR factorization of a random complex matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let a = CMatrix::from_fn(n, n, |_, _| {
        c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let qr = a.qr();
    let q = qr.q();
    let r = qr.r();
    // fix the phases so that R has a positive diagonal
    let mut q = q;
    for j in 0..n {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// Block diagonal `a ⊕ b`.
pub fn direct_sum(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), (a.nrows(), a.ncols())).copy_from(a);
    out.view_mut((a.nrows(), a.ncols()), (b.nrows(), b.ncols()))
        .copy_from(b);
    out
}
