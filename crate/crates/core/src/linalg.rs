//! Dense complex linear-algebra helpers shared by the Krein-space modules.
//!
//! Everything here works on `DMatrix<Complex64>`; rank decisions use a
//! relative singular-value cutoff supplied by the caller.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Builds a complex matrix from real row-major data.
pub fn real_matrix(rows: usize, cols: usize, data: &[f64]) -> CMat {
    assert_eq!(data.len(), rows * cols);
    CMat::from_fn(rows, cols, |i, j| c64(data[i * cols + j], 0.0))
}

/// Builds a complex column vector from real data.
pub fn real_vector(data: &[f64]) -> CVec {
    CVec::from_iterator(data.len(), data.iter().map(|&x| c64(x, 0.0)))
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Diagonal matrix with `p` entries `+1` followed by `q` entries `-1`.
pub fn signature_matrix(p: usize, q: usize) -> CMat {
    CMat::from_fn(p + q, p + q, |i, j| {
        if i != j {
            c64(0.0, 0.0)
        } else if i < p {
            c64(1.0, 0.0)
        } else {
            c64(-1.0, 0.0)
        }
    })
}

/// Thin SVD `a = u diag(s) v*` with singular values descending.
///
/// nalgebra's complex SVD occasionally returns wrong singular vectors for
/// rank-deficient inputs at some scales, so the factorization is computed
/// on a normalized copy, checked by reconstruction, and retried in the
/// adjoint orientation or at a different scale if the check fails.
pub fn svd(a: &CMat) -> (CMat, Vec<f64>, CMat) {
    let (n, m) = a.shape();
    let k = n.min(m);
    if k == 0 {
        return (CMat::zeros(n, 0), Vec::new(), CMat::zeros(m, 0));
    }
    let amax = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if amax == 0.0 {
        return (
            identity(n).columns(0, k).into_owned(),
            vec![0.0; k],
            identity(m).columns(0, k).into_owned(),
        );
    }
    let accept = 1e-12 * (n.max(m) as f64);
    let mut best: Option<(f64, CMat, Vec<f64>, CMat)> = None;
    for (adjoint, scale) in [(false, 1.0), (true, 1.0), (false, 0.7316), (true, 0.7316), (false, 1.913)] {
        let b = if adjoint { a.adjoint() } else { a.clone() } * c64(scale / amax, 0.0);
        let f = b.clone().svd(true, true);
        let (Some(u), Some(v_t)) = (f.u, f.v_t) else { continue };
        let s: Vec<f64> = f.singular_values.iter().copied().collect();
        let sd = CMat::from_diagonal(&CVec::from_iterator(k, s.iter().map(|&x| c64(x, 0.0))));
        let err = (&u * sd * &v_t - &b).norm() / b.norm();
        let (u, v) = if adjoint { (v_t.adjoint(), u) } else { (u, v_t.adjoint()) };
        let s: Vec<f64> = s.iter().map(|x| x * amax / scale).collect();
        if best.as_ref().is_none_or(|b| err < b.0) {
            best = Some((err, u, s, v));
        }
        if err <= accept {
            break;
        }
    }
    let (_, u, s, v) = best.expect("at least one SVD attempt succeeds");
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| s[j].total_cmp(&s[i]));
    (select_columns(&u, &order), order.iter().map(|&i| s[i]).collect(), select_columns(&v, &order))
}

/// Singular values in descending order. Empty for matrices with a zero dimension.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    svd(a).1
}

/// Operator 2-norm.
pub fn spectral_norm(a: &CMat) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// Numerical rank with cutoff `tol * max(1, sigma_max)`.
pub fn rank(a: &CMat, tol: f64) -> usize {
    let s = singular_values(a);
    let Some(&smax) = s.first() else { return 0 };
    let cutoff = tol * smax.max(1.0);
    s.iter().filter(|&&x| x > cutoff).count()
}

/// Orthonormal basis of the column space of `a`.
pub fn orth(a: &CMat, tol: f64) -> CMat {
    let (u, s, _) = svd(a);
    let Some(&smax) = s.first() else { return CMat::zeros(a.nrows(), 0) };
    let cutoff = tol * smax.max(1.0);
    let keep: Vec<usize> = (0..s.len()).filter(|&i| s[i] > cutoff).collect();
    select_columns(&u, &keep)
}

/// Orthonormal basis of the orthogonal complement of the span of the
/// orthonormal columns `q`.
pub fn complement(q: &CMat) -> CMat {
    let n = q.nrows();
    let k = q.ncols();
    if k == 0 {
        return identity(n);
    }
    if k >= n {
        return CMat::zeros(n, 0);
    }
    let residual = identity(n) - q * q.adjoint();
    let (vals, vecs) = hermitian_eigen(&residual);
    let keep: Vec<usize> = (0..n).filter(|&i| vals[i] > 0.5).collect();
    select_columns(&vecs, &keep)
}

/// Orthonormal basis of the kernel of `a`.
pub fn null_space(a: &CMat, tol: f64) -> CMat {
    if a.nrows() == 0 {
        return identity(a.ncols());
    }
    complement(&orth(&a.adjoint(), tol))
}

/// Moore-Penrose inverse by singular-value thresholding.
pub fn pinv(a: &CMat, tol: f64) -> CMat {
    let (n, m) = a.shape();
    let (u, s, v) = svd(a);
    let mut out = CMat::zeros(m, n);
    let Some(&smax) = s.first() else { return out };
    let cutoff = tol * smax.max(1.0);
    for (i, &si) in s.iter().enumerate() {
        if si > cutoff {
            out += (v.column(i) * u.column(i).adjoint()) * c64(1.0 / si, 0.0);
        }
    }
    out
}

/// Eigen-decomposition of the Hermitian part of `a`, eigenvalues ascending.
pub fn hermitian_eigen(a: &CMat) -> (Vec<f64>, CMat) {
    let n = a.nrows();
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let h = hermitian_part(a);
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = select_columns(&eig.eigenvectors, &order);
    (vals, vecs)
}

pub fn hermitian_eigenvalues(a: &CMat) -> Vec<f64> {
    hermitian_eigen(a).0
}

pub fn hermitian_part(a: &CMat) -> CMat {
    (a + a.adjoint()) * c64(0.5, 0.0)
}

/// Frobenius norm of `a - a*`.
pub fn hermitian_defect(a: &CMat) -> f64 {
    (a - a.adjoint()).norm()
}

/// Principal square root of a Hermitian positive semidefinite matrix.
/// Slightly negative eigenvalues are clamped to zero.
pub fn psd_sqrt(a: &CMat) -> CMat {
    psd_power(a, 0.5)
}

/// `a^p` for Hermitian positive definite `a` through its spectral decomposition.
pub fn psd_power(a: &CMat, p: f64) -> CMat {
    let (vals, vecs) = hermitian_eigen(a);
    let d = CMat::from_diagonal(&CVec::from_iterator(
        vals.len(),
        vals.iter().map(|&l| c64(l.max(0.0).powf(p), 0.0)),
    ));
    &vecs * d * vecs.adjoint()
}

/// Orthogonal projector onto the span of orthonormal columns.
pub fn projector(basis: &CMat) -> CMat {
    basis * basis.adjoint()
}

/// `||a - b||_F / max(1, ||b||_F)`.
pub fn rel_residual(a: &CMat, b: &CMat) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

pub fn select_columns(a: &CMat, idx: &[usize]) -> CMat {
    CMat::from_fn(a.nrows(), idx.len(), |i, j| a[(i, idx[j])])
}

pub fn hstack(a: &CMat, b: &CMat) -> CMat {
    assert_eq!(a.nrows(), b.nrows());
    let n = a.nrows();
    let (ka, kb) = (a.ncols(), b.ncols());
    CMat::from_fn(n, ka + kb, |i, j| if j < ka { a[(i, j)] } else { b[(i, j - ka)] })
}

/// Dimension of the intersection of two column spans.
pub fn intersection_dim(a: &CMat, b: &CMat, tol: f64) -> usize {
    let ra = rank(a, tol);
    let rb = rank(b, tol);
    let rs = rank(&hstack(a, b), tol);
    (ra + rb).saturating_sub(rs)
}

/// Whether `a` is numerically positive semidefinite: `a` is Hermitian within
/// `tol * max(1, ||a||)` and its smallest eigenvalue is above `-tol * max(1, ||a||)`.
pub fn is_psd(a: &CMat, tol: f64) -> bool {
    psd_margin(a, tol) >= 0.0
}

/// Smallest eigenvalue of the Hermitian part shifted by the tolerance floor;
/// negative if `a` fails the semidefiniteness test. Returns `-inf` when `a`
/// is not Hermitian.
pub fn psd_margin(a: &CMat, tol: f64) -> f64 {
    if a.nrows() == 0 {
        return 0.0;
    }
    let scale = a.norm().max(1.0);
    if hermitian_defect(a) > tol * scale {
        return f64::NEG_INFINITY;
    }
    let lmin = hermitian_eigenvalues(a)[0];
    lmin + tol * scale
}
