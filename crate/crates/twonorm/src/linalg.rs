//! Dense complex linear algebra kernels.
//!
//! Thin wrappers over LAPACK (through `ndarray-linalg`) plus the few dense
//! routines LAPACK does not provide directly: a scaling-and-squaring matrix
//! exponential and an orthonormal eigendecomposition for unitary matrices.
//! Everything works on `Array2<Complex64>`; matrices in this crate are small
//! (N <= 4096, typically <= 512), so full decompositions are the norm.

use ndarray::prelude::*;
use num_complex::Complex64;

use ndarray_linalg::{Eig, Eigh, Inverse, SVD, UPLO};

use crate::error::{Error, Result};

pub type CMat = Array2<Complex64>;
pub type CVec = Array1<Complex64>;

pub fn identity(n: usize) -> CMat {
    Array2::eye(n)
}

pub fn from_diag(d: &[Complex64]) -> CMat {
    let n = d.len();
    let mut m = CMat::zeros((n, n));
    for (i, &v) in d.iter().enumerate() {
        m[[i, i]] = v;
    }
    m
}

pub fn adjoint(m: &CMat) -> CMat {
    m.t().mapv(|z| z.conj())
}

pub fn frobenius_norm(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Singular values in descending order (LAPACK `zgesvd`/`dgesvd` via ndarray-linalg).
pub fn singular_values(m: &CMat) -> Result<Vec<f64>> {
    let (_, s, _) = m
        .svd(false, false)
        .map_err(|e| Error::Eigensolver(format!("svd: {e}")))?;
    let mut v: Vec<f64> = s.to_vec();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(v)
}

/// Operator 2-norm = largest singular value.
pub fn op_norm(m: &CMat) -> Result<f64> {
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}

pub fn smallest_singular_value(m: &CMat) -> Result<f64> {
    Ok(singular_values(m)?.last().copied().unwrap_or(0.0))
}

/// `||M^H M - I||` in operator norm.
pub fn unitary_defect(m: &CMat) -> Result<f64> {
    let n = m.nrows();
    let g = adjoint(m).dot(m) - identity(n);
    op_norm(&g)
}

/// `||M - M^H||` in operator norm.
pub fn hermitian_defect(m: &CMat) -> Result<f64> {
    let d = m - &adjoint(m);
    op_norm(&d)
}

/// `||M + M^H||` in operator norm.
pub fn antihermitian_defect(m: &CMat) -> Result<f64> {
    let d = m + &adjoint(m);
    op_norm(&d)
}

/// General complex eigendecomposition (LAPACK `zgeev`). Returns (values, right eigenvectors).
pub fn eig(m: &CMat) -> Result<(CVec, CMat)> {
    m.eig()
        .map_err(|e| Error::Eigensolver(format!("eig: {e}")))
}

/// Hermitian eigendecomposition (LAPACK `zheev`); eigenvalues ascending,
/// eigenvectors orthonormal in the columns.
///
/// ndarray-linalg 0.16 hands a row-major buffer to column-major LAPACK, so
/// zheev effectively diagonalizes the transpose (= conjugate, for Hermitian
/// input) and the returned columns are the conjugated eigenvectors; undo
/// that here. Verified against A v = lambda v in the test below.
pub fn eigh(m: &CMat) -> Result<(Array1<f64>, CMat)> {
    let (w, v) = m
        .eigh(UPLO::Lower)
        .map_err(|e| Error::Eigensolver(format!("eigh: {e}")))?;
    Ok((w, v.mapv(|z| z.conj())))
}

/// Symmetric real tridiagonal eigenvalues via `dsyev` on the embedded dense matrix.
pub fn tridiagonal_symmetric_eigenvalues(diag: &[f64], offdiag: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut m = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        m[[i, i]] = diag[i];
    }
    for i in 0..n - 1 {
        m[[i + 1, i]] = offdiag[i];
        m[[i, i + 1]] = offdiag[i];
    }
    let (w, _) = m
        .eigh(UPLO::Lower)
        .map_err(|e| Error::Eigensolver(format!("tridiagonal eigh: {e}")))?;
    Ok(w.to_vec())
}

pub fn inverse(m: &CMat) -> Result<CMat> {
    m.inv()
        .map_err(|e| Error::Eigensolver(format!("inverse: {e}")))
}

/// Matrix exponential by scaling and squaring with a plain Taylor series.
///
/// The argument is scaled by 2^-s until its Frobenius norm is below 1/4, the
/// series is summed to a 1e-15 relative term cutoff, and the result squared
/// back. Adequate for the operator sizes used here; unitary inputs are better
/// served by [`exp_antihermitian`].
pub fn expm(m: &CMat) -> CMat {
    let n = m.nrows();
    let norm = frobenius_norm(m);
    let s = if norm > 0.25 {
        (norm / 0.25).log2().ceil().max(0.0) as u32
    } else {
        0
    };
    let scale = Complex64::new((0.5f64).powi(s as i32), 0.0);
    let a = m.mapv(|z| z * scale);

    let mut result = identity(n);
    let mut term = identity(n);
    for k in 1..=64 {
        term = term.dot(&a).mapv(|z| z / k as f64);
        result += &term;
        if frobenius_norm(&term) <= 1e-15 * frobenius_norm(&result) {
            break;
        }
    }
    for _ in 0..s {
        result = result.dot(&result);
    }
    result
}

/// Exponential of an anti-Hermitian matrix through the Hermitian
/// eigendecomposition of `-iX`; the result is unitary to machine precision.
pub fn exp_antihermitian(x: &CMat) -> Result<CMat> {
    let h = x.mapv(|z| z * Complex64::new(0.0, -1.0));
    let (w, v) = eigh(&h)?;
    let phases: Vec<Complex64> = w.iter().map(|&b| Complex64::from_polar(1.0, b)).collect();
    Ok(reassemble(&v, &phases))
}

/// `V diag(d) V^H`.
pub fn reassemble(v: &CMat, d: &[Complex64]) -> CMat {
    let vd = v * &Array1::from_vec(d.to_vec());
    vd.dot(&adjoint(v))
}

/// Orthonormal eigendecomposition of a (numerically) unitary matrix.
///
/// `zgeev` eigenvectors of a normal matrix are individually accurate but not
/// orthonormal inside degenerate eigenvalue clusters. Columns whose
/// eigenangles agree to `cluster_tol` are re-orthonormalized blockwise by QR,
/// and a final Lowdin step (`V (V^H V)^{-1/2}`) makes the basis unitary to
/// machine precision, so functions rebuilt as `V f(angles) V^H` stay normal.
///
/// Returns eigenangles (radians, principal value) and the orthonormal basis,
/// sorted by ascending angle.
pub fn diagonalize_unitary(u: &CMat, cluster_tol: f64) -> Result<(Vec<f64>, CMat)> {
    let n = u.nrows();
    let (vals, vecs) = eig(u)?;

    let mut order: Vec<usize> = (0..n).collect();
    let angles_raw: Vec<f64> = vals.iter().map(|z| z.arg()).collect();
    order.sort_by(|&a, &b| angles_raw[a].partial_cmp(&angles_raw[b]).unwrap());

    let mut angles = Vec::with_capacity(n);
    let mut v = CMat::zeros((n, n));
    for (col, &src) in order.iter().enumerate() {
        angles.push(angles_raw[src]);
        v.column_mut(col).assign(&vecs.column(src));
    }

    // Blockwise QR inside angle clusters.
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (angles[end] - angles[end - 1]).abs() <= cluster_tol {
            end += 1;
        }
        if end - start > 1 {
            let block = v.slice(s![.., start..end]).to_owned();
            let q = orthonormalize_columns(&block)?;
            v.slice_mut(s![.., start..end]).assign(&q);
        }
        start = end;
    }

    // Lowdin: V <- V (V^H V)^{-1/2}.
    let gram = adjoint(&v).dot(&v);
    let (g, w) = eigh(&gram)?;
    let inv_sqrt: Vec<Complex64> = g
        .iter()
        .map(|&x| Complex64::new(1.0 / x.max(1e-300).sqrt(), 0.0))
        .collect();
    let corr = reassemble(&w, &inv_sqrt);
    let v = v.dot(&corr);

    Ok((angles, v))
}

/// Modified Gram-Schmidt with a second pass; block sizes here are tiny.
fn orthonormalize_columns(block: &CMat) -> Result<CMat> {
    let k = block.ncols();
    let mut q = block.to_owned();
    for _pass in 0..2 {
        for j in 0..k {
            for i in 0..j {
                let qi = q.column(i).to_owned();
                let proj: Complex64 = qi.iter().zip(q.column(j).iter()).map(|(a, b)| a.conj() * b).sum();
                let update: Vec<Complex64> = q
                    .column(j)
                    .iter()
                    .zip(qi.iter())
                    .map(|(b, a)| b - proj * a)
                    .collect();
                q.column_mut(j).assign(&Array1::from_vec(update));
            }
            let norm: f64 = q.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-300 {
                return Err(Error::Eigensolver(
                    "rank-deficient eigenvector block".into(),
                ));
            }
            let inv = Complex64::new(1.0 / norm, 0.0);
            let scaled: Vec<Complex64> = q.column(j).iter().map(|z| z * inv).collect();
            q.column_mut(j).assign(&Array1::from_vec(scaled));
        }
    }
    Ok(q)
}

/// Largest distance after pairing two complex multisets sorted by (Re, Im).
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let key = |z: &Complex64| (z.re, z.im);
    let mut sa: Vec<Complex64> = a.to_vec();
    let mut sb: Vec<Complex64> = b.to_vec();
    sa.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
    sb.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
    sa.iter()
        .zip(sb.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize) -> CMat {
        let mut m = CMat::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                m[[i, j]] = Complex64::new(
                    ((i * 7 + j * 3) % 11) as f64 / 11.0 - 0.4,
                    ((i * 5 + j * 2) % 7) as f64 / 7.0 - 0.5,
                );
            }
        }
        m
    }

    #[test]
    fn eigh_columns_are_true_eigenvectors() {
        let m = sample(7);
        let h = (&m + &adjoint(&m)).mapv(|z| z * 0.5);
        let (w, v) = eigh(&h).unwrap();
        for k in 0..7 {
            let vk = v.column(k).to_owned();
            let hv = h.dot(&vk);
            let res: f64 = hv
                .iter()
                .zip(vk.iter())
                .map(|(a, b)| (a - b * w[k]).norm())
                .sum();
            assert!(res < 1e-12, "column {k} residual {res}");
        }
        assert!(unitary_defect(&v).unwrap() < 1e-13);
    }

    #[test]
    fn expm_matches_diagonal_closed_form() {
        let d = from_diag(&[
            Complex64::new(0.0, 0.3),
            Complex64::new(0.0, -1.2),
            Complex64::new(0.2, 0.0),
        ]);
        let e = expm(&d);
        for (i, z) in [
            Complex64::new(0.0, 0.3),
            Complex64::new(0.0, -1.2),
            Complex64::new(0.2, 0.0),
        ]
        .iter()
        .enumerate()
        {
            assert!((e[[i, i]] - z.exp()).norm() < 1e-14);
        }
    }

    #[test]
    fn expm_inverse_is_negative_argument() {
        let m = sample(6);
        let p = expm(&m).dot(&expm(&m.mapv(|z| -z)));
        let defect = op_norm(&(&p - &identity(6))).unwrap();
        assert!(defect < 1e-12, "defect {defect}");
    }

    #[test]
    fn exp_antihermitian_is_unitary() {
        let m = sample(8);
        let x = (&m - &adjoint(&m)).mapv(|z| z * 0.5);
        let u = exp_antihermitian(&x).unwrap();
        assert!(unitary_defect(&u).unwrap() < 1e-13);
        // agrees with the Taylor route
        let diff = op_norm(&(&u - &expm(&x))).unwrap();
        assert!(diff < 1e-12, "diff {diff}");
    }

    #[test]
    fn diagonalize_unitary_handles_degenerate_clusters() {
        // e^{i} on a 1-dim range, identity elsewhere: eigenvalue 1 has multiplicity 7.
        let n = 8;
        let mut f = CVec::zeros(n);
        for i in 0..n {
            f[i] = Complex64::new(1.0 / (1.0 + i as f64), 0.3 * i as f64);
        }
        let norm: f64 = f.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        f.mapv_inplace(|z| z / norm);
        let mut proj = CMat::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                proj[[i, j]] = f[i] * f[j].conj();
            }
        }
        let phase = Complex64::from_polar(1.0, 1.0) - Complex64::new(1.0, 0.0);
        let u = identity(n) + proj.mapv(|z| z * phase);

        let (angles, v) = diagonalize_unitary(&u, 1e-10).unwrap();
        assert!(unitary_defect(&v).unwrap() < 1e-13);
        let phases: Vec<Complex64> = angles
            .iter()
            .map(|&a| Complex64::from_polar(1.0, a))
            .collect();
        let rebuilt = reassemble(&v, &phases);
        let defect = op_norm(&(&rebuilt - &u)).unwrap();
        assert!(defect < 1e-12, "reconstruction defect {defect}");
    }

    #[test]
    fn multiset_distance_ignores_order() {
        let a = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)];
        let b = [Complex64::new(0.0, 2.0), Complex64::new(1.0, 0.0)];
        assert!(multiset_distance(&a, &b) == 0.0);
    }
}
