//! Thin safe wrappers over the system LAPACK/BLAS routines used by the dense
//! complex layer: Hermitian eigendecomposition (`zheev`) and matrix products
//! (`zgemm`). Everything else in the crate is pure Rust.

use crate::error::{Error, Result};
use ndarray::Array2;
use num_complex::Complex64 as C64;

extern "C" {
    fn zheev_(
        jobz: *const u8,
        uplo: *const u8,
        n: *const i32,
        a: *mut C64,
        lda: *const i32,
        w: *mut f64,
        work: *mut C64,
        lwork: *const i32,
        rwork: *mut f64,
        info: *mut i32,
    );
    fn zgemm_(
        transa: *const u8,
        transb: *const u8,
        m: *const i32,
        n: *const i32,
        k: *const i32,
        alpha: *const C64,
        a: *const C64,
        lda: *const i32,
        b: *const C64,
        ldb: *const i32,
        beta: *const C64,
        c: *mut C64,
        ldc: *const i32,
    );
}

fn to_column_major(a: &Array2<C64>) -> Vec<C64> {
    let (rows, cols) = a.dim();
    let mut out = vec![C64::new(0.0, 0.0); rows * cols];
    for j in 0..cols {
        for i in 0..rows {
            out[i + j * rows] = a[(i, j)];
        }
    }
    out
}

fn zheev_driver(jobz: u8, a: &Array2<C64>) -> Result<(Vec<f64>, Option<Array2<C64>>)> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::InvalidState(format!(
            "eigendecomposition requires a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if n == 0 {
        return Ok((Vec::new(), None));
    }
    let mut storage = to_column_major(a);
    let mut eigenvalues = vec![0.0f64; n];
    let mut rwork = vec![0.0f64; 3 * n - 2];
    let ni = n as i32;
    let mut info = 0i32;

    // workspace query
    let mut work_query = [C64::new(0.0, 0.0)];
    let query = -1i32;
    unsafe {
        zheev_(
            &jobz,
            &b'L',
            &ni,
            storage.as_mut_ptr(),
            &ni,
            eigenvalues.as_mut_ptr(),
            work_query.as_mut_ptr(),
            &query,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack { routine: "zheev", info });
    }
    let lwork = work_query[0].re as i32;
    let mut work = vec![C64::new(0.0, 0.0); lwork.max(1) as usize];
    unsafe {
        zheev_(
            &jobz,
            &b'L',
            &ni,
            storage.as_mut_ptr(),
            &ni,
            eigenvalues.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack { routine: "zheev", info });
    }
    let vectors = if jobz == b'V' {
        let mut v = Array2::zeros((n, n));
        for j in 0..n {
            for i in 0..n {
                v[(i, j)] = storage[i + j * n];
            }
        }
        Some(v)
    } else {
        None
    };
    Ok((eigenvalues, vectors))
}

/// Eigenvalues of a Hermitian matrix, ascending. Only the lower triangle is
/// referenced; the caller is responsible for Hermiticity.
pub fn eigvalsh(a: &Array2<C64>) -> Result<Vec<f64>> {
    zheev_driver(b'N', a).map(|(w, _)| w)
}

/// Full eigendecomposition of a Hermitian matrix. Returns ascending
/// eigenvalues and a unitary matrix whose `j`-th column is the `j`-th
/// eigenvector.
pub fn eigh(a: &Array2<C64>) -> Result<(Vec<f64>, Array2<C64>)> {
    let (w, v) = zheev_driver(b'V', a)?;
    Ok((w, v.expect("eigenvectors requested")))
}

/// Dense complex matrix product `a * b` via `zgemm`.
///
/// Row-major inputs are handed to the column-major backend transposed, so no
/// data is copied unless an input is non-contiguous.
pub fn matmul(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    let (m, ka) = a.dim();
    let (kb, n) = b.dim();
    assert_eq!(ka, kb, "matmul dimension mismatch: {m}x{ka} * {kb}x{n}");
    if m == 0 || n == 0 || ka == 0 {
        return Array2::zeros((m, n));
    }
    let a_std = a.as_standard_layout();
    let b_std = b.as_standard_layout();
    let a_slice = a_std.as_slice().expect("standard layout");
    let b_slice = b_std.as_slice().expect("standard layout");
    let mut c = vec![C64::new(0.0, 0.0); m * n];
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let (mi, ni, ki) = (m as i32, n as i32, ka as i32);
    // Row-major C equals column-major C^T = B^T * A^T.
    unsafe {
        zgemm_(
            &b'N',
            &b'N',
            &ni,
            &mi,
            &ki,
            &one,
            b_slice.as_ptr(),
            &ni,
            a_slice.as_ptr(),
            &ki,
            &zero,
            c.as_mut_ptr(),
            &ni,
        );
    }
    Array2::from_shape_vec((m, n), c).expect("shape")
}

/// Conjugate transpose.
pub fn dagger(a: &Array2<C64>) -> Array2<C64> {
    let (m, n) = a.dim();
    let mut out = Array2::zeros((n, m));
    for i in 0..m {
        for j in 0..n {
            out[(j, i)] = a[(i, j)].conj();
        }
    }
    out
}

/// Exponential of an anti-Hermitian matrix through the eigendecomposition of
/// `i a`; the result is unitary to machine precision by construction.
pub fn expm_antihermitian(a: &Array2<C64>) -> Result<Array2<C64>> {
    let n = a.nrows();
    let mut h = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            h[(i, j)] = C64::new(0.0, 1.0) * a[(i, j)];
        }
    }
    let (w, v) = eigh(&h)?;
    // exp(a) = V exp(-i w) V^dagger
    let mut scaled = v.clone();
    for j in 0..n {
        let phase = C64::from_polar(1.0, -w[j]);
        for i in 0..n {
            scaled[(i, j)] *= phase;
        }
    }
    Ok(matmul(&scaled, &dagger(&v)))
}

/// Largest absolute deviation of `u` from unitarity, `max |(U^dag U - I)_ij|`,
/// restricted to the leading `bulk` rows and columns.
pub fn unitarity_defect(u: &Array2<C64>, bulk: usize) -> f64 {
    let gram = matmul(&dagger(u), u);
    let b = bulk.min(u.nrows());
    let mut worst = 0.0f64;
    for i in 0..b {
        for j in 0..b {
            let expected = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            worst = worst.max((gram[(i, j)] - expected).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn eigvalsh_known_2x2() {
        let mut a = Array2::zeros((2, 2));
        a[(0, 0)] = C64::new(2.0, 0.0);
        a[(0, 1)] = C64::new(0.0, 1.0);
        a[(1, 0)] = C64::new(0.0, -1.0);
        a[(1, 1)] = C64::new(2.0, 0.0);
        let w = eigvalsh(&a).unwrap();
        assert_abs_diff_eq!(w[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(w[1], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn eigh_reconstructs() {
        let n = 5;
        let mut a = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                let re = ((3 * i + 7 * j) % 5) as f64;
                let im = (i as f64 - j as f64) * 0.3;
                a[(i, j)] = C64::new(re, im);
            }
        }
        let h = {
            let ad = dagger(&a);
            let mut s = Array2::zeros((n, n));
            for i in 0..n {
                for j in 0..n {
                    s[(i, j)] = (a[(i, j)] + ad[(i, j)]) * 0.5;
                }
            }
            s
        };
        let (w, v) = eigh(&h).unwrap();
        let mut lambda = Array2::zeros((n, n));
        for i in 0..n {
            lambda[(i, i)] = C64::new(w[i], 0.0);
        }
        let back = matmul(&matmul(&v, &lambda), &dagger(&v));
        for i in 0..n {
            for j in 0..n {
                assert!((back[(i, j)] - h[(i, j)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn matmul_matches_naive() {
        let a = Array2::from_shape_fn((3, 4), |(i, j)| C64::new(i as f64 + 0.5, j as f64 - 1.0));
        let b = Array2::from_shape_fn((4, 2), |(i, j)| C64::new(j as f64 - i as f64, 0.25 * i as f64));
        let c = matmul(&a, &b);
        for i in 0..3 {
            for j in 0..2 {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..4 {
                    acc += a[(i, k)] * b[(k, j)];
                }
                assert!((c[(i, j)] - acc).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn antihermitian_exponential_is_unitary() {
        let n = 6;
        let mut a = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                let z = C64::new(0.1 * (i as f64 - j as f64), 0.05 * ((i + j) as f64));
                a[(i, j)] = z;
            }
        }
        // anti-hermitize
        let ad = dagger(&a);
        let mut g = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = (a[(i, j)] - ad[(i, j)]) * 0.5;
            }
        }
        let u = expm_antihermitian(&g).unwrap();
        assert!(unitarity_defect(&u, n) < 1e-13);
    }
}
