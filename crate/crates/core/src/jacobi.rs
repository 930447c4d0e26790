//! Cyclic Jacobi eigenvalues for dense symmetric matrices.
//!
//! Eigenvalues only (no accumulation of rotations): the entropy path needs
//! just the spectrum of small Gram blocks.

/// Eigenvalues of the symmetric n x n matrix stored row-major in `a`
/// (destroyed in place). Sweeps stop once the off-diagonal Frobenius norm
/// drops below `tol`; `Err(())` after `max_sweeps` full sweeps without
/// convergence.
pub(crate) fn symmetric_eigenvalues(
    a: &mut [f64],
    n: usize,
    tol: f64,
    max_sweeps: usize,
) -> Result<Vec<f64>, ()> {
    debug_assert_eq!(a.len(), n * n);
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![a[0]]);
    }
    for _ in 0..max_sweeps {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if (2.0 * off).sqrt() < tol {
            return Ok((0..n).map(|i| a[i * n + i]).collect());
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // rotate rows/columns p and q
                for i in 0..n {
                    if i == p || i == q {
                        continue;
                    }
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    a[i * n + p] = c * aip - s * aiq;
                    a[p * n + i] = a[i * n + p];
                    a[i * n + q] = s * aip + c * aiq;
                    a[q * n + i] = a[i * n + q];
                }
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
    }
    Err(())
}
