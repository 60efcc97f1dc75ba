//! Hermitian eigendecomposition.
//!
//! Two routines sit behind [`hermitian_eig`]: real symmetric input goes
//! through Householder tridiagonalization plus implicit-shift QL (EISPACK
//! tred2/tql2 lineage, scales to N in the thousands); complex Hermitian input
//! goes through cyclic Jacobi with complex rotations, which is plenty for the
//! small matrices the verification suites draw. The contract is the
//! reconstruction invariant, not the algorithm.

use num_complex::Complex64;

use super::{ComplexMatrix, C64};
use crate::error::{Error, Result};

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are real and sorted nonincreasing; `eigenvectors` holds the
/// matching unit eigenvectors as columns, so `U diag(lambda) U^H` reconstructs
/// the input.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

const HERMITIAN_REL_TOL: f64 = 1e-9;

fn check_hermitian(a: &ComplexMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "eigendecomposition of non-square {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let norm = a.frobenius_norm();
    let dev = a.hermitian_deviation();
    if dev > HERMITIAN_REL_TOL * norm.max(1e-300) {
        return Err(Error::NotHermitian {
            deviation: dev,
            tol: HERMITIAN_REL_TOL * norm,
        });
    }
    Ok(())
}

/// Full eigendecomposition of a Hermitian matrix, eigenvalues nonincreasing.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianEig> {
    check_hermitian(a)?;
    let n = a.rows();
    if is_effectively_real(a) {
        let (mut d, mut v) = real_symmetric_eig(a, true)?;
        sort_real(&mut d, v.as_mut());
        let v = v.unwrap();
        let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| C64::new(v[i][j], 0.0));
        Ok(HermitianEig {
            eigenvalues: d,
            eigenvectors,
        })
    } else {
        let (mut d, mut v) = jacobi_hermitian(a, true)?;
        sort_complex(&mut d, v.as_mut());
        Ok(HermitianEig {
            eigenvalues: d,
            eigenvectors: v.unwrap(),
        })
    }
}

/// Eigenvalues only, nonincreasing. Cheaper than [`hermitian_eig`] for the
/// bound computations that never touch eigenvectors.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(a)?;
    let mut d = if is_effectively_real(a) {
        real_symmetric_eig(a, false)?.0
    } else {
        jacobi_hermitian(a, false)?.0
    };
    sort_real(&mut d, None);
    Ok(d)
}

fn is_effectively_real(a: &ComplexMatrix) -> bool {
    let scale = a.frobenius_norm().max(1e-300);
    a.max_imag() <= 1e-13 * scale
}

fn sort_real(d: &mut [f64], v: Option<&mut Vec<Vec<f64>>>) {
    let n = d.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[j].total_cmp(&d[i]));
    let sorted: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    d.copy_from_slice(&sorted);
    if let Some(v) = v {
        for row in v.iter_mut() {
            let permuted: Vec<f64> = order.iter().map(|&j| row[j]).collect();
            *row = permuted;
        }
    }
}

fn sort_complex(d: &mut [f64], v: Option<&mut ComplexMatrix>) {
    let n = d.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[j].total_cmp(&d[i]));
    let sorted: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    d.copy_from_slice(&sorted);
    if let Some(v) = v {
        let old = v.clone();
        for i in 0..n {
            for (jn, &jo) in order.iter().enumerate() {
                v[(i, jn)] = old[(i, jo)];
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Real symmetric path: tred2 + tql2.
// ---------------------------------------------------------------------------

type RealEig = (Vec<f64>, Option<Vec<Vec<f64>>>);

fn real_symmetric_eig(a: &ComplexMatrix, want_vectors: bool) -> Result<RealEig> {
    let n = a.rows();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| 0.5 * (a[(i, j)].re + a[(j, i)].re))
                .collect()
        })
        .collect();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut v, &mut d, &mut e, want_vectors);
    tql2(&mut v, &mut d, &mut e, want_vectors)?;
    Ok((d, want_vectors.then_some(v)))
}

/// Householder reduction to symmetric tridiagonal form.
#[allow(clippy::needless_range_loop, clippy::manual_memcpy)] // index form mirrors the classic algorithm
fn tred2(v: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64], want_vectors: bool) {
    let n = d.len();
    for j in 0..n {
        d[j] = v[n - 1][j];
    }

    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for item in d.iter().take(i) {
            scale += item.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[i - 1][j];
                v[i][j] = 0.0;
                v[j][i] = 0.0;
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for item in e.iter_mut().take(i) {
                *item = 0.0;
            }
            for j in 0..i {
                let f = d[j];
                v[j][i] = f;
                let mut g = e[j] + v[j][j] * f;
                for k in (j + 1)..i {
                    g += v[k][j] * d[k];
                    e[k] += v[k][j] * f;
                }
                e[j] = g;
            }
            let mut f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                let f = d[j];
                let g = e[j];
                for k in j..i {
                    v[k][j] -= f * e[k] + g * d[k];
                }
                d[j] = v[i - 1][j];
                v[i][j] = 0.0;
            }
        }
        d[i] = h;
    }

    if want_vectors {
        for i in 0..(n - 1) {
            v[n - 1][i] = v[i][i];
            v[i][i] = 1.0;
            let h = d[i + 1];
            if h != 0.0 {
                for k in 0..=i {
                    d[k] = v[k][i + 1] / h;
                }
                for j in 0..=i {
                    let mut g = 0.0;
                    for k in 0..=i {
                        g += v[k][i + 1] * v[k][j];
                    }
                    for k in 0..=i {
                        v[k][j] -= g * d[k];
                    }
                }
            }
            for k in 0..=i {
                v[k][i + 1] = 0.0;
            }
        }
        for j in 0..n {
            d[j] = v[n - 1][j];
            v[n - 1][j] = 0.0;
        }
        v[n - 1][n - 1] = 1.0;
    } else {
        // Without accumulation the tridiagonal diagonal is still sitting on
        // the (transformed) diagonal of v.
        for (j, item) in d.iter_mut().enumerate() {
            *item = v[j][j];
        }
    }
    e[0] = 0.0;
}

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix.
fn tql2(v: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64], want_vectors: bool) -> Result<()> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = 2.0_f64.powi(-52);
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 60 {
                    return Err(Error::NoConvergence { sweeps: iter });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for item in d.iter_mut().take(n).skip(l + 2) {
                    *item -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if want_vectors {
                        for row in v.iter_mut() {
                            let h = row[i + 1];
                            row[i + 1] = s * row[i] + c * h;
                            row[i] = c * row[i] - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Complex Hermitian path: cyclic Jacobi with complex rotations.
// ---------------------------------------------------------------------------

fn jacobi_hermitian(
    a: &ComplexMatrix,
    want_vectors: bool,
) -> Result<(Vec<f64>, Option<ComplexMatrix>)> {
    let n = a.rows();
    // Symmetrize to kill roundoff-level asymmetry before iterating.
    let mut m = ComplexMatrix::from_fn(n, n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)].conj()));
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n));

    let norm = m.frobenius_norm().max(1e-300);
    let target = 1e-14 * norm;
    let max_sweeps = 60;
    for sweep in 0..=max_sweeps {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[(p, q)].norm_sqr();
            }
        }
        if (2.0 * off).sqrt() <= target {
            let d: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
            return Ok((d, v));
        }
        if sweep == max_sweeps {
            return Err(Error::NoConvergence { sweeps: max_sweeps });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r <= 1e-300 {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let phase = apq / r; // e^{i phi}

                // Column update: M <- M G.
                for k in 0..n {
                    let mp = m[(k, p)];
                    let mq = m[(k, q)];
                    m[(k, p)] = c * mp - s * phase.conj() * mq;
                    m[(k, q)] = s * phase * mp + c * mq;
                }
                // Row update: M <- G^H M.
                for k in 0..n {
                    let mp = m[(p, k)];
                    let mq = m[(q, k)];
                    m[(p, k)] = c * mp - s * phase * mq;
                    m[(q, k)] = s * phase.conj() * mp + c * mq;
                }
                // Pin the targeted entries; roundoff leaves dust otherwise.
                m[(p, q)] = Complex64::new(0.0, 0.0);
                m[(q, p)] = Complex64::new(0.0, 0.0);
                m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);

                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vp = v[(k, p)];
                        let vq = v[(k, q)];
                        v[(k, p)] = c * vp - s * phase.conj() * vq;
                        v[(k, q)] = s * phase * vp + c * vq;
                    }
                }
            }
        }
    }
    unreachable!()
}
