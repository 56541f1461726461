use crate::numerics::{tol, DenseMatrix};
use crate::{Error, Result};

/// A complex number, just enough for eigenvalue reporting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// Eigenvalues of a square matrix, in no particular order.
///
/// Symmetric inputs (exact symmetry, see [`DenseMatrix::is_symmetric`]) are
/// routed to the Jacobi solver and come back real; general matrices go through
/// Hessenberg reduction followed by Francis double-shift QR.
pub fn eigenvalues(a: &DenseMatrix) -> Result<Vec<Complex>> {
    check_square(a)?;
    if a.is_symmetric() {
        let eig = jacobi(a, false)?;
        return Ok(eig.values.into_iter().map(|v| Complex::new(v, 0.0)).collect());
    }
    let mut h = a.clone();
    hessenberg_in_place(&mut h);
    francis_qr_eigenvalues(h)
}

/// Eigen-decomposition of a symmetric matrix: ascending eigenvalues and an
/// orthogonal matrix whose columns are the matching eigenvectors.
pub fn symmetric_eigen(a: &DenseMatrix) -> Result<SymmetricEigen> {
    check_square(a)?;
    if !a.is_symmetric() {
        return Err(Error::Domain(
            "symmetric_eigen requires an exactly symmetric matrix".into(),
        ));
    }
    let mut eig = jacobi(a, true)?;
    // Ascending order, vectors permuted alongside.
    let n = eig.values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.values[i].total_cmp(&eig.values[j]));
    let values: Vec<f64> = order.iter().map(|&i| eig.values[i]).collect();
    let old = eig.vectors.take().expect("vectors requested");
    let mut vectors = DenseMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, new_col)] = old[(row, old_col)];
        }
    }
    Ok(SymmetricEigen { values, vectors })
}

/// Result of [`symmetric_eigen`].
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Eigenvalues, ascending.
    pub values: Vec<f64>,
    /// Column `j` is the eigenvector of `values[j]`.
    pub vectors: DenseMatrix,
}

fn check_square(a: &DenseMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::InvalidDimension {
            dim: a.rows(),
            reason: "eigenvalues need a square matrix",
        });
    }
    if a.rows() > tol::MAX_EIGEN_DIM {
        return Err(Error::InvalidDimension {
            dim: a.rows(),
            reason: "dimension above the supported eigensolver limit",
        });
    }
    Ok(())
}

struct JacobiOut {
    values: Vec<f64>,
    vectors: Option<DenseMatrix>,
}

/// Cyclic Jacobi for symmetric matrices.
fn jacobi(a: &DenseMatrix, want_vectors: bool) -> Result<JacobiOut> {
    const MAX_SWEEPS: usize = 100;
    let n = a.rows();
    let mut m = a.clone();
    let mut v = want_vectors.then(|| DenseMatrix::identity(n));

    let frob: f64 = {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += m[(i, j)] * m[(i, j)];
            }
        }
        s.sqrt()
    };
    if frob == 0.0 {
        return Ok(JacobiOut {
            values: vec![0.0; n],
            vectors: v,
        });
    }
    let stop = 1e-15 * frob;

    for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += m[(i, j)] * m[(i, j)];
            }
        }
        if (2.0 * off).sqrt() <= stop {
            let values = (0..n).map(|i| m[(i, i)]).collect();
            return Ok(JacobiOut { values, vectors: v });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                // Below roundoff relative to the diagonal: zero it directly.
                if apq.abs() <= f64::EPSILON * 0.5 * (app.abs() + aqq.abs()) {
                    m[(p, q)] = 0.0;
                    m[(q, p)] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    // Avoid overflow in theta²; the rotation is tiny anyway.
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                m[(p, p)] = app - t * apq;
                m[(q, q)] = aqq + t * apq;
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
                for i in 0..n {
                    if i != p && i != q {
                        let aip = m[(i, p)];
                        let aiq = m[(i, q)];
                        let new_ip = aip - s * (aiq + tau * aip);
                        let new_iq = aiq + s * (aip - tau * aiq);
                        m[(i, p)] = new_ip;
                        m[(p, i)] = new_ip;
                        m[(i, q)] = new_iq;
                        m[(q, i)] = new_iq;
                    }
                }
                if let Some(vv) = v.as_mut() {
                    for i in 0..n {
                        let vip = vv[(i, p)];
                        let viq = vv[(i, q)];
                        vv[(i, p)] = vip - s * (viq + tau * vip);
                        vv[(i, q)] = viq + s * (vip - tau * viq);
                    }
                }
            }
        }
    }
    Err(Error::NoConvergence { budget: MAX_SWEEPS })
}

/// Householder reduction to upper Hessenberg form, in place. Transformations
/// are similarity transforms, so eigenvalues are preserved; the orthogonal
/// factor is not accumulated because only eigenvalues are needed downstream.
fn hessenberg_in_place(h: &mut DenseMatrix) {
    let n = h.rows();
    if n < 3 {
        return;
    }
    for col in 0..(n - 2) {
        // Householder vector annihilating h[col+2.., col].
        let mut scale = 0.0;
        for i in (col + 1)..n {
            scale += h[(i, col)].abs();
        }
        if scale == 0.0 {
            continue;
        }
        let mut u = vec![0.0; n];
        let mut sigma = 0.0;
        for i in (col + 1)..n {
            u[i] = h[(i, col)] / scale;
            sigma += u[i] * u[i];
        }
        let mut alpha = sigma.sqrt();
        if u[col + 1] > 0.0 {
            alpha = -alpha;
        }
        let beta = sigma - u[col + 1] * alpha;
        if beta == 0.0 {
            continue;
        }
        u[col + 1] -= alpha;

        // H ← P H P with P = I − u uᵀ / beta.
        for j in 0..n {
            let mut dot = 0.0;
            for i in (col + 1)..n {
                dot += u[i] * h[(i, j)];
            }
            let f = dot / beta;
            for i in (col + 1)..n {
                h[(i, j)] -= f * u[i];
            }
        }
        for i in 0..n {
            let mut dot = 0.0;
            for j in (col + 1)..n {
                dot += h[(i, j)] * u[j];
            }
            let f = dot / beta;
            for j in (col + 1)..n {
                h[(i, j)] -= f * u[j];
            }
        }
        h[(col + 1, col)] = scale * alpha;
        for i in (col + 2)..n {
            h[(i, col)] = 0.0;
        }
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix; eigenvalues only.
///
/// The classic algorithm (Wilkinson/EISPACK lineage) with two adjustments:
/// small-subdiagonal tests use explicit epsilon comparisons instead of the
/// historical `x + s == s` underflow idiom, and a trailing 2×2 whose
/// discriminant is below roundoff is reported as a defective double root
/// rather than split by the square root of noise.
fn francis_qr_eigenvalues(mut h: DenseMatrix) -> Result<Vec<Complex>> {
    const MAX_ITS: usize = 120;
    let n = h.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let eps = f64::EPSILON;
    let mut wr = vec![0.0; n];
    let mut wi = vec![0.0; n];

    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += h[(i, j)].abs();
        }
    }
    if anorm == 0.0 {
        return Ok(vec![Complex::new(0.0, 0.0); n]);
    }

    let mut nn = n as isize - 1;
    let mut t = 0.0;
    while nn >= 0 {
        let mut its = 0usize;
        loop {
            let hi = nn as usize;
            // Look for a single small subdiagonal element.
            let mut l = 0usize;
            for ll in (1..=hi).rev() {
                let mut s = h[(ll - 1, ll - 1)].abs() + h[(ll, ll)].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if h[(ll, ll - 1)].abs() <= eps * s {
                    h[(ll, ll - 1)] = 0.0;
                    l = ll;
                    break;
                }
            }
            let mut x = h[(hi, hi)];
            if l == hi {
                // One real root.
                wr[hi] = x + t;
                wi[hi] = 0.0;
                nn -= 1;
                break;
            }
            let y = h[(hi - 1, hi - 1)];
            let mut w = h[(hi, hi - 1)] * h[(hi - 1, hi)];
            if l + 1 == hi {
                // Roots of the trailing 2×2 block.
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let z = q.abs().sqrt();
                x += t;
                let q_scale = p * p + w.abs();
                if q_scale > 0.0 && q.abs() <= 4.0 * eps * q_scale {
                    // Discriminant indistinguishable from zero.
                    wr[hi - 1] = x + p;
                    wr[hi] = x + p;
                    wi[hi - 1] = 0.0;
                    wi[hi] = 0.0;
                } else if q >= 0.0 {
                    let zz = p + z.copysign(p);
                    wr[hi - 1] = x + zz;
                    wr[hi] = wr[hi - 1];
                    if zz != 0.0 {
                        wr[hi] = x - w / zz;
                    }
                    wi[hi - 1] = 0.0;
                    wi[hi] = 0.0;
                } else {
                    wr[hi - 1] = x + p;
                    wr[hi] = x + p;
                    wi[hi - 1] = -z;
                    wi[hi] = z;
                }
                nn -= 2;
                break;
            }
            // No root found yet: one double-shift QR sweep.
            if its == MAX_ITS {
                return Err(Error::NoConvergence { budget: MAX_ITS });
            }
            let mut yy = y;
            if its > 0 && its.is_multiple_of(10) {
                // Exceptional shift.
                t += x;
                for i in 0..=hi {
                    let d = h[(i, i)];
                    h[(i, i)] = d - x;
                }
                let s = h[(hi, hi - 1)].abs() + h[(hi - 1, hi - 2)].abs();
                x = 0.75 * s;
                yy = x;
                w = -0.4375 * s * s;
            }
            its += 1;

            // Find two consecutive small subdiagonal elements.
            let mut m = hi - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = h[(m, m)];
                let rr = x - z;
                let ss = yy - z;
                p = (rr * ss - w) / h[(m + 1, m)] + h[(m, m + 1)];
                q = h[(m + 1, m + 1)] - z - rr - ss;
                r = h[(m + 2, m + 1)];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = h[(m, m - 1)].abs() * (q.abs() + r.abs());
                let v = p.abs() * (h[(m - 1, m - 1)].abs() + z.abs() + h[(m + 1, m + 1)].abs());
                if u <= eps * v {
                    break;
                }
                m -= 1;
            }
            for i in (m + 2)..=hi {
                h[(i, i - 2)] = 0.0;
                if i != m + 2 {
                    h[(i, i - 3)] = 0.0;
                }
            }
            // Double QR step on rows l..=hi, columns l..=hi.
            for k in m..hi {
                if k != m {
                    p = h[(k, k - 1)];
                    q = h[(k + 1, k - 1)];
                    r = 0.0;
                    if k + 1 != hi {
                        r = h[(k + 2, k - 1)];
                    }
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = (p * p + q * q + r * r).sqrt().copysign(p);
                if s == 0.0 {
                    continue;
                }
                if k == m {
                    if l != m {
                        h[(k, k - 1)] = -h[(k, k - 1)];
                    }
                } else {
                    h[(k, k - 1)] = -s * x;
                }
                p += s;
                x = p / s;
                let y2 = q / s;
                let z2 = r / s;
                q /= p;
                r /= p;
                for j in k..=hi {
                    let mut pp = h[(k, j)] + q * h[(k + 1, j)];
                    if k + 1 != hi {
                        pp += r * h[(k + 2, j)];
                        h[(k + 2, j)] -= pp * z2;
                    }
                    h[(k + 1, j)] -= pp * y2;
                    h[(k, j)] -= pp * x;
                }
                let mmin = hi.min(k + 3);
                for i in l..=mmin {
                    let mut pp = x * h[(i, k)] + y2 * h[(i, k + 1)];
                    if k + 1 != hi {
                        pp += z2 * h[(i, k + 2)];
                        h[(i, k + 2)] -= pp * r;
                    }
                    h[(i, k + 1)] -= pp * q;
                    h[(i, k)] -= pp;
                }
            }
        }
    }
    Ok(wr
        .into_iter()
        .zip(wi)
        .map(|(re, im)| Complex::new(re, im))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{RealVector, SeededRng};

    fn sorted_real_parts(eigs: &[Complex]) -> Vec<f64> {
        let mut re: Vec<f64> = eigs.iter().map(|c| c.re).collect();
        re.sort_by(f64::total_cmp);
        re
    }

    #[test]
    fn diagonal_matrix() {
        let a = DenseMatrix::from_rows(&[&[1.0, 0.0, 0.0], &[0.0, 2.0, 0.0], &[0.0, 0.0, 3.0]])
            .unwrap();
        let eigs = eigenvalues(&a).unwrap();
        assert_eq!(sorted_real_parts(&eigs), vec![1.0, 2.0, 3.0]);
        assert!(eigs.iter().all(|c| c.im == 0.0));
    }

    #[test]
    fn companion_two_by_two_complex_pair() {
        // Heavy-ball mode matrix for γ=0.1, ν=1, β=0.81:
        // [[1.71, −0.81], [1, 0]] has a complex pair of modulus √0.81 = 0.9.
        let a = DenseMatrix::from_rows(&[&[1.71, -0.81], &[1.0, 0.0]]).unwrap();
        let eigs = eigenvalues(&a).unwrap();
        assert_eq!(eigs.len(), 2);
        for c in &eigs {
            assert!(c.im != 0.0, "expected a complex pair, got {c:?}");
            assert!((c.modulus() - 0.9).abs() < 1e-12, "modulus {}", c.modulus());
        }
    }

    #[test]
    fn upper_triangular_reads_off_diagonal() {
        let a = DenseMatrix::from_rows(&[&[4.0, 1.0, -2.0], &[0.0, -1.0, 3.0], &[0.0, 0.0, 2.5]])
            .unwrap();
        let eigs = eigenvalues(&a).unwrap();
        let re = sorted_real_parts(&eigs);
        assert!((re[0] - -1.0).abs() < 1e-10);
        assert!((re[1] - 2.5).abs() < 1e-10);
        assert!((re[2] - 4.0).abs() < 1e-10);
    }

    #[test]
    fn symmetric_path_matches_general_path() {
        let mut rng = SeededRng::new(5);
        let n = 12;
        let mut a = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = rng.next_normal();
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
        }
        let sym = symmetric_eigen(&a).unwrap();
        // Break exact symmetry detection by going through the QR path directly.
        let mut h = a.clone();
        hessenberg_in_place(&mut h);
        let general = francis_qr_eigenvalues(h).unwrap();
        let mut gen_re = sorted_real_parts(&general);
        for c in &general {
            assert!(
                c.im.abs() <= tol::SYMMETRIC_IMAG,
                "imag part {} on symmetric input",
                c.im
            );
        }
        for (a, b) in sym.values.iter().zip(gen_re.iter_mut()) {
            assert!((a - *b).abs() < 1e-9, "jacobi {a} vs qr {b}");
        }
    }

    #[test]
    fn jacobi_eigenpairs_have_small_residual() {
        let mut rng = SeededRng::new(9);
        let n = 20;
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = rng.next_normal();
            }
        }
        let mut a = m.times_own_transpose();
        for i in 0..n {
            a[(i, i)] += 0.5;
        }
        let eig = symmetric_eigen(&a).unwrap();
        let scale = a.max_norm();
        for (j, &lambda) in eig.values.iter().enumerate() {
            let v: Vec<f64> = (0..n).map(|i| eig.vectors[(i, j)]).collect();
            let v = RealVector::new(v).unwrap();
            let av = a.matvec(&v);
            let resid = av.sub(&v.scale(lambda)).norm();
            assert!(
                resid <= tol::EIGEN_RESIDUAL * scale,
                "residual {resid} for eigenvalue {lambda}"
            );
        }
        // Ascending order.
        for w in eig.values.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn rejects_non_square_and_oversized() {
        let a = DenseMatrix::zeros(2, 3);
        assert!(eigenvalues(&a).is_err());
    }

    #[test]
    fn known_complex_rotation_scaling() {
        // r·rotation(θ): eigenvalues r·e^{±iθ}.
        let (r, th) = (0.7, 0.3f64);
        let a = DenseMatrix::from_rows(&[
            &[r * th.cos(), -r * th.sin()],
            &[r * th.sin(), r * th.cos()],
        ])
        .unwrap();
        let eigs = eigenvalues(&a).unwrap();
        for c in eigs {
            assert!((c.modulus() - r).abs() < 1e-12);
            assert!((c.re - r * th.cos()).abs() < 1e-12);
            assert!((c.im.abs() - r * th.sin()).abs() < 1e-12);
        }
    }
}
