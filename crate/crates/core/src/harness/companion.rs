use crate::numerics::{eigenvalues, symmetric_eigen, tol, DenseMatrix};
use crate::{Error, Result};

/// The `2d×2d` heavy-ball iteration matrix
///
/// ```text
/// T = [ (1+β)I − γA   −βI ]
///     [      I          0 ]
/// ```
///
/// One heavy-ball step on the quadratic with Hessian `A` maps the stacked
/// error `(xᵏ − x*, xᵏ⁻¹ − x*)` through `T`, so `ρ(T)` is the asymptotic
/// contraction rate.
pub fn companion_matrix(gamma: f64, beta: f64, a: &DenseMatrix) -> DenseMatrix {
    let d = a.rows();
    let mut t = DenseMatrix::zeros(2 * d, 2 * d);
    for i in 0..d {
        for j in 0..d {
            t[(i, j)] = -gamma * a[(i, j)];
        }
        t[(i, i)] += 1.0 + beta;
        t[(i, d + i)] = -beta;
        t[(d + i, i)] = 1.0;
    }
    t
}

/// `ρ(T)` by two routes that must agree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralRadius {
    /// From the dense eigensolve of the full `2d×2d` matrix.
    pub rho: f64,
    /// From the per-mode quadratic `λ + β/λ = λ*`, where `λ*` ranges over the
    /// eigenvalues of `(1+β)I − γA`.
    pub rho_fast: f64,
}

/// Spectral radius of the heavy-ball iteration matrix for symmetric
/// positive-definite `A`.
///
/// Each eigenvalue `μ` of `A` contributes the pair solving
/// `λ² − (1+β−γμ)λ + β = 0`: a real pair when the discriminant is
/// nonnegative, else a conjugate pair of modulus `√β`. The dense eigensolve
/// of `T` must agree with that closed form within `1e-8`, otherwise the
/// computation errors out.
///
/// (The ratio analysis downstream additionally assumes the smallest
/// eigenvalue of `A` is simple; this oracle itself does not require it.)
pub fn companion_spectral_radius(
    gamma: f64,
    beta: f64,
    a: &DenseMatrix,
) -> Result<SpectralRadius> {
    if gamma.is_nan() || gamma <= 0.0 {
        return Err(Error::Domain(format!("gamma must be positive, got {gamma}")));
    }
    if !(0.0..1.0).contains(&beta) {
        return Err(Error::Domain(format!("beta must lie in [0, 1), got {beta}")));
    }
    if !a.is_symmetric() {
        return Err(Error::Domain(
            "the iteration-matrix oracle needs a symmetric Hessian".into(),
        ));
    }

    let t = companion_matrix(gamma, beta, a);
    let eigs = eigenvalues(&t)?;
    let rho = stabilized_max_modulus(&eigs, beta);

    let modes = symmetric_eigen(a)?;
    let rho_fast = modes
        .values
        .iter()
        .map(|&mu| {
            let lambda_star = 1.0 + beta - gamma * mu;
            let disc = lambda_star * lambda_star - 4.0 * beta;
            let disc_scale = lambda_star * lambda_star + 4.0 * beta;
            if disc.abs() <= 4.0 * f64::EPSILON * disc_scale {
                // Discriminant below roundoff: the defective double root.
                0.5 * lambda_star.abs()
            } else if disc >= 0.0 {
                0.5 * (lambda_star.abs() + disc.sqrt())
            } else {
                beta.sqrt()
            }
        })
        .fold(0.0f64, f64::max);

    if (rho - rho_fast).abs() > tol::COMPANION_AGREEMENT {
        return Err(Error::CrossCheck {
            a: rho,
            b: rho_fast,
            tol: tol::COMPANION_AGREEMENT,
        });
    }
    Ok(SpectralRadius { rho, rho_fast })
}

/// Max modulus over the spectrum of `T`, with one standardization: a mode
/// sitting exactly on the real↔complex boundary (the ν-mode at the optimal β)
/// is a defective double root, which a dense eigensolve can only resolve to
/// `O(√ε)` — it may come back as two real values split by ~1e-8. Such a pair
/// is recognizable because it is near-coincident with product ≈ β (every mode
/// pair of `T` multiplies to β), and its modulus is recovered through the
/// product, which is accurate to `O(ε)`. Well-separated real pairs and
/// complex pairs are used as computed.
fn stabilized_max_modulus(eigs: &[crate::numerics::Complex], beta: f64) -> f64 {
    let mut reals: Vec<f64> = eigs.iter().filter(|c| c.im == 0.0).map(|c| c.re).collect();
    reals.sort_by(f64::total_cmp);
    let mut max = eigs
        .iter()
        .filter(|c| c.im != 0.0)
        .map(|c| c.modulus())
        .fold(0.0f64, f64::max);
    let mut i = 0;
    while i < reals.len() {
        let a = reals[i];
        if i + 1 < reals.len() {
            let b = reals[i + 1];
            let coincident = (a - b).abs() <= 1e-5 * a.abs().max(1.0);
            let product_is_beta = (a * b - beta).abs() <= 1e-6 * beta.max(1.0);
            if coincident && product_is_beta {
                max = max.max((a * b).abs().sqrt());
                i += 2;
                continue;
            }
        }
        max = max.max(a.abs());
        i += 1;
    }
    max
}
