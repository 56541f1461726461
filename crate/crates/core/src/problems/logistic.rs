use std::io::{BufRead, Write};

use crate::numerics::{cholesky_lower, standard_normals, DenseMatrix, RealVector, SeededRng};
use crate::problems::{FiniteSum, Objective};
use crate::{Error, Result};

/// Binary logistic regression with ±1 labels:
///
/// ```text
/// f(x) = (1/2n) Σᵢ log(1 + exp(−bᵢ·aᵢᵀx))
/// ```
///
/// Margins are evaluated through a branchless-stable softplus, so saturated
/// samples neither overflow nor lose the tiny tail values.
#[derive(Debug, Clone)]
pub struct LogisticProblem {
    /// n×d feature matrix, rows are the samples aᵢ.
    features: DenseMatrix,
    /// Labels in {−1, +1}.
    labels: Vec<f64>,
}

/// `log(1 + exp(t))`, using `t` directly once `exp(t)` would swamp the 1.
fn softplus(t: f64) -> f64 {
    if t > 30.0 {
        t
    } else {
        t.exp().ln_1p()
    }
}

/// Dot product with four independent accumulators: a fixed summation order
/// (so results are reproducible per build) that breaks the serial dependency
/// chain and lets the compiler vectorize.
fn dot_unrolled(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0f64; 4];
    let chunks = a.len() / 4;
    for i in 0..chunks {
        let j = 4 * i;
        acc[0] += a[j] * b[j];
        acc[1] += a[j + 1] * b[j + 1];
        acc[2] += a[j + 2] * b[j + 2];
        acc[3] += a[j + 3] * b[j + 3];
    }
    let mut tail = 0.0;
    for j in (4 * chunks)..a.len() {
        tail += a[j] * b[j];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// Logistic sigmoid `1 / (1 + exp(−u))`, stable at both tails.
fn sigmoid(u: f64) -> f64 {
    if u >= 0.0 {
        1.0 / (1.0 + (-u).exp())
    } else {
        let e = u.exp();
        e / (1.0 + e)
    }
}

impl LogisticProblem {
    pub fn new(features: DenseMatrix, labels: Vec<f64>) -> Result<Self> {
        if features.rows() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: features.rows(),
                actual: labels.len(),
            });
        }
        if labels.iter().any(|&b| b != 1.0 && b != -1.0) {
            return Err(Error::Domain("labels must be +1 or -1".into()));
        }
        Ok(Self { features, labels })
    }

    pub fn n_samples(&self) -> usize {
        self.labels.len()
    }

    pub fn features(&self) -> &DenseMatrix {
        &self.features
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn sample(&self, i: usize) -> (&[f64], f64) {
        (self.features.row(i), self.labels[i])
    }

    /// Value and gradient over an index multiset: `(1/2m) Σ_{i∈batch} …`.
    /// With `batch = 0..n` this is the exact value/gradient pair.
    pub fn batch_value_grad(&self, x: &RealVector, batch: &[usize]) -> (f64, RealVector) {
        let m = batch.len();
        assert!(m > 0, "empty batch");
        let d = self.features.cols();
        debug_assert_eq!(x.len(), d);
        let half_inv_m = 0.5 / m as f64;
        let mut value = 0.0;
        let mut grad = vec![0.0; d];
        for &i in batch {
            let (row, b) = self.sample(i);
            let margin = dot_unrolled(row, x.as_slice());
            let t = -b * margin;
            value += softplus(t);
            // d/dx softplus(−b·aᵀx) = −b·sigmoid(−b·aᵀx)·a
            let w = -b * sigmoid(t) * half_inv_m;
            for (g, a) in grad.iter_mut().zip(row) {
                *g += w * a;
            }
        }
        (value * half_inv_m, RealVector::from_vec_unchecked(grad))
    }

    /// Upper bound on the smoothness constant of `f`: `λ_max(XᵀX)/(8n)`,
    /// since each per-sample Hessian is `σ'(m)·aaᵀ/(2n)` with `σ' ≤ 1/4`.
    ///
    /// `λ_max(XᵀX)` is obtained by power iteration on `v ↦ Xᵀ(Xv)` from a
    /// fixed deterministic start.
    pub fn smoothness_bound(&self) -> f64 {
        let n = self.n_samples();
        let d = self.features.cols();
        let mut rng = SeededRng::new(0x5e1f);
        let mut v = standard_normals(&mut rng, d);
        let mut lambda = 0.0;
        for _ in 0..2000 {
            let w = self.features.matvec(&v);
            let next = self.features.matvec_transpose(&w);
            let norm = next.norm();
            if norm == 0.0 {
                return 0.0;
            }
            let new_lambda = next.dot(&v) / v.dot(&v);
            v = next.scale(1.0 / norm);
            if (new_lambda - lambda).abs() <= 1e-12 * new_lambda.abs() {
                lambda = new_lambda;
                break;
            }
            lambda = new_lambda;
        }
        lambda / (8.0 * n as f64)
    }

    /// Writes the dataset as CSV rows `label,feature_1,…,feature_d`.
    pub fn export_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for i in 0..self.n_samples() {
            let (row, b) = self.sample(i);
            write!(out, "{}", b as i64)?;
            for a in row {
                write!(out, ",{a}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    /// Reads a dataset written by [`export_csv`](Self::export_csv).
    pub fn import_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut labels = Vec::new();
        let mut data = Vec::new();
        let mut cols: Option<usize> = None;
        for (lineno, line) in input.lines().enumerate() {
            let line = line.map_err(|e| Error::Config(format!("read error: {e}")))?;
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split(',');
            let label: f64 = fields
                .next()
                .unwrap()
                .parse()
                .map_err(|e| Error::Config(format!("line {}: bad label: {e}", lineno + 1)))?;
            let row: Vec<f64> = fields
                .map(|f| {
                    f.parse().map_err(|e| {
                        Error::Config(format!("line {}: bad feature: {e}", lineno + 1))
                    })
                })
                .collect::<Result<_>>()?;
            match cols {
                None => cols = Some(row.len()),
                Some(c) if c != row.len() => {
                    return Err(Error::Config(format!(
                        "line {}: expected {c} features, got {}",
                        lineno + 1,
                        row.len()
                    )));
                }
                _ => {}
            }
            labels.push(label);
            data.extend_from_slice(&row);
        }
        let d = cols.unwrap_or(0);
        let features = DenseMatrix::from_row_major(labels.len(), d, data)?;
        LogisticProblem::new(features, labels)
    }
}

impl Objective for LogisticProblem {
    fn dim(&self) -> usize {
        self.features.cols()
    }

    fn value(&self, x: &RealVector) -> f64 {
        let all: Vec<usize> = (0..self.n_samples()).collect();
        self.batch_value_grad(x, &all).0
    }

    fn gradient(&self, x: &RealVector) -> RealVector {
        let all: Vec<usize> = (0..self.n_samples()).collect();
        self.batch_value_grad(x, &all).1
    }
}

impl FiniteSum for LogisticProblem {
    fn n_terms(&self) -> usize {
        self.n_samples()
    }

    fn batch_gradient(&self, x: &RealVector, batch: &[usize]) -> RealVector {
        self.batch_value_grad(x, batch).1
    }
}

/// Synthetic dataset: rows `aᵢ = G·z` with `G Gᵀ = Toeplitz(decay⁰, decay¹, …)`
/// and `z` standard normal; labels are +1 with probability
/// `sigmoid(aᵢᵀ x_true)`, mapped to ±1 otherwise.
pub fn generate_logistic_dataset(
    n: usize,
    d: usize,
    decay: f64,
    x_true: &RealVector,
    rng: &mut SeededRng,
) -> Result<LogisticProblem> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidDimension {
            dim: 0,
            reason: "dataset needs n ≥ 1 and d ≥ 1",
        });
    }
    if decay.abs() >= 1.0 {
        return Err(Error::Domain(format!("|decay| must be < 1, got {decay}")));
    }
    if x_true.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: x_true.len(),
        });
    }
    let mut cov = DenseMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            cov[(i, j)] = decay.powi((i as i32 - j as i32).abs());
        }
    }
    let g = cholesky_lower(&cov)?;

    let mut features = DenseMatrix::zeros(n, d);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let z = standard_normals(rng, d);
        let a = g.matvec(&z);
        let margin = a.dot(x_true);
        let label = if rng.next_f64() < sigmoid(margin) {
            1.0
        } else {
            -1.0
        };
        features.row_mut(i).copy_from_slice(a.as_slice());
        labels.push(label);
    }
    LogisticProblem::new(features, labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::finite_difference_gradient;

    fn small_problem(seed: u64, n: usize, d: usize) -> LogisticProblem {
        let mut rng = SeededRng::new(seed);
        let x_true = standard_normals(&mut rng.substream(9), d);
        generate_logistic_dataset(n, d, 0.5, &x_true, &mut rng).unwrap()
    }

    #[test]
    fn value_at_zero_is_half_log_two() {
        let p = small_problem(1, 50, 6);
        let v = p.value(&RealVector::zeros(6));
        assert!((v - std::f64::consts::LN_2 / 2.0).abs() < 1e-14);
    }

    #[test]
    fn saturated_margin_has_tiny_value_and_gradient() {
        // Single sample with margin b·aᵀx = +50.
        let features = DenseMatrix::from_rows(&[&[50.0]]).unwrap();
        let p = LogisticProblem::new(features, vec![1.0]).unwrap();
        let x = RealVector::new(vec![1.0]).unwrap();
        let (v, g) = p.batch_value_grad(&x, &[0]);
        assert!(v <= 1e-20, "value {v}");
        assert!(g.norm() <= 1e-20, "gradient norm {}", g.norm());
        // And the mirror side stays finite at extreme negative margins.
        let x = RealVector::new(vec![-20.0]).unwrap();
        let (v, g) = p.batch_value_grad(&x, &[0]);
        assert!(v.is_finite() && g.is_finite());
        // Margin −1000: softplus falls back to the linear branch, value 500.
        assert!((v - 500.0).abs() < 1e-9);
    }

    #[test]
    fn analytic_gradient_matches_finite_differences() {
        let p = small_problem(7, 40, 5);
        let mut rng = SeededRng::new(99);
        for _ in 0..5 {
            let x = standard_normals(&mut rng, 5);
            let g = p.gradient(&x);
            let fd = finite_difference_gradient(|y| p.value(y), &x, 1e-5).unwrap();
            let rel = g.dist(&fd) / g.norm();
            assert!(rel <= 1e-6, "relative error {rel}");
        }
    }

    #[test]
    fn decay_zero_gives_identity_covariance() {
        let mut rng = SeededRng::new(21);
        let d = 4;
        let n = 10_000;
        let x_true = RealVector::zeros(d);
        let p = generate_logistic_dataset(n, d, 0.0, &x_true, &mut rng).unwrap();
        for j in 0..d {
            let mut mean = 0.0;
            for i in 0..n {
                mean += p.features().row(i)[j];
            }
            mean /= n as f64;
            let mut var = 0.0;
            for i in 0..n {
                let v = p.features().row(i)[j] - mean;
                var += v * v;
            }
            var /= (n - 1) as f64;
            assert!((0.9..=1.1).contains(&var), "column {j} variance {var}");
        }
    }

    #[test]
    fn zero_signal_labels_are_balanced() {
        let mut rng = SeededRng::new(5);
        let n = 10_000;
        let p = generate_logistic_dataset(n, 3, 0.5, &RealVector::zeros(3), &mut rng).unwrap();
        let pos = p.labels().iter().filter(|&&b| b == 1.0).count() as f64;
        let frac = pos / n as f64;
        // 3σ band around 1/2 for a fair coin over n trials.
        let band = 3.0 * 0.5 / (n as f64).sqrt();
        assert!(
            (frac - 0.5).abs() <= band,
            "label balance {frac} outside ±{band}"
        );
    }

    #[test]
    fn toeplitz_covariance_is_realized() {
        let mut rng = SeededRng::new(12);
        let d = 3;
        let n = 40_000;
        let decay = 0.9;
        let p =
            generate_logistic_dataset(n, d, decay, &RealVector::zeros(d), &mut rng).unwrap();
        // Empirical covariance of adjacent coordinates ≈ 0.9.
        let mut cov01 = 0.0;
        for i in 0..n {
            let row = p.features().row(i);
            cov01 += row[0] * row[1];
        }
        cov01 /= n as f64;
        assert!((cov01 - decay).abs() < 0.05, "cov(0,1) = {cov01}");
    }

    #[test]
    fn csv_round_trip_is_lossless() {
        let p = small_problem(3, 12, 4);
        let mut buf = Vec::new();
        p.export_csv(&mut buf).unwrap();
        let back = LogisticProblem::import_csv(std::io::BufReader::new(&buf[..])).unwrap();
        assert_eq!(back.labels(), p.labels());
        assert_eq!(back.features(), p.features());
    }

    #[test]
    fn bad_labels_are_rejected() {
        let features = DenseMatrix::from_rows(&[&[1.0]]).unwrap();
        assert!(LogisticProblem::new(features, vec![0.5]).is_err());
    }
}
