use crate::numerics::RealVector;
use crate::{Error, Result};

/// Central-difference gradient: `(f(x + h·eᵢ) − f(x − h·eᵢ)) / (2h)` per
/// coordinate.
///
/// This is the gradient-correctness oracle the analytic gradients are tested
/// against; it deliberately shares no code with them.
pub fn finite_difference_gradient<F>(f: F, x: &RealVector, h: f64) -> Result<RealVector>
where
    F: Fn(&RealVector) -> f64,
{
    if h.is_nan() || h <= 0.0 {
        return Err(Error::Domain(format!("step h must be positive, got {h}")));
    }
    let mut grad = vec![0.0; x.len()];
    let mut probe = x.clone();
    for (i, g) in grad.iter_mut().enumerate() {
        let xi = x[i];
        probe[i] = xi + h;
        let fp = f(&probe);
        probe[i] = xi - h;
        let fm = f(&probe);
        probe[i] = xi;
        if !fp.is_finite() || !fm.is_finite() {
            return Err(Error::NonFiniteValue {
                context: "finite_difference_gradient",
            });
        }
        *g = (fp - fm) / (2.0 * h);
    }
    RealVector::new(grad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_gradient_is_recovered() {
        let f = |x: &RealVector| 0.5 * x.dot(x);
        let x = RealVector::new(vec![1.0, -2.0]).unwrap();
        let g = finite_difference_gradient(f, &x, 1e-5).unwrap();
        assert!((g[0] - 1.0).abs() < 1e-8);
        assert!((g[1] - -2.0).abs() < 1e-8);
    }

    #[test]
    fn constant_function_has_zero_gradient() {
        let g = finite_difference_gradient(|_| 3.25, &RealVector::zeros(4), 1e-6).unwrap();
        assert!(g.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn non_finite_evaluation_is_an_error() {
        let f = |x: &RealVector| if x[0] > 0.5 { f64::NAN } else { 0.0 };
        let x = RealVector::new(vec![0.5]).unwrap();
        assert!(matches!(
            finite_difference_gradient(f, &x, 1e-3),
            Err(Error::NonFiniteValue { .. })
        ));
    }

    #[test]
    fn zero_step_is_rejected() {
        assert!(finite_difference_gradient(|_| 0.0, &RealVector::zeros(1), 0.0).is_err());
    }
}
