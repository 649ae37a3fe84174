use std::fmt::Debug;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar used by the Monte Carlo and quadrature paths.
pub trait Real: Float + FromPrimitive + ToPrimitive + Debug + Send + Sync + 'static {
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 is representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `ln(Σ exp(v))` without overflow; `-inf` for an empty or all `-inf` input.
pub fn log_sum_exp<S: Real>(values: impl IntoIterator<Item = S>) -> S {
    let values: Vec<S> = values.into_iter().collect();
    let max = values.iter().copied().fold(S::neg_infinity(), S::max);
    if max == S::neg_infinity() {
        return max;
    }
    let sum = values.iter().fold(S::zero(), |acc, &v| acc + (v - max).exp());
    max + sum.ln()
}
