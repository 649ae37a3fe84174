//! Adaptive Gauss–Kronrod quadrature with certified denominators for
//! rational integrands.

use crate::error::{Error, Result};
use crate::poly::{Coefficient, Poly, RationalEvaluator, RationalFn};
use crate::scalar::Real;

/// Subinterval cap before giving up.
pub const MAX_SUBINTERVALS: usize = 1_000_000;
/// Safety factor applied to the Kronrod–Gauss difference.
pub const SAFETY: f64 = 10.0;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Result of an adaptive integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature<S> {
    pub value: S,
    /// Sum of the accepted per-interval error estimates.
    pub error: S,
    pub intervals: usize,
}

/// `(Kronrod, Gauss, Σ|f|·w)` on `[l, r]`.
fn gk15<S: Real>(f: &impl Fn(S) -> Result<S>, l: S, r: S) -> Result<(S, S, S)> {
    let half = (r - l) / S::of(2.0);
    let mid = l + half;
    let fc = f(mid)?;
    let mut kronrod = fc * S::of(WGK[7]);
    let mut gauss = fc * S::of(WG[3]);
    let mut abs = fc.abs() * S::of(WGK[7]);
    for j in 0..7 {
        let dx = half * S::of(XGK[j]);
        let (f1, f2) = (f(mid - dx)?, f(mid + dx)?);
        kronrod = kronrod + (f1 + f2) * S::of(WGK[j]);
        abs = abs + (f1.abs() + f2.abs()) * S::of(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * S::of(WG[j / 2]);
        }
    }
    Ok((kronrod * half, gauss * half, abs * half.abs()))
}

/// Integrates a smooth `f` over `[a, b]` to absolute accuracy `eps`. Each
/// interval must meet a budget proportional to its length; estimates below
/// the roundoff floor of the interval are accepted as converged.
pub fn integrate<S: Real>(f: impl Fn(S) -> Result<S>, a: S, b: S, eps: S) -> Result<Quadrature<S>> {
    if !(eps > S::zero()) {
        return Err(Error::param("eps must be positive"));
    }
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::Domain(format!("bad interval [{a:?}, {b:?}]")));
    }
    if a == b {
        return Ok(Quadrature {
            value: S::zero(),
            error: S::zero(),
            intervals: 0,
        });
    }
    let width = b - a;
    let floor = S::of(50.0) * S::epsilon();
    let mut stack = vec![(a, b)];
    let mut value = S::zero();
    let mut error = S::zero();
    let mut intervals = 0usize;
    while let Some((l, r)) = stack.pop() {
        let (k, g, abs) = gk15(&f, l, r)?;
        let est = (k - g).abs() * S::of(SAFETY);
        let budget = eps * (r - l) / width;
        let mid = l + (r - l) / S::of(2.0);
        if est <= budget || est <= floor * abs || mid <= l || mid >= r {
            if !k.is_finite() {
                return Err(Error::Convergence(format!(
                    "non-finite integrand on [{l:?}, {r:?}]"
                )));
            }
            value = value + k;
            error = error + est;
            intervals += 1;
            continue;
        }
        if stack.len() + intervals >= MAX_SUBINTERVALS {
            return Err(Error::Convergence(format!(
                "more than {MAX_SUBINTERVALS} subintervals needed on [{a:?}, {b:?}]"
            )));
        }
        stack.push((mid, r));
        stack.push((l, mid));
    }
    Ok(Quadrature {
        value,
        error,
        intervals,
    })
}

/// Checks that the denominator is positive on `[a, b] ⊂ [0, ∞)`: either by
/// coefficient signs or by interval bounds on up to 1024 pieces.
pub fn certify_denominator<T: Coefficient>(f: &RationalFn<T>, a: f64, b: f64) -> Result<()> {
    let d = &f.denominator;
    let zero_at_zero = d.coeff(0) == T::zero();
    if d.has_nonnegative_coeffs() && !d.is_zero() && (a > 0.0 || !zero_at_zero) {
        return Ok(());
    }
    if a == 0.0 && zero_at_zero {
        return Err(Error::Domain("denominator vanishes at x = 0".into()));
    }
    let den_only = RationalFn {
        numerator: Poly::one(),
        denominator: d.clone(),
    };
    let ev = den_only.evaluator();
    let mut pieces = vec![(a, b)];
    for _ in 0..10 {
        let mut failed = Vec::new();
        for &(l, r) in &pieces {
            if ev.interval(l, r).is_err() {
                failed.push((l, r));
            }
        }
        if failed.is_empty() {
            return Ok(());
        }
        pieces = failed
            .into_iter()
            .flat_map(|(l, r)| {
                let m = 0.5 * (l + r);
                [(l, m), (m, r)]
            })
            .collect();
    }
    Err(Error::Singularity { a, b })
}

/// `∫_a^b f(x) dx` for a rational `f` with a certified denominator.
pub fn integrate_rational<T: Coefficient>(f: &RationalFn<T>, a: f64, b: f64, eps: f64) -> Result<f64> {
    if a < 0.0 {
        return Err(Error::Domain(format!("lower limit {a} is negative")));
    }
    if a > b {
        return Err(Error::Domain(format!("bad interval [{a}, {b}]")));
    }
    certify_denominator(f, a, b)?;
    let ev = f.evaluator();
    Ok(integrate(|x: f64| ev.eval(x), a, b, eps)?.value)
}

/// `∫_a^b g(x)/x dx`, where `g(0) = 0` is required when `a = 0`.
///
/// For `a > 0` the integral is taken in `u = ln x` as `∫ g(e^u) du`. For
/// `a = 0` the piece `[0, min(b, 1)]` is integrated in `x` with the factor
/// `x` cancelled, and the rest in `u`.
pub fn integrate_marginal_over_x<T: Coefficient>(
    g: &RationalFn<T>,
    a: f64,
    b: f64,
    eps: f64,
) -> Result<f64> {
    if a < 0.0 {
        return Err(Error::Domain(format!("lower limit {a} is negative")));
    }
    if a > b {
        return Err(Error::Domain(format!("bad interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(0.0);
    }
    let over_x = g.divide_by_x_power(1);
    certify_denominator(&over_x, a, b)?;
    if a == 0.0 {
        let split = b.min(1.0);
        let near = integrate_rational(&over_x, 0.0, split, eps / 2.0)?;
        let far = if b > split {
            log_domain(&g.evaluator(), split, b, eps / 2.0)?
        } else {
            0.0
        };
        return Ok(near + far);
    }
    log_domain(&g.evaluator(), a, b, eps)
}

fn log_domain(ev: &RationalEvaluator, a: f64, b: f64, eps: f64) -> Result<f64> {
    Ok(integrate(|u: f64| ev.eval_ln(u), a.ln(), b.ln(), eps)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rational, rational_int};
    use crate::Rational;
    use proptest::prelude::*;

    fn p(c: &[f64]) -> Poly<f64> {
        Poly::new(c.to_vec())
    }

    #[test]
    fn closed_form_examples() {
        let inv = RationalFn::new(p(&[1.0]), p(&[0.0, 1.0])).unwrap();
        let v = integrate_rational(&inv, 1.0, 2.0, 1e-8).unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-8);
        let f = RationalFn::new(p(&[1.0, 2.0]), p(&[1.0, 1.0, 1.0])).unwrap();
        let v = integrate_rational(&f, 0.5, 1.0, 1e-8).unwrap();
        assert!((v - (12.0f64 / 7.0).ln()).abs() < 1e-8);
        assert_eq!(integrate_rational(&f, 0.7, 0.7, 1e-8).unwrap(), 0.0);
    }

    #[test]
    fn domain_and_singularity_errors() {
        let inv = RationalFn::new(p(&[1.0]), p(&[0.0, 1.0])).unwrap();
        assert!(matches!(integrate_rational(&inv, 0.0, 1.0, 1e-8), Err(Error::Domain(_))));
        assert!(matches!(integrate_rational(&inv, -1.0, 1.0, 1e-8), Err(Error::Domain(_))));
        let pole = RationalFn::new(p(&[1.0]), p(&[-1.0, 1.0])).unwrap();
        assert!(matches!(integrate_rational(&pole, 0.5, 2.0, 1e-8), Err(Error::Singularity { .. })));
        // Negative coefficients but positive on the interval.
        let ok = RationalFn::new(p(&[1.0]), p(&[-1.0, 1.0])).unwrap();
        let v = integrate_rational(&ok, 2.0, 3.0, 1e-10).unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn marginal_over_x_examples() {
        let q = rational_int(2);
        let g = RationalFn::new(Poly::<Rational>::x(), Poly::new(vec![q, rational_int(1)])).unwrap();
        let v = integrate_marginal_over_x(&g, 1.0, 3.0, 1e-10).unwrap();
        assert!((v - (5.0f64 / 3.0).ln()).abs() < 1e-10);
        let v0 = integrate_marginal_over_x(&g, 0.0, 3.0, 1e-10).unwrap();
        assert!((v0 - 2.5f64.ln()).abs() < 1e-10);
        let one = RationalFn::constant(rational_int(1));
        let v = integrate_marginal_over_x(&one, 0.5, 40.0, 1e-10).unwrap();
        assert!((v - 80f64.ln()).abs() < 1e-10);
        assert!(matches!(integrate_marginal_over_x(&one, 0.0, 1.0, 1e-8), Err(Error::Domain(_))));
        // Huge range in the log domain.
        let v = integrate_marginal_over_x(&g, 1e-3, 1e9, 1e-9).unwrap();
        assert!((v - ((1e9 + 2.0) / (1e-3 + 2.0f64)).ln()).abs() < 1e-9);
    }

    #[test]
    fn float32_path() {
        let q = integrate(|x: f32| Ok(x * x), 0.0, 1.0, 1e-5).unwrap();
        assert!((q.value - 1.0 / 3.0).abs() < 1e-5);
    }

    #[test]
    fn subinterval_cap() {
        let noise = |x: f64| Ok(crate::rng::unit_f64(crate::rng::mix64(x.to_bits())));
        let r = integrate(noise, 0.0, 1.0, 1e-12);
        assert!(matches!(r, Err(Error::Convergence(_))));
    }

    /// Σ c_i/(x + r_i) + k (2x + s)/(x² + s x + t).
    #[derive(Debug, Clone)]
    struct Blocks {
        poles: Vec<(i64, i64)>,
        quad: (i64, i64, i64),
    }

    fn blocks() -> impl Strategy<Value = Blocks> {
        (proptest::collection::vec((1i64..9, 1i64..20), 1..4), (0i64..4, 0i64..6, 1i64..10))
            .prop_map(|(poles, quad)| Blocks { poles, quad })
    }

    impl Blocks {
        fn function(&self) -> RationalFn<Rational> {
            let mut num = Poly::<Rational>::zero();
            let mut den = Poly::<Rational>::one();
            let mut add = |n: Poly<Rational>, d: Poly<Rational>| {
                num = &(&num * &d) + &(&n * &den);
                den = &den * &d;
            };
            for &(c, r) in &self.poles {
                add(Poly::constant(rational_int(c)), Poly::new(vec![rational(r, 4), rational_int(1)]));
            }
            let (k, s, t) = self.quad;
            add(
                Poly::new(vec![rational_int(k * s), rational_int(2 * k)]),
                Poly::new(vec![rational_int(t), rational_int(s), rational_int(1)]),
            );
            RationalFn::new(num, den).unwrap()
        }

        fn antiderivative(&self, x: f64) -> f64 {
            let (k, s, t) = self.quad;
            self.poles
                .iter()
                .map(|&(c, r)| c as f64 * (x + r as f64 / 4.0).ln())
                .sum::<f64>()
                + k as f64 * (x * x + s as f64 * x + t as f64).ln()
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn honest_error_bound(b in blocks(), lo in 0.0f64..3.0, len in 0.01f64..50.0) {
            let f = b.function();
            let exact = b.antiderivative(lo + len) - b.antiderivative(lo);
            for eps in [1e-6, 1e-10] {
                let v = integrate_rational(&f, lo, lo + len, eps).unwrap();
                prop_assert!((v - exact).abs() <= eps, "eps {eps}: {v} vs {exact}");
            }
        }

        #[test]
        fn additivity(b in blocks(), a in 0.0f64..2.0, l1 in 0.1f64..5.0, l2 in 0.1f64..5.0) {
            let f = b.function();
            let eps = 1e-9;
            let whole = integrate_rational(&f, a, a + l1 + l2, eps).unwrap();
            let left = integrate_rational(&f, a, a + l1, eps).unwrap();
            let right = integrate_rational(&f, a + l1, a + l1 + l2, eps).unwrap();
            prop_assert!((whole - left - right).abs() <= 3.0 * eps);
        }

        #[test]
        fn monotone_bounds(c in 0.5f64..5.0, a in 0.1f64..3.0, len in 0.1f64..10.0) {
            // x / (x + c) is increasing.
            let f = RationalFn::new(p(&[0.0, 1.0]), p(&[c, 1.0])).unwrap();
            let b = a + len;
            let v = integrate_rational(&f, a, b, 1e-10).unwrap();
            let (lo, hi) = (a / (a + c), b / (b + c));
            prop_assert!(len * lo <= v && v <= len * hi);
        }
    }
}
