//! Univariate polynomials and rational functions in the edge activity `x`.

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::Rational;

/// Field of coefficients. `ln_abs` must be finite for nonzero values even
/// when the value itself overflows `f64`.
pub trait Coefficient: Clone + Num + Neg<Output = Self> + PartialOrd + Debug {
    fn ln_abs(&self) -> f64;
    fn to_f64_lossy(&self) -> f64;
}

impl Coefficient for f64 {
    fn ln_abs(&self) -> f64 {
        self.abs().ln()
    }

    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

fn ln_abs_bigint(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().unwrap().abs().ln();
    }
    let shift = bits - 64;
    let top = (v.abs() >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

impl Coefficient for Rational {
    fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        ln_abs_bigint(self.numer()) - ln_abs_bigint(self.denom())
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or_else(|| {
            let sign = if self.is_negative() { -1.0 } else { 1.0 };
            sign * self.ln_abs().exp()
        })
    }
}

/// Polynomial with ascending coefficients and no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Coefficient> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    /// `c · x^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    pub fn x() -> Self {
        Self::monomial(T::one(), 1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// `p(x) · x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![T::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Number of leading zero coefficients (the multiplicity of the root at 0).
    pub fn low_order(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// `p(x) / x^k`, requiring the division to be exact.
    pub fn unshift(&self, k: usize) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        (self.low_order() >= k).then(|| Poly {
            coeffs: self.coeffs[k..].to_vec(),
        })
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64_lossy())
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| *c >= T::zero())
    }

    pub fn log_evaluator(&self) -> LogPoly {
        LogPoly::new(self)
    }

    pub fn map<U: Coefficient>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<T: Coefficient> Add for &Poly<T> {
    type Output = Poly<T>;

    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Coefficient> Sub for &Poly<T> {
    type Output = Poly<T>;

    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Coefficient> Mul for &Poly<T> {
    type Output = Poly<T>;

    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Coefficient> Add for Poly<T> {
    type Output = Poly<T>;

    fn add(self, rhs: Poly<T>) -> Poly<T> {
        &self + &rhs
    }
}

impl<T: Coefficient> Sub for Poly<T> {
    type Output = Poly<T>;

    fn sub(self, rhs: Poly<T>) -> Poly<T> {
        &self - &rhs
    }
}

impl<T: Coefficient> Mul for Poly<T> {
    type Output = Poly<T>;

    fn mul(self, rhs: Poly<T>) -> Poly<T> {
        &self * &rhs
    }
}

impl<T: Coefficient + Display> Serialize for Poly<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

impl<'de, T: Coefficient + FromStr> Deserialize<'de> for Poly<T>
where
    T::Err: Display,
{
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        let coeffs = raw
            .iter()
            .map(|s| s.parse::<T>().map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Poly::new(coeffs))
    }
}

/// Log-space evaluator for `x > 0`: positive and negative coefficient parts
/// are summed separately with log-sum-exp, so huge exact coefficients never
/// overflow.
#[derive(Clone, Debug)]
pub struct LogPoly {
    positive: Vec<(f64, f64)>,
    negative: Vec<(f64, f64)>,
}

impl LogPoly {
    pub fn new<T: Coefficient>(p: &Poly<T>) -> Self {
        Self::with_offset(p, 0.0)
    }

    /// Stores `ln|c| - offset`; the result is `P(x)·e^{-offset}`.
    pub fn with_offset<T: Coefficient>(p: &Poly<T>, offset: f64) -> Self {
        let mut positive = Vec::new();
        let mut negative = Vec::new();
        for (k, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = (k as f64, c.ln_abs() - offset);
            if *c > T::zero() {
                positive.push(term);
            } else {
                negative.push(term);
            }
        }
        LogPoly { positive, negative }
    }

    fn part(terms: &[(f64, f64)], ln_x: f64) -> f64 {
        crate::scalar::log_sum_exp(terms.iter().map(|&(k, ln_c)| ln_c + k * ln_x))
    }

    /// `(ln P⁺(x), ln P⁻(x))` for `x = e^{ln_x}`.
    pub fn parts(&self, ln_x: f64) -> (f64, f64) {
        (Self::part(&self.positive, ln_x), Self::part(&self.negative, ln_x))
    }

    /// Sign and `ln |P(x)|`.
    pub fn signed_ln(&self, ln_x: f64) -> (f64, f64) {
        let (pos, neg) = self.parts(ln_x);
        if pos == neg {
            return (0.0, f64::NEG_INFINITY);
        }
        if pos > neg {
            (1.0, pos + (-(neg - pos).exp()).ln_1p())
        } else {
            (-1.0, neg + (-(pos - neg).exp()).ln_1p())
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.negative.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.positive.is_empty() && self.negative.is_empty()
    }
}

/// `numerator / denominator`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Coefficient + Display",
    deserialize = "T: Coefficient + FromStr, T::Err: Display"
))]
pub struct RationalFn<T> {
    pub numerator: Poly<T>,
    pub denominator: Poly<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl<T: Coefficient> RationalFn<T> {
    pub fn new(numerator: Poly<T>, denominator: Poly<T>) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::param("rational function with zero denominator"));
        }
        Ok(RationalFn {
            numerator,
            denominator,
        })
    }

    pub fn constant(c: T) -> Self {
        RationalFn {
            numerator: Poly::constant(c),
            denominator: Poly::one(),
        }
    }

    pub fn eval(&self, x: &T) -> Result<T> {
        let den = self.denominator.eval(x);
        if den.is_zero() {
            return Err(Error::Domain(format!("denominator vanishes at x = {x:?}")));
        }
        Ok(self.numerator.eval(x) / den)
    }

    /// Float evaluation for `x > 0`, robust to coefficient overflow.
    pub fn eval_f64(&self, x: f64) -> Result<f64> {
        self.evaluator().eval(x)
    }

    /// Evaluate at `x = e^β - 1`.
    pub fn eval_beta(&self, beta: f64) -> Result<f64> {
        self.eval_f64(beta.exp_m1())
    }

    /// `f(x) / x^k`, cancelling powers of `x` from the numerator first.
    pub fn divide_by_x_power(&self, k: usize) -> Self {
        let cancel = k.min(self.numerator.low_order());
        let numerator = self.numerator.unshift(cancel).expect("exact");
        let denominator = self.denominator.shift(k - cancel);
        RationalFn {
            numerator,
            denominator,
        }
    }

    pub fn evaluator(&self) -> RationalEvaluator {
        let offset = self
            .denominator
            .coeffs()
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| c.ln_abs())
            .fold(f64::NEG_INFINITY, f64::max);
        let offset = if offset.is_finite() { offset } else { 0.0 };
        RationalEvaluator {
            numerator: LogPoly::with_offset(&self.numerator, offset),
            denominator: LogPoly::with_offset(&self.denominator, offset),
            numerator_f64: self.numerator.map(|c| c.to_f64_lossy()),
            denominator_f64: self.denominator.map(|c| c.to_f64_lossy()),
        }
    }

    /// Enclosure of `f` on `[a, b] ⊂ [0, ∞)`. Fails unless the denominator
    /// is certified positive there.
    pub fn eval_interval(&self, a: f64, b: f64) -> Result<Interval> {
        self.evaluator().interval(a, b)
    }
}

impl<T: Coefficient + Display> RationalFn<T> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

/// Precompiled float evaluator for a rational function on `x ≥ 0`.
#[derive(Clone, Debug)]
pub struct RationalEvaluator {
    numerator: LogPoly,
    denominator: LogPoly,
    numerator_f64: Poly<f64>,
    denominator_f64: Poly<f64>,
}

impl RationalEvaluator {
    pub fn eval(&self, x: f64) -> Result<f64> {
        if x == 0.0 {
            let den = self.denominator_f64.coeff(0);
            if den == 0.0 {
                return Err(Error::Domain("denominator vanishes at x = 0".into()));
            }
            return Ok(self.numerator_f64.coeff(0) / den);
        }
        if x < 0.0 || !x.is_finite() {
            // Direct Horner outside the log-space domain.
            let den = self.denominator_f64.eval_f64(x);
            if den == 0.0 || !den.is_finite() {
                return Err(Error::Domain(format!("cannot evaluate at x = {x}")));
            }
            return Ok(self.numerator_f64.eval_f64(x) / den);
        }
        self.eval_ln(x.ln())
    }

    /// Evaluate at `x = e^{ln_x}`.
    pub fn eval_ln(&self, ln_x: f64) -> Result<f64> {
        let (ds, dl) = self.denominator.signed_ln(ln_x);
        if ds == 0.0 {
            return Err(Error::Domain(format!(
                "denominator vanishes at x = {}",
                ln_x.exp()
            )));
        }
        let (ns, nl) = self.numerator.signed_ln(ln_x);
        Ok(ns * ds * (nl - dl).exp())
    }

    pub fn interval(&self, a: f64, b: f64) -> Result<Interval> {
        if !(a >= 0.0 && a <= b && b.is_finite()) {
            return Err(Error::Domain(format!("bad interval [{a}, {b}]")));
        }
        let ln = |v: f64| if v == 0.0 { f64::NEG_INFINITY } else { v.ln() };
        let (la, lb) = (ln(a), ln(b));
        // Monotone parts on x ≥ 0: P⁺ and P⁻ are nondecreasing.
        let range = |p: &LogPoly| {
            let (pa, na) = part_at(p, la);
            let (pb, nb) = part_at(p, lb);
            let scale = pb.max(nb).max(pa).max(na);
            let scale = if scale.is_finite() { scale } else { 0.0 };
            let lo = (pa - scale).exp() - (nb - scale).exp();
            let hi = (pb - scale).exp() - (na - scale).exp();
            (lo, hi, scale)
        };
        let (dlo, dhi, dscale) = range(&self.denominator);
        if !(dlo > 0.0) {
            return Err(Error::Singularity { a, b });
        }
        let (nlo, nhi, nscale) = range(&self.numerator);
        let factor = (nscale - dscale).exp();
        let candidates = [nlo / dlo, nlo / dhi, nhi / dlo, nhi / dhi];
        let lo = candidates.iter().copied().fold(f64::INFINITY, f64::min) * factor;
        let hi = candidates.iter().copied().fold(f64::NEG_INFINITY, f64::max) * factor;
        Ok(Interval { lo, hi })
    }

    pub fn denominator_nonnegative_coeffs(&self) -> bool {
        self.denominator.is_nonnegative() && !self.denominator.is_zero()
    }
}

fn part_at(p: &LogPoly, ln_x: f64) -> (f64, f64) {
    if ln_x == f64::NEG_INFINITY {
        // Only the constant terms survive at x = 0.
        let constant = |terms: &[(f64, f64)]| {
            terms
                .iter()
                .find(|&&(k, _)| k == 0.0)
                .map_or(f64::NEG_INFINITY, |&(_, c)| c)
        };
        return (constant(&p.positive), constant(&p.negative));
    }
    p.parts(ln_x)
}

/// Parse an exact coefficient such as `"3"`, `"-7/2"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|e| Error::param(format!("bad rational {s:?}: {e}")))
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rational_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl<T: Coefficient> One for Poly<T> {
    fn one() -> Self {
        Poly::constant(T::one())
    }
}

impl<T: Coefficient> Zero for Poly<T> {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}
