//! Exact rational arithmetic, Bernoulli numbers and even power series.
//!
//! Every coefficient in the crate is an [`ExactScalar`], an arbitrary
//! precision rational kept in lowest terms with a positive denominator.
//! The only series the rest of the crate needs are even ones (`x/tanh(x/2)`
//! and the classical `x/tanh(x)`), so [`EvenPowerSeries`] stores only the
//! coefficients of `x^0, x^2, x^4, ...`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational number, always normalised.
pub type ExactScalar = BigRational;

/// Shorthand for the rational `num / den`.
///
/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> ExactScalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// `base^exp` for a possibly negative exponent. Panics on `0^negative`.
pub fn pow_signed(base: &ExactScalar, exp: i64) -> ExactScalar {
    let p = num_traits::pow(base.clone(), exp.unsigned_abs() as usize);
    if exp < 0 {
        p.recip()
    } else {
        p
    }
}

/// Renders `num/den`, or just `num` for integers.
pub fn format_scalar(x: &ExactScalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `int` or `int/nat`.
pub fn parse_scalar(s: &str) -> Option<ExactScalar> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() || d.is_negative() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Bernoulli numbers `b_0, ..., b_m` in the signed convention (`b_1 = -1/2`),
/// from the recurrence `sum_{k=0}^{m} C(m+1, k) b_k = 0`.
fn signed_bernoulli_table(m: u32) -> Vec<ExactScalar> {
    let mut b: Vec<ExactScalar> = Vec::with_capacity(m as usize + 1);
    b.push(ExactScalar::one());
    for j in 1..=m {
        let mut acc = ExactScalar::zero();
        for (k, bk) in b.iter().enumerate() {
            acc += BigRational::from_integer(binomial(j + 1, k as u32)) * bk;
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(j + 1)));
    }
    b
}

/// The `i`-th Bernoulli number in the all-positive convention
/// (`B_1 = 1/6`, `B_2 = 1/30`, `B_3 = 1/42`, ...).
///
/// In terms of the signed numbers `b_k` (with `b_1 = -1/2`) this is
/// `B_i = (-1)^(i+1) b_{2i} = |b_{2i}|`.
pub fn bernoulli(i: u32) -> Result<ExactScalar> {
    if i == 0 {
        return Err(Error::domain("bernoulli index must be at least 1"));
    }
    let table = signed_bernoulli_table(2 * i);
    Ok(table[2 * i as usize].abs())
}

/// A truncated power series in `x` with only even powers.
///
/// `coeffs[k]` is the coefficient of `x^(2k)`; `order` is the highest power
/// of `x` retained, so `coeffs.len() == order / 2 + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvenPowerSeries {
    coeffs: Vec<ExactScalar>,
    order: u32,
}

impl EvenPowerSeries {
    /// Series with the given even coefficients, truncated at `x^(2(len-1))`.
    pub fn from_coeffs(coeffs: Vec<ExactScalar>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::domain("a series needs at least a constant term"));
        }
        let order = 2 * (coeffs.len() as u32 - 1);
        Ok(EvenPowerSeries { coeffs, order })
    }

    pub fn one(order: u32) -> Result<Self> {
        check_even_order(order)?;
        let mut coeffs = vec![ExactScalar::zero(); order as usize / 2 + 1];
        coeffs[0] = ExactScalar::one();
        Ok(EvenPowerSeries { coeffs, order })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.coeffs
    }

    /// Coefficient of `x^(2k)`, zero past the truncation.
    pub fn coeff(&self, k: usize) -> ExactScalar {
        self.coeffs.get(k).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn truncate(&self, order: u32) -> Result<Self> {
        check_even_order(order)?;
        if order > self.order {
            return Err(Error::domain(format!(
                "cannot extend a series of order {} to order {order}",
                self.order
            )));
        }
        Ok(EvenPowerSeries {
            coeffs: self.coeffs[..order as usize / 2 + 1].to_vec(),
            order,
        })
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::domain("series with zero constant term is not invertible"));
        }
        let inv0 = c0.recip();
        let len = self.coeffs.len();
        let mut out: Vec<ExactScalar> = Vec::with_capacity(len);
        out.push(inv0.clone());
        for k in 1..len {
            let mut acc = ExactScalar::zero();
            for j in 1..=k {
                acc += &self.coeffs[j] * &out[k - j];
            }
            out.push(-acc * &inv0);
        }
        Ok(EvenPowerSeries {
            coeffs: out,
            order: self.order,
        })
    }

    pub fn divide(&self, denominator: &Self) -> Result<Self> {
        Ok(series_multiply(self, &denominator.inverse()?))
    }
}

fn check_even_order(order: u32) -> Result<()> {
    if order % 2 != 0 {
        return Err(Error::domain(format!("truncation order {order} is odd")));
    }
    Ok(())
}

/// Cauchy product, truncated to the smaller of the two orders.
pub fn series_multiply(a: &EvenPowerSeries, b: &EvenPowerSeries) -> EvenPowerSeries {
    let order = a.order.min(b.order);
    let len = order as usize / 2 + 1;
    let coeffs = (0..len)
        .map(|k| {
            (0..=k).fold(ExactScalar::zero(), |acc, j| {
                acc + &a.coeffs[j] * &b.coeffs[k - j]
            })
        })
        .collect();
    EvenPowerSeries { coeffs, order }
}

/// `x / tanh(s x)` to the given order, computed as `cosh(s x) / (sinh(s x) / x)`.
/// The division by `x` is done on the coefficients, so the denominator has
/// constant term `s` and is always invertible.
fn x_over_tanh(order: u32, s: &ExactScalar) -> Result<EvenPowerSeries> {
    check_even_order(order)?;
    let len = order as usize / 2 + 1;
    let mut cosh = Vec::with_capacity(len);
    let mut sinh_over_x = Vec::with_capacity(len);
    for k in 0..len as u32 {
        let even = BigRational::from_integer(factorial(2 * k));
        let odd = BigRational::from_integer(factorial(2 * k + 1));
        cosh.push(num_traits::pow(s.clone(), 2 * k as usize) / even);
        sinh_over_x.push(num_traits::pow(s.clone(), 2 * k as usize + 1) / odd);
    }
    let num = EvenPowerSeries { coeffs: cosh, order };
    let den = EvenPowerSeries {
        coeffs: sinh_over_x,
        order,
    };
    num.divide(&den)
}

/// Taylor expansion of `x / tanh(x/2)` about zero.
pub fn tanh_quotient_series(truncation_order: u32) -> Result<EvenPowerSeries> {
    x_over_tanh(truncation_order, &rat(1, 2))
}

/// Taylor expansion of `x / tanh(x)`, the characteristic series of the
/// classical Hirzebruch L-genus.
pub fn hirzebruch_series(truncation_order: u32) -> Result<EvenPowerSeries> {
    x_over_tanh(truncation_order, &int(1))
}
