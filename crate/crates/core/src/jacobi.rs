//! Jacobi polynomials from their explicit binomial sum, plus the factorial
//! norm factor, over exact integer and rational arithmetic.
//!
//! The polynomial of degree d with non-negative integer parameters (a, b) is
//!
//! ```text
//! P_d^(a,b)(u) = 2^-d · Σ_{i=0}^{d} C(a+d, i) C(b+d, d-i) (u+1)^i (u-1)^(d-i)
//! ```
//!
//! This finite sum is implemented literally rather than through a three-term
//! recurrence: the normalization and sign conventions of everything downstream
//! (radial eigenfunctions, norm constants, quotient selection rules) are tied
//! to this exact form, and Jacobi polynomials carry competing normalizations
//! in the literature. A recurrence evaluation may be added later only if it is
//! validated against this sum.
//!
//! In the eigenmode application the parameters are a = |m| and b = |ℓ|, and
//! the norm of the radial factor reduces to the closed form handled by
//! [`jacobi_norm_factor`].

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SpecialFunctionError {
    #[error("binomial C({n}, {r}) requires 0 <= r <= n")]
    BinomialOutOfRange { n: i64, r: i64 },
    #[error(
        "({k}, {l}, {m}) is not a valid mode index: need |l| + |m| <= k and l + m = k (mod 2)"
    )]
    InvalidModeTriple { k: i64, l: i64, m: i64 },
}

/// Exact binomial coefficient C(n, r); rejects r < 0 or r > n.
pub fn binomial(n: i64, r: i64) -> Result<BigUint, SpecialFunctionError> {
    if r < 0 || r > n {
        return Err(SpecialFunctionError::BinomialOutOfRange { n, r });
    }
    Ok(num_integer::binomial(
        BigUint::from(n as u64),
        BigUint::from(r as u64),
    ))
}

/// C(n, r) for arguments already known to satisfy 0 ≤ r ≤ n.
pub(crate) fn binomial_unchecked(n: u32, r: u32) -> BigUint {
    debug_assert!(r <= n);
    num_integer::binomial(BigUint::from(n), BigUint::from(r))
}

/// Exact n! as an arbitrary-precision integer.
pub fn factorial(n: u32) -> BigUint {
    (1..=u64::from(n))
        .map(BigUint::from)
        .fold(BigUint::one(), |acc, i| acc * i)
}

/// Parameters (d, a, b) of P_d^(a,b); in the eigenmode application a = |m|
/// and b = |ℓ|.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JacobiParams {
    pub d: u32,
    pub a: u32,
    pub b: u32,
}

impl JacobiParams {
    pub fn new(d: u32, a: u32, b: u32) -> Self {
        Self { d, a, b }
    }

    /// The binomial products C(a+d, i)·C(b+d, d−i) for i = 0..=d, exactly.
    pub(crate) fn term_coefficients(&self) -> Vec<BigUint> {
        (0..=self.d)
            .map(|i| {
                binomial_unchecked(self.a + self.d, i)
                    * binomial_unchecked(self.b + self.d, self.d - i)
            })
            .collect()
    }
}

/// Sums c_i (u+1)^i (u−1)^(d−i), scaled by 2^−d, with Neumaier compensation.
pub(crate) fn jacobi_sum(coefficients: &[f64], d: u32, u: f64) -> f64 {
    let up = u + 1.0;
    let um = u - 1.0;
    let mut sum = 0.0f64;
    let mut compensation = 0.0f64;
    for (i, &c) in coefficients.iter().enumerate() {
        let term = c * up.powi(i as i32) * um.powi((d as usize - i) as i32);
        let t = sum + term;
        if sum.abs() >= term.abs() {
            compensation += (sum - t) + term;
        } else {
            compensation += (term - t) + sum;
        }
        sum = t;
    }
    (sum + compensation) * 0.5f64.powi(d as i32)
}

/// Evaluates P_d^(a,b)(u) from the explicit sum, with exact integer binomials
/// and compensated summation.
pub fn jacobi_eval(params: JacobiParams, u: f64) -> f64 {
    let coefficients: Vec<f64> = params
        .term_coefficients()
        .iter()
        .map(|c| c.to_f64().expect("binomial coefficient overflows f64"))
        .collect();
    jacobi_sum(&coefficients, params.d, u)
}

/// Evaluates P_d^(a,b)(u) exactly at a rational argument.
pub fn jacobi_eval_exact(params: JacobiParams, u: &BigRational) -> BigRational {
    let one = BigRational::one();
    let up = u + &one;
    let um = u - &one;
    let mut sum = BigRational::zero();
    for (i, c) in params.term_coefficients().into_iter().enumerate() {
        let i = i as i32;
        let term = BigRational::from_integer(BigInt::from(c))
            * pow_rational(&up, i)
            * pow_rational(&um, params.d as i32 - i);
        sum += term;
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    sum * pow_rational(&half, params.d as i32)
}

fn pow_rational(x: &BigRational, e: i32) -> BigRational {
    debug_assert!(e >= 0);
    let mut out = BigRational::one();
    for _ in 0..e {
        out *= x;
    }
    out
}

/// Validates a mode triple and returns d = (k − |ℓ| − |m|)/2.
pub(crate) fn mode_depth(k: i64, l: i64, m: i64) -> Result<u32, SpecialFunctionError> {
    let reach = l.abs() + m.abs();
    if k < 0 || reach > k || (l + m - k).rem_euclid(2) != 0 {
        return Err(SpecialFunctionError::InvalidModeTriple { k, l, m });
    }
    Ok(((k - reach) / 2) as u32)
}

/// The squared radial norm as an exact rational:
///
/// ```text
/// ∫₀^{π/2} X_{kℓm}² cos χ sin χ dχ = (|ℓ|+d)!·(|m|+d)! / (2(k+1)·d!·(|ℓ|+|m|+d)!)
/// ```
///
/// valid because cos^|ℓ|χ·sin^|m|χ is exactly the weight against which the
/// Jacobi polynomials are orthogonal once u = cos 2χ. Rejects triples that do
/// not index a mode.
pub fn jacobi_norm_factor(k: i64, l: i64, m: i64) -> Result<BigRational, SpecialFunctionError> {
    let d = mode_depth(k, l, m)?;
    let la = l.unsigned_abs() as u32;
    let ma = m.unsigned_abs() as u32;
    let numerator = factorial(la + d) * factorial(ma + d);
    let denominator = BigUint::from(2 * (k as u64 + 1)) * factorial(d) * factorial(la + ma + d);
    Ok(BigRational::new(numerator.into(), denominator.into()))
}
