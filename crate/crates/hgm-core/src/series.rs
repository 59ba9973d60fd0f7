//! Truncated hypergeometric series and the hypergeometric differential
//! operator, in exact rational arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{HgmError, Result};

pub const DEFAULT_ORDER: usize = 24;

/// t^ρ · Σ_{k=0}^{N} c_k t^k.
#[derive(Debug, Clone, PartialEq)]
pub struct RatSeries {
    pub offset: BigRational,
    pub coeffs: Vec<BigRational>,
}

impl RatSeries {
    pub fn new(offset: BigRational, coeffs: Vec<BigRational>) -> Self {
        RatSeries { offset, coeffs }
    }

    /// Truncation order N.
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// θ + γ, where θ = t·d/dt.
    pub fn theta_plus(&self, gamma: &BigRational) -> RatSeries {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * (&self.offset + BigRational::from_integer(k.into()) + gamma))
            .collect();
        RatSeries { offset: self.offset.clone(), coeffs }
    }

    /// Multiplication by t, keeping the truncation order.
    pub fn shift_up(&self) -> RatSeries {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        coeffs.push(BigRational::zero());
        coeffs.extend(self.coeffs.iter().take(self.coeffs.len().saturating_sub(1)).cloned());
        RatSeries { offset: self.offset.clone(), coeffs }
    }

    pub fn sub(&self, other: &RatSeries) -> RatSeries {
        assert_eq!(self.offset, other.offset, "offsets must agree");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        RatSeries { offset: self.offset.clone(), coeffs }
    }

    pub fn add(&self, other: &RatSeries) -> RatSeries {
        assert_eq!(self.offset, other.offset, "offsets must agree");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        RatSeries { offset: self.offset.clone(), coeffs }
    }

    /// Product, truncated to the shorter order; offsets add.
    pub fn mul(&self, other: &RatSeries) -> RatSeries {
        let n = self.coeffs.len().min(other.coeffs.len());
        let mut coeffs = vec![BigRational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            for (j, b) in other.coeffs.iter().enumerate().take(n - i) {
                coeffs[i + j] += a * b;
            }
        }
        RatSeries { offset: &self.offset + &other.offset, coeffs }
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// F(α, β; t) = Σ_k Π(α_i)_k / Π(β_i)_k t^k through order N.
pub fn f_series(alpha: &[BigRational], beta: &[BigRational], order: usize) -> Result<RatSeries> {
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut c = BigRational::one();
    coeffs.push(c.clone());
    for k in 1..=order {
        let km1 = rat(k as i64 - 1);
        for b in beta {
            let f = b + &km1;
            if f.is_zero() {
                return Err(HgmError::PoleInCoefficient { param: b.to_string(), k });
            }
            c /= f;
        }
        for a in alpha {
            c *= a + &km1;
        }
        coeffs.push(c.clone());
    }
    Ok(RatSeries { offset: BigRational::zero(), coeffs })
}

/// D = Π(θ + β_i - 1) - t Π(θ + α_i) applied to s. Every returned coefficient
/// (orders 0..=N) is exact, since the t-term at order k only uses c_{k-1}.
pub fn apply_d(alpha: &[BigRational], beta: &[BigRational], s: &RatSeries) -> RatSeries {
    let one = BigRational::one();
    let left = beta.iter().fold(s.clone(), |acc, b| acc.theta_plus(&(b - &one)));
    let right = alpha.iter().fold(s.clone(), |acc, a| acc.theta_plus(a)).shift_up();
    left.sub(&right)
}

/// F_j = t^{1-β_j} F(α + 1 - β_j, β + 1 - β_j; t).
pub fn shifted_solution(alpha: &[BigRational], beta: &[BigRational], j: usize, order: usize) -> Result<RatSeries> {
    let s = BigRational::one() - &beta[j];
    let a: Vec<BigRational> = alpha.iter().map(|x| x + &s).collect();
    let b: Vec<BigRational> = beta.iter().map(|x| x + &s).collect();
    let mut f = f_series(&a, &b, order)?;
    f.offset = s;
    Ok(f)
}
