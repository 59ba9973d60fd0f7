//! Multiplicative and additive characters, Gauss and Jacobi sums.
//!
//! ω^α(x) = exp(2πi·α·dlog(x)) with ω(0) = 0 for every α (including α = 0),
//! and Θ(x) = exp(2πi·tr(x)/p).

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Ratio;
use rustfft::FftPlanner;
use serde::{Serialize, Serializer};

use crate::error::{HgmError, Result};
use crate::ffield::{FieldCtx, FqElem};

/// Unit roundoff of f64.
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;
const U: f64 = UNIT_ROUNDOFF;

// ---------------------------------------------------------------------------
// ParamPoint

/// A rational number modulo 1, stored in [0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamPoint(Ratio<i64>);

impl ParamPoint {
    pub const ZERO: ParamPoint = ParamPoint(Ratio::new_raw(0, 1));

    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(HgmError::Invalid("zero denominator".into()));
        }
        Ok(Self::from_ratio(Ratio::new(num, den)))
    }

    pub fn from_ratio(r: Ratio<i64>) -> Self {
        let den = *r.denom();
        let num = r.numer().rem_euclid(den);
        ParamPoint(Ratio::new(num, den))
    }

    pub fn num(self) -> i64 {
        *self.0.numer()
    }

    pub fn den(self) -> i64 {
        *self.0.denom()
    }

    pub fn value(self) -> Ratio<i64> {
        self.0
    }

    /// True when the point is 0 in Q/Z.
    pub fn is_integral(self) -> bool {
        self.num() == 0
    }

    pub fn scale(self, k: i64) -> Self {
        let k = k.rem_euclid(self.den());
        Self::from_ratio(Ratio::new(self.num() * k, self.den()))
    }

    /// Exponent j with α = j/N, for N a multiple of the denominator.
    pub fn exponent(self, n: u64) -> Result<u64> {
        let den = self.den() as u64;
        if n % den != 0 {
            return Err(HgmError::BadDenominator { den, q_minus_1: n });
        }
        Ok(self.num() as u64 * (n / den))
    }
}

impl Add for ParamPoint {
    type Output = ParamPoint;
    fn add(self, o: ParamPoint) -> ParamPoint {
        ParamPoint::from_ratio(self.0 + o.0)
    }
}

impl Sub for ParamPoint {
    type Output = ParamPoint;
    fn sub(self, o: ParamPoint) -> ParamPoint {
        ParamPoint::from_ratio(self.0 - o.0)
    }
}

impl Neg for ParamPoint {
    type Output = ParamPoint;
    fn neg(self) -> ParamPoint {
        ParamPoint::from_ratio(-self.0)
    }
}

impl fmt::Display for ParamPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num(), self.den())
    }
}

impl FromStr for ParamPoint {
    type Err = HgmError;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || HgmError::Invalid(format!("cannot parse rational {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: i64 = n.trim().parse().map_err(|_| bad())?;
                let d: i64 = d.trim().parse().map_err(|_| bad())?;
                ParamPoint::new(n, d)
            }
            None => ParamPoint::new(s.parse().map_err(|_| bad())?, 1),
        }
    }
}

impl Serialize for ParamPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

// ---------------------------------------------------------------------------
// AlgValue

/// Complex number with a sound absolute error bound on its distance to the
/// exact algebraic value it approximates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlgValue {
    pub re: f64,
    pub im: f64,
    pub err: f64,
}

impl AlgValue {
    pub const ZERO: AlgValue = AlgValue { re: 0.0, im: 0.0, err: 0.0 };
    pub const ONE: AlgValue = AlgValue { re: 1.0, im: 0.0, err: 0.0 };

    /// Exact integer (exact as long as |n| < 2^53).
    pub fn from_int(n: i64) -> Self {
        AlgValue { re: n as f64, im: 0.0, err: 0.0 }
    }

    /// exp(2πi·j/n).
    pub fn root_of_unity(j: i64, n: u64) -> Self {
        let n_i = n as i64;
        let j = j.rem_euclid(n_i);
        if (4 * j) % n_i == 0 {
            let (re, im) = match 4 * j / n_i {
                0 => (1.0, 0.0),
                1 => (0.0, 1.0),
                2 => (-1.0, 0.0),
                _ => (0.0, -1.0),
            };
            return AlgValue { re, im, err: 0.0 };
        }
        let theta = 2.0 * PI * (j as f64) / (n as f64);
        let (s, c) = theta.sin_cos();
        AlgValue { re: c, im: s, err: 32.0 * U }
    }

    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn conj(self) -> Self {
        AlgValue { im: -self.im, ..self }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    /// Multiply by an exactly known real scalar.
    pub fn scale(self, s: f64) -> Self {
        let re = self.re * s;
        let im = self.im * s;
        let mag = re.hypot(im);
        AlgValue { re, im, err: self.err * s.abs() * (1.0 + 2.0 * U) + 2.0 * U * mag }
    }

    pub fn powi(self, e: u32) -> Self {
        (0..e).fold(AlgValue::ONE, |acc, _| acc * self)
    }

    /// Distance between centers.
    pub fn dist(self, other: AlgValue) -> f64 {
        (self.re - other.re).hypot(self.im - other.im)
    }

    /// True when the two error discs overlap, with `slack` extra room.
    pub fn agrees_with(self, other: AlgValue, slack: f64) -> bool {
        self.dist(other) <= self.err + other.err + slack
    }

    /// Round to the nearest rational integer, failing unless err < 0.25 and the
    /// nearest integer lies inside the error disc.
    pub fn snap(self) -> Result<i64> {
        let n = self.re.round();
        let resid = (self.re - n).hypot(self.im);
        if self.err < 0.25 && resid <= self.err.max(4.0 * U * n.abs()) && n.abs() < 9.0e15 {
            Ok(n as i64)
        } else {
            Err(HgmError::SnapFailure { re: self.re, im: self.im, err: self.err })
        }
    }

    /// Distance from the nearest rational integer.
    pub fn snap_residual(self) -> f64 {
        (self.re - self.re.round()).hypot(self.im)
    }
}

impl Add for AlgValue {
    type Output = AlgValue;
    fn add(self, o: AlgValue) -> AlgValue {
        let re = self.re + o.re;
        let im = self.im + o.im;
        AlgValue { re, im, err: self.err + o.err + 2.0 * U * re.hypot(im) }
    }
}

impl AddAssign for AlgValue {
    fn add_assign(&mut self, o: AlgValue) {
        *self = *self + o;
    }
}

impl Sub for AlgValue {
    type Output = AlgValue;
    fn sub(self, o: AlgValue) -> AlgValue {
        self + (-o)
    }
}

impl Neg for AlgValue {
    type Output = AlgValue;
    fn neg(self) -> AlgValue {
        AlgValue { re: -self.re, im: -self.im, err: self.err }
    }
}

impl Mul for AlgValue {
    type Output = AlgValue;
    fn mul(self, o: AlgValue) -> AlgValue {
        let re = self.re * o.re - self.im * o.im;
        let im = self.re * o.im + self.im * o.re;
        let (a, b) = (self.abs(), o.abs());
        let err = a * o.err + b * self.err + self.err * o.err + 4.0 * U * a * b;
        AlgValue { re, im, err: err * (1.0 + 4.0 * U) }
    }
}

impl MulAssign for AlgValue {
    fn mul_assign(&mut self, o: AlgValue) {
        *self = *self * o;
    }
}

impl Div for AlgValue {
    type Output = AlgValue;
    fn div(self, o: AlgValue) -> AlgValue {
        let z = self.to_complex() / o.to_complex();
        let b = o.abs();
        let q = z.norm();
        let err = if o.err >= b {
            f64::INFINITY
        } else {
            (self.err + q * o.err) / (b - o.err) + 8.0 * U * q
        };
        AlgValue { re: z.re, im: z.im, err: err * (1.0 + 4.0 * U) }
    }
}

// ---------------------------------------------------------------------------
// Characters

/// Exponent j with α = j/(q-1).
pub fn char_exponent(ctx: &FieldCtx, alpha: ParamPoint) -> Result<u64> {
    alpha.exponent(ctx.q_units() as u64)
}

/// ω^α(x), with ω(0) = 0.
pub fn mul_char(ctx: &FieldCtx, alpha: ParamPoint, x: FqElem) -> Result<AlgValue> {
    let j = char_exponent(ctx, alpha)?;
    if x == FqElem::ZERO {
        return Ok(AlgValue::ZERO);
    }
    let n = ctx.q_units() as u64;
    let e = (j as u128 * ctx.dlog_unchecked(x) as u128 % n as u128) as i64;
    Ok(AlgValue::root_of_unity(e, n))
}

/// Θ(x) = exp(2πi·tr(x)/p).
pub fn add_char(ctx: &FieldCtx, x: FqElem) -> AlgValue {
    AlgValue::root_of_unity(ctx.trace(x) as i64, ctx.p() as u64)
}

/// All Gauss sums of one field: entry j is g(j/(q-1)).
pub struct GaussTable {
    values: Vec<AlgValue>,
}

impl GaussTable {
    /// One unnormalized inverse DFT of k ↦ Θ(gen^k).
    fn build(ctx: &FieldCtx) -> Self {
        let n = ctx.q_units() as usize;
        let p = ctx.p() as u64;
        let theta: Vec<AlgValue> = (0..p).map(|t| AlgValue::root_of_unity(t as i64, p)).collect();
        let mut buf: Vec<Complex64> = (0..n)
            .map(|k| theta[ctx.trace(ctx.gen_pow(k as i64)) as usize].to_complex())
            .collect();
        let mut planner = FftPlanner::<f64>::new();
        planner.plan_fft_inverse(n).process(&mut buf);
        let log_n = (n.max(2) as f64).log2().ceil();
        let err = n as f64 * U * (32.0 + 32.0 * log_n);
        let values = buf
            .into_iter()
            .map(|z| AlgValue { re: z.re, im: z.im, err })
            .collect();
        GaussTable { values }
    }

    #[inline]
    pub fn get(&self, j: u64) -> AlgValue {
        self.values[(j % self.values.len() as u64) as usize]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// The cached Gauss-sum table of `ctx`, built on first use.
pub fn gauss_table(ctx: &FieldCtx) -> &GaussTable {
    ctx.gauss_cache().get_or_init(|| GaussTable::build(ctx))
}

/// g(α) = Σ_{x≠0} ω^α(x)Θ(x).
pub fn gauss_sum(ctx: &FieldCtx, alpha: ParamPoint) -> Result<AlgValue> {
    let j = char_exponent(ctx, alpha)?;
    Ok(gauss_table(ctx).get(j))
}

/// g(α) by direct summation over the field; independent of the FFT table.
pub fn gauss_sum_direct(ctx: &FieldCtx, alpha: ParamPoint) -> Result<AlgValue> {
    char_exponent(ctx, alpha)?;
    let mut acc = AlgValue::ZERO;
    for x in ctx.nonzero_elements() {
        acc += mul_char(ctx, alpha, x)? * add_char(ctx, x);
    }
    Ok(acc)
}

/// J(α, β) = Σ_{x ∈ F_q ∖ {0,1}} ω^α(x)ω^β(1-x).
pub fn jacobi_sum(ctx: &FieldCtx, alpha: ParamPoint, beta: ParamPoint) -> Result<AlgValue> {
    let ja = char_exponent(ctx, alpha)? as u128;
    let jb = char_exponent(ctx, beta)? as u128;
    let n = ctx.q_units() as u128;
    let mut acc = AlgValue::ZERO;
    for x in ctx.nonzero_elements() {
        if x == FqElem::ONE {
            continue;
        }
        let y = ctx.one_minus(x);
        let e = (ja * ctx.dlog_unchecked(x) as u128 + jb * ctx.dlog_unchecked(y) as u128) % n;
        acc += AlgValue::root_of_unity(e as i64, n as u64);
    }
    Ok(acc)
}

/// g(α)g(-β)/g(α-β).
pub fn gauss_ratio(ctx: &FieldCtx, alpha: ParamPoint, beta: ParamPoint) -> Result<AlgValue> {
    let n = ctx.q_units() as u64;
    let ja = char_exponent(ctx, alpha)?;
    let jb = char_exponent(ctx, beta)?;
    Ok(gauss_ratio_exp(gauss_table(ctx), ja, jb, n))
}

/// Same ratio addressed by exponents over q-1.
#[inline]
pub(crate) fn gauss_ratio_exp(table: &GaussTable, ja: u64, jb: u64, n: u64) -> AlgValue {
    let ja = ja % n;
    let jb = jb % n;
    let num = table.get(ja) * table.get((n - jb) % n);
    num / table.get((ja + n - jb) % n)
}
