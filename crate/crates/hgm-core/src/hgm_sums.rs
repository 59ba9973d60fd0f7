//! Period-normalized hypergeometric sums H(α, β, t) over F_q.

use std::fmt;

use serde::Serialize;

use crate::arith;
use crate::charsums::{char_exponent, gauss_ratio_exp, gauss_table, AlgValue, ParamPoint};
use crate::error::{HgmError, Result};
use crate::family::for_each_slice_point;
use crate::ffield::{FieldCtx, FqElem};

/// Paired parameter lists; entry i of `alpha` is matched with entry i of `beta`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct HgmParams {
    pub alpha: Vec<ParamPoint>,
    pub beta: Vec<ParamPoint>,
}

impl HgmParams {
    pub fn new(alpha: Vec<ParamPoint>, beta: Vec<ParamPoint>) -> Result<Self> {
        if alpha.is_empty() || alpha.len() != beta.len() {
            return Err(HgmError::Invalid(format!(
                "need equally many alpha and beta entries (got {} and {})",
                alpha.len(),
                beta.len()
            )));
        }
        Ok(HgmParams { alpha, beta })
    }

    /// Build from `(num, den)` pairs.
    pub fn from_fracs(alpha: &[(i64, i64)], beta: &[(i64, i64)]) -> Result<Self> {
        let conv = |v: &[(i64, i64)]| -> Result<Vec<ParamPoint>> {
            v.iter().map(|&(n, d)| ParamPoint::new(n, d)).collect()
        };
        Self::new(conv(alpha)?, conv(beta)?)
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    /// Least common denominator of all entries.
    pub fn m(&self) -> u64 {
        self.alpha
            .iter()
            .chain(&self.beta)
            .fold(1, |acc, a| arith::lcm(acc, a.den() as u64))
    }

    /// (kα, kβ).
    pub fn scale(&self, k: i64) -> HgmParams {
        HgmParams {
            alpha: self.alpha.iter().map(|a| a.scale(k)).collect(),
            beta: self.beta.iter().map(|b| b.scale(k)).collect(),
        }
    }

    /// (α + δ, β + δ).
    pub fn shift(&self, delta: ParamPoint) -> HgmParams {
        HgmParams {
            alpha: self.alpha.iter().map(|&a| a + delta).collect(),
            beta: self.beta.iter().map(|&b| b + delta).collect(),
        }
    }
}

impl fmt::Display for HgmParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[ParamPoint]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "({}; {})", join(&self.alpha), join(&self.beta))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DegeneracyKind {
    Nondegenerate,
    Isotypic,
    NonIsotypic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegeneracyClass {
    pub kind: DegeneracyKind,
    /// The common value γ of the degenerate parameters, for isotypic classes.
    pub degenerate_value: Option<ParamPoint>,
    /// Number of degenerate index pairs, for isotypic classes.
    pub multiplicity: Option<usize>,
}

/// Classify by the set of degenerate parameter values {α_i : β_i - α_i ∈ Z}.
pub fn classify(params: &HgmParams) -> DegeneracyClass {
    let degenerate: Vec<ParamPoint> = params
        .alpha
        .iter()
        .zip(&params.beta)
        .filter(|(a, b)| (**b - **a).is_integral())
        .map(|(a, _)| *a)
        .collect();
    if degenerate.is_empty() {
        return DegeneracyClass {
            kind: DegeneracyKind::Nondegenerate,
            degenerate_value: None,
            multiplicity: None,
        };
    }
    let gamma = degenerate[0];
    if degenerate.iter().all(|&g| g == gamma) {
        DegeneracyClass {
            kind: DegeneracyKind::Isotypic,
            degenerate_value: Some(gamma),
            multiplicity: Some(degenerate.len()),
        }
    } else {
        DegeneracyClass { kind: DegeneracyKind::NonIsotypic, degenerate_value: None, multiplicity: None }
    }
}

fn exponents(ctx: &FieldCtx, v: &[ParamPoint]) -> Result<Vec<u64>> {
    v.iter().map(|&a| char_exponent(ctx, a)).collect()
}

/// G(α, β) = Π_i g(α_i)g(-β_i)/g(α_i - β_i).
pub fn g_normalizer(ctx: &FieldCtx, params: &HgmParams) -> Result<AlgValue> {
    let n = ctx.q_units() as u64;
    let ja = exponents(ctx, &params.alpha)?;
    let jb = exponents(ctx, &params.beta)?;
    let table = gauss_table(ctx);
    Ok(ja
        .iter()
        .zip(&jb)
        .fold(AlgValue::ONE, |acc, (&a, &b)| acc * gauss_ratio_exp(table, a, b, n)))
}

/// H(α, β, t) = (1/q^×) Σ_μ G(α + μ/q^×, β + μ/q^×) ω((-1)^n t)^{μ/q^×}.
pub fn h_sum(ctx: &FieldCtx, params: &HgmParams, t: FqElem) -> Result<AlgValue> {
    if t == FqElem::ZERO {
        return Err(HgmError::ZeroT);
    }
    let n = ctx.q_units() as u64;
    let ja = exponents(ctx, &params.alpha)?;
    let jb = exponents(ctx, &params.beta)?;
    let table = gauss_table(ctx);
    let sign = if params.n() % 2 == 0 { FqElem::ONE } else { ctx.neg(FqElem::ONE) };
    let log_s = ctx.dlog_unchecked(ctx.mul(sign, t)) as u64;
    let mut acc = AlgValue::ZERO;
    for mu in 0..n {
        let mut term = AlgValue::root_of_unity((mu * log_s % n) as i64, n);
        for (&a, &b) in ja.iter().zip(&jb) {
            term *= gauss_ratio_exp(table, a + mu, b + mu, n);
        }
        acc += term;
    }
    Ok(acc.scale(1.0 / n as f64))
}

/// H over an extension field, using the character compatible (through the
/// norm) with the base field's character; `unit` comes from
/// [`crate::ffield::norm_compatible_unit`].
pub fn h_sum_compatible(ctx: &FieldCtx, params: &HgmParams, t: FqElem, unit: u64) -> Result<AlgValue> {
    h_sum(ctx, &params.scale(unit as i64), t)
}

/// The nondegenerate point-count identity: returns the character sum
/// Σ_{x} Π_i ω^{α_i}(-x_i) ω^{β_i-α_i}(1-x_i) over x ∈ (F_q∖{0,1})^n with
/// t·x_1⋯x_n = 1, together with H(α, β, t), which it equals.
pub fn nondegenerate_count_identity(
    ctx: &FieldCtx,
    params: &HgmParams,
    t: FqElem,
) -> Result<(AlgValue, AlgValue)> {
    if classify(params).kind != DegeneracyKind::Nondegenerate {
        return Err(HgmError::Degenerate);
    }
    if t == FqElem::ZERO || t == FqElem::ONE {
        return Err(HgmError::BadT);
    }
    let lhs = nondegenerate_character_sum(ctx, params, t)?;
    let rhs = h_sum(ctx, params, t)?;
    Ok((lhs, rhs))
}

/// The left-hand character sum of [`nondegenerate_count_identity`], by enumeration.
pub fn nondegenerate_character_sum(ctx: &FieldCtx, params: &HgmParams, t: FqElem) -> Result<AlgValue> {
    let n = ctx.q_units() as u64;
    let ja = exponents(ctx, &params.alpha)?;
    let jb = exponents(ctx, &params.beta)?;
    let mut acc = AlgValue::ZERO;
    for_each_slice_point(ctx, params.n(), t, false, |x| {
        let mut e: u128 = 0;
        for (i, &xi) in x.iter().enumerate() {
            let lm = ctx.dlog_unchecked(ctx.neg(xi)) as u128;
            let l1 = ctx.dlog_unchecked(ctx.one_minus(xi)) as u128;
            e += ja[i] as u128 * lm + ((jb[i] + n - ja[i]) % n) as u128 * l1;
        }
        acc += AlgValue::root_of_unity((e % n as u128) as i64, n);
    });
    Ok(acc)
}
