//! Divisor pieces Q'_d of #X, Grossencharacter values, hypergeometric
//! L-polynomials, and the factorization of the local zeta function of X.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::arith;
use crate::charsums::{gauss_ratio, mul_char, AlgValue, ParamPoint};
use crate::error::{HgmError, Result};
use crate::family::{compute_id, count_x_direct, twisted_p, CoverSpec, StratumIndex};
use crate::ffield::{build_field, norm_compatible_unit, FieldCtx, FqElem};
use crate::hgm_sums::{classify, h_sum, DegeneracyClass, DegeneracyKind, HgmParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FormulaCase {
    /// I_d = [n]: a sum of hypergeometric sums.
    A,
    /// I_d ≠ [n], all a_i (i ∉ I_d) congruent mod d: a Grossencharacter sum.
    B,
    /// Otherwise: zero.
    C,
}

#[derive(Debug, Clone, Serialize)]
pub struct QFactor {
    pub d: u64,
    pub kind: DegeneracyClass,
    pub value: AlgValue,
    pub formula_case: FormulaCase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorKind {
    Hypergeometric,
    TorusTwist,
    Trivial,
}

/// One factor num(T)/den(T) of the local zeta function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalFactor {
    pub d: u64,
    pub f_d: u64,
    pub kind: FactorKind,
    /// Coefficients in T, lowest degree first.
    pub poly_num: Vec<i128>,
    pub poly_den: Vec<i128>,
    /// deg(num) - deg(den).
    pub degree: i64,
}

/// (a/d, b/d).
pub fn divisor_params(spec: &CoverSpec, d: u64) -> HgmParams {
    let conv = |v: &[i64]| v.iter().map(|&x| ParamPoint::new(x, d as i64).unwrap()).collect();
    HgmParams { alpha: conv(&spec.a), beta: conv(&spec.b) }
}

/// Indices outside I_d, i.e. with d | b_i - a_i.
fn degenerate_indices(spec: &CoverSpec, id: StratumIndex) -> Vec<usize> {
    (0..spec.n()).filter(|&i| !id.contains(i)).collect()
}

pub fn formula_case(spec: &CoverSpec, d: u64) -> Result<FormulaCase> {
    let id = compute_id(spec, d)?;
    let deg = degenerate_indices(spec, id);
    if deg.is_empty() {
        return Ok(FormulaCase::A);
    }
    let c = spec.a[deg[0]];
    if deg.iter().all(|&i| (spec.a[i] - c) % d as i64 == 0) {
        Ok(FormulaCase::B)
    } else {
        Ok(FormulaCase::C)
    }
}

fn check_field_divisor(ctx: &FieldCtx, spec: &CoverSpec, d: u64, t: FqElem) -> Result<()> {
    if t == FqElem::ZERO || t == FqElem::ONE {
        return Err(HgmError::BadT);
    }
    let mq = arith::gcd(spec.m, ctx.q_units() as u64);
    if d == 0 || mq % d != 0 {
        return Err(HgmError::NotDivisor { d, n: mq });
    }
    Ok(())
}

/// The k-th summand of Q'_d in the isotypic case (without the (q-1)^{e-1}):
/// Ψ_k = ω^{-kc/d}(t) · ω^{kcn/d}(-1) · Π_{i∈I_d} g-ratio(k(a_i-c)/d, k(b_i-c)/d).
pub fn isotypic_orbit_term(ctx: &FieldCtx, spec: &CoverSpec, d: u64, t: FqElem, k: u64) -> Result<AlgValue> {
    check_field_divisor(ctx, spec, d, t)?;
    if formula_case(spec, d)? != FormulaCase::B {
        return Err(HgmError::NotIsotypic);
    }
    let id = compute_id(spec, d)?;
    let c = spec.a[degenerate_indices(spec, id)[0]];
    let (k, di) = (k as i64, d as i64);
    let n = spec.n() as i64;
    let minus_one = ctx.neg(FqElem::ONE);
    let mut v = mul_char(ctx, ParamPoint::new(-k * c, di)?, t)?
        * mul_char(ctx, ParamPoint::new(k * c * n, di)?, minus_one)?;
    for i in id.members() {
        let a = ParamPoint::new(k * (spec.a[i] - c), di)?;
        let b = ParamPoint::new(k * (spec.b[i] - c), di)?;
        v *= gauss_ratio(ctx, a, b)?;
    }
    Ok(v)
}

/// The Grossencharacter value λ_k = (-1)^{#I_d} Ψ_k at the prime of F_q.
/// It is multiplicative along extensions: the orbit term over F_{q^s} equals
/// (-1)^{#I_d} λ_k^s.
pub fn psi_gross(ctx: &FieldCtx, spec: &CoverSpec, d: u64, t: FqElem, k: u64) -> Result<AlgValue> {
    let term = isotypic_orbit_term(ctx, spec, d, t, k)?;
    let id = compute_id(spec, d)?;
    Ok(if id.len() % 2 == 1 { -term } else { term })
}

/// Q'_d from its closed form in each of the three cases.
pub fn q_factor(ctx: &FieldCtx, spec: &CoverSpec, d: u64, t: FqElem) -> Result<QFactor> {
    check_field_divisor(ctx, spec, d, t)?;
    let case = formula_case(spec, d)?;
    let params = divisor_params(spec, d);
    let kind = classify(&params);
    let value = match case {
        FormulaCase::A => {
            let mut acc = AlgValue::ZERO;
            for k in arith::units_mod(d) {
                acc += h_sum(ctx, &params.scale(k as i64), t)?;
            }
            acc
        }
        FormulaCase::B => {
            let e = degenerate_indices(spec, compute_id(spec, d)?).len() as u32;
            let mut acc = AlgValue::ZERO;
            for k in arith::units_mod(d) {
                acc += isotypic_orbit_term(ctx, spec, d, t, k)?;
            }
            acc * AlgValue::from_int((ctx.q_units() as i64).pow(e - 1))
        }
        FormulaCase::C => AlgValue::ZERO,
    };
    Ok(QFactor { d, kind, value, formula_case: case })
}

/// Q'_d = Σ_{I ⊇ I_d} P'_{d,I}, by enumeration.
pub fn q_factor_oracle(ctx: &FieldCtx, spec: &CoverSpec, d: u64, t: FqElem) -> Result<AlgValue> {
    check_field_divisor(ctx, spec, d, t)?;
    let id = compute_id(spec, d)?;
    let mut acc = AlgValue::ZERO;
    for i_set in StratumIndex::all(spec.n()) {
        if id.is_subset_of(i_set) {
            acc += twisted_p(ctx, spec, d, i_set, t)?;
        }
    }
    Ok(acc)
}

/// [`q_factor`] checked against [`q_factor_oracle`].
pub fn q_factor_verified(ctx: &FieldCtx, spec: &CoverSpec, d: u64, t: FqElem) -> Result<QFactor> {
    let qf = q_factor(ctx, spec, d, t)?;
    let oracle = q_factor_oracle(ctx, spec, d, t)?;
    if !qf.value.agrees_with(oracle, 1e-9) {
        return Err(HgmError::Verification(format!(
            "Q'_{d}: closed form {:?} vs enumeration {:?}",
            qf.value, oracle
        )));
    }
    Ok(qf)
}

// ---------------------------------------------------------------------------
// Primes, reductions of t

/// Reduce a rational t into the prime field of `ctx`.
pub fn reduce_t(ctx: &FieldCtx, t: Ratio<i64>) -> Result<FqElem> {
    ctx.from_ratio(*t.numer(), *t.denom())
        .ok_or_else(|| HgmError::BadPrime { p: ctx.p() as u64, reason: "p divides the denominator of t".into() })
}

/// Bad primes divide m, or the numerator or denominator of t or t - 1.
pub fn check_good_prime(p: u64, m: u64, t: Ratio<i64>) -> Result<()> {
    if !arith::is_prime(p) {
        return Err(HgmError::NotPrime(p));
    }
    let bad = |reason: String| Err(HgmError::BadPrime { p, reason });
    if m % p == 0 {
        return bad(format!("p divides m = {m}"));
    }
    let pi = p as i64;
    let t1 = t - Ratio::from_integer(1);
    for (name, v) in [
        ("numerator of t", *t.numer()),
        ("denominator of t", *t.denom()),
        ("numerator of t - 1", *t1.numer()),
        ("denominator of t - 1", *t1.denom()),
    ] {
        if v % pi == 0 {
            return bad(format!("p divides the {name} ({v})"));
        }
    }
    Ok(())
}

pub fn is_good_prime(p: u64, m: u64, t: Ratio<i64>) -> bool {
    check_good_prime(p, m, t).is_ok()
}

// ---------------------------------------------------------------------------
// L-polynomials

/// Power sums of the reciprocal roots of the L-polynomial over F_{q^s}:
/// (-1)^{n-1} H_{q^s}.
pub fn power_sums_from_h(h_values: &[AlgValue], n: usize) -> Vec<AlgValue> {
    h_values.iter().map(|&h| if n % 2 == 1 { h } else { -h }).collect()
}

/// Newton's identities: the polynomial Π(1 - λU) = Σ_i (-1)^i e_i U^i of
/// degree n from the power sums p_s = Σλ^s, s = 1..=n.
pub fn newton_polynomial(power_sums: &[AlgValue], n: usize) -> Vec<AlgValue> {
    assert!(power_sums.len() >= n);
    let p = power_sums;
    let mut e = vec![AlgValue::ONE];
    for i in 1..=n {
        let mut acc = AlgValue::ZERO;
        for j in 1..=i {
            let term = e[i - j] * p[j - 1];
            acc += if j % 2 == 1 { term } else { -term };
        }
        e.push(acc.scale(1.0 / i as f64));
    }
    e.iter().enumerate().map(|(i, &c)| if i % 2 == 1 { -c } else { c }).collect()
}

/// Power sums p_s = Σλ^s implied by L(U) = Π(1 - λU), for s = 1..=count:
/// p_s = Σ_{i<s, i≤n} (-1)^{i-1} e_i p_{s-i} + (-1)^{s-1} s·e_s.
pub fn power_sums_from_polynomial(poly: &[AlgValue], count: usize) -> Vec<AlgValue> {
    let n = poly.len() - 1;
    let e: Vec<AlgValue> = poly.iter().enumerate().map(|(i, &c)| if i % 2 == 1 { -c } else { c }).collect();
    let mut p: Vec<AlgValue> = Vec::with_capacity(count);
    for s in 1..=count {
        let mut acc = AlgValue::ZERO;
        if s <= n {
            let t = e[s].scale(s as f64);
            acc += if s % 2 == 1 { t } else { -t };
        }
        for i in 1..s.min(n + 1) {
            let term = e[i] * p[s - i - 1];
            acc += if i % 2 == 1 { term } else { -term };
        }
        p.push(acc);
    }
    p
}

fn poly_mul_alg(a: &[AlgValue], b: &[AlgValue]) -> Vec<AlgValue> {
    let mut out = vec![AlgValue::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_mul_int(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Substitute U = T^f.
fn inflate(poly: &[i128], f: u64) -> Vec<i128> {
    let mut out = vec![0i128; (poly.len() - 1) * f as usize + 1];
    for (i, &c) in poly.iter().enumerate() {
        out[i * f as usize] = c;
    }
    out
}

/// Roots of a complex polynomial (lowest degree first) by Durand–Kerner.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    while c.len() > 1 && c.last().unwrap().norm() == 0.0 {
        c.pop();
    }
    let n = c.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let monic: Vec<Complex64> = c.iter().map(|&x| x / lead).collect();
    let radius = 1.0 + monic[..n].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius * 0.9, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    let eval = |x: Complex64| monic.iter().rev().fold(Complex64::zero(), |acc, &a| acc * x + a);
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                den = Complex64::new(1e-300, 0.0);
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm() / z[i].norm().max(1e-300));
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

/// A reciprocal root whose absolute value is not q^{w/2} for an integer w.
#[derive(Debug, Clone, Serialize)]
pub struct WeilFlag {
    pub k: u64,
    pub abs: f64,
    pub nearest_weight: i64,
    pub rel_dev: f64,
}

/// Check the reciprocal roots of L(U) against |λ| ∈ {q^{j/2}}.
pub fn weil_check(poly: &[AlgValue], q: u64, k: u64) -> Vec<WeilFlag> {
    let c: Vec<Complex64> = poly.iter().map(|v| v.to_complex()).collect();
    let lq = (q as f64).ln();
    polynomial_roots(&c)
        .into_iter()
        .filter_map(|z| {
            let lam = 1.0 / z.norm();
            let w = (2.0 * lam.ln() / lq).round() as i64;
            let dev = (lam / (q as f64).powf(w as f64 / 2.0) - 1.0).abs();
            (dev > 1e-6).then_some(WeilFlag { k, abs: lam, nearest_weight: w, rel_dev: dev })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitPolynomial {
    pub k: u64,
    pub coeffs: Vec<AlgValue>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PowerSumCheck {
    pub k: u64,
    pub s: usize,
    pub predicted: AlgValue,
    pub computed: AlgValue,
    pub rel_err: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LPolynomialReport {
    /// The zeta-function factor exp(Σ_s H_{q^s} T^{f s} / s).
    pub factor: LocalFactor,
    /// The L-polynomial Π(1 - λ T^f), lowest degree first.
    pub l_poly: Vec<i128>,
    pub orbit_polys: Vec<OrbitPolynomial>,
    /// Largest distance of an orbit-product coefficient from its integer.
    pub snap_residual: f64,
    pub checks: Vec<PowerSumCheck>,
    pub weil_flags: Vec<WeilFlag>,
}

impl LPolynomialReport {
    pub fn max_rel_err(&self) -> f64 {
        self.checks.iter().map(|c| c.rel_err).fold(0.0, f64::max)
    }
}

/// H_{q^s}(kα, kβ, t) for s = 1..=max_s over F_{q^s} ⊇ F_q, q = p^f, with
/// characters compatible along the norm, for each k in `ks`.
/// Returns values indexed [k][s-1].
pub fn compatible_h_values(
    p: u64,
    f: u32,
    base: &HgmParams,
    ks: &[u64],
    t: Ratio<i64>,
    max_s: usize,
) -> Result<Vec<Vec<AlgValue>>> {
    let small = build_field(p, f)?;
    let mut out = vec![Vec::with_capacity(max_s); ks.len()];
    for s in 1..=max_s {
        let big_owned;
        let (big, unit) = if s == 1 {
            (&small, 1u64)
        } else {
            big_owned = build_field(p, f * s as u32)?;
            let u = norm_compatible_unit(&small, &big_owned)?;
            (&big_owned, u)
        };
        let tb = reduce_t(big, t)?;
        for (idx, &k) in ks.iter().enumerate() {
            let params = base.scale((k as u128 * unit as u128 % big.q_units() as u128) as i64);
            out[idx].push(h_sum(big, &params, tb)?);
        }
    }
    Ok(out)
}

/// Π_{k ∈ (Z/d)^×/<p>} L_{q_d}(H(kα, kβ, t), T^{f_d}), checked against H_{q^s} for
/// s = n+1..=max_r.
pub fn orbit_l_factor(p: u64, base: &HgmParams, d: u64, t: Ratio<i64>, max_r: usize) -> Result<LPolynomialReport> {
    let n = base.n();
    let f = arith::mult_order(p, d);
    let q = p.pow(f as u32);
    let reps = arith::frobenius_orbit_reps(p, d);
    let max_s = max_r.max(n);
    let h = compatible_h_values(p, f as u32, base, &reps, t, max_s)?;
    let mut orbit_polys = Vec::new();
    let mut checks = Vec::new();
    let mut weil_flags = Vec::new();
    let mut product = vec![AlgValue::ONE];
    for (idx, &k) in reps.iter().enumerate() {
        let sums = power_sums_from_h(&h[idx], n);
        let poly = newton_polynomial(&sums, n);
        let predicted = power_sums_from_polynomial(&poly, max_s);
        for s in n + 1..=max_s {
            let computed = sums[s - 1];
            let pred = predicted[s - 1];
            let rel_err = pred.dist(computed) / computed.abs().max(1.0);
            checks.push(PowerSumCheck { k, s, predicted: pred, computed, rel_err });
        }
        weil_flags.extend(weil_check(&poly, q, k));
        product = poly_mul_alg(&product, &poly);
        orbit_polys.push(OrbitPolynomial { k, coeffs: poly });
    }
    let snap_residual = product.iter().map(|c| c.snap_residual()).fold(0.0, f64::max);
    let ints: Vec<i128> = product.iter().map(|c| c.snap().map(|v| v as i128)).collect::<Result<_>>()?;
    let l_poly = inflate(&ints, f);
    // exp(Σ H_s U^s / s) is L for even n and 1/L for odd n
    let (poly_num, poly_den) = if n % 2 == 0 { (l_poly.clone(), vec![1]) } else { (vec![1], l_poly.clone()) };
    let degree = poly_num.len() as i64 - poly_den.len() as i64;
    Ok(LPolynomialReport {
        factor: LocalFactor { d, f_d: f, kind: FactorKind::Hypergeometric, poly_num, poly_den, degree },
        l_poly,
        orbit_polys,
        snap_residual,
        checks,
        weil_flags,
    })
}

/// The L-polynomial of nondegenerate parameters at a good prime, as a product
/// over Frobenius orbits in (Z/m)^×, verified against H_{q^s} for s ≤ max_r.
pub fn l_polynomial(p: u64, params: &HgmParams, t: Ratio<i64>, max_r: usize) -> Result<LPolynomialReport> {
    if classify(params).kind != DegeneracyKind::Nondegenerate {
        return Err(HgmError::Degenerate);
    }
    let m = params.m();
    check_good_prime(p, m, t)?;
    orbit_l_factor(p, params, m, t, max_r)
}

/// Torus-twist factor of an isotypic divisor:
/// Π_k Π_{j<e} (1 - q_d^j λ_k T^{f_d})^{(-1)^{n-j} C(e-1, j)}.
pub fn torus_twist_factor(p: u64, spec: &CoverSpec, d: u64, t: Ratio<i64>) -> Result<LocalFactor> {
    let f = arith::mult_order(p, d);
    let ctx = build_field(p, f as u32)?;
    let q = ctx.q() as i128;
    let tq = reduce_t(&ctx, t)?;
    let e = degenerate_indices(spec, compute_id(spec, d)?).len() as u64;
    let n = spec.n() as u64;
    let mut base = vec![AlgValue::ONE];
    for k in arith::frobenius_orbit_reps(p, d) {
        let lam = psi_gross(&ctx, spec, d, tq, k)?;
        base = poly_mul_alg(&base, &[AlgValue::ONE, -lam]);
    }
    let base: Vec<i128> = base.iter().map(|c| c.snap().map(|v| v as i128)).collect::<Result<_>>()?;
    let mut num = vec![1i128];
    let mut den = vec![1i128];
    for j in 0..e {
        let pj: Vec<i128> = base.iter().enumerate().map(|(i, &c)| c * q.pow((j * i as u64) as u32)).collect();
        let mult = arith::binomial(e - 1, j);
        let positive = (n - j) % 2 == 0;
        for _ in 0..mult {
            if positive {
                num = poly_mul_int(&num, &pj);
            } else {
                den = poly_mul_int(&den, &pj);
            }
        }
    }
    let poly_num = inflate(&num, f);
    let poly_den = inflate(&den, f);
    let degree = poly_num.len() as i64 - poly_den.len() as i64;
    Ok(LocalFactor { d, f_d: f, kind: FactorKind::TorusTwist, poly_num, poly_den, degree })
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalZeta {
    pub p: u64,
    pub factors: Vec<LocalFactor>,
    /// #X(F_{p^r}) for r = 1..=order.
    pub counts: Vec<u64>,
    /// exp(Σ #X(F_{p^r}) T^r / r) through T^order, as "num/den" strings.
    pub count_series: Vec<String>,
    /// The product of the factors through T^order.
    pub factor_series: Vec<String>,
    /// |coefficient difference| per order.
    pub residuals: Vec<f64>,
    pub series_check: bool,
    pub first_mismatch: Option<usize>,
    pub weil_flags: Vec<WeilFlag>,
}

/// Factor the local zeta function of X at a good prime p and compare it with
/// the point counts #X(F_{p^r}), r ≤ series_order, from direct enumeration.
pub fn local_zeta(p: u64, spec: &CoverSpec, t: Ratio<i64>, series_order: usize) -> Result<LocalZeta> {
    check_good_prime(p, spec.m, t)?;
    let n = spec.n();
    let mut factors = Vec::new();
    let mut weil_flags = Vec::new();
    for d in arith::divisors(spec.m) {
        match formula_case(spec, d)? {
            FormulaCase::A => {
                let report = orbit_l_factor(p, &divisor_params(spec, d), d, t, n)?;
                weil_flags.extend(report.weil_flags);
                factors.push(report.factor);
            }
            FormulaCase::B => factors.push(torus_twist_factor(p, spec, d, t)?),
            FormulaCase::C => factors.push(LocalFactor {
                d,
                f_d: arith::mult_order(p, d),
                kind: FactorKind::Trivial,
                poly_num: vec![1],
                poly_den: vec![1],
                degree: 0,
            }),
        }
    }

    let mut counts = Vec::with_capacity(series_order);
    for r in 1..=series_order {
        let ctx = build_field(p, r as u32)?;
        counts.push(count_x_direct(&ctx, spec, reduce_t(&ctx, t)?)?);
    }
    let lhs = exp_of_counts(&counts);
    let rhs = factor_product_series(&factors, series_order);
    let residuals: Vec<f64> = lhs
        .iter()
        .zip(&rhs)
        .map(|(a, b)| (a - b).to_f64().unwrap_or(f64::INFINITY).abs())
        .collect();
    let first_mismatch = residuals.iter().position(|&r| r != 0.0);
    Ok(LocalZeta {
        p,
        factors,
        counts,
        count_series: lhs.iter().map(|c| c.to_string()).collect(),
        factor_series: rhs.iter().map(|c| c.to_string()).collect(),
        residuals,
        series_check: first_mismatch.is_none(),
        first_mismatch,
        weil_flags,
    })
}

/// [`local_zeta`], failing with `SeriesMismatch` on disagreement.
pub fn local_zeta_checked(p: u64, spec: &CoverSpec, t: Ratio<i64>, series_order: usize) -> Result<LocalZeta> {
    let z = local_zeta(p, spec, t, series_order)?;
    if let Some(order) = z.first_mismatch {
        return Err(HgmError::SeriesMismatch {
            order,
            expected: z.count_series[order].clone(),
            got: z.factor_series[order].clone(),
        });
    }
    Ok(z)
}

/// exp(Σ_{r≥1} N_r T^r / r) through T^{len}; z_k = (1/k) Σ_{r=1}^k N_r z_{k-r}.
pub fn exp_of_counts(counts: &[u64]) -> Vec<BigRational> {
    let mut z = vec![BigRational::from_integer(BigInt::from(1))];
    for k in 1..=counts.len() {
        let mut acc = BigRational::zero();
        for r in 1..=k {
            acc += &z[k - r] * BigRational::from_integer(BigInt::from(counts[r - 1]));
        }
        z.push(acc / BigRational::from_integer(BigInt::from(k)));
    }
    z
}

/// Π num / Π den as a power series through T^order.
pub fn factor_product_series(factors: &[LocalFactor], order: usize) -> Vec<BigRational> {
    let trunc = |v: &[i128]| -> Vec<BigInt> {
        let mut out: Vec<BigInt> = v.iter().take(order + 1).map(|&c| BigInt::from(c)).collect();
        out.resize(order + 1, BigInt::zero());
        out
    };
    let mul = |a: &[BigInt], b: &[BigInt]| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); order + 1];
        for i in 0..=order {
            for j in 0..=order - i {
                out[i + j] += &a[i] * &b[j];
            }
        }
        out
    };
    let mut num = trunc(&[1]);
    let mut den = trunc(&[1]);
    for f in factors {
        num = mul(&num, &trunc(&f.poly_num));
        den = mul(&den, &trunc(&f.poly_den));
    }
    // den has constant term 1, so the quotient has integer coefficients
    let mut out: Vec<BigInt> = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut acc = num[k].clone();
        for j in 1..=k {
            acc -= &den[j] * &out[k - j];
        }
        out.push(acc / &den[0]);
    }
    out.into_iter().map(BigRational::from_integer).collect()
}
