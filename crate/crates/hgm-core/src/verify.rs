//! Identity suites over parameter and field grids. Each suite reports its
//! instance count, failures and worst residual. Where a stated identity is
//! known not to hold as written, the literal form and the corrected form are
//! separate suites.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use serde::Serialize;

use crate::arith;
use crate::charsums::{gauss_ratio, gauss_sum, gauss_sum_direct, jacobi_sum, mul_char, AlgValue, ParamPoint};
use crate::error::Result;
use crate::family::{
    compute_id, compute_mi, count_stratum, count_y, eval_f, for_each_slice_point, immersion_coordinates,
    immersion_inverse, primitive_p, satisfies_x_equations, twisted_p, CoverSpec, StratumIndex,
};
use crate::ffield::{build_field, build_field_with_generator, FieldCtx, FqElem};
use crate::hgm_sums::{classify, h_sum, nondegenerate_character_sum, DegeneracyKind, HgmParams};
use crate::series::{apply_d, f_series, shifted_solution};
use crate::zeta::{formula_case, local_zeta, q_factor, q_factor_oracle, FormulaCase};

pub const IDENTITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub instances: usize,
    pub failures: usize,
    pub worst_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub first_failure: Option<String>,
}

struct Tally {
    name: String,
    tolerance: f64,
    instances: usize,
    failures: usize,
    worst: f64,
    first_failure: Option<String>,
}

impl Tally {
    fn new(name: &str, tolerance: f64) -> Self {
        Tally { name: name.into(), tolerance, instances: 0, failures: 0, worst: 0.0, first_failure: None }
    }

    fn record(&mut self, residual: f64, ok: bool, describe: impl FnOnce() -> String) {
        self.instances += 1;
        if residual.is_nan() || residual > self.worst {
            self.worst = residual;
        }
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    fn within(&mut self, residual: f64, describe: impl FnOnce() -> String) {
        let ok = residual <= self.tolerance;
        self.record(residual, ok, describe);
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            name: self.name,
            instances: self.instances,
            failures: self.failures,
            worst_residual: self.worst,
            tolerance: self.tolerance,
            passed: self.failures == 0 && self.instances > 0,
            first_failure: self.first_failure,
        }
    }
}

// ---------------------------------------------------------------------------
// Grids

/// Prime powers q = p^r with 2 < q ≤ q_max, as (p, r), ascending in q.
pub fn prime_powers_up_to(q_max: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for q in 3..=q_max {
        let f = arith::prime_factors(q);
        if f.len() == 1 || f.iter().all(|&x| x == f[0]) {
            let p = f[0];
            let mut r = 0u32;
            let mut v = q;
            while v > 1 {
                v /= p;
                r += 1;
            }
            out.push((p, r));
        }
    }
    out
}

pub fn build_fields(list: &[(u64, u32)]) -> Result<Vec<FieldCtx>> {
    list.iter().map(|&(p, r)| build_field(p, r)).collect()
}

/// All of F_q ∖ {0, 1} when it has at most `count` elements, else `count`
/// evenly spaced ones.
pub fn sample_t(ctx: &FieldCtx, count: usize) -> Vec<FqElem> {
    let all: Vec<FqElem> = (0..ctx.q()).map(FqElem).filter(|&x| x != FqElem::ZERO && x != FqElem::ONE).collect();
    if all.len() <= count {
        return all;
    }
    let step = all.len() as f64 / count as f64;
    (0..count).map(|i| all[(i as f64 * step) as usize]).collect()
}

fn points(den: u64) -> Vec<ParamPoint> {
    (0..den as i64).map(|j| ParamPoint::new(j, den as i64).unwrap()).collect()
}

/// Every HgmParams of length n with entries in (1/den)Z/Z.
pub fn all_params(n: usize, den: u64) -> Vec<HgmParams> {
    let pts = points(den);
    let total = (den as usize).pow(2 * n as u32);
    (0..total)
        .map(|mut code| {
            let mut v = Vec::with_capacity(2 * n);
            for _ in 0..2 * n {
                v.push(pts[code % den as usize]);
                code /= den as usize;
            }
            HgmParams { alpha: v[..n].to_vec(), beta: v[n..].to_vec() }
        })
        .collect()
}

/// Covers used by the stratified-count suites.
pub fn standard_specs() -> Vec<CoverSpec> {
    let raw: &[(&[i64], &[i64], u64)] = &[
        (&[1, 0], &[3, 2], 4),
        (&[1, 3, 6], &[3, 7, 18], 12),
        (&[1], &[3], 4),
        (&[1, 1], &[2, 3], 3),
        (&[1, 2], &[3, 5], 6),
        (&[0, 0], &[0, 0], 1),
        (&[1, 1], &[3, 3], 2),
        (&[2, 1], &[3, 4], 6),
        (&[0, 1], &[2, 3], 2),
        (&[0, 1], &[4, 5], 4),
        (&[1, 1, 2], &[2, 3, 4], 4),
    ];
    raw.iter().map(|(a, b, m)| CoverSpec::new(a.to_vec(), b.to_vec(), *m).unwrap()).collect()
}

fn usable(ctx: &FieldCtx, spec: &CoverSpec) -> bool {
    spec.m % ctx.p() as u64 != 0
}

fn fname(ctx: &FieldCtx) -> String {
    format!("F_{}", ctx.q())
}

// ---------------------------------------------------------------------------
// Character-sum identities, exhaustive over (1/(q-1))Z/Z

pub fn suite_gauss_basics(fields: &[FieldCtx]) -> Result<SuiteReport> {
    let mut tally = Tally::new("gauss-sum-basics", IDENTITY_TOL);
    for ctx in fields {
        let q = ctx.q() as f64;
        let minus_one = ctx.neg(FqElem::ONE);
        for a in points(ctx.q_units() as u64) {
            let g = gauss_sum(ctx, a)?;
            let mut res = g.dist(gauss_sum_direct(ctx, a)?);
            if a.is_integral() {
                res = res.max(g.dist(AlgValue::from_int(-1)));
            } else {
                let prod = g * gauss_sum(ctx, -a)?;
                res = res.max(prod.dist(mul_char(ctx, a, minus_one)?.scale(q)));
                res = res.max((g.abs() * g.abs() - q).abs());
            }
            tally.within(res, || format!("{} alpha={a}", fname(ctx)));
        }
    }
    Ok(tally.finish())
}

fn for_each_pair(ctx: &FieldCtx, mut f: impl FnMut(ParamPoint, ParamPoint) -> Result<()>) -> Result<()> {
    let pts = points(ctx.q_units() as u64);
    for &a in &pts {
        for &b in &pts {
            f(a, b)?;
        }
    }
    Ok(())
}

/// g(α)g(-β)/g(α-β) = J(α,-β) - [α-β ∈ Z]·ω^{-β}(-1)·(q-1).
pub fn suite_ratio_jacobi(fields: &[FieldCtx]) -> Result<SuiteReport> {
    let mut tally = Tally::new("gauss-ratio-jacobi", IDENTITY_TOL);
    for ctx in fields {
        let minus_one = ctx.neg(FqElem::ONE);
        let qx = ctx.q_units() as f64;
        for_each_pair(ctx, |a, b| {
            let lhs = gauss_ratio(ctx, a, b)?;
            let mut rhs = jacobi_sum(ctx, a, -b)?;
            if (a - b).is_integral() {
                rhs = rhs - mul_char(ctx, -b, minus_one)?.scale(qx);
            }
            tally.within(lhs.dist(rhs), || format!("{} alpha={a} beta={b}", fname(ctx)));
            Ok(())
        })?;
    }
    Ok(tally.finish())
}

/// The three-branch table of g(α)g(-β)/g(α-β).
pub fn suite_ratio_branches(fields: &[FieldCtx]) -> Result<SuiteReport> {
    let mut tally = Tally::new("gauss-ratio-branches", IDENTITY_TOL);
    for ctx in fields {
        let minus_one = ctx.neg(FqElem::ONE);
        let q = ctx.q() as f64;
        for_each_pair(ctx, |a, b| {
            let lhs = gauss_ratio(ctx, a, b)?;
            let rhs = if a.is_integral() || b.is_integral() {
                AlgValue::from_int(-1)
            } else if !(a - b).is_integral() {
                jacobi_sum(ctx, a, -b)?
            } else {
                -mul_char(ctx, a, minus_one)?.scale(q)
            };
            tally.within(lhs.dist(rhs), || format!("{} alpha={a} beta={b}", fname(ctx)));
            Ok(())
        })?;
    }
    Ok(tally.finish())
}

/// α-β ∈ Z, α ∉ Z: J(α,-β) = -ω^α(-1) = q^{-1} g(α)g(-β)/g(α-β).
pub fn suite_jacobi_degenerate(fields: &[FieldCtx]) -> Result<SuiteReport> {
    let mut tally = Tally::new("jacobi-degenerate", IDENTITY_TOL);
    for ctx in fields {
        let minus_one = ctx.neg(FqElem::ONE);
        let q = ctx.q() as f64;
        for_each_pair(ctx, |a, b| {
            if !(a - b).is_integral() || a.is_integral() {
                return Ok(());
            }
            let j = jacobi_sum(ctx, a, -b)?;
            let target = -mul_char(ctx, a, minus_one)?;
            let ratio = gauss_ratio(ctx, a, b)?.scale(1.0 / q);
            tally.within(j.dist(target).max(j.dist(ratio)), || format!("{} alpha={a} beta={b}", fname(ctx)));
            Ok(())
        })?;
    }
    Ok(tally.finish())
}

/// J(α,-α) = -ω^α(-1) for α ∉ Z, and J(0,0) = q-2.
pub fn suite_jacobi_opposite(fields: &[FieldCtx]) -> Result<SuiteReport> {
    let mut tally = Tally::new("jacobi-opposite", IDENTITY_TOL);
    for ctx in fields {
        let minus_one = ctx.neg(FqElem::ONE);
        for a in points(ctx.q_units() as u64) {
            let j = jacobi_sum(ctx, a, -a)?;
            let target = if a.is_integral() {
                AlgValue::from_int(ctx.q() as i64 - 2)
            } else {
                -mul_char(ctx, a, minus_one)?
            };
            tally.within(j.dist(target), || format!("{} alpha={a}", fname(ctx)));
        }
    }
    Ok(tally.finish())
}

/// Σ_x ω^α(x)ω^β(1-x) = Σ_x ω^α(-x)ω^{-α-β}(1-x), both by enumeration.
pub fn suite_mobius(fields: &[FieldCtx]) -> Result<SuiteReport> {
    let mut tally = Tally::new("jacobi-mobius", IDENTITY_TOL);
    for ctx in fields {
        let n = ctx.q_units() as u64;
        let elems: Vec<(u64, u64, u64)> = ctx
            .elements()
            .filter(|&x| x != FqElem::ZERO && x != FqElem::ONE)
            .map(|x| {
                (
                    ctx.dlog_unchecked(x) as u64,
                    ctx.dlog_unchecked(ctx.neg(x)) as u64,
                    ctx.dlog_unchecked(ctx.one_minus(x)) as u64,
                )
            })
            .collect();
        for_each_pair(ctx, |a, b| {
            let (ja, jb) = (a.exponent(n)?, b.exponent(n)?);
            let jab = (-(a + b)).exponent(n)?;
            let mut lhs = AlgValue::ZERO;
            let mut rhs = AlgValue::ZERO;
            for &(lx, lmx, l1x) in &elems {
                lhs += AlgValue::root_of_unity(((ja * lx + jb * l1x) % n) as i64, n);
                rhs += AlgValue::root_of_unity(((ja * lmx + jab * l1x) % n) as i64, n);
            }
            tally.within(lhs.dist(rhs), || format!("{} alpha={a} beta={b}", fname(ctx)));
            Ok(())
        })?;
    }
    Ok(tally.finish())
}

// ---------------------------------------------------------------------------
// Hypergeometric-sum identities

/// Parameter grid for the H suites: every length-1 parameter set over
/// (1/(q-1))Z/Z, and every length-2 set over (1/den)Z/Z where den = q-1 if
/// `full_n2`, else gcd(q-1, 12).
pub fn h_grid(ctx: &FieldCtx, full_n2: bool) -> Vec<HgmParams> {
    let qx = ctx.q_units() as u64;
    let den2 = if full_n2 { qx } else { arith::gcd(qx, 12) };
    let mut out = all_params(1, qx);
    out.extend(all_params(2, den2));
    out
}

fn h_ts(ctx: &FieldCtx, params: &HgmParams) -> Vec<FqElem> {
    // t = 1 is allowed for H; keep every t for length 1, a sample otherwise
    let mut ts = sample_t(ctx, if params.n() == 1 { usize::MAX } else { 3 });
    if params.n() == 1 {
        ts.push(FqElem::ONE);
    }
    ts
}

fn shift_deltas(ctx: &FieldCtx, params: &HgmParams) -> Vec<ParamPoint> {
    let qx = ctx.q_units() as i64;
    if params.n() == 1 {
        (1..qx).map(|j| ParamPoint::new(j, qx).unwrap()).collect()
    } else {
        let mut v = vec![ParamPoint::new(1, qx).unwrap()];
        if qx % 2 == 0 {
            v.push(ParamPoint::new(1, 2).unwrap());
        }
        v
    }
}

/// H(α+δ, β-δ, t) = H(α, β, t), as literally stated.
pub fn suite_shift_literal(fields: &[FieldCtx], full_n2: bool) -> Result<SuiteReport> {
    let mut tally = Tally::new("h-shift-literal", IDENTITY_TOL);
    for ctx in fields {
        for params in h_grid(ctx, full_n2) {
            for t in h_ts(ctx, &params) {
                let h = h_sum(ctx, &params, t)?;
                for d in shift_deltas(ctx, &params) {
                    let moved = HgmParams {
                        alpha: params.alpha.iter().map(|&a| a + d).collect(),
                        beta: params.beta.iter().map(|&b| b - d).collect(),
                    };
                    let res = h_sum(ctx, &moved, t)?.dist(h);
                    tally.within(res, || format!("{} {params} t={} delta={d}", fname(ctx), t.0));
                }
            }
        }
    }
    Ok(tally.finish())
}

/// H(α+δ, β+δ, t) = ω((-1)^n t)^{-δ} H(α, β, t).
pub fn suite_shift_twisted(fields: &[FieldCtx], full_n2: bool) -> Result<SuiteReport> {
    let mut tally = Tally::new("h-shift-twisted", IDENTITY_TOL);
    for ctx in fields {
        let minus_one = ctx.neg(FqElem::ONE);
        for params in h_grid(ctx, full_n2) {
            for t in h_ts(ctx, &params) {
                let h = h_sum(ctx, &params, t)?;
                let st = if params.n() % 2 == 1 { ctx.mul(minus_one, t) } else { t };
                for d in shift_deltas(ctx, &params) {
                    let expected = h * mul_char(ctx, -d, st)?;
                    let res = h_sum(ctx, &params.shift(d), t)?.dist(expected);
                    tally.within(res, || format!("{} {params} t={} delta={d}", fname(ctx), t.0));
                }
            }
        }
    }
    Ok(tally.finish())
}

/// H(pα, pβ, t) = H(α, β, t^p).
pub fn suite_galois(fields: &[FieldCtx], full_n2: bool) -> Result<SuiteReport> {
    let mut tally = Tally::new("h-galois", IDENTITY_TOL);
    for ctx in fields {
        let p = ctx.p() as i64;
        for params in h_grid(ctx, full_n2) {
            let frob = params.scale(p);
            for t in h_ts(ctx, &params) {
                let res = h_sum(ctx, &frob, t)?.dist(h_sum(ctx, &params, ctx.pow(t, p))?);
                tally.within(res, || format!("{} {params} t={}", fname(ctx), t.0));
            }
        }
    }
    Ok(tally.finish())
}

fn pair_multiset(params: &HgmParams) -> Vec<(ParamPoint, ParamPoint)> {
    let mut v: Vec<_> = params.alpha.iter().copied().zip(params.beta.iter().copied()).collect();
    v.sort();
    v
}

/// H(kα, kβ, t) = H(α, β, t) whenever multiplication by k permutes the pairs.
pub fn suite_field_of_definition(fields: &[FieldCtx], full_n2: bool) -> Result<SuiteReport> {
    let mut tally = Tally::new("h-field-of-definition", IDENTITY_TOL);
    for ctx in fields {
        for params in h_grid(ctx, full_n2) {
            let base = pair_multiset(&params);
            for k in arith::units_mod(params.m()) {
                let moved = params.scale(k as i64);
                if k == 1 || pair_multiset(&moved) != base {
                    continue;
                }
                for t in h_ts(ctx, &params) {
                    let res = h_sum(ctx, &moved, t)?.dist(h_sum(ctx, &params, t)?);
                    tally.within(res, || format!("{} {params} k={k} t={}", fname(ctx), t.0));
                }
            }
        }
    }
    Ok(tally.finish())
}

/// Σ_{k∈(Z/m)^×} H(kα, kβ, t) is the same for two choices of generator.
pub fn suite_generator_independence(fields: &[FieldCtx]) -> Result<SuiteReport> {
    let mut tally = Tally::new("h-generator-independence", IDENTITY_TOL);
    for ctx in fields {
        let qx = ctx.q_units() as u64;
        let Some(k) = (2..qx).find(|&k| arith::gcd(k, qx) == 1) else { continue };
        let other = build_field_with_generator(ctx.p() as u64, ctx.r(), &ctx.coeffs(ctx.gen_pow(k as i64)))?;
        for params in h_grid(ctx, false) {
            let units = arith::units_mod(params.m());
            for t in sample_t(ctx, 3) {
                let mut a = AlgValue::ZERO;
                let mut b = AlgValue::ZERO;
                for &u in &units {
                    a += h_sum(ctx, &params.scale(u as i64), t)?;
                    b += h_sum(&other, &params.scale(u as i64), t)?;
                }
                tally.within(a.dist(b), || format!("{} {params} t={}", fname(ctx), t.0));
            }
        }
    }
    Ok(tally.finish())
}

/// The nondegenerate character sum against `sign`·H; an instance passes when
/// the two agree within their combined error bound and that bound is below
/// 1e-6·q^{n/2}.
pub fn suite_nondegenerate_count(
    name: &str,
    instances: &[(usize, HgmParams, FqElem)],
    fields: &[FieldCtx],
    sign: f64,
) -> Result<SuiteReport> {
    let mut tally = Tally::new(name, 0.0);
    for (fi, params, t) in instances {
        let ctx = &fields[*fi];
        let lhs = nondegenerate_character_sum(ctx, params, *t)?;
        let rhs = h_sum(ctx, params, *t)?.scale(sign);
        let err = lhs.err + rhs.err;
        let cap = 1e-6 * (ctx.q() as f64).powf(params.n() as f64 / 2.0);
        let res = lhs.dist(rhs);
        let ok = res <= err.max(f64::EPSILON) && err < cap;
        tally.record(res, ok, || format!("{} {params} t={}: lhs={lhs:?} rhs={rhs:?}", fname(ctx), t.0));
    }
    Ok(tally.finish())
}

/// A deterministic grid of nondegenerate (params, t) instances over `fields`:
/// up to `per_field` per field, spread over n = 1, 2, 3.
pub fn nondegenerate_grid(fields: &[FieldCtx], per_field: usize) -> Vec<(usize, HgmParams, FqElem)> {
    let mut out = Vec::new();
    for (fi, ctx) in fields.iter().enumerate() {
        let qx = ctx.q_units() as u64;
        let den_below = |cap: u64| arith::divisors(qx).into_iter().filter(|&d| d <= cap).max().unwrap_or(1);
        let ts = sample_t(ctx, 8);
        if ts.is_empty() {
            continue;
        }
        for n in 1..=3usize {
            let quota = per_field / 3 + usize::from(n <= per_field % 3);
            let cands: Vec<HgmParams> = all_params(n, den_below(if n < 3 { 12 } else { 4 }))
                .into_iter()
            .filter(|p| classify(p).kind == DegeneracyKind::Nondegenerate)
            .collect();
            if cands.is_empty() {
                continue;
            }
            let stride = (cands.len() / quota.max(1)).max(1);
            for (j, params) in cands.into_iter().step_by(stride).take(quota).enumerate() {
                out.push((fi, params, ts[(j * 3 + n) % ts.len()]));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Point-count decompositions

/// count_Y = Σ_{d | gcd(m, q-1)} P_d.
pub fn suite_primitive_decomposition(fields: &[FieldCtx], specs: &[CoverSpec], t_count: usize) -> Result<SuiteReport> {
    let mut tally = Tally::new("primitive-decomposition", IDENTITY_TOL);
    for ctx in fields {
        for spec in specs.iter().filter(|s| usable(ctx, s)) {
            let mq = arith::gcd(spec.m, ctx.q_units() as u64);
            for t in sample_t(ctx, t_count) {
                let y = count_y(ctx, spec, t)? as f64;
                let mut acc = AlgValue::ZERO;
                for d in arith::divisors(mq) {
                    acc += primitive_p(ctx, spec, d, t)?;
                }
                tally.within(acc.dist(AlgValue::from_int(y as i64)), || {
                    format!("{} {spec:?} t={}", fname(ctx), t.0)
                });
            }
        }
    }
    Ok(tally.finish())
}

/// count_stratum(I) = Σ_d P'_{d,I}, with d over divisors of gcd(m_I, q-1),
/// or of gcd(m, q-1) when `literal_range`.
pub fn suite_stratum_decomposition(
    fields: &[FieldCtx],
    specs: &[CoverSpec],
    t_count: usize,
    literal_range: bool,
) -> Result<SuiteReport> {
    let name = if literal_range { "stratum-decomposition-literal" } else { "stratum-decomposition" };
    let mut tally = Tally::new(name, IDENTITY_TOL);
    for ctx in fields {
        for spec in specs.iter().filter(|s| usable(ctx, s)) {
            for t in sample_t(ctx, t_count) {
                for i_set in StratumIndex::all(spec.n()) {
                    let range = if literal_range { spec.m } else { compute_mi(spec, i_set) };
                    let dq = arith::gcd(range, ctx.q_units() as u64);
                    let count = count_stratum(ctx, spec, i_set, t)? as i64;
                    let mut acc = AlgValue::ZERO;
                    for d in arith::divisors(dq) {
                        acc += twisted_p(ctx, spec, d, i_set, t)?;
                    }
                    tally.within(acc.dist(AlgValue::from_int(count)), || {
                        format!("{} {spec:?} I={i_set} t={}: count {count}, sum {:.6}", fname(ctx), t.0, acc.re)
                    });
                }
            }
        }
    }
    Ok(tally.finish())
}

/// Every point of Y maps to a solution of the compactification equations,
/// and the inverse recovers y.
pub fn suite_immersion_round_trip(fields: &[FieldCtx], specs: &[CoverSpec], t_count: usize) -> Result<SuiteReport> {
    let mut tally = Tally::new("immersion-round-trip", 0.0);
    for ctx in fields {
        for spec in specs.iter().filter(|s| usable(ctx, s)) {
            let ys_by_power = power_preimages(ctx, spec.m);
            for t in sample_t(ctx, t_count) {
                for_each_slice_point(ctx, spec.n(), t, false, |x| {
                    let f = eval_f(ctx, spec, x);
                    for &y in ys_by_power.get(&f.0).map(Vec::as_slice).unwrap_or(&[]) {
                        let ys: BTreeMap<u64, FqElem> = immersion_coordinates(ctx, spec, x, y);
                        let ok = satisfies_x_equations(ctx, spec, x, &ys) && immersion_inverse(ctx, spec, x, &ys) == y;
                        tally.record(if ok { 0.0 } else { 1.0 }, ok, || {
                            format!("{} {spec:?} t={} x={x:?} y={}", fname(ctx), t.0, y.0)
                        });
                    }
                });
            }
        }
    }
    Ok(tally.finish())
}

fn power_preimages(ctx: &FieldCtx, m: u64) -> BTreeMap<u32, Vec<FqElem>> {
    let mut map: BTreeMap<u32, Vec<FqElem>> = BTreeMap::new();
    for y in ctx.nonzero_elements() {
        map.entry(ctx.pow(y, m as i64).0).or_default().push(y);
    }
    map
}

// ---------------------------------------------------------------------------
// Divisor pieces Q'_d

/// One (field, spec, t, d) instance of the divisor-piece suites.
#[derive(Debug, Clone)]
pub struct QInstance {
    pub field: usize,
    pub spec: CoverSpec,
    pub t: FqElem,
    pub d: u64,
    pub case: FormulaCase,
}

pub fn q_instances(fields: &[FieldCtx], specs: &[CoverSpec], t_count: usize) -> Result<Vec<QInstance>> {
    let mut out = Vec::new();
    for (fi, ctx) in fields.iter().enumerate() {
        for spec in specs.iter().filter(|s| usable(ctx, s)) {
            let mq = arith::gcd(spec.m, ctx.q_units() as u64);
            for t in sample_t(ctx, t_count) {
                for d in arith::divisors(mq) {
                    let case = formula_case(spec, d)?;
                    out.push(QInstance { field: fi, spec: spec.clone(), t, d, case });
                }
            }
        }
    }
    Ok(out)
}

/// The isotypic closed form with (b_i - a_i) in the second ratio slot and
/// per-index sign characters. It does not agree with enumeration and exists
/// only for comparison.
pub fn isotypic_closed_form_variant(ctx: &FieldCtx, spec: &CoverSpec, d: u64, t: FqElem) -> Result<AlgValue> {
    let id = compute_id(spec, d)?;
    let n = spec.n();
    let c = spec.a[(0..n).find(|&i| !id.contains(i)).expect("degenerate index")];
    let (di, qx) = (d as i64, ctx.q_units() as i64);
    let minus_one = ctx.neg(FqElem::ONE);
    let sum_a: i64 = spec.a.iter().sum();
    let mut acc = AlgValue::ZERO;
    for k in arith::units_mod(d) {
        let k = k as i64;
        let mut v = mul_char(ctx, ParamPoint::new(-k * c, di)?, t)?
            * AlgValue::from_int(qx.pow((n - id.len() - 1) as u32))
            * mul_char(ctx, ParamPoint::new(k * sum_a, di)?, minus_one)?;
        for i in id.members() {
            if (c - spec.b[i]) % di != 0 {
                v *= gauss_ratio(
                    ctx,
                    ParamPoint::new(k * (spec.a[i] - c), di)?,
                    ParamPoint::new(k * (spec.b[i] - spec.a[i]), di)?,
                )?;
            } else {
                v *= mul_char(ctx, ParamPoint::new(k * (spec.a[i] - c), di)?, minus_one)?;
            }
        }
        acc += v;
    }
    Ok(if id.len() % 2 == 1 { -acc } else { acc })
}

/// Which closed form a Q'-suite compares against the enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QForm {
    /// Case A with -ΣH.
    HypergeometricNegated,
    /// Case A with +ΣH, as implemented.
    Hypergeometric,
    /// Case B through [`isotypic_closed_form_variant`].
    IsotypicVariant,
    /// Case B as implemented.
    Isotypic,
    /// Case C: exactly zero.
    Zero,
}

impl QForm {
    pub fn case(self) -> FormulaCase {
        match self {
            QForm::HypergeometricNegated | QForm::Hypergeometric => FormulaCase::A,
            QForm::IsotypicVariant | QForm::Isotypic => FormulaCase::B,
            QForm::Zero => FormulaCase::C,
        }
    }

    pub fn suite_name(self) -> &'static str {
        match self {
            QForm::HypergeometricNegated => "q-factor-a-literal",
            QForm::Hypergeometric => "q-factor-a",
            QForm::IsotypicVariant => "q-factor-b-literal",
            QForm::Isotypic => "q-factor-b",
            QForm::Zero => "q-factor-c",
        }
    }
}

/// Closed form against the Σ_{I ⊇ I_d} P'_{d,I} enumeration, over the
/// instances of the matching case. Case C additionally requires both sides
/// to snap to exactly 0.
pub fn suite_q_factor(fields: &[FieldCtx], instances: &[QInstance], form: QForm) -> Result<SuiteReport> {
    let mut tally = Tally::new(form.suite_name(), 1e-6);
    for inst in instances.iter().filter(|i| i.case == form.case()) {
        let ctx = &fields[inst.field];
        let oracle = q_factor_oracle(ctx, &inst.spec, inst.d, inst.t)?;
        let value = match form {
            QForm::HypergeometricNegated => -q_factor(ctx, &inst.spec, inst.d, inst.t)?.value,
            QForm::IsotypicVariant => isotypic_closed_form_variant(ctx, &inst.spec, inst.d, inst.t)?,
            _ => q_factor(ctx, &inst.spec, inst.d, inst.t)?.value,
        };
        let mut res = value.dist(oracle);
        let mut ok = res <= 1e-6;
        if form == QForm::Zero {
            ok &= oracle.snap().ok() == Some(0) && value.snap().ok() == Some(0);
            res = res.max(oracle.abs());
        }
        tally.record(res, ok, || {
            format!(
                "{} {:?} d={} t={}: closed form {:.6}{:+.6}i, enumeration {:.6}{:+.6}i",
                fname(ctx),
                inst.spec,
                inst.d,
                inst.t.0,
                value.re,
                value.im,
                oracle.re,
                oracle.im
            )
        });
    }
    Ok(tally.finish())
}

// ---------------------------------------------------------------------------
// Zeta series and annihilation

/// local_zeta's series check on each (spec, p, t), comparing through T^order.
pub fn suite_zeta_series(items: &[(CoverSpec, u64, Ratio<i64>)], order: usize) -> Result<SuiteReport> {
    let mut tally = Tally::new("zeta-series", 1e-4);
    for (spec, p, t) in items {
        let z = local_zeta(*p, spec, *t, order)?;
        let res = z.residuals.iter().copied().fold(0.0, f64::max);
        tally.within(res, || {
            format!("{spec:?} p={p} t={t}: counts {:?} vs factors {:?}", z.count_series, z.factor_series)
        });
    }
    Ok(tally.finish())
}

/// Parameter sets (α, β) for the annihilation suite, including repeated β.
pub fn annihilation_params() -> Vec<(Vec<BigRational>, Vec<BigRational>)> {
    let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    let raw: &[(&[(i64, i64)], &[(i64, i64)])] = &[
        (&[(1, 2)], &[(1, 1)]),
        (&[(1, 3)], &[(1, 1)]),
        (&[(1, 2), (1, 2)], &[(1, 1), (1, 1)]),
        (&[(1, 3), (2, 3)], &[(1, 2), (1, 1)]),
        (&[(1, 4), (3, 4)], &[(1, 3), (1, 1)]),
        (&[(1, 5), (2, 5)], &[(1, 4), (1, 1)]),
        (&[(1, 6), (5, 6)], &[(1, 2), (1, 1)]),
        (&[(1, 2), (1, 3)], &[(3, 4), (1, 1)]),
        (&[(1, 2), (1, 2), (1, 2)], &[(1, 1), (1, 1), (1, 1)]),
        (&[(1, 3), (1, 2), (2, 3)], &[(1, 4), (3, 4), (1, 1)]),
        (&[(1, 5), (2, 5), (3, 5)], &[(1, 3), (2, 3), (1, 1)]),
        (&[(1, 7), (2, 7), (4, 7)], &[(1, 2), (1, 2), (1, 1)]),
        (&[(1, 2), (1, 4), (3, 4)], &[(1, 3), (1, 3), (1, 1)]),
        (&[(1, 8), (3, 8)], &[(1, 2), (1, 1)]),
        (&[(1, 3), (1, 3)], &[(1, 2), (1, 2)]),
        (&[(1, 4), (1, 2)], &[(2, 3), (2, 3)]),
        (&[(1, 5), (4, 5)], &[(1, 3), (2, 3)]),
        (&[(1, 6), (1, 2), (5, 6)], &[(1, 4), (1, 4), (1, 1)]),
        (&[(2, 3), (3, 4), (5, 6)], &[(1, 5), (2, 5), (1, 1)]),
        (&[(1, 12), (5, 12), (7, 12), (11, 12)], &[(1, 3), (1, 2), (2, 3), (1, 1)]),
        (&[(1, 2), (1, 2), (1, 2), (1, 2)], &[(1, 1), (1, 1), (1, 1), (1, 1)]),
        (&[(1, 10), (3, 10)], &[(1, 7), (1, 7)]),
    ];
    raw.iter()
        .map(|(a, b)| (a.iter().map(|&(n, d)| q(n, d)).collect(), b.iter().map(|&(n, d)| q(n, d)).collect()))
        .collect()
}

/// D(α, β) kills F(α, β) when some β_j = 1, and every shifted solution
/// F_j for which the series is defined, exactly through `order`.
pub fn suite_annihilation(sets: &[(Vec<BigRational>, Vec<BigRational>)], order: usize) -> Result<SuiteReport> {
    use num_traits::{One, Zero};
    let mut tally = Tally::new("annihilation", 0.0);
    for (alpha, beta) in sets {
        let mut series = Vec::new();
        if beta.iter().any(One::is_one) {
            series.push(("F".to_string(), f_series(alpha, beta, order)?));
        }
        for j in 0..beta.len() {
            match shifted_solution(alpha, beta, j, order) {
                Ok(s) => series.push((format!("F_{}", j + 1), s)),
                Err(crate::HgmError::PoleInCoefficient { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        for (label, s) in series {
            let out = apply_d(alpha, beta, &s);
            let bad = out.coeffs.iter().filter(|c| !c.is_zero()).count();
            tally.record(bad as f64, bad == 0, || {
                let show = |v: &[BigRational]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
                format!("alpha=({}) beta=({}) {label}", show(alpha), show(beta))
            });
        }
    }
    Ok(tally.finish())
}

// ---------------------------------------------------------------------------

/// Names of all suites, in run order.
pub const SUITE_NAMES: &[&str] = &[
    "gauss-sum-basics",
    "gauss-ratio-jacobi",
    "gauss-ratio-branches",
    "jacobi-degenerate",
    "jacobi-opposite",
    "jacobi-mobius",
    "h-shift-literal",
    "h-shift-twisted",
    "h-galois",
    "h-field-of-definition",
    "h-generator-independence",
    "nondegenerate-count-literal",
    "nondegenerate-count",
    "primitive-decomposition",
    "stratum-decomposition-literal",
    "stratum-decomposition",
    "immersion-round-trip",
    "q-factor-a-literal",
    "q-factor-a",
    "q-factor-b-literal",
    "q-factor-b",
    "q-factor-c",
    "zeta-series",
    "annihilation",
];

/// Run the named suites (all when `filter` is empty) on the default grid of
/// fields F_q, q ≤ q_max.
pub fn run_default(q_max: u64, filter: &[String]) -> Result<Vec<SuiteReport>> {
    for f in filter {
        if !SUITE_NAMES.contains(&f.as_str()) {
            return Err(crate::HgmError::Invalid(format!("unknown suite {f:?}; known: {}", SUITE_NAMES.join(", "))));
        }
    }
    let wanted = |name: &str| filter.is_empty() || filter.iter().any(|f| f == name);
    let list = prime_powers_up_to(q_max);
    let fields = build_fields(&list)?;
    let small: Vec<FieldCtx> = build_fields(&list.iter().copied().filter(|&(p, r)| p.pow(r) <= 25).collect::<Vec<_>>())?;
    let specs = standard_specs();
    let mut out = Vec::new();
    let charsum: [(&str, fn(&[FieldCtx]) -> Result<SuiteReport>); 6] = [
        ("gauss-sum-basics", suite_gauss_basics),
        ("gauss-ratio-jacobi", suite_ratio_jacobi),
        ("gauss-ratio-branches", suite_ratio_branches),
        ("jacobi-degenerate", suite_jacobi_degenerate),
        ("jacobi-opposite", suite_jacobi_opposite),
        ("jacobi-mobius", suite_mobius),
    ];
    for (name, f) in charsum {
        if wanted(name) {
            out.push(f(&fields)?);
        }
    }
    if wanted("h-shift-literal") {
        out.push(suite_shift_literal(&fields, false)?);
    }
    if wanted("h-shift-twisted") {
        out.push(suite_shift_twisted(&fields, false)?);
    }
    if wanted("h-galois") {
        out.push(suite_galois(&fields, false)?);
    }
    if wanted("h-field-of-definition") {
        out.push(suite_field_of_definition(&fields, false)?);
    }
    if wanted("h-generator-independence") {
        out.push(suite_generator_independence(&fields)?);
    }
    let nd = nondegenerate_grid(&fields, 12);
    if wanted("nondegenerate-count-literal") {
        out.push(suite_nondegenerate_count("nondegenerate-count-literal", &nd, &fields, -1.0)?);
    }
    if wanted("nondegenerate-count") {
        out.push(suite_nondegenerate_count("nondegenerate-count", &nd, &fields, 1.0)?);
    }
    if wanted("primitive-decomposition") {
        out.push(suite_primitive_decomposition(&small, &specs, 4)?);
    }
    if wanted("stratum-decomposition-literal") {
        out.push(suite_stratum_decomposition(&small, &specs, 4, true)?);
    }
    if wanted("stratum-decomposition") {
        out.push(suite_stratum_decomposition(&small, &specs, 4, false)?);
    }
    if wanted("immersion-round-trip") {
        out.push(suite_immersion_round_trip(&small, &specs, 4)?);
    }
    let qforms = [QForm::HypergeometricNegated, QForm::Hypergeometric, QForm::IsotypicVariant, QForm::Isotypic, QForm::Zero];
    if qforms.iter().any(|f| wanted(f.suite_name())) {
        let inst = q_instances(&fields, &specs, 4)?;
        for form in qforms {
            if wanted(form.suite_name()) {
                out.push(suite_q_factor(&fields, &inst, form)?);
            }
        }
    }
    if wanted("zeta-series") {
        let items = default_zeta_items();
        out.push(suite_zeta_series(&items, 3)?);
    }
    if wanted("annihilation") {
        out.push(suite_annihilation(&annihilation_params(), crate::series::DEFAULT_ORDER)?);
    }
    Ok(out)
}

/// Small (spec, p, t) cases for the zeta-series suite.
pub fn default_zeta_items() -> Vec<(CoverSpec, u64, Ratio<i64>)> {
    let specs = standard_specs();
    let t = Ratio::from_integer(2);
    let mut items = Vec::new();
    for (i, p) in [(0usize, 5u64), (0, 7), (0, 13), (1, 5), (3, 7), (4, 7), (6, 5), (8, 5), (9, 5)] {
        items.push((specs[i].clone(), p, t));
    }
    items
}
