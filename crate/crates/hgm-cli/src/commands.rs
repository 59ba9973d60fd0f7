use std::time::Instant;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use serde::Serialize;
use serde_json::{json, Map, Value};

use hgm_core::arith;
use hgm_core::charsums::{gauss_sum, jacobi_sum, ParamPoint};
use hgm_core::family::{compute_mi, count_stratum, count_x, count_x_direct, count_y, CoverSpec, StratumIndex};
use hgm_core::ffield::{build_field, FieldCtx, FqElem};
use hgm_core::hgm_sums::{classify, g_normalizer, h_sum, HgmParams};
use hgm_core::verify;
use hgm_core::zeta::{local_zeta, q_factor, q_factor_oracle};
use hgm_core::HgmError;

use crate::args::{Cli, Command, Common, TValue};

#[derive(Debug, Serialize)]
pub struct Record {
    pub command: String,
    pub inputs: Value,
    pub outputs: Value,
    pub residuals: Value,
    pub timing: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
}

#[derive(Debug, Serialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
}

impl Record {
    pub fn error_message(&self) -> Option<String> {
        self.error.as_ref().map(|e| format!("{}: {}", e.kind, e.message))
    }
}

pub struct CommandError {
    pub record: Record,
    pub code: u8,
}

/// Exit status for a library error: 3 for verification failures, 2 otherwise.
fn exit_code(e: &HgmError) -> u8 {
    match e {
        HgmError::SeriesMismatch { .. } | HgmError::Verification(_) => 3,
        _ => 2,
    }
}

fn error_kind(e: &HgmError) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

fn name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Count(_) => "count",
        Command::Hsum(_) => "hsum",
        Command::Gauss(_) => "gauss",
        Command::Jacobi(_) => "jacobi",
        Command::Zeta(_) => "zeta",
        Command::Verify(_) => "verify",
        Command::SeriesCheck(_) => "series-check",
    }
}

fn inputs(c: &Common) -> Value {
    let mut m = Map::new();
    let rats = |v: &Vec<crate::args::Rational>| Value::from(v.iter().map(|r| r.0.to_string()).collect::<Vec<_>>());
    if let Some(a) = &c.a {
        m.insert("a".into(), json!(a));
    }
    if let Some(b) = &c.b {
        m.insert("b".into(), json!(b));
    }
    if let Some(x) = c.m {
        m.insert("m".into(), json!(x));
    }
    if let Some(x) = &c.alpha {
        m.insert("alpha".into(), rats(x));
    }
    if let Some(x) = &c.beta {
        m.insert("beta".into(), rats(x));
    }
    if let Some(x) = c.p {
        m.insert("p".into(), json!(x));
        m.insert("r".into(), json!(c.r));
    }
    if let Some(x) = c.q_max {
        m.insert("q_max".into(), json!(x));
    }
    if let Some(t) = &c.t {
        m.insert("t".into(), json!(t.describe()));
    }
    m.insert("precision_bits".into(), json!(c.precision_bits));
    if let Some(x) = c.series_order {
        m.insert("series_order".into(), json!(x));
    }
    if let Some(x) = &c.suite {
        m.insert("suite".into(), json!(x));
    }
    Value::Object(m)
}

struct Ctx<'a> {
    command: &'static str,
    common: &'a Common,
    start: Instant,
}

impl Ctx<'_> {
    fn record(&self, outputs: Value, residuals: Value) -> Record {
        Record {
            command: self.command.into(),
            inputs: inputs(self.common),
            outputs,
            residuals,
            timing: self.timing(),
            error: None,
        }
    }

    fn timing(&self) -> Option<f64> {
        self.common.timing.then(|| self.start.elapsed().as_secs_f64() * 1e3)
    }

    fn fail(&self, e: HgmError) -> CommandError {
        CommandError {
            code: exit_code(&e),
            record: Record {
                command: self.command.into(),
                inputs: inputs(self.common),
                outputs: Value::Null,
                residuals: Value::Null,
                timing: self.timing(),
                error: Some(ErrorInfo { kind: error_kind(&e), message: e.to_string() }),
            },
        }
    }

    fn invalid(&self, msg: impl Into<String>) -> CommandError {
        self.fail(HgmError::Invalid(msg.into()))
    }
}

type Outcome = Result<(Vec<Record>, bool), CommandError>;

/// Run the command. Ok carries the records and whether every check passed.
pub fn run(cli: &Cli) -> Outcome {
    let common = cli.common();
    let cx = Ctx { command: name(&cli.command), common, start: Instant::now() };
    if common.precision_bits != 53 {
        return Err(cx.invalid(format!(
            "precision-bits {} is not supported; values carry f64 precision with tracked error bounds (use 53)",
            common.precision_bits
        )));
    }
    match &cli.command {
        Command::Count(_) => cmd_count(&cx),
        Command::Hsum(_) => cmd_hsum(&cx),
        Command::Gauss(_) => cmd_gauss(&cx),
        Command::Jacobi(_) => cmd_jacobi(&cx),
        Command::Zeta(_) => cmd_zeta(&cx),
        Command::Verify(_) => cmd_verify(&cx),
        Command::SeriesCheck(_) => cmd_series_check(&cx),
    }
}

// ---------------------------------------------------------------------------
// Argument helpers

/// The requested fields. With --q-max the list is filtered by `keep`, since a
/// range naturally contains fields where the inputs are undefined.
fn fields(cx: &Ctx, keep: impl Fn(&FieldCtx) -> bool) -> Result<Vec<FieldCtx>, CommandError> {
    let c = cx.common;
    if let Some(p) = c.p {
        return Ok(vec![build_field(p, c.r).map_err(|e| cx.fail(e))?]);
    }
    let Some(q_max) = c.q_max else {
        return Err(cx.invalid("one of --p or --q-max is required"));
    };
    let list = verify::prime_powers_up_to(q_max);
    let all = verify::build_fields(&list).map_err(|e| cx.fail(e))?;
    Ok(all.into_iter().filter(|f| keep(f)).collect())
}

fn reduce_t(ctx: &FieldCtx, t: &TValue) -> Result<FqElem, HgmError> {
    match t {
        TValue::Rational(r) => ctx.from_ratio(*r.numer(), *r.denom()).ok_or_else(|| HgmError::BadPrime {
            p: ctx.p() as u64,
            reason: format!("p divides the denominator of t = {r}"),
        }),
        TValue::Element(c) => ctx.from_coeffs(c),
    }
}

fn t_reducible(ctx: &FieldCtx, t: &TValue) -> bool {
    matches!(reduce_t(ctx, t), Ok(x) if x != FqElem::ZERO && x != FqElem::ONE)
}

fn need_t<'a>(cx: &Ctx<'a>) -> Result<&'a TValue, CommandError> {
    cx.common.t.as_ref().ok_or_else(|| cx.invalid("--t is required"))
}

fn cover_spec(cx: &Ctx) -> Result<CoverSpec, CommandError> {
    let c = cx.common;
    match (&c.a, &c.b, c.m) {
        (Some(a), Some(b), Some(m)) => CoverSpec::new(a.clone(), b.clone(), m).map_err(|e| cx.fail(e)),
        _ => Err(cx.invalid("--a, --b and --m are required")),
    }
}

fn params(cx: &Ctx) -> Result<HgmParams, CommandError> {
    let c = cx.common;
    let (Some(a), Some(b)) = (&c.alpha, &c.beta) else {
        return Err(cx.invalid("--alpha and --beta are required"));
    };
    let conv = |v: &[crate::args::Rational]| v.iter().map(|r| ParamPoint::from_ratio(r.0)).collect();
    HgmParams::new(conv(a), conv(b)).map_err(|e| cx.fail(e))
}

fn field_info(ctx: &FieldCtx) -> Value {
    json!({ "p": ctx.p(), "r": ctx.r(), "q": ctx.q(), "modulus": ctx.modulus_poly(), "generator": ctx.coeffs(ctx.generator()) })
}

fn divides_units(ctx: &FieldCtx, m: u64) -> bool {
    ctx.q_units() as u64 % m == 0
}

// ---------------------------------------------------------------------------
// Commands

fn cmd_count(cx: &Ctx) -> Outcome {
    let spec = cover_spec(cx)?;
    let t = need_t(cx)?;
    let fields = fields(cx, |f| spec.m % f.p() as u64 != 0 && t_reducible(f, t))?;
    let mut records = Vec::new();
    let mut all_ok = true;
    for ctx in &fields {
        let tq = reduce_t(ctx, t).map_err(|e| cx.fail(e))?;
        let run = || -> Result<(Value, Value, bool), HgmError> {
            let cy = count_y(ctx, &spec, tq)?;
            let mut strata = Vec::new();
            for i_set in StratumIndex::all(spec.n()) {
                strata.push(json!({
                    "I": i_set,
                    "m_I": compute_mi(&spec, i_set),
                    "count": count_stratum(ctx, &spec, i_set, tq)?,
                }));
            }
            let cx_strat = count_x(ctx, &spec, tq)?;
            let cx_direct = count_x_direct(ctx, &spec, tq)?;
            let mq = arith::gcd(spec.m, ctx.q_units() as u64);
            let mut pieces = Vec::new();
            let mut total = 0i64;
            let mut worst_piece = 0f64;
            for d in arith::divisors(mq) {
                let qf = q_factor(ctx, &spec, d, tq)?;
                let oracle = q_factor_oracle(ctx, &spec, d, tq)?;
                worst_piece = worst_piece.max(qf.value.dist(oracle));
                let snapped = qf.value.snap()?;
                total += snapped;
                pieces.push(json!({
                    "d": d,
                    "case": qf.formula_case,
                    "degeneracy": qf.kind,
                    "value": qf.value,
                    "snapped": snapped,
                }));
            }
            let diff_direct = (cx_strat as i64 - cx_direct as i64).abs();
            let diff_sum = (total - cx_strat as i64).abs();
            let ok = diff_direct == 0 && diff_sum == 0 && worst_piece < 1e-6;
            Ok((
                json!({
                    "field": field_info(ctx),
                    "t": ctx.coeffs(tq),
                    "count_Y": cy,
                    "strata": strata,
                    "count_X": cx_strat,
                    "count_X_direct": cx_direct,
                    "q_factors": pieces,
                }),
                json!({
                    "count_X_stratified_vs_direct": diff_direct,
                    "q_factor_sum_vs_count_X": diff_sum,
                    "q_factor_closed_form_vs_enumeration": worst_piece,
                }),
                ok,
            ))
        };
        let (outputs, residuals, ok) = run().map_err(|e| cx.fail(e))?;
        all_ok &= ok;
        records.push(cx.record(outputs, residuals));
    }
    Ok((records, all_ok))
}

fn cmd_hsum(cx: &Ctx) -> Outcome {
    let params = params(cx)?;
    let t = need_t(cx)?;
    let m = params.m();
    let fields = fields(cx, |f| divides_units(f, m) && matches!(reduce_t(f, t), Ok(x) if x != FqElem::ZERO))?;
    let mut records = Vec::new();
    for ctx in &fields {
        let run = || -> Result<Record, HgmError> {
            let tq = reduce_t(ctx, t)?;
            let h = h_sum(ctx, &params, tq)?;
            let g = g_normalizer(ctx, &params)?;
            Ok(cx.record(
                json!({
                    "field": field_info(ctx),
                    "params": params.to_string(),
                    "classification": classify(&params),
                    "t": ctx.coeffs(tq),
                    "h": h,
                    "h_snapped": h.snap().ok(),
                    "normalizer": g,
                }),
                json!({ "h_error_bound": h.err, "h_snap_residual": h.snap_residual() }),
            ))
        };
        records.push(run().map_err(|e| cx.fail(e))?);
    }
    Ok((records, true))
}

fn param_list(cx: &Ctx, which: &Option<Vec<crate::args::Rational>>, flag: &str) -> Result<Vec<ParamPoint>, CommandError> {
    which
        .as_ref()
        .map(|v| v.iter().map(|r| ParamPoint::from_ratio(r.0)).collect())
        .ok_or_else(|| cx.invalid(format!("--{flag} is required")))
}

fn lcm_of(points: &[ParamPoint]) -> u64 {
    points.iter().fold(1u64, |acc, p| arith::lcm(acc, p.den() as u64))
}

fn cmd_gauss(cx: &Ctx) -> Outcome {
    let alphas = param_list(cx, &cx.common.alpha, "alpha")?;
    let m = lcm_of(&alphas);
    let fields = fields(cx, |f| divides_units(f, m))?;
    let mut records = Vec::new();
    for ctx in &fields {
        let mut values = Vec::new();
        let mut worst = 0f64;
        for &a in &alphas {
            let g = gauss_sum(ctx, a).map_err(|e| cx.fail(e))?;
            if !a.is_integral() {
                worst = worst.max((g.abs() * g.abs() - ctx.q() as f64).abs());
            }
            values.push(json!({ "alpha": a, "g": g }));
        }
        records.push(cx.record(
            json!({ "field": field_info(ctx), "values": values }),
            json!({ "abs_squared_minus_q": worst }),
        ));
    }
    Ok((records, true))
}

fn cmd_jacobi(cx: &Ctx) -> Outcome {
    let alphas = param_list(cx, &cx.common.alpha, "alpha")?;
    let betas = param_list(cx, &cx.common.beta, "beta")?;
    if alphas.len() != betas.len() {
        return Err(cx.invalid("--alpha and --beta must have the same length"));
    }
    let m = arith::lcm(lcm_of(&alphas), lcm_of(&betas));
    let fields = fields(cx, |f| divides_units(f, m))?;
    let mut records = Vec::new();
    for ctx in &fields {
        let mut values = Vec::new();
        for (&a, &b) in alphas.iter().zip(&betas) {
            let j = jacobi_sum(ctx, a, b).map_err(|e| cx.fail(e))?;
            values.push(json!({ "alpha": a, "beta": b, "j": j }));
        }
        records.push(cx.record(json!({ "field": field_info(ctx), "values": values }), Value::Null));
    }
    Ok((records, true))
}

fn cmd_zeta(cx: &Ctx) -> Outcome {
    let spec = cover_spec(cx)?;
    let t = match need_t(cx)? {
        TValue::Rational(r) => *r,
        TValue::Element(_) => return Err(cx.invalid("zeta needs a rational --t")),
    };
    let p = cx.common.p.ok_or_else(|| cx.invalid("--p is required"))?;
    if cx.common.r != 1 {
        return Err(cx.invalid("zeta works over the prime field; omit --r"));
    }
    let order = cx.common.series_order.unwrap_or(4);
    let z = local_zeta(p, &spec, t, order).map_err(|e| cx.fail(e))?;
    let residual = z.residuals.iter().copied().fold(0.0, f64::max);
    let ok = z.series_check;
    let outputs = serde_json::to_value(&z).expect("serializable");
    Ok((vec![cx.record(outputs, json!({ "series_max_abs_difference": residual }))], ok))
}

fn cmd_verify(cx: &Ctx) -> Outcome {
    let q_max = cx.common.q_max.unwrap_or(50);
    let filter = cx.common.suite.clone().unwrap_or_default();
    let reports = verify::run_default(q_max, &filter).map_err(|e| cx.fail(e))?;
    let ok = reports.iter().all(|r| r.passed);
    let records = reports
        .into_iter()
        .map(|r| {
            let residuals = json!({ "worst": r.worst_residual, "tolerance": r.tolerance });
            cx.record(serde_json::to_value(&r).expect("serializable"), residuals)
        })
        .collect();
    Ok((records, ok))
}

fn cmd_series_check(cx: &Ctx) -> Outcome {
    let c = cx.common;
    let (Some(a), Some(b)) = (&c.alpha, &c.beta) else {
        return Err(cx.invalid("--alpha and --beta are required"));
    };
    if a.len() != b.len() {
        return Err(cx.invalid("--alpha and --beta must have the same length"));
    }
    let big = |r: &Ratio<i64>| BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()));
    let alpha: Vec<BigRational> = a.iter().map(|r| big(&r.0)).collect();
    let beta: Vec<BigRational> = b.iter().map(|r| big(&r.0)).collect();
    let order = c.series_order.unwrap_or(hgm_core::series::DEFAULT_ORDER);
    let report = verify::suite_annihilation(&[(alpha, beta)], order).map_err(|e| cx.fail(e))?;
    let ok = report.passed;
    let residuals = json!({ "nonzero_coefficients": report.worst_residual });
    Ok((vec![cx.record(serde_json::to_value(&report).expect("serializable"), residuals)], ok))
}
