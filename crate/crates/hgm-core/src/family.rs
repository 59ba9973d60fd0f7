//! The family Y: y^m = Π(-x_i)^{a_i}(1-x_i)^{b_i-a_i} over the slice
//! t·x_1⋯x_n = 1, its partial compactification X, and the character-sum
//! pieces of their point counts.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::arith;
use crate::charsums::AlgValue;
use crate::error::{HgmError, Result};
use crate::ffield::{FieldCtx, FqElem};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CoverSpec {
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    pub m: u64,
}

impl CoverSpec {
    /// Validate and normalize. Entries with a_i < 0 or b_i < a_i are moved into
    /// range modulo m (logged); entries already in range are kept verbatim.
    pub fn new(a: Vec<i64>, b: Vec<i64>, m: u64) -> Result<Self> {
        if m == 0 {
            return Err(HgmError::Invalid("m must be positive".into()));
        }
        if a.is_empty() || a.len() != b.len() {
            return Err(HgmError::Invalid(format!(
                "need equally many a and b entries (got {} and {})",
                a.len(),
                b.len()
            )));
        }
        if a.len() > 16 {
            return Err(HgmError::Invalid("at most 16 coordinates are supported".into()));
        }
        let mi = m as i64;
        let mut a = a;
        let mut b = b;
        for i in 0..a.len() {
            if a[i] < 0 {
                let na = a[i].rem_euclid(mi);
                log::warn!("a[{i}] = {} reduced to {na} modulo {m}", a[i]);
                b[i] += na - a[i];
                a[i] = na;
            }
            if b[i] < a[i] {
                let nb = a[i] + (b[i] - a[i]).rem_euclid(mi);
                log::warn!("b[{i}] = {} lifted to {nb} so that b - a >= 0", b[i]);
                b[i] = nb;
            }
        }
        Ok(CoverSpec { a, b, m })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    /// b_i - a_i.
    pub fn ba(&self, i: usize) -> i64 {
        self.b[i] - self.a[i]
    }
}

/// A subset of coordinate indices (0-based), stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StratumIndex(pub u32);

impl StratumIndex {
    pub fn full(n: usize) -> Self {
        StratumIndex(((1u64 << n) - 1) as u32)
    }

    pub fn from_indices(idx: &[usize]) -> Self {
        StratumIndex(idx.iter().fold(0, |acc, &i| acc | (1 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: StratumIndex) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn members(self) -> Vec<usize> {
        (0..32).filter(|&i| self.contains(i)).collect()
    }

    /// All subsets of {0, …, n-1}.
    pub fn all(n: usize) -> impl Iterator<Item = StratumIndex> {
        (0..1u32 << n).map(StratumIndex)
    }
}

impl fmt::Display for StratumIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members().iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Serialize for StratumIndex {
    /// Serialized as the 1-based member list.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<usize> = self.members().iter().map(|i| i + 1).collect();
        v.serialize(s)
    }
}

/// Visit every x ∈ S^k with t·x_1⋯x_k = 1, where S = F_q^× (`allow_one`) or
/// F_q ∖ {0, 1}. The last coordinate is solved for.
pub fn for_each_slice_point<F: FnMut(&[FqElem])>(
    ctx: &FieldCtx,
    k: usize,
    t: FqElem,
    allow_one: bool,
    mut f: F,
) {
    if t == FqElem::ZERO {
        return;
    }
    if k == 0 {
        if t == FqElem::ONE {
            f(&[]);
        }
        return;
    }
    let mut x = vec![FqElem::ZERO; k];
    slice_rec(ctx, &mut x, 0, t, allow_one, &mut f);
}

fn slice_rec<F: FnMut(&[FqElem])>(
    ctx: &FieldCtx,
    x: &mut Vec<FqElem>,
    pos: usize,
    prod: FqElem,
    allow_one: bool,
    f: &mut F,
) {
    let k = x.len();
    if pos == k - 1 {
        let last = ctx.inv(prod);
        if allow_one || last != FqElem::ONE {
            x[pos] = last;
            f(x);
        }
        return;
    }
    for v in ctx.nonzero_elements() {
        if !allow_one && v == FqElem::ONE {
            continue;
        }
        x[pos] = v;
        slice_rec(ctx, x, pos + 1, ctx.mul(prod, v), allow_one, f);
    }
}

fn check_t(ctx: &FieldCtx, spec: &CoverSpec, t: FqElem) -> Result<()> {
    if t == FqElem::ZERO || t == FqElem::ONE {
        return Err(HgmError::BadT);
    }
    if arith::gcd(spec.m, ctx.q() as u64) != 1 {
        return Err(HgmError::BadCharacteristic { m: spec.m, q: ctx.q() as u64 });
    }
    Ok(())
}

fn check_divisor(ctx: &FieldCtx, spec: &CoverSpec, d: u64) -> Result<()> {
    let mq = arith::gcd(spec.m, ctx.q_units() as u64);
    if d == 0 || mq % d != 0 {
        return Err(HgmError::NotDivisor { d, n: mq });
    }
    Ok(())
}

/// f_{a,b}(x) = Π_i (-x_i)^{a_i}(1-x_i)^{b_i-a_i}, with 0^0 = 1.
pub fn eval_f(ctx: &FieldCtx, spec: &CoverSpec, x: &[FqElem]) -> FqElem {
    x.iter().enumerate().fold(FqElem::ONE, |acc, (i, &xi)| {
        let u = ctx.pow(ctx.neg(xi), spec.a[i]);
        let v = ctx.pow(ctx.one_minus(xi), spec.ba(i));
        ctx.mul(acc, ctx.mul(u, v))
    })
}

/// f_e(x) = Π_{gcd(m,a_i)=e} (-x_i)^{a_i/e} · Π_{gcd(m,b_i-a_i)=e} (1-x_i)^{(b_i-a_i)/e}.
pub fn eval_f_e(ctx: &FieldCtx, spec: &CoverSpec, e: u64, x: &[FqElem]) -> FqElem {
    let mut acc = FqElem::ONE;
    for (i, &xi) in x.iter().enumerate() {
        if arith::gcd(spec.m, spec.a[i] as u64) == e {
            acc = ctx.mul(acc, ctx.pow(ctx.neg(xi), spec.a[i] / e as i64));
        }
        if arith::gcd(spec.m, spec.ba(i) as u64) == e {
            acc = ctx.mul(acc, ctx.pow(ctx.one_minus(xi), spec.ba(i) / e as i64));
        }
    }
    acc
}

/// Number of y ∈ F_q with y^k = v.
fn count_roots(ctx: &FieldCtx, k: u64, v: FqElem) -> u64 {
    if v == FqElem::ZERO {
        return 1;
    }
    let g = arith::gcd(k, ctx.q_units() as u64);
    if ctx.dlog_unchecked(v) as u64 % g == 0 {
        g
    } else {
        0
    }
}

/// All y ∈ F_q with y^k = v.
fn roots(ctx: &FieldCtx, k: u64, v: FqElem) -> Vec<FqElem> {
    if v == FqElem::ZERO {
        return vec![FqElem::ZERO];
    }
    let n = ctx.q_units() as u64;
    let g = arith::gcd(k, n);
    let l = ctx.dlog_unchecked(v) as u64;
    if l % g != 0 {
        return Vec::new();
    }
    let step = n / g;
    let inv = arith::inv_mod(((k / g) % step) as i64, step as i64).unwrap_or(0) as u64;
    let base = (l / g) % step * inv % step.max(1);
    (0..g).map(|i| ctx.gen_pow((base + i * step) as i64)).collect()
}

/// #Y(F_q) by enumeration.
pub fn count_y(ctx: &FieldCtx, spec: &CoverSpec, t: FqElem) -> Result<u64> {
    check_t(ctx, spec, t)?;
    let mut total = 0;
    for_each_slice_point(ctx, spec.n(), t, false, |x| {
        total += count_roots(ctx, spec.m, eval_f(ctx, spec, x));
    });
    Ok(total)
}

/// I_d = {i : d ∤ b_i - a_i}.
pub fn compute_id(spec: &CoverSpec, d: u64) -> Result<StratumIndex> {
    if d == 0 || spec.m % d != 0 {
        return Err(HgmError::NotDivisor { d, n: spec.m });
    }
    Ok(StratumIndex(
        (0..spec.n())
            .filter(|&i| spec.ba(i) % d as i64 != 0)
            .fold(0, |acc, i| acc | 1 << i),
    ))
}

/// m_I = gcd({b_i - a_i : i ∉ I} ∪ {m}).
pub fn compute_mi(spec: &CoverSpec, i_set: StratumIndex) -> u64 {
    (0..spec.n())
        .filter(|&i| !i_set.contains(i))
        .fold(spec.m, |g, i| arith::gcd(g, spec.ba(i) as u64))
}

/// The equation data of the stratum: sign (-1)^{Σ_{i∉I} a_i} and the
/// restricted f evaluated on the I-coordinates.
fn stratum_value(ctx: &FieldCtx, spec: &CoverSpec, members: &[usize], sign: FqElem, x: &[FqElem]) -> FqElem {
    members.iter().zip(x).fold(sign, |acc, (&i, &xi)| {
        let u = ctx.pow(ctx.neg(xi), spec.a[i]);
        let v = ctx.pow(ctx.one_minus(xi), spec.ba(i));
        ctx.mul(acc, ctx.mul(u, v))
    })
}

fn complement_a_sum(spec: &CoverSpec, i_set: StratumIndex) -> i64 {
    (0..spec.n()).filter(|&i| !i_set.contains(i)).map(|i| spec.a[i]).sum()
}

/// #Y'_I(F_q): y^{m_I} = (-1)^{Σ_{i∉I} a_i} Π_{i∈I}(-x_i)^{a_i}(1-x_i)^{b_i-a_i}
/// with t·Π_{i∈I} x_i = 1 and x_i ∉ {0, 1}.
pub fn count_stratum(ctx: &FieldCtx, spec: &CoverSpec, i_set: StratumIndex, t: FqElem) -> Result<u64> {
    check_t(ctx, spec, t)?;
    let mi = compute_mi(spec, i_set);
    let members = i_set.members();
    let sign = ctx.pow(ctx.neg(FqElem::ONE), complement_a_sum(spec, i_set));
    let mut total = 0;
    for_each_slice_point(ctx, members.len(), t, false, |x| {
        total += count_roots(ctx, mi, stratum_value(ctx, spec, &members, sign, x));
    });
    Ok(total)
}

/// #X(F_q) as the sum over all strata.
pub fn count_x(ctx: &FieldCtx, spec: &CoverSpec, t: FqElem) -> Result<u64> {
    StratumIndex::all(spec.n()).map(|i| count_stratum(ctx, spec, i, t)).sum()
}

/// #X(F_q) by direct enumeration of the compactification equations
/// y_d^{d/h} = y_h Π_{e|m, h|e, d∤e} f_e^{e/h} for all h | d | m, y_1 = 1,
/// over x ∈ (F_q^×)^n with t·x_1⋯x_n = 1.
pub fn count_x_direct(ctx: &FieldCtx, spec: &CoverSpec, t: FqElem) -> Result<u64> {
    check_t(ctx, spec, t)?;
    let divs = arith::divisors(spec.m);
    let mut total = 0u64;
    for_each_slice_point(ctx, spec.n(), t, true, |x| {
        let fe: BTreeMap<u64, FqElem> = divs.iter().map(|&e| (e, eval_f_e(ctx, spec, e, x))).collect();
        let mut ys: BTreeMap<u64, FqElem> = BTreeMap::new();
        ys.insert(1, FqElem::ONE);
        total += x_solutions(ctx, &divs, &fe, 1, &mut ys);
    });
    Ok(total)
}

/// Right side y_h · Π_{e|m, h|e, d∤e} f_e^{e/h}.
fn x_rhs(ctx: &FieldCtx, divs: &[u64], fe: &BTreeMap<u64, FqElem>, h: u64, d: u64, yh: FqElem) -> FqElem {
    divs.iter()
        .filter(|&&e| e % h == 0 && e % d != 0)
        .fold(yh, |acc, &e| ctx.mul(acc, ctx.pow(fe[&e], (e / h) as i64)))
}

fn x_solutions(
    ctx: &FieldCtx,
    divs: &[u64],
    fe: &BTreeMap<u64, FqElem>,
    idx: usize,
    ys: &mut BTreeMap<u64, FqElem>,
) -> u64 {
    if idx == divs.len() {
        return 1;
    }
    let d = divs[idx];
    let mut count = 0;
    for yd in roots(ctx, d, x_rhs(ctx, divs, fe, 1, d, FqElem::ONE)) {
        let consistent = divs[..idx].iter().filter(|&&h| d % h == 0 && h > 1).all(|&h| {
            ctx.pow(yd, (d / h) as i64) == x_rhs(ctx, divs, fe, h, d, ys[&h])
        });
        if consistent {
            ys.insert(d, yd);
            count += x_solutions(ctx, divs, fe, idx + 1, ys);
            ys.remove(&d);
        }
    }
    count
}

/// Whether (x, y_d) satisfies every compactification equation.
pub fn satisfies_x_equations(ctx: &FieldCtx, spec: &CoverSpec, x: &[FqElem], ys: &BTreeMap<u64, FqElem>) -> bool {
    let divs = arith::divisors(spec.m);
    let fe: BTreeMap<u64, FqElem> = divs.iter().map(|&e| (e, eval_f_e(ctx, spec, e, x))).collect();
    if ys.get(&1) != Some(&FqElem::ONE) {
        return false;
    }
    divs.iter().all(|&d| {
        divs.iter().filter(|&&h| d % h == 0).all(|&h| {
            ctx.pow(ys[&d], (d / h) as i64) == x_rhs(ctx, &divs, &fe, h, d, ys[&h])
        })
    })
}

/// Image of a point (x, y) of Y in X: y_d = y^{m/d} / Π_{d|e|m} f_e^{e/d}.
pub fn immersion_coordinates(
    ctx: &FieldCtx,
    spec: &CoverSpec,
    x: &[FqElem],
    y: FqElem,
) -> BTreeMap<u64, FqElem> {
    let divs = arith::divisors(spec.m);
    let fe: BTreeMap<u64, FqElem> = divs.iter().map(|&e| (e, eval_f_e(ctx, spec, e, x))).collect();
    divs.iter()
        .map(|&d| {
            let den = divs
                .iter()
                .filter(|&&e| e % d == 0)
                .fold(FqElem::ONE, |acc, &e| ctx.mul(acc, ctx.pow(fe[&e], (e / d) as i64)));
            (d, ctx.mul(ctx.pow(y, (spec.m / d) as i64), ctx.inv(den)))
        })
        .collect()
}

/// Inverse of the immersion on its image: y = y_m · f_m(x).
pub fn immersion_inverse(ctx: &FieldCtx, spec: &CoverSpec, x: &[FqElem], ys: &BTreeMap<u64, FqElem>) -> FqElem {
    ctx.mul(ys[&spec.m], eval_f_e(ctx, spec, spec.m, x))
}

/// Histogram of dlog(v) mod d over the points of a stratum, where v is the
/// stratum's right-hand side without the sign.
fn stratum_histogram(ctx: &FieldCtx, spec: &CoverSpec, i_set: StratumIndex, d: u64, t: FqElem) -> Vec<u64> {
    let members = i_set.members();
    let mut hist = vec![0u64; d as usize];
    for_each_slice_point(ctx, members.len(), t, false, |x| {
        let v = stratum_value(ctx, spec, &members, FqElem::ONE, x);
        hist[(ctx.dlog_unchecked(v) as u64 % d) as usize] += 1;
    });
    hist
}

/// Σ_{k∈(Z/d)^×} c_k Σ_j hist[j] ζ_d^{kj}, with c_k = ζ_d^{k·shift}.
fn character_histogram_sum(hist: &[u64], d: u64, shift: u64) -> AlgValue {
    let mut acc = AlgValue::ZERO;
    for k in arith::units_mod(d) {
        for (j, &h) in hist.iter().enumerate() {
            if h == 0 {
                continue;
            }
            let e = (k * (j as u64 + shift)) % d;
            acc += AlgValue::root_of_unity(e as i64, d).scale(h as f64);
        }
    }
    acc
}

fn ensure_snaps(v: AlgValue) -> Result<AlgValue> {
    v.snap()?;
    Ok(v)
}

/// P_d = Σ_{k∈(Z/d)^×} Σ_x ω^{k/d}(f(x)) over the points of the slice.
pub fn primitive_p(ctx: &FieldCtx, spec: &CoverSpec, d: u64, t: FqElem) -> Result<AlgValue> {
    check_t(ctx, spec, t)?;
    check_divisor(ctx, spec, d)?;
    let hist = stratum_histogram(ctx, spec, StratumIndex::full(spec.n()), d, t);
    ensure_snaps(character_histogram_sum(&hist, d, 0))
}

/// P'_{d,I} = Σ_{k∈(Z/d)^×} ω^{kΣ_{i∉I}a_i/d}(-1) Σ_{x_I} ω^{k/d}(f_{a_I,b_I}(x)).
pub fn twisted_p(ctx: &FieldCtx, spec: &CoverSpec, d: u64, i_set: StratumIndex, t: FqElem) -> Result<AlgValue> {
    check_t(ctx, spec, t)?;
    check_divisor(ctx, spec, d)?;
    let hist = stratum_histogram(ctx, spec, i_set, d, t);
    // ω^{kS/d}(-1) = ζ_d^{k·S·dlog(-1)}
    let l = ctx.dlog_unchecked(ctx.neg(FqElem::ONE)) as i128;
    let s = complement_a_sum(spec, i_set) as i128;
    let shift = (s * l).rem_euclid(d as i128) as u64;
    ensure_snaps(character_histogram_sum(&hist, d, shift))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::build_field;

    fn curve() -> CoverSpec {
        CoverSpec::new(vec![1, 0], vec![3, 2], 4).unwrap()
    }

    fn surface() -> CoverSpec {
        CoverSpec::new(vec![1, 3, 6], vec![3, 7, 18], 12).unwrap()
    }

    #[test]
    fn eval_f_examples() {
        let f = build_field(7, 1).unwrap();
        let spec = CoverSpec::new(vec![1], vec![3], 2).unwrap();
        for c in 0..7 {
            let x = FqElem(c);
            let expect = f.mul(f.neg(x), f.pow(f.one_minus(x), 2));
            assert_eq!(eval_f(&f, &spec, &[x]), expect);
        }
        let s = curve();
        assert_eq!(eval_f(&f, &s, &[FqElem(0), FqElem(3)]), FqElem::ZERO);
        let (x1, x2) = (FqElem(3), FqElem(5));
        let expect = f.mul(
            f.mul(f.neg(x1), f.pow(f.one_minus(x1), 2)),
            f.pow(f.one_minus(x2), 2),
        );
        assert_eq!(eval_f(&f, &s, &[x1, x2]), expect);
    }

    #[test]
    fn trivial_cover_counts() {
        let spec = CoverSpec::new(vec![0, 0], vec![0, 0], 1).unwrap();
        let f = build_field(5, 1).unwrap();
        assert_eq!(count_y(&f, &spec, FqElem(2)).unwrap(), 2);
        for (p, n) in [(7u64, 3usize), (11, 2), (5, 4)] {
            let f = build_field(p, 1).unwrap();
            let spec = CoverSpec::new(vec![0; n], vec![0; n], 1).unwrap();
            let q = p as i64;
            let expect = ((q - 2).pow(n as u32) - (-1i64).pow(n as u32)) / (q - 1);
            assert_eq!(count_y(&f, &spec, FqElem(3)).unwrap() as i64, expect);
        }
    }

    #[test]
    fn id_and_mi() {
        let s = surface();
        let id = |d| compute_id(&s, d).unwrap();
        assert_eq!(id(12), StratumIndex::from_indices(&[0, 1]));
        assert_eq!(id(6), StratumIndex::from_indices(&[0, 1]));
        assert_eq!(id(3), StratumIndex::from_indices(&[0, 1]));
        assert_eq!(id(4), StratumIndex::from_indices(&[0]));
        assert_eq!(id(2), StratumIndex(0));
        assert_eq!(id(1), StratumIndex(0));
        assert!(compute_id(&s, 5).is_err());
        let c = curve();
        assert_eq!(compute_id(&c, 4).unwrap(), StratumIndex::from_indices(&[0, 1]));
        assert_eq!(compute_id(&c, 2).unwrap(), StratumIndex(0));
        assert_eq!(compute_mi(&s, StratumIndex::full(3)), 12);
        assert_eq!(compute_mi(&s, StratumIndex::from_indices(&[1, 2])), 2);
    }

    #[test]
    fn curve_counts() {
        let f7 = build_field(7, 1).unwrap();
        for t in 2..7 {
            let t = FqElem(t);
            assert_eq!(count_x(&f7, &curve(), t).unwrap(), 6);
            assert_eq!(count_x_direct(&f7, &curve(), t).unwrap(), 6);
            assert!(count_y(&f7, &curve(), t).unwrap() <= 6);
        }
        let f5 = build_field(5, 1).unwrap();
        assert_eq!(count_x_direct(&f5, &curve(), FqElem(2)).unwrap(), 2);
    }

    #[test]
    fn surface_stratification_matches_direct() {
        let f13 = build_field(13, 1).unwrap();
        let t = FqElem(2);
        assert_eq!(count_x(&f13, &surface(), t).unwrap(), 184);
        assert_eq!(count_x_direct(&f13, &surface(), t).unwrap(), 184);
    }

    #[test]
    fn empty_stratum_is_empty_and_full_stratum_is_y() {
        let f13 = build_field(13, 1).unwrap();
        let s = surface();
        assert_eq!(count_stratum(&f13, &s, StratumIndex(0), FqElem(5)).unwrap(), 0);
        assert_eq!(
            count_stratum(&f13, &s, StratumIndex::full(3), FqElem(5)).unwrap(),
            count_y(&f13, &s, FqElem(5)).unwrap()
        );
    }

    #[test]
    fn primitive_decomposition() {
        let f13 = build_field(13, 1).unwrap();
        let s = surface();
        let t = FqElem(2);
        let y = count_y(&f13, &s, t).unwrap() as i64;
        let total: i64 = arith::divisors(12)
            .into_iter()
            .map(|d| primitive_p(&f13, &s, d, t).unwrap().snap().unwrap())
            .sum();
        assert_eq!(total, y);
        let p1 = primitive_p(&f13, &s, 1, t).unwrap().snap().unwrap();
        assert_eq!(p1, (11i64.pow(3) + 1) / 12);
        assert!(matches!(primitive_p(&f13, &s, 5, t), Err(HgmError::NotDivisor { .. })));
    }

    #[test]
    fn twisted_decomposition_per_stratum() {
        let f13 = build_field(13, 1).unwrap();
        let s = surface();
        let t = FqElem(2);
        for i_set in StratumIndex::all(3) {
            let mi = compute_mi(&s, i_set);
            let total: i64 = arith::divisors(arith::gcd(mi, 12))
                .into_iter()
                .map(|d| twisted_p(&f13, &s, d, i_set, t).unwrap().snap().unwrap())
                .sum();
            assert_eq!(total as u64, count_stratum(&f13, &s, i_set, t).unwrap(), "I = {i_set}");
        }
    }

    #[test]
    fn immersion_round_trip() {
        let f13 = build_field(13, 1).unwrap();
        let s = surface();
        let t = FqElem(2);
        let mut points = 0;
        let mut literal_failures = 0;
        for_each_slice_point(&f13, 3, t, false, |x| {
            for y in f13.elements() {
                if f13.pow(y, 12) != eval_f(&f13, &s, x) {
                    continue;
                }
                points += 1;
                let ys = immersion_coordinates(&f13, &s, x, y);
                assert!(satisfies_x_equations(&f13, &s, x, &ys));
                assert_eq!(immersion_inverse(&f13, &s, x, &ys), y);
                let f12 = eval_f_e(&f13, &s, 12, x);
                if f13.mul(ys[&12], f13.pow(f12, 12)) != y {
                    literal_failures += 1;
                }
            }
        });
        assert!(points > 0);
        // y_m · f_m^m is not an inverse here
        assert!(literal_failures > 0);
    }

    #[test]
    fn normalization_of_out_of_range_input() {
        let s = CoverSpec::new(vec![-1, 2], vec![1, 1], 4).unwrap();
        assert_eq!(s.a, vec![3, 2]);
        assert!(s.b.iter().zip(&s.a).all(|(b, a)| b >= a));
        assert_eq!(s.ba(0).rem_euclid(4), 2);
        assert_eq!(s.ba(1).rem_euclid(4), 3);
    }
}
