//! Finite fields F_q, q = p^r, with full discrete-log tables.
//!
//! Elements are stored as `u32` indices `Σ c_i p^i`, where `c_i` are the
//! coefficients of the residue modulo the defining polynomial. Prime-field
//! elements `c` therefore have index `c`, and `1` has index 1.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::charsums::GaussTable;
use crate::error::{HgmError, Result};

/// Largest field size for which dlog tables are built.
pub const MAX_FIELD_SIZE: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FqElem(pub u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    pub fn index(self) -> u32 {
        self.0
    }
}

pub struct FieldCtx {
    p: u32,
    r: u32,
    q: u32,
    modulus: Vec<u32>,
    gen: FqElem,
    exp: Vec<u32>,
    log: Vec<u32>,
    /// tr(t^i) for the power basis.
    trace_basis: Vec<u32>,
    gauss: OnceLock<GaussTable>,
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("r", &self.r)
            .field("modulus", &self.modulus)
            .field("gen", &self.gen)
            .finish()
    }
}

/// Build F_{p^r} with the canonical modulus and generator.
pub fn build_field(p: u64, r: u32) -> Result<FieldCtx> {
    FieldCtx::new(p, r, None)
}

/// Build F_{p^r} with the canonical modulus but a caller-chosen generator.
pub fn build_field_with_generator(p: u64, r: u32, gen: &[u32]) -> Result<FieldCtx> {
    FieldCtx::new(p, r, Some(gen))
}

pub fn dlog(ctx: &FieldCtx, x: FqElem) -> Result<u32> {
    ctx.dlog(x)
}

pub fn trace(ctx: &FieldCtx, x: FqElem) -> u32 {
    ctx.trace(x)
}

impl FieldCtx {
    fn new(p: u64, r: u32, gen: Option<&[u32]>) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(HgmError::NotPrime(p));
        }
        if r == 0 {
            return Err(HgmError::Invalid("extension degree must be positive".into()));
        }
        let q = match p.checked_pow(r) {
            Some(q) if q <= MAX_FIELD_SIZE => q,
            _ => return Err(HgmError::TooLarge { p, r, limit: MAX_FIELD_SIZE }),
        };
        let modulus = smallest_irreducible(p, r as usize);
        let pp = PolyRing { p, f: modulus.clone() };
        let q_minus_1 = q - 1;
        let factors = arith::prime_factors(q_minus_1);
        let is_primitive = |g: &[u64]| -> bool {
            factors.iter().all(|&l| !pp.is_one(&pp.pow(g, q_minus_1 / l)))
        };
        let gen_poly: Vec<u64> = match gen {
            Some(c) => {
                let mut g: Vec<u64> = c.iter().map(|&v| v as u64 % p).collect();
                g.resize(r as usize, 0);
                if g.iter().all(|&v| v == 0) || !is_primitive(&g) {
                    return Err(HgmError::NotGenerator(encode(&g, p)));
                }
                g
            }
            None => lex_elements(p, r as usize)
                .find(|g| g.iter().any(|&v| v != 0) && is_primitive(g))
                .expect("a finite field has a primitive element"),
        };

        let mut exp = Vec::with_capacity(q_minus_1 as usize);
        let mut log = vec![u32::MAX; q as usize];
        let mut cur = vec![0u64; r as usize];
        cur[0] = 1;
        for k in 0..q_minus_1 {
            let idx = encode(&cur, p);
            exp.push(idx);
            log[idx as usize] = k as u32;
            cur = pp.mul(&cur, &gen_poly);
        }

        let trace_basis = (0..r as usize)
            .map(|i| {
                let mut ti = vec![0u64; r as usize];
                ti[i] = 1;
                let mut acc = vec![0u64; r as usize];
                let mut conj = ti;
                for _ in 0..r {
                    acc = pp.add(&acc, &conj);
                    conj = pp.pow(&conj, p);
                }
                debug_assert!(acc[1..].iter().all(|&c| c == 0));
                acc[0] as u32
            })
            .collect();

        Ok(FieldCtx {
            p: p as u32,
            r,
            q: q as u32,
            modulus: modulus.iter().map(|&c| c as u32).collect(),
            gen: FqElem(encode(&gen_poly, p)),
            exp,
            log,
            trace_basis,
            gauss: OnceLock::new(),
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// q^× = q - 1.
    pub fn q_units(&self) -> u32 {
        self.q - 1
    }

    /// Defining polynomial, lowest degree first, monic of degree r.
    pub fn modulus_poly(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> FqElem {
        self.gen
    }

    pub(crate) fn gauss_cache(&self) -> &OnceLock<GaussTable> {
        &self.gauss
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.q).map(FqElem)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FqElem> {
        (1..self.q).map(FqElem)
    }

    pub fn dlog(&self, x: FqElem) -> Result<u32> {
        if x.0 == 0 {
            return Err(HgmError::ZeroElement);
        }
        Ok(self.log[x.0 as usize])
    }

    /// dlog for an element already known to be nonzero.
    #[inline]
    pub fn dlog_unchecked(&self, x: FqElem) -> u32 {
        self.log[x.0 as usize]
    }

    /// gen^k for any integer k.
    #[inline]
    pub fn gen_pow(&self, k: i64) -> FqElem {
        FqElem(self.exp[k.rem_euclid(self.q as i64 - 1) as usize])
    }

    pub fn trace(&self, x: FqElem) -> u32 {
        if self.r == 1 {
            return x.0;
        }
        let p = self.p as u64;
        let mut v = x.0 as u64;
        let mut acc = 0u64;
        for &t in &self.trace_basis {
            acc += (v % p) * t as u64;
            v /= p;
        }
        (acc % p) as u32
    }

    pub fn coeffs(&self, x: FqElem) -> Vec<u32> {
        let mut v = x.0;
        (0..self.r)
            .map(|_| {
                let c = v % self.p;
                v /= self.p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<FqElem> {
        if c.len() > self.r as usize {
            return Err(HgmError::Invalid(format!(
                "{} coefficients for a degree-{} field",
                c.len(),
                self.r
            )));
        }
        let mut idx = 0u32;
        for &ci in c.iter().rev() {
            idx = idx * self.p + ci % self.p;
        }
        Ok(FqElem(idx))
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.p as i64) as u32)
    }

    /// Image of num/den in the prime field; `None` if p divides den.
    pub fn from_ratio(&self, num: i64, den: i64) -> Option<FqElem> {
        let d = self.from_int(den);
        if d.0 == 0 {
            return None;
        }
        Some(self.mul(self.from_int(num), self.inv(d)))
    }

    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        if self.r == 1 {
            let s = a.0 + b.0;
            return FqElem(if s >= self.p { s - self.p } else { s });
        }
        self.digitwise(a, b, |x, y, p| (x + y) % p)
    }

    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        if self.r == 1 {
            return FqElem(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + self.p - b.0 });
        }
        self.digitwise(a, b, |x, y, p| (x + p - y) % p)
    }

    pub fn neg(&self, a: FqElem) -> FqElem {
        self.sub(FqElem::ZERO, a)
    }

    #[inline]
    fn digitwise(&self, a: FqElem, b: FqElem, op: impl Fn(u32, u32, u32) -> u32) -> FqElem {
        let (mut x, mut y) = (a.0, b.0);
        let mut res = 0u32;
        let mut place = 1u32;
        for _ in 0..self.r {
            res += op(x % self.p, y % self.p, self.p) * place;
            x /= self.p;
            y /= self.p;
            place = place.wrapping_mul(self.p);
        }
        FqElem(res)
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.0 == 0 || b.0 == 0 {
            return FqElem::ZERO;
        }
        let s = self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64;
        FqElem(self.exp[(s % (self.q as u64 - 1)) as usize])
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: FqElem) -> FqElem {
        assert!(a.0 != 0, "inverse of zero");
        self.gen_pow(-(self.log[a.0 as usize] as i64))
    }

    /// a^e with the convention 0^0 = 1; panics for 0^e with e < 0.
    pub fn pow(&self, a: FqElem, e: i64) -> FqElem {
        if e == 0 {
            return FqElem::ONE;
        }
        if a.0 == 0 {
            assert!(e > 0, "negative power of zero");
            return FqElem::ZERO;
        }
        let l = self.log[a.0 as usize] as i128 * e as i128;
        FqElem(self.exp[l.rem_euclid(self.q as i128 - 1) as usize])
    }

    pub fn one_minus(&self, a: FqElem) -> FqElem {
        self.sub(FqElem::ONE, a)
    }
}

/// An embedding of a smaller field into a larger one of the same characteristic.
pub struct Embedding {
    /// Image of the power-basis element t of the small field.
    root: FqElem,
    small_r: u32,
    p: u32,
}

impl Embedding {
    /// Find the embedding sending t to the smallest root of the small field's modulus.
    pub fn find(small: &FieldCtx, big: &FieldCtx) -> Result<Embedding> {
        if small.p != big.p || big.r % small.r != 0 {
            return Err(HgmError::Invalid(format!(
                "F_{} does not embed in F_{}",
                small.q, big.q
            )));
        }
        let coeffs: Vec<FqElem> = small.modulus.iter().map(|&c| FqElem(c)).collect();
        let root = big
            .elements()
            .find(|&z| {
                let mut acc = FqElem::ZERO;
                for &c in coeffs.iter().rev() {
                    acc = big.add(big.mul(acc, z), c);
                }
                acc == FqElem::ZERO
            })
            .expect("an irreducible polynomial splits in every extension of matching degree");
        Ok(Embedding { root, small_r: small.r, p: small.p })
    }

    pub fn apply(&self, big: &FieldCtx, x: FqElem) -> FqElem {
        let mut v = x.0;
        let mut acc = FqElem::ZERO;
        let mut power = FqElem::ONE;
        for _ in 0..self.small_r {
            let c = FqElem(v % self.p);
            v /= self.p;
            acc = big.add(acc, big.mul(c, power));
            power = big.mul(power, self.root);
        }
        acc
    }
}

/// The unit u modulo q-1 such that ω_Q^{u·α} = ω_q^α ∘ Norm for α ∈ (1/(q-1))Z.
///
/// Characters built this way are compatible along the tower, which makes
/// orbit-wise L-polynomials consistent across F_q ⊂ F_{q^2} ⊂ ….
pub fn norm_compatible_unit(small: &FieldCtx, big: &FieldCtx) -> Result<u64> {
    let emb = Embedding::find(small, big)?;
    let qs = small.q as u64 - 1;
    let ql = big.q as u64 - 1;
    let image = emb.apply(big, small.gen);
    let l = big.dlog(image)? as u64;
    let cofactor = ql / qs;
    debug_assert_eq!(l % cofactor, 0);
    let w = (l / cofactor) as i64;
    arith::inv_mod(w, qs as i64)
        .map(|u| u as u64)
        .ok_or_else(|| HgmError::Invalid("embedded generator is not primitive".into()))
}

fn encode(c: &[u64], p: u64) -> u32 {
    c.iter().rev().fold(0u64, |acc, &v| acc * p + v) as u32
}

/// Coefficient vectors of length r in lexicographic order, constant term first.
fn lex_elements(p: u64, r: usize) -> impl Iterator<Item = Vec<u64>> {
    let total = p.pow(r as u32);
    (0..total).map(move |mut n| {
        let mut c = vec![0u64; r];
        for i in (0..r).rev() {
            c[i] = n % p;
            n /= p;
        }
        c
    })
}

/// Smallest monic irreducible polynomial of degree r (lowest degree first, length r + 1).
fn smallest_irreducible(p: u64, r: usize) -> Vec<u64> {
    if r == 1 {
        return vec![0, 1];
    }
    lex_elements(p, r)
        .map(|mut c| {
            c.push(1);
            c
        })
        .find(|f| is_irreducible(p, f))
        .expect("irreducible polynomials exist in every degree")
}

/// Rabin's test: x^{p^r} = x mod f and gcd(x^{p^{r/l}} - x, f) = 1 for primes l | r.
fn is_irreducible(p: u64, f: &[u64]) -> bool {
    let r = f.len() - 1;
    if f[0] == 0 {
        return false;
    }
    let ring = PolyRing { p, f: f.to_vec() };
    let mut x = vec![0u64; r];
    x[1] = 1;
    // Frobenius iterates x^{p^k} for k = 0..=r.
    let mut frob = vec![x.clone()];
    for k in 0..r {
        let next = ring.pow(&frob[k], p);
        frob.push(next);
    }
    if frob[r] != x {
        return false;
    }
    for l in arith::prime_factors(r as u64) {
        let k = r / l as usize;
        let mut diff = ring.sub(&frob[k], &x);
        trim(&mut diff);
        if diff.is_empty() {
            return false;
        }
        let g = poly_gcd(p, f.to_vec(), diff);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(p: u64, mut a: Vec<u64>, b: &[u64]) -> Vec<u64> {
    trim(&mut a);
    let db = b.len() - 1;
    let lead_inv = arith::inv_mod(b[db] as i64, p as i64).unwrap() as u64;
    while a.len() > db {
        let da = a.len() - 1;
        let c = a[da] * lead_inv % p;
        for i in 0..=db {
            let idx = da - db + i;
            a[idx] = (a[idx] + p * p - c * b[i] % p) % p;
        }
        trim(&mut a);
    }
    a
}

fn poly_gcd(p: u64, mut a: Vec<u64>, mut b: Vec<u64>) -> Vec<u64> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(p, a, &b);
        a = b;
        b = r;
    }
    a
}

/// Arithmetic in F_p[x]/(f) on dense length-r coefficient vectors.
struct PolyRing {
    p: u64,
    f: Vec<u64>,
}

impl PolyRing {
    fn deg(&self) -> usize {
        self.f.len() - 1
    }

    fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + self.p - y) % self.p).collect()
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let r = self.deg();
        let p = self.p;
        let mut prod = vec![0u64; 2 * r - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        // f is monic: x^r = -(f_0 + … + f_{r-1} x^{r-1}).
        for k in (r..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..r {
                let idx = k - r + i;
                prod[idx] = (prod[idx] + p - c * self.f[i] % p) % p;
            }
        }
        prod.truncate(r);
        prod
    }

    fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut acc = vec![0u64; self.deg()];
        acc[0] = 1;
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn is_one(&self, a: &[u64]) -> bool {
        a[0] == 1 && a[1..].iter().all(|&c| c == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_fields() {
        let f5 = build_field(5, 1).unwrap();
        assert_eq!((f5.q(), f5.q_units()), (5, 4));
        assert_eq!(f5.generator(), FqElem(2));
        let f13 = build_field(13, 1).unwrap();
        assert_eq!(f13.generator(), FqElem(2));
        assert_eq!(f13.dlog(FqElem(3)).unwrap(), 4);
        let mut seen: Vec<u32> = (0..12).map(|k| f13.gen_pow(k).0).collect();
        seen.sort();
        assert_eq!(seen, (1..13).collect::<Vec<_>>());
    }

    #[test]
    fn f9_modulus_and_trace() {
        let f9 = build_field(3, 2).unwrap();
        assert_eq!(f9.modulus_poly(), &[1, 0, 1]);
        let t = f9.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f9.trace(t), 0);
        for c in 0..3 {
            assert_eq!(f9.trace(FqElem(c)), 2 * c % 3);
        }
        let mut logs: Vec<u32> = f9.nonzero_elements().map(|x| f9.dlog(x).unwrap()).collect();
        logs.sort();
        assert_eq!(logs, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn errors() {
        assert_eq!(build_field(9, 1).unwrap_err(), HgmError::NotPrime(9));
        assert!(matches!(build_field(2, 25), Err(HgmError::TooLarge { .. })));
        let f5 = build_field(5, 1).unwrap();
        assert_eq!(f5.dlog(FqElem::ZERO), Err(HgmError::ZeroElement));
        assert!(matches!(build_field_with_generator(5, 1, &[4]), Err(HgmError::NotGenerator(4))));
    }

    #[test]
    fn trace_is_sum_of_conjugates() {
        for (p, r) in [(2u64, 3u32), (3, 3), (5, 2), (7, 2), (2, 4)] {
            let f = build_field(p, r).unwrap();
            for x in f.elements() {
                let mut acc = FqElem::ZERO;
                let mut c = x;
                for _ in 0..r {
                    acc = f.add(acc, c);
                    c = f.pow(c, p as i64);
                }
                assert!(acc.0 < f.p(), "trace outside prime field");
                assert_eq!(acc.0, f.trace(x));
            }
        }
    }

    #[test]
    fn field_axioms_small() {
        let f = build_field(5, 2).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.sub(f.add(a, b), b), a);
                if a.0 != 0 && b.0 != 0 {
                    let l = (f.dlog(a).unwrap() + f.dlog(b).unwrap()) % 24;
                    assert_eq!(f.dlog(f.mul(a, b)).unwrap(), l);
                }
            }
        }
        // distributivity against a naive check on a few triples
        for (a, b, c) in [(3u32, 7u32, 11u32), (24, 1, 13), (5, 10, 20)] {
            let (a, b, c) = (FqElem(a), FqElem(b), FqElem(c));
            assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        }
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let small = build_field(3, 2).unwrap();
        let big = build_field(3, 4).unwrap();
        let emb = Embedding::find(&small, &big).unwrap();
        for a in small.elements() {
            for b in small.elements() {
                assert_eq!(
                    emb.apply(&big, small.mul(a, b)),
                    big.mul(emb.apply(&big, a), emb.apply(&big, b))
                );
                assert_eq!(
                    emb.apply(&big, small.add(a, b)),
                    big.add(emb.apply(&big, a), emb.apply(&big, b))
                );
            }
        }
        let u = norm_compatible_unit(&small, &big).unwrap();
        assert_eq!(arith::gcd(u, 8), 1);
        let prime = build_field(3, 1).unwrap();
        assert_eq!(norm_compatible_unit(&prime, &big).unwrap() % 2, 1);
    }
}
