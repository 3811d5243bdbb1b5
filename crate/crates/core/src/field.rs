//! Arithmetic in a prime field `F_p` and its extension `F_{p^s}`.
//!
//! Elements of `F_{p^s}` are stored in the power basis `1, x, ..., x^{s-1}`
//! modulo a monic irreducible polynomial, and encoded as the integer
//! `sum coeffs[i] * p^i`. This encoding is also the wire format.
//!
//! Fields with at most `2^20` elements get exp/log tables over a primitive
//! element, which both speed up multiplication and give the `a^j` display
//! form.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order for which discrete-log tables are built.
pub const LOG_TABLE_LIMIT: u64 = 1 << 20;

/// An element of `F_{p^s}` in canonical integer encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FElem(pub(crate) u64);

impl FElem {
    pub const ZERO: FElem = FElem(0);
    pub const ONE: FElem = FElem(1);

    /// The canonical integer encoding.
    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug)]
struct LogTables {
    generator: FElem,
    // exp[i] = generator^i for i in 0..2(N-1), doubled to skip a reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// The tower `F_p ⊆ F_{p^s}`. Immutable after construction.
#[derive(Debug)]
pub struct FieldCtx {
    p: u64,
    s: u32,
    modulus: Vec<u64>,
    order: u64,
    // Modulus as a bit mask, only meaningful for p = 2.
    modulus_bits: u128,
    tables: Option<LogTables>,
    generator_hint: Option<FElem>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.s == other.s && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

impl FieldCtx {
    /// Builds `F_{p^s}`. When `modulus` is `None`, the smallest monic
    /// irreducible of degree `s` (ordered by the integer encoding of its
    /// lower coefficients) is used.
    pub fn new(p: u64, s: u32, modulus: Option<&[u64]>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if s == 0 {
            return Err(Error::ZeroDegree);
        }
        let order = p
            .checked_pow(s)
            .filter(|&o| o <= 1 << 62)
            .ok_or(Error::FieldTooLarge { p, s })?;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != s as usize + 1 || m[s as usize] != 1 {
                    return Err(Error::DegreeMismatch { expected: s, got: m.len() });
                }
                if m.iter().any(|&c| c >= p) {
                    return Err(Error::DegreeMismatch { expected: s, got: m.len() });
                }
                if !fp_poly::is_irreducible(m, p) {
                    return Err(Error::ReducibleModulus { p });
                }
                m.to_vec()
            }
            None => smallest_irreducible(p, s),
        };
        let modulus_bits = if p == 2 {
            modulus.iter().enumerate().fold(0u128, |acc, (i, &c)| acc | ((c as u128) << i))
        } else {
            0
        };
        let mut ctx = FieldCtx { p, s, modulus, order, modulus_bits, tables: None, generator_hint: None };
        ctx.build_tables();
        Ok(ctx)
    }

    /// Designates the element displayed as `a`. It must be primitive for the
    /// power form to cover every nonzero element.
    pub fn with_generator_hint(mut self, hint: FElem) -> Result<Self> {
        self.check(hint)?;
        self.generator_hint = Some(hint);
        self.build_tables();
        Ok(self)
    }

    fn build_tables(&mut self) {
        self.tables = None;
        if self.order > LOG_TABLE_LIMIT {
            return;
        }
        let n1 = self.order - 1;
        let factors = prime_factors(n1);
        let primitive = |g: FElem| -> bool {
            !g.is_zero() && factors.iter().all(|&r| self.pow_slow(g, n1 / r) != FElem::ONE)
        };
        let generator = self
            .generator_hint
            .into_iter()
            .chain(std::iter::once(self.x_class()))
            .find(|&g| primitive(g))
            .or_else(|| (1..self.order).map(FElem).find(|&g| primitive(g)))
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp = Vec::with_capacity(2 * n1 as usize);
        let mut log = vec![0u32; self.order as usize];
        let mut cur = FElem::ONE;
        for i in 0..n1 {
            exp.push(cur.0 as u32);
            log[cur.0 as usize] = i as u32;
            cur = self.mul_slow(cur, generator);
        }
        exp.extend_from_within(..);
        self.tables = Some(LogTables { generator, exp, log });
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn s(&self) -> u32 {
        self.s
    }

    /// Base field size. Always equal to `p` here.
    #[inline]
    pub fn q(&self) -> u64 {
        self.p
    }

    /// Number of elements, `p^s`.
    #[inline]
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    #[inline]
    pub fn zero(&self) -> FElem {
        FElem::ZERO
    }

    #[inline]
    pub fn one(&self) -> FElem {
        FElem::ONE
    }

    /// The residue class of `x`.
    pub fn x_class(&self) -> FElem {
        if self.s >= 2 {
            FElem(self.p)
        } else {
            FElem((self.p - self.modulus[0]) % self.p)
        }
    }

    /// The element shown as `a` in power form, when tables exist.
    pub fn display_generator(&self) -> Option<FElem> {
        self.tables.as_ref().map(|t| t.generator)
    }

    /// Validates a canonical encoding.
    pub fn elem(&self, v: u64) -> Result<FElem> {
        if v < self.order {
            Ok(FElem(v))
        } else {
            Err(Error::NotCanonical(v))
        }
    }

    fn check(&self, a: FElem) -> Result<()> {
        self.elem(a.0).map(|_| ())
    }

    /// Embeds an integer of the base field.
    pub fn from_base(&self, c: u64) -> FElem {
        FElem(c % self.p)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FElem {
        FElem(rng.gen_range(0..self.order))
    }

    /// Power-basis coordinates over `F_p`.
    pub fn coords(&self, a: FElem) -> Vec<u64> {
        let mut v = a.0;
        (0..self.s)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    pub fn from_coords(&self, coords: &[u64]) -> Result<FElem> {
        if coords.len() != self.s as usize {
            return Err(Error::DegreeMismatch { expected: self.s, got: coords.len() });
        }
        let mut v = 0u64;
        for &c in coords.iter().rev() {
            if c >= self.p {
                return Err(Error::NotCanonical(c));
            }
            v = v * self.p + c;
        }
        Ok(FElem(v))
    }

    #[inline]
    pub fn add(&self, a: FElem, b: FElem) -> FElem {
        if self.p == 2 {
            return FElem(a.0 ^ b.0);
        }
        self.digitwise(a, b, |x, y| (x + y) % self.p)
    }

    #[inline]
    pub fn sub(&self, a: FElem, b: FElem) -> FElem {
        if self.p == 2 {
            return FElem(a.0 ^ b.0);
        }
        self.digitwise(a, b, |x, y| (x + self.p - y) % self.p)
    }

    #[inline]
    pub fn neg(&self, a: FElem) -> FElem {
        self.sub(FElem::ZERO, a)
    }

    fn digitwise(&self, a: FElem, b: FElem, op: impl Fn(u64, u64) -> u64) -> FElem {
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u64;
        let mut place = 1u64;
        for i in 0..self.s {
            out += op(x % self.p, y % self.p) * place;
            x /= self.p;
            y /= self.p;
            if i + 1 < self.s {
                place *= self.p;
            }
        }
        FElem(out)
    }

    #[inline]
    pub fn mul(&self, a: FElem, b: FElem) -> FElem {
        if a.is_zero() || b.is_zero() {
            return FElem::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let i = t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize;
                FElem(t.exp[i] as u64)
            }
            None => self.mul_slow(a, b),
        }
    }

    fn mul_slow(&self, a: FElem, b: FElem) -> FElem {
        if self.p == 2 {
            return FElem(self.clmul_reduce(a.0, b.0));
        }
        let s = self.s as usize;
        let (da, db) = (self.coords(a), self.coords(b));
        let p = self.p as u128;
        let mut prod = vec![0u128; 2 * s - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u128 * y as u128) % p;
            }
        }
        // Reduce with the monic modulus from the top down.
        for top in (s..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            for (i, &m) in self.modulus[..s].iter().enumerate() {
                let idx = top - s + i;
                prod[idx] = (prod[idx] + (p - c) * m as u128) % p;
            }
            prod[top] = 0;
        }
        let digits: Vec<u64> = prod[..s].iter().map(|&d| d as u64).collect();
        self.from_coords(&digits).expect("reduced digits are canonical")
    }

    fn clmul_reduce(&self, a: u64, b: u64) -> u64 {
        let mut acc: u128 = 0;
        let mut x = a as u128;
        let mut y = b;
        while y != 0 {
            if y & 1 == 1 {
                acc ^= x;
            }
            x <<= 1;
            y >>= 1;
        }
        let s = self.s as usize;
        for bit in (s..128).rev() {
            if (acc >> bit) & 1 == 1 {
                acc ^= self.modulus_bits << (bit - s);
            }
        }
        acc as u64
    }

    pub fn div(&self, a: FElem, b: FElem) -> Result<FElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn inv(&self, a: FElem) -> Result<FElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.tables {
            Some(t) => {
                let n1 = self.order as usize - 1;
                FElem(t.exp[(n1 - t.log[a.0 as usize] as usize) % n1] as u64)
            }
            None => self.pow_slow(a, self.order - 2),
        })
    }

    pub fn pow(&self, a: FElem, e: u64) -> FElem {
        if e == 0 {
            return FElem::ONE;
        }
        if a.is_zero() {
            return FElem::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let n1 = (self.order - 1) as u128;
                let i = (t.log[a.0 as usize] as u128 * e as u128) % n1;
                FElem(t.exp[i as usize] as u64)
            }
            None => self.pow_slow(a, e),
        }
    }

    fn pow_slow(&self, a: FElem, mut e: u64) -> FElem {
        let mut base = a;
        let mut acc = FElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^{q^t}`.
    pub fn frobenius(&self, a: FElem, t: u64) -> FElem {
        let t = t % self.s as u64;
        if t == 0 || a.is_zero() {
            return a;
        }
        match &self.tables {
            Some(_) => {
                // q^t mod (N - 1) keeps the exponent small.
                let n1 = self.order - 1;
                let mut e = 1u64;
                for _ in 0..t {
                    e = ((e as u128 * self.p as u128) % n1 as u128) as u64;
                }
                if e == 0 {
                    e = n1;
                }
                self.pow(a, e)
            }
            None => (0..t).fold(a, |x, _| self.pow_slow(x, self.p)),
        }
    }

    /// Discrete logarithm with respect to [`display_generator`](Self::display_generator).
    pub fn discrete_log(&self, a: FElem) -> Option<u64> {
        if a.is_zero() {
            return None;
        }
        self.tables.as_ref().map(|t| t.log[a.0 as usize] as u64)
    }

    /// `0`, `1`, `a` or `a^j` when tables exist, otherwise the integer form.
    pub fn display_power(&self, a: FElem) -> String {
        if a.is_zero() {
            return "0".into();
        }
        match self.discrete_log(a) {
            Some(0) => "1".into(),
            Some(1) => "a".into(),
            Some(j) => format!("a^{j}"),
            None => a.0.to_string(),
        }
    }

    /// Rank over `F_q` of the coordinate matrix of `elems`.
    pub fn rank_over_base(&self, elems: &[FElem]) -> usize {
        if self.p == 2 {
            // XOR basis indexed by leading bit.
            let mut basis = [0u64; 64];
            let mut rank = 0;
            for e in elems {
                let mut v = e.0;
                while v != 0 {
                    let top = 63 - v.leading_zeros() as usize;
                    if basis[top] == 0 {
                        basis[top] = v;
                        rank += 1;
                        break;
                    }
                    v ^= basis[top];
                }
            }
            return rank;
        }
        let rows: Vec<Vec<u64>> = elems.iter().map(|&e| self.coords(e)).collect();
        rank_mod_p(rows, self.p)
    }
}

/// Rank of a dense matrix over `F_p`.
pub(crate) fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = mod_pow(rows[rank][col], p - 2, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col] == 0 {
                continue;
            }
            let factor = mul_mod(row[col], inv, p);
            for (x, &y) in row[col..cols].iter_mut().zip(&pivot[col..cols]) {
                *x = (*x + p - mul_mod(factor, y, p)) % p;
            }
        }
        rank += 1;
    }
    rank
}

fn smallest_irreducible(p: u64, s: u32) -> Vec<u64> {
    let count = p.pow(s);
    (0..count)
        .map(|mut c| {
            let mut m: Vec<u64> = (0..s)
                .map(|_| {
                    let d = c % p;
                    c /= p;
                    d
                })
                .collect();
            m.push(1);
            m
        })
        .find(|m| fp_poly::is_irreducible(m, p))
        .expect("irreducible polynomials exist in every degree")
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn mod_pow(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors by trial division.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Dense polynomials over `F_p`, lowest coefficient first.
pub(crate) mod fp_poly {
    use super::{mod_pow, mul_mod, prime_factors};

    fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn rem(mut a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
        let dm = m.len() - 1;
        let inv_lead = mod_pow(m[dm], p - 2, p);
        while a.len() > dm {
            let top = a.len() - 1;
            let c = mul_mod(*a.last().unwrap(), inv_lead, p);
            if c != 0 {
                for (i, &mi) in m.iter().enumerate() {
                    let idx = top - dm + i;
                    a[idx] = (a[idx] + p - mul_mod(c, mi, p)) % p;
                }
            }
            a.pop();
            a = trim(a);
        }
        trim(a)
    }

    fn mul_rem(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mul_mod(x, y, p)) % p;
            }
        }
        rem(trim(prod), m, p)
    }

    fn pow_rem(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = rem(vec![1], m, p);
        let mut b = base.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_rem(&acc, &b, m, p);
            }
            b = mul_rem(&b, &b, m, p);
            e >>= 1;
        }
        acc
    }

    fn gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
        a = trim(a);
        b = trim(b);
        while !b.is_empty() {
            let r = rem(a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// x^{p^i} mod m for i = 0..=s.
    fn frobenius_chain(m: &[u64], p: u64, s: usize) -> Vec<Vec<u64>> {
        let mut out = Vec::with_capacity(s + 1);
        let mut h = rem(vec![0, 1], m, p);
        out.push(h.clone());
        for _ in 0..s {
            h = pow_rem(&h, p, m, p);
            out.push(h.clone());
        }
        out
    }

    fn sub_x(mut a: Vec<u64>, p: u64) -> Vec<u64> {
        if a.len() < 2 {
            a.resize(2, 0);
        }
        a[1] = (a[1] + p - 1) % p;
        trim(a)
    }

    /// Rabin's irreducibility test for a monic polynomial.
    pub(crate) fn is_irreducible(m: &[u64], p: u64) -> bool {
        let s = m.len() - 1;
        if s == 0 {
            return false;
        }
        if s == 1 {
            return true;
        }
        let chain = frobenius_chain(m, p, s);
        if !sub_x(chain[s].clone(), p).is_empty() {
            return false;
        }
        prime_factors(s as u64).into_iter().all(|r| {
            let g = gcd(m.to_vec(), sub_x(chain[s / r as usize].clone(), p), p);
            g.len() == 1
        })
    }
}
