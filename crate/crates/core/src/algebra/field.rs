use std::fmt;
use std::sync::Arc;

use crate::algebra::ring::{FqAlgebra, Ring};
use crate::error::{Error, Result};

/// Largest field order for which full addition/multiplication tables are built.
pub const MAX_FIELD_ORDER: u64 = 256;

/// An element of F_q, encoded as `Σ c_i p^i` where `c_i` is the coefficient of
/// `a^i` in the polynomial basis of the generator `a`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Fq(pub u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);
}

struct Tables {
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus over F_p, low degree first (length e+1).
    modulus: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

/// A finite field F_q with q = p^e, given by a monic irreducible modulus.
#[derive(Clone)]
pub struct FiniteField(Arc<Tables>);

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q())?;
        if self.e() > 1 {
            write!(f, "[{:?}]", self.0.modulus)?;
        }
        Ok(())
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}
impl Eq for FiniteField {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits q into (p, e) with q = p^e, or `None` if q is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 || q > u32::MAX as u64 {
        return None;
    }
    let q = q as u32;
    let mut p = 2;
    while q % p != 0 {
        p += 1;
    }
    if !is_prime(p) {
        return None;
    }
    let (mut m, mut e) = (q, 0);
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    (m == 1).then_some((p, e))
}

// ---- dense polynomials over F_p, used only while building tables ----

fn fp_trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn fp_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    let lead_inv = fp_inv(m[dm], p);
    while r.len() > dm && !r.is_empty() {
        let top = r.len() - 1;
        let c = r[top] * lead_inv % p;
        if c != 0 {
            for (i, &mi) in m.iter().enumerate() {
                let idx = top - dm + i;
                r[idx] = (r[idx] + p - c * mi % p) % p;
            }
        }
        r.pop();
        r = fp_trim(r);
    }
    fp_trim(r)
}

fn fp_inv(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let (mut b, mut n) = (a as u64 % p as u64, p as u64 - 2);
    while n > 0 {
        if n & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        n >>= 1;
    }
    r as u32
}

fn digits(mut x: u32, p: u32, e: u32) -> Vec<u32> {
    (0..e)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Brute-force irreducibility over F_p: no monic factor of degree ≤ deg/2.
fn fp_is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for lower in 0..count {
            let mut f = digits(lower as u32, p, d as u32);
            f.push(1);
            if fp_rem(m, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FiniteField {
    /// Builds F_{p^e}. When `modulus` is omitted and e > 1, the monic irreducible
    /// of degree e with the smallest encoding `Σ c_i p^i` is used.
    pub fn new(p: u32, e: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::InvalidArgument("extension degree must be ≥ 1".into()));
        }
        let q = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
        if q > MAX_FIELD_ORDER {
            return Err(Error::FieldTooLarge(q));
        }
        let q = q as u32;
        let modulus = match modulus {
            Some(m) => {
                let m: Vec<u32> = m.into_iter().map(|c| c % p).collect();
                if m.len() != e as usize + 1 || m[e as usize] != 1 || !fp_is_irreducible(&m, p) {
                    return Err(Error::ReducibleModulus(format!("{m:?}")));
                }
                m
            }
            None if e == 1 => vec![0, 1],
            None => (0..q)
                .map(|low| {
                    let mut f = digits(low, p, e);
                    f.push(1);
                    f
                })
                .find(|f| fp_is_irreducible(f, p))
                .expect("irreducible polynomials exist in every degree"),
        };
        let n = q as usize;
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        let mut neg = vec![0; n];
        let mut inv = vec![0; n];
        for x in 0..q {
            let dx = digits(x, p, e);
            neg[x as usize] = undigits(&dx.iter().map(|&c| (p - c) % p).collect::<Vec<_>>(), p);
            for y in 0..q {
                let dy = digits(y, p, e);
                let s: Vec<u32> = dx.iter().zip(&dy).map(|(a, b)| (a + b) % p).collect();
                add[x as usize * n + y as usize] = undigits(&s, p);
                let mut prod = vec![0u32; 2 * e as usize];
                for (i, &a) in dx.iter().enumerate() {
                    for (j, &b) in dy.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + a * b) % p;
                    }
                }
                let mut r = fp_rem(&fp_trim(prod), &modulus, p);
                r.resize(e as usize, 0);
                mul[x as usize * n + y as usize] = undigits(&r, p);
            }
        }
        for x in 1..q {
            inv[x as usize] = (1..q).find(|&y| mul[x as usize * n + y as usize] == 1).unwrap();
        }
        Ok(FiniteField(Arc::new(Tables { p, e, q, modulus, add, mul, neg, inv })))
    }

    /// F_q for a prime power q with the default modulus.
    pub fn with_order(q: u64) -> Result<Self> {
        let (p, e) = prime_power(q)
            .ok_or_else(|| Error::InvalidArgument(format!("{q} is not a prime power")))?;
        Self::new(p, e, None)
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn e(&self) -> u32 {
        self.0.e
    }
    pub fn q(&self) -> u32 {
        self.0.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }
    pub fn is_prime_field(&self) -> bool {
        self.0.e == 1
    }

    #[inline]
    pub fn fadd(&self, a: Fq, b: Fq) -> Fq {
        Fq(self.0.add[(a.0 * self.0.q + b.0) as usize])
    }
    #[inline]
    pub fn fmul(&self, a: Fq, b: Fq) -> Fq {
        Fq(self.0.mul[(a.0 * self.0.q + b.0) as usize])
    }
    #[inline]
    pub fn fneg(&self, a: Fq) -> Fq {
        Fq(self.0.neg[a.0 as usize])
    }
    #[inline]
    pub fn fsub(&self, a: Fq, b: Fq) -> Fq {
        self.fadd(a, self.fneg(b))
    }
    pub fn finv(&self, a: Fq) -> Result<Fq> {
        if a.0 == 0 {
            Err(Error::DivisionByZero)
        } else {
            Ok(Fq(self.0.inv[a.0 as usize]))
        }
    }
    pub fn fpow(&self, a: Fq, mut n: u64) -> Fq {
        let (mut b, mut r) = (a, Fq::ONE);
        while n > 0 {
            if n & 1 == 1 {
                r = self.fmul(r, b);
            }
            b = self.fmul(b, b);
            n >>= 1;
        }
        r
    }

    /// Image of an integer under Z → F_p ⊂ F_q.
    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// The generator `a` of the polynomial basis, a root of the modulus
    /// (the modulus of a prime field is `x`, so `a = 0` there).
    pub fn generator(&self) -> Fq {
        if self.0.e == 1 {
            Fq::ZERO
        } else {
            Fq(self.0.p)
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.0.q).map(Fq)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Fq> {
        (1..self.0.q).map(Fq)
    }

    pub fn mult_order(&self, a: Fq) -> u32 {
        assert!(a.0 != 0);
        let mut x = a;
        let mut k = 1;
        while x != Fq::ONE {
            x = self.fmul(x, a);
            k += 1;
        }
        k
    }

    /// Smallest (by encoding) generator of the cyclic group F_q^×.
    pub fn primitive_element(&self) -> Fq {
        self.nonzero()
            .find(|&a| self.mult_order(a) == self.0.q - 1)
            .expect("F_q^× is cyclic")
    }

    /// Base-p coordinates, coefficient of `a^i` at index i.
    pub fn coords(&self, a: Fq) -> Vec<u32> {
        digits(a.0, self.0.p, self.0.e)
    }

    /// Finds the embedding F_q' → self for a subfield `sub`, as the image of
    /// `sub`'s generator (smallest root of its modulus).
    pub fn embedding_of(&self, sub: &FiniteField) -> Result<Fq> {
        if sub.p() != self.p() || self.e() % sub.e() != 0 {
            return Err(Error::InvalidArgument(format!("{sub:?} is not a subfield of {self:?}")));
        }
        if sub.e() == 1 {
            return Ok(self.from_int(sub.generator().0 as i64));
        }
        let m = sub.modulus();
        self.elements()
            .find(|&x| {
                let mut acc = Fq::ZERO;
                for &c in m.iter().rev() {
                    acc = self.fadd(self.fmul(acc, x), self.from_int(c as i64));
                }
                acc == Fq::ZERO
            })
            .ok_or_else(|| Error::InvalidArgument("no root of subfield modulus".into()))
    }

    /// Maps an element of `sub` into self, given the image `gen_image` of its generator.
    pub fn embed(&self, sub: &FiniteField, gen_image: Fq, a: Fq) -> Fq {
        if sub.e() == 1 {
            return self.from_int(a.0 as i64);
        }
        let mut acc = Fq::ZERO;
        for &c in sub.coords(a).iter().rev() {
            acc = self.fadd(self.fmul(acc, gen_image), self.from_int(c as i64));
        }
        acc
    }

    /// Canonical text for an element: decimal in the prime field, else a polynomial in `a`.
    pub fn format_elem(&self, x: Fq) -> String {
        if self.0.e == 1 {
            return x.0.to_string();
        }
        let d = self.coords(x);
        let mut parts = Vec::new();
        for (i, &c) in d.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "a".to_string(),
                _ => format!("a^{i}"),
            };
            parts.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }

    /// True if the formatted element needs parentheses as a coefficient.
    pub fn is_compound(&self, x: Fq) -> bool {
        self.0.e > 1 && self.coords(x).iter().filter(|&&c| c != 0).count() > 1
    }

    /// Element with the given base-p coordinates (coefficient of a^i at index i).
    pub fn from_coords(&self, c: &[u32]) -> Fq {
        let mut v: Vec<u32> = c.iter().map(|&x| x % self.0.p).collect();
        v.resize(self.0.e as usize, 0);
        // reduce higher powers of a through the multiplication table
        if c.len() > self.0.e as usize {
            let mut acc = Fq::ZERO;
            let a = self.generator();
            for &ci in c.iter().rev() {
                acc = self.fadd(self.fmul(acc, a), self.from_int(ci as i64));
            }
            return acc;
        }
        Fq(undigits(&v, self.0.p))
    }
}

impl Ring for FiniteField {
    type Elem = Fq;

    fn zero(&self) -> Fq {
        Fq::ZERO
    }
    fn one(&self) -> Fq {
        Fq::ONE
    }
    fn is_zero(&self, a: &Fq) -> bool {
        a.0 == 0
    }
    fn add(&self, a: &Fq, b: &Fq) -> Fq {
        self.fadd(*a, *b)
    }
    fn neg(&self, a: &Fq) -> Fq {
        self.fneg(*a)
    }
    fn mul(&self, a: &Fq, b: &Fq) -> Fq {
        self.fmul(*a, *b)
    }
    fn try_inv(&self, a: &Fq) -> Result<Fq> {
        self.finv(*a)
    }
    fn characteristic(&self) -> u32 {
        self.0.p
    }
    fn format(&self, a: &Fq) -> String {
        self.format_elem(*a)
    }
}

impl FqAlgebra for FiniteField {
    fn field(&self) -> &FiniteField {
        self
    }
    fn from_fq(&self, c: Fq) -> Fq {
        c
    }
}
