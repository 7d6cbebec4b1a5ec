use std::cmp::Ordering;

use crate::algebra::field::{FiniteField, Fq};
use crate::algebra::ring::{pow_by_digits, AAlgebra, FqAlgebra, Ring};
use crate::error::{Error, Result};

/// An element of A = F_q[T]; index = degree in T, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly(Vec<Fq>);

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then coefficients from the top.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }
    pub fn one() -> Self {
        Poly(vec![Fq::ONE])
    }
    pub fn constant(c: Fq) -> Self {
        Poly::from_coeffs(vec![c])
    }
    /// c·T^k
    pub fn monomial(c: Fq, k: usize) -> Self {
        let mut v = vec![Fq::ZERO; k + 1];
        v[k] = c;
        Poly::from_coeffs(v)
    }
    pub fn t() -> Self {
        Poly::monomial(Fq::ONE, 1)
    }
    pub fn from_coeffs(mut c: Vec<Fq>) -> Self {
        while c.last() == Some(&Fq::ZERO) {
            c.pop();
        }
        Poly(c)
    }
    pub fn coeffs(&self) -> &[Fq] {
        &self.0
    }
    pub fn coeff(&self, i: usize) -> Fq {
        self.0.get(i).copied().unwrap_or(Fq::ZERO)
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0] == Fq::ONE
    }
    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }
    pub fn leading(&self) -> Fq {
        self.0.last().copied().unwrap_or(Fq::ZERO)
    }
    pub fn is_monic(&self) -> bool {
        self.leading() == Fq::ONE
    }
    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }
}

/// The ring A = F_q[T].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    field: FiniteField,
}

impl PolyRing {
    pub fn new(field: FiniteField) -> Self {
        PolyRing { field }
    }

    pub fn q(&self) -> u64 {
        self.field.q() as u64
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    /// |n| = q^{deg n}; the zero polynomial has no norm.
    pub fn norm(&self, n: &Poly) -> Result<u128> {
        let d = n.degree().ok_or(Error::DivisionByZero)?;
        (self.q() as u128)
            .checked_pow(d as u32)
            .ok_or_else(|| Error::InvalidArgument("norm overflows u128".into()))
    }

    pub fn scale_poly(&self, a: &Poly, c: Fq) -> Poly {
        if c == Fq::ZERO {
            return Poly::zero();
        }
        Poly::from_coeffs(a.0.iter().map(|&x| self.field.fmul(x, c)).collect())
    }

    pub fn shift(&self, a: &Poly, k: usize) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Fq::ZERO; k];
        v.extend_from_slice(&a.0);
        Poly(v)
    }

    pub fn monic(&self, a: &Poly) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        let inv = self.field.finv(a.leading()).unwrap();
        self.scale_poly(a, inv)
    }

    pub fn add_poly(&self, a: &Poly, b: &Poly) -> Poly {
        let f = &self.field;
        let (long, short) = if a.0.len() >= b.0.len() { (a, b) } else { (b, a) };
        let mut v = long.0.clone();
        for (x, &y) in v.iter_mut().zip(&short.0) {
            *x = f.fadd(*x, y);
        }
        Poly::from_coeffs(v)
    }

    pub fn sub_poly(&self, a: &Poly, b: &Poly) -> Poly {
        self.add_poly(a, &self.neg_poly(b))
    }

    pub fn neg_poly(&self, a: &Poly) -> Poly {
        Poly(a.0.iter().map(|&x| self.field.fneg(x)).collect())
    }

    pub fn mul_poly(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let n = a.0.len() + b.0.len() - 1;
        let f = &self.field;
        if a.0.len() == 1 {
            return self.scale_poly(b, a.0[0]);
        }
        if b.0.len() == 1 {
            return self.scale_poly(a, b.0[0]);
        }
        if f.is_prime_field() {
            let p = f.p() as u64;
            if p == 2 {
                let mut acc = vec![0u32; n];
                for (i, x) in a.0.iter().enumerate() {
                    if x.0 == 1 {
                        for (j, y) in b.0.iter().enumerate() {
                            acc[i + j] ^= y.0;
                        }
                    }
                }
                return Poly::from_coeffs(acc.into_iter().map(Fq).collect());
            }
            let mut acc = vec![0u64; n];
            let limit = u64::MAX - (p - 1) * (p - 1);
            for (i, x) in a.0.iter().enumerate() {
                let xv = x.0 as u64;
                if xv == 0 {
                    continue;
                }
                for (j, y) in b.0.iter().enumerate() {
                    let slot = &mut acc[i + j];
                    *slot += xv * y.0 as u64;
                    if *slot > limit {
                        *slot %= p;
                    }
                }
            }
            return Poly::from_coeffs(acc.into_iter().map(|v| Fq((v % p) as u32)).collect());
        }
        let mut acc = vec![Fq::ZERO; n];
        for (i, &x) in a.0.iter().enumerate() {
            if x == Fq::ZERO {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                acc[i + j] = f.fadd(acc[i + j], f.fmul(x, y));
            }
        }
        Poly::from_coeffs(acc)
    }

    /// Euclidean division `a = quo·b + rem` with deg rem < deg b.
    pub fn divmod(&self, a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        let f = &self.field;
        let inv = f.finv(b.leading())?;
        let mut r = a.0.clone();
        if r.len() <= db {
            return Ok((Poly::zero(), a.clone()));
        }
        let mut quo = vec![Fq::ZERO; r.len() - db];
        for top in (db..r.len()).rev() {
            let c = f.fmul(r[top], inv);
            if c == Fq::ZERO {
                continue;
            }
            quo[top - db] = c;
            for (i, &bi) in b.0.iter().enumerate() {
                let idx = top - db + i;
                r[idx] = f.fsub(r[idx], f.fmul(c, bi));
            }
        }
        r.truncate(db);
        Ok((Poly::from_coeffs(quo), Poly::from_coeffs(r)))
    }

    pub fn rem(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        Ok(self.divmod(a, b)?.1)
    }

    /// Exact quotient; fails if b does not divide a.
    pub fn div_exact(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        let (q, r) = self.divmod(a, b)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InvalidArgument("inexact polynomial division".into()))
        }
    }

    pub fn divides(&self, d: &Poly, a: &Poly) -> bool {
        !d.is_zero() && self.rem(a, d).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Monic gcd; both arguments zero is an error.
    pub fn gcd(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::InvalidArgument("gcd(0, 0) is undefined".into()));
        }
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.rem(&x, &y)?;
            x = y;
            y = r;
        }
        Ok(self.monic(&x))
    }

    /// Extended gcd: returns (g, s, t) with g = s·a + t·b monic.
    pub fn xgcd(&self, a: &Poly, b: &Poly) -> Result<(Poly, Poly, Poly)> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::InvalidArgument("gcd(0, 0) is undefined".into()));
        }
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (qq, r) = self.divmod(&r0, &r1)?;
            let s = self.sub_poly(&s0, &self.mul_poly(&qq, &s1));
            let t = self.sub_poly(&t0, &self.mul_poly(&qq, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = self.field.finv(r0.leading())?;
        Ok((
            self.scale_poly(&r0, inv),
            self.scale_poly(&s0, inv),
            self.scale_poly(&t0, inv),
        ))
    }

    /// a^p, computed coefficientwise (Frobenius in characteristic p).
    pub fn pth_power_poly(&self, a: &Poly) -> Poly {
        let p = self.field.p() as usize;
        if a.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Fq::ZERO; (a.0.len() - 1) * p + 1];
        for (i, &c) in a.0.iter().enumerate() {
            v[i * p] = self.field.fpow(c, p as u64);
        }
        Poly(v)
    }

    pub fn eval(&self, a: &Poly, x: Fq) -> Fq {
        a.0.iter()
            .rev()
            .fold(Fq::ZERO, |acc, &c| self.field.fadd(self.field.fmul(acc, x), c))
    }

    /// All monic polynomials of the exact degree d, in a fixed deterministic order.
    pub fn monic_of_degree(&self, d: usize) -> Vec<Poly> {
        let q = self.field.q() as u64;
        let count = q.pow(d as u32);
        (0..count)
            .map(|mut idx| {
                let mut c = Vec::with_capacity(d + 1);
                for _ in 0..d {
                    c.push(Fq((idx % q) as u32));
                    idx /= q;
                }
                c.push(Fq::ONE);
                Poly(c)
            })
            .collect()
    }

    /// All polynomials of degree < d (including zero).
    pub fn reduced_residues(&self, d: usize) -> Vec<Poly> {
        let q = self.field.q() as u64;
        (0..q.pow(d as u32))
            .map(|mut idx| {
                let mut c = Vec::with_capacity(d);
                for _ in 0..d {
                    c.push(Fq((idx % q) as u32));
                    idx /= q;
                }
                Poly::from_coeffs(c)
            })
            .collect()
    }

    /// Monic divisors of a nonzero polynomial, sorted by degree then coefficients.
    pub fn monic_divisors(&self, n: &Poly) -> Vec<Poly> {
        let d = n.degree().expect("nonzero");
        let mut out: Vec<Poly> = (0..=d)
            .flat_map(|k| self.monic_of_degree(k))
            .filter(|m| self.divides(m, n))
            .collect();
        out.sort();
        out
    }

    /// Factorization of a monic polynomial into monic irreducibles with
    /// multiplicities, by trial division.
    pub fn factor(&self, n: &Poly) -> Result<Vec<(Poly, u32)>> {
        if n.is_zero() {
            return Err(Error::InvalidArgument("cannot factor zero".into()));
        }
        let mut rest = self.monic(n);
        let mut out = Vec::new();
        let mut d = 1;
        while rest.degree().unwrap() >= 2 * d {
            for cand in self.monic_of_degree(d) {
                let mut mult = 0;
                while self.divides(&cand, &rest) {
                    rest = self.div_exact(&rest, &cand)?;
                    mult += 1;
                }
                if mult > 0 {
                    out.push((cand, mult));
                }
            }
            d += 1;
        }
        if rest.degree().unwrap() > 0 {
            out.push((rest, 1));
        }
        out.sort();
        Ok(out)
    }

    pub fn is_irreducible(&self, n: &Poly) -> bool {
        match n.degree() {
            None | Some(0) => false,
            Some(_) => self
                .factor(n)
                .map(|f| f.len() == 1 && f[0].1 == 1)
                .unwrap_or(false),
        }
    }

    /// Canonical text in the variable `var`, descending degree.
    pub fn format_in(&self, a: &Poly, var: &str) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let f = &self.field;
        let mut parts = Vec::new();
        for (i, &c) in a.0.iter().enumerate().rev() {
            if c == Fq::ZERO {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let coef = if f.is_compound(c) {
                format!("({})", f.format_elem(c))
            } else {
                f.format_elem(c)
            };
            parts.push(match (i, c == Fq::ONE) {
                (0, _) => coef,
                (_, true) => mono,
                (_, false) => format!("{coef}*{mono}"),
            });
        }
        parts.join("+")
    }
}

impl Ring for PolyRing {
    type Elem = Poly;

    fn zero(&self) -> Poly {
        Poly::zero()
    }
    fn one(&self) -> Poly {
        Poly::one()
    }
    fn is_zero(&self, a: &Poly) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        self.add_poly(a, b)
    }
    fn neg(&self, a: &Poly) -> Poly {
        self.neg_poly(a)
    }
    fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        self.sub_poly(a, b)
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.mul_poly(a, b)
    }
    fn try_inv(&self, a: &Poly) -> Result<Poly> {
        match a.degree() {
            None => Err(Error::DivisionByZero),
            Some(0) => Ok(Poly::constant(self.field.finv(a.0[0])?)),
            Some(_) => Err(Error::ZeroDivisor(format!(
                "{} is not a unit in F_q[T]",
                self.format_in(a, "T")
            ))),
        }
    }
    fn characteristic(&self) -> u32 {
        self.field.p()
    }
    fn format(&self, a: &Poly) -> String {
        self.format_in(a, "T")
    }
    fn pth_power(&self, a: &Poly) -> Poly {
        self.pth_power_poly(a)
    }
    fn pow(&self, a: &Poly, n: u64) -> Poly {
        pow_by_digits(self, a, n)
    }
}

impl FqAlgebra for PolyRing {
    fn field(&self) -> &FiniteField {
        &self.field
    }
    fn from_fq(&self, c: Fq) -> Poly {
        Poly::constant(c)
    }
    fn scale(&self, a: &Poly, c: Fq) -> Poly {
        self.scale_poly(a, c)
    }
}

impl AAlgebra for PolyRing {
    fn from_poly(&self, a: &Poly) -> Poly {
        a.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring(q: u64) -> PolyRing {
        PolyRing::new(FiniteField::with_order(q).unwrap())
    }

    fn p(c: &[u32]) -> Poly {
        Poly::from_coeffs(c.iter().map(|&x| Fq(x)).collect())
    }

    #[test]
    fn divmod_examples() {
        let a = ring(2);
        assert_eq!(a.divmod(&p(&[0, 0, 1]), &p(&[0, 1])).unwrap(), (p(&[0, 1]), Poly::zero()));
        // (T+1)^2 = T^2 + 1 in characteristic 2
        assert_eq!(a.divmod(&p(&[1, 0, 1]), &p(&[1, 1])).unwrap(), (p(&[1, 1]), Poly::zero()));
        assert_eq!(a.divmod(&p(&[0, 1]), &p(&[0, 0, 1])).unwrap(), (Poly::zero(), p(&[0, 1])));
        assert_eq!(a.divmod(&p(&[1]), &Poly::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn gcd_examples() {
        let a = ring(2);
        assert_eq!(a.gcd(&p(&[0, 1]), &p(&[0, 0, 1])).unwrap(), p(&[0, 1]));
        assert_eq!(a.gcd(&p(&[0, 1, 1]), &p(&[1, 1])).unwrap(), p(&[1, 1]));
        assert_eq!(a.gcd(&p(&[0, 1]), &p(&[1, 1])).unwrap(), Poly::one());
        assert!(a.gcd(&Poly::zero(), &Poly::zero()).is_err());
    }

    #[test]
    fn factor_and_irreducibility() {
        let a = ring(2);
        // T^3 + T = T (T+1)^2
        let f = a.factor(&p(&[0, 1, 0, 1])).unwrap();
        assert_eq!(f, vec![(p(&[0, 1]), 1), (p(&[1, 1]), 2)]);
        assert!(a.is_irreducible(&p(&[1, 1, 1])));
        assert!(!a.is_irreducible(&p(&[1, 0, 1])));
        assert_eq!(a.monic_divisors(&p(&[0, 0, 1])).len(), 3);
    }

    #[test]
    fn zero_has_no_degree_or_norm() {
        let a = ring(3);
        assert_eq!(Poly::zero().degree(), None);
        assert!(a.norm(&Poly::zero()).is_err());
        assert_eq!(a.norm(&p(&[0, 0, 1])).unwrap(), 9);
    }

    fn arb_poly(q: u32, max_len: usize) -> impl Strategy<Value = Vec<u32>> {
        prop::collection::vec(0..q, 0..max_len)
    }

    proptest! {
        #[test]
        fn divmod_identity(q in prop::sample::select(vec![2u64, 3, 4, 5, 9]),
                           x in arb_poly(256, 12), y in arb_poly(256, 7)) {
            let a = ring(q);
            let qq = q as u32;
            let x = p(&x.iter().map(|v| v % qq).collect::<Vec<_>>());
            let y = p(&y.iter().map(|v| v % qq).collect::<Vec<_>>());
            prop_assume!(!y.is_zero());
            let (quo, r) = a.divmod(&x, &y).unwrap();
            prop_assert_eq!(a.add(&a.mul(&quo, &y), &r), x);
            prop_assert!(r.degree().map_or(true, |d| d < y.degree().unwrap()));
        }

        #[test]
        fn ring_axioms(q in prop::sample::select(vec![2u64, 3, 4]),
                       x in arb_poly(4, 8), y in arb_poly(4, 8), z in arb_poly(4, 8)) {
            let a = ring(q);
            let qq = q as u32;
            let f = |v: &Vec<u32>| p(&v.iter().map(|c| c % qq).collect::<Vec<_>>());
            let (x, y, z) = (f(&x), f(&y), f(&z));
            prop_assert_eq!(a.mul(&a.mul(&x, &y), &z), a.mul(&x, &a.mul(&y, &z)));
            prop_assert_eq!(a.mul(&x, &a.add(&y, &z)), a.add(&a.mul(&x, &y), &a.mul(&x, &z)));
            let naive = (0..a.characteristic()).fold(a.one(), |acc, _| a.mul(&acc, &x));
            prop_assert_eq!(a.pth_power(&x), naive);
        }
    }
}
