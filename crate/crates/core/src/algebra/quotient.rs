use std::sync::Arc;

use crate::algebra::field::{FiniteField, Fq};
use crate::algebra::poly::Poly;
use crate::algebra::ratfunc::RatFunc;
use crate::algebra::ring::{AAlgebra, FqAlgebra, KAlgebra, Ring};
use crate::error::{Error, Result};

/// Residue class of a polynomial in x modulo ψ: exactly deg ψ coordinates.
pub type QElem<E> = Vec<E>;

/// The algebra R[x]/(ψ) for a monic ψ; it need not be a field.
#[derive(Clone, Debug)]
pub struct QuotientAlgebra<R: Ring> {
    base: R,
    /// ψ, low degree first, monic.
    modulus: Arc<Vec<R::Elem>>,
}

// dense univariate helpers over R, low degree first
pub(crate) fn trim<R: Ring>(r: &R, mut v: Vec<R::Elem>) -> Vec<R::Elem> {
    while v.last().is_some_and(|c| r.is_zero(c)) {
        v.pop();
    }
    v
}

pub(crate) fn upoly_mul<R: Ring>(r: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![r.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if r.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if r.is_zero(y) {
                continue;
            }
            out[i + j] = r.add(&out[i + j], &r.mul(x, y));
        }
    }
    trim(r, out)
}

pub(crate) fn upoly_sub<R: Ring>(r: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    let n = a.len().max(b.len());
    let z = r.zero();
    trim(
        r,
        (0..n)
            .map(|i| r.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
            .collect(),
    )
}

/// Division with remainder; the divisor's leading coefficient must be a unit.
pub(crate) fn upoly_divmod<R: Ring>(
    r: &R,
    a: &[R::Elem],
    b: &[R::Elem],
) -> Result<(Vec<R::Elem>, Vec<R::Elem>)> {
    let b = trim(r, b.to_vec());
    let lb = b.last().ok_or(Error::DivisionByZero)?;
    let inv = r.try_inv(lb)?;
    let mut rem = trim(r, a.to_vec());
    if rem.len() < b.len() {
        return Ok((Vec::new(), rem));
    }
    let mut quo = vec![r.zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = r.mul(rem.last().unwrap(), &inv);
        for (i, bi) in b.iter().enumerate() {
            rem[shift + i] = r.sub(&rem[shift + i], &r.mul(&c, bi));
        }
        quo[shift] = c;
        rem.pop();
        rem = trim(r, rem);
    }
    Ok((trim(r, quo), rem))
}

impl<R: Ring> QuotientAlgebra<R> {
    /// `modulus` is ψ low degree first; it must be monic of degree ≥ 1.
    pub fn new(base: R, modulus: Vec<R::Elem>) -> Result<Self> {
        let modulus = trim(&base, modulus);
        if modulus.len() < 2 || !base.is_one(modulus.last().unwrap()) {
            return Err(Error::InvalidArgument("quotient modulus must be monic of degree >= 1".into()));
        }
        Ok(QuotientAlgebra { base, modulus: Arc::new(modulus) })
    }

    pub fn base(&self) -> &R {
        &self.base
    }
    pub fn modulus(&self) -> &[R::Elem] {
        &self.modulus
    }
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// The class of x.
    pub fn gen(&self) -> QElem<R::Elem> {
        self.reduce(vec![self.base.zero(), self.base.one()])
    }

    pub fn from_base(&self, c: R::Elem) -> QElem<R::Elem> {
        self.reduce(vec![c])
    }

    /// Reduces an arbitrary polynomial in x (low degree first).
    pub fn reduce(&self, v: Vec<R::Elem>) -> QElem<R::Elem> {
        let r = &self.base;
        let d = self.degree();
        let mut v = v;
        while v.len() > d {
            let top = v.pop().unwrap();
            if r.is_zero(&top) {
                continue;
            }
            let shift = v.len() - d;
            for i in 0..d {
                v[shift + i] = r.sub(&v[shift + i], &r.mul(&top, &self.modulus[i]));
            }
        }
        v.resize(d, r.zero());
        v
    }

    /// True if the element lies in the base ring (all x-coordinates vanish).
    pub fn is_base(&self, a: &QElem<R::Elem>) -> bool {
        a.iter().skip(1).all(|c| self.base.is_zero(c))
    }
}

impl<R: Ring> Ring for QuotientAlgebra<R> {
    type Elem = QElem<R::Elem>;

    fn zero(&self) -> Self::Elem {
        vec![self.base.zero(); self.degree()]
    }
    fn one(&self) -> Self::Elem {
        self.from_base(self.base.one())
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|c| self.base.is_zero(c))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if self.degree() == 1 {
            return vec![self.base.mul(&a[0], &b[0])];
        }
        self.reduce(upoly_mul(&self.base, a, b))
    }
    /// Extended Euclid against ψ; a non-unit gcd means `a` is a zero divisor.
    fn try_inv(&self, a: &Self::Elem) -> Result<Self::Elem> {
        let r = &self.base;
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        let (mut r0, mut r1) = (self.modulus.to_vec(), trim(r, a.clone()));
        let (mut t0, mut t1): (Vec<R::Elem>, Vec<R::Elem>) = (Vec::new(), vec![r.one()]);
        while r1.len() > 1 {
            let (q, rem) = upoly_divmod(r, &r0, &r1).map_err(|e| match e {
                Error::ZeroDivisor(m) => Error::ZeroDivisor(m),
                other => Error::ZeroDivisor(other.to_string()),
            })?;
            let t = upoly_sub(r, &t0, &upoly_mul(r, &q, &t1));
            r0 = std::mem::replace(&mut r1, rem);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r1.is_empty() {
            return Err(Error::ZeroDivisor(format!(
                "{} shares a factor with the modulus",
                self.format(a)
            )));
        }
        let c = r
            .try_inv(&r1[0])
            .map_err(|_| Error::ZeroDivisor(format!("{} is not a unit", self.format(a))))?;
        Ok(self.reduce(t1.iter().map(|x| r.mul(x, &c)).collect()))
    }
    fn characteristic(&self) -> u32 {
        self.base.characteristic()
    }
    fn format(&self, a: &Self::Elem) -> String {
        let parts: Vec<String> = a
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !self.base.is_zero(c))
            .map(|(i, c)| {
                let mono = match i {
                    0 => String::new(),
                    1 => "x".into(),
                    _ => format!("x^{i}"),
                };
                let cs = self.base.format(c);
                if i == 0 {
                    cs
                } else if self.base.is_one(c) {
                    mono
                } else if cs.contains('+') || cs.contains('/') {
                    format!("({cs})*{mono}")
                } else {
                    format!("{cs}*{mono}")
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
    fn pth_power(&self, a: &Self::Elem) -> Self::Elem {
        let p = self.characteristic() as usize;
        let mut v = vec![self.base.zero(); (self.degree() - 1) * p + 1];
        for (i, c) in a.iter().enumerate() {
            v[i * p] = self.base.pth_power(c);
        }
        self.reduce(v)
    }
}

impl<R: FqAlgebra> FqAlgebra for QuotientAlgebra<R> {
    fn field(&self) -> &FiniteField {
        self.base.field()
    }
    fn from_fq(&self, c: Fq) -> Self::Elem {
        self.from_base(self.base.from_fq(c))
    }
    fn scale(&self, a: &Self::Elem, c: Fq) -> Self::Elem {
        a.iter().map(|x| self.base.scale(x, c)).collect()
    }
}

impl<R: AAlgebra> AAlgebra for QuotientAlgebra<R> {
    fn from_poly(&self, a: &Poly) -> Self::Elem {
        self.from_base(self.base.from_poly(a))
    }
}

impl<R: KAlgebra> KAlgebra for QuotientAlgebra<R> {
    fn from_ratfunc(&self, a: &RatFunc) -> Self::Elem {
        self.from_base(self.base.from_ratfunc(a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ratfunc::RatFuncField;

    fn k(q: u64) -> RatFuncField {
        RatFuncField::new(FiniteField::with_order(q).unwrap())
    }

    #[test]
    fn quadratic_extension_inverse() {
        // K[x]/(x^2 + T) over F_3
        let k = k(3);
        let t = k.from_poly(&Poly::t());
        let alg = QuotientAlgebra::new(k.clone(), vec![t.clone(), k.zero(), k.one()]).unwrap();
        let x = alg.gen();
        assert_eq!(alg.mul(&x, &x), alg.from_base(k.neg(&t)));
        let y = alg.add(&x, &alg.one());
        let inv = alg.try_inv(&y).unwrap();
        assert_eq!(alg.mul(&y, &inv), alg.one());
        assert_eq!(alg.pth_power(&y), alg.pow(&y, 3));
    }

    #[test]
    fn zero_divisor_detected() {
        // K[x]/(x^2): x is nilpotent
        let k = k(2);
        let alg = QuotientAlgebra::new(k.clone(), vec![k.zero(), k.zero(), k.one()]).unwrap();
        assert!(matches!(alg.try_inv(&alg.gen()), Err(Error::ZeroDivisor(_))));
        let u = alg.add(&alg.gen(), &alg.one());
        assert_eq!(alg.mul(&u, &alg.try_inv(&u).unwrap()), alg.one());
    }
}
