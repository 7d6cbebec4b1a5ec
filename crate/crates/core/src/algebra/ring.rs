use std::fmt::Debug;

use crate::algebra::field::{FiniteField, Fq};
use crate::algebra::poly::Poly;
use crate::algebra::ratfunc::RatFunc;
use crate::error::Result;

/// A commutative ring given as a context object; elements carry no context of
/// their own, so every operation goes through the ring.
pub trait Ring: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Inverse of a unit; non-units raise `ZeroDivisor` (or `DivisionByZero` for 0).
    fn try_inv(&self, a: &Self::Elem) -> Result<Self::Elem>;

    fn characteristic(&self) -> u32;

    /// Canonical text form.
    fn format(&self, a: &Self::Elem) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, mut n: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// The absolute Frobenius `a ↦ a^p`.
    fn pth_power(&self, a: &Self::Elem) -> Self::Elem {
        self.pow(a, self.characteristic() as u64)
    }
}

/// `a^n` through the base-p digits of n, for rings with a cheap Frobenius.
pub fn pow_by_digits<R: Ring>(r: &R, a: &R::Elem, mut n: u64) -> R::Elem {
    let p = r.characteristic() as u64;
    let mut acc = r.one();
    let mut base = a.clone();
    while n > 0 {
        for _ in 0..n % p {
            acc = r.mul(&acc, &base);
        }
        n /= p;
        if n > 0 {
            base = r.pth_power(&base);
        }
    }
    acc
}

/// Algebras over a finite field F_q.
pub trait FqAlgebra: Ring {
    fn field(&self) -> &FiniteField;
    fn from_fq(&self, c: Fq) -> Self::Elem;

    fn scale(&self, a: &Self::Elem, c: Fq) -> Self::Elem {
        self.mul(a, &self.from_fq(c))
    }

    /// The q-power Frobenius used by the twisted product `τ·c = c^q·τ`.
    fn frobenius_q(&self, a: &Self::Elem) -> Self::Elem {
        let mut x = a.clone();
        for _ in 0..self.field().e() {
            x = self.pth_power(&x);
        }
        x
    }
}

/// Algebras over A = F_q[T].
pub trait AAlgebra: FqAlgebra {
    fn from_poly(&self, a: &Poly) -> Self::Elem;
}

/// Algebras over K = F_q(T).
pub trait KAlgebra: AAlgebra {
    fn from_ratfunc(&self, a: &RatFunc) -> Self::Elem;
}
