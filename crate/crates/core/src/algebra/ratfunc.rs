use crate::algebra::field::{FiniteField, Fq};
use crate::algebra::poly::{Poly, PolyRing};
use crate::algebra::ring::{AAlgebra, FqAlgebra, KAlgebra, Ring};
use crate::error::{Error, Result};

/// An element of K = F_q(T) in lowest terms with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn num(&self) -> &Poly {
        &self.num
    }
    pub fn den(&self) -> &Poly {
        &self.den
    }
    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }
    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }
}

/// The field K = F_q(T).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFuncField {
    a: PolyRing,
}

impl RatFuncField {
    pub fn new(field: FiniteField) -> Self {
        RatFuncField { a: PolyRing::new(field) }
    }

    pub fn base(&self) -> &PolyRing {
        &self.a
    }

    /// num/den reduced to lowest terms.
    pub fn make(&self, num: Poly, den: Poly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc::from_poly(Poly::zero()));
        }
        if den.is_one() {
            return Ok(RatFunc { num, den });
        }
        let g = self.a.gcd(&num, &den)?;
        let (mut n, mut d) = if g.is_one() {
            (num, den)
        } else {
            (self.a.div_exact(&num, &g)?, self.a.div_exact(&den, &g)?)
        };
        let lc = d.leading();
        if lc != Fq::ONE {
            let inv = self.a.field().finv(lc)?;
            n = self.a.scale_poly(&n, inv);
            d = self.a.scale_poly(&d, inv);
        }
        Ok(RatFunc { num: n, den: d })
    }

    pub fn div(&self, x: &RatFunc, y: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(x, &self.try_inv(y)?))
    }

    /// The polynomial value if the denominator is 1.
    pub fn to_poly(&self, x: &RatFunc) -> Option<Poly> {
        x.is_integral().then(|| x.num.clone())
    }
}

impl Ring for RatFuncField {
    type Elem = RatFunc;

    fn zero(&self) -> RatFunc {
        RatFunc::from_poly(Poly::zero())
    }
    fn one(&self) -> RatFunc {
        RatFunc::from_poly(Poly::one())
    }
    fn is_zero(&self, x: &RatFunc) -> bool {
        x.num.is_zero()
    }
    fn add(&self, x: &RatFunc, y: &RatFunc) -> RatFunc {
        if x.den == y.den {
            if x.den.is_one() {
                return RatFunc::from_poly(self.a.add_poly(&x.num, &y.num));
            }
            return self.make(self.a.add_poly(&x.num, &y.num), x.den.clone()).unwrap();
        }
        let num = self.a.add_poly(&self.a.mul_poly(&x.num, &y.den), &self.a.mul_poly(&y.num, &x.den));
        self.make(num, self.a.mul_poly(&x.den, &y.den)).unwrap()
    }
    fn neg(&self, x: &RatFunc) -> RatFunc {
        RatFunc { num: self.a.neg_poly(&x.num), den: x.den.clone() }
    }
    fn mul(&self, x: &RatFunc, y: &RatFunc) -> RatFunc {
        if x.den.is_one() && y.den.is_one() {
            return RatFunc::from_poly(self.a.mul_poly(&x.num, &y.num));
        }
        self.make(self.a.mul_poly(&x.num, &y.num), self.a.mul_poly(&x.den, &y.den))
            .unwrap()
    }
    fn try_inv(&self, x: &RatFunc) -> Result<RatFunc> {
        if x.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.make(x.den.clone(), x.num.clone())
    }
    fn characteristic(&self) -> u32 {
        self.a.characteristic()
    }
    fn format(&self, x: &RatFunc) -> String {
        let n = self.a.format(&x.num);
        if x.den.is_one() {
            return n;
        }
        format!("({n})/({})", self.a.format(&x.den))
    }
    fn pth_power(&self, x: &RatFunc) -> RatFunc {
        RatFunc { num: self.a.pth_power_poly(&x.num), den: self.a.pth_power_poly(&x.den) }
    }
}

impl FqAlgebra for RatFuncField {
    fn field(&self) -> &FiniteField {
        self.a.field()
    }
    fn from_fq(&self, c: Fq) -> RatFunc {
        RatFunc::from_poly(Poly::constant(c))
    }
    fn scale(&self, x: &RatFunc, c: Fq) -> RatFunc {
        if c == Fq::ZERO {
            return self.zero();
        }
        RatFunc { num: self.a.scale_poly(&x.num, c), den: x.den.clone() }
    }
}

impl AAlgebra for RatFuncField {
    fn from_poly(&self, a: &Poly) -> RatFunc {
        RatFunc::from_poly(a.clone())
    }
}

impl KAlgebra for RatFuncField {
    fn from_ratfunc(&self, a: &RatFunc) -> RatFunc {
        a.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k(q: u64) -> RatFuncField {
        RatFuncField::new(FiniteField::with_order(q).unwrap())
    }

    fn p(c: &[u32]) -> Poly {
        Poly::from_coeffs(c.iter().map(|&x| Fq(x)).collect())
    }

    #[test]
    fn lowest_terms() {
        let k = k(3);
        // (T^2 - 1)/(2T - 2) = (T+1)/2 = 2T + 2 over F_3
        let x = k.make(p(&[2, 0, 1]), p(&[1, 2])).unwrap();
        assert!(x.is_integral());
        assert_eq!(x.num(), &p(&[2, 2]));
        assert!(k.make(p(&[1]), Poly::zero()).is_err());
    }

    proptest! {
        #[test]
        fn field_axioms(a in prop::collection::vec(0u32..3, 0..5),
                        b in prop::collection::vec(0u32..3, 1..5),
                        c in prop::collection::vec(0u32..3, 0..5)) {
            let k = k(3);
            let (pa, pb, pc) = (p(&a), p(&b), p(&c));
            prop_assume!(!pb.is_zero());
            let x = k.make(pa, pb.clone()).unwrap();
            let y = k.make(pc, pb).unwrap();
            let s = k.add(&x, &y);
            prop_assert_eq!(k.sub(&s, &y), x.clone());
            if !k.is_zero(&y) {
                let z = k.mul(&x, &y);
                prop_assert_eq!(k.div(&z, &y).unwrap(), x.clone());
            }
            prop_assert_eq!(k.pth_power(&x), k.pow(&x, 3));
        }
    }
}
