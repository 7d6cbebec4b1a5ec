use crate::algebra::field::{FiniteField, Fq};
use crate::algebra::poly::Poly;
use crate::algebra::ratfunc::RatFunc;
use crate::algebra::ring::{AAlgebra, FqAlgebra, KAlgebra, Ring};
use crate::algebra::series::FracLaurentSeries;
use crate::error::Result;

/// Truncated series on a fixed grid viewed as a ring; every result is cut at
/// the precision cap, and constants are known up to the cap.
#[derive(Clone, Debug)]
pub struct SeriesRing<R: Ring> {
    base: R,
    denom: i64,
    cap: i64,
}

impl<R: Ring> SeriesRing<R> {
    pub fn new(base: R, denom: i64, cap: i64) -> Self {
        SeriesRing { base, denom, cap }
    }
    pub fn base(&self) -> &R {
        &self.base
    }
    pub fn cap(&self) -> i64 {
        self.cap
    }
    pub fn denom(&self) -> i64 {
        self.denom
    }
    pub fn constant(&self, c: R::Elem) -> FracLaurentSeries<R::Elem> {
        FracLaurentSeries::monomial(&self.base, c, 0, self.denom, self.cap)
    }
}

impl<R: Ring> Ring for SeriesRing<R> {
    type Elem = FracLaurentSeries<R::Elem>;

    fn zero(&self) -> Self::Elem {
        FracLaurentSeries::zero(self.denom, self.cap)
    }
    fn one(&self) -> Self::Elem {
        FracLaurentSeries::one(&self.base, self.denom, self.cap)
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero_to_prec()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.add(&self.base, b).expect("series on one grid").truncate(self.cap)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.neg(&self.base)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.mul(&self.base, b).expect("series on one grid").truncate(self.cap)
    }
    fn try_inv(&self, a: &Self::Elem) -> Result<Self::Elem> {
        Ok(a.inverse(&self.base)?.truncate(self.cap))
    }
    fn characteristic(&self) -> u32 {
        self.base.characteristic()
    }
    fn format(&self, a: &Self::Elem) -> String {
        a.format_with(&self.base, "t")
    }
    fn is_one(&self, a: &Self::Elem) -> bool {
        a.terms().len() == 1 && a.terms().get(&0).is_some_and(|c| self.base.is_one(c))
    }
    fn pow(&self, a: &Self::Elem, n: u64) -> Self::Elem {
        a.truncate(self.cap).pow(&self.base, n).expect("series on one grid").truncate(self.cap)
    }
    fn pth_power(&self, a: &Self::Elem) -> Self::Elem {
        a.pth_power(&self.base).truncate(self.cap)
    }
}

impl<R: FqAlgebra> FqAlgebra for SeriesRing<R> {
    fn field(&self) -> &FiniteField {
        self.base.field()
    }
    fn from_fq(&self, c: Fq) -> Self::Elem {
        self.constant(self.base.from_fq(c))
    }
    fn scale(&self, a: &Self::Elem, c: Fq) -> Self::Elem {
        a.scale(&self.base, &self.base.from_fq(c))
    }
}

impl<R: AAlgebra> AAlgebra for SeriesRing<R> {
    fn from_poly(&self, a: &Poly) -> Self::Elem {
        self.constant(self.base.from_poly(a))
    }
}

impl<R: KAlgebra> KAlgebra for SeriesRing<R> {
    fn from_ratfunc(&self, a: &RatFunc) -> Self::Elem {
        self.constant(self.base.from_ratfunc(a))
    }
}
