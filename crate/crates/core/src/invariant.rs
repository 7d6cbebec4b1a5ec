//! The weighted ring A[u_1, …, u_{r−1}], its G = F_{q^r}^×/F_q^× action and invariants.

use num_rational::Ratio;

use crate::algebra::field::{FiniteField, Fq};
use crate::algebra::multipoly::{Exponent, MultiPoly, MultiPolyRing};
use crate::algebra::poly::Poly;
use crate::algebra::ratfunc::{RatFunc, RatFuncField};
use crate::algebra::ring::{FqAlgebra, Ring};
use crate::error::{Error, Result};

pub type Weight = Ratio<i64>;

/// Polynomials over K in u_1 … u_{r−1}, optionally followed by extra
/// generators of weight zero (such as X).
#[derive(Clone, Debug)]
pub struct WeightedRing {
    q: u64,
    r: u32,
    ring: MultiPolyRing<RatFuncField>,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl WeightedRing {
    pub fn new(field: &FiniteField, r: u32) -> Result<Self> {
        Self::with_extra(field, r, &[])
    }

    pub fn with_extra(field: &FiniteField, r: u32, extra: &[&str]) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidArgument("weighted ring needs r ≥ 2".into()));
        }
        let mut gens: Vec<String> = (1..r).map(|k| format!("u{k}")).collect();
        gens.extend(extra.iter().map(|s| s.to_string()));
        Ok(WeightedRing { q: field.q() as u64, r, ring: MultiPolyRing::new(RatFuncField::new(field.clone()), gens) })
    }

    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn rank(&self) -> u32 {
        self.r
    }
    pub fn ring(&self) -> &MultiPolyRing<RatFuncField> {
        &self.ring
    }
    pub fn field(&self) -> &FiniteField {
        self.ring.field()
    }

    /// u_k for 1 ≤ k ≤ r−1.
    pub fn u(&self, k: u32) -> MultiPoly<RatFunc> {
        assert!(k >= 1 && k < self.r);
        self.ring.gen(k as usize - 1)
    }

    /// Builds a polynomial with coefficients in A.
    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Exponent, Poly)>) -> MultiPoly<RatFunc> {
        self.ring.from_terms(terms.into_iter().map(|(e, c)| (e, RatFunc::from_poly(c))))
    }

    fn unweighted(&self) -> usize {
        self.r as usize - 1
    }

    /// `Σ α_k (q^k − 1)`, the numerator of the weight over q^r − 1.
    pub fn weight_numerator(&self, e: &[u64]) -> u128 {
        e.iter()
            .take(self.unweighted())
            .enumerate()
            .map(|(i, &a)| a as u128 * (self.q as u128).pow(i as u32 + 1).saturating_sub(1))
            .sum()
    }

    pub fn weight_denominator(&self) -> u128 {
        (self.q as u128).pow(self.r) - 1
    }

    pub fn weight(&self, e: &[u64]) -> Weight {
        Ratio::new(self.weight_numerator(e) as i64, self.weight_denominator() as i64)
    }

    pub fn weighted_degree(&self, f: &MultiPoly<RatFunc>) -> Result<Weight> {
        f.terms()
            .keys()
            .map(|e| self.weight(e))
            .max()
            .ok_or_else(|| Error::InvalidArgument("weighted degree of the zero polynomial".into()))
    }

    /// The sub-sum of monomials of maximal weight.
    pub fn weighted_leading_form(&self, f: &MultiPoly<RatFunc>) -> Result<MultiPoly<RatFunc>> {
        let w = self.weighted_degree(f)?;
        Ok(self.ring.filter_terms(f, |e| self.weight(e) == w))
    }

    /// Every monomial weight is an integer.
    pub fn is_invariant(&self, f: &MultiPoly<RatFunc>) -> bool {
        let d = self.weight_denominator();
        f.terms().keys().all(|e| self.weight_numerator(e) % d == 0)
    }

    /// j_k = u_k^{(q^r−1)/(q^{gcd(k,r)}−1)}.
    pub fn jk_invariant(&self, k: u32) -> Result<MultiPoly<RatFunc>> {
        if k < 1 || k >= self.r {
            return Err(Error::InvalidArgument(format!("j_k needs 1 ≤ k ≤ {}", self.r - 1)));
        }
        let g = gcd(k, self.r);
        let e = (self.weight_denominator() / ((self.q as u128).pow(g) - 1)) as u64;
        let mut ex = vec![0; self.ring.arity()];
        ex[k as usize - 1] = e;
        Ok(self.ring.monomial(self.ring.base().one(), ex))
    }

    /// The field F_{q^r} with the embedding image of the generator of F_q.
    pub fn action_field(&self) -> Result<(FiniteField, Fq)> {
        let f = self.field();
        let big = FiniteField::new(f.p(), f.e() * self.r, None)?;
        let g = big.embedding_of(f)?;
        Ok((big, g))
    }

    /// The ring of the same shape over F_{q^r}(T), where the action lives.
    pub fn extended(&self) -> Result<(MultiPolyRing<RatFuncField>, FiniteField, Fq)> {
        let (big, g) = self.action_field()?;
        Ok((MultiPolyRing::new(RatFuncField::new(big.clone()), self.ring.gens().to_vec()), big, g))
    }

    fn embed_ratfunc(&self, big: &FiniteField, gimg: Fq, k: &RatFuncField, x: &RatFunc) -> RatFunc {
        let small = self.field();
        let emb = |p: &Poly| Poly::from_coeffs(p.coeffs().iter().map(|&c| big.embed(small, gimg, c)).collect());
        k.make(emb(x.num()), emb(x.den())).expect("nonzero denominator")
    }

    /// Scalar extension of f to F_{q^r}(T).
    pub fn embed(&self, f: &MultiPoly<RatFunc>) -> Result<(MultiPolyRing<RatFuncField>, MultiPoly<RatFunc>)> {
        let (er, big, g) = self.extended()?;
        let k = er.base().clone();
        let out = self.ring.map_coeffs(&er, f, |c| self.embed_ratfunc(&big, g, &k, c));
        Ok((er, out))
    }

    /// u^α ↦ β^{Σ α_k (q^k−1)} u^α, for β ∈ F_{q^r}^×.
    pub fn g_action(
        &self,
        f: &MultiPoly<RatFunc>,
        beta: Fq,
    ) -> Result<(MultiPolyRing<RatFuncField>, MultiPoly<RatFunc>)> {
        let (er, big, g) = self.extended()?;
        if beta == Fq::ZERO || beta.0 >= big.q() {
            return Err(Error::InvalidArgument("β must be a nonzero element of F_{q^r}".into()));
        }
        let k = er.base().clone();
        let order = (big.q() - 1) as u128;
        let out = er.from_terms(f.terms().iter().map(|(e, c)| {
            let s = big.fpow(beta, (self.weight_numerator(e) % order) as u64);
            (e.clone(), k.scale(&self.embed_ratfunc(&big, g, &k, c), s))
        }));
        Ok((er, out))
    }

    /// Invariance by the action of a generator of F_{q^r}^×.
    pub fn fixed_by_generator(&self, f: &MultiPoly<RatFunc>) -> Result<bool> {
        let (big, _) = self.action_field()?;
        let beta = big.primitive_element();
        let (_, acted) = self.g_action(f, beta)?;
        let (_, emb) = self.embed(f)?;
        Ok(acted == emb)
    }

    pub fn format(&self, f: &MultiPoly<RatFunc>) -> String {
        self.ring.format(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn wr(q: u64, r: u32) -> WeightedRing {
        WeightedRing::new(&FiniteField::with_order(q).unwrap(), r).unwrap()
    }

    fn mono(w: &WeightedRing, e: Vec<u64>) -> MultiPoly<RatFunc> {
        w.from_terms([(e, Poly::one())])
    }

    #[test]
    fn weights() {
        for q in [2u64, 3, 4] {
            let w = wr(q, 2);
            let j = w.jk_invariant(1).unwrap();
            assert_eq!(j, mono(&w, vec![q + 1]));
            assert_eq!(w.weighted_degree(&j).unwrap(), Ratio::from_integer(1));
            assert!(w.is_invariant(&j));
            assert!(!w.is_invariant(&w.u(1)));
        }
        let w = wr(2, 3);
        assert_eq!(w.weighted_degree(&mono(&w, vec![0, 7])).unwrap(), Ratio::from_integer(3));
        assert_eq!(w.weighted_degree(&w.ring().one()).unwrap(), Ratio::from_integer(0));
        assert!(!w.is_invariant(&mono(&w, vec![1, 1])));
        assert_eq!(w.jk_invariant(1).unwrap(), mono(&w, vec![7, 0]));
        assert!(w.weighted_degree(&w.ring().zero()).is_err());
        assert_eq!(wr(2, 4).jk_invariant(2).unwrap(), mono(&wr(2, 4), vec![0, 5, 0]));
        assert!(w.jk_invariant(3).is_err());
    }

    #[test]
    fn leading_forms() {
        let w = wr(3, 2);
        let f = w.ring().add(&mono(&w, vec![4]), &w.u(1));
        assert_eq!(w.weighted_leading_form(&f).unwrap(), mono(&w, vec![4]));
        let w = wr(2, 3);
        let f = w.ring().add(&mono(&w, vec![3, 0]), &mono(&w, vec![0, 1]));
        assert_eq!(w.weighted_leading_form(&f).unwrap(), f);
    }

    #[test]
    fn action_examples() {
        let w = wr(3, 2);
        let (big, _) = w.action_field().unwrap();
        let beta = big.primitive_element();
        let u = w.u(1);
        let (_, acted) = w.g_action(&u, beta).unwrap();
        let (_, emb) = w.embed(&u).unwrap();
        assert_ne!(acted, emb);
        assert!(w.fixed_by_generator(&w.jk_invariant(1).unwrap()).unwrap());
        // elements of F_q^× act trivially
        let two = big.from_int(2);
        let (_, acted2) = w.g_action(&u, two).unwrap();
        assert_eq!(acted2, emb);
        assert!(w.g_action(&u, Fq::ZERO).is_err());
    }

    fn arb(w: WeightedRing) -> impl Strategy<Value = MultiPoly<RatFunc>> {
        let arity = w.ring().arity();
        prop::collection::vec((prop::collection::vec(0u64..6, arity), 1u32..2), 1..4)
            .prop_map(move |ts| w.from_terms(ts.into_iter().map(|(e, c)| (e, Poly::constant(Fq(c))))))
    }

    proptest! {
        #[test]
        fn invariance_matches_action_r2(f in arb(wr(3, 2))) {
            let w = wr(3, 2);
            prop_assert_eq!(w.is_invariant(&f), w.fixed_by_generator(&f).unwrap());
        }

        #[test]
        fn invariance_matches_action_r3(f in arb(wr(2, 3)), g in arb(wr(2, 3))) {
            let w = wr(2, 3);
            prop_assume!(!w.ring().is_zero(&f) && !w.ring().is_zero(&g));
            prop_assert_eq!(w.is_invariant(&f), w.fixed_by_generator(&f).unwrap());
            if w.is_invariant(&f) && w.is_invariant(&g) {
                prop_assert!(w.is_invariant(&w.ring().mul(&f, &g)));
                prop_assert!(w.is_invariant(&w.ring().add(&f, &g)));
            }
            let fg = w.ring().mul(&f, &g);
            let lf = w.ring().mul(&w.weighted_leading_form(&f).unwrap(), &w.weighted_leading_form(&g).unwrap());
            if !w.ring().is_zero(&lf) {
                prop_assert_eq!(w.weighted_degree(&fg).unwrap(),
                                w.weighted_degree(&f).unwrap() + w.weighted_degree(&g).unwrap());
            }
        }

        #[test]
        fn monomial_invariance_iff_integral_weight(a in 0u64..20, b in 0u64..20) {
            let w = wr(2, 3);
            let m = mono(&w, vec![a, b]);
            prop_assert_eq!(w.is_invariant(&m), w.weighted_degree(&m).unwrap().is_integer());
        }
    }
}
