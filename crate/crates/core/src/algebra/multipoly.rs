use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::field::{FiniteField, Fq};
use crate::algebra::poly::Poly;
use crate::algebra::ratfunc::RatFunc;
use crate::algebra::ring::{pow_by_digits, AAlgebra, FqAlgebra, KAlgebra, Ring};
use crate::error::{Error, Result};

pub type Exponent = Vec<u64>;

/// A sparse multivariate polynomial; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly<E> {
    terms: BTreeMap<Exponent, E>,
}

impl<E> MultiPoly<E> {
    pub fn terms(&self) -> &BTreeMap<Exponent, E> {
        &self.terms
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn iter(&self) -> impl Iterator<Item = (&Exponent, &E)> {
        self.terms.iter()
    }
}

/// Polynomial ring R[X_1, …, X_m] over a commutative coefficient ring.
#[derive(Clone, Debug)]
pub struct MultiPolyRing<R: Ring> {
    base: R,
    gens: Arc<Vec<String>>,
}

fn checked_add_exp(a: &[u64], b: &[u64]) -> Exponent {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.checked_add(*y).expect("exponent overflow"))
        .collect()
}

impl<R: Ring> MultiPolyRing<R> {
    pub fn new(base: R, gens: Vec<String>) -> Self {
        MultiPolyRing { base, gens: Arc::new(gens) }
    }

    /// Generators named `prefix1 … prefixm`.
    pub fn with_prefix(base: R, prefix: &str, m: usize) -> Self {
        Self::new(base, (1..=m).map(|i| format!("{prefix}{i}")).collect())
    }

    pub fn base(&self) -> &R {
        &self.base
    }
    pub fn gens(&self) -> &[String] {
        &self.gens
    }
    pub fn arity(&self) -> usize {
        self.gens.len()
    }

    pub fn from_terms(&self, it: impl IntoIterator<Item = (Exponent, R::Elem)>) -> MultiPoly<R::Elem> {
        let mut terms: BTreeMap<Exponent, R::Elem> = BTreeMap::new();
        for (e, c) in it {
            assert_eq!(e.len(), self.arity(), "exponent arity");
            Self::accumulate(&self.base, &mut terms, e, c);
        }
        MultiPoly { terms }
    }

    fn accumulate(base: &R, terms: &mut BTreeMap<Exponent, R::Elem>, e: Exponent, c: R::Elem) {
        if base.is_zero(&c) {
            return;
        }
        match terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = base.add(o.get(), &c);
                if base.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn constant(&self, c: R::Elem) -> MultiPoly<R::Elem> {
        self.from_terms([(vec![0; self.arity()], c)])
    }

    pub fn monomial(&self, c: R::Elem, e: Exponent) -> MultiPoly<R::Elem> {
        self.from_terms([(e, c)])
    }

    /// The i-th generator (0-based).
    pub fn gen(&self, i: usize) -> MultiPoly<R::Elem> {
        let mut e = vec![0; self.arity()];
        e[i] = 1;
        self.monomial(self.base.one(), e)
    }

    pub fn coeff(&self, f: &MultiPoly<R::Elem>, e: &[u64]) -> R::Elem {
        f.terms.get(e).cloned().unwrap_or_else(|| self.base.zero())
    }

    /// The constant term.
    pub fn constant_term(&self, f: &MultiPoly<R::Elem>) -> R::Elem {
        self.coeff(f, &vec![0; self.arity()])
    }

    pub fn total_degree(&self, f: &MultiPoly<R::Elem>) -> Option<u64> {
        f.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn map_coeffs<S: Ring>(
        &self,
        target: &MultiPolyRing<S>,
        f: &MultiPoly<R::Elem>,
        map: impl Fn(&R::Elem) -> S::Elem,
    ) -> MultiPoly<S::Elem> {
        target.from_terms(f.terms.iter().map(|(e, c)| (e.clone(), map(c))))
    }

    /// Keeps the terms accepted by the predicate.
    pub fn filter_terms(
        &self,
        f: &MultiPoly<R::Elem>,
        keep: impl Fn(&Exponent) -> bool,
    ) -> MultiPoly<R::Elem> {
        MultiPoly {
            terms: f.terms.iter().filter(|(e, _)| keep(e)).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    /// Evaluates at `values` in an algebra S, mapping coefficients by `coef`.
    pub fn eval_with<S: Ring>(
        &self,
        target: &S,
        f: &MultiPoly<R::Elem>,
        coef: impl Fn(&R::Elem) -> S::Elem,
        values: &[S::Elem],
    ) -> S::Elem {
        assert_eq!(values.len(), self.arity());
        let mut cache: Vec<BTreeMap<u64, S::Elem>> = vec![BTreeMap::new(); self.arity()];
        let mut acc = target.zero();
        for (e, c) in &f.terms {
            let mut m = coef(c);
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let pw = cache[i]
                    .entry(k)
                    .or_insert_with(|| target.pow(&values[i], k))
                    .clone();
                m = target.mul(&m, &pw);
            }
            acc = target.add(&acc, &m);
        }
        acc
    }

    /// Substitutes polynomials of another ring over the same coefficients.
    pub fn substitute(
        &self,
        target: &MultiPolyRing<R>,
        f: &MultiPoly<R::Elem>,
        values: &[MultiPoly<R::Elem>],
    ) -> MultiPoly<R::Elem> {
        self.eval_with(target, f, |c| target.constant(c.clone()), values)
    }

    fn format_term(&self, e: &Exponent) -> String {
        e.iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(i, &k)| {
                if k == 1 {
                    self.gens[i].clone()
                } else {
                    format!("{}^{k}", self.gens[i])
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Terms in canonical order: descending total degree, then descending exponent vector.
    pub fn sorted_terms<'a>(&self, f: &'a MultiPoly<R::Elem>) -> Vec<(&'a Exponent, &'a R::Elem)> {
        let mut v: Vec<_> = f.terms.iter().collect();
        v.sort_by(|a, b| {
            let da: u64 = a.0.iter().sum();
            let db: u64 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        v
    }
}

impl<R: Ring> Ring for MultiPolyRing<R> {
    type Elem = MultiPoly<R::Elem>;

    fn zero(&self) -> Self::Elem {
        MultiPoly { terms: BTreeMap::new() }
    }
    fn one(&self) -> Self::Elem {
        self.constant(self.base.one())
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.terms.is_empty()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let mut terms = a.terms.clone();
        for (e, c) in &b.terms {
            Self::accumulate(&self.base, &mut terms, e.clone(), c.clone());
        }
        MultiPoly { terms }
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        MultiPoly { terms: a.terms.iter().map(|(e, c)| (e.clone(), self.base.neg(c))).collect() }
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let mut terms = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                Self::accumulate(&self.base, &mut terms, checked_add_exp(ea, eb), self.base.mul(ca, cb));
            }
        }
        MultiPoly { terms }
    }
    fn try_inv(&self, a: &Self::Elem) -> Result<Self::Elem> {
        if a.terms.is_empty() {
            return Err(Error::DivisionByZero);
        }
        let zero = vec![0; self.arity()];
        if a.terms.len() == 1 {
            if let Some(c) = a.terms.get(&zero) {
                return Ok(self.constant(self.base.try_inv(c)?));
            }
        }
        Err(Error::ZeroDivisor("non-constant multivariate polynomial".into()))
    }
    fn characteristic(&self) -> u32 {
        self.base.characteristic()
    }
    fn format(&self, a: &Self::Elem) -> String {
        if a.terms.is_empty() {
            return "0".into();
        }
        self.sorted_terms(a)
            .into_iter()
            .map(|(e, c)| {
                let mono = self.format_term(e);
                let cs = self.base.format(c);
                if mono.is_empty() {
                    cs
                } else if self.base.is_one(c) {
                    mono
                } else if cs.contains('+') || cs.contains('/') {
                    format!("({cs})*{mono}")
                } else {
                    format!("{cs}*{mono}")
                }
            })
            .collect::<Vec<_>>()
            .join("+")
    }
    fn pow(&self, a: &Self::Elem, n: u64) -> Self::Elem {
        pow_by_digits(self, a, n)
    }
    /// Frobenius is additive in characteristic p, so it acts termwise.
    fn pth_power(&self, a: &Self::Elem) -> Self::Elem {
        let p = self.characteristic() as u64;
        MultiPoly {
            terms: a
                .terms
                .iter()
                .map(|(e, c)| {
                    (
                        e.iter().map(|k| k.checked_mul(p).expect("exponent overflow")).collect(),
                        self.base.pth_power(c),
                    )
                })
                .filter(|(_, c)| !self.base.is_zero(c))
                .collect(),
        }
    }
}

impl<R: FqAlgebra> FqAlgebra for MultiPolyRing<R> {
    fn field(&self) -> &FiniteField {
        self.base.field()
    }
    fn from_fq(&self, c: Fq) -> Self::Elem {
        self.constant(self.base.from_fq(c))
    }
    fn scale(&self, a: &Self::Elem, c: Fq) -> Self::Elem {
        self.from_terms(a.terms.iter().map(|(e, x)| (e.clone(), self.base.scale(x, c))))
    }
}

impl<R: AAlgebra> AAlgebra for MultiPolyRing<R> {
    fn from_poly(&self, a: &Poly) -> Self::Elem {
        self.constant(self.base.from_poly(a))
    }
}

impl<R: KAlgebra> KAlgebra for MultiPolyRing<R> {
    fn from_ratfunc(&self, a: &RatFunc) -> Self::Elem {
        self.constant(self.base.from_ratfunc(a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::PolyRing;
    use proptest::prelude::*;

    fn ring() -> MultiPolyRing<PolyRing> {
        MultiPolyRing::with_prefix(PolyRing::new(FiniteField::with_order(3).unwrap()), "X", 2)
    }

    fn arb(r: &MultiPolyRing<PolyRing>) -> impl Strategy<Value = MultiPoly<Poly>> {
        let r = r.clone();
        prop::collection::vec(((0u64..3, 0u64..3), prop::collection::vec(0u32..3, 0..3)), 0..4)
            .prop_map(move |ts| {
                r.from_terms(ts.into_iter().map(|((a, b), c)| {
                    (vec![a, b], Poly::from_coeffs(c.into_iter().map(Fq).collect()))
                }))
            })
    }

    #[test]
    fn format_canonical() {
        let r = ring();
        let x = r.gen(0);
        let y = r.gen(1);
        let f = r.add(&r.mul(&r.mul(&x, &x), &y), &r.from_poly(&Poly::t()));
        assert_eq!(r.format(&f), "X1^2*X2+T");
        assert_eq!(r.format(&r.sub(&x, &x)), "0");
    }

    proptest! {
        #[test]
        fn axioms_and_frobenius(a in arb(&ring()), b in arb(&ring()), c in arb(&ring())) {
            let r = ring();
            prop_assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
            prop_assert_eq!(r.mul(&a, &r.add(&b, &c)), r.add(&r.mul(&a, &b), &r.mul(&a, &c)));
            prop_assert_eq!(r.pth_power(&a), r.mul(&a, &r.mul(&a, &a)));
        }
    }
}
