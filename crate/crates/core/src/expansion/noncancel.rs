//! Order of `f(v_1, …, v_{r−1})` for series `v_k = a_k s^{−c(q^k−1)/(q^r−1)}(1 + b_k s + …)`
//! against the weighted degree of f.

use rand::Rng;

use crate::algebra::multipoly::{MultiPoly, MultiPolyRing};
use crate::algebra::poly::Poly;
use crate::algebra::ratfunc::{RatFunc, RatFuncField};
use crate::algebra::ring::{KAlgebra, Ring};
use crate::algebra::series::FracLaurentSeries;
use crate::algebra::series_ring::SeriesRing;
use crate::error::{Error, Result};
use crate::invariant::WeightedRing;

/// What substituting the model series into f produced.
#[derive(Clone, Debug)]
pub struct NonCancellation {
    /// Grid denominator q^r − 1.
    pub denom: i64,
    pub order_num: i64,
    /// `−c·w(f)` times the grid denominator.
    pub predicted_num: i64,
    /// Weighted leading form of f evaluated at the leading symbols.
    pub leading_form_value: MultiPoly<RatFunc>,
    /// Coefficient of the result at the predicted exponent.
    pub coefficient_at_prediction: MultiPoly<RatFunc>,
}

impl NonCancellation {
    /// The order is the predicted one and the coefficient there is the leading form value.
    pub fn consistent(&self) -> bool {
        let ring_zero = self.leading_form_value.is_empty();
        if ring_zero {
            self.order_num > self.predicted_num && self.coefficient_at_prediction.is_empty()
        } else {
            self.order_num == self.predicted_num && self.coefficient_at_prediction == self.leading_form_value
        }
    }
}

/// Substitutes `v_k` into f; the leading symbols a_k are free generators
/// unless `specialise` gives values for them in K. The subleading symbols b_k
/// stay free.
pub fn substitute_model(
    w: &WeightedRing,
    f: &MultiPoly<RatFunc>,
    c: i64,
    specialise: Option<&[RatFunc]>,
) -> Result<NonCancellation> {
    if c <= 0 {
        return Err(Error::InvalidArgument("order scale c must be positive".into()));
    }
    let deg = w.weighted_degree(f)?;
    let m = w.rank() as usize - 1;
    let q = w.q() as i64;
    let d = w.weight_denominator() as i64;
    let k = RatFuncField::new(w.field().clone());
    let mut gens: Vec<String> = (1..=m).map(|i| format!("a{i}")).collect();
    gens.extend((1..=m).map(|i| format!("b{i}")));
    let sym = MultiPolyRing::new(k.clone(), gens);
    let lead: Vec<MultiPoly<RatFunc>> = match specialise {
        Some(v) if v.len() == m => v.iter().map(|x| sym.from_ratfunc(x)).collect(),
        Some(_) => return Err(Error::InvalidArgument(format!("need {m} specialised values"))),
        None => (0..m).map(|i| sym.gen(i)).collect(),
    };
    let predicted_num = -c * (deg * d).to_integer();
    let cap = d * 2;
    let sr = SeriesRing::new(sym.clone(), d, cap);
    let vs: Vec<FracLaurentSeries<MultiPoly<RatFunc>>> = (0..m)
        .map(|i| {
            let o = -c * (q.pow(i as u32 + 1) - 1);
            let bk = sym.mul(&lead[i], &sym.gen(m + i));
            FracLaurentSeries::from_terms(&sym, d, [(o, lead[i].clone()), (o + d, bk)], o + 2 * d)
        })
        .collect();
    let wf = w.ring();
    let val = wf.eval_with(&sr, f, |x| sr.from_ratfunc(x), &vs);
    if val.prec_num() <= predicted_num {
        return Err(Error::PrecisionShortfall("substitution not known at the predicted order".into()));
    }
    let lf = w.weighted_leading_form(f)?;
    let leading_form_value = wf.eval_with(&sym, &lf, |x| sym.from_ratfunc(x), &lead);
    Ok(NonCancellation {
        denom: d,
        order_num: val.ord_num(),
        predicted_num,
        leading_form_value,
        coefficient_at_prediction: val.coeff(&sym, predicted_num)?,
    })
}

/// A nonzero polynomial in u_1… with `terms` random monomials of exponent at
/// most `max_exp` and coefficients of degree ≤ 1 in T.
pub fn random_weighted_poly(w: &WeightedRing, rng: &mut impl Rng, terms: usize, max_exp: u64) -> MultiPoly<RatFunc> {
    let m = w.rank() as usize - 1;
    let q = w.q() as u32;
    loop {
        let f = w.from_terms((0..terms).map(|_| {
            let e: Vec<u64> = (0..m).map(|_| rng.gen_range(0..=max_exp)).collect();
            let c: Vec<_> = (0..2).map(|_| w.field().from_int(rng.gen_range(0..q) as i64)).collect();
            (e, Poly::from_coeffs(c))
        }));
        if !f.is_empty() {
            return f;
        }
    }
}
