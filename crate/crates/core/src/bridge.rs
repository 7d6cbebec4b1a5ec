//! Universal polynomials F_k, G_k, H_k relating exponential coefficients,
//! Eisenstein series and Drinfeld coefficients of a lattice.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use crate::algebra::field::{FiniteField, Fq};
use crate::algebra::multipoly::{MultiPoly, MultiPolyRing};
use crate::algebra::poly::{Poly, PolyRing};
use crate::algebra::ratfunc::{RatFunc, RatFuncField};
use crate::algebra::ring::{AAlgebra, FqAlgebra, Ring};
use crate::error::{Error, Result};

/// F_k over A in X_1…X_k, G_k over F_q in Y_1…Y_k, H_k over A in Y_1…Y_k,
/// all stored in rings with `k_max` generators. Index 0 holds k = 1.
#[derive(Clone, Debug)]
pub struct BridgePolynomials {
    pub k_max: usize,
    pub x_ring: MultiPolyRing<PolyRing>,
    pub y_ring_fq: MultiPolyRing<FiniteField>,
    pub y_ring: MultiPolyRing<PolyRing>,
    pub f: Vec<MultiPoly<Poly>>,
    pub g: Vec<MultiPoly<Fq>>,
    pub h: Vec<MultiPoly<Poly>>,
}

/// T^{q^k} − T
pub fn t_qk_minus_t(a: &PolyRing, k: u32) -> Poly {
    let q = a.q() as usize;
    a.sub(&Poly::monomial(Fq::ONE, q.pow(k)), &Poly::t())
}

/// q^j-power Frobenius applied j times.
fn frob_iter<R: FqAlgebra>(r: &R, x: &R::Elem, j: usize) -> R::Elem {
    (0..j).fold(x.clone(), |acc, _| r.frobenius_q(&acc))
}

/// F_k from `(T^{q^k} − T) X_k = F_k + Σ_{j<k} F_j·X_{k−j}^{q^j}`.
pub fn compute_f(field: &FiniteField, k_max: usize) -> (MultiPolyRing<PolyRing>, Vec<MultiPoly<Poly>>) {
    let a = PolyRing::new(field.clone());
    let ring = MultiPolyRing::with_prefix(a.clone(), "X", k_max);
    let mut f: Vec<MultiPoly<Poly>> = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let mut fk = ring.mul(&ring.from_poly(&t_qk_minus_t(&a, k as u32)), &ring.gen(k - 1));
        for j in 1..k {
            let term = ring.mul(&f[j - 1], &frob_iter(&ring, &ring.gen(k - j - 1), j));
            fk = ring.sub(&fk, &term);
        }
        f.push(fk);
    }
    (ring, f)
}

/// G_k from `G_k = Y_k + Σ_{i<k} G_i·Y_{k−i}^{q^i}`.
pub fn compute_g(field: &FiniteField, k_max: usize) -> (MultiPolyRing<FiniteField>, Vec<MultiPoly<Fq>>) {
    let ring = MultiPolyRing::with_prefix(field.clone(), "Y", k_max);
    let mut g: Vec<MultiPoly<Fq>> = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let mut gk = ring.gen(k - 1);
        for i in 1..k {
            let term = ring.mul(&g[i - 1], &frob_iter(&ring, &ring.gen(k - i - 1), i));
            gk = ring.add(&gk, &term);
        }
        g.push(gk);
    }
    (ring, g)
}

/// H_k = F_k(G_1, …, G_k), by direct substitution.
pub fn compute_h(field: &FiniteField, k_max: usize) -> BridgePolynomials {
    let (x_ring, f) = compute_f(field, k_max);
    let (y_ring_fq, g) = compute_g(field, k_max);
    let a = PolyRing::new(field.clone());
    let y_ring = MultiPolyRing::with_prefix(a.clone(), "Y", k_max);
    let g_over_a: Vec<MultiPoly<Poly>> =
        g.iter().map(|gk| y_ring_fq.map_coeffs(&y_ring, gk, |c| Poly::constant(*c))).collect();
    let h = f
        .iter()
        .map(|fk| x_ring.eval_with(&y_ring, fk, |c| y_ring.from_poly(c), &g_over_a))
        .collect();
    BridgePolynomials { k_max, x_ring, y_ring_fq, y_ring, f, g, h }
}

type CacheKey = (u32, Vec<u32>, usize);

fn cache() -> &'static RwLock<HashMap<CacheKey, Arc<BridgePolynomials>>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, Arc<BridgePolynomials>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Cached F/G/H for (F_q, k_max); the first writer wins, readers never block each other.
pub fn bridge(field: &FiniteField, k_max: usize) -> Arc<BridgePolynomials> {
    let key = (field.p(), field.modulus().to_vec(), k_max);
    if let Some(b) = cache().read().unwrap().get(&key) {
        return b.clone();
    }
    let b = Arc::new(compute_h(field, k_max));
    cache().write().unwrap().entry(key).or_insert(b).clone()
}

/// Installs externally loaded polynomials (e.g. from a checksummed file) unless
/// an entry already exists.
pub fn install(field: &FiniteField, b: BridgePolynomials) -> Arc<BridgePolynomials> {
    let key = (field.p(), field.modulus().to_vec(), b.k_max);
    cache().write().unwrap().entry(key).or_insert_with(|| Arc::new(b)).clone()
}

impl BridgePolynomials {
    /// H_k − F_k∘(G_1…G_k), recomputed through the recursion for F with
    /// e_{q^i} := G_i instead of generic substitution.
    pub fn check_composition(&self) -> bool {
        let r = &self.y_ring;
        let a = r.base().clone();
        let g: Vec<MultiPoly<Poly>> =
            self.g.iter().map(|gk| self.y_ring_fq.map_coeffs(r, gk, |c| Poly::constant(*c))).collect();
        let mut hs: Vec<MultiPoly<Poly>> = Vec::new();
        for k in 1..=self.k_max {
            let mut hk = r.mul(&r.from_poly(&t_qk_minus_t(&a, k as u32)), &g[k - 1]);
            for j in 1..k {
                hk = r.sub(&hk, &r.mul(&hs[j - 1], &frob_iter(r, &g[k - j - 1], j)));
            }
            hs.push(hk);
        }
        hs == self.h
    }

    /// Evaluates F_k at concrete e-values in an A-algebra.
    pub fn eval_f<R: AAlgebra>(&self, r: &R, k: usize, e: &[R::Elem]) -> R::Elem {
        let vals = pad(r, e, self.k_max);
        self.x_ring.eval_with(r, &self.f[k - 1], |c| r.from_poly(c), &vals)
    }

    pub fn eval_g<R: FqAlgebra>(&self, r: &R, k: usize, eis: &[R::Elem]) -> R::Elem {
        let vals = pad(r, eis, self.k_max);
        self.y_ring_fq.eval_with(r, &self.g[k - 1], |c| r.from_fq(*c), &vals)
    }

    pub fn eval_h<R: AAlgebra>(&self, r: &R, k: usize, eis: &[R::Elem]) -> R::Elem {
        let vals = pad(r, eis, self.k_max);
        self.y_ring.eval_with(r, &self.h[k - 1], |c| r.from_poly(c), &vals)
    }
}

fn pad<R: Ring>(r: &R, v: &[R::Elem], n: usize) -> Vec<R::Elem> {
    let mut out: Vec<R::Elem> = v.iter().take(n).cloned().collect();
    out.resize(n, r.zero());
    out
}

/// Runs `e_{q^k} = E_{q^k−1} + Σ_{i<k} e_{q^i} E_{q^{k−i}−1}^{q^i}` backwards:
/// given e_q … e_{q^k}, returns E_{q−1} … E_{q^k−1}.
pub fn eisenstein_from_exponential<R: FqAlgebra>(r: &R, e: &[R::Elem]) -> Vec<R::Elem> {
    let mut eis: Vec<R::Elem> = Vec::with_capacity(e.len());
    for k in 1..=e.len() {
        let mut v = e[k - 1].clone();
        for i in 1..k {
            v = r.sub(&v, &r.mul(&e[i - 1], &frob_iter(r, &eis[k - i - 1], i)));
        }
        eis.push(v);
    }
    eis
}

/// Checks `(Σ_i e_{q^i} z^{q^i−1})(Σ_j E_j z^j) = −1` below z^prec.
/// `e[i]` is e_{q^i} (so `e[0]` should be 1), `eis[j]` is E_j (E_0 = −1).
pub fn check_exponential_eisenstein_product<R: FqAlgebra>(r: &R, e: &[R::Elem], eis: &BTreeMap<usize, R::Elem>, prec: usize) -> bool {
    let q = r.field().q() as usize;
    let mut prod = vec![r.zero(); prec];
    let mut qi = 1usize;
    for ei in e {
        let shift = qi - 1;
        if shift >= prec {
            break;
        }
        for (&j, ej) in eis.range(..prec - shift) {
            prod[shift + j] = r.add(&prod[shift + j], &r.mul(ei, ej));
        }
        qi *= q;
    }
    r.is_one(&r.neg(&prod[0])) && prod[1..].iter().all(|c| r.is_zero(c))
}

/// E_j for j < prec from exponential coefficients by inverting the exponential-Eisenstein product.
pub fn eisenstein_series_from_exponential<R: FqAlgebra>(
    r: &R,
    e: &[R::Elem],
    prec: usize,
) -> Result<BTreeMap<usize, R::Elem>> {
    let q = r.field().q() as usize;
    if e.is_empty() || !r.is_one(&e[0]) {
        return Err(Error::InvalidArgument("e_1 must be 1".into()));
    }
    // Σ_j E_j z^j = −1 / Σ_i e_{q^i} z^{q^i − 1}
    let mut ecoef = vec![r.zero(); prec];
    let mut qi = 1usize;
    for ei in e {
        if qi - 1 >= prec {
            break;
        }
        ecoef[qi - 1] = ei.clone();
        qi *= q;
    }
    let mut out: Vec<R::Elem> = vec![r.zero(); prec];
    out[0] = r.neg(&r.one());
    for j in 1..prec {
        let mut acc = r.zero();
        for i in 1..=j {
            if !r.is_zero(&ecoef[i]) {
                acc = r.add(&acc, &r.mul(&ecoef[i], &out[j - i]));
            }
        }
        out[j] = r.neg(&acc);
    }
    Ok(out.into_iter().enumerate().filter(|(_, v)| !r.is_zero(v)).collect())
}

/// Carlitz exponential coefficients `e_{q^k} = 1/∏_{i<k}(T^{q^k} − T^{q^i})` for k ≤ k_max.
pub fn carlitz_exponential(k: &RatFuncField, k_max: usize) -> Vec<RatFunc> {
    let a = k.base();
    let q = a.q() as usize;
    let mut out = vec![k.one()];
    for kk in 1..=k_max {
        let mut d = Poly::one();
        for i in 0..kk {
            let f = a.sub(&Poly::monomial(Fq::ONE, q.pow(kk as u32)), &Poly::monomial(Fq::ONE, q.pow(i as u32)));
            d = a.mul(&d, &f);
        }
        out.push(k.make(Poly::one(), d).unwrap());
    }
    out
}

fn terms_json<E>(f: &MultiPoly<E>, fmt: impl Fn(&E) -> String) -> serde_json::Value {
    f.iter().map(|(e, c)| serde_json::json!([e, fmt(c)])).collect()
}

fn terms_from<E>(v: &serde_json::Value, parse: impl Fn(&str) -> Result<E>) -> Result<Vec<(Vec<u64>, E)>> {
    let bad = || Error::Parse("malformed bridge cache term".into());
    v.as_array()
        .ok_or_else(bad)?
        .iter()
        .map(|t| {
            let e: Vec<u64> = serde_json::from_value(t.get(0).cloned().ok_or_else(bad)?).map_err(|_| bad())?;
            let c = parse(t.get(1).and_then(|c| c.as_str()).ok_or_else(bad)?)?;
            Ok((e, c))
        })
        .collect()
}

impl BridgePolynomials {
    /// Exact text form: every polynomial as a list of `[exponent, coefficient]`.
    pub fn to_json(&self, field: &FiniteField) -> serde_json::Value {
        let a = self.x_ring.base();
        let pf = |c: &Poly| a.format_in(c, "T");
        serde_json::json!({
            "q": field.q(),
            "modulus": field.modulus(),
            "k_max": self.k_max,
            "f": self.f.iter().map(|x| terms_json(x, pf)).collect::<Vec<_>>(),
            "g": self.g.iter().map(|x| terms_json(x, |c| field.format_elem(*c))).collect::<Vec<_>>(),
            "h": self.h.iter().map(|x| terms_json(x, pf)).collect::<Vec<_>>(),
        })
    }

    /// Inverse of [`to_json`](Self::to_json); the field must match.
    pub fn from_json(field: &FiniteField, v: &serde_json::Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("bridge cache: {m}"));
        if v["q"].as_u64() != Some(field.q() as u64) || v["modulus"] != serde_json::json!(field.modulus()) {
            return Err(bad("field mismatch"));
        }
        let k_max = v["k_max"].as_u64().ok_or_else(|| bad("k_max"))? as usize;
        let a = PolyRing::new(field.clone());
        let x_ring = MultiPolyRing::with_prefix(a.clone(), "X", k_max);
        let y_ring_fq = MultiPolyRing::with_prefix(field.clone(), "Y", k_max);
        let y_ring = MultiPolyRing::with_prefix(a, "Y", k_max);
        let list = |key: &str| -> Result<Vec<serde_json::Value>> {
            let l = v[key].as_array().ok_or_else(|| bad(key))?;
            if l.len() != k_max {
                return Err(bad(key));
            }
            Ok(l.clone())
        };
        let pp = |s: &str| crate::algebra::parse::parse_poly(field, s, "T");
        let f = list("f")?.iter().map(|t| Ok(x_ring.from_terms(terms_from(t, pp)?))).collect::<Result<_>>()?;
        let g = list("g")?
            .iter()
            .map(|t| Ok(y_ring_fq.from_terms(terms_from(t, |s| crate::algebra::parse::parse_fq(field, s))?)))
            .collect::<Result<_>>()?;
        let h = list("h")?.iter().map(|t| Ok(y_ring.from_terms(terms_from(t, pp)?))).collect::<Result<_>>()?;
        Ok(BridgePolynomials { k_max, x_ring, y_ring_fq, y_ring, f, g, h })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(q: u64) -> FiniteField {
        FiniteField::with_order(q).unwrap()
    }

    #[test]
    fn low_degree_closed_forms() {
        for q in [2u64, 3] {
            let f = field(q);
            let b = compute_h(&f, 2);
            let a = PolyRing::new(f.clone());
            let x = &b.x_ring;
            let f1 = x.mul(&x.from_poly(&t_qk_minus_t(&a, 1)), &x.gen(0));
            assert_eq!(b.f[0], f1);
            let f2 = x.sub(
                &x.mul(&x.from_poly(&t_qk_minus_t(&a, 2)), &x.gen(1)),
                &x.mul(&x.from_poly(&t_qk_minus_t(&a, 1)), &x.pow(&x.gen(0), q + 1)),
            );
            assert_eq!(b.f[1], f2);
            let y = &b.y_ring_fq;
            assert_eq!(b.g[0], y.gen(0));
            assert_eq!(b.g[1], y.add(&y.gen(1), &y.pow(&y.gen(0), q + 1)));
            let yr = &b.y_ring;
            let h2 = yr.sub(
                &yr.mul(&yr.from_poly(&t_qk_minus_t(&a, 2)), &yr.add(&yr.gen(1), &yr.pow(&yr.gen(0), q + 1))),
                &yr.mul(&yr.from_poly(&t_qk_minus_t(&a, 1)), &yr.pow(&yr.gen(0), q + 1)),
            );
            assert_eq!(b.h[1], h2);
        }
    }

    #[test]
    fn composition_identity() {
        for q in [2u64, 3] {
            assert!(bridge(&field(q), 4).check_composition());
        }
    }

    #[test]
    fn carlitz_consistency() {
        for q in [2u64, 3] {
            let k = RatFuncField::new(field(q));
            let b = bridge(&field(q), 4);
            let e = carlitz_exponential(&k, 4);
            assert!(k.is_one(&b.eval_f(&k, 1, &e[1..])));
            for kk in 2..=4 {
                assert!(k.is_zero(&b.eval_f(&k, kk, &e[1..])));
            }
            let eis = eisenstein_from_exponential(&k, &e[1..]);
            for kk in 1..=4 {
                assert_eq!(b.eval_g(&k, kk, &eis), e[kk]);
            }
            assert!(k.is_one(&b.eval_h(&k, 1, &eis)));
        }
    }

    #[test]
    fn product_identity_detects_perturbation() {
        let k = RatFuncField::new(field(3));
        let e = carlitz_exponential(&k, 3);
        let prec = 27;
        let mut eis = eisenstein_series_from_exponential(&k, &e, prec).unwrap();
        assert!(check_exponential_eisenstein_product(&k, &e, &eis, prec));
        let v = eis.get_mut(&2).unwrap();
        *v = k.add(v, &k.one());
        assert!(!check_exponential_eisenstein_product(&k, &e, &eis, prec));
    }

    #[test]
    fn json_round_trip() {
        for q in [3u64, 4] {
            let f = field(q);
            let b = compute_h(&f, 3);
            let back = BridgePolynomials::from_json(&f, &b.to_json(&f)).unwrap();
            assert_eq!(back.f, b.f);
            assert_eq!(back.g, b.g);
            assert_eq!(back.h, b.h);
            assert!(BridgePolynomials::from_json(&field(2), &b.to_json(&f)).is_err());
        }
    }
}
