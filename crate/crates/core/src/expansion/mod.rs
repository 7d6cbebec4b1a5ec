//! Expansions of rank-r lattice invariants at the cusp, in the parameter
//! `t = q_{Λ_{r−1}}(z_r) = 1/e_{Λ_{r−1}}(z_r)` over a rank-(r−1) lattice with Δ = 1.

pub mod noncancel;
pub mod sublattice;

use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::field::{FiniteField, Fq};
use crate::algebra::multipoly::MultiPolyRing;
use crate::algebra::poly::{Poly, PolyRing};
use crate::algebra::ratfunc::{RatFunc, RatFuncField};
use crate::algebra::ring::{KAlgebra, Ring};
use crate::algebra::series::FracLaurentSeries;
use crate::algebra::series_ring::SeriesRing;
use crate::bridge::{bridge, eisenstein_from_exponential, t_qk_minus_t, BridgePolynomials};
use crate::error::{Error, Result};
use crate::tau::DrinfeldModule;

pub type Series<E> = FracLaurentSeries<E>;

/// Everything needed to expand invariants of `Λ_r = Λ_{r−1} ⊕ A z_r`.
///
/// The coefficient ring is concrete for r = 2 (K, with the Carlitz module as
/// lower lattice) and a polynomial ring in the free generators
/// e_q, …, e_{q^{r−2}} of Λ_{r−1} otherwise.
#[derive(Clone, Debug)]
pub struct ExpansionContext<R: KAlgebra> {
    field: FiniteField,
    a: PolyRing,
    q: u64,
    r: usize,
    ring: R,
    lower: DrinfeldModule<R>,
    /// g_1 … g_r of Λ_{r−1}: g_{r−1} = Δ = 1 and g_r = 0.
    g_lower: Vec<R::Elem>,
    /// e_{q^0} … e_{q^r} of Λ_{r−1}.
    e: Vec<R::Elem>,
    /// E_{q−1} … E_{q^r−1} of Λ_{r−1}.
    eis_lower: Vec<R::Elem>,
    prec: i64,
    bridge: Arc<BridgePolynomials>,
}

impl ExpansionContext<RatFuncField> {
    /// Rank 2 over the Carlitz lattice; coefficients in K.
    pub fn rank2(field: &FiniteField, prec: i64) -> Result<Self> {
        let k = RatFuncField::new(field.clone());
        Self::new(k, 2, Vec::new(), prec)
    }
}

impl ExpansionContext<MultiPolyRing<RatFuncField>> {
    /// Rank r with the lower lattice left symbolic: generators `e1 … e{r−2}`
    /// stand for e_q … e_{q^{r−2}} of Λ_{r−1}.
    pub fn symbolic(field: &FiniteField, r: usize, prec: i64) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidArgument("expansions need rank r >= 2".into()));
        }
        let k = RatFuncField::new(field.clone());
        let ring = MultiPolyRing::with_prefix(k, "e", r - 2);
        let free = (0..r - 2).map(|i| ring.gen(i)).collect();
        Self::new(ring, r, free, prec)
    }
}

fn frob_pow<R: KAlgebra>(r: &R, x: &R::Elem, j: usize) -> R::Elem {
    let mut y = x.clone();
    for _ in 0..j {
        y = r.frobenius_q(&y);
    }
    y
}

impl<R: KAlgebra> ExpansionContext<R> {
    /// `free` holds the values of e_q … e_{q^{r−2}} of the lower lattice in
    /// `ring`; everything else about Λ_{r−1} follows from Δ(Λ_{r−1}) = 1.
    pub fn new(ring: R, r: usize, free: Vec<R::Elem>, prec: i64) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidArgument("expansions need rank r >= 2".into()));
        }
        if free.len() != r - 2 {
            return Err(Error::InvalidArgument(format!("rank {r} needs {} free generators", r - 2)));
        }
        let field = ring.field().clone();
        let a = PolyRing::new(field.clone());
        let q = field.q() as u64;
        let b = bridge(&field, r);
        let mut e = vec![ring.one()];
        e.extend(free);
        let mut g_lower: Vec<R::Elem> = (1..=r - 2).map(|j| b.eval_f(&ring, j, &e[1..=j])).collect();
        g_lower.push(ring.one());
        g_lower.push(ring.zero());
        let mut ctx = ExpansionContext {
            field,
            a,
            q,
            r,
            ring: ring.clone(),
            lower: DrinfeldModule::new(ring.clone(), g_lower[..r - 2].to_vec(), ring.one())?,
            g_lower,
            e,
            eis_lower: Vec::new(),
            prec,
            bridge: b,
        };
        ctx.extend_exponential(r);
        ctx.eis_lower = eisenstein_from_exponential(&ctx.ring, &ctx.e[1..=r]);
        Ok(ctx)
    }

    /// Same context at another precision.
    pub fn with_prec(&self, prec: i64) -> Self {
        let mut c = self.clone();
        c.prec = prec;
        c
    }

    /// Extends e_{q^k} of Λ_{r−1} up to k = jmax through
    /// `(T^{q^k} − T) e_{q^k} = g_k + Σ_{0<j<k} g_j e_{q^{k−j}}^{q^j}`.
    fn extend_exponential(&mut self, jmax: usize) {
        let r = &self.ring;
        while self.e.len() <= jmax {
            let k = self.e.len();
            let g = |j: usize| self.g_lower.get(j - 1).cloned().unwrap_or_else(|| r.zero());
            let mut acc = g(k);
            for j in 1..k {
                let gj = g(j);
                if !r.is_zero(&gj) {
                    acc = r.add(&acc, &r.mul(&gj, &frob_pow(r, &self.e[k - j], j)));
                }
            }
            let d = t_qk_minus_t(&self.a, k as u32);
            let inv = RatFuncField::new(self.field.clone()).make(Poly::one(), d).expect("T^{q^k} - T is nonzero");
            self.e.push(r.mul(&acc, &r.from_ratfunc(&inv)));
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn rank(&self) -> usize {
        self.r
    }
    pub fn prec(&self) -> i64 {
        self.prec
    }
    pub fn ring(&self) -> &R {
        &self.ring
    }
    pub fn field(&self) -> &FiniteField {
        &self.field
    }
    pub fn poly_ring(&self) -> &PolyRing {
        &self.a
    }
    pub fn lower_module(&self) -> &DrinfeldModule<R> {
        &self.lower
    }
    /// g_k(Λ_{r−1}) for 1 ≤ k ≤ r.
    pub fn lower_g(&self, k: usize) -> &R::Elem {
        &self.g_lower[k - 1]
    }
    /// e_{q^j}(Λ_{r−1}) for 0 ≤ j ≤ r.
    pub fn lower_e(&self, j: usize) -> &R::Elem {
        &self.e[j]
    }
    /// E_{q^m−1}(Λ_{r−1}) for 1 ≤ m ≤ r.
    pub fn lower_eisenstein(&self, m: usize) -> &R::Elem {
        &self.eis_lower[m - 1]
    }
    pub fn series_ring(&self, denom: i64, cap: i64) -> SeriesRing<R> {
        SeriesRing::new(self.ring.clone(), denom, cap)
    }

    /// P_0 … P_imax, each dense in t (low degree first), from
    /// `A_i = t·A_{i−1} + t·Σ_{q^j ≤ i} e_{q^j} A_{i−q^j}`.
    pub fn a_polys(&self, imax: usize) -> Vec<Vec<R::Elem>> {
        let r = &self.ring;
        let mut jmax = 0;
        while (self.q as usize).pow(jmax as u32 + 1) <= imax {
            jmax += 1;
        }
        let mut me = self.clone();
        me.extend_exponential(jmax);
        let mut out: Vec<Vec<R::Elem>> = vec![vec![r.one()]];
        for i in 1..=imax {
            let mut inner = out[i - 1].clone();
            let mut qj = self.q as usize;
            let mut j = 1;
            while qj <= i {
                let prev = &out[i - qj];
                if inner.len() < prev.len() {
                    inner.resize(prev.len(), r.zero());
                }
                for (c, p) in inner.iter_mut().zip(prev) {
                    *c = r.add(c, &r.mul(&me.e[j], p));
                }
                qj *= self.q as usize;
                j += 1;
            }
            let mut next = vec![r.zero()];
            next.extend(inner);
            out.push(next);
        }
        out
    }

    pub fn a_poly(&self, i: usize) -> Vec<R::Elem> {
        self.a_polys(i).pop().unwrap()
    }

    /// `Σ_λ (z_r + λ)^{−(i+1)} = t·P_i(t)`, exact and reported to the context precision.
    pub fn power_sum(&self, i: usize) -> Series<R::Elem> {
        let p = self.a_poly(i);
        let terms = p.into_iter().enumerate().map(|(k, c)| (k as i64 + 1, c));
        Series::from_terms(&self.ring, 1, terms, self.prec)
    }

    /// `ρ_a(1/t)` as a Laurent polynomial, kept below `prec`.
    pub fn rho_at_pole(&self, a: &Poly, prec: i64) -> Result<Series<R::Elem>> {
        let f = self.lower.phi(a)?;
        let q = self.q as i64;
        let terms = f.coeffs().iter().enumerate().map(|(i, c)| (-q.pow(i as u32), c.clone()));
        Ok(Series::from_terms(&self.ring, 1, terms, prec))
    }

    /// `q(a z_r) = 1/ρ_a(1/t)` to absolute precision `prec`; order q^{(r−1)deg a},
    /// leading coefficient l(a)^{−1}.
    pub fn q_scaled_to(&self, a: &Poly, prec: i64) -> Result<Series<R::Elem>> {
        let d = a.degree().ok_or_else(|| Error::InvalidArgument("q(az) needs a != 0".into()))?;
        let n = order_of_q_scaled(self.q, self.r, d)?;
        if prec <= n {
            return Ok(Series::zero(1, prec));
        }
        self.rho_at_pole(a, prec - 2 * n)?.inverse(&self.ring)
    }

    pub fn q_scaled(&self, a: &Poly) -> Result<Series<R::Elem>> {
        self.q_scaled_to(a, self.prec)
    }

    /// Monic a whose q(az) can matter below the context precision.
    fn contributing_monics(&self) -> Vec<Poly> {
        let mut out = Vec::new();
        let mut d = 0;
        while let Ok(n) = order_of_q_scaled(self.q, self.r, d) {
            if n > self.prec {
                break;
            }
            out.extend(self.a.monic_of_degree(d));
            d += 1;
        }
        out
    }

    /// `E_{q^m−1}(Λ_r) = E_{q^m−1}(Λ_{r−1}) + Σ_{a≠0} q(az) P_{q^m−2}(q(az))`.
    ///
    /// Each a is paired with its multiples εa: q(εaz) = ε^{−1}q(az), so the
    /// ε-sum keeps the powers q(az)^j with (q−1) | j, times −1.
    pub fn eisenstein(&self, m: usize) -> Result<Series<R::Elem>> {
        if m == 0 || m > self.r {
            return Err(Error::InvalidArgument(format!("Eisenstein index q^{m}-1 outside 1..=r")));
        }
        let r = &self.ring;
        let k = (self.q as usize).pow(m as u32) - 1;
        let p = self.a_poly(k - 1);
        let prec = self.prec;
        let step = (self.q - 1) as usize;
        let parts: Vec<Series<R::Elem>> = self
            .contributing_monics()
            .par_iter()
            .map(|a| -> Result<Series<R::Elem>> {
                let qa = self.q_scaled(a)?;
                let mut acc = Series::zero(1, prec);
                if qa.is_zero_to_prec() {
                    return Ok(acc);
                }
                let n = qa.ord_num();
                let mut pw = qa.clone();
                for j in 1..=k {
                    if j as i64 * n >= prec {
                        break;
                    }
                    if j % step == 0 && !r.is_zero(&p[j - 1]) {
                        acc = acc.add(r, &pw.scale(r, &p[j - 1]))?;
                    }
                    pw = pw.mul(r, &qa)?.truncate(prec);
                }
                Ok(acc)
            })
            .collect::<Result<_>>()?;
        let mut sum = Series::zero(1, prec);
        for s in parts {
            sum = sum.add(r, &s)?;
        }
        let c = Series::monomial(r, self.eis_lower[m - 1].clone(), 0, 1, prec);
        c.sub(r, &sum)
    }

    /// g_k(Λ_r) = H_k(E_{q−1}(Λ_r), …, E_{q^k−1}(Λ_r)) for 1 ≤ k ≤ r.
    pub fn g_expansion(&self, k: usize) -> Result<Series<R::Elem>> {
        if k == 0 || k > self.r {
            return Err(Error::InvalidArgument(format!("g_{k} outside 1..=r")));
        }
        let eis: Vec<Series<R::Elem>> = (1..=k).map(|m| self.eisenstein(m)).collect::<Result<_>>()?;
        let sr = self.series_ring(1, self.prec);
        Ok(self.bridge.eval_h(&sr, k, &eis))
    }

    /// Δ(Λ_r) through
    /// `1/Δ = −t^{−(q−1)} ∏_{a≠0} ∏_{ε∈F_q} q(az)^{q^{r−1}} / q((aT+ε)z)`;
    /// a and its F_q^×-multiples give the same factor.
    pub fn delta_product(&self) -> Result<Series<R::Elem>> {
        let r = &self.ring;
        let prec = self.prec;
        let q = self.q as i64;
        let frob_steps = self.field.e() as usize * (self.r - 1);
        let factors: Vec<Series<R::Elem>> = self
            .contributing_monics()
            .par_iter()
            .map(|a| -> Result<Series<R::Elem>> {
                let d = a.degree().unwrap();
                let na = order_of_q_scaled(self.q, self.r, d)?;
                let mut num = self.q_scaled_to(a, na + prec)?;
                for _ in 0..frob_steps {
                    num = num.pth_power(r);
                }
                let nb = order_of_q_scaled(self.q, self.r, d + 1)?;
                let mut acc = Series::one(r, 1, prec);
                for eps in self.field.elements() {
                    let b = self.a.add(&self.a.shift(a, 1), &Poly::constant(eps));
                    let lb = self.rho_at_pole(&b, q.pow(self.r as u32 - 1) * prec + nb + 1)?;
                    acc = acc.mul(r, &num.mul(r, &lb)?.truncate(prec))?.truncate(prec);
                }
                Ok(acc)
            })
            .collect::<Result<_>>()?;
        let mut prod = Series::one(r, 1, prec);
        for f in factors {
            prod = prod.mul(r, &f)?.truncate(prec);
        }
        let inv = prod.pow(r, self.q - 1)?.inverse(r)?;
        Ok(inv.neg(r).shift(q - 1).truncate(prec))
    }

    /// Δ(Λ_r) as g_r(Λ_r) from the Eisenstein expansions.
    pub fn delta_eisenstein(&self) -> Result<Series<R::Elem>> {
        self.g_expansion(self.r)
    }

    pub fn delta_expansion(&self) -> Result<Series<R::Elem>> {
        self.delta_product()
    }

    /// The integral part of u_k: `V_k = g_k·U^{−(q^k−1)/(q^r−1)}` where
    /// Δ = −t^{q−1}·U and U has constant term 1.
    pub fn u_integral_part(&self, k: usize) -> Result<Series<R::Elem>> {
        if k == 0 || k >= self.r {
            return Err(Error::InvalidArgument(format!("u_{k} needs 1 <= k <= r-1")));
        }
        let r = &self.ring;
        let delta = self.delta_expansion()?;
        let u = delta.neg(r).shift(-(self.q as i64 - 1));
        let (m, d) = self.u_exponent(k);
        let w = u.pow_frac(r, -m, d)?;
        self.g_expansion(k)?.mul(r, &w)
    }

    /// (q^k − 1, q^r − 1)
    pub fn u_exponent(&self, k: usize) -> (i64, i64) {
        (self.q.pow(k as u32) as i64 - 1, self.q.pow(self.r as u32) as i64 - 1)
    }

    /// u_k on the (q^r−1)-grid, up to the fixed root of unity coming from
    /// (−1)^{(q^k−1)/(q^r−1)}: the returned series is
    /// `g_k·t^{−(q−1)(q^k−1)/(q^r−1)}·U^{−(q^k−1)/(q^r−1)}`, so its leading
    /// coefficient is g_k(Λ_{r−1}).
    pub fn u_expansion(&self, k: usize) -> Result<Series<R::Elem>> {
        let (m, d) = self.u_exponent(k);
        let v = self.u_integral_part(k)?;
        Ok(v.regrid(d)?.shift(-(self.q as i64 - 1) * m))
    }

    /// `j_k = g_k^{(q^r−1)/(q^g−1)} / Δ^{(q^k−1)/(q^g−1)}`, g = gcd(k, r).
    pub fn jk_expansion(&self, k: usize) -> Result<Series<R::Elem>> {
        if k == 0 || k >= self.r {
            return Err(Error::InvalidArgument(format!("j_{k} needs 1 <= k <= r-1")));
        }
        let r = &self.ring;
        let (m, d) = self.u_exponent(k);
        let qg = self.q.pow(gcd(k as u64, self.r as u64) as u32) as i64 - 1;
        let num = self.g_expansion(k)?.pow(r, (d / qg) as u64)?;
        let den = self.delta_expansion()?.pow(r, (m / qg) as u64)?;
        num.mul(r, &den.inverse(r)?)
    }

    /// `(−1)^{(q^k−1)/(q^g−1)}`, the sign linking `u_expansion(k)` to j_k.
    pub fn jk_sign(&self, k: usize) -> R::Elem {
        let (m, _) = self.u_exponent(k);
        let qg = self.q.pow(gcd(k as u64, self.r as u64) as u32) as i64 - 1;
        let one = self.ring.one();
        if (m / qg) % 2 == 0 {
            one
        } else {
            self.ring.neg(&one)
        }
    }

    pub fn t_qk_minus_t(&self, k: u32) -> RatFunc {
        RatFunc::from_poly(t_qk_minus_t(&self.a, k))
    }

    pub fn fq(&self, c: u32) -> Fq {
        self.field.from_int(c as i64)
    }
}

/// q^{(r−1)·d}, the order of q(az) for deg a = d.
pub fn order_of_q_scaled(q: u64, r: usize, d: usize) -> Result<i64> {
    let e = ((r - 1) * d) as u32;
    q.checked_pow(e)
        .and_then(|v| i64::try_from(v).ok())
        .filter(|v| *v < i64::MAX / 1024)
        .ok_or_else(|| Error::InvalidArgument("parameter order overflows".into()))
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ring::{AAlgebra, FqAlgebra};

    fn field(q: u64) -> FiniteField {
        FiniteField::with_order(q).unwrap()
    }

    fn poly(c: &[u32]) -> Poly {
        Poly::from_coeffs(c.iter().map(|&x| Fq(x)).collect())
    }

    #[test]
    fn a_polys_small() {
        let f = field(3);
        let ctx = ExpansionContext::rank2(&f, 10).unwrap();
        let k = ctx.ring().clone();
        let ps = ctx.a_polys(4);
        assert_eq!(ps[0], vec![k.one()]);
        assert_eq!(ps[1], vec![k.zero(), k.one()]);
        // P_3 = t·P_2 + e_q·t
        let eq = ctx.lower_e(1).clone();
        assert_eq!(ps[3], vec![k.zero(), eq, k.zero(), k.one()]);
        for (i, p) in ps.iter().enumerate() {
            assert_eq!(p.len(), i + 1);
            assert!(k.is_one(p.last().unwrap()));
        }
    }

    #[test]
    fn power_sum_orders() {
        let ctx = ExpansionContext::rank2(&field(2), 12).unwrap();
        let k = ctx.ring();
        for i in 0..6 {
            let s = ctx.power_sum(i);
            let (&top, c) = s.terms().iter().next_back().unwrap();
            assert_eq!(top, i as i64 + 1);
            assert!(k.is_one(c));
            assert!(s.ord_num() >= 2.min(i as i64 + 1));
        }
        // t·P_q = t^{q+1} + e_q t^2
        let s = ctx.power_sum(2);
        assert_eq!(s.terms().len(), 2);
        assert_eq!(s.coeff(k, 2).unwrap(), *ctx.lower_e(1));
    }

    #[test]
    fn q_scaled_small_cases() {
        let f = field(2);
        let ctx = ExpansionContext::rank2(&f, 8).unwrap();
        let k = ctx.ring().clone();
        let q1 = ctx.q_scaled(&Poly::one()).unwrap();
        assert_eq!(q1.terms().len(), 1);
        assert_eq!(q1.ord_num(), 1);
        let qt = ctx.q_scaled(&Poly::t()).unwrap();
        assert_eq!(qt.ord_num(), 2);
        assert!(k.is_one(qt.leading().unwrap()));
        assert_eq!(qt.coeff(&k, 3).unwrap(), k.from_poly(&Poly::t()));
        // scalar a: q(cz) = c^{-1} t
        let f3 = field(3);
        let c3 = ExpansionContext::rank2(&f3, 6).unwrap();
        let q2 = c3.q_scaled(&Poly::constant(Fq(2))).unwrap();
        assert_eq!(q2.terms().len(), 1);
        assert_eq!(q2.coeff(c3.ring(), 1).unwrap(), c3.ring().from_fq(Fq(2)));
    }

    #[test]
    fn q_scaled_inverts_rho() {
        let f = field(3);
        let ctx = ExpansionContext::rank2(&f, 20).unwrap();
        let k = ctx.ring();
        let a = poly(&[1, 2, 1]);
        let qa = ctx.q_scaled(&a).unwrap();
        assert_eq!(qa.ord_num(), 9);
        let l = ctx.rho_at_pole(&a, 20).unwrap();
        let prod = qa.mul(k, &l).unwrap();
        assert!(prod.prec_num() > 0);
        assert!(k.is_one(prod.leading().unwrap()));
        assert_eq!(prod.terms().len(), 1);
    }

    #[test]
    fn lower_lattice_normalisation() {
        for r in [2usize, 3] {
            let f = field(2);
            let ctx = ExpansionContext::symbolic(&f, r, 4).unwrap();
            let ring = ctx.ring();
            let b = bridge(&f, r);
            assert!(ring.is_one(&b.eval_f(ring, r - 1, &ctx.e[1..r])));
            assert!(ring.is_zero(&b.eval_f(ring, r, &ctx.e[1..=r])));
        }
    }

    #[test]
    fn g1_constant_terms() {
        let f = field(3);
        let ctx = ExpansionContext::rank2(&f, 10).unwrap();
        let g1 = ctx.g_expansion(1).unwrap();
        assert!(ctx.ring().is_one(&g1.coeff(ctx.ring(), 0).unwrap()));
        let s = ExpansionContext::symbolic(&field(2), 3, 6).unwrap();
        let g1 = s.g_expansion(1).unwrap();
        let ring = s.ring();
        let expect = ring.mul(&ring.from_ratfunc(&s.t_qk_minus_t(1)), &ring.gen(0));
        assert_eq!(g1.coeff(ring, 0).unwrap(), expect);
        let g3 = s.g_expansion(3).unwrap();
        assert!(g3.ord_num() >= 1);
    }

    #[test]
    fn eisenstein_deviation_starts_at_t() {
        let ctx = ExpansionContext::rank2(&field(2), 12).unwrap();
        for m in 1..=2 {
            let e = ctx.eisenstein(m).unwrap();
            let c = Series::monomial(ctx.ring(), ctx.lower_eisenstein(m).clone(), 0, 1, 12);
            assert!(e.sub(ctx.ring(), &c).unwrap().ord_num() >= 1);
        }
    }

    #[test]
    fn delta_two_routes_rank2() {
        for q in [2u64, 3] {
            let f = field(q);
            let prec = 3 * (q as i64 - 1) + q as i64 + 4;
            let ctx = ExpansionContext::rank2(&f, prec).unwrap();
            let k = ctx.ring();
            let dp = ctx.delta_product().unwrap();
            let de = ctx.delta_eisenstein().unwrap();
            assert_eq!(dp.ord_num(), q as i64 - 1);
            assert!(k.is_one(&k.neg(dp.leading().unwrap())));
            let p = dp.prec_num().min(de.prec_num());
            assert!(p >= prec - 1);
            assert!(dp.agrees_to::<RatFuncField>(&de, p).unwrap());
            // the next term sits at exponent >= q
            assert!(dp.terms().keys().nth(1).is_none_or(|&e| e >= q as i64));
            assert!(dp.terms().values().all(|c| c.is_integral()));
        }
    }

    #[test]
    fn delta_leading_term_all_small_cases() {
        for q in [2u64, 3, 4] {
            for r in [2usize, 3] {
                let ctx = ExpansionContext::symbolic(&field(q), r, q as i64 + 1).unwrap();
                let d = ctx.delta_product().unwrap();
                assert_eq!(d.ord_num(), q as i64 - 1);
                let ring = ctx.ring();
                assert!(ring.is_one(&ring.neg(d.leading().unwrap())));
            }
        }
    }

    #[test]
    fn u_versus_j_rank2() {
        for q in [2u64, 3] {
            let f = field(q);
            let ctx = ExpansionContext::rank2(&f, 14).unwrap();
            let k = ctx.ring().clone();
            let u = ctx.u_expansion(1).unwrap();
            let (m, d) = ctx.u_exponent(1);
            assert_eq!(u.denom(), d);
            assert_eq!(u.ord_num(), -(q as i64 - 1) * m);
            let j = ctx.jk_expansion(1).unwrap();
            assert_eq!(j.ord_num(), -(q as i64 - 1));
            let uj = u.pow(&k, q + 1).unwrap().scale(&k, &ctx.jk_sign(1)).reduce_grid();
            let p = uj.prec_num().min(j.prec_num());
            assert!(p > 4);
            assert!(uj.agrees_to::<RatFuncField>(&j, p).unwrap());
        }
    }

    #[test]
    fn higher_precision_extends() {
        let f = field(2);
        let lo = ExpansionContext::rank2(&f, 10).unwrap();
        let hi = lo.with_prec(20);
        let a = lo.jk_expansion(1).unwrap();
        let b = hi.jk_expansion(1).unwrap();
        assert!(a.agrees_to::<RatFuncField>(&b, a.prec_num()).unwrap());
    }
}
