//! Rank-2 modular polynomials `P_{j,n}(X) = ∏ (X − j(Λ̃))` by matching
//! expansions at the cusp, with the degree and coefficient-bound checks.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::field::FiniteField;
use crate::algebra::poly::{Poly, PolyRing};
use crate::algebra::quotient::{upoly_divmod, upoly_mul, QElem, QuotientAlgebra};
use crate::algebra::ratfunc::{RatFunc, RatFuncField};
use crate::algebra::ring::{AAlgebra, FqAlgebra, Ring};
use crate::error::{Error, Result};
use crate::expansion::sublattice::compose_u;
use crate::expansion::{ExpansionContext, Series};
use crate::lattice::{count_cyclic_sublattices, count_with_power_numerator, shapes_rank2, Shape2};
use crate::tau::carlitz;

type KSeries = Series<RatFunc>;
type TSeries = Series<QElem<RatFunc>>;

const EXACT: i64 = i64::MAX / 4;

/// K[x]/(ψ) with x = e_C(1/n), the Carlitz exponential at the n-division point.
#[derive(Clone, Debug)]
pub struct TorsionAlgebra {
    n: Poly,
    a: PolyRing,
    psi: Vec<Poly>,
    alg: QuotientAlgebra<RatFuncField>,
}

/// ρ^C_d(X) as a dense X-polynomial over A, low degree first.
fn carlitz_dense(field: &FiniteField, d: &Poly) -> Result<Vec<Poly>> {
    let f = carlitz(field).phi(d)?;
    let q = field.q() as usize;
    let mut out = vec![Poly::zero(); q.pow(f.degree().unwrap() as u32) + 1];
    for (i, c) in f.coeffs().iter().enumerate() {
        out[q.pow(i as u32)] = c.clone();
    }
    Ok(out)
}

fn moebius(a: &PolyRing, m: &Poly) -> Result<i32> {
    let f = a.factor(m)?;
    if f.iter().any(|(_, e)| *e > 1) {
        Ok(0)
    } else if f.len() % 2 == 0 {
        Ok(1)
    } else {
        Ok(-1)
    }
}

impl TorsionAlgebra {
    fn build(field: &FiniteField, n: &Poly, psi: Vec<Poly>) -> Result<Self> {
        let k = RatFuncField::new(field.clone());
        let m: Vec<RatFunc> = psi.iter().cloned().map(RatFunc::from_poly).collect();
        let alg = QuotientAlgebra::new(k, m)?;
        Ok(TorsionAlgebra { n: n.clone(), a: PolyRing::new(field.clone()), psi, alg })
    }

    /// ψ_n = ρ^C_n(X)/X, of degree |n| − 1; a field only when n is irreducible.
    pub fn new(field: &FiniteField, n: &Poly) -> Result<Self> {
        if n.degree().unwrap_or(0) == 0 || !n.is_monic() {
            return Err(Error::InvalidArgument("torsion level must be monic of degree >= 1".into()));
        }
        let mut psi = carlitz_dense(field, n)?;
        psi.remove(0);
        Self::build(field, n, psi)
    }

    /// The Carlitz cyclotomic polynomial ∏_{d|n} ρ_d(X)^{μ(n/d)}, the minimal
    /// polynomial of a primitive n-torsion point; always a field.
    pub fn primitive(field: &FiniteField, n: &Poly) -> Result<Self> {
        if n.degree().unwrap_or(0) == 0 || !n.is_monic() {
            return Err(Error::InvalidArgument("torsion level must be monic of degree >= 1".into()));
        }
        let a = PolyRing::new(field.clone());
        let mut num = vec![Poly::one()];
        let mut den = vec![Poly::one()];
        for d in a.monic_divisors(n) {
            let mu = moebius(&a, &a.div_exact(n, &d)?)?;
            let rd = carlitz_dense(field, &d)?;
            match mu {
                1 => num = upoly_mul(&a, &num, &rd),
                -1 => den = upoly_mul(&a, &den, &rd),
                _ => {}
            }
        }
        let (psi, rem) = upoly_divmod(&a, &num, &den)?;
        if !rem.is_empty() {
            return Err(Error::Reduction("cyclotomic quotient is not exact".into()));
        }
        Self::build(field, n, psi)
    }

    pub fn level(&self) -> &Poly {
        &self.n
    }
    /// ψ over A, low degree first.
    pub fn modulus(&self) -> &[Poly] {
        &self.psi
    }
    pub fn algebra(&self) -> &QuotientAlgebra<RatFuncField> {
        &self.alg
    }
    pub fn degree(&self) -> usize {
        self.alg.degree()
    }
    pub fn x(&self) -> QElem<RatFunc> {
        self.alg.gen()
    }

    /// e_C(a/n) = ρ^C_a(x).
    pub fn torsion_value(&self, b: &Poly) -> Result<QElem<RatFunc>> {
        if b.is_zero() {
            return Ok(self.alg.zero());
        }
        let c = carlitz(self.a.field());
        let f = c.phi(b)?;
        let alg = &self.alg;
        Ok(c.tau().eval_in(alg, &f, &self.x(), |p| alg.from_poly(p), |y| alg.frobenius_q(y)))
    }

    /// The automorphism x ↦ ρ_c(x), for c prime to n.
    pub fn automorphism(&self, c: &Poly, v: &QElem<RatFunc>) -> Result<QElem<RatFunc>> {
        if !self.a.is_one(&self.a.gcd(c, &self.n)?) {
            return Err(Error::InvalidArgument("automorphism needs c prime to n".into()));
        }
        let img = self.torsion_value(c)?;
        let alg = &self.alg;
        let mut acc = alg.zero();
        for coef in v.iter().rev() {
            acc = alg.add(&alg.mul(&acc, &img), &alg.from_base(coef.clone()));
        }
        Ok(acc)
    }
}

/// `1/(ρ_a(1/s) + c)` to absolute precision `prec`, over any A-algebra with the
/// Carlitz module as lower lattice.
fn carlitz_param<S: AAlgebra>(field: &FiniteField, alg: &S, a: &Poly, c: Option<S::Elem>, prec: i64) -> Result<Series<S::Elem>> {
    let f = carlitz(field).phi(a)?;
    let q = field.q() as i64;
    let n = q.pow(a.degree().unwrap() as u32);
    let pl = prec - 2 * n;
    let mut terms: Vec<(i64, S::Elem)> =
        f.coeffs().iter().enumerate().map(|(i, x)| (-q.pow(i as u32), alg.from_poly(x))).collect();
    if let Some(c) = c {
        terms.push((0, c));
    }
    Series::from_terms(alg, 1, terms, pl).inverse(alg)
}

/// Precision plan for the expansion matching.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PrecisionPlan {
    /// Positive s-exponents that must vanish in every remainder.
    pub guard: i64,
    /// Sum of |ord_s| over the conjugates.
    pub conjugate_pole_sum: i64,
    /// s-precision of every conjugate.
    pub conjugate_prec: i64,
    /// t-precision of the j expansion.
    pub t_prec: i64,
    /// s-precision of J.
    pub j_prec: i64,
}

/// Per-coefficient bound check.
#[derive(Clone, Debug, Serialize)]
pub struct BoundLine {
    pub i: usize,
    pub degree: Option<u64>,
    /// |n|^{r−1}(#J − i)·w(j)
    pub sharp: i64,
    pub sharp_holds: bool,
    /// (|n|^{2(r−1)} ∏ |p|^r/(|p|^r − |p|^{r−1}) − i)·w(j)
    pub displayed: String,
    pub displayed_holds: bool,
    /// |n|^{2(r−1)}(∏ |p|^r/(|p|^r − |p|^{r−1}) − i)·w(j)
    pub end_of_proof: String,
    pub end_of_proof_holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub degree_in_x: usize,
    pub count_formula: u128,
    /// The count with ∏ |p|^r in the numerator.
    pub count_power_numerator: String,
    pub lines: Vec<BoundLine>,
    /// Lower bound −(q−1)|n|^{2(r−1)}·w(j) for the s-order of each conjugate.
    pub conjugate_order_floor: i64,
    pub conjugate_orders: Vec<i64>,
    pub conjugate_orders_hold: bool,
    pub sharp_all_hold: bool,
}

/// Results of the internal consistency checks.
#[derive(Clone, Debug, Serialize)]
pub struct PipelineChecks {
    pub descended_to_k: bool,
    pub integral: bool,
    pub monic: bool,
    /// For each conjugate, the s-precision to which P(conjugate, J) was seen to vanish.
    pub self_evaluation_prec: Vec<i64>,
    pub self_evaluation_vanishes: bool,
    /// Precision of the vanishing tail in each reduction.
    pub tail_prec: Vec<i64>,
    pub galois_stable: bool,
    /// Φ(X, Y) = Φ(Y, X); reported only.
    pub symmetric: bool,
}

#[derive(Clone, Debug)]
pub struct ModularPolynomial {
    pub field: FiniteField,
    pub n: Poly,
    pub degree: usize,
    /// `coeffs[i][m]` is the coefficient of X^i j^m.
    pub coeffs: Vec<Vec<RatFunc>>,
    pub plan: PrecisionPlan,
    pub bounds: BoundReport,
    pub checks: PipelineChecks,
}

impl ModularPolynomial {
    pub fn k(&self) -> RatFuncField {
        RatFuncField::new(self.field.clone())
    }

    /// a_i as a polynomial in j.
    pub fn coefficient_string(&self, i: usize) -> String {
        let k = self.k();
        let mut parts = Vec::new();
        for (m, c) in self.coeffs[i].iter().enumerate().rev() {
            if k.is_zero(c) {
                continue;
            }
            let cs = k.format(c);
            let wrapped = if cs.contains('+') || cs.contains('/') { format!("({cs})") } else { cs };
            parts.push(match m {
                0 => wrapped,
                _ => {
                    let jm = if m == 1 { "j".to_string() } else { format!("j^{m}") };
                    if k.is_one(c) {
                        jm
                    } else {
                        format!("{wrapped}*{jm}")
                    }
                }
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }

    /// Φ_n(X, j) as text.
    pub fn format(&self) -> String {
        let mut parts = Vec::new();
        for i in (0..=self.degree).rev() {
            let c = self.coefficient_string(i);
            if c == "0" {
                continue;
            }
            let xi = match i {
                0 => String::new(),
                1 => "X".into(),
                _ => format!("X^{i}"),
            };
            parts.push(match (i, c.as_str()) {
                (0, _) => format!("({c})"),
                (_, "1") => xi,
                _ => format!("({c})*{xi}"),
            });
        }
        parts.join("+")
    }

    /// `{"q", "n", "degree", "coefficients": {"i": …}, "bound_report", …}`.
    pub fn to_json(&self) -> serde_json::Value {
        let a = PolyRing::new(self.field.clone());
        let coefficients: serde_json::Map<String, serde_json::Value> =
            (0..=self.degree).map(|i| (i.to_string(), self.coefficient_string(i).into())).collect();
        serde_json::json!({
            "q": self.field.q(),
            "n": a.format_in(&self.n, "T"),
            "degree": self.degree,
            "coefficients": coefficients,
            "bound_report": self.bounds,
            "checks": self.checks,
            "precision": self.plan,
            "text": self.format(),
        })
    }

    pub fn degree_in_j(&self, i: usize) -> Option<u64> {
        let k = self.k();
        self.coeffs[i].iter().rposition(|c| !k.is_zero(c)).map(|m| m as u64)
    }
}

/// Options for [`modular_polynomial`].
#[derive(Clone, Debug, Default)]
pub struct ModpolyOptions {
    /// Guard window in s; defaults to 2(q−1)|n|.
    pub guard: Option<i64>,
}

/// The t-expansion of j = g_1^{q+1}/Δ to absolute precision `prec`.
pub fn j_expansion_in_t(field: &FiniteField, prec: i64) -> Result<KSeries> {
    let q = field.q() as i64;
    let ctx = ExpansionContext::rank2(field, prec + 2 * (q - 1))?;
    let j = ctx.jk_expansion(1)?;
    if j.prec_num() < prec {
        return Err(Error::PrecisionShortfall(format!("j known to t^{} < t^{prec}", j.prec_num())));
    }
    Ok(j.truncate(prec))
}

/// J(s) = j(t = 1/ρ_n(1/s)); order −(q−1)|n|.
pub fn j_expansion_in_s(field: &FiniteField, n: &Poly, j_t: &KSeries, prec: i64) -> Result<KSeries> {
    let k = RatFuncField::new(field.clone());
    let q = field.q() as i64;
    let nn = q.pow(n.degree().unwrap() as u32);
    let sub = carlitz_param(field, &k, n, None, nn + prec + (q - 1) * nn)?;
    let out = j_t.compose(&k, &sub)?;
    if out.prec_num() < prec {
        return Err(Error::PrecisionShortfall(format!("J known to s^{} < s^{prec}", out.prec_num())));
    }
    Ok(out.truncate(prec))
}

/// The cusp parameter of α·Λ̃ in s: `1/(ρ_{n_1^2}(1/s) + ρ_{λ n_1}(x))`.
pub fn conjugate_parameter(ta: &TorsionAlgebra, shape: &Shape2, rel: i64) -> Result<TSeries> {
    let a = &ta.a;
    let field = a.field();
    let n1sq = a.mul(&shape.n1, &shape.n1);
    let q = field.q() as i64;
    let big_n = q.pow(n1sq.degree().unwrap() as u32);
    let c = if shape.lambda.is_zero() { None } else { Some(ta.torsion_value(&a.mul(&shape.lambda, &shape.n1))?) };
    carlitz_param(field, ta.algebra(), &n1sq, c, big_n + rel)
}

/// j(Λ̃) as a series in s over the torsion algebra; order −(q−1)|n_1|².
pub fn conjugate_expansion(ta: &TorsionAlgebra, shape: &Shape2, j_t: &KSeries, prec: i64) -> Result<TSeries> {
    let q = ta.a.field().q() as i64;
    let big_n = q.pow(2 * shape.n1.degree().unwrap() as u32);
    let param = conjugate_parameter(ta, shape, prec + big_n * (q - 1))?;
    let alg = ta.algebra();
    let jt = j_t.map_coeffs(alg, |c| alg.from_base(c.clone()));
    let out = jt.compose(alg, &param)?;
    if out.prec_num() < prec {
        return Err(Error::PrecisionShortfall(format!("conjugate known to s^{} < s^{prec}", out.prec_num())));
    }
    Ok(out.truncate(prec))
}

/// u_k of the sublattice in s (rank 2: k = 1), normalised like the cusp u_k.
pub fn sublattice_u_rank2(ta: &TorsionAlgebra, shape: &Shape2, rel: i64) -> Result<TSeries> {
    let field = ta.a.field();
    let ctx = ExpansionContext::rank2(field, rel + 2 * field.q() as i64)?;
    let param = conjugate_parameter(ta, shape, rel)?;
    let alg = ta.algebra();
    compose_u(&ctx, 1, alg, |c| alg.from_base(c.clone()), &param)
}

/// Greedy elimination of the principal part of `f` by K-multiples of J^m.
struct Reduced {
    coeffs: Vec<RatFunc>,
    tail_prec: i64,
}

fn reduce_against_j(k: &RatFuncField, f: &KSeries, jpows: &[KSeries], unit: i64, bound: i64) -> Result<Reduced> {
    let mut rest = f.clone();
    let mut coeffs = vec![k.zero(); bound.max(0) as usize + 1];
    while rest.ord_num() < 0 && !rest.is_zero_to_prec() {
        let o = rest.ord_num();
        if o % unit != 0 {
            return Err(Error::Reduction(format!("pole order {o} is not a multiple of {unit}")));
        }
        let m = -o / unit;
        if m > bound {
            return Err(Error::BoundViolation(format!("j-degree {m} exceeds the bound {bound}")));
        }
        let jm = &jpows[m as usize];
        let c = k.mul(rest.leading().unwrap(), &k.try_inv(jm.leading().unwrap())?);
        rest = rest.sub(k, &jm.scale(k, &c))?;
        coeffs[m as usize] = k.add(&coeffs[m as usize], &c);
    }
    if rest.prec_num() <= 0 {
        return Err(Error::PrecisionShortfall("constant term lost during reduction".into()));
    }
    coeffs[0] = rest.coeff(k, 0)?;
    if rest.terms().keys().any(|&e| e > 0) {
        return Err(Error::Reduction("nonvanishing positive tail after reduction".into()));
    }
    Ok(Reduced { coeffs, tail_prec: rest.prec_num() })
}

/// Full computation of P_{j,n} for r = 2.
pub fn modular_polynomial(field: &FiniteField, n: &Poly, opts: &ModpolyOptions) -> Result<ModularPolynomial> {
    let a = PolyRing::new(field.clone());
    let k = RatFuncField::new(field.clone());
    if !n.is_monic() {
        return Err(Error::InvalidArgument("level must be monic".into()));
    }
    let q = field.q() as i64;
    let shapes = shapes_rank2(&a, n)?;
    let deg = shapes.len();
    let count = count_cyclic_sublattices(&a, n, 2)?;
    if deg as u128 != count {
        return Err(Error::Reduction(format!("{deg} shapes but the count formula gives {count}")));
    }
    let nn = a.norm(n)? as i64;
    let bounds_for = |coeffs: &[Vec<RatFunc>], orders: Vec<i64>| bound_report(&a, n, deg, coeffs, orders, q);

    if n.degree() == Some(0) {
        let coeffs = vec![vec![k.zero(), k.neg(&k.one())], vec![k.one()]];
        let plan = PrecisionPlan { guard: 0, conjugate_pole_sum: q - 1, conjugate_prec: 0, t_prec: 0, j_prec: 0 };
        let bounds = bounds_for(&coeffs, vec![-(q - 1)])?;
        let checks = PipelineChecks {
            descended_to_k: true,
            integral: true,
            monic: true,
            self_evaluation_prec: vec![i64::MAX],
            self_evaluation_vanishes: true,
            tail_prec: vec![],
            galois_stable: true,
            symmetric: false,
        };
        return Ok(ModularPolynomial { field: field.clone(), n: n.clone(), degree: 1, coeffs, plan, bounds, checks });
    }

    let unit = (q - 1) * nn;
    let guard = opts.guard.unwrap_or(2 * unit);
    if guard <= 0 {
        return Err(Error::InvalidArgument("guard window must be positive".into()));
    }
    let orders: Vec<i64> = shapes.iter().map(|s| -(q - 1) * (a.norm(&s.n1).unwrap() as i64).pow(2)).collect();
    let pole_sum: i64 = -orders.iter().sum::<i64>();
    let conj_prec = guard + pole_sum;
    let dmax = nn * deg as i64;
    let need_j = guard + (dmax - 1) * unit;
    let j_prec = need_j;
    // P(c_k, J): a_i(J)·c_k^i is known to P(c_k) − |ord a_i| − (i−1)|ord c_k|,
    // and |ord a_i| is at most the sum of the d − i largest poles
    let mut poles: Vec<i64> = orders.iter().map(|o| -o).collect();
    poles.sort_unstable_by(|x, y| y.cmp(x));
    let top = |m: usize| poles[..m].iter().sum::<i64>();
    let self_prec: Vec<i64> = orders
        .iter()
        .map(|o| {
            let worst = (1..=deg).map(|i| top(deg - i) - (i as i64 - 1) * o).max().unwrap_or(0);
            conj_prec.max(guard + worst)
        })
        .collect();
    let mut t_prec = conj_prec.max((need_j + nn - 1) / nn);
    for (p, o) in self_prec.iter().zip(&orders) {
        let big_n = -o / (q - 1);
        t_prec = t_prec.max((p + big_n - 1) / big_n);
    }
    let plan = PrecisionPlan { guard, conjugate_pole_sum: pole_sum, conjugate_prec: conj_prec, t_prec, j_prec: need_j };

    let j_t = j_expansion_in_t(field, t_prec)?;
    let big_j = j_expansion_in_s(field, n, &j_t, j_prec)?;
    let ta = TorsionAlgebra::primitive(field, n)?;
    let alg = ta.algebra().clone();
    let conj_full: Vec<TSeries> = shapes
        .par_iter()
        .zip(&self_prec)
        .map(|(s, p)| conjugate_expansion(&ta, s, &j_t, *p))
        .collect::<Result<_>>()?;
    let conj: Vec<TSeries> = conj_full.iter().map(|c| c.truncate(conj_prec)).collect();
    for (c, o) in conj.iter().zip(&orders) {
        if c.ord_num() != *o {
            return Err(Error::Reduction(format!("conjugate order {} differs from {o}", c.ord_num())));
        }
    }

    // ∏ (X − c_k), coefficient of X^i at index i
    let mut sym: Vec<TSeries> = vec![Series::one(&alg, 1, EXACT)];
    for c in &conj {
        let mut next: Vec<TSeries> = vec![Series::zero(1, conj_prec); sym.len() + 1];
        for (i, s) in sym.iter().enumerate() {
            next[i + 1] = next[i + 1].add(&alg, s)?;
            next[i] = next[i].sub(&alg, &s.mul(&alg, c)?)?;
        }
        sym = next;
    }
    let descended = sym.iter().all(|s| s.terms().values().all(|v| alg.is_base(v)));
    if !descended {
        return Err(Error::NonDescent("a symmetric function of the conjugates has torsion coordinates".into()));
    }
    let sym_k: Vec<KSeries> = sym.iter().map(|s| s.map_coeffs(&k, |v| v[0].clone())).collect();

    let mut jpows: Vec<KSeries> = vec![Series::one(&k, 1, EXACT)];
    for m in 1..=dmax as usize {
        let nxt = jpows[m - 1].mul(&k, &big_j)?;
        jpows.push(nxt);
    }
    let mut coeffs = Vec::with_capacity(deg + 1);
    let mut tails = Vec::new();
    for (i, s) in sym_k.iter().enumerate() {
        let bound = nn * (deg - i) as i64;
        let red = reduce_against_j(&k, s, &jpows, unit, bound)?;
        tails.push(red.tail_prec);
        coeffs.push(red.coeffs);
    }
    let integral = coeffs.iter().flatten().all(|c| c.is_integral());
    let monic = coeffs[deg].iter().enumerate().all(|(m, c)| if m == 0 { k.is_one(c) } else { k.is_zero(c) });

    // P(c_k, J) for every conjugate
    let jt: Vec<TSeries> = jpows.iter().map(|s| s.map_coeffs(&alg, |c| alg.from_base(c.clone()))).collect();
    let self_eval: Vec<i64> = conj_full
        .par_iter()
        .map(|c| -> Result<i64> {
            let mut total: TSeries = Series::zero(1, EXACT);
            let mut cpow: TSeries = Series::one(&alg, 1, EXACT);
            for row in &coeffs {
                let mut ai: TSeries = Series::zero(1, EXACT);
                for (m, cm) in row.iter().enumerate() {
                    if !k.is_zero(cm) {
                        ai = ai.add(&alg, &jt[m].scale(&alg, &alg.from_base(cm.clone())))?;
                    }
                }
                total = total.add(&alg, &ai.mul(&alg, &cpow)?)?;
                cpow = cpow.mul(&alg, c)?;
            }
            Ok(if total.is_zero_to_prec() { total.prec_num() } else { i64::MIN })
        })
        .collect::<Result<_>>()?;
    let self_ok = self_eval.iter().all(|&p| p > 0);

    let galois_stable = galois_stable(&ta, &a, n, &conj)?;
    let symmetric = (0..=deg).all(|i| {
        (0..=deg).all(|m| {
            let x = coeffs.get(i).and_then(|r| r.get(m)).cloned().unwrap_or_else(|| k.zero());
            let y = coeffs.get(m).and_then(|r| r.get(i)).cloned().unwrap_or_else(|| k.zero());
            x == y
        })
    }) && coeffs.iter().all(|r| r.len() <= deg + 1 || r[deg + 1..].iter().all(|c| k.is_zero(c)));

    let bounds = bounds_for(&coeffs, orders)?;
    let checks = PipelineChecks {
        descended_to_k: descended,
        integral,
        monic,
        self_evaluation_prec: self_eval,
        self_evaluation_vanishes: self_ok,
        tail_prec: tails,
        galois_stable,
        symmetric,
    };
    Ok(ModularPolynomial { field: field.clone(), n: n.clone(), degree: deg, coeffs, plan, bounds, checks })
}

/// The multiset of conjugate series is stable under x ↦ ρ_c(x) for every c prime to n.
fn galois_stable(ta: &TorsionAlgebra, a: &PolyRing, n: &Poly, conj: &[TSeries]) -> Result<bool> {
    let alg = ta.algebra();
    let key = |s: &TSeries| format!("{:?}", s.formatted_terms(alg));
    let mut base: Vec<String> = conj.iter().map(key).collect();
    base.sort();
    for c in a.reduced_residues(n.degree().unwrap()) {
        if c.is_zero() || !a.is_one(&a.gcd(&c, n)?) {
            continue;
        }
        let mut moved = Vec::with_capacity(conj.len());
        for s in conj {
            let m = s.try_map_coeffs(alg, |v| ta.automorphism(&c, v))?;
            moved.push(key(&m));
        }
        moved.sort();
        if moved != base {
            return Ok(false);
        }
    }
    Ok(true)
}

fn bound_report(
    a: &PolyRing,
    n: &Poly,
    deg: usize,
    coeffs: &[Vec<RatFunc>],
    orders: Vec<i64>,
    q: i64,
) -> Result<BoundReport> {
    let k = RatFuncField::new(a.field().clone());
    let r = 2usize;
    let nn = a.norm(n)? as i128;
    let count = count_cyclic_sublattices(a, n, r)?;
    let pow_num = count_with_power_numerator(a, n, r)?;
    // ∏ |p|^r/(|p|^r − |p|^{r−1})
    let mut prod = Ratio::from_integer(1i128);
    for (p, _) in a.factor(n)? {
        let np = a.norm(&p)? as i128;
        prod *= Ratio::new(np.pow(r as u32), np.pow(r as u32) - np.pow(r as u32 - 1));
    }
    let n2r = Ratio::from_integer(nn.pow(2 * (r as u32 - 1)));
    let fmt = |x: Ratio<i128>| if x.is_integer() { x.to_integer().to_string() } else { format!("{}/{}", x.numer(), x.denom()) };
    let mut lines = Vec::new();
    for i in 0..=deg {
        let dj = coeffs[i].iter().rposition(|c| !k.is_zero(c)).map(|m| m as u64);
        let dv = Ratio::from_integer(dj.unwrap_or(0) as i128);
        let sharp = (nn.pow(r as u32 - 1) * (deg - i) as i128) as i64;
        let ii = Ratio::from_integer(i as i128);
        let displayed = n2r * prod - ii;
        let eop = n2r * (prod - ii);
        lines.push(BoundLine {
            i,
            degree: dj,
            sharp,
            sharp_holds: dj.unwrap_or(0) as i64 <= sharp,
            displayed: fmt(displayed),
            displayed_holds: dv <= displayed,
            end_of_proof: fmt(eop),
            end_of_proof_holds: dv <= eop,
        });
    }
    let floor = -((q - 1) as i128 * n2r.to_integer()) as i64;
    Ok(BoundReport {
        degree_in_x: deg,
        count_formula: count,
        count_power_numerator: fmt(pow_num),
        sharp_all_hold: lines.iter().all(|l| l.sharp_holds),
        lines,
        conjugate_order_floor: floor,
        conjugate_orders_hold: orders.iter().all(|&o| o >= floor),
        conjugate_orders: orders,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::Fq;

    fn field(q: u64) -> FiniteField {
        FiniteField::with_order(q).unwrap()
    }

    #[test]
    fn torsion_algebra_moduli() {
        let f2 = field(2);
        let t = Poly::t();
        let ta = TorsionAlgebra::new(&f2, &t).unwrap();
        assert_eq!(ta.modulus(), &[t.clone(), Poly::one()]);
        let f3 = field(3);
        let ta3 = TorsionAlgebra::new(&f3, &t).unwrap();
        assert_eq!(ta3.modulus(), &[t.clone(), Poly::zero(), Poly::one()]);
        let t2 = Poly::from_coeffs(vec![Fq(0), Fq(0), Fq(1)]);
        let ta4 = TorsionAlgebra::new(&f2, &t2).unwrap();
        let t2p = Poly::from_coeffs(vec![Fq(0), Fq(1), Fq(1)]);
        assert_eq!(ta4.modulus(), &[t2.clone(), t2p, Poly::zero(), Poly::one()]);
        let prim = TorsionAlgebra::primitive(&f2, &t2).unwrap();
        assert_eq!(prim.degree(), 2);
        // ρ_T(x) is x^2 + T x, which generates the T-torsion inside
        let alg = prim.algebra();
        let y = prim.torsion_value(&t).unwrap();
        assert!(!alg.is_zero(&y));
        assert!(alg.is_zero(&prim.torsion_value(&t2).unwrap()));
    }

    #[test]
    fn j_in_s_order() {
        for q in [2u64, 3] {
            let f = field(q);
            let jt = j_expansion_in_t(&f, 8).unwrap();
            let js = j_expansion_in_s(&f, &Poly::t(), &jt, 8).unwrap();
            assert_eq!(js.ord_num(), -((q as i64 - 1) * q as i64));
            let k = RatFuncField::new(f);
            assert!(k.is_one(&k.neg(js.leading().unwrap())));
        }
    }

    #[test]
    fn trivial_level() {
        let p = modular_polynomial(&field(2), &Poly::one(), &ModpolyOptions::default()).unwrap();
        assert_eq!(p.degree, 1);
        assert_eq!(p.format(), "X+(1*j)".replace("(1*j)", "(j)"));
    }

    #[test]
    fn level_t_q2() {
        let f = field(2);
        let p = modular_polynomial(&f, &Poly::t(), &ModpolyOptions::default()).unwrap();
        assert_eq!(p.degree, 3);
        assert!(p.checks.descended_to_k && p.checks.integral && p.checks.monic);
        assert!(p.checks.self_evaluation_vanishes, "{} {:?} {:?}", p.format(), p.checks, p.plan);
        assert!(p.checks.galois_stable);
        assert!(p.bounds.sharp_all_hold);
        for i in 0..=3 {
            assert!(p.degree_in_j(i).unwrap_or(0) <= 2 * (3 - i as u64));
        }
        assert_eq!(p.bounds.lines[0].displayed, "8");
    }

    #[test]
    fn level_t_q3_and_shifted_level() {
        let f3 = field(3);
        let p = modular_polynomial(&f3, &Poly::t(), &ModpolyOptions::default()).unwrap();
        assert_eq!(p.degree, 4);
        assert!(p.checks.integral && p.checks.self_evaluation_vanishes && p.bounds.sharp_all_hold, "{} {:?} {:?}", p.format(), p.checks, p.plan);
        let f2 = field(2);
        let t1 = Poly::from_coeffs(vec![Fq(1), Fq(1)]);
        let p = modular_polynomial(&f2, &t1, &ModpolyOptions::default()).unwrap();
        assert_eq!(p.degree, 3);
        assert!(p.checks.descended_to_k && p.checks.self_evaluation_vanishes && p.checks.galois_stable);
    }

    #[test]
    fn composite_level_t_squared() {
        let f2 = field(2);
        let t2 = Poly::from_coeffs(vec![Fq(0), Fq(0), Fq(1)]);
        let p = modular_polynomial(&f2, &t2, &ModpolyOptions::default()).unwrap();
        assert_eq!(p.degree, 6);
        assert!(p.checks.descended_to_k && p.checks.self_evaluation_vanishes && p.checks.galois_stable, "{:?}", p.checks);
        assert!(p.bounds.sharp_all_hold && p.bounds.conjugate_orders_hold);
    }

    #[test]
    fn sublattice_u_orders_rank2() {
        use crate::expansion::sublattice::expected_order_num;
        for q in [2u64, 3] {
            let f = field(q);
            let a = PolyRing::new(f.clone());
            for n in [Poly::t(), Poly::from_coeffs(vec![Fq(0), Fq(0), Fq(1)])] {
                let ta = TorsionAlgebra::primitive(&f, &n).unwrap();
                for s in shapes_rank2(&a, &n).unwrap() {
                    let u = sublattice_u_rank2(&ta, &s, 3).unwrap();
                    let want = expected_order_num(q, 2, 1, &s.n1, &s.n2).unwrap();
                    assert_eq!(u.ord_num(), want, "q={q} {s:?}");
                    assert!(!u.leading_cancelled());
                }
            }
        }
    }
}
