//! Twisted polynomials R{τ} with τ·c = c^q·τ and Drinfeld modules.

use crate::algebra::field::{FiniteField, Fq};
use crate::algebra::poly::{Poly, PolyRing};
use crate::algebra::ring::{AAlgebra, FqAlgebra, Ring};
use crate::error::{Error, Result};

/// `Σ c_i τ^i`, i.e. the additive polynomial `Σ c_i X^{q^i}`; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TauPoly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone> TauPoly<E> {
    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }
    /// τ-degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }
}

/// The skew polynomial ring over an F_q-algebra R.
#[derive(Clone, Debug)]
pub struct TauRing<R: FqAlgebra> {
    base: R,
}

impl<R: FqAlgebra> TauRing<R> {
    pub fn new(base: R) -> Self {
        TauRing { base }
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    pub fn from_coeffs(&self, mut c: Vec<R::Elem>) -> TauPoly<R::Elem> {
        while c.last().is_some_and(|x| self.base.is_zero(x)) {
            c.pop();
        }
        TauPoly { coeffs: c }
    }

    pub fn zero(&self) -> TauPoly<R::Elem> {
        TauPoly { coeffs: Vec::new() }
    }

    pub fn one(&self) -> TauPoly<R::Elem> {
        self.from_coeffs(vec![self.base.one()])
    }

    /// c·τ^k
    pub fn monomial(&self, c: R::Elem, k: usize) -> TauPoly<R::Elem> {
        let mut v = vec![self.base.zero(); k];
        v.push(c);
        self.from_coeffs(v)
    }

    pub fn add(&self, f: &TauPoly<R::Elem>, g: &TauPoly<R::Elem>) -> TauPoly<R::Elem> {
        let n = f.coeffs.len().max(g.coeffs.len());
        let z = self.base.zero();
        self.from_coeffs(
            (0..n)
                .map(|i| self.base.add(f.coeffs.get(i).unwrap_or(&z), g.coeffs.get(i).unwrap_or(&z)))
                .collect(),
        )
    }

    pub fn scale(&self, f: &TauPoly<R::Elem>, c: Fq) -> TauPoly<R::Elem> {
        self.from_coeffs(f.coeffs.iter().map(|x| self.base.scale(x, c)).collect())
    }

    /// Composition `f ∘ g`: `Σ_{i,j} f_i·g_j^{q^i} τ^{i+j}`.
    pub fn mul(&self, f: &TauPoly<R::Elem>, g: &TauPoly<R::Elem>) -> TauPoly<R::Elem> {
        if f.coeffs.is_empty() || g.coeffs.is_empty() {
            return self.zero();
        }
        let r = &self.base;
        let mut out = vec![r.zero(); f.coeffs.len() + g.coeffs.len() - 1];
        let mut twisted = g.coeffs.clone();
        for (i, fi) in f.coeffs.iter().enumerate() {
            if i > 0 {
                twisted = twisted.iter().map(|x| r.frobenius_q(x)).collect();
            }
            if r.is_zero(fi) {
                continue;
            }
            for (j, gj) in twisted.iter().enumerate() {
                if !r.is_zero(gj) {
                    out[i + j] = r.add(&out[i + j], &r.mul(fi, gj));
                }
            }
        }
        self.from_coeffs(out)
    }

    /// Evaluates the additive polynomial at `x` in an R-algebra S, coefficients
    /// mapped by `coef`, using `frob` for the q-power map on S.
    pub fn eval_in<S: Ring>(
        &self,
        target: &S,
        f: &TauPoly<R::Elem>,
        x: &S::Elem,
        coef: impl Fn(&R::Elem) -> S::Elem,
        frob: impl Fn(&S::Elem) -> S::Elem,
    ) -> S::Elem {
        let mut acc = target.zero();
        let mut xp = x.clone();
        for (i, c) in f.coeffs.iter().enumerate() {
            if i > 0 {
                xp = frob(&xp);
            }
            if !self.base.is_zero(c) {
                acc = target.add(&acc, &target.mul(&coef(c), &xp));
            }
        }
        acc
    }

    /// Evaluates at an element of R itself.
    pub fn eval(&self, f: &TauPoly<R::Elem>, x: &R::Elem) -> R::Elem {
        let r = &self.base;
        self.eval_in(r, f, x, |c| c.clone(), |y| r.frobenius_q(y))
    }

    /// The additive polynomial as text in `X`, descending degree.
    pub fn format_x(&self, f: &TauPoly<R::Elem>) -> String {
        let q = self.base.field().q() as u64;
        let parts: Vec<String> = f
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !self.base.is_zero(c))
            .map(|(i, c)| {
                let e = q.pow(i as u32);
                let mono = if e == 1 { "X".to_string() } else { format!("X^{e}") };
                let cs = self.base.format(c);
                if self.base.is_one(c) {
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
}

/// A rank-r Drinfeld module `ρ_T = T + g_1τ + … + g_{r−1}τ^{r−1} + Δτ^r`.
#[derive(Clone, Debug)]
pub struct DrinfeldModule<R: AAlgebra> {
    tau: TauRing<R>,
    g: Vec<R::Elem>,
    delta: R::Elem,
    rho_t: TauPoly<R::Elem>,
}

impl<R: AAlgebra> DrinfeldModule<R> {
    /// `g` are g_1 … g_{r−1}; Δ must be nonzero.
    pub fn new(base: R, g: Vec<R::Elem>, delta: R::Elem) -> Result<Self> {
        if base.is_zero(&delta) {
            return Err(Error::InvalidArgument("Drinfeld module needs Δ ≠ 0".into()));
        }
        let tau = TauRing::new(base);
        let mut c = vec![tau.base().from_poly(&Poly::t())];
        c.extend(g.iter().cloned());
        c.push(delta.clone());
        let rho_t = TauPoly { coeffs: c };
        Ok(DrinfeldModule { tau, g, delta, rho_t })
    }

    /// The Carlitz module ρ_T = T + τ over the given A-algebra.
    pub fn carlitz_over(base: R) -> Self {
        let one = base.one();
        Self::new(base, Vec::new(), one).expect("1 ≠ 0")
    }

    pub fn rank(&self) -> usize {
        self.g.len() + 1
    }
    pub fn q(&self) -> u32 {
        self.tau.base().field().q()
    }
    pub fn tau(&self) -> &TauRing<R> {
        &self.tau
    }
    pub fn base(&self) -> &R {
        self.tau.base()
    }
    pub fn g(&self) -> &[R::Elem] {
        &self.g
    }
    pub fn delta(&self) -> &R::Elem {
        &self.delta
    }
    pub fn rho_t(&self) -> &TauPoly<R::Elem> {
        &self.rho_t
    }

    /// ρ_a = Σ a_k ρ_{T^k}, with ρ_{T^k} = ρ_T ∘ ρ_{T^{k−1}}.
    pub fn phi(&self, a: &Poly) -> Result<TauPoly<R::Elem>> {
        if a.is_zero() {
            return Err(Error::InvalidArgument("ρ_a needs a ≠ 0".into()));
        }
        let mut acc = self.tau.zero();
        let mut pw = self.tau.one();
        for (k, &c) in a.coeffs().iter().enumerate() {
            if k > 0 {
                pw = self.tau.mul(&self.rho_t, &pw);
            }
            if c != Fq::ZERO {
                acc = self.tau.add(&acc, &self.tau.scale(&pw, c));
            }
        }
        Ok(acc)
    }

    /// ρ_n as an additive polynomial; the X-polynomial has degree q^{r·deg n}.
    pub fn torsion_polynomial(&self, n: &Poly) -> Result<TauPoly<R::Elem>> {
        self.phi(n)
    }
}

/// The Carlitz module over A itself.
pub fn carlitz(field: &FiniteField) -> DrinfeldModule<PolyRing> {
    DrinfeldModule::carlitz_over(PolyRing::new(field.clone()))
}

/// ρ^C_n(X)/X as a dense polynomial in X over A, low degree first.
pub fn carlitz_torsion_quotient(field: &FiniteField, n: &Poly) -> Result<Vec<Poly>> {
    let c = carlitz(field);
    let f = c.phi(n)?;
    let q = field.q() as usize;
    let top = q.pow(f.degree().unwrap() as u32);
    let mut out = vec![Poly::zero(); top];
    for (i, ci) in f.coeffs().iter().enumerate() {
        out[q.pow(i as u32) - 1] = ci.clone();
    }
    Ok(out)
}
