//! u_k of a sublattice `Λ̃_r = Λ̃_{r−1} ⊕ A w_r`, `w_r = n_1 z_r + λ`, in the
//! parameter `s = q_{Λ_{r−1}}(z_r/n)`.

use crate::algebra::multipoly::{MultiPoly, MultiPolyRing};
use crate::algebra::poly::Poly;
use crate::algebra::ratfunc::{RatFunc, RatFuncField};
use crate::algebra::ring::{KAlgebra, Ring};
use crate::error::{Error, Result};
use crate::expansion::{order_of_q_scaled, ExpansionContext, Series};

/// u_k of a lattice whose own cusp parameter equals `param` (a series in s
/// with leading coefficient 1). `ctx` describes the lower part of that
/// lattice; its coefficients are moved into `target` by `embed`.
///
/// Result: `param^{−(q−1)(q^k−1)/(q^r−1)} · V_k(param)` on the (q^r−1)-grid,
/// normalised like [`ExpansionContext::u_expansion`].
pub fn compose_u<R: KAlgebra, S: Ring>(
    ctx: &ExpansionContext<R>,
    k: usize,
    target: &S,
    embed: impl Fn(&R::Elem) -> S::Elem,
    param: &Series<S::Elem>,
) -> Result<Series<S::Elem>> {
    let v = ctx.u_integral_part(k)?.map_coeffs(target, embed);
    let (m, d) = ctx.u_exponent(k);
    let c = (ctx.q() as i64 - 1) * m;
    let head = param.regrid(d)?.pow_frac(target, -c, d)?;
    let body = v.compose(target, param)?.regrid(d)?;
    head.mul(target, &body)
}

/// The data of a sublattice that the order of u_k depends on: n_1, n_2 and
/// whether the translation λ is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalShape {
    pub n1: Poly,
    pub n2: Poly,
    pub with_lambda: bool,
}

/// `−|n_1|^{2r−2}·|n_2|^{r−2}·(q−1)(q^k−1)`, the order numerator on the (q^r−1)-grid.
pub fn expected_order_num(q: u64, r: usize, k: usize, n1: &Poly, n2: &Poly) -> Result<i64> {
    let d1 = n1.degree().ok_or(Error::InvalidArgument("n1 = 0".into()))?;
    let d2 = n2.degree().ok_or(Error::InvalidArgument("n2 = 0".into()))?;
    let n = order_of_q_scaled(q, r, 2 * d1)? as i128 * (q as i128).pow(((r - 2) * d2) as u32);
    let v = -n * (q as i128 - 1) * ((q as i128).pow(k as u32) - 1);
    i64::try_from(v).map_err(|_| Error::InvalidArgument("order overflows".into()))
}

/// Outcome of a formal sublattice expansion.
#[derive(Clone, Debug)]
pub struct FormalExpansion {
    pub ring: MultiPolyRing<RatFuncField>,
    pub series: Series<MultiPoly<RatFunc>>,
    /// g_k of the scaled lower sublattice, the predicted leading coefficient.
    pub expected_leading: MultiPoly<RatFunc>,
    pub expected_order_num: i64,
}

impl FormalExpansion {
    pub fn order_matches(&self) -> bool {
        self.series.ord_num() == self.expected_order_num
            && self.series.leading() == Some(&self.expected_leading)
            && !self.series.leading_cancelled()
    }
}

/// u_k of a rank-r sublattice with every torsion value and every coefficient
/// of the isogeny polynomial left as a free symbol; only the order and the
/// leading coefficient are meaningful. `rel` is the relative precision kept.
///
/// Generators: `f1…` (e_q,… of α·Λ̃_{r−1}), `e1…` (e_q,… of Λ_{r−1}), `y`
/// (the torsion value e(λ/n_2)) and `p0…p{L−1}` (the isogeny polynomial
/// divided by its leading coefficient, L = (r−2)·deg n_2).
pub fn formal_sublattice_u(
    field: &crate::algebra::field::FiniteField,
    r: usize,
    k: usize,
    shape: &FormalShape,
    rel: i64,
) -> Result<FormalExpansion> {
    if r < 3 {
        return Err(Error::InvalidArgument("formal sublattice expansions are for r >= 3".into()));
    }
    let q = field.q() as u64;
    let l = (r - 2) * shape.n2.degree().ok_or(Error::InvalidArgument("n2 = 0".into()))?;
    let mut gens: Vec<String> = (1..=r - 2).map(|i| format!("f{i}")).collect();
    gens.extend((1..=r - 2).map(|i| format!("e{i}")));
    gens.push("y".into());
    gens.extend((0..l).map(|i| format!("p{i}")));
    let kf = RatFuncField::new(field.clone());
    let ring = MultiPolyRing::new(kf, gens);
    let gen = |i: usize| ring.gen(i);
    let lower = ExpansionContext::new(ring.clone(), r, (0..r - 2).map(|i| gen(r - 2 + i)).collect(), rel)?;
    let tilde = ExpansionContext::new(ring.clone(), r, (0..r - 2).map(gen).collect(), q as i64 + rel + 1)?;

    let a = lower.poly_ring();
    let n1sq = a.mul(&shape.n1, &shape.n1);
    let n1 = lower_order(q, r, &n1sq)?;
    let q1 = lower.q_scaled_to(&n1sq, n1 + rel)?;
    let mut inv_q = q1.inverse(&ring)?;
    if shape.with_lambda {
        let y = Series::monomial(&ring, gen(2 * (r - 2)), 0, 1, inv_q.prec_num());
        inv_q = inv_q.add(&ring, &y)?;
    }
    let step = field.e() as usize;
    let mut power = inv_q.clone();
    let mut pole = Series::zero(1, i64::MAX / 4);
    for i in 0..=l {
        let term = if i < l { power.scale(&ring, &gen(2 * (r - 2) + 1 + i)) } else { power.clone() };
        pole = pole.add(&ring, &term)?;
        if i < l {
            for _ in 0..step {
                power = power.pth_power(&ring);
            }
        }
    }
    let param = pole.inverse(&ring)?;
    let series = compose_u(&tilde, k, &ring, |c| c.clone(), &param)?;
    Ok(FormalExpansion {
        expected_leading: tilde.lower_g(k).clone(),
        expected_order_num: expected_order_num(q, r, k, &shape.n1, &shape.n2)?,
        ring,
        series,
    })
}

fn lower_order(q: u64, r: usize, a: &Poly) -> Result<i64> {
    order_of_q_scaled(q, r, a.degree().ok_or(Error::InvalidArgument("zero multiplier".into()))?)
}
