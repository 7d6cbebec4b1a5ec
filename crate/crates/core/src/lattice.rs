//! Sublattices Λ̃ ⊂ Λ = A^r with Λ/Λ̃ ≅ A/nA: Hermite enumeration, the
//! closed count and Smith normal form over A.
//!
//! Coordinates are (z_r, π_1, …, π_{r−1}): row 0 of a Hermite matrix is
//! w_r = n_1 z_r + λ, the remaining rows span Λ̃ ∩ Λ_{r−1}.

use num_rational::Ratio;
use rayon::prelude::*;

use crate::algebra::poly::{Poly, PolyRing};
use crate::algebra::ring::Ring;
use crate::error::{Error, Result};

/// An upper triangular matrix over A, rows are basis vectors.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeMatrix {
    pub rows: Vec<Vec<Poly>>,
}

impl LatticeMatrix {
    pub fn dim(&self) -> usize {
        self.rows.len()
    }
    pub fn diagonal(&self) -> Vec<Poly> {
        (0..self.dim()).map(|i| self.rows[i][i].clone()).collect()
    }
    pub fn n1(&self) -> &Poly {
        &self.rows[0][0]
    }
    /// Product of the lower diagonal entries: Λ_{r−1}/Λ̃_{r−1} ≅ A/n_2.
    pub fn n2(&self, a: &PolyRing) -> Poly {
        self.diagonal()[1..].iter().fold(Poly::one(), |acc, d| a.mul(&acc, d))
    }
    /// The entries λ of row 0 off the diagonal.
    pub fn lambda(&self) -> &[Poly] {
        &self.rows[0][1..]
    }
    pub fn entries_as_strings(&self, a: &PolyRing) -> Vec<Vec<String>> {
        self.rows.iter().map(|r| r.iter().map(|p| a.format_in(p, "T")).collect()).collect()
    }
    /// `"T,0;0,1"`
    pub fn format(&self, a: &PolyRing) -> String {
        self.entries_as_strings(a).iter().map(|r| r.join(",")).collect::<Vec<_>>().join(";")
    }
}

/// Monic invariant factors d_1 | d_2 | … | d_r of a square nonsingular matrix.
pub fn smith_normal_form(a: &PolyRing, m: &[Vec<Poly>]) -> Result<Vec<Poly>> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument("Smith normal form needs a square matrix".into()));
    }
    let mut mat: Vec<Vec<Poly>> = m.to_vec();
    for t in 0..n {
        loop {
            let mut best: Option<(usize, usize, usize)> = None;
            for (i, row) in mat.iter().enumerate().skip(t) {
                for (j, x) in row.iter().enumerate().skip(t) {
                    if let Some(d) = x.degree() {
                        if best.is_none_or(|(_, _, bd)| d < bd) {
                            best = Some((i, j, d));
                        }
                    }
                }
            }
            let (pi, pj, _) = best.ok_or(Error::SingularMatrix)?;
            mat.swap(t, pi);
            for row in mat.iter_mut() {
                row.swap(t, pj);
            }
            let piv = mat[t][t].clone();
            let mut clean = true;
            for i in t + 1..n {
                if mat[i][t].is_zero() {
                    continue;
                }
                let (qt, r) = a.divmod(&mat[i][t], &piv)?;
                for j in t..n {
                    let v = a.sub(&mat[i][j], &a.mul(&qt, &mat[t][j]));
                    mat[i][j] = v;
                }
                clean &= r.is_zero();
            }
            for j in t + 1..n {
                if mat[t][j].is_zero() {
                    continue;
                }
                let (qt, r) = a.divmod(&mat[t][j], &piv)?;
                for row in mat.iter_mut().skip(t) {
                    let v = a.sub(&row[j], &a.mul(&qt, &row[t]));
                    row[j] = v;
                }
                clean &= r.is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..n).find(|&i| (t + 1..n).any(|j| !a.divides(&piv, &mat[i][j])));
            match bad {
                Some(i) => {
                    for j in t..n {
                        let v = a.add(&mat[t][j], &mat[i][j]);
                        mat[t][j] = v;
                    }
                }
                None => break,
            }
        }
    }
    Ok((0..n).map(|i| a.monic(&mat[i][i])).collect())
}

/// The quotient A^r/(rows of m) is cyclic ≅ A/nA.
pub fn is_cyclic_of_level(a: &PolyRing, m: &[Vec<Poly>], n: &Poly) -> Result<bool> {
    let s = smith_normal_form(a, m)?;
    let k = s.len();
    Ok(s[..k - 1].iter().all(|d| a.is_one(d)) && s[k - 1] == a.monic(n))
}

/// Ordered factorisations n = d_0 ⋯ d_{r−1} into monic factors.
fn ordered_factorisations(a: &PolyRing, n: &Poly, r: usize) -> Vec<Vec<Poly>> {
    if r == 1 {
        return vec![vec![n.clone()]];
    }
    let mut out = Vec::new();
    for d in a.monic_divisors(n) {
        let rest = a.div_exact(n, &d).expect("divisor");
        for mut tail in ordered_factorisations(a, &rest, r - 1) {
            let mut v = vec![d.clone()];
            v.append(&mut tail);
            out.push(v);
        }
    }
    out
}

/// All Hermite matrices with the given diagonal: entries above d_j have degree < deg d_j.
fn hermite_with_diagonal(a: &PolyRing, diag: &[Poly]) -> Vec<LatticeMatrix> {
    let r = diag.len();
    let slots: Vec<(usize, usize)> = (0..r).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    let choices: Vec<Vec<Poly>> =
        slots.iter().map(|&(_, j)| a.reduced_residues(diag[j].degree().unwrap())).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; slots.len()];
    loop {
        let mut rows = vec![vec![Poly::zero(); r]; r];
        for (i, d) in diag.iter().enumerate() {
            rows[i][i] = d.clone();
        }
        for (s, &(i, j)) in slots.iter().enumerate() {
            rows[i][j] = choices[s][idx[s]].clone();
        }
        out.push(LatticeMatrix { rows });
        let mut s = 0;
        loop {
            if s == slots.len() {
                return out;
            }
            idx[s] += 1;
            if idx[s] < choices[s].len() {
                break;
            }
            idx[s] = 0;
            s += 1;
        }
    }
}

/// Every sublattice with quotient ≅ A/nA, as reduced Hermite matrices, in a
/// fixed order (diagonals by factorisation order, then entries).
pub fn enumerate_cyclic_sublattices(a: &PolyRing, n: &Poly, r: usize) -> Result<Vec<LatticeMatrix>> {
    if n.is_zero() || !n.is_monic() {
        return Err(Error::InvalidArgument("level must be monic and nonzero".into()));
    }
    if r == 0 {
        return Err(Error::InvalidArgument("rank must be >= 1".into()));
    }
    let diags = ordered_factorisations(a, n, r);
    let parts: Vec<Vec<LatticeMatrix>> = diags
        .par_iter()
        .map(|d| -> Result<Vec<LatticeMatrix>> {
            let mut keep = Vec::new();
            for m in hermite_with_diagonal(a, d) {
                if is_cyclic_of_level(a, &m.rows, n)? {
                    keep.push(m);
                }
            }
            Ok(keep)
        })
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().flatten().collect())
}

/// `f(n, r) = |n|^{r−1} ∏_{p|n} (|p|^r − 1)/(|p|^r − |p|^{r−1})`, evaluated
/// prime by prime as |p|^{(e−1)(r−1)}·(|p|^r − 1)/(|p| − 1).
pub fn count_cyclic_sublattices(a: &PolyRing, n: &Poly, r: usize) -> Result<u128> {
    if n.is_zero() || !n.is_monic() {
        return Err(Error::InvalidArgument("level must be monic and nonzero".into()));
    }
    let overflow = || Error::InvalidArgument("sublattice count overflows u128".into());
    let mut total: u128 = 1;
    for (p, e) in a.factor(n)? {
        let np = a.norm(&p)?;
        let pr = np.checked_pow(r as u32).ok_or_else(overflow)?;
        let head = np.checked_pow((e - 1) * (r as u32 - 1)).ok_or_else(overflow)?;
        let f = head.checked_mul((pr - 1) / (np - 1)).ok_or_else(overflow)?;
        total = total.checked_mul(f).ok_or_else(overflow)?;
    }
    Ok(total)
}

/// The variant with numerator ∏ |p|^r, i.e. |n|^{r−1} ∏ |p|/(|p|−1); it need
/// not be an integer.
pub fn count_with_power_numerator(a: &PolyRing, n: &Poly, r: usize) -> Result<Ratio<i128>> {
    let overflow = || Error::InvalidArgument("count overflows".into());
    let nn = i128::try_from(a.norm(n)?).map_err(|_| overflow())?;
    let mut v = Ratio::from_integer(nn.checked_pow(r as u32 - 1).ok_or_else(overflow)?);
    for (p, _) in a.factor(n)? {
        let np = i128::try_from(a.norm(&p)?).map_err(|_| overflow())?;
        v *= Ratio::new(np, np - 1);
    }
    Ok(v)
}

/// Rank-2 sublattice data: w = n_1 z + λ π, Λ̃ ∩ Λ_1 = n_2 Λ_1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shape2 {
    pub n1: Poly,
    pub n2: Poly,
    pub lambda: Poly,
}

impl Shape2 {
    pub fn matrix(&self) -> LatticeMatrix {
        LatticeMatrix { rows: vec![vec![self.n1.clone(), self.lambda.clone()], vec![Poly::zero(), self.n2.clone()]] }
    }
}

pub fn shapes_rank2(a: &PolyRing, n: &Poly) -> Result<Vec<Shape2>> {
    Ok(enumerate_cyclic_sublattices(a, n, 2)?
        .into_iter()
        .map(|m| Shape2 { n1: m.rows[0][0].clone(), n2: m.rows[1][1].clone(), lambda: m.rows[0][1].clone() })
        .collect())
}

/// Whether every row of `inner` lies in the A-span of the rows of `outer`
/// (both upper triangular, `outer` nonsingular).
pub fn contains(a: &PolyRing, outer: &LatticeMatrix, inner: &LatticeMatrix) -> bool {
    let r = outer.dim();
    inner.rows.iter().all(|v| {
        let mut v = v.clone();
        for i in 0..r {
            match a.divmod(&v[i], &outer.rows[i][i]) {
                Ok((x, rem)) if rem.is_zero() => {
                    for (j, vj) in v.iter_mut().enumerate().skip(i) {
                        *vj = a.sub(vj, &a.mul(&x, &outer.rows[i][j]));
                    }
                }
                _ => return false,
            }
        }
        true
    })
}

/// For each lattice in `fine`, how many lattices in `coarse` contain it.
pub fn containment_counts(a: &PolyRing, fine: &[LatticeMatrix], coarse: &[LatticeMatrix]) -> Vec<usize> {
    fine.par_iter().map(|m| coarse.iter().filter(|c| contains(a, c, m)).count()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{FiniteField, Fq};
    use proptest::prelude::*;

    fn ring(q: u64) -> PolyRing {
        PolyRing::new(FiniteField::with_order(q).unwrap())
    }
    fn p(c: &[u32]) -> Poly {
        Poly::from_coeffs(c.iter().map(|&x| Fq(x)).collect())
    }

    #[test]
    fn snf_examples() {
        let a = ring(2);
        let t = Poly::t();
        let one = Poly::one();
        let id = vec![vec![one.clone(), Poly::zero()], vec![Poly::zero(), one.clone()]];
        assert_eq!(smith_normal_form(&a, &id).unwrap(), vec![one.clone(), one.clone()]);
        let dtt = vec![vec![t.clone(), Poly::zero()], vec![Poly::zero(), t.clone()]];
        assert_eq!(smith_normal_form(&a, &dtt).unwrap(), vec![t.clone(), t.clone()]);
        let m = vec![vec![t.clone(), one.clone()], vec![Poly::zero(), t.clone()]];
        assert_eq!(smith_normal_form(&a, &m).unwrap(), vec![one, p(&[0, 0, 1])]);
        let sing = vec![vec![t.clone(), t.clone()], vec![t.clone(), t]];
        assert!(matches!(smith_normal_form(&a, &sing), Err(Error::SingularMatrix)));
    }

    #[test]
    fn enumeration_examples() {
        let a = ring(2);
        let t = Poly::t();
        let e = enumerate_cyclic_sublattices(&a, &t, 2).unwrap();
        let got: Vec<String> = e.iter().map(|m| m.format(&a)).collect();
        assert_eq!(got, vec!["1,0;0,T", "1,1;0,T", "T,0;0,1"]);
        assert_eq!(enumerate_cyclic_sublattices(&a, &Poly::one(), 3).unwrap().len(), 1);
        let t2 = p(&[0, 0, 1]);
        let e2 = enumerate_cyclic_sublattices(&a, &t2, 2).unwrap();
        assert_eq!(e2.len(), 6);
        let tt1 = LatticeMatrix { rows: vec![vec![t.clone(), Poly::one()], vec![Poly::zero(), t.clone()]] };
        let tt0 = LatticeMatrix { rows: vec![vec![t.clone(), Poly::zero()], vec![Poly::zero(), t.clone()]] };
        assert!(e2.contains(&tt1));
        assert!(!e2.contains(&tt0));
    }

    #[test]
    fn count_examples() {
        let a = ring(2);
        let t = Poly::t();
        assert_eq!(count_cyclic_sublattices(&a, &t, 2).unwrap(), 3);
        assert_eq!(count_cyclic_sublattices(&a, &Poly::one(), 4).unwrap(), 1);
        assert_eq!(count_cyclic_sublattices(&a, &t, 3).unwrap(), 7);
        assert_eq!(count_cyclic_sublattices(&a, &p(&[0, 0, 1]), 2).unwrap(), 6);
        assert_eq!(count_with_power_numerator(&a, &t, 2).unwrap(), Ratio::from_integer(4));
    }

    #[test]
    fn rank2_shapes() {
        let a = ring(3);
        let t = Poly::t();
        let s = shapes_rank2(&a, &t).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(s.iter().filter(|x| x.n1 == t).count(), 1);
        assert!(s.iter().filter(|x| x.n2 == t).all(|x| x.n1.degree() == Some(0)));
    }

    #[test]
    fn tower_has_unique_intermediate() {
        for q in [2u64, 3] {
            let a = ring(q);
            for r in [2usize, 3] {
                let fine = enumerate_cyclic_sublattices(&a, &p(&[0, 0, 1]), r).unwrap();
                let coarse = enumerate_cyclic_sublattices(&a, &Poly::t(), r).unwrap();
                assert!(containment_counts(&a, &fine, &coarse).iter().all(|&c| c == 1));
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn multiplicative_on_coprime(c1 in 0u32..2, c2 in 0u32..2, r in 2usize..4) {
            let a = ring(2);
            let n = p(&[c1, 1]);
            let m = p(&[1 - c1, c2, 1]);
            prop_assume!(a.is_one(&a.gcd(&n, &m).unwrap()));
            let nm = a.mul(&n, &m);
            let f = |x: &Poly| count_cyclic_sublattices(&a, x, r).unwrap();
            prop_assert_eq!(f(&n) * f(&m), f(&nm));
            prop_assert_eq!(enumerate_cyclic_sublattices(&a, &nm, r).unwrap().len() as u128, f(&nm));
        }

        #[test]
        fn snf_determinant(entries in proptest::collection::vec(proptest::collection::vec(0u32..2, 3), 4)) {
            let a = ring(2);
            let m: Vec<Vec<Poly>> = entries.chunks(2).map(|c| c.iter().map(|v| p(v)).collect()).collect();
            let det = a.sub(&a.mul(&m[0][0], &m[1][1]), &a.mul(&m[0][1], &m[1][0]));
            prop_assume!(!det.is_zero());
            let s = smith_normal_form(&a, &m).unwrap();
            prop_assert!(a.divides(&s[0], &s[1]));
            prop_assert_eq!(a.mul(&s[0], &s[1]), a.monic(&det));
        }
    }
}
