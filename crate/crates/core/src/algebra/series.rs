use std::collections::BTreeMap;

use crate::algebra::ring::Ring;
use crate::error::{Error, Result};

/// A truncated Laurent series `Σ c_n t^{n/D}` known for all exponents below
/// `prec/D`. Exponents are stored as integer numerators over the grid `D`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FracLaurentSeries<E> {
    denom: i64,
    coeffs: BTreeMap<i64, E>,
    prec: i64,
    leading_cancelled: bool,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl<E: Clone + PartialEq> FracLaurentSeries<E> {
    /// The zero series, unknown from `prec/denom` on.
    pub fn zero(denom: i64, prec: i64) -> Self {
        assert!(denom >= 1, "grid denominator must be positive");
        FracLaurentSeries { denom, coeffs: BTreeMap::new(), prec, leading_cancelled: false }
    }

    /// Builds a series from (numerator, coefficient) pairs, dropping zeros and
    /// everything at or beyond `prec`.
    pub fn from_terms<R: Ring<Elem = E>>(
        r: &R,
        denom: i64,
        terms: impl IntoIterator<Item = (i64, E)>,
        prec: i64,
    ) -> Self {
        let mut s = Self::zero(denom, prec);
        for (n, c) in terms {
            if n < prec {
                s.add_term(r, n, c);
            }
        }
        s
    }

    pub fn monomial<R: Ring<Elem = E>>(r: &R, c: E, num: i64, denom: i64, prec: i64) -> Self {
        Self::from_terms(r, denom, [(num, c)], prec)
    }

    pub fn one<R: Ring<Elem = E>>(r: &R, denom: i64, prec: i64) -> Self {
        Self::monomial(r, r.one(), 0, denom, prec)
    }

    fn add_term<R: Ring<Elem = E>>(&mut self, r: &R, n: i64, c: E) {
        if r.is_zero(&c) {
            return;
        }
        match self.coeffs.entry(n) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = r.add(o.get(), &c);
                if r.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn denom(&self) -> i64 {
        self.denom
    }
    pub fn prec_num(&self) -> i64 {
        self.prec
    }
    /// Order numerator; equals the precision when no coefficient is known to be nonzero.
    pub fn ord_num(&self) -> i64 {
        self.coeffs.keys().next().copied().unwrap_or(self.prec)
    }
    pub fn is_zero_to_prec(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn leading(&self) -> Option<&E> {
        self.coeffs.values().next()
    }
    /// Set when a product of nonzero leading coefficients vanished (zero divisors).
    pub fn leading_cancelled(&self) -> bool {
        self.leading_cancelled
    }
    pub fn terms(&self) -> &BTreeMap<i64, E> {
        &self.coeffs
    }
    pub fn coeff<R: Ring<Elem = E>>(&self, r: &R, n: i64) -> Result<E> {
        if n >= self.prec {
            return Err(Error::PrecisionShortfall(format!(
                "coefficient {n}/{} requested beyond precision {}/{}",
                self.denom, self.prec, self.denom
            )));
        }
        Ok(self.coeffs.get(&n).cloned().unwrap_or_else(|| r.zero()))
    }

    /// Drops everything from `prec` on (never raises precision).
    pub fn truncate(&self, prec: i64) -> Self {
        let prec = prec.min(self.prec);
        FracLaurentSeries {
            denom: self.denom,
            coeffs: self.coeffs.range(..prec).map(|(k, v)| (*k, v.clone())).collect(),
            prec,
            leading_cancelled: self.leading_cancelled,
        }
    }

    /// Same series on the finer grid `new_denom` (a multiple of the current one).
    pub fn regrid(&self, new_denom: i64) -> Result<Self> {
        if new_denom % self.denom != 0 {
            return Err(Error::GridMismatch(self.denom, new_denom));
        }
        let f = new_denom / self.denom;
        Ok(FracLaurentSeries {
            denom: new_denom,
            coeffs: self.coeffs.iter().map(|(k, v)| (k * f, v.clone())).collect(),
            prec: self.prec * f,
            leading_cancelled: self.leading_cancelled,
        })
    }

    /// Coarsest grid holding every stored exponent and the precision.
    pub fn reduce_grid(&self) -> Self {
        let mut g = gcd(self.denom, self.prec);
        for k in self.coeffs.keys() {
            g = gcd(g, *k);
        }
        if g <= 1 {
            return self.clone();
        }
        FracLaurentSeries {
            denom: self.denom / g,
            coeffs: self.coeffs.iter().map(|(k, v)| (k / g, v.clone())).collect(),
            prec: self.prec / g,
            leading_cancelled: self.leading_cancelled,
        }
    }

    /// True if every exponent is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.keys().all(|k| k % self.denom == 0)
    }

    fn check_grid(&self, other: &Self) -> Result<()> {
        if self.denom != other.denom {
            return Err(Error::GridMismatch(self.denom, other.denom));
        }
        Ok(())
    }

    /// Multiplication by t^{num/D}.
    pub fn shift(&self, num: i64) -> Self {
        FracLaurentSeries {
            denom: self.denom,
            coeffs: self.coeffs.iter().map(|(k, v)| (k + num, v.clone())).collect(),
            prec: self.prec + num,
            leading_cancelled: self.leading_cancelled,
        }
    }

    pub fn map_coeffs<S: Ring>(&self, target: &S, f: impl Fn(&E) -> S::Elem) -> FracLaurentSeries<S::Elem> {
        FracLaurentSeries::from_terms(target, self.denom, self.coeffs.iter().map(|(k, v)| (*k, f(v))), self.prec)
    }

    pub fn try_map_coeffs<S: Ring>(
        &self,
        target: &S,
        f: impl Fn(&E) -> Result<S::Elem>,
    ) -> Result<FracLaurentSeries<S::Elem>> {
        let mut terms = Vec::with_capacity(self.coeffs.len());
        for (k, v) in &self.coeffs {
            terms.push((*k, f(v)?));
        }
        Ok(FracLaurentSeries::from_terms(target, self.denom, terms, self.prec))
    }

    pub fn add<R: Ring<Elem = E>>(&self, r: &R, other: &Self) -> Result<Self> {
        self.check_grid(other)?;
        let prec = self.prec.min(other.prec);
        let mut s = self.truncate(prec);
        for (k, v) in other.coeffs.range(..prec) {
            s.add_term(r, *k, v.clone());
        }
        s.leading_cancelled = self.leading_cancelled || other.leading_cancelled;
        Ok(s)
    }

    pub fn neg<R: Ring<Elem = E>>(&self, r: &R) -> Self {
        FracLaurentSeries {
            denom: self.denom,
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, r.neg(v))).collect(),
            prec: self.prec,
            leading_cancelled: self.leading_cancelled,
        }
    }

    pub fn sub<R: Ring<Elem = E>>(&self, r: &R, other: &Self) -> Result<Self> {
        self.add(r, &other.neg(r))
    }

    /// Multiplication by a constant of the coefficient ring.
    pub fn scale<R: Ring<Elem = E>>(&self, r: &R, c: &E) -> Self {
        let terms: Vec<_> = self.coeffs.iter().map(|(k, v)| (*k, r.mul(v, c))).collect();
        let mut s = Self::from_terms(r, self.denom, terms, self.prec);
        s.leading_cancelled = self.leading_cancelled;
        s
    }

    /// Product; precision `min(prec(a)+ord(b), prec(b)+ord(a))`.
    pub fn mul<R: Ring<Elem = E>>(&self, r: &R, other: &Self) -> Result<Self> {
        self.check_grid(other)?;
        let prec = (self.prec + other.ord_num()).min(other.prec + self.ord_num());
        let mut out: BTreeMap<i64, E> = BTreeMap::new();
        for (i, a) in &self.coeffs {
            if i + other.ord_num() >= prec {
                break;
            }
            for (j, b) in &other.coeffs {
                let k = i + j;
                if k >= prec {
                    break;
                }
                let c = r.mul(a, b);
                if r.is_zero(&c) {
                    continue;
                }
                match out.entry(k) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        *o.get_mut() = r.add(o.get(), &c);
                    }
                }
            }
        }
        out.retain(|_, v| !r.is_zero(v));
        let lead_sum = self.ord_num() + other.ord_num();
        let cancelled = !self.coeffs.is_empty()
            && !other.coeffs.is_empty()
            && lead_sum < prec
            && r.is_zero(&r.mul(self.leading().unwrap(), other.leading().unwrap()));
        Ok(FracLaurentSeries {
            denom: self.denom,
            coeffs: out,
            prec,
            leading_cancelled: cancelled || self.leading_cancelled || other.leading_cancelled,
        })
    }

    /// Splits a series with a known nonzero leading term as `c·t^{o/D}·(1+h)`,
    /// returning (o, c, 1+h). The leading coefficient must be a unit.
    fn normalize<R: Ring<Elem = E>>(&self, r: &R) -> Result<(i64, E, Self)> {
        let (&o, c) = self.coeffs.iter().next().ok_or_else(|| {
            Error::PrecisionShortfall("series has no known nonzero term".into())
        })?;
        let cinv = r.try_inv(c)?;
        Ok((o, c.clone(), self.shift(-o).scale(r, &cinv)))
    }

    /// Multiplicative inverse; the leading coefficient must be a unit.
    /// The result is known up to `prec − 2·ord`.
    pub fn inverse<R: Ring<Elem = E>>(&self, r: &R) -> Result<Self> {
        let (o, c, u) = self.normalize(r)?;
        let cinv = r.try_inv(&c)?;
        let n = u.prec;
        let h: Vec<(i64, E)> = u.coeffs.iter().filter(|(k, _)| **k > 0).map(|(k, v)| (*k, v.clone())).collect();
        let mut b: Vec<Option<E>> = vec![None; n.max(0) as usize];
        if n > 0 {
            b[0] = Some(r.one());
        }
        for k in 1..n {
            let mut acc: Option<E> = None;
            for (i, hi) in &h {
                if *i > k {
                    break;
                }
                if let Some(bv) = &b[(k - i) as usize] {
                    let t = r.mul(hi, bv);
                    acc = Some(match acc {
                        None => t,
                        Some(a) => r.add(&a, &t),
                    });
                }
            }
            b[k as usize] = acc.map(|a| r.neg(&a)).filter(|a| !r.is_zero(a));
        }
        let terms = b.into_iter().enumerate().filter_map(|(k, v)| v.map(|v| (k as i64, v)));
        let inv = Self::from_terms(r, self.denom, terms, n);
        Ok(inv.scale(r, &cinv).shift(-o))
    }

    /// Frobenius: coefficients to the p-th power, exponents and precision times p.
    pub fn pth_power<R: Ring<Elem = E>>(&self, r: &R) -> Self {
        let p = r.characteristic() as i64;
        let terms: Vec<_> = self.coeffs.iter().map(|(k, v)| (k * p, r.pth_power(v))).collect();
        Self::from_terms(r, self.denom, terms, self.prec * p)
    }

    /// Natural power via base-p digits, so each digit costs at most p−1 products.
    pub fn pow<R: Ring<Elem = E>>(&self, r: &R, n: u64) -> Result<Self> {
        let p = r.characteristic() as u64;
        let mut acc: Option<Self> = None;
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            let d = n % p;
            for _ in 0..d {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(r, &base)?,
                });
            }
            n /= p;
            if n > 0 {
                base = base.pth_power(r);
            }
        }
        Ok(acc.unwrap_or_else(|| Self::one(r, self.denom, self.prec - self.ord_num())))
    }

    /// Integer power; negative exponents go through `inverse`.
    pub fn pow_int<R: Ring<Elem = E>>(&self, r: &R, n: i64) -> Result<Self> {
        if n >= 0 {
            self.pow(r, n as u64)
        } else {
            self.inverse(r)?.pow(r, n.unsigned_abs())
        }
    }

    /// `self^{num/den}` for a series whose leading coefficient is 1, with
    /// p ∤ den. The result is the unique power with leading coefficient 1;
    /// its exponent `ord·num/den` must land on the grid.
    pub fn pow_frac<R: Ring<Elem = E>>(&self, r: &R, num: i64, den: i64) -> Result<Self> {
        if den <= 0 {
            return Err(Error::InvalidArgument("exponent denominator must be positive".into()));
        }
        let p = r.characteristic() as i64;
        if den % p == 0 {
            return Err(Error::InvalidArgument("exponent denominator divisible by p".into()));
        }
        let (o, c, u) = self.normalize(r)?;
        if !r.is_one(&c) {
            return Err(Error::InvalidArgument("fractional power needs leading coefficient 1".into()));
        }
        if (o * num) % den != 0 {
            return Err(Error::GridMismatch(self.denom, den));
        }
        let new_ord = o * num / den;
        let span = u.prec.max(1);
        // (1+h)^{p^L} ≡ 1 to the working precision once p^L ≥ span, so the
        // exponent only matters modulo p^L.
        let mut pl: i128 = 1;
        while pl < span as i128 {
            pl *= p as i128;
        }
        let den_inv = mod_inverse(den as i128, pl).expect("p does not divide den");
        let e = ((num as i128).rem_euclid(pl) * den_inv).rem_euclid(pl) as u64;
        let base = u.truncate(span);
        let res = if e == 0 { Self::one(r, self.denom, span) } else { base.pow(r, e)? };
        Ok(res.truncate(span).shift(new_ord))
    }

    /// Substitutes `sub` (ord > 0) into an integral Laurent series on the grid 1.
    /// Result precision `min(m·prec, m·ord + ρ)` where m = ord(sub) and ρ is
    /// the relative precision of `sub`.
    pub fn compose<R: Ring<Elem = E>>(&self, r: &R, sub: &Self) -> Result<Self> {
        if self.denom != 1 {
            return Err(Error::GridMismatch(self.denom, 1));
        }
        let m = sub.ord_num();
        if sub.is_zero_to_prec() || m <= 0 {
            return Err(Error::InvalidArgument("substituted series must have positive order".into()));
        }
        let rho = sub.prec - m;
        let oa = self.ord_num();
        let prec = (m * self.prec).min(m * oa + rho);
        let mut acc = Self::zero(sub.denom, prec);
        if self.coeffs.is_empty() {
            return Ok(acc);
        }
        let mut cur = sub.pow_int(r, oa)?.truncate(prec);
        let last = *self.coeffs.keys().next_back().unwrap();
        let mut i = oa;
        loop {
            if let Some(c) = self.coeffs.get(&i) {
                acc = acc.add(r, &cur.scale(r, c).truncate(prec))?;
            }
            if i >= last || m * (i + 1) >= prec {
                break;
            }
            cur = cur.mul(r, sub)?.truncate(prec);
            i += 1;
        }
        Ok(acc.truncate(prec))
    }

    /// Equality of the known coefficients below `prec`; errors if either side
    /// is not known that far.
    pub fn agrees_to<R: Ring<Elem = E>>(&self, other: &Self, prec: i64) -> Result<bool> {
        self.check_grid(other)?;
        if self.prec < prec || other.prec < prec {
            return Err(Error::PrecisionShortfall(format!(
                "comparison to {prec} needs both precisions ({}, {})",
                self.prec, other.prec
            )));
        }
        Ok(self.coeffs.range(..prec).eq(other.coeffs.range(..prec)))
    }

    /// `(numerator, coefficient string)` pairs in increasing exponent order.
    pub fn formatted_terms<R: Ring<Elem = E>>(&self, r: &R) -> Vec<(i64, String)> {
        self.coeffs.iter().map(|(k, v)| (*k, r.format(v))).collect()
    }

    /// Text form in the variable `var`, e.g. `t^(-1)+T*t^(1/3)+O(t^2)`.
    pub fn format_with<R: Ring<Elem = E>>(&self, r: &R, var: &str) -> String {
        let exp = |n: i64| {
            let g = gcd(n, self.denom);
            let (a, b) = (n / g, self.denom / g);
            if b == 1 {
                format!("{a}")
            } else {
                format!("({a}/{b})")
            }
        };
        let mut parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(k, v)| {
                let cs = r.format(v);
                let cs = if cs.contains('+') || cs.contains('/') { format!("({cs})") } else { cs };
                if *k == 0 {
                    cs
                } else {
                    let mono = if *k == self.denom { var.to_string() } else { format!("{var}^{}", exp(*k)) };
                    if r.is_one(v) {
                        mono
                    } else {
                        format!("{cs}*{mono}")
                    }
                }
            })
            .collect();
        parts.push(format!("O({var}^{})", exp(self.prec)));
        parts.join("+")
    }
}

fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1 || m == 1).then(|| old_s.rem_euclid(m))
}
