//! Sparse multivariate polynomials over the rationals and small prime fields.

mod fface;
mod field;
mod groebner;
mod ideal;
mod parse;
mod pointcount;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

pub use fface::{f_face_test, FaceEvidence, FaceMask, FaceTestMode, FaceTestOutcome, SamplingOptions};
pub use field::{Field, Fp, Rational};
pub use groebner::{groebner_basis, normal_form, s_polynomial, DEFAULT_STEP_BUDGET};
pub use ideal::PolyIdeal;
pub use parse::parse_poly;
pub use pointcount::{count_points, pointcount_dimension, DimensionEstimate, PointCount, ENUMERATION_BUDGET};

/// Exponent vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other`; the caller guarantees divisibility.
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Indices of the variables that occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] > 0).collect()
    }
}

/// Monomial orders. `Block(k)` compares the first `k` variables by degrevlex
/// and breaks ties by degrevlex on the rest; it eliminates those `k` variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex,
    DegLex,
    DegRevLex,
    Block(usize),
}

fn degrevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for i in (0..a.len()).rev() {
            if a[i] != b[i] {
                return b[i].cmp(&a[i]);
            }
        }
        Ordering::Equal
    })
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match *self {
            MonomialOrder::Lex => a.0.cmp(&b.0),
            MonomialOrder::DegLex => a.degree().cmp(&b.degree()).then_with(|| a.0.cmp(&b.0)),
            MonomialOrder::DegRevLex => degrevlex(&a.0, &b.0),
            MonomialOrder::Block(k) => {
                degrevlex(&a.0[..k], &b.0[..k]).then_with(|| degrevlex(&a.0[k..], &b.0[k..]))
            }
        }
    }
}

impl Default for MonomialOrder {
    fn default() -> Self {
        MonomialOrder::DegRevLex
    }
}

/// A polynomial in `nvars` variables; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<F: Field> {
    nvars: usize,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> Poly<F> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        Self::from_terms(nvars, [(Monomial::one(nvars), c)])
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, F::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_terms(nvars, [(Monomial::var(nvars, i), F::one())])
    }

    pub fn monomial(m: Monomial, c: F) -> Self {
        let n = m.nvars();
        Self::from_terms(n, [(m, c)])
    }

    /// Sums the given terms, dropping zeros.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, F)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "exponent vector length");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                let s = x.add(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Smallest total degree among the terms.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    /// Largest exponent of variable `i`.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.degree_in(i) > 0
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Monomial, &F)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (m, c) in &other.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&F::one().neg())
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x.mul(c))).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                p.add_term(m1.mul(m2), c1.mul(c2));
            }
        }
        p
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &F) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(x, y)| (x.mul(m), y.mul(c)))
                .filter(|(_, y)| !y.is_zero())
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self, order: MonomialOrder) -> Self {
        match self.leading_term(order) {
            Some((_, c)) => self.scale(&c.inv()),
            None => self.clone(),
        }
    }

    pub fn eval(&self, point: &[F]) -> F {
        let mut acc = F::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    t = t.mul(x);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Sets the listed variables to zero (the variable count is unchanged).
    pub fn set_zero(&self, vars: &[usize]) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| vars.iter().all(|&v| m.0[v] == 0))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Re-embeds into a ring with `before` new variables in front and `after` at the end.
    pub fn extend_vars(&self, before: usize, after: usize) -> Self {
        let n = self.nvars + before + after;
        Poly {
            nvars: n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = vec![0; before];
                    e.extend_from_slice(&m.0);
                    e.resize(n, 0);
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    /// Keeps only the listed variables, in the given order. The dropped variables
    /// must not occur.
    pub fn select_vars(&self, keep: &[usize]) -> Self {
        Poly {
            nvars: keep.len(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    debug_assert!(
                        (0..self.nvars).all(|i| keep.contains(&i) || m.0[i] == 0),
                        "dropped variable occurs"
                    );
                    (Monomial(keep.iter().map(|&i| m.0[i]).collect()), c.clone())
                })
                .collect(),
        }
    }

    /// Inverse of [`select_vars`](Self::select_vars): places variable `j` at `positions[j]`.
    pub fn scatter_vars(&self, nvars: usize, positions: &[usize]) -> Self {
        Poly {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = vec![0; nvars];
                    for (j, &p) in positions.iter().enumerate() {
                        e[p] = m.0[j];
                    }
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    /// Writes `self = a·x_var + b` with `a`, `b` free of `x_var`; `None` if the
    /// variable occurs with exponent above one.
    pub fn linear_in(&self, var: usize) -> Option<(Self, Self)> {
        let mut a = Poly::zero(self.nvars);
        let mut b = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            match m.0[var] {
                0 => b.add_term(m.clone(), c.clone()),
                1 => {
                    let mut e = m.clone();
                    e.0[var] = 0;
                    a.add_term(e, c.clone());
                }
                _ => return None,
            }
        }
        Some((a, b))
    }

    pub fn map_coefficients<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Exact division by `d`; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let order = MonomialOrder::DegRevLex;
        let (lm, lc) = d.leading_term(order)?;
        let (lm, lc_inv) = (lm.clone(), lc.inv());
        let mut rem = self.clone();
        let mut q = Poly::zero(self.nvars);
        while let Some((m, c)) = rem.leading_term(order) {
            if !lm.divides(m) {
                return None;
            }
            let t = m.div(&lm);
            let k = c.mul(&lc_inv);
            rem = rem.sub(&d.mul_monomial(&t, &k));
            q.add_term(t, k);
        }
        Some(q)
    }
}

impl Poly<Rational> {
    /// Scales by a nonzero rational so every coefficient is an integer with
    /// overall gcd one (same zero set).
    pub fn clear_denominators(&self) -> Self {
        let l = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let scaled = self.scale(&Rational::from_integer(l));
        let g = scaled
            .terms
            .values()
            .fold(BigInt::from(0), |acc, c| acc.gcd(c.numer()));
        if g.is_one() || g == BigInt::from(0) {
            scaled
        } else {
            scaled.scale(&Rational::new(BigInt::one(), g))
        }
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    /// Terms in decreasing degrevlex order, variables named `T1, T2, …`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut ts: Vec<(&Monomial, &F)> = self.terms.iter().collect();
        ts.sort_by(|a, b| MonomialOrder::DegRevLex.cmp(b.0, a.0));
        for (k, (m, c)) in ts.into_iter().enumerate() {
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors = Vec::new();
            if mag != "1" || m.is_one() {
                factors.push(mag);
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("T{}", i + 1)),
                    _ => factors.push(format!("T{}^{}", i + 1, e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = Rational;

    #[test]
    fn degrevlex_breaks_ties_on_last_variable() {
        let o = MonomialOrder::DegRevLex;
        // x*z < y^2 in degrevlex with x > y > z
        let xz = Monomial(vec![1, 0, 1]);
        let yy = Monomial(vec![0, 2, 0]);
        assert_eq!(o.cmp(&xz, &yy), Ordering::Less);
        assert_eq!(MonomialOrder::Lex.cmp(&xz, &yy), Ordering::Greater);
    }

    #[test]
    fn arithmetic_and_display() {
        let x = Poly::<Q>::var(3, 0);
        let y = Poly::<Q>::var(3, 1);
        let p = x.add(&y).mul(&x.sub(&y));
        assert_eq!(p.to_string(), "T1^2 - T2^2");
        assert_eq!(p.div_exact(&x.add(&y)).unwrap(), x.sub(&y));
        assert!(p.div_exact(&Poly::var(3, 2)).is_none());
        assert_eq!(Poly::<Q>::zero(2).to_string(), "0");
        assert_eq!(Poly::<Q>::constant(2, Q::from_i64(-3)).to_string(), "-3");
    }

    #[test]
    fn denominators_are_cleared() {
        let p = Poly::<Q>::var(2, 0)
            .scale(&Q::new(1.into(), 2.into()))
            .add(&Poly::var(2, 1).scale(&Q::new(1.into(), 3.into())));
        assert_eq!(p.clear_denominators().to_string(), "3*T1 + 2*T2");
    }
}
