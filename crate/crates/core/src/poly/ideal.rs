use std::fmt;
use std::sync::OnceLock;

use super::groebner::{groebner_basis, normal_form, DEFAULT_STEP_BUDGET};
use super::{Field, Monomial, MonomialOrder, Poly, Rational};
use crate::error::Result;

/// An ideal given by generators, with a lazily computed degrevlex basis.
pub struct PolyIdeal<F: Field = Rational> {
    nvars: usize,
    generators: Vec<Poly<F>>,
    budget: u64,
    basis: OnceLock<Vec<Poly<F>>>,
}

impl<F: Field> Clone for PolyIdeal<F> {
    fn clone(&self) -> Self {
        let basis = OnceLock::new();
        if let Some(b) = self.basis.get() {
            let _ = basis.set(b.clone());
        }
        PolyIdeal { nvars: self.nvars, generators: self.generators.clone(), budget: self.budget, basis }
    }
}

impl<F: Field> fmt::Debug for PolyIdeal<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "⟩")
    }
}

impl<F: Field> PolyIdeal<F> {
    pub fn new(nvars: usize, generators: impl IntoIterator<Item = Poly<F>>) -> Self {
        let generators: Vec<Poly<F>> = generators
            .into_iter()
            .inspect(|g| assert_eq!(g.nvars(), nvars, "generator in a different ring"))
            .filter(|g| !g.is_zero())
            .collect();
        PolyIdeal { nvars, generators, budget: DEFAULT_STEP_BUDGET, basis: OnceLock::new() }
    }

    pub fn zero(nvars: usize) -> Self {
        Self::new(nvars, [])
    }

    pub fn unit(nvars: usize) -> Self {
        Self::new(nvars, [Poly::one(nvars)])
    }

    /// The ideal generated by the listed variables.
    pub fn coordinate(nvars: usize, vars: &[usize]) -> Self {
        Self::new(nvars, vars.iter().map(|&i| Poly::var(nvars, i)))
    }

    /// Replaces the reduction step budget used for basis computations.
    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Poly<F>] {
        &self.generators
    }

    /// Reduced degrevlex Gröbner basis, computed once.
    pub fn basis(&self) -> Result<&[Poly<F>]> {
        if let Some(b) = self.basis.get() {
            return Ok(b);
        }
        let b = groebner_basis(&self.generators, MonomialOrder::DegRevLex, self.budget)?;
        Ok(self.basis.get_or_init(|| b))
    }

    pub fn groebner(&self, order: MonomialOrder) -> Result<Vec<Poly<F>>> {
        if order == MonomialOrder::DegRevLex {
            return self.basis().map(<[_]>::to_vec);
        }
        groebner_basis(&self.generators, order, self.budget)
    }

    pub fn normal_form(&self, f: &Poly<F>) -> Result<Poly<F>> {
        Ok(normal_form(f, self.basis()?, MonomialOrder::DegRevLex))
    }

    pub fn contains(&self, f: &Poly<F>) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.basis()?.iter().any(Poly::is_constant))
    }

    /// Same ideal, compared through reduced bases.
    pub fn same_as(&self, other: &Self) -> Result<bool> {
        Ok(self.basis()? == other.basis()?)
    }

    pub fn sum(&self, other: &Self) -> Self {
        let gens = self.generators.iter().chain(&other.generators).cloned();
        Self::new(self.nvars, gens).with_budget(self.budget)
    }

    pub fn with_generators(&self, extra: impl IntoIterator<Item = Poly<F>>) -> Self {
        let gens = self.generators.iter().cloned().chain(extra);
        Self::new(self.nvars, gens).with_budget(self.budget)
    }

    /// Krull dimension of the affine zero set: the largest set of variables
    /// containing the support of no leading monomial. `-1` for the unit ideal.
    pub fn dimension(&self) -> Result<i64> {
        if self.is_unit()? {
            return Ok(-1);
        }
        let masks: Vec<u32> = self
            .basis()?
            .iter()
            .filter_map(|g| g.leading_term(MonomialOrder::DegRevLex))
            .map(|(m, _)| support_mask(m))
            .collect();
        Ok(max_independent(self.nvars, &masks) as i64)
    }

    /// `self ∩ other`, by eliminating `t` from `t·self + (1 − t)·other`.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        let n = self.nvars;
        let t = Poly::var(n + 1, 0);
        let one_minus_t = Poly::one(n + 1).sub(&t);
        let gens: Vec<Poly<F>> = self
            .generators
            .iter()
            .map(|g| t.mul(&g.extend_vars(1, 0)))
            .chain(other.generators.iter().map(|g| one_minus_t.mul(&g.extend_vars(1, 0))))
            .collect();
        let b = groebner_basis(&gens, MonomialOrder::Block(1), self.budget)?;
        let keep: Vec<usize> = (1..=n).collect();
        let gens = b.into_iter().filter(|g| !g.uses_var(0)).map(|g| g.select_vars(&keep));
        Ok(Self::new(n, gens).with_budget(self.budget))
    }

    /// `self : ⟨f⟩`.
    pub fn quotient_poly(&self, f: &Poly<F>) -> Result<Self> {
        if f.is_zero() {
            return Ok(Self::unit(self.nvars));
        }
        let principal = Self::new(self.nvars, [f.clone()]);
        let meet = self.intersect(&principal)?;
        let gens = meet
            .generators
            .iter()
            .map(|g| g.div_exact(f).expect("intersection with ⟨f⟩ is divisible by f"));
        Ok(Self::new(self.nvars, gens.collect::<Vec<_>>()).with_budget(self.budget))
    }

    /// `self : J`.
    pub fn quotient(&self, j: &Self) -> Result<Self> {
        let mut acc: Option<Self> = None;
        for f in &j.generators {
            let q = self.quotient_poly(f)?;
            acc = Some(match acc {
                None => q,
                Some(a) => a.intersect(&q)?,
            });
        }
        Ok(acc.unwrap_or_else(|| Self::unit(self.nvars)))
    }

    /// `self : J^∞`, iterating quotients until the basis stabilizes.
    pub fn saturate(&self, j: &Self) -> Result<Self> {
        let mut cur = self.clone();
        loop {
            let next = cur.quotient(j)?;
            if next.same_as(&cur)? {
                return Ok(cur);
            }
            cur = next;
        }
    }

    /// `self : f^∞`, eliminating `t` from `self + ⟨1 − t·f⟩`.
    pub fn saturate_poly(&self, f: &Poly<F>) -> Result<Self> {
        let n = self.nvars;
        let t = Poly::var(n + 1, 0);
        let gens: Vec<Poly<F>> = self
            .generators
            .iter()
            .map(|g| g.extend_vars(1, 0))
            .chain([Poly::one(n + 1).sub(&t.mul(&f.extend_vars(1, 0)))])
            .collect();
        let b = groebner_basis(&gens, MonomialOrder::Block(1), self.budget)?;
        let keep: Vec<usize> = (1..=n).collect();
        let gens = b.into_iter().filter(|g| !g.uses_var(0)).map(|g| g.select_vars(&keep));
        Ok(Self::new(n, gens).with_budget(self.budget))
    }

    /// `self : ⟨x_i : i ∈ vars⟩^∞`, the intersection of the saturations by
    /// each variable.
    pub fn saturate_coordinate(&self, vars: &[usize]) -> Result<Self> {
        if self.is_unit()? {
            return Ok(self.clone());
        }
        let mut acc: Option<Self> = None;
        for &v in vars {
            let s = self.saturate_poly(&Poly::var(self.nvars, v))?;
            if s.is_unit()? {
                continue;
            }
            acc = Some(match acc {
                None => s,
                Some(a) => a.intersect(&s)?,
            });
        }
        Ok(acc.unwrap_or_else(|| Self::unit(self.nvars).with_budget(self.budget)))
    }

    /// Whether `f` vanishes on the zero set of `self`: `1 ∈ self + ⟨1 − t·f⟩`.
    pub fn radical_member(&self, f: &Poly<F>) -> Result<bool> {
        if f.is_zero() {
            return Ok(true);
        }
        let n = self.nvars;
        let t = Poly::var(n + 1, n);
        let gens: Vec<Poly<F>> = self
            .generators
            .iter()
            .map(|g| g.extend_vars(0, 1))
            .chain([Poly::one(n + 1).sub(&t.mul(&f.extend_vars(0, 1)))])
            .collect();
        let b = groebner_basis(&gens, MonomialOrder::DegRevLex, self.budget)?;
        Ok(b.iter().any(Poly::is_constant))
    }

    /// `V(self) ⊆ V(other)`.
    pub fn locus_within(&self, other: &Self) -> Result<bool> {
        for g in &other.generators {
            if !self.radical_member(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equal zero sets.
    pub fn same_locus(&self, other: &Self) -> Result<bool> {
        Ok(self.locus_within(other)? && other.locus_within(self)?)
    }
}

fn support_mask(m: &Monomial) -> u32 {
    m.0.iter().enumerate().filter(|(_, &e)| e > 0).fold(0, |acc, (i, _)| acc | (1 << i))
}

/// Largest subset of `0..n` containing no mask; exhaustive over subsets in decreasing size.
fn max_independent(n: usize, masks: &[u32]) -> usize {
    assert!(n < 32, "too many variables for dimension computation");
    fn extend(i: usize, n: usize, chosen: u32, size: usize, masks: &[u32], best: &mut usize) {
        if size + (n - i) <= *best {
            return;
        }
        if i == n {
            *best = size;
            return;
        }
        let with = chosen | (1 << i);
        if !masks.iter().any(|&m| m & with == m) {
            extend(i + 1, n, with, size + 1, masks, best);
        }
        extend(i + 1, n, chosen, size, masks, best);
    }
    let mut best = 0;
    extend(0, n, 0, 0, masks, &mut best);
    best
}
