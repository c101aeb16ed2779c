//! Buchberger's algorithm with the product and chain criteria.

use std::cmp::Ordering;

use super::{Field, Monomial, MonomialOrder, Poly};
use crate::error::{Error, Result};

/// Reduction steps allowed for a single basis computation before giving up.
pub const DEFAULT_STEP_BUDGET: u64 = 5_000_000;

/// Terms sorted ascending in the working order, so the leading term is last.
type Terms<F> = Vec<(Monomial, F)>;

fn to_terms<F: Field>(p: &Poly<F>, order: MonomialOrder) -> Terms<F> {
    let mut t: Terms<F> = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    t.sort_by(|a, b| order.cmp(&a.0, &b.0));
    t
}

fn from_terms<F: Field>(nvars: usize, t: Terms<F>) -> Poly<F> {
    Poly::from_terms(nvars, t)
}

fn make_monic<F: Field>(t: &mut Terms<F>) {
    if let Some((_, lc)) = t.last() {
        if !lc.is_one() {
            let inv = lc.inv();
            for (_, c) in t.iter_mut() {
                *c = c.mul(&inv);
            }
        }
    }
}

/// `a - c * m * b`, where `b` is monic-free (any coefficients) and both are sorted ascending.
fn sub_scaled<F: Field>(
    a: &[(Monomial, F)],
    c: &F,
    m: &Monomial,
    b: &[(Monomial, F)],
    order: MonomialOrder,
) -> Terms<F> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut pending: Option<(Monomial, F)> = None;
    loop {
        if pending.is_none() && j < b.len() {
            pending = Some((b[j].0.mul(m), b[j].1.mul(c).neg()));
            j += 1;
        }
        match (a.get(i), pending.take()) {
            (None, None) => break,
            (Some(x), None) => {
                out.push(x.clone());
                i += 1;
            }
            (None, Some(y)) => out.push(y),
            (Some(x), Some(y)) => match order.cmp(&x.0, &y.0) {
                Ordering::Less => {
                    out.push(x.clone());
                    i += 1;
                    pending = Some(y);
                }
                Ordering::Greater => out.push(y),
                Ordering::Equal => {
                    let s = x.1.add(&y.1);
                    if !s.is_zero() {
                        out.push((y.0, s));
                    }
                    i += 1;
                }
            },
        }
    }
    out
}

struct Reducer<'a> {
    order: MonomialOrder,
    steps: &'a mut u64,
    budget: u64,
}

impl Reducer<'_> {
    fn tick(&mut self) -> Result<()> {
        *self.steps += 1;
        if *self.steps > self.budget {
            return Err(Error::Resource(format!(
                "Gröbner basis computation exceeded {} reduction steps",
                self.budget
            )));
        }
        Ok(())
    }

    /// Full reduction of `p` modulo the monic polynomials `basis`.
    fn reduce<F: Field>(&mut self, mut p: Terms<F>, basis: &[&Terms<F>]) -> Result<Terms<F>> {
        // Irreducible terms are collected in descending order and reversed at the end.
        let mut rem: Vec<(Monomial, F)> = Vec::new();
        while let Some((lm, lc)) = p.last() {
            let hit = basis.iter().find(|g| g.last().is_some_and(|(gm, _)| gm.divides(lm)));
            match hit {
                Some(g) => {
                    self.tick()?;
                    let (gm, gc) = g.last().expect("nonempty");
                    let q = lm.div(gm);
                    let c = lc.div(gc);
                    p = sub_scaled(&p, &c, &q, g, self.order);
                }
                None => rem.push(p.pop().expect("nonempty")),
            }
        }
        rem.reverse();
        Ok(rem)
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

fn lm<F>(t: &Terms<F>) -> &Monomial {
    &t.last().expect("nonzero polynomial").0
}

/// Reduced Gröbner basis of the ideal generated by `gens`, monic and sorted by
/// descending leading monomial.
pub fn groebner_basis<F: Field>(
    gens: &[Poly<F>],
    order: MonomialOrder,
    budget: u64,
) -> Result<Vec<Poly<F>>> {
    let Some(nvars) = gens.first().map(Poly::nvars) else {
        return Ok(Vec::new());
    };
    let mut steps = 0u64;
    let mut red = Reducer { order, steps: &mut steps, budget };

    let mut input: Vec<Terms<F>> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| {
            let mut t = to_terms(g, order);
            make_monic(&mut t);
            t
        })
        .collect();
    input.sort_by(|a, b| order.cmp(lm(a), lm(b)).then_with(|| a.len().cmp(&b.len())));

    let mut basis: Vec<Terms<F>> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    fn insert<F: Field>(
        h: Terms<F>,
        basis: &mut Vec<Terms<F>>,
        active: &mut Vec<bool>,
        pairs: &mut Vec<Pair>,
    ) {
        let t = basis.len();
        let hm = lm(&h).clone();
        // Chain criterion on existing pairs.
        pairs.retain(|p| {
            !(hm.divides(&p.lcm)
                && lm(&basis[p.i]).lcm(&hm) != p.lcm
                && lm(&basis[p.j]).lcm(&hm) != p.lcm)
        });
        let mut fresh: Vec<(Pair, bool)> = (0..t)
            .filter(|&i| active[i])
            .map(|i| {
                let gm = lm(&basis[i]);
                (Pair { i, j: t, lcm: gm.lcm(&hm) }, gm.coprime(&hm))
            })
            .collect();
        // Drop pairs whose lcm is a proper multiple of another new lcm.
        let lcms: Vec<Monomial> = fresh.iter().map(|(p, _)| p.lcm.clone()).collect();
        fresh.retain(|(p, _)| !lcms.iter().any(|l| *l != p.lcm && l.divides(&p.lcm)));
        // Among equal lcms keep one, and none at all if any of them is coprime.
        let mut kept: Vec<(Pair, bool)> = Vec::new();
        for (p, cop) in fresh {
            match kept.iter_mut().find(|(q, _)| q.lcm == p.lcm) {
                Some(slot) => slot.1 |= cop,
                None => kept.push((p, cop)),
            }
        }
        pairs.extend(kept.into_iter().filter(|(_, cop)| !cop).map(|(p, _)| p));
        for i in 0..t {
            if active[i] && hm.divides(lm(&basis[i])) {
                active[i] = false;
            }
        }
        basis.push(h);
        active.push(true);
    }

    for g in input {
        let current: Vec<&Terms<F>> =
            basis.iter().zip(&active).filter(|(_, a)| **a).map(|(b, _)| b).collect();
        let mut h = red.reduce(g, &current)?;
        if h.is_empty() {
            continue;
        }
        make_monic(&mut h);
        insert(h, &mut basis, &mut active, &mut pairs);
    }

    while !pairs.is_empty() {
        let k = (0..pairs.len())
            .min_by(|&a, &b| order.cmp(&pairs[a].lcm, &pairs[b].lcm))
            .expect("nonempty");
        let Pair { i, j, lcm } = pairs.swap_remove(k);
        let (fi, fj) = (&basis[i], &basis[j]);
        let a = lcm.div(lm(fi));
        let b = lcm.div(lm(fj));
        let ai: Terms<F> = fi.iter().map(|(m, c)| (m.mul(&a), c.clone())).collect();
        let s = sub_scaled(&ai, &F::one(), &b, fj, order);
        let current: Vec<&Terms<F>> =
            basis.iter().zip(&active).filter(|(_, a)| **a).map(|(b, _)| b).collect();
        let mut h = red.reduce(s, &current)?;
        if h.is_empty() {
            continue;
        }
        make_monic(&mut h);
        if lm(&h).is_one() {
            return Ok(vec![Poly::one(nvars)]);
        }
        insert(h, &mut basis, &mut active, &mut pairs);
    }

    // Interreduce the minimal basis.
    let minimal: Vec<Terms<F>> = basis
        .into_iter()
        .zip(active)
        .filter(|(_, a)| *a)
        .map(|(b, _)| b)
        .collect();
    let mut out = Vec::with_capacity(minimal.len());
    for (k, g) in minimal.iter().enumerate() {
        let others: Vec<&Terms<F>> =
            minimal.iter().enumerate().filter(|(l, _)| *l != k).map(|(_, b)| b).collect();
        let mut g = g.clone();
        let lead = g.pop().expect("nonzero");
        let mut tail = red.reduce(g, &others)?;
        tail.push(lead);
        out.push(tail);
    }
    out.sort_by(|a, b| order.cmp(lm(b), lm(a)));
    Ok(out.into_iter().map(|t| from_terms(nvars, t)).collect())
}

/// Remainder of `p` on division by `basis` (fully reduced).
pub fn normal_form<F: Field>(p: &Poly<F>, basis: &[Poly<F>], order: MonomialOrder) -> Poly<F> {
    let gs: Vec<Terms<F>> = basis
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| to_terms(g, order))
        .collect();
    let refs: Vec<&Terms<F>> = gs.iter().collect();
    let mut steps = 0;
    let mut red = Reducer { order, steps: &mut steps, budget: u64::MAX };
    let r = red.reduce(to_terms(p, order), &refs).expect("unbounded budget");
    from_terms(p.nvars(), r)
}

/// The S-polynomial of `f` and `g`.
pub fn s_polynomial<F: Field>(f: &Poly<F>, g: &Poly<F>, order: MonomialOrder) -> Poly<F> {
    let (Some((fm, fc)), Some((gm, gc))) = (f.leading_term(order), g.leading_term(order)) else {
        return Poly::zero(f.nvars());
    };
    let l = fm.lcm(gm);
    f.mul_monomial(&l.div(fm), &fc.inv())
        .sub(&g.mul_monomial(&l.div(gm), &gc.inv()))
}
