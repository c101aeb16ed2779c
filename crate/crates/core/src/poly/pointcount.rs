//! Exhaustive point counts over small prime fields, used as an independent
//! estimate of the dimension of an affine variety.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fface::pivot_plan;
use super::{Poly, Rational};
use crate::error::{Error, Result};

/// Largest number of enumerated assignments per prime.
pub const ENUMERATION_BUDGET: u64 = 200_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCount {
    pub prime: u64,
    pub points: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionEstimate {
    /// Estimate at the largest prime; `-1` when there are no points.
    pub dimension: i64,
    pub counts: Vec<PointCount>,
    /// Set when the per-prime estimates disagree or a count is more than 50%
    /// away from `p^d`.
    pub low_confidence: bool,
}

/// A polynomial with coefficients in `0..p` and sparse exponent lists.
#[derive(Clone, Debug)]
struct Compiled {
    terms: Vec<(u64, Vec<(usize, u32)>)>,
}

impl Compiled {
    fn new(f: &Poly<Rational>) -> Self {
        let terms = f
            .terms()
            .map(|(m, c)| {
                let c = c.to_integer().to_u64().expect("reduced coefficient");
                let e = m.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e)).collect();
                (c, e)
            })
            .collect();
        Compiled { terms }
    }

    fn eval(&self, x: &[u64], p: u64) -> u64 {
        let mut acc = 0u64;
        for (c, mono) in &self.terms {
            let mut t = *c;
            for &(i, e) in mono {
                for _ in 0..e {
                    t = t * x[i] % p;
                }
            }
            acc = (acc + t) % p;
        }
        acc
    }
}

/// Reduces an integral polynomial modulo `p`, keeping it as a rational polynomial
/// with coefficients in `0..p`.
fn reduce_mod(f: &Poly<Rational>, p: u64) -> Poly<Rational> {
    let f = f.clear_denominators();
    let pb = BigInt::from(p);
    Poly::from_terms(
        f.nvars(),
        f.terms().map(|(m, c)| (m.clone(), Rational::from_integer(c.numer().mod_floor(&pb)))),
    )
}

fn check_prime(p: u64) -> Result<()> {
    let ok = p >= 2 && p < 1 << 31 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0);
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{p} is not a prime below 2^31")))
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

struct Solver {
    p: u64,
    inverse: Vec<u64>,
    /// (pivot variable, coefficient of the pivot, remainder)
    steps: Vec<(usize, Compiled, Compiled)>,
    checks: Vec<Compiled>,
}

impl Solver {
    fn count(&self, step: usize, x: &mut [u64]) -> u64 {
        let p = self.p;
        let Some((v, a, b)) = self.steps.get(step) else {
            return self.checks.iter().all(|f| f.eval(x, p) == 0) as u64;
        };
        let a = a.eval(x, p);
        let b = b.eval(x, p);
        if a != 0 {
            x[*v] = (p - b) % p * self.inverse[a as usize] % p;
            self.count(step + 1, x)
        } else if b == 0 {
            (0..p)
                .map(|t| {
                    x[*v] = t;
                    self.count(step + 1, x)
                })
                .sum()
        } else {
            0
        }
    }
}

/// Number of points of `V(relations)` in `F_p^nvars`.
///
/// Variables forced to zero by a relation `c·x^e` are substituted, variables
/// absent from every relation contribute a factor of `p`, and each relation
/// with a linear variable is solved for it instead of enumerating it.
pub fn count_points(relations: &[Poly<Rational>], nvars: usize, p: u64) -> Result<u64> {
    check_prime(p)?;
    let mut rels: Vec<Poly<Rational>> = relations
        .iter()
        .inspect(|f| assert_eq!(f.nvars(), nvars, "relation in a different ring"))
        .map(|f| reduce_mod(f, p))
        .filter(|f| !f.is_zero())
        .collect();
    let mut forced: Vec<usize> = Vec::new();
    loop {
        if rels.iter().any(Poly::is_constant) {
            return Ok(0);
        }
        let next = rels.iter().find_map(|f| {
            let (m, _) = f.terms().next()?;
            (f.len() == 1 && m.support().len() == 1).then(|| m.support()[0])
        });
        match next {
            Some(v) => {
                forced.push(v);
                rels = rels.iter().map(|f| f.set_zero(&[v])).filter(|f| !f.is_zero()).collect();
            }
            None => break,
        }
    }
    let used: Vec<usize> = (0..nvars).filter(|&v| rels.iter().any(|f| f.uses_var(v))).collect();
    let absent = (nvars - used.len() - forced.len()) as u32;

    let plan = pivot_plan(&rels);
    let pivots: Vec<usize> = plan.steps.iter().map(|&(_, v)| v).collect();
    let enumerated: Vec<usize> = used.iter().copied().filter(|v| !pivots.contains(v)).collect();
    let total = (p as u128).pow(enumerated.len() as u32);
    if total > ENUMERATION_BUDGET as u128 {
        return Err(Error::Resource(format!(
            "point count over F_{p} needs {total} assignments (budget {ENUMERATION_BUDGET})"
        )));
    }
    let factor = (p as u128).pow(absent);

    let mut inverse = vec![0u64; p as usize];
    for (a, slot) in inverse.iter_mut().enumerate().skip(1) {
        *slot = pow_mod(a as u64, p - 2, p);
    }
    let solver = Solver {
        p,
        inverse,
        steps: plan
            .steps
            .iter()
            .map(|&(r, v)| {
                let (a, b) = rels[r].linear_in(v).expect("pivot is linear");
                (v, Compiled::new(&reduce_mod(&a, p)), Compiled::new(&reduce_mod(&b, p)))
            })
            .collect(),
        checks: plan.unsolved.iter().map(|&r| Compiled::new(&rels[r])).collect(),
    };
    let total = total as usize;
    let inner: u64 = (0..total)
        .into_par_iter()
        .with_min_len(1 << 12)
        .map_init(
            || vec![0u64; nvars],
            |x, idx| {
                let mut idx = idx as u64;
                for &v in &enumerated {
                    x[v] = idx % p;
                    idx /= p;
                }
                solver.count(0, x)
            },
        )
        .sum();
    (inner as u128 * factor)
        .try_into()
        .map_err(|_| Error::Resource(format!("point count over F_{p} overflows")))
}

/// Dimension estimate from point counts: `round(log_p(count))` at each prime.
pub fn pointcount_dimension(
    relations: &[Poly<Rational>],
    nvars: usize,
    primes: &[u64],
) -> Result<DimensionEstimate> {
    if primes.is_empty() {
        return Err(Error::InvalidParameter("no primes given".into()));
    }
    let mut primes = primes.to_vec();
    primes.sort_unstable();
    primes.dedup();
    let counts = primes
        .iter()
        .map(|&p| Ok(PointCount { prime: p, points: count_points(relations, nvars, p)? }))
        .collect::<Result<Vec<_>>>()?;
    let estimate = |c: &PointCount| -> i64 {
        if c.points == 0 {
            -1
        } else {
            ((c.points as f64).ln() / (c.prime as f64).ln()).round() as i64
        }
    };
    let estimates: Vec<i64> = counts.iter().map(estimate).collect();
    let dimension = *estimates.last().expect("nonempty");
    let far = counts.iter().zip(&estimates).any(|(c, &d)| {
        d >= 0 && {
            let expected = (c.prime as f64).powi(d as i32);
            (c.points as f64 - expected).abs() > 0.5 * expected
        }
    });
    let low_confidence = far || estimates.iter().any(|&d| d != dimension);
    Ok(DimensionEstimate { dimension, counts, low_confidence })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn rels(src: &[&str], n: usize) -> Vec<Poly<Rational>> {
        src.iter().map(|s| parse_poly(s, n).unwrap()).collect()
    }

    /// Plain enumeration over all of `F_p^n`.
    fn brute(relations: &[Poly<Rational>], n: usize, p: u64) -> u64 {
        let compiled: Vec<Compiled> = relations.iter().map(|f| Compiled::new(&reduce_mod(f, p))).collect();
        let mut x = vec![0u64; n];
        let mut count = 0;
        for mut idx in 0..p.pow(n as u32) {
            for v in x.iter_mut() {
                *v = idx % p;
                idx /= p;
            }
            count += compiled.iter().all(|f| f.eval(&x, p) == 0) as u64;
        }
        count
    }

    #[test]
    fn coordinate_hyperplane() {
        let r = rels(&["T1"], 3);
        assert_eq!(count_points(&r, 3, 5).unwrap(), 25);
        assert_eq!(pointcount_dimension(&r, 3, &[5]).unwrap().dimension, 2);
    }

    #[test]
    fn unit_ideal_is_empty() {
        let d = pointcount_dimension(&rels(&["1"], 2), 2, &[3, 5]).unwrap();
        assert_eq!(d.dimension, -1);
        assert!(d.counts.iter().all(|c| c.points == 0));
    }

    #[test]
    fn batching_matches_brute_force() {
        let cases: Vec<(Vec<&str>, usize)> = vec![
            (vec!["T1*T2 - T3^2"], 3),
            (vec!["T1*T3 + T2*T4", "T2*T3 - T1"], 4),
            (vec!["T1*T2 + T3*T4 + T5", "T5*T1 + 2*T2^2", "T3"], 5),
            (vec!["T1^2 + T2^2 + 1"], 2),
            (vec!["3*T1 + T2"], 2),
        ];
        for (src, n) in cases {
            let r = rels(&src, n);
            for p in [2, 3, 5, 7] {
                assert_eq!(count_points(&r, n, p).unwrap(), brute(&r, n, p), "{src:?} mod {p}");
            }
        }
    }

    #[test]
    fn f_and_g_over_f3() {
        let r = rels(&["T3*T8 + T4*T9 + T1*T7", "T5*T9 + T6*T11 + T2*T7"], 11);
        assert_eq!(count_points(&r, 11, 3).unwrap(), brute(&r, 11, 3));
        assert_eq!(pointcount_dimension(&r, 11, &[3]).unwrap().dimension, 9);
    }

    #[test]
    fn rejects_composites_and_huge_searches() {
        assert!(matches!(count_points(&[], 2, 4), Err(Error::InvalidParameter(_))));
        let r = rels(&["T1^2*T2^2 + T3^2*T4^2 + T5^2*T6^2 + T7^2*T8^2 + T9^2*T10^2"], 10);
        assert!(matches!(count_points(&r, 10, 101), Err(Error::Resource(_))));
    }
}
