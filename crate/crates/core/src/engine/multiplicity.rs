use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::models::collineation_model;
use crate::poly::{Poly, Rational, SamplingOptions};

use super::git::mori_chamber_decomposition;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityReport {
    pub k: usize,
    pub h: usize,
    /// Lowest degree of the determinant at each sampled point.
    pub per_point: Vec<u32>,
    pub multiplicity: u32,
}

/// A random `k × k` integer matrix of rank exactly `h`, as a product of random
/// `k × h` and `h × k` factors.
fn rank_h_point(k: usize, h: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<BigInt>> {
    loop {
        let a: Vec<Vec<i64>> = (0..k).map(|_| (0..h).map(|_| rng.random_range(-9..=9)).collect()).collect();
        let b: Vec<Vec<i64>> = (0..h).map(|_| (0..k).map(|_| rng.random_range(-9..=9)).collect()).collect();
        let p: Vec<Vec<BigInt>> = (0..k)
            .map(|i| (0..k).map(|j| BigInt::from((0..h).map(|l| a[i][l] * b[l][j]).sum::<i64>())).collect())
            .collect();
        if linalg::rank(&p, k) == h {
            return p;
        }
    }
}

/// `det(p + X)` for a `k × k` matrix of variables `X`, by cofactor expansion
/// along the first row.
fn shifted_det(p: &[Vec<BigInt>]) -> Poly<Rational> {
    let k = p.len();
    let nvars = k * k;
    let entry = |i: usize, j: usize| {
        Poly::var(nvars, i * k + j).add(&Poly::constant(nvars, Rational::from_integer(p[i][j].clone())))
    };
    fn expand(
        row: usize,
        cols: &mut Vec<usize>,
        k: usize,
        nvars: usize,
        entry: &dyn Fn(usize, usize) -> Poly<Rational>,
    ) -> Poly<Rational> {
        if row == k {
            return Poly::one(nvars);
        }
        let mut acc = Poly::zero(nvars);
        for pos in 0..cols.len() {
            let c = cols.remove(pos);
            let minor = expand(row + 1, cols, k, nvars, entry);
            cols.insert(pos, c);
            let term = entry(row, c).mul(&minor);
            acc = if pos % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }
    expand(0, &mut (0..k).collect(), k, nvars, &entry)
}

/// Multiplicity of the `k × k` determinant along the rank-`h` locus, as the
/// lowest degree of `det(p + X)` at random rank-`h` points `p`; the reported
/// value is the minimum over the points.
pub fn minor_multiplicity_report(k: usize, h: usize, trials: usize, seed: u64) -> Result<MultiplicityReport> {
    if !(1 <= h && h < k && k <= 5) {
        return Err(Error::InvalidParameter(format!("need 1 ≤ h < k ≤ 5, got k={k}, h={h}")));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("at least one trial".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((k as u64) << 8 | h as u64));
    let points: Vec<_> = (0..trials).map(|_| rank_h_point(k, h, &mut rng)).collect();
    let per_point: Vec<u32> = points
        .par_iter()
        .map(|p| shifted_det(p).min_degree().expect("the determinant is a nonzero polynomial"))
        .collect();
    let multiplicity = *per_point.iter().min().expect("nonempty");
    Ok(MultiplicityReport { k, h, per_point, multiplicity })
}

pub fn minor_multiplicity(k: usize, h: usize, trials: usize) -> Result<u32> {
    Ok(minor_multiplicity_report(k, h, trials, 0)?.multiplicity)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecursionReport {
    /// `(n, f(n))`: Mori chamber counts of the square collineation models with
    /// two exceptional divisors.
    pub counts: Vec<(usize, usize)>,
    /// First `n` with `f(n) ≠ f(n-1) + n + 1`.
    pub first_failure: Option<usize>,
}

impl RecursionReport {
    pub fn holds(&self) -> bool {
        self.first_failure.is_none()
    }
}

pub fn recursion_check(n_min: usize, n_max: usize) -> Result<RecursionReport> {
    if !(3 <= n_min && n_min <= n_max && n_max <= 10) {
        return Err(Error::InvalidParameter(format!(
            "need 3 ≤ n_min ≤ n_max ≤ 10, got {n_min}..{n_max}"
        )));
    }
    let opts = SamplingOptions::default();
    let counts = (n_min..=n_max)
        .into_par_iter()
        .map(|n| {
            let model = collineation_model(n, n, 2)?;
            Ok((n, mori_chamber_decomposition(&model, &opts)?.complex.len()))
        })
        .collect::<Result<Vec<_>>>()?;
    let first_failure = counts.windows(2).find(|w| w[1].1 != w[0].1 + w[1].0 + 1).map(|w| w[1].0);
    Ok(RecursionReport { counts, first_failure })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_expansion() {
        let p = vec![vec![BigInt::from(2), BigInt::from(1)], vec![BigInt::from(4), BigInt::from(2)]];
        let d = shifted_det(&p);
        // (2 + x11)(2 + x22) - (1 + x12)(4 + x21) has no constant term.
        assert_eq!(d.min_degree(), Some(1));
        assert_eq!(d.total_degree(), Some(2));
    }

    #[test]
    fn small_cases() {
        assert_eq!(minor_multiplicity(2, 1, 5).unwrap(), 1);
        assert_eq!(minor_multiplicity(3, 1, 5).unwrap(), 2);
        assert_eq!(minor_multiplicity(4, 2, 5).unwrap(), 2);
        assert!(minor_multiplicity(3, 3, 5).is_err());
    }

    #[test]
    fn first_recursion_steps() {
        let r = recursion_check(3, 5).unwrap();
        assert_eq!(r.counts, vec![(3, 9), (4, 14), (5, 20)]);
        assert!(r.holds());
    }
}
