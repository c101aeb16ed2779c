//! Does a coordinate face of affine space meet a variety?
//!
//! A mask selects the coordinates allowed to be nonzero. The face it names
//! meets `V(I)` when some point of `V(I)` has nonzero coordinates exactly on
//! the mask.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Field, Fp, Poly, PolyIdeal, Rational};
use crate::error::Result;

/// Set of coordinates allowed to be nonzero; the rest are forced to zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FaceMask {
    nvars: usize,
    bits: u32,
}

impl FaceMask {
    pub const MAX_VARS: usize = 31;

    pub fn new(nvars: usize, on_face: impl IntoIterator<Item = usize>) -> Self {
        let bits = on_face.into_iter().fold(0u32, |acc, i| {
            assert!(i < nvars, "face index {i} out of range");
            acc | (1 << i)
        });
        Self::from_bits(nvars, bits)
    }

    pub fn from_bits(nvars: usize, bits: u32) -> Self {
        assert!(nvars <= Self::MAX_VARS, "too many variables for a face mask");
        assert!(bits >> nvars == 0, "mask bit beyond variable count");
        FaceMask { nvars, bits }
    }

    pub fn full(nvars: usize) -> Self {
        Self::from_bits(nvars, ((1u64 << nvars) - 1) as u32)
    }

    pub fn empty(nvars: usize) -> Self {
        Self::from_bits(nvars, 0)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn on_face(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.contains(i)).collect()
    }

    pub fn off_face(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| !self.contains(i)).collect()
    }
}

impl fmt::Display for FaceMask {
    /// One-based variable indices, e.g. `{1,3}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.on_face().iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FaceTestMode {
    Sampled,
    Exact,
}

/// How an F-face verdict was reached.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FaceEvidence {
    /// Every relation vanishes on the face, or one restricts to a single term.
    Trivial,
    /// A rational point with nonzero coordinates exactly on the mask.
    Witness(Vec<Rational>),
    /// Decided by radical membership of the product of the face variables.
    Saturation,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FaceTestOutcome {
    pub is_face: bool,
    pub evidence: FaceEvidence,
}

#[derive(Clone, Copy, Debug)]
pub struct SamplingOptions {
    pub seed: u64,
    /// Attempts per prime.
    pub trials: usize,
}

impl Default for SamplingOptions {
    fn default() -> Self {
        SamplingOptions { seed: 0, trials: 20_000 }
    }
}

/// Ordered pivots: relation `rel` is solved for `var`, which is linear in it and
/// absent from every relation solved earlier. Relations left over are only checked.
#[derive(Clone, Debug, Default)]
pub(crate) struct PivotPlan {
    pub steps: Vec<(usize, usize)>,
    pub unsolved: Vec<usize>,
}

pub(crate) fn pivot_plan<F: Field>(relations: &[Poly<F>]) -> PivotPlan {
    fn search<F: Field>(
        relations: &[Poly<F>],
        placed: &mut Vec<(usize, usize)>,
        best: &mut Vec<(usize, usize)>,
    ) {
        if placed.len() > best.len() {
            *best = placed.clone();
        }
        if best.len() == relations.len() {
            return;
        }
        for r in 0..relations.len() {
            if placed.iter().any(|&(q, _)| q == r) {
                continue;
            }
            for v in 0..relations[r].nvars() {
                if relations[r].degree_in(v) != 1
                    || placed.iter().any(|&(q, _)| relations[q].uses_var(v))
                {
                    continue;
                }
                placed.push((r, v));
                search(relations, placed, best);
                placed.pop();
                if best.len() == relations.len() {
                    return;
                }
            }
        }
    }
    let mut best = Vec::new();
    search(relations, &mut Vec::new(), &mut best);
    let unsolved = (0..relations.len()).filter(|r| best.iter().all(|&(q, _)| q != *r)).collect();
    PivotPlan { steps: best, unsolved }
}

/// Relations restricted to the face, in the ring of the face variables only.
fn restrict(relations: &[Poly<Rational>], mask: &FaceMask) -> Vec<Poly<Rational>> {
    let on = mask.on_face();
    let off = mask.off_face();
    relations
        .iter()
        .map(|f| f.set_zero(&off))
        .filter(|f| !f.is_zero())
        .map(|f| f.select_vars(&on).clear_denominators())
        .collect()
}

/// Tests whether `mask` is an F-face of `V(relations)`.
///
/// Sampled mode looks for a witness with random nonzero coordinates, solving the
/// relations for pivot variables over `F_101` and `F_10007`, and replays the
/// successful draw over the rationals. A failed search falls through to the
/// exact test, so a negative answer is always exact.
pub fn f_face_test(
    relations: &[Poly<Rational>],
    mask: &FaceMask,
    mode: FaceTestMode,
    options: &SamplingOptions,
) -> Result<FaceTestOutcome> {
    let restricted = restrict(relations, mask);
    if restricted.is_empty() {
        return Ok(FaceTestOutcome { is_face: true, evidence: FaceEvidence::Trivial });
    }
    if restricted.iter().any(|f| f.len() == 1) {
        return Ok(FaceTestOutcome { is_face: false, evidence: FaceEvidence::Trivial });
    }
    if mode == FaceTestMode::Sampled {
        let seed = options.seed ^ (mask.bits() as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let plan = pivot_plan(&restricted);
        let found = sample::<101>(&restricted, &plan, options.trials, &mut rng)
            .or_else(|| sample::<10007>(&restricted, &plan, options.trials, &mut rng));
        if let Some(point) = found {
            let mut full = vec![Rational::zero(); mask.nvars()];
            for (j, i) in mask.on_face().into_iter().enumerate() {
                full[i] = point[j].clone();
            }
            debug_assert!(relations.iter().all(|f| f.eval(&full).is_zero()));
            return Ok(FaceTestOutcome { is_face: true, evidence: FaceEvidence::Witness(full) });
        }
    }
    let k = mask.len();
    let product = (0..k).fold(Poly::one(k), |acc, i| acc.mul(&Poly::var(k, i)));
    let vanishes = PolyIdeal::new(k, restricted).radical_member(&product)?;
    Ok(FaceTestOutcome { is_face: !vanishes, evidence: FaceEvidence::Saturation })
}

/// Solves the plan at the given free values. Returns the full point or `None`
/// when a pivot coefficient vanishes, a pivot comes out zero, or a leftover
/// relation does not vanish.
fn solve_plan<F: Field>(
    relations: &[Poly<F>],
    plan: &PivotPlan,
    mut point: Vec<F>,
) -> Option<Vec<F>> {
    for &(r, v) in &plan.steps {
        let (a, b) = relations[r].linear_in(v).expect("pivot is linear");
        let a = a.eval(&point);
        if a.is_zero() {
            return None;
        }
        let x = b.eval(&point).neg().div(&a);
        if x.is_zero() {
            return None;
        }
        point[v] = x;
    }
    plan.unsolved
        .iter()
        .all(|&r| relations[r].eval(&point).is_zero())
        .then_some(point)
}

fn sample<const P: u64>(
    relations: &[Poly<Rational>],
    plan: &PivotPlan,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Rational>> {
    let modp: Vec<Poly<Fp<P>>> = relations
        .iter()
        .map(|f| f.map_coefficients(|c| Fp::<P>::from_rational(c).expect("integral coefficients")))
        .collect();
    let n = relations[0].nvars();
    let pivots: Vec<usize> = plan.steps.iter().map(|&(_, v)| v).collect();
    for _ in 0..trials {
        let draw: Vec<u64> = (0..n)
            .map(|i| if pivots.contains(&i) { 0 } else { rng.random_range(1..P) })
            .collect();
        let point = draw.iter().map(|&x| Fp::<P>::new(x)).collect();
        if solve_plan(&modp, plan, point).is_some() {
            let exact = draw.iter().map(|&x| Rational::from_i64(x as i64)).collect();
            if let Some(q) = solve_plan(relations, plan, exact) {
                if relations.iter().all(|f| f.eval(&q).is_zero()) {
                    return Some(q);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn rels(src: &[&str]) -> Vec<Poly<Rational>> {
        src.iter().map(|s| parse_poly(s, 11).unwrap()).collect()
    }

    const FG: [&str; 2] = ["T3*T8 + T4*T9 + T1*T7", "T5*T9 + T6*T11 + T2*T7"];
    const H: &str = "T7 + T1*T11^2 + T2*T8*T11 + T2*T10^2 + T2*T8*T9";

    #[test]
    fn toric_case_is_always_a_face() {
        let out = f_face_test(&[], &FaceMask::new(11, [2, 5]), FaceTestMode::Exact, &Default::default());
        assert!(out.unwrap().is_face);
    }

    #[test]
    fn full_mask_has_a_witness() {
        let r = rels(&FG);
        let out = f_face_test(&r, &FaceMask::full(11), FaceTestMode::Sampled, &Default::default()).unwrap();
        assert!(out.is_face);
        let FaceEvidence::Witness(p) = out.evidence else { panic!("expected a witness") };
        assert!(p.iter().all(|x| !x.is_zero()));
        assert!(r.iter().all(|f| f.eval(&p).is_zero()));
    }

    #[test]
    fn single_coordinate_face() {
        let out = f_face_test(&rels(&FG), &FaceMask::new(11, [0]), FaceTestMode::Sampled, &Default::default());
        assert!(out.unwrap().is_face);
    }

    #[test]
    fn sampled_and_exact_agree_on_y() {
        let r = rels(&[FG[0], FG[1], H]);
        let opts = SamplingOptions { seed: 7, trials: 200 };
        for bits in [0x7ffu32, 0x041, 0x0c1, 0x3c3, 0x1c5, 0x7c0] {
            let m = FaceMask::from_bits(11, bits);
            let s = f_face_test(&r, &m, FaceTestMode::Sampled, &opts).unwrap();
            let e = f_face_test(&r, &m, FaceTestMode::Exact, &opts).unwrap();
            assert_eq!(s.is_face, e.is_face, "mask {m}");
        }
    }

    #[test]
    fn monomial_restriction_is_not_a_face() {
        // Only T1 and T7 on: F becomes T1*T7.
        let out = f_face_test(&rels(&FG), &FaceMask::new(11, [0, 6]), FaceTestMode::Sampled, &Default::default());
        assert_eq!(out.unwrap(), FaceTestOutcome { is_face: false, evidence: FaceEvidence::Trivial });
    }

    #[test]
    fn exact_negative() {
        let f = vec![parse_poly("T1*T2 - T3^2", 3).unwrap()];
        let m = FaceMask::new(3, [0, 1, 2]);
        assert!(f_face_test(&f, &m, FaceTestMode::Exact, &Default::default()).unwrap().is_face);
        // No rational point with both coordinates nonzero, but a complex one.
        let g = vec![parse_poly("T1^2 + T2^2", 2).unwrap()];
        assert!(f_face_test(&g, &FaceMask::full(2), FaceTestMode::Exact, &Default::default()).unwrap().is_face);
        // Solutions modulo 101 do not lift to the rationals; the exact test decides.
        let h: Vec<_> = ["T1^2 + T2^2", "T1*T2 - 1"].iter().map(|s| parse_poly(s, 2).unwrap()).collect();
        let out = f_face_test(&h, &FaceMask::full(2), FaceTestMode::Sampled, &Default::default()).unwrap();
        assert!(out.is_face);
        let k: Vec<_> = ["T1 - T2", "T1 + T2"].iter().map(|s| parse_poly(s, 2).unwrap()).collect();
        let out = f_face_test(&k, &FaceMask::full(2), FaceTestMode::Sampled, &Default::default()).unwrap();
        assert_eq!(out, FaceTestOutcome { is_face: false, evidence: FaceEvidence::Saturation });
    }

    #[test]
    fn mask_display() {
        assert_eq!(FaceMask::new(11, [0, 10]).to_string(), "{1,11}");
        assert_eq!(FaceMask::full(3).on_face(), vec![0, 1, 2]);
    }
}
