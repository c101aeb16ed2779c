use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::complex::{Decomposition, WallSides};
use crate::cone::{LatticeVector, RationalCone};
use crate::error::{Error, Result};
use crate::models::{CoxPresentation, Provenance, RelationStatus};
use crate::poly::{Monomial, Poly, PolyIdeal, Rational, SamplingOptions};

use super::cones::effective_cone;
use super::git::{mori_chamber_decomposition, MoriChambers, ProvenanceNote};

pub const DEFAULT_K_MAX: u32 = 4;

/// The stable base locus of a class, as an ideal of the total coordinate space.
#[derive(Clone, Debug)]
pub struct StableBaseLocus {
    pub class: LatticeVector,
    /// Minimal sets of distinct generator degrees (by index into
    /// `distinct_degrees`) carrying a monomial of degree `k·class`, `k ≤ k_max`.
    pub supports: Vec<Vec<usize>>,
    /// Relations plus section monomials, saturated by the irrelevant components.
    pub ideal: PolyIdeal,
    pub k_max: u32,
    /// The supports did not change between `k_max - 1` and `k_max`.
    pub stabilized: bool,
}

impl StableBaseLocus {
    pub fn is_empty(&self) -> Result<bool> {
        self.ideal.is_unit()
    }

    pub fn same_locus(&self, other: &StableBaseLocus) -> Result<bool> {
        self.ideal.same_locus(&other.ideal)
    }
}

/// A linear form positive on every generator degree.
fn grading_form(model: &CoxPresentation, degrees: &[LatticeVector]) -> Result<LatticeVector> {
    let eff = effective_cone(model)?;
    let mut u = LatticeVector::zero(model.rank());
    for f in eff.facets() {
        u = &u + f;
    }
    if degrees.iter().all(|d| d.dot(&u).is_positive()) {
        Ok(u)
    } else {
        Err(Error::NotPointed(format!("effective cone of {}", model.id)))
    }
}

/// Every `a ≥ 0` with `Σ a_j d_j = target`, reported by its support bitmask.
fn degree_supports(degrees: &[LatticeVector], u: &LatticeVector, target: &LatticeVector, out: &mut BTreeSet<u32>) {
    fn go(
        j: usize,
        rest: LatticeVector,
        mask: u32,
        degrees: &[LatticeVector],
        weights: &[BigInt],
        u: &LatticeVector,
        out: &mut BTreeSet<u32>,
    ) {
        if j == degrees.len() {
            if rest.is_zero() {
                out.insert(mask);
            }
            return;
        }
        let budget = rest.dot(u);
        if budget.is_negative() {
            return;
        }
        let max = budget.div_floor(&weights[j]);
        let mut a = BigInt::zero();
        let mut r = rest;
        while a <= max {
            let m = if a.is_zero() { mask } else { mask | 1 << j };
            go(j + 1, r.clone(), m, degrees, weights, u, out);
            r = &r - &degrees[j];
            a += 1;
        }
    }
    let weights: Vec<BigInt> = degrees.iter().map(|d| d.dot(u)).collect();
    go(0, target.clone(), 0, degrees, &weights, u, out);
}

fn minimal(masks: &BTreeSet<u32>) -> Vec<u32> {
    masks.iter().copied().filter(|&m| !masks.iter().any(|&o| o != m && o & m == o)).collect()
}

/// Stable base locus of `w` from the section monomials of degree `k·w`,
/// `1 ≤ k ≤ k_max`, added to the relations and saturated by the irrelevant
/// components.
pub fn stable_base_locus(model: &CoxPresentation, w: &LatticeVector, k_max: u32) -> Result<StableBaseLocus> {
    if model.status() == RelationStatus::RelationsUnknown {
        return Err(Error::Unsupported(format!(
            "stable base loci of {} need its relations, which are not recorded",
            model.id
        )));
    }
    if k_max == 0 {
        return Err(Error::InvalidParameter("k_max must be positive".into()));
    }
    if w.rank() != model.rank() {
        return Err(Error::RankMismatch { expected: model.rank(), found: w.rank() });
    }
    if !effective_cone(model)?.contains(w) {
        return Err(Error::OutsideEffective(w.to_string()));
    }
    let distinct = model.distinct_degrees();
    let u = grading_form(model, &distinct)?;
    let mut found = BTreeSet::new();
    let mut previous = Vec::new();
    for k in 1..=k_max {
        degree_supports(&distinct, &u, &w.scale(&k.into()), &mut found);
        if k + 1 == k_max || k_max == 1 {
            previous = minimal(&found);
        }
    }
    let supports = minimal(&found);
    let stabilized = supports == previous;

    // Radical of the section ideal: one variable from each degree group of a support.
    let n = model.nvars();
    let degs = model.variable_degrees();
    let groups: Vec<Vec<usize>> =
        distinct.iter().map(|d| (0..n).filter(|&i| degs[i] == *d).collect()).collect();
    let mut monomials: BTreeSet<Monomial> = BTreeSet::new();
    for &mask in &supports {
        let mut partial = vec![Monomial::one(n)];
        for (_, group) in groups.iter().enumerate().filter(|(j, _)| mask >> j & 1 == 1) {
            partial = partial
                .iter()
                .flat_map(|m| group.iter().map(move |&v| m.mul(&Monomial::var(n, v))))
                .collect();
        }
        monomials.extend(partial);
    }
    let sections = monomials.into_iter().map(|m| Poly::monomial(m, Rational::from_integer(1.into())));
    let mut ideal = model.relation_ideal().with_generators(sections);
    for component in &model.irrelevant {
        ideal = ideal.saturate_coordinate(component)?;
    }
    let supports = supports
        .iter()
        .map(|m| (0..distinct.len()).filter(|j| m >> j & 1 == 1).collect())
        .collect();
    Ok(StableBaseLocus { class: w.clone(), supports, ideal, k_max, stabilized })
}

/// The stable base locus decomposition: Mori chambers grouped into regions of
/// constant stable base locus.
#[derive(Clone, Debug)]
pub struct StableBaseLocusDecomposition {
    pub decomposition: Decomposition,
    /// Locus at each Mori chamber's representative, when computed.
    pub loci: Vec<Option<StableBaseLocus>>,
    pub note: ProvenanceNote,
}

impl StableBaseLocusDecomposition {
    pub fn len(&self) -> usize {
        self.decomposition.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decomposition.is_empty()
    }
}

/// Merges Mori chambers adjacent along an interior wall when their stable base
/// loci agree. Models whose relations are unknown use the recorded merge walls.
pub fn sbld(model: &CoxPresentation, sampling: &SamplingOptions, k_max: u32) -> Result<StableBaseLocusDecomposition> {
    let mcd = mori_chamber_decomposition(model, sampling)?;
    sbld_from(model, mcd, k_max)
}

/// As [`sbld`], starting from a computed Mori chamber decomposition.
pub fn sbld_from(model: &CoxPresentation, mcd: MoriChambers, k_max: u32) -> Result<StableBaseLocusDecomposition> {
    let complex = mcd.complex;
    if model.status() == RelationStatus::RelationsUnknown {
        let Some(fixture) = &model.fixtures.sbld_merge else {
            return Err(Error::Unsupported(format!(
                "stable base loci of {}: relations unknown and no recorded merges",
                model.id
            )));
        };
        let spans = fixture
            .walls
            .iter()
            .map(|[a, b]| RationalCone::from_generators(&[a.clone(), b.clone()]))
            .collect::<Result<Vec<_>>>()?;
        let pairs: Vec<(usize, usize)> = complex
            .walls()
            .iter()
            .filter_map(|w| match w.sides {
                WallSides::Interior(i, j) if spans.iter().any(|s| s.contains_cone(&w.cone)) => Some((i, j)),
                _ => None,
            })
            .collect();
        let loci = vec![None; complex.len()];
        return Ok(StableBaseLocusDecomposition {
            decomposition: Decomposition::merged(complex, &pairs),
            loci,
            note: ProvenanceNote {
                provenance: fixture.provenance,
                method: "recorded merges across walls".into(),
            },
        });
    }
    let reps: Vec<LatticeVector> = (0..complex.len()).map(|i| complex.representative(i)).collect();
    let loci = reps
        .par_iter()
        .map(|w| stable_base_locus(model, w, k_max))
        .collect::<Result<Vec<_>>>()?;
    let mut pairs = Vec::new();
    for wall in complex.walls() {
        if let WallSides::Interior(i, j) = wall.sides {
            if loci[i].same_locus(&loci[j])? {
                pairs.push((i, j));
            }
        }
    }
    let stabilized = loci.iter().all(|l| l.stabilized);
    Ok(StableBaseLocusDecomposition {
        decomposition: Decomposition::merged(complex, &pairs),
        loci: loci.into_iter().map(Some).collect(),
        note: ProvenanceNote {
            provenance: Provenance::Computed,
            method: if stabilized {
                format!("section ideals up to multiple {k_max}")
            } else {
                format!("section ideals up to multiple {k_max} (not stabilized)")
            },
        },
    })
}
