//! Oracles and generators shared by the integration tests.
#![allow(dead_code)]

use conekit::engine::{gkz_decomposition, movable_cone};
use conekit::models::{CoxPresentation, Generator, RelationStatus};
use conekit::poly::{Monomial, Poly, Rational};
use conekit::{LatticeVector, RationalCone};
use num_bigint::BigInt;
use proptest::prelude::*;

pub fn lv(xs: &[i64]) -> LatticeVector {
    LatticeVector::from(xs)
}

pub fn cone(rays: &[LatticeVector]) -> RationalCone {
    RationalCone::from_generators(rays).unwrap()
}

/// `D_k` with two exceptional divisors, written out directly: the coefficient of
/// `E_h` is `-(k - h)` when `h < k` and zero otherwise.
pub fn d(k: i64) -> LatticeVector {
    let e = |h: i64| if h < k { -(k - h) } else { 0 };
    lv(&[k, e(1), e(2)])
}

pub fn e(j: usize) -> LatticeVector {
    let mut v = [0i64; 3];
    v[j] = 1;
    lv(&v)
}

pub fn p(n: i64) -> LatticeVector {
    lv(&[n * (n - 1), n * (2 - n), (n - 1) * (2 - n)])
}

/// Sorted primitive rays, for set comparisons.
pub fn primitive_set(rays: &[LatticeVector]) -> Vec<LatticeVector> {
    let mut v: Vec<LatticeVector> = rays.iter().map(LatticeVector::primitive).collect();
    v.sort();
    v.dedup();
    v
}

fn det2(a: &LatticeVector, b: &LatticeVector) -> BigInt {
    let (a, b) = (a.coords(), b.coords());
    &a[0] * &b[1] - &a[1] * &b[0]
}

fn bare_rank2(degrees: &[([i64; 2], u64)]) -> CoxPresentation {
    let gens = degrees
        .iter()
        .enumerate()
        .map(|(i, (deg, mult))| Generator { label: format!("G{}", i + 1), degree: (*deg).into(), multiplicity: *mult })
        .collect();
    CoxPresentation::new("random", vec!["a".into(), "b".into()], gens, vec![], RelationStatus::Toric).unwrap()
}

/// The first GKZ chamber inside a full-dimensional movable cone, if any.
fn movable_chamber(m: &CoxPresentation) -> Option<LatticeVector> {
    let mov = movable_cone(m).ok()?;
    if mov.dim() < 2 {
        return None;
    }
    let gkz = gkz_decomposition(m).ok()?;
    (0..gkz.len()).find(|&i| mov.contains_cone(&gkz.chambers()[i])).map(|i| gkz.representative(i))
}

/// A toric rank-two model on the given degrees, polarized by the first GKZ
/// chamber inside the movable cone; the irrelevant ideal has the variables on
/// either side of that class as its two components.
pub fn toric_rank2(degrees: &[([i64; 2], u64)]) -> CoxPresentation {
    let mut m = bare_rank2(degrees);
    let w = movable_chamber(&m).expect("configuration has a movable chamber");
    let degs = m.variable_degrees();
    let zero = BigInt::from(0);
    let right: Vec<usize> = (0..degs.len()).filter(|&i| det2(&degs[i], &w) > zero).collect();
    let left: Vec<usize> = (0..degs.len()).filter(|&i| det2(&degs[i], &w) < zero).collect();
    m.irrelevant = vec![right, left];
    m.ample = Some(w);
    m
}

/// Rank-two degree configurations in the closed positive quadrant spanning it
/// full-dimensionally, with a full-dimensional movable cone.
pub fn rank2_configuration(max_len: usize) -> impl Strategy<Value = Vec<([i64; 2], u64)>> {
    prop::collection::vec(((0i64..4, 0i64..4), 1u64..3), 2..=max_len)
        .prop_map(|v| v.into_iter().filter(|((a, b), _)| *a + *b > 0).map(|((a, b), m)| ([a, b], m)).collect::<Vec<_>>())
        .prop_filter("spans the plane", |v: &Vec<([i64; 2], u64)>| {
            v.iter().any(|(x, _)| v.iter().any(|(y, _)| x[0] * y[1] - x[1] * y[0] != 0))
        })
        .prop_filter("has a movable chamber", |v| movable_chamber(&bare_rank2(v)).is_some())
}

/// Small integer vectors in rank 2 or 3, none of them zero.
pub fn generator_set() -> impl Strategy<Value = Vec<LatticeVector>> {
    (2usize..=3).prop_flat_map(|r| {
        prop::collection::vec(prop::collection::vec(-3i64..=3, r), 1..6).prop_map(|vs| {
            vs.into_iter().filter(|v| v.iter().any(|&x| x != 0)).map(LatticeVector::from).collect::<Vec<_>>()
        })
    })
    .prop_filter("nonempty", |v| !v.is_empty())
}

pub fn generator_pair() -> impl Strategy<Value = (Vec<LatticeVector>, Vec<LatticeVector>)> {
    (2usize..=3).prop_flat_map(|r| {
        let one = move || {
            prop::collection::vec(prop::collection::vec(-3i64..=3, r), 1..5).prop_map(|vs| {
                vs.into_iter().filter(|v| v.iter().any(|&x| x != 0)).map(LatticeVector::from).collect::<Vec<_>>()
            })
        };
        (one(), one())
    })
    .prop_filter("nonempty", |(a, b)| !a.is_empty() && !b.is_empty())
}

/// Polynomials in three variables of degree at most two with small coefficients.
pub fn small_polys() -> impl Strategy<Value = Vec<Poly<Rational>>> {
    let term = (prop::collection::vec(0u32..=2, 3), -4i64..=4);
    let poly = prop::collection::vec(term, 1..4).prop_map(|ts| {
        Poly::from_terms(
            3,
            ts.into_iter()
                .filter(|(e, _)| e.iter().sum::<u32>() <= 2)
                .map(|(e, c)| (Monomial(e), Rational::from_integer(c.into()))),
        )
    });
    prop::collection::vec(poly, 1..4)
}

/// Rays in the positive octant spanning a pointed rank-3 cone.
pub fn octant_rays() -> impl Strategy<Value = Vec<LatticeVector>> {
    prop::collection::vec(prop::collection::vec(0i64..=3, 3), 3..7).prop_map(|vs| {
        let mut out: Vec<LatticeVector> = vec![lv(&[1, 0, 0]), lv(&[0, 1, 0]), lv(&[0, 0, 1])];
        out.extend(vs.into_iter().filter(|v| v.iter().any(|&x| x != 0)).map(LatticeVector::from));
        out
    })
}
