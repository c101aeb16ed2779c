//! Lattice vectors and rational polyhedral cones in ambient rank at most four.
//!
//! A [`RationalCone`] keeps both descriptions at once: generators (extremal rays
//! plus a lineality basis) and inequalities (inward facet normals plus a basis of
//! the equations cutting out its linear span). Both are canonical, so two cones
//! are equal as sets exactly when they compare equal.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg;

/// Largest ambient rank handled by the brute-force double description.
pub const MAX_AMBIENT_RANK: usize = 4;

/// An integer vector in a divisor class group basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(Vec<BigInt>);

impl LatticeVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatticeVector(coords)
    }

    pub fn zero(rank: usize) -> Self {
        LatticeVector(vec![BigInt::zero(); rank])
    }

    /// The `i`-th standard basis vector.
    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = Self::zero(rank);
        v.0[i] = BigInt::from(1);
        v
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_primitive(&self) -> bool {
        !self.is_zero() && linalg::primitive(&self.0) == self.0
    }

    /// Representative of the ray through `self`: divides out the content.
    pub fn primitive(&self) -> Self {
        LatticeVector(linalg::primitive(&self.0))
    }

    pub fn dot(&self, other: &Self) -> BigInt {
        linalg::dot(&self.0, &other.0)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        LatticeVector(self.0.iter().map(|x| x * k).collect())
    }

    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }

    /// Applies an integer matrix given by rows.
    pub fn transform(&self, rows: &[LatticeVector]) -> LatticeVector {
        LatticeVector(rows.iter().map(|r| r.dot(self)).collect())
    }

    pub(crate) fn from_rational(v: &[BigRational]) -> Self {
        LatticeVector(linalg::clear_denominators(v))
    }
}

impl From<&[i64]> for LatticeVector {
    fn from(xs: &[i64]) -> Self {
        LatticeVector(xs.iter().map(|&x| BigInt::from(x)).collect())
    }
}

impl<const N: usize> From<[i64; N]> for LatticeVector {
    fn from(xs: [i64; N]) -> Self {
        LatticeVector::from(&xs[..])
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(xs: Vec<i64>) -> Self {
        LatticeVector::from(&xs[..])
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for LatticeVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let ints = self
            .to_i64s()
            .ok_or_else(|| serde::ser::Error::custom("coordinate does not fit in 64 bits"))?;
        ints.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LatticeVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(LatticeVector::from(Vec::<i64>::deserialize(d)?))
    }
}

/// Where a vector sits relative to a cone. `Interior` means the relative interior.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Position {
    Interior,
    Boundary,
    Outside,
}

/// A finitely generated convex cone in canonical double description.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalCone {
    ambient: usize,
    rays: Vec<LatticeVector>,
    lineality: Vec<LatticeVector>,
    facets: Vec<LatticeVector>,
    equations: Vec<LatticeVector>,
}

fn check_rank(r: usize) -> Result<()> {
    if r == 0 || r > MAX_AMBIENT_RANK {
        return Err(Error::UnsupportedRank(r));
    }
    Ok(())
}

fn raw(vs: &[LatticeVector]) -> Vec<Vec<BigInt>> {
    vs.iter().map(|v| v.0.clone()).collect()
}

fn wrap(vs: Vec<Vec<BigInt>>) -> Vec<LatticeVector> {
    vs.into_iter().map(LatticeVector).collect()
}

/// All `k`-element index subsets of `0..n`, in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn dedup_primitive(vs: impl IntoIterator<Item = LatticeVector>) -> Vec<LatticeVector> {
    let mut out: Vec<LatticeVector> = vs
        .into_iter()
        .filter(|v| !v.is_zero())
        .map(|v| v.primitive())
        .collect();
    out.sort();
    out.dedup();
    out
}

impl RationalCone {
    /// The cone `{0}`.
    pub fn zero(ambient: usize) -> Self {
        RationalCone {
            ambient,
            rays: Vec::new(),
            lineality: Vec::new(),
            facets: Vec::new(),
            equations: (0..ambient).map(|i| LatticeVector::unit(ambient, i)).collect(),
        }
    }

    /// The whole space.
    pub fn full(ambient: usize) -> Self {
        RationalCone {
            ambient,
            rays: Vec::new(),
            lineality: (0..ambient).map(|i| LatticeVector::unit(ambient, i)).collect(),
            facets: Vec::new(),
            equations: Vec::new(),
        }
    }

    /// Canonical cone generated by `vectors`. Redundant generators are dropped.
    pub fn from_generators(vectors: &[LatticeVector]) -> Result<Self> {
        let first = vectors.first().ok_or(Error::Empty("cone generators"))?;
        let d = first.rank();
        check_rank(d)?;
        for (index, v) in vectors.iter().enumerate() {
            if v.rank() != d {
                return Err(Error::RankMismatch { expected: d, found: v.rank() });
            }
            if v.is_zero() {
                return Err(Error::ZeroVector { index });
            }
        }
        Ok(Self::build(d, dedup_primitive(vectors.iter().cloned())))
    }

    /// Like [`from_generators`](Self::from_generators) but zero vectors are ignored and an
    /// empty list gives the zero cone.
    pub(crate) fn span_of(ambient: usize, vectors: &[LatticeVector]) -> Self {
        Self::build(ambient, dedup_primitive(vectors.iter().cloned()))
    }

    fn build(d: usize, gens: Vec<LatticeVector>) -> Self {
        if gens.is_empty() {
            return Self::zero(d);
        }
        let g = raw(&gens);
        let equations = linalg::nullspace(&g, d);
        let k = d - equations.len();

        let mut facets = Vec::new();
        for sub in subsets(gens.len(), k - 1) {
            let mut rows: Vec<Vec<BigInt>> = sub.iter().map(|&i| g[i].clone()).collect();
            rows.extend(equations.iter().cloned());
            if linalg::rank(&rows, d) != d - 1 {
                continue;
            }
            let a = linalg::nullspace(&rows, d).pop().expect("one-dimensional kernel");
            let signs: Vec<i8> = g.iter().map(|x| linalg::sign(&linalg::dot(&a, x))).collect();
            if signs.iter().all(|&s| s >= 0) {
                facets.push(LatticeVector(linalg::primitive(&a)));
            } else if signs.iter().all(|&s| s <= 0) {
                facets.push(-&LatticeVector(linalg::primitive(&a)));
            }
        }
        facets.sort();
        facets.dedup();

        let mut lin_rows = equations.clone();
        lin_rows.extend(facets.iter().map(|f| f.0.clone()));
        let lineality = linalg::nullspace(&lin_rows, d);

        // Pointed part lives in the orthogonal complement of the lineality space.
        let projected: Vec<LatticeVector> = if lineality.is_empty() {
            gens
        } else {
            let pr = project_away(&g, &lineality, d);
            dedup_primitive(pr)
        };
        let mut base = equations.clone();
        base.extend(lineality.iter().cloned());
        let mut rays: Vec<LatticeVector> = projected
            .into_iter()
            .filter(|r| {
                let mut rows = base.clone();
                rows.extend(
                    facets
                        .iter()
                        .filter(|f| f.dot(r).is_zero())
                        .map(|f| f.0.clone()),
                );
                linalg::rank(&rows, d) == d - 1
            })
            .collect();
        rays.sort();

        RationalCone {
            ambient: d,
            rays,
            lineality: wrap(lineality),
            facets,
            equations: wrap(equations),
        }
    }

    /// The cone `{x : a·x ≥ 0 for a in inequalities, e·x = 0 for e in equations}`.
    pub fn from_inequalities(
        ambient: usize,
        inequalities: &[LatticeVector],
        equations: &[LatticeVector],
    ) -> Result<Self> {
        check_rank(ambient)?;
        for v in inequalities.iter().chain(equations) {
            if v.rank() != ambient {
                return Err(Error::RankMismatch { expected: ambient, found: v.rank() });
            }
        }
        let d = ambient;
        let ineqs = raw(&dedup_primitive(inequalities.iter().cloned()));
        let eqs = linalg::row_space_basis(&raw(equations), d);

        let mut all = eqs.clone();
        all.extend(ineqs.iter().cloned());
        let lineality = linalg::nullspace(&all, d);

        let mut base = eqs.clone();
        base.extend(lineality.iter().cloned());
        let base_rank = linalg::rank(&base, d);
        let r = d - base_rank;

        let mut gens: Vec<LatticeVector> = Vec::new();
        for l in &lineality {
            gens.push(LatticeVector(l.clone()));
            gens.push(-&LatticeVector(l.clone()));
        }
        if r > 0 {
            for sub in subsets(ineqs.len(), r - 1) {
                let mut rows = base.clone();
                rows.extend(sub.iter().map(|&i| ineqs[i].clone()));
                if linalg::rank(&rows, d) != d - 1 {
                    continue;
                }
                let x = linalg::nullspace(&rows, d).pop().expect("one-dimensional kernel");
                let feasible = |x: &Vec<BigInt>| {
                    ineqs.iter().all(|a| !linalg::dot(a, x).is_negative())
                };
                if feasible(&x) {
                    gens.push(LatticeVector(x));
                } else {
                    let y: Vec<BigInt> = x.iter().map(|c| -c).collect();
                    if feasible(&y) {
                        gens.push(LatticeVector(y));
                    }
                }
            }
        }
        Ok(Self::build(d, dedup_primitive(gens)))
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    /// Extremal rays of the pointed part, primitive and sorted.
    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn lineality(&self) -> &[LatticeVector] {
        &self.lineality
    }

    /// Primitive inward facet normals.
    pub fn facets(&self) -> &[LatticeVector] {
        &self.facets
    }

    /// Basis of the linear forms vanishing on the cone.
    pub fn equations(&self) -> &[LatticeVector] {
        &self.equations
    }

    pub fn dim(&self) -> usize {
        self.ambient - self.equations.len()
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Rays together with both signs of the lineality basis.
    pub fn generators(&self) -> Vec<LatticeVector> {
        let mut g = self.rays.clone();
        for l in &self.lineality {
            g.push(l.clone());
            g.push(-l);
        }
        g
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        self.position(v) != Position::Outside
    }

    /// Exact classification of `v`; `Interior` is the relative interior.
    pub fn position(&self, v: &LatticeVector) -> Position {
        if v.rank() != self.ambient {
            return Position::Outside;
        }
        if self.equations.iter().any(|e| !e.dot(v).is_zero()) {
            return Position::Outside;
        }
        let mut tight = false;
        for f in &self.facets {
            let s = f.dot(v);
            if s.is_negative() {
                return Position::Outside;
            }
            if s.is_zero() {
                tight = true;
            }
        }
        if tight {
            Position::Boundary
        } else {
            Position::Interior
        }
    }

    pub fn contains_cone(&self, other: &RationalCone) -> bool {
        other.generators().iter().all(|g| self.contains(g))
    }

    pub fn intersect(&self, other: &RationalCone) -> Result<RationalCone> {
        if self.ambient != other.ambient {
            return Err(Error::RankMismatch { expected: self.ambient, found: other.ambient });
        }
        let mut ineqs = self.facets.clone();
        ineqs.extend(other.facets.iter().cloned());
        let mut eqs = self.equations.clone();
        eqs.extend(other.equations.iter().cloned());
        RationalCone::from_inequalities(self.ambient, &ineqs, &eqs)
    }

    /// The dual cone `{y : y·x ≥ 0 for all x in self}`.
    pub fn dual(&self) -> RationalCone {
        let mut gens = self.facets.clone();
        for e in &self.equations {
            gens.push(e.clone());
            gens.push(-e);
        }
        RationalCone::span_of(self.ambient, &gens)
    }

    /// Sum of the rays: a lattice point in the relative interior of a pointed cone.
    pub fn interior_point(&self) -> LatticeVector {
        self.rays
            .iter()
            .fold(LatticeVector::zero(self.ambient), |acc, r| &acc + r)
    }

    /// Image under the integer matrix with the given rows.
    pub fn image(&self, rows: &[LatticeVector]) -> Result<RationalCone> {
        let target = rows.len();
        check_rank(target)?;
        if let Some(bad) = rows.iter().find(|r| r.rank() != self.ambient) {
            return Err(Error::RankMismatch { expected: self.ambient, found: bad.rank() });
        }
        let gens: Vec<LatticeVector> = self.generators().iter().map(|g| g.transform(rows)).collect();
        Ok(RationalCone::span_of(target, &gens))
    }
}

fn project_away(g: &[Vec<BigInt>], lineality: &[Vec<BigInt>], d: usize) -> Vec<LatticeVector> {
    // Gram–Schmidt on the lineality basis, then subtract components.
    let to_r = |v: &Vec<BigInt>| -> Vec<BigRational> {
        v.iter().cloned().map(BigRational::from_integer).collect()
    };
    let rdot = |a: &[BigRational], b: &[BigRational]| -> BigRational {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    };
    let mut ortho: Vec<Vec<BigRational>> = Vec::new();
    for l in lineality {
        let mut v = to_r(l);
        for o in &ortho {
            let c = rdot(&v, o) / rdot(o, o);
            for i in 0..d {
                v[i] = &v[i] - &c * &o[i];
            }
        }
        ortho.push(v);
    }
    g.iter()
        .map(|x| {
            let mut v = to_r(x);
            for o in &ortho {
                let c = rdot(&v, o) / rdot(o, o);
                for i in 0..d {
                    v[i] = &v[i] - &c * &o[i];
                }
            }
            LatticeVector::from_rational(&v)
        })
        .collect()
}

impl fmt::Display for RationalCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨")?;
        for (i, r) in self.generators().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "⟩")
    }
}

impl fmt::Debug for RationalCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Convenience constructor used throughout tests and docs.
pub fn cone_from_generators(vectors: &[LatticeVector]) -> Result<RationalCone> {
    RationalCone::from_generators(vectors)
}

pub fn cone_intersect(a: &RationalCone, b: &RationalCone) -> Result<RationalCone> {
    a.intersect(b)
}

pub fn cone_position(cone: &RationalCone, v: &LatticeVector) -> Position {
    cone.position(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(xs: &[i64]) -> LatticeVector {
        LatticeVector::from(xs)
    }

    fn cone(gens: &[&[i64]]) -> RationalCone {
        RationalCone::from_generators(&gens.iter().map(|g| lv(g)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn interior_generator_is_dropped() {
        let c = cone(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(c.rays(), &[lv(&[0, 1]), lv(&[1, 0])]);
        assert!(c.is_full_dimensional());
    }

    #[test]
    fn effective_cone_of_rank_three_model() {
        let c = cone(&[&[0, 1, 0], &[0, 0, 1], &[4, -3, -2]]);
        assert_eq!(c.rays().len(), 3);
        assert_eq!(c.facets().len(), 3);
        assert_eq!(c.position(&lv(&[6, -3, -2])), Position::Interior);
    }

    #[test]
    fn coplanar_triple_gives_two_dimensional_cone() {
        let c = cone(&[&[2, -1, 0], &[4, -3, -2], &[3, -2, -1]]);
        assert_eq!(c.dim(), 2);
        assert_eq!(c.rays(), &[lv(&[2, -1, 0]), lv(&[4, -3, -2])]);
    }

    #[test]
    fn zero_vector_is_rejected() {
        let err = RationalCone::from_generators(&[lv(&[1, 0]), lv(&[0, 0])]).unwrap_err();
        assert!(matches!(err, Error::ZeroVector { index: 1 }));
        assert!(matches!(
            RationalCone::from_generators(&[]),
            Err(Error::Empty(_))
        ));
    }

    #[test]
    fn sector_intersection() {
        let a = cone(&[&[1, 0], &[1, 2]]);
        let b = cone(&[&[2, 1], &[0, 1]]);
        assert_eq!(a.intersect(&b).unwrap(), cone(&[&[2, 1], &[1, 2]]));
        assert_eq!(a.intersect(&a).unwrap(), a);
    }

    #[test]
    fn plane_intersection_gives_the_extra_movable_ray() {
        let a = cone(&[&[1, 0, 0], &[4, -3, -2]]);
        let b = cone(&[&[0, 1, 0], &[3, -2, -1]]);
        let c = a.intersect(&b).unwrap();
        assert_eq!(c.rays(), &[lv(&[6, -3, -2])]);
        assert_eq!(c.dim(), 1);
    }

    #[test]
    fn rank_mismatch_is_an_error() {
        let a = cone(&[&[1, 0]]);
        let b = cone(&[&[1, 0, 0]]);
        assert!(matches!(a.intersect(&b), Err(Error::RankMismatch { .. })));
    }

    #[test]
    fn positions() {
        let q = cone(&[&[1, 0], &[0, 1]]);
        assert_eq!(q.position(&lv(&[1, 1])), Position::Interior);
        assert_eq!(q.position(&lv(&[1, 0])), Position::Boundary);
        assert_eq!(q.position(&lv(&[-1, 0])), Position::Outside);
    }

    #[test]
    fn lines_and_half_planes() {
        let line = cone(&[&[1, 1], &[-1, -1]]);
        assert!(!line.is_pointed());
        assert_eq!(line.dim(), 1);
        assert!(line.rays().is_empty());
        let half = cone(&[&[1, 0], &[-1, 0], &[0, 1]]);
        assert_eq!(half.facets(), &[lv(&[0, 1])]);
        assert_eq!(half.rays(), &[lv(&[0, 1])]);
        assert_eq!(half.dual(), cone(&[&[0, 1]]));
        assert_eq!(half.dual().dual(), half);
    }

    #[test]
    fn disjoint_sectors_meet_at_origin() {
        let a = cone(&[&[1, 0], &[2, 1]]);
        let b = cone(&[&[1, 2], &[0, 1]]);
        assert!(a.intersect(&b).unwrap().is_zero());
    }

    #[test]
    fn image_under_swap() {
        let a = cone(&[&[1, 0], &[2, 1]]);
        let swap = vec![lv(&[0, 1]), lv(&[1, 0])];
        assert_eq!(a.image(&swap).unwrap(), cone(&[&[0, 1], &[1, 2]]));
    }
}
