//! Rank-three chamber complexes computed as exact planar segment arrangements
//! on an affine cross-section of the support cone.
//!
//! Every pair of distinct generator rays spans a two-dimensional cone; in the
//! chart these become segments. The bounded faces of the arrangement formed by
//! all of them (plus the support boundary) are the chambers.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::complex::{ChamberComplex, Wall, WallSides};
use crate::cone::{LatticeVector, RationalCone};
use crate::error::{Error, Result};

pub type Point2 = (BigRational, BigRational);

fn sub(a: &Point2, b: &Point2) -> Point2 {
    (&a.0 - &b.0, &a.1 - &b.1)
}

fn cross(a: &Point2, b: &Point2) -> BigRational {
    &a.0 * &b.1 - &a.1 * &b.0
}

fn orient(o: &Point2, a: &Point2, b: &Point2) -> BigRational {
    cross(&sub(a, o), &sub(b, o))
}

/// Counterclockwise angular order of direction vectors, starting at angle 0.
fn angle_cmp(a: &Point2, b: &Point2) -> Ordering {
    let half = |d: &Point2| -> u8 {
        if d.1.is_positive() || (d.1.is_zero() && d.0.is_positive()) {
            0
        } else {
            1
        }
    };
    half(a).cmp(&half(b)).then_with(|| {
        let c = cross(a, b);
        if c.is_positive() {
            Ordering::Less
        } else if c.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

/// Twice the signed area of a polygon.
fn signed_area2(pts: &[&Point2]) -> BigRational {
    let n = pts.len();
    (0..n)
        .map(|i| cross(pts[i], pts[(i + 1) % n]))
        .fold(BigRational::zero(), |a, b| a + b)
}

/// Affine chart `{x : u·x = 1}` of a pointed full-dimensional rank-3 cone,
/// with planar coordinates obtained by dropping one coordinate.
#[derive(Clone, Debug)]
pub struct Chart {
    pub functional: LatticeVector,
    dropped: usize,
}

impl Chart {
    /// `u` is the sum of the support's facet normals, which is strictly
    /// positive on every nonzero vector of the support.
    pub fn for_support(support: &RationalCone) -> Result<Chart> {
        if support.ambient_rank() != 3 || !support.is_full_dimensional() || !support.is_pointed() {
            return Err(Error::Degenerate(format!(
                "cross sections need a full-dimensional pointed rank-3 support, got {support}"
            )));
        }
        let u = support
            .facets()
            .iter()
            .fold(LatticeVector::zero(3), |acc, f| &acc + f);
        let dropped = u
            .coords()
            .iter()
            .position(|c| !c.is_zero())
            .expect("interior dual vector is nonzero");
        Ok(Chart { functional: u, dropped })
    }

    pub fn project(&self, v: &LatticeVector) -> Point2 {
        let s = BigRational::from_integer(self.functional.dot(v));
        let mut out = v
            .coords()
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != self.dropped)
            .map(|(_, x)| BigRational::from_integer(x.clone()) / &s);
        let a = out.next().unwrap();
        let b = out.next().unwrap();
        (a, b)
    }

    pub fn lift(&self, p: &Point2) -> LatticeVector {
        let u = self.functional.coords();
        let others: Vec<usize> = (0..3).filter(|&i| i != self.dropped).collect();
        let mut x = vec![BigRational::zero(); 3];
        x[others[0]] = p.0.clone();
        x[others[1]] = p.1.clone();
        let rest = BigRational::from_integer(u[others[0]].clone()) * &p.0
            + BigRational::from_integer(u[others[1]].clone()) * &p.1;
        x[self.dropped] =
            (BigRational::from_integer(BigInt::from(1)) - rest) / BigRational::from_integer(u[self.dropped].clone());
        LatticeVector::from_rational(&x)
    }
}

/// The planar arrangement behind a rank-3 chamber complex.
#[derive(Clone, Debug)]
pub struct Arrangement {
    pub chart: Chart,
    /// Chart images of the (distinct) generator rays and support rays.
    pub sites: Vec<(LatticeVector, Point2)>,
    pub vertices: Vec<Point2>,
    pub edges: Vec<(usize, usize)>,
    /// Bounded faces as counterclockwise vertex cycles, indexed like the chambers.
    pub faces: Vec<Vec<usize>>,
    pub support_polygon: Vec<Point2>,
    pub complex: ChamberComplex,
}

impl Arrangement {
    /// `V − E + F` with `F` the number of bounded faces.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Twice the area of each chamber cross-section.
    pub fn face_areas2(&self) -> Vec<BigRational> {
        self.faces
            .iter()
            .map(|f| {
                let pts: Vec<&Point2> = f.iter().map(|&i| &self.vertices[i]).collect();
                signed_area2(&pts)
            })
            .collect()
    }

    pub fn support_area2(&self) -> BigRational {
        let pts: Vec<&Point2> = self.support_polygon.iter().collect();
        signed_area2(&pts)
    }
}

fn line_key(p: &Point2, q: &Point2) -> (BigRational, BigRational, BigRational) {
    let a = &q.1 - &p.1;
    let b = &p.0 - &q.0;
    let c = &a * &p.0 + &b * &p.1;
    let n = if !a.is_zero() { a.clone() } else { b.clone() };
    (a / &n, b / &n, c / &n)
}

fn on_segment(p: &Point2, a: &Point2, b: &Point2) -> bool {
    orient(a, b, p).is_zero()
        && p.0 >= a.0.clone().min(b.0.clone())
        && p.0 <= a.0.clone().max(b.0.clone())
        && p.1 >= a.1.clone().min(b.1.clone())
        && p.1 <= a.1.clone().max(b.1.clone())
}

fn intersection(a: &Point2, b: &Point2, c: &Point2, d: &Point2) -> Option<Point2> {
    let r = sub(b, a);
    let s = sub(d, c);
    let den = cross(&r, &s);
    if den.is_zero() {
        return None;
    }
    let ca = sub(c, a);
    let t = cross(&ca, &s) / &den;
    let u = cross(&ca, &r) / &den;
    let zero = BigRational::zero();
    let one = BigRational::from_integer(BigInt::from(1));
    if t < zero || t > one || u < zero || u > one {
        return None;
    }
    Some((&a.0 + &t * &r.0, &a.1 + &t * &r.1))
}

/// Builds the full pairwise segment arrangement of `generator_rays` inside `support`.
pub fn build_arrangement(generator_rays: &[LatticeVector], support: &RationalCone) -> Result<Arrangement> {
    let chart = Chart::for_support(support)?;
    for (index, r) in generator_rays.iter().enumerate() {
        if r.rank() != 3 {
            return Err(Error::RankMismatch { expected: 3, found: r.rank() });
        }
        if r.is_zero() {
            return Err(Error::ZeroVector { index });
        }
        if !support.contains(r) {
            return Err(Error::InvalidParameter(format!("ray {r} lies outside the support")));
        }
    }

    let gens: BTreeSet<LatticeVector> = generator_rays.iter().map(|r| r.primitive()).collect();
    let mut all_rays = gens.clone();
    all_rays.extend(support.rays().iter().cloned());
    let sites: Vec<(LatticeVector, Point2)> = all_rays
        .iter()
        .map(|r| (r.clone(), chart.project(r)))
        .collect();
    let site_of: BTreeMap<LatticeVector, Point2> = sites.iter().cloned().collect();

    // Raw segments: every generator pair, plus the support's edges.
    let mut raw: Vec<(Point2, Point2)> = Vec::new();
    let gl: Vec<&LatticeVector> = gens.iter().collect();
    for i in 0..gl.len() {
        for j in i + 1..gl.len() {
            raw.push((site_of[gl[i]].clone(), site_of[gl[j]].clone()));
        }
    }
    let srays = support.rays();
    for i in 0..srays.len() {
        for j in i + 1..srays.len() {
            let shared = support
                .facets()
                .iter()
                .filter(|f| f.dot(&srays[i]).is_zero() && f.dot(&srays[j]).is_zero())
                .count();
            if shared > 0 {
                raw.push((site_of[&srays[i]].clone(), site_of[&srays[j]].clone()));
            }
        }
    }

    // Merge collinear overlapping segments into maximal ones.
    let mut by_line: BTreeMap<_, Vec<(Point2, Point2)>> = BTreeMap::new();
    for (p, q) in raw {
        let (p, q) = if p <= q { (p, q) } else { (q, p) };
        by_line.entry(line_key(&p, &q)).or_default().push((p, q));
    }
    let mut segments: Vec<(Point2, Point2)> = Vec::new();
    for (_, mut segs) in by_line {
        segs.sort();
        let mut cur = segs[0].clone();
        for s in segs.into_iter().skip(1) {
            if s.0 <= cur.1 {
                if s.1 > cur.1 {
                    cur.1 = s.1;
                }
            } else {
                segments.push(cur);
                cur = s;
            }
        }
        segments.push(cur);
    }

    // Split points on every segment.
    let mut splits: Vec<BTreeSet<Point2>> = segments
        .iter()
        .map(|(a, b)| [a.clone(), b.clone()].into_iter().collect())
        .collect();
    for (i, (a, b)) in segments.iter().enumerate() {
        for (_, p) in &sites {
            if on_segment(p, a, b) {
                splits[i].insert(p.clone());
            }
        }
    }
    for i in 0..segments.len() {
        for j in i + 1..segments.len() {
            let (a, b) = &segments[i];
            let (c, d) = &segments[j];
            if let Some(x) = intersection(a, b, c, d) {
                splits[i].insert(x.clone());
                splits[j].insert(x);
            }
        }
    }

    let mut vindex: BTreeMap<Point2, usize> = BTreeMap::new();
    for s in &splits {
        for p in s {
            let n = vindex.len();
            vindex.entry(p.clone()).or_insert(n);
        }
    }
    let mut vertices = vec![(BigRational::zero(), BigRational::zero()); vindex.len()];
    for (p, &i) in &vindex {
        vertices[i] = p.clone();
    }
    let mut edge_set: BTreeSet<(usize, usize)> = BTreeSet::new();
    for s in &splits {
        let pts: Vec<usize> = s.iter().map(|p| vindex[p]).collect();
        for w in pts.windows(2) {
            edge_set.insert((w[0].min(w[1]), w[0].max(w[1])));
        }
    }
    let edges: Vec<(usize, usize)> = edge_set.into_iter().collect();

    // Counterclockwise neighbour lists.
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
    for &(a, b) in &edges {
        nbrs[a].push(b);
        nbrs[b].push(a);
    }
    for (v, list) in nbrs.iter_mut().enumerate() {
        let o = vertices[v].clone();
        list.sort_by(|&x, &y| angle_cmp(&sub(&vertices[x], &o), &sub(&vertices[y], &o)));
    }

    // Face tracing: next(u→v) = v→w with w the clockwise successor of u around v.
    let mut face_of: HashMap<(usize, usize), usize> = HashMap::new();
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for &(a, b) in &edges {
        for (u0, v0) in [(a, b), (b, a)] {
            if face_of.contains_key(&(u0, v0)) {
                continue;
            }
            let id = cycles.len();
            let mut cycle = Vec::new();
            let (mut u, mut v) = (u0, v0);
            loop {
                face_of.insert((u, v), id);
                cycle.push(u);
                let list = &nbrs[v];
                let k = list.iter().position(|&x| x == u).expect("symmetric adjacency");
                let w = list[(k + list.len() - 1) % list.len()];
                u = v;
                v = w;
                if (u, v) == (u0, v0) {
                    break;
                }
            }
            cycles.push(cycle);
        }
    }

    let areas: Vec<BigRational> = cycles
        .iter()
        .map(|c| signed_area2(&c.iter().map(|&i| &vertices[i]).collect::<Vec<_>>()))
        .collect();
    let outer: Vec<usize> = (0..cycles.len()).filter(|&i| !areas[i].is_positive()).collect();
    if outer.len() != 1 {
        return Err(Error::Degenerate(format!(
            "arrangement has {} unbounded faces (expected one)",
            outer.len()
        )));
    }
    let outer = outer[0];

    // Chambers in canonical order.
    let mut bounded: Vec<(RationalCone, usize)> = Vec::new();
    for (i, c) in cycles.iter().enumerate() {
        if i == outer {
            continue;
        }
        let rays: Vec<LatticeVector> = c.iter().map(|&k| chart.lift(&vertices[k])).collect();
        bounded.push((RationalCone::from_generators(&rays)?, i));
    }
    bounded.sort_by(|a, b| a.0.rays().cmp(b.0.rays()));
    let mut chamber_of_face = vec![usize::MAX; cycles.len()];
    for (ci, (_, fi)) in bounded.iter().enumerate() {
        chamber_of_face[*fi] = ci;
    }

    // Edges between the same two faces on the same line form one wall.
    let mut wall_groups: BTreeMap<_, BTreeSet<usize>> = BTreeMap::new();
    for &(a, b) in &edges {
        let f1 = face_of[&(a, b)];
        let f2 = face_of[&(b, a)];
        let key = (f1.min(f2), f1.max(f2), line_key(&vertices[a], &vertices[b]));
        let e = wall_groups.entry(key).or_default();
        e.insert(a);
        e.insert(b);
    }
    let mut walls = Vec::new();
    for ((f1, f2, _), pts) in wall_groups {
        let rays: Vec<LatticeVector> = pts.iter().map(|&k| chart.lift(&vertices[k])).collect();
        let cone = RationalCone::from_generators(&rays)?;
        let sides = if f1 == outer || f2 == outer {
            let inner = if f1 == outer { f2 } else { f1 };
            WallSides::Boundary(chamber_of_face[inner])
        } else {
            let (x, y) = (chamber_of_face[f1], chamber_of_face[f2]);
            WallSides::Interior(x.min(y), x.max(y))
        };
        walls.push(Wall { cone, sides });
    }

    let mut support_polygon: Vec<Point2> = srays.iter().map(|r| chart.project(r)).collect();
    let n = BigRational::from_integer(BigInt::from(support_polygon.len() as i64));
    let centroid = support_polygon
        .iter()
        .fold((BigRational::zero(), BigRational::zero()), |acc, p| (acc.0 + &p.0, acc.1 + &p.1));
    let centroid = (centroid.0 / &n, centroid.1 / &n);
    support_polygon.sort_by(|a, b| angle_cmp(&sub(a, &centroid), &sub(b, &centroid)));

    let faces: Vec<Vec<usize>> = bounded.iter().map(|(_, fi)| cycles[*fi].clone()).collect();
    let chambers: Vec<RationalCone> = bounded.into_iter().map(|(c, _)| c).collect();
    let complex = ChamberComplex::with_parts(
        support.clone(),
        chambers,
        walls,
        Some(chart.functional.clone()),
    );
    Ok(Arrangement {
        chart,
        sites,
        vertices,
        edges,
        faces,
        support_polygon,
        complex,
    })
}

/// Chambers of the common refinement of all cones spanned by pairs of
/// distinct generator rays, clipped to `support`.
pub fn cross_section_arrangement(
    generator_rays: &[LatticeVector],
    support: &RationalCone,
) -> Result<ChamberComplex> {
    Ok(build_arrangement(generator_rays, support)?.complex)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(xs: &[i64]) -> LatticeVector {
        LatticeVector::from(xs)
    }

    fn collineation_rays(n: i64) -> Vec<LatticeVector> {
        let mut rays = vec![lv(&[0, 1, 0]), lv(&[0, 0, 1])];
        for k in 1..=n + 1 {
            let e1 = -(k - 1);
            let e2 = if k >= 2 { -(k - 2) } else { 0 };
            rays.push(lv(&[k, e1, e2]));
        }
        rays
    }

    #[test]
    fn octant_has_one_chamber() {
        let rays = vec![lv(&[1, 0, 0]), lv(&[0, 1, 0]), lv(&[0, 0, 1])];
        let support = RationalCone::from_generators(&rays).unwrap();
        let arr = build_arrangement(&rays, &support).unwrap();
        assert_eq!(arr.complex.len(), 1);
        assert_eq!(arr.euler_characteristic(), 1);
        assert_eq!(arr.complex.walls().len(), 3);
    }

    #[test]
    fn collineation_counts() {
        for (n, expected) in [(3, 9), (4, 14)] {
            let rays = collineation_rays(n);
            let support = RationalCone::from_generators(&rays).unwrap();
            let arr = build_arrangement(&rays, &support).unwrap();
            assert_eq!(arr.complex.len(), expected, "n = {n}");
            assert_eq!(arr.euler_characteristic(), 1);
            let total = arr.face_areas2().into_iter().fold(BigRational::zero(), |a, b| a + b);
            assert_eq!(total, arr.support_area2());
            arr.complex.validate().unwrap();
        }
    }

    #[test]
    fn input_order_does_not_matter() {
        let rays = collineation_rays(4);
        let support = RationalCone::from_generators(&rays).unwrap();
        let a = cross_section_arrangement(&rays, &support).unwrap();
        let mut rev = rays.clone();
        rev.reverse();
        let b = cross_section_arrangement(&rev, &support).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn degenerate_support_is_rejected() {
        let rays = vec![lv(&[1, 0, 0]), lv(&[0, 1, 0])];
        let support = RationalCone::from_generators(&rays).unwrap();
        assert!(matches!(
            cross_section_arrangement(&rays, &support),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn chart_round_trip() {
        let rays = collineation_rays(3);
        let support = RationalCone::from_generators(&rays).unwrap();
        let chart = Chart::for_support(&support).unwrap();
        for r in &rays {
            assert_eq!(chart.lift(&chart.project(r)), r.primitive());
        }
    }
}
