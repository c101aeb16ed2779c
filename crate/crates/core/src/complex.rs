//! Chamber complexes: finite fan-like subdivisions of a support cone, and
//! coarsenings of them into unions of chambers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::cone::{LatticeVector, Position, RationalCone};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum WallSides {
    Interior(usize, usize),
    Boundary(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Wall {
    pub cone: RationalCone,
    pub sides: WallSides,
}

/// Maximal chambers of a subdivision of `support`, with their walls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberComplex {
    support: RationalCone,
    chambers: Vec<RationalCone>,
    walls: Vec<Wall>,
    chart: Option<LatticeVector>,
}

impl ChamberComplex {
    /// Builds a complex from its maximal chambers; walls are recomputed and
    /// chambers put in canonical order.
    pub fn from_chambers(support: RationalCone, mut chambers: Vec<RationalCone>) -> Result<Self> {
        let d = support.ambient_rank();
        for c in &chambers {
            if c.ambient_rank() != d {
                return Err(Error::RankMismatch { expected: d, found: c.ambient_rank() });
            }
        }
        chambers.sort_by(|a, b| a.rays().cmp(b.rays()));
        chambers.dedup();
        let walls = compute_walls(&support, &chambers)?;
        Ok(ChamberComplex { support, chambers, walls, chart: None })
    }

    pub(crate) fn with_parts(
        support: RationalCone,
        chambers: Vec<RationalCone>,
        walls: Vec<Wall>,
        chart: Option<LatticeVector>,
    ) -> Self {
        ChamberComplex { support, chambers, walls, chart }
    }

    pub fn support(&self) -> &RationalCone {
        &self.support
    }

    pub fn chambers(&self) -> &[RationalCone] {
        &self.chambers
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    pub fn len(&self) -> usize {
        self.chambers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chambers.is_empty()
    }

    /// Linear form defining the affine cross-section chart, when one was used.
    pub fn chart(&self) -> Option<&LatticeVector> {
        self.chart.as_ref()
    }

    /// Deterministic lattice point in the interior of chamber `i`.
    ///
    /// With a chart this is the sum of the chamber's cross-section vertices,
    /// cleared to integers; otherwise the sum of its primitive rays.
    pub fn representative(&self, i: usize) -> LatticeVector {
        let c = &self.chambers[i];
        match &self.chart {
            Some(u) => {
                let d = c.ambient_rank();
                let mut acc = vec![BigRational::zero(); d];
                for r in c.rays() {
                    let s = BigRational::from_integer(u.dot(r));
                    for (a, x) in acc.iter_mut().zip(r.coords()) {
                        *a = &*a + BigRational::from_integer(x.clone()) / &s;
                    }
                }
                LatticeVector::from_rational(&acc)
            }
            None => c.interior_point(),
        }
    }

    /// Chambers whose relative interior contains `v`.
    pub fn locate_interior(&self, v: &LatticeVector) -> Vec<usize> {
        (0..self.chambers.len())
            .filter(|&i| self.chambers[i].position(v) == Position::Interior)
            .collect()
    }

    /// Chambers containing `v` (closed).
    pub fn locate(&self, v: &LatticeVector) -> Vec<usize> {
        (0..self.chambers.len())
            .filter(|&i| self.chambers[i].contains(v))
            .collect()
    }

    /// Index of the chamber containing the cone `c`, if exactly one does.
    pub fn chamber_containing(&self, c: &RationalCone) -> Option<usize> {
        let hits: Vec<usize> = (0..self.chambers.len())
            .filter(|&i| self.chambers[i].contains_cone(c))
            .collect();
        (hits.len() == 1).then(|| hits[0])
    }

    /// Every chamber of `self` lies inside a chamber of `coarser`.
    pub fn refines(&self, coarser: &ChamberComplex) -> bool {
        self.chambers
            .iter()
            .all(|c| coarser.chamber_containing(c).is_some())
    }

    /// Applies an integer matrix (given by rows) to every cone.
    pub fn image(&self, rows: &[LatticeVector]) -> Result<ChamberComplex> {
        let support = self.support.image(rows)?;
        let chambers = self
            .chambers
            .iter()
            .map(|c| c.image(rows))
            .collect::<Result<Vec<_>>>()?;
        ChamberComplex::from_chambers(support, chambers)
    }

    /// Checks the structural invariants: chambers are full-dimensional in the
    /// support and have pairwise disjoint interiors, every wall is a codimension
    /// one face of the chambers it lists, and there are no gaps.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let dim = self.support.dim();
        for (i, c) in self.chambers.iter().enumerate() {
            if c.dim() != dim {
                return Err(format!("chamber {i} has dimension {} in a support of dimension {dim}", c.dim()));
            }
            if !self.support.contains_cone(c) {
                return Err(format!("chamber {i} leaves the support"));
            }
        }
        for i in 0..self.chambers.len() {
            for j in i + 1..self.chambers.len() {
                let m = self.chambers[i]
                    .intersect(&self.chambers[j])
                    .map_err(|e| e.to_string())?;
                if m.dim() == dim {
                    return Err(format!("chambers {i} and {j} overlap"));
                }
            }
        }
        for (k, w) in self.walls.iter().enumerate() {
            if w.cone.dim() + 1 != dim {
                return Err(format!("wall {k} is not of codimension one"));
            }
            let sides = match w.sides {
                WallSides::Interior(a, b) => vec![a, b],
                WallSides::Boundary(a) => vec![a],
            };
            for s in sides {
                let c = &self.chambers[s];
                let on_facet = c.facets().iter().any(|f| {
                    w.cone.generators().iter().all(|g| f.dot(g).is_zero())
                }) && c.contains_cone(&w.cone);
                if !on_facet {
                    return Err(format!("wall {k} is not on a facet of chamber {s}"));
                }
            }
        }
        self.check_no_gaps()
    }

    /// Steps off every chamber facet that is not on the support boundary and
    /// checks the stepped point is covered by some chamber.
    fn check_no_gaps(&self) -> std::result::Result<(), String> {
        let dim = self.support.dim();
        if self.chambers.is_empty() {
            return if dim == 0 { Ok(()) } else { Err("no chambers".into()) };
        }
        let mut hyperplanes: Vec<LatticeVector> = self.support.facets().to_vec();
        for c in &self.chambers {
            hyperplanes.extend(c.facets().iter().cloned());
        }
        for (ci, c) in self.chambers.iter().enumerate() {
            for f in c.facets() {
                let face = c
                    .intersect(&RationalCone::from_inequalities(
                        c.ambient_rank(),
                        &[],
                        &[f.clone()],
                    )
                    .map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
                let p = face.interior_point();
                if self
                    .support
                    .facets()
                    .iter()
                    .any(|s| face.generators().iter().all(|g| s.dot(g).is_zero()))
                {
                    continue;
                }
                // Outward step q = N p - f, with N large enough to stay clear
                // of every hyperplane not through p.
                let mut n = BigInt::from(2);
                for h in &hyperplanes {
                    let hp = h.dot(&p);
                    if hp.is_zero() {
                        continue;
                    }
                    let hf = h.dot(f).abs();
                    let need = (&hf * BigInt::from(2)) / hp.abs() + BigInt::from(2);
                    if need > n {
                        n = need;
                    }
                }
                let q = &p.scale(&n) - f;
                if self.locate(&q).is_empty() {
                    return Err(format!("gap next to a facet of chamber {ci} near {q}"));
                }
            }
        }
        Ok(())
    }
}

fn compute_walls(support: &RationalCone, chambers: &[RationalCone]) -> Result<Vec<Wall>> {
    let dim = support.dim();
    let mut walls = Vec::new();
    for i in 0..chambers.len() {
        for j in i + 1..chambers.len() {
            let m = chambers[i].intersect(&chambers[j])?;
            if dim > 0 && m.dim() + 1 == dim {
                walls.push(Wall { cone: m, sides: WallSides::Interior(i, j) });
            }
        }
    }
    for (i, c) in chambers.iter().enumerate() {
        for f in c.facets() {
            let face = c.intersect(&RationalCone::from_inequalities(
                c.ambient_rank(),
                &[],
                &[f.clone()],
            )?)?;
            let on_boundary = support
                .facets()
                .iter()
                .any(|s| face.generators().iter().all(|g| s.dot(g).is_zero()));
            if on_boundary {
                walls.push(Wall { cone: face, sides: WallSides::Boundary(i) });
            }
        }
    }
    Ok(walls)
}

/// Sign of the 2×2 determinant `det[a b]`.
fn cross2(a: &LatticeVector, b: &LatticeVector) -> BigInt {
    let (a, b) = (a.coords(), b.coords());
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Rank-two chamber complex: the sectors between consecutive distinct rays,
/// ordered counterclockwise starting from the clockwise-most ray.
pub fn sector_fan(vectors: &[LatticeVector]) -> Result<ChamberComplex> {
    let support = RationalCone::from_generators(vectors)?;
    if support.ambient_rank() != 2 {
        return Err(Error::RankMismatch { expected: 2, found: support.ambient_rank() });
    }
    if !support.is_pointed() {
        return Err(Error::NotPointed(format!("the vectors span {support}")));
    }
    let mut rays: Vec<LatticeVector> = vectors.iter().map(|v| v.primitive()).collect();
    rays.sort();
    rays.dedup();
    rays.sort_by(|a, b| {
        let c = cross2(a, b);
        if c.is_positive() {
            std::cmp::Ordering::Less
        } else if c.is_negative() {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Equal
        }
    });
    let mut chambers = Vec::new();
    let mut walls = Vec::new();
    for (i, pair) in rays.windows(2).enumerate() {
        chambers.push(RationalCone::from_generators(pair)?);
        if i > 0 {
            walls.push(Wall {
                cone: RationalCone::from_generators(&pair[..1])?,
                sides: WallSides::Interior(i - 1, i),
            });
        }
    }
    if !chambers.is_empty() {
        walls.insert(
            0,
            Wall {
                cone: RationalCone::from_generators(&rays[..1])?,
                sides: WallSides::Boundary(0),
            },
        );
        walls.push(Wall {
            cone: RationalCone::from_generators(&rays[rays.len() - 1..])?,
            sides: WallSides::Boundary(chambers.len() - 1),
        });
    }
    Ok(ChamberComplex::with_parts(support, chambers, walls, None))
}

/// A coarsening of a chamber complex: chambers grouped into classes, each
/// class being one (possibly non-convex) region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub complex: ChamberComplex,
    pub classes: Vec<Vec<usize>>,
}

impl Decomposition {
    /// Every chamber in its own class.
    pub fn discrete(complex: ChamberComplex) -> Self {
        let classes = (0..complex.len()).map(|i| vec![i]).collect();
        Decomposition { complex, classes }
    }

    /// Groups chambers by a union-find style list of merged pairs.
    pub fn merged(complex: ChamberComplex, pairs: &[(usize, usize)]) -> Self {
        let n = complex.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &(a, b) in pairs {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut root_to_class = std::collections::BTreeMap::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            let k = *root_to_class.entry(r).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[k].push(i);
        }
        Decomposition { complex, classes }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, chamber: usize) -> usize {
        self.classes
            .iter()
            .position(|c| c.contains(&chamber))
            .expect("every chamber belongs to a class")
    }

    pub fn image(&self, rows: &[LatticeVector]) -> Result<Decomposition> {
        let img = self.complex.image(rows)?;
        // from_chambers reorders; map classes through the new order.
        let mut classes = Vec::new();
        for class in &self.classes {
            let mut mapped = Vec::new();
            for &i in class {
                let c = self.complex.chambers()[i].image(rows)?;
                let j = img
                    .chambers()
                    .iter()
                    .position(|x| *x == c)
                    .expect("image chamber present");
                mapped.push(j);
            }
            mapped.sort();
            classes.push(mapped);
        }
        Ok(Decomposition { complex: img, classes })
    }

    /// Full-dimensional cells of the common refinement with another decomposition,
    /// as (class here, class there) pairs.
    fn overlay(&self, other: &Decomposition) -> Result<Vec<(usize, usize)>> {
        let dim = self.complex.support().dim();
        let mut cells = Vec::new();
        for (i, a) in self.complex.chambers().iter().enumerate() {
            for (j, b) in other.complex.chambers().iter().enumerate() {
                if a.intersect(b)?.dim() == dim {
                    cells.push((self.class_of(i), other.class_of(j)));
                }
            }
        }
        cells.sort();
        cells.dedup();
        Ok(cells)
    }

    /// Same support and the same regions, compared through the common refinement.
    pub fn equivalent(&self, other: &Decomposition) -> Result<bool> {
        if self.complex.support() != other.complex.support() {
            return Ok(false);
        }
        let cells = self.overlay(other)?;
        let mut fwd = std::collections::BTreeMap::new();
        let mut bwd = std::collections::BTreeMap::new();
        for &(a, b) in &cells {
            if *fwd.entry(a).or_insert(b) != b || *bwd.entry(b).or_insert(a) != a {
                return Ok(false);
            }
        }
        Ok(fwd.len() == self.len() && bwd.len() == other.len())
    }

    /// Each class of `self` sits inside a single class of `coarser`.
    pub fn refines(&self, coarser: &Decomposition) -> Result<bool> {
        if self.complex.support() != coarser.complex.support() {
            return Ok(false);
        }
        let cells = self.overlay(coarser)?;
        let mut fwd = std::collections::BTreeMap::new();
        for &(a, b) in &cells {
            if *fwd.entry(a).or_insert(b) != b {
                return Ok(false);
            }
        }
        Ok(fwd.len() == self.len())
    }
}
