//! Cox ring presentations: graded generators, relations and known cones.
//!
//! Built-in families: intermediate spaces of complete collineations and of
//! complete quadrics (generated by minors and exceptional sections), and a
//! rank-two toric threefold family `Z ⊃ X ⊃ Y` cut out by explicit relations.

use std::collections::BTreeSet;

use num_integer::binomial;
use serde::{Deserialize, Serialize};

use crate::cone::{LatticeVector, MAX_AMBIENT_RANK};
use crate::error::{Error, Result};
use crate::poly::{parse_poly, Poly, PolyIdeal, Rational};

/// A homogeneous generator of the Cox ring, repeated `multiplicity` times.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub label: String,
    pub degree: LatticeVector,
    pub multiplicity: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationStatus {
    /// Polynomial ring: no relations.
    Toric,
    /// Relations listed explicitly.
    Explicit,
    /// Relations exist but are not recorded.
    RelationsUnknown,
}

/// Whether a stored value was computed here or is taken as known input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Computed,
    Asserted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeFixture {
    pub rays: Vec<LatticeVector>,
    pub provenance: Provenance,
}

/// Chambers adjacent along walls inside `cone(a, b)` share a stable base locus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeFixture {
    pub walls: Vec<[LatticeVector; 2]>,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixtures {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eff: Option<ConeFixture>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nef: Option<ConeFixture>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mov: Option<ConeFixture>,
    /// The Mori chamber decomposition coincides with the GKZ decomposition.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mcd_is_gkz: Option<Provenance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sbld_merge: Option<MergeFixture>,
}

/// A Cox ring presentation. Variables `T1, T2, …` enumerate the generators with
/// multiplicity, in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxPresentation {
    pub id: String,
    pub basis: Vec<String>,
    pub generators: Vec<Generator>,
    relations: Vec<Poly<Rational>>,
    status: RelationStatus,
    /// Each component is a set of variables; the irrelevant ideal is the
    /// intersection of the coordinate ideals they generate.
    pub irrelevant: Vec<Vec<usize>>,
    pub ample: Option<LatticeVector>,
    pub fixtures: Fixtures,
}

impl CoxPresentation {
    /// Validates and assembles a presentation.
    pub fn new(
        id: impl Into<String>,
        basis: Vec<String>,
        generators: Vec<Generator>,
        relations: Vec<Poly<Rational>>,
        status: RelationStatus,
    ) -> Result<Self> {
        let rank = basis.len();
        if rank == 0 || rank > MAX_AMBIENT_RANK {
            return Err(Error::UnsupportedRank(rank));
        }
        if generators.is_empty() {
            return Err(Error::Empty("model without generators"));
        }
        for g in &generators {
            if g.degree.rank() != rank {
                return Err(Error::DegreeLength {
                    label: g.label.clone(),
                    expected: rank,
                    found: g.degree.rank(),
                });
            }
            if g.multiplicity == 0 {
                return Err(Error::InvalidParameter(format!(
                    "generator {} has multiplicity 0",
                    g.label
                )));
            }
        }
        let status = match (relations.is_empty(), status) {
            (false, _) => RelationStatus::Explicit,
            (true, RelationStatus::Explicit) => RelationStatus::Toric,
            (true, s) => s,
        };
        let model = CoxPresentation {
            id: id.into(),
            basis,
            generators,
            relations,
            status,
            irrelevant: Vec::new(),
            ample: None,
            fixtures: Fixtures::default(),
        };
        if !model.relations.is_empty() {
            let n = model.nvars();
            if model.relations.iter().any(|f| f.nvars() != n) {
                return Err(Error::InvalidParameter(format!(
                    "relations must use the {n} generator variables"
                )));
            }
        }
        model.check_homogeneous()?;
        Ok(model)
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Number of Cox ring variables (generators counted with multiplicity).
    pub fn nvars(&self) -> usize {
        self.generators.iter().map(|g| g.multiplicity as usize).sum()
    }

    pub fn status(&self) -> RelationStatus {
        self.status
    }

    pub fn relations(&self) -> &[Poly<Rational>] {
        &self.relations
    }

    /// Degree of every variable, generators expanded by multiplicity.
    pub fn variable_degrees(&self) -> Vec<LatticeVector> {
        self.generators
            .iter()
            .flat_map(|g| std::iter::repeat_n(g.degree.clone(), g.multiplicity as usize))
            .collect()
    }

    /// Generator degrees with multiplicity, without expanding into a vector per variable.
    pub fn degrees_with_multiplicity(&self) -> Vec<(LatticeVector, u64)> {
        let mut out: Vec<(LatticeVector, u64)> = Vec::new();
        for g in &self.generators {
            match out.iter_mut().find(|(d, _)| *d == g.degree) {
                Some(slot) => slot.1 += g.multiplicity,
                None => out.push((g.degree.clone(), g.multiplicity)),
            }
        }
        out
    }

    pub fn distinct_degrees(&self) -> Vec<LatticeVector> {
        self.degrees_with_multiplicity().into_iter().map(|(d, _)| d).collect()
    }

    pub fn relation_ideal(&self) -> PolyIdeal {
        PolyIdeal::new(self.nvars(), self.relations.iter().cloned())
    }

    /// Coordinate ideals of the irrelevant components.
    pub fn irrelevant_components(&self) -> Vec<PolyIdeal> {
        self.irrelevant
            .iter()
            .map(|c| PolyIdeal::coordinate(self.nvars(), c))
            .collect()
    }

    /// Degree of a monomial given as an exponent vector over the variables.
    pub fn monomial_degree(&self, exponents: &[u32]) -> LatticeVector {
        let degs = self.variable_degrees();
        let mut acc = LatticeVector::zero(self.rank());
        for (d, &e) in degs.iter().zip(exponents) {
            if e > 0 {
                acc = &acc + &d.scale(&e.into());
            }
        }
        acc
    }

    fn check_homogeneous(&self) -> Result<()> {
        for (r, f) in self.relations.iter().enumerate() {
            let mut first: Option<LatticeVector> = None;
            for (m, _) in f.terms() {
                let d = self.monomial_degree(&m.0);
                match &first {
                    None => first = Some(d),
                    Some(a) if *a != d => {
                        return Err(Error::Homogeneity {
                            relation: r,
                            first: a.to_i64s().unwrap_or_default(),
                            second: d.to_i64s().unwrap_or_default(),
                        })
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// Degree of relation `r`.
    pub fn relation_degree(&self, r: usize) -> Option<LatticeVector> {
        let (m, _) = self.relations[r].terms().next()?;
        Some(self.monomial_degree(&m.0))
    }
}

/// `D_k = kH - Σ_{h<k, h≤b} (k-h) E_h` in the basis `H, E_1, …, E_b`.
pub fn minor_class(k: i64, b: usize) -> LatticeVector {
    let mut v = vec![k];
    for h in 1..=b as i64 {
        v.push(if h < k { -(k - h) } else { 0 });
    }
    LatticeVector::from(v)
}

fn blowup_basis(b: usize) -> Vec<String> {
    std::iter::once("H".to_string()).chain((1..=b).map(|j| format!("E{j}"))).collect()
}

fn blowup_model(
    id: String,
    n: usize,
    b: usize,
    mult: impl Fn(u64) -> u64,
    square: bool,
) -> Result<CoxPresentation> {
    let mut gens: Vec<Generator> = (1..=b)
        .map(|j| Generator {
            label: format!("E{j}"),
            degree: LatticeVector::unit(b + 1, j),
            multiplicity: 1,
        })
        .collect();
    for k in 1..=n as u64 + 1 {
        gens.push(Generator {
            label: format!("D{k}"),
            degree: minor_class(k as i64, b),
            multiplicity: mult(k),
        });
    }
    let mut model = CoxPresentation::new(id, blowup_basis(b), gens, Vec::new(), RelationStatus::RelationsUnknown)?;
    let top = minor_class(n as i64 + 1, b);
    let asserted = |rays: Vec<LatticeVector>| Some(ConeFixture { rays, provenance: Provenance::Asserted });
    model.fixtures.eff = asserted((1..=b).map(|j| LatticeVector::unit(b + 1, j)).chain([top]).collect());
    model.fixtures.nef = asserted((1..=b as i64 + 1).map(|k| minor_class(k, b)).collect());
    model.ample = Some((1..=b as i64 + 1).fold(LatticeVector::zero(b + 1), |acc, k| &acc + &minor_class(k, b)));
    if square && b == 2 {
        let ni = n as i64;
        let p_n = LatticeVector::from([ni * (ni - 1), ni * (2 - ni), (ni - 1) * (2 - ni)]);
        model.fixtures.mov = asserted(vec![minor_class(1, 2), minor_class(2, 2), minor_class(ni, 2), p_n]);
        model.fixtures.mcd_is_gkz = Some(Provenance::Asserted);
        model.fixtures.sbld_merge = Some(MergeFixture {
            walls: vec![[minor_class(2, 2), LatticeVector::unit(3, 2)]],
            provenance: Provenance::Asserted,
        });
    }
    Ok(model)
}

/// Intermediate space of complete collineations `P^n ⇢ P^m` after blowing up
/// the first `b` secant strata. No relations are stored.
pub fn collineation_model(n: usize, m: usize, b: usize) -> Result<CoxPresentation> {
    if n == 0 || n > m {
        return Err(Error::InvalidParameter(format!("need 1 ≤ n ≤ m, got n={n}, m={m}")));
    }
    let b_max = if n == m { n - 1 } else { n };
    if b == 0 || b > b_max {
        return Err(Error::InvalidParameter(format!("blow-up steps b={b} outside 1..={b_max}")));
    }
    if b + 1 > MAX_AMBIENT_RANK {
        return Err(Error::UnsupportedRank(b + 1));
    }
    let (n1, m1) = (n as u64 + 1, m as u64 + 1);
    blowup_model(
        format!("X:{n}:{m}:{b}"),
        n,
        b,
        |k| binomial(n1, k) * binomial(m1, k),
        n == m,
    )
}

/// Intermediate space of complete quadrics in `P^n` after `b` blow-ups; the
/// minors of a symmetric matrix are counted up to transposition.
pub fn quadric_model(n: usize, b: usize) -> Result<CoxPresentation> {
    if n == 0 || b == 0 || b > n.saturating_sub(1) {
        return Err(Error::InvalidParameter(format!(
            "need n ≥ 2 and 1 ≤ b ≤ n-1, got n={n}, b={b}"
        )));
    }
    if b + 1 > MAX_AMBIENT_RANK {
        return Err(Error::UnsupportedRank(b + 1));
    }
    let n1 = n as u64 + 1;
    blowup_model(
        format!("Q:{n}:{b}"),
        n,
        b,
        |k| {
            let c = binomial(n1, k);
            (c * c + c) / 2
        },
        true,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Thmex {
    Z,
    X,
    Y,
}

pub const THMEX_F: &str = "T3*T8 + T4*T9 + T1*T7";
pub const THMEX_G: &str = "T5*T9 + T6*T11 + T2*T7";
pub const THMEX_H: &str = "T7 + T1*T11^2 + T2*T8*T11 + T2*T10^2 + T2*T8*T9";

/// The rank-two family: a toric `Z` with eleven Cox coordinates, `X ⊂ Z` cut out
/// by two bilinear relations, and `Y ⊂ X` by one more.
pub fn thmex_model(which: Thmex) -> CoxPresentation {
    let degrees: [[i64; 2]; 11] =
        [[1, 0], [1, 0], [2, 1], [2, 1], [2, 1], [2, 1], [1, 2], [0, 1], [0, 1], [0, 1], [0, 1]];
    let gens = degrees
        .iter()
        .enumerate()
        .map(|(i, d)| Generator { label: format!("T{}", i + 1), degree: (*d).into(), multiplicity: 1 })
        .collect();
    let rels: &[&str] = match which {
        Thmex::Z => &[],
        Thmex::X => &[THMEX_F, THMEX_G],
        Thmex::Y => &[THMEX_F, THMEX_G, THMEX_H],
    };
    let relations = rels.iter().map(|s| parse_poly(s, 11).expect("built-in relation")).collect();
    let id = format!("thmex:{which:?}");
    let basis = vec!["w1".to_string(), "w8".to_string()];
    let mut model = CoxPresentation::new(id, basis, gens, relations, RelationStatus::Toric)
        .expect("built-in model is well formed");
    model.irrelevant = vec![vec![0, 1], (2..11).collect()];
    model.ample = Some([3, 1].into());
    model
}

/// Resolves a built-in name: `X n m b`, `Q n b` or `thmex Z|X|Y`, with
/// whitespace or `:` as separators.
pub fn builtin(name: &str) -> Result<CoxPresentation> {
    let parts: Vec<&str> = name.split(|c: char| c == ':' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
    let unknown = || Error::UnknownModel(name.to_string());
    let num = |s: &str| s.parse::<usize>().map_err(|_| unknown());
    match parts.as_slice() {
        ["X", n, m, b] => collineation_model(num(n)?, num(m)?, num(b)?),
        ["Q", n, b] => quadric_model(num(n)?, num(b)?),
        ["thmex", w] => match *w {
            "Z" => Ok(thmex_model(Thmex::Z)),
            "X" => Ok(thmex_model(Thmex::X)),
            "Y" => Ok(thmex_model(Thmex::Y)),
            _ => Err(unknown()),
        },
        _ => Err(unknown()),
    }
}

/// The on-disk form of a presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDocument {
    #[serde(default)]
    pub id: String,
    pub rank: usize,
    pub basis: Vec<String>,
    pub generators: Vec<Generator>,
    #[serde(default)]
    pub relations: Vec<String>,
    #[serde(default = "default_status")]
    pub relation_status: RelationStatus,
    #[serde(default)]
    pub irrelevant: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ample: Option<LatticeVector>,
    #[serde(default)]
    pub fixtures: Fixtures,
}

fn default_status() -> RelationStatus {
    RelationStatus::Toric
}

fn parse_var(name: &str, nvars: usize) -> Result<usize> {
    name.strip_prefix('T')
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&i| i >= 1 && i <= nvars)
        .map(|i| i - 1)
        .ok_or_else(|| Error::InvalidParameter(format!("unknown variable {name} (expected T1..T{nvars})")))
}

impl CoxPresentation {
    pub fn to_document(&self) -> ModelDocument {
        let mut irrelevant: Vec<Vec<usize>> = self
            .irrelevant
            .iter()
            .map(|c| c.iter().copied().collect::<BTreeSet<_>>().into_iter().collect())
            .collect();
        irrelevant.sort();
        ModelDocument {
            id: self.id.clone(),
            rank: self.rank(),
            basis: self.basis.clone(),
            generators: self.generators.clone(),
            relations: self.relations.iter().map(|f| f.to_string()).collect(),
            relation_status: self.status,
            irrelevant: irrelevant
                .into_iter()
                .map(|c| c.into_iter().map(|i| format!("T{}", i + 1)).collect())
                .collect(),
            ample: self.ample.clone(),
            fixtures: self.fixtures.clone(),
        }
    }

    pub fn from_document(doc: ModelDocument) -> Result<Self> {
        if doc.rank != doc.basis.len() {
            return Err(Error::InvalidParameter(format!(
                "rank {} but {} basis labels",
                doc.rank,
                doc.basis.len()
            )));
        }
        let nvars: usize = doc.generators.iter().map(|g| g.multiplicity as usize).sum();
        let relations = doc
            .relations
            .iter()
            .map(|s| parse_poly(s, nvars))
            .collect::<Result<Vec<_>>>()?;
        let mut model = CoxPresentation::new(doc.id, doc.basis, doc.generators, relations, doc.relation_status)?;
        model.irrelevant = doc
            .irrelevant
            .iter()
            .map(|c| c.iter().map(|v| parse_var(v, nvars)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let rank = model.rank();
        let check = |label: &str, v: &LatticeVector| {
            if v.rank() == rank {
                Ok(())
            } else {
                Err(Error::DegreeLength { label: label.to_string(), expected: rank, found: v.rank() })
            }
        };
        if let Some(a) = &doc.ample {
            check("ample", a)?;
        }
        let f = &doc.fixtures;
        for (name, c) in [("eff", &f.eff), ("nef", &f.nef), ("mov", &f.mov)] {
            for r in c.iter().flat_map(|c| &c.rays) {
                check(name, r)?;
            }
        }
        for w in f.sbld_merge.iter().flat_map(|m| &m.walls) {
            check("sbld_merge", &w[0])?;
            check("sbld_merge", &w[1])?;
        }
        model.ample = doc.ample;
        model.fixtures = doc.fixtures;
        Ok(model)
    }
}

/// Parses a JSON model document.
pub fn load_model(json: &str) -> Result<CoxPresentation> {
    CoxPresentation::from_document(serde_json::from_str(json)?)
}

/// Canonical pretty-printed JSON.
pub fn save_model(model: &CoxPresentation) -> String {
    serde_json::to_string_pretty(&model.to_document()).expect("model documents serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(x: &[i64]) -> LatticeVector {
        LatticeVector::from(x)
    }

    #[test]
    fn collineation_degrees_and_multiplicities() {
        let m = collineation_model(3, 3, 2).unwrap();
        let got: Vec<(LatticeVector, u64)> = m.degrees_with_multiplicity();
        let want = vec![
            (lv(&[0, 1, 0]), 1),
            (lv(&[0, 0, 1]), 1),
            (lv(&[1, 0, 0]), 16),
            (lv(&[2, -1, 0]), 36),
            (lv(&[3, -2, -1]), 16),
            (lv(&[4, -3, -2]), 1),
        ];
        assert_eq!(got, want);
        assert_eq!(m.nvars(), 71);
        assert_eq!(m.status(), RelationStatus::RelationsUnknown);
        assert_eq!(minor_class(5, 2), lv(&[5, -4, -3]));
    }

    #[test]
    fn quadric_multiplicities() {
        let q = quadric_model(3, 2).unwrap();
        let mult: Vec<u64> = q.generators.iter().map(|g| g.multiplicity).collect();
        assert_eq!(mult, vec![1, 1, 10, 21, 10, 1]);
        assert_eq!(q.distinct_degrees(), collineation_model(3, 3, 2).unwrap().distinct_degrees());
        let q2 = quadric_model(2, 1).unwrap();
        let got = q2.degrees_with_multiplicity();
        assert_eq!(got, vec![(lv(&[0, 1]), 1), (lv(&[1, 0]), 6), (lv(&[2, -1]), 6), (lv(&[3, -2]), 1)]);
    }

    #[test]
    fn parameter_ranges() {
        assert!(collineation_model(3, 3, 3).is_err());
        assert!(collineation_model(3, 4, 3).is_ok());
        assert!(collineation_model(4, 3, 1).is_err());
        assert!(collineation_model(3, 3, 0).is_err());
        assert!(quadric_model(1, 1).is_err());
        assert!(matches!(collineation_model(6, 6, 4), Err(Error::UnsupportedRank(5))));
    }

    #[test]
    fn thmex_relations_are_homogeneous() {
        let x = thmex_model(Thmex::X);
        assert_eq!(x.relation_degree(0), Some(lv(&[2, 2])));
        assert_eq!(x.relation_degree(1), Some(lv(&[2, 2])));
        let y = thmex_model(Thmex::Y);
        assert_eq!(y.relation_degree(2), Some(lv(&[1, 2])));
        assert_eq!(thmex_model(Thmex::Z).status(), RelationStatus::Toric);
        assert_eq!(y.status(), RelationStatus::Explicit);
    }

    #[test]
    fn document_round_trip() {
        for m in [thmex_model(Thmex::Z), thmex_model(Thmex::Y), collineation_model(3, 3, 2).unwrap()] {
            let s = save_model(&m);
            let back = load_model(&s).unwrap();
            assert_eq!(back, m);
            assert_eq!(save_model(&back), s);
        }
    }

    #[test]
    fn load_rejects_bad_documents() {
        let mut doc = thmex_model(Thmex::X).to_document();
        doc.relations.push("T1*T2 + T8".into());
        assert!(matches!(CoxPresentation::from_document(doc), Err(Error::Homogeneity { relation: 2, .. })));

        let mut doc = thmex_model(Thmex::X).to_document();
        doc.relations[0] = "T3*T8 +".into();
        assert!(matches!(CoxPresentation::from_document(doc), Err(Error::PolyParse { .. })));

        let mut doc = thmex_model(Thmex::Z).to_document();
        doc.generators[4].degree = lv(&[2, 1, 0]);
        assert!(matches!(CoxPresentation::from_document(doc), Err(Error::DegreeLength { .. })));

        assert!(matches!(load_model("{"), Err(Error::Json(_))));
    }

    #[test]
    fn loads_relation_f() {
        let m = load_model(&save_model(&thmex_model(Thmex::X))).unwrap();
        assert_eq!(m.relations()[0], parse_poly(THMEX_F, 11).unwrap());
    }

    #[test]
    fn builtin_names() {
        assert_eq!(builtin("X 3 3 2").unwrap().id, "X:3:3:2");
        assert_eq!(builtin("Q:3:2").unwrap().id, "Q:3:2");
        assert_eq!(builtin("thmex:Y").unwrap().relations().len(), 3);
        assert!(matches!(builtin("W 1"), Err(Error::UnknownModel(_))));
    }
}
