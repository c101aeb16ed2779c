use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::complex::{ChamberComplex, WallSides};
use crate::cone::{LatticeVector, RationalCone};
use crate::error::Result;
use crate::models::{save_model, CoxPresentation, Provenance};
use crate::poly::SamplingOptions;

use super::cones::{effective_cone, movable_cone, nef_cone};
use super::git::{gkz_decomposition, mori_chamber_decomposition};
use super::sbl::{sbld_from, StableBaseLocus, DEFAULT_K_MAX};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportOptions {
    pub cones: bool,
    pub mcd: bool,
    pub sbld: bool,
    pub seed: u64,
    pub k_max: u32,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { cones: true, mcd: true, sbld: false, seed: 0, k_max: DEFAULT_K_MAX }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeEntry {
    pub rays: Vec<LatticeVector>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lineality: Vec<LatticeVector>,
}

impl From<&RationalCone> for ConeEntry {
    fn from(c: &RationalCone) -> Self {
        ConeEntry { rays: c.rays().to_vec(), lineality: c.lineality().to_vec() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cones {
    pub eff: ConeEntry,
    pub mov: ConeEntry,
    pub nef: ConeEntry,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexEntry {
    pub chambers: Vec<ConeEntry>,
    /// Interior walls as pairs of chamber indices.
    pub adjacency: Vec<(usize, usize)>,
}

impl From<&ChamberComplex> for ComplexEntry {
    fn from(c: &ChamberComplex) -> Self {
        let mut adjacency: Vec<(usize, usize)> = c
            .walls()
            .iter()
            .filter_map(|w| match w.sides {
                WallSides::Interior(i, j) => Some((i.min(j), i.max(j))),
                WallSides::Boundary(_) => None,
            })
            .collect();
        adjacency.sort();
        adjacency.dedup();
        ComplexEntry { chambers: c.chambers().iter().map(ConeEntry::from).collect(), adjacency }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoriEntry {
    #[serde(flatten)]
    pub complex: ComplexEntry,
    pub provenance: Provenance,
    pub method: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocusEntry {
    pub class: LatticeVector,
    /// Minimal sets of generator labels carrying a section of a multiple of the class.
    pub supports: Vec<Vec<String>>,
    /// Reduced basis of the saturated ideal.
    pub ideal: Vec<String>,
    pub empty: bool,
    pub stabilized: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionEntry {
    /// Indices into the Mori chambers.
    pub chambers: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub locus: Option<LocusEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SbldEntry {
    pub regions: Vec<RegionEntry>,
    pub provenance: Provenance,
    pub method: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gkz: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mcd: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sbld: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub model: String,
    /// SHA-256 of the canonical model JSON.
    pub model_hash: String,
    pub version: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cones: Option<Cones>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gkz: Option<ComplexEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mcd: Option<MoriEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sbld: Option<SbldEntry>,
    pub counts: Counts,
}

impl DecompositionReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

pub fn model_hash(model: &CoxPresentation) -> String {
    Sha256::digest(save_model(model).as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

fn locus_entry(model: &CoxPresentation, locus: &StableBaseLocus) -> Result<LocusEntry> {
    let distinct = &model.distinct_degrees();
    let supports = locus
        .supports
        .iter()
        .map(|set| {
            set.iter()
                .flat_map(|&j| model.generators.iter().filter(move |g| g.degree == distinct[j]))
                .map(|g| g.label.clone())
                .collect()
        })
        .collect();
    Ok(LocusEntry {
        class: locus.class.clone(),
        supports,
        ideal: locus.ideal.basis()?.iter().map(|g| g.to_string()).collect(),
        empty: locus.is_empty()?,
        stabilized: locus.stabilized,
    })
}

pub fn decomposition_report(model: &CoxPresentation, opts: &ReportOptions) -> Result<DecompositionReport> {
    let sampling = SamplingOptions { seed: opts.seed, ..SamplingOptions::default() };
    let mut report = DecompositionReport {
        model: model.id.clone(),
        model_hash: model_hash(model),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: opts.seed,
        cones: None,
        gkz: None,
        mcd: None,
        sbld: None,
        counts: Counts::default(),
    };
    if opts.cones {
        report.cones = Some(Cones {
            eff: (&effective_cone(model)?).into(),
            mov: (&movable_cone(model)?).into(),
            nef: (&nef_cone(model, &sampling)?).into(),
        });
    }
    if opts.mcd || opts.sbld {
        let gkz = gkz_decomposition(model)?;
        report.counts.gkz = Some(gkz.len());
        report.gkz = Some((&gkz).into());
        let mcd = mori_chamber_decomposition(model, &sampling)?;
        report.counts.mcd = Some(mcd.complex.len());
        report.mcd = Some(MoriEntry {
            complex: (&mcd.complex).into(),
            provenance: mcd.note.provenance,
            method: mcd.note.method.clone(),
        });
        if opts.sbld {
            let s = sbld_from(model, mcd, opts.k_max)?;
            let regions = s
                .decomposition
                .classes
                .iter()
                .map(|class| {
                    let locus = match &s.loci[class[0]] {
                        Some(l) => Some(locus_entry(model, l)?),
                        None => None,
                    };
                    Ok(RegionEntry { chambers: class.clone(), locus })
                })
                .collect::<Result<Vec<_>>>()?;
            report.counts.sbld = Some(s.len());
            report.sbld = Some(SbldEntry { regions, provenance: s.note.provenance, method: s.note.method });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{collineation_model, thmex_model, Thmex};

    #[test]
    fn thmex_x_counts() {
        let opts = ReportOptions { sbld: true, ..ReportOptions::default() };
        let r = decomposition_report(&thmex_model(Thmex::X), &opts).unwrap();
        assert_eq!(r.counts.mcd, Some(3));
        assert_eq!(r.counts.sbld, Some(2));
        let regions = &r.sbld.as_ref().unwrap().regions;
        assert!(regions.iter().any(|g| g.locus.as_ref().unwrap().empty));
    }

    #[test]
    fn json_round_trip_and_hash() {
        let m = collineation_model(3, 3, 2).unwrap();
        let r = decomposition_report(&m, &ReportOptions::default()).unwrap();
        let back: DecompositionReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(r.model_hash.len(), 64);
        assert_eq!(r.mcd.unwrap().provenance, Provenance::Asserted);
    }
}
