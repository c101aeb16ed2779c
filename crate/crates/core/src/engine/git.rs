use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrangement::cross_section_arrangement;
use crate::complex::{sector_fan, ChamberComplex};
use crate::cone::{LatticeVector, RationalCone};
use crate::error::{Error, Result};
use crate::models::{CoxPresentation, Provenance, RelationStatus};
use crate::poly::{f_face_test, FaceMask, FaceTestMode, SamplingOptions};

use super::cones::effective_cone;

/// Largest variable count for which faces are enumerated.
pub const MAX_FACE_VARS: usize = 16;

fn cone_of(degrees: &[LatticeVector], rank: usize) -> Result<RationalCone> {
    if degrees.is_empty() {
        Ok(RationalCone::zero(rank))
    } else {
        RationalCone::from_generators(degrees)
    }
}

/// The orbit cones: images of the F-faces, deduplicated and sorted.
///
/// Faces are visited by increasing size; a face is only tested when the set of
/// distinct degrees on it has not already been realized by another face.
pub fn orbit_cones(model: &CoxPresentation, sampling: &SamplingOptions) -> Result<Vec<RationalCone>> {
    let rank = model.rank();
    let mut out: BTreeSet<RationalCone> = BTreeSet::new();
    match model.status() {
        RelationStatus::RelationsUnknown => {
            return Err(Error::Unsupported(format!(
                "orbit cones of {} need its relations, which are not recorded",
                model.id
            )))
        }
        RelationStatus::Toric => {
            let degs = model.distinct_degrees();
            if degs.len() > MAX_FACE_VARS {
                return Err(Error::Resource(format!(
                    "{} distinct degrees exceed the face enumeration limit {MAX_FACE_VARS}",
                    degs.len()
                )));
            }
            for bits in 0u32..1 << degs.len() {
                let sub: Vec<LatticeVector> =
                    (0..degs.len()).filter(|i| bits >> i & 1 == 1).map(|i| degs[i].clone()).collect();
                out.insert(cone_of(&sub, rank)?);
            }
        }
        RelationStatus::Explicit => {
            let n = model.nvars();
            if n > MAX_FACE_VARS {
                return Err(Error::Resource(format!(
                    "{n} variables exceed the face enumeration limit {MAX_FACE_VARS}"
                )));
            }
            let degs = model.variable_degrees();
            let distinct = model.distinct_degrees();
            let key = |bits: u32| -> Vec<usize> {
                let set: BTreeSet<usize> = (0..n)
                    .filter(|i| bits >> i & 1 == 1)
                    .map(|i| distinct.iter().position(|d| *d == degs[i]).expect("degree present"))
                    .collect();
                set.into_iter().collect()
            };
            let relations = model.relations();
            let mut realized: BTreeSet<Vec<usize>> = BTreeSet::new();
            for size in 0..=n as u32 {
                let candidates: Vec<u32> = (0u32..1 << n)
                    .filter(|b| b.count_ones() == size && !realized.contains(&key(*b)))
                    .collect();
                let verdicts = candidates
                    .par_iter()
                    .map(|&b| {
                        let mask = FaceMask::from_bits(n, b);
                        f_face_test(relations, &mask, FaceTestMode::Sampled, sampling).map(|o| (b, o.is_face))
                    })
                    .collect::<Result<Vec<_>>>()?;
                for (b, is_face) in verdicts {
                    if is_face && realized.insert(key(b)) {
                        let on: Vec<LatticeVector> =
                            (0..n).filter(|i| b >> i & 1 == 1).map(|i| degs[i].clone()).collect();
                        out.insert(cone_of(&on, rank)?);
                    }
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// `λ(w)`: the intersection of all orbit cones containing `w`.
pub fn git_chamber(model: &CoxPresentation, omega: &[RationalCone], w: &LatticeVector) -> Result<RationalCone> {
    let eff = effective_cone(model)?;
    if w.rank() != model.rank() {
        return Err(Error::RankMismatch { expected: model.rank(), found: w.rank() });
    }
    if !eff.contains(w) {
        return Err(Error::OutsideEffective(w.to_string()));
    }
    let mut acc = eff;
    for c in omega.iter().filter(|c| c.contains(w)) {
        acc = acc.intersect(c)?;
    }
    Ok(acc)
}

/// The chamber complex cut out by all cones spanned by generator degrees.
pub fn gkz_decomposition(model: &CoxPresentation) -> Result<ChamberComplex> {
    let degs = model.distinct_degrees();
    match model.rank() {
        2 => sector_fan(&degs),
        3 => cross_section_arrangement(&degs, &effective_cone(model)?),
        r => Err(Error::Unsupported(format!("chamber decompositions in rank {r}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvenanceNote {
    pub provenance: Provenance,
    pub method: String,
}

#[derive(Clone, Debug)]
pub struct MoriChambers {
    pub complex: ChamberComplex,
    pub note: ProvenanceNote,
}

/// Mori chambers: the distinct GIT chambers `λ(w)` at interior points of the
/// GKZ chambers. Models with unrecorded relations use the GKZ decomposition
/// when it is recorded to coincide with the Mori one.
pub fn mori_chamber_decomposition(model: &CoxPresentation, sampling: &SamplingOptions) -> Result<MoriChambers> {
    let gkz = gkz_decomposition(model)?;
    if model.status() == RelationStatus::RelationsUnknown {
        return match model.fixtures.mcd_is_gkz {
            Some(p) => Ok(MoriChambers {
                complex: gkz,
                note: ProvenanceNote { provenance: p, method: "gkz arrangement of the generator degrees".into() },
            }),
            None => Err(Error::Unsupported(format!(
                "Mori chambers of {}: relations unknown and GKZ not recorded as the Mori decomposition",
                model.id
            ))),
        };
    }
    let omega = orbit_cones(model, sampling)?;
    let mut chambers = Vec::with_capacity(gkz.len());
    for i in 0..gkz.len() {
        let w = gkz.representative(i);
        let lambda = git_chamber(model, &omega, &w)?;
        if !chambers.contains(&lambda) {
            chambers.push(lambda);
        }
    }
    let complex = ChamberComplex::from_chambers(effective_cone(model)?, chambers)?;
    Ok(MoriChambers {
        complex,
        note: ProvenanceNote { provenance: Provenance::Computed, method: "git chambers of gkz representatives".into() },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{collineation_model, thmex_model, Thmex};

    fn cone(v: &[[i64; 2]]) -> RationalCone {
        let v: Vec<LatticeVector> = v.iter().map(|x| (*x).into()).collect();
        RationalCone::from_generators(&v).unwrap()
    }

    #[test]
    fn toric_orbit_cones() {
        let z = thmex_model(Thmex::Z);
        let omega = orbit_cones(&z, &Default::default()).unwrap();
        // zero, four rays, six two-dimensional cones with only three distinct
        // full cones among the pairs: ⟨(1,0),(0,1)⟩ arises from several pairs.
        let zero = RationalCone::zero(2);
        assert!(omega.contains(&zero));
        assert_eq!(omega.len(), 11);
    }

    #[test]
    fn git_chambers_of_z() {
        let z = thmex_model(Thmex::Z);
        let omega = orbit_cones(&z, &Default::default()).unwrap();
        assert_eq!(git_chamber(&z, &omega, &[3, 1].into()).unwrap(), cone(&[[1, 0], [2, 1]]));
        assert_eq!(git_chamber(&z, &omega, &[1, 1].into()).unwrap(), cone(&[[2, 1], [1, 2]]));
        assert_eq!(git_chamber(&z, &omega, &[2, 1].into()).unwrap(), cone(&[[2, 1]]));
        assert!(matches!(git_chamber(&z, &omega, &[-1, 1].into()), Err(Error::OutsideEffective(_))));
    }

    #[test]
    fn explicit_models_contain_eff() {
        let x = thmex_model(Thmex::X);
        let omega = orbit_cones(&x, &Default::default()).unwrap();
        assert!(omega.contains(&effective_cone(&x).unwrap()));
        assert!(omega.contains(&RationalCone::zero(2)));
    }

    #[test]
    fn mori_chamber_counts() {
        let opts = SamplingOptions::default();
        let count = |m: &CoxPresentation| mori_chamber_decomposition(m, &opts).unwrap().complex.len();
        assert_eq!(count(&thmex_model(Thmex::Z)), 3);
        assert_eq!(count(&thmex_model(Thmex::X)), 3);
        assert_eq!(count(&thmex_model(Thmex::Y)), 2);
        assert_eq!(count(&collineation_model(3, 3, 2).unwrap()), 9);
        assert!(matches!(
            mori_chamber_decomposition(&collineation_model(3, 4, 2).unwrap(), &opts),
            Err(Error::Unsupported(_))
        ));
    }
}
