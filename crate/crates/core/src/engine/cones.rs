use crate::cone::{LatticeVector, RationalCone};
use crate::error::{Error, Result};
use crate::models::{ConeFixture, CoxPresentation, RelationStatus};
use crate::poly::SamplingOptions;

use super::git::{git_chamber, gkz_decomposition, orbit_cones};

fn check_fixture(what: &str, computed: RationalCone, fixture: Option<&ConeFixture>) -> Result<RationalCone> {
    if let Some(f) = fixture {
        let expected = RationalCone::from_generators(&f.rays)?;
        if expected != computed {
            return Err(Error::Integrity {
                what: what.to_string(),
                computed: computed.to_string(),
                fixture: expected.to_string(),
            });
        }
    }
    Ok(computed)
}

/// The cone spanned by all generator degrees.
pub fn effective_cone(model: &CoxPresentation) -> Result<RationalCone> {
    let eff = RationalCone::from_generators(&model.distinct_degrees())?;
    check_fixture("effective cone", eff, model.fixtures.eff.as_ref())
}

/// Intersection, over the generators, of the cone spanned by the degrees left
/// after removing one copy of that generator.
///
/// Removing a copy of a degree of multiplicity at least two leaves the degree
/// set unchanged, so only multiplicity-one degrees cut the cone down.
pub fn movable_cone(model: &CoxPresentation) -> Result<RationalCone> {
    let degrees = model.degrees_with_multiplicity();
    let mut acc = RationalCone::from_generators(&model.distinct_degrees())?;
    for (i, (_, mult)) in degrees.iter().enumerate() {
        if *mult > 1 {
            continue;
        }
        let rest: Vec<LatticeVector> = degrees
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, (d, _))| d.clone())
            .collect();
        let cone = if rest.is_empty() {
            RationalCone::zero(model.rank())
        } else {
            RationalCone::from_generators(&rest)?
        };
        acc = acc.intersect(&cone)?;
    }
    Ok(acc)
}

/// The nef cone: the GIT chamber of the ample class when the relations are
/// known, the GKZ chamber of the ample class when that decomposition is
/// recorded as the Mori one, otherwise the recorded fixture.
pub fn nef_cone(model: &CoxPresentation, sampling: &SamplingOptions) -> Result<RationalCone> {
    if let Some(w) = &model.ample {
        if model.status() != RelationStatus::RelationsUnknown {
            let omega = orbit_cones(model, sampling)?;
            let nef = git_chamber(model, &omega, w)?;
            return check_fixture("nef cone", nef, model.fixtures.nef.as_ref());
        }
        if model.fixtures.mcd_is_gkz.is_some() {
            let gkz = gkz_decomposition(model)?;
            if let [i] = gkz.locate_interior(w)[..] {
                let nef = gkz.chambers()[i].clone();
                return check_fixture("nef cone", nef, model.fixtures.nef.as_ref());
            }
        }
    }
    match &model.fixtures.nef {
        Some(f) => Ok(RationalCone::from_generators(&f.rays)?),
        None => Err(Error::Unsupported(format!(
            "nef cone of {}: relations unknown and no recorded nef cone",
            model.id
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{collineation_model, thmex_model, Generator, Thmex};

    fn rays(c: &RationalCone) -> Vec<Vec<i64>> {
        c.rays().iter().map(|r| r.to_i64s().unwrap()).collect()
    }

    #[test]
    fn collineation_cones() {
        let m = collineation_model(3, 3, 2).unwrap();
        let eff = effective_cone(&m).unwrap();
        let mut want = vec![vec![0, 1, 0], vec![0, 0, 1], vec![4, -3, -2]];
        want.sort();
        assert_eq!(rays(&eff), want);
        let mov = movable_cone(&m).unwrap();
        let mut want = vec![vec![1, 0, 0], vec![2, -1, 0], vec![3, -2, -1], vec![6, -3, -2]];
        want.sort();
        assert_eq!(rays(&mov), want);
        let nef = nef_cone(&m, &Default::default()).unwrap();
        let mut want = vec![vec![1, 0, 0], vec![2, -1, 0], vec![3, -2, -1]];
        want.sort();
        assert_eq!(rays(&nef), want);
    }

    #[test]
    fn thmex_z_cones() {
        let z = thmex_model(Thmex::Z);
        let eff = effective_cone(&z).unwrap();
        assert_eq!(eff, RationalCone::from_generators(&[[1, 0].into(), [0, 1].into()]).unwrap());
        assert_eq!(movable_cone(&z).unwrap(), eff);
        let nef = nef_cone(&z, &Default::default()).unwrap();
        assert_eq!(nef, RationalCone::from_generators(&[[1, 0].into(), [2, 1].into()]).unwrap());
    }

    #[test]
    fn single_generator() {
        let g = Generator { label: "T1".into(), degree: [1, 0].into(), multiplicity: 1 };
        let m = CoxPresentation::new("one", vec!["a".into(), "b".into()], vec![g], vec![], RelationStatus::Toric)
            .unwrap();
        assert_eq!(rays(&effective_cone(&m).unwrap()), vec![vec![1, 0]]);
        assert!(movable_cone(&m).unwrap().is_zero());
    }

    #[test]
    fn fixture_mismatch_is_an_integrity_error() {
        let mut m = collineation_model(3, 3, 2).unwrap();
        m.fixtures.eff.as_mut().unwrap().rays.pop();
        assert!(matches!(effective_cone(&m), Err(Error::Integrity { .. })));
    }
}
