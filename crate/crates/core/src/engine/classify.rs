use serde::{Deserialize, Serialize};

use crate::cone::{LatticeVector, RationalCone};
use crate::error::{Error, Result};
use crate::linalg;
use crate::models::CoxPresentation;
use crate::poly::SamplingOptions;

use super::cones::{effective_cone, movable_cone, nef_cone};
use super::git::{mori_chamber_decomposition, MoriChambers};
use super::sbl::{sbld_from, StableBaseLocusDecomposition};

/// The cones and decompositions compared between two models.
#[derive(Clone, Debug)]
pub struct Invariants {
    pub eff: RationalCone,
    pub mov: RationalCone,
    pub nef: RationalCone,
    pub mcd: MoriChambers,
    pub sbld: StableBaseLocusDecomposition,
}

pub fn invariants(model: &CoxPresentation, sampling: &SamplingOptions, k_max: u32) -> Result<Invariants> {
    let mcd = mori_chamber_decomposition(model, sampling)?;
    let sbld = sbld_from(model, mcd.clone(), k_max)?;
    Ok(Invariants {
        eff: effective_cone(model)?,
        mov: movable_cone(model)?,
        nef: nef_cone(model, sampling)?,
        mcd,
        sbld,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationFlags {
    /// Eff, Mov and Nef agree under pullback.
    pub lefschetz_divisorial: bool,
    /// Additionally the stable base locus decompositions agree.
    pub strong_lefschetz: bool,
    /// Lefschetz and the Mori chamber decompositions agree.
    pub twins: bool,
    pub strong_twins: bool,
}

/// The first object that differs under pullback.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub object: String,
    pub left: String,
    pub pulled_back: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairClassification {
    pub left: String,
    pub right: String,
    pub flags: ClassificationFlags,
    /// Every failing object, in the order eff, mov, nef, mcd, sbld.
    pub witnesses: Vec<Witness>,
}

impl PairClassification {
    pub fn witness(&self) -> Option<&Witness> {
        self.witnesses.first()
    }
}

fn check_pullback(pullback: &[LatticeVector], rank_a: usize, rank_b: usize) -> Result<()> {
    if pullback.len() != rank_a {
        return Err(Error::RankMismatch { expected: rank_a, found: pullback.len() });
    }
    if let Some(r) = pullback.iter().find(|r| r.rank() != rank_b) {
        return Err(Error::RankMismatch { expected: rank_b, found: r.rank() });
    }
    if rank_a != rank_b {
        return Err(Error::NotInvertible(format!("undefined for a {rank_a}×{rank_b} matrix")));
    }
    let m: Vec<Vec<_>> = pullback.iter().map(|r| r.coords().to_vec()).collect();
    let d = linalg::det(&m);
    if d != 1.into() && d != (-1).into() {
        return Err(Error::NotInvertible(d.to_string()));
    }
    Ok(())
}

fn describe_complex(c: &crate::complex::ChamberComplex) -> String {
    let parts: Vec<String> = c.chambers().iter().map(|x| x.to_string()).collect();
    format!("{} chambers: {}", c.len(), parts.join(", "))
}

/// Compares `left` with the pullback of `right`; `pullback` maps classes of
/// `right` to classes of `left` (rows are images of the coordinate functionals).
pub fn classify_pair(
    left: &CoxPresentation,
    right: &CoxPresentation,
    pullback: &[LatticeVector],
    sampling: &SamplingOptions,
    k_max: u32,
) -> Result<PairClassification> {
    check_pullback(pullback, left.rank(), right.rank())?;
    let a = invariants(left, sampling, k_max)?;
    let b = invariants(right, sampling, k_max)?;
    classify_invariants(left, right, &a, &b, pullback)
}

/// As [`classify_pair`], for invariants already computed.
pub fn classify_invariants(
    left: &CoxPresentation,
    right: &CoxPresentation,
    a: &Invariants,
    b: &Invariants,
    pullback: &[LatticeVector],
) -> Result<PairClassification> {
    check_pullback(pullback, left.rank(), right.rank())?;
    let mut witnesses = Vec::new();
    let mut cone_check = |name: &str, x: &RationalCone, y: &RationalCone| -> Result<bool> {
        let img = y.image(pullback)?;
        let ok = *x == img;
        if !ok {
            witnesses.push(Witness { object: name.into(), left: x.to_string(), pulled_back: img.to_string() });
        }
        Ok(ok)
    };
    let eff = cone_check("eff", &a.eff, &b.eff)?;
    let mov = cone_check("mov", &a.mov, &b.mov)?;
    let nef = cone_check("nef", &a.nef, &b.nef)?;

    let mcd_img = b.mcd.complex.image(pullback)?;
    let mcd = a.mcd.complex.support() == mcd_img.support() && a.mcd.complex.chambers() == mcd_img.chambers();
    if !mcd {
        witnesses.push(Witness {
            object: "mcd".into(),
            left: describe_complex(&a.mcd.complex),
            pulled_back: describe_complex(&mcd_img),
        });
    }
    let sbld_img = b.sbld.decomposition.image(pullback)?;
    let sbld = a.sbld.decomposition.equivalent(&sbld_img)?;
    if !sbld {
        witnesses.push(Witness {
            object: "sbld".into(),
            left: format!("{} regions", a.sbld.len()),
            pulled_back: format!("{} regions", sbld_img.len()),
        });
    }

    let lefschetz = eff && mov && nef;
    let flags = ClassificationFlags {
        lefschetz_divisorial: lefschetz,
        strong_lefschetz: lefschetz && sbld,
        twins: lefschetz && mcd,
        strong_twins: lefschetz && mcd && sbld,
    };
    debug_assert!(!flags.strong_twins || (flags.twins && flags.strong_lefschetz));
    debug_assert!(!flags.twins || flags.lefschetz_divisorial);
    Ok(PairClassification { left: left.id.clone(), right: right.id.clone(), flags, witnesses })
}

/// The identity pullback in rank `r`.
pub fn identity_pullback(r: usize) -> Vec<LatticeVector> {
    (0..r).map(|i| LatticeVector::unit(r, i)).collect()
}
