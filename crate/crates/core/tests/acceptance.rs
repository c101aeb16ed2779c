//! Acceptance criteria, one line per criterion. Exits nonzero when any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::*;
use conekit::arrangement::build_arrangement;
use conekit::complex::{Decomposition, WallSides};
use conekit::engine::{
    classify_pair, effective_cone, gkz_decomposition, identity_pullback, minor_multiplicity_report,
    mori_chamber_decomposition, movable_cone, nef_cone, recursion_check, render_svg, count_chamber_polygons, sbld,
    RenderSpec, DEFAULT_K_MAX,
};
use conekit::models::{collineation_model, CoxPresentation, quadric_model, thmex_model, Thmex, THMEX_F, THMEX_G};
use conekit::poly::{
    groebner_basis, normal_form, parse_poly, pointcount_dimension, s_polynomial, MonomialOrder, PolyIdeal,
    SamplingOptions,
};
use conekit::{Error, RationalCone};
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

const CASES: u32 = 256;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run(number: u32, name: &str, f: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    });
    let secs = start.elapsed().as_secs_f64();
    match &outcome {
        Ok(detail) => println!("[PASS] {number}. {name} ({secs:.1}s): {detail}"),
        Err(detail) => println!("[FAIL] {number}. {name} ({secs:.1}s): {detail}"),
    }
    outcome.is_ok()
}

fn chamber_counts() -> Check {
    let r = recursion_check(3, 9).map_err(|e| e.to_string())?;
    let f = |n: usize| r.counts.iter().find(|(m, _)| *m == n).map(|(_, c)| *c).unwrap();
    ensure(f(3) == 9, || format!("f(3) = {}", f(3)))?;
    ensure(f(4) == 14, || format!("f(4) = {}", f(4)))?;
    for n in 3..=8 {
        ensure(f(n + 1) == f(n) + n + 2, || format!("f({}) - f({n}) = {}", n + 1, f(n + 1) - f(n)))?;
    }
    let list: Vec<String> = r.counts.iter().map(|(n, c)| format!("f({n})={c}")).collect();
    Ok(list.join(" "))
}

fn cone_generators() -> Check {
    for n in 3..=6i64 {
        let m = collineation_model(n as usize, n as usize, 2).map_err(|e| e.to_string())?;
        let eff = effective_cone(&m).map_err(|e| e.to_string())?;
        let mov = movable_cone(&m).map_err(|e| e.to_string())?;
        let nef = nef_cone(&m, &SamplingOptions::default()).map_err(|e| e.to_string())?;
        let checks = [
            ("Eff", eff.rays().to_vec(), vec![e(1), e(2), d(n + 1)]),
            ("Mov", mov.rays().to_vec(), vec![d(1), d(2), d(n), p(n)]),
            ("Nef", nef.rays().to_vec(), vec![d(1), d(2), d(3)]),
        ];
        for (what, got, want) in checks {
            ensure(primitive_set(&got) == primitive_set(&want), || {
                format!("{what} for n={n}: {got:?} vs {want:?}")
            })?;
        }
    }
    Ok("Eff, Mov (removal algorithm), Nef match for n=3..6".into())
}

fn thmex_triple() -> Check {
    let opts = SamplingOptions::default();
    let z = thmex_model(Thmex::Z);
    let x = thmex_model(Thmex::X);
    let y = thmex_model(Thmex::Y);
    let err = |e: Error| e.to_string();
    let mcd = |m| mori_chamber_decomposition(m, &opts).map(|c| c.complex.len()).map_err(err);
    let sb = |m| sbld(m, &opts, DEFAULT_K_MAX).map(|s| s.len()).map_err(err);
    let nef_z = nef_cone(&z, &opts).map_err(err)?;
    let want = cone(&[lv(&[1, 0]), lv(&[2, 1])]);
    ensure(nef_z == want, || format!("Nef(Z) = {nef_z}"))?;
    let counts = [mcd(&z)?, sb(&z)?, mcd(&x)?, sb(&x)?, mcd(&y)?, sb(&y)?];
    ensure(counts == [3, 3, 3, 2, 2, 2], || format!("MCD/SBLD of Z, X, Y = {counts:?}"))?;
    Ok(format!("MCD/SBLD Z={}/{} X={}/{} Y={}/{}, Nef(Z)={nef_z}", counts[0], counts[1], counts[2], counts[3], counts[4], counts[5]))
}

fn classification() -> Check {
    let opts = SamplingOptions::default();
    let classify = |a: &CoxPresentation, b: &CoxPresentation| {
        classify_pair(a, b, &identity_pullback(a.rank()), &opts, DEFAULT_K_MAX).map_err(|e| e.to_string())
    };
    let q = quadric_model(3, 2).unwrap();
    let x3 = collineation_model(3, 3, 2).unwrap();
    let c1 = classify(&q, &x3)?;
    ensure(c1.flags.strong_twins, || format!("Q/X: {:?}", c1.flags))?;
    let c2 = classify(&thmex_model(Thmex::X), &thmex_model(Thmex::Z))?;
    ensure(c2.flags.twins && !c2.flags.strong_twins, || format!("X/Z: {:?}", c2.flags))?;
    let c3 = classify(&thmex_model(Thmex::Y), &thmex_model(Thmex::X))?;
    ensure(c3.flags.strong_lefschetz && !c3.flags.twins, || format!("Y/X: {:?}", c3.flags))?;
    Ok("Q/X strong twins; X/Z twins, not strong; Y/X strongly Lefschetz, not twins".into())
}

fn sbld_merge() -> Check {
    let m = collineation_model(3, 3, 2).unwrap();
    let s = sbld(&m, &SamplingOptions::default(), DEFAULT_K_MAX).map_err(|e| e.to_string())?;
    let chambers = s.decomposition.complex.len();
    ensure(chambers == 9 && s.len() == 8, || format!("{chambers} Mori chambers, {} regions", s.len()))?;
    let merged: Vec<&Vec<usize>> = s.decomposition.classes.iter().filter(|c| c.len() > 1).collect();
    ensure(merged.len() == 1 && merged[0].len() == 2, || format!("merged classes {merged:?}"))?;
    let (a, b) = (merged[0][0], merged[0][1]);
    let span = cone(&[d(2), e(2)]);
    let along = s.decomposition.complex.walls().iter().any(|w| {
        matches!(w.sides, WallSides::Interior(i, j) if (i, j) == (a, b) || (j, i) == (a, b)) && span.contains_cone(&w.cone)
    });
    ensure(along, || "merged chambers do not meet along [D2, E2]".into())?;
    Ok("9 Mori chambers, 8 regions, merge across [D2, E2]".into())
}

fn multiplicities() -> Check {
    let mut seen = Vec::new();
    for k in 2..=4usize {
        for h in 1..k {
            let r = minor_multiplicity_report(k, h, 5, 7).map_err(|e| e.to_string())?;
            ensure(r.per_point.len() >= 5 && r.per_point.iter().all(|&m| m as usize == k - h), || {
                format!("k={k}, h={h}: {:?}", r.per_point)
            })?;
            seen.push(format!("({k},{h})={}", r.multiplicity));
        }
    }
    Ok(seen.join(" "))
}

fn dimensions() -> Check {
    let f = parse_poly(THMEX_F, 11).unwrap();
    let g = parse_poly(THMEX_G, 11).unwrap();
    let t1 = parse_poly("T1", 11).unwrap();
    let t2 = parse_poly("T2", 11).unwrap();
    let mut out = Vec::new();
    for (rels, want) in [(vec![f.clone(), g.clone()], 9), (vec![f, g, t1, t2], 7)] {
        let groebner = PolyIdeal::new(11, rels.clone()).dimension().map_err(|e| e.to_string())?;
        let counted = pointcount_dimension(&rels, 11, &[3]).map_err(|e| e.to_string())?;
        ensure(groebner == want && counted.dimension == want, || {
            format!("{} relations: Gröbner {groebner}, point count {}", rels.len(), counted.dimension)
        })?;
        out.push(format!("{}: {groebner}={}", rels.len(), counted.dimension));
    }
    Ok(format!("relations→dimension {}", out.join(", ")))
}

fn runner() -> TestRunner {
    let config = Config { cases: CASES, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn suite<S: proptest::strategy::Strategy>(
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<String, String> {
    let start = Instant::now();
    runner().run(&strategy, test).map_err(|e| format!("{name}: {e}"))?;
    Ok(format!("{name} {CASES} in {:.1}s", start.elapsed().as_secs_f64()))
}

fn property_suites() -> Check {
    let fail = |e: Error| TestCaseError::fail(e.to_string());
    let mut lines = Vec::new();

    lines.push(suite("cones", generator_pair(), |(a, b)| {
        let ca = RationalCone::from_generators(&a).map_err(fail)?;
        let cb = RationalCone::from_generators(&b).map_err(fail)?;
        let again = RationalCone::from_generators(&ca.generators()).map_err(fail)?;
        let dual = RationalCone::from_inequalities(ca.ambient_rank(), ca.facets(), ca.equations()).map_err(fail)?;
        if again != ca || dual != ca {
            return Err(TestCaseError::fail(format!("round trip of {ca}")));
        }
        let ab = ca.intersect(&cb).map_err(fail)?;
        if ab != cb.intersect(&ca).map_err(fail)? || ca.intersect(&ca).map_err(fail)? != ca {
            return Err(TestCaseError::fail(format!("intersection of {ca} and {cb}")));
        }
        if !ca.contains_cone(&ab) || !cb.contains_cone(&ab) {
            return Err(TestCaseError::fail("intersection escapes"));
        }
        Ok(())
    })?);

    lines.push(suite("groebner", small_polys(), |gens| {
        let order = MonomialOrder::DegRevLex;
        let basis = match groebner_basis(&gens, order, 200_000) {
            Ok(b) => b,
            Err(Error::Resource(_)) => return Err(TestCaseError::reject("budget")),
            Err(e) => return Err(fail(e)),
        };
        for (i, f) in basis.iter().enumerate() {
            for g in &basis[i + 1..] {
                if !normal_form(&s_polynomial(f, g, order), &basis, order).is_zero() {
                    return Err(TestCaseError::fail(format!("S({f}, {g}) does not reduce")));
                }
            }
        }
        for f in &gens {
            if !normal_form(f, &basis, order).is_zero() {
                return Err(TestCaseError::fail(format!("{f} not reduced to zero")));
            }
            let probe = f.mul(&f.add(&gens[0])).add(&gens[gens.len() - 1].pow(2)).sub(f);
            let once = normal_form(&probe, &basis, order);
            if normal_form(&once, &basis, order) != once {
                return Err(TestCaseError::fail(format!("normal form of {probe} not idempotent")));
            }
        }
        Ok(())
    })?);

    lines.push(suite("refinement", rank2_configuration(5), |config| {
        let m = toric_rank2(&config);
        let opts = SamplingOptions::default();
        let gkz = Decomposition::discrete(gkz_decomposition(&m).map_err(fail)?);
        let mcd = mori_chamber_decomposition(&m, &opts).map_err(fail)?;
        let s = sbld(&m, &opts, DEFAULT_K_MAX).map_err(fail)?;
        let mcd = Decomposition::discrete(mcd.complex);
        if !gkz.refines(&mcd).map_err(fail)? || !mcd.refines(&s.decomposition).map_err(fail)? {
            return Err(TestCaseError::fail(format!("refinement chain breaks for {config:?}")));
        }
        Ok(())
    })?);

    lines.push(suite("euler", octant_rays(), |rays| {
        let support = RationalCone::from_generators(&rays).map_err(fail)?;
        let arr = build_arrangement(&rays, &support).map_err(fail)?;
        let total = arr.face_areas2().into_iter().fold(num_rational::BigRational::from_integer(0.into()), |a, b| a + b);
        if arr.euler_characteristic() != 1 || total != arr.support_area2() {
            return Err(TestCaseError::fail(format!("χ = {} for {rays:?}", arr.euler_characteristic())));
        }
        Ok(())
    })?);

    // every drawing shipped for the built-in families
    for n in 3..=8usize {
        let m = collineation_model(n, n, 2).unwrap();
        let eff = effective_cone(&m).map_err(|e| e.to_string())?;
        let arr = build_arrangement(&m.distinct_degrees(), &eff).map_err(|e| e.to_string())?;
        let svg = render_svg(&m, &RenderSpec::default(), &SamplingOptions::default()).map_err(|e| e.to_string())?;
        ensure(arr.euler_characteristic() == 1 && count_chamber_polygons(&svg) == arr.faces.len(), || {
            format!("drawing of X({n}): χ = {}", arr.euler_characteristic())
        })?;
        let gkz = Decomposition::discrete(gkz_decomposition(&m).map_err(|e| e.to_string())?);
        let s = sbld(&m, &SamplingOptions::default(), DEFAULT_K_MAX).map_err(|e| e.to_string())?;
        ensure(gkz.refines(&s.decomposition).map_err(|e| e.to_string())?, || format!("X({n}) refinement"))?;
    }
    lines.push("drawings X(3..8)".into());
    Ok(lines.join(", "))
}

fn main() {
    let results = [
        run(1, "chamber counts and recursion", chamber_counts),
        run(2, "cone generators", cone_generators),
        run(3, "three-model example", thmex_triple),
        run(4, "pair classification", classification),
        run(5, "stable base locus merge", sbld_merge),
        run(6, "multiplicity oracle", multiplicities),
        run(7, "dimension oracles", dimensions),
        run(8, "property suites", property_suites),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
