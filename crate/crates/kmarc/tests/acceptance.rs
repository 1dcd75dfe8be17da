//! Acceptance gate: one PASS/FAIL line per criterion on standard output.
//! Run with `cargo test -p kmarc --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use kmarc::sample::{move_along_ray, random_scaling, random_star_set, seeded};
use kmarc_core::arcs::{
    bracket_power_expand, classify_star_set, gen_exponents, secant_inverse_check, verify_bracket,
    verify_direct, verify_power_sums, ExpansionForm, ExponentKind, PointSet,
};
use kmarc_core::autos::{
    dilation_spec, example_quotient_order, group_closure, make_named, map_order,
    primitive_sub_element, trace_zero_elation_generators, verify_translation_arc, MapSpec,
    TranslationClass, DEFAULT_CAP,
};
use kmarc_core::constructions::{
    admissible_sums, conic_points, example_fixture, lift_construction, recurrence_arc,
    recurrence_set, subplane_hyperoval, subplane_oval, Example,
};
use kmarc_core::{Error, FieldElement, FieldTower, Level, Line, ProjPoint};
use rand::Rng;

const SAMPLES_PER_M: usize = 200;
const EXPANSION_TRIALS: usize = 1000;
const CLOSURE_CAP: usize = DEFAULT_CAP;

const BUDGET_EQUIVALENCE: Duration = Duration::from_secs(60);
const BUDGET_EXPONENTS: Duration = Duration::from_secs(5);
const BUDGET_EXPANSION: Duration = Duration::from_secs(5);
const BUDGET_HR: Duration = Duration::from_secs(120);
const BUDGET_LIFT: Duration = Duration::from_secs(120);
const BUDGET_EXAMPLES: Duration = Duration::from_secs(120);
const BUDGET_RECURRENCE: Duration = Duration::from_secs(30);
const BUDGET_VANDERMONDE: Duration = Duration::from_secs(120);
const BUDGET_TRANSLATION: Duration = Duration::from_secs(60);
const BUDGET_CLOSURE: Duration = Duration::from_secs(300);

const HR_CASES: [(u32, u32); 6] = [(2, 1), (3, 1), (4, 1), (4, 2), (6, 2), (6, 3)];

type Check = Result<String, String>;
type Criterion = (u32, &'static str, Duration, fn() -> Check);

fn tower(m: u32, h: u32) -> FieldTower {
    FieldTower::new(m, h, None).unwrap()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// Line census through homogeneous coordinates: `|{p ∈ H : f·p = 0}|` for
/// every line. Shares no code with the direction census.
fn brute_force_km(t: &FieldTower, set: &PointSet, ty: u32) -> bool {
    let coords: Vec<[FieldElement; 3]> = set
        .points()
        .iter()
        .map(|&x| t.to_homogeneous(&ProjPoint::Affine(x)))
        .collect();
    t.lines().iter().all(|line| {
        let f = t.line_coordinates(line);
        let count = coords
            .iter()
            .filter(|p| {
                let dot = (0..3).fold(FieldElement::ZERO, |acc, k| t.add(acc, t.mul(f[k], p[k])));
                dot.is_zero()
            })
            .count() as u32;
        count == 0 || count == 2 || count == ty
    })
}

fn km_sources(m: u32) -> Vec<(FieldTower, PointSet)> {
    match m {
        2 => vec![(
            tower(2, 1),
            recurrence_arc(&tower(2, 1), FieldElement::ONE).unwrap(),
        )],
        3 => {
            let t = tower(3, 1);
            let oval = subplane_oval(&t).unwrap();
            vec![
                (t.clone(), recurrence_arc(&t, FieldElement::ONE).unwrap()),
                (
                    t.clone(),
                    lift_construction(&t, &oval, 1, FieldElement::from_bits(3)).unwrap(),
                ),
            ]
        }
        _ => unreachable!(),
    }
}

fn criterion_equivalence() -> Check {
    let (mut km, mut non_km) = (0, 0);
    for m in [2u32, 3] {
        let sources = km_sources(m);
        let divisors: Vec<u32> = (1..m).map(|j| 1 << j).collect();
        for n in 0..SAMPLES_PER_M {
            let mut rng = seeded(((m as u64) << 32) | n as u64);
            let (t, base) = &sources[n % sources.len()];
            let set = match n % 4 {
                0 => random_scaling(t, base, &mut rng).unwrap(),
                1 => move_along_ray(t, &random_scaling(t, base, &mut rng).unwrap(), &mut rng)
                    .unwrap(),
                2 => {
                    let ty = divisors[rng.gen_range(0..divisors.len())];
                    random_star_set(t, ty, &mut rng).unwrap()
                }
                _ => {
                    let s = random_scaling(t, base, &mut rng).unwrap();
                    let s = move_along_ray(t, &s, &mut rng).unwrap();
                    move_along_ray(t, &s, &mut rng).unwrap()
                }
            };
            let (star, ty) = classify_star_set(t, &set);
            ensure(star, "sample is not a star-set")?;
            let ty = ty.unwrap();
            let verdicts = [
                verify_direct(t, &set, ty)
                    .map_err(|e| e.to_string())?
                    .is_km_arc(),
                verify_bracket(t, &set).map_err(|e| e.to_string())?.holds(),
                verify_power_sums(t, &set, ExponentKind::D)
                    .map_err(|e| e.to_string())?
                    .holds(),
                verify_power_sums(t, &set, ExponentKind::E)
                    .map_err(|e| e.to_string())?
                    .holds(),
            ];
            if verdicts.iter().any(|&v| v != verdicts[0]) {
                return Err(format!("m={m} sample {n}: verdicts {verdicts:?}"));
            }
            if verdicts[0] {
                km += 1;
            } else {
                non_km += 1;
            }
        }
    }
    ensure(
        km > 0 && non_km > 0,
        format!("degenerate mix: {km} KM, {non_km} non-KM"),
    )?;
    Ok(format!(
        "{} samples ({km} KM, {non_km} non-KM), 0 disagreements",
        km + non_km
    ))
}

fn criterion_exponents() -> Check {
    for m in 1..=8 {
        let d = gen_exponents(ExponentKind::D, m).unwrap().values;
        let dp = gen_exponents(ExponentKind::Dprime, m).unwrap().values;
        let e = gen_exponents(ExponentKind::E, m).unwrap().values;
        ensure(dp == e, format!("m={m}: D' != E"))?;
        ensure(
            d.iter().all(|x| e.binary_search(x).is_ok()),
            format!("m={m}: D not in E"),
        )?;
    }
    Ok("D' = E and D ⊆ E for m = 1..=8".into())
}

fn criterion_expansion() -> Check {
    let t = tower(6, 1);
    let mut rng = seeded(0x5eed);
    for _ in 0..EXPANSION_TRIALS {
        let a = FieldElement::from_bits(rng.gen_range(0..t.field_size()) as u16);
        let b = FieldElement::from_bits(rng.gen_range(0..t.field_size()) as u16);
        let k = rng.gen_range(1..t.q());
        let want = t.pow(t.bilinear(a, b), k as u64);
        for form in [ExpansionForm::Low, ExpansionForm::High] {
            let got = bracket_power_expand(&t, a, b, k, form).map_err(|e| e.to_string())?;
            ensure(got == want, format!("a={a} b={b} k={k} {form:?}"))?;
        }
    }
    Ok(format!(
        "{EXPANSION_TRIALS} random triples at m = 6, both forms exact"
    ))
}

fn criterion_hr() -> Check {
    for (m, h) in HR_CASES {
        let t = tower(m, h);
        let set = recurrence_arc(&t, FieldElement::ONE).map_err(|e| e.to_string())?;
        let ty = t.q() / t.r();
        ensure(
            set.len() as u32 == t.q() + ty,
            format!("({m},{h}): |H| = {}", set.len()),
        )?;
        let report = verify_direct(&t, &set, ty).map_err(|e| e.to_string())?;
        ensure(report.is_km_arc(), format!("({m},{h}): census rejects"))?;
        ensure(
            brute_force_km(&t, &set, ty),
            format!("({m},{h}): homogeneous census rejects"),
        )?;
    }
    Ok(format!(
        "{} towers, types q/r, sizes q + q/r",
        HR_CASES.len()
    ))
}

fn lift_cases() -> Vec<(FieldTower, PointSet, u32)> {
    let t3 = tower(3, 1);
    let t6 = tower(6, 2);
    let oval3 = subplane_oval(&t3).unwrap();
    let oval6 = subplane_oval(&t6).unwrap();
    let hyper6 = subplane_hyperoval(&t6).unwrap();
    vec![
        (
            t3.clone(),
            lift_construction(&t3, &oval3, 1, FieldElement::ONE).unwrap(),
            4,
        ),
        (
            t6.clone(),
            lift_construction(&t6, &oval6, 1, FieldElement::ONE).unwrap(),
            16,
        ),
        (
            t6.clone(),
            lift_construction(&t6, &hyper6, 2, FieldElement::ONE).unwrap(),
            32,
        ),
    ]
}

fn criterion_lift() -> Check {
    for (t, set, ty) in lift_cases() {
        ensure(set.len() as u32 == t.q() + ty, "lift size")?;
        let report = verify_direct(&t, &set, ty).map_err(|e| e.to_string())?;
        ensure(
            report.is_km_arc(),
            format!("m={} type {ty}: census rejects", t.m()),
        )?;
        ensure(
            brute_force_km(&t, &set, ty),
            format!("m={} type {ty}: homogeneous census rejects", t.m()),
        )?;
    }
    let t3 = tower(3, 1);
    let oval3 = subplane_oval(&t3).unwrap();
    ensure(
        lift_construction(&t3, &oval3, 2, FieldElement::ONE)
            == Err(Error::TypeOutOfRange { t: 8, q: 8 }),
        "t = q lift accepted",
    )?;
    ensure(
        subplane_hyperoval(&t3) == Err(Error::NoExternalPoint),
        "r = 2 hyperoval accepted",
    )?;
    Ok("types 4, 16, 32 verified; t = q rejected".into())
}

fn criterion_examples() -> Check {
    let cases = [
        (2, Example::Half),
        (3, Example::Half),
        (4, Example::Half),
        (4, Example::Quarter),
        (6, Example::Eighth),
    ];
    let mut notes = Vec::new();
    for (m, ex) in cases {
        let f = example_fixture(&tower(m, 1), ex).map_err(|e| format!("{ex:?} m={m}: {e}"))?;
        let ty = f.tower.q() / f.tower.r();
        ensure(
            verify_direct(&f.tower, &f.arc, ty)
                .map_err(|e| e.to_string())?
                .is_km_arc(),
            "example census",
        )?;
        notes.push(format!("{ex:?}@m={m}:e={}", f.automorphism));
    }
    Ok(format!(
        "listed sets matched up to Galois conjugacy [{}]",
        notes.join(" ")
    ))
}

fn criterion_recurrence() -> Check {
    for (m, h) in HR_CASES {
        let t = tower(m, h);
        let rec = recurrence_set(&t).map_err(|e| e.to_string())?;
        let r = t.r() as usize;
        ensure(rec.point_set().len() == r + 1, "|U| != r + 1")?;
        let mut seq = vec![FieldElement::ONE, FieldElement::ZERO];
        while seq.len() < 3 * (r + 1) {
            let n = seq.len();
            seq.push(t.add(t.mul(rec.b, seq[n - 1]), seq[n - 2]));
        }
        let period = (1..seq.len()).find(|&p| (0..seq.len() - p).all(|n| seq[n] == seq[n + p]));
        ensure(
            period == Some(r + 1),
            format!("({m},{h}): period {period:?}"),
        )?;
        ensure(seq[..=r + 1] == rec.b_seq[..], "stored sequence")?;
        ensure(
            conic_points(&t, rec.b) == rec.point_set().points(),
            "conic set equality",
        )?;
    }
    for (m, h) in [(2, 1), (4, 2)] {
        let t = tower(m, h);
        let u = recurrence_set(&t).unwrap().points;
        let ks: Vec<u64> = admissible_sums(&t)
            .into_iter()
            .filter(|&k| k >= 1 && k <= t.q() as u64 - 2)
            .collect();
        for &v in t.unit_circle(Level::Full) {
            for &k in &ks {
                let s = u.iter().fold(FieldElement::ZERO, |acc, &x| {
                    t.add(acc, t.pow(t.bilinear(v, x), k))
                });
                ensure(s.is_zero(), format!("({m},{h}) v={v} k={k}: sum {s}"))?;
            }
        }
    }
    Ok("period, size and conic equality for 6 towers; vanishing sums at (2,1), (4,2)".into())
}

fn criterion_vandermonde() -> Check {
    let mut arcs: Vec<(FieldTower, PointSet, u32)> = HR_CASES
        .iter()
        .map(|&(m, h)| {
            let t = tower(m, h);
            let set = recurrence_arc(&t, FieldElement::ONE).unwrap();
            let ty = t.q() / t.r();
            (t, set, ty)
        })
        .collect();
    arcs.extend(lift_cases());
    let mut checked = 0;
    for (t, set, ty) in arcs.iter().filter(|a| a.2 >= 3) {
        ensure(
            secant_inverse_check(t, set, *ty).map_err(|e| e.to_string())?,
            format!("m={} t={ty}", t.m()),
        )?;
        checked += 1;
    }
    Ok(format!(
        "{checked} arcs, every t-secant inverse set is Vandermonde"
    ))
}

fn criterion_translation() -> Check {
    for (m, h) in [(4, 2), (6, 3)] {
        let t = tower(m, h);
        let set = recurrence_arc(&t, FieldElement::ONE).unwrap();
        let ty = t.q() / t.r();
        let l0 = Line::through_origin(FieldElement::ONE);
        let report = verify_translation_arc(&t, &set, ty, &l0).map_err(|e| e.to_string())?;
        ensure(
            report.class == TranslationClass::Translation,
            format!("({m},{h}): {:?}", report.class),
        )?;

        let r = t.r() as u64;
        let b = recurrence_set(&t).unwrap().b;
        let order = |spec| -> Result<u64, String> {
            let map = make_named(&t, spec).map_err(|e| e.to_string())?.map;
            map_order(&t, &map, DEFAULT_CAP).map_err(|e| e.to_string())
        };
        ensure(order(MapSpec::Rotation { b })? == r + 1, "rotation order")?;
        ensure(order(MapSpec::Shear { b })? == 2, "shear order")?;
        ensure(
            order(dilation_spec(&t, primitive_sub_element(&t)).unwrap())? == r - 1,
            "dilation order",
        )?;
        let e = trace_zero_elation_generators(&t).map_err(|e| e.to_string())?;
        let n = group_closure(&t, &e, CLOSURE_CAP)
            .map_err(|e| e.to_string())?
            .len() as u64;
        let qr = (t.q() / t.r()) as u64;
        ensure(n == qr * qr, format!("|E| = {n}"))?;
    }
    Ok("translation at (4,2), (6,3); orders r+1, 2, r-1, (q/r)^2".into())
}

fn criterion_closure() -> Check {
    let f = example_fixture(&tower(6, 1), Example::Eighth).map_err(|e| e.to_string())?;
    let q = example_quotient_order(&f, CLOSURE_CAP).map_err(|e| e.to_string())?;
    ensure(q.quotient == 504, format!("quotient order {}", q.quotient))?;
    Ok(format!("group {} / normal {} = 504", q.group, q.normal))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        (
            1,
            "criterion equivalence on random star-sets",
            BUDGET_EQUIVALENCE,
            criterion_equivalence,
        ),
        (
            2,
            "exponent sets D' = E, D ⊆ E",
            BUDGET_EXPONENTS,
            criterion_exponents,
        ),
        (
            3,
            "bracket power expansions",
            BUDGET_EXPANSION,
            criterion_expansion,
        ),
        (4, "recurrence-set arcs verified", BUDGET_HR, criterion_hr),
        (
            5,
            "oval and hyperoval lifts verified",
            BUDGET_LIFT,
            criterion_lift,
        ),
        (6, "worked examples", BUDGET_EXAMPLES, criterion_examples),
        (
            7,
            "recurrence period, conic form, vanishing sums",
            BUDGET_RECURRENCE,
            criterion_recurrence,
        ),
        (
            8,
            "secant inverse sets are Vandermonde",
            BUDGET_VANDERMONDE,
            criterion_vandermonde,
        ),
        (
            9,
            "translation arcs and named-map orders",
            BUDGET_TRANSLATION,
            criterion_translation,
        ),
        (
            10,
            "quotient order 504 by closure",
            BUDGET_CLOSURE,
            criterion_closure,
        ),
    ];
    let mut failures = Vec::new();
    for (n, name, budget, run) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let result = result.and_then(|detail| {
            if elapsed <= budget {
                Ok(detail)
            } else {
                Err(format!("{detail}; took {elapsed:.2?} > budget {budget:?}"))
            }
        });
        match result {
            Ok(detail) => println!("PASS {n:>2} {name}: {detail} ({elapsed:.2?})"),
            Err(why) => {
                println!("FAIL {n:>2} {name}: {why} ({elapsed:.2?})");
                failures.push(n);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
