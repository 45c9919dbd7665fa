//! Built-in invariant suite over small fields: field axioms, interpolation
//! round trips, MDS and covering-radius checks, engine equivalence, the
//! degree-bound sandwich, scale-and-shift invariance, deep-hole construction,
//! agreement tightness, and the census golden counts.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use grs_core::census::{self, CensusMode};
use grs_core::code::{hamming_weight, EvaluationSet, GrsCode, Word};
use grs_core::deephole::{
    construct_deep_hole, orbit_size, reciprocal_word, verify_deep_hole, witness_polynomial,
    DeepHoleSpec,
};
use grs_core::distance::{
    cross_check, distance_bounds, error_distance, error_distance_subsets, Budget, Engine,
};
use grs_core::gf::{Element, FiniteField};
use grs_core::poly::{Degree, Polynomial};
use grs_core::{Error, Result};

const SUITE_ORDERS: [u32; 3] = [4, 5, 7];

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err(Error::PreconditionViolated(format!($($arg)+)));
        }
    };
}

pub struct SuiteOutcome {
    pub summary: Value,
    pub verdict: Result<()>,
}

type Check = fn(&mut ChaCha8Rng) -> Result<()>;

pub fn run_suite(seed: u64) -> SuiteOutcome {
    let checks: Vec<(&'static str, Check)> = vec![
        ("field-axioms", check_field_axioms),
        ("interpolation-round-trip", check_interpolation_round_trip),
        ("mds-minimum-weight", check_mds_minimum_weight),
        ("covering-radius-attained", check_covering_radius),
        ("engine-equivalence", check_engine_equivalence),
        ("degree-bound-sandwich", check_degree_bound_sandwich),
        ("scale-shift-invariance", check_scale_shift_invariance),
        ("deep-hole-construction", check_deep_hole_construction),
        ("agreement-tightness", check_agreement_tightness),
        ("census-golden-counts", check_census_golden),
    ];

    let mut entries = Vec::new();
    let mut failures = 0usize;
    let mut mismatch: Option<Error> = None;
    for (i, (name, check)) in checks.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
        match check(&mut rng) {
            Ok(()) => {
                eprintln!("ok   {name}");
                entries.push(json!({ "name": name, "status": "ok", "detail": null }));
            }
            Err(err) => {
                eprintln!("FAIL {name}: {err}");
                entries.push(json!({
                    "name": name,
                    "status": "fail",
                    "detail": err.to_string(),
                }));
                failures += 1;
                if matches!(err, Error::EngineMismatch(_)) && mismatch.is_none() {
                    mismatch = Some(err);
                }
            }
        }
    }

    let passed = failures == 0;
    let summary = json!({
        "seed": seed,
        "orders": SUITE_ORDERS,
        "checks": entries,
        "passed": passed,
    });
    let verdict = if passed {
        Ok(())
    } else if let Some(err) = mismatch {
        Err(err)
    } else {
        Err(Error::PreconditionViolated(format!(
            "{failures} selftest check(s) failed"
        )))
    };
    SuiteOutcome { summary, verdict }
}

fn field_of(q: u32) -> Arc<FiniteField> {
    match q {
        4 => FiniteField::extension(2, 2).unwrap(),
        8 => FiniteField::extension(2, 3).unwrap(),
        9 => FiniteField::extension(3, 2).unwrap(),
        p => FiniteField::prime(p).unwrap(),
    }
}

/// Puncture the first l elements 0..l out of GF(q).
fn punctured(q: u32, l: usize, k: usize) -> GrsCode {
    let field = field_of(q);
    let excluded: Vec<Element> = (0..l as u64).map(|i| field.element(i).unwrap()).collect();
    GrsCode::new(EvaluationSet::puncture(field, &excluded).unwrap(), k).unwrap()
}

fn random_word(rng: &mut ChaCha8Rng, code: &GrsCode) -> Word {
    let q = code.field().order() as u16;
    Word::new((0..code.n()).map(|_| Element(rng.gen_range(0..q))).collect())
}

/// Random polynomial of degree exactly `degree`.
fn random_poly_of_degree(rng: &mut ChaCha8Rng, field: &Arc<FiniteField>, degree: usize) -> Polynomial {
    let q = field.order() as u16;
    let mut coeffs: Vec<Element> = (0..degree).map(|_| Element(rng.gen_range(0..q))).collect();
    coeffs.push(Element(rng.gen_range(1..q)));
    Polynomial::new(field.clone(), coeffs)
}

/// Random polynomial of degree at most `max_degree` (possibly zero).
fn random_poly_up_to(rng: &mut ChaCha8Rng, field: &Arc<FiniteField>, max_degree: usize) -> Polynomial {
    let q = field.order() as u16;
    let coeffs: Vec<Element> = (0..=max_degree).map(|_| Element(rng.gen_range(0..q))).collect();
    Polynomial::new(field.clone(), coeffs)
}

fn check_field_axioms(_rng: &mut ChaCha8Rng) -> Result<()> {
    for q in SUITE_ORDERS {
        let f = field_of(q);
        for a in f.all_elements() {
            ensure!(f.pow(a, q as u64) == a, "a^q != a for {a} in GF({q})");
            if !a.is_zero() {
                let inv = f.inv(a)?;
                ensure!(f.mul(a, inv) == Element::ONE, "a * 1/a != 1 for {a} in GF({q})");
                ensure!(
                    f.pow(a, q as u64 - 2) == inv,
                    "a^(q-2) != 1/a for {a} in GF({q})"
                );
            }
            for b in f.all_elements() {
                ensure!(f.add(a, b) == f.add(b, a), "addition not commutative in GF({q})");
                ensure!(f.mul(a, b) == f.mul(b, a), "multiplication not commutative in GF({q})");
                for c in f.all_elements() {
                    ensure!(
                        f.add(f.add(a, b), c) == f.add(a, f.add(b, c)),
                        "addition not associative in GF({q})"
                    );
                    ensure!(
                        f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)),
                        "multiplication not associative in GF({q})"
                    );
                    ensure!(
                        f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)),
                        "distributivity fails in GF({q})"
                    );
                }
            }
        }
        let period = q as u64 - 1;
        for i in 0..period {
            for j in 0..period {
                ensure!(
                    f.generator_pow((i + j) % period)
                        == f.mul(f.generator_pow(i), f.generator_pow(j)),
                    "exp table is not a homomorphism in GF({q})"
                );
            }
        }
    }
    Ok(())
}

fn check_interpolation_round_trip(rng: &mut ChaCha8Rng) -> Result<()> {
    for q in SUITE_ORDERS {
        let code = punctured(q, 1, 2);
        let eval_set = code.eval_set();
        let n = code.n();
        for _ in 0..40 {
            let poly = random_poly_up_to(rng, code.field(), n - 1);
            let word = eval_set.evaluate(&poly)?;
            let back = eval_set.interpolate_word(&word)?;
            ensure!(back == poly, "interpolation round trip failed in GF({q})");

            // reduction modulo the vanishing polynomial agrees pointwise
            let tall = random_poly_up_to(rng, code.field(), n + 3);
            let reduced = grs_core::poly::reduce_mod_vanishing(&tall, eval_set.points())?;
            ensure!(
                reduced.degree().at_most(n - 1),
                "reduction degree escaped in GF({q})"
            );
            for &x in eval_set.points() {
                ensure!(
                    tall.eval(x) == reduced.eval(x),
                    "reduction changed a value on D in GF({q})"
                );
            }
        }
    }
    Ok(())
}

fn check_mds_minimum_weight(_rng: &mut ChaCha8Rng) -> Result<()> {
    for q in SUITE_ORDERS {
        let n = q as usize - 1;
        for k in 1..n {
            let code = punctured(q, 1, k);
            let min_weight = code
                .enumerate_codewords(1 << 24)?
                .filter(|(m, _)| !m.is_zero())
                .map(|(_, w)| hamming_weight(&w))
                .min()
                .expect("nonzero codewords exist");
            ensure!(
                min_weight == code.min_distance(),
                "minimum weight {min_weight} != n-k+1 = {} for GF({q}) k={k}",
                code.min_distance()
            );
        }
    }
    Ok(())
}

fn check_covering_radius(_rng: &mut ChaCha8Rng) -> Result<()> {
    let budget = Budget::default();
    for q in [4u32, 5] {
        let n = q as usize - 1;
        for k in 1..n {
            let code = punctured(q, 1, k);
            let total = (q as u64).pow(n as u32);
            let mut max_distance = 0;
            for index in 0..total {
                let mut rem = index;
                let entries: Vec<Element> = (0..n)
                    .map(|_| {
                        let e = Element((rem % q as u64) as u16);
                        rem /= q as u64;
                        e
                    })
                    .collect();
                let cert = error_distance(&code, &Word::new(entries), Engine::Auto, &budget)?;
                max_distance = max_distance.max(cert.distance);
            }
            ensure!(
                max_distance == code.covering_radius(),
                "max distance {max_distance} != n-k = {} for GF({q}) k={k}",
                code.covering_radius()
            );
        }
    }
    Ok(())
}

fn check_engine_equivalence(rng: &mut ChaCha8Rng) -> Result<()> {
    let budget = Budget::default();
    // full word-space sweep for the smallest fields
    for q in [4u32, 5] {
        let code = punctured(q, 1, 2);
        let n = code.n();
        for index in 0..(q as u64).pow(n as u32) {
            let mut rem = index;
            let entries: Vec<Element> = (0..n)
                .map(|_| {
                    let e = Element((rem % q as u64) as u16);
                    rem /= q as u64;
                    e
                })
                .collect();
            cross_check(&code, &Word::new(entries), &budget)?;
        }
    }
    // random words at q = 7 over both puncture counts
    for _ in 0..150 {
        let l = rng.gen_range(1..=2usize);
        let k = rng.gen_range(2..=7 - l - 1);
        let code = punctured(7, l, k);
        let u = random_word(rng, &code);
        cross_check(&code, &u, &budget)?;
    }
    Ok(())
}

fn check_degree_bound_sandwich(rng: &mut ChaCha8Rng) -> Result<()> {
    let budget = Budget::default();
    for q in SUITE_ORDERS {
        for _ in 0..300 {
            let l = rng.gen_range(1..=2usize);
            let n = q as usize - l;
            let k = rng.gen_range(1..n);
            let code = punctured(q, l, k);
            // mix uniform words with encodings of known degree so deg(u) = k
            // and every band k..n-1 actually shows up
            let u = if rng.gen_bool(0.34) {
                let d = rng.gen_range(k..n);
                code.eval_set()
                    .evaluate(&random_poly_of_degree(rng, code.field(), d))?
            } else {
                random_word(rng, &code)
            };
            let (lower, upper) = distance_bounds(&code, &u)?;
            let cert = error_distance(&code, &u, Engine::Auto, &budget)?;
            ensure!(
                lower <= cert.distance && cert.distance <= upper,
                "sandwich violated: {lower} <= {} <= {upper} fails for GF({q}) l={l} k={k} word {u}",
                cert.distance
            );
            let degree = code.eval_set().word_degree(&u)?;
            if degree == Degree::Finite(k) {
                ensure!(
                    cert.distance == code.covering_radius(),
                    "degree-k word missed the covering radius in GF({q}) l={l} k={k}"
                );
            }
            if degree.at_most(k - 1) {
                ensure!(cert.distance == 0, "low-degree word not a codeword in GF({q})");
            }
        }
    }
    Ok(())
}

fn check_scale_shift_invariance(rng: &mut ChaCha8Rng) -> Result<()> {
    let budget = Budget::default();
    for q in SUITE_ORDERS {
        let code = punctured(q, 1, 2);
        let field = code.field().clone();
        for _ in 0..60 {
            let v = random_word(rng, &code);
            let lambda = Element(rng.gen_range(1..q as u16));
            let f = random_poly_up_to(rng, &field, code.k() - 1);
            let f_word = code.encode(&f)?;
            let moved = Word::new(
                v.entries()
                    .iter()
                    .zip(f_word.entries())
                    .map(|(&a, &b)| field.add(field.mul(lambda, a), b))
                    .collect(),
            );
            let base = cross_check(&code, &v, &budget)?;
            let shifted = cross_check(&code, &moved, &budget)?;
            ensure!(
                base.distance == shifted.distance,
                "distance changed under scale-and-shift in GF({q}): {} vs {}",
                base.distance,
                shifted.distance
            );
            ensure!(
                base.is_deep_hole == shifted.is_deep_hole,
                "deep-hole status changed under scale-and-shift in GF({q})"
            );
        }
    }
    Ok(())
}

fn check_deep_hole_construction(rng: &mut ChaCha8Rng) -> Result<()> {
    let budget = Budget::default();
    for q in SUITE_ORDERS {
        for l in 1..=2usize {
            if q as usize <= l + 2 {
                continue;
            }
            for k in 2..=(q as usize - l - 1) {
                let code = punctured(q, l, k);
                for j in 1..=l {
                    for _ in 0..5 {
                        let spec = DeepHoleSpec {
                            code: &code,
                            j,
                            lambda: Element(rng.gen_range(1..q as u16)),
                            r: random_poly_up_to(rng, code.field(), k - 1),
                        };
                        let u = construct_deep_hole(&spec)?;
                        let (deep, cert) = verify_deep_hole(&code, &u, &budget)?;
                        ensure!(
                            deep && cert.distance == q as usize - l - k,
                            "constructed word at distance {} != {} in GF({q}) l={l} k={k} j={j}",
                            cert.distance,
                            q as usize - l - k
                        );
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_agreement_tightness(_rng: &mut ChaCha8Rng) -> Result<()> {
    let budget = Budget::default();
    for q in SUITE_ORDERS {
        for l in 1..=2usize {
            if q as usize <= l + 2 {
                continue;
            }
            for k in 2..=(q as usize - l - 1) {
                let code = punctured(q, l, k);
                for j in 1..=l {
                    let a = code.eval_set().excluded()[j - 1];
                    let pure = reciprocal_word(&code, a)?;
                    let cert = error_distance_subsets(&code, &pure, &budget)?;
                    ensure!(
                        cert.max_agreements == k,
                        "agreements {} != k={k} for GF({q}) l={l} j={j}",
                        cert.max_agreements
                    );
                    let witness = witness_polynomial(&code, j, None)?;
                    ensure!(
                        witness.g.degree() == Degree::Finite(k - 1),
                        "witness degree {} != k-1 in GF({q}) l={l} k={k}",
                        witness.g.degree()
                    );
                    ensure!(
                        witness.agreement_points.len() == k && witness.verified,
                        "witness not verified at k points in GF({q}) l={l} k={k} j={j}"
                    );
                }
            }
        }
    }
    Ok(())
}

fn check_census_golden(_rng: &mut ChaCha8Rng) -> Result<()> {
    let budget = Budget::default();
    for (q, expected_codewords, expected_trivial, expected_theorem, expected_overlap) in
        [(4u32, 16u128, 48u128, 0u128, 48u128), (5, 25, 100, 100, 0)]
    {
        let code = punctured(q, 1, 2);
        let orbit = census::run_census(&code, CensusMode::Orbits, &budget, None, |_, _| Ok(()))?;
        let full = census::run_census(&code, CensusMode::Full, &budget, None, |_, _| Ok(()))?;
        ensure!(
            orbit.totals == full.totals,
            "census modes disagree for GF({q})"
        );
        ensure!(
            orbit.totals.codewords == expected_codewords
                && orbit.totals.trivial == expected_trivial
                && orbit.totals.theorem == expected_theorem
                && orbit.totals.overlaps.trivial_and_theorem == expected_overlap,
            "census golden counts off for GF({q}): {:?}",
            orbit.totals
        );
        ensure!(
            orbit.totals.trivial as u128 == orbit_size(&code),
            "trivial tally != (q-1) q^k for GF({q})"
        );
    }
    Ok(())
}
