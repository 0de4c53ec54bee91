//! Acceptance gate: one test per release criterion, each printing a
//! PASS line (visible with `--nocapture`) and enforcing its stated
//! runtime bound. Every check is exact integer or exact rational
//! arithmetic — there are no tolerances anywhere.

use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use latlab::glue::{Gluing, GLUE_ENUM_BUDGET};
use latlab::k3::{
    counterexample_report, extended_ns_lattice, isotropic_moduli_disc, moduli_invariants,
    mukai_divisibility, mukai_square, K3Config, MukaiVector, Verdict,
};
use latlab::lattice::{hyperbolic_u, k3_lattice, k3n_lattice, mukai_lattice};
use latlab::oracle::{
    divisibility_campaign, glue_campaign, random_primitive_sublattice, FuzzConfig,
};

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

/// Genus range 2..=200: coarseness g-1 for the degree-0 Picard moduli
/// vector versus 2g-2 for degree g-1, gluing orders 2 versus 1, and a
/// definite verdict on every row.
#[test]
fn criterion_1_counterexample_rows_for_every_genus() {
    let start = Instant::now();
    let rows = counterexample_report(2, 200).unwrap();
    assert_eq!(rows.len(), 199);
    for row in &rows {
        let g = big(row.g as i64);
        let rep = &row.report;
        assert_eq!(rep.v_invariants.crs, &g - 1u32, "crs at g = {}", row.g);
        assert_eq!(rep.u_invariants.crs, 2u32 * (&g - 1u32), "crs at g = {}", row.g);
        assert_eq!(rep.v_invariants.gluing_order, big(2));
        assert_eq!(rep.u_invariants.gluing_order, BigInt::one());
        assert_eq!(rep.verdict, Verdict::NotLEquivalent);
        assert!(!rep.dimension_mismatch);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 5, "took {elapsed:?}");
    println!("criterion 1 (genus table 2..=200, exact): PASS in {elapsed:?}");
}

/// Draw random valid (genus, Mukai vector) pairs within the stated box.
fn sample_moduli_instances() -> Vec<(K3Config, MukaiVector)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2026);
    let mut out = Vec::new();
    while out.len() < 200 {
        let g = rng.gen_range(2..=20u64);
        let r = rng.gen_range(-10..=10i64);
        let d = rng.gen_range(-10..=10i64);
        let s = rng.gen_range(-10..=10i64);
        let coords = [big(r), big(d), big(s)];
        if coords.iter().fold(BigInt::zero(), |a, c| a.gcd(c)) != BigInt::one() {
            continue;
        }
        let cfg = K3Config::picard_rank_one(g).unwrap();
        let v = MukaiVector::from_coords(&coords).unwrap();
        if mukai_square(&cfg, &v).unwrap() < big(2) {
            continue;
        }
        out.push((cfg, v));
    }
    out
}

/// The moduli-space Picard discriminant computed through the orthogonal
/// complement agrees with disc(T)·(2n−2)/div² on ≥ 200 random instances.
#[test]
fn criterion_2_picard_discriminant_two_routes_agree() {
    let start = Instant::now();
    let sample = sample_moduli_instances();
    assert!(sample.len() >= 200);
    for (cfg, v) in &sample {
        let inv = moduli_invariants(cfg, v, false).unwrap();
        // Independent route: complement of v inside the extended
        // Neron-Severi lattice, then the discriminant of the induced form.
        let ens = extended_ns_lattice(cfg).unwrap();
        let complement = ens.span_vector(&v.coords()).unwrap().orthogonal_complement();
        let disc_by_complement = complement.as_lattice().unwrap().disc();
        assert_eq!(
            disc_by_complement, inv.disc_ns,
            "routes disagree for v = {:?}",
            v.coords()
        );
        // And the formula itself, recomputed from its ingredients.
        let two_n_minus_2 = &inv.v_square;
        let formula = &inv.disc_t * two_n_minus_2 / (&inv.div_v * &inv.div_v);
        assert_eq!(formula, inv.disc_ns);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 10, "took {elapsed:?}");
    println!(
        "criterion 2 (two-route Picard discriminant, {} instances): PASS in {elapsed:?}",
        sample.len()
    );
}

/// Gluing order × coarseness = disc(T), exactly, on the same sample.
#[test]
fn criterion_3_gluing_order_times_coarseness() {
    let sample = sample_moduli_instances();
    for (cfg, v) in &sample {
        let inv = moduli_invariants(cfg, v, false).unwrap();
        assert_eq!(
            &inv.gluing_order * &inv.crs,
            inv.disc_t,
            "identity fails for v = {:?}",
            v.coords()
        );
    }
    println!(
        "criterion 3 (gluing order x crs = disc_T, {} instances): PASS",
        sample.len()
    );
}

/// Discriminant identity disc(N)·disc(T) = |G|²·disc(H) on ≥ 500 random
/// primitive-sublattice instances, with |G| cross-checked against
/// brute-force coset enumeration.
#[test]
fn criterion_4_discriminant_identity_fuzz() {
    let start = Instant::now();
    let cfg = FuzzConfig::new(40_404, 500, 4, 6).unwrap();
    let outcome = glue_campaign(&cfg);
    assert!(outcome.passed(), "failures: {:?}", outcome.failures);
    assert!(outcome.instances >= 500, "only {} instances", outcome.instances);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    println!(
        "criterion 4 (identity + enumeration fuzz, {} instances): PASS in {elapsed:?}",
        outcome.instances
    );
}

/// Unimodular ambients glue bijectively; general ambients inject; the glue
/// graph is an exact anti-isometry in both cases.
#[test]
fn criterion_5_embedding_and_anti_isometry() {
    // General family: injectivity and anti-isometry are asserted on every
    // instance of the glue campaign.
    let cfg = FuzzConfig::new(50_505, 150, 4, 6).unwrap();
    let outcome = glue_campaign(&cfg);
    assert!(outcome.passed(), "failures: {:?}", outcome.failures);

    // Unimodular family: random primitive sublattices of U and U+U must
    // glue bijectively (and still anti-isometrically).
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let ambients = [hyperbolic_u(), hyperbolic_u().direct_sum(&hyperbolic_u())];
    let mut unimodular_instances = 0;
    for ambient in &ambients {
        for _ in 0..25 {
            let rank = rng.gen_range(1..ambient.rank());
            let sub = random_primitive_sublattice(&mut rng, ambient, rank, 6).unwrap();
            let gluing = Gluing::new(&sub).unwrap();
            assert!(gluing.unimodular_iso_holds(GLUE_ENUM_BUDGET).unwrap());
            assert!(gluing.anti_isometry_holds(GLUE_ENUM_BUDGET).unwrap());
            unimodular_instances += 1;
        }
    }
    println!(
        "criterion 5 (bijective gluing on {} unimodular + injective on {} general instances): PASS",
        unimodular_instances, outcome.instances
    );
}

/// Determinants and ranks of the standard lattices.
#[test]
fn criterion_6_standard_lattice_determinants() {
    let k3 = k3_lattice();
    assert_eq!(k3.rank(), 22);
    assert_eq!(k3.disc(), BigInt::one());

    let mukai = mukai_lattice();
    assert_eq!(mukai.rank(), 24);
    assert_eq!(mukai.det(), &BigInt::one());

    for n in 2..=50u64 {
        let l = k3n_lattice(n).unwrap();
        assert_eq!(l.rank(), 23);
        assert_eq!(l.disc(), big(2 * n as i64 - 2), "disc at n = {n}");
    }
    println!("criterion 6 (standard lattice ranks and determinants): PASS");
}

/// Isotropic primitive Mukai vectors: disc(T)/div² is integral and equals
/// the independent quotient-lattice determinant.
#[test]
fn criterion_7_isotropic_moduli_discriminant() {
    let mut checked = 0;
    'outer: for g in 2..=20u64 {
        let cfg = K3Config::picard_rank_one(g).unwrap();
        for d in 0..=4i64 {
            // r*s = d^2 (g-1) makes (r, d, s) isotropic.
            let product = d * d * (g as i64 - 1);
            for r in 1..=60i64 {
                if product % r != 0 {
                    continue;
                }
                let s = product / r;
                let coords = [big(r), big(d), big(s)];
                if coords.iter().fold(BigInt::zero(), |a, c| a.gcd(c)) != BigInt::one() {
                    continue;
                }
                let v = MukaiVector::from_coords(&coords).unwrap();
                assert!(mukai_square(&cfg, &v).unwrap().is_zero());
                let disc_m = isotropic_moduli_disc(&cfg, &v).unwrap();
                let div = mukai_divisibility(&cfg, &v).unwrap();
                let disc_t = cfg.disc_t().unwrap();
                assert!(
                    (&disc_t % (&div * &div)).is_zero(),
                    "div^2 does not divide disc_T for v = {coords:?} at g = {g}"
                );
                assert_eq!(disc_m, disc_t / (&div * &div));
                checked += 1;
                if checked >= 120 {
                    break 'outer;
                }
            }
        }
    }
    assert!(checked >= 50, "only {checked} isotropic instances");
    println!("criterion 7 (isotropic route, {checked} instances): PASS");
}

/// Vector divisibility divides the lattice discriminant on ≥ 1000 fuzzed
/// primitive vectors.
#[test]
fn criterion_8_divisibility_divides_discriminant() {
    let cfg = FuzzConfig::new(80_808, 1000, 5, 8).unwrap();
    let outcome = divisibility_campaign(&cfg);
    assert!(outcome.passed(), "failures: {:?}", outcome.failures);
    assert!(outcome.checks >= 1000, "only {} checks", outcome.checks);
    println!(
        "criterion 8 (div | disc on {} primitive vectors): PASS",
        outcome.checks
    );
}
