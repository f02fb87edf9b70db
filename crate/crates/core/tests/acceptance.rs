//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (visible with `cargo test --test acceptance -- --nocapture`).

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;

use spaceform_modes::geometry::TorusIsometry;
use spaceform_modes::modes::{enumerate_basis, ModeFunction, ModeIndex};
use spaceform_modes::polynomial::{to_polynomial, HarmonicPolynomial};
use spaceform_modes::quotient::{
    ikeda_multiplicity, lens_multiplicity, prism_basis, prism_multiplicity, QuotientSpace,
};
use spaceform_modes::symmetry::character_trace;
use spaceform_modes::validation::{
    build_rule, gram_matrix, helmholtz_residual, inner_product, invariance_residual,
    max_identity_deviation, random_points, reference_lens_spectra,
};

fn conclude(number: u32, name: &str, started: Instant, budget: Duration, pass: bool, detail: &str) {
    let elapsed = started.elapsed();
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!(
        "criterion {number} ({name}): {verdict} in {:.2}s — {detail}",
        elapsed.as_secs_f64()
    );
    assert!(pass, "criterion {number} ({name}) failed: {detail}");
    assert!(
        elapsed <= budget,
        "criterion {number} ({name}) exceeded its {:.0}s budget: {:.2}s",
        budget.as_secs_f64(),
        elapsed.as_secs_f64()
    );
}

/// Criterion 1: every entry of the reference lens-space table (13 spaces ×
/// 15 wave numbers, sphere row included) is reproduced exactly.
#[test]
fn criterion_1_lens_table_reproduction() {
    let started = Instant::now();
    let mut mismatches = Vec::new();
    let mut entries = 0;
    for row in reference_lens_spectra() {
        for (k, &expected) in row.multiplicities.iter().enumerate() {
            entries += 1;
            let got = lens_multiplicity(row.p, row.q, k as u32).unwrap();
            if got != expected {
                mismatches.push(format!("{} k={k}: {got} != {expected}", row.label));
            }
        }
    }
    conclude(
        1,
        "table1",
        started,
        Duration::from_secs(1),
        mismatches.is_empty(),
        &format!("{entries} entries checked, {} mismatches", mismatches.len()),
    );
}

/// Criterion 2: prism multiplicities equal Ikeda's closed form for n ≤ 6,
/// k ≤ 24, and vanish for odd k.
#[test]
fn criterion_2_ikeda_agreement() {
    let started = Instant::now();
    let mut pass = true;
    let mut checked = 0;
    for n in 1..=6i64 {
        for k in 0..=24u32 {
            checked += 1;
            let counted = prism_multiplicity(n, k).unwrap();
            let closed_form = ikeda_multiplicity(n, k).unwrap();
            let enumerated = prism_basis(n, k).unwrap().len() as u64;
            if counted != closed_form || counted != enumerated {
                pass = false;
            }
            if k % 2 == 1 && counted != 0 {
                pass = false;
            }
        }
    }
    conclude(
        2,
        "ikeda",
        started,
        Duration::from_secs(1),
        pass,
        &format!("{checked} (n, k) pairs checked against the closed form"),
    );
}

/// Criterion 3: |B_k| = (k+1)² for k ≤ 50.
#[test]
fn criterion_3_eigenbasis_dimension() {
    let started = Instant::now();
    let pass = (0..=50u32).all(|k| enumerate_basis(k).len() as u64 == u64::from(k + 1).pow(2));
    conclude(
        3,
        "eigenbasis dimension",
        started,
        Duration::from_secs(1),
        pass,
        "enumerate_basis(k) counted for k = 0..=50",
    );
}

/// Criterion 4: Gram matrices of normalized B_k (k ≤ 12) and of the lens
/// (p ≤ 9) and prism (n ≤ 4) bases (k ≤ 10) equal the identity within 1e-10.
#[test]
fn criterion_4_orthonormality() {
    let started = Instant::now();
    let mut worst = 0.0f64;

    let sphere_rule = build_rule(12);
    for k in 0..=12u32 {
        let functions: Vec<_> = enumerate_basis(k)
            .into_iter()
            .map(ModeFunction::normalized)
            .collect();
        worst = worst.max(max_identity_deviation(&gram_matrix(
            &functions,
            &sphere_rule,
        )));
    }

    let quotient_rule = build_rule(10);
    let mut spaces = Vec::new();
    for p in 2..=9i64 {
        for q in 1..p {
            if let Ok(space) = QuotientSpace::lens(p, q) {
                spaces.push(space);
            }
        }
    }
    for n in 1..=4i64 {
        spaces.push(QuotientSpace::prism(n).unwrap());
    }
    for space in &spaces {
        for k in 0..=10u32 {
            let functions: Vec<_> = space.basis(k).iter().map(|v| v.function()).collect();
            if functions.is_empty() {
                continue;
            }
            worst = worst.max(max_identity_deviation(&gram_matrix(
                &functions,
                &quotient_rule,
            )));
        }
    }
    conclude(
        4,
        "orthonormality",
        started,
        Duration::from_secs(60),
        worst <= 1e-10,
        &format!(
            "max Gram deviation {worst:.3e} over B_k and {} quotient spaces",
            spaces.len()
        ),
    );
}

/// Criterion 5: every mode polynomial with k ≤ 12 is homogeneous of degree k
/// with exactly zero Euclidean Laplacian (rational arithmetic, no tolerance).
#[test]
fn criterion_5_harmonicity() {
    let started = Instant::now();
    let mut pass = true;
    let mut modes = 0;
    for k in 0..=12u32 {
        for idx in enumerate_basis(k) {
            modes += 1;
            let poly = to_polynomial(&idx);
            if !spaceform_modes::polynomial::is_homogeneous_harmonic(&poly, k) {
                pass = false;
            }
        }
    }
    conclude(
        5,
        "harmonicity",
        started,
        Duration::from_secs(30),
        pass,
        &format!("{modes} mode polynomials, symbolic Laplacian residual exactly 0"),
    );
}

/// Criterion 6: the expansion of Ψ̃_{7,3,−2} equals
/// [3(x²+y²) − 4(z²+w²)]·[x³ − 3xy²]·[2zw], coefficient by coefficient.
#[test]
fn criterion_6_worked_example() {
    let started = Instant::now();
    let int = |v: i64| BigRational::from_integer(BigInt::from(v));
    // Hand expansion of the product:
    // (3x²+3y²−4z²−4w²)(x³−3xy²) = 3x⁵ − 6x³y² − 9xy⁴ − 4x³z² − 4x³w²
    //                              + 12xy²z² + 12xy²w², then × 2zw.
    let expected = HarmonicPolynomial::from_terms(
        7,
        [
            ([5, 0, 1, 1], int(6)),
            ([3, 2, 1, 1], int(-12)),
            ([1, 4, 1, 1], int(-18)),
            ([3, 0, 3, 1], int(-8)),
            ([3, 0, 1, 3], int(-8)),
            ([1, 2, 3, 1], int(24)),
            ([1, 2, 1, 3], int(24)),
        ],
    )
    .unwrap();
    let built = to_polynomial(&ModeIndex::new(7, 3, -2).unwrap());
    let pass = built == expected;
    conclude(
        6,
        "worked example (7,3,-2)",
        started,
        Duration::from_secs(1),
        pass,
        &format!("{} terms compared exactly", expected.term_count()),
    );
}

/// Criterion 7: every emitted basis vector is pointwise invariant under its
/// space's generator(s) within 1e-10 at 100 seeded points (lens p ≤ 9,
/// prism n ≤ 4 under both generators, k ≤ 10).
#[test]
fn criterion_7_invariance() {
    let started = Instant::now();
    let points = random_points(100, 0, 0.0);
    let mut spaces = Vec::new();
    for p in 2..=9i64 {
        for q in 1..p {
            if let Ok(space) = QuotientSpace::lens(p, q) {
                spaces.push(space);
            }
        }
    }
    for n in 1..=4i64 {
        spaces.push(QuotientSpace::prism(n).unwrap());
    }
    let mut worst = 0.0f64;
    let mut vectors = 0;
    for space in &spaces {
        for k in 0..=10u32 {
            for vector in space.basis(k) {
                vectors += 1;
                worst = worst.max(invariance_residual(space, &vector, &points));
            }
        }
    }
    conclude(
        7,
        "invariance",
        started,
        Duration::from_secs(60),
        worst <= 1e-10,
        &format!("max residual {worst:.3e} over {vectors} vectors (seed 0)"),
    );
}

/// Criterion 8: the group-averaged character trace rounds to the exact lens
/// multiplicity for p ≤ 12, k ≤ 14, with pre-round deviation ≤ 1e-8.
#[test]
fn criterion_8_trace_oracle() {
    let started = Instant::now();
    let mut pass = true;
    let mut worst_deviation = 0.0f64;
    for p in 1..=12i64 {
        for q in 0..p.max(1) {
            if QuotientSpace::lens(p, q).is_err() {
                continue;
            }
            let generator = TorusIsometry::from_fractions(1, p, q, p);
            for k in 0..=14u32 {
                let total: f64 = (0..p as u32)
                    .map(|j| character_trace(&generator.pow(j), k))
                    .sum();
                let average = total / p as f64;
                let expected = lens_multiplicity(p, q, k).unwrap();
                let deviation = (average - expected as f64).abs();
                worst_deviation = worst_deviation.max(deviation);
                if deviation > 1e-8 || average.round() as u64 != expected {
                    pass = false;
                }
            }
        }
    }
    conclude(
        8,
        "trace oracle",
        started,
        Duration::from_secs(10),
        pass,
        &format!("max pre-round deviation {worst_deviation:.3e}"),
    );
}

/// Criterion 9: finite-difference Helmholtz residuals for all modes k ≤ 8 at
/// seeded interior points are ≤ 1e-2 at h = 1e-3 and decay second-order
/// (ratio in [3.5, 4.5]) under h → h/2.
#[test]
fn criterion_9_helmholtz_residual() {
    let started = Instant::now();
    let h = 1e-3;
    let points = random_points(100, 0, 0.3);
    let mut worst = 0.0f64;
    let mut worst_ratio_distance = 0.0f64;
    let mut pass = true;
    for k in 0..=8u32 {
        for idx in enumerate_basis(k) {
            let mut peak: Option<(usize, f64)> = None;
            for (i, p) in points.iter().enumerate() {
                let r = helmholtz_residual(&idx, p, h).unwrap();
                worst = worst.max(r.abs());
                if peak.is_none_or(|(_, best)| r.abs() > best.abs()) {
                    peak = Some((i, r));
                }
            }
            let (peak_index, coarse) = peak.unwrap();
            if coarse.abs() >= 1e-9 {
                let fine = helmholtz_residual(&idx, &points[peak_index], h / 2.0).unwrap();
                let ratio = coarse / fine;
                worst_ratio_distance = worst_ratio_distance.max((ratio - 4.0).abs());
                if !(3.5..=4.5).contains(&ratio) {
                    pass = false;
                }
            }
        }
    }
    if worst > 1e-2 {
        pass = false;
    }
    conclude(
        9,
        "helmholtz residual",
        started,
        Duration::from_secs(30),
        pass,
        &format!(
            "max residual {worst:.3e} at h=1e-3; decay ratios within {worst_ratio_distance:.2} of 4 (seed 0)"
        ),
    );
}

/// Criterion 10: closed-form normalization constants agree with quadrature
/// norms within 1e-11 for k ≤ 10, including the ℓ̂/m̂ special cases.
#[test]
fn criterion_10_norms_vs_quadrature() {
    let started = Instant::now();
    let rule = build_rule(10);
    let mut worst = 0.0f64;
    for k in 0..=10u32 {
        for idx in enumerate_basis(k) {
            let f = ModeFunction::unnormalized(idx);
            let quadrature_norm = inner_product(&f, &f, &rule).sqrt();
            let closed_form = spaceform_modes::modes::normalization_constant(&idx);
            worst = worst.max((quadrature_norm - closed_form).abs());
        }
    }
    conclude(
        10,
        "norms vs quadrature",
        started,
        Duration::from_secs(30),
        worst <= 1e-11,
        &format!("max |N_quad − N_closed| = {worst:.3e} over k ≤ 10"),
    );
}
