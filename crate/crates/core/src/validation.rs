//! Numerical oracles: quadrature inner products on S³, Gram matrices,
//! finite-difference Helmholtz residuals, invariance residuals, and the
//! reference multiplicity tables the verification suites check against.
//!
//! The volume element in toroidal coordinates is cos χ sin χ dχ dθ dφ, so
//! with u = cos 2χ the χ-integral becomes (1/4)∫₋₁¹ … du and a product of two
//! modes with wave numbers ≤ k_max is a polynomial of degree ≤ k_max in u.
//! Gauss–Legendre nodes in u combined with uniform nodes in θ and φ therefore
//! integrate every such product exactly up to rounding; the tolerances in the
//! test suites reflect rounding only.
//!
//! The quadrature exists to check closed forms, never to define them: norms
//! and multiplicities are computed exactly elsewhere and compared against
//! these sums.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use serde::Serialize;
use thiserror::Error;

use crate::geometry::ToroidalPoint;
use crate::modes::{BasisVector, ModeFunction, ModeIndex, SphereFunction};
use crate::quotient::QuotientSpace;

#[derive(Debug, Error, PartialEq)]
pub enum ValidationError {
    #[error("chi = {chi} is within {delta} of a collapsed circle; the stencil needs [delta, pi/2 - delta]")]
    TooNearCollapsedCircle { chi: f64, delta: f64 },
}

/// Gauss–Legendre nodes and weights on [−1, 1].
///
/// Newton iteration on the recurrence-evaluated Legendre polynomial; the
/// usual cosine initial guesses converge in a handful of steps.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..60 {
            let (p, dp) = legendre_with_derivative(n, x);
            let step = p / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut previous = 1.0;
    let mut current = x;
    for j in 1..n {
        let next = ((2 * j + 1) as f64 * x * current - j as f64 * previous) / (j as f64 + 1.0);
        previous = current;
        current = next;
    }
    let derivative = n as f64 * (x * current - previous) / (x * x - 1.0);
    (current, derivative)
}

/// Product quadrature rule for ∫_{S³} f dV: Gauss–Legendre in u = cos 2χ,
/// uniform in θ and φ. Total weight is the volume 2π².
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub n_chi: usize,
    pub n_theta: usize,
    pub n_phi: usize,
    nodes: Vec<(ToroidalPoint, f64)>,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[(ToroidalPoint, f64)] {
        &self.nodes
    }

    pub fn total_weight(&self) -> f64 {
        compensated_sum(self.nodes.iter().map(|(_, w)| *w))
    }
}

/// Builds a rule exact (to rounding) for every product of two modes with
/// wave numbers ≤ k_max: k_max+1 Gauss nodes in u and 2·k_max+1 uniform
/// nodes in each circle angle.
pub fn build_rule(k_max: u32) -> QuadratureRule {
    let n_chi = k_max as usize + 1;
    let n_circle = 2 * k_max as usize + 1;
    let (u_nodes, u_weights) = gauss_legendre(n_chi);
    let circle_weight = TAU / n_circle as f64;
    let mut nodes = Vec::with_capacity(n_chi * n_circle * n_circle);
    for (&u, &wu) in u_nodes.iter().zip(u_weights.iter()) {
        // u = cos 2χ, so cos χ sin χ dχ = −du/4 and χ = arccos(u)/2.
        let chi = u.acos() / 2.0;
        let w_chi = wu / 4.0;
        for jt in 0..n_circle {
            let theta = TAU * jt as f64 / n_circle as f64;
            for jp in 0..n_circle {
                let phi = TAU * jp as f64 / n_circle as f64;
                nodes.push((
                    ToroidalPoint { chi, theta, phi },
                    w_chi * circle_weight * circle_weight,
                ));
            }
        }
    }
    QuadratureRule {
        n_chi,
        n_theta: n_circle,
        n_phi: n_circle,
        nodes,
    }
}

fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut compensation = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            compensation += (sum - t) + v;
        } else {
            compensation += (v - t) + sum;
        }
        sum = t;
    }
    sum + compensation
}

/// ⟨f, g⟩ = ∫_{S³} f·g dV by the product rule.
pub fn inner_product<F, G>(f: &F, g: &G, rule: &QuadratureRule) -> f64
where
    F: SphereFunction,
    G: SphereFunction,
{
    compensated_sum(rule.nodes.iter().map(|(p, w)| w * f.value(p) * g.value(p)))
}

/// Pairwise inner products of the given functions. Values are evaluated once
/// per node, then combined.
pub fn gram_matrix<F: SphereFunction>(functions: &[F], rule: &QuadratureRule) -> Vec<Vec<f64>> {
    let values: Vec<Vec<f64>> = functions
        .iter()
        .map(|f| rule.nodes.iter().map(|(p, _)| f.value(p)).collect())
        .collect();
    let weights: Vec<f64> = rule.nodes.iter().map(|(_, w)| *w).collect();
    let n = functions.len();
    let mut gram = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let entry = compensated_sum(
                weights
                    .iter()
                    .zip(values[i].iter().zip(values[j].iter()))
                    .map(|(w, (a, b))| w * a * b),
            );
            gram[i][j] = entry;
            gram[j][i] = entry;
        }
    }
    gram
}

/// Largest |G_ij − δ_ij| over the matrix.
pub fn max_identity_deviation(gram: &[Vec<f64>]) -> f64 {
    let mut worst = 0.0f64;
    for (i, row) in gram.iter().enumerate() {
        for (j, &entry) in row.iter().enumerate() {
            let expected = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((entry - expected).abs());
        }
    }
    worst
}

/// Central-difference residual of the toroidal Helmholtz equation at p:
///
/// ```text
/// (1/(cos χ sin χ)) [ ∂χ (cos χ sin χ ∂χ Ψ) ] + (1/cos²χ) ∂²θ Ψ + (1/sin²χ) ∂²φ Ψ  +  k(k+2) Ψ
/// ```
///
/// discretized with step h (the χ term in conservative flux form), applied to
/// the unnormalized mode. Requires χ ∈ [δ, π/2 − δ] with δ = 10h; the
/// magnitude is O(h²) on that interior.
pub fn helmholtz_residual(
    idx: &ModeIndex,
    p: &ToroidalPoint,
    h: f64,
) -> Result<f64, ValidationError> {
    let delta = 10.0 * h;
    if p.chi < delta || p.chi > PI / 2.0 - delta {
        return Err(ValidationError::TooNearCollapsedCircle { chi: p.chi, delta });
    }
    let f = ModeFunction::unnormalized(*idx);
    let at = |chi: f64, theta: f64, phi: f64| f.value(&ToroidalPoint { chi, theta, phi });
    let (chi, theta, phi) = (p.chi, p.theta, p.phi);
    let volume_factor = |c: f64| c.cos() * c.sin();

    let center = at(chi, theta, phi);
    let flux_plus = volume_factor(chi + h / 2.0) * (at(chi + h, theta, phi) - center);
    let flux_minus = volume_factor(chi - h / 2.0) * (center - at(chi - h, theta, phi));
    let chi_term = (flux_plus - flux_minus) / (h * h * volume_factor(chi));

    let theta_second = (at(chi, theta + h, phi) - 2.0 * center + at(chi, theta - h, phi)) / (h * h);
    let phi_second = (at(chi, theta, phi + h) - 2.0 * center + at(chi, theta, phi - h)) / (h * h);
    let laplacian =
        chi_term + theta_second / (chi.cos() * chi.cos()) + phi_second / (chi.sin() * chi.sin());

    Ok(laplacian + idx.eigenvalue() as f64 * center)
}

/// Max over the space's generators and the given points of |f(g·p) − f(p)|,
/// where f is the (normalized-mode) function of the vector.
pub fn invariance_residual(
    space: &QuotientSpace,
    vector: &BasisVector,
    points: &[ToroidalPoint],
) -> f64 {
    let f = vector.function();
    let mut worst = 0.0f64;
    for generator in space.generators() {
        for p in points {
            let moved = generator.apply(p);
            worst = worst.max((f.value(&moved) - f.value(p)).abs());
        }
    }
    worst
}

/// Seeded uniform points with χ in [margin, π/2 − margin].
pub fn random_points(count: usize, seed: u64, chi_margin: f64) -> Vec<ToroidalPoint> {
    assert!(chi_margin >= 0.0 && 2.0 * chi_margin < PI / 2.0);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| ToroidalPoint {
            chi: rng.gen_range(chi_margin..(PI / 2.0 - chi_margin)),
            theta: rng.gen_range(0.0..TAU),
            phi: rng.gen_range(0.0..TAU),
        })
        .collect()
}

/// Outcome of one verification suite, serialized as the report JSON.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub max_residual: f64,
    pub pass: bool,
    pub seed: u64,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

/// One row of the reference lens-space spectra: multiplicities of k(k+2) for
/// k = 0..=14. The sphere appears as L(1,0).
#[derive(Debug, Clone, Copy)]
pub struct ReferenceLensRow {
    pub label: &'static str,
    pub p: i64,
    pub q: i64,
    pub multiplicities: [u64; 15],
}

/// Reference eigenvalue multiplicities for the sphere and the lens spaces
/// with p ≤ 9, k ≤ 14.
pub fn reference_lens_spectra() -> &'static [ReferenceLensRow] {
    const ROWS: [ReferenceLensRow; 13] = [
        ReferenceLensRow {
            label: "s3",
            p: 1,
            q: 0,
            multiplicities: [
                1, 4, 9, 16, 25, 36, 49, 64, 81, 100, 121, 144, 169, 196, 225,
            ],
        },
        ReferenceLensRow {
            label: "lens:2,1",
            p: 2,
            q: 1,
            multiplicities: [1, 0, 9, 0, 25, 0, 49, 0, 81, 0, 121, 0, 169, 0, 225],
        },
        ReferenceLensRow {
            label: "lens:3,1",
            p: 3,
            q: 1,
            multiplicities: [1, 0, 3, 8, 5, 12, 21, 16, 27, 40, 33, 48, 65, 56, 75],
        },
        ReferenceLensRow {
            label: "lens:4,1",
            p: 4,
            q: 1,
            multiplicities: [1, 0, 3, 0, 15, 0, 21, 0, 45, 0, 55, 0, 91, 0, 105],
        },
        ReferenceLensRow {
            label: "lens:5,1",
            p: 5,
            q: 1,
            multiplicities: [1, 0, 3, 0, 5, 12, 7, 16, 9, 20, 33, 24, 39, 28, 45],
        },
        ReferenceLensRow {
            label: "lens:5,2",
            p: 5,
            q: 2,
            multiplicities: [1, 0, 1, 4, 5, 8, 9, 12, 17, 20, 25, 28, 33, 40, 45],
        },
        ReferenceLensRow {
            label: "lens:6,1",
            p: 6,
            q: 1,
            multiplicities: [1, 0, 3, 0, 5, 0, 21, 0, 27, 0, 33, 0, 65, 0, 75],
        },
        ReferenceLensRow {
            label: "lens:7,1",
            p: 7,
            q: 1,
            multiplicities: [1, 0, 3, 0, 5, 0, 7, 16, 9, 20, 11, 24, 13, 28, 45],
        },
        ReferenceLensRow {
            label: "lens:7,2",
            p: 7,
            q: 2,
            multiplicities: [1, 0, 1, 2, 3, 6, 7, 10, 11, 14, 17, 20, 25, 28, 33],
        },
        ReferenceLensRow {
            label: "lens:8,1",
            p: 8,
            q: 1,
            multiplicities: [1, 0, 3, 0, 5, 0, 7, 0, 27, 0, 33, 0, 39, 0, 45],
        },
        ReferenceLensRow {
            label: "lens:8,3",
            p: 8,
            q: 3,
            multiplicities: [1, 0, 1, 0, 7, 0, 11, 0, 23, 0, 27, 0, 45, 0, 53],
        },
        ReferenceLensRow {
            label: "lens:9,1",
            p: 9,
            q: 1,
            multiplicities: [1, 0, 3, 0, 5, 0, 7, 0, 9, 20, 11, 24, 13, 28, 15],
        },
        ReferenceLensRow {
            label: "lens:9,2",
            p: 9,
            q: 2,
            multiplicities: [1, 0, 1, 2, 1, 4, 7, 6, 9, 14, 11, 16, 21, 18, 25],
        },
    ];
    &ROWS
}
