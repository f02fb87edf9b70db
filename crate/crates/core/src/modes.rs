//! The separated-variable eigenmodes of the Laplacian on S³ and the basis
//! B_k they form.
//!
//! A mode is indexed by integers (k, ℓ, m) with |ℓ| + |m| ≤ k and
//! ℓ + m ≡ k (mod 2). In toroidal coordinates it factors as
//!
//! ```text
//! Ψ̃_{kℓm}(χ, θ, φ) = cos^|ℓ|χ · sin^|m|χ · P_d^(|m|,|ℓ|)(cos 2χ) · Θ_ℓ(θ) · Φ_m(φ)
//! ```
//!
//! with d = (k − |ℓ| − |m|)/2 and eigenvalue −k(k+2). The circular factors
//! follow the sign convention used throughout this crate and by every
//! selection-rule table built on top of it:
//!
//! > **nonnegative index ⇒ cosine, negative index ⇒ sine**,
//!
//! i.e. Θ_ℓ = cos(|ℓ|θ) for ℓ ≥ 0 and sin(|ℓ|θ) for ℓ < 0, and likewise for
//! Φ_m in φ. Do not change this convention: the quotient-space bases encode
//! it in their coefficient signs.
//!
//! For each k the set B_k = {Ψ̃_{kℓm}} has exactly (k+1)² elements, is
//! pairwise orthogonal, and spans the full eigenspace; dividing by the
//! closed-form norms yields an orthonormal basis.

use std::f64::consts::PI;

use num_rational::Rational64;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::geometry::ToroidalPoint;
use crate::jacobi::{self, JacobiParams};

#[derive(Debug, Error, PartialEq)]
pub enum ModeIndexError {
    #[error("|l| + |m| = {reach} exceeds k = {k}")]
    ReachExceedsWaveNumber { k: i64, reach: i64 },
    #[error("l + m = {sum} and k = {k} have different parity")]
    ParityMismatch { k: i64, sum: i64 },
    #[error("wave number {k} is negative")]
    NegativeWaveNumber { k: i64 },
}

/// Index (k, ℓ, m) of the eigenmode Ψ_{kℓm}; validated at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeIndex {
    k: u32,
    l: i32,
    m: i32,
}

impl ModeIndex {
    pub fn new(k: i64, l: i64, m: i64) -> Result<Self, ModeIndexError> {
        if k < 0 {
            return Err(ModeIndexError::NegativeWaveNumber { k });
        }
        let reach = l.abs() + m.abs();
        if reach > k {
            return Err(ModeIndexError::ReachExceedsWaveNumber { k, reach });
        }
        if (l + m - k).rem_euclid(2) != 0 {
            return Err(ModeIndexError::ParityMismatch { k, sum: l + m });
        }
        Ok(Self {
            k: k as u32,
            l: l as i32,
            m: m as i32,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn l(&self) -> i32 {
        self.l
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    /// d = (k − |ℓ| − |m|)/2, the degree of the Jacobi factor.
    pub fn depth(&self) -> u32 {
        (self.k - self.l.unsigned_abs() - self.m.unsigned_abs()) / 2
    }

    /// ℓ̂ = 1 when ℓ = 0, else 0 (the θ-integral special case marker).
    pub fn l_hat(&self) -> u32 {
        u32::from(self.l == 0)
    }

    /// m̂ = 1 when m = 0, else 0.
    pub fn m_hat(&self) -> u32 {
        u32::from(self.m == 0)
    }

    /// Laplacian eigenvalue magnitude k(k+2); the eigenvalue itself is −k(k+2).
    pub fn eigenvalue(&self) -> u64 {
        u64::from(self.k) * (u64::from(self.k) + 2)
    }

    fn jacobi_params(&self) -> JacobiParams {
        JacobiParams::new(self.depth(), self.m.unsigned_abs(), self.l.unsigned_abs())
    }
}

impl std::fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Psi({},{},{})", self.k, self.l, self.m)
    }
}

/// Θ_ℓ(θ): cos(|ℓ|θ) for ℓ ≥ 0, sin(|ℓ|θ) for ℓ < 0.
pub fn circular_theta(l: i32, theta: f64) -> f64 {
    let arg = f64::from(l.unsigned_abs()) * theta;
    if l >= 0 {
        arg.cos()
    } else {
        arg.sin()
    }
}

/// Φ_m(φ): cos(|m|φ) for m ≥ 0, sin(|m|φ) for m < 0.
pub fn circular_phi(m: i32, phi: f64) -> f64 {
    circular_theta(m, phi)
}

/// Radial factor X_{kℓm}(χ) = cos^|ℓ|χ · sin^|m|χ · P_d^(|m|,|ℓ|)(cos 2χ).
pub fn radial(idx: &ModeIndex, chi: f64) -> f64 {
    let la = idx.l.unsigned_abs() as i32;
    let ma = idx.m.unsigned_abs() as i32;
    chi.cos().powi(la)
        * chi.sin().powi(ma)
        * jacobi::jacobi_eval(idx.jacobi_params(), (2.0 * chi).cos())
}

/// Ψ̃_{kℓm}(p) = X(χ) Θ_ℓ(θ) Φ_m(φ), without normalization.
pub fn mode_unnormalized(idx: &ModeIndex, p: &ToroidalPoint) -> f64 {
    radial(idx, p.chi) * circular_theta(idx.l, p.theta) * circular_phi(idx.m, p.phi)
}

/// The L² norm of Ψ̃_{kℓm} over S³:
/// √(2^(ℓ̂+m̂) · π² · (|ℓ|+d)!(|m|+d)! / (2(k+1)·d!·(|ℓ|+|m|+d)!)).
///
/// The 2^(ℓ̂+m̂) accounts for the circle integrals being 2π instead of π when
/// the corresponding circular factor is constant.
pub fn normalization_constant(idx: &ModeIndex) -> f64 {
    let factor = jacobi::jacobi_norm_factor(i64::from(idx.k), i64::from(idx.l), i64::from(idx.m))
        .expect("ModeIndex invariants guarantee a valid triple");
    let factor = factor
        .to_f64()
        .expect("norm factor within f64 range for supported k");
    let two_pow = f64::powi(2.0, (idx.l_hat() + idx.m_hat()) as i32);
    (two_pow * PI * PI * factor).sqrt()
}

/// Ψ_{kℓm}(p) = Ψ̃_{kℓm}(p) / ‖Ψ̃_{kℓm}‖.
pub fn mode_normalized(idx: &ModeIndex, p: &ToroidalPoint) -> f64 {
    mode_unnormalized(idx, p) / normalization_constant(idx)
}

/// All of B_k in a fixed, documented order: ascending |ℓ|, within that the
/// sign + before −, then the same for m. The list has exactly (k+1)² entries.
pub fn enumerate_basis(k: u32) -> Vec<ModeIndex> {
    let mut out = Vec::with_capacity(((k + 1) * (k + 1)) as usize);
    for la in 0..=k {
        let l_values: &[i64] = if la == 0 {
            &[0]
        } else {
            &[la as i64, -(la as i64)]
        };
        for &l in l_values {
            let m_max = k - la;
            for ma in 0..=m_max {
                // Parity: m must make l + m ≡ k (mod 2).
                if (la + ma) % 2 != k % 2 {
                    continue;
                }
                let m_values: &[i64] = if ma == 0 {
                    &[0]
                } else {
                    &[ma as i64, -(ma as i64)]
                };
                for &m in m_values {
                    out.push(
                        ModeIndex::new(i64::from(k), l, m)
                            .expect("enumeration only visits valid triples"),
                    );
                }
            }
        }
    }
    out
}

/// A real function on S³ given in toroidal coordinates. Implemented by the
/// cached mode/vector evaluators and by plain closures.
pub trait SphereFunction {
    fn value(&self, p: &ToroidalPoint) -> f64;
}

impl<F: Fn(&ToroidalPoint) -> f64> SphereFunction for F {
    fn value(&self, p: &ToroidalPoint) -> f64 {
        self(p)
    }
}

/// A single mode with its Jacobi coefficients converted to f64 once, for hot
/// loops (quadrature grids, residual stencils).
#[derive(Debug, Clone)]
pub struct ModeFunction {
    idx: ModeIndex,
    coefficients: Vec<f64>,
    scale: f64,
}

impl ModeFunction {
    pub fn unnormalized(idx: ModeIndex) -> Self {
        Self::with_scale(idx, 1.0)
    }

    pub fn normalized(idx: ModeIndex) -> Self {
        let n = normalization_constant(&idx);
        Self::with_scale(idx, 1.0 / n)
    }

    fn with_scale(idx: ModeIndex, scale: f64) -> Self {
        let coefficients = idx
            .jacobi_params()
            .term_coefficients()
            .iter()
            .map(|c| c.to_f64().expect("binomial coefficient overflows f64"))
            .collect();
        Self {
            idx,
            coefficients,
            scale,
        }
    }

    pub fn index(&self) -> ModeIndex {
        self.idx
    }
}

impl SphereFunction for ModeFunction {
    fn value(&self, p: &ToroidalPoint) -> f64 {
        let idx = &self.idx;
        let la = idx.l.unsigned_abs() as i32;
        let ma = idx.m.unsigned_abs() as i32;
        let jac = jacobi::jacobi_sum(&self.coefficients, idx.depth(), (2.0 * p.chi).cos());
        self.scale
            * p.chi.cos().powi(la)
            * p.chi.sin().powi(ma)
            * jac
            * circular_theta(idx.l, p.theta)
            * circular_phi(idx.m, p.phi)
    }
}

/// Exact coefficient of a basis-vector component. The selection-rule tables
/// only ever need ±1, ±√(1/2) and ±1/2, so the value is kept symbolic and
/// its square is exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coefficient {
    PlusOne,
    MinusOne,
    PlusSqrtHalf,
    MinusSqrtHalf,
    PlusHalf,
    MinusHalf,
}

impl Coefficient {
    pub fn value(self) -> f64 {
        match self {
            Coefficient::PlusOne => 1.0,
            Coefficient::MinusOne => -1.0,
            Coefficient::PlusSqrtHalf => std::f64::consts::FRAC_1_SQRT_2,
            Coefficient::MinusSqrtHalf => -std::f64::consts::FRAC_1_SQRT_2,
            Coefficient::PlusHalf => 0.5,
            Coefficient::MinusHalf => -0.5,
        }
    }

    /// The exact square of the coefficient.
    pub fn squared(self) -> Rational64 {
        match self {
            Coefficient::PlusOne | Coefficient::MinusOne => Rational64::new(1, 1),
            Coefficient::PlusSqrtHalf | Coefficient::MinusSqrtHalf => Rational64::new(1, 2),
            Coefficient::PlusHalf | Coefficient::MinusHalf => Rational64::new(1, 4),
        }
    }

    pub fn negate(self) -> Self {
        match self {
            Coefficient::PlusOne => Coefficient::MinusOne,
            Coefficient::MinusOne => Coefficient::PlusOne,
            Coefficient::PlusSqrtHalf => Coefficient::MinusSqrtHalf,
            Coefficient::MinusSqrtHalf => Coefficient::PlusSqrtHalf,
            Coefficient::PlusHalf => Coefficient::MinusHalf,
            Coefficient::MinusHalf => Coefficient::PlusHalf,
        }
    }

    pub fn with_sign(self, positive: bool) -> Self {
        if positive {
            self
        } else {
            self.negate()
        }
    }
}

impl std::fmt::Display for Coefficient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Coefficient::PlusOne => "1",
            Coefficient::MinusOne => "-1",
            Coefficient::PlusSqrtHalf => "sqrt(1/2)",
            Coefficient::MinusSqrtHalf => "-sqrt(1/2)",
            Coefficient::PlusHalf => "1/2",
            Coefficient::MinusHalf => "-1/2",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Coefficient {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "1" => Ok(Coefficient::PlusOne),
            "-1" => Ok(Coefficient::MinusOne),
            "sqrt(1/2)" => Ok(Coefficient::PlusSqrtHalf),
            "-sqrt(1/2)" => Ok(Coefficient::MinusSqrtHalf),
            "1/2" => Ok(Coefficient::PlusHalf),
            "-1/2" => Ok(Coefficient::MinusHalf),
            other => Err(format!("unknown coefficient {other:?}")),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum BasisVectorError {
    #[error("basis vector must have at least one component")]
    Empty,
    #[error("components mix wave numbers {first} and {second}")]
    MixedWaveNumbers { first: u32, second: u32 },
    #[error("component {0} appears twice")]
    DuplicateComponent(ModeIndex),
    #[error("squared coefficients sum to {0}, not 1")]
    NotUnitNorm(Rational64),
}

/// A unit-norm linear combination of normalized modes sharing one wave
/// number — one row entry of the quotient-space eigenbasis tables.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisVector {
    components: Vec<(ModeIndex, Coefficient)>,
}

impl BasisVector {
    pub fn new(components: Vec<(ModeIndex, Coefficient)>) -> Result<Self, BasisVectorError> {
        let first = components.first().ok_or(BasisVectorError::Empty)?.0.k();
        let mut squared_sum = Rational64::new(0, 1);
        for (i, (idx, coefficient)) in components.iter().enumerate() {
            if idx.k() != first {
                return Err(BasisVectorError::MixedWaveNumbers {
                    first,
                    second: idx.k(),
                });
            }
            if components[..i].iter().any(|(other, _)| other == idx) {
                return Err(BasisVectorError::DuplicateComponent(*idx));
            }
            squared_sum += coefficient.squared();
        }
        if squared_sum != Rational64::new(1, 1) {
            return Err(BasisVectorError::NotUnitNorm(squared_sum));
        }
        Ok(Self { components })
    }

    /// The vector consisting of a single normalized mode.
    pub fn single(idx: ModeIndex) -> Self {
        Self {
            components: vec![(idx, Coefficient::PlusOne)],
        }
    }

    pub fn components(&self) -> &[(ModeIndex, Coefficient)] {
        &self.components
    }

    pub fn wave_number(&self) -> u32 {
        self.components[0].0.k()
    }

    /// Evaluates Σ cᵢ Ψ_i(p) over the **normalized** modes.
    pub fn evaluate(&self, p: &ToroidalPoint) -> f64 {
        self.components
            .iter()
            .map(|(idx, c)| c.value() * mode_normalized(idx, p))
            .sum()
    }

    /// A cached evaluator for repeated evaluation.
    pub fn function(&self) -> BasisFunction {
        BasisFunction {
            terms: self
                .components
                .iter()
                .map(|(idx, c)| (c.value(), ModeFunction::normalized(*idx)))
                .collect(),
        }
    }
}

/// Cached evaluator for a [`BasisVector`].
#[derive(Debug, Clone)]
pub struct BasisFunction {
    terms: Vec<(f64, ModeFunction)>,
}

impl SphereFunction for BasisFunction {
    fn value(&self, p: &ToroidalPoint) -> f64 {
        self.terms.iter().map(|(c, f)| c * f.value(p)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::to_cartesian;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::TAU;

    pub(crate) fn random_points(count: usize, seed: u64) -> Vec<ToroidalPoint> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| ToroidalPoint {
                chi: rng.gen_range(0.0..PI / 2.0),
                theta: rng.gen_range(0.0..TAU),
                phi: rng.gen_range(0.0..TAU),
            })
            .collect()
    }

    #[test]
    fn mode_index_validation() {
        assert!(ModeIndex::new(7, 3, -2).is_ok());
        assert!(ModeIndex::new(1, 1, 1).is_err());
        assert!(ModeIndex::new(2, 2, 1).is_err());
        assert!(ModeIndex::new(-1, 0, 0).is_err());
        let idx = ModeIndex::new(7, 3, -2).unwrap();
        assert_eq!(idx.depth(), 1);
        assert_eq!((idx.l_hat(), idx.m_hat()), (0, 0));
        assert_eq!(idx.eigenvalue(), 63);
    }

    #[test]
    fn radial_examples() {
        let constant = ModeIndex::new(0, 0, 0).unwrap();
        let cos_mode = ModeIndex::new(1, 1, 0).unwrap();
        let cos2_mode = ModeIndex::new(2, 0, 0).unwrap();
        for chi in [0.0, 0.3, PI / 4.0, 1.2, PI / 2.0] {
            assert_abs_diff_eq!(radial(&constant, chi), 1.0);
            assert_abs_diff_eq!(radial(&cos_mode, chi), chi.cos(), epsilon = 1e-15);
            assert_abs_diff_eq!(radial(&cos2_mode, chi), (2.0 * chi).cos(), epsilon = 1e-15);
        }
    }

    #[test]
    fn circular_sign_convention() {
        assert_eq!(circular_theta(0, 1.7), 1.0);
        assert_abs_diff_eq!(circular_theta(2, PI / 4.0), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(circular_theta(-3, PI / 6.0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(circular_phi(-3, PI / 6.0), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn constant_mode_is_one() {
        let idx = ModeIndex::new(0, 0, 0).unwrap();
        for p in random_points(20, 1) {
            assert_eq!(mode_unnormalized(&idx, &p), 1.0);
        }
    }

    #[test]
    fn mode_1_0_1_is_the_z_coordinate() {
        let idx = ModeIndex::new(1, 0, 1).unwrap();
        for p in random_points(100, 2) {
            let z = to_cartesian(&p).z;
            assert_abs_diff_eq!(mode_unnormalized(&idx, &p), z, epsilon = 1e-14);
        }
    }

    #[test]
    fn mode_7_3_m2_matches_polynomial_product() {
        // Ψ̃_{7,3,-2} = [3(x²+y²) − 4(z²+w²)]·[x³ − 3xy²]·[2zw]
        let idx = ModeIndex::new(7, 3, -2).unwrap();
        for p in random_points(100, 3) {
            let c = to_cartesian(&p);
            let expected = (3.0 * (c.x * c.x + c.y * c.y) - 4.0 * (c.z * c.z + c.w * c.w))
                * (c.x.powi(3) - 3.0 * c.x * c.y * c.y)
                * (2.0 * c.z * c.w);
            assert_abs_diff_eq!(mode_unnormalized(&idx, &p), expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn normalization_examples() {
        let n000 = normalization_constant(&ModeIndex::new(0, 0, 0).unwrap());
        assert_abs_diff_eq!(n000, (2.0 * PI * PI).sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(n000, 4.442882938158366, epsilon = 1e-12);

        let n110 = normalization_constant(&ModeIndex::new(1, 1, 0).unwrap());
        assert_abs_diff_eq!(n110, PI / 2.0f64.sqrt(), epsilon = 1e-14);

        let n2m1m1 = normalization_constant(&ModeIndex::new(2, -1, -1).unwrap());
        assert_abs_diff_eq!(n2m1m1, PI / 12.0f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn basis_counts() {
        assert_eq!(enumerate_basis(0), vec![ModeIndex::new(0, 0, 0).unwrap()]);
        let b1 = enumerate_basis(1);
        assert_eq!(b1.len(), 4);
        assert_eq!(
            b1,
            vec![
                ModeIndex::new(1, 0, 1).unwrap(),
                ModeIndex::new(1, 0, -1).unwrap(),
                ModeIndex::new(1, 1, 0).unwrap(),
                ModeIndex::new(1, -1, 0).unwrap(),
            ]
        );
        assert_eq!(enumerate_basis(5).len(), 36);
        for k in 0..=50u32 {
            assert_eq!(enumerate_basis(k).len() as u64, u64::from(k + 1).pow(2));
        }
    }

    #[test]
    fn cached_mode_function_matches_direct_evaluation() {
        for idx in enumerate_basis(6) {
            let f = ModeFunction::unnormalized(idx);
            let g = ModeFunction::normalized(idx);
            for p in random_points(20, 5) {
                assert_abs_diff_eq!(f.value(&p), mode_unnormalized(&idx, &p), epsilon = 1e-14);
                assert_abs_diff_eq!(g.value(&p), mode_normalized(&idx, &p), epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn basis_vector_validation() {
        let a = ModeIndex::new(4, 2, 2).unwrap();
        let b = ModeIndex::new(4, -2, -2).unwrap();
        assert!(BasisVector::new(vec![
            (a, Coefficient::PlusSqrtHalf),
            (b, Coefficient::MinusSqrtHalf)
        ])
        .is_ok());
        assert!(matches!(
            BasisVector::new(vec![(a, Coefficient::PlusSqrtHalf)]),
            Err(BasisVectorError::NotUnitNorm(_))
        ));
        assert!(matches!(
            BasisVector::new(vec![
                (a, Coefficient::PlusSqrtHalf),
                (a, Coefficient::MinusSqrtHalf)
            ]),
            Err(BasisVectorError::DuplicateComponent(_))
        ));
        let other_k = ModeIndex::new(2, 0, 0).unwrap();
        assert!(matches!(
            BasisVector::new(vec![
                (a, Coefficient::PlusSqrtHalf),
                (other_k, Coefficient::MinusSqrtHalf)
            ]),
            Err(BasisVectorError::MixedWaveNumbers { .. })
        ));
        assert!(matches!(
            BasisVector::new(vec![]),
            Err(BasisVectorError::Empty)
        ));
    }

    #[test]
    fn basis_vector_evaluation_matches_function() {
        let v = BasisVector::new(vec![
            (ModeIndex::new(4, 3, 1).unwrap(), Coefficient::PlusHalf),
            (ModeIndex::new(4, -3, -1).unwrap(), Coefficient::MinusHalf),
            (ModeIndex::new(4, 1, 3).unwrap(), Coefficient::PlusHalf),
            (ModeIndex::new(4, -1, -3).unwrap(), Coefficient::MinusHalf),
        ])
        .unwrap();
        let f = v.function();
        for p in random_points(50, 9) {
            assert_abs_diff_eq!(v.evaluate(&p), f.value(&p), epsilon = 1e-13);
        }
    }

    #[test]
    fn coefficient_round_trip_and_values() {
        for c in [
            Coefficient::PlusOne,
            Coefficient::MinusOne,
            Coefficient::PlusSqrtHalf,
            Coefficient::MinusSqrtHalf,
            Coefficient::PlusHalf,
            Coefficient::MinusHalf,
        ] {
            let s = c.to_string();
            assert_eq!(s.parse::<Coefficient>().unwrap(), c);
            assert_abs_diff_eq!(
                c.value() * c.value(),
                *c.squared().numer() as f64 / *c.squared().denom() as f64,
                epsilon = 1e-15
            );
        }
    }
}
