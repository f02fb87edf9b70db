//! Toroidal coordinates on the 3-sphere and the rigid motions that preserve them.
//!
//! The unit 3-sphere S³ ⊂ ℝ⁴ is parameterized by angles (χ, θ, φ) as
//!
//! ```text
//! x = cos χ cos θ      z = sin χ cos φ
//! y = cos χ sin θ      w = sin χ sin φ
//! ```
//!
//! with χ ∈ [0, π/2] and θ, φ ∈ [0, 2π). Each fixed χ ∈ (0, π/2) is a flat
//! torus swept out by (θ, φ); the stack of tori collapses to the circle
//! x² + y² = 1 at χ = 0 and to z² + w² = 1 at χ = π/2.
//!
//! A [`TorusIsometry`] is the corkscrew motion (χ, θ, φ) ↦ (χ, θ+Δθ, φ+Δφ).
//! Its angles are stored as exact rational multiples of 2π so that congruence
//! conditions such as ℓΔθ ≡ mΔφ (mod 2π) are decided with integer arithmetic,
//! never floating-point comparison: the multiplicity counts downstream are
//! integer facts and must not inherit rounding.

use std::f64::consts::{PI, TAU};

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("point is not on the unit 3-sphere: |p|^2 = {norm_squared} (tolerance {tolerance})")]
    NotOnUnitSphere { norm_squared: f64, tolerance: f64 },
    #[error("chi = {chi} outside [0, pi/2]")]
    ChiOutOfRange { chi: f64 },
}

/// Reduce an angle into [0, 2π) with a single `rem_euclid`.
pub(crate) fn reduce_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    // rem_euclid can return exactly TAU when `a` is a tiny negative number.
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// A point of S³ in toroidal coordinates (χ, θ, φ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToroidalPoint {
    /// Nesting angle in [0, π/2].
    pub chi: f64,
    /// Angle around the x² + y² = 1 circle, in [0, 2π).
    pub theta: f64,
    /// Angle around the z² + w² = 1 circle, in [0, 2π).
    pub phi: f64,
}

impl ToroidalPoint {
    /// Builds a point, reducing θ and φ modulo 2π. χ must lie in [0, π/2].
    pub fn new(chi: f64, theta: f64, phi: f64) -> Result<Self, GeometryError> {
        if !(0.0..=PI / 2.0).contains(&chi) {
            return Err(GeometryError::ChiOutOfRange { chi });
        }
        Ok(Self {
            chi,
            theta: reduce_angle(theta),
            phi: reduce_angle(phi),
        })
    }
}

/// A point of ℝ⁴; unit-norm when it is claimed to lie on S³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartesianPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub w: f64,
}

impl CartesianPoint {
    pub fn new(x: f64, y: f64, z: f64, w: f64) -> Self {
        Self { x, y, z, w }
    }

    pub fn norm_squared(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z + self.w * self.w
    }

    pub fn is_unit(&self, tolerance: f64) -> bool {
        (self.norm_squared() - 1.0).abs() <= tolerance
    }
}

/// The isometry (χ, θ, φ) ↦ (χ, θ + Δθ, φ + Δφ) with Δθ = 2π·a/b and
/// Δφ = 2π·c/d held as exact reduced fractions of a full turn.
///
/// The fractions are normalized into [0, 1), so composition and powers stay
/// exact and two isometries are equal iff they act identically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TorusIsometry {
    dtheta_turns: Rational64,
    dphi_turns: Rational64,
}

/// Reduce a fraction of a turn into [0, 1).
fn reduce_turns(t: Rational64) -> Rational64 {
    let f = t.fract();
    if f.is_negative() {
        f + Rational64::from_integer(1)
    } else {
        f
    }
}

impl TorusIsometry {
    /// Isometry with Δθ = 2π·dtheta_num/dtheta_den, Δφ = 2π·dphi_num/dphi_den.
    ///
    /// Panics if a denominator is zero.
    pub fn from_fractions(dtheta_num: i64, dtheta_den: i64, dphi_num: i64, dphi_den: i64) -> Self {
        Self {
            dtheta_turns: reduce_turns(Rational64::new(dtheta_num, dtheta_den)),
            dphi_turns: reduce_turns(Rational64::new(dphi_num, dphi_den)),
        }
    }

    pub fn from_turns(dtheta_turns: Rational64, dphi_turns: Rational64) -> Self {
        Self {
            dtheta_turns: reduce_turns(dtheta_turns),
            dphi_turns: reduce_turns(dphi_turns),
        }
    }

    pub fn identity() -> Self {
        Self {
            dtheta_turns: Rational64::zero(),
            dphi_turns: Rational64::zero(),
        }
    }

    /// Δθ as an exact fraction of a full turn, in [0, 1).
    pub fn dtheta_turns(&self) -> Rational64 {
        self.dtheta_turns
    }

    /// Δφ as an exact fraction of a full turn, in [0, 1).
    pub fn dphi_turns(&self) -> Rational64 {
        self.dphi_turns
    }

    pub fn dtheta(&self) -> f64 {
        TAU * rational_to_f64(self.dtheta_turns)
    }

    pub fn dphi(&self) -> f64 {
        TAU * rational_to_f64(self.dphi_turns)
    }

    /// Composition g∘h; torus isometries commute, so the order is immaterial.
    pub fn compose(&self, other: &Self) -> Self {
        Self::from_turns(
            self.dtheta_turns + other.dtheta_turns,
            self.dphi_turns + other.dphi_turns,
        )
    }

    /// The j-th power (j ≥ 0) of the isometry.
    pub fn pow(&self, j: u32) -> Self {
        let j = Rational64::from_integer(i64::from(j));
        Self::from_turns(self.dtheta_turns * j, self.dphi_turns * j)
    }

    pub fn is_identity(&self) -> bool {
        self.dtheta_turns.is_zero() && self.dphi_turns.is_zero()
    }
}

pub(crate) fn rational_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Toroidal → Cartesian, per the parameterization of S³ above.
pub fn to_cartesian(p: &ToroidalPoint) -> CartesianPoint {
    let (sc, cc) = p.chi.sin_cos();
    let (st, ct) = p.theta.sin_cos();
    let (sp, cp) = p.phi.sin_cos();
    CartesianPoint::new(cc * ct, cc * st, sc * cp, sc * sp)
}

/// Cartesian → toroidal for unit-norm points (tolerance 1e-9).
///
/// On the collapsed circles the undefined angle is set to 0: at χ = 0 the φ
/// angle carries no information, and at χ = π/2 the θ angle does not. Zero is
/// as good as any value and keeps outputs reproducible.
pub fn from_cartesian(p: &CartesianPoint) -> Result<ToroidalPoint, GeometryError> {
    const TOLERANCE: f64 = 1e-9;
    let norm_squared = p.norm_squared();
    if (norm_squared - 1.0).abs() > TOLERANCE {
        return Err(GeometryError::NotOnUnitSphere {
            norm_squared,
            tolerance: TOLERANCE,
        });
    }
    let r_xy = p.x.hypot(p.y);
    let r_zw = p.z.hypot(p.w);
    let chi = r_zw.atan2(r_xy);
    let theta = if r_xy == 0.0 { 0.0 } else { p.y.atan2(p.x) };
    let phi = if r_zw == 0.0 { 0.0 } else { p.w.atan2(p.z) };
    Ok(ToroidalPoint {
        chi,
        theta: reduce_angle(theta),
        phi: reduce_angle(phi),
    })
}

/// Applies the corkscrew motion: (χ, θ, φ) ↦ (χ, θ + Δθ, φ + Δφ).
pub fn apply_isometry(g: &TorusIsometry, p: &ToroidalPoint) -> ToroidalPoint {
    ToroidalPoint {
        chi: p.chi,
        theta: reduce_angle(p.theta + g.dtheta()),
        phi: reduce_angle(p.phi + g.dphi()),
    }
}

/// The same isometry as a 4×4 rotation matrix on (x, y, z, w): a rotation by
/// Δθ in the (x, y)-plane block-summed with a rotation by Δφ in (z, w).
///
/// Satisfies `to_cartesian(apply_isometry(g, p)) = isometry_matrix(g) · to_cartesian(p)`.
pub fn isometry_matrix(g: &TorusIsometry) -> [[f64; 4]; 4] {
    let (st, ct) = g.dtheta().sin_cos();
    let (sp, cp) = g.dphi().sin_cos();
    [
        [ct, -st, 0.0, 0.0],
        [st, ct, 0.0, 0.0],
        [0.0, 0.0, cp, -sp],
        [0.0, 0.0, sp, cp],
    ]
}

/// Matrix-vector product helper for the 4×4 isometry matrices.
pub fn apply_matrix(m: &[[f64; 4]; 4], p: &CartesianPoint) -> CartesianPoint {
    let v = [p.x, p.y, p.z, p.w];
    let mut out = [0.0; 4];
    for (row, o) in m.iter().zip(out.iter_mut()) {
        *o = row.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
    }
    CartesianPoint::new(out[0], out[1], out[2], out[3])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn seeded_points(count: usize, seed: u64) -> Vec<ToroidalPoint> {
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
    fn collapse_circle_at_chi_zero() {
        let p = ToroidalPoint::new(0.0, 0.0, 1.234).unwrap();
        let c = to_cartesian(&p);
        assert_abs_diff_eq!(c.x, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.y, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.z, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.w, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn collapse_circle_at_chi_half_pi() {
        let p = ToroidalPoint::new(PI / 2.0, 2.5, 0.0).unwrap();
        let c = to_cartesian(&p);
        assert!(c.x.abs() < 1e-15 && c.y.abs() < 1e-15);
        assert_abs_diff_eq!(c.z, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.w, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn diagonal_point() {
        let p = ToroidalPoint::new(PI / 4.0, 0.0, 0.0).unwrap();
        let c = to_cartesian(&p);
        let half_sqrt2 = std::f64::consts::SQRT_2 / 2.0;
        assert_abs_diff_eq!(c.x, half_sqrt2, epsilon = 1e-15);
        assert_abs_diff_eq!(c.y, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.z, half_sqrt2, epsilon = 1e-15);
        assert_abs_diff_eq!(c.w, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn unit_norm_at_many_points() {
        for p in seeded_points(10_000, 7) {
            assert!((to_cartesian(&p).norm_squared() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn from_cartesian_conventions() {
        let p = from_cartesian(&CartesianPoint::new(1.0, 0.0, 0.0, 0.0)).unwrap();
        assert_eq!((p.chi, p.theta, p.phi), (0.0, 0.0, 0.0));

        let p = from_cartesian(&CartesianPoint::new(0.0, 0.0, 0.0, 1.0)).unwrap();
        assert_abs_diff_eq!(p.chi, PI / 2.0, epsilon = 1e-15);
        assert_eq!(p.theta, 0.0);
        assert_abs_diff_eq!(p.phi, PI / 2.0, epsilon = 1e-15);

        let half_sqrt2 = std::f64::consts::SQRT_2 / 2.0;
        let p = from_cartesian(&CartesianPoint::new(half_sqrt2, 0.0, half_sqrt2, 0.0)).unwrap();
        assert_abs_diff_eq!(p.chi, PI / 4.0, epsilon = 1e-15);
        assert_eq!((p.theta, p.phi), (0.0, 0.0));
    }

    #[test]
    fn from_cartesian_rejects_off_sphere_points() {
        let err = from_cartesian(&CartesianPoint::new(1.0, 1.0, 0.0, 0.0)).unwrap_err();
        assert!(matches!(err, GeometryError::NotOnUnitSphere { .. }));
    }

    #[test]
    fn identity_isometry_fixes_points() {
        let g = TorusIsometry::identity();
        for p in seeded_points(50, 3) {
            let q = apply_isometry(&g, &p);
            assert_eq!(p, q);
        }
    }

    #[test]
    fn half_turns() {
        let g = TorusIsometry::from_fractions(1, 2, 1, 2);
        let p = ToroidalPoint::new(PI / 4.0, 0.0, 0.0).unwrap();
        let q = apply_isometry(&g, &p);
        assert_abs_diff_eq!(q.chi, PI / 4.0);
        assert_abs_diff_eq!(q.theta, PI, epsilon = 1e-15);
        assert_abs_diff_eq!(q.phi, PI, epsilon = 1e-15);
    }

    #[test]
    fn lens_5_2_generator_has_order_five() {
        let g = TorusIsometry::from_fractions(1, 5, 2, 5);
        assert!(g.pow(5).is_identity());
        for j in 1..5 {
            assert!(!g.pow(j).is_identity());
        }
        // Exact composition agrees with pow.
        let mut acc = TorusIsometry::identity();
        for _ in 0..5 {
            acc = acc.compose(&g);
        }
        assert!(acc.is_identity());
    }

    #[test]
    fn isometry_matrix_examples() {
        let id = isometry_matrix(&TorusIsometry::identity());
        for (i, row) in id.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                assert_eq!(e, if i == j { 1.0 } else { 0.0 });
            }
        }

        // Δθ = Δφ = π is the antipodal map.
        let anti = isometry_matrix(&TorusIsometry::from_fractions(1, 2, 1, 2));
        for (i, row) in anti.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                assert_abs_diff_eq!(e, if i == j { -1.0 } else { 0.0 }, epsilon = 1e-15);
            }
        }

        // Quarter turn in the (x, y) plane only.
        let q = isometry_matrix(&TorusIsometry::from_fractions(1, 4, 0, 1));
        assert_abs_diff_eq!(q[0][0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q[0][1], -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q[1][0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q[2][2], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q[3][3], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn isometry_matrix_is_special_orthogonal() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let g = TorusIsometry::from_fractions(
                rng.gen_range(-20..20),
                rng.gen_range(1..20),
                rng.gen_range(-20..20),
                rng.gen_range(1..20),
            );
            let m = isometry_matrix(&g);
            // M Mᵀ = I
            for i in 0..4 {
                for j in 0..4 {
                    let dot: f64 = (0..4).map(|t| m[i][t] * m[j][t]).sum();
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((dot - expected).abs() < 1e-13);
                }
            }
            // Block determinant: det = (ct² + st²)(cp² + sp²) = 1.
            let det =
                (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * (m[2][2] * m[3][3] - m[2][3] * m[3][2]);
            assert!((det - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn commutation_square() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let points = seeded_points(1000, 17);
        for _ in 0..10 {
            let g = TorusIsometry::from_fractions(
                rng.gen_range(-12..12),
                rng.gen_range(1..12),
                rng.gen_range(-12..12),
                rng.gen_range(1..12),
            );
            let m = isometry_matrix(&g);
            for p in &points {
                let lhs = to_cartesian(&apply_isometry(&g, p));
                let rhs = apply_matrix(&m, &to_cartesian(p));
                assert!((lhs.x - rhs.x).abs() < 1e-12);
                assert!((lhs.y - rhs.y).abs() < 1e-12);
                assert!((lhs.z - rhs.z).abs() < 1e-12);
                assert!((lhs.w - rhs.w).abs() < 1e-12);
            }
        }
    }

    proptest! {
        #[test]
        fn round_trip_from_to_cartesian(
            chi in 1e-6..(PI / 2.0 - 1e-6),
            theta in 0.0..TAU,
            phi in 0.0..TAU,
        ) {
            let p = ToroidalPoint::new(chi, theta, phi).unwrap();
            let q = from_cartesian(&to_cartesian(&p)).unwrap();
            prop_assert!((p.chi - q.chi).abs() < 1e-9);
            let dt = (p.theta - q.theta).abs();
            prop_assert!(dt.min(TAU - dt) < 1e-9);
            let dp = (p.phi - q.phi).abs();
            prop_assert!(dp.min(TAU - dp) < 1e-9);
        }

        #[test]
        fn turn_fractions_stay_reduced(a in -50i64..50, b in 1i64..50, c in -50i64..50, d in 1i64..50) {
            let g = TorusIsometry::from_fractions(a, b, c, d);
            let t = g.dtheta_turns();
            prop_assert!(*t.denom() > 0);
            prop_assert!(num_integer::gcd(*t.numer(), *t.denom()) == 1 || t.numer() == &0);
            prop_assert!(t >= Rational64::zero() && t < Rational64::from_integer(1));
        }
    }
}
