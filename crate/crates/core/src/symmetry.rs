//! How torus-aligned isometries act on the eigenspaces, and the quarter-turn
//! generator used by the prism quotients.
//!
//! Under (χ, θ, φ) ↦ (χ, θ+Δθ, φ+Δφ) the span of {Ψ_{k,±ℓ,±m}} is setwise
//! invariant, so each eigenspace factors into blocks of dimension 1 (ℓ=m=0),
//! 2 (exactly one of ℓ, m zero) or 4. On a 2-block the action is a rotation
//! by ℓΔθ (or mΔφ); on a 4-block it is a pair of rotations by ℓΔθ−mΔφ and
//! ℓΔθ+mΔφ relative to the rotated basis
//!
//! ```text
//! e₁ = √½ (Ψ_{k,+ℓ,+m} + Ψ_{k,−ℓ,−m})      e₃ = √½ (Ψ_{k,+ℓ,+m} − Ψ_{k,−ℓ,−m})
//! e₂ = √½ (Ψ_{k,−ℓ,+m} − Ψ_{k,+ℓ,−m})      e₄ = √½ (Ψ_{k,−ℓ,+m} + Ψ_{k,+ℓ,−m})
//! ```
//!
//! The pointwise-fixed subspace is therefore spanned by: Ψ_{k,0,0} always;
//! {Ψ_{k,±ℓ,0}} iff ℓΔθ ≡ 0; {Ψ_{k,0,±m}} iff mΔφ ≡ 0; {e₁, e₂} iff
//! ℓΔθ ≡ mΔφ; {e₃, e₄} iff ℓΔθ ≡ −mΔφ (all congruences mod 2π, decided
//! exactly on the rational turn fractions). When both 4-block congruences
//! hold the whole block is fixed and both pairs are emitted.
//!
//! The action convention is pullback: (g·Ψ)(p) = Ψ(g(p)), so "invariant"
//! means Ψ∘g = Ψ.
//!
//! The quarter-turn map (χ, θ, φ) ↦ (π/2−χ, −φ, π−θ) sends Ψ_{kℓm} to
//! σ_{kℓm}·Ψ_{kmℓ}, where σ is a product of four signs computed by [`sigma`].

use std::f64::consts::{PI, TAU};

use num_rational::Rational64;
use num_traits::Signed;

use crate::geometry::{rational_to_f64, reduce_angle, ToroidalPoint, TorusIsometry};
use crate::modes::{BasisVector, Coefficient, ModeIndex};

/// The invariant block spanned by Ψ_{k,±ℓ,±m}, labeled by its non-negative
/// representatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubspaceBlock {
    k: u32,
    l: u32,
    m: u32,
}

impl SubspaceBlock {
    /// A block exists when its modes do: ℓ + m ≤ k and ℓ + m ≡ k (mod 2).
    pub fn new(k: u32, l: u32, m: u32) -> Option<Self> {
        if l + m <= k && (l + m) % 2 == k % 2 {
            Some(Self { k, l, m })
        } else {
            None
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn dimension(&self) -> usize {
        match (self.l, self.m) {
            (0, 0) => 1,
            (0, _) | (_, 0) => 2,
            _ => 4,
        }
    }

    /// All blocks of wave number k, in the fixed order: the 1-block, the
    /// (ℓ,0) 2-blocks, the (0,m) 2-blocks, then the 4-blocks ascending (ℓ,m).
    pub fn enumerate(k: u32) -> Vec<Self> {
        let mut out = Vec::new();
        if k % 2 == 0 {
            out.push(Self { k, l: 0, m: 0 });
        }
        for l in 1..=k {
            if l % 2 == k % 2 {
                out.push(Self { k, l, m: 0 });
            }
        }
        for m in 1..=k {
            if m % 2 == k % 2 {
                out.push(Self { k, l: 0, m });
            }
        }
        for l in 1..k {
            for m in 1..=(k - l) {
                if (l + m) % 2 == k % 2 {
                    out.push(Self { k, l, m });
                }
            }
        }
        out
    }

    fn mode(&self, l: i64, m: i64) -> ModeIndex {
        ModeIndex::new(i64::from(self.k), l, m).expect("block guarantees the mode exists")
    }
}

/// The rotated orthonormal basis e₁..e₄ of a 4-block, in which torus
/// isometries act block-diagonally.
#[derive(Debug, Clone)]
pub struct RotatedBasis4 {
    vectors: [BasisVector; 4],
}

impl RotatedBasis4 {
    /// Requires a genuine 4-block (ℓ, m ≥ 1).
    pub fn new(block: &SubspaceBlock) -> Option<Self> {
        if block.dimension() != 4 {
            return None;
        }
        let l = i64::from(block.l);
        let m = i64::from(block.m);
        let pair = |a: ModeIndex, b: ModeIndex, plus: bool| {
            BasisVector::new(vec![
                (a, Coefficient::PlusSqrtHalf),
                (b, Coefficient::PlusSqrtHalf.with_sign(plus)),
            ])
            .expect("two sqrt(1/2) components form a unit vector")
        };
        Some(Self {
            vectors: [
                pair(block.mode(l, m), block.mode(-l, -m), true),
                pair(block.mode(-l, m), block.mode(l, -m), false),
                pair(block.mode(l, m), block.mode(-l, -m), false),
                pair(block.mode(-l, m), block.mode(l, -m), true),
            ],
        })
    }

    pub fn vectors(&self) -> &[BasisVector; 4] {
        &self.vectors
    }
}

/// A 1×1, 2×2 or 4×4 orthogonal matrix stored in a fixed 4×4 buffer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionMatrix {
    dim: usize,
    entries: [[f64; 4]; 4],
}

impl ActionMatrix {
    fn identity(dim: usize) -> Self {
        let mut entries = [[0.0; 4]; 4];
        for (i, row) in entries.iter_mut().enumerate().take(dim) {
            row[i] = 1.0;
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.dim && j < self.dim);
        self.entries[i][j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.entries[i][i]).sum()
    }

    /// Matrix product; dimensions must agree.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut entries = [[0.0; 4]; 4];
        for i in 0..self.dim {
            for j in 0..self.dim {
                entries[i][j] = (0..self.dim)
                    .map(|t| self.entries[i][t] * other.entries[t][j])
                    .sum();
            }
        }
        Self {
            dim: self.dim,
            entries,
        }
    }

    pub fn max_orthogonality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let dot: f64 = (0..self.dim)
                    .map(|t| self.entries[i][t] * self.entries[j][t])
                    .sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - expected).abs());
            }
        }
        worst
    }

    fn write_rotation(&mut self, offset: usize, angle: f64) {
        let (s, c) = angle.sin_cos();
        self.entries[offset][offset] = c;
        self.entries[offset][offset + 1] = s;
        self.entries[offset + 1][offset] = -s;
        self.entries[offset + 1][offset + 1] = c;
    }
}

/// Angle 2π·t from a turn fraction, reduced exactly before conversion.
fn turns_to_angle(t: Rational64) -> f64 {
    let f = t.fract();
    let f = if f.is_negative() {
        f + Rational64::from_integer(1)
    } else {
        f
    };
    TAU * rational_to_f64(f)
}

/// The matrix of g on a block: identity on the 1-block; rotation by ℓΔθ (or
/// mΔφ) on a 2-block relative to (Ψ_{k,+ℓ,0}, Ψ_{k,−ℓ,0}); the pair of
/// rotations by ℓΔθ−mΔφ and ℓΔθ+mΔφ on a 4-block relative to
/// [`RotatedBasis4`]. Columns hold the coordinates of the images.
pub fn action_matrix(g: &TorusIsometry, block: &SubspaceBlock) -> ActionMatrix {
    let l = Rational64::from_integer(i64::from(block.l));
    let m = Rational64::from_integer(i64::from(block.m));
    match block.dimension() {
        1 => ActionMatrix::identity(1),
        2 => {
            let turns = if block.l > 0 {
                l * g.dtheta_turns()
            } else {
                m * g.dphi_turns()
            };
            let mut out = ActionMatrix::identity(2);
            out.write_rotation(0, turns_to_angle(turns));
            out
        }
        _ => {
            let difference = l * g.dtheta_turns() - m * g.dphi_turns();
            let sum = l * g.dtheta_turns() + m * g.dphi_turns();
            let mut out = ActionMatrix::identity(4);
            out.write_rotation(0, turns_to_angle(difference));
            out.write_rotation(2, turns_to_angle(sum));
            out
        }
    }
}

/// Per block, the pointwise-fixed vectors of g with the congruences decided
/// exactly; ordered by the five summary rows, then ascending (ℓ, m).
pub fn fixed_subspace_basis(g: &TorusIsometry, k: u32) -> Vec<BasisVector> {
    let mut out = Vec::new();
    let tt = g.dtheta_turns();
    let tp = g.dphi_turns();
    let times = |n: u32, t: Rational64| Rational64::from_integer(i64::from(n)) * t;

    // Ψ_{k,0,0}: fixed by every torus isometry, present for even k.
    if k % 2 == 0 {
        out.push(BasisVector::single(
            ModeIndex::new(i64::from(k), 0, 0).expect("k even"),
        ));
    }
    // {Ψ_{k,±ℓ,0}} iff ℓΔθ ≡ 0 (mod 2π).
    for l in (1..=k).filter(|l| l % 2 == k % 2) {
        if times(l, tt).is_integer() {
            let l = i64::from(l);
            out.push(BasisVector::single(
                ModeIndex::new(i64::from(k), l, 0).unwrap(),
            ));
            out.push(BasisVector::single(
                ModeIndex::new(i64::from(k), -l, 0).unwrap(),
            ));
        }
    }
    // {Ψ_{k,0,±m}} iff mΔφ ≡ 0 (mod 2π).
    for m in (1..=k).filter(|m| m % 2 == k % 2) {
        if times(m, tp).is_integer() {
            let m = i64::from(m);
            out.push(BasisVector::single(
                ModeIndex::new(i64::from(k), 0, m).unwrap(),
            ));
            out.push(BasisVector::single(
                ModeIndex::new(i64::from(k), 0, -m).unwrap(),
            ));
        }
    }
    // {e₁, e₂} iff ℓΔθ ≡ mΔφ (mod 2π).
    for_each_four_block(k, |block| {
        if (times(block.l, tt) - times(block.m, tp)).is_integer() {
            let e = RotatedBasis4::new(&block).expect("4-block");
            out.push(e.vectors()[0].clone());
            out.push(e.vectors()[1].clone());
        }
    });
    // {e₃, e₄} iff ℓΔθ ≡ −mΔφ (mod 2π).
    for_each_four_block(k, |block| {
        if (times(block.l, tt) + times(block.m, tp)).is_integer() {
            let e = RotatedBasis4::new(&block).expect("4-block");
            out.push(e.vectors()[2].clone());
            out.push(e.vectors()[3].clone());
        }
    });
    out
}

fn for_each_four_block(k: u32, mut f: impl FnMut(SubspaceBlock)) {
    for l in 1..k {
        for m in 1..=(k - l) {
            if (l + m) % 2 == k % 2 {
                f(SubspaceBlock { k, l, m });
            }
        }
    }
}

/// Σ over blocks of tr(action_matrix): 1-blocks contribute 1, 2-blocks
/// 2cos(ℓΔθ) or 2cos(mΔφ), 4-blocks 2cos(ℓΔθ−mΔφ) + 2cos(ℓΔθ+mΔφ).
pub fn character_trace(g: &TorusIsometry, k: u32) -> f64 {
    SubspaceBlock::enumerate(k)
        .iter()
        .map(|block| action_matrix(g, block).trace())
        .sum()
}

/// The quarter-turn Clifford translation (χ, θ, φ) ↦ (π/2 − χ, −φ, π − θ);
/// the order-four generator of the binary dihedral actions.
pub fn quarter_turn(p: &ToroidalPoint) -> ToroidalPoint {
    ToroidalPoint {
        chi: PI / 2.0 - p.chi,
        theta: reduce_angle(-p.phi),
        phi: reduce_angle(PI - p.theta),
    }
}

/// σ_{kℓm}: the sign in Ψ_{kℓm}∘quarter_turn = σ·Ψ_{kmℓ}. It is the product
/// of four signs: + iff d even, + iff ℓ ≥ 0, + iff m ≥ 0, + iff m even.
pub fn sigma(idx: &ModeIndex) -> i32 {
    let mut negatives = 0;
    if idx.depth() % 2 == 1 {
        negatives += 1;
    }
    if idx.l() < 0 {
        negatives += 1;
    }
    if idx.m() < 0 {
        negatives += 1;
    }
    if idx.m().rem_euclid(2) == 1 {
        negatives += 1;
    }
    if negatives % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Image of Ψ_{kℓm} under the quarter turn: the index (k, m, ℓ) and the sign
/// σ_{kℓm}.
pub fn z4_image(idx: &ModeIndex) -> (ModeIndex, i32) {
    let swapped = ModeIndex::new(i64::from(idx.k()), i64::from(idx.m()), i64::from(idx.l()))
        .expect("swapping l and m preserves the mode conditions");
    (swapped, sigma(idx))
}
