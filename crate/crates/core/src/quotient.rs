//! Eigenbases and spectra of the spherical quotients: lens spaces L(p,q) and
//! prism spaces S³/D*ₙ.
//!
//! The lens space L(p,q) is S³ modulo the cyclic group generated by the
//! corkscrew (Δθ, Δφ) = (2π/p, 2πq/p); its eigenmodes are exactly the
//! generator-invariant eigenmodes of S³, i.e. the fixed vectors emitted by
//! [`crate::symmetry::fixed_subspace_basis`], whose congruence rows become
//! the integer conditions ℓ ≡ 0, qm ≡ 0, ℓ ≡ ±qm (mod p).
//!
//! The prism space is the quotient by the binary dihedral group of order 4n,
//! generated by the Z₂ₙ corkscrew (2π/2n, 2π/2n) together with the order-four
//! quarter turn. A mode combination survives when it passes both the Z₂ₙ
//! congruence (the lens selection rows with p = 2n, q = 1) and the
//! quarter-turn sign
//! rule σ; the resulting rows are emitted by [`prism_basis`]. For odd k no
//! row condition can hold (the group contains the antipodal map and odd-k
//! modes are odd polynomials), so the eigenbasis is empty.
//!
//! Multiplicities are computed by exact integer counting over the same rows
//! and are cross-checked three ways in the test suites: against the emitted
//! basis lengths, against group-averaged character traces, and — for prism
//! spaces — against Ikeda's closed-form multiplicities.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{apply_isometry, ToroidalPoint, TorusIsometry};
use crate::modes::{enumerate_basis, BasisVector, Coefficient, ModeIndex};
use crate::symmetry::{fixed_subspace_basis, quarter_turn, sigma};

#[derive(Debug, Error, PartialEq)]
pub enum SpaceError {
    #[error("lens space requires p >= 1, got p = {p}")]
    LensOrder { p: i64 },
    #[error("L({p},{q}) is not a free quotient: gcd(p, q mod p) = {g} != 1")]
    LensNotCoprime { p: i64, q: i64, g: i64 },
    #[error("prism space requires n >= 1, got n = {n}")]
    PrismOrder { n: i64 },
    #[error("unrecognized space {0:?}; expected \"s3\", \"lens:p,q\" or \"prism:n\"")]
    Parse(String),
}

/// The 3-sphere or one of its two quotient families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuotientSpace {
    Sphere,
    /// L(p, q) with q already reduced into [0, p) and gcd(p, q) = 1.
    Lens {
        p: u32,
        q: u32,
    },
    /// S³/D*ₙ, the quotient by the binary dihedral group of order 4n.
    Prism {
        n: u32,
    },
}

impl QuotientSpace {
    pub fn sphere() -> Self {
        QuotientSpace::Sphere
    }

    /// Builds L(p, q), reducing q modulo p and rejecting non-coprime pairs.
    /// L(1, ·) is the sphere itself and is accepted.
    pub fn lens(p: i64, q: i64) -> Result<Self, SpaceError> {
        if p < 1 {
            return Err(SpaceError::LensOrder { p });
        }
        let q_reduced = q.rem_euclid(p);
        let g = p.gcd(&q_reduced);
        if g != 1 {
            return Err(SpaceError::LensNotCoprime { p, q, g });
        }
        Ok(QuotientSpace::Lens {
            p: p as u32,
            q: q_reduced as u32,
        })
    }

    pub fn prism(n: i64) -> Result<Self, SpaceError> {
        if n < 1 {
            return Err(SpaceError::PrismOrder { n });
        }
        Ok(QuotientSpace::Prism { n: n as u32 })
    }

    /// Generators of the covering group, as point maps on S³.
    pub fn generators(&self) -> Vec<SpaceGenerator> {
        match *self {
            QuotientSpace::Sphere => Vec::new(),
            QuotientSpace::Lens { p, q } => vec![SpaceGenerator::Torus(
                TorusIsometry::from_fractions(1, i64::from(p), i64::from(q), i64::from(p)),
            )],
            QuotientSpace::Prism { n } => vec![
                SpaceGenerator::Torus(TorusIsometry::from_fractions(
                    1,
                    2 * i64::from(n),
                    1,
                    2 * i64::from(n),
                )),
                SpaceGenerator::QuarterTurn,
            ],
        }
    }

    /// The orthonormal eigenbasis rows for wave number k.
    pub fn basis(&self, k: u32) -> Vec<BasisVector> {
        match *self {
            QuotientSpace::Sphere => enumerate_basis(k)
                .into_iter()
                .map(BasisVector::single)
                .collect(),
            QuotientSpace::Lens { p, q } => lens_basis_checked(p, q, k),
            QuotientSpace::Prism { n } => prism_basis(i64::from(n), k).expect("n validated"),
        }
    }

    /// The multiplicity of eigenvalue k(k+2), by exact integer counting.
    pub fn multiplicity(&self, k: u32) -> u64 {
        match *self {
            QuotientSpace::Sphere => u64::from(k + 1) * u64::from(k + 1),
            QuotientSpace::Lens { p, q } => {
                lens_multiplicity(i64::from(p), i64::from(q), k).expect("parameters validated")
            }
            QuotientSpace::Prism { n } => {
                prism_multiplicity(i64::from(n), k).expect("parameters validated")
            }
        }
    }
}

impl fmt::Display for QuotientSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            QuotientSpace::Sphere => f.write_str("s3"),
            QuotientSpace::Lens { p, q } => write!(f, "lens:{p},{q}"),
            QuotientSpace::Prism { n } => write!(f, "prism:{n}"),
        }
    }
}

impl FromStr for QuotientSpace {
    type Err = SpaceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SpaceError::Parse(s.to_string());
        if s == "s3" {
            return Ok(QuotientSpace::Sphere);
        }
        if let Some(rest) = s.strip_prefix("lens:") {
            let (p, q) = rest.split_once(',').ok_or_else(bad)?;
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            return QuotientSpace::lens(p, q);
        }
        if let Some(rest) = s.strip_prefix("prism:") {
            let n: i64 = rest.trim().parse().map_err(|_| bad())?;
            return QuotientSpace::prism(n);
        }
        Err(bad())
    }
}

/// A covering-group generator, applicable to points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpaceGenerator {
    Torus(TorusIsometry),
    QuarterTurn,
}

impl SpaceGenerator {
    pub fn apply(&self, p: &ToroidalPoint) -> ToroidalPoint {
        match self {
            SpaceGenerator::Torus(g) => apply_isometry(g, p),
            SpaceGenerator::QuarterTurn => quarter_turn(p),
        }
    }
}

/// Selection rows for L(p,q) at wave number k: Ψ_{k00} always; {Ψ_{k,±ℓ,0}}
/// iff ℓ ≡ 0; {Ψ_{k,0,±m}} iff qm ≡ 0; the √½ pairs iff ℓ ≡ qm resp.
/// ℓ ≡ −qm (all mod p), over existing modes only.
pub fn lens_basis(p: i64, q: i64, k: u32) -> Result<Vec<BasisVector>, SpaceError> {
    match QuotientSpace::lens(p, q)? {
        QuotientSpace::Lens { p, q } => Ok(lens_basis_checked(p, q, k)),
        _ => unreachable!(),
    }
}

fn lens_basis_checked(p: u32, q: u32, k: u32) -> Vec<BasisVector> {
    let generator = TorusIsometry::from_fractions(1, i64::from(p), i64::from(q), i64::from(p));
    fixed_subspace_basis(&generator, k)
}

/// |lens_basis(p, q, k)| by exact counting: one row-1 vector for even k, two
/// vectors per qualifying ℓ, m, or (ℓ, m) in the remaining rows.
pub fn lens_multiplicity(p: i64, q: i64, k: u32) -> Result<u64, SpaceError> {
    let (p, q) = match QuotientSpace::lens(p, q)? {
        QuotientSpace::Lens { p, q } => (i64::from(p), i64::from(q)),
        _ => unreachable!(),
    };
    let k = i64::from(k);
    let mut count = 0u64;
    if k % 2 == 0 {
        count += 1;
    }
    // ℓ ≡ 0 (mod p) with ℓ ≡ k (mod 2), ℓ in [1, k]; likewise for m, using
    // qm ≡ 0 (mod p) ⇔ m ≡ 0 (mod p) since gcd(p, q) = 1.
    count += 2 * count_congruent(k, 0, p, k % 2);
    count += 2 * count_congruent(k, 0, p, k % 2);
    for m in 1..k {
        let parity = (k - m).rem_euclid(2);
        let qm = ((q as i128 * (m % p) as i128).rem_euclid(p as i128)) as i64;
        count += 2 * count_congruent(k - m, qm, p, parity);
        count += 2 * count_congruent(k - m, -qm, p, parity);
    }
    Ok(count)
}

/// #{x in [1, hi] : x ≡ residue (mod modulus), x ≡ parity (mod 2)}.
fn count_congruent(hi: i64, residue: i64, modulus: i64, parity: i64) -> u64 {
    debug_assert!(modulus >= 1 && (0..2).contains(&parity));
    if hi < 1 {
        return 0;
    }
    if modulus % 2 == 0 {
        // The residue class mod an even modulus has fixed parity.
        if residue.rem_euclid(2) != parity {
            return 0;
        }
        count_in_class(hi, residue, modulus)
    } else {
        // Odd modulus: CRT gives one class mod 2·modulus; r and r+modulus
        // have opposite parities.
        let r = residue.rem_euclid(modulus);
        let r = if r.rem_euclid(2) == parity {
            r
        } else {
            r + modulus
        };
        count_in_class(hi, r, 2 * modulus)
    }
}

/// #{x in [1, hi] : x ≡ residue (mod modulus)}.
fn count_in_class(hi: i64, residue: i64, modulus: i64) -> u64 {
    let r = residue.rem_euclid(modulus);
    if r == 0 {
        (hi / modulus) as u64
    } else if r > hi {
        0
    } else {
        ((hi - r) / modulus + 1) as u64
    }
}

fn mode(k: u32, l: i64, m: i64) -> ModeIndex {
    ModeIndex::new(i64::from(k), l, m).expect("row enumeration only emits existing modes")
}

fn sqrt_half_pair(a: ModeIndex, b: ModeIndex, second_positive: bool) -> BasisVector {
    BasisVector::new(vec![
        (a, Coefficient::PlusSqrtHalf),
        (b, Coefficient::PlusSqrtHalf.with_sign(second_positive)),
    ])
    .expect("two sqrt(1/2) components form a unit vector")
}

fn half_quad(terms: [(ModeIndex, bool); 4]) -> BasisVector {
    BasisVector::new(
        terms
            .into_iter()
            .map(|(idx, positive)| (idx, Coefficient::PlusHalf.with_sign(positive)))
            .collect(),
    )
    .expect("four 1/2 components form a unit vector")
}

/// Selection rows for S³/D*ₙ at wave number k, in table order with ascending
/// (ℓ, m) inside each row. Empty for odd k.
pub fn prism_basis(n: i64, k: u32) -> Result<Vec<BasisVector>, SpaceError> {
    if n < 1 {
        return Err(SpaceError::PrismOrder { n });
    }
    let two_n = 2 * n;
    let k_i = i64::from(k);
    let mut out = Vec::new();

    // Ψ_{k,0,0} iff k ≡ 0 (mod 4).
    if k % 4 == 0 {
        out.push(BasisVector::single(mode(k, 0, 0)));
    }

    // (ℓ, 0) rows: ℓ ≡ 0 (mod 2n); d = (k−ℓ)/2 even picks the sum pair,
    // d odd the difference pair.
    let l0_values = || {
        (1..=k_i)
            .filter(move |l| l % two_n == 0 && (l % 2) == (k_i % 2))
            .map(move |l| (l, ((k_i - l) / 2) % 2 == 0))
    };
    for (l, _) in l0_values().filter(|(_, d_even)| *d_even) {
        out.push(sqrt_half_pair(mode(k, l, 0), mode(k, 0, l), true));
        out.push(sqrt_half_pair(mode(k, -l, 0), mode(k, 0, -l), false));
    }
    for (l, _) in l0_values().filter(|(_, d_even)| !*d_even) {
        out.push(sqrt_half_pair(mode(k, l, 0), mode(k, 0, l), false));
        out.push(sqrt_half_pair(mode(k, -l, 0), mode(k, 0, -l), true));
    }

    // (ℓ, ℓ) rows; the modes exist for even k with 2ℓ ≤ k.
    let diagonal_max = if k % 2 == 0 { i64::from(k / 2) } else { 0 };
    if k % 4 == 0 {
        for l in 1..=diagonal_max {
            out.push(sqrt_half_pair(mode(k, l, l), mode(k, -l, -l), true));
            out.push(sqrt_half_pair(mode(k, -l, l), mode(k, l, -l), false));
        }
        for l in (1..=diagonal_max).filter(|l| (2 * l) % two_n == 0) {
            out.push(sqrt_half_pair(mode(k, l, l), mode(k, -l, -l), false));
        }
    } else if k % 4 == 2 {
        for l in (1..=diagonal_max).filter(|l| (2 * l) % two_n == 0) {
            out.push(sqrt_half_pair(mode(k, -l, l), mode(k, l, -l), true));
        }
    }

    // 8-block rows, ℓ > m > 0. σ here reduces to (+ iff d even)·(+ iff m even).
    let eight_blocks = |condition_sum: bool, sign_wanted: i32| {
        let mut rows = Vec::new();
        for l in 1..k_i {
            for m in 1..l {
                if l + m > k_i || (l + m - k_i) % 2 != 0 {
                    continue;
                }
                let congruent = if condition_sum {
                    (l + m) % two_n == 0
                } else {
                    (l - m) % two_n == 0
                };
                if !congruent {
                    continue;
                }
                if sigma(&mode(k, l, m)) == sign_wanted {
                    rows.push((l, m));
                }
            }
        }
        rows
    };
    // ℓ ≡ m (mod 2n), σ > 0.
    for (l, m) in eight_blocks(false, 1) {
        out.push(half_quad([
            (mode(k, l, m), true),
            (mode(k, -l, -m), true),
            (mode(k, m, l), true),
            (mode(k, -m, -l), true),
        ]));
        out.push(half_quad([
            (mode(k, l, -m), true),
            (mode(k, -l, m), false),
            (mode(k, -m, l), false),
            (mode(k, m, -l), true),
        ]));
    }
    // ℓ ≡ m (mod 2n), σ < 0.
    for (l, m) in eight_blocks(false, -1) {
        out.push(half_quad([
            (mode(k, l, m), true),
            (mode(k, -l, -m), true),
            (mode(k, m, l), false),
            (mode(k, -m, -l), false),
        ]));
        out.push(half_quad([
            (mode(k, l, -m), true),
            (mode(k, -l, m), false),
            (mode(k, -m, l), true),
            (mode(k, m, -l), false),
        ]));
    }
    // ℓ ≡ −m (mod 2n), σ > 0.
    for (l, m) in eight_blocks(true, 1) {
        out.push(half_quad([
            (mode(k, l, m), true),
            (mode(k, -l, -m), false),
            (mode(k, m, l), true),
            (mode(k, -m, -l), false),
        ]));
        out.push(half_quad([
            (mode(k, l, -m), true),
            (mode(k, -l, m), true),
            (mode(k, -m, l), false),
            (mode(k, m, -l), false),
        ]));
    }
    // ℓ ≡ −m (mod 2n), σ < 0.
    for (l, m) in eight_blocks(true, -1) {
        out.push(half_quad([
            (mode(k, l, m), true),
            (mode(k, -l, -m), false),
            (mode(k, m, l), false),
            (mode(k, -m, -l), true),
        ]));
        out.push(half_quad([
            (mode(k, l, -m), true),
            (mode(k, -l, m), true),
            (mode(k, -m, l), true),
            (mode(k, m, -l), true),
        ]));
    }
    Ok(out)
}

/// |prism_basis(n, k)| by exact counting over the same rows.
pub fn prism_multiplicity(n: i64, k: u32) -> Result<u64, SpaceError> {
    if n < 1 {
        return Err(SpaceError::PrismOrder { n });
    }
    let two_n = 2 * n;
    let k = i64::from(k);
    let mut count = 0u64;
    if k % 4 == 0 {
        count += 1; // Ψ_{k,0,0}
    }
    if k % 2 == 0 {
        // (ℓ, 0) rows: ℓ ≡ 0 (mod 2n) in [1, k]; two vectors each.
        count += 2 * count_in_class(k, 0, two_n);
        // (ℓ, ℓ) rows over ℓ in [1, k/2].
        let half = k / 2;
        if k % 4 == 0 {
            count += 2 * half as u64; // the e₁/e₂ pair
            count += count_in_class(half, 0, n); // e₃-type single
        } else {
            count += count_in_class(half, 0, n); // e₄-type single
        }
        // 8-blocks, ℓ > m > 0, ℓ ≡ ±m (mod 2n); two vectors each.
        for m in 1..k {
            let hi = k - m;
            if hi <= m {
                break;
            }
            // ℓ in [m+1, hi] with ℓ ≡ m (mod 2n), then ℓ ≡ −m (mod 2n).
            count += 2 * (count_in_class(hi, m, two_n) - count_in_class(m, m, two_n));
            count += 2 * (count_in_class(hi, -m, two_n) - count_in_class(m, -m, two_n));
        }
    }
    Ok(count)
}

/// Ikeda's closed-form multiplicity for S³/D*ₙ: with k̄ = k/2, the value is
/// (2k̄+1)(⌊k̄/n⌋+1) for even k̄ and (2k̄+1)⌊k̄/n⌋ for odd k̄; zero for odd k.
pub fn ikeda_multiplicity(n: i64, k: u32) -> Result<u64, SpaceError> {
    if n < 1 {
        return Err(SpaceError::PrismOrder { n });
    }
    if k % 2 == 1 {
        return Ok(0);
    }
    let half = i64::from(k / 2);
    let quotient = (half / n) as u64;
    let factor = 2 * half as u64 + 1;
    Ok(if half % 2 == 0 {
        factor * (quotient + 1)
    } else {
        factor * quotient
    })
}

/// Map k ↦ multiplicity for eigenvalues k(k+2), k = 0..=k_max.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    entries: BTreeMap<u32, u64>,
}

impl Spectrum {
    pub fn multiplicity(&self, k: u32) -> Option<u64> {
        self.entries.get(&k).copied()
    }

    pub fn eigenvalue(k: u32) -> u64 {
        u64::from(k) * (u64::from(k) + 2)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.entries.iter().map(|(&k, &m)| (k, m))
    }

    /// CSV with the fixed header `k,multiplicity`, one row per wave number.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,multiplicity\n");
        for (k, m) in self.iter() {
            out.push_str(&format!("{k},{m}\n"));
        }
        out
    }
}

/// Tabulates multiplicities for all k ≤ k_max.
pub fn spectrum(space: &QuotientSpace, k_max: u32) -> Spectrum {
    Spectrum {
        entries: (0..=k_max).map(|k| (k, space.multiplicity(k))).collect(),
    }
}

#[derive(Serialize, Deserialize)]
struct BasisTermJson {
    k: u32,
    l: i32,
    m: i32,
    coef: String,
}

#[derive(Serialize, Deserialize)]
struct BasisVectorJson {
    terms: Vec<BasisTermJson>,
}

/// JSON export of a basis: `{"space": …, "k": …, "multiplicity": …,
/// "vectors": [{"terms": [{"k": …, "l": …, "m": …, "coef": "sqrt(1/2)"}]}]}`.
#[derive(Serialize, Deserialize)]
pub struct BasisExport {
    space: String,
    k: u32,
    multiplicity: u64,
    vectors: Vec<BasisVectorJson>,
}

impl BasisExport {
    pub fn new(space: &QuotientSpace, k: u32) -> Self {
        let vectors = space
            .basis(k)
            .iter()
            .map(|v| BasisVectorJson {
                terms: v
                    .components()
                    .iter()
                    .map(|(idx, c)| BasisTermJson {
                        k: idx.k(),
                        l: idx.l(),
                        m: idx.m(),
                        coef: c.to_string(),
                    })
                    .collect(),
            })
            .collect();
        Self {
            space: space.to_string(),
            k,
            multiplicity: space.multiplicity(k),
            vectors,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("basis serialization cannot fail")
    }
}
