//! Exact homogeneous-polynomial form of the eigenmodes.
//!
//! Every Ψ̃_{kℓm} extends to a homogeneous degree-k polynomial in the ambient
//! coordinates (x, y, z, w) whose Euclidean Laplacian vanishes identically.
//! The three separated factors expand as
//!
//! * the Jacobi factor, a polynomial in (x² + y²) and −(z² + w²):
//!   `P_d^(|m|,|ℓ|)(cos 2χ) = Σᵢ C(|m|+d, i) C(|ℓ|+d, d−i) (x²+y²)ⁱ (−(z²+w²))^(d−i)`,
//! * cos^|ℓ|χ·cos|ℓ|θ = Σᵢ (−1)ⁱ C(|ℓ|, 2i) x^(|ℓ|−2i) y^(2i) (and the odd-index
//!   analogue for the sine case), and
//! * the same construction in (z, w) for the φ factor.
//!
//! Coefficients are exact rationals over arbitrary-precision integers, so the
//! harmonicity check `∇²P = 0` is a zero-tolerance ground truth rather than a
//! numerical statement. Polynomial forms are of the **unnormalized** modes;
//! normalization stays outside the coefficients.
//!
//! Serialized term order is graded lexicographic on the exponent tuple
//! (a, b, c, e), leading term first, so exports are byte-reproducible.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::CartesianPoint;
use crate::jacobi::binomial_unchecked;
use crate::modes::ModeIndex;

#[derive(Debug, Error, PartialEq)]
pub enum PolynomialError {
    #[error("exponent tuple {exp:?} has total degree {found}, expected {expected}")]
    NotHomogeneous {
        exp: [u32; 4],
        found: u32,
        expected: u32,
    },
    #[error("invalid polynomial JSON: {0}")]
    Json(String),
}

/// A homogeneous polynomial in (x, y, z, w) with exact rational coefficients,
/// stored sparsely with no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarmonicPolynomial {
    degree: u32,
    terms: BTreeMap<[u32; 4], BigRational>,
}

impl HarmonicPolynomial {
    /// The zero polynomial, carrying a nominal degree.
    pub fn zero(degree: u32) -> Self {
        Self {
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a polynomial from terms, checking homogeneity and dropping
    /// zero coefficients. Coefficients of repeated exponents are summed.
    pub fn from_terms(
        degree: u32,
        terms: impl IntoIterator<Item = ([u32; 4], BigRational)>,
    ) -> Result<Self, PolynomialError> {
        let mut map: BTreeMap<[u32; 4], BigRational> = BTreeMap::new();
        for (exp, coefficient) in terms {
            let total: u32 = exp.iter().sum();
            if total != degree {
                return Err(PolynomialError::NotHomogeneous {
                    exp,
                    found: total,
                    expected: degree,
                });
            }
            let entry = map.entry(exp).or_insert_with(BigRational::zero);
            *entry += coefficient;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Self { degree, terms: map })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms in graded-lex order, leading term first.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 4], &BigRational)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, exp: [u32; 4]) -> BigRational {
        self.terms
            .get(&exp)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    fn add_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.degree, other.degree);
        for (exp, c) in &other.terms {
            let entry = self.terms.entry(*exp).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                self.terms.remove(exp);
            }
        }
    }

    fn multiply(&self, other: &Self) -> Self {
        let degree = self.degree + other.degree;
        let mut terms: BTreeMap<[u32; 4], BigRational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exp = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
                let entry = terms.entry(exp).or_insert_with(BigRational::zero);
                *entry += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Self { degree, terms }
    }
}

impl std::fmt::Display for HarmonicPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        const VARS: [char; 4] = ['x', 'y', 'z', 'w'];
        for (i, (exp, c)) in self.terms().enumerate() {
            if i > 0 {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            let magnitude = c.abs();
            let has_vars = exp.iter().any(|&e| e > 0);
            if !magnitude.is_one() || !has_vars {
                write!(f, "{magnitude}")?;
            }
            for (v, &e) in VARS.iter().zip(exp.iter()) {
                match e {
                    0 => {}
                    1 => write!(f, "{v}")?,
                    _ => write!(f, "{v}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

/// The degree-|ℓ| harmonic binomial sum in two variables replacing
/// r^|ℓ|·cos(|ℓ|·angle) (index ≥ 0) or r^|ℓ|·sin(|ℓ|·angle) (index < 0).
/// `vars` selects (x, y) or (z, w).
fn circular_factor(index: i32, vars: (usize, usize)) -> HarmonicPolynomial {
    let n = index.unsigned_abs();
    let mut terms = Vec::new();
    // Cosine keeps even powers of the second variable, sine odd powers.
    let start = u32::from(index < 0);
    let mut j = start;
    let mut sign_positive = true;
    while j <= n {
        let c = BigRational::from_integer(BigInt::from(binomial_unchecked(n, j)));
        let c = if sign_positive { c } else { -c };
        let mut exp = [0u32; 4];
        exp[vars.0] = n - j;
        exp[vars.1] = j;
        terms.push((exp, c));
        j += 2;
        sign_positive = !sign_positive;
    }
    HarmonicPolynomial::from_terms(n, terms).expect("factor terms are homogeneous by construction")
}

/// The Jacobi factor as a degree-2d polynomial in (x²+y²) and −(z²+w²).
fn jacobi_factor(d: u32, a: u32, b: u32) -> HarmonicPolynomial {
    let mut terms = Vec::new();
    for i in 0..=d {
        let outer = binomial_unchecked(a + d, i) * binomial_unchecked(b + d, d - i);
        let outer = BigInt::from(outer);
        for j in 0..=i {
            for t in 0..=(d - i) {
                let c = &outer
                    * BigInt::from(binomial_unchecked(i, j))
                    * BigInt::from(binomial_unchecked(d - i, t));
                let c = if (d - i) % 2 == 1 { -c } else { c };
                let exp = [2 * (i - j), 2 * j, 2 * (d - i - t), 2 * t];
                terms.push((exp, BigRational::from_integer(c)));
            }
        }
    }
    HarmonicPolynomial::from_terms(2 * d, terms)
        .expect("factor terms are homogeneous by construction")
}

/// Expands Ψ̃_{kℓm} as an exact homogeneous degree-k polynomial.
pub fn to_polynomial(idx: &ModeIndex) -> HarmonicPolynomial {
    let la = idx.l().unsigned_abs();
    let ma = idx.m().unsigned_abs();
    let jacobi = jacobi_factor(idx.depth(), ma, la);
    let theta = circular_factor(idx.l(), (0, 1));
    let phi = circular_factor(idx.m(), (2, 3));
    jacobi.multiply(&theta).multiply(&phi)
}

/// Evaluates the polynomial at a point by a recursive Horner scheme over the
/// graded-lex term order.
pub fn evaluate_polynomial(poly: &HarmonicPolynomial, p: &CartesianPoint) -> f64 {
    let coords = [p.x, p.y, p.z, p.w];
    let terms: Vec<([u32; 4], f64)> = poly
        .terms()
        .map(|(exp, c)| (*exp, c.to_f64().expect("coefficient within f64 range")))
        .collect();
    horner(&terms, 0, &coords)
}

/// `terms` are sorted descending-lex on exp[var..]; factors out powers of
/// coords[var] between exponent groups, recursing over the remaining
/// variables.
fn horner(terms: &[([u32; 4], f64)], var: usize, coords: &[f64; 4]) -> f64 {
    if terms.is_empty() {
        return 0.0;
    }
    let x = coords[var];
    if var == 3 {
        // One variable left; exponents are distinct and descending.
        let mut acc = 0.0;
        let mut prev = terms[0].0[3];
        for &(exp, c) in terms {
            acc = acc * x.powi((prev - exp[3]) as i32) + c;
            prev = exp[3];
        }
        return acc * x.powi(prev as i32);
    }
    let mut acc = 0.0;
    let mut prev_exp: Option<u32> = None;
    let mut start = 0;
    while start < terms.len() {
        let e = terms[start].0[var];
        let mut end = start;
        while end < terms.len() && terms[end].0[var] == e {
            end += 1;
        }
        let inner = horner(&terms[start..end], var + 1, coords);
        acc = match prev_exp {
            None => inner,
            Some(prev) => acc * x.powi((prev - e) as i32) + inner,
        };
        prev_exp = Some(e);
        start = end;
    }
    acc * x.powi(prev_exp.expect("terms nonempty") as i32)
}

/// ∂²/∂x² + ∂²/∂y² + ∂²/∂z² + ∂²/∂w², term-wise and exact. The result is
/// homogeneous of degree k−2 (or the zero polynomial).
pub fn euclidean_laplacian(poly: &HarmonicPolynomial) -> HarmonicPolynomial {
    let degree = poly.degree().saturating_sub(2);
    let mut out = HarmonicPolynomial::zero(degree);
    for (exp, c) in poly.terms() {
        for v in 0..4 {
            if exp[v] >= 2 {
                let mut e = *exp;
                e[v] -= 2;
                let factor =
                    BigRational::from_integer(BigInt::from(exp[v] as u64 * (exp[v] as u64 - 1)));
                let single = HarmonicPolynomial {
                    degree,
                    terms: BTreeMap::from([(e, c * factor)]),
                };
                out.add_assign(&single);
            }
        }
    }
    out
}

/// True iff the polynomial is homogeneous of degree k and its Euclidean
/// Laplacian is exactly the zero polynomial.
pub fn is_homogeneous_harmonic(poly: &HarmonicPolynomial, k: u32) -> bool {
    poly.degree() == k
        && poly.terms.keys().all(|exp| exp.iter().sum::<u32>() == k)
        && euclidean_laplacian(poly).is_zero()
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: [u32; 4],
    num: serde_json::Number,
    den: serde_json::Number,
}

#[derive(Serialize, Deserialize)]
struct PolynomialJson {
    degree: u32,
    terms: Vec<TermJson>,
}

fn bigint_to_number(v: &BigInt) -> serde_json::Number {
    serde_json::Number::from_str(&v.to_string())
        .expect("decimal integer literal is a valid JSON number")
}

impl HarmonicPolynomial {
    /// JSON export: `{"degree": k, "terms": [{"exp": [a,b,c,e], "num": …, "den": …}]}`
    /// with terms in graded-lex order (leading first) and exact integers.
    pub fn to_json(&self) -> String {
        let doc = PolynomialJson {
            degree: self.degree,
            terms: self
                .terms()
                .map(|(exp, c)| TermJson {
                    exp: *exp,
                    num: bigint_to_number(c.numer()),
                    den: bigint_to_number(c.denom()),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("polynomial serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, PolynomialError> {
        let doc: PolynomialJson =
            serde_json::from_str(text).map_err(|e| PolynomialError::Json(e.to_string()))?;
        let mut terms = Vec::with_capacity(doc.terms.len());
        for t in doc.terms {
            let num = BigInt::from_str(&t.num.to_string())
                .map_err(|e| PolynomialError::Json(format!("bad numerator: {e}")))?;
            let den = BigInt::from_str(&t.den.to_string())
                .map_err(|e| PolynomialError::Json(format!("bad denominator: {e}")))?;
            if den.is_zero() {
                return Err(PolynomialError::Json("zero denominator".into()));
            }
            terms.push((t.exp, BigRational::new(num, den)));
        }
        Self::from_terms(doc.degree, terms)
    }
}
