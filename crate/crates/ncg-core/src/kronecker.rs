//! The generalized Kronecker algebra K_N: the path algebra of the quiver
//! with two vertices and N parallel arrows, over ℚ(i).
//!
//! Every element is written on the basis {1, e, α_1, …, α_N} as
//! λ·1 + μ·e + Σ aᵏ·α_k, where e is the idempotent at the target vertex and
//! the α_k are the arrows. The defining relations are
//!
//! * e² = e, e·α_k = α_k, α_k·e = 0,
//! * α_j·α_k = 0,
//!
//! which force the closed product formula implemented by [`KElement::mul`].
//! The span of the arrows is a two-sided ideal (the "arrow ideal") on which
//! left multiplication by e is the identity and all internal products vanish;
//! the center is exactly ℚ(i)·1, and a·b is invertible iff λ ≠ 0 and
//! λ + μ ≠ 0. The involution fixes the arrows and sends e ↦ 1 − e.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigRational, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::GaussianRational;

/// Errors from Kronecker-algebra operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    /// Inversion requested for an element outside the unit group.
    #[error("element is not invertible: {reason} (a is invertible iff lambda != 0 and lambda + mu != 0)")]
    NotInvertible {
        /// Which unit condition failed.
        reason: &'static str,
    },
    /// Two elements from algebras with different arrow counts were mixed.
    #[error("mixed arrow counts: expected n = {expected}, found n = {found}")]
    DimensionMismatch {
        /// Arrow count of the receiver.
        expected: usize,
        /// Arrow count of the argument.
        found: usize,
    },
    /// A serialized element failed validation.
    #[error("bad element encoding: {0}")]
    Encoding(String),
}

/// An element λ·1 + μ·e + Σ aᵏ·α_k of K_N.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "KElementRaw", into = "KElementRaw")]
pub struct KElement {
    n: usize,
    lambda: GaussianRational,
    mu: GaussianRational,
    alpha: Vec<GaussianRational>,
}

/// Wire form of [`KElement`]: scalars as canonical strings, `alpha` of
/// length exactly `n`.
#[derive(Serialize, Deserialize)]
struct KElementRaw {
    n: usize,
    lambda: GaussianRational,
    mu: GaussianRational,
    alpha: Vec<GaussianRational>,
}

impl TryFrom<KElementRaw> for KElement {
    type Error = AlgebraError;
    fn try_from(raw: KElementRaw) -> Result<Self, Self::Error> {
        if raw.alpha.len() != raw.n {
            return Err(AlgebraError::Encoding(format!(
                "alpha has {} entries but n = {}",
                raw.alpha.len(),
                raw.n
            )));
        }
        Ok(Self {
            n: raw.n,
            lambda: raw.lambda,
            mu: raw.mu,
            alpha: raw.alpha,
        })
    }
}

impl From<KElement> for KElementRaw {
    fn from(a: KElement) -> Self {
        Self {
            n: a.n,
            lambda: a.lambda,
            mu: a.mu,
            alpha: a.alpha,
        }
    }
}

impl KElement {
    /// The zero element of K_N.
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            lambda: GaussianRational::zero(),
            mu: GaussianRational::zero(),
            alpha: vec![GaussianRational::zero(); n],
        }
    }

    /// The unit 1.
    pub fn one(n: usize) -> Self {
        Self::scalar(n, GaussianRational::one())
    }

    /// The scalar c·1.
    pub fn scalar(n: usize, c: GaussianRational) -> Self {
        let mut a = Self::zero(n);
        a.lambda = c;
        a
    }

    /// The idempotent e.
    pub fn e(n: usize) -> Self {
        let mut a = Self::zero(n);
        a.mu = GaussianRational::one();
        a
    }

    /// The arrow α_{k+1} (0-based index k; `alpha(n, 0)` is the first arrow).
    pub fn alpha(n: usize, k: usize) -> Self {
        assert!(k < n, "arrow index {k} out of range for K_{n}");
        let mut a = Self::zero(n);
        a.alpha[k] = GaussianRational::one();
        a
    }

    /// Builds λ·1 + μ·e + Σ aᵏ·α_k from parts.
    pub fn from_parts(
        n: usize,
        lambda: GaussianRational,
        mu: GaussianRational,
        alpha: Vec<GaussianRational>,
    ) -> Self {
        assert_eq!(alpha.len(), n, "alpha must have exactly n entries");
        Self { n, lambda, mu, alpha }
    }

    /// Rebuilds an element from its coordinate vector (λ, μ, a¹…aᴺ).
    pub fn from_coords(n: usize, coords: &[GaussianRational]) -> Self {
        assert_eq!(coords.len(), n + 2, "coordinate vector must have n + 2 entries");
        Self {
            n,
            lambda: coords[0].clone(),
            mu: coords[1].clone(),
            alpha: coords[2..].to_vec(),
        }
    }

    /// Arrow count N.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Coefficient of 1.
    pub fn lambda(&self) -> &GaussianRational {
        &self.lambda
    }

    /// Coefficient of e.
    pub fn mu(&self) -> &GaussianRational {
        &self.mu
    }

    /// Arrow coefficients (a¹…aᴺ).
    pub fn alpha_coeffs(&self) -> &[GaussianRational] {
        &self.alpha
    }

    /// The coordinate vector (λ, μ, a¹…aᴺ) in the fixed basis order.
    pub fn coords(&self) -> Vec<GaussianRational> {
        let mut v = Vec::with_capacity(self.n + 2);
        v.push(self.lambda.clone());
        v.push(self.mu.clone());
        v.extend(self.alpha.iter().cloned());
        v
    }

    /// True iff all coordinates vanish.
    pub fn is_zero(&self) -> bool {
        self.lambda.is_zero() && self.mu.is_zero() && self.alpha.iter().all(GaussianRational::is_zero)
    }

    /// Scales by a ℚ(i) scalar.
    #[must_use]
    pub fn scale(&self, c: &GaussianRational) -> Self {
        Self {
            n: self.n,
            lambda: &self.lambda * c,
            mu: &self.mu * c,
            alpha: self.alpha.iter().map(|a| a * c).collect(),
        }
    }

    fn assert_same_n(&self, rhs: &Self) {
        assert_eq!(
            self.n, rhs.n,
            "mixed arrow counts: K_{} vs K_{}",
            self.n, rhs.n
        );
    }

    /// The commutator [a, b] = ab − ba = (μ_a·bᵏ − μ_b·aᵏ)·α_k.
    #[must_use]
    pub fn commutator(&self, rhs: &Self) -> Self {
        self.assert_same_n(rhs);
        let mut out = Self::zero(self.n);
        for k in 0..self.n {
            out.alpha[k] = &(&self.mu * &rhs.alpha[k]) - &(&rhs.mu * &self.alpha[k]);
        }
        out
    }

    /// The involution a∗ = (conj λ + conj μ)·1 − conj(μ)·e + conj(aᵏ)·α_k
    /// (so e∗ = 1 − e and the arrows are fixed).
    #[must_use]
    pub fn star(&self) -> Self {
        Self {
            n: self.n,
            lambda: self.lambda.conj() + self.mu.conj(),
            mu: -self.mu.conj(),
            alpha: self.alpha.iter().map(GaussianRational::conj).collect(),
        }
    }

    /// True iff a∗ = a.
    pub fn is_hermitian(&self) -> bool {
        self == &self.star()
    }

    /// The inverse, defined iff λ ≠ 0 and λ + μ ≠ 0:
    /// a⁻¹ = [(λ+μ)·1 − μ·e − aᵏ·α_k] / (λ(λ+μ)).
    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        if self.lambda.is_zero() {
            return Err(AlgebraError::NotInvertible { reason: "lambda = 0" });
        }
        let lam_mu = &self.lambda + &self.mu;
        if lam_mu.is_zero() {
            return Err(AlgebraError::NotInvertible { reason: "lambda + mu = 0" });
        }
        let denominator = (&self.lambda * &lam_mu)
            .inv()
            .expect("nonzero by the checks above");
        Ok(Self {
            n: self.n,
            lambda: &lam_mu * &denominator,
            mu: -&self.mu * &denominator,
            alpha: self
                .alpha
                .iter()
                .map(|a| -(a * &denominator))
                .collect(),
        })
    }

    /// True iff a commutes with everything; the center is exactly ℚ(i)·1.
    pub fn is_central(&self) -> bool {
        self.mu.is_zero() && self.alpha.iter().all(GaussianRational::is_zero)
    }

    /// True iff a lies in the arrow ideal span{α_1…α_N} (λ = μ = 0).
    pub fn in_arrow_ideal(&self) -> bool {
        self.lambda.is_zero() && self.mu.is_zero()
    }
}

impl Add<&KElement> for &KElement {
    type Output = KElement;
    fn add(self, rhs: &KElement) -> KElement {
        self.assert_same_n(rhs);
        KElement {
            n: self.n,
            lambda: &self.lambda + &rhs.lambda,
            mu: &self.mu + &rhs.mu,
            alpha: self
                .alpha
                .iter()
                .zip(&rhs.alpha)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub<&KElement> for &KElement {
    type Output = KElement;
    fn sub(self, rhs: &KElement) -> KElement {
        self.assert_same_n(rhs);
        KElement {
            n: self.n,
            lambda: &self.lambda - &rhs.lambda,
            mu: &self.mu - &rhs.mu,
            alpha: self
                .alpha
                .iter()
                .zip(&rhs.alpha)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &KElement {
    type Output = KElement;
    fn neg(self) -> KElement {
        KElement {
            n: self.n,
            lambda: -&self.lambda,
            mu: -&self.mu,
            alpha: self.alpha.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul<&KElement> for &KElement {
    type Output = KElement;

    /// The closed product formula forced by the quiver relations:
    /// a·b = λ_aλ_b·1 + (λ_aμ_b + λ_bμ_a + μ_aμ_b)·e
    ///     + Σ ((λ_a + μ_a)·bᵏ + λ_b·aᵏ)·α_k.
    fn mul(self, rhs: &KElement) -> KElement {
        self.assert_same_n(rhs);
        let lambda = &self.lambda * &rhs.lambda;
        let mu = &(&(&self.lambda * &rhs.mu) + &(&rhs.lambda * &self.mu)) + &(&self.mu * &rhs.mu);
        let left_factor = &self.lambda + &self.mu;
        let alpha = self
            .alpha
            .iter()
            .zip(&rhs.alpha)
            .map(|(a, b)| &(&left_factor * b) + &(&rhs.lambda * a))
            .collect();
        KElement {
            n: self.n,
            lambda,
            mu,
            alpha,
        }
    }
}

macro_rules! owned_variants {
    ($trait:ident, $method:ident) => {
        impl $trait for KElement {
            type Output = KElement;
            fn $method(self, rhs: KElement) -> KElement {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&KElement> for KElement {
            type Output = KElement;
            fn $method(self, rhs: &KElement) -> KElement {
                (&self).$method(rhs)
            }
        }
    };
}

owned_variants!(Add, add);
owned_variants!(Sub, sub);
owned_variants!(Mul, mul);

impl Neg for KElement {
    type Output = KElement;
    fn neg(self) -> KElement {
        -&self
    }
}

impl fmt::Display for KElement {
    /// Human-readable form `λ·1 + μ·e + a¹·α1 + …` with zero terms omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.lambda.is_zero() {
            parts.push(format!("({})*1", self.lambda));
        }
        if !self.mu.is_zero() {
            parts.push(format!("({})*e", self.mu));
        }
        for (k, a) in self.alpha.iter().enumerate() {
            if !a.is_zero() {
                parts.push(format!("({})*alpha{}", a, k + 1));
            }
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// A trace functional on K_N, pinned down by two real rational parameters:
/// τ(1) = τ0, τ(e) = τ0/2 + i·τ1, τ(α_k) = 0.
///
/// These are exactly the functionals vanishing on commutators with real
/// values on 1 and hermitian-symmetric values elsewhere; no choice of
/// (τ0, τ1) ≠ (0, 0) is positive, which [`KTrace::non_positivity_witness`]
/// demonstrates constructively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KTrace {
    tau0: BigRational,
    tau1: BigRational,
}

// Serialized with canonical rational strings, like every scalar in the crate.
impl Serialize for KTrace {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("KTrace", 2)?;
        s.serialize_field("tau0", &self.tau0.to_string())?;
        s.serialize_field("tau1", &self.tau1.to_string())?;
        s.end()
    }
}

impl KTrace {
    /// Builds the trace with τ(1) = τ0 and τ(e) = τ0/2 + i·τ1.
    pub fn new(tau0: BigRational, tau1: BigRational) -> Self {
        Self { tau0, tau1 }
    }

    /// Convenience constructor from integer pairs (num, den).
    pub fn from_ratios(tau0: (i64, i64), tau1: (i64, i64)) -> Self {
        Self::new(
            BigRational::new(tau0.0.into(), tau0.1.into()),
            BigRational::new(tau1.0.into(), tau1.1.into()),
        )
    }

    /// τ(1).
    pub fn tau0(&self) -> &BigRational {
        &self.tau0
    }

    /// The imaginary part of τ(e).
    pub fn tau1(&self) -> &BigRational {
        &self.tau1
    }

    /// Evaluates τ(λ·1 + μ·e + Σ aᵏα_k) = λ·τ0 + μ·(τ0/2 + i·τ1).
    pub fn eval(&self, a: &KElement) -> GaussianRational {
        let tau_e = GaussianRational::new(
            &self.tau0 / BigRational::from_integer(2.into()),
            self.tau1.clone(),
        );
        let tau0 = GaussianRational::new(self.tau0.clone(), BigRational::zero());
        a.lambda() * &tau0 + a.mu() * &tau_e
    }

    /// Produces an element with τ(a∗a) < 0, demonstrating that the trace is
    /// not positive. Returns `None` iff τ0 = τ1 = 0 (the zero trace).
    ///
    /// For τ0 ≠ 0 a real combination a = 1 + μ·e suffices, since
    /// τ(a∗a) = (1+μ)·τ0 there; for τ0 = 0, τ1 ≠ 0 take a = i·1 + μ·e, where
    /// τ(a∗a) = 2μ·τ1.
    pub fn non_positivity_witness(&self, n: usize) -> Option<KElement> {
        if !self.tau0.is_zero() {
            let mu = if self.tau0.is_positive() {
                GaussianRational::from_int(-2)
            } else {
                GaussianRational::zero()
            };
            let mut a = KElement::one(n);
            a.mu = mu;
            Some(a)
        } else if !self.tau1.is_zero() {
            let mu = if self.tau1.is_positive() {
                GaussianRational::from_int(-1)
            } else {
                GaussianRational::one()
            };
            let mut a = KElement::scalar(n, GaussianRational::i());
            a.mu = mu;
            Some(a)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    fn sample(n: usize, seed: i64) -> KElement {
        // Deterministic small element with distinct coordinates.
        let mut coords = Vec::new();
        for k in 0..n as i64 + 2 {
            coords.push(GaussianRational::new(
                BigRational::new((seed + k).into(), 3.into()),
                BigRational::new((seed - 2 * k + 1).into(), 2.into()),
            ));
        }
        KElement::from_coords(n, &coords)
    }

    #[test]
    fn quiver_relations_hold() {
        let n = 3;
        let one = KElement::one(n);
        let e = KElement::e(n);
        assert_eq!(&e * &e, e);
        for k in 0..n {
            let a_k = KElement::alpha(n, k);
            assert_eq!(&e * &a_k, a_k, "e·α_k = α_k");
            assert!((&a_k * &e).is_zero(), "α_k·e = 0");
            assert_eq!(&one * &a_k, a_k);
            assert_eq!(&a_k * &one, a_k);
            for j in 0..n {
                assert!((&KElement::alpha(n, j) * &a_k).is_zero(), "α_j·α_k = 0");
            }
        }
    }

    #[test]
    fn commutator_matches_multiplication() {
        for seed in 0..6 {
            let a = sample(4, seed);
            let b = sample(4, seed + 11);
            let via_mul = &(&a * &b) - &(&b * &a);
            assert_eq!(a.commutator(&b), via_mul);
        }
    }

    #[test]
    fn star_is_an_involutive_antihomomorphism() {
        let n = 3;
        assert_eq!(KElement::e(n).star(), &KElement::one(n) - &KElement::e(n));
        assert_eq!(KElement::alpha(n, 1).star(), KElement::alpha(n, 1));
        for seed in 0..6 {
            let a = sample(n, seed);
            let b = sample(n, seed + 7);
            assert_eq!(a.star().star(), a, "involutive");
            assert_eq!((&a * &b).star(), &b.star() * &a.star(), "(ab)∗ = b∗a∗");
            // Conjugate-linearity on the i-multiples.
            assert_eq!(a.scale(&g("i")).star(), a.star().scale(&g("-i")));
        }
    }

    #[test]
    fn inverse_of_one_plus_e() {
        let n = 2;
        let a = &KElement::one(n) + &KElement::e(n);
        let inv = a.inverse().unwrap();
        // (1+e)⁻¹ = 1 − e/2.
        let expected = &KElement::one(n) - &KElement::e(n).scale(&g("1/2"));
        assert_eq!(inv, expected);
        assert_eq!(&a * &inv, KElement::one(n));
        assert_eq!(&inv * &a, KElement::one(n));
    }

    #[test]
    fn inverses_of_generic_elements() {
        for seed in [1, 3, 9] {
            let a = sample(3, seed);
            match a.inverse() {
                Ok(inv) => {
                    assert_eq!(&a * &inv, KElement::one(3));
                    assert_eq!(&inv * &a, KElement::one(3));
                }
                Err(_) => {
                    let lam_mu = a.lambda() + a.mu();
                    assert!(a.lambda().is_zero() || lam_mu.is_zero());
                }
            }
        }
    }

    #[test]
    fn non_invertible_elements_name_the_failing_condition() {
        let n = 2;
        assert_eq!(
            KElement::e(n).inverse().unwrap_err(),
            AlgebraError::NotInvertible { reason: "lambda = 0" }
        );
        let one_minus_e = &KElement::one(n) - &KElement::e(n);
        assert_eq!(
            one_minus_e.inverse().unwrap_err(),
            AlgebraError::NotInvertible { reason: "lambda + mu = 0" }
        );
        assert!(KElement::alpha(n, 0).inverse().is_err());
    }

    #[test]
    fn center_is_the_scalars() {
        let n = 3;
        assert!(KElement::one(n).is_central());
        assert!(KElement::scalar(n, g("2-i")).is_central());
        assert!(!KElement::e(n).is_central());
        assert!(!KElement::alpha(n, 2).is_central());
        // Cross-check against commutation with the generators.
        let gens: Vec<KElement> = std::iter::once(KElement::e(n))
            .chain((0..n).map(|k| KElement::alpha(n, k)))
            .collect();
        for seed in 0..8 {
            let a = sample(n, seed);
            let commutes = gens.iter().all(|x| a.commutator(x).is_zero());
            assert_eq!(a.is_central(), commutes);
        }
    }

    #[test]
    fn arrow_ideal_multiplies_to_zero() {
        let n = 3;
        let x = &KElement::alpha(n, 0) + &KElement::alpha(n, 2).scale(&g("2+i"));
        let y = KElement::alpha(n, 1);
        assert!(x.in_arrow_ideal());
        assert!((&x * &y).is_zero(), "products inside the ideal vanish");
        assert_eq!(&KElement::e(n) * &x, x, "e acts as identity on the left");
        assert!((&x * &KElement::e(n)).is_zero());
        assert!(!KElement::one(n).in_arrow_ideal());
    }

    #[test]
    fn trace_evaluates_on_the_basis() {
        let t = KTrace::from_ratios((3, 1), (1, 2));
        let n = 2;
        assert_eq!(t.eval(&KElement::one(n)), g("3"));
        assert_eq!(t.eval(&KElement::e(n)), g("3/2+1/2*i"));
        assert_eq!(t.eval(&KElement::alpha(n, 0)), g("0"));
        // τ((1+e)∗(1+e)) = 2·τ0.
        let a = &KElement::one(n) + &KElement::e(n);
        assert_eq!(t.eval(&(&a.star() * &a)), g("6"));
    }

    #[test]
    fn trace_vanishes_on_commutators() {
        let t = KTrace::from_ratios((2, 3), (-1, 4));
        for seed in 0..6 {
            let a = sample(3, seed);
            let b = sample(3, seed + 5);
            assert!(t.eval(&a.commutator(&b)).is_zero());
        }
    }

    #[test]
    fn non_positivity_witnesses_are_strict() {
        let n = 2;
        let grid = [-2i64, -1, 0, 1, 2];
        for &p in &grid {
            for &q in &grid {
                let t = KTrace::from_ratios((p, 2), (q, 3));
                match t.non_positivity_witness(n) {
                    Some(a) => {
                        let value = t.eval(&(&a.star() * &a));
                        assert!(value.is_real());
                        assert!(
                            value.re() < &BigRational::zero(),
                            "witness gives τ(a∗a) = {value} for τ0 = {p}/2, τ1 = {q}/3"
                        );
                    }
                    None => assert!(p == 0 && q == 0),
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let a = KElement::from_parts(2, g("1/2"), g("-i"), vec![g("0"), g("2+3*i")]);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(
            json,
            r#"{"n":2,"lambda":"1/2","mu":"-i","alpha":["0","2+3*i"]}"#
        );
        let back: KElement = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
        // Length mismatch is rejected.
        let bad = r#"{"n":3,"lambda":"0","mu":"0","alpha":["1"]}"#;
        assert!(serde_json::from_str::<KElement>(bad).is_err());
    }
}
