//! Derivations of K_N and the Lie subalgebras the calculi are built from.
//!
//! A derivation of K_N is pinned down by its values on the generators:
//! ∂e = Σ aᵏ·α_k and ∂α_i = Σ b_iᵏ·α_k, with (a, b) arbitrary — every such
//! datum satisfies the Leibniz rule, and ∂1 = 0 forces nothing else. The
//! full derivation Lie algebra therefore has dimension N + N², with
//! distinguished elements
//!
//! * ∂_k: ∂_k e = i·α_k, ∂_k α_j = 0 (inner, witness −i·α_k),
//! * ∂_kˡ: ∂_kˡ e = 0, ∂_kˡ α_j = δ_jˡ·α_k,
//! * ∂̂ = Σ ∂_kᵏ (inner, witness e),
//! * ∂̃_i = ∂_i + ∂_iⁱ,
//!
//! whose brackets close as [∂_iʲ, ∂_kˡ] = δ_kʲ∂_iˡ − δ_iˡ∂_kʲ,
//! [∂_iʲ, ∂_k] = δ_kʲ∂_i, [∂_i, ∂_j] = 0. All of them are hermitian for the
//! involution ∂∗ = ∗∘∂∘∗. An arbitrary derivation is inner iff its b-matrix
//! is a scalar multiple of the identity; witnesses are unique up to the
//! center and normalized here to have no 1-component.

use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::kronecker::{AlgebraError, KElement};
use crate::linalg::Mat;
use crate::scalar::GaussianRational;

/// A derivation of K_N, stored by its generator values
/// (∂e = Σ aᵏα_k, ∂α_i = Σ b_iᵏα_k).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DerivationRaw", into = "DerivationRaw")]
pub struct Derivation {
    n: usize,
    /// Coefficients of ∂e on (α_1…α_N).
    a: Vec<GaussianRational>,
    /// Row i holds the coefficients of ∂α_{i+1} on (α_1…α_N).
    b: Vec<Vec<GaussianRational>>,
}

/// Wire form of [`Derivation`]: `a` of length n, `b` an n×n row-major matrix.
#[derive(Serialize, Deserialize)]
struct DerivationRaw {
    n: usize,
    a: Vec<GaussianRational>,
    b: Vec<Vec<GaussianRational>>,
}

impl TryFrom<DerivationRaw> for Derivation {
    type Error = AlgebraError;
    fn try_from(raw: DerivationRaw) -> Result<Self, Self::Error> {
        if raw.a.len() != raw.n {
            return Err(AlgebraError::Encoding(format!(
                "a has {} entries but n = {}",
                raw.a.len(),
                raw.n
            )));
        }
        if raw.b.len() != raw.n || raw.b.iter().any(|row| row.len() != raw.n) {
            return Err(AlgebraError::Encoding(format!(
                "b must be an {0}×{0} matrix",
                raw.n
            )));
        }
        Ok(Self {
            n: raw.n,
            a: raw.a,
            b: raw.b,
        })
    }
}

impl From<Derivation> for DerivationRaw {
    fn from(d: Derivation) -> Self {
        Self { n: d.n, a: d.a, b: d.b }
    }
}

impl Derivation {
    /// The zero derivation.
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            a: vec![GaussianRational::zero(); n],
            b: vec![vec![GaussianRational::zero(); n]; n],
        }
    }

    /// Builds a derivation from its generator data.
    pub fn from_data(n: usize, a: Vec<GaussianRational>, b: Vec<Vec<GaussianRational>>) -> Self {
        assert_eq!(a.len(), n, "a must have n entries");
        assert!(
            b.len() == n && b.iter().all(|row| row.len() == n),
            "b must be an n×n matrix"
        );
        Self { n, a, b }
    }

    /// ∂_{k+1} (0-based k): e ↦ i·α_{k+1}, arrows ↦ 0.
    pub fn d_lower(n: usize, k: usize) -> Self {
        assert!(k < n, "index {k} out of range for K_{n}");
        let mut d = Self::zero(n);
        d.a[k] = GaussianRational::i();
        d
    }

    /// ∂_{k+1}^{l+1} (0-based k, l): e ↦ 0, α_{l+1} ↦ α_{k+1}, other arrows ↦ 0.
    pub fn d_upper(n: usize, k: usize, l: usize) -> Self {
        assert!(k < n && l < n, "index ({k},{l}) out of range for K_{n}");
        let mut d = Self::zero(n);
        d.b[l][k] = GaussianRational::one();
        d
    }

    /// ∂̂ = Σ_k ∂_kᵏ: e ↦ 0, α_i ↦ α_i.
    pub fn d_hat(n: usize) -> Self {
        let mut d = Self::zero(n);
        for k in 0..n {
            d.b[k][k] = GaussianRational::one();
        }
        d
    }

    /// ∂̃_{i+1} = ∂_{i+1} + ∂_{i+1}^{i+1} (0-based i): e ↦ i·α_{i+1},
    /// α_{i+1} ↦ α_{i+1}, other arrows ↦ 0.
    pub fn d_tilde(n: usize, i: usize) -> Self {
        &Self::d_lower(n, i) + &Self::d_upper(n, i, i)
    }

    /// Arrow count N.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Applies the derivation: ∂(λ·1 + μ·e + Σ xⁱα_i) = μ·∂e + Σ xⁱ·∂α_i,
    /// always landing in the arrow ideal.
    pub fn apply(&self, x: &KElement) -> KElement {
        assert_eq!(self.n, x.n(), "mixed arrow counts");
        let mut arrow = vec![GaussianRational::zero(); self.n];
        let mu = x.mu();
        if !mu.is_zero() {
            for (k, ak) in self.a.iter().enumerate() {
                arrow[k] = mu * ak;
            }
        }
        for (i, xi) in x.alpha_coeffs().iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (k, bik) in self.b[i].iter().enumerate() {
                arrow[k] += &(xi * bik);
            }
        }
        KElement::from_parts(
            self.n,
            GaussianRational::zero(),
            GaussianRational::zero(),
            arrow,
        )
    }

    /// The Lie bracket [∂, ∂′] = ∂∘∂′ − ∂′∘∂, computed on generator data:
    /// a ↦ a′·B − a·B′ and B ↦ B′·B − B·B′ (rows acting on the left).
    #[must_use]
    pub fn bracket(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "mixed arrow counts");
        let n = self.n;
        let mut out = Self::zero(n);
        for m in 0..n {
            let mut acc = GaussianRational::zero();
            for k in 0..n {
                acc += &(&rhs.a[k] * &self.b[k][m]);
                acc -= &(&self.a[k] * &rhs.b[k][m]);
            }
            out.a[m] = acc;
        }
        for i in 0..n {
            for m in 0..n {
                let mut acc = GaussianRational::zero();
                for k in 0..n {
                    acc += &(&rhs.b[i][k] * &self.b[k][m]);
                    acc -= &(&self.b[i][k] * &rhs.b[k][m]);
                }
                out.b[i][m] = acc;
            }
        }
        out
    }

    /// The involution ∂∗ = ∗∘∂∘∗; on data: a ↦ −conj(a), b ↦ conj(b).
    #[must_use]
    pub fn star(&self) -> Self {
        Self {
            n: self.n,
            a: self.a.iter().map(|c| -c.conj()).collect(),
            b: self
                .b
                .iter()
                .map(|row| row.iter().map(GaussianRational::conj).collect())
                .collect(),
        }
    }

    /// True iff ∂∗ = ∂.
    pub fn is_hermitian(&self) -> bool {
        self == &self.star()
    }

    /// Scales by a ℚ(i) scalar.
    #[must_use]
    pub fn scale(&self, c: &GaussianRational) -> Self {
        Self {
            n: self.n,
            a: self.a.iter().map(|x| x * c).collect(),
            b: self
                .b
                .iter()
                .map(|row| row.iter().map(|x| x * c).collect())
                .collect(),
        }
    }

    /// True iff this is the zero derivation.
    pub fn is_zero(&self) -> bool {
        self.a.iter().all(GaussianRational::is_zero)
            && self.b.iter().flatten().all(GaussianRational::is_zero)
    }

    /// The coordinate vector (a¹…aᴺ, b_1¹…b_1ᴺ, …, b_N¹…b_Nᴺ) in the fixed
    /// order used for all span computations.
    pub fn coords(&self) -> Vec<GaussianRational> {
        let mut v = Vec::with_capacity(self.n + self.n * self.n);
        v.extend(self.a.iter().cloned());
        for row in &self.b {
            v.extend(row.iter().cloned());
        }
        v
    }

    /// Rebuilds a derivation from [`Derivation::coords`] layout.
    pub fn from_coords(n: usize, coords: &[GaussianRational]) -> Self {
        assert_eq!(coords.len(), n + n * n, "bad coordinate length");
        let a = coords[..n].to_vec();
        let b = (0..n)
            .map(|i| coords[n + i * n..n + (i + 1) * n].to_vec())
            .collect();
        Self { n, a, b }
    }

    /// Checks the Leibniz rule ∂(xy) = ∂(x)·y + x·∂(y) on a concrete pair.
    pub fn satisfies_leibniz(&self, x: &KElement, y: &KElement) -> bool {
        let lhs = self.apply(&(x * y));
        let rhs = &(&self.apply(x) * y) + &(x * &self.apply(y));
        lhs == rhs
    }

    /// If ∂ is inner — here iff b = c·Id — returns the witness w = c·e − Σ aᵏα_k
    /// with ∂(x) = [w, x]; the witness is normalized to have zero
    /// 1-component (it is unique up to the center ℚ(i)·1).
    pub fn inner_witness(&self) -> Option<KElement> {
        let c = self.b[0][0].clone();
        for i in 0..self.n {
            for k in 0..self.n {
                let expected = if i == k { c.clone() } else { GaussianRational::zero() };
                if self.b[i][k] != expected {
                    return None;
                }
            }
        }
        let arrow = self.a.iter().map(|ak| -ak).collect();
        Some(KElement::from_parts(
            self.n,
            GaussianRational::zero(),
            c,
            arrow,
        ))
    }
}

impl Add<&Derivation> for &Derivation {
    type Output = Derivation;
    fn add(self, rhs: &Derivation) -> Derivation {
        assert_eq!(self.n, rhs.n, "mixed arrow counts");
        Derivation {
            n: self.n,
            a: self.a.iter().zip(&rhs.a).map(|(x, y)| x + y).collect(),
            b: self
                .b
                .iter()
                .zip(&rhs.b)
                .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
                .collect(),
        }
    }
}

impl Sub<&Derivation> for &Derivation {
    type Output = Derivation;
    fn sub(self, rhs: &Derivation) -> Derivation {
        self + &(-rhs)
    }
}

impl Neg for &Derivation {
    type Output = Derivation;
    fn neg(self) -> Derivation {
        self.scale(&GaussianRational::from_int(-1))
    }
}

/// The three named choices of 𝔤 ⊆ Der(K_N).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubalgebraKind {
    /// All of Der(K_N); basis {∂_k} ∪ {∂_kˡ}, dimension N + N².
    Der,
    /// The inner derivations; basis {∂̂, ∂_1…∂_N}, dimension N + 1.
    Inner,
    /// span{∂̃_1…∂̃_N}, abelian, dimension N.
    Tilde,
    /// A caller-supplied basis.
    Custom,
}

impl SubalgebraKind {
    /// Parses the CLI names `der`, `inner`, `tilde`.
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "der" => Some(Self::Der),
            "inner" => Some(Self::Inner),
            "tilde" => Some(Self::Tilde),
            _ => None,
        }
    }

    /// The CLI name.
    pub fn name(self) -> &'static str {
        match self {
            Self::Der => "der",
            Self::Inner => "inner",
            Self::Tilde => "tilde",
            Self::Custom => "custom",
        }
    }
}

/// A Lie subalgebra 𝔤 ⊆ Der(K_N) with a fixed, independent, labeled basis.
///
/// All downstream objects (calculi, connections, Levi-Civita systems) are
/// expressed against the basis order fixed here.
#[derive(Debug, Clone)]
pub struct LieSubalgebra {
    n: usize,
    kind: SubalgebraKind,
    basis: Vec<Derivation>,
    labels: Vec<String>,
    /// Rows are the coordinate vectors of the basis elements.
    basis_mat: Mat,
}

impl LieSubalgebra {
    fn build(n: usize, kind: SubalgebraKind, basis: Vec<Derivation>, labels: Vec<String>) -> Self {
        assert!(n >= 1, "K_N needs at least one arrow");
        assert_eq!(basis.len(), labels.len());
        let basis_mat = Mat::from_rows(basis.iter().map(Derivation::coords).collect());
        let g = Self {
            n,
            kind,
            basis,
            labels,
            basis_mat,
        };
        assert_eq!(
            g.basis_mat.rank(),
            g.basis.len(),
            "subalgebra basis must be linearly independent"
        );
        g
    }

    /// The full derivation algebra Der(K_N): ∂_1…∂_N, then ∂_kˡ in
    /// row-major (k, l) order.
    pub fn der(n: usize) -> Self {
        let mut basis = Vec::new();
        let mut labels = Vec::new();
        for k in 0..n {
            basis.push(Derivation::d_lower(n, k));
            labels.push(format!("d{}", k + 1));
        }
        for k in 0..n {
            for l in 0..n {
                basis.push(Derivation::d_upper(n, k, l));
                labels.push(format!("d{}^{}", k + 1, l + 1));
            }
        }
        Self::build(n, SubalgebraKind::Der, basis, labels)
    }

    /// The inner derivations 𝔤_inn = span{∂̂, ∂_1…∂_N}.
    pub fn inner(n: usize) -> Self {
        let mut basis = vec![Derivation::d_hat(n)];
        let mut labels = vec!["dhat".to_string()];
        for k in 0..n {
            basis.push(Derivation::d_lower(n, k));
            labels.push(format!("d{}", k + 1));
        }
        Self::build(n, SubalgebraKind::Inner, basis, labels)
    }

    /// The abelian subalgebra 𝔤~ = span{∂̃_1…∂̃_N}.
    pub fn tilde(n: usize) -> Self {
        let basis = (0..n).map(|i| Derivation::d_tilde(n, i)).collect();
        let labels = (0..n).map(|i| format!("dt{}", i + 1)).collect();
        Self::build(n, SubalgebraKind::Tilde, basis, labels)
    }

    /// The named subalgebra of the given kind (`Custom` is not permitted
    /// here; use [`LieSubalgebra::custom`]).
    pub fn named(kind: SubalgebraKind, n: usize) -> Self {
        match kind {
            SubalgebraKind::Der => Self::der(n),
            SubalgebraKind::Inner => Self::inner(n),
            SubalgebraKind::Tilde => Self::tilde(n),
            SubalgebraKind::Custom => panic!("custom subalgebras need an explicit basis"),
        }
    }

    /// A subalgebra on a caller-supplied independent basis. Panics when the
    /// basis is dependent; bracket/star closure are reported by
    /// [`LieSubalgebra::bracket_closed`] and [`LieSubalgebra::star_closed`]
    /// rather than enforced, so callers can inspect failures.
    pub fn custom(n: usize, basis: Vec<Derivation>) -> Self {
        let labels = (1..=basis.len()).map(|i| format!("x{i}")).collect();
        Self::build(n, SubalgebraKind::Custom, basis, labels)
    }

    /// Arrow count N.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Which named family this is.
    pub fn kind(&self) -> SubalgebraKind {
        self.kind
    }

    /// The basis derivations, in the fixed order.
    pub fn basis(&self) -> &[Derivation] {
        &self.basis
    }

    /// Human-readable labels parallel to [`LieSubalgebra::basis`].
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// dim 𝔤 (= the basis length; the constructor checks independence).
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of ∂ in the basis, or `None` when ∂ ∉ 𝔤.
    pub fn coordinates_of(&self, d: &Derivation) -> Option<Vec<GaussianRational>> {
        assert_eq!(self.n, d.n(), "mixed arrow counts");
        self.basis_mat.coordinates_in_rows(&d.coords())
    }

    /// True iff ∂ ∈ 𝔤.
    pub fn contains(&self, d: &Derivation) -> bool {
        self.coordinates_of(d).is_some()
    }

    /// Rebuilds Σ cᵏ·∂_k from basis coordinates.
    pub fn from_coordinates(&self, coords: &[GaussianRational]) -> Derivation {
        assert_eq!(coords.len(), self.dim(), "coordinate length mismatch");
        let mut out = Derivation::zero(self.n);
        for (c, d) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                out = &out + &d.scale(c);
            }
        }
        out
    }

    /// True iff all pairwise brackets of basis elements stay in the span.
    pub fn bracket_closed(&self) -> bool {
        self.basis.iter().enumerate().all(|(i, di)| {
            self.basis
                .iter()
                .skip(i + 1)
                .all(|dj| self.contains(&di.bracket(dj)))
        })
    }

    /// True iff ∂∗ stays in the span for every basis element.
    pub fn star_closed(&self) -> bool {
        self.basis.iter().all(|d| self.contains(&d.star()))
    }

    /// A hermitian basis of 𝔤 (requires star-closure). The named bases are
    /// already hermitian and returned as-is; otherwise a maximal independent
    /// subset of {∂ + ∂∗, i(∂ − ∂∗)} over the basis is selected greedily in
    /// that order.
    pub fn hermitian_basis(&self) -> Vec<Derivation> {
        if self.basis.iter().all(Derivation::is_hermitian) {
            return self.basis.clone();
        }
        assert!(
            self.star_closed(),
            "a hermitian basis needs a star-closed subalgebra"
        );
        let mut chosen: Vec<Derivation> = Vec::new();
        let mut rows: Vec<Vec<GaussianRational>> = Vec::new();
        for d in &self.basis {
            let ds = d.star();
            for candidate in [d + &ds, (d - &ds).scale(&GaussianRational::i())] {
                if candidate.is_zero() {
                    continue;
                }
                let mut trial = rows.clone();
                trial.push(candidate.coords());
                if Mat::from_rows(trial.clone()).rank() == rows.len() + 1 {
                    rows = trial;
                    chosen.push(candidate);
                    if chosen.len() == self.dim() {
                        return chosen;
                    }
                }
            }
        }
        assert_eq!(
            chosen.len(),
            self.dim(),
            "hermitian candidates failed to span the subalgebra"
        );
        chosen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    fn sample_element(n: usize, seed: i64) -> KElement {
        let coords: Vec<GaussianRational> = (0..n as i64 + 2)
            .map(|k| {
                GaussianRational::new(
                    num::BigRational::new((seed * 3 + k).into(), 2.into()),
                    num::BigRational::new((k - seed).into(), 5.into()),
                )
            })
            .collect();
        KElement::from_coords(n, &coords)
    }

    fn sample_derivation(n: usize, seed: i64) -> Derivation {
        let coords: Vec<GaussianRational> = (0..(n + n * n) as i64)
            .map(|k| {
                GaussianRational::new(
                    num::BigRational::new((seed - k).into(), 3.into()),
                    num::BigRational::new((2 * seed + k).into(), 7.into()),
                )
            })
            .collect();
        Derivation::from_coords(n, &coords)
    }

    #[test]
    fn named_derivations_act_as_defined() {
        let n = 3;
        let e = KElement::e(n);
        for k in 0..n {
            let d = Derivation::d_lower(n, k);
            assert_eq!(d.apply(&e), KElement::alpha(n, k).scale(&g("i")));
            for j in 0..n {
                assert!(d.apply(&KElement::alpha(n, j)).is_zero());
            }
        }
        for k in 0..n {
            for l in 0..n {
                let d = Derivation::d_upper(n, k, l);
                assert!(d.apply(&e).is_zero());
                for j in 0..n {
                    let expected = if j == l {
                        KElement::alpha(n, k)
                    } else {
                        KElement::zero(n)
                    };
                    assert_eq!(d.apply(&KElement::alpha(n, j)), expected);
                }
            }
        }
        // ∂ vanishes on 1 and lands in the arrow ideal.
        let d = sample_derivation(n, 5);
        assert!(d.apply(&KElement::one(n)).is_zero());
        assert!(d.apply(&sample_element(n, 2)).in_arrow_ideal());
    }

    #[test]
    fn all_generator_data_satisfy_leibniz() {
        let n = 3;
        for seed in 0..5 {
            let d = sample_derivation(n, seed);
            // Generators…
            let mut gens = vec![KElement::one(n), KElement::e(n)];
            gens.extend((0..n).map(|k| KElement::alpha(n, k)));
            for x in &gens {
                for y in &gens {
                    assert!(d.satisfies_leibniz(x, y));
                }
            }
            // …and generic elements.
            let x = sample_element(n, seed + 3);
            let y = sample_element(n, 2 * seed + 1);
            assert!(d.satisfies_leibniz(&x, &y));
        }
    }

    #[test]
    fn bracket_matches_composition_on_elements() {
        let n = 3;
        for seed in 0..4 {
            let d1 = sample_derivation(n, seed);
            let d2 = sample_derivation(n, seed + 9);
            let br = d1.bracket(&d2);
            for probe in [
                KElement::e(n),
                KElement::alpha(n, 0),
                KElement::alpha(n, 2),
                sample_element(n, seed),
            ] {
                let composed = &d1.apply(&d2.apply(&probe)) - &d2.apply(&d1.apply(&probe));
                assert_eq!(br.apply(&probe), composed);
            }
        }
    }

    #[test]
    fn bracket_table_of_named_derivations() {
        let n = 4;
        // [∂_iʲ, ∂_kˡ] = δ_kʲ·∂_iˡ − δ_iˡ·∂_kʲ.
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let lhs = Derivation::d_upper(n, i, j).bracket(&Derivation::d_upper(n, k, l));
                        let mut rhs = Derivation::zero(n);
                        if k == j {
                            rhs = &rhs + &Derivation::d_upper(n, i, l);
                        }
                        if i == l {
                            rhs = &rhs - &Derivation::d_upper(n, k, j);
                        }
                        assert_eq!(lhs, rhs, "[d_{i}^{j}, d_{k}^{l}]");
                    }
                }
            }
        }
        // [∂_iʲ, ∂_k] = δ_kʲ·∂_i and [∂_i, ∂_j] = 0.
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = Derivation::d_upper(n, i, j).bracket(&Derivation::d_lower(n, k));
                    let rhs = if k == j {
                        Derivation::d_lower(n, i)
                    } else {
                        Derivation::zero(n)
                    };
                    assert_eq!(lhs, rhs, "[d_{i}^{j}, d_{k}]");
                }
                assert!(Derivation::d_lower(n, i)
                    .bracket(&Derivation::d_lower(n, j))
                    .is_zero());
            }
        }
    }

    #[test]
    fn named_derivations_are_hermitian() {
        let n = 3;
        for k in 0..n {
            assert!(Derivation::d_lower(n, k).is_hermitian());
            for l in 0..n {
                assert!(Derivation::d_upper(n, k, l).is_hermitian());
            }
            assert!(Derivation::d_tilde(n, k).is_hermitian());
        }
        assert!(Derivation::d_hat(n).is_hermitian());
        // star is conjugate-linear: (i·∂)∗ = −i·∂∗.
        let d = sample_derivation(n, 4);
        assert_eq!(d.scale(&g("i")).star(), d.star().scale(&g("-i")));
        // star respects brackets of hermitian elements.
        let d1 = Derivation::d_lower(n, 0);
        let d2 = Derivation::d_hat(n);
        assert_eq!(d1.bracket(&d2).star(), d1.star().bracket(&d2.star()));
    }

    #[test]
    fn star_via_elements() {
        // ∂∗(x) = (∂(x∗))∗ pointwise.
        let n = 2;
        for seed in 0..5 {
            let d = sample_derivation(n, seed);
            let ds = d.star();
            for probe in [KElement::e(n), KElement::alpha(n, 1), sample_element(n, seed)] {
                assert_eq!(ds.apply(&probe), d.apply(&probe.star()).star());
            }
        }
    }

    #[test]
    fn inner_witnesses_match_the_displayed_forms() {
        let n = 3;
        // ∂̂(x) = [e, x].
        let w = Derivation::d_hat(n).inner_witness().unwrap();
        assert_eq!(w, KElement::e(n));
        // ∂_k(x) = [−i·α_k, x].
        for k in 0..n {
            let w = Derivation::d_lower(n, k).inner_witness().unwrap();
            assert_eq!(w, KElement::alpha(n, k).scale(&g("-i")));
        }
        // The witness reproduces the derivation on generators and samples.
        let d = &Derivation::d_hat(n).scale(&g("2-i")) + &Derivation::d_lower(n, 1);
        let w = d.inner_witness().unwrap();
        for probe in [
            KElement::e(n),
            KElement::alpha(n, 0),
            KElement::alpha(n, 1),
            sample_element(n, 7),
        ] {
            assert_eq!(d.apply(&probe), w.commutator(&probe));
        }
    }

    #[test]
    fn non_inner_derivations_have_no_witness() {
        let n = 2;
        assert!(Derivation::d_upper(n, 0, 1).inner_witness().is_none());
        assert!(Derivation::d_tilde(n, 0).inner_witness().is_none());
        // b = diag(1, 2) is not scalar.
        let mut d = Derivation::zero(n);
        d.b[1][1] = g("2");
        d.b[0][0] = g("1");
        assert!(d.inner_witness().is_none());
    }

    #[test]
    fn named_subalgebras_have_the_right_shape() {
        for n in 1..=4 {
            let full = LieSubalgebra::der(n);
            assert_eq!(full.dim(), n + n * n);
            assert!(full.bracket_closed());
            assert!(full.star_closed());

            let inner = LieSubalgebra::inner(n);
            assert_eq!(inner.dim(), n + 1);
            assert!(inner.bracket_closed());
            assert!(inner.star_closed());
            for d in inner.basis() {
                assert!(d.inner_witness().is_some());
            }

            let tilde = LieSubalgebra::tilde(n);
            assert_eq!(tilde.dim(), n);
            assert!(tilde.bracket_closed());
            assert!(tilde.star_closed());
            // Abelian: all brackets vanish outright.
            for d1 in tilde.basis() {
                for d2 in tilde.basis() {
                    assert!(d1.bracket(d2).is_zero());
                }
            }
        }
    }

    #[test]
    fn membership_and_coordinates() {
        let n = 3;
        let inner = LieSubalgebra::inner(n);
        let d = &Derivation::d_hat(n).scale(&g("1/2")) + &Derivation::d_lower(n, 2).scale(&g("-i"));
        let coords = inner.coordinates_of(&d).unwrap();
        assert_eq!(coords[0], g("1/2"));
        assert_eq!(coords[3], g("-i"));
        assert_eq!(inner.from_coordinates(&coords), d);
        assert!(!inner.contains(&Derivation::d_upper(n, 0, 1)));
        assert!(LieSubalgebra::der(n).contains(&Derivation::d_upper(n, 0, 1)));
    }

    #[test]
    fn tilde_basis_acts_as_displayed() {
        // ∂̃_i e = i·α_i, ∂̃_i α_k = δ_ik·α_i.
        let n = 3;
        for i in 0..n {
            let d = Derivation::d_tilde(n, i);
            assert_eq!(d.apply(&KElement::e(n)), KElement::alpha(n, i).scale(&g("i")));
            for k in 0..n {
                let expected = if i == k {
                    KElement::alpha(n, i)
                } else {
                    KElement::zero(n)
                };
                assert_eq!(d.apply(&KElement::alpha(n, k)), expected);
            }
        }
    }

    #[test]
    fn hermitian_basis_of_a_skewed_custom_subalgebra() {
        let n = 2;
        // span{i·∂̂, ∂_1} is star-closed but its first basis vector is not
        // hermitian.
        let g_alg = LieSubalgebra::custom(
            n,
            vec![
                Derivation::d_hat(n).scale(&g("i")),
                Derivation::d_lower(n, 0),
            ],
        );
        assert!(g_alg.star_closed());
        let herm = g_alg.hermitian_basis();
        assert_eq!(herm.len(), 2);
        for h in &herm {
            assert!(h.is_hermitian());
            assert!(g_alg.contains(h));
        }
    }

    #[test]
    fn inner_derivations_span_check() {
        // A derivation is inner iff its b-matrix is scalar; cross-check the
        // witness criterion against membership in the inner subalgebra.
        let n = 3;
        let inner = LieSubalgebra::inner(n);
        for seed in 0..6 {
            let d = sample_derivation(n, seed);
            assert_eq!(d.inner_witness().is_some(), inner.contains(&d));
        }
        let hat = Derivation::d_hat(n);
        assert!(inner.contains(&hat));
        assert!(hat.inner_witness().is_some());
    }

    #[test]
    fn json_round_trip() {
        let d = Derivation::d_tilde(2, 1);
        let json = serde_json::to_string(&d).unwrap();
        assert_eq!(json, r#"{"n":2,"a":["0","i"],"b":[["0","0"],["0","1"]]}"#);
        let back: Derivation = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d);
        let bad = r#"{"n":2,"a":["0"],"b":[["0","0"],["0","1"]]}"#;
        assert!(serde_json::from_str::<Derivation>(bad).is_err());
    }
}
