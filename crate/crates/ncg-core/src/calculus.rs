//! The derivation-based first-order differential calculus Ω¹_𝔤 over K_N.
//!
//! For a Lie subalgebra 𝔤 ⊆ Der(K_N), one-forms are the K_N-valued
//! 𝔤-multilinear functionals generated by the differentials. Because every
//! derivation lands in the arrow ideal, Ω¹_𝔤 is spanned by the N + 1 symbols
//! dα_0, dα_1, …, dα_N, where **dα_0 := i·de** fixes the normalization of
//! the extra generator, and
//!
//! * a·dα_I = (λ_a + μ_a)·dα_I and dα_I·a = λ_a·dα_I (bimodule actions),
//! * (dα_I)∗ = dα_I,
//! * all higher wedge products vanish (products of arrow-ideal elements are
//!   zero), so Ωᵏ = 0 for k ≥ 2 and every 2-form evaluation is a residual
//!   that must come out exactly zero.
//!
//! Depending on 𝔤 the spanning set may satisfy relations (for 𝔤~ the single
//! relation dα_0 + dα_1 + … + dα_N = 0); a [`Calculus`] precomputes the
//! relation space, a canonical basis of Ω¹, and the reduction matrix between
//! the two descriptions. Two one-forms are equal iff their evaluations on a
//! basis of 𝔤 agree, which is exactly membership of the coefficient
//! difference in the relation space.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::derivation::{Derivation, LieSubalgebra};
use crate::kronecker::{KElement, KTrace};
use crate::linalg::{row_times_mat, Mat};
use crate::scalar::GaussianRational;

/// Errors from calculus operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalculusError {
    /// A one-form was evaluated on a derivation outside 𝔤.
    #[error("derivation is not in the chosen subalgebra; one-forms are only defined against it")]
    NotInSubalgebra,
    /// ∫da := τ(a) is ill-defined because τ does not kill ker d.
    #[error("integral is ill-defined: trace does not vanish on ker d (witness {witness} with trace {value})")]
    IllDefinedIntegral {
        /// A kernel element with nonzero trace.
        witness: String,
        /// Its trace value.
        value: String,
    },
}

/// A one-form in spanning coefficients: Σ_I λ^I·dα_I with I = 0…N.
///
/// Equality of the coefficient vectors is *finer* than equality of the forms
/// they describe; use [`Calculus::forms_equal`] (membership of the
/// difference in the relation space) for the semantic comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneForm {
    n: usize,
    coeffs: Vec<GaussianRational>,
}

impl OneForm {
    /// The zero form over K_N.
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            coeffs: vec![GaussianRational::zero(); n + 1],
        }
    }

    /// Builds Σ λ^I·dα_I from its N+1 spanning coefficients (index 0 is dα_0).
    pub fn from_coeffs(n: usize, coeffs: Vec<GaussianRational>) -> Self {
        assert_eq!(coeffs.len(), n + 1, "a one-form over K_N has N+1 coefficients");
        Self { n, coeffs }
    }

    /// The basis symbol dα_I (I = 0 is dα_0 = i·de).
    pub fn d_alpha(n: usize, i: usize) -> Self {
        assert!(i <= n, "dα_{i} out of range for K_{n}");
        let mut w = Self::zero(n);
        w.coeffs[i] = GaussianRational::one();
        w
    }

    /// Arrow count N.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The spanning coefficients (λ⁰…λᴺ).
    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    /// Coefficient-wise sum.
    #[must_use]
    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "mixed arrow counts");
        Self {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Coefficient-wise difference.
    #[must_use]
    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "mixed arrow counts");
        Self {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Scales by a ℚ(i) scalar.
    #[must_use]
    pub fn scale(&self, c: &GaussianRational) -> Self {
        Self {
            n: self.n,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// The involution: (Σ λ^I dα_I)∗ = Σ conj(λ^I) dα_I, since the spanning
    /// symbols are self-adjoint.
    #[must_use]
    pub fn star(&self) -> Self {
        Self {
            n: self.n,
            coeffs: self.coeffs.iter().map(GaussianRational::conj).collect(),
        }
    }

    /// Left action a·ω: every spanning symbol scales by (λ_a + μ_a).
    #[must_use]
    pub fn act_left(&self, a: &KElement) -> Self {
        assert_eq!(self.n, a.n(), "mixed arrow counts");
        self.scale(&(a.lambda() + a.mu()))
    }

    /// Right action ω·a: every spanning symbol scales by λ_a.
    #[must_use]
    pub fn act_right(&self, a: &KElement) -> Self {
        assert_eq!(self.n, a.n(), "mixed arrow counts");
        self.scale(a.lambda())
    }

    /// True iff all spanning coefficients vanish (stronger than being the
    /// zero *form* when relations exist).
    pub fn coeffs_are_zero(&self) -> bool {
        self.coeffs.iter().all(GaussianRational::is_zero)
    }
}

impl fmt::Display for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({c})*dalpha{i}"))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Shape summary of Ω¹_𝔤, serialized into CLI reports.
#[derive(Debug, Clone, Serialize)]
pub struct CalculusSummary {
    /// Arrow count N.
    pub n: usize,
    /// Name of 𝔤.
    pub g: String,
    /// dim 𝔤.
    pub g_dim: usize,
    /// dim Ω¹_𝔤.
    pub dim_omega1: usize,
    /// True iff {dα_0…dα_N} is a basis (no relations), which is exactly
    /// connectedness of the calculus (ker d = ℚ(i)·1).
    pub connected: bool,
    /// Reduced basis of the relation space among the spanning symbols.
    pub relations: Vec<Vec<GaussianRational>>,
    /// Indices of the canonical basis {dx_a} ⊆ {dα_I}.
    pub basis_indices: Vec<usize>,
    /// dim ker(d: K_N → Ω¹) = dim H⁰.
    pub h0_dim: usize,
    /// dim Ω¹ / im(d) = dim H¹ (always 0: every one-form has an explicit
    /// preimage).
    pub h1_dim: usize,
}

/// The first-order calculus Ω¹_𝔤 for a fixed 𝔤, with precomputed evaluation,
/// relation, and reduction data.
#[derive(Debug, Clone)]
pub struct Calculus {
    g: LieSubalgebra,
    /// RREF basis of the relation space {λ : Σ λ^I dα_I = 0}.
    relations: Vec<Vec<GaussianRational>>,
    relation_mat: Mat,
    /// Ascending indices of the canonical basis {dx_a} = {dα_I : I ∈ basis}.
    basis_indices: Vec<usize>,
    /// (N+1)×dim matrix R with dα_I = Σ_c R[I][c]·dx_c as one-forms.
    reduce_mat: Mat,
    /// Rows: basis-coordinates of d(basis element of K_N), K_N basis order
    /// (1, e, α_1…α_N).
    d_mat: Mat,
    /// Kernel basis of d as K_N coordinate vectors.
    d_kernel: Vec<Vec<GaussianRational>>,
}

impl Calculus {
    /// Builds the calculus Ω¹_𝔤.
    pub fn new(g: LieSubalgebra) -> Self {
        let n = g.n();
        let g_dim = g.dim();

        // dα_I(∂) = i·∂(e) for I = 0, ∂(α_I) otherwise; always in the arrow
        // ideal, so only the arrow coordinates are recorded.
        let mut eval_rows = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let mut row = Vec::with_capacity(g_dim * n);
            for d in g.basis() {
                let value = eval_d_alpha_on(n, i, d);
                row.extend(value.alpha_coeffs().iter().cloned());
            }
            eval_rows.push(row);
        }
        let eval_mat = Mat::from_rows(eval_rows);

        // Relation space = left kernel of the evaluation matrix, normalized
        // to its canonical reduced form.
        let raw_relations = eval_mat.transpose().kernel();
        let (relation_mat, relations) = if raw_relations.is_empty() {
            (Mat::zeros(0, n + 1), Vec::new())
        } else {
            let (rref, _) = Mat::from_rows(raw_relations).rref();
            let rows: Vec<Vec<GaussianRational>> =
                (0..rref.n_rows()).map(|r| rref.row(r).to_vec()).collect();
            (Mat::from_rows(rows.clone()), rows)
        };

        // Canonical basis: greedy over dα_1…dα_N then dα_0, reported in
        // ascending index order (connected calculi get [0..N], the tilde
        // calculus gets [1..N]).
        let mut basis_indices = Vec::new();
        let mut chosen_rows: Vec<Vec<GaussianRational>> = Vec::new();
        for i in (1..=n).chain([0]) {
            let mut trial = chosen_rows.clone();
            trial.push(eval_mat.row(i).to_vec());
            if Mat::from_rows(trial.clone()).rank() == chosen_rows.len() + 1 {
                chosen_rows = trial;
                basis_indices.push(i);
            }
        }
        basis_indices.sort_unstable();
        let basis_rows = Mat::from_rows(
            basis_indices
                .iter()
                .map(|&i| eval_mat.row(i).to_vec())
                .collect(),
        );

        let dim = basis_indices.len();
        let mut reduce_mat = Mat::zeros(n + 1, dim);
        for i in 0..=n {
            let coords = basis_rows
                .coordinates_in_rows(eval_mat.row(i))
                .expect("spanning symbols reduce to the basis by construction");
            for (c, value) in coords.into_iter().enumerate() {
                reduce_mat.set(i, c, value);
            }
        }

        // d on the K_N basis (1, e, α_1…α_N), in Ω¹ basis coordinates.
        let mut d_rows = Vec::with_capacity(n + 2);
        for idx in 0..n + 2 {
            let mut coords = vec![GaussianRational::zero(); n + 2];
            coords[idx] = GaussianRational::one();
            let elem = KElement::from_coords(n, &coords);
            let dw = differential_coeffs(&elem);
            d_rows.push(row_times_mat(&dw, &reduce_mat));
        }
        let d_mat = Mat::from_rows(d_rows);
        let d_kernel = d_mat.transpose().kernel();

        Self {
            g,
            relations,
            relation_mat,
            basis_indices,
            reduce_mat,
            d_mat,
            d_kernel,
        }
    }

    /// The underlying subalgebra.
    pub fn g(&self) -> &LieSubalgebra {
        &self.g
    }

    /// Arrow count N.
    pub fn n(&self) -> usize {
        self.g.n()
    }

    /// dim Ω¹_𝔤.
    pub fn dim(&self) -> usize {
        self.basis_indices.len()
    }

    /// Indices I of the canonical basis {dx_a} = {dα_I : I ∈ basis}, ascending.
    pub fn basis_indices(&self) -> &[usize] {
        &self.basis_indices
    }

    /// The canonical basis one-forms dx_a.
    pub fn basis_forms(&self) -> Vec<OneForm> {
        self.basis_indices
            .iter()
            .map(|&i| OneForm::d_alpha(self.n(), i))
            .collect()
    }

    /// Reduced basis of the relation space among dα_0…dα_N.
    pub fn relations(&self) -> &[Vec<GaussianRational>] {
        &self.relations
    }

    /// True iff the spanning symbols are independent (⟺ ker d = ℚ(i)·1).
    pub fn connected(&self) -> bool {
        self.relations.is_empty()
    }

    /// The differential da = −i·μ_a·dα_0 + Σ aᵏ·dα_k (so de = −i·dα_0, i.e.
    /// dα_0 = i·de, and dα_k comes out as the matching spanning symbol).
    pub fn d(&self, a: &KElement) -> OneForm {
        assert_eq!(self.n(), a.n(), "mixed arrow counts");
        OneForm::from_coeffs(self.n(), differential_coeffs(a))
    }

    /// Evaluates ω(∂) for ∂ ∈ 𝔤; errors when ∂ ∉ 𝔤 because the form only
    /// means anything against the chosen subalgebra.
    pub fn eval(&self, w: &OneForm, d: &Derivation) -> Result<KElement, CalculusError> {
        if !self.g.contains(d) {
            return Err(CalculusError::NotInSubalgebra);
        }
        Ok(self.eval_unchecked(w, d))
    }

    /// Evaluation without the membership check, for internal residues where
    /// the derivation is already known to lie in 𝔤.
    pub(crate) fn eval_unchecked(&self, w: &OneForm, d: &Derivation) -> KElement {
        let n = self.n();
        let mut acc = KElement::zero(n);
        for (i, c) in w.coeffs().iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &eval_d_alpha_on(n, i, d).scale(c);
            }
        }
        acc
    }

    /// Semantic equality: ω = η iff their evaluations on a basis of 𝔤 agree,
    /// i.e. the coefficient difference lies in the relation space.
    pub fn forms_equal(&self, w: &OneForm, v: &OneForm) -> bool {
        self.is_zero_form(&w.sub(v))
    }

    /// True iff ω evaluates to zero on all of 𝔤.
    pub fn is_zero_form(&self, w: &OneForm) -> bool {
        if w.coeffs_are_zero() {
            return true;
        }
        if self.relations.is_empty() {
            return false;
        }
        self.relation_mat.row_span_contains(w.coeffs())
    }

    /// Coordinates of ω in the canonical basis {dx_a}.
    pub fn basis_coords(&self, w: &OneForm) -> Vec<GaussianRational> {
        row_times_mat(w.coeffs(), &self.reduce_mat)
    }

    /// Rebuilds a one-form from canonical basis coordinates.
    pub fn from_basis_coords(&self, coords: &[GaussianRational]) -> OneForm {
        assert_eq!(coords.len(), self.dim(), "basis coordinate length mismatch");
        let mut w = OneForm::zero(self.n());
        for (&i, c) in self.basis_indices.iter().zip(coords) {
            w.coeffs[i] = c.clone();
        }
        w
    }

    /// The 2-form evaluation dω(∂, ∂′) = ∂(ω(∂′)) − ∂′(ω(∂)) − ω([∂, ∂′]).
    pub fn exterior_eval(
        &self,
        w: &OneForm,
        d1: &Derivation,
        d2: &Derivation,
    ) -> Result<KElement, CalculusError> {
        if !self.g.contains(d1) || !self.g.contains(d2) {
            return Err(CalculusError::NotInSubalgebra);
        }
        let a = d1.apply(&self.eval_unchecked(w, d2));
        let b = d2.apply(&self.eval_unchecked(w, d1));
        let c = self.eval_unchecked(w, &d1.bracket(d2));
        Ok(&(&a - &b) - &c)
    }

    /// Summary of the calculus shape (dimensions, relations, cohomology).
    pub fn summary(&self) -> CalculusSummary {
        let rank_d = self.d_mat.rank();
        CalculusSummary {
            n: self.n(),
            g: self.g.kind().name().to_string(),
            g_dim: self.g.dim(),
            dim_omega1: self.dim(),
            connected: self.connected(),
            relations: self.relations.clone(),
            basis_indices: self.basis_indices.clone(),
            h0_dim: self.n() + 2 - rank_d,
            h1_dim: self.dim() - rank_d,
        }
    }

    /// Basis of ker(d) as elements of K_N.
    pub fn d_kernel_elements(&self) -> Vec<KElement> {
        self.d_kernel
            .iter()
            .map(|v| KElement::from_coords(self.n(), v))
            .collect()
    }

    /// The explicit H¹ = 0 witness: for ω = Σ λ^I dα_I the element
    /// a = i·λ⁰·e + Σ λᵏ·α_k satisfies da = ω on the nose.
    pub fn h1_preimage(&self, w: &OneForm) -> KElement {
        let n = self.n();
        let mut coords = vec![GaussianRational::zero(); n + 2];
        coords[1] = &GaussianRational::i() * &w.coeffs()[0];
        coords[2..n + 2].clone_from_slice(&w.coeffs()[1..=n]);
        KElement::from_coords(n, &coords)
    }

    /// ∫ω := τ(a) for any a with da = ω. Well-defined iff τ vanishes on
    /// ker d, which is checked exactly; on the spanning symbols
    /// ∫dα_0 = i·τ(e) and ∫dα_k = 0.
    pub fn integrate(&self, w: &OneForm, trace: &KTrace) -> Result<GaussianRational, CalculusError> {
        for z in self.d_kernel_elements() {
            let value = trace.eval(&z);
            if !value.is_zero() {
                return Err(CalculusError::IllDefinedIntegral {
                    witness: z.to_string(),
                    value: value.to_string(),
                });
            }
        }
        Ok(trace.eval(&self.h1_preimage(w)))
    }

    /// Evaluates the wedge product (da·db)(∂, ∂′) = ∂(a)·∂′(b) − ∂′(a)·∂(b),
    /// which must vanish identically (arrow-ideal products are zero). Used
    /// as an exact residual by the Ωᵏ = 0 checks.
    pub fn wedge_eval(
        &self,
        a: &KElement,
        b: &KElement,
        d1: &Derivation,
        d2: &Derivation,
    ) -> KElement {
        &(&d1.apply(a) * &d2.apply(b)) - &(&d2.apply(a) * &d1.apply(b))
    }
}

/// dα_I evaluated on an arbitrary derivation: i·∂(e) for I = 0, ∂(α_I)
/// otherwise.
pub(crate) fn eval_d_alpha_on(n: usize, i: usize, d: &Derivation) -> KElement {
    if i == 0 {
        d.apply(&KElement::e(n)).scale(&GaussianRational::i())
    } else {
        d.apply(&KElement::alpha(n, i - 1))
    }
}

/// Spanning coefficients of da.
fn differential_coeffs(a: &KElement) -> Vec<GaussianRational> {
    let n = a.n();
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(-(&GaussianRational::i() * a.mu()));
    coeffs.extend(a.alpha_coeffs().iter().cloned());
    coeffs
}
