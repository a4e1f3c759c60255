//! Hermitian and ∗-bimodule forms on Ω¹_𝔤 over K_N.
//!
//! A form is stored through its component matrix h_ab = h(dx_a, dx_b) over
//! the canonical basis of the calculus. Every component necessarily lies in
//! the arrow ideal K^α_N and satisfies h_ba = h_ab∗; conversely any such
//! matrix defines a form. One matrix supports three different pairings,
//! distinguished by [`FormKind`]:
//!
//! * left hermitian:  h(ω, η) = ω^a·h_ab·conj(η^b),
//! * right hermitian: h(ω, η) = conj(ω^a)·h_ab·η^b,
//! * ∗-bimodule:      g(ω, η) = ω^a·h_ab·η^b,
//!
//! related by g(ω, η) = h_L(ω, η∗) and h_R(ω, η) = h_L(ω∗, η∗), so
//! conversion between the kinds keeps the components and swaps the
//! evaluation rule. Because the components live in the arrow ideal, which
//! annihilates one-forms from either side, every such form is degenerate:
//! no candidate inverse matrix h^bc can satisfy h_ab·h^bc·dx_c = dx_a.

use num::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calculus::{Calculus, OneForm};
use crate::derivation::Derivation;
use crate::kronecker::KElement;
use crate::scalar::GaussianRational;

/// How a component matrix is paired with its two arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormKind {
    /// h(ω, η) = ω^a·h_ab·conj(η^b): ℂ-linear and left K_N-linear in the
    /// first slot.
    LeftHermitian,
    /// h(ω, η) = conj(ω^a)·h_ab·η^b: linear in the second slot.
    RightHermitian,
    /// g(ω, η) = ω^a·h_ab·η^b: bilinear, with g(ω, η)∗ = g(η∗, ω∗).
    StarBimodule,
}

impl FormKind {
    /// Stable name used by reports and form files.
    pub fn name(self) -> &'static str {
        match self {
            FormKind::LeftHermitian => "left-hermitian",
            FormKind::RightHermitian => "right-hermitian",
            FormKind::StarBimodule => "star-bimodule",
        }
    }
}

/// Errors raised when building or loading a form.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    /// The component matrix is not dim Ω¹ × dim Ω¹.
    #[error("component matrix must be {expected}x{expected}, got {rows}x{cols}")]
    Shape {
        /// dim Ω¹ of the target calculus.
        expected: usize,
        /// Supplied row count.
        rows: usize,
        /// Supplied column count of the offending row.
        cols: usize,
    },
    /// An entry was built over a different K_N.
    #[error("entry ({row},{col}) lives in K_{found}, expected K_{expected}")]
    ArrowMismatch {
        /// Expected arrow count.
        expected: usize,
        /// Found arrow count.
        found: usize,
        /// Offending row.
        row: usize,
        /// Offending column.
        col: usize,
    },
    /// Components of a form on Ω¹_𝔤 must lie in the arrow ideal.
    #[error("entry ({row},{col}) is not in the arrow ideal (lambda = mu = 0 required)")]
    EntryOutsideArrowIdeal {
        /// Offending row.
        row: usize,
        /// Offending column.
        col: usize,
    },
    /// The matrix must satisfy h_ba = (h_ab)∗.
    #[error("hermitian symmetry fails at ({row},{col}): h_ba != (h_ab)*")]
    NotHermitianPair {
        /// Offending row.
        row: usize,
        /// Offending column.
        col: usize,
    },
    /// A family builder received the wrong number of parameters.
    #[error("expected {expected} parameters, got {found}")]
    ParameterCount {
        /// Required count.
        expected: usize,
        /// Supplied count.
        found: usize,
    },
    /// A family parameter violated its constraint.
    #[error("parameter {name} must be a hermitian element of the arrow ideal")]
    InvalidParameter {
        /// Which parameter.
        name: &'static str,
    },
    /// A form file declared an unsupported schema version.
    #[error("unsupported form file schema {found} (expected 1)")]
    BadSchema {
        /// Declared version.
        found: u32,
    },
}

/// On-disk representation of a form: a versioned JSON document holding the
/// pairing kind and the component matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormSpec {
    /// Schema version; currently always 1.
    pub schema: u32,
    /// Pairing rule.
    pub kind: FormKind,
    /// Component matrix h_ab over the calculus basis.
    pub entries: Vec<Vec<KElement>>,
}

/// A hermitian or ∗-bimodule form on Ω¹_𝔤, stored as its component matrix
/// over the canonical basis {dx_a} of a fixed calculus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KHermitianForm {
    n: usize,
    kind: FormKind,
    basis_indices: Vec<usize>,
    entries: Vec<Vec<KElement>>,
}

impl KHermitianForm {
    /// Validates and wraps a component matrix for the given calculus.
    pub fn new(
        cal: &Calculus,
        kind: FormKind,
        entries: Vec<Vec<KElement>>,
    ) -> Result<Self, FormError> {
        let dim = cal.dim();
        let n = cal.n();
        if entries.len() != dim {
            return Err(FormError::Shape {
                expected: dim,
                rows: entries.len(),
                cols: entries.first().map_or(0, Vec::len),
            });
        }
        for (r, row) in entries.iter().enumerate() {
            if row.len() != dim {
                return Err(FormError::Shape {
                    expected: dim,
                    rows: entries.len(),
                    cols: row.len(),
                });
            }
            for (c, x) in row.iter().enumerate() {
                if x.n() != n {
                    return Err(FormError::ArrowMismatch {
                        expected: n,
                        found: x.n(),
                        row: r,
                        col: c,
                    });
                }
                if !x.in_arrow_ideal() {
                    return Err(FormError::EntryOutsideArrowIdeal { row: r, col: c });
                }
            }
        }
        for r in 0..dim {
            for c in r..dim {
                if entries[c][r] != entries[r][c].star() {
                    return Err(FormError::NotHermitianPair { row: r, col: c });
                }
            }
        }
        Ok(Self {
            n,
            kind,
            basis_indices: cal.basis_indices().to_vec(),
            entries,
        })
    }

    /// The zero form (every component 0).
    pub fn zero(cal: &Calculus, kind: FormKind) -> Self {
        let dim = cal.dim();
        Self {
            n: cal.n(),
            kind,
            basis_indices: cal.basis_indices().to_vec(),
            entries: vec![vec![KElement::zero(cal.n()); dim]; dim],
        }
    }

    /// The connected-calculus family
    ///
    /// ```text
    ///         ( ρ_0    −iρ_1 … −iρ_N )
    /// h_IJ =  ( iρ_1                 ) · h_0
    ///         (  ⋮        0          )
    ///         ( iρ_N                 )
    /// ```
    ///
    /// with real parameters ρ_0…ρ_N and a hermitian arrow-ideal element h_0.
    pub fn rho_family(
        cal: &Calculus,
        rho: &[BigRational],
        h0: &KElement,
    ) -> Result<Self, FormError> {
        let n = cal.n();
        if cal.dim() != n + 1 {
            // The pattern is tied to the full spanning basis dα_0…dα_N.
            return Err(FormError::Shape {
                expected: n + 1,
                rows: cal.dim(),
                cols: cal.dim(),
            });
        }
        if rho.len() != n + 1 {
            return Err(FormError::ParameterCount {
                expected: n + 1,
                found: rho.len(),
            });
        }
        if h0.n() != n {
            return Err(FormError::ArrowMismatch {
                expected: n,
                found: h0.n(),
                row: 0,
                col: 0,
            });
        }
        if !h0.in_arrow_ideal() || !h0.is_hermitian() {
            return Err(FormError::InvalidParameter { name: "h0" });
        }
        let real = |r: &BigRational| GaussianRational::new(r.clone(), BigRational::from_integer(0.into()));
        let mut entries = vec![vec![KElement::zero(n); n + 1]; n + 1];
        entries[0][0] = h0.scale(&real(&rho[0]));
        for k in 1..=n {
            let c = &GaussianRational::i() * &real(&rho[k]);
            entries[0][k] = h0.scale(&-c.clone());
            entries[k][0] = h0.scale(&c);
        }
        Self::new(cal, FormKind::LeftHermitian, entries)
    }

    /// The diagonal family h_ij = δ_ij·λ_i·α_i on the tilde calculus, with
    /// real parameters λ_1…λ_N.
    pub fn tilde_diagonal(cal: &Calculus, lambdas: &[BigRational]) -> Result<Self, FormError> {
        let n = cal.n();
        if cal.basis_indices() != (1..=n).collect::<Vec<_>>() {
            return Err(FormError::Shape {
                expected: n,
                rows: cal.dim(),
                cols: cal.dim(),
            });
        }
        if lambdas.len() != n {
            return Err(FormError::ParameterCount {
                expected: n,
                found: lambdas.len(),
            });
        }
        let mut entries = vec![vec![KElement::zero(n); n]; n];
        for (i, l) in lambdas.iter().enumerate() {
            let c = GaussianRational::new(l.clone(), BigRational::from_integer(0.into()));
            entries[i][i] = KElement::alpha(n, i).scale(&c);
        }
        Self::new(cal, FormKind::LeftHermitian, entries)
    }

    /// Loads a form from its file representation, validating against the
    /// calculus it will be used with.
    pub fn from_spec(cal: &Calculus, spec: &FormSpec) -> Result<Self, FormError> {
        if spec.schema != 1 {
            return Err(FormError::BadSchema { found: spec.schema });
        }
        Self::new(cal, spec.kind, spec.entries.clone())
    }

    /// The file representation of this form.
    pub fn to_spec(&self) -> FormSpec {
        FormSpec {
            schema: 1,
            kind: self.kind,
            entries: self.entries.clone(),
        }
    }

    /// Arrow count N.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Pairing rule.
    pub fn kind(&self) -> FormKind {
        self.kind
    }

    /// Matrix dimension (= dim Ω¹ of the calculus it was built for).
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// The component h_ab.
    pub fn entry(&self, a: usize, b: usize) -> &KElement {
        &self.entries[a][b]
    }

    /// The full component matrix.
    pub fn entries(&self) -> &[Vec<KElement>] {
        &self.entries
    }

    /// True iff every component vanishes.
    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(KElement::is_zero)
    }

    /// Reinterprets the same component matrix under another pairing rule
    /// (the conversions g = h_L(·, ·∗), h_R = h_L(·∗, ·∗) and their inverses
    /// all preserve components).
    #[must_use]
    pub fn convert(&self, kind: FormKind) -> Self {
        Self {
            kind,
            ..self.clone()
        }
    }

    fn assert_matches(&self, cal: &Calculus) {
        assert_eq!(self.n, cal.n(), "form used with a different K_N");
        assert_eq!(
            self.basis_indices,
            cal.basis_indices(),
            "form used with a calculus having a different basis"
        );
    }

    /// Evaluates the form on two one-forms according to its kind.
    pub fn eval(&self, cal: &Calculus, w: &OneForm, v: &OneForm) -> KElement {
        self.assert_matches(cal);
        let wc = cal.basis_coords(w);
        let vc = cal.basis_coords(v);
        let mut acc = KElement::zero(self.n);
        for (a, wa) in wc.iter().enumerate() {
            for (b, vb) in vc.iter().enumerate() {
                let coeff = match self.kind {
                    FormKind::LeftHermitian => wa * &vb.conj(),
                    FormKind::RightHermitian => &wa.conj() * vb,
                    FormKind::StarBimodule => wa * vb,
                };
                if !coeff.is_zero() {
                    acc = &acc + &self.entries[a][b].scale(&coeff);
                }
            }
        }
        acc
    }

    /// Applies a derivation to every component (the ∂h term of the
    /// compatibility residual).
    pub fn d_apply(&self, d: &Derivation) -> Vec<Vec<KElement>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|x| d.apply(x)).collect())
            .collect()
    }

    /// Tests the invertibility identity Σ_{b,c} h_ab·h^bc·dx_c = dx_a
    /// against a candidate inverse matrix; returns `true` when the identity
    /// *fails* for at least one index a. Components lie in the arrow ideal
    /// and the arrow ideal annihilates one-forms, so this always fails.
    pub fn inverse_identity_fails(&self, cal: &Calculus, candidate: &[Vec<KElement>]) -> bool {
        self.assert_matches(cal);
        let dim = self.dim();
        assert_eq!(candidate.len(), dim, "candidate inverse has wrong shape");
        let basis = cal.basis_forms();
        for a in 0..dim {
            let mut lhs = OneForm::zero(self.n);
            for b in 0..dim {
                assert_eq!(candidate[b].len(), dim, "candidate inverse has wrong shape");
                for c in 0..dim {
                    let product = &self.entries[a][b] * &candidate[b][c];
                    lhs = lhs.add(&basis[c].act_left(&product));
                }
            }
            if !cal.forms_equal(&lhs, &basis[a]) {
                return true;
            }
        }
        false
    }

    /// Degeneracy verdict: checks the structural annihilation
    /// h_ab·x·dx_c = 0 for every K_N basis element x, then refutes the
    /// invertibility identity for every supplied candidate inverse.
    pub fn degenerate_check(&self, cal: &Calculus, candidates: &[Vec<Vec<KElement>>]) -> DegeneracyReport {
        self.assert_matches(cal);
        let n = self.n;
        let dim = self.dim();
        let basis = cal.basis_forms();
        let mut annihilates = true;
        let mut k_basis = vec![KElement::one(n), KElement::e(n)];
        k_basis.extend((0..n).map(|k| KElement::alpha(n, k)));
        for row in &self.entries {
            for h in row {
                for x in &k_basis {
                    let hx = h * x;
                    for dx in basis.iter().take(dim) {
                        if !dx.act_left(&hx).coeffs_are_zero() {
                            annihilates = false;
                        }
                    }
                }
            }
        }
        let all_fail = candidates
            .iter()
            .all(|cand| self.inverse_identity_fails(cal, cand));
        DegeneracyReport {
            degenerate: annihilates && all_fail,
            witness: "h_ab*h^bc*dx_c = 0 != dx_a for every candidate inverse \
                      (components lie in the arrow ideal, which annihilates one-forms)"
                .to_string(),
        }
    }
}

/// Outcome of [`KHermitianForm::degenerate_check`].
#[derive(Debug, Clone, Serialize)]
pub struct DegeneracyReport {
    /// True when the invertibility identity failed for every candidate.
    pub degenerate: bool,
    /// The structural reason.
    pub witness: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::LieSubalgebra;

    fn g(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    fn arrow(n: usize, coeffs: &[&str]) -> KElement {
        let mut acc = KElement::zero(n);
        for (k, c) in coeffs.iter().enumerate() {
            acc = &acc + &KElement::alpha(n, k).scale(&g(c));
        }
        acc
    }

    fn sample_form(cal: &Calculus) -> KHermitianForm {
        // A dense hermitian component matrix with arrow-ideal entries.
        let n = cal.n();
        let dim = cal.dim();
        let mut entries = vec![vec![KElement::zero(n); dim]; dim];
        for a in 0..dim {
            // Diagonal entries must be hermitian themselves.
            entries[a][a] = arrow(n, if a % 2 == 0 { &["2", "-1"] } else { &["1/2", "3"] });
            for b in a + 1..dim {
                let x = arrow(
                    n,
                    &match (a + b) % 3 {
                        0 => ["1", "2-i"],
                        1 => ["i", "1/2"],
                        _ => ["-1", "3+i"],
                    },
                );
                entries[a][b] = x.clone();
                entries[b][a] = x.star();
            }
        }
        KHermitianForm::new(cal, FormKind::LeftHermitian, entries).unwrap()
    }

    #[test]
    fn construction_validates_axioms() {
        let cal = Calculus::new(LieSubalgebra::inner(2));
        let n = 2;
        // Entry outside the arrow ideal.
        let mut bad = vec![vec![KElement::zero(n); 3]; 3];
        bad[0][0] = KElement::e(n);
        assert_eq!(
            KHermitianForm::new(&cal, FormKind::LeftHermitian, bad),
            Err(FormError::EntryOutsideArrowIdeal { row: 0, col: 0 })
        );
        // Hermitian symmetry violation.
        let mut skew = vec![vec![KElement::zero(n); 3]; 3];
        skew[0][1] = KElement::alpha(n, 0);
        skew[1][0] = KElement::alpha(n, 0).scale(&g("2"));
        assert_eq!(
            KHermitianForm::new(&cal, FormKind::LeftHermitian, skew),
            Err(FormError::NotHermitianPair { row: 0, col: 1 })
        );
        // Wrong shape.
        assert!(matches!(
            KHermitianForm::new(&cal, FormKind::LeftHermitian, vec![vec![KElement::zero(n); 2]; 2]),
            Err(FormError::Shape { expected: 3, .. })
        ));
    }

    #[test]
    fn rho_family_components() {
        let n = 3;
        let cal = Calculus::new(LieSubalgebra::inner(n));
        let h0 = arrow(n, &["1", "0", "2"]); // hermitian: real coefficients
        let rho = vec![rat(2, 1), rat(1, 2), rat(-1, 3), rat(5, 1)];
        let h = KHermitianForm::rho_family(&cal, &rho, &h0).unwrap();

        // h(dα_0, dα_k) = −iρ_k·h_0 (evaluated, not just stored).
        let w0 = OneForm::d_alpha(n, 0);
        for k in 1..=n {
            let wk = OneForm::d_alpha(n, k);
            let expected = h0.scale(&-(&g("i") * &GaussianRational::new(rho[k].clone(), rat(0, 1))));
            assert_eq!(h.eval(&cal, &w0, &wk), expected);
            // And the corner block vanishes.
            assert!(h.eval(&cal, &wk, &wk).is_zero());
        }
        assert_eq!(h.eval(&cal, &w0, &w0), h0.scale(&g("2")));

        // Non-hermitian h0 is rejected.
        let bad = arrow(n, &["i", "0", "0"]);
        assert_eq!(
            KHermitianForm::rho_family(&cal, &rho, &bad),
            Err(FormError::InvalidParameter { name: "h0" })
        );
    }

    #[test]
    fn tilde_diagonal_components() {
        let n = 3;
        let cal = Calculus::new(LieSubalgebra::tilde(n));
        let lambdas = vec![rat(1, 1), rat(-2, 3), rat(7, 2)];
        let h = KHermitianForm::tilde_diagonal(&cal, &lambdas).unwrap();
        for i in 1..=n {
            for j in 1..=n {
                let value = h.eval(&cal, &OneForm::d_alpha(n, i), &OneForm::d_alpha(n, j));
                if i == j {
                    let expected = KElement::alpha(n, i - 1)
                        .scale(&GaussianRational::new(lambdas[i - 1].clone(), rat(0, 1)));
                    assert_eq!(value, expected);
                } else {
                    assert!(value.is_zero());
                }
            }
        }
        // The relation dα_0 + Σ dα_i = 0 must be respected by evaluation.
        let mut sum = OneForm::d_alpha(n, 0);
        for i in 1..=n {
            sum = sum.add(&OneForm::d_alpha(n, i));
        }
        for j in 1..=n {
            assert!(h.eval(&cal, &sum, &OneForm::d_alpha(n, j)).is_zero());
            assert!(h.eval(&cal, &OneForm::d_alpha(n, j), &sum).is_zero());
        }
    }

    #[test]
    fn left_linearity_and_hermitian_symmetry() {
        let n = 2;
        let cal = Calculus::new(LieSubalgebra::inner(n));
        let h = sample_form(&cal);
        let w = OneForm::from_coeffs(n, vec![g("1+i"), g("-2"), g("1/3")]);
        let v = OneForm::from_coeffs(n, vec![g("i"), g("4"), g("-1-i")]);

        // h(a·ω, η) = a·h(ω, η).
        let a = KElement::from_coords(n, &[g("2-i"), g("1/2"), g("3"), g("-i")]);
        let lhs = h.eval(&cal, &w.act_left(&a), &v);
        let rhs = &a * &h.eval(&cal, &w, &v);
        assert_eq!(lhs, rhs);

        // h(ω, η)∗ = h(η, ω).
        assert_eq!(h.eval(&cal, &w, &v).star(), h.eval(&cal, &v, &w));

        // e acts as identity on the left slot.
        assert_eq!(
            h.eval(&cal, &w.act_left(&KElement::e(n)), &v),
            &KElement::e(n) * &h.eval(&cal, &w, &v)
        );
    }

    #[test]
    fn kind_conversions_are_evaluation_identities() {
        let n = 2;
        let cal = Calculus::new(LieSubalgebra::inner(n));
        let hl = sample_form(&cal);
        let hr = hl.convert(FormKind::RightHermitian);
        let gf = hl.convert(FormKind::StarBimodule);
        let w = OneForm::from_coeffs(n, vec![g("1+i"), g("-1/2"), g("2")]);
        let v = OneForm::from_coeffs(n, vec![g("3"), g("i"), g("1-i")]);

        // h_R(ω, η) = h_L(ω∗, η∗).
        assert_eq!(hr.eval(&cal, &w, &v), hl.eval(&cal, &w.star(), &v.star()));
        // g(ω, η) = h_L(ω, η∗).
        assert_eq!(gf.eval(&cal, &w, &v), hl.eval(&cal, &w, &v.star()));
        // h_L recovered from g: h_L(ω, η) = g(ω, η∗).
        assert_eq!(hl.eval(&cal, &w, &v), gf.eval(&cal, &w, &v.star()));
        // h_R from g: h_R(ω, η) = g(ω∗, η).
        assert_eq!(hr.eval(&cal, &w, &v), gf.eval(&cal, &w.star(), &v));
        // g's ∗-symmetry: g(ω, η)∗ = g(η∗, ω∗).
        assert_eq!(
            gf.eval(&cal, &w, &v).star(),
            gf.eval(&cal, &v.star(), &w.star())
        );
        // Right linearity of h_R: h_R(ω, η·a) = h_R(ω, η)·a.
        let a = KElement::from_coords(n, &[g("1"), g("i"), g("0"), g("2")]);
        assert_eq!(
            hr.eval(&cal, &w, &v.act_right(&a)),
            &hr.eval(&cal, &w, &v) * &a
        );
    }

    #[test]
    fn degeneracy_always_holds() {
        let n = 2;
        let cal = Calculus::new(LieSubalgebra::inner(n));
        let h = sample_form(&cal);
        // A spread of candidate inverses, including structured attempts.
        let mut candidates = Vec::new();
        candidates.push(vec![vec![KElement::one(n); 3]; 3]);
        candidates.push(vec![
            vec![KElement::e(n), KElement::alpha(n, 0), KElement::zero(n)],
            vec![KElement::alpha(n, 1), KElement::one(n), KElement::e(n)],
            vec![KElement::zero(n), KElement::e(n), KElement::one(n)],
        ]);
        let scaled: Vec<Vec<KElement>> = (0..3)
            .map(|a| {
                (0..3)
                    .map(|b| KElement::from_coords(n, &[g("2"), g("-i"), g("1"), g("0")])
                        .scale(&GaussianRational::from_int((a + 2 * b + 1) as i64)))
                    .collect()
            })
            .collect();
        candidates.push(scaled);
        let report = h.degenerate_check(&cal, &candidates);
        assert!(report.degenerate);

        // The zero form is degenerate too.
        let z = KHermitianForm::zero(&cal, FormKind::LeftHermitian);
        assert!(z.degenerate_check(&cal, &candidates).degenerate);
    }

    #[test]
    fn spec_round_trip_and_schema_check() {
        let n = 2;
        let cal = Calculus::new(LieSubalgebra::inner(n));
        let h = sample_form(&cal);
        let spec = h.to_spec();
        let json = serde_json::to_string(&spec).unwrap();
        let parsed: FormSpec = serde_json::from_str(&json).unwrap();
        let back = KHermitianForm::from_spec(&cal, &parsed).unwrap();
        assert_eq!(back, h);

        let mut bad = h.to_spec();
        bad.schema = 2;
        assert_eq!(
            KHermitianForm::from_spec(&cal, &bad),
            Err(FormError::BadSchema { found: 2 })
        );
    }
}
