//! Connections on Ω¹_𝔤 over K_N: Christoffel data, torsion, curvature,
//! ∗-connection and compatibility checks.
//!
//! A connection is determined by matrices γ(∂_b) over the spanning symbols,
//! ∇_∂ dα_I = γ_I^J(∂)·dα_J, extended ℂ-linearly in ∂. With the one-form
//! coefficient vectors acting as rows, ∇_∂ maps coefficients λ to λ·γ(∂).
//! When the calculus has relations the γ data must map the relation space
//! into itself so the map descends to the quotient; this is checked at
//! construction.
//!
//! Every such datum is automatically a bimodule connection: both Leibniz
//! residuals vanish identically because the (∂a)·ω terms die against the
//! arrow ideal. Torsion is computed from its raw definition
//! T_ω(∂, ∂′) = (∇_∂ω)(∂′) − (∇_{∂′}ω)(∂) − dω(∂, ∂′), including the
//! exterior-derivative term (identically zero here, but computed rather
//! than assumed).

use serde::Serialize;
use thiserror::Error;

use crate::calculus::{Calculus, OneForm};
use crate::derivation::{Derivation, SubalgebraKind};
use crate::form::{FormKind, KHermitianForm};
use crate::kronecker::KElement;
use crate::linalg::Mat;
use crate::scalar::GaussianRational;

/// Errors from building or using a connection.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConnectionError {
    /// γ data must have one matrix per 𝔤-basis element.
    #[error("expected {expected} gamma matrices (one per basis derivation), got {found}")]
    GammaCount {
        /// dim 𝔤.
        expected: usize,
        /// Supplied count.
        found: usize,
    },
    /// Each γ matrix acts on the N+1 spanning symbols.
    #[error("gamma matrix {index} must be {expected}x{expected}, got {rows}x{cols}")]
    GammaShape {
        /// Offending matrix position.
        index: usize,
        /// N+1.
        expected: usize,
        /// Found rows.
        rows: usize,
        /// Found cols.
        cols: usize,
    },
    /// γ does not descend to the quotient by the relation space.
    #[error("gamma for basis derivation `{label}` does not preserve the relation space")]
    NotWellDefined {
        /// Label of the offending basis derivation.
        label: String,
    },
    /// An operation received a derivation outside 𝔤.
    #[error("derivation is not in the connection's subalgebra")]
    NotInSubalgebra,
}

/// Serializable Christoffel data, used in CLI reports.
#[derive(Debug, Clone, Serialize)]
pub struct ConnectionData {
    /// Labels of the 𝔤-basis derivations, matching `matrices` by position.
    pub labels: Vec<String>,
    /// γ_I^J per basis derivation, row I, column J over dα_0…dα_N.
    pub matrices: Vec<Vec<Vec<GaussianRational>>>,
}

/// A connection on Ω¹_𝔤, carrying its calculus and one γ matrix per
/// 𝔤-basis derivation.
#[derive(Debug, Clone)]
pub struct Connection {
    cal: Calculus,
    gamma: Vec<Mat>,
}

impl Connection {
    /// Validates γ data (shape and well-definedness on the quotient).
    pub fn new(cal: Calculus, gamma: Vec<Mat>) -> Result<Self, ConnectionError> {
        let dim_g = cal.g().dim();
        let size = cal.n() + 1;
        if gamma.len() != dim_g {
            return Err(ConnectionError::GammaCount {
                expected: dim_g,
                found: gamma.len(),
            });
        }
        for (b, m) in gamma.iter().enumerate() {
            if m.n_rows() != size || m.n_cols() != size {
                return Err(ConnectionError::GammaShape {
                    index: b,
                    expected: size,
                    rows: m.n_rows(),
                    cols: m.n_cols(),
                });
            }
        }
        let relation_rows = cal.relations().to_vec();
        if !relation_rows.is_empty() {
            let relation_mat = Mat::from_rows(relation_rows.clone());
            for (b, m) in gamma.iter().enumerate() {
                for r in &relation_rows {
                    let image = crate::linalg::row_times_mat(r, m);
                    if !relation_mat.row_span_contains(&image) {
                        return Err(ConnectionError::NotWellDefined {
                            label: cal.g().labels()[b].clone(),
                        });
                    }
                }
            }
        }
        Ok(Self { cal, gamma })
    }

    /// The zero connection (γ = 0 everywhere).
    pub fn zero(cal: Calculus) -> Self {
        let size = cal.n() + 1;
        let gamma = vec![Mat::zeros(size, size); cal.g().dim()];
        Self { cal, gamma }
    }

    /// The canonical inner connection ∇_{[a,·]}ω = [a, ω] on the inner
    /// calculus: γ(∂̂) = identity, γ(∂_k) = 0.
    pub fn canonical_inner(cal: Calculus) -> Self {
        assert_eq!(
            cal.g().kind(),
            SubalgebraKind::Inner,
            "the canonical inner connection lives on the inner calculus"
        );
        let size = cal.n() + 1;
        let mut gamma = vec![Mat::zeros(size, size); cal.g().dim()];
        gamma[0] = Mat::identity(size);
        Self { cal, gamma }
    }

    /// The torsion-free family on the inner calculus: for a free matrix γ̂,
    /// ∇_∂̂ dα_I = γ̂_I^J dα_J and ∇_{∂_k} dα_I = −γ̂_I^0 dα_k.
    pub fn from_inner_gamma(cal: Calculus, gamma_hat: &Mat) -> Result<Self, ConnectionError> {
        assert_eq!(
            cal.g().kind(),
            SubalgebraKind::Inner,
            "the inner torsion-free family lives on the inner calculus"
        );
        let n = cal.n();
        let size = n + 1;
        if gamma_hat.n_rows() != size || gamma_hat.n_cols() != size {
            return Err(ConnectionError::GammaShape {
                index: 0,
                expected: size,
                rows: gamma_hat.n_rows(),
                cols: gamma_hat.n_cols(),
            });
        }
        let mut gamma = Vec::with_capacity(size);
        gamma.push(gamma_hat.clone());
        for k in 1..=n {
            let mut m = Mat::zeros(size, size);
            for i in 0..size {
                m.set(i, k, -gamma_hat.get(i, 0).clone());
            }
            gamma.push(m);
        }
        Self::new(cal, gamma)
    }

    /// The torsion-free family on the tilde calculus: ∇_{∂̃_i} dα_j =
    /// γ_ij·dα_i for an N×N parameter matrix. The dα_0 row is filled in by
    /// the relation dα_0 = −Σ dα_j, which makes the datum well-defined.
    pub fn from_tilde_gamma(cal: Calculus, gij: &Mat) -> Result<Self, ConnectionError> {
        assert_eq!(
            cal.g().kind(),
            SubalgebraKind::Tilde,
            "the tilde torsion-free family lives on the tilde calculus"
        );
        let n = cal.n();
        if gij.n_rows() != n || gij.n_cols() != n {
            return Err(ConnectionError::GammaShape {
                index: 0,
                expected: n,
                rows: gij.n_rows(),
                cols: gij.n_cols(),
            });
        }
        let size = n + 1;
        let mut gamma = Vec::with_capacity(n);
        for i in 1..=n {
            let mut m = Mat::zeros(size, size);
            let mut row_sum = GaussianRational::zero();
            for j in 1..=n {
                let c = gij.get(i - 1, j - 1).clone();
                row_sum = &row_sum + &c;
                m.set(j, i, c);
            }
            m.set(0, i, -row_sum);
            gamma.push(m);
        }
        Self::new(cal, gamma)
    }

    /// The underlying calculus.
    pub fn cal(&self) -> &Calculus {
        &self.cal
    }

    /// γ matrix of the b-th basis derivation.
    pub fn gamma_matrix(&self, b: usize) -> &Mat {
        &self.gamma[b]
    }

    /// γ(∂) for an arbitrary ∂ ∈ 𝔤, by ℂ-linear extension.
    pub fn gamma_of(&self, d: &Derivation) -> Result<Mat, ConnectionError> {
        let coords = self
            .cal
            .g()
            .coordinates_of(d)
            .ok_or(ConnectionError::NotInSubalgebra)?;
        let size = self.cal.n() + 1;
        let mut acc = Mat::zeros(size, size);
        for (c, m) in coords.iter().zip(&self.gamma) {
            if !c.is_zero() {
                acc = acc.add(&m.scale(c));
            }
        }
        Ok(acc)
    }

    /// ∇_∂ω.
    pub fn apply(&self, d: &Derivation, w: &OneForm) -> Result<OneForm, ConnectionError> {
        let m = self.gamma_of(d)?;
        let coeffs = crate::linalg::row_times_mat(w.coeffs(), &m);
        Ok(OneForm::from_coeffs(self.cal.n(), coeffs))
    }

    /// Left Leibniz residual ∇_∂(a·ω) − a·∇_∂ω − (∂a)·ω, which must vanish
    /// coefficient-wise (the (∂a)·ω term dies against the arrow ideal).
    pub fn left_leibniz_residual(
        &self,
        d: &Derivation,
        a: &KElement,
        w: &OneForm,
    ) -> Result<OneForm, ConnectionError> {
        let lhs = self.apply(d, &w.act_left(a))?;
        let rhs = self.apply(d, w)?.act_left(a).add(&w.act_left(&d.apply(a)));
        Ok(lhs.sub(&rhs))
    }

    /// Right Leibniz residual ∇_∂(ω·a) − (∇_∂ω)·a − ω·(∂a).
    pub fn right_leibniz_residual(
        &self,
        d: &Derivation,
        a: &KElement,
        w: &OneForm,
    ) -> Result<OneForm, ConnectionError> {
        let lhs = self.apply(d, &w.act_right(a))?;
        let rhs = self.apply(d, w)?.act_right(a).add(&w.act_right(&d.apply(a)));
        Ok(lhs.sub(&rhs))
    }

    /// Torsion T_ω(∂, ∂′) = (∇_∂ω)(∂′) − (∇_{∂′}ω)(∂) − dω(∂, ∂′), with the
    /// dω term computed from its own formula rather than assumed zero.
    pub fn torsion(
        &self,
        w: &OneForm,
        d1: &Derivation,
        d2: &Derivation,
    ) -> Result<KElement, ConnectionError> {
        let t1 = self
            .cal
            .eval(&self.apply(d1, w)?, d2)
            .map_err(|_| ConnectionError::NotInSubalgebra)?;
        let t2 = self
            .cal
            .eval(&self.apply(d2, w)?, d1)
            .map_err(|_| ConnectionError::NotInSubalgebra)?;
        let dw = self
            .cal
            .exterior_eval(w, d1, d2)
            .map_err(|_| ConnectionError::NotInSubalgebra)?;
        Ok(&(&t1 - &t2) - &dw)
    }

    /// True iff the torsion vanishes on all spanning symbols and 𝔤-basis
    /// pairs (enough, by ℂ-linearity in ω and antisymmetry in (∂, ∂′)).
    pub fn is_torsion_free(&self) -> bool {
        let n = self.cal.n();
        let basis = self.cal.g().basis().to_vec();
        for i in 0..=n {
            let w = OneForm::d_alpha(n, i);
            for (p, d1) in basis.iter().enumerate() {
                for d2 in basis.iter().skip(p + 1) {
                    let t = self.torsion(&w, d1, d2).expect("basis derivations are in g");
                    if !t.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Curvature R(∂1, ∂2)ω = ∇_{∂1}∇_{∂2}ω − ∇_{∂2}∇_{∂1}ω − ∇_{[∂1,∂2]}ω.
    pub fn curvature(
        &self,
        d1: &Derivation,
        d2: &Derivation,
        w: &OneForm,
    ) -> Result<OneForm, ConnectionError> {
        let a = self.apply(d1, &self.apply(d2, w)?)?;
        let b = self.apply(d2, &self.apply(d1, w)?)?;
        let c = self.apply(&d1.bracket(d2), w)?;
        Ok(a.sub(&b).sub(&c))
    }

    /// The matrix representing R(∂1, ∂2) on row coefficient vectors:
    /// γ(∂2)·γ(∂1) − γ(∂1)·γ(∂2) − γ([∂1, ∂2]); as an operator identity this
    /// is [γ(∂1), γ(∂2)] − γ([∂1, ∂2]) applied to ω.
    pub fn curvature_matrix(&self, d1: &Derivation, d2: &Derivation) -> Result<Mat, ConnectionError> {
        let g1 = self.gamma_of(d1)?;
        let g2 = self.gamma_of(d2)?;
        let gb = self.gamma_of(&d1.bracket(d2))?;
        Ok(g2.matmul(&g1).sub(&g1.matmul(&g2)).sub(&gb))
    }

    /// ∗-connection test: (∇_∂ω)∗ = ∇_{∂∗}ω∗ for all ∂ ∈ 𝔤 and ω. Both
    /// sides are conjugate-linear in ∂ and in ω, so it is enough that for
    /// every basis derivation the rows of conj(γ(∂)) − γ(∂∗) lie in the
    /// relation space. Requires a star-closed 𝔤.
    pub fn is_star_connection(&self) -> bool {
        assert!(
            self.cal.g().star_closed(),
            "the star-connection condition needs a star-closed subalgebra"
        );
        let n = self.cal.n();
        for (b, d) in self.cal.g().basis().iter().enumerate() {
            let lhs = self.gamma[b].conj();
            let rhs = self
                .gamma_of(&d.star())
                .expect("star-closure puts the adjoint in g");
            let diff = lhs.sub(&rhs);
            for i in 0..=n {
                let row = OneForm::from_coeffs(n, diff.row(i).to_vec());
                if !self.cal.is_zero_form(&row) {
                    return false;
                }
            }
        }
        true
    }

    /// Compatibility residual for one basis-pair of one-forms and one
    /// derivation, with the ∂∗ placement dictated by the form kind:
    ///
    /// * left hermitian: ∂h(ω, η) − h(∇_∂ω, η) − h(ω, ∇_{∂∗}η),
    /// * right hermitian: ∂h(ω, η) − h(∇_{∂∗}ω, η) − h(ω, ∇_∂η),
    /// * ∗-bimodule: ∂g(ω, η) − g(∇_∂ω, η) − g(ω, ∇_∂η).
    pub fn compatibility_residual(
        &self,
        h: &KHermitianForm,
        w: &OneForm,
        v: &OneForm,
        d: &Derivation,
    ) -> Result<KElement, ConnectionError> {
        if !self.cal.g().contains(d) {
            return Err(ConnectionError::NotInSubalgebra);
        }
        let ds = d.star();
        let (first, second) = match h.kind() {
            FormKind::LeftHermitian => (d.clone(), ds),
            FormKind::RightHermitian => (ds, d.clone()),
            FormKind::StarBimodule => (d.clone(), d.clone()),
        };
        let lead = d.apply(&h.eval(&self.cal, w, v));
        let t1 = h.eval(&self.cal, &self.apply(&first, w)?, v);
        let t2 = h.eval(&self.cal, w, &self.apply(&second, v)?);
        Ok(&(&lead - &t1) - &t2)
    }

    /// True iff every compatibility residual over basis one-form pairs and
    /// 𝔤-basis derivations is exactly zero (enough by multilinearity).
    /// Requires a star-closed 𝔤 for the hermitian kinds.
    pub fn is_compatible(&self, h: &KHermitianForm) -> bool {
        let basis = self.cal.basis_forms();
        let derivations = self.cal.g().basis().to_vec();
        for w in &basis {
            for v in &basis {
                for d in &derivations {
                    let r = self
                        .compatibility_residual(h, w, v, d)
                        .expect("basis derivations are in g");
                    if !r.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Serializable Christoffel data.
    pub fn to_data(&self) -> ConnectionData {
        ConnectionData {
            labels: self.cal.g().labels().to_vec(),
            matrices: self
                .gamma
                .iter()
                .map(|m| (0..m.n_rows()).map(|r| m.row(r).to_vec()).collect())
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::LieSubalgebra;
    use num::BigRational;

    fn g(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    fn mat(rows: &[&[&str]]) -> Mat {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| g(s)).collect())
                .collect(),
        )
    }

    fn sample_element(n: usize, seed: i64) -> KElement {
        let coords: Vec<GaussianRational> = (0..n as i64 + 2)
            .map(|k| GaussianRational::new(rat(seed + k, 2), rat(seed - 3 * k, 5)))
            .collect();
        KElement::from_coords(n, &coords)
    }

    #[test]
    fn zero_connection_basics() {
        let cal = Calculus::new(LieSubalgebra::der(2));
        let c = Connection::zero(cal.clone());
        let w = OneForm::from_coeffs(2, vec![g("1+i"), g("2"), g("-i")]);
        for d in cal.g().basis() {
            assert!(c.apply(d, &w).unwrap().coeffs_are_zero());
            for d2 in cal.g().basis() {
                // Torsion reduces to −dω, which vanishes identically here.
                assert!(c.torsion(&w, d, d2).unwrap().is_zero());
                assert!(c.curvature(d, d2, &w).unwrap().coeffs_are_zero());
            }
        }
        assert!(c.is_torsion_free());
        assert!(c.is_star_connection());
    }

    #[test]
    fn canonical_inner_connection_and_its_torsion() {
        let n = 2;
        let cal = Calculus::new(LieSubalgebra::inner(n));
        let c = Connection::canonical_inner(cal.clone());
        // ∇_∂̂ dα_I = dα_I.
        let dhat = Derivation::d_hat(n);
        for i in 0..=n {
            let w = OneForm::d_alpha(n, i);
            assert_eq!(c.apply(&dhat, &w).unwrap(), w);
            assert!(c.apply(&Derivation::d_lower(n, 0), &w).unwrap().coeffs_are_zero());
        }
        // T_de(∂̂, ∂_k) = i·α_k ≠ 0: not torsion free.
        let de = cal.d(&KElement::e(n));
        let dk = Derivation::d_lower(n, 0);
        let t = c.torsion(&de, &dhat, &dk).unwrap();
        assert_eq!(t, KElement::alpha(n, 0).scale(&g("i")));
        assert!(!c.is_torsion_free());
        // Against the non-normalized inner pair [α_k,·] = i·∂_k the value is
        // the commutator [e, α_k] = α_k on the nose.
        let ialpha = dk.scale(&g("i"));
        let t2 = c.torsion(&de, &ialpha, &dhat).unwrap();
        assert_eq!(t2, KElement::alpha(n, 0));
        // Antisymmetry of the torsion.
        let t3 = c.torsion(&de, &dk, &dhat).unwrap();
        assert_eq!(t3, -&t);
        // Curvature vanishes: R(∂̂, ∂_k) = [γ(∂̂), γ(∂_k)] − γ(∂_k) = 0.
        assert!(c.curvature_matrix(&dhat, &dk).unwrap().is_zero());
        for i in 0..=n {
            let w = OneForm::d_alpha(n, i);
            assert!(c.curvature(&dhat, &dk, &w).unwrap().coeffs_are_zero());
        }
    }

    #[test]
    fn torsion_is_a_left_module_map() {
        let n = 2;
        let cal = Calculus::new(LieSubalgebra::inner(n));
        let c = Connection::canonical_inner(cal.clone());
        let w = OneForm::from_coeffs(n, vec![g("1"), g("-i"), g("2+i")]);
        let a = sample_element(n, 2);
        let d1 = Derivation::d_hat(n);
        let d2 = Derivation::d_lower(n, 1);
        let lhs = c.torsion(&w.act_left(&a), &d1, &d2).unwrap();
        let rhs = &a * &c.torsion(&w, &d1, &d2).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn every_gamma_datum_is_a_bimodule_connection() {
        let n = 2;
        let cal = Calculus::new(LieSubalgebra::der(n));
        // A handful of dense γ data.
        for seed in 0..5i64 {
            let size = n + 1;
            let mut gs = Vec::new();
            for b in 0..cal.g().dim() {
                let mut m = Mat::zeros(size, size);
                for i in 0..size {
                    for j in 0..size {
                        let v = GaussianRational::new(
                            rat(seed + (b + 2 * i + 3 * j) as i64, 3),
                            rat(seed - (i * j) as i64, 2),
                        );
                        m.set(i, j, v);
                    }
                }
                gs.push(m);
            }
            let c = Connection::new(cal.clone(), gs).unwrap();
            let w = OneForm::from_coeffs(n, vec![g("1+i"), g("-2"), g("1/3")]);
            let mut elements = vec![KElement::one(n), KElement::e(n)];
            elements.extend((0..n).map(|k| KElement::alpha(n, k)));
            elements.push(sample_element(n, seed));
            for d in cal.g().basis() {
                for a in &elements {
                    assert!(c.left_leibniz_residual(d, a, &w).unwrap().coeffs_are_zero());
                    assert!(c.right_leibniz_residual(d, a, &w).unwrap().coeffs_are_zero());
                }
            }
        }
    }

    #[test]
    fn well_definedness_is_enforced_on_the_tilde_quotient() {
        let n = 2;
        let cal = Calculus::new(LieSubalgebra::tilde(n));
        // γ = E_00 sends the relation (1,1,1) to (1,0,0) ∉ span{(1,1,1)}.
        let mut bad = vec![Mat::zeros(n + 1, n + 1); n];
        bad[0].set(0, 0, g("1"));
        let err = Connection::new(cal.clone(), bad).unwrap_err();
        // Labels for the tilde basis start at dt1.
        assert_eq!(err, ConnectionError::NotWellDefined { label: "dt1".into() });
        // Scalar matrices are fine.
        let ok = vec![Mat::identity(n + 1); n];
        assert!(Connection::new(cal, ok).is_ok());
    }

    #[test]
    fn inner_family_is_torsion_free_for_any_gamma_hat() {
        let n = 2;
        let cal = Calculus::new(LieSubalgebra::inner(n));
        let gamma_hat = mat(&[
            &["1/2", "i", "-1"],
            &["2-i", "0", "1/3"],
            &["-i", "5", "1+i"],
        ]);
        let c = Connection::from_inner_gamma(cal.clone(), &gamma_hat).unwrap();
        assert!(c.is_torsion_free());
        // ∇_{∂_k}dα_I = −γ_I^0 dα_k.
        let d1 = Derivation::d_lower(n, 0);
        let w = c.apply(&d1, &OneForm::d_alpha(n, 1)).unwrap();
        let mut expected = OneForm::zero(n);
        expected = expected.add(&OneForm::d_alpha(n, 1).scale(&-g("2-i")));
        assert_eq!(w, expected);
        // The canonical inner connection is not in the family shape.
        assert!(!Connection::canonical_inner(cal).is_torsion_free());
    }

    #[test]
    fn tilde_family_is_torsion_free_and_scalar_diagonals_are_flat() {
        let n = 3;
        let cal = Calculus::new(LieSubalgebra::tilde(n));
        let gij = mat(&[
            &["1/2", "i", "3"],
            &["0", "-1", "2+i"],
            &["1", "1", "1/5"],
        ]);
        let c = Connection::from_tilde_gamma(cal.clone(), &gij).unwrap();
        assert!(c.is_torsion_free());
        // ∇_{∂̃_i}dα_j = γ_ij dα_i.
        let d2 = Derivation::d_tilde(n, 1);
        let got = c.apply(&d2, &OneForm::d_alpha(n, 3)).unwrap();
        assert!(cal.forms_equal(&got, &OneForm::d_alpha(n, 2).scale(&g("2+i"))));

        // A well-defined non-family connection fails: ∇_{∂̃_1} = identity.
        let mut gs = vec![Mat::zeros(n + 1, n + 1); n];
        gs[0] = Mat::identity(n + 1);
        let flatless = Connection::new(cal.clone(), gs).unwrap();
        assert!(!flatless.is_torsion_free());

        // Scalar γ matrices commute and 𝔤 is abelian, so curvature vanishes.
        let scalars = vec![
            Mat::identity(n + 1).scale(&g("1/2")),
            Mat::identity(n + 1).scale(&g("-i")),
            Mat::identity(n + 1).scale(&g("3")),
        ];
        let flat = Connection::new(cal.clone(), scalars).unwrap();
        for (p, da) in cal.g().basis().iter().enumerate() {
            for db in cal.g().basis().iter().skip(p + 1) {
                assert!(flat.curvature_matrix(da, db).unwrap().is_zero());
                let w = OneForm::d_alpha(n, 1);
                assert!(flat.curvature(da, db, &w).unwrap().coeffs_are_zero());
            }
        }
    }

    #[test]
    fn curvature_agrees_with_its_operator_matrix() {
        let n = 2;
        let cal = Calculus::new(LieSubalgebra::inner(n));
        let gamma_hat = mat(&[
            &["1", "i", "0"],
            &["-1/2", "2", "1+i"],
            &["0", "-i", "1/3"],
        ]);
        let c = Connection::from_inner_gamma(cal.clone(), &gamma_hat).unwrap();
        let d1 = Derivation::d_hat(n);
        let d2 = Derivation::d_lower(n, 1);
        let m = c.curvature_matrix(&d1, &d2).unwrap();
        for i in 0..=n {
            let w = OneForm::d_alpha(n, i);
            let via_ops = c.curvature(&d1, &d2, &w).unwrap();
            let via_mat =
                OneForm::from_coeffs(n, crate::linalg::row_times_mat(w.coeffs(), &m));
            assert_eq!(via_ops, via_mat);
        }
    }

    #[test]
    fn star_connection_iff_real_gamma_on_the_hermitian_basis() {
        let n = 2;
        let cal = Calculus::new(LieSubalgebra::inner(n));
        // Real γ̂ → ∗-connection.
        let real = mat(&[&["1/2", "0", "0"], &["0", "1/2", "2"], &["-3", "0", "1/2"]]);
        let c = Connection::from_inner_gamma(cal.clone(), &real).unwrap();
        assert!(c.is_star_connection());
        // γ(∂̂) = i·identity → not a ∗-connection.
        let imag = Mat::identity(n + 1).scale(&g("i"));
        let c2 = Connection::from_inner_gamma(cal.clone(), &imag).unwrap();
        assert!(!c2.is_star_connection());
        // Direct definition on random data agrees with the matrix criterion.
        for (conn, expected) in [(&c, true), (&c2, false)] {
            let mut verdict = true;
            for d in cal.g().basis() {
                for i in 0..=n {
                    let w = OneForm::d_alpha(n, i);
                    let lhs = conn.apply(d, &w).unwrap().star();
                    let rhs = conn.apply(&d.star(), &w.star()).unwrap();
                    if !cal.forms_equal(&lhs, &rhs) {
                        verdict = false;
                    }
                }
            }
            assert_eq!(verdict, expected);
        }
    }

    #[test]
    fn rho_family_compatibility_of_the_half_identity() {
        let n = 2;
        let cal = Calculus::new(LieSubalgebra::inner(n));
        let h0 = &KElement::alpha(n, 0).scale(&g("2")) + &KElement::alpha(n, 1).scale(&g("-1/2"));
        let rho = vec![rat(3, 1), rat(1, 2), rat(-2, 1)];
        let h = KHermitianForm::rho_family(&cal, &rho, &h0).unwrap();

        let half = Mat::identity(n + 1).scale(&g("1/2"));
        let c = Connection::from_inner_gamma(cal.clone(), &half).unwrap();
        assert!(c.is_torsion_free());
        assert!(c.is_star_connection());
        assert!(c.is_compatible(&h));

        // The zero connection misses ∂̂h_IJ = h_IJ ≠ 0.
        let z = Connection::zero(cal.clone());
        assert!(!z.is_compatible(&h));
        let r = z
            .compatibility_residual(
                &h,
                &OneForm::d_alpha(n, 0),
                &OneForm::d_alpha(n, 1),
                &Derivation::d_hat(n),
            )
            .unwrap();
        // Residual = ∂̂h_01 = h_01.
        assert_eq!(r, h.entry(0, 1).clone());
    }

    #[test]
    fn tilde_family_compatibility_of_the_half_delta() {
        let n = 3;
        let cal = Calculus::new(LieSubalgebra::tilde(n));
        let lambdas = vec![rat(2, 1), rat(-1, 3), rat(5, 4)];
        let h = KHermitianForm::tilde_diagonal(&cal, &lambdas).unwrap();
        let half = Mat::identity(n).scale(&g("1/2"));
        let c = Connection::from_tilde_gamma(cal.clone(), &half).unwrap();
        assert!(c.is_torsion_free());
        assert!(c.is_star_connection());
        assert!(c.is_compatible(&h));

        // Compatibility transfers to the derived ∗-bimodule and right forms.
        assert!(c.is_compatible(&h.convert(FormKind::StarBimodule)));
        assert!(c.is_compatible(&h.convert(FormKind::RightHermitian)));
    }

    #[test]
    fn compatibility_transfer_for_star_connections() {
        // A ∗-connection compatible with h_L is compatible with the derived
        // g and h_R; exercised on the inner family.
        let n = 2;
        let cal = Calculus::new(LieSubalgebra::inner(n));
        let h0 = KElement::alpha(n, 1).scale(&g("3"));
        let rho = vec![rat(1, 1), rat(2, 3), rat(-1, 2)];
        let h = KHermitianForm::rho_family(&cal, &rho, &h0).unwrap();
        let half = Mat::identity(n + 1).scale(&g("1/2"));
        let c = Connection::from_inner_gamma(cal, &half).unwrap();
        assert!(c.is_star_connection());
        assert!(c.is_compatible(&h));
        assert!(c.is_compatible(&h.convert(FormKind::StarBimodule)));
        assert!(c.is_compatible(&h.convert(FormKind::RightHermitian)));
    }
}
