//! Seeded generation of random algebra data for property sweeps and
//! randomized verification. Everything is driven by a ChaCha8 stream, so a
//! fixed seed reproduces the exact same inputs on every platform.

use num::{BigRational, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::{Calculus, OneForm};
use crate::derivation::{Derivation, LieSubalgebra};
use crate::form::{FormKind, KHermitianForm};
use crate::kronecker::KElement;
use crate::scalar::{GaussianRational, LaurentScalar};
use crate::torus::TorusElement;

/// A deterministic source of small random algebra data.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    /// Creates a sampler from a seed; equal seeds yield equal streams.
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// A small rational p/q with p ∈ [−9, 9] and q ∈ [1, 9].
    pub fn rational(&mut self) -> BigRational {
        BigRational::new(
            self.rng.gen_range(-9i64..=9).into(),
            self.rng.gen_range(1i64..=9).into(),
        )
    }

    /// A small nonzero rational.
    pub fn nonzero_rational(&mut self) -> BigRational {
        loop {
            let r = self.rational();
            if !r.is_zero() {
                return r;
            }
        }
    }

    /// A small Gaussian rational.
    pub fn gaussian(&mut self) -> GaussianRational {
        GaussianRational::new(self.rational(), self.rational())
    }

    /// A small nonzero Gaussian rational.
    pub fn nonzero_gaussian(&mut self) -> GaussianRational {
        loop {
            let z = self.gaussian();
            if !z.is_zero() {
                return z;
            }
        }
    }

    /// A random element of K_N with small coordinates.
    pub fn k_element(&mut self, n: usize) -> KElement {
        let coords: Vec<GaussianRational> = (0..n + 2).map(|_| self.gaussian()).collect();
        KElement::from_coords(n, &coords)
    }

    /// A random element of the arrow space K^α_N.
    pub fn arrow_element(&mut self, n: usize) -> KElement {
        let mut coords = vec![GaussianRational::zero(); n + 2];
        for c in coords.iter_mut().skip(2) {
            *c = self.gaussian();
        }
        KElement::from_coords(n, &coords)
    }

    /// A random hermitian element of K^α_N (real arrow coefficients).
    pub fn hermitian_arrow(&mut self, n: usize) -> KElement {
        let mut coords = vec![GaussianRational::zero(); n + 2];
        for c in coords.iter_mut().skip(2) {
            *c = GaussianRational::new(self.rational(), BigRational::zero());
        }
        KElement::from_coords(n, &coords)
    }

    /// A random derivation in the span of the given subalgebra's basis.
    pub fn derivation_in(&mut self, g: &LieSubalgebra) -> Derivation {
        let mut d = Derivation::zero(g.n());
        for basis in g.basis() {
            d = &d + &basis.scale(&self.gaussian());
        }
        d
    }

    /// A random one-form over the calculus basis.
    pub fn one_form(&mut self, cal: &Calculus) -> OneForm {
        let coords: Vec<GaussianRational> = (0..cal.dim()).map(|_| self.gaussian()).collect();
        cal.from_basis_coords(&coords)
    }

    /// A random form of the given kind: a random hermitian component matrix
    /// (h_ab for a < b free, diagonal hermitian, h_ba = h_ab∗) over the
    /// arrow space.
    pub fn hermitian_form(&mut self, cal: &Calculus, kind: FormKind) -> KHermitianForm {
        let dim = cal.dim();
        let n = cal.n();
        let mut entries = vec![vec![KElement::zero(n); dim]; dim];
        for a in 0..dim {
            entries[a][a] = self.hermitian_arrow(n);
            for b in a + 1..dim {
                let x = self.arrow_element(n);
                entries[b][a] = x.star();
                entries[a][b] = x;
            }
        }
        KHermitianForm::new(cal, kind, entries).expect("sampled matrix is hermitian by construction")
    }

    /// A random candidate inverse matrix: arbitrary arrow-space entries.
    pub fn candidate_inverse(&mut self, cal: &Calculus) -> Vec<Vec<KElement>> {
        let dim = cal.dim();
        (0..dim)
            .map(|_| (0..dim).map(|_| self.arrow_element(cal.n())).collect())
            .collect()
    }

    /// A vector of `k` random real weights.
    pub fn weights(&mut self, k: usize) -> Vec<BigRational> {
        (0..k).map(|_| self.rational()).collect()
    }

    /// A random torus element with support and q-degrees in [−deg, deg].
    pub fn torus_element(&mut self, deg: i64) -> TorusElement {
        let mut x = TorusElement::zero();
        let terms = self.rng.gen_range(1..=3);
        for _ in 0..terms {
            let k = self.rng.gen_range(-deg..=deg);
            let l = self.rng.gen_range(-deg..=deg);
            let m = self.rng.gen_range(-deg..=deg);
            let mono = TorusElement::monomial(k, l, LaurentScalar::monomial(self.gaussian(), m));
            x = &x + &mono;
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::SubalgebraKind;

    #[test]
    fn equal_seeds_reproduce_equal_streams() {
        let mut s1 = Sampler::new(42);
        let mut s2 = Sampler::new(42);
        for _ in 0..10 {
            assert_eq!(s1.gaussian(), s2.gaussian());
        }
        assert_eq!(s1.k_element(3), s2.k_element(3));
        assert_eq!(s1.torus_element(2), s2.torus_element(2));
    }

    #[test]
    fn samples_satisfy_their_advertised_shapes() {
        let mut s = Sampler::new(7);
        for _ in 0..20 {
            assert!(!s.nonzero_rational().is_zero());
            let h = s.hermitian_arrow(3);
            assert!(h.is_hermitian());
            assert!(h.in_arrow_ideal());
        }
        let g = LieSubalgebra::named(SubalgebraKind::Der, 2);
        let d = s.derivation_in(&g);
        assert!(g.contains(&d));
        let cal = Calculus::new(LieSubalgebra::named(SubalgebraKind::Tilde, 2));
        let form = s.hermitian_form(&cal, FormKind::LeftHermitian);
        for a in 0..form.dim() {
            for b in 0..form.dim() {
                assert_eq!(form.entry(a, b).star(), *form.entry(b, a));
            }
        }
    }
}
