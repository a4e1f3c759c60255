//! Exact Levi-Civita constraint solver on Ω¹_𝔤 over K_N.
//!
//! The unknowns are the Christoffel coefficients γ_I^J(∂_b) ∈ ℂ, ordered
//! lexicographically by (basis derivation b, I, J). Every requirement —
//! well-definedness on the quotient, torsion-freeness, compatibility with
//! the given form, and (optionally) the ∗-connection reality condition — is
//! assembled from its raw definition as a sesquilinear equation
//! Σ a_t·x_t + Σ b_t·conj(x_t) + c = 0 with ℚ(i) coefficients, then split
//! into two ℚ-linear equations in the real and imaginary parts of the
//! unknowns. The resulting exact linear system is reduced by unit
//! propagation followed by fraction-free elimination, yielding either an
//! affine solution family (particular + kernel) or a verdict of emptiness
//! together with the violated constraint.
//!
//! The per-case closed forms from the structure theory (the inner family
//! ∇_{∂_k}dα_I = −γ_I^0 dα_k, the tilde family ∇_{∂̃_i}dα_j = γ_ij dα_i,
//! and γ = 0 for the full derivation algebra) are *not* used to build the
//! system; they are asserted afterwards by the tests, which keeps the
//! solver honest about the raw definitions.

use num::BigRational;

use crate::calculus::{eval_d_alpha_on, Calculus, OneForm};
use crate::connection::Connection;
use crate::form::{FormKind, KHermitianForm};
use crate::kronecker::KElement;
use crate::linalg::Mat;
use crate::scalar::GaussianRational;

/// Result of a Levi-Civita solve.
// A solve produces one outcome; boxing the family would only add
// indirection to every downstream inspection.
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone)]
pub enum LcOutcome {
    /// The affine family of all solutions.
    Family(LcFamily),
    /// No solution exists; `violated` names the first constraint that
    /// became contradictory.
    Empty {
        /// Human-readable tag of the violated constraint.
        violated: String,
    },
}

impl LcOutcome {
    /// The family, when one exists.
    pub fn family(&self) -> Option<&LcFamily> {
        match self {
            LcOutcome::Family(f) => Some(f),
            LcOutcome::Empty { .. } => None,
        }
    }
}

/// An affine family of connections: particular solution plus the kernel of
/// the homogeneous system, over the ℝ-split coordinates of the Christoffel
/// coefficients.
#[derive(Debug, Clone)]
pub struct LcFamily {
    cal: Calculus,
    particular: Connection,
    particular_vec: Vec<GaussianRational>,
    kernel_vecs: Vec<Vec<GaussianRational>>,
    kernel: Vec<Vec<Mat>>,
}

impl LcFamily {
    /// The particular solution (free parameters set to zero).
    pub fn particular(&self) -> &Connection {
        &self.particular
    }

    /// Dimension of the solution family over ℝ.
    pub fn kernel_dim(&self) -> usize {
        self.kernel_vecs.len()
    }

    /// The kernel directions as γ-matrix stacks (one matrix per 𝔤-basis
    /// derivation, matching the particular connection's layout).
    pub fn kernel_directions(&self) -> &[Vec<Mat>] {
        &self.kernel
    }

    /// particular + Σ w_k·kernel_k for real rational weights.
    pub fn sample(&self, weights: &[BigRational]) -> Connection {
        assert_eq!(weights.len(), self.kernel_dim(), "one weight per kernel direction");
        let mut v = self.particular_vec.clone();
        for (w, k) in weights.iter().zip(&self.kernel_vecs) {
            let c = GaussianRational::new(w.clone(), BigRational::from_integer(0.into()));
            for (slot, kv) in v.iter_mut().zip(k) {
                *slot = &*slot + &(kv * &c);
            }
        }
        Connection::new(self.cal.clone(), vec_to_gammas(&self.cal, &v))
            .expect("family members satisfy the well-definedness constraints")
    }

    /// True iff the given connection lies in this family (its split
    /// coefficient vector differs from the particular one by an element of
    /// the kernel span).
    pub fn contains(&self, conn: &Connection) -> bool {
        let v = gammas_to_vec(&self.cal, conn);
        let diff: Vec<GaussianRational> = v
            .iter()
            .zip(&self.particular_vec)
            .map(|(a, b)| a - b)
            .collect();
        if self.kernel_vecs.is_empty() {
            return diff.iter().all(GaussianRational::is_zero);
        }
        Mat::from_rows(self.kernel_vecs.clone()).row_span_contains(&diff)
    }
}

/// One sesquilinear equation Σ lin_t·x_t + Σ conj_t·conj(x_t) + constant = 0.
struct CxRow {
    lin: Vec<GaussianRational>,
    conj: Vec<GaussianRational>,
    constant: GaussianRational,
    tag: String,
}

impl CxRow {
    fn zero(n_cx: usize, tag: String) -> Self {
        Self {
            lin: vec![GaussianRational::zero(); n_cx],
            conj: vec![GaussianRational::zero(); n_cx],
            constant: GaussianRational::zero(),
            tag,
        }
    }
}

/// One ℚ-linear equation Σ coeffs_t·y_t + constant = 0 over the split real
/// coordinates (entries are real-valued `GaussianRational`s).
#[derive(Clone)]
struct RealRow {
    coeffs: Vec<GaussianRational>,
    constant: GaussianRational,
    tag: String,
}

fn real_g(x: &BigRational) -> GaussianRational {
    GaussianRational::new(x.clone(), BigRational::from_integer(0.into()))
}

/// Splits a sesquilinear row into its real and imaginary ℚ-linear parts
/// over coordinates (re x_0, im x_0, re x_1, im x_1, …).
fn split_row(row: &CxRow) -> [RealRow; 2] {
    let n_cx = row.lin.len();
    let mut re = vec![GaussianRational::zero(); 2 * n_cx];
    let mut im = vec![GaussianRational::zero(); 2 * n_cx];
    for t in 0..n_cx {
        let a = &row.lin[t];
        let b = &row.conj[t];
        if a.is_zero() && b.is_zero() {
            continue;
        }
        // a·x + b·conj(x) with x = u + iv contributes:
        //   real part: (re a + re b)·u + (−im a + im b)·v
        //   imag part: (im a + im b)·u + (re a − re b)·v
        re[2 * t] = real_g(&(a.re() + b.re()));
        re[2 * t + 1] = real_g(&(b.im() - a.im()));
        im[2 * t] = real_g(&(a.im() + b.im()));
        im[2 * t + 1] = real_g(&(a.re() - b.re()));
    }
    [
        RealRow {
            coeffs: re,
            constant: real_g(row.constant.re()),
            tag: format!("{} [re]", row.tag),
        },
        RealRow {
            coeffs: im,
            constant: real_g(row.constant.im()),
            tag: format!("{} [im]", row.tag),
        },
    ]
}

/// Complex unknown index of γ_I^J(∂_b).
fn cx_index(size: usize, b: usize, i: usize, j: usize) -> usize {
    (b * size + i) * size + j
}

/// Rebuilds the γ matrices from a split real coordinate vector.
fn vec_to_gammas(cal: &Calculus, v: &[GaussianRational]) -> Vec<Mat> {
    let size = cal.n() + 1;
    let dim_g = cal.g().dim();
    let mut out = Vec::with_capacity(dim_g);
    for b in 0..dim_g {
        let mut m = Mat::zeros(size, size);
        for i in 0..size {
            for j in 0..size {
                let t = cx_index(size, b, i, j);
                let value = GaussianRational::new(
                    v[2 * t].re().clone(),
                    v[2 * t + 1].re().clone(),
                );
                m.set(i, j, value);
            }
        }
        out.push(m);
    }
    out
}

/// Flattens a connection's γ matrices into the split real coordinates.
fn gammas_to_vec(cal: &Calculus, conn: &Connection) -> Vec<GaussianRational> {
    let size = cal.n() + 1;
    let dim_g = cal.g().dim();
    let mut v = vec![GaussianRational::zero(); 2 * dim_g * size * size];
    for b in 0..dim_g {
        let m = conn.gamma_matrix(b);
        for i in 0..size {
            for j in 0..size {
                let t = cx_index(size, b, i, j);
                let x = m.get(i, j);
                v[2 * t] = real_g(x.re());
                v[2 * t + 1] = real_g(x.im());
            }
        }
    }
    v
}

/// The projection-residual matrix E with v ∈ relation span ⟺ v·E = 0:
/// E = Id − P where P replays each relation's pivot coordinate.
fn relation_residual_matrix(cal: &Calculus) -> Mat {
    let size = cal.n() + 1;
    let mut em = Mat::identity(size);
    for row in cal.relations() {
        let pivot = row
            .iter()
            .position(|x| !x.is_zero())
            .expect("relation rows are nonzero");
        for j in 0..size {
            let cur = em.get(pivot, j) - &row[j];
            em.set(pivot, j, cur);
        }
    }
    em
}

/// Solves the Levi-Civita system for the calculus of `h`'s kind: returns
/// the affine family of torsion-free connections compatible with `h`
/// (∗-connections only, when `star_flag` is set), or reports emptiness with
/// the violated constraint.
pub fn solve_levi_civita(cal: &Calculus, h: &KHermitianForm, star_flag: bool) -> LcOutcome {
    let n = cal.n();
    let size = n + 1;
    let basis = cal.g().basis().to_vec();
    let labels = cal.g().labels().to_vec();
    let dim_g = basis.len();
    let n_cx = dim_g * size * size;
    let needs_star_coords = star_flag || h.kind() != FormKind::StarBimodule;
    assert!(
        !needs_star_coords || cal.g().star_closed(),
        "hermitian compatibility and reality constraints need a star-closed subalgebra"
    );

    // Evaluations dα_J(∂_b) and adjoint coordinates, precomputed.
    let d_vals: Vec<Vec<KElement>> = basis
        .iter()
        .map(|d| (0..size).map(|j| eval_d_alpha_on(n, j, d)).collect())
        .collect();
    let star_coords: Vec<Vec<GaussianRational>> = if needs_star_coords {
        basis
            .iter()
            .map(|d| {
                cal.g()
                    .coordinates_of(&d.star())
                    .expect("star-closure puts adjoints in g")
            })
            .collect()
    } else {
        Vec::new()
    };

    let mut cx_rows: Vec<CxRow> = Vec::new();

    // Well-definedness: every relation row must stay in the relation span
    // under each γ(∂_b).
    let em = relation_residual_matrix(cal);
    for (b, label) in labels.iter().enumerate() {
        for (ri, rel) in cal.relations().iter().enumerate() {
            for j2 in 0..size {
                let mut row = CxRow::zero(
                    n_cx,
                    format!("well-definedness: relation {ri} under {label}, component dalpha{j2}"),
                );
                for i in 0..size {
                    if rel[i].is_zero() {
                        continue;
                    }
                    for j in 0..size {
                        let c = &rel[i] * em.get(j, j2);
                        if !c.is_zero() {
                            let t = cx_index(size, b, i, j);
                            row.lin[t] = &row.lin[t] + &c;
                        }
                    }
                }
                cx_rows.push(row);
            }
        }
    }

    // Torsion-freeness from the raw definition on spanning symbols and
    // basis pairs: Σ_J γ_I^J(∂_b1)·dα_J(∂_b2) − Σ_J γ_I^J(∂_b2)·dα_J(∂_b1)
    // − dω(∂_b1, ∂_b2) = 0, coordinate-wise in the arrow ideal.
    for i_sym in 0..size {
        let w = OneForm::d_alpha(n, i_sym);
        for b1 in 0..dim_g {
            for b2 in b1 + 1..dim_g {
                let dw = cal
                    .exterior_eval(&w, &basis[b1], &basis[b2])
                    .expect("basis derivations are in g");
                for m in 0..n {
                    let mut row = CxRow::zero(
                        n_cx,
                        format!(
                            "torsion-free: dalpha{i_sym} on ({},{}), alpha{} coordinate",
                            labels[b1],
                            labels[b2],
                            m + 1
                        ),
                    );
                    for j in 0..size {
                        let c1 = d_vals[b2][j].alpha_coeffs()[m].clone();
                        if !c1.is_zero() {
                            let t = cx_index(size, b1, i_sym, j);
                            row.lin[t] = &row.lin[t] + &c1;
                        }
                        let c2 = d_vals[b1][j].alpha_coeffs()[m].clone();
                        if !c2.is_zero() {
                            let t = cx_index(size, b2, i_sym, j);
                            row.lin[t] = &row.lin[t] - &c2;
                        }
                    }
                    row.constant = -dw.alpha_coeffs()[m].clone();
                    cx_rows.push(row);
                }
            }
        }
    }

    // Compatibility from the raw definition on basis one-form pairs and
    // basis derivations, with the ∂∗ placement fixed by the form kind.
    let basis_forms = cal.basis_forms();
    let dim = cal.dim();
    let span_forms: Vec<OneForm> = (0..size).map(|j| OneForm::d_alpha(n, j)).collect();
    // first_vals[j][b] = h(dα_J, dx_b), second_vals[a][j] = h(dx_a, dα_J).
    let first_vals: Vec<Vec<KElement>> = span_forms
        .iter()
        .map(|wj| basis_forms.iter().map(|vb| h.eval(cal, wj, vb)).collect())
        .collect();
    let second_vals: Vec<Vec<KElement>> = basis_forms
        .iter()
        .map(|wa| span_forms.iter().map(|vj| h.eval(cal, wa, vj)).collect())
        .collect();
    for a in 0..dim {
        for bb in 0..dim {
            let lead_base = h.entry(a, bb);
            let (pa, pb) = (cal.basis_indices()[a], cal.basis_indices()[bb]);
            for (c, label) in labels.iter().enumerate() {
                let lead = basis[c].apply(lead_base);
                for m in 0..n {
                    let mut row = CxRow::zero(
                        n_cx,
                        format!(
                            "compatibility ({}): pair (dalpha{pa},dalpha{pb}), {label}, alpha{} coordinate",
                            h.kind().name(),
                            m + 1
                        ),
                    );
                    row.constant = lead.alpha_coeffs()[m].clone();
                    match h.kind() {
                        FormKind::LeftHermitian => {
                            for j in 0..size {
                                let c1 = &first_vals[j][bb].alpha_coeffs()[m];
                                if !c1.is_zero() {
                                    let t = cx_index(size, c, pa, j);
                                    row.lin[t] = &row.lin[t] - c1;
                                }
                                let c2 = &second_vals[a][j].alpha_coeffs()[m];
                                if !c2.is_zero() {
                                    for (cp, s) in star_coords[c].iter().enumerate() {
                                        if !s.is_zero() {
                                            let t = cx_index(size, cp, pb, j);
                                            row.conj[t] = &row.conj[t] - &(&s.conj() * c2);
                                        }
                                    }
                                }
                            }
                        }
                        FormKind::RightHermitian => {
                            for j in 0..size {
                                let c1 = &first_vals[j][bb].alpha_coeffs()[m];
                                if !c1.is_zero() {
                                    for (cp, s) in star_coords[c].iter().enumerate() {
                                        if !s.is_zero() {
                                            let t = cx_index(size, cp, pa, j);
                                            row.conj[t] = &row.conj[t] - &(&s.conj() * c1);
                                        }
                                    }
                                }
                                let c2 = &second_vals[a][j].alpha_coeffs()[m];
                                if !c2.is_zero() {
                                    let t = cx_index(size, c, pb, j);
                                    row.lin[t] = &row.lin[t] - c2;
                                }
                            }
                        }
                        FormKind::StarBimodule => {
                            for j in 0..size {
                                let c1 = &first_vals[j][bb].alpha_coeffs()[m];
                                if !c1.is_zero() {
                                    let t = cx_index(size, c, pa, j);
                                    row.lin[t] = &row.lin[t] - c1;
                                }
                                let c2 = &second_vals[a][j].alpha_coeffs()[m];
                                if !c2.is_zero() {
                                    let t = cx_index(size, c, pb, j);
                                    row.lin[t] = &row.lin[t] - c2;
                                }
                            }
                        }
                    }
                    cx_rows.push(row);
                }
            }
        }
    }

    // Reality (∗-connection) constraints on a hermitian basis: the rows of
    // conj(γ(∂)) − γ(∂) must lie in the relation span.
    if star_flag {
        for (hi, d) in cal.g().hermitian_basis().iter().enumerate() {
            let s = cal
                .g()
                .coordinates_of(d)
                .expect("hermitian basis spans g");
            for i in 0..size {
                for j2 in 0..size {
                    let mut row = CxRow::zero(
                        n_cx,
                        format!(
                            "star-connection reality: hermitian basis element {hi}, row dalpha{i}, component dalpha{j2}"
                        ),
                    );
                    for (b, sb) in s.iter().enumerate() {
                        if sb.is_zero() {
                            continue;
                        }
                        for jp in 0..size {
                            let e = em.get(jp, j2);
                            if e.is_zero() {
                                continue;
                            }
                            let t = cx_index(size, b, i, jp);
                            row.conj[t] = &row.conj[t] + &(&sb.conj() * e);
                            row.lin[t] = &row.lin[t] - &(sb * e);
                        }
                    }
                    cx_rows.push(row);
                }
            }
        }
    }

    // Split into ℚ-linear rows and solve.
    let n_real = 2 * n_cx;
    let mut rows: Vec<RealRow> = Vec::with_capacity(2 * cx_rows.len());
    for cx in &cx_rows {
        for r in split_row(cx) {
            if r.coeffs.iter().any(|c| !c.is_zero()) || !r.constant.is_zero() {
                rows.push(r);
            }
        }
    }

    // Unit propagation: singleton rows pin a variable; substitute until a
    // fixpoint (or a contradiction) is reached.
    let mut assigned: Vec<Option<GaussianRational>> = vec![None; n_real];
    loop {
        let mut progress = false;
        let mut next_rows = Vec::with_capacity(rows.len());
        for mut row in rows {
            // Fold in assigned variables.
            for (t, c) in row.coeffs.iter_mut().enumerate() {
                if !c.is_zero() {
                    if let Some(v) = &assigned[t] {
                        row.constant = &row.constant + &(&*c * v);
                        *c = GaussianRational::zero();
                    }
                }
            }
            let live: Vec<usize> = (0..n_real).filter(|&t| !row.coeffs[t].is_zero()).collect();
            match live.len() {
                0 => {
                    if !row.constant.is_zero() {
                        return LcOutcome::Empty { violated: row.tag };
                    }
                    progress = true; // row dissolved
                }
                1 => {
                    let t = live[0];
                    let value = -&(&row.constant
                        * &row.coeffs[t].inv().expect("nonzero coefficient"));
                    match &assigned[t] {
                        Some(old) if *old != value => {
                            return LcOutcome::Empty { violated: row.tag };
                        }
                        Some(_) => {}
                        None => {
                            assigned[t] = Some(value);
                        }
                    }
                    progress = true;
                }
                _ => next_rows.push(row),
            }
        }
        rows = next_rows;
        if !progress {
            break;
        }
    }

    // Dense phase, restricted to the columns the remaining rows actually
    // touch; duplicate rows (after scaling to a unit leading coefficient)
    // carry no information and are dropped first.
    dedup_rows(&mut rows);
    let mut is_active = vec![false; n_real];
    for r in &rows {
        for (t, c) in r.coeffs.iter().enumerate() {
            if !c.is_zero() {
                is_active[t] = true;
            }
        }
    }
    let active_cols: Vec<usize> = (0..n_real)
        .filter(|&t| assigned[t].is_none() && is_active[t])
        .collect();
    let spare_cols: Vec<usize> = (0..n_real)
        .filter(|&t| assigned[t].is_none() && !is_active[t])
        .collect();
    let (dense_particular, dense_kernel) = if rows.is_empty() {
        (Vec::new(), Vec::new())
    } else {
        let a = Mat::from_rows(
            rows.iter()
                .map(|r| {
                    active_cols
                        .iter()
                        .map(|&t| r.coeffs[t].clone())
                        .collect::<Vec<_>>()
                })
                .collect(),
        );
        let b: Vec<GaussianRational> = rows.iter().map(|r| -&r.constant).collect();
        match a.solve_affine(&b) {
            Some(solution) => solution,
            None => {
                return LcOutcome::Empty {
                    violated: first_violated(&rows, &active_cols),
                };
            }
        }
    };

    // Reassemble full-length vectors: assigned values plus the dense
    // solution on the active columns; the kernel gets the dense directions
    // plus one unit direction per untouched unassigned variable.
    let mut particular_vec = vec![GaussianRational::zero(); n_real];
    for (t, slot) in particular_vec.iter_mut().enumerate() {
        if let Some(v) = &assigned[t] {
            *slot = v.clone();
        }
    }
    for (k, &t) in active_cols.iter().enumerate() {
        particular_vec[t] = dense_particular[k].clone();
    }
    let mut kernel_vecs: Vec<Vec<GaussianRational>> = dense_kernel
        .into_iter()
        .map(|kv| {
            let mut full = vec![GaussianRational::zero(); n_real];
            for (k, &t) in active_cols.iter().enumerate() {
                full[t] = kv[k].clone();
            }
            full
        })
        .collect();
    for &t in &spare_cols {
        let mut full = vec![GaussianRational::zero(); n_real];
        full[t] = GaussianRational::one();
        kernel_vecs.push(full);
    }

    let particular = Connection::new(cal.clone(), vec_to_gammas(cal, &particular_vec))
        .expect("the well-definedness constraints hold for solver output");
    let kernel: Vec<Vec<Mat>> = kernel_vecs
        .iter()
        .map(|v| vec_to_gammas(cal, v))
        .collect();
    LcOutcome::Family(LcFamily {
        cal: cal.clone(),
        particular,
        particular_vec,
        kernel_vecs,
        kernel,
    })
}

/// Scales each row to a unit leading coefficient and drops exact
/// duplicates, keeping first occurrences in order.
fn dedup_rows(rows: &mut Vec<RealRow>) {
    let mut seen = std::collections::BTreeSet::new();
    rows.retain_mut(|r| {
        let lead = r
            .coeffs
            .iter()
            .position(|c| !c.is_zero())
            .expect("rows entering the dense phase have live coefficients");
        let inv = r.coeffs[lead].inv().expect("leading coefficient is nonzero");
        for c in r.coeffs.iter_mut() {
            if !c.is_zero() {
                *c = &*c * &inv;
            }
        }
        r.constant = &r.constant * &inv;
        let key: String = r
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(t, c)| format!("{t}:{c}"))
            .chain(std::iter::once(format!("c:{}", r.constant)))
            .collect::<Vec<_>>()
            .join("|");
        seen.insert(key)
    });
}

/// On an inconsistent dense system, identifies the first row whose addition
/// makes the system infeasible: rows are reduced incrementally against the
/// pivots collected so far, and the first row that reduces to 0 = nonzero
/// is the culprit.
fn first_violated(rows: &[RealRow], active_cols: &[usize]) -> String {
    let width = active_cols.len();
    let mut pivots: Vec<(usize, Vec<GaussianRational>)> = Vec::new();
    for r in rows {
        let mut v: Vec<GaussianRational> =
            active_cols.iter().map(|&t| r.coeffs[t].clone()).collect();
        v.push(r.constant.clone());
        for (p, basis_row) in &pivots {
            if !v[*p].is_zero() {
                let f = &v[*p] * &basis_row[*p].inv().expect("pivot entries are nonzero");
                for (slot, b) in v.iter_mut().zip(basis_row) {
                    *slot = &*slot - &(&f * b);
                }
            }
        }
        match (0..width).find(|&k| !v[k].is_zero()) {
            Some(p) => pivots.push((p, v)),
            None => {
                if !v[width].is_zero() {
                    return r.tag.clone();
                }
            }
        }
    }
    // solve_affine said inconsistent, so the scan above must have fired.
    unreachable!("inconsistent system without a violated row")
}
