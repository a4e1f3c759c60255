//! Named verification suites shared by the command-line tool and the
//! acceptance tests. Every check computes an exact residual; a check
//! passes only when its residual is literally zero.

use num::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::batch;
use crate::calculus::{Calculus, OneForm};
use crate::derivation::{Derivation, LieSubalgebra, SubalgebraKind};
use crate::form::KHermitianForm;
use crate::kronecker::{KElement, KTrace};
use crate::levi_civita::{solve_levi_civita, LcOutcome};
use crate::linalg::Mat;
use crate::sample::Sampler;
use crate::torus;

/// Outcome of one named check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    /// The residual is exactly zero.
    Pass,
    /// A nonzero residual was found.
    Fail,
    /// The check could not be evaluated.
    Error,
}

/// One named check with its exact residual.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    /// Stable check identifier.
    pub name: String,
    /// Pass/fail/error.
    pub status: CheckStatus,
    /// Serialized residual; `"0"` on pass when a residual was computed,
    /// the first offending value otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
}

impl CheckResult {
    /// A check that compares an exact residual against zero: `witness` is
    /// `None` for a zero residual and the first offending value otherwise.
    pub fn from_witness(name: impl Into<String>, witness: Option<String>) -> Self {
        match witness {
            None => Self {
                name: name.into(),
                status: CheckStatus::Pass,
                residual: Some("0".to_string()),
            },
            Some(w) => Self {
                name: name.into(),
                status: CheckStatus::Fail,
                residual: Some(w),
            },
        }
    }

    /// A structural (boolean) check without a numeric residual.
    pub fn structural(name: impl Into<String>, holds: bool) -> Self {
        Self {
            name: name.into(),
            status: if holds { CheckStatus::Pass } else { CheckStatus::Fail },
            residual: None,
        }
    }

    /// A check that could not be evaluated.
    pub fn error(name: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: CheckStatus::Error,
            residual: Some(message.into()),
        }
    }
}

/// True iff every check passed.
pub fn all_pass(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.status == CheckStatus::Pass)
}

fn integer_residual(got: i64, expected: i64) -> Option<String> {
    if got == expected {
        None
    } else {
        Some(format!("{}", got - expected))
    }
}

/// The `kn-info` suite: algebra dimension, trivial center, exact ranks of
/// the derivation spaces, the displayed bracket table, and the trace
/// classification. Returns the checks and a detail payload with the
/// computed dimensions.
pub fn kn_info(n: usize, seed: u64) -> (Vec<CheckResult>, Value) {
    let mut results = Vec::new();

    // Algebra dimension: coordinates of K_N have length N + 2.
    let dim_algebra = KElement::one(n).coords().len();
    results.push(CheckResult::from_witness(
        "algebra-dimension",
        integer_residual(dim_algebra as i64, n as i64 + 2),
    ));

    // Trivial center: scalars are central, e and the arrows are not.
    let mut central_ok = KElement::one(n).is_central()
        && KElement::scalar(n, "2-i".parse().unwrap()).is_central()
        && !KElement::e(n).is_central();
    for k in 0..n {
        central_ok = central_ok && !KElement::alpha(n, k).is_central();
    }
    results.push(CheckResult::structural("center-trivial", central_ok));

    // Exact ranks of the derivation coordinate matrices.
    let der = LieSubalgebra::der(n);
    let der_rank = Mat::from_rows(der.basis().iter().map(|d| d.coords()).collect()).rank();
    results.push(CheckResult::from_witness(
        "derivation-rank",
        integer_residual(der_rank as i64, (n + n * n) as i64),
    ));
    let inner = LieSubalgebra::inner(n);
    let inner_rank = Mat::from_rows(inner.basis().iter().map(|d| d.coords()).collect()).rank();
    results.push(CheckResult::from_witness(
        "inner-rank",
        integer_residual(inner_rank as i64, n as i64 + 1),
    ));

    // The displayed bracket table.
    results.push(CheckResult::from_witness(
        "bracket-table",
        bracket_table_witness(n),
    ));

    // Trace classification: τ(α_k) = 0, τ(e) = τ0/2 + iτ1, τ([a, b]) = 0.
    let mut sampler = Sampler::new(seed);
    let trace = KTrace::from_ratios((3, 2), (-1, 3));
    let mut trace_witness = None;
    for k in 0..n {
        let v = trace.eval(&KElement::alpha(n, k));
        if !v.is_zero() {
            trace_witness = Some(format!("trace(alpha{}) = {v}", k + 1));
            break;
        }
    }
    let tau_e = trace.eval(&KElement::e(n));
    let expected_tau_e = "3/4-1/3*i".parse().unwrap();
    if trace_witness.is_none() && tau_e != expected_tau_e {
        trace_witness = Some(format!("trace(e) = {tau_e}"));
    }
    if trace_witness.is_none() {
        for _ in 0..10 {
            let a = sampler.k_element(n);
            let b = sampler.k_element(n);
            let v = trace.eval(&a.commutator(&b));
            if !v.is_zero() {
                trace_witness = Some(format!("trace([a, b]) = {v}"));
                break;
            }
        }
    }
    results.push(CheckResult::from_witness("trace-classification", trace_witness));

    let detail = json!({
        "dimAlgebra": dim_algebra,
        "dimDer": der_rank,
        "dimInner": inner_rank,
    });
    (results, detail)
}

/// Verifies the bracket table
///   [∂_i^j, ∂_k^l] = δ_k^j ∂_i^l − δ_i^l ∂_k^j,
///   [∂_i^j, ∂_k] = δ_k^j ∂_i,
///   [∂_i, ∂_j] = 0,
///   [∂̂, ∂_i] = ∂_i
/// and returns the first mismatch, if any.
pub fn bracket_table_witness(n: usize) -> Option<String> {
    let lower: Vec<Derivation> = (0..n).map(|k| Derivation::d_lower(n, k)).collect();
    let upper: Vec<Vec<Derivation>> = (0..n)
        .map(|k| (0..n).map(|l| Derivation::d_upper(n, k, l)).collect())
        .collect();
    let delta = |a: usize, b: usize| a == b;

    // [∂_i^j, ∂_k^l] = δ_k^j ∂_i^l − δ_i^l ∂_k^j (all indices 1-based in
    // the display, 0-based here).
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let got = upper[i][j].bracket(&upper[k][l]);
                    let mut expected = Derivation::zero(n);
                    if delta(k, j) {
                        expected = &expected + &upper[i][l];
                    }
                    if delta(i, l) {
                        expected = &expected - &upper[k][j];
                    }
                    if got != expected {
                        return Some(format!(
                            "[d^({},{}), d^({},{})] differs",
                            i + 1,
                            j + 1,
                            k + 1,
                            l + 1
                        ));
                    }
                }
            }
        }
    }
    // [∂_i^j, ∂_k] = δ_k^j ∂_i.
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let got = upper[i][j].bracket(&lower[k]);
                let expected = if delta(k, j) {
                    lower[i].clone()
                } else {
                    Derivation::zero(n)
                };
                if got != expected {
                    return Some(format!("[d^({},{}), d_{}] differs", i + 1, j + 1, k + 1));
                }
            }
        }
    }
    // [∂_i, ∂_j] = 0.
    for i in 0..n {
        for j in 0..n {
            if !lower[i].bracket(&lower[j]).is_zero() {
                return Some(format!("[d_{}, d_{}] is nonzero", i + 1, j + 1));
            }
        }
    }
    // [∂̂, ∂_i] = ∂_i.
    let dhat = Derivation::d_hat(n);
    for (i, di) in lower.iter().enumerate() {
        if dhat.bracket(di) != *di {
            return Some(format!("[dhat, d_{}] differs", i + 1));
        }
    }
    None
}

/// Expected first-order dimension of Ω¹_𝔤 for the named subalgebras.
fn expected_omega1_dim(kind: SubalgebraKind, n: usize) -> Option<usize> {
    match kind {
        SubalgebraKind::Der | SubalgebraKind::Inner => Some(n + 1),
        SubalgebraKind::Tilde => Some(n),
        SubalgebraKind::Custom => None,
    }
}

/// The `calculus` suite: first-order dimension, connectedness, the tilde
/// relation, explicit H¹ preimages, and vanishing of the exterior square
/// on generator pairs and seeded random pairs.
pub fn calculus_suite(n: usize, kind: SubalgebraKind, seed: u64) -> (Vec<CheckResult>, Value) {
    let cal = Calculus::new(LieSubalgebra::named(kind, n));
    let mut results = Vec::new();

    if let Some(expected) = expected_omega1_dim(kind, n) {
        results.push(CheckResult::from_witness(
            "first-order-dimension",
            integer_residual(cal.dim() as i64, expected as i64),
        ));
        results.push(CheckResult::structural(
            "connectedness",
            cal.connected() == (kind != SubalgebraKind::Tilde),
        ));
    }

    if kind == SubalgebraKind::Tilde {
        // The single relation dα_0 + dα_1 + … + dα_N = 0, in reduced form.
        let expected: Vec<Vec<crate::scalar::GaussianRational>> =
            vec![(0..=n).map(|_| "1".parse().unwrap()).collect()];
        results.push(CheckResult::structural(
            "relation-normal-form",
            cal.relations() == expected.as_slice(),
        ));
    }

    // H¹ = 0: the explicit preimage inverts d on every basis form and on
    // seeded random forms.
    let mut sampler = Sampler::new(seed);
    let mut forms: Vec<OneForm> = cal.basis_forms();
    for _ in 0..10 {
        forms.push(sampler.one_form(&cal));
    }
    let mut h1_witness = None;
    for w in &forms {
        let a = cal.h1_preimage(w);
        if !cal.forms_equal(&cal.d(&a), w) {
            h1_witness = Some(format!("d(preimage) differs on {w}"));
            break;
        }
    }
    results.push(CheckResult::from_witness("h1-preimages", h1_witness));

    // Ω² = 0: da·db evaluates to zero on every 𝔤-basis pair, for the
    // algebra generators and for seeded random elements.
    let mut elements = vec![KElement::one(n), KElement::e(n)];
    elements.extend((0..n).map(|k| KElement::alpha(n, k)));
    results.push(CheckResult::from_witness(
        "wedge-generators",
        wedge_witness(&cal, &elements),
    ));
    let random: Vec<KElement> = (0..20).map(|_| sampler.k_element(n)).collect();
    results.push(CheckResult::from_witness(
        "wedge-random",
        wedge_witness(&cal, &random),
    ));

    let detail = serde_json::to_value(cal.summary()).expect("summary serializes");
    (results, detail)
}

/// Evaluates da·db on all element pairs × all 𝔤-basis derivation pairs and
/// returns the first nonzero value, if any.
pub fn wedge_witness(cal: &Calculus, elements: &[KElement]) -> Option<String> {
    let basis = cal.g().basis().to_vec();
    let mut pairs = Vec::new();
    for (i, a) in elements.iter().enumerate() {
        for b in elements.iter().skip(i) {
            pairs.push((a.clone(), b.clone()));
        }
    }
    let outcomes = batch::map_all(&pairs, |(a, b)| {
        for (p, d1) in basis.iter().enumerate() {
            for d2 in basis.iter().skip(p + 1) {
                let v = cal.wedge_eval(a, b, d1, d2);
                if !v.is_zero() {
                    return Some(format!("(da db)({a}, {b}) = {v}"));
                }
            }
        }
        None
    });
    outcomes.into_iter().flatten().next()
}

/// The `lc-solve` suite: runs the solver and re-verifies the outcome
/// against the raw definitions of torsion, compatibility, and the
/// ∗-connection condition — never the per-case closed forms. Returns the
/// residual checks and a detail payload with the family data.
pub fn lc_solve_suite(
    cal: &Calculus,
    form: &KHermitianForm,
    star: bool,
    seed: u64,
) -> (Vec<CheckResult>, Value) {
    let outcome = solve_levi_civita(cal, form, star);
    match outcome {
        LcOutcome::Empty { violated } => {
            let results = vec![CheckResult::structural("solver-decided", true)];
            let detail = json!({
                "status": "empty",
                "violated": violated,
            });
            (results, detail)
        }
        LcOutcome::Family(family) => {
            let mut results = Vec::new();
            let mut verify_member = |tag: &str, conn: &crate::connection::Connection| {
                results.push(CheckResult::structural(
                    format!("{tag}-torsion-free"),
                    conn.is_torsion_free(),
                ));
                results.push(CheckResult::structural(
                    format!("{tag}-compatible"),
                    conn.is_compatible(form),
                ));
                if star {
                    results.push(CheckResult::structural(
                        format!("{tag}-star-connection"),
                        conn.is_star_connection(),
                    ));
                }
            };
            verify_member("particular", family.particular());
            let mut sampler = Sampler::new(seed);
            let weights = sampler.weights(family.kernel_dim());
            let member = family.sample(&weights);
            verify_member("sampled-member", &member);
            let detail = json!({
                "status": "family",
                "kernelDim": family.kernel_dim(),
                "particular": family.particular().to_data(),
            });
            (results, detail)
        }
    }
}

/// The `torus verify-examples` suite: the worked constructions on the
/// noncommutative torus, each verified by exact residuals.
pub fn torus_examples() -> (Vec<CheckResult>, Value) {
    use crate::scalar::{GaussianRational, LaurentScalar};
    use crate::torus::{TorusElement, TorusOneForm};

    let mut results = Vec::new();
    let g = |s: &str| -> GaussianRational { s.parse().unwrap() };

    // VU = qUV.
    let u = TorusElement::u();
    let v = TorusElement::v();
    let exchange = &(&v * &u) - &(&u * &v).scale_l(&LaurentScalar::q());
    results.push(CheckResult::from_witness(
        "exchange-rule",
        (!exchange.is_zero()).then(|| exchange.to_string()),
    ));

    // d(U) = iUω and (dU)V = q⁻¹V(dU).
    let du = u.d();
    let expected_du = TorusOneForm::new(u.scale_g(&g("i")), TorusElement::zero());
    let du_diff = &du - &expected_du;
    results.push(CheckResult::from_witness(
        "differential-of-u",
        (!du_diff.is_zero()).then(|| format!("{} | {}", du_diff.omega_coef(), du_diff.eta_coef())),
    ));
    let lhs = du.right_mul(&v);
    let rhs = du.left_mul(&v.scale_l(&LaurentScalar::q_pow(-1)));
    let bimod = &lhs - &rhs;
    results.push(CheckResult::from_witness(
        "du-bimodule-relation",
        (!bimod.is_zero()).then(|| format!("{} | {}", bimod.omega_coef(), bimod.eta_coef())),
    ));

    // Helper: torsion + compatibility residual witness for metric data.
    let metric_witness = |conn: &torus::TorusConnection,
                          data: &torus::TorusHermitianData|
     -> Option<String> {
        for b in 0..2 {
            let t = conn.torsion(b);
            if !t.is_zero() {
                return Some(format!("torsion({}) = {t}", b + 1));
            }
        }
        for ((c, a, b), r) in data.compatibility_residuals(conn) {
            if !r.is_zero() {
                return Some(format!("compat({},{},{}) = {r}", c + 1, a + 1, b + 1));
            }
        }
        None
    };

    // Diagonal LC on scalar metrics.
    let h1 = TorusElement::scalar_g(g("3/2"));
    let h1inv = TorusElement::scalar_g(g("2/3"));
    let h2 = TorusElement::scalar_g(g("5"));
    let h2inv = TorusElement::scalar_g(g("1/5"));
    match torus::diagonal_lc(&h1, &h1inv, &h2, &h2inv) {
        Ok((conn, data)) => {
            results.push(CheckResult::from_witness(
                "diagonal-lc-scalars",
                metric_witness(&conn, &data),
            ));
        }
        Err(e) => results.push(CheckResult::error("diagonal-lc-scalars", e.to_string())),
    }

    // Off-diagonal LC on a monomial metric (with a genuine q-power).
    let hhat = TorusElement::monomial(1, 1, LaurentScalar::monomial(g("2"), 1));
    let hhatinv = TorusElement::monomial(
        -1,
        -1,
        &LaurentScalar::monomial(g("1/2"), -1) * &LaurentScalar::q_pow(1),
    );
    match torus::offdiagonal_lc(&hhat, &hhatinv) {
        Ok((conn, data)) => {
            results.push(CheckResult::from_witness(
                "offdiagonal-lc-monomial",
                metric_witness(&conn, &data),
            ));
        }
        Err(e) => results.push(CheckResult::error("offdiagonal-lc-monomial", e.to_string())),
    }

    // Constant off-diagonal γ-family: torsion-free ∗-bimodule connection.
    match torus::constant_offdiagonal_example(
        &BigRational::from_integer(1.into()),
        &BigRational::new(1.into(), 2.into()),
        &BigRational::from_integer(3.into()),
    ) {
        Ok((conn, data)) => {
            let mut witness = metric_witness(&conn, &data);
            if witness.is_none() {
                let report = conn.report();
                if !(report.bimodule && report.star_connection) {
                    witness = Some(format!(
                        "bimodule = {}, star = {}",
                        report.bimodule, report.star_connection
                    ));
                }
            }
            results.push(CheckResult::from_witness(
                "constant-offdiagonal-family",
                witness,
            ));
        }
        Err(e) => results.push(CheckResult::error("constant-offdiagonal-family", e.to_string())),
    }

    // The g-form family: torsion-free bimodule (not ∗) connections.
    for (k, l, z) in [(1i64, 0i64, g("1")), (0, 1, g("2")), (2, 3, g("1+i"))] {
        let name = format!("gform({k},{l},{z})");
        match torus::gform_example(k, l, &z) {
            Ok((conn, g_up)) => {
                let mut witness = None;
                for b in 0..2 {
                    let t = conn.torsion(b);
                    if !t.is_zero() {
                        witness = Some(format!("torsion({}) = {t}", b + 1));
                        break;
                    }
                }
                if witness.is_none() {
                    for ((c, a, b), r) in torus::g_compat_residuals(&conn, &g_up) {
                        if !r.is_zero() {
                            witness =
                                Some(format!("compat({},{},{}) = {r}", c + 1, a + 1, b + 1));
                            break;
                        }
                    }
                }
                if witness.is_none() {
                    let report = conn.report();
                    if !report.bimodule || report.star_connection {
                        witness = Some(format!(
                            "bimodule = {}, star = {}",
                            report.bimodule, report.star_connection
                        ));
                    }
                }
                results.push(CheckResult::from_witness(name, witness));
            }
            Err(e) => results.push(CheckResult::error(name, e.to_string())),
        }
    }

    let detail = json!({ "examples": results.len() });
    (results, detail)
}

/// The `torus cohomology` suite: the window cohomology triple must be
/// (1, 2, 1).
pub fn torus_cohomology_suite(window: i64) -> Result<(Vec<CheckResult>, Value), torus::TorusError> {
    let (h0, h1, h2) = torus::cohomology(window)?;
    let witness = if (h0, h1, h2) == (1, 2, 1) {
        None
    } else {
        Some(format!("({h0}, {h1}, {h2})"))
    };
    let results = vec![CheckResult::from_witness("cohomology-triple", witness)];
    let detail = json!({
        "window": window,
        "h0": h0,
        "h1": h1,
        "h2": h2,
    });
    Ok((results, detail))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kn_info_passes_for_small_n() {
        for n in 1..=3 {
            let (results, detail) = kn_info(n, 0);
            assert!(all_pass(&results), "n = {n}: {results:?}");
            assert_eq!(detail["dimDer"], json!(n + n * n));
            assert_eq!(detail["dimInner"], json!(n + 1));
        }
    }

    #[test]
    fn calculus_suite_passes_for_all_kinds() {
        for kind in [SubalgebraKind::Der, SubalgebraKind::Inner, SubalgebraKind::Tilde] {
            let (results, detail) = calculus_suite(2, kind, 0);
            assert!(all_pass(&results), "{kind:?}: {results:?}");
            assert_eq!(detail["h1_dim"], json!(0));
        }
    }

    #[test]
    fn torus_suites_pass() {
        let (results, _) = torus_examples();
        assert!(all_pass(&results), "{results:?}");
        let (results, detail) = torus_cohomology_suite(2).unwrap();
        assert!(all_pass(&results), "{results:?}");
        assert_eq!(detail["h1"], json!(2));
        assert!(torus_cohomology_suite(0).is_err());
    }

    #[test]
    fn check_result_serialization_is_stable() {
        let r = CheckResult::from_witness("example", None);
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"name":"example","status":"pass","residual":"0"}"#
        );
        let s = CheckResult::structural("shape", true);
        assert_eq!(
            serde_json::to_string(&s).unwrap(),
            r#"{"name":"shape","status":"pass"}"#
        );
    }
}
