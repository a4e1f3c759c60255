//! Laurent scalars ℚ(i)[q, q⁻¹] in a formal parameter q.
//!
//! q is transcendental: no numeric value is ever substituted, and the
//! involution acts by `star(c·q^m) = conj(c)·q^(−m)`. Only the nonzero
//! monomials c·q^m are invertible, which the torus module relies on.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{parse_error, GaussianRational, ScalarError};

/// A finitely supported Laurent polynomial Σ c_m·q^m with c_m ∈ ℚ(i).
///
/// The map never stores zero coefficients, so equality is structural and the
/// printed form (terms in ascending exponent order) is canonical.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentScalar {
    terms: BTreeMap<i64, GaussianRational>,
}

impl LaurentScalar {
    /// The zero element.
    pub fn zero() -> Self {
        Self::default()
    }

    /// The unit 1 = 1·q⁰.
    pub fn one() -> Self {
        Self::from_gaussian(GaussianRational::one())
    }

    /// A constant c·q⁰.
    pub fn from_gaussian(c: GaussianRational) -> Self {
        Self::monomial(c, 0)
    }

    /// The integer n as a constant.
    pub fn from_int(n: i64) -> Self {
        Self::from_gaussian(GaussianRational::from_int(n))
    }

    /// The monomial c·q^m.
    pub fn monomial(c: GaussianRational, m: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    /// The generator q.
    pub fn q() -> Self {
        Self::monomial(GaussianRational::one(), 1)
    }

    /// The power q^m (negative m gives q⁻|m|).
    pub fn q_pow(m: i64) -> Self {
        Self::monomial(GaussianRational::one(), m)
    }

    /// Coefficient of q^m (zero when absent).
    pub fn coeff(&self, m: i64) -> GaussianRational {
        self.terms.get(&m).cloned().unwrap_or_else(GaussianRational::zero)
    }

    /// The terms (m, c_m) in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&i64, &GaussianRational)> {
        self.terms.iter()
    }

    /// True iff there are no terms.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff this equals 1.
    pub fn is_one(&self) -> bool {
        self == &Self::one()
    }

    /// Returns (m, c) when this is a single nonzero monomial c·q^m.
    pub fn as_monomial(&self) -> Option<(i64, &GaussianRational)> {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            Some((*m, c))
        } else {
            None
        }
    }

    /// The involution: star(Σ c_m q^m) = Σ conj(c_m) q^(−m).
    #[must_use]
    pub fn star(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (-m, c.conj()))
            .collect();
        Self { terms }
    }

    /// True iff star(self) = self.
    pub fn is_hermitian(&self) -> bool {
        self == &self.star()
    }

    /// Multiplies by a ℚ(i) scalar.
    #[must_use]
    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let terms = self.terms.iter().map(|(m, v)| (*m, v * c)).collect();
        Self { terms }
    }

    /// Inverse of a monomial: (c·q^m)⁻¹ = c⁻¹·q^(−m). Errors when the
    /// support has zero or more than one term — nothing else is invertible
    /// in ℚ(i)[q, q⁻¹].
    pub fn invert_monomial(&self) -> Result<Self, ScalarError> {
        match self.as_monomial() {
            Some((m, c)) => Ok(Self::monomial(c.inv()?, -m)),
            None => Err(ScalarError::NotAMonomial(self.to_string())),
        }
    }

    fn insert_term(&mut self, m: i64, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }
}

macro_rules! laurent_binop {
    ($trait:ident, $method:ident, |$a:ident, $b:ident| $body:expr) => {
        impl $trait<&LaurentScalar> for &LaurentScalar {
            type Output = LaurentScalar;
            fn $method(self, rhs: &LaurentScalar) -> LaurentScalar {
                let $a = self;
                let $b = rhs;
                $body
            }
        }
        impl $trait for LaurentScalar {
            type Output = LaurentScalar;
            fn $method(self, rhs: LaurentScalar) -> LaurentScalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&LaurentScalar> for LaurentScalar {
            type Output = LaurentScalar;
            fn $method(self, rhs: &LaurentScalar) -> LaurentScalar {
                (&self).$method(rhs)
            }
        }
    };
}

laurent_binop!(Add, add, |a, b| {
    let mut out = a.clone();
    for (m, c) in &b.terms {
        out.insert_term(*m, c.clone());
    }
    out
});

laurent_binop!(Sub, sub, |a, b| {
    let mut out = a.clone();
    for (m, c) in &b.terms {
        out.insert_term(*m, -c);
    }
    out
});

laurent_binop!(Mul, mul, |a, b| {
    let mut out = LaurentScalar::zero();
    for (m1, c1) in &a.terms {
        for (m2, c2) in &b.terms {
            out.insert_term(m1 + m2, c1 * c2);
        }
    }
    out
});

impl Neg for &LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        let terms = self.terms.iter().map(|(m, c)| (*m, -c)).collect();
        LaurentScalar { terms }
    }
}

impl Neg for LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        -&self
    }
}

impl AddAssign<&LaurentScalar> for LaurentScalar {
    fn add_assign(&mut self, rhs: &LaurentScalar) {
        for (m, c) in &rhs.terms {
            self.insert_term(*m, c.clone());
        }
    }
}

impl fmt::Display for LaurentScalar {
    /// Canonical text: `"+"`-joined monomials in ascending exponent order,
    /// coefficients parenthesized: `(1)*q^-1 + (2) + (1)*q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| match m {
                0 => format!("({c})"),
                1 => format!("({c})*q"),
                _ => format!("({c})*q^{m}"),
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

impl FromStr for LaurentScalar {
    type Err = ScalarError;

    /// Parses `"+"`/`"-"`-joined monomial terms. Coefficients may be
    /// parenthesized (`(1+2*i)*q^3`) or bare when unambiguous (`2*q`, `q^-1`,
    /// `i`); the `*` between coefficient and `q` is optional; whitespace is
    /// ignored everywhere.
    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let kind = "LaurentScalar";
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(parse_error(kind, input, "empty input"));
        }
        // Split into signed terms at top-level +/- (outside parens, not
        // directly after '^' so exponents keep their signs).
        let mut chunks: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        let mut depth: i32 = 0;
        let mut prev: Option<char> = None;
        for ch in compact.chars() {
            match ch {
                '(' => {
                    depth += 1;
                    current.push(ch);
                }
                ')' => {
                    depth -= 1;
                    if depth < 0 {
                        return Err(parse_error(kind, input, "unbalanced `)`"));
                    }
                    current.push(ch);
                }
                '+' | '-' if depth == 0 && prev != Some('^') => {
                    if current.is_empty() {
                        if prev.is_some() {
                            return Err(parse_error(kind, input, "consecutive signs"));
                        }
                        negative = ch == '-';
                    } else {
                        chunks.push((negative, std::mem::take(&mut current)));
                        negative = ch == '-';
                    }
                }
                _ => current.push(ch),
            }
            prev = Some(ch);
        }
        if depth != 0 {
            return Err(parse_error(kind, input, "unbalanced `(`"));
        }
        if current.is_empty() {
            return Err(parse_error(kind, input, "dangling sign"));
        }
        chunks.push((negative, current));

        let mut out = Self::zero();
        for (negative, chunk) in chunks {
            let (coef, m) = parse_term(&chunk, input)?;
            let coef = if negative { -coef } else { coef };
            out.insert_term(m, coef);
        }
        Ok(out)
    }
}

/// Parses one sign-free term into (coefficient, exponent).
fn parse_term(term: &str, input: &str) -> Result<(GaussianRational, i64), ScalarError> {
    let kind = "LaurentScalar";
    let (coef_text, q_text, parenthesized) = if let Some(rest) = term.strip_prefix('(') {
        let close = rest
            .find(')')
            .ok_or_else(|| parse_error(kind, input, "unbalanced `(`"))?;
        (&rest[..close], &rest[close + 1..], true)
    } else {
        match term.find('q') {
            Some(pos) => (&term[..pos], &term[pos..], false),
            None => (term, "", false),
        }
    };

    let m = match q_text.strip_prefix('*').unwrap_or(q_text) {
        "" => 0,
        "q" => 1,
        t => {
            let expo = t
                .strip_prefix("q^")
                .ok_or_else(|| parse_error(kind, input, format!("bad monomial `{term}`")))?;
            expo.parse::<i64>()
                .map_err(|_| parse_error(kind, input, format!("bad exponent `{expo}`")))?
        }
    };

    let coef_text = coef_text.strip_suffix('*').unwrap_or(coef_text);
    let coef = if coef_text.is_empty() {
        if parenthesized {
            return Err(parse_error(kind, input, "empty coefficient"));
        }
        // Bare `q`/`q^m` term; the splitter guarantees the chunk is nonempty,
        // so an empty coefficient without parens can only be that case.
        GaussianRational::one()
    } else {
        coef_text.parse()?
    };
    Ok((coef, m))
}

impl Serialize for LaurentScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LaurentScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
