//! The field ℚ(i) = {a + b·i : a, b ∈ ℚ} with exact arbitrary-precision
//! rational parts.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{parse_error, ScalarError};

/// An element a + b·i of ℚ(i), stored as two reduced rationals.
///
/// Denominators are kept positive and in lowest terms by the underlying
/// [`BigRational`]; equality is therefore structural. The text form follows
/// the grammar `a/b+c/d*i` with zero parts omitted (`"0"`, `"3/2"`, `"-i"`,
/// `"3/2-1/3*i"`), and serializing then parsing round-trips bit-exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    /// Builds a + b·i from rational parts.
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    /// The zero element.
    pub fn zero() -> Self {
        Self::default()
    }

    /// The unit 1.
    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The imaginary unit i.
    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    /// The integer n as an element of ℚ(i).
    pub fn from_int(n: i64) -> Self {
        Self::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    /// The rational num/den. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    /// The purely imaginary rational (num/den)·i. Panics if `den == 0`.
    pub fn imag_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::new(
            BigRational::zero(),
            BigRational::new(BigInt::from(num), BigInt::from(den)),
        )
    }

    /// Real part.
    pub fn re(&self) -> &BigRational {
        &self.re
    }

    /// Imaginary part.
    pub fn im(&self) -> &BigRational {
        &self.im
    }

    /// Complex conjugate a − b·i.
    #[must_use]
    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// |z|² = a² + b², a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// True iff z = 0.
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// True iff the imaginary part vanishes.
    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Multiplicative inverse, or an error for z = 0.
    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let n = self.norm_sqr();
        Ok(Self::new(&self.re / &n, -&self.im / &n))
    }

    /// Exact division, or an error when `rhs = 0`.
    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        Ok(self * &rhs.inv()?)
    }

    /// Twice the real part of `self * rhs.conj()`, useful for hermitian
    /// pairings; kept here so callers avoid rebuilding conjugates.
    pub fn re_of_product_with_conj(&self, rhs: &Self) -> BigRational {
        &self.re * &rhs.re + &self.im * &rhs.im
    }
}

fn rational_from_str(s: &str, input: &str) -> Result<BigRational, ScalarError> {
    let kind = "GaussianRational";
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .parse()
            .map_err(|_| parse_error(kind, input, format!("bad numerator `{num}`")))?;
        let d: BigInt = den
            .parse()
            .map_err(|_| parse_error(kind, input, format!("bad denominator `{den}`")))?;
        if d.is_zero() {
            return Err(parse_error(kind, input, "zero denominator"));
        }
        Ok(BigRational::new(n, d))
    } else {
        let n: BigInt = s
            .parse()
            .map_err(|_| parse_error(kind, input, format!("bad integer `{s}`")))?;
        Ok(BigRational::from_integer(n))
    }
}

impl FromStr for GaussianRational {
    type Err = ScalarError;

    /// Parses the grammar `a/b+c/d*i` with omitted zero parts. Whitespace is
    /// ignored everywhere; the `*` before `i` is optional; `i` and `-i` are
    /// accepted without a coefficient.
    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let kind = "GaussianRational";
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(parse_error(kind, input, "empty input"));
        }
        // Split into signed terms at top-level +/-.
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut sign_negative = false;
        let mut seen_any = false;
        for (idx, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && idx > 0 && seen_any && !current.is_empty() {
                terms.push((sign_negative, std::mem::take(&mut current)));
                sign_negative = ch == '-';
            } else if (ch == '+' || ch == '-') && current.is_empty() {
                if seen_any && idx > 0 {
                    return Err(parse_error(kind, input, "consecutive signs"));
                }
                sign_negative = ch == '-';
                seen_any = true;
            } else {
                current.push(ch);
                seen_any = true;
            }
        }
        if current.is_empty() {
            return Err(parse_error(kind, input, "dangling sign"));
        }
        terms.push((sign_negative, current));

        let mut result = Self::zero();
        for (negative, term) in terms {
            let value = if let Some(body) = term.strip_suffix('i') {
                let coef = if body.is_empty() {
                    BigRational::one()
                } else if let Some(stripped) = body.strip_suffix('*') {
                    if stripped.is_empty() {
                        return Err(parse_error(kind, input, "missing coefficient before `*i`"));
                    }
                    rational_from_str(stripped, input)?
                } else {
                    rational_from_str(body, input)?
                };
                Self::new(BigRational::zero(), coef)
            } else {
                Self::new(rational_from_str(&term, input)?, BigRational::zero())
            };
            result = if negative { result - value } else { result + value };
        }
        Ok(result)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut wrote_re = false;
        if !self.re.is_zero() {
            write!(f, "{}", self.re)?;
            wrote_re = true;
        }
        if !self.im.is_zero() {
            let mag = self.im.abs();
            let sign = if self.im.is_negative() {
                "-"
            } else if wrote_re {
                "+"
            } else {
                ""
            };
            if mag.is_one() {
                write!(f, "{sign}i")?;
            } else {
                write!(f, "{sign}{mag}*i")?;
            }
        }
        Ok(())
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, |$a:ident, $b:ident| $body:expr) => {
        impl $trait for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &GaussianRational) -> GaussianRational {
                (&self).$method(rhs)
            }
        }
        impl $trait<GaussianRational> for &GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                self.$method(&rhs)
            }
        }
        impl $trait<&GaussianRational> for &GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &GaussianRational) -> GaussianRational {
                let $a = self;
                let $b = rhs;
                $body
            }
        }
    };
}

forward_binop!(Add, add, |a, b| GaussianRational::new(&a.re + &b.re, &a.im + &b.im));
forward_binop!(Sub, sub, |a, b| GaussianRational::new(&a.re - &b.re, &a.im - &b.im));
forward_binop!(Mul, mul, |a, b| GaussianRational::new(
    &a.re * &b.re - &a.im * &b.im,
    &a.re * &b.im + &a.im * &b.re
));

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

/// Panics on a zero divisor; use [`GaussianRational::checked_div`] to get an
/// error instead.
impl Div for GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: GaussianRational) -> GaussianRational {
        self.checked_div(&rhs).expect("division by zero in Q(i)")
    }
}

impl Div<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: &GaussianRational) -> GaussianRational {
        self.checked_div(rhs).expect("division by zero in Q(i)")
    }
}

impl AddAssign for GaussianRational {
    fn add_assign(&mut self, rhs: GaussianRational) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = (&*self) * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    #[test]
    fn product_of_gaussian_integers() {
        // (1 + 2i)(3 − i) = 5 + 5i
        assert_eq!(g("1+2*i") * g("3-i"), g("5+5*i"));
    }

    #[test]
    fn conjugate_prints_canonically() {
        let z = g("3/2+1/3*i");
        assert_eq!(z.conj().to_string(), "3/2-1/3*i");
    }

    #[test]
    fn inverse_of_two_minus_i() {
        // 1/(2 − i) = 2/5 + 1/5·i
        assert_eq!(g("2-i").inv().unwrap(), g("2/5+1/5*i"));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            g("1").checked_div(&GaussianRational::zero()),
            Err(ScalarError::DivisionByZero)
        );
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "0",
            "1",
            "-1",
            "i",
            "-i",
            "3/2",
            "-7/3",
            "2*i",
            "-5/4*i",
            "3/2-1/3*i",
            "-1+i",
        ] {
            let z = g(text);
            assert_eq!(z.to_string(), text);
            assert_eq!(g(&z.to_string()), z);
        }
    }

    #[test]
    fn parse_is_whitespace_insensitive() {
        assert_eq!(g(" 3/2 - 1/3 * i "), g("3/2-1/3*i"));
        assert_eq!(g("+ 2 + 1 i"), g("2+i"));
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in ["", "q", "1//2", "1/0", "2+*i", "--3", "+"] {
            assert!(bad.parse::<GaussianRational>().is_err(), "accepted `{bad}`");
        }
    }

    #[test]
    fn norm_and_conjugate_agree() {
        let z = g("3/2-5*i");
        let viaconj = &z * &z.conj();
        assert!(viaconj.is_real());
        assert_eq!(viaconj.re(), &z.norm_sqr());
    }
}
