//! Exact coefficient fields: the rationals and the cyclotomic field ℚ(ζ),
//! ζ² + ζ + 1 = 0.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Coefficient field used by polynomials, operators and series.
///
/// Arithmetic goes through `&self` methods so hot loops can avoid clones.
pub trait Scalar:
    Clone + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn from_rational(q: Rational) -> Self;
    /// ζ, when the field contains a primitive third root of unity.
    fn zeta() -> Option<Self>;

    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn inv(&self) -> Result<Self>;

    /// Rational value, if the element lies in ℚ.
    fn to_rational(&self) -> Option<Rational>;
    fn parse_scalar(s: &str) -> Result<Self>;
    fn latex(&self) -> String;

    fn add_assign_ref(&mut self, other: &Self) {
        *self = self.add_ref(other);
    }

    /// True when the printed form needs no parentheses before a leading sign.
    fn is_negative_rational(&self) -> bool {
        self.to_rational().map(|q| q.is_negative()).unwrap_or(false)
    }
}

/// Arbitrary-precision rational number in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num.into(), den.into())))
    }

    pub fn from_bigs(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    pub fn integer(n: i64) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.0.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::parse(0, format!("invalid rational `{s}`"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                Rational::from_bigs(n, d)
            }
            None => {
                let n: BigInt = s.parse().map_err(|_| bad())?;
                Ok(Rational(BigRational::from_integer(n)))
            }
        }
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        Rational(self.0 - rhs.0)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational(self.0 * rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn from_int(n: i64) -> Self {
        Rational::integer(n)
    }
    fn from_rational(q: Rational) -> Self {
        q
    }
    fn zeta() -> Option<Self> {
        None
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn is_one(&self) -> bool {
        self.0.is_one()
    }
    fn add_ref(&self, other: &Self) -> Self {
        Rational(&self.0 + &other.0)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        Rational(&self.0 - &other.0)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        Rational(&self.0 * &other.0)
    }
    fn neg_ref(&self) -> Self {
        Rational(-&self.0)
    }
    fn inv(&self) -> Result<Self> {
        if self.0.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(Rational(self.0.recip()))
        }
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn parse_scalar(s: &str) -> Result<Self> {
        s.parse()
    }
    fn latex(&self) -> String {
        if self.0.is_integer() {
            self.0.numer().to_string()
        } else if self.0.is_negative() {
            format!("-\\frac{{{}}}{{{}}}", -self.0.numer(), self.0.denom())
        } else {
            format!("\\frac{{{}}}{{{}}}", self.0.numer(), self.0.denom())
        }
    }
    fn add_assign_ref(&mut self, other: &Self) {
        self.0 += &other.0;
    }
}

/// Element a + b·ζ of ℚ(ζ), kept reduced with ζ² = −1 − ζ.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycScalar {
    pub a: Rational,
    pub b: Rational,
}

impl CycScalar {
    pub fn new(a: Rational, b: Rational) -> Self {
        CycScalar { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        CycScalar { a: Rational::integer(a), b: Rational::integer(b) }
    }

    /// Field norm a² − ab + b², the product with the Galois conjugate.
    pub fn norm(&self) -> Rational {
        self.a.mul_ref(&self.a).sub_ref(&self.a.mul_ref(&self.b)).add_ref(&self.b.mul_ref(&self.b))
    }

    /// Galois conjugate a + b·ζ² = (a − b) − b·ζ.
    pub fn conj(&self) -> Self {
        CycScalar { a: self.a.sub_ref(&self.b), b: self.b.neg_ref() }
    }
}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let zpart = if self.b.is_one() {
            "z".to_string()
        } else if self.b == Rational::integer(-1) {
            "-z".to_string()
        } else {
            format!("{}z", self.b)
        };
        if self.a.is_zero() {
            write!(f, "({zpart})")
        } else if zpart.starts_with('-') {
            write!(f, "({}{zpart})", self.a)
        } else {
            write!(f, "({}+{zpart})", self.a)
        }
    }
}

impl FromStr for CycScalar {
    type Err = Error;

    /// Accepts `3/2`, `(1+2z)`, `(-z)`, `(1/2-3/2z)`, `z`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(t).trim();
        if !inner.contains('z') {
            return Ok(CycScalar::from_rational(inner.parse()?));
        }
        let bad = || Error::parse(0, format!("invalid cyclotomic scalar `{s}`"));
        let body = inner.strip_suffix('z').ok_or_else(bad)?;
        // split before the sign that starts the z coefficient (not a leading sign)
        let split = body
            .char_indices()
            .rev()
            .find(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i);
        let (a_str, b_str) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let b = match b_str.trim() {
            "" | "+" => Rational::integer(1),
            "-" => Rational::integer(-1),
            other => other.trim_start_matches('+').parse().map_err(|_| bad())?,
        };
        let a: Rational = a_str.parse().map_err(|_| bad())?;
        Ok(CycScalar { a, b })
    }
}

impl Add for CycScalar {
    type Output = CycScalar;
    fn add(self, rhs: CycScalar) -> CycScalar {
        self.add_ref(&rhs)
    }
}

impl Sub for CycScalar {
    type Output = CycScalar;
    fn sub(self, rhs: CycScalar) -> CycScalar {
        self.sub_ref(&rhs)
    }
}

impl Mul for CycScalar {
    type Output = CycScalar;
    fn mul(self, rhs: CycScalar) -> CycScalar {
        self.mul_ref(&rhs)
    }
}

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        self.neg_ref()
    }
}

impl Scalar for CycScalar {
    fn zero() -> Self {
        CycScalar::from_ints(0, 0)
    }
    fn one() -> Self {
        CycScalar::from_ints(1, 0)
    }
    fn from_int(n: i64) -> Self {
        CycScalar::from_ints(n, 0)
    }
    fn from_rational(q: Rational) -> Self {
        CycScalar { a: q, b: Rational::zero() }
    }
    fn zeta() -> Option<Self> {
        Some(CycScalar::from_ints(0, 1))
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }
    fn add_ref(&self, o: &Self) -> Self {
        CycScalar { a: self.a.add_ref(&o.a), b: self.b.add_ref(&o.b) }
    }
    fn sub_ref(&self, o: &Self) -> Self {
        CycScalar { a: self.a.sub_ref(&o.a), b: self.b.sub_ref(&o.b) }
    }
    fn mul_ref(&self, o: &Self) -> Self {
        // (a₁ + b₁ζ)(a₂ + b₂ζ) with ζ² = −1 − ζ
        let bb = self.b.mul_ref(&o.b);
        CycScalar {
            a: self.a.mul_ref(&o.a).sub_ref(&bb),
            b: self.a.mul_ref(&o.b).add_ref(&o.a.mul_ref(&self.b)).sub_ref(&bb),
        }
    }
    fn neg_ref(&self) -> Self {
        CycScalar { a: self.a.neg_ref(), b: self.b.neg_ref() }
    }
    fn inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let ninv = n.inv()?;
        let c = self.conj();
        Ok(CycScalar { a: c.a.mul_ref(&ninv), b: c.b.mul_ref(&ninv) })
    }
    fn to_rational(&self) -> Option<Rational> {
        self.b.is_zero().then(|| self.a.clone())
    }
    fn parse_scalar(s: &str) -> Result<Self> {
        s.parse()
    }
    fn latex(&self) -> String {
        if self.b.is_zero() {
            return self.a.latex();
        }
        let zpart = if self.b.is_one() {
            "\\zeta".to_string()
        } else if self.b == Rational::integer(-1) {
            "-\\zeta".to_string()
        } else {
            format!("{}\\zeta", self.b.latex())
        };
        if self.a.is_zero() {
            format!("({zpart})")
        } else if zpart.starts_with('-') {
            format!("({}{zpart})", self.a.latex())
        } else {
            format!("({}+{zpart})", self.a.latex())
        }
    }
    fn add_assign_ref(&mut self, o: &Self) {
        self.a.add_assign_ref(&o.a);
        self.b.add_assign_ref(&o.b);
    }
}

/// Multiplication in ℚ(ζ).
pub fn cyc_mul(x: &CycScalar, y: &CycScalar) -> CycScalar {
    x.mul_ref(y)
}

/// Inverse in ℚ(ζ); zero is rejected with [`Error::DivisionByZero`].
pub fn cyc_inv(x: &CycScalar) -> Result<CycScalar> {
    x.inv()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(a: i64, b: i64) -> CycScalar {
        CycScalar::from_ints(a, b)
    }

    #[test]
    fn zeta_squared() {
        assert_eq!(cyc_mul(&c(0, 1), &c(0, 1)), c(-1, -1));
    }

    #[test]
    fn one_plus_two_zeta_squared() {
        // 1 + 2ζ = i√3 for ζ = e^{2πi/3}, whose square is −3
        assert_eq!(cyc_mul(&c(1, 2), &c(1, 2)), c(-3, 0));
        let re = 1.0 + 2.0 * (-0.5);
        let im = 2.0 * (3f64.sqrt() / 2.0);
        assert!((re * re - im * im + 3.0).abs() < 1e-12 && (2.0 * re * im).abs() < 1e-12);
    }

    #[test]
    fn identity_and_inverses() {
        let x = c(3, -7);
        assert_eq!(cyc_mul(&c(1, 0), &x), x);
        assert_eq!(cyc_inv(&c(1, 1)).unwrap(), c(0, -1));
        assert_eq!(cyc_inv(&c(1, 0)).unwrap(), c(1, 0));
        assert_eq!(cyc_inv(&c(0, 0)), Err(Error::DivisionByZero));
        assert_eq!(Rational::integer(0).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn text_round_trip() {
        for s in ["3/2", "-5", "(1+2z)", "(z)", "(-z)", "(1/2-3/2z)", "(-1-z)", "(2z)"] {
            let x: CycScalar = s.parse().unwrap();
            assert_eq!(x.to_string(), s, "{s}");
        }
        let q: Rational = "6/4".parse().unwrap();
        assert_eq!(q.to_string(), "3/2");
        assert_eq!("-0/5".parse::<Rational>().unwrap(), Rational::zero());
        assert!("1/0".parse::<Rational>().is_err());
        assert_eq!("z".parse::<CycScalar>().unwrap(), c(0, 1));
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-20i64..20, 1i64..6).prop_map(|(n, d)| Rational::new(n, d).unwrap())
    }

    fn cyc() -> impl Strategy<Value = CycScalar> {
        (small_rational(), small_rational()).prop_map(|(a, b)| CycScalar::new(a, b))
    }

    proptest! {
        #[test]
        fn field_axioms(x in cyc(), y in cyc(), z in cyc()) {
            prop_assert_eq!(x.mul_ref(&y).mul_ref(&z), x.mul_ref(&y.mul_ref(&z)));
            prop_assert_eq!(x.mul_ref(&y.add_ref(&z)), x.mul_ref(&y).add_ref(&x.mul_ref(&z)));
            prop_assert_eq!(x.mul_ref(&y), y.mul_ref(&x));
            if !x.is_zero() {
                prop_assert!(x.mul_ref(&x.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn norm_vanishes_only_at_zero(x in cyc()) {
            prop_assert_eq!(x.norm().is_zero(), x.is_zero());
            prop_assert!(!x.norm().is_negative());
        }

        #[test]
        fn printed_form_parses_back(x in cyc()) {
            prop_assert_eq!(x.to_string().parse::<CycScalar>().unwrap(), x);
        }
    }
}
