use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// The ground field: either the rationals or a prime field of odd order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

pub(crate) fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    /// Prime field of order `q`. Characteristic 2 is rejected.
    pub fn prime(q: u64) -> Result<Self> {
        if q == 2 {
            return Err(Error::InvalidField {
                spec: format!("F:{q}"),
                reason: "characteristic 2 is not supported".into(),
            });
        }
        if !is_prime(q) {
            return Err(Error::InvalidField {
                spec: format!("F:{q}"),
                reason: format!("{q} is not prime"),
            });
        }
        Ok(FieldSpec::Prime(q))
    }

    /// 0 for the rationals.
    pub fn characteristic(self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(q) => q,
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_int(0)
    }

    pub fn one(self) -> Scalar {
        self.from_int(1)
    }

    pub fn from_int(self, k: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(k))),
            FieldSpec::Prime(q) => Scalar::Residue {
                value: (k as i128).rem_euclid(q as i128) as u64,
                modulus: q,
            },
        }
    }

    /// The fraction `num/den`; panics if `den` vanishes in the field.
    pub fn ratio(self, num: i64, den: i64) -> Scalar {
        let d = self.from_int(den);
        self.from_int(num) * d.inv().expect("denominator vanishes in field")
    }

    /// All elements of a prime field in residue order; `None` for the rationals.
    pub fn elements(self) -> Option<impl Iterator<Item = Scalar>> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::Prime(q) => Some((0..q).map(move |value| Scalar::Residue { value, modulus: q })),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(q) => write!(f, "F:{q}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        let q = s
            .strip_prefix("F:")
            .and_then(|rest| rest.parse::<u64>().ok())
            .ok_or_else(|| Error::InvalidField {
                spec: s.to_string(),
                reason: "expected `Q` or `F:<q>`".into(),
            })?;
        FieldSpec::prime(q)
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// An exact field element in canonical form.
///
/// Rationals are reduced with a positive denominator; residues lie in `[0, q)`.
/// Mixing elements of different fields in one operation is a programming error
/// and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

fn mod_inverse(value: u64, modulus: u64) -> Option<u64> {
    let egcd = (value as i128).extended_gcd(&(modulus as i128));
    (egcd.gcd == 1).then(|| egcd.x.rem_euclid(modulus as i128) as u64)
}

fn bigint_residue(x: &BigInt, q: u64) -> u64 {
    x.mod_floor(&BigInt::from(q)).to_u64().expect("residue fits in u64")
}

impl Scalar {
    /// Parses `[+-]int[/int]` into `field`.
    pub fn parse(text: &str, field: FieldSpec) -> Result<Scalar> {
        let malformed = || Error::MalformedScalar(text.to_string());
        let t = text.trim();
        let (num_txt, den_txt) = match t.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (t, None),
        };
        let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
        let unsigned = num_txt.strip_prefix(['-', '+']).unwrap_or(num_txt);
        if !digits(unsigned) {
            return Err(malformed());
        }
        let num: BigInt = num_txt.parse().map_err(|_| malformed())?;
        let den: BigInt = match den_txt {
            Some(d) if digits(d) => d.parse().map_err(|_| malformed())?,
            Some(_) => return Err(malformed()),
            None => BigInt::one(),
        };
        let zero_den = || Error::ZeroDenominator { text: text.to_string(), field };
        match field {
            FieldSpec::Rationals => {
                if den.is_zero() {
                    return Err(zero_den());
                }
                Ok(Scalar::Rational(BigRational::new(num, den)))
            }
            FieldSpec::Prime(q) => {
                let d = bigint_residue(&den, q);
                let inv = mod_inverse(d, q).ok_or_else(zero_den)?;
                let n = bigint_residue(&num, q);
                Ok(Scalar::Residue { value: ((n as u128 * inv as u128) % q as u128) as u64, modulus: q })
            }
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rationals,
            Scalar::Residue { modulus, .. } => FieldSpec::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(r) => (!r.is_zero()).then(|| Scalar::Rational(r.recip())),
            Scalar::Residue { value, modulus } => {
                mod_inverse(*value, *modulus).map(|value| Scalar::Residue { value, modulus: *modulus })
            }
        }
    }

    pub fn pow(&self, mut exp: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Integer value when the scalar is a rational integer; residues report their
    /// canonical representative.
    pub fn to_integer(&self) -> Option<i64> {
        match self {
            Scalar::Rational(r) => r.is_integer().then(|| r.to_integer().to_i64()).flatten(),
            Scalar::Residue { value, .. } => i64::try_from(*value).ok(),
        }
    }

    fn check_same_field(&self, other: &Scalar) {
        if self.field() != other.field() {
            panic!("scalar field mismatch: {} vs {}", self.field(), other.field());
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, modulus }, Scalar::Residue { value: b, .. }) => {
                self.check_same_field(rhs);
                Scalar::Residue { value: ((*a as u128 + *b as u128) % *modulus as u128) as u64, modulus: *modulus }
            }
            _ => {
                self.check_same_field(rhs);
                unreachable!()
            }
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Residue { value: a, modulus }, Scalar::Residue { value: b, .. }) => {
                self.check_same_field(rhs);
                Scalar::Residue { value: ((*a as u128 + *modulus as u128 - *b as u128) % *modulus as u128) as u64, modulus: *modulus }
            }
            _ => {
                self.check_same_field(rhs);
                unreachable!()
            }
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, modulus }, Scalar::Residue { value: b, .. }) => {
                self.check_same_field(rhs);
                Scalar::Residue { value: ((*a as u128 * *b as u128) % *modulus as u128) as u64, modulus: *modulus }
            }
            _ => {
                self.check_same_field(rhs);
                unreachable!()
            }
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv().expect("division by zero scalar")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, modulus } => Scalar::Residue { value: (modulus - value) % modulus, modulus: *modulus },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { self.$m(&rhs) }
        }
    )*};
}

forward_owned!(Add::add, Sub::sub, Mul::mul, Div::div);

impl Scalar {
    /// Sign of a rational (for deterministic reporting); residues are never negative.
    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_negative())
    }
}

/// True iff `1, eta(p-2)+1, 1-eta, eta-1` are pairwise distinct.
pub fn good_characteristic(p: u64, eta: &Scalar) -> bool {
    let field = eta.field();
    let one = field.one();
    let (lambda1, lambda2) = lambda_params(p, eta);
    let values = [one, lambda1, lambda2.clone(), -lambda2];
    values.iter().enumerate().all(|(i, x)| values[i + 1..].iter().all(|y| x != y))
}

/// `(eta(p-2)+1, 1-eta)`.
pub fn lambda_params(p: u64, eta: &Scalar) -> (Scalar, Scalar) {
    let field = eta.field();
    let one = field.one();
    let lambda1 = eta * &field.from_int(p as i64 - 2) + &one;
    let lambda2 = &one - eta;
    (lambda1, lambda2)
}

/// All `d` with `d^k = -1`. Over the rationals only `±1` can qualify.
pub fn roots_of_minus_one(field: FieldSpec, k: u64) -> Vec<Scalar> {
    let minus_one = -field.one();
    match field.elements() {
        Some(all) => all.filter(|d| d.pow(k) == minus_one).collect(),
        None => [minus_one.clone(), field.one()]
            .into_iter()
            .filter(|d| d.pow(k) == minus_one)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Scalar {
        Scalar::parse(s, FieldSpec::Rationals).unwrap()
    }

    #[test]
    fn parse_rational_canonical() {
        assert_eq!(q("-1/3").to_string(), "-1/3");
        assert_eq!(q("4/6").to_string(), "2/3");
        assert_eq!(q("-4/6").to_string(), "-2/3");
        assert_eq!(q("6/4"), q("3/2"));
        assert_eq!(q("+5").to_string(), "5");
        assert_eq!(q("0/7").to_string(), "0");
    }

    #[test]
    fn parse_prime_field_uses_inverse() {
        let f13 = FieldSpec::prime(13).unwrap();
        assert_eq!(Scalar::parse("-1/3", f13).unwrap(), Scalar::Residue { value: 4, modulus: 13 });
        assert!(matches!(Scalar::parse("1/13", f13), Err(Error::ZeroDenominator { .. })));
        assert!(matches!(Scalar::parse("1/26", f13), Err(Error::ZeroDenominator { .. })));
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in ["", "1/", "/3", "a", "1/2/3", "1.5", "--1", "1/-2", " - 1"] {
            assert!(Scalar::parse(bad, FieldSpec::Rationals).is_err(), "{bad}");
        }
        assert!(matches!(Scalar::parse("1/0", FieldSpec::Rationals), Err(Error::ZeroDenominator { .. })));
    }

    #[test]
    fn field_spec_strings() {
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!("F:13".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(13));
        assert!("F:2".parse::<FieldSpec>().is_err());
        assert!("F:15".parse::<FieldSpec>().is_err());
        assert!("R".parse::<FieldSpec>().is_err());
        assert_eq!(FieldSpec::Prime(13).to_string(), "F:13");
    }

    #[test]
    fn good_characteristic_examples() {
        assert!(good_characteristic(5, &q("-1/3")));
        assert!(!good_characteristic(5, &q("0")));
        assert!(!good_characteristic(5, &q("2")));
        assert!(good_characteristic(5, &q("1/2")));
        // In F_5: eta = -1/3 = 3 gives 1, 0, 3, 2; eta = 4 gives lambda1 = 3 = -lambda2.
        let f5 = FieldSpec::prime(5).unwrap();
        assert!(good_characteristic(5, &Scalar::parse("-1/3", f5).unwrap()));
        assert!(!good_characteristic(5, &Scalar::parse("4", f5).unwrap()));
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_params(5, &q("-1/3")), (q("0"), q("4/3")));
        assert_eq!(lambda_params(7, &q("-1/5")), (q("0"), q("6/5")));
        assert_eq!(lambda_params(3, &q("-1")), (q("0"), q("2")));
    }

    #[test]
    fn roots_of_minus_one_examples() {
        assert!(roots_of_minus_one(FieldSpec::Rationals, 2).is_empty());
        assert_eq!(roots_of_minus_one(FieldSpec::Rationals, 1), vec![q("-1")]);
        assert_eq!(roots_of_minus_one(FieldSpec::Rationals, 3), vec![q("-1")]);
        let f13 = FieldSpec::Prime(13);
        let roots: Vec<String> = roots_of_minus_one(f13, 2).iter().map(|d| d.to_string()).collect();
        assert_eq!(roots, ["5", "8"]);
    }

    #[test]
    fn residue_arithmetic() {
        let f = FieldSpec::Prime(13);
        let a = f.from_int(9);
        let b = f.from_int(7);
        assert_eq!(&a + &b, f.from_int(3));
        assert_eq!(&a - &b, f.from_int(2));
        assert_eq!(&b - &a, f.from_int(11));
        assert_eq!(&a * &b, f.from_int(11));
        assert_eq!(&(&a / &b) * &b, a);
        assert_eq!(-f.from_int(0), f.from_int(0));
        assert!(f.zero().inv().is_none());
    }

    #[test]
    #[should_panic(expected = "field mismatch")]
    fn mixing_fields_panics() {
        let _ = &FieldSpec::Prime(13).one() + &FieldSpec::Prime(7).one();
    }
}
