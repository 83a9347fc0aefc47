//! Exact coefficient fields: the rationals `Q` and small prime fields `F_p`.
//!
//! Coefficient arithmetic is generic over the [`Field`] trait, which extends the
//! `num-traits` ring vocabulary with inversion, sampling and the hooks needed by
//! the polynomial printer and tokenizer. Two families implement it:
//!
//! * [`Rational`] (`num_rational::BigRational`): arbitrary precision, always in
//!   lowest terms with a positive denominator.
//! * [`Fp<P>`]: residues in `[0, P)` stored in a machine word.
//!
//! A runtime [`FieldSpec`] names one of these domains and is used to pick the
//! concrete type (see [`with_field!`](crate::with_field)).

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Arbitrary-precision rationals.
pub type Rational = BigRational;

/// Prime moduli that have a compiled [`Fp`] instantiation.
pub const SUPPORTED_PRIMES: [u32; 11] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime modulus {0} is not compiled in (supported: 2..=31)")]
    UnsupportedModulus(u64),
    #[error("field mismatch: expected {expected}, found {found}")]
    DomainMismatch { expected: FieldSpec, found: FieldSpec },
    #[error("unknown field `{0}` (expected q, f<p> or gf(<p>))")]
    UnknownField(String),
    #[error("empty coefficient range")]
    EmptyRange,
}

/// Which coefficient domain a ring is built over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rationals,
    PrimeField,
}

/// Runtime description of a coefficient field.
///
/// Constructed only through [`FieldSpec::rationals`] and [`FieldSpec::prime`],
/// so a prime-field spec always carries a validated prime modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    kind: FieldKind,
    modulus: u32,
}

impl FieldSpec {
    pub const fn rationals() -> Self {
        Self {
            kind: FieldKind::Rationals,
            modulus: 0,
        }
    }

    /// Validates `p` by trial division.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if !SUPPORTED_PRIMES.iter().any(|&q| q as u64 == p) {
            return Err(FieldError::UnsupportedModulus(p));
        }
        Ok(Self {
            kind: FieldKind::PrimeField,
            modulus: p as u32,
        })
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn modulus(&self) -> Option<u32> {
        match self.kind {
            FieldKind::Rationals => None,
            FieldKind::PrimeField => Some(self.modulus),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.kind == FieldKind::PrimeField
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FieldKind::Rationals => f.write_str("QQ"),
            FieldKind::PrimeField => write!(f, "F{}", self.modulus),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "q" | "qq" | "rationals" => return Ok(Self::rationals()),
            _ => {}
        }
        let digits = lower
            .strip_prefix("gf(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| lower.strip_prefix("gf"))
            .or_else(|| lower.strip_prefix('f'))
            .unwrap_or(&lower);
        let p: u64 = digits
            .parse()
            .map_err(|_| FieldError::UnknownField(s.to_string()))?;
        Self::prime(p)
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub const fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Bounds for random coefficients. Over `Q` a sample is `a/b` with
/// `a` in `[-num_bound, num_bound] \ {0}` and `b` in `[1, den_bound]`;
/// prime fields ignore the bounds and draw a uniform nonzero residue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffRange {
    pub num_bound: u64,
    pub den_bound: u64,
}

impl Default for CoeffRange {
    fn default() -> Self {
        Self {
            num_bound: 5,
            den_bound: 5,
        }
    }
}

impl CoeffRange {
    pub fn validate(&self) -> Result<(), FieldError> {
        if self.num_bound == 0 || self.den_bound == 0 {
            return Err(FieldError::EmptyRange);
        }
        Ok(())
    }
}

/// An exact field usable as polynomial coefficients.
pub trait Field:
    Clone
    + Eq
    + Hash
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn spec() -> FieldSpec;

    fn from_i64(v: i64) -> Self;

    /// `num / den` mapped into the field.
    fn from_ratio(num: &BigInt, den: &BigInt) -> Result<Self, FieldError>;

    fn inv(&self) -> Result<Self, FieldError>;

    fn add_ref(&self, rhs: &Self) -> Self {
        self.clone() + rhs.clone()
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self.clone() - rhs.clone()
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self.clone() * rhs.clone()
    }

    fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            base = base.mul_ref(&base);
            exp >>= 1;
        }
        acc
    }

    /// Sign and magnitude as printed in polynomials. Prime fields use the
    /// balanced representative in `(-p/2, p/2]`.
    fn signed_magnitude(&self) -> (bool, String);

    /// Numerator and positive denominator of the canonical representative
    /// (`(residue, 1)` for prime fields).
    fn to_ratio(&self) -> (BigInt, BigInt);

    /// Size of the printed representative (`max(|a|, b)` for `a/b`), saturating.
    fn magnitude(&self) -> u64;

    /// Whether the coefficient fits the `a/b` height bound used to keep `Q`
    /// datasets tokenizable. Always true over prime fields.
    fn within_height(&self, _bound: u64) -> bool {
        true
    }

    fn sample_nonzero<R: Rng + ?Sized>(rng: &mut R, range: &CoeffRange) -> Self;
}

/// Finite fields admit exhaustive enumeration.
pub trait FiniteField: Field + Copy {
    fn order() -> u32;

    fn residue(&self) -> u32;

    fn elements() -> Box<dyn Iterator<Item = Self>>;
}

// ---------------------------------------------------------------------------
// Prime fields
// ---------------------------------------------------------------------------

/// Residue class modulo the prime `P`, canonically in `[0, P)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp<const P: u32>(u32);

impl<const P: u32> Fp<P> {
    const PRIME: () = assert!(is_prime(P as u64), "Fp modulus must be prime");

    pub fn new(v: i64) -> Self {
        #[allow(clippy::let_unit_value)]
        let () = Self::PRIME;
        Self(v.rem_euclid(P as i64) as u32)
    }

    pub fn residue(self) -> u32 {
        self.0
    }

    /// Representative in `(-P/2, P/2]`.
    pub fn balanced(self) -> i64 {
        if self.0 as u64 * 2 > P as u64 {
            self.0 as i64 - P as i64
        } else {
            self.0 as i64
        }
    }
}

impl<const P: u32> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.0, P)
    }
}

impl<const P: u32> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let s = self.0 + rhs.0;
        Self(if s >= P { s - P } else { s })
    }
}

impl<const P: u32> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(if self.0 >= rhs.0 {
            self.0 - rhs.0
        } else {
            self.0 + P - rhs.0
        })
    }
}

impl<const P: u32> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self(((self.0 as u64 * rhs.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Self(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<const P: u32> Zero for Fp<P> {
    fn zero() -> Self {
        Self(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u32> One for Fp<P> {
    fn one() -> Self {
        Self::new(1)
    }
}

impl<const P: u32> Field for Fp<P> {
    fn spec() -> FieldSpec {
        FieldSpec::prime(P as u64).expect("Fp instantiated with an unsupported modulus")
    }

    fn from_i64(v: i64) -> Self {
        Self::new(v)
    }

    fn from_ratio(num: &BigInt, den: &BigInt) -> Result<Self, FieldError> {
        let p = BigInt::from(P);
        let reduce = |x: &BigInt| -> Self {
            let r = ((x % &p) + &p) % &p;
            Self(r.to_u32().expect("residue fits in u32"))
        };
        let d = reduce(den);
        Ok(reduce(num) * d.inv()?)
    }

    fn inv(&self) -> Result<Self, FieldError> {
        if self.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        // Extended Euclid on (a, P).
        let (mut r0, mut r1) = (P as i64, self.0 as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Ok(Self::new(t0))
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        *self + *rhs
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        *self - *rhs
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        *self * *rhs
    }

    fn signed_magnitude(&self) -> (bool, String) {
        let b = self.balanced();
        (b < 0, b.unsigned_abs().to_string())
    }

    fn to_ratio(&self) -> (BigInt, BigInt) {
        (BigInt::from(self.0), BigInt::one())
    }

    fn magnitude(&self) -> u64 {
        self.balanced().unsigned_abs()
    }

    fn sample_nonzero<R: Rng + ?Sized>(rng: &mut R, _range: &CoeffRange) -> Self {
        Self(rng.gen_range(1..P))
    }
}

impl<const P: u32> FiniteField for Fp<P> {
    fn order() -> u32 {
        P
    }

    fn residue(&self) -> u32 {
        self.0
    }

    fn elements() -> Box<dyn Iterator<Item = Self>> {
        Box::new((0..P).map(Self))
    }
}

// ---------------------------------------------------------------------------
// Rationals
// ---------------------------------------------------------------------------

impl Field for BigRational {
    fn spec() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: &BigInt, den: &BigInt) -> Result<Self, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        // `new` normalizes to lowest terms with a positive denominator.
        Ok(BigRational::new(num.clone(), den.clone()))
    }

    fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.recip())
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn signed_magnitude(&self) -> (bool, String) {
        (self.is_negative(), self.abs().to_string())
    }

    fn to_ratio(&self) -> (BigInt, BigInt) {
        (self.numer().clone(), self.denom().clone())
    }

    fn magnitude(&self) -> u64 {
        let n = self.numer().abs().to_u64().unwrap_or(u64::MAX);
        let d = self.denom().to_u64().unwrap_or(u64::MAX);
        n.max(d)
    }

    fn within_height(&self, bound: u64) -> bool {
        let b = BigInt::from(bound);
        self.numer().abs() <= b && self.denom() <= &b
    }

    fn sample_nonzero<R: Rng + ?Sized>(rng: &mut R, range: &CoeffRange) -> Self {
        let n = range.num_bound as i64;
        let mut a = 0i64;
        while a == 0 {
            a = rng.gen_range(-n..=n);
        }
        let b = rng.gen_range(1..=range.den_bound as i64);
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }
}

/// Shorthand for `a/b` over `Q`.
pub fn rat(a: i64, b: i64) -> Rational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// Runs `$body` with `$C` bound to the concrete coefficient type named by a
/// [`FieldSpec`].
#[macro_export]
macro_rules! with_field {
    ($spec:expr, $C:ident => $body:expr) => {{
        let __spec: $crate::FieldSpec = $spec;
        match __spec.modulus() {
            None => {
                type $C = $crate::Rational;
                $body
            }
            Some(2) => {
                type $C = $crate::Fp<2>;
                $body
            }
            Some(3) => {
                type $C = $crate::Fp<3>;
                $body
            }
            Some(5) => {
                type $C = $crate::Fp<5>;
                $body
            }
            Some(7) => {
                type $C = $crate::Fp<7>;
                $body
            }
            Some(11) => {
                type $C = $crate::Fp<11>;
                $body
            }
            Some(13) => {
                type $C = $crate::Fp<13>;
                $body
            }
            Some(17) => {
                type $C = $crate::Fp<17>;
                $body
            }
            Some(19) => {
                type $C = $crate::Fp<19>;
                $body
            }
            Some(23) => {
                type $C = $crate::Fp<23>;
                $body
            }
            Some(29) => {
                type $C = $crate::Fp<29>;
                $body
            }
            Some(31) => {
                type $C = $crate::Fp<31>;
                $body
            }
            Some(p) => unreachable!("FieldSpec admitted unsupported modulus {p}"),
        }
    }};
}

/// Like [`with_field!`] but restricted to prime fields; `$rationals` is
/// evaluated for `Q`.
#[macro_export]
macro_rules! with_finite_field {
    ($spec:expr, $C:ident => $body:expr, rationals => $rationals:expr) => {{
        let __spec: $crate::FieldSpec = $spec;
        match __spec.modulus() {
            None => $rationals,
            Some(2) => {
                type $C = $crate::Fp<2>;
                $body
            }
            Some(3) => {
                type $C = $crate::Fp<3>;
                $body
            }
            Some(5) => {
                type $C = $crate::Fp<5>;
                $body
            }
            Some(7) => {
                type $C = $crate::Fp<7>;
                $body
            }
            Some(11) => {
                type $C = $crate::Fp<11>;
                $body
            }
            Some(13) => {
                type $C = $crate::Fp<13>;
                $body
            }
            Some(17) => {
                type $C = $crate::Fp<17>;
                $body
            }
            Some(19) => {
                type $C = $crate::Fp<19>;
                $body
            }
            Some(23) => {
                type $C = $crate::Fp<23>;
                $body
            }
            Some(29) => {
                type $C = $crate::Fp<29>;
                $body
            }
            Some(31) => {
                type $C = $crate::Fp<31>;
                $body
            }
            Some(p) => unreachable!("FieldSpec admitted unsupported modulus {p}"),
        }
    }};
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{F31, F7};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn prime_field_examples() {
        assert_eq!(F7::new(3) + F7::new(5), F7::new(1));
        assert_eq!(F31::new(15) + F31::new(16), F31::zero());
        assert_eq!(F7::new(3) * F7::new(5), F7::new(1));
        assert_eq!(-F31::zero(), F31::zero());
        assert_eq!(F7::new(3).inv().unwrap(), F7::new(5));
        assert_eq!(F7::new(-1).residue(), 6);
    }

    #[test]
    fn rational_examples() {
        assert_eq!(rat(1, 2) + rat(1, 3), rat(5, 6));
        assert_eq!(rat(2, 3) * rat(3, 2), Rational::one());
        assert_eq!(rat(-4, 5).inv().unwrap(), rat(-5, 4));
        let x = rat(6, -4);
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(2));
    }

    #[test]
    fn f31_inverses_exhaustive() {
        for x in F31::elements().skip(1) {
            assert_eq!(x * x.inv().unwrap(), F31::one(), "x = {x}");
        }
    }

    #[test]
    fn fermat_little_theorem() {
        fn check<C: FiniteField>() {
            let p = C::order() as u64;
            for x in C::elements().filter(|x| !x.is_zero()) {
                assert!(x.pow(p - 1).is_one());
            }
        }
        check::<F7>();
        check::<F31>();
    }

    #[test]
    fn zero_has_no_inverse() {
        assert_eq!(F7::zero().inv(), Err(FieldError::DivisionByZero));
        assert_eq!(Rational::zero().inv(), Err(FieldError::DivisionByZero));
        assert_eq!(
            F7::from_ratio(&BigInt::from(1), &BigInt::from(14)),
            Err(FieldError::DivisionByZero)
        );
    }

    #[test]
    fn field_spec_validation() {
        assert_eq!("f7".parse::<FieldSpec>().unwrap().modulus(), Some(7));
        assert_eq!("GF(31)".parse::<FieldSpec>().unwrap().modulus(), Some(31));
        assert_eq!("QQ".parse::<FieldSpec>().unwrap(), FieldSpec::rationals());
        assert_eq!(FieldSpec::prime(9), Err(FieldError::NotPrime(9)));
        assert_eq!(FieldSpec::prime(1), Err(FieldError::NotPrime(1)));
        assert_eq!(FieldSpec::prime(101), Err(FieldError::UnsupportedModulus(101)));
        assert!("x7".parse::<FieldSpec>().is_err());
        assert_eq!(F7::spec().to_string(), "F7");
    }

    #[test]
    fn balanced_representatives() {
        let shown: Vec<i64> = F7::elements().map(|x| x.balanced()).collect();
        assert_eq!(shown, vec![0, 1, 2, 3, -3, -2, -1]);
        assert_eq!(F31::new(16).balanced(), -15);
        assert_eq!(F31::new(15).balanced(), 15);
    }

    #[test]
    fn from_ratio_maps_into_prime_field() {
        let half = F7::from_ratio(&BigInt::from(1), &BigInt::from(2)).unwrap();
        assert_eq!(half * F7::new(2), F7::one());
        let neg = F7::from_ratio(&BigInt::from(-3), &BigInt::from(1)).unwrap();
        assert_eq!(neg, F7::new(4));
    }

    #[test]
    fn sampling_respects_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let range = CoeffRange::default();
        for _ in 0..2000 {
            let q = Rational::sample_nonzero(&mut rng, &range);
            assert!(!q.is_zero());
            assert!(q.within_height(5));
            let f = F7::sample_nonzero(&mut rng, &range);
            assert!(!f.is_zero());
        }
        assert!(CoeffRange { num_bound: 0, den_bound: 3 }.validate().is_err());
    }

    #[test]
    fn dispatch_macro_selects_type() {
        fn name<C: Field>() -> String {
            C::spec().to_string()
        }
        for s in ["q", "f2", "f7", "f31"] {
            let spec: FieldSpec = s.parse().unwrap();
            let got = with_field!(spec, C => name::<C>());
            assert_eq!(got, spec.to_string());
        }
    }
}
