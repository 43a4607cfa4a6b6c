//! Exact arithmetic in the Gaussian rationals ℚ(i).
//!
//! Every quantity in this crate is a [`Scalar`]: a pair of reduced big
//! rationals `re + im·i`. Equality is structural on the reduced forms, so
//! it is exact and zero-tolerance.
//!
//! Text grammar (used verbatim by all JSON payloads):
//!
//! ```text
//! SCALAR := RAT | RAT ("+" | "-") RAT "i" | RAT "i"
//! RAT    := ["+" | "-"] DIGITS ["/" DIGITS]      (denominator > 0)
//! ```

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("cannot parse scalar: {reason} at `{token}`")]
    Parse { token: String, reason: &'static str },
    #[error("division by zero")]
    DivisionByZero,
}

/// An exact element `re + im·i` of ℚ(i).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    re: BigRational,
    im: BigRational,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn zero() -> Self {
        Scalar::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn i() -> Self {
        Scalar::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(v: i64) -> Self {
        Scalar::new(BigRational::from_integer(BigInt::from(v)), BigRational::zero())
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Scalar::new(BigRational::from_integer(v), BigRational::zero())
    }

    /// `num/den` as a real scalar.
    pub fn ratio(num: i64, den: i64) -> Result<Self, ScalarError> {
        if den == 0 {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Scalar::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        ))
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar::new(self.re.clone(), -&self.im)
    }

    /// `re² + im²`, the field norm down to ℚ.
    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let n = self.norm_sq();
        Ok(Scalar::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Self, ScalarError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Non-negative power; `0^0 = 1`.
    pub fn pow(&self, exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow_int(&self, exp: i64) -> Result<Self, ScalarError> {
        let mag = u32::try_from(exp.unsigned_abs()).expect("exponent out of range");
        if exp >= 0 {
            Ok(self.pow(mag))
        } else {
            Ok(self.inv()?.pow(mag))
        }
    }

    /// True when both parts are stored in lowest terms with positive
    /// denominators.
    pub fn is_reduced(&self) -> bool {
        fn reduced(q: &BigRational) -> bool {
            let d = q.denom();
            d.is_positive() && num::Integer::gcd(q.numer(), d).is_one()
        }
        reduced(&self.re) && reduced(&self.im)
    }
}

fn parse_rat(token: &str) -> Result<BigRational, ScalarError> {
    let err = |reason| ScalarError::Parse {
        token: token.to_string(),
        reason,
    };
    let (neg, body) = match token.as_bytes().first() {
        Some(b'-') => (true, &token[1..]),
        Some(b'+') => (false, &token[1..]),
        Some(_) => (false, token),
        None => return Err(err("empty rational")),
    };
    let (num_str, den_str) = match body.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (body, None),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits(num_str) {
        return Err(err("expected digits"));
    }
    let mut numer: BigInt = num_str.parse().map_err(|_| err("expected digits"))?;
    if neg {
        numer = -numer;
    }
    let denom: BigInt = match den_str {
        Some(d) if digits(d) => d.parse().map_err(|_| err("expected digits"))?,
        Some(_) => return Err(err("expected denominator digits")),
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(BigRational::new(numer, denom))
}

impl FromStr for Scalar {
    type Err = ScalarError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let s = text.trim();
        let Some(body) = s.strip_suffix('i') else {
            return Ok(Scalar::new(parse_rat(s)?, BigRational::zero()));
        };
        // split at the first sign that follows a digit
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .find(|&p| (bytes[p] == b'+' || bytes[p] == b'-') && bytes[p - 1].is_ascii_digit());
        match split {
            Some(p) => {
                let re = parse_rat(&body[..p])?;
                let im = parse_rat(&body[p + 1..])?;
                let im = if bytes[p] == b'-' { -im } else { im };
                Ok(Scalar::new(re, im))
            }
            None => Ok(Scalar::new(BigRational::zero(), parse_rat(body)?)),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "{}{}{}i", self.re, sign, self.im.abs())
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

impl From<BigRational> for Scalar {
    fn from(v: BigRational) -> Self {
        Scalar::new(v, BigRational::zero())
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re, -self.im)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-&self.re, -&self.im)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Scalar::new(&self.re * &rhs.re, BigRational::zero());
        }
        Scalar::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self += &rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        *self -= &rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

impl<'a> Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |mut acc, x| {
            acc += x;
            acc
        })
    }
}

impl Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |acc, x| acc * x)
    }
}

/// Exact binomial coefficient; zero outside `0 ≤ k ≤ n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

/// The RNG used for every randomized routine in the crate.
pub type SampleRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Bounds for [`random_scalar`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleConfig {
    pub max_abs_numerator: u64,
    pub max_denominator: u64,
    /// Draw an imaginary part as well.
    pub gaussian: bool,
    pub nonzero: bool,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            max_abs_numerator: 10,
            max_denominator: 10,
            gaussian: false,
            nonzero: false,
        }
    }
}

impl SampleConfig {
    pub fn nonzero(self) -> Self {
        SampleConfig {
            nonzero: true,
            ..self
        }
    }

    pub fn gaussian(self) -> Self {
        SampleConfig {
            gaussian: true,
            ..self
        }
    }
}

fn random_rat<R: Rng + ?Sized>(rng: &mut R, cfg: &SampleConfig) -> BigRational {
    let m = cfg.max_abs_numerator as i64;
    let num = rng.gen_range(-m..=m);
    let den = rng.gen_range(1..=cfg.max_denominator as i64);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Draws a small random scalar. Deterministic for a fixed RNG state.
pub fn random_scalar<R: Rng + ?Sized>(rng: &mut R, cfg: &SampleConfig) -> Scalar {
    assert!(
        cfg.max_abs_numerator >= 1 && cfg.max_denominator >= 1,
        "sample bounds must be at least 1"
    );
    loop {
        let re = random_rat(rng, cfg);
        let im = if cfg.gaussian {
            random_rat(rng, cfg)
        } else {
            BigRational::zero()
        };
        let s = Scalar::new(re, im);
        if !(cfg.nonzero && s.is_zero()) {
            return s;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> Scalar {
        text.parse().unwrap()
    }

    #[test]
    fn parse_reduces() {
        assert_eq!(s("3/6"), Scalar::ratio(1, 2).unwrap());
        assert_eq!(s("5"), Scalar::from_int(5));
        let z = s("-2/4+1/3i");
        assert_eq!(z.re(), &BigRational::new((-1).into(), 2.into()));
        assert_eq!(z.im(), &BigRational::new(1.into(), 3.into()));
        assert_eq!(z.to_string(), "-1/2+1/3i");
    }

    #[test]
    fn parse_forms() {
        assert_eq!(s("1/3i").to_string(), "1/3i");
        assert_eq!(s("-2i"), -(Scalar::i() * Scalar::from_int(2)));
        assert_eq!(s("+7/14-1/2i").to_string(), "1/2-1/2i");
        assert_eq!(s("1+-2i").to_string(), "1-2i");
        assert_eq!(s(" 4 ").to_string(), "4");
    }

    #[test]
    fn parse_errors_name_token() {
        for bad in ["", "1/0", "abc", "1/", "i", "1+2", "1/2/3", "--1", "1.5", "2+3j"] {
            let err = bad.parse::<Scalar>().unwrap_err();
            assert!(matches!(err, ScalarError::Parse { .. }), "{bad:?} gave {err:?}");
        }
        match "1/0".parse::<Scalar>().unwrap_err() {
            ScalarError::Parse { token, reason } => {
                assert_eq!(token, "1/0");
                assert_eq!(reason, "zero denominator");
            }
            e => panic!("{e:?}"),
        }
        match "3+x/2i".parse::<Scalar>().unwrap_err() {
            ScalarError::Parse { token, .. } => assert_eq!(token, "x/2"),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn field_examples() {
        assert_eq!(s("1/2+1i") * s("1/2-1i"), s("5/4"));
        assert_eq!(s("2").inv().unwrap(), s("1/2"));
        assert_eq!(s("1/2").pow_int(-2).unwrap(), s("4"));
        assert_eq!(s("1+1i").pow(2), s("2i"));
        assert_eq!(s("1+1i").inv().unwrap(), s("1/2-1/2i"));
        assert_eq!(s("0").pow(0), Scalar::one());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(Scalar::zero().inv(), Err(ScalarError::DivisionByZero));
        assert_eq!(s("3").checked_div(&s("0")), Err(ScalarError::DivisionByZero));
        assert_eq!(Scalar::zero().pow_int(-1), Err(ScalarError::DivisionByZero));
        assert_eq!(Scalar::ratio(1, 0), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(4, 0), BigInt::from(1));
        assert_eq!(binomial(4, 5), BigInt::from(0));
        assert_eq!(binomial(4, -1), BigInt::from(0));
        assert_eq!(binomial(30, 15), BigInt::from(155_117_520u64));
    }

    #[test]
    fn sampler_is_deterministic() {
        let cfg = SampleConfig::default().nonzero();
        let a: Vec<Scalar> = {
            let mut rng = seeded_rng(42);
            (0..20).map(|_| random_scalar(&mut rng, &cfg)).collect()
        };
        let b: Vec<Scalar> = {
            let mut rng = seeded_rng(42);
            (0..20).map(|_| random_scalar(&mut rng, &cfg)).collect()
        };
        assert_eq!(a, b);
        assert!(a.iter().all(|x| !x.is_zero() && x.is_real()));
    }

    #[test]
    fn sampler_respects_flags() {
        let mut rng = seeded_rng(7);
        let tight = SampleConfig {
            max_abs_numerator: 1,
            max_denominator: 1,
            gaussian: false,
            nonzero: true,
        };
        for _ in 0..200 {
            let x = random_scalar(&mut rng, &tight);
            assert!(x == Scalar::one() || x == -Scalar::one());
        }
        let g = SampleConfig::default().gaussian();
        let any_imag = (0..200).any(|_| !random_scalar(&mut rng, &g).is_real());
        assert!(any_imag);
    }

    #[test]
    fn serde_uses_text_grammar() {
        let v: Vec<Scalar> = serde_json::from_str(r#"["3/6", "1-1/2i"]"#).unwrap();
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["1/2","1-1/2i"]"#);
        assert!(serde_json::from_str::<Scalar>(r#""1/0""#).is_err());
    }
}
