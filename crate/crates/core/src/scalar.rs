//! Exact scalars: rationals, or residues modulo a configured prime.
//!
//! Every scalar carries its field. Mixing two fields in one operation is a
//! programming error for the operator impls (they panic) and a recoverable
//! [`ScalarError::MixedFieldModes`] through the `checked_*` methods.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

/// 2^31 - 1.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// A second prime in the admissible window, used for cross-checks.
pub const SECOND_PRIME: u64 = 2_147_483_629;

const PRIME_LOWER: u64 = 1 << 30;
const PRIME_UPPER: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("scalars from different fields combined ({0} vs {1})")]
    MixedFieldModes(FieldMode, FieldMode),
    #[error("modulus {0} is outside the supported window (2^30, 2^32)")]
    PrimeOutOfRange(u64),
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
}

/// Which field the coefficients live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldMode {
    Rational,
    Prime(u64),
}

impl FieldMode {
    /// Validated prime-field mode.
    pub fn prime(p: u64) -> Result<Self, ScalarError> {
        if p <= PRIME_LOWER || p >= PRIME_UPPER {
            return Err(ScalarError::PrimeOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(ScalarError::NotPrime(p));
        }
        Ok(FieldMode::Prime(p))
    }

    pub fn default_prime() -> Self {
        FieldMode::Prime(DEFAULT_PRIME)
    }

    pub fn is_prime_field(&self) -> bool {
        matches!(self, FieldMode::Prime(_))
    }
}

impl fmt::Display for FieldMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldMode::Rational => f.write_str("rational"),
            FieldMode::Prime(p) => write!(f, "prime {}", p),
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// An exact field element.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(Box<BigRational>),
    Prime { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn zero(mode: FieldMode) -> Self {
        Self::from_i64(mode, 0)
    }

    pub fn one(mode: FieldMode) -> Self {
        Self::from_i64(mode, 1)
    }

    pub fn from_i64(mode: FieldMode, n: i64) -> Self {
        match mode {
            FieldMode::Rational => Scalar::Rational(Box::new(BigRational::from_integer(n.into()))),
            FieldMode::Prime(p) => Scalar::Prime {
                value: n.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    pub fn from_bigint(mode: FieldMode, n: &BigInt) -> Self {
        match mode {
            FieldMode::Rational => Scalar::Rational(Box::new(BigRational::from_integer(n.clone()))),
            FieldMode::Prime(p) => {
                let m = BigInt::from(p);
                let mut r = n % &m;
                if r.is_negative() {
                    r += &m;
                }
                Scalar::Prime {
                    value: r.to_u64().expect("residue fits in u64"),
                    modulus: p,
                }
            }
        }
    }

    /// `num/den` as an element of `mode`.
    pub fn from_ratio(mode: FieldMode, num: &BigInt, den: &BigInt) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        match mode {
            FieldMode::Rational => Ok(Scalar::Rational(Box::new(BigRational::new(
                num.clone(),
                den.clone(),
            )))),
            FieldMode::Prime(_) => {
                let n = Scalar::from_bigint(mode, num);
                let d = Scalar::from_bigint(mode, den);
                let inv = d.inv().ok_or(ScalarError::DivisionByZero)?;
                Ok(n * inv)
            }
        }
    }

    pub fn mode(&self) -> FieldMode {
        match self {
            Scalar::Rational(_) => FieldMode::Rational,
            Scalar::Prime { modulus, .. } => FieldMode::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Prime { value, .. } => *value == 1,
        }
    }

    /// True when the printed form carries a leading minus sign.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_negative(),
            Scalar::Prime { .. } => false,
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(r) => Scalar::Rational(Box::new(r.recip())),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Scalar::one(self.mode());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ScalarError> {
        self.compatible(other)?;
        Ok(self + other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        self.compatible(other)?;
        Ok(self * other)
    }

    pub fn compatible(&self, other: &Self) -> Result<(), ScalarError> {
        if self.mode() == other.mode() {
            Ok(())
        } else {
            Err(ScalarError::MixedFieldModes(self.mode(), other.mode()))
        }
    }

    /// Uniform element in prime mode; small integer in [-9, 9] in rational mode.
    pub fn random<R: Rng + ?Sized>(mode: FieldMode, rng: &mut R) -> Self {
        match mode {
            FieldMode::Rational => Scalar::from_i64(mode, rng.gen_range(-9..=9)),
            FieldMode::Prime(p) => Scalar::Prime {
                value: rng.gen_range(0..p),
                modulus: p,
            },
        }
    }

    /// Random nonzero element.
    pub fn random_nonzero<R: Rng + ?Sized>(mode: FieldMode, rng: &mut R) -> Self {
        loop {
            let s = Scalar::random(mode, rng);
            if !s.is_zero() {
                return s;
            }
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Prime { .. } => None,
        }
    }

    /// Residue value in prime mode.
    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Prime { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }

    /// Reduce a rational scalar into a prime field. `None` if the denominator
    /// vanishes modulo `p`.
    pub fn reduce(&self, mode: FieldMode) -> Option<Self> {
        match (self, mode) {
            (Scalar::Rational(r), FieldMode::Prime(_)) => {
                Scalar::from_ratio(mode, r.numer(), r.denom()).ok()
            }
            (s, m) if s.mode() == m => Some(s.clone()),
            _ => None,
        }
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("mixed field modes: {} and {}", a.mode(), b.mode())
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(Box::new(&**a + &**b)),
            (Scalar::Prime { value: a, modulus: p }, Scalar::Prime { value: b, modulus: q })
                if p == q =>
            {
                let s = a + b;
                Scalar::Prime {
                    value: if s >= *p { s - p } else { s },
                    modulus: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(Box::new(&**a - &**b)),
            (Scalar::Prime { value: a, modulus: p }, Scalar::Prime { value: b, modulus: q })
                if p == q =>
            {
                Scalar::Prime {
                    value: if a >= b { a - b } else { a + p - b },
                    modulus: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(Box::new(&**a * &**b)),
            (Scalar::Prime { value: a, modulus: p }, Scalar::Prime { value: b, modulus: q })
                if p == q =>
            {
                Scalar::Prime {
                    value: mul_mod(*a, *b, *p),
                    modulus: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(Box::new(-&**a)),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order used only for canonical sorting (rationals by value, residues
/// by representative).
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.cmp(b),
            (Scalar::Prime { value: a, modulus: p }, Scalar::Prime { value: b, modulus: q }) => {
                (p, a).cmp(&(q, b))
            }
            (Scalar::Rational(_), Scalar::Prime { .. }) => Ordering::Less,
            (Scalar::Prime { .. }, Scalar::Rational(_)) => Ordering::Greater,
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
            Scalar::Prime { value, .. } => write!(f, "{}", value),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
