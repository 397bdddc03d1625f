//! Exact scalars: arbitrary precision rationals or residues modulo a prime.
//!
//! Every value carries enough information to know which field it lives in.
//! Mixing fields inside one arithmetic operation is a programming error and
//! panics; the checked constructors in [`crate::linalg`] reject mismatched
//! input before it ever reaches the arithmetic.

use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Field descriptor shared by every scalar of one problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    /// The rationals, exact and arbitrary precision.
    Rational,
    /// GF(p). Opt-in and heuristic: the theory is stated over characteristic zero.
    Prime(u64),
}

impl Field {
    /// Build a prime field, checking that the modulus really is prime.
    pub fn prime(p: u64) -> Result<Self, Error> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::InvalidInput(alloc::format!("modulus {p} is not prime")))
        }
    }

    pub fn is_heuristic(&self) -> bool {
        matches!(self, Field::Prime(_))
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Residue(Residue::from_i64(v, p)),
        }
    }

    /// Embed `num/den` in this field. Fails if `den` vanishes in the field.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Scalar, Error> {
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        match *self {
            Field::Rational => Ok(Scalar::Rational(BigRational::new(num.clone(), den.clone()))),
            Field::Prime(p) => {
                let n = Residue::from_bigint(num, p);
                let d = Residue::from_bigint(den, p);
                if d.value == 0 {
                    return Err(Error::InvalidInput(alloc::format!(
                        "denominator {den} vanishes modulo {p}"
                    )));
                }
                Ok(Scalar::Residue(n.mul(&d.inverse())))
            }
        }
    }

    /// Parse `"a"` or `"a/b"` into this field.
    pub fn parse(&self, s: &str) -> Result<Scalar, Error> {
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((a, b)) => (parse_int(a)?, parse_int(b)?),
            None => (parse_int(t)?, BigInt::one()),
        };
        self.from_ratio(&num, &den)
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        s.field() == *self
    }
}

fn parse_int(s: &str) -> Result<BigInt, Error> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::InvalidInput("empty number".into()));
    }
    BigInt::from_str(t).map_err(|_| Error::InvalidInput(alloc::format!("unparsable number {s:?}")))
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

/// Residue class in `[0, modulus)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    pub fn new(value: u64, modulus: u64) -> Self {
        Residue { value: value % modulus, modulus }
    }

    fn from_i64(v: i64, p: u64) -> Self {
        Residue { value: (v as i128).rem_euclid(p as i128) as u64, modulus: p }
    }

    fn from_bigint(v: &BigInt, p: u64) -> Self {
        let r = v.mod_floor(&BigInt::from(p));
        Residue { value: r.to_u64().expect("residue fits in u64"), modulus: p }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.modulus, other.modulus, "arithmetic across different prime fields");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        let s = (self.value as u128 + o.value as u128) % self.modulus as u128;
        Residue { value: s as u64, modulus: self.modulus }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.check(o);
        let s = (self.value as u128 + self.modulus as u128 - o.value as u128) % self.modulus as u128;
        Residue { value: s as u64, modulus: self.modulus }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        let s = (self.value as u128 * o.value as u128) % self.modulus as u128;
        Residue { value: s as u64, modulus: self.modulus }
    }

    pub fn neg(&self) -> Self {
        Residue { value: (self.modulus - self.value) % self.modulus, modulus: self.modulus }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = *self;
        let mut acc = Residue { value: 1 % self.modulus, modulus: self.modulus };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inverse(&self) -> Self {
        assert!(self.value != 0, "inverse of zero residue");
        self.pow(self.modulus - 2)
    }
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue(Residue),
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Residue(r) => Field::Prime(r.modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue(r) => r.value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Residue(r) => r.value == 1 % r.modulus,
        }
    }

    pub fn zero_like(&self) -> Scalar {
        self.field().zero()
    }

    pub fn one_like(&self) -> Scalar {
        self.field().one()
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inverse(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Residue(r) => Scalar::Residue(r.inverse()),
        })
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = self.one_like();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Residue(_) => None,
        }
    }

    pub fn as_residue(&self) -> Option<&Residue> {
        match self {
            Scalar::Rational(_) => None,
            Scalar::Residue(r) => Some(r),
        }
    }

    /// Canonical text form: lowest-terms `a` or `a/b` for rationals, `0..p` for residues.
    pub fn to_canonical_string(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Residue(r) => write!(f, "{}", r.value),
        }
    }
}

impl PartialOrd for Residue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        (self.modulus == other.modulus).then(|| self.value.cmp(&other.value))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident) => {
        impl<'a> $tr<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational($tr::$method(a, b)),
                    (Scalar::Residue(a), Scalar::Residue(b)) => Scalar::Residue(a.$method(b)),
                    _ => panic!("arithmetic between rational and prime-field scalars"),
                }
            }
        }

        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $tr::$method(&self, &rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Residue(r) => Scalar::Residue(r.neg()),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Scalar {
    /// `self += a * b`, skipping the work when either factor is zero.
    pub fn add_product(&mut self, a: &Scalar, b: &Scalar) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let p = a * b;
        *self = &*self + &p;
    }

    pub fn add_assign_ref(&mut self, a: &Scalar) {
        if a.is_zero() {
            return;
        }
        *self = &*self + a;
    }

    pub fn sub_assign_ref(&mut self, a: &Scalar) {
        if a.is_zero() {
            return;
        }
        *self = &*self - a;
    }

    /// Sign of a rational, `None` for residues.
    pub fn signum_rational(&self) -> Option<i32> {
        self.as_rational().map(|q| {
            if q.is_positive() {
                1
            } else if q.is_negative() {
                -1
            } else {
                0
            }
        })
    }
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
