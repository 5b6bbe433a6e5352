//! Exact field arithmetic: big rationals and prime fields behind one scalar
//! type, with the field carried separately so matrices stay homogeneous.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use std::fmt;

use crate::{Error, Result};

/// The coefficient field: `Q` or `F_p` with `p` prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Rational,
    Prime(u64),
}

/// A scalar; its field is tracked by the containing structure.
#[derive(Clone, PartialEq, Eq)]
pub enum Scalar {
    Rat(BigRational),
    Mod(u64),
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{r}"),
            Scalar::Mod(v) => write!(f, "{v}"),
        }
    }
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod(v) => *v == 0,
        }
    }

    /// Render a scalar for deterministic reports.
    pub fn display(&self) -> String {
        format!("{self:?}")
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// Parse a CLI field spec: `Q` or a prime number.
    pub fn parse(s: &str) -> Result<Field> {
        if s == "Q" || s == "q" {
            return Ok(Field::Rational);
        }
        let p: u64 = s
            .parse()
            .map_err(|_| Error::Argument(format!("bad field {s:?}: expected Q or a prime")))?;
        Field::prime(p)
    }

    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::Argument(format!("{p} is not prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(BigRational::zero()),
            Field::Prime(_) => Scalar::Mod(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(BigRational::one()),
            Field::Prime(_) => Scalar::Mod(1),
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(BigRational::from(BigInt::from(v))),
            Field::Prime(p) => {
                let m = v.rem_euclid(*p as i64) as u64;
                Scalar::Mod(m)
            }
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Rational, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (Field::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod((x + y) % p),
            _ => panic!("scalar does not belong to field"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (Field::Rational, Scalar::Rat(x)) => Scalar::Rat(-x),
            (Field::Prime(p), Scalar::Mod(x)) => Scalar::Mod(if *x == 0 { 0 } else { p - x }),
            _ => panic!("scalar does not belong to field"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Rational, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (Field::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            _ => panic!("scalar does not belong to field"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        if a.is_zero() {
            return Err(Error::Domain("inverse of zero".into()));
        }
        match (self, a) {
            (Field::Rational, Scalar::Rat(x)) => Ok(Scalar::Rat(x.recip())),
            (Field::Prime(p), Scalar::Mod(x)) => Ok(Scalar::Mod(mod_pow(*x, p - 2, *p))),
            _ => panic!("scalar does not belong to field"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// A random scalar: uniform residue mod `p`, or a small integer over `Q`
    /// (enough for general-position sampling).
    pub fn random(&self, rng: &mut impl Rng) -> Scalar {
        match self {
            Field::Rational => self.from_i64(rng.gen_range(-9..=9)),
            Field::Prime(p) => Scalar::Mod(rng.gen_range(0..*p)),
        }
    }

    /// Canonicalize a rational display without denominators for integers.
    pub fn is_integer(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rat(r) => r.is_integer(),
            Scalar::Mod(_) => true,
        }
    }

    /// Sign for pivot normalization checks; zero for prime fields.
    pub fn signum(&self, a: &Scalar) -> i8 {
        match a {
            Scalar::Rat(r) => {
                if r.is_zero() {
                    0
                } else if r.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Scalar::Mod(v) => {
                if *v == 0 {
                    0
                } else {
                    1
                }
            }
        }
    }
}

fn mod_pow(base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut b = base as u128 % p as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p as u128;
        }
        b = b * b % p as u128;
        exp >>= 1;
    }
    acc as u64
}
