//! Exact field elements: rationals over arbitrary precision integers and
//! residues modulo a prime.

use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Largest admissible prime modulus.
pub const MAX_PRIME: u64 = 1 << 31;

/// The ground field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Q,
    Fp(u32),
}

/// An element of a [`Field`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { v: u32, p: u32 },
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn inv_mod(v: u32, p: u32) -> u32 {
    // p is prime, so v^(p-2) is the inverse
    let (mut base, mut e, mut acc) = (v as u64, p as u64 - 2, 1u64);
    let m = p as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc as u32
}

impl Field {
    /// Builds `F_p`, rejecting composite or oversized moduli.
    pub fn prime(p: u64) -> Result<Field, Error> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(Error::Invalid(format!("{} is not a prime below 2^31", p)));
        }
        Ok(Field::Fp(p as u32))
    }

    pub fn zero(self) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::zero()),
            Field::Fp(p) => Scalar::Fp { v: 0, p },
        }
    }

    pub fn one(self) -> Scalar {
        self.int(1)
    }

    pub fn int(self, n: i64) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Fp(p) => Scalar::Fp { v: n.rem_euclid(p as i64) as u32, p },
        }
    }

    /// `n / d` in this field.
    pub fn frac(self, n: i64, d: i64) -> Result<Scalar, Error> {
        if d == 0 {
            return Err(Error::DivisionByZero);
        }
        self.int(n).div(&self.int(d))
    }

    /// `(-1)^k`.
    pub fn sign(self, k: i64) -> Scalar {
        if k.rem_euclid(2) == 0 {
            self.one()
        } else {
            self.int(-1)
        }
    }

    /// Parses `p/q`, `p` or `r mod p`.
    pub fn parse(self, s: &str) -> Result<Scalar, Error> {
        let s = s.trim();
        let bad = || Error::ParseScalar(s.to_string());
        if let Some((r, m)) = s.split_once("mod") {
            let m: u64 = m.trim().parse().map_err(|_| bad())?;
            match self {
                Field::Fp(p) if p as u64 == m => {}
                _ => return Err(Error::FieldMismatch),
            }
            let r: i64 = r.trim().parse().map_err(|_| bad())?;
            return Ok(self.int(r));
        }
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s, "1"),
        };
        let n = BigInt::from_str(num).map_err(|_| bad())?;
        let d = BigInt::from_str(den).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self {
            Field::Q => Ok(Scalar::Q(BigRational::new(n, d))),
            Field::Fp(p) => {
                let pm = BigInt::from(p);
                let nr = n.mod_floor(&pm).to_u32().unwrap();
                let dr = d.mod_floor(&pm).to_u32().unwrap();
                if dr == 0 {
                    return Err(Error::DivisionByZero);
                }
                Ok(Scalar::Fp { v: (nr as u64 * inv_mod(dr, p) as u64 % p as u64) as u32, p })
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Q => write!(f, "q"),
            Field::Fp(p) => write!(f, "fp:{}", p),
        }
    }
}

impl FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Field, Error> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(Field::Q);
        }
        if let Some(p) = s.strip_prefix("fp:") {
            let p: u64 = p.parse().map_err(|_| Error::Invalid(format!("bad field {}", s)))?;
            return Field::prime(p);
        }
        Err(Error::Invalid(format!("bad field {}", s)))
    }
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Q,
            Scalar::Fp { p, .. } => Field::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    fn same(&self, o: &Scalar) -> Result<(), Error> {
        if self.field() == o.field() {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn try_add(&self, o: &Scalar) -> Result<Scalar, Error> {
        self.same(o)?;
        Ok(match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { v, p }, Scalar::Fp { v: w, .. }) => {
                Scalar::Fp { v: ((*v as u64 + *w as u64) % *p as u64) as u32, p: *p }
            }
            _ => unreachable!(),
        })
    }

    pub fn try_sub(&self, o: &Scalar) -> Result<Scalar, Error> {
        self.try_add(&o.neg_ref())
    }

    pub fn try_mul(&self, o: &Scalar) -> Result<Scalar, Error> {
        self.same(o)?;
        Ok(match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { v, p }, Scalar::Fp { v: w, .. }) => {
                Scalar::Fp { v: ((*v as u64 * *w as u64) % *p as u64) as u32, p: *p }
            }
            _ => unreachable!(),
        })
    }

    pub fn inv(&self) -> Result<Scalar, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Q(q) => Scalar::Q(q.recip()),
            Scalar::Fp { v, p } => Scalar::Fp { v: inv_mod(*v, *p), p: *p },
        })
    }

    pub fn div(&self, o: &Scalar) -> Result<Scalar, Error> {
        self.same(o)?;
        self.try_mul(&o.inv()?)
    }

    pub fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Q(q) => Scalar::Q(-q),
            Scalar::Fp { v, p } => Scalar::Fp { v: if *v == 0 { 0 } else { p - v }, p: *p },
        }
    }

    /// Negates when `odd` holds.
    pub fn signed(self, odd: bool) -> Scalar {
        if odd {
            -self
        } else {
            self
        }
    }
}

/// Binary arithmetic with explicit error reporting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn scalar_arith(a: &Scalar, b: &Scalar, op: Op) -> Result<Scalar, Error> {
    match op {
        Op::Add => a.try_add(b),
        Op::Sub => a.try_sub(b),
        Op::Mul => a.try_mul(b),
        Op::Div => a.div(b),
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Fp { v, p } => write!(f, "{} mod {}", v, p),
        }
    }
}

impl Scalar {
    /// Short textual form: residues are printed without the modulus.
    pub fn short(&self) -> String {
        match self {
            Scalar::Fp { v, .. } => v.to_string(),
            _ => self.to_string(),
        }
    }

    /// Sign of a rational, for display purposes only.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_negative(),
            Scalar::Fp { .. } => false,
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        self.try_add(o).expect("field mismatch")
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self.try_sub(o).expect("field mismatch")
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.try_mul(o).expect("field mismatch")
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        &self + &o
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        &self - &o
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        &self * &o
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(q) => Scalar::Q(-q),
            s => s.neg_ref(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => *a += b,
            (Scalar::Fp { v, p }, Scalar::Fp { v: w, p: q }) if p == q => {
                *v = ((*v as u64 + *w as u64) % *p as u64) as u32
            }
            _ => panic!("field mismatch"),
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self += &o.neg_ref();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_basics() {
        let q = Field::Q;
        let a = q.parse("1/2").unwrap();
        let b = q.parse("1/3").unwrap();
        assert_eq!(&a + &b, q.parse("5/6").unwrap());
        assert_eq!(q.parse("2/4").unwrap().to_string(), "1/2");
        assert_eq!(q.parse("-6/3").unwrap().to_string(), "-2");
    }

    #[test]
    fn prime_field_basics() {
        let f = Field::prime(7).unwrap();
        assert_eq!(&f.int(3) * &f.int(5), f.one());
        assert_eq!(f.parse("1/2").unwrap(), f.int(4));
        assert_eq!(f.parse("3 mod 7").unwrap(), f.int(3));
        assert!(Field::prime(8).is_err());
        assert_eq!(f.parse("3 mod 5"), Err(Error::FieldMismatch));
    }

    #[test]
    fn errors() {
        let q = Field::Q;
        assert_eq!(q.zero().inv(), Err(Error::DivisionByZero));
        let f = Field::prime(5).unwrap();
        assert_eq!(scalar_arith(&q.one(), &f.one(), Op::Add), Err(Error::FieldMismatch));
        assert_eq!(scalar_arith(&q.one(), &q.zero(), Op::Div), Err(Error::DivisionByZero));
    }
}
