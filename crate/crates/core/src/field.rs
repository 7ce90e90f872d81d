//! Exact scalar fields.
//!
//! Everything in this crate is generic over [`Field`], a thin extension of
//! `num_traits::Num` with the handful of operations exact linear algebra
//! needs: inversion, the characteristic, parsing/printing in the `p/q`
//! string format, and element enumeration for finite fields.
//!
//! Two implementations ship: arbitrary precision rationals
//! ([`num_rational::BigRational`]) and prime fields [`Fp`]. Floating point
//! types are deliberately not fields here; every algorithm relies on exact
//! zero tests.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// An exact commutative field.
pub trait Field:
    Num + Neg<Output = Self> + Clone + Debug + Display + Eq + Hash + Send + Sync + 'static
{
    /// 0 for characteristic zero.
    fn characteristic() -> u64;

    fn from_i64(n: i64) -> Self;

    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        Self::one() / self.clone()
    }

    /// All elements, for finite fields.
    fn elements() -> Option<Vec<Self>>;

    /// Parse `"p/q"`, `"p"` or `"-p/q"`.
    fn parse_exact(s: &str) -> Option<Self>;

    /// Short descriptor used in dumps (`"Q"`, `"F_5"`).
    fn descriptor() -> String;

    /// Roots of `c[0] + c[1] x + ... + c[d] x^d` that lie in the field.
    fn roots(coeffs: &[Self]) -> Vec<Self>;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }
}

/// Evaluate a univariate polynomial given by ascending coefficients.
pub fn eval_poly<F: Field>(coeffs: &[F], x: &F) -> F {
    let mut acc = F::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x.clone() + c.clone();
    }
    acc
}

impl Field for BigRational {
    fn characteristic() -> u64 {
        0
    }

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        self.recip()
    }

    fn elements() -> Option<Vec<Self>> {
        None
    }

    fn parse_exact(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim()).ok()?;
                let d = BigInt::from_str(d.trim()).ok()?;
                if d.is_zero() {
                    return None;
                }
                Some(BigRational::new(n, d))
            }
            None => BigInt::from_str(s).ok().map(BigRational::from_integer),
        }
    }

    fn descriptor() -> String {
        "Q".to_string()
    }

    /// Rational root theorem on the integer-normalised polynomial.
    fn roots(coeffs: &[Self]) -> Vec<Self> {
        let mut c: Vec<BigRational> = coeffs.to_vec();
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        if c.len() <= 1 {
            return Vec::new();
        }
        let mut out = Vec::new();
        // factor out x^k
        let shift = c.iter().take_while(|x| x.is_zero()).count();
        if shift > 0 {
            out.push(BigRational::zero());
            c.drain(..shift);
        }
        if c.len() <= 1 {
            return out;
        }
        let lcm = c
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = c.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let a0 = ints[0].abs();
        let an = ints[ints.len() - 1].abs();
        let (Some(p_div), Some(q_div)) = (small_divisors(&a0), small_divisors(&an)) else {
            return out;
        };
        let mut seen = std::collections::BTreeSet::new();
        for p in &p_div {
            for q in &q_div {
                for sign in [1i64, -1] {
                    let cand = BigRational::new(BigInt::from(*p) * sign, BigInt::from(*q));
                    if seen.insert(cand.clone()) && eval_poly(&c, &cand).is_zero() {
                        out.push(cand);
                    }
                }
            }
        }
        out
    }
}

/// Positive divisors of `n` when `n` fits comfortably in a u64.
fn small_divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.to_u64()?;
    if n == 0 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
        if d > 1_000_000 {
            return None;
        }
    }
    Some(out)
}

/// The prime field `Z/P`.
///
/// `P` must be prime. Nothing checks this; inverses come from Fermat's
/// little theorem and are wrong otherwise.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp<const P: u32>(u32);

impl<const P: u32> Fp<P> {
    pub fn new(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self.0 as u64;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % P as u64;
            }
            base = base * base % P as u64;
            e >>= 1;
        }
        Fp(acc as u32)
    }
}

impl<const P: u32> Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Add for Fp<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Fp(((self.0 as u64 + o.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Fp(((self.0 as u64 + P as u64 - o.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Fp(((self.0 as u64 * o.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Div for Fp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        assert!(o.0 != 0, "division by zero in F_{P}");
        self * o.pow(P as u64 - 2)
    }
}

impl<const P: u32> Rem for Fp<P> {
    type Output = Self;
    fn rem(self, _o: Self) -> Self {
        Fp(0)
    }
}

impl<const P: u32> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}

impl<const P: u32> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u32> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u32> Num for Fp<P> {
    type FromStrRadixErr = std::num::ParseIntError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        i64::from_str_radix(s, radix).map(Fp::new)
    }
}

impl<const P: u32> Field for Fp<P> {
    fn characteristic() -> u64 {
        P as u64
    }

    fn from_i64(n: i64) -> Self {
        Fp::new(n)
    }

    fn elements() -> Option<Vec<Self>> {
        Some((0..P).map(Fp).collect())
    }

    fn parse_exact(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: i64 = n.trim().parse().ok()?;
                let d = Fp::<P>::new(d.trim().parse().ok()?);
                if d.is_zero() {
                    return None;
                }
                Some(Fp::new(n) / d)
            }
            None => s.parse::<i64>().ok().map(Fp::new),
        }
    }

    fn descriptor() -> String {
        format!("F_{P}")
    }

    fn roots(coeffs: &[Self]) -> Vec<Self> {
        if coeffs.iter().all(|c| c.is_zero()) {
            return Vec::new();
        }
        (0..P).map(Fp).filter(|x| eval_poly(coeffs, x).is_zero()).collect()
    }
}

/// Convenience constructor for rationals.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// True when every entry is an integer (only meaningful over Q).
pub fn is_integral(x: &BigRational) -> bool {
    x.is_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parse_roundtrip() {
        let x = BigRational::parse_exact("-3/6").unwrap();
        assert_eq!(x, rat(-1, 2));
        assert_eq!(x.to_string(), "-1/2");
        assert_eq!(BigRational::parse_exact("7").unwrap(), rat(7, 1));
        assert!(BigRational::parse_exact("1/0").is_none());
    }

    #[test]
    fn rational_roots_by_rational_root_theorem() {
        // (x - 1/2)(x + 3) x = x^3 + 5/2 x^2 - 3/2 x
        let c = vec![rat(0, 1), rat(-3, 2), rat(5, 2), rat(1, 1)];
        let mut r = BigRational::roots(&c);
        r.sort();
        assert_eq!(r, vec![rat(-3, 1), rat(0, 1), rat(1, 2)]);
        // x^2 + 1 has no rational roots
        assert!(BigRational::roots(&[rat(1, 1), rat(0, 1), rat(1, 1)]).is_empty());
    }

    #[test]
    fn prime_field_arithmetic() {
        type F5 = Fp<5>;
        let a = F5::new(3);
        assert_eq!(a * a.inv(), F5::one());
        assert_eq!(-a, F5::new(2));
        assert_eq!(F5::new(-1), F5::new(4));
        assert_eq!(F5::parse_exact("1/2").unwrap(), F5::new(3));
        assert_eq!(F5::elements().unwrap().len(), 5);
        // x^2 - 1 over F5
        let mut r = F5::roots(&[F5::new(-1), F5::zero(), F5::one()]);
        r.sort();
        assert_eq!(r, vec![F5::new(1), F5::new(4)]);
    }

    #[test]
    fn signed_helpers() {
        assert!(is_integral(&rat(4, 2)));
        assert!(rat(-1, 3).is_negative());
    }
}
