//! Rational scalars and small helpers around them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `r^e` for a possibly negative exponent. Panics on `0^-k`.
pub fn rat_pow(r: &Rat, e: i64) -> Rat {
    if e >= 0 {
        num_traits::pow(r.clone(), e as usize)
    } else {
        num_traits::pow(r.recip(), (-e) as usize)
    }
}

/// Exact integer `n`-th root of a non-negative integer, if it exists.
pub fn int_nth_root(v: &BigInt, n: u32) -> Option<BigInt> {
    if v.is_negative() {
        if n % 2 == 1 {
            return int_nth_root(&-v, n).map(|r| -r);
        }
        return None;
    }
    if n == 1 || v.is_zero() || v.is_one() {
        return Some(v.clone());
    }
    let r = v.nth_root(n);
    if num_traits::pow(r.clone(), n as usize) == *v {
        Some(r)
    } else {
        None
    }
}

/// Exact rational `n`-th root, if it exists.
pub fn rat_nth_root(v: &Rat, n: u32) -> Option<Rat> {
    let num = int_nth_root(v.numer(), n)?;
    let den = int_nth_root(v.denom(), n)?;
    Some(Rat::new(num, den))
}

/// Best rational approximation with denominator at most `max_den`, by continued fractions.
pub fn approx_rational(x: f64, max_den: i64) -> Option<Rat> {
    if !x.is_finite() || x.abs() > 1e15 {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut frac = x;
    for _ in 0..64 {
        let a = frac.floor();
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let rem = frac - a;
        if rem.abs() < 1e-12 {
            break;
        }
        frac = 1.0 / rem;
    }
    if k1 == 0 {
        return None;
    }
    Some(Rat::new(BigInt::from(h1), BigInt::from(k1)))
}

/// Least common multiple of the denominators.
pub fn denom_lcm<'a>(it: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}
