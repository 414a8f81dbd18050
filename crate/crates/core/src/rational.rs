//! Exact rational arithmetic helpers.
//!
//! Every endpoint, mass and bound in the crate is a [`Rational`]. Irrational
//! quantities such as `r^d` are only ever represented by rational brackets
//! produced by [`root_bracket`] and [`pow_bracket`].

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Fractional bits carried by [`root_bracket`].
const ROOT_BITS: usize = 64;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn pow2(k: u32) -> Rational {
    Rational::from_integer(BigInt::one() << k)
}

/// `2^-k`
pub fn inv_pow2(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k)
}

/// Parses `p/q`, an integer, or a finite decimal such as `0.125` or `1e-6`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::MalformedRational(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = s[i + 1..].parse().map_err(|_| bad())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("{whole}{frac}0").parse().map_err(|_| bad())?;
    let mut value = Rational::new(all, BigInt::from(10u32).pow(frac.len() as u32 + 1));
    let ten = int(10);
    if exponent >= 0 {
        value *= num_traits::pow(ten, exponent as usize);
    } else {
        value /= num_traits::pow(ten, exponent.unsigned_abs() as usize);
    }
    Ok(if neg { -value } else { value })
}

/// Renders `p/q`, or `p` for integers.
pub fn fmt_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // ratio of huge integers: scale down through the bit lengths
        let n = q.numer();
        let d = q.denom();
        let shift = n.bits().max(d.bits()).saturating_sub(1000);
        let n = (n >> shift).to_f64().unwrap_or(0.0);
        let d = (d >> shift).to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Decimal string with `digits` significant digits, for plotting columns.
pub fn fmt_decimal(q: &Rational, digits: usize) -> String {
    format!("{:.*e}", digits.saturating_sub(1), to_f64(q))
}

/// Rational upper bound of `value` on the grid `1/den`.
pub fn ceil_to(value: &Rational, den: u64) -> Rational {
    let den = BigInt::from(den);
    let scaled = value * Rational::from_integer(den.clone());
    Rational::new(scaled.ceil().to_integer(), den)
}

pub fn powi(base: &Rational, exp: u32) -> Rational {
    num_traits::pow(base.clone(), exp as usize)
}

pub fn min(a: &Rational, b: &Rational) -> Rational {
    if a <= b { a.clone() } else { b.clone() }
}

pub fn max(a: &Rational, b: &Rational) -> Rational {
    if a >= b { a.clone() } else { b.clone() }
}

/// Rational bracket `(lo, hi)` with `lo^q <= x <= hi^q`, relative width about `2^-64`.
///
/// `x` must be positive; `lo == hi` exactly when `x` is a perfect `q`-th power
/// at the working precision.
pub fn root_bracket(x: &Rational, q: u32) -> (Rational, Rational) {
    assert!(x.is_positive(), "root of a non-positive rational");
    assert!(q >= 1);
    if q == 1 {
        return (x.clone(), x.clone());
    }
    let a = x.numer().magnitude().clone();
    let b = x.denom().magnitude().clone();
    // x^(1/q) = (a * b^(q-1))^(1/q) / b, scaled by 2^ROOT_BITS
    let radicand: BigUint = (a * num_traits::pow(b.clone(), q as usize - 1)) << (ROOT_BITS * q as usize);
    let root = radicand.nth_root(q);
    let exact = num_traits::pow(root.clone(), q as usize) == radicand;
    let den = BigInt::from_biguint(Sign::Plus, b << ROOT_BITS);
    let lo = Rational::new(BigInt::from_biguint(Sign::Plus, root.clone()), den.clone());
    let hi = if exact {
        lo.clone()
    } else {
        Rational::new(BigInt::from_biguint(Sign::Plus, root + 1u32), den)
    };
    (lo, hi)
}

/// Bracket of `base^e` for a nonnegative rational exponent `e = m/q`.
pub fn pow_rational_bracket(base: &Rational, e: &Rational) -> (Rational, Rational) {
    assert!(!e.is_negative(), "negative exponent");
    let m = e.numer().to_u32().expect("exponent numerator too large");
    let q = e.denom().to_u32().expect("exponent denominator too large");
    root_bracket(&powi(base, m), q)
}

/// Bracket of `base^d` for every `d` in `[e_lo, e_hi]` (`0 <= e_lo <= e_hi`).
///
/// Uses monotonicity of `d -> base^d`: increasing for `base >= 1`,
/// decreasing for `base < 1`.
pub fn pow_bracket(base: &Rational, e_lo: &Rational, e_hi: &Rational) -> (Rational, Rational) {
    assert!(base.is_positive());
    assert!(e_lo <= e_hi);
    let (small_e, large_e) = if *base >= Rational::one() { (e_lo, e_hi) } else { (e_hi, e_lo) };
    let (lo, _) = pow_rational_bracket(base, small_e);
    let (_, hi) = pow_rational_bracket(base, large_e);
    (lo, hi)
}

/// Integer `floor(log2(q))` for positive `q`.
pub fn floor_log2(q: &Rational) -> i64 {
    let n = q.numer().bits() as i64;
    let d = q.denom().bits() as i64;
    let mut k = n - d;
    // adjust the estimate by at most one step either way
    loop {
        let p = if k >= 0 { pow2(k as u32) } else { inv_pow2((-k) as u32) };
        if p > *q {
            k -= 1;
            continue;
        }
        let p2 = &p * int(2);
        if p2 <= *q {
            k += 1;
            continue;
        }
        return k;
    }
}

/// Serde adapters rendering rationals as `"p/q"` strings.
pub mod serde_str {
    use super::{parse_rational, Rational};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Text {
        Str(String),
        Int(i64),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        match Text::deserialize(d)? {
            Text::Str(s) => parse_rational(&s).map_err(de::Error::custom),
            Text::Int(i) => Ok(super::int(i)),
        }
    }

    pub mod vec {
        use super::super::Rational;
        use serde::ser::SerializeSeq;
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for q in v {
                seq.serialize_element(&q.to_string())?;
            }
            seq.end()
        }

        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "super")] Rational);

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let v: Vec<Wrap> = Vec::deserialize(d)?;
            Ok(v.into_iter().map(|w| w.0).collect())
        }
    }

    pub mod opt {
        use super::super::Rational;
        use serde::Serializer;

        pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(q) => s.serialize_some(&q.to_string()),
                None => s.serialize_none(),
            }
        }
    }

    pub mod pair {
        use super::super::Rational;
        use serde::ser::SerializeTuple;
        use serde::Serializer;

        pub fn serialize<S: Serializer>(v: &(Rational, Rational), s: S) -> Result<S::Ok, S::Error> {
            let mut t = s.serialize_tuple(2)?;
            t.serialize_element(&v.0.to_string())?;
            t.serialize_element(&v.1.to_string())?;
            t.end()
        }
    }
}
