//! Similarity dimensions `d = log(1/p) / log(1/rho)` handled without floating point.
//!
//! A dimension is stored as a primitive pair of bases `(P, R)` with
//! `d = ln P / ln R`. Comparisons against a rational `m/n` reduce to the
//! integer power comparison `P^n` vs `R^m`; comparisons between two
//! irrational dimensions walk the Stern–Brocot tree until a separating
//! rational is found.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{self, powi, rat, Rational};

const TRIAL_DIVISION_LIMIT: u64 = 1 << 20;
const STERN_BROCOT_STEPS: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dimension {
    mass_base: Rational,
    length_base: Rational,
    exact: Option<Rational>,
}

type Exponents = BTreeMap<BigUint, i64>;

fn factor_uint(mut n: BigUint, sign: i64, out: &mut Exponents) -> Result<()> {
    let original = n.clone();
    let mut p = 2u64;
    while p <= TRIAL_DIVISION_LIMIT && !n.is_one() {
        let bp = BigUint::from(p);
        while (&n % &bp).is_zero() {
            n /= &bp;
            *out.entry(bp.clone()).or_insert(0) += sign;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !n.is_one() {
        // no factor below the trial bound, so anything under its square is prime
        if n.bits() > 40 {
            return Err(Error::InconsistentDimension(format!("cannot factor {original}")));
        }
        *out.entry(n).or_insert(0) += sign;
    }
    Ok(())
}

fn factor(q: &Rational) -> Result<Exponents> {
    let mut out = Exponents::new();
    factor_uint(q.numer().magnitude().clone(), 1, &mut out)?;
    factor_uint(q.denom().magnitude().clone(), -1, &mut out)?;
    out.retain(|_, e| *e != 0);
    Ok(out)
}

fn rebuild(exps: &Exponents, divisor: i64) -> Rational {
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for (p, e) in exps {
        let e = e / divisor;
        if e > 0 {
            num *= num_traits::pow(p.clone(), e as usize);
        } else {
            den *= num_traits::pow(p.clone(), (-e) as usize);
        }
    }
    Rational::new(BigInt::from_biguint(Sign::Plus, num), BigInt::from_biguint(Sign::Plus, den))
}

impl Dimension {
    /// Dimension of a map with contraction ratio `rho` carrying weight `p`.
    pub fn from_pair(rho: &Rational, p: &Rational) -> Result<Self> {
        let one = Rational::one();
        if !(rho > &Rational::zero() && rho < &one && p > &Rational::zero() && p < &one) {
            return Err(Error::InconsistentDimension(format!("rho = {rho}, p = {p} outside (0,1)")));
        }
        let mass = factor(&(&one / p))?;
        let length = factor(&(&one / rho))?;
        let g = mass.values().chain(length.values()).fold(0i64, |g, e| g.gcd(e));
        let mass_base = rebuild(&mass, g);
        let length_base = rebuild(&length, g);
        // d is rational exactly when the exponent vectors are proportional
        let (pivot, pivot_len) = length.iter().next().map(|(k, v)| (k.clone(), *v)).expect("rho < 1");
        let pivot_mass = mass.get(&pivot).copied().unwrap_or(0);
        let primes: std::collections::BTreeSet<_> = mass.keys().chain(length.keys()).collect();
        let proportional = primes.into_iter().all(|q| {
            let m = mass.get(q).copied().unwrap_or(0);
            let l = length.get(q).copied().unwrap_or(0);
            m * pivot_len == l * pivot_mass
        });
        let exact = proportional.then(|| rat(pivot_mass, pivot_len));
        Ok(Self { mass_base, length_base, exact })
    }

    pub fn exact(&self) -> Option<&Rational> {
        self.exact.as_ref()
    }

    /// `(P, R)` with `d = ln P / ln R`.
    pub fn bases(&self) -> (&Rational, &Rational) {
        (&self.mass_base, &self.length_base)
    }

    pub fn approx(&self) -> f64 {
        if let Some(q) = &self.exact {
            return rational::to_f64(q);
        }
        rational::to_f64(&self.mass_base).ln() / rational::to_f64(&self.length_base).ln()
    }

    /// True when both describe the same real number, as far as can be decided exactly.
    pub fn same_as(&self, other: &Self) -> bool {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => a == b,
            (None, None) => self.mass_base == other.mass_base && self.length_base == other.length_base,
            _ => false,
        }
    }

    /// Exact comparison of `d` with a nonnegative rational.
    pub fn cmp_rational(&self, q: &Rational) -> Ordering {
        if let Some(e) = &self.exact {
            return e.cmp(q);
        }
        if *q <= Rational::zero() {
            return Ordering::Greater;
        }
        let m = q.numer().to_u32().expect("numerator fits u32");
        let n = q.denom().to_u32().expect("denominator fits u32");
        // d ? m/n  <=>  n ln P ? m ln R  <=>  P^n ? R^m
        powi(&self.mass_base, n).cmp(&powi(&self.length_base, m))
    }

    /// Exact ordering of two dimensions.
    pub fn compare(&self, other: &Self) -> Result<Ordering> {
        if self.same_as(other) {
            return Ok(Ordering::Equal);
        }
        if let Some(e) = &other.exact {
            return Ok(self.cmp_rational(e));
        }
        if let Some(e) = &self.exact {
            return Ok(other.cmp_rational(e).reverse());
        }
        let (mut lm, mut ln, mut rm, mut rn) = (0u64, 1u64, 1u64, 0u64);
        for _ in 0..STERN_BROCOT_STEPS {
            let (m, n) = (lm + rm, ln + rn);
            let q = rat(m as i64, n as i64);
            let a = self.cmp_rational(&q);
            let b = other.cmp_rational(&q);
            match (a, b) {
                (Ordering::Less, Ordering::Less) => (rm, rn) = (m, n),
                (Ordering::Greater, Ordering::Greater) => (lm, ln) = (m, n),
                (Ordering::Equal, Ordering::Equal) => return Ok(Ordering::Equal),
                (Ordering::Less, _) | (Ordering::Equal, Ordering::Greater) => return Ok(Ordering::Less),
                _ => return Ok(Ordering::Greater),
            }
        }
        Err(Error::IndeterminateDimension(self.to_string(), other.to_string()))
    }

    /// Rational bracket `[lo, hi]` of `d` using denominators up to `max_den`.
    ///
    /// `lo == hi` only when `d` is rational with a denominator in range.
    pub fn bracket(&self, max_den: u32) -> (Rational, Rational) {
        if let Some(e) = &self.exact {
            if e.denom().to_u32().is_some_and(|q| q <= max_den) {
                return (e.clone(), e.clone());
            }
        }
        let approx = self.approx();
        let mut best_lo: Option<Rational> = None;
        let mut best_hi: Option<Rational> = None;
        for q in 1..=max_den {
            let mut m = (approx * q as f64).floor().max(0.0) as i64;
            while self.cmp_rational(&rat(m + 1, q as i64)) != Ordering::Less {
                m += 1;
            }
            while m > 0 && self.cmp_rational(&rat(m, q as i64)) == Ordering::Less {
                m -= 1;
            }
            let lo = rat(m, q as i64);
            let hi = if self.cmp_rational(&lo) == Ordering::Equal { lo.clone() } else { rat(m + 1, q as i64) };
            if best_lo.as_ref().is_none_or(|b| lo > *b) {
                best_lo = Some(lo);
            }
            if best_hi.as_ref().is_none_or(|b| hi < *b) {
                best_hi = Some(hi);
            }
        }
        (best_lo.expect("max_den >= 1"), best_hi.expect("max_den >= 1"))
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(q) => write!(f, "{q}"),
            None => write!(f, "log({})/log({})", self.mass_base, self.length_base),
        }
    }
}

impl Serialize for Dimension {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
