//! Digit arithmetic for the ternary Cantor function `h`.
//!
//! A point of the Cantor set is `x = sum 2 a_k / 3^k` with `a_k in {0, 1}`
//! and then `h(x) = sum a_k / 2^k`. Points with eventually constant digits
//! are exactly the cylinder endpoints, where both sums are finite rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::maximal::interval_average;
use crate::measures::{node_budget, IFSMeasure, MeasureSum};
use crate::rational::{self, int, Rational};

/// Longest ternary expansion examined before giving up on eventual constancy.
const MAX_DIGITS: usize = 4096;

/// Digits `(a_1, ..., a_n, t, t, t, ...)` with `a_k, t in {0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TernaryPoint {
    pub prefix: Vec<u8>,
    pub tail: u8,
}

fn ternary_weight(n: usize) -> Rational {
    Rational::new(BigInt::one(), num_traits::pow(BigInt::from(3), n))
}

impl TernaryPoint {
    pub fn new(prefix: Vec<u8>, tail: u8) -> Result<Self> {
        if prefix.iter().chain([&tail]).any(|d| *d > 1) {
            return Err(Error::InvalidArgument("Cantor digits must be 0 or 1".into()));
        }
        Ok(Self { prefix, tail })
    }

    /// Digits of a rational point of the Cantor set, preferring trailing 1s
    /// at cylinder endpoints that have two expansions.
    pub fn from_rational(x: &Rational) -> Result<Self> {
        let zero = Rational::zero();
        let one = Rational::one();
        if *x < zero || *x > one {
            return Err(Error::InvalidArgument(format!("{x} is outside [0, 1]")));
        }
        let mut y = x.clone();
        let mut prefix = Vec::new();
        for _ in 0..MAX_DIGITS {
            if y.is_zero() {
                return Ok(Self { prefix, tail: 0 });
            }
            if y == one {
                return Ok(Self { prefix, tail: 1 });
            }
            let z = &y * int(3);
            let d = z.floor().to_integer().to_u8().expect("digit");
            if d == 1 {
                if z == one {
                    // 0.1000..._3 = 0.0222..._3
                    prefix.push(0);
                    return Ok(Self { prefix, tail: 1 });
                }
                return Err(Error::InvalidArgument(format!("{x} is not in the Cantor set")));
            }
            prefix.push(d / 2);
            y = z - int(d as i64);
        }
        Err(Error::InvalidArgument(format!("digits of {x} are not eventually constant")))
    }

    /// `x = sum 2 a_k / 3^k`.
    pub fn value(&self) -> Rational {
        let n = self.prefix.len();
        let mut x = Rational::zero();
        for (k, a) in self.prefix.iter().enumerate() {
            if *a == 1 {
                x += int(2) * ternary_weight(k + 1);
            }
        }
        if self.tail == 1 {
            x += ternary_weight(n);
        }
        x
    }

    pub fn extended(&self, digits: &[u8], tail: u8) -> Self {
        let mut prefix = self.prefix.clone();
        prefix.extend_from_slice(digits);
        Self { prefix, tail }
    }
}

/// `h(x) = sum a_k / 2^k`.
pub fn cantor_value(p: &TernaryPoint) -> Rational {
    let n = p.prefix.len();
    let mut h = Rational::zero();
    for (k, a) in p.prefix.iter().enumerate() {
        if *a == 1 {
            h += rational::inv_pow2(k as u32 + 1);
        }
    }
    if p.tail == 1 {
        h += rational::inv_pow2(n as u32);
    }
    h
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToyGap {
    pub k: usize,
    pub prefix: Vec<u8>,
    pub x: TernaryPoint,
    pub l: TernaryPoint,
    pub r: TernaryPoint,
    #[serde(with = "rational::serde_str::pair")]
    pub image_gap: (Rational, Rational),
    /// Average of `h` over `(l, r)`, a lower bound for `Mh(x)`.
    #[serde(with = "rational::serde_str")]
    pub average: Rational,
    pub average_exact: bool,
    /// `average >= h((8x + r)/9)`
    pub certified: bool,
}

/// The ball `(l, r)` around `x = (prefix, 1, 0, 0, ...)` and the image gap it forces.
pub fn toy_gap_construct(prefix: &[u8], k: usize) -> Result<ToyGap> {
    if k == 0 || prefix.len() != k - 1 {
        return Err(Error::InvalidArgument(format!("prefix of length {} does not fit K = {k}", prefix.len())));
    }
    let base = TernaryPoint::new(prefix.to_vec(), 0)?;
    let x = base.extended(&[1], 0);
    let l = base.extended(&[0], 1);
    let r = base.extended(&[1], 1);
    // (8x + r)/9 has digits (prefix, 1, 0, 0, 1, 1, ...)
    let q = base.extended(&[1, 0, 0], 1);
    let (xv, lv, rv) = (x.value(), l.value(), r.value());
    debug_assert_eq!((int(8) * &xv + &rv) / int(9), q.value());
    let centre = (&lv + &rv) / int(2);
    assert_eq!(centre, xv, "the ball (l, r) is centred at x");
    let radius = (&rv - &lv) / int(2);
    let f = MeasureSum::single(IFSMeasure::cantor());
    let avg = interval_average(&f, &xv, &radius, k + 4);
    let top = cantor_value(&q);
    Ok(ToyGap {
        k,
        prefix: prefix.to_vec(),
        image_gap: (cantor_value(&x), top.clone()),
        average: avg.lo.clone(),
        average_exact: avg.is_exact(),
        certified: avg.lo >= top,
        x,
        l,
        r,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternScan {
    #[serde(with = "rational::serde_str")]
    pub y: Rational,
    pub bits: Vec<u8>,
    /// 1-based starting positions of `(1, 0, 0)` within the window.
    pub positions: Vec<usize>,
    pub dyadic: bool,
}

/// First `window` binary digits of `y` and where `(1, 0, 0)` starts among them.
pub fn pattern_scan(y: &Rational, window: usize) -> Result<PatternScan> {
    if window < 3 {
        return Err(Error::InvalidArgument("window must be at least 3".into()));
    }
    if *y < Rational::zero() || *y > Rational::one() {
        return Err(Error::InvalidArgument(format!("{y} is outside [0, 1]")));
    }
    let mut bits = Vec::with_capacity(window);
    if *y == Rational::one() {
        bits.resize(window, 1);
    } else {
        let mut z = y.clone();
        for _ in 0..window {
            z *= int(2);
            if z >= Rational::one() {
                bits.push(1);
                z -= Rational::one();
            } else {
                bits.push(0);
            }
        }
    }
    let positions = bits.windows(3).enumerate().filter(|(_, w)| *w == [1, 0, 0]).map(|(i, _)| i + 1).collect();
    Ok(PatternScan { y: y.clone(), bits, positions, dyadic: is_dyadic(y) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub k_max: usize,
    pub gaps: Vec<ToyGap>,
    pub all_certified: bool,
    /// Every gap is the dyadic interval of its binary prefix `(prefix, 1, 0, 0)`.
    pub prefixes_match: bool,
    pub disjoint: bool,
    #[serde(with = "rational::serde_str")]
    pub covered_length: Rational,
    /// Mass of `y` whose first `K_max + 2` bits have no `(1, 0, 0)` starting at or before `K_max`.
    #[serde(with = "rational::serde_str")]
    pub residual: Rational,
    /// `(7/8)^floor(K_max / 3)`, from disjoint three-bit blocks.
    #[serde(with = "rational::serde_str")]
    pub block_bound: Rational,
}

fn has_pattern_before(bits: &[u8], end: usize) -> bool {
    (0..end).any(|i| i + 2 < bits.len() && bits[i..i + 3] == [1, 0, 0])
}

/// Toy gaps for every `K <= K_max`, keeping only the first occurrence of the
/// pattern so that the emitted gaps are disjoint.
pub fn excluded_interval_cover(k_max: usize) -> Result<CoverReport> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("K_max must be at least 1".into()));
    }
    let budget = node_budget();
    if k_max >= 63 || (1usize << k_max) > budget {
        return Err(Error::Budget { what: "excluded interval cover", budget });
    }
    let mut gaps = Vec::new();
    for k in 1..=k_max {
        for code in 0..(1usize << (k - 1)) {
            let prefix: Vec<u8> = (0..k - 1).map(|i| ((code >> (k - 2 - i)) & 1) as u8).collect();
            let mut word = prefix.clone();
            word.extend_from_slice(&[1, 0, 0]);
            if has_pattern_before(&word, k - 1) {
                continue;
            }
            gaps.push(toy_gap_construct(&prefix, k)?);
        }
    }
    gaps.sort_by(|a, b| a.image_gap.0.cmp(&b.image_gap.0));
    let prefixes_match = gaps.iter().all(|g| {
        let mut word = g.prefix.clone();
        word.extend_from_slice(&[1, 0, 0]);
        let lo: Rational = word.iter().enumerate().filter(|(_, b)| **b == 1).map(|(i, _)| rational::inv_pow2(i as u32 + 1)).sum();
        g.image_gap.0 == lo && &g.image_gap.1 - &g.image_gap.0 == rational::inv_pow2(word.len() as u32)
    });
    let disjoint = gaps.windows(2).all(|w| w[0].image_gap.1 <= w[1].image_gap.0);
    let covered_length: Rational = gaps.iter().map(|g| &g.image_gap.1 - &g.image_gap.0).sum();
    let residual = Rational::one() - &covered_length;
    let block_bound = rational::powi(&Rational::new(7.into(), 8.into()), (k_max / 3) as u32);
    Ok(CoverReport {
        k_max,
        all_certified: gaps.iter().all(|g| g.certified),
        gaps,
        prefixes_match,
        disjoint,
        covered_length,
        residual,
        block_bound,
    })
}

/// Brute-force count of `(K_max + 2)`-bit strings with no `(1, 0, 0)` starting at positions `1..=K_max`.
pub fn count_pattern_free(k_max: usize) -> u64 {
    let n = k_max + 2;
    (0u64..1 << n)
        .filter(|s| {
            let bits: Vec<u8> = (0..n).map(|i| ((s >> (n - 1 - i)) & 1) as u8).collect();
            !has_pattern_before(&bits, k_max)
        })
        .count() as u64
}

/// Membership in `{i 2^j}`.
pub fn is_dyadic(q: &Rational) -> bool {
    let d = q.denom();
    d.is_one() || (d.is_even() && (d & (d - BigInt::one())).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn point(prefix: &[u8], tail: u8) -> TernaryPoint {
        TernaryPoint::new(prefix.to_vec(), tail).unwrap()
    }

    #[test]
    fn values_of_anchor_points() {
        assert_eq!(point(&[1], 0).value(), rat(2, 3));
        assert_eq!(cantor_value(&point(&[1], 0)), rat(1, 2));
        let q = point(&[1, 0, 0], 1);
        assert_eq!(q.value(), rat(19, 27));
        assert_eq!(cantor_value(&q), rat(5, 8));
        assert_eq!(point(&[], 1).value(), int(1));
        assert_eq!(cantor_value(&point(&[], 1)), int(1));
    }

    #[test]
    fn digits_round_trip() {
        assert_eq!(TernaryPoint::from_rational(&rat(2, 3)).unwrap(), point(&[1], 0));
        assert_eq!(TernaryPoint::from_rational(&rat(1, 3)).unwrap(), point(&[0], 1));
        assert_eq!(TernaryPoint::from_rational(&rat(19, 27)).unwrap().value(), rat(19, 27));
        // 1/4 = 0.0202..._3 is in the set but never constant
        assert!(TernaryPoint::from_rational(&rat(1, 4)).is_err());
        assert!(TernaryPoint::from_rational(&rat(1, 2)).is_err());
    }

    #[test]
    fn first_toy_gaps() {
        let g = toy_gap_construct(&[], 1).unwrap();
        assert_eq!((g.x.value(), g.l.value(), g.r.value()), (rat(2, 3), rat(1, 3), int(1)));
        assert_eq!(g.image_gap, (rat(1, 2), rat(5, 8)));
        assert!(g.certified && g.average_exact);
        let g = toy_gap_construct(&[0], 2).unwrap();
        assert_eq!(g.x.value(), rat(2, 9));
        assert_eq!(g.image_gap, (rat(1, 4), rat(1, 4) + rat(1, 16)));
        assert!(toy_gap_construct(&[0, 1], 2).is_err());
    }

    #[test]
    fn pattern_positions() {
        // 9/16 = 0.1001000..._2
        assert_eq!(pattern_scan(&rat(9, 16), 5).unwrap().positions, vec![1]);
        let s = pattern_scan(&rat(9, 16), 8).unwrap();
        assert_eq!(s.positions, vec![1, 4]);
        assert!(s.dyadic);
        assert!(pattern_scan(&rat(1, 2), 4).unwrap().dyadic);
        let third = pattern_scan(&rat(1, 3), 64).unwrap();
        assert!(third.positions.is_empty() && !third.dyadic);
        assert!(pattern_scan(&rat(1, 3), 2).is_err());
    }

    #[test]
    fn smallest_cover() {
        let c = excluded_interval_cover(1).unwrap();
        assert_eq!(c.gaps.len(), 1);
        assert_eq!(c.covered_length, rat(1, 8));
        assert_eq!(c.residual * int(8), int(count_pattern_free(1) as i64));
    }

    #[test]
    fn dyadic_detection() {
        assert!(is_dyadic(&rat(3, 8)));
        assert!(is_dyadic(&int(1)));
        assert!(!is_dyadic(&rat(1, 6)));
    }
}
