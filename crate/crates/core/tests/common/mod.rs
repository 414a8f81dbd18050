//! Independent oracles used to check the library from the outside.
#![allow(dead_code)]

use fracmax::{IFSMeasure, Rational};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn f64_of(x: &Rational) -> f64 {
    x.numer().to_f64().unwrap() / x.denom().to_f64().unwrap()
}

/// Bracket on `mu([a, b])` from a descent that only opens cylinders straddling an endpoint.
pub fn mass_bracket(mu: &IFSMeasure, a: &Rational, b: &Rational, depth: usize) -> (Rational, Rational) {
    #[allow(clippy::too_many_arguments)]
    fn walk(
        mu: &IFSMeasure,
        left: Rational,
        len: Rational,
        mass: Rational,
        a: &Rational,
        b: &Rational,
        depth: usize,
        acc: &mut (Rational, Rational),
    ) {
        let right = &left + &len;
        if right < *a || left > *b {
            return;
        }
        if *a <= left && right <= *b {
            acc.0 += &mass;
            acc.1 += &mass;
            return;
        }
        if depth == 0 {
            acc.1 += &mass;
            return;
        }
        for (m, p) in mu.maps().iter().zip(mu.weights()) {
            walk(mu, &left + &len * &m.t, &len * &m.rho, &mass * p, a, b, depth - 1, acc);
        }
    }
    let mut acc = (Rational::zero(), Rational::zero());
    if a <= b {
        walk(mu, Rational::zero(), Rational::one(), Rational::one(), a, b, depth, &mut acc);
    }
    acc
}

/// Bracket on the distribution function `mu([0, x])`.
pub fn cdf_bracket(mu: &IFSMeasure, x: &Rational, depth: usize) -> (Rational, Rational) {
    mass_bracket(mu, &qi(-1), x, depth)
}

/// Cantor function from the ternary digits of `x`: `(lo, hi)` with `hi - lo <= 2^-n`,
/// exact (`lo == hi`) once a digit 1 appears.
pub fn cantor_by_digits(x: &Rational, n: usize) -> (Rational, Rational) {
    if *x <= Rational::zero() {
        return (Rational::zero(), Rational::zero());
    }
    if *x >= Rational::one() {
        return (Rational::one(), Rational::one());
    }
    let mut y = x.clone();
    let mut lo = Rational::zero();
    let mut w = q(1, 2);
    for _ in 0..n {
        let t = &y * qi(3);
        let d = t.floor();
        y = &t - &d;
        if d == qi(1) {
            let v = &lo + &w;
            return (v.clone(), v);
        }
        if d == qi(2) {
            lo += &w;
        }
        w /= qi(2);
    }
    let hi = &lo + &w * qi(2);
    (lo, hi)
}

/// Distribution function of `mu` in floating point, accurate to `max_weight^depth`.
pub fn cdf_f64(mu: &IFSMeasure, x: f64, depth: usize) -> f64 {
    let maps: Vec<(f64, f64)> = mu.maps().iter().map(|m| (f64_of(&m.rho), f64_of(&m.t))).collect();
    let weights: Vec<f64> = mu.weights().iter().map(f64_of).collect();
    let (mut left, mut len, mut mass, mut acc) = (0.0f64, 1.0f64, 1.0f64, 0.0f64);
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    for _ in 0..depth {
        let mut next = None;
        for (k, &(rho, t)) in maps.iter().enumerate() {
            let l = left + len * t;
            if x < l {
                break;
            }
            if x <= l + len * rho {
                next = Some((l, rho, weights[k]));
                break;
            }
            acc += mass * weights[k];
        }
        match next {
            Some((l, rho, p)) => {
                left = l;
                len *= rho;
                mass *= p;
            }
            None => return acc,
        }
    }
    // depth exhausted inside a cylinder: interpolate linearly across it
    acc += mass * ((x - left) / len).clamp(0.0, 1.0);
    acc
}

/// Lower and upper Darboux sums for the average of `sum of F` over `(x - r, x + r)`.
pub fn average_darboux(measures: &[IFSMeasure], x: f64, r: f64, n: usize, depth: usize) -> (f64, f64) {
    let step = 2.0 * r / n as f64;
    let f = |t: f64| measures.iter().map(|m| cdf_f64(m, t, depth)).sum::<f64>();
    let mut values = Vec::with_capacity(n + 1);
    for k in 0..=n {
        values.push(f(x - r + step * k as f64));
    }
    let lower: f64 = values[..n].iter().sum::<f64>() / n as f64;
    let upper: f64 = values[1..].iter().sum::<f64>() / n as f64;
    (lower, upper)
}

/// Maximum overlap of open intervals, by counting at every midpoint between event coordinates.
pub fn multiplicity_oracle(intervals: &[(Rational, Rational)]) -> usize {
    let mut pts: Vec<Rational> = intervals.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect();
    pts.sort();
    pts.dedup();
    let mut best = 0;
    for w in pts.windows(2) {
        let mid = (&w[0] + &w[1]) / qi(2);
        let count = intervals.iter().filter(|(a, b)| *a < mid && mid < *b).count();
        best = best.max(count);
    }
    best
}

/// Whether two families of open intervals have the same union, probing every endpoint and elementary cell.
pub fn same_union(family: &[(Rational, Rational)], cover: &[(Rational, Rational)]) -> bool {
    let mut pts: Vec<Rational> =
        family.iter().chain(cover.iter()).flat_map(|(a, b)| [a.clone(), b.clone()]).collect();
    pts.sort();
    pts.dedup();
    let inside = |set: &[(Rational, Rational)], p: &Rational| set.iter().any(|(a, b)| a < p && p < b);
    let mut probes: Vec<Rational> = pts.clone();
    probes.extend(pts.windows(2).map(|w| (&w[0] + &w[1]) / qi(2)));
    probes.iter().all(|p| inside(family, p) == inside(cover, p))
}

pub fn pairwise_disjoint(intervals: &[(Rational, Rational)]) -> bool {
    for (i, (a, b)) in intervals.iter().enumerate() {
        for (c, d) in &intervals[i + 1..] {
            if a < d && c < b {
                return false;
            }
        }
    }
    true
}
