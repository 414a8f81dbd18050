//! Complementary gaps of IFS supports and the two interval selections built on them.

use std::collections::VecDeque;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::measures::{node_budget, IFSMeasure, DIMENSION_BRACKET_DEN};
use crate::rational::{self, int, rat, Rational};

/// Open interval `(lo, hi)` with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct OpenInterval {
    #[serde(with = "rational::serde_str")]
    pub lo: Rational,
    #[serde(with = "rational::serde_str")]
    pub hi: Rational,
}

impl OpenInterval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval with lo > hi");
        Self { lo, hi }
    }

    pub fn unit() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo < *x && *x < self.hi
    }

    pub fn is_empty(&self) -> bool {
        self.lo >= self.hi
    }
}

impl std::fmt::Display for OpenInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// Complementary interval `(a, b)` of the support, or an arbitrary interval
/// `(c - r, c + r)` fed to a selection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Gap {
    pub index: usize,
    #[serde(with = "rational::serde_str")]
    pub a: Rational,
    #[serde(with = "rational::serde_str")]
    pub b: Rational,
    pub depth_discovered: usize,
}

impl Gap {
    pub fn new(index: usize, a: Rational, b: Rational, depth_discovered: usize) -> Self {
        assert!(a < b, "gap must have positive length");
        Self { index, a, b, depth_discovered }
    }

    pub fn center(&self) -> Rational {
        (&self.a + &self.b) / int(2)
    }

    pub fn radius(&self) -> Rational {
        (&self.b - &self.a) / int(2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionKind {
    Besicovitch,
    Vitali,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelectionResult {
    /// Gap indices, in the order the intervals appear left to right.
    pub selected: Vec<usize>,
    pub kind: SelectionKind,
    /// `r~_i`, aligned with `selected` (Vitali only).
    #[serde(serialize_with = "serialize_opt_vec")]
    pub truncated_radii: Option<Vec<Rational>>,
}

fn serialize_opt_vec<S: serde::Serializer>(v: &Option<Vec<Rational>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => rational::serde_str::vec::serialize(v, s),
        None => s.serialize_none(),
    }
}

/// Gaps of generation at most `depth` lying inside `j`, left to right.
///
/// Generation `k` gaps separate consecutive children of a depth `k - 1`
/// cylinder. Indices follow breadth-first discovery.
pub fn gap_enumerate(mu: &IFSMeasure, j: &OpenInterval, depth: usize) -> Result<Vec<Gap>> {
    let budget = node_budget();
    let mut out = Vec::new();
    let mut queue: VecDeque<(Rational, Rational, usize)> = VecDeque::new();
    queue.push_back((Rational::zero(), Rational::one(), 0));
    let mut visited = 0usize;
    while let Some((left, len, level)) = queue.pop_front() {
        if level >= depth {
            continue;
        }
        visited += 1;
        if visited > budget {
            return Err(Error::Budget { what: "gap enumeration", budget });
        }
        let mut prev_end: Option<Rational> = None;
        for map in mu.maps() {
            let lo = &left + &len * &map.t;
            let child_len = &len * &map.rho;
            let hi = &lo + &child_len;
            if let Some(a) = prev_end.take() {
                if j.lo <= a && lo <= j.hi {
                    let index = out.len();
                    out.push(Gap::new(index, a, lo.clone(), level + 1));
                }
            }
            // closed child meets the open interval
            if lo < j.hi && hi > j.lo {
                queue.push_back((lo.clone(), child_len, level + 1));
            }
            prev_end = Some(hi);
        }
    }
    out.sort_by(|x, y| x.a.cmp(&y.a));
    Ok(out)
}

/// Subfamily of the intervals `(b_i - r_i, b_i + r_i)` with the same union and
/// overlap multiplicity at most 2.
///
/// Greedy minimal cover: within each connected component, repeatedly take the
/// interval starting before the covered frontier that reaches furthest right.
pub fn besicovitch_select(family: &[Gap]) -> SelectionResult {
    let mut items: Vec<(Rational, Rational, usize)> = family
        .iter()
        .map(|g| {
            let r = g.radius();
            (&g.b - &r, &g.b + &r, g.index)
        })
        .collect();
    items.sort_by(|x, y| x.0.cmp(&y.0).then_with(|| y.1.cmp(&x.1)).then_with(|| x.2.cmp(&y.2)));
    let mut selected = Vec::new();
    let mut i = 0;
    while i < items.len() {
        // start a component at the leftmost remaining interval, longest first
        let (_, mut frontier, idx) = items[i].clone();
        selected.push(idx);
        i += 1;
        loop {
            let mut best: Option<usize> = None;
            while i < items.len() && items[i].0 < frontier {
                if items[i].1 > frontier && best.is_none_or(|b| items[i].1 > items[b].1) {
                    best = Some(i);
                }
                i += 1;
            }
            match best {
                Some(b) => {
                    frontier = items[b].1.clone();
                    selected.push(items[b].2);
                }
                None => break,
            }
        }
    }
    SelectionResult { selected, kind: SelectionKind::Besicovitch, truncated_radii: None }
}

/// `r~_i = min(r_i, beta - b_i)`; nonpositive values mean the gap contributes nothing.
pub fn truncated_radius(g: &Gap, j: &OpenInterval) -> Rational {
    rational::min(&g.radius(), &(&j.hi - &g.b))
}

/// Greedy Vitali selection of the intervals `(b_i - r~_i, b_i + r~_i)`: largest
/// radius first, discarding anything meeting an earlier choice.
pub fn vitali_select(family: &[Gap], j: &OpenInterval) -> SelectionResult {
    let mut items: Vec<(Rational, &Gap)> = family
        .iter()
        .map(|g| (truncated_radius(g, j), g))
        .filter(|(r, _)| *r > Rational::zero())
        .collect();
    items.sort_by(|x, y| y.0.cmp(&x.0).then_with(|| x.1.index.cmp(&y.1.index)));
    let mut chosen: Vec<(Rational, Rational, usize, Rational)> = Vec::new();
    for (r, g) in items {
        let lo = &g.b - &r;
        let hi = &g.b + &r;
        if chosen.iter().all(|(l, h, _, _)| hi <= *l || *h <= lo) {
            chosen.push((lo, hi, g.index, r));
        }
    }
    chosen.sort_by(|x, y| x.0.cmp(&y.0));
    let (selected, radii) = chosen.into_iter().map(|(_, _, i, r)| (i, r)).unzip();
    SelectionResult { selected, kind: SelectionKind::Vitali, truncated_radii: Some(radii) }
}

/// Merges closed intervals into disjoint, sorted pieces.
pub fn merge_intervals(mut pieces: Vec<(Rational, Rational)>) -> Vec<(Rational, Rational)> {
    pieces.retain(|(a, b)| a < b);
    pieces.sort();
    let mut out: Vec<(Rational, Rational)> = Vec::new();
    for (a, b) in pieces {
        match out.last_mut() {
            Some(last) if a <= last.1 => {
                if b > last.1 {
                    last.1 = b;
                }
            }
            _ => out.push((a, b)),
        }
    }
    out
}

/// `mu` of a union of intervals.
pub fn measure_of_union(mu: &IFSMeasure, pieces: Vec<(Rational, Rational)>, depth: usize) -> Enclosure {
    let merged = merge_intervals(pieces);
    Enclosure::sum(merged.iter().map(|(a, b)| mu.measure_of_interval(a, b, depth)).collect::<Vec<_>>().iter())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityReport {
    pub interval: OpenInterval,
    pub gaps: usize,
    pub lhs: Enclosure,
    /// Unfavourable end of the bracketed right-hand side.
    #[serde(with = "rational::serde_str")]
    pub rhs: Rational,
    pub measure_of_j: Enclosure,
    pub selection: SelectionResult,
    /// Vitali parts pairwise disjoint (always true for the first lemma).
    pub disjoint: bool,
    pub holds: bool,
}

/// Descent depth for masses in the density checks.
fn mass_depth(depth: usize) -> usize {
    depth + 24
}

/// Upper end of `c * base^(-d)` with the dimension bracketed.
fn scaled_inverse_power(mu: &IFSMeasure, base: i64, c: &Rational) -> Rational {
    let (d_lo, d_hi) = mu.dimension().bracket(DIMENSION_BRACKET_DEN);
    let (_, hi) = rational::pow_bracket(&rat(1, base), &d_lo, &d_hi);
    c * hi
}

/// `mu(U (b_i, b_i + r_i) cap J) >= (1/2) C^-2 4^-d mu(J)` over gaps of generation `<= depth` in `J`.
pub fn density_check_l1(mu: &IFSMeasure, j: &OpenInterval, depth: usize) -> Result<DensityReport> {
    let gaps = gap_enumerate(mu, j, depth)?;
    let md = mass_depth(depth);
    let measure_of_j = mu.measure_of_interval(&j.lo, &j.hi, md);
    let pieces = gaps.iter().map(|g| (g.b.clone(), rational::min(&(&g.b + g.radius()), &j.hi))).collect();
    let lhs = measure_of_union(mu, pieces, md);
    let c = mu.regularity_constant();
    let coeff = rat(1, 2) / (c * c);
    let rhs = scaled_inverse_power(mu, 4, &coeff) * &measure_of_j.hi;
    let holds = measure_of_j.hi.is_zero() || lhs.lo >= rhs;
    Ok(DensityReport {
        interval: j.clone(),
        gaps: gaps.len(),
        lhs,
        rhs,
        measure_of_j,
        selection: besicovitch_select(&gaps),
        disjoint: true,
        holds,
    })
}

/// `mu(U_{Vitali} (b_i - r~_i, b_i + r~_i)) >= (1/2) C^-4 12^-d mu(J)`.
pub fn density_check_l2(mu: &IFSMeasure, j: &OpenInterval, depth: usize) -> Result<DensityReport> {
    let gaps = gap_enumerate(mu, j, depth)?;
    let md = mass_depth(depth);
    let measure_of_j = mu.measure_of_interval(&j.lo, &j.hi, md);
    let selection = vitali_select(&gaps, j);
    let by_index: std::collections::BTreeMap<usize, &Gap> = gaps.iter().map(|g| (g.index, g)).collect();
    let radii = selection.truncated_radii.as_ref().expect("vitali radii");
    let parts: Vec<(Rational, Rational)> =
        selection.selected.iter().zip(radii).map(|(i, r)| (by_index[i].b.clone(), &by_index[i].b + r)).collect();
    let disjoint = parts.windows(2).all(|w| w[0].1 <= w[1].0);
    let balls = selection.selected.iter().zip(radii).map(|(i, r)| (&by_index[i].b - r, &by_index[i].b + r)).collect();
    let lhs = measure_of_union(mu, balls, md);
    let c = mu.regularity_constant();
    let c2 = c * c;
    let coeff = rat(1, 2) / (&c2 * &c2);
    let rhs = scaled_inverse_power(mu, 12, &coeff) * &measure_of_j.hi;
    let holds = disjoint && (measure_of_j.hi.is_zero() || lhs.lo >= rhs);
    Ok(DensityReport { interval: j.clone(), gaps: gaps.len(), lhs, rhs, measure_of_j, selection, disjoint, holds })
}
