//! Detachment at gap endpoints and the measure-shrinking recursion.
//!
//! Right of a gap `(a, b)` of the smallest-dimension support the average of
//! `g` over `[b - 2r, b + 2r]` beats `g(b)` by `mu([b, b + r]) / 8`, as long as
//! the other measures put little mass on `[b - 2r, b]`. Each such gap
//! therefore carves an interval out of `g(C)`, where `C` is the contact set.
//! Repeating inside what is left shrinks the image geometrically.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::covering::{gap_enumerate, vitali_select, Gap, OpenInterval};
use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::maximal::interval_average;
use crate::measures::{measure_sum_of_interval, node_budget, IFSMeasure, MeasureSum, DIMENSION_BRACKET_DEN};
use crate::rational::{self, int, rat, Rational};

/// Extra gap generations explored below the deepest cylinder containing an interval.
pub const DEFAULT_WINDOW: usize = 3;
/// Additional generations tried when a window yields too little image mass.
const MAX_EXTRA_GENERATIONS: usize = 8;

/// `(g(b), g(b) + mu([b, b + r]) / 8)` together with its certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapImageInterval {
    pub gap_index: usize,
    #[serde(with = "rational::serde_str")]
    pub b: Rational,
    #[serde(with = "rational::serde_str")]
    pub radius: Rational,
    pub lo: Enclosure,
    pub length: Enclosure,
    pub certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

impl GapImageInterval {
    /// Outer hull `[lo.lo, lo.hi + length.hi]`, used for disjointness and containment.
    pub fn outer(&self) -> (Rational, Rational) {
        (self.lo.lo.clone(), &self.lo.hi + &self.length.hi)
    }
}

/// Checks the detachment chain at the right endpoint `b` of `gap` with radius `r`.
///
/// Certified when `2r <= delta`, `mu([b, b+r]) >= 4 eta([b-2r, b])`,
/// `avg(b, 2r) >= g(b-2r)/2 + g(b)/4 + g(b+r)/4` and that chain in turn
/// is at least `g(b) + mu([b, b+r])/8`.
pub fn detachment_check(g: &MeasureSum, gap: &Gap, r: &Rational, delta: &Rational, depth: usize) -> Result<GapImageInterval> {
    let mu = g.smallest()?;
    let eta = g.rest();
    let b = &gap.b;
    assert!(r > &Rational::zero() && r <= &gap.radius(), "radius must lie in (0, r_i]");
    let two_r = int(2) * r;
    let mu_right = mu.measure_of_interval(b, &(b + r), depth);
    let length = mu_right.scale(&rat(1, 8));
    let g_b = g.cdf_eval(b, depth);
    let mut diagnostic = None;

    let in_range = two_r <= *delta;
    if !in_range {
        diagnostic = Some(format!("2r = {two_r} exceeds delta = {delta}"));
    }
    let eta_left = measure_sum_of_interval(&eta, &(b - &two_r), b, depth);
    let dominated = mu_right.lo >= int(4) * &eta_left.hi;
    if !dominated && diagnostic.is_none() {
        diagnostic = Some(format!("mu([b,b+r]) = {mu_right} not >= 4 eta([b-2r,b]) = 4 * {eta_left}"));
    }
    let avg = interval_average(g, b, &two_r, depth);
    let chain = g.cdf_eval(&(b - &two_r), depth).scale(&rat(1, 2))
        + g_b.scale(&rat(1, 4))
        + g.cdf_eval(&(b + r), depth).scale(&rat(1, 4));
    let first = avg.lo >= chain.hi;
    if !first && diagnostic.is_none() {
        diagnostic = Some(format!("average {avg} not above the monotone chain {chain}"));
    }
    let second = chain.lo >= &g_b.hi + &length.hi;
    if !second && diagnostic.is_none() {
        diagnostic = Some(format!("chain {chain} not above g(b) + length = {g_b} + {length}"));
    }
    Ok(GapImageInterval {
        gap_index: gap.index,
        b: b.clone(),
        radius: r.clone(),
        lo: g_b,
        length,
        certified: in_range && dominated && first && second,
        diagnostic,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImageFamily {
    pub interval: OpenInterval,
    pub gap_depth: usize,
    pub intervals: Vec<GapImageInterval>,
    pub all_certified: bool,
    pub disjoint: bool,
    pub contained: bool,
    /// Sum of the certified lengths.
    pub total_length: Enclosure,
    pub image_of_j: Enclosure,
}

impl ImageFamily {
    pub fn holds(&self) -> bool {
        self.all_certified && self.disjoint && self.contained
    }
}

fn pairwise_disjoint(mut hulls: Vec<(Rational, Rational)>) -> bool {
    hulls.sort();
    hulls.windows(2).all(|w| w[0].1 <= w[1].0)
}

/// Vitali-selected gap images inside `j`, each checked with its truncated radius.
pub fn gap_image_family(f: &MeasureSum, j: &OpenInterval, delta: &Rational, gap_depth: usize, depth: usize) -> Result<ImageFamily> {
    let mu = f.smallest()?;
    let gaps = gap_enumerate(mu, j, gap_depth)?;
    let selection = vitali_select(&gaps, j);
    let radii = selection.truncated_radii.clone().unwrap_or_default();
    let by_index: std::collections::BTreeMap<usize, &Gap> = gaps.iter().map(|g| (g.index, g)).collect();
    let intervals = selection
        .selected
        .iter()
        .zip(&radii)
        .map(|(i, r)| detachment_check(f, by_index[i], r, delta, depth))
        .collect::<Result<Vec<_>>>()?;
    let image_lo = f.cdf_eval(&j.lo, depth);
    let image_hi = f.cdf_eval(&j.hi, depth);
    let disjoint = pairwise_disjoint(intervals.iter().map(|i| i.outer()).collect());
    let contained = intervals.iter().all(|i| {
        let (lo, hi) = i.outer();
        lo >= image_lo.hi && hi <= image_hi.lo
    });
    let total_length = Enclosure::sum(intervals.iter().filter(|i| i.certified).map(|i| &i.length));
    Ok(ImageFamily {
        interval: j.clone(),
        gap_depth,
        all_certified: intervals.iter().all(|i| i.certified),
        intervals,
        disjoint,
        contained,
        total_length,
        image_of_j: Enclosure::new(image_lo.lo, image_hi.hi),
    })
}

/// Bracket of `coeff * C^-4 * 12^-d` for a measure.
pub fn shrink_constant(mu: &IFSMeasure, coeff: &Rational) -> Enclosure {
    let c = mu.regularity_constant();
    let c2 = c * c;
    let base = coeff / (&c2 * &c2);
    let (d_lo, d_hi) = mu.dimension().bracket(DIMENSION_BRACKET_DEN);
    let (lo, hi) = rational::pow_bracket(&rat(1, 12), &d_lo, &d_hi);
    Enclosure::new(&base * lo, &base * hi)
}

/// Depth of the deepest cylinder whose closure contains `j`.
pub fn generation_of(mu: &IFSMeasure, j: &OpenInterval) -> usize {
    mu.enclosing_cylinder(&j.lo, &j.hi).0
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RemovedInterval {
    /// Preimage `(b, x)` taken out of the surviving set.
    pub preimage: OpenInterval,
    /// Exact `f(x) - f(b)`.
    #[serde(with = "rational::serde_str")]
    pub image_length: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecursionLevel {
    pub level: usize,
    pub survivors: Vec<OpenInterval>,
    pub removed: Vec<RemovedInterval>,
    pub removed_mass: Enclosure,
    pub surviving_mass: Enclosure,
    /// `(1 - K)^L mu(I)` with `K` bracketed.
    pub bound: Enclosure,
    pub certified_gaps: usize,
    pub uncertified_gaps: usize,
    pub disjoint: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecursionReport {
    pub interval: OpenInterval,
    #[serde(with = "rational::serde_str")]
    pub delta: Rational,
    #[serde(with = "rational::serde_str")]
    pub regularity_constant: Rational,
    #[serde(rename = "K")]
    pub k: Enclosure,
    pub window: usize,
    pub initial_mass: Enclosure,
    pub levels: Vec<RecursionLevel>,
    pub holds: bool,
}

struct Processed {
    pieces: Vec<OpenInterval>,
    removed: Vec<RemovedInterval>,
    certified: usize,
    uncertified: usize,
    disjoint: bool,
}

fn shrink_once(f: &MeasureSum, j: &OpenInterval, delta: &Rational, k_hi: &Rational, window: usize, depth: usize) -> Result<Processed> {
    let mu = f.smallest()?;
    let mass_j = mu.measure_of_interval(&j.lo, &j.hi, depth);
    let start = generation_of(mu, j) + window;
    let mut family = gap_image_family(f, j, delta, start, depth)?;
    for gd in start + 1..=start + MAX_EXTRA_GENERATIONS {
        if family.total_length.lo >= k_hi * &mass_j.hi {
            break;
        }
        family = gap_image_family(f, j, delta, gd, depth)?;
    }
    let mut removed = Vec::new();
    for item in family.intervals.iter().filter(|i| i.certified) {
        let target = &item.lo.lo + &item.length.lo;
        let (x, fx) = mu.quantile_floor(&target, depth);
        if x > item.b {
            removed.push(RemovedInterval {
                image_length: &fx - &item.lo.lo,
                preimage: OpenInterval::new(item.b.clone(), x),
            });
        }
    }
    removed.sort_by(|a, b| a.preimage.lo.cmp(&b.preimage.lo));
    let mut pieces = Vec::new();
    let mut cursor = j.lo.clone();
    for r in &removed {
        pieces.push(OpenInterval::new(cursor.clone(), r.preimage.lo.clone()));
        cursor = r.preimage.hi.clone();
    }
    pieces.push(OpenInterval::new(cursor, j.hi.clone()));
    pieces.retain(|p| !p.is_empty() && !mu.measure_of_interval(&p.lo, &p.hi, depth).hi.is_zero());
    let certified = family.intervals.iter().filter(|i| i.certified).count();
    Ok(Processed {
        pieces,
        removed,
        certified,
        uncertified: family.intervals.len() - certified,
        disjoint: family.disjoint && family.contained,
    })
}

/// Runs `levels` rounds of gap removal on `i` for a single-measure `f`.
pub fn image_measure_bound(
    f: &MeasureSum,
    i: &OpenInterval,
    delta: &Rational,
    levels: usize,
    window: usize,
    depth: usize,
) -> Result<RecursionReport> {
    if f.member_count() != 1 {
        return Err(Error::UnsupportedSum("the recursion runs on a single measure".into()));
    }
    if i.length() > *delta {
        return Err(Error::InvalidArgument(format!("m(I) = {} exceeds delta = {delta}", i.length())));
    }
    let mu = f.smallest()?;
    let k = shrink_constant(mu, &rat(1, 32));
    let initial_mass = mu.measure_of_interval(&i.lo, &i.hi, depth);
    let budget = node_budget();
    let mut survivors = vec![i.clone()];
    if initial_mass.hi.is_zero() {
        survivors.clear();
    }
    let mut out = Vec::new();
    for level in 1..=levels {
        if survivors.len() > budget {
            return Err(Error::Budget { what: "recursion survivors", budget });
        }
        let processed = survivors
            .par_iter()
            .map(|j| shrink_once(f, j, delta, &k.hi, window, depth))
            .collect::<Result<Vec<_>>>()?;
        let mut next = Vec::new();
        let mut removed = Vec::new();
        let (mut certified, mut uncertified, mut disjoint) = (0, 0, true);
        for p in processed {
            next.extend(p.pieces);
            removed.extend(p.removed);
            certified += p.certified;
            uncertified += p.uncertified;
            disjoint &= p.disjoint;
        }
        let removed_mass = Enclosure::exact(removed.iter().map(|r| r.image_length.clone()).sum());
        let surviving_mass = Enclosure::sum(
            next.iter().map(|p| mu.measure_of_interval(&p.lo, &p.hi, depth)).collect::<Vec<_>>().iter(),
        );
        let one = Rational::one();
        let bound = Enclosure::new(
            rational::powi(&(&one - &k.hi), level as u32) * &initial_mass.lo,
            rational::powi(&(&one - &k.lo), level as u32) * &initial_mass.hi,
        );
        let holds = disjoint && surviving_mass.hi <= bound.hi;
        out.push(RecursionLevel {
            level,
            survivors: next.clone(),
            removed,
            removed_mass,
            surviving_mass,
            bound,
            certified_gaps: certified,
            uncertified_gaps: uncertified,
            disjoint,
            holds,
        });
        survivors = next;
    }
    let holds = out.iter().all(|l| l.holds);
    Ok(RecursionReport {
        interval: i.clone(),
        delta: delta.clone(),
        regularity_constant: mu.regularity_constant().clone(),
        k,
        window,
        initial_mass,
        levels: out,
        holds,
    })
}

/// Scale below which the smallest-dimension measure dominates the rest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Delta0Certificate {
    #[serde(with = "rational::serde_str")]
    pub delta0: Rational,
    /// `k` with `delta0 = 2^-k` for the global estimate.
    pub grid_exponent: Option<u32>,
    /// Ratio of the two sides of the sufficient condition at `delta0`.
    #[serde(with = "rational::serde_str")]
    pub margin: Rational,
    /// True when only valid for balls centred in a given interval.
    pub local: bool,
    pub spot_checks: usize,
    pub spot_failures: usize,
    pub verified: bool,
}

/// Descent depth used for exact spot checks at tiny radii.
pub const SPOT_DEPTH: usize = 96;
const DELTA0_GRID: u32 = 256;

/// Checks `mu([x-r, x+r]) >= 4 eta([x-2r, x+2r])`.
pub fn domination_holds(f: &MeasureSum, x: &Rational, r: &Rational, depth: usize) -> Result<bool> {
    let mu = f.smallest()?;
    let eta = f.rest();
    let left = mu.measure_of_interval(&(x - r), &(x + r), depth);
    let two_r = int(2) * r;
    let right = measure_sum_of_interval(&eta, &(x - &two_r), &(x + &two_r), depth);
    Ok(left.lo >= int(4) * right.hi)
}

/// Global `delta0` from the Ahlfors bounds, spot-checked at cylinder endpoints of the smallest support.
///
/// A radius `r` qualifies when `C^-1 r^d >= 4 sum_i C_i (4r)^{d_i}`; since the
/// smallest dimension is strictly below the rest, the condition persists for
/// all smaller radii.
pub fn delta0_estimate(f: &MeasureSum, depth: usize) -> Result<Delta0Certificate> {
    if f.classes().len() == 1 {
        if f.member_count() == 1 {
            return Ok(Delta0Certificate {
                delta0: Rational::one(),
                grid_exponent: Some(0),
                margin: Rational::one(),
                local: false,
                spot_checks: 0,
                spot_failures: 0,
                verified: true,
            });
        }
        return Err(Error::UnsupportedSum("all measures share one dimension".into()));
    }
    let mu = f.smallest()?;
    let eta = f.rest();
    let (d_lo, d_hi) = mu.dimension().bracket(DIMENSION_BRACKET_DEN);
    let c_mu = mu.regularity_constant().clone();
    let eta_consts: Vec<(Rational, Rational, Rational)> = eta
        .iter()
        .map(|m| {
            let (lo, hi) = m.dimension().bracket(DIMENSION_BRACKET_DEN);
            (m.regularity_constant().clone(), lo, hi)
        })
        .collect();
    let mut found = None;
    for k in 3..=DELTA0_GRID {
        let r = rational::inv_pow2(k);
        let (rd_lo, _) = rational::pow_bracket(&r, &d_lo, &d_hi);
        let lhs = rd_lo / &c_mu;
        let four_r = int(4) * &r;
        let rhs: Rational = eta_consts
            .iter()
            .map(|(c, lo, hi)| c * rational::pow_bracket(&four_r, lo, hi).1)
            .sum::<Rational>()
            * int(4);
        if lhs >= rhs {
            found = Some((k, r, lhs / rhs));
            break;
        }
    }
    let Some((k, delta0, margin)) = found else {
        return Err(Error::InvalidArgument(format!("no delta0 above 2^-{DELTA0_GRID}")));
    };
    let centres = mu.cylinder_endpoints(depth)?;
    let checks: Vec<bool> = centres
        .par_iter()
        .flat_map_iter(|x| {
            (0..4u32).map(move |j| (x.clone(), rational::inv_pow2(k + 3 * j)))
        })
        .map(|(x, r)| domination_holds(f, &x, &r, SPOT_DEPTH))
        .collect::<Result<Vec<_>>>()?;
    let failures = checks.iter().filter(|ok| !**ok).count();
    Ok(Delta0Certificate {
        delta0,
        grid_exponent: Some(k),
        margin,
        local: false,
        spot_checks: checks.len(),
        spot_failures: failures,
        verified: failures == 0,
    })
}

/// `delta0 = m(J)` for balls centred in `J`, valid when the other measures
/// vanish on the `2 m(J)` neighbourhood of `J`.
pub fn delta0_for_interval(f: &MeasureSum, j: &OpenInterval, depth: usize) -> Result<Option<Delta0Certificate>> {
    let eta = f.rest();
    let m = j.length();
    let reach = int(2) * &m;
    let around = measure_sum_of_interval(&eta, &(&j.lo - &reach), &(&j.hi + &reach), depth);
    if !around.hi.is_zero() {
        return Ok(None);
    }
    Ok(Some(Delta0Certificate {
        delta0: m,
        grid_exponent: None,
        margin: Rational::zero(),
        local: true,
        spot_checks: 0,
        spot_failures: 0,
        verified: true,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim1Report {
    pub interval: OpenInterval,
    #[serde(with = "rational::serde_str")]
    pub epsilon: Rational,
    pub splits: usize,
    pub pieces: Vec<OpenInterval>,
    pub mu_of_j: Enclosure,
    pub mu_of_pieces: Enclosure,
    /// Mass of the discarded pieces; exactly zero when preservation is certified.
    pub dropped_mu: Enclosure,
    pub eta_of_pieces: Enclosure,
    pub certified: bool,
}

/// Splits `j` into `L = 2, 4, 8, ...` equal pieces until the `mu`-positive ones
/// carry `eta`-mass at most `epsilon`.
pub fn inductive_claim1(f: &MeasureSum, j: &OpenInterval, epsilon: &Rational, depth: usize) -> Result<Claim1Report> {
    assert!(epsilon > &Rational::zero(), "epsilon must be positive");
    let mu = f.smallest()?;
    let eta = f.rest();
    let mu_of_j = mu.measure_of_interval(&j.lo, &j.hi, depth);
    let budget = node_budget();
    let mut splits = 2usize;
    loop {
        if splits > budget {
            return Err(Error::Budget { what: "claim-1 splitting", budget });
        }
        let step = j.length() / int(splits as i64);
        let points: Vec<Rational> = (0..=splits).map(|k| &j.lo + &step * int(k as i64)).collect();
        let mu_cdf: Vec<Enclosure> = points.par_iter().map(|x| mu.cdf_eval(x, depth)).collect();
        let mut kept = Vec::new();
        let mut dropped = Enclosure::zero();
        for k in 0..splits {
            let m = (&mu_cdf[k + 1] - &mu_cdf[k]).clamp_nonneg();
            if m.hi.is_zero() {
                dropped = &dropped + &m;
            } else {
                kept.push((k, m));
            }
        }
        let eta_masses: Vec<Enclosure> = kept
            .par_iter()
            .map(|(k, _)| measure_sum_of_interval(&eta, &points[*k], &points[k + 1], depth))
            .collect();
        let eta_total = Enclosure::sum(eta_masses.iter());
        let certified = dropped.hi.is_zero() && eta_total.hi <= *epsilon;
        if certified || eta.is_empty() {
            let mu_of_pieces = Enclosure::sum(kept.iter().map(|(_, m)| m));
            let pieces = kept.iter().map(|(k, _)| OpenInterval::new(points[*k].clone(), points[k + 1].clone())).collect();
            return Ok(Claim1Report {
                interval: j.clone(),
                epsilon: epsilon.clone(),
                splits,
                pieces,
                mu_of_j,
                mu_of_pieces,
                dropped_mu: dropped,
                eta_of_pieces: eta_total,
                certified,
            });
        }
        splits *= 2;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim2Piece {
    pub gap_index: usize,
    pub interval: OpenInterval,
    /// `mu((b, b + r~))`
    pub gap_side_mass: Enclosure,
    pub mu_mass: Enclosure,
    pub image_length: Enclosure,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim2Report {
    pub interval: OpenInterval,
    #[serde(with = "rational::serde_str")]
    pub delta: Rational,
    #[serde(rename = "K")]
    pub k: Enclosure,
    pub pieces: Vec<Claim2Piece>,
    pub mass: Enclosure,
    pub mu_of_j: Enclosure,
    pub disjoint: bool,
    pub contained: bool,
    pub holds: bool,
}

/// Largest `r'` in `(0, r]` with `f((b, b + r'))` at most `target`.
fn shrink_radius(f: &MeasureSum, mu: &IFSMeasure, eta: &[&IFSMeasure], b: &Rational, r: &Rational, target: &Rational, depth: usize) -> Rational {
    let eta_side = measure_sum_of_interval(eta, b, &(b + r), depth);
    if eta_side.hi.is_zero() {
        // only mu moves on (b, b + r): invert it directly
        let fb = mu.cdf_eval(b, depth);
        let (x, _) = mu.quantile_floor(&(&fb.lo + target), depth);
        return rational::min(&(&x - b), r);
    }
    let mut lo = Rational::zero();
    let mut hi = r.clone();
    for _ in 0..64 {
        let mid = (&lo + &hi) / int(2);
        if f.measure_of_interval(b, &(b + &mid), depth).hi <= *target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// The `1/16` bookkeeping of the inductive step on `j`, with `delta` at most `cert.delta0`.
pub fn inductive_claim2(
    f: &MeasureSum,
    j: &OpenInterval,
    delta: &Rational,
    cert: &Delta0Certificate,
    window: usize,
    depth: usize,
) -> Result<Claim2Report> {
    if j.length() > *delta || *delta > cert.delta0 {
        return Err(Error::InvalidArgument(format!(
            "need m(J) = {} <= delta = {delta} <= delta0 = {}",
            j.length(),
            cert.delta0
        )));
    }
    let mu = f.smallest()?;
    let eta = f.rest();
    let k = shrink_constant(mu, &rat(1, 64));
    let mu_of_j = mu.measure_of_interval(&j.lo, &j.hi, depth);
    if mu_of_j.hi.is_zero() {
        return Ok(Claim2Report {
            interval: j.clone(),
            delta: delta.clone(),
            k,
            pieces: Vec::new(),
            mass: Enclosure::zero(),
            mu_of_j,
            disjoint: true,
            contained: true,
            holds: true,
        });
    }
    let gap_depth = generation_of(mu, j) + window;
    let family = gap_image_family(f, j, delta, gap_depth, depth)?;
    let mut pieces = Vec::new();
    for item in &family.intervals {
        let b = &item.b;
        let side = mu.measure_of_interval(b, &(b + &item.radius), depth);
        let target = side.lo.clone() / int(8);
        let r_prime = shrink_radius(f, mu, &eta, b, &item.radius, &target, depth);
        let interval = OpenInterval::new(b.clone(), b + &r_prime);
        let mu_mass = mu.measure_of_interval(&interval.lo, &interval.hi, depth);
        let image_length = f.measure_of_interval(&interval.lo, &interval.hi, depth);
        let certified = item.certified && r_prime > Rational::zero() && &mu_mass.lo * int(16) >= side.hi;
        pieces.push(Claim2Piece { gap_index: item.gap_index, interval, gap_side_mass: side, mu_mass, image_length, certified });
    }
    let disjoint = pairwise_disjoint(pieces.iter().map(|p| (p.interval.lo.clone(), p.interval.hi.clone())).collect());
    let contained = pieces.iter().all(|p| p.interval.lo >= j.lo && p.interval.hi <= j.hi);
    let mass = Enclosure::sum(pieces.iter().filter(|p| p.certified).map(|p| &p.mu_mass));
    let holds = !pieces.is_empty()
        && pieces.iter().all(|p| p.certified)
        && disjoint
        && contained
        && mass.lo >= &k.hi * &mu_of_j.hi;
    Ok(Claim2Report { interval: j.clone(), delta: delta.clone(), k, pieces, mass, mu_of_j, disjoint, contained, holds })
}
