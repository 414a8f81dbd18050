//! Interval averages and certified maximal functions.
//!
//! `A(r) = (1/2r) int_{x-r}^{x+r} f` is evaluated exactly whenever both ends
//! of the ball fall where the descent terminates, and otherwise enclosed.
//! The supremum over radii is found by branch and bound on `r`; far out,
//! where the ball covers all of `[0, 1]`, `A` is an explicit hyperbola in `r`
//! and is maximised in closed form.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::measures::{node_budget, MeasureSum};
use crate::rational::{self, int, Rational};

/// Bounds on `sup_r A(r)` over a radius range.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaximalResult {
    pub value: Enclosure,
    /// Radius whose certified average attains `value.lo`. When the lower bound
    /// comes from the limit `A(r) -> f(x)` as `r -> 0`, this is the smallest
    /// radius examined and `limit_witness` is set.
    #[serde(with = "rational::serde_str")]
    pub witness_radius: Rational,
    pub limit_witness: bool,
    /// Largest admissible radius; `None` for an unbounded range.
    #[serde(with = "rational::serde_str::opt")]
    pub radius_bound: Option<Rational>,
    /// False when the node budget ran out before `hi - lo <= tol`.
    pub to_tolerance: bool,
    pub nodes: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ContactVerdict {
    Detached {
        #[serde(with = "rational::serde_str")]
        margin: Rational,
    },
    Undetermined,
}

impl ContactVerdict {
    pub fn is_detached(&self) -> bool {
        matches!(self, ContactVerdict::Detached { .. })
    }
}

/// Open interval whose endpoints may be infinite (`None`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restriction {
    pub lo: Option<Rational>,
    pub hi: Option<Rational>,
}

impl Restriction {
    pub fn new(lo: Option<Rational>, hi: Option<Rational>) -> Self {
        Self { lo, hi }
    }

    pub fn whole_line() -> Self {
        Self { lo: None, hi: None }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo.as_ref().is_none_or(|a| a < x) && self.hi.as_ref().is_none_or(|b| x < b)
    }
}

impl std::fmt::Display for Restriction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let lo = self.lo.as_ref().map_or("-inf".to_string(), |q| q.to_string());
        let hi = self.hi.as_ref().map_or("inf".to_string(), |q| q.to_string());
        write!(f, "({lo}, {hi})")
    }
}

/// Enclosure of the average of `f` over `(x - r, x + r)`.
pub fn interval_average(f: &MeasureSum, x: &Rational, r: &Rational, depth: usize) -> Enclosure {
    assert!(r > &Rational::zero(), "radius must be positive");
    let integral = (f.eval_point(&(x + r), depth).integral - f.eval_point(&(x - r), depth).integral).clamp_nonneg();
    integral.scale(&(Rational::one() / (int(2) * r)))
}

struct RadiusEval {
    r: Rational,
    integral: Enclosure,
    f_plus: Enclosure,
    f_minus: Enclosure,
}

struct Search<'a> {
    f: &'a MeasureSum,
    x: Rational,
    depth: usize,
    tol_f64: f64,
    nodes: usize,
    best: Rational,
    best_r: Rational,
    best_is_limit: bool,
}

impl Search<'_> {
    fn eval(&mut self, r: &Rational) -> RadiusEval {
        self.nodes += 1;
        let width = self.tol_f64 * rational::to_f64(r) / 8.0;
        let depth = self.depth.max(self.f.depth_for_integral_width(width));
        let plus = self.f.eval_point(&(&self.x + r), depth);
        let minus = self.f.eval_point(&(&self.x - r), depth);
        let integral = (plus.integral - minus.integral).clamp_nonneg();
        let avg = integral.scale(&(Rational::one() / (int(2) * r)));
        self.offer(&avg.lo, r, false);
        RadiusEval { r: r.clone(), integral, f_plus: plus.cdf, f_minus: minus.cdf }
    }

    fn offer(&mut self, value: &Rational, r: &Rational, limit: bool) {
        let better = match value.cmp(&self.best) {
            Ordering::Greater => true,
            Ordering::Equal => !limit && (self.best_is_limit || *r < self.best_r),
            Ordering::Less => false,
        };
        if better {
            self.best = value.clone();
            self.best_r = r.clone();
            self.best_is_limit = limit;
        }
    }
}

/// Radius cell `[a.r, b.r]`; `a` is `None` for the floor cell `(0, b.r]`.
struct Cell {
    upper: Rational,
    seq: usize,
    a: Option<std::sync::Arc<RadiusEval>>,
    b: std::sync::Arc<RadiusEval>,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.upper.cmp(&other.upper).then_with(|| other.seq.cmp(&self.seq))
    }
}

fn cell_upper(a: Option<&RadiusEval>, b: &RadiusEval) -> Rational {
    let Some(a) = a else {
        // A(r) <= f(x + r) <= f(x + b) since f is nondecreasing
        return b.f_plus.hi.clone();
    };
    let two = int(2);
    let span = &b.r - &a.r;
    // grow from the inner radius: the annulus adds at most f(x+b) + f(x-a) per unit
    let s = &b.f_plus.hi + &a.f_minus.hi;
    let u1 = rational::max(
        &(&a.integral.hi / (&two * &a.r)),
        &((&a.integral.hi + &span * &s) / (&two * &b.r)),
    );
    // shrink from the outer radius: the annulus removes at least f(x+a) + f(x-b) per unit
    let s = &a.f_plus.lo + &b.f_minus.lo;
    let u2 = rational::max(
        &((&b.integral.hi - &span * &s) / (&two * &a.r)),
        &(&b.integral.hi / (&two * &b.r)),
    );
    rational::min(&u1, &u2)
}

/// Core search over `r in (0, bound]`, or `(0, inf)` when `bound` is `None`.
fn maximal_search(f: &MeasureSum, x: &Rational, bound: Option<&Rational>, tol: &Rational, depth: usize) -> MaximalResult {
    assert!(tol > &Rational::zero(), "tol must be positive");
    let n = f.total_mass();
    let tol_f64 = rational::to_f64(tol);
    let fx = f.cdf_eval(x, depth.max(f.depth_for_cdf_width(tol_f64 / 4.0)));
    let mut s = Search {
        f,
        x: x.clone(),
        depth,
        tol_f64,
        nodes: 0,
        best: fx.lo.clone(),
        best_r: Rational::zero(),
        best_is_limit: true,
    };
    // beyond `full` the ball covers [0, 1] and A(r) = n/2 + c/(2r)
    let full = rational::max(x, &(Rational::one() - x));
    let mut tail_upper = Rational::zero();
    let search_top = match bound {
        Some(b) if *b <= full => b.clone(),
        _ => {
            let c = f.unit_integral() + &n * (x - Rational::one());
            let half = &n / int(2);
            let at = |r: &Rational| &half + &c / (int(2) * r);
            if c >= Rational::zero() {
                tail_upper = at(&full);
                s.offer(&tail_upper.clone(), &full, false);
            } else {
                match bound {
                    Some(b) => {
                        tail_upper = at(b);
                        s.offer(&tail_upper.clone(), b, false);
                    }
                    None => {
                        tail_upper = half.clone();
                        s.offer(&half, &full, true);
                    }
                }
            }
            full.clone()
        }
    };

    let floor = tol / (int(4) * &n);
    let mut radii = vec![search_top.clone()];
    while radii.last().unwrap() > &floor {
        let next = radii.last().unwrap() / int(2);
        radii.push(next);
    }
    radii.reverse();
    let evals: Vec<std::sync::Arc<RadiusEval>> = radii.iter().map(|r| std::sync::Arc::new(s.eval(r))).collect();

    let mut seq = 0;
    let mut heap = BinaryHeap::new();
    let mut push = |heap: &mut BinaryHeap<Cell>, a: Option<std::sync::Arc<RadiusEval>>, b: std::sync::Arc<RadiusEval>| {
        let upper = cell_upper(a.as_deref(), &b);
        seq += 1;
        heap.push(Cell { upper, seq, a, b });
    };
    push(&mut heap, None, evals[0].clone());
    for w in evals.windows(2) {
        push(&mut heap, Some(w[0].clone()), w[1].clone());
    }

    let budget = node_budget();
    let mut to_tolerance = true;
    let upper = loop {
        let Some(top) = heap.peek() else { break s.best.clone() };
        if top.upper <= s.best || &top.upper - &s.best <= *tol {
            break rational::max(&top.upper, &s.best);
        }
        if s.nodes >= budget {
            to_tolerance = false;
            break top.upper.clone();
        }
        let cell = heap.pop().unwrap();
        match cell.a {
            None => {
                let mid = std::sync::Arc::new(s.eval(&(&cell.b.r / int(2))));
                push(&mut heap, None, mid.clone());
                push(&mut heap, Some(mid), cell.b);
            }
            Some(a) => {
                let mid = std::sync::Arc::new(s.eval(&((&a.r + &cell.b.r) / int(2))));
                push(&mut heap, Some(a), mid.clone());
                push(&mut heap, Some(mid), cell.b);
            }
        }
    };
    let hi = rational::max(&upper, &tail_upper);
    let hi = rational::max(&hi, &s.best);
    let witness_radius = if s.best_is_limit && s.best_r.is_zero() { floor } else { s.best_r.clone() };
    MaximalResult {
        value: Enclosure::new(s.best.clone(), hi),
        witness_radius,
        limit_witness: s.best_is_limit,
        radius_bound: bound.cloned(),
        to_tolerance,
        nodes: s.nodes,
    }
}

/// `M_delta f(x) = sup_{r in (0, delta]} A(r)`, enclosed to width `tol` unless the budget runs out.
pub fn maximal_local(f: &MeasureSum, x: &Rational, delta: &Rational, tol: &Rational, depth: usize) -> MaximalResult {
    assert!(delta > &Rational::zero(), "delta must be positive");
    maximal_search(f, x, Some(delta), tol, depth)
}

/// `M_I f(x)`: the supremum over balls inside the open interval `I`.
pub fn maximal_restricted(
    f: &MeasureSum,
    x: &Rational,
    interval: &Restriction,
    tol: &Rational,
    depth: usize,
) -> Result<MaximalResult> {
    if !interval.contains(x) {
        return Err(Error::NotInInterval { x: x.to_string(), interval: interval.to_string() });
    }
    let left = interval.lo.as_ref().map(|a| x - a);
    let right = interval.hi.as_ref().map(|b| b - x);
    let bound = match (left, right) {
        (Some(l), Some(r)) => Some(rational::min(&l, &r)),
        (Some(l), None) => Some(l),
        (None, Some(r)) => Some(r),
        (None, None) => None,
    };
    Ok(maximal_search(f, x, bound.as_ref(), tol, depth))
}

/// Verdict from a maximal enclosure and an enclosure of `f(x)`.
pub fn verdict(result: &MaximalResult, fx: &Enclosure) -> ContactVerdict {
    let margin = &result.value.lo - &fx.hi;
    if margin > Rational::zero() {
        ContactVerdict::Detached { margin }
    } else {
        ContactVerdict::Undetermined
    }
}

/// Certifies `M_delta f(x) - f(x) >= margin > 0`, or reports that no margin was found at resolution `tol`.
pub fn contact_classify(f: &MeasureSum, x: &Rational, delta: &Rational, tol: &Rational, depth: usize) -> ContactVerdict {
    let result = maximal_local(f, x, delta, tol, depth);
    let fx = f.cdf_eval(x, depth.max(f.depth_for_cdf_width(rational::to_f64(tol) / 4.0)));
    verdict(&result, &fx)
}
