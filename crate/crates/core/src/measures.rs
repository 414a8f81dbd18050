//! Self-similar measures on `[0, 1]` and their cumulative distribution functions.
//!
//! An [`IFSMeasure`] is the invariant measure of finitely many strongly
//! separated affine contractions `S_j(x) = rho_j x + t_j` with weights
//! `p_j = rho_j^d`. Everything about it is evaluated by descending the
//! cylinder tree with exact rational arithmetic: the descent stops with an
//! exact answer as soon as the point falls into a complementary gap or onto
//! a cylinder endpoint, and otherwise returns an enclosure whose width is the
//! mass of the deepest cylinder reached.
//!
//! Integrals of the distribution function are exact over whole cylinders,
//! because self-similarity gives `int_0^1 F = 1 - mean(mu)` with
//! `mean(mu) = sum p_j t_j / (1 - sum p_j rho_j)`. Only the partial cylinder
//! left at the depth cutoff is bounded, by Darboux sums of the monotone `F`.

use std::cmp::Ordering;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dimension::Dimension;
use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::rational::{self, int, rat, Rational};

/// Depth used when a measure estimates its own Ahlfors constant on first use.
pub const DEFAULT_AHLFORS_DEPTH: usize = 8;
/// Default descent depth for evaluations.
pub const DEFAULT_DEPTH: usize = 12;
/// Hard cap on any adaptive descent.
pub const MAX_DEPTH: usize = 512;
/// Radii per scale period in the Ahlfors estimate.
const AHLFORS_RADII: u32 = 64;
/// Denominator bound of the rational brackets of `d`.
pub const DIMENSION_BRACKET_DEN: u32 = 64;

/// Search-node budget, overridable through `FM_NODE_BUDGET`.
pub fn node_budget() -> usize {
    static BUDGET: OnceLock<usize> = OnceLock::new();
    *BUDGET.get_or_init(|| {
        std::env::var("FM_NODE_BUDGET").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(4_000_000)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineMap {
    #[serde(with = "rational::serde_str")]
    pub rho: Rational,
    #[serde(with = "rational::serde_str")]
    pub t: Rational,
}

impl AffineMap {
    pub fn apply(&self, x: &Rational) -> Rational {
        &self.rho * x + &self.t
    }

    pub fn image_end(&self) -> Rational {
        &self.t + &self.rho
    }
}

/// Image of `[0, 1]` under a finite composition of the maps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CylinderInterval {
    pub word: Vec<usize>,
    #[serde(with = "rational::serde_str")]
    pub left: Rational,
    #[serde(with = "rational::serde_str")]
    pub right: Rational,
    #[serde(with = "rational::serde_str")]
    pub mass: Rational,
}

impl CylinderInterval {
    pub fn length(&self) -> Rational {
        &self.right - &self.left
    }
}

/// `F(x)` together with `G(x) = int_0^x F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointEval {
    pub cdf: Enclosure,
    pub integral: Enclosure,
}

impl PointEval {
    fn exact(f: Rational, g: Rational) -> Self {
        Self { cdf: Enclosure::exact(f), integral: Enclosure::exact(g) }
    }
}

#[derive(Clone, Debug)]
pub struct IFSMeasure {
    name: Option<String>,
    maps: Vec<AffineMap>,
    weights: Vec<Rational>,
    /// `prefix[j] = p_0 + ... + p_{j-1}`
    prefix: Vec<Rational>,
    dimension: Dimension,
    /// `int_0^1 F`
    unit_integral: Rational,
    max_weight: f64,
    max_cell: f64,
    constant: OnceLock<Rational>,
}

impl PartialEq for IFSMeasure {
    fn eq(&self, other: &Self) -> bool {
        self.maps == other.maps && self.weights == other.weights
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapSpec {
    #[serde(with = "rational::serde_str")]
    rho: Rational,
    #[serde(with = "rational::serde_str")]
    t: Rational,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasureSpec {
    #[serde(default)]
    name: Option<String>,
    maps: Vec<MapSpec>,
    #[serde(with = "rational::serde_str::vec")]
    weights: Vec<Rational>,
}

/// Parses the JSON measure-spec format:
/// `{"maps": [{"rho": "1/3", "t": "0"}, ...], "weights": ["1/2", ...]}`.
pub fn parse_measure(text: &str) -> Result<IFSMeasure> {
    let spec: MeasureSpec = serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        if msg.contains("malformed rational") {
            Error::MalformedRational(msg)
        } else {
            Error::InvalidSpec(msg)
        }
    })?;
    let maps = spec.maps.into_iter().map(|m| AffineMap { rho: m.rho, t: m.t }).collect();
    let mut measure = IFSMeasure::new(maps, spec.weights)?;
    measure.name = spec.name;
    Ok(measure)
}

impl IFSMeasure {
    pub fn new(maps: Vec<AffineMap>, weights: Vec<Rational>) -> Result<Self> {
        if maps.len() != weights.len() {
            return Err(Error::InvalidSpec(format!("{} maps but {} weights", maps.len(), weights.len())));
        }
        if maps.len() < 2 {
            return Err(Error::InvalidSpec("at least two maps are required".into()));
        }
        let zero = Rational::zero();
        let one = Rational::one();
        for (m, p) in maps.iter().zip(&weights) {
            if !(m.rho > zero && m.rho < one) {
                return Err(Error::InvalidSpec(format!("contraction ratio {} not in (0,1)", m.rho)));
            }
            if *p <= zero {
                return Err(Error::InvalidSpec(format!("weight {p} is not positive")));
            }
        }
        let total: Rational = weights.iter().sum();
        if total != one {
            return Err(Error::WeightSum(total.to_string()));
        }
        let mut pairs: Vec<_> = maps.into_iter().zip(weights).collect();
        pairs.sort_by(|a, b| a.0.t.cmp(&b.0.t));
        let (maps, weights): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();

        if maps[0].t < zero || maps.last().unwrap().image_end() > one {
            return Err(Error::InvalidSpec("images must lie inside [0,1]".into()));
        }
        for w in maps.windows(2) {
            if w[0].image_end() >= w[1].t {
                return Err(Error::SeparationViolated(
                    format!("{}, {}", w[0].t, w[0].image_end()),
                    format!("{}, {}", w[1].t, w[1].image_end()),
                ));
            }
        }
        if maps[0].t != zero || maps.last().unwrap().image_end() != one {
            return Err(Error::InvalidSpec(
                "the first image must start at 0 and the last must end at 1".into(),
            ));
        }

        let dimension = Dimension::from_pair(&maps[0].rho, &weights[0])?;
        for (m, p) in maps.iter().zip(&weights).skip(1) {
            let d = Dimension::from_pair(&m.rho, p)?;
            if !d.same_as(&dimension) {
                return Err(Error::InconsistentDimension(format!(
                    "map with rho = {} and p = {} has dimension {d}, expected {dimension}",
                    m.rho, p
                )));
            }
        }

        let mut prefix = Vec::with_capacity(weights.len());
        let mut acc = Rational::zero();
        for p in &weights {
            prefix.push(acc.clone());
            acc += p;
        }
        let moment: Rational = maps.iter().zip(&weights).map(|(m, p)| p * &m.t).sum();
        let contraction: Rational = maps.iter().zip(&weights).map(|(m, p)| p * &m.rho).sum();
        let mean = moment / (&one - contraction);
        let unit_integral = &one - mean;

        let max_weight = weights.iter().map(rational::to_f64).fold(0.0, f64::max);
        let max_cell = maps.iter().zip(&weights).map(|(m, p)| rational::to_f64(&(&m.rho * p))).fold(0.0, f64::max);

        Ok(Self {
            name: None,
            maps,
            weights,
            prefix,
            dimension,
            unit_integral,
            max_weight,
            max_cell,
            constant: OnceLock::new(),
        })
    }

    /// The ternary Cantor measure.
    pub fn cantor() -> Self {
        let maps = vec![AffineMap { rho: rat(1, 3), t: int(0) }, AffineMap { rho: rat(1, 3), t: rat(2, 3) }];
        let mut m = Self::new(maps, vec![rat(1, 2), rat(1, 2)]).expect("valid");
        m.name = Some("cantor".into());
        m
    }

    /// Two maps of ratio 1/4 at the ends of `[0,1]`; dimension exactly 1/2.
    pub fn quarter_cantor() -> Self {
        let maps = vec![AffineMap { rho: rat(1, 4), t: int(0) }, AffineMap { rho: rat(1, 4), t: rat(3, 4) }];
        let mut m = Self::new(maps, vec![rat(1, 2), rat(1, 2)]).expect("valid");
        m.name = Some("quarter-cantor".into());
        m
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Replaces the estimated Ahlfors constant.
    pub fn with_regularity_constant(self, c: Rational) -> Self {
        let constant = OnceLock::new();
        let _ = constant.set(c);
        Self { constant, ..self }
    }

    pub fn name(&self) -> &str {
        self.name.as_deref().unwrap_or("measure")
    }

    pub fn maps(&self) -> &[AffineMap] {
        &self.maps
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn dimension(&self) -> &Dimension {
        &self.dimension
    }

    /// `int_0^1 F`.
    pub fn unit_integral(&self) -> &Rational {
        &self.unit_integral
    }

    pub fn min_ratio(&self) -> Rational {
        self.maps.iter().map(|m| m.rho.clone()).min().expect("nonempty")
    }

    /// Ahlfors constant, estimated at [`DEFAULT_AHLFORS_DEPTH`] on first use.
    pub fn regularity_constant(&self) -> &Rational {
        self.constant.get_or_init(|| {
            self.ahlfors_constant_estimate(DEFAULT_AHLFORS_DEPTH).expect("default depth is within budget")
        })
    }

    /// Descent depth after which the CDF enclosure is narrower than `width`.
    pub fn depth_for_cdf_width(&self, width: f64) -> usize {
        depth_for(width, self.max_weight)
    }

    /// Descent depth after which the integral enclosure is narrower than `width`.
    pub fn depth_for_integral_width(&self, width: f64) -> usize {
        depth_for(width, self.max_cell)
    }

    /// Evaluates `F(x)` and `G(x) = int_0^x F` by descending at most `depth` cylinder levels.
    pub fn eval_point(&self, x: &Rational, depth: usize) -> PointEval {
        let zero = Rational::zero();
        let one = Rational::one();
        if *x <= zero {
            return PointEval::exact(zero, Rational::zero());
        }
        if *x >= one {
            return PointEval::exact(one.clone(), &self.unit_integral + (x - &one));
        }
        let mut y = x.clone();
        let mut base_f = Rational::zero();
        let mut mass = Rational::one();
        let mut len = Rational::one();
        let mut acc_g = Rational::zero();
        let mut level = 0;
        'descent: loop {
            let mut prev_end = Rational::zero();
            for (j, map) in self.maps.iter().enumerate() {
                let f_here = &base_f + &mass * &self.prefix[j];
                if y <= map.t {
                    acc_g += &len * (&y - &prev_end) * &f_here;
                    return PointEval::exact(f_here, acc_g);
                }
                acc_g += &len * (&map.t - &prev_end) * &f_here;
                let end = map.image_end();
                if y < end {
                    if level + 1 >= depth {
                        // y strictly inside an undivided cylinder: Darboux bounds
                        let lo_f = f_here.clone();
                        let hi_f = &f_here + &mass * &self.weights[j];
                        let cell_len = &len * &map.rho;
                        let u = (&y - &map.t) / &map.rho;
                        let cell_mass = &mass * &self.weights[j];
                        let slack = &u - (&one - &self.unit_integral);
                        let g_lo = rational::max(&zero, &slack);
                        let g_hi = rational::min(&u, &self.unit_integral);
                        let base = &acc_g + &cell_len * &u * &f_here;
                        return PointEval {
                            cdf: Enclosure::new(lo_f, hi_f),
                            integral: Enclosure::new(
                                &base + &cell_len * &cell_mass * g_lo,
                                &base + &cell_len * &cell_mass * g_hi,
                            ),
                        };
                    }
                    base_f = f_here;
                    mass *= &self.weights[j];
                    len *= &map.rho;
                    y = (&y - &map.t) / &map.rho;
                    level += 1;
                    continue 'descent;
                }
                let cell_mass = &mass * &self.weights[j];
                acc_g += &len * &map.rho * (&f_here + &cell_mass * &self.unit_integral);
                prev_end = end;
            }
            let f_here = &base_f + &mass;
            acc_g += &len * (&y - &prev_end) * &f_here;
            return PointEval::exact(f_here, acc_g);
        }
    }

    /// Enclosure of `F(x) = mu([0, x])`.
    pub fn cdf_eval(&self, x: &Rational, depth: usize) -> Enclosure {
        self.eval_point(x, depth).cdf
    }

    /// Enclosure of `mu([a, b])`; closed and open intervals agree since there are no atoms.
    pub fn measure_of_interval(&self, a: &Rational, b: &Rational, depth: usize) -> Enclosure {
        assert!(a <= b, "measure_of_interval needs a <= b");
        if a == b {
            return Enclosure::zero();
        }
        (self.cdf_eval(b, depth) - self.cdf_eval(a, depth)).clamp_nonneg()
    }

    /// Enclosure of `int_a^b F`.
    pub fn cdf_integral(&self, a: &Rational, b: &Rational, depth: usize) -> Enclosure {
        assert!(a <= b, "cdf_integral needs a <= b");
        (self.eval_point(b, depth).integral - self.eval_point(a, depth).integral).clamp_nonneg()
    }

    /// Leftmost point `x` whose exactly known `F(x)` does not exceed `v`.
    ///
    /// When `v` is a finite sum of cylinder masses reachable within `depth`
    /// levels, `F(x) = v` and `x` is the smallest solution. Otherwise `x` is
    /// the left end of the depth-`depth` cylinder where `F` crosses `v`.
    pub fn quantile_floor(&self, v: &Rational, depth: usize) -> (Rational, Rational) {
        let zero = Rational::zero();
        let one = Rational::one();
        if *v <= zero {
            return (zero.clone(), zero);
        }
        if *v >= one {
            return (one.clone(), one);
        }
        let mut left = Rational::zero();
        let mut len = Rational::one();
        let mut base_f = Rational::zero();
        let mut mass = Rational::one();
        'descent: for _ in 0..depth {
            for (j, map) in self.maps.iter().enumerate() {
                let lo = &base_f + &mass * &self.prefix[j];
                let hi = &lo + &mass * &self.weights[j];
                match v.cmp(&hi) {
                    Ordering::Equal => return (&left + &len * map.image_end(), hi),
                    Ordering::Less => {
                        left += &len * &map.t;
                        len *= &map.rho;
                        base_f = lo;
                        mass *= &self.weights[j];
                        continue 'descent;
                    }
                    Ordering::Greater => {}
                }
            }
            unreachable!("v lies below the cumulative mass of the current cylinder");
        }
        (left, base_f)
    }

    /// All depth-`depth` cylinders, left to right.
    pub fn cylinder_enumerate(&self, depth: usize) -> Result<Vec<CylinderInterval>> {
        let count = (self.maps.len() as f64).powi(depth as i32);
        if count > node_budget() as f64 {
            return Err(Error::Budget { what: "cylinder enumeration", budget: node_budget() });
        }
        let mut level = vec![CylinderInterval {
            word: Vec::new(),
            left: Rational::zero(),
            right: Rational::one(),
            mass: Rational::one(),
        }];
        for _ in 0..depth {
            let mut next = Vec::with_capacity(level.len() * self.maps.len());
            for c in &level {
                let len = c.length();
                for (j, map) in self.maps.iter().enumerate() {
                    let mut word = c.word.clone();
                    word.push(j);
                    let left = &c.left + &len * &map.t;
                    let right = &left + &len * &map.rho;
                    next.push(CylinderInterval { word, left, right, mass: &c.mass * &self.weights[j] });
                }
            }
            level = next;
        }
        Ok(level)
    }

    /// Sorted, deduplicated endpoints of all cylinders of depth `depth`.
    pub fn cylinder_endpoints(&self, depth: usize) -> Result<Vec<Rational>> {
        let mut pts: Vec<Rational> =
            self.cylinder_enumerate(depth)?.into_iter().flat_map(|c| [c.left, c.right]).collect();
        pts.sort();
        pts.dedup();
        Ok(pts)
    }

    /// Deepest cylinder whose closure contains `[a, b]`, as `(word, left, length, mass)`.
    pub fn enclosing_cylinder(&self, a: &Rational, b: &Rational) -> (usize, Rational, Rational, Rational) {
        let mut left = Rational::zero();
        let mut len = Rational::one();
        let mut mass = Rational::one();
        let mut depth = 0;
        'descent: while depth < MAX_DEPTH {
            for (j, map) in self.maps.iter().enumerate() {
                let lo = &left + &len * &map.t;
                let hi = &lo + &len * &map.rho;
                if lo <= *a && *b <= hi {
                    left = lo;
                    len *= &map.rho;
                    mass *= &self.weights[j];
                    depth += 1;
                    continue 'descent;
                }
            }
            break;
        }
        (depth, left, len, mass)
    }

    /// Admissible Ahlfors constant: twice the worst ratio
    /// `max(mu(B)/r^d, r^d/mu(B))` over balls centred at depth-`depth`
    /// cylinder endpoints with radii on a log-periodic grid spanning one scale
    /// period `[min rho, 1)`.
    pub fn ahlfors_constant_estimate(&self, depth: usize) -> Result<Rational> {
        if depth < 2 {
            return Err(Error::InvalidArgument("ahlfors estimate needs depth >= 2".into()));
        }
        let centers = self.cylinder_endpoints(depth)?;
        let (d_lo, d_hi) = self.dimension.bracket(DIMENSION_BRACKET_DEN);
        let rho_min = self.min_ratio();
        let period = rational::to_f64(&rho_min);
        let radii: Vec<(Rational, Rational, Rational)> = (1..=AHLFORS_RADII)
            .map(|k| {
                let r = if k == AHLFORS_RADII {
                    rho_min.clone()
                } else {
                    let approx = period.powf(k as f64 / AHLFORS_RADII as f64);
                    Rational::new(((approx * 4294967296.0).floor() as i64).into(), (1i64 << 32).into())
                };
                let (lo, hi) = rational::pow_bracket(&r, &d_lo, &d_hi);
                (r, lo, hi)
            })
            .collect();
        let eval_depth = depth + 40;
        let worst = centers
            .par_iter()
            .map(|x| {
                let mut worst = Rational::one();
                for (r, rd_lo, rd_hi) in &radii {
                    let mass = self.measure_of_interval(&(x - r), &(x + r), eval_depth);
                    let upper = &mass.hi / rd_lo;
                    if upper > worst {
                        worst = upper;
                    }
                    if mass.lo > Rational::zero() {
                        let lower = rd_hi / &mass.lo;
                        if lower > worst {
                            worst = lower;
                        }
                    } else {
                        // enclosure too coarse to bound the ratio from below
                        worst = rational::max(&worst, &rational::pow2(64));
                    }
                }
                worst
            })
            .reduce(Rational::one, |a, b| if a >= b { a } else { b });
        Ok(rational::ceil_to(&(worst * int(2)), 1024))
    }
}

fn depth_for(width: f64, ratio: f64) -> usize {
    if width.is_nan() || width <= 0.0 || width >= 1.0 {
        return 1;
    }
    let d = (width.ln() / ratio.ln()).ceil();
    if d.is_finite() { (d as usize).clamp(1, MAX_DEPTH) } else { MAX_DEPTH }
}

/// Measures of one dimension; their sum is again Ahlfors regular of that dimension.
#[derive(Clone, Debug, Serialize)]
pub struct DimensionClass {
    pub dimension: Dimension,
    #[serde(serialize_with = "serialize_names")]
    pub members: Vec<IFSMeasure>,
}

fn serialize_names<S: serde::Serializer>(m: &[IFSMeasure], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.len()))?;
    for x in m {
        seq.serialize_element(x.name())?;
    }
    seq.end()
}

/// `f = sum_i mu_i([0, x])`, grouped into classes of strictly decreasing dimension.
#[derive(Clone, Debug, Serialize)]
pub struct MeasureSum {
    classes: Vec<DimensionClass>,
}

/// Sorts measures by strictly decreasing dimension, merging equal dimensions into one class.
pub fn sum_measures(list: Vec<IFSMeasure>) -> Result<MeasureSum> {
    if list.is_empty() {
        return Err(Error::InvalidArgument("empty list of measures".into()));
    }
    let mut classes: Vec<DimensionClass> = Vec::new();
    'outer: for m in list {
        for idx in 0..classes.len() {
            match m.dimension().compare(&classes[idx].dimension)? {
                Ordering::Equal => {
                    classes[idx].members.push(m);
                    continue 'outer;
                }
                Ordering::Greater => {
                    classes.insert(idx, DimensionClass { dimension: m.dimension().clone(), members: vec![m] });
                    continue 'outer;
                }
                Ordering::Less => {}
            }
        }
        classes.push(DimensionClass { dimension: m.dimension().clone(), members: vec![m] });
    }
    Ok(MeasureSum { classes })
}

impl MeasureSum {
    pub fn single(m: IFSMeasure) -> Self {
        Self { classes: vec![DimensionClass { dimension: m.dimension().clone(), members: vec![m] }] }
    }

    pub fn classes(&self) -> &[DimensionClass] {
        &self.classes
    }

    pub fn members(&self) -> impl Iterator<Item = &IFSMeasure> {
        self.classes.iter().flat_map(|c| c.members.iter())
    }

    pub fn member_count(&self) -> usize {
        self.classes.iter().map(|c| c.members.len()).sum()
    }

    /// Total mass `n`; `f(x) = n` right of 1.
    pub fn total_mass(&self) -> Rational {
        int(self.member_count() as i64)
    }

    /// `int_0^1 f`.
    pub fn unit_integral(&self) -> Rational {
        self.members().map(|m| m.unit_integral().clone()).sum()
    }

    /// The measure of smallest dimension (the one whose gaps drive detachment).
    pub fn smallest(&self) -> Result<&IFSMeasure> {
        let last = self.classes.last().expect("nonempty");
        if last.members.len() != 1 {
            return Err(Error::UnsupportedSum(format!(
                "{} measures share the smallest dimension {}",
                last.members.len(),
                last.dimension
            )));
        }
        Ok(&last.members[0])
    }

    /// Every measure except [`MeasureSum::smallest`].
    pub fn rest(&self) -> Vec<&IFSMeasure> {
        let n = self.classes.len();
        self.classes[..n - 1].iter().flat_map(|c| c.members.iter()).collect()
    }

    pub fn depth_for_cdf_width(&self, width: f64) -> usize {
        let n = self.member_count() as f64;
        self.members().map(|m| m.depth_for_cdf_width(width / n)).max().unwrap_or(1)
    }

    pub fn depth_for_integral_width(&self, width: f64) -> usize {
        let n = self.member_count() as f64;
        self.members().map(|m| m.depth_for_integral_width(width / n)).max().unwrap_or(1)
    }

    pub fn eval_point(&self, x: &Rational, depth: usize) -> PointEval {
        let mut cdf = Enclosure::zero();
        let mut integral = Enclosure::zero();
        for m in self.members() {
            let p = m.eval_point(x, depth);
            cdf = &cdf + &p.cdf;
            integral = &integral + &p.integral;
        }
        PointEval { cdf, integral }
    }

    pub fn cdf_eval(&self, x: &Rational, depth: usize) -> Enclosure {
        self.members().fold(Enclosure::zero(), |acc, m| &acc + &m.cdf_eval(x, depth))
    }

    pub fn measure_of_interval(&self, a: &Rational, b: &Rational, depth: usize) -> Enclosure {
        self.members().fold(Enclosure::zero(), |acc, m| &acc + &m.measure_of_interval(a, b, depth))
    }

    pub fn cdf_integral(&self, a: &Rational, b: &Rational, depth: usize) -> Enclosure {
        self.members().fold(Enclosure::zero(), |acc, m| &acc + &m.cdf_integral(a, b, depth))
    }
}

/// Enclosure of the sum of `mu` over a list of measures on `[a, b]`.
pub fn measure_sum_of_interval(measures: &[&IFSMeasure], a: &Rational, b: &Rational, depth: usize) -> Enclosure {
    measures.iter().fold(Enclosure::zero(), |acc, m| &acc + &m.measure_of_interval(a, b, depth))
}
