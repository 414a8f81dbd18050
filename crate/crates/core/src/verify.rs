//! Seeded self-check suites producing deterministic reports.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cantor::{self, TernaryPoint};
use crate::covering::{self, Gap, OpenInterval};
use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::gaps;
use crate::maximal;
use crate::measures::{sum_measures, IFSMeasure, MeasureSum, DIMENSION_BRACKET_DEN};
use crate::rational::{self, int, rat, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Measures,
    Covering,
    Detachment,
    Cantor,
    Induction,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Measures, Suite::Covering, Suite::Detachment, Suite::Cantor, Suite::Induction];

    pub fn parse(name: &str) -> Result<Vec<Suite>> {
        Ok(match name {
            "measures" => vec![Suite::Measures],
            "covering" => vec![Suite::Covering],
            "detachment" => vec![Suite::Detachment],
            "cantor" => vec![Suite::Cantor],
            "induction" => vec![Suite::Induction],
            "all" => Suite::ALL.to_vec(),
            other => return Err(Error::InvalidArgument(format!("unknown suite `{other}`"))),
        })
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub depth: usize,
    pub epsilon: Rational,
    pub levels: usize,
    pub window: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: 0, depth: 8, epsilon: rat(1, 100), levels: 3, window: gaps::DEFAULT_WINDOW }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub depth: usize,
    pub measures: Vec<String>,
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
}

struct Recorder {
    checks: Vec<Check>,
}

impl Recorder {
    fn new() -> Self {
        Self { checks: Vec::new() }
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    fn finish(self, suite: Suite) -> SuiteReport {
        let passed = self.checks.iter().all(|c| c.passed);
        SuiteReport { suite, checks: self.checks, passed }
    }
}

/// Runs the requested suites on `measures` (the built-in pair when empty).
pub fn run(suites: &[Suite], measures: &[IFSMeasure], config: &VerifyConfig) -> Result<VerifyReport> {
    let measures: Vec<IFSMeasure> =
        if measures.is_empty() { vec![IFSMeasure::cantor(), IFSMeasure::quarter_cantor()] } else { measures.to_vec() };
    let mut reports = Vec::new();
    for (i, suite) in suites.iter().enumerate() {
        // each suite draws from its own stream so subsets reproduce the full run
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(i as u64 * 0x9E37_79B9));
        let mut rec = Recorder::new();
        match suite {
            Suite::Measures => suite_measures(&mut rec, &measures, config, &mut rng)?,
            Suite::Covering => suite_covering(&mut rec, &measures, config, &mut rng)?,
            Suite::Detachment => suite_detachment(&mut rec, &measures, config, &mut rng)?,
            Suite::Cantor => suite_cantor(&mut rec, &mut rng)?,
            Suite::Induction => suite_induction(&mut rec, &measures, config, &mut rng)?,
        }
        reports.push(rec.finish(*suite));
    }
    Ok(VerifyReport {
        seed: config.seed,
        depth: config.depth,
        measures: measures.iter().map(|m| m.name().to_string()).collect(),
        passed: reports.iter().all(|r| r.passed),
        suites: reports,
    })
}

fn dec(q: &Rational) -> String {
    rational::fmt_decimal(q, 6)
}

fn random_endpoint(mu: &IFSMeasure, rng: &mut ChaCha8Rng, max_depth: usize) -> Rational {
    let depth = rng.gen_range(1..=max_depth);
    let mut left = Rational::zero();
    let mut len = Rational::one();
    for _ in 0..depth {
        let j = rng.gen_range(0..mu.maps().len());
        left += &len * &mu.maps()[j].t;
        len *= &mu.maps()[j].rho;
    }
    if rng.gen_bool(0.5) { left } else { left + len }
}

fn random_unit(rng: &mut ChaCha8Rng, den: i64) -> Rational {
    rat(rng.gen_range(0..=den), den)
}

fn suite_measures(rec: &mut Recorder, measures: &[IFSMeasure], config: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<()> {
    let depth = config.depth.max(2);
    for mu in measures {
        let name = mu.name();
        let total: Rational = mu.cylinder_enumerate(depth.min(10))?.iter().map(|c| c.mass.clone()).sum();
        rec.check(format!("{name}: cylinder masses sum to 1"), total.is_one(), total.to_string());

        let mut bad = 0;
        for _ in 0..200 {
            let a = random_unit(rng, 1 << 20);
            let b = random_unit(rng, 1 << 20);
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            if mu.cdf_eval(&a, depth).lo > mu.cdf_eval(&b, depth).hi {
                bad += 1;
            }
        }
        rec.check(format!("{name}: cdf monotone"), bad == 0, format!("{bad} violations in 200 pairs"));

        let mut bad = 0;
        let mut exact = 0;
        for _ in 0..200 {
            let mut p = [random_endpoint(mu, rng, 8), random_endpoint(mu, rng, 8), random_endpoint(mu, rng, 8)];
            p.sort();
            let ab = mu.measure_of_interval(&p[0], &p[1], depth + 16);
            let bc = mu.measure_of_interval(&p[1], &p[2], depth + 16);
            let ac = mu.measure_of_interval(&p[0], &p[2], depth + 16);
            if ab.is_exact() && bc.is_exact() && ac.is_exact() {
                exact += 1;
                if &ab.lo + &bc.lo != ac.lo {
                    bad += 1;
                }
            }
        }
        rec.check(format!("{name}: additivity"), bad == 0 && exact > 0, format!("{exact} exact triples, {bad} failures"));

        let mut bad = 0;
        for _ in 0..200 {
            let x = random_endpoint(mu, rng, 8);
            let j = rng.gen_range(0..mu.maps().len());
            let lhs = mu.cdf_eval(&mu.maps()[j].apply(&x), depth + 16);
            let below: Rational = mu.weights()[..j].iter().sum();
            let rhs = mu.cdf_eval(&x, depth + 16).scale(&mu.weights()[j]);
            let rhs = Enclosure::new(&rhs.lo + &below, &rhs.hi + &below);
            if !(lhs.is_exact() && lhs == rhs) {
                bad += 1;
            }
        }
        rec.check(format!("{name}: self-similarity of the cdf"), bad == 0, format!("{bad} failures in 200 endpoints"));

        let mut bad = 0;
        for _ in 0..50 {
            let a = random_unit(rng, 1 << 12);
            let b = random_unit(rng, 1 << 12);
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            let integral = mu.cdf_integral(&a, &b, depth);
            // Darboux sums on 64 equal pieces bracket the true integral
            let n = 64;
            let step = (&b - &a) / int(n);
            let (mut lower, mut upper) = (Rational::zero(), Rational::zero());
            for k in 0..n {
                let left = &a + &step * int(k);
                let right = &left + &step;
                lower += mu.cdf_eval(&left, depth + 16).lo * &step;
                upper += mu.cdf_eval(&right, depth + 16).hi * &step;
            }
            if integral.hi < lower || integral.lo > upper {
                bad += 1;
            }
        }
        rec.check(format!("{name}: integral consistent with Darboux sums"), bad == 0, format!("{bad} failures in 50 intervals"));

        let c = mu.regularity_constant();
        let (d_lo, d_hi) = mu.dimension().bracket(DIMENSION_BRACKET_DEN);
        let mut bad = 0;
        for _ in 0..300 {
            let x = random_endpoint(mu, rng, 10);
            let r = rat(rng.gen_range(1..1 << 24), 1 << 24);
            let (rd_lo, rd_hi) = rational::pow_bracket(&r, &d_lo, &d_hi);
            let m = mu.measure_of_interval(&(&x - &r), &(&x + &r), 64);
            if m.hi * c < rd_lo || m.lo > c * rd_hi {
                bad += 1;
            }
        }
        rec.check(format!("{name}: Ahlfors bounds with C = {c}"), bad == 0, format!("{bad} failures in 300 balls"));
    }
    Ok(())
}

/// Maximum number of open intervals sharing a point.
pub fn max_multiplicity(intervals: &[(Rational, Rational)]) -> usize {
    let mut events: Vec<(Rational, i32)> = Vec::new();
    for (a, b) in intervals {
        events.push((a.clone(), 1));
        events.push((b.clone(), -1));
    }
    // closing before opening at equal coordinates: open intervals do not share endpoints
    events.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)));
    let (mut cur, mut best) = (0i32, 0i32);
    for (_, e) in events {
        cur += e;
        best = best.max(cur);
    }
    best as usize
}

/// Union of open intervals as disjoint open pieces.
pub fn open_union(intervals: &[(Rational, Rational)]) -> Vec<(Rational, Rational)> {
    let mut v: Vec<_> = intervals.iter().filter(|(a, b)| a < b).cloned().collect();
    v.sort();
    let mut out: Vec<(Rational, Rational)> = Vec::new();
    for (a, b) in v {
        match out.last_mut() {
            // touching open intervals leave their common endpoint uncovered
            Some(last) if a < last.1 => {
                if b > last.1 {
                    last.1 = b;
                }
            }
            _ => out.push((a, b)),
        }
    }
    out
}

/// Random family of gaps with small-denominator endpoints.
pub fn random_family(rng: &mut impl Rng, size: usize) -> Vec<Gap> {
    (0..size)
        .map(|i| {
            let a = rat(rng.gen_range(0..200), 64);
            let len = rat(rng.gen_range(1..64), 64);
            Gap::new(i, a.clone(), a + len, 1)
        })
        .collect()
}

fn ball(g: &Gap, r: &Rational) -> (Rational, Rational) {
    (&g.b - r, &g.b + r)
}

/// Checks union equality and multiplicity of a Besicovitch selection.
pub fn besicovitch_ok(family: &[Gap]) -> bool {
    let sel = covering::besicovitch_select(family);
    let all: Vec<_> = family.iter().map(|g| ball(g, &g.radius())).collect();
    let chosen: Vec<_> = sel.selected.iter().map(|i| ball(&family[*i], &family[*i].radius())).collect();
    open_union(&all) == open_union(&chosen) && max_multiplicity(&chosen) <= 2
}

/// Checks disjointness and the threefold cover of a Vitali selection.
pub fn vitali_ok(family: &[Gap], j: &OpenInterval) -> bool {
    let sel = covering::vitali_select(family, j);
    let radii = sel.truncated_radii.clone().unwrap_or_default();
    let chosen: Vec<_> = sel.selected.iter().zip(&radii).map(|(i, r)| ball(&family[*i], r)).collect();
    let dilated: Vec<_> = sel.selected.iter().zip(&radii).map(|(i, r)| ball(&family[*i], &(r * int(3)))).collect();
    let all: Vec<_> = family
        .iter()
        .map(|g| ball(g, &covering::truncated_radius(g, j)))
        .filter(|(a, b)| a < b)
        .collect();
    let covered = all.iter().all(|(a, b)| dilated.iter().any(|(c, d)| c <= a && b <= d));
    max_multiplicity(&chosen) <= 1 && covered
}

/// Random open interval spanning whole cylinders at some depth up to `max_depth`.
pub fn random_aligned_interval(mu: &IFSMeasure, rng: &mut impl Rng, max_depth: usize) -> Result<OpenInterval> {
    let depth = rng.gen_range(1..=max_depth);
    let cyl = mu.cylinder_enumerate(depth)?;
    let i = rng.gen_range(0..cyl.len());
    let k = rng.gen_range(i..cyl.len().min(i + 4));
    Ok(OpenInterval::new(cyl[i].left.clone(), cyl[k].right.clone()))
}

fn suite_covering(rec: &mut Recorder, measures: &[IFSMeasure], config: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<()> {
    let depth = config.depth.max(2);
    for mu in measures {
        let name = mu.name();
        let unit = OpenInterval::unit();
        let l1 = covering::density_check_l1(mu, &unit, depth)?;
        rec.check(format!("{name}: first covering bound on (0,1)"), l1.holds, format!("lhs {} vs rhs {}", dec(&l1.lhs.lo), dec(&l1.rhs)));
        let l2 = covering::density_check_l2(mu, &unit, depth)?;
        rec.check(format!("{name}: Vitali covering bound on (0,1)"), l2.holds, format!("lhs {} vs rhs {}", dec(&l2.lhs.lo), dec(&l2.rhs)));
        let mut failures = Vec::new();
        for _ in 0..20 {
            let j = random_aligned_interval(mu, rng, depth.saturating_sub(2).max(1))?;
            let a = covering::density_check_l1(mu, &j, depth)?;
            let b = covering::density_check_l2(mu, &j, depth)?;
            if !(a.holds && b.holds) {
                failures.push(j.to_string());
            }
        }
        rec.check(format!("{name}: covering bounds on 20 aligned intervals"), failures.is_empty(), failures.join("; "));
        let gaps = covering::gap_enumerate(mu, &unit, depth.min(10))?;
        let gap_len: Rational = gaps.iter().map(|g| &g.b - &g.a).sum();
        let cyl_len: Rational = mu.cylinder_enumerate(depth.min(10))?.iter().map(|c| c.length()).sum();
        rec.check(format!("{name}: gap and cylinder lengths sum to 1"), (&gap_len + &cyl_len).is_one(), format!("{gap_len} + {cyl_len}"));
    }
    let mut bad = 0;
    for _ in 0..200 {
        let size = rng.gen_range(1..=20);
        let fam = random_family(rng, size);
        let j = OpenInterval::new(int(0), rat(rng.gen_range(64..300), 64));
        if !besicovitch_ok(&fam) || !vitali_ok(&fam, &j) {
            bad += 1;
        }
    }
    rec.check("selections on 200 random families", bad == 0, format!("{bad} failures"));
    Ok(())
}

fn suite_detachment(rec: &mut Recorder, measures: &[IFSMeasure], config: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<()> {
    let depth = config.depth.max(12) + 12;
    for mu in measures {
        let name = mu.name();
        let f = MeasureSum::single(mu.clone());
        let gaps = covering::gap_enumerate(mu, &OpenInterval::unit(), 6)?;
        let mut uncertified = 0;
        for g in &gaps {
            if !gaps::detachment_check(&f, g, &g.radius(), &int(1), depth)?.certified {
                uncertified += 1;
            }
        }
        rec.check(format!("{name}: gaps to generation 6 detach"), uncertified == 0, format!("{uncertified} of {} uncertified", gaps.len()));
        let fam = gaps::gap_image_family(&f, &OpenInterval::unit(), &int(1), 6, depth)?;
        rec.check(
            format!("{name}: image family disjoint inside f(J)"),
            fam.holds(),
            format!("{} intervals, total length {}", fam.intervals.len(), fam.total_length),
        );
        let mut undetermined = Vec::new();
        for _ in 0..5 {
            let g = &gaps[rng.gen_range(0..gaps.len())];
            if !maximal::contact_classify(&f, &g.b, &int(1), &rat(1, 10_000), 12).is_detached() {
                undetermined.push(g.b.to_string());
            }
        }
        rec.check(format!("{name}: gap right endpoints classified detached"), undetermined.is_empty(), undetermined.join(", "));
    }
    Ok(())
}

fn suite_cantor(rec: &mut Recorder, rng: &mut ChaCha8Rng) -> Result<()> {
    let mu = IFSMeasure::cantor();
    let anchors = [(rat(2, 3), rat(1, 2)), (rat(19, 27), rat(5, 8)), (rat(1, 2), rat(1, 2))];
    let ok = anchors.iter().all(|(x, h)| mu.cdf_eval(x, 12) == Enclosure::exact(h.clone()));
    rec.check("anchor values of h", ok, "h(2/3) = 1/2, h(19/27) = 5/8, h(1/2) = 1/2");

    let mut bad = 0;
    for _ in 0..200 {
        let len = rng.gen_range(0..16);
        let prefix: Vec<u8> = (0..len).map(|_| rng.gen_range(0..2)).collect();
        let p = TernaryPoint::new(prefix, rng.gen_range(0..2))?;
        if mu.cdf_eval(&p.value(), 24) != Enclosure::exact(cantor::cantor_value(&p)) {
            bad += 1;
        }
    }
    rec.check("digit formula agrees with the cdf", bad == 0, format!("{bad} mismatches in 200 points"));

    let mut bad = 0;
    for k in 1..=6usize {
        for code in 0..1usize << (k - 1) {
            let prefix: Vec<u8> = (0..k - 1).map(|i| ((code >> i) & 1) as u8).collect();
            let g = cantor::toy_gap_construct(&prefix, k)?;
            let expected = &g.image_gap.0 + rational::inv_pow2(k as u32 + 2);
            if !(g.certified && g.average_exact && g.image_gap.1 == expected) {
                bad += 1;
            }
        }
    }
    rec.check("toy gaps for K <= 6", bad == 0, format!("{bad} failures"));

    let cover = cantor::excluded_interval_cover(12)?;
    let count = cantor::count_pattern_free(12);
    let expected = rat(count as i64, 1 << 14);
    rec.check(
        "excluded cover for K_max = 12",
        cover.disjoint && cover.prefixes_match && cover.all_certified && cover.residual == expected && cover.residual <= cover.block_bound,
        format!("{} gaps, residual {} vs brute force {}, block bound {}", cover.gaps.len(), cover.residual, expected, cover.block_bound),
    );

    let mut bad = 0;
    for _ in 0..50 {
        let g = &cover.gaps[rng.gen_range(0..cover.gaps.len())];
        let width = &g.image_gap.1 - &g.image_gap.0;
        let y = &g.image_gap.0 + &width * rat(rng.gen_range(1..1000), 1000);
        let scan = cantor::pattern_scan(&y, g.k + 2)?;
        let mut word = g.prefix.clone();
        word.extend_from_slice(&[1, 0, 0]);
        if scan.bits != word {
            bad += 1;
        }
    }
    rec.check("points of emitted gaps carry their binary prefix", bad == 0, format!("{bad} failures in 50 samples"));
    Ok(())
}

/// A cylinder of the smallest-dimension support, of the given depth, on which the
/// other measures vanish nearby, so that `delta0_for_interval` applies.
pub fn isolated_cylinder(f: &MeasureSum, depth: usize) -> Result<Option<(OpenInterval, gaps::Delta0Certificate)>> {
    let mu = f.smallest()?;
    for c in mu.cylinder_enumerate(depth)? {
        let j = OpenInterval::new(c.left, c.right);
        if let Some(cert) = gaps::delta0_for_interval(f, &j, 64)? {
            return Ok(Some((j, cert)));
        }
    }
    Ok(None)
}

fn suite_induction(rec: &mut Recorder, measures: &[IFSMeasure], config: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<()> {
    for mu in measures {
        let f = MeasureSum::single(mu.clone());
        let report = gaps::image_measure_bound(&f, &OpenInterval::unit(), &int(1), config.levels, config.window, 48)?;
        let decreasing = report.levels.windows(2).all(|w| w[1].surviving_mass.hi <= w[0].surviving_mass.lo);
        rec.check(
            format!("{}: recursion bounds for {} levels", mu.name(), config.levels),
            report.holds && decreasing,
            report.levels.iter().map(|l| format!("{} <= {}", dec(&l.surviving_mass.hi), dec(&l.bound.hi))).collect::<Vec<_>>().join(", "),
        );
    }
    if measures.len() < 2 {
        rec.check("multi-measure step", true, "skipped: a single measure");
        return Ok(());
    }
    let f = sum_measures(measures.to_vec())?;
    if f.smallest().is_err() || f.classes().len() < 2 {
        rec.check("multi-measure step", true, "skipped: no strictly smallest dimension");
        return Ok(());
    }
    let cert = gaps::delta0_estimate(&f, 6)?;
    rec.check(
        "delta0 estimate",
        cert.verified,
        format!("delta0 = {}, {} spot checks, {} failures", cert.delta0, cert.spot_checks, cert.spot_failures),
    );
    let mu = f.smallest()?;
    let mut bad = 0;
    for _ in 0..100 {
        let x = random_endpoint(mu, rng, 10);
        let r = &cert.delta0 * rat(rng.gen_range(1..=1 << 20), 1 << 20);
        if !gaps::domination_holds(&f, &x, &r, gaps::SPOT_DEPTH)? {
            bad += 1;
        }
    }
    rec.check("domination below delta0 at 100 random balls", bad == 0, format!("{bad} failures"));
    let claim1 = gaps::inductive_claim1(&f, &OpenInterval::unit(), &config.epsilon, 40)?;
    rec.check(
        "first claim",
        claim1.certified,
        format!("L = {}, eta = {}", claim1.splits, dec(&claim1.eta_of_pieces.hi)),
    );
    match isolated_cylinder(&f, 4)? {
        Some((j, local)) => {
            let claim2 = gaps::inductive_claim2(&f, &j, &local.delta0, &local, config.window, 64)?;
            rec.check("second claim", claim2.holds, format!("J = {j}, mass {} vs K {}", dec(&claim2.mass.lo), dec(&claim2.k.hi)));
        }
        None => rec.check("second claim", false, "no depth-4 cylinder with a local delta0"),
    }
    Ok(())
}
