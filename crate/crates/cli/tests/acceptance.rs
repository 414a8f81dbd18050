//! Acceptance criteria 1-9. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. Pass criterion numbers as arguments to run a subset.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::*;
use fracmax::cantor::{count_pattern_free, excluded_interval_cover, toy_gap_construct};
use fracmax::covering::{
    besicovitch_select, density_check_l1, density_check_l2, gap_enumerate, truncated_radius, vitali_select, Gap,
    OpenInterval,
};
use fracmax::gaps::{
    delta0_estimate, delta0_for_interval, detachment_check, gap_image_family, image_measure_bound, inductive_claim1,
    inductive_claim2, DEFAULT_WINDOW,
};
use fracmax::maximal::{contact_classify, interval_average, maximal_local, ContactVerdict};
use fracmax::{sum_measures, IFSMeasure, MeasureSum, Rational};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn cantor() -> MeasureSum {
    MeasureSum::single(IFSMeasure::cantor())
}

/// `int_0^x h` for the Cantor function, from its self-similar recursion.
fn cantor_integral(x: f64, depth: u32) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 0.5 + (x - 1.0);
    }
    if depth == 0 {
        return 0.25 * x;
    }
    if x < 1.0 / 3.0 {
        cantor_integral(3.0 * x, depth - 1) / 6.0
    } else if x < 2.0 / 3.0 {
        1.0 / 12.0 + (x - 1.0 / 3.0) / 2.0
    } else {
        0.25 + cantor_integral(3.0 * x - 2.0, depth - 1) / 6.0 + (x - 2.0 / 3.0) / 2.0
    }
}

fn cantor_average(x: f64, r: f64) -> f64 {
    (cantor_integral(x + r, 40) - cantor_integral(x - r, 40)) / (2.0 * r)
}

/// Largest Cantor average on `n` equally spaced radii in `(0, 1]`.
fn scan_max(x: f64, n: usize) -> f64 {
    (1..=n).map(|k| cantor_average(x, k as f64 / n as f64)).fold(f64::MIN, f64::max)
}

fn criterion_1() -> Outcome {
    let f = cantor();
    let h = |x: Rational| f.cdf_eval(&x, 12);
    ensure!(h(q(2, 3)).is_exact() && h(q(2, 3)).lo == q(1, 2), "h(2/3) = {}", h(q(2, 3)));
    ensure!(h(q(19, 27)).is_exact() && h(q(19, 27)).lo == q(5, 8), "h(19/27) = {}", h(q(19, 27)));
    for (a, b, v) in [(q(1, 3), q(2, 3), q(1, 2)), (q(2, 3), qi(1), q(3, 4)), (q(1, 3), qi(1), q(5, 8))] {
        let x = (&a + &b) / qi(2);
        let r = (&b - &a) / qi(2);
        let avg = interval_average(&f, &x, &r, 12);
        ensure!(avg.is_exact() && avg.lo == v, "average over ({a}, {b}) = {avg}, expected {v}");
    }
    Ok("h(2/3) = 1/2, h(19/27) = 5/8; averages 1/2, 3/4, 5/8 exact".into())
}

fn criterion_2() -> Outcome {
    let f = cantor();
    let tol = q(1, 1_000_000);
    let m = maximal_local(&f, &q(2, 3), &qi(1), &tol, 12);
    ensure!(m.value.lo >= q(5, 8), "lo = {} < 5/8", m.value.lo);
    let v = contact_classify(&f, &q(2, 3), &qi(1), &tol, 12);
    let ContactVerdict::Detached { margin } = v else {
        return Err("x = 2/3 not classified detached".into());
    };
    ensure!(margin >= q(1, 8) - &tol, "margin {margin} < 1/8 - tol");
    let scan = scan_max(2.0 / 3.0, 100_000);
    ensure!(scan <= f64_of(&m.value.hi) + 1e-9, "scan average {scan} above hi = {}", m.value.hi);
    Ok(format!(
        "M in [{:.9}, {:.9}], margin {:.9}, scan max {scan:.9}",
        f64_of(&m.value.lo),
        f64_of(&m.value.hi),
        f64_of(&margin)
    ))
}

fn criterion_3() -> Outcome {
    let f = cantor();
    let tol = q(1, 1_000_000);
    let m = maximal_local(&f, &q(1, 2), &qi(1), &tol, 12);
    ensure!(m.value.contains(&q(1, 2)), "enclosure {} misses 1/2", m.value);
    ensure!(m.value.hi <= q(1, 2) + &tol, "hi = {} exceeds 1/2 + tol", m.value.hi);
    let n = 100_000;
    let mut worst = f64::MIN;
    for k in 1..=n {
        let r = k as f64 / n as f64;
        let a = cantor_average(0.5, r);
        if r <= 0.5 {
            ensure!((a - 0.5).abs() <= 1e-9, "symmetry broken at r = {r}: {a}");
        }
        worst = worst.max(a);
    }
    ensure!(worst <= 0.5 + 1e-9, "scan max {worst} above 1/2");
    Ok(format!("M in [{}, {:.12}], dense scan of {n} radii max {worst:.12}", m.value.lo, f64_of(&m.value.hi)))
}

fn random_family(rng: &mut ChaCha8Rng) -> Vec<Gap> {
    let size = rng.gen_range(1..=30);
    (0..size)
        .map(|i| {
            let a = q(rng.gen_range(0..400), 64);
            let len = q(rng.gen_range(1..96), 64);
            Gap::new(i, a.clone(), a + len, 1)
        })
        .collect()
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0;
    for mu in [IFSMeasure::cantor(), IFSMeasure::quarter_cantor()] {
        let unit = OpenInterval::unit();
        ensure!(density_check_l1(&mu, &unit, 8).map_err(|e| e.to_string())?.holds, "{}: L1 fails on (0,1)", mu.name());
        ensure!(density_check_l2(&mu, &unit, 8).map_err(|e| e.to_string())?.holds, "{}: L2 fails on (0,1)", mu.name());
        for _ in 0..100 {
            let depth = rng.gen_range(1..=7);
            let cyl = mu.cylinder_enumerate(depth).map_err(|e| e.to_string())?;
            let i = rng.gen_range(0..cyl.len());
            let k = rng.gen_range(i..cyl.len().min(i + 4));
            let j = OpenInterval::new(cyl[i].left.clone(), cyl[k].right.clone());
            let l1 = density_check_l1(&mu, &j, 8).map_err(|e| e.to_string())?;
            let l2 = density_check_l2(&mu, &j, 8).map_err(|e| e.to_string())?;
            ensure!(l1.holds && l2.holds, "{}: covering bound fails on {j}", mu.name());
            checked += 1;
        }
    }
    for _ in 0..1000 {
        let family = random_family(&mut rng);
        let balls: Vec<_> = family.iter().map(|g| (&g.b - g.radius(), &g.b + g.radius())).collect();
        let b = besicovitch_select(&family);
        let chosen: Vec<_> = b.selected.iter().map(|&i| balls[i].clone()).collect();
        ensure!(multiplicity_oracle(&chosen) <= 2, "Besicovitch multiplicity above 2");
        ensure!(same_union(&balls, &chosen), "Besicovitch union changed");
        let j = OpenInterval::new(qi(0), q(rng.gen_range(64..500), 64));
        let v = vitali_select(&family, &j);
        let radii = v.truncated_radii.clone().unwrap_or_default();
        let picked: Vec<_> = v.selected.iter().zip(&radii).map(|(&i, r)| (&family[i].b - r, &family[i].b + r)).collect();
        ensure!(pairwise_disjoint(&picked), "Vitali selection overlaps");
        for g in &family {
            let r = truncated_radius(g, &j);
            if r > Rational::zero() {
                let (lo, hi) = (&g.b - &r, &g.b + &r);
                let covered = v.selected.iter().zip(&radii).any(|(&i, s)| {
                    let t = s * qi(3);
                    &family[i].b - &t <= lo && hi <= &family[i].b + &t
                });
                ensure!(covered, "Vitali threefold cover misses ({lo}, {hi})");
            }
        }
    }
    Ok(format!("{checked} aligned intervals plus (0,1) for both measures; 1000 random families"))
}

fn criterion_5() -> Outcome {
    let mu = IFSMeasure::cantor();
    let f = cantor();
    let unit = OpenInterval::unit();
    let gaps = gap_enumerate(&mu, &unit, 6).map_err(|e| e.to_string())?;
    ensure!(gaps.len() == 63, "expected 63 gaps, found {}", gaps.len());
    for g in &gaps {
        let img = detachment_check(&f, g, &g.radius(), &qi(1), 24).map_err(|e| e.to_string())?;
        ensure!(img.certified, "gap ({}, {}) not certified: {:?}", g.a, g.b, img.diagnostic);
    }
    let fam = gap_image_family(&f, &unit, &qi(1), 6, 24).map_err(|e| e.to_string())?;
    ensure!(fam.all_certified && fam.disjoint && fam.contained, "image family fails: {fam:?}");
    let images: Vec<_> = fam.intervals.iter().map(|i| (i.lo.lo.clone(), &i.lo.hi + &i.length.hi)).collect();
    ensure!(pairwise_disjoint(&images), "oracle finds overlapping images");
    ensure!(images.iter().all(|(a, b)| *a >= Rational::zero() && *b <= Rational::one()), "image outside f(J)");
    Ok(format!("63 gaps certified; selected family of {} images disjoint inside f(J) = (0,1)", images.len()))
}

fn criterion_6() -> Outcome {
    let mu = IFSMeasure::cantor();
    let f = cantor();
    let report = image_measure_bound(&f, &OpenInterval::unit(), &qi(1), 5, DEFAULT_WINDOW, 48).map_err(|e| e.to_string())?;
    // K = (1/32) C^-4 12^-d recomputed in floating point
    let c = f64_of(&report.regularity_constant);
    let d = 2f64.ln() / 3f64.ln();
    let k = c.powi(-4) * 12f64.powf(-d) / 32.0;
    ensure!(f64_of(&report.k.lo) <= k * (1.0 + 1e-9) && k <= f64_of(&report.k.hi) * (1.0 + 1e-9), "K bracket {} misses {k}", report.k);
    ensure!(report.levels.len() == 5, "expected 5 levels");
    let mut previous = Rational::one();
    let mut previous_bound = Rational::one();
    let mut line = Vec::new();
    for level in &report.levels {
        let bound = fracmax::rational::powi(&(Rational::one() - &report.k.lo), level.level as u32);
        ensure!(level.surviving_mass.hi <= bound, "L = {}: {} above (1 - K_lo)^L", level.level, level.surviving_mass.hi);
        ensure!(level.surviving_mass.hi < previous_bound, "L = {}: not strictly decreasing", level.level);
        let mut removed = Rational::zero();
        for r in &level.removed {
            let (lo, hi) = mass_bracket(&mu, &r.preimage.lo, &r.preimage.hi, 80);
            ensure!(lo == hi && lo == r.image_length, "removed ({}, {}) has mass [{lo}, {hi}], reported {}", r.preimage.lo, r.preimage.hi, r.image_length);
            removed += lo;
        }
        let survivors: Rational = level.survivors.iter().map(|s| mass_bracket(&mu, &s.lo, &s.hi, 80).0).sum();
        ensure!(removed == level.removed_mass.lo && &survivors + &removed == previous, "L = {}: mass does not balance", level.level);
        line.push(format!("{:.6}", f64_of(&level.surviving_mass.hi)));
        previous = survivors;
        previous_bound = level.surviving_mass.hi.clone();
    }
    Ok(format!("surviving {}; K_lo = {:.3e}", line.join(", "), f64_of(&report.k.lo)))
}

fn criterion_7() -> Outcome {
    let cover = excluded_interval_cover(12).map_err(|e| e.to_string())?;
    let images: Vec<_> = cover.gaps.iter().map(|g| g.image_gap.clone()).collect();
    ensure!(cover.disjoint && pairwise_disjoint(&images), "emitted gaps overlap");
    ensure!(cover.all_certified && cover.prefixes_match, "uncertified or mismatched prefix gap");
    // brute force over 12-bit strings: no (1,0,0) at block positions 1, 4, 7, 10
    let block_free = (0u32..1 << 12)
        .filter(|s| (0..4).all(|b| (s >> (9 - 3 * b)) & 0b111 != 0b100))
        .count() as i64;
    let block_residual = q(block_free, 1 << 12);
    // the gaps with K at block positions, over every prefix, leave exactly this residual
    let mut block_gaps = Vec::new();
    for k in [1usize, 4, 7, 10] {
        for code in 0..1u32 << (k - 1) {
            let prefix: Vec<u8> = (0..k - 1).map(|i| ((code >> (k - 2 - i)) & 1) as u8).collect();
            let g = toy_gap_construct(&prefix, k).map_err(|e| e.to_string())?;
            ensure!(g.certified, "block gap K = {k} not certified");
            block_gaps.push(g.image_gap);
        }
    }
    block_gaps.sort();
    let mut covered = Rational::zero();
    let mut end = Rational::zero();
    for (a, b) in &block_gaps {
        let start = if *a > end { a.clone() } else { end.clone() };
        if *b > start {
            covered += b - &start;
            end = b.clone();
        }
    }
    ensure!(Rational::one() - &covered == block_residual, "block residual {} vs {block_residual}", Rational::one() - &covered);
    // the full first-occurrence cover, against a brute-force count over 14-bit strings
    let any_free = (0u32..1 << 14)
        .filter(|s| (1..=12).all(|p| (s >> (14 - p - 2)) & 0b111 != 0b100))
        .count() as i64;
    ensure!(any_free as u64 == count_pattern_free(12), "pattern-free counts disagree");
    ensure!(cover.residual == q(any_free, 1 << 14), "cover residual {} vs {any_free}/16384", cover.residual);
    ensure!(cover.residual <= block_residual, "cover residual above the block residual");
    Ok(format!(
        "block residual {block_residual} matches brute-force count {block_free}/2^12; full cover residual {} matches {any_free}/2^14 over {} gaps",
        cover.residual,
        cover.gaps.len()
    ))
}

fn criterion_8() -> Outcome {
    let f = sum_measures(vec![IFSMeasure::cantor(), IFSMeasure::quarter_cantor()]).map_err(|e| e.to_string())?;
    let cert = delta0_estimate(&f, 6).map_err(|e| e.to_string())?;
    ensure!(cert.delta0 > Rational::zero() && cert.verified, "delta0 not certified: {cert:?}");
    let mu = IFSMeasure::quarter_cantor();
    let eta = IFSMeasure::cantor();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let ends = mu.cylinder_endpoints(10).map_err(|e| e.to_string())?;
    for _ in 0..1000 {
        let x = &ends[rng.gen_range(0..ends.len())];
        let r = &cert.delta0 * q(rng.gen_range(1..=1 << 20), 1 << 20);
        let (mu_lo, _) = mass_bracket(&mu, &(x - &r), &(x + &r), 80);
        let two = &r * qi(2);
        let (_, eta_hi) = mass_bracket(&eta, &(x - &two), &(x + &two), 80);
        ensure!(mu_lo >= eta_hi * qi(4), "domination fails at x = {x}, r = {r}");
    }
    let claim1 = inductive_claim1(&f, &OpenInterval::unit(), &q(1, 100), 40).map_err(|e| e.to_string())?;
    ensure!(claim1.certified, "claim 1 not certified");
    // a depth-4 cylinder of the quarter-Cantor support whose neighbourhood misses the Cantor set
    let mut found = None;
    for c in mu.cylinder_enumerate(4).map_err(|e| e.to_string())? {
        let j = OpenInterval::new(c.left.clone(), c.right.clone());
        if let Some(local) = delta0_for_interval(&f, &j, 64).map_err(|e| e.to_string())? {
            found = Some((j, local));
            break;
        }
    }
    let (j, local) = found.ok_or("no depth-4 cylinder with a local delta0")?;
    ensure!(j.length() <= local.delta0, "m(J) above delta0");
    let claim2 = inductive_claim2(&f, &j, &local.delta0, &local, DEFAULT_WINDOW, 64).map_err(|e| e.to_string())?;
    ensure!(claim2.holds, "claim 2 fails on {j}");
    let k64 = fracmax::gaps::shrink_constant(&mu, &q(1, 64));
    ensure!(claim2.k == k64, "claim 2 used K = {} instead of the 1/64 bracket", claim2.k);
    Ok(format!(
        "global delta0 = 2^-{} re-verified at 1000 balls; claim 1 at L = {}; claim 2 on J = {j} with local delta0 = {}",
        cert.delta0.denom().bits() - 1,
        claim1.splits,
        local.delta0
    ))
}

fn criterion_9() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_fracmax"))
            .args(["verify", "--suite", "all", "--seed", "7"])
            .output()
            .map_err(|e| e.to_string())
    };
    let first = run()?;
    let second = run()?;
    ensure!(first.status.success(), "first run exited with {:?}", first.status.code());
    ensure!(second.status.success(), "second run exited with {:?}", second.status.code());
    ensure!(!first.stdout.is_empty() && first.stdout == second.stdout, "reports differ");
    Ok(format!("two runs, {} identical bytes", first.stdout.len()))
}

/// Name, check and runtime limit in seconds where one is stated.
type Criterion = (&'static str, fn() -> Outcome, Option<u64>);

const CRITERIA: [Criterion; 9] = [
    ("exact anchors", criterion_1, Some(1)),
    ("maximal lower bound at 2/3", criterion_2, Some(10)),
    ("contact point 1/2", criterion_3, None),
    ("covering lemmas", criterion_4, Some(60)),
    ("detachment", criterion_5, None),
    ("recursion decay", criterion_6, Some(120)),
    ("toy-model combinatorics", criterion_7, None),
    ("multi-measure induction", criterion_8, Some(300)),
    ("determinism", criterion_9, None),
];

fn main() -> ExitCode {
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, run, limit)) in CRITERIA.iter().enumerate() {
        let n = i + 1;
        if !selected.is_empty() && !selected.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if limit.is_some_and(|l| elapsed > Duration::from_secs(l)) => {
                Err(format!("took {elapsed:.1?}, limit {} s", limit.unwrap_or_default()))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {n} ({name}): PASS in {:.2} s; {detail}", elapsed.as_secs_f64()),
            Err(detail) => {
                failed += 1;
                println!("criterion {n} ({name}): FAIL in {:.2} s; {detail}", elapsed.as_secs_f64());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
