//! One check per acceptance criterion. Each prints a PASS/FAIL line; the
//! test fails if any criterion does.

use std::io::Write;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use hyperorbit::counterexample_c0::{
    banach_lower_bound_check, build_block_family, dj_density_scans, product_exponent_u64,
    s_contains_u64, verify_conditions, verify_fact1, DSet,
};
use hyperorbit::hc_constructor::{
    assemble_vector, dyadic_block_family, dyadic_block_period, orbit_bound, select_subsequence,
    verify_orbit_bounds, DenseSequence, HCVector,
};
use hyperorbit::index_sets::{
    estimate_densities, estimate_from_members, make_prescribed_density_set, DensityOptions,
    IndexSet, IntervalUnion, PeriodicSet, SharedSet,
};
use hyperorbit::recurrence_analysis::{
    banach_anchor_windows, correlation_scan, eqbeta_sums, hitting_times_constructed, return_set,
    Ball,
};
use hyperorbit::sequence_spaces::SpaceSpec;
use hyperorbit::weighted_shifts::{
    frequent_hc_series_test, mixing_test, ShiftOperator, WeightSequence,
};
use hyperorbit_cli::commands::level_radius;
use num_bigint::BigUint;
use num_rational::Ratio;

const DENSITY_HORIZON: u64 = 100_000;
const DENSITY_BUDGET: Duration = Duration::from_secs(10);
const PRESCRIBED_TOL: f64 = 0.05;
const WEIGHT_LIMIT: u64 = 100_000;
const FACT1_BUDGET: Duration = Duration::from_secs(60);
const DJ_HORIZON: u64 = 1_000_000;
const CONSTRUCT_HORIZON: u64 = 10_000;
const CONSTRUCT_DEPTH: usize = 4;
const TRUNCATION_PAD: u64 = 64;
const TRUNCATION_TERM_MAX: f64 = 1e-6;
const CORRELATION_TOL: f64 = 1e-3;
const SERIES_TOL: f64 = 1e-6;
const RETURN_HORIZON: u64 = 10_000;
const RETURN_GAP_MAX: u64 = 64;
const RETURN_RADIUS: f64 = 0.5;

type Verdict = Result<String, String>;

fn check(cond: bool, ok: impl Into<String>, bad: impl Into<String>) -> Verdict {
    if cond {
        Ok(ok.into())
    } else {
        Err(bad.into())
    }
}

fn generated_sets() -> Vec<SharedSet> {
    let mut sets: Vec<SharedSet> = Vec::new();
    for i in 0..40u64 {
        let period = 1 + i % 17 + i / 17 * 5;
        let residues: Vec<u64> = (0..period).filter(|r| (r * 7 + i) % 3 != 0 || *r == 0).collect();
        sets.push(std::sync::Arc::new(PeriodicSet::new(period, &residues, i * 37).unwrap()));
    }
    for i in 0..30u64 {
        // blocks of growing length and spacing
        let blocks = (0..40u64).map(|b| {
            let start = b * b * (50 + i * 11) + i * 101;
            (start, start + 10 + (b * (i + 3)) % 400)
        });
        sets.push(std::sync::Arc::new(IntervalUnion::from_u64(blocks)));
    }
    let fractions: Vec<Ratio<u64>> = (0..=10).map(|n| Ratio::new(n, 10)).collect();
    let mut i = 0usize;
    while sets.len() < 100 {
        let pick = |k: usize| fractions[(i * (k + 3) + k * k) % fractions.len()];
        let mut r = [pick(0), pick(1), pick(2), pick(3)];
        r.sort();
        sets.push(std::sync::Arc::new(make_prescribed_density_set(r[0], r[1], r[2], r[3]).unwrap()));
        i += 1;
    }
    sets
}

fn c1_density_chain() -> Verdict {
    let sets = generated_sets();
    let start = Instant::now();
    let mut broken = Vec::new();
    for (i, a) in sets.iter().enumerate() {
        let r = estimate_densities(a.as_ref(), DENSITY_HORIZON, &[100, 1000]).map_err(|e| e.to_string())?;
        if !r.chain_holds() {
            broken.push(i);
        }
    }
    let took = start.elapsed();
    check(
        broken.is_empty() && took < DENSITY_BUDGET,
        format!("{} sets, chain exact, {:.2?}", sets.len(), took),
        format!("chain broken for {broken:?}, {took:.2?}"),
    )
}

fn c2_prescribed() -> Verdict {
    let t = [Ratio::new(0, 1), Ratio::new(1, 5), Ratio::new(1, 2), Ratio::new(1, 1)];
    let a = make_prescribed_density_set(t[0], t[1], t[2], t[3]).map_err(|e| e.to_string())?;
    let r = estimate_densities(&a, a.advertised_horizon(), &[a.advertised_window()])
        .map_err(|e| e.to_string())?;
    let got = r.as_f64();
    let worst = got
        .iter()
        .zip(t)
        .map(|(g, t)| (g - *t.numer() as f64 / *t.denom() as f64).abs())
        .fold(0.0, f64::max);
    check(
        worst <= PRESCRIBED_TOL,
        format!("{got:?}, max error {worst:.4}"),
        format!("{got:?}, max error {worst:.4}"),
    )
}

fn c3_weights() -> Verdict {
    let w = WeightSequence::counterexample();
    let mut product = 1.0f64;
    let mut mismatches = 0u64;
    for n in 1..=WEIGHT_LIMIT {
        // powers of two multiply exactly in f64
        product *= w.weight(n as i64);
        let c = product_exponent_u64(n);
        if product != 2f64.powi(c as i32) || (product == 1.0) == s_contains_u64(n) {
            mismatches += 1;
        }
    }
    check(
        mismatches == 0,
        format!("n <= {WEIGHT_LIMIT}, zero mismatches"),
        format!("{mismatches} mismatches"),
    )
}

fn c4_fact1() -> Verdict {
    let start = Instant::now();
    let r = verify_fact1(6, 100);
    let took = start.elapsed();
    check(
        r.passed() && took < FACT1_BUDGET,
        format!("{} candidates, {} in S, 0 violations, {took:.2?}", r.checked, r.in_s),
        format!("{} violations, {took:.2?}", r.violations.len()),
    )
}

fn c5_blocks() -> Verdict {
    let fam = build_block_family(3, 3).map_err(|e| e.to_string())?;
    let conds = verify_conditions(&fam);
    let conds_ok = conds.iter().all(|c| c.all_hold());
    let gaps = fam.check_gaps();
    let mut detail = Vec::new();
    let mut banach_ok = true;
    for k in 1..=2usize {
        let c = banach_lower_bound_check(&fam, k).map_err(|e| e.to_string())?;
        let ten = BigUint::from(10u32).pow(2 * k as u32);
        let bound = Ratio::new(BigUint::from(c.l0 - 1), BigUint::from(c.l0) * ten);
        let worst = c.ratio.clone().min(c.shifted_ratio.clone());
        banach_ok &= worst >= bound;
        detail.push(format!("k={k} l0={} ratio={} bound={bound}", c.l0, worst));
    }
    check(
        conds_ok && gaps.holds && banach_ok,
        format!("{} blocks, conditions and gaps hold; {}", fam.blocks.len(), detail.join("; ")),
        format!("conditions={conds_ok} gaps={} banach={banach_ok}; {}", gaps.holds, detail.join("; ")),
    )
}

fn c6_dj() -> Verdict {
    let mut problems = Vec::new();
    let mut prev = DSet::new(1).unwrap().members_u64(0, DJ_HORIZON);
    for j in 2..=6u64 {
        let cur = DSet::new(j).unwrap().members_u64(0, DJ_HORIZON);
        if !cur.iter().all(|n| prev.binary_search(n).is_ok()) {
            problems.push(format!("D_{j} not inside D_{}", j - 1));
        }
        prev = cur;
    }
    let js = [1, 2, 3, 4, 5, 6, 91, 92];
    let scans = dj_density_scans(&js, DJ_HORIZON).map_err(|e| e.to_string())?;
    for pair in scans.windows(2) {
        let falls = pair[0]
            .rows
            .iter()
            .zip(&pair[1].rows)
            .all(|(a, b)| b.ratio <= a.ratio);
        if !falls {
            problems.push(format!("density rises from j={} to j={}", pair[0].j, pair[1].j));
        }
    }
    let mut sampled = 0;
    for s in &scans {
        sampled += s.e_checked;
        if !s.e_failures.is_empty() {
            problems.push(format!("D_{} points outside E_{}", s.j, s.j));
        }
        if s.rows.iter().any(|r| r.bound_applies && !r.within_bound) {
            problems.push(format!("bound exceeded for j={}", s.j));
        }
    }
    let applied = scans.iter().flat_map(|s| &s.rows).filter(|r| r.bound_applies).count();
    check(
        problems.is_empty(),
        format!("nested to {DJ_HORIZON}, {sampled} points in E_j, bound applied at {applied} rows"),
        problems.join("; "),
    )
}

fn rolewicz() -> ShiftOperator {
    ShiftOperator::rolewicz(2.0, SpaceSpec::l2()).unwrap()
}

fn constructed() -> Result<HCVector, String> {
    let t = rolewicz();
    let fam = dyadic_block_family(16, 16).map_err(|e| e.to_string())?;
    let mut dense = DenseSequence::new(SpaceSpec::l2());
    let plan = select_subsequence(&t, &fam, &mut dense, CONSTRUCT_DEPTH, CONSTRUCT_HORIZON)
        .map_err(|e| e.to_string())?;
    assemble_vector(plan, &t, CONSTRUCT_HORIZON + TRUNCATION_PAD).map_err(|e| e.to_string())
}

fn c7_construct(v: &HCVector) -> Verdict {
    let t = rolewicz();
    let report = verify_orbit_bounds(v, &t, CONSTRUCT_HORIZON).map_err(|e| e.to_string())?;
    let mut problems = Vec::new();
    let mut checked = 0;
    for lvl in &report.levels {
        checked += lvl.checked;
        if !lvl.violations.is_empty() {
            problems.push(format!("level {} violations {:?}", lvl.l, lvl.violations));
        }
        if !(lvl.truncation_term < TRUNCATION_TERM_MAX) {
            problems.push(format!("level {} truncation term {:e}", lvl.l, lvl.truncation_term));
        }
    }
    // direct B^n x where the entries of x are still representable
    let mut direct = 0;
    for l in 1..=CONSTRUCT_DEPTH {
        let y = &v.plan.targets[l - 1];
        for n in v.plan.level_members(l, 0, 900) {
            let p = t.apply_backward(&v.x, n).map_err(|e| e.to_string())?;
            let d = p.distance(y).map_err(|e| e.to_string())?;
            direct += 1;
            if d > orbit_bound(l) + TRUNCATION_TERM_MAX {
                problems.push(format!("direct check: n={n} distance {d}"));
            }
        }
    }
    check(
        problems.is_empty() && checked > 0,
        format!("{checked} orbit points within 9/2^l, {direct} rechecked directly"),
        problems.join("; "),
    )
}

fn c8_hitting(v: &HCVector) -> Verdict {
    let t = rolewicz();
    let balls: Vec<Ball> = (1..=CONSTRUCT_DEPTH)
        .map(|l| Ball::new(v.plan.targets[l - 1].clone(), level_radius(l)).unwrap())
        .collect();
    let reports = hitting_times_constructed(&t, v, &balls, CONSTRUCT_HORIZON).map_err(|e| e.to_string())?;
    // prefix ratios from H/10 on, past the first member of every level
    let opts = DensityOptions { tail_divisor: 10 };
    let mut problems = Vec::new();
    let mut detail = Vec::new();
    for (l, r) in (1..=CONSTRUCT_DEPTH).zip(&reports) {
        let level = v.plan.level_members(l, 0, CONSTRUCT_HORIZON);
        let missing = level.iter().filter(|n| r.times.binary_search(n).is_err()).count();
        if missing > 0 {
            problems.push(format!("level {l}: {missing} members of A_k not hit"));
        }
        let d = estimate_from_members(&r.times, CONSTRUCT_HORIZON, &[r.densities.window], &opts)
            .map_err(|e| e.to_string())?;
        let lower = d.as_f64()[1];
        let need = 0.5 / dyadic_block_period(v.plan.selected[l - 1], 16) as f64;
        if !(lower > need) {
            problems.push(format!("level {l}: lower density {lower:.5} <= {need:.5}"));
        }
        detail.push(format!("l={l} d_={lower:.5}>{need:.5}"));
    }
    check(problems.is_empty(), detail.join(" "), problems.join("; "))
}

fn c9_correlation() -> Verdict {
    let a = PeriodicSet::multiples(3).unwrap();
    let windows = banach_anchor_windows(&a, 100_000, &[999, 30_000]).map_err(|e| e.to_string())?;
    let r = correlation_scan(&a, Ratio::new(1, 2), 60, &windows).map_err(|e| e.to_string())?;
    let f = |x: Ratio<u64>| *x.numer() as f64 / *x.denom() as f64;
    let delta_ok = (f(r.delta) - 1.0 / 3.0).abs() <= CORRELATION_TOL;
    let eta_ok = (1..=20).all(|m| r.eta_k(3 * m).is_some_and(|e| (f(e) - 1.0 / 3.0).abs() <= CORRELATION_TOL));
    let gap_ok = r.f_evidence.as_ref().is_some_and(|e| e.verdict && e.gap_bound == 3);
    let anti_ok = r.antichain.len() <= 5 && (r.r_bound - 5.0).abs() < 1e-9;
    check(
        delta_ok && eta_ok && gap_ok && anti_ok,
        format!("delta={} F gap 3, antichain {:?}, bound {}", r.delta, r.antichain, r.r_bound),
        format!("delta={delta_ok} eta={eta_ok} gap={gap_ok} antichain={anti_ok} ({:?})", r.antichain),
    )
}

fn c10_eqbeta(v: &HCVector) -> Verdict {
    let t = rolewicz();
    let ball = Ball::new(v.plan.targets[0].clone(), level_radius(1)).unwrap();
    let hits = hitting_times_constructed(&t, v, &[ball], CONSTRUCT_HORIZON)
        .map_err(|e| e.to_string())?
        .remove(0)
        .times;
    let set = hyperorbit::index_sets::ExplicitSet::from_u64(hits.iter().copied());
    let step = (hits.len() / 50).max(1);
    let mut worst: f64 = 0.0;
    let mut sampled = 0;
    for &n in hits.iter().step_by(step) {
        let s = eqbeta_sums(t.weights(), 2.0, &set, n, CONSTRUCT_HORIZON, false).map_err(|e| e.to_string())?;
        worst = worst.max(s.left_sum).max(s.right_sum);
        sampled += 1;
    }
    check(
        worst <= 1.0 && sampled > 0,
        format!("{sampled} samples from {} hits, largest sum {worst:.6}", hits.len()),
        format!("largest sum {worst}"),
    )
}

fn c11_series() -> Verdict {
    let two = WeightSequence::constant(2.0).unwrap();
    let s = frequent_hc_series_test(&two, 2.0, 4096).map_err(|e| e.to_string())?;
    let sum_ok = (s.partial_sum - 1.0 / 3.0).abs() <= SERIES_TOL;
    let ratio = WeightSequence::ratio_power(2.0).unwrap();
    let d = frequent_hc_series_test(&ratio, 2.0, 100_000).map_err(|e| e.to_string())?;
    let m = mixing_test(&ratio, 100_000).map_err(|e| e.to_string())?;
    let div_ok = d.evidence.to_string() == "diverging";
    check(
        sum_ok && div_ok && m.tends_to_infinity,
        format!("partial sum {:.9}; ratio weights {} and {}", s.partial_sum, d.label(), m.label()),
        format!("sum={} evidence={} mixing={}", s.partial_sum, d.evidence, m.tends_to_infinity),
    )
}

fn c12_returns() -> Verdict {
    let t = rolewicz();
    let mut dense = DenseSequence::new(SpaceSpec::l2());
    let centers = dense.take(5).map_err(|e| e.to_string())?;
    let balls: Vec<Ball> = centers.into_iter().map(|c| Ball::new(c, RETURN_RADIUS).unwrap()).collect();
    let mut worst = 0;
    let mut problems = Vec::new();
    for (i, u) in balls.iter().enumerate() {
        for (j, v) in balls.iter().enumerate() {
            let r = return_set(&t, u, v, RETURN_HORIZON, 8).map_err(|e| e.to_string())?;
            match &r.evidence {
                Some(e) if e.verdict && e.gap_bound <= RETURN_GAP_MAX => worst = worst.max(e.gap_bound),
                _ => problems.push(format!("pair ({i},{j}): {}", r.label())),
            }
        }
    }
    check(
        problems.is_empty(),
        format!("25 pairs syndetic, largest gap bound {worst}"),
        problems.join("; "),
    )
}

const SUBCOMMANDS: [(&str, &[&str]); 13] = [
    ("densities", &["--set", "factorial", "--horizon", "20000", "--windows", "10,100"]),
    ("make-set", &["--set", "periodic:7:1,3", "--horizon", "500"]),
    ("check-family", &["--horizon", "20000"]),
    ("verify-counterexample", &["--kmax", "4", "--lmax", "30"]),
    ("dj-scan", &["--horizon", "100000", "--js", "1,2,3"]),
    ("construct", &["--depth", "3", "--horizon", "2000"]),
    ("orbit", &["--depth", "3", "--horizon", "2000"]),
    ("classify", &["--depth", "3", "--horizon", "2000"]),
    ("return-set", &["--horizon", "500", "--targets", "3"]),
    ("correlate", &["--set", "multiples:3", "--horizon", "5000", "--windows", "99,999"]),
    ("beta", &["--set", "factorial", "--alpha", "harmonic", "--alpha-c", "0.5", "--horizon", "5000"]),
    ("eqbeta", &["--set", "constructed", "--depth", "2", "--horizon", "2000"]),
    ("series-tests", &["--operator", "ratio-power:2", "--horizon", "50000"]),
];

fn outputs(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let manifest = std::fs::read_to_string(dir.join("manifest.txt")).unwrap_or_default();
    manifest
        .lines()
        .filter_map(|l| l.strip_prefix("output "))
        .map(|l| {
            let name = l.split_whitespace().next().unwrap().to_string();
            let body = std::fs::read(dir.join(&name)).unwrap_or_default();
            (name, body)
        })
        .collect()
}

fn c13_determinism() -> Verdict {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut problems = Vec::new();
    let mut files = 0;
    for (name, args) in SUBCOMMANDS {
        let mut runs = Vec::new();
        for (i, workers) in ["1", "1", "8", "8"].iter().enumerate() {
            let dir = tmp.path().join(format!("{name}-{i}"));
            let status = Command::new(env!("CARGO_BIN_EXE_hyperorbit"))
                .arg(name)
                .args(args)
                .args(["--workers", workers, "--out"])
                .arg(&dir)
                .output()
                .map_err(|e| e.to_string())?;
            if !status.status.success() {
                problems.push(format!("{name} exited with {}", status.status));
            }
            runs.push(outputs(&dir));
        }
        if runs[0].is_empty() {
            problems.push(format!("{name} wrote no outputs"));
        }
        if runs.iter().any(|r| *r != runs[0]) {
            problems.push(format!("{name} outputs differ"));
        }
        files += runs[0].len();
    }
    check(
        problems.is_empty(),
        format!("13 subcommands x 4 runs, {files} files identical"),
        problems.join("; "),
    )
}

#[test]
fn acceptance() {
    let v = constructed();
    let with_v = |f: fn(&HCVector) -> Verdict| match &v {
        Ok(v) => f(v),
        Err(e) => Err(format!("construction failed: {e}")),
    };
    let results: Vec<(u32, &str, Verdict)> = vec![
        (1, "density chain", c1_density_chain()),
        (2, "prescribed densities", c2_prescribed()),
        (3, "counterexample weights", c3_weights()),
        (4, "exhaustive candidate check", c4_fact1()),
        (5, "block family", c5_blocks()),
        (6, "D_j scan", c6_dj()),
        (7, "constructor certificate", with_v(c7_construct)),
        (8, "hitting densities", with_v(c8_hitting)),
        (9, "correlation oracle", c9_correlation()),
        (10, "eqbeta sums", with_v(c10_eqbeta)),
        (11, "series and mixing", c11_series()),
        (12, "return sets", c12_returns()),
        (13, "determinism", c13_determinism()),
    ];
    let mut err = std::io::stderr().lock();
    let mut failed = Vec::new();
    for (n, name, r) in &results {
        let (tag, detail) = match r {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed.push(*n);
                ("FAIL", d)
            }
        };
        writeln!(err, "criterion {n:>2} {tag} {name}: {detail}").unwrap();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
