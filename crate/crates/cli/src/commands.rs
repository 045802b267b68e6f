use std::fmt::Write as _;
use std::str::FromStr;

use anyhow::Result;
use hyperorbit::counterexample_c0::{
    banach_lower_bound_check, build_block_family, dj_density_scans, verify_conditions, verify_fact1,
};
use hyperorbit::hc_constructor::{
    assemble_vector, family_by_name, orbit_bound, select_subsequence, verify_orbit_bounds,
    DenseSequence, HCVector, OrbitReport,
};
use hyperorbit::index_sets::{
    check_gap_family, estimate_densities, to_f64, SetFamily, SetSpec, SharedSet,
};
use hyperorbit::recurrence_analysis::{
    banach_anchor_windows, beta_sequence, classify_with, correlation_scan, eqbeta_sums,
    hitting_times_capped, hitting_times_constructed, return_set, AlphaKind, AlphaProfile, Ball,
    HittingReport,
};
use hyperorbit::sequence_spaces::{SpaceSpec, SparseVec};
use hyperorbit::weighted_shifts::{
    frequent_hc_series_test, mixing_test, ShiftOperator, WeightSequence, WeightSpec,
};
use num_rational::Ratio;

use crate::config::{usage, ExperimentConfig};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A verification failed; names the failing check.
    Failed(String),
    /// An orbit was cut short; the outputs are partial.
    Truncated(String),
}

impl Status {
    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Failed(_) => 3,
            Status::Truncated(_) => 4,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Status::Ok => "ok".into(),
            Status::Failed(c) => format!("failed: {c}"),
            Status::Truncated(c) => format!("truncated: {c}"),
        }
    }

    /// Keeps the first failure; a failure outranks a truncation.
    fn fail(&mut self, check: impl Into<String>) {
        if !matches!(self, Status::Failed(_)) {
            *self = Status::Failed(check.into());
        }
    }

    fn truncate(&mut self, why: impl Into<String>) {
        if *self == Status::Ok {
            *self = Status::Truncated(why.into());
        }
    }
}

/// Files produced by a command, in the order they are written.
#[derive(Debug)]
pub struct Outcome {
    pub files: Vec<(String, String)>,
    pub status: Status,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            files: Vec::new(),
            status: Status::Ok,
        }
    }

    fn file(&mut self, name: &str, body: String) {
        self.files.push((name.to_string(), body));
    }
}

pub const COMMANDS: [&str; 13] = [
    "densities",
    "make-set",
    "check-family",
    "verify-counterexample",
    "dj-scan",
    "construct",
    "orbit",
    "classify",
    "return-set",
    "correlate",
    "beta",
    "eqbeta",
    "series-tests",
];

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    match cfg.command.as_str() {
        "densities" => densities(cfg),
        "make-set" => make_set(cfg),
        "check-family" => check_family(cfg),
        "verify-counterexample" => verify_counterexample(cfg),
        "dj-scan" => dj_scan(cfg),
        "construct" => construct(cfg),
        "orbit" => orbit(cfg),
        "classify" => classify(cfg),
        "return-set" => return_sets(cfg),
        "correlate" => correlate(cfg),
        "beta" => beta(cfg),
        "eqbeta" => eqbeta(cfg),
        "series-tests" => series_tests(cfg),
        other => Err(usage(format!("unknown command {other:?}"))),
    }
}

fn weights(cfg: &ExperimentConfig) -> Result<WeightSequence> {
    Ok(match cfg.operator.as_str() {
        "rolewicz2" => WeightSequence::constant(2.0)?,
        spec => WeightSpec::parse_short(spec)?.build()?,
    })
}

fn operator(cfg: &ExperimentConfig) -> Result<ShiftOperator> {
    Ok(ShiftOperator::new(weights(cfg)?, SpaceSpec::from_str(&cfg.space)?))
}

fn index_set(cfg: &ExperimentConfig) -> Result<SharedSet> {
    Ok(SetSpec::parse_short(&cfg.set)?.build()?)
}

fn family(cfg: &ExperimentConfig) -> Result<SetFamily> {
    Ok(match cfg.family.as_str() {
        "block-c0" => build_block_family(cfg.block_kmax, cfg.reps)?.set_family(),
        name => family_by_name(name, cfg.levels)?,
    })
}

fn ratio(s: &str) -> Result<Ratio<u64>> {
    let bad = || usage(format!("bad ratio {s:?}"));
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: u64 = n.trim().parse().map_err(|_| bad())?;
    let d: u64 = d.trim().parse().map_err(|_| bad())?;
    if d == 0 {
        return Err(bad());
    }
    Ok(Ratio::new(n, d))
}

fn f9(x: f64) -> String {
    format!("{x:.9}")
}

fn join<T: ToString>(v: &[T], sep: &str) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

/// Balls of radius `cfg.radius` around the first `cfg.targets` dense items.
fn dense_balls(cfg: &ExperimentConfig, space: SpaceSpec) -> Result<Vec<Ball>> {
    let mut dense = DenseSequence::new(space);
    dense
        .take(cfg.targets)?
        .into_iter()
        .map(|c| Ok(Ball::new(c, cfg.radius)?))
        .collect()
}

fn densities(cfg: &ExperimentConfig) -> Result<Outcome> {
    let set = index_set(cfg)?;
    let r = estimate_densities(set.as_ref(), cfg.horizon, &cfg.windows)?;
    let mut out = Outcome::new();
    let head = "lower_banach,lower_density,upper_density,upper_banach\n";
    let [a, b, c, d] = r.as_f64();
    out.file("densities.csv", format!("{head}{},{},{},{}\n", f9(a), f9(b), f9(c), f9(d)));
    out.file(
        "densities_exact.csv",
        format!(
            "{head}{},{},{},{}\n",
            r.lower_banach, r.lower_density, r.upper_density, r.upper_banach
        ),
    );
    let mut w = String::from("s,max_count,max_at,min_count,min_at\n");
    for e in &r.per_window {
        writeln!(w, "{},{},{},{},{}", e.s, e.max_count, e.max_at, e.min_count, e.min_at)?;
    }
    out.file("windows.csv", w);
    if !r.chain_holds() {
        out.status.fail("density chain");
    }
    Ok(out)
}

fn make_set(cfg: &ExperimentConfig) -> Result<Outcome> {
    let spec = SetSpec::parse_short(&cfg.set)?;
    let set = spec.build()?;
    let mut out = Outcome::new();
    out.file("set.txt", spec.to_text());
    let mut m = String::from("n\n");
    for n in set.members_u64(0, cfg.horizon) {
        writeln!(m, "{n}")?;
    }
    out.file("members.csv", m);
    Ok(out)
}

fn check_family(cfg: &ExperimentConfig) -> Result<Outcome> {
    let fam = family(cfg)?;
    let mut out = Outcome::new();
    let mut t = String::from("level,members_in_horizon,first_member\n");
    for k in 1..=fam.levels() {
        let members = fam.level(k).expect("level in range").members_u64(0, cfg.horizon);
        let first = members.first().map_or(String::new(), u64::to_string);
        writeln!(t, "{k},{},{first}", members.len())?;
    }
    out.file("family.csv", t);
    let verdict = if cfg.family == "block-c0" {
        build_block_family(cfg.block_kmax, cfg.reps)?.check_gaps()
    } else {
        check_gap_family(&fam, fam.levels(), cfg.horizon)?
    };
    let mut g = format!("family {}\n", fam.label);
    writeln!(g, "holds {}", verdict.holds)?;
    writeln!(g, "points {}", verdict.points)?;
    writeln!(g, "pairs_checked {}", verdict.pairs_checked)?;
    if let Some(v) = &verdict.first_violation {
        writeln!(g, "first_violation {v}")?;
        out.status.fail("gap condition");
    }
    out.file("gap.txt", g);
    Ok(out)
}

fn verify_counterexample(cfg: &ExperimentConfig) -> Result<Outcome> {
    let mut out = Outcome::new();
    let f = verify_fact1(cfg.kmax, cfg.lmax);
    let mut table = String::from("k,checked,in_S,low_witnesses,violations\n");
    let mut prev = verify_fact1(0, cfg.lmax);
    for k in 1..=cfg.kmax {
        let upto = verify_fact1(k, cfg.lmax);
        writeln!(
            table,
            "{k},{},{},{},{}",
            upto.checked - prev.checked,
            upto.in_s - prev.in_s,
            upto.low_witnesses.len() - prev.low_witnesses.len(),
            upto.violations.len() - prev.violations.len()
        )?;
        prev = upto;
    }
    out.file("fact1.csv", table);
    let mut t = String::from("k,l,m,witnesses,violation\n");
    let mut rows: Vec<(&_, bool)> = f.low_witnesses.iter().map(|r| (r, false)).collect();
    rows.extend(f.violations.iter().map(|r| (r, true)));
    rows.sort_by(|a, b| (a.0.k, a.0.l, &a.0.m).cmp(&(b.0.k, b.0.l, &b.0.m)));
    rows.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
    for (r, bad) in rows {
        let w: Vec<String> = r.witnesses.iter().map(|(j, l)| format!("{j}:{l}")).collect();
        writeln!(t, "{},{},{},{},{}", r.k, r.l, r.m, w.join(" "), u8::from(bad))?;
    }
    out.file("fact1_exceptions.csv", t);

    let fam = build_block_family(cfg.block_kmax, cfg.reps)?;
    let mut b = String::from("index,level,j0,l0,cond1,cond2,cond3,cond4,j0_minimal\n");
    let conds = verify_conditions(&fam);
    for (blk, c) in fam.blocks.iter().zip(&conds) {
        let h = c.holds.map(u8::from);
        writeln!(
            b,
            "{},{},{},{},{},{},{},{},{}",
            blk.index, blk.level, blk.j0, blk.l0, h[0], h[1], h[2], h[3], u8::from(c.j0_minimal)
        )?;
    }
    out.file("blocks.csv", b);
    let gaps = fam.check_gaps();

    let mut bn = String::from("level,l0,s,count,ratio,shifted_count,shifted_ratio,required,holds\n");
    let mut banach_ok = true;
    for k in 1..=cfg.block_kmax.min(2) {
        let c = banach_lower_bound_check(&fam, k)?;
        banach_ok &= c.holds;
        writeln!(
            bn,
            "{},{},{},{},{},{},{},{},{}",
            c.level, c.l0, c.s, c.count, c.ratio, c.shifted_count, c.shifted_ratio, c.required,
            u8::from(c.holds)
        )?;
    }
    out.file("banach.csv", bn);

    let conds_ok = conds.iter().all(|c| c.all_hold());
    let mut s = String::new();
    writeln!(s, "fact1 k_max={} l_max={} checked={} in_S={} violations={}",
        f.k_max, f.l_max, f.checked, f.in_s, f.violations.len())?;
    writeln!(s, "blocks {} conditions_hold={conds_ok}", fam.label())?;
    writeln!(s, "gap holds={} points={}", gaps.holds, gaps.points)?;
    writeln!(s, "banach holds={banach_ok}")?;
    out.file("summary.txt", s);

    if !f.passed() {
        out.status.fail("fact1");
    }
    if !conds_ok {
        out.status.fail("block conditions");
    }
    if !gaps.holds {
        out.status.fail("gap condition");
    }
    if !banach_ok {
        out.status.fail("banach lower bound");
    }
    Ok(out)
}

fn dj_scan(cfg: &ExperimentConfig) -> Result<Outcome> {
    let mut js = cfg.js.clone();
    js.sort_unstable();
    js.dedup();
    let scans = dj_density_scans(&js, cfg.horizon)?;
    let mut out = Outcome::new();
    let mut t = String::from("j,N,count,ratio,bound,bound_applies\n");
    for s in &scans {
        for r in &s.rows {
            writeln!(
                t,
                "{},{},{},{},{},{}",
                s.j, r.n, r.count, f9(to_f64(r.ratio)), f9(r.bound), u8::from(r.bound_applies)
            )?;
        }
        if !s.passed() {
            out.status.fail(format!("D_{} scan", s.j));
        }
    }
    out.file("dj.csv", t);
    // counts at each checkpoint may not grow with j
    let monotone = scans.windows(2).all(|p| {
        p[0].rows.iter().zip(&p[1].rows).all(|(a, b)| b.count <= a.count)
    });
    let mut s = String::new();
    for scan in &scans {
        writeln!(s, "j={} e_checked={} e_failures={}", scan.j, scan.e_checked, scan.e_failures.len())?;
    }
    writeln!(s, "monotone_in_j {monotone}")?;
    out.file("summary.txt", s);
    if !monotone {
        out.status.fail("monotonicity in j");
    }
    Ok(out)
}

/// Selects, assembles and checks a vector; the shared front half of
/// `construct`, `orbit`, `classify` and `eqbeta`.
fn build_vector(cfg: &ExperimentConfig, t: &ShiftOperator) -> Result<(HCVector, OrbitReport)> {
    let fam = family(cfg)?;
    let mut dense = DenseSequence::new(t.space());
    let plan = select_subsequence(t, &fam, &mut dense, cfg.depth, cfg.horizon)?;
    let v = assemble_vector(plan, t, cfg.horizon + cfg.truncation_pad)?;
    let report = verify_orbit_bounds(&v, t, cfg.horizon)?;
    Ok((v, report))
}

fn construct(cfg: &ExperimentConfig) -> Result<Outcome> {
    let t = operator(cfg)?;
    let (v, report) = build_vector(cfg, &t)?;
    let mut out = Outcome::new();
    out.file("certificates.txt", v.plan.to_report());
    out.file("orbit_bounds.csv", report.to_csv());
    out.file("x.txt", v.x.to_text());
    if !v.plan.all_hold() {
        out.status.fail("plan certificates");
    }
    if !report.passed() {
        out.status.fail("orbit bounds");
    }
    Ok(out)
}

fn hitting(cfg: &ExperimentConfig, out: &mut Outcome) -> Result<Vec<HittingReport>> {
    let t = operator(cfg)?;
    let balls = dense_balls(cfg, t.space())?;
    let reports = match &cfg.vector {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("reading vector {path}: {e}")))?;
            let x = SparseVec::from_text(&text)?;
            hitting_times_capped(&t, &x, &balls, cfg.horizon, cfg.overflow_cap)?
        }
        None => {
            let (v, _) = build_vector(cfg, &t)?;
            hitting_times_constructed(&t, &v, &balls, cfg.horizon)?
        }
    };
    let mut h = String::from("target_id,n\n");
    let mut d = String::from("target_id,lower_banach,lower_density,upper_density,upper_banach,truncated_at\n");
    let mut warnings = String::new();
    for r in &reports {
        for n in &r.times {
            writeln!(h, "{},{n}", r.target_id)?;
        }
        let [a, b, c, e] = r.densities.as_f64();
        let cut = r.truncated_at.map_or(String::new(), |n| n.to_string());
        writeln!(d, "{},{},{},{},{},{cut}", r.target_id, f9(a), f9(b), f9(c), f9(e))?;
        for w in &r.warnings {
            writeln!(warnings, "target {}: {w}", r.target_id)?;
        }
        if let Some(n) = r.truncated_at {
            out.status.truncate(format!("orbit exceeded the overflow cap at n = {n}"));
        }
    }
    out.file("hitting_times.csv", h);
    out.file("densities.csv", d);
    if !warnings.is_empty() {
        out.file("warnings.txt", warnings);
    }
    Ok(reports)
}

fn orbit(cfg: &ExperimentConfig) -> Result<Outcome> {
    let mut out = Outcome::new();
    hitting(cfg, &mut out)?;
    Ok(out)
}

fn classify(cfg: &ExperimentConfig) -> Result<Outcome> {
    let mut out = Outcome::new();
    let reports = hitting(cfg, &mut out)?;
    let c = classify_with(&reports, cfg.theta)?;
    let mut s = format!("overall {}\n", c.label());
    for t in &c.per_target {
        let d = t.densities.map(f9);
        writeln!(s, "target {} {} densities={}", t.target_id, t.evidence, d.join(","))?;
    }
    out.file("classification.txt", s);
    Ok(out)
}

fn return_sets(cfg: &ExperimentConfig) -> Result<Outcome> {
    let t = operator(cfg)?;
    let balls = dense_balls(cfg, t.space())?;
    let mut out = Outcome::new();
    let mut csv = String::from("u,v,members,first,largest_gap,gap_bound,syndetic\n");
    let mut labels = String::new();
    for (i, u) in balls.iter().enumerate() {
        for (j, v) in balls.iter().enumerate() {
            let r = return_set(&t, u, v, cfg.horizon, cfg.probe_grid)?;
            let first = r.members.first().map_or(String::new(), u64::to_string);
            let (gap, bound) = r
                .evidence
                .as_ref()
                .map_or((String::new(), String::new()), |e| {
                    (e.largest_gap.to_string(), e.gap_bound.to_string())
                });
            writeln!(
                csv,
                "{},{},{},{first},{gap},{bound},{}",
                i + 1,
                j + 1,
                r.members.len(),
                u8::from(r.syndetic_subset_found())
            )?;
            writeln!(labels, "u={} v={} {}", i + 1, j + 1, r.label())?;
        }
    }
    out.file("return_set.csv", csv);
    out.file("summary.txt", labels);
    Ok(out)
}

fn correlate(cfg: &ExperimentConfig) -> Result<Outcome> {
    let set = index_set(cfg)?;
    let windows = banach_anchor_windows(set.as_ref(), cfg.horizon, &cfg.windows)?;
    let r = correlation_scan(set.as_ref(), ratio(&cfg.epsilon)?, cfg.corr_kmax, &windows)?;
    let mut out = Outcome::new();
    out.file("correlation.csv", r.to_csv());
    let mut s = String::new();
    writeln!(s, "delta {}", r.delta)?;
    writeln!(s, "epsilon {}", r.epsilon)?;
    writeln!(s, "threshold {}", r.threshold)?;
    let w: Vec<String> = r.windows.iter().map(|(m, len)| format!("[{m},{})", m + len)).collect();
    writeln!(s, "windows {}", w.join(" "))?;
    writeln!(s, "F {}", join(&r.f, ","))?;
    match &r.f_evidence {
        Some(e) => writeln!(s, "F_syndetic {}", e.label())?,
        None => writeln!(s, "F_syndetic none")?,
    }
    writeln!(s, "r_bound {}", f9(r.r_bound))?;
    writeln!(s, "antichain {}", join(&r.antichain, ","))?;
    out.file("summary.txt", s);
    if r.antichain.len() as f64 > r.r_bound + 1e-9 {
        out.status.fail("antichain size bound");
    }
    Ok(out)
}

fn alpha(cfg: &ExperimentConfig) -> Result<AlphaProfile> {
    let kind = match cfg.alpha.as_str() {
        "ones" => AlphaKind::Ones,
        "harmonic" => AlphaKind::Harmonic,
        "inverse-products" => AlphaKind::InverseProducts {
            weights: weights(cfg)?,
            p: cfg.p,
        },
        other => return Err(usage(format!("unknown alpha {other:?}"))),
    };
    Ok(AlphaProfile::new(kind, cfg.alpha_c, cfg.alpha_cutoff)?)
}

fn beta(cfg: &ExperimentConfig) -> Result<Outcome> {
    let set = index_set(cfg)?;
    let r = beta_sequence(set.as_ref(), &alpha(cfg)?, cfg.horizon)?;
    let mut out = Outcome::new();
    let mut b = String::from("n,beta\n");
    for (n, v) in &r.values {
        writeln!(b, "{n},{}", f9(*v))?;
    }
    out.file("beta.csv", b);
    let mut g = String::from("horizon,max_beta\n");
    for (h, v) in &r.growth {
        writeln!(g, "{h},{}", f9(*v))?;
    }
    out.file("growth.csv", g);
    out.file(
        "summary.txt",
        format!("alpha_sum {}\ngrowing {}\n", f9(r.alpha_sum), r.growing),
    );
    Ok(out)
}

/// Radius of the level-`l` target balls: just above the orbit bound.
pub fn level_radius(l: usize) -> f64 {
    orbit_bound(l) * (1.0 + 1e-9)
}

fn eqbeta(cfg: &ExperimentConfig) -> Result<Outcome> {
    let t = operator(cfg)?;
    let members: Vec<u64> = if cfg.set == "constructed" {
        let (v, _) = build_vector(cfg, &t)?;
        let y1 = v
            .plan
            .targets
            .first()
            .cloned()
            .ok_or_else(|| usage("the construction has no levels"))?;
        let ball = Ball::new(y1, level_radius(1))?;
        hitting_times_constructed(&t, &v, &[ball], cfg.horizon)?
            .remove(0)
            .times
    } else {
        index_set(cfg)?.members_u64(0, cfg.horizon)
    };
    let set = hyperorbit::index_sets::ExplicitSet::from_u64(members.iter().copied());
    let step = (members.len() / cfg.samples.max(1)).max(1);
    let mut out = Outcome::new();
    let mut csv = String::from("n,left_sum,left_terms,right_sum,right_terms\n");
    for &n in members.iter().step_by(step).take(cfg.samples) {
        let s = eqbeta_sums(t.weights(), cfg.p, &set, n, cfg.horizon, cfg.bilateral)?;
        writeln!(
            csv,
            "{n},{:e},{},{:e},{}",
            s.left_sum, s.left_terms, s.right_sum, s.right_terms
        )?;
        if s.left_sum > 1.0 || s.right_sum > 1.0 {
            out.status.fail(format!("sums exceed 1 at n = {n}"));
        }
    }
    out.file("eqbeta.csv", csv);
    Ok(out)
}

fn series_tests(cfg: &ExperimentConfig) -> Result<Outcome> {
    let w = weights(cfg)?;
    let s = frequent_hc_series_test(&w, cfg.p, cfg.horizon)?;
    let m = mixing_test(&w, cfg.horizon)?;
    let mut out = Outcome::new();
    out.file(
        "series.csv",
        format!(
            "p,horizon,partial_sum,previous_block,last_block,evidence\n{},{},{},{},{},{}\n",
            s.p,
            s.horizon,
            f9(s.partial_sum),
            f9(s.previous_block),
            f9(s.last_block),
            s.evidence
        ),
    );
    let mut mix = String::from("block_start,min_log2_product\n");
    for (i, v) in m.block_minima.iter().enumerate() {
        writeln!(mix, "{},{}", 1u64 << i, f9(*v))?;
    }
    out.file("mixing.csv", mix);
    out.file(
        "summary.txt",
        format!("series {}\nmixing {}\n", s.label(), m.label()),
    );
    Ok(out)
}
