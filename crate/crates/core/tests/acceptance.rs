//! Acceptance suite. Prints one PASS/FAIL line per criterion, then asserts
//! that the failures are exactly the known unattainable ones.

mod common;

use std::time::{Duration, Instant};

use phasefront::config::Config;
use phasefront::eos::{c_damp, State};
use phasefront::initial::StepProfile;
use phasefront::oracle::{run_suite, SweepReport};
use phasefront::params::{choose_parameters, k_threshold, m_bar, w, w_inverse, z};
use phasefront::riemann::solve_lax;
use phasefront::tracker::{approximate_initial_data, run, run_scheme, FrontKind, MonitorMode, SchemeOutcome, SimulationConfig};

use common::{corpus, phases_for, run_case, Case};

/// Checks that fail by design; see the notes printed with each.
const UNATTAINABLE: &[&str] = &["1b", "4c"];

struct Outcome {
    id: &'static str,
    passed: bool,
}

#[derive(Default)]
struct Report {
    outcomes: Vec<Outcome>,
}

impl Report {
    fn check(&mut self, id: &'static str, what: &str, passed: bool, detail: String) {
        println!("{} [{id}] {what}: {detail}", if passed { "PASS" } else { "FAIL" });
        self.outcomes.push(Outcome { id, passed });
    }

    fn sweeps(&mut self, id: &'static str, reports: &[SweepReport], filter: &[&str], budget: Option<(Duration, Duration)>) {
        let selected: Vec<&SweepReport> = reports.iter().filter(|r| filter.iter().any(|f| r.check == *f)).collect();
        assert_eq!(selected.len(), filter.len(), "missing sweeps for [{id}]");
        let mut passed = selected.iter().all(|r| r.passed);
        let mut detail: Vec<String> = selected
            .iter()
            .map(|r| format!("{} ({}, {} cases) max {:.3e} <= {:.1e}", r.check, r.grid, r.cases, r.max_violation, r.tolerance))
            .collect();
        if let Some((took, limit)) = budget {
            passed &= took <= limit;
            detail.push(format!("runtime {:.2?} (limit {:.0?})", took, limit));
        }
        self.check(id, "oracle sweeps", passed, detail.join("; "));
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn constants(rep: &mut Report) {
    let limit = 2.0 / 9.0 * (2.0 + 3f64.sqrt()).ln();
    let k_near_two = k_threshold(2.0 - 1e-8).unwrap();
    rep.check(
        "1a",
        "K(2 - 1e-8) = (2/9) log(2 + sqrt 3) within 1e-6",
        (k_near_two - limit).abs() <= 1e-6,
        format!("K = {k_near_two:.12}, limit {limit:.12}, |diff| {:.3e}", (k_near_two - limit).abs()),
    );

    // K(r) behaves like 2 log(4/r) as r -> 0, about 39.6 at r = 1e-8; the
    // value 1e3 is only reached near r = 4 e^{-500}.
    let k_small = k_threshold(1e-8).unwrap();
    rep.check(
        "1b",
        "K(1e-8) > 1e3 (unattainable: K(1e-8) ~ 2 log(4e8))",
        k_small > 1e3,
        format!("K(1e-8) = {k_small:.6}, 2 log(4/r) = {:.6}", 2.0 * (4e8f64).ln()),
    );

    let mb = m_bar();
    let c = c_damp(mb);
    let wv = w(mb);
    rep.check(
        "1c",
        "c(m_bar) = 1/3 and w(m_bar) = 2 within 1e-12",
        (c - 1.0 / 3.0).abs() <= 1e-12 && (wv - 2.0).abs() <= 1e-12,
        format!("c = {c:.16}, w = {wv:.16}"),
    );

    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let r = 0.01 + 1.98 * (i as f64 + 0.5) / 1000.0;
        let composed = z(w_inverse(r).unwrap());
        worst = worst.max((k_threshold(r).unwrap() - composed).abs());
    }
    rep.check("1d", "K(r) = z(w^-1(r)) on 1000 points in (0.01, 1.99)", worst <= 1e-10, format!("max |diff| {worst:.3e} <= 1e-10"));
}

fn solvers(rep: &mut Report) {
    let (reports, took) = timed(|| run_suite("identities", 50).unwrap());
    rep.sweeps(
        "2",
        &reports,
        &["Lax solver residuals", "Rankine-Hugoniot residual of shocks"],
        Some((took, Duration::from_secs(10))),
    );
}

fn lemma53(rep: &mut Report) {
    let (reports, took) = timed(|| run_suite("lemma53", 50).unwrap());
    let junction: Vec<&str> = reports.iter().filter(|r| r.check.starts_with("junction")).map(|r| r.check.as_str()).collect();
    let mut filter = vec!["oracle vs solver reflected size", "reflected <= c(|alpha|) min(|alpha|, beta)"];
    filter.extend(junction);
    rep.sweeps("3", &reports, &filter, Some((took, Duration::from_secs(30))));
}

struct CorpusRun {
    case: Case,
    outcome: SchemeOutcome,
}

fn corpus_runs() -> Vec<CorpusRun> {
    corpus(20, 30)
        .into_iter()
        .map(|case| {
            let outcome = run_case(&case, 8, 12.0, MonitorMode::Warn);
            CorpusRun { case, outcome }
        })
        .collect()
}

fn count_law(run: &CorpusRun, prefix: &str) -> usize {
    run.outcome.trajectory.violations.iter().filter(|v| v.check.law.starts_with(prefix)).count()
}

fn monotonicity(rep: &mut Report, runs: &[CorpusRun]) {
    let mut events = 0;
    let mut worst_df = f64::NEG_INFINITY;
    let mut sets = Vec::new();
    for r in runs {
        let snaps = &r.outcome.trajectory.snapshots;
        events += r.outcome.trajectory.stats.events;
        for w in snaps.windows(2) {
            worst_df = worst_df.max(w[1].f - w[0].f);
        }
        sets.push(format!("d2={:.1} tv={:.3}", r.case.phases.delta2, r.case.combined_tv));
    }
    println!("      corpus: {}", sets.join(", "));
    rep.check(
        "4a",
        "dF <= 1e-10 at every event (20 seeded data sets)",
        worst_df <= 1e-10,
        format!("{events} events, max dF {worst_df:.3e}"),
    );

    let literal: usize = runs.iter().map(|r| r.outcome.trajectory.stats.literal_decrease_failures).sum();
    let mixed: usize = runs.iter().map(|r| r.outcome.trajectory.stats.literal_decrease_failures_mixed_orders).sum();
    rep.check(
        "4b",
        "dF <= -(1-mu)[dF_h]_- at every event without lower-order waves",
        literal == mixed,
        format!("{} failures outside T_(h,l) with l < h", literal - mixed),
    );
    // In T_(h,l) with l < h the surviving wave takes order l, so F_l grows
    // and the sum over l < h in the growth bound does not vanish.
    rep.check(
        "4c",
        "dF <= -(1-mu)[dF_h]_- at every event (unattainable on T_(h,l), l < h)",
        literal == 0,
        format!("{literal} failing events, all {mixed} in T_(h,l) with l < h"),
    );
    let corrected: usize = runs.iter().map(|r| count_law(r, "dF <= -(1-mu)([dF_h]_- - sum")).sum();
    rep.check(
        "4d",
        "dF <= -(1-mu)([dF_h]_- - sum_{l<h} dF_l) at every event",
        corrected == 0,
        format!("{corrected} failing events"),
    );
    let laws: usize = runs
        .iter()
        .map(|r| count_law(r, "F_k unchanged") + count_law(r, "F_h decreases") + count_law(r, "F_{h+1} increases") + count_law(r, "[dF_{h+1}]_+") + count_law(r, "crossing"))
        .sum();
    rep.check("4e", "per-order sign pattern and growth bound at every event", laws == 0, format!("{laws} failing checks"));
}

fn decay(rep: &mut Report, runs: &[CorpusRun]) {
    let mut worst_ratio: f64 = 0.0;
    let mut checks = 0;
    let mut violations = 0;
    for r in runs {
        violations += count_law(r, "tail decay");
        let ledger = &r.outcome.trajectory.ledger;
        let f = ledger.f_values();
        for k in 2..=f.len() {
            let tail: f64 = f[k - 1..].iter().sum();
            let bound = ledger.mu.powi(k as i32 - 1) * ledger.f1_initial;
            worst_ratio = worst_ratio.max(tail / bound);
            checks += 1;
            if tail > bound + 1e-10 {
                violations += 1;
            }
        }
    }
    rep.check(
        "5a",
        "tail F_k(t) <= mu^(k-1) F_1(0+) + 1e-10 for all k at every event",
        violations == 0,
        format!("{violations} violations; final-state max tail/bound {worst_ratio:.3e} over {checks} orders"),
    );

    let config = Config::from_toml_str(LADDER).unwrap();
    let mut details = Vec::new();
    let mut ok = true;
    for nu in [4u32, 8, 16] {
        let prep = config.prepare_for(nu, MonitorMode::Strict).unwrap();
        let params = prep.params.clone().unwrap();
        let out = run_scheme(&prep.profile, &prep.phases, &params, &prep.settings).unwrap();
        let acc = out.trajectory.stats.max_composite_abs;
        ok &= acc <= 1.0 / nu as f64;
        details.push(format!("nu={nu}: {acc:.3e} <= {:.4} ({} events, rho {:.2e})", 1.0 / nu as f64, out.trajectory.stats.events, out.rho));
    }
    let corpus_ok = runs.iter().all(|r| r.outcome.trajectory.stats.max_composite_abs <= 1.0 / 8.0);
    rep.check("5b", "composite accumulation <= 1/nu on the convergence fixture", ok && corpus_ok, details.join("; "));
}

fn global_bound(rep: &mut Report, runs: &[CorpusRun]) {
    let mut covered = 0;
    let mut worst_strength: f64 = 0.0;
    let mut worst_f: f64 = 0.0;
    let mut ok = true;
    for r in runs {
        let stats = &r.outcome.trajectory.stats;
        if !stats.covered {
            continue;
        }
        covered += 1;
        let m = r.case.params.m;
        let f_max = r.outcome.trajectory.snapshots.iter().map(|s| s.f).fold(0.0, f64::max);
        worst_strength = worst_strength.max(stats.max_strength / m);
        worst_f = worst_f.max(f_max / m);
        ok &= stats.max_strength <= m + 1e-10 && f_max <= m + 1e-10;
    }
    rep.check(
        "6",
        "strengths <= m and F <= m whenever Lbar(0+) <= m c(m)^2",
        ok && covered > 0,
        format!("{covered}/{} runs covered; max strength/m {worst_strength:.3e}, max F/m {worst_f:.3e}", runs.len()),
    );
}

fn schochet(rep: &mut Report) {
    let reports = run_suite("schochet", 32).unwrap();
    rep.sweeps(
        "7",
        &reports,
        &["A = c(e1)", "B = c(e3)", "degenerate case: sign of 1 + |e2| < 1/c(e1)"],
        None,
    );
}

fn riemann_sanity(rep: &mut Report) {
    let eta = 0.05;
    let mut worst_shock: f64 = 0.0;
    let mut worst_fan: f64 = 0.0;
    let mut largest_piece: f64 = 0.0;
    let mut cases = 0;
    let phases = phases_for(1.0);
    let pairs = [
        ((1.0, 0.0), (9.0, 0.0)),
        ((1.0, 0.5), (9.0, -0.5)),
        ((2.0, -0.3), (3.0, 0.4)),
        ((0.5, 0.2), (20.0, -0.1)),
        ((1.0, 0.0), (1.0, 1.0)),
        ((3.0, 0.0), (2.0, -2.0)),
    ];
    for ((vl, ul), (vr, ur)) in pairs {
        let profile = StepProfile::new(vec![0.0], vec![(vl, ul), (vr, ur)]).unwrap();
        let fronts = approximate_initial_data(&profile, &phases, eta).unwrap();
        let left = State { v: vl, u: ul, lam: phases.lam_l };
        let right = State { v: vr, u: ur, lam: phases.lam_r };
        let fan = solve_lax(left, right, phases.a_l, phases.a_r).unwrap();
        for (kind, eps) in [(FrontKind::One, fan.eps1), (FrontKind::Three, fan.eps3)] {
            let pieces: Vec<f64> = fronts.iter().filter(|f| f.kind == kind).map(|f| f.strength).collect();
            if eps < 0.0 {
                assert_eq!(pieces.len(), 1);
                worst_shock = worst_shock.max((pieces[0] - eps).abs());
            } else if eps > 0.0 {
                let sum: f64 = pieces.iter().sum();
                worst_fan = worst_fan.max((sum - eps).abs() / eps);
                largest_piece = largest_piece.max(pieces.iter().cloned().fold(0.0, f64::max));
            }
        }
        // Nothing interacts: the fan only spreads.
        let cfg = SimulationConfig {
            nu: 20,
            eta,
            rho: eta,
            t_max: 10.0,
            params: choose_parameters(&phases, 0.5).unwrap(),
            phases,
            initial: profile,
            speed_jitter: 1e-9,
            max_events: 1000,
            monitor: MonitorMode::Off,
            sample_times: vec![],
        };
        let traj = run(&cfg).unwrap();
        assert_eq!(traj.stats.events, 0);
        cases += 1;
    }
    rep.check(
        "8",
        "Riemann data: shocks exact, fan sums exact, pieces < eta",
        worst_shock == 0.0 && worst_fan <= 4.0 * f64::EPSILON && largest_piece < eta,
        format!("{cases} cases; shock |diff| {worst_shock:.1e}, fan relative |sum - eps| {worst_fan:.1e}, largest piece {largest_piece:.4} < {eta}"),
    );
}

fn tv_bounded(rep: &mut Report, runs: &[CorpusRun]) {
    let mut ok = true;
    let mut worst_growth: f64 = 0.0;
    let mut latest_sup = 0;
    for r in runs {
        let stats = &r.outcome.trajectory.stats;
        let tv: Vec<f64> = r.outcome.trajectory.snapshots.iter().map(|s| s.tv_vu).collect();
        let cut = tv.len() - tv.len() / 10;
        let early = tv[..cut].iter().cloned().fold(0.0, f64::max);
        let late = tv[cut..].iter().cloned().fold(0.0, f64::max);
        worst_growth = worst_growth.max(late / early);
        latest_sup = latest_sup.max(stats.sup_tv_event);
        ok &= stats.sup_tv.is_finite() && stats.sup_tv_event <= 100_000 && late <= early * (1.0 + 1e-12);
    }
    rep.check(
        "9",
        "sup TV(v)+TV(u) finite, attained in the first 1e5 events, no growth in the final decile",
        ok,
        format!("latest sup at event {latest_sup}; max final-decile/earlier ratio {worst_growth:.6}"),
    );
}

const LADDER: &str = r#"
[phase]
lam_l = 0.0
lam_r = 1.0
a_l = 1.0
a_r = 1.5

[initial]
kind = "bump"
p = 1.0
u = 0.0
center = -0.6
half_width = 0.4
log_p_amplitude = 0.3
u_amplitude = 0.1

[scheme]
nu = 4
t_max = 1.5
data_tolerance = 0.02
"#;

#[test]
fn acceptance() {
    let mut rep = Report::default();
    constants(&mut rep);
    solvers(&mut rep);
    lemma53(&mut rep);
    let runs = corpus_runs();
    monotonicity(&mut rep, &runs);
    decay(&mut rep, &runs);
    global_bound(&mut rep, &runs);
    schochet(&mut rep);
    riemann_sanity(&mut rep);
    tv_bounded(&mut rep, &runs);

    let failed: Vec<&str> = rep.outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    let passed = rep.outcomes.len() - failed.len();
    println!("acceptance: {passed} passed, {} failed ({})", failed.len(), failed.join(", "));
    assert_eq!(failed, UNATTAINABLE, "failures differ from the known unattainable checks");
}
