//! Independent oracles for same-family shock/rarefaction collisions and the
//! sweeps that check the Riemann solvers against them.
//!
//! All roots here come from plain bisection. They are test-side references
//! and must not share code paths with the solvers they check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::eos::{self, apply_composite, apply_wave, c_damp, h, Family, PhasePair, State};
use crate::error::{Error, Result};
use crate::params;
use crate::riemann::{solve_lax, solve_pseudo_accurate};

const ROOT_TOL: f64 = 1e-13;

/// Root of a strictly increasing `f` on `[lo, hi]`.
fn bisect_increasing(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    if f(lo) >= 0.0 {
        return lo;
    }
    if f(hi) <= 0.0 {
        return hi;
    }
    while hi - lo > ROOT_TOL * hi.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Rarefaction size that exactly cancels a same-family shock of size `z`.
pub fn x_o(z: f64) -> f64 {
    assert!(z >= 0.0, "x_o needs z >= 0");
    bisect_increasing(0.0, 2.0 * z, |x| (x - z).sinh() - z.sinh() + x)
}

/// Reflected shock size once the rarefaction has swallowed the shock.
pub fn y_pure(z: f64) -> f64 {
    assert!(z >= 0.0, "y_pure needs z >= 0");
    let target = z.sinh() - z;
    bisect_increasing(0.0, z, |y| y.sinh() + y - target)
}

/// Reflected shock size for a rarefaction `x` partially cancelling a shock `z`.
pub fn y_mixed(x: f64, z: f64) -> Result<f64> {
    if !(x >= 0.0) || !(z >= 0.0) {
        return Err(Error::Domain { what: "collision size", value: x.min(z) });
    }
    if x > x_o(z) * (1.0 + 1e-14) + 1e-300 {
        return Err(Error::Domain { what: "rarefaction beyond cancellation", value: x });
    }
    let lo = (x - z).max(0.0);
    let hi = x.min(z);
    Ok(bisect_increasing(lo, hi, |y| y.sinh() + (y - x + z).sinh() - z.sinh() + x))
}

/// Size of the reflected wave when a shock `alpha < 0` meets a rarefaction
/// `beta > 0` of the same family.
pub fn reflected_size(alpha: f64, beta: f64) -> f64 {
    let z = alpha.abs();
    if beta <= x_o(z) {
        y_mixed(beta, z).expect("inside the mixed window")
    } else {
        y_pure(z)
    }
}

/// Outcome of one sweep. `max_violation` is the largest measured value of
/// the checked quantity, recorded whether or not the check passes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub suite: String,
    pub check: String,
    pub grid: String,
    pub cases: usize,
    pub max_violation: f64,
    pub tolerance: f64,
    pub worst_inputs: Vec<f64>,
    pub passed: bool,
}

struct Sweep {
    report: SweepReport,
}

impl Sweep {
    fn new(suite: &str, check: &str, grid: impl Into<String>, tolerance: f64) -> Self {
        Sweep {
            report: SweepReport {
                suite: suite.into(),
                check: check.into(),
                grid: grid.into(),
                cases: 0,
                max_violation: f64::NEG_INFINITY,
                tolerance,
                worst_inputs: Vec::new(),
                passed: true,
            },
        }
    }

    fn record(&mut self, value: f64, inputs: &[f64]) {
        self.report.cases += 1;
        let value = if value.is_nan() { f64::INFINITY } else { value };
        if value > self.report.max_violation {
            self.report.max_violation = value;
            self.report.worst_inputs = inputs.to_vec();
        }
    }

    fn finish(mut self) -> SweepReport {
        if self.report.cases == 0 {
            self.report.max_violation = 0.0;
        }
        self.report.passed = self.report.max_violation <= self.report.tolerance;
        self.report
    }
}

/// `n` magnitudes in `(0, cap]`: half log-spaced near 0, half linear.
pub fn magnitude_grid(n: usize, cap: f64) -> Vec<f64> {
    let n_log = n / 2;
    let n_lin = n - n_log;
    let mut out = Vec::with_capacity(n);
    let (lo_exp, hi_exp) = (-4.0_f64, -1.0_f64);
    for i in 0..n_log {
        let s = if n_log > 1 { i as f64 / (n_log - 1) as f64 } else { 0.0 };
        out.push(cap * 10f64.powf(lo_exp + s * (hi_exp - lo_exp)) * 0.999);
    }
    for i in 0..n_lin {
        out.push(cap * (0.1 + 0.9 * (i + 1) as f64 / n_lin as f64));
    }
    out
}

/// Uniform grid `-cap + cap·i/n`, `i = 0..n`, so `[-cap, 0)` excluding 0.
fn negative_grid(n: usize, cap: f64) -> Vec<f64> {
    (0..n).map(|i| -cap + cap * i as f64 / n as f64).collect()
}

fn positive_grid(n: usize, cap: f64) -> Vec<f64> {
    (1..=n).map(|i| cap * i as f64 / n as f64).collect()
}

/// Reflected 1-strength when two 3-waves `first` then `second` collide.
fn solver_same_family(first: f64, second: f64, a: f64) -> Result<(f64, f64)> {
    let u_l = State { v: 1.0, u: 0.0, lam: 0.0 };
    let u_m = apply_wave(u_l, Family::Three, first, a);
    let u_r = apply_wave(u_m, Family::Three, second, a);
    let fan = solve_lax(u_l, u_r, a, a)?;
    Ok((fan.eps1, fan.eps3))
}

pub const SUITES: [&str; 5] = ["lemma53", "identities", "pseudo-estimates", "schochet", "k-threshold"];

pub fn run_suite(name: &str, grid: usize) -> Result<Vec<SweepReport>> {
    match name {
        "lemma53" => lemma53(grid),
        "identities" => identities(grid),
        "pseudo-estimates" => pseudo_estimates(grid),
        "schochet" => schochet(grid),
        "k-threshold" => k_threshold_suite(grid),
        other => Err(Error::InvalidData(format!("unknown suite {other:?}"))),
    }
}

pub fn lemma53(n: usize) -> Result<Vec<SweepReport>> {
    let a = 1.0;
    let alphas = negative_grid(n, 3.0);
    let betas = positive_grid(n, 3.0);
    let label = format!("{n}x{n} in [-3,0)x(0,3]");

    let mut equiv = Sweep::new("lemma53", "oracle vs solver reflected size", &label, 1e-10);
    let mut bound = Sweep::new("lemma53", "reflected <= c(|alpha|) min(|alpha|, beta)", &label, 0.0);
    let mut sign = Sweep::new("lemma53", "mixed collision reflects a shock", &label, 0.0);
    let mut plateau = Sweep::new("lemma53", "SR identity |e1|+|e3| = beta-|alpha|", &label, 1e-12);
    for &alpha in &alphas {
        for &beta in &betas {
            let oracle = reflected_size(alpha, beta);
            for (first, second) in [(alpha, beta), (beta, alpha)] {
                let (e1, e3) = solver_same_family(first, second, a)?;
                equiv.record((oracle - e1.abs()).abs(), &[alpha, beta]);
                sign.record(if e1 <= 0.0 { 0.0 } else { e1 }, &[alpha, beta]);
                if e3 >= 0.0 {
                    plateau.record((e1.abs() + e3.abs() - (beta - alpha.abs())).abs(), &[alpha, beta]);
                }
            }
            let cap = c_damp(alpha.abs()) * alpha.abs().min(beta);
            bound.record(oracle - cap - 1e-15 * cap.max(1.0), &[alpha, beta]);
        }
    }

    let mut junction = Sweep::new("lemma53", "y_mixed(x_o(z), z) = y_pure(z)", "z in {0.5, 1, 3}", 1e-10);
    for z in [0.5, 1.0, 3.0] {
        junction.record((y_mixed(x_o(z), z)? - y_pure(z)).abs(), &[z]);
    }

    let mut roots = Sweep::new("lemma53", "oracle roots satisfy their equations", "z on [0,5], x on [0,x_o(z)]", 1e-12);
    let zs: Vec<f64> = (0..=n).map(|i| 5.0 * i as f64 / n as f64).collect();
    for &z in &zs {
        let x = x_o(z);
        roots.record(((x - z).sinh() - z.sinh() + x).abs() / z.cosh().max(1.0), &[z]);
        let y = y_pure(z);
        roots.record((y.sinh() + y - z.sinh() + z).abs() / z.cosh().max(1.0), &[z]);
        for k in 0..=8 {
            let xm = x * k as f64 / 8.0;
            let ym = y_mixed(xm, z)?;
            let res = ym.sinh() + (ym - xm + z).sinh() - z.sinh() + xm;
            roots.record(res.abs() / z.cosh().max(1.0), &[xm, z]);
        }
    }

    let mut monotone = Sweep::new("lemma53", "x_o increasing", "z on [0,5]", 0.0);
    for w in zs.windows(2) {
        monotone.record(x_o(w[0]) - x_o(w[1]), &[w[0], w[1]]);
    }

    let mut concave = Sweep::new("lemma53", "y_mixed(., 3) concave", "x on [0, x_o(3)]", 1e-12);
    let xs: Vec<f64> = (0..=n).map(|i| x_o(3.0) * i as f64 / n as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| y_mixed(x, 3.0)).collect::<Result<_>>()?;
    for i in 1..xs.len() - 1 {
        concave.record(ys[i + 1] - 2.0 * ys[i] + ys[i - 1], &[xs[i]]);
    }

    let mut tight = Sweep::new("lemma53", "c(z) z - y_pure(z) decreasing", "z in {5, 8, 12}", 0.0);
    let gaps: Vec<f64> = [5.0, 8.0, 12.0].iter().map(|&z| c_damp(z) * z - y_pure(z)).collect();
    tight.record(gaps[1] - gaps[0], &[5.0, 8.0]);
    tight.record(gaps[2] - gaps[1], &[8.0, 12.0]);

    let mut cancel = Sweep::new("lemma53", "x_o(3) cancels the same-family wave", "z = 3", 1e-10);
    let (_, e3) = solver_same_family(-3.0, x_o(3.0), a)?;
    cancel.record(e3.abs(), &[3.0]);

    let mut shocks = Sweep::new("lemma53", "two shocks: stronger shock, reflected rarefaction", &label, 0.0);
    for &alpha in &alphas {
        for &beta in &alphas {
            let (e1, e3) = solver_same_family(alpha, beta, a)?;
            let grow = alpha.abs().max(beta.abs()) - e3.abs();
            let shock = e3.max(0.0);
            let rare = (-e1).max(0.0);
            shocks.record(grow.max(shock).max(rare), &[alpha, beta]);
        }
    }

    let mut cross = Sweep::new("lemma53", "1- and 3-waves cross unchanged", &label, 1e-12);
    for &alpha in alphas.iter().chain(&betas) {
        for &beta in alphas.iter().chain(&betas) {
            let u_l = State { v: 1.0, u: 0.0, lam: 0.0 };
            let u_m = apply_wave(u_l, Family::Three, alpha, a);
            let u_r = apply_wave(u_m, Family::One, beta, a);
            let fan = solve_lax(u_l, u_r, a, a)?;
            cross.record((fan.eps1 - beta).abs().max((fan.eps3 - alpha).abs()), &[alpha, beta]);
        }
    }

    Ok(vec![
        equiv.finish(),
        bound.finish(),
        sign.finish(),
        plateau.finish(),
        junction.finish(),
        roots.finish(),
        monotone.finish(),
        concave.finish(),
        tight.finish(),
        cancel.finish(),
        shocks.finish(),
        cross.finish(),
    ])
}

fn random_state(rng: &mut ChaCha8Rng, lam: f64, log_p_span: f64, a: f64) -> State {
    let log_p: f64 = rng.random_range(-log_p_span..log_p_span);
    State { v: a * a / log_p.exp(), u: rng.random_range(-5.0..5.0), lam }
}

/// Rankine–Hugoniot defect `max(|s[v] + [u]|, |s[u] - [p]|)` of a shock.
pub fn rankine_hugoniot_residual(family: Family, left: State, right: State, a: f64) -> Result<f64> {
    let s = eos::shock_speed(family, left.v, right.v, a)?;
    let dv = right.v - left.v;
    let du = right.u - left.u;
    let dp = eos::pressure(right.v, a)? - eos::pressure(left.v, a)?;
    let scale = 1.0 + dv.abs().max(du.abs()).max(dp.abs());
    Ok((s * dv + du).abs().max((s * du - dp).abs()) / scale)
}

pub fn identities(n: usize) -> Result<Vec<SweepReport>> {
    let cases = n * n * 4;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let grid = format!("{cases} random instances, p ratio in [1e-4, 1e4]");
    let mut residual = Sweep::new("identities", "Lax solver residuals", &grid, 1e-12);
    let mut rh = Sweep::new("identities", "Rankine-Hugoniot residual of shocks", &grid, 1e-12);
    let mut log_id = Sweep::new("identities", "e3 - e1 splits over a middle state", &grid, 1e-11);
    let mut vel_id = Sweep::new("identities", "velocity identity over a middle state", &grid, 1e-11);
    let span = 0.5 * 1e4f64.ln();
    for _ in 0..cases {
        let a_l = rng.random_range(0.2..5.0);
        let a_m = rng.random_range(0.2..5.0);
        let a_r = rng.random_range(0.2..5.0);
        let u_l = random_state(&mut rng, 0.0, span, a_l);
        let u_m = random_state(&mut rng, 0.5, span, a_m);
        let u_r = random_state(&mut rng, 1.0, span, a_r);
        let inputs = [u_l.v, u_l.u, u_r.v, u_r.u, a_l, a_r];

        let fan = solve_lax(u_l, u_r, a_l, a_r)?;
        let scale = (2.0 * (a_l * h(fan.eps1).abs() + a_r * h(fan.eps3).abs())).max(1.0);
        residual.record(fan.residuals[0].abs().max(fan.residuals[1].abs() / scale), &inputs);
        if fan.eps1 < 0.0 {
            rh.record(rankine_hugoniot_residual(Family::One, u_l, fan.mid_left, a_l)?, &inputs);
        }
        if fan.eps3 < 0.0 {
            rh.record(rankine_hugoniot_residual(Family::Three, fan.mid_right, u_r, a_r)?, &inputs);
        }

        let alpha = solve_lax(u_l, u_m, a_l, a_m)?;
        let beta = solve_lax(u_m, u_r, a_m, a_r)?;
        let lhs = fan.eps3 - fan.eps1;
        let rhs = alpha.eps3 + beta.eps3 - alpha.eps1 - beta.eps1;
        log_id.record((lhs - rhs).abs(), &inputs);
        let lhs = a_l * h(fan.eps1) + a_r * h(fan.eps3);
        let rhs = a_l * h(alpha.eps1) + a_m * h(alpha.eps3) + a_m * h(beta.eps1) + a_r * h(beta.eps3);
        vel_id.record((lhs - rhs).abs() / lhs.abs().max(1.0), &inputs);
    }
    Ok(vec![residual.finish(), rh.finish(), log_id.finish(), vel_id.finish()])
}

/// Reflected and transmitted strengths when a wave of `family` and strength
/// `delta` hits the composite `d20` through the accurate solver.
pub fn accurate_reflection(phases: &PhasePair, family: Family, delta: f64, d20: f64) -> Result<(f64, f64)> {
    let base = State { v: 1.0, u: 0.0, lam: phases.lam_l };
    let (left, right) = match family {
        Family::One => {
            let mid = apply_composite(base, phases, d20)?;
            (base, apply_wave(mid, Family::One, delta, phases.a_r))
        }
        Family::Three => {
            let u_l = eos::unapply_wave(base, Family::Three, delta, phases.a_l);
            (u_l, apply_composite(base, phases, d20)?)
        }
    };
    let fan = solve_pseudo_accurate(left, right, d20, phases)?;
    Ok(match family {
        Family::One => (fan.eps3, fan.eps1),
        Family::Three => (fan.eps1, fan.eps3),
    })
}

pub fn pseudo_estimates(n: usize) -> Result<Vec<SweepReport>> {
    let grid = format!("|delta2| in {{0.2, 0.5, 1, 1.5}} both signs, {n} strengths up to m, d20 in {{-0.2, 0, 0.2}}");
    let mut reflect = Sweep::new("pseudo-estimates", "accurate: |reflected| <= |delta2| |delta| / 2", &grid, 1e-12);
    let mut transmit_sign = Sweep::new("pseudo-estimates", "accurate: transmitted keeps its type", &grid, 0.0);
    let mut simplified = Sweep::new("pseudo-estimates", "simplified: |change| <= C_o |delta2| |delta|", &grid, 1e-12);
    for r in [0.2, 0.5, 1.0, 1.5] {
        for flip in [false, true] {
            // a_l + a_r = 2 gives delta2 = a_r - a_l.
            let (a_l, a_r) = if flip { (1.0 + r / 2.0, 1.0 - r / 2.0) } else { (1.0 - r / 2.0, 1.0 + r / 2.0) };
            let phases = PhasePair::new(0.0, 1.0, a_l, a_r)?;
            let m = params::w_inverse(r)?;
            let c_o = params::simplified_constant(m, phases.a_max());
            for &mag in &magnitude_grid(n, m) {
                for delta in [mag, -mag] {
                    for family in [Family::One, Family::Three] {
                        for d20 in [-0.2, 0.0, 0.2] {
                            let inputs = [a_l, a_r, delta, family.index() as f64, d20];
                            let (refl, trans) = accurate_reflection(&phases, family, delta, d20)?;
                            reflect.record(refl.abs() - 0.5 * r * delta.abs(), &inputs);
                            transmit_sign.record(if trans * delta < 0.0 { trans.abs() } else { 0.0 }, &inputs);
                        }
                        let change = crate::riemann::solve_pseudo_simplified(0.0, family, delta, &phases);
                        simplified.record(change.abs() - c_o * r * delta.abs(), &[a_l, a_r, delta]);
                    }
                }
            }
        }
    }
    Ok(vec![reflect.finish(), transmit_sign.finish(), simplified.finish()])
}

pub fn schochet(n: usize) -> Result<Vec<SweepReport>> {
    let cases = (n * n).max(1000);
    let mut rng = ChaCha8Rng::seed_from_u64(0xa11ce);
    let grid = format!("{cases} random shock-interface-shock patterns");
    let mut a_check = Sweep::new("schochet", "A = c(e1)", &grid, 1e-12);
    let mut b_check = Sweep::new("schochet", "B = c(e3)", &grid, 1e-12);
    for _ in 0..cases {
        let a_l = rng.random_range(0.2..5.0);
        let a_r = rng.random_range(0.2..5.0);
        let phases = PhasePair::new(0.0, 1.0, a_l, a_r)?;
        let e1 = -rng.random_range(1e-3..3.0);
        let e3 = -rng.random_range(1e-3..3.0);
        let u1 = random_state(&mut rng, 0.0, 3.0, a_l);
        let u0 = eos::unapply_wave(u1, Family::One, e1, a_l);
        let u2 = apply_composite(u1, &phases, rng.random_range(-0.5..0.5))?;
        let u3 = apply_wave(u2, Family::Three, e3, a_r);
        let (a, b) = params::schochet_reflection([u0, u1, u2, u3], &phases)?;
        a_check.record((a - c_damp(e1.abs())).abs(), &[e1, e3, a_l, a_r]);
        b_check.record((b - c_damp(e3.abs())).abs(), &[e1, e3, a_l, a_r]);
    }

    let side = (cases as f64).sqrt().ceil() as usize;
    let label = format!("{side}x{side} grid, e1 in [-4,0), e2 in (-2,2), c(e3) = 1 - 1e-9");
    let mut reduction = Sweep::new("schochet", "degenerate case: sign of 1 + |e2| < 1/c(e1)", &label, 0.0);
    let mut forms = Sweep::new("schochet", "expanded vs factored finiteness margin", &label, 1e-9);
    let c3 = 1.0 - 1e-9;
    for i in 0..side {
        let e1 = -4.0 * (i + 1) as f64 / side as f64;
        let c1 = c_damp(e1.abs());
        for j in 0..side {
            let e2 = -2.0 + 4.0 * (j as f64 + 0.5) / side as f64;
            let margin = params::finiteness_margin(c1, c3, e2);
            let reduced = 1.0 / c1 - 1.0 - e2.abs();
            if reduced.abs() > 1e-6 {
                let agree = (margin > 0.0) == (reduced > 0.0);
                reduction.record(if agree { 0.0 } else { 1.0 }, &[e1, e2]);
            }
            let p = c1 * c3;
            let disc = (c1 + c3).powi(2) - 8.0 * p * (1.0 - p);
            let factored = if disc >= 0.0 {
                let r1 = ((c1 + c3) - disc.sqrt()) / (2.0 * p);
                let r2 = ((c1 + c3) + disc.sqrt()) / (2.0 * p);
                p * (e2.abs() - r1) * (e2.abs() - r2)
            } else {
                p * ((e2.abs() - (c1 + c3) / (2.0 * p)).powi(2) - disc / (4.0 * p * p))
            };
            forms.record((margin - factored).abs() / margin.abs().max(1.0), &[e1, e2]);
        }
    }
    Ok(vec![a_check.finish(), b_check.finish(), reduction.finish(), forms.finish()])
}

pub fn k_threshold_suite(n: usize) -> Result<Vec<SweepReport>> {
    let points = (n * 200).max(10_000);
    let grid = format!("{points} points in (0, 2)");
    let mut monotone = Sweep::new("k-threshold", "K strictly decreasing", &grid, 0.0);
    let mut prev = f64::INFINITY;
    for i in 1..points {
        let r = 2.0 * i as f64 / points as f64;
        let k = params::k_threshold(r)?;
        monotone.record(if k < prev { 0.0 } else { k - prev + f64::MIN_POSITIVE }, &[r]);
        prev = k;
    }

    let mut limit = Sweep::new("k-threshold", "K(2 - 1e-8) = (2/9) log(2 + sqrt 3)", "r = 2 - 1e-8", 1e-6);
    limit.record((params::k_threshold(2.0 - 1e-8)? - params::small_data_bound()).abs(), &[2.0 - 1e-8]);

    let mut blowup = Sweep::new("k-threshold", "K unbounded as r -> 0", "r in {1e-2, 1e-4, 1e-6, 1e-8}", 0.0);
    let ks: Vec<f64> = [1e-2, 1e-4, 1e-6, 1e-8].iter().map(|&r| params::k_threshold(r)).collect::<Result<_>>()?;
    for w in ks.windows(2) {
        blowup.record(w[0] - w[1], &[w[0], w[1]]);
    }

    let mut composed = Sweep::new("k-threshold", "K(r) = z(w^-1(r))", "1000 points in (0.01, 1.99)", 1e-10);
    for i in 0..1000 {
        let r = 0.01 + 1.98 * (i as f64 + 0.5) / 1000.0;
        let direct = params::k_threshold(r)?;
        let via = params::z(params::w_inverse(r)?);
        composed.record((direct - via).abs(), &[r]);
    }

    let mut constants = Sweep::new("k-threshold", "c(m_bar) = 1/3 and w(m_bar) = 2", "m_bar = log(2 + sqrt 3)", 1e-12);
    constants.record((c_damp(params::m_bar()) - 1.0 / 3.0).abs(), &[params::m_bar()]);
    constants.record((params::w(params::m_bar()) - 2.0).abs(), &[params::m_bar()]);

    let mut shapes = Sweep::new("k-threshold", "w decreasing and z increasing on (m_bar, 20]", "1000 points", 0.0);
    let ms: Vec<f64> = (0..=1000).map(|i| params::m_bar() + (20.0 - params::m_bar()) * (i as f64 + 1e-3) / 1000.0).collect();
    for w in ms.windows(2) {
        let dw = params::w(w[1]) - params::w(w[0]);
        let dz = params::z(w[0]) - params::z(w[1]);
        shapes.record(dw.max(dz), &[w[0]]);
    }

    Ok(vec![monotone.finish(), limit.finish(), blowup.finish(), composed.finish(), constants.finish(), shapes.finish()])
}
