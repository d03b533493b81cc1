//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::process::Command;
use std::sync::Arc;

use conlaw_core::entropy::{check_e_condition_fan, check_e_condition_points, check_e_condition_state, kinetic_ep_rate};
use conlaw_core::fronts::{trapezoid_splice, FrontKind};
use conlaw_core::fvoracle::{fitted_order, run as godunov, Grid1D};
use conlaw_core::residual::max_weak_residual;
use conlaw_core::selfsim::random_family;
use conlaw_core::{
    delta_density, entropy_rate_hdot, evolve, jump_ep_rate, kinetic_density, l1_distance, oracle_u, total_ep,
    ConvexFlux, FluxFunction, FluxKind, FrontState, Mode, PotentialData, Profile, QuadraticEntropy, TrapezoidDomain,
    Window,
};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (u32, &'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// `u²/2 + u⁴/12` with no closed-form antiderivatives, so every integral goes through quadrature.
#[derive(Debug)]
struct QuadratureQuartic;

impl FluxFunction for QuadratureQuartic {
    fn name(&self) -> &str {
        "quartic-quadrature"
    }
    fn value(&self, u: f64) -> f64 {
        0.5 * u * u + u.powi(4) / 12.0
    }
    fn derivative(&self, u: f64) -> f64 {
        u + u.powi(3) / 3.0
    }
    fn second_derivative(&self, u: f64) -> f64 {
        1.0 + u * u
    }
    fn convexity_bound(&self) -> f64 {
        1.0
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_pair(r: &mut ChaCha8Rng, bound: f64) -> (f64, f64) {
    loop {
        let (a, b) = (r.random_range(-bound..bound), r.random_range(-bound..bound));
        if (a - b).abs() > 1e-3 {
            return (a, b);
        }
    }
}

fn criterion_1() -> Outcome {
    let mut fluxes: Vec<ConvexFlux> = FluxKind::ALL.iter().map(|&k| ConvexFlux::from_kind(k, 2.0).unwrap()).collect();
    fluxes.push(ConvexFlux::new(Arc::new(QuadratureQuartic), 2.0).unwrap());
    let mut r = rng(1);
    let mut pass = true;
    let mut parts = Vec::new();
    for f in &fluxes {
        let tol = if f.has_closed_antiderivatives() { 1e-12 } else { 1e-8 };
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let (a, b) = random_pair(&mut r, 1.9);
            let sigma = f.speed(a, b);
            let by_delta = delta_density(f, a, b) * (1.0 + sigma * sigma).sqrt();
            worst = worst.max((kinetic_ep_rate(f, a, b) - by_delta).abs());
        }
        pass &= worst <= tol;
        parts.push(format!("{} max diff {worst:.2e} (tol {tol:.0e})", f.name()));
    }
    outcome(pass, parts.join(", "))
}

fn criterion_2() -> Outcome {
    let f = ConvexFlux::burgers(2.0);
    let mut r = rng(2);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (a, b) = random_pair(&mut r, 2.0);
        worst = worst.max((jump_ep_rate(&f, a, b) - (a - b).powi(3) / 12.0).abs());
    }
    outcome(worst <= 1e-12, format!("max |D - (a-b)^3/12| = {worst:.2e} over 100 pairs"))
}

const SELECTION_PAIRS: [(f64, f64); 3] = [(-1.0, 1.0), (-0.5, 1.5), (0.0, 2.0)];

fn argsort(v: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
    idx
}

fn criterion_3() -> Outcome {
    let mut pass = true;
    let mut fans = 0;
    let mut worst_margin = f64::INFINITY;
    for kind in [FluxKind::Burgers, FluxKind::Cosh] {
        let f = ConvexFlux::from_kind(kind, 3.0).unwrap();
        let pair = QuadraticEntropy::new(&f);
        for (k, &(ul, ur)) in SELECTION_PAIRS.iter().enumerate() {
            let fam = random_family(&f, ul, ur, 5, 20, 100 + k as u64).unwrap();
            let all: Vec<_> = std::iter::once(&fam.entropic).chain(&fam.members).collect();
            let ep: Vec<f64> = all.iter().map(|fan| fan.shocks().map(|(m, p, _)| jump_ep_rate(&f, m, p).abs()).sum()).collect();
            let hdot: Vec<f64> = all.iter().map(|fan| entropy_rate_hdot(fan, &pair)).collect();
            pass &= ep[0] == 0.0;
            pass &= ep[1..].iter().all(|&e| e > 0.0);
            for (fan, &e) in fam.members.iter().zip(&ep[1..]) {
                let d = fan.min_expansion_jump().unwrap_or(0.0);
                let margin = e - (d.powi(3) / 12.0 - 1e-10);
                worst_margin = worst_margin.min(margin);
                pass &= margin >= 0.0;
            }
            pass &= argsort(&ep) == argsort(&hdot);
            fans += all.len();
        }
    }
    outcome(
        pass,
        format!("{fans} fans; rarefaction is the unique zero-EP minimizer; min(EP - dmin^3/12 + 1e-10) = {worst_margin:.3e}; EP and Hdot rankings identical"),
    )
}

/// Piecewise data with at least one upward jump, values on a 0.1 grid.
fn non_entropic_data(r: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>) {
    loop {
        let n = r.random_range(2..=5usize);
        let mut x = -3.0;
        let xs: Vec<f64> = (0..n)
            .map(|_| {
                x += r.random_range(1.0..2.0);
                x
            })
            .collect();
        let us: Vec<f64> = (0..=n).map(|_| r.random_range(-15..=15i32) as f64 * 0.1).collect();
        if us.windows(2).any(|w| w[1] > w[0]) {
            return (xs, us);
        }
    }
}

fn criterion_4() -> Outcome {
    let f = ConvexFlux::burgers(3.0);
    let du = 1e-2;
    let mut r = rng(4);
    let (mut built, mut pass, mut worst_res, mut min_drop) = (0, true, 0.0f64, f64::INFINITY);
    let mut failures = Vec::new();
    let mut attempts = 0;
    while built < 10 && attempts < 200 {
        attempts += 1;
        let (xs, us) = non_entropic_data(&mut r);
        let s = FrontState::from_piecewise(&f, 0.0, &xs, &us, Mode::AsGiven, du).unwrap();
        let traj = evolve(&s, &f, 3.0, Mode::AsGiven, du).unwrap();
        let at_t1 = traj.state_at(1.0);
        let Some(i) = at_t1.front_kinds.iter().position(|&k| k == FrontKind::ExpansionShock) else { continue };
        let lambda_hat = 0.9 * TrapezoidDomain::lambda0(&f, at_t1.sup_norm()).min(1.0);
        let dom = TrapezoidDomain::new(1.0, 2.0, 0.25, lambda_hat).unwrap().centered_at(at_t1.positions[i]);
        built += 1;
        let sp = match trapezoid_splice(&traj, &dom, &f, du) {
            Ok(sp) => sp,
            Err(e) => {
                pass = false;
                failures.push(format!("splice error: {e}"));
                continue;
            }
        };
        let (s1, s2) = dom.s_range();
        let windows = [
            Window::Trapezoid(dom),
            Window::Rect { t_lo: 0.0, t_hi: 2.0, x_lo: None, x_hi: None },
            Window::Rect { t_lo: 0.5, t_hi: 2.0, x_lo: Some(s1 - 1.0), x_hi: Some(s2 + 1.0) },
        ];
        let before = traj.history();
        for w in &windows {
            let a = total_ep(&before, &f, w).unwrap().total_abs;
            let b = total_ep(&sp.history, &f, w).unwrap().total_abs;
            min_drop = min_drop.min(a - b);
            if b >= a {
                pass = false;
                failures.push(format!("EP {a} -> {b}"));
            }
        }
        let res = max_weak_residual(&sp.history, &f, -12.0, 12.0);
        worst_res = worst_res.max(res);
        pass &= res <= 1e-7;
    }
    pass &= built == 10;
    let mut detail = format!("{built} trajectories, 3 windows each; smallest EP drop {min_drop:.4}; max weak residual {worst_res:.2e}");
    if !failures.is_empty() {
        detail += &format!("; {}", failures.join("; "));
    }
    outcome(pass, detail)
}

fn hl_samples(data: &PotentialData, f: &ConvexFlux, lo: f64, hi: f64, n: usize, t: f64) -> (Vec<f64>, Vec<f64>) {
    let xs: Vec<f64> = (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect();
    let us = xs.iter().map(|&x| oracle_u(data, f, x, t, 1e-6).unwrap()).collect();
    (xs, us)
}

fn criterion_5() -> Outcome {
    let f = ConvexFlux::burgers(3.0);
    let du = 1e-2;
    let mut r = rng(5);
    let mut ft_ok = 0;
    for _ in 0..20 {
        let (xs, us) = non_entropic_data(&mut r);
        let s = FrontState::from_piecewise(&f, 0.0, &xs, &us, Mode::Entropic, du).unwrap();
        let traj = evolve(&s, &f, 2.0, Mode::Entropic, du).unwrap();
        if traj.snapshots.iter().filter(|s| s.time > 0.0).all(|s| check_e_condition_state(s, &f, du).holds) {
            ft_ok += 1;
        }
    }

    let mut members = 0;
    let mut members_failing = 0;
    for kind in [FluxKind::Burgers, FluxKind::Cosh] {
        let g = ConvexFlux::from_kind(kind, 3.0).unwrap();
        for (k, &(ul, ur)) in SELECTION_PAIRS.iter().enumerate() {
            let fam = random_family(&g, ul, ur, 5, 20, 100 + k as u64).unwrap();
            for fan in &fam.members {
                members += 1;
                if !check_e_condition_fan(fan, &g, 1.0, 0.0).holds {
                    members_failing += 1;
                }
            }
        }
    }

    let mut hl_ok = 0;
    let cases: [(&[f64], &[f64]); 4] =
        [(&[0.0], &[1.0, 0.0]), (&[0.0], &[-1.0, 1.0]), (&[0.0, 1.0], &[2.0, 1.0, 0.0]), (&[-1.0, 1.0], &[0.0, 1.0, 0.0])];
    let mut hl_cases = 0;
    for (xs, us) in cases {
        let data = PotentialData::piecewise(xs, us).unwrap();
        for t in [0.5, 1.0] {
            hl_cases += 1;
            let (px, pu) = hl_samples(&data, &f, -3.0, 4.0, 701, t);
            let pts: Vec<(f64, f64)> = px.into_iter().zip(pu).collect();
            if check_e_condition_points(&pts, t, f.ddf_lower_bound(), 1e-6 / t).holds {
                hl_ok += 1;
            }
        }
    }
    outcome(
        ft_ok == 20 && members_failing == members && hl_ok == hl_cases,
        format!("front tracking {ft_ok}/20 pass; family members failing {members_failing}/{members}; Hopf-Lax {hl_ok}/{hl_cases} pass"),
    )
}

fn criterion_6() -> Outcome {
    let f = ConvexFlux::burgers(3.0);
    let pair = QuadraticEntropy::new(&f);
    let scenarios: [(&str, &[f64], &[f64]); 3] =
        [("shock", &[0.0], &[1.0, 0.0]), ("rarefaction", &[0.0], &[-1.0, 1.0]), ("merge", &[0.0, 1.0], &[2.0, 1.0, 0.0])];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, xs, us) in scenarios {
        let speed = us.iter().map(|&u| f.df(u).abs()).fold(0.0, f64::max);
        let pad = 1.02 * speed + 1e-2;
        let (lo, hi) = (xs[0] - pad, xs[xs.len() - 1] + pad);

        let ft = evolve(&FrontState::from_piecewise(&f, 0.0, xs, us, Mode::Entropic, 1e-3).unwrap(), &f, 1.0, Mode::Entropic, 1e-3)
            .unwrap()
            .last()
            .profile();
        let (hx, hu) = hl_samples(&PotentialData::piecewise(xs, us).unwrap(), &f, lo, hi, 2001, 1.0);
        let mids: Vec<f64> = hx.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        let hl = Profile::piecewise_constant(1.0, &mids, &hu);

        let init = Profile::piecewise_constant(0.0, xs, us);
        let mut errors = Vec::new();
        let mut gd = None;
        for n in [200, 400, 800, 1600] {
            let out = godunov(Grid1D::from_profile(&f, &init, lo, hi, n, 0.9).unwrap(), &f, 1.0, &pair, None).unwrap();
            let p = out.grid.profile();
            errors.push(l1_distance(&f, &p, &ft, lo, hi));
            gd = Some(p);
        }
        let gd = gd.unwrap();
        let d = [l1_distance(&f, &ft, &hl, lo, hi), l1_distance(&f, &ft, &gd, lo, hi), l1_distance(&f, &hl, &gd, lo, hi)];
        let order = fitted_order(&[200, 400, 800, 1600], &errors);
        pass &= d.iter().all(|&v| v <= 5e-3) && order >= 0.5;
        parts.push(format!("{name}: FT-HL {:.2e}, FT-GD {:.2e}, HL-GD {:.2e}, order {order:.2}", d[0], d[1], d[2]));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_7() -> Outcome {
    let fluxes: Vec<ConvexFlux> = FluxKind::ALL.iter().map(|&k| ConvexFlux::from_kind(k, 2.0).unwrap()).collect();
    let mut r = rng(7);
    let mut bad = 0;
    for i in 0..1000 {
        let f = &fluxes[i % fluxes.len()];
        let (um, up) = random_pair(&mut r, 1.9);
        let (lo, hi) = (um.min(up), um.max(up));
        let sign = (um - up).signum();
        let outside = [lo - 1.0, lo - 1e-9, lo, hi, hi + 1e-9, hi + 1.0];
        let support_ok = outside.iter().all(|&a| kinetic_density(f, um, up, a).abs() <= 1e-14);
        let sign_ok = (1..64).all(|k| {
            let a = lo + (hi - lo) * k as f64 / 64.0;
            kinetic_density(f, um, up, a) * sign > 0.0
        });
        if !(support_ok && sign_ok) {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("{} of 1000 jumps with compact support and single sign", 1000 - bad))
}

fn criterion_8() -> Outcome {
    let f = ConvexFlux::burgers(3.0);
    let du = 0.05;
    let mut r = rng(8);
    let grid_data = |r: &mut ChaCha8Rng| {
        let n = r.random_range(1..=5usize);
        let mut x = -3.0;
        let xs: Vec<f64> = (0..n)
            .map(|_| {
                x += r.random_range(0.3..1.5);
                x
            })
            .collect();
        let mut us: Vec<f64> = (0..=n).map(|_| r.random_range(-40..=40i32) as f64 * du).collect();
        us[0] = 0.0;
        us[n] = 0.0;
        (xs, us)
    };
    let (mut worst_growth, mut sup_growth) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for _ in 0..30 {
        let (xs, us) = grid_data(&mut r);
        let (ys, vs) = grid_data(&mut r);
        let a = evolve(&FrontState::from_piecewise(&f, 0.0, &xs, &us, Mode::Entropic, du).unwrap(), &f, 3.0, Mode::Entropic, du).unwrap();
        let b = evolve(&FrontState::from_piecewise(&f, 0.0, &ys, &vs, Mode::Entropic, du).unwrap(), &f, 3.0, Mode::Entropic, du).unwrap();
        let mut prev = f64::INFINITY;
        for k in 0..=30 {
            let t = 0.1 * k as f64;
            let d = l1_distance(&f, &a.state_at(t).profile(), &b.state_at(t).profile(), -30.0, 30.0);
            if prev.is_finite() {
                worst_growth = worst_growth.max(d - prev);
            }
            prev = d;
        }
        for traj in [&a, &b] {
            let sups = traj.sup_norms();
            for w in sups.windows(2) {
                sup_growth = sup_growth.max(w[1] - w[0]);
            }
        }
    }
    outcome(
        worst_growth <= 1e-9 && sup_growth <= 0.0,
        format!("30 pairs; largest L1 increase {worst_growth:.2e}; largest sup-norm increase {sup_growth:.2e}"),
    )
}

fn criterion_9() -> Outcome {
    let out = std::env::temp_dir().join(format!("conlaw-acceptance-{}", std::process::id()));
    let run = Command::new(env!("CARGO_BIN_EXE_conlaw")).args(["delta-audit", "--out"]).arg(&out).output();
    let Ok(run) = run else { return outcome(false, "could not launch conlaw".into()) };
    let emitted = out.join("delta_audit.csv").exists();
    let _ = std::fs::remove_dir_all(&out);
    let Ok(report) = serde_json::from_slice::<serde_json::Value>(&run.stdout) else {
        return outcome(false, "delta-audit printed no JSON".into());
    };
    let row = report["summary"]["rows"]
        .as_array()
        .and_then(|rows| rows.iter().find(|r| r["u_minus"] == 1.0 && r["u_plus"] == 0.0).cloned());
    let Some(row) = row else { return outcome(false, "no row for (1, 0)".into()) };
    let literal = row["literal"].as_f64().unwrap_or(f64::NAN);
    let kinetic = row["kinetic"].as_f64().unwrap_or(f64::NAN);
    let (lit_ref, kin_ref) = (5.0 / 12.0 * 2.0 / 5f64.sqrt(), 1.0 / (6.0 * 5f64.sqrt()));
    outcome(
        run.status.success() && emitted && (literal - lit_ref).abs() < 1e-12 && (kinetic - kin_ref).abs() < 1e-12,
        format!("informational: literal {literal:.12} (5/12*2/sqrt5 = {lit_ref:.12}), kinetic {kinetic:.12} (1/(6 sqrt5) = {kin_ref:.12}), ratio {:.6}", literal / kinetic),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "EP dual evaluation", criterion_1),
        (2, "Burgers closed form", criterion_2),
        (3, "entropy-rate selection", criterion_3),
        (4, "splice monotonicity", criterion_4),
        (5, "E-condition equivalence", criterion_5),
        (6, "oracle triangle", criterion_6),
        (7, "Kruzhkov structure", criterion_7),
        (8, "contraction and stability", criterion_8),
        (9, "delta discrepancy audit", criterion_9),
    ];
    let mut failed = 0;
    for (n, name, check) in criteria {
        let o = check();
        println!("criterion {n} [{name}]: {} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} of 9 criteria pass", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
