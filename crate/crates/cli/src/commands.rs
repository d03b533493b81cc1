use std::fmt::Write;

use conlaw_core::entropy::{
    check_e_condition_points, check_e_condition_state, delta_audit, delta_density_literal, fan_ep_rate,
};
use conlaw_core::export::{grid_csv, hopf_lax_csv, ledger_csv, ledger_summary, trajectory_csv, trajectory_jsonl};
use conlaw_core::fronts::{trapezoid_splice, FrontKind};
use conlaw_core::fvoracle::{convergence_report, run as godunov_run, Grid1D};
use conlaw_core::hjb::HlSample;
use conlaw_core::residual::max_weak_residual;
use conlaw_core::selfsim::{equal_split_family, random_family, Family};
use conlaw_core::{
    check_e_condition, combined_entropy_p, entropy_rate_hdot, evolve, l1_distance, solve_riemann, total_ep,
    ConvexFlux, Mode, PotentialData, Profile, QuadraticEntropy, Trajectory, TrapezoidDomain, Window,
};
use rayon::prelude::*;
use serde_json::json;

use crate::config::{count_expansions, FamilyConfig, Scenario};
use crate::report::Report;
use crate::{CliError, Command};

pub fn run(cmd: Command, sc: &Scenario, literal: bool) -> Result<Report, CliError> {
    let flux = sc.flux()?;
    let mut r = Report::new(cmd.name(), sc);
    match cmd {
        Command::Riemann => riemann(sc, &flux, &mut r)?,
        Command::Family => family(sc, &flux, &mut r)?,
        Command::Evolve => evolve_cmd(sc, &flux, &mut r)?,
        Command::Ep => ep(sc, &flux, &mut r, literal)?,
        Command::RateCompare => rate_compare(sc, &flux, &mut r)?,
        Command::Econd => econd(sc, &flux, &mut r)?,
        Command::Hopflax => hopflax(sc, &flux, &mut r)?,
        Command::Fv => fv(sc, &flux, &mut r)?,
        Command::Splice => splice(sc, &flux, &mut r)?,
        Command::DeltaAudit => audit(sc, &flux, &mut r, literal)?,
    }
    Ok(r)
}

fn riemann_pair(sc: &Scenario) -> Result<(f64, f64), CliError> {
    sc.initial.riemann_pair().ok_or_else(|| CliError::Config("`initial` must be Riemann data (one jump)".into()))
}

fn trajectory(sc: &Scenario, flux: &ConvexFlux) -> Result<Trajectory, CliError> {
    let init = sc.initial_state(flux)?;
    Ok(evolve(&init, flux, sc.t_end, sc.mode, sc.delta_u())?)
}

fn riemann(sc: &Scenario, flux: &ConvexFlux, r: &mut Report) -> Result<(), CliError> {
    let (ul, ur) = riemann_pair(sc)?;
    let fan = solve_riemann(flux, ul, ur)?;
    let rate = fan_ep_rate(flux, &fan);
    let e = check_e_condition(&fan.profile_at(1.0), flux, flux.ddf_lower_bound(), sc.tolerances.ep);
    r.check("fan_e_condition", e.holds, format!("worst excess {:e}", e.worst_excess));
    r.summary = json!({ "fan": fan, "ep_rate": rate });
    r.json("fan.json", &fan)
}

fn build_family(sc: &Scenario, flux: &ConvexFlux) -> Result<Family, CliError> {
    let (ul, ur) = riemann_pair(sc)?;
    Ok(match &sc.family {
        FamilyConfig::Random { max_intermediates, members } => {
            random_family(flux, ul, ur, *max_intermediates, *members, sc.seed)?
        }
        FamilyConfig::EqualSplit { splits } => equal_split_family(flux, ul, ur, splits)?,
    })
}

#[derive(Debug, Clone, serde::Serialize)]
struct FanRow {
    label: String,
    waves: usize,
    shocks: usize,
    min_jump: Option<f64>,
    ep_rate: f64,
    p_v: f64,
    h_dot: f64,
}

fn fan_rows(family: &Family, flux: &ConvexFlux) -> Vec<FanRow> {
    let pair = QuadraticEntropy::new(flux);
    let fans: Vec<(String, &conlaw_core::WaveFan)> = std::iter::once(("entropic".to_string(), &family.entropic))
        .chain(family.members.iter().enumerate().map(|(i, f)| (format!("member_{i}"), f)))
        .collect();
    // par_iter keeps input order on collect
    fans.par_iter()
        .map(|(label, fan)| FanRow {
            label: label.clone(),
            waves: fan.waves.len(),
            shocks: fan.shocks().count(),
            min_jump: fan.min_expansion_jump(),
            ep_rate: fan_ep_rate(flux, fan),
            p_v: combined_entropy_p(fan, &pair),
            h_dot: entropy_rate_hdot(fan, &pair),
        })
        .collect()
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or(String::new(), |x| x.to_string())
}

fn family(sc: &Scenario, flux: &ConvexFlux, r: &mut Report) -> Result<(), CliError> {
    let fam = build_family(sc, flux)?;
    let rows = fan_rows(&fam, flux);
    let c = flux.ddf_lower_bound();
    let tol = sc.tolerances.ep;
    let mut csv = String::from("label,waves,shocks,min_jump,ep_rate,p_v,h_dot\n");
    for row in &rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            row.label,
            row.waves,
            row.shocks,
            fmt_opt(row.min_jump),
            row.ep_rate,
            row.p_v,
            row.h_dot
        );
    }
    r.check("entropic_fan_has_zero_ep", rows[0].ep_rate.abs() <= tol, format!("rate {:e}", rows[0].ep_rate));
    let mut worst_margin = f64::INFINITY;
    for row in &rows[1..] {
        let bound = c * row.min_jump.unwrap_or(0.0).powi(3) / 12.0;
        worst_margin = worst_margin.min(row.ep_rate - bound);
    }
    r.check("member_ep_lower_bound", worst_margin >= -tol, format!("min(EP - c δ³/12) = {worst_margin:e}"));
    r.csv("family.csv", csv);
    r.summary = json!({ "members": fam.members.len(), "rows": rows });
    Ok(())
}

fn rate_compare(sc: &Scenario, flux: &ConvexFlux, r: &mut Report) -> Result<(), CliError> {
    let fam = build_family(sc, flux)?;
    let rows = fan_rows(&fam, flux);
    let tol = sc.tolerances.ep;
    let argmin = |key: fn(&FanRow) -> f64| {
        (0..rows.len()).min_by(|&i, &j| key(&rows[i]).total_cmp(&key(&rows[j]))).unwrap_or(0)
    };
    let by_ep = argmin(|r| r.ep_rate);
    let by_h = argmin(|r| r.h_dot);
    let by_p = argmin(|r| r.p_v);
    let unique = rows.iter().skip(1).all(|row| row.ep_rate > rows[0].ep_rate + tol);

    let mut consistent = true;
    for i in 0..rows.len() {
        for j in 0..rows.len() {
            let de = rows[i].ep_rate - rows[j].ep_rate;
            let dh = rows[i].h_dot - rows[j].h_dot;
            if de > tol && dh <= 0.0 {
                consistent = false;
            }
        }
    }

    let mut csv = String::from("label,ep_rate,p_v,h_dot,minimizer\n");
    for (i, row) in rows.iter().enumerate() {
        let _ = writeln!(csv, "{},{},{},{},{}", row.label, row.ep_rate, row.p_v, row.h_dot, u8::from(i == by_ep));
    }
    r.check("minimizer_is_entropic", by_ep == 0 && rows[0].ep_rate.abs() <= tol, format!("argmin EP = {}", rows[by_ep].label));
    r.check("minimizer_is_unique", unique, "every member exceeds the entropic rate");
    r.check("same_minimizer_under_p_v_and_h_dot", by_h == 0 && by_p == 0, format!("argmin Ḣ = {}", rows[by_h].label));
    r.check("identical_ranking", consistent, "EP and Ḣ order the family alike");
    r.csv("rate_compare.csv", csv);
    r.summary = json!({ "minimizer": rows[by_ep].label, "rows": rows });
    Ok(())
}

fn evolve_cmd(sc: &Scenario, flux: &ConvexFlux, r: &mut Report) -> Result<(), CliError> {
    let traj = trajectory(sc, flux)?;
    let history = traj.history();
    let defect = history.consistency_defect(sc.t_end);
    r.check("slice_consistency", defect <= 1e-12, format!("defect {defect:e}"));
    let sups = traj.sup_norms();
    let nonincreasing = sups.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    r.check("sup_norm_nonincreasing", nonincreasing, format!("{} snapshots", sups.len()));
    let full = Window::Rect { t_lo: traj.t_start(), t_hi: traj.t_end(), x_lo: None, x_hi: None };
    let ledger = total_ep(&history, flux, &full)?;
    r.summary = json!({
        "snapshots": traj.snapshots.len(),
        "events": traj.events.len(),
        "configurations": traj.events.len() + 1,
        "fronts_final": traj.last().len(),
        "ep_total_abs": ledger.total_abs,
        "expansion_fronts_final": count_expansions(traj.last()),
    });
    r.text("trajectory.jsonl", trajectory_jsonl(&traj).map_err(|e| CliError::Config(e.to_string()))?);
    r.csv("trajectory.csv", trajectory_csv(&traj));
    r.json("history.json", &history)
}

fn ep(sc: &Scenario, flux: &ConvexFlux, r: &mut Report, literal: bool) -> Result<(), CliError> {
    let traj = trajectory(sc, flux)?;
    let history = traj.history();
    let tol = sc.tolerances.ep;
    let mut summaries = Vec::new();
    for (i, w) in sc.windows_or_default().iter().enumerate() {
        let ledger = total_ep(&history, flux, w)?;
        let arc = ledger.total_by_arc_length();
        let kinetic = ledger.total_kinetic(flux);
        r.check(
            &format!("window_{i}_delta_times_length"),
            (arc - ledger.total_abs).abs() <= tol,
            format!("|ΣΔ·H¹ - Σ|D|·dt| = {:e}", (arc - ledger.total_abs).abs()),
        );
        r.check(
            &format!("window_{i}_kinetic"),
            (kinetic - ledger.total_abs).abs() <= tol,
            format!("|kinetic - Σ|D|·dt| = {:e}", (kinetic - ledger.total_abs).abs()),
        );
        if i == 0 {
            if let Some(expected) = sc.expect.ep_total_abs {
                r.check(
                    "expected_total_abs",
                    (ledger.total_abs - expected).abs() <= tol,
                    format!("got {}, expected {expected}", ledger.total_abs),
                );
            }
        }
        let mut s = ledger_summary(&ledger);
        s["total_by_arc_length"] = json!(arc);
        s["total_kinetic"] = json!(kinetic);
        if literal {
            let lit: f64 = ledger
                .per_front
                .iter()
                .map(|e| delta_density_literal(flux, e.u_minus, e.u_plus).abs() * e.arc_length())
                .sum();
            s["total_literal"] = json!(lit);
        }
        r.csv(&format!("ledger_{i}.csv"), ledger_csv(&ledger));
        summaries.push(s);
    }
    r.json("ledger_summary.json", &summaries)?;
    r.summary = json!(summaries);
    Ok(())
}

fn econd(sc: &Scenario, flux: &ConvexFlux, r: &mut Report) -> Result<(), CliError> {
    let traj = trajectory(sc, flux)?;
    let rep = check_e_condition_state(traj.last(), flux, sc.e_slack());
    r.check(
        "e_condition",
        rep.holds,
        format!("worst excess {:e} at {:?} with slack {:e}", rep.worst_excess, rep.worst_pair, rep.slack),
    );
    r.summary = json!({ "t": sc.t_end, "mode": sc.mode, "report": rep });
    r.json("econd.json", &rep)
}

fn sample_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

/// Samples as a piecewise-constant profile with jumps halfway between nodes.
fn samples_profile(t: f64, xs: &[f64], us: &[f64]) -> Profile {
    let mids: Vec<f64> = xs.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    Profile::piecewise_constant(t, &mids, us)
}

fn hopflax(sc: &Scenario, flux: &ConvexFlux, r: &mut Report) -> Result<(), CliError> {
    let (breaks, values) = sc.initial.data();
    let data = PotentialData::piecewise(&breaks, &values)?;
    let (lo, hi) = sc.extent(flux);
    let xs = sample_grid(lo, hi, sc.hopflax.samples);
    let t = sc.t_end;
    let step = sc.hopflax.step;
    let samples = xs
        .par_iter()
        .map(|&x| {
            Ok(HlSample {
                x,
                t,
                g: conlaw_core::hopf_lax_value(&data, flux, x, t)?,
                u: conlaw_core::oracle_u(&data, flux, x, t, step)?,
            })
        })
        .collect::<Result<Vec<_>, conlaw_core::Error>>()?;
    let us: Vec<f64> = samples.iter().map(|s| s.u).collect();
    let hl = samples_profile(t, &xs, &us);

    let mut entropic = sc.clone();
    entropic.mode = Mode::Entropic;
    let ft = trajectory(&entropic, flux)?;
    let dist = l1_distance(flux, &hl, &ft.last().profile(), lo, hi);
    r.check("l1_to_front_tracking", dist <= sc.tolerances.l1, format!("L1 = {dist:e}"));
    let pts: Vec<(f64, f64)> = samples.iter().map(|s| (s.x, s.u)).collect();
    let slack = 1e-6 / t;
    let e = check_e_condition_points(&pts, t, flux.ddf_lower_bound(), slack);
    r.check("hopf_lax_e_condition", e.holds, format!("worst excess {:e}, slack {slack:e}", e.worst_excess));
    r.csv("hopflax.csv", hopf_lax_csv(&samples));
    r.summary = json!({ "t": t, "samples": samples.len(), "l1_to_front_tracking": dist, "e_condition": e });
    Ok(())
}

fn fv(sc: &Scenario, flux: &ConvexFlux, r: &mut Report) -> Result<(), CliError> {
    let init = sc.initial_state(flux)?;
    let mut entropic = sc.clone();
    entropic.mode = Mode::Entropic;
    let reference = trajectory(&entropic, flux)?.last().profile();
    let (lo, hi) = sc.extent(flux);
    let pair = QuadraticEntropy::new(flux);
    let profile0 = init.profile();

    let runs = sc
        .grid
        .resolutions
        .par_iter()
        .map(|&n| {
            let grid = Grid1D::from_profile(flux, &profile0, lo, hi, n, sc.grid.cfl)?;
            let out = godunov_run(grid, flux, sc.t_end, &pair, None)?;
            let err = l1_distance(flux, &out.grid.profile(), &reference, lo, hi);
            let worst_ep = out.entropy_production.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            Ok((err, worst_ep, out.max_mass_drift))
        })
        .collect::<Result<Vec<_>, conlaw_core::Error>>()?;
    let errors: Vec<f64> = runs.iter().map(|r| r.0).collect();
    let report = convergence_report(&sc.grid.resolutions, &errors);
    if sc.grid.resolutions.len() >= 2 {
        r.check(
            "convergence_order",
            report.fitted_order >= sc.tolerances.min_order,
            format!("fitted order {:.4}", report.fitted_order),
        );
    }
    let worst_ep = runs.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
    r.check(
        "discrete_entropy_inequality",
        worst_ep <= sc.tolerances.discrete_entropy,
        format!("max per-step production {worst_ep:e}"),
    );

    let grid = Grid1D::from_profile(flux, &profile0, lo, hi, sc.grid.n_cells, sc.grid.cfl)?;
    let centers = grid.centers();
    let main = godunov_run(grid, flux, sc.t_end, &pair, sc.grid.snapshot_every)?;
    let dist = l1_distance(flux, &main.grid.profile(), &reference, lo, hi);
    r.check("l1_to_front_tracking", dist <= sc.tolerances.l1, format!("L1 = {dist:e} at n = {}", sc.grid.n_cells));
    r.check("mass_conservation", main.max_mass_drift <= 1e-9, format!("drift {:e}", main.max_mass_drift));
    r.csv("grid.csv", grid_csv(&main.snapshots, &centers));
    r.json("convergence.json", &report)?;
    r.summary = json!({
        "domain": [lo, hi],
        "n_cells": sc.grid.n_cells,
        "steps": main.steps,
        "l1_to_front_tracking": dist,
        "convergence": report,
    });
    Ok(())
}

fn contains_domain(w: &Window, d: &TrapezoidDomain) -> bool {
    match *w {
        Window::Trapezoid(t) => t == *d,
        Window::Rect { t_lo, t_hi, x_lo, x_hi } => {
            let (s1, s2) = d.s_range();
            t_lo <= d.t1 && t_hi >= d.t2 && x_lo.is_none_or(|x| x <= s1) && x_hi.is_none_or(|x| x >= s2)
        }
    }
}

fn splice(sc: &Scenario, flux: &ConvexFlux, r: &mut Report) -> Result<(), CliError> {
    let tz = sc.trapezoid.ok_or_else(|| CliError::Config("`trapezoid` is required for splice".into()))?;
    let traj = trajectory(sc, flux)?;
    let at_t1 = traj.state_at(tz.t1);
    let center = match tz.center {
        Some(c) => c,
        None => at_t1
            .front_kinds
            .iter()
            .position(|&k| k == FrontKind::ExpansionShock)
            .map(|i| at_t1.positions[i])
            .ok_or_else(|| CliError::Config("`trapezoid.center` is needed when no expansion front exists at t1".into()))?,
    };
    let lambda_hat = tz
        .lambda_hat
        .unwrap_or_else(|| 0.9 * TrapezoidDomain::lambda0(flux, at_t1.sup_norm()).min(1.0));
    let dom = TrapezoidDomain::new(tz.t1, tz.t2, tz.delta, lambda_hat)?.centered_at(center);
    let sp = trapezoid_splice(&traj, &dom, flux, sc.delta_u())?;
    let before = traj.history();
    let had_expansion = sp.trace.values.windows(2).any(|w| w[1] > w[0]);

    let mut windows = vec![Window::Trapezoid(dom), Window::Rect { t_lo: 0.0, t_hi: dom.t2, x_lo: None, x_hi: None }];
    windows.extend(sc.windows.iter().copied().filter(|w| w.time_range().1 <= dom.t2));
    let mut rows = Vec::new();
    for (i, w) in windows.iter().enumerate() {
        let ep_before = total_ep(&before, flux, w)?.total_abs;
        let ep_after = total_ep(&sp.history, flux, w)?.total_abs;
        if contains_domain(w, &dom) {
            let ok = if had_expansion { ep_after < ep_before } else { ep_after <= ep_before + sc.tolerances.ep };
            r.check(&format!("window_{i}_ep_decreases"), ok, format!("before {ep_before}, after {ep_after}"));
        }
        rows.push(json!({ "window": w, "ep_before": ep_before, "ep_after": ep_after }));
    }
    let (s1, s2) = dom.s_range();
    let (lo, hi) = sc.extent(flux);
    let residual = max_weak_residual(&sp.history, flux, lo.min(s1), hi.max(s2));
    r.check("spliced_weak_residual", residual <= sc.tolerances.residual, format!("max |R| = {residual:e}"));
    r.json("splice_history.json", &sp.history)?;
    r.summary = json!({
        "domain": dom,
        "trace": sp.trace,
        "windows": rows,
        "weak_residual": residual,
    });
    Ok(())
}

fn audit(sc: &Scenario, flux: &ConvexFlux, r: &mut Report, literal: bool) -> Result<(), CliError> {
    let pairs = if sc.delta_pairs.is_empty() { vec![(1.0, 0.0), (2.0, 0.0), (0.0, 1.0)] } else { sc.delta_pairs.clone() };
    for &(a, b) in &pairs {
        flux.check_state(a)?;
        flux.check_state(b)?;
    }
    let rows = delta_audit(flux, &pairs);
    let mut csv = String::from("u_minus,u_plus,sigma,D,kinetic,literal,ratio\n");
    for row in &rows {
        let _ = writeln!(csv, "{},{},{},{},{},{},{}", row.u_minus, row.u_plus, row.sigma, row.d, row.kinetic, row.literal, row.ratio);
    }
    r.csv("delta_audit.csv", csv);
    r.summary = json!({ "primary": if literal { "literal" } else { "kinetic" }, "rows": rows });
    Ok(())
}
