//! Godunov finite volumes with a per-step numerical entropy budget.

use serde::{Deserialize, Serialize};

use crate::entropy::EntropyPair;
use crate::error::{Error, Result};
use crate::flux::ConvexFlux;
use crate::profile::{l1_distance, Profile};

/// Interface flux `F(u_L, u_R)` and the state `w` where it is attained.
///
/// `min f` on `[u_L, u_R]` for `u_L <= u_R`, `max f` on `[u_R, u_L]` otherwise.
pub fn godunov_flux(flux: &ConvexFlux, u_l: f64, u_r: f64) -> (f64, f64) {
    let w = if u_l <= u_r {
        if flux.df(u_l) >= 0.0 {
            u_l
        } else if flux.df(u_r) <= 0.0 {
            u_r
        } else {
            flux.inverse_derivative(0.0).unwrap_or(0.0).clamp(u_l, u_r)
        }
    } else if flux.f(u_l) >= flux.f(u_r) {
        u_l
    } else {
        u_r
    };
    (flux.f(w), w)
}

/// Cell averages on `[x_min, x_max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub x_min: f64,
    pub x_max: f64,
    pub n_cells: usize,
    pub cfl: f64,
    pub t: f64,
    pub u: Vec<f64>,
    /// Far-field states feeding the outermost interfaces.
    pub left_bc: f64,
    pub right_bc: f64,
}

impl Grid1D {
    /// Exact cell averages of `initial`.
    pub fn from_profile(flux: &ConvexFlux, initial: &Profile, x_min: f64, x_max: f64, n_cells: usize, cfl: f64) -> Result<Self> {
        if !(x_max > x_min) || n_cells < 2 {
            return Err(Error::Domain(format!("need x_min < x_max and at least 2 cells, got [{x_min}, {x_max}], {n_cells}")));
        }
        if !(cfl > 0.0 && cfl <= 1.0) {
            return Err(Error::Cfl(format!("CFL number must lie in (0, 1], got {cfl}")));
        }
        let dx = (x_max - x_min) / n_cells as f64;
        let u: Vec<f64> = (0..n_cells)
            .map(|i| {
                let a = x_min + i as f64 * dx;
                initial.integral(flux, a, a + dx) / dx
            })
            .collect();
        let left_bc = initial.value_at(flux, x_min - 1.0);
        let right_bc = initial.value_at(flux, x_max + 1.0);
        Ok(Self { x_min, x_max, n_cells, cfl, t: initial.t, u, left_bc, right_bc })
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n_cells as f64
    }

    pub fn centers(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..self.n_cells).map(|i| self.x_min + (i as f64 + 0.5) * dx).collect()
    }

    /// `max|f'(u)|` over the cells and far-field states.
    pub fn max_wave_speed(&self, flux: &ConvexFlux) -> f64 {
        self.u.iter().chain([&self.left_bc, &self.right_bc]).map(|&u| flux.df(u).abs()).fold(0.0, f64::max)
    }

    /// Time step `ν dx / max|f'(u)|`; the maximum principle keeps it stable for the whole run.
    pub fn stable_dt(&self, flux: &ConvexFlux) -> f64 {
        self.cfl * self.dx() / self.max_wave_speed(flux).max(f64::MIN_POSITIVE)
    }

    pub fn mass(&self) -> f64 {
        self.u.iter().sum::<f64>() * self.dx()
    }

    /// Piecewise-constant profile on the grid, far-field states outside.
    pub fn profile(&self) -> Profile {
        let dx = self.dx();
        let mut positions: Vec<f64> = (0..=self.n_cells).map(|i| self.x_min + i as f64 * dx).collect();
        positions[self.n_cells] = self.x_max;
        let mut states = Vec::with_capacity(self.n_cells + 2);
        states.push(self.left_bc);
        states.extend(&self.u);
        states.push(self.right_bc);
        Profile::piecewise_constant(self.t, &positions, &states)
    }

    fn interface_states(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..=self.n_cells).map(move |i| {
            let l = if i == 0 { self.left_bc } else { self.u[i - 1] };
            let r = if i == self.n_cells { self.right_bc } else { self.u[i] };
            (l, r)
        })
    }
}

/// One conservative update with step `dt`; returns the interface states `w`.
pub fn godunov_step(grid: &mut Grid1D, flux: &ConvexFlux, dt: f64) -> Result<Vec<f64>> {
    let dx = grid.dx();
    let courant = dt * grid.max_wave_speed(flux) / dx;
    if !(dt > 0.0) || courant > grid.cfl * (1.0 + 1e-12) {
        return Err(Error::Cfl(format!("dt = {dt} gives Courant number {courant} > {}", grid.cfl)));
    }
    let (fluxes, ws): (Vec<f64>, Vec<f64>) = grid.interface_states().map(|(l, r)| godunov_flux(flux, l, r)).unzip();
    let ratio = dt / dx;
    for (i, u) in grid.u.iter_mut().enumerate() {
        *u -= ratio * (fluxes[i + 1] - fluxes[i]);
    }
    grid.t += dt;
    Ok(ws)
}

/// `Σ (η(u¹) - η(u⁰)) dx + dt Σ (Ξ_{i+1/2} - Ξ_{i-1/2})` with `Ξ = ξ(w)`.
pub fn numerical_ep<P: EntropyPair + ?Sized>(before: &[f64], after: &[f64], interface_w: &[f64], dx: f64, dt: f64, pair: &P) -> f64 {
    let storage: f64 = before.iter().zip(after).map(|(a, b)| pair.eta(*b) - pair.eta(*a)).sum::<f64>() * dx;
    let n = interface_w.len();
    // the interface sum telescopes
    let transport = pair.xi(interface_w[n - 1]) - pair.xi(interface_w[0]);
    storage + dt * transport
}

/// Result of [`run`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GodunovRun {
    pub grid: Grid1D,
    pub steps: usize,
    /// Per-step numerical entropy production for the supplied pair.
    pub entropy_production: Vec<f64>,
    pub max_mass_drift: f64,
    /// `(t, cell averages)` every `snapshot_every` steps plus the final state.
    pub snapshots: Vec<(f64, Vec<f64>)>,
}

/// Steps to `t_end`, shortening the last step to land on it.
pub fn run<P: EntropyPair + ?Sized>(
    mut grid: Grid1D,
    flux: &ConvexFlux,
    t_end: f64,
    pair: &P,
    snapshot_every: Option<usize>,
) -> Result<GodunovRun> {
    if !(t_end > grid.t) {
        return Err(Error::Domain(format!("t_end = {t_end} must exceed the grid time {}", grid.t)));
    }
    let dt_max = grid.stable_dt(flux);
    let mass0 = grid.mass();
    let mut entropy_production = Vec::new();
    let mut max_mass_drift: f64 = 0.0;
    let mut snapshots = vec![(grid.t, grid.u.clone())];
    let mut steps = 0;
    let mut inflow = 0.0;
    while grid.t < t_end - 1e-14 * t_end.abs().max(1.0) {
        let dt = dt_max.min(t_end - grid.t);
        let before = grid.u.clone();
        let ws = godunov_step(&mut grid, flux, dt)?;
        entropy_production.push(numerical_ep(&before, &grid.u, &ws, grid.dx(), dt, pair));
        inflow += dt * (flux.f(ws[0]) - flux.f(ws[ws.len() - 1]));
        max_mass_drift = max_mass_drift.max((grid.mass() - mass0 - inflow).abs());
        steps += 1;
        if snapshot_every.is_some_and(|k| k > 0 && steps % k == 0) {
            snapshots.push((grid.t, grid.u.clone()));
        }
    }
    grid.t = t_end;
    if snapshots.last().map(|s| s.0) != Some(grid.t) {
        snapshots.push((grid.t, grid.u.clone()));
    }
    Ok(GodunovRun { grid, steps, entropy_production, max_mass_drift, snapshots })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n_cells: usize,
    pub l1_error: f64,
    /// Order against the previous row; `None` on the first.
    pub observed_order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares slope of `-log(error)` against `log(n)`.
    pub fitted_order: f64,
}

/// Grid and horizon shared by every resolution of a study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StudySetup {
    pub x_min: f64,
    pub x_max: f64,
    pub t_end: f64,
    pub cfl: f64,
}

/// L¹ error at `t_end` against `reference` for each resolution.
pub fn convergence_study<P: EntropyPair + ?Sized>(
    flux: &ConvexFlux,
    initial: &Profile,
    reference: &Profile,
    setup: &StudySetup,
    resolutions: &[usize],
    pair: &P,
) -> Result<ConvergenceReport> {
    let StudySetup { x_min, x_max, t_end, cfl } = *setup;
    let errors = resolutions
        .iter()
        .map(|&n| {
            let grid = Grid1D::from_profile(flux, initial, x_min, x_max, n, cfl)?;
            let out = run(grid, flux, t_end, pair, None)?;
            Ok(l1_distance(flux, &out.grid.profile(), reference, x_min, x_max))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(convergence_report(resolutions, &errors))
}

pub fn convergence_report(resolutions: &[usize], errors: &[f64]) -> ConvergenceReport {
    let rows = resolutions
        .iter()
        .zip(errors)
        .enumerate()
        .map(|(k, (&n, &e))| ConvergenceRow {
            n_cells: n,
            l1_error: e,
            observed_order: (k > 0).then(|| {
                (errors[k - 1] / e).ln() / (n as f64 / resolutions[k - 1] as f64).ln()
            }),
        })
        .collect();
    ConvergenceReport { rows, fitted_order: fitted_order(resolutions, errors) }
}

/// Least-squares slope of `-ln e` against `ln n`.
pub fn fitted_order(resolutions: &[usize], errors: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = resolutions.iter().zip(errors).map(|(&n, &e)| ((n as f64).ln(), -e.ln())).collect();
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let (num, den) = pts.iter().fold((0.0, 0.0), |(n, d), (x, y)| (n + (x - mx) * (y - my), d + (x - mx) * (x - mx)));
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::QuadraticEntropy;
    use approx::assert_abs_diff_eq;

    #[test]
    fn interface_flux_examples() {
        let flux = ConvexFlux::burgers(2.0);
        assert_eq!(godunov_flux(&flux, 1.0, 0.0).0, 0.5);
        assert_eq!(godunov_flux(&flux, -1.0, 1.0), (0.0, 0.0));
        assert_eq!(godunov_flux(&flux, 0.5, 0.5).0, 0.125);
        // transonic shock with the larger flux on the right
        assert_eq!(godunov_flux(&flux, 0.5, -1.0), (0.5, -1.0));
    }

    #[test]
    fn constant_state_is_steady() {
        let flux = ConvexFlux::burgers(2.0);
        let init = Profile::piecewise_constant(0.0, &[], &[0.7]);
        let grid = Grid1D::from_profile(&flux, &init, -1.0, 1.0, 50, 0.9).unwrap();
        let q = QuadraticEntropy::new(&flux);
        let out = run(grid, &flux, 0.5, &q, None).unwrap();
        assert!(out.grid.u.iter().all(|&u| (u - 0.7).abs() < 1e-15));
        assert!(out.entropy_production.iter().all(|p| p.abs() < 1e-14));
    }

    #[test]
    fn cfl_violation_is_reported() {
        let flux = ConvexFlux::burgers(2.0);
        let init = Profile::piecewise_constant(0.0, &[0.0], &[1.0, 0.0]);
        let mut grid = Grid1D::from_profile(&flux, &init, -1.0, 1.0, 20, 0.9).unwrap();
        let dt = 2.0 * grid.stable_dt(&flux);
        assert!(matches!(godunov_step(&mut grid, &flux, dt), Err(Error::Cfl(_))));
        assert!(matches!(Grid1D::from_profile(&flux, &init, -1.0, 1.0, 20, 1.5), Err(Error::Cfl(_))));
    }

    #[test]
    fn shock_entropy_production_rate() {
        let flux = ConvexFlux::burgers(1.0);
        let init = Profile::piecewise_constant(0.0, &[0.0], &[1.0, 0.0]);
        let grid = Grid1D::from_profile(&flux, &init, -1.0, 2.0, 1200, 0.9).unwrap();
        let q = QuadraticEntropy::new(&flux);
        let out = run(grid, &flux, 1.0, &q, None).unwrap();
        assert!(out.entropy_production.iter().all(|&p| p <= 1e-12));
        // production per unit time tends to -D = -1/12
        let total: f64 = out.entropy_production.iter().sum();
        assert_abs_diff_eq!(total, -1.0 / 12.0, epsilon = 2e-3);
        assert!(out.max_mass_drift < 1e-12);
    }

    #[test]
    fn fitted_order_of_exact_power_law() {
        let ns = [100, 200, 400];
        let errs: Vec<f64> = ns.iter().map(|&n| 3.0 / n as f64).collect();
        let r = convergence_report(&ns, &errs);
        assert_abs_diff_eq!(r.fitted_order, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.rows[1].observed_order.unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn shock_study_is_first_order() {
        let flux = ConvexFlux::burgers(2.0);
        let init = Profile::piecewise_constant(0.0, &[0.0], &[1.0, 0.0]);
        let exact = Profile::piecewise_constant(1.0, &[0.5], &[1.0, 0.0]);
        let setup = StudySetup { x_min: -1.1, x_max: 1.1, t_end: 1.0, cfl: 0.9 };
        let r = convergence_study(&flux, &init, &exact, &setup, &[100, 200, 400, 800], &QuadraticEntropy::new(&flux)).unwrap();
        assert!(r.fitted_order > 0.8 && r.fitted_order < 1.3, "{}", r.fitted_order);
    }
}
