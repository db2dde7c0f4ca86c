//! Scenario execution: map trajectory, counterpart, squeeze parameters and
//! entropies sampled on a uniform time grid.

use pseudoherm::counterpart::{counterpart, counterpart_on_shell, hermiticity_residual};
use pseudoherm::dyson::{critical_times, integrate_dyson, k0_trajectory, recompose, validity};
use pseudoherm::evolution::{integrate_coupled, k0_closed_form_squeeze};
use pseudoherm::fock::entropy_closed;
use pseudoherm::numerics::linspace;
use pseudoherm::{AlgebraKind, BranchChoice, GaussState, HamiltonianProfile, OdeOptions, Profile, SqueezeState};
use serde::Serialize;

use crate::config::{Method, Mode, Scenario, TimeEnd};
use crate::error::CliError;

/// Column-major friendly table of samples.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BreakdownInfo {
    pub time: f64,
    pub gamma_t: f64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub scenario: Scenario,
    pub table: Table,
    /// Method actually used: `closed`, `ode` or `sweep`.
    pub method: &'static str,
    pub critical_time: Option<f64>,
    pub t_end: Option<f64>,
    pub breakdown: Option<BreakdownInfo>,
}

pub fn hamiltonian(sc: &Scenario) -> HamiltonianProfile<f64> {
    HamiltonianProfile::k0(
        Profile::polynomial(sc.omega_re.clone()),
        Profile::linear(0.0, sc.gamma * sc.gamma),
    )
    .with_alpha(
        Profile::polynomial(sc.alpha_abs.clone()),
        Profile::polynomial(sc.alpha_phase.clone()),
    )
    .with_beta(
        Profile::polynomial(sc.beta_abs.clone()),
        Profile::polynomial(sc.beta_phase.clone()),
    )
}

pub fn initial_map(sc: &Scenario) -> Result<GaussState<f64>, CliError> {
    Ok(GaussState::new(sc.phi_amp0, sc.phi0, sc.lambda0)?.with_flip(sc.flip_phi))
}

/// Breakdown time of the `K₀` ramp: first `|z| = 1` for su(1,1), `|z| → ∞`
/// for su(2).
pub fn ramp_breakdown_time(sc: &Scenario) -> Option<f64> {
    let ct = critical_times(sc.phi_amp0, sc.lambda0, sc.gamma, sc.kind).ok()?;
    match sc.kind {
        AlgebraKind::Su11 => ct.t_minus.or(ct.t_star),
        AlgebraKind::Su2 => ct.t_star,
    }
}

fn s_lin_columns(sc: &Scenario) -> Vec<(String, usize)> {
    if sc.n.len() == 1 {
        vec![("S_lin".to_string(), sc.n[0])]
    } else {
        sc.n.iter().map(|&n| (format!("S_lin_n{n}"), n)).collect()
    }
}

pub fn run(sc: &Scenario) -> Result<RunResult, CliError> {
    sc.validate()?;
    match sc.mode {
        Mode::Time => run_time(sc),
        Mode::NSweep => run_sweep(sc),
    }
}

fn run_sweep(sc: &Scenario) -> Result<RunResult, CliError> {
    let want = sc.series.is_empty() || sc.series.iter().any(|s| s == "r");
    let mut columns = vec!["n".to_string()];
    if want {
        columns.push("r".into());
    }
    columns.push("S_lin".into());
    let mut rows = Vec::new();
    for n in sc.sweep.n_min..=sc.sweep.n_max {
        let s = entropy_closed(AlgebraKind::Su2, sc.sweep.r, n)?;
        let mut row = vec![n as f64];
        if want {
            row.push(sc.sweep.r);
        }
        row.push(s);
        rows.push(row);
    }
    Ok(RunResult {
        scenario: sc.clone(),
        table: Table { columns, rows },
        method: "sweep",
        critical_time: None,
        t_end: None,
        breakdown: None,
    })
}

fn run_time(sc: &Scenario) -> Result<RunResult, CliError> {
    let kind = sc.kind;
    let g0 = initial_map(sc)?;
    let v = validity(&g0, kind);
    if !v.is_valid() {
        return Err(CliError::Breakdown(format!("initial map is not valid ({v:?})")));
    }
    let h = hamiltonian(sc);
    let critical_time = if sc.is_k0() { ramp_breakdown_time(sc) } else { None };
    let t_end = match sc.t_end {
        TimeEnd::Explicit(t) => t,
        TimeEnd::Auto => {
            0.999
                * critical_time
                    .ok_or_else(|| CliError::Parse("no finite breakdown time for these parameters; set t_end".into()))?
        }
    };
    let grid = linspace(0.0, t_end, sc.samples);
    let opts = OdeOptions::default().with_tolerances(sc.rtol, sc.atol);
    let sq0 = SqueezeState::phase_locked(sc.r0, sc.phi0, sc.l);
    let closed = match sc.method {
        Method::Closed => true,
        Method::Ode => false,
        Method::Auto => sc.is_k0(),
    };

    let (times, maps, squeeze, breakdown) = if sc.is_k0() {
        let traj = if closed {
            k0_trajectory(&g0, &h, &grid, kind)?
        } else {
            integrate_dyson(&g0, &h, &grid, &opts, kind)?
        };
        if traj.is_empty() {
            return Err(CliError::Breakdown("no valid sample".into()));
        }
        let sq = k0_closed_form_squeeze(&traj, &h.omega_re, BranchChoice::Fixed(sc.l), &sq0, kind)?;
        (traj.times, traj.states, sq.states, traj.breakdown)
    } else {
        let c = integrate_coupled(&g0, &sq0, &h, &grid, &opts, kind)?;
        if c.times.is_empty() {
            return Err(CliError::Breakdown("no valid sample".into()));
        }
        (c.times, c.maps, c.squeeze, c.breakdown)
    };
    let breakdown = breakdown.map(|b| BreakdownInfo {
        time: b.time,
        gamma_t: sc.gamma * b.time,
        reason: b.reason.to_string(),
    });

    let series = sc.series_or_default();
    let entropies = s_lin_columns(sc);
    let mut columns = vec!["t".to_string(), "gamma_t".to_string()];
    for s in &series {
        if s == "S_lin" {
            columns.extend(entropies.iter().map(|(c, _)| c.clone()));
        } else {
            columns.push(s.clone());
        }
    }

    let mut rows = Vec::with_capacity(times.len());
    for ((&t, g), q) in times.iter().zip(&maps).zip(&squeeze) {
        let mut row = vec![t, sc.gamma * t];
        let mut exp = None;
        for s in &series {
            let mut exp_params = || -> Result<_, CliError> {
                if exp.is_none() {
                    exp = Some(recompose(g, kind)?);
                }
                Ok(exp.unwrap())
            };
            match s.as_str() {
                "Phi" => row.push(g.amplitude),
                "phi" => row.push(g.phase),
                "Lambda" => row.push(g.cartan),
                "z_abs" => row.push(g.z_abs(kind)),
                "eps" => row.push(exp_params()?.epsilon),
                "mu_abs" => row.push(exp_params()?.mu_abs),
                "r" => row.push(q.r),
                "phase" => row.push(q.phase),
                "Omega" => row.push(q.omega_tilde),
                "S_lin" => {
                    for (_, n) in &entropies {
                        row.push(entropy_closed(kind, q.r, *n)?);
                    }
                }
                "W" => row.push(counterpart(&h, g, t, kind)?.w),
                "U_abs" => row.push(counterpart(&h, g, t, kind)?.u.norm()),
                "U_arg" => row.push(counterpart(&h, g, t, kind)?.u.arg()),
                "herm_residual" => row.push(hermiticity_residual(&counterpart_on_shell(&h, g, t, kind)?).max()),
                other => return Err(CliError::Parse(format!("unknown series '{other}'"))),
            }
        }
        rows.push(row);
    }

    Ok(RunResult {
        scenario: sc.clone(),
        table: Table { columns, rows },
        method: if closed && sc.is_k0() { "closed" } else { "ode" },
        critical_time,
        t_end: Some(t_end),
        breakdown,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::preset;

    #[test]
    fn fig2_closed_matches_ode() {
        let mut sc = preset("fig2").unwrap();
        sc.samples = 50;
        let closed = run(&sc).unwrap();
        sc.method = Method::Ode;
        let ode = run(&sc).unwrap();
        assert_eq!(closed.method, "closed");
        assert_eq!(ode.method, "ode");
        for name in ["Phi", "Lambda"] {
            let a = closed.table.column(name).unwrap();
            let b = ode.table.column(name).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x / y - 1.0).abs() < 1e-6, "{name}: {x} {y}");
            }
        }
    }

    #[test]
    fn explicit_end_past_breakdown_is_truncated() {
        let mut sc = preset("fig1").unwrap();
        sc.t_end = TimeEnd::Explicit(5.0);
        sc.samples = 101;
        let out = run(&sc).unwrap();
        let b = out.breakdown.expect("breakdown");
        // Last valid sample; the grid spacing is 0.025 in gamma*t.
        assert!((b.gamma_t - 2.146).abs() < 0.03, "{}", b.gamma_t);
        assert!(out.table.rows.len() < 101);
    }

    #[test]
    fn invalid_initial_map() {
        let mut sc = preset("fig1").unwrap();
        sc.flip_phi = false;
        sc.phi_amp0 = 0.5;
        sc.lambda0 = 1.0;
        assert!(matches!(run(&sc), Err(CliError::Breakdown(_))));
    }

    #[test]
    fn sweep_columns() {
        let out = run(&preset("fig4").unwrap()).unwrap();
        assert_eq!(out.table.columns, vec!["n", "S_lin"]);
        assert_eq!(out.table.rows.len(), 100);
        assert!((out.table.rows[0][1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn multi_sector_entropy_columns() {
        let mut sc = preset("fig7").unwrap();
        sc.samples = 10;
        let out = run(&sc).unwrap();
        assert_eq!(
            out.table.columns,
            vec!["t", "gamma_t", "S_lin_n1", "S_lin_n10", "S_lin_n100", "r"]
        );
    }
}
