//! Squeeze parameters `ξ = r e^{iφ}` of `S = exp(ξK₊ - ξ*K₋)` that reduce the
//! Hermitian counterpart to `2Ω K₀`, and the accumulated phase `Ω̃ = ∫Ω`.

use crate::algebra::{unified_cotangent2, unified_tangent, AlgebraKind};
use crate::counterpart::{counterpart, HermCoeffs};
use crate::dyson::{self, validity_error, Breakdown, DysonTrajectory, GaussState};
use crate::error::{Error, Result};
use crate::numerics::{self, quad, OdeOptions};
use crate::profile::{HamiltonianProfile, Profile};
use crate::scalar::{cplx, Real, C};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SqueezeState<T> {
    pub r: T,
    pub phase: T,
    pub omega_tilde: T,
}

impl<T: Real> SqueezeState<T> {
    pub fn new(r: T, phase: T, omega_tilde: T) -> Self {
        Self { r, phase, omega_tilde }
    }

    /// State satisfying the phase lock `phase = lπ - φ` for map phase `φ`.
    pub fn phase_locked(r: T, map_phase: T, l: i32) -> Self {
        Self::new(r, T::lit(l as f64) * T::PI() - map_phase, T::zero())
    }

    pub fn xi(&self) -> C<T> {
        C::from_polar(self.r, self.phase)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SqueezeRates<T> {
    pub r: T,
    pub phase: T,
}

const R_TOL: f64 = 1e-12;

/// Polar squeeze equations
/// `ṙ = -2|U| sin θ`, `φ̇ = -2W - 4 g(r) |U| cos θ`, `θ = φ + arg U`.
pub fn squeeze_ode_rhs<T: Real>(sq: &SqueezeState<T>, c: &HermCoeffs<T>, kind: AlgebraKind) -> Result<SqueezeRates<T>> {
    let two = T::lit(2.0);
    let u_abs = c.u.norm();
    let theta = sq.phase + c.u.arg();
    let dr = -two * u_abs * theta.sin();
    let cos_term = u_abs * theta.cos();
    let dphase = if cos_term == T::zero() {
        -two * c.w
    } else {
        if sq.r < T::lit(R_TOL) {
            return Err(Error::CoordinateSingularity { r: sq.r.to_f64_lossy() });
        }
        -two * c.w - T::lit(4.0) * unified_cotangent2(kind, sq.r)? * cos_term
    };
    Ok(SqueezeRates { r: dr, phase: dphase })
}

/// Effective frequency `Ω = W + 2 f(r) |U| cos θ` with `f = tanh` (su(1,1))
/// or `-tan` (su(2)).
pub fn omega_eff<T: Real>(sq: &SqueezeState<T>, c: &HermCoeffs<T>, kind: AlgebraKind) -> Result<T> {
    let theta = sq.phase + c.u.arg();
    let f = unified_tangent(kind, sq.r)?;
    Ok(c.w + T::lit(2.0) * f * c.u.norm() * theta.cos())
}

/// `∫₀ᵗ Ω` by adaptive quadrature.
pub fn phase_integral<T: Real>(omega: impl FnMut(T) -> T, t: T) -> T {
    let tol = T::lit(1e-13).max(T::epsilon() * T::lit(10.0));
    quad::integrate(omega, T::zero(), t, tol)
}

/// `∫₀ᵗ Ω` for a polynomial profile, exactly.
pub fn phase_integral_profile<T: Real>(omega: &Profile<T>, t: T) -> T {
    omega.integral(t)
}

/// Choice of the branch integer `l` in the phase lock.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchChoice {
    Fixed(i32),
    /// Picks the parity of `l` keeping `r ≥ 0`, preferring `l = 1`.
    Auto,
}

impl Default for BranchChoice {
    fn default() -> Self {
        BranchChoice::Fixed(1)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SqueezeTrajectory<T> {
    pub times: Vec<T>,
    pub states: Vec<SqueezeState<T>>,
    /// Branch integer actually used.
    pub l: i32,
}

fn wrap_pi<T: Real>(x: T) -> T {
    let two_pi = T::lit(2.0) * T::PI();
    let y = (x + T::PI()) % two_pi;
    let y = if y < T::zero() { y + two_pi } else { y };
    y - T::PI()
}

// Signed change of r per unit (-1)^l, from the map amplitude history.
fn squeeze_increments<T: Real>(traj: &DysonTrajectory<T>, kind: AlgebraKind) -> Result<Vec<T>> {
    let one = T::one();
    let phis: Vec<T> = traj.states.iter().map(GaussState::signed_amplitude).collect();
    let Some(&phi0) = phis.first() else {
        return Ok(Vec::new());
    };
    match kind {
        AlgebraKind::Su11 => {
            let varpi = |p: T| (one + p) / (one - p);
            let w0 = varpi(phi0);
            let mut out = Vec::with_capacity(phis.len());
            for (k, &p) in phis.iter().enumerate() {
                let ratio = varpi(p) / w0;
                if !(ratio > T::zero()) || !ratio.is_finite() {
                    let time = crossing_time(traj, &phis, k);
                    return Err(Error::BranchCrossing {
                        time: time.to_f64_lossy(),
                    });
                }
                out.push(T::lit(0.5) * ratio.ln());
            }
            Ok(out)
        }
        AlgebraKind::Su2 => {
            let mut out = Vec::with_capacity(phis.len());
            let mut acc = T::zero();
            let mut prev = phi0.atan();
            for &p in &phis {
                let cur = p.atan();
                let mut d = cur - prev;
                // Φ passed through infinity: continue on the next branch.
                if d > T::FRAC_PI_2() {
                    d = d - T::PI();
                } else if d < -T::FRAC_PI_2() {
                    d = d + T::PI();
                }
                acc = acc + d;
                prev = cur;
                out.push(acc);
            }
            Ok(out)
        }
    }
}

// Time at which the amplitude crosses ±1 between samples k-1 and k.
fn crossing_time<T: Real>(traj: &DysonTrajectory<T>, phis: &[T], k: usize) -> T {
    if k == 0 {
        return traj.times[0];
    }
    let (p0, p1) = (phis[k - 1], phis[k]);
    let (t0, t1) = (traj.times[k - 1], traj.times[k]);
    let target = if (p0 + T::one()) * (p1 + T::one()) <= T::zero() {
        -T::one()
    } else {
        T::one()
    };
    if p1 == p0 {
        return t1;
    }
    t0 + (t1 - t0) * (target - p0) / (p1 - p0)
}

/// Closed-form squeeze parameters of the `α = β = 0` case under the phase
/// lock `phase(0) = lπ - φ(0)`.
pub fn k0_closed_form_squeeze<T: Real>(
    traj: &DysonTrajectory<T>,
    omega_re: &Profile<T>,
    branch: BranchChoice,
    sq0: &SqueezeState<T>,
    kind: AlgebraKind,
) -> Result<SqueezeTrajectory<T>> {
    let Some(g0) = traj.states.first() else {
        return Err(Error::InvalidInput("empty trajectory".into()));
    };
    let incr = squeeze_increments(traj, kind)?;
    let l = match branch {
        BranchChoice::Fixed(l) => l,
        BranchChoice::Auto => {
            let ok = |sign: T| incr.iter().all(|d| sq0.r + sign * *d >= -T::lit(1e-12));
            if ok(-T::one()) {
                1
            } else if ok(T::one()) {
                0
            } else {
                return Err(Error::Domain("no branch keeps r >= 0 on the whole run".into()));
            }
        }
    };
    let lock = wrap_pi(sq0.phase + g0.phase - T::lit(l as f64) * T::PI());
    if lock.abs() > T::lit(1e-9) {
        return Err(Error::InvalidInput(format!(
            "initial squeeze phase is not phase locked for l = {l} (offset {})",
            lock.to_f64_lossy()
        )));
    }
    let sign = if l.rem_euclid(2) == 0 { T::one() } else { -T::one() };
    let t0 = traj.times[0];
    let base = omega_re.integral(t0);
    let mut states = Vec::with_capacity(incr.len());
    for (k, d) in incr.iter().enumerate() {
        let r = sq0.r + sign * *d;
        if r < -T::lit(1e-12) {
            return Err(Error::Domain(format!(
                "r becomes negative at t = {} for l = {l}",
                traj.times[k].to_f64_lossy()
            )));
        }
        let w_int = omega_re.integral(traj.times[k]) - base;
        states.push(SqueezeState {
            r: r.max(T::zero()),
            phase: sq0.phase - T::lit(2.0) * w_int,
            omega_tilde: sq0.omega_tilde + w_int,
        });
    }
    Ok(SqueezeTrajectory {
        times: traj.times.clone(),
        states,
        l,
    })
}

// (1 + 2r·g(r), (1 - 2r·g(r))/r², f(r)/r) with the small-r limits.
fn cartesian_factors<T: Real>(kind: AlgebraKind, r: T) -> Result<(T, T, T)> {
    let x = T::lit(2.0) * r;
    let x2 = x * x;
    let s = kind.s::<T>();
    let one = T::one();
    if kind == AlgebraKind::Su2 && r >= T::FRAC_PI_2() - T::lit(1e-9) {
        return Err(Error::Pole { x: r.to_f64_lossy() });
    }
    // x·coth x (su(1,1)) or x·cot x (su(2)).
    let xcot = if x.abs() < T::lit(1e-2) {
        one - s * x2 / T::lit(3.0) - x2 * x2 / T::lit(45.0) - s * T::lit(2.0) * x2 * x2 * x2 / T::lit(945.0)
    } else {
        match kind {
            AlgebraKind::Su11 => x / x.tanh(),
            AlgebraKind::Su2 => x * x.cos() / x.sin(),
        }
    };
    let h = if x.abs() < T::lit(1e-2) {
        T::lit(4.0) * (s * T::one() / T::lit(3.0) + x2 / T::lit(45.0) + s * T::lit(2.0) * x2 * x2 / T::lit(945.0))
    } else {
        T::lit(4.0) * (one - xcot) / x2
    };
    let f_over_r = if r.abs() < T::lit(1e-4) {
        match kind {
            AlgebraKind::Su11 => one - r * r / T::lit(3.0),
            AlgebraKind::Su2 => -(one + r * r / T::lit(3.0)),
        }
    } else {
        unified_tangent(kind, r)? / r
    };
    Ok((one + xcot, h, f_over_r))
}

/// Derivative of `(Re ξ, Im ξ, Ω̃)`; regular at `ξ = 0`.
pub fn squeeze_cartesian_rhs<T: Real>(xi: C<T>, c: &HermCoeffs<T>, kind: AlgebraKind) -> Result<(C<T>, T)> {
    let (one_plus, h, f_over_r) = cartesian_factors(kind, xi.norm())?;
    let i = cplx(T::zero(), T::one());
    let dxi = -i * xi * (T::lit(2.0) * c.w) + i * c.u * xi * xi * h - i * c.u.conj() * one_plus;
    let omega = c.w + T::lit(2.0) * f_over_r * (c.u * xi).re;
    Ok((dxi, omega))
}

fn unwrap_near<T: Real>(angle: T, reference: T) -> T {
    reference + wrap_pi(angle - reference)
}

fn squeeze_from_cartesian<T: Real>(y: &[T], prev_phase: T) -> SqueezeState<T> {
    let xi = cplx(y[0], y[1]);
    let r = xi.norm();
    let phase = if r > T::zero() {
        unwrap_near(xi.arg(), prev_phase)
    } else {
        prev_phase
    };
    SqueezeState::new(r, phase, y[2])
}

/// Joint solution of the map and the squeeze parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct CoupledTrajectory<T> {
    pub times: Vec<T>,
    pub maps: Vec<GaussState<T>>,
    pub squeeze: Vec<SqueezeState<T>>,
    pub breakdown: Option<Breakdown<T>>,
}

/// Integrates the constraint ODEs together with the squeeze equations for a
/// general Hamiltonian profile. The squeeze equations are integrated in the
/// Cartesian variable `ξ`, which stays regular at `r = 0`.
pub fn integrate_coupled<T: Real>(
    g0: &GaussState<T>,
    sq0: &SqueezeState<T>,
    h: &HamiltonianProfile<T>,
    grid: &[T],
    opts: &OdeOptions<T>,
    kind: AlgebraKind,
) -> Result<CoupledTrajectory<T>> {
    validity_error(g0, kind)?;
    let xi0 = sq0.xi();
    let y0 = [
        g0.signed_amplitude(),
        g0.phase,
        g0.cartan.ln(),
        xi0.re,
        xi0.im,
        sq0.omega_tilde,
    ];
    let sol = numerics::integrate(
        |t, y: &[T], dy: &mut [T]| {
            let g = dyson::state_from_vec(&y[..3])?;
            let r = dyson::rates_log(&g, h, t, kind)?;
            dy[0] = r.amplitude;
            dy[1] = r.phase;
            dy[2] = r.cartan;
            let c = counterpart(h, &g, t, kind)?;
            let (dxi, omega) = squeeze_cartesian_rhs(cplx(y[3], y[4]), &c, kind)?;
            dy[3] = dxi.re;
            dy[4] = dxi.im;
            dy[5] = omega;
            Ok(())
        },
        |_, y: &[T]| {
            let g = dyson::state_from_vec(&y[..3])?;
            validity_error(&g, kind)
        },
        &y0,
        grid,
        opts,
    )?;
    let maps = sol
        .states
        .iter()
        .map(|y| dyson::state_from_vec(&y[..3]))
        .collect::<Result<Vec<_>>>()?;
    let mut squeeze = Vec::with_capacity(sol.states.len());
    let mut prev = sq0.phase;
    for y in &sol.states {
        let sq = squeeze_from_cartesian(&y[3..], prev);
        prev = sq.phase;
        squeeze.push(sq);
    }
    let breakdown = match sol.halt {
        Some(halt) => Some(Breakdown {
            time: halt.time,
            state: dyson::state_from_vec(&halt.state[..3])?,
            reason: halt.error,
        }),
        None => None,
    };
    Ok(CoupledTrajectory {
        times: sol.times,
        maps,
        squeeze,
        breakdown,
    })
}
