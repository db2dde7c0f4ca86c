//! Adaptive Dormand–Prince 5(4) integrator with dense output on a
//! caller-supplied grid.
//!
//! A failing right-hand side or a failing state check shrinks the step; once
//! the step drops below the minimum the integration halts and reports the last
//! accepted state, so callers get a breakdown time accurate to `min_step`.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Debug)]
pub struct OdeOptions<T> {
    pub rtol: T,
    pub atol: T,
    pub max_step: Option<T>,
    pub min_step: T,
    pub initial_step: Option<T>,
    pub max_steps: usize,
}

impl<T: Real> Default for OdeOptions<T> {
    fn default() -> Self {
        let floor = T::epsilon() * T::lit(1e3);
        Self {
            rtol: T::lit(1e-9).max(floor),
            atol: T::lit(1e-12).max(floor * T::lit(1e-3)),
            max_step: None,
            min_step: T::lit(1e-12),
            initial_step: None,
            max_steps: 2_000_000,
        }
    }
}

impl<T: Real> OdeOptions<T> {
    pub fn with_tolerances(mut self, rtol: T, atol: T) -> Self {
        self.rtol = rtol;
        self.atol = atol;
        self
    }

    pub fn with_max_step(mut self, h: T) -> Self {
        self.max_step = Some(h);
        self
    }
}

/// Where and why an integration stopped early.
#[derive(Clone, Debug, PartialEq)]
pub struct OdeHalt<T> {
    pub time: T,
    pub state: Vec<T>,
    pub error: Error,
}

#[derive(Clone, Debug)]
pub struct OdeSolution<T> {
    /// Grid points reached, starting with the initial time.
    pub times: Vec<T>,
    pub states: Vec<Vec<T>>,
    pub halt: Option<OdeHalt<T>>,
    pub accepted: usize,
    pub rejected: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

fn combo<T: Real>(out: &mut [T], y: &[T], h: T, terms: &[(f64, &[T])]) {
    for i in 0..out.len() {
        let mut acc = T::zero();
        for (c, k) in terms {
            acc = acc + T::lit(*c) * k[i];
        }
        out[i] = y[i] + h * acc;
    }
}

/// Integrates `y' = rhs(t, y)` and samples the solution on `grid`.
///
/// `check` is called on every accepted state. Errors from `rhs` at the initial
/// point or from `check` on the initial state are returned directly; later
/// failures end the integration with [`OdeSolution::halt`] set.
pub fn integrate<T, F, G>(
    mut rhs: F,
    mut check: G,
    y0: &[T],
    grid: &[T],
    opts: &OdeOptions<T>,
) -> Result<OdeSolution<T>>
where
    T: Real,
    F: FnMut(T, &[T], &mut [T]) -> Result<()>,
    G: FnMut(T, &[T]) -> Result<()>,
{
    if grid.is_empty() {
        return Err(Error::InvalidInput("empty time grid".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput("time grid must be strictly increasing".into()));
    }
    if y0.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite initial state".into()));
    }
    let n = y0.len();
    let t_end = *grid.last().unwrap();
    let mut t = grid[0];
    let mut y = y0.to_vec();
    check(t, &y)?;
    let mut k1 = vec![T::zero(); n];
    rhs(t, &y, &mut k1)?;

    let mut sol = OdeSolution {
        times: vec![t],
        states: vec![y.clone()],
        halt: None,
        accepted: 0,
        rejected: 0,
    };
    if grid.len() == 1 {
        return Ok(sol);
    }
    let mut next = 1;

    let span = t_end - t;
    let mut h = match opts.initial_step {
        Some(h0) => h0,
        None => {
            let scale = |i: usize| opts.atol + opts.rtol * y[i].abs();
            let d0 = (0..n).map(|i| (y[i] / scale(i)).powi(2)).sum::<T>().sqrt();
            let d1 = (0..n).map(|i| (k1[i] / scale(i)).powi(2)).sum::<T>().sqrt();
            let guess = if d0 < T::lit(1e-5) || d1 < T::lit(1e-5) {
                T::lit(1e-6)
            } else {
                T::lit(0.01) * d0 / d1
            };
            guess.min(span / T::lit(10.0))
        }
    };
    if let Some(hm) = opts.max_step {
        h = h.min(hm);
    }

    let mut k2 = vec![T::zero(); n];
    let mut k3 = vec![T::zero(); n];
    let mut k4 = vec![T::zero(); n];
    let mut k5 = vec![T::zero(); n];
    let mut k6 = vec![T::zero(); n];
    let mut k7 = vec![T::zero(); n];
    let mut tmp = vec![T::zero(); n];
    let mut y5 = vec![T::zero(); n];
    let safety = T::lit(0.9);

    while next < grid.len() {
        if sol.accepted + sol.rejected >= opts.max_steps {
            sol.halt = Some(OdeHalt {
                time: t,
                state: y.clone(),
                error: Error::TooManySteps {
                    time: t.to_f64_lossy(),
                    steps: opts.max_steps,
                },
            });
            return Ok(sol);
        }
        let min_h = opts.min_step.max(T::epsilon() * T::lit(16.0) * t.abs());
        let last = t_end - t <= h;
        if last {
            h = t_end - t;
        }

        let stage = (|| -> Result<()> {
            combo(&mut tmp, &y, h, &[(A21, &k1)]);
            rhs(t + T::lit(C2) * h, &tmp, &mut k2)?;
            combo(&mut tmp, &y, h, &[(A31, &k1), (A32, &k2)]);
            rhs(t + T::lit(C3) * h, &tmp, &mut k3)?;
            combo(&mut tmp, &y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]);
            rhs(t + T::lit(C4) * h, &tmp, &mut k4)?;
            combo(&mut tmp, &y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]);
            rhs(t + T::lit(C5) * h, &tmp, &mut k5)?;
            combo(
                &mut tmp,
                &y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            );
            rhs(t + h, &tmp, &mut k6)?;
            combo(
                &mut y5,
                &y,
                h,
                &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
            );
            if y5.iter().any(|v| !v.is_finite()) {
                return Err(Error::Overflow("integrator state".into()));
            }
            rhs(t + h, &y5, &mut k7)?;
            Ok(())
        })();

        let t_new = if last { t_end } else { t + h };
        let outcome = stage.and_then(|_| check(t_new, &y5));
        if let Err(e) = outcome {
            sol.rejected += 1;
            h = h * T::lit(0.5);
            if h < min_h {
                sol.halt = Some(OdeHalt {
                    time: t,
                    state: y.clone(),
                    error: e,
                });
                return Ok(sol);
            }
            continue;
        }

        let mut err = T::zero();
        for i in 0..n {
            let e = h
                * (T::lit(E1) * k1[i]
                    + T::lit(E3) * k3[i]
                    + T::lit(E4) * k4[i]
                    + T::lit(E5) * k5[i]
                    + T::lit(E6) * k6[i]
                    + T::lit(E7) * k7[i]);
            let sc = opts.atol + opts.rtol * y[i].abs().max(y5[i].abs());
            err = err + (e / sc).powi(2);
        }
        let err = (err / T::lit(n.max(1) as f64)).sqrt();

        if err <= T::one() {
            sol.accepted += 1;
            while next < grid.len() && grid[next] <= t_new {
                let theta = (grid[next] - t) / h;
                let one = T::one();
                let mut out = vec![T::zero(); n];
                for i in 0..n {
                    let ydiff = y5[i] - y[i];
                    let bspl = h * k1[i] - ydiff;
                    let r4 = ydiff - h * k7[i] - bspl;
                    let r5 = h
                        * (T::lit(D1) * k1[i]
                            + T::lit(D3) * k3[i]
                            + T::lit(D4) * k4[i]
                            + T::lit(D5) * k5[i]
                            + T::lit(D6) * k6[i]
                            + T::lit(D7) * k7[i]);
                    out[i] = y[i] + theta * (ydiff + (one - theta) * (bspl + theta * (r4 + (one - theta) * r5)));
                }
                if grid[next] == t_new {
                    out.copy_from_slice(&y5);
                }
                sol.times.push(grid[next]);
                sol.states.push(out);
                next += 1;
            }
            t = t_new;
            std::mem::swap(&mut y, &mut y5);
            std::mem::swap(&mut k1, &mut k7);
            let fac = if err == T::zero() {
                T::lit(5.0)
            } else {
                (safety * err.powf(T::lit(-0.2))).min(T::lit(5.0)).max(T::lit(0.2))
            };
            h = h * fac;
            if let Some(hm) = opts.max_step {
                h = h.min(hm);
            }
        } else {
            sol.rejected += 1;
            let fac = (safety * err.powf(T::lit(-0.2))).max(T::lit(0.1)).min(T::one());
            h = h * fac;
            if h < min_h {
                sol.halt = Some(OdeHalt {
                    time: t,
                    state: y.clone(),
                    error: Error::StepUnderflow {
                        time: t.to_f64_lossy(),
                        step: h.to_f64_lossy(),
                    },
                });
                return Ok(sol);
            }
        }
    }
    Ok(sol)
}

/// Convenience wrapper without a state check.
pub fn integrate_plain<T, F>(rhs: F, y0: &[T], grid: &[T], opts: &OdeOptions<T>) -> Result<OdeSolution<T>>
where
    T: Real,
    F: FnMut(T, &[T], &mut [T]) -> Result<()>,
{
    integrate(rhs, |_, _| Ok(()), y0, grid, opts)
}

/// `n` equally spaced points from `a` to `b` inclusive.
pub fn linspace<T: Real>(a: T, b: T, n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    b
                } else {
                    a + (b - a) * T::lit(i as f64) / T::lit((n - 1) as f64)
                }
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let grid = linspace(0.0, 5.0, 11);
        let sol = integrate_plain(
            |_, y: &[f64], d: &mut [f64]| {
                d[0] = -y[0];
                Ok(())
            },
            &[1.0],
            &grid,
            &OdeOptions::default(),
        )
        .unwrap();
        assert!(sol.halt.is_none());
        for (t, y) in sol.times.iter().zip(&sol.states) {
            assert!((y[0] - (-t).exp()).abs() < 1e-9, "t={t}");
        }
    }

    #[test]
    fn harmonic_oscillator_dense_output() {
        let grid = linspace(0.0, 20.0, 401);
        let sol = integrate_plain(
            |_, y: &[f64], d: &mut [f64]| {
                d[0] = y[1];
                d[1] = -y[0];
                Ok(())
            },
            &[1.0, 0.0],
            &grid,
            &OdeOptions::default(),
        )
        .unwrap();
        let worst = sol
            .times
            .iter()
            .zip(&sol.states)
            .map(|(t, y)| (y[0] - t.cos()).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-8, "worst {worst}");
    }

    #[test]
    fn check_failure_halts_near_boundary() {
        let grid = linspace(0.0, 2.0, 3);
        let sol = integrate(
            |_, _: &[f64], d: &mut [f64]| {
                d[0] = 1.0;
                Ok(())
            },
            |_, y: &[f64]| {
                if y[0] > 1.25 {
                    Err(Error::Domain("past boundary".into()))
                } else {
                    Ok(())
                }
            },
            &[0.0],
            &grid,
            &OdeOptions::default(),
        )
        .unwrap();
        let halt = sol.halt.expect("must halt");
        assert!((halt.time - 1.25).abs() < 1e-9, "halt at {}", halt.time);
        assert_eq!(sol.times.len(), 2);
    }

    #[test]
    fn rejects_bad_grid() {
        let r = integrate_plain(
            |_, _: &[f64], _: &mut [f64]| Ok(()),
            &[0.0],
            &[0.0, 0.0],
            &OdeOptions::default(),
        );
        assert!(r.is_err());
    }
}
