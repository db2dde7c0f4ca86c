//! Hermitian time-dependent Dyson map `η = exp(2εK₀ + 2μK₋ + 2μ*K₊)` in its
//! Gauss-ordered form `exp(λK₊) Λ^{K₀} exp(λ*K₋)` with `λ = Φ e^{-iφ}`.

use crate::algebra::{AlgebraKind, CoeffVector, Rep2};
use crate::error::{Error, Result};
use crate::numerics::{self, log2x2_unimodular, OdeOptions};
use crate::profile::HamiltonianProfile;
use crate::scalar::{polar, real, Real, C};

/// Gauss parameters of the map.
///
/// `amplitude` is `|Φ|`. When `flipped` is set the formulas receive `-|Φ|`,
/// which is how the su(1,1) presets substitute `Φ → -Φ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussState<T> {
    pub amplitude: T,
    pub phase: T,
    pub cartan: T,
    pub flipped: bool,
}

impl<T: Real> GaussState<T> {
    pub fn new(amplitude: T, phase: T, cartan: T) -> Result<Self> {
        if !(amplitude >= T::zero()) || !amplitude.is_finite() {
            return Err(Error::InvalidInput(format!(
                "amplitude must be finite and >= 0, got {amplitude}"
            )));
        }
        if !phase.is_finite() {
            return Err(Error::InvalidInput("phase must be finite".into()));
        }
        if !(cartan > T::zero()) || !cartan.is_finite() {
            return Err(Error::NonPositiveCartan {
                cartan: cartan.to_f64_lossy(),
            });
        }
        Ok(Self {
            amplitude,
            phase,
            cartan,
            flipped: false,
        })
    }

    /// Builds from a signed amplitude; a negative value sets the flip flag.
    pub fn from_signed(signed: T, phase: T, cartan: T) -> Result<Self> {
        let mut g = Self::new(signed.abs(), phase, cartan)?;
        g.flipped = signed < T::zero();
        Ok(g)
    }

    pub fn with_flip(mut self, flipped: bool) -> Self {
        self.flipped = flipped;
        self
    }

    /// Amplitude as seen by the formulas.
    pub fn signed_amplitude(&self) -> T {
        if self.flipped {
            -self.amplitude
        } else {
            self.amplitude
        }
    }

    /// `λ = Φ e^{-iφ}` with the signed amplitude.
    pub fn lambda(&self) -> C<T> {
        polar(self.signed_amplitude(), -self.phase)
    }

    /// `Λ + sΦ² - 1`, the denominator of `|z|`.
    pub fn z_denominator(&self, kind: AlgebraKind) -> T {
        let p = self.amplitude;
        match kind {
            AlgebraKind::Su2 => self.cartan + p * p - T::one(),
            // Factored so the root at Φ² = Λ - 1 keeps relative precision.
            AlgebraKind::Su11 => self.cartan - T::one() - p * p,
        }
    }

    /// `|z| = 2Φ / (Λ + sΦ² - 1)`; may be negative or infinite off the valid set.
    pub fn z_abs(&self, kind: AlgebraKind) -> T {
        T::lit(2.0) * self.signed_amplitude() / self.z_denominator(kind)
    }
}

/// `χ = -sΦ² - Λ`.
pub fn chi<T: Real>(g: &GaussState<T>, kind: AlgebraKind) -> T {
    -kind.s::<T>() * g.amplitude * g.amplitude - g.cartan
}

/// `-2Φ/|z| - 1`, the alternative form of `χ`.
pub fn chi_from_z<T: Real>(g: &GaussState<T>, kind: AlgebraKind) -> T {
    -T::lit(2.0) * g.signed_amplitude() / g.z_abs(kind) - T::one()
}

/// Exponential-form parameters `(ε, |μ|, arg μ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpParams<T> {
    pub epsilon: T,
    pub mu_abs: T,
    pub mu_phase: T,
}

impl<T: Real> ExpParams<T> {
    pub fn new(epsilon: T, mu_abs: T, mu_phase: T) -> Self {
        Self {
            epsilon,
            mu_abs,
            mu_phase,
        }
    }

    pub fn mu(&self) -> C<T> {
        polar(self.mu_abs, self.mu_phase)
    }

    /// `|z| = 2|μ|/ε`.
    pub fn z_abs(&self) -> T {
        T::lit(2.0) * self.mu_abs / self.epsilon
    }

    /// `Ξ² = ε² + 4s|μ|²`.
    pub fn xi_squared(&self, kind: AlgebraKind) -> T {
        self.epsilon * self.epsilon + T::lit(4.0) * kind.s::<T>() * self.mu_abs * self.mu_abs
    }

    /// Coefficients of the exponent `2εK₀ + 2μK₋ + 2μ*K₊`.
    pub fn exponent(&self) -> CoeffVector<T> {
        let two = T::lit(2.0);
        let mu = self.mu();
        CoeffVector::new(real(two * self.epsilon), mu * two, mu.conj() * two)
    }
}

// tanh(Ξ)/Ξ, regular at Ξ = 0.
fn tanh_ratio<T: Real>(xi: T) -> T {
    if xi.abs() < T::lit(1e-4) {
        let x2 = xi * xi;
        T::one() - x2 / T::lit(3.0) + T::lit(2.0) * x2 * x2 / T::lit(15.0)
    } else {
        xi.tanh() / xi
    }
}

/// Gauss parameters of `exp(2εK₀ + 2μK₋ + 2μ*K₊)`.
///
/// A negative `1 - ε tanhΞ/Ξ` yields a negative amplitude, reported through
/// the flip flag.
pub fn gauss_decompose<T: Real>(p: &ExpParams<T>, kind: AlgebraKind) -> Result<GaussState<T>> {
    let eps = p.epsilon;
    let mu = p.mu_abs;
    if !(eps >= T::zero()) {
        return Err(Error::NegativeEpsilon {
            epsilon: eps.to_f64_lossy(),
        });
    }
    if !(mu >= T::zero()) {
        return Err(Error::InvalidInput("|mu| must be >= 0".into()));
    }
    if eps == T::zero() && mu > T::zero() {
        return Err(Error::Domain("epsilon = 0 with nonzero mu leaves z undefined".into()));
    }
    let xi2 = p.xi_squared(kind);
    if xi2 < T::zero() {
        return Err(Error::Domain(format!(
            "Xi is imaginary (|z| = {} > 1)",
            p.z_abs().to_f64_lossy()
        )));
    }
    let xi = xi2.sqrt();
    let q = tanh_ratio(xi);
    // 1 - ε tanhΞ/Ξ, rearranged to avoid cancellation when ε tanhΞ/Ξ ≈ 1.
    let den = if xi > T::lit(1e-3) {
        let four_s_mu2 = T::lit(4.0) * kind.s::<T>() * mu * mu;
        let xi_minus_eps = four_s_mu2 / (xi + eps);
        let one_minus_tanh = T::lit(2.0) / ((T::lit(2.0) * xi).exp() + T::one());
        (xi_minus_eps + eps * one_minus_tanh) / xi
    } else {
        T::one() - eps * q
    };
    if den.abs() < T::min_positive_value() * T::lit(1e8) || den == T::zero() {
        return Err(Error::Overflow("Gauss factor denominator 1 - eps*tanh(Xi)/Xi".into()));
    }
    let sech = numerics::sech(xi);
    let cartan = sech * sech / (den * den);
    let signed = T::lit(2.0) * mu * q / den;
    if !cartan.is_finite() || !signed.is_finite() {
        return Err(Error::Overflow("Gauss parameters".into()));
    }
    if !(cartan > T::zero()) {
        return Err(Error::Overflow("Cartan factor underflowed to zero".into()));
    }
    GaussState::from_signed(signed, p.mu_phase, cartan)
}

/// Recovers `(ε, μ)` from the Gauss parameters through the principal
/// logarithm of the 2×2 representation.
pub fn recompose<T: Real>(g: &GaussState<T>, kind: AlgebraKind) -> Result<ExpParams<T>> {
    if !(g.cartan > T::zero()) {
        return Err(Error::NonPositiveCartan {
            cartan: g.cartan.to_f64_lossy(),
        });
    }
    let zden = g.z_denominator(kind);
    let scale = g.cartan + g.amplitude * g.amplitude + T::one();
    if zden.abs() <= T::epsilon() * scale {
        return Err(Error::DivergentZ {
            denominator: zden.to_f64_lossy(),
        });
    }
    let z = g.z_abs(kind);
    if kind == AlgebraKind::Su11 && z > T::one() {
        return Err(Error::HermitizationBreakdown {
            z_abs: z.to_f64_lossy(),
        });
    }
    let rep = Rep2::new(kind);
    let m = rep.gauss_matrix(g);
    let tr = (m[(0, 0)] + m[(1, 1)]).re;
    // exp of a traceless 2×2 has trace 2coshΞ > 0; a negative trace means the
    // Gauss product equals -exp(A).
    let sign = if tr < T::zero() { -T::one() } else { T::one() };
    let e = m.scale_real(sign);
    let log = log2x2_unimodular(&e)?;
    let c = rep.decompose(&log);
    let epsilon = c.cartan.re / T::lit(2.0);
    if epsilon < -T::lit(1e3) * T::epsilon() * (T::one() + c.cartan.norm()) {
        return Err(Error::NegativeEpsilon {
            epsilon: epsilon.to_f64_lossy(),
        });
    }
    let mu = c.lowering / T::lit(2.0);
    let mu_abs = mu.norm();
    let mu_phase = if mu_abs > T::zero() {
        // Keep the map's phase when μ points along it.
        let aligned = (mu * polar(T::one(), -g.phase)).re >= T::zero();
        if aligned {
            g.phase
        } else {
            g.phase + T::PI()
        }
    } else {
        g.phase
    };
    Ok(ExpParams {
        epsilon: epsilon.max(T::zero()),
        mu_abs,
        mu_phase,
    })
}

/// `ε` from the closed logarithmic expression in `|z|` and `Φ`. Suffers
/// cancellation when `ε tanhΞ/Ξ → 1`; kept as a cross-check.
pub fn epsilon_log_formula<T: Real>(g: &GaussState<T>, kind: AlgebraKind) -> Result<T> {
    let z = g.z_abs(kind);
    let root2 = T::one() + kind.s::<T>() * z * z;
    if root2 <= T::zero() {
        return Err(Error::HermitizationBreakdown {
            z_abs: z.to_f64_lossy(),
        });
    }
    let q = root2.sqrt();
    let phi = g.signed_amplitude();
    let num = (T::one() + q) * phi + z;
    let den = (T::one() - q) * phi + z;
    let ratio = num / den;
    if !(ratio > T::zero()) || !ratio.is_finite() {
        return Err(Error::Domain(format!(
            "log argument {} is not positive",
            ratio.to_f64_lossy()
        )));
    }
    Ok(ratio.ln() / (T::lit(2.0) * q))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Validity {
    Valid,
    NonPositiveCartan,
    ZExceedsUnity,
    DivergentZ,
    InvalidEpsilon,
}

impl Validity {
    pub fn is_valid(self) -> bool {
        self == Validity::Valid
    }
}

/// Classifies a Gauss state against the conditions for a Hermitian map with
/// real non-negative `ε`.
pub fn validity<T: Real>(g: &GaussState<T>, kind: AlgebraKind) -> Validity {
    if !(g.cartan > T::zero()) || !g.cartan.is_finite() || !g.amplitude.is_finite() {
        return Validity::NonPositiveCartan;
    }
    let zden = g.z_denominator(kind);
    let scale = g.cartan + g.amplitude * g.amplitude + T::one();
    if kind == AlgebraKind::Su2 && zden <= T::epsilon() * scale {
        return Validity::DivergentZ;
    }
    if zden.abs() <= T::epsilon() * scale {
        return Validity::DivergentZ;
    }
    let z = g.z_abs(kind);
    if z < T::zero() {
        return Validity::InvalidEpsilon;
    }
    if kind == AlgebraKind::Su11 && z > T::one() {
        return Validity::ZExceedsUnity;
    }
    // ε carries the sign of tr(M)·(Λ + sΦ² - 1) in the 2×2 representation.
    let trace_sign = g.cartan + kind.s::<T>() * g.amplitude * g.amplitude + T::one();
    if trace_sign * zden < T::zero() {
        return Validity::InvalidEpsilon;
    }
    Validity::Valid
}

/// The error matching a failed validity status.
pub fn validity_error<T: Real>(g: &GaussState<T>, kind: AlgebraKind) -> Result<()> {
    match validity(g, kind) {
        Validity::Valid => Ok(()),
        Validity::NonPositiveCartan => Err(Error::NonPositiveCartan {
            cartan: g.cartan.to_f64_lossy(),
        }),
        Validity::ZExceedsUnity => Err(Error::HermitizationBreakdown {
            z_abs: g.z_abs(kind).to_f64_lossy(),
        }),
        Validity::DivergentZ => Err(Error::DivergentZ {
            denominator: g.z_denominator(kind).to_f64_lossy(),
        }),
        Validity::InvalidEpsilon => Err(Error::NegativeEpsilon { epsilon: f64::NAN }),
    }
}

/// Time derivatives of the Gauss parameters. `amplitude` is the rate of the
/// signed amplitude.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DysonRates<T> {
    pub amplitude: T,
    pub phase: T,
    pub cartan: T,
}

impl<T: Real> DysonRates<T> {
    pub fn zero() -> Self {
        Self {
            amplitude: T::zero(),
            phase: T::zero(),
            cartan: T::zero(),
        }
    }
}

pub(crate) const SINGULAR_TOL: f64 = 1e-10;

// Rates with dΛ returned as dΛ/Λ.
pub(crate) fn rates_log<T: Real>(
    g: &GaussState<T>,
    h: &HamiltonianProfile<T>,
    t: T,
    kind: AlgebraKind,
) -> Result<DysonRates<T>> {
    let s = kind.s::<T>();
    let two = T::lit(2.0);
    let one = T::one();
    let phi = g.signed_amplitude();
    let phi2 = phi * phi;
    let chi = chi(g, kind);
    let cm1 = chi - one;
    if !(cm1.abs() >= T::lit(SINGULAR_TOL)) {
        return Err(Error::SingularRhs {
            what: "chi - 1",
            value: cm1.to_f64_lossy(),
        });
    }
    let w_r = h.omega_re.value(t);
    let w_i = h.omega_im.value(t);
    let a_abs = h.alpha_abs.value(t);
    let a_ph = h.alpha_phase.value(t);
    let b_abs = h.beta_abs.value(t);
    let b_ph = h.beta_phase.value(t);
    let ph = g.phase;
    let sin_a = a_abs * (ph - a_ph).sin();
    let cos_a = a_abs * (ph - a_ph).cos();
    let sin_b = b_abs * (ph + b_ph).sin();
    let cos_b = b_abs * (ph + b_ph).cos();

    let d_amp =
        two / cm1 * ((phi * w_i - sin_a) * (one + s * phi2) + sin_b * (s * (two * chi - one) * phi2 + chi * chi));

    let brace = cos_a * (one + s * phi2) - cos_b * (s * phi2 + chi * chi);
    let d_phase = if brace == T::zero() {
        two * w_r
    } else {
        if !(phi.abs() >= T::lit(SINGULAR_TOL)) {
            return Err(Error::SingularRhs {
                what: "Phi",
                value: phi.to_f64_lossy(),
            });
        }
        two * w_r - two / (cm1 * phi) * brace
    };

    let d_log_cartan =
        two * ((two * s * phi2 / cm1 - one) * w_i - two * s * phi / cm1 * (sin_a - (two * chi - one) * sin_b));
    Ok(DysonRates {
        amplitude: d_amp,
        phase: d_phase,
        cartan: d_log_cartan,
    })
}

/// Right-hand side of the constraint ODEs for `(Φ, φ, Λ)`.
pub fn dyson_ode_rhs<T: Real>(
    g: &GaussState<T>,
    h: &HamiltonianProfile<T>,
    t: T,
    kind: AlgebraKind,
) -> Result<DysonRates<T>> {
    let mut r = rates_log(g, h, t, kind)?;
    r.cartan = r.cartan * g.cartan;
    Ok(r)
}

/// Why and where an integration stopped before the end of the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Breakdown<T> {
    /// Last time at which the state was valid.
    pub time: T,
    pub state: GaussState<T>,
    pub reason: Error,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DysonTrajectory<T> {
    pub times: Vec<T>,
    pub states: Vec<GaussState<T>>,
    pub breakdown: Option<Breakdown<T>>,
}

impl<T: Real> DysonTrajectory<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

pub(crate) fn state_from_vec<T: Real>(y: &[T]) -> Result<GaussState<T>> {
    let cartan = y[2].exp();
    if !cartan.is_finite() || !(cartan > T::zero()) {
        return Err(Error::Overflow("Cartan factor".into()));
    }
    GaussState::from_signed(y[0], y[1], cartan)
}

/// Integrates the constraint ODEs on `grid` (which starts at the initial
/// time). Internally `ln Λ` is integrated so `Λ` keeps relative accuracy as it
/// approaches zero. Stops at the first invalid state or near-singular
/// right-hand side and reports it in [`DysonTrajectory::breakdown`].
pub fn integrate_dyson<T: Real>(
    g0: &GaussState<T>,
    h: &HamiltonianProfile<T>,
    grid: &[T],
    opts: &OdeOptions<T>,
    kind: AlgebraKind,
) -> Result<DysonTrajectory<T>> {
    validity_error(g0, kind)?;
    let y0 = [g0.signed_amplitude(), g0.phase, g0.cartan.ln()];
    let sol = numerics::integrate(
        |t, y: &[T], dy: &mut [T]| {
            let g = state_from_vec(y)?;
            let r = rates_log(&g, h, t, kind)?;
            dy[0] = r.amplitude;
            dy[1] = r.phase;
            dy[2] = r.cartan;
            Ok(())
        },
        |_, y: &[T]| {
            let g = state_from_vec(y)?;
            validity_error(&g, kind)?;
            let cm1 = chi(&g, kind) - T::one();
            if cm1.abs() < T::lit(SINGULAR_TOL) {
                return Err(Error::SingularRhs {
                    what: "chi - 1",
                    value: cm1.to_f64_lossy(),
                });
            }
            Ok(())
        },
        &y0,
        grid,
        opts,
    )?;
    let states = sol
        .states
        .iter()
        .map(|y| state_from_vec(y))
        .collect::<Result<Vec<_>>>()?;
    let breakdown = match sol.halt {
        Some(halt) => Some(Breakdown {
            time: halt.time,
            state: state_from_vec(&halt.state)?,
            reason: halt.error,
        }),
        None => None,
    };
    Ok(DysonTrajectory {
        times: sol.times,
        states,
        breakdown,
    })
}

// 1 + sΦ², factored for su(1,1) to keep precision near Φ = ±1.
fn one_plus_s_phi2<T: Real>(phi: T, kind: AlgebraKind) -> T {
    match kind {
        AlgebraKind::Su2 => T::one() + phi * phi,
        AlgebraKind::Su11 => (T::one() - phi) * (T::one() + phi),
    }
}

/// Closed-form solution of the `α = β = 0` system at time `t`.
pub fn k0_closed_form<T: Real>(
    g0: &GaussState<T>,
    h: &HamiltonianProfile<T>,
    t: T,
    kind: AlgebraKind,
) -> Result<GaussState<T>> {
    let x = T::lit(2.0) * h.omega_im.integral(t);
    let u = x.exp();
    let phi0 = g0.signed_amplitude();
    let l0 = g0.cartan;
    let a = one_plus_s_phi2(phi0, kind);
    let d = l0 + a * u;
    let phi = phi0 * (l0 + a) / d;
    let ratio = if a.abs() > T::lit(1e-6) {
        one_plus_s_phi2(phi, kind) / a
    } else {
        // Expanded form of (1 + sΦ(t)²)/(1 + sΦ₀²), finite at a = 0.
        ((l0 + a) * (l0 + a) + T::lit(2.0) * l0 * (u - T::one()) + a * (u * u - T::one())) / (d * d)
    };
    let cartan = l0 * ratio * (-x).exp();
    let phase = g0.phase + T::lit(2.0) * h.omega_re.integral(t);
    if !phi.is_finite() || !cartan.is_finite() {
        return Err(Error::Overflow("closed-form Gauss parameters".into()));
    }
    if !(cartan > T::zero()) {
        return Err(Error::NonPositiveCartan {
            cartan: cartan.to_f64_lossy(),
        });
    }
    GaussState::from_signed(phi, phase, cartan)
}

/// Closed forms on a grid, stopping at the first invalid sample.
pub fn k0_trajectory<T: Real>(
    g0: &GaussState<T>,
    h: &HamiltonianProfile<T>,
    grid: &[T],
    kind: AlgebraKind,
) -> Result<DysonTrajectory<T>> {
    validity_error(g0, kind)?;
    let mut out = DysonTrajectory {
        times: Vec::with_capacity(grid.len()),
        states: Vec::with_capacity(grid.len()),
        breakdown: None,
    };
    for &t in grid {
        let step = k0_closed_form(g0, h, t, kind).and_then(|g| validity_error(&g, kind).map(|_| g));
        match step {
            Ok(g) => {
                out.times.push(t);
                out.states.push(g);
            }
            Err(reason) => {
                out.breakdown = Some(Breakdown {
                    time: *out.times.last().unwrap_or(&t),
                    state: *out.states.last().unwrap_or(g0),
                    reason,
                });
                break;
            }
        }
    }
    Ok(out)
}

/// Characteristic times of the linear ramp `ω_I = γ² t`. Undefined times
/// (non-positive logarithm arguments) are `None`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalTimes<T> {
    /// su(1,1): first time `|z| = 1`.
    pub t_minus: Option<T>,
    /// su(1,1): second time `|z| = 1`.
    pub t_plus: Option<T>,
    /// su(1,1): time of maximal `|z|`; su(2): boundary time where `|z| → ∞`.
    pub t_star: Option<T>,
    /// su(2): time at which `r = π/4` for `l = 1`.
    pub t_prime: Option<T>,
    /// su(1,1): `|z|` at `t_star`.
    pub z_at_t_star: Option<T>,
    /// Large-`Φ₀` approximation of `t_star`.
    pub t_approx: Option<T>,
}

fn sqrt_log_time<T: Real>(arg: T, gamma: T, factor: T) -> Option<T> {
    if !(arg > T::zero()) {
        return None;
    }
    let v = factor * arg.ln();
    if v < T::zero() || !v.is_finite() {
        return None;
    }
    Some(v.sqrt() / gamma)
}

/// Evaluates the closed-form critical times for initial amplitude `phi0 > 0`
/// and Cartan factor `cartan0`.
pub fn critical_times<T: Real>(phi0: T, cartan0: T, gamma: T, kind: AlgebraKind) -> Result<CriticalTimes<T>> {
    if !(gamma > T::zero()) {
        return Err(Error::InvalidInput("gamma must be positive".into()));
    }
    if !(phi0 > T::zero()) || !(cartan0 > T::zero()) {
        return Err(Error::InvalidInput(
            "initial amplitude and Cartan factor must be positive".into(),
        ));
    }
    let one = T::one();
    let half = T::lit(0.5);
    Ok(match kind {
        AlgebraKind::Su11 => {
            let t_plus = sqrt_log_time(phi0 - cartan0 / (phi0 + one), gamma, one);
            let t_minus = sqrt_log_time(phi0 - cartan0 / (phi0 - one), gamma, one);
            let t_star = match (t_minus, t_plus) {
                (Some(m), Some(p)) => Some((half * (m * m + p * p)).sqrt()),
                _ => None,
            };
            let p2 = phi0 * phi0;
            let a = one - cartan0 / p2;
            let num = a - one / p2;
            let rad = (a * a - one / p2) * (one - one / p2);
            let z_at_t_star = if rad > T::zero() { Some(num / rad.sqrt()) } else { None };
            CriticalTimes {
                t_minus,
                t_plus,
                t_star,
                t_prime: None,
                z_at_t_star,
                t_approx: sqrt_log_time(phi0 - cartan0 / phi0, gamma, one),
            }
        }
        AlgebraKind::Su2 => {
            let p2 = phi0 * phi0;
            let b = one + cartan0 / p2;
            let t_star = sqrt_log_time(p2 * (b * b + one / p2) / (one + one / p2), gamma, half);
            let t_prime = sqrt_log_time(phi0 * (one + one / phi0 + cartan0 / p2) / (one - one / p2), gamma, one);
            CriticalTimes {
                t_minus: None,
                t_plus: None,
                t_star,
                t_prime,
                z_at_t_star: None,
                t_approx: sqrt_log_time(phi0, gamma, one),
            }
        }
    })
}
