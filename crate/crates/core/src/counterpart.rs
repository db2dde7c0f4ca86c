//! Coefficients of the Hermitian counterpart `h = ηHη⁻¹ + i(∂ₜη)η⁻¹`.

use crate::algebra::AlgebraKind;
use crate::dyson::{chi, dyson_ode_rhs, DysonRates, GaussState};
use crate::error::{Error, Result};
use crate::profile::HamiltonianProfile;
use crate::scalar::{cplx, polar, real, Real, C};

/// `h = 2W K₀ + 2U K₋ + 2V K₊` before hermiticity is imposed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RawCoeffs<T> {
    pub w: C<T>,
    pub u: C<T>,
    pub v: C<T>,
}

/// Hermitian form `h = 2W K₀ + 2U K₋ + 2U* K₊`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HermCoeffs<T> {
    pub w: T,
    pub u: C<T>,
}

impl<T: Real> HermCoeffs<T> {
    pub fn new(w: T, u: C<T>) -> Self {
        Self { w, u }
    }
}

/// Deviation from hermiticity: `|Im W|` and `|V - U*|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residual<T> {
    pub im_w: T,
    pub crossing: T,
}

impl<T: Real> Residual<T> {
    pub fn max(&self) -> T {
        self.im_w.max(self.crossing)
    }
}

/// Raw counterpart coefficients for a map moving at the given rates.
pub fn counterpart_raw<T: Real>(
    h: &HamiltonianProfile<T>,
    g: &GaussState<T>,
    rates: &DysonRates<T>,
    t: T,
    kind: AlgebraKind,
) -> Result<RawCoeffs<T>> {
    if !(g.cartan > T::lit(1e-300).max(T::min_positive_value())) {
        return Err(Error::InvalidMap(format!("Cartan factor {} too small", g.cartan)));
    }
    let s = kind.s::<T>();
    let two = T::lit(2.0);
    let half_i = cplx(T::zero(), T::lit(0.5));
    let omega = h.omega(t);
    let alpha = h.alpha(t);
    let beta = h.beta(t);
    let lam = g.lambda();
    let lam_c = lam.conj();
    let phi = g.signed_amplitude();
    let chi = chi(g, kind);
    let cartan = g.cartan;
    let lam_dot = cplx(rates.amplitude, -phi * rates.phase) * polar(T::one(), -g.phase);
    let lam_dot_c = lam_dot.conj();
    let inv = T::one() / cartan;

    let w = (omega * (s * phi * phi - chi)
        + (alpha * lam + beta * lam_c * chi) * (two * s)
        + half_i * (real(rates.cartan) + lam_dot_c * lam * (two * s)))
        * inv;
    let u = (omega * lam_c + alpha - beta * lam_c * lam_c * s + half_i * lam_dot_c) * inv;
    let v = (omega * lam * chi - alpha * lam * lam * s
        + beta * (chi * chi)
        + half_i * (lam_dot * cartan - lam * rates.cartan - lam_dot_c * lam * lam * s))
        * inv;
    Ok(RawCoeffs { w, u, v })
}

/// Hermitian coefficients from the simplified closed expressions.
pub fn counterpart<T: Real>(
    h: &HamiltonianProfile<T>,
    g: &GaussState<T>,
    t: T,
    kind: AlgebraKind,
) -> Result<HermCoeffs<T>> {
    let chi = chi(g, kind);
    let cm1 = chi - T::one();
    if !(cm1.abs() >= T::lit(1e-10)) {
        return Err(Error::SingularRhs {
            what: "chi - 1",
            value: cm1.to_f64_lossy(),
        });
    }
    let s = kind.s::<T>();
    let two = T::lit(2.0);
    let phi = g.signed_amplitude();
    let a_abs = h.alpha_abs.value(t);
    let a_ph = h.alpha_phase.value(t);
    let b_abs = h.beta_abs.value(t);
    let b_ph = h.beta_phase.value(t);
    let w =
        h.omega_re.value(t) - two * s * phi / cm1 * (a_abs * (g.phase - a_ph).cos() - b_abs * (g.phase + b_ph).cos());
    let i_rot = cplx(T::zero(), T::one()) * polar(T::one(), g.phase);
    let u = (h.alpha(t) - h.beta(t).conj() * chi + i_rot * (phi * h.omega_im.value(t))) / (T::one() - chi);
    Ok(HermCoeffs { w, u })
}

/// Raw coefficients with the rates taken from the constraint ODEs.
pub fn counterpart_on_shell<T: Real>(
    h: &HamiltonianProfile<T>,
    g: &GaussState<T>,
    t: T,
    kind: AlgebraKind,
) -> Result<RawCoeffs<T>> {
    let rates = dyson_ode_rhs(g, h, t, kind)?;
    counterpart_raw(h, g, &rates, t, kind)
}

pub fn hermiticity_residual<T: Real>(r: &RawCoeffs<T>) -> Residual<T> {
    Residual {
        im_w: r.w.im.abs(),
        crossing: (r.v - r.u.conj()).norm(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::Profile;

    #[test]
    fn identity_map_gives_bare_frequency() {
        let h = HamiltonianProfile::<f64>::k0(Profile::<f64>::constant(0.7), Profile::<f64>::constant(0.2));
        let g = GaussState::<f64>::new(0.0, 0.0, 1.0).unwrap();
        let r = counterpart_raw(&h, &g, &DysonRates::zero(), 0.0, AlgebraKind::Su11).unwrap();
        assert!((r.w - cplx(0.7, 0.2)).norm() < 1e-15);
        assert_eq!(r.u, cplx(0.0, 0.0));
        assert_eq!(r.v, cplx(0.0, 0.0));
    }

    #[test]
    fn k0_counterpart_example() {
        let h = HamiltonianProfile::<f64>::k0(Profile::<f64>::zero(), Profile::<f64>::constant(1.0));
        let g = GaussState::<f64>::new(2.0, 0.0, 1.0).unwrap();
        let c = counterpart(&h, &g, 0.0, AlgebraKind::Su2).unwrap();
        assert_eq!(c.w, 0.0);
        assert!((c.u - cplx(0.0, 1.0 / 3.0)).norm() < 1e-15);
    }

    #[test]
    fn real_frequency_gives_pure_rotation() {
        let h = HamiltonianProfile::<f64>::k0(Profile::<f64>::constant(1.3), Profile::<f64>::zero());
        let g = GaussState::<f64>::new(0.4, 0.2, 3.0).unwrap();
        let c = counterpart(&h, &g, 0.0, AlgebraKind::Su11).unwrap();
        assert_eq!(c.u, cplx(0.0, 0.0));
        assert_eq!(c.w, 1.3);
    }

    #[test]
    fn on_shell_raw_matches_simplified() {
        let h = HamiltonianProfile::<f64>::k0(Profile::<f64>::constant(1.0), Profile::<f64>::constant(0.3))
            .with_alpha(Profile::<f64>::constant(0.2), Profile::<f64>::constant(0.4))
            .with_beta(Profile::<f64>::constant(0.1), Profile::<f64>::constant(-0.2));
        let g = GaussState::<f64>::new(2.0, 0.1, 1.5).unwrap();
        for kind in [AlgebraKind::Su11, AlgebraKind::Su2] {
            let raw = counterpart_on_shell(&h, &g, 0.0, kind).unwrap();
            let res = hermiticity_residual(&raw);
            assert!(res.max() < 1e-12, "{kind}: {res:?}");
            let c = counterpart(&h, &g, 0.0, kind).unwrap();
            assert!((raw.w.re - c.w).abs() < 1e-12);
            assert!((raw.u - c.u).norm() < 1e-12);
        }
    }

    #[test]
    fn off_shell_rates_detected() {
        let h = HamiltonianProfile::<f64>::linear_ramp(0.5, 0.5);
        let g = GaussState::<f64>::new(2.0, 0.1, 1.5).unwrap();
        let raw = counterpart_raw(&h, &g, &DysonRates::zero(), 1.0, AlgebraKind::Su2).unwrap();
        assert!(hermiticity_residual(&raw).max() > 1e-3);
    }

    #[test]
    fn residual_examples() {
        let r = RawCoeffs {
            w: cplx(1.0, 0.5),
            u: cplx(0.0, 0.0),
            v: cplx(0.0, 0.0),
        };
        let res = hermiticity_residual(&r);
        assert_eq!((res.im_w, res.crossing), (0.5, 0.0));
    }
}
