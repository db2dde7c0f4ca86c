//! Time-dependent Hamiltonian coefficients as piecewise polynomials.

use crate::error::{Error, Result};
use crate::scalar::{polar, Real, C};

/// Polynomial `Σ c_k t^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Real> Polynomial<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn eval(&self, t: T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * t + *c)
    }

    /// Antiderivative vanishing at `t = 0`.
    pub fn antiderivative(&self, t: T) -> T {
        self.coeffs
            .iter()
            .enumerate()
            .rev()
            .fold(T::zero(), |acc, (k, c)| acc * t + *c / T::lit((k + 1) as f64))
            * t
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == T::zero())
    }
}

/// Real function of time given by polynomial pieces. Piece `i` applies on
/// `[starts[i], starts[i + 1])`; the first piece also extends to the left.
/// Each polynomial is written in absolute time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct Profile<T> {
    starts: Vec<T>,
    pieces: Vec<Polynomial<T>>,
}

impl<T: Real> Profile<T> {
    pub fn constant(c: T) -> Self {
        Self::polynomial(vec![c])
    }

    pub fn zero() -> Self {
        Self::constant(T::zero())
    }

    /// `c0 + c1 t`.
    pub fn linear(c0: T, c1: T) -> Self {
        Self::polynomial(vec![c0, c1])
    }

    pub fn polynomial(coeffs: Vec<T>) -> Self {
        Self {
            starts: vec![T::zero()],
            pieces: vec![Polynomial::new(coeffs)],
        }
    }

    /// Builds a piecewise profile from `(start, coefficients)` pairs with
    /// strictly increasing starts.
    pub fn piecewise(pieces: Vec<(T, Vec<T>)>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidInput("profile needs at least one piece".into()));
        }
        if pieces.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::InvalidInput("profile breakpoints must increase".into()));
        }
        if pieces.iter().flat_map(|p| p.1.iter()).any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("profile coefficients must be finite".into()));
        }
        let (starts, pieces) = pieces.into_iter().map(|(s, c)| (s, Polynomial::new(c))).unzip();
        Ok(Self { starts, pieces })
    }

    pub fn pieces(&self) -> impl Iterator<Item = (T, &Polynomial<T>)> {
        self.starts.iter().copied().zip(self.pieces.iter())
    }

    fn piece_index(&self, t: T) -> usize {
        self.starts.iter().rposition(|s| *s <= t).unwrap_or(0)
    }

    pub fn value(&self, t: T) -> T {
        self.pieces[self.piece_index(t)].eval(t)
    }

    /// Exact `∫₀ᵗ` of the profile.
    pub fn integral(&self, t: T) -> T {
        self.primitive(t) - self.primitive(T::zero())
    }

    // Continuous primitive, zero at the first breakpoint.
    fn primitive(&self, t: T) -> T {
        let idx = self.piece_index(t);
        let mut acc = T::zero();
        for i in 0..idx {
            let p = &self.pieces[i];
            acc = acc + p.antiderivative(self.starts[i + 1]) - p.antiderivative(self.starts[i]);
        }
        let p = &self.pieces[idx];
        acc + p.antiderivative(t) - p.antiderivative(self.starts[idx])
    }

    pub fn is_identically_zero(&self) -> bool {
        self.pieces.iter().all(Polynomial::is_zero)
    }
}

/// Coefficients of `H = 2ω K₀ + 2α K₋ + 2β K₊` with `ω = ω_R + iω_I`.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianProfile<T> {
    pub omega_re: Profile<T>,
    pub omega_im: Profile<T>,
    pub alpha_abs: Profile<T>,
    pub alpha_phase: Profile<T>,
    pub beta_abs: Profile<T>,
    pub beta_phase: Profile<T>,
}

impl<T: Real> HamiltonianProfile<T> {
    /// Hamiltonian with only a `K₀` term.
    pub fn k0(omega_re: Profile<T>, omega_im: Profile<T>) -> Self {
        Self {
            omega_re,
            omega_im,
            alpha_abs: Profile::zero(),
            alpha_phase: Profile::zero(),
            beta_abs: Profile::zero(),
            beta_phase: Profile::zero(),
        }
    }

    /// The PT-symmetric ramp: constant `ω_R` and `ω_I = γ² t`.
    pub fn linear_ramp(omega_re: T, gamma: T) -> Self {
        Self::k0(Profile::constant(omega_re), Profile::linear(T::zero(), gamma * gamma))
    }

    pub fn with_alpha(mut self, abs: Profile<T>, phase: Profile<T>) -> Self {
        self.alpha_abs = abs;
        self.alpha_phase = phase;
        self
    }

    pub fn with_beta(mut self, abs: Profile<T>, phase: Profile<T>) -> Self {
        self.beta_abs = abs;
        self.beta_phase = phase;
        self
    }

    pub fn omega(&self, t: T) -> C<T> {
        C::new(self.omega_re.value(t), self.omega_im.value(t))
    }

    pub fn alpha(&self, t: T) -> C<T> {
        polar(self.alpha_abs.value(t), self.alpha_phase.value(t))
    }

    pub fn beta(&self, t: T) -> C<T> {
        polar(self.beta_abs.value(t), self.beta_phase.value(t))
    }

    /// True when `α` and `β` vanish identically.
    pub fn is_k0(&self) -> bool {
        self.alpha_abs.is_identically_zero() && self.beta_abs.is_identically_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_integral() {
        let p = Profile::<f64>::linear(0.0, 0.25);
        assert_eq!(p.value(2.0), 0.5);
        assert!((p.integral(2.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn piecewise_integral_is_continuous() {
        let p = Profile::<f64>::piecewise(vec![(0.0, vec![1.0]), (1.0, vec![0.0, 2.0]), (2.0, vec![3.0])]).unwrap();
        // ∫₀¹ 1 + ∫₁² 2t + ∫₂³ 3 = 1 + 3 + 3
        assert!((p.integral(3.0) - 7.0).abs() < 1e-14);
        assert!((p.integral(1.5) - (1.0 + 1.25)).abs() < 1e-14);
        assert!((p.integral(0.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn piecewise_with_negative_start() {
        let p = Profile::<f64>::piecewise(vec![(-1.0, vec![2.0]), (1.0, vec![4.0])]).unwrap();
        assert!((p.integral(0.5) - 1.0).abs() < 1e-15);
        assert!((p.integral(2.0) - 6.0).abs() < 1e-15);
    }

    #[test]
    fn cubic_antiderivative() {
        let p = Profile::<f64>::polynomial(vec![1.0, -2.0, 0.0, 4.0]);
        let t: f64 = 1.3;
        let exact = t - t * t + t.powi(4);
        assert!((p.integral(t) - exact).abs() < 1e-14);
    }

    #[test]
    fn rejects_unordered_breaks() {
        assert!(Profile::<f64>::piecewise(vec![(1.0, vec![1.0]), (0.5, vec![2.0])]).is_err());
    }
}
