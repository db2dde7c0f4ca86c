//! Special functions.

use crate::scalar::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for `x > 0`.
pub fn ln_gamma<T: Real>(x: T) -> T {
    assert!(x > T::zero(), "ln_gamma needs a positive argument");
    let xf = x.to_f64_lossy();
    if xf < 0.5 {
        // Reflection keeps the Lanczos sum in its accurate range.
        let pi = std::f64::consts::PI;
        return T::lit((pi / (pi * xf).sin()).ln()) - ln_gamma(T::one() - x);
    }
    let xm = xf - 1.0;
    let mut acc = LANCZOS[0];
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (xm + k as f64);
    }
    let t = xm + LANCZOS_G + 0.5;
    T::lit(0.5 * (2.0 * std::f64::consts::PI).ln() + (xm + 0.5) * t.ln() - t + acc.ln())
}

/// Legendre polynomial P_n(x) by the three-term recurrence.
pub fn legendre_p<T: Real>(n: usize, x: T) -> T {
    let mut p0 = T::one();
    if n == 0 {
        return p0;
    }
    let mut p1 = x;
    for k in 1..n {
        let kf = T::lit(k as f64);
        let p2 = ((T::lit(2.0) * kf + T::one()) * x * p1 - kf * p0) / (kf + T::one());
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// `c^n P_n((1 + c^2) / (2c))`, evaluated without forming the argument so it
/// stays finite as `c -> 0`. This is the purity of the reduced state of the
/// two-mode su(2) family.
pub fn scaled_legendre<T: Real>(n: usize, c: T) -> T {
    let one = T::one();
    let c2 = c * c;
    let half_sum = (one + c2) * T::lit(0.5);
    let mut q0 = one;
    if n == 0 {
        return q0;
    }
    let mut q1 = half_sum;
    for k in 1..n {
        let kf = T::lit(k as f64);
        let q2 = ((T::lit(2.0) * kf + one) * half_sum * q1 - kf * c2 * q0) / (kf + one);
        q0 = q1;
        q1 = q2;
    }
    q1
}

/// `sech x` without overflow for large `|x|`.
pub fn sech<T: Real>(x: T) -> T {
    let ax = x.abs();
    let e = (-ax).exp();
    T::lit(2.0) * e / (T::one() + e * e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_gamma_known_values() {
        assert!((ln_gamma(0.5f64) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-14);
        assert!((ln_gamma(10.0f64) - 362880f64.ln()).abs() < 1e-12);
        assert!((ln_gamma(100.5f64) - 361.435_540_467_777_6).abs() / 361.4 < 1e-13);
        assert!((ln_gamma(0.1f64) - 2.252_712_651_734_206).abs() < 1e-13);
    }

    #[test]
    fn legendre_small_orders() {
        let x = 0.3f64;
        assert!((legendre_p(2, x) - 0.5 * (3.0 * x * x - 1.0)).abs() < 1e-15);
        assert!((legendre_p(3, x) - 0.5 * (5.0 * x * x * x - 3.0 * x)).abs() < 1e-15);
    }

    #[test]
    fn scaled_legendre_matches_direct() {
        for &c in &[0.3f64, 0.7, 1.0, -0.4] {
            for n in [1usize, 2, 5, 10] {
                let direct = c.powi(n as i32) * legendre_p(n, (1.0 + c * c) / (2.0 * c));
                assert!((scaled_legendre(n, c) - direct).abs() < 1e-12, "n={n} c={c}");
            }
        }
    }

    #[test]
    fn scaled_legendre_at_zero_is_central_binomial() {
        // n = 10: C(20, 10) / 4^10
        assert!((scaled_legendre(10, 0.0f64) - 184756.0 / 1048576.0).abs() < 1e-15);
        assert_eq!(scaled_legendre(1, 0.0f64), 0.5);
    }

    #[test]
    fn sech_large_argument() {
        assert_eq!(sech(1000.0f64), 0.0);
        assert!((sech(0.5f64) - 1.0 / 0.5f64.cosh()).abs() < 1e-15);
    }
}
