//! The unified su(1,1)/su(2) algebra
//! `[K₀, K±] = ±K±`, `[K₊, K₋] = 2s K₀`, with `s = -1` for su(1,1) and `s = +1`
//! for su(2).
//!
//! Elements are coefficient triples on `(K₀, K₋, K₊)`. A faithful 2×2
//! representation serves as an independent oracle for parameter identities.

use std::ops::{Add, Mul, Sub};

use crate::dyson::GaussState;
use crate::error::{Error, Result};
use crate::numerics::CMatrix;
use crate::scalar::{real, Real, C};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlgebraKind {
    /// su(2), `s = +1`.
    Su2,
    /// su(1,1), `s = -1`.
    Su11,
}

impl AlgebraKind {
    pub fn sign(self) -> i32 {
        match self {
            AlgebraKind::Su2 => 1,
            AlgebraKind::Su11 => -1,
        }
    }

    pub fn from_sign(s: i32) -> Option<Self> {
        match s {
            1 => Some(AlgebraKind::Su2),
            -1 => Some(AlgebraKind::Su11),
            _ => None,
        }
    }

    pub fn s<T: Real>(self) -> T {
        T::lit(self.sign() as f64)
    }

    pub fn name(self) -> &'static str {
        match self {
            AlgebraKind::Su2 => "su2",
            AlgebraKind::Su11 => "su11",
        }
    }
}

impl std::str::FromStr for AlgebraKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "su2" | "su(2)" | "+1" | "1" => Ok(AlgebraKind::Su2),
            "su11" | "su(1,1)" | "-1" => Ok(AlgebraKind::Su11),
            other => Err(Error::InvalidInput(format!("unknown algebra '{other}'"))),
        }
    }
}

impl std::fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Algebra element `cartan·K₀ + lowering·K₋ + raising·K₊`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoeffVector<T> {
    pub cartan: C<T>,
    pub lowering: C<T>,
    pub raising: C<T>,
}

impl<T: Real> CoeffVector<T> {
    pub fn new(cartan: C<T>, lowering: C<T>, raising: C<T>) -> Self {
        Self {
            cartan,
            lowering,
            raising,
        }
    }

    pub fn zero() -> Self {
        let z = real(T::zero());
        Self::new(z, z, z)
    }

    pub fn k0() -> Self {
        Self::basis(0)
    }

    pub fn lowering_op() -> Self {
        Self::basis(1)
    }

    pub fn raising_op() -> Self {
        Self::basis(2)
    }

    /// Unit vector for index 0 (K₀), 1 (K₋) or 2 (K₊).
    pub fn basis(i: usize) -> Self {
        let mut a = [real(T::zero()); 3];
        a[i] = real(T::one());
        Self::from_array(a)
    }

    pub fn from_array(a: [C<T>; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [C<T>; 3] {
        [self.cartan, self.lowering, self.raising]
    }

    pub fn scale(self, k: C<T>) -> Self {
        Self::new(self.cartan * k, self.lowering * k, self.raising * k)
    }

    pub fn norm(self) -> T {
        self.to_array().iter().map(|c| c.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.to_array().iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

impl<T: Real> Add for CoeffVector<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(
            self.cartan + o.cartan,
            self.lowering + o.lowering,
            self.raising + o.raising,
        )
    }
}

impl<T: Real> Sub for CoeffVector<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(
            self.cartan - o.cartan,
            self.lowering - o.lowering,
            self.raising - o.raising,
        )
    }
}

impl<T: Real> Mul<C<T>> for CoeffVector<T> {
    type Output = Self;
    fn mul(self, k: C<T>) -> Self {
        self.scale(k)
    }
}

/// Coefficients of `[A, B]`.
pub fn commutator<T: Real>(a: CoeffVector<T>, b: CoeffVector<T>, kind: AlgebraKind) -> CoeffVector<T> {
    let two_s = kind.s::<T>() * T::lit(2.0);
    CoeffVector::new(
        (a.raising * b.lowering - a.lowering * b.raising) * two_s,
        a.lowering * b.cartan - a.cartan * b.lowering,
        a.cartan * b.raising - a.raising * b.cartan,
    )
}

/// Linear map on coefficient triples induced by `X ↦ η X η⁻¹`.
/// Entry `(j, i)` is the coefficient of `K_j` in `η K_i η⁻¹`, with indices
/// ordered `(K₀, K₋, K₊)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdjointTransfer<T> {
    pub m: [[C<T>; 3]; 3],
}

impl<T: Real> AdjointTransfer<T> {
    pub fn identity() -> Self {
        let mut m = [[real(T::zero()); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = real(T::one());
        }
        Self { m }
    }

    pub fn apply(&self, x: CoeffVector<T>) -> CoeffVector<T> {
        let a = x.to_array();
        let mut out = [real(T::zero()); 3];
        for (j, o) in out.iter_mut().enumerate() {
            *o = (0..3).fold(real(T::zero()), |acc, i| acc + self.m[j][i] * a[i]);
        }
        CoeffVector::from_array(out)
    }

    pub fn compose(&self, other: &Self) -> Self {
        let mut m = [[real(T::zero()); 3]; 3];
        for (j, row) in m.iter_mut().enumerate() {
            for (i, v) in row.iter_mut().enumerate() {
                *v = (0..3).fold(real(T::zero()), |acc, k| acc + self.m[j][k] * other.m[k][i]);
            }
        }
        Self { m }
    }

    pub fn inverse(&self) -> Result<Self> {
        let mat = CMatrix::from_fn(3, 3, |i, j| self.m[i][j]);
        let inv = mat.inverse()?;
        let mut m = [[real(T::zero()); 3]; 3];
        for (j, row) in m.iter_mut().enumerate() {
            for (i, v) in row.iter_mut().enumerate() {
                *v = inv[(j, i)];
            }
        }
        Ok(Self { m })
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for j in 0..3 {
            for i in 0..3 {
                worst = worst.max((self.m[j][i] - other.m[j][i]).norm());
            }
        }
        worst
    }
}

/// Adjoint action of the Gauss-ordered map
/// `η = exp(λK₊) Λ^{K₀} exp(λ*K₋)` on the generators.
pub fn adjoint_transfer<T: Real>(g: &GaussState<T>, kind: AlgebraKind) -> Result<AdjointTransfer<T>> {
    let cartan = g.cartan;
    if !(cartan > T::zero()) {
        return Err(Error::NonPositiveCartan {
            cartan: cartan.to_f64_lossy(),
        });
    }
    let s = kind.s::<T>();
    let two = T::lit(2.0);
    let lam = g.lambda();
    let lam_c = lam.conj();
    let phi2 = lam.norm_sqr();
    let chi = crate::dyson::chi(g, kind);
    let inv = T::one() / cartan;
    let col_k0 = [real((s * phi2 - chi) * inv), lam_c * inv, lam * (chi * inv)];
    let col_km = [lam * (two * s * inv), real(inv), -(lam * lam) * (s * inv)];
    let col_kp = [
        lam_c * (two * s * chi * inv),
        -(lam_c * lam_c) * (s * inv),
        real(chi * chi * inv),
    ];
    let mut m = [[real(T::zero()); 3]; 3];
    for j in 0..3 {
        m[j][0] = col_k0[j];
        m[j][1] = col_km[j];
        m[j][2] = col_kp[j];
    }
    Ok(AdjointTransfer { m })
}

/// Faithful 2×2 representation: `K₀ = diag(½, -½)`, `K₊ = [[0,1],[0,0]]`,
/// `K₋ = [[0,0],[s,0]]`.
#[derive(Clone, Debug)]
pub struct Rep2<T> {
    pub kind: AlgebraKind,
    pub k0: CMatrix<T>,
    pub kp: CMatrix<T>,
    pub km: CMatrix<T>,
}

impl<T: Real> Rep2<T> {
    pub fn new(kind: AlgebraKind) -> Self {
        let z = real(T::zero());
        let half = real(T::lit(0.5));
        Self {
            kind,
            k0: CMatrix::from_rows(2, 2, vec![half, z, z, -half]),
            kp: CMatrix::from_rows(2, 2, vec![z, real(T::one()), z, z]),
            km: CMatrix::from_rows(2, 2, vec![z, z, real(kind.s::<T>()), z]),
        }
    }

    pub fn element(&self, c: CoeffVector<T>) -> CMatrix<T> {
        let a = &self.k0.scale(c.cartan) + &self.km.scale(c.lowering);
        &a + &self.kp.scale(c.raising)
    }

    /// Coefficients of the traceless part of `m`.
    pub fn decompose(&self, m: &CMatrix<T>) -> CoeffVector<T> {
        CoeffVector::new(m[(0, 0)] - m[(1, 1)], m[(1, 0)] / self.kind.s::<T>(), m[(0, 1)])
    }

    /// Matrix of the Gauss-ordered product `exp(λK₊) Λ^{K₀} exp(λ*K₋)`.
    pub fn gauss_matrix(&self, g: &GaussState<T>) -> CMatrix<T> {
        let s = self.kind.s::<T>();
        let root = g.cartan.sqrt();
        let lam = g.lambda();
        let phi2 = lam.norm_sqr();
        CMatrix::from_rows(
            2,
            2,
            vec![
                real((g.cartan + s * phi2) / root),
                lam / root,
                lam.conj() * (s / root),
                real(T::one() / root),
            ],
        )
    }

    /// `exp(element(c))`.
    pub fn exp(&self, c: CoeffVector<T>) -> CMatrix<T> {
        crate::numerics::exp2x2(&self.element(c))
    }
}

/// The pair `(f, g)` with `f = tanh x, g = coth 2x` for su(1,1) and
/// `f = -tan x, g = cot 2x` for su(2).
pub fn unified_trig<T: Real>(kind: AlgebraKind, x: T) -> Result<(T, T)> {
    Ok((unified_tangent(kind, x)?, unified_cotangent2(kind, x)?))
}

/// `tanh x` (su(1,1)) or `-tan x` (su(2)).
pub fn unified_tangent<T: Real>(kind: AlgebraKind, x: T) -> Result<T> {
    match kind {
        AlgebraKind::Su11 => Ok(x.tanh()),
        AlgebraKind::Su2 => {
            let c = x.cos();
            if c.abs() < T::lit(1e-12) {
                return Err(Error::Pole { x: x.to_f64_lossy() });
            }
            Ok(-x.sin() / c)
        }
    }
}

/// `coth 2x` (su(1,1)) or `cot 2x` (su(2)).
pub fn unified_cotangent2<T: Real>(kind: AlgebraKind, x: T) -> Result<T> {
    let two_x = x * T::lit(2.0);
    let den = match kind {
        AlgebraKind::Su11 => two_x.sinh(),
        AlgebraKind::Su2 => two_x.sin(),
    };
    if den.abs() < T::lit(1e-12) {
        return Err(Error::Pole { x: x.to_f64_lossy() });
    }
    Ok(match kind {
        AlgebraKind::Su11 => T::one() / two_x.tanh(),
        AlgebraKind::Su2 => two_x.cos() / den,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    fn cv(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> CoeffVector<f64> {
        CoeffVector::new(cplx(a.0, a.1), cplx(b.0, b.1), cplx(c.0, c.1))
    }

    #[test]
    fn structure_constants() {
        let k0 = CoeffVector::<f64>::k0();
        let km = CoeffVector::lowering_op();
        let kp = CoeffVector::raising_op();
        assert_eq!(commutator(k0, km, AlgebraKind::Su11), km.scale(cplx(-1.0, 0.0)));
        assert_eq!(commutator(k0, kp, AlgebraKind::Su2), kp);
        assert_eq!(commutator(kp, km, AlgebraKind::Su11), k0.scale(cplx(-2.0, 0.0)));
        assert_eq!(commutator(kp, km, AlgebraKind::Su2), k0.scale(cplx(2.0, 0.0)));
    }

    #[test]
    fn rep2_satisfies_algebra() {
        for kind in [AlgebraKind::Su11, AlgebraKind::Su2] {
            let r = Rep2::<f64>::new(kind);
            assert_eq!(r.k0.commutator(&r.kp), r.kp);
            assert_eq!(r.k0.commutator(&r.km), r.km.scale(cplx(-1.0, 0.0)));
            assert_eq!(r.kp.commutator(&r.km), r.k0.scale(cplx(2.0 * kind.sign() as f64, 0.0)));
        }
    }

    #[test]
    fn commutator_matches_rep2() {
        let a = cv((0.3, -0.2), (1.1, 0.4), (-0.7, 0.9));
        let b = cv((-1.3, 0.5), (0.2, -0.6), (0.8, 0.1));
        for kind in [AlgebraKind::Su11, AlgebraKind::Su2] {
            let r = Rep2::new(kind);
            let via_rep = r.decompose(&r.element(a).commutator(&r.element(b)));
            assert!((via_rep - commutator(a, b, kind)).norm() < 1e-14);
        }
    }

    #[test]
    fn transfer_identity_map() {
        let g = GaussState::new(0.0, 0.3, 1.0).unwrap();
        let m = adjoint_transfer(&g, AlgebraKind::Su11).unwrap();
        assert!(m.max_abs_diff(&AdjointTransfer::identity()) < 1e-15);
    }

    #[test]
    fn transfer_pure_cartan() {
        let e2 = 1f64.exp().powi(2);
        let g = GaussState::new(0.0, 0.0, e2).unwrap();
        let m = adjoint_transfer(&g, AlgebraKind::Su2).unwrap();
        let out = m.apply(cv((1.0, 0.0), (1.0, 0.0), (1.0, 0.0)));
        assert!((out.cartan - cplx(1.0, 0.0)).norm() < 1e-14);
        assert!((out.lowering - cplx(1.0 / e2, 0.0)).norm() < 1e-14);
        assert!((out.raising - cplx(e2, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn transfer_matches_rep2_conjugation() {
        let kind = AlgebraKind::Su11;
        let g = GaussState::new(0.5, 0.3, 2.0).unwrap();
        let r = Rep2::new(kind);
        let eta = r.gauss_matrix(&g);
        let eta_inv = eta.inverse().unwrap();
        let m = adjoint_transfer(&g, kind).unwrap();
        for i in 0..3 {
            let k = CoeffVector::basis(i);
            let conj = r.decompose(&eta.matmul(&r.element(k)).matmul(&eta_inv));
            assert!((conj - m.apply(k)).norm() < 1e-12, "generator {i}");
        }
    }

    #[test]
    fn transfer_rejects_bad_cartan() {
        let g = GaussState {
            amplitude: 1.0,
            phase: 0.0,
            cartan: 0.0,
            flipped: false,
        };
        assert!(adjoint_transfer(&g, AlgebraKind::Su2).is_err());
    }

    #[test]
    fn trig_values() {
        assert_eq!(unified_tangent(AlgebraKind::Su11, 0.0f64).unwrap(), 0.0);
        let q = std::f64::consts::FRAC_PI_4;
        let (f, g) = unified_trig(AlgebraKind::Su2, q).unwrap();
        assert!((f + 1.0).abs() < 1e-15);
        assert!(g.abs() < 1e-15);
        assert!((unified_tangent(AlgebraKind::Su11, 0.5f64).unwrap() - 0.462117157260010).abs() < 1e-14);
        assert!(unified_cotangent2(AlgebraKind::Su11, 0.0f64).is_err());
        assert!(unified_tangent(AlgebraKind::Su2, std::f64::consts::FRAC_PI_2).is_err());
        assert!(unified_cotangent2(AlgebraKind::Su2, std::f64::consts::FRAC_PI_2).is_err());
    }
}
