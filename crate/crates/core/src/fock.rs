//! Two-mode bosonic realizations.
//!
//! su(1,1): `K₀ = (n₁ + n₂ + 1)/2`, `K₊ = a₁†a₂†`, `K₋ = a₁a₂`.
//! su(2): `K₀ = (n₁ - n₂)/2`, `K₊ = a₁†a₂`, `K₋ = a₂†a₁`.
//!
//! Both algebras conserve a number (`n₁ - n₂` or `n₁ + n₂`), so the dynamics
//! can run in a single sector. A full product basis is also available for
//! checking the realization itself.

use std::collections::HashMap;

use crate::algebra::{adjoint_transfer, AlgebraKind, CoeffVector};
use crate::counterpart::counterpart;
use crate::dyson::{self, GaussState};
use crate::error::{Error, Result};
use crate::evolution::SqueezeState;
use crate::numerics::{self, mat_exp, special, CMatrix, OdeOptions};
use crate::profile::HamiltonianProfile;
use crate::scalar::{cplx, polar, real, Real, C};

/// Largest basis handled by the dense operator routines.
pub const MAX_DIM: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    /// su(1,1) sector `n₁ - n₂ = offset`, basis `|k + offset, k⟩`, `k = 0..=cutoff`.
    PairSector { offset: usize, cutoff: usize },
    /// su(2) sector `n₁ + n₂ = total`, basis `|k, total - k⟩`.
    Schwinger { total: usize },
    /// All `|n₁, n₂⟩` with `n₁, n₂ ≤ max`.
    Product { max: usize },
}

#[derive(Clone, Debug)]
pub struct FockWorkspace<T> {
    pub kind: AlgebraKind,
    pub layout: Layout,
    /// Occupations `(n₁, n₂)` of each basis state.
    pub labels: Vec<(usize, usize)>,
    pub k0: CMatrix<T>,
    pub kp: CMatrix<T>,
    pub km: CMatrix<T>,
    /// Diagonal of `k0`.
    pub k0_diag: Vec<T>,
    /// Basis states whose images under `K₊` and `K₋` stay in the basis.
    pub interior: Vec<usize>,
}

impl<T: Real> FockWorkspace<T> {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Largest occupation of each mode.
    pub fn mode_dims(&self) -> (usize, usize) {
        let d1 = self.labels.iter().map(|l| l.0).max().unwrap_or(0) + 1;
        let d2 = self.labels.iter().map(|l| l.1).max().unwrap_or(0) + 1;
        (d1, d2)
    }

    pub fn index_of(&self, label: (usize, usize)) -> Option<usize> {
        self.labels.iter().position(|l| *l == label)
    }

    /// Matrix of the algebra element with the given coefficients.
    pub fn element(&self, c: CoeffVector<T>) -> CMatrix<T> {
        let a = &self.k0.scale(c.cartan) + &self.km.scale(c.lowering);
        &a + &self.kp.scale(c.raising)
    }

    /// Basis vector for an occupation pair.
    pub fn basis_state(&self, label: (usize, usize)) -> Result<PureState<T>> {
        let i = self
            .index_of(label)
            .ok_or_else(|| Error::InvalidInput(format!("state {label:?} not in the basis")))?;
        let mut amps = vec![real(T::zero()); self.dim()];
        amps[i] = real(T::one());
        Ok(PureState {
            amplitudes: amps,
            labels: self.labels.clone(),
        })
    }
}

fn assemble<T: Real>(kind: AlgebraKind, layout: Layout, labels: Vec<(usize, usize)>) -> Result<FockWorkspace<T>> {
    let dim = labels.len();
    if dim > MAX_DIM {
        return Err(Error::Cutoff {
            needed: dim,
            limit: MAX_DIM,
        });
    }
    let index: HashMap<(usize, usize), usize> = labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
    let mut k0 = CMatrix::zeros(dim, dim);
    let mut kp = CMatrix::zeros(dim, dim);
    let mut km = CMatrix::zeros(dim, dim);
    let mut k0_diag = Vec::with_capacity(dim);
    let mut interior = Vec::new();
    let sq = |x: usize| T::lit(x as f64).sqrt();
    for (j, &(n1, n2)) in labels.iter().enumerate() {
        let (diag, up, down) = match kind {
            AlgebraKind::Su11 => {
                let diag = T::lit((n1 + n2 + 1) as f64 / 2.0);
                let up = Some(((n1 + 1, n2 + 1), sq(n1 + 1) * sq(n2 + 1)));
                let down = (n1 > 0 && n2 > 0).then(|| ((n1 - 1, n2 - 1), sq(n1) * sq(n2)));
                (diag, up, down)
            }
            AlgebraKind::Su2 => {
                let diag = T::lit((n1 as f64 - n2 as f64) / 2.0);
                let up = (n2 > 0).then(|| ((n1 + 1, n2 - 1), sq(n1 + 1) * sq(n2)));
                let down = (n1 > 0).then(|| ((n1 - 1, n2 + 1), sq(n1) * sq(n2 + 1)));
                (diag, up, down)
            }
        };
        k0[(j, j)] = real(diag);
        k0_diag.push(diag);
        let mut inside = true;
        if let Some((target, amp)) = up {
            match index.get(&target) {
                Some(&i) => kp[(i, j)] = real(amp),
                None => inside = false,
            }
        }
        if let Some((target, amp)) = down {
            match index.get(&target) {
                Some(&i) => km[(i, j)] = real(amp),
                None => inside = false,
            }
        }
        if inside {
            interior.push(j);
        }
    }
    Ok(FockWorkspace {
        kind,
        layout,
        labels,
        k0,
        kp,
        km,
        k0_diag,
        interior,
    })
}

/// The default sector: `n₁ = n₂` up to `size` quanta for su(1,1), or the
/// `n₁ + n₂ = size` sector for su(2).
pub fn build_workspace<T: Real>(kind: AlgebraKind, size: usize) -> Result<FockWorkspace<T>> {
    match kind {
        AlgebraKind::Su11 => pair_sector(size, 0),
        AlgebraKind::Su2 => {
            if size < 1 {
                return Err(Error::InvalidInput("su(2) sector needs n >= 1".into()));
            }
            schwinger_sector(size)
        }
    }
}

/// su(1,1) sector `n₁ - n₂ = offset` with `k = 0..=cutoff`.
pub fn pair_sector<T: Real>(cutoff: usize, offset: usize) -> Result<FockWorkspace<T>> {
    if cutoff < 1 {
        return Err(Error::InvalidInput("cutoff must be >= 1".into()));
    }
    let labels = (0..=cutoff).map(|k| (k + offset, k)).collect();
    assemble(AlgebraKind::Su11, Layout::PairSector { offset, cutoff }, labels)
}

/// su(2) sector with `total` quanta; exact, no truncation.
pub fn schwinger_sector<T: Real>(total: usize) -> Result<FockWorkspace<T>> {
    let labels = (0..=total).map(|k| (k, total - k)).collect();
    assemble(AlgebraKind::Su2, Layout::Schwinger { total }, labels)
}

/// Full two-mode basis with each occupation up to `max`.
pub fn product_workspace<T: Real>(kind: AlgebraKind, max: usize) -> Result<FockWorkspace<T>> {
    let mut labels = Vec::with_capacity((max + 1) * (max + 1));
    for n1 in 0..=max {
        for n2 in 0..=max {
            labels.push((n1, n2));
        }
    }
    assemble(kind, Layout::Product { max }, labels)
}

/// Smallest su(1,1) cutoff whose two-mode squeezed vacuum tail
/// `tanh^{2(N+1)} r` is below `tol`, and at least `floor`.
pub fn tail_cutoff<T: Real>(r: T, tol: T, floor: usize) -> usize {
    let t = r.abs().tanh();
    if t == T::zero() {
        return floor.max(1);
    }
    if t >= T::one() {
        return usize::MAX;
    }
    let n = (tol.ln() / (T::lit(2.0) * t.ln())).ceil().to_f64_lossy() - 1.0;
    if !n.is_finite() || n > 1e9 {
        return usize::MAX;
    }
    (n.max(0.0) as usize).max(floor).max(1)
}

/// Squeezed-vacuum tail mass beyond cutoff `n`.
pub fn tail_mass<T: Real>(r: T, n: usize) -> T {
    r.abs().tanh().powi(2 * (n as i32 + 1))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PureState<T> {
    pub amplitudes: Vec<C<T>>,
    pub labels: Vec<(usize, usize)>,
}

impl<T: Real> PureState<T> {
    pub fn norm(&self) -> T {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn inner(&self, other: &Self) -> C<T> {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(real(T::zero()), |acc, (a, b)| acc + a.conj() * *b)
    }

    pub fn apply(&self, m: &CMatrix<T>) -> Self {
        Self {
            amplitudes: m.mul_vec(&self.amplitudes),
            labels: self.labels.clone(),
        }
    }

    /// `⟨ψ|M|ψ⟩`.
    pub fn expectation(&self, m: &CMatrix<T>) -> C<T> {
        let mv = m.mul_vec(&self.amplitudes);
        self.amplitudes
            .iter()
            .zip(&mv)
            .fold(real(T::zero()), |acc, (a, b)| acc + a.conj() * *b)
    }
}

/// Reduced density matrix of mode 1, indexed by its occupations.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T> {
    pub entries: CMatrix<T>,
    /// Mode-1 occupation of each row.
    pub occupations: Vec<usize>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn trace(&self) -> T {
        self.entries.trace().re
    }

    /// `Tr ρ²`, using hermiticity.
    pub fn purity(&self) -> T {
        self.entries.as_slice().iter().map(|x| x.norm_sqr()).sum()
    }

    pub fn hermiticity_error(&self) -> T {
        (&self.entries - &self.entries.adjoint()).max_abs()
    }
}

/// Closed-form state reached from the su(1,1) vacuum `|0,0⟩` or the su(2)
/// state `|0,n⟩` by `S(ξ) R(Ω̃)`. For su(1,1), `n` is the cutoff of the
/// returned pair-sector amplitudes.
pub fn evolved_state_closed<T: Real>(
    kind: AlgebraKind,
    r: T,
    phase: T,
    omega_tilde: T,
    n: usize,
) -> Result<PureState<T>> {
    if !(r >= T::zero()) {
        return Err(Error::InvalidInput("r must be >= 0".into()));
    }
    match kind {
        AlgebraKind::Su11 => {
            let th = r.tanh();
            let global = polar(T::one() / r.cosh(), -omega_tilde);
            let step = polar(th, phase);
            let mut amps = Vec::with_capacity(n + 1);
            let mut cur = global;
            for _ in 0..=n {
                amps.push(cur);
                cur = cur * step;
            }
            Ok(PureState {
                amplitudes: amps,
                labels: (0..=n).map(|k| (k, k)).collect(),
            })
        }
        AlgebraKind::Su2 => {
            if n < 1 {
                return Err(Error::InvalidInput("su(2) state needs n >= 1".into()));
            }
            let (sr, cr) = (r.sin(), r.cos());
            let nf = T::lit(n as f64);
            let global = polar(T::one(), nf * omega_tilde);
            let mut amps = Vec::with_capacity(n + 1);
            for k in 0..=n {
                let kf = T::lit(k as f64);
                let ln_binom = special::ln_gamma(nf + T::one())
                    - special::ln_gamma(kf + T::one())
                    - special::ln_gamma(nf - kf + T::one());
                // √C(n,k) sin^k r cos^{n-k} r, computed without tan r.
                let mag = (T::lit(0.5) * ln_binom).exp() * sr.powi(k as i32) * cr.powi((n - k) as i32);
                amps.push(global * polar(mag, kf * phase));
            }
            Ok(PureState {
                amplitudes: amps,
                labels: (0..=n).map(|k| (k, n - k)).collect(),
            })
        }
    }
}

/// `ρ₁ = Tr₂ |ψ⟩⟨ψ|`.
pub fn partial_trace_mode2<T: Real>(psi: &PureState<T>) -> DensityMatrix<T> {
    let mut occ: Vec<usize> = psi.labels.iter().map(|l| l.0).collect();
    occ.sort_unstable();
    occ.dedup();
    let row: HashMap<usize, usize> = occ.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let mut by_mode2: HashMap<usize, Vec<(usize, C<T>)>> = HashMap::new();
    for (l, a) in psi.labels.iter().zip(&psi.amplitudes) {
        by_mode2.entry(l.1).or_default().push((row[&l.0], *a));
    }
    let mut rho = CMatrix::zeros(occ.len(), occ.len());
    for group in by_mode2.values() {
        for &(i, a) in group {
            for &(j, b) in group {
                rho[(i, j)] = rho[(i, j)] + a * b.conj();
            }
        }
    }
    DensityMatrix {
        entries: rho,
        occupations: occ,
    }
}

/// `1 - Tr ρ²`.
pub fn linear_entropy<T: Real>(rho: &DensityMatrix<T>) -> T {
    T::one() - rho.purity()
}

/// `1 - Γ(n + ½)/(√π n!)`, the su(2) entropy at `r = π/4`.
pub fn entropy_max<T: Real>(n: usize) -> T {
    let nf = T::lit(n as f64);
    let ln = special::ln_gamma(nf + T::lit(0.5)) - T::lit(0.5) * T::PI().ln() - special::ln_gamma(nf + T::one());
    T::one() - ln.exp()
}

/// Linear entropy of the evolved state in closed form:
/// `1 - sech 2r` (su(1,1)) or `1 - cosⁿ2r Pₙ((1 + cos²2r)/(2cos 2r))` (su(2)).
pub fn entropy_closed<T: Real>(kind: AlgebraKind, r: T, n: usize) -> Result<T> {
    if !(r >= T::zero()) {
        return Err(Error::InvalidInput("r must be >= 0".into()));
    }
    match kind {
        AlgebraKind::Su11 => Ok(T::one() - special::sech(T::lit(2.0) * r)),
        AlgebraKind::Su2 => {
            if n < 1 {
                return Err(Error::InvalidInput("su(2) entropy needs n >= 1".into()));
            }
            let c = (T::lit(2.0) * r).cos();
            if c.abs() < T::lit(1e-6) {
                return Ok(entropy_max(n));
            }
            Ok(T::one() - special::scaled_legendre(n, c))
        }
    }
}

/// `exp(a K₊) d^{K₀} exp(b K₋)`. The triangular factors are finite sums, so on
/// a truncated sector the result is the exact compression of the operator.
pub fn gauss_operator<T: Real>(ws: &FockWorkspace<T>, raising: C<T>, cartan: T, lowering: C<T>) -> Result<CMatrix<T>> {
    if !(cartan > T::zero()) {
        return Err(Error::NonPositiveCartan {
            cartan: cartan.to_f64_lossy(),
        });
    }
    let up = nilpotent_exp(&ws.kp.scale(raising));
    let down = nilpotent_exp(&ws.km.scale(lowering));
    let ln_d = cartan.ln();
    let diag: Vec<C<T>> = ws.k0_diag.iter().map(|k| real((*k * ln_d).exp())).collect();
    // Scale rows of `down` by the diagonal instead of forming a matrix product.
    let mut mid = down;
    for (i, d) in diag.iter().enumerate() {
        for j in 0..mid.cols() {
            mid[(i, j)] = mid[(i, j)] * *d;
        }
    }
    let out = up.matmul(&mid);
    if out.as_slice().iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
        return Err(Error::Overflow(
            "Gauss-ordered operator at this cutoff; use a smaller cutoff or milder parameters".into(),
        ));
    }
    Ok(out)
}

fn nilpotent_exp<T: Real>(x: &CMatrix<T>) -> CMatrix<T> {
    let n = x.rows();
    let mut out = CMatrix::identity(n);
    let mut term = CMatrix::identity(n);
    for j in 1..=n {
        term = term.matmul(x).scale_real(T::one() / T::lit(j as f64));
        if term.max_abs() == T::zero() {
            break;
        }
        out = &out + &term;
    }
    out
}

/// Dyson map `η = exp(λK₊) Λ^{K₀} exp(λ*K₋)` on the workspace.
pub fn eta_matrix<T: Real>(g: &GaussState<T>, ws: &FockWorkspace<T>) -> Result<CMatrix<T>> {
    let lam = g.lambda();
    gauss_operator(ws, lam, g.cartan, lam.conj())
}

/// `η⁻¹ = exp(-λ*K₋) Λ^{-K₀} exp(-λK₊)`. Exact in a finite sector; on a
/// truncated su(1,1) sector it is accurate only where the raising factor's
/// image stays below the cutoff.
pub fn eta_inverse_matrix<T: Real>(g: &GaussState<T>, ws: &FockWorkspace<T>) -> Result<CMatrix<T>> {
    let lam = g.lambda();
    let down = nilpotent_exp(&ws.km.scale(-lam.conj()));
    let mut mid = nilpotent_exp(&ws.kp.scale(-lam));
    let ln_d = g.cartan.ln();
    for (i, k) in ws.k0_diag.iter().enumerate() {
        let d = real((-*k * ln_d).exp());
        for j in 0..mid.cols() {
            mid[(i, j)] = mid[(i, j)] * d;
        }
    }
    let out = down.matmul(&mid);
    if out.as_slice().iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
        return Err(Error::Overflow("inverse Gauss-ordered operator at this cutoff".into()));
    }
    Ok(out)
}

/// Metric `Θ = η†η = η²`, assembled in Gauss order from the square of the
/// 2×2 representation so that truncation does not enter.
pub fn metric_matrix<T: Real>(g: &GaussState<T>, ws: &FockWorkspace<T>) -> Result<CMatrix<T>> {
    let (lam, cartan) = metric_params(g, ws.kind)?;
    gauss_operator(ws, lam, cartan, lam.conj())
}

/// Gauss parameters `(λ', Λ')` of the metric.
pub fn metric_params<T: Real>(g: &GaussState<T>, kind: AlgebraKind) -> Result<(C<T>, T)> {
    let s = kind.s::<T>();
    let phi = g.signed_amplitude();
    let d = match kind {
        AlgebraKind::Su2 => T::one() + phi * phi,
        AlgebraKind::Su11 => (T::one() - phi) * (T::one() + phi),
    };
    if d.abs() < T::lit(1e-12) {
        return Err(Error::Domain(
            "metric has no Gauss factorization at 1 + sPhi^2 = 0".into(),
        ));
    }
    let lam = g.lambda() * ((g.cartan + s * phi * phi + T::one()) / d);
    let cartan = (g.cartan / d) * (g.cartan / d);
    Ok((lam, cartan))
}

/// Largest entry of `m` on the interior block.
pub fn interior_max<T: Real>(m: &CMatrix<T>, ws: &FockWorkspace<T>) -> T {
    let mut worst = T::zero();
    for &i in &ws.interior {
        for &j in &ws.interior {
            worst = worst.max(m[(i, j)].norm());
        }
    }
    worst
}

#[derive(Clone, Debug)]
pub struct EvolutionOps<T> {
    pub squeeze_t: CMatrix<T>,
    pub rotation_t: CMatrix<T>,
    pub propagator: CMatrix<T>,
}

/// `S(ξ) = exp(ξK₊ - ξ*K₋)` from the truncated generator, which keeps it
/// exactly unitary on the workspace.
pub fn squeeze_operator<T: Real>(sq: &SqueezeState<T>, ws: &FockWorkspace<T>) -> CMatrix<T> {
    let xi = sq.xi();
    let gen = &ws.kp.scale(xi) - &ws.km.scale(xi.conj());
    mat_exp(&gen)
}

/// `R = exp(-2iΩ̃ K₀)`.
pub fn rotation_operator<T: Real>(omega_tilde: T, ws: &FockWorkspace<T>) -> CMatrix<T> {
    let diag: Vec<C<T>> = ws
        .k0_diag
        .iter()
        .map(|k| polar(T::one(), -T::lit(2.0) * omega_tilde * *k))
        .collect();
    CMatrix::from_diag(&diag)
}

/// `S(t)`, `R(t)` and `u(t) = S(t) R(t) S†(0)`.
pub fn evolution_ops<T: Real>(
    sq_t: &SqueezeState<T>,
    sq_0: &SqueezeState<T>,
    ws: &FockWorkspace<T>,
) -> EvolutionOps<T> {
    let s_t = squeeze_operator(sq_t, ws);
    let s_0 = squeeze_operator(sq_0, ws);
    let r_t = rotation_operator(sq_t.omega_tilde - sq_0.omega_tilde, ws);
    let u = s_t.matmul(&r_t).matmul(&s_0.adjoint());
    EvolutionOps {
        squeeze_t: s_t,
        rotation_t: r_t,
        propagator: u,
    }
}

/// `‖u†u - I‖` (largest entry) on the interior block.
pub fn unitarity_defect<T: Real>(u: &CMatrix<T>, ws: &FockWorkspace<T>) -> T {
    let d = &u.adjoint().matmul(u) - &CMatrix::identity(u.rows());
    interior_max(&d, ws)
}

fn hamiltonian_matrix<T: Real>(h: &HamiltonianProfile<T>, t: T, ws: &FockWorkspace<T>) -> CMatrix<T> {
    let two = T::lit(2.0);
    ws.element(CoeffVector::new(h.omega(t) * two, h.alpha(t) * two, h.beta(t) * two))
}

// Fourth-order central difference of a matrix-valued function.
fn matrix_derivative<T: Real>(f: impl Fn(T) -> Result<CMatrix<T>>, t: T, dt: T) -> Result<CMatrix<T>> {
    let p1 = f(t + dt)?;
    let m1 = f(t - dt)?;
    let p2 = f(t + T::lit(2.0) * dt)?;
    let m2 = f(t - T::lit(2.0) * dt)?;
    let num = &(&(&p1 - &m1).scale_real(T::lit(8.0)) - &p2) + &m2;
    Ok(num.scale_real(T::one() / (T::lit(12.0) * dt)))
}

/// Relative interior residual of `H†Θ - ΘH - i∂ₜΘ`, with `∂ₜΘ` from a
/// fourth-order central difference of step `dt`.
pub fn quasi_hermiticity_residual<T: Real>(
    h: &HamiltonianProfile<T>,
    map_at: impl Fn(T) -> Result<GaussState<T>>,
    t: T,
    dt: T,
    ws: &FockWorkspace<T>,
) -> Result<T> {
    let theta = metric_matrix(&map_at(t)?, ws)?;
    let dtheta = matrix_derivative(|tt| metric_matrix(&map_at(tt)?, ws), t, dt)?;
    let hm = hamiltonian_matrix(h, t, ws);
    let lhs = &hm.adjoint().matmul(&theta) - &theta.matmul(&hm);
    let res = &lhs - &dtheta.scale(cplx(T::zero(), T::one()));
    let scale = interior_max(&theta, ws).max(interior_max(&lhs, ws));
    Ok(interior_max(&res, ws) / scale)
}

/// Relative interior residual of `hη - ηH - i∂ₜη`, i.e. of
/// `η⁻¹hη = H + iη⁻¹∂ₜη`, with `h` from the counterpart coefficients.
pub fn energy_observable_residual<T: Real>(
    h: &HamiltonianProfile<T>,
    map_at: impl Fn(T) -> Result<GaussState<T>>,
    t: T,
    dt: T,
    ws: &FockWorkspace<T>,
) -> Result<T> {
    let g = map_at(t)?;
    let eta = eta_matrix(&g, ws)?;
    let deta = matrix_derivative(|tt| eta_matrix(&map_at(tt)?, ws), t, dt)?;
    let c = counterpart(h, &g, t, ws.kind)?;
    let two = T::lit(2.0);
    let hm = ws.element(CoeffVector::new(real(two * c.w), c.u * two, c.u.conj() * two));
    let big_h = hamiltonian_matrix(h, t, ws);
    let a = hm.matmul(&eta);
    let b = eta.matmul(&big_h);
    let res = &(&a - &b) - &deta.scale(cplx(T::zero(), T::one()));
    let scale = interior_max(&a, ws).max(interior_max(&b, ws));
    Ok(interior_max(&res, ws) / scale)
}

/// Compares `⟨Ψ|ΘO|Ψ⟩` with `⟨ψ|ηOη⁻¹|ψ⟩` for `|Ψ⟩ = η⁻¹|ψ⟩`, where the
/// conjugated observable comes from the algebraic adjoint action. Returns the
/// discrepancy relative to `max(1, |⟨ψ|ηOη⁻¹|ψ⟩|)`.
pub fn expectation_consistency<T: Real>(
    o: CoeffVector<T>,
    g: &GaussState<T>,
    psi: &PureState<T>,
    ws: &FockWorkspace<T>,
) -> Result<T> {
    // Apply the Gauss factors one at a time: Ψ = e^{-λ*K₋} Λ^{-K₀} e^{-λK₊} ψ,
    // and ⟨Ψ|ΘOΨ⟩ = ⟨BΨ| D |B OΨ⟩ with Θ = B† D B, B = e^{λ'*K₋}.
    let lam = g.lambda();
    let up_inv = nilpotent_exp(&ws.kp.scale(-lam));
    let down_inv = nilpotent_exp(&ws.km.scale(-lam.conj()));
    let mut v = up_inv.mul_vec(&psi.amplitudes);
    let ln_l = g.cartan.ln();
    for (x, k) in v.iter_mut().zip(&ws.k0_diag) {
        *x = *x * (-*k * ln_l).exp();
    }
    let big_psi = down_inv.mul_vec(&v);
    let (lam_m, cartan_m) = metric_params(g, ws.kind)?;
    let b = nilpotent_exp(&ws.km.scale(lam_m.conj()));
    let left = b.mul_vec(&big_psi);
    let right = b.mul_vec(&ws.element(o).mul_vec(&big_psi));
    let ln_m = cartan_m.ln();
    let lhs = left
        .iter()
        .zip(&right)
        .zip(&ws.k0_diag)
        .fold(real(T::zero()), |acc, ((l, r), k)| {
            acc + l.conj() * *r * (*k * ln_m).exp()
        });
    let transfer = adjoint_transfer(g, ws.kind)?;
    let rhs = psi.expectation(&ws.element(transfer.apply(o)));
    Ok((lhs - rhs).norm() / rhs.norm().max(T::one()))
}

/// Grid times reached, states at those times and the map trajectory.
pub type Propagation<T> = (Vec<T>, Vec<PureState<T>>, Vec<GaussState<T>>);

/// Direct Schrödinger propagation `i∂ₜψ = h(t)ψ` with the Hermitian
/// counterpart built along the jointly integrated map. Returns the state at
/// each grid time reached and the map trajectory.
pub fn propagate_counterpart<T: Real>(
    g0: &GaussState<T>,
    psi0: &PureState<T>,
    h: &HamiltonianProfile<T>,
    grid: &[T],
    opts: &OdeOptions<T>,
    ws: &FockWorkspace<T>,
) -> Result<Propagation<T>> {
    let kind = ws.kind;
    let n = ws.dim();
    let mut y0 = vec![g0.signed_amplitude(), g0.phase, g0.cartan.ln()];
    y0.extend(psi0.amplitudes.iter().map(|a| a.re));
    y0.extend(psi0.amplitudes.iter().map(|a| a.im));
    let two = T::lit(2.0);
    let sol = numerics::integrate_plain(
        |t, y: &[T], dy: &mut [T]| {
            let g = dyson::state_from_vec(&y[..3])?;
            let r = dyson::rates_log(&g, h, t, kind)?;
            dy[0] = r.amplitude;
            dy[1] = r.phase;
            dy[2] = r.cartan;
            let c = counterpart(h, &g, t, kind)?;
            let hm = ws.element(CoeffVector::new(real(two * c.w), c.u * two, c.u.conj() * two));
            let psi: Vec<C<T>> = (0..n).map(|i| cplx(y[3 + i], y[3 + n + i])).collect();
            let hpsi = hm.mul_vec(&psi);
            for i in 0..n {
                // ψ̇ = -i hψ
                dy[3 + i] = hpsi[i].im;
                dy[3 + n + i] = -hpsi[i].re;
            }
            Ok(())
        },
        &y0,
        grid,
        opts,
    )?;
    if let Some(halt) = sol.halt {
        return Err(halt.error);
    }
    let mut states = Vec::with_capacity(sol.states.len());
    let mut maps = Vec::with_capacity(sol.states.len());
    for y in &sol.states {
        maps.push(dyson::state_from_vec(&y[..3])?);
        states.push(PureState {
            amplitudes: (0..n).map(|i| cplx(y[3 + i], y[3 + n + i])).collect(),
            labels: ws.labels.clone(),
        });
    }
    Ok((sol.times, states, maps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn su11_vacuum_weight() {
        let ws = build_workspace::<f64>(AlgebraKind::Su11, 2).unwrap();
        assert_eq!(ws.k0[(0, 0)], cplx(0.5, 0.0));
        assert_eq!(ws.dim(), 3);
    }

    #[test]
    fn schwinger_action() {
        let ws = build_workspace::<f64>(AlgebraKind::Su2, 1).unwrap();
        let i10 = ws.index_of((1, 0)).unwrap();
        let i01 = ws.index_of((0, 1)).unwrap();
        assert_eq!(ws.k0[(i10, i10)], cplx(0.5, 0.0));
        assert_eq!(ws.kp[(i10, i01)], cplx(1.0, 0.0));
        assert_eq!(ws.km[(i01, i10)], cplx(1.0, 0.0));
    }

    #[test]
    fn realization_commutators_on_interior() {
        for kind in [AlgebraKind::Su11, AlgebraKind::Su2] {
            let ws = product_workspace::<f64>(kind, 5).unwrap();
            let s = kind.sign() as f64;
            let c = &ws.kp.commutator(&ws.km) - &ws.k0.scale_real(2.0 * s);
            assert!(interior_max(&c, &ws) < 1e-12, "{kind}");
            let c2 = &ws.k0.commutator(&ws.kp) - &ws.kp;
            assert!(interior_max(&c2, &ws) < 1e-12);
            assert_eq!(ws.km, ws.kp.adjoint());
        }
    }

    #[test]
    fn eta_identity() {
        let ws = build_workspace::<f64>(AlgebraKind::Su11, 10).unwrap();
        let g = GaussState::new(0.0, 0.0, 1.0).unwrap();
        let eta = eta_matrix(&g, &ws).unwrap();
        assert!((&eta - &CMatrix::identity(ws.dim())).max_abs() < 1e-15);
    }

    #[test]
    fn metric_is_eta_squared_in_finite_sector() {
        let ws = schwinger_sector::<f64>(6).unwrap();
        let g = GaussState::new(1.7, 0.4, 0.3).unwrap();
        let eta = eta_matrix(&g, &ws).unwrap();
        let theta = metric_matrix(&g, &ws).unwrap();
        let sq = eta.matmul(&eta);
        assert!((&theta - &sq).max_abs() / sq.max_abs() < 1e-13);
        assert!((&eta - &eta.adjoint()).max_abs() / eta.max_abs() < 1e-14);
    }

    #[test]
    fn eta_is_exponential_in_finite_sector() {
        let kind = AlgebraKind::Su2;
        let ws = schwinger_sector::<f64>(4).unwrap();
        let p = dyson::ExpParams::new(0.9, 0.35, 0.6);
        let g = dyson::gauss_decompose(&p, kind).unwrap();
        let direct = mat_exp(&ws.element(p.exponent()));
        let eta = eta_matrix(&g, &ws).unwrap();
        assert!((&direct - &eta).max_abs() / direct.max_abs() < 1e-12);
    }

    #[test]
    fn closed_state_examples() {
        let v = evolved_state_closed(AlgebraKind::Su11, 0.0, 0.3, 0.0, 5).unwrap();
        assert!((v.amplitudes[0] - cplx(1.0, 0.0)).norm() < 1e-15);
        let b = evolved_state_closed(AlgebraKind::Su2, std::f64::consts::FRAC_PI_4, 0.0, 0.0, 1).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((b.amplitudes[0] - cplx(h, 0.0)).norm() < 1e-15);
        assert!((b.amplitudes[1] - cplx(h, 0.0)).norm() < 1e-15);
        let rho = partial_trace_mode2(&b);
        assert!((linear_entropy(&rho) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn partial_trace_of_product_state() {
        let ws = product_workspace::<f64>(AlgebraKind::Su11, 2).unwrap();
        let psi = ws.basis_state((0, 0)).unwrap();
        let rho = partial_trace_mode2(&psi);
        assert!((rho.purity() - 1.0).abs() < 1e-15);
        assert_eq!(linear_entropy(&rho), 0.0);
    }

    #[test]
    fn maximally_mixed_qutrit() {
        let third = (1.0f64 / 3.0).sqrt();
        let psi = PureState {
            amplitudes: vec![cplx(third, 0.0); 3],
            labels: vec![(0, 0), (1, 1), (2, 2)],
        };
        assert!((linear_entropy(&partial_trace_mode2(&psi)) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn closed_entropy_values() {
        assert_eq!(entropy_closed(AlgebraKind::Su11, 0.0f64, 0).unwrap(), 0.0);
        let q = std::f64::consts::FRAC_PI_4;
        assert!((entropy_closed(AlgebraKind::Su2, q, 1).unwrap() - 0.5).abs() < 1e-15);
        assert!((entropy_closed(AlgebraKind::Su2, q, 10).unwrap() - (1.0 - 184756.0 / 1048576.0)).abs() < 1e-12);
        assert!((entropy_max::<f64>(100) - 0.943_651_5).abs() < 1e-7);
    }

    #[test]
    fn tail_rule() {
        let n = tail_cutoff(2.0f64, 1e-12, 80);
        assert!(tail_mass(2.0f64, n) < 1e-12);
        assert!(tail_mass(2.0f64, n - 1) >= 1e-12);
        assert_eq!(tail_cutoff(0.1f64, 1e-12, 80), 80);
    }

    #[test]
    fn rotation_and_identity_propagator() {
        let ws = build_workspace::<f64>(AlgebraKind::Su11, 20).unwrap();
        let z = SqueezeState::new(0.0, 0.0, 0.0);
        let ops = evolution_ops(&z, &z, &ws);
        assert!((&ops.propagator - &CMatrix::identity(ws.dim())).max_abs() < 1e-15);
    }

    #[test]
    fn pair_creation_support() {
        let ws = product_workspace::<f64>(AlgebraKind::Su11, 12).unwrap();
        let sq = SqueezeState::new(0.4, 0.2, 0.0);
        let ops = evolution_ops(&sq, &SqueezeState::new(0.0, 0.0, 0.0), &ws);
        let out = ws.basis_state((0, 0)).unwrap().apply(&ops.propagator);
        for (l, a) in out.labels.iter().zip(&out.amplitudes) {
            if l.0 != l.1 {
                assert!(a.norm() < 1e-14);
            }
        }
    }
}
