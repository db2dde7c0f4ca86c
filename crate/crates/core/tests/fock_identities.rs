use num_complex::Complex;
use pseudoherm::algebra::{adjoint_transfer, AlgebraKind, CoeffVector};
use pseudoherm::dyson::{integrate_dyson, k0_closed_form, GaussState};
use pseudoherm::evolution::{integrate_coupled, SqueezeState};
use pseudoherm::fock::*;
use pseudoherm::numerics::{linspace, OdeOptions};
use pseudoherm::profile::{HamiltonianProfile, Profile};

const SU11: AlgebraKind = AlgebraKind::Su11;
const SU2: AlgebraKind = AlgebraKind::Su2;

fn preset(kind: AlgebraKind) -> GaussState<f64> {
    match kind {
        SU11 => GaussState::from_signed(-100.0, 0.0, 0.01).unwrap(),
        SU2 => GaussState::new(100.0, 0.0, 0.01).unwrap(),
    }
}

fn general_profile() -> HamiltonianProfile<f64> {
    HamiltonianProfile::k0(Profile::constant(1.0), Profile::linear(0.05, 0.1))
        .with_alpha(Profile::constant(0.15), Profile::constant(0.3))
        .with_beta(Profile::constant(0.1), Profile::constant(-0.2))
}

#[test]
fn quasi_hermiticity_on_k0_presets() {
    let h = HamiltonianProfile::linear_ramp(0.0, 0.5);
    for (kind, ws) in [
        (SU2, schwinger_sector(10).unwrap()),
        (SU11, pair_sector(40, 0).unwrap()),
        (SU11, pair_sector(30, 3).unwrap()),
    ] {
        let g0 = preset(kind);
        for t in [1.0, 2.5, 4.0] {
            let map_at = |tt: f64| k0_closed_form(&g0, &h, tt, kind);
            let q = quasi_hermiticity_residual(&h, map_at, t, 2e-4, &ws).unwrap();
            assert!(q < 1e-6, "{kind} t={t}: {q}");
            let e = energy_observable_residual(&h, map_at, t, 2e-4, &ws).unwrap();
            assert!(e < 1e-6, "{kind} t={t}: {e}");
        }
    }
}

#[test]
fn quasi_hermiticity_real_frequency() {
    let h = HamiltonianProfile::k0(Profile::constant(0.8), Profile::zero());
    let ws = pair_sector(20, 0).unwrap();
    let fixed = GaussState::new(0.0, 0.0, 2.5).unwrap();
    let q = quasi_hermiticity_residual(&h, |_| Ok(fixed), 1.0, 1e-4, &ws).unwrap();
    assert!(q < 1e-10, "{q}");
    // Φ ≠ 0 rotates at 2ω.
    let g0 = GaussState::new(0.4, 0.3, 2.5).unwrap();
    let q = quasi_hermiticity_residual(&h, |t| k0_closed_form(&g0, &h, t, SU11), 1.0, 1e-4, &ws).unwrap();
    assert!(q < 1e-10, "{q}");
}

#[test]
fn quasi_hermiticity_detects_perturbed_map() {
    let h = general_profile();
    let opts = OdeOptions::default().with_tolerances(1e-12, 1e-14);
    for (kind, ws) in [(SU2, schwinger_sector(4).unwrap()), (SU11, pair_sector(30, 0).unwrap())] {
        let g0 = GaussState::new(0.3, 0.2, 2.5).unwrap();
        let good = |tt: f64| {
            let tr = integrate_dyson(&g0, &h, &[0.0, tt], &opts, kind)?;
            Ok(*tr.states.last().unwrap())
        };
        let bad = |tt: f64| {
            let g = good(tt)?;
            GaussState::from_signed(g.signed_amplitude(), g.phase, g.cartan * 1.01)
        };
        let q = quasi_hermiticity_residual(&h, good, 0.5, 1e-3, &ws).unwrap();
        assert!(q < 1e-6, "{kind}: {q}");
        let q = quasi_hermiticity_residual(&h, bad, 0.5, 1e-3, &ws).unwrap();
        assert!(q > 1e-3, "{kind}: {q}");
    }
}

#[test]
fn quasi_hermiticity_on_integrated_general_map() {
    let h = general_profile();
    for (kind, ws) in [(SU2, schwinger_sector(6).unwrap()), (SU11, pair_sector(30, 0).unwrap())] {
        let g0 = match kind {
            SU11 => GaussState::new(0.3, 0.2, 2.5).unwrap(),
            SU2 => GaussState::new(0.5, 0.2, 1.5).unwrap(),
        };
        let grid = linspace(0.0, 1.0, 201);
        let opts = OdeOptions::default().with_tolerances(1e-12, 1e-14);
        let traj = integrate_dyson(&g0, &h, &grid, &opts, kind).unwrap();
        assert!(traj.breakdown.is_none());
        // Interpolate through a fine grid by re-integrating to each stencil point.
        let map_at = |tt: f64| {
            let tr = integrate_dyson(&g0, &h, &[0.0, tt], &opts, kind)?;
            Ok(*tr.states.last().unwrap())
        };
        let q = quasi_hermiticity_residual(&h, map_at, 0.5, 1e-3, &ws).unwrap();
        assert!(q < 1e-6, "{kind}: {q}");
        let e = energy_observable_residual(&h, map_at, 0.5, 1e-3, &ws).unwrap();
        assert!(e < 1e-6, "{kind}: {e}");
    }
}

#[test]
fn eta_conjugation_matches_adjoint_transfer() {
    for (kind, ws) in [
        (SU2, schwinger_sector(5).unwrap()),
        (SU11, pair_sector(25, 0).unwrap()),
        (SU11, product_workspace(SU11, 8).unwrap()),
    ] {
        let g = match kind {
            SU11 => GaussState::new(0.6, 0.4, 1.8).unwrap(),
            SU2 => GaussState::new(1.3, -0.7, 0.4).unwrap(),
        };
        let eta = eta_matrix(&g, &ws).unwrap();
        let m = adjoint_transfer(&g, kind).unwrap();
        for i in 0..3 {
            let k = CoeffVector::basis(i);
            let lhs = eta.matmul(&ws.element(k));
            let rhs = ws.element(m.apply(k)).matmul(&eta);
            let err = interior_max(&(&lhs - &rhs), &ws) / interior_max(&lhs, &ws);
            assert!(err < 1e-12, "{kind} K{i}: {err}");
        }
        let herm = interior_max(&(&eta - &eta.adjoint()), &ws) / interior_max(&eta, &ws);
        assert!(herm < 1e-14);
    }
}

#[test]
fn expectation_values_agree() {
    let id = GaussState::new(0.0, 0.0, 1.0).unwrap();
    let ws = pair_sector(20, 0).unwrap();
    let psi = evolved_state_closed(SU11, 0.3, 0.2, 0.0, 20).unwrap();
    let d = expectation_consistency(CoeffVector::k0(), &id, &psi, &ws).unwrap();
    assert!(d < 1e-14);

    let h = HamiltonianProfile::linear_ramp(0.0, 0.5);
    let obs = [
        CoeffVector::k0(),
        CoeffVector::new(Complex::new(0.0, 0.0), Complex::new(1.0, 0.0), Complex::new(1.0, 0.0)),
    ];
    // The preset map has condition number ~e^{4εn}, so only n = 1 is usable.
    let ws = schwinger_sector(1).unwrap();
    let g0 = preset(SU2);
    for t in [0.0, 2.0, 4.0] {
        let g = k0_closed_form(&g0, &h, t, SU2).unwrap();
        let psi = evolved_state_closed(SU2, 0.3, 0.1, 0.2, 1).unwrap();
        let d = expectation_consistency(obs[0], &g, &psi, &ws).unwrap();
        // The preset maps have condition numbers up to ~1e20.
        assert!(d < 1e-7, "K0 t={t}: {d}");
        let d = expectation_consistency(obs[1], &g, &psi, &ws).unwrap();
        assert!(d < 1e-7, "K+ + K- t={t}: {d}");
    }
    let ws = schwinger_sector(6).unwrap();
    let psi = evolved_state_closed(SU2, 0.5, 0.1, 0.2, 6).unwrap();
    for g in [
        GaussState::new(0.8, 0.3, 0.7).unwrap(),
        GaussState::new(2.0, -1.0, 1.3).unwrap(),
    ] {
        for o in obs {
            let d = expectation_consistency(o, &g, &psi, &ws).unwrap();
            assert!(d < 1e-9, "su2: {d}");
        }
    }
    let ws = pair_sector(40, 0).unwrap();
    let psi = evolved_state_closed(SU11, 0.2, 0.1, 0.0, 40).unwrap();
    for g in [
        GaussState::new(0.3, 0.5, 2.0).unwrap(),
        GaussState::new(0.2, -1.0, 1.6).unwrap(),
    ] {
        for o in obs {
            let d = expectation_consistency(o, &g, &psi, &ws).unwrap();
            assert!(d < 1e-7, "su11: {d}");
        }
    }
}

#[test]
fn propagator_reproduces_closed_state() {
    for r in [0.3, 1.0, 2.0] {
        let n = tail_cutoff(r, 1e-12, 60);
        let ws = pair_sector(n, 0).unwrap();
        let sq = SqueezeState::new(r, 0.7, 0.4);
        let ops = evolution_ops(&sq, &SqueezeState::new(0.0, 0.0, 0.0), &ws);
        assert!(unitarity_defect(&ops.propagator, &ws) < 1e-10);
        let out = ws.basis_state((0, 0)).unwrap().apply(&ops.propagator);
        let closed = evolved_state_closed(SU11, r, 0.7, 0.4, n).unwrap();
        let ov = closed.inner(&out);
        assert!((ov - Complex::new(1.0, 0.0)).norm() < 1e-8, "r={r}: {ov}");
    }
    let ws = schwinger_sector(12).unwrap();
    let sq = SqueezeState::new(0.6, -0.3, 0.9);
    let ops = evolution_ops(&sq, &SqueezeState::new(0.0, 0.0, 0.0), &ws);
    assert!(unitarity_defect(&ops.propagator, &ws) < 1e-12);
    let out = ws.basis_state((0, 12)).unwrap().apply(&ops.propagator);
    let closed = evolved_state_closed(SU2, 0.6, -0.3, 0.9, 12).unwrap();
    assert!((closed.inner(&out) - Complex::new(1.0, 0.0)).norm() < 1e-12);
}

#[test]
fn entropy_oracle_matches_closed_form() {
    for r in [0.0f64, 0.25, 0.658_48, 1.0, 1.5, 2.0] {
        let n = tail_cutoff(r, 1e-12, 80);
        let psi = evolved_state_closed(SU11, r, 0.3, 0.1, n).unwrap();
        let rho = partial_trace_mode2(&psi);
        assert!((rho.trace() - 1.0).abs() < 1e-10);
        let s = linear_entropy(&rho);
        assert!((s - entropy_closed(SU11, r, 0).unwrap()).abs() < 1e-8, "r={r}");
    }
    for n in [1usize, 2, 10, 100] {
        for r in [0.0, 0.2, 0.6, std::f64::consts::FRAC_PI_4, 1.2, 1.5] {
            let psi = evolved_state_closed(SU2, r, 0.4, 0.3, n).unwrap();
            assert!((psi.norm() - 1.0).abs() < 1e-12);
            let s = linear_entropy(&partial_trace_mode2(&psi));
            let c = entropy_closed(SU2, r, n).unwrap();
            assert!((s - c).abs() < 1e-8, "n={n} r={r}: {s} vs {c}");
        }
    }
}

#[test]
fn schrodinger_propagation_matches_squeeze_dynamics() {
    // Coupled map and squeeze integration vs direct propagation under h(t).
    let h = general_profile();
    for (kind, ws, start) in [
        (SU2, schwinger_sector(4).unwrap(), (0usize, 4usize)),
        (SU11, pair_sector(40, 0).unwrap(), (0, 0)),
    ] {
        let g0 = match kind {
            SU11 => GaussState::new(0.3, 0.2, 2.5).unwrap(),
            SU2 => GaussState::new(0.5, 0.2, 1.5).unwrap(),
        };
        let grid = linspace(0.0, 1.0, 11);
        let opts = OdeOptions::default().with_tolerances(1e-11, 1e-13);
        let sq0 = SqueezeState::new(0.0, 0.0, 0.0);
        let coupled = integrate_coupled(&g0, &sq0, &h, &grid, &opts, kind).unwrap();
        assert!(coupled.breakdown.is_none());
        let psi0 = ws.basis_state(start).unwrap();
        let (_, states, _) = propagate_counterpart(&g0, &psi0, &h, &grid, &opts, &ws).unwrap();
        for (sq, psi) in coupled.squeeze.iter().zip(&states) {
            let ops = evolution_ops(sq, &sq0, &ws);
            let want = psi0.apply(&ops.propagator);
            let ov = want.inner(psi);
            assert!((ov - Complex::new(1.0, 0.0)).norm() < 1e-7, "{kind}: {ov}");
        }
    }
}
