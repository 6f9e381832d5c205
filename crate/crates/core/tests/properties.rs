use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use proptest::prelude::*;

use phasewig_core::analytic::{self, PhaseVector};
use phasewig_core::evolve::{propagate, HamiltonianSpec};
use phasewig_core::fourier::{hbar_fourier, inverse_hbar_fourier};
use phasewig_core::operators::{grossmann_royer, heisenberg_weyl};
use phasewig_core::states::gaussian_coherent;
use phasewig_core::weakval::{expectation, rho, weak_value_quadrature};
use phasewig_core::xwigner::{cross_wigner, marginal_over_p, marginal_over_x, wigner};
use phasewig_core::{inner_product, FieldLabel, GridSpec, Observable, PhaseSpacePoint, WaveFunction};

fn grid() -> GridSpec {
    GridSpec::new(256, 10.0, 1.0).unwrap()
}

fn point() -> impl Strategy<Value = PhaseSpacePoint> {
    (-1.5f64..1.5, -1.5f64..1.5).prop_map(|(x, p)| PhaseSpacePoint::new(x, p))
}

fn center() -> impl Strategy<Value = PhaseSpacePoint> {
    (-0.75f64..0.75, -0.75f64..0.75).prop_map(|(x, p)| PhaseSpacePoint::new(x, p))
}

/// Superposition of one to three coherent states.
fn state() -> impl Strategy<Value = WaveFunction> {
    prop::collection::vec((point(), 0.3f64..1.0, 0.0f64..2.0 * PI), 1..=3).prop_map(|terms| {
        let g = grid();
        terms.into_iter().fold(WaveFunction::zeros(g), |acc, (z, r, th)| {
            acc.combine(C64::new(1.0, 0.0), &gaussian_coherent(z, g).unwrap(), C64::from_polar(r, th))
                .unwrap()
        })
    })
}

fn complex() -> impl Strategy<Value = C64> {
    (0.2f64..2.0, 0.0f64..2.0 * PI).prop_map(|(r, th)| C64::from_polar(r, th))
}

fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max)
}

fn rel_close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn conjugate_symmetry(phi in state(), psi in state()) {
        let a = inner_product(&phi, &psi).unwrap();
        let b = inner_product(&psi, &phi).unwrap();
        prop_assert!((a - b.conj()).norm() < 1e-14);
    }

    #[test]
    fn operators_preserve_inner_products(phi in state(), psi in state(), z in center()) {
        let before = inner_product(&phi, &psi).unwrap();
        let f = inner_product(&hbar_fourier(&phi), &hbar_fourier(&psi)).unwrap();
        prop_assert!(rel_close(before, f, 1e-8));
        let t = inner_product(&heisenberg_weyl(z, &phi).unwrap(), &heisenberg_weyl(z, &psi).unwrap()).unwrap();
        prop_assert!(rel_close(before, t, 1e-8));
        let r = inner_product(&grossmann_royer(z, &phi).unwrap(), &grossmann_royer(z, &psi).unwrap()).unwrap();
        prop_assert!(rel_close(before, r, 1e-8));
    }

    #[test]
    fn reflections_are_involutive(psi in state(), z in center()) {
        let twice = grossmann_royer(z, &grossmann_royer(z, &psi).unwrap()).unwrap();
        prop_assert!(max_diff(twice.samples(), psi.samples()) < 1e-10);
    }

    #[test]
    fn four_fourier_transforms_are_identity(psi in state()) {
        let mut out = psi.clone();
        for _ in 0..4 {
            out = hbar_fourier(&out);
        }
        prop_assert!(max_diff(out.samples(), psi.samples()) < 1e-8);
        let back = inverse_hbar_fourier(&hbar_fourier(&psi));
        prop_assert!(max_diff(back.samples(), psi.samples()) < 1e-12);
    }

    #[test]
    fn cross_wigner_marginals(phi in state(), psi in state()) {
        let w = cross_wigner(&phi, &psi).unwrap();
        let px: Vec<C64> = phi.samples().iter().zip(psi.samples()).map(|(a, b)| a.conj() * b).collect();
        prop_assert!(max_diff(&marginal_over_p(&w), &px) < 1e-6);
        let (fa, fb) = (hbar_fourier(&phi), hbar_fourier(&psi));
        let pp: Vec<C64> = fa.samples().iter().zip(fb.samples()).map(|(a, b)| a.conj() * b).collect();
        prop_assert!(max_diff(&marginal_over_x(&w), &pp) < 1e-6);
        prop_assert!((w.integral() - inner_product(&phi, &psi).unwrap()).norm() < 1e-8);
    }

    #[test]
    fn cross_wigner_conjugation(phi in state(), psi in state()) {
        let a = cross_wigner(&phi, &psi).unwrap();
        let b = cross_wigner(&psi, &phi).unwrap().conj();
        prop_assert!(a.max_abs_diff(&b).unwrap() < 1e-14);
    }

    #[test]
    fn cross_wigner_sesquilinear(p1 in state(), p2 in state(), psi in state(), a in complex(), b in complex()) {
        let combo = p1.combine(a, &p2, b).unwrap();
        let lhs = cross_wigner(&combo, &psi).unwrap();
        let rhs = cross_wigner(&p1, &psi).unwrap()
            .combine(a.conj(), &cross_wigner(&p2, &psi).unwrap(), b.conj(), FieldLabel::CrossWigner)
            .unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
    }

    #[test]
    fn wigner_is_real_normalized_and_bounded(psi in state()) {
        let w = wigner(&psi).unwrap();
        let n = psi.norm_sqr();
        prop_assert!((w.integral().re - n).abs() < 1e-8 * n);
        prop_assert!(w.max_abs() <= n / (PI * psi.grid().hbar()) * (1.0 + 1e-9));
    }

    #[test]
    fn moyal_identity(phi in state(), psi in state()) {
        let w = cross_wigner(&phi, &psi).unwrap();
        let lhs = w.values().iter().map(|c| c.norm_sqr()).sum::<f64>() * w.grid().cell();
        let rhs = phi.norm_sqr() * psi.norm_sqr() / (2.0 * PI * w.grid().hbar());
        prop_assert!((lhs - rhs).abs() < 1e-6 * rhs.max(1.0));
    }

    #[test]
    fn rho_normalization_and_scale_invariance(phi in state(), psi in state(), lam in complex(), mu in complex()) {
        let r = rho(&phi, &psi).unwrap();
        prop_assert!((r.integral() - 1.0).norm() < 1e-6);
        prop_assert!((r.real_part(FieldLabel::Generic).integral().re - 1.0).abs() < 1e-6);
        let scaled = rho(&phi.scaled(lam), &psi.scaled(lam)).unwrap();
        prop_assert!(r.max_abs_diff(&scaled).unwrap() <= 1e-12 * r.max_abs());
        let a = Observable::oscillator();
        let w1 = weak_value_quadrature(&a, &phi, &psi).unwrap().value;
        let w2 = weak_value_quadrature(&a, &phi.scaled(lam), &psi.scaled(mu)).unwrap().value;
        prop_assert!(rel_close(w1, w2, 1e-12));
    }

    #[test]
    fn weak_values_conjugate_under_swap(phi in state(), psi in state()) {
        let a = Observable::poly(&[(1, 1, 1.0), (2, 0, 0.3), (0, 1, -1.0)]).unwrap();
        let fwd = weak_value_quadrature(&a, &phi, &psi).unwrap().value;
        let bwd = weak_value_quadrature(&a, &psi, &phi).unwrap().value;
        prop_assert!(rel_close(fwd, bwd.conj(), 1e-10));
    }

    #[test]
    fn expectation_stays_in_symbol_range_for_bumps(psi in state(), c in point(), w in 0.5f64..2.0) {
        let g = grid();
        let a = Observable::sampled_fn(g, |x, p| (-((x - c.x).powi(2) + (p - c.p).powi(2)) / (2.0 * w * w)).exp()).unwrap();
        let (lo, hi) = a.range(&g).unwrap();
        let e = expectation(&a, &psi).unwrap();
        prop_assert!(e >= lo - 1e-12 && e <= hi + 1e-12);
    }

    #[test]
    fn sigma_antisymmetry(a in point(), b in point()) {
        prop_assert_eq!(a.sigma(&b), -b.sigma(&a));
        let (va, vb) = (PhaseVector::from(a), PhaseVector::from(b));
        prop_assert_eq!(va.sigma(&vb).unwrap(), -vb.sigma(&va).unwrap());
        prop_assert_eq!(analytic::chi_phase(&va, &va, &vb).unwrap(), 0.0);
    }

    #[test]
    fn snapping_is_idempotent(z in point()) {
        let g = grid();
        let once = g.snap_to_nodes(z);
        let twice = g.snap_to_nodes(once.used);
        prop_assert_eq!(once.used, twice.used);
        prop_assert!(once.delta().x.abs() <= 0.5 * g.dx() + 1e-15 && once.delta().p.abs() <= 0.5 * g.dp() + 1e-15);
    }
}

fn hamiltonian() -> impl Strategy<Value = HamiltonianSpec> {
    prop_oneof![
        (1.0f64..2.0).prop_map(|mass| HamiltonianSpec::Free { mass }),
        (1.0f64..2.0, 0.5f64..1.5).prop_map(|(mass, omega)| HamiltonianSpec::Harmonic { mass, omega }),
        (1.0f64..2.0, 0.0f64..0.3).prop_map(|(mass, k)| HamiltonianSpec::Potential {
            mass,
            potential: grid().x_nodes().iter().map(|x| 0.5 * x * x + k * x.powi(4) / 10.0).collect(),
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn propagation_is_unitary_and_reversible(psi in state(), h in hamiltonian(), t in 0.2f64..0.6) {
        let fwd = propagate(&psi, 0.0, t, &h).unwrap();
        prop_assert!((fwd.norm() - psi.norm()).abs() < 1e-8 * psi.norm());
        let back = propagate(&fwd, t, 0.0, &h).unwrap();
        prop_assert!(max_diff(back.samples(), psi.samples()) < 1e-6);
    }

    #[test]
    fn propagation_composes(psi in state(), h in hamiltonian(), a in 0.0f64..0.3, b in 0.3f64..0.6, c in 0.6f64..0.9) {
        let direct = propagate(&psi, a, c, &h).unwrap();
        let split = propagate(&propagate(&psi, a, b, &h).unwrap(), b, c, &h).unwrap();
        prop_assert!(max_diff(direct.samples(), split.samples()) < 1e-6);
    }
}
