//! Two-state evolution: the pre-selected state runs forward from `t_in`,
//! the post-selected state runs backward from `t_fin`, and weak values are
//! taken at intermediate times.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::field::PhaseSpaceField;
use crate::fourier::{fft_forward, fft_inverse, signed_index};
use crate::grid::GridSpec;
use crate::observable::Observable;
use crate::states::hermite_function;
use crate::wavefunction::{inner_product, Representation, WaveFunction, CONTAINMENT_TOLERANCE};
use crate::weakval::{weak_value_both, WeakValueReport};
use crate::xwigner::{interference_term, wigner};

/// Largest split-step time step.
pub const MAX_STEP: f64 = 1e-3;

/// Minimum number of steps for any nonzero interval.
pub const MIN_STEPS: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub enum HamiltonianSpec {
    Free { mass: f64 },
    Harmonic { mass: f64, omega: f64 },
    /// `p^2 / 2m + V(x)` with `V` sampled on the position nodes.
    Potential { mass: f64, potential: Vec<f64> },
}

impl HamiltonianSpec {
    pub fn mass(&self) -> f64 {
        match self {
            HamiltonianSpec::Free { mass }
            | HamiltonianSpec::Harmonic { mass, .. }
            | HamiltonianSpec::Potential { mass, .. } => *mass,
        }
    }

    pub fn validate(&self, grid: &GridSpec) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidInput(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("mass", self.mass())?;
        match self {
            HamiltonianSpec::Free { .. } => Ok(()),
            HamiltonianSpec::Harmonic { omega, .. } => positive("omega", *omega),
            HamiltonianSpec::Potential { potential, .. } => {
                if potential.len() != grid.len() {
                    return Err(Error::GridMismatch(format!(
                        "potential has {} samples, grid has {}",
                        potential.len(),
                        grid.len()
                    )));
                }
                if potential.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidInput("non-finite potential sample".into()));
                }
                Ok(())
            }
        }
    }

    /// `V` on the position nodes.
    pub fn potential_samples(&self, grid: &GridSpec) -> Vec<f64> {
        match self {
            HamiltonianSpec::Free { .. } => vec![0.0; grid.len()],
            HamiltonianSpec::Harmonic { mass, omega } => {
                grid.x_nodes().iter().map(|x| 0.5 * mass * omega * omega * x * x).collect()
            }
            HamiltonianSpec::Potential { potential, .. } => potential.clone(),
        }
    }
}

/// Propagation scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    /// Strang-split Fourier steps (any Hamiltonian).
    #[default]
    SplitStep,
    /// Eigenfunction expansion, exact up to basis truncation
    /// (harmonic Hamiltonians only).
    ExactHarmonic,
}

/// Number of steps used for an interval of length `span`.
pub fn step_count(span: f64) -> usize {
    let span = span.abs();
    if span == 0.0 {
        0
    } else {
        ((span / MAX_STEP).ceil() as usize).max(MIN_STEPS)
    }
}

/// `U(t_to, t_from) psi` by split-step Fourier; negative intervals step
/// backward with `-dt`.
pub fn propagate(psi: &WaveFunction, t_from: f64, t_to: f64, h: &HamiltonianSpec) -> Result<WaveFunction> {
    propagate_with(psi, t_from, t_to, h, Scheme::SplitStep)
}

pub fn propagate_with(
    psi: &WaveFunction,
    t_from: f64,
    t_to: f64,
    h: &HamiltonianSpec,
    scheme: Scheme,
) -> Result<WaveFunction> {
    if !(t_from.is_finite() && t_to.is_finite()) {
        return Err(Error::InvalidInput("non-finite propagation time".into()));
    }
    if psi.representation() != Representation::Position {
        return Err(Error::InvalidInput("propagation needs position samples".into()));
    }
    let grid = *psi.grid();
    h.validate(&grid)?;
    psi.ensure_contained()?;
    if t_from == t_to {
        return Ok(psi.clone());
    }
    match scheme {
        Scheme::SplitStep => split_step(psi, t_from, t_to, h),
        Scheme::ExactHarmonic => match h {
            HamiltonianSpec::Harmonic { mass, omega } => harmonic_exact(psi, t_to - t_from, *mass, *omega),
            _ => Err(Error::InvalidInput("the exact propagator needs a harmonic Hamiltonian".into())),
        },
    }
}

fn split_step(psi: &WaveFunction, t_from: f64, t_to: f64, h: &HamiltonianSpec) -> Result<WaveFunction> {
    let grid = *psi.grid();
    let m = grid.len();
    let hbar = grid.hbar();
    let steps = step_count(t_to - t_from);
    let dt = (t_to - t_from) / steps as f64;

    let v = h.potential_samples(&grid);
    let half_v: Vec<C64> = v.iter().map(|&vj| C64::from_polar(1.0, -0.5 * vj * dt / hbar)).collect();
    let full_v: Vec<C64> = half_v.iter().map(|c| c * c).collect();
    let kappa = 2.0 * PI / (m as f64 * grid.dx());
    let norm = 1.0 / m as f64;
    let kinetic: Vec<C64> = (0..m)
        .map(|k| {
            let p = hbar * kappa * signed_index(k, m) as f64;
            C64::from_polar(norm, -p * p * dt / (2.0 * h.mass() * hbar))
        })
        .collect();

    let nb = grid.boundary_nodes();
    let mut buf = psi.samples().to_vec();
    buf.iter_mut().zip(&half_v).for_each(|(c, f)| *c *= f);
    for step in 0..steps {
        fft_forward(&mut buf);
        buf.iter_mut().zip(&kinetic).for_each(|(c, f)| *c *= f);
        fft_inverse(&mut buf);
        let last = step + 1 == steps;
        let phase = if last { &half_v } else { &full_v };
        buf.iter_mut().zip(phase).for_each(|(c, f)| *c *= f);

        let total: f64 = buf.iter().map(|c| c.norm_sqr()).sum();
        let tail: f64 = buf[..nb].iter().chain(&buf[m - nb..]).map(|c| c.norm_sqr()).sum();
        if total > 0.0 && tail / total >= CONTAINMENT_TOLERANCE {
            return Err(Error::Containment {
                tail_fraction: tail / total,
                at_time: Some(t_from + (step + 1) as f64 * dt),
            });
        }
    }
    WaveFunction::new(grid, buf)
}

/// Coverage the eigenfunction expansion must reach.
const EXACT_COVERAGE: f64 = 1.0 - 1e-12;

fn harmonic_exact(psi: &WaveFunction, t: f64, mass: f64, omega: f64) -> Result<WaveFunction> {
    let grid = *psi.grid();
    let ell = (grid.hbar() / (mass * omega)).sqrt();
    let norm_sqr = psi.norm_sqr();
    if norm_sqr == 0.0 {
        return Ok(psi.clone());
    }
    let mut acc = WaveFunction::zeros(grid);
    let mut captured = 0.0;
    for n in 0..=grid.len() / 8 {
        let h = match hermite_function(n, ell, grid) {
            Ok(h) => h,
            Err(Error::Containment { .. }) => break,
            Err(e) => return Err(e),
        };
        let c = inner_product(&h, psi)?;
        captured += c.norm_sqr();
        let phase = C64::from_polar(1.0, -(n as f64 + 0.5) * omega * t);
        acc = acc.combine(C64::new(1.0, 0.0), &h, c * phase)?;
    }
    let captured = captured / norm_sqr;
    if captured < EXACT_COVERAGE {
        return Err(Error::Coverage { captured });
    }
    Ok(acc)
}

/// Pre- and post-selected states with the dynamics between them.
#[derive(Debug, Clone)]
pub struct TwoStateScenario {
    pub psi_in: WaveFunction,
    pub phi_fin: WaveFunction,
    pub hamiltonian: HamiltonianSpec,
    pub t_in: f64,
    pub t_fin: f64,
    pub observable: Observable,
    pub sample_times: Vec<f64>,
    pub scheme: Scheme,
}

impl TwoStateScenario {
    pub fn new(
        psi_in: WaveFunction,
        phi_fin: WaveFunction,
        hamiltonian: HamiltonianSpec,
        (t_in, t_fin): (f64, f64),
        observable: Observable,
        sample_times: Vec<f64>,
    ) -> Result<Self> {
        psi_in.grid().ensure_same(phi_fin.grid())?;
        hamiltonian.validate(psi_in.grid())?;
        if !(t_in.is_finite() && t_fin.is_finite() && t_in < t_fin) {
            return Err(Error::InvalidInput(format!("need t_in < t_fin, got [{t_in}, {t_fin}]")));
        }
        if sample_times.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidInput("sample times must be sorted".into()));
        }
        if let Some(t) = sample_times.iter().find(|t| !(t_in..=t_fin).contains(*t)) {
            return Err(Error::InvalidInput(format!("sample time {t} outside [{t_in}, {t_fin}]")));
        }
        Ok(Self {
            psi_in,
            phi_fin,
            hamiltonian,
            t_in,
            t_fin,
            observable,
            sample_times,
            scheme: Scheme::SplitStep,
        })
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    /// `(phi_t, psi_t)`.
    pub fn states_at(&self, t: f64) -> Result<(WaveFunction, WaveFunction)> {
        if !(self.t_in..=self.t_fin).contains(&t) {
            return Err(Error::InvalidInput(format!("time {t} outside [{}, {}]", self.t_in, self.t_fin)));
        }
        let phi = propagate_with(&self.phi_fin, self.t_fin, t, &self.hamiltonian, self.scheme)?;
        let psi = propagate_with(&self.psi_in, self.t_in, t, &self.hamiltonian, self.scheme)?;
        Ok((phi, psi))
    }
}

/// Weak value of the scenario's observable at time `t`, by quadrature, with
/// the direct method's residual attached.
pub fn two_state_weak_value(s: &TwoStateScenario, t: f64) -> Result<WeakValueReport> {
    let (phi, psi) = s.states_at(t)?;
    Ok(weak_value_both(&s.observable, &phi, &psi)?.0)
}

/// One row of a sweep; `report` is `None` where the overlap vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub t: f64,
    pub overlap: C64,
    pub report: Option<WeakValueReport>,
}

/// Evaluates every sample time; orthogonality is recorded as a gap.
pub fn sweep(s: &TwoStateScenario) -> Result<Vec<SweepPoint>> {
    s.sample_times
        .iter()
        .map(|&t| {
            let (phi, psi) = s.states_at(t)?;
            let overlap = inner_product(&phi, &psi)?;
            match weak_value_both(&s.observable, &phi, &psi) {
                Ok((report, _)) => Ok(SweepPoint { t, overlap, report: Some(report) }),
                Err(Error::Orthogonal { .. }) => Ok(SweepPoint { t, overlap, report: None }),
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// The three terms of `W(phi_t + psi_t)`.
#[derive(Debug, Clone)]
pub struct Interference {
    pub w_phi: PhaseSpaceField,
    pub w_psi: PhaseSpaceField,
    /// `2 Re W(phi_t, psi_t)`
    pub cross: PhaseSpaceField,
}

pub fn interference_emergence(s: &TwoStateScenario, t: f64) -> Result<Interference> {
    let (phi, psi) = s.states_at(t)?;
    Ok(Interference { w_phi: wigner(&phi)?, w_psi: wigner(&psi)?, cross: interference_term(&phi, &psi)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::PhaseSpacePoint;
    use crate::states::{fiducial, gaussian_coherent, hermite_basis};
    use crate::xwigner::cross_wigner;

    fn grid() -> GridSpec {
        GridSpec::new(512, 10.0, 1.0).unwrap()
    }

    fn fidelity(a: &WaveFunction, b: &WaveFunction) -> f64 {
        inner_product(a, b).unwrap().norm_sqr() / (a.norm_sqr() * b.norm_sqr())
    }

    fn second_moment(psi: &WaveFunction) -> f64 {
        psi.position_moment(2) / psi.norm_sqr()
    }

    #[test]
    fn step_rule() {
        assert_eq!(step_count(0.0), 0);
        assert_eq!(step_count(0.2), 1000);
        assert_eq!(step_count(-2.5), 2500);
    }

    #[test]
    fn free_spreading() {
        let xi = fiducial(grid()).unwrap();
        let out = propagate(&xi, 0.0, 1.0, &HamiltonianSpec::Free { mass: 1.0 }).unwrap();
        assert!((second_moment(&xi) - 0.5).abs() < 1e-10);
        assert!((second_moment(&out) - 1.0).abs() < 1e-8);
        assert!((out.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn harmonic_period() {
        let h = HamiltonianSpec::Harmonic { mass: 1.0, omega: 1.0 };
        let psi = gaussian_coherent(PhaseSpacePoint::new(1.0, 0.5), grid())
            .unwrap()
            .add(&hermite_basis(3, grid()).unwrap())
            .unwrap();
        let out = propagate(&psi, 0.0, 2.0 * PI, &h).unwrap();
        assert!(1.0 - fidelity(&out, &psi) < 1e-6, "{}", 1.0 - fidelity(&out, &psi));
        let exact = propagate_with(&psi, 0.0, 2.0 * PI, &h, Scheme::ExactHarmonic).unwrap();
        assert!(1.0 - fidelity(&exact, &psi) < 1e-12);
    }

    #[test]
    fn identity_and_reversibility() {
        let h = HamiltonianSpec::Harmonic { mass: 2.0, omega: 0.7 };
        let psi = gaussian_coherent(PhaseSpacePoint::new(-0.5, 1.0), grid()).unwrap();
        assert_eq!(propagate(&psi, 0.3, 0.3, &h).unwrap(), psi);
        let back = propagate(&propagate(&psi, 0.0, 1.3, &h).unwrap(), 1.3, 0.0, &h).unwrap();
        let err = back.samples().iter().zip(psi.samples()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
    }

    #[test]
    fn ehrenfest_rotation() {
        let (x0, p0) = (1.2, -0.4);
        let h = HamiltonianSpec::Harmonic { mass: 1.0, omega: 1.0 };
        let psi = gaussian_coherent(PhaseSpacePoint::new(x0, p0), grid()).unwrap();
        for t in [0.7, 2.0, 4.5] {
            let out = propagate(&psi, 0.0, t, &h).unwrap();
            let mean_x = out.position_moment(1) / out.norm_sqr();
            assert!((mean_x - (x0 * t.cos() + p0 * t.sin())).abs() < 1e-4);
        }
    }

    #[test]
    fn containment_failure_reports_time() {
        let psi = gaussian_coherent(PhaseSpacePoint::new(0.0, 6.0), grid()).unwrap();
        match propagate(&psi, 0.0, 2.0, &HamiltonianSpec::Free { mass: 1.0 }) {
            Err(Error::Containment { at_time: Some(t), .. }) => assert!(t > 0.0 && t < 2.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn potential_variant_matches_harmonic() {
        let g = grid();
        let v: Vec<f64> = g.x_nodes().iter().map(|x| 0.5 * x * x).collect();
        let psi = gaussian_coherent(PhaseSpacePoint::new(0.3, 0.3), g).unwrap();
        let a = propagate(&psi, 0.0, 0.9, &HamiltonianSpec::Potential { mass: 1.0, potential: v }).unwrap();
        let b = propagate(&psi, 0.0, 0.9, &HamiltonianSpec::Harmonic { mass: 1.0, omega: 1.0 }).unwrap();
        assert_eq!(a, b);
        let bad = HamiltonianSpec::Potential { mass: 1.0, potential: vec![0.0; 3] };
        assert!(matches!(propagate(&psi, 0.0, 1.0, &bad), Err(Error::GridMismatch(_))));
    }

    fn oscillator_scenario() -> TwoStateScenario {
        let g = grid();
        let times: Vec<f64> = (0..10).map(|i| 0.2 * i as f64).collect();
        TwoStateScenario::new(
            gaussian_coherent(PhaseSpacePoint::new(0.8, 0.0), g).unwrap(),
            gaussian_coherent(PhaseSpacePoint::new(0.0, 0.6), g).unwrap(),
            HamiltonianSpec::Harmonic { mass: 1.0, omega: 1.0 },
            (0.0, 1.8),
            Observable::poly(&[(2, 0, 0.5), (0, 2, 0.5)]).unwrap(),
            times,
        )
        .unwrap()
    }

    #[test]
    fn conserved_weak_value_is_constant() {
        let s = oscillator_scenario();
        let rows = sweep(&s).unwrap();
        let first = rows[0].report.unwrap().value;
        for r in &rows {
            let v = r.report.unwrap();
            assert!((v.value - first).norm() < 1e-6, "t = {}: {} vs {first}", r.t, v.value);
            assert!(v.residual_vs_alternate.unwrap() < 1e-6);
        }
    }

    #[test]
    fn endpoint_consistency() {
        let s = oscillator_scenario();
        let at_start = two_state_weak_value(&s, 0.0).unwrap();
        let phi = propagate(&s.phi_fin, 1.8, 0.0, &s.hamiltonian).unwrap();
        let direct = weak_value_both(&s.observable, &phi, &s.psi_in).unwrap().0;
        assert_eq!(at_start.value, direct.value);
        assert!(two_state_weak_value(&s, 2.0).is_err());
    }

    #[test]
    fn scenario_validation() {
        let g = grid();
        let xi = fiducial(g).unwrap();
        let h = HamiltonianSpec::Free { mass: 1.0 };
        assert!(TwoStateScenario::new(xi.clone(), xi.clone(), h.clone(), (1.0, 0.0), Observable::position(), vec![]).is_err());
        assert!(TwoStateScenario::new(xi.clone(), xi.clone(), h.clone(), (0.0, 1.0), Observable::position(), vec![0.5, 0.2]).is_err());
        assert!(TwoStateScenario::new(xi.clone(), xi, h, (0.0, 1.0), Observable::position(), vec![1.5]).is_err());
    }

    #[test]
    fn orthogonal_times_become_gaps() {
        let g = grid();
        let h = HamiltonianSpec::Free { mass: 1.0 };
        let s = TwoStateScenario::new(
            hermite_basis(1, g).unwrap(),
            hermite_basis(0, g).unwrap(),
            h,
            (0.0, 0.5),
            Observable::position(),
            vec![0.0, 0.25, 0.5],
        )
        .unwrap();
        let rows = sweep(&s).unwrap();
        assert!(rows.iter().all(|r| r.report.is_none()));
    }

    #[test]
    fn interference_terms() {
        let s = oscillator_scenario();
        let t = 0.9;
        let parts = interference_emergence(&s, t).unwrap();
        let (phi, psi) = s.states_at(t).unwrap();
        let total = crate::xwigner::wigner(&phi.add(&psi).unwrap()).unwrap();
        let sum = parts
            .w_phi
            .combine(C64::new(1.0, 0.0), &parts.w_psi, C64::new(1.0, 0.0), total.label())
            .unwrap()
            .combine(C64::new(1.0, 0.0), &parts.cross, C64::new(1.0, 0.0), total.label())
            .unwrap();
        assert!(total.max_abs_diff(&sum).unwrap() < 1e-12);
        let expected = 2.0 * inner_product(&phi, &psi).unwrap().re;
        assert!((parts.cross.integral().re - expected).abs() < 1e-10);
        let w = cross_wigner(&phi, &psi).unwrap();
        assert!(w.max_abs() > 0.0);
    }

    #[test]
    fn orthogonal_pair_cross_term() {
        let g = grid();
        let s = TwoStateScenario::new(
            hermite_basis(1, g).unwrap(),
            hermite_basis(0, g).unwrap(),
            HamiltonianSpec::Free { mass: 1.0 },
            (0.0, 0.4),
            Observable::position(),
            vec![],
        )
        .unwrap();
        let parts = interference_emergence(&s, 0.0).unwrap();
        assert!(parts.cross.integral().norm() < 1e-10);
        assert!(parts.cross.max_abs() > 1e-2);
    }
}
