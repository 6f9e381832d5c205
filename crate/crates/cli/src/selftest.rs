//! Invariant suite run on the configured grid with seeded random states.

use std::fmt::Write as _;

use num_complex::Complex64 as C64;
use phasewig_core::analytic::{self, PhaseVector};
use phasewig_core::evolve::{propagate, HamiltonianSpec};
use phasewig_core::fourier::{hbar_fourier, inverse_hbar_fourier};
use phasewig_core::operators::grossmann_royer;
use phasewig_core::reconstruct::{phase_align, reconstruct, ReconstructionInput};
use phasewig_core::states::{fiducial, gaussian_coherent, random_superposition, RandomStateOptions};
use phasewig_core::weakval::{
    convex_sum_check, relative_residual, rho, weak_value_direct_with_stride, weak_value_quadrature,
};
use phasewig_core::xwigner::{cross_wigner, marginal_over_p, marginal_over_x};
use phasewig_core::{inner_product, GridSpec, Observable, PhaseSpacePoint, Result, WaveFunction};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::commands::{RunOptions, RunReport};
use crate::config::{RunConfig, SelftestConfig};
use crate::error::{CliError, CliResult};
use crate::io::{header, num, Outputs};

struct Check {
    name: &'static str,
    tolerance: f64,
    outcome: Result<f64>,
}

impl Check {
    fn passed(&self) -> bool {
        matches!(self.outcome, Ok(v) if v < self.tolerance)
    }
}

fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max)
}

fn uniform(rng: &mut ChaCha8Rng, r: f64) -> f64 {
    let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    r * (2.0 * u - 1.0)
}

struct Suite {
    grid: GridSpec,
    pairs: Vec<(WaveFunction, WaveFunction)>,
    centers: Vec<PhaseSpacePoint>,
    stride: usize,
}

impl Suite {
    fn weak_values(&self) -> Result<f64> {
        let observables = [
            Observable::constant(1.0),
            Observable::position(),
            Observable::momentum(),
            Observable::poly(&[(2, 0, 1.0)])?,
            Observable::poly(&[(0, 2, 1.0)])?,
            Observable::poly(&[(1, 1, 1.0)])?,
            Observable::oscillator(),
        ];
        let mut worst = 0.0f64;
        for (phi, psi) in &self.pairs {
            for a in &observables {
                let q = weak_value_quadrature(a, phi, psi)?;
                let d = weak_value_direct_with_stride(a, phi, psi, self.stride)?;
                worst = worst.max(relative_residual(q.value, d.value));
            }
        }
        Ok(worst)
    }

    fn marginals(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for (phi, psi) in &self.pairs {
            let w = cross_wigner(phi, psi)?;
            let px: Vec<C64> = phi.samples().iter().zip(psi.samples()).map(|(a, b)| a.conj() * b).collect();
            let (fa, fb) = (hbar_fourier(phi), hbar_fourier(psi));
            let pp: Vec<C64> = fa.samples().iter().zip(fb.samples()).map(|(a, b)| a.conj() * b).collect();
            worst = worst
                .max(max_diff(&marginal_over_p(&w), &px))
                .max(max_diff(&marginal_over_x(&w), &pp))
                .max((w.integral() - inner_product(phi, psi)?).norm());
        }
        Ok(worst)
    }

    fn rho_normalization(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for (phi, psi) in &self.pairs {
            worst = worst.max((rho(phi, psi)?.integral() - 1.0).norm());
        }
        Ok(worst)
    }

    fn moyal(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for (phi, psi) in &self.pairs {
            let w = cross_wigner(phi, psi)?;
            let lhs = w.values().iter().map(|c| c.norm_sqr()).sum::<f64>() * self.grid.cell();
            let rhs = phi.norm_sqr() * psi.norm_sqr() / (2.0 * std::f64::consts::PI * self.grid.hbar());
            worst = worst.max((lhs - rhs).abs() / rhs);
        }
        Ok(worst)
    }

    fn operators(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for ((_, psi), z) in self.pairs.iter().zip(&self.centers) {
            let twice = grossmann_royer(*z, &grossmann_royer(*z, psi)?)?;
            let back = inverse_hbar_fourier(&hbar_fourier(psi));
            worst = worst.max(max_diff(twice.samples(), psi.samples())).max(max_diff(back.samples(), psi.samples()));
        }
        Ok(worst)
    }

    fn closed_form(&self) -> Result<f64> {
        let z0 = PhaseSpacePoint::new(1.0, 0.0);
        let w = cross_wigner(&gaussian_coherent(z0, self.grid)?, &gaussian_coherent(-z0, self.grid)?)?;
        let v0 = PhaseVector::from(z0);
        let mut worst = 0.0f64;
        for ((j, k), val) in w.values().indexed_iter() {
            let z = PhaseVector::from(PhaseSpacePoint::new(self.grid.x(j), self.grid.p(k)));
            worst = worst.max((val - analytic::cross_wigner_antipodal(&z, &v0, self.grid.hbar())?).norm());
        }
        Ok(worst)
    }

    fn reconstruction(&self) -> Result<f64> {
        let xi = fiducial(self.grid)?;
        let mut worst = 0.0f64;
        for (_, psi) in self.pairs.iter().take(3) {
            let input = ReconstructionInput::new(cross_wigner(&xi, psi)?, xi.clone(), xi.clone())?;
            worst = worst.max(phase_align(&reconstruct(&input)?, psi)?.residual);
        }
        Ok(worst)
    }

    fn convex_sum(&self) -> Result<f64> {
        let a = Observable::oscillator();
        let mut worst = 0.0f64;
        for (_, psi) in self.pairs.iter().take(3) {
            worst = worst.max(convex_sum_check(&a, psi, 24)?.residual);
        }
        Ok(worst)
    }

    fn propagation(&self) -> Result<f64> {
        let h = HamiltonianSpec::Harmonic { mass: 1.0, omega: 1.0 };
        let mut worst = 0.0f64;
        for (_, psi) in self.pairs.iter().take(2) {
            let fwd = propagate(psi, 0.0, 0.5, &h)?;
            let back = propagate(&fwd, 0.5, 0.0, &h)?;
            worst = worst
                .max((fwd.norm() - psi.norm()).abs() / psi.norm())
                .max(max_diff(back.samples(), psi.samples()));
        }
        Ok(worst)
    }
}

pub fn selftest_cmd(cfg: &RunConfig, opts: RunOptions) -> CliResult<RunReport> {
    let sec = cfg.selftest.clone().unwrap_or_default();
    let SelftestConfig { pairs } = sec;
    if pairs == 0 {
        return Err(CliError::Config("selftest.pairs: must be at least 1".into()));
    }
    if opts.stride == 0 {
        return Err(CliError::Config("--stride must be at least 1".into()));
    }
    let grid = cfg.grid()?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let state_opts = RandomStateOptions { max_components: 3, center_radius: 1.0, normalize: true };
    let draw = |rng: &mut ChaCha8Rng| random_superposition(rng, grid, state_opts);
    let mut suite = Suite { grid, pairs: Vec::new(), centers: Vec::new(), stride: opts.stride };
    for _ in 0..pairs {
        let phi = draw(&mut rng)?;
        let psi = draw(&mut rng)?;
        suite.pairs.push((phi, psi));
        suite.centers.push(PhaseSpacePoint::new(uniform(&mut rng, 0.5), uniform(&mut rng, 0.5)));
    }

    let checks = [
        Check { name: "weak value methods agree", tolerance: 1e-6, outcome: suite.weak_values() },
        Check { name: "cross-Wigner marginals", tolerance: 1e-6, outcome: suite.marginals() },
        Check { name: "rho normalization", tolerance: 1e-6, outcome: suite.rho_normalization() },
        Check { name: "Moyal identity", tolerance: 1e-6, outcome: suite.moyal() },
        Check { name: "reflection and Fourier inverses", tolerance: 1e-10, outcome: suite.operators() },
        Check { name: "antipodal closed form", tolerance: 1e-6, outcome: suite.closed_form() },
        Check { name: "reconstruction round trip", tolerance: 1e-4, outcome: suite.reconstruction() },
        Check { name: "convex-sum identity", tolerance: 1e-6, outcome: suite.convex_sum() },
        Check { name: "propagation reversibility", tolerance: 1e-6, outcome: suite.propagation() },
    ];

    let mut csv = header("SELFTEST", "SELFTEST", &grid);
    let _ = writeln!(csv, "# seed={} pairs={pairs} stride={}\ncheck,worst,tolerance,status", opts.seed, opts.stride);
    let mut table = format!("{:<34} {:>12} {:>10}  status\n", "check", "worst", "tolerance");
    let mut passed = true;
    for ch in &checks {
        let status = if ch.passed() { "PASS" } else { "FAIL" };
        passed &= ch.passed();
        let worst = match &ch.outcome {
            Ok(v) => format!("{v:.3e}"),
            Err(e) => format!("error: {e}"),
        };
        let _ = writeln!(table, "{:<34} {:>12} {:>10.0e}  {status}", ch.name, worst, ch.tolerance);
        let worst_csv = match &ch.outcome {
            Ok(v) => num(*v),
            Err(e) => format!("\"{e}\""),
        };
        let _ = writeln!(csv, "{},{worst_csv},{},{status}", ch.name, num(ch.tolerance));
    }
    let total = checks.iter().filter(|c| c.passed()).count();
    let _ = writeln!(table, "{total} of {} checks passed", checks.len());
    let mut out = Outputs::default();
    out.add("selftest.csv", csv);
    Ok(RunReport { outputs: out, summary: table, passed })
}
