//! Subcommand implementations. Each one builds every input first (so config
//! problems surface before any computation), then computes, and returns the
//! files to write plus a human-readable summary.

use std::fmt::Write as _;

use num_complex::Complex64 as C64;
use phasewig_core::analytic::{self, PhaseVector};
use phasewig_core::evolve::{interference_emergence, sweep, TwoStateScenario};
use phasewig_core::reconstruct::{fitted_scale, phase_align, reconstruct, ReconstructionInput};
use phasewig_core::weakval::{
    relative_residual, rho, weak_value_direct_with_stride, weak_value_quadrature, WeakValueReport,
};
use phasewig_core::xwigner::{compass_wigner, cross_wigner, marginal_over_p, marginal_over_x, wigner};
use phasewig_core::{inner_product, GridSpec, PhaseSpacePoint};

use crate::config::{Builder, RunConfig};
use crate::error::{CliError, CliResult};
use crate::io::{self, header, num, Outputs};

/// Options shared by all subcommands.
#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub seed: u64,
    /// Reflection-center subsampling for the direct weak value; values above
    /// one trade accuracy for speed.
    pub stride: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { seed: 0, stride: 1 }
    }
}

#[derive(Debug, Default)]
pub struct RunReport {
    pub outputs: Outputs,
    pub summary: String,
    /// `false` when a check inside the run failed (selftest).
    pub passed: bool,
}

impl RunReport {
    fn ok(outputs: Outputs, summary: String) -> Self {
        Self { outputs, summary, passed: true }
    }
}

fn c(z: C64) -> String {
    format!("{},{}", num(z.re), num(z.im))
}

pub fn wigner_cmd(cfg: &RunConfig, opts: RunOptions) -> CliResult<RunReport> {
    let sec = cfg.section("wigner", &cfg.wigner)?;
    let mut b = Builder::new(cfg, opts.seed)?;
    let psi = b.state("wigner.state", &sec.state)?;
    let phi = match &sec.partner {
        Some(p) => Some(b.state("wigner.partner", p)?),
        None => None,
    };

    let field = match &phi {
        Some(phi) => cross_wigner(phi, &psi)?,
        None => wigner(&psi)?,
    };
    let phi_ref = phi.as_ref().unwrap_or(&psi);
    let overlap = inner_product(phi_ref, &psi)?;
    let (mx, mp) = (marginal_over_p(&field), marginal_over_x(&field));
    let grid = field.grid();

    let mut marg = header("MARGINALS", field.label().as_str(), grid);
    marg.push_str("x,re_int_dp,im_int_dp,p,re_int_dx,im_int_dx\n");
    for j in 0..grid.len() {
        let _ = writeln!(marg, "{},{},{},{}", num(grid.x(j)), c(mx[j]), num(grid.p(j)), c(mp[j]));
    }
    let mut out = Outputs::default();
    out.add("wigner.csv", io::write_field(&field));
    out.add("marginals.csv", marg);
    let summary = format!(
        "{} on M={} L={} hbar={}\n  integral = {:.12e} {:+.12e}i\n  <phi|psi> = {:.12e} {:+.12e}i\n  max |W| = {:.6e}\n",
        field.label().as_str(),
        grid.len(),
        grid.half_width(),
        grid.hbar(),
        field.integral().re,
        field.integral().im,
        overlap.re,
        overlap.im,
        field.max_abs()
    );
    Ok(RunReport::ok(out, summary))
}

pub const WEAK_VALUE_COLUMNS: &str = "method,re_value,im_value,re_overlap,im_overlap,residual";

pub fn weak_value_row(r: &WeakValueReport) -> String {
    let residual = r.residual_vs_alternate.map(num).unwrap_or_default();
    format!("{},{},{},{}", r.method.as_str(), c(r.value), c(r.overlap), residual)
}

pub fn weakvalue_cmd(cfg: &RunConfig, opts: RunOptions) -> CliResult<RunReport> {
    let sec = cfg.section("weakvalue", &cfg.weakvalue)?;
    if opts.stride == 0 {
        return Err(CliError::Config("--stride must be at least 1".into()));
    }
    let mut b = Builder::new(cfg, opts.seed)?;
    let psi = b.state("weakvalue.pre", &sec.pre)?;
    let phi = b.state("weakvalue.post", &sec.post)?;
    let a = b.observable("weakvalue.observable", &sec.observable)?;

    let mut quad = weak_value_quadrature(&a, &phi, &psi)?;
    let mut direct = weak_value_direct_with_stride(&a, &phi, &psi, opts.stride)?;
    let residual = relative_residual(quad.value, direct.value);
    quad.residual_vs_alternate = Some(residual);
    direct.residual_vs_alternate = Some(residual);

    let grid = &b.grid;
    let mut csv = header("WEAK_VALUE", "WEAK_VALUE", grid);
    let _ = writeln!(csv, "# stride={}\n{WEAK_VALUE_COLUMNS}", opts.stride);
    for r in [&quad, &direct] {
        csv.push_str(&weak_value_row(r));
        csv.push('\n');
    }
    let mut out = Outputs::default();
    out.add("weakvalue.csv", csv);
    if sec.write_rho {
        out.add("rho.csv", io::write_field(&rho(&phi, &psi)?));
    }
    let mut summary = String::new();
    for r in [&quad, &direct] {
        let _ = writeln!(summary, "{:<16} {:+.12e} {:+.12e}i", r.method.as_str(), r.value.re, r.value.im);
    }
    let _ = writeln!(summary, "overlap          {:+.12e} {:+.12e}i", quad.overlap.re, quad.overlap.im);
    let _ = writeln!(summary, "residual         {residual:.3e} (stride {})", opts.stride);
    Ok(RunReport::ok(out, summary))
}

fn phase_vector(ctx: &str, v: &[f64], dim: Option<usize>) -> CliResult<PhaseVector> {
    if let Some(d) = dim {
        if v.len() != 2 * d {
            return Err(CliError::Config(format!("{ctx}: expected {} coordinates, got {}", 2 * d, v.len())));
        }
    }
    PhaseVector::from_slice(v).map_err(|e| CliError::from_validation(ctx, e))
}

pub fn analytic_cmd(cfg: &RunConfig, _opts: RunOptions) -> CliResult<RunReport> {
    let sec = cfg.section("analytic", &cfg.analytic)?;
    let grid = cfg.grid()?;
    let hbar = grid.hbar();
    let z0 = phase_vector("analytic.z0", &sec.z0, None)?;
    let dim = Some(z0.dim());
    let points = sec
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| phase_vector(&format!("analytic.points[{i}]"), p, dim))
        .collect::<CliResult<Vec<_>>>()?;
    let pair = match (&sec.alpha, &sec.beta) {
        (Some(a), Some(b)) => Some((phase_vector("analytic.alpha", a, dim)?, phase_vector("analytic.beta", b, dim)?)),
        (None, None) => None,
        _ => return Err(CliError::Config("analytic: give both alpha and beta or neither".into())),
    };
    if !(sec.sup_abs.is_finite() && sec.sup_abs >= 0.0) {
        return Err(CliError::Config(format!("analytic.sup_abs: must be finite and >= 0, got {}", sec.sup_abs)));
    }

    let mut rows: Vec<(String, Option<usize>, C64)> = Vec::new();
    rows.push(("overlap_antipodal".into(), None, analytic::overlap_antipodal(&z0, hbar)?.into()));
    let bound = analytic::amplification_bound(&z0, hbar, sec.sup_abs)?;
    let mut extra = format!("# amplification_bound={bound}\n");
    let transport = match &pair {
        Some((a, b)) => Some(analytic::translation_transport(a.clone(), b.clone(), hbar, |z| {
            analytic::fiducial_wigner(z, hbar).map(C64::from)
        })?),
        None => None,
    };
    for (i, z) in points.iter().enumerate() {
        let _ = writeln!(
            extra,
            "# point_{i}={}",
            z.x().iter().chain(z.p()).map(|v| num(*v)).collect::<Vec<_>>().join(" ")
        );
        rows.push(("fiducial_wigner".into(), Some(i), analytic::fiducial_wigner(z, hbar)?.into()));
        rows.push(("cross_wigner_antipodal".into(), Some(i), analytic::cross_wigner_antipodal(z, &z0, hbar)?));
        rows.push(("rho_antipodal".into(), Some(i), analytic::rho_antipodal(z, &z0, hbar)?));
        if let (Some((a, b)), Some(t)) = (&pair, &transport) {
            rows.push(("chi_phase".into(), Some(i), analytic::chi_phase(a, b, z)?.into()));
            rows.push(("transported_fiducial_wigner".into(), Some(i), t(z)?));
        }
    }

    let mut csv = header("ANALYTIC", "ANALYTIC", &grid);
    csv.push_str(&extra);
    csv.push_str("quantity,point,re,im\n");
    let mut summary = format!("amplification bound exp(|z0|^2/hbar) sup|A| = {bound}\n");
    for (name, i, v) in &rows {
        let idx = i.map(|i| i.to_string()).unwrap_or_default();
        let _ = writeln!(csv, "{name},{idx},{}", c(*v));
        let _ = writeln!(summary, "{name:<28} {idx:>4} {:+.12e} {:+.12e}i", v.re, v.im);
    }
    let mut out = Outputs::default();
    out.add("analytic.csv", csv);
    Ok(RunReport::ok(out, summary))
}

pub const EVOLVE_COLUMNS: &str = "t,re_value,im_value,re_overlap,im_overlap,residual";

pub fn evolve_cmd(cfg: &RunConfig, opts: RunOptions) -> CliResult<RunReport> {
    let sec = cfg.section("evolve", &cfg.evolve)?;
    let mut b = Builder::new(cfg, opts.seed)?;
    let psi = b.state("evolve.pre", &sec.pre)?;
    let phi = b.state("evolve.post", &sec.post)?;
    let a = b.observable("evolve.observable", &sec.observable)?;
    let h = b.hamiltonian("evolve.hamiltonian", &sec.hamiltonian)?;
    let scenario = TwoStateScenario::new(psi, phi, h, (sec.t_in, sec.t_fin), a, sec.sample_times.clone())
        .map_err(|e| CliError::from_validation("evolve", e))?
        .with_scheme(sec.scheme.into());
    if let Some(t) = sec.interference_at {
        if !(sec.t_in..=sec.t_fin).contains(&t) {
            return Err(CliError::Config(format!("evolve.interference_at: {t} outside [t_in, t_fin]")));
        }
    }

    let points = sweep(&scenario)?;
    let mut csv = header("EVOLVE", "WEAK_VALUE", &b.grid);
    let _ = writeln!(csv, "{EVOLVE_COLUMNS}");
    let mut summary = String::from("         t   Re A_w             Im A_w             |<phi_t|psi_t>|\n");
    for p in &points {
        match &p.report {
            Some(r) => {
                let residual = r.residual_vs_alternate.map(num).unwrap_or_default();
                let _ = writeln!(csv, "{},{},{},{residual}", num(p.t), c(r.value), c(p.overlap));
                let _ = writeln!(summary, "{:>10.4} {:+.12e} {:+.12e} {:.6e}", p.t, r.value.re, r.value.im, p.overlap.norm());
            }
            None => {
                let _ = writeln!(csv, "{},,,{},", num(p.t), c(p.overlap));
                let _ = writeln!(summary, "{:>10.4} (orthogonal)                          {:.6e}", p.t, p.overlap.norm());
            }
        }
    }
    let mut out = Outputs::default();
    out.add("evolve.csv", csv);
    if let Some(t) = sec.interference_at {
        let parts = interference_emergence(&scenario, t)?;
        out.add("interference_w_phi.csv", io::write_field(&parts.w_phi));
        out.add("interference_w_psi.csv", io::write_field(&parts.w_psi));
        out.add("interference_cross.csv", io::write_field(&parts.cross));
    }
    Ok(RunReport::ok(out, summary))
}

pub fn reconstruct_cmd(cfg: &RunConfig, opts: RunOptions) -> CliResult<RunReport> {
    let sec = cfg.section("reconstruct", &cfg.reconstruct)?;
    let mut b = Builder::new(cfg, opts.seed)?;
    let field = io::read_field(&cfg.resolve(&sec.field))?;
    field.grid().ensure_same(&b.grid).map_err(|e| CliError::from_validation("reconstruct.field", e))?;
    let phi = b.state("reconstruct.phi", &sec.phi)?;
    let gamma = b.state("reconstruct.gamma", &sec.gamma)?;
    let truth = match &sec.truth {
        Some(t) => Some(b.state("reconstruct.truth", t)?),
        None => None,
    };
    let input = ReconstructionInput::new(field, phi, gamma).map_err(|e| CliError::from_validation("reconstruct", e))?;

    let psi = reconstruct(&input)?;
    // Consistency: the recovered state must reproduce the input field.
    let again = cross_wigner(&input.phi, &psi)?;
    let field_residual = again.max_abs_diff(&input.field)? / input.field.max_abs().max(f64::MIN_POSITIVE);
    let window = inner_product(&input.phi, &input.gamma)?;

    let mut rows = vec![
        ("re_phi_gamma_overlap", num(window.re)),
        ("im_phi_gamma_overlap", num(window.im)),
        ("field_residual", num(field_residual)),
    ];
    if let Some(truth) = &truth {
        let al = phase_align(&psi, truth)?;
        rows.push(("alignment_residual", num(al.residual)));
        if let Some(ph) = al.phase {
            rows.push(("re_alignment_phase", num(ph.re)));
            rows.push(("im_alignment_phase", num(ph.im)));
        }
        rows.push(("fitted_scale", num(fitted_scale(&psi, truth)?)));
    }
    let mut csv = header("RECONSTRUCTION", "RECONSTRUCTION", &b.grid);
    csv.push_str("quantity,value\n");
    let mut summary = String::new();
    for (k, v) in &rows {
        let _ = writeln!(csv, "{k},{v}");
        let _ = writeln!(summary, "{k:<22} {v}");
    }
    let mut out = Outputs::default();
    out.add("reconstructed.csv", io::write_state(&psi, "RECONSTRUCTED"));
    out.add("reconstruction.csv", csv);
    Ok(RunReport::ok(out, summary))
}

pub fn compass_cmd(cfg: &RunConfig, _opts: RunOptions) -> CliResult<RunReport> {
    let sec = cfg.section("compass", &cfg.compass)?;
    let grid: GridSpec = cfg.grid()?;
    let centers: Vec<PhaseSpacePoint> = sec.centers.iter().map(|&[x, p]| PhaseSpacePoint::new(x, p)).collect();
    if let Some(z) = centers.iter().find(|z| !z.is_finite()) {
        return Err(CliError::Config(format!("compass.centers: non-finite center {z:?}")));
    }
    let cw = compass_wigner(&centers, grid).map_err(|e| CliError::from_validation("compass", e))?;

    let mut out = Outputs::default();
    out.add("compass_total.csv", io::write_field(&cw.total));
    out.add("compass_state.csv", io::write_state(&cw.state, "COMPASS"));
    let mut summary = format!("total: integral {:.12e}, |psi|^2 {:.12e}\n", cw.total.integral().re, cw.state.norm_sqr());
    for (i, w) in cw.components.iter().enumerate() {
        out.add(format!("compass_component_{i}.csv"), io::write_field(w));
        let _ = writeln!(summary, "component {i}: integral {:.12e}", w.integral().re);
    }
    for ((i, j), w) in &cw.pair_terms {
        out.add(format!("compass_pair_{i}_{j}.csv"), io::write_field(w));
        let _ = writeln!(summary, "pair {i}-{j}: integral {:+.6e}, max |term| {:.6e}", w.integral().re, w.max_abs());
    }
    Ok(RunReport::ok(out, summary))
}
