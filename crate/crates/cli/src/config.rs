//! TOML run configuration. Unknown keys anywhere are rejected.

use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use phasewig_core::evolve::{HamiltonianSpec, Scheme};
use phasewig_core::states::{gaussian_coherent, hermite_basis, random_superposition, RandomStateOptions};
use phasewig_core::{GridSpec, Observable, PhaseSpacePoint, WaveFunction};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::error::{CliError, CliResult};
use crate::io;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridConfig,
    pub wigner: Option<WignerConfig>,
    pub weakvalue: Option<WeakValueConfig>,
    pub analytic: Option<AnalyticConfig>,
    pub evolve: Option<EvolveConfig>,
    pub reconstruct: Option<ReconstructConfig>,
    pub compass: Option<CompassConfig>,
    pub selftest: Option<SelftestConfig>,
    /// Directory that relative paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "L")]
    pub l: f64,
    pub hbar: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { m: 512, l: 10.0, hbar: 1.0 }
    }
}

/// A wavefunction on the configured grid.
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    /// `T(z) xi0` for `z = [x, p]`.
    Coherent([f64; 2]),
    /// Harmonic-oscillator eigenfunction of the given order.
    Hermite(usize),
    /// A state file.
    File(PathBuf),
    Superposition(Vec<Term>),
    /// Random coherent superposition drawn from the `--seed` stream.
    Random {
        #[serde(default = "default_components")]
        components: usize,
        #[serde(default = "default_radius")]
        radius: f64,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub state: StateSpec,
    /// `[re, im]`
    #[serde(default = "default_coeff")]
    pub coeff: [f64; 2],
}

fn default_components() -> usize {
    3
}

fn default_radius() -> f64 {
    1.5
}

fn default_coeff() -> [f64; 2] {
    [1.0, 0.0]
}

fn default_one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ObservableSpec {
    /// `(a, b, c)` triples for `c x^a p^b`.
    Poly(Vec<(u32, u32, f64)>),
    /// Field file holding the real symbol.
    Sampled(PathBuf),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum HamiltonianConfig {
    Free { mass: f64 },
    Harmonic { mass: f64, omega: f64 },
    /// `p^2 / 2m + V(x)` with `V` read from a potential file.
    Potential { mass: f64, file: PathBuf },
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeConfig {
    #[default]
    SplitStep,
    ExactHarmonic,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WignerConfig {
    pub state: StateSpec,
    /// When given, `W(partner, state)` is computed instead of `W(state)`.
    pub partner: Option<StateSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeakValueConfig {
    /// Pre-selected state `psi`.
    pub pre: StateSpec,
    /// Post-selected state `phi`.
    pub post: StateSpec,
    pub observable: ObservableSpec,
    /// Also write the quasi-probability field.
    #[serde(default)]
    pub write_rho: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyticConfig {
    /// Antipodal half-separation `(x_1..x_n, p_1..p_n)`.
    pub z0: Vec<f64>,
    /// Evaluation points, same layout as `z0`.
    #[serde(default)]
    pub points: Vec<Vec<f64>>,
    #[serde(default = "default_one")]
    pub sup_abs: f64,
    /// Optional translation pair for the transport formula.
    pub alpha: Option<Vec<f64>>,
    pub beta: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveConfig {
    pub pre: StateSpec,
    pub post: StateSpec,
    pub hamiltonian: HamiltonianConfig,
    pub t_in: f64,
    pub t_fin: f64,
    pub observable: ObservableSpec,
    pub sample_times: Vec<f64>,
    #[serde(default)]
    pub scheme: SchemeConfig,
    /// Write `W(phi_t)`, `W(psi_t)` and their interference term at this time.
    pub interference_at: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReconstructConfig {
    /// CROSS_WIGNER field file `W(phi, psi)`.
    pub field: PathBuf,
    pub phi: StateSpec,
    pub gamma: StateSpec,
    /// Reference for the alignment residual.
    pub truth: Option<StateSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompassConfig {
    pub centers: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelftestConfig {
    #[serde(default = "default_pairs")]
    pub pairs: usize,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        Self { pairs: default_pairs() }
    }
}

fn default_pairs() -> usize {
    10
}

impl RunConfig {
    pub fn parse(text: &str, base_dir: &Path) -> CliResult<Self> {
        let mut cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.base_dir = base_dir.to_path_buf();
        cfg.grid()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = io::read_text(path)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, &base).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Selftest defaults used when no config file is given.
    pub fn default_selftest() -> Self {
        RunConfig {
            grid: GridConfig::default(),
            wigner: None,
            weakvalue: None,
            analytic: None,
            evolve: None,
            reconstruct: None,
            compass: None,
            selftest: Some(SelftestConfig::default()),
            base_dir: PathBuf::new(),
        }
    }

    pub fn grid(&self) -> CliResult<GridSpec> {
        let g = self.grid;
        GridSpec::new(g.m, g.l, g.hbar).map_err(|e| CliError::Config(format!("[grid] {e}")))
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.base_dir.join(path)
        }
    }

    pub fn section<'a, T>(&self, name: &str, s: &'a Option<T>) -> CliResult<&'a T> {
        s.as_ref().ok_or_else(|| CliError::Config(format!("missing [{name}] section")))
    }
}

/// Turns config values into core objects.
pub struct Builder<'a> {
    pub cfg: &'a RunConfig,
    pub grid: GridSpec,
    pub rng: ChaCha8Rng,
}

fn finite(ctx: &str, xs: &[f64]) -> CliResult<()> {
    match xs.iter().find(|x| !x.is_finite()) {
        Some(x) => Err(CliError::Config(format!("{ctx}: non-finite value {x}"))),
        None => Ok(()),
    }
}

impl<'a> Builder<'a> {
    pub fn new(cfg: &'a RunConfig, seed: u64) -> CliResult<Self> {
        use rand_chacha::rand_core::SeedableRng;
        Ok(Self { cfg, grid: cfg.grid()?, rng: ChaCha8Rng::seed_from_u64(seed) })
    }

    pub fn state(&mut self, ctx: &str, spec: &StateSpec) -> CliResult<WaveFunction> {
        let psi = match spec {
            StateSpec::Coherent([x, p]) => {
                finite(ctx, &[*x, *p])?;
                gaussian_coherent(PhaseSpacePoint::new(*x, *p), self.grid)
                    .map_err(|e| CliError::from_validation(ctx, e))?
            }
            StateSpec::Hermite(n) => hermite_basis(*n, self.grid).map_err(|e| CliError::from_validation(ctx, e))?,
            StateSpec::File(path) => {
                let psi = io::read_state(&self.cfg.resolve(path))?;
                psi.grid().ensure_same(&self.grid).map_err(|e| CliError::from_validation(ctx, e))?;
                psi
            }
            StateSpec::Superposition(terms) => {
                if terms.is_empty() {
                    return Err(CliError::Config(format!("{ctx}: empty superposition")));
                }
                let mut acc = WaveFunction::zeros(self.grid);
                for (i, t) in terms.iter().enumerate() {
                    finite(ctx, &t.coeff)?;
                    let s = self.state(&format!("{ctx}[{i}]"), &t.state)?;
                    acc = acc.combine(C64::new(1.0, 0.0), &s, C64::new(t.coeff[0], t.coeff[1]))?;
                }
                acc
            }
            StateSpec::Random { components, radius } => {
                if *components == 0 || !(radius.is_finite() && *radius >= 0.0) {
                    return Err(CliError::Config(format!("{ctx}: need components >= 1 and a finite radius >= 0")));
                }
                let opts = RandomStateOptions { max_components: *components, center_radius: *radius, normalize: true };
                random_superposition(&mut self.rng, self.grid, opts).map_err(|e| CliError::from_validation(ctx, e))?
            }
        };
        if psi.norm() == 0.0 {
            return Err(CliError::Config(format!("{ctx}: state has zero norm")));
        }
        Ok(psi)
    }

    pub fn observable(&self, ctx: &str, spec: &ObservableSpec) -> CliResult<Observable> {
        match spec {
            ObservableSpec::Poly(terms) => {
                Observable::poly(terms).map_err(|e| CliError::from_validation(ctx, e))
            }
            ObservableSpec::Sampled(path) => {
                let field = io::read_field(&self.cfg.resolve(path))?;
                field.grid().ensure_same(&self.grid).map_err(|e| CliError::from_validation(ctx, e))?;
                Observable::sampled(field).map_err(|e| CliError::from_validation(ctx, e))
            }
        }
    }

    pub fn hamiltonian(&self, ctx: &str, spec: &HamiltonianConfig) -> CliResult<HamiltonianSpec> {
        let h = match spec {
            HamiltonianConfig::Free { mass } => HamiltonianSpec::Free { mass: *mass },
            HamiltonianConfig::Harmonic { mass, omega } => HamiltonianSpec::Harmonic { mass: *mass, omega: *omega },
            HamiltonianConfig::Potential { mass, file } => {
                let path = self.cfg.resolve(file);
                let (grid, potential) = io::read_potential(&path)?;
                grid.ensure_same(&self.grid).map_err(|e| CliError::from_validation(ctx, e))?;
                HamiltonianSpec::Potential { mass: *mass, potential }
            }
        };
        h.validate(&self.grid).map_err(|e| CliError::from_validation(ctx, e))?;
        Ok(h)
    }
}

impl From<SchemeConfig> for Scheme {
    fn from(s: SchemeConfig) -> Self {
        match s {
            SchemeConfig::SplitStep => Scheme::SplitStep,
            SchemeConfig::ExactHarmonic => Scheme::ExactHarmonic,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> CliResult<RunConfig> {
        RunConfig::parse(text, Path::new("."))
    }

    const GRID: &str = "[grid]\nM = 64\nL = 8.0\nhbar = 1.0\n";

    #[test]
    fn parses_every_state_form() {
        let text = format!(
            "{GRID}[wigner]\nstate = {{ superposition = [{{ state = {{ coherent = [1, 0] }} }}, \
             {{ state = {{ hermite = 2 }}, coeff = [0.0, 1.0] }}, {{ state = {{ random = {{ components = 2 }} }} }}] }}\n"
        );
        let cfg = parse(&text).unwrap();
        let mut b = Builder::new(&cfg, 7).unwrap();
        let psi = b.state("wigner.state", &cfg.wigner.as_ref().unwrap().state).unwrap();
        assert!(psi.norm() > 0.0);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(matches!(parse(&format!("{GRID}colour = 1\n")), Err(CliError::Config(_))));
        let e = parse("[grid]\nM = 64\nL = 8.0\nhbar = 1.0\nextra = 2\n").unwrap_err();
        assert!(e.to_string().contains("extra"), "{e}");
        let e = parse(&format!("{GRID}[compass]\ncenters = [[1, 0], [0, 1]]\nradius = 2\n")).unwrap_err();
        assert!(e.to_string().contains("radius"), "{e}");
    }

    #[test]
    fn grid_errors_name_the_field() {
        let e = parse("[grid]\nM = 100\nL = 8.0\nhbar = 1.0\n").unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("[grid] invalid grid: M:"), "{e}");
    }

    #[test]
    fn observable_specs() {
        let cfg = parse(GRID).unwrap();
        let b = Builder::new(&cfg, 0).unwrap();
        assert!(b.observable("a", &ObservableSpec::Poly(vec![(1, 1, 1.0), (2, 0, -0.5)])).is_ok());
        let e = b.observable("a", &ObservableSpec::Poly(vec![(5, 0, 1.0)])).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = b.observable("a", &ObservableSpec::Sampled("/nonexistent/field.csv".into())).unwrap_err();
        assert_eq!(e.exit_code(), 4);
    }

    #[test]
    fn random_states_follow_the_seed() {
        let cfg = parse(GRID).unwrap();
        let spec = StateSpec::Random { components: 3, radius: 1.0 };
        let a = Builder::new(&cfg, 11).unwrap().state("s", &spec).unwrap();
        let b = Builder::new(&cfg, 11).unwrap().state("s", &spec).unwrap();
        let c = Builder::new(&cfg, 12).unwrap().state("s", &spec).unwrap();
        assert_eq!(a.samples(), b.samples());
        assert_ne!(a.samples(), c.samples());
    }
}
