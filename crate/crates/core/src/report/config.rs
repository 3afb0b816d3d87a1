//! TOML run configuration.
//!
//! ```toml
//! schema_version = 1
//! d = 2
//! sigma = 0.5
//! seed = 42
//!
//! [ideal]
//! generators = [[{ exp = [1, 1], re = 1.0 }]]
//!
//! [[experiments]]
//! kind = "essnorm"
//! id = "sum"
//! p = [{ exp = [1, 0], re = 1.0 }, { exp = [0, 1], re = 1.0 }]
//! ```
//!
//! Coordinates (`i`, `j`) are 0-based. Every experiment may set `n_max`, the
//! top degree of the shared block cache it needs; when omitted it is inferred
//! from the experiment's own degrees.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::boundary::OptimizerConfig;
use crate::error::{LabError, Result};
use crate::ideal::{HomogeneousIdeal, DEFAULT_RANK_TOL};
use crate::operator::default_schedule;
use crate::poly::{Complex, PolyMatrix, Polynomial, TermRecord};

pub const SCHEMA_VERSION: u32 = 1;

fn default_sigma() -> f64 {
    0.5
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_rank_tol() -> f64 {
    DEFAULT_RANK_TOL
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub d: usize,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default = "default_rank_tol")]
    pub rank_tol: f64,
    /// Top degree for `dims`; experiments infer their own.
    #[serde(default)]
    pub n_max: Option<usize>,
    #[serde(default)]
    pub ideal: IdealConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub experiments: Vec<Experiment>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealConfig {
    #[serde(default)]
    pub generators: Vec<Vec<TermRecord>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative gap between essential estimate and boundary sup.
    pub essnorm: f64,
    /// Largest commutator block norm still counted as zero.
    pub commutator_zero: f64,
    /// Largest accepted `|⟨p(S)v, v⟩ - p(λ)|`.
    pub character: f64,
    /// Largest accepted deviation from the Besov defect formulas.
    pub defect: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            essnorm: 0.01,
            commutator_zero: 1e-10,
            character: 1e-6,
            defect: 1e-10,
        }
    }
}

/// A matrix-valued polynomial, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSpec {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<TermRecord>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Experiment {
    Essnorm(EssnormSpec),
    Commutator(CommutatorSpec),
    Besov(BesovSpec),
    Character(CharacterSpec),
    Aastar(AaStarSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EssnormSpec {
    pub id: String,
    /// Scalar symbol; exactly one of `p` and `matrix` must be given.
    #[serde(default)]
    pub p: Option<Vec<TermRecord>>,
    #[serde(default)]
    pub matrix: Option<MatrixSpec>,
    /// `(m, M)` windows; defaults to the standard schedule for `deg p`.
    #[serde(default)]
    pub schedule: Option<Vec<(usize, usize)>>,
    #[serde(default)]
    pub n_max: Option<usize>,
    #[serde(default)]
    pub optimizer: Option<OptimizerConfig>,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommutatorSpec {
    pub id: String,
    pub i: usize,
    pub j: usize,
    /// Inclusive degree range.
    pub degrees: (usize, usize),
    #[serde(default = "default_exponents")]
    pub exponents: Vec<f64>,
    /// Degree range for the block-norm slope fit; defaults to `degrees`.
    #[serde(default)]
    pub fit: Option<(usize, usize)>,
    #[serde(default)]
    pub n_max: Option<usize>,
}

fn default_exponents() -> Vec<f64> {
    vec![1.0, 2.0]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BesovSpec {
    pub id: String,
    /// Defects are tabulated for degrees `0..=degree`.
    pub degree: usize,
    /// Weights to sweep; defaults to the run's `sigma`.
    #[serde(default)]
    pub sigmas: Option<Vec<f64>>,
    #[serde(default)]
    pub n_max: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterSpec {
    pub id: String,
    pub p: Vec<TermRecord>,
    /// `(re, im)` per coordinate.
    pub lambda: Vec<(f64, f64)>,
    /// Truncation degree of the kernel vector.
    pub degree: usize,
    #[serde(default)]
    pub n_max: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AaStarSpec {
    pub id: String,
    pub i: usize,
    pub j: usize,
    #[serde(default = "default_ks")]
    pub k: Vec<usize>,
    /// Truncation window `[0, M]`.
    pub big_m: usize,
    #[serde(default)]
    pub n_max: Option<usize>,
}

fn default_ks() -> Vec<usize> {
    vec![1, 2, 3]
}

impl Experiment {
    pub fn id(&self) -> &str {
        match self {
            Experiment::Essnorm(e) => &e.id,
            Experiment::Commutator(e) => &e.id,
            Experiment::Besov(e) => &e.id,
            Experiment::Character(e) => &e.id,
            Experiment::Aastar(e) => &e.id,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Experiment::Essnorm(_) => "essnorm",
            Experiment::Commutator(_) => "commutator",
            Experiment::Besov(_) => "besov",
            Experiment::Character(_) => "character",
            Experiment::Aastar(_) => "aastar",
        }
    }

    fn explicit_n_max(&self) -> Option<usize> {
        match self {
            Experiment::Essnorm(e) => e.n_max,
            Experiment::Commutator(e) => e.n_max,
            Experiment::Besov(e) => e.n_max,
            Experiment::Character(e) => e.n_max,
            Experiment::Aastar(e) => e.n_max,
        }
    }

    /// Highest degree the experiment touches.
    pub fn required_degree(&self, d: usize) -> Result<usize> {
        Ok(match self {
            Experiment::Essnorm(e) => {
                let p = e.symbol(d)?;
                e.windows(&p).iter().map(|w| w.1).max().unwrap_or(0)
            }
            Experiment::Commutator(e) => e.degrees.1 + 1,
            Experiment::Besov(e) => e.degree + 1,
            Experiment::Character(e) => {
                e.degree + Polynomial::from_records(d, &e.p)?.degree().unwrap_or(0)
            }
            Experiment::Aastar(e) => e.big_m,
        })
    }

    /// Cache degree used for this experiment.
    pub fn n_max(&self, d: usize) -> Result<usize> {
        let need = self.required_degree(d)?;
        match self.explicit_n_max() {
            Some(n) if n < need => Err(LabError::DegreeOverflow {
                requested: need,
                n_max: n,
            }),
            Some(n) => Ok(n),
            None => Ok(need),
        }
    }

    /// Weights the experiment runs at.
    pub fn sigmas(&self, run_sigma: f64) -> Vec<f64> {
        match self {
            Experiment::Besov(b) => b.sigmas.clone().unwrap_or_else(|| vec![run_sigma]),
            _ => vec![run_sigma],
        }
    }
}

impl EssnormSpec {
    pub fn symbol(&self, d: usize) -> Result<PolyMatrix> {
        match (&self.p, &self.matrix) {
            (Some(p), None) => Ok(PolyMatrix::scalar(Polynomial::from_records(d, p)?)),
            (None, Some(m)) => {
                let entries = m
                    .entries
                    .iter()
                    .map(|e| Polynomial::from_records(d, e))
                    .collect::<Result<Vec<_>>>()?;
                PolyMatrix::new(m.rows, m.cols, entries)
            }
            _ => Err(LabError::Config(format!(
                "experiment {:?}: give exactly one of `p` and `matrix`",
                self.id
            ))),
        }
    }

    pub fn windows(&self, p: &PolyMatrix) -> Vec<(usize, usize)> {
        self.schedule.clone().unwrap_or_else(|| default_schedule(p.degree()))
    }
}

impl CharacterSpec {
    pub fn point(&self) -> Vec<Complex> {
        self.lambda.iter().map(|&(re, im)| Complex::new(re, im)).collect()
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| LabError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn ideal(&self) -> Result<HomogeneousIdeal> {
        let gens = self
            .ideal
            .generators
            .iter()
            .map(|g| Polynomial::from_records(self.d, g))
            .collect::<Result<Vec<_>>>()?;
        HomogeneousIdeal::from_polynomials(self.d, gens)
    }

    /// Checks everything that can be checked without computing. Returns
    /// warnings on success.
    pub fn validate(&self) -> Result<Vec<String>> {
        let mut warnings = Vec::new();
        if self.schema_version != SCHEMA_VERSION {
            return Err(LabError::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.d < 2 {
            return Err(LabError::DimensionTooSmall(self.d));
        }
        if !(self.sigma > 0.0) {
            return Err(LabError::NonPositiveSigma(self.sigma));
        }
        if !(self.rank_tol > 0.0 && self.rank_tol < 1.0) {
            return Err(LabError::Config(format!("rank_tol {} must lie in (0, 1)", self.rank_tol)));
        }
        if self.workers == Some(0) {
            return Err(LabError::Config("workers must be positive".into()));
        }
        self.ideal()?;

        let mut seen = BTreeSet::new();
        for e in &self.experiments {
            let id = e.id();
            if id.is_empty() || !id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
                return Err(LabError::Config(format!(
                    "experiment id {id:?} must be nonempty and use only letters, digits, '_' and '-'"
                )));
            }
            if !seen.insert(id.to_string()) {
                return Err(LabError::Config(format!("duplicate experiment id {id:?}")));
            }
            for s in e.sigmas(self.sigma) {
                if !(s > 0.0) {
                    return Err(LabError::NonPositiveSigma(s));
                }
                if s < 0.5 {
                    warnings.push(format!(
                        "{id}: sigma = {s} < 1/2 is outside the range where the character identities are proved"
                    ));
                }
            }
            e.n_max(self.d).map_err(|err| LabError::Config(format!("{id}: {err}")))?;
            self.validate_experiment(e).map_err(|err| match err {
                LabError::Config(m) => LabError::Config(m),
                other => LabError::Config(format!("{id}: {other}")),
            })?;
        }
        Ok(warnings)
    }

    fn validate_experiment(&self, e: &Experiment) -> Result<()> {
        let coord = |k: usize| {
            if k >= self.d {
                Err(LabError::CoordinateOutOfRange { index: k, d: self.d })
            } else {
                Ok(())
            }
        };
        match e {
            Experiment::Essnorm(s) => {
                let p = s.symbol(self.d)?;
                if p.is_zero() {
                    return Err(LabError::InvalidArgument("symbol must be nonzero".into()));
                }
                let windows = s.windows(&p);
                if windows.is_empty() {
                    return Err(LabError::InvalidArgument("empty window schedule".into()));
                }
                for &(m, big_m) in &windows {
                    if big_m < m + 2 * p.degree() {
                        return Err(LabError::InvalidWindow {
                            m,
                            big_m,
                            reason: format!("need M - m >= 2 deg p = {}", 2 * p.degree()),
                        });
                    }
                }
                if let Some(t) = s.tolerance {
                    if !(t >= 0.0) {
                        return Err(LabError::InvalidArgument("tolerance must be nonnegative".into()));
                    }
                }
            }
            Experiment::Commutator(s) => {
                coord(s.i)?;
                coord(s.j)?;
                if s.degrees.0 > s.degrees.1 {
                    return Err(LabError::InvalidArgument("degree range is empty".into()));
                }
                if s.exponents.iter().any(|p| !(*p > 0.0)) {
                    return Err(LabError::InvalidArgument("Schatten exponents must be positive".into()));
                }
            }
            Experiment::Besov(_) => {}
            Experiment::Character(s) => {
                if s.lambda.len() != self.d {
                    return Err(LabError::DimensionMismatch {
                        expected: self.d,
                        found: s.lambda.len(),
                    });
                }
                Polynomial::from_records(self.d, &s.p)?;
                let r: f64 = s.point().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if r >= 1.0 {
                    return Err(LabError::OutsideBall(r));
                }
                let residual = self.ideal()?.residual(&s.point());
                if residual > 1e-10 {
                    return Err(LabError::Infeasible(residual));
                }
            }
            Experiment::Aastar(s) => {
                coord(s.i)?;
                coord(s.j)?;
                if s.k.is_empty() || s.k.contains(&0) {
                    return Err(LabError::InvalidArgument("k values must be positive".into()));
                }
                let kmax = *s.k.iter().max().unwrap();
                if s.big_m < 2 * kmax + 2 {
                    return Err(LabError::InvalidWindow {
                        m: 0,
                        big_m: s.big_m,
                        reason: format!("need M >= 2k + 2 = {}", 2 * kmax + 2),
                    });
                }
            }
        }
        Ok(())
    }
}
