//! Runs a validated [`RunConfig`] and writes `report.json`, one CSV family per
//! experiment and `summary.txt`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::compare::{compare, Verdict, VerdictKind};
use super::config::{
    AaStarSpec, BesovSpec, CharacterSpec, CommutatorSpec, EssnormSpec, Experiment, RunConfig,
};
use crate::boundary::{boundary_sup, character_check, BoundaryMaxResult};
use crate::error::{LabError, Result};
use crate::ideal::{hilbert_function, HilbertFunction, HomogeneousIdeal};
use crate::linalg::hermitian_eigenvalues;
use crate::operator::{
    aa_star_residual, commutator_blocks, essential_norm_estimate, schatten_partial_sums, ShiftBlocks,
    SummabilityTrend,
};
use crate::poly::{Polynomial, WeightScheme};

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub workers: Option<usize>,
    pub seed_override: Option<u64>,
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Failed,
}

/// A CSV series written as `<id>_<name>.csv`.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(name: &str, header: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub id: String,
    pub kind: &'static str,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub inputs: serde_json::Value,
    pub sigma: Vec<f64>,
    pub n_max: usize,
    /// Every value here is also in `<id>_headline.csv`.
    pub headline: BTreeMap<String, f64>,
    pub labels: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary: Option<BoundaryMaxResult>,
    pub series: Vec<String>,
    pub warnings: Vec<String>,
    pub wall_time_ms: f64,
    #[serde(skip)]
    tables: Vec<Table>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub d: usize,
    pub sigma: f64,
    pub seed: u64,
    pub ideal: Vec<String>,
    pub warnings: Vec<String>,
    pub experiments: Vec<ExperimentReport>,
}

impl RunReport {
    pub fn failures(&self) -> usize {
        self.experiments.iter().filter(|e| e.status == Status::Failed).count()
    }
}

/// Partial results of one experiment; `error` marks a failure that still
/// left some series behind.
#[derive(Default)]
struct Outcome {
    headline: BTreeMap<String, f64>,
    labels: BTreeMap<String, String>,
    tables: Vec<Table>,
    verdict: Option<Verdict>,
    boundary: Option<BoundaryMaxResult>,
    warnings: Vec<String>,
    error: Option<String>,
}

impl Outcome {
    fn num(&mut self, key: impl Into<String>, v: f64) {
        self.headline.insert(key.into(), v);
    }

    fn label(&mut self, key: impl Into<String>, v: impl Into<String>) {
        self.labels.insert(key.into(), v.into());
    }
}

fn cache_key(sigma: f64) -> u64 {
    sigma.to_bits()
}

struct Context<'a> {
    cfg: &'a RunConfig,
    ideal: HomogeneousIdeal,
    seed: u64,
    cache: HashMap<u64, std::result::Result<Arc<ShiftBlocks>, String>>,
}

impl Context<'_> {
    fn shifts(&self, sigma: f64, n_max: usize) -> Result<Arc<ShiftBlocks>> {
        match self.cache.get(&cache_key(sigma)) {
            Some(Ok(s)) if s.n_max() >= n_max => Ok(s.clone()),
            Some(Ok(s)) => Err(LabError::DegreeOverflow {
                requested: n_max,
                n_max: s.n_max(),
            }),
            Some(Err(e)) => Err(LabError::InvalidArgument(format!("block cache for sigma = {sigma}: {e}"))),
            None => Err(LabError::InvalidArgument(format!("no block cache for sigma = {sigma}"))),
        }
    }
}

/// Shortest round-trip text, in exponent form for very small or large values.
fn fmt(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && a.is_finite() && !(1e-3..1e15).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

/// Runs every experiment of `cfg` and writes the outputs. The returned report
/// lists per-experiment status; only configuration and I/O problems are
/// errors.
pub fn run(cfg: &RunConfig, opts: &RunOptions) -> Result<(RunReport, PathBuf)> {
    let warnings = cfg.validate()?;
    let out_dir = opts.out.clone().unwrap_or_else(|| cfg.output_dir.clone());
    let workers = opts.workers.or(cfg.workers);
    if workers == Some(0) {
        return Err(LabError::Config("workers must be positive".into()));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| LabError::InvalidArgument(format!("cannot start worker pool: {e}")))?;

    let report = pool.install(|| execute(cfg, opts, warnings))?;
    write_outputs(&report, &out_dir)?;
    Ok((report, out_dir))
}

pub fn run_path(path: &Path, opts: &RunOptions) -> Result<(RunReport, PathBuf)> {
    run(&RunConfig::load(path)?, opts)
}

fn execute(cfg: &RunConfig, opts: &RunOptions, warnings: Vec<String>) -> Result<RunReport> {
    let ideal = cfg.ideal()?;
    let seed = opts.seed_override.unwrap_or(cfg.seed);

    // one cache per sigma, deep enough for every experiment using it
    let mut needs: BTreeMap<u64, (f64, usize)> = BTreeMap::new();
    for e in &cfg.experiments {
        let n = e.n_max(cfg.d)?;
        for s in e.sigmas(cfg.sigma) {
            let entry = needs.entry(cache_key(s)).or_insert((s, 0));
            entry.1 = entry.1.max(n);
        }
    }
    let built: Vec<(u64, std::result::Result<Arc<ShiftBlocks>, String>)> = needs
        .par_iter()
        .map(|(&key, &(sigma, n_max))| {
            let blocks = WeightScheme::new(sigma, cfg.d)
                .and_then(|w| ShiftBlocks::build(&ideal, w, n_max, cfg.rank_tol))
                .map(Arc::new)
                .map_err(|e| e.to_string());
            (key, blocks)
        })
        .collect();
    let ctx = Context {
        cfg,
        ideal: ideal.clone(),
        seed,
        cache: built.into_iter().collect(),
    };

    let experiments = cfg
        .experiments
        .par_iter()
        .map(|e| run_experiment(&ctx, e))
        .collect();

    Ok(RunReport {
        schema_version: cfg.schema_version,
        d: cfg.d,
        sigma: cfg.sigma,
        seed,
        ideal: ideal.generators().iter().map(|g| g.to_polynomial().to_string()).collect(),
        warnings,
        experiments,
    })
}

fn run_experiment(ctx: &Context, e: &Experiment) -> ExperimentReport {
    let start = Instant::now();
    let n_max = e.n_max(ctx.cfg.d).unwrap_or(0);
    let result = match e {
        Experiment::Essnorm(s) => essnorm(ctx, s, n_max),
        Experiment::Commutator(s) => commutator(ctx, s, n_max),
        Experiment::Besov(s) => besov(ctx, s, n_max),
        Experiment::Character(s) => character(ctx, s, n_max),
        Experiment::Aastar(s) => aastar(ctx, s, n_max),
    };
    let mut outcome = result.unwrap_or_else(|err| Outcome {
        error: Some(err.to_string()),
        ..Default::default()
    });

    let mut headline_table = Table::new("headline", &["key", "value"]);
    for (k, v) in &outcome.headline {
        headline_table.push(vec![k.clone(), fmt(*v)]);
    }
    for (k, v) in &outcome.labels {
        headline_table.push(vec![k.clone(), v.clone()]);
    }
    outcome.tables.insert(0, headline_table);

    let inputs = match e {
        Experiment::Essnorm(s) => serde_json::to_value(s),
        Experiment::Commutator(s) => serde_json::to_value(s),
        Experiment::Besov(s) => serde_json::to_value(s),
        Experiment::Character(s) => serde_json::to_value(s),
        Experiment::Aastar(s) => serde_json::to_value(s),
    }
    .unwrap_or(serde_json::Value::Null);

    ExperimentReport {
        id: e.id().to_string(),
        kind: e.kind(),
        status: if outcome.error.is_some() { Status::Failed } else { Status::Ok },
        error: outcome.error,
        inputs,
        sigma: e.sigmas(ctx.cfg.sigma),
        n_max,
        headline: outcome.headline,
        labels: outcome.labels,
        verdict: outcome.verdict,
        boundary: outcome.boundary,
        series: outcome
            .tables
            .iter()
            .map(|t| format!("{}_{}.csv", e.id(), t.name))
            .collect(),
        warnings: outcome.warnings,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        tables: outcome.tables,
    }
}

fn essnorm(ctx: &Context, spec: &EssnormSpec, n_max: usize) -> Result<Outcome> {
    let shifts = ctx.shifts(ctx.cfg.sigma, n_max)?;
    let p = spec.symbol(ctx.cfg.d)?;
    let mut out = Outcome::default();

    let trace = essential_norm_estimate(&shifts, &p, &spec.windows(&p))?;
    let mut grid = Table::new("grid", &["m", "M", "f"]);
    for w in &trace.grid {
        grid.push(vec![w.m.to_string(), w.big_m.to_string(), fmt(w.f)]);
    }
    out.tables.push(grid);
    out.num("estimate", trace.estimate);
    out.num("estimate_m", trace.estimate_window.0 as f64);
    out.num("estimate_M", trace.estimate_window.1 as f64);
    for v in &trace.violations {
        out.warnings.push(format!(
            "{}: f{:?} vs f{:?} off by {:e}",
            v.law, v.smaller, v.larger, v.excess
        ));
    }

    let mut opt = spec.optimizer.clone().unwrap_or_default();
    opt.seed = ctx.seed;
    match boundary_sup(&p, &ctx.ideal, &opt) {
        Ok(b) => {
            let mut pts = Table::new("boundary", &["coordinate", "re", "im"]);
            for (k, (re, im)) in b.point.iter().enumerate() {
                pts.push(vec![k.to_string(), fmt(*re), fmt(*im)]);
            }
            out.tables.push(pts);
            out.num("boundary_sup", b.value);
            out.num("sphere_residual", b.sphere_residual);
            out.num("variety_residual", b.variety_residual);
            out.num("starts", b.stats.starts as f64);
            out.num("converged", b.stats.converged as f64);
            out.num("basins", b.stats.basins as f64);

            let tol = spec.tolerance.unwrap_or(ctx.cfg.tolerances.essnorm);
            let mut verdict = compare(trace.estimate, b.value, tol);
            if verdict.verdict == VerdictKind::Violation {
                verdict.grid = Some(trace.grid.clone());
            }
            out.num("abs_gap", verdict.abs_gap);
            out.num("rel_gap", verdict.rel_gap);
            out.label("verdict", kebab(&verdict.verdict));
            if let Some(a) = &verdict.advice {
                out.warnings.push(a.clone());
            }
            out.verdict = Some(verdict);
            out.boundary = Some(b);
        }
        Err(e) => out.error = Some(e.to_string()),
    }
    Ok(out)
}

fn kebab<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn commutator(ctx: &Context, spec: &CommutatorSpec, n_max: usize) -> Result<Outcome> {
    let shifts = ctx.shifts(ctx.cfg.sigma, n_max)?;
    let (lo, hi) = spec.degrees;
    let spectrum = commutator_blocks(&shifts, spec.i, spec.j, lo..=hi)?;
    let zero = ctx.cfg.tolerances.commutator_zero;
    let mut out = Outcome::default();

    let mut blocks = Table::new("blocks", &["n", "norm", "rank", "frobenius_sq"]);
    for (n, s) in spectrum.degrees.iter().zip(&spectrum.singular_values) {
        let top = s.first().copied().unwrap_or(0.0);
        let rank = s.iter().filter(|x| **x > zero).count();
        let fro: f64 = s.iter().map(|x| x * x).sum();
        blocks.push(vec![n.to_string(), fmt(top), rank.to_string(), fmt(fro)]);
    }
    out.tables.push(blocks);

    let fit = spec.fit.unwrap_or((lo.max(1), hi));
    let tail = spectrum.max_norm_over(fit.0..=fit.1);
    out.num("max_norm_in_fit_range", tail);
    out.num("leakage", spectrum.leakage);
    match spectrum.norm_slope(fit.0..=fit.1) {
        Some(s) if tail > zero => out.num("norm_slope", s),
        _ => out.label("norm_slope", "undefined (blocks vanish)"),
    }

    let series = schatten_partial_sums(&spectrum, &spec.exponents, hi)?;
    let mut table = Table::new("schatten", &["p", "n", "sum", "increment", "slope"]);
    for s in &series {
        for r in &s.rows {
            table.push(vec![
                fmt(s.p),
                r.n.to_string(),
                fmt(r.sum),
                fmt(r.increment),
                r.slope.map(fmt).unwrap_or_default(),
            ]);
        }
        let last = s.rows.last();
        out.num(format!("schatten_sum_p{}", s.p), s.last_sum());
        let slope = last.and_then(|r| r.slope).filter(|_| tail > zero);
        if let Some(v) = slope {
            out.num(format!("increment_slope_p{}", s.p), v);
        }
        out.label(format!("trend_p{}", s.p), kebab(&SummabilityTrend::from_slope(slope)));
    }
    out.tables.push(table);
    if spectrum.leakage > zero {
        out.warnings.push(format!("cross-degree leakage {:e}", spectrum.leakage));
    }
    Ok(out)
}

fn besov(ctx: &Context, spec: &BesovSpec, n_max: usize) -> Result<Outcome> {
    let d = ctx.cfg.d;
    let tol = ctx.cfg.tolerances.defect;
    let zero_ideal = ctx.ideal.is_zero();
    let mut out = Outcome::default();
    let mut table = Table::new(
        "defects",
        &["sigma", "n", "dim", "row_min", "row_max", "row_expected", "col_min", "col_max", "col_expected"],
    );
    let mut worst_row = 0.0f64;
    let mut worst_col = 0.0f64;
    for sigma in spec.sigmas.clone().unwrap_or_else(|| vec![ctx.cfg.sigma]) {
        let shifts = ctx.shifts(sigma, n_max)?;
        for n in 0..=spec.degree {
            let dim = shifts.dim(n);
            if dim == 0 {
                continue;
            }
            let nf = n as f64;
            let row_expected = if n == 0 { 1.0 } else { (2.0 * sigma - 1.0) / (nf + 2.0 * sigma - 1.0) };
            let row = hermitian_eigenvalues(&shifts.row_defect_block(n)?);
            let col = hermitian_eigenvalues(&shifts.column_defect_block(n)?);
            let (rmin, rmax) = (row[0], row[row.len() - 1]);
            let (cmin, cmax) = (col[0], col[col.len() - 1]);
            worst_row = worst_row.max((rmin - row_expected).abs()).max((rmax - row_expected).abs());
            let col_expected = zero_ideal.then(|| 1.0 - (nf + d as f64) / (nf + 2.0 * sigma));
            if let Some(c) = col_expected {
                worst_col = worst_col.max((cmin - c).abs()).max((cmax - c).abs());
            }
            table.push(vec![
                fmt(sigma),
                n.to_string(),
                dim.to_string(),
                fmt(rmin),
                fmt(rmax),
                fmt(row_expected),
                fmt(cmin),
                fmt(cmax),
                col_expected.map(fmt).unwrap_or_default(),
            ]);
        }
    }
    out.tables.push(table);
    out.num("max_row_deviation", worst_row);
    if zero_ideal {
        out.num("max_col_deviation", worst_col);
    }
    let pass = worst_row <= tol && worst_col <= tol;
    out.label("identities", if pass { "hold" } else { "deviate" });
    if !pass {
        out.warnings.push(format!("defect deviation above {tol:e}"));
    }
    Ok(out)
}

fn character(ctx: &Context, spec: &CharacterSpec, n_max: usize) -> Result<Outcome> {
    let shifts = ctx.shifts(ctx.cfg.sigma, n_max)?;
    let p = Polynomial::from_records(ctx.cfg.d, &spec.p)?;
    let r = character_check(&shifts, &p, &spec.point(), spec.degree)?;
    let mut out = Outcome::default();
    let mut table = Table::new(
        "character",
        &["state_re", "state_im", "point_re", "point_im", "discrepancy", "operator_norm", "kernel_tail_bound", "projected_norm_sq"],
    );
    table.push(vec![
        fmt(r.state_value.re),
        fmt(r.state_value.im),
        fmt(r.point_value.re),
        fmt(r.point_value.im),
        fmt(r.discrepancy),
        fmt(r.operator_norm),
        fmt(r.kernel_tail_bound),
        fmt(r.projected_norm_sq),
    ]);
    out.tables.push(table);
    out.num("state_re", r.state_value.re);
    out.num("state_im", r.state_value.im);
    out.num("point_re", r.point_value.re);
    out.num("point_im", r.point_value.im);
    out.num("discrepancy", r.discrepancy);
    out.num("operator_norm", r.operator_norm);
    out.label("point_inequality", if r.lower_bound_holds { "holds" } else { "fails" });
    if r.discrepancy > ctx.cfg.tolerances.character {
        out.warnings.push(format!("discrepancy {:e} above tolerance", r.discrepancy));
    }
    Ok(out)
}

fn aastar(ctx: &Context, spec: &AaStarSpec, n_max: usize) -> Result<Outcome> {
    let shifts = ctx.shifts(ctx.cfg.sigma, n_max)?;
    let mut out = Outcome::default();
    let mut table = Table::new("fits", &["k", "residual", "dictionary_size", "gram_rank", "window_lo", "window_hi"]);
    let mut ks = spec.k.clone();
    ks.sort_unstable();
    ks.dedup();
    let fits = ks
        .par_iter()
        .map(|&k| aa_star_residual(&shifts, spec.i, spec.j, k, spec.big_m))
        .collect::<Result<Vec<_>>>()?;
    for f in &fits {
        table.push(vec![
            f.k.to_string(),
            fmt(f.residual),
            f.dictionary_size.to_string(),
            f.gram_rank.to_string(),
            f.window.0.to_string(),
            f.window.1.to_string(),
        ]);
        out.num(format!("residual_k{}", f.k), f.residual);
    }
    out.tables.push(table);
    let monotone = fits.windows(2).all(|w| w[1].residual <= w[0].residual + 1e-12);
    out.label("non_increasing_in_k", if monotone { "yes" } else { "no" });
    Ok(out)
}

fn write_table(path: &Path, t: &Table) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(&t.header)?;
    for r in &t.rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

fn write_outputs(report: &RunReport, out_dir: &Path) -> Result<()> {
    std::fs::create_dir_all(out_dir)?;
    for e in &report.experiments {
        for (t, name) in e.tables.iter().zip(&e.series) {
            write_table(&out_dir.join(name), t)?;
        }
    }
    let json = serde_json::to_string_pretty(report)?;
    std::fs::write(out_dir.join("report.json"), json + "\n")?;
    std::fs::write(out_dir.join("summary.txt"), summary(report))?;
    Ok(())
}

/// Human-readable digest. Numbers are printed exactly as in the headline
/// CSVs.
pub fn summary(report: &RunReport) -> String {
    let mut s = String::new();
    let ideal = if report.ideal.is_empty() {
        "{0}".to_string()
    } else {
        format!("({})", report.ideal.join(", "))
    };
    let _ = writeln!(s, "d = {}, sigma = {}, seed = {}, I = {ideal}", report.d, report.sigma, report.seed);
    let _ = writeln!(
        s,
        "{} experiments, {} failed",
        report.experiments.len(),
        report.failures()
    );
    for w in &report.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    for e in &report.experiments {
        let status = match e.status {
            Status::Ok => "ok",
            Status::Failed => "FAILED",
        };
        let _ = writeln!(s, "\n[{status}] {} ({})", e.id, e.kind);
        if let Some(err) = &e.error {
            let _ = writeln!(s, "  error: {err}");
        }
        for (k, v) in &e.headline {
            let _ = writeln!(s, "  {k} = {}", fmt(*v));
        }
        for (k, v) in &e.labels {
            let _ = writeln!(s, "  {k}: {v}");
        }
        for w in &e.warnings {
            let _ = writeln!(s, "  warning: {w}");
        }
    }
    s
}

/// Hilbert-function table for the configured ideal.
pub fn dims(cfg: &RunConfig) -> Result<HilbertFunction> {
    cfg.validate()?;
    let n_max = match cfg.n_max {
        Some(n) => n,
        None => cfg
            .experiments
            .iter()
            .map(|e| e.n_max(cfg.d))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .max()
            .unwrap_or(20),
    };
    Ok(hilbert_function(&cfg.ideal()?, n_max, cfg.rank_tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> RunConfig {
        RunConfig::from_toml(text).unwrap()
    }

    #[test]
    fn empty_experiment_list() {
        let dir = tempfile::tempdir().unwrap();
        let c = cfg("schema_version = 1\nd = 2\n");
        let opts = RunOptions {
            out: Some(dir.path().to_path_buf()),
            ..Default::default()
        };
        let (report, _) = run(&c, &opts).unwrap();
        assert!(report.experiments.is_empty());
        assert!(dir.path().join("report.json").exists());
        assert!(dir.path().join("summary.txt").exists());
    }

    #[test]
    fn z1_essnorm_report() {
        let dir = tempfile::tempdir().unwrap();
        let c = cfg(r#"
schema_version = 1
d = 2
[[experiments]]
kind = "essnorm"
id = "z1"
p = [{ exp = [1, 0], re = 1.0 }]
schedule = [[10, 30], [20, 40]]
optimizer = { starts = 8 }
"#);
        let opts = RunOptions {
            out: Some(dir.path().to_path_buf()),
            ..Default::default()
        };
        let (report, _) = run(&c, &opts).unwrap();
        let e = &report.experiments[0];
        assert_eq!(e.status, Status::Ok, "{:?}", e.error);
        assert!((e.headline["estimate"] - 1.0).abs() < 1e-12);
        assert!((e.headline["boundary_sup"] - 1.0).abs() < 1e-12);
        assert!(e.headline["abs_gap"] <= 1e-10);
        assert_eq!(e.labels["verdict"], "match");
        for name in &e.series {
            assert!(dir.path().join(name).exists(), "{name}");
        }
    }

    #[test]
    fn failure_is_isolated() {
        // (z1, z2) has no boundary; the essnorm experiment fails, the besov one runs
        let dir = tempfile::tempdir().unwrap();
        let c = cfg(r#"
schema_version = 1
d = 2
[ideal]
generators = [[{ exp = [1, 0], re = 1.0 }], [{ exp = [0, 1], re = 1.0 }]]
[[experiments]]
kind = "essnorm"
id = "e"
p = [{ exp = [1, 0], re = 1.0 }]
schedule = [[2, 6]]
optimizer = { starts = 2, seed_attempts = 2 }
[[experiments]]
kind = "besov"
id = "b"
degree = 3
"#);
        let opts = RunOptions {
            out: Some(dir.path().to_path_buf()),
            workers: Some(2),
            ..Default::default()
        };
        let (report, _) = run(&c, &opts).unwrap();
        assert_eq!(report.failures(), 1);
        assert_eq!(report.experiments[0].status, Status::Failed);
        assert!(report.experiments[0].error.as_ref().unwrap().contains("not located"));
        assert_eq!(report.experiments[1].status, Status::Ok);
    }
}
