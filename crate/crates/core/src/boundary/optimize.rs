//! `sup_{z ∈ Z(I) ∩ ∂B_d} ‖p̂(z)‖` by multistart projected gradient ascent.
//!
//! The `2d` real coordinates `(Re z, Im z)` are optimized on the unit sphere
//! (retraction by normalization); the variety constraints enter as a
//! quadratic penalty whose weight grows by a fixed factor per stage. Because
//! `I` is homogeneous, `Z(I)` is a cone: seeds come from Newton refinement of
//! random complex points on the generator system followed by normalization,
//! and the final point of every run is pushed back onto the variety the same
//! way before it is scored.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::ideal::HomogeneousIdeal;
use crate::linalg::{top_singular_triplet, CMatrix, CVector};
use crate::poly::{Complex, PolyMatrix, Polynomial};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    pub starts: usize,
    pub seed: u64,
    pub penalty_stages: usize,
    pub penalty_initial: f64,
    pub penalty_growth: f64,
    pub max_iters_per_stage: usize,
    /// Stop a stage when the tangent gradient falls below this.
    pub gradient_tol: f64,
    /// Random complex points tried per start before giving up on a seed.
    pub seed_attempts: usize,
    /// Generator residual accepted as "on the variety".
    pub feasibility_tol: f64,
    /// Extra feasible points scored without optimization.
    pub fallback_samples: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            starts: 64,
            seed: 0,
            penalty_stages: 5,
            penalty_initial: 10.0,
            penalty_growth: 10.0,
            max_iters_per_stage: 400,
            gradient_tol: 1e-12,
            seed_attempts: 20,
            feasibility_tol: 1e-10,
            fallback_samples: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultistartStats {
    pub starts: usize,
    /// Starts that found a feasible seed and ended feasible.
    pub converged: usize,
    /// Distinct final points up to a unimodular phase.
    pub basins: usize,
    pub samples_scored: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryMaxResult {
    /// Real and imaginary parts of the maximizer.
    pub point: Vec<(f64, f64)>,
    /// Largest singular value of `p̂` at `point`.
    pub value: f64,
    /// `| ‖z‖² - 1 |`.
    pub sphere_residual: f64,
    /// `max_j |g_j(z)|`.
    pub variety_residual: f64,
    pub stats: MultistartStats,
}

impl BoundaryMaxResult {
    pub fn point_complex(&self) -> Vec<Complex> {
        self.point.iter().map(|&(re, im)| Complex::new(re, im)).collect()
    }
}

/// Objective pieces shared by every start.
struct Problem<'a> {
    p: &'a PolyMatrix,
    dp: Vec<PolyMatrix>,
    generators: Vec<Polynomial>,
    dg: Vec<Vec<Polynomial>>,
}

impl<'a> Problem<'a> {
    fn new(p: &'a PolyMatrix, ideal: &HomogeneousIdeal) -> Self {
        let d = p.d();
        let generators: Vec<Polynomial> = ideal.generators().iter().map(|g| g.to_polynomial()).collect();
        let dg = generators
            .iter()
            .map(|g| (0..d).map(|k| g.derivative(k)).collect())
            .collect();
        Self {
            p,
            dp: (0..d).map(|k| p.derivative(k)).collect(),
            generators,
            dg,
        }
    }

    fn value(&self, z: &[Complex]) -> f64 {
        top_singular(&self.p.evaluate(z)).0
    }

    fn residual(&self, z: &[Complex]) -> f64 {
        self.generators
            .iter()
            .map(|g| g.evaluate(z).norm())
            .fold(0.0, f64::max)
    }

    /// Penalized objective and its gradient as a complex vector
    /// `∂/∂x_k + i ∂/∂y_k`.
    fn penalized(&self, z: &[Complex], mu: f64) -> (f64, Vec<Complex>) {
        let a = self.p.evaluate(z);
        let (s, u, v) = top_singular(&a);
        let mut grad: Vec<Complex> = self
            .dp
            .iter()
            .map(|dpk| {
                let m = dpk.evaluate(z);
                u.dotc(&(&m * &v)).conj()
            })
            .collect();
        let mut pen = 0.0;
        for (g, dg) in self.generators.iter().zip(&self.dg) {
            let gv = g.evaluate(z);
            pen += gv.norm_sqr();
            for (k, dgk) in dg.iter().enumerate() {
                grad[k] -= gv * dgk.evaluate(z).conj() * (2.0 * mu);
            }
        }
        (s - mu * pen, grad)
    }
}

/// Largest singular value with its singular vectors.
fn top_singular(a: &CMatrix) -> (f64, CVector, CVector) {
    if a.nrows() == 1 && a.ncols() == 1 {
        let x = a[(0, 0)];
        let r = x.norm();
        let phase = if r > 0.0 { x / r } else { Complex::new(1.0, 0.0) };
        return (
            r,
            CVector::from_element(1, phase),
            CVector::from_element(1, Complex::new(1.0, 0.0)),
        );
    }
    top_singular_triplet(a)
}

fn normalize(z: &mut [Complex]) -> f64 {
    let n = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        z.iter_mut().for_each(|c| *c /= n);
    }
    n
}

/// Newton steps `z <- normalize(z - J^+ g(z))` on the generator system.
fn project_to_variety(problem: &Problem, z: &mut Vec<Complex>, tol: f64, iters: usize) -> bool {
    if problem.generators.is_empty() {
        return normalize(z) > 0.0;
    }
    let d = z.len();
    let mut last = f64::INFINITY;
    for _ in 0..iters {
        if normalize(z) == 0.0 {
            return false;
        }
        let g: Vec<Complex> = problem.generators.iter().map(|g| g.evaluate(z)).collect();
        let r = g.iter().map(|x| x.norm()).fold(0.0, f64::max);
        // once feasible, keep stepping only while Newton still pays off
        if r <= tol && (r <= 1e-15 || r > 0.5 * last) {
            return true;
        }
        last = r;
        let jac = DMatrix::from_fn(g.len(), d, |j, k| problem.dg[j][k].evaluate(z));
        let rhs = nalgebra::DVector::from_vec(g);
        let Ok(step) = nalgebra::SVD::new_unordered(jac, true, true).solve(&rhs, 1e-14) else {
            return false;
        };
        for k in 0..d {
            z[k] -= step[k];
        }
    }
    normalize(z) > 0.0 && problem.residual(z) <= tol
}

fn random_point(rng: &mut ChaCha8Rng, d: usize) -> Vec<Complex> {
    (0..d)
        .map(|_| Complex::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect()
}

fn feasible_seed(problem: &Problem, d: usize, rng: &mut ChaCha8Rng, cfg: &OptimizerConfig) -> Option<Vec<Complex>> {
    (0..cfg.seed_attempts.max(1)).find_map(|_| {
        let mut z = random_point(rng, d);
        project_to_variety(problem, &mut z, cfg.feasibility_tol, 100).then_some(z)
    })
}

/// Removes the real-radial component of `g` at `z` on the unit sphere.
fn tangent(g: &[Complex], z: &[Complex]) -> Vec<Complex> {
    let radial: f64 = g.iter().zip(z).map(|(a, b)| (a * b.conj()).re).sum();
    g.iter().zip(z).map(|(a, b)| a - b * radial).collect()
}

/// Backtracking from a growing trial step until the Armijo condition holds,
/// then keeps halving while that still improves the value. `eval` maps a
/// trial step to the new point and its value (or `None` if rejected).
fn line_search<F>(f: f64, slope: f64, step: &mut f64, mut eval: F) -> Option<(Vec<Complex>, f64)>
where
    F: FnMut(f64) -> Option<(Vec<Complex>, f64)>,
{
    *step = (*step * 2.0).min(1e3);
    let mut found = None;
    while *step > 1e-18 {
        if let Some((z, fc)) = eval(*step) {
            if fc >= f + 1e-4 * *step * slope {
                found = Some((z, fc));
                break;
            }
        }
        *step *= 0.5;
    }
    let (mut z, mut fz) = found?;
    loop {
        let half = *step * 0.5;
        match eval(half) {
            Some((zc, fc)) if fc > fz => {
                z = zc;
                fz = fc;
                *step = half;
            }
            _ => break,
        }
    }
    Some((z, fz))
}

/// Projected gradient ascent of the penalized objective on the sphere.
fn ascend(problem: &Problem, z: &mut Vec<Complex>, mu: f64, cfg: &OptimizerConfig) {
    let mut step: f64 = 0.5;
    let (mut f, mut g) = problem.penalized(z, mu);
    for _ in 0..cfg.max_iters_per_stage {
        let t = tangent(&g, z);
        let tnorm2: f64 = t.iter().map(|c| c.norm_sqr()).sum();
        if tnorm2.sqrt() < cfg.gradient_tol {
            break;
        }
        let base = z.clone();
        let found = line_search(f, tnorm2, &mut step, |h| {
            let mut cand: Vec<Complex> = base.iter().zip(&t).map(|(a, b)| a + b * h).collect();
            normalize(&mut cand);
            let fc = problem.penalized(&cand, mu).0;
            Some((cand, fc))
        });
        let Some((zn, fnew)) = found else { break };
        *z = zn;
        f = fnew;
        g = problem.penalized(z, mu).1;
    }
}

/// Ascent along the variety itself: the tangent gradient is projected onto
/// the kernel of the generator Jacobian and every trial point is restored
/// onto `Z(I)` by Newton steps.
fn polish(problem: &Problem, z: &mut Vec<Complex>, cfg: &OptimizerConfig) {
    let d = z.len();
    let mut step: f64 = 0.5;
    let mut f = problem.value(z);
    for _ in 0..cfg.max_iters_per_stage {
        let g = problem.penalized(z, 0.0).1;
        let mut t = tangent(&g, z);
        if !problem.generators.is_empty() {
            let jac = DMatrix::from_fn(problem.generators.len(), d, |j, k| problem.dg[j][k].evaluate(z));
            let tv = nalgebra::DVector::from_vec(t.clone());
            let svd = nalgebra::SVD::new_unordered(jac, false, true);
            let v_t = svd.v_t.expect("requested");
            let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
            let mut proj = tv.clone();
            for (r, &s) in svd.singular_values.iter().enumerate() {
                if s > 1e-10 * smax.max(1e-300) {
                    let row = v_t.row(r).adjoint();
                    let c = row.dotc(&tv);
                    proj -= row * c;
                }
            }
            t = proj.iter().cloned().collect();
        }
        let tnorm2: f64 = t.iter().map(|c| c.norm_sqr()).sum();
        if tnorm2.sqrt() < cfg.gradient_tol {
            break;
        }
        let base = z.clone();
        let found = line_search(f, tnorm2, &mut step, |h| {
            let mut cand: Vec<Complex> = base.iter().zip(&t).map(|(a, b)| a + b * h).collect();
            project_to_variety(problem, &mut cand, cfg.feasibility_tol, 50).then(|| {
                let fc = problem.value(&cand);
                (cand, fc)
            })
        });
        let Some((zn, fnew)) = found else { break };
        *z = zn;
        f = fnew;
    }
}

struct StartOutcome {
    point: Vec<Complex>,
    value: f64,
    converged: bool,
}

fn run_start(problem: &Problem, d: usize, index: usize, cfg: &OptimizerConfig) -> Option<StartOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let mut z = feasible_seed(problem, d, &mut rng, cfg)?;
    let seed_point = z.clone();
    let seed_value = problem.value(&z);

    let stages = if problem.generators.is_empty() { 1 } else { cfg.penalty_stages.max(1) };
    let mut mu = if problem.generators.is_empty() { 0.0 } else { cfg.penalty_initial };
    for _ in 0..stages {
        ascend(problem, &mut z, mu, cfg);
        mu *= cfg.penalty_growth;
    }
    let feasible = project_to_variety(problem, &mut z, cfg.feasibility_tol, 100);
    if feasible {
        polish(problem, &mut z, cfg);
    } else {
        return Some(StartOutcome {
            point: seed_point,
            value: seed_value,
            converged: false,
        });
    }
    let value = problem.value(&z);
    // the seed itself is feasible, never report less than it
    if seed_value > value {
        return Some(StartOutcome {
            point: seed_point,
            value: seed_value,
            converged: true,
        });
    }
    Some(StartOutcome {
        point: z,
        value,
        converged: true,
    })
}

/// Lexicographic order on `(re, im)` pairs.
fn lex_less(a: &[Complex], b: &[Complex]) -> bool {
    for (x, y) in a.iter().zip(b) {
        match x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => return false,
            std::cmp::Ordering::Equal => {}
        }
    }
    false
}

/// Maximizes the largest singular value of `p̂(z)` over `Z(I) ∩ ∂B_d`.
pub fn boundary_sup(p: &PolyMatrix, ideal: &HomogeneousIdeal, cfg: &OptimizerConfig) -> Result<BoundaryMaxResult> {
    let d = ideal.d();
    if p.d() != d {
        return Err(LabError::DimensionMismatch { expected: d, found: p.d() });
    }
    if p.is_zero() {
        return Err(LabError::InvalidArgument("polynomial must be nonzero".into()));
    }
    if cfg.starts == 0 {
        return Err(LabError::InvalidArgument("at least one start is required".into()));
    }
    let problem = Problem::new(p, ideal);

    let outcomes: Vec<Option<StartOutcome>> = (0..cfg.starts)
        .into_par_iter()
        .map(|k| run_start(&problem, d, k, cfg))
        .collect();

    let mut samples: Vec<StartOutcome> = Vec::new();
    if cfg.fallback_samples > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(u64::MAX);
        for _ in 0..cfg.fallback_samples {
            if let Some(z) = feasible_seed(&problem, d, &mut rng, cfg) {
                let value = problem.value(&z);
                samples.push(StartOutcome {
                    point: z,
                    value,
                    converged: true,
                });
            }
        }
    }

    let finished: Vec<&StartOutcome> = outcomes.iter().flatten().collect();
    if finished.is_empty() && samples.is_empty() {
        return Err(LabError::BoundaryNotLocated {
            attempts: cfg.starts * cfg.seed_attempts.max(1),
        });
    }

    let mut best: Option<&StartOutcome> = None;
    for cand in finished.iter().copied().chain(samples.iter()) {
        best = match best {
            None => Some(cand),
            Some(b) if cand.value > b.value + 1e-12 => Some(cand),
            Some(b) if (cand.value - b.value).abs() <= 1e-12 && lex_less(&cand.point, &b.point) => Some(cand),
            keep => keep,
        };
    }
    let best = best.expect("at least one candidate");

    let mut reps: Vec<&Vec<Complex>> = Vec::new();
    for o in &finished {
        let same = reps.iter().any(|r| {
            let ip: Complex = r.iter().zip(&o.point).map(|(a, b)| a * b.conj()).sum();
            ip.norm() > 1.0 - 1e-6
        });
        if !same {
            reps.push(&o.point);
        }
    }

    let norm_sq: f64 = best.point.iter().map(|c| c.norm_sqr()).sum();
    Ok(BoundaryMaxResult {
        point: best.point.iter().map(|c| (c.re, c.im)).collect(),
        value: best.value,
        sphere_residual: (norm_sq - 1.0).abs(),
        variety_residual: problem.residual(&best.point),
        stats: MultistartStats {
            starts: cfg.starts,
            converged: finished.iter().filter(|o| o.converged).count(),
            basins: reps.len(),
            samples_scored: samples.len(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::MultiIndex;

    fn mono(e: &[u32]) -> Polynomial {
        Polynomial::monomial(MultiIndex::new(e.to_vec()), Complex::new(1.0, 0.0))
    }

    fn quick() -> OptimizerConfig {
        OptimizerConfig {
            starts: 8,
            seed: 3,
            ..Default::default()
        }
    }

    #[test]
    fn coordinate_function_on_sphere() {
        let ideal = HomogeneousIdeal::zero(3).unwrap();
        let r = boundary_sup(&PolyMatrix::scalar(mono(&[1, 0, 0])), &ideal, &quick()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-8, "{r:?}");
        let z = r.point_complex();
        assert!((z[0].norm() - 1.0).abs() < 1e-6);
        assert!(r.sphere_residual < 1e-12);
    }

    #[test]
    fn product_of_coordinates() {
        let ideal = HomogeneousIdeal::zero(2).unwrap();
        let r = boundary_sup(&PolyMatrix::scalar(mono(&[1, 1])), &ideal, &quick()).unwrap();
        assert!((r.value - 0.5).abs() < 1e-8);
        let z = r.point_complex();
        assert!((z[0].norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-4);
    }

    #[test]
    fn sum_on_coordinate_axes() {
        let ideal = HomogeneousIdeal::monomial(2, &[&[1, 1]]).unwrap();
        let p = PolyMatrix::scalar(mono(&[1, 0]).add(&mono(&[0, 1])));
        let r = boundary_sup(&p, &ideal, &quick()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-8);
        assert!(r.variety_residual <= 1e-10);
    }

    #[test]
    fn finite_codimension_has_no_boundary() {
        let ideal = HomogeneousIdeal::monomial(2, &[&[1, 0], &[0, 1]]).unwrap();
        let p = PolyMatrix::scalar(mono(&[1, 0]));
        assert!(matches!(
            boundary_sup(&p, &ideal, &quick()),
            Err(LabError::BoundaryNotLocated { .. })
        ));
    }

    #[test]
    fn deterministic_given_seed() {
        let ideal = HomogeneousIdeal::zero(2).unwrap();
        let p = PolyMatrix::scalar(mono(&[2, 1]).add(&mono(&[0, 3]).scale(Complex::new(0.0, 0.5))));
        let a = boundary_sup(&p, &ideal, &quick()).unwrap();
        let b = boundary_sup(&p, &ideal, &quick()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn matrix_valued_symbol() {
        // [z1 z2] has norm sqrt(|z1|²+|z2|²) = 1 everywhere on the sphere
        let ideal = HomogeneousIdeal::zero(2).unwrap();
        let p = PolyMatrix::new(1, 2, vec![mono(&[1, 0]), mono(&[0, 1])]).unwrap();
        let r = boundary_sup(&p, &ideal, &quick()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
    }
}
