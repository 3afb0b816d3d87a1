//! Dense complex linear algebra helpers shared by the operator modules.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::Complex;

pub type CMatrix = DMatrix<Complex>;
pub type CVector = DVector<Complex>;

const ZERO: Complex = Complex::new(0.0, 0.0);

fn density(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.iter().filter(|z| **z != ZERO).count() as f64 / m.len() as f64
}

/// `a^H b`. Graded multiplication blocks are very sparse, so this walks
/// the nonzeros row by row unless both factors are mostly dense.
pub fn adjoint_mul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.nrows(), b.nrows());
    if density(a) > 0.25 && density(b) > 0.25 {
        return a.ad_mul(b);
    }
    let mut out = CMatrix::zeros(a.ncols(), b.ncols());
    let rows_a = row_nonzeros(a);
    let rows_b = row_nonzeros(b);
    for (ra, rb) in rows_a.iter().zip(&rows_b) {
        for &(i, x) in ra {
            let xc = x.conj();
            for &(j, y) in rb {
                out[(i, j)] += xc * y;
            }
        }
    }
    out
}

/// `a b^H`, by the same sparse strategy over columns.
pub fn mul_adjoint(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.ncols(), b.ncols());
    if density(a) > 0.25 && density(b) > 0.25 {
        return a * b.adjoint();
    }
    let mut out = CMatrix::zeros(a.nrows(), b.nrows());
    for k in 0..a.ncols() {
        let ca: Vec<(usize, Complex)> = a
            .column(k)
            .iter()
            .enumerate()
            .filter(|(_, z)| **z != ZERO)
            .map(|(i, z)| (i, *z))
            .collect();
        if ca.is_empty() {
            continue;
        }
        for (j, y) in b.column(k).iter().enumerate() {
            if *y == ZERO {
                continue;
            }
            let yc = y.conj();
            for &(i, x) in &ca {
                out[(i, j)] += x * yc;
            }
        }
    }
    out
}

fn row_nonzeros(m: &CMatrix) -> Vec<Vec<(usize, Complex)>> {
    let mut rows = vec![Vec::new(); m.nrows()];
    for (j, col) in m.column_iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            if *z != ZERO {
                rows[i].push((j, *z));
            }
        }
    }
    rows
}

fn has_nan(v: &DVector<f64>) -> bool {
    v.iter().any(|x| x.is_nan())
}

/// Singular values, largest first.
///
/// nalgebra's complex bidiagonal SVD occasionally returns NaN on very sparse
/// inputs; the adjoint is tried next and the eigenvalues of `m^H m` last.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut sv = m.singular_values_unordered();
    if has_nan(&sv) {
        sv = m.adjoint().singular_values_unordered();
    }
    let mut s: Vec<f64> = if has_nan(&sv) {
        hermitian_eigenvalues(&m.ad_mul(m)).into_iter().map(|e| e.max(0.0).sqrt()).collect()
    } else {
        sv.iter().copied().collect()
    };
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Largest singular value with unit left and right singular vectors.
pub fn top_singular_triplet(m: &CMatrix) -> (f64, CVector, CVector) {
    let pick = |svd: nalgebra::SVD<Complex, nalgebra::Dyn, nalgebra::Dyn>| {
        if has_nan(&svd.singular_values) {
            return None;
        }
        let (k, s) = svd
            .singular_values
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, &s)| if s > acc.1 { (i, s) } else { acc });
        let u = svd.u?.column(k).into_owned();
        let v = svd.v_t?.row(k).adjoint();
        Some((s, u, v))
    };
    if let Some(t) = pick(nalgebra::SVD::new_unordered(m.clone(), true, true)) {
        return t;
    }
    if let Some((s, u, v)) = pick(nalgebra::SVD::new_unordered(m.adjoint(), true, true)) {
        return (s, v, u);
    }
    let eig = m.ad_mul(m).symmetric_eigen();
    let (k, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &e)| if e > acc.1 { (i, e) } else { acc });
    let v = eig.eigenvectors.column(k).into_owned();
    let mv = m * &v;
    let s = mv.norm();
    let u = if s > 0.0 {
        mv / Complex::new(s, 0.0)
    } else {
        let mut e = CVector::zeros(m.nrows());
        e[0] = Complex::new(1.0, 0.0);
        e
    };
    (s, u, v)
}

pub fn spectral_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Solves the Hermitian positive semidefinite system `g x = b` in the
/// least-squares sense, discarding eigendirections below `rel_cut` times the
/// largest eigenvalue. Returns the solution and the numerical rank kept.
pub fn pseudo_solve_hermitian(g: &CMatrix, b: &CVector, rel_cut: f64) -> (CVector, usize) {
    let n = g.nrows();
    if n == 0 {
        return (CVector::zeros(0), 0);
    }
    let eig = SymmetricEigen::new(g.clone());
    let top = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    let mut x = CVector::zeros(n);
    let mut rank = 0;
    for (k, &lam) in eig.eigenvalues.iter().enumerate() {
        if top <= 0.0 || lam <= rel_cut * top {
            continue;
        }
        rank += 1;
        let v = eig.eigenvectors.column(k);
        let coeff = v.dotc(b) / lam;
        x += v * coeff;
    }
    (x, rank)
}

/// Least-squares slope of `ln y` against `ln x`, skipping non-positive
/// samples. `None` with fewer than two usable points.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// Settings for the iterative largest-singular-value solver.
#[derive(Clone, Copy, Debug)]
pub struct LanczosOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Krylov dimension before a thick restart from the top Ritz vector.
    pub restart: usize,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 10_000,
            restart: 120,
            seed: 0x5eed,
        }
    }
}

/// Largest singular value of an implicitly given operator, by Lanczos
/// iteration on `A^H A` with full reorthogonalization and restarts.
///
/// `apply` computes `A x` and `apply_adjoint` computes `A^H y`.
pub fn top_singular_value<F, G>(
    dim: usize,
    apply: F,
    apply_adjoint: G,
    opts: LanczosOptions,
) -> f64
where
    F: Fn(&CVector) -> CVector,
    G: Fn(&CVector) -> CVector,
{
    if dim == 0 {
        return 0.0;
    }
    let normal = |x: &CVector| apply_adjoint(&apply(x));

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut start = CVector::from_fn(dim, |_, _| {
        Complex::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    start /= Complex::new(start.norm(), 0.0);

    let mut best = 0.0f64;
    let mut iterations = 0usize;
    loop {
        let mut basis: Vec<CVector> = vec![start.clone()];
        let mut alphas: Vec<f64> = Vec::new();
        let mut betas: Vec<f64> = Vec::new();
        let mut ritz: (f64, DVector<f64>);
        loop {
            let q = basis.last().unwrap().clone();
            let mut w = normal(&q);
            iterations += 1;
            let alpha = q.dotc(&w).re;
            alphas.push(alpha);
            for _ in 0..2 {
                for v in &basis {
                    let c = v.dotc(&w);
                    w -= v * c;
                }
            }
            let beta = w.norm();
            ritz = top_ritz(&alphas, &betas);
            let theta = ritz.0;
            // Ritz residual of the top pair
            let residual = beta * ritz.1[ritz.1.len() - 1].abs();
            let converged = residual <= opts.tol * theta.abs().max(1e-300);
            if converged || beta == 0.0 {
                return theta.max(0.0).sqrt();
            }
            if basis.len() >= opts.restart.min(dim) || iterations >= opts.max_iter {
                break;
            }
            betas.push(beta);
            basis.push(w / Complex::new(beta, 0.0));
        }
        best = best.max(ritz.0);
        if iterations >= opts.max_iter {
            return best.max(0.0).sqrt();
        }
        let mut next = CVector::zeros(dim);
        for (k, v) in basis.iter().enumerate() {
            next += v * Complex::new(ritz.1[k], 0.0);
        }
        let nn = next.norm();
        if nn == 0.0 {
            return best.max(0.0).sqrt();
        }
        start = next / Complex::new(nn, 0.0);
    }
}

/// Largest eigenpair of the real symmetric tridiagonal matrix.
fn top_ritz(alphas: &[f64], betas: &[f64]) -> (f64, DVector<f64>) {
    let k = alphas.len();
    let mut t = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alphas[i];
        if i + 1 < k {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let (idx, val) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| {
            if v > acc.1 {
                (i, v)
            } else {
                acc
            }
        });
    (val, eig.eigenvectors.column(idx).into_owned())
}
