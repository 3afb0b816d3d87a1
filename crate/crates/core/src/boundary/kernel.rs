//! Normalized reproducing vectors `v_λ` and the evaluation character they
//! induce on polynomials in the compressed shift.

use serde::Serialize;

use crate::error::{LabError, Result};
use crate::ideal::weighted_coordinates;
use crate::linalg::CVector;
use crate::operator::{assemble_polynomial, operator_norm, ShiftBlocks};
use crate::poly::{
    besov_weight, monomials, multinomial, Complex, HomogeneousPolynomial, PolyMatrix, Polynomial,
};

/// `v_λ` truncated at degree `N`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KernelVector {
    pub lambda: Vec<Complex>,
    pub sigma: f64,
    pub n: usize,
    /// `C_λ` with `C_λ² Σ c_n^{-1} ‖λ‖^{2n} = 1`.
    pub normalization: f64,
    /// Upper bound on the squared norm of the part above degree `N`.
    pub tail_bound: f64,
    /// Squared norm of the truncated vector.
    pub truncated_norm_sq: f64,
    /// Degree-`n` part of `v_λ` for `n = 0..=N`.
    #[serde(skip)]
    pub parts: Vec<HomogeneousPolynomial>,
}

impl KernelVector {
    /// `⟨f, v_λ⟩` for `f` of degree at most `N`.
    pub fn pair(&self, f: &Polynomial, sigma_weights: &crate::poly::WeightScheme) -> Result<Complex> {
        if f.degree().is_some_and(|k| k > self.n) {
            return Err(LabError::DegreeOverflow {
                requested: f.degree().unwrap_or(0),
                n_max: self.n,
            });
        }
        let mut acc = Complex::new(0.0, 0.0);
        for h in f.homogeneous_parts() {
            acc += crate::poly::inner_product(&h, &self.parts[h.degree()], sigma_weights)?;
        }
        Ok(acc)
    }
}

/// Sum of `c_n^{-1} r^{2n}` until the terms no longer change the sum.
fn normalization_series(r2: f64, sigma: f64) -> Result<f64> {
    let mut sum = 0.0f64;
    let mut n = 0usize;
    loop {
        let term = r2.powi(n as i32) / besov_weight(n, sigma)?;
        let next = sum + term;
        if next == sum || term == 0.0 {
            return Ok(sum);
        }
        sum = next;
        n += 1;
        if n > 1_000_000 {
            return Ok(sum);
        }
    }
}

pub fn kernel_vector(lambda: &[Complex], sigma: f64, n: usize) -> Result<KernelVector> {
    let d = lambda.len();
    if d < 2 {
        return Err(LabError::DimensionTooSmall(d));
    }
    let r2: f64 = lambda.iter().map(|c| c.norm_sqr()).sum();
    if !(r2 < 1.0) {
        return Err(LabError::OutsideBall(r2.sqrt()));
    }
    let total = normalization_series(r2, sigma)?;
    let c = total.powf(-0.5);

    let conj: Vec<Complex> = lambda.iter().map(|z| z.conj()).collect();
    let mut parts = Vec::with_capacity(n + 1);
    let mut truncated = 0.0;
    for k in 0..=n {
        let ck = besov_weight(k, sigma)?;
        let terms = monomials(d, k)
            .into_iter()
            .map(|a| {
                let coef = conj_power(&conj, &a) * (c * multinomial(&a) / ck);
                (a, coef)
            });
        parts.push(HomogeneousPolynomial::from_terms(d, k, terms)?);
        truncated += r2.powi(k as i32) / ck;
    }
    truncated *= c * c;

    // terms t_k = c_k^{-1} r^{2k}; t_{k+1}/t_k = r²(k+2σ)/(k+1) decreases to r²
    let t_next = r2.powi(n as i32 + 1) / besov_weight(n + 1, sigma)?;
    let q = (r2 * (n as f64 + 1.0 + 2.0 * sigma) / (n as f64 + 2.0)).max(r2);
    let tail_bound = if t_next == 0.0 {
        0.0
    } else if q < 1.0 {
        c * c * t_next / (1.0 - q)
    } else {
        (1.0 - truncated).max(0.0)
    };

    Ok(KernelVector {
        lambda: lambda.to_vec(),
        sigma,
        n,
        normalization: c,
        tail_bound,
        truncated_norm_sq: truncated,
        parts,
    })
}

fn conj_power(conj: &[Complex], a: &crate::poly::MultiIndex) -> Complex {
    a.eval(conj)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CharacterCheck {
    /// `⟨p(S) v_λ, v_λ⟩` on the truncation.
    pub state_value: Complex,
    /// `p(λ)`.
    pub point_value: Complex,
    pub discrepancy: f64,
    /// `‖p(S)‖` on degrees `[0, N]`.
    pub operator_norm: f64,
    /// `|p(λ)| <= operator_norm + discrepancy`.
    pub lower_bound_holds: bool,
    pub kernel_tail_bound: f64,
    /// Squared norm of the truncated `v_λ` after projection onto the
    /// complement.
    pub projected_norm_sq: f64,
}

/// Compares `⟨p(S) v_λ, v_λ⟩` with `p(λ)` for `λ` on the variety.
pub fn character_check(shifts: &ShiftBlocks, p: &Polynomial, lambda: &[Complex], n: usize) -> Result<CharacterCheck> {
    let d = shifts.d();
    if lambda.len() != d {
        return Err(LabError::DimensionMismatch {
            expected: d,
            found: lambda.len(),
        });
    }
    if p.d() != d {
        return Err(LabError::DimensionMismatch { expected: d, found: p.d() });
    }
    let residual = shifts.ideal().residual(lambda);
    if residual > 1e-10 {
        return Err(LabError::Infeasible(residual));
    }
    if n > shifts.n_max() {
        return Err(LabError::DegreeOverflow {
            requested: n,
            n_max: shifts.n_max(),
        });
    }
    let w = shifts.weights();
    let kv = kernel_vector(lambda, w.sigma(), n)?;

    let basis = shifts.basis();
    let y: Vec<CVector> = (0..=n)
        .map(|k| {
            let b = basis.degree(k)?;
            let x = weighted_coordinates(&kv.parts[k], &b.monomials, w);
            Ok(if b.complement_is_full { x } else { b.complement.ad_mul(&x) })
        })
        .collect::<Result<_>>()?;
    let projected_norm_sq: f64 = y.iter().map(|v| v.norm_squared()).sum();

    let mut state = Complex::new(0.0, 0.0);
    for h in p.homogeneous_parts() {
        let k = h.degree();
        for m in 0..=n.saturating_sub(k) {
            if m + k > n {
                break;
            }
            let block = shifts.multiplication_block(&h, m)?;
            state += y[m + k].dotc(&(&block * &y[m]));
        }
    }
    let point = p.evaluate(lambda);
    let discrepancy = (state - point).norm();

    let t = assemble_polynomial(shifts, &PolyMatrix::scalar(p.clone()), (0, n))?;
    let norm = operator_norm(&t);

    Ok(CharacterCheck {
        state_value: state,
        point_value: point,
        discrepancy,
        operator_norm: norm,
        lower_bound_holds: point.norm() <= norm + discrepancy,
        kernel_tail_bound: kv.tail_bound,
        projected_norm_sq,
    })
}
