//! Least-squares approximation of `S_i^* S_j` by `span{ S^μ (S^ν)^* }`.

use serde::Serialize;

use super::{GradedOp, ShiftBlocks};
use crate::error::{LabError, Result};
use crate::linalg::{pseudo_solve_hermitian, CMatrix, CVector};
use crate::poly::{monomials, Complex, HomogeneousPolynomial, MultiIndex};

/// Relative eigenvalue cut below which Gram directions are dropped.
const GRAM_CUT: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AaStarFit {
    pub k: usize,
    /// Inner degree window `[k, M - k]` the fit is measured on.
    pub window: (usize, usize),
    /// `‖T - Σ c D‖_F / ‖T‖_F` on the inner window.
    pub residual: f64,
    pub dictionary_size: usize,
    pub gram_rank: usize,
    /// True when the Gram matrix was rank deficient and directions were
    /// dropped.
    pub regularized: bool,
}

/// Fit of the truncation of `S_i^* S_j` on `[0, M]` by products
/// `S^μ (S^ν)^*` with `|μ|, |ν| <= k`, measured on `[k, M - k]`.
pub fn aa_star_residual(
    shifts: &ShiftBlocks,
    i: usize,
    j: usize,
    k: usize,
    big_m: usize,
) -> Result<AaStarFit> {
    check_params(k, big_m)?;
    let (lo, hi) = (k, big_m - k);
    let target = shifts
        .shift_op(i, lo, hi)?
        .adjoint()
        .compose(&shifts.shift_op(j, lo, hi)?);
    aa_star_fit(shifts, &target, k, big_m)
}

fn check_params(k: usize, big_m: usize) -> Result<()> {
    if k == 0 {
        return Err(LabError::InvalidArgument("dictionary degree k must be >= 1".into()));
    }
    if big_m < 2 * k + 2 {
        return Err(LabError::InvalidWindow {
            m: 0,
            big_m,
            reason: format!("need M >= 2k + 2 = {}", 2 * k + 2),
        });
    }
    Ok(())
}

/// Same fit for an arbitrary graded target. Dictionary members whose degree
/// shift `|μ| - |ν|` differs from the target's are Frobenius-orthogonal to it
/// and to every member that matches, so only matching shifts are formed.
pub fn aa_star_fit(shifts: &ShiftBlocks, target: &GradedOp, k: usize, big_m: usize) -> Result<AaStarFit> {
    check_params(k, big_m)?;
    if big_m > shifts.n_max() {
        return Err(LabError::DegreeOverflow {
            requested: big_m,
            n_max: shifts.n_max(),
        });
    }
    let (lo, hi) = (k, big_m - k);
    let target = target.restrict(lo, hi);
    let s = target.shift();
    let d = shifts.d();

    let mut dictionary: Vec<GradedOp> = Vec::new();
    for mu_deg in 0..=k {
        let nu_deg = mu_deg as isize - s;
        if nu_deg < 0 || nu_deg > k as isize {
            continue;
        }
        let nu_deg = nu_deg as usize;
        for mu in monomials(d, mu_deg) {
            for nu in monomials(d, nu_deg) {
                dictionary.push(product_op(shifts, &mu, &nu, lo, hi)?);
            }
        }
    }

    let size = dictionary.len();
    let gram = CMatrix::from_fn(size, size, |a, b| dictionary[a].frobenius_dot(&dictionary[b]));
    let rhs = CVector::from_fn(size, |a, _| dictionary[a].frobenius_dot(&target));
    let (coeffs, rank) = pseudo_solve_hermitian(&gram, &rhs, GRAM_CUT);

    let mut approx = GradedOp::new(s);
    for (c, op) in coeffs.iter().zip(&dictionary) {
        approx = approx.add(&op.scale(*c));
    }
    let target_norm = target.frobenius_norm();
    let err = target.sub(&approx).frobenius_norm();
    let residual = if target_norm > 0.0 { err / target_norm } else { err };

    Ok(AaStarFit {
        k,
        window: (lo, hi),
        residual,
        dictionary_size: size,
        gram_rank: rank,
        regularized: rank < size,
    })
}

/// `S^μ (S^ν)^*` on source degrees `n ∈ [lo, hi]` whose image also lies in
/// the window. On `H_n` this is `S^μ|_{H_{n-|ν|}} (S^ν|_{H_{n-|ν|}})^*`.
fn product_op(
    shifts: &ShiftBlocks,
    mu: &MultiIndex,
    nu: &MultiIndex,
    lo: usize,
    hi: usize,
) -> Result<GradedOp> {
    let one = Complex::new(1.0, 0.0);
    let pm = HomogeneousPolynomial::monomial(mu.clone(), one);
    let pn = HomogeneousPolynomial::monomial(nu.clone(), one);
    let shift = mu.degree() as isize - nu.degree() as isize;
    let mut op = GradedOp::new(shift);
    for n in lo..=hi {
        let t = n as isize + shift;
        if t < lo as isize || t > hi as isize || n < nu.degree() {
            continue;
        }
        let base = n - nu.degree();
        let a = shifts.multiplication_block(&pm, base)?;
        let b = shifts.multiplication_block(&pn, base)?;
        op.insert(n, &a * b.adjoint());
    }
    Ok(op)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::{HomogeneousIdeal, DEFAULT_RANK_TOL};
    use crate::poly::WeightScheme;

    #[test]
    fn target_in_dictionary_has_zero_residual() {
        let da = WeightScheme::drury_arveson(2).unwrap();
        let s = ShiftBlocks::build(&HomogeneousIdeal::zero(2).unwrap(), da, 16, DEFAULT_RANK_TOL).unwrap();
        let s1 = s.shift_op(0, 0, 15).unwrap();
        let target = s1.compose(&s1.adjoint());
        let fit = aa_star_fit(&s, &target, 1, 16).unwrap();
        assert!(fit.residual < 1e-12, "{}", fit.residual);
    }

    #[test]
    fn parameter_checks() {
        let da = WeightScheme::drury_arveson(2).unwrap();
        let s = ShiftBlocks::build(&HomogeneousIdeal::zero(2).unwrap(), da, 12, DEFAULT_RANK_TOL).unwrap();
        assert!(aa_star_residual(&s, 0, 1, 0, 10).is_err());
        assert!(matches!(
            aa_star_residual(&s, 0, 1, 3, 7),
            Err(LabError::InvalidWindow { .. })
        ));
        assert!(matches!(
            aa_star_residual(&s, 0, 1, 1, 13),
            Err(LabError::DegreeOverflow { .. })
        ));
    }
}
