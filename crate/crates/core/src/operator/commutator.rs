//! Self-commutator blocks `[S_i^*, S_j]` and Schatten-class diagnostics.
//!
//! `[S_i^*, S_j] = S_i^* S_j - S_j S_i^*` preserves degree, so its singular
//! values are the union of those of its `H_n` blocks. Summability verdicts at
//! finite degree are heuristic: they come from log-log slopes of the
//! per-degree increments, never from a convergence proof.

use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use super::{assemble_polynomial, ShiftBlocks};
use crate::error::{LabError, Result};
use crate::linalg::{adjoint_mul, loglog_slope, max_abs, mul_adjoint, singular_values, CMatrix};
use crate::poly::{PolyMatrix, Polynomial};

/// The block of `S_i^* S_j - S_j S_i^*` on `H_n`.
pub fn commutator_block(shifts: &ShiftBlocks, i: usize, j: usize, n: usize) -> Result<CMatrix> {
    let bi = shifts.shift_block(i, n)?;
    let bj = shifts.shift_block(j, n)?;
    let mut c = adjoint_mul(bi, bj);
    if n > 0 {
        let bi_prev = shifts.shift_block(i, n - 1)?;
        let bj_prev = shifts.shift_block(j, n - 1)?;
        c -= mul_adjoint(bj_prev, bi_prev);
    }
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommutatorSpectrum {
    pub i: usize,
    pub j: usize,
    pub degrees: Vec<usize>,
    /// Singular values per degree, largest first.
    pub singular_values: Vec<Vec<f64>>,
    /// Largest cross-degree entry of the assembled commutator on a leading
    /// window (zero up to rounding).
    pub leakage: f64,
}

impl CommutatorSpectrum {
    /// `(n, top singular value)` for each degree.
    pub fn block_norms(&self) -> Vec<(usize, f64)> {
        self.degrees
            .iter()
            .zip(&self.singular_values)
            .map(|(n, s)| (*n, s.first().copied().unwrap_or(0.0)))
            .collect()
    }

    /// Log-log slope of the block norms over degrees in `range`.
    pub fn norm_slope(&self, range: RangeInclusive<usize>) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .block_norms()
            .into_iter()
            .filter(|(n, _)| range.contains(n))
            .map(|(n, s)| (n as f64, s))
            .collect();
        loglog_slope(&pts)
    }

    pub fn max_norm_over(&self, range: RangeInclusive<usize>) -> f64 {
        self.block_norms()
            .into_iter()
            .filter(|(n, _)| range.contains(n))
            .map(|(_, s)| s)
            .fold(0.0, f64::max)
    }
}

/// Degree width of the dense cross-degree check.
const LEAKAGE_WINDOW: usize = 8;

pub fn commutator_blocks(
    shifts: &ShiftBlocks,
    i: usize,
    j: usize,
    degrees: RangeInclusive<usize>,
) -> Result<CommutatorSpectrum> {
    let (lo, hi) = (*degrees.start(), *degrees.end());
    if hi + 1 > shifts.n_max() {
        return Err(LabError::DegreeOverflow {
            requested: hi + 1,
            n_max: shifts.n_max(),
        });
    }
    let singular = (lo..=hi)
        .into_par_iter()
        .map(|n| commutator_block(shifts, i, j, n).map(|c| singular_values(&c)))
        .collect::<Result<Vec<_>>>()?;
    let leakage = cross_degree_leakage(shifts, i, j, hi.min(lo + LEAKAGE_WINDOW))?;
    Ok(CommutatorSpectrum {
        i,
        j,
        degrees: (lo..=hi).collect(),
        singular_values: singular,
        leakage,
    })
}

/// Assembles `S_i` and `S_j` densely on degrees `0..=up_to + 1`, forms the
/// commutator, and returns its largest entry outside the diagonal degree
/// blocks among degrees `<= up_to` (the top degree is distorted by the
/// truncation).
pub fn cross_degree_leakage(shifts: &ShiftBlocks, i: usize, j: usize, up_to: usize) -> Result<f64> {
    let d = shifts.d();
    for k in [i, j] {
        if k >= d {
            return Err(LabError::CoordinateOutOfRange { index: k, d });
        }
    }
    let window = (0, up_to + 1);
    let si = assemble_polynomial(shifts, &PolyMatrix::scalar(Polynomial::variable(d, i)), window)?;
    let sj = assemble_polynomial(shifts, &PolyMatrix::scalar(Polynomial::variable(d, j)), window)?;
    let (a, b) = (si.to_dense(), sj.to_dense());
    let c = a.ad_mul(&b) - &b * a.adjoint();
    let mut worst = 0.0f64;
    for to in 0..=up_to {
        for from in 0..=up_to {
            if to == from {
                continue;
            }
            let (r, cc) = (si.row_range(to), si.col_range(from));
            let sub = c.view((r.start, cc.start), (r.len(), cc.len())).into_owned();
            worst = worst.max(max_abs(&sub));
        }
    }
    Ok(worst)
}

/// Heuristic reading of an increment slope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SummabilityTrend {
    /// Increments decay faster than `n^-1.2`.
    SummableTrend,
    /// Increments decay like `n^-1` or slower.
    BorderlineOrDivergentTrend,
    /// Too few positive increments to fit.
    Undetermined,
}

impl SummabilityTrend {
    pub fn from_slope(slope: Option<f64>) -> Self {
        match slope {
            Some(s) if s < -1.2 => SummabilityTrend::SummableTrend,
            Some(_) => SummabilityTrend::BorderlineOrDivergentTrend,
            None => SummabilityTrend::Undetermined,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SchattenRow {
    /// Upper degree `N` of the partial sum.
    pub n: usize,
    pub sum: f64,
    /// The degree-`N` term `Σ_k s_k(block_N)^p`.
    pub increment: f64,
    /// Log-log slope of the increments over the trailing half `[N/2, N]`.
    pub slope: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchattenSeries {
    pub p: f64,
    pub rows: Vec<SchattenRow>,
}

impl SchattenSeries {
    pub fn last_sum(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.sum)
    }
}

/// Partial sums `Σ_{n<=N} Σ_k s_k(block_n)^p` for each exponent, over the
/// degrees of `spec` up to `n_max`.
pub fn schatten_partial_sums(
    spec: &CommutatorSpectrum,
    exponents: &[f64],
    n_max: usize,
) -> Result<Vec<SchattenSeries>> {
    if let Some(bad) = exponents.iter().find(|p| !(**p > 0.0)) {
        return Err(LabError::InvalidArgument(format!(
            "Schatten exponent must be positive, got {bad}"
        )));
    }
    Ok(exponents
        .iter()
        .map(|&p| {
            let mut sum = 0.0;
            let mut incs: Vec<(usize, f64)> = Vec::new();
            let mut rows = Vec::new();
            for (n, s) in spec.degrees.iter().zip(&spec.singular_values) {
                if *n > n_max {
                    break;
                }
                let inc: f64 = s.iter().map(|x| x.powf(p)).sum();
                sum += inc;
                incs.push((*n, inc));
                let lo = (*n / 2).max(1);
                let tail: Vec<(f64, f64)> = incs
                    .iter()
                    .filter(|(k, _)| *k >= lo)
                    .map(|(k, v)| (*k as f64, *v))
                    .collect();
                let slope = if tail.len() >= 3 { loglog_slope(&tail) } else { None };
                rows.push(SchattenRow {
                    n: *n,
                    sum,
                    increment: inc,
                    slope,
                });
            }
            SchattenSeries { p, rows }
        })
        .collect())
}

/// Log-log slope of the increments of `series` over degrees in `range`.
pub fn increment_slope(series: &SchattenSeries, range: RangeInclusive<usize>) -> Option<f64> {
    let pts: Vec<(f64, f64)> = series
        .rows
        .iter()
        .filter(|r| range.contains(&r.n))
        .map(|r| (r.n as f64, r.increment))
        .collect();
    loglog_slope(&pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::{HomogeneousIdeal, DEFAULT_RANK_TOL};
    use crate::poly::WeightScheme;

    fn build(ideal: HomogeneousIdeal, n_max: usize) -> ShiftBlocks {
        let da = WeightScheme::drury_arveson(ideal.d()).unwrap();
        ShiftBlocks::build(&ideal, da, n_max, DEFAULT_RANK_TOL).unwrap()
    }

    #[test]
    fn vacuum_block_of_d_shift() {
        // S_1^* S_1 1 = 1 and S_1 S_1^* 1 = 0
        let s = build(HomogeneousIdeal::zero(2).unwrap(), 4);
        let spec = commutator_blocks(&s, 0, 0, 0..=0).unwrap();
        assert_eq!(spec.singular_values[0].len(), 1);
        assert!((spec.singular_values[0][0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn d_shift_diagonal_commutator_by_hand() {
        // On z^α with |α| = n: S_1^*S_1 gives (α_1+1)/(n+1), S_1S_1^* gives α_1/n.
        let s = build(HomogeneousIdeal::zero(2).unwrap(), 12);
        for n in 1..11 {
            let c = commutator_block(&s, 0, 0, n).unwrap();
            for a in 0..=n {
                // basis position of (a, n-a) is n - a
                let k = n - a;
                let expect = (a as f64 + 1.0) / (n as f64 + 1.0) - a as f64 / n as f64;
                assert!((c[(k, k)].re - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn finite_rank_commutators_mod_z1z2() {
        let s = build(HomogeneousIdeal::monomial(2, &[&[1, 1]]).unwrap(), 30);
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let spec = commutator_blocks(&s, i, j, 2..=28).unwrap();
            assert!(spec.max_norm_over(2..=28) <= 1e-10);
            assert!(spec.leakage <= 1e-12);
        }
    }

    #[test]
    fn schatten_sums_of_zero_spectrum() {
        let spec = CommutatorSpectrum {
            i: 0,
            j: 1,
            degrees: vec![0, 1, 2],
            singular_values: vec![vec![0.0], vec![0.0, 0.0], vec![]],
            leakage: 0.0,
        };
        let series = schatten_partial_sums(&spec, &[1.0, 2.5], 2).unwrap();
        for s in series {
            assert!(s.rows.iter().all(|r| r.sum == 0.0));
        }
        assert!(schatten_partial_sums(&spec, &[0.0], 2).is_err());
    }

    #[test]
    fn trend_labels() {
        assert_eq!(
            SummabilityTrend::from_slope(Some(-2.0)),
            SummabilityTrend::SummableTrend
        );
        assert_eq!(
            SummabilityTrend::from_slope(Some(-1.0)),
            SummabilityTrend::BorderlineOrDivergentTrend
        );
        assert_eq!(SummabilityTrend::from_slope(None), SummabilityTrend::Undetermined);
    }
}
