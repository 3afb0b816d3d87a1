//! Essential norms from tail compressions.
//!
//! `P_{<m}` has finite rank, so `‖p(S)‖_e = lim_m ‖Q_m p(S) Q_m‖` with `Q_m`
//! the projection onto degrees `>= m`, and the limit is non-increasing. Each
//! `Q_m` is approximated from inside by the finite windows `[m, M]`:
//! `f(m, M) = ‖P_[m,M] p(S) P_[m,M]‖` is non-decreasing in `M` and
//! non-increasing in `m`.

use rayon::prelude::*;
use serde::Serialize;

use super::{assemble_polynomial, operator_norm_with, NormOptions, ShiftBlocks};
use crate::error::{LabError, Result};
use crate::poly::PolyMatrix;

/// Slack allowed before a monotonicity law counts as violated.
pub const MONOTONICITY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WindowValue {
    pub m: usize,
    #[serde(rename = "M")]
    pub big_m: usize,
    pub f: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonotonicityViolation {
    pub law: &'static str,
    pub smaller: (usize, usize),
    pub larger: (usize, usize),
    pub excess: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EssentialNormTrace {
    pub grid: Vec<WindowValue>,
    /// `f` at the largest `m`, taking the largest `M` paired with it.
    pub estimate: f64,
    pub estimate_window: (usize, usize),
    pub violations: Vec<MonotonicityViolation>,
}

impl EssentialNormTrace {
    pub fn is_monotone(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn value(&self, m: usize, big_m: usize) -> Option<f64> {
        self.grid
            .iter()
            .find(|w| w.m == m && w.big_m == big_m)
            .map(|w| w.f)
    }
}

/// Windows `m ∈ {10, 20, 40}` crossed with `M = m' + max(40, 8 deg p)` for
/// each `m'` in the same list.
pub fn default_schedule(degree: usize) -> Vec<(usize, usize)> {
    let ms = [10usize, 20, 40];
    let width = 40.max(8 * degree);
    let big_ms: Vec<usize> = ms.iter().map(|m| m + width).collect();
    let mut out = Vec::new();
    for &m in &ms {
        for &big_m in &big_ms {
            if big_m >= m + 2 * degree {
                out.push((m, big_m));
            }
        }
    }
    out
}

pub fn essential_norm_estimate(
    shifts: &ShiftBlocks,
    p: &PolyMatrix,
    schedule: &[(usize, usize)],
) -> Result<EssentialNormTrace> {
    essential_norm_estimate_with(shifts, p, schedule, NormOptions::default())
}

pub fn essential_norm_estimate_with(
    shifts: &ShiftBlocks,
    p: &PolyMatrix,
    schedule: &[(usize, usize)],
    opts: NormOptions,
) -> Result<EssentialNormTrace> {
    if schedule.is_empty() {
        return Err(LabError::InvalidArgument("empty window schedule".into()));
    }
    let deg = p.degree();
    for &(m, big_m) in schedule {
        if big_m < m + 2 * deg {
            return Err(LabError::InvalidWindow {
                m,
                big_m,
                reason: format!("need M - m >= 2 deg p = {}", 2 * deg),
            });
        }
        if big_m > shifts.n_max() {
            return Err(LabError::DegreeOverflow {
                requested: big_m,
                n_max: shifts.n_max(),
            });
        }
    }

    let grid = schedule
        .par_iter()
        .map(|&(m, big_m)| {
            let t = assemble_polynomial(shifts, p, (m, big_m))?;
            Ok(WindowValue {
                m,
                big_m,
                f: operator_norm_with(&t, opts),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let best_m = grid.iter().map(|w| w.m).max().unwrap();
    let head = grid
        .iter()
        .filter(|w| w.m == best_m)
        .max_by_key(|w| w.big_m)
        .unwrap();

    let mut violations = Vec::new();
    for a in &grid {
        for b in &grid {
            if a.m == b.m && a.big_m < b.big_m && a.f > b.f + MONOTONICITY_TOL {
                violations.push(MonotonicityViolation {
                    law: "f(m, M) must be non-decreasing in M",
                    smaller: (a.m, a.big_m),
                    larger: (b.m, b.big_m),
                    excess: a.f - b.f,
                });
            }
            if a.big_m == b.big_m && a.m < b.m && b.f > a.f + MONOTONICITY_TOL {
                violations.push(MonotonicityViolation {
                    law: "f(m, M) must be non-increasing in m",
                    smaller: (a.m, a.big_m),
                    larger: (b.m, b.big_m),
                    excess: b.f - a.f,
                });
            }
        }
    }

    Ok(EssentialNormTrace {
        estimate: head.f,
        estimate_window: (head.m, head.big_m),
        grid,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::{HomogeneousIdeal, DEFAULT_RANK_TOL};
    use crate::poly::{Complex, MultiIndex, Polynomial, WeightScheme};

    fn mono(e: &[u32]) -> PolyMatrix {
        PolyMatrix::scalar(Polynomial::monomial(
            MultiIndex::new(e.to_vec()),
            Complex::new(1.0, 0.0),
        ))
    }

    #[test]
    fn schedule_shape() {
        let s = default_schedule(1);
        assert_eq!(s.len(), 9);
        assert!(s.contains(&(40, 80)));
        assert_eq!(default_schedule(6).iter().map(|w| w.1).max(), Some(88));
    }

    #[test]
    fn z1_estimate_is_one() {
        let da = WeightScheme::drury_arveson(2).unwrap();
        let s = ShiftBlocks::build(&HomogeneousIdeal::zero(2).unwrap(), da, 40, DEFAULT_RANK_TOL).unwrap();
        let tr = essential_norm_estimate(&s, &mono(&[1, 0]), &[(5, 20), (5, 40), (20, 40)]).unwrap();
        assert!((tr.estimate - 1.0).abs() < 1e-12);
        assert_eq!(tr.estimate_window, (20, 40));
        assert!(tr.is_monotone());
    }

    #[test]
    fn ideal_member_has_zero_estimate() {
        let ideal = HomogeneousIdeal::monomial(2, &[&[1, 1]]).unwrap();
        let da = WeightScheme::drury_arveson(2).unwrap();
        let s = ShiftBlocks::build(&ideal, da, 30, DEFAULT_RANK_TOL).unwrap();
        let tr = essential_norm_estimate(&s, &mono(&[1, 1]), &[(10, 30)]).unwrap();
        assert!(tr.estimate < 1e-12);
    }

    #[test]
    fn schedule_errors() {
        let da = WeightScheme::drury_arveson(2).unwrap();
        let s = ShiftBlocks::build(&HomogeneousIdeal::zero(2).unwrap(), da, 20, DEFAULT_RANK_TOL).unwrap();
        let p = mono(&[2, 1]);
        assert!(matches!(
            essential_norm_estimate(&s, &p, &[(10, 14)]),
            Err(LabError::InvalidWindow { .. })
        ));
        assert!(matches!(
            essential_norm_estimate(&s, &p, &[(10, 30)]),
            Err(LabError::DegreeOverflow { .. })
        ));
        assert!(essential_norm_estimate(&s, &p, &[]).is_err());
    }
}
