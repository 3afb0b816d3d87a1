use serde::Serialize;

use crate::operator::WindowValue;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictKind {
    Match,
    LowerBoundOnlySatisfied,
    Violation,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub verdict: VerdictKind,
    pub estimate: f64,
    pub boundary_sup: f64,
    pub abs_gap: f64,
    pub rel_gap: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub advice: Option<String>,
    /// The tail grid, attached to every violation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<WindowValue>>,
}

/// Tail estimates approach the essential norm from above as `m` grows, while
/// sampled boundary values approach it from below, so `sup > estimate` beyond
/// tolerance is a contradiction and `estimate > sup` beyond tolerance only
/// means the windows are not deep enough yet.
pub fn compare(estimate: f64, boundary_sup: f64, tolerance: f64) -> Verdict {
    let abs_gap = (estimate - boundary_sup).abs();
    let scale = estimate.abs().max(boundary_sup.abs());
    let rel_gap = if scale > 0.0 { abs_gap / scale } else { 0.0 };
    let slack = tolerance * scale + 1e-12;
    let (verdict, advice) = if abs_gap <= slack {
        (VerdictKind::Match, None)
    } else if boundary_sup > estimate {
        (VerdictKind::Violation, None)
    } else {
        (
            VerdictKind::LowerBoundOnlySatisfied,
            Some("boundary sup is below the tail estimate; extend the window schedule to larger m".to_string()),
        )
    };
    Verdict {
        verdict,
        estimate,
        boundary_sup,
        abs_gap,
        rel_gap,
        tolerance,
        advice,
        grid: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts() {
        assert_eq!(compare(1.0, 1.0, 0.01).verdict, VerdictKind::Match);
        let v = compare(0.52, 0.50, 0.01);
        assert_eq!(v.verdict, VerdictKind::LowerBoundOnlySatisfied);
        assert!(v.advice.is_some());
        assert_eq!(compare(0.30, 0.50, 0.01).verdict, VerdictKind::Violation);
        assert_eq!(compare(1e-14, 0.0, 0.01).verdict, VerdictKind::Match);
    }
}
