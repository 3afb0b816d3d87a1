use std::collections::BTreeMap;

use crate::linalg::{adjoint_mul, spectral_norm, CMatrix};
use crate::poly::Complex;

/// An operator on `⊕_n H_n` that maps each `H_n` into `H_{n+shift}`.
///
/// Blocks are keyed by source degree; a missing key is a zero block.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedOp {
    shift: isize,
    blocks: BTreeMap<usize, CMatrix>,
}

impl GradedOp {
    pub fn new(shift: isize) -> Self {
        Self {
            shift,
            blocks: BTreeMap::new(),
        }
    }

    pub fn shift(&self) -> isize {
        self.shift
    }

    /// Sets the block `H_n -> H_{n+shift}`.
    pub fn insert(&mut self, n: usize, block: CMatrix) {
        debug_assert!(n as isize + self.shift >= 0);
        self.blocks.insert(n, block);
    }

    pub fn block(&self, n: usize) -> Option<&CMatrix> {
        self.blocks.get(&n)
    }

    pub fn blocks(&self) -> impl Iterator<Item = (usize, &CMatrix)> {
        self.blocks.iter().map(|(n, b)| (*n, b))
    }

    pub fn source_degrees(&self) -> Vec<usize> {
        self.blocks.keys().copied().collect()
    }

    pub fn target(&self, n: usize) -> usize {
        (n as isize + self.shift) as usize
    }

    pub fn adjoint(&self) -> GradedOp {
        GradedOp {
            shift: -self.shift,
            blocks: self
                .blocks
                .iter()
                .map(|(n, b)| (self.target(*n), b.adjoint()))
                .collect(),
        }
    }

    /// `self ∘ rhs`, defined on the source degrees of `rhs` whose image has a
    /// block in `self`.
    pub fn compose(&self, rhs: &GradedOp) -> GradedOp {
        let mut out = GradedOp::new(self.shift + rhs.shift);
        for (n, b) in &rhs.blocks {
            if let Some(a) = self.blocks.get(&rhs.target(*n)) {
                out.blocks.insert(*n, a * b);
            }
        }
        out
    }

    fn combine(&self, other: &GradedOp, sign: f64) -> GradedOp {
        assert_eq!(self.shift, other.shift, "graded shift mismatch");
        let mut out = self.clone();
        let s = Complex::new(sign, 0.0);
        for (n, b) in &other.blocks {
            match out.blocks.get_mut(n) {
                Some(a) => *a += b * s,
                None => {
                    out.blocks.insert(*n, b * s);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &GradedOp) -> GradedOp {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &GradedOp) -> GradedOp {
        self.combine(other, -1.0)
    }

    pub fn scale(&self, s: Complex) -> GradedOp {
        GradedOp {
            shift: self.shift,
            blocks: self.blocks.iter().map(|(n, b)| (*n, b * s)).collect(),
        }
    }

    /// Keeps blocks whose source and target both lie in `[lo, hi]`.
    pub fn restrict(&self, lo: usize, hi: usize) -> GradedOp {
        GradedOp {
            shift: self.shift,
            blocks: self
                .blocks
                .iter()
                .filter(|(n, _)| {
                    let t = self.target(**n);
                    **n >= lo && **n <= hi && t >= lo && t <= hi
                })
                .map(|(n, b)| (*n, b.clone()))
                .collect(),
        }
    }

    /// Frobenius inner product `tr(self^H other)`.
    pub fn frobenius_dot(&self, other: &GradedOp) -> Complex {
        if self.shift != other.shift {
            return Complex::new(0.0, 0.0);
        }
        self.blocks
            .iter()
            .filter_map(|(n, a)| other.blocks.get(n).map(|b| a.dotc(b)))
            .sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.blocks
            .values()
            .map(|b| b.norm_squared())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest block operator norm. Because distinct blocks have disjoint
    /// sources and targets this is the norm of the whole operator.
    pub fn norm(&self) -> f64 {
        self.blocks.values().map(spectral_norm).fold(0.0, f64::max)
    }

    /// `self^H self` blockwise, using the sparse-aware product.
    pub fn gram(&self) -> GradedOp {
        GradedOp {
            shift: 0,
            blocks: self
                .blocks
                .iter()
                .map(|(n, b)| (*n, adjoint_mul(b, b)))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex {
        Complex::new(x, 0.0)
    }

    #[test]
    fn adjoint_and_compose() {
        let mut a = GradedOp::new(1);
        a.insert(0, CMatrix::from_row_slice(2, 1, &[c(1.0), c(2.0)]));
        a.insert(1, CMatrix::from_row_slice(1, 2, &[c(3.0), c(0.0)]));
        let aa = a.compose(&a);
        assert_eq!(aa.shift(), 2);
        assert_eq!(aa.block(0).unwrap()[(0, 0)], c(3.0));
        assert!(aa.block(1).is_none());

        let adj = a.adjoint();
        assert_eq!(adj.shift(), -1);
        assert_eq!(adj.block(1).unwrap().shape(), (1, 2));
        let g = adj.compose(&a);
        assert_eq!(g.shift(), 0);
        assert_eq!(g.block(0).unwrap()[(0, 0)], c(5.0));
        assert_eq!(a.gram(), g);
    }

    #[test]
    fn frobenius_and_norm() {
        let mut a = GradedOp::new(0);
        a.insert(2, CMatrix::from_diagonal_element(2, 2, c(3.0)));
        a.insert(3, CMatrix::from_diagonal_element(1, 1, c(-4.0)));
        assert!((a.frobenius_norm() - (9.0f64 * 2.0 + 16.0).sqrt()).abs() < 1e-14);
        assert!((a.norm() - 4.0).abs() < 1e-14);
        assert_eq!(a.sub(&a).frobenius_norm(), 0.0);
        assert_eq!(a.restrict(0, 2).source_degrees(), vec![2]);
    }
}
