use std::sync::Arc;

use rayon::prelude::*;

use super::GradedOp;
use crate::error::{LabError, Result};
use crate::ideal::{multiplication_matrix, GradedComplementBasis, HomogeneousIdeal};
use crate::linalg::{adjoint_mul, mul_adjoint, CMatrix};
use crate::poly::{Complex, HomogeneousPolynomial, MultiIndex, WeightScheme};

/// The blocks of `S_i : H_n -> H_{n+1}` for every coordinate `i` and every
/// `n < n_max`, in the orthonormal complement bases.
///
/// Built once, then shared read-only.
#[derive(Clone, Debug)]
pub struct ShiftBlocks {
    basis: Arc<GradedComplementBasis>,
    // blocks[i][n]
    blocks: Vec<Vec<CMatrix>>,
}

impl ShiftBlocks {
    /// Bases up to degree `n_max` and shift blocks up to `n_max - 1 -> n_max`.
    pub fn build(
        ideal: &HomogeneousIdeal,
        weights: WeightScheme,
        n_max: usize,
        rank_tol: f64,
    ) -> Result<Self> {
        let basis = GradedComplementBasis::build(ideal, weights, n_max, rank_tol)?;
        Ok(Self::from_basis(Arc::new(basis)))
    }

    pub fn from_basis(basis: Arc<GradedComplementBasis>) -> Self {
        let d = basis.ideal().d();
        let n_max = basis.n_max();
        let tasks: Vec<(usize, usize)> = (0..d)
            .flat_map(|i| (0..n_max).map(move |n| (i, n)))
            .collect();
        let flat: Vec<CMatrix> = tasks
            .par_iter()
            .map(|&(i, n)| {
                let zi = HomogeneousPolynomial::monomial(MultiIndex::unit(d, i), Complex::new(1.0, 0.0));
                compress_multiplication(&basis, &zi, n)
            })
            .collect();
        let mut blocks = vec![Vec::with_capacity(n_max); d];
        for ((i, _), b) in tasks.into_iter().zip(flat) {
            blocks[i].push(b);
        }
        Self { basis, blocks }
    }

    pub fn basis(&self) -> &Arc<GradedComplementBasis> {
        &self.basis
    }

    pub fn ideal(&self) -> &HomogeneousIdeal {
        self.basis.ideal()
    }

    pub fn weights(&self) -> &WeightScheme {
        self.basis.weights()
    }

    pub fn d(&self) -> usize {
        self.blocks.len()
    }

    /// Highest degree with a complement basis.
    pub fn n_max(&self) -> usize {
        self.basis.n_max()
    }

    /// `dim H_n` (zero past `n_max`).
    pub fn dim(&self, n: usize) -> usize {
        self.basis.dim(n)
    }

    fn check_coordinate(&self, i: usize) -> Result<()> {
        if i >= self.d() {
            return Err(LabError::CoordinateOutOfRange { index: i, d: self.d() });
        }
        Ok(())
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n > self.n_max() {
            return Err(LabError::DegreeOverflow {
                requested: n,
                n_max: self.n_max(),
            });
        }
        Ok(())
    }

    /// The matrix of `S_i : H_n -> H_{n+1}`; entry `(b, a)` is
    /// `<z_i e_a, f_b>` for the orthonormal bases `e` of `H_n`, `f` of `H_{n+1}`.
    pub fn shift_block(&self, i: usize, n: usize) -> Result<&CMatrix> {
        self.check_coordinate(i)?;
        self.check_degree(n + 1)?;
        Ok(&self.blocks[i][n])
    }

    /// `P_F M_p` restricted to `H_n`, landing in `H_{n + deg p}`. Since `F` is
    /// co-invariant this equals `p(S)` on `H_n`.
    pub fn multiplication_block(&self, p: &HomogeneousPolynomial, n: usize) -> Result<CMatrix> {
        if p.d() != self.d() {
            return Err(LabError::DimensionMismatch {
                expected: self.d(),
                found: p.d(),
            });
        }
        self.check_degree(n + p.degree())?;
        Ok(compress_multiplication(&self.basis, p, n))
    }

    /// `S_i` as a graded operator on source degrees `lo..=hi`.
    pub fn shift_op(&self, i: usize, lo: usize, hi: usize) -> Result<GradedOp> {
        self.check_coordinate(i)?;
        self.check_degree(hi + 1)?;
        let mut op = GradedOp::new(1);
        for n in lo..=hi {
            op.insert(n, self.blocks[i][n].clone());
        }
        Ok(op)
    }

    /// `p(S)` for homogeneous `p`, on source degrees `lo..=hi`.
    pub fn polynomial_op(&self, p: &HomogeneousPolynomial, lo: usize, hi: usize) -> Result<GradedOp> {
        self.check_degree(hi + p.degree())?;
        let blocks: Vec<(usize, CMatrix)> = (lo..=hi)
            .into_par_iter()
            .map(|n| (n, compress_multiplication(&self.basis, p, n)))
            .collect();
        let mut op = GradedOp::new(p.degree() as isize);
        for (n, b) in blocks {
            op.insert(n, b);
        }
        Ok(op)
    }

    /// `S^α` on source degrees `lo..=hi`, as a product of shift blocks.
    pub fn monomial_op_by_composition(&self, alpha: &MultiIndex, lo: usize, hi: usize) -> Result<GradedOp> {
        self.check_degree(hi + alpha.degree())?;
        let mut op = GradedOp::new(0);
        for n in lo..=hi {
            op.insert(n, CMatrix::identity(self.dim(n), self.dim(n)));
        }
        for (i, &e) in alpha.exponents().iter().enumerate() {
            for _ in 0..e {
                let lo_s = lo + (op.shift() as usize);
                let hi_s = hi + (op.shift() as usize);
                op = self.shift_op(i, lo_s, hi_s)?.compose(&op);
            }
        }
        Ok(op)
    }

    /// `I - Σ_i S_i S_i^*` on `H_n`.
    pub fn row_defect_block(&self, n: usize) -> Result<CMatrix> {
        self.check_degree(n)?;
        let dim = self.dim(n);
        let mut out = CMatrix::identity(dim, dim);
        if n == 0 {
            return Ok(out);
        }
        for i in 0..self.d() {
            let b = &self.blocks[i][n - 1];
            out -= mul_adjoint(b, b);
        }
        Ok(out)
    }

    /// `I - Σ_i S_i^* S_i` on `H_n`.
    pub fn column_defect_block(&self, n: usize) -> Result<CMatrix> {
        self.check_degree(n + 1)?;
        let dim = self.dim(n);
        let mut out = CMatrix::identity(dim, dim);
        for i in 0..self.d() {
            let b = &self.blocks[i][n];
            out -= adjoint_mul(b, b);
        }
        Ok(out)
    }
}

fn compress_multiplication(basis: &GradedComplementBasis, p: &HomogeneousPolynomial, n: usize) -> CMatrix {
    let from = basis.degree(n).expect("source degree checked");
    let to = basis.degree(n + p.degree()).expect("target degree checked");
    let m = multiplication_matrix(p, &from.monomials, &to.monomials, basis.weights());
    let me = if from.complement_is_full {
        m
    } else {
        &m * &from.complement
    };
    if to.complement_is_full {
        me
    } else {
        adjoint_mul(&to.complement, &me)
    }
}
