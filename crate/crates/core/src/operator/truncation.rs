use std::collections::BTreeMap;

use rayon::prelude::*;

use super::ShiftBlocks;
use crate::error::{LabError, Result};
use crate::linalg::{spectral_norm, top_singular_value, CMatrix, CVector, LanczosOptions};
use crate::poly::{Complex, PolyMatrix};

/// One nonzero block of a truncation: the part of `p(S)` mapping degree
/// `from` into degree `to`, with the `r x c` matrix entries tensored in
/// (entry-major inside each degree).
#[derive(Clone, Debug)]
pub struct TruncationBlock {
    pub from: usize,
    pub to: usize,
    pub matrix: CMatrix,
}

/// `P_[m,M] p(S) P_[m,M]` for a matrix-valued polynomial `p`, stored as its
/// nonzero degree blocks.
#[derive(Clone, Debug)]
pub struct BandedTruncation {
    window: (usize, usize),
    entry_rows: usize,
    entry_cols: usize,
    dims: Vec<usize>,
    row_offsets: Vec<usize>,
    col_offsets: Vec<usize>,
    blocks: Vec<TruncationBlock>,
    bandwidth: usize,
    warnings: Vec<String>,
}

/// Assembles the truncation of `p(S)` to the degree window `[m, big_m]`.
pub fn assemble_polynomial(
    shifts: &ShiftBlocks,
    p: &PolyMatrix,
    window: (usize, usize),
) -> Result<BandedTruncation> {
    let (m, big_m) = window;
    if m > big_m {
        return Err(LabError::InvalidWindow {
            m,
            big_m,
            reason: "lower degree exceeds upper degree".into(),
        });
    }
    if big_m > shifts.n_max() {
        return Err(LabError::DegreeOverflow {
            requested: big_m,
            n_max: shifts.n_max(),
        });
    }
    if p.d() != shifts.d() {
        return Err(LabError::DimensionMismatch {
            expected: shifts.d(),
            found: p.d(),
        });
    }
    let (r, c) = (p.rows(), p.cols());
    let dims: Vec<usize> = (m..=big_m).map(|n| shifts.dim(n)).collect();
    let row_offsets = offsets(&dims, r);
    let col_offsets = offsets(&dims, c);

    let mut warnings = Vec::new();
    let bandwidth = p.degree();
    if bandwidth > big_m - m {
        warnings.push(format!(
            "polynomial degree {bandwidth} exceeds window width {}; the truncation only sees part of p(S)",
            big_m - m
        ));
    }

    let mut tasks = Vec::new();
    for k in p.degrees() {
        if m + k > big_m {
            continue;
        }
        let part = p.homogeneous_part(k);
        for n in m..=big_m - k {
            tasks.push((k, n, part.clone()));
        }
    }
    let mut built: Vec<Result<TruncationBlock>> = tasks
        .into_par_iter()
        .map(|(k, n, part)| {
            let (rows_n, cols_n) = (shifts.dim(n + k), shifts.dim(n));
            let mut block = CMatrix::zeros(r * rows_n, c * cols_n);
            for a in 0..r {
                for b in 0..c {
                    let entry = &part[a * c + b];
                    if entry.is_zero() {
                        continue;
                    }
                    let mb = shifts.multiplication_block(entry, n)?;
                    block
                        .view_mut((a * rows_n, b * cols_n), (rows_n, cols_n))
                        .copy_from(&mb);
                }
            }
            Ok(TruncationBlock {
                from: n,
                to: n + k,
                matrix: block,
            })
        })
        .collect();
    let mut blocks = Vec::with_capacity(built.len());
    for b in built.drain(..) {
        blocks.push(b?);
    }
    blocks.sort_by_key(|b| (b.from, b.to));

    Ok(BandedTruncation {
        window,
        entry_rows: r,
        entry_cols: c,
        dims,
        row_offsets,
        col_offsets,
        blocks,
        bandwidth,
        warnings,
    })
}

fn offsets(dims: &[usize], mult: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(dims.len() + 1);
    let mut acc = 0;
    out.push(0);
    for d in dims {
        acc += d * mult;
        out.push(acc);
    }
    out
}

impl BandedTruncation {
    pub fn window(&self) -> (usize, usize) {
        self.window
    }

    pub fn nrows(&self) -> usize {
        *self.row_offsets.last().unwrap()
    }

    pub fn ncols(&self) -> usize {
        *self.col_offsets.last().unwrap()
    }

    /// Shape `(rows, cols)` of the matrix polynomial; each degree block is
    /// tensored entry-major with it.
    pub fn entry_shape(&self) -> (usize, usize) {
        (self.entry_rows, self.entry_cols)
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn blocks(&self) -> &[TruncationBlock] {
        &self.blocks
    }

    /// `dim H_n` for each degree in the window.
    pub fn degree_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn block(&self, from: usize, to: usize) -> Option<&CMatrix> {
        self.blocks
            .iter()
            .find(|b| b.from == from && b.to == to)
            .map(|b| &b.matrix)
    }

    /// Row range of degree `n` in the assembled matrix.
    pub fn row_range(&self, n: usize) -> std::ops::Range<usize> {
        let k = n - self.window.0;
        self.row_offsets[k]..self.row_offsets[k + 1]
    }

    pub fn col_range(&self, n: usize) -> std::ops::Range<usize> {
        let k = n - self.window.0;
        self.col_offsets[k]..self.col_offsets[k + 1]
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.nrows(), self.ncols());
        for b in &self.blocks {
            let (r0, c0) = (self.row_range(b.to).start, self.col_range(b.from).start);
            out.view_mut((r0, c0), b.matrix.shape()).copy_from(&b.matrix);
        }
        out
    }

    pub fn apply(&self, x: &CVector) -> CVector {
        let mut y = CVector::zeros(self.nrows());
        for b in &self.blocks {
            let xs = x.rows_range(self.col_range(b.from));
            let r = self.row_range(b.to);
            let mut ys = y.rows_range_mut(r);
            ys += &b.matrix * xs;
        }
        y
    }

    pub fn apply_adjoint(&self, y: &CVector) -> CVector {
        let mut x = CVector::zeros(self.ncols());
        for b in &self.blocks {
            let ys = y.rows_range(self.row_range(b.to));
            let c = self.col_range(b.from);
            let mut xs = x.rows_range_mut(c);
            xs += b.matrix.ad_mul(&ys);
        }
        x
    }

    /// Groups source degrees into classes that no row degree couples, so
    /// `A^H A` is block diagonal over the classes.
    fn decoupled_components(&self) -> Vec<Vec<usize>> {
        let n = self.dims.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        let mut by_row: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for b in &self.blocks {
            by_row.entry(b.to).or_default().push(b.from - self.window.0);
        }
        for cols in by_row.values() {
            for w in cols.windows(2) {
                let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let sources: std::collections::BTreeSet<usize> =
            self.blocks.iter().map(|b| b.from - self.window.0).collect();
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for s in sources {
            let root = find(&mut parent, s);
            groups.entry(root).or_default().push(s + self.window.0);
        }
        groups.into_values().collect()
    }

    /// The sub-truncation on the given source degrees, with every row degree
    /// they reach.
    fn component(&self, sources: &[usize]) -> BandedTruncation {
        let blocks: Vec<TruncationBlock> = self
            .blocks
            .iter()
            .filter(|b| sources.contains(&b.from))
            .cloned()
            .collect();
        let mut out = self.clone();
        out.blocks = blocks;
        out
    }
}

/// Algorithm switches for [`operator_norm_with`].
#[derive(Clone, Copy, Debug)]
pub struct NormOptions {
    /// Components with at most this many rows and columns use a dense SVD.
    pub dense_threshold: usize,
    pub lanczos: LanczosOptions,
}

impl Default for NormOptions {
    fn default() -> Self {
        Self {
            dense_threshold: 2000,
            lanczos: LanczosOptions::default(),
        }
    }
}

/// Largest singular value of the truncation.
pub fn operator_norm(t: &BandedTruncation) -> f64 {
    operator_norm_with(t, NormOptions::default())
}

/// Largest singular value, computed component by component: source degrees
/// that share no target degree give orthogonal pieces, and the norm is the
/// largest piece. Each piece uses a dense SVD below the size threshold and
/// Lanczos above it.
pub fn operator_norm_with(t: &BandedTruncation, opts: NormOptions) -> f64 {
    let comps = t.decoupled_components();
    comps
        .par_iter()
        .map(|sources| {
            let sub = t.component(sources);
            let (rows, cols) = component_shape(&sub, sources);
            if rows.max(cols) <= opts.dense_threshold {
                dense_component_norm(&sub, sources)
            } else {
                top_singular_value(
                    sub.ncols(),
                    |x| sub.apply(x),
                    |y| sub.apply_adjoint(y),
                    opts.lanczos,
                )
            }
        })
        .reduce(|| 0.0, f64::max)
}

fn component_shape(t: &BandedTruncation, sources: &[usize]) -> (usize, usize) {
    let mut targets: Vec<usize> = t.blocks.iter().map(|b| b.to).collect();
    targets.sort_unstable();
    targets.dedup();
    let rows = targets.iter().map(|&n| t.row_range(n).len()).sum();
    let cols = sources.iter().map(|&n| t.col_range(n).len()).sum();
    (rows, cols)
}

fn dense_component_norm(t: &BandedTruncation, sources: &[usize]) -> f64 {
    if let [only] = sources {
        let blocks: Vec<&TruncationBlock> = t.blocks.iter().filter(|b| b.from == *only).collect();
        if let [b] = blocks.as_slice() {
            return spectral_norm(&b.matrix);
        }
    }
    let mut targets: Vec<usize> = t.blocks.iter().map(|b| b.to).collect();
    targets.sort_unstable();
    targets.dedup();
    let row_start: BTreeMap<usize, usize> = targets
        .iter()
        .scan(0, |acc, &n| {
            let s = *acc;
            *acc += t.row_range(n).len();
            Some((n, s))
        })
        .collect();
    let col_start: BTreeMap<usize, usize> = sources
        .iter()
        .scan(0, |acc, &n| {
            let s = *acc;
            *acc += t.col_range(n).len();
            Some((n, s))
        })
        .collect();
    let (rows, cols) = component_shape(t, sources);
    let mut dense = CMatrix::from_element(rows, cols, Complex::new(0.0, 0.0));
    for b in &t.blocks {
        dense
            .view_mut((row_start[&b.to], col_start[&b.from]), b.matrix.shape())
            .copy_from(&b.matrix);
    }
    spectral_norm(&dense)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::{HomogeneousIdeal, DEFAULT_RANK_TOL};
    use crate::linalg::max_abs;
    use crate::poly::{MultiIndex, Polynomial, WeightScheme};

    fn shifts(ideal: &HomogeneousIdeal, sigma: f64, n_max: usize) -> ShiftBlocks {
        let w = WeightScheme::new(sigma, ideal.d()).unwrap();
        ShiftBlocks::build(ideal, w, n_max, DEFAULT_RANK_TOL).unwrap()
    }

    fn mono(e: &[u32]) -> Polynomial {
        Polynomial::monomial(MultiIndex::new(e.to_vec()), Complex::new(1.0, 0.0))
    }

    #[test]
    fn identity_polynomial() {
        let s = shifts(&HomogeneousIdeal::zero(2).unwrap(), 0.5, 6);
        let one = PolyMatrix::scalar(Polynomial::constant(2, Complex::new(1.0, 0.0)));
        let t = assemble_polynomial(&s, &one, (0, 5)).unwrap();
        assert_eq!(t.nrows(), 21);
        let dense = t.to_dense();
        assert!(max_abs(&(dense - CMatrix::identity(21, 21))) < 1e-15);
        assert!((operator_norm(&t) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn z1_is_one_superdiagonal_band() {
        let s = shifts(&HomogeneousIdeal::zero(2).unwrap(), 0.5, 8);
        let t = assemble_polynomial(&s, &PolyMatrix::scalar(mono(&[1, 0])), (2, 7)).unwrap();
        assert_eq!(t.bandwidth(), 1);
        for b in t.blocks() {
            assert_eq!(b.to, b.from + 1);
            assert!(max_abs(&(&b.matrix - s.shift_block(0, b.from).unwrap())) == 0.0);
        }
        let dense = t.to_dense();
        for from in 2..=7 {
            for to in 2..=7 {
                if to != from + 1 {
                    let sub = dense.view(
                        (t.row_range(to).start, t.col_range(from).start),
                        (t.row_range(to).len(), t.col_range(from).len()),
                    );
                    assert!(sub.iter().all(|z| *z == Complex::new(0.0, 0.0)));
                }
            }
        }
        assert!((operator_norm(&t) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ideal_element_truncates_to_zero() {
        let ideal = HomogeneousIdeal::monomial(2, &[&[1, 1]]).unwrap();
        let s = shifts(&ideal, 0.5, 10);
        let t = assemble_polynomial(&s, &PolyMatrix::scalar(mono(&[1, 1])), (0, 10)).unwrap();
        assert!(max_abs(&t.to_dense()) < 1e-12);
        assert!(operator_norm(&t) < 1e-12);
    }

    #[test]
    fn zero_polynomial_has_zero_norm() {
        let s = shifts(&HomogeneousIdeal::zero(2).unwrap(), 0.5, 4);
        let t = assemble_polynomial(&s, &PolyMatrix::scalar(Polynomial::zero(2)), (0, 4)).unwrap();
        assert_eq!(operator_norm(&t), 0.0);
    }

    #[test]
    fn window_errors() {
        let s = shifts(&HomogeneousIdeal::zero(2).unwrap(), 0.5, 4);
        let p = PolyMatrix::scalar(mono(&[1, 0]));
        assert!(matches!(
            assemble_polynomial(&s, &p, (0, 5)),
            Err(LabError::DegreeOverflow { .. })
        ));
        assert!(matches!(
            assemble_polynomial(&s, &p, (3, 2)),
            Err(LabError::InvalidWindow { .. })
        ));
        let t = assemble_polynomial(&s, &PolyMatrix::scalar(mono(&[2, 1])), (1, 2)).unwrap();
        assert_eq!(t.warnings().len(), 1);
    }

    #[test]
    fn lanczos_and_dense_paths_agree_on_mixed_degrees() {
        let w = 0.3;
        let p = Polynomial::constant(2, Complex::new(w, 0.0))
            .add(&mono(&[1, 0]))
            .add(&mono(&[0, 2]).scale(Complex::new(0.0, 0.7)));
        let ideal = HomogeneousIdeal::monomial(2, &[&[2, 1]]).unwrap();
        let s = shifts(&ideal, 1.0, 30);
        let t = assemble_polynomial(&s, &PolyMatrix::scalar(p), (5, 30)).unwrap();
        let dense = spectral_norm(&t.to_dense());
        let via_default = operator_norm(&t);
        let via_lanczos = operator_norm_with(
            &t,
            NormOptions {
                dense_threshold: 10,
                ..Default::default()
            },
        );
        assert!((via_default - dense).abs() < 1e-12);
        assert!((via_lanczos - dense).abs() < 1e-9 * dense, "{via_lanczos} vs {dense}");
    }

    #[test]
    fn matrix_polynomial_layout() {
        let s = shifts(&HomogeneousIdeal::zero(2).unwrap(), 0.5, 6);
        let z1 = mono(&[1, 0]);
        let z2 = mono(&[0, 1]);
        let p = PolyMatrix::new(1, 2, vec![z1, z2]).unwrap();
        let t = assemble_polynomial(&s, &p, (1, 6)).unwrap();
        assert_eq!(t.ncols(), 2 * t.nrows());
        // row contraction [S_1 S_2] has norm at most one
        let nrm = operator_norm(&t);
        assert!(nrm <= 1.0 + 1e-12 && nrm > 0.9);
    }
}
