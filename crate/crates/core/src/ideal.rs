//! Homogeneous ideals and the graded complement `F_I = ⊕_n H_n`.
//!
//! Everything here lives in *weighted monomial coordinates*: a degree-`n`
//! polynomial `Σ p_α z^α` is the vector `(p_α ‖z^α‖)_α`, so the weighted inner
//! product becomes the Euclidean one and orthonormal bases are plain unitary
//! columns.

use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::linalg::{CMatrix, CVector};
use crate::poly::{
    monomial_count, Complex, HomogeneousPolynomial, MonomialBasis, MultiIndex, Polynomial,
    WeightScheme,
};

pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// An ideal generated by nonzero homogeneous polynomials. The zero ideal has
/// no generators.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousIdeal {
    d: usize,
    generators: Vec<HomogeneousPolynomial>,
}

impl HomogeneousIdeal {
    pub fn new(d: usize, generators: Vec<HomogeneousPolynomial>) -> Result<Self> {
        if d < 2 {
            return Err(LabError::DimensionTooSmall(d));
        }
        for (k, g) in generators.iter().enumerate() {
            if g.d() != d {
                return Err(LabError::DimensionMismatch {
                    expected: d,
                    found: g.d(),
                });
            }
            if g.is_zero() {
                return Err(LabError::ZeroGenerator(k));
            }
        }
        Ok(Self { d, generators })
    }

    pub fn zero(d: usize) -> Result<Self> {
        Self::new(d, Vec::new())
    }

    /// Accepts general polynomials and rejects any that is not homogeneous.
    pub fn from_polynomials(d: usize, generators: Vec<Polynomial>) -> Result<Self> {
        let gens = generators
            .into_iter()
            .map(|g| g.into_homogeneous())
            .collect::<Result<Vec<_>>>()?;
        Self::new(d, gens)
    }

    /// The monomial ideal generated by the given exponent tuples.
    pub fn monomial(d: usize, exponents: &[&[u32]]) -> Result<Self> {
        let gens = exponents
            .iter()
            .map(|e| HomogeneousPolynomial::monomial(MultiIndex::new(e.to_vec()), Complex::new(1.0, 0.0)))
            .collect();
        Self::new(d, gens)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn generators(&self) -> &[HomogeneousPolynomial] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// `max_j |g_j(z)|`, zero for the zero ideal.
    pub fn residual(&self, z: &[Complex]) -> f64 {
        self.generators
            .iter()
            .map(|g| g.evaluate(z).norm())
            .fold(0.0, f64::max)
    }
}

/// Weighted coordinates of a homogeneous polynomial in `basis`.
pub fn weighted_coordinates(
    p: &HomogeneousPolynomial,
    basis: &MonomialBasis,
    w: &WeightScheme,
) -> CVector {
    let mut v = CVector::zeros(basis.len());
    for (a, c) in p.terms() {
        let k = basis.position(a).expect("monomial of the basis degree");
        v[k] = c * w.norm_sq(a).sqrt();
    }
    v
}

/// Inverse of [`weighted_coordinates`].
pub fn from_weighted_coordinates(
    v: &CVector,
    basis: &MonomialBasis,
    w: &WeightScheme,
) -> HomogeneousPolynomial {
    HomogeneousPolynomial::from_terms(
        basis.d(),
        basis.degree(),
        basis
            .monomials()
            .iter()
            .zip(v.iter())
            .map(|(a, c)| (a.clone(), c / w.norm_sq(a).sqrt())),
    )
    .expect("basis monomials share one degree")
}

/// The spanning set `{ z^β g_j : |β| + deg g_j = n }`, one unit column per
/// product, in weighted coordinates (`weighted = true`) or in plain
/// coefficients.
fn ideal_spanning_matrix(
    ideal: &HomogeneousIdeal,
    basis: &MonomialBasis,
    w: &WeightScheme,
    weighted: bool,
) -> CMatrix {
    let n = basis.degree();
    let mut columns: Vec<CVector> = Vec::new();
    for g in ideal.generators().iter().filter(|g| g.degree() <= n) {
        for beta in crate::poly::monomials(ideal.d(), n - g.degree()) {
            let mut col = CVector::zeros(basis.len());
            for (a, c) in g.terms() {
                let ab = a.plus(&beta);
                let k = basis.position(&ab).expect("product has degree n");
                col[k] += if weighted { c * w.norm_sq(&ab).sqrt() } else { *c };
            }
            let norm = col.norm();
            if norm > 0.0 {
                col /= Complex::new(norm, 0.0);
            }
            columns.push(col);
        }
    }
    if columns.is_empty() {
        return CMatrix::zeros(basis.len(), 0);
    }
    CMatrix::from_columns(&columns)
}

/// Column-pivoted Householder QR: `|R_kk|` (non-increasing) and the first
/// columns of `Q`.
fn pivoted_qr(m: CMatrix) -> (Vec<f64>, CMatrix) {
    let qr = m.col_piv_qr();
    let r = qr.r();
    let diag = (0..r.nrows().min(r.ncols())).map(|k| r[(k, k)].norm()).collect();
    (diag, qr.q())
}

/// The rank is decided on plain coefficients, which are free of the weights'
/// dynamic range (`α!/|α|!` spans many orders of magnitude at high degree);
/// the basis itself comes from the weighted columns.
fn ideal_basis_in(
    ideal: &HomogeneousIdeal,
    basis: &MonomialBasis,
    w: &WeightScheme,
    tol: f64,
) -> CMatrix {
    let plain = ideal_spanning_matrix(ideal, basis, w, false);
    if plain.ncols() == 0 {
        return CMatrix::zeros(basis.len(), 0);
    }
    let (diag, _) = pivoted_qr(plain);
    let top = diag.first().copied().unwrap_or(0.0);
    let rank = diag.iter().take_while(|&&s| top > 0.0 && s > tol * top).count();
    if rank == 0 {
        return CMatrix::zeros(basis.len(), 0);
    }
    let (_, q) = pivoted_qr(ideal_spanning_matrix(ideal, basis, w, true));
    q.columns(0, rank).into_owned()
}

/// Orthonormal complement of the columns of `q` (assumed orthonormal).
///
/// Column-pivoted Gram-Schmidt over the projected standard basis: each step
/// takes the monomial direction with the largest remaining component, so for
/// monomial ideals the result is exactly the surviving monomials.
fn orthogonal_complement(q: &CMatrix) -> CMatrix {
    let dim = q.nrows();
    let target = dim - q.ncols();
    if q.ncols() == 0 {
        return CMatrix::identity(dim, dim);
    }
    // residual columns (I - Q Q^H) e_k
    let mut cols: Vec<CVector> = (0..dim)
        .map(|k| {
            let mut e = CVector::zeros(dim);
            e[k] = Complex::new(1.0, 0.0);
            let coeffs = q.row(k).adjoint();
            e - q * coeffs
        })
        .collect();
    let mut chosen: Vec<CVector> = Vec::with_capacity(target);
    let mut used = vec![false; dim];
    for _ in 0..target {
        let (k, _) = cols
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, c)| (k, c.norm_squared()))
            .fold((usize::MAX, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        used[k] = true;
        let mut v = cols[k].clone();
        // second pass against Q and the chosen columns
        for _ in 0..2 {
            let c = q.ad_mul(&v);
            v -= q * c;
            for u in &chosen {
                let c = u.dotc(&v);
                v -= u * c;
            }
        }
        let nv = v.norm();
        v /= Complex::new(nv, 0.0);
        for (j, col) in cols.iter_mut().enumerate() {
            if !used[j] {
                let c = v.dotc(col);
                *col -= &v * c;
            }
        }
        chosen.push(v);
    }
    if chosen.is_empty() {
        return CMatrix::zeros(dim, 0);
    }
    CMatrix::from_columns(&chosen)
}

/// Orthonormal (under `w`) basis of `I_n`, as weighted-coordinate columns.
pub fn ideal_degree_basis(
    ideal: &HomogeneousIdeal,
    n: usize,
    w: &WeightScheme,
    tol: f64,
) -> CMatrix {
    ideal_basis_in(ideal, &MonomialBasis::new(ideal.d(), n), w, tol)
}

/// Orthonormal (under `w`) basis of `H_n = (degree-n polynomials) ⊖ I_n`.
pub fn complement_basis(ideal: &HomogeneousIdeal, n: usize, w: &WeightScheme, tol: f64) -> CMatrix {
    orthogonal_complement(&ideal_degree_basis(ideal, n, w, tol))
}

/// Bases for a single degree.
#[derive(Clone, Debug)]
pub struct DegreeBasis {
    pub monomials: Arc<MonomialBasis>,
    /// Columns span `I_n`.
    pub ideal: CMatrix,
    /// Columns span `H_n`.
    pub complement: CMatrix,
    /// True when `I_n = 0`, so `complement` is the identity.
    pub complement_is_full: bool,
}

impl DegreeBasis {
    pub fn dim_total(&self) -> usize {
        self.monomials.len()
    }

    pub fn dim_ideal(&self) -> usize {
        self.ideal.ncols()
    }

    pub fn dim_complement(&self) -> usize {
        self.complement.ncols()
    }
}

/// Per-degree orthonormal bases of `I_n` and `H_n` for `0 <= n <= n_max`.
#[derive(Clone, Debug)]
pub struct GradedComplementBasis {
    ideal: HomogeneousIdeal,
    weights: WeightScheme,
    tol: f64,
    degrees: Vec<DegreeBasis>,
}

impl GradedComplementBasis {
    /// Builds every degree independently (in parallel) and merges in order.
    pub fn build(
        ideal: &HomogeneousIdeal,
        weights: WeightScheme,
        n_max: usize,
        tol: f64,
    ) -> Result<Self> {
        if ideal.d() != weights.d() {
            return Err(LabError::DimensionMismatch {
                expected: weights.d(),
                found: ideal.d(),
            });
        }
        let degrees = (0..=n_max)
            .into_par_iter()
            .map(|n| {
                let monomials = Arc::new(MonomialBasis::new(ideal.d(), n));
                let ideal_cols = ideal_basis_in(ideal, &monomials, &weights, tol);
                let complement_is_full = ideal_cols.ncols() == 0;
                let complement = orthogonal_complement(&ideal_cols);
                DegreeBasis {
                    monomials,
                    ideal: ideal_cols,
                    complement,
                    complement_is_full,
                }
            })
            .collect();
        Ok(Self {
            ideal: ideal.clone(),
            weights,
            tol,
            degrees,
        })
    }

    pub fn ideal(&self) -> &HomogeneousIdeal {
        &self.ideal
    }

    pub fn weights(&self) -> &WeightScheme {
        &self.weights
    }

    pub fn rank_tol(&self) -> f64 {
        self.tol
    }

    pub fn n_max(&self) -> usize {
        self.degrees.len() - 1
    }

    pub fn degree(&self, n: usize) -> Result<&DegreeBasis> {
        self.degrees.get(n).ok_or(LabError::DegreeOverflow {
            requested: n,
            n_max: self.n_max(),
        })
    }

    pub fn dim(&self, n: usize) -> usize {
        self.degrees.get(n).map_or(0, |b| b.dim_complement())
    }

    /// Coordinates of a homogeneous polynomial with respect to the
    /// complement basis of its degree (the projection onto `H_n`).
    pub fn project(&self, p: &HomogeneousPolynomial) -> Result<CVector> {
        let b = self.degree(p.degree())?;
        let x = weighted_coordinates(p, &b.monomials, &self.weights);
        Ok(if b.complement_is_full {
            x
        } else {
            b.complement.ad_mul(&x)
        })
    }

    /// The polynomial represented by complement coordinates `y` at degree `n`.
    pub fn lift(&self, n: usize, y: &CVector) -> Result<HomogeneousPolynomial> {
        let b = self.degree(n)?;
        let x: CVector = &b.complement * y;
        Ok(from_weighted_coordinates(&x, &b.monomials, &self.weights))
    }

    pub fn dimension_table(&self) -> Vec<DimensionRow> {
        self.degrees
            .iter()
            .enumerate()
            .map(|(n, b)| DimensionRow {
                n,
                dim_total: b.dim_total(),
                dim_ideal: b.dim_ideal(),
                dim_complement: b.dim_complement(),
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionRow {
    pub n: usize,
    pub dim_total: usize,
    pub dim_ideal: usize,
    pub dim_complement: usize,
}

/// `n -> dim H_n` for `n <= n_max`, with a warning when the tail vanishes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HilbertFunction {
    pub rows: Vec<DimensionRow>,
    pub warning: Option<String>,
}

impl HilbertFunction {
    pub fn values(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.dim_complement).collect()
    }

    /// CSV with columns `n, dim_total, dim_ideal, dim_complement`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        for row in &self.rows {
            wtr.serialize(row)?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// The Hilbert function of `C[z]/I`. Dimensions do not depend on σ, so the
/// Drury-Arveson weights are used.
pub fn hilbert_function(ideal: &HomogeneousIdeal, n_max: usize, tol: f64) -> HilbertFunction {
    let w = WeightScheme::drury_arveson(ideal.d()).expect("ideal has d >= 2");
    let rows: Vec<DimensionRow> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let total = monomial_count(ideal.d(), n);
            let dim_ideal = ideal_degree_basis(ideal, n, &w, tol).ncols();
            DimensionRow {
                n,
                dim_total: total,
                dim_ideal,
                dim_complement: total - dim_ideal,
            }
        })
        .collect();
    // For homogeneous ideals H_n = 0 forces H_{n+1} = 0, so a zero last entry
    // means the whole tail vanishes.
    let warning = match rows.last() {
        Some(r) if r.dim_complement == 0 => Some(format!(
            "dim H_n = 0 from degree {} on: the ideal appears to have finite co-dimension",
            rows.iter()
                .position(|r| r.dim_complement == 0)
                .unwrap_or(r.n)
        )),
        _ => None,
    };
    HilbertFunction { rows, warning }
}

/// Applies the weighted multiplication operator `M_p` to a vector of
/// weighted coordinates at degree `n`, returning coordinates at `n + deg p`.
pub(crate) fn multiplication_matrix(
    p: &HomogeneousPolynomial,
    from: &MonomialBasis,
    to: &MonomialBasis,
    w: &WeightScheme,
) -> CMatrix {
    debug_assert_eq!(from.degree() + p.degree(), to.degree());
    let mut m = CMatrix::zeros(to.len(), from.len());
    for (j, a) in from.monomials().iter().enumerate() {
        let wa = w.norm_sq(a);
        for (b, c) in p.terms() {
            let ab = a.plus(b);
            let i = to.position(&ab).expect("product degree");
            m[(i, j)] += c * (w.norm_sq(&ab) / wa).sqrt();
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;

    fn z1z2() -> HomogeneousIdeal {
        HomogeneousIdeal::monomial(2, &[&[1, 1]]).unwrap()
    }

    fn gram_defect(m: &CMatrix) -> f64 {
        let g = m.ad_mul(m);
        max_abs(&(g - CMatrix::identity(m.ncols(), m.ncols())))
    }

    #[test]
    fn ideal_dimensions_by_enumeration() {
        let da = WeightScheme::drury_arveson(2).unwrap();
        assert_eq!(ideal_degree_basis(&z1z2(), 3, &da, DEFAULT_RANK_TOL).ncols(), 2);
        let zero = HomogeneousIdeal::zero(2).unwrap();
        for n in 0..6 {
            assert_eq!(ideal_degree_basis(&zero, n, &da, DEFAULT_RANK_TOL).ncols(), 0);
        }
        let sq = HomogeneousIdeal::monomial(2, &[&[2, 0]]).unwrap();
        assert_eq!(ideal_degree_basis(&sq, 2, &da, DEFAULT_RANK_TOL).ncols(), 1);
    }

    #[test]
    fn complement_examples() {
        let da = WeightScheme::drury_arveson(2).unwrap();
        let h4 = complement_basis(&z1z2(), 4, &da, DEFAULT_RANK_TOL);
        assert_eq!(h4.ncols(), 2);
        // the complement is spanned by the pure powers z1^4 and z2^4
        let basis = MonomialBasis::new(2, 4);
        let i40 = basis.position(&MultiIndex::new(vec![4, 0])).unwrap();
        let i04 = basis.position(&MultiIndex::new(vec![0, 4])).unwrap();
        let mut proj = &h4 * h4.adjoint();
        proj[(i40, i40)] -= Complex::new(1.0, 0.0);
        proj[(i04, i04)] -= Complex::new(1.0, 0.0);
        assert!(max_abs(&proj) < 1e-12);

        let zero = HomogeneousIdeal::zero(2).unwrap();
        assert_eq!(complement_basis(&zero, 5, &da, DEFAULT_RANK_TOL).ncols(), 6);

        let sq = HomogeneousIdeal::monomial(2, &[&[2, 0]]).unwrap();
        for n in 1..10 {
            assert_eq!(complement_basis(&sq, n, &da, DEFAULT_RANK_TOL).ncols(), 2);
        }
    }

    #[test]
    fn monomial_ideal_complement_is_monomial() {
        let w = WeightScheme::new(1.0, 2).unwrap();
        let h = complement_basis(&z1z2(), 5, &w, DEFAULT_RANK_TOL);
        for col in h.column_iter() {
            let nonzero = col.iter().filter(|z| z.norm() > 1e-14).count();
            assert_eq!(nonzero, 1);
        }
    }

    #[test]
    fn hilbert_function_examples() {
        let hf = hilbert_function(&z1z2(), 8, DEFAULT_RANK_TOL);
        assert_eq!(hf.values(), vec![1, 2, 2, 2, 2, 2, 2, 2, 2]);
        assert!(hf.warning.is_none());

        let zero3 = HomogeneousIdeal::zero(3).unwrap();
        assert_eq!(
            hilbert_function(&zero3, 4, DEFAULT_RANK_TOL).values(),
            vec![1, 3, 6, 10, 15]
        );

        let maximal = HomogeneousIdeal::monomial(2, &[&[1, 0], &[0, 1]]).unwrap();
        let hf = hilbert_function(&maximal, 5, DEFAULT_RANK_TOL);
        assert_eq!(hf.values(), vec![1, 0, 0, 0, 0, 0]);
        assert!(hf.warning.is_some());
    }

    #[test]
    fn hilbert_csv_columns() {
        let hf = hilbert_function(&z1z2(), 2, DEFAULT_RANK_TOL);
        let mut buf = Vec::new();
        hf.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "n,dim_total,dim_ideal,dim_complement\n0,1,0,1\n1,2,0,2\n2,3,1,2\n"
        );
    }

    #[test]
    fn graded_basis_orthonormal_for_generic_ideal() {
        let g = Polynomial::from_terms(
            3,
            vec![
                (MultiIndex::new(vec![1, 1, 0]), Complex::new(1.0, 0.3)),
                (MultiIndex::new(vec![0, 0, 2]), Complex::new(-0.7, 0.0)),
                (MultiIndex::new(vec![2, 0, 0]), Complex::new(0.2, -1.1)),
            ],
        )
        .unwrap();
        let ideal = HomogeneousIdeal::from_polynomials(3, vec![g]).unwrap();
        for sigma in [0.5, 1.0] {
            let w = WeightScheme::new(sigma, 3).unwrap();
            let gb = GradedComplementBasis::build(&ideal, w, 10, DEFAULT_RANK_TOL).unwrap();
            for n in 0..=10 {
                let b = gb.degree(n).unwrap();
                assert_eq!(b.dim_ideal() + b.dim_complement(), monomial_count(3, n));
                assert!(gram_defect(&b.complement) < 1e-10);
                assert!(gram_defect(&b.ideal) < 1e-10);
                assert!(max_abs(&b.ideal.ad_mul(&b.complement)) < 1e-10);
            }
        }
    }

    #[test]
    fn rejects_bad_generators() {
        let p = Polynomial::from_terms(
            2,
            vec![
                (MultiIndex::new(vec![1, 0]), Complex::new(1.0, 0.0)),
                (MultiIndex::new(vec![0, 2]), Complex::new(1.0, 0.0)),
            ],
        )
        .unwrap();
        assert!(matches!(
            HomogeneousIdeal::from_polynomials(2, vec![p]),
            Err(LabError::NotHomogeneous { .. })
        ));
        assert!(matches!(
            HomogeneousIdeal::new(2, vec![HomogeneousPolynomial::zero(2, 2)]),
            Err(LabError::ZeroGenerator(0))
        ));
    }

    #[test]
    fn project_and_lift_round_trip() {
        let w = WeightScheme::new(1.5, 2).unwrap();
        let gb = GradedComplementBasis::build(&z1z2(), w, 6, DEFAULT_RANK_TOL).unwrap();
        let p = HomogeneousPolynomial::monomial(MultiIndex::new(vec![0, 5]), Complex::new(2.0, 1.0));
        let y = gb.project(&p).unwrap();
        let back = gb.lift(5, &y).unwrap();
        assert!((back.coeff(&MultiIndex::new(vec![0, 5])) - Complex::new(2.0, 1.0)).norm() < 1e-12);
        assert!(gb.project(&HomogeneousPolynomial::zero(2, 7)).is_err());
    }
}
