//! Multivariate polynomials with complex coefficients.
//!
//! Monomials are ordered graded-lexicographically: first by total degree,
//! then lexicographically with `z_1 > z_2 > ... > z_d`. Within a fixed degree
//! the first monomial is `z_1^n` and the last is `z_d^n`. Every basis and
//! block matrix in the crate uses this order.

mod weights;

pub use weights::{
    besov_weight, inner_product, monomial_norm_sq, monomial_norm_sq_exact, multinomial,
    WeightScheme,
};

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

pub type Complex = Complex64;

/// Exponent tuple `α = (α_1, ..., α_d)` with its total degree cached.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    exponents: Vec<u32>,
    degree: usize,
}

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        let degree = exponents.iter().map(|&e| e as usize).sum();
        Self { exponents, degree }
    }

    pub fn zero(d: usize) -> Self {
        Self::new(vec![0; d])
    }

    /// The exponent of the coordinate function `z_i` (zero-based).
    pub fn unit(d: usize, i: usize) -> Self {
        let mut e = vec![0; d];
        e[i] = 1;
        Self::new(e)
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn plus(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.dim(), other.dim());
        MultiIndex::new(
            self.exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn incremented(&self, i: usize) -> MultiIndex {
        let mut e = self.exponents.clone();
        e[i] += 1;
        MultiIndex {
            exponents: e,
            degree: self.degree + 1,
        }
    }

    /// `α - e_i`, or `None` when `α_i = 0`.
    pub fn decremented(&self, i: usize) -> Option<MultiIndex> {
        if self.exponents[i] == 0 {
            return None;
        }
        let mut e = self.exponents.clone();
        e[i] -= 1;
        Some(MultiIndex {
            exponents: e,
            degree: self.degree - 1,
        })
    }

    /// `z^α` evaluated at `z`.
    pub fn eval(&self, z: &[Complex]) -> Complex {
        self.exponents
            .iter()
            .zip(z)
            .fold(Complex::new(1.0, 0.0), |acc, (&e, &zi)| acc * zi.powu(e))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| other.exponents.cmp(&self.exponents))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exponents)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "z{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Number of monomials of degree `n` in `d` variables, `C(n+d-1, d-1)`.
pub fn monomial_count(d: usize, n: usize) -> usize {
    let mut c: u128 = 1;
    for k in 1..d {
        c = c * (n + k) as u128 / k as u128;
    }
    c as usize
}

/// All monomials of degree `n` in `d` variables, in graded-lex order.
pub fn monomials(d: usize, n: usize) -> Vec<MultiIndex> {
    fn fill(d: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if prefix.len() == d - 1 {
            prefix.push(remaining);
            out.push(MultiIndex::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=remaining).rev() {
            prefix.push(e);
            fill(d, remaining - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::with_capacity(monomial_count(d, n));
    fill(d, n as u32, &mut Vec::with_capacity(d), &mut out);
    out
}

/// The ordered monomials of one degree with a position lookup.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    d: usize,
    degree: usize,
    monomials: Vec<MultiIndex>,
    index: HashMap<MultiIndex, usize>,
}

impl MonomialBasis {
    pub fn new(d: usize, degree: usize) -> Self {
        let monomials = monomials(d, degree);
        let index = monomials
            .iter()
            .enumerate()
            .map(|(k, m)| (m.clone(), k))
            .collect();
        Self {
            d,
            degree,
            monomials,
            index,
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[MultiIndex] {
        &self.monomials
    }

    pub fn position(&self, alpha: &MultiIndex) -> Option<usize> {
        self.index.get(alpha).copied()
    }
}

/// One serialized coefficient: exponent tuple plus real and imaginary part.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub exp: Vec<u32>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// A polynomial whose terms all share one total degree.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousPolynomial {
    d: usize,
    degree: usize,
    coeffs: BTreeMap<MultiIndex, Complex>,
}

impl HomogeneousPolynomial {
    pub fn zero(d: usize, degree: usize) -> Self {
        Self {
            d,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn monomial(alpha: MultiIndex, coeff: Complex) -> Self {
        let mut p = Self::zero(alpha.dim(), alpha.degree());
        if coeff != Complex::new(0.0, 0.0) {
            p.coeffs.insert(alpha, coeff);
        }
        p
    }

    /// Builds from `(alpha, coefficient)` pairs; exact zeros are dropped and
    /// repeated exponents are summed.
    pub fn from_terms<I>(d: usize, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Complex)>,
    {
        let mut p = Self::zero(d, degree);
        for (alpha, c) in terms {
            if alpha.dim() != d {
                return Err(LabError::DimensionMismatch {
                    expected: d,
                    found: alpha.dim(),
                });
            }
            if alpha.degree() != degree {
                return Err(LabError::NotHomogeneous {
                    degrees: vec![degree, alpha.degree()],
                });
            }
            *p.coeffs.entry(alpha).or_insert(Complex::new(0.0, 0.0)) += c;
        }
        p.coeffs.retain(|_, c| *c != Complex::new(0.0, 0.0));
        Ok(p)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Complex {
        self.coeffs
            .get(alpha)
            .copied()
            .unwrap_or(Complex::new(0.0, 0.0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex)> {
        self.coeffs.iter()
    }

    pub fn evaluate(&self, z: &[Complex]) -> Complex {
        assert_eq!(z.len(), self.d, "point dimension");
        self.coeffs.iter().map(|(a, c)| c * a.eval(z)).sum()
    }

    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial {
            d: self.d,
            coeffs: self.coeffs.clone(),
        }
    }
}

/// A general polynomial, kept as a sparse coefficient map.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    d: usize,
    coeffs: BTreeMap<MultiIndex, Complex>,
}

impl Polynomial {
    pub fn zero(d: usize) -> Self {
        Self {
            d,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(d: usize, c: Complex) -> Self {
        Self::monomial(MultiIndex::zero(d), c)
    }

    /// The coordinate function `z_i` (zero-based).
    pub fn variable(d: usize, i: usize) -> Self {
        Self::monomial(MultiIndex::unit(d, i), Complex::new(1.0, 0.0))
    }

    pub fn monomial(alpha: MultiIndex, c: Complex) -> Self {
        let mut p = Self::zero(alpha.dim());
        if c != Complex::new(0.0, 0.0) {
            p.coeffs.insert(alpha, c);
        }
        p
    }

    pub fn from_terms<I>(d: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Complex)>,
    {
        let mut p = Self::zero(d);
        for (alpha, c) in terms {
            if alpha.dim() != d {
                return Err(LabError::DimensionMismatch {
                    expected: d,
                    found: alpha.dim(),
                });
            }
            *p.coeffs.entry(alpha).or_insert(Complex::new(0.0, 0.0)) += c;
        }
        p.coeffs.retain(|_, c| *c != Complex::new(0.0, 0.0));
        Ok(p)
    }

    pub fn from_records(d: usize, records: &[TermRecord]) -> Result<Self> {
        Self::from_terms(
            d,
            records
                .iter()
                .map(|r| (MultiIndex::new(r.exp.clone()), Complex::new(r.re, r.im))),
        )
    }

    pub fn to_records(&self) -> Vec<TermRecord> {
        self.coeffs
            .iter()
            .map(|(a, c)| TermRecord {
                exp: a.exponents().to_vec(),
                re: c.re,
                im: c.im,
            })
            .collect()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Complex {
        self.coeffs
            .get(alpha)
            .copied()
            .unwrap_or(Complex::new(0.0, 0.0))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.keys().map(|a| a.degree()).max()
    }

    /// Degree of the lowest nonzero homogeneous part.
    pub fn min_degree(&self) -> Option<usize> {
        self.coeffs.keys().map(|a| a.degree()).min()
    }

    /// The common degree when all terms share one; the zero polynomial
    /// reports `Some(0)`.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        match (self.min_degree(), self.degree()) {
            (None, None) => Some(0),
            (Some(lo), Some(hi)) if lo == hi => Some(lo),
            _ => None,
        }
    }

    /// Nonzero homogeneous components, ordered by degree.
    pub fn homogeneous_parts(&self) -> Vec<HomogeneousPolynomial> {
        let mut parts: BTreeMap<usize, HomogeneousPolynomial> = BTreeMap::new();
        for (a, c) in &self.coeffs {
            parts
                .entry(a.degree())
                .or_insert_with(|| HomogeneousPolynomial::zero(self.d, a.degree()))
                .coeffs
                .insert(a.clone(), *c);
        }
        parts.into_values().collect()
    }

    pub fn into_homogeneous(self) -> Result<HomogeneousPolynomial> {
        match self.homogeneous_degree() {
            Some(degree) => Ok(HomogeneousPolynomial {
                d: self.d,
                degree,
                coeffs: self.coeffs,
            }),
            None => {
                let mut degrees: Vec<usize> = self.coeffs.keys().map(|a| a.degree()).collect();
                degrees.dedup();
                Err(LabError::NotHomogeneous { degrees })
            }
        }
    }

    pub fn evaluate(&self, z: &[Complex]) -> Complex {
        assert_eq!(z.len(), self.d, "point dimension");
        self.coeffs.iter().map(|(a, c)| c * a.eval(z)).sum()
    }

    /// Coefficient convolution.
    pub fn multiply(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.d, other.d, "polynomial dimension");
        let mut out = Polynomial::zero(self.d);
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                *out.coeffs
                    .entry(a.plus(b))
                    .or_insert(Complex::new(0.0, 0.0)) += ca * cb;
            }
        }
        out.coeffs.retain(|_, c| *c != Complex::new(0.0, 0.0));
        out
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.d, other.d, "polynomial dimension");
        let mut out = self.clone();
        for (b, cb) in &other.coeffs {
            *out.coeffs.entry(b.clone()).or_insert(Complex::new(0.0, 0.0)) += cb;
        }
        out.coeffs.retain(|_, c| *c != Complex::new(0.0, 0.0));
        out
    }

    pub fn scale(&self, s: Complex) -> Polynomial {
        let mut out = self.clone();
        out.coeffs.values_mut().for_each(|c| *c *= s);
        out.coeffs.retain(|_, c| *c != Complex::new(0.0, 0.0));
        out
    }

    /// Holomorphic partial derivative in `z_i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.d);
        for (a, c) in &self.coeffs {
            if let Some(b) = a.decremented(i) {
                out.coeffs.insert(b, c * a.exponents()[i] as f64);
            }
        }
        out
    }
}

impl From<HomogeneousPolynomial> for Polynomial {
    fn from(p: HomogeneousPolynomial) -> Self {
        Polynomial {
            d: p.d,
            coeffs: p.coeffs,
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (a, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.im == 0.0 && c.re == 1.0 && a.degree() > 0 {
                write!(f, "{a}")?;
                continue;
            } else if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({}{:+}i)", c.re, c.im)?;
            }
            if a.degree() > 0 {
                write!(f, "*{a}")?;
            }
        }
        Ok(())
    }
}

/// An `r x c` matrix whose entries are polynomials in the same `d` variables.
/// A scalar polynomial is the `1 x 1` case.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    d: usize,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    /// `entries` is row-major.
    pub fn new(rows: usize, cols: usize, entries: Vec<Polynomial>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(LabError::InvalidArgument(format!(
                "polynomial matrix {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        let d = entries[0].d();
        if let Some(bad) = entries.iter().find(|p| p.d() != d) {
            return Err(LabError::DimensionMismatch {
                expected: d,
                found: bad.d(),
            });
        }
        Ok(Self {
            d,
            rows,
            cols,
            entries,
        })
    }

    pub fn scalar(p: Polynomial) -> Self {
        Self {
            d: p.d(),
            rows: 1,
            cols: 1,
            entries: vec![p],
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> &Polynomial {
        &self.entries[r * self.cols + c]
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn degree(&self) -> usize {
        self.entries
            .iter()
            .filter_map(|p| p.degree())
            .max()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    /// Every homogeneous degree that occurs in some entry.
    pub fn degrees(&self) -> Vec<usize> {
        let mut ds: Vec<usize> = self
            .entries
            .iter()
            .flat_map(|p| p.terms().map(|(a, _)| a.degree()))
            .collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    /// Entry-wise homogeneous component of degree `k` (zero entries where absent).
    pub fn homogeneous_part(&self, k: usize) -> Vec<HomogeneousPolynomial> {
        self.entries
            .iter()
            .map(|p| {
                HomogeneousPolynomial::from_terms(
                    self.d,
                    k,
                    p.terms()
                        .filter(|(a, _)| a.degree() == k)
                        .map(|(a, c)| (a.clone(), *c)),
                )
                .expect("filtered to a single degree")
            })
            .collect()
    }

    /// The Gelfand transform `z -> [p_ij(z)]`, row-major.
    pub fn evaluate(&self, z: &[Complex]) -> nalgebra::DMatrix<Complex> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |r, c| self.entry(r, c).evaluate(z))
    }

    pub fn derivative(&self, i: usize) -> PolyMatrix {
        PolyMatrix {
            d: self.d,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|p| p.derivative(i)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex {
        Complex::new(re, 0.0)
    }

    fn mono(e: &[u32]) -> Polynomial {
        Polynomial::monomial(MultiIndex::new(e.to_vec()), c(1.0))
    }

    #[test]
    fn grlex_order_within_degree() {
        let ms = monomials(2, 2);
        let exps: Vec<_> = ms.iter().map(|m| m.exponents().to_vec()).collect();
        assert_eq!(exps, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        let mut sorted = ms.clone();
        sorted.reverse();
        sorted.sort();
        assert_eq!(sorted, ms);
        assert!(MultiIndex::new(vec![0, 1]) < MultiIndex::new(vec![2, 0]));
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomial_count(2, 5), 6);
        assert_eq!(monomial_count(3, 3), 10);
        for d in 2..5 {
            for n in 0..8 {
                assert_eq!(monomials(d, n).len(), monomial_count(d, n));
            }
        }
    }

    #[test]
    fn multiply_examples() {
        let z1 = Polynomial::variable(2, 0);
        let z2 = Polynomial::variable(2, 1);
        assert_eq!(z1.multiply(&z2), mono(&[1, 1]));

        let s = z1.add(&z2);
        let sq = s.multiply(&s);
        assert_eq!(sq.coeff(&MultiIndex::new(vec![2, 0])), c(1.0));
        assert_eq!(sq.coeff(&MultiIndex::new(vec![1, 1])), c(2.0));
        assert_eq!(sq.coeff(&MultiIndex::new(vec![0, 2])), c(1.0));
        assert_eq!(sq.terms().count(), 3);

        assert_eq!(mono(&[1, 1]).multiply(&mono(&[2, 0])), mono(&[3, 1]));
    }

    #[test]
    fn evaluate_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v = mono(&[1, 1]).evaluate(&[c(h), c(h)]);
        assert!((v - c(0.5)).norm() < 1e-15);

        let p = Polynomial::constant(2, Complex::new(3.0, -1.0)).add(&mono(&[1, 2]));
        assert_eq!(p.evaluate(&[c(0.0), c(0.0)]), Complex::new(3.0, -1.0));

        assert_eq!(Polynomial::variable(2, 0).evaluate(&[c(1.0), c(0.0)]), c(1.0));
    }

    #[test]
    fn homogeneous_checks() {
        let p = mono(&[1, 0]).add(&mono(&[0, 2]));
        assert!(p.homogeneous_degree().is_none());
        assert!(p.clone().into_homogeneous().is_err());
        assert_eq!(p.homogeneous_parts().len(), 2);
        assert_eq!(Polynomial::zero(2).homogeneous_degree(), Some(0));

        let bad = HomogeneousPolynomial::from_terms(
            2,
            2,
            vec![(MultiIndex::new(vec![1, 0]), c(1.0))],
        );
        assert!(matches!(bad, Err(LabError::NotHomogeneous { .. })));
    }

    #[test]
    fn zero_coefficients_are_not_stored() {
        let p = Polynomial::from_terms(
            2,
            vec![
                (MultiIndex::new(vec![1, 0]), c(1.0)),
                (MultiIndex::new(vec![1, 0]), c(-1.0)),
                (MultiIndex::new(vec![0, 1]), c(0.0)),
            ],
        )
        .unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn derivative_of_monomial() {
        let p = mono(&[3, 2]);
        let dp = p.derivative(0);
        assert_eq!(dp.coeff(&MultiIndex::new(vec![2, 2])), c(3.0));
        assert!(p.derivative(1).derivative(1).derivative(1).is_zero());
    }

    #[test]
    fn records_round_trip() {
        let p = Polynomial::from_terms(
            3,
            vec![
                (MultiIndex::new(vec![1, 0, 2]), Complex::new(0.5, -2.0)),
                (MultiIndex::new(vec![0, 0, 0]), c(4.0)),
            ],
        )
        .unwrap();
        let q = Polynomial::from_records(3, &p.to_records()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn display_is_readable() {
        let p = mono(&[2, 1]).add(&Polynomial::constant(2, c(1.0)));
        assert_eq!(p.to_string(), "1 + z1^2*z2");
    }
}
