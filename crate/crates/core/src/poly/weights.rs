//! Monomial weights of the Besov-Sobolev scale.
//!
//! Monomials are orthogonal, with `‖z^α‖² = c_{σ,|α|} · α!/|α|!` and
//! `c_{σ,n} = Γ(n+1)Γ(2σ)/Γ(2σ+n)`. At `σ = 1/2` every `c_{σ,n}` is one and
//! the space is Drury-Arveson.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use statrs::function::gamma::ln_gamma;

use super::{Complex, HomogeneousPolynomial, MultiIndex};
use crate::error::{LabError, Result};

/// The σ-parameterized weight system for a fixed number of variables.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightScheme {
    sigma: f64,
    d: usize,
}

impl WeightScheme {
    pub fn new(sigma: f64, d: usize) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(LabError::NonPositiveSigma(sigma));
        }
        if d < 2 {
            return Err(LabError::DimensionTooSmall(d));
        }
        Ok(Self { sigma, d })
    }

    pub fn drury_arveson(d: usize) -> Result<Self> {
        Self::new(0.5, d)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn is_drury_arveson(&self) -> bool {
        self.sigma == 0.5
    }

    /// `c_{σ,n}` for this scheme.
    pub fn degree_weight(&self, n: usize) -> f64 {
        besov_weight_unchecked(n, self.sigma)
    }

    /// `‖z^α‖²` without the dimension check.
    pub(crate) fn norm_sq(&self, alpha: &MultiIndex) -> f64 {
        self.degree_weight(alpha.degree()) / multinomial(alpha)
    }
}

/// `c_{σ,n} = Γ(n+1)Γ(2σ)/Γ(2σ+n)`.
///
/// When `2σ = s` is a positive integer this is `1/C(n+s-1, n)`, evaluated with
/// exact integer arithmetic; otherwise it goes through log-Gamma so that large
/// `n` cannot overflow.
pub fn besov_weight(n: usize, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(LabError::NonPositiveSigma(sigma));
    }
    Ok(besov_weight_unchecked(n, sigma))
}

fn besov_weight_unchecked(n: usize, sigma: f64) -> f64 {
    if n == 0 || sigma == 0.5 {
        return 1.0;
    }
    let two_sigma = 2.0 * sigma;
    let s = two_sigma.round();
    if s >= 1.0 && (two_sigma - s).abs() < 1e-14 {
        if let Some(b) = binomial_u128(n + s as usize - 1, n) {
            if b < (1u128 << 53) {
                return 1.0 / b as f64;
            }
        }
    }
    (ln_gamma(n as f64 + 1.0) + ln_gamma(two_sigma) - ln_gamma(two_sigma + n as f64)).exp()
}

fn binomial_u128(n: usize, k: usize) -> Option<u128> {
    let k = k.min(n - k);
    let mut b: u128 = 1;
    for j in 1..=k {
        b = b.checked_mul((n - k + j) as u128)? / j as u128;
    }
    Some(b)
}

/// The multinomial coefficient `|α|!/α!` as a float. Exact while it fits in
/// 53 bits.
pub fn multinomial(alpha: &MultiIndex) -> f64 {
    let mut acc: Option<u128> = Some(1);
    let mut running = 0usize;
    for &e in alpha.exponents() {
        running += e as usize;
        acc = acc.and_then(|a| binomial_u128(running, e as usize).and_then(|b| a.checked_mul(b)));
    }
    match acc {
        Some(m) if m < (1u128 << 53) => m as f64,
        Some(m) => m as f64,
        None => {
            let ln = ln_gamma(alpha.degree() as f64 + 1.0)
                - alpha
                    .exponents()
                    .iter()
                    .map(|&e| ln_gamma(e as f64 + 1.0))
                    .sum::<f64>();
            ln.exp()
        }
    }
}

/// `‖z^α‖²` in `B²_σ`.
pub fn monomial_norm_sq(alpha: &MultiIndex, w: &WeightScheme) -> Result<f64> {
    if alpha.dim() != w.d() {
        return Err(LabError::DimensionMismatch {
            expected: w.d(),
            found: alpha.dim(),
        });
    }
    Ok(w.norm_sq(alpha))
}

/// `α!/|α|!` as an exact rational (the Drury-Arveson monomial norm).
pub fn monomial_norm_sq_exact(alpha: &MultiIndex) -> BigRational {
    fn factorial(n: u32) -> BigInt {
        (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
    }
    let num = alpha
        .exponents()
        .iter()
        .fold(BigInt::one(), |acc, &e| acc * factorial(e));
    BigRational::new(num, factorial(alpha.degree() as u32))
}

/// `Σ_α p_α conj(q_α) ‖z^α‖²`; zero when the degrees differ.
pub fn inner_product(
    p: &HomogeneousPolynomial,
    q: &HomogeneousPolynomial,
    w: &WeightScheme,
) -> Result<Complex> {
    for found in [p.d(), q.d()] {
        if found != w.d() {
            return Err(LabError::DimensionMismatch {
                expected: w.d(),
                found,
            });
        }
    }
    if p.degree() != q.degree() {
        return Ok(Complex::new(0.0, 0.0));
    }
    Ok(p
        .terms()
        .map(|(a, pa)| pa * q.coeff(a).conj() * w.norm_sq(a))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn alpha(e: &[u32]) -> MultiIndex {
        MultiIndex::new(e.to_vec())
    }

    #[test]
    fn monomial_norm_examples() {
        let da = WeightScheme::drury_arveson(2).unwrap();
        assert_eq!(monomial_norm_sq(&alpha(&[1, 1]), &da).unwrap(), 0.5);
        for sigma in [0.5, 1.0, 1.7, 3.0] {
            let w = WeightScheme::new(sigma, 3).unwrap();
            assert_eq!(monomial_norm_sq(&alpha(&[0, 0, 0]), &w).unwrap(), 1.0);
        }
        // c_{1,2} = Γ(3)Γ(2)/Γ(4) = 1/3
        let w1 = WeightScheme::new(1.0, 2).unwrap();
        let v = monomial_norm_sq(&alpha(&[1, 1]), &w1).unwrap();
        assert!((v - 1.0 / 6.0).abs() < 1e-16);
    }

    #[test]
    fn monomial_norm_dimension_mismatch() {
        let w = WeightScheme::new(1.0, 3).unwrap();
        assert!(matches!(
            monomial_norm_sq(&alpha(&[1, 1]), &w),
            Err(LabError::DimensionMismatch {
                expected: 3,
                found: 2
            })
        ));
    }

    #[test]
    fn besov_weight_examples() {
        assert_eq!(besov_weight(5, 0.5).unwrap(), 1.0);
        for sigma in [0.3, 1.0, 2.5] {
            assert_eq!(besov_weight(0, sigma).unwrap(), 1.0);
        }
        // Γ(4)Γ(2)/Γ(5) = 6/24
        assert!((besov_weight(3, 1.0).unwrap() - 0.25).abs() < 1e-16);
        assert!(matches!(
            besov_weight(3, 0.0),
            Err(LabError::NonPositiveSigma(_))
        ));
        assert!(besov_weight(3, -1.0).is_err());
    }

    #[test]
    fn besov_weight_identity_and_monotone() {
        for n in 0..=200 {
            assert_eq!(besov_weight(n, 0.5).unwrap(), 1.0);
        }
        for sigma in [0.75, 1.0, 1.3, 2.0] {
            let mut prev = f64::INFINITY;
            for n in 0..=200 {
                let c = besov_weight(n, sigma).unwrap();
                assert!(c > 0.0 && c < prev, "sigma {sigma} n {n}");
                prev = c;
            }
        }
    }

    #[test]
    fn integer_and_log_gamma_paths_agree() {
        for sigma in [1.0, 1.5, 2.0, 2.5] {
            for n in [1usize, 7, 40, 100, 200] {
                let exact = besov_weight(n, sigma).unwrap();
                let lg = (ln_gamma(n as f64 + 1.0) + ln_gamma(2.0 * sigma)
                    - ln_gamma(2.0 * sigma + n as f64))
                .exp();
                assert!(((exact - lg) / exact).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn exact_rational_matches_float() {
        let w = WeightScheme::drury_arveson(3).unwrap();
        for n in 0..=12 {
            for a in super::super::monomials(3, n) {
                let exact = monomial_norm_sq_exact(&a);
                assert_eq!(w.norm_sq(&a), exact.to_f64().unwrap());
            }
        }
    }

    #[test]
    fn inner_product_examples() {
        let z1z2 = HomogeneousPolynomial::monomial(alpha(&[1, 1]), Complex::new(1.0, 0.0));
        let z1sq = HomogeneousPolynomial::monomial(alpha(&[2, 0]), Complex::new(1.0, 0.0));
        let z2sq = HomogeneousPolynomial::monomial(alpha(&[0, 2]), Complex::new(1.0, 0.0));
        let da = WeightScheme::drury_arveson(2).unwrap();
        let w1 = WeightScheme::new(1.0, 2).unwrap();
        assert_eq!(inner_product(&z1z2, &z1z2, &da).unwrap(), Complex::new(0.5, 0.0));
        assert_eq!(inner_product(&z1sq, &z2sq, &w1).unwrap(), Complex::new(0.0, 0.0));
        let v = inner_product(&z1z2, &z1z2, &w1).unwrap();
        assert!((v.re - 1.0 / 6.0).abs() < 1e-16 && v.im == 0.0);

        let lin = HomogeneousPolynomial::monomial(alpha(&[1, 0]), Complex::new(1.0, 0.0));
        assert_eq!(inner_product(&lin, &z1sq, &da).unwrap(), Complex::new(0.0, 0.0));
        let w3 = WeightScheme::new(1.0, 3).unwrap();
        assert!(inner_product(&z1z2, &z1z2, &w3).is_err());
    }

    #[test]
    fn weight_scheme_validation() {
        assert!(WeightScheme::new(0.5, 1).is_err());
        assert!(WeightScheme::new(f64::NAN, 2).is_err());
        assert!(WeightScheme::new(0.25, 2).is_ok());
    }
}
