//! Univariate complex polynomials and truncated power series.
//!
//! Coefficients are stored in ascending powers of the variable. Identity
//! checks across the crate compare whole coefficient vectors, never sampled
//! point values, so degree errors cannot hide. Deviations are measured on
//! coefficients scaled by the polynomial's max-norm: the zeta polynomials of
//! large walks carry binomial-sized coefficients (up to ~1e15 for 56 arcs),
//! where absolute f64 agreement is meaningless.

use num_complex::Complex64;

use crate::error::{Error, Result};

type C = Complex64;

pub const ONE: C = C::new(1.0, 0.0);
pub const ZERO: C = C::new(0.0, 0.0);

/// Dense univariate polynomial over complex doubles, ascending coefficients.
///
/// The zero polynomial has an empty coefficient vector; otherwise the
/// trailing coefficient is nonzero (exact zeros are trimmed, never rounded).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPolynomial {
    coeffs: Vec<C>,
}

impl ComplexPolynomial {
    pub fn new(coeffs: Vec<C>) -> Self {
        let mut p = ComplexPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        ComplexPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        ComplexPolynomial { coeffs: vec![ONE] }
    }

    pub fn constant(c: C) -> Self {
        Self::new(vec![c])
    }

    /// c0 + c1 * u.
    pub fn linear(c0: C, c1: C) -> Self {
        Self::new(vec![c0, c1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficient of u^k (zero beyond the stored degree).
    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    pub fn eval(&self, u: C) -> C {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * u + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn scale(&self, s: C) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact quotient self / divisor; errors if the remainder is not
    /// negligible relative to the operand scale.
    pub fn div_exact(&self, divisor: &Self, tol: f64) -> Result<Self> {
        let d = divisor.degree().ok_or(Error::InexactDivision(f64::INFINITY))?;
        let lead = divisor.coeffs[d];
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            // degree(self) < degree(divisor): quotient 0, self must vanish
            let sz = self.max_norm();
            return if sz <= tol { Ok(Self::zero()) } else { Err(Error::InexactDivision(sz)) };
        }
        let qlen = rem.len() - d;
        let mut q = vec![ZERO; qlen];
        for k in (0..qlen).rev() {
            let c = rem[k + d] / lead;
            q[k] = c;
            for j in 0..=d {
                rem[k + j] -= c * divisor.coeffs[j];
            }
        }
        let scale = self.max_norm().max(1.0);
        let rem_size = rem.iter().take(d).map(|z| z.norm()).fold(0.0, f64::max);
        if rem_size > tol * scale {
            return Err(Error::InexactDivision(rem_size));
        }
        Ok(Self::new(q))
    }

    pub fn max_norm(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max coefficient deviation between two polynomials, on coefficients
    /// scaled to unit max-norm (absolute when both sides are O(1)).
    pub fn max_coeff_deviation(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        let scale = self.max_norm().max(other.max_norm()).max(1.0);
        (0..n)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
            / scale
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_coeff_deviation(other) <= tol
    }

    /// Truncation to a power series of the given order.
    pub fn as_series(&self, order: usize) -> PowerSeries {
        PowerSeries::from_coeffs(order, (0..=order).map(|k| self.coeff(k)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.re == 0.0 && c.im == 0.0) {
            self.coeffs.pop();
        }
    }
}

/// Power series truncated at a fixed order; arithmetic is exact modulo
/// u^(order + 1).
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    order: usize,
    coeffs: Vec<C>,
}

impl PowerSeries {
    pub fn from_coeffs(order: usize, mut coeffs: Vec<C>) -> Self {
        coeffs.resize(order + 1, ZERO);
        PowerSeries { order, coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::from_coeffs(order, Vec::new())
    }

    pub fn one(order: usize) -> Self {
        Self::from_coeffs(order, vec![ONE])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        Self::from_coeffs(order, (0..=order).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn scale(&self, s: C) -> Self {
        Self::from_coeffs(self.order, self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut out = vec![ZERO; order + 1];
        for i in 0..=order {
            for j in 0..=(order - i) {
                out[i + j] += self.coeff(i) * other.coeff(j);
            }
        }
        Self::from_coeffs(order, out)
    }

    /// 1 / self; requires a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        let b0 = self.coeff(0);
        if b0.norm() == 0.0 {
            return Err(Error::BadSeriesBase(b0));
        }
        let mut out = vec![ZERO; self.order + 1];
        out[0] = ONE / b0;
        for n in 1..=self.order {
            let mut acc = ZERO;
            for k in 1..=n {
                acc += self.coeff(k) * out[n - k];
            }
            out[n] = -acc / b0;
        }
        Ok(Self::from_coeffs(self.order, out))
    }

    /// log(self) for a series with constant term 1 (within `base_tol`).
    ///
    /// Computed through (log s)' = s'/s, integrated termwise.
    pub fn log(&self, base_tol: f64) -> Result<Self> {
        let c0 = self.coeff(0);
        if (c0 - ONE).norm() > base_tol {
            return Err(Error::BadSeriesBase(c0));
        }
        let inv = self.reciprocal()?;
        // derivative s' has coefficient (k+1) c_{k+1} at u^k
        let deriv = Self::from_coeffs(
            self.order,
            (0..self.order).map(|k| self.coeff(k + 1) * C::new((k + 1) as f64, 0.0)).collect(),
        );
        let q = deriv.mul(&inv);
        let mut out = vec![ZERO; self.order + 1];
        for n in 1..=self.order {
            out[n] = q.coeff(n - 1) / C::new(n as f64, 0.0);
        }
        Ok(Self::from_coeffs(self.order, out))
    }

    /// exp(self).
    pub fn exp(&self) -> Self {
        let mut out = vec![ZERO; self.order + 1];
        out[0] = self.coeff(0).exp();
        for n in 1..=self.order {
            let mut acc = ZERO;
            for k in 1..=n {
                acc += C::new(k as f64, 0.0) * self.coeff(k) * out[n - k];
            }
            out[n] = acc / C::new(n as f64, 0.0);
        }
        Self::from_coeffs(self.order, out)
    }

    pub fn max_coeff_deviation(&self, other: &Self) -> f64 {
        let order = self.order.min(other.order);
        let scale = self
            .coeffs
            .iter()
            .chain(other.coeffs.iter())
            .map(|z| z.norm())
            .fold(1.0, f64::max);
        (0..=order).map(|k| (self.coeff(k) - other.coeff(k)).norm()).fold(0.0, f64::max) / scale
    }
}

/// Truncated logarithm of a polynomial with constant term 1.
pub fn series_log(p: &ComplexPolynomial, order: usize) -> Result<PowerSeries> {
    p.as_series(order).log(1e-8)
}
