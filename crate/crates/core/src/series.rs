//! Truncated bivariate power series in `u` and `y` with exact coefficients.
//!
//! A [`BiSeries`] stores the dense block of coefficients `[u^a y^b]` with
//! `a <= max_u` and `b <= max_y`; every product drops terms beyond either
//! cap. Transcendental operations (`exp`, `log`, `sinh`, rational powers)
//! are compositions with a univariate Maclaurin series and therefore require
//! the inner series to have the appropriate constant term.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactnum::{factorial_q, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("coefficient [u^{a} y^{b}] is outside the truncation u <= {max_u}, y <= {max_y}")]
    OutOfBounds {
        a: usize,
        b: usize,
        max_u: usize,
        max_y: usize,
    },
    #[error("{op} needs constant term {expected}, found {found}")]
    ConstantTerm {
        op: &'static str,
        expected: &'static str,
        found: String,
    },
}

#[derive(Clone, PartialEq, Eq)]
pub struct BiSeries {
    max_u: usize,
    max_y: usize,
    coeffs: Vec<Rational>,
}

impl BiSeries {
    pub fn zero(max_u: usize, max_y: usize) -> Self {
        BiSeries {
            max_u,
            max_y,
            coeffs: vec![Rational::zero(); (max_u + 1) * (max_y + 1)],
        }
    }

    pub fn constant(max_u: usize, max_y: usize, c: Rational) -> Self {
        let mut s = Self::zero(max_u, max_y);
        s.coeffs[0] = c;
        s
    }

    pub fn one(max_u: usize, max_y: usize) -> Self {
        Self::constant(max_u, max_y, Rational::one())
    }

    /// `c * u^a * y^b`, or zero if the monomial is truncated away.
    pub fn monomial(max_u: usize, max_y: usize, a: usize, b: usize, c: Rational) -> Self {
        let mut s = Self::zero(max_u, max_y);
        if a <= max_u && b <= max_y {
            let i = s.index(a, b);
            s.coeffs[i] = c;
        }
        s
    }

    pub fn u(max_u: usize, max_y: usize) -> Self {
        Self::monomial(max_u, max_y, 1, 0, Rational::one())
    }

    pub fn y(max_u: usize, max_y: usize) -> Self {
        Self::monomial(max_u, max_y, 0, 1, Rational::one())
    }

    pub fn max_u(&self) -> usize {
        self.max_u
    }

    pub fn max_y(&self) -> usize {
        self.max_y
    }

    fn index(&self, a: usize, b: usize) -> usize {
        a * (self.max_y + 1) + b
    }

    /// `[u^a y^b] self`; indices beyond the caps are an error, not zero.
    pub fn coefficient_at(&self, a: usize, b: usize) -> Result<&Rational, SeriesError> {
        if a > self.max_u || b > self.max_y {
            return Err(SeriesError::OutOfBounds {
                a,
                b,
                max_u: self.max_u,
                max_y: self.max_y,
            });
        }
        Ok(&self.coeffs[self.index(a, b)])
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        BiSeries {
            max_u: self.max_u,
            max_y: self.max_y,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    fn check_bounds(&self, other: &Self) {
        assert!(
            self.max_u == other.max_u && self.max_y == other.max_y,
            "incompatible truncation bounds ({}, {}) vs ({}, {})",
            self.max_u,
            self.max_y,
            other.max_u,
            other.max_y
        );
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.check_bounds(other);
        let mut out = Self::zero(self.max_u, self.max_y);
        let w = self.max_y + 1;
        for a1 in 0..=self.max_u {
            for b1 in 0..=self.max_y {
                let x = &self.coeffs[a1 * w + b1];
                if x.is_zero() {
                    continue;
                }
                for a2 in 0..=self.max_u - a1 {
                    for b2 in 0..=self.max_y - b1 {
                        let z = &other.coeffs[a2 * w + b2];
                        if z.is_zero() {
                            continue;
                        }
                        out.coeffs[(a1 + a2) * w + b1 + b2] += x * z;
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::one(self.max_u, self.max_y);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `sum_k coeffs[k] * self^k`; `self` must have zero constant term so
    /// that the sum is finite after truncation.
    pub fn compose(&self, coeffs: &[Rational]) -> Result<Self, SeriesError> {
        self.require_constant("composition", false)?;
        // beyond total degree max_u + max_y every power vanishes
        let terms = coeffs.len().min(self.max_u + self.max_y + 1);
        let mut acc = Self::zero(self.max_u, self.max_y);
        for c in coeffs[..terms].iter().rev() {
            acc = &acc * self;
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    fn degree_cap(&self) -> usize {
        self.max_u + self.max_y
    }

    fn require_constant(&self, op: &'static str, one: bool) -> Result<(), SeriesError> {
        let c = self.constant_term();
        let ok = if one { c.is_one() } else { c.is_zero() };
        if ok {
            Ok(())
        } else {
            Err(SeriesError::ConstantTerm {
                op,
                expected: if one { "1" } else { "0" },
                found: c.to_string(),
            })
        }
    }

    /// `exp(self)`; needs a zero constant term.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        self.require_constant("exp", false)?;
        let coeffs: Vec<Rational> = (0..=self.degree_cap())
            .map(|k| factorial_q(k).recip())
            .collect();
        self.compose(&coeffs)
    }

    /// `log(self)`; needs constant term 1.
    pub fn log(&self) -> Result<Self, SeriesError> {
        self.require_constant("log", true)?;
        let shifted = self - &Self::one(self.max_u, self.max_y);
        shifted.compose(&log1p_coefficients(self.degree_cap()))
    }

    /// `sinh(self) = sum_{k odd} self^k / k!`; needs a zero constant term.
    pub fn sinh(&self) -> Result<Self, SeriesError> {
        self.require_constant("sinh", false)?;
        self.compose(&sinh_coefficients(self.degree_cap()))
    }

    /// `self^alpha = exp(alpha * log self)`; needs constant term 1.
    pub fn pow_rational(&self, alpha: &Rational) -> Result<Self, SeriesError> {
        self.require_constant("pow_rational", true)?;
        self.log()?.scale(alpha).exp()
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let c0 = self.constant_term().clone();
        if c0.is_zero() {
            return Err(SeriesError::ConstantTerm {
                op: "inverse",
                expected: "nonzero",
                found: "0".into(),
            });
        }
        // self = c0 (1 + r), 1/self = (1/c0) sum_k (-r)^k
        let inv_c0 = c0.recip();
        let r = &self.scale(&inv_c0) - &Self::one(self.max_u, self.max_y);
        let alternating: Vec<Rational> = (0..=self.degree_cap())
            .map(|k| {
                if k % 2 == 0 {
                    Rational::one()
                } else {
                    -Rational::one()
                }
            })
            .collect();
        Ok(r.compose(&alternating)?.scale(&inv_c0))
    }

    /// Coefficients as `((a, b), value)` for every nonzero entry.
    pub fn nonzero_terms(&self) -> impl Iterator<Item = ((usize, usize), &Rational)> + '_ {
        let w = self.max_y + 1;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| ((i / w, i % w), c))
    }
}

/// `[k] log(1+z) = (-1)^{k-1}/k` for `k = 0..=n`.
pub fn log1p_coefficients(n: usize) -> Vec<Rational> {
    (0..=n)
        .map(|k| match k {
            0 => Rational::zero(),
            k if k % 2 == 1 => Rational::new(1.into(), (k as i64).into()),
            k => Rational::new((-1).into(), (k as i64).into()),
        })
        .collect()
}

/// `[k] sinh(z)` for `k = 0..=n`.
pub fn sinh_coefficients(n: usize) -> Vec<Rational> {
    (0..=n)
        .map(|k| {
            if k % 2 == 1 {
                factorial_q(k).recip()
            } else {
                Rational::zero()
            }
        })
        .collect()
}

/// `log(1+u)` truncated to the given caps.
pub fn series_log1p(max_u: usize, max_y: usize) -> BiSeries {
    let mut s = BiSeries::zero(max_u, max_y);
    for (k, c) in log1p_coefficients(max_u).into_iter().enumerate() {
        let i = s.index(k, 0);
        s.coeffs[i] = c;
    }
    s
}

pub fn series_pow_rational(s: &BiSeries, alpha: &Rational) -> Result<BiSeries, SeriesError> {
    s.pow_rational(alpha)
}

pub fn series_sinh(s: &BiSeries) -> Result<BiSeries, SeriesError> {
    s.sinh()
}

impl<'a> Add<&'a BiSeries> for &'a BiSeries {
    type Output = BiSeries;

    fn add(self, rhs: &'a BiSeries) -> BiSeries {
        self.check_bounds(rhs);
        BiSeries {
            max_u: self.max_u,
            max_y: self.max_y,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<'a> Sub<&'a BiSeries> for &'a BiSeries {
    type Output = BiSeries;

    fn sub(self, rhs: &'a BiSeries) -> BiSeries {
        self.check_bounds(rhs);
        BiSeries {
            max_u: self.max_u,
            max_y: self.max_y,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl<'a> Mul<&'a BiSeries> for &'a BiSeries {
    type Output = BiSeries;

    fn mul(self, rhs: &'a BiSeries) -> BiSeries {
        self.mul_ref(rhs)
    }
}

impl Neg for &BiSeries {
    type Output = BiSeries;

    fn neg(self) -> BiSeries {
        self.scale(&int(-1))
    }
}

impl fmt::Debug for BiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiSeries[u<={}, y<={}](", self.max_u, self.max_y)?;
        let mut first = true;
        for ((a, b), c) in self.nonzero_terms() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c}) u^{a} y^{b}")?;
        }
        if first {
            f.write_str("0")?;
        }
        f.write_str(")")
    }
}
