//! Integer polynomials in the indeterminate `q`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients in increasing degree, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct QPolynomial(pub Vec<i64>);

impl QPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        QPolynomial(coeffs)
    }

    pub fn zero() -> Self {
        QPolynomial(Vec::new())
    }

    pub fn one() -> Self {
        QPolynomial(vec![1])
    }

    pub fn constant(c: i64) -> Self {
        Self::new(vec![c])
    }

    /// `q^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![0; k + 1];
        c[k] = 1;
        QPolynomial(c)
    }

    /// `sum_i q^{lengths[i]}`.
    pub fn from_lengths(lengths: impl IntoIterator<Item = usize>) -> Self {
        let mut c: Vec<i64> = Vec::new();
        for l in lengths {
            if c.len() <= l {
                c.resize(l + 1, 0);
            }
            c[l] += 1;
        }
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, q: i64) -> i128 {
        self.0
            .iter()
            .rev()
            .fold(0i128, |acc, &c| acc * i128::from(q) + i128::from(c))
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn scale(&self, c: i64) -> Self {
        Self::new(self.0.iter().map(|x| x * c).collect())
    }

    /// Exact quotient `self / d`; fails if `d` does not divide `self` in `Z[q]`.
    pub fn div_exact(&self, d: &QPolynomial) -> Result<QPolynomial> {
        let Some(dd) = d.degree() else {
            return Err(Error::InexactDivision("division by zero".into()));
        };
        let lead = d.0[dd];
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return if rem.is_empty() {
                Ok(QPolynomial::zero())
            } else {
                Err(Error::InexactDivision(format!("{self} / {d}")))
            };
        }
        let mut quot = vec![0i64; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd];
            if c % lead != 0 {
                return Err(Error::InexactDivision(format!("{self} / {d}")));
            }
            let f = c / lead;
            quot[k] = f;
            for (j, &dc) in d.0.iter().enumerate() {
                rem[k + j] -= f * dc;
            }
        }
        if rem.iter().any(|&c| c != 0) {
            return Err(Error::InexactDivision(format!("{self} / {d}")));
        }
        Ok(QPolynomial::new(quot))
    }

    /// Exact division by an integer.
    pub fn div_int(&self, c: i64) -> Result<QPolynomial> {
        if c == 0 || self.0.iter().any(|x| x % c != 0) {
            return Err(Error::InexactDivision(format!("{self} / {c}")));
        }
        Ok(QPolynomial::new(self.0.iter().map(|x| x / c).collect()))
    }
}

impl Add for &QPolynomial {
    type Output = QPolynomial;

    fn add(self, o: &QPolynomial) -> QPolynomial {
        let n = self.0.len().max(o.0.len());
        QPolynomial::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&0) + o.0.get(i).unwrap_or(&0))
                .collect(),
        )
    }
}

impl Sub for &QPolynomial {
    type Output = QPolynomial;

    fn sub(self, o: &QPolynomial) -> QPolynomial {
        self + &(-o)
    }
}

impl Neg for &QPolynomial {
    type Output = QPolynomial;

    fn neg(self) -> QPolynomial {
        QPolynomial(self.0.iter().map(|c| -c).collect())
    }
}

impl Mul for &QPolynomial {
    type Output = QPolynomial;

    fn mul(self, o: &QPolynomial) -> QPolynomial {
        if self.is_zero() || o.is_zero() {
            return QPolynomial::zero();
        }
        let mut c = vec![0i64; self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        QPolynomial::new(c)
    }
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (k, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "q")?,
                (1, _) => write!(f, "{a}q")?,
                (_, 1) => write!(f, "q^{k}")?,
                _ => write!(f, "{a}q^{k}")?,
            }
        }
        Ok(())
    }
}
