//! Integer partitions and the per-shape quantities built from their Young
//! diagrams: class sizes, conjugates, hooks, contents and the content
//! polynomial `m_{lambda,m}` together with its binomial transform
//! `c_{lambda,m}`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{binomial, factorial, from_big, int, sign, Rational};

/// A partition of `d`: nonincreasing positive parts.
///
/// Text forms accepted by [`FromStr`]: comma form `4,2,1` and multiplicity
/// form `[1^2,2]`. `Display` emits the comma form; the empty partition
/// prints as the empty string.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Partition {
    parts: Vec<usize>,
}

/// `z_lambda`, `Aut(lambda)` and the size of the conjugacy class
/// `C_lambda = d!/z_lambda`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassData {
    pub z: BigInt,
    pub aut: BigInt,
    pub class_size: BigInt,
}

/// One cell `(row, col)` of a Young diagram (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
    pub content: i64,
    pub hook: usize,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} has a zero part"
            )));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} is not nonincreasing"
            )));
        }
        Ok(Partition { parts })
    }

    /// Sorts the parts and drops zeros.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The one-row partition `(d)`.
    pub fn row(d: usize) -> Self {
        Self::from_unsorted(vec![d])
    }

    /// `[1^d]`.
    pub fn column(d: usize) -> Self {
        Partition { parts: vec![1; d] }
    }

    /// The hook `[1^j, d-j]`, i.e. `(d-j, 1, ..., 1)` with `j` trailing ones.
    pub fn hook(d: usize, j: usize) -> Self {
        assert!(
            j < d,
            "hook [1^{j},{}] is not a partition of {d}",
            d as i64 - j as i64
        );
        let mut parts = vec![d - j];
        parts.extend(std::iter::repeat_n(1, j));
        Partition { parts }
    }

    /// Cycle type of a transposition, `[1^{d-2}, 2]`; `None` when `d < 2`.
    pub fn transposition(d: usize) -> Option<Self> {
        (d >= 2).then(|| {
            let mut parts = vec![2];
            parts.extend(std::iter::repeat_n(1, d - 2));
            Partition { parts }
        })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts, `l(lambda)`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_hook(&self) -> bool {
        self.parts.iter().skip(1).all(|&p| p == 1)
    }

    /// Multiplicities `m_i` indexed by part size; index 0 is unused.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m = vec![0; self.parts.first().copied().unwrap_or(0) + 1];
        for &p in &self.parts {
            m[p] += 1;
        }
        m
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.parts.first().copied().unwrap_or(0);
        let parts = (0..cols)
            .map(|j| self.parts.iter().take_while(|&&p| p > j).count())
            .collect();
        Partition { parts }
    }

    pub fn cells(&self) -> Vec<Cell> {
        let conj = self.conjugate();
        let mut cells = Vec::with_capacity(self.weight());
        for (row, &len) in self.parts.iter().enumerate() {
            for col in 0..len {
                let arm = len - col - 1;
                let leg = conj.parts[col] - row - 1;
                cells.push(Cell {
                    row,
                    col,
                    content: col as i64 - row as i64,
                    hook: arm + leg + 1,
                });
            }
        }
        cells
    }

    pub fn hook_product(&self) -> BigInt {
        self.cells().iter().map(|c| BigInt::from(c.hook)).product()
    }

    pub fn class_data(&self) -> ClassData {
        let mut z = BigInt::one();
        let mut aut = BigInt::one();
        for (i, &m) in self.multiplicities().iter().enumerate().skip(1) {
            let mf = factorial(m);
            z *= BigInt::from(i).pow(m as u32) * &mf;
            aut *= mf;
        }
        let class_size = factorial(self.weight()) / &z;
        ClassData { z, aut, class_size }
    }

    pub fn class_size(&self) -> BigInt {
        self.class_data().class_size
    }

    pub fn aut(&self) -> BigInt {
        self.class_data().aut
    }

    /// Dimension of the irreducible representation, by the hook-length formula.
    pub fn dimension(&self) -> BigInt {
        factorial(self.weight()) / self.hook_product()
    }

    /// `m_{lambda,m} = prod_u (m + c(u)) / h(u)`, a polynomial in `m`.
    pub fn content_poly_value(&self, m: &Rational) -> Rational {
        let mut num = Rational::one();
        for cell in self.cells() {
            num *= m + int(cell.content);
            if num.is_zero() {
                return num;
            }
        }
        num / from_big(self.hook_product())
    }

    /// `c_{lambda,m} = sum_j (-1)^j C(m,j) m_{lambda,m-j}`; zero for `m > d`.
    pub fn c_coefficient(&self, m: usize) -> Rational {
        if m > self.weight() {
            return Rational::zero();
        }
        self.c_coefficient_unchecked(m)
    }

    /// The alternating sum evaluated literally, without the `m > d` shortcut.
    pub fn c_coefficient_unchecked(&self, m: usize) -> Rational {
        (0..=m)
            .map(|j| {
                let term = from_big(binomial(m as i64, j as i64))
                    * self.content_poly_value(&int((m - j) as i64));
                term * int(sign(j as i64))
            })
            .sum()
    }

    pub fn parse_multiplicity_form(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected [..] multiplicity form, got {s:?}")))?;
        let mut parts = Vec::new();
        for item in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (base, exp) = match item.split_once('^') {
                Some((b, e)) => (b.trim(), e.trim()),
                None => (item, "1"),
            };
            let base: usize = base
                .parse()
                .map_err(|_| Error::Parse(format!("bad part {base:?} in {s:?}")))?;
            let exp: usize = exp
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent {exp:?} in {s:?}")))?;
            if base == 0 {
                return Err(Error::InvalidPartition(format!("zero part in {s:?}")));
            }
            parts.extend(std::iter::repeat_n(base, exp));
        }
        Ok(Partition::from_unsorted(parts))
    }

    pub fn parse_comma_form(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .unwrap_or(s);
        if s.trim().is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad part {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim_start().starts_with('[') {
            Partition::parse_multiplicity_form(s)
        } else {
            Partition::parse_comma_form(s)
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl TryFrom<String> for Partition {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Partition> for String {
    fn from(p: Partition) -> String {
        p.to_string()
    }
}

/// All partitions of `d` in reverse-lexicographic order, starting with `(d)`.
pub fn partitions_of(d: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill(d, d, &mut current, &mut out);
    out
}

fn fill(rest: usize, max: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition {
            parts: current.clone(),
        });
        return;
    }
    for p in (1..=rest.min(max)).rev() {
        current.push(p);
        fill(rest - p, p, current, out);
        current.pop();
    }
}

/// All partitions of `d` with exactly `len` parts, in reverse-lex order.
pub fn partitions_with_len(d: usize, len: usize) -> Vec<Partition> {
    partitions_of(d)
        .into_iter()
        .filter(|p| p.len() == len)
        .collect()
}
