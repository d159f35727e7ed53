//! Exact scalars and the classical integer sequences used throughout.
//!
//! Every value is an arbitrary-precision integer or a reduced rational; there
//! is no floating point on any computation path. Stirling triangles,
//! factorials and Bernoulli numbers of higher order are memoized in
//! process-wide caches that grow on demand.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Reduced rational with arbitrary-precision numerator and positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_big(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// The integer value of `r`, if it has denominator 1.
pub fn to_integer(r: &Rational) -> Option<BigInt> {
    r.is_integer().then(|| r.numer().clone())
}

/// `(-1)^k` as a small integer.
pub fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `base^exp` for any integer exponent; `base` must be nonzero when `exp < 0`.
pub fn pow_i(base: &Rational, exp: i64) -> Rational {
    if exp >= 0 {
        num_traits::pow(base.clone(), exp as usize)
    } else {
        num_traits::pow(base.recip(), exp.unsigned_abs() as usize)
    }
}

/// Binomial coefficient, totalized.
///
/// Zero for `k < 0` and for `0 <= n < k`. For negative `n` the falling
/// factorial `n(n-1)...(n-k+1)/k!` is used.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    if n >= 0 && k > n {
        return BigInt::zero();
    }
    let k = if n >= 0 { k.min(n - k) } else { k };
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(n: usize) -> BigInt {
    static TABLE: OnceLock<RwLock<Vec<BigInt>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| RwLock::new(vec![BigInt::one()]));
    if let Some(v) = table.read().unwrap().get(n) {
        return v.clone();
    }
    let mut w = table.write().unwrap();
    while w.len() <= n {
        let next = w.last().unwrap() * w.len();
        w.push(next);
    }
    w[n].clone()
}

pub fn factorial_q(n: usize) -> Rational {
    from_big(factorial(n))
}

/// Multinomial coefficient `n! / (k_1! ... k_r!)`; zero unless all parts are
/// nonnegative and sum to `n`.
pub fn multinomial(n: i64, parts: &[i64]) -> BigInt {
    if n < 0 || parts.iter().any(|&k| k < 0) || parts.iter().sum::<i64>() != n {
        return BigInt::zero();
    }
    let mut acc = factorial(n as usize);
    for &k in parts {
        acc /= factorial(k as usize);
    }
    acc
}

/// Lower-triangular table of a two-index recurrence, grown row by row.
struct Triangle {
    rows: RwLock<Vec<Vec<BigInt>>>,
    step: fn(usize, usize, &[BigInt]) -> BigInt,
}

impl Triangle {
    const fn new(step: fn(usize, usize, &[BigInt]) -> BigInt) -> Self {
        Triangle {
            rows: RwLock::new(Vec::new()),
            step,
        }
    }

    fn get(&self, n: usize, k: i64) -> BigInt {
        if k < 0 || k as usize > n {
            return BigInt::zero();
        }
        let k = k as usize;
        if let Some(row) = self.rows.read().unwrap().get(n) {
            return row[k].clone();
        }
        let mut rows = self.rows.write().unwrap();
        if rows.is_empty() {
            rows.push(vec![BigInt::one()]);
        }
        while rows.len() <= n {
            let i = rows.len();
            let prev = &rows[i - 1];
            let row: Vec<BigInt> = (0..=i).map(|j| (self.step)(i, j, prev)).collect();
            rows.push(row);
        }
        rows[n][k].clone()
    }
}

fn prev_at(prev: &[BigInt], j: usize) -> BigInt {
    prev.get(j).cloned().unwrap_or_default()
}

static STIRLING_FIRST: Triangle = Triangle::new(|n, k, prev| {
    // c(n,k) = c(n-1,k-1) + (n-1) c(n-1,k)
    if k == 0 {
        return BigInt::zero();
    }
    prev_at(prev, k - 1) + prev_at(prev, k) * (n - 1)
});

static STIRLING_SECOND: Triangle = Triangle::new(|_n, k, prev| {
    // S(n,k) = k S(n-1,k) + S(n-1,k-1)
    if k == 0 {
        return BigInt::zero();
    }
    prev_at(prev, k) * k + prev_at(prev, k - 1)
});

/// Signless Stirling number of the first kind: permutations of `n` points
/// with exactly `k` cycles.
pub fn stirling_first_unsigned(n: usize, k: i64) -> BigInt {
    STIRLING_FIRST.get(n, k)
}

/// Stirling number of the second kind: set partitions of `n` points into
/// `k` blocks.
pub fn stirling_second(n: usize, k: i64) -> BigInt {
    STIRLING_SECOND.get(n, k)
}

/// Memoized coefficients of `(x / (e^x - 1))^N`.
///
/// For each order `N` the cache holds `[x^k]` of the series for `k` up to the
/// largest index requested so far. The series is the `(-N)`-th power of
/// `(e^x - 1)/x`, expanded with the power recurrence for series with unit
/// constant term, which costs O(n^2) exact operations per order.
#[derive(Default)]
pub struct BernoulliCache {
    orders: RwLock<HashMap<usize, Vec<Rational>>>,
}

impl BernoulliCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn global() -> &'static BernoulliCache {
        static CACHE: OnceLock<BernoulliCache> = OnceLock::new();
        CACHE.get_or_init(BernoulliCache::new)
    }

    /// `[x^n] (x/(e^x-1))^order`.
    pub fn series_coefficient(&self, n: usize, order: usize) -> Rational {
        if let Some(c) = self
            .orders
            .read()
            .unwrap()
            .get(&order)
            .and_then(|v| v.get(n))
        {
            return c.clone();
        }
        let mut orders = self.orders.write().unwrap();
        let coeffs = orders.entry(order).or_insert_with(|| vec![Rational::one()]);
        // h = f^p with f = (e^x-1)/x, f_j = 1/(j+1)!, p = -order:
        //   k h_k = sum_{j=1..k} ((p+1) j - k) f_j h_{k-j}
        let p1 = 1 - order as i64;
        while coeffs.len() <= n {
            let k = coeffs.len();
            let mut acc = Rational::zero();
            for j in 1..=k {
                let weight = p1 * j as i64 - k as i64;
                if weight == 0 {
                    continue;
                }
                let f_j = Rational::new(BigInt::one(), factorial(j + 1));
                acc += f_j * &coeffs[k - j] * int(weight);
            }
            coeffs.push(acc / int(k as i64));
        }
        coeffs[n].clone()
    }

    /// `B_n^{(order)} = n! [x^n] (x/(e^x-1))^order`.
    pub fn number(&self, n: usize, order: usize) -> Rational {
        self.series_coefficient(n, order) * factorial_q(n)
    }
}

/// Bernoulli number of higher order, `B_n^{(N)}`; `N = 1` gives the
/// classical numbers with `B_1 = -1/2`.
pub fn bernoulli_order(n: usize, order: usize) -> Rational {
    BernoulliCache::global().number(n, order)
}

pub fn bernoulli(n: usize) -> Rational {
    bernoulli_order(n, 1)
}

/// Bernoulli polynomial of order `N` at `t`:
/// `sum_k C(n,k) B_k^{(N)} t^{n-k}`.
pub fn bernoulli_poly_order(n: usize, order: usize, t: &Rational) -> Rational {
    let mut acc = Rational::zero();
    let mut t_pow = Rational::one();
    // iterate k = n, n-1, ..., 0 so that t^{n-k} grows with the loop
    for k in (0..=n).rev() {
        let b = bernoulli_order(k, order);
        if !b.is_zero() {
            acc += from_big(binomial(n as i64, k as i64)) * b * &t_pow;
        }
        t_pow *= t;
    }
    acc
}

/// Least common multiple of the denominators of `values`.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn is_nonnegative(r: &Rational) -> bool {
    !r.is_negative()
}
