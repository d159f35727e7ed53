//! Polynomial structure of one-part Hurwitz numbers.
//!
//! Two coefficient families are computed in closed form and checked against
//! Hurwitz values:
//!
//! * quasi-triple symbols `<<tau_b>>_g^{d,m}`, the signed coefficients of
//!   `H^g_{d,m}(beta)` for fixed `d` (re-summation check, since `beta` is
//!   constrained by `|beta| = d`);
//! * double symbols `<<tau_b Lambda_2k>>'_g`, coefficients of
//!   `H^g_{d,d}(beta) / (t! d)` with free parts (interpolation check).

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactnum::{
    bernoulli, bernoulli_order, binomial, common_denominator, factorial, factorial_q, from_big,
    int, multinomial, pow_i, rat, sign, stirling_first_unsigned, stirling_second, Rational,
};
use crate::hurwitz::{hurwitz_general, hurwitz_one_part_bernoulli, HurwitzQuery};
use crate::partitions::{partitions_of, Partition};

/// All `b` in `N^n` with `|b| <= max_total`, in lexicographic order.
pub fn exponent_vectors(n: usize, max_total: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, rem: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for a in 0..=rem {
            prefix.push(a);
            rec(n - 1, rem - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, max_total, &mut Vec::with_capacity(n), &mut out);
    out
}

fn monomial(beta: &[usize], b: &[usize]) -> BigInt {
    beta.iter()
        .zip(b)
        .map(|(&x, &e)| BigInt::from(x).pow(e as u32))
        .product()
}

/// Number of index subsets `Z` grouped by `(|Z|, sum_{z in Z} b_z)`.
fn subset_groups(b: &[usize]) -> BTreeMap<(usize, usize), u64> {
    let n = b.len();
    let mut out = BTreeMap::new();
    for mask in 0u64..(1u64 << n) {
        let sum = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| b[i]).sum();
        *out.entry((mask.count_ones() as usize, sum)).or_insert(0) += 1;
    }
    out
}

fn query_t(g: usize, d: usize, m: usize, n: usize) -> i64 {
    2 * g as i64 + n as i64 - 1 + m as i64 - d as i64
}

/// `R_i(b)`, the inner sum of the coefficient formula. Vanishes for `i > d`
/// and for inadmissible `t`.
pub fn r_polynomial(i: usize, g: usize, d: usize, m: usize, b: &[usize]) -> Rational {
    let n = b.len();
    let t = query_t(g, d, m, n);
    if i > d || t < 0 {
        return Rational::zero();
    }
    let t = t as usize;
    let bn = b.iter().sum::<usize>() + n;
    let half = rat(d as i64 - 1, 2);
    let total = (t + 1 + d) as i64;
    let mut sum = Rational::zero();
    for j in 0..=d - i {
        for (&(p, zsum), &count) in &subset_groups(b) {
            let q = bn - p - zsum;
            let st = stirling_first_unsigned(d - i - j, (bn - q) as i64);
            if st.is_zero() {
                continue;
            }
            let inv = from_big(binomial(bn as i64, (bn - q) as i64)).recip();
            for k in q..=t + j + 1 {
                let multi = multinomial(
                    total,
                    &[
                        i as i64,
                        (d - i - j) as i64,
                        (t + j + 1 - k) as i64,
                        q as i64,
                        (k - q) as i64,
                    ],
                );
                if multi.is_zero() {
                    continue;
                }
                let coeff = from_big(&st * multi * BigInt::from(count) * sign((p + j + k) as i64));
                sum += coeff
                    * pow_i(&half, (k - q) as i64)
                    * bernoulli_order(t + j + 1 - k, j + 1)
                    * &inv;
            }
        }
    }
    sum
}

/// `<<tau_{b_1} .. tau_{b_n}>>_g^{d,m}`.
///
/// The alternating sign `(-1)^k` that accompanies `c(m+k, m)` in the printed
/// statement is dropped: with `R_i` as above only the unsigned sum re-sums to
/// the Hurwitz numbers (see `reconstruction_matches_character_route`).
pub fn witten_symbol_quasi_triple(b: &[usize], g: usize, d: usize, m: usize) -> Rational {
    if m == 0 || m > d {
        return Rational::zero();
    }
    let n = b.len();
    let bsum: usize = b.iter().sum();
    let weights: Vec<i64> = b.iter().map(|&x| x as i64 + 1).collect();
    let multi = from_big(multinomial((bsum + n) as i64, &weights));
    let sum: Rational = (0..=d - m)
        .map(|k| {
            from_big(stirling_first_unsigned(m + k, m as i64)) * r_polynomial(m + k, g, d, m, b)
        })
        .sum();
    multi * sum
}

/// `(d-1)! d^t t! / (t+1+d)!`.
pub fn quasi_triple_prefactor(g: usize, d: usize, m: usize, n: usize) -> Option<Rational> {
    let t = query_t(g, d, m, n);
    if t < 0 || d == 0 {
        return None;
    }
    let t = t as usize;
    Some(
        from_big(factorial(d - 1) * factorial(t)) * pow_i(&int(d as i64), t as i64)
            / factorial_q(t + 1 + d),
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientTable {
    pub g: usize,
    /// `None` for the double table, where `d = |beta|` is implicit.
    pub d: Option<usize>,
    pub m: Option<usize>,
    pub n: usize,
    pub entries: BTreeMap<Vec<usize>, Rational>,
}

impl CoefficientTable {
    pub fn get(&self, b: &[usize]) -> Rational {
        self.entries.get(b).cloned().unwrap_or_default()
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (&Vec<usize>, &Rational)> {
        self.entries.iter().filter(|(_, v)| !v.is_zero())
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.nonzero().map(|(b, _)| b.iter().sum()).max()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.nonzero().map(|(b, _)| b.iter().sum()).min()
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries.iter().all(|(b, v)| {
            let mut sorted = b.clone();
            sorted.sort_unstable();
            self.get(&sorted) == *v
        })
    }
}

/// Quasi-triple symbols for `|b| <= max_total` (the degree bound is `2g`).
pub fn quasi_triple_table(
    g: usize,
    d: usize,
    m: usize,
    n: usize,
    max_total: usize,
) -> Result<CoefficientTable> {
    if d == 0 || m == 0 || m > d || n == 0 || n > d {
        return Err(Error::Precondition(format!(
            "need 1 <= m <= d and 1 <= n <= d, got d={d} m={m} n={n}"
        )));
    }
    let t = query_t(g, d, m, n);
    if t < 0 {
        return Err(Error::InadmissibleQuery { t });
    }
    let entries = exponent_vectors(n, max_total)
        .into_par_iter()
        .map(|b| {
            let v = witten_symbol_quasi_triple(&b, g, d, m);
            (b, v)
        })
        .collect();
    Ok(CoefficientTable {
        g,
        d: Some(d),
        m: Some(m),
        n,
        entries,
    })
}

/// `H^g_{d,m}(beta) = P * sum_b (-1)^{|b|+n} <<tau_b>> beta^b`, summed over
/// `|b| <= 2g`.
pub fn reconstruct_hurwitz(g: usize, m: usize, beta: &Partition) -> Result<Rational> {
    let (d, n) = (beta.weight(), beta.len());
    let table = quasi_triple_table(g, d, m, n, 2 * g)?;
    let pre = quasi_triple_prefactor(g, d, m, n).expect("admissible");
    let sum: Rational = table
        .nonzero()
        .map(|(b, v)| {
            let s = sign((b.iter().sum::<usize>() + n) as i64);
            v * from_big(monomial(beta.parts(), b) * s)
        })
        .sum();
    Ok(pre * sum)
}

/// Closed form of `C_{b,g,n}`; zero when `b + 3 - 2g < 0` (reciprocal
/// factorial pole) or `b > 4g + n - 3`.
pub fn c_bgn(b: usize, g: usize, n: usize) -> Rational {
    let lower = b as i64 + 3 - 2 * g as i64;
    let e = 4 * g as i64 + n as i64 - b as i64 - 3;
    if lower < 0 || e < 0 {
        return Rational::zero();
    }
    let numer = int(1) - pow_i(&int(2), e - 1);
    numer / (pow_i(&int(2), (2 * g + n) as i64 - 1) * factorial_q(lower as usize))
        * bernoulli(e as usize)
        / factorial_q(e as usize)
}

/// `C_{b,g,n}` from its defining sum over `k`.
pub fn c_bgn_direct(b: usize, g: usize, n: usize) -> Rational {
    let lower = b as i64 + 3 - 2 * g as i64;
    if lower < 0 {
        return Rational::zero();
    }
    let top = 2 * g + n;
    let mut sum = Rational::zero();
    for k in 0..=top {
        let f = k as i64 + 2 * g as i64 - b as i64 - 3;
        if f < 0 {
            continue;
        }
        sum += bernoulli(top - k)
            / (factorial_q(f as usize) * factorial_q(top - k) * pow_i(&int(2), k as i64));
    }
    sum / factorial_q(lower as usize)
}

/// `C^_g(b) = [x^{2g+n-3}] (2g+n-3)! (b+3-2g)! prod ((x+1)^{b_i+1} - (x-1)^{b_i+1}) / (b_i+1)!`.
pub fn c_hat(b: &[usize], g: usize) -> Rational {
    let n = b.len();
    let bsum: usize = b.iter().sum();
    let lower = bsum as i64 + 3 - 2 * g as i64;
    let e = 2 * g as i64 + n as i64 - 3;
    if lower < 0 || e < 0 {
        return Rational::zero();
    }
    let mut poly = vec![Rational::one()];
    for &bi in b {
        let top = bi + 1;
        let factor: Vec<Rational> = (0..=top)
            .map(|k| {
                // (x+1)^top - (x-1)^top keeps the terms with top-k odd
                if (top - k) % 2 == 1 {
                    from_big(binomial(top as i64, k as i64) * 2) / factorial_q(top)
                } else {
                    Rational::zero()
                }
            })
            .collect();
        let mut next = vec![Rational::zero(); poly.len() + factor.len() - 1];
        for (i, a) in poly.iter().enumerate() {
            for (j, c) in factor.iter().enumerate() {
                if !c.is_zero() {
                    next[i + j] += a * c;
                }
            }
        }
        poly = next;
    }
    let e = e as usize;
    let coeff = poly.get(e).cloned().unwrap_or_default();
    coeff * factorial_q(e) * factorial_q(lower as usize)
}

/// `[beta^b] H^g_{d,d}(beta) / (t! d)` with `d = |beta|`.
pub fn double_poly_coefficient(b: &[usize], g: usize) -> Rational {
    c_bgn(b.iter().sum(), g, b.len()) * c_hat(b, g)
}

/// `k` with `|b| + 2k = 4g - 3 + n`, if the double symbol is admissible.
pub fn double_symbol_k(b: &[usize], g: usize) -> Option<usize> {
    let n = b.len();
    if g == 0 && n <= 2 {
        return None;
    }
    let twice_k = 4 * g as i64 - 3 + n as i64 - b.iter().sum::<usize>() as i64;
    if twice_k < 0 || twice_k % 2 != 0 {
        return None;
    }
    Some((twice_k / 2) as usize)
}

/// `<<tau_{b_1} .. tau_{b_n} Lambda_{2k}>>'_g`, zero outside the window
/// (in particular whenever `|b| + n` is even).
pub fn double_coefficient(b: &[usize], g: usize) -> Rational {
    match double_symbol_k(b, g) {
        Some(k) => double_poly_coefficient(b, g) * int(sign(k as i64)),
        None => Rational::zero(),
    }
}

/// The `k = g` specialization in closed form.
pub fn lambda_g_closed_form(b: &[usize], g: usize) -> Rational {
    let n = b.len() as i64;
    let parts: Vec<i64> = b.iter().map(|&x| x as i64).collect();
    let multi = from_big(multinomial(2 * g as i64 + n - 3, &parts));
    let two = pow_i(&int(2), 2 * g as i64 - 1);
    int(sign(g as i64)) * multi * (int(1) - &two) / (two * factorial_q(2 * g)) * bernoulli(2 * g)
}

/// Double symbols for all `b` with `|b| <= 4g + n - 3`.
pub fn double_table(g: usize, n: usize) -> Result<CoefficientTable> {
    if n == 0 || (g == 0 && n <= 2) {
        return Err(Error::Precondition(format!(
            "(g, n) = ({g}, {n}) is outside the double-symbol range"
        )));
    }
    let entries = exponent_vectors(n, 4 * g + n - 3)
        .into_iter()
        .map(|b| {
            let v = double_coefficient(&b, g);
            (b, v)
        })
        .collect();
    Ok(CoefficientTable {
        g,
        d: None,
        m: None,
        n,
        entries,
    })
}

/// Outcome of an identity sweep: how many instances were compared and which failed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdentityReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn merge(&mut self, other: IdentityReport) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
    }
}

/// String and dilaton equations for the double symbols, over every `b` of
/// length `n` with `|b| <= 4g + n - 2`.
pub fn verify_string_dilaton(g: usize, n: usize) -> IdentityReport {
    let mut report = IdentityReport::default();
    for b in exponent_vectors(n, 4 * g + n - 2) {
        let mut with0 = vec![0];
        with0.extend(&b);
        let lhs = double_coefficient(&with0, g);
        let mut rhs = Rational::zero();
        for i in 0..n {
            if b[i] > 0 {
                let mut lowered = b.clone();
                lowered[i] -= 1;
                rhs += double_coefficient(&lowered, g);
            }
        }
        report.record(lhs == rhs, || {
            format!("string g={g} b={b:?}: {lhs} != {rhs}")
        });

        let mut with1 = vec![1];
        with1.extend(&b);
        let lhs = double_coefficient(&with1, g);
        let rhs = int(2 * g as i64 + n as i64 - 2) * double_coefficient(&b, g);
        report.record(lhs == rhs, || {
            format!("dilaton g={g} b={b:?}: {lhs} != {rhs}")
        });
    }
    report
}

/// Compares the double-symbol polynomial with `H^g_{d,d}(beta) / (t! d)` from
/// the character route at every sorted `beta` in `{1..max_part}^n`.
pub fn verify_double_polynomial(g: usize, n: usize, max_part: usize) -> Result<IdentityReport> {
    let table: Vec<(Vec<usize>, Rational)> = exponent_vectors(n, 4 * g + n - 3)
        .into_iter()
        .map(|b| {
            let v = double_poly_coefficient(&b, g);
            (b, v)
        })
        .filter(|(_, v)| !v.is_zero())
        .collect();
    let points = sorted_tuples(n, 1, max_part);
    let results = points
        .par_iter()
        .map(|beta| -> Result<(bool, String)> {
            let d: usize = beta.iter().sum();
            let q = HurwitzQuery::one_part(g, d, d, Partition::from_unsorted(beta.clone()))?;
            let h = hurwitz_general(&q)?;
            let expected = h.value / (factorial_q(h.t) * int(d as i64));
            let poly: Rational = table
                .iter()
                .map(|(b, v)| v * from_big(monomial(beta, b)))
                .sum();
            Ok((
                poly == expected,
                format!("g={g} beta={beta:?}: polynomial {poly} != {expected}"),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = IdentityReport::default();
    for (ok, msg) in results {
        report.record(ok, || msg);
    }
    Ok(report)
}

/// Nondecreasing tuples of length `n` with entries in `lo..=hi`.
fn sorted_tuples(n: usize, lo: usize, hi: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, lo: usize, hi: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for x in lo..=hi {
            prefix.push(x);
            rec(n - 1, x, hi, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, lo, hi, &mut Vec::new(), &mut out);
    out
}

/// Distinct rearrangements of `v`.
fn distinct_permutations(v: &[usize]) -> Vec<Vec<usize>> {
    let mut cur = v.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (0..cur.len().saturating_sub(1))
            .rev()
            .find(|&i| cur[i] < cur[i + 1])
        else {
            return out;
        };
        let j = (i + 1..cur.len()).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
}

/// Monomial symmetric polynomials `m_lambda` in `n` variables.
struct SymmetricBasis {
    shapes: Vec<Partition>,
    exponents: Vec<Vec<Vec<usize>>>,
}

impl SymmetricBasis {
    fn new(n: usize, max_degree: usize) -> Self {
        let shapes: Vec<Partition> = (0..=max_degree)
            .flat_map(partitions_of)
            .filter(|p| p.len() <= n)
            .collect();
        let exponents = shapes
            .iter()
            .map(|p| {
                let mut padded = p.parts().to_vec();
                padded.resize(n, 0);
                distinct_permutations(&padded)
            })
            .collect();
        SymmetricBasis { shapes, exponents }
    }

    fn len(&self) -> usize {
        self.shapes.len()
    }

    fn row(&self, beta: &[usize]) -> Vec<BigInt> {
        self.exponents
            .iter()
            .map(|exps| exps.iter().map(|e| monomial(beta, e)).sum())
            .collect()
    }
}

/// Solves `A x = rhs` for full column rank `A` by fraction-free (Bareiss)
/// elimination with row pivoting. Returns the solution and the original
/// indices of the rows used as pivots.
fn bareiss_solve(mut a: Vec<Vec<BigInt>>, rhs: Vec<BigInt>) -> Result<(Vec<Rational>, Vec<usize>)> {
    let cols = a.first().map_or(0, Vec::len);
    for (row, r) in a.iter_mut().zip(rhs) {
        row.push(r);
    }
    let rows = a.len();
    let mut order: Vec<usize> = (0..rows).collect();
    let mut prev = BigInt::one();
    for k in 0..cols {
        let Some(pivot) = (k..rows).find(|&r| !a[r][k].is_zero()) else {
            return Err(Error::GridTooSmall {
                needed: cols,
                available: k,
            });
        };
        a.swap(k, pivot);
        order.swap(k, pivot);
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        rest.par_iter_mut().for_each(|row| {
            for j in k + 1..=cols {
                row[j] = (&pivot_row[k] * &row[j] - &row[k] * &pivot_row[j]) / &prev;
            }
            row[k] = BigInt::zero();
        });
        prev = a[k][k].clone();
    }
    let mut x = vec![Rational::zero(); cols];
    for k in (0..cols).rev() {
        let mut acc = from_big(a[k][cols].clone());
        for j in k + 1..cols {
            acc -= from_big(a[k][j].clone()) * &x[j];
        }
        x[k] = acc / from_big(a[k][k].clone());
    }
    order.truncate(cols);
    Ok((x, order))
}

/// Result of fitting the scaled Hurwitz number `H_{|beta|,|beta|-q}(beta) / (t! |beta|)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyGeneralReport {
    pub q: usize,
    pub n: usize,
    pub g: usize,
    pub expected_degree: usize,
    pub lowest_degree_bound: i64,
    pub points: usize,
    pub unknowns: usize,
    pub held_out: usize,
    pub held_out_mismatches: usize,
    pub fitted_degree: Option<usize>,
    pub fitted_lowest_degree: Option<usize>,
    /// Fitted coefficients on the monomial symmetric basis, keyed by shape.
    pub coefficients: BTreeMap<Partition, Rational>,
    pub top_coefficient: Rational,
    pub stated_top_coefficient: Rational,
}

impl PolyGeneralReport {
    pub fn held_out_ok(&self) -> bool {
        self.held_out > 0 && self.held_out_mismatches == 0
    }

    pub fn degree_ok(&self) -> bool {
        self.fitted_degree == Some(self.expected_degree)
    }

    pub fn lowest_degree_ok(&self) -> bool {
        self.fitted_lowest_degree
            .is_none_or(|lo| lo as i64 >= self.lowest_degree_bound)
    }

    pub fn top_coefficient_ok(&self) -> bool {
        self.top_coefficient == self.stated_top_coefficient
    }

    /// Observed over stated top coefficient, when the latter is nonzero.
    pub fn top_ratio(&self) -> Option<Rational> {
        (!self.stated_top_coefficient.is_zero())
            .then(|| &self.top_coefficient / &self.stated_top_coefficient)
    }
}

/// `sum_{i=0}^q 1/(2^i i!) C(n-2, q-i) / (2^{2g-i+1} (2g-i+1)!)`, the closed
/// sum offered for the coefficient of `beta_1^{4g+n-3}`. The binomial takes
/// the falling-factorial value for `n = 1`.
pub fn poly_general_stated_top(q: usize, n: usize, g: usize) -> Rational {
    (0..=q.min(2 * g + 1))
        .map(|i| {
            let c = from_big(binomial(n as i64 - 2, (q - i) as i64));
            c / (pow_i(&int(2), i as i64) * factorial_q(i))
                / (pow_i(&int(2), (2 * g - i + 1) as i64) * factorial_q(2 * g - i + 1))
        })
        .sum()
}

/// Fits a symmetric polynomial of degree at most `4g + n - 3` to the scaled
/// numbers on the sorted grid with parts in `1..=max_part` (default
/// `4g + n + q`) and `|beta| > q`, then checks the remaining points.
pub fn verify_poly_general(
    q: usize,
    n: usize,
    g: usize,
    max_part: Option<usize>,
) -> Result<PolyGeneralReport> {
    if 2 * g + n < q + 3 || n == 0 {
        return Err(Error::Precondition(format!(
            "need 2g - q + n >= 3 and n >= 1, got (q, n, g) = ({q}, {n}, {g})"
        )));
    }
    let degree = 4 * g + n - 3;
    let max_part = max_part.unwrap_or(degree + q + 3);
    let points: Vec<Vec<usize>> = sorted_tuples(n, 1, max_part)
        .into_iter()
        .filter(|p| p.iter().sum::<usize>() > q)
        .collect();
    let basis = SymmetricBasis::new(n, degree);
    if points.len() < basis.len() {
        return Err(Error::GridTooSmall {
            needed: basis.len(),
            available: points.len(),
        });
    }
    let values = points
        .par_iter()
        .map(|beta| -> Result<Rational> {
            let d: usize = beta.iter().sum();
            let query =
                HurwitzQuery::one_part(g, d, d - q, Partition::from_unsorted(beta.clone()))?;
            let h = hurwitz_one_part_bernoulli(&query)?;
            Ok(h.value / (factorial_q(h.t) * int(d as i64)))
        })
        .collect::<Result<Vec<_>>>()?;

    let scale = common_denominator(&values);
    let matrix: Vec<Vec<BigInt>> = points.iter().map(|p| basis.row(p)).collect();
    let rhs: Vec<BigInt> = values
        .iter()
        .map(|v| v.numer() * (&scale / v.denom()))
        .collect();
    let (solution, used) = bareiss_solve(matrix.clone(), rhs)?;
    let scale = from_big(scale);
    let coefficients: BTreeMap<Partition, Rational> = basis
        .shapes
        .iter()
        .cloned()
        .zip(solution.into_iter().map(|c| c / &scale))
        .collect();

    let mut used_mask = vec![false; points.len()];
    for &i in &used {
        used_mask[i] = true;
    }
    let mut held_out = 0;
    let mut mismatches = 0;
    for (i, row) in matrix.iter().enumerate() {
        if used_mask[i] {
            continue;
        }
        held_out += 1;
        let fitted: Rational = row
            .iter()
            .zip(coefficients.values())
            .map(|(x, c)| from_big(x.clone()) * c)
            .sum();
        if fitted != values[i] {
            mismatches += 1;
        }
    }

    let degrees = coefficients
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(p, _)| p.weight());
    let fitted_degree = degrees.clone().max();
    let fitted_lowest_degree = degrees.min();
    let top_coefficient = coefficients
        .get(&Partition::row(degree))
        .cloned()
        .unwrap_or_default();
    Ok(PolyGeneralReport {
        q,
        n,
        g,
        expected_degree: degree,
        lowest_degree_bound: 2 * g as i64 + n as i64 - 2 - i64::from(q == 0) - q as i64,
        points: points.len(),
        unknowns: basis.len(),
        held_out,
        held_out_mismatches: mismatches,
        fitted_degree,
        fitted_lowest_degree,
        coefficients,
        top_coefficient,
        stated_top_coefficient: poly_general_stated_top(q, n, g),
    })
}

/// First identity used in the polynomiality proof, in both of its forms:
/// `sum_{j<beta1} C(j,i) (-(beta1-1-j))^l1 = (-1)^l1 sum_j j! S(l1,j) C(beta1, i+j+1)`
/// and the expansion of the right side in powers of `beta1`.
pub fn claim1_identity(
    l1: usize,
    i: usize,
    beta1: std::ops::RangeInclusive<usize>,
) -> IdentityReport {
    let mut report = IdentityReport::default();
    for b1 in beta1 {
        let lhs: BigInt = (0..b1)
            .map(|j| {
                binomial(j as i64, i as i64) * BigInt::from(-((b1 - 1 - j) as i64)).pow(l1 as u32)
            })
            .sum();
        let mid: BigInt = (0..=l1)
            .map(|j| {
                factorial(j)
                    * stirling_second(l1, j as i64)
                    * binomial(b1 as i64, (i + j + 1) as i64)
            })
            .sum::<BigInt>()
            * sign(l1 as i64);
        let mut poly = Rational::zero();
        for j in 0..=l1 {
            let s2 = stirling_second(l1, j as i64);
            if s2.is_zero() {
                continue;
            }
            for k in 1..=i + j + 1 {
                let s = sign((l1 + i + j + 1 - k) as i64);
                poly +=
                    from_big(factorial(j) * &s2 * stirling_first_unsigned(i + j + 1, k as i64) * s)
                        / factorial_q(i + j + 1)
                        * pow_i(&int(b1 as i64), k as i64);
            }
        }
        report.record(lhs == mid && from_big(mid.clone()) == poly, || {
            format!("claim 1 l1={l1} i={i} beta1={b1}: {lhs} vs {mid} vs {poly}")
        });
    }
    report
}

/// Probability that a uniform permutation of `i + r` points is fixed-point
/// free with `r` cycles; `p_0(0) = 1`.
pub fn derangement_cycle_probability(i: usize, r: usize) -> Rational {
    if i == 0 {
        return if r == 0 {
            Rational::one()
        } else {
            Rational::zero()
        };
    }
    partitions_of(i)
        .into_iter()
        .filter(|mu| mu.len() == r)
        .map(|mu| {
            let mult = mu.multiplicities();
            let z: BigInt = mult
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| BigInt::from(j + 1).pow(k as u32) * factorial(k))
                .product();
            from_big(z).recip()
        })
        .sum()
}

/// Second identity used in the polynomiality proof:
/// `c(d-q+i, d-q) d!/(d-q+i)! = sum_{k>=0} sum_r (-1)^{q+r-k} p_i(r) c(q+r, k) d^k`.
pub fn claim2_identity(
    q: usize,
    i: usize,
    d_range: std::ops::RangeInclusive<usize>,
) -> IdentityReport {
    let mut report = IdentityReport::default();
    let probs: HashMap<usize, Rational> = (0..=i)
        .map(|r| (r, derangement_cycle_probability(i, r)))
        .collect();
    for d in d_range {
        if d < q {
            continue;
        }
        let lhs = from_big(stirling_first_unsigned(d - q + i, (d - q) as i64) * factorial(d))
            / factorial_q(d - q + i);
        let mut rhs = Rational::zero();
        for r in 0..=i {
            for k in 0..=q + r {
                let s = sign((q + r) as i64 - k as i64);
                rhs += &probs[&r]
                    * from_big(stirling_first_unsigned(q + r, k as i64) * s)
                    * pow_i(&int(d as i64), k as i64);
            }
        }
        report.record(lhs == rhs, || {
            format!("claim 2 q={q} i={i} d={d}: {lhs} != {rhs}")
        });
    }
    report
}
