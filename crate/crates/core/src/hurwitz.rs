//! Quasi-triple Hurwitz numbers `H^g_{d,m}(alpha, beta)`.
//!
//! Three independent evaluations:
//!
//! * **character**: `Aut(alpha) Aut(beta) / d! * xi_{d,m}(C_alpha, C_tau^t, C_beta)`
//!   with `t` transpositions, valid for every `alpha`. For `alpha != (d)` the
//!   weight `Aut(alpha)` extends the labelled-branch-point convention of the
//!   one-part case; it is checked against brute force only.
//! * **sinh**: coefficient extraction from
//!   `F(u,y) = (1+u)^{(d-1)/2} log(1+u)^m/m! prod_i sinh(i/2 (log(1+u) + y))^{c_i}`,
//!   one-part only.
//! * **bernoulli**: the closed form through Bernoulli polynomials of higher
//!   order, one-part only.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{
    bernoulli_order, bernoulli_poly_order, binomial, factorial, factorial_q, from_big, int, pow_i,
    rat, sign, stirling_first_unsigned, Rational,
};
use crate::frobenius::{xi, ClassList};
use crate::partitions::Partition;
use crate::series::{series_log1p, BiSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Character,
    Sinh,
    Bernoulli,
}

impl Route {
    pub const ALL: [Route; 3] = [Route::Character, Route::Sinh, Route::Bernoulli];

    pub fn name(self) -> &'static str {
        match self {
            Route::Character => "character",
            Route::Sinh => "sinh",
            Route::Bernoulli => "bernoulli",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "character" => Ok(Route::Character),
            "sinh" => Ok(Route::Sinh),
            "bernoulli" => Ok(Route::Bernoulli),
            other => Err(Error::Parse(format!("unknown route {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HurwitzQuery {
    pub g: usize,
    pub d: usize,
    pub m: usize,
    pub alpha: Partition,
    pub beta: Partition,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HurwitzValue {
    pub value: Rational,
    pub t: usize,
    pub route: Route,
}

impl HurwitzQuery {
    /// Validates the shape of the query; admissibility (`t >= 0`) is checked
    /// by the evaluators so that the caller can still inspect `t`.
    pub fn new(g: usize, d: usize, m: usize, alpha: Partition, beta: Partition) -> Result<Self> {
        if d == 0 {
            return Err(Error::Precondition("degree d must be at least 1".into()));
        }
        if m == 0 || m > d {
            return Err(Error::Precondition(format!(
                "m must lie in 1..={d}, got {m}"
            )));
        }
        for p in [&alpha, &beta] {
            if p.weight() != d {
                return Err(Error::WeightMismatch {
                    expected: d,
                    found: p.weight(),
                });
            }
        }
        Ok(HurwitzQuery {
            g,
            d,
            m,
            alpha,
            beta,
        })
    }

    pub fn one_part(g: usize, d: usize, m: usize, beta: Partition) -> Result<Self> {
        Self::new(g, d, m, Partition::row(d), beta)
    }

    /// Number of simple branch points, `2g - 2 + m - d + l(alpha) + l(beta)`.
    pub fn t(&self) -> i64 {
        2 * self.g as i64 - 2 + self.m as i64 - self.d as i64
            + self.alpha.len() as i64
            + self.beta.len() as i64
    }

    pub fn is_admissible(&self) -> bool {
        self.t() >= 0
    }

    pub fn is_one_part(&self) -> bool {
        self.alpha.len() == 1
    }

    pub fn applicable_routes(&self) -> Vec<Route> {
        if self.is_one_part() {
            Route::ALL.to_vec()
        } else {
            vec![Route::Character]
        }
    }

    fn admissible_t(&self) -> Result<usize> {
        let t = self.t();
        if t < 0 {
            return Err(Error::InadmissibleQuery { t });
        }
        Ok(t as usize)
    }

    fn require_one_part(&self, route: &'static str) -> Result<()> {
        if !self.is_one_part() {
            return Err(Error::RouteNotApplicable {
                route,
                reason: format!(
                    "alpha = ({}) is not the one-part profile ({})",
                    self.alpha, self.d
                ),
            });
        }
        Ok(())
    }
}

impl fmt::Display for HurwitzQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "H^{}_{{{},{}}}(({}), ({}))",
            self.g, self.d, self.m, self.alpha, self.beta
        )
    }
}

pub fn hurwitz(q: &HurwitzQuery, route: Route) -> Result<HurwitzValue> {
    match route {
        Route::Character => hurwitz_general(q),
        Route::Sinh => hurwitz_one_part_sinh(q),
        Route::Bernoulli => hurwitz_one_part_bernoulli(q),
    }
}

/// Evaluates every applicable route and fails with [`Error::Mismatch`] if
/// any two disagree.
pub fn cross_check(q: &HurwitzQuery) -> Result<Vec<HurwitzValue>> {
    let values = q
        .applicable_routes()
        .into_iter()
        .map(|r| hurwitz(q, r))
        .collect::<Result<Vec<_>>>()?;
    if let Some(first) = values.first() {
        for v in &values[1..] {
            if v.value != first.value {
                return Err(Error::Mismatch(format!(
                    "{q}: {} gives {}, {} gives {}",
                    first.route, first.value, v.route, v.value
                )));
            }
        }
    }
    Ok(values)
}

/// Character route, any `alpha`.
pub fn hurwitz_general(q: &HurwitzQuery) -> Result<HurwitzValue> {
    let t = q.admissible_t()?;
    let weight = from_big(q.alpha.aut() * q.beta.aut()) / factorial_q(q.d);
    let value = match Partition::transposition(q.d) {
        Some(tau) => {
            let mut classes = Vec::with_capacity(t + 2);
            classes.push(q.alpha.clone());
            classes.extend(std::iter::repeat_n(tau, t));
            classes.push(q.beta.clone());
            weight * from_big(xi(&ClassList::new(q.d, classes)?, q.m)?)
        }
        // S_1 has no transpositions
        None if t > 0 => Rational::zero(),
        None => {
            weight
                * from_big(xi(
                    &ClassList::new(q.d, vec![q.alpha.clone(), q.beta.clone()])?,
                    q.m,
                )?)
        }
    };
    Ok(HurwitzValue {
        value,
        t,
        route: Route::Character,
    })
}

/// Coefficients of `sinh(scale * z / 2) / (z / 2)` up to `z^max_degree`, as a
/// univariate series in `z` (odd powers vanish).
fn sinh_quotient_coefficients(scale: usize, max_degree: usize) -> Vec<Rational> {
    let half = rat(scale as i64, 2);
    (0..=max_degree)
        .map(|k| {
            if k % 2 == 1 {
                return Rational::zero();
            }
            int(2) * pow_i(&half, k as i64 + 1) / factorial_q(k + 1)
        })
        .collect()
}

/// Sinh route, one-part only.
pub fn hurwitz_one_part_sinh(q: &HurwitzQuery) -> Result<HurwitzValue> {
    q.require_one_part("sinh")?;
    let t = q.admissible_t()?;
    let d = q.d;
    let m = q.m;
    let done = |value| {
        Ok(HurwitzValue {
            value,
            t,
            route: Route::Sinh,
        })
    };
    let (mu, my) = (d, t);
    let log = series_log1p(mu, my);
    let s = &log + &BiSeries::y(mu, my);
    let one_plus_u = &BiSeries::one(mu, my) + &BiSeries::u(mu, my);

    let mut f = one_plus_u.pow_rational(&rat(d as i64 - 1, 2))?;
    f = &f * &log.pow(m).scale(&factorial_q(m).recip());

    // exponents c_1 = a_1 - 1, c_i = a_i
    let mult = q.beta.multiplicities();
    let mut exps: BTreeMap<usize, i64> = mult
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &a)| a > 0)
        .map(|(i, &a)| (i, a as i64))
        .collect();
    *exps.entry(1).or_insert(0) -= 1;

    let mut prefactor =
        from_big(factorial(t)) * pow_i(&int(d as i64), t as i64 - 1) * factorial_q(d);
    for (&i, &c) in &exps {
        prefactor *= pow_i(&rat(2, i as i64), c);
    }

    if exps[&1] < 0 {
        // beta has no part 1: pair 1/sinh(s/2) with one factor sinh(i0 s/2),
        // i0 the smallest part; the quotient of the two normalized series
        // sinh(x s/2)/(s/2) has unit constant term up to scale.
        let i0 = *exps.keys().find(|&&i| i > 1).expect("beta has a part >= 2");
        let cap = mu + my;
        let numer = s.compose(&sinh_quotient_coefficients(i0, cap))?;
        let denom = s.compose(&sinh_quotient_coefficients(1, cap))?;
        f = &f * &(&numer * &denom.inverse()?);
        *exps.get_mut(&i0).unwrap() -= 1;
        exps.insert(1, 0);
    }
    for (&i, &c) in &exps {
        if c > 0 {
            let sinh = s.scale(&rat(i as i64, 2)).sinh()?;
            f = &f * &sinh.pow(c as usize);
        }
    }
    let coefficient = f.coefficient_at(d, t)?.clone();
    done(prefactor * coefficient)
}

/// `sum_{S subset [n]} (-1)^{|S|} [sum_S beta = sigma]`, keyed by `sigma`.
fn signed_subset_sums(parts: &[usize]) -> BTreeMap<usize, i64> {
    let n = parts.len();
    let mut out = BTreeMap::new();
    for mask in 0u64..(1u64 << n) {
        let sigma: usize = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| parts[i])
            .sum();
        let size = mask.count_ones() as i64;
        *out.entry(sigma).or_insert(0) += sign(size);
    }
    out.retain(|_, w| *w != 0);
    out
}

/// Bernoulli route, one-part only.
///
/// `W~_{d,m+k} = t!(d-1)! d^t / ((m+k)! prod beta_i) * sum_j sum_S (-1)^{m-d-|S|} / (t+j+1)!
///   * C(sigma_S, d-m-k-j) * B^{(j+1)}_{t+j+1}((1-d)/2 + d - sigma_S)`
/// and `H = sum_k (-1)^k c(m+k,m) W~_{d,m+k}`. The sign carries the query's
/// `m` (through `t`), not `m+k`.
pub fn hurwitz_one_part_bernoulli(q: &HurwitzQuery) -> Result<HurwitzValue> {
    q.require_one_part("bernoulli")?;
    let t = q.admissible_t()?;
    let d = q.d;
    let m = q.m;
    let subsets = signed_subset_sums(q.beta.parts());
    let beta_product: BigInt = q.beta.parts().iter().map(|&b| BigInt::from(b)).product();
    let base = from_big(factorial(t) * factorial(d - 1)) * pow_i(&int(d as i64), t as i64)
        / from_big(beta_product);
    let shift = rat(1 - d as i64, 2);

    let mut total = Rational::zero();
    for k in 0..=d - m {
        let mk = m + k;
        let mut inner = Rational::zero();
        for j in 0..=d - mk {
            let order = j + 1;
            let index = t + j + 1;
            let denom = factorial_q(index);
            for (&sigma, &w) in &subsets {
                let choose = binomial(sigma as i64, (d - mk - j) as i64);
                if choose.is_zero() {
                    continue;
                }
                let arg = &shift + int((d - sigma) as i64);
                let b = bernoulli_poly_order(index, order, &arg);
                // w already carries (-1)^{|S|}; remaining sign (-1)^{m-d}
                let s = w * sign(m as i64 - d as i64);
                inner += from_big(choose * s) * b / &denom;
            }
        }
        let w_tilde = &base * inner / factorial_q(mk);
        total += from_big(stirling_first_unsigned(mk, m as i64) * sign(k as i64)) * w_tilde;
    }
    Ok(HurwitzValue {
        value: total,
        t,
        route: Route::Bernoulli,
    })
}

/// Genus-zero one-part value as a function of `(d, m, n)` alone.
pub fn genus_zero_closed_form(d: usize, m: usize, n: usize) -> Result<Rational> {
    if d == 0 || m == 0 || m > d || n == 0 || n > d {
        return Err(Error::Precondition(format!(
            "need 1 <= m <= d and 1 <= n <= d, got d={d} m={m} n={n}"
        )));
    }
    let t = n as i64 - 1 + m as i64 - d as i64;
    if t < 0 {
        return Err(Error::InadmissibleQuery { t });
    }
    let t = t as usize;
    let half = rat(d as i64 - 1, 2);
    let mut sum = Rational::zero();
    for j in 0..=d - m {
        let top = t + j + 1;
        let outer = binomial(n as i64, top as i64);
        if outer.is_zero() {
            continue;
        }
        for p in 0..=n {
            let st = stirling_first_unsigned(d - m - j, p as i64);
            if st.is_zero() {
                continue;
            }
            for k in (n - p)..=top {
                let coeff = &st
                    * &outer
                    * binomial(top as i64, k as i64)
                    * binomial(k as i64, (n - p) as i64);
                if coeff.is_zero() {
                    continue;
                }
                let term = from_big(coeff * sign((p + j + k) as i64))
                    * pow_i(&half, (k + p - n) as i64)
                    * bernoulli_order(top - k, j + 1);
                sum += term;
            }
        }
    }
    let pre = from_big(factorial(d - 1) * factorial(t)) * pow_i(&int(d as i64), t as i64)
        / (factorial_q(m) * int(sign(n as i64)));
    Ok(pre * sum)
}

/// `H^0_{d,d}(beta) = (n-1)! d^{n-2}`.
pub fn genus_zero_double(d: usize, n: usize) -> Rational {
    from_big(factorial(n.saturating_sub(1))) * pow_i(&int(d as i64), n as i64 - 2)
}

/// Every admissible one-part query `(g, d, beta, m)` with `d <= max_d`,
/// `g <= max_g`, in a fixed order.
pub fn one_part_queries(max_d: usize, max_g: usize) -> Vec<HurwitzQuery> {
    let mut out = Vec::new();
    for d in 1..=max_d {
        for beta in crate::partitions::partitions_of(d) {
            for m in 1..=d {
                for g in 0..=max_g {
                    let q = HurwitzQuery::one_part(g, d, m, beta.clone()).expect("valid shape");
                    if q.is_admissible() {
                        out.push(q);
                    }
                }
            }
        }
    }
    out
}
