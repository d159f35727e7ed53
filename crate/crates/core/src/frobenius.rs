//! Counting tuples of permutations from prescribed conjugacy classes.
//!
//! `frobenius_count` is the classical character expansion of the number of
//! factorizations of a fixed permutation. `xi` counts tuples whose product
//! has a prescribed number of cycles, through the W-numbers
//! `W_{d,m} = (prod |C_i| / m!) sum_lambda c_{lambda,m} dim^{1-t} prod chi^lambda(C_i)`
//! and the alternating Stirling transform `xi_{d,m} = sum_k (-1)^k c(m+k,m) W_{d,m+k}`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::characters::{hook_characters, CharacterTable};
use crate::error::{Error, Result};
use crate::exactnum::{
    binomial, factorial, factorial_q, from_big, int, pow_i, sign, stirling_first_unsigned,
    to_integer, Rational,
};
use crate::partitions::{partitions_of, Partition};

/// Ordered cycle types `C_1, ..., C_t` of `S_d`; may be empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassList {
    d: usize,
    classes: Vec<Partition>,
}

impl ClassList {
    pub fn new(d: usize, classes: Vec<Partition>) -> Result<Self> {
        for c in &classes {
            if c.weight() != d {
                return Err(Error::WeightMismatch {
                    expected: d,
                    found: c.weight(),
                });
            }
        }
        Ok(ClassList { d, classes })
    }

    pub fn empty(d: usize) -> Self {
        ClassList {
            d,
            classes: Vec::new(),
        }
    }

    /// Parses `"2,1;2,1"`: classes separated by `;`, parts by `,`.
    pub fn parse(d: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self::empty(d));
        }
        let classes = text
            .split(';')
            .map(Partition::from_str)
            .collect::<Result<Vec<_>>>()?;
        Self::new(d, classes)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn classes(&self) -> &[Partition] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn with_prepended(&self, class: Partition) -> Result<Self> {
        let mut classes = vec![class];
        classes.extend(self.classes.iter().cloned());
        Self::new(self.d, classes)
    }

    /// `prod_i |C_i|`.
    pub fn size_product(&self) -> BigInt {
        self.classes.iter().map(Partition::class_size).product()
    }
}

impl fmt::Display for ClassList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let texts: Vec<String> = self.classes.iter().map(ToString::to_string).collect();
        f.write_str(&texts.join(";"))
    }
}

/// Per-shape factor `dim(lambda)^{1-t} prod_i chi^lambda(C_i)`, shared by
/// every W-number of one class list.
struct ShapeFactors {
    shapes: Vec<Partition>,
    factors: Vec<Rational>,
    prefactor: Rational,
}

impl ShapeFactors {
    fn new(classes: &ClassList) -> Result<Self> {
        let d = classes.d();
        let table = CharacterTable::global(d)?;
        let shapes = partitions_of(d);
        let t = classes.len() as i64;
        let factors = shapes
            .par_iter()
            .map(|lambda| {
                let mut prod = BigInt::one();
                for c in classes.classes() {
                    let chi = table.value(lambda, c)?;
                    if chi == 0 {
                        return Ok(Rational::zero());
                    }
                    prod *= chi;
                }
                Ok(from_big(prod) * pow_i(&from_big(lambda.dimension()), 1 - t))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ShapeFactors {
            shapes,
            factors,
            prefactor: from_big(classes.size_product()),
        })
    }

    fn w(&self, m: usize) -> Rational {
        let d = self.shapes.first().map_or(0, Partition::weight);
        if m > d {
            return Rational::zero();
        }
        let sum: Rational = self
            .shapes
            .iter()
            .zip(&self.factors)
            .filter(|(_, f)| !f.is_zero())
            .map(|(lambda, f)| lambda.c_coefficient(m) * f)
            .sum();
        sum * &self.prefactor / factorial_q(m)
    }
}

fn integral(value: Rational, context: impl FnOnce() -> String) -> Result<BigInt> {
    to_integer(&value).ok_or_else(|| Error::NonInteger {
        value: value.to_string(),
        context: context(),
    })
}

/// `N_{C_1..C_k}(pi)`: the number of tuples `sigma_i in C_i` whose product is
/// a fixed permutation of cycle type `pi_type`.
pub fn frobenius_count(classes: &ClassList, pi_type: &Partition) -> Result<BigInt> {
    let d = classes.d();
    if pi_type.weight() != d {
        return Err(Error::WeightMismatch {
            expected: d,
            found: pi_type.weight(),
        });
    }
    let table = CharacterTable::global(d)?;
    let k = classes.len() as i64;
    let mut total = Rational::zero();
    for lambda in table.partitions() {
        let mut prod = BigInt::from(table.value(lambda, pi_type)?);
        for c in classes.classes() {
            if prod.is_zero() {
                break;
            }
            prod *= table.value(lambda, c)?;
        }
        if prod.is_zero() {
            continue;
        }
        total += from_big(prod) * pow_i(&from_big(lambda.dimension()), 1 - k);
    }
    let value = total * from_big(classes.size_product()) / factorial_q(d);
    integral(value, || format!("frobenius_count({classes}; {pi_type})"))
}

/// `W_{d,m}(C_1, ..., C_t)`; zero for `m > d`.
pub fn w_number(classes: &ClassList, m: usize) -> Result<Rational> {
    if m == 0 {
        return Err(Error::Precondition("w_number needs m >= 1".into()));
    }
    Ok(ShapeFactors::new(classes)?.w(m))
}

/// `xi_{d,m}`: tuples whose product has exactly `m` cycles.
pub fn xi(classes: &ClassList, m: usize) -> Result<BigInt> {
    let d = classes.d();
    if m == 0 || m > d {
        return Err(Error::Precondition(format!(
            "xi needs 1 <= m <= d = {d}, got m = {m}"
        )));
    }
    let factors = ShapeFactors::new(classes)?;
    xi_from_factors(&factors, d, m, classes)
}

/// `xi_{d,m}` for every `m = 1..=d`.
pub fn xi_all(classes: &ClassList) -> Result<Vec<BigInt>> {
    let d = classes.d();
    let factors = ShapeFactors::new(classes)?;
    (1..=d)
        .map(|m| xi_from_factors(&factors, d, m, classes))
        .collect()
}

fn xi_from_factors(
    factors: &ShapeFactors,
    d: usize,
    m: usize,
    classes: &ClassList,
) -> Result<BigInt> {
    // W_{d,m+k} vanishes for m+k > d, so the k-sum stops at d-m
    debug_assert!(factors.w(d + 1).is_zero());
    let total: Rational = (0..=d - m)
        .map(|k| {
            from_big(stirling_first_unsigned(m + k, m as i64))
                * factors.w(m + k)
                * int(sign(k as i64))
        })
        .sum();
    integral(total, || format!("xi({classes}; m = {m})"))
}

/// `W_{d,m}(C_(d), C_1, ..., C_t)` through the hook-shape formula: only the
/// hooks `[1^j, d-j]` carry a nonzero character on the `d`-cycle.
pub fn w_number_hook(d: usize, m: usize, tail: &ClassList) -> Result<Rational> {
    if tail.d() != d {
        return Err(Error::WeightMismatch {
            expected: d,
            found: tail.d(),
        });
    }
    if d == 0 || m == 0 {
        return Err(Error::Precondition(
            "w_number_hook needs d >= 1 and m >= 1".into(),
        ));
    }
    let t = tail.len() as i64;
    let hooks: Vec<Vec<i64>> = tail.classes().iter().map(hook_characters).collect();
    let mut sum = Rational::zero();
    for j in 0..d {
        let top = binomial(d as i64 - 1 - j as i64, d as i64 - m as i64);
        if top.is_zero() {
            continue;
        }
        let mut prod = BigInt::from(sign(j as i64)) * top;
        for h in &hooks {
            prod *= h[j];
        }
        let dim = from_big(binomial(d as i64 - 1, j as i64));
        sum += from_big(prod) * pow_i(&dim, 1 - t);
    }
    Ok(sum * from_big(factorial(d - 1) * tail.size_product()) / factorial_q(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classes(d: usize, s: &str) -> ClassList {
        ClassList::parse(d, s).unwrap()
    }

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(
            frobenius_count(&classes(3, "2,1;2,1"), &p("3")).unwrap(),
            BigInt::from(3)
        );
        for d in 1..6 {
            assert_eq!(
                frobenius_count(&ClassList::empty(d), &Partition::column(d)).unwrap(),
                BigInt::one()
            );
        }
        for d in 2..6 {
            let id = ClassList::new(d, vec![Partition::column(d)]).unwrap();
            let tau = Partition::transposition(d).unwrap();
            assert_eq!(frobenius_count(&id, &tau).unwrap(), BigInt::zero());
        }
        assert!(frobenius_count(&classes(3, "2,1"), &p("2,2")).is_err());
    }

    #[test]
    fn w_number_examples() {
        let c = classes(2, "2");
        assert_eq!(w_number(&c, 1).unwrap(), int(1));
        assert_eq!(w_number(&c, 2).unwrap(), int(0));
        assert_eq!(w_number(&c, 3).unwrap(), int(0));
        assert_eq!(w_number(&classes(4, "3,1;2,2"), 5).unwrap(), int(0));
    }

    #[test]
    fn xi_examples() {
        let c = classes(3, "2,1;2,1");
        assert_eq!(xi(&c, 3).unwrap(), BigInt::from(3));
        assert_eq!(xi(&c, 1).unwrap(), BigInt::from(6));
        assert_eq!(xi(&c, 2).unwrap(), BigInt::zero());
        assert!(xi(&c, 0).is_err());
        assert!(xi(&c, 4).is_err());
    }

    #[test]
    fn xi_of_empty_list_is_identity() {
        for d in 1..6 {
            let all = xi_all(&ClassList::empty(d)).unwrap();
            for (m, v) in all.iter().enumerate() {
                assert_eq!(*v, BigInt::from(u8::from(m + 1 == d)));
            }
        }
    }

    #[test]
    fn xi_sums_to_class_product() {
        for d in 1..=6 {
            let shapes = partitions_of(d);
            for a in &shapes {
                for b in shapes.iter().step_by(2) {
                    let c = ClassList::new(d, vec![a.clone(), b.clone(), a.clone()]).unwrap();
                    let total: BigInt = xi_all(&c).unwrap().into_iter().sum();
                    assert_eq!(total, c.size_product());
                }
            }
        }
    }

    #[test]
    fn xi_is_order_independent() {
        let d = 5;
        let base = vec![p("3,2"), p("2,1,1,1"), p("4,1"), p("2,2,1")];
        let expected = xi_all(&ClassList::new(d, base.clone()).unwrap()).unwrap();
        let orders = [[3, 2, 1, 0], [1, 0, 3, 2], [2, 3, 0, 1], [0, 2, 1, 3]];
        for order in orders {
            let shuffled = order.iter().map(|&i| base[i].clone()).collect();
            assert_eq!(
                xi_all(&ClassList::new(d, shuffled).unwrap()).unwrap(),
                expected
            );
        }
    }

    #[test]
    fn hook_formula_matches_general_w() {
        assert_eq!(w_number_hook(2, 1, &ClassList::empty(2)).unwrap(), int(1));
        for d in 1..=6 {
            let shapes = partitions_of(d);
            let tails: Vec<ClassList> = vec![
                ClassList::empty(d),
                ClassList::new(d, vec![shapes[shapes.len() / 2].clone()]).unwrap(),
                ClassList::new(d, vec![shapes[0].clone(), shapes[shapes.len() - 1].clone()])
                    .unwrap(),
                ClassList::new(d, shapes.iter().take(3).cloned().collect()).unwrap(),
            ];
            for tail in tails {
                let full = tail.with_prepended(Partition::row(d)).unwrap();
                for m in 1..=d + 1 {
                    assert_eq!(
                        w_number_hook(d, m, &tail).unwrap(),
                        w_number(&full, m).unwrap(),
                        "d={d} m={m} tail={tail}"
                    );
                }
            }
        }
    }

    #[test]
    fn class_list_parsing() {
        assert_eq!(classes(3, "2,1;2,1").len(), 2);
        assert_eq!(classes(3, "").len(), 0);
        assert_eq!(classes(4, "[1^2,2];4").to_string(), "2,1,1;4");
        assert!(ClassList::parse(3, "2,1;2,2").is_err());
    }
}
