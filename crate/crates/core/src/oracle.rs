//! Brute-force counting in the group algebra of `S_d`.
//!
//! A [`ClassVector`] holds, for every permutation (indexed by Lehmer rank),
//! the number of tuples whose product is that permutation. Convolving with a
//! class indicator appends one factor on the right. Nothing here touches
//! characters, so the counts are an independent check on [`crate::frobenius`].

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frobenius::ClassList;
use crate::partitions::Partition;

/// A permutation of `{0, .., d-1}` stored as its image list.
/// Products are functional: `(a * b)(x) = a(b(x))`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(d: usize) -> Self {
        Permutation {
            images: (0..d as u8).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &x in &images {
            if x >= d || seen[x] {
                return Err(Error::Parse(format!("{images:?} is not a permutation")));
            }
            seen[x] = true;
        }
        Ok(Permutation {
            images: images.into_iter().map(|x| x as u8).collect(),
        })
    }

    /// Canonical representative of a cycle type: consecutive cycles
    /// `(0 1 .. l1-1)(l1 ..)...`.
    pub fn from_cycle_type(lambda: &Partition) -> Self {
        let mut images = Vec::with_capacity(lambda.weight());
        let mut start = 0u8;
        for &len in lambda.parts() {
            let len = len as u8;
            for k in 0..len {
                images.push(start + (k + 1) % len);
            }
            start += len;
        }
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other
                .images
                .iter()
                .map(|&x| self.images[x as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u8; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u8;
        }
        Permutation { images }
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        let d = self.degree();
        let mut seen = vec![false; d];
        let mut out = Vec::new();
        for start in 0..d {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            out.push(len);
        }
        out
    }

    pub fn cycle_type(&self) -> Partition {
        Partition::from_unsorted(self.cycle_lengths())
    }

    pub fn cycle_count(&self) -> usize {
        self.cycle_lengths().len()
    }

    /// Lehmer-code rank in `0..d!`; the identity has rank 0.
    pub fn rank(&self) -> usize {
        let d = self.degree();
        let mut r = 0usize;
        for i in 0..d {
            let smaller = self.images[i + 1..]
                .iter()
                .filter(|&&x| x < self.images[i])
                .count();
            r = r * (d - i) + smaller;
        }
        r
    }

    pub fn unrank(d: usize, mut r: usize) -> Permutation {
        let mut code = vec![0usize; d];
        for i in (0..d).rev() {
            let base = d - i;
            code[i] = r % base;
            r /= base;
        }
        let mut pool: Vec<u8> = (0..d as u8).collect();
        let images = code.into_iter().map(|c| pool.remove(c)).collect();
        Permutation { images }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}

/// Cycle notation with 1-based points, fixed points omitted; `()` for the identity.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut seen = vec![false; d];
        let mut any = false;
        for start in 0..d {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            any = true;
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push((x + 1).to_string());
                x = self.apply(x);
            }
            write!(f, "({})", cycle.join(" "))?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

/// All of `S_d` in rank order together with cycle data.
pub struct Group {
    d: usize,
    elements: Vec<Permutation>,
    cycle_types: Vec<Partition>,
}

impl Group {
    fn build(d: usize) -> Self {
        let order: usize = (1..=d).product();
        let elements: Vec<Permutation> = (0..order).map(|r| Permutation::unrank(d, r)).collect();
        let cycle_types = elements.iter().map(Permutation::cycle_type).collect();
        Group {
            d,
            elements,
            cycle_types,
        }
    }

    /// Cached per degree, in memory only.
    pub fn get(d: usize) -> Arc<Group> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Group>>>> = OnceLock::new();
        let mut cache = CACHE.get_or_init(Default::default).lock().unwrap();
        cache
            .entry(d)
            .or_insert_with(|| Arc::new(Group::build(d)))
            .clone()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, rank: usize) -> &Permutation {
        &self.elements[rank]
    }

    pub fn class(&self, lambda: &Partition) -> Vec<usize> {
        (0..self.order())
            .filter(|&r| &self.cycle_types[r] == lambda)
            .collect()
    }
}

/// Tuple counts indexed by the rank of their product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassVector {
    d: usize,
    counts: Vec<u128>,
}

impl ClassVector {
    /// The unit of the group algebra.
    pub fn identity(d: usize) -> Self {
        let order: usize = (1..=d).product();
        let mut counts = vec![0; order];
        counts[0] = 1;
        ClassVector { d, counts }
    }

    pub fn indicator(lambda: &Partition) -> Self {
        let d = lambda.weight();
        let group = Group::get(d);
        let mut counts = vec![0; group.order()];
        for r in group.class(lambda) {
            counts[r] = 1;
        }
        ClassVector { d, counts }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn counts(&self) -> &[u128] {
        &self.counts
    }

    pub fn get(&self, pi: &Permutation) -> u128 {
        self.counts[pi.rank()]
    }

    pub fn total(&self) -> Option<u128> {
        self.counts
            .iter()
            .try_fold(0u128, |acc, &c| acc.checked_add(c))
    }

    /// `result[tau] = sum_{sigma in C} self[tau sigma^{-1}]`.
    pub fn convolve(&self, lambda: &Partition) -> Result<Self> {
        let group = Group::get(self.d);
        let class: Vec<Permutation> = group
            .class(lambda)
            .into_iter()
            .map(|r| group.element(r).inverse())
            .collect();
        let counts = (0..group.order())
            .into_par_iter()
            .map(|tau| {
                let tau = group.element(tau);
                class.iter().try_fold(0u128, |acc, sigma_inv| {
                    acc.checked_add(self.counts[tau.compose(sigma_inv).rank()])
                })
            })
            .collect::<Option<Vec<u128>>>()
            .ok_or_else(|| Error::Precondition("oracle count overflowed u128".into()))?;
        Ok(ClassVector { d: self.d, counts })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub max_d: usize,
    pub budget: u128,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_d: 7,
            budget: 1_000_000_000,
        }
    }
}

impl OracleConfig {
    /// `d! * sum |C_i|`, the number of products the convolutions perform.
    pub fn estimate(classes: &ClassList) -> u128 {
        let order: u128 = (1..=classes.d() as u128).product();
        let sizes: u128 = classes
            .classes()
            .iter()
            .map(|c| u128::try_from(c.class_size()).unwrap_or(u128::MAX))
            .fold(0u128, u128::saturating_add);
        order.saturating_mul(sizes)
    }

    fn admit(&self, classes: &ClassList) -> Result<()> {
        if classes.d() > self.max_d {
            return Err(Error::Precondition(format!(
                "oracle is capped at d = {}, got {}",
                self.max_d,
                classes.d()
            )));
        }
        let estimate = Self::estimate(classes);
        if estimate > self.budget {
            return Err(Error::BudgetExceeded {
                estimate,
                budget: self.budget,
            });
        }
        Ok(())
    }
}

/// Distribution of `sigma_1 ... sigma_k` over `S_d`.
pub fn oracle_distribution(classes: &ClassList, config: &OracleConfig) -> Result<ClassVector> {
    config.admit(classes)?;
    let mut v = ClassVector::identity(classes.d());
    for c in classes.classes() {
        v = v.convolve(c)?;
    }
    Ok(v)
}

/// Tuples whose product has exactly `m` cycles.
pub fn oracle_xi(classes: &ClassList, m: usize, config: &OracleConfig) -> Result<BigInt> {
    Ok(oracle_xi_all(classes, config)?
        .get(m.wrapping_sub(1))
        .cloned()
        .unwrap_or_default())
}

/// Entry `m-1` is the count for `m` cycles, `m = 1..=d`.
pub fn oracle_xi_all(classes: &ClassList, config: &OracleConfig) -> Result<Vec<BigInt>> {
    let v = oracle_distribution(classes, config)?;
    let group = Group::get(classes.d());
    let mut out = vec![BigInt::default(); classes.d()];
    for (r, &c) in v.counts.iter().enumerate() {
        if c > 0 {
            out[group.element(r).cycle_count() - 1] += BigInt::from(c);
        }
    }
    Ok(out)
}

/// Tuples whose product equals `pi`.
pub fn oracle_frobenius(
    classes: &ClassList,
    pi: &Permutation,
    config: &OracleConfig,
) -> Result<BigInt> {
    if pi.degree() != classes.d() {
        return Err(Error::WeightMismatch {
            expected: classes.d(),
            found: pi.degree(),
        });
    }
    Ok(BigInt::from(oracle_distribution(classes, config)?.get(pi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::partitions_of;
    use proptest::prelude::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn cfg() -> OracleConfig {
        OracleConfig::default()
    }

    #[test]
    fn rank_roundtrip() {
        for d in 0..=6 {
            let order: usize = (1..=d).product();
            for r in 0..order {
                assert_eq!(Permutation::unrank(d, r).rank(), r);
            }
        }
        assert_eq!(Permutation::identity(5).rank(), 0);
    }

    #[test]
    fn composition_is_functional() {
        // a = (1 2), b = (2 3); a*b sends 3 -> 2 -> 1
        let a = Permutation::from_images(vec![1, 0, 2]).unwrap();
        let b = Permutation::from_images(vec![0, 2, 1]).unwrap();
        assert_eq!(a.compose(&b).apply(2), 0);
        assert_eq!(a.compose(&b).to_string(), "(1 2 3)");
        assert_eq!(a.compose(&a.inverse()), Permutation::identity(3));
    }

    #[test]
    fn examples() {
        let c = ClassList::parse(3, "2,1;2,1").unwrap();
        assert_eq!(oracle_xi(&c, 3, &cfg()).unwrap(), BigInt::from(3));
        assert_eq!(oracle_xi(&c, 1, &cfg()).unwrap(), BigInt::from(6));
        let cycle = Permutation::from_cycle_type(&p("3"));
        assert_eq!(
            oracle_frobenius(&c, &cycle, &cfg()).unwrap(),
            BigInt::from(3)
        );
        for d in 1..=5 {
            assert_eq!(
                oracle_xi(&ClassList::empty(d), d, &cfg()).unwrap(),
                BigInt::from(1)
            );
            let ones = ClassList::new(d, vec![Partition::column(d)]).unwrap();
            assert_eq!(
                oracle_frobenius(&ones, &Permutation::identity(d), &cfg()).unwrap(),
                BigInt::from(1)
            );
        }
        assert_eq!(
            oracle_xi(&ClassList::parse(2, "2").unwrap(), 1, &cfg()).unwrap(),
            BigInt::from(1)
        );
    }

    #[test]
    fn class_sizes_and_mass() {
        for d in 1..=5 {
            for lambda in partitions_of(d) {
                let v = ClassVector::indicator(&lambda);
                assert_eq!(BigInt::from(v.total().unwrap()), lambda.class_size());
                let w = v.convolve(&lambda).unwrap();
                assert_eq!(
                    BigInt::from(w.total().unwrap()),
                    lambda.class_size() * lambda.class_size()
                );
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let c = ClassList::parse(4, "2,1,1;2,1,1").unwrap();
        assert_eq!(OracleConfig::estimate(&c), 24 * 12);
        let tight = OracleConfig {
            max_d: 7,
            budget: 100,
        };
        assert!(matches!(
            oracle_xi(&c, 1, &tight),
            Err(Error::BudgetExceeded {
                estimate: 288,
                budget: 100
            })
        ));
        let small = OracleConfig {
            max_d: 3,
            budget: u128::MAX,
        };
        assert!(matches!(
            oracle_xi(&c, 1, &small),
            Err(Error::Precondition(_))
        ));
    }

    proptest! {
        #[test]
        fn frobenius_is_a_class_function(d in 2usize..=5, a in 0usize..7, b in 0usize..7, r in 0usize..120, s in 0usize..120) {
            let parts = partitions_of(d);
            let classes = ClassList::new(d, vec![parts[a % parts.len()].clone(), parts[b % parts.len()].clone()]).unwrap();
            let order: usize = (1..=d).product();
            let pi = Permutation::unrank(d, r % order);
            let g = Permutation::unrank(d, s % order);
            let conj = g.compose(&pi).compose(&g.inverse());
            prop_assert_eq!(oracle_frobenius(&classes, &pi, &cfg()).unwrap(), oracle_frobenius(&classes, &conj, &cfg()).unwrap());
        }
    }
}
