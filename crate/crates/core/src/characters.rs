//! Irreducible characters of the symmetric group.
//!
//! Values come from the Murnaghan-Nakayama rule, evaluated on beta-sets
//! (first-column hook lengths): removing a border strip of length `r` moves
//! one bead from position `b` to the free position `b - r`, with sign
//! `(-1)^{#beads strictly between}`. Whole tables are built one class column
//! at a time, memoized on the remaining shape, and kept in a process-wide
//! cache that can be mirrored to a line-based text file.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::partitions::{partitions_of, Partition};

/// The full character table of `S_d`, rows and columns in reverse-lex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterTable {
    d: usize,
    partitions: Vec<Partition>,
    index: HashMap<Partition, usize>,
    values: Vec<i64>,
}

fn check_weight(d: usize, p: &Partition) -> Result<()> {
    if p.weight() != d {
        return Err(Error::WeightMismatch {
            expected: d,
            found: p.weight(),
        });
    }
    Ok(())
}

fn beta_set(parts: &[usize]) -> Vec<usize> {
    let len = parts.len();
    parts
        .iter()
        .enumerate()
        .map(|(i, &p)| p + len - 1 - i)
        .collect()
}

fn from_beta_set(mut beta: Vec<usize>) -> Vec<usize> {
    beta.sort_unstable_by(|a, b| b.cmp(a));
    let len = beta.len();
    beta.iter()
        .enumerate()
        .map(|(i, &b)| b + i + 1 - len)
        .filter(|&p| p > 0)
        .collect()
}

/// Murnaghan-Nakayama evaluation of `chi^shape` on the cycle lengths
/// `cycles[k..]`, memoized on the shape (the shape's weight fixes `k`).
fn mn_rec(shape: &[usize], cycles: &[usize], k: usize, memo: &mut HashMap<Vec<usize>, i64>) -> i64 {
    if k == cycles.len() {
        return i64::from(shape.is_empty());
    }
    if let Some(&v) = memo.get(shape) {
        return v;
    }
    let r = cycles[k];
    let beta = beta_set(shape);
    let mut total = 0i64;
    for (idx, &b) in beta.iter().enumerate() {
        if b < r {
            continue;
        }
        let target = b - r;
        if beta.contains(&target) {
            continue;
        }
        let between = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut next = beta.clone();
        next[idx] = target;
        let value = mn_rec(&from_beta_set(next), cycles, k + 1, memo);
        if between % 2 == 0 {
            total += value;
        } else {
            total -= value;
        }
    }
    memo.insert(shape.to_vec(), total);
    total
}

/// `chi^lambda(mu)` computed directly, without the table cache.
pub fn character_direct(lambda: &Partition, mu: &Partition) -> Result<i64> {
    check_weight(lambda.weight(), mu)?;
    let mut memo = HashMap::new();
    Ok(mn_rec(lambda.parts(), mu.parts(), 0, &mut memo))
}

/// `chi^lambda(mu)`, served from the (possibly disk-backed) table cache.
pub fn character(lambda: &Partition, mu: &Partition) -> Result<i64> {
    check_weight(lambda.weight(), mu)?;
    CharacterTable::global(lambda.weight())?.value(lambda, mu)
}

/// `eta(lambda) = sum_i C(lambda_i, 2) - sum_i C(lambda~_i, 2)`, the central
/// character of the transposition class.
pub fn eta(lambda: &Partition) -> i64 {
    let pairs = |p: &Partition| -> i64 {
        p.parts()
            .iter()
            .map(|&x| (x as i64) * (x as i64 - 1) / 2)
            .sum()
    };
    pairs(lambda) - pairs(&lambda.conjugate())
}

/// `(chi^{[1^j, d-j]}(beta))_{j = 0..d-1}` for all hooks at once.
///
/// Uses the expansion
/// `sum_j (-1)^j z^j chi^{[1^j,d-j]}(beta) = (1-z)^{-1} prod_i (1 - z^{beta_i})`.
pub fn hook_characters(beta: &Partition) -> Vec<i64> {
    let d = beta.weight();
    let mut poly = vec![0i64; d + 1];
    poly[0] = 1;
    for &b in beta.parts() {
        for k in (b..=d).rev() {
            poly[k] -= poly[k - b];
        }
    }
    let mut acc = 0i64;
    (0..d)
        .map(|j| {
            acc += poly[j];
            if j % 2 == 0 {
                acc
            } else {
                -acc
            }
        })
        .collect()
}

static CACHE_DIR: RwLock<Option<PathBuf>> = RwLock::new(None);

fn tables() -> &'static Mutex<HashMap<usize, Arc<CharacterTable>>> {
    static TABLES: OnceLock<Mutex<HashMap<usize, Arc<CharacterTable>>>> = OnceLock::new();
    TABLES.get_or_init(Default::default)
}

/// Directory used by [`CharacterTable::global`] to persist tables; `None`
/// keeps tables in memory only.
pub fn set_cache_dir(dir: Option<PathBuf>) {
    *CACHE_DIR.write().unwrap() = dir;
}

pub fn cache_dir() -> Option<PathBuf> {
    CACHE_DIR.read().unwrap().clone()
}

impl CharacterTable {
    /// Builds the table, one rayon task per class column.
    pub fn build(d: usize) -> Self {
        let partitions = partitions_of(d);
        let n = partitions.len();
        let columns: Vec<Vec<i64>> = partitions
            .par_iter()
            .map(|mu| {
                let mut memo = HashMap::new();
                partitions
                    .iter()
                    .map(|lambda| mn_rec(lambda.parts(), mu.parts(), 0, &mut memo))
                    .collect()
            })
            .collect();
        let mut values = vec![0; n * n];
        for (c, column) in columns.into_iter().enumerate() {
            for (r, v) in column.into_iter().enumerate() {
                values[r * n + c] = v;
            }
        }
        Self::from_parts(d, partitions, values)
    }

    fn from_parts(d: usize, partitions: Vec<Partition>, values: Vec<i64>) -> Self {
        let index = partitions
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        CharacterTable {
            d,
            partitions,
            index,
            values,
        }
    }

    /// Shared table for `S_d`: memory first, then the cache directory, then a
    /// fresh build (written back to the cache directory if one is set).
    pub fn global(d: usize) -> Result<Arc<CharacterTable>> {
        let mut map = tables().lock().unwrap();
        if let Some(t) = map.get(&d) {
            return Ok(Arc::clone(t));
        }
        let table = match cache_dir() {
            Some(dir) => Self::load_or_build(d, &dir)?,
            None => Self::build(d),
        };
        let table = Arc::new(table);
        map.insert(d, Arc::clone(&table));
        Ok(table)
    }

    pub fn load_or_build(d: usize, dir: &Path) -> Result<CharacterTable> {
        let path = Self::cache_path(dir, d);
        if path.exists() {
            return Self::load(&path);
        }
        let table = Self::build(d);
        table.save(dir)?;
        Ok(table)
    }

    pub fn cache_path(dir: &Path, d: usize) -> PathBuf {
        dir.join(format!("chartab-d{d}.tsv"))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    fn position(&self, p: &Partition) -> Result<usize> {
        check_weight(self.d, p)?;
        self.index
            .get(p)
            .copied()
            .ok_or_else(|| Error::InvalidPartition(p.to_string()))
    }

    pub fn value(&self, lambda: &Partition, mu: &Partition) -> Result<i64> {
        let r = self.position(lambda)?;
        let c = self.position(mu)?;
        Ok(self.values[r * self.partitions.len() + c])
    }

    /// The row `chi^lambda(.)` in column order.
    pub fn row(&self, lambda: &Partition) -> Result<&[i64]> {
        let r = self.position(lambda)?;
        let n = self.partitions.len();
        Ok(&self.values[r * n..(r + 1) * n])
    }

    /// Serialized form: one `d<TAB>lambda<TAB>mu<TAB>value` line per entry.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let n = self.partitions.len();
        for (r, lambda) in self.partitions.iter().enumerate() {
            for (c, mu) in self.partitions.iter().enumerate() {
                out.push_str(&format!(
                    "{}\t{}\t{}\t{}\n",
                    self.d,
                    lambda,
                    mu,
                    self.values[r * n + c]
                ));
            }
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<CharacterTable> {
        let mut d = None;
        let mut entries = HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 4 {
                return Err(Error::Cache(format!(
                    "line {}: expected 4 fields",
                    lineno + 1
                )));
            }
            let this_d: usize = fields[0]
                .parse()
                .map_err(|_| Error::Cache(format!("line {}: bad degree", lineno + 1)))?;
            if *d.get_or_insert(this_d) != this_d {
                return Err(Error::Cache(format!("line {}: mixed degrees", lineno + 1)));
            }
            let lambda: Partition = fields[1].parse()?;
            let mu: Partition = fields[2].parse()?;
            check_weight(this_d, &lambda)?;
            check_weight(this_d, &mu)?;
            let value: i64 = fields[3]
                .parse()
                .map_err(|_| Error::Cache(format!("line {}: bad value", lineno + 1)))?;
            entries.insert((lambda, mu), value);
        }
        let d = d.ok_or_else(|| Error::Cache("empty table file".into()))?;
        let partitions = partitions_of(d);
        let mut values = Vec::with_capacity(partitions.len() * partitions.len());
        for lambda in &partitions {
            for mu in &partitions {
                let v = entries
                    .get(&(lambda.clone(), mu.clone()))
                    .ok_or_else(|| Error::Cache(format!("missing entry ({lambda}; {mu})")))?;
                values.push(*v);
            }
        }
        Ok(Self::from_parts(d, partitions, values))
    }

    pub fn load(path: &Path) -> Result<CharacterTable> {
        Self::from_tsv(&fs::read_to_string(path)?)
    }

    /// Writes the table into `dir` through a temporary file and a rename, so
    /// concurrent writers of the same table leave one complete file behind.
    pub fn save(&self, dir: &Path) -> Result<PathBuf> {
        fs::create_dir_all(dir)?;
        let path = Self::cache_path(dir, self.d);
        let tmp = dir.join(format!(".chartab-d{}.{}.tmp", self.d, std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(self.to_tsv().as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{factorial, from_big, int, Rational};
    use num_bigint::BigInt;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn small_values() {
        for d in 1..7 {
            for mu in partitions_of(d) {
                assert_eq!(character_direct(&Partition::row(d), &mu).unwrap(), 1);
                let sign = if (d - mu.len()) % 2 == 0 { 1 } else { -1 };
                assert_eq!(character_direct(&Partition::column(d), &mu).unwrap(), sign);
            }
        }
        assert_eq!(character(&p("2,1"), &p("3")).unwrap(), -1);
        assert_eq!(character(&p("2,1"), &p("2,1")).unwrap(), 0);
        assert_eq!(character(&p("2,1"), &p("1,1,1")).unwrap(), 2);
        assert_eq!(character(&p("3,1"), &p("2,2")).unwrap(), -1);
        assert!(matches!(
            character(&p("2,1"), &p("2,2")),
            Err(Error::WeightMismatch { .. })
        ));
    }

    #[test]
    fn orthogonality_up_to_ten() {
        for d in 0..=10 {
            let t = CharacterTable::build(d);
            let parts = t.partitions();
            let sizes: Vec<BigInt> = parts.iter().map(Partition::class_size).collect();
            for a in parts {
                let ra = t.row(a).unwrap();
                assert_eq!(BigInt::from(ra[parts.len() - 1]), a.dimension());
                for b in parts {
                    let rb = t.row(b).unwrap();
                    let s: BigInt = (0..parts.len()).map(|c| &sizes[c] * ra[c] * rb[c]).sum();
                    let expected = if a == b {
                        factorial(d)
                    } else {
                        BigInt::from(0)
                    };
                    assert_eq!(s, expected, "rows {a} {b}");
                }
            }
            // columns: sum_lambda chi(mu) chi(nu) = z_mu [mu = nu]
            for (c1, mu) in parts.iter().enumerate() {
                for (c2, _) in parts.iter().enumerate() {
                    let s: i64 = parts
                        .iter()
                        .map(|l| t.row(l).unwrap()[c1] * t.row(l).unwrap()[c2])
                        .sum();
                    let expected = if c1 == c2 {
                        mu.class_data().z
                    } else {
                        BigInt::from(0)
                    };
                    assert_eq!(BigInt::from(s), expected);
                }
            }
        }
    }

    #[test]
    fn eta_examples_and_antisymmetry() {
        assert_eq!(eta(&p("3")), 3);
        assert_eq!(eta(&p("2,1")), 0);
        assert_eq!(eta(&p("4,1")), 5);
        for d in 0..9 {
            for l in partitions_of(d) {
                assert_eq!(eta(&l), -eta(&l.conjugate()));
            }
        }
    }

    #[test]
    fn eta_matches_transposition_character() {
        for d in 2..=8 {
            let tau = Partition::transposition(d).unwrap();
            for l in partitions_of(d) {
                let lhs = from_big(tau.class_size()) * int(character(&l, &tau).unwrap())
                    / from_big(l.dimension());
                assert_eq!(lhs, Rational::from_integer(eta(&l).into()), "{l}");
            }
        }
    }

    #[test]
    fn hook_character_examples() {
        use crate::exactnum::binomial;
        for d in 1..8 {
            let h = hook_characters(&Partition::column(d));
            for (j, v) in h.iter().enumerate() {
                assert_eq!(BigInt::from(*v), binomial(d as i64 - 1, j as i64));
                assert_eq!(BigInt::from(*v), Partition::hook(d, j).dimension());
            }
            let h = hook_characters(&Partition::row(d));
            for (j, v) in h.iter().enumerate() {
                assert_eq!(*v, if j % 2 == 0 { 1 } else { -1 });
            }
        }
        assert_eq!(hook_characters(&p("2,1")), vec![1, 0, -1]);
    }

    #[test]
    fn hook_characters_agree_with_mn() {
        for d in 1..=10 {
            for beta in partitions_of(d) {
                let fast = hook_characters(&beta);
                for (j, v) in fast.iter().enumerate() {
                    assert_eq!(
                        *v,
                        character(&Partition::hook(d, j), &beta).unwrap(),
                        "beta {beta} j {j}"
                    );
                }
            }
        }
    }

    #[test]
    fn tsv_round_trip_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let t = CharacterTable::build(6);
        let path = t.save(dir.path()).unwrap();
        let bytes = fs::read(&path).unwrap();
        let back = CharacterTable::load(&path).unwrap();
        assert_eq!(back, t);
        back.save(dir.path()).unwrap();
        assert_eq!(fs::read(&path).unwrap(), bytes);
        let reloaded = CharacterTable::load_or_build(6, dir.path()).unwrap();
        assert_eq!(reloaded, t);
    }

    #[test]
    fn tsv_rejects_damage() {
        let t = CharacterTable::build(3).to_tsv();
        let truncated: String = t.lines().take(4).map(|l| format!("{l}\n")).collect();
        assert!(CharacterTable::from_tsv(&truncated).is_err());
        assert!(CharacterTable::from_tsv("3\t3\t2,1\n").is_err());
        assert!(CharacterTable::from_tsv("").is_err());
    }
}
