//! Integer partitions, the majorization order and k-coloured partition counts.
//!
//! Partitions are stored with parts in weakly increasing order,
//! `n_1 ≤ n_2 ≤ … ≤ n_r`. Majorization is defined on that ordering: `b`
//! majorizes `a` when every proper prefix sum of `a` is at most the
//! corresponding prefix sum of `b`. Under the more common decreasing
//! convention the same relation reads the other way round, so `(2,2)`
//! majorizes `(1,3)` here.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{indexed_product, Exponent, FactorSign, TruncatedSeries};

/// Largest `n` the enumeration oracle accepts by default.
pub const DEFAULT_ORACLE_BOUND: u32 = 12;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Canonicalizes `parts` into increasing order. Parts must be positive
    /// and there must be at least one.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Usage("a partition needs at least one part".into()));
        }
        if parts.contains(&0) {
            return Err(Error::Usage("partition parts must be positive".into()));
        }
        parts.sort_unstable();
        Ok(Partition { parts })
    }

    /// The partition of 0. Only [`enumerate_partitions_with`] hands it out.
    fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Parses a literal such as `"3,1"`. The flag reports whether the parts
    /// had to be reordered.
    pub fn parse_literal(s: &str) -> Result<(Self, bool)> {
        let parts = s
            .split(',')
            .map(|p| {
                let p = p.trim();
                p.parse::<u32>()
                    .map_err(|_| Error::Usage(format!("invalid partition part `{p}` in `{s}`")))
            })
            .collect::<Result<Vec<u32>>>()?;
        let reordered = parts.windows(2).any(|w| w[0] > w[1]);
        Ok((Partition::new(parts)?, reordered))
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// The integer being partitioned.
    pub fn n(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn max_part(&self) -> u32 {
        self.parts.last().copied().unwrap_or(0)
    }

    /// Number of parts equal to 1.
    pub fn ones(&self) -> usize {
        self.parts.iter().take_while(|&&p| p == 1).count()
    }

    /// Comma-separated form accepted by [`Partition::parse_literal`].
    pub fn literal(&self) -> String {
        self.parts
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.literal())
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Partition::parse_literal(s).map(|(p, _)| p)
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

/// All partitions of `n` (optionally of exactly `length` parts) in
/// lexicographic order of their increasing tuples.
pub fn enumerate_partitions(n: u32, length: Option<usize>) -> Result<Vec<Partition>> {
    enumerate_partitions_with(n, length, false)
}

/// As [`enumerate_partitions`]; `allow_empty` makes `n == 0` yield the
/// single empty partition instead of an error.
pub fn enumerate_partitions_with(
    n: u32,
    length: Option<usize>,
    allow_empty: bool,
) -> Result<Vec<Partition>> {
    if n == 0 {
        return if allow_empty {
            Ok(match length {
                None | Some(0) => vec![Partition::empty()],
                Some(_) => Vec::new(),
            })
        } else {
            Err(Error::Usage("cannot enumerate partitions of 0".into()))
        };
    }
    if let Some(len) = length {
        if len == 0 || len > n as usize {
            return Err(Error::Usage(format!(
                "length filter {len} must lie in 1..={n}"
            )));
        }
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill(n, 1, length, &mut current, &mut out);
    Ok(out)
}

fn fill(remaining: u32, min_part: u32, length: Option<usize>, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        if length.is_none_or(|l| l == current.len()) {
            out.push(Partition {
                parts: current.clone(),
            });
        }
        return;
    }
    if let Some(l) = length {
        let slots = l.saturating_sub(current.len()) as u32;
        // Need at least one more part, each ≥ min_part.
        if slots == 0 || (slots as u64) * (min_part as u64) > remaining as u64 {
            return;
        }
    }
    for part in min_part..=remaining {
        current.push(part);
        fill(remaining - part, part, length, current, out);
        current.pop();
    }
}

/// Partitions of `n` grouped by length.
pub fn partitions_by_length(n: u32) -> Result<BTreeMap<usize, Vec<Partition>>> {
    let mut map: BTreeMap<usize, Vec<Partition>> = BTreeMap::new();
    for p in enumerate_partitions(n, None)? {
        map.entry(p.len()).or_default().push(p);
    }
    Ok(map)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Majorization {
    StrictlyMajorizes,
    Equal,
    MajorizedBy,
    Incomparable,
}

/// Compares `b` against `a`: [`Majorization::StrictlyMajorizes`] means
/// `b ≻ a`.
pub fn majorizes(b: &Partition, a: &Partition) -> Result<Majorization> {
    if a.n() != b.n() || a.len() != b.len() {
        return Err(Error::Usage(format!(
            "majorization needs partitions of the same n and length, got {a} and {b}"
        )));
    }
    if a == b {
        return Ok(Majorization::Equal);
    }
    let (mut sa, mut sb) = (0u64, 0u64);
    let (mut a_le_b, mut b_le_a) = (true, true);
    for (x, y) in a.parts.iter().zip(&b.parts).take(a.len() - 1) {
        sa += *x as u64;
        sb += *y as u64;
        a_le_b &= sa <= sb;
        b_le_a &= sb <= sa;
    }
    Ok(match (a_le_b, b_le_a) {
        (true, _) => Majorization::StrictlyMajorizes,
        (false, true) => Majorization::MajorizedBy,
        (false, false) => Majorization::Incomparable,
    })
}

type ColoredCache = RwLock<HashMap<i64, Arc<Vec<BigInt>>>>;

fn colored_cache() -> &'static ColoredCache {
    static CACHE: OnceLock<ColoredCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Coefficients `p_k(0..=n_max)` of `∏_{m≥1} (1 − q^m)^{−k}`. Any integer
/// `k` is accepted; for `k ≤ 0` the values come from the series alone.
pub fn colored_counts(k: i64, n_max: u32) -> Arc<Vec<BigInt>> {
    if let Some(v) = colored_cache().read().unwrap().get(&k) {
        if v.len() > n_max as usize {
            return Arc::clone(v);
        }
    }
    // Grow geometrically so repeated queries don't re-expand one step at a time.
    let truncation = {
        let cached = colored_cache()
            .read()
            .unwrap()
            .get(&k)
            .map_or(0, |v| v.len() as u32);
        n_max.max(cached.saturating_mul(2)).max(16)
    };
    let series = indexed_product(truncation, 0, |m| {
        Ok(TruncatedSeries::binomial_factor(Exponent::t(m), FactorSign::Minus, -k, truncation, 0)?.into())
    })
    .expect("eta factors are normalized");
    let values: Vec<BigInt> = (0..=truncation)
        .map(|n| series.coeff(&Exponent::t(n)).expect("within truncation"))
        .collect();
    let values = Arc::new(values);
    let mut cache = colored_cache().write().unwrap();
    // Another thread may have stored a longer expansion meanwhile; both are
    // prefixes of the same sequence, so keep the longer one.
    let entry = cache.entry(k).or_insert_with(|| Arc::clone(&values));
    if entry.len() < values.len() {
        *entry = Arc::clone(&values);
    }
    Arc::clone(entry)
}

/// `p_k(n)`, the number of k-coloured partitions of `n`.
pub fn colored_count(k: i64, n: u32) -> BigInt {
    colored_counts(k, n)[n as usize].clone()
}

/// `p_k(a) = ∏ p_k(a_i)`.
pub fn colored_count_tuple(k: i64, a: &Partition) -> BigInt {
    let table = colored_counts(k, a.max_part());
    a.parts
        .iter()
        .fold(BigInt::one(), |acc, &p| acc * &table[p as usize])
}

/// Counts k-coloured partitions of `n` by listing every multiset of
/// `(part, colour)` pairs. Exponential; refuses `n` above
/// [`DEFAULT_ORACLE_BOUND`].
pub fn brute_force_colored(k: u32, n: u32) -> Result<BigInt> {
    brute_force_colored_bounded(k, n, DEFAULT_ORACLE_BOUND)
}

pub fn brute_force_colored_bounded(k: u32, n: u32, bound: u32) -> Result<BigInt> {
    if k == 0 {
        return Err(Error::Usage("the colouring oracle needs k >= 1".into()));
    }
    if n > bound {
        return Err(Error::OracleBound { n, bound });
    }
    // Items are (part, colour) pairs indexed (part - 1)·k + colour; a
    // multiset is a non-decreasing index sequence.
    fn walk(remaining: u32, start: u32, k: u32, count: &mut u64) {
        if remaining == 0 {
            *count += 1;
            return;
        }
        let mut idx = start;
        loop {
            let part = idx / k + 1;
            if part > remaining {
                break;
            }
            walk(remaining - part, idx, k, count);
            idx += 1;
        }
    }
    let mut count = 0u64;
    walk(n, 0, k, &mut count);
    Ok(BigInt::from(count))
}
