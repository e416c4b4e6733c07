//! Exhaustive scans over pairs of partitions: the binomial-product
//! inequalities, monotonicity of `p_k` under strict majorization, and
//! collisions `p_k(a) = p_k(b)` between same-length partitions.
//!
//! Work is split into `(n, length)` buckets processed in parallel; results
//! are concatenated in bucket order, so the report never depends on the
//! number of worker threads.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::{colored_count_tuple, majorizes, partitions_by_length, Majorization, Partition};

pub const ENGINE_VERSION: &str = concat!("hilbert-core ", env!("CARGO_PKG_VERSION"));

/// Default ranges used by the command line when none are given.
pub const DEFAULT_N_MAX: u32 = 18;
pub const DEFAULT_P_MAX: u32 = 6;
pub const DEFAULT_K_MAX: i64 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanKind {
    LemmaDiffLength,
    LemmaSameLength,
    Majorization,
    Conjecture,
}

impl ScanKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScanKind::LemmaDiffLength => "lemma_diff_length",
            ScanKind::LemmaSameLength => "lemma_same_length",
            ScanKind::Majorization => "majorization",
            ScanKind::Conjecture => "conjecture",
        }
    }
}

impl fmt::Display for ScanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LemmaMode {
    DiffLength,
    SameLength,
}

/// Which quantity a record compares.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Form {
    /// `∏ (n_i + 1)`; independent of `p`, recorded with `k_or_p = 1`.
    PlusOne,
    /// `∏ (n_i + p)/p`, compared as `∏(n_i + p)·p^s` vs `∏(m_j + p)·p^r`.
    Ratio,
    /// `∏ C(n_i + p, p)`.
    Binomial,
    /// `p_k(a) = ∏ p_k(n_i)`.
    Colored,
}

impl Form {
    pub fn as_str(self) -> &'static str {
        match self {
            Form::PlusOne => "plus_one",
            Form::Ratio => "ratio",
            Form::Binomial => "binomial",
            Form::Colored => "colored",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub n: u32,
    pub a: Partition,
    pub b: Partition,
    pub k_or_p: i64,
    #[serde(with = "crate::bigser")]
    pub value_a: BigInt,
    #[serde(with = "crate::bigser")]
    pub value_b: BigInt,
    pub form: Form,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanParameters {
    pub n_max: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_set: Option<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub scan_kind: ScanKind,
    pub parameters: ScanParameters,
    pub pairs_checked: u64,
    /// Failed inequalities, or for [`ScanKind::Conjecture`] the collisions.
    pub violations: Vec<Violation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
    pub engine_version: String,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
enum Record {
    Header {
        scan_kind: ScanKind,
        parameters: ScanParameters,
        pairs_checked: u64,
        violation_count: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        wall_time_ms: Option<u64>,
        engine_version: String,
    },
    Violation {
        scan_kind: ScanKind,
        #[serde(flatten)]
        violation: Violation,
    },
}

#[derive(Serialize)]
struct CsvRow<'a> {
    scan_kind: &'a str,
    n: u32,
    a: String,
    b: String,
    k_or_p: i64,
    value_a: String,
    value_b: String,
    form: &'a str,
}

impl ScanReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    /// The same report with the timing dropped, for byte-level comparison.
    pub fn without_timing(mut self) -> Self {
        self.wall_time_ms = None;
        self
    }

    /// One header line, then one line per violation.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        let header = Record::Header {
            scan_kind: self.scan_kind,
            parameters: self.parameters.clone(),
            pairs_checked: self.pairs_checked,
            violation_count: self.violations.len() as u64,
            wall_time_ms: self.wall_time_ms,
            engine_version: self.engine_version.clone(),
        };
        out.push_str(&serde_json::to_string(&header).expect("header serializes"));
        out.push('\n');
        for v in &self.violations {
            let rec = Record::Violation {
                scan_kind: self.scan_kind,
                violation: v.clone(),
            };
            out.push_str(&serde_json::to_string(&rec).expect("violation serializes"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self> {
        let bad = |line: usize, e: &dyn fmt::Display| Error::Usage(format!("report line {line}: {e}"));
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, first) = lines.next().ok_or_else(|| Error::Usage("empty report".into()))?;
        let mut report = match serde_json::from_str(first).map_err(|e| bad(1, &e))? {
            Record::Header {
                scan_kind,
                parameters,
                pairs_checked,
                wall_time_ms,
                engine_version,
                ..
            } => ScanReport {
                scan_kind,
                parameters,
                pairs_checked,
                violations: Vec::new(),
                wall_time_ms,
                engine_version,
            },
            Record::Violation { .. } => return Err(bad(1, &"expected a header record")),
        };
        for (i, line) in lines {
            match serde_json::from_str(line).map_err(|e| bad(i + 1, &e))? {
                Record::Violation { violation, .. } => report.violations.push(violation),
                Record::Header { .. } => return Err(bad(i + 1, &"second header record")),
            }
        }
        Ok(report)
    }

    /// Tabular export: `scan_kind,n,a,b,k_or_p,value_a,value_b,form`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        let csv_err = |e: csv::Error| Error::Io(e.to_string());
        if self.violations.is_empty() {
            wtr.write_record(["scan_kind", "n", "a", "b", "k_or_p", "value_a", "value_b", "form"])
                .map_err(csv_err)?;
        }
        for v in &self.violations {
            wtr.serialize(CsvRow {
                scan_kind: self.scan_kind.as_str(),
                n: v.n,
                a: v.a.literal(),
                b: v.b.literal(),
                k_or_p: v.k_or_p,
                value_a: v.value_a.to_string(),
                value_b: v.value_b.to_string(),
                form: v.form.as_str(),
            })
            .map_err(csv_err)?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is UTF-8")
    }
}

/// One `(n, length)` bucket of partitions together with whatever else the
/// scan compares them against.
struct Bucket {
    n: u32,
    parts: Vec<Partition>,
    /// Diff-length scans: every partition of `n` that is strictly longer.
    longer: Vec<Partition>,
}

fn buckets(n_min: u32, n_max: u32, with_longer: bool) -> Result<Vec<Bucket>> {
    let mut out = Vec::new();
    for n in n_min.max(1)..=n_max {
        let by_len = partitions_by_length(n)?;
        for (&len, parts) in &by_len {
            let longer = if with_longer {
                by_len.range(len + 1..).flat_map(|(_, v)| v.iter().cloned()).collect()
            } else {
                Vec::new()
            };
            out.push(Bucket {
                n,
                parts: parts.clone(),
                longer,
            });
        }
    }
    Ok(out)
}

fn product<I: IntoIterator<Item = BigInt>>(it: I) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, x| acc * x)
}

/// The three lemma quantities for one partition at one `p`.
struct LemmaValues {
    plus_one: BigInt,
    /// `∏ (n_i + p)` for `p = 1..=p_max`.
    shifted: Vec<BigInt>,
    /// `∏ C(n_i + p, p)` for `p = 1..=p_max`.
    binomial: Vec<BigInt>,
}

fn lemma_values(a: &Partition, p_max: u32) -> LemmaValues {
    let parts = a.parts();
    LemmaValues {
        plus_one: product(parts.iter().map(|&x| BigInt::from(x + 1))),
        shifted: (1..=p_max)
            .map(|p| product(parts.iter().map(|&x| BigInt::from(x + p))))
            .collect(),
        binomial: (1..=p_max)
            .map(|p| product(parts.iter().map(|&x| binomial(BigInt::from(x + p), BigInt::from(p)))))
            .collect(),
    }
}

/// Every lemma comparison for the oriented pair `(a, b)` (the lemmas
/// predict `a < b` in each form) that fails, in the order plus-one, then
/// ratio and binomial for each `p`.
fn lemma_failures(n: u32, a: &Partition, va: &LemmaValues, b: &Partition, vb: &LemmaValues, p_max: u32) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |k_or_p: u32, form: Form, x: &BigInt, y: &BigInt| {
        if x >= y {
            out.push(Violation {
                n,
                a: a.clone(),
                b: b.clone(),
                k_or_p: k_or_p as i64,
                value_a: x.clone(),
                value_b: y.clone(),
                form,
            });
        }
    };
    push(1, Form::PlusOne, &va.plus_one, &vb.plus_one);
    for p in 1..=p_max {
        let i = (p - 1) as usize;
        let pb = BigInt::from(p);
        // ∏(n_i+p)/p^r < ∏(m_j+p)/p^s  ⇔  ∏(n_i+p)·p^s < ∏(m_j+p)·p^r
        let lhs = &va.shifted[i] * pb.pow(b.len() as u32);
        let rhs = &vb.shifted[i] * pb.pow(a.len() as u32);
        push(p, Form::Ratio, &lhs, &rhs);
        push(p, Form::Binomial, &va.binomial[i], &vb.binomial[i]);
    }
    out
}

/// Orients a same-length pair so that at the first differing index the
/// first partition has the smaller part.
fn orient<'a>(x: &'a Partition, y: &'a Partition) -> (&'a Partition, &'a Partition) {
    match x.parts().iter().zip(y.parts()).find(|(u, v)| u != v) {
        Some((u, v)) if u > v => (y, x),
        _ => (x, y),
    }
}

/// Checks `∏(n_i+1) < ∏(m_j+1)`, `∏(n_i+p)/p < ∏(m_j+p)/p` and
/// `∏C(n_i+p,p) < ∏C(m_j+p,p)` for `1 ≤ p ≤ p_max` over every qualifying
/// pair of partitions of every `n ≤ n_max`.
///
/// `DiffLength` pairs a shorter partition `a` with every longer `b`.
/// `SameLength` pairs distinct partitions of equal length, oriented so
/// that `a` has the smaller part at the first index where they differ.
pub fn verify_lemma_inequalities(n_max: u32, p_max: u32, mode: LemmaMode) -> Result<ScanReport> {
    if n_max < 4 || p_max < 1 {
        return Err(Error::Usage(format!(
            "lemma scans need n_max ≥ 4 and p_max ≥ 1, got n_max = {n_max}, p_max = {p_max}"
        )));
    }
    let start = Instant::now();
    let bs = buckets(1, n_max, mode == LemmaMode::DiffLength)?;
    let results: Vec<(u64, Vec<Violation>)> = bs
        .par_iter()
        .map(|bucket| {
            let values: Vec<LemmaValues> = bucket.parts.iter().map(|a| lemma_values(a, p_max)).collect();
            let mut pairs = 0u64;
            let mut violations = Vec::new();
            match mode {
                LemmaMode::DiffLength => {
                    let longer: Vec<LemmaValues> = bucket.longer.iter().map(|b| lemma_values(b, p_max)).collect();
                    for (a, va) in bucket.parts.iter().zip(&values) {
                        for (b, vb) in bucket.longer.iter().zip(&longer) {
                            pairs += 1;
                            violations.extend(lemma_failures(bucket.n, a, va, b, vb, p_max));
                        }
                    }
                }
                LemmaMode::SameLength => {
                    for i in 0..bucket.parts.len() {
                        for j in i + 1..bucket.parts.len() {
                            pairs += 1;
                            let (a, b) = orient(&bucket.parts[i], &bucket.parts[j]);
                            let (va, vb) = if std::ptr::eq(a, &bucket.parts[i]) {
                                (&values[i], &values[j])
                            } else {
                                (&values[j], &values[i])
                            };
                            violations.extend(lemma_failures(bucket.n, a, va, b, vb, p_max));
                        }
                    }
                }
            }
            (pairs, violations)
        })
        .collect();
    let scan_kind = match mode {
        LemmaMode::DiffLength => ScanKind::LemmaDiffLength,
        LemmaMode::SameLength => ScanKind::LemmaSameLength,
    };
    Ok(assemble(
        scan_kind,
        ScanParameters {
            n_max,
            p_max: Some(p_max),
            k_set: None,
        },
        results,
        start,
    ))
}

fn assemble(
    scan_kind: ScanKind,
    parameters: ScanParameters,
    results: Vec<(u64, Vec<Violation>)>,
    start: Instant,
) -> ScanReport {
    let mut pairs_checked = 0;
    let mut violations = Vec::new();
    for (p, v) in results {
        pairs_checked += p;
        violations.extend(v);
    }
    ScanReport {
        scan_kind,
        parameters,
        pairs_checked,
        violations,
        wall_time_ms: Some(start.elapsed().as_millis() as u64),
        engine_version: ENGINE_VERSION.to_string(),
    }
}

fn normalized_k_set(k_set: &[i64]) -> Result<Vec<i64>> {
    if k_set.is_empty() {
        return Err(Error::Usage("k_set must not be empty".into()));
    }
    let mut ks = k_set.to_vec();
    ks.sort_unstable();
    ks.dedup();
    Ok(ks)
}

/// For every strictly comparable same-length pair `b ≻ a` of partitions of
/// `n ≤ n_max`, checks `p_k(b) > p_k(a)` for each `k` in `k_set` (all ≥ 3).
pub fn verify_majorization(k_set: &[i64], n_max: u32) -> Result<ScanReport> {
    let ks = normalized_k_set(k_set)?;
    if ks[0] < 3 {
        return Err(Error::Usage(format!("majorization scans need k ≥ 3, got {}", ks[0])));
    }
    let start = Instant::now();
    let bs = buckets(1, n_max, false)?;
    let results: Vec<Result<(u64, Vec<Violation>)>> = bs
        .par_iter()
        .map(|bucket| {
            let values: Vec<Vec<BigInt>> = bucket
                .parts
                .iter()
                .map(|a| ks.iter().map(|&k| colored_count_tuple(k, a)).collect())
                .collect();
            let mut pairs = 0u64;
            let mut violations = Vec::new();
            for i in 0..bucket.parts.len() {
                for j in i + 1..bucket.parts.len() {
                    let (lo, hi) = match majorizes(&bucket.parts[j], &bucket.parts[i])? {
                        Majorization::StrictlyMajorizes => (i, j),
                        Majorization::MajorizedBy => (j, i),
                        Majorization::Equal | Majorization::Incomparable => continue,
                    };
                    pairs += 1;
                    for (idx, &k) in ks.iter().enumerate() {
                        if values[hi][idx] <= values[lo][idx] {
                            violations.push(Violation {
                                n: bucket.n,
                                a: bucket.parts[lo].clone(),
                                b: bucket.parts[hi].clone(),
                                k_or_p: k,
                                value_a: values[lo][idx].clone(),
                                value_b: values[hi][idx].clone(),
                                form: Form::Colored,
                            });
                        }
                    }
                }
            }
            Ok((pairs, violations))
        })
        .collect();
    Ok(assemble(
        ScanKind::Majorization,
        ScanParameters {
            n_max,
            p_max: None,
            k_set: Some(ks),
        },
        results.into_iter().collect::<Result<_>>()?,
        start,
    ))
}

/// Records every collision `p_k(a) = p_k(b)` over unordered pairs of
/// distinct same-length partitions of `n ≤ n_max`, for each `k` in `k_set`.
/// Collisions are findings, not errors.
pub fn scan_conjecture(k_set: &[i64], n_max: u32) -> Result<ScanReport> {
    let ks = normalized_k_set(k_set)?;
    let start = Instant::now();
    let bs = buckets(1, n_max, false)?;
    let results: Vec<(u64, Vec<Violation>)> = bs
        .par_iter()
        .map(|bucket| {
            let mut pairs = 0u64;
            let mut collisions = Vec::new();
            let len = bucket.parts.len() as u64;
            pairs += len * len.saturating_sub(1) / 2;
            for &k in &ks {
                let values: Vec<BigInt> = bucket.parts.iter().map(|a| colored_count_tuple(k, a)).collect();
                let mut groups: BTreeMap<&BigInt, Vec<usize>> = BTreeMap::new();
                for (i, v) in values.iter().enumerate() {
                    groups.entry(v).or_default().push(i);
                }
                let mut found = Vec::new();
                for members in groups.values().filter(|m| m.len() > 1) {
                    for x in 0..members.len() {
                        for y in x + 1..members.len() {
                            found.push((members[x], members[y]));
                        }
                    }
                }
                found.sort_unstable();
                for (i, j) in found {
                    collisions.push(Violation {
                        n: bucket.n,
                        a: bucket.parts[i].clone(),
                        b: bucket.parts[j].clone(),
                        k_or_p: k,
                        value_a: values[i].clone(),
                        value_b: values[j].clone(),
                        form: Form::Colored,
                    });
                }
            }
            (pairs, collisions)
        })
        .collect();
    Ok(assemble(
        ScanKind::Conjecture,
        ScanParameters {
            n_max,
            p_max: None,
            k_set: Some(ks),
        },
        results,
        start,
    ))
}

/// Lemma comparisons for one oriented pair, exposed for spot checks:
/// `(form, p, value_a, value_b)` for plus-one and for ratio and binomial at
/// each `p ≤ p_max`.
pub fn lemma_comparisons(a: &Partition, b: &Partition, p_max: u32) -> Vec<(Form, u32, BigInt, BigInt)> {
    let (va, vb) = (lemma_values(a, p_max), lemma_values(b, p_max));
    let mut out = vec![(Form::PlusOne, 1, va.plus_one.clone(), vb.plus_one.clone())];
    for p in 1..=p_max {
        let i = (p - 1) as usize;
        let pb = BigInt::from(p);
        out.push((
            Form::Ratio,
            p,
            &va.shifted[i] * pb.pow(b.len() as u32),
            &vb.shifted[i] * pb.pow(a.len() as u32),
        ));
        out.push((Form::Binomial, p, va.binomial[i].clone(), vb.binomial[i].clone()));
    }
    out
}
