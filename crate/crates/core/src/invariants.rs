//! Betti numbers, h^{p,0}, full Hodge numbers and Euler characteristics of
//! `S^[n]` and of products `S^[a] = S^[n_1] × ⋯ × S^[n_r]`.
//!
//! Products are handled by the Künneth formula: per-factor polynomials are
//! computed from a one-variable-in-`t` series truncated at the largest part
//! and then convolved.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::{colored_count_tuple, Partition};
use crate::series::{indexed_product, Exponent, Factor, FactorSign, TruncatedSeries};
use crate::surfaces::SurfaceInvariants;

/// Betti numbers `b_0 … b_{4n}` of a variety of complex dimension `2n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoincarePolynomial {
    #[serde(with = "crate::bigser::vec")]
    pub coefficients: Vec<BigInt>,
}

impl PoincarePolynomial {
    pub fn one() -> Self {
        PoincarePolynomial {
            coefficients: vec![BigInt::one()],
        }
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn betti(&self, i: usize) -> BigInt {
        self.coefficients.get(i).cloned().unwrap_or_default()
    }

    /// `P(X × Y) = P(X)·P(Y)`.
    pub fn kunneth(&self, other: &PoincarePolynomial) -> PoincarePolynomial {
        PoincarePolynomial {
            coefficients: convolve(&self.coefficients, &other.coefficients),
        }
    }

    /// `Σ (−1)^i b_i`.
    pub fn euler(&self) -> BigInt {
        self.coefficients
            .iter()
            .enumerate()
            .fold(BigInt::zero(), |acc, (i, b)| if i % 2 == 0 { acc + b } else { acc - b })
    }

    pub fn total(&self) -> BigInt {
        self.coefficients.iter().sum()
    }

    pub fn is_palindromic(&self) -> bool {
        let c = &self.coefficients;
        (0..c.len()).all(|i| c[i] == c[c.len() - 1 - i])
    }
}

impl fmt::Display for PoincarePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coefficients.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn convolve(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Hodge numbers `h[p][q]`, `0 ≤ p, q ≤ dim`, of a smooth projective variety
/// of complex dimension `dim`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeDiamond {
    pub dim: u32,
    #[serde(with = "crate::bigser::matrix")]
    pub h: Vec<Vec<BigInt>>,
}

impl HodgeDiamond {
    /// The diamond of a connected surface with known `h^{1,0}`, `h^{2,0}`:
    /// `h^{1,1} = b_2 − 2h^{2,0}`.
    pub fn of_surface(s: &SurfaceInvariants) -> Result<Self> {
        let (h10, h20) = hodge_data(s)?;
        let h11 = s.b2 as i64 - 2 * h20 as i64;
        if h11 < 0 {
            return Err(Error::InvalidParameter(format!(
                "`{}`: b2 = {} < 2·h20 = {}",
                s.label(),
                s.b2,
                2 * h20
            )));
        }
        let (h10, h20) = (BigInt::from(h10), BigInt::from(h20));
        let one = BigInt::one();
        let d = HodgeDiamond {
            dim: 2,
            h: vec![
                vec![one.clone(), h10.clone(), h20.clone()],
                vec![h10.clone(), BigInt::from(h11), h10.clone()],
                vec![h20, h10, one],
            ],
        };
        d.check()?;
        Ok(d)
    }

    pub fn get(&self, p: u32, q: u32) -> BigInt {
        self.h
            .get(p as usize)
            .and_then(|r| r.get(q as usize))
            .cloned()
            .unwrap_or_default()
    }

    /// Hodge symmetry `h^{p,q} = h^{q,p}`, Serre duality
    /// `h^{p,q} = h^{d−p,d−q}` and nonnegativity.
    pub fn check(&self) -> Result<()> {
        let d = self.dim as usize;
        let bad = |why: String| Err(Error::InvalidParameter(format!("inconsistent Hodge diamond: {why}")));
        if self.h.len() != d + 1 || self.h.iter().any(|r| r.len() != d + 1) {
            return bad(format!("expected a {0}×{0} table", d + 1));
        }
        for p in 0..=d {
            for q in 0..=d {
                let v = &self.h[p][q];
                if v.is_negative() {
                    return bad(format!("h[{p}][{q}] = {v} is negative"));
                }
                if *v != self.h[q][p] {
                    return bad(format!("h[{p}][{q}] ≠ h[{q}][{p}]"));
                }
                if *v != self.h[d - p][d - q] {
                    return bad(format!("h[{p}][{q}] ≠ h[{}][{}]", d - p, d - q));
                }
            }
        }
        Ok(())
    }

    /// `b_i = Σ_{p+q=i} h^{p,q}`.
    pub fn betti(&self) -> PoincarePolynomial {
        let d = self.dim as usize;
        let mut c = vec![BigInt::zero(); 2 * d + 1];
        for p in 0..=d {
            for q in 0..=d {
                c[p + q] += &self.h[p][q];
            }
        }
        PoincarePolynomial { coefficients: c }
    }

    /// The Hodge polynomial evaluated at `x = y = −1`.
    pub fn euler(&self) -> BigInt {
        self.betti().euler()
    }
}

fn hodge_data(s: &SurfaceInvariants) -> Result<(u32, u32)> {
    if s.b0 != 1 {
        return Err(Error::Disconnected(s.label()));
    }
    s.hodge_data().ok_or_else(|| Error::MissingHodgeData(s.label()))
}

type SeriesCache<K> = RwLock<HashMap<K, Arc<TruncatedSeries>>>;

/// Returns the cached expansion for `key` if it reaches `n`, else builds one
/// at `n` (or at twice the cached order, whichever is larger) and stores it.
fn cached_series<K, F>(cache: &SeriesCache<K>, key: K, n: u32, build: F) -> Result<Arc<TruncatedSeries>>
where
    K: std::hash::Hash + Eq + Copy,
    F: FnOnce(u32) -> Result<TruncatedSeries>,
{
    let cached_order = match cache.read().unwrap().get(&key) {
        Some(s) if s.truncation() >= n => return Ok(Arc::clone(s)),
        Some(s) => s.truncation(),
        None => 0,
    };
    let series = Arc::new(build(n.max(cached_order.saturating_mul(2)))?);
    let mut w = cache.write().unwrap();
    let entry = w.entry(key).or_insert_with(|| Arc::clone(&series));
    if entry.truncation() < series.truncation() {
        *entry = Arc::clone(&series);
    }
    Ok(Arc::clone(entry))
}

fn poincare_cache() -> &'static SeriesCache<(u32, u32, u32)> {
    static CACHE: OnceLock<SeriesCache<(u32, u32, u32)>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn build_poincare(b0: u32, b1: u32, b2: u32, n: u32) -> Result<TruncatedSeries> {
    let piece = |t: u32, z: u32, sign: FactorSign, e: u32| -> Result<Option<TruncatedSeries>> {
        if e == 0 {
            return Ok(None);
        }
        let exponent = match sign {
            FactorSign::Plus => e as i64,
            FactorSign::Minus => -(e as i64),
        };
        TruncatedSeries::binomial_factor(Exponent::tz(t, z), sign, exponent, n, 1).map(Some)
    };
    indexed_product(n, 1, |m| {
        let pieces = [
            piece(m, 2 * m - 1, FactorSign::Plus, b1)?,
            piece(m, 2 * m + 1, FactorSign::Plus, b1)?,
            piece(m, 2 * m - 2, FactorSign::Minus, b0)?,
            piece(m, 2 * m, FactorSign::Minus, b2)?,
            piece(m, 2 * m + 2, FactorSign::Minus, b0)?,
        ];
        Ok(Factor(pieces.into_iter().flatten().collect()))
    })
}

fn poincare_shared(s: &SurfaceInvariants, n: u32) -> Result<Arc<TruncatedSeries>> {
    cached_series(poincare_cache(), (s.b0, s.b1, s.b2), n, |order| {
        build_poincare(s.b0, s.b1, s.b2, order)
    })
}

/// `Σ_n P(S^[n], z) t^n` truncated at `t^n_max`: the coefficient of
/// `z^k t^n` is `b_k(S^[n])`.
pub fn poincare_series(s: &SurfaceInvariants, n_max: u32) -> Result<TruncatedSeries> {
    if n_max == 0 {
        return Err(Error::Usage("poincare_series needs a truncation of at least 1".into()));
    }
    poincare_shared(s, n_max)?.truncated(n_max)
}

/// `P(S^[n], z)`, read off the `t^n` slice of the series.
pub fn poincare_polynomial(s: &SurfaceInvariants, n: u32) -> Result<PoincarePolynomial> {
    if n == 0 {
        return Ok(PoincarePolynomial::one());
    }
    let series = poincare_shared(s, n)?;
    let mut c = vec![BigInt::zero(); 4 * n as usize + 1];
    for (e, v) in series.t_slice(n) {
        let k = e.aux_degs()[0] as usize;
        if k >= c.len() {
            return Err(Error::Usage(format!("z-degree {k} exceeds 4n = {}", 4 * n)));
        }
        c[k] = v.clone();
    }
    Ok(PoincarePolynomial { coefficients: c })
}

/// The Poincaré polynomial of `S^[a]`, by Künneth.
pub fn poincare_polynomial_tuple(s: &SurfaceInvariants, a: &Partition) -> Result<PoincarePolynomial> {
    poincare_shared(s, a.max_part())?;
    let mut acc = PoincarePolynomial::one();
    for &part in a.parts() {
        acc = acc.kunneth(&poincare_polynomial(s, part)?);
    }
    Ok(acc)
}

/// Result of a closed-form evaluation that only holds on part of the domain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedForm {
    Value(#[serde(with = "crate::bigser")] BigInt),
    NotApplicable(String),
}

impl ClosedForm {
    pub fn value(&self) -> Option<&BigInt> {
        match self {
            ClosedForm::Value(v) => Some(v),
            ClosedForm::NotApplicable(_) => None,
        }
    }
}

/// Closed forms for `b_0`, `b_1` and (for `b_0 = 1`, `b_1 = 0`) `b_2` of
/// `S^[n]`.
pub fn betti_closed(s: &SurfaceInvariants, n: u32, k: u32) -> ClosedForm {
    if n == 0 {
        return ClosedForm::NotApplicable("n must be positive".into());
    }
    let (n, b0) = (BigInt::from(n), BigInt::from(s.b0));
    match k {
        0 => ClosedForm::Value(binomial(&n + &b0 - 1, &b0 - 1)),
        1 => ClosedForm::Value(BigInt::from(s.b1) * binomial(&n + &b0 - 2, &b0 - 1)),
        2 if s.b0 == 1 && s.b1 == 0 => {
            let bump = if n > BigInt::one() { 1 } else { 0 };
            ClosedForm::Value(BigInt::from(s.b2 + bump))
        }
        2 => ClosedForm::NotApplicable("the b2 closed form needs b0 = 1 and b1 = 0".into()),
        _ => ClosedForm::NotApplicable(format!("no closed form for b{k}")),
    }
}

fn hodge_p0_cache() -> &'static SeriesCache<(u32, u32)> {
    static CACHE: OnceLock<SeriesCache<(u32, u32)>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn build_hodge_p0(h10: u32, h20: u32, n: u32) -> Result<TruncatedSeries> {
    let mut s = TruncatedSeries::binomial_factor(Exponent::new(1, &[0])?, FactorSign::Minus, -1, n, 1)?;
    if h10 > 0 {
        s = s.mul(&TruncatedSeries::binomial_factor(
            Exponent::tz(1, 1),
            FactorSign::Plus,
            h10 as i64,
            n,
            1,
        )?)?;
    }
    if h20 > 0 {
        s = s.mul(&TruncatedSeries::binomial_factor(
            Exponent::tz(1, 2),
            FactorSign::Minus,
            -(h20 as i64),
            n,
            1,
        )?)?;
    }
    Ok(s)
}

/// `h^{0,0}, …, h^{2n,0}` of `S^[n]`, the `t^n` slice of
/// `(1 + xt)^{h^{1,0}} / ((1 − t)(1 − x²t)^{h^{2,0}})`.
pub fn hodge_p0_vector(s: &SurfaceInvariants, n: u32) -> Result<Vec<BigInt>> {
    let (h10, h20) = hodge_data(s)?;
    let mut v = vec![BigInt::zero(); 2 * n as usize + 1];
    if n == 0 {
        v[0] = BigInt::one();
        return Ok(v);
    }
    let series = cached_series(hodge_p0_cache(), (h10, h20), n, |order| build_hodge_p0(h10, h20, order))?;
    for (e, c) in series.t_slice(n) {
        v[e.aux_degs()[0] as usize] = c.clone();
    }
    Ok(v)
}

/// `h^{p,0}(S^[n])` for `p ≤ 2n`.
pub fn hodge_p0(s: &SurfaceInvariants, n: u32, p: u32) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::Usage("n must be positive".into()));
    }
    if p > 2 * n {
        return Err(Error::Usage(format!("p = {p} exceeds dim S^[{n}] = {}", 2 * n)));
    }
    Ok(hodge_p0_vector(s, n)?.swap_remove(p as usize))
}

/// `h^{p,0}(S^[a])` for every `p`, by Künneth.
pub fn hodge_p0_tuple_vector(s: &SurfaceInvariants, a: &Partition) -> Result<Vec<BigInt>> {
    let mut acc = vec![BigInt::one()];
    for &part in a.parts() {
        acc = convolve(&acc, &hodge_p0_vector(s, part)?);
    }
    Ok(acc)
}

/// `h^{p,0}(S^[a]) = Σ_{t_1+⋯+t_r = p} ∏ h^{t_i,0}(S^[n_i])`.
pub fn hodge_p0_tuple(s: &SurfaceInvariants, a: &Partition, p: u32) -> Result<BigInt> {
    Ok(hodge_p0_tuple_vector(s, a)?
        .get(p as usize)
        .cloned()
        .unwrap_or_default())
}

/// `h^{n+1,0}(S^[m]) − h^{n+1,0}(S^[n])` for `1 ≤ n < m`; equals
/// `C(h^{1,0}(S), n + 1)`.
pub fn hodge_difference(s: &SurfaceInvariants, n: u32, m: u32) -> Result<BigInt> {
    if n == 0 || m <= n {
        return Err(Error::Usage(format!("need 1 ≤ n < m, got n = {n}, m = {m}")));
    }
    Ok(hodge_p0(s, m, n + 1)? - hodge_p0(s, n, n + 1)?)
}

/// The full Hodge diamond of `S^[n]` from that of `S`, via
/// `∏_k ∏_{p,q} (1 ∓ x^{p+k−1} y^{q+k−1} t^k)^{∓h^{p,q}}` with the upper sign
/// for `p + q` even.
pub fn hodge_polynomial_full(d: &HodgeDiamond, n: u32) -> Result<HodgeDiamond> {
    d.check()?;
    if d.dim != 2 {
        return Err(Error::Usage(format!("expected a surface diamond, got dimension {}", d.dim)));
    }
    if n == 0 {
        return Err(Error::Usage("n must be positive".into()));
    }
    let mut entries = Vec::new();
    for p in 0..=2u32 {
        for q in 0..=2u32 {
            let h = d.get(p, q);
            if h.is_zero() {
                continue;
            }
            let e = i64::try_from(&h).map_err(|_| Error::Usage(format!("h[{p}][{q}] = {h} is too large")))?;
            entries.push((p, q, e));
        }
    }
    let series = indexed_product(n, 2, |k| {
        let mut pieces = Vec::with_capacity(entries.len());
        for &(p, q, h) in &entries {
            let m = Exponent::txy(k, p + k - 1, q + k - 1);
            let piece = if (p + q) % 2 == 1 {
                TruncatedSeries::binomial_factor(m, FactorSign::Plus, h, n, 2)?
            } else {
                TruncatedSeries::binomial_factor(m, FactorSign::Minus, -h, n, 2)?
            };
            pieces.push(piece);
        }
        Ok(Factor(pieces))
    })?;
    let dim = 2 * n;
    let mut h = vec![vec![BigInt::zero(); dim as usize + 1]; dim as usize + 1];
    for (e, c) in series.t_slice(n) {
        let (x, y) = (e.aux_degs()[0] as usize, e.aux_degs()[1] as usize);
        if x > dim as usize || y > dim as usize {
            return Err(Error::Usage(format!("term x^{x} y^{y} lies outside the diamond")));
        }
        h[x][y] = c.clone();
    }
    Ok(HodgeDiamond { dim, h })
}

/// `χ(S^[a]) = p_{χ(S)}(a)`.
pub fn euler_char_tuple(s: &SurfaceInvariants, a: &Partition) -> BigInt {
    colored_count_tuple(s.chi, a)
}
