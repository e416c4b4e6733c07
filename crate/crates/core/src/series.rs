//! Truncated multivariate power series with big-integer coefficients.
//!
//! Every series has one counting variable `t` (truncated at a fixed order)
//! and zero, one or two auxiliary variables (`z`, or `x` and `y`) whose
//! degrees are left unbounded. All generating functions in this crate are
//! products of factors `(1 ± monomial)^e` in which the auxiliary degree is
//! tied to the `t` degree, so truncating in `t` alone keeps every series
//! finite.
//!
//! Invariants maintained by every constructor and operation:
//! - no stored coefficient is zero;
//! - no stored term has `t_deg > truncation`;
//! - every exponent carries exactly `aux_count` auxiliary degrees.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub const MAX_AUX: usize = 2;

/// Dense accumulation is used by [`TruncatedSeries::mul`] while the
/// bounding box of the product stays below this many cells.
const DENSE_LIMIT: usize = 1 << 22;

/// A monomial `t^t_deg · v1^aux[0] · v2^aux[1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponent {
    t_deg: u32,
    aux: [u32; MAX_AUX],
    aux_len: u8,
}

impl Exponent {
    pub fn new(t_deg: u32, aux_degs: &[u32]) -> Result<Self> {
        if aux_degs.len() > MAX_AUX {
            return Err(Error::Usage(format!(
                "at most {MAX_AUX} auxiliary variables are supported, got {}",
                aux_degs.len()
            )));
        }
        let mut aux = [0; MAX_AUX];
        aux[..aux_degs.len()].copy_from_slice(aux_degs);
        Ok(Exponent {
            t_deg,
            aux,
            aux_len: aux_degs.len() as u8,
        })
    }

    /// `t^t_deg`, no auxiliary variables.
    pub fn t(t_deg: u32) -> Self {
        Exponent {
            t_deg,
            aux: [0; MAX_AUX],
            aux_len: 0,
        }
    }

    /// `t^t_deg z^z`.
    pub fn tz(t_deg: u32, z: u32) -> Self {
        Exponent {
            t_deg,
            aux: [z, 0],
            aux_len: 1,
        }
    }

    /// `t^t_deg x^x y^y`.
    pub fn txy(t_deg: u32, x: u32, y: u32) -> Self {
        Exponent {
            t_deg,
            aux: [x, y],
            aux_len: 2,
        }
    }

    pub fn zero(aux_count: usize) -> Self {
        Exponent {
            t_deg: 0,
            aux: [0; MAX_AUX],
            aux_len: aux_count as u8,
        }
    }

    pub fn t_deg(&self) -> u32 {
        self.t_deg
    }

    pub fn aux_degs(&self) -> &[u32] {
        &self.aux[..self.aux_len as usize]
    }

    pub fn aux_count(&self) -> usize {
        self.aux_len as usize
    }

    pub fn is_zero(&self) -> bool {
        self.t_deg == 0 && self.aux.iter().all(|&d| d == 0)
    }

    fn add(&self, other: &Exponent) -> Exponent {
        Exponent {
            t_deg: self.t_deg + other.t_deg,
            aux: [self.aux[0] + other.aux[0], self.aux[1] + other.aux[1]],
            aux_len: self.aux_len,
        }
    }

    fn scale(&self, j: u32) -> Exponent {
        Exponent {
            t_deg: self.t_deg * j,
            aux: [self.aux[0] * j, self.aux[1] * j],
            aux_len: self.aux_len,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t^{}", self.t_deg)?;
        match self.aux_len {
            1 => write!(f, " z^{}", self.aux[0]),
            2 => write!(f, " x^{} y^{}", self.aux[0], self.aux[1]),
            _ => Ok(()),
        }
    }
}

/// Sign in front of the monomial of a binomial factor `(1 ± m)^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorSign {
    Plus,
    Minus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    truncation: u32,
    aux_count: usize,
    terms: BTreeMap<Exponent, BigInt>,
}

fn check_aux_count(aux_count: usize) -> Result<()> {
    if aux_count > MAX_AUX {
        return Err(Error::Usage(format!(
            "aux_count must be 0, 1 or 2, got {aux_count}"
        )));
    }
    Ok(())
}

impl TruncatedSeries {
    pub fn zero(truncation: u32, aux_count: usize) -> Result<Self> {
        check_aux_count(aux_count)?;
        Ok(TruncatedSeries {
            truncation,
            aux_count,
            terms: BTreeMap::new(),
        })
    }

    /// The multiplicative identity.
    pub fn constant_one(truncation: u32, aux_count: usize) -> Result<Self> {
        let mut s = Self::zero(truncation, aux_count)?;
        s.terms.insert(Exponent::zero(aux_count), BigInt::one());
        Ok(s)
    }

    /// Builds a series from arbitrary terms, summing duplicates and dropping
    /// zero coefficients and terms beyond the truncation.
    pub fn from_terms<I>(truncation: u32, aux_count: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, BigInt)>,
    {
        let mut s = Self::zero(truncation, aux_count)?;
        for (e, c) in terms {
            s.check_exponent_shape(&e)?;
            if e.t_deg > truncation {
                continue;
            }
            *s.terms.entry(e).or_insert_with(BigInt::zero) += c;
        }
        s.terms.retain(|_, c| !c.is_zero());
        Ok(s)
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn aux_count(&self) -> usize {
        self.aux_count
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending `(t_deg, aux_degs)` order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigInt)> {
        self.terms.iter()
    }

    /// Terms whose `t` degree equals `t_deg`.
    pub fn t_slice(&self, t_deg: u32) -> impl Iterator<Item = (&Exponent, &BigInt)> {
        let lo = Exponent {
            t_deg,
            aux: [0; MAX_AUX],
            aux_len: 0,
        };
        self.terms
            .range(lo..)
            .take_while(move |(e, _)| e.t_deg == t_deg)
    }

    fn check_exponent_shape(&self, e: &Exponent) -> Result<()> {
        if e.aux_count() != self.aux_count {
            return Err(Error::Usage(format!(
                "exponent has {} auxiliary degrees, series expects {}",
                e.aux_count(),
                self.aux_count
            )));
        }
        Ok(())
    }

    fn check_same_context(&self, other: &TruncatedSeries) -> Result<()> {
        if self.truncation != other.truncation || self.aux_count != other.aux_count {
            return Err(Error::Usage(format!(
                "series contexts differ: (truncation {}, aux {}) vs (truncation {}, aux {})",
                self.truncation, self.aux_count, other.truncation, other.aux_count
            )));
        }
        Ok(())
    }

    /// Coefficient of `e`; zero when absent. Asking for a `t` degree beyond
    /// the truncation is an error, since that coefficient is unknown rather
    /// than zero.
    pub fn coeff(&self, e: &Exponent) -> Result<BigInt> {
        self.check_exponent_shape(e)?;
        if e.t_deg > self.truncation {
            return Err(Error::OutOfRange {
                requested: e.t_deg,
                truncation: self.truncation,
            });
        }
        Ok(self.terms.get(e).cloned().unwrap_or_default())
    }

    /// Truncated product.
    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_same_context(other)?;
        if self.is_empty() || other.is_empty() {
            return Self::zero(self.truncation, self.aux_count);
        }
        let max_aux = |s: &TruncatedSeries, i: usize| {
            s.terms.keys().map(|e| e.aux[i]).max().unwrap_or(0) as usize
        };
        let dims = [
            max_aux(self, 0) + max_aux(other, 0) + 1,
            max_aux(self, 1) + max_aux(other, 1) + 1,
        ];
        let cells = (self.truncation as usize + 1)
            .saturating_mul(dims[0])
            .saturating_mul(dims[1]);

        // `other` sorted by t_deg lets the inner loop stop at the truncation.
        let rhs: Vec<(&Exponent, &BigInt)> = other.terms.iter().collect();
        let trunc = self.truncation;

        let terms = if cells <= DENSE_LIMIT {
            let index = |e: &Exponent| {
                (e.t_deg as usize * dims[0] + e.aux[0] as usize) * dims[1] + e.aux[1] as usize
            };
            let mut acc = vec![BigInt::zero(); cells];
            for (ea, ca) in &self.terms {
                for (eb, cb) in rhs.iter() {
                    if ea.t_deg + eb.t_deg > trunc {
                        break;
                    }
                    let e = ea.add(eb);
                    let i = index(&e);
                    acc[i] += ca * *cb;
                }
            }
            let mut terms = BTreeMap::new();
            for t in 0..=trunc as usize {
                for x in 0..dims[0] {
                    for y in 0..dims[1] {
                        let i = (t * dims[0] + x) * dims[1] + y;
                        if !acc[i].is_zero() {
                            let mut aux = [0; MAX_AUX];
                            aux[0] = x as u32;
                            aux[1] = y as u32;
                            let e = Exponent {
                                t_deg: t as u32,
                                aux,
                                aux_len: self.aux_count as u8,
                            };
                            terms.insert(e, std::mem::take(&mut acc[i]));
                        }
                    }
                }
            }
            terms
        } else {
            let mut terms: BTreeMap<Exponent, BigInt> = BTreeMap::new();
            for (ea, ca) in &self.terms {
                for (eb, cb) in rhs.iter() {
                    if ea.t_deg + eb.t_deg > trunc {
                        break;
                    }
                    *terms.entry(ea.add(eb)).or_insert_with(BigInt::zero) += ca * *cb;
                }
            }
            terms.retain(|_, c| !c.is_zero());
            terms
        };
        Ok(TruncatedSeries {
            truncation: trunc,
            aux_count: self.aux_count,
            terms,
        })
    }

    /// Expands `(1 + sign·m)^exponent` by the generalized binomial series.
    ///
    /// For `exponent = e ≥ 0` the coefficient of `m^j` is `C(e, j)·sign^j`;
    /// for `exponent = −f < 0` it is `C(f + j − 1, j)·(−sign)^j`.
    pub fn binomial_factor(
        m: Exponent,
        sign: FactorSign,
        exponent: i64,
        truncation: u32,
        aux_count: usize,
    ) -> Result<TruncatedSeries> {
        let mut s = Self::zero(truncation, aux_count)?;
        s.check_exponent_shape(&m)?;
        if m.t_deg == 0 {
            return Err(Error::NonTerminating);
        }
        let max_j = truncation / m.t_deg;
        let max_j = if exponent >= 0 {
            max_j.min(u32::try_from(exponent).unwrap_or(u32::MAX))
        } else {
            max_j
        };
        // With exponent −f the series is (1 − (−sign)·m)^{−f}: all terms carry
        // the sign of (−sign)^j.
        let alternating = match (exponent >= 0, sign) {
            (true, FactorSign::Plus) | (false, FactorSign::Minus) => false,
            (true, FactorSign::Minus) | (false, FactorSign::Plus) => true,
        };
        let mut c = BigInt::one();
        for j in 0..=max_j {
            if j > 0 {
                let j_big = BigInt::from(j);
                if exponent >= 0 {
                    c = c * BigInt::from(exponent - (j as i64 - 1)) / j_big;
                } else {
                    c = c * BigInt::from(-exponent + (j as i64 - 1)) / j_big;
                }
            }
            if c.is_zero() {
                break;
            }
            let coeff = if alternating && j % 2 == 1 { -c.clone() } else { c.clone() };
            s.terms.insert(m.scale(j), coeff);
        }
        Ok(s)
    }

    /// The same series viewed at a lower (or equal) truncation order.
    pub fn truncated(&self, truncation: u32) -> Result<TruncatedSeries> {
        if truncation > self.truncation {
            return Err(Error::OutOfRange {
                requested: truncation,
                truncation: self.truncation,
            });
        }
        Ok(TruncatedSeries {
            truncation,
            aux_count: self.aux_count,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.t_deg <= truncation)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        })
    }

    /// Formats one term per line, `t^a z^b : coeff`, in ascending order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (e, c) in &self.terms {
            out.push_str(&format!("{e} : {c}\n"));
        }
        out
    }

    pub(crate) fn constant_term(&self) -> BigInt {
        self.terms
            .get(&Exponent::zero(self.aux_count))
            .cloned()
            .unwrap_or_default()
    }

    pub fn is_canonical(&self) -> bool {
        self.terms
            .iter()
            .all(|(e, c)| !c.is_zero() && e.t_deg <= self.truncation && e.aux_count() == self.aux_count)
    }

    /// Largest absolute coefficient, handy for sizing reports.
    pub fn max_abs_coeff(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_default()
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

/// One factor of an indexed product: a short list of series multiplied in
/// turn. Keeping the pieces separate lets the accumulator absorb each sparse
/// binomial factor without first forming their dense product.
#[derive(Clone, Debug, Default)]
pub struct Factor(pub Vec<TruncatedSeries>);

impl From<TruncatedSeries> for Factor {
    fn from(s: TruncatedSeries) -> Self {
        Factor(vec![s])
    }
}

/// `∏_{m=1}^{truncation} factor_at(m)`, truncated.
///
/// Every piece must have constant term 1 and no other term of `t` degree
/// below `m`; factors with `m > truncation` then contribute only 1.
pub fn indexed_product<F>(truncation: u32, aux_count: usize, mut factor_at: F) -> Result<TruncatedSeries>
where
    F: FnMut(u32) -> Result<Factor>,
{
    let mut acc = TruncatedSeries::constant_one(truncation, aux_count)?;
    for m in 1..=truncation {
        for piece in factor_at(m)?.0 {
            acc.check_same_context(&piece)?;
            if !piece.constant_term().is_one() {
                return Err(Error::Normalization {
                    index: m,
                    reason: format!("constant term is {}, expected 1", piece.constant_term()),
                });
            }
            if let Some((e, _)) = piece
                .terms
                .iter()
                .find(|(e, _)| !e.is_zero() && e.t_deg < m)
            {
                return Err(Error::Normalization {
                    index: m,
                    reason: format!("term {e} has t-degree below {m}"),
                });
            }
            acc = acc.mul(&piece)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn series(trunc: u32, aux: usize, terms: &[(Exponent, i64)]) -> TruncatedSeries {
        TruncatedSeries::from_terms(trunc, aux, terms.iter().map(|(e, c)| (*e, big(*c)))).unwrap()
    }

    #[test]
    fn constant_one_shapes() {
        let one = TruncatedSeries::constant_one(5, 1).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one.coeff(&Exponent::tz(0, 0)).unwrap(), big(1));
        let one0 = TruncatedSeries::constant_one(0, 0).unwrap();
        assert_eq!(one0.dump(), "t^0 : 1\n");
        assert!(TruncatedSeries::constant_one(3, 3).is_err());
    }

    #[test]
    fn binomial_square() {
        let s = series(3, 1, &[(Exponent::tz(0, 0), 1), (Exponent::tz(1, 1), 1)]);
        let sq = s.mul(&s).unwrap();
        let expected = series(
            3,
            1,
            &[(Exponent::tz(0, 0), 1), (Exponent::tz(1, 1), 2), (Exponent::tz(2, 2), 1)],
        );
        assert_eq!(sq, expected);
    }

    #[test]
    fn telescoping_truncates_to_one() {
        let geo = series(
            3,
            0,
            &[(Exponent::t(0), 1), (Exponent::t(1), 1), (Exponent::t(2), 1), (Exponent::t(3), 1)],
        );
        let one_minus_t = series(3, 0, &[(Exponent::t(0), 1), (Exponent::t(1), -1)]);
        assert_eq!(geo.mul(&one_minus_t).unwrap(), TruncatedSeries::constant_one(3, 0).unwrap());
    }

    #[test]
    fn mismatched_contexts_rejected() {
        let a = TruncatedSeries::constant_one(3, 1).unwrap();
        let b = TruncatedSeries::constant_one(4, 1).unwrap();
        let c = TruncatedSeries::constant_one(3, 2).unwrap();
        assert!(matches!(a.mul(&b), Err(Error::Usage(_))));
        assert!(matches!(a.mul(&c), Err(Error::Usage(_))));
    }

    #[test]
    fn binomial_factor_examples() {
        let sq = TruncatedSeries::binomial_factor(Exponent::tz(1, 1), FactorSign::Plus, 2, 3, 1).unwrap();
        assert_eq!(sq.dump(), "t^0 z^0 : 1\nt^1 z^1 : 2\nt^2 z^2 : 1\n");

        let geo = TruncatedSeries::binomial_factor(Exponent::t(1), FactorSign::Minus, -1, 4, 0).unwrap();
        assert_eq!(geo.dump(), "t^0 : 1\nt^1 : 1\nt^2 : 1\nt^3 : 1\nt^4 : 1\n");

        let inv = TruncatedSeries::binomial_factor(Exponent::tz(1, 2), FactorSign::Minus, -22, 4, 1).unwrap();
        // C(23, 2)
        assert_eq!(inv.coeff(&Exponent::tz(2, 4)).unwrap(), big(253));

        let alt = TruncatedSeries::binomial_factor(Exponent::t(1), FactorSign::Minus, 3, 5, 0).unwrap();
        assert_eq!(alt.dump(), "t^0 : 1\nt^1 : -3\nt^2 : 3\nt^3 : -1\n");
    }

    #[test]
    fn binomial_factor_rejects_pure_aux_monomial() {
        let r = TruncatedSeries::binomial_factor(Exponent::tz(0, 1), FactorSign::Plus, 2, 3, 1);
        assert_eq!(r, Err(Error::NonTerminating));
    }

    #[test]
    fn coeff_out_of_range_differs_from_zero() {
        let s = series(1, 1, &[(Exponent::tz(0, 0), 1), (Exponent::tz(1, 1), 2)]);
        assert_eq!(s.coeff(&Exponent::tz(1, 1)).unwrap(), big(2));
        assert_eq!(s.coeff(&Exponent::tz(1, 2)).unwrap(), big(0));
        assert_eq!(
            s.coeff(&Exponent::tz(2, 0)),
            Err(Error::OutOfRange { requested: 2, truncation: 1 })
        );
        assert!(matches!(s.coeff(&Exponent::t(0)), Err(Error::Usage(_))));
    }

    #[test]
    fn from_terms_canonicalizes() {
        let s = series(
            2,
            1,
            &[(Exponent::tz(1, 1), 3), (Exponent::tz(1, 1), -3), (Exponent::tz(5, 0), 7), (Exponent::tz(0, 0), 1)],
        );
        assert_eq!(s.len(), 1);
        assert!(s.is_canonical());
    }

    #[test]
    fn indexed_product_partition_counts() {
        let p = indexed_product(5, 0, |m| {
            Ok(TruncatedSeries::binomial_factor(Exponent::t(m), FactorSign::Minus, -1, 5, 0)?.into())
        })
        .unwrap();
        let counts: Vec<BigInt> = (0..=5).map(|n| p.coeff(&Exponent::t(n)).unwrap()).collect();
        assert_eq!(counts, [1, 1, 2, 3, 5, 7].map(big));

        let p3 = indexed_product(3, 0, |m| {
            Ok(TruncatedSeries::binomial_factor(Exponent::t(m), FactorSign::Minus, -3, 3, 0)?.into())
        })
        .unwrap();
        assert_eq!(p3.coeff(&Exponent::t(3)).unwrap(), big(22));
    }

    #[test]
    fn indexed_product_rejects_unnormalized_factor() {
        let r = indexed_product(3, 0, |_| Ok(series(3, 0, &[(Exponent::t(0), 2)]).into()));
        assert!(matches!(r, Err(Error::Normalization { index: 1, .. })));
        let r = indexed_product(3, 0, |m| {
            Ok(TruncatedSeries::binomial_factor(Exponent::t(1), FactorSign::Plus, 1, 3, 0)
                .map(|s| if m == 2 { s } else { TruncatedSeries::constant_one(3, 0).unwrap() })?
                .into())
        });
        assert!(matches!(r, Err(Error::Normalization { index: 2, .. })));
    }

    #[test]
    fn indexed_product_of_ones() {
        let p = indexed_product(4, 2, |_| Ok(TruncatedSeries::constant_one(4, 2)?.into())).unwrap();
        assert_eq!(p, TruncatedSeries::constant_one(4, 2).unwrap());
    }

    #[test]
    fn t_slice_selects_one_degree() {
        let s = series(
            3,
            1,
            &[(Exponent::tz(0, 0), 1), (Exponent::tz(1, 0), 4), (Exponent::tz(1, 3), 5), (Exponent::tz(2, 1), 6)],
        );
        let slice: Vec<_> = s.t_slice(1).map(|(e, c)| (e.aux_degs()[0], c.clone())).collect();
        assert_eq!(slice, vec![(0, big(4)), (3, big(5))]);
        assert_eq!(s.t_slice(3).count(), 0);
    }
}
