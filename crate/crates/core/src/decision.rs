//! Deciding whether `S^[a]` and `S^[b]` can be told apart.
//!
//! A computed invariant that differs is the certificate. The known
//! sufficient conditions are recorded alongside as `rules_fired` so a reader
//! can see which results cover the pair; on their own they only settle the
//! structural (K3 and generalised Kummer) cases.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::{euler_char_tuple, hodge_p0_tuple_vector, poincare_polynomial_tuple};
use crate::partitions::{majorizes, Majorization, Partition};
use crate::surfaces::{StructuralClass, SurfaceInvariants};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Isomorphic,
    NonIsomorphic,
    Unknown,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Isomorphic => "isomorphic",
            Outcome::NonIsomorphic => "non_isomorphic",
            Outcome::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InvariantKind {
    /// Topological Euler characteristic.
    Euler,
    /// Betti number `b_i`; `index` is `i`.
    Betti,
    /// Hodge number `h^{p,0}`; `index` is `p`.
    HodgeP0,
}

impl fmt::Display for InvariantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InvariantKind::Euler => "euler",
            InvariantKind::Betti => "betti",
            InvariantKind::HodgeP0 => "hodge_p0",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub invariant: InvariantKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<u32>,
    #[serde(with = "crate::bigser")]
    pub value_a: BigInt,
    #[serde(with = "crate::bigser")]
    pub value_b: BigInt,
}

impl Witness {
    pub fn swapped(&self) -> Witness {
        Witness {
            value_a: self.value_b.clone(),
            value_b: self.value_a.clone(),
            ..self.clone()
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "{}[{i}]: {} vs {}", self.invariant, self.value_a, self.value_b),
            None => write!(f, "{}: {} vs {}", self.invariant, self.value_a, self.value_b),
        }
    }
}

/// Sufficient conditions for `S^[a] ≇ S^[b]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    K3Structural,
    KummerStructural,
    DiffLengthNoUnitParts,
    DiffLengthUnitParts,
    SameLengthDisconnected,
    SameLengthFirstBetti,
    MajorizationEuler,
    MajorizationB1Zero,
}

impl Rule {
    pub const ALL: [Rule; 8] = [
        Rule::K3Structural,
        Rule::KummerStructural,
        Rule::DiffLengthNoUnitParts,
        Rule::DiffLengthUnitParts,
        Rule::SameLengthDisconnected,
        Rule::SameLengthFirstBetti,
        Rule::MajorizationEuler,
        Rule::MajorizationB1Zero,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Rule::K3Structural => "k3-structural",
            Rule::KummerStructural => "kummer-structural",
            Rule::DiffLengthNoUnitParts => "diff-length-no-unit-parts",
            Rule::DiffLengthUnitParts => "diff-length-unit-parts",
            Rule::SameLengthDisconnected => "same-length-disconnected",
            Rule::SameLengthFirstBetti => "same-length-first-betti",
            Rule::MajorizationEuler => "majorization-euler",
            Rule::MajorizationB1Zero => "majorization-b1-zero",
        }
    }

    pub fn citation(self) -> &'static str {
        match self {
            Rule::K3Structural => {
                "S a K3 surface: S^[a] ≅ S^[b] iff a = b (unique splitting into irreducible symplectic factors)"
            }
            Rule::KummerStructural => "A an abelian surface: Kum^[a](A) ≅ Kum^[b](A) iff a = b",
            Rule::DiffLengthNoUnitParts => "any surface, r ≠ s, n_1 > 1 and m_1 > 1: S^[a] ≇ S^[b]",
            Rule::DiffLengthUnitParts => {
                "any surface, r < s with k (resp. l) parts equal to 1: S^[a] ≇ S^[b] if k ≥ l, \
                 or if k < l and l − k ≠ (s − r)(b_2(S) + 1)"
            }
            Rule::SameLengthDisconnected => "b_0(S) > 1, r = s: S^[a] ≇ S^[b]",
            Rule::SameLengthFirstBetti => {
                "b_0(S) = 1, r = s, j least with n_j ≠ m_j: S^[a] ≇ S^[b] if b_1(S) ≥ 2(min{n_j, m_j} + 1)"
            }
            Rule::MajorizationEuler => "χ(S) ≥ 3, r = s, a ≺ b or b ≺ a: S^[a] ≇ S^[b]",
            Rule::MajorizationB1Zero => {
                "S irreducible with b_1(S) = 0, r = s, a ≺ b or b ≺ a: S^[a] ≇ S^[b]"
            }
        }
    }

    pub fn is_structural(self) -> bool {
        matches!(self, Rule::K3Structural | Rule::KummerStructural)
    }

    pub fn from_id(id: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.id() == id)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleFired {
    pub id: String,
    pub citation: String,
}

impl From<Rule> for RuleFired {
    fn from(r: Rule) -> Self {
        RuleFired {
            id: r.id().to_string(),
            citation: r.citation().to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub surface: String,
    pub a: Partition,
    pub b: Partition,
    pub outcome: Outcome,
    pub witness: Option<Witness>,
    pub rules_fired: Vec<RuleFired>,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn fired(&self, rule: Rule) -> bool {
        self.rules_fired.iter().any(|r| r.id == rule.id())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verdicts serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Usage(format!("not a verdict record: {e}")))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "surface:  {}", self.surface)?;
        writeln!(f, "a:        {}", self.a)?;
        writeln!(f, "b:        {}", self.b)?;
        writeln!(f, "outcome:  {}", self.outcome)?;
        if let Some(w) = &self.witness {
            writeln!(f, "witness:  {w}")?;
        }
        for r in &self.rules_fired {
            writeln!(f, "rule:     {} ({})", r.id, r.citation)?;
        }
        for n in &self.notes {
            writeln!(f, "note:     {n}")?;
        }
        Ok(())
    }
}

/// The rules whose hypotheses hold for `(s, a, b)`, in a fixed order.
pub fn applicable_rules(s: &SurfaceInvariants, a: &Partition, b: &Partition) -> Result<Vec<Rule>> {
    let mut out = Vec::new();
    if a == b {
        return Ok(out);
    }
    match s.structural_class {
        StructuralClass::K3 => out.push(Rule::K3Structural),
        // The remaining rules speak about S^[a], not about Kummer products.
        StructuralClass::AbelianForKummer => return Ok(vec![Rule::KummerStructural]),
        StructuralClass::Generic => {}
    }
    if a.len() != b.len() {
        if a.parts()[0] > 1 && b.parts()[0] > 1 {
            out.push(Rule::DiffLengthNoUnitParts);
        }
        let (short, long) = if a.len() < b.len() { (a, b) } else { (b, a) };
        let (k, l) = (short.ones() as i64, long.ones() as i64);
        let gap = (long.len() - short.len()) as i64 * (s.b2 as i64 + 1);
        if k >= l || l - k != gap {
            out.push(Rule::DiffLengthUnitParts);
        }
    } else {
        if s.b0 > 1 {
            out.push(Rule::SameLengthDisconnected);
        }
        if s.b0 == 1 {
            let (nj, mj) = a
                .parts()
                .iter()
                .zip(b.parts())
                .find(|(x, y)| x != y)
                .expect("distinct partitions of the same length differ somewhere");
            if s.b1 as u64 >= 2 * (*nj.min(mj) as u64 + 1) {
                out.push(Rule::SameLengthFirstBetti);
            }
        }
        let comparable = matches!(
            majorizes(b, a)?,
            Majorization::StrictlyMajorizes | Majorization::MajorizedBy
        );
        if comparable && s.chi >= 3 {
            out.push(Rule::MajorizationEuler);
        }
        if comparable && s.b0 == 1 && s.b1 == 0 {
            out.push(Rule::MajorizationB1Zero);
        }
    }
    Ok(out)
}

/// First invariant, in the order Euler characteristic, Betti numbers by
/// degree, `h^{p,0}` by `p`, that takes different values on `S^[a]` and
/// `S^[b]`. Hodge numbers are only compared when `S` carries Hodge data;
/// `notes` records what was skipped.
fn first_difference(
    s: &SurfaceInvariants,
    a: &Partition,
    b: &Partition,
    notes: &mut Vec<String>,
) -> Result<Option<Witness>> {
    let (ea, eb) = (euler_char_tuple(s, a), euler_char_tuple(s, b));
    if ea != eb {
        return Ok(Some(Witness {
            invariant: InvariantKind::Euler,
            index: None,
            value_a: ea,
            value_b: eb,
        }));
    }
    let (pa, pb) = (poincare_polynomial_tuple(s, a)?, poincare_polynomial_tuple(s, b)?);
    if let Some(i) = (0..pa.coefficients.len()).find(|&i| pa.coefficients[i] != pb.coefficients[i]) {
        return Ok(Some(Witness {
            invariant: InvariantKind::Betti,
            index: Some(i as u32),
            value_a: pa.coefficients[i].clone(),
            value_b: pb.coefficients[i].clone(),
        }));
    }
    if s.b0 != 1 || s.hodge_data().is_none() {
        notes.push("h^{p,0} comparison skipped: the surface has no h^{1,0}/h^{2,0} data or b0 ≠ 1".into());
        return Ok(None);
    }
    let (ha, hb) = (hodge_p0_tuple_vector(s, a)?, hodge_p0_tuple_vector(s, b)?);
    if let Some(p) = (0..ha.len()).find(|&p| ha[p] != hb[p]) {
        return Ok(Some(Witness {
            invariant: InvariantKind::HodgeP0,
            index: Some(p as u32),
            value_a: ha[p].clone(),
            value_b: hb[p].clone(),
        }));
    }
    Ok(None)
}

/// Decides `S^[a]` vs `S^[b]` for partitions of the same `n`.
///
/// A surface of class [`StructuralClass::AbelianForKummer`] switches to
/// Kummer mode: part `n_i` stands for `Kum^{n_i+1}(A)` and only the
/// structural rule is applied.
pub fn decide(s: &SurfaceInvariants, a: &Partition, b: &Partition) -> Result<Verdict> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch { a: a.n(), b: b.n() });
    }
    let mut verdict = Verdict {
        surface: s.label(),
        a: a.clone(),
        b: b.clone(),
        outcome: Outcome::Unknown,
        witness: None,
        rules_fired: Vec::new(),
        notes: Vec::new(),
    };
    if a == b {
        verdict.outcome = Outcome::Isomorphic;
        return Ok(verdict);
    }
    let rules = applicable_rules(s, a, b)?;
    verdict.rules_fired = rules.iter().map(|&r| r.into()).collect();

    if s.structural_class == StructuralClass::AbelianForKummer {
        verdict.outcome = Outcome::NonIsomorphic;
        verdict
            .notes
            .push("Kummer mode: part n stands for Kum^{n+1}(A); invariants of the factors are not computed".into());
        if a.ones() > 0 || b.ones() > 0 {
            verdict.notes.push(
                "a part equal to 1 stands for the Kummer K3 surface Kum^2(A); the structural rule is applied to it unchanged"
                    .into(),
            );
        }
        return Ok(verdict);
    }

    let witness = first_difference(s, a, b, &mut verdict.notes)?;
    if rules.contains(&Rule::DiffLengthUnitParts) && s.b0 == 1 && s.b1 == 0 {
        let (short, long) = if a.len() < b.len() { (a, b) } else { (b, a) };
        let b2_short = poincare_polynomial_tuple(s, short)?.betti(2);
        let b2_long = poincare_polynomial_tuple(s, long)?.betti(2);
        let predicted = (long.len() - short.len()) as i64 * (s.b2 as i64 + 1) + short.ones() as i64
            - long.ones() as i64;
        verdict.notes.push(format!(
            "b2 of the longer tuple minus b2 of the shorter: {}; (s − r)(b2 + 1) + (k − l) = {predicted}",
            b2_long - b2_short
        ));
    }
    match witness {
        Some(w) => {
            verdict.outcome = Outcome::NonIsomorphic;
            verdict.witness = Some(w);
        }
        None if rules.iter().any(|r| r.is_structural()) => {
            verdict.outcome = Outcome::NonIsomorphic;
            verdict
                .notes
                .push("all computed invariants coincide; the structural rule alone separates the pair".into());
        }
        None => {
            verdict.notes.push("all computed invariants coincide".into());
            if !rules.is_empty() {
                let ids: Vec<&str> = rules.iter().map(|r| r.id()).collect();
                verdict.notes.push(format!(
                    "rules {} apply but no computed invariant confirms them",
                    ids.join(", ")
                ));
            }
        }
    }
    Ok(verdict)
}

/// `Aut(S^[a])` as `∏ Aut(S^[n_i])^{l_i} ⋊ S_{l_i}`, parts grouped by value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutShape {
    pub factors: Vec<AutFactor>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutFactor {
    pub part: u32,
    pub multiplicity: u32,
}

impl AutShape {
    pub fn render(&self) -> String {
        self.factors
            .iter()
            .map(|f| match f.multiplicity {
                1 => format!("Aut(S^[{}])", f.part),
                l => format!("Aut(S^[{}])^{l} ⋊ S_{l}", f.part),
            })
            .collect::<Vec<_>>()
            .join(" × ")
    }

    /// Whether the splitting is established for surfaces of `class`.
    pub fn validity(class: StructuralClass) -> &'static str {
        match class {
            StructuralClass::K3 | StructuralClass::AbelianForKummer => "established for this surface class",
            StructuralClass::Generic => "formal shape only; the splitting is not established for this surface class",
        }
    }
}

impl fmt::Display for AutShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub fn aut_shape(a: &Partition) -> AutShape {
    let mut factors: Vec<AutFactor> = Vec::new();
    for &p in a.parts() {
        match factors.last_mut() {
            Some(f) if f.part == p => f.multiplicity += 1,
            _ => factors.push(AutFactor {
                part: p,
                multiplicity: 1,
            }),
        }
    }
    AutShape { factors }
}
