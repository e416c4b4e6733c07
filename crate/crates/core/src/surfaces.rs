//! Base-surface invariants: the shipped catalog, user-supplied surfaces and
//! consistency checks.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable naming a catalog file that replaces the built-in one.
pub const CATALOG_ENV: &str = "HILBERT_CATALOG";

pub const CATALOG_SCHEMA_VERSION: u32 = 1;

const BUILTIN_CATALOG: &str = include_str!("../data/surfaces.toml");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum StructuralClass {
    #[default]
    Generic,
    K3,
    AbelianForKummer,
}

impl fmt::Display for StructuralClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StructuralClass::Generic => "generic",
            StructuralClass::K3 => "k3",
            StructuralClass::AbelianForKummer => "abelian_for_kummer",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceInvariants {
    pub name: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, i64>,
    pub b0: u32,
    pub b1: u32,
    pub b2: u32,
    pub chi: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h10: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h20: Option<u32>,
    #[serde(default)]
    pub structural_class: StructuralClass,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl SurfaceInvariants {
    /// A generic surface with the given Betti numbers. For `b0 == 1` the Euler
    /// characteristic follows from Poincaré duality.
    pub fn synthetic(b0: u32, b1: u32, b2: u32) -> Self {
        SurfaceInvariants {
            name: format!("synthetic({b0},{b1},{b2})"),
            params: BTreeMap::new(),
            b0,
            b1,
            b2,
            chi: 2 * b0 as i64 - 2 * b1 as i64 + b2 as i64,
            h10: None,
            h20: None,
            structural_class: StructuralClass::Generic,
            provenance: Some("synthetic".into()),
        }
    }

    pub fn with_hodge(mut self, h10: u32, h20: u32) -> Self {
        self.h10 = Some(h10);
        self.h20 = Some(h20);
        self
    }

    /// Name plus family parameters, e.g. `ruled[g=2]`.
    pub fn label(&self) -> String {
        if self.params.is_empty() {
            self.name.clone()
        } else {
            let ps: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            format!("{}[{}]", self.name, ps.join(","))
        }
    }

    /// `(h^{1,0}, h^{2,0})` when both are known.
    pub fn hodge_data(&self) -> Option<(u32, u32)> {
        Some((self.h10?, self.h20?))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("surface records serialize")
    }

    pub fn from_toml(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Catalog(e.to_string()))
    }

    /// Reads a single surface record from a TOML file and validates it.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let s = Self::from_toml(&text)?;
        s.validated()
    }

    /// Returns `self` if [`validate`] finds nothing, otherwise the diagnostics.
    pub fn validated(self) -> Result<Self> {
        let diagnostics = validate(&self);
        if diagnostics.is_empty() {
            Ok(self)
        } else {
            Err(Error::Validation {
                name: self.label(),
                diagnostics,
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostic {
    B0NotPositive,
    B2NotPositive,
    ChiMismatch { expected: i64, found: i64 },
    B1NotTwiceH10 { b1: u32, h10: u32 },
    K3Mismatch,
    KummerMismatch,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::B0NotPositive => write!(f, "b0 must be positive"),
            Diagnostic::B2NotPositive => write!(f, "b2 must be positive"),
            Diagnostic::ChiMismatch { expected, found } => {
                write!(f, "chi mismatch: 2 - 2*b1 + b2 = {expected}, found {found}")
            }
            Diagnostic::B1NotTwiceH10 { b1, h10 } => write!(f, "b1 ≠ 2·h10 (b1 = {b1}, h10 = {h10})"),
            Diagnostic::K3Mismatch => {
                write!(f, "k3 class requires (b0,b1,b2,chi,h10,h20) = (1,0,22,24,0,1)")
            }
            Diagnostic::KummerMismatch => {
                write!(f, "abelian_for_kummer class requires (b0,b1,b2,chi) = (1,4,6,0)")
            }
        }
    }
}

/// Every violated consistency relation; empty when the record is sound.
pub fn validate(s: &SurfaceInvariants) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if s.b0 == 0 {
        out.push(Diagnostic::B0NotPositive);
    }
    if s.b2 == 0 {
        out.push(Diagnostic::B2NotPositive);
    }
    if s.b0 == 1 {
        let expected = 2 - 2 * s.b1 as i64 + s.b2 as i64;
        if expected != s.chi {
            out.push(Diagnostic::ChiMismatch {
                expected,
                found: s.chi,
            });
        }
    }
    if let Some(h10) = s.h10 {
        if s.b1 != 2 * h10 {
            out.push(Diagnostic::B1NotTwiceH10 { b1: s.b1, h10 });
        }
    }
    match s.structural_class {
        StructuralClass::K3 => {
            if (s.b0, s.b1, s.b2, s.chi, s.h10, s.h20) != (1, 0, 22, 24, Some(0), Some(1)) {
                out.push(Diagnostic::K3Mismatch);
            }
        }
        StructuralClass::AbelianForKummer => {
            if (s.b0, s.b1, s.b2, s.chi) != (1, 4, 6, 0) {
                out.push(Diagnostic::KummerMismatch);
            }
        }
        StructuralClass::Generic => {}
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Int(i64),
    Expr(String),
}

impl Value {
    fn eval(&self, params: &BTreeMap<String, i64>) -> Result<i64> {
        match self {
            Value::Int(v) => Ok(*v),
            Value::Expr(e) => expr::eval(e, params),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParam {
    pub name: String,
    pub min: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    #[serde(default)]
    pub title: String,
    #[serde(default)]
    pub family_params: Vec<FamilyParam>,
    pub b0: Value,
    pub b1: Value,
    pub b2: Value,
    pub chi: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h10: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h20: Option<Value>,
    #[serde(default)]
    pub structural_class: StructuralClass,
    #[serde(default)]
    pub provenance: String,
}

impl CatalogEntry {
    pub fn is_family(&self) -> bool {
        !self.family_params.is_empty()
    }

    /// Evaluates the row at `params` and validates the result.
    pub fn instantiate(&self, params: &BTreeMap<String, i64>) -> Result<SurfaceInvariants> {
        for key in params.keys() {
            if !self.family_params.iter().any(|p| &p.name == key) {
                return Err(Error::InvalidParameter(format!(
                    "`{}` takes no parameter `{key}`",
                    self.name
                )));
            }
        }
        for p in &self.family_params {
            let v = *params.get(&p.name).ok_or_else(|| {
                Error::InvalidParameter(format!("`{}` needs parameter `{}`", self.name, p.name))
            })?;
            if v < p.min || p.max.is_some_and(|m| v > m) {
                let range = match p.max {
                    Some(m) => format!("{}..={m}", p.min),
                    None => format!(">= {}", p.min),
                };
                return Err(Error::InvalidParameter(format!(
                    "`{}`: {} = {v} is outside {range}",
                    self.name, p.name
                )));
            }
        }
        let unsigned = |field: &str, v: &Value| -> Result<u32> {
            let x = v.eval(params)?;
            u32::try_from(x).map_err(|_| {
                Error::Catalog(format!("`{}`: {field} evaluates to {x}, expected a nonnegative integer", self.name))
            })
        };
        let s = SurfaceInvariants {
            name: self.name.clone(),
            params: params.clone(),
            b0: unsigned("b0", &self.b0)?,
            b1: unsigned("b1", &self.b1)?,
            b2: unsigned("b2", &self.b2)?,
            chi: self.chi.eval(params)?,
            h10: self.h10.as_ref().map(|v| unsigned("h10", v)).transpose()?,
            h20: self.h20.as_ref().map(|v| unsigned("h20", v)).transpose()?,
            structural_class: self.structural_class,
            provenance: Some(self.provenance.clone()).filter(|p| !p.is_empty()),
        };
        s.validated()
    }

    /// Parameter assignments covering `span` consecutive values from each
    /// parameter's minimum (clamped to its maximum).
    pub fn sample_params(&self, span: i64) -> Vec<BTreeMap<String, i64>> {
        let mut out = vec![BTreeMap::new()];
        for p in &self.family_params {
            let hi = p.max.map_or(p.min + span - 1, |m| m.min(p.min + span - 1));
            let mut next = Vec::new();
            for assignment in &out {
                for v in p.min..=hi {
                    let mut a = assignment.clone();
                    a.insert(p.name.clone(), v);
                    next.push(a);
                }
            }
            out = next;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub schema_version: u32,
    #[serde(rename = "surface")]
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn parse(text: &str) -> Result<Self> {
        let catalog: Catalog = toml::from_str(text).map_err(|e| Error::Catalog(e.to_string()))?;
        if catalog.schema_version != CATALOG_SCHEMA_VERSION {
            return Err(Error::Catalog(format!(
                "unsupported schema_version {} (expected {CATALOG_SCHEMA_VERSION})",
                catalog.schema_version
            )));
        }
        Ok(catalog)
    }

    pub fn builtin() -> &'static Catalog {
        static BUILTIN: OnceLock<Catalog> = OnceLock::new();
        BUILTIN.get_or_init(|| Catalog::parse(BUILTIN_CATALOG).expect("built-in catalog parses"))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Catalog(format!("{}: {e}", path.display())))?;
        Catalog::parse(&text)
    }

    /// The catalog named by `HILBERT_CATALOG`, else the built-in one.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(CATALOG_ENV) {
            Some(p) => Catalog::from_path(Path::new(&p)),
            None => Ok(Catalog::builtin().clone()),
        }
    }

    pub fn entry(&self, name: &str) -> Result<&CatalogEntry> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| Error::UnknownSurface(name.to_string()))
    }

    pub fn lookup(&self, name: &str, params: &BTreeMap<String, i64>) -> Result<SurfaceInvariants> {
        self.entry(name)?.instantiate(params)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.name.as_str())
    }

    /// Every fixed row, and each family row over a few parameter values.
    pub fn sample_instances(&self, span: i64) -> Result<Vec<SurfaceInvariants>> {
        let mut out = Vec::new();
        for e in &self.entries {
            for params in e.sample_params(span) {
                out.push(e.instantiate(&params)?);
            }
        }
        Ok(out)
    }
}

/// Looks `name` up in the default catalog (see [`Catalog::from_env`]).
pub fn catalog_lookup(name: &str, params: &BTreeMap<String, i64>) -> Result<SurfaceInvariants> {
    Catalog::from_env()?.lookup(name, params)
}

/// Integer expressions over family parameters: literals, identifiers,
/// `+ - *`, unary minus and parentheses.
mod expr {
    use std::collections::BTreeMap;

    use crate::error::{Error, Result};

    struct Parser<'a> {
        src: &'a str,
        bytes: &'a [u8],
        pos: usize,
        params: &'a BTreeMap<String, i64>,
    }

    pub(super) fn eval(src: &str, params: &BTreeMap<String, i64>) -> Result<i64> {
        let mut p = Parser {
            src,
            bytes: src.as_bytes(),
            pos: 0,
            params,
        };
        let v = p.sum()?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(p.error("trailing input"));
        }
        Ok(v)
    }

    impl Parser<'_> {
        fn error(&self, what: &str) -> Error {
            Error::Catalog(format!("expression `{}`: {what} at offset {}", self.src, self.pos))
        }

        fn skip_ws(&mut self) {
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
        }

        fn peek(&mut self) -> Option<u8> {
            self.skip_ws();
            self.bytes.get(self.pos).copied()
        }

        fn overflow(&self) -> Error {
            self.error("overflow")
        }

        fn sum(&mut self) -> Result<i64> {
            let mut acc = self.product()?;
            while let Some(op @ (b'+' | b'-')) = self.peek() {
                self.pos += 1;
                let rhs = self.product()?;
                acc = if op == b'+' { acc.checked_add(rhs) } else { acc.checked_sub(rhs) }
                    .ok_or_else(|| self.overflow())?;
            }
            Ok(acc)
        }

        fn product(&mut self) -> Result<i64> {
            let mut acc = self.atom()?;
            while let Some(b'*') = self.peek() {
                self.pos += 1;
                let rhs = self.atom()?;
                acc = acc.checked_mul(rhs).ok_or_else(|| self.overflow())?;
            }
            Ok(acc)
        }

        fn atom(&mut self) -> Result<i64> {
            match self.peek() {
                Some(b'-') => {
                    self.pos += 1;
                    self.atom()?.checked_neg().ok_or_else(|| self.overflow())
                }
                Some(b'(') => {
                    self.pos += 1;
                    let v = self.sum()?;
                    if self.peek() != Some(b')') {
                        return Err(self.error("expected `)`"));
                    }
                    self.pos += 1;
                    Ok(v)
                }
                Some(c) if c.is_ascii_digit() => {
                    let start = self.pos;
                    while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    self.src[start..self.pos].parse().map_err(|_| self.overflow())
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let start = self.pos;
                    while self.pos < self.bytes.len()
                        && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
                    {
                        self.pos += 1;
                    }
                    let name = &self.src[start..self.pos];
                    self.params
                        .get(name)
                        .copied()
                        .ok_or_else(|| Error::InvalidParameter(format!("unbound parameter `{name}`")))
                }
                _ => Err(self.error("expected a number, name or `(`")),
            }
        }
    }

}
