//! Command-line front end. [`run_with`] does all the work and is what the
//! binary and the tests call.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::decision::{aut_shape, decide, AutFactor, AutShape};
use crate::error::{Error, Result};
use crate::invariants::{
    betti_closed, euler_char_tuple, hodge_p0_tuple_vector, hodge_polynomial_full, poincare_polynomial_tuple,
    poincare_series, ClosedForm, HodgeDiamond,
};
use crate::partitions::{colored_counts, Partition};
use crate::scanner::{
    scan_conjecture, verify_lemma_inequalities, verify_majorization, LemmaMode, ScanReport, DEFAULT_K_MAX,
    DEFAULT_N_MAX, DEFAULT_P_MAX,
};
use crate::series::TruncatedSeries;
use crate::surfaces::{Catalog, StructuralClass, SurfaceInvariants};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Human,
    Structured,
}

#[derive(Debug, Parser)]
#[command(name = "hilbert", version, about = "Invariants of products of Hilbert schemes of points on surfaces")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Human)]
    pub output_format: OutputFormat,

    /// Write results here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Catalog file; defaults to $HILBERT_CATALOG, then the built-in catalog.
    #[arg(long, global = true)]
    pub catalog: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List catalog surfaces, or show one instantiated row.
    Catalog {
        #[arg(long)]
        name: Option<String>,
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, i64)>,
    },
    /// Betti numbers, Euler characteristic and Hodge numbers of S^[a].
    Invariants {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        partition: String,
        /// Comma-separated subset of betti,euler,hodge_p0,hodge_full,closed.
        #[arg(long, value_delimiter = ',', default_value = "betti,euler")]
        show: Vec<Show>,
    },
    /// Decide S^[a] vs S^[b].
    Decide {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Dump a generating series truncated at t^truncation.
    Series {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, value_enum, default_value_t = SeriesKind::Poincare)]
        kind: SeriesKind,
        #[arg(long, default_value_t = 4)]
        truncation: u32,
    },
    /// Exhaustive scans over pairs of partitions.
    Scan(ScanArgs),
    /// Automorphism-group shape of S^[a].
    Aut {
        #[arg(long)]
        partition: String,
        #[command(flatten)]
        surface: OptionalSurfaceArgs,
    },
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    /// Catalog surface name.
    #[arg(long, required_unless_present = "surface_file")]
    pub surface: Option<String>,
    /// Family parameter, e.g. --param g=2.
    #[arg(long = "param", value_parser = parse_param)]
    pub params: Vec<(String, i64)>,
    /// A custom surface record in catalog syntax (TOML).
    #[arg(long, conflicts_with = "surface")]
    pub surface_file: Option<PathBuf>,
    /// Treat the surface as an abelian surface A and part n as Kum^{n+1}(A).
    #[arg(long)]
    pub kummer: bool,
}

#[derive(Debug, Args)]
pub struct OptionalSurfaceArgs {
    #[arg(long)]
    pub surface: Option<String>,
    #[arg(long = "param", value_parser = parse_param)]
    pub params: Vec<(String, i64)>,
    #[arg(long)]
    pub kummer: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Show {
    Betti,
    Euler,
    #[value(name = "hodge_p0")]
    HodgeP0,
    #[value(name = "hodge_full")]
    HodgeFull,
    Closed,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeriesKind {
    Poincare,
    Euler,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScanKindArg {
    LemmaDiffLength,
    LemmaSameLength,
    Majorization,
    Conjecture,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, value_enum)]
    pub kind: ScanKindArg,
    #[arg(long, default_value_t = DEFAULT_N_MAX)]
    pub n_max: u32,
    #[arg(long, default_value_t = DEFAULT_P_MAX)]
    pub p_max: u32,
    /// Comma-separated k values; defaults to 3..=6 for majorization and
    /// 4..=6 for conjecture scans.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub k: Vec<i64>,
    /// Also write the tabular export here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Leave wall_time_ms out so repeated runs are byte-identical.
    #[arg(long)]
    pub omit_timing: bool,
    /// Worker threads (default: all cores). Never changes the output.
    #[arg(long)]
    pub threads: Option<usize>,
}

fn parse_param(s: &str) -> std::result::Result<(String, i64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let v = v.trim().parse().map_err(|_| format!("`{v}` is not an integer"))?;
    Ok((k.trim().to_string(), v))
}

/// `invariants` output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsRecord {
    pub surface: String,
    pub partition: Partition,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_big_vec")]
    pub betti: Option<Vec<BigInt>>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_big")]
    pub euler: Option<BigInt>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_big_vec")]
    pub hodge_p0: Option<Vec<BigInt>>,
    /// Full diamonds of the factors `S^[n_i]`, keyed by `n_i`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hodge_full: Option<BTreeMap<u32, HodgeDiamond>>,
    /// Closed forms for `b_0, b_1, b_2` of each factor, keyed by `n_i`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed: Option<BTreeMap<u32, Vec<ClosedForm>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// `series` output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub surface: String,
    pub kind: String,
    pub truncation: u32,
    pub variables: Vec<String>,
    pub terms: Vec<SeriesTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTerm {
    pub exponent: Vec<u32>,
    #[serde(with = "crate::bigser")]
    pub coeff: BigInt,
}

/// `aut` output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutRecord {
    pub partition: Partition,
    pub factors: Vec<AutFactor>,
    pub rendered: String,
    pub validity: String,
}

mod opt_big {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.serialize_some(&x.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .transpose()
    }
}

mod opt_big_vec {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<BigInt>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.serialize_some(&x.iter().map(|b| b.to_string()).collect::<Vec<_>>()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<BigInt>>, D::Error> {
        Option::<Vec<String>>::deserialize(d)?
            .map(|v| v.iter().map(|s| s.parse().map_err(serde::de::Error::custom)).collect())
            .transpose()
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_) | Error::DimensionMismatch { .. } => EXIT_USAGE,
        _ => EXIT_DATA,
    }
}

/// Parses `argv` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let mut buf = Vec::new();
    let result = execute(&cli, &mut buf, err);
    let result = result.and_then(|()| match &cli.output {
        Some(path) => std::fs::write(path, &buf).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => out.write_all(&buf).map_err(Error::from),
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Runs against the process's standard streams.
pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn load_catalog(path: Option<&Path>) -> Result<Catalog> {
    match path {
        Some(p) => Catalog::from_path(p),
        None => Catalog::from_env(),
    }
}

fn param_map(params: &[(String, i64)]) -> BTreeMap<String, i64> {
    params.iter().cloned().collect()
}

fn resolve_surface(catalog: &Catalog, args: &SurfaceArgs) -> Result<SurfaceInvariants> {
    let s = match (&args.surface, &args.surface_file) {
        (Some(name), _) => catalog.lookup(name, &param_map(&args.params))?,
        (None, Some(path)) => SurfaceInvariants::from_path(path)?,
        (None, None) => return Err(Error::Usage("give --surface or --surface-file".into())),
    };
    if args.kummer {
        kummer(s)
    } else {
        Ok(s)
    }
}

fn kummer(mut s: SurfaceInvariants) -> Result<SurfaceInvariants> {
    s.structural_class = StructuralClass::AbelianForKummer;
    s.validated()
}

fn parse_partition(literal: &str, err: &mut dyn Write) -> Result<Partition> {
    let (p, reordered) = Partition::parse_literal(literal)?;
    if reordered {
        let _ = writeln!(err, "note: partition `{literal}` reordered to {p}");
    }
    Ok(p)
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("records serialize")
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn execute(cli: &Cli, out: &mut Vec<u8>, err: &mut dyn Write) -> Result<()> {
    let structured = cli.output_format == OutputFormat::Structured;
    match &cli.command {
        Command::Catalog { name, params } => {
            let catalog = load_catalog(cli.catalog.as_deref())?;
            match name {
                Some(name) => {
                    let s = catalog.lookup(name, &param_map(params))?;
                    if structured {
                        writeln!(out, "{}", to_json(&s))?;
                    } else {
                        write!(out, "{}", s.to_toml())?;
                    }
                }
                None if structured => writeln!(out, "{}", to_json(&catalog.entries))?,
                None => {
                    for e in &catalog.entries {
                        let params: Vec<&str> = e.family_params.iter().map(|p| p.name.as_str()).collect();
                        let params = if params.is_empty() {
                            String::new()
                        } else {
                            format!(" [{}]", params.join(", "))
                        };
                        writeln!(out, "{:<20} {}{params}", e.name, e.title)?;
                    }
                }
            }
        }
        Command::Invariants {
            surface,
            partition,
            show,
        } => {
            let catalog = load_catalog(cli.catalog.as_deref())?;
            let s = resolve_surface(&catalog, surface)?;
            if s.structural_class == StructuralClass::AbelianForKummer {
                return Err(Error::Usage(
                    "Kummer mode supports `decide` and `aut`; invariants of generalised Kummer factors are not computed"
                        .into(),
                ));
            }
            let a = parse_partition(partition, err)?;
            let record = invariants_record(&s, &a, show)?;
            if structured {
                writeln!(out, "{}", to_json(&record))?;
            } else {
                write_invariants_human(out, &record)?;
            }
        }
        Command::Decide { surface, a, b } => {
            let catalog = load_catalog(cli.catalog.as_deref())?;
            let s = resolve_surface(&catalog, surface)?;
            let (a, b) = (parse_partition(a, err)?, parse_partition(b, err)?);
            let v = decide(&s, &a, &b)?;
            if structured {
                writeln!(out, "{}", v.to_json())?;
            } else {
                write!(out, "{v}")?;
            }
        }
        Command::Series {
            surface,
            kind,
            truncation,
        } => {
            let catalog = load_catalog(cli.catalog.as_deref())?;
            let s = resolve_surface(&catalog, surface)?;
            let (series, kind_name, vars) = match kind {
                SeriesKind::Poincare => (poincare_series(&s, *truncation)?, "poincare", vec!["t", "z"]),
                SeriesKind::Euler => (euler_series(s.chi, *truncation)?, "euler", vec!["t"]),
            };
            if structured {
                let record = SeriesRecord {
                    surface: s.label(),
                    kind: kind_name.into(),
                    truncation: *truncation,
                    variables: vars.into_iter().map(String::from).collect(),
                    terms: series
                        .terms()
                        .map(|(e, c)| {
                            let mut exponent = vec![e.t_deg()];
                            exponent.extend_from_slice(e.aux_degs());
                            SeriesTerm {
                                exponent,
                                coeff: c.clone(),
                            }
                        })
                        .collect(),
                };
                writeln!(out, "{}", to_json(&record))?;
            } else {
                write!(out, "{}", series.dump())?;
            }
        }
        Command::Scan(args) => {
            let report = match args.threads {
                Some(n) => rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Error::Usage(format!("cannot start {n} threads: {e}")))?
                    .install(|| run_scan(args))?,
                None => run_scan(args)?,
            };
            let report = if args.omit_timing {
                report.without_timing()
            } else {
                report
            };
            if let Some(path) = &args.csv {
                let f = std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                report.write_csv(f)?;
            }
            if structured {
                write!(out, "{}", report.to_jsonl())?;
            } else {
                write_scan_human(out, &report)?;
            }
        }
        Command::Aut { partition, surface } => {
            let a = parse_partition(partition, err)?;
            let shape = aut_shape(&a);
            let validity = match &surface.surface {
                Some(name) => {
                    let catalog = load_catalog(cli.catalog.as_deref())?;
                    let mut s = catalog.lookup(name, &param_map(&surface.params))?;
                    if surface.kummer {
                        s = kummer(s)?;
                    }
                    AutShape::validity(s.structural_class).to_string()
                }
                None if surface.kummer => AutShape::validity(StructuralClass::AbelianForKummer).to_string(),
                None => "established for K3 surfaces and generalised Kummer products; formal shape otherwise".into(),
            };
            let record = AutRecord {
                partition: a,
                rendered: shape.render(),
                factors: shape.factors,
                validity,
            };
            if structured {
                writeln!(out, "{}", to_json(&record))?;
            } else {
                writeln!(out, "{}", record.rendered)?;
                writeln!(out, "validity: {}", record.validity)?;
            }
        }
    }
    Ok(())
}

fn euler_series(chi: i64, truncation: u32) -> Result<TruncatedSeries> {
    let values = colored_counts(chi, truncation);
    TruncatedSeries::from_terms(
        truncation,
        0,
        (0..=truncation).map(|n| (crate::series::Exponent::t(n), values[n as usize].clone())),
    )
}

fn run_scan(args: &ScanArgs) -> Result<ScanReport> {
    let ks = |lo: i64| {
        if args.k.is_empty() {
            (lo..=DEFAULT_K_MAX).collect()
        } else {
            args.k.clone()
        }
    };
    match args.kind {
        ScanKindArg::LemmaDiffLength => verify_lemma_inequalities(args.n_max, args.p_max, LemmaMode::DiffLength),
        ScanKindArg::LemmaSameLength => verify_lemma_inequalities(args.n_max, args.p_max, LemmaMode::SameLength),
        ScanKindArg::Majorization => verify_majorization(&ks(3), args.n_max),
        ScanKindArg::Conjecture => scan_conjecture(&ks(4), args.n_max),
    }
}

fn invariants_record(s: &SurfaceInvariants, a: &Partition, show: &[Show]) -> Result<InvariantsRecord> {
    let mut record = InvariantsRecord {
        surface: s.label(),
        partition: a.clone(),
        betti: None,
        euler: None,
        hodge_p0: None,
        hodge_full: None,
        closed: None,
        notes: Vec::new(),
    };
    let mut distinct: Vec<u32> = a.parts().to_vec();
    distinct.dedup();
    for item in show {
        match item {
            Show::Betti => record.betti = Some(poincare_polynomial_tuple(s, a)?.coefficients),
            Show::Euler => record.euler = Some(euler_char_tuple(s, a)),
            Show::HodgeP0 => match hodge_p0_tuple_vector(s, a) {
                Ok(v) => record.hodge_p0 = Some(v),
                Err(e @ (Error::MissingHodgeData(_) | Error::Disconnected(_))) => {
                    record.notes.push(format!("hodge_p0 not available: {e}"))
                }
                Err(e) => return Err(e),
            },
            Show::HodgeFull => {
                let d = match HodgeDiamond::of_surface(s) {
                    Ok(d) => d,
                    Err(e @ (Error::MissingHodgeData(_) | Error::Disconnected(_))) => {
                        record.notes.push(format!("hodge_full not available: {e}"));
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                let mut m = BTreeMap::new();
                for &n in &distinct {
                    m.insert(n, hodge_polynomial_full(&d, n)?);
                }
                record.hodge_full = Some(m);
            }
            Show::Closed => {
                record.closed = Some(
                    distinct
                        .iter()
                        .map(|&n| (n, (0..=2).map(|k| betti_closed(s, n, k)).collect()))
                        .collect(),
                );
            }
        }
    }
    Ok(record)
}

fn write_invariants_human(out: &mut Vec<u8>, r: &InvariantsRecord) -> Result<()> {
    writeln!(out, "surface:   {}", r.surface)?;
    writeln!(out, "partition: {}", r.partition)?;
    if let Some(b) = &r.betti {
        writeln!(out, "betti:     ({})", join(b))?;
    }
    if let Some(e) = &r.euler {
        writeln!(out, "euler:     {e}")?;
    }
    if let Some(h) = &r.hodge_p0 {
        writeln!(out, "hodge_p0:  ({})", join(h))?;
    }
    if let Some(m) = &r.hodge_full {
        for (n, d) in m {
            writeln!(out, "hodge S^[{n}]:")?;
            for row in &d.h {
                writeln!(out, "  {}", row.iter().map(|x| format!("{x:>6}")).collect::<String>())?;
            }
        }
    }
    if let Some(m) = &r.closed {
        for (n, forms) in m {
            let shown: Vec<String> = forms
                .iter()
                .map(|f| match f {
                    ClosedForm::Value(v) => v.to_string(),
                    ClosedForm::NotApplicable(_) => "n/a".into(),
                })
                .collect();
            writeln!(out, "closed S^[{n}]: b0,b1,b2 = {}", shown.join(","))?;
        }
    }
    for n in &r.notes {
        writeln!(out, "note:      {n}")?;
    }
    Ok(())
}

fn write_scan_human(out: &mut Vec<u8>, r: &ScanReport) -> Result<()> {
    writeln!(out, "scan:          {}", r.scan_kind)?;
    writeln!(out, "n_max:         {}", r.parameters.n_max)?;
    if let Some(p) = r.parameters.p_max {
        writeln!(out, "p_max:         {p}")?;
    }
    if let Some(k) = &r.parameters.k_set {
        writeln!(out, "k:             {}", join(k))?;
    }
    writeln!(out, "pairs checked: {}", r.pairs_checked)?;
    writeln!(out, "violations:    {}", r.violations.len())?;
    if let Some(ms) = r.wall_time_ms {
        writeln!(out, "wall time:     {ms} ms")?;
    }
    for v in r.violations.iter().take(20) {
        writeln!(
            out,
            "  n={} a={} b={} k_or_p={} {}: {} vs {}",
            v.n,
            v.a,
            v.b,
            v.k_or_p,
            v.form.as_str(),
            v.value_a,
            v.value_b
        )?;
    }
    if r.violations.len() > 20 {
        writeln!(out, "  ... {} more (use --output-format structured or --csv)", r.violations.len() - 20)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("hilbert").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn decide_k3() {
        let (code, out, _) = run(&["decide", "--surface", "k3", "--a", "1,3", "--b", "2,2", "--output-format", "structured"]);
        assert_eq!(code, 0);
        let v = crate::decision::Verdict::from_json(&out).unwrap();
        assert_eq!(v.outcome, crate::decision::Outcome::NonIsomorphic);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(&["frobnicate"]).0, 1);
        assert_eq!(run(&["decide", "--surface", "k3", "--a", "1,2", "--b", "2,2"]).0, 1);
        assert_eq!(run(&["decide", "--surface", "nowhere", "--a", "1,3", "--b", "2,2"]).0, 2);
        assert_eq!(run(&["decide", "--surface", "k3", "--kummer", "--a", "1,3", "--b", "2,2"]).0, 2);
        assert_eq!(run(&["--help"]).0, 0);
    }

    #[test]
    fn reorder_notice() {
        let (code, _, err) = run(&["aut", "--partition", "3,1,3"]);
        assert_eq!(code, 0);
        assert!(err.contains("reordered to (1,3,3)"));
    }
}
