//! Command-line front end.
//!
//! Exit codes: 0 success, 1 unreadable input or bad arguments, 2 numerical failure,
//! 3 ambiguous spectrum, 4 a negative verdict (bundle fails verification, candidate
//! indices refuted, residuals not equivalent).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::circle_fn::{CircleFunction, GridSpec, ToleranceConfig};
use crate::error::{Error, ErrorClass, Result};
use crate::hankel::{self, DimEntry, EssentialNorm, HankelNorm};
use crate::invariance::{self, DimensionCheck, Equivalence};
use crate::linalg::CMatrix;
use crate::thematic::{catalog, BundleReport, FactorBundle, IndexReport};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;
pub const EXIT_AMBIGUOUS: i32 = 3;
pub const EXIT_REJECTED: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "thematic",
    version,
    about = "Hankel-operator analysis of matrix functions on the unit circle"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// Block truncation order for the reported ‖H_Φ‖ (default: exact order)
    #[arg(long, global = true)]
    pub trunc: Option<usize>,
    /// Grid size M (power of two)
    #[arg(long, global = true, default_value_t = GridSpec::DEFAULT_SAMPLES)]
    pub samples: usize,
    /// Relative tolerance for pointwise equalities
    #[arg(long, global = true, default_value = "1e-9")]
    pub tol: f64,
    /// Relative band for singular values equal to a level
    #[arg(long = "sv-tol", global = true, default_value = "1e-6")]
    pub sv_tol: f64,
    /// Absolute floor below which a Fourier coefficient counts as zero
    #[arg(long = "coeff-tol", global = true, default_value = "1e-10")]
    pub coeff_tol: f64,
    /// Largest κ in the maximizing-dimension table (default: first zero)
    #[arg(long = "kappa-max", global = true)]
    pub kappa_max: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hankel norm, ι, maximizing dimensions and recovered monotone indices
    Analyze { symbol: PathBuf },
    /// Verify a factor bundle against a symbol
    Verify { bundle: PathBuf, symbol: PathBuf },
    /// Compare the residuals of two partial factorizations of one symbol
    Residual {
        symbol: PathBuf,
        bundle_a: PathBuf,
        bundle_b: PathBuf,
    },
    /// Test candidate indices against the maximizing-dimension formula
    Refute {
        symbol: PathBuf,
        #[arg(required = true, num_args = 1..)]
        indices: Vec<usize>,
    },
    /// Write the built-in example symbols and bundles to a directory
    Catalog { dir: PathBuf },
}

/// Validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub trunc: Option<usize>,
    pub grid: GridSpec,
    pub tol: ToleranceConfig,
    pub kappa_max: Option<usize>,
    pub format: Format,
}

impl RunConfig {
    pub fn from_args(a: &ConfigArgs) -> Result<Self> {
        let tol = ToleranceConfig::new(a.tol, a.sv_tol, a.coeff_tol)?;
        let grid = GridSpec::with_samples(a.samples)?;
        if a.trunc == Some(0) {
            return Err(Error::InvalidConfig("--trunc must be at least 1".into()));
        }
        Ok(RunConfig {
            trunc: a.trunc,
            grid,
            tol,
            kappa_max: a.kappa_max,
            format: a.format,
        })
    }
}

type Complex = [f64; 2];

fn matrix_rows(m: &CMatrix) -> Vec<Vec<Complex>> {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct IotaReport {
    pub value: usize,
    pub zero_hankel: bool,
}

#[derive(Debug, Serialize)]
pub struct AnalyzeReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub symbol: String,
    pub rows: usize,
    pub cols: usize,
    pub hankel_norm: HankelNorm,
    pub essential_norm: EssentialNorm,
    pub iota: IotaReport,
    /// `t₀`: the exact Hankel norm used as level for the dimension table.
    pub level: f64,
    pub dim_table: Vec<DimEntry>,
    pub indices: Vec<usize>,
    pub nu: usize,
    pub message: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub bundle: String,
    pub symbol: String,
    /// Carries `ok`, `checks` and `recomposition_deviation`.
    #[serde(flatten)]
    pub report: BundleReport,
    pub indices: Option<IndexReport>,
    pub index_error: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct Witness {
    pub u1: Vec<Vec<Complex>>,
    pub u2: Vec<Vec<Complex>>,
    pub sweeps: usize,
    pub start: invariance::AlignmentStart,
}

#[derive(Debug, Serialize)]
pub struct ResidualReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub symbol: String,
    pub bundles: [String; 2],
    pub bundles_verified: [bool; 2],
    pub residual_shape: Option<[usize; 2]>,
    pub equivalent: bool,
    pub max_deviation: Option<f64>,
    pub singular_value_deviation: Option<f64>,
    pub witness: Option<Witness>,
    pub message: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct RefuteReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub symbol: String,
    pub level: f64,
    pub candidates: Vec<usize>,
    pub entries: Vec<DimensionCheck>,
    pub first_mismatch: Option<DimensionCheck>,
    pub consistent: bool,
}

#[derive(Debug, Serialize)]
pub struct CatalogReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub files: Vec<String>,
}

#[derive(Debug, Serialize)]
struct ErrorReport<'a> {
    schema_version: u32,
    error: ErrorBody<'a>,
}

#[derive(Debug, Serialize)]
struct ErrorBody<'a> {
    class: &'a str,
    exit_code: i32,
    message: String,
}

fn class_exit(class: ErrorClass) -> (i32, &'static str) {
    match class {
        ErrorClass::Parse => (EXIT_PARSE, "parse"),
        ErrorClass::Numeric => (EXIT_NUMERIC, "numeric"),
        ErrorClass::Ambiguity => (EXIT_AMBIGUOUS, "ambiguity"),
    }
}

pub fn analyze(symbol: &Path, cfg: &RunConfig) -> Result<AnalyzeReport> {
    let phi = CircleFunction::load(symbol)?;
    analyze_symbol(&phi, &symbol.display().to_string(), cfg)
}

/// [`analyze`] on an in-memory symbol; `name` labels the report.
pub fn analyze_symbol(phi: &CircleFunction, name: &str, cfg: &RunConfig) -> Result<AnalyzeReport> {
    let exact = hankel::hankel_norm(phi, None, &cfg.grid, &cfg.tol)?;
    let reported = match cfg.trunc {
        Some(n) => hankel::hankel_norm(phi, Some(n), &cfg.grid, &cfg.tol)?,
        None => exact,
    };
    let essential_norm = hankel::essential_norm_bound(phi);
    let iota = hankel::iota(phi, &cfg.grid, &cfg.tol)?;
    let zero = iota.zero_hankel;
    let (level, dim_table, indices, message) = if zero {
        (
            0.0,
            vec![DimEntry {
                kappa: 0,
                dim: 0,
                gap: None,
            }],
            Vec::new(),
            Some("Hankel operator vanishes".to_string()),
        )
    } else {
        let t0 = exact.value;
        let table = hankel::dim_table(phi, t0, cfg.kappa_max, &cfg.grid, &cfg.tol)?;
        let rec = invariance::recover_monotone_indices(phi, t0, &cfg.grid, &cfg.tol)?;
        (t0, table.entries, rec.indices, None)
    };
    Ok(AnalyzeReport {
        schema_version: SCHEMA_VERSION,
        command: "analyze",
        symbol: name.to_string(),
        rows: phi.rows(),
        cols: phi.cols(),
        hankel_norm: reported,
        essential_norm,
        iota: IotaReport {
            value: iota.value,
            zero_hankel: zero,
        },
        level,
        nu: indices.iter().sum(),
        dim_table,
        indices,
        message,
    })
}

pub fn verify(bundle_path: &Path, symbol: &Path, cfg: &RunConfig) -> Result<VerifyReport> {
    let bundle = FactorBundle::load(bundle_path)?;
    let phi = CircleFunction::load(symbol)?;
    let report = bundle.verify(&phi, &cfg.grid, &cfg.tol);
    let (indices, index_error) = match bundle.indices(&cfg.grid, &cfg.tol) {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(VerifyReport {
        schema_version: SCHEMA_VERSION,
        command: "verify",
        bundle: bundle_path.display().to_string(),
        symbol: symbol.display().to_string(),
        report,
        indices,
        index_error,
    })
}

pub fn residual(symbol: &Path, a: &Path, b: &Path, cfg: &RunConfig) -> Result<ResidualReport> {
    let phi = CircleFunction::load(symbol)?;
    let bundles = [FactorBundle::load(a)?, FactorBundle::load(b)?];
    let verified = [
        bundles[0].verify(&phi, &cfg.grid, &cfg.tol).ok,
        bundles[1].verify(&phi, &cfg.grid, &cfg.tol).ok,
    ];
    let mut report = ResidualReport {
        schema_version: SCHEMA_VERSION,
        command: "residual",
        symbol: symbol.display().to_string(),
        bundles: [a.display().to_string(), b.display().to_string()],
        bundles_verified: verified,
        residual_shape: None,
        equivalent: false,
        max_deviation: None,
        singular_value_deviation: None,
        witness: None,
        message: None,
    };
    if !verified.iter().all(|v| *v) {
        report.message =
            Some("a bundle does not verify against the symbol; residuals not compared".into());
        return Ok(report);
    }
    let psi_a = invariance::extract_bundle_residual(&phi, &bundles[0])?;
    let psi_b = invariance::extract_bundle_residual(&phi, &bundles[1])?;
    if (psi_a.rows(), psi_a.cols()) != (psi_b.rows(), psi_b.cols()) {
        report.message = Some(format!(
            "residual shapes differ: {}x{} vs {}x{}",
            psi_a.rows(),
            psi_a.cols(),
            psi_b.rows(),
            psi_b.cols()
        ));
        return Ok(report);
    }
    report.residual_shape = Some([psi_a.rows(), psi_a.cols()]);
    report.singular_value_deviation = Some(invariance::singular_value_deviation(
        &psi_a, &psi_b, &cfg.grid,
    )?);
    let outcome = invariance::residual_equivalence(&psi_a, &psi_b, &cfg.grid, &cfg.tol)?;
    report.max_deviation = Some(outcome.max_deviation());
    report.equivalent = outcome.is_equivalent();
    if let Equivalence::Equivalent(e) = outcome {
        report.witness = Some(Witness {
            u1: matrix_rows(&e.u1),
            u2: matrix_rows(&e.u2),
            sweeps: e.sweeps,
            start: e.start,
        });
    }
    Ok(report)
}

pub fn refute(symbol: &Path, candidates: &[usize], cfg: &RunConfig) -> Result<RefuteReport> {
    let phi = CircleFunction::load(symbol)?;
    let h = hankel::hankel_norm(&phi, None, &cfg.grid, &cfg.tol)?;
    let level = if h.value <= cfg.tol.coeff_tol {
        0.0
    } else {
        h.value
    };
    let r = invariance::verify_dimension_formula(&phi, level, candidates, &cfg.grid, &cfg.tol)?;
    Ok(RefuteReport {
        schema_version: SCHEMA_VERSION,
        command: "refute",
        symbol: symbol.display().to_string(),
        level,
        candidates: r.candidates,
        entries: r.entries,
        first_mismatch: r.first_mismatch,
        consistent: r.consistent,
    })
}

/// Writes the example symbols and bundles; returns the file names written.
pub fn write_catalog(dir: &Path) -> Result<Vec<String>> {
    let io = |path: &Path, source| Error::Io {
        path: path.display().to_string(),
        source,
    };
    std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let mut files: Vec<(String, String)> = vec![(
        "diag_z2_z6.json".into(),
        catalog::diag_z2_z6().to_json_string(),
    )];
    for (i, b) in catalog::diag_z2_z6_bundles().iter().enumerate() {
        files.push((
            format!("diag_z2_z6_bundle_{}.json", i + 1),
            b.to_json_string(),
        ));
    }
    let one = crate::linalg::ONE;
    files.push((
        "conj_z3.json".into(),
        CircleFunction::monomial(one, -3).to_json_string(),
    ));
    files.push((
        "analytic.json".into(),
        CircleFunction::scalar(&[(0, one), (2, crate::linalg::c(0.5, 0.0))]).to_json_string(),
    ));
    files.push((
        "diag_wrong.json".into(),
        CircleFunction::monomial(one, -2)
            .direct_sum(&CircleFunction::monomial(one, -7))
            .to_json_string(),
    ));
    let half = CircleFunction::monomial(crate::linalg::c(0.5, 0.0), -1);
    let partial = catalog::diag_monomial_partial(&[1.0, 1.0], &[3, 2], &half)?;
    files.push((
        "partial_symbol.json".into(),
        partial.compose()?.to_json_string(),
    ));
    files.push(("partial_bundle.json".into(), partial.to_json_string()));
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let c = crate::linalg::c;
    let p = CMatrix::from_row_slice(1, 1, &[c(h, h)]);
    let q = CMatrix::from_row_slice(1, 1, &[c(0.0, 1.0)]);
    files.push((
        "partial_bundle_twisted.json".into(),
        partial.twist_last(&p, &q)?.to_json_string(),
    ));
    let mut names = Vec::new();
    for (name, body) in files {
        let path = dir.join(&name);
        std::fs::write(&path, body + "\n").map_err(|e| io(&path, e))?;
        names.push(name);
    }
    Ok(names)
}

fn emit<W: Write>(
    out: &mut W,
    format: Format,
    json: &impl Serialize,
    text: String,
) -> std::io::Result<()> {
    match format {
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(json).expect("plain data serializes")
        ),
        Format::Text => write!(out, "{text}"),
    }
}

fn fmt_dims(entries: &[DimEntry]) -> String {
    let d: Vec<String> = entries.iter().map(|e| e.dim.to_string()).collect();
    format!("[{}]", d.join(", "))
}

fn fmt_list(v: &[usize]) -> String {
    let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", s.join(", "))
}

fn analyze_text(r: &AnalyzeReport) -> String {
    let mut s = String::new();
    let exact = if r.hankel_norm.exact {
        "exact"
    } else {
        "lower bound"
    };
    s += &format!("symbol        {} ({}x{})\n", r.symbol, r.rows, r.cols);
    s += &format!(
        "‖H_Φ‖         {:.12} (order {}, {exact})\n",
        r.hankel_norm.value, r.hankel_norm.order
    );
    s += &format!(
        "‖H_Φ‖ₑ        {} ({})\n",
        r.essential_norm.value, r.essential_norm.certificate
    );
    s += &format!(
        "ι(H_Φ)        {}{}\n",
        r.iota.value,
        if r.iota.zero_hankel {
            " (zero Hankel operator)"
        } else {
            ""
        }
    );
    if let Some(m) = &r.message {
        s += &format!("{m}\n");
        return s;
    }
    s += &format!("t₀            {:.12}\n", r.level);
    s += &format!(
        "D(κ)          {} for κ = 0..{}\n",
        fmt_dims(&r.dim_table),
        r.dim_table.len() - 1
    );
    s += &format!("indices       {}\n", fmt_list(&r.indices));
    s += &format!("ν_t₀          {}\n", r.nu);
    s
}

fn verify_text(r: &VerifyReport) -> String {
    let mut s = format!("bundle {} against {}\n", r.bundle, r.symbol);
    for c in &r.report.checks {
        s += &format!(
            "  [{}] {:<14} {}\n",
            if c.ok { "pass" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    match (&r.indices, &r.index_error) {
        (Some(ix), _) => {
            s += &format!("indices       {:?}\n", ix.indices);
            let nu: Vec<String> = ix
                .nu
                .iter()
                .map(|n| format!("ν_{} = {}", n.t, n.nu))
                .collect();
            s += &format!("ν             {}\n", nu.join(", "));
            s += &format!("monotone      {}\n", ix.monotone);
            if let (Some(i), Some(ok)) = (ix.iota, ix.iota_bound_ok) {
                s += &format!("ι(H_Φ)        {i} (k₀ ≤ ι: {ok})\n");
            }
        }
        (None, Some(e)) => s += &format!("indices       unavailable: {e}\n"),
        (None, None) => {}
    }
    s += if r.report.ok {
        "result        pass\n"
    } else {
        "result        FAIL\n"
    };
    s
}

fn residual_text(r: &ResidualReport) -> String {
    let mut s = format!(
        "residuals of {} and {} for {}\n",
        r.bundles[0], r.bundles[1], r.symbol
    );
    if let Some(m) = &r.message {
        s += &format!("{m}\n");
        return s;
    }
    if let Some(d) = r.singular_value_deviation {
        s += &format!("pointwise singular value deviation {d:.3e}\n");
    }
    if let Some(d) = r.max_deviation {
        s += &format!("max ‖Ψ♥ − U₂ΨU₁‖ {d:.3e}\n");
    }
    if let Some(w) = &r.witness {
        let show = |m: &Vec<Vec<Complex>>| {
            m.iter()
                .map(|row| {
                    row.iter()
                        .map(|[re, im]| format!("{re:+.6}{im:+.6}i"))
                        .collect::<Vec<_>>()
                        .join("  ")
                })
                .collect::<Vec<_>>()
                .join("\n    ")
        };
        s += &format!("U₁ =\n    {}\nU₂ =\n    {}\n", show(&w.u1), show(&w.u2));
        s += "equivalent modulo constant unitaries\n";
    } else {
        s += "not equivalent\n";
    }
    s
}

fn refute_text(r: &RefuteReport) -> String {
    let mut s = format!(
        "candidates {} at level {:.12}\n",
        fmt_list(&r.candidates),
        r.level
    );
    for e in &r.entries {
        s += &format!(
            "  κ = {:<3} measured {:<4} predicted {:<4}{}\n",
            e.kappa,
            e.measured,
            e.predicted,
            if e.measured == e.predicted {
                ""
            } else {
                "  ✗"
            }
        );
    }
    match &r.first_mismatch {
        Some(m) => {
            s += &format!(
                "violated at κ = {} (measured {}, predicted {})\n",
                m.kappa, m.measured, m.predicted
            )
        }
        None => s += "consistent\n",
    }
    s
}

fn execute<W: Write>(cli: &Cli, cfg: &RunConfig, out: &mut W) -> Result<i32> {
    let io_err = |e: std::io::Error| Error::Io {
        path: "<stdout>".into(),
        source: e,
    };
    match &cli.command {
        Command::Analyze { symbol } => {
            let r = analyze(symbol, cfg)?;
            emit(out, cfg.format, &r, analyze_text(&r)).map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Verify { bundle, symbol } => {
            let r = verify(bundle, symbol, cfg)?;
            emit(out, cfg.format, &r, verify_text(&r)).map_err(io_err)?;
            Ok(if r.report.ok { EXIT_OK } else { EXIT_REJECTED })
        }
        Command::Residual {
            symbol,
            bundle_a,
            bundle_b,
        } => {
            let r = residual(symbol, bundle_a, bundle_b, cfg)?;
            emit(out, cfg.format, &r, residual_text(&r)).map_err(io_err)?;
            Ok(if r.equivalent { EXIT_OK } else { EXIT_REJECTED })
        }
        Command::Refute { symbol, indices } => {
            let r = refute(symbol, indices, cfg)?;
            emit(out, cfg.format, &r, refute_text(&r)).map_err(io_err)?;
            Ok(if r.consistent { EXIT_OK } else { EXIT_REJECTED })
        }
        Command::Catalog { dir } => {
            let files = write_catalog(dir)?;
            let r = CatalogReport {
                schema_version: SCHEMA_VERSION,
                command: "catalog",
                files: files.clone(),
            };
            let text = files
                .iter()
                .map(|f| format!("wrote {}\n", dir.join(f).display()))
                .collect();
            emit(out, cfg.format, &r, text).map_err(io_err)?;
            Ok(EXIT_OK)
        }
    }
}

fn report_error<W: Write, E: Write>(
    format: Format,
    code: i32,
    class: &str,
    message: String,
    out: &mut W,
    err: &mut E,
) {
    if format == Format::Json {
        let body = ErrorReport {
            schema_version: SCHEMA_VERSION,
            error: ErrorBody {
                class,
                exit_code: code,
                message: message.clone(),
            },
        };
        let _ = writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&body).expect("plain data serializes")
        );
    }
    let _ = writeln!(err, "error: {message}");
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T, W, E>(args: I, out: &mut W, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_PARSE,
            };
            let _ = if code == EXIT_OK {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    let cfg = match RunConfig::from_args(&cli.config) {
        Ok(c) => c,
        Err(e) => {
            report_error(
                cli.config.format,
                EXIT_PARSE,
                "parse",
                e.to_string(),
                out,
                err,
            );
            return EXIT_PARSE;
        }
    };
    match execute(&cli, &cfg, out) {
        Ok(code) => code,
        Err(e) => {
            let (code, class) = class_exit(e.class());
            report_error(cfg.format, code, class, e.to_string(), out, err);
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("thematic").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn bad_flags_exit_with_parse_code() {
        assert_eq!(
            run_capture(&["--samples", "1000", "analyze", "x.json"]).0,
            EXIT_PARSE
        );
        assert_eq!(
            run_capture(&["--sv-tol", "1e-12", "analyze", "x.json"]).0,
            EXIT_PARSE
        );
        assert_eq!(run_capture(&["frobnicate"]).0, EXIT_PARSE);
        assert_eq!(run_capture(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn missing_file_is_a_parse_error() {
        let (code, out, err) =
            run_capture(&["--format", "json", "analyze", "/nonexistent/symbol.json"]);
        assert_eq!(code, EXIT_PARSE);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["error"]["class"], "parse");
        assert!(err.contains("error"));
    }

    #[test]
    fn catalog_then_analyze() {
        let dir = tempfile::tempdir().unwrap();
        let d = dir.path().to_str().unwrap();
        assert_eq!(run_capture(&["catalog", d]).0, EXIT_OK);
        let sym = dir.path().join("diag_z2_z6.json");
        let (code, out, _) = run_capture(&["analyze", sym.to_str().unwrap()]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("[8, 6, 4, 3, 2, 1, 0]"), "{out}");
        assert!(out.contains("(6, 2)"));
    }
}
