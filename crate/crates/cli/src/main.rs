//! `vbf`: construct, analyze and verify vectorial Boolean functions.

mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};

use vbf_core::ccz::SearchBudget;
use vbf_core::constructions::{Family, FamilySpec, GcdMode};
use vbf_core::report::{parse_lut, write_lut, AnalysisReport};
use vbf_core::{Error, FieldCtx, FuncTable};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

/// Overrides the default reduction polynomials: lines `m=<int> poly=<hex>`.
const POLY_TABLE_ENV: &str = "VBF_DEFAULT_POLY_TABLE";

#[derive(Parser)]
#[command(name = "vbf", version, about = "Vectorial Boolean functions over GF(2^m)")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a function and write it as a LUT file.
    Construct {
        #[command(flatten)]
        family: FamilyArgs,
        /// Output path (default: stdout).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Compute degree, spectra and AB/APN flags as JSON.
    Analyze {
        /// LUT file to analyze.
        input: Option<PathBuf>,
        #[command(flatten)]
        family: OptionalFamily,
        /// Include `timing_ms` in the report (makes output run-dependent).
        #[arg(long)]
        timing: bool,
        /// Output path (default: stdout).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check the identities behind a claim.
    Verify(verify::VerifyArgs),
}

#[derive(Args, Clone)]
pub struct FamilyArgs {
    /// gold, kasami, welch, niho, inverse, dobbertin, thm1, thm2, thm3 or thm4.
    #[arg(long)]
    family: String,
    #[command(flatten)]
    params: Params,
}

#[derive(Args, Clone)]
struct OptionalFamily {
    /// Build the function instead of reading a file.
    #[arg(long, conflicts_with = "input")]
    family: Option<String>,
    #[command(flatten)]
    params: Params,
}

#[derive(Args, Clone, Default)]
pub struct Params {
    /// Field degree.
    #[arg(long)]
    pub m: Option<u32>,
    /// Exponent parameter, e.g. i in x^(2^i+1).
    #[arg(long)]
    pub i: Option<u32>,
    /// Subfield degree for thm4.
    #[arg(long)]
    pub n: Option<u32>,
    /// Accept gcd(i, m) > 1 for thm1 and thm2.
    #[arg(long)]
    pub relaxed: bool,
    /// Reduction polynomial in hex, e.g. 0x25.
    #[arg(long, value_parser = parse_poly)]
    pub poly: Option<u64>,
}

fn parse_poly(s: &str) -> Result<u64, String> {
    let t = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")).unwrap_or(s);
    u64::from_str_radix(t, 16).map_err(|_| format!("'{s}' is not a hex polynomial"))
}

/// Failure of a command: the message and the exit code.
pub struct Failure(pub u8, pub String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(EXIT_USAGE, e.to_string())
    }
}

pub type CmdResult = Result<u8, Failure>;

fn poly_from_table(m: u32) -> Result<Option<u64>, Failure> {
    let Ok(path) = std::env::var(POLY_TABLE_ENV) else {
        return Ok(None);
    };
    let text = fs::read_to_string(&path).map_err(|e| Failure(EXIT_USAGE, format!("{POLY_TABLE_ENV}={path}: {e}")))?;
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let mut lm = None;
        let mut lp = None;
        for field in line.split_whitespace() {
            match field.split_once('=') {
                Some(("m", v)) => lm = v.parse::<u32>().ok(),
                Some(("poly", v)) => lp = parse_poly(v).ok(),
                _ => {}
            }
        }
        match (lm, lp) {
            (Some(lm), Some(lp)) if lm == m => return Ok(Some(lp)),
            (Some(_), Some(_)) => {}
            _ => return Err(Failure(EXIT_USAGE, format!("{POLY_TABLE_ENV}: bad line '{line}'"))),
        }
    }
    Ok(None)
}

impl Params {
    pub fn need_m(&self) -> Result<u32, Failure> {
        self.m.ok_or_else(|| Failure(EXIT_USAGE, "--m is required".into()))
    }

    pub fn need_i(&self) -> Result<u32, Failure> {
        self.i.ok_or_else(|| Failure(EXIT_USAGE, "--i is required".into()))
    }

    pub fn gcd_mode(&self) -> GcdMode {
        if self.relaxed {
            GcdMode::Relaxed
        } else {
            GcdMode::Strict
        }
    }

    pub fn field(&self) -> Result<Arc<FieldCtx>, Failure> {
        let m = self.need_m()?;
        let poly = match self.poly {
            Some(p) => Some(p),
            None => poly_from_table(m)?,
        };
        Ok(Arc::new(FieldCtx::new(m, poly)?))
    }

    fn spec(&self, family: &str) -> Result<FamilySpec, Failure> {
        let family: Family = family.parse()?;
        let mut spec = FamilySpec::new(family, self.need_m()?);
        spec.i = self.i;
        spec.n = self.n;
        spec.gcd_mode = self.gcd_mode();
        Ok(spec)
    }
}

fn build(family: &str, params: &Params) -> Result<FuncTable, Failure> {
    let spec = params.spec(family)?;
    spec.validate()?;
    Ok(spec.build(&params.field()?)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure(EXIT_USAGE, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn construct(family: &FamilyArgs, out: Option<&Path>) -> CmdResult {
    let f = build(&family.family, &family.params)?;
    emit(out, &write_lut(&f))?;
    Ok(EXIT_OK)
}

fn analyze(input: Option<&Path>, family: &OptionalFamily, timing: bool, out: Option<&Path>) -> CmdResult {
    let f = match (input, &family.family) {
        (Some(path), None) => {
            let text = fs::read_to_string(path).map_err(|e| Failure(EXIT_USAGE, format!("{}: {e}", path.display())))?;
            parse_lut(&text).map_err(|e| Failure(EXIT_USAGE, format!("{}: {e}", path.display())))?
        }
        (None, Some(name)) => build(name, &family.params)?,
        _ => return Err(Failure(EXIT_USAGE, "give either a LUT file or --family".into())),
    };
    let start = Instant::now();
    let mut report = AnalysisReport::analyze(&f)?;
    if timing {
        report.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    emit(out, &report.to_json())?;
    Ok(EXIT_OK)
}

/// `--budget`: `<n>s` is seconds, a bare number counts candidates.
pub fn parse_budget(s: &str) -> Result<SearchBudget, String> {
    let bad = || format!("'{s}' is not a budget (use e.g. 30s or 1000000)");
    match s.strip_suffix('s') {
        Some(secs) => secs
            .parse::<f64>()
            .ok()
            .filter(|v| *v >= 0.0)
            .map(|v| SearchBudget::time(Duration::from_secs_f64(v)))
            .ok_or_else(bad),
        None => s.parse::<u64>().map(SearchBudget::candidates).map_err(|_| bad()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let result = match &cli.command {
        Command::Construct { family, out } => construct(family, out.as_deref()),
        Command::Analyze { input, family, timing, out } => analyze(input.as_deref(), family, *timing, out.as_deref()),
        Command::Verify(args) => verify::run(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
