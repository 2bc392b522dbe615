//! The `ptriple` command-line front end.
//!
//! Exit codes: 0 success, 1 an identity failed, 2 usage or configuration error.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use crate::distributions::{integer_lift, up_matrix, DiskSpace};
use crate::error::{Error, Result};
use crate::hecke_euler::{
    euler_factor_ep, euler_factor_ep1, fmt_rational, interpolation_factor, sym, PrimeEigenData, PrimeSlot,
};
use crate::lfunction::{fmt_weights, report};
use crate::padic::{LocalStructure, PadicContext, UnramifiedContext};
use crate::ring::Field;
use crate::serre_tate::{parse_lines, DEFAULT_CAP};
use crate::spectral::{char_series, charpoly, classicity_thresholds, newton_polygon, newton_polygon_exact, NewtonPolygon, Slope};
use crate::suites::{run_all, run_suite, Check};
use crate::symbolic::RatFunc;
use crate::weights::WeightTriple;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Three values, one per form, each rational or a free symbol.
#[derive(Clone, Debug, PartialEq)]
pub enum Values {
    Rational([BigRational; 3]),
    Symbolic,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct EigenSpec {
    pub alpha: Option<Values>,
    pub beta: Option<Values>,
}

/// A parsed configuration file.
#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub p: u64,
    pub precision: u32,
    /// `(label, residue degree)`; the first prime is the distinguished one.
    pub primes: Vec<(String, usize)>,
    /// Polynomial degree cap `D` per disk.
    pub degree_cap: usize,
    /// Disk level `m`.
    pub level: u32,
    /// Total-degree cap of Iwasawa series.
    pub series_cap: u32,
    pub triples: Vec<WeightTriple>,
    pub nu3: i64,
    pub eigen: BTreeMap<String, EigenSpec>,
    pub slopes_prime: Option<String>,
    pub grid: Vec<Vec<i64>>,
}

impl Config {
    /// Number of embeddings, `Σ f_𝔭`.
    pub fn degree(&self) -> usize {
        self.primes.iter().map(|(_, f)| f).sum()
    }

    pub fn structure(&self) -> Result<LocalStructure> {
        LocalStructure::with_degrees(PadicContext::new(self.p, self.precision)?, &self.primes)
    }

    /// Slot of each prime: embedding indices in declaration order.
    pub fn slots(&self) -> Vec<PrimeSlot> {
        let mut start = 0;
        self.primes
            .iter()
            .enumerate()
            .map(|(i, (_, f))| {
                let slot = PrimeSlot { distinguished: i == 0, embeddings: (start..start + f).collect() };
                start += f;
                slot
            })
            .collect()
    }
}

fn cfg_err<T>(line: usize, msg: impl std::fmt::Display) -> Result<T> {
    Err(Error::Config(format!("line {line}: {msg}")))
}

fn parse_int<T: FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.trim().parse().or_else(|_| cfg_err(line, format!("'{key}' expects an integer, got '{}'", v.trim())))
}

fn parse_vec(line: usize, key: &str, v: &str) -> Result<Vec<i64>> {
    v.split(',').map(|x| parse_int(line, key, x)).collect()
}

fn parse_values(line: usize, key: &str, v: &str) -> Result<Values> {
    if v.trim() == "symbolic" {
        return Ok(Values::Symbolic);
    }
    let parts: Vec<&str> = v.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return cfg_err(line, format!("'{key}' expects three values (x, y, z) or 'symbolic'"));
    }
    let mut out = Vec::with_capacity(3);
    for s in parts {
        match BigRational::from_str(s) {
            Ok(x) => out.push(x),
            Err(_) => return cfg_err(line, format!("'{key}': '{s}' is not a rational number")),
        }
    }
    Ok(Values::Rational(out.try_into().expect("three values")))
}

/// Parses the flat `key = value` format with `[section]` headers.
pub fn parse_config(text: &str) -> Result<Config> {
    let mut p = None;
    let mut precision = 20;
    let mut primes = vec![("p0".to_string(), 1)];
    let (mut degree_cap, mut level, mut series_cap) = (4usize, 1u32, 8u32);
    let mut triples = Vec::new();
    let mut nu3 = 0;
    let mut eigen: BTreeMap<String, EigenSpec> = BTreeMap::new();
    let mut slopes_prime = None;
    let mut grid = Vec::new();
    let mut section = String::new();
    let mut seen: BTreeMap<(String, String), usize> = BTreeMap::new();

    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let Some(name) = name.strip_suffix(']') else {
                return cfg_err(no, "unterminated section header");
            };
            section = name.split_whitespace().collect::<Vec<_>>().join(" ");
            let known = ["field", "caps", "weights", "slopes"].contains(&section.as_str())
                || section.strip_prefix("eigen ").is_some_and(|l| !l.contains(' '));
            if !known {
                return cfg_err(no, format!("unknown section [{section}]"));
            }
            if let Some(label) = section.strip_prefix("eigen ") {
                eigen.entry(label.to_string()).or_default();
            }
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return cfg_err(no, "expected 'key = value'");
        };
        let (key, value) = (key.trim(), value.trim());
        if key != "triple" {
            if let Some(prev) = seen.insert((section.clone(), key.to_string()), no) {
                return cfg_err(no, format!("'{key}' already set on line {prev}"));
            }
        }
        match (section.as_str(), key) {
            ("field", "p") => p = Some(parse_int(no, key, value)?),
            ("field", "precision") => precision = parse_int(no, key, value)?,
            ("field", "primes") => {
                primes = value
                    .split(',')
                    .map(|item| {
                        let (label, f) = item.split_once(':').map_or((item.trim(), "1"), |(l, f)| (l.trim(), f));
                        if label.is_empty() {
                            return cfg_err(no, "empty prime label");
                        }
                        Ok((label.to_string(), parse_int(no, key, f)?))
                    })
                    .collect::<Result<_>>()?;
            }
            ("caps", "degree") => degree_cap = parse_int(no, key, value)?,
            ("caps", "level") => level = parse_int(no, key, value)?,
            ("caps", "series") => series_cap = parse_int(no, key, value)?,
            ("weights", "triple") => {
                let legs: Vec<&str> = value.split(';').collect();
                if legs.len() != 3 {
                    return cfg_err(no, "'triple' expects 'k1 ; k2 ; k3'");
                }
                let t = WeightTriple::new(parse_vec(no, key, legs[0])?, parse_vec(no, key, legs[1])?, parse_vec(no, key, legs[2])?)
                    .or_else(|e| cfg_err(no, e))?;
                triples.push(t);
            }
            ("weights", "nu3") => nu3 = parse_int(no, key, value)?,
            ("slopes", "prime") => slopes_prime = Some(value.to_string()),
            ("slopes", "grid") => {
                grid = if value.is_empty() {
                    Vec::new()
                } else {
                    value.split(';').map(|w| parse_vec(no, key, w)).collect::<Result<_>>()?
                };
            }
            (s, "alpha" | "beta") if s.starts_with("eigen ") => {
                let spec = eigen.get_mut(&s["eigen ".len()..]).expect("section registered");
                let v = Some(parse_values(no, key, value)?);
                if key == "alpha" {
                    spec.alpha = v;
                } else {
                    spec.beta = v;
                }
            }
            ("", _) => return cfg_err(no, format!("'{key}' appears before any section")),
            (s, _) => return cfg_err(no, format!("unknown key '{key}' in [{s}]")),
        }
    }

    let Some(p) = p else {
        return Err(Error::Config("[field] is missing 'p'".into()));
    };
    let cfg = Config { p, precision, primes, degree_cap, level, series_cap, triples, nu3, eigen, slopes_prime, grid };
    validate(&cfg)?;
    Ok(cfg)
}

fn validate(cfg: &Config) -> Result<()> {
    let bad = |m: String| Err(Error::Config(m));
    if let Err(e) = PadicContext::new(cfg.p, cfg.precision) {
        return bad(format!("[field]: {e}"));
    }
    if cfg.primes.iter().any(|(_, f)| *f == 0) {
        return bad("[field]: residue degrees must be positive".into());
    }
    if cfg.primes[0].1 != 1 {
        return bad(format!("[field]: the distinguished prime {} must have residue degree 1", cfg.primes[0].0));
    }
    let mut labels: Vec<&String> = cfg.primes.iter().map(|(l, _)| l).collect();
    labels.sort();
    labels.dedup();
    if labels.len() != cfg.primes.len() {
        return bad("[field]: prime labels must be distinct".into());
    }
    if cfg.degree_cap == 0 || cfg.level == 0 || cfg.series_cap == 0 {
        return bad("[caps]: degree, level and series must be positive".into());
    }
    let d = cfg.degree();
    if let Some(t) = cfg.triples.iter().find(|t| t.degree() != d) {
        return bad(format!("[weights]: triple {} has {} embeddings, the field has {d}", fmt_weights(t), t.degree()));
    }
    if let Some(w) = cfg.grid.iter().find(|w| w.len() != d) {
        return bad(format!("[slopes]: grid weight {w:?} has {} entries, the field has {d}", w.len()));
    }
    for label in cfg.eigen.keys().chain(cfg.slopes_prime.iter()) {
        if !cfg.primes.iter().any(|(l, _)| l == label) {
            return bad(format!("unknown prime '{label}'"));
        }
    }
    Ok(())
}

/// Pads every column to its widest cell.
pub fn render_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, (c, w)) in cells.iter().zip(&widths).enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            let _ = write!(s, "{c:<w$}");
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(headers.to_vec());
    out.push_str(&line(widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().iter().map(String::as_str).collect()));
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

fn slug(s: &str) -> String {
    let mut out = String::new();
    for ch in s.chars() {
        if ch.is_ascii_alphanumeric() {
            out.push(ch.to_ascii_lowercase());
        } else if !out.ends_with('-') {
            out.push('-');
        }
    }
    out.trim_matches('-').to_string()
}

/// Runs one suite or `all`.
pub fn cmd_verify(suite: &str, machine: bool, out: &mut dyn Write) -> Result<i32> {
    let checks: Vec<Check> = if suite == "all" { run_all() } else { run_suite(suite)? };
    let failed = checks.iter().filter(|c| !c.passed).count();
    let mut text = String::new();
    if machine {
        for c in &checks {
            let _ = writeln!(text, "{}.{}: {}", c.suite, slug(c.name), if c.passed { "pass" } else { "fail" });
        }
        let _ = writeln!(text, "checks: {}", checks.len());
        let _ = writeln!(text, "failed: {failed}");
    } else {
        let rows: Vec<Vec<String>> = checks
            .iter()
            .map(|c| {
                let mut name = c.name.to_string();
                if let Some(d) = &c.detail {
                    let _ = write!(name, " ({d})");
                }
                vec![if c.passed { "PASS" } else { "FAIL" }.to_string(), c.suite.to_string(), name]
            })
            .collect();
        text.push_str(&render_table(&["result", "suite", "identity"], &rows));
        let _ = writeln!(text, "{} checks, {failed} failed", checks.len());
    }
    out.write_all(text.as_bytes()).map_err(io_err)?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILURE })
}

fn io_err(e: std::io::Error) -> Error {
    Error::Config(format!("i/o error: {e}"))
}

type RationalData = Vec<(PrimeSlot, PrimeEigenData<BigRational>)>;

fn rational_eigen(cfg: &Config) -> Result<Option<RationalData>> {
    let mut data = Vec::new();
    for ((label, _), slot) in cfg.primes.iter().zip(cfg.slots()) {
        let spec = cfg.eigen.get(label).ok_or_else(|| Error::Config(format!("missing section [eigen {label}]")))?;
        let alpha = spec.alpha.as_ref().ok_or_else(|| Error::Config(format!("[eigen {label}] is missing 'alpha'")))?;
        let beta = spec.beta.as_ref().ok_or_else(|| Error::Config(format!("[eigen {label}] is missing 'beta'")))?;
        match (alpha, beta) {
            (Values::Rational(a), Values::Rational(b)) => {
                data.push((slot, PrimeEigenData { label: label.clone(), alpha: a.clone(), beta: b.clone() }))
            }
            _ => return Ok(None),
        }
    }
    Ok(Some(data))
}

fn symbolic_values(v: &Values, alpha: bool) -> [RatFunc; 3] {
    match v {
        Values::Rational(x) => x.clone().map(|c| RatFunc::constant(sym::NVARS, c)),
        Values::Symbolic => [0, 1, 2].map(|i| if alpha { sym::alpha(i) } else { sym::beta(i) }),
    }
}

/// One row per (weight triple, prime) with `𝓔_𝔭`, `𝓔_{𝔭,1}` and their ratio.
pub fn cmd_euler(cfg: &Config, machine: bool, out: &mut dyn Write) -> Result<i32> {
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut footer = Vec::new();
    match rational_eigen(cfg)? {
        Some(data) => {
            let p = BigRational::from_integer(cfg.p.into());
            for t in &cfg.triples {
                let rep = report(t, cfg.nu3, &data, &p)?;
                if machine {
                    text.push_str(&rep.machine(&format!("{}.", fmt_weights(t))));
                }
                rows.extend(rep.cells().into_iter().map(Vec::from));
                let product = rep.combined.as_ref().map_or("undefined (exceptional zero)".into(), fmt_rational);
                let computable = rep.computable_part.as_ref().map_or("undefined".into(), fmt_rational);
                footer.push(format!(
                    "{}: product {product}, archimedean {}, product x archimedean {computable}",
                    fmt_weights(t),
                    fmt_rational(&rep.archimedean)
                ));
            }
        }
        None => {
            let p = RatFunc::constant(sym::NVARS, BigRational::from_integer(cfg.p.into()));
            let mut data = Vec::new();
            for ((label, _), slot) in cfg.primes.iter().zip(cfg.slots()) {
                let spec = &cfg.eigen[label];
                let alpha = symbolic_values(spec.alpha.as_ref().expect("checked"), true);
                let beta = symbolic_values(spec.beta.as_ref().expect("checked"), false);
                data.push((slot, PrimeEigenData { label: label.clone(), alpha, beta }));
            }
            let show = |f: &RatFunc| f.fmt_with(&sym::NAMES);
            for t in &cfg.triples {
                for (slot, e) in &data {
                    let ep = euler_factor_ep(t, e, slot, &p)?;
                    let ep1 = euler_factor_ep1(t, e, slot, &p)?;
                    let ratio = ep.div(&ep1).map_or("undefined".into(), |r| show(&r));
                    if machine {
                        let w = fmt_weights(t);
                        let _ = writeln!(text, "{w}.{}.ep: {}", e.label, show(&ep));
                        let _ = writeln!(text, "{w}.{}.ep1: {}", e.label, show(&ep1));
                        let _ = writeln!(text, "{w}.{}.ratio: {ratio}", e.label);
                    }
                    rows.push(vec![fmt_weights(t), e.label.clone(), show(&ep), show(&ep1), ratio]);
                }
                let product = interpolation_factor(t, &data, &p).map_or("undefined".into(), |r| show(&r));
                let arch = crate::hecke_euler::archimedean_factor(t, cfg.nu3)?;
                if machine {
                    let _ = writeln!(text, "{}.product: {product}", fmt_weights(t));
                    let _ = writeln!(text, "{}.archimedean: {}", fmt_weights(t), fmt_rational(&arch));
                }
                footer.push(format!("{}: product {product}, archimedean {}", fmt_weights(t), fmt_rational(&arch)));
            }
        }
    }
    if !machine {
        text.push_str(&render_table(&["weights", "prime", "E_p", "E_p,1", "ratio"], &rows));
        for f in footer {
            let _ = writeln!(text, "{f}");
        }
    }
    out.write_all(text.as_bytes()).map_err(io_err)?;
    Ok(EXIT_OK)
}

/// `s` for an integer slope, `a/b` otherwise.
pub fn fmt_slope(s: &Slope) -> String {
    if s.is_integer() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// `slope^multiplicity` items, with `inf` for exact zero eigenvalues and
/// `>=b` for slopes only bounded below.
pub fn fmt_polygon(np: &NewtonPolygon) -> String {
    let mut items: Vec<String> = np.segments.iter().map(|(s, m)| format!("{}^{m}", fmt_slope(s))).collect();
    match &np.tail {
        Some((None, c)) => items.push(format!("inf^{c}")),
        Some((Some(b), c)) => items.push(format!(">={}^{c}", fmt_slope(b))),
        None => {}
    }
    if items.is_empty() {
        "-".into()
    } else {
        items.join(" ")
    }
}

/// Newton polygon of `U_𝔭` on the truncated distribution module at weight `k`
/// (the embeddings of the chosen prime). Exact when the matrix has entries in
/// `Z_p`; otherwise read off the `p`-adic characteristic series.
pub fn slope_polygon(cfg: &Config, prime: usize, k: &[i64]) -> Result<NewtonPolygon> {
    let f = cfg.primes[prime].1;
    let ring = UnramifiedContext::standard(PadicContext::new(cfg.p, cfg.precision)?, f)?;
    let space = DiskSpace::new(ring, cfg.level, cfg.degree_cap)?;
    let u = up_matrix(&space, k)?;
    match integer_lift(&u) {
        Ok(exact) => newton_polygon_exact(&charpoly(&exact)?, cfg.p),
        Err(Error::Unsupported(_)) => newton_polygon(&char_series(&u)?),
        Err(e) => Err(e),
    }
}

/// Per weight in the grid: slopes of `U_𝔭` and the classicity threshold.
pub fn cmd_slopes(cfg: &Config, machine: bool, out: &mut dyn Write) -> Result<i32> {
    let label = cfg.slopes_prime.clone().unwrap_or_else(|| cfg.primes[0].0.clone());
    let idx = cfg.primes.iter().position(|(l, _)| *l == label).expect("validated label");
    let slot = &cfg.slots()[idx];
    let structure = cfg.structure()?;
    let mut rows = Vec::new();
    let mut text = String::new();
    for w in &cfg.grid {
        let k: Vec<i64> = slot.embeddings.iter().map(|&i| w[i]).collect();
        let key = w.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        let threshold = classicity_thresholds(&structure, w)?[idx].1;
        let (slopes, below) = match slope_polygon(cfg, idx, &k) {
            Ok(np) => (fmt_polygon(&np), np.count_below(threshold).to_string()),
            Err(Error::Precision(_)) => ("ambiguous at this precision".into(), "?".into()),
            Err(e) => return Err(e),
        };
        if machine {
            let _ = writeln!(text, "{label}.k={key}.slopes: {slopes}");
            let _ = writeln!(text, "{label}.k={key}.threshold: {}", fmt_slope(&threshold));
            let _ = writeln!(text, "{label}.k={key}.below: {below}");
        }
        rows.push(vec![key, slopes, fmt_slope(&threshold), below]);
    }
    if !machine {
        text.push_str(&render_table(&["k", &format!("slopes of U_{label}"), "threshold", "below"], &rows));
    }
    out.write_all(text.as_bytes()).map_err(io_err)?;
    Ok(EXIT_OK)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum QOp {
    #[value(name = "U")]
    U,
    #[value(name = "V")]
    V,
    #[value(name = "Theta")]
    Theta,
    #[value(name = "deplete")]
    Deplete,
}

/// Applies an operator to `alpha:coeff` lines.
pub fn cmd_qexp(op: QOp, p: u64, cap: u64, input: &str, out: &mut dyn Write) -> Result<i32> {
    PadicContext::new(p, 1).map_err(|e| Error::Config(e.to_string()))?;
    let f = parse_lines(input, p, cap, |s| {
        BigRational::from_str(s).map_err(|_| Error::Config(format!("'{s}' is not a rational number")))
    })?;
    let g = match op {
        QOp::U => f.u_p0(),
        QOp::V => f.v_p0()?,
        QOp::Theta => f.theta(),
        QOp::Deplete => f.depletion()?,
    };
    write!(out, "{g}").map_err(io_err)?;
    Ok(EXIT_OK)
}

#[derive(Parser, Debug)]
#[command(name = "ptriple", version, about = "Truncated p-adic triple-product toolkit")]
struct Cli {
    /// Emit key:value lines instead of tables.
    #[arg(long, global = true)]
    machine: bool,
    /// Override the working precision N of the config.
    #[arg(long, global = true)]
    precision: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run an invariant suite, or `all`.
    Verify { suite: String },
    /// Euler and interpolation factors from a config.
    Euler {
        #[arg(long)]
        config: PathBuf,
    },
    /// Newton slopes of U over a weight grid.
    Slopes {
        #[arg(long)]
        config: PathBuf,
    },
    /// Apply U, V, Theta or depletion to `alpha:coeff` lines on stdin.
    Qexp {
        #[arg(long, value_enum)]
        op: QOp,
        #[arg(long, default_value_t = 3)]
        prime: u64,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
}

fn load(path: &PathBuf, precision: Option<u32>) -> Result<Config> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let mut cfg = parse_config(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    if let Some(n) = precision {
        cfg.precision = n;
        validate(&cfg)?;
    }
    Ok(cfg)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Identity(_) => EXIT_FAILURE,
        _ => EXIT_USAGE,
    }
}

/// Entry point shared by the binary and the tests.
pub fn run<I, S>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = match &cli.command {
        Command::Verify { suite } => cmd_verify(suite, cli.machine, stdout),
        Command::Euler { config } => load(config, cli.precision).and_then(|c| cmd_euler(&c, cli.machine, stdout)),
        Command::Slopes { config } => load(config, cli.precision).and_then(|c| cmd_slopes(&c, cli.machine, stdout)),
        Command::Qexp { op, prime, cap } => {
            let mut input = String::new();
            match stdin.read_to_string(&mut input) {
                Ok(_) => cmd_qexp(*op, *prime, *cap, &input, stdout),
                Err(e) => Err(io_err(e)),
            }
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "[field]\np = 5\n";

    #[test]
    fn defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!((c.p, c.precision, c.degree()), (5, 20, 1));
        assert!(c.triples.is_empty() && c.grid.is_empty());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_config("[field]\np = 5\nbogus\n").unwrap_err();
        assert_eq!(e, Error::Config("line 3: expected 'key = value'".into()));
        let e = parse_config("[field]\np = five\n").unwrap_err();
        assert!(e.to_string().starts_with("line 2:"));
        let e = parse_config("[field]\np = 5\np = 7\n").unwrap_err();
        assert!(e.to_string().contains("already set on line 2"));
    }

    #[test]
    fn hypotheses_are_enforced() {
        assert!(parse_config("[field]\np = 2\n").is_err());
        assert!(parse_config("[field]\np = 9\n").is_err());
        assert!(parse_config("[field]\np = 5\nprimes = p0:2\n").is_err());
        assert!(parse_config("[field]\np = 5\n[caps]\nlevel = 0\n").is_err());
        assert!(parse_config("[field]\np = 5\n[weights]\ntriple = 2,2 ; 2 ; 6\n").is_err());
    }

    #[test]
    fn eigen_sections() {
        let c = parse_config("[field]\np = 5\n[eigen p0]\nalpha = 1, 2, 3/4\nbeta = symbolic\n").unwrap();
        let spec = &c.eigen["p0"];
        assert_eq!(spec.beta, Some(Values::Symbolic));
        assert!(matches!(&spec.alpha, Some(Values::Rational(a)) if a[2] == BigRational::new(3.into(), 4.into())));
        assert!(parse_config("[field]\np = 5\n[eigen q9]\nalpha = 1,1,1\n").is_err());
    }

    #[test]
    fn table_alignment() {
        let t = render_table(&["a", "bb"], &[vec!["xxx".into(), "y".into()]]);
        assert_eq!(t, "a    bb\n---  --\nxxx  y\n");
    }
}
