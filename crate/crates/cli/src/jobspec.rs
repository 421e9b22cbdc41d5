//! Job files.
//!
//! ```text
//! # C^2 with {z1, z2} = z1 z2
//! [chart]
//! labels = z1, z2
//! constants = [[0, 1], [-1, 0]]
//! trunc = 4
//!
//! [connection]
//! residues = [[[1/2, 0], [0, 0]], [[0, 0], [0, 0]]]
//! gauge = [[1, z1], [0, 1]]
//!
//! [job]
//! command = normalize
//! ```
//!
//! Values continue on following lines indented by whitespace. `#` starts a
//! comment line.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use logpois::chart::{validate_label, LogChart};
use logpois::connection::{ep_principal, gauge_transform, ConnMatrix, GaugeMatrix, PvMatrix, ResidueTuple};
use logpois::error::{Error, ParseError, Result};
use logpois::monodromy::{Letter, TwistedWord};
use logpois::poisson::{LogForm, PoissonStructure};
use logpois::ppd::VariableOrder;
use logpois::rank2::{l1111_structure, L1111Params, PoissonTriple, L1111_DEFAULT_LOG};
use logpois::sample;
use logpois::series::Ring;
use logpois::spectral::NonresMode;
use logpois::text::{
    parse_entry_matrix, parse_form, parse_int_list, parse_list, parse_matrix, parse_poly, parse_polyvector,
    parse_scalar_list,
};
use logpois::{Matrix, Polyvector, Scalar};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_TRUNC: i32 = 6;
pub const DEFAULT_STEPS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Command {
    CheckJacobi,
    CheckH3,
    LogHamiltonians,
    Koszul,
    Curvature,
    Gauge,
    ExtractPrincipal,
    Spectrum,
    Nonresonance,
    Normalize,
    VerifyUniqueness,
    Character,
    TwistedEval,
    Transport1d,
    Rank2Mc,
    Rank2Criterion,
    Rank2Luuw,
    L1111Build,
    XiCheck,
    PoincarePrimitive,
    RankAt,
}

pub const COMMANDS: [(Command, &str); 21] = [
    (Command::CheckJacobi, "check-jacobi"),
    (Command::CheckH3, "check-h3"),
    (Command::LogHamiltonians, "log-hamiltonians"),
    (Command::Koszul, "koszul"),
    (Command::Curvature, "curvature"),
    (Command::Gauge, "gauge"),
    (Command::ExtractPrincipal, "extract-principal"),
    (Command::Spectrum, "spectrum"),
    (Command::Nonresonance, "nonresonance"),
    (Command::Normalize, "normalize"),
    (Command::VerifyUniqueness, "verify-uniqueness"),
    (Command::Character, "character"),
    (Command::TwistedEval, "twisted-eval"),
    (Command::Transport1d, "transport-1d"),
    (Command::Rank2Mc, "rank2-mc"),
    (Command::Rank2Criterion, "rank2-criterion"),
    (Command::Rank2Luuw, "rank2-luuw"),
    (Command::L1111Build, "l1111-build"),
    (Command::XiCheck, "xi-check"),
    (Command::PoincarePrimitive, "poincare-primitive"),
    (Command::RankAt, "rank-at"),
];

impl Command {
    pub fn name(self) -> &'static str {
        COMMANDS.iter().find(|(c, _)| *c == self).map(|(_, n)| *n).expect("listed")
    }

    /// Keys accepted in the `[job]` section besides `command`.
    fn job_keys(self) -> &'static [&'static str] {
        use Command::*;
        match self {
            Koszul => &["alpha", "beta"],
            Gauge => &["g"],
            Spectrum | Nonresonance => &["mode"],
            Normalize => &["order", "mode"],
            VerifyUniqueness => &["h1", "h2", "mode"],
            Character => &["m"],
            TwistedEval => &["word", "rho.*"],
            Transport1d => &["a", "steps"],
            Rank2Mc => &["u", "v", "w", "triple"],
            Rank2Criterion => &["v"],
            Rank2Luuw => &["u", "v"],
            PoincarePrimitive => &["eta"],
            RankAt => &["point"],
            _ => &[],
        }
    }

    fn needs_connection(self) -> bool {
        use Command::*;
        matches!(self, Curvature | Gauge | ExtractPrincipal | Normalize | VerifyUniqueness)
    }

    fn needs_residues(self) -> bool {
        use Command::*;
        matches!(self, Spectrum | Nonresonance | Character | TwistedEval)
    }
}

impl FromStr for Command {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        COMMANDS
            .iter()
            .find(|(_, n)| *n == s)
            .map(|(c, _)| *c)
            .ok_or_else(|| format!("unknown command `{s}`"))
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Flag values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub trunc: Option<i32>,
    pub pole_bound: Option<u8>,
    pub mode: Option<NonresMode>,
    pub steps: Option<usize>,
    pub seed: Option<u64>,
}

pub fn parse_mode(s: &str) -> std::result::Result<NonresMode, String> {
    match s {
        "symmetric" => Ok(NonresMode::Symmetric),
        "as-stated" => Ok(NonresMode::AsStated),
        _ => Err(format!("mode must be `symmetric` or `as-stated`, got `{s}`")),
    }
}

pub fn mode_name(m: NonresMode) -> &'static str {
    match m {
        NonresMode::Symmetric => "symmetric",
        NonresMode::AsStated => "as-stated",
    }
}

#[derive(Clone, Debug)]
struct Entry {
    value: String,
    line: usize,
    column: usize,
}

type Raw = BTreeMap<String, BTreeMap<String, Entry>>;

fn syntax(line: usize, column: usize, msg: impl Into<String>) -> Error {
    Error::Parse(ParseError::new(msg).at(line, column))
}

fn parse_raw(text: &str) -> Result<Raw> {
    let mut raw: Raw = BTreeMap::new();
    let mut section: Option<String> = None;
    let mut last: Option<(String, String)> = None;
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if line.starts_with(char::is_whitespace) {
            let (s, k) = last.as_ref().ok_or_else(|| syntax(ln, 1, "continuation line without a key"))?;
            let e = raw.get_mut(s).and_then(|m| m.get_mut(k)).expect("entry exists");
            e.value.push(' ');
            e.value.push_str(trimmed);
            continue;
        }
        if let Some(name) = trimmed.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            if !matches!(name, "chart" | "connection" | "job") {
                return Err(syntax(ln, 2, format!("unknown section `{name}`")));
            }
            if raw.contains_key(name) {
                return Err(syntax(ln, 2, format!("duplicate section `{name}`")));
            }
            raw.insert(name.to_string(), BTreeMap::new());
            section = Some(name.to_string());
            last = None;
            continue;
        }
        let s = section.clone().ok_or_else(|| syntax(ln, 1, "key outside of a section"))?;
        let (k, v) = line.split_once('=').ok_or_else(|| syntax(ln, 1, "expected `key = value`"))?;
        let key = k.trim().to_string();
        if key.is_empty() {
            return Err(syntax(ln, 1, "empty key"));
        }
        let column = k.len() + 2 + (v.len() - v.trim_start().len());
        let m = raw.get_mut(&s).expect("section exists");
        if m.contains_key(&key) {
            return Err(syntax(ln, 1, format!("duplicate key `{key}`")));
        }
        m.insert(key.clone(), Entry { value: v.trim().to_string(), line: ln, column });
        last = Some((s, key));
    }
    Ok(raw)
}

/// Typed access to one section, with positions attached to errors.
struct Sec<'a> {
    name: &'static str,
    entries: Option<&'a BTreeMap<String, Entry>>,
}

impl<'a> Sec<'a> {
    fn get(&self, key: &str) -> Option<&'a Entry> {
        self.entries.and_then(|m| m.get(key))
    }

    fn keys(&self) -> Vec<(&'a String, &'a Entry)> {
        self.entries.map(|m| m.iter().collect()).unwrap_or_default()
    }

    fn at<T>(&self, e: &Entry, r: Result<T>) -> Result<T> {
        r.map_err(|err| match err {
            Error::Parse(p) => Error::Parse(ParseError::new(p.message).at(e.line, e.column)),
            Error::InvalidArgument(m) => Error::Parse(ParseError::new(m).at(e.line, e.column)),
            other => other,
        })
    }

    fn parse<T>(&self, key: &str, f: impl FnOnce(&str) -> Result<T>) -> Result<Option<T>> {
        match self.get(key) {
            Some(e) => self.at(e, f(&e.value)).map(Some),
            None => Ok(None),
        }
    }

    fn require<T>(&self, key: &str, f: impl FnOnce(&str) -> Result<T>) -> Result<T> {
        self.parse(key, f)?
            .ok_or_else(|| Error::Parse(ParseError::new(format!("missing key `{key}` in [{}]", self.name))))
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        for (k, e) in self.keys() {
            let ok = allowed.iter().any(|a| match a.strip_suffix('*') {
                Some(prefix) => k.starts_with(prefix) && k.len() > prefix.len(),
                None => a == k,
            });
            if !ok {
                return Err(syntax(e.line, 1, format!("unexpected key `{k}` in [{}]", self.name)));
            }
        }
        Ok(())
    }
}

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(ParseError::new(msg))
}

fn parse_int<T: FromStr>(s: &str) -> Result<T> {
    s.parse().map_err(|_| perr(format!("`{s}` is not a valid integer")))
}

fn parse_scalar(s: &str) -> Result<Scalar> {
    s.parse::<Scalar>().map_err(Error::Parse)
}

fn parse_labels(s: &str) -> Result<Vec<String>> {
    let v: Vec<String> = s.split(',').map(|x| x.trim().to_string()).collect();
    for l in &v {
        validate_label(l)?;
    }
    Ok(v)
}

fn parse_order(s: &str) -> Result<VariableOrder> {
    match s {
        "canonical" => Ok(VariableOrder::Canonical),
        "reversed" => Ok(VariableOrder::Reversed),
        _ => match s.strip_prefix("shuffled:") {
            Some(seed) => Ok(VariableOrder::Shuffled(parse_int(seed)?)),
            None => Err(perr(format!("order must be canonical, reversed or shuffled:SEED, got `{s}`"))),
        },
    }
}

pub fn order_name(o: VariableOrder) -> String {
    match o {
        VariableOrder::Canonical => "canonical".into(),
        VariableOrder::Reversed => "reversed".into(),
        VariableOrder::Shuffled(s) => format!("shuffled:{s}"),
    }
}

/// `g h^-1 m(1,0)`: leaf generators, optionally inverted, and meridians.
pub fn parse_word(s: &str) -> Result<TwistedWord> {
    let mut letters = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        if let Some(r) = rest.strip_prefix("m(") {
            let close = r.find(')').ok_or_else(|| perr("unclosed meridian"))?;
            letters.push(Letter::Meridian(parse_int_list(&format!("({})", &r[..close]))?));
            rest = r[close + 1..].trim_start();
            continue;
        }
        let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
        let tok = &rest[..end];
        let (name, inverse) = match tok.strip_suffix("^-1") {
            Some(n) => (n, true),
            None => (tok, false),
        };
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(perr(format!("bad word letter `{tok}`")));
        }
        letters.push(Letter::Leaf { generator: name.to_string(), inverse });
        rest = rest[end..].trim_start();
    }
    Ok(TwistedWord(letters))
}

pub fn fmt_word(w: &TwistedWord) -> String {
    if w.0.is_empty() {
        return "1".into();
    }
    let parts: Vec<String> = w
        .0
        .iter()
        .map(|l| match l {
            Letter::Leaf { generator, inverse } => format!("{generator}{}", if *inverse { "^-1" } else { "" }),
            Letter::Meridian(m) => {
                let v: Vec<String> = m.iter().map(|x| x.to_string()).collect();
                format!("m({})", v.join(","))
            }
        })
        .collect();
    parts.join(" ")
}

#[derive(Clone, Debug)]
pub enum GaugeSource {
    /// Gauge returned by the solver with the given order.
    Solver(VariableOrder),
    /// Inverse of the gauge used to build the connection.
    Constructing,
    Explicit(GaugeMatrix),
}

#[derive(Clone, Debug)]
pub enum Job {
    Plain,
    Koszul { alpha: LogForm, beta: LogForm },
    Gauge { g: GaugeMatrix },
    Normalize { order: VariableOrder },
    VerifyUniqueness { h1: GaugeSource, h2: GaugeSource },
    Character { m: Vec<i64> },
    TwistedEval { rho: BTreeMap<String, Matrix>, word: TwistedWord },
    Transport { a: Scalar },
    Rank2Mc { triple: PoissonTriple },
    Rank2Criterion { v: Polyvector },
    Rank2Luuw { u: Polyvector, v: Polyvector },
    PoincarePrimitive { eta: LogForm },
    RankAt { point: Vec<Scalar> },
}

#[derive(Clone, Debug)]
pub struct ConnectionSpec {
    pub theta: ConnMatrix,
    /// Residues as written in the file, if any.
    pub residues: Option<ResidueTuple>,
    /// Gauge applied to build `theta`, if any.
    pub constructing: Option<GaugeMatrix>,
}

#[derive(Clone, Debug)]
pub struct JobSpec {
    pub command: Command,
    pub chart: LogChart,
    pub l1111: Option<L1111Params>,
    pub connection: Option<ConnectionSpec>,
    pub job: Job,
    pub mode: NonresMode,
    pub steps: usize,
    pub seed: u64,
}

fn build_chart(sec: &Sec, ov: &Overrides, rng: &mut ChaCha8Rng) -> Result<(LogChart, Option<L1111Params>)> {
    sec.check_keys(&["n", "labels", "log", "constants", "sigma", "l1111", "trunc", "pole_bound"])?;
    let trunc = match ov.trunc {
        Some(t) => t,
        None => sec.parse("trunc", parse_int)?.unwrap_or(DEFAULT_TRUNC),
    };
    let pole_bound = match ov.pole_bound {
        Some(p) => p,
        None => sec.parse("pole_bound", parse_int)?.unwrap_or(1),
    };
    let kinds = ["constants", "sigma", "l1111"].iter().filter(|k| sec.get(k).is_some()).count();
    if kinds != 1 {
        return Err(perr("[chart] needs exactly one of `constants`, `sigma`, `l1111`"));
    }
    if let Some(e) = sec.get("l1111") {
        let a = sec.at(e, parse_scalar_list(&e.value))?;
        let arr: [Scalar; 4] = a.try_into().map_err(|_| syntax(e.line, e.column, "l1111 needs four weights"))?;
        let params = sec.at(e, L1111Params::new(arr))?;
        let labels = sec.parse("labels", parse_labels)?.unwrap_or_else(|| (0..4).map(|k| format!("z{k}")).collect());
        if labels.len() != 4 {
            return Err(perr("l1111 charts have four coordinates"));
        }
        let log = match sec.get("log") {
            Some(e) => sec.at(e, log_indices(&e.value, &labels))?,
            None => L1111_DEFAULT_LOG.to_vec(),
        };
        if sec.get("n").is_some_and(|e| e.value != "4") {
            return Err(perr("l1111 charts have n = 4"));
        }
        let base = l1111_structure(&params, &log, trunc, pole_bound)?;
        let chart = LogChart::new(base.poisson().clone(), labels)?;
        return Ok((chart, Some(params)));
    }
    let n_given: Option<usize> = sec.parse("n", parse_int)?;
    let labels_given = sec.parse("labels", parse_labels)?;
    let n = match (n_given, &labels_given) {
        (Some(n), Some(l)) if l.len() != n => return Err(perr(format!("{} labels for n = {n}", l.len()))),
        (Some(n), _) => n,
        (None, Some(l)) => l.len(),
        (None, None) => match sec.get("constants") {
            Some(e) if e.value != "random" => sec.at(e, parse_matrix(&e.value))?.rows(),
            _ => return Err(perr("[chart] needs `n` or `labels`")),
        },
    };
    let labels = labels_given.unwrap_or_else(|| (1..=n).map(|k| format!("z{k}")).collect());
    let log = match sec.get("log") {
        Some(e) => sec.at(e, log_indices(&e.value, &labels))?,
        None => (0..n).collect(),
    };
    let mask = log.iter().fold(0u8, |m, &k| m | (1 << k));
    let ring = Ring::new(n, mask, trunc, pole_bound)?;
    let poisson = if let Some(e) = sec.get("constants") {
        let c = if e.value == "random" {
            sample::random_log_canonical(rng, n)
        } else {
            sec.at(e, parse_matrix(&e.value))?
        };
        if c.rows() != n || c.cols() != n {
            return Err(syntax(e.line, e.column, format!("constants must be {n}x{n}")));
        }
        if c.add(&c.transpose()) != Matrix::zeros(n, n) {
            return Err(syntax(e.line, e.column, "constants must be antisymmetric"));
        }
        PoissonStructure::log_canonical(ring, &c)
    } else {
        let e = sec.get("sigma").expect("checked");
        let s = sec.at(e, parse_polyvector(&e.value, ring, &labels, 2))?;
        PoissonStructure::new(s)?
    };
    Ok((LogChart::new(poisson, labels)?, None))
}

fn log_indices(s: &str, labels: &[String]) -> Result<Vec<usize>> {
    if s.trim() == "none" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for l in s.split(',') {
        let l = l.trim();
        let k = labels.iter().position(|x| x == l).ok_or_else(|| perr(format!("unknown coordinate `{l}`")))?;
        if out.contains(&k) {
            return Err(perr(format!("coordinate `{l}` listed twice")));
        }
        out.push(k);
    }
    out.sort_unstable();
    Ok(out)
}

fn pv_matrix(s: &str, chart: &LogChart) -> Result<ConnMatrix> {
    let ring = chart.ring();
    let (e, entries) = parse_entry_matrix(s, |c| parse_polyvector(c, ring, chart.labels(), 1))?;
    PvMatrix::from_entries(ring, e, entries)
}

pub fn gauge_matrix(s: &str, chart: &LogChart) -> Result<GaugeMatrix> {
    let ring = chart.ring();
    let (e, entries) = parse_entry_matrix(s, |c| parse_poly(c, ring, chart.labels()))?;
    GaugeMatrix::from_entries(ring, e, entries)
}

fn residue_tuple(s: &str) -> Result<ResidueTuple> {
    let mats = parse_list(s)?.iter().map(|m| parse_matrix(m)).collect::<Result<Vec<_>>>()?;
    ResidueTuple::new(mats)
}

fn build_connection(sec: &Sec, chart: &LogChart, rng: &mut ChaCha8Rng) -> Result<ConnectionSpec> {
    sec.check_keys(&["residues", "tail", "theta", "gauge", "random"])?;
    let ring = chart.ring();
    let (theta, residues, constructing) = if let Some(e) = sec.get("random") {
        if sec.get("residues").is_some() || sec.get("theta").is_some() || sec.get("gauge").is_some() {
            return Err(syntax(e.line, 1, "`random` excludes `residues`, `theta` and `gauge`"));
        }
        let rank: usize = sec.at(e, parse_int(&e.value))?;
        if rank == 0 {
            return Err(syntax(e.line, e.column, "random rank must be positive"));
        }
        let a = sample::random_residues(rng, chart.r(), rank);
        let g = sample::random_gauge(rng, ring, rank, 3);
        let t0 = ep_principal(chart, &a)?;
        (t0, Some(a), Some(g))
    } else {
        match (sec.get("residues"), sec.get("theta")) {
            (Some(_), Some(e)) => return Err(syntax(e.line, 1, "give either `residues` or `theta`")),
            (None, None) => return Err(perr("[connection] needs `residues`, `theta` or `random`")),
            (Some(e), None) => {
                let a = sec.at(e, residue_tuple(&e.value))?;
                if a.len() != chart.r() {
                    return Err(syntax(e.line, e.column, format!("{} residues for {} log coordinates", a.len(), chart.r())));
                }
                let t0 = sec.at(e, ep_principal(chart, &a))?;
                (t0, Some(a), None)
            }
            (None, Some(e)) => (sec.at(e, pv_matrix(&e.value, chart))?, None, None),
        }
    };
    let mut theta = theta;
    if let Some(e) = sec.get("tail") {
        let tail = sec.at(e, pv_matrix(&e.value, chart))?;
        if tail.rank() != theta.rank() {
            return Err(syntax(e.line, e.column, "tail has the wrong size"));
        }
        theta = theta.add(&tail);
    }
    let constructing = match (constructing, sec.get("gauge")) {
        (Some(g), _) => Some(g),
        (None, Some(e)) => Some(sec.at(e, gauge_matrix(&e.value, chart))?),
        (None, None) => None,
    };
    if let Some(g) = &constructing {
        if g.rank() != theta.rank() {
            return Err(perr("gauge has the wrong size"));
        }
        theta = gauge_transform(chart, &theta, g)?;
    }
    Ok(ConnectionSpec { theta, residues, constructing })
}

fn gauge_source(s: &str, chart: &LogChart) -> Result<GaugeSource> {
    if s == "constructing" {
        return Ok(GaugeSource::Constructing);
    }
    if let Some(o) = s.strip_prefix("solver") {
        let order = match o.strip_prefix(':') {
            Some(o) => parse_order(o)?,
            None if o.is_empty() => VariableOrder::Canonical,
            None => return Err(perr(format!("bad gauge source `{s}`"))),
        };
        return Ok(GaugeSource::Solver(order));
    }
    Ok(GaugeSource::Explicit(gauge_matrix(s, chart)?))
}

pub fn parse_jobspec(text: &str, ov: &Overrides) -> Result<JobSpec> {
    let raw = parse_raw(text)?;
    let sec = |name: &'static str| Sec { name, entries: raw.get(name) };
    let job = sec("job");
    if job.entries.is_none() {
        return Err(perr("missing [job] section"));
    }
    let command: Command = job.require("command", |s| s.parse::<Command>().map_err(perr))?;
    let mut allowed = vec!["command", "seed"];
    allowed.extend_from_slice(command.job_keys());
    job.check_keys(&allowed)?;
    let seed = match ov.seed {
        Some(s) => s,
        None => job.parse("seed", parse_int)?.unwrap_or(0),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chart_sec = sec("chart");
    if chart_sec.entries.is_none() && command != Command::Transport1d {
        return Err(perr("missing [chart] section"));
    }
    let (chart, l1111) = if chart_sec.entries.is_some() {
        build_chart(&chart_sec, ov, &mut rng)?
    } else {
        let ring = Ring::new(1, 1, ov.trunc.unwrap_or(DEFAULT_TRUNC), 1)?;
        (LogChart::with_default_labels(PoissonStructure::zero(ring)), None)
    };
    let conn_sec = sec("connection");
    let connection = match conn_sec.entries {
        Some(_) => Some(build_connection(&conn_sec, &chart, &mut rng)?),
        None => None,
    };
    if (command.needs_connection() || command.needs_residues()) && connection.is_none() {
        return Err(perr(format!("`{command}` needs a [connection] section")));
    }
    let mode = match ov.mode {
        Some(m) => m,
        None => job.parse("mode", |s| parse_mode(s).map_err(perr))?.unwrap_or_default(),
    };
    let steps = match ov.steps {
        Some(s) => s,
        None => job.parse("steps", parse_int)?.unwrap_or(DEFAULT_STEPS),
    };
    let ring = chart.ring();
    let labels = chart.labels().to_vec();
    let pv = |s: &str| parse_polyvector(s, ring, &labels, 1);
    let form = |s: &str| parse_form(s, ring, &labels, 1);
    let j = match command {
        Command::Koszul => Job::Koszul { alpha: job.require("alpha", form)?, beta: job.require("beta", form)? },
        Command::Gauge => Job::Gauge { g: job.require("g", |s| gauge_matrix(s, &chart))? },
        Command::Normalize => Job::Normalize { order: job.parse("order", parse_order)?.unwrap_or_default() },
        Command::VerifyUniqueness => Job::VerifyUniqueness {
            h1: job.parse("h1", |s| gauge_source(s, &chart))?.unwrap_or(GaugeSource::Solver(VariableOrder::Canonical)),
            h2: job.parse("h2", |s| gauge_source(s, &chart))?.unwrap_or(GaugeSource::Solver(VariableOrder::Reversed)),
        },
        Command::Character => Job::Character { m: job.require("m", parse_int_list)? },
        Command::TwistedEval => {
            let mut rho = BTreeMap::new();
            for (k, e) in job.keys() {
                if let Some(g) = k.strip_prefix("rho.") {
                    rho.insert(g.to_string(), job.at(e, parse_matrix(&e.value))?);
                }
            }
            Job::TwistedEval { rho, word: job.require("word", parse_word)? }
        }
        Command::Transport1d => Job::Transport { a: job.require("a", parse_scalar)? },
        Command::Rank2Mc => {
            if job.get("triple").is_some_and(|e| e.value == "l1111") {
                let t = logpois::rank2::l1111_triple(&chart)?;
                Job::Rank2Mc { triple: t }
            } else {
                let zero = || Polyvector::zero(ring, 1);
                let u = job.parse("u", pv)?.unwrap_or_else(zero);
                let v = job.parse("v", pv)?.unwrap_or_else(zero);
                let w = job.parse("w", pv)?.unwrap_or_else(zero);
                Job::Rank2Mc { triple: PoissonTriple::new(u, v, w)? }
            }
        }
        Command::Rank2Criterion => Job::Rank2Criterion { v: job.require("v", pv)? },
        Command::Rank2Luuw => Job::Rank2Luuw { u: job.require("u", pv)?, v: job.require("v", pv)? },
        Command::PoincarePrimitive => Job::PoincarePrimitive { eta: job.require("eta", form)? },
        Command::RankAt => Job::RankAt { point: job.require("point", parse_scalar_list)? },
        Command::L1111Build if l1111.is_none() => return Err(perr("`l1111-build` needs an `l1111` chart")),
        _ => Job::Plain,
    };
    Ok(JobSpec { command, chart, l1111, connection, job: j, mode, steps, seed })
}
