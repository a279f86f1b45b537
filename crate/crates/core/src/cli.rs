//! Batch driver: scenario configs, the form expression language, suite dispatch and exit codes.
//!
//! Form grammar:
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := [int '*'] factor ('^' factor)*
//! factor := 'dlog' '(' unit ')' | 'd' '(' series ')' | '(' expr ')'
//! unit   := series | ufac ('*' ufac)*        (the product form needs a parenthesised factor)
//! ufac   := 'T' int ['^' ['-'] int] | '(' series ')'
//! series := ['-'] mono (('+' | '-') mono)*
//! mono   := int | [int '*'] 'T' int ['^' int] ('*' 'T' int ['^' int])*
//! ```

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::divmodel::LocalModel;
use crate::engine::{self, ExploreBounds, ExploreRow, ModelParams, Thm1Options, VerificationReport};
use crate::error::{Error, Result};
use crate::forms::LogForm;
use crate::modlin::Ring;
use crate::series::{LocalizedUnit, Mono, TruncSeries};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_CLAMP: i32 = 3;

pub const SEED_ENV: &str = "DRWLOG_SEED";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Suite {
    #[serde(rename = "thm1")]
    Thm1,
    #[serde(rename = "decompose")]
    Decompose,
    #[serde(rename = "lemma3")]
    Lemma3,
    #[serde(rename = "appendixB")]
    AppendixB,
    #[serde(rename = "appendixC")]
    AppendixC,
    #[serde(rename = "compare")]
    Compare,
    #[serde(rename = "bgk")]
    Bgk,
    #[serde(rename = "thm2")]
    Thm2,
    #[serde(rename = "cor1")]
    Cor1,
}

fn one() -> u32 {
    1
}

fn default_samples() -> usize {
    100
}

fn default_max_h() -> u32 {
    6
}

fn default_wr() -> u32 {
    3
}

/// One `[[scenario]]` table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub id: Option<String>,
    pub p: u32,
    #[serde(default = "one")]
    pub m: u32,
    #[serde(default = "one")]
    pub n: u32,
    pub d: usize,
    pub e: usize,
    pub f: usize,
    pub g: usize,
    pub r: Vec<u32>,
    pub q: usize,
    #[serde(rename = "N")]
    pub prec: u32,
    pub suites: Vec<Suite>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Extra internal weight for `thm1`.
    #[serde(default)]
    pub extra_weight: u32,
    /// Negative control for `thm1`: first slot in `1 + (T^r)` instead of `1 + (T^{r̃})`.
    #[serde(default)]
    pub drop_bump: bool,
    #[serde(default = "default_max_h")]
    pub lemma3_max_h: u32,
    #[serde(default = "default_wr")]
    pub lemma3_weight: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default, rename = "scenario")]
    pub scenarios: Vec<Scenario>,
    #[serde(default)]
    pub explore: Option<ExploreBounds>,
}

impl Scenario {
    pub fn model(&self) -> Result<LocalModel> {
        LocalModel::new(self.p, self.m, self.n, self.d, self.e, self.f, self.g, self.r.clone(), self.prec)
    }
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<ScenarioConfig> {
        let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<ScenarioConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        ScenarioConfig::parse(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let mut ids = std::collections::HashSet::new();
        for (k, s) in self.scenarios.iter().enumerate() {
            s.model().map_err(|e| Error::Config(format!("scenario {}: {e}", scenario_id(s, k))))?;
            if s.q == 0 || s.q > s.d {
                return Err(Error::Config(format!("scenario {}: q = {} outside 1..={}", scenario_id(s, k), s.q, s.d)));
            }
            if s.suites.is_empty() {
                return Err(Error::Config(format!("scenario {}: no suites", scenario_id(s, k))));
            }
            if !ids.insert(scenario_id(s, k)) {
                return Err(Error::Config(format!("duplicate scenario id {}", scenario_id(s, k))));
            }
        }
        Ok(())
    }
}

pub fn scenario_id(s: &Scenario, k: usize) -> String {
    s.id.clone().unwrap_or_else(|| format!("s{k:03}"))
}

/// `DRWLOG_SEED` if set, else the scenario's seed, else the file's, else 0.
pub fn effective_seed(cfg: &ScenarioConfig, s: &Scenario) -> Result<u64> {
    if let Ok(v) = std::env::var(SEED_ENV) {
        return v.trim().parse().map_err(|_| Error::Config(format!("{SEED_ENV}={v} is not a u64")));
    }
    Ok(s.seed.or(cfg.seed).unwrap_or(0))
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub jobs: Option<usize>,
    /// Zero `elapsed_ms` so reports are byte-identical across runs.
    pub no_timing: bool,
}

/// Outcome of a run: reports in scenario order and the exit code.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub reports: Vec<VerificationReport>,
    pub exit_code: i32,
}

fn error_report(suite: Suite, s: &Scenario, err: &Error) -> VerificationReport {
    let params = ModelParams { p: s.p, m: s.m, n: s.n, d: s.d, e: s.e, f: s.f, g: s.g, r: s.r.clone(), q: s.q, precision: s.prec };
    let mut rep = VerificationReport::new(suite_name(suite), params);
    rep.check("error", false, err.to_string());
    rep.settle();
    rep
}

pub fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Thm1 => "thm1",
        Suite::Decompose => "decompose",
        Suite::Lemma3 => "lemma3",
        Suite::AppendixB => "appendixB",
        Suite::AppendixC => "appendixC",
        Suite::Compare => "compare",
        Suite::Bgk => "bgk",
        Suite::Thm2 => "thm2",
        Suite::Cor1 => "cor1",
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        ALL_SUITES
            .iter()
            .copied()
            .find(|x| suite_name(*x) == s)
            .ok_or_else(|| Error::Config(format!("unknown suite '{s}'")))
    }
}

pub const ALL_SUITES: [Suite; 9] = [
    Suite::Thm1,
    Suite::Decompose,
    Suite::Lemma3,
    Suite::AppendixB,
    Suite::AppendixC,
    Suite::Compare,
    Suite::Bgk,
    Suite::Thm2,
    Suite::Cor1,
];

impl Scenario {
    /// A one-suite scenario on `model` with default sampling options.
    pub fn of_model(model: &LocalModel, q: usize, suite: Suite) -> Scenario {
        Scenario {
            id: None,
            p: model.p,
            m: model.m,
            n: model.n,
            d: model.d,
            e: model.e,
            f: model.f,
            g: model.g,
            r: model.r.clone(),
            q,
            prec: model.prec,
            suites: vec![suite],
            samples: default_samples(),
            seed: None,
            extra_weight: 0,
            drop_bump: false,
            lemma3_max_h: default_max_h(),
            lemma3_weight: default_wr(),
        }
    }
}

/// Runs one suite of one scenario; several reports for `lemma3`.
pub fn run_suite(s: &Scenario, suite: Suite, seed: u64) -> Result<Vec<VerificationReport>> {
    let model = s.model()?;
    let q = s.q;
    let rep = match suite {
        Suite::Thm1 => {
            let opts = Thm1Options { extra_weight: s.extra_weight, drop_bump: s.drop_bump, rerun_on_failure: true };
            engine::verify_thm1(&model, q, &opts)?
        }
        Suite::Decompose => engine::verify_decompose(&model, q, s.samples, seed)?,
        Suite::Lemma3 => {
            let mut out = Vec::new();
            for i in 0..s.d {
                for h in 0..=s.lemma3_max_h {
                    out.push(engine::verify_lemma3_cell(s.p, s.d, s.e, i, q, h, s.lemma3_weight)?);
                }
            }
            return Ok(out);
        }
        Suite::AppendixB => engine::verify_appendix_b(&model, q, s.samples, seed)?,
        Suite::AppendixC => engine::verify_ses_finv(s.p, s.d, s.e, q, s.prec)?,
        Suite::Compare => engine::verify_strict_inclusions(&model, q)?,
        Suite::Bgk => engine::verify_bgk_n1(&model, q)?,
        Suite::Thm2 => engine::verify_thm2_restricted(&model, s.n, q)?,
        Suite::Cor1 => engine::verify_cor1(&model, s.n)?,
    };
    Ok(vec![rep])
}

/// Runs every suite of every scenario; reports come back in config order.
pub fn run(cfg: &ScenarioConfig, opts: &RunOptions) -> Result<RunOutcome> {
    cfg.validate()?;
    let mut cells = Vec::new();
    for (k, s) in cfg.scenarios.iter().enumerate() {
        let seed = effective_seed(cfg, s)?;
        for &suite in &s.suites {
            cells.push((k, s, suite, seed));
        }
    }
    let work = || -> Vec<(std::result::Result<Vec<VerificationReport>, Error>, usize, &Scenario, Suite)> {
        cells.par_iter().map(|&(k, s, suite, seed)| (run_suite(s, suite, seed), k, s, suite)).collect()
    };
    let results = match opts.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(work),
        None => work(),
    };
    let mut reports = Vec::new();
    let (mut failed, mut clamped) = (false, false);
    for (res, k, s, suite) in results {
        let id = scenario_id(s, k);
        let reps = match res {
            Ok(r) => r,
            Err(e) => {
                if matches!(e, Error::SizeClamp(_)) {
                    clamped = true;
                }
                vec![error_report(suite, s, &e)]
            }
        };
        for mut rep in reps {
            rep.scenario = if rep.scenario.is_empty() { id.clone() } else { format!("{id}/{}", rep.scenario) };
            if opts.no_timing {
                rep.elapsed_ms = 0;
            }
            failed |= !rep.passed();
            reports.push(rep);
        }
    }
    let exit_code = if clamped {
        EXIT_CLAMP
    } else if failed {
        EXIT_FAILED
    } else {
        EXIT_OK
    };
    Ok(RunOutcome { reports, exit_code })
}

/// Exit code for an error raised before any suite ran.
pub fn exit_code_of(e: &Error) -> i32 {
    match e {
        Error::SizeClamp(_) => EXIT_CLAMP,
        Error::Config(_) | Error::Parse { .. } | Error::InvalidModel(_) | Error::Io(_) => EXIT_CONFIG,
        _ => EXIT_FAILED,
    }
}

pub fn reports_json(reports: &[VerificationReport]) -> Result<String> {
    serde_json::to_string_pretty(reports).map_err(|e| Error::Io(e.to_string()))
}

pub fn report_json(report: &VerificationReport) -> Result<String> {
    serde_json::to_string_pretty(report).map_err(|e| Error::Io(e.to_string()))
}

/// Output of `drwlog explore`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExploreOutput {
    pub report: VerificationReport,
    pub rows: Vec<ExploreRow>,
}

pub fn run_explore(cfg: &ScenarioConfig, opts: &RunOptions) -> Result<(ExploreOutput, i32)> {
    let bounds = cfg.explore.clone().unwrap_or_default();
    let work = || engine::explore_report(&bounds);
    let (mut report, rows) = match opts.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(work)?,
        None => work()?,
    };
    if opts.no_timing {
        report.elapsed_ms = 0;
    }
    let code = if report.passed() { EXIT_OK } else { EXIT_FAILED };
    Ok((ExploreOutput { report, rows }, code))
}

/// Inline model parameters for `drwlog decompose`, e.g. `p=3, e=1, f=1, g=1, r=[1], N=5`.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InlineModel {
    pub p: u32,
    #[serde(default = "one")]
    pub m: u32,
    pub e: usize,
    pub f: usize,
    pub g: usize,
    pub r: Vec<u32>,
    #[serde(rename = "N")]
    pub prec: u32,
}

impl InlineModel {
    pub fn parse(text: &str) -> Result<LocalModel> {
        #[derive(Deserialize)]
        struct Wrap {
            model: InlineModel,
        }
        let w: Wrap = toml::from_str(&format!("model = {{ {text} }}")).map_err(|e| Error::Config(e.to_string()))?;
        let m = w.model;
        LocalModel::new(m.p, m.m, 1, m.r.len(), m.e, m.f, m.g, m.r, m.prec)
    }
}

/// `drwlog decompose`: factor a log form of the model into `dlog` products.
pub fn decompose_text(model: &LocalModel, form: &str) -> Result<String> {
    let expr = parse_form(form)?;
    let q = expr.degree()?;
    let ring = engine::thm1::model_ring(model)?;
    let w = expr.eval(ring, model.d, engine::thm1::internal_weight(q, model.prec))?;
    let fact = engine::express_as_dlog_products(&w, model)?;
    let back = fact.evaluate(ring, model.d, q, w.prec())?;
    if back != w {
        return Err(Error::NotInLogPart("factorization does not reproduce the input".into()));
    }
    Ok(fact.to_text())
}

// ---------------------------------------------------------------- form expressions

/// `c · T_{v1}^{a1} ⋯` with variables as written (1-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoExpr {
    pub coeff: i64,
    pub vars: Vec<(usize, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesExpr {
    pub terms: Vec<MonoExpr>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnitFactor {
    Var(usize, i32),
    Series(SeriesExpr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnitExpr {
    Series(SeriesExpr),
    Product(Vec<UnitFactor>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    Dlog(UnitExpr),
    D(SeriesExpr),
    Group(Box<FormExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: i64,
    pub factors: Vec<Factor>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormExpr {
    pub terms: Vec<Term>,
}

impl MonoExpr {
    fn max_var(&self) -> usize {
        self.vars.iter().map(|v| v.0).max().unwrap_or(0)
    }

    fn eval(&self, ring: Ring, d: usize, prec: u32) -> Result<TruncSeries> {
        let mut m = Mono::one();
        for &(v, k) in &self.vars {
            if v == 0 || v > d {
                return Err(Error::Type(format!("variable T{v} outside 1..={d}")));
            }
            m = m.mul(&Mono::var(v - 1, k));
        }
        Ok(TruncSeries::monomial(ring, d, prec, m, ring.from_int(self.coeff)))
    }
}

impl SeriesExpr {
    fn max_var(&self) -> usize {
        self.terms.iter().map(|t| t.max_var()).max().unwrap_or(0)
    }

    pub fn eval(&self, ring: Ring, d: usize, prec: u32) -> Result<TruncSeries> {
        let mut s = TruncSeries::zero(ring, d, prec);
        for t in &self.terms {
            s = s.add(&t.eval(ring, d, prec)?)?;
        }
        Ok(s)
    }
}

impl UnitExpr {
    fn max_var(&self) -> usize {
        match self {
            UnitExpr::Series(s) => s.max_var(),
            UnitExpr::Product(fs) => fs
                .iter()
                .map(|f| match f {
                    UnitFactor::Var(v, _) => *v,
                    UnitFactor::Series(s) => s.max_var(),
                })
                .max()
                .unwrap_or(0),
        }
    }

    pub fn eval(&self, ring: Ring, d: usize, prec: u32) -> Result<LocalizedUnit> {
        let non_unit = || Error::Type(format!("dlog of a non-unit: {self}"));
        let mut z = vec![0i32; d];
        let mut u = TruncSeries::one(ring, d, prec);
        match self {
            UnitExpr::Series(s) if s.terms.len() == 1 => {
                let t = &s.terms[0];
                for &(v, k) in &t.vars {
                    if v == 0 || v > d {
                        return Err(Error::Type(format!("variable T{v} outside 1..={d}")));
                    }
                    z[v - 1] += k as i32;
                }
                let c = ring.from_int(t.coeff);
                if !ring.is_unit(c) {
                    return Err(non_unit());
                }
                u = TruncSeries::constant(ring, d, prec, c);
            }
            UnitExpr::Series(s) => u = s.eval(ring, d, prec)?,
            UnitExpr::Product(fs) => {
                for f in fs {
                    match f {
                        UnitFactor::Var(v, k) => {
                            if *v == 0 || *v > d {
                                return Err(Error::Type(format!("variable T{v} outside 1..={d}")));
                            }
                            z[v - 1] += k;
                        }
                        UnitFactor::Series(s) => u = u.mul(&s.eval(ring, d, prec)?)?,
                    }
                }
            }
        }
        LocalizedUnit::new(z, u).map_err(|_| non_unit())
    }
}

impl FormExpr {
    /// Form degree, checking that summands agree.
    pub fn degree(&self) -> Result<usize> {
        let mut deg = None;
        for t in &self.terms {
            let mut q = 0;
            for f in &t.factors {
                q += match f {
                    Factor::Dlog(_) | Factor::D(_) => 1,
                    Factor::Group(e) => e.degree()?,
                };
            }
            match deg {
                None => deg = Some(q),
                Some(q0) if q0 != q => return Err(Error::Type(format!("sum of a {q0}-form and a {q}-form"))),
                _ => {}
            }
        }
        deg.ok_or_else(|| Error::Type("empty expression".into()))
    }

    /// Largest variable index used.
    pub fn max_var(&self) -> usize {
        self.terms
            .iter()
            .flat_map(|t| &t.factors)
            .map(|f| match f {
                Factor::Dlog(u) => u.max_var(),
                Factor::D(s) => s.max_var(),
                Factor::Group(e) => e.max_var(),
            })
            .max()
            .unwrap_or(0)
    }

    /// The form in `d` variables at weight precision `prec`.
    pub fn eval(&self, ring: Ring, d: usize, prec: u32) -> Result<LogForm> {
        let q = self.degree()?;
        if q > d {
            return Err(Error::Type(format!("{q}-form on {d} variables")));
        }
        let mut out = LogForm::zero(ring, d, q, prec);
        for t in &self.terms {
            let mut w = LogForm::function(TruncSeries::one(ring, d, prec));
            for f in &t.factors {
                let g = match f {
                    Factor::Dlog(u) => LogForm::dlog(&u.eval(ring, d, prec)?)?,
                    Factor::D(s) => LogForm::function(s.eval(ring, d, prec)?).ext_d()?,
                    Factor::Group(e) => e.eval(ring, d, prec)?,
                };
                w = w.wedge(&g)?;
            }
            let c = ring.from_int(t.coeff);
            out = out.add(&w.scale(c))?;
        }
        Ok(out)
    }
}

impl fmt::Display for MonoExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> =
            self.vars.iter().map(|&(v, k)| if k == 1 { format!("T{v}") } else { format!("T{v}^{k}") }).collect();
        match (self.coeff, vars.is_empty()) {
            (c, true) => write!(f, "{}", c.abs()),
            (1 | -1, false) => write!(f, "{}", vars.join("*")),
            (c, false) => write!(f, "{}*{}", c.abs(), vars.join("*")),
        }
    }
}

impl fmt::Display for SeriesExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, t) in self.terms.iter().enumerate() {
            match (k, t.coeff < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl fmt::Display for UnitExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitExpr::Series(s) => write!(f, "{s}"),
            UnitExpr::Product(fs) => {
                let parts: Vec<String> = fs
                    .iter()
                    .map(|x| match x {
                        UnitFactor::Var(v, 1) => format!("T{v}"),
                        UnitFactor::Var(v, k) => format!("T{v}^{k}"),
                        UnitFactor::Series(s) => format!("({s})"),
                    })
                    .collect();
                write!(f, "{}", parts.join("*"))
            }
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Dlog(u) => write!(f, "dlog({u})"),
            Factor::D(s) => write!(f, "d({s})"),
            Factor::Group(e) => write!(f, "({e})"),
        }
    }
}

impl fmt::Display for FormExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, t) in self.terms.iter().enumerate() {
            match (k, t.coeff < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if t.coeff.abs() != 1 {
                write!(f, "{}*", t.coeff.abs())?;
            }
            let parts: Vec<String> = t.factors.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", parts.join(" ^ "))?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip();
        let rest = &self.s[self.pos..];
        if rest.starts_with(kw.as_bytes()) {
            let mut k = self.pos + kw.len();
            while k < self.s.len() && self.s[k].is_ascii_whitespace() {
                k += 1;
            }
            if self.s.get(k) == Some(&b'(') {
                self.pos += kw.len();
                return true;
            }
        }
        false
    }

    fn int(&mut self) -> Result<i64> {
        self.skip();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        std::str::from_utf8(&self.s[start..self.pos]).expect("ascii").parse().or_else(|_| {
            self.pos = start;
            self.err("integer out of range")
        })
    }

    fn var(&mut self) -> Result<(usize, i64)> {
        self.expect(b'T')?;
        let v = self.int()?;
        if v == 0 {
            return self.err("variables are T1, T2, ...");
        }
        let k = if self.eat(b'^') {
            let neg = self.eat(b'-');
            let k = self.int()?;
            if neg {
                -k
            } else {
                k
            }
        } else {
            1
        };
        Ok((v as usize, k))
    }

    fn mono(&mut self, sign: i64) -> Result<MonoExpr> {
        let mut coeff = sign;
        let mut vars = Vec::new();
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            coeff *= self.int()?;
            if !self.eat(b'*') {
                return Ok(MonoExpr { coeff, vars });
            }
        }
        loop {
            let at = self.pos;
            let (v, k) = self.var()?;
            if k < 0 {
                self.pos = at;
                return self.err("negative exponent in a series");
            }
            vars.push((v, k as u32));
            // a '*' followed by '(' belongs to a unit product
            let save = self.pos;
            if self.eat(b'*') {
                if self.peek() == Some(b'T') {
                    continue;
                }
                self.pos = save;
            }
            return Ok(MonoExpr { coeff, vars });
        }
    }

    fn series(&mut self) -> Result<SeriesExpr> {
        let mut terms = Vec::new();
        let mut sign = if self.eat(b'-') { -1 } else { 1 };
        loop {
            terms.push(self.mono(sign)?);
            if self.eat(b'+') {
                sign = 1;
            } else if self.eat(b'-') {
                sign = -1;
            } else {
                return Ok(SeriesExpr { terms });
            }
        }
    }

    fn unit(&mut self) -> Result<UnitExpr> {
        let start = self.pos;
        let mut fs = Vec::new();
        let mut paren = false;
        loop {
            if self.eat(b'(') {
                fs.push(UnitFactor::Series(self.series()?));
                self.expect(b')')?;
                paren = true;
            } else if self.peek() == Some(b'T') {
                let (v, k) = self.var()?;
                fs.push(UnitFactor::Var(v, k as i32));
            } else {
                break;
            }
            if !self.eat(b'*') {
                break;
            }
        }
        if paren && self.peek() == Some(b')') {
            return Ok(UnitExpr::Product(fs));
        }
        self.pos = start;
        Ok(UnitExpr::Series(self.series()?))
    }

    fn factor(&mut self) -> Result<Factor> {
        if self.keyword("dlog") {
            self.expect(b'(')?;
            let u = self.unit()?;
            self.expect(b')')?;
            Ok(Factor::Dlog(u))
        } else if self.keyword("d") {
            self.expect(b'(')?;
            let s = self.series()?;
            self.expect(b')')?;
            Ok(Factor::D(s))
        } else if self.eat(b'(') {
            let e = self.expr()?;
            self.expect(b')')?;
            Ok(Factor::Group(Box::new(e)))
        } else {
            self.err("expected dlog(...), d(...) or a parenthesised expression")
        }
    }

    fn term(&mut self, sign: i64) -> Result<Term> {
        let mut coeff = sign;
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            coeff *= self.int()?;
            self.expect(b'*')?;
        }
        let mut factors = vec![self.factor()?];
        while self.eat(b'^') {
            factors.push(self.factor()?);
        }
        Ok(Term { coeff, factors })
    }

    fn expr(&mut self) -> Result<FormExpr> {
        let mut terms = Vec::new();
        let mut sign = if self.eat(b'-') { -1 } else { 1 };
        loop {
            terms.push(self.term(sign)?);
            if self.eat(b'+') {
                sign = 1;
            } else if self.eat(b'-') {
                sign = -1;
            } else {
                return Ok(FormExpr { terms });
            }
        }
    }
}

/// Parses and type-checks a form expression.
pub fn parse_form(text: &str) -> Result<FormExpr> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    e.degree()?;
    Ok(e)
}

/// Evaluates `text` in `d` variables over `ring` at weight precision `prec`.
pub fn eval_form(text: &str, ring: Ring, d: usize, prec: u32) -> Result<LogForm> {
    parse_form(text)?.eval(ring, d, prec)
}
