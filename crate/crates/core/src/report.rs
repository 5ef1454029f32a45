//! Run configuration, the four run modes and the JSON report.
//!
//! Reports contain no timestamps, paths of temporary files or anything else
//! that varies between runs, so identical configurations give byte-identical
//! reports. Every warning is recorded once.

use std::collections::BTreeSet;
use std::path::PathBuf;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::braid::{conjugation_invariants, same_element, BraidWord, Sameness};
use crate::cache::{trace_cached, CacheOutcome, TraceCache};
use crate::equation::{self, build_equation_with, coincidence_pair, EquationError, Mode, TrinomialEquation};
use crate::galois::{check_corollaries, preserves_partition, sheet_blocks, GaloisReport};
use crate::paths::{self, LoopSpec};
use crate::predictor::{extract_pair, predict_with, rebased_samples, Coincidence, MonodromyPrediction};
use crate::series::{self, Lifted, SeriesFlag, MAX_TERMS};
use crate::svg;
use crate::tracker::{
    base_roots_with_fallback, collision_pair_at, extract_braid, index_label, roof_tile_check, standard_base_roots, BaseRoots, Labeling,
    RoofTileReport, TrackerControls, TrackerError,
};
use crate::turns;
use crate::twists::{ProjectionSetup, RationalTwist};

pub const REPORT_SCHEMA: &str = "braidnomial-report/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RunMode {
    Predict,
    Verify,
    Galois,
    Diagram,
}

/// Which loops a run covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoopSelection {
    /// Zero, sigma, infinity and every omega loop `0..N`.
    All,
    One(LoopSpec),
}

impl LoopSelection {
    pub fn parse(s: &str) -> Result<Self, paths::PathError> {
        if s.trim() == "all" {
            Ok(LoopSelection::All)
        } else {
            LoopSpec::parse(s).map(LoopSelection::One)
        }
    }

    pub fn name(&self) -> String {
        match self {
            LoopSelection::All => "all".into(),
            LoopSelection::One(s) => s.name(),
        }
    }

    pub fn loops(&self, eq: &TrinomialEquation) -> Vec<LoopSpec> {
        match self {
            LoopSelection::One(s) => vec![s.clone()],
            LoopSelection::All => {
                let mut v = vec![LoopSpec::Zero, LoopSpec::Sigma, LoopSpec::Infinity];
                v.extend((0..eq.big_n() as i64).map(LoopSpec::Omega));
                v
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub equation: (u64, u64, u64, u64),
    pub loops: LoopSelection,
    /// Terms of the series evaluated in the series check.
    pub terms: usize,
    /// Radius of the circles around branch points; `None` is `1e-3` times
    /// their modulus.
    pub delta: Option<f64>,
    pub controls: TrackerControls,
    pub direction: f64,
    pub tracker_only: bool,
    pub mode: RunMode,
    pub report: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub cache: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(equation: (u64, u64, u64, u64), loops: LoopSelection, mode: RunMode) -> Self {
        RunConfig {
            equation,
            loops,
            terms: 40,
            delta: None,
            controls: TrackerControls::default(),
            direction: crate::projection::DEFAULT_DIRECTION,
            tracker_only: false,
            mode,
            report: None,
            svg: None,
            cache: None,
        }
    }

    fn check_controls(&self) -> Result<(), RunError> {
        let bad = |what: &str| Err(RunError::invalid("InvalidControl", format!("{what} out of range")));
        if self.terms == 0 || self.terms > MAX_TERMS {
            return bad("--terms");
        }
        if let Some(d) = self.delta {
            if !(d.is_finite() && d > 0.0) {
                return bad("--delta");
            }
        }
        let c = &self.controls;
        if !(c.tolerance.is_finite() && c.tolerance > 0.0 && c.tolerance < 1e-2) {
            return bad("--tol");
        }
        if !(c.guard > 0.0 && c.max_step > 0.0 && c.min_step > 0.0 && c.newton_max > 0) {
            return bad("tracker controls");
        }
        if !self.direction.is_finite() {
            return bad("--direction");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunError {
    #[serde(skip)]
    pub exit: i32,
    pub name: String,
    pub message: String,
}

impl RunError {
    fn invalid(name: &str, message: String) -> Self {
        RunError { exit: EXIT_INVALID, name: name.into(), message }
    }

    fn numeric(e: &TrackerError) -> Self {
        RunError { exit: EXIT_NUMERIC, name: e.name().into(), message: e.to_string() }
    }
}

impl From<EquationError> for RunError {
    fn from(e: EquationError) -> Self {
        RunError::invalid(e.name(), e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Warning {
    pub code: String,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquationEcho {
    pub input: [u64; 4],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derived: Option<Derived>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Derived {
    pub m: u64,
    pub n: u64,
    pub p: u64,
    pub q: u64,
    #[serde(rename = "N")]
    pub big_n: u64,
    #[serde(rename = "R")]
    pub big_r: String,
    pub branch_modulus: f64,
    pub base_point: Complex64,
    pub delta: f64,
    pub predictor_valid: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    #[serde(rename = "loop")]
    pub loops: String,
    pub terms: usize,
    pub delta: Option<f64>,
    pub controls: TrackerControls,
    pub direction: f64,
    pub tracker_only: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesCheck {
    pub terms: usize,
    /// Largest relative residual of the p- and q-cluster series at the base point.
    pub inner_residual: f64,
    /// Largest relative residual of the series at infinity on the outer circle.
    pub outer_residual: f64,
    pub flags: Vec<SeriesFlag>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PredictionOut {
    pub twists: Vec<RationalTwist>,
    pub permutation: Vec<usize>,
    pub coincidences: Vec<Coincidence>,
    pub artin: Vec<i32>,
    pub exponent_sum: i64,
    pub start_order: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EmpiricalOut {
    pub word: Vec<i32>,
    pub exponent_sum: i64,
    pub permutation: Vec<usize>,
    pub start_order: Vec<usize>,
    pub direction: f64,
    pub closure_error: f64,
    pub samples: usize,
    pub max_residual: f64,
    pub min_separation: f64,
    pub rejected_steps: usize,
    pub precision_fallbacks: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cache: Option<CacheOutcome>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Match,
    MatchUpToConjugation,
    Mismatch,
}

#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub permutation_equal: bool,
    /// Predicted and traced motion extracted along one shared axis after
    /// moving the model onto the true roots.
    pub same_element: bool,
    pub conjugation_invariants_equal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub collision_agrees: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preserves_m_blocks: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roof_tile_stable: Option<bool>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct CollisionOut {
    pub pair: (usize, usize),
    pub sheets: Vec<(usize, usize)>,
    pub distance: f64,
    pub ratio: f64,
    pub delta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted: Option<(u64, u64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LoopReport {
    #[serde(rename = "loop")]
    pub name: String,
    pub prediction: Option<PredictionOut>,
    pub empirical: Option<EmpiricalOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub collision: Option<CollisionOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roof_tile: Option<RoofTileReport>,
    pub comparison: Option<Comparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<RunError>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GaloisSection {
    /// Loops whose permutations generate the group.
    pub generators: Vec<String>,
    pub predicted: Option<GaloisReport>,
    pub empirical: Option<GaloisReport>,
    pub orders_agree: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagramInfo {
    pub source: String,
    pub word: Vec<i32>,
    pub labels: Vec<String>,
    pub positive_crossings: usize,
    pub negative_crossings: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    InvalidInput,
    NumericFailure,
    Mismatch,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub mode: RunMode,
    pub equation: EquationEcho,
    pub config: ConfigEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<SeriesCheck>,
    pub loops: Vec<LoopReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub galois: Option<GaloisSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagram: Option<DiagramInfo>,
    pub warnings: Vec<Warning>,
    pub status: Status,
    pub error: Option<RunError>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok => EXIT_OK,
            Status::InvalidInput => EXIT_INVALID,
            Status::NumericFailure => EXIT_NUMERIC,
            Status::Mismatch => EXIT_MISMATCH,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable") + "\n"
    }
}

/// Result of a run: the report and, in diagram mode, the SVG text.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub svg: Option<String>,
}

#[derive(Default)]
struct Warnings(BTreeSet<Warning>);

impl Warnings {
    fn note(&mut self, code: &str, detail: impl Into<String>) {
        self.0.insert(Warning { code: code.into(), detail: detail.into() });
    }
}

struct Context {
    eq: TrinomialEquation,
    delta: f64,
    setup: ProjectionSetup,
    cache: Option<TraceCache>,
}

fn echo_config(cfg: &RunConfig) -> ConfigEcho {
    ConfigEcho {
        loops: cfg.loops.name(),
        terms: cfg.terms,
        delta: cfg.delta,
        controls: cfg.controls,
        direction: cfg.direction,
        tracker_only: cfg.tracker_only,
    }
}

fn derived(eq: &TrinomialEquation, delta: f64) -> Derived {
    Derived {
        m: eq.m(),
        n: eq.n(),
        p: eq.p(),
        q: eq.q(),
        big_n: eq.big_n(),
        big_r: eq.big_r().to_string(),
        branch_modulus: eq.branch_modulus(),
        base_point: equation::base_point(eq),
        delta,
        predictor_valid: eq.predictor_valid(),
    }
}

fn empty_report(cfg: &RunConfig) -> Report {
    let (a, b, c, d) = cfg.equation;
    Report {
        schema: REPORT_SCHEMA,
        mode: cfg.mode,
        equation: EquationEcho { input: [a, b, c, d], derived: None },
        config: echo_config(cfg),
        series: None,
        loops: Vec::new(),
        galois: None,
        diagram: None,
        warnings: Vec::new(),
        status: Status::Ok,
        error: None,
    }
}

fn setup(cfg: &RunConfig) -> Result<Context, RunError> {
    cfg.check_controls()?;
    let (a, b, c, d) = cfg.equation;
    let needs_predictor = cfg.mode == RunMode::Predict || !cfg.tracker_only;
    let mode = if needs_predictor { Mode::Predictor } else { Mode::TrackerOnly };
    let eq = build_equation_with(a, b, c, d, mode)?;
    let delta = cfg.delta.unwrap_or_else(|| paths::default_delta(&eq));
    if delta >= 0.25 * eq.branch_modulus() {
        return Err(RunError::invalid("InvalidControl", "--delta must stay below a quarter of the branch modulus".into()));
    }
    for spec in cfg.loops.loops(&eq) {
        check_loop(&eq, &spec)?;
    }
    let cache = match &cfg.cache {
        None => None,
        Some(dir) => Some(TraceCache::open(dir).map_err(|e| RunError::invalid("CacheUnavailable", e.to_string()))?),
    };
    let setup = ProjectionSetup { direction: cfg.direction, ..ProjectionSetup::default() };
    Ok(Context { eq, delta, setup, cache })
}

fn check_loop(eq: &TrinomialEquation, spec: &LoopSpec) -> Result<(), RunError> {
    match spec {
        LoopSpec::Omega(l) if *l < 0 || *l > eq.big_n() as i64 => Err(EquationError::IndexOutOfRange(*l).into()),
        LoopSpec::Composite(parts) => parts.iter().try_for_each(|p| check_loop(eq, p)),
        _ => Ok(()),
    }
}

fn series_check(eq: &TrinomialEquation, terms: usize) -> SeriesCheck {
    let base = equation::base_point(eq);
    let inner = Lifted::new(base.norm(), turns::arg(base));
    let outer_r = paths::outer_radius(eq);
    let outer = Lifted::new(outer_r, turns::arg(base));
    let mut flags: Vec<SeriesFlag> = Vec::new();
    let mut worst_in: f64 = 0.0;
    let mut worst_out: f64 = 0.0;
    let mut note = |ev: &series::SeriesEvaluation| {
        for f in &ev.flags {
            if !flags.contains(f) {
                flags.push(*f);
            }
        }
    };
    for t in 0..eq.p() as i64 {
        if let Ok(ev) = series::eval_p_series(eq, t, inner, terms) {
            worst_in = worst_in.max(series::master_residual(eq, inner.value(), ev.value));
            note(&ev);
        }
    }
    for j in 0..eq.q() as i64 {
        if let Ok(ev) = series::eval_q_sheet(eq, j, inner, terms) {
            worst_in = worst_in.max(series::master_residual(eq, inner.value(), ev.value));
            note(&ev);
        }
    }
    for t in 0..eq.n() as i64 {
        if let Ok(ev) = series::eval_inf_series(eq, t, outer, terms) {
            worst_out = worst_out.max(series::master_residual(eq, outer.value(), ev.value));
            note(&ev);
        }
    }
    SeriesCheck { terms, inner_residual: worst_in, outer_residual: worst_out, flags }
}

fn prediction_out(p: &MonodromyPrediction) -> PredictionOut {
    PredictionOut {
        twists: p.twists.twists.clone(),
        permutation: p.permutation.clone(),
        coincidences: p.coincidences.clone(),
        artin: p.artin.letters().to_vec(),
        exponent_sum: p.artin.exponent_sum(),
        start_order: p.start_order.clone(),
    }
}

fn strand_label(eq: &TrinomialEquation, i: usize) -> String {
    let (t, j) = index_label(eq, i);
    if eq.m() == 1 {
        format!("Y_{t}")
    } else {
        format!("Y_{t}^({j})")
    }
}

fn base_roots(cx: &Context, cfg: &RunConfig, warnings: &mut Warnings) -> Result<BaseRoots, RunError> {
    let base = if cfg.tracker_only { base_roots_with_fallback(&cx.eq, &cfg.controls) } else { standard_base_roots(&cx.eq, &cfg.controls) }
        .map_err(|e| RunError::numeric(&e))?;
    if base.labeling == Labeling::Positional {
        warnings.note("PositionalLabels", "series values do not separate the roots; labels follow argument order");
    }
    Ok(base)
}

fn note_equation_warnings(eq: &TrinomialEquation, warnings: &mut Warnings) {
    for v in eq.warnings() {
        warnings.note("GcdConditionViolated", v.to_string());
    }
    let ambiguous: Vec<String> =
        (eq.p() as i64..eq.n() as i64).filter(|&t| series::q_label_ambiguous(eq, t)).map(|t| t.to_string()).collect();
    if !ambiguous.is_empty() {
        warnings.note("QSeriesLabelAmbiguous", format!("literal q-series labels {} coincide", ambiguous.join(",")));
    }
}

struct LoopJob {
    report: LoopReport,
    warnings: Vec<(String, String)>,
}

fn verify_loop(cx: &Context, cfg: &RunConfig, base: &BaseRoots, spec: &LoopSpec) -> LoopJob {
    let eq = &cx.eq;
    let mut warnings = Vec::new();
    let mut report = LoopReport {
        name: spec.name(),
        prediction: None,
        empirical: None,
        collision: None,
        roof_tile: None,
        comparison: None,
        error: None,
    };
    let prediction = if cfg.tracker_only {
        None
    } else {
        match predict_with(eq, spec, &cx.setup) {
            Ok(p) => Some(p),
            Err(e) => {
                report.error = Some(RunError { exit: EXIT_NUMERIC, name: e.name().into(), message: e.to_string() });
                return LoopJob { report, warnings };
            }
        }
    };
    report.prediction = prediction.as_ref().map(prediction_out);
    let traced = paths::loop_path(eq, spec, cx.delta)
        .map_err(TrackerError::from)
        .and_then(|path| trace_cached(cx.cache.as_ref(), eq, &path, &base.roots, &cfg.controls));
    let (traced, cache) = match traced {
        Ok(t) => t,
        Err(e) => {
            report.error = Some(RunError::numeric(&e));
            return LoopJob { report, warnings };
        }
    };
    match &cache {
        Some(CacheOutcome::Replaced(why)) => warnings.push(("CacheEntryReplaced".into(), format!("{}: {why}", spec.name()))),
        Some(CacheOutcome::Unwritable(why)) => warnings.push(("CacheUnwritable".into(), why.clone())),
        _ => {}
    }
    if traced.precision_fallbacks > 0 {
        warnings.push(("PrecisionFallback".into(), format!("{}: {} steps", spec.name(), traced.precision_fallbacks)));
    }
    let emp = match extract_braid(&traced, cfg.direction) {
        Ok(b) => b,
        Err(e) => {
            report.error = Some(RunError::numeric(&e));
            return LoopJob { report, warnings };
        }
    };
    if emp.direction != cfg.direction {
        warnings.push(("ProjectionDirectionChanged".into(), format!("{}: {} turns", spec.name(), emp.direction)));
    }
    report.empirical = Some(EmpiricalOut {
        word: emp.word.letters().to_vec(),
        exponent_sum: emp.word.exponent_sum(),
        permutation: emp.permutation.clone(),
        start_order: emp.start_order.clone(),
        direction: emp.direction,
        closure_error: emp.closure_error,
        samples: traced.samples.len(),
        max_residual: traced.max_residual,
        min_separation: traced.min_separation,
        rejected_steps: traced.rejected_steps,
        precision_fallbacks: traced.precision_fallbacks,
        cache,
    });

    let m = eq.m() as usize;
    let mut collision_agrees = None;
    let mut roof_stable = None;
    if let LoopSpec::Omega(ell) = spec {
        match collision_pair_at(eq, base, *ell, cx.delta, &cfg.controls) {
            Ok(c) => {
                if c.delta < cx.delta {
                    warnings.push(("CollisionRadiusReduced".into(), format!("{}: delta {}", spec.name(), c.delta)));
                }
                let predicted = if eq.predictor_valid() { coincidence_pair(eq, *ell).ok() } else { None };
                if let Some((t, u)) = predicted {
                    collision_agrees = Some((t.min(u) as usize, t.max(u) as usize) == c.pair);
                }
                report.collision =
                    Some(CollisionOut { pair: c.pair, sheets: c.sheets, distance: c.distance, ratio: c.ratio, delta: c.delta, predicted });
            }
            Err(e) => {
                report.error = Some(RunError::numeric(&e));
                return LoopJob { report, warnings };
            }
        }
        if m > 1 {
            match roof_tile_check(eq, base, *ell, cx.delta, &cfg.controls) {
                Ok(r) => {
                    roof_stable = Some(r.order_changes == 0);
                    report.roof_tile = Some(r);
                }
                Err(e) => {
                    report.error = Some(RunError::numeric(&e));
                    return LoopJob { report, warnings };
                }
            }
        }
    }
    let preserves = (m > 1).then(|| preserves_partition(std::slice::from_ref(&emp.permutation), &sheet_blocks(eq)));

    if let Some(pred) = &prediction {
        let rebased = rebased_samples(pred, &base.roots);
        let same = match extract_pair(&traced.root_matrix(), &rebased, cfg.direction) {
            Ok((a, b)) => same_element(&a.word, &b.word).map(|s| s == Sameness::EqualByInvariants).unwrap_or(false),
            Err(e) => {
                warnings.push(("ComparisonProjectionFailed".into(), format!("{}: {e}", spec.name())));
                false
            }
        };
        let permutation_equal = pred.permutation == emp.permutation;
        let conj = conjugation_invariants(&pred.artin) == conjugation_invariants(&emp.word);
        let side_checks_hold = collision_agrees != Some(false) && preserves != Some(false) && roof_stable != Some(false);
        let verdict = if permutation_equal && same && side_checks_hold {
            Verdict::Match
        } else if conj && side_checks_hold {
            Verdict::MatchUpToConjugation
        } else {
            Verdict::Mismatch
        };
        report.comparison = Some(Comparison {
            permutation_equal,
            same_element: same,
            conjugation_invariants_equal: conj,
            collision_agrees,
            preserves_m_blocks: preserves,
            roof_tile_stable: roof_stable,
            verdict,
        });
    } else if preserves == Some(false) || roof_stable == Some(false) {
        warnings.push(("BlockStructureBroken".into(), spec.name()));
    }
    LoopJob { report, warnings }
}

/// Loops whose permutations generate the monodromy group.
pub fn generator_loops(eq: &TrinomialEquation) -> Vec<LoopSpec> {
    let mut v = vec![LoopSpec::Zero, LoopSpec::Infinity];
    v.extend((0..eq.big_n() as i64).map(LoopSpec::Omega));
    v
}

fn galois_section(eq: &TrinomialEquation, predicted: Option<Vec<Vec<usize>>>, empirical: Option<Vec<Vec<usize>>>) -> GaloisSection {
    let predicted = predicted.and_then(|g| check_corollaries(eq, &g).ok());
    let empirical = empirical.and_then(|g| check_corollaries(eq, &g).ok());
    let orders_agree = match (&predicted, &empirical) {
        (Some(a), Some(b)) => Some(a.order == b.order),
        _ => None,
    };
    GaloisSection { generators: generator_loops(eq).iter().map(LoopSpec::name).collect(), predicted, empirical, orders_agree }
}

fn fail(mut report: Report, err: RunError) -> Outcome {
    report.status = match err.exit {
        EXIT_INVALID => Status::InvalidInput,
        EXIT_MISMATCH => Status::Mismatch,
        _ => Status::NumericFailure,
    };
    report.error = Some(err);
    Outcome { report, svg: None }
}

fn finish(mut report: Report, warnings: Warnings) -> Report {
    report.warnings = warnings.0.into_iter().collect();
    let first_error = report.loops.iter().find_map(|l| l.error.clone());
    let mismatch = report.loops.iter().any(|l| l.comparison.as_ref().is_some_and(|c| c.verdict == Verdict::Mismatch))
        || report.galois.as_ref().is_some_and(|g| g.orders_agree == Some(false));
    if let Some(e) = first_error {
        report.status = if e.exit == EXIT_INVALID { Status::InvalidInput } else { Status::NumericFailure };
        report.error = Some(e);
    } else if mismatch {
        report.status = Status::Mismatch;
    }
    report
}

/// Predictions only.
pub fn cmd_predict(cfg: &RunConfig) -> Outcome {
    let mut report = empty_report(cfg);
    let cx = match setup(cfg) {
        Ok(cx) => cx,
        Err(e) => return fail(report, e),
    };
    let eq = &cx.eq;
    report.equation.derived = Some(derived(eq, cx.delta));
    let mut warnings = Warnings::default();
    note_equation_warnings(eq, &mut warnings);
    report.series = Some(series_check(eq, cfg.terms));
    for spec in cfg.loops.loops(eq) {
        let mut lr = LoopReport {
            name: spec.name(),
            prediction: None,
            empirical: None,
            collision: None,
            roof_tile: None,
            comparison: None,
            error: None,
        };
        match predict_with(eq, &spec, &cx.setup) {
            Ok(p) => lr.prediction = Some(prediction_out(&p)),
            Err(e) => lr.error = Some(RunError { exit: EXIT_NUMERIC, name: e.name().into(), message: e.to_string() }),
        }
        report.loops.push(lr);
    }
    Outcome { report: finish(report, warnings), svg: None }
}

/// Predict, trace, extract and compare every selected loop.
pub fn cmd_verify(cfg: &RunConfig) -> Outcome {
    let mut report = empty_report(cfg);
    let cx = match setup(cfg) {
        Ok(cx) => cx,
        Err(e) => return fail(report, e),
    };
    let eq = &cx.eq;
    report.equation.derived = Some(derived(eq, cx.delta));
    let mut warnings = Warnings::default();
    note_equation_warnings(eq, &mut warnings);
    if !cfg.tracker_only {
        report.series = Some(series_check(eq, cfg.terms));
    }
    let base = match base_roots(&cx, cfg, &mut warnings) {
        Ok(b) => b,
        Err(e) => {
            report.warnings = warnings.0.into_iter().collect();
            return fail(report, e);
        }
    };
    let specs = cfg.loops.loops(eq);
    let jobs: Vec<LoopJob> = specs.par_iter().map(|s| verify_loop(&cx, cfg, &base, s)).collect();
    for job in jobs {
        for (code, detail) in job.warnings {
            warnings.note(&code, detail);
        }
        report.loops.push(job.report);
    }
    if cfg.loops == LoopSelection::All {
        let perms = |f: &dyn Fn(&LoopReport) -> Option<Vec<usize>>| -> Option<Vec<Vec<usize>>> {
            let gens: Vec<String> = generator_loops(eq).iter().map(LoopSpec::name).collect();
            gens.iter().map(|g| report.loops.iter().find(|l| &l.name == g).and_then(f)).collect()
        };
        let predicted = perms(&|l| l.prediction.as_ref().map(|p| p.permutation.clone()));
        let empirical = perms(&|l| l.empirical.as_ref().map(|e| e.permutation.clone()));
        report.galois = Some(galois_section(eq, predicted, empirical));
    }
    Outcome { report: finish(report, warnings), svg: None }
}

/// Monodromy group from predicted and traced generators.
pub fn cmd_galois(cfg: &RunConfig) -> Outcome {
    let mut report = empty_report(cfg);
    let cx = match setup(cfg) {
        Ok(cx) => cx,
        Err(e) => return fail(report, e),
    };
    let eq = &cx.eq;
    report.equation.derived = Some(derived(eq, cx.delta));
    let mut warnings = Warnings::default();
    note_equation_warnings(eq, &mut warnings);
    let gens = generator_loops(eq);
    let predicted = if cfg.tracker_only {
        None
    } else {
        let p: Result<Vec<Vec<usize>>, _> = gens.iter().map(|s| predict_with(eq, s, &cx.setup).map(|p| p.permutation)).collect();
        match p {
            Ok(p) => Some(p),
            Err(e) => return fail(report, RunError { exit: EXIT_NUMERIC, name: e.name().into(), message: e.to_string() }),
        }
    };
    let base = match base_roots(&cx, cfg, &mut warnings) {
        Ok(b) => b,
        Err(e) => return fail(report, e),
    };
    let traced: Result<Vec<Vec<usize>>, TrackerError> = gens
        .par_iter()
        .map(|s| {
            let path = paths::loop_path(eq, s, cx.delta)?;
            let (t, _) = trace_cached(cx.cache.as_ref(), eq, &path, &base.roots, &cfg.controls)?;
            Ok(extract_braid(&t, cfg.direction)?.permutation)
        })
        .collect();
    let empirical = match traced {
        Ok(p) => p,
        Err(e) => return fail(report, RunError::numeric(&e)),
    };
    report.galois = Some(galois_section(eq, predicted, Some(empirical)));
    Outcome { report: finish(report, warnings), svg: None }
}

/// Braid diagram of the selected loop: the predicted word, or the traced one
/// with `--tracker-only`.
pub fn cmd_diagram(cfg: &RunConfig) -> Outcome {
    let mut report = empty_report(cfg);
    let cx = match setup(cfg) {
        Ok(cx) => cx,
        Err(e) => return fail(report, e),
    };
    let eq = &cx.eq;
    report.equation.derived = Some(derived(eq, cx.delta));
    let mut warnings = Warnings::default();
    note_equation_warnings(eq, &mut warnings);
    let spec = match &cfg.loops {
        LoopSelection::One(s) => s.clone(),
        LoopSelection::All => return fail(report, RunError::invalid("UnknownLoop", "a diagram needs a single loop or a composite".into())),
    };
    let (source, word, order): (String, BraidWord, Vec<usize>) = if cfg.tracker_only {
        let base = match base_roots(&cx, cfg, &mut warnings) {
            Ok(b) => b,
            Err(e) => return fail(report, e),
        };
        let res = paths::loop_path(eq, &spec, cx.delta)
            .map_err(TrackerError::from)
            .and_then(|path| trace_cached(cx.cache.as_ref(), eq, &path, &base.roots, &cfg.controls))
            .and_then(|(t, _)| extract_braid(&t, cfg.direction));
        match res {
            Ok(b) => ("traced".into(), b.word, b.start_order),
            Err(e) => return fail(report, RunError::numeric(&e)),
        }
    } else {
        match predict_with(eq, &spec, &cx.setup) {
            Ok(p) => ("predicted".into(), p.artin, p.start_order),
            Err(e) => return fail(report, RunError { exit: EXIT_NUMERIC, name: e.name().into(), message: e.to_string() }),
        }
    };
    let labels: Vec<String> = order.iter().map(|&i| strand_label(eq, i)).collect();
    let title = format!("{} {} ({})", eq.tag(), spec.name(), source);
    let text = svg::render_braid(&word, &labels, &title);
    let (pos, neg) = svg::count_crossings(&text);
    report.diagram = Some(DiagramInfo { source, word: word.letters().to_vec(), labels, positive_crossings: pos, negative_crossings: neg });
    Outcome { report: finish(report, warnings), svg: Some(text) }
}

pub fn run(cfg: &RunConfig) -> Outcome {
    match cfg.mode {
        RunMode::Predict => cmd_predict(cfg),
        RunMode::Verify => cmd_verify(cfg),
        RunMode::Galois => cmd_galois(cfg),
        RunMode::Diagram => cmd_diagram(cfg),
    }
}
