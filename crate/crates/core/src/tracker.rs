//! Numerical continuation of all roots along a path, root labeling at the
//! base point, braid extraction and collision detection.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::braid::{BraidError, BraidWord};
use crate::dd::DdComplex;
use crate::equation::{collision_center, TrinomialEquation};
use crate::paths::{self, LoopSpec, PathError, PathSpec, Piece};
use crate::projection::{self, min_separation, Extracted, ProjectionError};
use crate::series::{eval_inf_series, Lifted, SeriesError, MAX_TERMS};
use crate::turns;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TrackerError {
    #[error("step size collapsed near X = {0}")]
    StepCollapse(Complex64),
    #[error("Newton iteration diverged near X = {0}")]
    ResidualBlowup(Complex64),
    #[error("series values do not identify the roots unambiguously (mismatch {0:e})")]
    LabelAmbiguity(f64),
    #[error("root finder did not converge at X = {0}")]
    RootFinder(Complex64),
    #[error("no isolated colliding pair near the branch point (distance ratio {0:.3})")]
    AmbiguousCollision(f64),
    #[error("endpoint roots do not match the starting roots")]
    OpenLoop,
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Projection(#[from] ProjectionError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Braid(#[from] BraidError),
}

impl TrackerError {
    pub fn name(&self) -> &'static str {
        match self {
            TrackerError::StepCollapse(_) => "StepCollapse",
            TrackerError::ResidualBlowup(_) => "ResidualBlowup",
            TrackerError::LabelAmbiguity(_) => "LabelAmbiguity",
            TrackerError::RootFinder(_) => "RootFinder",
            TrackerError::AmbiguousCollision(_) => "AmbiguousCollision",
            TrackerError::OpenLoop => "OpenLoop",
            TrackerError::Path(_) => "PathError",
            TrackerError::Projection(ProjectionError::DegenerateProjection) => "DegenerateProjection",
            TrackerError::Projection(ProjectionError::UnresolvedCrossing(..)) => "UnresolvedCrossing",
            TrackerError::Projection(_) => "ProjectionError",
            TrackerError::Series(_) => "SeriesError",
            TrackerError::Braid(_) => "BraidError",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackerControls {
    /// Relative residual every accepted root must reach.
    pub tolerance: f64,
    pub newton_max: usize,
    /// A step is accepted only if no root moves more than `guard` times the
    /// smallest root separation at the start of the step.
    pub guard: f64,
    /// Largest step, as a fraction of one path piece.
    pub max_step: f64,
    /// Smallest step before the double-double retry, then before giving up.
    pub min_step: f64,
}

impl Default for TrackerControls {
    fn default() -> Self {
        TrackerControls { tolerance: 1e-10, newton_max: 20, guard: 0.3, max_step: 1.0 / 32.0, min_step: 1e-12 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSample {
    #[serde(rename = "X")]
    pub x: Complex64,
    pub roots: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracedPath {
    pub samples: Vec<TraceSample>,
    pub max_residual: f64,
    pub min_separation: f64,
    pub rejected_steps: usize,
    pub precision_fallbacks: usize,
}

impl TracedPath {
    pub fn root_matrix(&self) -> Vec<Vec<Complex64>> {
        self.samples.iter().map(|s| s.roots.clone()).collect()
    }

    pub fn end_roots(&self) -> &[Complex64] {
        &self.samples[self.samples.len() - 1].roots
    }

    /// Concatenate a trace that starts where this one ends.
    pub fn then(mut self, other: TracedPath) -> TracedPath {
        self.samples.extend(other.samples.into_iter().skip(1));
        self.max_residual = self.max_residual.max(other.max_residual);
        self.min_separation = self.min_separation.min(other.min_separation);
        self.rejected_steps += other.rejected_steps;
        self.precision_fallbacks += other.precision_fallbacks;
        self
    }
}

fn eval_dd(eq: &TrinomialEquation, x: Complex64, y: Complex64) -> Complex64 {
    let (x, y) = (DdComplex::from_c64(x), DdComplex::from_c64(y));
    let nt = eq.n_total() as u32;
    let pt = eq.p_total() as u32;
    (y.powu(nt) - x.powu(eq.g() as u32) * y.powu(pt) + x.powu(eq.r() as u32)).to_c64()
}

enum Corrected {
    Root(Complex64),
    NoConvergence,
    Diverged,
}

fn newton(eq: &TrinomialEquation, x: Complex64, y0: Complex64, ctl: &TrackerControls, extended: bool) -> Corrected {
    let mut y = y0;
    for _ in 0..ctl.newton_max {
        let f = if extended { eval_dd(eq, x, y) } else { eq.eval(x, y) };
        let dy = f / eq.eval_dy(x, y);
        if !dy.re.is_finite() || !dy.im.is_finite() {
            return Corrected::Diverged;
        }
        y -= dy;
        if dy.norm() <= 1e-15 * y.norm() {
            break;
        }
    }
    let f = if extended { eval_dd(eq, x, y) } else { eq.eval(x, y) };
    let scale = eq.residual_scale(x, y);
    let rr = if scale == 0.0 { 0.0 } else { f.norm() / scale };
    if !rr.is_finite() {
        Corrected::Diverged
    } else if rr <= ctl.tolerance {
        Corrected::Root(y)
    } else {
        Corrected::NoConvergence
    }
}

/// Predictor-corrector continuation of the roots `start` along one piece.
fn trace_piece(
    eq: &TrinomialEquation,
    piece: &Piece,
    start: &[Complex64],
    ctl: &TrackerControls,
    out: &mut TracedPath,
) -> Result<(), TrackerError> {
    if piece.length() == 0.0 {
        return Ok(());
    }
    let mut s = 0.0;
    let mut h = ctl.max_step;
    let mut cur = start.to_vec();
    let mut extended = false;
    let mut floor = ctl.min_step;
    while s < 1.0 {
        let step = h.min(1.0 - s);
        let x0 = piece.at(s);
        let x1 = if s + step >= 1.0 { piece.end() } else { piece.at(s + step) };
        let sep0 = min_separation(&cur);
        let mut next = Vec::with_capacity(cur.len());
        let mut ok = true;
        for &y in &cur {
            let slope = -eq.eval_dx(x0, y) / eq.eval_dy(x0, y);
            let pred = y + slope * (x1 - x0);
            match newton(eq, x1, pred, ctl, extended) {
                Corrected::Root(z) if (z - y).norm() <= ctl.guard * sep0 => next.push(z),
                Corrected::Diverged if step <= floor => return Err(TrackerError::ResidualBlowup(x1)),
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            let sep1 = min_separation(&next);
            if sep1 > 0.0 {
                for &z in &next {
                    out.max_residual = out.max_residual.max(eq.relative_residual(x1, z));
                }
                out.min_separation = out.min_separation.min(sep1);
                out.samples.push(TraceSample { x: x1, roots: next.clone() });
                cur = next;
                s += step;
                h = (step * 1.5).min(ctl.max_step);
                continue;
            }
        }
        out.rejected_steps += 1;
        h = step / 2.0;
        if h < floor {
            if extended {
                return Err(TrackerError::StepCollapse(x0));
            }
            // retry the rest of this piece with extended-precision residuals
            extended = true;
            out.precision_fallbacks += 1;
            floor = ctl.min_step * 1e-3;
            h = step;
        }
    }
    Ok(())
}

/// Follow the roots `start` (the roots at the path's start, in label order)
/// along the whole path. The returned samples keep the same order.
pub fn trace(eq: &TrinomialEquation, path: &PathSpec, start: &[Complex64], ctl: &TrackerControls) -> Result<TracedPath, TrackerError> {
    let x0 = path.start();
    let mut out = TracedPath {
        samples: vec![TraceSample { x: x0, roots: start.to_vec() }],
        max_residual: start.iter().map(|&y| eq.relative_residual(x0, y)).fold(0.0, f64::max),
        min_separation: min_separation(start),
        rejected_steps: 0,
        precision_fallbacks: 0,
    };
    for piece in path.pieces() {
        let cur = out.end_roots().to_vec();
        trace_piece(eq, piece, &cur, ctl, &mut out)?;
    }
    Ok(out)
}

/// All roots of `f(x, .)` by the Aberth-Ehrlich iteration, polished by Newton.
pub fn all_roots(eq: &TrinomialEquation, x: Complex64) -> Result<Vec<Complex64>, TrackerError> {
    let d = eq.degree();
    // start on a circle of the geometric-mean modulus, slightly off-symmetric
    let rho = x.norm().powf(eq.r() as f64 / d as f64).max(1e-300);
    let mut z: Vec<Complex64> = (0..d).map(|k| turns::polar(rho * (1.0 + 0.05 * (k % 3) as f64), (k as f64 + 0.3) / d as f64)).collect();
    let mut converged = false;
    for _ in 0..2000 {
        let mut worst: f64 = 0.0;
        for k in 0..d {
            let w = eq.eval(x, z[k]) / eq.eval_dy(x, z[k]);
            let s: Complex64 = (0..d).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let corr = w / (Complex64::new(1.0, 0.0) - w * s);
            if corr.re.is_finite() && corr.im.is_finite() {
                z[k] -= corr;
                worst = worst.max(corr.norm() / z[k].norm().max(1e-300));
            }
        }
        if worst < 1e-14 {
            converged = true;
            break;
        }
    }
    let ctl = TrackerControls { newton_max: 50, ..TrackerControls::default() };
    for y in z.iter_mut() {
        match newton(eq, x, *y, &ctl, false) {
            Corrected::Root(r) => *y = r,
            _ if converged => {}
            _ => return Err(TrackerError::RootFinder(x)),
        }
    }
    if min_separation(&z) <= 1e-9 * rho || z.iter().any(|&y| eq.relative_residual(x, y) > 1e-10) {
        return Err(TrackerError::RootFinder(x));
    }
    Ok(z)
}

/// Label of a root of the full equation: master label `t` in `0..n` and
/// sheet `j` in `0..m`. Roots are stored at index `t * m + j`.
pub fn label_index(eq: &TrinomialEquation, t: usize, j: usize) -> usize {
    t * eq.m() as usize + j
}

pub fn index_label(eq: &TrinomialEquation, i: usize) -> (usize, usize) {
    (i / eq.m() as usize, i % eq.m() as usize)
}

/// Labeled roots at the base point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaseRoots {
    pub base: Complex64,
    /// Roots in label order.
    pub roots: Vec<Complex64>,
    /// Point on the base ray, far out, where the labels were read off.
    pub outer_point: Complex64,
    /// Series values at the outer point (label order).
    pub series_values: Vec<Complex64>,
    /// Largest distance between a series value and its matched root,
    /// relative to the smallest root gap there.
    pub label_mismatch: f64,
    pub labeling: Labeling,
}

/// How the base roots got their names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Labeling {
    /// Matched to the outer series values.
    Series,
    /// Ordered by argument at the outer point; the names then carry no
    /// meaning beyond being stable.
    Positional,
}

fn series_terms(eq: &TrinomialEquation) -> usize {
    (40 + 30 * eq.q() as usize).min(MAX_TERMS)
}

/// Series values of every labeled root on the lifted point `x` (|X^N/R| > 1).
pub fn outer_series_values(eq: &TrinomialEquation, x: Lifted) -> Result<Vec<Complex64>, TrackerError> {
    let m = eq.m() as usize;
    let mut out = Vec::with_capacity(eq.degree());
    for t in 0..eq.n() as i64 {
        let tv = eval_inf_series(eq, t, x, series_terms(eq))?.value;
        let (modulus, a) = (tv.norm().powf(1.0 / m as f64), turns::arg(tv));
        for j in 0..m {
            out.push(turns::polar(modulus, (j as f64 + a) / m as f64));
        }
    }
    Ok(out)
}

/// Find every root at the outer point of `base`'s ray with an independent
/// root finder, name them by the nearest series value, and carry them in to
/// `base` along the ray.
pub fn label_base_roots(eq: &TrinomialEquation, base: Complex64, ctl: &TrackerControls) -> Result<BaseRoots, TrackerError> {
    let a = turns::arg(base);
    let outer = paths::outer_radius(eq);
    let outer_point = turns::polar(outer, a);
    let values = outer_series_values(eq, Lifted::new(outer, a))?;
    let found = all_roots(eq, outer_point)?;
    let gap = min_separation(&found);
    let mut taken = vec![false; found.len()];
    let mut ordered = Vec::with_capacity(found.len());
    let mut mismatch: f64 = 0.0;
    for v in &values {
        let (k, d) = found.iter().enumerate().map(|(k, z)| (k, (z - v).norm())).min_by(|a, b| a.1.total_cmp(&b.1)).expect("nonempty");
        mismatch = mismatch.max(d / gap);
        if taken[k] || d >= 0.1 * gap {
            return Err(TrackerError::LabelAmbiguity(d / gap));
        }
        taken[k] = true;
        ordered.push(found[k]);
    }
    let ray = PathSpec::open(eq, vec![Piece::Segment { from: outer_point, to: base }])?;
    let traced = trace(eq, &ray, &ordered, ctl)?;
    Ok(BaseRoots {
        base,
        roots: traced.end_roots().to_vec(),
        outer_point,
        series_values: values,
        label_mismatch: mismatch,
        labeling: Labeling::Series,
    })
}

/// Labeled roots at the standard base point.
pub fn standard_base_roots(eq: &TrinomialEquation, ctl: &TrackerControls) -> Result<BaseRoots, TrackerError> {
    label_base_roots(eq, crate::equation::base_point(eq), ctl)
}

/// Name the roots at the outer point by increasing argument (measured from
/// the ray), then by modulus, and carry them in to `base`.
pub fn positional_base_roots(eq: &TrinomialEquation, base: Complex64, ctl: &TrackerControls) -> Result<BaseRoots, TrackerError> {
    let a = turns::arg(base);
    let outer_point = turns::polar(paths::outer_radius(eq), a);
    let mut found = all_roots(eq, outer_point)?;
    let key = |z: &Complex64| (turns::reduce(turns::arg(*z) - a / eq.m() as f64) + 0.5, z.norm());
    found.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap_or(std::cmp::Ordering::Equal));
    let ray = PathSpec::open(eq, vec![Piece::Segment { from: outer_point, to: base }])?;
    let traced = trace(eq, &ray, &found, ctl)?;
    Ok(BaseRoots {
        base,
        roots: traced.end_roots().to_vec(),
        outer_point,
        series_values: Vec::new(),
        label_mismatch: f64::NAN,
        labeling: Labeling::Positional,
    })
}

/// Series labels when they are unambiguous, positional labels otherwise.
pub fn base_roots_with_fallback(eq: &TrinomialEquation, ctl: &TrackerControls) -> Result<BaseRoots, TrackerError> {
    let base = crate::equation::base_point(eq);
    match label_base_roots(eq, base, ctl) {
        Err(TrackerError::LabelAmbiguity(_)) | Err(TrackerError::Series(_)) => positional_base_roots(eq, base, ctl),
        other => other,
    }
}

/// Braid word and label permutation of a traced closed loop.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalBraid {
    pub word: BraidWord,
    /// `permutation[label]` = label of the root it ends on.
    pub permutation: Vec<usize>,
    /// Labels by position along the projection axis at the start.
    pub start_order: Vec<usize>,
    pub direction: f64,
    pub closure_error: f64,
}

pub fn extract_braid(traced: &TracedPath, direction: f64) -> Result<EmpiricalBraid, TrackerError> {
    let Extracted { word, start_order, direction, .. } = projection::extract(&traced.root_matrix(), direction)?;
    let start = &traced.samples[0].roots;
    let end = traced.end_roots();
    let sep = min_separation(start);
    let mut permutation = Vec::with_capacity(start.len());
    let mut closure: f64 = 0.0;
    for z in end {
        let (k, d) = start.iter().enumerate().map(|(k, s)| (k, (s - z).norm())).min_by(|a, b| a.1.total_cmp(&b.1)).expect("nonempty");
        if d > 1e-6 * sep.max(1e-300) {
            return Err(TrackerError::OpenLoop);
        }
        closure = closure.max(d);
        permutation.push(k);
    }
    let mut seen = vec![false; permutation.len()];
    for &k in &permutation {
        if std::mem::replace(&mut seen[k], true) {
            return Err(TrackerError::OpenLoop);
        }
    }
    Ok(EmpiricalBraid { word: word.free_reduce(), permutation, start_order, direction, closure_error: closure })
}

/// Trace a loop from labeled base roots.
pub fn trace_loop(
    eq: &TrinomialEquation,
    base: &BaseRoots,
    spec: &LoopSpec,
    delta: f64,
    ctl: &TrackerControls,
) -> Result<TracedPath, TrackerError> {
    let path = paths::loop_path(eq, spec, delta)?;
    trace(eq, &path, &base.roots, ctl)
}

/// Trace several loops in parallel.
pub fn trace_loops(
    eq: &TrinomialEquation,
    base: &BaseRoots,
    specs: &[LoopSpec],
    delta: f64,
    ctl: &TrackerControls,
) -> Vec<Result<TracedPath, TrackerError>> {
    specs.par_iter().map(|s| trace_loop(eq, base, s, delta, ctl)).collect()
}

/// The pair of roots that collide at a branch point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollisionReport {
    pub ell: i64,
    /// Master labels of the colliding pair.
    pub pair: (usize, usize),
    /// For each sheet `j` of the first root, the sheet of its partner.
    pub sheets: Vec<(usize, usize)>,
    pub distance: f64,
    /// Colliding distance over the next-smallest distance.
    pub ratio: f64,
    pub delta: f64,
}

/// Carry the base roots to the small circle around the branch point at
/// argument `ell / N` and find the pair that has nearly collided. The radius
/// is halved up to four times while the nearest pair is not isolated.
pub fn collision_pair_at(
    eq: &TrinomialEquation,
    base: &BaseRoots,
    ell: i64,
    delta: f64,
    ctl: &TrackerControls,
) -> Result<CollisionReport, TrackerError> {
    let m = eq.m() as usize;
    let mut d = delta;
    let mut ratio = f64::INFINITY;
    for _ in 0..5 {
        let stick = PathSpec::open(eq, paths::omega_stick(eq, ell, d)?)?;
        let traced = trace(eq, &stick, &base.roots, ctl)?;
        let z = traced.end_roots();
        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
        for a in 0..z.len() {
            for b in a + 1..z.len() {
                pairs.push(((z[a] - z[b]).norm(), a, b));
            }
        }
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        let masters = |a: usize, b: usize| {
            let (ta, tb) = (a / m, b / m);
            (ta.min(tb), ta.max(tb))
        };
        let key = masters(pairs[0].1, pairs[0].2);
        let colliding: Vec<&(f64, usize, usize)> = pairs.iter().filter(|p| masters(p.1, p.2) == key).take(m).collect();
        let worst = colliding.iter().map(|p| p.0).fold(0.0, f64::max);
        let next = pairs.iter().filter(|p| masters(p.1, p.2) != key).map(|p| p.0).next().unwrap_or(f64::INFINITY);
        // the m sheet pairs must use each sheet exactly once
        let mut first_sheets: Vec<usize> = colliding.iter().map(|p| if p.1 / m == key.0 { p.1 % m } else { p.2 % m }).collect();
        first_sheets.sort_unstable();
        first_sheets.dedup();
        ratio = worst / next;
        if key.0 != key.1 && ratio < 0.1 && first_sheets.len() == m {
            let mut sheets: Vec<(usize, usize)> =
                colliding.iter().map(|p| if p.1 / m == key.0 { (p.1 % m, p.2 % m) } else { (p.2 % m, p.1 % m) }).collect();
            sheets.sort_unstable();
            return Ok(CollisionReport { ell, pair: key, sheets, distance: worst, ratio, delta: d });
        }
        d /= 2.0;
    }
    Err(TrackerError::AmbiguousCollision(ratio))
}

/// Angular ordering of the sheets of the colliding roots along the small
/// circle around a branch point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoofTileReport {
    pub ell: i64,
    pub pair: (usize, usize),
    pub samples: usize,
    /// For each colliding master, its sheets in cyclic order of the argument
    /// about the point where each sheet collides, at the first sample.
    pub initial_orders: Vec<Vec<usize>>,
    /// Sample steps at which one of those cyclic orders changed.
    pub order_changes: usize,
    /// The same count with every sheet measured about one fixed collision
    /// point (each choice of point counted separately). Only a diagnostic:
    /// the sheet nearest the point sweeps half a turn past the others.
    pub fixed_center_changes: usize,
}

fn cyclic_order(angles: &[f64]) -> Vec<usize> {
    let mut keyed: Vec<(f64, usize)> = angles.iter().enumerate().map(|(j, a)| (turns::reduce(*a), j)).collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut order: Vec<usize> = keyed.into_iter().map(|k| k.1).collect();
    let lead = order.iter().position(|&j| j == 0).unwrap_or(0);
    order.rotate_left(lead);
    order
}

fn changes(orders: &[Vec<Vec<usize>>]) -> usize {
    orders.windows(2).map(|w| w[0].iter().zip(&w[1]).filter(|(a, b)| a != b).count()).sum()
}

/// Trace once around the small circle about the branch point at argument
/// `ell / N` and watch the sheets of the colliding roots turn about their
/// collision points.
pub fn roof_tile_check(
    eq: &TrinomialEquation,
    base: &BaseRoots,
    ell: i64,
    delta: f64,
    ctl: &TrackerControls,
) -> Result<RoofTileReport, TrackerError> {
    let m = eq.m() as usize;
    let hit = collision_pair_at(eq, base, ell, delta, ctl)?;
    let d = hit.delta;
    let stick = PathSpec::open(eq, paths::omega_stick(eq, ell, d)?)?;
    let approach = trace(eq, &stick, &base.roots, ctl)?;
    let omega = turns::polar(eq.branch_modulus(), ell as f64 / eq.big_n() as f64);
    let start = turns::arg(stick.pieces().last().expect("nonempty").end() - omega);
    let circle = PathSpec::open(eq, vec![Piece::Arc { center: omega, radius: d, start, sweep: 1.0 }])?;
    let around = trace(eq, &circle, approach.end_roots(), ctl)?;
    let center = collision_center(eq, omega);
    let (modulus, a) = (center.norm().powf(1.0 / m as f64), turns::arg(center));
    let centers: Vec<Complex64> = (0..m).map(|k| turns::polar(modulus, (a + k as f64) / m as f64)).collect();
    let masters = [hit.pair.0, hit.pair.1];
    // collision point of each sheet, read off at the first sample
    let first = &around.samples[0].roots;
    let own: Vec<Complex64> = masters
        .iter()
        .flat_map(|&t| (0..m).map(move |j| t * m + j))
        .map(|i| *centers.iter().min_by(|x, y| (first[i] - **x).norm().total_cmp(&(first[i] - **y).norm())).expect("nonempty"))
        .collect();
    let mut own_orders = Vec::with_capacity(around.samples.len());
    let mut fixed_orders = Vec::with_capacity(around.samples.len());
    for s in &around.samples {
        let mut o = Vec::new();
        let mut f = Vec::new();
        for (k, &t) in masters.iter().enumerate() {
            let sheets = &s.roots[t * m..(t + 1) * m];
            let angles: Vec<f64> = sheets.iter().enumerate().map(|(j, z)| turns::arg(z - own[k * m + j])).collect();
            o.push(cyclic_order(&angles));
            for c in &centers {
                let angles: Vec<f64> = sheets.iter().map(|z| turns::arg(z - c)).collect();
                f.push(cyclic_order(&angles));
            }
        }
        own_orders.push(o);
        fixed_orders.push(f);
    }
    Ok(RoofTileReport {
        ell,
        pair: hit.pair,
        samples: own_orders.len(),
        initial_orders: own_orders[0].clone(),
        order_changes: changes(&own_orders),
        fixed_center_changes: changes(&fixed_orders),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equation::build_equation;

    #[test]
    fn aberth_finds_all_roots() {
        let eq = build_equation(5, 3, 2, 7).unwrap();
        let x = turns::polar(1.3, 0.1);
        let z = all_roots(&eq, x).unwrap();
        assert_eq!(z.len(), 5);
        // product of roots is -X^r for odd degree with unit leading coefficient
        let prod: Complex64 = z.iter().product();
        assert!((prod + x.powu(7)).norm() < 1e-10 * x.norm().powi(7));
    }

    #[test]
    fn tracking_a_circle_of_a_pure_power() {
        // near the origin three roots behave like X^{5/3} and two like X
        let eq = build_equation(5, 3, 2, 7).unwrap();
        let ctl = TrackerControls::default();
        let base = standard_base_roots(&eq, &ctl).unwrap();
        assert!(base.label_mismatch < 0.1);
        let tr = trace_loop(&eq, &base, &LoopSpec::Zero, paths::default_delta(&eq), &ctl).unwrap();
        assert!(tr.max_residual <= 1e-10);
        let b = extract_braid(&tr, projection::DEFAULT_DIRECTION).unwrap();
        let mut cycles = crate::braid::cycle_type(&b.permutation);
        cycles.sort_unstable();
        assert_eq!(cycles, vec![1, 1, 3]);
        assert_eq!(b.word.exponent_sum(), 24);
        assert_eq!(b.permutation, vec![4, 1, 2, 0, 3]);
    }
}
