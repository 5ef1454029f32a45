//! Closed-form monodromy: twist data, permutations, coincidences and the
//! predicted Artin words of the generating loops.
//!
//! Every prediction is a modelled motion of the roots that starts and ends
//! at the model configuration at the base point. Near the origin the model
//! uses the leading Puiseux terms (p-block on an inner circle, q-block on an
//! outer one) and rigid rotations. Loops that leave the small disc first
//! carry the configuration out to `|X^N/R| = 4` (linearly in log-modulus and
//! lifted argument) and then follow the series at infinity, which converges
//! on the whole outer route.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::braid::{compose, invert, BraidWord};
use crate::equation::{base_point, base_turns, coincidence_pair, collision_center, EquationError, TrinomialEquation};
use crate::paths::{self, LoopSpec, PathError};
use crate::projection::{self, min_separation, sample_motion, ProjectionError};
use crate::series::{inf_coefficients, MAX_TERMS};
use crate::turns;
use crate::twists::{project_samples, simulate_steps, MotionStep, ProjectionSetup, RationalTwist, TwistError, TwistSequence};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PredictError {
    #[error(transparent)]
    Equation(#[from] EquationError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Twist(#[from] TwistError),
    #[error(transparent)]
    Projection(#[from] ProjectionError),
    #[error("the colliding pair is not isolated on the outer route to branch point {0}")]
    CrowdedCollision(i64),
}

impl PredictError {
    pub fn name(&self) -> &'static str {
        match self {
            PredictError::Equation(e) => e.name(),
            PredictError::Path(_) => "PathError",
            PredictError::Twist(_) => "TwistError",
            PredictError::Projection(ProjectionError::DegenerateProjection) => "DegenerateProjection",
            PredictError::Projection(_) => "ProjectionError",
            PredictError::CrowdedCollision(_) => "CrowdedCollision",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Block {
    P,
    Q,
}

/// One strand of the model configuration at the base point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelStrand {
    pub master: usize,
    pub sheet: usize,
    pub block: Block,
    pub log_radius: f64,
    /// Argument in turns, continued from the outer labeling point.
    pub phase: f64,
}

impl ModelStrand {
    pub fn position(&self) -> Complex64 {
        turns::polar(self.log_radius.exp(), self.phase)
    }
}

/// Leading-order configuration at the base point and the data needed to
/// continue it through the outer region.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaseModel {
    /// Strands in label order (`master * m + sheet`).
    pub strands: Vec<ModelStrand>,
    /// Sheet offset of each master label so that sheet `j` at the outer
    /// labeling point is `e(j/m)` times the principal m-th root.
    pub kappa: Vec<i64>,
    pub outer_radius: f64,
    pub base_turns: f64,
    coefficients: Vec<f64>,
}

impl BaseModel {
    pub fn positions(&self) -> Vec<Complex64> {
        self.strands.iter().map(ModelStrand::position).collect()
    }

    pub fn members(&self, block: Block) -> Vec<usize> {
        (0..self.strands.len()).filter(|&i| self.strands[i].block == block).collect()
    }
}

/// Leading phase and modulus of every label at the base point.
///
/// With `a_t = (p/2 - N(s0 + t))/n`, label t starts in the p-cluster when
/// `a_t` lies within `p/(2n)` of an integer and in the q-cluster otherwise;
/// `a_t` measures how far the continued root has turned away from the
/// leading term at infinity.
pub fn base_model(eq: &TrinomialEquation) -> BaseModel {
    let (n, p, q, g, r, nn, m) =
        (eq.n() as f64, eq.p() as f64, eq.q() as f64, eq.g() as f64, eq.r() as f64, eq.big_n() as f64, eq.m() as usize);
    let s0 = base_turns(eq);
    let eps = base_point(eq).norm();
    let outer = paths::outer_radius(eq);
    let coefficients = inf_coefficients(eq, MAX_TERMS);
    let mut model = BaseModel { strands: Vec::new(), kappa: Vec::new(), outer_radius: outer, base_turns: s0, coefficients };
    for t in 0..eq.n() as usize {
        let tf = t as f64;
        let a = (p / 2.0 - nn * (s0 + tf)) / n;
        let near = turns::reduce(a);
        let (block, vphase, log_mod) = if near.abs() < p / (2.0 * n) {
            (Block::P, -near / p, (r - g) / p * eps.ln())
        } else {
            (Block::Q, (a.rem_euclid(1.0) - 0.5) / q, g / q * eps.ln())
        };
        let lead = 1.0 / (2.0 * n) + r * (s0 + tf) / n;
        let (tv, dv) = master_at(eq, &model.coefficients, t, (outer.ln(), s0));
        let kappa = (turns::arg(tv) - (lead + dv)).round() as i64;
        model.kappa.push(kappa);
        for j in 0..m {
            model.strands.push(ModelStrand {
                master: t,
                sheet: j,
                block,
                log_radius: log_mod / m as f64,
                phase: (j as f64 + kappa as f64 + lead + vphase) / m as f64,
            });
        }
    }
    model
}

/// Master root `t` on the lifted point `(ln|X|, turns)` in the outer region,
/// and the (small) argument of its ratio to the leading term.
fn master_at(eq: &TrinomialEquation, c: &[f64], t: usize, x: (f64, f64)) -> (Complex64, f64) {
    let (n, q, nn, r) = (eq.n() as f64, eq.q() as f64, eq.big_n() as f64, eq.r() as f64);
    let wt = x.1 + t as f64;
    // ratio = sum c_k y^k with y = e(-q/(2n)) W^{-N}, W = e(t/n) X^{1/n}
    let y = turns::polar((-nn * x.0 / n).exp(), -q / (2.0 * n) - nn * wt / n);
    let mut v = Complex64::new(0.0, 0.0);
    let ay = y.norm();
    let mut used = c.len();
    for (k, ck) in c.iter().enumerate() {
        if k > 8 && ck.abs() * ay.powi(k as i32) < 1e-18 {
            used = k;
            break;
        }
    }
    for ck in c[..used].iter().rev() {
        v = v * y + *ck;
    }
    let lead = turns::polar((r * x.0 / n).exp(), 1.0 / (2.0 * n) + r * wt / n);
    (lead * v, turns::arg(v))
}

/// Log-modulus and lifted argument of every labeled root at an outer point.
fn outer_coords(eq: &TrinomialEquation, model: &BaseModel, x: (f64, f64)) -> Vec<(f64, f64)> {
    let (n, r, m) = (eq.n() as f64, eq.r() as f64, eq.m() as f64);
    let mut out = Vec::with_capacity(model.strands.len());
    for t in 0..eq.n() as usize {
        let (tv, dv) = master_at(eq, &model.coefficients, t, x);
        let lead = 1.0 / (2.0 * n) + r * (x.1 + t as f64) / n;
        for j in 0..eq.m() as usize {
            out.push((tv.norm().ln() / m, (j as f64 + model.kappa[t] as f64 + lead + dv) / m));
        }
    }
    out
}

fn coords_to_points(c: &[(f64, f64)]) -> Vec<Complex64> {
    c.iter().map(|&(l, a)| turns::polar(l.exp(), a)).collect()
}

/// `perm[i]` = index of the mark nearest to `after[i]`.
fn nearest_map(after: &[Complex64], marks: &[Complex64]) -> Vec<usize> {
    after
        .iter()
        .map(|z| (0..marks.len()).min_by(|&a, &b| (marks[a] - z).norm().total_cmp(&(marks[b] - z).norm())).expect("nonempty"))
        .collect()
}

/// Modelled motion of a loop, sampled, with the label permutation it induces.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelMotion {
    pub samples: Vec<Vec<Complex64>>,
    /// `permutation[label]` = label of the root it ends on.
    pub permutation: Vec<usize>,
}

impl ModelMotion {
    fn identity(model: &BaseModel) -> Self {
        ModelMotion { samples: vec![model.positions()], permutation: (0..model.strands.len()).collect() }
    }

    fn then(mut self, other: ModelMotion) -> Self {
        // `other` moves strands by label; strand i now sits on label perm[i]
        let perm = self.permutation.clone();
        for row in other.samples.into_iter().skip(1) {
            self.samples.push(perm.iter().map(|&k| row[k]).collect());
        }
        self.permutation = perm.iter().map(|&k| other.permutation[k]).collect();
        self
    }

    pub fn inverse(&self) -> Self {
        // run backwards, strand i starting on label inv[i]
        let inv = invert(&self.permutation);
        let samples = self.samples.iter().rev().map(|row| inv.iter().map(|&k| row[k]).collect()).collect();
        ModelMotion { samples, permutation: inv }
    }
}

fn sample_path(f: &dyn Fn(f64) -> Vec<Complex64>, resolution: usize) -> Vec<Vec<Complex64>> {
    sample_motion(f, resolution.max(8), 0.3)
}

/// Out from the base model to the outer labeling point.
fn transport_out(eq: &TrinomialEquation, model: &BaseModel, resolution: usize) -> Vec<Vec<Complex64>> {
    let from: Vec<(f64, f64)> = model.strands.iter().map(|s| (s.log_radius, s.phase)).collect();
    let to = outer_coords(eq, model, (model.outer_radius.ln(), model.base_turns));
    simulate_steps(&model.positions(), &[MotionStep::Transport { from, to }], resolution)
}

/// What happens once the configuration has followed the outer route.
enum Turnaround<'a> {
    /// Some motion at the end of the route, then back along the route.
    Retrace(&'a dyn Fn(&[Complex64]) -> Result<ModelMotion, PredictError>),
    /// The route is closed in X; go straight back in.
    Closed,
}

/// A motion that goes out to the labeling point, follows `route` through the
/// outer region (a lifted-point function on [0, 1]) and comes back in.
fn outer_excursion(
    eq: &TrinomialEquation,
    model: &BaseModel,
    route: &dyn Fn(f64) -> (f64, f64),
    turnaround: Turnaround,
    resolution: usize,
) -> Result<ModelMotion, PredictError> {
    let mut samples = transport_out(eq, model, resolution);
    let along = sample_path(&|s| coords_to_points(&outer_coords(eq, model, route(s))), resolution);
    samples.extend(along.iter().skip(1).cloned());
    let at = along.last().expect("nonempty").clone();
    let out = transport_out(eq, model, resolution);
    // strand i comes back on the path of label sigma[i]
    let (sigma, back): (Vec<usize>, Vec<&Vec<Complex64>>) = match turnaround {
        Turnaround::Retrace(middle) => {
            let mid = middle(&at)?;
            samples.extend(mid.samples.into_iter().skip(1));
            (mid.permutation, along.iter().rev().skip(1).chain(out.iter().rev().skip(1)).collect())
        }
        Turnaround::Closed => (nearest_map(&at, &along[0]), out.iter().rev().skip(1).collect()),
    };
    for row in back {
        samples.push(sigma.iter().map(|&k| row[k]).collect());
    }
    Ok(ModelMotion { samples, permutation: sigma })
}

fn zero_motion(eq: &TrinomialEquation, model: &BaseModel, resolution: usize) -> Result<ModelMotion, PredictError> {
    let twists = zero_twists(eq, model)?;
    let steps: Vec<MotionStep> = twists.twists.iter().cloned().map(MotionStep::Twist).collect();
    let samples = simulate_steps(&twists.initial, &steps, resolution);
    let permutation = nearest_map(samples.last().expect("nonempty"), &twists.initial);
    Ok(ModelMotion { samples, permutation })
}

/// Once anticlockwise around the outer circle.
fn outer_circle_motion(eq: &TrinomialEquation, model: &BaseModel, resolution: usize) -> Result<ModelMotion, PredictError> {
    let (lo, s0) = (model.outer_radius.ln(), model.base_turns);
    outer_excursion(eq, model, &|s| (lo, s0 + s), Turnaround::Closed, resolution)
}

/// Domain ratio `|X^N/R|` at which the colliding pair is half-twisted.
const OMEGA_STOP_RATIO: f64 = 1.05;

fn omega_route(eq: &TrinomialEquation, model: &BaseModel, ell: i64, stop_ratio: f64) -> impl Fn(f64) -> (f64, f64) {
    let (lo, s0) = (model.outer_radius.ln(), model.base_turns);
    let target = ell as f64 / eq.big_n() as f64;
    let inner = eq.branch_modulus().ln() + stop_ratio.ln() / eq.big_n() as f64;
    move |s: f64| {
        if s <= 0.5 {
            (lo, s0 + (target - s0) * 2.0 * s)
        } else {
            (lo + (inner - lo) * (2.0 * s - 1.0), target)
        }
    }
}

/// Sheet pairing of the colliding masters at a configuration near the branch point.
fn colliding_sheets(eq: &TrinomialEquation, pair: (usize, usize), at: &[Complex64]) -> Vec<(usize, usize)> {
    let m = eq.m() as usize;
    (0..m)
        .map(|j| {
            let a = pair.0 * m + j;
            let b =
                (0..m).map(|k| pair.1 * m + k).min_by(|&x, &y| (at[x] - at[a]).norm().total_cmp(&(at[y] - at[a]).norm())).expect("m >= 1");
            (a, b)
        })
        .collect()
}

fn omega_motion(eq: &TrinomialEquation, model: &BaseModel, ell: i64, resolution: usize) -> Result<ModelMotion, PredictError> {
    let (t, t2) = coincidence_pair(eq, ell)?;
    let pair = (t as usize, t2 as usize);
    let mut stop = OMEGA_STOP_RATIO;
    for _ in 0..4 {
        let route = omega_route(eq, model, ell, stop);
        let at = coords_to_points(&outer_coords(eq, model, route(1.0)));
        let sheets = colliding_sheets(eq, pair, &at);
        // each pair turns inside the disc on its segment, which must hold no other root
        let clear = sheets.iter().all(|&(a, b)| {
            let (mid, rad) = ((at[a] + at[b]) / 2.0, (at[a] - at[b]).norm() / 2.0);
            (0..at.len()).all(|k| k == a || k == b || (at[k] - mid).norm() > 1.2 * rad)
        });
        if clear {
            let middle = |at: &[Complex64]| -> Result<ModelMotion, PredictError> {
                let twists = sheets
                    .iter()
                    .map(|&(a, b)| RationalTwist::new(half(), (at[a] + at[b]) / 2.0, vec![a, b]))
                    .collect::<Result<Vec<_>, _>>()?;
                let steps: Vec<MotionStep> = twists.into_iter().map(MotionStep::Twist).collect();
                let samples = simulate_steps(at, &steps, resolution);
                let mut permutation: Vec<usize> = (0..at.len()).collect();
                for &(a, b) in &sheets {
                    permutation.swap(a, b);
                }
                Ok(ModelMotion { samples, permutation })
            };
            return outer_excursion(eq, model, &route, Turnaround::Retrace(&middle), resolution);
        }
        stop = 1.0 + (stop - 1.0) / 4.0;
    }
    Err(PredictError::CrowdedCollision(ell))
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

fn block_twist(model: &BaseModel, block: Block, alpha: BigRational) -> Result<Option<RationalTwist>, PredictError> {
    let members = model.members(block);
    if members.is_empty() || alpha.is_zero() {
        return Ok(None);
    }
    Ok(Some(RationalTwist::new(alpha, Complex64::new(0.0, 0.0), members)?))
}

fn twists_of(model: &BaseModel, parts: Vec<Option<RationalTwist>>) -> Result<TwistSequence, PredictError> {
    Ok(TwistSequence::new(model.positions(), parts.into_iter().flatten().collect())?)
}

fn q(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Angles of the block twists of a loop around the origin: `(r-g)/(mp)` on
/// the p-block and `g/(mq)` on the q-block.
pub fn zero_angles(eq: &TrinomialEquation) -> (BigRational, BigRational) {
    let (m, p, qq, g, r) = (eq.m() as i64, eq.p() as i64, eq.q() as i64, eq.g() as i64, eq.r() as i64);
    (q(r - g, m * p), q(g, m * qq))
}

/// Net block twists of the loop around all finite branch points:
/// `-N/(mnp)` and `N/(mnq)`.
pub fn sigma_angles(eq: &TrinomialEquation) -> (BigRational, BigRational) {
    let (m, n, p, qq, nn) = (eq.m() as i64, eq.n() as i64, eq.p() as i64, eq.q() as i64, eq.big_n() as i64);
    (q(-nn, m * n * p), q(nn, m * n * qq))
}

/// Twist of all strands for the loop around infinity: `-r/(mn)`.
pub fn infinity_angle(eq: &TrinomialEquation) -> BigRational {
    q(-(eq.r() as i64), (eq.m() * eq.n()) as i64)
}

fn zero_twists(eq: &TrinomialEquation, model: &BaseModel) -> Result<TwistSequence, PredictError> {
    let (ap, aq) = zero_angles(eq);
    twists_of(model, vec![block_twist(model, Block::P, ap)?, block_twist(model, Block::Q, aq)?])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Coincidence {
    pub ell: i64,
    pub t: u64,
    pub t_prime: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonodromyPrediction {
    #[serde(rename = "loop")]
    pub loop_name: String,
    pub twists: TwistSequence,
    /// `permutation[label]` = label of the root it ends on.
    pub permutation: Vec<usize>,
    pub coincidences: Vec<Coincidence>,
    pub artin: BraidWord,
    /// Labels by position along the projection axis at the start of `artin`.
    pub start_order: Vec<usize>,
    /// Start positions of the model, in label order.
    #[serde(skip)]
    pub model_positions: Vec<Complex64>,
    #[serde(skip)]
    pub samples: Vec<Vec<Complex64>>,
}

fn require_valid(eq: &TrinomialEquation) -> Result<(), PredictError> {
    match eq.warnings().first() {
        Some(v) => Err(EquationError::GcdConditionViolated(*v).into()),
        None => Ok(()),
    }
}

/// Closed-form permutation and modelled motion of a loop.
pub fn loop_motion(eq: &TrinomialEquation, model: &BaseModel, spec: &LoopSpec, resolution: usize) -> Result<ModelMotion, PredictError> {
    Ok(match spec {
        LoopSpec::Zero => zero_motion(eq, model, resolution)?,
        LoopSpec::Infinity => outer_circle_motion(eq, model, resolution)?.inverse(),
        LoopSpec::Sigma => zero_motion(eq, model, resolution)?.inverse().then(outer_circle_motion(eq, model, resolution)?),
        LoopSpec::Omega(ell) => omega_motion(eq, model, *ell, resolution)?,
        LoopSpec::Composite(parts) => {
            let mut acc = ModelMotion::identity(model);
            for p in parts {
                acc = acc.then(loop_motion(eq, model, p, resolution)?);
            }
            acc
        }
    })
}

fn loop_twists(eq: &TrinomialEquation, model: &BaseModel, spec: &LoopSpec) -> Result<TwistSequence, PredictError> {
    match spec {
        LoopSpec::Zero => zero_twists(eq, model),
        LoopSpec::Sigma => {
            let (ap, aq) = sigma_angles(eq);
            twists_of(model, vec![block_twist(model, Block::P, ap)?, block_twist(model, Block::Q, aq)?])
        }
        LoopSpec::Infinity => {
            let all = RationalTwist::new(infinity_angle(eq), Complex64::new(0.0, 0.0), (0..model.strands.len()).collect())?;
            twists_of(model, vec![Some(all)])
        }
        LoopSpec::Omega(ell) => {
            // the half twist about the collision center, one per sheet pair
            let (t, t2) = coincidence_pair(eq, *ell)?;
            let m = eq.m() as usize;
            let omega = turns::polar(eq.branch_modulus(), *ell as f64 / eq.big_n() as f64);
            let c = collision_center(eq, omega);
            let twists = (0..m)
                .map(|j| {
                    let cj = turns::polar(c.norm().powf(1.0 / m as f64), (turns::arg(c) + j as f64) / m as f64);
                    RationalTwist::new(half(), cj, vec![t as usize * m + j, t2 as usize * m + j]).map(Some)
                })
                .collect::<Result<Vec<_>, _>>()?;
            twists_of(model, twists)
        }
        LoopSpec::Composite(parts) => {
            let mut all = Vec::new();
            for p in parts {
                all.extend(loop_twists(eq, model, p)?.twists);
            }
            Ok(TwistSequence::new(model.positions(), all)?)
        }
    }
}

fn loop_coincidences(eq: &TrinomialEquation, spec: &LoopSpec) -> Result<Vec<Coincidence>, PredictError> {
    let one = |ell: i64| -> Result<Coincidence, PredictError> {
        let (t, t_prime) = coincidence_pair(eq, ell)?;
        Ok(Coincidence { ell, t, t_prime })
    };
    Ok(match spec {
        LoopSpec::Zero | LoopSpec::Infinity => Vec::new(),
        // met in the order of increasing argument starting from the base point
        LoopSpec::Sigma => (1..=eq.big_n() as i64).map(one).collect::<Result<_, _>>()?,
        LoopSpec::Omega(ell) => vec![one(*ell)?],
        LoopSpec::Composite(parts) => {
            let mut v = Vec::new();
            for p in parts {
                v.extend(loop_coincidences(eq, p)?);
            }
            v
        }
    })
}

/// Predict the monodromy of a loop.
pub fn predict(eq: &TrinomialEquation, spec: &LoopSpec) -> Result<MonodromyPrediction, PredictError> {
    predict_with(eq, spec, &ProjectionSetup::default())
}

pub fn predict_with(eq: &TrinomialEquation, spec: &LoopSpec, setup: &ProjectionSetup) -> Result<MonodromyPrediction, PredictError> {
    require_valid(eq)?;
    if let LoopSpec::Omega(ell) = spec {
        if *ell < 0 || *ell > eq.big_n() as i64 {
            return Err(EquationError::IndexOutOfRange(*ell).into());
        }
    }
    let model = base_model(eq);
    let motion = loop_motion(eq, &model, spec, setup.resolution)?;
    let positions = model.positions();
    let projected = project_samples(motion.samples.clone(), &positions, setup)?;
    Ok(MonodromyPrediction {
        loop_name: spec.name(),
        twists: loop_twists(eq, &model, spec)?,
        permutation: motion.permutation,
        coincidences: loop_coincidences(eq, spec)?,
        artin: projected.word.free_reduce(),
        start_order: projected.start_order,
        model_positions: positions,
        samples: motion.samples,
    })
}

/// The predicted Artin word of a loop (or loop product) under a projection setup.
pub fn predicted_artin(eq: &TrinomialEquation, spec: &LoopSpec, setup: &ProjectionSetup) -> Result<BraidWord, PredictError> {
    Ok(predict_with(eq, spec, setup)?.artin)
}

/// Label permutation induced by a positional word whose strands start in
/// `start_order` (labels by axis position).
pub fn label_permutation(word: &BraidWord, start_order: &[usize]) -> Vec<usize> {
    let wp = word.permutation();
    let mut pos_of = vec![0; start_order.len()];
    for (p, &l) in start_order.iter().enumerate() {
        pos_of[l] = p;
    }
    (0..start_order.len()).map(|l| start_order[wp[pos_of[l]]]).collect()
}

/// Compose label permutations: first `a`, then `b`.
pub fn then_perm(a: &[usize], b: &[usize]) -> Vec<usize> {
    compose(b, a)
}

/// Straight-line motion from one labeled configuration to another.
pub fn connecting_samples(from: &[Complex64], to: &[Complex64]) -> Vec<Vec<Complex64>> {
    let f = |s: f64| from.iter().zip(to).map(|(a, b)| a + (b - a) * s).collect::<Vec<_>>();
    sample_motion(&f, 16, 0.3)
}

/// Largest distance between model and true positions over the smallest gap
/// between true roots.
pub fn model_error(model: &[Complex64], actual: &[Complex64]) -> f64 {
    let err = model.iter().zip(actual).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    err / min_separation(actual)
}

/// Predicted motion moved onto the true base roots: in along straight lines
/// to the model, the model loop, and back out along the same lines.
pub fn rebased_samples(prediction: &MonodromyPrediction, actual: &[Complex64]) -> Vec<Vec<Complex64>> {
    let into = connecting_samples(actual, &prediction.model_positions);
    let perm = &prediction.permutation;
    let mut rows = into.clone();
    rows.extend(prediction.samples.iter().skip(1).cloned());
    for row in into.iter().rev().skip(1) {
        rows.push(perm.iter().map(|&k| row[k]).collect());
    }
    rows
}

/// Extract two sampled motions with a shared projection direction, doubling it
/// for both when either is degenerate.
pub fn extract_pair(
    a: &[Vec<Complex64>],
    b: &[Vec<Complex64>],
    direction: f64,
) -> Result<(projection::Extracted, projection::Extracted), ProjectionError> {
    let mut d = direction;
    let mut last = ProjectionError::DegenerateProjection;
    for _ in 0..6 {
        match (projection::extract_once(a, d), projection::extract_once(b, d)) {
            (Ok(x), Ok(y)) => return Ok((x, y)),
            (Err(e @ ProjectionError::BadSamples), _) | (_, Err(e @ ProjectionError::BadSamples)) => return Err(e),
            (Err(e), _) | (_, Err(e)) => last = e,
        }
        d *= 2.0;
    }
    Err(last)
}
