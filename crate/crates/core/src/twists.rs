//! Rational twists `R^alpha_c[K]` and their projection to Artin words.
//!
//! A twist rotates the member strands rigidly by `alpha` full turns about a
//! center, the others stay put. Twists in a sequence run one after another.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::braid::BraidWord;
use crate::projection::{self, ProjectionError, DEFAULT_DIRECTION};
use crate::turns;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TwistError {
    #[error("a twist needs at least one member strand")]
    EmptyMembers,
    #[error("member {0} outside the {1} strands")]
    MemberOutOfRange(usize, usize),
    #[error("initial positions are not pairwise distinct")]
    CoincidentPositions,
    #[error(transparent)]
    Projection(#[from] ProjectionError),
    #[error("snapping to the marked endpoints would create a crossing")]
    SnapCollision,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RationalTwist {
    /// Full turns, exact.
    #[serde(serialize_with = "crate::equation::ser_ratio")]
    pub alpha: BigRational,
    pub center: Complex64,
    pub members: Vec<usize>,
}

impl RationalTwist {
    pub fn new(alpha: BigRational, center: Complex64, members: Vec<usize>) -> Result<Self, TwistError> {
        if members.is_empty() {
            return Err(TwistError::EmptyMembers);
        }
        Ok(RationalTwist { alpha, center, members })
    }

    pub fn alpha_f64(&self) -> f64 {
        self.alpha.to_f64().unwrap_or(f64::NAN)
    }

    /// Positions after a fraction `s` of the twist.
    pub fn positions(&self, start: &[Complex64], s: f64) -> Vec<Complex64> {
        let rot = turns::e(self.alpha_f64() * s);
        let mut out = start.to_vec();
        for &i in &self.members {
            out[i] = (start[i] - self.center) * rot + self.center;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwistSequence {
    pub initial: Vec<Complex64>,
    pub twists: Vec<RationalTwist>,
}

impl TwistSequence {
    pub fn new(initial: Vec<Complex64>, twists: Vec<RationalTwist>) -> Result<Self, TwistError> {
        let n = initial.len();
        for t in &twists {
            if t.members.is_empty() {
                return Err(TwistError::EmptyMembers);
            }
            if let Some(&bad) = t.members.iter().find(|&&i| i >= n) {
                return Err(TwistError::MemberOutOfRange(bad, n));
            }
        }
        if projection::min_separation(&initial) <= 0.0 {
            return Err(TwistError::CoincidentPositions);
        }
        Ok(TwistSequence { initial, twists })
    }

    pub fn strands(&self) -> usize {
        self.initial.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EndpointPolicy {
    Exact,
    Snap,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProjectionSetup {
    /// Angle of the projection axis in turns.
    pub direction: f64,
    pub endpoint_policy: EndpointPolicy,
    /// Minimum samples per full turn of a twist.
    pub resolution: usize,
}

impl Default for ProjectionSetup {
    fn default() -> Self {
        ProjectionSetup { direction: DEFAULT_DIRECTION, endpoint_policy: EndpointPolicy::Exact, resolution: 256 }
    }
}

/// One piece of a modelled strand motion.
#[derive(Debug, Clone, PartialEq)]
pub enum MotionStep {
    Twist(RationalTwist),
    /// Every strand moves linearly in log-modulus and (lifted) argument from
    /// `from[i]` to `to[i]`, both given as `(ln |z|, turns)`.
    Transport {
        from: Vec<(f64, f64)>,
        to: Vec<(f64, f64)>,
    },
    /// Explicit positions, the first row equal to the current configuration.
    Path(Vec<Vec<Complex64>>),
}

fn polar_log(p: (f64, f64)) -> Complex64 {
    turns::polar(p.0.exp(), p.1)
}

/// Sample a sequence of motion steps, starting from `initial`.
pub fn simulate_steps(initial: &[Complex64], steps: &[MotionStep], resolution: usize) -> Vec<Vec<Complex64>> {
    let mut samples = vec![initial.to_vec()];
    for step in steps {
        let start = samples.last().expect("nonempty").clone();
        let piece = match step {
            MotionStep::Twist(t) => {
                let per_turn = resolution.max(8) as f64;
                let n = (t.alpha_f64().abs() * per_turn).ceil().max(1.0) as usize;
                if t.alpha.is_zero() {
                    continue;
                }
                projection::sample_motion(&|s| t.positions(&start, s), n, 0.3)
            }
            MotionStep::Transport { from, to } => {
                let f = |s: f64| {
                    from.iter().zip(to).map(|(a, b)| polar_log((a.0 + (b.0 - a.0) * s, a.1 + (b.1 - a.1) * s))).collect::<Vec<_>>()
                };
                projection::sample_motion(&f, resolution.max(8), 0.3)
            }
            MotionStep::Path(rows) => rows.clone(),
        };
        samples.extend(piece.into_iter().skip(1));
    }
    samples
}

/// Positions of a regular n-gon of the given radius, first vertex at `phase` turns.
pub fn regular_polygon(n: usize, radius: f64, phase: f64, center: Complex64) -> Vec<Complex64> {
    (0..n).map(|k| center + turns::polar(radius, phase + k as f64 / n as f64)).collect()
}

/// Project sampled motion, snapping the endpoints onto `marks` when asked.
pub fn project_samples(
    mut samples: Vec<Vec<Complex64>>,
    marks: &[Complex64],
    setup: &ProjectionSetup,
) -> Result<projection::Extracted, TwistError> {
    let snap_from = samples.len() - 1;
    if setup.endpoint_policy == EndpointPolicy::Snap {
        let last = samples[snap_from].clone();
        let target = snap_targets(&last, marks).ok_or(TwistError::SnapCollision)?;
        let f = |s: f64| last.iter().zip(&target).map(|(a, b)| a + (b - a) * s).collect::<Vec<_>>();
        samples.extend(projection::sample_motion(&f, 8, 0.3).into_iter().skip(1));
    }
    let x = projection::extract(&samples, setup.direction)?;
    if x.crossings.iter().any(|c| c.time >= snap_from as f64) {
        return Err(TwistError::SnapCollision);
    }
    Ok(x)
}

/// Nearest-mark assignment; `None` unless it is a bijection.
fn snap_targets(last: &[Complex64], marks: &[Complex64]) -> Option<Vec<Complex64>> {
    if last.len() != marks.len() {
        return None;
    }
    let mut used = vec![false; marks.len()];
    let mut out = Vec::with_capacity(last.len());
    for z in last {
        let (j, _) = marks.iter().enumerate().map(|(j, m)| (j, (z - m).norm())).min_by(|a, b| a.1.total_cmp(&b.1))?;
        if used[j] {
            return None;
        }
        used[j] = true;
        out.push(marks[j]);
    }
    Some(out)
}

/// The Artin word of a twist sequence (the projection map).
pub fn project_twists(seq: &TwistSequence, setup: &ProjectionSetup) -> Result<BraidWord, TwistError> {
    let steps: Vec<MotionStep> = seq.twists.iter().cloned().map(MotionStep::Twist).collect();
    let samples = simulate_steps(&seq.initial, &steps, setup.resolution);
    Ok(project_samples(samples, &seq.initial, setup)?.word)
}

/// The full twist: one anticlockwise turn of a regular n-gon about its center.
pub fn full_turn_word(n: usize) -> BraidWord {
    if n < 2 {
        return BraidWord::identity(n);
    }
    let initial = regular_polygon(n, 1.0, 0.0, Complex64::new(0.0, 0.0));
    let twist =
        RationalTwist::new(BigRational::from_integer(1.into()), Complex64::new(0.0, 0.0), (0..n).collect()).expect("members nonempty");
    let seq = TwistSequence::new(initial, vec![twist]).expect("valid polygon");
    project_twists(&seq, &ProjectionSetup::default()).expect("regular polygons project cleanly off-axis")
}

/// True when `alpha` is an integer multiple of `1/k`.
pub fn is_multiple_of(alpha: &BigRational, k: u64) -> bool {
    (alpha * BigRational::from_integer(k.into())).is_integer()
}

pub fn sign(alpha: &BigRational) -> i32 {
    if alpha.is_positive() {
        1
    } else if alpha.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{garside, same_element, Sameness};
    use crate::equation::ratio;

    fn polygon_twist(n: usize, num: i64, den: i64) -> TwistSequence {
        let c = Complex64::new(0.0, 0.0);
        let t = RationalTwist::new(ratio(num, den), c, (0..n).collect()).unwrap();
        TwistSequence::new(regular_polygon(n, 1.0, 0.0, c), vec![t]).unwrap()
    }

    #[test]
    fn half_twist_is_garside() {
        for n in 2..=7 {
            let w = project_twists(&polygon_twist(n, 1, 2), &ProjectionSetup::default()).unwrap();
            assert_eq!(same_element(&w, &garside(n)).unwrap(), Sameness::EqualByInvariants, "n = {n}: {:?}", w.letters());
        }
    }

    #[test]
    fn rotations_by_k_over_n() {
        let n = 5;
        for k in 0..=10 {
            let w = project_twists(&polygon_twist(n, k, n as i64), &ProjectionSetup::default()).unwrap();
            assert_eq!(w.exponent_sum(), k * (n as i64 - 1));
            // a k-step cyclic shift has gcd(k, n) cycles
            let cycles = crate::braid::cycle_type(&w.permutation()).len();
            assert_eq!(cycles, num_integer::gcd(k as usize, n));
        }
        assert!(project_twists(&polygon_twist(5, 0, 1), &ProjectionSetup::default()).unwrap().is_empty());
        assert_eq!(project_twists(&polygon_twist(5, 2, 5), &ProjectionSetup::default()).unwrap().exponent_sum(), 8);
    }

    #[test]
    fn full_turns() {
        assert_eq!(full_turn_word(2).letters(), &[1, 1]);
        let w = full_turn_word(5);
        assert_eq!(w.exponent_sum(), 20);
        assert_eq!(w.permutation(), vec![0, 1, 2, 3, 4]);
        assert_eq!(same_element(&full_turn_word(3), &garside(3).power(2)).unwrap(), Sameness::EqualByInvariants);
    }

    #[test]
    fn twist_then_inverse_is_trivial() {
        let c = Complex64::new(0.1, -0.2);
        let pts = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.3), Complex64::new(-0.7, 0.2), Complex64::new(0.3, -0.9)];
        let a = RationalTwist::new(ratio(3, 7), c, vec![0, 2, 3]).unwrap();
        let b = RationalTwist::new(ratio(-3, 7), c, vec![0, 2, 3]).unwrap();
        let seq = TwistSequence::new(pts, vec![a, b]).unwrap();
        let w = project_twists(&seq, &ProjectionSetup::default()).unwrap();
        assert!(w.burau().is_identity());
        assert_eq!(w.exponent_sum(), 0);
    }

    #[test]
    fn snapping() {
        // 2/5 of a turn of a regular pentagon lands on the marks exactly
        let setup = ProjectionSetup { endpoint_policy: EndpointPolicy::Snap, ..ProjectionSetup::default() };
        assert_eq!(project_twists(&polygon_twist(5, 2, 5), &setup).unwrap().exponent_sum(), 8);
        // a small extra rotation is snapped back without crossings
        let seq = polygon_twist(5, 401, 1000);
        let w = project_twists(&seq, &setup).unwrap();
        assert_eq!(w.exponent_sum(), 8);
        let marks = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!(snap_targets(&[Complex64::new(0.1, 0.0), Complex64::new(0.2, 0.0)], &marks).is_none());
    }

    #[test]
    fn validation() {
        assert_eq!(RationalTwist::new(ratio(1, 2), Complex64::new(0.0, 0.0), vec![]).unwrap_err(), TwistError::EmptyMembers);
        let t = RationalTwist::new(ratio(1, 2), Complex64::new(0.0, 0.0), vec![5]).unwrap();
        assert!(matches!(TwistSequence::new(vec![Complex64::new(0.0, 0.0)], vec![t]), Err(TwistError::MemberOutOfRange(5, 1))));
        let z = Complex64::new(1.0, 1.0);
        assert_eq!(TwistSequence::new(vec![z, z], vec![]).unwrap_err(), TwistError::CoincidentPositions);
    }
}
