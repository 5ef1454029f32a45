//! Crossing extraction from sampled strand motion.
//!
//! Strands move linearly between consecutive samples. Positions are read along
//! an axis at angle `direction` (turns); when two strands swap order along it,
//! a crossing is recorded. The strand coming from the right passes in front
//! (positive letter) when its coordinate orthogonal to the axis is larger, so
//! an anticlockwise exchange of two points gives a positive generator.

use num_complex::Complex64;
use serde::Serialize;

use crate::braid::BraidWord;
use crate::turns;

pub const DEFAULT_DIRECTION: f64 = 1.0 / 137.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProjectionError {
    #[error("degenerate projection: simultaneous or aligned crossings persist after perturbation")]
    DegenerateProjection,
    #[error("strands {0} and {1} pass through each other at sample {2}")]
    UnresolvedCrossing(usize, usize, usize),
    #[error("empty or ragged sample matrix")]
    BadSamples,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    /// Sample index plus the fraction of the step.
    pub time: f64,
    /// 0-based position of the left strand of the pair.
    pub position: usize,
    pub sign: i32,
    /// Strand that was on the left and strand that was on the right.
    pub strands: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extracted {
    pub word: BraidWord,
    /// `start_order[pos]` = strand at that position initially.
    pub start_order: Vec<usize>,
    pub end_order: Vec<usize>,
    pub crossings: Vec<Crossing>,
    pub direction: f64,
}

fn frame(z: Complex64, rot: Complex64) -> (f64, f64) {
    let w = z * rot;
    (w.re, w.im)
}

fn order_of(xs: &[(f64, f64)]) -> Result<Vec<usize>, ProjectionError> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].0.total_cmp(&xs[b].0));
    for w in idx.windows(2) {
        let (a, b) = (xs[w[0]].0, xs[w[1]].0);
        if (b - a).abs() <= 1e-13 * (a.abs() + b.abs()).max(1e-300) {
            return Err(ProjectionError::DegenerateProjection);
        }
    }
    Ok(idx)
}

/// Extract the braid word along one fixed direction.
pub fn extract_once(samples: &[Vec<Complex64>], direction: f64) -> Result<Extracted, ProjectionError> {
    let n = samples.first().map(|s| s.len()).ok_or(ProjectionError::BadSamples)?;
    if n == 0 || samples.iter().any(|s| s.len() != n) {
        return Err(ProjectionError::BadSamples);
    }
    let rot = turns::e(-direction);
    let mut cur: Vec<(f64, f64)> = samples[0].iter().map(|&z| frame(z, rot)).collect();
    let mut order = order_of(&cur)?;
    let start_order = order.clone();
    let mut pos_of = vec![0; n];
    for (p, &s) in order.iter().enumerate() {
        pos_of[s] = p;
    }
    let mut letters = Vec::new();
    let mut crossings = Vec::new();
    for (k, next_raw) in samples.iter().enumerate().skip(1) {
        let next: Vec<(f64, f64)> = next_raw.iter().map(|&z| frame(z, rot)).collect();
        let new_order = order_of(&next)?;
        if new_order == order {
            cur = next;
            continue;
        }
        // all pairs whose order along the axis flips during this step
        let mut events: Vec<(f64, usize, usize)> = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let d0 = cur[b].0 - cur[a].0;
                let d1 = next[b].0 - next[a].0;
                if d0.signum() != d1.signum() {
                    events.push((d0 / (d0 - d1), a, b));
                }
            }
        }
        events.sort_by(|x, y| x.0.total_cmp(&y.0));
        for w in events.windows(2) {
            let shares = w[0].1 == w[1].1 || w[0].1 == w[1].2 || w[0].2 == w[1].1 || w[0].2 == w[1].2;
            if shares && (w[1].0 - w[0].0).abs() < 1e-12 {
                return Err(ProjectionError::DegenerateProjection);
            }
        }
        for (tau, a, b) in events {
            let (left, right) = if pos_of[a] < pos_of[b] { (a, b) } else { (b, a) };
            let pl = pos_of[left];
            if pos_of[right] != pl + 1 {
                return Err(ProjectionError::DegenerateProjection);
            }
            let yl = cur[left].1 + tau * (next[left].1 - cur[left].1);
            let yr = cur[right].1 + tau * (next[right].1 - cur[right].1);
            let scale = cur[left].1.abs().max(cur[right].1.abs()).max(cur[left].0.abs()).max(1e-300);
            if (yr - yl).abs() <= 1e-12 * scale {
                return Err(ProjectionError::UnresolvedCrossing(left, right, k));
            }
            let sign = if yr > yl { 1 } else { -1 };
            letters.push(sign * (pl as i32 + 1));
            crossings.push(Crossing { time: (k - 1) as f64 + tau, position: pl, sign, strands: (left, right) });
            order.swap(pl, pl + 1);
            pos_of[left] = pl + 1;
            pos_of[right] = pl;
        }
        if order != new_order {
            return Err(ProjectionError::DegenerateProjection);
        }
        cur = next;
    }
    let word = BraidWord::new(n, letters).expect("letters in range by construction");
    Ok(Extracted { word, start_order, end_order: order, crossings, direction })
}

/// Extract with the given direction, doubling it on degeneracy (up to 6 tries).
pub fn extract(samples: &[Vec<Complex64>], direction: f64) -> Result<Extracted, ProjectionError> {
    let mut d = direction;
    let mut last = ProjectionError::DegenerateProjection;
    for _ in 0..6 {
        match extract_once(samples, d) {
            Ok(x) => return Ok(x),
            Err(e @ ProjectionError::BadSamples) => return Err(e),
            Err(e) => last = e,
        }
        d *= 2.0;
    }
    Err(match last {
        ProjectionError::UnresolvedCrossing(..) => last,
        _ => ProjectionError::DegenerateProjection,
    })
}

/// Samples `f(s)` on [0, 1], subdividing until every strand moves less than
/// `guard` times the smallest pairwise distance at the start of each step.
pub fn sample_motion(f: &dyn Fn(f64) -> Vec<Complex64>, min_steps: usize, guard: f64) -> Vec<Vec<Complex64>> {
    let min_steps = min_steps.max(1);
    let mut out = vec![f(0.0)];
    let mut s = 0.0;
    let base = 1.0 / min_steps as f64;
    let mut h = base;
    while s < 1.0 - 1e-15 {
        let step = h.min(1.0 - s);
        let cand = f(s + step);
        let last = out.last().expect("nonempty");
        let sep = min_separation(last);
        let moved = last.iter().zip(&cand).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        if moved <= guard * sep || step < 1e-9 {
            s += step;
            out.push(cand);
            h = (h * 2.0).min(base);
        } else {
            h = step / 2.0;
        }
    }
    out
}

pub fn min_separation(z: &[Complex64]) -> f64 {
    let mut m = f64::INFINITY;
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            m = m.min((z[i] - z[j]).norm());
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn swap_motion(turn: f64) -> Vec<Vec<Complex64>> {
        // two points exchanged by a rotation of `turn` about their midpoint
        let f = |s: f64| vec![turns::polar(1.0, 0.5 + turn * s), turns::polar(1.0, turn * s)];
        sample_motion(&f, 64, 0.3)
    }

    #[test]
    fn anticlockwise_exchange_is_positive() {
        let x = extract(&swap_motion(0.5), DEFAULT_DIRECTION).unwrap();
        assert_eq!(x.word.letters(), &[1]);
        let x = extract(&swap_motion(-0.5), DEFAULT_DIRECTION).unwrap();
        assert_eq!(x.word.letters(), &[-1]);
        let x = extract(&swap_motion(1.0), DEFAULT_DIRECTION).unwrap();
        assert_eq!(x.word.letters(), &[1, 1]);
    }

    #[test]
    fn still_strands() {
        let s = vec![vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.3)]; 5];
        let x = extract(&s, DEFAULT_DIRECTION).unwrap();
        assert!(x.word.is_empty());
        assert_eq!(x.start_order, x.end_order);
    }

    #[test]
    fn permutation_matches_endpoints() {
        let f = |s: f64| (0..5).map(|k| turns::polar(1.0 + 0.1 * k as f64, k as f64 / 5.0 + 0.7 * s * (k % 2) as f64)).collect();
        let samples = sample_motion(&f, 100, 0.3);
        let x = extract(&samples, DEFAULT_DIRECTION).unwrap();
        let perm = x.word.permutation();
        for (p, &s) in x.start_order.iter().enumerate() {
            assert_eq!(x.end_order[perm[p]], s);
        }
    }

    #[test]
    fn collision_is_reported() {
        let s = vec![vec![Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)], vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]];
        assert!(matches!(extract(&s, 0.0), Err(ProjectionError::UnresolvedCrossing(..))));
    }
}
