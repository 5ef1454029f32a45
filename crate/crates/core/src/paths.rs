//! Closed loops in the X-plane, built from straight segments and circular arcs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::equation::{base_turns, branching_points, TrinomialEquation};
use crate::turns;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PathError {
    #[error("path is empty")]
    Empty,
    #[error("path pieces do not join at piece {0}")]
    Disconnected(usize),
    #[error("path is not closed")]
    NotClosed,
    #[error("path passes within {0:e} of a branch point or the origin")]
    TouchesBranchPoint(f64),
    #[error("unknown loop `{0}`")]
    UnknownLoop(String),
    #[error("branch point index {0} outside 0..={1}")]
    OmegaOutOfRange(i64, u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Piece {
    Segment {
        from: Complex64,
        to: Complex64,
    },
    /// Starts at `center + radius e(start)` and sweeps `sweep` turns.
    Arc {
        center: Complex64,
        radius: f64,
        start: f64,
        sweep: f64,
    },
}

impl Piece {
    pub fn at(&self, s: f64) -> Complex64 {
        match *self {
            Piece::Segment { from, to } => from + (to - from) * s,
            Piece::Arc { center, radius, start, sweep } => center + turns::polar(radius, start + sweep * s),
        }
    }

    pub fn start(&self) -> Complex64 {
        self.at(0.0)
    }

    pub fn end(&self) -> Complex64 {
        self.at(1.0)
    }

    pub fn length(&self) -> f64 {
        match *self {
            Piece::Segment { from, to } => (to - from).norm(),
            Piece::Arc { radius, sweep, .. } => radius * sweep.abs() * std::f64::consts::TAU,
        }
    }

    pub fn reversed(&self) -> Piece {
        match *self {
            Piece::Segment { from, to } => Piece::Segment { from: to, to: from },
            Piece::Arc { center, radius, start, sweep } => Piece::Arc { center, radius, start: start + sweep, sweep: -sweep },
        }
    }

    /// Smallest distance from the piece to `z`.
    pub fn distance_to(&self, z: Complex64) -> f64 {
        match *self {
            Piece::Segment { from, to } => {
                let d = to - from;
                let len2 = d.norm_sqr();
                if len2 == 0.0 {
                    return (z - from).norm();
                }
                let s = (((z - from) * d.conj()).re / len2).clamp(0.0, 1.0);
                (from + d * s - z).norm()
            }
            Piece::Arc { center, radius, start, sweep } => {
                let w = z - center;
                let ends = (self.start() - z).norm().min((self.end() - z).norm());
                if w.norm() == 0.0 {
                    return radius;
                }
                // is the direction of z inside the swept range?
                let a = turns::arg(w);
                let (lo, span) = if sweep >= 0.0 { (start, sweep) } else { (start + sweep, -sweep) };
                let rel = (a - lo).rem_euclid(1.0);
                if span >= 1.0 || rel <= span {
                    (w.norm() - radius).abs().min(ends)
                } else {
                    ends
                }
            }
        }
    }
}

/// A piecewise path, validated to be connected (and closed unless built open).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSpec {
    pieces: Vec<Piece>,
    closed: bool,
    margin: f64,
}

impl PathSpec {
    pub fn closed(eq: &TrinomialEquation, pieces: Vec<Piece>) -> Result<Self, PathError> {
        Self::build(eq, pieces, true)
    }

    pub fn open(eq: &TrinomialEquation, pieces: Vec<Piece>) -> Result<Self, PathError> {
        Self::build(eq, pieces, false)
    }

    fn build(eq: &TrinomialEquation, pieces: Vec<Piece>, closed: bool) -> Result<Self, PathError> {
        let first = pieces.first().ok_or(PathError::Empty)?;
        let scale = first.start().norm().max(1e-300);
        for (i, w) in pieces.windows(2).enumerate() {
            if (w[0].end() - w[1].start()).norm() > 1e-9 * scale {
                return Err(PathError::Disconnected(i + 1));
            }
        }
        if closed && (pieces[pieces.len() - 1].end() - first.start()).norm() > 1e-9 * scale {
            return Err(PathError::NotClosed);
        }
        let set = branching_points(eq);
        let mut margin = f64::INFINITY;
        for piece in &pieces {
            for z in set.points.iter().copied().chain([Complex64::new(0.0, 0.0)]) {
                margin = margin.min(piece.distance_to(z));
            }
        }
        if margin <= 1e-12 * set.modulus {
            return Err(PathError::TouchesBranchPoint(margin));
        }
        Ok(PathSpec { pieces, closed, margin })
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Distance from the path to the nearest branch point or the origin.
    pub fn margin(&self) -> f64 {
        self.margin
    }

    pub fn start(&self) -> Complex64 {
        self.pieces[0].start()
    }

    pub fn length(&self) -> f64 {
        self.pieces.iter().map(Piece::length).sum()
    }
}

/// The loops that generate the monodromy, all based at the base point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoopSpec {
    /// Small circle around X = 0.
    Zero,
    /// Encloses every finite branch point but not the origin.
    Sigma,
    /// Circle around infinity (clockwise seen from the finite plane).
    Infinity,
    /// Lollipop around the branch point reached at argument `2 pi l / N`,
    /// with `l` in `0..=N`.
    Omega(i64),
    /// Concatenation, first element first.
    Composite(Vec<LoopSpec>),
}

impl LoopSpec {
    /// Parse `zero`, `sigma`, `infinity`, `omega:<l>` or `composite:<a>;<b>;..`
    /// (`,` and `+` also separate).
    pub fn parse(s: &str) -> Result<Self, PathError> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("composite:") {
            let parts: Result<Vec<_>, _> = rest.split([';', '+', ',']).filter(|p| !p.trim().is_empty()).map(LoopSpec::parse).collect();
            let parts = parts?;
            if parts.is_empty() {
                return Err(PathError::UnknownLoop(s.into()));
            }
            return Ok(LoopSpec::Composite(parts));
        }
        if let Some(rest) = s.strip_prefix("omega:") {
            return rest.trim().parse().map(LoopSpec::Omega).map_err(|_| PathError::UnknownLoop(s.into()));
        }
        match s {
            "zero" => Ok(LoopSpec::Zero),
            "sigma" => Ok(LoopSpec::Sigma),
            "infinity" => Ok(LoopSpec::Infinity),
            _ => Err(PathError::UnknownLoop(s.into())),
        }
    }

    pub fn name(&self) -> String {
        match self {
            LoopSpec::Zero => "zero".into(),
            LoopSpec::Sigma => "sigma".into(),
            LoopSpec::Infinity => "infinity".into(),
            LoopSpec::Omega(l) => format!("omega:{l}"),
            LoopSpec::Composite(parts) => {
                let names: Vec<String> = parts.iter().map(LoopSpec::name).collect();
                format!("composite:{}", names.join(";"))
            }
        }
    }
}

/// Radius of the outer circle used by the sigma, infinity and omega loops:
/// `|X^N / R| = 4`.
pub fn outer_radius(eq: &TrinomialEquation) -> f64 {
    4f64.powf(1.0 / eq.big_n() as f64) * eq.branch_modulus()
}

/// Default radius of the small circle around a branch point.
pub fn default_delta(eq: &TrinomialEquation) -> f64 {
    1e-3 * eq.branch_modulus()
}

fn circle_at_base(eq: &TrinomialEquation, sweep: f64) -> Piece {
    let rho = 0.5 * eq.branch_modulus();
    Piece::Arc { center: Complex64::new(0.0, 0.0), radius: rho, start: base_turns(eq), sweep }
}

/// Out along the base ray, once around the outer circle, back in.
fn outer_loop(eq: &TrinomialEquation) -> Vec<Piece> {
    let s0 = base_turns(eq);
    let eps = turns::polar(0.5 * eq.branch_modulus(), s0);
    let big = turns::polar(outer_radius(eq), s0);
    vec![
        Piece::Segment { from: eps, to: big },
        Piece::Arc { center: Complex64::new(0.0, 0.0), radius: outer_radius(eq), start: s0, sweep: 1.0 },
        Piece::Segment { from: big, to: eps },
    ]
}

fn reverse(pieces: &[Piece]) -> Vec<Piece> {
    pieces.iter().rev().map(Piece::reversed).collect()
}

/// The open path from the base point to the start of the small circle
/// around the branch point at argument `l / N` turns.
pub fn omega_stick(eq: &TrinomialEquation, ell: i64, delta: f64) -> Result<Vec<Piece>, PathError> {
    let nn = eq.big_n();
    if ell < 0 || ell > nn as i64 {
        return Err(PathError::OmegaOutOfRange(ell, nn));
    }
    let s0 = base_turns(eq);
    let eps = turns::polar(0.5 * eq.branch_modulus(), s0);
    let outer = outer_radius(eq);
    let target = ell as f64 / nn as f64;
    let rho = eq.branch_modulus();
    Ok(vec![
        Piece::Segment { from: eps, to: turns::polar(outer, s0) },
        Piece::Arc { center: Complex64::new(0.0, 0.0), radius: outer, start: s0, sweep: target - s0 },
        Piece::Segment { from: turns::polar(outer, target), to: turns::polar(rho + delta, target) },
    ])
}

/// Pieces of a loop, before validation.
pub fn loop_pieces(eq: &TrinomialEquation, spec: &LoopSpec, delta: f64) -> Result<Vec<Piece>, PathError> {
    Ok(match spec {
        LoopSpec::Zero => vec![circle_at_base(eq, 1.0)],
        LoopSpec::Infinity => reverse(&outer_loop(eq)),
        LoopSpec::Sigma => {
            let mut v = vec![circle_at_base(eq, -1.0)];
            v.extend(outer_loop(eq));
            v
        }
        LoopSpec::Omega(ell) => {
            let stick = omega_stick(eq, *ell, delta)?;
            let target = *ell as f64 / eq.big_n() as f64;
            let omega = turns::polar(eq.branch_modulus(), target);
            let mut v = stick.clone();
            v.push(Piece::Arc { center: omega, radius: delta, start: target, sweep: 1.0 });
            v.extend(reverse(&stick));
            v
        }
        LoopSpec::Composite(parts) => {
            let mut v = Vec::new();
            for p in parts {
                v.extend(loop_pieces(eq, p, delta)?);
            }
            v
        }
    })
}

pub fn loop_path(eq: &TrinomialEquation, spec: &LoopSpec, delta: f64) -> Result<PathSpec, PathError> {
    PathSpec::closed(eq, loop_pieces(eq, spec, delta)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equation::{base_point, build_equation};

    #[test]
    fn loops_are_closed_and_clear() {
        let eq = build_equation(5, 3, 2, 7).unwrap();
        let d = default_delta(&eq);
        for spec in [LoopSpec::Zero, LoopSpec::Sigma, LoopSpec::Infinity, LoopSpec::Omega(0), LoopSpec::Omega(4)] {
            let p = loop_path(&eq, &spec, d).unwrap();
            assert!((p.start() - base_point(&eq)).norm() < 1e-12);
            assert!(p.margin() > 0.5 * d, "{spec:?} margin {}", p.margin());
        }
        assert!(loop_path(&eq, &LoopSpec::Omega(5), d).is_err());
        assert!(loop_path(&eq, &LoopSpec::Omega(-1), d).is_err());
    }

    #[test]
    fn through_a_branch_point_is_rejected() {
        let eq = build_equation(5, 3, 2, 7).unwrap();
        let w = turns::polar(eq.branch_modulus(), 0.0);
        let eps = base_point(&eq);
        let pieces = vec![Piece::Segment { from: eps, to: w * 2.0 }, Piece::Segment { from: w * 2.0, to: eps }];
        assert!(PathSpec::closed(&eq, pieces).is_ok());
        let pieces = vec![Piece::Segment { from: eps, to: w }, Piece::Segment { from: w, to: eps }];
        assert!(matches!(PathSpec::closed(&eq, pieces), Err(PathError::TouchesBranchPoint(_))));
        let pieces = vec![Piece::Segment { from: eps, to: w * 2.0 }];
        assert_eq!(PathSpec::closed(&eq, pieces), Err(PathError::NotClosed));
    }

    #[test]
    fn arc_distance() {
        let a = Piece::Arc { center: Complex64::new(0.0, 0.0), radius: 1.0, start: 0.0, sweep: 0.25 };
        assert!((a.distance_to(Complex64::new(2.0, 2.0)) - (8f64.sqrt() - 1.0)).abs() < 1e-12);
        // direction outside the sweep: nearest end is (1,0)
        assert!((a.distance_to(Complex64::new(0.0, -1.0)) - 2f64.sqrt()).abs() < 1e-12);
        let b = a.reversed();
        assert!((b.start() - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        assert!((b.distance_to(Complex64::new(2.0, 2.0)) - (8f64.sqrt() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn parse_names() {
        for s in ["zero", "sigma", "infinity", "omega:3", "composite:zero;omega:1"] {
            assert_eq!(LoopSpec::parse(s).unwrap().name(), s);
        }
        assert!(LoopSpec::parse("omega:x").is_err());
        assert!(LoopSpec::parse("loop").is_err());
    }
}
