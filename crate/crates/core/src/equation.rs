//! The trinomial family `Y^{mn} - X^g Y^{mp} + X^r = 0` and its derived constants.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::turns;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EquationError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("Newton polygon is not convex (q*r - n*g = {0})")]
    NonConvexNewton(i64),
    #[error("gcd(p, r - g) = {0}, expected 1")]
    BadMiddleGcd(u64),
    #[error("q = n - p = {0} must be at least 2")]
    QTooSmall(u64),
    #[error("gcd condition violated: {0}")]
    GcdConditionViolated(GcdViolation),
    #[error("r is not invertible modulo n")]
    NoInverse,
    #[error("coincidence index {0} out of range")]
    IndexOutOfRange(i64),
}

impl EquationError {
    /// Stable name used in reports and CLI payloads.
    pub fn name(&self) -> &'static str {
        match self {
            EquationError::InvalidInput(_) => "InvalidInput",
            EquationError::NonConvexNewton(_) => "NonConvexNewton",
            EquationError::BadMiddleGcd(_) => "BadMiddleGcd",
            EquationError::QTooSmall(_) => "QTooSmall",
            EquationError::GcdConditionViolated(_) => "GcdConditionViolated",
            EquationError::NoInverse => "NoInverse",
            EquationError::IndexOutOfRange(_) => "IndexOutOfRange",
        }
    }
}

/// Which coprimality condition failed, with the offending gcd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", content = "gcd")]
pub enum GcdViolation {
    #[serde(rename = "gcd(n,N)")]
    DegreeWithN(u64),
    #[serde(rename = "gcd(n,r)")]
    DegreeWithR(u64),
}

impl fmt::Display for GcdViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GcdViolation::DegreeWithN(d) => write!(f, "gcd(n, N) = {d}"),
            GcdViolation::DegreeWithR(d) => write!(f, "gcd(n, r) = {d}"),
        }
    }
}

/// How strictly the coprimality conditions are enforced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Closed-form predictions need both conditions; violations are errors.
    Predictor,
    /// Numerics work regardless; violations are kept as warnings.
    TrackerOnly,
}

/// A validated member of the family. Fields are read through accessors so the
/// invariants established by [`build_equation`] cannot be broken afterwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrinomialEquation {
    n_total: u64,
    p_total: u64,
    g: u64,
    r: u64,
    m: u64,
    n: u64,
    p: u64,
    q: u64,
    big_n: u64,
    big_r: BigRational,
    warnings: Vec<GcdViolation>,
}

pub fn build_equation(n_total: u64, p_total: u64, g: u64, r: u64) -> Result<TrinomialEquation, EquationError> {
    build_equation_with(n_total, p_total, g, r, Mode::Predictor)
}

pub fn build_equation_with(n_total: u64, p_total: u64, g: u64, r: u64, mode: Mode) -> Result<TrinomialEquation, EquationError> {
    if n_total == 0 || p_total == 0 || g == 0 || r == 0 {
        return Err(EquationError::InvalidInput("all exponents must be at least 1".into()));
    }
    if p_total >= n_total {
        return Err(EquationError::InvalidInput(format!("middle exponent {p_total} must be below the degree {n_total}")));
    }
    if n_total > 64 || g > 1_000 || r > 1_000 {
        return Err(EquationError::InvalidInput("exponents too large".into()));
    }
    let m = n_total.gcd(&p_total);
    let (n, p) = (n_total / m, p_total / m);
    let q = n - p;
    if q <= 1 {
        return Err(EquationError::QTooSmall(q));
    }
    let big_n = q as i64 * r as i64 - n as i64 * g as i64;
    if big_n <= 0 {
        return Err(EquationError::NonConvexNewton(big_n));
    }
    let big_n = big_n as u64;
    // r > g follows from N > 0, so r - g is positive here
    let middle = p.gcd(&(r - g));
    if middle != 1 {
        return Err(EquationError::BadMiddleGcd(middle));
    }
    let mut warnings = Vec::new();
    let dn = n.gcd(&big_n);
    if dn != 1 {
        warnings.push(GcdViolation::DegreeWithN(dn));
    }
    let dr = n.gcd(&r);
    if dr != 1 {
        warnings.push(GcdViolation::DegreeWithR(dr));
    }
    if mode == Mode::Predictor {
        if let Some(v) = warnings.first() {
            return Err(EquationError::GcdConditionViolated(*v));
        }
    }
    let pow = |b: u64, e: u64| num_traits::pow(BigInt::from(b), e as usize);
    let big_r = BigRational::new(pow(p, p) * pow(q, q), pow(n, n));
    Ok(TrinomialEquation { n_total, p_total, g, r, m, n, p, q, big_n, big_r, warnings })
}

impl TrinomialEquation {
    pub fn n_total(&self) -> u64 {
        self.n_total
    }
    pub fn p_total(&self) -> u64 {
        self.p_total
    }
    pub fn g(&self) -> u64 {
        self.g
    }
    pub fn r(&self) -> u64 {
        self.r
    }
    pub fn m(&self) -> u64 {
        self.m
    }
    pub fn n(&self) -> u64 {
        self.n
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    /// `q r - n g`, the number of finite branch points.
    pub fn big_n(&self) -> u64 {
        self.big_n
    }
    /// `p^p q^q / n^n`, exact.
    pub fn big_r(&self) -> &BigRational {
        &self.big_r
    }
    pub fn big_r_f64(&self) -> f64 {
        self.big_r.to_f64().expect("R is a finite positive rational")
    }
    /// Coprimality conditions that failed (empty for predictor-valid equations).
    pub fn warnings(&self) -> &[GcdViolation] {
        &self.warnings
    }
    pub fn predictor_valid(&self) -> bool {
        self.warnings.is_empty()
    }
    /// Number of roots in Y.
    pub fn degree(&self) -> usize {
        self.n_total as usize
    }

    /// Common modulus `R^{1/N}` of the finite branch points.
    pub fn branch_modulus(&self) -> f64 {
        self.big_r_f64().powf(1.0 / self.big_n as f64)
    }

    /// `|X^N / R|`, the quantity that separates the series domains.
    pub fn domain_ratio(&self, x: Complex64) -> f64 {
        x.norm().powi(self.big_n as i32) / self.big_r_f64()
    }

    /// `f(X, Y)`.
    pub fn eval(&self, x: Complex64, y: Complex64) -> Complex64 {
        y.powu(self.n_total as u32) - x.powu(self.g as u32) * y.powu(self.p_total as u32) + x.powu(self.r as u32)
    }

    /// `df/dY`.
    pub fn eval_dy(&self, x: Complex64, y: Complex64) -> Complex64 {
        let (nt, pt) = (self.n_total as u32, self.p_total as u32);
        y.powu(nt - 1) * nt as f64 - x.powu(self.g as u32) * y.powu(pt - 1) * pt as f64
    }

    /// `df/dX`.
    pub fn eval_dx(&self, x: Complex64, y: Complex64) -> Complex64 {
        let (g, r) = (self.g as u32, self.r as u32);
        -(x.powu(g - 1) * y.powu(self.p_total as u32) * g as f64) + x.powu(r - 1) * r as f64
    }

    /// Sum of the monomial magnitudes, used to make residuals relative.
    pub fn residual_scale(&self, x: Complex64, y: Complex64) -> f64 {
        let ay = y.norm();
        let ax = x.norm();
        ay.powi(self.n_total as i32) + ax.powi(self.g as i32) * ay.powi(self.p_total as i32) + ax.powi(self.r as i32)
    }

    /// `|f(X,Y)|` divided by [`Self::residual_scale`].
    pub fn relative_residual(&self, x: Complex64, y: Complex64) -> f64 {
        let s = self.residual_scale(x, y);
        if s == 0.0 {
            0.0
        } else {
            self.eval(x, y).norm() / s
        }
    }

    /// The master polynomial `T^n - X^g T^p + X^r` (coincides with `f` when m = 1).
    pub fn eval_master(&self, x: Complex64, t: Complex64) -> Complex64 {
        t.powu(self.n as u32) - x.powu(self.g as u32) * t.powu(self.p as u32) + x.powu(self.r as u32)
    }

    /// The inverse of r modulo n, when it exists.
    pub fn r_inverse_mod_n(&self) -> Option<u64> {
        mod_inverse(self.r as i64, self.n as i64).map(|v| v as u64)
    }

    /// Compact identifier such as `5,3,2,7`.
    pub fn tag(&self) -> String {
        format!("{},{},{},{}", self.n_total, self.p_total, self.g, self.r)
    }
}

pub(crate) fn mod_inverse(a: i64, modulus: i64) -> Option<i64> {
    if modulus == 1 {
        return Some(0);
    }
    let e = a.rem_euclid(modulus).extended_gcd(&modulus);
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(modulus))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NewtonPolygon {
    pub vertices: Vec<(u64, u64)>,
    pub area_twice: u64,
}

pub fn newton_polygon(eq: &TrinomialEquation) -> NewtonPolygon {
    let vertices = vec![(0, eq.n_total), (eq.g, eq.p_total), (eq.r, 0)];
    // shoelace over the triangle; convexity of the lower chain is N > 0
    let [(x0, y0), (x1, y1), (x2, y2)] = [vertices[0], vertices[1], vertices[2]].map(|(a, b)| (a as i64, b as i64));
    let twice = (x0 * (y1 - y2) + x1 * (y2 - y0) + x2 * (y0 - y1)).unsigned_abs();
    NewtonPolygon { vertices, area_twice: twice }
}

/// The finite branch points and the base point of all loops.
#[derive(Debug, Clone, Serialize)]
pub struct BranchingSet {
    /// Exact description of the modulus, e.g. `(108/3125)^(1/4)`.
    pub modulus_exact: String,
    pub modulus: f64,
    pub points: Vec<Complex64>,
    pub base_point: Complex64,
}

/// Branch points `R^{1/N} e(l/N)` and the base point `0.5 R^{1/N} e(1/(8N))`.
pub fn branching_points(eq: &TrinomialEquation) -> BranchingSet {
    let rho = eq.branch_modulus();
    let nn = eq.big_n;
    let points = (0..nn).map(|l| turns::polar(rho, l as f64 / nn as f64)).collect();
    BranchingSet { modulus_exact: format!("({})^(1/{})", eq.big_r, nn), modulus: rho, points, base_point: base_point(eq) }
}

/// Argument of the base point in turns: half-way between the rays of two
/// consecutive branch points, shifted to an eighth of the sector.
pub fn base_turns(eq: &TrinomialEquation) -> f64 {
    1.0 / (8.0 * eq.big_n as f64)
}

pub fn base_point(eq: &TrinomialEquation) -> Complex64 {
    turns::polar(0.5 * eq.branch_modulus(), base_turns(eq))
}

/// The pair of master labels that coincide at the branch point reached with
/// argument `2 pi ell_bar / N`. Any integer lift is accepted; it only enters
/// through its residue mod n.
pub fn coincidence_pair(eq: &TrinomialEquation, ell_bar: i64) -> Result<(u64, u64), EquationError> {
    if ell_bar < 0 || ell_bar > eq.big_n as i64 {
        return Err(EquationError::IndexOutOfRange(ell_bar));
    }
    let n = eq.n as i64;
    let r_inv = mod_inverse(eq.r as i64, n).ok_or(EquationError::NoInverse)?;
    let p_inv = mod_inverse(eq.p as i64, n).ok_or(EquationError::NoInverse)?;
    // ell_bar = p (r t + 1)  =>  t = (ell_bar p^{-1} - 1) r^{-1}
    let t = ((ell_bar * p_inv - 1).rem_euclid(n) * r_inv).rem_euclid(n);
    let t_prime = (t + r_inv).rem_euclid(n);
    Ok((t as u64, t_prime as u64))
}

/// The double root of the master polynomial at a branch point `omega`:
/// `T^q = (p/n) omega^g` and `T^p = (n/q) omega^{r-g}`, combined through
/// `a p + b q = 1` into `T = (T^p)^a (T^q)^b`.
pub fn collision_center(eq: &TrinomialEquation, omega: Complex64) -> Complex64 {
    let (n, p, q) = (eq.n as f64, eq.p as i64, eq.q as i64);
    let tq = omega.powu(eq.g as u32) * (p as f64 / n);
    let tp = omega.powu((eq.r - eq.g) as u32) * (n / q as f64);
    let e = p.extended_gcd(&q);
    debug_assert_eq!(e.gcd, 1);
    tp.powi(e.x as i32) * tq.powi(e.y as i32)
}

/// Serialize an exact rational as `"num/den"` (or `"num"`).
pub fn ser_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Exact rational helper used for twist angles.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(a: u64, b: u64, c: u64, d: u64) -> TrinomialEquation {
        build_equation(a, b, c, d).unwrap()
    }

    #[test]
    fn quintic_constants() {
        let e = eq(5, 3, 2, 7);
        assert_eq!((e.m(), e.n(), e.p(), e.q(), e.big_n()), (1, 5, 3, 2, 4));
        assert_eq!(e.big_r(), &ratio(108, 3125));
    }

    #[test]
    fn non_coprime_constants() {
        let e = eq(6, 2, 1, 2);
        assert_eq!((e.m(), e.n(), e.p(), e.q(), e.big_n()), (2, 3, 1, 2, 1));
        assert_eq!(e.big_r(), &ratio(4, 27));
    }

    #[test]
    fn rejections() {
        assert_eq!(build_equation(3, 1, 1, 1).unwrap_err(), EquationError::NonConvexNewton(-1));
        assert_eq!(build_equation(8, 3, 2, 5).unwrap_err(), EquationError::BadMiddleGcd(3));
        assert_eq!(build_equation(5, 4, 1, 9).unwrap_err(), EquationError::QTooSmall(1));
        assert!(matches!(build_equation(3, 3, 1, 1), Err(EquationError::InvalidInput(_))));
        assert!(matches!(build_equation(0, 3, 1, 1), Err(EquationError::InvalidInput(_))));
        // (4,1,1,6): q = 3, N = 18 - 4 = 14, gcd(4,14) = 2
        assert_eq!(build_equation(4, 1, 1, 6).unwrap_err(), EquationError::GcdConditionViolated(GcdViolation::DegreeWithN(2)));
        let lax = build_equation_with(4, 1, 1, 6, Mode::TrackerOnly).unwrap();
        assert!(!lax.predictor_valid());
        assert_eq!(lax.warnings(), &[GcdViolation::DegreeWithN(2), GcdViolation::DegreeWithR(2)]);
    }

    #[test]
    fn polygons() {
        let p = newton_polygon(&eq(5, 3, 2, 7));
        assert_eq!(p.vertices, vec![(0, 5), (2, 3), (7, 0)]);
        assert_eq!(p.area_twice, 4);
        assert_eq!(newton_polygon(&eq(4, 1, 2, 5)).area_twice, 7);
        // m = 2: doubled area is q_total r - n_total g = 4*2 - 6*1
        assert_eq!(newton_polygon(&eq(6, 2, 1, 2)).area_twice, 2);
    }

    #[test]
    fn coincidence_examples() {
        let q = eq(5, 3, 2, 7);
        let got: Vec<_> = (0..4).map(|l| coincidence_pair(&q, l).unwrap()).collect();
        assert_eq!(got, vec![(2, 0), (3, 1), (4, 2), (0, 3)]);
        assert_eq!(coincidence_pair(&eq(4, 1, 2, 5), 1).unwrap(), (0, 1));
        assert_eq!(coincidence_pair(&eq(7, 2, 1, 4), 0).unwrap(), (5, 0));
    }

    #[test]
    fn coincidence_brute_force() {
        for (a, b, c, d) in [(5, 3, 2, 7), (4, 1, 2, 5), (7, 2, 1, 4), (8, 3, 1, 3)] {
            let e = eq(a, b, c, d);
            let n = e.n() as i64;
            for l in 0..=e.big_n() as i64 {
                let (t, tp) = coincidence_pair(&e, l).unwrap();
                let sols: Vec<(i64, i64)> = (0..n)
                    .flat_map(|t| (0..n).map(move |u| (t, u)))
                    .filter(|&(t, u)| {
                        (l - e.p() as i64 * (e.r() as i64 * t + 1)).rem_euclid(n) == 0 && (e.r() as i64 * (u - t) - 1).rem_euclid(n) == 0
                    })
                    .collect();
                assert_eq!(sols, vec![(t as i64, tp as i64)]);
            }
        }
    }

    #[test]
    fn branch_points_are_double_roots() {
        let e = eq(5, 3, 2, 7);
        let b = branching_points(&e);
        assert_eq!(b.points.len(), 4);
        for w in &b.points {
            assert!((w.norm() - b.modulus).abs() < 1e-15);
            let c = collision_center(&e, *w);
            assert!(e.eval(*w, c).norm() < 1e-14, "{}", e.eval(*w, c).norm());
            assert!(e.eval_dy(*w, c).norm() < 1e-14);
        }
        assert!(e.domain_ratio(b.base_point) < 1.0);
    }

    #[test]
    fn inverse() {
        assert_eq!(mod_inverse(7, 5), Some(3));
        assert_eq!(mod_inverse(4, 8), None);
        assert_eq!(mod_inverse(3, 1), Some(0));
    }
}
