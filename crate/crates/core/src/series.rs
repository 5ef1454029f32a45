//! Truncated residue series for the roots near X = infinity and X = 0, and the
//! generalized binomial series psi.
//!
//! Every series here describes roots of the master polynomial
//! `T^n - X^g T^p + X^r`; for m > 1 the roots of the full equation are the
//! m-th roots `e(j/m) T^{1/m}`. Fractional powers of X are taken from a
//! [`Lifted`] point, so `Lifted::rotated(1.0)` really is "X continued once
//! around the origin".

use num_complex::Complex64;
use serde::Serialize;

use crate::equation::TrinomialEquation;
use crate::gamma;
use crate::turns;

/// A point of the X-plane together with a chosen argument (in turns).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lifted {
    pub modulus: f64,
    pub turns: f64,
}

impl Lifted {
    /// Principal lift, argument in (-1/2, 1/2].
    pub fn principal(z: Complex64) -> Self {
        Lifted { modulus: z.norm(), turns: turns::arg(z) }
    }
    pub fn new(modulus: f64, turns: f64) -> Self {
        Lifted { modulus, turns }
    }
    pub fn rotated(self, by: f64) -> Self {
        Lifted { modulus: self.modulus, turns: self.turns + by }
    }
    pub fn value(self) -> Complex64 {
        turns::polar(self.modulus, self.turns)
    }
    /// `X^{a}` on this lift.
    pub fn pow(self, a: f64) -> Complex64 {
        turns::lifted_pow(self.modulus, self.turns, a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SeriesFlag {
    /// X lies outside the convergence region of the series.
    DomainViolation,
    /// Some terms had a Gamma pole; the vanishing reciprocal gave a zero term.
    GammaPoleHit,
    /// Psi argument at or beyond the radius of convergence.
    RadiusExceeded,
    /// Several local labels give the identical series.
    BranchAmbiguous,
    /// The partial sum does not satisfy the equation.
    NotARoot,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesEvaluation {
    pub value: Complex64,
    pub terms_used: usize,
    /// Magnitude of the last included term.
    pub tail_bound_estimate: f64,
    pub domain_ok: bool,
    pub poles_skipped: usize,
    pub flags: Vec<SeriesFlag>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SeriesError {
    #[error("label {0} outside [{1}, {2}]")]
    LabelOutOfRange(i64, i64, i64),
    #[error("term count must be between 1 and {MAX_TERMS}")]
    BadTermCount,
    #[error("psi needs s different from -1")]
    DegenerateExponent,
}

pub const MAX_TERMS: usize = 600;

fn check_terms(k: usize) -> Result<(), SeriesError> {
    if k == 0 || k > MAX_TERMS {
        Err(SeriesError::BadTermCount)
    } else {
        Ok(())
    }
}

/// Coefficients `c_k`, k < count, from the first `step` values and the
/// ratio `c_{k+step} / c_k` (steps across residue classes mod `step`).
fn by_residue_classes(count: usize, step: usize, first: impl Fn(usize) -> f64, ratio: impl Fn(usize) -> f64) -> Vec<f64> {
    let mut c = Vec::with_capacity(count);
    for k in 0..count {
        if k < step {
            c.push(first(k));
        } else {
            let prev = c[k - step];
            c.push(if prev == 0.0 { 0.0 } else { prev * ratio(k - step) });
        }
    }
    c
}

fn rising(a: f64, len: u64) -> f64 {
    (0..len).map(|i| a + i as f64).product()
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Real coefficients of the series at infinity:
/// `c_k = Gamma((1+pk)/n) / (n Gamma((1-qk)/n + 1) k!)`.
pub fn inf_coefficients(eq: &TrinomialEquation, count: usize) -> Vec<f64> {
    let (n, p, q) = (eq.n() as f64, eq.p() as f64, eq.q() as f64);
    let a = |k: usize| (1.0 + p * k as f64) / n;
    let b = |k: usize| (1.0 - q * k as f64) / n + 1.0;
    by_residue_classes(
        count,
        eq.n() as usize,
        |k| gamma::gamma(a(k)) * gamma::rgamma(b(k)) / (n * factorial(k)),
        |k| {
            // Gamma(a+p)/Gamma(a) * Gamma(b)/Gamma(b-q) * k!/(k+n)!
            let down: f64 = (1..=eq.q()).map(|i| b(k) - i as f64).product();
            rising(a(k), eq.p()) * down / rising(k as f64 + 1.0, eq.n())
        },
    )
}

/// Same coefficients through log-gamma, for cross-checking the recurrence.
pub fn inf_coefficients_lgamma(eq: &TrinomialEquation, count: usize) -> Vec<f64> {
    let (n, p, q) = (eq.n() as f64, eq.p() as f64, eq.q() as f64);
    (0..count)
        .map(|k| {
            let b = (1.0 - q * k as f64) / n + 1.0;
            if gamma::is_pole(b) {
                return 0.0;
            }
            let (la, sa) = gamma::ln_gamma_signed((1.0 + p * k as f64) / n);
            let (lb, sb) = gamma::ln_gamma_signed(b);
            let (lk, _) = gamma::ln_gamma_signed(k as f64 + 1.0);
            sa * sb * (la - lb - lk).exp() / n
        })
        .collect()
}

/// `c_k = Gamma((1+nk)/p) / (p Gamma((1+p+qk)/p) k!)`.
pub fn p_coefficients(eq: &TrinomialEquation, count: usize) -> Vec<f64> {
    let (n, p, q) = (eq.n() as f64, eq.p() as f64, eq.q() as f64);
    let a = |k: usize| (1.0 + n * k as f64) / p;
    let b = |k: usize| (1.0 + p + q * k as f64) / p;
    by_residue_classes(
        count,
        eq.p() as usize,
        |k| gamma::gamma(a(k)) * gamma::rgamma(b(k)) / (p * factorial(k)),
        |k| rising(a(k), eq.n()) / (rising(b(k), eq.q()) * rising(k as f64 + 1.0, eq.p())),
    )
}

pub fn p_coefficients_lgamma(eq: &TrinomialEquation, count: usize) -> Vec<f64> {
    let (n, p, q) = (eq.n() as f64, eq.p() as f64, eq.q() as f64);
    (0..count)
        .map(|k| {
            let (la, _) = gamma::ln_gamma_signed((1.0 + n * k as f64) / p);
            let (lb, _) = gamma::ln_gamma_signed((1.0 + p + q * k as f64) / p);
            let (lk, _) = gamma::ln_gamma_signed(k as f64 + 1.0);
            (la - lb - lk).exp() / p
        })
        .collect()
}

/// `c_k = Gamma((-1+nk)/q) / (q Gamma((-1+pk)/q + 1) k!)`; `c_0 = -1`.
pub fn q_coefficients(eq: &TrinomialEquation, count: usize) -> Vec<f64> {
    let (n, p, q) = (eq.n() as f64, eq.p() as f64, eq.q() as f64);
    let a = |k: usize| (-1.0 + n * k as f64) / q;
    let b = |k: usize| (-1.0 + p * k as f64) / q + 1.0;
    by_residue_classes(
        count,
        eq.q() as usize,
        |k| gamma::gamma(a(k)) * gamma::rgamma(b(k)) / (q * factorial(k)),
        |k| rising(a(k), eq.n()) / (rising(b(k), eq.p()) * rising(k as f64 + 1.0, eq.q())),
    )
}

pub fn q_coefficients_lgamma(eq: &TrinomialEquation, count: usize) -> Vec<f64> {
    let (n, p, q) = (eq.n() as f64, eq.p() as f64, eq.q() as f64);
    (0..count)
        .map(|k| {
            let (la, sa) = gamma::ln_gamma_signed((-1.0 + n * k as f64) / q);
            let (lb, sb) = gamma::ln_gamma_signed((-1.0 + p * k as f64) / q + 1.0);
            let (lk, _) = gamma::ln_gamma_signed(k as f64 + 1.0);
            sa * sb * (la - lb - lk).exp() / q
        })
        .collect()
}

fn summed(terms: impl Iterator<Item = Complex64>, domain_ok: bool, poles: usize) -> SeriesEvaluation {
    let mut value = Complex64::new(0.0, 0.0);
    let mut last = 0.0;
    let mut used = 0;
    for t in terms {
        value += t;
        last = t.norm();
        used += 1;
    }
    let mut flags = Vec::new();
    if !domain_ok {
        flags.push(SeriesFlag::DomainViolation);
    }
    if poles > 0 {
        flags.push(SeriesFlag::GammaPoleHit);
    }
    SeriesEvaluation { value, terms_used: used, tail_bound_estimate: last, domain_ok, poles_skipped: poles, flags }
}

fn check_label(t: i64, lo: i64, hi: i64) -> Result<(), SeriesError> {
    if t < lo || t > hi {
        Err(SeriesError::LabelOutOfRange(t, lo, hi))
    } else {
        Ok(())
    }
}

/// Master root with label `t` in `|X^N/R| > 1`:
/// `sum_k c_k e((1-qk)/(2n)) W^{r-Nk}`, `W = e(t/n) X^{1/n}`.
pub fn eval_inf_series(eq: &TrinomialEquation, t: i64, x: Lifted, terms: usize) -> Result<SeriesEvaluation, SeriesError> {
    check_label(t, 0, eq.n() as i64 - 1)?;
    check_terms(terms)?;
    let (n, q, nn, r) = (eq.n() as f64, eq.q() as f64, eq.big_n() as f64, eq.r() as f64);
    let w = x.rotated(t as f64);
    let c = inf_coefficients(eq, terms);
    let poles = (0..terms).filter(|&k| gamma::is_pole((1.0 - q * k as f64) / n + 1.0)).count();
    let it = c.iter().enumerate().map(|(k, ck)| {
        let k = k as f64;
        turns::e((1.0 - q * k) / (2.0 * n)) * w.pow((r - nn * k) / n) * *ck
    });
    Ok(summed(it, eq.domain_ratio(x.value()) > 1.0, poles))
}

/// p-cluster root `t` in `|X^N/R| < 1`: `sum_k c_k U^{r-g+Nk}`, `U = e(t/p) X^{1/p}`.
pub fn eval_p_series(eq: &TrinomialEquation, t: i64, x: Lifted, terms: usize) -> Result<SeriesEvaluation, SeriesError> {
    check_label(t, 0, eq.p() as i64 - 1)?;
    check_terms(terms)?;
    let (p, nn, e0) = (eq.p() as f64, eq.big_n() as f64, (eq.r() - eq.g()) as f64);
    let u = x.rotated(t as f64);
    let c = p_coefficients(eq, terms);
    let it = c.iter().enumerate().map(|(k, ck)| u.pow((e0 + nn * k as f64) / p) * *ck);
    Ok(summed(it, eq.domain_ratio(x.value()) < 1.0, 0))
}

/// q-cluster series with the phase `e((g+Nk) t'/q)` applied as written.
///
/// This form does not describe a root in general: distinct labels can give
/// identical sums, and its leading coefficient is -1. Both problems are
/// surfaced through flags; use [`eval_q_sheet`] for the q-cluster roots.
pub fn eval_q_series(eq: &TrinomialEquation, t_prime: i64, x: Lifted, terms: usize) -> Result<SeriesEvaluation, SeriesError> {
    check_label(t_prime, eq.p() as i64, eq.n() as i64 - 1)?;
    check_terms(terms)?;
    let (q, nn, g) = (eq.q() as f64, eq.big_n() as f64, eq.g() as f64);
    let c = q_coefficients(eq, terms);
    let it = c.iter().enumerate().map(|(k, ck)| {
        let e = g + nn * k as f64;
        turns::e(e * t_prime as f64 / q) * x.pow(e / q) * *ck
    });
    let mut ev = summed(it, eq.domain_ratio(x.value()) < 1.0, 0);
    if q_label_ambiguous(eq, t_prime) {
        ev.flags.push(SeriesFlag::BranchAmbiguous);
    }
    if ev.domain_ok && master_residual(eq, x.value(), ev.value) > 1e-6 {
        ev.flags.push(SeriesFlag::NotARoot);
    }
    Ok(ev)
}

/// True when another label in `[p, n-1]` yields the same literal q-series.
/// Phases agree for all k exactly when `g (t' - t'') = 0 mod q`, because
/// `N = -p g mod q`.
pub fn q_label_ambiguous(eq: &TrinomialEquation, t_prime: i64) -> bool {
    let q = eq.q() as i64;
    (eq.p() as i64..eq.n() as i64).any(|u| u != t_prime && (eq.g() as i64 * (t_prime - u)).rem_euclid(q) == 0)
}

/// q-cluster root on sheet `j` in [0, q-1]:
/// `e(j/q) W^g V(e(-pj/q) W^N)` with `W = X^{1/q}` and `V` the root of
/// `v^n - v^p + s = 0` with `V(0) = 1`, whose coefficients are `-c_k`.
pub fn eval_q_sheet(eq: &TrinomialEquation, j: i64, x: Lifted, terms: usize) -> Result<SeriesEvaluation, SeriesError> {
    check_label(j, 0, eq.q() as i64 - 1)?;
    check_terms(terms)?;
    let (p, q, nn, g) = (eq.p() as f64, eq.q() as f64, eq.big_n() as f64, eq.g() as f64);
    let c = q_coefficients(eq, terms);
    let jf = j as f64;
    let it = c.iter().enumerate().map(|(k, ck)| {
        let k = k as f64;
        turns::e(jf / q - p * jf * k / q) * x.pow((g + nn * k) / q) * (-*ck)
    });
    Ok(summed(it, eq.domain_ratio(x.value()) < 1.0, 0))
}

/// Relative residual of a master root candidate.
pub fn master_residual(eq: &TrinomialEquation, x: Complex64, t: Complex64) -> f64 {
    let (n, p, g, r) = (eq.n() as i32, eq.p() as i32, eq.g() as i32, eq.r() as i32);
    let scale = t.norm().powi(n) + x.norm().powi(g) * t.norm().powi(p) + x.norm().powi(r);
    if scale == 0.0 {
        0.0
    } else {
        eq.eval_master(x, t).norm() / scale
    }
}

/// Radius of convergence `|s^s / (s+1)^{s+1}|` of psi.
pub fn psi_radius(s: Complex64) -> f64 {
    ((s * s.ln()).exp() / ((s + 1.0) * (s + 1.0).ln()).exp()).norm()
}

/// `psi(alpha, s, x) = sum_k alpha Gamma(alpha + k(s+1)) / (Gamma(alpha + ks + 1) k!) x^k`.
pub fn eval_psi(alpha: Complex64, s: Complex64, x: Complex64, terms: usize) -> Result<SeriesEvaluation, SeriesError> {
    check_terms(terms)?;
    // s = 0 is the ordinary binomial series (radius 1 in the limit); s = -1 has no series
    if (s + 1.0).norm() < 1e-15 {
        return Err(SeriesError::DegenerateExponent);
    }
    let mut poles = 0;
    let mut terms_v = Vec::with_capacity(terms);
    terms_v.push(Complex64::new(1.0, 0.0));
    for k in 1..terms {
        let kf = k as f64;
        let num = alpha + (s + 1.0) * kf;
        let den = alpha + s * kf + 1.0;
        if gamma::is_pole_complex(den) {
            terms_v.push(Complex64::new(0.0, 0.0));
            continue;
        }
        if gamma::is_pole_complex(num) || x.norm() == 0.0 || alpha.norm() == 0.0 {
            if gamma::is_pole_complex(num) && alpha.norm() != 0.0 {
                poles += 1;
            }
            terms_v.push(Complex64::new(0.0, 0.0));
            continue;
        }
        let log =
            alpha.ln() + gamma::ln_gamma_complex(num) - gamma::ln_gamma_complex(den) - gamma::ln_gamma_signed(kf + 1.0).0 + x.ln() * kf;
        terms_v.push(log.exp());
    }
    let radius = if s.norm() == 0.0 { 1.0 } else { psi_radius(s) };
    let domain_ok = x.norm() < radius * (1.0 - 1e-12);
    let mut ev = summed(terms_v.into_iter(), domain_ok, poles);
    if !domain_ok {
        ev.flags.retain(|f| *f != SeriesFlag::DomainViolation);
        ev.flags.insert(0, SeriesFlag::RadiusExceeded);
    }
    Ok(ev)
}
