//! Artin braid words and their invariants.
//!
//! Conventions used everywhere in the crate:
//! * letters are read left to right in chronological order;
//! * letter `i > 0` is the positive crossing of positions `i-1` and `i`
//!   (0-based), `-i` its inverse;
//! * the permutation of a word maps a starting position to the final
//!   position of the same strand, so `w1 w2` has permutation `perm(w2) o perm(w1)`;
//! * the reduced Burau matrix of `w1 w2` is `B(w1) B(w2)`.

use std::ops::Mul;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::laurent::Laurent;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BraidError {
    #[error("generator {letter} out of range for {strands} strands")]
    OutOfRange { letter: i64, strands: usize },
    #[error("braid words on {0} and {1} strands cannot be compared")]
    StrandMismatch(usize, usize),
    #[error("Lambda family argument {arg} out of range for {strands} strands")]
    LambdaOutOfRange { arg: i64, strands: usize },
}

/// A braid word; serialized as `{"strands": n, "letters": [1, 3, -2]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self, BraidError> {
        let strands = strands.max(1);
        for &l in &letters {
            if l == 0 || l.unsigned_abs() as usize >= strands {
                return Err(BraidError::OutOfRange { letter: l as i64, strands });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn identity(strands: usize) -> Self {
        BraidWord { strands: strands.max(1), letters: Vec::new() }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Concatenation: `self` first, then `other`.
    pub fn then(&self, other: &BraidWord) -> Result<BraidWord, BraidError> {
        if self.strands != other.strands {
            return Err(BraidError::StrandMismatch(self.strands, other.strands));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord { strands: self.strands, letters })
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord { strands: self.strands, letters: self.letters.iter().rev().map(|l| -l).collect() }
    }

    pub fn power(&self, k: i64) -> BraidWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.letters.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        BraidWord { strands: self.strands, letters }
    }

    /// Cancel adjacent `x x^{-1}` pairs.
    pub fn free_reduce(&self) -> BraidWord {
        let mut out: Vec<i32> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        BraidWord { strands: self.strands, letters: out }
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.signum() as i64).sum()
    }

    /// Start position to end position.
    pub fn permutation(&self) -> Vec<usize> {
        let mut at: Vec<usize> = (0..self.strands).collect(); // at[pos] = strand there
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize;
            at.swap(i - 1, i);
        }
        let mut perm = vec![0; self.strands];
        for (pos, &s) in at.iter().enumerate() {
            perm[s] = pos;
        }
        perm
    }

    /// Exact reduced Burau matrix, `(n-1) x (n-1)`.
    pub fn burau(&self) -> BurauMatrix {
        let mut m = BurauMatrix::identity(self.strands.saturating_sub(1));
        for &l in &self.letters {
            m.apply_generator(l);
        }
        m
    }

    pub fn invariants(&self) -> BraidInvariants {
        BraidInvariants { permutation: self.permutation(), exponent_sum: self.exponent_sum(), burau: self.burau() }
    }
}

/// Kind selector for the families `Lambda`, `Lambda-bar`, `Lambda+`, `Lambda-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LambdaKind {
    Plain,
    Bar,
    Plus,
    Minus,
}

/// `Lambda(l) = s_l ... s_1` (l in [0, n-1]), `Lambda-bar(l) = s_{n-l} ... s_{n-1}`
/// (l in [1, n]), `Lambda+(k) = s_1 ... s_k` (k in [0, n-1]),
/// `Lambda-(j) = s_{n-1} ... s_{n-j}` (j in [1, n]); `Lambda-bar(n)` and
/// `Lambda-(n)` are the identity.
pub fn lambda_family(kind: LambdaKind, arg: i64, n: usize) -> Result<BraidWord, BraidError> {
    let ni = n as i64;
    let (lo, hi) = match kind {
        LambdaKind::Plain | LambdaKind::Plus => (0, ni - 1),
        LambdaKind::Bar | LambdaKind::Minus => (1, ni),
    };
    if arg < lo || arg > hi || n == 0 {
        return Err(BraidError::LambdaOutOfRange { arg, strands: n });
    }
    let letters: Vec<i32> = match kind {
        LambdaKind::Plain => (1..=arg).rev().collect::<Vec<i64>>(),
        LambdaKind::Plus => (1..=arg).collect(),
        LambdaKind::Bar if arg == ni => Vec::new(),
        LambdaKind::Bar => (ni - arg..ni).collect(),
        LambdaKind::Minus if arg == ni => Vec::new(),
        LambdaKind::Minus => (ni - arg..ni).rev().collect(),
    }
    .into_iter()
    .map(|x| x as i32)
    .collect();
    BraidWord::new(n, letters)
}

/// The Garside half twist `Lambda(1) ... Lambda(n-1)`.
pub fn garside(n: usize) -> BraidWord {
    let mut w = BraidWord::identity(n);
    for l in 1..n as i64 {
        w = w.then(&lambda_family(LambdaKind::Plain, l, n).expect("in range")).expect("same strands");
    }
    w
}

/// Square matrix over `Z[t, t^-1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BurauMatrix {
    dim: usize,
    entries: Vec<Laurent>,
}

impl BurauMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Laurent::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Laurent::one();
        }
        BurauMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Laurent {
        &self.entries[i * self.dim + j]
    }

    fn set(&mut self, i: usize, j: usize, v: Laurent) {
        self.entries[i * self.dim + j] = v;
    }

    /// Right-multiply by the image of one generator. The image differs from
    /// the identity only in row `r = |l| - 1`: `(t, -t, 1)` in columns
    /// `r-1, r, r+1` for `s_i`, and `(1, -1/t, 1/t)` for its inverse.
    fn apply_generator(&mut self, l: i32) {
        let r = l.unsigned_abs() as usize - 1;
        let row: [(isize, Laurent); 3] = if l > 0 {
            [(-1, Laurent::monomial(1, 1)), (0, Laurent::monomial(-1, 1)), (1, Laurent::one())]
        } else {
            [(-1, Laurent::one()), (0, Laurent::monomial(-1, -1)), (1, Laurent::monomial(1, -1))]
        };
        let d = self.dim;
        for a in 0..d {
            let pivot = self.get(a, r).clone();
            if pivot.is_zero() {
                continue;
            }
            for (off, s) in &row {
                let b = r as isize + off;
                if b < 0 || b as usize >= d {
                    continue;
                }
                let b = b as usize;
                let add = &pivot * s;
                let new = if b == r { add } else { self.get(a, b) + &add };
                self.set(a, b, new);
            }
        }
    }

    pub fn trace(&self) -> Laurent {
        (0..self.dim).fold(Laurent::zero(), |acc, i| &acc + self.get(i, i))
    }

    pub fn is_identity(&self) -> bool {
        *self == BurauMatrix::identity(self.dim)
    }

    /// True when the matrix is `c t^k` times the identity.
    pub fn is_scalar(&self) -> bool {
        if self.dim == 0 {
            return true;
        }
        let d0 = self.get(0, 0);
        (0..self.dim).all(|i| (0..self.dim).all(|j| if i == j { self.get(i, j) == d0 } else { self.get(i, j).is_zero() }))
    }

    /// Coefficients (constant term first) of `det(x I - M)` via Faddeev-LeVerrier;
    /// the divisions by k are exact over the integers.
    pub fn characteristic_polynomial(&self) -> Vec<Laurent> {
        let d = self.dim;
        let mut c = vec![Laurent::zero(); d + 1];
        c[d] = Laurent::one();
        let mut mk = BurauMatrix { dim: d, entries: vec![Laurent::zero(); d * d] };
        for k in 1..=d {
            // M_k = M M_{k-1} + c_{d-k+1} I
            let mut next = self * &mk;
            for i in 0..d {
                let v = next.get(i, i) + &c[d - k + 1];
                next.set(i, i, v);
            }
            let tr = (self * &next).trace();
            c[d - k] = (-&tr).div_exact(&BigInt::from(k as i64)).expect("Faddeev-LeVerrier division is exact");
            mk = next;
        }
        c
    }

    pub fn rows(&self) -> Vec<Vec<String>> {
        (0..self.dim).map(|i| (0..self.dim).map(|j| self.get(i, j).to_string()).collect()).collect()
    }
}

impl Mul for &BurauMatrix {
    type Output = BurauMatrix;

    fn mul(self, other: &BurauMatrix) -> BurauMatrix {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = BurauMatrix { dim: d, entries: vec![Laurent::zero(); d * d] };
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidInvariants {
    pub permutation: Vec<usize>,
    pub exponent_sum: i64,
    pub burau: BurauMatrix,
}

pub fn invariants_of(word: &BraidWord) -> BraidInvariants {
    word.invariants()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sameness {
    EqualByInvariants,
    Distinct,
}

/// Compare two words by permutation, exponent sum and Burau matrix. The Burau
/// representation is not faithful from 5 strands on, so equality is strong
/// evidence rather than proof.
pub fn same_element(w1: &BraidWord, w2: &BraidWord) -> Result<Sameness, BraidError> {
    if w1.strands != w2.strands {
        return Err(BraidError::StrandMismatch(w1.strands, w2.strands));
    }
    let same = w1.exponent_sum() == w2.exponent_sum() && w1.permutation() == w2.permutation() && w1.burau() == w2.burau();
    Ok(if same { Sameness::EqualByInvariants } else { Sameness::Distinct })
}

/// Data unchanged under conjugation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugationInvariants {
    /// Cycle lengths of the permutation, sorted decreasingly.
    pub cycle_type: Vec<usize>,
    pub exponent_sum: i64,
    /// Characteristic polynomial of the Burau matrix, constant term first.
    pub char_poly: Vec<Laurent>,
}

pub fn conjugation_invariants(word: &BraidWord) -> ConjugationInvariants {
    ConjugationInvariants {
        cycle_type: cycle_type(&word.permutation()),
        exponent_sum: word.exponent_sum(),
        char_poly: word.burau().characteristic_polynomial(),
    }
}

pub fn cycle_type(perm: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// `(a o b)[i] = a[b[i]]`.
pub fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

pub fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}
