//! Permutation groups generated by monodromy permutations: exact order via a
//! stabilizer chain, block systems, and the checks on the Galois group.

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::braid::{compose, invert};
use crate::equation::TrinomialEquation;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GaloisError {
    #[error("generator of degree {0}, expected {1}")]
    DegreeMismatch(usize, usize),
    #[error("generator is not a permutation")]
    NotAPermutation,
}

type Perm = Vec<usize>;

fn is_identity(p: &[usize]) -> bool {
    p.iter().enumerate().all(|(i, &x)| i == x)
}

fn validate(gens: &[Perm], degree: usize) -> Result<(), GaloisError> {
    for g in gens {
        if g.len() != degree {
            return Err(GaloisError::DegreeMismatch(g.len(), degree));
        }
        let mut seen = vec![false; degree];
        for &x in g {
            if x >= degree || std::mem::replace(&mut seen[x], true) {
                return Err(GaloisError::NotAPermutation);
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
struct Level {
    base: usize,
    /// Strong generators first introduced at this level.
    gens: Vec<Perm>,
    /// `transversal[b]` maps the base point to `b`.
    transversal: Vec<Option<Perm>>,
}

/// Stabilizer chain built by the deterministic Schreier-Sims algorithm.
#[derive(Debug, Clone)]
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabilizerChain {
    pub fn new(degree: usize, generators: &[Perm]) -> Result<Self, GaloisError> {
        validate(generators, degree)?;
        let mut chain = StabilizerChain { degree, levels: Vec::new() };
        for g in generators {
            if !is_identity(g) {
                chain.add_at(g.clone(), 0);
            }
        }
        chain.complete();
        Ok(chain)
    }

    fn add_at(&mut self, g: Perm, level: usize) {
        if level == self.levels.len() {
            let base = (0..self.degree).find(|&x| g[x] != x).expect("non-identity");
            self.levels.push(Level { base, gens: Vec::new(), transversal: vec![None; self.degree] });
        }
        self.levels[level].gens.push(g);
    }

    /// Generators of the stabilizer at `level`: everything introduced there or deeper.
    fn gens_from(&self, level: usize) -> Vec<Perm> {
        self.levels[level..].iter().flat_map(|l| l.gens.iter().cloned()).collect()
    }

    fn rebuild_orbit(&mut self, level: usize) {
        let gens = self.gens_from(level);
        let n = self.degree;
        let base = self.levels[level].base;
        let mut tr: Vec<Option<Perm>> = vec![None; n];
        tr[base] = Some((0..n).collect());
        let mut queue = vec![base];
        while let Some(b) = queue.pop() {
            let ub = tr[b].clone().expect("visited");
            for s in &gens {
                let c = s[b];
                if tr[c].is_none() {
                    tr[c] = Some(compose(s, &ub));
                    queue.push(c);
                }
            }
        }
        self.levels[level].transversal = tr;
    }

    /// Strip `g` through the levels from `from` on; returns the residue and the
    /// level where it fell out (`levels.len()` if it went through).
    fn sift(&self, mut g: Perm, from: usize) -> (Perm, usize) {
        for (j, lvl) in self.levels.iter().enumerate().skip(from) {
            let b = g[lvl.base];
            match &lvl.transversal[b] {
                None => return (g, j),
                Some(u) => g = compose(&invert(u), &g),
            }
        }
        let len = self.levels.len();
        (g, len)
    }

    fn complete(&mut self) {
        'restart: loop {
            for level in (0..self.levels.len()).rev() {
                self.rebuild_orbit(level);
            }
            for level in (0..self.levels.len()).rev() {
                let gens = self.gens_from(level);
                let tr = self.levels[level].transversal.clone();
                for ub in tr.iter().flatten() {
                    let b = ub[self.levels[level].base];
                    for s in &gens {
                        let usb = tr[s[b]].as_ref().expect("orbit closed");
                        // u_{s(b)}^{-1} s u_b fixes the base point
                        let h = compose(&invert(usb), &compose(s, ub));
                        let (res, j) = self.sift(h, level + 1);
                        if !is_identity(&res) {
                            self.add_at(res, j);
                            continue 'restart;
                        }
                    }
                }
            }
            return;
        }
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().map(|l| BigUint::from(l.transversal.iter().filter(|u| u.is_some()).count())).fold(BigUint::one(), |a, b| a * b)
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn contains(&self, g: &[usize]) -> bool {
        if g.len() != self.degree {
            return false;
        }
        let (res, _) = self.sift(g.to_vec(), 0);
        is_identity(&res)
    }
}

pub fn group_order(degree: usize, generators: &[Perm]) -> Result<BigUint, GaloisError> {
    Ok(StabilizerChain::new(degree, generators)?.order())
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).map(BigUint::from).fold(BigUint::one(), |a, b| a * b)
}

pub fn orbit(degree: usize, generators: &[Perm], start: usize) -> Vec<usize> {
    let mut seen = vec![false; degree];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for g in generators {
            if !seen[g[x]] {
                seen[g[x]] = true;
                stack.push(g[x]);
            }
        }
    }
    (0..degree).filter(|&x| seen[x]).collect()
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// The finest block system in which `a` and `b` share a block (Atkinson).
/// Blocks are returned sorted, each sorted.
pub fn minimal_block(degree: usize, generators: &[Perm], a: usize, b: usize) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..degree).collect();
    let mut pending = vec![(a, b)];
    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
    parent[ra.max(rb)] = ra.min(rb);
    while let Some((x, y)) = pending.pop() {
        for g in generators {
            let (rx, ry) = (find(&mut parent, g[x]), find(&mut parent, g[y]));
            if rx != ry {
                parent[rx.max(ry)] = rx.min(ry);
                pending.push((g[x], g[y]));
            }
        }
    }
    partition_of(&mut parent)
}

fn partition_of(parent: &mut [usize]) -> Vec<Vec<usize>> {
    let n = parent.len();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut index = vec![usize::MAX; n];
    for x in 0..n {
        let r = find(parent, x);
        if index[r] == usize::MAX {
            index[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[index[r]].push(x);
    }
    blocks.sort();
    blocks
}

/// Distinct nontrivial block systems found from the pairs `(0, b)`.
/// For a transitive group these are all the minimal ones.
pub fn block_systems(degree: usize, generators: &[Perm]) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = Vec::new();
    for b in 1..degree {
        let sys = minimal_block(degree, generators, 0, b);
        if sys.len() > 1 && !out.contains(&sys) {
            out.push(sys);
        }
    }
    out
}

/// True when every generator maps blocks onto blocks.
pub fn preserves_partition(generators: &[Perm], blocks: &[Vec<usize>]) -> bool {
    let degree: usize = blocks.iter().map(Vec::len).sum();
    let mut which = vec![usize::MAX; degree];
    for (k, b) in blocks.iter().enumerate() {
        for &x in b {
            which[x] = k;
        }
    }
    generators.iter().all(|g| {
        blocks.iter().all(|b| {
            let target = which[g[b[0]]];
            b.iter().all(|&x| which[g[x]] == target)
        })
    })
}

/// Action of the generators on the blocks of a preserved partition.
pub fn block_action(generators: &[Perm], blocks: &[Vec<usize>]) -> Vec<Perm> {
    let degree: usize = blocks.iter().map(Vec::len).sum();
    let mut which = vec![0; degree];
    for (k, b) in blocks.iter().enumerate() {
        for &x in b {
            which[x] = k;
        }
    }
    generators.iter().map(|g| blocks.iter().map(|b| which[g[b[0]]]).collect()).collect()
}

/// The partition of the `mn` labels into the `n` sheets-of-one-master blocks.
pub fn sheet_blocks(eq: &TrinomialEquation) -> Vec<Vec<usize>> {
    let m = eq.m() as usize;
    (0..eq.n() as usize).map(|t| (t * m..(t + 1) * m).collect()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpectedOrder {
    pub formula: String,
    pub value: String,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GaloisReport {
    pub degree: usize,
    pub generators: usize,
    pub order: String,
    pub transitive: bool,
    pub is_symmetric: bool,
    /// Block sizes of the nontrivial minimal block systems.
    pub block_system_sizes: Vec<usize>,
    pub respects_m_blocks: Option<bool>,
    pub block_action_order: Option<String>,
    pub blocks_act_as_full_symmetric: Option<bool>,
    pub expected: Vec<ExpectedOrder>,
}

/// Group data of the monodromy group and the checks against the expected
/// Galois groups: the full symmetric group when m = 1; for m > 1 the block
/// structure and both candidate orders `m^{n-1} n!` and `m^n n!`.
pub fn check_corollaries(eq: &TrinomialEquation, generators: &[Perm]) -> Result<GaloisReport, GaloisError> {
    let degree = eq.degree();
    let chain = StabilizerChain::new(degree, generators)?;
    let order = chain.order();
    let (m, n) = (eq.m(), eq.n());
    let transitive = degree == 0 || orbit(degree, generators, 0).len() == degree;
    let systems = block_systems(degree, generators);
    let mut report = GaloisReport {
        degree,
        generators: generators.len(),
        order: order.to_string(),
        transitive,
        is_symmetric: order == factorial(degree as u64),
        block_system_sizes: systems.iter().map(|s| s[0].len()).collect(),
        respects_m_blocks: None,
        block_action_order: None,
        blocks_act_as_full_symmetric: None,
        expected: Vec::new(),
    };
    let mut expect = |formula: &str, value: BigUint| {
        report.expected.push(ExpectedOrder { formula: formula.into(), matches: value == order, value: value.to_string() });
    };
    if m == 1 {
        expect("n!", factorial(n));
    } else {
        let mu = BigUint::from(m);
        expect("m^(n-1) n!", mu.pow(n as u32 - 1) * factorial(n));
        expect("m^n n!", mu.pow(n as u32) * factorial(n));
        let blocks = sheet_blocks(eq);
        let respects = preserves_partition(generators, &blocks);
        report.respects_m_blocks = Some(respects);
        if respects {
            let action = block_action(generators, &blocks);
            let bo = group_order(n as usize, &action)?;
            report.blocks_act_as_full_symmetric = Some(bo == factorial(n));
            report.block_action_order = Some(bo.to_string());
        }
    }
    Ok(report)
}
