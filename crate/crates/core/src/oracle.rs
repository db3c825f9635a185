//! Brute-force extremal composite PLP sets for small `n`.
//!
//! Candidates are grouped by least prime factor. Two coprime composites
//! never share a least prime factor, so a composite PLP set takes at most
//! one member per group; both searches branch group by group and prune with
//! that bound. Nothing here assumes what the optimum looks like.

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{PlpError, Result};
use crate::interval::IntervalValue;
use crate::plp::{reciprocal_sum, PlpSequence};
use crate::sieve::SieveTables;

pub const DEFAULT_ORACLE_LIMIT: u64 = 5000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtremalResult {
    pub n: u64,
    pub best_size: usize,
    pub witness: PlpSequence,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_sum: Option<IntervalValue>,
}

#[derive(Clone, Copy, Debug)]
pub struct Oracle {
    pub limit: u64,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            limit: DEFAULT_ORACLE_LIMIT,
        }
    }
}

pub fn max_composite_plp_size(n: u64, t: &SieveTables) -> Result<ExtremalResult> {
    Oracle::default().max_composite_plp_size(n, t)
}

pub fn max_composite_reciprocal_sum(n: u64, t: &SieveTables) -> Result<ExtremalResult> {
    Oracle::default().max_composite_reciprocal_sum(n, t)
}

#[derive(Clone, Debug)]
struct Candidate {
    value: u64,
    group: usize,
    primes: Vec<u64>,
}

struct Space {
    /// Candidates of each group, ascending.
    groups: Vec<Vec<Candidate>>,
    /// All candidates, ascending.
    all: Vec<Candidate>,
    n: u64,
}

impl Space {
    /// Composites in `[4, n]`, factored by trial division over the sieved
    /// primes `≤ √n`.
    fn build(n: u64, t: &SieveTables) -> Space {
        let small: Vec<u64> = t
            .primes()
            .iter()
            .map(|&p| p as u64)
            .take_while(|&p| p * p <= n)
            .collect();
        let mut groups: Vec<Vec<Candidate>> = vec![Vec::new(); small.len()];
        let mut all = Vec::new();
        for c in 4..=n {
            let mut rest = c;
            let mut primes = Vec::new();
            for &p in &small {
                if p * p > rest {
                    break;
                }
                if rest % p == 0 {
                    primes.push(p);
                    while rest % p == 0 {
                        rest /= p;
                    }
                }
            }
            if primes.is_empty() {
                continue;
            }
            if rest > 1 {
                primes.push(rest);
            }
            let group = small.iter().position(|&p| p == primes[0]).expect("lpf ≤ √n");
            let cand = Candidate {
                value: c,
                group,
                primes,
            };
            groups[group].push(cand.clone());
            all.push(cand);
        }
        Space { groups, all, n }
    }
}

struct Used {
    primes: Vec<bool>,
    groups: Vec<bool>,
}

impl Used {
    fn new(space: &Space) -> Self {
        Used {
            primes: vec![false; space.n as usize + 1],
            groups: vec![false; space.groups.len()],
        }
    }

    fn fits(&self, c: &Candidate) -> bool {
        !self.groups[c.group] && c.primes.iter().all(|&p| !self.primes[p as usize])
    }

    fn set(&mut self, c: &Candidate, on: bool) {
        self.groups[c.group] = on;
        for &p in &c.primes {
            self.primes[p as usize] = on;
        }
    }
}

impl Oracle {
    pub fn with_limit(limit: u64) -> Self {
        Oracle { limit }
    }

    fn check(&self, n: u64, t: &SieveTables) -> Result<()> {
        if n < 4 || n > self.limit {
            return Err(PlpError::Domain(format!(
                "oracle n = {n} outside 4..={}",
                self.limit
            )));
        }
        if n.isqrt() > t.limit() {
            return Err(PlpError::Domain(format!(
                "isqrt({n}) exceeds sieve limit {}",
                t.limit()
            )));
        }
        Ok(())
    }

    /// Largest composite PLP set in `[4, n]`; ties go to the
    /// lexicographically smallest ascending term list.
    pub fn max_composite_plp_size(&self, n: u64, t: &SieveTables) -> Result<ExtremalResult> {
        self.check(n, t)?;
        let space = Space::build(n, t);

        let mut used = Used::new(&space);
        let mut best = 0usize;
        size_search(&space, 0, 0, &mut used, &mut best);

        let mut used = Used::new(&space);
        let mut chosen = Vec::with_capacity(best);
        let found = lex_first(&space, 0, best, &mut used, &mut chosen);
        if !found {
            return Err(PlpError::Internal(format!(
                "no composite PLP set of size {best} ≤ {n} on the ordered pass"
            )));
        }
        let witness = PlpSequence::from_valid(chosen.into_iter().map(BigUint::from).collect());
        Ok(ExtremalResult {
            n,
            best_size: best,
            witness,
            best_sum: None,
        })
    }

    /// Composite PLP set in `[4, n]` maximizing `Σ 1/a`.
    pub fn max_composite_reciprocal_sum(&self, n: u64, t: &SieveTables) -> Result<ExtremalResult> {
        self.check(n, t)?;
        let space = Space::build(n, t);
        // best possible contribution of groups i.. is the sum of their
        // smallest members' reciprocals
        let mut suffix = vec![0.0f64; space.groups.len() + 1];
        for i in (0..space.groups.len()).rev() {
            suffix[i] = suffix[i + 1] + space.groups[i].first().map_or(0.0, |c| 1.0 / c.value as f64);
        }
        let mut search = SumSearch {
            space: &space,
            suffix,
            used: Used::new(&space),
            current: Vec::new(),
            best: Vec::new(),
            best_value: 0.0,
        };
        search.run(0, 0.0);
        let mut terms = search.best;
        terms.sort_unstable();
        let witness = PlpSequence::from_valid(terms.into_iter().map(BigUint::from).collect());
        let sum = reciprocal_sum(&witness);
        Ok(ExtremalResult {
            n,
            best_size: witness.len(),
            witness,
            best_sum: Some(sum),
        })
    }
}

fn size_search(space: &Space, group: usize, size: usize, used: &mut Used, best: &mut usize) {
    if size + (space.groups.len() - group) <= *best {
        return;
    }
    if group == space.groups.len() {
        *best = size;
        return;
    }
    for c in &space.groups[group] {
        if used.fits(c) {
            used.set(c, true);
            size_search(space, group + 1, size + 1, used, best);
            used.set(c, false);
        }
    }
    size_search(space, group + 1, size, used, best);
}

/// Depth-first over candidates in ascending value order, so the first set of
/// the target size reached is the lexicographically smallest.
fn lex_first(space: &Space, from: usize, target: usize, used: &mut Used, chosen: &mut Vec<u64>) -> bool {
    if chosen.len() == target {
        return true;
    }
    let open_groups = used.groups.iter().filter(|&&g| !g).count();
    if chosen.len() + open_groups < target {
        return false;
    }
    for (i, c) in space.all.iter().enumerate().skip(from) {
        if used.fits(c) {
            used.set(c, true);
            chosen.push(c.value);
            if lex_first(space, i + 1, target, used, chosen) {
                return true;
            }
            chosen.pop();
            used.set(c, false);
        }
    }
    false
}

struct SumSearch<'a> {
    space: &'a Space,
    suffix: Vec<f64>,
    used: Used,
    current: Vec<u64>,
    best: Vec<u64>,
    best_value: f64,
}

impl SumSearch<'_> {
    fn run(&mut self, group: usize, value: f64) {
        if value + self.suffix[group] <= self.best_value {
            return;
        }
        if group == self.space.groups.len() {
            self.best_value = value;
            self.best = self.current.clone();
            return;
        }
        let space = self.space;
        for c in &space.groups[group] {
            if self.used.fits(c) {
                self.used.set(c, true);
                self.current.push(c.value);
                self.run(group + 1, value + 1.0 / c.value as f64);
                self.current.pop();
                self.used.set(c, false);
            }
        }
        self.run(group + 1, value);
    }
}
