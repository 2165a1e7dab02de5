//! Tanner-graph defects (4-cycles and small stopping sets) and the search over
//! interleaver parameters `(p, s)` that minimizes them.
//!
//! Analysis works on the binary parity-check matrix of the code: variables
//! `0..k` are information bits, `k..k+m` parity bits, and an information bit
//! wired into the same check an even number of times does not touch it.

use std::cmp::Reverse;
use std::collections::HashMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::code::{build_code_with, IraCode, RealizedDegrees, Wiring};
#[cfg(test)]
use crate::code::build_code;
use crate::interleaver::{build_gruenbaum_interleaver, gcd, DitherSequence, InterleaverSpec, ShiftMode};
use crate::{Error, Result};

/// Exhaustive stopping-set search refuses bounds above this.
pub const MAX_STOPPING_BOUND: usize = 6;
pub const DEFAULT_STOPPING_BOUND: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectReport {
    pub cycle4_total: usize,
    /// 4-cycles through two information nodes of the smallest repetition degree.
    pub cycle4_min_degree: usize,
    /// Smallest stopping set up to `searched_bound`, if any.
    pub min_stopping_set_size: Option<usize>,
    pub min_stopping_set: Option<Vec<usize>>,
    pub searched_bound: usize,
}

impl DefectReport {
    /// Lexicographic badness: min-degree 4-cycles, all 4-cycles, then smaller
    /// stopping sets are worse. Lower is better.
    pub fn score(&self) -> (usize, usize, Reverse<usize>) {
        (
            self.cycle4_min_degree,
            self.cycle4_total,
            Reverse(self.min_stopping_set_size.unwrap_or(self.searched_bound + 1)),
        )
    }

    /// `key value` lines.
    pub fn to_text(&self) -> String {
        let ss = self
            .min_stopping_set_size
            .map_or_else(|| format!("none<={}", self.searched_bound), |s| s.to_string());
        let witness = self.min_stopping_set.as_ref().map_or_else(
            || "-".to_string(),
            |v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
        );
        format!(
            "cycle4_total {}\ncycle4_min_degree {}\nmin_stopping_set_size {}\nmin_stopping_set {}\nsearched_bound {}\n",
            self.cycle4_total, self.cycle4_min_degree, ss, witness, self.searched_bound
        )
    }
}

/// Variables of each check in the binary matrix, ascending.
pub fn check_rows(code: &IraCode) -> Vec<Vec<usize>> {
    (0..code.m())
        .map(|j| {
            let mut odd: HashMap<usize, bool> = HashMap::new();
            for v in code.check_variables(j) {
                *odd.entry(v).or_insert(false) ^= true;
            }
            let mut row: Vec<usize> = odd.into_iter().filter(|&(_, o)| o).map(|(v, _)| v).collect();
            row.sort_unstable();
            row
        })
        .collect()
}

fn variable_columns(code: &IraCode, rows: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut cols = vec![Vec::new(); code.n()];
    for (j, row) in rows.iter().enumerate() {
        for &v in row {
            cols[v].push(j);
        }
    }
    cols
}

/// `(total, min_degree)` 4-cycle counts. A pair of variables sharing `c`
/// checks closes `c (c - 1) / 2` 4-cycles.
pub fn count_cycles4(code: &IraCode) -> (usize, usize) {
    let rows = check_rows(code);
    let mut shared: HashMap<(usize, usize), usize> = HashMap::new();
    for row in &rows {
        for (a, &u) in row.iter().enumerate() {
            for &v in &row[a + 1..] {
                *shared.entry((u, v)).or_insert(0) += 1;
            }
        }
    }
    let min_deg = code.rep_degree().iter().copied().min().unwrap_or(0);
    let is_min = |v: usize| v < code.k() && code.rep_degree()[v] == min_deg;
    let mut total = 0;
    let mut min_degree = 0;
    for (&(u, v), &c) in &shared {
        let cycles = c * (c - 1) / 2;
        total += cycles;
        if is_min(u) && is_min(v) {
            min_degree += cycles;
        }
    }
    (total, min_degree)
}

/// Smallest stopping set with at most `max_size` variables, or `None`.
///
/// Grows a set from each candidate minimum element; a check touched once must
/// be touched again, so the search branches over that check's other
/// variables. This is exhaustive for the given bound.
pub fn find_stopping_sets(code: &IraCode, max_size: usize) -> Result<Option<Vec<usize>>> {
    if max_size > MAX_STOPPING_BOUND {
        return Err(Error::Refused(format!(
            "stopping-set bound {max_size} above the exhaustive limit {MAX_STOPPING_BOUND}"
        )));
    }
    let rows = check_rows(code);
    let cols = variable_columns(code, &rows);
    let mut search = StoppingSearch {
        rows: &rows,
        cols: &cols,
        touch: vec![0; rows.len()],
        set: Vec::new(),
        best: None,
        limit: max_size,
    };
    for v0 in 0..cols.len() {
        if search.limit == 0 || cols[v0].is_empty() {
            continue;
        }
        search.add(v0);
        search.grow(v0);
        search.remove(v0);
    }
    Ok(search.best)
}

struct StoppingSearch<'a> {
    rows: &'a [Vec<usize>],
    cols: &'a [Vec<usize>],
    /// variables of the current set adjacent to each check
    touch: Vec<u32>,
    set: Vec<usize>,
    best: Option<Vec<usize>>,
    /// largest set size still worth exploring
    limit: usize,
}

impl StoppingSearch<'_> {
    fn add(&mut self, v: usize) {
        self.set.push(v);
        for &c in &self.cols[v] {
            self.touch[c] += 1;
        }
    }

    fn remove(&mut self, v: usize) {
        self.set.pop();
        for &c in &self.cols[v] {
            self.touch[c] -= 1;
        }
    }

    fn grow(&mut self, min_var: usize) {
        // dangling check with the fewest ways to fix it
        let mut pick: Option<(usize, usize)> = None;
        for &v in &self.set {
            for &c in &self.cols[v] {
                if self.touch[c] == 1 {
                    let options = self.rows[c].iter().filter(|&&w| w > min_var).count();
                    if pick.is_none_or(|(_, o)| options < o) {
                        pick = Some((c, options));
                    }
                }
            }
        }
        let Some((check, _)) = pick else {
            let mut found = self.set.clone();
            found.sort_unstable();
            self.limit = found.len() - 1;
            self.best = Some(found);
            return;
        };
        if self.set.len() >= self.limit {
            return;
        }
        for i in 0..self.rows[check].len() {
            let w = self.rows[check][i];
            if w <= min_var || self.set.contains(&w) {
                continue;
            }
            self.add(w);
            self.grow(min_var);
            self.remove(w);
            if self.set.len() > self.limit {
                return;
            }
        }
    }
}

/// 4-cycle counts plus the bounded stopping-set search.
pub fn analyze(code: &IraCode, stopping_bound: usize) -> Result<DefectReport> {
    let (cycle4_total, cycle4_min_degree) = count_cycles4(code);
    let witness = find_stopping_sets(code, stopping_bound)?;
    Ok(DefectReport {
        cycle4_total,
        cycle4_min_degree,
        min_stopping_set_size: witness.as_ref().map(Vec::len),
        min_stopping_set: witness,
        searched_bound: stopping_bound,
    })
}

/// Everything except `(p, s)` needed to build candidate codes.
#[derive(Debug, Clone)]
pub struct SearchSetup {
    pub n: usize,
    pub small: DitherSequence,
    pub shift: ShiftMode,
    pub rep: RealizedDegrees,
    pub check_degree: Vec<usize>,
    pub wiring: Wiring,
    pub stopping_bound: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub p: usize,
    pub s: usize,
    pub report: DefectReport,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub best: Candidate,
    /// Every evaluated candidate, in input order.
    pub evaluated: Vec<Candidate>,
}

impl SearchSetup {
    /// The 192-bit code's degrees with the Fig7 table and default shift.
    pub fn paper(stopping_bound: usize) -> Self {
        let code = crate::code::paper_code();
        Self {
            n: code.edges(),
            small: crate::interleaver::fig7_table(),
            shift: ShiftMode::SkipFirst,
            rep: RealizedDegrees {
                rep_degree: code.rep_degree().to_vec(),
            },
            check_degree: code.check_degree().to_vec(),
            wiring: code.wiring(),
            stopping_bound,
        }
    }

    pub fn evaluate(&self, p: usize, s: usize) -> Result<Candidate> {
        let spec = InterleaverSpec {
            n: self.n,
            p,
            s,
            small: self.small.clone(),
            shift: self.shift,
        };
        let perm = build_gruenbaum_interleaver(&spec)?;
        let code = build_code_with(&self.rep, &perm, &self.check_degree, &[], self.wiring)?;
        Ok(Candidate {
            p,
            s,
            report: analyze(&code, self.stopping_bound)?,
        })
    }
}

/// Coprime `p` in `p_range` crossed with every `s` in `s_range`.
pub fn grid_candidates(
    n: usize,
    p_range: std::ops::Range<usize>,
    s_range: std::ops::Range<usize>,
) -> Vec<(usize, usize)> {
    p_range
        .filter(|&p| gcd(p, n) == 1)
        .flat_map(|p| s_range.clone().map(move |s| (p, s)))
        .collect()
}

/// `count` seeded draws of coprime `p` and any `s` from the ranges.
pub fn sample_candidates(
    n: usize,
    p_range: std::ops::Range<usize>,
    s_range: std::ops::Range<usize>,
    count: usize,
    seed: u64,
) -> Result<Vec<(usize, usize)>> {
    let ps: Vec<usize> = p_range.filter(|&p| gcd(p, n) == 1).collect();
    if ps.is_empty() || s_range.is_empty() {
        return Err(Error::Parameter("no feasible (p, s) in the given ranges".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| (ps[rng.random_range(0..ps.len())], rng.random_range(s_range.clone())))
        .collect())
}

/// Evaluates every candidate (non-coprime `p` skipped) in parallel and returns
/// the lowest score, ties to smaller `p` then smaller `s`.
pub fn search_ps(setup: &SearchSetup, candidates: &[(usize, usize)]) -> Result<SearchOutcome> {
    search_ps_with_progress(setup, candidates, &|_, _| {})
}

/// [`search_ps`] reporting `(done, total)` after each chunk.
pub fn search_ps_with_progress(
    setup: &SearchSetup,
    candidates: &[(usize, usize)],
    progress: &(dyn Fn(usize, usize) + Sync),
) -> Result<SearchOutcome> {
    let feasible: Vec<(usize, usize)> = candidates
        .iter()
        .copied()
        .filter(|&(p, s)| gcd(p, setup.n) == 1 && s < setup.n)
        .collect();
    if feasible.is_empty() {
        return Err(Error::Parameter("no feasible (p, s) candidate".into()));
    }
    let mut evaluated = Vec::with_capacity(feasible.len());
    for chunk in feasible.chunks(1024) {
        let part = chunk
            .par_iter()
            .map(|&(p, s)| setup.evaluate(p, s))
            .collect::<Result<Vec<_>>>()?;
        evaluated.extend(part);
        progress(evaluated.len(), feasible.len());
    }
    let best = evaluated
        .iter()
        .min_by_key(|c| (c.report.score(), c.p, c.s))
        .cloned()
        .expect("non-empty");
    Ok(SearchOutcome { best, evaluated })
}
