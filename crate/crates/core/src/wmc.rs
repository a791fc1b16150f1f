//! Exact weighted model counting.
//!
//! DPLL search with counter-based unit propagation, decomposition into
//! connected components of the residual formula, and a component cache
//! keyed by (unassigned variables, open clause ids). No pure-literal rule:
//! with arbitrary weights a pure literal does not dominate its negation.
//!
//! The engine is generic over a [`Semiring`]; exact formulas count in
//! [`ExactWeight`], float formulas in double-double [`Compensated`].

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::cnf::{CnfError, Lit, Mode, WeightedCnf};
use crate::weight::{Compensated, ExactWeight, FloatWeight, Semiring, WeightValue};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CountError {
    #[error("time limit of {0:?} exceeded")]
    Timeout(Duration),
    #[error("count was cancelled")]
    Cancelled,
    #[error("{0} variables is too many for enumeration (limit 24)")]
    TooManyVariables(u32),
    #[error(transparent)]
    Formula(#[from] CnfError),
}

impl CountError {
    /// Resource exhaustion rather than a malformed input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, CountError::Timeout(_) | CountError::Cancelled)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Heuristic {
    /// Lowest unassigned id, i.e. earliest time step for encoder output.
    /// Follows the circuit left to right, which keeps cached components
    /// small on layered formulas.
    #[default]
    LowestId,
    /// Most occurrences in open clauses of the component, ties to lowest id.
    MostOccurrences,
}

#[derive(Debug, Clone)]
pub struct CountOptions {
    pub timeout: Option<Duration>,
    pub cancel: Option<Arc<AtomicBool>>,
    /// Approximate cache budget in bytes.
    pub cache_bytes: usize,
    pub heuristic: Heuristic,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            timeout: Some(Duration::from_secs(300)),
            cancel: None,
            cache_bytes: 512 << 20,
            heuristic: Heuristic::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CountStats {
    pub decisions: u64,
    pub propagations: u64,
    pub cache_hits: u64,
    pub cache_evictions: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountResult {
    pub value: WeightValue,
    pub stats: CountStats,
}

const STACK_BYTES: usize = 512 << 20;

/// Counts `f` with default options.
pub fn count(f: &WeightedCnf) -> Result<CountResult, CountError> {
    count_with(f, &CountOptions::default())
}

pub fn count_with(f: &WeightedCnf, opts: &CountOptions) -> Result<CountResult, CountError> {
    f.validate()?;
    // Deep formulas recurse once per decision level.
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .name("wmc".into())
            .stack_size(STACK_BYTES)
            .spawn_scoped(s, || match f.mode {
                Mode::Exact => {
                    let (v, stats) = run::<ExactWeight>(f, opts, exact_weight)?;
                    Ok(CountResult {
                        value: WeightValue::Exact(v),
                        stats,
                    })
                }
                Mode::Float => {
                    let (v, stats) = run::<Compensated>(f, opts, float_weight)?;
                    Ok(CountResult {
                        value: WeightValue::Float(
                            FloatWeight::new(v.value()).expect("finite inputs give finite counts"),
                        ),
                        stats,
                    })
                }
            })
            .expect("spawn counting thread")
            .join()
            .expect("counting thread panicked")
    })
}

fn exact_weight(w: &WeightValue) -> ExactWeight {
    match w {
        WeightValue::Exact(e) => e.clone(),
        WeightValue::Float(_) => unreachable!("validated mode"),
    }
}

fn float_weight(w: &WeightValue) -> Compensated {
    Compensated::new(w.to_f64())
}

fn literal_weights<S: Semiring>(f: &WeightedCnf, conv: fn(&WeightValue) -> S) -> Vec<[S; 2]> {
    // index 0: positive literal, 1: negative.
    let mut w = vec![[S::one(), S::one()]; f.num_vars as usize + 1];
    for (&lit, value) in &f.weights {
        let side = usize::from(lit < 0);
        w[lit.unsigned_abs() as usize][side] = conv(value);
    }
    w
}

/// Enumerates all assignments. Independent of the search engine.
pub fn brute_count(f: &WeightedCnf) -> Result<WeightValue, CountError> {
    f.validate()?;
    if f.num_vars > 24 {
        return Err(CountError::TooManyVariables(f.num_vars));
    }
    Ok(match f.mode {
        Mode::Exact => WeightValue::Exact(enumerate(f, exact_weight)),
        Mode::Float => WeightValue::Float(
            FloatWeight::new(enumerate(f, float_weight).value()).expect("finite count"),
        ),
    })
}

fn enumerate<S: Semiring>(f: &WeightedCnf, conv: fn(&WeightValue) -> S) -> S {
    let w = literal_weights(f, conv);
    let n = f.num_vars as usize;
    // Clause as (positive mask, negative mask) over assignment bits.
    let masks: Vec<(u32, u32)> = f
        .clauses
        .iter()
        .map(|c| {
            c.iter().fold((0, 0), |(p, q), &l| {
                let bit = 1u32 << (l.unsigned_abs() - 1);
                if l > 0 {
                    (p | bit, q)
                } else {
                    (p, q | bit)
                }
            })
        })
        .collect();
    // Weight products of the low and high halves of the assignment.
    let lo = n / 2;
    let table = |first: usize, len: usize| -> Vec<S> {
        (0..1u32 << len)
            .map(|m| {
                (0..len).fold(S::one(), |acc, i| {
                    acc.times(&w[first + i + 1][usize::from(m >> i & 1 == 0)])
                })
            })
            .collect()
    };
    let lo_w = table(0, lo);
    let hi_w = table(lo, n - lo);
    let mut total = S::zero();
    for a in 0u32..(1u64 << n) as u32 {
        if masks.iter().all(|&(p, q)| a & p != 0 || !a & q != 0) {
            let l = &lo_w[(a & ((1 << lo) - 1)) as usize];
            let h = &hi_w[(a >> lo) as usize];
            total = total.plus(&l.times(h));
        }
    }
    total
}

struct CacheEntry<S> {
    value: S,
    last_used: u64,
}

struct Solver<'a, S: Semiring> {
    clauses: &'a [Vec<Lit>],
    weights: Vec<[S; 2]>,
    /// Clause ids per literal; index `2v` positive, `2v+1` negative.
    occ: Vec<Vec<u32>>,
    /// Clause ids per variable.
    var_occ: Vec<Vec<u32>>,
    /// 0 unassigned, 1 true, -1 false.
    value: Vec<i8>,
    trail: Vec<Lit>,
    n_false: Vec<u32>,
    n_sat: Vec<u32>,
    pending: Vec<u32>,
    conflict: bool,
    clause_mark: Vec<u64>,
    var_mark: Vec<u64>,
    epoch: u64,
    cache: HashMap<Vec<u32>, CacheEntry<S>>,
    cache_bytes: usize,
    tick: u64,
    opts: &'a CountOptions,
    deadline: Option<Instant>,
    stats: CountStats,
}

#[derive(Debug)]
struct Component {
    vars: Vec<u32>,
    clauses: Vec<u32>,
}

impl Component {
    fn key(&self) -> Vec<u32> {
        let mut k = Vec::with_capacity(self.vars.len() + self.clauses.len() + 1);
        k.extend_from_slice(&self.vars);
        k.push(u32::MAX);
        k.extend_from_slice(&self.clauses);
        k
    }
}

fn occ_index(l: Lit) -> usize {
    2 * l.unsigned_abs() as usize + usize::from(l < 0)
}

fn run<S: Semiring>(
    f: &WeightedCnf,
    opts: &CountOptions,
    conv: fn(&WeightValue) -> S,
) -> Result<(S, CountStats), CountError> {
    let start = Instant::now();
    let n = f.num_vars as usize;
    let mut occ = vec![Vec::new(); 2 * n + 2];
    let mut var_occ = vec![Vec::new(); n + 1];
    for (i, c) in f.clauses.iter().enumerate() {
        for &l in c {
            occ[occ_index(l)].push(i as u32);
            let vo: &mut Vec<u32> = &mut var_occ[l.unsigned_abs() as usize];
            if vo.last() != Some(&(i as u32)) {
                vo.push(i as u32);
            }
        }
    }
    let mut s = Solver {
        clauses: &f.clauses,
        weights: literal_weights(f, conv),
        occ,
        var_occ,
        value: vec![0; n + 1],
        trail: Vec::new(),
        n_false: vec![0; f.clauses.len()],
        n_sat: vec![0; f.clauses.len()],
        pending: Vec::new(),
        conflict: false,
        clause_mark: vec![0; f.clauses.len()],
        var_mark: vec![0; n + 1],
        epoch: 0,
        cache: HashMap::new(),
        cache_bytes: 0,
        tick: 0,
        opts,
        deadline: opts.timeout.map(|t| start + t),
        stats: CountStats::default(),
    };

    let mut total = S::one();
    for v in 1..=n as u32 {
        if s.var_occ[v as usize].is_empty() {
            let [pos, neg] = &s.weights[v as usize];
            debug_assert!(
                !f.all_constrained || !(pos.is_one() && neg.is_one()),
                "unit-weight variable {v} is unconstrained"
            );
            total = total.times(&pos.plus(neg));
        }
    }
    // Unit clauses first.
    for (i, c) in f.clauses.iter().enumerate() {
        if c.len() == 1 {
            s.pending.push(i as u32);
        }
    }
    if !s.propagate() {
        return Ok((S::zero(), s.finish(start)));
    }
    for &l in &s.trail {
        total = total.times(s.lit_weight(l));
    }
    let root = Component {
        vars: (1..=n as u32)
            .filter(|&v| s.value[v as usize] == 0 && !s.var_occ[v as usize].is_empty())
            .collect(),
        clauses: (0..f.clauses.len() as u32).collect(),
    };
    let (subs, free) = s.split(&root);
    for v in free {
        total = total.times(&s.free_factor(v));
    }
    for c in subs {
        if total.is_zero() {
            break;
        }
        let v = s.count_component(&c)?;
        total = total.times(&v);
    }
    Ok((total, s.finish(start)))
}

impl<S: Semiring> Solver<'_, S> {
    fn finish(&mut self, start: Instant) -> CountStats {
        self.stats.elapsed = start.elapsed();
        self.stats
    }

    fn lit_weight(&self, l: Lit) -> &S {
        &self.weights[l.unsigned_abs() as usize][usize::from(l < 0)]
    }

    fn free_factor(&self, v: u32) -> S {
        let [pos, neg] = &self.weights[v as usize];
        pos.plus(neg)
    }

    fn assign(&mut self, l: Lit) {
        let v = l.unsigned_abs() as usize;
        self.value[v] = if l > 0 { 1 } else { -1 };
        self.trail.push(l);
        self.stats.propagations += 1;
        for i in 0..self.occ[occ_index(l)].len() {
            let c = self.occ[occ_index(l)][i] as usize;
            self.n_sat[c] += 1;
        }
        for i in 0..self.occ[occ_index(-l)].len() {
            let c = self.occ[occ_index(-l)][i] as usize;
            self.n_false[c] += 1;
            if self.n_sat[c] == 0 {
                let len = self.clauses[c].len() as u32;
                if self.n_false[c] == len {
                    self.conflict = true;
                } else if self.n_false[c] + 1 == len {
                    self.pending.push(c as u32);
                }
            }
        }
    }

    fn unassign_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let l = self.trail.pop().expect("trail above mark");
            self.value[l.unsigned_abs() as usize] = 0;
            for &c in &self.occ[occ_index(l)] {
                self.n_sat[c as usize] -= 1;
            }
            for &c in &self.occ[occ_index(-l)] {
                self.n_false[c as usize] -= 1;
            }
        }
        self.pending.clear();
        self.conflict = false;
    }

    /// Drains pending unit clauses. Returns false on conflict.
    fn propagate(&mut self) -> bool {
        while let Some(c) = self.pending.pop() {
            if self.conflict {
                break;
            }
            let c = c as usize;
            if self.n_sat[c] > 0 {
                continue;
            }
            let open = self.clauses[c]
                .iter()
                .copied()
                .find(|&l| self.value[l.unsigned_abs() as usize] == 0);
            match open {
                Some(l) => self.assign(l),
                None => self.conflict = true,
            }
        }
        self.pending.clear();
        !self.conflict
    }

    /// Open clauses of `parent` grouped by shared unassigned variables,
    /// plus the parent's variables that no open clause mentions.
    fn split(&mut self, parent: &Component) -> (Vec<Component>, Vec<u32>) {
        self.epoch += 1;
        let epoch = self.epoch;
        let mut comps = Vec::new();
        let mut stack: Vec<u32> = Vec::new();
        for &root in &parent.vars {
            if self.value[root as usize] != 0 || self.var_mark[root as usize] == epoch {
                continue;
            }
            let opens = self.var_occ[root as usize]
                .iter()
                .any(|&c| self.n_sat[c as usize] == 0);
            if !opens {
                continue;
            }
            let mut vars = vec![root];
            let mut clauses = Vec::new();
            self.var_mark[root as usize] = epoch;
            stack.push(root);
            while let Some(v) = stack.pop() {
                for i in 0..self.var_occ[v as usize].len() {
                    let c = self.var_occ[v as usize][i];
                    if self.n_sat[c as usize] > 0 || self.clause_mark[c as usize] == epoch {
                        continue;
                    }
                    self.clause_mark[c as usize] = epoch;
                    clauses.push(c);
                    for &l in &self.clauses[c as usize] {
                        let u = l.unsigned_abs();
                        if self.value[u as usize] == 0 && self.var_mark[u as usize] != epoch {
                            self.var_mark[u as usize] = epoch;
                            vars.push(u);
                            stack.push(u);
                        }
                    }
                }
            }
            vars.sort_unstable();
            clauses.sort_unstable();
            comps.push(Component { vars, clauses });
        }
        let free = parent
            .vars
            .iter()
            .copied()
            .filter(|&v| self.value[v as usize] == 0 && self.var_mark[v as usize] != epoch)
            .collect();
        // Smaller components first so a zero ends the product early.
        comps.sort_by_key(|c| c.clauses.len());
        (comps, free)
    }

    fn pick(&self, comp: &Component) -> u32 {
        match self.opts.heuristic {
            Heuristic::LowestId => comp.vars[0],
            Heuristic::MostOccurrences => {
                let mut best = comp.vars[0];
                let mut best_score = 0usize;
                for &v in &comp.vars {
                    let score = self.var_occ[v as usize]
                        .iter()
                        .filter(|&&c| self.n_sat[c as usize] == 0)
                        .count();
                    if score > best_score {
                        best = v;
                        best_score = score;
                    }
                }
                best
            }
        }
    }

    fn check_limits(&self) -> Result<(), CountError> {
        if let Some(flag) = &self.opts.cancel {
            if flag.load(Ordering::Relaxed) {
                return Err(CountError::Cancelled);
            }
        }
        if let (Some(d), Some(t)) = (self.deadline, self.opts.timeout) {
            if Instant::now() >= d {
                return Err(CountError::Timeout(t));
            }
        }
        Ok(())
    }

    fn count_component(&mut self, comp: &Component) -> Result<S, CountError> {
        let key = comp.key();
        self.tick += 1;
        if let Some(e) = self.cache.get_mut(&key) {
            e.last_used = self.tick;
            self.stats.cache_hits += 1;
            return Ok(e.value.clone());
        }
        self.stats.decisions += 1;
        if self.stats.decisions % 64 == 0 {
            self.check_limits()?;
        }
        let v = self.pick(comp) as Lit;
        let mut total = S::zero();
        for l in [v, -v] {
            let mark = self.trail.len();
            self.assign(l);
            if self.propagate() {
                let mut w = S::one();
                for &t in &self.trail[mark..] {
                    w = w.times(self.lit_weight(t));
                }
                if !w.is_zero() {
                    let (subs, free) = self.split(comp);
                    for u in free {
                        w = w.times(&self.free_factor(u));
                    }
                    for sub in subs {
                        if w.is_zero() {
                            break;
                        }
                        match self.count_component(&sub) {
                            Ok(c) => w = w.times(&c),
                            Err(e) => {
                                self.unassign_to(mark);
                                return Err(e);
                            }
                        }
                    }
                    total = total.plus(&w);
                }
            }
            self.unassign_to(mark);
        }
        self.store(key, total.clone());
        Ok(total)
    }

    fn store(&mut self, key: Vec<u32>, value: S) {
        let bytes = key.len() * 4 + 96;
        if bytes > self.opts.cache_bytes {
            return;
        }
        while self.cache_bytes + bytes > self.opts.cache_bytes {
            self.evict();
        }
        self.cache_bytes += bytes;
        self.cache.insert(
            key,
            CacheEntry {
                value,
                last_used: self.tick,
            },
        );
    }

    /// Drops the least recently used half of the cache.
    fn evict(&mut self) {
        let mut ticks: Vec<u64> = self.cache.values().map(|e| e.last_used).collect();
        if ticks.is_empty() {
            self.cache_bytes = 0;
            return;
        }
        let mid = ticks.len() / 2;
        let (_, &mut cutoff, _) = ticks.select_nth_unstable(mid);
        let before = self.cache.len();
        self.cache.retain(|_, e| e.last_used > cutoff);
        self.stats.cache_evictions += (before - self.cache.len()) as u64;
        self.cache_bytes = self.cache.keys().map(|k| k.len() * 4 + 96).sum();
    }
}
