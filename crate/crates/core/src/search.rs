//! Searches for permutations achieving a prescribed pattern-count vector.
//!
//! The search assigns values position by position, maintaining an
//! [`IncrementalCounter`]; prefix counts only grow as positions fill, so a
//! branch dies as soon as any single count exceeds its target. Every match
//! is re-verified against the reference counter before being reported.
//!
//! Work is split into tasks by the first decisions (the first two position
//! assignments, or the first constraint orbit in the restricted class).
//! Tasks are explored sequentially and independently, each with a
//! deterministic share of the node budget, so results - including node
//! counts - do not depend on the number of worker threads.

use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::sync::Mutex;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numtheory;
use crate::pattern::{self, IncrementalCounter};
use crate::perm::Permutation;

/// Largest size for an unbudgeted unrestricted search.
pub const MAX_UNBUDGETED_N: usize = 11;
/// Largest size for an unbudgeted restricted search.
pub const MAX_UNBUDGETED_RESTRICTED_N: usize = 16;

/// What the counts must be.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TargetSpec {
    /// `C(n,k)/k!` for every pattern; requires `k! | C(n,k)`.
    Uniform,
    /// Explicit counts by canonical pattern rank (length `k!`).
    Counts(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpec {
    pub n: usize,
    pub k: usize,
    pub target: TargetSpec,
    /// Limit the search to permutations equal to the reverse and complement
    /// of their own inverse.
    pub restricted: bool,
    /// Node limit. A node is one value placement.
    pub budget: Option<u64>,
    /// Worker threads; 0 means the default parallelism.
    pub threads: usize,
}

impl SearchSpec {
    pub fn uniform(n: usize, k: usize) -> Self {
        SearchSpec {
            n,
            k,
            target: TargetSpec::Uniform,
            restricted: false,
            budget: None,
            threads: 0,
        }
    }

    pub fn with_counts(n: usize, k: usize, counts: Vec<u64>) -> Self {
        SearchSpec {
            n,
            k,
            target: TargetSpec::Counts(counts),
            restricted: false,
            budget: None,
            threads: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    /// Lexicographically sorted, duplicate-free matches, each re-verified
    /// against the reference counter.
    pub matches: Vec<Permutation>,
    pub nodes_explored: u64,
    /// True when the whole space was covered, false when the node budget
    /// cut exploration short.
    pub exhausted: bool,
}

fn resolve_target(spec: &SearchSpec) -> Result<Vec<u64>> {
    let slots = pattern::FACTORIALS[spec.k];
    match &spec.target {
        TargetSpec::Uniform => {
            if !numtheory::div_condition(spec.k as u64, spec.n as u64) {
                return Err(Error::input(format!(
                    "uniform target needs {}! to divide C({}, {})",
                    spec.k, spec.n, spec.k
                )));
            }
            let each = pattern::binomial(spec.n, spec.k) / pattern::FACTORIALS[spec.k] as u128;
            Ok(vec![each as u64; slots])
        }
        TargetSpec::Counts(counts) => {
            if counts.len() != slots {
                return Err(Error::input(format!(
                    "target vector has {} entries, expected {}! = {slots}",
                    counts.len(),
                    spec.k
                )));
            }
            Ok(counts.clone())
        }
    }
}

/// Values for `position`, nearest-to-position first, ties by value.
fn value_order(n: usize, position: usize) -> Vec<u32> {
    let mut values: Vec<u32> = (1..=n as u32).collect();
    values.sort_by_key(|&v| ((v as i64 - position as i64).abs(), v));
    values
}

/// The four assignments `(position, value)` forced by choosing
/// `pi(a) = b` in the restricted class: `pi^{-1} = n+1-pi` propagates to
/// `pi(b) = n+1-a`, `pi(n+1-a) = n+1-b`, `pi(n+1-b) = a`.
fn restricted_orbit(n: usize, a: u32, b: u32) -> [(u32, u32); 4] {
    let n1 = n as u32 + 1;
    [(a, b), (b, n1 - a), (n1 - a, n1 - b), (n1 - b, a)]
}

fn orbit_is_internally_valid(orbit: &[(u32, u32); 4]) -> bool {
    for i in 0..4 {
        for j in i + 1..4 {
            if orbit[i].0 == orbit[j].0 || orbit[i].1 == orbit[j].1 {
                return false;
            }
        }
    }
    true
}

/// A unit of search work: a fixed sequence of decisions to replay, plus
/// the values recorded in the checkpoint file for resumption.
#[derive(Debug, Clone)]
struct Task {
    decisions: Vec<u32>,
    prefix: Vec<(u32, u32)>,
}

fn enumerate_tasks(spec: &SearchSpec) -> Vec<Task> {
    if spec.restricted {
        if spec.n < 5 {
            return vec![Task {
                decisions: vec![],
                prefix: vec![],
            }];
        }
        // Center is pre-placed for odd n, so position 1 is always the first
        // free position; one task per admissible first image.
        let mut tasks = Vec::new();
        for b in value_order(spec.n, 1) {
            let orbit = restricted_orbit(spec.n, 1, b);
            if orbit_is_internally_valid(&orbit)
                && !orbit
                    .iter()
                    .any(|&(p, v)| is_center(spec.n, p) || is_center(spec.n, v))
            {
                tasks.push(Task {
                    decisions: vec![b],
                    prefix: orbit.to_vec(),
                });
            }
        }
        tasks
    } else if spec.n < 3 {
        vec![Task {
            decisions: vec![],
            prefix: vec![],
        }]
    } else {
        let mut tasks = Vec::new();
        for v1 in value_order(spec.n, 1) {
            for v2 in value_order(spec.n, 2) {
                if v2 != v1 {
                    tasks.push(Task {
                        decisions: vec![v1, v2],
                        prefix: vec![(1, v1), (2, v2)],
                    });
                }
            }
        }
        tasks
    }
}

fn is_center(n: usize, x: u32) -> bool {
    n % 2 == 1 && x as usize == n.div_ceil(2)
}

struct TaskOutcome {
    matches: Vec<Permutation>,
    nodes: u64,
    exhausted: bool,
}

struct Dfs<'a> {
    n: usize,
    k: usize,
    targets: &'a [u64],
    restricted: bool,
    counter: IncrementalCounter,
    /// 1-based position -> value, 0 when unassigned.
    assignment: Vec<u32>,
    value_used: Vec<bool>,
    assigned: usize,
    value_orders: &'a [Vec<u32>],
    node_cap: Option<u64>,
    nodes: u64,
    stopped: bool,
    matches: Vec<Permutation>,
}

impl<'a> Dfs<'a> {
    fn new(
        spec: &SearchSpec,
        targets: &'a [u64],
        value_orders: &'a [Vec<u32>],
        node_cap: Option<u64>,
    ) -> Result<Self> {
        Ok(Dfs {
            n: spec.n,
            k: spec.k,
            targets,
            restricted: spec.restricted,
            counter: IncrementalCounter::new(spec.n, spec.k)?,
            assignment: vec![0; spec.n + 1],
            value_used: vec![false; spec.n + 1],
            assigned: 0,
            value_orders,
            node_cap,
            nodes: 0,
            stopped: false,
            matches: Vec::new(),
        })
    }

    /// Places one value, spending one node. Returns false (with the
    /// placement undone) when the placement violates the target or the
    /// budget ran out.
    fn try_place(&mut self, position: u32, value: u32) -> bool {
        if self.node_cap.is_some_and(|cap| self.nodes >= cap) {
            self.stopped = true;
            return false;
        }
        self.nodes += 1;
        self.counter
            .place(position, value)
            .expect("search state stays consistent");
        if self
            .counter
            .counts()
            .iter()
            .zip(self.targets)
            .any(|(&c, &t)| c > t)
        {
            self.counter.unplace();
            return false;
        }
        self.assignment[position as usize] = value;
        self.value_used[value as usize] = true;
        self.assigned += 1;
        true
    }

    fn unplace(&mut self) {
        let (position, value) = self.counter.unplace().expect("matching place");
        self.assignment[position as usize] = 0;
        self.value_used[value as usize] = false;
        self.assigned -= 1;
    }

    fn record_leaf(&mut self) {
        if self.counter.counts() != self.targets {
            return;
        }
        let perm = Permutation::from_one_line(self.assignment[1..].to_vec())
            .expect("complete assignment is a permutation");
        // Soundness: re-verify independently of the incremental counter.
        let reference = pattern::count_patterns_reference(&perm, self.k).expect("k within bounds");
        if reference.counts() == self.targets {
            self.matches.push(perm);
        }
    }

    fn first_free_position(&self) -> Option<u32> {
        (1..=self.n as u32).find(|&p| self.assignment[p as usize] == 0)
    }

    fn run(&mut self) {
        if self.stopped {
            return;
        }
        if self.assigned == self.n {
            self.record_leaf();
            return;
        }
        if self.restricted {
            self.run_restricted();
        } else {
            self.run_plain();
        }
    }

    fn run_plain(&mut self) {
        let position = self.assigned as u32 + 1;
        // The order table outlives the mutable borrow of self.
        let orders = self.value_orders;
        for &value in &orders[position as usize] {
            if self.value_used[value as usize] {
                continue;
            }
            if self.try_place(position, value) {
                self.run();
                self.unplace();
            }
            if self.stopped {
                return;
            }
        }
    }

    fn run_restricted(&mut self) {
        let a = self.first_free_position().expect("not all assigned");
        let orders = self.value_orders;
        'candidates: for &b in &orders[a as usize] {
            let orbit = restricted_orbit(self.n, a, b);
            if !orbit_is_internally_valid(&orbit) {
                continue;
            }
            if orbit
                .iter()
                .any(|&(p, v)| self.assignment[p as usize] != 0 || self.value_used[v as usize])
            {
                continue;
            }
            let mut placed = 0;
            for &(p, v) in &orbit {
                if self.try_place(p, v) {
                    placed += 1;
                } else {
                    for _ in 0..placed {
                        self.unplace();
                    }
                    if self.stopped {
                        return;
                    }
                    continue 'candidates;
                }
            }
            self.run();
            for _ in 0..placed {
                self.unplace();
            }
            if self.stopped {
                return;
            }
        }
    }
}

fn run_task(
    spec: &SearchSpec,
    targets: &[u64],
    value_orders: &[Vec<u32>],
    task: &Task,
    node_cap: Option<u64>,
) -> Result<TaskOutcome> {
    let mut dfs = Dfs::new(spec, targets, value_orders, node_cap)?;
    // Forced center for odd restricted hosts.
    let mut live = true;
    if spec.restricted && spec.n % 2 == 1 {
        let c = (spec.n as u32).div_ceil(2);
        live = dfs.try_place(c, c);
    }
    if live {
        for &(p, v) in &task.prefix {
            if !dfs.try_place(p, v) {
                live = false;
                break;
            }
        }
        if live {
            dfs.run();
        }
    }
    Ok(TaskOutcome {
        matches: std::mem::take(&mut dfs.matches),
        nodes: dfs.nodes,
        exhausted: !dfs.stopped,
    })
}

/// Deterministic per-task share of the total node budget.
fn task_caps(budget: Option<u64>, tasks: usize) -> Vec<Option<u64>> {
    match budget {
        None => vec![None; tasks],
        Some(b) => {
            let base = b / tasks as u64;
            let extra = (b % tasks as u64) as usize;
            (0..tasks)
                .map(|i| Some(base + u64::from(i < extra)))
                .collect()
        }
    }
}

fn format_values(values: &[u32], n: usize) -> String {
    if n <= 9 {
        values.iter().map(|v| v.to_string()).collect()
    } else {
        values
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn parse_checkpoint_line(line: &str, n: usize) -> Result<Vec<u32>> {
    let line = line.trim();
    if n <= 9 && !line.contains(',') {
        line.chars()
            .map(|c| {
                c.to_digit(10)
                    .filter(|&d| d >= 1)
                    .ok_or_else(|| Error::input(format!("bad checkpoint line {line:?}")))
            })
            .collect()
    } else {
        line.split(',')
            .map(|part| {
                part.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::input(format!("bad checkpoint line {line:?}")))
            })
            .collect()
    }
}

/// Runs the search described by `spec`.
pub fn run(spec: &SearchSpec) -> Result<SearchResult> {
    run_with_checkpoint(spec, None)
}

/// Runs a search, skipping tasks recorded in the checkpoint file and
/// appending each newly completed task to it. Checkpoint lines hold the
/// values chosen at the task's split decisions, one task per line, in the
/// permutation text format.
pub fn run_with_checkpoint(spec: &SearchSpec, checkpoint: Option<&Path>) -> Result<SearchResult> {
    if spec.n < 1 {
        return Err(Error::input("search needs n >= 1"));
    }
    if spec.k < 1 || spec.k > pattern::MAX_PATTERN_SIZE {
        return Err(Error::unsupported(format!(
            "search supports 1 <= k <= {}",
            pattern::MAX_PATTERN_SIZE
        )));
    }
    let unbudgeted_max = if spec.restricted {
        MAX_UNBUDGETED_RESTRICTED_N
    } else {
        MAX_UNBUDGETED_N
    };
    if spec.budget.is_none() && spec.n > unbudgeted_max {
        return Err(Error::resource(format!(
            "unbudgeted {} search is capped at n = {unbudgeted_max}; pass a node budget",
            if spec.restricted {
                "restricted"
            } else {
                "exhaustive"
            }
        )));
    }
    let targets = resolve_target(spec)?;
    let total: u128 = targets.iter().map(|&t| t as u128).sum();
    if total != pattern::binomial(spec.n, spec.k) {
        // No permutation can meet the target; the space is trivially covered.
        return Ok(SearchResult {
            matches: vec![],
            nodes_explored: 0,
            exhausted: true,
        });
    }

    let completed: Vec<Vec<u32>> = match checkpoint {
        Some(path) if path.exists() => fs::read_to_string(path)
            .map_err(|e| Error::input(format!("checkpoint {path:?}: {e}")))?
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| parse_checkpoint_line(l, spec.n))
            .collect::<Result<_>>()?,
        _ => vec![],
    };

    let value_orders: Vec<Vec<u32>> = (0..=spec.n).map(|p| value_order(spec.n, p)).collect();
    let tasks = enumerate_tasks(spec);
    let caps = task_caps(spec.budget, tasks.len());
    let sink = checkpoint
        .map(|path| {
            fs::OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)
                .map(Mutex::new)
                .map_err(|e| Error::input(format!("checkpoint {path:?}: {e}")))
        })
        .transpose()?;

    let body = || -> Result<Vec<Option<TaskOutcome>>> {
        tasks
            .par_iter()
            .zip(caps.par_iter())
            .map(|(task, cap)| -> Result<Option<TaskOutcome>> {
                if !task.decisions.is_empty() && completed.contains(&task.decisions) {
                    return Ok(None);
                }
                let outcome = run_task(spec, &targets, &value_orders, task, *cap)?;
                if outcome.exhausted && !task.decisions.is_empty() {
                    if let Some(sink) = &sink {
                        let mut file = sink.lock().expect("checkpoint lock");
                        writeln!(file, "{}", format_values(&task.decisions, spec.n))
                            .map_err(|e| Error::input(format!("checkpoint write: {e}")))?;
                    }
                }
                Ok(Some(outcome))
            })
            .collect()
    };
    let outcomes = if spec.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(spec.threads)
            .build()
            .map_err(|e| Error::resource(format!("thread pool: {e}")))?
            .install(body)?
    } else {
        body()?
    };

    let mut matches = Vec::new();
    let mut nodes = 0u64;
    let mut exhausted = true;
    for outcome in outcomes.into_iter().flatten() {
        matches.extend(outcome.matches);
        nodes += outcome.nodes;
        exhausted &= outcome.exhausted;
    }
    matches.sort();
    matches.dedup();
    Ok(SearchResult {
        matches,
        nodes_explored: nodes,
        exhausted,
    })
}

/// Unrestricted search over all of `S_n`.
pub fn exhaustive_search(spec: &SearchSpec) -> Result<SearchResult> {
    let spec = SearchSpec {
        restricted: false,
        ..spec.clone()
    };
    run(&spec)
}

/// Search limited to the self-dual class `pi^{-1} = pi' = pi-bar`, with the
/// constraint propagation fused into the backtracking.
pub fn restricted_search(spec: &SearchSpec) -> Result<SearchResult> {
    let spec = SearchSpec {
        restricted: true,
        ..spec.clone()
    };
    run(&spec)
}

/// Lazy stream of the permutations with `pi^{-1} = pi' = pi-bar`
/// (equivalently, centro-symmetric permutations whose inverse is their
/// complement), in a deterministic backtracking order.
pub fn restricted_class_enumerate(n: usize) -> RestrictedClassIter {
    RestrictedClassIter::new(n)
}

struct ClassLevel {
    a: u32,
    candidates: Vec<u32>,
    next: usize,
    applied: bool,
}

pub struct RestrictedClassIter {
    n: usize,
    assignment: Vec<u32>,
    value_used: Vec<bool>,
    assigned: usize,
    stack: Vec<ClassLevel>,
    yielded_trivial: bool,
}

impl RestrictedClassIter {
    fn new(n: usize) -> Self {
        let mut it = RestrictedClassIter {
            n,
            assignment: vec![0; n + 1],
            value_used: vec![false; n + 1],
            assigned: 0,
            stack: vec![],
            yielded_trivial: false,
        };
        if n >= 1 && n % 2 == 1 {
            let c = (n as u32).div_ceil(2);
            it.apply(&[(c, c)]);
        }
        if n >= 1 && it.assigned < n {
            it.push_level();
        }
        it
    }

    fn apply(&mut self, pairs: &[(u32, u32)]) {
        for &(p, v) in pairs {
            debug_assert_eq!(self.assignment[p as usize], 0);
            self.assignment[p as usize] = v;
            self.value_used[v as usize] = true;
            self.assigned += 1;
        }
    }

    fn undo(&mut self, pairs: &[(u32, u32)]) {
        for &(p, v) in pairs {
            self.assignment[p as usize] = 0;
            self.value_used[v as usize] = false;
            self.assigned -= 1;
        }
    }

    fn push_level(&mut self) {
        let a = (1..=self.n as u32)
            .find(|&p| self.assignment[p as usize] == 0)
            .expect("level pushed only when positions remain");
        let candidates = (1..=self.n as u32)
            .filter(|&b| {
                let orbit = restricted_orbit(self.n, a, b);
                orbit_is_internally_valid(&orbit)
                    && !orbit.iter().any(|&(p, v)| {
                        self.assignment[p as usize] != 0 || self.value_used[v as usize]
                    })
            })
            .collect();
        self.stack.push(ClassLevel {
            a,
            candidates,
            next: 0,
            applied: false,
        });
    }

    fn current_permutation(&self) -> Permutation {
        Permutation::from_one_line(self.assignment[1..].to_vec())
            .expect("complete assignment is a permutation")
    }
}

impl Iterator for RestrictedClassIter {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.n == 0 {
            return None;
        }
        // A fully forced host (n = 1 after the center placement) yields once.
        if self.stack.is_empty() {
            if self.assigned == self.n && !self.yielded_trivial {
                self.yielded_trivial = true;
                return Some(self.current_permutation());
            }
            return None;
        }
        loop {
            let level = self.stack.last_mut()?;
            if level.applied {
                let a = level.a;
                let b = level.candidates[level.next - 1];
                let orbit = restricted_orbit(self.n, a, b);
                level.applied = false;
                self.undo(&orbit);
            }
            let level = self.stack.last_mut()?;
            if level.next >= level.candidates.len() {
                self.stack.pop();
                continue;
            }
            let a = level.a;
            let b = level.candidates[level.next];
            level.next += 1;
            level.applied = true;
            let orbit = restricted_orbit(self.n, a, b);
            self.apply(&orbit);
            if self.assigned == self.n {
                return Some(self.current_permutation());
            }
            self.push_level();
        }
    }
}
