use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use super::checkpoint::{fnv1a, Checkpoint};
use super::oracle::Oracle;
use super::symmetry::{key, Invariance, PruneFlags, PruneState, Symmetry};
use crate::error::{Error, Result};
use crate::word::{Letter, ReducedWord};

pub const MAX_SEARCH_LEN: usize = 64;
pub const DEFAULT_SHARDS: usize = 64;
const CLOCK_STRIDE: u64 = 1 << 14;

#[derive(Clone, Debug, Serialize)]
pub struct SearchSpec {
    pub max_len: usize,
    pub min_len: usize,
    pub prune: PruneFlags,
    /// Target number of prefix shards per length.
    pub shards: usize,
    pub checkpoint: Option<PathBuf>,
    #[serde(skip)]
    pub time_budget: Option<Duration>,
}

impl SearchSpec {
    pub fn new(max_len: usize) -> Self {
        SearchSpec {
            max_len,
            min_len: 1,
            prune: PruneFlags::ALL,
            shards: DEFAULT_SHARDS,
            checkpoint: None,
            time_budget: None,
        }
    }

    pub fn unpruned(mut self) -> Self {
        self.prune = PruneFlags::NONE;
        self
    }

    pub fn with_prune(mut self, prune: PruneFlags) -> Self {
        self.prune = prune;
        self
    }

    pub fn with_shards(mut self, shards: usize) -> Self {
        self.shards = shards.max(1);
        self
    }

    pub fn with_checkpoint(mut self, path: impl Into<PathBuf>) -> Self {
        self.checkpoint = Some(path.into());
        self
    }

    pub fn with_time_budget(mut self, budget: Option<Duration>) -> Self {
        self.time_budget = budget;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.max_len == 0 || self.max_len > MAX_SEARCH_LEN {
            return Err(Error::InvalidArgument(format!(
                "max_len must lie in 1..={MAX_SEARCH_LEN}"
            )));
        }
        if self.min_len == 0 || self.min_len > self.max_len {
            return Err(Error::InvalidArgument("min_len must lie in 1..=max_len".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Found,
    /// Every length up to the bound was exhausted without a hit.
    NotFoundBelow,
    /// The time budget ran out mid-search.
    Interrupted,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub oracle: String,
    pub outcome: Outcome,
    pub witness: Option<ReducedWord>,
    /// Every length strictly below this has been exhausted.
    pub exhausted_below: usize,
    pub max_len: usize,
    pub prune: PruneFlags,
    pub shards: usize,
    pub nodes: u64,
    pub resumed: bool,
    pub elapsed_secs: f64,
}

impl SearchReport {
    pub fn length(&self) -> Option<usize> {
        self.witness.as_ref().map(|w| w.len())
    }
}

enum Leaf {
    Stop,
    Continue,
}

/// Depth-first walk over reduced words of one fixed length in lexicographic
/// order, skipping subtrees that cannot contain a canonical representative or
/// an accepted word.
struct Walk<'a, O: Oracle> {
    oracle: &'a O,
    sym: &'a Symmetry,
    len: usize,
    cyclic_only: bool,
    letters: Vec<Letter>,
    nodes: u64,
    deadline: Option<Instant>,
    cancelled: &'a AtomicBool,
}

impl<O: Oracle> Walk<'_, O> {
    fn replay(&mut self, prefix: &[Letter]) -> Option<(O::State, PruneState)> {
        self.letters.clear();
        let mut st = self.oracle.root();
        let mut ps = self.sym.root();
        for &l in prefix {
            self.letters.push(l);
            ps = self.sym.extend(&ps, &self.letters)?;
            st = self.oracle.push(&st, l);
        }
        Some((st, ps))
    }

    /// Returns `false` when the walk was stopped.
    fn descend(
        &mut self,
        state: &O::State,
        ps: &PruneState,
        depth: usize,
        leaf: &mut impl FnMut(&[Letter], &O::State) -> Leaf,
    ) -> bool {
        let k = self.letters.len();
        if k == depth {
            return matches!(leaf(&self.letters, state), Leaf::Continue);
        }
        self.nodes += 1;
        if self.nodes % CLOCK_STRIDE == 0 {
            if self.cancelled.load(Ordering::Relaxed) {
                return false;
            }
            if self.deadline.is_some_and(|d| Instant::now() >= d) {
                self.cancelled.store(true, Ordering::Relaxed);
                return false;
            }
        }
        let last_inv = self.letters.last().map(|l| l.inverse());
        let first_inv = self.letters.first().map(|l| l.inverse());
        for l in Letter::ALL {
            if Some(l) == last_inv {
                continue;
            }
            if self.cyclic_only && k + 1 == self.len && k > 0 && Some(l) == first_inv {
                continue;
            }
            self.letters.push(l);
            let keep = match self.sym.extend(ps, &self.letters) {
                Some(nps) => {
                    let ns = self.oracle.push(state, l);
                    if self.oracle.viable(&ns, self.len - k - 1) {
                        self.descend(&ns, &nps, depth, leaf)
                    } else {
                        true
                    }
                }
                None => true,
            };
            self.letters.pop();
            if !keep {
                return false;
            }
        }
        true
    }
}

struct Ctx<'a, O: Oracle> {
    oracle: &'a O,
    sym: Symmetry,
    cyclic_only: bool,
}

impl<'a, O: Oracle> Ctx<'a, O> {
    fn new(oracle: &'a O, prune: PruneFlags) -> Self {
        let sym = Symmetry::new(prune, &oracle.invariance());
        let cyclic_only = sym.rotations;
        Ctx {
            oracle,
            sym,
            cyclic_only,
        }
    }

    fn walk<'b>(&'b self, len: usize, deadline: Option<Instant>, cancelled: &'b AtomicBool) -> Walk<'b, O> {
        Walk {
            oracle: self.oracle,
            sym: &self.sym,
            len,
            cyclic_only: self.cyclic_only,
            letters: Vec::with_capacity(len),
            nodes: 0,
            deadline,
            cancelled,
        }
    }

    /// Prefixes of the smallest depth with at least `target` survivors.
    fn shard_prefixes(&self, len: usize, target: usize) -> Vec<Vec<Letter>> {
        let never = AtomicBool::new(false);
        let mut prefixes = Vec::new();
        for depth in 1..=len {
            prefixes.clear();
            let mut w = self.walk(len, None, &never);
            let root = self.oracle.root();
            let ps = self.sym.root();
            w.descend(&root, &ps, depth, &mut |p, _| {
                prefixes.push(p.to_vec());
                Leaf::Continue
            });
            if prefixes.len() >= target {
                break;
            }
        }
        prefixes
    }
}

struct ShardResult {
    hit: Option<Vec<Letter>>,
    nodes: u64,
    finished: bool,
}

/// Finds the lexicographically least shortest word accepted by `oracle`.
pub fn search<O: Oracle>(oracle: &O, spec: &SearchSpec) -> Result<SearchReport> {
    spec.validate()?;
    let start = Instant::now();
    let deadline = spec.time_budget.map(|b| start + b);
    let ctx = Ctx::new(oracle, spec.prune);
    let prune = ctx.sym.flags();
    let fingerprint = fnv1a(
        format!(
            "{}|{}|{}|{:?}|{}",
            oracle.id(),
            spec.max_len,
            spec.min_len,
            prune,
            spec.shards
        )
        .as_bytes(),
    );
    let mut resume = match &spec.checkpoint {
        Some(p) => Checkpoint::load(p)?.filter(|c| c.fingerprint == fingerprint),
        None => None,
    };
    let resumed = resume.is_some();
    let first_len = resume
        .as_ref()
        .map(|c| c.length as usize)
        .unwrap_or(spec.min_len)
        .max(spec.min_len);
    let mut nodes = 0u64;
    let mut shard_total = 0usize;
    let cancelled = AtomicBool::new(false);

    let report = |outcome, witness: Option<Vec<Letter>>, exhausted_below, nodes, shards| SearchReport {
        oracle: oracle.id(),
        outcome,
        witness: witness.map(|w| ReducedWord::from_reduced(w).expect("search yields reduced words")),
        exhausted_below,
        max_len: spec.max_len,
        prune,
        shards,
        nodes,
        resumed,
        elapsed_secs: start.elapsed().as_secs_f64(),
    };

    for len in first_len..=spec.max_len {
        let prefixes = ctx.shard_prefixes(len, spec.shards);
        shard_total = prefixes.len();
        let mut ck = match resume.take() {
            Some(c) if c.length as usize == len && c.shards as usize == prefixes.len() => c,
            _ => Checkpoint::new(fingerprint, len as u32, prefixes.len() as u32),
        };
        let best = AtomicUsize::new(ck.best.as_ref().map_or(usize::MAX, |b| b.0 as usize));
        let ck_lock = Mutex::new((ck.clone(), Instant::now()));
        let results: Vec<(usize, ShardResult)> = prefixes
            .par_iter()
            .enumerate()
            .filter(|(i, _)| !ck.completed.contains(&(*i as u32)))
            .map(|(i, prefix)| {
                if i > best.load(Ordering::Relaxed) || cancelled.load(Ordering::Relaxed) {
                    return (
                        i,
                        ShardResult {
                            hit: None,
                            nodes: 0,
                            finished: i > best.load(Ordering::Relaxed),
                        },
                    );
                }
                let mut w = ctx.walk(len, deadline, &cancelled);
                let mut hit = None;
                let finished = match w.replay(prefix) {
                    Some((st, ps)) => {
                        let completed = {
                            let mut leaf = |word: &[Letter], s: &O::State| {
                                if oracle.accept(s, word) {
                                    hit = Some(word.to_vec());
                                    Leaf::Stop
                                } else {
                                    Leaf::Continue
                                }
                            };
                            w.descend(&st, &ps, len, &mut leaf)
                        };
                        completed || hit.is_some()
                    }
                    None => true,
                };
                if hit.is_some() {
                    best.fetch_min(i, Ordering::Relaxed);
                }
                if finished {
                    if let Some(path) = &spec.checkpoint {
                        let mut g = ck_lock.lock().unwrap_or_else(|e| e.into_inner());
                        g.0.completed.insert(i as u32);
                        if let Some(h) = &hit {
                            if g.0.best.as_ref().is_none_or(|b| (i as u32) < b.0) {
                                g.0.best = Some((i as u32, h.clone()));
                            }
                        }
                        if g.1.elapsed() > Duration::from_secs(2) {
                            // A failed intermediate save only costs resumability.
                            let _ = g.0.save(path);
                            g.1 = Instant::now();
                        }
                    }
                }
                (
                    i,
                    ShardResult {
                        hit,
                        nodes: w.nodes,
                        finished,
                    },
                )
            })
            .collect();
        nodes += results.iter().map(|r| r.1.nodes).sum::<u64>();
        ck = ck_lock.into_inner().unwrap_or_else(|e| e.into_inner()).0;

        let mut hits: Vec<(usize, Vec<Letter>)> = results
            .iter()
            .filter_map(|(i, r)| r.hit.clone().map(|h| (*i, h)))
            .collect();
        if let Some(b) = &ck.best {
            hits.push((b.0 as usize, b.1.clone()));
        }
        hits.sort();
        let first_hit = hits.first().map(|h| h.0);
        // A hit is final once every earlier shard has finished.
        let settled = |upto: usize| {
            (0..upto).all(|i| {
                ck.completed.contains(&(i as u32))
                    || results.iter().any(|(j, r)| *j == i && r.finished)
            })
        };
        if let Some(h) = first_hit {
            if settled(h) {
                let witness = hits.swap_remove(0).1;
                if let Some(path) = &spec.checkpoint {
                    let mut done = ck.clone();
                    done.best = Some((h as u32, witness.clone()));
                    done.completed.extend(results.iter().map(|r| r.0 as u32));
                    done.save(path)?;
                }
                return Ok(report(Outcome::Found, Some(witness), len, nodes, shard_total));
            }
        }
        let all_done = settled(prefixes.len());
        if !all_done {
            if let Some(path) = &spec.checkpoint {
                ck.save(path)?;
            }
            return Ok(report(Outcome::Interrupted, None, len, nodes, shard_total));
        }
        if let Some(path) = &spec.checkpoint {
            Checkpoint::new(fingerprint, len as u32 + 1, 0).save(path)?;
        }
    }
    Ok(report(
        Outcome::NotFoundBelow,
        None,
        spec.max_len + 1,
        nodes,
        shard_total,
    ))
}

/// Single-threaded unsharded replay of a search, for cross-checking.
pub fn search_sequential<O: Oracle>(oracle: &O, spec: &SearchSpec) -> Result<SearchReport> {
    let mut s = spec.clone().with_shards(1);
    s.checkpoint = None;
    s.time_budget = None;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    pool.install(|| search(oracle, &s))
}

/// Accepts every word; used for plain enumeration.
struct Everything;

impl Oracle for Everything {
    type State = ();

    fn id(&self) -> String {
        "all".into()
    }

    fn invariance(&self) -> Invariance {
        Invariance::full()
    }

    fn root(&self) {}

    fn push(&self, _: &(), _: Letter) {}

    fn accept(&self, _: &(), _: &[Letter]) -> bool {
        true
    }
}

/// Calls `visit` on one representative per symmetry class of words of length
/// `1..=max_len`, in length order then lexicographic order. With pruning
/// enabled only cyclically reduced words are visited.
pub fn enumerate_with(max_len: usize, prune: PruneFlags, visit: impl FnMut(&ReducedWord)) {
    enumerate_accepted(&Everything, max_len, prune, visit)
}

/// Like [`enumerate_with`], restricted to words the oracle accepts. Symmetry
/// classes are those of the oracle's declared invariance.
pub fn enumerate_accepted<O: Oracle>(
    oracle: &O,
    max_len: usize,
    prune: PruneFlags,
    mut visit: impl FnMut(&ReducedWord),
) {
    let ctx = Ctx::new(oracle, prune);
    let never = AtomicBool::new(false);
    for len in 1..=max_len {
        let mut w = ctx.walk(len, None, &never);
        let sym = &ctx.sym;
        w.descend(&oracle.root(), &sym.root(), len, &mut |word, s| {
            if oracle.accept(s, word) && sym.is_canonical(word) {
                visit(&ReducedWord::from_reduced(word.to_vec()).expect("reduced"));
            }
            Leaf::Continue
        });
    }
}

/// Class representatives as a stream.
pub fn enumerate(max_len: usize, prune: PruneFlags) -> impl Iterator<Item = ReducedWord> {
    (1..=max_len).flat_map(move |len| {
        let mut out = Vec::new();
        let ctx = Ctx::new(&Everything, prune);
        let never = AtomicBool::new(false);
        let mut w = ctx.walk(len, None, &never);
        let sym = &ctx.sym;
        w.descend(&(), &sym.root(), len, &mut |word, _| {
            if sym.is_canonical(word) {
                out.push(word.to_vec());
            }
            Leaf::Continue
        });
        out.sort_by_key(|v| key(v));
        out.into_iter()
            .map(|v| ReducedWord::from_reduced(v).expect("reduced"))
    })
}

/// The symmetry orbit of `w` as a search with `prune` would see it. With
/// cyclic pruning `w` must be cyclically reduced.
pub fn orbit(w: &ReducedWord, prune: PruneFlags) -> Result<Vec<ReducedWord>> {
    if prune.cyclic && !w.is_cyclically_reduced() {
        return Err(Error::NotCyclicallyReduced(w.to_string()));
    }
    Symmetry::new(prune, &Invariance::full())
        .orbit(w.letters())
        .into_iter()
        .map(ReducedWord::from_reduced)
        .collect()
}
