use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{is_bent, FunctionTable};
use crate::error::{Error, Result};
use crate::zmod::VectorSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SearchMode {
    /// Every table `V -> Z_m`.
    Exhaustive,
    /// `samples` seeded random tables.
    Randomized { seed: u64, samples: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub p: u32,
    pub n: usize,
    pub codomain: u32,
    /// Largest number of distinct maximum families kept.
    pub max_results: usize,
    /// Work units: candidate tables, pair tests and clique-search nodes.
    pub budget: u64,
    pub mode: SearchMode,
    /// Stop as soon as a family of this size (zero function included) is
    /// found. The outcome is then not exhaustive.
    #[serde(default)]
    pub stop_at: Option<usize>,
}

impl SearchConfig {
    pub fn exhaustive(p: u32, n: usize, codomain: u32) -> Self {
        Self {
            p,
            n,
            codomain,
            max_results: 16,
            budget: 50_000_000,
            mode: SearchMode::Exhaustive,
            stop_at: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Distinct maximum families, each containing the zero function,
    /// in canonical (sorted, translation-minimal) form.
    pub families: Vec<Vec<FunctionTable>>,
    pub max_family_size: usize,
    /// True only when every table was examined and the clique search ran to
    /// completion.
    pub exhaustive: bool,
    pub budget_exhausted: bool,
    pub candidates_examined: u64,
    pub bent_candidates: usize,
    pub work: u64,
}

struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    fn spend(&mut self, units: u64) -> bool {
        self.used = self.used.saturating_add(units);
        self.used <= self.limit
    }
}

/// Largest families of functions with pairwise bent differences.
///
/// Families are taken up to translation by a member, so the search fixes the
/// zero function in every family: the other members are bent functions, and
/// the family is a clique in the "difference is bent" graph on them.
pub fn search_mubent(cfg: &SearchConfig) -> Result<SearchOutcome> {
    if cfg.budget == 0 {
        return Err(Error::Invalid("search budget must be positive".into()));
    }
    let zero = FunctionTable::zero(cfg.p, cfg.n, cfg.codomain)?;
    let space = VectorSpace::new(cfg.p, cfg.n)?;
    let mut budget = Budget {
        limit: cfg.budget,
        used: 0,
    };

    let total = (cfg.codomain as u64).checked_pow(space.size() as u32);
    let (bent, candidates_examined, complete_pool) = match cfg.mode {
        SearchMode::Exhaustive => {
            let mut bent = Vec::new();
            let mut examined = 0u64;
            let mut complete = true;
            let total = total.unwrap_or(u64::MAX);
            for idx in 1..total {
                if !budget.spend(1) {
                    complete = false;
                    break;
                }
                examined += 1;
                let f = table_from_index(&zero, idx);
                if is_bent(&f) {
                    bent.push(f);
                }
            }
            (bent, examined, complete)
        }
        SearchMode::Randomized { seed, samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut seen = BTreeSet::new();
            let mut examined = 0u64;
            for _ in 0..samples {
                if !budget.spend(1) {
                    break;
                }
                examined += 1;
                let values: Vec<u32> = (0..space.size())
                    .map(|_| rng.gen_range(0..cfg.codomain))
                    .collect();
                let f = FunctionTable::from_reduced(cfg.p, cfg.n, cfg.codomain, values);
                if is_bent(&f) {
                    seen.insert(f);
                }
            }
            (seen.into_iter().collect(), examined, false)
        }
    };

    // adjacency of the compatibility graph
    let k = bent.len();
    let mut adjacency = vec![Vec::<usize>::new(); k];
    let mut graph_complete = true;
    'outer: for i in 0..k {
        for j in i + 1..k {
            if !budget.spend(1) {
                graph_complete = false;
                break 'outer;
            }
            if is_bent(&bent[i].sub(&bent[j]).expect("same shape")) {
                adjacency[i].push(j);
                adjacency[j].push(i);
            }
        }
    }

    let mut finder = CliqueFinder {
        adjacency: &adjacency,
        budget: &mut budget,
        best: Vec::new(),
        best_size: 0,
        keep: cfg.max_results.saturating_mul(256).max(1),
        target: cfg.stop_at.map(|s| s.saturating_sub(1)),
        aborted: false,
        stopped: false,
    };
    if graph_complete {
        finder.run(Vec::new(), (0..k).collect(), Vec::new());
    }
    let aborted = finder.aborted || finder.stopped || !graph_complete;
    let cliques = std::mem::take(&mut finder.best);
    let best_size = finder.best_size;

    let mut canonical = BTreeSet::new();
    for clique in cliques {
        let mut family = vec![zero.clone()];
        family.extend(clique.into_iter().map(|i| bent[i].clone()));
        canonical.insert(canonical_family(&family));
        if canonical.len() >= cfg.max_results {
            break;
        }
    }

    let budget_exhausted = budget.used > budget.limit;
    Ok(SearchOutcome {
        families: canonical.into_iter().collect(),
        max_family_size: best_size + 1,
        exhaustive: matches!(cfg.mode, SearchMode::Exhaustive)
            && complete_pool
            && !aborted
            && !budget_exhausted,
        budget_exhausted,
        candidates_examined,
        bent_candidates: k,
        work: budget.used.min(budget.limit),
    })
}

fn table_from_index(shape: &FunctionTable, mut idx: u64) -> FunctionTable {
    let m = shape.codomain() as u64;
    let mut values = vec![0u32; shape.size()];
    for slot in values.iter_mut().rev() {
        *slot = (idx % m) as u32;
        idx /= m;
    }
    FunctionTable::from_reduced(shape.p(), shape.n(), shape.codomain(), values)
}

/// Smallest sorted translate `{f - g : f in family}` over members `g`.
pub(crate) fn canonical_family(family: &[FunctionTable]) -> Vec<FunctionTable> {
    family
        .iter()
        .map(|g| {
            let mut translated: Vec<FunctionTable> = family
                .iter()
                .map(|f| f.sub(g).expect("same shape"))
                .collect();
            translated.sort();
            translated
        })
        .min()
        .unwrap_or_default()
}

/// Bron–Kerbosch with pivoting; keeps every clique of the largest size seen.
struct CliqueFinder<'a> {
    adjacency: &'a [Vec<usize>],
    budget: &'a mut Budget,
    best: Vec<Vec<usize>>,
    best_size: usize,
    /// Cap on stored maximum cliques; the size bound is tracked regardless.
    keep: usize,
    /// Clique size that ends the search.
    target: Option<usize>,
    aborted: bool,
    stopped: bool,
}

impl CliqueFinder<'_> {
    fn run(&mut self, current: Vec<usize>, candidates: Vec<usize>, excluded: Vec<usize>) {
        if self.aborted || self.stopped {
            return;
        }
        if !self.budget.spend(1) {
            self.aborted = true;
            return;
        }
        if candidates.is_empty() && excluded.is_empty() {
            if current.len() > self.best_size {
                self.best_size = current.len();
                self.best.clear();
            }
            if self.target.is_some_and(|t| current.len() >= t) {
                self.stopped = true;
            }
            if current.len() == self.best_size && self.best.len() < self.keep {
                self.best.push(current);
            }
            return;
        }
        if current.len() + candidates.len() < self.best_size {
            return;
        }
        let pivot = candidates
            .iter()
            .chain(&excluded)
            .copied()
            .max_by_key(|&u| {
                candidates
                    .iter()
                    .filter(|w| self.adjacency[u].binary_search(w).is_ok())
                    .count()
            })
            .expect("nonempty");
        let branch: Vec<usize> = candidates
            .iter()
            .copied()
            .filter(|w| self.adjacency[pivot].binary_search(w).is_err())
            .collect();
        let mut candidates = candidates;
        let mut excluded = excluded;
        for v in branch {
            let neighbours = &self.adjacency[v];
            let next_candidates = candidates
                .iter()
                .copied()
                .filter(|w| neighbours.binary_search(w).is_ok())
                .collect();
            let next_excluded = excluded
                .iter()
                .copied()
                .filter(|w| neighbours.binary_search(w).is_ok())
                .collect();
            let mut next = current.clone();
            next.push(v);
            self.run(next, next_candidates, next_excluded);
            if self.aborted || self.stopped {
                return;
            }
            candidates.retain(|&w| w != v);
            excluded.push(v);
        }
    }
}
