//! Exact minimum set cover by depth-first branch and bound.
//!
//! The search branches on the uncovered element with the fewest covering
//! sets and prunes with a packing bound: elements no two of which share a
//! covering set each need their own set. A caller-supplied global lower bound
//! stops the search as soon as an incumbent reaches it.

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    /// `|self \ other|`
    pub fn count_minus(&self, other: &BitSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & !b).count_ones() as usize)
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }
}

#[derive(Clone, Debug)]
pub struct SetCoverInstance {
    universe: usize,
    sets: Vec<BitSet>,
}

impl SetCoverInstance {
    pub fn new(universe: usize, sets: Vec<BitSet>) -> Self {
        SetCoverInstance { universe, sets }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn sets(&self) -> &[BitSet] {
        &self.sets
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub node_budget: u64,
    /// Known lower bound on the optimum; reaching it ends the search.
    pub lower_bound: usize,
    /// Sets forced into every solution (e.g. for symmetry breaking).
    pub forced: Vec<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            node_budget: 1_000_000,
            lower_bound: 0,
            forced: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    /// Indices into the instance's sets, sorted.
    pub sets: Vec<usize>,
    pub nodes: u64,
    /// True when the search space was exhausted or the lower bound was met.
    pub optimal: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SetCoverError {
    #[error("some element is contained in no set")]
    Infeasible,
    #[error("node budget {budget} exhausted")]
    BudgetExceeded {
        budget: u64,
        best: Option<Vec<usize>>,
    },
}

/// Greedy cover: repeatedly take the set with the most uncovered elements
/// (lowest index on ties).
pub fn greedy(instance: &SetCoverInstance, forced: &[usize]) -> Option<Vec<usize>> {
    let mut covered = BitSet::new(instance.universe);
    let mut chosen: Vec<usize> = forced.to_vec();
    for &f in forced {
        covered.union_with(&instance.sets[f]);
    }
    while covered.count() < instance.universe {
        let (best, gain) = instance
            .sets
            .iter()
            .enumerate()
            .map(|(i, s)| (i, s.count_minus(&covered)))
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))?;
        if gain == 0 {
            return None;
        }
        chosen.push(best);
        covered.union_with(&instance.sets[best]);
    }
    chosen.sort_unstable();
    Some(chosen)
}

struct Search<'a> {
    sets: &'a [BitSet],
    /// candidate sets per element, as a bitset over set indices
    owners: Vec<BitSet>,
    /// elements sorted by ascending owner count
    order: Vec<usize>,
    /// union of all sets containing each element
    neighbourhood: Vec<BitSet>,
    budget: u64,
    nodes: u64,
    lower_bound: usize,
    best: Option<Vec<usize>>,
}

impl Search<'_> {
    fn best_len(&self) -> usize {
        self.best.as_ref().map_or(usize::MAX, Vec::len)
    }

    fn packing_bound(&self, covered: &BitSet) -> usize {
        let mut blocked = covered.clone();
        let mut count = 0;
        for &e in &self.order {
            if !blocked.contains(e) {
                count += 1;
                blocked.union_with(&self.neighbourhood[e]);
            }
        }
        count
    }

    /// Branches on the uncovered element with the fewest sets not yet
    /// excluded; a set tried in an earlier sibling is excluded from the later
    /// ones. Returns false when the budget is exhausted.
    fn dfs(&mut self, covered: &BitSet, excluded: &mut BitSet, chosen: &mut Vec<usize>) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            return false;
        }
        let mut pivot = None;
        let mut fewest = usize::MAX;
        for &e in &self.order {
            if covered.contains(e) {
                continue;
            }
            let live = self.owners[e].count_minus(excluded);
            if live < fewest {
                fewest = live;
                pivot = Some(e);
                if live <= 1 {
                    break;
                }
            }
        }
        let Some(pivot) = pivot else {
            if chosen.len() < self.best_len() {
                let mut s = chosen.clone();
                s.sort_unstable();
                self.best = Some(s);
            }
            return true;
        };
        if fewest == 0 || chosen.len() + self.packing_bound(covered) >= self.best_len() {
            return true;
        }
        let mut branches: Vec<(usize, usize)> = self.owners[pivot]
            .iter()
            .filter(|&s| !excluded.contains(s))
            .map(|s| (s, self.sets[s].count_minus(covered)))
            .collect();
        branches.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        let mut newly_excluded = Vec::with_capacity(branches.len());
        let mut ok = true;
        for (s, _) in branches {
            let mut next = covered.clone();
            next.union_with(&self.sets[s]);
            chosen.push(s);
            ok = self.dfs(&next, excluded, chosen);
            chosen.pop();
            if !ok || self.best_len() <= self.lower_bound || chosen.len() + 1 >= self.best_len() {
                break;
            }
            excluded.insert(s);
            newly_excluded.push(s);
        }
        for s in newly_excluded {
            excluded.remove(s);
        }
        ok
    }
}

/// Finds a minimum-cardinality cover.
pub fn solve(
    instance: &SetCoverInstance,
    options: &SolveOptions,
) -> Result<Solution, SetCoverError> {
    let u = instance.universe;
    let k = instance.sets.len();
    let mut owners = vec![BitSet::new(k); u];
    for (i, s) in instance.sets.iter().enumerate() {
        for e in s.iter() {
            owners[e].insert(i);
        }
    }
    if owners.iter().any(|o| o.count() == 0) {
        return Err(SetCoverError::Infeasible);
    }
    let mut order: Vec<usize> = (0..u).collect();
    order.sort_by_key(|&e| (owners[e].count(), e));
    let neighbourhood = owners
        .iter()
        .map(|o| {
            let mut nb = BitSet::new(u);
            for s in o.iter() {
                nb.union_with(&instance.sets[s]);
            }
            nb
        })
        .collect();

    let incumbent = greedy(instance, &options.forced);
    let mut search = Search {
        sets: &instance.sets,
        owners,
        order,
        neighbourhood,
        budget: options.node_budget,
        nodes: 0,
        lower_bound: options.lower_bound,
        best: incumbent,
    };
    if search.best_len() <= options.lower_bound {
        return Ok(Solution {
            sets: search.best.unwrap_or_default(),
            nodes: 0,
            optimal: true,
        });
    }
    let mut covered = BitSet::new(u);
    for &f in &options.forced {
        covered.union_with(&instance.sets[f]);
    }
    let mut chosen = options.forced.clone();
    let mut excluded = BitSet::new(k);
    if !search.dfs(&covered, &mut excluded, &mut chosen) {
        return Err(SetCoverError::BudgetExceeded {
            budget: options.node_budget,
            best: search.best,
        });
    }
    let nodes = search.nodes;
    match search.best {
        Some(sets) => Ok(Solution {
            sets,
            nodes,
            optimal: true,
        }),
        None => Err(SetCoverError::Infeasible),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(universe: usize, elems: &[usize]) -> BitSet {
        let mut b = BitSet::new(universe);
        for &e in elems {
            b.insert(e);
        }
        b
    }

    /// Exhaustive minimum over all subsets, for small instances.
    fn brute_force(instance: &SetCoverInstance) -> Option<usize> {
        let k = instance.sets.len();
        (0u32..1 << k)
            .filter(|mask| {
                let mut cov = BitSet::new(instance.universe);
                for i in 0..k {
                    if mask >> i & 1 == 1 {
                        cov.union_with(&instance.sets[i]);
                    }
                }
                cov.count() == instance.universe
            })
            .map(|m| m.count_ones() as usize)
            .min()
    }

    #[test]
    fn greedy_is_not_optimal_but_search_is() {
        // classic instance where greedy picks the big middle set first
        let u = 6;
        let sets = vec![
            set(u, &[0, 1, 2]),
            set(u, &[3, 4, 5]),
            set(u, &[1, 2, 3, 4]),
            set(u, &[0]),
            set(u, &[5]),
        ];
        let inst = SetCoverInstance::new(u, sets);
        assert_eq!(greedy(&inst, &[]).unwrap().len(), 3);
        let sol = solve(&inst, &SolveOptions::default()).unwrap();
        assert_eq!(sol.sets, vec![0, 1]);
        assert!(sol.optimal);
    }

    #[test]
    fn infeasible_detected() {
        let inst = SetCoverInstance::new(3, vec![set(3, &[0, 1])]);
        assert_eq!(
            solve(&inst, &SolveOptions::default()),
            Err(SetCoverError::Infeasible)
        );
    }

    #[test]
    fn budget_is_enforced() {
        let u = 12;
        let sets: Vec<BitSet> = (0..u)
            .map(|i| set(u, &[i, (i + 1) % u, (i + 5) % u]))
            .collect();
        let inst = SetCoverInstance::new(u, sets);
        let opts = SolveOptions {
            node_budget: 1,
            ..SolveOptions::default()
        };
        assert!(matches!(
            solve(&inst, &opts),
            Err(SetCoverError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn matches_brute_force_on_random_instances() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..60 {
            let u = rng.gen_range(3..14);
            let k = rng.gen_range(2..12);
            let sets: Vec<BitSet> = (0..k)
                .map(|_| {
                    let elems: Vec<usize> = (0..u).filter(|_| rng.gen_bool(0.3)).collect();
                    set(u, &elems)
                })
                .collect();
            let inst = SetCoverInstance::new(u, sets);
            let expected = brute_force(&inst);
            match solve(&inst, &SolveOptions::default()) {
                Ok(sol) => {
                    assert_eq!(Some(sol.sets.len()), expected);
                    let mut cov = BitSet::new(u);
                    for &s in &sol.sets {
                        cov.union_with(&inst.sets[s]);
                    }
                    assert_eq!(cov.count(), u);
                }
                Err(SetCoverError::Infeasible) => assert_eq!(expected, None),
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn bitset_ops() {
        let a = set(130, &[0, 64, 129]);
        let b = set(130, &[0, 1, 64, 128, 129]);
        assert!(a.is_subset(&b));
        assert!(!b.is_subset(&a));
        assert_eq!(b.count_minus(&a), 2);
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![0, 64, 129]);
    }
}
