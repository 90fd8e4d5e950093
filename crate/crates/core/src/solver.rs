//! Exact chromatic and set chromatic numbers at desk scale, plus the
//! brute-force oracle used to cross-check them.
//!
//! Both solvers enumerate canonically (the first occurrences of colours
//! appear in increasing order), which quotients out colour relabellings —
//! sound here because both validity notions are invariant under permuting
//! colour identifiers. Budgets are counted in explored nodes, not wall
//! time, so runs are reproducible; an exhausted budget yields honest bounds
//! rather than a wrong exact claim.

use thiserror::Error;

use crate::colouring::{greedy_proper_colouring, is_set_colouring, Colouring};
use crate::graph::Graph;

#[derive(Debug, Error, PartialEq)]
pub enum SolverError {
    #[error("graph has {n} vertices; this solver accepts at most {max}")]
    TooLarge { n: usize, max: usize },
    #[error("{k}^{n} assignments exceed the brute-force cap of {cap}")]
    OracleTooLarge { k: u32, n: usize, cap: u64 },
    #[error("colour count must be at least 1")]
    NoColours,
}

/// Solver limits. One node is one attempted vertex assignment.
#[derive(Clone, Copy, Debug)]
pub struct SolverConfig {
    pub max_vertices: usize,
    pub max_nodes: u64,
}

impl SolverConfig {
    /// Default for proper chromatic number: up to 64 vertices.
    pub fn chromatic_default() -> Self {
        Self {
            max_vertices: 64,
            max_nodes: 100_000_000,
        }
    }

    /// Default for the set chromatic number. Set-colouring validity is
    /// non-local, so exact mode is kept to 12 vertices unless overridden.
    pub fn set_chromatic_default() -> Self {
        Self {
            max_vertices: 12,
            max_nodes: 100_000_000,
        }
    }
}

/// An exact value with its certifying colouring.
#[derive(Clone, Debug)]
pub struct SolveResult {
    pub value: u32,
    pub witness: Colouring,
    pub nodes_explored: u64,
}

/// Outcome of a solve: exact, or bracketing bounds when the node budget ran
/// out before the search completed.
#[derive(Clone, Debug)]
pub enum SolveOutcome {
    Exact(SolveResult),
    Bounded {
        lower: u32,
        upper: u32,
        nodes_explored: u64,
    },
}

impl SolveOutcome {
    /// The exact value, if the search completed.
    pub fn exact_value(&self) -> Option<u32> {
        match self {
            SolveOutcome::Exact(r) => Some(r.value),
            SolveOutcome::Bounded { .. } => None,
        }
    }
}

enum Inner {
    Exact { value: u32, witness: Colouring },
    Bounded { lower: u32, upper: u32 },
}

/// Exact chromatic number by iterative deepening over the colour count,
/// testing each `k` with a canonical backtracking search (vertex 0 takes
/// colour 1; any vertex may use at most one colour beyond the maximum used
/// so far).
pub fn chromatic_number(g: &Graph, config: &SolverConfig) -> Result<SolveOutcome, SolverError> {
    if g.n() > config.max_vertices {
        return Err(SolverError::TooLarge {
            n: g.n(),
            max: config.max_vertices,
        });
    }
    let mut nodes = 0u64;
    Ok(match chromatic_inner(g, config.max_nodes, &mut nodes) {
        Inner::Exact { value, witness } => SolveOutcome::Exact(SolveResult {
            value,
            witness,
            nodes_explored: nodes,
        }),
        Inner::Bounded { lower, upper } => SolveOutcome::Bounded {
            lower,
            upper,
            nodes_explored: nodes,
        },
    })
}

fn chromatic_inner(g: &Graph, budget: u64, nodes: &mut u64) -> Inner {
    let order: Vec<usize> = (0..g.n()).collect();
    let greedy =
        greedy_proper_colouring(g, &order).expect("identity order is a permutation");
    let upper = greedy.k();
    if g.edge_count() == 0 {
        return Inner::Exact {
            value: 1,
            witness: greedy,
        };
    }
    for k in 2..upper {
        match proper_search(g, k, budget, nodes) {
            Search::Found(colours) => {
                let witness =
                    Colouring::new(colours, k).expect("search assigns colours in 1..=k");
                return Inner::Exact { value: k, witness };
            }
            Search::Exhausted => {}
            Search::OutOfBudget => {
                return Inner::Bounded { lower: k, upper };
            }
        }
    }
    // every k below the greedy bound failed, so the greedy colouring is
    // optimal
    Inner::Exact {
        value: upper,
        witness: greedy,
    }
}

enum Search {
    Found(Vec<u32>),
    Exhausted,
    OutOfBudget,
}

fn proper_search(g: &Graph, k: u32, budget: u64, nodes: &mut u64) -> Search {
    let mut colours = vec![0u32; g.n()];

    fn rec(
        g: &Graph,
        k: u32,
        v: usize,
        max_used: u32,
        colours: &mut Vec<u32>,
        budget: u64,
        nodes: &mut u64,
    ) -> Option<bool> {
        if v == g.n() {
            return Some(true);
        }
        let cap = (max_used + 1).min(k);
        for c in 1..=cap {
            if *nodes >= budget {
                return None;
            }
            *nodes += 1;
            if g.neighbours(v).all(|u| colours[u] != c) {
                colours[v] = c;
                match rec(g, k, v + 1, max_used.max(c), colours, budget, nodes) {
                    Some(true) => return Some(true),
                    Some(false) => colours[v] = 0,
                    None => {
                        colours[v] = 0;
                        return None;
                    }
                }
            }
        }
        Some(false)
    }

    match rec(g, k, 0, 0, &mut colours, budget, nodes) {
        Some(true) => Search::Found(colours),
        Some(false) => Search::Exhausted,
        None => Search::OutOfBudget,
    }
}

/// `ceil(lg chi + 1)`, at least 1: the integer floor that any set colouring
/// must respect given the chromatic number.
fn set_lower_from_chi(chi: u32) -> u32 {
    let raw = (chi as f64).log2() + 1.0;
    ((raw - 1e-9).ceil()).max(1.0) as u32
}

/// Exact set chromatic number.
///
/// Iterates `k` upward from `ceil(lg chi + 1)`; for each `k`, enumerates
/// canonical colourings, pruning a partial assignment only on evidence that
/// later assignments cannot undo: two adjacent vertices whose neighbourhoods
/// are both fully coloured with equal colour sets. (Partial colour sets only
/// grow, so equality between incomplete sets is not prunable.) If no
/// `k < chi` admits a set colouring, the optimal proper colouring is the
/// witness, since every proper colouring is a set colouring.
pub fn set_chromatic_number(
    g: &Graph,
    config: &SolverConfig,
) -> Result<SolveOutcome, SolverError> {
    let n = g.n();
    let max = config.max_vertices.min(64);
    if n > max {
        return Err(SolverError::TooLarge { n, max });
    }
    let mut nodes = 0u64;
    let (chi, chi_witness) = match chromatic_inner(g, config.max_nodes, &mut nodes) {
        Inner::Exact { value, witness } => (value, witness),
        Inner::Bounded { lower, upper } => {
            return Ok(SolveOutcome::Bounded {
                lower: set_lower_from_chi(lower),
                upper,
                nodes_explored: nodes,
            });
        }
    };

    for k in set_lower_from_chi(chi)..chi {
        let mut search = SetSearch::new(g, k, config.max_nodes);
        search.nodes = nodes;
        match search.run() {
            Some(true) => {
                let witness = Colouring::new(search.colours, k)
                    .expect("search assigns colours in 1..=k");
                return Ok(SolveOutcome::Exact(SolveResult {
                    value: k,
                    witness,
                    nodes_explored: search.nodes,
                }));
            }
            Some(false) => nodes = search.nodes,
            None => {
                return Ok(SolveOutcome::Bounded {
                    lower: k,
                    upper: chi,
                    nodes_explored: search.nodes,
                });
            }
        }
    }
    Ok(SolveOutcome::Exact(SolveResult {
        value: chi,
        witness: chi_witness,
        nodes_explored: nodes,
    }))
}

/// Backtracking state for the canonical set-colouring search at a fixed `k`.
///
/// `counts[u * (k+1) + c]` tracks how many coloured neighbours of `u` carry
/// colour `c`, and `masks[u]` is the corresponding bitset, so neighbourhood
/// colour sets stay maintained under assign/undo. `completes_at[v]` lists
/// the vertices whose last neighbour (in assignment order) is `v`: those are
/// exactly the vertices whose colour set becomes final at step `v`, the only
/// moment the irreversible-equality prune can fire.
struct SetSearch<'a> {
    g: &'a Graph,
    k: u32,
    colours: Vec<u32>,
    counts: Vec<u32>,
    masks: Vec<u64>,
    max_neighbour: Vec<usize>,
    completes_at: Vec<Vec<usize>>,
    nodes: u64,
    budget: u64,
}

impl<'a> SetSearch<'a> {
    fn new(g: &'a Graph, k: u32, budget: u64) -> Self {
        let n = g.n();
        let mut max_neighbour = vec![usize::MAX; n];
        let mut completes_at = vec![Vec::new(); n];
        for u in 0..n {
            if let Some(last) = g.neighbours(u).last() {
                max_neighbour[u] = last;
                completes_at[last].push(u);
            }
        }
        Self {
            g,
            k,
            colours: vec![0u32; n],
            counts: vec![0u32; n * (k as usize + 1)],
            masks: vec![0u64; n],
            max_neighbour,
            completes_at,
            nodes: 0,
            budget,
        }
    }

    fn run(&mut self) -> Option<bool> {
        self.rec(0, 0)
    }

    fn rec(&mut self, v: usize, max_used: u32) -> Option<bool> {
        if v == self.g.n() {
            return Some(true);
        }
        let cap = (max_used + 1).min(self.k);
        for c in 1..=cap {
            if self.nodes >= self.budget {
                return None;
            }
            self.nodes += 1;
            if self.assign(v, c) {
                match self.rec(v + 1, max_used.max(c)) {
                    Some(true) => return Some(true),
                    Some(false) => self.unassign(v, c),
                    None => {
                        self.unassign(v, c);
                        return None;
                    }
                }
            }
        }
        Some(false)
    }

    /// Places colour `c` on `v`. Returns false (with the move rolled back)
    /// if an adjacent pair of now-complete neighbourhoods collides.
    fn assign(&mut self, v: usize, c: u32) -> bool {
        self.colours[v] = c;
        let bit = 1u64 << (c - 1);
        let stride = self.k as usize + 1;
        for u in self.g.neighbours(v) {
            let idx = u * stride + c as usize;
            self.counts[idx] += 1;
            if self.counts[idx] == 1 {
                self.masks[u] |= bit;
            }
        }
        for i in 0..self.completes_at[v].len() {
            let u = self.completes_at[v][i];
            for w in self.g.neighbours(u) {
                if self.max_neighbour[w] <= v && self.masks[w] == self.masks[u] {
                    self.unassign(v, c);
                    return false;
                }
            }
        }
        true
    }

    fn unassign(&mut self, v: usize, c: u32) {
        self.colours[v] = 0;
        let bit = 1u64 << (c - 1);
        let stride = self.k as usize + 1;
        for u in self.g.neighbours(v) {
            let idx = u * stride + c as usize;
            self.counts[idx] -= 1;
            if self.counts[idx] == 0 {
                self.masks[u] &= !bit;
            }
        }
    }
}

/// Brute-force ground truth: tests all `k^n` assignments with the set
/// verifier, returning whether any is valid and the exact number that are.
/// Refuses when `k^n` exceeds `10^8`.
pub fn brute_force_oracle(g: &Graph, k: u32) -> Result<(bool, u64), SolverError> {
    const CAP: u64 = 100_000_000;
    if k == 0 {
        return Err(SolverError::NoColours);
    }
    let n = g.n();
    let total = (k as f64).powi(n as i32);
    if !(total <= CAP as f64) {
        return Err(SolverError::OracleTooLarge { k, n, cap: CAP });
    }

    let mut assignment = vec![1u32; n];
    let mut count = 0u64;
    loop {
        let c = Colouring::new(assignment.clone(), k).expect("odometer stays in 1..=k");
        if is_set_colouring(g, &c)
            .expect("lengths match by construction")
            .is_valid()
        {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == n {
                return Ok((count > 0, count));
            }
            if assignment[i] == k {
                assignment[i] = 1;
                i += 1;
            } else {
                assignment[i] += 1;
                break;
            }
        }
    }
}

/// Smallest `k` for which [`brute_force_oracle`] reports a valid assignment.
pub fn brute_force_set_chromatic(g: &Graph) -> Result<u32, SolverError> {
    for k in 1..=(g.n() as u32) {
        if brute_force_oracle(g, k)?.0 {
            return Ok(k);
        }
    }
    unreachable!("n distinct colours always set-colour a graph on n vertices via a proper colouring")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::{is_proper_colouring, is_set_colouring};
    use crate::graph::{sample_gnp, Seed};
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cycle(n: usize) -> Graph {
        let mut edges: Vec<_> = (0..n - 1).map(|v| (v, v + 1)).collect();
        edges.push((0, n - 1));
        Graph::from_edges(n, &edges).unwrap()
    }

    fn chi(g: &Graph) -> u32 {
        chromatic_number(g, &SolverConfig::chromatic_default())
            .unwrap()
            .exact_value()
            .expect("search completes at this size")
    }

    fn chis(g: &Graph) -> SolveResult {
        match set_chromatic_number(g, &SolverConfig::set_chromatic_default()).unwrap() {
            SolveOutcome::Exact(r) => r,
            SolveOutcome::Bounded { .. } => panic!("search should complete at this size"),
        }
    }

    #[test]
    fn chromatic_examples() {
        assert_eq!(chi(&Graph::complete(4).unwrap()), 4);
        assert_eq!(chi(&cycle(5)), 3);
        assert_eq!(chi(&Graph::empty(6).unwrap()), 1);
    }

    #[test]
    fn set_chromatic_examples() {
        assert_eq!(chis(&Graph::complete(2).unwrap()).value, 2);
        assert_eq!(chis(&Graph::complete(3).unwrap()).value, 3);
        assert_eq!(chis(&Graph::complete(4).unwrap()).value, 4);
        assert_eq!(chis(&Graph::empty(5).unwrap()).value, 1);
    }

    #[test]
    fn oracle_examples() {
        let k2 = Graph::complete(2).unwrap();
        assert_eq!(brute_force_oracle(&k2, 2).unwrap(), (true, 2));
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(brute_force_oracle(&k3, 2).unwrap(), (false, 0));
        let k1 = Graph::empty(1).unwrap();
        assert_eq!(brute_force_oracle(&k1, 1).unwrap(), (true, 1));
    }

    #[test]
    fn oracle_refuses_oversized_inputs() {
        let g = Graph::empty(30).unwrap();
        assert!(matches!(
            brute_force_oracle(&g, 2),
            Err(SolverError::OracleTooLarge { .. })
        ));
    }

    #[test]
    fn solver_agrees_with_oracle_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for trial in 0..40 {
            let n = rng.random_range(2..=7);
            let p = [0.3, 0.5, 0.7][trial % 3];
            let g = sample_gnp(n, p, Seed(1000 + trial as u64)).unwrap();
            let solved = chis(&g).value;
            let brute = brute_force_set_chromatic(&g).unwrap();
            assert_eq!(solved, brute, "n={n}, p={p}, trial={trial}");
        }
    }

    #[test]
    fn witnesses_pass_their_verifiers() {
        for trial in 0..30 {
            let g = sample_gnp(9, 0.5, Seed(trial)).unwrap();

            let SolveOutcome::Exact(r) =
                chromatic_number(&g, &SolverConfig::chromatic_default()).unwrap()
            else {
                panic!("chromatic search should complete at n = 9");
            };
            assert!(is_proper_colouring(&g, &r.witness).unwrap().is_valid());
            assert_eq!(r.witness.k(), r.value);

            let r = chis(&g);
            assert!(is_set_colouring(&g, &r.witness).unwrap().is_valid());
            assert_eq!(r.witness.k(), r.value);
        }
    }

    #[test]
    fn set_chromatic_is_relabelling_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for trial in 0..15 {
            let g = sample_gnp(8, 0.5, Seed(200 + trial)).unwrap();
            let mut perm: Vec<usize> = (0..8).collect();
            perm.shuffle(&mut rng);
            let h = g.relabelled(&perm).unwrap();
            assert_eq!(chis(&g).value, chis(&h).value, "trial {trial}");
        }
    }

    #[test]
    fn eq1_sandwich_on_random_graphs() {
        for trial in 0..20 {
            let g = sample_gnp(8, 0.5, Seed(300 + trial)).unwrap();
            let chi = chi(&g);
            let chis = chis(&g).value;
            assert!(
                (chi as f64).log2() + 1.0 <= chis as f64 + 1e-9,
                "lower bound violated: chi={chi}, chis={chis}"
            );
            assert!(chis <= chi, "upper bound violated: chi={chi}, chis={chis}");
        }
    }

    #[test]
    fn budget_exhaustion_reports_bounds() {
        let g = sample_gnp(12, 0.5, Seed(5)).unwrap();
        let out = set_chromatic_number(
            &g,
            &SolverConfig {
                max_vertices: 12,
                max_nodes: 3,
            },
        )
        .unwrap();
        match out {
            SolveOutcome::Bounded {
                lower,
                upper,
                nodes_explored,
            } => {
                assert!(lower <= upper);
                assert!(lower >= 1);
                assert!(nodes_explored <= 4);
            }
            SolveOutcome::Exact(_) => panic!("budget of 3 nodes cannot complete"),
        }
    }

    #[test]
    fn size_limits_are_enforced() {
        let g = Graph::empty(13).unwrap();
        assert!(matches!(
            set_chromatic_number(&g, &SolverConfig::set_chromatic_default()),
            Err(SolverError::TooLarge { n: 13, max: 12 })
        ));
        let g = Graph::empty(65).unwrap();
        assert!(matches!(
            chromatic_number(&g, &SolverConfig::chromatic_default()),
            Err(SolverError::TooLarge { n: 65, max: 64 })
        ));
    }

    #[test]
    fn set_lower_from_chi_rounding() {
        assert_eq!(set_lower_from_chi(1), 1);
        assert_eq!(set_lower_from_chi(2), 2);
        assert_eq!(set_lower_from_chi(3), 3);
        assert_eq!(set_lower_from_chi(4), 3);
        assert_eq!(set_lower_from_chi(5), 4);
        assert_eq!(set_lower_from_chi(8), 4);
    }
}
