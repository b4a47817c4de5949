//! Exact list-coloring search over conflict graphs.
//!
//! The conflict graph of a 2-distance instance is the square of the input
//! graph; coloring it properly from per-vertex lists is the whole game.
//! The search is deterministic: smallest-remaining-list vertex order with
//! index tie-break, palette-order values, forward checking with singleton
//! propagation. UNSAT is only reported after exhaustive search.

use std::time::Instant;

use crate::plane_graph::PlaneGraph;

/// Conflict adjacency: vertex pairs that must receive distinct colors.
#[derive(Debug, Clone)]
pub struct ConflictGraph {
    adj: Vec<Vec<usize>>,
}

impl ConflictGraph {
    pub fn new(n: usize) -> Self {
        ConflictGraph {
            adj: vec![Vec::new(); n],
        }
    }

    /// The square of a plane graph: conflicts at distance 1 or 2.
    pub fn square_of(g: &PlaneGraph) -> Self {
        let mut cg = ConflictGraph::new(g.vertex_count());
        for (u, v) in g.dist2_closure() {
            cg.add_conflict(u, v);
        }
        cg
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Self {
        let mut cg = ConflictGraph::new(n);
        for &(u, v) in pairs {
            cg.add_conflict(u, v);
        }
        cg
    }

    pub fn add_conflict(&mut self, u: usize, v: usize) {
        if u != v && !self.adj[u].contains(&v) {
            self.adj[u].push(v);
            self.adj[v].push(u);
        }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn conflicts(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn are_conflicting(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    /// Induced restriction onto `vertices`, reindexed in the given order.
    pub fn restrict(&self, vertices: &[usize]) -> ConflictGraph {
        let mut index = vec![usize::MAX; self.adj.len()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut cg = ConflictGraph::new(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            for &u in &self.adj[v] {
                if index[u] != usize::MAX {
                    cg.add_conflict(i, index[u]);
                }
            }
        }
        cg
    }

    /// Merges `merge` into `keep`, forcing the two vertices to share a
    /// color. Returns the new graph and the old-to-new index map, or
    /// `None` when the pair is itself conflicting (equality unsatisfiable).
    pub fn contract_pair(&self, keep: usize, merge: usize) -> Option<(ConflictGraph, Vec<usize>)> {
        if self.are_conflicting(keep, merge) {
            return None;
        }
        let n = self.adj.len();
        let mut map = vec![0usize; n];
        let mut next = 0;
        for (v, slot) in map.iter_mut().enumerate() {
            if v != merge {
                *slot = next;
                next += 1;
            }
        }
        map[merge] = map[keep];
        let mut cg = ConflictGraph::new(n - 1);
        for v in 0..n {
            for &u in &self.adj[v] {
                if map[u] != map[v] {
                    cg.add_conflict(map[v], map[u]);
                }
            }
        }
        Some((cg, map))
    }

    /// A greedy clique of pairwise-conflicting vertices, highest degree
    /// first: the canonical symmetry-breaking seed.
    pub fn greedy_clique(&self, cap: usize) -> Vec<usize> {
        let n = self.adj.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (usize::MAX - self.adj[v].len(), v));
        let mut clique: Vec<usize> = Vec::new();
        for v in order {
            if clique.len() == cap {
                break;
            }
            if clique.iter().all(|&u| self.are_conflicting(u, v)) {
                clique.push(v);
            }
        }
        clique
    }
}

/// Resource limits for one search.
#[derive(Debug, Clone, Default)]
pub struct SearchLimits {
    pub deadline: Option<Instant>,
    pub node_cap: Option<u64>,
}

/// Search outcome. `Aborted` carries the node count at the cut-off.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Sat(Vec<u8>),
    Unsat,
    Aborted { nodes: u64 },
}

impl SolveOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveOutcome::Sat(_))
    }
}

/// Below this many open vertices the decomposition check is pure
/// overhead: the lemma configurations never split, while the gadget
/// compositions do.
const DECOMPOSE_THRESHOLD: usize = 20;

struct Search<'a> {
    cg: &'a ConflictGraph,
    domains: Vec<u32>,
    assigned: Vec<bool>,
    trail: Vec<(usize, u32)>,
    degree: Vec<usize>,
    nodes: u64,
    limits: &'a SearchLimits,
    aborted: bool,
}

/// Solves the list-coloring instance exactly. Returns the first coloring
/// in deterministic search order, or UNSAT after exhausting the space.
pub fn solve(cg: &ConflictGraph, lists: &[u32], limits: &SearchLimits) -> SolveOutcome {
    assert_eq!(cg.len(), lists.len(), "one list per vertex");
    let mut search = Search {
        cg,
        domains: lists.to_vec(),
        assigned: vec![false; lists.len()],
        trail: Vec::new(),
        degree: (0..lists.len()).map(|v| cg.conflicts(v).len()).collect(),
        nodes: 0,
        limits,
        aborted: false,
    };
    if search.domains.contains(&0) {
        return SolveOutcome::Unsat;
    }
    let outcome = search.run();
    if let SolveOutcome::Sat(coloring) = &outcome {
        verify_coloring(cg, lists, coloring);
    }
    outcome
}

/// Independent re-check of a returned coloring; panics on an internal
/// solver bug rather than reporting a wrong SAT.
pub fn verify_coloring(cg: &ConflictGraph, lists: &[u32], coloring: &[u8]) {
    assert_eq!(coloring.len(), lists.len());
    for (v, &c) in coloring.iter().enumerate() {
        assert!(
            lists[v] & (1 << c) != 0,
            "solver bug: vertex {v} colored outside its list"
        );
        for &u in cg.conflicts(v) {
            assert!(
                coloring[u] != c || u == v,
                "solver bug: conflicting vertices {u} and {v} share color {c}"
            );
        }
    }
}

impl Search<'_> {
    fn run(&mut self) -> SolveOutcome {
        let all: Vec<usize> = (0..self.domains.len()).collect();
        match self.dfs_set(&all) {
            Some(true) => {
                let coloring = self
                    .domains
                    .iter()
                    .map(|d| d.trailing_zeros() as u8)
                    .collect();
                SolveOutcome::Sat(coloring)
            }
            Some(false) => SolveOutcome::Unsat,
            None => SolveOutcome::Aborted { nodes: self.nodes },
        }
    }

    fn mark(&self) -> usize {
        self.trail.len()
    }

    fn rollback(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (u, old) = self.trail.pop().expect("mark within trail");
            self.domains[u] = old;
            self.assigned[u] = false;
        }
    }

    /// Solves the unassigned part of `vertices`. On success the vertices
    /// stay assigned; on failure or abort all work is rolled back.
    /// `Some(true)` solved, `Some(false)` exhausted, `None` aborted.
    fn dfs_set(&mut self, vertices: &[usize]) -> Option<bool> {
        // One pass: count the open vertices and find the branch vertex
        // (smallest list, then highest conflict degree, then index).
        let mut open_count = 0usize;
        let mut best: Option<(u32, usize, usize)> = None;
        for &v in vertices {
            if self.assigned[v] {
                continue;
            }
            open_count += 1;
            let key = (self.domains[v].count_ones(), usize::MAX - self.degree[v], v);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
        let Some((_, _, v)) = best else {
            return Some(true);
        };
        // Assignments cut the conflict graph apart; independent components
        // are solved independently, turning a product of searches into a
        // sum. Small open sets skip the check.
        if open_count >= DECOMPOSE_THRESHOLD {
            let open: Vec<usize> = vertices
                .iter()
                .copied()
                .filter(|&v| !self.assigned[v])
                .collect();
            let components = self.components(&open);
            if components.len() > 1 {
                let mark = self.mark();
                for component in &components {
                    match self.dfs_set(component) {
                        Some(true) => {}
                        other => {
                            self.rollback(mark);
                            return other;
                        }
                    }
                }
                return Some(true);
            }
        }
        let mut bits = self.domains[v];
        while bits != 0 {
            let color = bits.trailing_zeros();
            bits &= bits - 1;
            self.nodes += 1;
            if self.out_of_budget() {
                return None;
            }
            let mark = self.mark();
            if self.assign(v, color) {
                match self.dfs_set(vertices) {
                    Some(true) => return Some(true),
                    Some(false) => {}
                    None => {
                        self.rollback(mark);
                        return None;
                    }
                }
            }
            self.rollback(mark);
        }
        Some(false)
    }

    /// Connected components of the conflict graph induced on `open`,
    /// each sorted, ordered by smallest member.
    fn components(&self, open: &[usize]) -> Vec<Vec<usize>> {
        let mut comp_of = vec![usize::MAX; self.domains.len()];
        let mut components: Vec<Vec<usize>> = Vec::new();
        for &start in open {
            if comp_of[start] != usize::MAX {
                continue;
            }
            let id = components.len();
            let mut queue = vec![start];
            comp_of[start] = id;
            let mut members = Vec::new();
            while let Some(v) = queue.pop() {
                members.push(v);
                for &u in self.cg.conflicts(v) {
                    if !self.assigned[u] && comp_of[u] == usize::MAX {
                        comp_of[u] = id;
                        queue.push(u);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        components
    }

    fn out_of_budget(&mut self) -> bool {
        if self.aborted {
            return true;
        }
        if let Some(cap) = self.limits.node_cap {
            if self.nodes > cap {
                self.aborted = true;
                return true;
            }
        }
        if self.nodes.is_multiple_of(4096) {
            if let Some(deadline) = self.limits.deadline {
                if Instant::now() >= deadline {
                    self.aborted = true;
                    return true;
                }
            }
        }
        false
    }

    /// Assigns `v := color` and forward-checks, cascading singleton
    /// domains. All domain writes go through the trail.
    fn assign(&mut self, v: usize, color: u32) -> bool {
        let mut queue = vec![(v, color)];
        while let Some((w, c)) = queue.pop() {
            let bit = 1u32 << c;
            if self.assigned[w] {
                if self.domains[w] != bit {
                    return false;
                }
                continue;
            }
            if self.domains[w] & bit == 0 {
                // A forced color was pruned by a sibling propagation chain.
                return false;
            }
            self.trail.push((w, self.domains[w]));
            self.domains[w] = bit;
            self.assigned[w] = true;
            for i in 0..self.cg.conflicts(w).len() {
                let u = self.cg.conflicts(w)[i];
                if self.assigned[u] {
                    if self.domains[u] == bit {
                        return false;
                    }
                    continue;
                }
                if self.domains[u] & bit != 0 {
                    self.trail.push((u, self.domains[u]));
                    self.domains[u] &= !bit;
                    match self.domains[u].count_ones() {
                        0 => return false,
                        1 => queue.push((u, self.domains[u].trailing_zeros())),
                        _ => {}
                    }
                }
            }
        }
        true
    }
}

/// Brute-force oracle: tries every assignment in the cartesian product of
/// the lists. Exponential; for cross-checking small instances only.
pub fn naive_solve(cg: &ConflictGraph, lists: &[u32]) -> Option<Vec<u8>> {
    let n = lists.len();
    let choices: Vec<Vec<u8>> = lists
        .iter()
        .map(|&m| {
            (0..32)
                .filter(|&c| m & (1 << c) != 0)
                .map(|c| c as u8)
                .collect()
        })
        .collect();
    if choices.iter().any(|c| c.is_empty()) {
        return None;
    }
    let mut pick = vec![0usize; n];
    loop {
        let coloring: Vec<u8> = (0..n).map(|v| choices[v][pick[v]]).collect();
        let ok = (0..n).all(|v| {
            cg.conflicts(v)
                .iter()
                .all(|&u| u < v || coloring[u] != coloring[v])
        });
        if ok {
            return Some(coloring);
        }
        let mut i = n;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_square(n: usize) -> ConflictGraph {
        // Square of a path: conflicts between vertices within distance 2.
        let mut cg = ConflictGraph::new(n);
        for v in 0..n {
            if v + 1 < n {
                cg.add_conflict(v, v + 1);
            }
            if v + 2 < n {
                cg.add_conflict(v, v + 2);
            }
        }
        cg
    }

    fn mask(colors: &str) -> u32 {
        colors
            .bytes()
            .map(|b| 1u32 << (b - b'a'))
            .fold(0, |a, b| a | b)
    }

    #[test]
    fn three_path_forced_lists_are_unsat() {
        let cg = path_square(3);
        let lists = [mask("ab"), mask("ab"), mask("ab")];
        assert_eq!(
            solve(&cg, &lists, &SearchLimits::default()),
            SolveOutcome::Unsat
        );
    }

    #[test]
    fn three_path_with_an_extra_color_is_sat() {
        let cg = path_square(3);
        let lists = [mask("ab"), mask("ac"), mask("ab")];
        let outcome = solve(&cg, &lists, &SearchLimits::default());
        assert!(outcome.is_sat());
    }

    #[test]
    fn single_vertex() {
        let cg = ConflictGraph::new(1);
        let outcome = solve(&cg, &[mask("a")], &SearchLimits::default());
        assert_eq!(outcome, SolveOutcome::Sat(vec![0]));
    }

    #[test]
    fn agrees_with_naive_oracle_on_small_instances() {
        use crate::plane_graph::{random_plane_graph, SplitMix64};
        let mut rng = SplitMix64::new(7);
        let mut done = 0;
        let mut seed = 0u64;
        while done < 60 {
            seed += 1;
            let g = random_plane_graph(seed, 6);
            if g.vertex_count() > 8 {
                continue;
            }
            let cg = ConflictGraph::square_of(&g);
            let palette = 4;
            let lists: Vec<u32> = (0..cg.len())
                .map(|_| {
                    let m = (rng.next_u64() % 15 + 1) as u32; // nonempty over 4 colors
                    m & ((1 << palette) - 1)
                })
                .collect();
            if lists.contains(&0) {
                continue;
            }
            let fast = solve(&cg, &lists, &SearchLimits::default());
            let slow = naive_solve(&cg, &lists);
            assert_eq!(fast.is_sat(), slow.is_some(), "seed {seed}");
            done += 1;
        }
    }

    #[test]
    fn adding_colors_never_hurts() {
        let cg = path_square(5);
        let lists = [mask("ab"), mask("ab"), mask("abcd"), mask("cd"), mask("cd")];
        assert_eq!(
            solve(&cg, &lists, &SearchLimits::default()),
            SolveOutcome::Unsat
        );
        // Widen one list: instance becomes satisfiable.
        let wider = [
            mask("ab"),
            mask("abe"),
            mask("abcd"),
            mask("cd"),
            mask("cd"),
        ];
        assert!(solve(&cg, &wider, &SearchLimits::default()).is_sat());
    }

    #[test]
    fn contraction_merges_conflicts() {
        let cg = path_square(5);
        let (merged, map) = cg.contract_pair(0, 4).unwrap();
        assert_eq!(merged.len(), 4);
        assert_eq!(map[0], map[4]);
        // 0 and 4 are separately in conflict with 2 and 3 / 2 and 3's
        // images after the merge.
        assert!(merged.are_conflicting(map[0], map[2]));
        assert!(merged.are_conflicting(map[0], map[3]));
        // Conflicting pairs cannot be merged.
        assert!(cg.contract_pair(0, 1).is_none());
    }

    #[test]
    fn greedy_clique_is_a_clique() {
        let cg = path_square(6);
        let clique = cg.greedy_clique(5);
        assert!(clique.len() >= 3);
        for (i, &u) in clique.iter().enumerate() {
            for &v in &clique[i + 1..] {
                assert!(cg.are_conflicting(u, v));
            }
        }
    }

    #[test]
    fn node_cap_aborts() {
        // A hard instance with a tiny cap aborts rather than lies.
        let mut cg = ConflictGraph::new(12);
        for u in 0..12 {
            for v in (u + 1)..12 {
                if (u + v) % 3 != 0 {
                    cg.add_conflict(u, v);
                }
            }
        }
        let lists = vec![mask("abcde"); 12];
        let limits = SearchLimits {
            node_cap: Some(3),
            deadline: None,
        };
        assert!(matches!(
            solve(&cg, &lists, &limits),
            SolveOutcome::Aborted { .. }
        ));
    }
}
