//! Internal directed-graph search shared by every lasso-shaped search in the
//! crate: automaton emptiness, lasso membership, run search in transducer
//! products, overhang-graph search and machine-configuration search.
//!
//! Edges carry a feature bitmask (with any per-node features folded into the
//! outgoing edges by the caller). `find_lasso` looks for a stem from the start
//! node to an anchor followed by a cycle back to the anchor whose accumulated
//! feature mask covers `required`. Breadth-first order everywhere, so results
//! are deterministic and short.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

#[derive(Debug, Clone)]
pub(crate) struct Digraph {
    num_nodes: usize,
    edges: Vec<(usize, usize, u32)>,
    out: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new(num_nodes: usize) -> Digraph {
        Digraph { num_nodes, edges: Vec::new(), out: vec![Vec::new(); num_nodes] }
    }

    pub fn add_node(&mut self) -> usize {
        self.out.push(Vec::new());
        self.num_nodes += 1;
        self.num_nodes - 1
    }

    pub fn add_edge(&mut self, from: usize, to: usize, mask: u32) -> usize {
        let id = self.edges.len();
        self.edges.push((from, to, mask));
        self.out[from].push(id);
        id
    }

    pub fn edge(&self, id: usize) -> (usize, usize, u32) {
        self.edges[id]
    }

    /// Nodes reachable from `start`, with the breadth-first parent edge of
    /// every reached node except `start` itself.
    pub fn reachable(&self, start: usize) -> (Vec<bool>, Vec<Option<usize>>) {
        let mut seen = vec![false; self.num_nodes];
        let mut parent = vec![None; self.num_nodes];
        let mut queue = VecDeque::new();
        seen[start] = true;
        queue.push_back(start);
        while let Some(node) = queue.pop_front() {
            for &e in &self.out[node] {
                let (_, to, _) = self.edges[e];
                if !seen[to] {
                    seen[to] = true;
                    parent[to] = Some(e);
                    queue.push_back(to);
                }
            }
        }
        (seen, parent)
    }

    /// Shortest cycle through `anchor` whose edges together cover `required`,
    /// as a list of edge ids.
    fn cycle_from(&self, anchor: usize, required: u32) -> Option<Vec<usize>> {
        // States are (node, subset of required features gathered so far).
        let mut parent: HashMap<(usize, u32), ((usize, u32), usize)> = HashMap::new();
        let mut queue = VecDeque::new();
        let start_key = (anchor, u32::MAX); // sentinel, never a real state
        for &e in &self.out[anchor] {
            let (_, to, mask) = self.edges[e];
            let m = mask & required;
            if to == anchor && m == required {
                return Some(vec![e]);
            }
            if let Entry::Vacant(v) = parent.entry((to, m)) {
                v.insert((start_key, e));
                queue.push_back((to, m));
            }
        }
        while let Some((node, gathered)) = queue.pop_front() {
            for &e in &self.out[node] {
                let (_, to, mask) = self.edges[e];
                let m = gathered | (mask & required);
                if to == anchor && m == required {
                    let mut path = vec![e];
                    let mut key = (node, gathered);
                    while key != start_key {
                        let (prev, pe) = parent[&key];
                        path.push(pe);
                        key = prev;
                    }
                    path.reverse();
                    return Some(path);
                }
                if let Entry::Vacant(v) = parent.entry((to, m)) {
                    v.insert(((node, gathered), e));
                    queue.push_back((to, m));
                }
            }
        }
        None
    }

    /// Finds `(stem, cycle)` edge lists: a breadth-first stem from `start` to
    /// the first anchor (taken in the given order) that closes a cycle
    /// covering `required`.
    pub fn find_lasso(
        &self,
        start: usize,
        anchors: impl IntoIterator<Item = usize>,
        required: u32,
    ) -> Option<(Vec<usize>, Vec<usize>)> {
        let (seen, parent) = self.reachable(start);
        for anchor in anchors {
            if !seen[anchor] {
                continue;
            }
            if let Some(cycle) = self.cycle_from(anchor, required) {
                let mut stem = Vec::new();
                let mut node = anchor;
                while let Some(e) = parent[node] {
                    stem.push(e);
                    node = self.edges[e].0;
                }
                stem.reverse();
                return Some((stem, cycle));
            }
        }
        None
    }
}

/// One step of the standard degeneralization counter over `conds` acceptance
/// conditions, carried as bits `0..conds` of an edge tag mask. Phases run
/// `0..=conds`; phase `conds` is the accepting phase and resets before
/// advancing, so it recurs exactly when every condition fires infinitely
/// often.
pub(crate) fn advance_phase(phase: usize, tags: u32, conds: usize) -> usize {
    let mut p = if phase == conds { 0 } else { phase };
    while p < conds && tags & (1 << p) != 0 {
        p += 1;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_simple_lasso() {
        // 0 -> 1 -> 2 -> 1
        let mut g = Digraph::new(3);
        let a = g.add_edge(0, 1, 0);
        let b = g.add_edge(1, 2, 0);
        let c = g.add_edge(2, 1, 0);
        let (stem, cycle) = g.find_lasso(0, [1], 0).unwrap();
        assert_eq!(stem, vec![a]);
        assert_eq!(cycle, vec![b, c]);
    }

    #[test]
    fn respects_required_features() {
        // Self loop without the feature, longer cycle with it.
        let mut g = Digraph::new(2);
        g.add_edge(0, 0, 0);
        let b = g.add_edge(0, 1, 0b1);
        let c = g.add_edge(1, 0, 0);
        let (stem, cycle) = g.find_lasso(0, [0], 0b1).unwrap();
        assert!(stem.is_empty());
        assert_eq!(cycle, vec![b, c]);
        assert!(g.find_lasso(0, [1], 0b10).is_none());
    }

    #[test]
    fn unreachable_anchor_is_skipped() {
        let mut g = Digraph::new(3);
        g.add_edge(0, 1, 0);
        g.add_edge(2, 2, 0);
        assert!(g.find_lasso(0, [2], 0).is_none());
    }

    #[test]
    fn gathers_features_across_the_cycle() {
        // Cycle 0 -> 1 -> 2 -> 0 where the two features sit on different edges.
        let mut g = Digraph::new(3);
        g.add_edge(0, 1, 0b01);
        g.add_edge(1, 2, 0b10);
        g.add_edge(2, 0, 0);
        let (_, cycle) = g.find_lasso(0, [0], 0b11).unwrap();
        assert_eq!(cycle.len(), 3);
    }

    #[test]
    fn phase_counter_requires_every_condition() {
        // Two conditions: phase 2 is accepting and resets.
        assert_eq!(advance_phase(0, 0b00, 2), 0);
        assert_eq!(advance_phase(0, 0b10, 2), 0); // waiting for condition 0
        assert_eq!(advance_phase(0, 0b01, 2), 1);
        assert_eq!(advance_phase(0, 0b11, 2), 2);
        assert_eq!(advance_phase(1, 0b10, 2), 2);
        assert_eq!(advance_phase(2, 0b00, 2), 0);
        assert_eq!(advance_phase(2, 0b11, 2), 2);
    }
}
