//! Breadth-first exploration of implicit labelled graphs, shortest-path
//! witnesses and lasso extraction. Shared by every product construction.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

pub(crate) struct Graph<N> {
    pub nodes: Vec<N>,
    /// BFS tree: predecessor node and the label on the tree edge.
    parent: Vec<Option<(usize, usize)>>,
    /// Outgoing `(label, target)` pairs per node, in discovery order.
    pub succ: Vec<Vec<(usize, usize)>>,
}

/// Explores everything reachable from `init`. Node indices follow BFS order,
/// so the first node satisfying a predicate has a shortest access path.
pub(crate) fn explore<N, F, I>(init: N, mut next: F) -> Graph<N>
where
    N: Hash + Eq + Clone,
    F: FnMut(&N) -> I,
    I: IntoIterator<Item = (usize, N)>,
{
    let mut index: HashMap<N, usize> = HashMap::new();
    let mut g = Graph {
        nodes: vec![init.clone()],
        parent: vec![None],
        succ: vec![Vec::new()],
    };
    index.insert(init, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let node = g.nodes[i].clone();
        for (label, target) in next(&node) {
            let j = match index.get(&target) {
                Some(&j) => j,
                None => {
                    let j = g.nodes.len();
                    index.insert(target.clone(), j);
                    g.nodes.push(target);
                    g.parent.push(Some((i, label)));
                    g.succ.push(Vec::new());
                    queue.push_back(j);
                    j
                }
            };
            g.succ[i].push((label, j));
        }
    }
    g
}

impl<N> Graph<N> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Label sequence along the BFS tree from the root to `i`.
    pub fn path_to(&self, mut i: usize) -> Vec<usize> {
        let mut labels = Vec::new();
        while let Some((p, l)) = self.parent[i] {
            labels.push(l);
            i = p;
        }
        labels.reverse();
        labels
    }

    pub fn first_match(&self, mut pred: impl FnMut(usize, &N) -> bool) -> Option<usize> {
        (0..self.nodes.len()).find(|&i| pred(i, &self.nodes[i]))
    }

    /// Finds a reachable lasso whose cycle stays inside `allowed` nodes and
    /// visits a `wanted` node. Returns (prefix labels, nonempty cycle labels).
    pub fn find_lasso(
        &self,
        allowed: impl Fn(usize) -> bool,
        wanted: impl Fn(usize) -> bool,
    ) -> Option<(Vec<usize>, Vec<usize>)> {
        let mut sub: DiGraph<usize, usize> = DiGraph::new();
        let local: Vec<_> = (0..self.nodes.len())
            .map(|i| allowed(i).then(|| sub.add_node(i)))
            .collect();
        for i in 0..self.nodes.len() {
            let Some(a) = local[i] else { continue };
            for &(l, j) in &self.succ[i] {
                if let Some(b) = local[j] {
                    sub.add_edge(a, b, l);
                }
            }
        }
        let mut component = vec![usize::MAX; self.nodes.len()];
        let mut nontrivial = Vec::new();
        for (c, scc) in tarjan_scc(&sub).into_iter().enumerate() {
            let cyclic = scc.len() > 1 || sub.find_edge(scc[0], scc[0]).is_some();
            nontrivial.push(cyclic);
            for n in scc {
                component[sub[n]] = c;
            }
        }
        let start = (0..self.nodes.len())
            .find(|&i| local[i].is_some() && wanted(i) && nontrivial[component[i]])?;
        let cycle = self.cycle_within(start, |j| local[j].is_some() && component[j] == component[start]);
        Some((self.path_to(start), cycle))
    }

    /// BFS from the successors of `start` back to `start`, staying in `same`.
    fn cycle_within(&self, start: usize, same: impl Fn(usize) -> bool) -> Vec<usize> {
        let mut pred: HashMap<usize, (usize, usize)> = HashMap::new();
        let mut queue = VecDeque::new();
        for &(l, j) in &self.succ[start] {
            if !same(j) {
                continue;
            }
            if j == start {
                return vec![l];
            }
            if let std::collections::hash_map::Entry::Vacant(e) = pred.entry(j) {
                e.insert((start, l));
                queue.push_back(j);
            }
        }
        while let Some(i) = queue.pop_front() {
            for &(l, j) in &self.succ[i] {
                if !same(j) {
                    continue;
                }
                if j == start {
                    let mut labels = vec![l];
                    let mut k = i;
                    while k != start {
                        let (p, pl) = pred[&k];
                        labels.push(pl);
                        k = p;
                    }
                    labels.reverse();
                    return labels;
                }
                if let std::collections::hash_map::Entry::Vacant(e) = pred.entry(j) {
                    e.insert((i, l));
                    queue.push_back(j);
                }
            }
        }
        unreachable!("start lies in a cyclic component")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bfs_gives_shortest_paths() {
        // 0 -0-> 1 -1-> 2, 0 -2-> 2
        let g = explore(0usize, |&n| match n {
            0 => vec![(0, 1), (2, 2)],
            1 => vec![(1, 2)],
            _ => vec![],
        });
        assert_eq!(g.path_to(g.first_match(|_, &n| n == 2).unwrap()), vec![2]);
    }

    #[test]
    fn lasso_through_wanted_node() {
        // 0 -0-> 1 -1-> 2 -2-> 1
        let g = explore(0usize, |&n| match n {
            0 => vec![(0, 1)],
            1 => vec![(1, 2)],
            _ => vec![(2, 1)],
        });
        let (prefix, cycle) = g.find_lasso(|_| true, |i| g.nodes[i] == 2).unwrap();
        assert_eq!(prefix, vec![0, 1]);
        assert_eq!(cycle, vec![2, 1]);
        assert!(g.find_lasso(|i| g.nodes[i] != 2, |_| true).is_none());
    }
}
