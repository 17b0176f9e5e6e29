//! All-pairs shortest paths, k shortest loopless paths and fewest-node route
//! selection.

use crate::error::{Error, Result};
use crate::graph::NavGraph;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap};

/// Relative slack used when comparing path sums that may differ only by
/// floating-point rounding.
const LENGTH_EPS: f64 = 1e-9;

fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= LENGTH_EPS * a.abs().max(b.abs()).max(1.0)
}

/// Floyd-Warshall result with next-hop table for path reconstruction.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    pub n: usize,
    /// Row-major `n * n` distances, `f64::INFINITY` when unreachable.
    pub dist: Vec<f64>,
    /// Row-major `n * n` first hop on a shortest path from `i` to `j`.
    pub next_hop: Vec<Option<usize>>,
}

impl DistanceMatrix {
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn next(&self, i: usize, j: usize) -> Option<usize> {
        self.next_hop[i * self.n + j]
    }

    /// Node sequence from `i` to `j`, or `None` if unreachable.
    pub fn path(&self, i: usize, j: usize) -> Option<Vec<usize>> {
        if !self.distance(i, j).is_finite() {
            return None;
        }
        let mut seq = vec![i];
        let mut cur = i;
        while cur != j {
            cur = self.next(cur, j)?;
            seq.push(cur);
            if seq.len() > self.n {
                return None;
            }
        }
        Some(seq)
    }
}

/// Classic triple loop. Only strict improvements update an entry, so among
/// equal-length alternatives the one found with the smaller intermediate
/// index is kept.
pub fn floyd_all_pairs(graph: &NavGraph) -> DistanceMatrix {
    let n = graph.node_count();
    let mut dist = vec![f64::INFINITY; n * n];
    let mut next_hop = vec![None; n * n];
    for i in 0..n {
        dist[i * n + i] = 0.0;
        next_hop[i * n + i] = Some(i);
    }
    for e in &graph.edges {
        for (u, v) in [(e.a, e.b), (e.b, e.a)] {
            if e.length < dist[u * n + v] {
                dist[u * n + v] = e.length;
                next_hop[u * n + v] = Some(v);
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = dist[i * n + k];
            if !dik.is_finite() {
                continue;
            }
            for j in 0..n {
                let candidate = dik + dist[k * n + j];
                if candidate < dist[i * n + j] {
                    dist[i * n + j] = candidate;
                    next_hop[i * n + j] = next_hop[i * n + k];
                }
            }
        }
    }
    DistanceMatrix { n, dist, next_hop }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoutePlan {
    pub node_sequence: Vec<usize>,
    pub total_length: f64,
    /// Interior nodes, i.e. places where a decision is made.
    pub turn_count: usize,
}

impl RoutePlan {
    /// Builds a plan from a node sequence, summing edge lengths in order.
    pub fn from_sequence(graph: &NavGraph, node_sequence: Vec<usize>) -> Result<RoutePlan> {
        if node_sequence.len() < 2 {
            return Err(Error::Consistency("a route needs at least two nodes".into()));
        }
        let mut total = 0.0;
        for w in node_sequence.windows(2) {
            let e = graph.edge_between(w[0], w[1]).ok_or_else(|| {
                Error::Consistency(format!("no edge between {} and {}", w[0], w[1]))
            })?;
            total += e.length;
        }
        Ok(RoutePlan {
            turn_count: node_sequence.len() - 2,
            node_sequence,
            total_length: total,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_sequence.len()
    }

    /// Orders by length, then node sequence.
    pub fn cmp_length_then_nodes(&self, other: &RoutePlan) -> Ordering {
        if approx_eq(self.total_length, other.total_length) {
            self.node_sequence.cmp(&other.node_sequence)
        } else {
            self.total_length.total_cmp(&other.total_length)
        }
    }
}

/// Shortest route read off the Floyd matrix.
pub fn shortest_path(
    matrix: &DistanceMatrix,
    graph: &NavGraph,
    start: usize,
    end: usize,
) -> Result<RoutePlan> {
    if start == end {
        return Err(Error::Consistency("start and end are the same node".into()));
    }
    if start >= matrix.n || end >= matrix.n {
        return Err(Error::Consistency("node id out of range".into()));
    }
    let seq = matrix.path(start, end).ok_or(Error::NoRoute)?;
    let mut plan = RoutePlan::from_sequence(graph, seq)?;
    plan.total_length = matrix.distance(start, end);
    Ok(plan)
}

#[derive(PartialEq)]
struct HeapItem(f64, usize);

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Among all shortest `from -> to` paths avoiding `banned_nodes` and
/// `banned_edges`, the one with the lexicographically smallest node
/// sequence.
fn lexmin_shortest(
    adj: &[Vec<(usize, f64)>],
    from: usize,
    to: usize,
    banned_nodes: &BTreeSet<usize>,
    banned_edges: &BTreeSet<(usize, usize)>,
) -> Option<(Vec<usize>, f64)> {
    let n = adj.len();
    let allowed = |u: usize, v: usize| {
        !banned_nodes.contains(&v)
            && !banned_nodes.contains(&u)
            && !banned_edges.contains(&(u.min(v), u.max(v)))
    };
    // distances to `to`, then a greedy smallest-id walk along tight edges
    let mut dist = vec![f64::INFINITY; n];
    dist[to] = 0.0;
    let mut heap = BinaryHeap::from([HeapItem(0.0, to)]);
    while let Some(HeapItem(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w) in &adj[u] {
            if !allowed(u, v) {
                continue;
            }
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(HeapItem(nd, v));
            }
        }
    }
    if !dist[from].is_finite() || banned_nodes.contains(&from) {
        return None;
    }
    let mut seq = vec![from];
    let mut total = 0.0;
    let mut cur = from;
    while cur != to {
        let (next, w) = adj[cur]
            .iter()
            .copied()
            .filter(|&(v, _)| allowed(cur, v) && dist[v].is_finite())
            .find(|&(v, w)| approx_eq(w + dist[v], dist[cur]))?;
        total += w;
        seq.push(next);
        cur = next;
        if seq.len() > n {
            return None;
        }
    }
    Some((seq, total))
}

/// Yen's k shortest loopless paths, ascending by length with ties broken by
/// node sequence.
pub fn k_shortest_paths(
    graph: &NavGraph,
    start: usize,
    end: usize,
    k: usize,
) -> Result<Vec<RoutePlan>> {
    if start == end {
        return Err(Error::Consistency("start and end are the same node".into()));
    }
    let n = graph.node_count();
    if start >= n || end >= n {
        return Err(Error::Consistency("node id out of range".into()));
    }
    let adj = graph.adjacency();
    let none_n = BTreeSet::new();
    let none_e = BTreeSet::new();
    let (first, _) = lexmin_shortest(&adj, start, end, &none_n, &none_e).ok_or(Error::NoRoute)?;
    let mut accepted = vec![RoutePlan::from_sequence(graph, first)?];
    let mut candidates: Vec<RoutePlan> = Vec::new();

    while accepted.len() < k {
        let last = accepted.last().expect("non-empty").node_sequence.clone();
        for spur_idx in 0..last.len() - 1 {
            let spur = last[spur_idx];
            let root = &last[..=spur_idx];
            let mut banned_edges = BTreeSet::new();
            for p in &accepted {
                let seq = &p.node_sequence;
                if seq.len() > spur_idx + 1 && &seq[..=spur_idx] == root {
                    let (u, v) = (seq[spur_idx], seq[spur_idx + 1]);
                    banned_edges.insert((u.min(v), u.max(v)));
                }
            }
            let banned_nodes: BTreeSet<usize> = root[..spur_idx].iter().copied().collect();
            let Some((spur_path, _)) =
                lexmin_shortest(&adj, spur, end, &banned_nodes, &banned_edges)
            else {
                continue;
            };
            let mut seq = root[..spur_idx].to_vec();
            seq.extend(spur_path);
            if accepted.iter().chain(candidates.iter()).any(|p| p.node_sequence == seq) {
                continue;
            }
            candidates.push(RoutePlan::from_sequence(graph, seq)?);
        }
        if candidates.is_empty() {
            break;
        }
        let best = candidates
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.cmp_length_then_nodes(b.1))
            .map(|(i, _)| i)
            .expect("non-empty");
        accepted.push(candidates.swap_remove(best));
    }
    Ok(accepted)
}

/// The candidate with the fewest nodes; ties go to the shorter, then to the
/// smaller node sequence.
pub fn optimal_path(candidates: &[RoutePlan]) -> Option<&RoutePlan> {
    candidates.iter().min_by(|a, b| {
        a.node_count()
            .cmp(&b.node_count())
            .then_with(|| a.cmp_length_then_nodes(b))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> NavGraph {
        NavGraph::from_weighted_edges(3, &[(0, 1, 1.0), (1, 2, 2.0), (0, 2, 5.0)])
    }

    #[test]
    fn three_node_floyd() {
        let g = abc();
        let m = floyd_all_pairs(&g);
        assert_eq!(m.distance(0, 2), 3.0);
        assert_eq!(m.path(0, 2), Some(vec![0, 1, 2]));
        assert_eq!(m.distance(2, 0), 3.0);
        let plan = shortest_path(&m, &g, 0, 2).unwrap();
        assert_eq!(plan.node_sequence, vec![0, 1, 2]);
        assert_eq!(plan.total_length, 3.0);
        assert_eq!(plan.turn_count, 1);
    }

    #[test]
    fn single_node_matrix() {
        let g = NavGraph::from_weighted_edges(1, &[]);
        let m = floyd_all_pairs(&g);
        assert_eq!(m.dist, vec![0.0]);
    }

    #[test]
    fn adjacent_start_end() {
        let g = abc();
        let m = floyd_all_pairs(&g);
        let plan = shortest_path(&m, &g, 0, 1).unwrap();
        assert_eq!(plan.node_sequence, vec![0, 1]);
        assert_eq!(plan.total_length, 1.0);
        assert_eq!(plan.turn_count, 0);
    }

    #[test]
    fn unreachable_is_no_route() {
        let g = NavGraph::from_weighted_edges(3, &[(0, 1, 1.0)]);
        let m = floyd_all_pairs(&g);
        assert!(m.distance(0, 2).is_infinite());
        assert!(matches!(shortest_path(&m, &g, 0, 2), Err(Error::NoRoute)));
        assert!(matches!(k_shortest_paths(&g, 0, 2, 3), Err(Error::NoRoute)));
    }

    #[test]
    fn four_cycle_ties_are_lexicographic() {
        // A=0, B=1, C=2, D=3
        let g = NavGraph::from_weighted_edges(4, &[(0, 1, 1.0), (1, 3, 1.0), (0, 2, 1.0), (2, 3, 1.0)]);
        let paths = k_shortest_paths(&g, 0, 3, 3).unwrap();
        let seqs: Vec<_> = paths.iter().map(|p| p.node_sequence.clone()).collect();
        assert_eq!(seqs, vec![vec![0, 1, 3], vec![0, 2, 3]]);
        assert!(paths.iter().all(|p| p.total_length == 2.0));
    }

    #[test]
    fn tree_has_one_path() {
        let g = NavGraph::from_weighted_edges(5, &[(0, 1, 1.0), (1, 2, 1.0), (1, 3, 4.0), (3, 4, 1.0)]);
        let paths = k_shortest_paths(&g, 0, 4, 3).unwrap();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].node_sequence, vec![0, 1, 3, 4]);
    }

    #[test]
    fn k4_unit_weights() {
        let mut edges = Vec::new();
        for a in 0..4 {
            for b in a + 1..4 {
                edges.push((a, b, 1.0));
            }
        }
        let g = NavGraph::from_weighted_edges(4, &edges);
        let paths = k_shortest_paths(&g, 0, 3, 3).unwrap();
        let got: Vec<(Vec<usize>, f64)> = paths
            .iter()
            .map(|p| (p.node_sequence.clone(), p.total_length))
            .collect();
        // simple 0 -> 3 paths in K4: [0,3]; [0,1,3], [0,2,3]; [0,1,2,3], [0,2,1,3]
        assert_eq!(
            got,
            vec![(vec![0, 3], 1.0), (vec![0, 1, 3], 2.0), (vec![0, 2, 3], 2.0)]
        );
    }

    #[test]
    fn optimal_prefers_fewer_nodes() {
        let plan = |seq: Vec<usize>, len: f64| RoutePlan {
            turn_count: seq.len() - 2,
            node_sequence: seq,
            total_length: len,
        };
        let c = vec![
            plan(vec![0, 1, 2, 3, 9], 10.0),
            plan(vec![0, 4, 5, 9], 12.0),
            plan(vec![0, 6, 7, 8, 5, 9], 13.0),
        ];
        assert_eq!(optimal_path(&c).unwrap().node_sequence, vec![0, 4, 5, 9]);
        let c = vec![plan(vec![0, 1, 2, 9], 10.0), plan(vec![0, 3, 4, 9], 9.0)];
        assert_eq!(optimal_path(&c).unwrap().total_length, 9.0);
        let c = vec![plan(vec![0, 1, 9], 4.0)];
        assert_eq!(optimal_path(&c), Some(&c[0]));
        assert_eq!(optimal_path(&[]), None);
    }
}
