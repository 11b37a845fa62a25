//! Simple undirected graphs with dense integer vertex ids, plus the
//! structural queries the labeling machinery needs: girth, subgraph
//! deletion with a stable re-indexing map, simple-cycle enumeration,
//! matching-cut detection and forbidden-substructure scans.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

/// An undirected edge stored canonically as (min, max).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct EdgePair {
    u: usize,
    v: usize,
}

impl EdgePair {
    pub fn new(a: usize, b: usize) -> Self {
        assert!(a != b, "self-loop {a}");
        EdgePair {
            u: a.min(b),
            v: a.max(b),
        }
    }
    pub fn u(&self) -> usize {
        self.u
    }
    pub fn v(&self) -> usize {
        self.v
    }
    pub fn endpoints(&self) -> (usize, usize) {
        (self.u, self.v)
    }
    pub fn touches(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            debug_assert_eq!(x, self.v);
            self.u
        }
    }
    /// Two edges are adjacent when they share an endpoint.
    pub fn adjacent(&self, o: &EdgePair) -> bool {
        self.touches(o.u) || self.touches(o.v)
    }
}

impl std::fmt::Display for EdgePair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}-{}", self.u, self.v)
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("vertex {0} out of range")]
    UnknownVertex(usize),
    #[error("edge {0} not in graph")]
    UnknownEdge(EdgePair),
    #[error("duplicate edge {0}")]
    DuplicateEdge(EdgePair),
    #[error("self-loop at {0}")]
    SelfLoop(usize),
    #[error("cycle budget of {0} exceeded")]
    CycleBudget(usize),
}

/// Simple undirected graph. Immutable by convention after construction:
/// every operation returning a modified graph builds a new value.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    adj: Vec<BTreeSet<usize>>,
    edges: BTreeSet<EdgePair>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adj: vec![BTreeSet::new(); n],
            edges: BTreeSet::new(),
        }
    }

    pub fn from_edges(n: usize, pairs: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n);
        for &(a, b) in pairs {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<EdgePair, GraphError> {
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        let hi = a.max(b);
        if hi >= self.n {
            self.n = hi + 1;
            self.adj.resize(self.n, BTreeSet::new());
        }
        let e = EdgePair::new(a, b);
        if !self.edges.insert(e) {
            return Err(GraphError::DuplicateEdge(e));
        }
        self.adj[a].insert(b);
        self.adj[b].insert(a);
        Ok(e)
    }

    /// Adds a fresh vertex and returns its id.
    pub fn add_vertex(&mut self) -> usize {
        self.n += 1;
        self.adj.push(BTreeSet::new());
        self.n - 1
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn m(&self) -> usize {
        self.edges.len()
    }
    pub fn edges(&self) -> impl Iterator<Item = &EdgePair> {
        self.edges.iter()
    }
    pub fn edge_vec(&self) -> Vec<EdgePair> {
        self.edges.iter().copied().collect()
    }
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && a < self.n && self.adj[a].contains(&b)
    }
    pub fn contains_edge(&self, e: &EdgePair) -> bool {
        self.edges.contains(e)
    }
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }
    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// BFS distances from `src`, optionally ignoring one edge.
    pub fn bfs_dist(&self, src: usize, skip: Option<EdgePair>) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[src] = Some(0);
        let mut queue = std::collections::VecDeque::from([src]);
        while let Some(x) = queue.pop_front() {
            let dx = dist[x].unwrap();
            for y in self.neighbors(x) {
                if let Some(s) = skip {
                    if s == EdgePair::new(x, y) {
                        continue;
                    }
                }
                if dist[y].is_none() {
                    dist[y] = Some(dx + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn dist(&self, a: usize, b: usize) -> Option<usize> {
        self.bfs_dist(a, None)[b]
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        self.bfs_dist(0, None).iter().all(|d| d.is_some())
    }

    /// Connected even when isolated vertices are ignored (useful after
    /// edge deletions that strand a vertex).
    pub fn is_connected_on_nonisolated(&self) -> bool {
        let touched: Vec<usize> = self.vertices().filter(|&v| self.degree(v) > 0).collect();
        match touched.first() {
            None => true,
            Some(&s) => {
                let d = self.bfs_dist(s, None);
                touched.iter().all(|&v| d[v].is_some())
            }
        }
    }

    /// Length of a shortest cycle; `None` for forests.
    ///
    /// Exact: for each edge uv, a shortest cycle through uv has length
    /// 1 + dist(u,v) in the graph without uv.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for e in &self.edges {
            let (u, v) = e.endpoints();
            if let Some(d) = self.bfs_dist(u, Some(*e))[v] {
                let c = d + 1;
                if best.map_or(true, |b| c < b) {
                    best = Some(c);
                }
            }
        }
        best
    }

    /// Deletes vertices and edges, returning the new graph together with
    /// a stable re-indexing map (`old_to_new[v] = None` for deleted v).
    pub fn subgraph(
        &self,
        delete_vertices: &[usize],
        delete_edges: &[EdgePair],
    ) -> Result<SubgraphResult, GraphError> {
        let mut gone_v = vec![false; self.n];
        for &v in delete_vertices {
            if v >= self.n {
                return Err(GraphError::UnknownVertex(v));
            }
            gone_v[v] = true;
        }
        let mut gone_e = BTreeSet::new();
        for e in delete_edges {
            if !self.edges.contains(e) {
                return Err(GraphError::UnknownEdge(*e));
            }
            gone_e.insert(*e);
        }
        let mut old_to_new = vec![None; self.n];
        let mut new_to_old = Vec::new();
        for v in 0..self.n {
            if !gone_v[v] {
                old_to_new[v] = Some(new_to_old.len());
                new_to_old.push(v);
            }
        }
        let mut g = Graph::empty(new_to_old.len());
        for e in &self.edges {
            let (u, v) = e.endpoints();
            if gone_v[u] || gone_v[v] || gone_e.contains(e) {
                continue;
            }
            g.add_edge(old_to_new[u].unwrap(), old_to_new[v].unwrap())?;
        }
        Ok(SubgraphResult {
            graph: g,
            old_to_new,
            new_to_old,
        })
    }

    /// In-place edge removal; used by search loops that push and pop
    /// edges on a working copy.
    pub fn remove_edge_mut(&mut self, e: &EdgePair) {
        if self.edges.remove(e) {
            self.adj[e.u()].remove(&e.v());
            self.adj[e.v()].remove(&e.u());
        }
    }

    /// Convenience: the graph with one edge removed, same vertex set.
    pub fn without_edge(&self, e: &EdgePair) -> Graph {
        let mut g = self.clone();
        g.edges.remove(e);
        g.adj[e.u()].remove(&e.v());
        g.adj[e.v()].remove(&e.u());
        g
    }

    /// Every simple cycle exactly once, as a vertex sequence (the closing
    /// edge back to the first vertex is implicit). Canonical up to
    /// rotation/reflection: the smallest vertex comes first and its
    /// smaller neighbor second. `max_len` bounds cycle length; `cap`
    /// bounds how many cycles may be produced before erring.
    pub fn enumerate_cycles(
        &self,
        max_len: Option<usize>,
        cap: usize,
    ) -> Result<Vec<Vec<usize>>, GraphError> {
        let mut out = Vec::new();
        let mut path: Vec<usize> = Vec::new();
        let mut on_path = vec![false; self.n];
        for root in 0..self.n {
            path.clear();
            path.push(root);
            on_path.fill(false);
            on_path[root] = true;
            self.cycle_dfs(root, root, max_len, cap, &mut path, &mut on_path, &mut out)?;
        }
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn cycle_dfs(
        &self,
        root: usize,
        at: usize,
        max_len: Option<usize>,
        cap: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) -> Result<(), GraphError> {
        if let Some(ml) = max_len {
            if path.len() > ml {
                return Ok(());
            }
        }
        for y in self.neighbors(at) {
            if y == root && path.len() >= 3 {
                // close only in one direction: second vertex < last vertex
                if path[1] < path[path.len() - 1] {
                    if out.len() >= cap {
                        return Err(GraphError::CycleBudget(cap));
                    }
                    out.push(path.clone());
                }
            } else if y > root && !on_path[y] {
                path.push(y);
                on_path[y] = true;
                self.cycle_dfs(root, y, max_len, cap, path, on_path, out)?;
                on_path[y] = false;
                path.pop();
            }
        }
        Ok(())
    }

    /// A set of pairwise non-adjacent edges whose removal disconnects the
    /// graph, or `None` when no matching-cut exists. Exhaustive; intended
    /// for desk-scale graphs. A disconnected input yields `Some(vec![])`.
    ///
    /// Branch and bound over two-colorings of the vertices: a vertex with
    /// two cross-edges prunes the branch immediately.
    pub fn has_matching_cut(&self) -> Option<Vec<EdgePair>> {
        if self.n < 2 {
            return None;
        }
        if !self.is_connected() {
            return Some(vec![]);
        }
        // side[v]: 0 unassigned, 1 left, 2 right. Vertex 0 is fixed left.
        let mut side = vec![0u8; self.n];
        side[0] = 1;
        let found = self.mcut_branch(&mut side, 1);
        found.map(|assign| {
            let cut: Vec<EdgePair> = self
                .edges
                .iter()
                .filter(|e| assign[e.u()] != assign[e.v()])
                .copied()
                .collect();
            debug_assert!(verify_matching_cut(self, &cut));
            cut
        })
    }

    fn mcut_branch(&self, side: &mut Vec<u8>, next: usize) -> Option<Vec<u8>> {
        if next == self.n {
            // all assigned; both sides nonempty?
            if !side.iter().any(|&s| s == 2) {
                return None;
            }
            let cut: Vec<EdgePair> = self
                .edges
                .iter()
                .filter(|e| side[e.u()] != side[e.v()])
                .copied()
                .collect();
            if cut.is_empty() {
                return None; // connected graph: empty cut means one side empty
            }
            if verify_matching_cut(self, &cut) {
                return Some(side.clone());
            }
            return None;
        }
        for s in [1u8, 2u8] {
            side[next] = s;
            if self.mcut_feasible(side, next) {
                if let Some(a) = self.mcut_branch(side, next + 1) {
                    side[next] = 0;
                    return Some(a);
                }
            }
        }
        side[next] = 0;
        None
    }

    /// Prune: among fully-assigned vertices, nobody may have 2 cross-edges.
    fn mcut_feasible(&self, side: &[u8], upto: usize) -> bool {
        for v in 0..=upto {
            if side[v] == 0 {
                continue;
            }
            let mut cross = 0;
            for w in self.neighbors(v) {
                if side[w] != 0 && side[w] != side[v] {
                    cross += 1;
                    if cross > 1 {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Flags whether the graph contains a triangle or a K2,3 subgraph
    /// (not necessarily induced).
    pub fn forbidden_subgraph_scan(&self) -> ForbiddenReport {
        let mut has_c3 = false;
        'outer: for e in &self.edges {
            let (u, v) = e.endpoints();
            for w in self.neighbors(u) {
                if w != v && self.has_edge(v, w) {
                    has_c3 = true;
                    break 'outer;
                }
            }
        }
        let mut has_k23 = false;
        'k: for a in 0..self.n {
            for b in (a + 1)..self.n {
                let common = self.adj[a].intersection(&self.adj[b]).count();
                if common >= 3 {
                    has_k23 = true;
                    break 'k;
                }
            }
        }
        ForbiddenReport { has_c3, has_k23 }
    }

    /// Graphviz DOT rendering.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph g {\n");
        for v in 0..self.n {
            s.push_str(&format!("  {v};\n"));
        }
        for e in &self.edges {
            s.push_str(&format!("  {} -- {};\n", e.u(), e.v()));
        }
        s.push_str("}\n");
        s
    }
}

/// Result of a deletion: the graph plus a stable re-indexing map, so
/// labelings and certificates can be related back to the parent graph.
#[derive(Clone, Debug)]
pub struct SubgraphResult {
    pub graph: Graph,
    pub old_to_new: Vec<Option<usize>>,
    pub new_to_old: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForbiddenReport {
    pub has_c3: bool,
    pub has_k23: bool,
}

/// Independent check that `cut` is a matching and disconnects `g`.
pub fn verify_matching_cut(g: &Graph, cut: &[EdgePair]) -> bool {
    for (i, e) in cut.iter().enumerate() {
        if !g.contains_edge(e) {
            return false;
        }
        for f in &cut[i + 1..] {
            if e.adjacent(f) {
                return false;
            }
        }
    }
    let mut h = g.clone();
    for e in cut {
        h = h.without_edge(e);
    }
    !h.is_connected()
}

/// Parses the edge-list text format: optional "n <count>" lines,
/// "e <u> <v>" edges, "#" comments and blank lines.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut g = Graph::empty(0);
    let mut declared_n: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let tag = it.next().unwrap();
        let parse_err = |msg: String| GraphError::Parse { line: line_no, msg };
        match tag {
            "n" => {
                let k: usize = it
                    .next()
                    .ok_or_else(|| parse_err("missing count after 'n'".into()))?
                    .parse()
                    .map_err(|e| parse_err(format!("bad count: {e}")))?;
                declared_n = Some(k);
            }
            "e" => {
                let u: usize = it
                    .next()
                    .ok_or_else(|| parse_err("missing endpoint".into()))?
                    .parse()
                    .map_err(|e| parse_err(format!("bad endpoint: {e}")))?;
                let v: usize = it
                    .next()
                    .ok_or_else(|| parse_err("missing endpoint".into()))?
                    .parse()
                    .map_err(|e| parse_err(format!("bad endpoint: {e}")))?;
                if u == v {
                    return Err(parse_err(format!("self-loop at {u}")));
                }
                g.add_edge(u, v)
                    .map_err(|e| parse_err(format!("{e}")))?;
            }
            _ => return Err(parse_err(format!("unknown line tag {tag:?}"))),
        }
    }
    if let Some(k) = declared_n {
        if g.n() > k {
            return Err(GraphError::Parse {
                line: 0,
                msg: format!("edge endpoint exceeds declared n {k}"),
            });
        }
        while g.n() < k {
            g.add_vertex();
        }
    }
    Ok(g)
}

/// Writes the edge-list format back out.
pub fn format_graph(g: &Graph) -> String {
    let mut s = format!("n {}\n", g.n());
    for e in g.edges() {
        s.push_str(&format!("e {} {}\n", e.u(), e.v()));
    }
    s
}

// -- named small graphs used across tests ----------------------------------

pub fn cycle_graph(n: usize) -> Graph {
    let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &pairs).unwrap()
}

pub fn path_graph(n: usize) -> Graph {
    let pairs: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    Graph::from_edges(n, &pairs).unwrap()
}

pub fn complete_graph(n: usize) -> Graph {
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            pairs.push((a, b));
        }
    }
    Graph::from_edges(n, &pairs).unwrap()
}

/// K_{a,b} with the left part on 0..a and the right part on a..a+b.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let mut pairs = Vec::new();
    for x in 0..a {
        for y in 0..b {
            pairs.push((x, a + y));
        }
    }
    Graph::from_edges(a + b, &pairs).unwrap()
}

pub fn petersen() -> Graph {
    let mut pairs = Vec::new();
    for i in 0..5 {
        pairs.push((i, (i + 1) % 5)); // outer C5
        pairs.push((i, i + 5)); // spokes
        pairs.push((i + 5, (i + 2) % 5 + 5)); // inner pentagram
    }
    Graph::from_edges(10, &pairs).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_basics() {
        let g = parse_graph("e 0 1\ne 1 2").unwrap();
        assert_eq!((g.n(), g.m()), (3, 2));
        let err = parse_graph("n 5\ne 0 1\ne 0 1").unwrap_err();
        match err {
            GraphError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let k23 = parse_graph("e 0 2\ne 0 3\ne 0 4\ne 1 2\ne 1 3\ne 1 4").unwrap();
        assert_eq!((k23.n(), k23.m()), (5, 6));
    }

    #[test]
    fn girth_examples() {
        assert_eq!(cycle_graph(5).girth(), Some(5));
        assert_eq!(complete_bipartite(2, 3).girth(), Some(4));
        assert_eq!(petersen().girth(), Some(5));
        assert_eq!(path_graph(4).girth(), None);
    }

    #[test]
    fn subgraph_examples() {
        let k23 = complete_bipartite(2, 3);
        let e = *k23.edges().next().unwrap();
        let r = k23.subgraph(&[], &[e]).unwrap();
        assert_eq!((r.graph.n(), r.graph.m()), (5, 5));

        let c5 = cycle_graph(5);
        let r = c5.subgraph(&[0], &[]).unwrap();
        assert_eq!((r.graph.n(), r.graph.m()), (4, 3));
        assert_eq!(r.new_to_old, vec![1, 2, 3, 4]);

        let id = c5.subgraph(&[], &[]).unwrap();
        assert_eq!(id.graph, c5);
    }

    #[test]
    fn cycle_counts() {
        assert_eq!(cycle_graph(5).enumerate_cycles(None, 1000).unwrap().len(), 1);
        assert_eq!(
            complete_bipartite(2, 3).enumerate_cycles(None, 1000).unwrap().len(),
            3
        );
        // K4: 4 triangles + 3 four-cycles (brute-force DFS oracle agrees).
        assert_eq!(complete_graph(4).enumerate_cycles(None, 1000).unwrap().len(), 7);
        assert!(matches!(
            complete_graph(4).enumerate_cycles(None, 3),
            Err(GraphError::CycleBudget(3))
        ));
    }

    #[test]
    fn matching_cut_examples() {
        let p4 = path_graph(4);
        let cut = p4.has_matching_cut().unwrap();
        assert!(verify_matching_cut(&p4, &cut));

        assert_eq!(complete_bipartite(2, 3).has_matching_cut(), None);

        let c4 = cycle_graph(4);
        let cut = c4.has_matching_cut().unwrap();
        assert_eq!(cut.len(), 2);
        assert!(verify_matching_cut(&c4, &cut));

        assert_eq!(cycle_graph(3).has_matching_cut(), None);
    }

    #[test]
    fn forbidden_scan() {
        let r = complete_graph(4).forbidden_subgraph_scan();
        assert_eq!((r.has_c3, r.has_k23), (true, false));
        let r = complete_bipartite(2, 3).forbidden_subgraph_scan();
        assert_eq!((r.has_c3, r.has_k23), (false, true));
        let r = cycle_graph(5).forbidden_subgraph_scan();
        assert_eq!((r.has_c3, r.has_k23), (false, false));
    }

    #[test]
    fn girth_monotone_under_deletion() {
        let g = petersen();
        let e = *g.edges().next().unwrap();
        let sub = g.subgraph(&[], &[e]).unwrap().graph;
        let g0 = g.girth().unwrap();
        assert!(sub.girth().map_or(true, |s| s >= g0));
    }
}
