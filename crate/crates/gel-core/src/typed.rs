//! Typed graphs, t-simple path machinery, the decent-labeling verifier,
//! the locked/connectable classification and the gluable-quadruple
//! verifier.
//!
//! Interval endpoints are implemented exactly as the calculus requires:
//! admissibility uses 2/3 < alpha <= 3/4 < beta, locking uses the open
//! interval (2/3, 3/4), condition (d2.ii) uses (0, 1/2] and (d3) uses
//! [2/3, 3/4).
//!
//! Condition (d) is evaluated per path: a length-2 path (other than the
//! locking path of a locked vertex) must satisfy (d2.i) or (d2.ii); a
//! longer path from a vertex at distance two may satisfy any of (d2.i),
//! (d2.ii) or (d3); every path from a vertex at distance three or more
//! must satisfy (d3). This is the only split under which the catalog
//! labelings verify and the 1-sum/2-sum/cycle-glue replay checks all
//! stay green: the cycle pieces need (d3) available on their long
//! detours, while the 2-sum argument needs (d3) forced on the far side.

use crate::graph::{EdgePair, Graph, GraphError};
use crate::labeling::{
    is_good_paths, labels_along_path, path_imins, path_minima, GoodnessWitness, Labeling,
    LabelingError,
};
use crate::value::{format_value, rat, Value};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_PATH_BUDGET: usize = 1_000_000;

/// A graph whose vertices carry types 0, 1 or 2.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TypedGraph {
    pub graph: Graph,
    tau: Vec<u8>,
}

impl TypedGraph {
    pub fn new(graph: Graph, tau: Vec<u8>) -> Self {
        assert_eq!(graph.n(), tau.len(), "tau must be total on V");
        assert!(tau.iter().all(|&t| t <= 2), "types are 0, 1 or 2");
        TypedGraph { graph, tau }
    }

    pub fn uniform(graph: Graph, t: u8) -> Self {
        let n = graph.n();
        TypedGraph::new(graph, vec![t; n])
    }

    pub fn tau(&self, v: usize) -> u8 {
        self.tau[v]
    }

    pub fn set_tau(&mut self, v: usize, t: u8) {
        assert!(t <= 2);
        self.tau[v] = t;
    }

    pub fn types(&self) -> &[u8] {
        &self.tau
    }

    pub fn vertices_of_type(&self, t: u8) -> Vec<usize> {
        self.graph.vertices().filter(|&v| self.tau[v] == t).collect()
    }
}

/// A quadruple: typed graph, labeling and root vertex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GluQuad {
    pub typed: TypedGraph,
    pub phi: Labeling,
    pub root: usize,
}

impl GluQuad {
    pub fn new(typed: TypedGraph, phi: Labeling, root: usize) -> Self {
        assert!(root < typed.graph.n(), "root must be a vertex");
        GluQuad { typed, phi, root }
    }
    pub fn graph(&self) -> &Graph {
        &self.typed.graph
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error(transparent)]
    Labeling(#[from] LabelingError),
    #[error("path budget of {0} exceeded")]
    PathBudget(usize),
    #[error("vertex {w} has multiple length-2 paths to the root; locking is ambiguous")]
    AmbiguousLock { w: usize },
    #[error("{0}")]
    InvalidArgument(String),
}

impl From<GraphError> for CheckError {
    fn from(e: GraphError) -> Self {
        CheckError::Labeling(LabelingError::Graph(e))
    }
}

/// Identifies which condition a witness violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConditionId {
    Goodness,
    DecentA,
    DecentB,
    GluA,
    GluB,
    GluC,
    GluD2,
    GluD3,
    Lock,
}

impl std::fmt::Display for ConditionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ConditionId::Goodness => "good",
            ConditionId::DecentA => "a.1/a.2",
            ConditionId::DecentB => "b.1",
            ConditionId::GluA => "glu-a",
            ConditionId::GluB => "glu-b",
            ConditionId::GluC => "glu-c",
            ConditionId::GluD2 => "glu-d2.i/ii",
            ConditionId::GluD3 => "glu-d3",
            ConditionId::Lock => "lock",
        };
        f.write_str(s)
    }
}

/// A failed condition together with its witness path and values;
/// re-checking the witness reproduces the failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub condition: ConditionId,
    /// Witness vertex sequence. For goodness failures this is the
    /// offending cycle, or the two conflicting paths joined by a repeat
    /// of the start vertex.
    pub path: Vec<usize>,
    pub values: Vec<Value>,
    pub detail: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "violation of {} on path {:?} with values [{}]: {}",
            self.condition,
            self.path,
            self.values.iter().map(format_value).collect::<Vec<_>>().join(", "),
            self.detail
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    Violation(Violation),
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }
    pub fn violation(self) -> Option<Violation> {
        match self {
            Verdict::Ok => None,
            Verdict::Violation(v) => Some(v),
        }
    }
}

// -- pure condition predicates (shared with the synthesis engines) ---------

/// Decency condition on a path between two type-2 vertices: length at
/// least three, and (a.1) an imin with a strictly positive edge strictly
/// between each endpoint and the imin, or (a.2) two imins.
pub fn decent_a_satisfied(labels: &[Value]) -> bool {
    if labels.len() < 3 {
        return false;
    }
    let imins = path_imins(labels);
    if imins.len() >= 2 {
        return true;
    }
    imins.iter().any(|q| {
        labels[..q.start].iter().any(|v| *v > Value::zero())
            && labels[q.start + q.len..].iter().any(|v| *v > Value::zero())
    })
}

/// Decency condition (b.1) on a path from a type-1 vertex (first) to a
/// type-2 vertex (last): length at least two and an imin avoiding the
/// type-1 end.
pub fn decent_b1_satisfied(labels_from_v: &[Value]) -> bool {
    if labels_from_v.len() < 2 {
        return false;
    }
    path_imins(labels_from_v).iter().any(|q| q.start >= 1)
}

/// Admissibility of a length-2 path at the root: 2/3 < alpha <= 3/4 < beta.
pub fn glu_a_satisfied(alpha: Value, beta: Value) -> bool {
    rat(2, 3) < alpha && alpha <= rat(3, 4) && rat(3, 4) < beta
}

/// Condition (b): the path carries an edge with value at least 2/3.
pub fn glu_b_satisfied(labels: &[Value]) -> bool {
    labels.iter().any(|v| *v >= rat(2, 3))
}

fn last_run_min(labels: &[Value]) -> Option<Value> {
    let last = labels.len() - 1;
    path_minima(labels)
        .into_iter()
        .find(|m| m.contains_edge_pos(last))
        .map(|m| m.value)
}

/// (d2.i) on a path oriented from the type-2 vertex to the root: the
/// path has an imin and the edge at the root has value at least 3/4.
pub fn glu_d2i_satisfied(labels_to_root: &[Value]) -> bool {
    !path_imins(labels_to_root).is_empty()
        && labels_to_root[labels_to_root.len() - 1] >= rat(3, 4)
}

/// (d2.ii): the edge at the root is a local minimum with value in (0, 1/2].
pub fn glu_d2ii_satisfied(labels_to_root: &[Value]) -> bool {
    match last_run_min(labels_to_root) {
        Some(v) => v > Value::zero() && v <= rat(1, 2),
        None => false,
    }
}

/// (d3): the edge at the root is a local minimum with value in
/// [2/3, 3/4) and the path has a second imin on the far side of it.
pub fn glu_d3_satisfied(labels_to_root: &[Value]) -> bool {
    let last = labels_to_root.len() - 1;
    let minima = path_minima(labels_to_root);
    let Some(root_run) = minima.iter().find(|m| m.contains_edge_pos(last)) else {
        return false;
    };
    if !(root_run.value >= rat(2, 3) && root_run.value < rat(3, 4)) {
        return false;
    }
    path_imins(labels_to_root)
        .iter()
        .any(|q| q.start + q.len <= root_run.start)
}

/// Locked test from the labels of the unique length-2 root path,
/// oriented root -> w: locked when the path has an imin and the edge at
/// the root lies strictly inside (2/3, 3/4).
pub fn locked_values(alpha_at_root: Value, gamma_at_w: Value) -> bool {
    let labels = [alpha_at_root, gamma_at_w];
    !path_imins(&labels).is_empty()
        && alpha_at_root > rat(2, 3)
        && alpha_at_root < rat(3, 4)
}

// -- path enumeration -------------------------------------------------------

/// All simple paths starting at `from` whose interior vertices have type
/// strictly less than `t`, ending at any vertex satisfying `to`.
/// Endpoints are exempt from the interior constraint. Paths have length
/// at least one; each is emitted oriented from `from`.
pub fn simple_paths_from(
    tg: &TypedGraph,
    from: usize,
    to: &dyn Fn(usize) -> bool,
    t: u8,
    budget: usize,
) -> Result<Vec<Vec<usize>>, CheckError> {
    let mut out = Vec::new();
    let mut path = vec![from];
    let mut on_path = vec![false; tg.graph.n()];
    on_path[from] = true;
    tsimple_dfs(tg, to, t, budget, &mut path, &mut on_path, &mut out)?;
    Ok(out)
}

fn tsimple_dfs(
    tg: &TypedGraph,
    to: &dyn Fn(usize) -> bool,
    t: u8,
    budget: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) -> Result<(), CheckError> {
    let at = *path.last().unwrap();
    for y in tg.graph.neighbors(at) {
        if on_path[y] {
            continue;
        }
        path.push(y);
        if to(y) {
            if out.len() >= budget {
                return Err(CheckError::PathBudget(budget));
            }
            out.push(path.clone());
        }
        if tg.tau(y) < t {
            on_path[y] = true;
            let r = tsimple_dfs(tg, to, t, budget, path, on_path, out);
            on_path[y] = false;
            r?;
        }
        path.pop();
    }
    Ok(())
}

/// The public t-simple path enumerator: all simple paths whose endpoints
/// satisfy the two predicates and whose interior vertices have type
/// strictly less than `t`, oriented from a `from`-vertex.
pub fn t_simple_paths(
    tg: &TypedGraph,
    t: u8,
    from: &dyn Fn(usize) -> bool,
    to: &dyn Fn(usize) -> bool,
    budget: usize,
) -> Result<Vec<Vec<usize>>, CheckError> {
    let mut out = Vec::new();
    for s in tg.graph.vertices().filter(|&v| from(v)) {
        let mut found = simple_paths_from(tg, s, to, t, budget.saturating_sub(out.len()))?;
        out.append(&mut found);
    }
    Ok(out)
}

// -- verifiers ---------------------------------------------------------------

fn goodness_violation(w: GoodnessWitness, g: &Graph, phi: &Labeling) -> Violation {
    match w {
        GoodnessWitness::Ok => unreachable!(),
        GoodnessWitness::PathConflict { from, to, path1, path2 } => {
            let mut path = path1.clone();
            path.extend(path2.iter().copied());
            Violation {
                condition: ConditionId::Goodness,
                path,
                values: vec![],
                detail: format!(
                    "two nondecreasing paths from {from} to {to}: {path1:?} and {path2:?}"
                ),
            }
        }
        GoodnessWitness::DeficientCycle { cycle, minima } => {
            let values = crate::labeling::labels_around_cycle(&cycle, phi).unwrap_or_default();
            let _ = g;
            Violation {
                condition: ConditionId::Goodness,
                path: cycle,
                values,
                detail: format!("cycle has {minima} local minima"),
            }
        }
    }
}

/// Verifies that `phi` is a decent labeling of `tg`: good, every
/// 2-simple path between type-2 vertices has length at least three and
/// satisfies (a.1) or (a.2), and every 1-simple path from a type-1 to a
/// type-2 vertex has length at least two and satisfies (b.1).
pub fn verify_decent(
    tg: &TypedGraph,
    phi: &Labeling,
    budget: usize,
) -> Result<Verdict, CheckError> {
    let g = &tg.graph;
    match is_good_paths(g, phi)? {
        GoodnessWitness::Ok => {}
        w => return Ok(Verdict::Violation(goodness_violation(w, g, phi))),
    }
    let t2 = tg.vertices_of_type(2);
    for (i, &w1) in t2.iter().enumerate() {
        for &w2 in &t2[i + 1..] {
            for path in simple_paths_from(tg, w1, &|x| x == w2, 2, budget)? {
                let values = labels_along_path(&path, phi)?;
                if !decent_a_satisfied(&values) {
                    return Ok(Verdict::Violation(Violation {
                        condition: ConditionId::DecentA,
                        path,
                        values,
                        detail: "type-2 pair path needs length >= 3 and (a.1) or (a.2)".into(),
                    }));
                }
            }
        }
    }
    for &w in &t2 {
        for path in simple_paths_from(tg, w, &|x| tg.tau(x) == 1, 1, budget)? {
            let oriented: Vec<usize> = path.iter().rev().copied().collect();
            let values = labels_along_path(&oriented, phi)?;
            if !decent_b1_satisfied(&values) {
                return Ok(Verdict::Violation(Violation {
                    condition: ConditionId::DecentB,
                    path: oriented,
                    values,
                    detail: "type-1 to type-2 path needs length >= 2 and an imin avoiding the type-1 end".into(),
                }));
            }
        }
    }
    Ok(Verdict::Ok)
}

/// Lock classification of a type-2 vertex `w` against the root of `q`.
/// Errors when several length-2 root paths exist (the definition
/// presumes uniqueness, which holds at girth >= 5).
pub fn is_locked(q: &GluQuad, w: usize) -> Result<bool, CheckError> {
    if q.typed.tau(w) != 2 {
        return Err(CheckError::InvalidArgument(format!(
            "vertex {w} has type {}, locking applies to type-2 vertices",
            q.typed.tau(w)
        )));
    }
    Ok(lock_path(q, w)?.map_or(false, |(_, locked)| locked))
}

/// The unique length-2 path root..w (as (mid, locked)) when one exists.
fn lock_path(q: &GluQuad, w: usize) -> Result<Option<(usize, bool)>, CheckError> {
    let g = q.graph();
    let y = q.root;
    if w == y {
        return Ok(None);
    }
    let mids: Vec<usize> = g
        .neighbors(y)
        .filter(|&u| g.has_edge(u, w))
        .collect();
    if mids.len() > 1 {
        return Err(CheckError::AmbiguousLock { w });
    }
    let Some(&u) = mids.first() else {
        return Ok(None);
    };
    if g.has_edge(w, y) {
        // distance one, not two: never locked
        return Ok(Some((u, false)));
    }
    let alpha = q.phi.value(y, u).ok_or(LabelingError::Missing(EdgePair::new(y, u)))?;
    let gamma = q.phi.value(u, w).ok_or(LabelingError::Missing(EdgePair::new(u, w)))?;
    Ok(Some((u, locked_values(alpha, gamma))))
}

/// Verifies the gluable conditions (a)-(d) on top of decency.
pub fn verify_gluable(q: &GluQuad, budget: usize) -> Result<Verdict, CheckError> {
    let tg = &q.typed;
    let g = q.graph();
    let y = q.root;

    match verify_decent(tg, &q.phi, budget)? {
        Verdict::Ok => {}
        v => return Ok(v),
    }

    // (c) no type-2 vertex adjacent to the root
    for nb in g.neighbors(y) {
        if tg.tau(nb) == 2 {
            let values = vec![q.phi.value(y, nb).unwrap()];
            return Ok(Verdict::Violation(Violation {
                condition: ConditionId::GluC,
                path: vec![y, nb],
                values,
                detail: "type-2 vertex adjacent to the root".into(),
            }));
        }
    }

    // (a) every length-2 path y,v1,v2 with tau(v1)=1 and tau(v2)<=1 is admissible
    for v1 in g.neighbors(y) {
        if tg.tau(v1) != 1 {
            continue;
        }
        for v2 in g.neighbors(v1) {
            if v2 == y || tg.tau(v2) > 1 {
                continue;
            }
            let alpha = q.phi.value(y, v1).unwrap();
            let beta = q.phi.value(v1, v2).unwrap();
            if !glu_a_satisfied(alpha, beta) {
                return Ok(Verdict::Violation(Violation {
                    condition: ConditionId::GluA,
                    path: vec![y, v1, v2],
                    values: vec![alpha, beta],
                    detail: "length-2 root path must satisfy 2/3 < alpha <= 3/4 < beta".into(),
                }));
            }
        }
    }

    // (b) every 1-simple path from a type-1 vertex to the root carries an
    // edge with value >= 2/3
    for path in simple_paths_from(tg, y, &|x| tg.tau(x) == 1 && x != y, 1, budget)? {
        let values = labels_along_path(&path, phi_of(q))?;
        if !glu_b_satisfied(&values) {
            let oriented: Vec<usize> = path.iter().rev().copied().collect();
            let values: Vec<Value> = values.into_iter().rev().collect();
            return Ok(Verdict::Violation(Violation {
                condition: ConditionId::GluB,
                path: oriented,
                values,
                detail: "1-simple path from a type-1 vertex to the root needs an edge >= 2/3".into(),
            }));
        }
    }

    // (d) per type-2 vertex: 2-simple paths to the root
    for w in tg.vertices_of_type(2) {
        if w == y {
            continue;
        }
        let lock = lock_path(q, w)?;
        let dist = g.dist(w, y);
        for path in simple_paths_from(tg, w, &|x| x == y, 2, budget)? {
            let values = labels_along_path(&path, phi_of(q))?;
            if path.len() == 3 {
                // a length-2 path: exempt exactly the locking path
                let exempt = matches!(lock, Some((mid, true)) if path[1] == mid);
                if exempt {
                    continue;
                }
                if !(glu_d2i_satisfied(&values) || glu_d2ii_satisfied(&values)) {
                    return Ok(Verdict::Violation(Violation {
                        condition: ConditionId::GluD2,
                        path,
                        values,
                        detail: "length-2 root path from a type-2 vertex needs (d2.i) or (d2.ii)"
                            .into(),
                    }));
                }
            } else if dist == Some(2) {
                if !(glu_d2i_satisfied(&values)
                    || glu_d2ii_satisfied(&values)
                    || glu_d3_satisfied(&values))
                {
                    return Ok(Verdict::Violation(Violation {
                        condition: ConditionId::GluD3,
                        path,
                        values,
                        detail:
                            "long root path from a distance-2 type-2 vertex needs (d2.i), (d2.ii) or (d3)"
                                .into(),
                    }));
                }
            } else if !glu_d3_satisfied(&values) {
                return Ok(Verdict::Violation(Violation {
                    condition: ConditionId::GluD3,
                    path,
                    values,
                    detail: "root path from a distance->=3 type-2 vertex needs (d3)".into(),
                }));
            }
        }
    }

    Ok(Verdict::Ok)
}

fn phi_of(q: &GluQuad) -> &Labeling {
    &q.phi
}

/// Replays a violation's cited condition against its recorded witness;
/// true when the failure reproduces.
pub fn revalidate_violation(v: &Violation, tg: &TypedGraph, phi: &Labeling) -> bool {
    match v.condition {
        ConditionId::Goodness => !is_good_paths(&tg.graph, phi)
            .map(|w| w.is_good())
            .unwrap_or(true),
        ConditionId::DecentA => labels_along_path(&v.path, phi)
            .map(|l| !decent_a_satisfied(&l))
            .unwrap_or(false),
        ConditionId::DecentB => labels_along_path(&v.path, phi)
            .map(|l| !decent_b1_satisfied(&l))
            .unwrap_or(false),
        ConditionId::GluA => labels_along_path(&v.path, phi)
            .map(|l| l.len() == 2 && !glu_a_satisfied(l[0], l[1]))
            .unwrap_or(false),
        ConditionId::GluB => labels_along_path(&v.path, phi)
            .map(|l| !glu_b_satisfied(&l))
            .unwrap_or(false),
        ConditionId::GluC => {
            v.path.len() == 2 && tg.graph.has_edge(v.path[0], v.path[1]) && tg.tau(v.path[1]) == 2
        }
        ConditionId::GluD2 => labels_along_path(&v.path, phi)
            .map(|l| !(glu_d2i_satisfied(&l) || glu_d2ii_satisfied(&l)))
            .unwrap_or(false),
        ConditionId::GluD3 => labels_along_path(&v.path, phi)
            .map(|l| {
                !(glu_d2i_satisfied(&l) || glu_d2ii_satisfied(&l) || glu_d3_satisfied(&l))
                    || (!glu_d3_satisfied(&l) && v.detail.contains(">=3"))
            })
            .unwrap_or(false),
        ConditionId::Lock => true,
    }
}

// -- file formats ------------------------------------------------------------

/// Parses the typed-graph format: graph lines plus "v <id> <type>".
/// Vertices without a "v" line default to type 1.
pub fn parse_typed_graph(text: &str) -> Result<TypedGraph, String> {
    // graph lines only; "v", "root" and "l" lines belong to this layer
    let graph_lines: String = text
        .lines()
        .filter(|l| {
            let t = l.trim();
            t.is_empty() || t.starts_with('#') || t.starts_with("n ") || t.starts_with("e ")
        })
        .collect::<Vec<_>>()
        .join("\n");
    let graph = crate::graph::parse_graph(&graph_lines).map_err(|e| e.to_string())?;
    let mut tau = vec![1u8; graph.n()];
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if !line.starts_with("v ") {
            continue;
        }
        let mut it = line.split_whitespace().skip(1);
        let v: usize = it
            .next()
            .ok_or_else(|| format!("line {}: missing vertex id", idx + 1))?
            .parse()
            .map_err(|e| format!("line {}: {e}", idx + 1))?;
        let t: u8 = it
            .next()
            .ok_or_else(|| format!("line {}: missing type", idx + 1))?
            .parse()
            .map_err(|e| format!("line {}: {e}", idx + 1))?;
        if v >= graph.n() {
            return Err(format!("line {}: vertex {v} out of range", idx + 1));
        }
        if t > 2 {
            return Err(format!("line {}: type {t} out of range", idx + 1));
        }
        tau[v] = t;
    }
    Ok(TypedGraph::new(graph, tau))
}

/// Parses a full quadruple file: typed-graph lines plus "root <id>" and
/// a labeling section of "l" lines.
pub fn parse_quad(text: &str) -> Result<GluQuad, String> {
    let typed = parse_typed_graph(text)?;
    let phi = crate::labeling::parse_labeling(text)?;
    let mut root = None;
    for raw in text.lines() {
        let line = raw.trim();
        if let Some(rest) = line.strip_prefix("root ") {
            root = Some(
                rest.trim()
                    .parse::<usize>()
                    .map_err(|e| format!("bad root: {e}"))?,
            );
        }
    }
    let root = root.ok_or("missing 'root <id>' line")?;
    if root >= typed.graph.n() {
        return Err(format!("root {root} out of range"));
    }
    Ok(GluQuad::new(typed, phi, root))
}

pub fn format_typed_graph(tg: &TypedGraph) -> String {
    let mut s = crate::graph::format_graph(&tg.graph);
    for v in tg.graph.vertices() {
        s.push_str(&format!("v {} {}\n", v, tg.tau(v)));
    }
    s
}

pub fn format_quad(q: &GluQuad) -> String {
    let mut s = format_typed_graph(&q.typed);
    s.push_str(&format!("root {}\n", q.root));
    s.push_str(&crate::labeling::format_labeling(&q.phi));
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle_graph, Graph};
    use crate::value::{int, rat};

    /// y(0/1) - x(0) - w(2) with phi(wx) = -1 and phi(xy) = 3/4.
    fn short_catalog_path(root_type: u8) -> GluQuad {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let tg = TypedGraph::new(g, vec![root_type, 0, 2]);
        let mut phi = Labeling::new();
        phi.set(EdgePair::new(0, 1), rat(3, 4));
        phi.set(EdgePair::new(1, 2), int(-1));
        GluQuad::new(tg, phi, 0)
    }

    #[test]
    fn t_simple_path_examples() {
        // y(1) - x(0) - w(2)
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let tg = TypedGraph::new(g, vec![1, 0, 2]);
        let p = t_simple_paths(&tg, 2, &|v| tg.tau(v) == 2, &|v| v == 0, 100).unwrap();
        assert_eq!(p, vec![vec![2, 1, 0]]);
        let p = t_simple_paths(&tg, 1, &|v| tg.tau(v) == 1, &|v| tg.tau(v) == 2, 100).unwrap();
        assert_eq!(p, vec![vec![0, 1, 2]]);

        let c5 = TypedGraph::uniform(cycle_graph(5), 1);
        let p = t_simple_paths(&c5, 1, &|_| true, &|_| true, 1000).unwrap();
        assert!(p.iter().all(|path| path.len() == 2));
        assert_eq!(p.len(), 10); // each edge from both ends
    }

    #[test]
    fn short_catalog_path_is_decent_and_gluable() {
        for rt in [0u8, 1u8] {
            let q = short_catalog_path(rt);
            assert!(verify_decent(&q.typed, &q.phi, 1000).unwrap().is_ok());
            assert!(verify_gluable(&q, 1000).unwrap().is_ok());
            // alpha = 3/4 sits on the closed end: not locked
            assert!(!is_locked(&q, 2).unwrap());
        }
    }

    #[test]
    fn lock_examples() {
        // y - u - w with phi(yu) = 7/10, phi(uw) = -1: locked
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let tg = TypedGraph::new(g, vec![0, 0, 2]);
        let mut phi = Labeling::new();
        phi.set(EdgePair::new(0, 1), rat(7, 10));
        phi.set(EdgePair::new(1, 2), int(-1));
        let q = GluQuad::new(tg, phi, 0);
        assert!(is_locked(&q, 2).unwrap());

        // phi(yu) = 1: connectable
        let mut q2 = q.clone();
        q2.phi.set(EdgePair::new(0, 1), int(1));
        assert!(!is_locked(&q2, 2).unwrap());

        // distance 3: connectable regardless of labels
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let tg = TypedGraph::new(g, vec![0, 1, 0, 2]);
        let mut phi = Labeling::new();
        phi.set(EdgePair::new(0, 1), rat(7, 10));
        phi.set(EdgePair::new(1, 2), int(1));
        phi.set(EdgePair::new(2, 3), int(-1));
        let q3 = GluQuad::new(tg, phi, 0);
        assert!(!is_locked(&q3, 3).unwrap());
    }

    #[test]
    fn no_type2_means_good_is_decent() {
        let g = cycle_graph(4);
        let tg = TypedGraph::uniform(g, 1);
        let mut phi = Labeling::new();
        phi.set(EdgePair::new(0, 1), int(1));
        phi.set(EdgePair::new(1, 2), int(2));
        phi.set(EdgePair::new(2, 3), int(1));
        phi.set(EdgePair::new(0, 3), int(2));
        assert!(verify_decent(&tg, &phi, 1000).unwrap().is_ok());
    }

    #[test]
    fn long_catalog_path_values() {
        // w - x - p - y with phi(wx) = -1, middle +1, root edge 17/24
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let tg = TypedGraph::new(g, vec![1, 1, 0, 2]); // y=0(type 1), p=1, x=2, w=3
        let mut phi = Labeling::new();
        phi.set(EdgePair::new(0, 1), rat(17, 24));
        phi.set(EdgePair::new(1, 2), int(1));
        phi.set(EdgePair::new(2, 3), int(-1));
        let q = GluQuad::new(tg, phi, 0);
        assert!(verify_decent(&q.typed, &q.phi, 1000).unwrap().is_ok());
        assert!(verify_gluable(&q, 1000).unwrap().is_ok());

        // perturbing 17/24 to 1/2 produces a glu-a violation
        let mut bad = q.clone();
        bad.phi.set(EdgePair::new(0, 1), rat(1, 2));
        let v = verify_gluable(&bad, 1000).unwrap().violation().unwrap();
        assert_eq!(v.condition, ConditionId::GluA);
        assert!(revalidate_violation(&v, &bad.typed, &bad.phi));
    }

    #[test]
    fn quad_file_roundtrip() {
        let q = short_catalog_path(1);
        let text = format_quad(&q);
        let back = parse_quad(&text).unwrap();
        assert_eq!(back.root, q.root);
        assert_eq!(back.typed, q.typed);
        assert_eq!(back.phi, q.phi);
    }
}
