//! The catalog of gluable building blocks, the four gluing operations
//! with verified postconditions, and the swell-subgraph combination.
//!
//! Every glue operation re-verifies its result and fails loudly rather
//! than trusting the construction; the verifier is the ground truth for
//! this crate. Catalog labelings are either the concrete values the
//! calculus fixes (paths, the two parametric cycle families) or are
//! synthesized once by the gluable-pattern search and cached (plain
//! cycles and wheels, whose published values are not machine-readable).

use crate::graph::{EdgePair, Graph};
use crate::labeling::{is_good_paths, Labeling};
use crate::pattern::{PatternOptions, PatternOutcome, SearchMode};
use crate::search::{find_good_labeling, SearchError};
use crate::typed::{
    is_locked, verify_gluable, CheckError, GluQuad, TypedGraph, Violation, DEFAULT_PATH_BUDGET,
};
use crate::value::{int, rat, Value};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};
use thiserror::Error;

#[derive(Error, Debug)]
pub enum GlueError {
    #[error("invalid catalog parameters: {0}")]
    InvalidParams(String),
    #[error("input quadruple is not gluable: {0}")]
    InputNotGluable(Violation),
    #[error("glued quadruple failed re-verification: {0}")]
    PostconditionFailed(Violation),
    #[error("vertex {0} is locked; the 2-sum needs connectable vertices")]
    Locked(usize),
    #[error("vertex {0} is not locked; the lock-cycle glue needs its locking path")]
    NotLocked(usize),
    #[error("root distances {0} + {1} < 5; identifying would create a short cycle")]
    DistanceTooSmall(usize, usize),
    #[error("path {0:?} is not admissible: needs 2/3 < alpha <= 3/4 < beta")]
    NotAdmissible(Vec<usize>),
    #[error("no gluable labeling found for catalog piece: {0}")]
    SynthesisFailed(String),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("{0}")]
    Other(String),
}

// -- catalog -----------------------------------------------------------------

/// Parameters for the catalog of gluable pieces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum CatalogPiece {
    /// Path from the root ending in a type-2 vertex; the vertex before
    /// it is type 0, interior vertices are type 1. Length >= 2.
    PathToType2 { length: usize, root_type: u8 },
    /// Path from the root with every non-root vertex of type 1.
    /// Length >= 1.
    PathToType1 { length: usize, root_type: u8 },
    /// Cycle through the root with one type-0 vertex at cycle distance
    /// `u_pos` from the root; all other vertices type 1. Length >= 4.
    PlainCycle { length: usize, u_pos: usize, root_type: u8 },
    /// Cycle with a pendant root: a sail of length `sail_len` (>= 4)
    /// whose 2-vertex and near-root vertex share a type-2 flag.
    Fish { sail_len: usize, root_type: u8 },
    /// Cycle through the root carrying a type-2 vertex and a pendant
    /// edge, parameterized by an admissible pair (alpha, beta).
    /// `new_sail_len` >= 2 keeps the cycle at length >= 5.
    AlphaBetaCycle {
        new_sail_len: usize,
        #[serde(with = "crate::value::value_serde")]
        alpha: Value,
        #[serde(with = "crate::value::value_serde")]
        beta: Value,
        root_type: u8,
    },
    /// Cycle through the root whose type-2 vertex is locked by the
    /// length-2 path (alpha, gamma); attaches along a locking path.
    AlphaCycle {
        new_sail_len: usize,
        #[serde(with = "crate::value::value_serde")]
        alpha: Value,
        #[serde(with = "crate::value::value_serde")]
        gamma: Value,
        root_type: u8,
    },
    /// Cycle plus a center joined to k >= 2 anchors at pairwise cycle
    /// distance >= 3; segment lengths list the anchor gaps. Evil
    /// parameters (all segments 3, center type 1) have no decent
    /// labeling and cannot come out gluable.
    Wheel { segments: Vec<usize>, center_type: u8 },
}

/// A catalog result: a verified gluable quadruple, or (for evil wheels
/// only) the typed graph with a good labeling and an explicit
/// not-decent marker.
#[derive(Clone, Debug)]
pub enum CatalogOutput {
    Gluable(GluQuad),
    EvilWheel {
        typed: TypedGraph,
        good_labeling: Labeling,
    },
}

impl CatalogOutput {
    pub fn into_gluable(self) -> Result<GluQuad, GlueError> {
        match self {
            CatalogOutput::Gluable(q) => Ok(q),
            CatalogOutput::EvilWheel { .. } => Err(GlueError::InvalidParams(
                "evil wheel requested as a gluable piece".into(),
            )),
        }
    }
}

fn check_root_type(t: u8) -> Result<(), GlueError> {
    if t > 1 {
        return Err(GlueError::InvalidParams(format!(
            "root type must be 0 or 1, got {t}"
        )));
    }
    Ok(())
}

/// Value of the edge at the root in the two parametric cycle families:
/// the midpoint of 2/3 and alpha, strictly between them.
fn root_mid(alpha: Value) -> Value {
    (rat(2, 3) + alpha) / int(2)
}

/// Builds a catalog piece and verifies it before returning.
pub fn catalog(piece: &CatalogPiece) -> Result<CatalogOutput, GlueError> {
    let q = match piece {
        CatalogPiece::PathToType2 { length, root_type } => {
            check_root_type(*root_type)?;
            if *length < 2 {
                return Err(GlueError::InvalidParams(
                    "path to a type-2 vertex needs length >= 2".into(),
                ));
            }
            build_path_to_type2(*length, *root_type)
        }
        CatalogPiece::PathToType1 { length, root_type } => {
            check_root_type(*root_type)?;
            if *length < 1 {
                return Err(GlueError::InvalidParams("path needs length >= 1".into()));
            }
            build_path_to_type1(*length, *root_type)
        }
        CatalogPiece::PlainCycle {
            length,
            u_pos,
            root_type,
        } => {
            check_root_type(*root_type)?;
            if *length < 4 {
                return Err(GlueError::InvalidParams("cycle needs length >= 4".into()));
            }
            if *u_pos == 0 || *u_pos >= *length {
                return Err(GlueError::InvalidParams(
                    "type-0 vertex position must be strictly between 0 and the length".into(),
                ));
            }
            build_plain_cycle(*length, *u_pos, *root_type)?
        }
        CatalogPiece::Fish { sail_len, root_type } => {
            check_root_type(*root_type)?;
            if *sail_len < 4 {
                return Err(GlueError::InvalidParams(
                    "fish needs sail length >= 4 (cycle length >= 5)".into(),
                ));
            }
            build_fish(*sail_len, *root_type)
        }
        CatalogPiece::AlphaBetaCycle {
            new_sail_len,
            alpha,
            beta,
            root_type,
        } => {
            check_root_type(*root_type)?;
            if *new_sail_len < 2 {
                return Err(GlueError::InvalidParams(
                    "cycle attachment needs new sail length >= 2".into(),
                ));
            }
            if !crate::typed::glu_a_satisfied(*alpha, *beta) {
                return Err(GlueError::InvalidParams(format!(
                    "need 2/3 < alpha <= 3/4 < beta, got alpha={alpha}, beta={beta}"
                )));
            }
            build_alphabeta(*new_sail_len, *alpha, *beta, *root_type)
        }
        CatalogPiece::AlphaCycle {
            new_sail_len,
            alpha,
            gamma,
            root_type,
        } => {
            check_root_type(*root_type)?;
            if *new_sail_len < 2 {
                return Err(GlueError::InvalidParams(
                    "cycle attachment needs new sail length >= 2".into(),
                ));
            }
            if !(rat(2, 3) < *alpha && *alpha < rat(3, 4)) {
                return Err(GlueError::InvalidParams(format!(
                    "locking needs alpha strictly inside (2/3, 3/4), got {alpha}"
                )));
            }
            if *gamma >= int(0) {
                return Err(GlueError::InvalidParams(format!(
                    "locking needs gamma < 0, got {gamma}"
                )));
            }
            build_alpha(*new_sail_len, *alpha, *gamma, *root_type)
        }
        CatalogPiece::Wheel {
            segments,
            center_type,
        } => {
            check_root_type(*center_type)?;
            if segments.len() < 2 {
                return Err(GlueError::InvalidParams("a wheel needs k >= 2 anchors".into()));
            }
            if segments.iter().any(|&s| s < 3) {
                return Err(GlueError::InvalidParams(
                    "anchor distances on the cycle must be >= 3".into(),
                ));
            }
            return build_wheel(segments, *center_type);
        }
    };
    match verify_gluable(&q, DEFAULT_PATH_BUDGET)? {
        crate::typed::Verdict::Ok => Ok(CatalogOutput::Gluable(q)),
        crate::typed::Verdict::Violation(v) => Err(GlueError::PostconditionFailed(v)),
    }
}

/// Vertices 0 (root) .. length, the last vertex type 2, the one before
/// it type 0. Length 2 gives (3/4, -1); longer paths use 17/24 at the
/// root, +1 in the middle and -1 at the type-2 end.
fn build_path_to_type2(length: usize, root_type: u8) -> GluQuad {
    let pairs: Vec<_> = (0..length).map(|i| (i, i + 1)).collect();
    let g = Graph::from_edges(length + 1, &pairs).unwrap();
    let mut tau = vec![1u8; length + 1];
    tau[0] = root_type;
    tau[length] = 2;
    tau[length - 1] = 0;
    let mut phi = Labeling::new();
    if length == 2 {
        phi.set(EdgePair::new(0, 1), rat(3, 4));
        phi.set(EdgePair::new(1, 2), int(-1));
    } else {
        phi.set(EdgePair::new(0, 1), rat(17, 24));
        for i in 1..length - 1 {
            phi.set(EdgePair::new(i, i + 1), int(1));
        }
        phi.set(EdgePair::new(length - 1, length), int(-1));
    }
    GluQuad::new(TypedGraph::new(g, tau), phi, 0)
}

/// All non-root vertices type 1. A single edge carries +1; longer paths
/// carry 17/24 at the root and +1 elsewhere, except that from length 4
/// on the second edge from the far end dips to 1/2, an interior local
/// minimum that cycles through this piece can lean on.
fn build_path_to_type1(length: usize, root_type: u8) -> GluQuad {
    let pairs: Vec<_> = (0..length).map(|i| (i, i + 1)).collect();
    let g = Graph::from_edges(length + 1, &pairs).unwrap();
    let mut tau = vec![1u8; length + 1];
    tau[0] = root_type;
    let mut phi = Labeling::new();
    for i in 0..length {
        let v = if length == 1 {
            int(1)
        } else if i == 0 {
            rat(17, 24)
        } else if length >= 4 && i == length - 2 {
            rat(1, 2)
        } else {
            int(1)
        };
        phi.set(EdgePair::new(i, i + 1), v);
    }
    GluQuad::new(TypedGraph::new(g, tau), phi, 0)
}

/// Root at 0, the type-0 vertex at cycle position `u_pos`. Labels are
/// synthesized once per shape and cached.
fn build_plain_cycle(length: usize, u_pos: usize, root_type: u8) -> Result<GluQuad, GlueError> {
    let g = crate::graph::cycle_graph(length);
    let mut tau = vec![1u8; length];
    tau[0] = root_type;
    tau[u_pos] = 0;
    let tg = TypedGraph::new(g, tau);
    let phi = synthesized_labels(&tg, 0)?;
    Ok(GluQuad::new(tg, phi, 0))
}

/// Root 0 pendant on the near-root vertex 1; chain 1..=sail_len with
/// the 2-vertex tip at `sail_len`; the flag (sail_len + 1) is adjacent
/// to both chain ends. The flag comes out locked.
fn build_fish(sail_len: usize, root_type: u8) -> GluQuad {
    let l = sail_len;
    let flag = l + 1;
    let mut pairs = vec![(0usize, 1usize)];
    for i in 1..l {
        pairs.push((i, i + 1));
    }
    pairs.push((l, flag));
    pairs.push((flag, 1));
    let g = Graph::from_edges(l + 2, &pairs).unwrap();
    let mut tau = vec![1u8; l + 2];
    tau[0] = root_type;
    tau[1] = 0; // near-root vertex sealed by the flag
    tau[l] = 0; // tip sealed by the flag
    tau[flag] = 2;
    let mut phi = Labeling::new();
    phi.set(EdgePair::new(0, 1), rat(7, 10));
    // chain carries +1 with one interior dip to 1/2 for the second
    // cycle minimum; keep the dip off the flag edges
    let dip = ((l + 1) / 2).clamp(2, l - 2);
    for i in 1..l {
        let v = if i == dip { rat(1, 2) } else { int(1) };
        phi.set(EdgePair::new(i, i + 1), v);
    }
    phi.set(EdgePair::new(l, flag), int(-1));
    phi.set(EdgePair::new(flag, 1), int(-1));
    GluQuad::new(TypedGraph::new(g, tau), phi, 0)
}

/// y=0, u=1, pendant v=2, flag w=3, then the new sail 4..l+3 closing
/// back to the root.
fn build_alphabeta(l: usize, alpha: Value, beta: Value, root_type: u8) -> GluQuad {
    let w = 3;
    let x = |i: usize| 4 + i;
    let n = l + 4;
    let mut pairs = vec![(0, 1), (1, 2), (1, w), (w, x(0))];
    for i in 0..l - 1 {
        pairs.push((x(i), x(i + 1)));
    }
    pairs.push((x(l - 1), 0));
    let g = Graph::from_edges(n, &pairs).unwrap();
    let mut tau = vec![1u8; n];
    tau[0] = root_type;
    tau[1] = 0;
    tau[w] = 2;
    tau[x(0)] = 0;
    let mut phi = Labeling::new();
    phi.set(EdgePair::new(0, 1), alpha);
    phi.set(EdgePair::new(1, 2), beta);
    phi.set(EdgePair::new(1, w), int(-1));
    phi.set(EdgePair::new(w, x(0)), int(-1));
    for i in 0..l - 1 {
        phi.set(EdgePair::new(x(i), x(i + 1)), int(1));
    }
    phi.set(EdgePair::new(x(l - 1), 0), root_mid(alpha));
    GluQuad::new(TypedGraph::new(g, tau), phi, 0)
}

/// y=0, u=1, locked flag w=2, then the new sail 3..l+2 closing back to
/// the root.
fn build_alpha(l: usize, alpha: Value, gamma: Value, root_type: u8) -> GluQuad {
    let w = 2;
    let x = |i: usize| 3 + i;
    let n = l + 3;
    let mut pairs = vec![(0, 1), (1, w), (w, x(0))];
    for i in 0..l - 1 {
        pairs.push((x(i), x(i + 1)));
    }
    pairs.push((x(l - 1), 0));
    let g = Graph::from_edges(n, &pairs).unwrap();
    let mut tau = vec![1u8; n];
    tau[0] = root_type;
    tau[1] = 0;
    tau[w] = 2;
    tau[x(0)] = 0;
    let mut phi = Labeling::new();
    phi.set(EdgePair::new(0, 1), alpha);
    phi.set(EdgePair::new(1, w), gamma);
    phi.set(EdgePair::new(w, x(0)), int(-1));
    for i in 0..l - 1 {
        phi.set(EdgePair::new(x(i), x(i + 1)), int(1));
    }
    phi.set(EdgePair::new(x(l - 1), 0), root_mid(alpha));
    GluQuad::new(TypedGraph::new(g, tau), phi, 0)
}

/// Wheel layout: center 0 (the root); cycle vertices 1..=L in cyclic
/// order; anchors at the cumulative segment starts. Walking a segment
/// from its anchor: bogey (type 2), spectator (type 0), then boobies
/// (type 1) up to the next anchor.
pub fn wheel_typed_graph(segments: &[usize], center_type: u8) -> TypedGraph {
    let l: usize = segments.iter().sum();
    let n = l + 1;
    let cyc = |j: usize| 1 + (j % l);
    let mut pairs = Vec::new();
    for j in 0..l {
        pairs.push((cyc(j), cyc(j + 1)));
    }
    let mut anchors = Vec::new();
    let mut acc = 0;
    for s in segments {
        anchors.push(acc);
        acc += s;
    }
    for &a in &anchors {
        pairs.push((0, cyc(a)));
    }
    let g = Graph::from_edges(n, &pairs).unwrap();
    let mut tau = vec![1u8; n];
    tau[0] = center_type;
    for &a in &anchors {
        tau[cyc(a)] = 0; // anchor
        tau[cyc(a + 1)] = 2; // bogey
        tau[cyc(a + 2)] = 0; // spectator
    }
    TypedGraph::new(g, tau)
}

/// All segments of length exactly three with a type-1 center.
pub fn is_evil_wheel(segments: &[usize], center_type: u8) -> bool {
    center_type == 1 && segments.iter().all(|&s| s == 3)
}

fn build_wheel(segments: &[usize], center_type: u8) -> Result<CatalogOutput, GlueError> {
    let tg = wheel_typed_graph(segments, center_type);
    if is_evil_wheel(segments, center_type) {
        let good = find_good_labeling(&tg.graph, u64::MAX)?
            .labeling
            .ok_or_else(|| GlueError::Other("wheel body has no good labeling".into()))?;
        return Ok(CatalogOutput::EvilWheel {
            typed: tg,
            good_labeling: good,
        });
    }
    let phi = synthesized_labels(&tg, 0)?;
    let q = GluQuad::new(tg, phi, 0);
    match verify_gluable(&q, DEFAULT_PATH_BUDGET)? {
        crate::typed::Verdict::Ok => Ok(CatalogOutput::Gluable(q)),
        crate::typed::Verdict::Violation(v) => Err(GlueError::PostconditionFailed(v)),
    }
}

/// Memoized gluable-labeling synthesis keyed by the typed graph shape;
/// each synthesized labeling is verified before it enters the cache.
fn synthesized_labels(tg: &TypedGraph, root: usize) -> Result<Labeling, GlueError> {
    static CACHE: OnceLock<Mutex<HashMap<String, Labeling>>> = OnceLock::new();
    let key = format!("{}|{root}", crate::typed::format_typed_graph(tg));
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(phi) = cache.lock().unwrap().get(&key) {
        return Ok(phi.clone());
    }
    let r = crate::pattern::search_labeling(
        tg,
        Some(root),
        SearchMode::Gluable,
        PatternOptions::default(),
        DEFAULT_PATH_BUDGET,
    )?;
    match r.outcome {
        PatternOutcome::Found(phi) => {
            let q = GluQuad::new(tg.clone(), phi.clone(), root);
            if let crate::typed::Verdict::Violation(v) = verify_gluable(&q, DEFAULT_PATH_BUDGET)? {
                return Err(GlueError::PostconditionFailed(v));
            }
            cache.lock().unwrap().insert(key, phi.clone());
            Ok(phi)
        }
        PatternOutcome::ExhaustedNone => Err(GlueError::SynthesisFailed(
            "pattern space exhausted with no gluable labeling".into(),
        )),
        PatternOutcome::BudgetExceeded => Err(GlueError::SynthesisFailed(
            "node budget exceeded during synthesis".into(),
        )),
    }
}

// -- gluing operations -------------------------------------------------------

fn ensure_gluable(q: &GluQuad) -> Result<(), GlueError> {
    match verify_gluable(q, DEFAULT_PATH_BUDGET)? {
        crate::typed::Verdict::Ok => Ok(()),
        crate::typed::Verdict::Violation(v) => Err(GlueError::InputNotGluable(v)),
    }
}

fn ensure_result(q: GluQuad) -> Result<GluQuad, GlueError> {
    match verify_gluable(&q, DEFAULT_PATH_BUDGET)? {
        crate::typed::Verdict::Ok => Ok(q),
        crate::typed::Verdict::Violation(v) => Err(GlueError::PostconditionFailed(v)),
    }
}

/// Maps q2's vertices into q1's id space, identifying `pairs`
/// (q2-vertex -> q1-vertex); remaining q2 vertices get fresh ids.
/// Identified vertices keep the minimum of the two types.
fn merge_quads(q1: &GluQuad, q2: &GluQuad, pairs: &[(usize, usize)]) -> GluQuad {
    let map: BTreeMap<usize, usize> = pairs.iter().copied().collect();
    let mut g = q1.graph().clone();
    let mut tau: Vec<u8> = (0..g.n()).map(|v| q1.typed.tau(v)).collect();
    let mut phi = q1.phi.clone();
    let mut where_to = vec![usize::MAX; q2.graph().n()];
    for v in q2.graph().vertices() {
        if let Some(&t) = map.get(&v) {
            where_to[v] = t;
            tau[t] = tau[t].min(q2.typed.tau(v));
        } else {
            let id = g.add_vertex();
            tau.push(q2.typed.tau(v));
            where_to[v] = id;
        }
    }
    for e in q2.graph().edges() {
        let (a, b) = (where_to[e.u()], where_to[e.v()]);
        g.add_edge(a, b)
            .expect("glued pieces only share identified vertices");
        phi.set(EdgePair::new(a, b), q2.phi.get(e).unwrap());
    }
    GluQuad::new(TypedGraph::new(g, tau), phi, q1.root)
}

/// Glues two gluable quadruples at their roots. The identified root
/// keeps the smaller type; labels carry over unchanged.
pub fn glue_1sum(q1: &GluQuad, q2: &GluQuad) -> Result<GluQuad, GlueError> {
    ensure_gluable(q1)?;
    ensure_gluable(q2)?;
    let glued = merge_quads(q1, q2, &[(q2.root, q1.root)]);
    ensure_result(glued)
}

/// Glues two gluable quadruples identifying the roots and one
/// connectable type-2 vertex from each side; the root distances must
/// sum to at least five (identifying closer vertices would close a
/// short cycle that no labeling can serve).
pub fn glue_2sum(q1: &GluQuad, w1: usize, q2: &GluQuad, w2: usize) -> Result<GluQuad, GlueError> {
    ensure_gluable(q1)?;
    ensure_gluable(q2)?;
    for (q, w) in [(q1, w1), (q2, w2)] {
        if q.typed.tau(w) != 2 {
            return Err(GlueError::Other(format!("vertex {w} is not type 2")));
        }
        if is_locked(q, w)? {
            return Err(GlueError::Locked(w));
        }
    }
    let d1 = q1
        .graph()
        .dist(q1.root, w1)
        .ok_or_else(|| GlueError::Other("w1 unreachable from the root".into()))?;
    let d2 = q2
        .graph()
        .dist(q2.root, w2)
        .ok_or_else(|| GlueError::Other("w2 unreachable from the root".into()))?;
    if d1 + d2 < 5 {
        return Err(GlueError::DistanceTooSmall(d1, d2));
    }
    let glued = merge_quads(q1, q2, &[(q2.root, q1.root), (w2, w1)]);
    ensure_result(glued)
}

/// Attaches an alpha-beta cycle along an admissible root path (y,u,v):
/// alpha and beta are read off the host labeling; the new type-2 flag
/// lands next to u and may come out locked.
pub fn glue_edge_cycle(
    q: &GluQuad,
    u: usize,
    v: usize,
    new_sail_len: usize,
) -> Result<GluQuad, GlueError> {
    ensure_gluable(q)?;
    let y = q.root;
    let g = q.graph();
    if !(g.has_edge(y, u) && g.has_edge(u, v) && v != y) {
        return Err(GlueError::Other(format!("({y},{u},{v}) is not a path")));
    }
    if q.typed.tau(u) != 1 || q.typed.tau(v) > 1 {
        return Err(GlueError::NotAdmissible(vec![y, u, v]));
    }
    let alpha = q.phi.value(y, u).unwrap();
    let beta = q.phi.value(u, v).unwrap();
    if !crate::typed::glu_a_satisfied(alpha, beta) {
        return Err(GlueError::NotAdmissible(vec![y, u, v]));
    }
    if new_sail_len < 2 {
        return Err(GlueError::InvalidParams(
            "cycle attachment needs new sail length >= 2".into(),
        ));
    }
    let mut g = g.clone();
    let mut tau: Vec<u8> = (0..g.n()).map(|x| q.typed.tau(x)).collect();
    let mut phi = q.phi.clone();
    let w = g.add_vertex();
    tau.push(2);
    g.add_edge(u, w).map_err(|e| GlueError::Other(e.to_string()))?;
    phi.set(EdgePair::new(u, w), int(-1));
    graft_sail(&mut g, &mut tau, &mut phi, w, y, new_sail_len, root_mid(alpha))?;
    tau[u] = 0; // sealed by the new flag
    ensure_result(GluQuad::new(TypedGraph::new(g, tau), phi, y))
}

/// Attaches an alpha cycle along the locking path (y,u,w) of a locked
/// vertex w, adding a new sail from w back to the root.
pub fn glue_lock_cycle(
    q: &GluQuad,
    u: usize,
    w: usize,
    new_sail_len: usize,
) -> Result<GluQuad, GlueError> {
    ensure_gluable(q)?;
    let y = q.root;
    let g = q.graph();
    if !(g.has_edge(y, u) && g.has_edge(u, w)) {
        return Err(GlueError::Other(format!("({y},{u},{w}) is not a path")));
    }
    if !is_locked(q, w)? {
        return Err(GlueError::NotLocked(w));
    }
    if new_sail_len < 2 {
        return Err(GlueError::InvalidParams(
            "cycle attachment needs new sail length >= 2".into(),
        ));
    }
    let alpha = q.phi.value(y, u).unwrap();
    let mut g = g.clone();
    let mut tau: Vec<u8> = (0..g.n()).map(|x| q.typed.tau(x)).collect();
    let mut phi = q.phi.clone();
    graft_sail(&mut g, &mut tau, &mut phi, w, y, new_sail_len, root_mid(alpha))?;
    ensure_result(GluQuad::new(TypedGraph::new(g, tau), phi, y))
}

/// Adds the new-sail chain w -(-1)- x0 -(+1)- ... -(+1)- x_{l-1}
/// -(root_label)- y; x0 is type 0 (sealed by w), the rest type 1.
fn graft_sail(
    g: &mut Graph,
    tau: &mut Vec<u8>,
    phi: &mut Labeling,
    w: usize,
    y: usize,
    l: usize,
    root_label: Value,
) -> Result<(), GlueError> {
    let mut prev = w;
    let mut prev_label = int(-1);
    for i in 0..l {
        let x = g.add_vertex();
        tau.push(if i == 0 { 0 } else { 1 });
        g.add_edge(prev, x).map_err(|e| GlueError::Other(e.to_string()))?;
        phi.set(EdgePair::new(prev, x), prev_label);
        prev = x;
        prev_label = int(1);
    }
    g.add_edge(prev, y).map_err(|e| GlueError::Other(e.to_string()))?;
    phi.set(EdgePair::new(prev, y), root_label);
    Ok(())
}

// -- composition scripts -----------------------------------------------------

/// One step of a replayable composition script.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "op")]
pub enum ScriptStep {
    /// 1-sum a catalog piece onto the accumulator (the first step just
    /// creates it).
    OneSum { piece: CatalogPiece },
    /// 2-sum a catalog piece at its unique type-2 vertex with the given
    /// host vertex.
    TwoSum { piece: CatalogPiece, host_w: usize },
    /// Attach an alpha-beta cycle along the admissible host path
    /// (root, u, v).
    EdgeCycle { u: usize, v: usize, new_sail_len: usize },
    /// Attach an alpha cycle along the locking path (root, u, w).
    LockCycle { u: usize, w: usize, new_sail_len: usize },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GlueScript {
    pub steps: Vec<ScriptStep>,
}

fn unique_type2(q: &GluQuad) -> Result<usize, GlueError> {
    let t2 = q.typed.vertices_of_type(2);
    match t2.as_slice() {
        [w] => Ok(*w),
        _ => Err(GlueError::Other(format!(
            "piece has {} type-2 vertices; the 2-sum step needs exactly one",
            t2.len()
        ))),
    }
}

/// Deterministically replays a composition script, verifying every
/// intermediate quadruple.
pub fn run_script(script: &GlueScript) -> Result<GluQuad, GlueError> {
    let mut acc: Option<GluQuad> = None;
    for step in &script.steps {
        acc = Some(match (acc, step) {
            (None, ScriptStep::OneSum { piece }) => catalog(piece)?.into_gluable()?,
            (None, _) => {
                return Err(GlueError::Other(
                    "a script must start by creating a piece".into(),
                ))
            }
            (Some(a), ScriptStep::OneSum { piece }) => {
                glue_1sum(&a, &catalog(piece)?.into_gluable()?)?
            }
            (Some(a), ScriptStep::TwoSum { piece, host_w }) => {
                let p = catalog(piece)?.into_gluable()?;
                let w2 = unique_type2(&p)?;
                glue_2sum(&a, *host_w, &p, w2)?
            }
            (Some(a), ScriptStep::EdgeCycle { u, v, new_sail_len }) => {
                glue_edge_cycle(&a, *u, *v, *new_sail_len)?
            }
            (Some(a), ScriptStep::LockCycle { u, w, new_sail_len }) => {
                glue_lock_cycle(&a, *u, *w, *new_sail_len)?
            }
        });
    }
    acc.ok_or_else(|| GlueError::Other("empty script".into()))
}

// -- swell subgraphs ---------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SwellViolation {
    /// h is not a subgraph of g under the embedding.
    NotASubgraph(String),
    /// h equals g; a swell subgraph is proper.
    NotProper,
    /// h has no vertex of type 0 or 1.
    NoLowTypeVertex,
    /// condition (a): a type-0 vertex with an outside neighbor.
    TypeZeroLeaks { h_vertex: usize, outside: usize },
    /// condition (b): a type-1 vertex with two or more outside neighbors.
    TypeOneLeaks { h_vertex: usize, outside: Vec<usize> },
    /// condition (c): an outside vertex adjacent to two type-1 vertices.
    OutsideSeesTwoTypeOnes { outside: usize, h_vertices: Vec<usize> },
}

impl std::fmt::Display for SwellViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Checks the swell-subgraph conditions for `h` embedded in `g` by
/// `embed` (h-vertex i sits at g-vertex embed[i]).
pub fn verify_swell(g: &Graph, h: &TypedGraph, embed: &[usize]) -> Result<(), SwellViolation> {
    if embed.len() != h.graph.n() {
        return Err(SwellViolation::NotASubgraph(
            "embedding must list one g-vertex per h-vertex".into(),
        ));
    }
    let mut inv = vec![None; g.n()];
    for (i, &gv) in embed.iter().enumerate() {
        if gv >= g.n() {
            return Err(SwellViolation::NotASubgraph(format!(
                "embedded vertex {gv} out of range"
            )));
        }
        if inv[gv].replace(i).is_some() {
            return Err(SwellViolation::NotASubgraph(format!(
                "embedding not injective at {gv}"
            )));
        }
    }
    for e in h.graph.edges() {
        if !g.has_edge(embed[e.u()], embed[e.v()]) {
            return Err(SwellViolation::NotASubgraph(format!(
                "edge {e} of h missing in g"
            )));
        }
    }
    if h.graph.n() == g.n() && h.graph.m() == g.m() {
        return Err(SwellViolation::NotProper);
    }
    if !(0..h.graph.n()).any(|v| h.tau(v) <= 1) {
        return Err(SwellViolation::NoLowTypeVertex);
    }
    for hv in 0..h.graph.n() {
        let gv = embed[hv];
        let outside: Vec<usize> = g.neighbors(gv).filter(|&x| inv[x].is_none()).collect();
        match h.tau(hv) {
            0 if !outside.is_empty() => {
                return Err(SwellViolation::TypeZeroLeaks {
                    h_vertex: hv,
                    outside: outside[0],
                })
            }
            1 if outside.len() > 1 => {
                return Err(SwellViolation::TypeOneLeaks {
                    h_vertex: hv,
                    outside,
                })
            }
            _ => {}
        }
    }
    for z in g.vertices().filter(|&z| inv[z].is_none()) {
        let t1: Vec<usize> = g
            .neighbors(z)
            .filter_map(|x| inv[x])
            .filter(|&hv| h.tau(hv) == 1)
            .collect();
        if t1.len() >= 2 {
            return Err(SwellViolation::OutsideSeesTwoTypeOnes {
                outside: z,
                h_vertices: t1,
            });
        }
    }
    Ok(())
}

#[derive(Error, Debug)]
pub enum SwellError {
    #[error("swell condition violated: {0}")]
    Swell(SwellViolation),
    #[error("h labeling is not decent: {0}")]
    NotDecent(Violation),
    #[error("rest labeling is not good on g minus the low-type vertices: {0}")]
    RestNotGood(String),
    #[error("combined labeling failed the goodness verifier: {0}")]
    CombinationNotGood(String),
    #[error(transparent)]
    Check(#[from] CheckError),
}

/// Combines a decent labeling of a swell subgraph with a good labeling
/// of the rest of the host into a good labeling of the whole host.
///
/// `phi_h` lives on h's edges; `phi_rest` lives (in g's ids) on the
/// edges of g that survive deleting the type-0/1 vertices of h. The h
/// side is scaled so its smallest nonzero magnitude is exactly 2, the
/// rest so its largest magnitude is exactly 1, and every connecting
/// edge receives a finite stand-in for minus infinity, strictly below
/// everything else. The result is re-verified, never assumed.
pub fn swell_combine(
    g: &Graph,
    h: &TypedGraph,
    embed: &[usize],
    phi_h: &Labeling,
    phi_rest: &Labeling,
) -> Result<Labeling, SwellError> {
    verify_swell(g, h, embed).map_err(SwellError::Swell)?;
    match crate::typed::verify_decent(h, phi_h, DEFAULT_PATH_BUDGET)? {
        crate::typed::Verdict::Ok => {}
        crate::typed::Verdict::Violation(v) => return Err(SwellError::NotDecent(v)),
    }

    let deleted: std::collections::BTreeSet<usize> = (0..h.graph.n())
        .filter(|&v| h.tau(v) <= 1)
        .map(|v| embed[v])
        .collect();
    let rest_edges: Vec<EdgePair> = g
        .edges()
        .filter(|e| !deleted.contains(&e.u()) && !deleted.contains(&e.v()))
        .copied()
        .collect();
    let mut rest_graph = Graph::empty(g.n());
    for e in &rest_edges {
        if phi_rest.get(e).is_none() {
            return Err(SwellError::RestNotGood(format!("no label for edge {e}")));
        }
        rest_graph.add_edge(e.u(), e.v()).unwrap();
    }
    if !is_good_paths(&rest_graph, phi_rest)
        .map_err(CheckError::from)?
        .is_good()
    {
        return Err(SwellError::RestNotGood("two nondecreasing paths".into()));
    }

    let abs = |v: &Value| if *v < int(0) { -*v } else { *v };
    // h side: smallest nonzero magnitude becomes exactly 2
    let factor_h = phi_h
        .values()
        .filter(|v| **v != int(0))
        .map(abs)
        .min()
        .map_or(int(1), |m| int(2) / m);
    // rest side: largest magnitude becomes exactly 1
    let factor_r = phi_rest
        .values()
        .map(abs)
        .filter(|v| *v != int(0))
        .max()
        .map_or(int(1), |m| int(1) / m);

    let mut combined = Labeling::new();
    for (e, v) in phi_h.iter() {
        combined.set(EdgePair::new(embed[e.u()], embed[e.v()]), factor_h * v);
    }
    for e in &rest_edges {
        combined.set(*e, factor_r * phi_rest.get(e).unwrap());
    }
    let finite_min = combined.values().min().copied().unwrap_or(int(0));
    let neg_inf = finite_min - int(100);
    for e in g.edges() {
        if combined.get(e).is_none() {
            combined.set(*e, neg_inf);
        }
    }
    match is_good_paths(g, &combined).map_err(CheckError::from)? {
        crate::labeling::GoodnessWitness::Ok => Ok(combined),
        w => Err(SwellError::CombinationNotGood(format!("{w:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_paths() {
        for len in [2, 3, 5] {
            for rt in [0, 1] {
                let q = catalog(&CatalogPiece::PathToType2 { length: len, root_type: rt })
                    .unwrap()
                    .into_gluable()
                    .unwrap();
                assert!(verify_gluable(&q, 10_000).unwrap().is_ok());
            }
        }
        for len in [1, 2, 3, 4, 6] {
            let q = catalog(&CatalogPiece::PathToType1 { length: len, root_type: 1 })
                .unwrap()
                .into_gluable()
                .unwrap();
            assert!(verify_gluable(&q, 10_000).unwrap().is_ok());
        }
    }

    #[test]
    fn catalog_cycles() {
        let q = catalog(&CatalogPiece::Fish { sail_len: 4, root_type: 0 })
            .unwrap()
            .into_gluable()
            .unwrap();
        assert!(verify_gluable(&q, 10_000).unwrap().is_ok());
        // the fish flag is locked by construction
        let w = q.typed.vertices_of_type(2)[0];
        assert!(is_locked(&q, w).unwrap());

        let q = catalog(&CatalogPiece::AlphaBetaCycle {
            new_sail_len: 2,
            alpha: rat(17, 24),
            beta: int(1),
            root_type: 1,
        })
        .unwrap()
        .into_gluable()
        .unwrap();
        assert!(verify_gluable(&q, 10_000).unwrap().is_ok());

        let q = catalog(&CatalogPiece::AlphaCycle {
            new_sail_len: 2,
            alpha: rat(7, 10),
            gamma: int(-1),
            root_type: 1,
        })
        .unwrap()
        .into_gluable()
        .unwrap();
        assert!(verify_gluable(&q, 10_000).unwrap().is_ok());

        for (len, pos) in [(5, 1), (5, 2), (6, 3), (4, 2)] {
            let q = catalog(&CatalogPiece::PlainCycle { length: len, u_pos: pos, root_type: 0 })
                .unwrap()
                .into_gluable()
                .unwrap();
            assert!(verify_gluable(&q, 10_000).unwrap().is_ok());
        }
    }

    #[test]
    fn one_sum_of_short_paths() {
        let p = catalog(&CatalogPiece::PathToType2 { length: 2, root_type: 1 })
            .unwrap()
            .into_gluable()
            .unwrap();
        let glued = glue_1sum(&p, &p).unwrap();
        assert_eq!(glued.graph().n(), 5);
        assert!(verify_gluable(&glued, 10_000).unwrap().is_ok());
    }

    #[test]
    fn two_sum_distance_condition() {
        let short = catalog(&CatalogPiece::PathToType2 { length: 2, root_type: 1 })
            .unwrap()
            .into_gluable()
            .unwrap();
        let long = catalog(&CatalogPiece::PathToType2 { length: 3, root_type: 1 })
            .unwrap()
            .into_gluable()
            .unwrap();
        let w_short = unique_type2(&short).unwrap();
        let w_long = unique_type2(&long).unwrap();
        // 2 + 2 = 4 < 5: rejected
        assert!(matches!(
            glue_2sum(&short, w_short, &short, w_short),
            Err(GlueError::DistanceTooSmall(2, 2))
        ));
        // 2 + 3 = 5: a gluable cycle
        let glued = glue_2sum(&short, w_short, &long, w_long).unwrap();
        assert!(verify_gluable(&glued, 10_000).unwrap().is_ok());
        assert_eq!(glued.typed.vertices_of_type(2).len(), 1);
    }

    #[test]
    fn edge_cycle_then_lock_cycle() {
        let base = catalog(&CatalogPiece::PathToType1 { length: 3, root_type: 1 })
            .unwrap()
            .into_gluable()
            .unwrap();
        // root path (0,1,2) carries (17/24, 1): admissible
        let once = glue_edge_cycle(&base, 1, 2, 2).unwrap();
        assert!(verify_gluable(&once, 10_000).unwrap().is_ok());
        let w = *once.typed.vertices_of_type(2).last().unwrap();
        // alpha = 17/24 < 3/4: the new flag is locked via vertex 1
        assert!(is_locked(&once, w).unwrap());
        let twice = glue_lock_cycle(&once, 1, w, 2).unwrap();
        assert!(verify_gluable(&twice, 10_000).unwrap().is_ok());

        // a locked flag is rejected by the 2-sum
        let p = catalog(&CatalogPiece::PathToType2 { length: 3, root_type: 1 })
            .unwrap()
            .into_gluable()
            .unwrap();
        let wp = unique_type2(&p).unwrap();
        assert!(matches!(
            glue_2sum(&once, w, &p, wp),
            Err(GlueError::Locked(_))
        ));
    }

    #[test]
    fn evil_wheel_marker() {
        let out = catalog(&CatalogPiece::Wheel { segments: vec![3, 3], center_type: 1 }).unwrap();
        match out {
            CatalogOutput::EvilWheel { typed, good_labeling } => {
                assert!(is_good_paths(&typed.graph, &good_labeling).unwrap().is_good());
            }
            CatalogOutput::Gluable(_) => panic!("evil wheel must not come out gluable"),
        }
    }

    #[test]
    fn almost_evil_wheel_is_gluable() {
        let out = catalog(&CatalogPiece::Wheel { segments: vec![3, 3], center_type: 0 }).unwrap();
        let q = out.into_gluable().unwrap();
        assert!(verify_gluable(&q, 100_000).unwrap().is_ok());
    }

    #[test]
    fn swell_combination_example() {
        // h = the catalog length-2 path embedded on (0,1,2) of the host
        let h = catalog(&CatalogPiece::PathToType2 { length: 2, root_type: 1 })
            .unwrap()
            .into_gluable()
            .unwrap();
        // g: 0-1, 1-2 (h's path), 0-3 (connector), 3-4 (rest edge)
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (0, 3), (3, 4)]).unwrap();
        let mut phi_rest = Labeling::new();
        phi_rest.set(EdgePair::new(3, 4), int(5));
        let combined = swell_combine(&g, &h.typed, &[0, 1, 2], &h.phi, &phi_rest).unwrap();
        assert!(is_good_paths(&g, &combined).unwrap().is_good());
        // h scaled by 8/3: 3/4 -> 2, -1 -> -8/3; rest scaled to 1
        assert_eq!(combined.value(0, 1).unwrap(), int(2));
        assert_eq!(combined.value(1, 2).unwrap(), rat(-8, 3));
        assert_eq!(combined.value(3, 4).unwrap(), int(1));
        assert!(combined.value(0, 3).unwrap() < rat(-8, 3) - int(1));
    }

    #[test]
    fn swell_violations() {
        let h = catalog(&CatalogPiece::PathToType2 { length: 2, root_type: 1 })
            .unwrap()
            .into_gluable()
            .unwrap();
        // type-0 vertex (h vertex 1) with an outside neighbor
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        assert!(matches!(
            verify_swell(&g, &h.typed, &[0, 1, 2]),
            Err(SwellViolation::TypeZeroLeaks { h_vertex: 1, .. })
        ));
        // h = g: not proper
        let g2 = h.graph().clone();
        assert!(matches!(
            verify_swell(&g2, &h.typed, &[0, 1, 2]),
            Err(SwellViolation::NotProper)
        ));
        // all-type-2 h is rejected
        let all2 = TypedGraph::uniform(Graph::from_edges(2, &[(0, 1)]).unwrap(), 2);
        let g3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(matches!(
            verify_swell(&g3, &all2, &[0, 1]),
            Err(SwellViolation::NoLowTypeVertex)
        ));
    }

    #[test]
    fn script_roundtrip() {
        let script = GlueScript {
            steps: vec![
                ScriptStep::OneSum {
                    piece: CatalogPiece::PathToType1 { length: 3, root_type: 1 },
                },
                ScriptStep::EdgeCycle { u: 1, v: 2, new_sail_len: 2 },
                ScriptStep::OneSum {
                    piece: CatalogPiece::PathToType2 { length: 2, root_type: 1 },
                },
            ],
        };
        let q = run_script(&script).unwrap();
        assert!(verify_gluable(&q, 100_000).unwrap().is_ok());
        let json = serde_json::to_string(&script).unwrap();
        let back: GlueScript = serde_json::from_str(&json).unwrap();
        let q2 = run_script(&back).unwrap();
        assert_eq!(q.graph().n(), q2.graph().n());
        assert_eq!(q.phi, q2.phi);
    }
}
