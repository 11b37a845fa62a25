//! Synthesis engines: find good labelings or certify badness by
//! exhaustion, decide criticality, and synthesize decent/gluable
//! labelings through the pattern quotient.
//!
//! Searching total orders only is complete for goodness: perturbing a
//! good labeling with ties to nearby distinct values keeps at least one
//! local minimum inside each tied minimum run, so some permutation is
//! good whenever any labeling is. The equivalence is cross-checked
//! exhaustively on all small graphs by `certify_equivalence_distinct_vs_weak`.

use crate::graph::{EdgePair, Graph};
use crate::labeling::{is_good_paths, Labeling};
use crate::pattern::{
    search_labeling, PatternOptions, PatternOutcome, PatternStats, SearchMode,
};
use crate::typed::{CheckError, TypedGraph, Violation};
use crate::value::{format_value, int, parse_value};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const CERT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub prunes: u64,
    pub leaves: u64,
    /// True when the search space was fully covered (no budget abort).
    pub complete: bool,
}

#[derive(Error, Debug)]
pub enum SearchError {
    #[error("node budget exhausted after {nodes} nodes (no exhaustion proof)")]
    Budget { nodes: u64 },
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error("internal: synthesized labeling failed re-verification: {0}")]
    ReverifyFailed(String),
}

// -- certificates ------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl GraphDoc {
    pub fn of(g: &Graph) -> Self {
        GraphDoc {
            n: g.n(),
            edges: g.edges().map(|e| e.endpoints()).collect(),
        }
    }
    pub fn to_graph(&self) -> Result<Graph, crate::graph::GraphError> {
        Graph::from_edges(self.n, &self.edges)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelEntry {
    pub u: usize,
    pub v: usize,
    pub value: String,
}

pub fn labels_doc(phi: &Labeling) -> Vec<LabelEntry> {
    phi.iter()
        .map(|(e, v)| LabelEntry {
            u: e.u(),
            v: e.v(),
            value: format_value(v),
        })
        .collect()
}

pub fn labels_from_doc(doc: &[LabelEntry]) -> Result<Labeling, String> {
    let mut phi = Labeling::new();
    for l in doc {
        phi.set(EdgePair::new(l.u, l.v), parse_value(&l.value)?);
    }
    Ok(phi)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason")]
pub enum NotCriticalReason {
    /// The graph itself has a good labeling.
    SelfGood { labels: Vec<LabelEntry>, stats: SearchStats },
    /// Some single-edge deletion is already bad.
    DeletionBad { edge: (usize, usize), stats: SearchStats },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Certificate {
    GoodLabeling {
        graph: GraphDoc,
        labels: Vec<LabelEntry>,
        stats: SearchStats,
    },
    BadExhausted {
        graph: GraphDoc,
        stats: SearchStats,
    },
    Criticality {
        graph: GraphDoc,
        bad: Box<Certificate>,
        deletions: Vec<((usize, usize), Certificate)>,
    },
    NotCritical {
        graph: GraphDoc,
        #[serde(flatten)]
        why: NotCriticalReason,
    },
    DecentLabeling {
        graph: GraphDoc,
        types: Vec<u8>,
        labels: Vec<LabelEntry>,
        stats: PatternStats,
    },
    NoDecentLabeling {
        graph: GraphDoc,
        types: Vec<u8>,
        stats: PatternStats,
        structural: Option<String>,
    },
    GluableLabeling {
        graph: GraphDoc,
        types: Vec<u8>,
        root: usize,
        labels: Vec<LabelEntry>,
        stats: PatternStats,
    },
    NoGluableLabeling {
        graph: GraphDoc,
        types: Vec<u8>,
        root: usize,
        stats: PatternStats,
        structural: Option<String>,
    },
}

#[derive(Serialize, Deserialize)]
struct Envelope {
    schema_version: u32,
    #[serde(flatten)]
    certificate: Certificate,
}

pub fn certificate_to_json(c: &Certificate) -> String {
    serde_json::to_string_pretty(&Envelope {
        schema_version: CERT_SCHEMA_VERSION,
        certificate: c.clone(),
    })
    .expect("certificate serialization")
}

pub fn certificate_from_json(s: &str) -> Result<Certificate, String> {
    let env: Envelope = serde_json::from_str(s).map_err(|e| e.to_string())?;
    if env.schema_version != CERT_SCHEMA_VERSION {
        return Err(format!(
            "unsupported schema version {}",
            env.schema_version
        ));
    }
    Ok(env.certificate)
}

// -- good-labeling search ----------------------------------------------------

pub struct GoodSearchOutcome {
    pub labeling: Option<Labeling>,
    pub stats: SearchStats,
}

struct Bnb<'a> {
    g: &'a Graph,
    cur: Graph,
    phi: Labeling,
    unlabeled: Vec<EdgePair>,
    stats: SearchStats,
    budget: u64,
    hit_budget: bool,
    found: Option<Labeling>,
}

impl<'a> Bnb<'a> {
    fn dfs(&mut self, next_label: i64) {
        if self.hit_budget || self.found.is_some() {
            return;
        }
        if self.unlabeled.is_empty() {
            self.stats.leaves += 1;
            self.found = Some(self.phi.clone());
            return;
        }
        for i in 0..self.unlabeled.len() {
            if self.hit_budget || self.found.is_some() {
                return;
            }
            let e = self.unlabeled[i];
            self.stats.nodes += 1;
            if self.stats.nodes >= self.budget {
                self.hit_budget = true;
                return;
            }
            self.unlabeled.swap_remove(i);
            self.cur.add_edge(e.u(), e.v()).expect("fresh edge");
            self.phi.set(e, int(next_label));
            // a monotone-path conflict among labeled edges persists in
            // every completion, so pruning here is sound
            let good = is_good_paths(&self.cur, &self.phi)
                .expect("labels total on labeled subgraph")
                .is_good();
            if good {
                self.dfs(next_label + 1);
            } else {
                self.stats.prunes += 1;
            }
            self.phi.remove(&e);
            self.cur.remove_edge_mut(&e);
            self.unlabeled.push(e);
            let last = self.unlabeled.len() - 1;
            self.unlabeled.swap(i, last);
        }
    }
}

/// Branch and bound over edge orderings: labels 1..m are assigned in
/// ascending order, and a partial order is pruned as soon as the labeled
/// subgraph has two nondecreasing paths between some ordered pair.
pub fn find_good_labeling(g: &Graph, budget: u64) -> Result<GoodSearchOutcome, SearchError> {
    let mut b = Bnb {
        g,
        cur: Graph::empty(g.n()),
        phi: Labeling::new(),
        unlabeled: g.edge_vec(),
        stats: SearchStats::default(),
        budget,
        hit_budget: false,
        found: None,
    };
    b.dfs(1);
    if b.found.is_none() && b.hit_budget {
        return Err(SearchError::Budget {
            nodes: b.stats.nodes,
        });
    }
    let mut stats = b.stats;
    stats.complete = !b.hit_budget;
    if let Some(phi) = &b.found {
        // a found labeling always re-verifies before certification
        if !is_good_paths(b.g, phi)
            .map_err(CheckError::from)?
            .is_good()
        {
            return Err(SearchError::ReverifyFailed("good labeling".into()));
        }
    }
    Ok(GoodSearchOutcome {
        labeling: b.found,
        stats,
    })
}

/// Certificate form of `find_good_labeling`.
pub fn good_labeling_certificate(g: &Graph, budget: u64) -> Result<Certificate, SearchError> {
    let out = find_good_labeling(g, budget)?;
    Ok(match out.labeling {
        Some(phi) => Certificate::GoodLabeling {
            graph: GraphDoc::of(g),
            labels: labels_doc(&phi),
            stats: out.stats,
        },
        None => Certificate::BadExhausted {
            graph: GraphDoc::of(g),
            stats: out.stats,
        },
    })
}

/// Criticality: the graph is bad and every single-edge deletion is good.
/// Sound because goodness is subgraph-monotone: every proper subgraph
/// embeds in some single-edge deletion.
pub fn is_critical(g: &Graph, budget: u64) -> Result<Certificate, SearchError> {
    let whole = find_good_labeling(g, budget)?;
    if let Some(phi) = whole.labeling {
        return Ok(Certificate::NotCritical {
            graph: GraphDoc::of(g),
            why: NotCriticalReason::SelfGood {
                labels: labels_doc(&phi),
                stats: whole.stats,
            },
        });
    }
    let bad = Certificate::BadExhausted {
        graph: GraphDoc::of(g),
        stats: whole.stats,
    };
    let mut deletions = Vec::new();
    for e in g.edge_vec() {
        let sub = g.without_edge(&e);
        let out = find_good_labeling(&sub, budget)?;
        match out.labeling {
            Some(phi) => deletions.push((
                e.endpoints(),
                Certificate::GoodLabeling {
                    graph: GraphDoc::of(&sub),
                    labels: labels_doc(&phi),
                    stats: out.stats,
                },
            )),
            None => {
                return Ok(Certificate::NotCritical {
                    graph: GraphDoc::of(g),
                    why: NotCriticalReason::DeletionBad {
                        edge: e.endpoints(),
                        stats: out.stats,
                    },
                });
            }
        }
    }
    Ok(Certificate::Criticality {
        graph: GraphDoc::of(g),
        bad: Box::new(bad),
        deletions,
    })
}

// -- decent / gluable synthesis ---------------------------------------------

pub fn find_decent_labeling(
    tg: &TypedGraph,
    opts: PatternOptions,
    path_budget: usize,
) -> Result<Certificate, SearchError> {
    let r = search_labeling(tg, None, SearchMode::Decent, opts, path_budget)?;
    decent_outcome_to_cert(tg, None, r.outcome, r.stats, r.structural, false)
}

pub fn find_gluable_labeling(
    tg: &TypedGraph,
    root: usize,
    opts: PatternOptions,
    path_budget: usize,
) -> Result<Certificate, SearchError> {
    let r = search_labeling(tg, Some(root), SearchMode::Gluable, opts, path_budget)?;
    decent_outcome_to_cert(tg, Some(root), r.outcome, r.stats, r.structural, true)
}

fn decent_outcome_to_cert(
    tg: &TypedGraph,
    root: Option<usize>,
    outcome: PatternOutcome,
    stats: PatternStats,
    structural: Option<Violation>,
    gluable: bool,
) -> Result<Certificate, SearchError> {
    let graph = GraphDoc::of(&tg.graph);
    let types = tg.types().to_vec();
    match outcome {
        PatternOutcome::Found(phi) => {
            // production re-verification of the synthesized labeling
            let ok = if gluable {
                let q = crate::typed::GluQuad::new(tg.clone(), phi.clone(), root.unwrap());
                crate::typed::verify_gluable(&q, crate::typed::DEFAULT_PATH_BUDGET)?.is_ok()
            } else {
                crate::typed::verify_decent(tg, &phi, crate::typed::DEFAULT_PATH_BUDGET)?.is_ok()
            };
            if !ok {
                return Err(SearchError::ReverifyFailed(
                    if gluable { "gluable" } else { "decent" }.into(),
                ));
            }
            Ok(if gluable {
                Certificate::GluableLabeling {
                    graph,
                    types,
                    root: root.unwrap(),
                    labels: labels_doc(&phi),
                    stats,
                }
            } else {
                Certificate::DecentLabeling {
                    graph,
                    types,
                    labels: labels_doc(&phi),
                    stats,
                }
            })
        }
        PatternOutcome::ExhaustedNone => Ok(if gluable {
            Certificate::NoGluableLabeling {
                graph,
                types,
                root: root.unwrap(),
                stats,
                structural: structural.map(|v| v.to_string()),
            }
        } else {
            Certificate::NoDecentLabeling {
                graph,
                types,
                stats,
                structural: structural.map(|v| v.to_string()),
            }
        }),
        PatternOutcome::BudgetExceeded => Err(SearchError::Budget { nodes: stats.nodes }),
    }
}

/// Existence under distinct labels equals existence under arbitrary
/// ties; exercised exhaustively over small graphs as a test oracle.
pub fn certify_equivalence_distinct_vs_weak(g: &Graph) -> Result<bool, SearchError> {
    let distinct = find_good_labeling(g, u64::MAX)?.labeling.is_some();
    let tg = TypedGraph::uniform(g.clone(), 1);
    let r = search_labeling(
        &tg,
        None,
        SearchMode::Good,
        PatternOptions::default(),
        1_000_000,
    )?;
    let weak = matches!(r.outcome, PatternOutcome::Found(_));
    Ok(distinct == weak)
}

/// Re-verifies the verifiable parts of a certificate. Labeling-bearing
/// certificates are replayed through the production checkers;
/// exhaustion statistics are checked for completeness flags.
pub fn verify_certificate(cert: &Certificate) -> Result<bool, String> {
    match cert {
        Certificate::GoodLabeling { graph, labels, .. } => {
            let g = graph.to_graph().map_err(|e| e.to_string())?;
            let phi = labels_from_doc(labels)?;
            Ok(is_good_paths(&g, &phi).map_err(|e| e.to_string())?.is_good())
        }
        Certificate::BadExhausted { stats, .. } => Ok(stats.complete),
        Certificate::Criticality { bad, deletions, graph } => {
            if !verify_certificate(bad)? {
                return Ok(false);
            }
            let g = graph.to_graph().map_err(|e| e.to_string())?;
            if deletions.len() != g.m() {
                return Ok(false);
            }
            for (_, c) in deletions {
                if !matches!(c, Certificate::GoodLabeling { .. }) || !verify_certificate(c)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Certificate::NotCritical { graph, why } => match why {
            NotCriticalReason::SelfGood { labels, .. } => {
                let g = graph.to_graph().map_err(|e| e.to_string())?;
                let phi = labels_from_doc(labels)?;
                Ok(is_good_paths(&g, &phi).map_err(|e| e.to_string())?.is_good())
            }
            NotCriticalReason::DeletionBad { stats, .. } => Ok(stats.complete),
        },
        Certificate::DecentLabeling { graph, types, labels, .. } => {
            let g = graph.to_graph().map_err(|e| e.to_string())?;
            let tg = TypedGraph::new(g, types.clone());
            let phi = labels_from_doc(labels)?;
            Ok(crate::typed::verify_decent(&tg, &phi, crate::typed::DEFAULT_PATH_BUDGET)
                .map_err(|e| e.to_string())?
                .is_ok())
        }
        Certificate::GluableLabeling { graph, types, root, labels, .. } => {
            let g = graph.to_graph().map_err(|e| e.to_string())?;
            let tg = TypedGraph::new(g, types.clone());
            let phi = labels_from_doc(labels)?;
            let q = crate::typed::GluQuad::new(tg, phi, *root);
            Ok(crate::typed::verify_gluable(&q, crate::typed::DEFAULT_PATH_BUDGET)
                .map_err(|e| e.to_string())?
                .is_ok())
        }
        Certificate::NoDecentLabeling { stats, .. }
        | Certificate::NoGluableLabeling { stats, .. } => Ok(stats.complete),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_bipartite, cycle_graph};
    use crate::labeling::is_good_cycles;

    #[test]
    fn c3_is_bad_c5_is_good() {
        let out = find_good_labeling(&cycle_graph(3), u64::MAX).unwrap();
        assert!(out.labeling.is_none());
        assert!(out.stats.complete);

        let out = find_good_labeling(&cycle_graph(5), u64::MAX).unwrap();
        let phi = out.labeling.expect("C5 has a good labeling");
        assert!(is_good_paths(&cycle_graph(5), &phi).unwrap().is_good());
        assert!(is_good_cycles(&cycle_graph(5), &phi, 1000).unwrap().is_good());
    }

    #[test]
    fn k23_minus_edge_is_good() {
        let k23 = complete_bipartite(2, 3);
        for e in k23.edge_vec() {
            let sub = k23.without_edge(&e);
            assert!(find_good_labeling(&sub, u64::MAX).unwrap().labeling.is_some());
        }
    }

    #[test]
    fn criticality_certificates() {
        let c = is_critical(&cycle_graph(3), u64::MAX).unwrap();
        assert!(matches!(c, Certificate::Criticality { .. }));
        assert!(verify_certificate(&c).unwrap());

        let c = is_critical(&cycle_graph(4), u64::MAX).unwrap();
        assert!(matches!(
            c,
            Certificate::NotCritical { why: NotCriticalReason::SelfGood { .. }, .. }
        ));

        let k23 = complete_bipartite(2, 3);
        let c = is_critical(&k23, u64::MAX).unwrap();
        match &c {
            Certificate::Criticality { deletions, .. } => assert_eq!(deletions.len(), 6),
            other => panic!("expected criticality, got {other:?}"),
        }
        assert!(verify_certificate(&c).unwrap());
    }

    #[test]
    fn certificate_json_roundtrip() {
        let c = is_critical(&cycle_graph(3), u64::MAX).unwrap();
        let s = certificate_to_json(&c);
        let back = certificate_from_json(&s).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn distinct_weak_equivalence_on_named_graphs() {
        assert!(certify_equivalence_distinct_vs_weak(&cycle_graph(3)).unwrap());
        assert!(certify_equivalence_distinct_vs_weak(&cycle_graph(4)).unwrap());
        assert!(certify_equivalence_distinct_vs_weak(&complete_bipartite(2, 3)).unwrap());
    }
}
