//! Bipartite Tanner graphs: adjacency, structural labels, degree profiles,
//! and exact girth.

use crate::matrix::BinaryMatrix;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({var}, {check}) out of range for {num_vars} variables x {num_checks} checks")]
    EdgeOutOfRange {
        var: usize,
        check: usize,
        num_vars: usize,
        num_checks: usize,
    },
    #[error("duplicate edge ({var}, {check})")]
    DuplicateEdge { var: usize, check: usize },
}

/// Which side of the bipartition a node sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Variable,
    Check,
}

/// Where a node came from in a tree-based construction: its layer, the
/// child-branch path from the root, and (for two-tree constructions) whether
/// it belongs to the mirrored copy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeLabel {
    pub side: Side,
    pub mirror: bool,
    pub layer: u32,
    pub path: Vec<u32>,
}

impl std::fmt::Display for NodeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let side = match self.side {
            Side::Variable => "v",
            Side::Check => "c",
        };
        let mirror = if self.mirror { "'" } else { "" };
        write!(f, "{side}{mirror}:L{}:[", self.layer)?;
        for (i, p) in self.path.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

/// The code families this crate can build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Type1A,
    Type1B,
    Type2L3,
    Type2L3Eg,
    Type2L4,
    RandomRegular,
}

impl Family {
    /// The name used on the command line and in sidecar metadata.
    pub fn name(&self) -> &'static str {
        match self {
            Family::Type1A => "type1a",
            Family::Type1B => "type1b",
            Family::Type2L3 => "type2-l3",
            Family::Type2L3Eg => "type2-l3-eg",
            Family::Type2L4 => "type2-l4",
            Family::RandomRegular => "random",
        }
    }

    pub fn parse(name: &str) -> Option<Family> {
        Some(match name {
            "type1a" => Family::Type1A,
            "type1b" => Family::Type1B,
            "type2-l3" => Family::Type2L3,
            "type2-l3-eg" => Family::Type2L3Eg,
            "type2-l4" => Family::Type2L4,
            "random" => Family::RandomRegular,
            _ => return None,
        })
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Construction parameters recorded on a built graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeMeta {
    pub family: Family,
    pub p: Option<u32>,
    pub s: Option<u32>,
    /// Girth guaranteed by the construction, when there is such a guarantee.
    pub girth_by_design: Option<u32>,
    /// True for parameter choices the construction supports only formally
    /// (e.g. collapsed cases at q = 2).
    pub degenerate: bool,
    pub seed: Option<u64>,
}

/// Girth of a graph; `Infinite` means the graph is a forest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl std::fmt::Display for Girth {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => write!(f, "infinite"),
        }
    }
}

/// Degree histograms for the two sides, keyed by degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeProfile {
    pub var: BTreeMap<usize, usize>,
    pub check: BTreeMap<usize, usize>,
}

impl DegreeProfile {
    /// True when every variable has degree dv and every check degree dc.
    pub fn is_regular(&self, dv: usize, dc: usize) -> bool {
        self.var.keys().all(|&d| d == dv) && self.check.keys().all(|&d| d == dc)
    }

    pub fn min_var_degree(&self) -> Option<usize> {
        self.var.keys().next().copied()
    }
}

/// A bipartite graph of variable and check nodes with sorted adjacency.
#[derive(Debug, Clone)]
pub struct TannerGraph {
    var_adj: Vec<Vec<usize>>,
    check_adj: Vec<Vec<usize>>,
    var_labels: Option<Vec<NodeLabel>>,
    check_labels: Option<Vec<NodeLabel>>,
    meta: Option<CodeMeta>,
}

impl TannerGraph {
    /// Builds a graph from (variable, check) edge pairs, rejecting
    /// out-of-range endpoints and duplicate edges.
    pub fn from_edges(
        num_vars: usize,
        num_checks: usize,
        edges: &[(usize, usize)],
    ) -> Result<Self, GraphError> {
        let mut var_adj = vec![Vec::new(); num_vars];
        let mut check_adj = vec![Vec::new(); num_checks];
        for &(v, c) in edges {
            if v >= num_vars || c >= num_checks {
                return Err(GraphError::EdgeOutOfRange {
                    var: v,
                    check: c,
                    num_vars,
                    num_checks,
                });
            }
            var_adj[v].push(c);
            check_adj[c].push(v);
        }
        for (v, adj) in var_adj.iter_mut().enumerate() {
            adj.sort_unstable();
            if let Some(w) = adj.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge { var: v, check: w[0] });
            }
        }
        for adj in check_adj.iter_mut() {
            adj.sort_unstable();
        }
        Ok(TannerGraph {
            var_adj,
            check_adj,
            var_labels: None,
            check_labels: None,
            meta: None,
        })
    }

    pub(crate) fn attach_labels(
        &mut self,
        var_labels: Vec<NodeLabel>,
        check_labels: Vec<NodeLabel>,
    ) {
        assert_eq!(var_labels.len(), self.num_vars());
        assert_eq!(check_labels.len(), self.num_checks());
        self.var_labels = Some(var_labels);
        self.check_labels = Some(check_labels);
    }

    pub(crate) fn set_meta(&mut self, meta: CodeMeta) {
        self.meta = Some(meta);
    }

    /// Reconstructs the graph of a parity-check matrix (rows become checks).
    pub fn from_check_matrix(h: &BinaryMatrix) -> Self {
        TannerGraph {
            var_adj: h.col_supports(),
            check_adj: h.row_supports().to_vec(),
            var_labels: None,
            check_labels: None,
            meta: None,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.var_adj.len()
    }

    pub fn num_checks(&self) -> usize {
        self.check_adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.var_adj.iter().map(Vec::len).sum()
    }

    pub fn var_neighbors(&self, v: usize) -> &[usize] {
        &self.var_adj[v]
    }

    pub fn check_neighbors(&self, c: usize) -> &[usize] {
        &self.check_adj[c]
    }

    pub fn var_labels(&self) -> Option<&[NodeLabel]> {
        self.var_labels.as_deref()
    }

    pub fn check_labels(&self) -> Option<&[NodeLabel]> {
        self.check_labels.as_deref()
    }

    pub fn meta(&self) -> Option<&CodeMeta> {
        self.meta.as_ref()
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        let mut var = BTreeMap::new();
        for adj in &self.var_adj {
            *var.entry(adj.len()).or_insert(0) += 1;
        }
        let mut check = BTreeMap::new();
        for adj in &self.check_adj {
            *check.entry(adj.len()).or_insert(0) += 1;
        }
        DegreeProfile { var, check }
    }

    /// The parity-check matrix: one row per check, one column per variable.
    pub fn to_check_matrix(&self) -> BinaryMatrix {
        BinaryMatrix::new(
            self.num_checks(),
            self.num_vars(),
            self.check_adj.clone(),
        )
        .expect("adjacency is sorted and duplicate-free")
    }

    /// Exact girth by truncated BFS from every variable node.
    ///
    /// From a root, the first edge that closes between two visited nodes
    /// witnesses a cycle of length dist(x) + dist(y) + 1; minimising over
    /// such witnesses and over all roots yields the girth, since both
    /// endpoints' paths to a root on a shortest cycle are disjoint. Every
    /// cycle alternates sides, so variable roots cover all cycles. Searches
    /// from different roots run in parallel and prune against the best cycle
    /// seen so far; the result is a pure minimum, independent of schedule.
    pub fn girth(&self) -> Girth {
        let n = self.num_vars();
        if self.num_edges() == 0 {
            return Girth::Infinite;
        }
        let best = AtomicUsize::new(usize::MAX);
        (0..n).into_par_iter().for_each(|root| {
            self.shortest_cycle_from(root, &best);
        });
        match best.load(Ordering::Relaxed) {
            usize::MAX => Girth::Infinite,
            g => Girth::Finite(g),
        }
    }

    /// One truncated BFS; nodes are encoded vars first, then checks.
    fn shortest_cycle_from(&self, root: usize, best: &AtomicUsize) {
        let n = self.num_vars();
        let total = n + self.num_checks();
        let mut dist = vec![usize::MAX; total];
        let mut parent = vec![usize::MAX; total];
        let mut queue = std::collections::VecDeque::new();
        dist[root] = 0;
        queue.push_back(root);
        let mut local_best = best.load(Ordering::Relaxed);
        while let Some(x) = queue.pop_front() {
            if 2 * dist[x] >= local_best {
                break;
            }
            let neighbors: &[usize] = if x < n {
                &self.var_adj[x]
            } else {
                &self.check_adj[x - n]
            };
            for &raw in neighbors {
                let y = if x < n { raw + n } else { raw };
                if y == parent[x] {
                    continue;
                }
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    queue.push_back(y);
                } else {
                    let cycle = dist[x] + dist[y] + 1;
                    if cycle < local_best {
                        local_best = cycle;
                        best.fetch_min(cycle, Ordering::Relaxed);
                    }
                }
            }
        }
    }
}
